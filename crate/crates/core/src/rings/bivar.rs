//! Polynomials in `x` over `Z[v, v^-1]`, and the annihilator family
//! `prod (x - v^(2i))` with its splitting at `x = 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::LaurentPoly;
use crate::error::{Error, Result};

/// An element of `Z[v, v^-1][x]`; `xcoeffs[k]` is the coefficient of `x^k`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BivarPoly {
    xcoeffs: Vec<LaurentPoly>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(LaurentPoly::one())
    }

    pub fn x() -> Self {
        Self::new(vec![LaurentPoly::zero(), LaurentPoly::one()])
    }

    pub fn constant(c: LaurentPoly) -> Self {
        Self::new(vec![c])
    }

    pub fn new(mut xcoeffs: Vec<LaurentPoly>) -> Self {
        while xcoeffs.last().is_some_and(|c| c.is_zero()) {
            xcoeffs.pop();
        }
        Self { xcoeffs }
    }

    /// `x - c`
    pub fn linear(c: LaurentPoly) -> Self {
        Self::new(vec![-c, LaurentPoly::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.xcoeffs.is_empty()
    }

    /// Degree in `x`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.xcoeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.xcoeffs
    }

    pub fn coeff(&self, k: usize) -> LaurentPoly {
        self.xcoeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&LaurentPoly> {
        self.xcoeffs.last()
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        Self::new(self.xcoeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift_x(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![LaurentPoly::zero(); k];
        v.extend(self.xcoeffs.iter().cloned());
        Self::new(v)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Evaluate at `x = c`.
    pub fn eval(&self, c: &LaurentPoly) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for a in self.xcoeffs.iter().rev() {
            acc = &(&acc * c) + a;
        }
        acc
    }

    /// Substitute a polynomial for `x`.
    pub fn compose(&self, g: &BivarPoly) -> BivarPoly {
        let mut acc = BivarPoly::zero();
        for a in self.xcoeffs.iter().rev() {
            acc = &(&acc * g) + &BivarPoly::constant(a.clone());
        }
        acc
    }

    /// Division with remainder by a divisor whose leading `x`-coefficient is
    /// a unit `+-v^k`: returns `(q, r)` with `self = q*g + r`, `deg r < deg g`.
    pub fn divmod_x(&self, g: &BivarPoly) -> Result<(BivarPoly, BivarPoly)> {
        let lead = g.leading().ok_or_else(|| Error::NonUnitLeadingCoefficient("0".into()))?;
        if !lead.is_unit() {
            return Err(Error::NonUnitLeadingCoefficient(lead.to_string()));
        }
        let inv = LaurentPoly::one().div_exact(lead).expect("units are invertible");
        let dg = g.xcoeffs.len() - 1;
        let mut rem = self.xcoeffs.clone();
        if rem.len() <= dg {
            return Ok((BivarPoly::zero(), self.clone()));
        }
        let mut q = vec![LaurentPoly::zero(); rem.len() - dg];
        for i in (0..q.len()).rev() {
            let top = &rem[i + dg];
            if top.is_zero() {
                continue;
            }
            let c = top * &inv;
            for (j, gj) in g.xcoeffs.iter().enumerate() {
                rem[i + j] -= &(&c * gj);
            }
            q[i] = c;
        }
        rem.truncate(dg);
        Ok((BivarPoly::new(q), BivarPoly::new(rem)))
    }

    /// `true` iff `self` divides `f` exactly in `Z[v, v^-1][x]`. Only defined
    /// for divisors with unit leading coefficient, which covers every monic
    /// polynomial produced here.
    pub fn divides(&self, f: &BivarPoly) -> Result<bool> {
        Ok(f.divmod_x(self)?.1.is_zero())
    }
}

/// `prod_{i=0}^{m} (x - v^(2i))`; with `tilde` the `i = 0` factor is dropped.
pub fn annihilator_family(m: u32, tilde: bool) -> BivarPoly {
    let start = if tilde { 1 } else { 0 };
    (start..=m).fold(BivarPoly::one(), |acc, i| {
        &acc * &BivarPoly::linear(LaurentPoly::v_pow(2 * i as i64))
    })
}

/// `prod_{i=1}^{m} (1 - v^(2i))`, i.e. the tilde family at `x = 1`.
pub fn p_of_v(m: u32) -> LaurentPoly {
    (1..=m).fold(LaurentPoly::one(), |acc, i| &acc * &LaurentPoly::one_minus_v2i(i))
}

/// Split `ptilde` at `x = 1`: returns `(pv, r)` with `pv = ptilde(1)` and
/// `pv = ptilde(x) + r(x) * (x - 1)` exactly.
pub fn split_at_one(ptilde: &BivarPoly) -> (LaurentPoly, BivarPoly) {
    let pv = ptilde.eval(&LaurentPoly::one());
    let diff = ptilde - &BivarPoly::constant(pv.clone());
    let (q, rem) = diff
        .divmod_x(&BivarPoly::linear(LaurentPoly::one()))
        .expect("x - 1 is monic");
    debug_assert!(rem.is_zero());
    (pv, -q)
}

impl Add<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let n = self.xcoeffs.len().max(rhs.xcoeffs.len());
        BivarPoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        let n = self.xcoeffs.len().max(rhs.xcoeffs.len());
        BivarPoly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        if self.is_zero() || rhs.is_zero() {
            return BivarPoly::zero();
        }
        let mut out = vec![LaurentPoly::zero(); self.xcoeffs.len() + rhs.xcoeffs.len() - 1];
        for (i, a) in self.xcoeffs.iter().enumerate() {
            for (j, b) in rhs.xcoeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        BivarPoly::new(out)
    }
}

impl Neg for BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly::new(self.xcoeffs.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.xcoeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarPoly({self})")
    }
}
