//! Localization of `Z[v, v^-1]` at the factors `1 - v^(2i)`, plus
//! specialization of Laurent polynomials at `v = sqrt(q)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{p_of_v, LaurentPoly, RatFunc};
use crate::error::{Error, Result};

/// `numerator / prod_i (1 - v^(2i))^{mult_i}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalizedScalar {
    numerator: LaurentPoly,
    denominator: BTreeMap<u32, u32>,
}

impl LocalizedScalar {
    pub fn new(numerator: LaurentPoly, denominator: BTreeMap<u32, u32>) -> Result<Self> {
        if denominator.contains_key(&0) {
            return Err(Error::Config("denominator factor index must be >= 1".into()));
        }
        let denominator = denominator.into_iter().filter(|&(_, m)| m > 0).collect();
        Ok(Self { numerator, denominator })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self { numerator: p, denominator: BTreeMap::new() }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &BTreeMap<u32, u32> {
        &self.denominator
    }

    /// Largest factor index in the denominator (0 when trivial).
    pub fn max_index(&self) -> u32 {
        self.denominator.keys().next_back().copied().unwrap_or(0)
    }

    /// Checks the ambient bound `i <= bound` on every denominator key.
    pub fn within_bound(&self, bound: u32) -> bool {
        self.max_index() <= bound
    }

    pub fn denominator_poly(&self) -> LaurentPoly {
        self.denominator
            .iter()
            .fold(LaurentPoly::one(), |acc, (&i, &m)| &acc * &LaurentPoly::one_minus_v2i(i).pow(m))
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        RatFunc::new(self.numerator.clone(), self.denominator_poly())
    }

    /// Cancel denominator factors against the numerator.
    ///
    /// A factor `1 - v^(2i)` is removed when it divides the numerator, and
    /// otherwise shrunk to `1 - v^(2j)` for the least proper divisor `j | i`
    /// whose cofactor divides the numerator. Repeats to a fixed point.
    pub fn reduce(&self) -> Self {
        if self.numerator.is_zero() {
            return Self::from_poly(LaurentPoly::zero());
        }
        let mut num = self.numerator.clone();
        let mut den = self.denominator.clone();
        loop {
            let mut changed = false;
            let keys: Vec<u32> = den.keys().rev().copied().collect();
            for i in keys {
                while den.get(&i).copied().unwrap_or(0) > 0 {
                    let full = LaurentPoly::one_minus_v2i(i);
                    if let Some(q) = num.div_exact(&full) {
                        num = q;
                        dec(&mut den, i);
                        changed = true;
                        continue;
                    }
                    let shrink = (1..i).filter(|j| i % j == 0).find_map(|j| {
                        let cof = full.div_exact(&LaurentPoly::one_minus_v2i(j)).unwrap();
                        num.div_exact(&cof).map(|q| (j, q))
                    });
                    match shrink {
                        Some((j, q)) => {
                            num = q;
                            dec(&mut den, i);
                            *den.entry(j).or_insert(0) += 1;
                            changed = true;
                        }
                        None => break,
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Self { numerator: num, denominator: den }
    }

    /// Express a reduced fraction with denominator dividing a power of
    /// `prod_{i<=m} (1 - v^(2i))`; `None` if it has no such representation
    /// within `rmax` powers.
    pub fn from_ratfunc(x: &RatFunc, m: u32, rmax: u32) -> Option<Self> {
        let d = x.denom();
        let r = divides_p_power(d, m, rmax)?;
        let pr = p_of_v(m).pow(r);
        let cof = pr.div_exact(d).expect("d divides p^r");
        let den = (1..=m).map(|i| (i, r)).collect();
        Some(Self { numerator: x.numer() * &cof, denominator: den }.reduce())
    }
}

fn dec(den: &mut BTreeMap<u32, u32>, i: u32) {
    let e = den.get_mut(&i).unwrap();
    *e -= 1;
    if *e == 0 {
        den.remove(&i);
    }
}

impl fmt::Display for LocalizedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() {
            return write!(f, "{}", self.numerator);
        }
        write!(f, "({})/(", self.numerator)?;
        for (n, (i, m)) in self.denominator.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if *m == 1 {
                write!(f, "(1 - v^{})", 2 * i)?;
            } else {
                write!(f, "(1 - v^{})^{m}", 2 * i)?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for LocalizedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalizedScalar({self})")
    }
}

/// Least `r <= rmax` such that `d` divides `(prod_{i=1}^{m} (1 - v^(2i)))^r`.
/// Units give `Some(0)`.
pub fn divides_p_power(d: &LaurentPoly, m: u32, rmax: u32) -> Option<u32> {
    assert!(!d.is_zero(), "zero divisor");
    if d.is_unit() {
        return Some(0);
    }
    let p = p_of_v(m);
    let mut rest = d.clone();
    // peel off gcd(rest, p) once per power of p
    for r in 1..=rmax {
        let g = rest.gcd(&p);
        if g.is_one() {
            return None;
        }
        rest = rest.div_exact(&g).expect("gcd divides");
        if rest.is_unit() {
            return Some(r);
        }
    }
    None
}

/// The exact value `a + b*sqrt(q)` of a Laurent polynomial at `v = sqrt(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtQValue {
    pub q: u64,
    #[serde(with = "rational_string")]
    pub rational_part: BigRational,
    #[serde(with = "rational_string")]
    pub sqrt_part: BigRational,
    pub nonzero: bool,
}

impl fmt::Display for SqrtQValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt_part.is_zero() {
            write!(f, "{}", self.rational_part)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.rational_part, self.sqrt_part, self.q)
        }
    }
}

mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Evaluate at `v = q^(1/2)` exactly, in `Q(sqrt(q))`.
pub fn specialize_sqrt_q(p: &LaurentPoly, q: u64) -> Result<SqrtQValue> {
    if q < 2 {
        return Err(Error::Config(format!("q must be >= 2, got {q}")));
    }
    let qb = BigInt::from(q);
    let root = qb.sqrt();
    let perfect = &root * &root == qb;
    let qr = BigRational::from_integer(qb.clone());
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for (e, c) in p.terms() {
        let half = e.div_euclid(2);
        let odd = e.rem_euclid(2) == 1;
        let base = pow_i(&qr, half) * BigRational::from_integer(c.clone());
        if odd {
            if perfect {
                a += base * BigRational::from_integer(root.clone());
            } else {
                b += base;
            }
        } else {
            a += base;
        }
    }
    let nonzero = !(a.is_zero() && b.is_zero());
    Ok(SqrtQValue { q, rational_part: a, sqrt_part: b, nonzero })
}

fn pow_i(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    (0..e.unsigned_abs()).fold(BigRational::one(), |acc, _| acc * &base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn ls(n: &str, den: &[(u32, u32)]) -> LocalizedScalar {
        LocalizedScalar::new(lp(n), den.iter().copied().collect()).unwrap()
    }

    #[test]
    fn exact_cancellation() {
        let x = ls("1 - 2*v^2 + v^4", &[(1, 1)]).reduce();
        assert_eq!(x, ls("1 - v^2", &[]));
    }

    #[test]
    fn partial_cancellation_shrinks_factor() {
        let x = ls("1 + v^2", &[(2, 1)]).reduce();
        assert_eq!(x, ls("1", &[(1, 1)]));
    }

    #[test]
    fn zero_numerator() {
        assert_eq!(ls("0", &[(1, 1)]).reduce(), ls("0", &[]));
    }

    #[test]
    fn reduce_is_idempotent_and_value_preserving() {
        let x = ls("1 + v^2 + v^4", &[(3, 2), (1, 1)]);
        let r = x.reduce();
        assert_eq!(r.reduce(), r);
        assert_eq!(r.to_ratfunc(), x.to_ratfunc());
    }

    #[test]
    fn p_power_divisibility() {
        assert_eq!(divides_p_power(&lp("1 - v^2"), 1, 5), Some(1));
        assert_eq!(divides_p_power(&lp("1 - v^2").pow(3), 1, 5), Some(3));
        assert_eq!(divides_p_power(&lp("1 + v + v^2"), 1, 5), None);
        assert_eq!(divides_p_power(&lp("-v^3"), 1, 5), Some(0));
        // 1 + v + v^2 divides 1 - v^6
        assert_eq!(divides_p_power(&lp("1 + v + v^2"), 3, 5), Some(1));
    }

    #[test]
    fn specialization_values() {
        let v = specialize_sqrt_q(&lp("1 - v^2"), 4).unwrap();
        assert_eq!(v.rational_part, BigRational::from_integer((-3).into()));
        assert!(v.nonzero);
        let v = specialize_sqrt_q(&lp("1 - v^2"), 2).unwrap();
        assert_eq!(v.rational_part, BigRational::from_integer((-1).into()));
        let v = specialize_sqrt_q(&p_of_v(3), 2).unwrap();
        assert_eq!(v.rational_part, BigRational::from_integer((-21).into()));
        assert!(v.sqrt_part.is_zero());
    }

    #[test]
    fn odd_powers_land_in_sqrt_part() {
        let v = specialize_sqrt_q(&lp("v + v^-1"), 2).unwrap();
        // sqrt2 + 1/sqrt2 = (3/2) sqrt2
        assert!(v.rational_part.is_zero());
        assert_eq!(v.sqrt_part, BigRational::new(3.into(), 2.into()));
        let v = specialize_sqrt_q(&lp("v"), 9).unwrap();
        assert_eq!(v.rational_part, BigRational::from_integer(3.into()));
        assert!(specialize_sqrt_q(&lp("v"), 1).is_err());
    }
}
