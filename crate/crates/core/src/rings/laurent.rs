//! Laurent polynomials in `v` with arbitrary-precision integer coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An element of `Z[v, v^-1]`.
///
/// Stored densely from the lowest nonzero exponent upward. Both the first and
/// the last stored coefficient are nonzero, so equal polynomials have equal
/// representations and the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `v`
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial<C: Into<BigInt>>(c: C, exp: i64) -> Self {
        Self::from_dense(exp, vec![c.into()])
    }

    /// `v^exp`
    pub fn v_pow(exp: i64) -> Self {
        Self::monomial(1, exp)
    }

    /// `1 - v^(2i)`, the building block of the localizing set.
    pub fn one_minus_v2i(i: u32) -> Self {
        Self::from_terms([(0, BigInt::one()), (2 * i as i64, -BigInt::one())])
    }

    pub fn from_dense(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { low, coeffs };
        p.trim();
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c.into();
        }
        map.retain(|_, c| !c.is_zero());
        let Some((&lo, _)) = map.first_key_value() else {
            return Self::zero();
        };
        let hi = *map.last_key_value().unwrap().0;
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        Self { low: lo, coeffs }
    }

    /// Integer coefficients `c_0 + c_1 v + ...` given as small integers.
    pub fn from_coeffs(low: i64, coeffs: &[i64]) -> Self {
        Self::from_dense(low, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
            return;
        }
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Units of `Z[v, v^-1]` are exactly `+-v^k`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].abs().is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Lowest exponent with a nonzero coefficient (`None` for zero).
    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        if exp < self.low {
            return BigInt::zero();
        }
        self.coeffs.get((exp - self.low) as usize).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn trailing_coeff(&self) -> Option<&BigInt> {
        self.coeffs.first()
    }

    /// Nonzero terms `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale<C: Into<BigInt>>(&self, c: C) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Self { low: self.low, coeffs: self.coeffs.iter().map(|x| x * &c).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        match self.max_exp() {
            None => Self::zero(),
            Some(hi) => Self { low: -hi, coeffs: self.coeffs.iter().rev().cloned().collect() },
        }
    }

    /// Substitute `v -> v^k` for `k != 0`.
    pub fn subs_power(&self, k: i64) -> Self {
        assert!(k != 0, "substitution v -> v^0 is not a ring map on Laurent polynomials");
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c.clone())))
    }

    /// Exact value at an integer point `v = x` (`x != 0` when negative
    /// exponents occur); returns `None` if the value is not an integer.
    pub fn eval_int(&self, x: &BigInt) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        let r = num_rational::BigRational::from_integer(x.clone());
        let val = self.eval_rational(&r)?;
        val.is_integer().then(|| val.to_integer())
    }

    pub fn eval_rational(&self, x: &num_rational::BigRational) -> Option<num_rational::BigRational> {
        use num_rational::BigRational;
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if x.is_zero() && self.low < 0 {
            return None;
        }
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        Some(acc * pow_rational(x, self.low))
    }

    /// Content: gcd of all coefficients (nonnegative; zero for zero).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn div_scalar_exact(&self, c: &BigInt) -> Option<Self> {
        if c.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            let (q, r) = x.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self { low: self.low, coeffs: out })
    }

    /// Exact division in `Z[v, v^-1]`; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.is_monomial() {
            let c = &d.coeffs[0];
            return self.div_scalar_exact(c).map(|q| q.shift(-d.low));
        }
        let (q, r) = poly_divrem_z(&self.coeffs, &d.coeffs)?;
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_dense(self.low - d.low, q))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Normalize an element up to units: strip the `v`-power and make the
    /// leading coefficient positive. Two polynomials are associates iff their
    /// normalizations agree.
    pub fn unit_normal(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut p = Self { low: 0, coeffs: self.coeffs.clone() };
        if p.coeffs.last().unwrap().is_negative() {
            p = -p;
        }
        p
    }

    /// Polynomial gcd in `Z[v, v^-1]`, normalized with `unit_normal`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.unit_normal();
        }
        if other.is_zero() {
            return self.unit_normal();
        }
        let g = poly_gcd_z(&self.coeffs, &other.coeffs);
        Self::from_dense(0, g).unit_normal()
    }

    pub fn to_i64_terms(&self) -> Option<Vec<(i64, i64)>> {
        self.terms().map(|(e, c)| c.to_i64().map(|c| (e, c))).collect()
    }
}

fn pow_rational(x: &num_rational::BigRational, e: i64) -> num_rational::BigRational {
    use num_rational::BigRational;
    let base = if e < 0 { x.recip() } else { x.clone() };
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Long division of dense polynomials over `Z` (index = degree). Returns
/// `None` when a leading coefficient fails to divide, which certifies that
/// the division is not exact over `Z`.
pub(crate) fn poly_divrem_z(a: &[BigInt], b: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let mut rem: Vec<BigInt> = a.to_vec();
    if a.len() < b.len() {
        return Some((vec![], rem));
    }
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let top = &rem[i + b.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (c, r) = top.div_rem(lb);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    rem.truncate(b.len() - 1);
    Some((q, rem))
}

fn trim_dense(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn content_dense(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive_part(v: &[BigInt]) -> Vec<BigInt> {
    let c = content_dense(v);
    if c.is_zero() || c.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of `a` by `b` over `Z`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap().clone();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x *= &lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        trim_dense(&mut r);
        // keep coefficients small
        let c = content_dense(&r);
        if !c.is_zero() && !c.is_one() {
            for x in r.iter_mut() {
                *x /= &c;
            }
        }
    }
    r
}

/// gcd of two nonzero dense polynomials over `Z`, up to sign.
pub(crate) fn poly_gcd_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    // strip common powers of v; they are units in the Laurent ring
    let strip = |p: &[BigInt]| -> Vec<BigInt> {
        let k = p.iter().take_while(|c| c.is_zero()).count();
        p[k..].to_vec()
    };
    let mut a = strip(a);
    let mut b = strip(b);
    trim_dense(&mut a);
    trim_dense(&mut b);
    let c = content_dense(&a).gcd(&content_dense(&b));
    let mut a = primitive_part(&a);
    let mut b = primitive_part(&b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        if b.len() == 1 {
            a = vec![BigInt::one()];
            break;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive_part(&r);
    }
    let mut g = primitive_part(&a);
    for x in g.iter_mut() {
        *x *= &c;
    }
    g
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        Self::monomial(1, 0)
    }
}

fn add_into(acc: &mut LaurentPoly, rhs: &LaurentPoly, sign: bool) {
    if rhs.is_zero() {
        return;
    }
    if acc.is_zero() {
        *acc = if sign { rhs.clone() } else { -rhs.clone() };
        return;
    }
    let lo = acc.low.min(rhs.low);
    let hi = acc.max_exp().unwrap().max(rhs.max_exp().unwrap());
    if lo < acc.low {
        let pad = (acc.low - lo) as usize;
        let mut v = vec![BigInt::zero(); pad];
        v.append(&mut acc.coeffs);
        acc.coeffs = v;
        acc.low = lo;
    }
    acc.coeffs.resize((hi - lo + 1) as usize, BigInt::zero());
    let off = (rhs.low - lo) as usize;
    for (i, c) in rhs.coeffs.iter().enumerate() {
        if sign {
            acc.coeffs[off + i] += c;
        } else {
            acc.coeffs[off + i] -= c;
        }
    }
    acc.trim();
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        add_into(self, rhs, true);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        add_into(self, rhs, false);
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        add_into(self, &rhs, true);
    }
}

impl SubAssign for LaurentPoly {
    fn sub_assign(&mut self, rhs: LaurentPoly) {
        add_into(self, &rhs, false);
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        LaurentPoly::from_dense(self.low + rhs.low, out)
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl MulAssign<&LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self * rhs;
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total order (by exponent range, then coefficients); used
/// only for deterministic sorting.
impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.low
            .cmp(&other.low)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("v")?,
                (1, false) => write!(f, "{mag}*v")?,
                (_, true) => write!(f, "v^{e}")?,
                (_, false) => write!(f, "{mag}*v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parses the canonical rendering, e.g. `"1 - v^2 + 3*v^-4"`. Whitespace
    /// is insignificant and terms may appear in any order.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid Laurent polynomial: {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms: Vec<(i64, BigInt)> = Vec::new();
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut i = 0;
        let mut pieces = Vec::new();
        while i < bytes.len() {
            let c = bytes[i];
            // a sign splits terms unless it follows '^'
            if (c == b'+' || c == b'-') && i > start && bytes[i - 1] != b'^' {
                pieces.push(&compact[start..i]);
                start = i;
            }
            i += 1;
        }
        pieces.push(&compact[start..]);
        for piece in pieces {
            let (neg, body) = match piece.as_bytes().first() {
                Some(b'-') => (true, &piece[1..]),
                Some(b'+') => (false, &piece[1..]),
                _ => (false, piece),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let (coef, exp) = if let Some(pos) = body.find('v') {
                let coef_str = body[..pos].trim_end_matches('*');
                let coef = if coef_str.is_empty() {
                    BigInt::one()
                } else {
                    coef_str.parse::<BigInt>().map_err(|_| bad())?
                };
                let rest = &body[pos + 1..];
                let exp = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?
                };
                (coef, exp)
            } else {
                (body.parse::<BigInt>().map_err(|_| bad())?, 0)
            };
            terms.push((exp, if neg { -coef } else { coef }));
        }
        Ok(Self::from_terms(terms))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.num_terms()))?;
        for (e, c) in self.terms() {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let map: BTreeMap<String, String> = BTreeMap::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(map.len());
        for (k, c) in map {
            let e: i64 = k.parse().map_err(D::Error::custom)?;
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            terms.push((e, c));
        }
        Ok(Self::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&lp("1 - v^2") * &lp("1 + v^2"), lp("1 - v^4"));
    }

    #[test]
    fn additive_identity() {
        let p = lp("3*v^-2 - v + 7*v^5");
        assert_eq!(&p + &LaurentPoly::zero(), p);
    }

    #[test]
    fn product_for_rank_two_longest_length_three() {
        // (1 - v^2)(1 - v^4)(1 - v^6), expanded by hand:
        // 1 - v^2 - v^4 + v^8 + v^10 - v^12
        let p = &(&lp("1 - v^2") * &lp("1 - v^4")) * &lp("1 - v^6");
        assert_eq!(p, LaurentPoly::from_coeffs(0, &[1, 0, -1, 0, -1, 0, 0, 0, 1, 0, 1, 0, -1]));
    }

    #[test]
    fn rendering_is_ascending() {
        assert_eq!(lp("v^4 + 1 - v^2").to_string(), "1 - v^2 + v^4");
        assert_eq!(lp("-2*v^-3 + v").to_string(), "-2*v^-3 + v");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<LaurentPoly>().is_err());
        assert!("1 + x".parse::<LaurentPoly>().is_err());
        assert!("v^".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn exact_division() {
        let a = lp("1 - v^4");
        assert_eq!(a.div_exact(&lp("1 + v^2")), Some(lp("1 - v^2")));
        assert_eq!(a.div_exact(&lp("1 + v + v^2")), None);
        assert_eq!(lp("2 + 2*v").div_exact(&lp("2")), Some(lp("1 + v")));
        assert_eq!(lp("3 + 2*v").div_exact(&lp("2")), None);
        assert_eq!(lp("v^-3 - v^-1").div_exact(&lp("v - v^3")), Some(lp("v^-4")));
    }

    #[test]
    fn gcd_up_to_units() {
        let a = &lp("1 - v^2") * &lp("1 + v + v^2");
        let b = &lp("1 - v^2") * &lp("2 + v^3");
        assert_eq!(a.gcd(&b), lp("1 - v^2").unit_normal());
        assert_eq!(lp("v^3").gcd(&lp("1 + v")), LaurentPoly::one());
        assert_eq!(lp("6 + 6*v").gcd(&lp("4 + 4*v")), lp("2 + 2*v"));
    }

    #[test]
    fn bar_involution() {
        assert_eq!(lp("v^-1 + 2*v^3").bar(), lp("v + 2*v^-3"));
    }

    #[test]
    fn serde_uses_string_keys() {
        let p = lp("1 - v^2");
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"0":"1","2":"-1"}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
