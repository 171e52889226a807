//! Torsion points of the dual torus as finite models of rank-one character
//! sheaves: Weyl action, orbits, the pairing-kernel subsystems and their
//! Poincare polynomials.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coxeter::{Elem, Subsystem, WeylGroup};
use crate::error::{Error, Result};
use crate::rings::LaurentPoly;

/// A point of `(Q/Z)^rank` in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterPoint {
    lambda: Vec<Rational64>,
}

fn frac(x: Rational64) -> Rational64 {
    x - x.floor()
}

impl CharacterPoint {
    pub fn new(lambda: Vec<Rational64>) -> Self {
        Self { lambda: lambda.into_iter().map(frac).collect() }
    }

    pub fn zero(rank: usize) -> Self {
        Self { lambda: vec![Rational64::zero(); rank] }
    }

    pub fn coords(&self) -> &[Rational64] {
        &self.lambda
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> i64 {
        self.lambda.iter().fold(1, |acc, x| acc.lcm(x.denom()))
    }

    /// `sum c_i lambda_i mod 1` for a coroot `sum c_i alpha_i^vee`.
    pub fn pairing(&self, coroot: &[i64]) -> Rational64 {
        frac(self.lambda.iter().zip(coroot).map(|(l, &c)| l * c).sum())
    }

    /// `s_i lambda`, with `(s_i lambda)_k = lambda_k - lambda_i a_{ki}`.
    pub fn reflect(&self, g: &WeylGroup, i: usize) -> Self {
        let a = g.cartan_matrix();
        let li = self.lambda[i];
        Self::new(self.lambda.iter().enumerate().map(|(k, &lk)| lk - li * a[k][i]).collect())
    }

    pub fn act(&self, g: &WeylGroup, w: Elem) -> Self {
        g.word(w).iter().rev().fold(self.clone(), |p, &s| p.reflect(g, s as usize))
    }

    /// Positive roots (indices) whose coroot pairs to zero with this point.
    pub fn zero_roots(&self, g: &WeylGroup) -> Vec<usize> {
        g.positive_coroots()
            .iter()
            .enumerate()
            .filter(|(_, c)| self.pairing(c).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// `W_L°`, the reflection subgroup of the pairing kernel.
    pub fn wl_subsystem(&self, g: &WeylGroup) -> Subsystem {
        g.reflection_subgroup(&self.zero_roots(g))
    }
}

impl fmt::Display for CharacterPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambda.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for CharacterPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for CharacterPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lambda = s
            .split(',')
            .map(|p| p.trim().parse::<Rational64>().map_err(|e| Error::Parse(format!("{p:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(lambda))
    }
}

impl Serialize for CharacterPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CharacterPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A full W-orbit with per-point stabilizer data.
#[derive(Clone, Debug)]
pub struct OrbitData {
    /// sorted; the representative (least point) comes first
    pub points: Vec<CharacterPoint>,
    /// `W_L°` for each point
    pub stabilizers: Vec<Subsystem>,
    /// order of the full group stabilizer of a point
    pub group_stabilizer_order: usize,
    index: HashMap<CharacterPoint, usize>,
    /// `reflect[s][i]` = index of `s L_i`
    reflect: Vec<Vec<usize>>,
}

impl OrbitData {
    pub fn new(g: &WeylGroup, lam: &CharacterPoint) -> Self {
        let mut seen: BTreeSet<CharacterPoint> = BTreeSet::from([lam.clone()]);
        let mut frontier = vec![lam.clone()];
        while let Some(p) = frontier.pop() {
            for s in 0..g.rank() {
                let q = p.reflect(g, s);
                if seen.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        let points: Vec<CharacterPoint> = seen.into_iter().collect();
        let index: HashMap<CharacterPoint, usize> =
            points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let reflect = (0..g.rank())
            .map(|s| points.iter().map(|p| index[&p.reflect(g, s)]).collect())
            .collect();
        let stabilizers = points.iter().map(|p| p.wl_subsystem(g)).collect();
        let group_stabilizer_order = g.order() / points.len();
        Self { points, stabilizers, group_stabilizer_order, index, reflect }
    }

    pub fn representative(&self) -> &CharacterPoint {
        &self.points[0]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &CharacterPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index of `s L_i`.
    pub fn reflect_index(&self, s: usize, i: usize) -> usize {
        self.reflect[s][i]
    }

    /// Index of `w L_i`.
    pub fn act_index(&self, g: &WeylGroup, w: Elem, i: usize) -> usize {
        g.word(w).iter().rev().fold(i, |j, &s| self.reflect[s as usize][j])
    }

    pub fn w0l(&self, i: usize) -> Elem {
        self.stabilizers[i].longest
    }

    pub fn is_trivial(&self) -> bool {
        self.points.len() == 1 && self.points[0].lambda.iter().all(|x| x.is_zero())
    }
}

/// All points with least denominator at most `nmax`.
pub fn points_up_to(rank: usize, nmax: i64) -> Vec<CharacterPoint> {
    let mut out = BTreeSet::new();
    for d in 1..=nmax {
        let mut idx = vec![0i64; rank];
        loop {
            let p = CharacterPoint::new(idx.iter().map(|&k| Rational64::new(k, d)).collect());
            if p.denominator() == d {
                out.insert(p);
            }
            // odometer
            let mut k = 0;
            while k < rank {
                idx[k] += 1;
                if idx[k] < d {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == rank {
                break;
            }
        }
    }
    out.into_iter().collect()
}

/// All orbits of points with least denominator at most `nmax`, ordered by
/// representative (the trivial orbit first).
pub fn orbits_up_to(g: &WeylGroup, nmax: i64) -> Vec<OrbitData> {
    let mut covered: BTreeSet<CharacterPoint> = BTreeSet::new();
    let mut orbits = Vec::new();
    for p in points_up_to(g.rank(), nmax) {
        if covered.contains(&p) {
            continue;
        }
        let o = OrbitData::new(g, &p);
        covered.extend(o.points.iter().cloned());
        orbits.push(o);
    }
    orbits
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    NegativeV2,
    PositiveV2,
}

/// `sum_{w in W_L°} t^{l_L(w)}` with `t = -v^2` or `t = v^2`, `l_L` the
/// intrinsic length.
pub fn poincare_q(sub: &Subsystem, sign: SignConvention) -> LaurentPoly {
    let c: i64 = match sign {
        SignConvention::NegativeV2 => -1,
        SignConvention::PositiveV2 => 1,
    };
    LaurentPoly::from_terms(sub.elements.iter().map(|&w| {
        let l = sub.intrinsic_length(w).unwrap() as i64;
        (2 * l, c.pow(l as u32))
    }))
}

/// Outcome of factoring a polynomial into divisors of `v^(2i) - 1`, `i <= m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChevalleyReport {
    pub success: bool,
    pub m: u32,
    /// each factor with the index `i` of the binomial `v^(2i) - 1` it divides
    pub factors: Vec<(LaurentPoly, u32)>,
    /// what is left once no binomial shares a factor with it
    pub leftover: LaurentPoly,
}

/// Greedily peel `gcd(q, v^(2i) - 1)` for `i = m, ..., 1` until `q` is a
/// unit or no binomial shares a factor with it.
pub fn chevalley_divisibility(q: &LaurentPoly, m: u32) -> ChevalleyReport {
    assert!(!q.is_zero(), "zero polynomial");
    let mut rest = q.clone();
    let mut factors = Vec::new();
    while !rest.is_unit() {
        let mut progress = false;
        for i in (1..=m).rev() {
            let binom = -LaurentPoly::one_minus_v2i(i);
            let g = rest.gcd(&binom);
            if !g.is_one() {
                rest = rest.div_exact(&g).expect("gcd divides");
                factors.push((g, i));
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    ChevalleyReport { success: rest.is_unit(), m, factors, leftover: rest }
}

/// Orbit-wise table entry used by reports.
#[derive(Clone, Debug, Serialize)]
pub struct QPolyRow {
    pub point: CharacterPoint,
    pub wl_type: String,
    pub wl_order: usize,
    pub q_negative_v2: LaurentPoly,
    pub q_positive_v2: LaurentPoly,
}

pub fn qpoly_row(p: &CharacterPoint, sub: &Subsystem) -> QPolyRow {
    QPolyRow {
        point: p.clone(),
        wl_type: sub.type_name.clone(),
        wl_order: sub.order(),
        q_negative_v2: poincare_q(sub, SignConvention::NegativeV2),
        q_positive_v2: poincare_q(sub, SignConvention::PositiveV2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CartanType;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::build(s.parse::<CartanType>().unwrap()).unwrap()
    }

    fn pt(s: &str) -> CharacterPoint {
        s.parse().unwrap()
    }

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn pairings_a2() {
        let g = group("A2");
        let p = pt("1/2,0");
        let vals: Vec<String> = g.positive_coroots().iter().map(|c| p.pairing(c).to_string()).collect();
        assert_eq!(vals, ["1/2", "0", "1/2"]);
        assert!(g.positive_coroots().iter().all(|c| pt("0,0").pairing(c).is_zero()));
    }

    #[test]
    fn subsystems_a2() {
        let g = group("A2");
        assert_eq!(pt("0,0").wl_subsystem(&g).order(), 6);
        let sub = pt("1/2,0").wl_subsystem(&g);
        assert_eq!(sub.type_name, "A1");
        assert_eq!(sub.simple_roots, vec![1]);
        assert_eq!(pt("1/3,1/3").wl_subsystem(&g).order(), 1);
    }

    #[test]
    fn orbits() {
        let g = group("A1");
        let o = OrbitData::new(&g, &pt("1/2"));
        assert_eq!(o.len(), 1);
        assert_eq!(o.stabilizers[0].order(), 1);
        assert_eq!(o.group_stabilizer_order, 2);
        let g = group("A2");
        assert_eq!(OrbitData::new(&g, &pt("1/2,0")).len(), 3);
        assert!(OrbitData::new(&g, &pt("0,0")).is_trivial());
    }

    #[test]
    fn orbit_enumeration_covers_points() {
        let g = group("A2");
        let orbits = orbits_up_to(&g, 6);
        let total: usize = orbits.iter().map(|o| o.len()).sum();
        // Jordan totient J_2 summed over d <= 6
        assert_eq!(total, 1 + 3 + 8 + 12 + 24 + 24);
        assert!(orbits[0].is_trivial());
        for o in &orbits {
            assert_eq!(o.len() * o.group_stabilizer_order, g.order());
        }
    }

    #[test]
    fn poincare_polynomials() {
        let g = group("A1");
        assert_eq!(poincare_q(&pt("0").wl_subsystem(&g), SignConvention::NegativeV2), lp("1 - v^2"));
        assert_eq!(poincare_q(&pt("1/2").wl_subsystem(&g), SignConvention::NegativeV2), lp("1"));
        let g = group("A2");
        let q = poincare_q(&pt("0,0").wl_subsystem(&g), SignConvention::PositiveV2);
        assert_eq!(q, &lp("1 + v^2") * &lp("1 + v^2 + v^4"));
    }

    #[test]
    fn chevalley_examples() {
        let r = chevalley_divisibility(&lp("1 - v^2"), 1);
        assert!(r.success);
        let r = chevalley_divisibility(&(&lp("1 + v^2") * &lp("1 + v^2 + v^4")), 3);
        assert!(r.success);
        assert_eq!(r.factors, vec![(lp("1 + v^2 + v^4"), 3), (lp("1 + v^2"), 2)]);
        let r = chevalley_divisibility(&lp("1 - v^2 + v^4"), 3);
        assert!(!r.success);
        assert!(chevalley_divisibility(&lp("1 - v^2 + v^4"), 6).success);
    }
}
