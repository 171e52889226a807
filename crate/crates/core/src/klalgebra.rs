//! Orbit Hecke algebras `H_o` with idempotents `1_L`, the projections of the
//! generators `a_s`, and the algebra `KL(v)` realized through all of them.
//!
//! An element of `H_o` is stored column by column: column `L` holds the
//! coefficients of `T_w 1_L` for all `w`. Left multiplication preserves
//! columns, and on column `L` it only depends on which simple reflections lie
//! in `W_M°` for the points `M = yL`. Columns with the same such data share
//! their matrices ("kinds").

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charpoints::{orbits_up_to, CharacterPoint, OrbitData};
use crate::coxeter::{Elem, WeylGroup};
use crate::error::{Error, Result};
use crate::hecke::{Convention, HeckeAlgebra};
use crate::rings::linalg::{minimal_polynomial, LMat, LVec};
use crate::rings::{annihilator_family, BivarPoly, LaurentPoly};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().copied())
}

/// `sum c_{w,L} T_w 1_L` in one orbit algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitHeckeElement {
    algebra: u64,
    nw: usize,
    /// index `L * nw + w`
    coeffs: Vec<LaurentPoly>,
}

impl OrbitHeckeElement {
    pub fn coeff(&self, w: Elem, l: usize) -> &LaurentPoly {
        &self.coeffs[l * self.nw + w]
    }

    pub fn column(&self, l: usize) -> &[LaurentPoly] {
        &self.coeffs[l * self.nw..(l + 1) * self.nw]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::OrbitMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(), ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(), ..self.clone() })
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect(), ..self.clone() }
    }
}

/// The orbit Hecke algebra `H_o` in the ly normalization.
pub struct OrbitAlgebra {
    id: u64,
    group: Arc<WeylGroup>,
    orbit: OrbitData,
    /// `act[w][L]` = index of `wL`
    act: Vec<Vec<usize>>,
    /// `in_wl[L][s]` iff `s` lies in `W_L°`
    in_wl: Vec<Vec<bool>>,
}

impl OrbitAlgebra {
    pub fn new(group: Arc<WeylGroup>, orbit: OrbitData) -> Self {
        let act = group.elements().map(|w| (0..orbit.len()).map(|l| orbit.act_index(&group, w, l)).collect()).collect();
        let in_wl = orbit
            .stabilizers
            .iter()
            .map(|sub| (0..group.rank()).map(|s| sub.contains(group.simple(s))).collect())
            .collect();
        Self { id: NEXT_ID.fetch_add(1, Ordering::Relaxed), group, orbit, act, in_wl }
    }

    pub fn orbit(&self) -> &OrbitData {
        &self.orbit
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn num_blocks(&self) -> usize {
        self.orbit.len()
    }

    /// Index of `wL`.
    pub fn act(&self, w: Elem, l: usize) -> usize {
        self.act[w][l]
    }

    pub fn in_wl(&self, l: usize, s: usize) -> bool {
        self.in_wl[l][s]
    }

    pub fn zero(&self) -> OrbitHeckeElement {
        let nw = self.group.order();
        OrbitHeckeElement { algebra: self.id, nw, coeffs: vec![LaurentPoly::zero(); nw * self.orbit.len()] }
    }

    /// `T_w 1_L`
    pub fn basis(&self, w: Elem, l: usize) -> OrbitHeckeElement {
        let mut z = self.zero();
        z.coeffs[l * z.nw + w] = LaurentPoly::one();
        z
    }

    pub fn idempotent(&self, l: usize) -> OrbitHeckeElement {
        self.basis(0, l)
    }

    pub fn one(&self) -> OrbitHeckeElement {
        let mut z = self.zero();
        for l in 0..self.orbit.len() {
            z.coeffs[l * z.nw] = LaurentPoly::one();
        }
        z
    }

    /// The element whose only nonzero column is `l`.
    pub fn from_column(&self, l: usize, col: &[LaurentPoly]) -> OrbitHeckeElement {
        let mut z = self.zero();
        let nw = z.nw;
        z.coeffs[l * nw..(l + 1) * nw].clone_from_slice(col);
        z
    }

    /// `T_s` applied on the left to a vector of column `l`.
    pub fn t_lmul_column(&self, s: usize, l: usize, u: &[LaurentPoly]) -> LVec {
        let g = &*self.group;
        let mut out = vec![LaurentPoly::zero(); u.len()];
        for (y, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sy = g.lmul(s, y);
            if g.length(sy) > g.length(y) {
                out[sy] += c;
            } else if self.in_wl[self.act[sy][l]][s] {
                out[y] += &(c * &lp(&[(0, 1), (2, -1)]));
                out[sy] += &(c * &LaurentPoly::v_pow(2));
            } else {
                out[sy] += c;
            }
        }
        out
    }

    /// `T_x` applied on the left to a vector of column `l`.
    pub fn t_word_column(&self, x: Elem, l: usize, u: &[LaurentPoly]) -> LVec {
        self.group.word(x).iter().rev().fold(u.to_vec(), |acc, &s| self.t_lmul_column(s as usize, l, &acc))
    }

    /// `pi(a_s)` applied on the left to a vector of column `l`: each
    /// `T_y 1_l` is hit by `+-T_s 1_{yl}`, sign `+` iff `s` is in `W_{yl}°`.
    pub fn gen_column(&self, s: usize, l: usize, u: &[LaurentPoly]) -> LVec {
        let signed: LVec = u
            .iter()
            .enumerate()
            .map(|(y, c)| if self.in_wl[self.act[y][l]][s] { c.clone() } else { -c })
            .collect();
        self.t_lmul_column(s, l, &signed)
    }

    pub fn generator_matrix(&self, s: usize, l: usize) -> LMat {
        let n = self.group.order();
        let cols = (0..n)
            .map(|y| {
                let mut e = vec![LaurentPoly::zero(); n];
                e[y] = LaurentPoly::one();
                self.gen_column(s, l, &e)
            })
            .collect();
        LMat::from_columns(n, cols)
    }

    /// `pi(a_s) = sum_L eps_L T_s 1_L`.
    pub fn pi_generator(&self, s: usize) -> OrbitHeckeElement {
        let mut z = self.zero();
        let ts = self.group.simple(s);
        for l in 0..self.orbit.len() {
            z.coeffs[l * z.nw + ts] = if self.in_wl[l][s] { LaurentPoly::one() } else { -LaurentPoly::one() };
        }
        z
    }

    /// Product in `H_o`: `(T_x 1_{L'})(T_y 1_M) = [L' = yM] T_x T_y 1_M`.
    pub fn mul(&self, a: &OrbitHeckeElement, b: &OrbitHeckeElement) -> Result<OrbitHeckeElement> {
        if a.algebra != self.id {
            return Err(Error::OrbitMismatch);
        }
        a.check(b)?;
        let g = &*self.group;
        let nw = g.order();
        let mut out = self.zero();
        for m in 0..self.orbit.len() {
            let col = b.column(m);
            // split the column of b by the left idempotent 1_{yM}
            let mut parts: HashMap<usize, LVec> = HashMap::new();
            for (y, c) in col.iter().enumerate() {
                if !c.is_zero() {
                    parts.entry(self.act[y][m]).or_insert_with(|| vec![LaurentPoly::zero(); nw])[y] = c.clone();
                }
            }
            let mut keys: Vec<usize> = parts.keys().copied().collect();
            keys.sort_unstable();
            for lp_ in keys {
                let acol = a.column(lp_);
                if acol.iter().all(LaurentPoly::is_zero) {
                    continue;
                }
                let u = &parts[&lp_];
                // V_x = T_x u, built along canonical words
                let mut vs: Vec<LVec> = Vec::with_capacity(nw);
                vs.push(u.clone());
                for x in 1..nw {
                    let s = g.word(x)[0] as usize;
                    let prev = &vs[g.lmul(s, x)];
                    let next = self.t_lmul_column(s, m, prev);
                    vs.push(next);
                }
                for (x, c) in acol.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (y, val) in vs[x].iter().enumerate() {
                        if !val.is_zero() {
                            out.coeffs[m * nw + y] += &(c * val);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn render(&self, a: &OrbitHeckeElement) -> String {
        let mut parts = Vec::new();
        for l in 0..self.orbit.len() {
            for (w, c) in a.column(l).iter().enumerate() {
                if !c.is_zero() {
                    parts.push(format!("({c})*T[{}]1[{}]", self.group.word_string(w), self.orbit.points[l]));
                }
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// A generator letter `a_s` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub s: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(s: usize) -> Self {
        Self { s: s as u8, inverse: false }
    }

    pub fn inv(s: usize) -> Self {
        Self { s: s as u8, inverse: true }
    }
}

pub fn render_letters(word: &[Letter]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    word.iter().map(|l| format!("{}{}", l.s + 1, if l.inverse { "'" } else { "" })).collect()
}

/// Matrices shared by all columns of one kind.
pub struct Kind {
    /// `s in W_{yL}°` for `(y, s)`, flattened
    pub signature: Vec<bool>,
    /// a column realizing this kind: (orbit index, point index)
    pub example: (usize, usize),
    pub gens: Vec<LMat>,
    pub gens_inv: Vec<LMat>,
    phi: OnceLock<Vec<LMat>>,
    fulltwist: OnceLock<LMat>,
}

impl Kind {
    /// Matrices of `a_w` for every `w`, along canonical reduced words.
    pub fn phi(&self, g: &WeylGroup) -> &[LMat] {
        self.phi.get_or_init(|| {
            let mut out: Vec<LMat> = Vec::with_capacity(g.order());
            out.push(LMat::identity(g.order()));
            for w in 1..g.order() {
                let s = g.word(w)[0] as usize;
                out.push(self.gens[s].mul(&out[g.lmul(s, w)]));
            }
            out
        })
    }

    /// `F = a_{w0}^2`.
    pub fn fulltwist(&self, g: &WeylGroup) -> &LMat {
        self.fulltwist.get_or_init(|| {
            let p = &self.phi(g)[g.longest()];
            p.mul(p)
        })
    }

    pub fn word_matrix(&self, g: &WeylGroup, word: &[Letter]) -> LMat {
        word.iter().fold(LMat::identity(g.order()), |acc, l| {
            let m = if l.inverse { &self.gens_inv[l.s as usize] } else { &self.gens[l.s as usize] };
            acc.mul(m)
        })
    }

    pub fn apply_word(&self, word: &[Letter], u: &[LaurentPoly]) -> LVec {
        word.iter().rev().fold(u.to_vec(), |acc, l| {
            let m = if l.inverse { &self.gens_inv[l.s as usize] } else { &self.gens[l.s as usize] };
            m.mul_vec(&acc)
        })
    }
}

/// One column `H_o 1_L` of the module `⊕_o H_o`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Column {
    pub orbit: usize,
    pub point: usize,
    pub kind: usize,
}

/// An element of `KL(v)` given by a signed generator word, together with its
/// projections to every configured orbit algebra.
#[derive(Clone, Debug)]
pub struct KLElement {
    pub word: Vec<Letter>,
    pub projections: Vec<OrbitHeckeElement>,
}

/// `KL(v)` realized on `⊕_o H_o` over all orbits with denominator `<= nmax`.
pub struct KLModel {
    group: Arc<WeylGroup>,
    nmax: i64,
    orbits: Vec<OrbitAlgebra>,
    kinds: Vec<Kind>,
    columns: Vec<Column>,
    /// first column index of each orbit
    orbit_offset: Vec<usize>,
}

impl KLModel {
    pub fn new(group: Arc<WeylGroup>, nmax: i64) -> Self {
        let orbits: Vec<OrbitAlgebra> =
            orbits_up_to(&group, nmax).into_iter().map(|o| OrbitAlgebra::new(group.clone(), o)).collect();
        Self::from_orbits(group, nmax, orbits)
    }

    /// Model over an explicit list of orbits.
    pub fn from_points(group: Arc<WeylGroup>, points: &[CharacterPoint]) -> Self {
        let mut orbits: Vec<OrbitAlgebra> = Vec::new();
        for p in points {
            if orbits.iter().any(|o| o.orbit.index_of(p).is_some()) {
                continue;
            }
            orbits.push(OrbitAlgebra::new(group.clone(), OrbitData::new(&group, p)));
        }
        let nmax = points.iter().map(|p| p.denominator()).max().unwrap_or(1);
        Self::from_orbits(group, nmax, orbits)
    }

    fn from_orbits(group: Arc<WeylGroup>, nmax: i64, orbits: Vec<OrbitAlgebra>) -> Self {
        let g = &*group;
        let mut lookup: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut pending: Vec<(Vec<bool>, (usize, usize))> = Vec::new();
        let mut columns = Vec::new();
        let mut orbit_offset = Vec::new();
        for (oi, o) in orbits.iter().enumerate() {
            orbit_offset.push(columns.len());
            for l in 0..o.num_blocks() {
                let sig: Vec<bool> = g
                    .elements()
                    .flat_map(|y| (0..g.rank()).map(move |s| (y, s)))
                    .map(|(y, s)| o.in_wl[o.act[y][l]][s])
                    .collect();
                let next = lookup.len();
                let kind = *lookup.entry(sig.clone()).or_insert_with(|| {
                    pending.push((sig, (oi, l)));
                    next
                });
                columns.push(Column { orbit: oi, point: l, kind });
            }
        }
        let kinds = pending
            .into_par_iter()
            .map(|(signature, (oi, l))| {
                let o = &orbits[oi];
                let gens: Vec<LMat> = (0..g.rank()).map(|s| o.generator_matrix(s, l)).collect();
                let n = g.order();
                let v2 = LaurentPoly::v_pow(2);
                // a^-1 = v^-2 (a^2 + v^2 a - 1), valid once the cubic relation holds
                let gens_inv = gens
                    .iter()
                    .map(|a| a.mul(a).add(&a.scale(&v2)).sub(&LMat::identity(n)).scale(&LaurentPoly::v_pow(-2)))
                    .collect();
                Kind { signature, example: (oi, l), gens, gens_inv, phi: OnceLock::new(), fulltwist: OnceLock::new() }
            })
            .collect();
        Self { group, nmax, orbits, kinds, columns, orbit_offset }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn nmax(&self) -> i64 {
        self.nmax
    }

    pub fn orbits(&self) -> &[OrbitAlgebra] {
        &self.orbits
    }

    pub fn kinds(&self) -> &[Kind] {
        &self.kinds
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column_index(&self, orbit: usize, point: usize) -> usize {
        self.orbit_offset[orbit] + point
    }

    pub fn kind_of(&self, orbit: usize, point: usize) -> &Kind {
        &self.kinds[self.columns[self.column_index(orbit, point)].kind]
    }

    /// Kinds occurring in one orbit, deduplicated and sorted.
    pub fn orbit_kinds(&self, orbit: usize) -> Vec<usize> {
        let mut ks: Vec<usize> =
            (0..self.orbits[orbit].num_blocks()).map(|l| self.columns[self.column_index(orbit, l)].kind).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    /// The canonical reduced word of `w` as generator letters.
    pub fn word_of(&self, w: Elem) -> Vec<Letter> {
        self.group.word(w).iter().map(|&s| Letter::gen(s as usize)).collect()
    }

    /// `pi(x) 1_L` for a signed word `x`, as a one-column element.
    pub fn pi_column(&self, word: &[Letter], orbit: usize, l: usize) -> OrbitHeckeElement {
        let n = self.group.order();
        let mut e = vec![LaurentPoly::zero(); n];
        e[0] = LaurentPoly::one();
        let col = self.kind_of(orbit, l).apply_word(word, &e);
        self.orbits[orbit].from_column(l, &col)
    }

    /// `pi(x)` in one orbit algebra.
    pub fn project(&self, word: &[Letter], orbit: usize) -> OrbitHeckeElement {
        let o = &self.orbits[orbit];
        let n = self.group.order();
        let mut z = o.zero();
        let mut e = vec![LaurentPoly::zero(); n];
        e[0] = LaurentPoly::one();
        for l in 0..o.num_blocks() {
            let col = self.kind_of(orbit, l).apply_word(word, &e);
            z.coeffs[l * n..(l + 1) * n].clone_from_slice(&col);
        }
        z
    }

    pub fn kl_element(&self, word: &[Letter]) -> KLElement {
        let projections = (0..self.orbits.len()).into_par_iter().map(|o| self.project(word, o)).collect();
        KLElement { word: word.to_vec(), projections }
    }

    /// Product computed blockwise in each `H_o`.
    pub fn kl_mul(&self, a: &KLElement, b: &KLElement) -> Result<KLElement> {
        let projections = self
            .orbits
            .par_iter()
            .zip(a.projections.par_iter().zip(&b.projections))
            .map(|(o, (x, y))| o.mul(x, y))
            .collect::<Result<Vec<_>>>()?;
        let mut word = a.word.clone();
        word.extend_from_slice(&b.word);
        Ok(KLElement { word, projections })
    }

    /// Minimal polynomial of `a_{w0}^2` on the whole module.
    pub fn fulltwist_minpoly(&self) -> BivarPoly {
        let g = &*self.group;
        let mats: Vec<LMat> = self.kinds.par_iter().map(|k| k.fulltwist(g).clone()).collect();
        minimal_polynomial(&mats)
    }

    /// Minimal polynomial of `a_{w0}^2` on the columns of one orbit.
    pub fn fulltwist_minpoly_orbit(&self, orbit: usize) -> BivarPoly {
        let g = &*self.group;
        let mats: Vec<LMat> = self.orbit_kinds(orbit).iter().map(|&k| self.kinds[k].fulltwist(g).clone()).collect();
        minimal_polynomial(&mats)
    }
}

/// Exponents `i` with `(x - v^(2i))` dividing `f`, scanning `0..=imax`.
pub fn eigen_exponents(f: &BivarPoly, imax: u32) -> Vec<u32> {
    (0..=imax)
        .filter(|&i| BivarPoly::linear(LaurentPoly::v_pow(2 * i as i64)).divides(f).unwrap_or(false))
        .collect()
}

/// Divisibility of the full-twist minimal polynomial by the annihilator
/// family with index bound `m`.
pub fn divides_family(f: &BivarPoly, m: u32) -> bool {
    f.divides(&annihilator_family(m, false)).unwrap_or(false)
}

/// Per-block comparison of the projected full twist with the candidate
/// right-hand sides of the longest-element identity.
#[derive(Clone, Debug, Serialize)]
pub struct W0BlockReport {
    pub point: CharacterPoint,
    pub wl_type: String,
    pub w0l: String,
    /// `(T_{w0L} 1_L)^2` computed in `H_o`
    pub ambient_square: bool,
    /// image of the intrinsic `T_{w0L}^2` under `T_u -> T_u 1_L`
    pub intrinsic_square: bool,
    /// image of `v^(2 l) (ly T_{w0L})^-2`, `l` the intrinsic length
    pub ly_inverse_square: bool,
    /// image of `v^(2 l) (std T_{w0L})^-2`
    pub std_inverse_square: bool,
    pub lhs: String,
}

impl KLModel {
    /// Compare `pi(a_{w0}^2) 1_L` against the candidate expressions.
    pub fn check_w0_identity(&self, orbit: usize) -> Vec<W0BlockReport> {
        let g = &*self.group;
        let o = &self.orbits[orbit];
        let n = g.order();
        let w0word = self.word_of(g.longest());
        let mut sq = w0word.clone();
        sq.extend_from_slice(&w0word);
        (0..o.num_blocks())
            .into_par_iter()
            .map(|l| {
                let sub = &o.orbit.stabilizers[l];
                let lhs = self.pi_column(&sq, orbit, l);
                let y = sub.longest;
                let mut e = vec![LaurentPoly::zero(); n];
                e[y] = LaurentPoly::one();
                let ty = o.from_column(l, &e);
                let ambient = o.mul(&ty, &ty).unwrap();

                let ig = Arc::new(sub.intrinsic_group());
                let ih = HeckeAlgebra::new(ig.clone());
                let iy = ig.longest();
                let li = ig.length(iy) as i64;
                let embed = |h: &crate::hecke::HeckeElement| -> OrbitHeckeElement {
                    let mut col = vec![LaurentPoly::zero(); n];
                    for (u, c) in h.support() {
                        col[sub.to_ambient(g, &ig, u)] += c;
                    }
                    o.from_column(l, &col)
                };
                let t = ih.basis(Convention::Ly, iy);
                let intrinsic = embed(&ih.mul(&t, &t).unwrap());
                let inv_sq = |conv: Convention| {
                    let inv = ig.word(iy).iter().fold(ih.one(conv), |acc, &s| {
                        ih.mul(&ih.gen_inverse(conv, s as usize), &acc).unwrap()
                    });
                    let sq = ih.mul(&inv, &inv).unwrap().scale(&LaurentPoly::v_pow(2 * li));
                    embed(&ih.convert(&sq, Convention::Ly))
                };
                W0BlockReport {
                    point: o.orbit.points[l].clone(),
                    wl_type: sub.type_name.clone(),
                    w0l: g.word_string(y),
                    ambient_square: lhs == ambient,
                    intrinsic_square: lhs == intrinsic,
                    ly_inverse_square: lhs == inv_sq(Convention::Ly),
                    std_inverse_square: lhs == inv_sq(Convention::Std),
                    lhs: o.render(&lhs),
                }
            })
            .collect()
    }

    /// `(a_s + v^2)(a_s^2 - 1) = 0` on every kind of one orbit; returns the
    /// first offending point.
    pub fn verify_cubic(&self, s: usize, orbit: usize) -> Option<CharacterPoint> {
        let n = self.group.order();
        let v2 = LaurentPoly::v_pow(2);
        self.orbit_kinds(orbit).into_iter().find_map(|k| {
            let a = &self.kinds[k].gens[s];
            let lhs = a.add(&LMat::scalar(n, &v2)).mul(&a.mul(a).sub(&LMat::identity(n)));
            (!lhs.is_zero()).then(|| self.orbits[self.kinds[k].example.0].orbit.points[self.kinds[k].example.1].clone())
        })
    }

    /// `(a_s^2 - 1)^2 = (v^4 - 1)(a_s^2 - 1)` on every kind of one orbit.
    pub fn operator_square_identity(&self, s: usize, orbit: usize) -> Option<CharacterPoint> {
        let n = self.group.order();
        let c = lp(&[(4, 1), (0, -1)]);
        self.orbit_kinds(orbit).into_iter().find_map(|k| {
            let a = &self.kinds[k].gens[s];
            let b = a.mul(a).sub(&LMat::identity(n));
            (b.mul(&b) != b.scale(&c))
                .then(|| self.orbits[self.kinds[k].example.0].orbit.points[self.kinds[k].example.1].clone())
        })
    }

    /// Braid relations between all pairs of generators on one orbit; returns
    /// the first failing `(s, t)`.
    pub fn verify_braid(&self, orbit: usize) -> Option<(usize, usize)> {
        let g = &*self.group;
        for k in self.orbit_kinds(orbit) {
            let kind = &self.kinds[k];
            for s in 0..g.rank() {
                for t in s + 1..g.rank() {
                    let m = braid_order(g, s, t);
                    let alt = |a: usize, b: usize| -> Vec<Letter> {
                        (0..m).map(|i| Letter::gen(if i % 2 == 0 { a } else { b })).collect()
                    };
                    if kind.word_matrix(g, &alt(s, t)) != kind.word_matrix(g, &alt(t, s)) {
                        return Some((s, t));
                    }
                }
            }
        }
        None
    }
}

/// Order of `s t` in the group.
pub fn braid_order(g: &WeylGroup, s: usize, t: usize) -> usize {
    let st = g.mul(g.simple(s), g.simple(t));
    let mut x = st;
    let mut m = 1;
    while x != 0 {
        x = g.mul(x, st);
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CartanType;
    use crate::hecke::HeckeAlgebra;

    fn group(t: &str) -> Arc<WeylGroup> {
        Arc::new(WeylGroup::build(t.parse::<CartanType>().unwrap()).unwrap())
    }

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn orbit_alg(t: &str, pt: &str) -> OrbitAlgebra {
        let g = group(t);
        let o = OrbitData::new(&g, &pt.parse().unwrap());
        OrbitAlgebra::new(g, o)
    }

    #[test]
    fn generator_square_in_non_trivial_block() {
        let o = orbit_alg("A1", "1/2");
        let ts = o.basis(1, 0);
        assert_eq!(o.mul(&ts, &ts).unwrap(), o.idempotent(0));
        let a = o.pi_generator(0);
        assert_eq!(o.mul(&a, &a).unwrap(), o.one());
    }

    #[test]
    fn trivial_block_matches_ly_relation() {
        let o = orbit_alg("A1", "0");
        let ts = o.basis(1, 0);
        let mut expected = o.zero();
        expected.coeffs[0] = p("v^2");
        expected.coeffs[1] = p("1 - v^2");
        assert_eq!(o.mul(&ts, &ts).unwrap(), expected);
        // agrees with the plain ly Hecke algebra
        let h = HeckeAlgebra::new(o.group().clone());
        let t = h.basis(Convention::Ly, 1);
        assert_eq!(h.mul(&t, &t).unwrap().coeffs(), &expected.coeffs[..]);
    }

    #[test]
    fn idempotents_are_orthogonal() {
        let o = orbit_alg("A2", "1/2,0");
        assert_eq!(o.num_blocks(), 3);
        assert!(o.mul(&o.idempotent(0), &o.idempotent(1)).unwrap().is_zero());
        assert_eq!(o.mul(&o.idempotent(2), &o.idempotent(2)).unwrap(), o.idempotent(2));
        let other = orbit_alg("A2", "1/2,0");
        assert_eq!(o.mul(&o.one(), &other.one()), Err(Error::OrbitMismatch));
    }

    #[test]
    fn mixed_signs_in_a2() {
        let o = orbit_alg("A2", "1/2,0");
        let a = o.pi_generator(1);
        let ts = o.group().simple(1);
        let signs: Vec<String> = (0..3).map(|l| a.coeff(ts, l).to_string()).collect();
        let expected: Vec<String> =
            (0..3).map(|l| if o.in_wl(l, 1) { "1".to_string() } else { "-1".to_string() }).collect();
        assert_eq!(signs, expected);
        assert!(signs.contains(&"1".to_string()) && signs.contains(&"-1".to_string()));
    }

    #[test]
    fn a1_relations_and_fulltwist() {
        let m = KLModel::new(group("A1"), 2);
        assert_eq!(m.orbits().len(), 2);
        for o in 0..2 {
            assert!(m.verify_cubic(0, o).is_none());
            assert!(m.operator_square_identity(0, o).is_none());
        }
        let x = |c: &str| BivarPoly::linear(p(c));
        assert_eq!(m.fulltwist_minpoly_orbit(0), &x("1") * &x("v^4"));
        assert_eq!(m.fulltwist_minpoly_orbit(1), x("1"));
        let f = m.fulltwist_minpoly();
        assert!(divides_family(&f, 2));
        assert!(!divides_family(&f, 1));
        assert_eq!(eigen_exponents(&f, 4), vec![0, 2]);
    }

    #[test]
    fn braid_relations_a2() {
        let m = KLModel::new(group("A2"), 3);
        for o in 0..m.orbits().len() {
            assert_eq!(m.verify_braid(o), None);
            assert!(m.verify_cubic(0, o).is_none());
        }
    }

    #[test]
    fn inverse_letters() {
        let m = KLModel::new(group("A2"), 2);
        let x = m.kl_element(&[Letter::gen(0), Letter::inv(0), Letter::gen(1)]);
        let y = m.kl_element(&[Letter::gen(1)]);
        assert_eq!(x.projections, y.projections);
    }

    #[test]
    fn kl_mul_matches_word_evaluation() {
        let m = KLModel::new(group("A2"), 2);
        let a = m.kl_element(&[Letter::gen(0), Letter::gen(1)]);
        let b = m.kl_element(&[Letter::gen(1), Letter::inv(0)]);
        let ab = m.kl_mul(&a, &b).unwrap();
        assert_eq!(ab.projections, m.kl_element(&ab.word).projections);
    }
}
