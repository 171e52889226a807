//! Iwahori-Hecke algebras over `Z[v, v^-1]` in two normalizations, with the
//! Kazhdan-Lusztig basis, cells and full-twist scalars.
//!
//! * `Std`: `T_s^2 = 1 + (v^-1 - v) T_s`, KL basis `C_s = T_s + v`.
//! * `Ly`: `T_s^2 = v^2 + (1 - v^2) T_s`.
//!
//! The two are identified by `ly T_s = -v (std T_s)^-1`.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::coxeter::{Elem, WeylGroup};
use crate::error::{Error, Result};
use crate::rings::linalg::{minimal_polynomial, LMat};
use crate::rings::{BivarPoly, LaurentPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Std,
    Ly,
}

/// `sum_w c_w T_w`, stored densely over the element enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeckeElement {
    conv: Convention,
    coeffs: Vec<LaurentPoly>,
}

impl HeckeElement {
    pub fn convention(&self) -> Convention {
        self.conv
    }

    pub fn coeff(&self, w: Elem) -> &LaurentPoly {
        &self.coeffs[w]
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (Elem, &LaurentPoly)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.conv != other.conv {
            return Err(Error::ConventionMismatch);
        }
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::MixedAmbient);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { conv: self.conv, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { conv: self.conv, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        Self { conv: self.conv, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    fn add_assign_scaled(&mut self, other: &Self, c: &LaurentPoly) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += &(b * c);
            }
        }
    }
}

/// Two-sided cells with their order (the identity's cell is maximal) and the
/// left and right cell partitions.
#[derive(Clone, Debug, Serialize)]
pub struct CellDecomposition {
    /// listed along a linear extension of the order, maximal first
    pub cells: Vec<Vec<Elem>>,
    /// `order[i][j]` iff cell `i` <= cell `j`
    pub order: Vec<Vec<bool>>,
    pub left_cells: Vec<Vec<Elem>>,
    pub right_cells: Vec<Vec<Elem>>,
    pub cell_of: Vec<usize>,
}

/// Which weighted sum of standard basis elements models the big tilting class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiltingVariant {
    /// `sum_w v^(l(w0) - l(w)) T_w`
    Descending,
    /// `sum_w v^l(w) T_w`
    Ascending,
}

pub struct HeckeAlgebra {
    group: Arc<WeylGroup>,
    kl: OnceLock<Vec<HeckeElement>>,
    bar_std: OnceLock<Vec<HeckeElement>>,
    cells: OnceLock<CellDecomposition>,
}

impl HeckeAlgebra {
    pub fn new(group: Arc<WeylGroup>) -> Self {
        Self { group, kl: OnceLock::new(), bar_std: OnceLock::new(), cells: OnceLock::new() }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn zero(&self, conv: Convention) -> HeckeElement {
        HeckeElement { conv, coeffs: vec![LaurentPoly::zero(); self.group.order()] }
    }

    pub fn scalar(&self, conv: Convention, c: LaurentPoly) -> HeckeElement {
        let mut z = self.zero(conv);
        z.coeffs[0] = c;
        z
    }

    pub fn one(&self, conv: Convention) -> HeckeElement {
        self.scalar(conv, LaurentPoly::one())
    }

    pub fn basis(&self, conv: Convention, w: Elem) -> HeckeElement {
        let mut z = self.zero(conv);
        z.coeffs[w] = LaurentPoly::one();
        z
    }

    pub fn from_terms(&self, conv: Convention, terms: &[(Elem, LaurentPoly)]) -> HeckeElement {
        let mut z = self.zero(conv);
        for (w, c) in terms {
            z.coeffs[*w] += c;
        }
        z
    }

    /// `T_s * a`
    pub fn lmul_gen(&self, s: usize, a: &HeckeElement) -> HeckeElement {
        let g = &*self.group;
        let mut out = self.zero(a.conv);
        let (lo, hi) = quadratic(a.conv);
        for (w, c) in a.support() {
            let sw = g.lmul(s, w);
            if g.length(sw) > g.length(w) {
                out.coeffs[sw] += c;
            } else {
                out.coeffs[sw] += &(c * &lo);
                out.coeffs[w] += &(c * &hi);
            }
        }
        out
    }

    /// `a * T_s`
    pub fn rmul_gen(&self, a: &HeckeElement, s: usize) -> HeckeElement {
        let g = &*self.group;
        let mut out = self.zero(a.conv);
        let (lo, hi) = quadratic(a.conv);
        for (w, c) in a.support() {
            let ws = g.rmul(w, s);
            if g.length(ws) > g.length(w) {
                out.coeffs[ws] += c;
            } else {
                out.coeffs[ws] += &(c * &lo);
                out.coeffs[w] += &(c * &hi);
            }
        }
        out
    }

    /// `T_w * a`
    pub fn lmul_basis(&self, w: Elem, a: &HeckeElement) -> HeckeElement {
        self.group.word(w).iter().rev().fold(a.clone(), |acc, &s| self.lmul_gen(s as usize, &acc))
    }

    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement> {
        a.check(b)?;
        let mut out = self.zero(a.conv);
        for (w, c) in a.support() {
            out.add_assign_scaled(&self.lmul_basis(w, b), c);
        }
        Ok(out)
    }

    /// Alias of [`Self::mul`] matching the operation name used in reports.
    pub fn t_mul(&self, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement> {
        self.mul(a, b)
    }

    pub fn pow(&self, a: &HeckeElement, e: u32) -> HeckeElement {
        (0..e).fold(self.one(a.conv), |acc, _| self.mul(&acc, a).unwrap())
    }

    /// `T_s^-1` in the given convention.
    pub fn gen_inverse(&self, conv: Convention, s: usize) -> HeckeElement {
        let ts = self.group.simple(s);
        match conv {
            // T_s + (v - v^-1)
            Convention::Std => self.from_terms(conv, &[(ts, LaurentPoly::one()), (0, lp(&[(1, 1), (-1, -1)]))]),
            // v^-2 T_s + (1 - v^-2)
            Convention::Ly => self.from_terms(conv, &[(ts, lp(&[(-2, 1)])), (0, lp(&[(0, 1), (-2, -1)]))]),
        }
    }

    /// Image of the generator `T_s` of convention `from` in convention `to`.
    fn gen_image(&self, from: Convention, to: Convention, s: usize) -> HeckeElement {
        let ts = self.group.simple(s);
        match (from, to) {
            (a, b) if a == b => self.basis(to, ts),
            // ly T_s = (1 - v^2) - v std T_s
            (Convention::Ly, Convention::Std) => {
                self.from_terms(to, &[(0, lp(&[(0, 1), (2, -1)])), (ts, lp(&[(1, -1)]))])
            }
            // std T_s = -v^-1 ly T_s + (v^-1 - v)
            _ => self.from_terms(to, &[(0, lp(&[(-1, 1), (1, -1)])), (ts, lp(&[(-1, -1)]))]),
        }
    }

    /// Rewrite an element in the other normalization. The map is the algebra
    /// isomorphism sending `ly T_s` to `-v (std T_s)^-1`.
    pub fn convert(&self, a: &HeckeElement, to: Convention) -> HeckeElement {
        if a.conv == to {
            return a.clone();
        }
        let g = &*self.group;
        let gens: Vec<HeckeElement> = (0..g.rank()).map(|s| self.gen_image(a.conv, to, s)).collect();
        let mut images: Vec<Option<HeckeElement>> = vec![None; g.order()];
        images[0] = Some(self.one(to));
        let mut out = self.zero(to);
        for w in g.elements() {
            if w > 0 {
                let s = g.word(w)[0] as usize;
                let rest = images[g.lmul(s, w)].as_ref().unwrap();
                images[w] = Some(self.mul(&gens[s], rest).unwrap());
            }
            if !a.coeffs[w].is_zero() {
                out.add_assign_scaled(images[w].as_ref().unwrap(), &a.coeffs[w]);
            }
        }
        out
    }

    fn bar_images(&self) -> &[HeckeElement] {
        self.bar_std.get_or_init(|| {
            let g = &*self.group;
            let mut images: Vec<HeckeElement> = Vec::with_capacity(g.order());
            images.push(self.one(Convention::Std));
            for w in 1..g.order() {
                let s = g.word(w)[0] as usize;
                let img = self.mul(&self.gen_inverse(Convention::Std, s), &images[g.lmul(s, w)]).unwrap();
                images.push(img);
            }
            images
        })
    }

    /// The bar involution `v -> v^-1`, `T_s -> T_s^-1`.
    pub fn bar(&self, a: &HeckeElement) -> HeckeElement {
        let std = self.convert(a, Convention::Std);
        let images = self.bar_images();
        let mut out = self.zero(Convention::Std);
        for (w, c) in std.support() {
            out.add_assign_scaled(&images[w], &c.bar());
        }
        self.convert(&out, a.conv)
    }

    /// Kazhdan-Lusztig basis `C_w = T_w + sum_{y < w} h_{y,w} T_y` (std),
    /// `h_{y,w} in v Z[v]`.
    pub fn kl_basis(&self) -> &[HeckeElement] {
        self.kl.get_or_init(|| {
            let g = &*self.group;
            let mut c: Vec<HeckeElement> = Vec::with_capacity(g.order());
            c.push(self.one(Convention::Std));
            for w in 1..g.order() {
                let s = g.word(w)[0] as usize;
                let x = g.lmul(s, w);
                let mut cw = self.lmul_gen(s, &c[x]);
                cw.add_assign_scaled(&c[x], &LaurentPoly::v());
                for z in 0..x {
                    let mu = c[x].coeffs[z].coeff(1);
                    if !num_traits::Zero::is_zero(&mu) && g.is_left_descent(s, z) {
                        cw.add_assign_scaled(&c[z], &-LaurentPoly::constant(mu));
                    }
                }
                c.push(cw);
            }
            c
        })
    }

    pub fn kl_element(&self, w: Elem) -> &HeckeElement {
        &self.kl_basis()[w]
    }

    /// `h_{y,w}`
    pub fn kl_poly(&self, y: Elem, w: Elem) -> &LaurentPoly {
        &self.kl_basis()[w].coeffs[y]
    }

    /// Coefficients of an element in the KL basis.
    pub fn to_kl(&self, a: &HeckeElement) -> Vec<LaurentPoly> {
        let kl = self.kl_basis();
        let mut rest = self.convert(a, Convention::Std);
        let mut out = vec![LaurentPoly::zero(); self.group.order()];
        for w in (0..self.group.order()).rev() {
            let c = rest.coeffs[w].clone();
            if c.is_zero() {
                continue;
            }
            rest.add_assign_scaled(&kl[w], &-c.clone());
            out[w] = c;
        }
        out
    }

    /// Coefficient of `C_e` in the KL expansion.
    pub fn ic_e_coefficient(&self, a: &HeckeElement) -> LaurentPoly {
        self.to_kl(a).swap_remove(0)
    }

    pub fn tilting_class(&self, variant: TiltingVariant) -> HeckeElement {
        let g = &*self.group;
        let l0 = g.length(g.longest()) as i64;
        let terms: Vec<(Elem, LaurentPoly)> = g
            .elements()
            .map(|w| {
                let l = g.length(w) as i64;
                let e = match variant {
                    TiltingVariant::Descending => l0 - l,
                    TiltingVariant::Ascending => l,
                };
                (w, LaurentPoly::v_pow(e))
            })
            .collect();
        self.from_terms(Convention::Std, &terms)
    }

    /// `T_{w0}^2` in the given convention.
    pub fn full_twist(&self, conv: Convention) -> HeckeElement {
        let t = self.basis(conv, self.group.longest());
        self.mul(&t, &t).unwrap()
    }

    pub fn cells(&self) -> &CellDecomposition {
        self.cells.get_or_init(|| self.compute_cells())
    }

    fn compute_cells(&self) -> CellDecomposition {
        let g = &*self.group;
        let n = g.order();
        let kl = self.kl_basis();
        let v = LaurentPoly::v();
        // edges y -> x when C_x occurs in C_s C_y (left) or C_y C_s (right)
        let mut left: Vec<BTreeSet<Elem>> = vec![BTreeSet::new(); n];
        let mut right: Vec<BTreeSet<Elem>> = vec![BTreeSet::new(); n];
        for y in 0..n {
            for s in 0..g.rank() {
                let mut l = self.lmul_gen(s, &kl[y]);
                l.add_assign_scaled(&kl[y], &v);
                let mut r = self.rmul_gen(&kl[y], s);
                r.add_assign_scaled(&kl[y], &v);
                for (x, c) in self.to_kl(&l).iter().enumerate() {
                    if !c.is_zero() {
                        left[y].insert(x);
                    }
                }
                for (x, c) in self.to_kl(&r).iter().enumerate() {
                    if !c.is_zero() {
                        right[y].insert(x);
                    }
                }
            }
        }
        let reach = |edges: &dyn Fn(Elem) -> Vec<Elem>| -> Vec<Vec<bool>> {
            (0..n)
                .map(|y| {
                    let mut seen = vec![false; n];
                    seen[y] = true;
                    let mut stack = vec![y];
                    while let Some(a) = stack.pop() {
                        for b in edges(a) {
                            if !seen[b] {
                                seen[b] = true;
                                stack.push(b);
                            }
                        }
                    }
                    seen
                })
                .collect()
        };
        let two = reach(&|a| left[a].iter().chain(&right[a]).copied().collect());
        let lreach = reach(&|a| left[a].iter().copied().collect());
        let rreach = reach(&|a| right[a].iter().copied().collect());
        let classes = |r: &Vec<Vec<bool>>| -> Vec<Vec<Elem>> {
            let mut assigned = vec![false; n];
            let mut out = Vec::new();
            for y in 0..n {
                if assigned[y] {
                    continue;
                }
                let class: Vec<Elem> = (0..n).filter(|&x| r[y][x] && r[x][y]).collect();
                for &x in &class {
                    assigned[x] = true;
                }
                out.push(class);
            }
            out
        };
        let mut cells = classes(&two);
        // linear extension: fewer elements above means higher in the order
        let above = |c: &Vec<Elem>| (0..n).filter(|&y| two[y][c[0]]).count();
        cells.sort_by_key(|c| (above(c), c[0]));
        let mut cell_of = vec![0; n];
        for (i, c) in cells.iter().enumerate() {
            for &x in c {
                cell_of[x] = i;
            }
        }
        let order = cells
            .iter()
            .map(|ci| cells.iter().map(|cj| two[cj[0]][ci[0]]).collect())
            .collect();
        CellDecomposition { cells, order, left_cells: classes(&lreach), right_cells: classes(&rreach), cell_of }
    }

    /// Fails with [`Error::NotCentral`] unless `z` commutes with every `T_s`.
    pub fn check_central(&self, z: &HeckeElement) -> Result<()> {
        for s in 0..self.group.rank() {
            if self.lmul_gen(s, z) != self.rmul_gen(z, s) {
                return Err(Error::NotCentral(s));
            }
        }
        Ok(())
    }

    /// The action matrix of central `z` on the subquotient of cell `c`.
    pub fn cell_matrix(&self, z: &HeckeElement, c: usize) -> Result<LMat> {
        self.check_central(z)?;
        let cells = self.cells();
        let members = &cells.cells[c];
        let kl = self.kl_basis();
        let zs = self.convert(z, Convention::Std);
        let cols: Vec<Vec<LaurentPoly>> = members
            .iter()
            .map(|&x| {
                let coeffs = self.to_kl(&self.mul(&zs, &kl[x]).unwrap());
                members.iter().map(|&y| coeffs[y].clone()).collect()
            })
            .collect();
        Ok(LMat::from_columns(members.len(), cols))
    }

    /// `Some((sign, d))` when `z` acts on the subquotient of cell `c` by the
    /// scalar `sign * v^d`.
    pub fn cell_scalar(&self, z: &HeckeElement, c: usize) -> Result<Option<(i8, i64)>> {
        let m = self.cell_matrix(z, c)?;
        Ok(m.is_scalar().and_then(|s| monomial(&s)))
    }

    /// Matrix of right multiplication by `z` on the regular module, in the
    /// standard basis of `z`'s convention.
    pub fn right_mul_matrix(&self, z: &HeckeElement) -> LMat {
        let cols = self
            .group
            .elements()
            .map(|w| self.mul(&self.basis(z.conv, w), z).unwrap().coeffs)
            .collect();
        LMat::from_columns(self.group.order(), cols)
    }

    /// Minimal polynomial of right multiplication by `z`.
    pub fn minpoly(&self, z: &HeckeElement) -> BivarPoly {
        minimal_polynomial(&[self.right_mul_matrix(z)])
    }

    /// Sparse rendering as `(canonical word, polynomial)` pairs.
    pub fn render(&self, a: &HeckeElement) -> Vec<(String, String)> {
        a.support().map(|(w, c)| (self.group.word_string(w), c.to_string())).collect()
    }

    pub fn render_string(&self, a: &HeckeElement) -> String {
        let parts: Vec<String> = self.render(a).into_iter().map(|(w, c)| format!("({c})*T[{w}]")).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `(sign, d)` if `p = sign * v^d`.
pub fn monomial(p: &LaurentPoly) -> Option<(i8, i64)> {
    let terms = p.to_i64_terms()?;
    match terms.as_slice() {
        [(d, 1)] => Some((1, *d)),
        [(d, -1)] => Some((-1, *d)),
        _ => None,
    }
}

/// For `sw < w`: `T_s T_w = lo * T_{sw} + hi * T_w`.
fn quadratic(conv: Convention) -> (LaurentPoly, LaurentPoly) {
    match conv {
        Convention::Std => (LaurentPoly::one(), lp(&[(-1, 1), (1, -1)])),
        Convention::Ly => (LaurentPoly::v_pow(2), lp(&[(0, 1), (2, -1)])),
    }
}

fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().copied())
}
