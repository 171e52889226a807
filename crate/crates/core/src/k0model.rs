//! W-indexed tuples over a `KL(v)`-module and the operations on them: the
//! gluing condition, `iota`, free tuples, the Euler identity of the canonical
//! complex, and the splitting `p(v) a = a0 + a1`.
//!
//! The module is `⊕ H_o 1_L` over the columns of a [`KLModel`]; every operator
//! acts column by column, so vectors are sparse maps from column index to a
//! coefficient vector of length `|W|`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coxeter::{Elem, WeylGroup};
use crate::error::{Error, Result};
use crate::klalgebra::{divides_family, KLModel};
use crate::rings::linalg::{LMat, LVec, RVec, Solver};
use crate::rings::{annihilator_family, divides_p_power, split_at_one, BivarPoly, LaurentPoly, LocalizedScalar, RatFunc};

/// Sparse module vector: column index to coefficients.
pub type ModVec = BTreeMap<usize, LVec>;

fn prune(mut v: ModVec) -> ModVec {
    v.retain(|_, c| c.iter().any(|x| !x.is_zero()));
    v
}

pub fn mv_add(a: &ModVec, b: &ModVec) -> ModVec {
    let mut out = a.clone();
    for (c, col) in b {
        match out.get_mut(c) {
            Some(x) => x.iter_mut().zip(col).for_each(|(p, q)| *p += q),
            None => {
                out.insert(*c, col.clone());
            }
        }
    }
    prune(out)
}

pub fn mv_neg(a: &ModVec) -> ModVec {
    a.iter().map(|(c, col)| (*c, col.iter().map(|x| -x).collect())).collect()
}

pub fn mv_sub(a: &ModVec, b: &ModVec) -> ModVec {
    mv_add(a, &mv_neg(b))
}

pub fn mv_scale(a: &ModVec, s: &LaurentPoly) -> ModVec {
    prune(a.iter().map(|(c, col)| (*c, col.iter().map(|x| x * s).collect())).collect())
}

pub fn mv_is_zero(a: &ModVec) -> bool {
    a.values().all(|col| col.iter().all(LaurentPoly::is_zero))
}

/// `(a_w)_{w in W}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTuple {
    pub components: Vec<ModVec>,
}

impl KTuple {
    pub fn zero(order: usize) -> Self {
        Self { components: vec![ModVec::new(); order] }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { components: self.components.iter().zip(&o.components).map(|(a, b)| mv_add(a, b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { components: self.components.iter().zip(&o.components).map(|(a, b)| mv_sub(a, b)).collect() }
    }

    pub fn scale(&self, s: &LaurentPoly) -> Self {
        Self { components: self.components.iter().map(|a| mv_scale(a, s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(mv_is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct GluingWitness {
    pub s: usize,
    pub w: Elem,
    /// `x` with `(Phi_s^2 - 1) x = a_{sw} - Phi_s a_w`, per column
    pub x: BTreeMap<usize, RVec>,
}

#[derive(Clone, Debug)]
pub struct GluingReport {
    pub witnesses: Vec<GluingWitness>,
    /// `(s, w, column)` where the system has no solution
    pub failures: Vec<(usize, Elem, usize)>,
}

impl GluingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SplitCertificate {
    pub m: u32,
    pub pv: LaurentPoly,
    pub a0: KTuple,
    pub a1: KTuple,
    /// named contract checks in the order they were run
    pub checks: Vec<(String, bool)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub r: u32,
    /// `g` with `p^r a = g(F) (F - 1) a`
    pub g: Vec<String>,
    /// the coefficients of `g / p^r` as localized scalars
    pub localized: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct FreeSpanReport {
    /// `(w, column, c)` with `a = sum make_free(w, c)`
    pub terms: Vec<(Elem, usize, RVec)>,
    /// distinct normalized denominators of the coefficients
    pub denominators: Vec<LaurentPoly>,
    /// least `k` with `p(v)^k` clearing every denominator, if any
    pub p_power: Option<u32>,
}

/// The tuple model over the default module of a [`KLModel`].
pub struct KModule {
    model: Arc<KLModel>,
    gluing: Vec<Vec<OnceLock<(LMat, Solver)>>>,
    free: Vec<OnceLock<Solver>>,
    minpoly: OnceLock<BivarPoly>,
}

impl KModule {
    pub fn new(model: Arc<KLModel>) -> Self {
        let nk = model.kinds().len();
        let rank = model.group().rank();
        Self {
            gluing: (0..nk).map(|_| (0..rank).map(|_| OnceLock::new()).collect()).collect(),
            free: (0..nk).map(|_| OnceLock::new()).collect(),
            minpoly: OnceLock::new(),
            model,
        }
    }

    pub fn model(&self) -> &Arc<KLModel> {
        &self.model
    }

    fn g(&self) -> &WeylGroup {
        self.model.group()
    }

    fn n(&self) -> usize {
        self.g().order()
    }

    fn kind_of_col(&self, c: usize) -> &crate::klalgebra::Kind {
        &self.model.kinds()[self.model.columns()[c].kind]
    }

    pub fn num_columns(&self) -> usize {
        self.model.columns().len()
    }

    /// `Phi_w v`.
    pub fn phi(&self, w: Elem, v: &ModVec) -> ModVec {
        let g = self.g();
        prune(v.iter().map(|(c, col)| (*c, self.kind_of_col(*c).phi(g)[w].mul_vec(col))).collect())
    }

    /// `Phi_s v` for a simple index `s`.
    pub fn gen(&self, s: usize, v: &ModVec) -> ModVec {
        prune(v.iter().map(|(c, col)| (*c, self.kind_of_col(*c).gens[s].mul_vec(col))).collect())
    }

    /// `F v` with `F = a_{w0}^2`.
    pub fn fulltwist(&self, v: &ModVec) -> ModVec {
        let g = self.g();
        prune(v.iter().map(|(c, col)| (*c, self.kind_of_col(*c).fulltwist(g).mul_vec(col))).collect())
    }

    /// `f(F) v` by Horner.
    pub fn poly_f(&self, f: &BivarPoly, v: &ModVec) -> ModVec {
        let mut acc = ModVec::new();
        for c in f.coeffs().iter().rev() {
            acc = mv_add(&self.fulltwist(&acc), &mv_scale(v, c));
        }
        acc
    }

    pub fn poly_f_tuple(&self, f: &BivarPoly, t: &KTuple) -> KTuple {
        KTuple { components: t.components.par_iter().map(|a| self.poly_f(f, a)).collect() }
    }

    /// The unit of `⊕ H_o` restricted to the given columns.
    pub fn unit_on(&self, cols: impl IntoIterator<Item = usize>) -> ModVec {
        let n = self.n();
        cols.into_iter()
            .map(|c| {
                let mut e = vec![LaurentPoly::zero(); n];
                e[0] = LaurentPoly::one();
                (c, e)
            })
            .collect()
    }

    pub fn unit(&self) -> ModVec {
        self.unit_on(0..self.num_columns())
    }

    /// Columns of the trivial orbit.
    pub fn trivial_columns(&self) -> Vec<usize> {
        let m = &self.model;
        (0..m.orbits().len())
            .filter(|&o| m.orbits()[o].orbit().is_trivial())
            .flat_map(|o| (0..m.orbits()[o].num_blocks()).map(move |l| m.column_index(o, l)))
            .collect()
    }

    /// `a_w = k` for every `w`.
    pub fn constant_tuple(&self, k: &ModVec) -> KTuple {
        KTuple { components: vec![k.clone(); self.n()] }
    }

    /// `(j_{w!} k)_y = Phi_{y w^-1} k`.
    pub fn make_free(&self, w: Elem, k: &ModVec) -> KTuple {
        let g = self.g();
        let wi = g.inverse(w);
        KTuple { components: g.elements().map(|y| self.phi(g.mul(y, wi), k)).collect() }
    }

    /// `(iota t)_w = Phi_{w0} t_{w0 w}`.
    pub fn iota(&self, t: &KTuple) -> KTuple {
        let g = self.g();
        let w0 = g.longest();
        KTuple { components: g.elements().map(|w| self.phi(w0, &t.components[g.mul(w0, w)])).collect() }
    }

    /// `iota^2` by double application.
    pub fn iota_sq(&self, t: &KTuple) -> KTuple {
        self.iota(&self.iota(t))
    }

    /// `iota^2` as `F` applied componentwise.
    pub fn iota_sq_by_fulltwist(&self, t: &KTuple) -> KTuple {
        KTuple { components: t.components.iter().map(|a| self.fulltwist(a)).collect() }
    }

    fn gluing_solver(&self, kind: usize, s: usize) -> &(LMat, Solver) {
        self.gluing[kind][s].get_or_init(|| {
            let a = &self.model.kinds()[kind].gens[s];
            let b = a.mul(a).sub(&LMat::identity(self.n()));
            let solver = Solver::from_lmat(&b);
            (b, solver)
        })
    }

    /// Solve `(Phi_s^2 - 1) x = d` column by column; `Err(column)` on the
    /// first inconsistent column.
    pub fn solve_image(&self, s: usize, d: &ModVec) -> std::result::Result<BTreeMap<usize, RVec>, usize> {
        let mut out = BTreeMap::new();
        for (c, col) in d {
            let (b, solver) = self.gluing_solver(self.model.columns()[*c].kind, s);
            let x = solver.solve_laurent(col).ok_or(*c)?;
            debug_assert_eq!(
                b.to_ratfunc().mul_vec(&x),
                col.iter().cloned().map(RatFunc::from).collect::<Vec<_>>()
            );
            out.insert(*c, x);
        }
        Ok(out)
    }

    /// `a_{sw} - Phi_s a_w ∈ im(Phi_s^2 - 1)` for all `s`, `w`.
    pub fn check_gluing(&self, t: &KTuple) -> GluingReport {
        let g = self.g();
        let pairs: Vec<(usize, Elem)> = (0..g.rank()).flat_map(|s| g.elements().map(move |w| (s, w))).collect();
        let outcomes: Vec<_> = pairs
            .par_iter()
            .map(|&(s, w)| {
                let d = mv_sub(&t.components[g.lmul(s, w)], &self.gen(s, &t.components[w]));
                (s, w, self.solve_image(s, &d))
            })
            .collect();
        let mut report = GluingReport { witnesses: Vec::new(), failures: Vec::new() };
        for (s, w, r) in outcomes {
            match r {
                Ok(x) => report.witnesses.push(GluingWitness { s, w, x }),
                Err(c) => report.failures.push((s, w, c)),
            }
        }
        report
    }

    /// Euler identity of the canonical complex on `j_{e!} k`; returns the
    /// elements `y` where it fails.
    pub fn canonical_identity(&self, k: &ModVec) -> Vec<Elem> {
        let g = self.g();
        let rank = g.rank();
        let w0 = g.longest();
        // (sign, X_{S-J}) over nonempty J
        let terms: Vec<(bool, Vec<Elem>)> = (1u32..(1 << rank))
            .map(|mask| {
                let comp: Vec<usize> = (0..rank).filter(|s| mask & (1 << s) == 0).collect();
                (mask.count_ones() % 2 == 1, g.min_coset_reps(&comp))
            })
            .collect();
        let xk: Vec<ModVec> = g.elements().collect::<Vec<_>>().par_iter().map(|&x| self.phi(x, k)).collect();
        let sign_top = rank % 2 == 1;
        g.elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter(|&y| {
                let mut lhs = ModVec::new();
                for (positive, xs) in &terms {
                    for &x in xs {
                        let t = self.phi(g.mul(y, g.inverse(x)), &xk[x]);
                        lhs = if *positive { mv_add(&lhs, &t) } else { mv_sub(&lhs, &t) };
                    }
                }
                let top = self.phi(w0, &xk[g.mul(w0, y)]);
                let rhs = if sign_top { mv_add(&xk[y], &top) } else { mv_sub(&xk[y], &top) };
                lhs != rhs
            })
            .collect()
    }

    /// Whether `P(F, v)` with bound `m` annihilates the whole module.
    pub fn family_annihilates(&self, m: u32) -> bool {
        divides_family(self.minpoly(), m)
    }

    pub fn minpoly(&self) -> &BivarPoly {
        self.minpoly.get_or_init(|| self.model.fulltwist_minpoly())
    }

    /// `a0 = P~(iota^2) a`, `a1 = r(iota^2)(iota^2 - 1) a` and the exact
    /// verification of their contract.
    pub fn polyconj_split(&self, a: &KTuple, m: u32) -> Result<SplitCertificate> {
        let g = self.g();
        let gl = self.check_gluing(a);
        if let Some(&(s, w, _)) = gl.failures.first() {
            return Err(Error::GluingViolation { s, w: g.word_string(w) });
        }
        let pt = annihilator_family(m, true);
        let (pv, r) = split_at_one(&pt);
        let xm1 = BivarPoly::linear(LaurentPoly::one());
        let a0 = self.poly_f_tuple(&pt, a);
        let a1 = self.poly_f_tuple(&(&r * &xm1), a);
        let mut checks = Vec::new();
        let fail = |check: &str, witness: String| Error::IdentityFailure { check: check.into(), witness };

        // a0 + a1 = p(v) a
        let ok = a0.add(&a1) == a.scale(&pv);
        checks.push(("sum".to_string(), ok));
        if !ok {
            return Err(fail("sum", "a0 + a1 != p(v) a".into()));
        }
        // Phi_s^2 fixes a0
        let pairs: Vec<(usize, Elem)> = (0..g.rank()).flat_map(|s| g.elements().map(move |w| (s, w))).collect();
        let bad = pairs.par_iter().find_first(|&&(s, w)| {
            let x = &a0.components[w];
            self.gen(s, &self.gen(s, x)) != *x
        });
        checks.push(("square_fixed".to_string(), bad.is_none()));
        if let Some(&(s, w)) = bad {
            return Err(fail("square_fixed", format!("s={} w={}", s + 1, g.word_string(w))));
        }
        // a0 differences satisfy the v^4 - 1 chain and vanish
        let c = LaurentPoly::from_terms([(4, 1), (0, -1)]);
        let chain = pairs.par_iter().map(|&(s, w)| {
            let d = mv_sub(&a0.components[g.lmul(s, w)], &self.gen(s, &a0.components[w]));
            let lhs = mv_sub(&self.gen(s, &self.gen(s, &d)), &d);
            (s, w, lhs == mv_scale(&d, &c), mv_is_zero(&d))
        });
        let chain: Vec<_> = chain.collect();
        let bad = chain.iter().find(|x| !x.2);
        checks.push(("v4_chain".to_string(), bad.is_none()));
        if let Some(&(s, w, ..)) = bad {
            return Err(fail("v4_chain", format!("s={} w={}", s + 1, g.word_string(w))));
        }
        let bad = chain.iter().find(|x| !x.3);
        checks.push(("free_chain".to_string(), bad.is_none()));
        if let Some(&(s, w, ..)) = bad {
            return Err(fail("free_chain", format!("s={} w={}", s + 1, g.word_string(w))));
        }
        // P~(F) kills a1
        let ann = self.family_annihilates(m);
        checks.push(("module_annihilated".to_string(), ann));
        if !ann {
            return Err(fail("module_annihilated", format!("minpoly {} does not divide P with m={m}", self.minpoly())));
        }
        let ok = self.poly_f_tuple(&pt, &a1).is_zero();
        checks.push(("a1_annihilated".to_string(), ok));
        if !ok {
            return Err(fail("a1_annihilated", "P~(F) a1 != 0".into()));
        }
        Ok(SplitCertificate { m, pv, a0, a1, checks })
    }

    /// `p(v)^r a = g(F) (F - 1) a`, given `P~^r(F) a = 0`.
    pub fn euclid_descent(&self, a: &KTuple, m: u32, r: u32) -> Result<DescentReport> {
        let ptr = annihilator_family(m, true).pow(r);
        let residual = self.poly_f_tuple(&ptr, a);
        if !residual.is_zero() {
            let (w, v) = residual.components.iter().enumerate().find(|(_, v)| !mv_is_zero(v)).unwrap();
            return Err(Error::PreconditionFailure(format!(
                "P~^{r}(F) a is nonzero at w={}: {}",
                self.g().word_string(w),
                render_modvec(v)
            )));
        }
        let (pr, gpoly) = split_at_one(&ptr);
        let xm1 = BivarPoly::linear(LaurentPoly::one());
        let lhs = a.scale(&pr);
        let rhs = self.poly_f_tuple(&(&gpoly * &xm1), a);
        if lhs != rhs {
            return Err(Error::IdentityFailure { check: "descent".into(), witness: format!("r={r}") });
        }
        let den: BTreeMap<u32, u32> = (1..=m).map(|i| (i, r)).collect();
        let localized = gpoly
            .coeffs()
            .iter()
            .map(|c| LocalizedScalar::new(c.clone(), den.clone()).map(|x| x.reduce().to_string()))
            .collect::<Result<Vec<_>>>()?;
        Ok(DescentReport { r, g: gpoly.coeffs().iter().map(|c| c.to_string()).collect(), localized })
    }

    fn free_solver(&self, kind: usize) -> &Solver {
        self.free[kind].get_or_init(|| {
            let g = self.g();
            let n = self.n();
            let phi = self.model.kinds()[kind].phi(g);
            let mut big = LMat::zeros(n * n, n * n);
            for y in g.elements() {
                for w in g.elements() {
                    let m = &phi[g.mul(y, g.inverse(w))];
                    for i in 0..n {
                        for j in 0..n {
                            let e = m.get(i, j);
                            if !e.is_zero() {
                                big.set(y * n + i, w * n + j, e.clone());
                            }
                        }
                    }
                }
            }
            Solver::from_lmat(&big)
        })
    }

    /// Write `a` as a combination of free tuples over the field of
    /// fractions; `None` if `a` is not in their span.
    pub fn express_in_free_span(&self, a: &KTuple, m: u32, rmax: u32) -> Option<FreeSpanReport> {
        let n = self.n();
        let g = self.g();
        let mut cols: Vec<usize> = a.components.iter().flat_map(|v| v.keys().copied()).collect();
        cols.sort_unstable();
        cols.dedup();
        let solved: Vec<Option<Vec<(Elem, usize, RVec)>>> = cols
            .par_iter()
            .map(|&c| {
                let rhs: LVec = g
                    .elements()
                    .flat_map(|y| match a.components[y].get(&c) {
                        Some(col) => col.clone(),
                        None => vec![LaurentPoly::zero(); n],
                    })
                    .collect();
                let x = self.free_solver(self.model.columns()[c].kind).solve_laurent(&rhs)?;
                Some(
                    g.elements()
                        .map(|w| (w, c, x[w * n..(w + 1) * n].to_vec()))
                        .filter(|(_, _, v)| v.iter().any(|e| !e.is_zero()))
                        .collect(),
                )
            })
            .collect();
        let mut terms = Vec::new();
        for s in solved {
            terms.extend(s?);
        }
        let mut denominators: Vec<LaurentPoly> = terms
            .iter()
            .flat_map(|(_, _, v)| v.iter().map(|e| e.denom().clone()))
            .filter(|d| !d.is_unit())
            .collect();
        denominators.sort_by_key(|d| d.to_string());
        denominators.dedup();
        let p_power = denominators
            .iter()
            .map(|d| divides_p_power(d, m, rmax))
            .try_fold(0u32, |acc, k| k.map(|k| acc.max(k)));
        Some(FreeSpanReport { terms, denominators, p_power })
    }

    /// Exact check that `p^k a = sum make_free(w, p^k c)` with polynomial
    /// `p^k c`.
    pub fn verify_free_span(&self, a: &KTuple, rep: &FreeSpanReport, pk: &LaurentPoly) -> bool {
        let mut acc = KTuple::zero(self.n());
        for (w, c, v) in &rep.terms {
            let mut col = Vec::with_capacity(v.len());
            for e in v {
                match (e * &RatFunc::from(pk.clone())).to_poly() {
                    Some(p) => col.push(p),
                    None => return false,
                }
            }
            acc = acc.add(&self.make_free(*w, &ModVec::from([(*c, col)])));
        }
        acc == a.scale(pk)
    }

    pub fn random_laurent<R: Rng>(rng: &mut R) -> LaurentPoly {
        let terms = rng.gen_range(1..=2);
        LaurentPoly::from_terms((0..terms).map(|_| (rng.gen_range(-2..=2i64), rng.gen_range(-3..=3i64))))
    }

    /// A random vector supported on up to `ncols` random columns.
    pub fn random_vector<R: Rng>(&self, rng: &mut R, ncols: usize) -> ModVec {
        let n = self.n();
        let mut v = ModVec::new();
        for _ in 0..ncols.max(1) {
            let c = rng.gen_range(0..self.num_columns());
            let col: LVec =
                (0..n).map(|_| if rng.gen_bool(0.4) { Self::random_laurent(rng) } else { LaurentPoly::zero() }).collect();
            v.insert(c, col);
        }
        prune(v)
    }

    /// A random tuple satisfying the gluing condition: free tuples, their
    /// images under `iota`, and scalar multiples of the constant tuple on the
    /// trivial orbit.
    pub fn random_gluing_tuple<R: Rng>(&self, rng: &mut R, ncols: usize) -> KTuple {
        let g = self.g();
        let mut t = KTuple::zero(self.n());
        for _ in 0..rng.gen_range(1..=2) {
            let w = rng.gen_range(0..g.order());
            t = t.add(&self.make_free(w, &self.random_vector(rng, ncols)));
        }
        if rng.gen_bool(0.5) {
            let w = rng.gen_range(0..g.order());
            t = t.add(&self.iota(&self.make_free(w, &self.random_vector(rng, ncols))));
        }
        let triv = self.trivial_columns();
        if !triv.is_empty() && rng.gen_bool(0.5) {
            let c = Self::random_laurent(rng);
            t = t.add(&self.constant_tuple(&self.unit_on(triv)).scale(&c));
        }
        t
    }

    /// `{weyl word -> {column label -> coefficient strings}}`.
    pub fn tuple_to_json(&self, t: &KTuple) -> serde_json::Value {
        let g = self.g();
        let mut out = serde_json::Map::new();
        for (w, v) in t.components.iter().enumerate() {
            let mut cols = serde_json::Map::new();
            for (c, col) in v {
                let column = self.model.columns()[*c];
                let label = self.model.orbits()[column.orbit].orbit().points[column.point].to_string();
                cols.insert(label, col.iter().map(|x| x.to_string()).collect::<Vec<_>>().into());
            }
            out.insert(g.word_string(w), cols.into());
        }
        out.into()
    }
}

pub fn render_modvec(v: &ModVec) -> String {
    v.iter()
        .map(|(c, col)| format!("[{c}: {}]", col.iter().map(|x| x.to_string()).join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}
