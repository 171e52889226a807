//! Dense linear algebra over `Z[v, v^-1]` and its fraction field `Q(v)`.

use std::fmt;

use super::{BivarPoly, LaurentPoly, RatFunc};

pub type LVec = Vec<LaurentPoly>;
pub type RVec = Vec<RatFunc>;

/// A square or rectangular matrix with Laurent polynomial entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LMat {
    rows: usize,
    cols: usize,
    data: Vec<LaurentPoly>,
}

impl LMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![LaurentPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = LaurentPoly::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &LaurentPoly) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_columns(rows: usize, cols: Vec<LVec>) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.into_iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: LaurentPoly) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_scalar(&self) -> Option<LaurentPoly> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if (i == j && *e != c) || (i != j && !e.is_zero()) {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn mul(&self, rhs: &LMat) -> LMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = LMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[LaurentPoly]) -> LVec {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = LaurentPoly::zero();
                for (k, xk) in x.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !xk.is_zero() {
                        acc += &(a * xk);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &LMat) -> LMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        LMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &LMat) -> LMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        LMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> LMat {
        LMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Evaluate a polynomial in `x` at this (square) matrix.
    pub fn eval_poly(&self, f: &BivarPoly) -> LMat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut acc = LMat::zeros(n, n);
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(self).add(&LMat::scalar(n, c));
        }
        acc
    }

    pub fn to_ratfunc(&self) -> RMat {
        RMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().cloned().map(RatFunc::from_poly).collect(),
        }
    }
}

impl fmt::Debug for LMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A matrix over `Q(v)`, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RMat {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl RMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![RatFunc::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: RatFunc) {
        self.data[i * self.cols + j] = x;
    }

    pub fn mul_vec(&self, x: &[RatFunc]) -> RVec {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = RatFunc::zero();
                for (k, xk) in x.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !xk.is_zero() {
                        acc = &acc + &(a * xk);
                    }
                }
                acc
            })
            .collect()
    }

    fn row_mut(&mut self, i: usize) -> &mut [RatFunc] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Reduced row echelon form `R = E * A` kept together with the transform `E`,
/// so that `A x = b` can be solved for many right-hand sides.
#[derive(Clone, Debug)]
pub struct Solver {
    rows: usize,
    cols: usize,
    /// pivot column of each of the first `rank` rows of `R`
    pivots: Vec<usize>,
    transform: RMat,
    rref: RMat,
}

impl Solver {
    pub fn new(a: &RMat) -> Self {
        let (m, n) = (a.rows, a.cols);
        let mut r = a.clone();
        let mut e = RMat::zeros(m, m);
        for i in 0..m {
            e.set(i, i, RatFunc::one());
        }
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == m {
                break;
            }
            // prefer the simplest nonzero pivot to limit coefficient growth
            let Some(p) = (row..m)
                .filter(|&i| !r.get(i, col).is_zero())
                .min_by_key(|&i| weight(r.get(i, col)))
            else {
                continue;
            };
            r.swap_rows(row, p);
            e.swap_rows(row, p);
            let inv = r.get(row, col).inv();
            scale_row(&mut r, row, &inv);
            scale_row(&mut e, row, &inv);
            for i in 0..m {
                if i == row {
                    continue;
                }
                let f = r.get(i, col).clone();
                if f.is_zero() {
                    continue;
                }
                axpy_row(&mut r, i, row, &f);
                axpy_row(&mut e, i, row, &f);
            }
            pivots.push(col);
            row += 1;
        }
        Self { rows: m, cols: n, pivots, transform: e, rref: r }
    }

    pub fn from_lmat(a: &LMat) -> Self {
        Self::new(&a.to_ratfunc())
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The solution of `A x = b` with all free variables zero, or `None` if
    /// the system is inconsistent.
    pub fn solve(&self, b: &[RatFunc]) -> Option<RVec> {
        assert_eq!(b.len(), self.rows);
        let y = self.transform.mul_vec(b);
        if y[self.rank()..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut x = vec![RatFunc::zero(); self.cols];
        for (i, &c) in self.pivots.iter().enumerate() {
            x[c] = y[i].clone();
        }
        Some(x)
    }

    pub fn solve_laurent(&self, b: &[LaurentPoly]) -> Option<RVec> {
        let b: RVec = b.iter().cloned().map(RatFunc::from_poly).collect();
        self.solve(&b)
    }

    /// Row `i` of the reduced echelon form.
    pub fn rref_row(&self, i: usize) -> &[RatFunc] {
        &self.rref.data[i * self.cols..(i + 1) * self.cols]
    }
}

fn weight(x: &RatFunc) -> (usize, usize) {
    (x.denom().num_terms() + x.numer().num_terms(), x.numer().num_terms())
}

fn scale_row(m: &mut RMat, i: usize, c: &RatFunc) {
    if c.is_one() {
        return;
    }
    for x in m.row_mut(i) {
        if !x.is_zero() {
            *x = &*x * c;
        }
    }
}

/// row_i -= f * row_p
fn axpy_row(m: &mut RMat, i: usize, p: usize, f: &RatFunc) {
    for j in 0..m.cols {
        let b = m.get(p, j);
        if b.is_zero() {
            continue;
        }
        let t = f * b;
        let cur = m.get(i, j);
        let new = cur - &t;
        m.set(i, j, new);
    }
}

/// Incremental linear-dependence detector over `Q(v)`: feeds vectors one at a
/// time and reports the first that lies in the span of its predecessors,
/// together with the coefficients expressing it.
#[derive(Default)]
struct DependenceFinder {
    /// (pivot, reduced row with pivot entry 1, its expression in inputs)
    rows: Vec<(usize, RVec, RVec)>,
    fed: usize,
}

impl DependenceFinder {
    /// Returns `Some(c)` with `input_k = sum_{j<k} c_j input_j` when the new
    /// input is dependent.
    fn feed(&mut self, v: RVec) -> Option<RVec> {
        let k = self.fed;
        self.fed += 1;
        let mut v = v;
        let mut expr = vec![RatFunc::zero(); k + 1];
        expr[k] = RatFunc::one();
        for (p, row, rexpr) in &self.rows {
            let f = v[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
            for (x, r) in expr.iter_mut().zip(rexpr) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => {
                // 0 = input_k + sum_{j<k} expr_j input_j
                Some(expr[..k].iter().map(|c| -c).collect())
            }
            Some(p) => {
                let inv = v[p].inv();
                let row: RVec = v.iter().map(|x| x * &inv).collect();
                let rexpr: RVec = expr.iter().map(|x| x * &inv).collect();
                // keep earlier rows reduced at the new pivot
                for (_, r, e) in self.rows.iter_mut() {
                    let f = r[p].clone();
                    if f.is_zero() {
                        continue;
                    }
                    for (x, y) in r.iter_mut().zip(&row) {
                        if !y.is_zero() {
                            *x = &*x - &(&f * y);
                        }
                    }
                    e.resize(k + 1, RatFunc::zero());
                    for (x, y) in e.iter_mut().zip(&rexpr) {
                        if !y.is_zero() {
                            *x = &*x - &(&f * y);
                        }
                    }
                }
                self.rows.push((p, row, rexpr));
                None
            }
        }
    }
}

/// Minimal polynomial of the block-diagonal operator `diag(mats)`, found as the
/// first linear dependence among its powers over `Q(v)`, then cleared to a
/// primitive polynomial over `Z[v, v^-1]` with positive leading coefficient.
pub fn minimal_polynomial(mats: &[LMat]) -> BivarPoly {
    let mut finder = DependenceFinder::default();
    let mut powers: Vec<LMat> = mats.iter().map(|m| LMat::identity(m.rows())).collect();
    loop {
        let flat: RVec = powers
            .iter()
            .flat_map(|p| p.entries().iter().cloned().map(RatFunc::from_poly))
            .collect();
        if let Some(c) = finder.feed(flat) {
            // x^k - sum c_j x^j
            let mut coeffs: Vec<RatFunc> = c.iter().map(|x| -x).collect();
            coeffs.push(RatFunc::one());
            return clear_denominators(&coeffs);
        }
        powers = powers.iter().zip(mats).map(|(p, m)| p.mul(m)).collect();
    }
}

/// Scale a polynomial with `Q(v)` coefficients to a primitive one over
/// `Z[v, v^-1]` (up to units, normalized to a leading coefficient that is a
/// positive integer polynomial with nonzero constant term).
pub fn clear_denominators(coeffs: &[RatFunc]) -> BivarPoly {
    let mut l = LaurentPoly::one();
    for c in coeffs {
        let d = c.denom();
        let g = l.gcd(d);
        l = &l * &d.div_exact(&g).expect("gcd divides");
    }
    let mut polys: Vec<LaurentPoly> = coeffs
        .iter()
        .map(|c| {
            let cof = l.div_exact(c.denom()).expect("lcm is a multiple");
            c.numer() * &cof
        })
        .collect();
    let g = polys.iter().fold(LaurentPoly::zero(), |g, p| if g.is_zero() { p.clone() } else { g.gcd(p) });
    if !g.is_zero() {
        polys = polys.iter().map(|p| p.div_exact(&g).expect("content divides")).collect();
    }
    // normalize by the leading coefficient's unit part
    if let Some(lead) = polys.iter().rev().find(|p| !p.is_zero()) {
        let u = lead.unit_normal();
        let unit = lead.div_exact(&u).expect("unit part");
        polys = polys.iter().map(|p| p.div_exact(&unit).expect("unit")).collect();
    }
    BivarPoly::new(polys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn mat(rows: usize, entries: &[&str]) -> LMat {
        let cols = entries.len() / rows;
        let mut m = LMat::zeros(rows, cols);
        for (k, e) in entries.iter().enumerate() {
            m.set(k / cols, k % cols, lp(e));
        }
        m
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = mat(2, &["1", "v", "v", "v^2"]);
        let s = Solver::from_lmat(&a);
        assert_eq!(s.rank(), 1);
        let x = s.solve_laurent(&[lp("1 + v"), lp("v + v^2")]).unwrap();
        let back = a.to_ratfunc().mul_vec(&x);
        assert_eq!(back, vec![RatFunc::from_poly(lp("1 + v")), RatFunc::from_poly(lp("v + v^2"))]);
        assert!(s.solve_laurent(&[lp("1"), lp("1")]).is_none());
    }

    #[test]
    fn solve_needs_fractions() {
        let a = mat(2, &["1 - v^2", "0", "0", "1"]);
        let s = Solver::from_lmat(&a);
        let x = s.solve_laurent(&[lp("1"), lp("v")]).unwrap();
        assert_eq!(x[0], RatFunc::new(lp("1"), lp("1 - v^2")));
        assert_eq!(x[1], RatFunc::from_poly(lp("v")));
    }

    #[test]
    fn minpoly_of_hecke_generator() {
        // left multiplication by T_s in the ly convention on basis (1, T_s)
        let m = mat(2, &["0", "v^2", "1", "1 - v^2"]);
        let f = minimal_polynomial(std::slice::from_ref(&m));
        let expected = &BivarPoly::linear(lp("1")) * &BivarPoly::linear(lp("-v^2"));
        assert_eq!(f, expected);
        assert!(m.eval_poly(&f).is_zero());
    }

    #[test]
    fn minpoly_of_block_sum_is_lcm() {
        let a = mat(1, &["v^2"]);
        let b = mat(2, &["1", "0", "0", "v^2"]);
        let f = minimal_polynomial(&[a, b]);
        assert_eq!(f, &BivarPoly::linear(lp("1")) * &BivarPoly::linear(lp("v^2")));
        let id = minimal_polynomial(&[LMat::identity(3)]);
        assert_eq!(id, BivarPoly::linear(lp("1")));
    }

    #[test]
    fn clearing_is_primitive() {
        let c = vec![RatFunc::new(lp("1"), lp("2 - 2*v^2")), RatFunc::new(lp("v"), lp("1"))];
        let f = clear_denominators(&c);
        assert_eq!(f.coeff(1), lp("-2 + 2*v^2"));
        assert_eq!(f.coeff(0), lp("-v^-1"));
    }
}
