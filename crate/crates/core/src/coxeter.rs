//! Finite Weyl groups from Cartan data.
//!
//! Elements are stored as permutations of the signed root set and addressed
//! by their index in a fixed enumeration ordered by (length, canonical word).
//! The identity is always index 0.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the group order, `|W(F4)|`.
pub const DEFAULT_ORDER_CAP: u128 = 1152;

/// Index of an element inside its [`WeylGroup`].
pub type Elem = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    G2,
    F4,
}

impl CartanType {
    pub fn rank(self) -> usize {
        match self {
            CartanType::A(n) | CartanType::B(n) | CartanType::C(n) | CartanType::D(n) => n,
            CartanType::G2 => 2,
            CartanType::F4 => 4,
        }
    }

    /// `|W|`, or `None` on overflow.
    pub fn group_order(self) -> Option<u128> {
        let fact = |n: usize| (1..=n as u128).try_fold(1u128, |a, k| a.checked_mul(k));
        match self {
            CartanType::A(n) => fact(n + 1),
            CartanType::B(n) | CartanType::C(n) => fact(n)?.checked_mul(1u128.checked_shl(n as u32)?),
            CartanType::D(n) => fact(n)?.checked_mul(1u128.checked_shl(n as u32 - 1)?),
            CartanType::G2 => Some(12),
            CartanType::F4 => Some(1152),
        }
    }

    /// Number of positive roots, i.e. `l(w0)`.
    pub fn num_positive_roots(self) -> usize {
        match self {
            CartanType::A(n) => n * (n + 1) / 2,
            CartanType::B(n) | CartanType::C(n) => n * n,
            CartanType::D(n) => n * (n - 1),
            CartanType::G2 => 6,
            CartanType::F4 => 24,
        }
    }

    /// Cartan matrix with `a[i][j] = <alpha_i^vee, alpha_j>`, Bourbaki labels.
    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        match self {
            CartanType::A(n) => (1..n).for_each(|i| link(i - 1, i, -1, -1)),
            CartanType::B(n) => {
                (1..n - 1).for_each(|i| link(i - 1, i, -1, -1));
                // alpha_n short
                link(n - 2, n - 1, -1, -2);
            }
            CartanType::C(n) => {
                (1..n - 1).for_each(|i| link(i - 1, i, -1, -1));
                // alpha_n long
                link(n - 2, n - 1, -2, -1);
            }
            CartanType::D(n) => {
                (1..n - 1).for_each(|i| link(i - 1, i, -1, -1));
                link(n - 3, n - 1, -1, -1);
            }
            CartanType::G2 => link(0, 1, -3, -1),
            CartanType::F4 => {
                link(0, 1, -1, -1);
                link(1, 2, -1, -2);
                link(2, 3, -1, -1);
            }
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B(n) => write!(f, "B{n}"),
            CartanType::C(n) => write!(f, "C{n}"),
            CartanType::D(n) => write!(f, "D{n}"),
            CartanType::G2 => f.write_str("G2"),
            CartanType::F4 => f.write_str("F4"),
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnsupportedType(s.to_string());
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        let t = match (letter, n) {
            ('A', n) if n >= 1 => CartanType::A(n),
            ('B', n) if n >= 2 => CartanType::B(n),
            ('C', n) if n >= 2 => CartanType::C(n),
            ('D', n) if n >= 4 => CartanType::D(n),
            ('G', 2) => CartanType::G2,
            ('F', 4) => CartanType::F4,
            _ => return Err(bad()),
        };
        Ok(t)
    }
}

/// A Weyl group element tagged with its ambient group, for the checked API.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    ambient: u64,
    index: Elem,
}

impl WeylElement {
    pub fn index(self) -> Elem {
        self.index
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Root datum plus the enumerated group.
pub struct WeylGroup {
    id: u64,
    cartan_type: Option<CartanType>,
    cartan: Vec<Vec<i64>>,
    /// positive roots in simple-root coordinates, simple roots first
    roots: Vec<Vec<i64>>,
    /// coroots in simple-coroot coordinates, parallel to `roots`
    coroots: Vec<Vec<i64>>,
    root_lookup: HashMap<Vec<i64>, usize>,
    perms: Vec<Vec<u16>>,
    perm_lookup: HashMap<Vec<u16>, Elem>,
    length: Vec<usize>,
    words: Vec<Vec<u8>>,
    lmul: Vec<Vec<Elem>>,
    rmul: Vec<Vec<Elem>>,
    inv: Vec<Elem>,
    mul_table: Vec<u32>,
    longest: Elem,
    bruhat: Vec<Vec<u64>>,
}

impl fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeylGroup")
            .field("type", &self.type_name())
            .field("order", &self.order())
            .finish()
    }
}

impl WeylGroup {
    pub fn build(t: CartanType) -> Result<Self> {
        Self::build_capped(t, DEFAULT_ORDER_CAP)
    }

    pub fn build_capped(t: CartanType, cap: u128) -> Result<Self> {
        match t.group_order() {
            Some(o) if o <= cap => {}
            _ => return Err(Error::UnsupportedType(format!("{t}: group order exceeds cap {cap}"))),
        }
        let mut g = Self::from_cartan_matrix(&t.cartan_matrix(), cap)?;
        g.cartan_type = Some(t);
        debug_assert_eq!(g.order() as u128, t.group_order().unwrap());
        Ok(g)
    }

    /// Build the Weyl group of an arbitrary (finite type) Cartan matrix.
    /// Rank 0 gives the trivial group.
    pub fn from_cartan_matrix(cartan: &[Vec<i64>], cap: u128) -> Result<Self> {
        let n = cartan.len();
        if cartan.iter().any(|r| r.len() != n) || (0..n).any(|i| cartan[i][i] != 2) {
            return Err(Error::UnsupportedType("malformed Cartan matrix".into()));
        }
        let (roots, coroots) = positive_roots(cartan, 4096)?;
        let np = roots.len();
        let mut root_lookup = HashMap::new();
        for (i, r) in roots.iter().enumerate() {
            root_lookup.insert(r.clone(), i);
            root_lookup.insert(r.iter().map(|c| -c).collect(), np + i);
        }
        let signed = |k: usize| -> (Vec<i64>, Vec<i64>) {
            if k < np {
                (roots[k].clone(), coroots[k].clone())
            } else {
                (roots[k - np].iter().map(|c| -c).collect(), coroots[k - np].iter().map(|c| -c).collect())
            }
        };
        let gens: Vec<Vec<u16>> = (0..n)
            .map(|i| {
                (0..2 * np)
                    .map(|k| {
                        let (r, _) = signed(k);
                        let img = reflect_root(cartan, i, &r);
                        root_lookup[&img] as u16
                    })
                    .collect()
            })
            .collect();

        // enumerate by BFS on left multiplication
        let id: Vec<u16> = (0..2 * np as u16).collect();
        let mut perms = vec![id.clone()];
        let mut lookup: HashMap<Vec<u16>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for gen in &gens {
                let p: Vec<u16> = perms[w].iter().map(|&k| gen[k as usize]).collect();
                if !lookup.contains_key(&p) {
                    if perms.len() as u128 >= cap {
                        return Err(Error::UnsupportedType(format!("group order exceeds cap {cap}")));
                    }
                    lookup.insert(p.clone(), perms.len());
                    queue.push_back(perms.len());
                    perms.push(p);
                }
            }
        }
        let order = perms.len();
        let length: Vec<usize> =
            perms.iter().map(|p| p[..np].iter().filter(|&&k| k as usize >= np).count()).collect();
        let lmul_tmp: Vec<Vec<usize>> = gens
            .iter()
            .map(|gen| {
                perms
                    .iter()
                    .map(|p| lookup[&p.iter().map(|&k| gen[k as usize]).collect::<Vec<u16>>()])
                    .collect()
            })
            .collect();
        // canonical words in increasing length
        let mut by_len: Vec<usize> = (0..order).collect();
        by_len.sort_by_key(|&w| length[w]);
        let mut words_tmp: Vec<Vec<u8>> = vec![Vec::new(); order];
        for &w in &by_len {
            if length[w] == 0 {
                continue;
            }
            let s = (0..n).find(|&s| length[lmul_tmp[s][w]] < length[w]).unwrap();
            let mut word = vec![s as u8];
            word.extend_from_slice(&words_tmp[lmul_tmp[s][w]]);
            words_tmp[w] = word;
        }
        let mut order_idx: Vec<usize> = (0..order).collect();
        order_idx.sort_by(|&a, &b| (length[a], &words_tmp[a]).cmp(&(length[b], &words_tmp[b])));
        let mut new_of_old = vec![0; order];
        for (new, &old) in order_idx.iter().enumerate() {
            new_of_old[old] = new;
        }
        let perms: Vec<Vec<u16>> = order_idx.iter().map(|&o| perms[o].clone()).collect();
        let length: Vec<usize> = order_idx.iter().map(|&o| length[o]).collect();
        let words: Vec<Vec<u8>> = order_idx.iter().map(|&o| words_tmp[o].clone()).collect();
        let lmul: Vec<Vec<Elem>> = lmul_tmp
            .iter()
            .map(|row| order_idx.iter().map(|&o| new_of_old[row[o]]).collect())
            .collect();
        let perm_lookup: HashMap<Vec<u16>, Elem> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let rmul: Vec<Vec<Elem>> = gens
            .iter()
            .map(|gen| {
                perms
                    .iter()
                    .map(|p| perm_lookup[&gen.iter().map(|&k| p[k as usize]).collect::<Vec<u16>>()])
                    .collect()
            })
            .collect();
        let mut inv = vec![0; order];
        for (w, p) in perms.iter().enumerate() {
            let mut q = vec![0u16; p.len()];
            for (k, &img) in p.iter().enumerate() {
                q[img as usize] = k as u16;
            }
            inv[w] = perm_lookup[&q];
        }
        let longest = (0..order).max_by_key(|&w| length[w]).unwrap();
        let mut g = WeylGroup {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            cartan_type: None,
            cartan: cartan.to_vec(),
            roots,
            coroots,
            root_lookup,
            perms,
            perm_lookup,
            length,
            words,
            lmul,
            rmul,
            inv,
            mul_table: Vec::new(),
            longest,
            bruhat: Vec::new(),
        };
        g.mul_table = g.build_mul_table();
        g.bruhat = g.build_bruhat();
        Ok(g)
    }

    fn build_mul_table(&self) -> Vec<u32> {
        let n = self.order();
        let mut t = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let mut x = b;
                for &s in self.words[a].iter().rev() {
                    x = self.lmul[s as usize][x];
                }
                t[a * n + b] = x as u32;
            }
        }
        t
    }

    fn build_bruhat(&self) -> Vec<Vec<u64>> {
        let n = self.order();
        let nw = n.div_ceil(64);
        let mut leq = vec![vec![0u64; nw]; n];
        leq[0][0] = 1;
        // elements are sorted by length, so lower elements come first
        for w in 1..n {
            let s = self.words[w][0] as usize;
            let sw = self.lmul[s][w];
            let mut set = leq[sw].clone();
            for u in bits(&leq[sw]) {
                let su = self.lmul[s][u];
                set[su / 64] |= 1 << (su % 64);
            }
            leq[w] = set;
        }
        leq
    }

    pub fn cartan_type(&self) -> Option<CartanType> {
        self.cartan_type
    }

    pub fn type_name(&self) -> String {
        match self.cartan_type {
            Some(t) => t.to_string(),
            None => classify_cartan(&self.cartan),
        }
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order()
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn longest(&self) -> Elem {
        self.longest
    }

    pub fn num_positive_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    /// Signed index (`p` or `N + p`) of a root given in simple-root coordinates.
    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.root_lookup.get(root).copied()
    }

    /// `<beta^vee, gamma>` for positive roots `beta`, `gamma` (indices).
    pub fn pairing(&self, beta: usize, gamma: usize) -> i64 {
        pair(&self.cartan, &self.coroots[beta], &self.roots[gamma])
    }

    /// Signed root index of `w(root_k)`.
    pub fn act_on_root(&self, w: Elem, k: usize) -> usize {
        self.perms[w][k] as usize
    }

    /// Positive root index and sign of `w(beta)` for a positive root `beta`.
    pub fn act_positive(&self, w: Elem, beta: usize) -> (usize, bool) {
        let k = self.perms[w][beta] as usize;
        let np = self.roots.len();
        if k < np {
            (k, true)
        } else {
            (k - np, false)
        }
    }

    pub fn length(&self, w: Elem) -> usize {
        self.length[w]
    }

    pub fn word(&self, w: Elem) -> &[u8] {
        &self.words[w]
    }

    pub fn simple(&self, s: usize) -> Elem {
        self.lmul[s][0]
    }

    pub fn lmul(&self, s: usize, w: Elem) -> Elem {
        self.lmul[s][w]
    }

    pub fn rmul(&self, w: Elem, s: usize) -> Elem {
        self.rmul[s][w]
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul_table[a * self.order() + b] as Elem
    }

    pub fn inverse(&self, w: Elem) -> Elem {
        self.inv[w]
    }

    pub fn is_left_descent(&self, s: usize, w: Elem) -> bool {
        self.length[self.lmul[s][w]] < self.length[w]
    }

    pub fn is_right_descent(&self, w: Elem, s: usize) -> bool {
        self.length[self.rmul[s][w]] < self.length[w]
    }

    pub fn left_descents(&self, w: Elem) -> Vec<usize> {
        (0..self.rank()).filter(|&s| self.is_left_descent(s, w)).collect()
    }

    /// Product of a word of simple reflections.
    pub fn from_word(&self, word: &[u8]) -> Elem {
        word.iter().rev().fold(0, |x, &s| self.lmul[s as usize][x])
    }

    pub fn bruhat_leq(&self, u: Elem, w: Elem) -> bool {
        self.bruhat[w][u / 64] >> (u % 64) & 1 == 1
    }

    /// The reflection `s_beta` for a positive root index.
    pub fn reflection(&self, beta: usize) -> Elem {
        let np = self.roots.len();
        let p: Vec<u16> = (0..2 * np)
            .map(|k| {
                let (r, sign) = if k < np { (&self.roots[k], 1) } else { (&self.roots[k - np], -1) };
                let c = pair(&self.cartan, &self.coroots[beta], r);
                let img: Vec<i64> =
                    r.iter().zip(&self.roots[beta]).map(|(x, b)| sign * (x - c * b)).collect();
                self.root_lookup[&img] as u16
            })
            .collect();
        self.perm_lookup[&p]
    }

    /// Minimal representatives of the right cosets `W_K x`: the elements with
    /// no left descent in `K`, in element order.
    pub fn min_coset_reps(&self, k: &[usize]) -> Vec<Elem> {
        self.elements().filter(|&w| k.iter().all(|&s| !self.is_left_descent(s, w))).collect()
    }

    /// Elements of the standard parabolic subgroup `W_J`.
    pub fn parabolic_elements(&self, j: &[usize]) -> Vec<Elem> {
        self.elements().filter(|&w| self.words[w].iter().all(|s| j.contains(&(*s as usize)))).collect()
    }

    /// All subsets `J` of `S` by (size, lex), each with the elements of `W_J`.
    pub fn parabolic_subsets(&self) -> Vec<(Vec<usize>, Vec<Elem>)> {
        let n = self.rank();
        let mut subsets: Vec<Vec<usize>> =
            (0u32..1 << n).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect();
        subsets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        subsets
            .into_iter()
            .map(|j| {
                let els = self.parabolic_elements(&j);
                (j, els)
            })
            .collect()
    }

    /// Render as 1-based simple-reflection indices, `"e"` for the identity.
    pub fn word_string(&self, w: Elem) -> String {
        render_word(&self.words[w])
    }

    pub fn parse_element(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(0);
        }
        let word: Vec<u8> = s
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if d >= 1 && (d as usize) <= self.rank() => Ok(d as u8 - 1),
                _ => Err(Error::Parse(format!("bad word {s:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(self.from_word(&word))
    }

    pub fn element(&self, w: Elem) -> WeylElement {
        assert!(w < self.order());
        WeylElement { ambient: self.id, index: w }
    }

    fn check(&self, a: WeylElement) -> Result<Elem> {
        if a.ambient != self.id {
            return Err(Error::MixedAmbient);
        }
        Ok(a.index)
    }

    pub fn mul_checked(&self, a: WeylElement, b: WeylElement) -> Result<WeylElement> {
        Ok(self.element(self.mul(self.check(a)?, self.check(b)?)))
    }

    pub fn length_checked(&self, a: WeylElement) -> Result<usize> {
        Ok(self.length(self.check(a)?))
    }

    pub fn bruhat_leq_checked(&self, a: WeylElement, b: WeylElement) -> Result<bool> {
        Ok(self.bruhat_leq(self.check(a)?, self.check(b)?))
    }

    /// The reflection subgroup generated by the given positive roots, closed
    /// under its own reflections.
    pub fn reflection_subgroup(&self, roots: &[usize]) -> Subsystem {
        let np = self.roots.len();
        let mut set: BTreeSet<usize> = roots.iter().copied().collect();
        let input_len = set.len();
        loop {
            let cur: Vec<usize> = set.iter().copied().collect();
            let mut grew = false;
            for &b in &cur {
                let r = self.reflection(b);
                for &c in &cur {
                    let k = self.act_on_root(r, c);
                    let pos = if k < np { k } else { k - np };
                    grew |= set.insert(pos);
                }
            }
            if !grew {
                break;
            }
        }
        let positive: Vec<usize> = set.iter().copied().collect();
        let simple: Vec<usize> = positive
            .iter()
            .copied()
            .filter(|&c| {
                !positive.iter().any(|&a| {
                    let diff: Vec<i64> = self.roots[c].iter().zip(&self.roots[a]).map(|(x, y)| x - y).collect();
                    self.root_lookup.get(&diff).is_some_and(|&k| set.contains(&k))
                })
            })
            .collect();
        let simple_reflections: Vec<Elem> = simple.iter().map(|&b| self.reflection(b)).collect();
        let mut elements = vec![0];
        let mut seen: BTreeSet<Elem> = BTreeSet::from([0]);
        let mut i = 0;
        while i < elements.len() {
            let w = elements[i];
            for &r in &simple_reflections {
                let x = self.mul(r, w);
                if seen.insert(x) {
                    elements.push(x);
                }
            }
            i += 1;
        }
        let intrinsic: HashMap<Elem, usize> = elements
            .iter()
            .map(|&w| (w, positive.iter().filter(|&&b| !self.act_positive(w, b).1).count()))
            .collect();
        elements.sort_by_key(|&w| (intrinsic[&w], w));
        let longest = *elements.last().unwrap();
        let cartan: Vec<Vec<i64>> =
            simple.iter().map(|&i| simple.iter().map(|&j| self.pairing(i, j)).collect()).collect();
        let type_name = classify_cartan(&cartan);
        Subsystem {
            positive_roots: positive,
            simple_roots: simple,
            simple_reflections,
            elements,
            intrinsic_length: intrinsic,
            longest,
            cartan,
            type_name,
            closure_added: set.len() > input_len,
        }
    }
}

fn bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(i, &word)| {
        (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| i * 64 + b)
    })
}

fn pair(cartan: &[Vec<i64>], coroot: &[i64], root: &[i64]) -> i64 {
    let mut acc = 0;
    for (i, d) in coroot.iter().enumerate() {
        if *d == 0 {
            continue;
        }
        for (j, c) in root.iter().enumerate() {
            acc += d * c * cartan[i][j];
        }
    }
    acc
}

fn reflect_root(cartan: &[Vec<i64>], i: usize, r: &[i64]) -> Vec<i64> {
    let c: i64 = r.iter().enumerate().map(|(j, x)| x * cartan[i][j]).sum();
    let mut out = r.to_vec();
    out[i] -= c;
    out
}

fn reflect_coroot(cartan: &[Vec<i64>], i: usize, r: &[i64]) -> Vec<i64> {
    let c: i64 = r.iter().enumerate().map(|(j, x)| x * cartan[j][i]).sum();
    let mut out = r.to_vec();
    out[i] -= c;
    out
}

/// Positive roots and coroots by closure from the simple ones, sorted by
/// height with simple roots in label order first.
fn positive_roots(cartan: &[Vec<i64>], limit: usize) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let n = cartan.len();
    let unit = |i: usize| (0..n).map(|j| i64::from(i == j)).collect::<Vec<i64>>();
    let mut found: HashMap<Vec<i64>, Vec<i64>> = (0..n).map(|i| (unit(i), unit(i))).collect();
    let mut queue: VecDeque<Vec<i64>> = (0..n).map(unit).collect();
    while let Some(r) = queue.pop_front() {
        let co = found[&r].clone();
        for i in 0..n {
            let img = reflect_root(cartan, i, &r);
            if img.iter().all(|&c| c >= 0) && !found.contains_key(&img) {
                if found.len() >= limit {
                    return Err(Error::UnsupportedType("root system is not of finite type".into()));
                }
                found.insert(img.clone(), reflect_coroot(cartan, i, &co));
                queue.push_back(img);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = found.keys().cloned().collect();
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    let coroots = roots.iter().map(|r| found[r].clone()).collect();
    Ok((roots, coroots))
}

pub fn render_word(word: &[u8]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(|s| char::from_digit(*s as u32 + 1, 36).unwrap()).collect()
}

/// Classify a finite-type Cartan matrix, e.g. `"A2"`, `"A1xA1"`, `"B2"`.
/// The empty matrix gives `"trivial"`.
pub fn classify_cartan(cartan: &[Vec<i64>]) -> String {
    let n = cartan.len();
    if n == 0 {
        return "trivial".to_string();
    }
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        comp[start] = id;
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..n {
                if j != i && cartan[i][j] != 0 && comp[j] == usize::MAX {
                    comp[j] = id;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    let mut names: Vec<(char, usize)> = comps.iter().map(|c| classify_connected(cartan, c)).collect();
    names.sort_by_key(|&n| type_rank_key(n));
    names.iter().map(|(l, r)| format!("{l}{r}")).join("x")
}

fn type_rank_key((l, r): (char, usize)) -> (usize, char, usize) {
    (usize::MAX - r, l, r)
}

fn classify_connected(a: &[Vec<i64>], nodes: &[usize]) -> (char, usize) {
    let r = nodes.len();
    if r == 1 {
        return ('A', 1);
    }
    let deg = |i: usize| nodes.iter().filter(|&&j| j != i && a[i][j] != 0).count();
    let mut max_prod = 1;
    let mut heavy = None;
    for &i in nodes {
        for &j in nodes {
            if i < j && a[i][j] != 0 {
                let p = a[i][j] * a[j][i];
                if p > max_prod {
                    max_prod = p;
                    heavy = Some((i, j));
                }
            }
        }
    }
    match max_prod {
        3 => ('G', 2),
        2 => {
            let (i, j) = heavy.unwrap();
            if r == 2 {
                return ('B', 2);
            }
            let (end, other) = if deg(i) == 1 { (i, j) } else if deg(j) == 1 { (j, i) } else { return ('F', 4) };
            // a[end][other] = -2 means the end node is short
            if a[end][other] == -2 {
                ('B', r)
            } else {
                let _ = other;
                ('C', r)
            }
        }
        _ => {
            if nodes.iter().any(|&i| deg(i) == 3) {
                // D or E; the arm lengths decide
                let branch = *nodes.iter().find(|&&i| deg(i) == 3).unwrap();
                let mut arms: Vec<usize> = nodes
                    .iter()
                    .filter(|&&j| j != branch && a[branch][j] != 0)
                    .map(|&j| arm_length(a, nodes, branch, j))
                    .collect();
                arms.sort_unstable();
                if arms[0] == 1 && arms[1] == 1 {
                    ('D', r)
                } else {
                    ('E', r)
                }
            } else {
                ('A', r)
            }
        }
    }
}

fn arm_length(a: &[Vec<i64>], nodes: &[usize], from: usize, start: usize) -> usize {
    let (mut prev, mut cur, mut len) = (from, start, 1);
    loop {
        let next = nodes.iter().copied().find(|&j| j != prev && j != cur && a[cur][j] != 0);
        match next {
            Some(nx) => {
                prev = cur;
                cur = nx;
                len += 1;
            }
            None => return len,
        }
    }
}

/// Order of the Weyl group of a classified type name like `"A1xB2"`.
pub fn type_order(name: &str) -> Option<u128> {
    if name == "trivial" {
        return Some(1);
    }
    name.split('x').try_fold(1u128, |acc, part| {
        let t: CartanType = match part.parse() {
            Ok(t) => t,
            Err(_) => match part {
                "D2" => return acc.checked_mul(4),
                "D3" => return acc.checked_mul(24),
                "E6" => return acc.checked_mul(51840),
                "E7" => return acc.checked_mul(2903040),
                "E8" => return acc.checked_mul(696729600),
                _ => return None,
            },
        };
        acc.checked_mul(t.group_order()?)
    })
}

/// A reflection subgroup of an ambient Weyl group.
#[derive(Clone, Debug)]
pub struct Subsystem {
    /// ambient positive root indices, sorted
    pub positive_roots: Vec<usize>,
    pub simple_roots: Vec<usize>,
    pub simple_reflections: Vec<Elem>,
    /// ambient elements, sorted by intrinsic length
    pub elements: Vec<Elem>,
    intrinsic_length: HashMap<Elem, usize>,
    /// the intrinsic longest element
    pub longest: Elem,
    /// `<beta_i^vee, beta_j>` on the simple system
    pub cartan: Vec<Vec<i64>>,
    pub type_name: String,
    /// whether closing the input under reflections added roots
    pub closure_added: bool,
}

impl Subsystem {
    pub fn contains(&self, w: Elem) -> bool {
        self.intrinsic_length.contains_key(&w)
    }

    pub fn intrinsic_length(&self, w: Elem) -> Option<usize> {
        self.intrinsic_length.get(&w).copied()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// The abstract Weyl group of this subsystem, with its generators in the
    /// order of `simple_roots`.
    pub fn intrinsic_group(&self) -> WeylGroup {
        WeylGroup::from_cartan_matrix(&self.cartan, u128::MAX).expect("subsystem has finite type")
    }

    /// Ambient image of an element of [`Self::intrinsic_group`].
    pub fn to_ambient(&self, ambient: &WeylGroup, intrinsic: &WeylGroup, u: Elem) -> Elem {
        intrinsic.word(u).iter().fold(0, |acc, &s| ambient.mul(acc, self.simple_reflections[s as usize]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::build(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn orders_and_longest() {
        for (t, order, l0) in [("A1", 2, 1), ("A2", 6, 3), ("A3", 24, 6), ("B2", 8, 4), ("C3", 48, 9), ("G2", 12, 6)] {
            let g = group(t);
            assert_eq!(g.order(), order, "{t}");
            assert_eq!(g.length(g.longest()), l0, "{t}");
            assert_eq!(g.num_positive_roots(), l0);
            assert_eq!(g.mul(g.longest(), g.longest()), 0);
        }
    }

    #[test]
    fn unsupported_types() {
        assert!(matches!("E6".parse::<CartanType>(), Err(Error::UnsupportedType(_))));
        assert!(matches!(WeylGroup::build(CartanType::A(6)), Err(Error::UnsupportedType(_))));
        assert!("D3".parse::<CartanType>().is_err());
    }

    #[test]
    fn braid_relation_a2() {
        let g = group("A2");
        assert_eq!(g.from_word(&[0, 1, 0]), g.from_word(&[1, 0, 1]));
        assert_eq!(g.from_word(&[0, 0]), 0);
        assert_eq!(g.word_string(g.longest()), "121");
    }

    #[test]
    fn bruhat_examples() {
        let g = group("A2");
        let s = g.parse_element("1").unwrap();
        let t = g.parse_element("2").unwrap();
        let st = g.parse_element("12").unwrap();
        let ts = g.parse_element("21").unwrap();
        assert!(g.bruhat_leq(s, st) && g.bruhat_leq(t, st));
        assert!(!g.bruhat_leq(st, ts));
        for w in g.elements() {
            assert!(g.bruhat_leq(0, w) && g.bruhat_leq(w, g.longest()));
        }
    }

    #[test]
    fn coset_reps_a2() {
        let g = group("A2");
        let reps: Vec<String> = g.min_coset_reps(&[0]).iter().map(|&w| g.word_string(w)).collect();
        assert_eq!(reps, ["e", "2", "21"]);
        assert_eq!(g.min_coset_reps(&[]).len(), 6);
        assert_eq!(g.min_coset_reps(&[0, 1]), vec![0]);
    }

    #[test]
    fn parabolic_subsets_b2() {
        let g = group("B2");
        let sizes: Vec<usize> = g.parabolic_subsets().iter().map(|(_, e)| e.len()).collect();
        assert_eq!(sizes, [1, 2, 2, 8]);
    }

    #[test]
    fn subsystems() {
        let g = group("A2");
        let sub = g.reflection_subgroup(&[1]);
        assert_eq!(sub.type_name, "A1");
        assert_eq!(sub.longest, g.simple(1));
        assert_eq!(sub.intrinsic_length(sub.longest), Some(1));
        let full = g.reflection_subgroup(&[0, 1, 2]);
        assert_eq!(full.type_name, "A2");
        for w in g.elements() {
            assert_eq!(full.intrinsic_length(w), Some(g.length(w)));
        }
        let triv = g.reflection_subgroup(&[]);
        assert_eq!(triv.type_name, "trivial");
        assert_eq!(triv.order(), 1);
        // two simple roots generate everything
        assert!(g.reflection_subgroup(&[0, 1]).closure_added);
    }

    #[test]
    fn classify_known_types() {
        for t in ["A3", "B3", "C3", "D4", "F4", "G2", "B2"] {
            let ct: CartanType = t.parse().unwrap();
            assert_eq!(classify_cartan(&ct.cartan_matrix()), t);
        }
        // long roots of B2 form A1xA1
        let g = group("B2");
        let long: Vec<usize> =
            [vec![1, 0], vec![1, 2]].iter().map(|r| g.root_index(r).unwrap()).collect();
        let sub = g.reflection_subgroup(&long);
        assert_eq!(sub.type_name, "A1xA1");
        assert_eq!(type_order(&sub.type_name), Some(sub.order() as u128));
    }

    #[test]
    fn checked_api_rejects_mixed_ambient() {
        let g = group("A1");
        let h = group("A1");
        let a = g.element(1);
        let b = h.element(1);
        assert_eq!(g.mul_checked(a, b), Err(Error::MixedAmbient));
        assert_eq!(g.mul_checked(a, a).unwrap().index(), 0);
    }
}
