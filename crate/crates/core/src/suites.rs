//! Verification suites and data dumps with deterministic reports.
//!
//! Random inputs are drawn sequentially from a seeded ChaCha stream per sample
//! before any parallel work, so the output does not depend on the thread
//! count.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::charpoints::{chevalley_divisibility, orbits_up_to, poincare_q, qpoly_row, CharacterPoint, SignConvention};
use crate::coxeter::{CartanType, WeylGroup, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};
use crate::hecke::{Convention, HeckeAlgebra, TiltingVariant};
use crate::k0model::{mv_add, KModule, KTuple};
use crate::klalgebra::{divides_family, eigen_exponents, KLModel, Letter};
use crate::report::{CheckResult, Status};
use crate::rings::{p_of_v, specialize_sqrt_q, LaurentPoly};

/// Exponent bound `m` in the annihilator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentBound {
    /// `l(w0)`
    Short,
    /// `2 l(w0)`
    Safe,
    Int(u32),
}

impl ExponentBound {
    pub fn resolve(self, g: &WeylGroup) -> u32 {
        let l = g.num_positive_roots() as u32;
        match self {
            Self::Short => l,
            Self::Safe => 2 * l,
            Self::Int(m) => m,
        }
    }
}

impl fmt::Display for ExponentBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Short => f.write_str("paper"),
            Self::Safe => f.write_str("safe"),
            Self::Int(m) => write!(f, "{m}"),
        }
    }
}

impl FromStr for ExponentBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Self::Short),
            "safe" => Ok(Self::Safe),
            _ => match s.parse::<u32>() {
                Ok(m) if m > 0 => Ok(Self::Int(m)),
                _ => Err(Error::Config(format!("invalid exponent bound '{s}'"))),
            },
        }
    }
}

impl Serialize for ExponentBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    #[serde(rename = "type", serialize_with = "ser_display")]
    pub cartan_type: CartanType,
    pub den: i64,
    pub m: ExponentBound,
    pub seed: u64,
    /// randomized samples; each suite has its own default
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

fn ser_display<T: fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

impl RunConfig {
    pub fn new(cartan_type: CartanType) -> Self {
        Self { cartan_type, den: 6, m: ExponentBound::Safe, seed: 0, samples: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.den < 1 {
            return Err(Error::Config(format!("denominator bound must be positive, got {}", self.den)));
        }
        if self.samples == Some(0) {
            return Err(Error::Config("samples must be positive".into()));
        }
        Ok(())
    }

    pub fn group(&self) -> Result<Arc<WeylGroup>> {
        self.validate()?;
        Ok(Arc::new(WeylGroup::build_capped(self.cartan_type, DEFAULT_ORDER_CAP)?))
    }

    fn samples_or(&self, d: usize) -> usize {
        self.samples.unwrap_or(d)
    }

    /// The ChaCha stream for sample `i`.
    pub fn rng(&self, i: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(i);
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Braid,
    Cubic,
    Pi,
    W0,
    Minpoly,
    Canonical,
    Gluing,
    Polyconj,
    Tilting,
    Chevalley,
    Cells,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Braid,
        Suite::Cubic,
        Suite::Pi,
        Suite::W0,
        Suite::Minpoly,
        Suite::Canonical,
        Suite::Gluing,
        Suite::Polyconj,
        Suite::Tilting,
        Suite::Chevalley,
        Suite::Cells,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Braid => "braid",
            Suite::Cubic => "cubic",
            Suite::Pi => "pi",
            Suite::W0 => "w0",
            Suite::Minpoly => "minpoly",
            Suite::Canonical => "canonical",
            Suite::Gluing => "gluing",
            Suite::Polyconj => "polyconj",
            Suite::Tilting => "tilting",
            Suite::Chevalley => "chevalley",
            Suite::Cells => "cells",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dump {
    Cells,
    FulltwistScalars,
    Qpoly,
    OrbitTable,
}

impl FromStr for Dump {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cells" => Ok(Dump::Cells),
            "fulltwist_scalars" => Ok(Dump::FulltwistScalars),
            "qpoly" => Ok(Dump::Qpoly),
            "orbit_table" => Ok(Dump::OrbitTable),
            _ => Err(Error::Config(format!("unknown dump '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub results: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.results.iter().any(CheckResult::is_fail)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.is_fail())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} type={} den={} m={} seed={}\n",
            self.command, self.config.cartan_type, self.config.den, self.config.m, self.config.seed
        );
        for r in &self.results {
            let tag = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Finding => "FINDING",
            };
            out.push_str(&format!("{tag:<8} {}: {}\n", r.check, r.detail));
            if let Some(w) = &r.witness {
                out.push_str(&format!("         witness: {w}\n"));
            }
        }
        if let Some(d) = &self.data {
            out.push_str(&render_data(d, 0));
        }
        out
    }
}

fn render_data(v: &serde_json::Value, indent: usize) -> String {
    let pad = " ".repeat(indent);
    match v {
        serde_json::Value::Object(m) => m
            .iter()
            .map(|(k, x)| match x {
                serde_json::Value::Array(rows) if rows.iter().any(|r| r.is_object()) => {
                    format!("{pad}{k}:\n{}", rows.iter().map(|r| format!("{pad}  {}\n", flat_row(r))).collect::<String>())
                }
                serde_json::Value::Object(_) => format!("{pad}{k}:\n{}", render_data(x, indent + 2)),
                _ => format!("{pad}{k}: {}\n", scalar_text(x)),
            })
            .collect(),
        _ => format!("{pad}{}\n", scalar_text(v)),
    }
}

/// `key=value` pairs on one line, nested keys dotted.
fn flat_row(v: &serde_json::Value) -> String {
    fn go(prefix: &str, v: &serde_json::Value, out: &mut Vec<String>) {
        match v {
            serde_json::Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    go(&key, x, out);
                }
            }
            _ => out.push(format!("{prefix}={}", scalar_text(v))),
        }
    }
    let mut out = Vec::new();
    go("", v, &mut out);
    out.join(" ")
}

fn scalar_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(xs) => format!("[{}]", xs.iter().map(scalar_text).join(", ")),
        serde_json::Value::Object(_) => format!("{{{}}}", flat_row(v)),
        other => other.to_string(),
    }
}

/// Run `f` on a pool with `threads` workers (global pool when `None`).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Config("threads must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    let g = cfg.group()?;
    let results = match suite {
        Suite::Braid => suite_braid(&g, cfg),
        Suite::Cubic => suite_cubic(&g, cfg),
        Suite::Pi => suite_pi(&g, cfg),
        Suite::W0 => suite_w0(&g, cfg),
        Suite::Minpoly => suite_minpoly(&g, cfg),
        Suite::Canonical => suite_canonical(&g, cfg),
        Suite::Gluing => suite_gluing(&g, cfg),
        Suite::Polyconj => suite_polyconj(&g, cfg),
        Suite::Tilting => suite_tilting(&g),
        Suite::Chevalley => suite_chevalley(&g, cfg),
        Suite::Cells => suite_cells(&g),
    };
    Ok(Report { command: format!("verify {}", suite.name()), config: cfg.clone(), results, data: None })
}

fn orbit_label(m: &KLModel, o: usize) -> String {
    format!("orbit {}", m.orbits()[o].orbit().representative())
}

fn suite_braid(g: &Arc<WeylGroup>, cfg: &RunConfig) -> Vec<CheckResult> {
    let m = KLModel::new(g.clone(), cfg.den);
    (0..m.orbits().len())
        .into_par_iter()
        .map(|o| {
            let bad = m.verify_braid(o);
            CheckResult::verdict(
                format!("braid {}", orbit_label(&m, o)),
                bad.is_none(),
                format!("{} blocks", m.orbits()[o].num_blocks()),
                || {
                    let (s, t) = bad.unwrap();
                    format!("s={} t={}", s + 1, t + 1)
                },
            )
        })
        .collect()
}

fn suite_cubic(g: &Arc<WeylGroup>, cfg: &RunConfig) -> Vec<CheckResult> {
    let m = KLModel::new(g.clone(), cfg.den);
    let jobs: Vec<(usize, usize)> = (0..m.orbits().len()).flat_map(|o| (0..g.rank()).map(move |s| (o, s))).collect();
    jobs.par_iter()
        .flat_map_iter(|&(o, s)| {
            let cubic = m.verify_cubic(s, o);
            let square = m.operator_square_identity(s, o);
            let label = orbit_label(&m, o);
            [
                CheckResult::verdict(format!("cubic s={} {label}", s + 1), cubic.is_none(), "(a_s + v^2)(a_s^2 - 1) = 0", || {
                    format!("block {}", cubic.clone().unwrap())
                }),
                CheckResult::verdict(
                    format!("operator_square s={} {label}", s + 1),
                    square.is_none(),
                    "(a_s^2 - 1)^2 = (v^4 - 1)(a_s^2 - 1)",
                    || format!("block {}", square.clone().unwrap()),
                ),
            ]
        })
        .collect()
}

/// One sample of the three projection properties on a block.
struct PiSample {
    l: usize,
    w1: usize,
    w2: usize,
    inner: Option<usize>,
    outer: Option<usize>,
}

fn suite_pi(g: &Arc<WeylGroup>, cfg: &RunConfig) -> Vec<CheckResult> {
    let m = KLModel::new(g.clone(), cfg.den);
    let samples = cfg.samples_or(200);
    let mut out = Vec::new();
    for o in 0..m.orbits().len() {
        let alg = &m.orbits()[o];
        let mut rng = cfg.rng(o as u64);
        let draws: Vec<PiSample> = (0..samples)
            .map(|_| {
                let l = rng.gen_range(0..alg.num_blocks());
                let sub = &alg.orbit().stabilizers[l];
                let outside: Vec<usize> = (0..g.rank()).filter(|&s| !alg.in_wl(l, s)).collect();
                PiSample {
                    l,
                    w1: rng.gen_range(0..g.order()),
                    w2: rng.gen_range(0..g.order()),
                    inner: Some(sub.elements[rng.gen_range(0..sub.order())]),
                    outer: (!outside.is_empty()).then(|| outside[rng.gen_range(0..outside.len())]),
                }
            })
            .collect();
        let verdicts: Vec<(bool, bool, Option<bool>)> = draws
            .par_iter()
            .map(|d| {
                let w1 = m.word_of(d.w1);
                let w2 = m.word_of(d.w2);
                let mut both = w1.clone();
                both.extend_from_slice(&w2);
                let lhs = m.pi_column(&both, o, d.l);
                let rhs = alg.mul(&m.pi_column(&w1, o, alg.act(d.w2, d.l)), &m.pi_column(&w2, o, d.l)).unwrap();
                let y = d.inner.unwrap();
                let wl = m.pi_column(&m.word_of(y), o, d.l) == alg.basis(y, d.l);
                let sq = d.outer.map(|s| m.pi_column(&[Letter::gen(s), Letter::gen(s)], o, d.l) == alg.idempotent(d.l));
                (lhs == rhs, wl, sq)
            })
            .collect();
        let label = orbit_label(&m, o);
        let first = |f: &dyn Fn(&(bool, bool, Option<bool>)) -> bool| verdicts.iter().position(|v| !f(v));
        let wit = |i: usize| {
            let d = &draws[i];
            format!(
                "L={} w1={} w2={}",
                alg.orbit().points[d.l],
                g.word_string(d.w1),
                g.word_string(d.w2)
            )
        };
        let bad = first(&|v| v.0);
        out.push(CheckResult::verdict(format!("pi_product_law {label}"), bad.is_none(), format!("{samples} pairs"), || {
            wit(bad.unwrap())
        }));
        let bad = first(&|v| v.1);
        out.push(CheckResult::verdict(format!("pi_on_wl {label}"), bad.is_none(), format!("{samples} samples"), || {
            let d = &draws[bad.unwrap()];
            format!("L={} w={}", alg.orbit().points[d.l], g.word_string(d.inner.unwrap()))
        }));
        let tested = verdicts.iter().filter(|v| v.2.is_some()).count();
        let bad = first(&|v| v.2 != Some(false));
        out.push(CheckResult::verdict(
            format!("pi_square_outside {label}"),
            bad.is_none(),
            format!("{tested} samples with s outside W_L°"),
            || {
                let d = &draws[bad.unwrap()];
                format!("L={} s={}", alg.orbit().points[d.l], d.outer.unwrap() + 1)
            },
        ));
    }
    out
}

fn suite_w0(g: &Arc<WeylGroup>, cfg: &RunConfig) -> Vec<CheckResult> {
    let m = KLModel::new(g.clone(), cfg.den);
    let reports: Vec<_> = (0..m.orbits().len()).into_par_iter().map(|o| m.check_w0_identity(o)).collect();
    let mut out = Vec::new();
    let (mut total, mut ly_inv, mut std_inv) = (0, 0, 0);
    for (o, rep) in reports.iter().enumerate() {
        let bad = rep.iter().find(|b| !(b.intrinsic_square && b.ambient_square));
        out.push(CheckResult::verdict(
            format!("w0_identity {}", orbit_label(&m, o)),
            bad.is_none(),
            format!("{} blocks", rep.len()),
            || {
                let b = bad.unwrap();
                format!("L={} W_L°={} w0L={} lhs={}", b.point, b.wl_type, b.w0l, b.lhs)
            },
        ));
        total += rep.len();
        ly_inv += rep.iter().filter(|b| b.ly_inverse_square).count();
        std_inv += rep.iter().filter(|b| b.std_inverse_square).count();
    }
    out.push(CheckResult::finding(
        "w0_identity inverse_square_variants",
        format!(
            "v^(2l) T_(w0L)^-2 matches on {ly_inv}/{total} blocks in ly normalization and {std_inv}/{total} in std normalization"
        ),
    ));
    out
}

fn suite_minpoly(g: &Arc<WeylGroup>, cfg: &RunConfig) -> Vec<CheckResult> {
    let m = KLModel::new(g.clone(), cfg.den);
    let f = m.fulltwist_minpoly();
    let l = g.num_positive_roots() as u32;
    let mut out = vec![CheckResult::pass("minpoly", format!("{f}"))];
    let safe = divides_family(&f, 2 * l);
    out.push(CheckResult::verdict(
        format!("minpoly divides P(m=2l(w0)={})", 2 * l),
        safe,
        "safe range",
        || format!("{f}"),
    ));
    let short = divides_family(&f, l);
    out.push(if short {
        CheckResult::pass(format!("minpoly divides P(m=l(w0)={l})"), "short range")
    } else {
        CheckResult::finding(format!("minpoly divides P(m=l(w0)={l})"), format!("does not divide: {f}"))
    });
    if let ExponentBound::Int(k) = cfg.m {
        let ok = divides_family(&f, k);
        out.push(if ok {
            CheckResult::pass(format!("minpoly divides P(m={k})"), "configured range")
        } else {
            CheckResult::finding(format!("minpoly divides P(m={k})"), "does not divide")
        });
    }
    let eig = eigen_exponents(&f, 4 * l + 2);
    let deg = f.degree().unwrap_or(0);
    out.push(CheckResult::finding(
        "eigenvalues",
        format!(
            "v^(2i) for i in {eig:?}{}",
            if eig.len() == deg { "" } else { " (plus roots not of this form)" }
        ),
    ));
    let wider = KLModel::new(g.clone(), cfg.den + 2).fulltwist_minpoly();
    out.push(if wider == f {
        CheckResult::pass("minpoly stable at den+2", format!("den={}", cfg.den + 2))
    } else {
        CheckResult::finding("minpoly stable at den+2", format!("changes to {wider}"))
    });
    out
}

fn suite_canonical(g: &Arc<WeylGroup>, cfg: &RunConfig) -> Vec<CheckResult> {
    let km = KModule::new(Arc::new(KLModel::new(g.clone(), cfg.den)));
    let samples = cfg.samples_or(20);
    let mut vecs: Vec<(String, crate::k0model::ModVec)> = (0..samples)
        .map(|i| (format!("random #{i}"), km.random_vector(&mut cfg.rng(i as u64), 3)))
        .collect();
    // one probe per kind so every column type is exercised
    let model = km.model().clone();
    for (k, kind) in model.kinds().iter().enumerate() {
        let c = model.column_index(kind.example.0, kind.example.1);
        let mut rng = cfg.rng(1_000_000 + k as u64);
        let col = (0..g.order()).map(|_| KModule::random_laurent(&mut rng)).collect();
        vecs.push((format!("kind #{k}"), [(c, col)].into_iter().collect()));
    }
    vecs.par_iter()
        .map(|(name, k)| {
            let bad = km.canonical_identity(k);
            CheckResult::verdict(format!("canonical_identity {name}"), bad.is_empty(), format!("all {} y", g.order()), || {
                bad.iter().map(|&y| g.word_string(y)).join(",")
            })
        })
        .collect()
}

fn random_tuples(km: &KModule, cfg: &RunConfig, n: usize) -> Vec<KTuple> {
    (0..n).map(|i| km.random_gluing_tuple(&mut cfg.rng(i as u64), 2)).collect()
}

fn suite_gluing(g: &Arc<WeylGroup>, cfg: &RunConfig) -> Vec<CheckResult> {
    let km = KModule::new(Arc::new(KLModel::new(g.clone(), cfg.den)));
    let samples = cfg.samples_or(50);
    let tuples = random_tuples(&km, cfg, samples);
    let mut out = Vec::new();
    let bad = tuples.iter().position(|t| !km.check_gluing(t).passed());
    out.push(CheckResult::verdict("gluing random_tuples", bad.is_none(), format!("{samples} tuples"), || {
        format!("sample #{}", bad.unwrap())
    }));
    let bad = tuples.iter().position(|t| km.iota_sq(t) != km.iota_sq_by_fulltwist(t));
    out.push(CheckResult::verdict("iota_sq agreement", bad.is_none(), format!("{samples} tuples"), || {
        format!("sample #{}", bad.unwrap())
    }));

    let triv = km.constant_tuple(&km.unit_on(km.trivial_columns()));
    let rep = km.check_gluing(&triv);
    let dens: Vec<String> = {
        let mut d: Vec<String> = rep
            .witnesses
            .iter()
            .flat_map(|w| w.x.values().flatten())
            .filter(|x| !x.denom().is_unit())
            .map(|x| x.denom().to_string())
            .collect();
        d.sort();
        d.dedup();
        d
    };
    out.push(CheckResult::verdict(
        "gluing constant_unit trivial_orbit",
        rep.passed(),
        format!("witness denominators {dens:?}"),
        || format!("{:?}", rep.failures.first()),
    ));
    let full = km.constant_tuple(&km.unit());
    let rep = km.check_gluing(&full);
    out.push(if rep.passed() {
        CheckResult::pass("gluing constant_unit all_orbits", "glues")
    } else {
        let (s, w, c) = rep.failures[0];
        let col = km.model().columns()[c];
        let pt = &km.model().orbits()[col.orbit].orbit().points[col.point];
        CheckResult::finding(
            "gluing constant_unit all_orbits",
            "the constant unit tuple glues only on the trivial orbit",
        )
        .with_witness(format!("s={} w={} L={pt}", s + 1, g.word_string(w)))
    });

    // a block where a_s^2 = 1 has no room for a non-free correction
    let model = km.model().clone();
    let n = g.order();
    let degenerate = model.columns().iter().enumerate().find_map(|(c, col)| {
        let kind = &model.kinds()[col.kind];
        (0..g.rank())
            .find(|&s| kind.gens[s].mul(&kind.gens[s]) == crate::rings::linalg::LMat::identity(n))
            .map(|s| (c, s))
    });
    match degenerate {
        Some((c, s)) => {
            let mut t = tuples.first().cloned().unwrap_or_else(|| KTuple::zero(n));
            let sv = g.simple(s);
            t.components[sv] = mv_add(&t.components[sv], &km.unit_on([c]));
            let rep = km.check_gluing(&t);
            out.push(CheckResult::verdict(
                "gluing adversarial_tuple_rejected",
                !rep.passed(),
                format!("perturbed a_s on column {c}"),
                || "perturbed tuple passed".into(),
            ));
        }
        None => out.push(CheckResult::pass("gluing adversarial_tuple_rejected", "no block with a_s^2 = 1 configured")),
    }
    out
}

/// Largest group order for which the free-span system (`|W|^2` unknowns per
/// column over the fraction field) is solved.
pub const FREE_SPAN_MAX_ORDER: usize = 8;
const SKIPPED: &str = "skipped";

fn suite_polyconj(g: &Arc<WeylGroup>, cfg: &RunConfig) -> Vec<CheckResult> {
    let km = KModule::new(Arc::new(KLModel::new(g.clone(), cfg.den)));
    let m = cfg.m.resolve(g);
    let small = g.order() <= FREE_SPAN_MAX_ORDER;
    // larger groups pay seconds per Horner pass of P(F) on a tuple
    let samples = cfg.samples_or(if small { 50 } else { 2 });
    let rmax = if small { 2 } else { 1 };
    let tuples = random_tuples(&km, cfg, samples);
    let pv = p_of_v(m);
    let outcomes: Vec<(Result<()>, Result<()>, std::result::Result<u32, String>)> = tuples
        .par_iter()
        .map(|a| {
            let split = km.polyconj_split(a, m);
            let descent = match &split {
                Ok(cert) => (1..=rmax).try_for_each(|r| km.euclid_descent(&cert.a1, m, r).map(|_| ())),
                Err(e) => Err(e.clone()),
            };
            let span = match small.then(|| km.express_in_free_span(a, m, 8)) {
                None => Err(SKIPPED.to_string()),
                Some(None) => Err("not in the free span".to_string()),
                Some(Some(rep)) => match rep.p_power {
                    Some(k) if k <= 3 && km.verify_free_span(a, &rep, &pv.pow(k)) => Ok(k),
                    Some(k) => Err(format!("needs p(v)^{k}")),
                    None => Err(format!("inadmissible denominators {:?}", rep.denominators.iter().map(|d| d.to_string()).collect::<Vec<_>>())),
                },
            };
            (split.map(|_| ()), descent, span)
        })
        .collect();
    let annihilated = km.family_annihilates(m);
    let status_for = |e: &Error| match e {
        Error::IdentityFailure { check, .. } if check == "module_annihilated" && cfg.m != ExponentBound::Safe => {
            Status::Finding
        }
        _ => Status::Fail,
    };
    let mut out = Vec::new();
    let first_err = outcomes.iter().enumerate().find_map(|(i, o)| o.0.as_ref().err().map(|e| (i, e)));
    out.push(match first_err {
        None => CheckResult::pass("polyconj_split", format!("{samples} tuples, sum, fixed square, v^4-1 chain, a1 annihilated, m={m}")),
        Some((i, e)) => CheckResult::new("polyconj_split", status_for(e), format!("m={m}"))
            .with_witness(format!("sample #{i}: {e:?}")),
    });
    let first_err = outcomes.iter().enumerate().find_map(|(i, o)| o.1.as_ref().err().map(|e| (i, e)));
    out.push(match first_err {
        None => CheckResult::pass("euclid_descent", format!("{samples} tuples, r=1..={rmax} on a1")),
        Some((i, e)) => CheckResult::new("euclid_descent", status_for(e), format!("m={m}"))
            .with_witness(format!("sample #{i}: {e:?}")),
    });
    let first_err = outcomes.iter().enumerate().find_map(|(i, o)| o.2.as_ref().err().map(|e| (i, e)));
    let mut powers: Vec<u32> = outcomes.iter().filter_map(|o| o.2.as_ref().ok().copied()).collect();
    powers.sort_unstable();
    powers.dedup();
    out.push(match first_err {
        _ if g.order() > FREE_SPAN_MAX_ORDER => CheckResult::finding(
            "free_span",
            format!("not attempted: {} unknowns per column exceed the exact solver budget", g.order() * g.order()),
        ),
        None => CheckResult::pass("free_span", format!("p(v)^k a in the free span, k in {powers:?}")),
        Some((i, e)) => CheckResult::fail("free_span", "k <= 3", format!("sample #{i}: {e}")),
    });
    out.push(CheckResult::verdict(format!("P(F) annihilates module, m={m}"), annihilated || cfg.m != ExponentBound::Safe, "", || {
        format!("{}", km.minpoly())
    }));
    if !annihilated && cfg.m != ExponentBound::Safe {
        out.last_mut().unwrap().status = Status::Finding;
        out.last_mut().unwrap().detail = format!("minpoly {} is not annihilated", km.minpoly());
    }
    out
}

/// `C_e` coefficient of a tilting candidate and the sign conventions under
/// which it equals the Poincare polynomial of `W`.
pub fn tilting_matches(g: &Arc<WeylGroup>, variant: TiltingVariant) -> (LaurentPoly, Vec<SignConvention>) {
    let h = HeckeAlgebra::new(g.clone());
    let c = h.ic_e_coefficient(&h.tilting_class(variant));
    let sub = CharacterPoint::zero(g.rank()).wl_subsystem(g);
    let signs = [SignConvention::NegativeV2, SignConvention::PositiveV2]
        .into_iter()
        .filter(|&s| poincare_q(&sub, s) == c)
        .collect();
    (c, signs)
}

fn sign_name(s: SignConvention) -> &'static str {
    match s {
        SignConvention::NegativeV2 => "negative_v2",
        SignConvention::PositiveV2 => "positive_v2",
    }
}

fn suite_tilting(g: &Arc<WeylGroup>) -> Vec<CheckResult> {
    let (c, signs) = tilting_matches(g, TiltingVariant::Descending);
    let lit = if signs.len() == 1 {
        CheckResult::pass("tilting descending_weights", format!("C_e coefficient {c} matches {}", sign_name(signs[0])))
    } else {
        CheckResult::finding(
            "tilting descending_weights",
            format!("C_e coefficient {c} matches {} sign conventions", signs.len()),
        )
    };
    let (c, signs) = tilting_matches(g, TiltingVariant::Ascending);
    let asc = CheckResult::verdict(
        "tilting ascending_weights",
        signs.len() == 1,
        format!(
            "C_e coefficient {c} matches {}",
            signs.iter().map(|&s| sign_name(s)).join(",")
        ),
        || c.to_string(),
    );
    vec![lit, asc]
}

fn suite_chevalley(g: &Arc<WeylGroup>, cfg: &RunConfig) -> Vec<CheckResult> {
    let l = g.num_positive_roots() as u32;
    let orbits = orbits_up_to(g, cfg.den);
    let mut out = Vec::new();
    for sign in [SignConvention::PositiveV2, SignConvention::NegativeV2] {
        let bad: Vec<String> = orbits
            .iter()
            .filter(|o| !chevalley_divisibility(&poincare_q(&o.stabilizers[0], sign), l).success)
            .map(|o| format!("{} ({})", o.representative(), o.stabilizers[0].type_name))
            .collect();
        let check = format!("chevalley {}", sign_name(sign));
        let detail = format!("{} orbits, {} fail, m=l(w0)={l}", orbits.len(), bad.len());
        out.push(match (sign, bad.is_empty()) {
            (_, true) => CheckResult::pass(check, detail),
            (SignConvention::PositiveV2, false) => CheckResult::fail(check, detail, bad.join("; ")),
            (SignConvention::NegativeV2, false) => CheckResult::finding(check, detail).with_witness(bad.join("; ")),
        });
    }
    out
}

/// A two-sided cell with the full-twist scalar `(sign, d)` in the std and ly
/// conventions.
pub type CellScalars = (Vec<usize>, Option<(i8, i64)>, Option<(i8, i64)>);

/// Per-cell scalars of the full twist in both conventions.
pub fn fulltwist_scalars(g: &Arc<WeylGroup>) -> Vec<CellScalars> {
    let h = HeckeAlgebra::new(g.clone());
    let cells = h.cells().cells.clone();
    let zs = h.full_twist(Convention::Std);
    let zl = h.full_twist(Convention::Ly);
    cells
        .par_iter()
        .enumerate()
        .map(|(c, members)| {
            (members.clone(), h.cell_scalar(&zs, c).unwrap(), h.cell_scalar(&zl, c).unwrap())
        })
        .collect()
}

fn suite_cells(g: &Arc<WeylGroup>) -> Vec<CheckResult> {
    let h = HeckeAlgebra::new(g.clone());
    let cells = h.cells();
    let sizes: Vec<usize> = cells.cells.iter().map(Vec::len).collect();
    let mut out = vec![CheckResult::verdict(
        "cells partition",
        sizes.iter().sum::<usize>() == g.order() && cells.cells[0] == vec![0],
        format!("{} two-sided cells of sizes {sizes:?}", sizes.len()),
        || format!("{sizes:?}"),
    )];
    let scalars = fulltwist_scalars(g);
    let l = g.num_positive_roots() as i64;
    for (conv, pick) in [("std", 0usize), ("ly", 1)] {
        let vals: Vec<Option<(i8, i64)>> = scalars.iter().map(|x| if pick == 0 { x.1 } else { x.2 }).collect();
        let bad = vals.iter().position(|v| !matches!(v, Some((_, d)) if d % 2 == 0));
        out.push(CheckResult::verdict(
            format!("fulltwist scalar {conv}"),
            bad.is_none(),
            "+-v^even on every cell subquotient",
            || format!("cell {}", bad.unwrap()),
        ));
        if bad.is_none() && conv == "ly" {
            let ds: Vec<i64> = vals.iter().map(|v| v.unwrap().1).collect();
            let within = ds.iter().all(|&d| (0..=2 * l).contains(&d));
            let detail = format!("d per cell {ds:?}, bound 0..={}", 2 * l);
            out.push(if within {
                CheckResult::pass("d_range", detail)
            } else {
                CheckResult::finding("d_range", detail)
            });
        }
    }
    out
}

pub fn run_dump(what: Dump, cfg: &RunConfig) -> Result<Report> {
    let g = cfg.group()?;
    let (name, data) = match what {
        Dump::Cells => {
            let h = HeckeAlgebra::new(g.clone());
            let c = h.cells();
            let words = |xs: &Vec<Vec<usize>>| -> Vec<Vec<String>> {
                xs.iter().map(|cell| cell.iter().map(|&w| g.word_string(w)).collect()).collect()
            };
            let order: Vec<Vec<usize>> = c
                .order
                .iter()
                .map(|row| row.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j).collect())
                .collect();
            ("cells", json!({
                "two_sided": words(&c.cells),
                "below_or_equal": order,
                "left": words(&c.left_cells),
                "right": words(&c.right_cells),
            }))
        }
        Dump::FulltwistScalars => {
            let rows: Vec<serde_json::Value> = fulltwist_scalars(&g)
                .into_iter()
                .map(|(members, s, l)| {
                    let fmt = |x: Option<(i8, i64)>| match x {
                        Some((sg, d)) => json!({"sign": sg, "d": d}),
                        None => json!(null),
                    };
                    json!({
                        "cell": members.iter().map(|&w| g.word_string(w)).collect::<Vec<_>>(),
                        "std": fmt(s),
                        "ly": fmt(l),
                    })
                })
                .collect();
            ("fulltwist_scalars", json!({ "cells": rows }))
        }
        Dump::Qpoly => {
            let l = g.num_positive_roots() as u32;
            let rows: Vec<serde_json::Value> = orbits_up_to(&g, cfg.den)
                .iter()
                .map(|o| {
                    let r = qpoly_row(o.representative(), &o.stabilizers[0]);
                    json!({
                        "point": r.point.to_string(),
                        "wl_type": r.wl_type,
                        "wl_order": r.wl_order,
                        "q_negative_v2": r.q_negative_v2.to_string(),
                        "q_positive_v2": r.q_positive_v2.to_string(),
                        "chevalley_negative_v2": chevalley_divisibility(&r.q_negative_v2, l).success,
                        "chevalley_positive_v2": chevalley_divisibility(&r.q_positive_v2, l).success,
                    })
                })
                .collect();
            ("qpoly", json!({ "orbits": rows }))
        }
        Dump::OrbitTable => {
            let rows: Vec<serde_json::Value> = orbits_up_to(&g, cfg.den)
                .iter()
                .map(|o| {
                    json!({
                        "representative": o.representative().to_string(),
                        "size": o.len(),
                        "group_stabilizer_order": o.group_stabilizer_order,
                        "points": o.points.iter().zip(&o.stabilizers).map(|(p, s)| json!({
                            "point": p.to_string(),
                            "wl_type": s.type_name,
                            "wl_order": s.order(),
                            "w0l": g.word_string(s.longest),
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            ("orbit_table", json!({ "orbits": rows }))
        }
    };
    Ok(Report { command: format!("dump {name}"), config: cfg.clone(), results: Vec::new(), data: Some(data) })
}

/// Exact value of `p(q^(1/2))` for the configured `m`.
pub fn run_specialize(q: u64, cfg: &RunConfig) -> Result<Report> {
    let g = cfg.group()?;
    let m = cfg.m.resolve(&g);
    let val = specialize_sqrt_q(&p_of_v(m), q)?;
    let res = CheckResult::verdict(format!("p(q^1/2) != 0, q={q}, m={m}"), val.nonzero, val.to_string(), || val.to_string());
    Ok(Report {
        command: "specialize".into(),
        config: cfg.clone(),
        results: vec![res],
        data: Some(serde_json::to_value(&val).expect("value serializes")),
    })
}
