//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use klwb_core::coxeter::{CartanType, WeylGroup};
use klwb_core::k0model::{KModule, KTuple};
use klwb_core::klalgebra::KLModel;
use klwb_core::suites::RunConfig;

pub fn group(t: &str) -> Arc<WeylGroup> {
    Arc::new(WeylGroup::build(t.parse::<CartanType>().expect("known type")).expect("buildable"))
}

pub fn module(t: &str, den: i64) -> KModule {
    KModule::new(Arc::new(KLModel::new(group(t), den)))
}

/// Deterministic gluing tuples, the same ones the suites draw for seed 0.
pub fn tuples(km: &KModule, t: &str, n: usize) -> Vec<KTuple> {
    let cfg = RunConfig::new(t.parse().expect("known type"));
    (0..n).map(|i| km.random_gluing_tuple(&mut cfg.rng(i as u64), 2)).collect()
}
