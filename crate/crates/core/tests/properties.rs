use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, OnceLock};

use klwb_core::charpoints::{orbits_up_to, poincare_q, CharacterPoint, SignConvention};
use klwb_core::coxeter::{CartanType, WeylGroup};
use klwb_core::hecke::{Convention, HeckeAlgebra};
use klwb_core::k0model::KModule;
use klwb_core::klalgebra::{KLModel, Letter};
use klwb_core::rings::{annihilator_family, split_at_one, BivarPoly, LaurentPoly, LocalizedScalar};
use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TYPES: [&str; 5] = ["A1", "A2", "B2", "G2", "A3"];

fn group(t: &str) -> Arc<WeylGroup> {
    static CACHE: OnceLock<Vec<Arc<WeylGroup>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        TYPES.iter().map(|t| Arc::new(WeylGroup::build(t.parse::<CartanType>().unwrap()).unwrap())).collect()
    });
    all[TYPES.iter().position(|x| *x == t).unwrap()].clone()
}

fn module(t: &str) -> &'static KModule {
    static A1: OnceLock<KModule> = OnceLock::new();
    static A2: OnceLock<KModule> = OnceLock::new();
    let cell = if t == "A1" { &A1 } else { &A2 };
    cell.get_or_init(|| KModule::new(Arc::new(KLModel::new(group(t), 4))))
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    (-3i64..=3, prop::collection::vec(-4i64..=4, 0..5)).prop_map(|(low, c)| LaurentPoly::from_coeffs(low, &c))
}

fn nonzero_laurent() -> impl Strategy<Value = LaurentPoly> {
    laurent().prop_filter("nonzero", |p| !p.is_zero())
}

fn bivar() -> impl Strategy<Value = BivarPoly> {
    prop::collection::vec(laurent(), 0..4).prop_map(BivarPoly::new)
}

fn group_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&TYPES[..])
}

fn point(rank: usize) -> impl Strategy<Value = CharacterPoint> {
    (1i64..=6, prop::collection::vec(0i64..6, rank))
        .prop_map(|(d, ks)| CharacterPoint::new(ks.into_iter().map(|k| Rational64::new(k, d)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, LaurentPoly::zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn bar_is_a_ring_involution(a in laurent(), b in laurent()) {
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in laurent(), b in nonzero_laurent()) {
        let p = &a * &b;
        prop_assert_eq!(p.div_exact(&b), Some(a.clone()));
        let g = a.gcd(&b);
        prop_assert!(g.divides(&a) && g.divides(&b));
    }

    #[test]
    fn laurent_parse_round_trip(a in laurent()) {
        prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
    }

    #[test]
    fn divmod_round_trip(f in bivar(), lower in prop::collection::vec(laurent(), 0..3)) {
        let mut coeffs = lower;
        coeffs.push(LaurentPoly::one());
        let g = BivarPoly::new(coeffs);
        let (q, r) = f.divmod_x(&g).unwrap();
        prop_assert_eq!(&(&q * &g) + &r, f);
        prop_assert!(r.degree().is_none_or(|d| d < g.degree().unwrap()));
    }

    #[test]
    fn localized_reduce_is_idempotent(a in laurent(), i in 1u32..=4, j in 1u32..=4, e in 1u32..=2) {
        let den: BTreeMap<u32, u32> = [(i, e), (j, 1)].into_iter().fold(BTreeMap::new(), |mut m, (k, n)| {
            *m.entry(k).or_insert(0) += n;
            m
        });
        let num = &a * &LaurentPoly::one_minus_v2i(j);
        let x = LocalizedScalar::new(num, den).unwrap();
        let r = x.reduce();
        prop_assert_eq!(r.reduce(), r.clone());
        prop_assert_eq!(r.to_ratfunc(), x.to_ratfunc());
    }

    #[test]
    fn bruhat_matches_subwords(t in group_name(), w in 0usize..24, u in 0usize..24) {
        let g = group(t);
        let (w, u) = (w % g.order(), u % g.order());
        let word = g.word(w);
        let mut below = HashSet::new();
        for mask in 0u32..(1 << word.len()) {
            let sub: Vec<u8> = word.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &s)| s).collect();
            below.insert(g.from_word(&sub));
        }
        prop_assert_eq!(g.bruhat_leq(u, w), below.contains(&u));
    }

    #[test]
    fn canonical_word_is_lex_least_reduced(t in group_name(), w in 0usize..24) {
        let g = group(t);
        let w = w % g.order();
        let l = g.length(w);
        prop_assert_eq!(g.word(w).len(), l);
        prop_assert_eq!(g.from_word(g.word(w)), w);
        let n = g.rank() as u64;
        let least = (0..n.pow(l as u32))
            .map(|mut k| (0..l).map(|_| { let s = (k % n) as u8; k /= n; s }).collect::<Vec<u8>>())
            .map(|mut v| { v.reverse(); v })
            .filter(|v| g.from_word(v) == w)
            .min();
        prop_assert_eq!(least.as_deref(), Some(g.word(w)));
    }

    #[test]
    fn min_coset_reps_factor_the_group(t in group_name(), mask in 0u32..8) {
        let g = group(t);
        let k: Vec<usize> = (0..g.rank()).filter(|s| mask >> s & 1 == 1).collect();
        let wk = g.parabolic_elements(&k);
        let reps = g.min_coset_reps(&k);
        prop_assert_eq!(wk.len() * reps.len(), g.order());
        let mut seen = HashSet::new();
        for &a in &wk {
            for &x in &reps {
                let ax = g.mul(a, x);
                prop_assert_eq!(g.length(ax), g.length(a) + g.length(x));
                prop_assert!(seen.insert(ax));
            }
        }
    }

    #[test]
    fn pairing_is_equivariant((t, p) in group_name().prop_flat_map(|t| (Just(t), point(group(t).rank()))), w in 0usize..24) {
        let g = group(t);
        let w = w % g.order();
        let wp = p.act(&g, w);
        for beta in 0..g.num_positive_roots() {
            let (img, positive) = g.act_positive(w, beta);
            let lhs = wp.pairing(&g.positive_coroots()[img]);
            let rhs = p.pairing(&g.positive_coroots()[beta]);
            let rhs = if positive { rhs } else { CharacterPoint::new(vec![-rhs]).coords()[0] };
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn stabilizer_poincare_at_one((t, p) in group_name().prop_flat_map(|t| (Just(t), point(group(t).rank())))) {
        let g = group(t);
        let sub = p.wl_subsystem(&g);
        let one = BigInt::from(1);
        let pos = poincare_q(&sub, SignConvention::PositiveV2).eval_int(&one).unwrap();
        prop_assert_eq!(pos, BigInt::from(sub.order()));
        let neg = poincare_q(&sub, SignConvention::NegativeV2).eval_int(&one).unwrap();
        prop_assert_eq!(neg, BigInt::from(i32::from(sub.order() == 1)));
        for &w in &sub.elements {
            prop_assert!(p.act(&g, w) == p);
        }
    }

    #[test]
    fn convention_round_trip(t in group_name(), w in 0usize..24, c in laurent()) {
        let g = group(t);
        let h = HeckeAlgebra::new(g.clone());
        let a = h.basis(Convention::Ly, w % g.order()).scale(&c);
        prop_assert_eq!(h.convert(&h.convert(&a, Convention::Std), Convention::Ly), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn split_at_one_identity(m in 1u32..=6) {
        let pt = annihilator_family(m, true);
        let (pv, r) = split_at_one(&pt);
        let rebuilt = &pt + &(&r * &BivarPoly::linear(LaurentPoly::one()));
        prop_assert_eq!(rebuilt, BivarPoly::constant(pv.clone()));
        prop_assert_eq!(pv, klwb_core::rings::p_of_v(m));
    }

    #[test]
    fn iota_squared_is_fulltwist(t in prop::sample::select(&["A1", "A2"][..]), seed in any::<u64>()) {
        let km = module(t);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = km.random_gluing_tuple(&mut rng, 2);
        prop_assert_eq!(km.iota_sq(&a), km.iota_sq_by_fulltwist(&a));
        prop_assert!(km.check_gluing(&a).passed());
    }

    #[test]
    fn canonical_identity_holds(t in prop::sample::select(&["A1", "A2"][..]), seed in any::<u64>()) {
        let km = module(t);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = km.random_vector(&mut rng, 3);
        prop_assert_eq!(km.canonical_identity(&k), Vec::<usize>::new());
    }

    #[test]
    fn projection_is_multiplicative(
        a in prop::collection::vec((0usize..2, any::<bool>()), 0..4),
        b in prop::collection::vec((0usize..2, any::<bool>()), 0..4),
    ) {
        let model = module("A2").model();
        let letters = |w: &[(usize, bool)]| -> Vec<Letter> {
            w.iter().map(|&(s, inv)| if inv { Letter::inv(s) } else { Letter::gen(s) }).collect()
        };
        let (la, lb) = (letters(&a), letters(&b));
        let lab: Vec<Letter> = la.iter().chain(&lb).copied().collect();
        let prod = model.kl_mul(&model.kl_element(&la), &model.kl_element(&lb)).unwrap();
        prop_assert_eq!(prod.projections, model.kl_element(&lab).projections);
    }
}

#[test]
fn kl_basis_is_bar_invariant_with_positive_offdiagonal() {
    for t in TYPES {
        let g = group(t);
        let h = HeckeAlgebra::new(g.clone());
        for w in g.elements() {
            let c = h.kl_element(w);
            assert_eq!(&h.bar(c), c, "{t} C_{}", g.word_string(w));
            assert!(c.coeff(w).is_one());
            for y in g.elements().filter(|&y| y != w) {
                let p = h.kl_poly(y, w);
                assert!(p.is_zero() || (g.bruhat_leq(y, w) && p.min_exp().unwrap() >= 1), "{t} h_{y},{w} = {p}");
            }
        }
        for s in 0..g.rank() {
            let expected = h.from_terms(Convention::Std, &[(g.simple(s), LaurentPoly::one()), (0, LaurentPoly::v())]);
            assert_eq!(h.kl_element(g.simple(s)), &expected);
        }
    }
}

#[test]
fn orbits_partition_the_points() {
    for t in TYPES {
        let g = group(t);
        let orbits = orbits_up_to(&g, 4);
        let total: usize = orbits.iter().map(|o| o.len()).sum();
        let distinct: HashSet<CharacterPoint> = orbits.iter().flat_map(|o| o.points.iter().cloned()).collect();
        assert_eq!(total, distinct.len());
        for o in &orbits {
            assert_eq!(o.len() * o.group_stabilizer_order, g.order());
        }
    }
}
