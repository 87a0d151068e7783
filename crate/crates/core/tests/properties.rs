//! Property tests for the spectral, joint and approximation invariants.

use bfn_core::oracle::{
    self, conditional_expectation, correlation, enum_best_linear, enum_mismatch, inner_product,
    map_estimator, naive_coefficient, random_function,
};
use bfn_core::{
    best_k_junta, best_linear, builtin, cross_expectation, emit_truth_table, feasible_rho_interval,
    inverse_transform, l1_norm, make_joint, mismatch_probability, noise_sensitivity,
    parse_truth_table, project, transform, weighted_subset_transform, Bias, BooleanFunction,
    HypercubeFunction, RealTable, SubsetMask,
};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn arb_function(max_n: usize) -> impl Strategy<Value = BooleanFunction> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 1 << n)
            .prop_map(move |t| BooleanFunction::from_table(n, t).unwrap())
    })
}

fn arb_bias() -> impl Strategy<Value = Bias> {
    (0.02f64..0.98).prop_map(|p| Bias::new(p).unwrap())
}

fn arb_pair(max_n: usize) -> impl Strategy<Value = (BooleanFunction, BooleanFunction)> {
    (1..=max_n).prop_flat_map(|n| {
        let table = proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 1 << n);
        (table.clone(), table).prop_map(move |(a, b)| {
            (
                BooleanFunction::from_table(n, a).unwrap(),
                BooleanFunction::from_table(n, b).unwrap(),
            )
        })
    })
}

fn flip_outside(n: usize, j: SubsetMask) -> impl Iterator<Item = u32> {
    (0..n).filter(move |&i| !j.contains(i)).map(|i| 1u32 << i)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(f in arb_function(10), b in arb_bias()) {
        prop_assert!((transform(&f, b).l2_norm_sq() - 1.0).abs() <= TOL);
    }

    #[test]
    fn round_trip(f in arb_function(10), b in arb_bias()) {
        let back = inverse_transform(&transform(&f, b));
        for (x, v) in back.values().iter().enumerate() {
            prop_assert!((v - f64::from(f.at(x as u32))).abs() <= TOL);
        }
    }

    #[test]
    fn round_trip_real_tables(vals in proptest::collection::vec(-3.0f64..3.0, 64), b in arb_bias()) {
        let t = RealTable::new(6, vals).unwrap();
        let back = inverse_transform(&transform(&t, b));
        for (a, c) in back.values().iter().zip(t.values()) {
            prop_assert!((a - c).abs() <= TOL);
        }
    }

    #[test]
    fn butterfly_matches_naive(f in arb_function(8), b in arb_bias()) {
        let n = f.arity();
        let spec = transform(&f, b);
        let values = f.real_values();
        for s in 0..1u32 << n {
            let naive = naive_coefficient(&values, n, SubsetMask(s), b);
            prop_assert!((spec.coefficient(SubsetMask(s)) - naive).abs() <= TOL);
        }
    }

    #[test]
    fn plancherel((f, g) in arb_pair(8), b in arb_bias()) {
        let n = f.arity();
        let direct = inner_product(&f.real_values(), &g.real_values(), n, b);
        let spectral: f64 = transform(&f, b).coefficients().iter()
            .zip(transform(&g, b).coefficients()).map(|(a, c)| a * c).sum();
        prop_assert!((direct - spectral).abs() <= TOL);
    }

    #[test]
    fn projection_is_conditional_expectation(f in arb_function(7), b in arb_bias(), j in any::<u32>()) {
        let n = f.arity();
        let j = SubsetMask(j & SubsetMask::full(n).bits());
        let t = project(&f, j, b).unwrap();
        let direct = conditional_expectation(&f, j, b);
        for (a, c) in t.values().iter().zip(direct.values()) {
            prop_assert!((a - c).abs() <= TOL);
            prop_assert!(a.abs() <= 1.0 + TOL);
        }
    }

    #[test]
    fn projection_is_measurable(f in arb_function(8), b in arb_bias(), j in any::<u32>()) {
        let n = f.arity();
        let j = SubsetMask(j & SubsetMask::full(n).bits());
        let t = project(&f, j, b).unwrap();
        // exact equality: flipping a coordinate outside J must not move any value
        for bit in flip_outside(n, j) {
            for x in 0..1u32 << n {
                prop_assert_eq!(t.at(x).to_bits(), t.at(x ^ bit).to_bits(),
                    "x={} bit={}", x, bit);
            }
        }
    }

    #[test]
    fn l1_monotone_under_inclusion(f in arb_function(7), b in arb_bias(), j in any::<u32>(), extra in any::<u32>()) {
        let n = f.arity();
        let full = SubsetMask::full(n).bits();
        let small = SubsetMask(j & full);
        let large = SubsetMask((j | extra) & full);
        let l_small = l1_norm(&project(&f, small, b).unwrap(), b);
        let l_large = l1_norm(&project(&f, large, b).unwrap(), b);
        prop_assert!(l_small <= l_large + 1e-12);
        let spec = transform(&f, b);
        prop_assert!((spec.projection_l1(small) - l_small).abs() <= TOL);
    }

    #[test]
    fn cross_expectation_matches_pair_enumeration((f, g) in arb_pair(6), p in arb_bias(), q in arb_bias(), t in 0.0f64..=1.0) {
        let (lo, hi) = feasible_rho_interval(p, q);
        let rho = lo + t * (hi - lo);
        let m = make_joint(p, q, rho).unwrap();
        let closed = mismatch_probability(&f, &g, &m).unwrap();
        let direct = enum_mismatch(&f, &g, &m).unwrap();
        prop_assert!((closed - direct).abs() <= TOL, "{} vs {}", closed, direct);
    }

    #[test]
    fn mismatch_symmetry((f, g) in arb_pair(6), p in arb_bias(), q in arb_bias(), t in 0.0f64..=1.0) {
        let (lo, hi) = feasible_rho_interval(p, q);
        let rho = lo + t * (hi - lo);
        let m = make_joint(p, q, rho).unwrap();
        let m_rev = make_joint(q, p, rho).unwrap();
        let a = mismatch_probability(&f, &g, &m).unwrap();
        let c = mismatch_probability(&g, &f, &m_rev).unwrap();
        prop_assert!((a - c).abs() <= 1e-12);
        let c2 = mismatch_probability(&g, &f, &m.swapped()).unwrap();
        prop_assert!((a - c2).abs() <= 1e-12);
    }

    #[test]
    fn independence_factorizes((f, g) in arb_pair(6), p in arb_bias(), q in arb_bias()) {
        let m = make_joint(p, q, 0.0).unwrap();
        let e = cross_expectation(&f, &g, &m).unwrap();
        let means = transform(&f, p).coefficient(SubsetMask::EMPTY) * transform(&g, q).coefficient(SubsetMask::EMPTY);
        prop_assert_eq!(e, means);
    }

    #[test]
    fn noise_sensitivity_range(f in arb_function(8), p in arb_bias(), q in arb_bias(), t in 0.0f64..=1.0) {
        let (lo, hi) = feasible_rho_interval(p, q);
        let m = make_joint(p, q, lo + t * (hi - lo)).unwrap();
        let ns = noise_sensitivity(&f, &m);
        prop_assert!((0.0..=1.0).contains(&ns));
        let same = make_joint(p, p, 1.0).unwrap();
        prop_assert!(noise_sensitivity(&f, &same).abs() <= 1e-12);
    }

    #[test]
    fn weighted_stats_are_correlations(f in arb_function(8), b in arb_bias()) {
        let n = f.arity();
        let spec = transform(&f, b);
        let stats = weighted_subset_transform(&spec);
        prop_assert!((stats.get(SubsetMask::EMPTY) - spec.coefficient(SubsetMask::EMPTY)).abs() <= 1e-12);
        for s in 0..1u32 << n {
            let direct = correlation(&f, SubsetMask(s), b);
            prop_assert!((stats.get(SubsetMask(s)) - direct).abs() <= TOL);
        }
    }

    #[test]
    fn junta_report_invariants(f in arb_function(6), b in arb_bias(), k in 0usize..6) {
        let n = f.arity();
        prop_assume!(k < n);
        let r = best_k_junta(&f, k, b).unwrap();
        let l1 = r.l1.unwrap();
        prop_assert!((r.mismatch - (1.0 - l1) / 2.0).abs() <= 1e-12);
        let bd = r.bounds.unwrap();
        prop_assert!(bd.lower <= r.mismatch + 1e-12 && r.mismatch <= bd.upper + 1e-12);
        prop_assert!(r.approximant.depends_only_on(r.support));
        prop_assert_eq!(r.support.len(), k);
        // the reported mismatch is the true mismatch of the approximant
        let direct = oracle::mismatch_of(&f, &r.approximant, b);
        prop_assert!((direct - r.mismatch).abs() <= TOL);
    }

    #[test]
    fn junta_is_map_estimator(f in arb_function(6), b in arb_bias(), k in 0usize..6) {
        let n = f.arity();
        prop_assume!(k < n);
        let r = best_k_junta(&f, k, b).unwrap();
        prop_assert_eq!(&r.approximant, &map_estimator(&f, r.support, b));
    }

    #[test]
    fn junta_mismatch_nonincreasing_in_k(f in arb_function(6), b in arb_bias()) {
        let n = f.arity();
        let values: Vec<f64> = (0..n).map(|k| best_k_junta(&f, k, b).unwrap().mismatch).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn linear_report_invariants(f in arb_function(6), b in arb_bias()) {
        let r = best_linear(&f, b);
        let stats = weighted_subset_transform(&transform(&f, b));
        prop_assert!((r.mismatch - (1.0 - stats.get(r.support).abs()) / 2.0).abs() <= 1e-12);
        prop_assert!(r.approximant.depends_only_on(r.support));
        let (best, _) = enum_best_linear(&f, b).unwrap();
        prop_assert!((r.mismatch - best).abs() <= TOL);
    }

    #[test]
    fn truth_table_round_trip(f in arb_function(8)) {
        prop_assert_eq!(parse_truth_table(&emit_truth_table(&f)).unwrap(), f);
    }
}

#[test]
fn index_convention_flips_one_coordinate() {
    for n in 1..=4usize {
        for i in 0..n {
            let dictator = builtin(&format!("parity:{}:{n}", i + 1)).unwrap();
            for x in 0..1u32 << n {
                let flipped = x ^ (1 << i);
                assert_eq!(dictator.at(x), -dictator.at(flipped));
                for other in (0..n).filter(|&o| o != i) {
                    let d = builtin(&format!("parity:{}:{n}", other + 1)).unwrap();
                    assert_eq!(d.at(x), d.at(flipped));
                }
            }
        }
    }
}

#[test]
fn uniform_linear_picks_largest_coefficient() {
    let mut rng = oracle::seeded_rng(11);
    for _ in 0..20 {
        let f = random_function(6, &mut rng);
        let spec = transform(&f, Bias::uniform());
        let r = best_linear(&f, Bias::uniform());
        let max = spec
            .coefficients()
            .iter()
            .map(|c| c.abs())
            .fold(0.0, f64::max);
        assert!((spec.coefficient(r.support).abs() - max).abs() <= 1e-12);
        assert_eq!(
            r.sign_constant.unwrap(),
            bfn_core::sign(spec.coefficient(r.support))
        );
    }
}

#[test]
fn full_parity_noise_tends_to_half() {
    for rho in [-0.9, -0.4, 0.3, 0.8] {
        let m = make_joint(Bias::uniform(), Bias::uniform(), rho).unwrap();
        let ns: Vec<f64> = (1..=9)
            .map(|n| noise_sensitivity(&builtin(&format!("parity:{n}")).unwrap(), &m))
            .collect();
        for w in ns.windows(2) {
            assert!((w[1] - 0.5).abs() < (w[0] - 0.5).abs(), "rho={rho}: {ns:?}");
        }
    }
}

#[test]
fn majority5_four_junta_sandwich() {
    let f = builtin("maj:5").unwrap();
    let r = best_k_junta(&f, 4, Bias::uniform()).unwrap();
    let bd = r.bounds.unwrap();
    assert!(bd.lower <= r.mismatch && r.mismatch <= bd.upper);
    assert!(bd.lower < bd.upper);
}
