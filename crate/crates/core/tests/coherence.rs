//! Coherence of the operator and its iterates, plus the norm and drift
//! inequalities the limit algorithms lean on.

mod common;

use common::average_map_iterate;
use imc_core::random::{random_gamble, random_operator, SamplerConfig};
use imc_core::{build_upper_graph, Gamble};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const TOL: f64 = 1e-9;

#[test]
fn c1_to_c6_hold_for_operator_and_iterates() {
    let mut rng = StdRng::seed_from_u64(101);
    let cfg = SamplerConfig::default();
    for _ in 0..120 {
        let n = rng.gen_range(2..=5);
        let op = random_operator(n, &cfg, &mut rng);
        let h = random_gamble(n, -2.0, 2.0, &mut rng);
        let g = random_gamble(n, -2.0, 2.0, &mut rng);
        let lambda: f64 = rng.gen_range(0.0..3.0);
        let mu: f64 = rng.gen_range(-2.0..2.0);

        for k in 1..=3usize {
            let th = op.iterate_upper(&h, k).unwrap();
            let tg = op.iterate_upper(&g, k).unwrap();

            // C1': boundedness.
            assert!(th.max() <= h.max() + TOL && th.min() >= h.min() - TOL);

            // C2': sub-additivity.
            let t_sum = op.iterate_upper(&h.add(&g), k).unwrap();
            assert!(common::le_within(&t_sum, &th.add(&tg), TOL));

            // C3': non-negative homogeneity.
            let t_scaled = op.iterate_upper(&h.scale(lambda), k).unwrap();
            assert!(t_scaled.sub(&th.scale(lambda)).sup_norm() <= TOL);

            // C4': constant additivity.
            let t_shifted = op.iterate_upper(&h.shift(mu), k).unwrap();
            assert!(t_shifted.sub(&th.shift(mu)).sup_norm() <= TOL);

            // C5': monotonicity, on the dominating pair (h, h + |g|).
            let above = Gamble::new(
                h.values().iter().zip(g.values()).map(|(a, b)| a + b.abs()).collect(),
            )
            .unwrap();
            let t_above = op.iterate_upper(&above, k).unwrap();
            assert!(common::le_within(&th, &t_above, TOL));

            // C6': mixed sub-additivity.
            let t_diff = op.iterate_upper(&h.sub(&g), k).unwrap();
            assert!(common::le_within(&th.sub(&tg), &t_diff, TOL));
        }
    }
}

#[test]
fn operator_is_non_expansive_in_both_norms() {
    let mut rng = StdRng::seed_from_u64(202);
    let cfg = SamplerConfig::default();
    for _ in 0..150 {
        let n = rng.gen_range(2..=5);
        let op = random_operator(n, &cfg, &mut rng);
        let h = random_gamble(n, -3.0, 3.0, &mut rng);
        let g = random_gamble(n, -3.0, 3.0, &mut rng);
        let th = op.apply_upper(&h).unwrap();
        let tg = op.apply_upper(&g).unwrap();
        let diff = h.sub(&g);
        let t_diff = th.sub(&tg);
        assert!(t_diff.sup_norm() <= diff.sup_norm() + 1e-12);
        assert!(t_diff.hilbert_seminorm() <= diff.hilbert_seminorm() + 1e-12);
    }
}

#[test]
fn average_map_drifts_at_most_k_sup_norm_f_from_plain_iterates() {
    let mut rng = StdRng::seed_from_u64(303);
    let cfg = SamplerConfig::default();
    for _ in 0..100 {
        let n = rng.gen_range(2..=4);
        let op = random_operator(n, &cfg, &mut rng);
        let h = random_gamble(n, -2.0, 2.0, &mut rng);
        let f = random_gamble(n, -1.0, 1.0, &mut rng);
        for k in 0..=10usize {
            let plain = op.iterate_upper(&h, k).unwrap();
            let averaged = average_map_iterate(&op, &f, &h, k);
            assert!(
                plain.sub(&averaged).sup_norm() <= k as f64 * f.sup_norm() + TOL,
                "k = {k}"
            );
        }
    }
}

#[test]
fn expected_averages_stay_within_the_range_of_f() {
    let mut rng = StdRng::seed_from_u64(404);
    let cfg = SamplerConfig::default();
    for _ in 0..100 {
        let n = rng.gen_range(2..=5);
        let op = random_operator(n, &cfg, &mut rng);
        let f = random_gamble(n, -4.0, 4.0, &mut rng);
        for k in [0, 1, 2, 5, 13, 30] {
            let avg = op.upper_expected_average(&f, k).unwrap();
            assert!(avg.max() <= f.max() + 1e-12 && avg.min() >= f.min() - 1e-12);
        }
    }
}

#[test]
fn averages_on_a_maximal_class_ignore_f_outside_it_exactly() {
    let mut rng = StdRng::seed_from_u64(505);
    let cfg = SamplerConfig::default();
    let mut classes_seen = 0;
    for _ in 0..120 {
        let n = rng.gen_range(2..=5);
        let op = random_operator(n, &cfg, &mut rng);
        let f = random_gamble(n, -2.0, 2.0, &mut rng);
        let decomposition = build_upper_graph(&op).decompose();
        for class in decomposition.maximal_classes() {
            classes_seen += 1;
            let mut keep = vec![false; n];
            for &x in class {
                keep[x] = true;
            }
            let masked = f.masked(&keep);
            for k in [1, 3, 7, 12] {
                let full = op.upper_expected_average(&f, k).unwrap();
                let confined = op.upper_expected_average(&masked, k).unwrap();
                for &x in class {
                    assert_eq!(
                        full.get(x),
                        confined.get(x),
                        "class {class:?}, state {x}, k = {k}"
                    );
                }
            }
        }
    }
    assert!(classes_seen >= 100);
}

#[test]
fn average_map_is_topical() {
    let mut rng = StdRng::seed_from_u64(606);
    let cfg = SamplerConfig::default();
    for _ in 0..100 {
        let n = rng.gen_range(2..=4);
        let op = random_operator(n, &cfg, &mut rng);
        let f = random_gamble(n, -1.0, 1.0, &mut rng);
        let h = random_gamble(n, -2.0, 2.0, &mut rng);
        let g = random_gamble(n, -2.0, 2.0, &mut rng);
        let mu: f64 = rng.gen_range(-2.0..2.0);

        // T1: constant additivity.
        let lhs = average_map_iterate(&op, &f, &h.shift(mu), 1);
        let rhs = average_map_iterate(&op, &f, &h, 1).shift(mu);
        assert!(lhs.sub(&rhs).sup_norm() <= TOL);

        // T2: monotonicity on a dominating pair.
        let above = Gamble::new(
            h.values().iter().zip(g.values()).map(|(a, b)| a + b.abs()).collect(),
        )
        .unwrap();
        let low = average_map_iterate(&op, &f, &h, 1);
        let high = average_map_iterate(&op, &f, &above, 1);
        assert!(common::le_within(&low, &high, 1e-12));
    }
}
