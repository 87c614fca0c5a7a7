mod common;

use altmin::linalg::vecops::{norm2_sq, sub};
use altmin::objective::{composite_value, exact_block_min, full_gradient, soft_threshold, FnObjective};
use altmin::prox::{d_monotonicity_check, prox_map, prox_pl_certificate, stationarity_check, stationarity_tolerance};
use altmin::zoo::{make_composite, make_quadratic};
use altmin::{run_am, BlockObjective, BlockPartition, Regularizer, SolverConfig};
use common::{random_point, rng};
use proptest::prelude::*;

#[test]
fn composite_value_resums_terms() {
    let p = make_composite(4, 8, 0.7).unwrap();
    let mut r = rng(8);
    for _ in 0..20 {
        let x = random_point(&mut r, 8, 3.0);
        let residual = sub(&p.base().w().matvec(&x).unwrap(), p.base().b());
        let by_hand = norm2_sq(&residual) + 0.7 * x[..4].iter().map(|v| v.abs()).sum::<f64>();
        let ours = composite_value(&p, &x).unwrap();
        assert!((ours - by_hand).abs() < 1e-12 * (1.0 + by_hand));
    }
}

#[test]
fn l1_by_hand() {
    let h = FnObjective::builder(BlockPartition::contiguous(4, 2).unwrap())
        .regularizers(vec![Regularizer::L1 { weight: 1.0 }, Regularizer::Zero])
        .build();
    assert_eq!(composite_value(&h, &[-1.0, 2.0, 7.0, -7.0]).unwrap(), 3.0);
    assert_eq!(full_gradient(&h, &[1.0; 4]).unwrap(), vec![0.0; 4]);
}

#[test]
fn stationarity_after_block_minimization() {
    let p = make_quadratic(12, 16, 1e3, 2).unwrap();
    let l = p.constants().block_lipschitz.clone().unwrap();
    let mut r = rng(9);
    let x = random_point(&mut r, 16, 1.0);
    // a random point is far from stationary in both blocks
    for (i, li) in l.iter().enumerate() {
        assert!(stationarity_check(&p, &x, i, *li).unwrap() > 1e-3);
    }
    let x = exact_block_min(&p, &x, 1).unwrap();
    assert!(stationarity_check(&p, &x, 1, l[1]).unwrap() <= stationarity_tolerance(&p, &x));
    let opt = p.optimum().unwrap().point.clone();
    for (i, li) in l.iter().enumerate() {
        assert!(stationarity_check(&p, &opt, i, *li).unwrap() < 1e-10);
    }
}

#[test]
fn prox_pl_holds_along_am_iterates() {
    let quad = make_quadratic(14, 16, 100.0, 2).unwrap();
    let comp = make_composite(15, 16, 0.5).unwrap();
    let problems: [&dyn BlockObjective; 2] = [&quad, &comp];
    let cfg = SolverConfig {
        max_iters: 20,
        ..SolverConfig::default()
    };
    for h in problems {
        let mu = h.constants().block_strong_convexity.clone().unwrap();
        let trace = run_am(h, &[0.0; 16], &cfg).unwrap();
        for rec in trace.records.iter().skip(1) {
            for step in &rec.block_steps {
                // block `step.block` is stationary; the certificate concerns the other block
                let other = 1 - step.block;
                let c = prox_pl_certificate(h, &step.after, other, mu[other]).unwrap();
                assert!(c.slack >= -1e-8 * (1.0 + c.lhs.abs()), "slack {}", c.slack);
            }
        }
        let opt = h.optimum().unwrap().point.clone();
        let c = prox_pl_certificate(h, &opt, 0, mu[0]).unwrap();
        assert!(c.slack.abs() < 1e-9);
    }
}

#[test]
fn decrease_functional_grows_with_the_step_constant() {
    let p = make_composite(16, 8, 0.8).unwrap();
    let mut r = rng(10);
    for _ in 0..20 {
        let x = random_point(&mut r, 8, 2.0);
        for i in 0..2 {
            assert!(d_monotonicity_check(&p, &x, i, 0.5, 2.0).unwrap());
        }
    }
    assert!(d_monotonicity_check(&p, &[0.0; 8], 0, 1.0, 1.0).is_err());
}

#[test]
fn l1_prox_map_is_soft_thresholding() {
    let p = make_composite(17, 4, 0.9).unwrap();
    let x = [0.3, -0.2, 1.0, 0.5];
    let m = 7.0;
    let pm = prox_map(&p, &x, 0, m).unwrap();
    let g = p.block_gradient(&x, 0);
    for j in 0..2 {
        assert!((pm.t_point[j] - soft_threshold(x[j] - g[j] / m, 0.9 / m)).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smooth_blocks_collapse_to_the_gradient(
        seed in 0u64..1000,
        m in 0.1f64..100.0,
        x in prop::collection::vec(-5.0f64..5.0, 8),
    ) {
        let p = make_quadratic(seed, 8, 50.0, 2).unwrap();
        for i in 0..2 {
            let pm = prox_map(&p, &x, i, m).unwrap();
            let g = p.block_gradient(&x, i);
            let g2 = norm2_sq(&g);
            prop_assert!((pm.d_value - g2).abs() <= 1e-10 * (1.0 + g2));
            for (a, b) in pm.g_map.iter().zip(&g) {
                prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn block_minimization_is_idempotent(
        seed in 0u64..1000,
        x in prop::collection::vec(-5.0f64..5.0, 8),
        block in 0usize..2,
    ) {
        let p = make_composite(seed, 8, 0.4).unwrap();
        let once = exact_block_min(&p, &x, block).unwrap();
        let twice = exact_block_min(&p, &once, block).unwrap();
        let (f1, f2) = (composite_value(&p, &once).unwrap(), composite_value(&p, &twice).unwrap());
        prop_assert!((f1 - f2).abs() <= 1e-12 * (1.0 + f1.abs()));
        prop_assert!(f1 <= composite_value(&p, &x).unwrap() + 1e-12);
    }

    #[test]
    fn decrease_functional_is_monotone(
        seed in 0u64..1000,
        x in prop::collection::vec(-5.0f64..5.0, 8),
        lambdas in (0.01f64..10.0, 1.01f64..10.0),
    ) {
        let p = make_composite(seed, 8, 0.6).unwrap();
        let (l1, l2) = (lambdas.0, lambdas.0 * lambdas.1);
        for i in 0..2 {
            prop_assert!(d_monotonicity_check(&p, &x, i, l1, l2).unwrap());
        }
    }
}
