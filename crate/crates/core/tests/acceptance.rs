#![allow(clippy::needless_range_loop)]

//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p altmin --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use altmin::batch::par_map;
use altmin::certificates::{
    check_aam_adaptive, check_aam_ak, check_aam_main, check_aam_recurrence, check_am_linear, check_am_sublinear,
    check_nearly_pl, check_prox_pl_trace, estimate_empirical_rate, BoundConstants, CertificateReport,
};
use altmin::linalg::vecops::{dist2, norm2};
use altmin::linalg::{spectral_extremes, Matrix};
use altmin::objective::BlockObjective;
use altmin::prox::d_monotonicity_check;
use altmin::solvers::{CoefficientRule, MomentumRule};
use altmin::zoo::{
    make_box_composite, make_composite, make_nonlinear_pl, make_quadratic, make_rank_deficient, QuadraticSplitProblem,
};
use altmin::{run_aam, run_am, run_fgm, SolverConfig, SolverTrace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;

fn cfg(max_iters: usize) -> SolverConfig {
    SolverConfig {
        max_iters,
        ..SolverConfig::default()
    }
}

fn aam_cfg(max_iters: usize, rule: CoefficientRule, mu: f64, l: Option<f64>) -> SolverConfig {
    SolverConfig {
        max_iters,
        coefficient_rule: rule,
        mu_assumed: mu,
        l_known: l,
        momentum_rule: MomentumRule::Proof,
        ..SolverConfig::default()
    }
}

fn mu_star(p: &QuadraticSplitProblem) -> f64 {
    spectral_extremes(p.hessian()).unwrap().0
}

/// Fold reports into (rows checked, worst normalized slack), failing on any violation.
fn tally(reports: &[(String, CertificateReport)]) -> Result<(String, f64), String> {
    let mut rows = 0;
    let mut skipped = 0;
    let mut worst = f64::INFINITY;
    for (name, r) in reports {
        if let Some(reason) = &r.skipped {
            return Err(format!("{name}: skipped ({reason})"));
        }
        if let Some(k) = r.first_failure {
            let row = r.rows.iter().find(|row| !row.pass).unwrap();
            return Err(format!(
                "{name}: violation at k = {k} ({}): bound {:e}, measured {:e}",
                row.label, row.bound, row.measured
            ));
        }
        rows += r.checked_rows();
        skipped += r.rows.len() - r.checked_rows();
        worst = worst.min(r.worst_slack);
    }
    if rows == 0 {
        return Err("no rows were checked".into());
    }
    let rows = if skipped > 0 {
        format!("{rows} (+{skipped} skipped by precondition)")
    } else {
        rows.to_string()
    };
    Ok((rows, worst))
}

fn criterion_1() -> Outcome {
    let dims = [8, 16, 32, 64];
    let cases: Vec<(u64, usize, f64)> = (0..20u64)
        .map(|s| (s, dims[s as usize % 4], 10f64.powf(1.0 + 3.0 * s as f64 / 19.0)))
        .collect();
    let reports = par_map(&cases, |&(seed, dim, cond)| {
        let p = make_quadratic(seed, dim, cond, 2).unwrap();
        let x0 = vec![0.0; dim];
        let t = run_am(&p, &x0, &cfg(300)).unwrap();
        let c = BoundConstants::from_objective(&p, &x0);
        (format!("seed {seed} dim {dim} cond {cond:.0}"), check_am_linear(&t, &c, Some(&p)).unwrap())
    });
    let (rows, worst) = tally(&reports)?;
    Ok(format!("20 instances, {rows} sweeps, worst slack {worst:.2e}"))
}

fn criterion_2() -> Outcome {
    let cases: Vec<(u64, usize, f64)> = (0..10u64)
        .map(|s| (100 + s, if s % 2 == 0 { 16 } else { 32 }, [0.2, 0.5, 1.0][s as usize % 3]))
        .collect();
    let reports = par_map(&cases, |&(seed, dim, gamma)| {
        let p = make_composite(seed, dim, gamma).unwrap();
        let x0 = vec![0.0; dim];
        let t = run_am(&p, &x0, &cfg(100)).unwrap();
        let c = BoundConstants::from_objective(&p, &x0);
        (format!("seed {seed} γ {gamma}"), check_prox_pl_trace(&p, &t, &c).unwrap())
    });
    let (rows, worst) = tally(&reports)?;
    Ok(format!("10 instances, {rows} iterate/block pairs, worst slack {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let mut instances: Vec<Box<dyn BlockObjective>> = Vec::new();
    for s in 0..5u64 {
        instances.push(Box::new(make_quadratic(400 + s, 16, 100.0, 2).unwrap()));
        instances.push(Box::new(make_composite(410 + s, 16, 0.5).unwrap()));
    }
    let pairs = [(0.25, 1.0), (1.0, 4.0), (0.25, 4.0)];
    let mut checks = 0;
    for (idx, h) in instances.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(idx as u64);
        let x_star = &h.optimum().unwrap().point;
        for _ in 0..50 {
            let x: Vec<f64> = x_star.iter().map(|v| v + rng.sample::<f64, _>(StandardNormal)).collect();
            for i in 0..h.partition().n_blocks() {
                for &(l1, l2) in &pairs {
                    if !d_monotonicity_check(h.as_ref(), &x, i, l1, l2).map_err(|e| e.to_string())? {
                        return Err(format!("instance {idx}, block {i}, λ = ({l1}, {l2})"));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} comparisons on 10 instances"))
}

/// AAM runs shared by criteria 4 to 6.
fn aam_matrix() -> Vec<(String, QuadraticSplitProblem, SolverTrace)> {
    let mut cases = Vec::new();
    for (s, dim) in [8usize, 12, 16, 20].into_iter().enumerate() {
        for cond in [10.0, 1e3] {
            for rule in [CoefficientRule::KnownL, CoefficientRule::Adaptive] {
                for with_mu in [false, true] {
                    cases.push((500 + s as u64, dim, cond, rule, with_mu));
                }
            }
        }
    }
    par_map(&cases, |&(seed, dim, cond, rule, with_mu)| {
        let p = make_quadratic(seed, dim, cond, 2).unwrap();
        let l = p.constants().lipschitz.unwrap();
        let mu = if with_mu { mu_star(&p) } else { 0.0 };
        let t = run_aam(&p, &vec![0.0; dim], &aam_cfg(150, rule, mu, Some(l))).unwrap();
        (format!("dim {dim} cond {cond} {rule:?} μ = {mu:.3e}"), p, t)
    })
}

fn criterion_4(runs: &[(String, QuadraticSplitProblem, SolverTrace)]) -> Outcome {
    let reports: Vec<_> = runs
        .iter()
        .map(|(n, _, t)| (n.clone(), check_aam_recurrence(t).unwrap()))
        .collect();
    let (rows, worst) = tally(&reports)?;
    Ok(format!("{} runs, {rows} iterations, worst slack {worst:.2e}", runs.len()))
}

fn criterion_5(runs: &[(String, QuadraticSplitProblem, SolverTrace)]) -> Outcome {
    let reports: Vec<_> = runs
        .iter()
        .map(|(n, p, t)| {
            let c = BoundConstants::from_objective(p, &t.x0);
            (n.clone(), check_aam_main(t, &c).unwrap())
        })
        .collect();
    let (rows, worst) = tally(&reports)?;
    Ok(format!("{} runs (both coefficient rules), {rows} iterations, worst slack {worst:.2e}", runs.len()))
}

fn criterion_6(runs: &[(String, QuadraticSplitProblem, SolverTrace)]) -> Outcome {
    let reports: Vec<_> = runs
        .iter()
        .map(|(n, p, t)| {
            let c = BoundConstants::from_objective(p, &t.x0);
            (n.clone(), check_aam_ak(t, &c).unwrap())
        })
        .collect();
    let (rows, worst) = tally(&reports)?;
    Ok(format!("{} runs, {rows} inequalities, worst slack {worst:.2e}", runs.len()))
}

fn criterion_7() -> Outcome {
    let mut reports = Vec::new();
    for (s, cond) in [10.0, 100.0, 1e3, 1e4].into_iter().enumerate() {
        let p = make_quadratic(600 + s as u64, 32, cond, 2).unwrap();
        let l = p.constants().lipschitz.unwrap();
        let x0 = vec![0.0; 32];
        let mut c = BoundConstants::from_objective(&p, &x0);
        c.mu = Some(mu_star(&p));
        for rule in [CoefficientRule::KnownL, CoefficientRule::Adaptive] {
            let t = run_aam(&p, &x0, &aam_cfg(200, rule, 0.0, Some(l))).unwrap();
            reports.push((format!("quadratic cond {cond} {rule:?}"), check_aam_adaptive(&t, &c).unwrap()));
        }
    }
    for seed in [1u64, 2, 3] {
        let p = make_nonlinear_pl(seed, 20, 10).unwrap();
        let x0 = vec![0.0; 20];
        let c = BoundConstants::from_objective(&p, &x0);
        let t = run_aam(&p, &x0, &aam_cfg(200, CoefficientRule::Adaptive, 0.0, None)).unwrap();
        reports.push((format!("nonlinear seed {seed}"), check_aam_adaptive(&t, &c).unwrap()));
    }
    let (rows, worst) = tally(&reports)?;
    Ok(format!("{} runs, {rows} iterations, worst slack {worst:.2e}", reports.len()))
}

fn criterion_8() -> Outcome {
    let cases: Vec<(u64, usize)> = (0..6u64).map(|s| (200 + s, if s % 2 == 0 { 16 } else { 32 })).collect();
    let reports = par_map(&cases, |&(seed, dim)| {
        let p = make_box_composite(seed, dim, 0.5).unwrap();
        let x0 = vec![0.0; dim];
        let t = run_am(&p, &x0, &cfg(100)).unwrap();
        let c = BoundConstants::from_objective(&p, &x0);
        let active = p
            .optimum()
            .unwrap()
            .point
            .iter()
            .filter(|v| (v.abs() - 0.5).abs() < 1e-12)
            .count();
        (format!("seed {seed} ({active} active bounds)"), check_nearly_pl(&t, &c, Some(&p)).unwrap())
    });
    let (rows, worst) = tally(&reports)?;
    Ok(format!("6 instances, {rows} inequalities, worst slack {worst:.2e}"))
}

fn criterion_9() -> Outcome {
    let mut reports = Vec::new();
    let mut scaled = Vec::new();
    for s in 0..4u64 {
        let p = make_rank_deficient(300 + s, 16, 10, 100.0, 2).unwrap();
        let x0 = vec![0.0; 16];
        let t = run_am(&p, &x0, &cfg(200)).unwrap();
        let mut c = BoundConstants::from_objective(&p, &x0);
        c.level_radius = Some(p.level_set_radius(&x0));
        let gaps = t.gaps(c.f_star.unwrap());
        let n = gaps.len() - 1;
        scaled.push(gaps[n] * n as f64);
        reports.push((format!("seed {}", 300 + s), check_am_sublinear(&t, &c).unwrap()));
    }
    let (rows, worst) = tally(&reports)?;
    let max_scaled = scaled.iter().copied().fold(0.0, f64::max);
    Ok(format!("4 instances, {rows} sweeps, worst slack {worst:.2e}, max N·gap {max_scaled:.2e}"))
}

fn criterion_10() -> Outcome {
    let cases: Vec<(u64, f64)> = vec![(700, 100.0), (701, 1e3), (702, 1e4), (703, 1e3)];
    let results = par_map(&cases, |&(seed, cond)| -> Result<String, String> {
        let p = make_quadratic(seed, 64, cond, 2).unwrap();
        let x0 = vec![0.0; 64];
        let l = p.constants().lipschitz.unwrap();
        let mu = mu_star(&p);
        let f_star = p.optimum().unwrap().value;
        let floor = 1e-12 * (1.0 + f_star.abs());
        let am = run_am(&p, &x0, &cfg(200)).unwrap();
        let aam0 = run_aam(&p, &x0, &aam_cfg(200, CoefficientRule::KnownL, 0.0, Some(l))).unwrap();
        let aam_mu = run_aam(&p, &x0, &aam_cfg(200, CoefficientRule::KnownL, mu, Some(l))).unwrap();
        let fgm = run_fgm(&p, &x0, &cfg(200)).unwrap();
        let last = |t: &SolverTrace| (t.last().composite_value - f_star).max(floor);
        let (g_am, g0, g_mu, g_fgm) = (last(&am), last(&aam0), last(&aam_mu), last(&fgm));
        if g_mu > 10.0 * g0 || g0 > 10.0 * g_am {
            return Err(format!(
                "cond {cond}: AAM(μ*) {g_mu:.2e}, AAM(0) {g0:.2e}, AM {g_am:.2e}"
            ));
        }
        let gaps = aam_mu.gaps(f_star);
        let (q, _) = estimate_empirical_rate(&gaps, 1e-10 * (1.0 + f_star.abs())).map_err(|e| e.to_string())?;
        let limit = 1.0 - (mu / (2.0 * l)).sqrt() + 0.05;
        if q > limit {
            return Err(format!("cond {cond}: fitted factor {q:.4} > {limit:.4}"));
        }
        Ok(format!(
            "cond {cond:.0e}: gaps AM {g_am:.1e}, AAM(0) {g0:.1e}, AAM(μ*) {g_mu:.1e}, FGM {g_fgm:.1e}; factor {q:.3} ≤ {limit:.3}"
        ))
    });
    let mut lines = Vec::new();
    for r in results {
        lines.push(r?);
    }
    Ok(lines.join("; "))
}

/// Dense Gaussian elimination with partial pivoting.
fn gauss_solve(m: &Matrix, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

fn criterion_11() -> Outcome {
    let mut steps = 0;
    let mut worst: f64 = 0.0;
    for (s, dim) in [8usize, 16, 32].into_iter().enumerate() {
        let p = make_quadratic(800 + s as u64, dim, 50.0, 2).unwrap();
        let w = p.w();
        let (rows, half, rh) = (w.rows(), dim / 2, w.rows() / 2);
        let top: Vec<usize> = (0..rh).collect();
        let bottom: Vec<usize> = (rh..rows).collect();
        let left: Vec<usize> = (0..half).collect();
        let right: Vec<usize> = (half..dim).collect();
        let (a, b) = (w.select(&top, &left), w.select(&top, &right));
        let (c, d) = (w.select(&bottom, &left), w.select(&bottom, &right));
        let c_vec = p.b()[..rh].to_vec();
        let d_vec = p.b()[rh..].to_vec();
        let sub = |u: &[f64], v: Vec<f64>| -> Vec<f64> { u.iter().zip(v).map(|(x, y)| x - y).collect() };
        let add = |u: Vec<f64>, v: Vec<f64>| -> Vec<f64> { u.iter().zip(v).map(|(x, y)| x + y).collect() };
        let x_sys = a.gram().add(&c.gram()).unwrap();
        let y_sys = b.gram().add(&d.gram()).unwrap();
        let x_update = |y: &[f64]| {
            let rhs = add(
                a.tr_matvec(&sub(&c_vec, b.matvec(y).unwrap())).unwrap(),
                c.tr_matvec(&sub(&d_vec, d.matvec(y).unwrap())).unwrap(),
            );
            gauss_solve(&x_sys, &rhs)
        };
        let y_update = |x: &[f64]| {
            let rhs = add(
                b.tr_matvec(&sub(&c_vec, a.matvec(x).unwrap())).unwrap(),
                d.tr_matvec(&sub(&d_vec, c.matvec(x).unwrap())).unwrap(),
            );
            gauss_solve(&y_sys, &rhs)
        };
        let t = run_am(&p, &vec![0.0; dim], &cfg(40)).unwrap();
        for rec in &t.records[1..] {
            for st in &rec.block_steps {
                let (x, y) = st.before.split_at(half);
                let expected = if st.block == 0 {
                    [x_update(y), y.to_vec()].concat()
                } else {
                    [x.to_vec(), y_update(x)].concat()
                };
                let err = dist2(&expected, &st.after) / (1.0 + norm2(&expected));
                worst = worst.max(err);
                if err > 1e-10 {
                    return Err(format!("dim {dim}, sweep {}, block {}: error {err:.2e}", rec.k, st.block));
                }
                steps += 1;
            }
        }
    }
    Ok(format!("{steps} block updates, worst relative error {worst:.2e}"))
}

fn fd_check(h: &dyn BlockObjective, seed: u64) -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = h.partition().total_dim();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let g = h.gradient(&x);
        let fd: Vec<f64> = (0..n)
            .map(|j| {
                let step = 1e-6 * x[j].abs().max(1.0);
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += step;
                xm[j] -= step;
                (h.smooth_value(&xp) - h.smooth_value(&xm)) / (2.0 * step)
            })
            .collect();
        let rel = dist2(&g, &fd) / norm2(&g).max(1.0);
        worst = worst.max(rel);
        if rel > 1e-5 {
            return Err(format!("relative error {rel:.2e}"));
        }
    }
    Ok(worst)
}

fn criterion_12() -> Outcome {
    let instances: Vec<(&str, Box<dyn BlockObjective>)> = vec![
        ("quadratic", Box::new(make_quadratic(900, 16, 100.0, 2).unwrap())),
        ("quadratic 4 blocks", Box::new(make_quadratic(901, 16, 10.0, 4).unwrap())),
        ("rank deficient", Box::new(make_rank_deficient(902, 16, 10, 100.0, 2).unwrap())),
        ("composite l1", Box::new(make_composite(903, 16, 0.5).unwrap())),
        ("composite box", Box::new(make_box_composite(904, 16, 0.5).unwrap())),
        ("nonlinear", Box::new(make_nonlinear_pl(905, 20, 10).unwrap())),
    ];
    let mut worst: f64 = 0.0;
    for (i, (name, h)) in instances.iter().enumerate() {
        worst = worst.max(fd_check(h.as_ref(), i as u64).map_err(|e| format!("{name}: {e}"))?);
    }
    Ok(format!("6 instance kinds × 20 points, worst relative error {worst:.2e}"))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let start = Instant::now();
    let aam_runs = aam_matrix();
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("AM linear rate", Box::new(criterion_1)),
        ("proximal-PL certificate", Box::new(criterion_2)),
        ("D monotonicity", Box::new(criterion_3)),
        ("AAM estimating sequence", Box::new(|| criterion_4(&aam_runs))),
        ("AAM main bound", Box::new(|| criterion_5(&aam_runs))),
        ("A_k growth", Box::new(|| criterion_6(&aam_runs))),
        ("adaptive AAM", Box::new(criterion_7)),
        ("nearly-PL constrained rate", Box::new(criterion_8)),
        ("AM sublinear bound", Box::new(criterion_9)),
        ("figure ordering", Box::new(criterion_10)),
        ("oracle equivalence", Box::new(criterion_11)),
        ("gradient checks", Box::new(criterion_12)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({ms} ms): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1} s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
