//! Acceptance gate: every release-blocking behavior in one binary, printing
//! one pass/fail line per criterion. Run via `cargo test --test acceptance`.

mod common;

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ndarray::{Array1, Array2};
use sparsor::basis::{BasisSpec, FittedBasis};
use sparsor::classification::{Sspoc, SspocConfig};
use sparsor::io::dataset::load_labeled;
use sparsor::io::generate::{equispaced_grid, train_test_split, vandermonde};
use sparsor::linalg::{pivoted_qr, pseudoinverse, DEFAULT_RCOND};
use sparsor::optimizers::{ccqr_rank, qr_rank, CostVector};
use sparsor::reconstruction::{Sspor, SsporConfig};
use sparsor::sparse::{multitask_alpha_max, multitask_lasso, multitask_objective, omp};
use sparsor::utils::SeededRng;

/// Ok carries a short detail string for the PASS line.
type Outcome = Result<String, String>;

/// Name, time budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 Fekete-point reproduction", 5, fekete_points),
        ("2 interpolation comparison", 5, interpolation_comparison),
        ("3 error-curve shape", 5, error_curve_shape),
        ("4 cost-constrained degeneracy", 10, cost_degeneracy),
        ("5 oracle equivalences", 60, oracle_equivalences),
        ("6 digits classification", 30, digits_classification),
        ("7 numerics invariants", 30, numerics_invariants),
        ("8 sensor-count bounds", 30, sensor_count_bounds),
    ];

    let mut failed = 0usize;
    for (name, budget_s, criterion) in criteria {
        let budget = Duration::from_secs(budget_s);
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(criterion))
            .unwrap_or_else(|payload| Err(format!("panicked: {}", panic_text(&payload))));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= budget {
                Ok(detail)
            } else {
                Err(format!(
                    "exceeded time budget ({elapsed:.2?} > {budget:?}); {detail}"
                ))
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS [{elapsed:.2?}] {detail}"),
            Err(reason) => {
                failed += 1;
                println!("criterion {name}: FAIL [{elapsed:.2?}] {reason}");
            }
        }
    }

    if failed > 0 {
        eprintln!("{failed} acceptance criterion(s) failed");
        std::process::exit(1);
    }
}

fn panic_text(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_string()
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Grid indices of the ten classical interpolation points on the 1001-point
/// grid, in ranking order (x-values 1.0, 0.641, 0.0, 0.884, 0.289, 0.47,
/// 0.099, 0.958, 0.763, 0.036).
const FEKETE_INDICES: [usize; 10] = [1000, 641, 0, 884, 289, 470, 99, 958, 763, 36];

fn monomial_model(n_sensors: Option<usize>) -> Result<(Sspor, Array2<f64>), String> {
    let x = vandermonde(1001, 11).map_err(err)?;
    let mut model = Sspor::new(SsporConfig {
        basis: BasisSpec::Identity { n_basis_modes: None },
        n_sensors,
        ..SsporConfig::default()
    });
    model.fit(x.view()).map_err(err)?;
    Ok((model, x))
}

fn kinked_target() -> Array1<f64> {
    equispaced_grid(1001).mapv(|x| (x * x - 0.5).abs())
}

fn rmse_vec(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    let diff = a - b;
    (diff.dot(&diff) / a.len() as f64).sqrt()
}

fn fekete_points() -> Outcome {
    let (model, x) = monomial_model(Some(10))?;
    let got = model.selected_sensors().map_err(err)?.to_vec();

    let mut got_sorted = got.clone();
    got_sorted.sort_unstable();
    let mut expected_sorted = FEKETE_INDICES.to_vec();
    expected_sorted.sort_unstable();
    if got_sorted != expected_sorted {
        return Err(format!(
            "selected set {got:?} differs from the classical points {FEKETE_INDICES:?}"
        ));
    }
    if got != FEKETE_INDICES {
        // Set agrees but order does not: a pivoting-order divergence. Attach
        // the greedy residual-norm trace for diagnosis.
        let (_, trace) = common::greedy_projection_pivots(x.view(), 11, None);
        return Err(format!(
            "pivoting-order divergence: got {got:?}, expected {FEKETE_INDICES:?}; \
             residual-norm trace {trace:?}"
        ));
    }
    Ok(format!("ranked sensors {got:?}"))
}

fn interpolation_comparison() -> Outcome {
    let (model, _) = monomial_model(Some(10))?;
    let grid = equispaced_grid(1001);
    let f = kinked_target();

    let sensors = model.selected_sensors().map_err(err)?.to_vec();
    let y = Array1::from_iter(sensors.iter().map(|&i| f[i]));
    let learned = model.predict(y.view()).map_err(err)?;
    let learned_rmse = rmse_vec(&f, &learned);

    // Independent oracle: square Vandermonde interpolation at the eleven
    // equispaced nodes 0, 100, ..., 1000, evaluated over the full grid.
    let mut a = Array2::<f64>::zeros((11, 11));
    let mut rhs = Array1::<f64>::zeros(11);
    for row in 0..11 {
        let x = grid[row * 100];
        let mut power = 1.0;
        for col in 0..11 {
            a[[row, col]] = power;
            power *= x;
        }
        rhs[row] = f[row * 100];
    }
    let coeffs = common::gaussian_solve(&a, &rhs);
    let equispaced = grid.mapv(|x| {
        let mut acc = 0.0;
        let mut power = 1.0;
        for &c in coeffs.iter() {
            acc += c * power;
            power *= x;
        }
        acc
    });
    let equispaced_rmse = rmse_vec(&f, &equispaced);

    if learned_rmse < equispaced_rmse {
        Ok(format!(
            "learned RMSE {learned_rmse:.4e} < equispaced RMSE {equispaced_rmse:.4e}"
        ))
    } else {
        Err(format!(
            "learned RMSE {learned_rmse:.4e} not below equispaced RMSE {equispaced_rmse:.4e}"
        ))
    }
}

/// Regression lock for the p = 2..=11 error curve, frozen from the first
/// verified run (independently confirmed against a dense lstsq oracle to
/// eleven digits).
const CURVE_BASELINE: [f64; 10] = [
    2.838214583575e-1,
    7.645646357638e-2,
    9.744943065595e-2,
    2.594963712814e-2,
    1.930428740698e-2,
    2.067706860692e-2,
    1.524227715559e-2,
    1.156788891719e-2,
    1.149537066088e-2,
    1.146976685519e-2,
];
const CURVE_LOCK_REL_TOL: f64 = 1e-6;

fn error_curve_shape() -> Outcome {
    let (model, _) = monomial_model(None)?;
    let f = kinked_target();
    let test = f.into_shape((1, 1001)).map_err(err)?;
    let range: Vec<usize> = (2..=11).collect();
    let curve = model
        .reconstruction_error(test.view(), &range)
        .map_err(err)?;

    // partial_cmp so a NaN in the curve fails rather than slipping through
    if curve[9].partial_cmp(&curve[0]) != Some(Ordering::Less) {
        return Err(format!(
            "RMSE(11) = {:.4e} not below RMSE(2) = {:.4e}",
            curve[9], curve[0]
        ));
    }
    for (k, (&got, &frozen)) in curve.iter().zip(&CURVE_BASELINE).enumerate() {
        let rel = (got - frozen).abs() / frozen;
        if rel > CURVE_LOCK_REL_TOL {
            return Err(format!(
                "regression at p = {}: RMSE {got:.12e} vs locked {frozen:.12e} (rel {rel:.2e})",
                k + 2
            ));
        }
    }
    Ok(format!(
        "RMSE(2) = {:.4e} down to RMSE(11) = {:.4e}; ten locked values reproduced",
        curve[0], curve[9]
    ))
}

fn cost_degeneracy() -> Outcome {
    let instances = 50;
    for trial in 0..instances {
        let mut rng = SeededRng::new(900 + trial);
        let n = 8 + (trial as usize % 13);
        let r = 2 + (trial as usize % 5);
        let psi = rng.normal_matrix(n, r);

        // Strictly positive, pairwise distinct costs in shuffled order.
        let mut costs: Vec<f64> = (0..n).map(|j| 0.05 + 0.013 * j as f64).collect();
        rng.shuffle(&mut costs);

        let plain = qr_rank(psi.view(), trial).map_err(err)?;
        let zero_weight = CostVector::new(costs.clone(), 0.0).map_err(err)?;
        let degenerate = ccqr_rank(psi.view(), &zero_weight, trial).map_err(err)?;
        if plain != degenerate {
            return Err(format!(
                "trial {trial}: weight-0 ranking {:?} differs from plain QR {:?}",
                degenerate.order(),
                plain.order()
            ));
        }

        let max_norm = psi
            .rows()
            .into_iter()
            .map(|row| row.dot(&row).sqrt())
            .fold(0.0_f64, f64::max);
        let heavy = CostVector::new(costs.clone(), 1e3 * max_norm).map_err(err)?;
        let costed = ccqr_rank(psi.view(), &heavy, trial).map_err(err)?;
        let p = plain.n_meaningful();
        let total = |order: &[usize]| order[..p].iter().map(|&j| costs[j]).sum::<f64>();
        let (cost_heavy, cost_plain) = (total(costed.order()), total(plain.order()));
        if cost_heavy > cost_plain + 1e-12 {
            return Err(format!(
                "trial {trial}: heavily weighted selection cost {cost_heavy:.6} exceeds \
                 weight-0 cost {cost_plain:.6}"
            ));
        }
    }
    Ok(format!(
        "{instances} instances: weight-0 bitwise equal; heavy-weight cost never higher"
    ))
}

fn oracle_equivalences() -> Outcome {
    // Pivoted QR vs the from-scratch greedy projector on 100 small matrices.
    for trial in 0..100u64 {
        let mut rng = SeededRng::new(2000 + trial);
        let rows = 2 + (trial as usize % 7);
        let cols = 2 + ((trial as usize / 7) % 7);
        let a = rng.normal_matrix(rows, cols);
        let k = rows.min(cols);
        let qr = pivoted_qr(a.view(), k).map_err(err)?;
        let (oracle, _) = common::greedy_projection_pivots(a.view(), k, None);
        if qr.pivots != oracle {
            return Err(format!(
                "pivot mismatch on {rows}x{cols} trial {trial}: {:?} vs {:?}",
                qr.pivots, oracle
            ));
        }
    }

    // OMP vs exhaustive support search on planted 2-sparse problems.
    let mut support_matches = 0;
    for trial in 0..100u64 {
        let mut rng = SeededRng::new(1000 + trial);
        let d = rng.normal_matrix(16, 8);
        let mut truth = Array1::<f64>::zeros(8);
        let i = rng.index_below(8);
        let mut j = rng.index_below(8);
        while j == i {
            j = rng.index_below(8);
        }
        truth[i] = 1.0 + rng.standard_normal().abs();
        truth[j] = -1.0 - rng.standard_normal().abs();
        let noise = rng.normal_matrix(16, 1).column(0).to_owned() * 0.02;
        let w = d.dot(&truth) + noise;

        let sol = omp(d.view(), w.view(), 2, 1e-10).map_err(err)?;
        let (oracle_support, oracle_residual) =
            common::exhaustive_best_support(d.view(), w.view(), 2);
        if sol.row_support == oracle_support {
            support_matches += 1;
            let fit = d.dot(&sol.s.column(0).to_owned());
            let diff = &w - &fit;
            let residual = diff.dot(&diff).sqrt();
            if (residual - oracle_residual).abs() > 1e-8 {
                return Err(format!(
                    "trial {trial}: matched support but residual {residual:.12e} \
                     vs oracle {oracle_residual:.12e}"
                ));
            }
        }
    }
    if support_matches < 95 {
        return Err(format!(
            "OMP matched exhaustive search on only {support_matches}/100 trials"
        ));
    }

    // Multi-task lasso vs an independent proximal-gradient oracle.
    let mut worst_gap = 0.0_f64;
    for trial in 0..20u64 {
        let mut rng = SeededRng::new(3000 + trial);
        let d = rng.normal_matrix(12, 8);
        let w = rng.normal_matrix(12, 3);
        let alpha = 0.3 * multitask_alpha_max(d.view(), w.view()).map_err(err)?;
        let mine = multitask_lasso(d.view(), w.view(), alpha, 10_000, 1e-12).map_err(err)?;
        // 30k proximal-gradient steps converge far past the 1e-8 comparison
        // scale on these sizes while keeping the debug-build runtime in budget.
        let oracle = common::ista_multitask(d.view(), w.view(), alpha, 30_000);
        let f_mine = multitask_objective(d.view(), w.view(), &mine.s, alpha).map_err(err)?;
        let f_oracle = multitask_objective(d.view(), w.view(), &oracle, alpha).map_err(err)?;
        let gap = (f_mine - f_oracle).abs();
        worst_gap = worst_gap.max(gap);
        if gap > 1e-8 {
            return Err(format!(
                "trial {trial}: objective gap {gap:.3e} vs first-order oracle"
            ));
        }
    }

    Ok(format!(
        "100/100 pivot sequences; {support_matches}/100 OMP supports; \
         lasso worst objective gap {worst_gap:.2e}"
    ))
}

/// Held-out accuracy recorded from the first verified run of this exact
/// configuration (svd r=20, 10 sensors, l1 penalty 0.005, 80/20 split with
/// seed 7).
const DIGITS_ACCURACY_BASELINE: f64 = 0.84;
const DIGITS_ACCURACY_TOL: f64 = 0.02;

fn digits_classification() -> Outcome {
    let (x, y) = load_labeled(common::fixture_path("digits.csv")).map_err(err)?;
    let (xtr, ytr, xte, yte) = train_test_split(&x, &y, 0.8, 7).map_err(err)?;

    let mut model = Sspoc::new(SspocConfig {
        basis: BasisSpec::svd(20),
        n_sensors: Some(10),
        l1_penalty: 0.005,
        ..SspocConfig::default()
    });
    model.fit(xtr.view(), &ytr).map_err(err)?;
    let ten = model.selected_sensors().map_err(err)?.to_vec();
    if ten.len() != 10 {
        return Err(format!("selected {} sensors, wanted 10", ten.len()));
    }

    let mut sub = Array2::<f64>::zeros((xte.nrows(), 10));
    for (k, &j) in ten.iter().enumerate() {
        sub.column_mut(k).assign(&xte.column(j));
    }
    let preds = model.predict(sub.view()).map_err(err)?;
    let hits = preds.iter().zip(&yte).filter(|(a, b)| a == b).count();
    let accuracy = hits as f64 / yte.len() as f64;
    if accuracy < 0.30 {
        return Err(format!("held-out accuracy {accuracy:.4} under 3x chance"));
    }
    if (accuracy - DIGITS_ACCURACY_BASELINE).abs() > DIGITS_ACCURACY_TOL {
        return Err(format!(
            "held-out accuracy {accuracy:.4} drifted from the recorded baseline \
             {DIGITS_ACCURACY_BASELINE:.2} +/- {DIGITS_ACCURACY_TOL:.2}"
        ));
    }

    // Narrowing reuses the stored sparse solve and keeps a norm-order subset.
    let solution_before = model.sparse_solution().map_err(err)?.clone();
    model.update_sensors(5, xtr.view(), &ytr).map_err(err)?;
    if model.sparse_solution().map_err(err)? != &solution_before {
        return Err("update_sensors re-ran the sparse solve".to_string());
    }
    let five = model.selected_sensors().map_err(err)?.to_vec();
    if five != ten[..5] {
        return Err(format!(
            "five-sensor set {five:?} is not the norm-order prefix of {ten:?}"
        ));
    }

    Ok(format!(
        "held-out accuracy {accuracy:.4} (baseline {DIGITS_ACCURACY_BASELINE:.2} \
         +/- {DIGITS_ACCURACY_TOL:.2}); narrowing kept prefix {five:?}"
    ))
}

fn numerics_invariants() -> Outcome {
    // SVD basis orthonormality to 1e-10.
    let data = sparsor::io::generate::low_rank(20, 30, 8, 13).map_err(err)?;
    let basis = FittedBasis::fit(&BasisSpec::svd(8), data.view()).map_err(err)?;
    let psi = basis.active_matrix();
    let gram = psi.t().dot(&psi);
    for i in 0..8 {
        for j in 0..8 {
            let want = if i == j { 1.0 } else { 0.0 };
            if (gram[[i, j]] - want).abs() > 1e-10 {
                return Err(format!(
                    "mode gram [{i},{j}] = {:.3e} off identity",
                    gram[[i, j]]
                ));
            }
        }
    }

    // Penrose conditions to 1e-8.
    let mut rng = SeededRng::new(77);
    let a = rng.normal_matrix(10, 6);
    let pinv = pseudoinverse(a.view(), DEFAULT_RCOND).map_err(err)?;
    let checks = [
        common::max_abs_diff(&a.dot(&pinv).dot(&a), &a),
        common::max_abs_diff(&pinv.dot(&a).dot(&pinv), &pinv),
        common::max_abs_diff(&a.dot(&pinv).t().to_owned(), &a.dot(&pinv)),
        common::max_abs_diff(&pinv.dot(&a).t().to_owned(), &pinv.dot(&a)),
    ];
    if let Some(worst) = checks.iter().copied().reduce(f64::max) {
        if worst > 1e-8 {
            return Err(format!("Penrose condition residual {worst:.3e} over 1e-8"));
        }
    }

    // In-span reconstruction exactness, relative 1e-8.
    let (model, x) = monomial_model(None)?;
    let theta = SeededRng::new(5).normal_matrix(11, 1);
    let signal = x.t().dot(&theta).column(0).to_owned();
    let sensors = model.selected_sensors().map_err(err)?.to_vec();
    let y = Array1::from_iter(sensors.iter().map(|&i| signal[i]));
    let recovered = model.predict(y.view()).map_err(err)?;
    let rel = rmse_vec(&signal, &recovered) / (signal.dot(&signal) / 1001.0).sqrt();
    if rel > 1e-8 {
        return Err(format!("in-span relative error {rel:.3e} over 1e-8"));
    }

    // Seeded bit-reproducibility of every randomized path.
    let spec = BasisSpec::Svd {
        n_basis_modes: 5,
        randomized: true,
        seed: 41,
    };
    let b1 = FittedBasis::fit(&spec, data.view()).map_err(err)?;
    let b2 = FittedBasis::fit(&spec, data.view()).map_err(err)?;
    if b1.active_matrix() != b2.active_matrix() {
        return Err("randomized SVD is not seed-reproducible".to_string());
    }
    let proj = BasisSpec::RandomProjection {
        n_basis_modes: 6,
        seed: 42,
    };
    let p1 = FittedBasis::fit(&proj, data.view()).map_err(err)?;
    let p2 = FittedBasis::fit(&proj, data.view()).map_err(err)?;
    if p1.active_matrix() != p2.active_matrix() {
        return Err("random projection is not seed-reproducible".to_string());
    }
    let tall = SeededRng::new(9).normal_matrix(25, 4);
    let r1 = qr_rank(tall.view(), 123).map_err(err)?;
    let r2 = qr_rank(tall.view(), 123).map_err(err)?;
    if r1 != r2 {
        return Err("ranking tail is not seed-reproducible".to_string());
    }

    Ok("orthonormality, Penrose, in-span exactness, and seeded reproducibility hold".to_string())
}

fn sensor_count_bounds() -> Outcome {
    // Twenty multi-class problems cycling c in {3,4} and r in {5,10}.
    for trial in 0..20u64 {
        let c = 3 + (trial as usize % 2);
        let r = if (trial / 2) % 2 == 0 { 5 } else { 10 };
        let mut rng = SeededRng::new(7000 + trial);
        let m = 30 * c;
        let n = 40;
        let mut x = rng.normal_matrix(m, n);
        let mut y = Vec::with_capacity(m);
        for i in 0..m {
            let class = i % c;
            x[[i, 3 * class]] += 4.0;
            y.push(class);
        }
        let mut model = Sspoc::new(SspocConfig {
            basis: BasisSpec::svd(r),
            l1_penalty: 0.01,
            ..SspocConfig::default()
        });
        model.fit(x.view(), &y).map_err(|e| {
            format!("trial {trial} (c = {c}, r = {r}) failed to fit: {e}")
        })?;
        let k = model.selected_sensors().map_err(err)?.len();
        let bound = r * (c - 1);
        if k == 0 || k > bound {
            return Err(format!(
                "trial {trial}: {k} sensors outside 1..={bound} (c = {c}, r = {r})"
            ));
        }
    }

    // Binary problems bound at r.
    for trial in 0..6u64 {
        let r = if trial % 2 == 0 { 5 } else { 10 };
        let mut rng = SeededRng::new(8000 + trial);
        let m = 60;
        let n = 40;
        let mut x = rng.normal_matrix(m, n);
        let mut y = Vec::with_capacity(m);
        for i in 0..m {
            let class = i % 2;
            x[[i, 5]] += if class == 0 { -2.0 } else { 2.0 };
            y.push(class);
        }
        let mut model = Sspoc::new(SspocConfig {
            basis: BasisSpec::svd(r),
            ..SspocConfig::default()
        });
        model.fit(x.view(), &y).map_err(err)?;
        let k = model.selected_sensors().map_err(err)?.len();
        if k == 0 || k > r {
            return Err(format!("binary trial {trial}: {k} sensors outside 1..={r}"));
        }
    }

    Ok("20 multi-class runs within r(c-1); 6 binary runs within r".to_string())
}
