//! Acceptance suite: the headline numerical results, reproduced at desk
//! scale with pinned tolerances and runtime budgets.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see one
//! pass/fail line per criterion. The criteria run sequentially inside a
//! single test so the wall-clock budgets are honest.

use std::time::{Duration, Instant};

use bergman_core::geometry::{DomainDescriptor, DomainName};
use bergman_core::kernels::rii_volume_workers;
use bergman_core::lqk;
use bergman_core::verify::{run_suite, SuiteName, SuiteReport, VerifyConfig};

const WORKERS: usize = 2;

struct Outcome {
    label: String,
    pass: bool,
    elapsed: Duration,
    budget: Duration,
    detail: String,
}

fn record(
    outcomes: &mut Vec<Outcome>,
    label: &str,
    budget_secs: f64,
    run: impl FnOnce() -> (bool, String),
) {
    let start = Instant::now();
    let (pass, detail) = run();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs_f64(budget_secs);
    let within = elapsed <= budget;
    println!(
        "[{}] {label}: {detail} ({:.2}s of {:.0}s budget)",
        if pass && within { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget_secs,
    );
    outcomes.push(Outcome { label: label.to_string(), pass: pass && within, elapsed, budget, detail });
}

fn suite_summary(report: &SuiteReport) -> String {
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        format!("{} checks passed", report.checks.len())
    } else {
        format!("failed: {}", failed.join(", "))
    }
}

fn cfg(samples: u64, seed: u64) -> VerifyConfig {
    VerifyConfig { samples, seed, workers: WORKERS, ..Default::default() }
}

#[test]
fn acceptance_criteria() {
    let mut outcomes = Vec::new();

    // 1. Axis roots: +-i/sqrt(3) in the disc, residual < 1e-12,
    //    z0^2 = -1/3 in (-1, 0).
    record(&mut outcomes, "criterion 1: axis roots", 1.0, || {
        let roots = lqk::isolate_axis_roots();
        let in_disc: Vec<_> = roots.iter().filter(|r| r.in_disc).collect();
        let expected = 0.577_350_269_189_625_8;
        let mut ok = in_disc.len() == 2 && roots.len() == 4;
        for r in &in_disc {
            ok &= r.value[0].abs() < 1e-12;
            ok &= (r.value[1].abs() - expected).abs() < 1e-12;
            ok &= r.residual < 1e-12;
        }
        let z0 = lqk::axis_zero();
        let z0_sq = (z0 * z0).re;
        ok &= z0_sq > -1.0 && z0_sq < 0.0 && (z0_sq + 1.0 / 3.0).abs() < 1e-15;
        (ok, format!("in-disc roots +-{expected}i, z0^2 = {z0_sq}"))
    });

    // 2. Interior Lu Qi-Keng zero pairs for r in {0.7, 0.8, 0.9}: both
    //    points members, closed-form residual < 1e-9, pushforward
    //    re-evaluation < 1e-8.
    record(&mut outcomes, "criterion 2: interior zero pairs", 1.0, || {
        let volume = rii_volume_workers(1_000_000, 0, WORKERS).expect("volume");
        let mut ok = true;
        let mut worst_closed = 0.0f64;
        let mut worst_cross = 0.0f64;
        for r in [0.7, 0.8, 0.9] {
            match lqk::interior_zero_pair(r, &volume) {
                Ok(cert) => {
                    ok &= cert.membership == (true, true);
                    ok &= cert.relative_residual < 1e-9;
                    worst_closed = worst_closed.max(cert.relative_residual);
                    match lqk::cross_check_certificate(&cert, &volume) {
                        Ok(cross) => {
                            ok &= cross < 1e-8;
                            worst_cross = worst_cross.max(cross);
                        }
                        Err(_) => ok = false,
                    }
                }
                Err(_) => ok = false,
            }
        }
        (ok, format!("worst residuals: closed {worst_closed:.2e}, pushforward {worst_cross:.2e}"))
    });

    // 3. Transformation-formula cross-validation over 1000 seeded regular
    //    pairs, relative error < 1e-9.
    record(&mut outcomes, "criterion 3: pushforward vs closed form", 5.0, || {
        let report = run_suite(SuiteName::Bell, &cfg(1000, 42));
        (report.pass, suite_summary(&report))
    });

    // 4. Change of variables for both maps, three integrands, two weights,
    //    at two million proposals per side, within four combined standard
    //    errors.
    record(&mut outcomes, "criterion 4: change of variables", 120.0, || {
        let report = run_suite(SuiteName::Eq1, &cfg(2_000_000, 11));
        (report.pass, suite_summary(&report))
    });

    // 5. Reproducing property of both closed-form kernels on five
    //    polynomials at three interior points each, n = 2e6, within 4
    //    sigma; includes volume seed stability at n = 1e7.
    record(&mut outcomes, "criterion 5: reproducing property", 300.0, || {
        let report = run_suite(SuiteName::Reproducing, &cfg(2_000_000, 5));
        (report.pass, suite_summary(&report))
    });

    // 6. Operator laws, coefficient-exact on monomial grids.
    record(&mut outcomes, "criterion 6: operator laws", 5.0, || {
        let report = run_suite(SuiteName::OperatorLaws, &cfg(1000, 0));
        (report.pass, suite_summary(&report))
    });

    // 7. Norm-isometry falsifier: canonical witness for k = 3, and the
    //    k = 2 rotation preserves norms to 1e-14 on ten thousand samples.
    record(&mut outcomes, "criterion 7: isometry falsifier", 1.0, || {
        let report = run_suite(SuiteName::Falsifier, &cfg(10_000, 0));
        (report.pass, suite_summary(&report))
    });

    // 8. The source domain kernel never vanishes: |K| above 1e-6 of the
    //    central value on 1e5 random interior pairs.
    record(&mut outcomes, "criterion 8: R_II kernel nonvanishing", 10.0, || {
        let report = run_suite(SuiteName::RiiContrast, &cfg(100_000, 0));
        (report.pass, suite_summary(&report))
    });

    // 9. The absolute normalisation of the axis polynomial is not
    //    independently confirmable; the suite certifies the zero set and
    //    the structural identities above instead, and reports the measured
    //    volume for comparison with the literature value.
    record(&mut outcomes, "criterion 9: measured volume report", 60.0, || {
        let volume = rii_volume_workers(10_000_000, 0, WORKERS).expect("volume");
        let pi3 = std::f64::consts::PI.powi(3);
        let ok = volume.value > 0.0 && volume.value < pi3;
        (
            ok,
            format!(
                "Vol(R_II) = {:.6} +- {:.6} (pi^3/6 = {:.6}); kernel normalised by the measured volume, zero set certified normalisation-free",
                volume.value,
                volume.stderr,
                pi3 / 6.0
            ),
        )
    });

    println!("\nacceptance summary:");
    for o in &outcomes {
        println!(
            "  [{}] {} ({:.2}s / {:.0}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.label,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs_f64()
        );
    }
    let failures: Vec<&Outcome> = outcomes.iter().filter(|o| !o.pass).collect();
    assert!(
        failures.is_empty(),
        "acceptance failures: {}",
        failures
            .iter()
            .map(|o| format!("{} ({})", o.label, o.detail))
            .collect::<Vec<_>>()
            .join("; ")
    );
}

/// The full verification entry point used by the CLI stays green end to
/// end at reduced scale; the acceptance criteria above pin the full-scale
/// runs.
#[test]
fn verify_all_reduced_scale() {
    let config = VerifyConfig { samples: 20_000, seed: 1, workers: WORKERS, ..Default::default() };
    for report in bergman_core::verify::verify_all(&config) {
        assert!(report.pass, "{}: {:?}", report.suite, report.checks);
    }
}

/// Deck invariance at acceptance scale; exercised separately from the
/// criteria because it has no numbered budget of its own.
#[test]
fn deck_invariance_full_scale() {
    let report = run_suite(SuiteName::DeckInvariance, &cfg(500, 3));
    assert!(report.pass, "{:?}", report.checks);
    let rii = DomainDescriptor::new(DomainName::RII);
    assert_eq!(rii.sample_uniform(500, 3).unwrap().len(), 500);
}
