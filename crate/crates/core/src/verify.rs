//! Verification suites.
//!
//! Each suite bundles related checks into a [`SuiteReport`] of named
//! [`CheckResult`]s. Statistical checks compare against four combined
//! standard errors; algebraic checks use fixed coefficient tolerances.
//! Reports are deterministic for a fixed `(seed, samples, workers)`
//! configuration.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::geometry::{DomainDescriptor, DomainName, SymPoint, TetraPoint};
use crate::kernels::{
    bell_pushforward, kernel_rii, kernel_tetrablock_closed, rii_volume_workers, Kernel,
    VolumeConstant,
};
use crate::lqk;
use crate::maps::{deck_invariance_check, phik_isometry_falsifier, MapError, ProperMap};
use crate::operators::{
    gamma_apply, gamma_star_apply, in_gamma_range_tetra, monomials_up_to, project_generic,
    project_tetra, Poly3, WeightFunction, COEFF_TOL,
};
use crate::quadrature::{change_of_variables_check, inner_product, reproducing_check};
use crate::C;

/// Tolerance bundle; every threshold used by the suites lives here.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Multiplier on combined standard errors for statistical checks.
    pub sigma: f64,
    /// Relative agreement between the pushforward engine and the closed
    /// form.
    pub bell_rel: f64,
    /// Relative residual certifying a kernel zero.
    pub zero_residual: f64,
    /// Relative residual of the independent pushforward re-evaluation of a
    /// certificate.
    pub cross_residual: f64,
    /// Absolute coefficient tolerance for exact polynomial identities.
    pub coeff_abs: f64,
    /// Guard band around critical values.
    pub eps_crit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sigma: 4.0,
            bell_rel: 1e-9,
            zero_residual: lqk::CERT_TOL,
            cross_residual: lqk::CROSS_CHECK_TOL,
            coeff_abs: COEFF_TOL,
            eps_crit: crate::maps::DEFAULT_EPS_CRIT,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub tolerances: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { samples: 1_000_000, seed: 0, workers: 1, tolerances: Tolerances::default() }
    }
}

/// One named check: `pass` holds iff `measure < threshold` (or an exact
/// predicate stated in `detail`).
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub measure: f64,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    fn new(name: impl Into<String>, measure: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            pass: measure < threshold,
            measure,
            threshold,
            value: None,
            stderr: None,
            detail: None,
        }
    }

    fn with_value(mut self, v: C) -> Self {
        self.value = Some([v.re, v.im]);
        self
    }

    fn with_stderr(mut self, s: f64) -> Self {
        self.stderr = Some(s);
        self
    }

    fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    fn failed(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass: false,
            // f64::MAX rather than infinity: the latter has no JSON form.
            measure: f64::MAX,
            threshold: 0.0,
            value: None,
            stderr: None,
            detail: Some(detail.into()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    fn collect(suite: &str, checks: Vec<CheckResult>) -> Self {
        Self { suite: suite.to_string(), pass: checks.iter().all(|c| c.pass), checks }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Eq1,
    Reproducing,
    Isometry,
    OperatorLaws,
    Bell,
    DeckInvariance,
    LqkRoots,
    LqkPairs,
    Falsifier,
    RiiContrast,
}

impl SuiteName {
    pub fn all() -> [SuiteName; 10] {
        [
            SuiteName::Eq1,
            SuiteName::Reproducing,
            SuiteName::Isometry,
            SuiteName::OperatorLaws,
            SuiteName::Bell,
            SuiteName::DeckInvariance,
            SuiteName::LqkRoots,
            SuiteName::LqkPairs,
            SuiteName::Falsifier,
            SuiteName::RiiContrast,
        ]
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuiteName::Eq1 => "eq1",
            SuiteName::Reproducing => "reproducing",
            SuiteName::Isometry => "isometry",
            SuiteName::OperatorLaws => "operator-laws",
            SuiteName::Bell => "bell",
            SuiteName::DeckInvariance => "deck-invariance",
            SuiteName::LqkRoots => "lqk-roots",
            SuiteName::LqkPairs => "lqk-pairs",
            SuiteName::Falsifier => "falsifier",
            SuiteName::RiiContrast => "rii-contrast",
        })
    }
}

impl FromStr for SuiteName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eq1" => Ok(SuiteName::Eq1),
            "reproducing" => Ok(SuiteName::Reproducing),
            "isometry" => Ok(SuiteName::Isometry),
            "operator-laws" => Ok(SuiteName::OperatorLaws),
            "bell" => Ok(SuiteName::Bell),
            "deck-invariance" => Ok(SuiteName::DeckInvariance),
            "lqk-roots" => Ok(SuiteName::LqkRoots),
            "lqk-pairs" => Ok(SuiteName::LqkPairs),
            "falsifier" => Ok(SuiteName::Falsifier),
            "rii-contrast" => Ok(SuiteName::RiiContrast),
            other => Err(format!("unknown suite `{other}`")),
        }
    }
}

pub fn run_suite(name: SuiteName, cfg: &VerifyConfig) -> SuiteReport {
    match name {
        SuiteName::Eq1 => eq1_suite(cfg),
        SuiteName::Reproducing => reproducing_suite(cfg),
        SuiteName::Isometry => isometry_suite(cfg),
        SuiteName::OperatorLaws => operator_laws_suite(cfg),
        SuiteName::Bell => bell_suite(cfg),
        SuiteName::DeckInvariance => deck_invariance_suite(cfg),
        SuiteName::LqkRoots => lqk_roots_suite(cfg),
        SuiteName::LqkPairs => lqk_pairs_suite(cfg),
        SuiteName::Falsifier => falsifier_suite(cfg),
        SuiteName::RiiContrast => rii_contrast_suite(cfg),
    }
}

pub fn verify_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    SuiteName::all().iter().map(|s| run_suite(*s, cfg)).collect()
}

/// Shared volume estimate: five times the suite sample count, so the
/// kernel normalisation error stays well inside the statistical windows.
fn suite_volume(cfg: &VerifyConfig) -> VolumeConstant {
    let n = (5 * cfg.samples).max(10_000);
    rii_volume_workers(n, cfg.seed, cfg.workers).expect("sample floor enforced")
}

type Integrand = Box<dyn Fn(&[C]) -> C + Sync>;

/// Named test integrands on a target domain of the given dimension:
/// the constant, the squared modulus of the last coordinate and of the
/// first.
fn eq1_integrands(dim: usize) -> Vec<(String, Integrand)> {
    let last = dim - 1;
    vec![
        ("one".to_string(), Box::new(|_: &[C]| C::new(1.0, 0.0)) as Integrand),
        (
            "abs-xlast-sq".to_string(),
            Box::new(move |x: &[C]| C::new(x[last].norm_sqr(), 0.0)),
        ),
        ("abs-x1-sq".to_string(), Box::new(|x: &[C]| C::new(x[0].norm_sqr(), 0.0))),
    ]
}

fn eq1_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();
    for map in [ProperMap::tetra(), ProperMap::sym2()] {
        for (fname, f) in eq1_integrands(map.target.dimension) {
            for weight in [WeightFunction::One, WeightFunction::OnePlusAbsX1Sq] {
                let name = format!("eq1/{}/f={fname}/w={}", map.name, weight.name());
                match change_of_variables_check(&map, &f, &weight, cfg.samples, cfg.seed, cfg.workers)
                {
                    Ok(report) => {
                        let threshold =
                            report.threshold / 4.0 * cfg.tolerances.sigma;
                        checks.push(
                            CheckResult::new(&name, report.difference, threshold)
                                .with_value(report.lhs.value - report.rhs.value)
                                .with_stderr(
                                    (report.lhs.stderr.powi(2) + report.rhs.stderr.powi(2)).sqrt(),
                                )
                                .with_detail(format!(
                                    "lhs {:.6e}, rhs {:.6e}",
                                    report.lhs.value.re, report.rhs.value.re
                                )),
                        );
                    }
                    Err(err) => checks.push(CheckResult::failed(&name, err.to_string())),
                }
            }
        }
    }
    SuiteReport::collect("eq1", checks)
}

fn rii_test_points() -> Vec<[C; 3]> {
    vec![
        [C::new(0.1, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)],
        [C::new(0.2, 0.0), C::new(-0.1, 0.0), C::new(0.15, 0.0)],
        [C::new(0.1, 0.1), C::new(0.0, 0.2), C::new(-0.15, 0.0)],
    ]
}

fn tetra_test_points() -> Vec<[C; 3]> {
    vec![
        [C::new(0.1, 0.0), C::new(0.2, 0.0), C::new(0.01, 0.0)],
        [C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(-0.3, 0.0)],
        [C::new(0.2, 0.0), C::new(0.0, 0.1), C::new(0.05, 0.0)],
    ]
}

fn test_polynomials() -> Vec<(String, Poly3)> {
    vec![
        ("1".into(), Poly3::one()),
        ("v0".into(), Poly3::variable(0)),
        ("v1".into(), Poly3::variable(1)),
        ("v2".into(), Poly3::variable(2)),
        ("v0*v1".into(), &Poly3::variable(0) * &Poly3::variable(1)),
    ]
}

fn reproducing_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();
    let volume = suite_volume(cfg);

    // Seed stability of the volume constant itself, on disjoint streams.
    let second = rii_volume_workers(volume.n_samples, cfg.seed.wrapping_add(1), cfg.workers)
        .expect("sample floor enforced");
    let tol = cfg.tolerances.sigma * (volume.stderr.powi(2) + second.stderr.powi(2)).sqrt();
    checks.push(
        CheckResult::new("reproducing/volume-seed-stability", (volume.value - second.value).abs(), tol)
            .with_value(C::new(volume.value, 0.0))
            .with_stderr(volume.stderr)
            .with_detail(format!("n = {}, second seed estimate {:.6}", volume.n_samples, second.value)),
    );

    let kernels: [(&str, Kernel, Vec<[C; 3]>); 2] = [
        ("rii", Kernel::rii(volume), rii_test_points()),
        ("tetrablock", Kernel::tetrablock(volume), tetra_test_points()),
    ];
    for (kname, kernel, points) in kernels {
        for (pname, f) in test_polynomials() {
            for (i, z) in points.iter().enumerate() {
                let name = format!("reproducing/{kname}/f={pname}/z{i}");
                match reproducing_check(&kernel, &f, z, cfg.samples, cfg.seed, cfg.workers) {
                    Ok(report) => {
                        let threshold = cfg.tolerances.sigma * report.estimate.stderr;
                        checks.push(
                            CheckResult::new(&name, report.difference, threshold)
                                .with_value(report.estimate.value)
                                .with_stderr(report.estimate.stderr)
                                .with_detail(format!("expected {:.6e}", report.expected.norm())),
                        );
                    }
                    Err(err) => checks.push(CheckResult::failed(&name, err.to_string())),
                }
            }
        }
    }
    SuiteReport::collect("reproducing", checks)
}

fn isometry_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();
    let map = ProperMap::tetra();
    let v0 = Poly3::variable(0);
    let v1 = Poly3::variable(1);
    let v2 = Poly3::variable(2);
    let test_fs: Vec<(String, Poly3)> = vec![
        ("1".into(), Poly3::one()),
        ("x1".into(), v0.clone()),
        ("x3^2".into(), &v2 * &v2),
        ("x1*x2*x3".into(), &(&v0 * &v1) * &v2),
    ];
    for (fname, f) in &test_fs {
        for weight in [WeightFunction::One, WeightFunction::OnePlusAbsX1Sq] {
            let name = format!("isometry/tetra/f={fname}/w={}", weight.name());
            let gf = gamma_apply(f, &map);
            let fwd = map.clone();
            let weight_src = {
                let w = weight.clone();
                WeightFunction::Custom(std::sync::Arc::new(move |z: &[C]| {
                    w.evaluate(&fwd.forward(z))
                }))
            };
            let source_norm = inner_product(
                &map.source,
                |z| gf.eval(z),
                |z| gf.eval(z),
                &weight_src,
                cfg.samples,
                cfg.seed,
                cfg.workers,
            );
            let target_norm = inner_product(
                &map.target,
                |x| f.eval(x),
                |x| f.eval(x),
                &weight,
                cfg.samples,
                cfg.seed.wrapping_add(0x1505),
                cfg.workers,
            );
            match (source_norm, target_norm) {
                (Ok(a), Ok(b)) => {
                    let diff = (a.value - b.value).norm();
                    let tol =
                        cfg.tolerances.sigma * (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
                    checks.push(
                        CheckResult::new(&name, diff, tol)
                            .with_value(a.value - b.value)
                            .with_stderr((a.stderr.powi(2) + b.stderr.powi(2)).sqrt())
                            .with_detail(format!(
                                "||Gamma f||^2 = {:.6e}, ||f||^2 = {:.6e}",
                                a.value.re, b.value.re
                            )),
                    );
                }
                (Err(e), _) | (_, Err(e)) => {
                    checks.push(CheckResult::failed(&name, e.to_string()))
                }
            }
        }
    }

    // Contraction of the projection: ||P g||^2 <= ||g||^2 within the
    // statistical window, on norm-squared estimates.
    let contraction_gs: Vec<(String, Poly3)> = vec![
        ("z11".into(), v0.clone()),
        ("z".into(), v2.clone()),
        ("z11*z+z^2".into(), &(&v0 * &v2) + &(&v2 * &v2)),
    ];
    for (gname, g) in &contraction_gs {
        let name = format!("isometry/contraction/g={gname}");
        let pg = project_generic(g, &map);
        let norm_g = inner_product(
            &map.source,
            |z| g.eval(z),
            |z| g.eval(z),
            &WeightFunction::One,
            cfg.samples,
            cfg.seed,
            cfg.workers,
        );
        let norm_pg = inner_product(
            &map.source,
            |z| pg.eval(z),
            |z| pg.eval(z),
            &WeightFunction::One,
            cfg.samples,
            cfg.seed,
            cfg.workers,
        );
        match (norm_g, norm_pg) {
            (Ok(g_est), Ok(pg_est)) => {
                let excess = pg_est.value.re - g_est.value.re;
                let tol =
                    cfg.tolerances.sigma * (g_est.stderr.powi(2) + pg_est.stderr.powi(2)).sqrt();
                checks.push(
                    CheckResult::new(&name, excess, tol).with_detail(format!(
                        "||Pg||^2 = {:.6e}, ||g||^2 = {:.6e}",
                        pg_est.value.re, g_est.value.re
                    )),
                );
            }
            (Err(e), _) | (_, Err(e)) => checks.push(CheckResult::failed(&name, e.to_string())),
        }
    }
    SuiteReport::collect("isometry", checks)
}

fn operator_laws_suite(cfg: &VerifyConfig) -> SuiteReport {
    let tol = cfg.tolerances.coeff_abs;
    let mut checks = Vec::new();
    for map in [ProperMap::tetra(), ProperMap::sym2()] {
        let vars = map.source_dim();

        let mut worst = 0.0f64;
        for exp in monomials_up_to(8, vars) {
            let g = Poly3::monomial(exp, C::new(1.0, 0.0));
            let pg = project_generic(&g, &map);
            worst = worst.max(project_generic(&pg, &map).max_coeff_distance(&pg));
        }
        checks.push(CheckResult::new(format!("operator-laws/{}/idempotence", map.name), worst, tol));

        let mut worst = 0.0f64;
        for exp in monomials_up_to(6, vars) {
            let f = Poly3::monomial(exp, C::new(1.0, 0.0));
            let gf = gamma_apply(&f, &map);
            worst = worst.max(project_generic(&gf, &map).max_coeff_distance(&gf));
        }
        checks.push(CheckResult::new(format!("operator-laws/{}/absorption", map.name), worst, tol));

        let mut worst = 0.0f64;
        let mut failures = 0u32;
        for exp in monomials_up_to(6, vars) {
            let f = Poly3::monomial(exp, C::new(1.0, 0.0));
            match gamma_star_apply(&gamma_apply(&f, &map), &map) {
                Ok(back) => worst = worst.max(back.max_coeff_distance(&f)),
                Err(_) => failures += 1,
            }
        }
        let mut check =
            CheckResult::new(format!("operator-laws/{}/inversion", map.name), worst, tol);
        if failures > 0 {
            check.pass = false;
            check = check.with_detail(format!("{failures} Gamma images rejected by Gamma*"));
        }
        checks.push(check);
    }

    // Tetrablock specialisation agrees with the generic projection, and the
    // range of Gamma is cut out by the off-diagonal parity.
    let tetra = ProperMap::tetra();
    let mut worst = 0.0f64;
    let mut parity_disagreements = 0u32;
    for exp in monomials_up_to(8, 3) {
        let g = Poly3::monomial(exp, C::new(1.0, 0.0));
        worst = worst.max(project_tetra(&g).max_coeff_distance(&project_generic(&g, &tetra)));

        let odd = exp[2] % 2 == 1;
        let in_range = gamma_star_apply(&g, &tetra).is_ok();
        let parity = in_gamma_range_tetra(&g, tol);
        let fixed = project_tetra(&g).approx_eq(&g, 0.0);
        if in_range != odd || parity != odd || fixed != odd {
            parity_disagreements += 1;
        }
    }
    checks.push(CheckResult::new("operator-laws/tetra/specialised-projection", worst, tol));
    checks.push(
        CheckResult::new(
            "operator-laws/tetra/range-parity",
            f64::from(parity_disagreements),
            1.0,
        )
        .with_detail("range(Gamma) = odd off-diagonal monomials, three characterisations"),
    );
    SuiteReport::collect("operator-laws", checks)
}

/// Deterministic regular pairs in `R_II`: consecutive samples with the
/// off-diagonal modulus above the cancellation guard.
pub fn sample_regular_pairs(
    n_pairs: usize,
    seed: u64,
    guard: f64,
) -> Vec<(SymPoint, SymPoint)> {
    let rii = DomainDescriptor::new(DomainName::RII);
    let mut pairs = Vec::with_capacity(n_pairs);
    let mut pending: Option<SymPoint> = None;
    let mut round = 0u64;
    while pairs.len() < n_pairs {
        let batch = rii
            .sample_uniform(2 * (n_pairs - pairs.len()) + 64, seed.wrapping_add(round))
            .expect("positive batch");
        for p in &batch.points {
            let point = SymPoint::from_slice(p);
            if point.z.norm() <= guard {
                continue;
            }
            match pending.take() {
                None => pending = Some(point),
                Some(first) => {
                    pairs.push((first, point));
                    if pairs.len() == n_pairs {
                        break;
                    }
                }
            }
        }
        round += 1;
    }
    pairs
}

fn bell_suite(cfg: &VerifyConfig) -> SuiteReport {
    // The volume constant cancels in the ratio below, so a moderate
    // estimate is enough regardless of the pair count.
    let volume = rii_volume_workers(1_000_000, cfg.seed, cfg.workers).expect("floor");
    let source = Kernel::rii(volume);
    let tetra = ProperMap::tetra();
    let n_pairs = cfg.samples.clamp(10, 2_000_000) as usize;
    // Guard 1e-3: the transformation-formula sum loses roughly
    // eps/|z w| digits to cancellation near the critical set.
    let pairs = sample_regular_pairs(n_pairs, cfg.seed, 1e-3);

    let mut worst = 0.0f64;
    let mut worst_detail = String::new();
    let mut errors = 0u32;
    for (z, w) in &pairs {
        let za = z.to_array();
        let wa = w.to_array();
        let pushed = bell_pushforward(&source, &tetra, &za, &wa);
        let x = TetraPoint::from_slice(&tetra.forward(&za));
        let y = TetraPoint::from_slice(&tetra.forward(&wa));
        let closed = kernel_tetrablock_closed(x, y, &volume, false);
        match (pushed, closed) {
            (Ok(a), Ok(b)) => {
                let rel = (a - b).norm() / b.norm();
                if rel > worst {
                    worst = rel;
                    worst_detail = format!("z = {za:?}, w = {wa:?}");
                }
            }
            _ => errors += 1,
        }
    }
    let mut check = CheckResult::new(
        format!("bell/tetra/{n_pairs}-pairs"),
        worst,
        cfg.tolerances.bell_rel,
    )
    .with_detail(format!("worst pair: {worst_detail}"));
    if errors > 0 {
        check.pass = false;
        check.detail = Some(format!("{errors} evaluation errors"));
    }
    SuiteReport::collect("bell", vec![check])
}

fn deck_invariance_suite(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.samples.clamp(10, 10_000) as usize;
    let mut checks = Vec::new();
    for map in [ProperMap::tetra(), ProperMap::sym2()] {
        let batch = map.source.sample_uniform(n, cfg.seed).expect("positive count");
        let report = deck_invariance_check(&map, &map.deck_group(), &batch);
        let mut check = CheckResult::new(
            format!("deck-invariance/{}", map.name),
            report.max_fiber_defect,
            1e-10,
        )
        .with_detail(format!(
            "{} samples, {} regular, forward defect {:.2e}",
            report.samples_checked, report.regular_samples, report.max_forward_defect
        ));
        check.pass = report.pass;
        checks.push(check);
    }
    SuiteReport::collect("deck-invariance", checks)
}

fn lqk_roots_suite(_cfg: &VerifyConfig) -> SuiteReport {
    let roots = lqk::isolate_axis_roots();
    let expected = 1.0 / 3f64.sqrt();
    let mut checks = Vec::new();

    let in_disc: Vec<_> = roots.iter().filter(|r| r.in_disc).collect();
    let position = in_disc
        .iter()
        .map(|r| {
            let target = C::new(0.0, expected * r.value[1].signum());
            (C::new(r.value[0], r.value[1]) - target).norm()
        })
        .fold(0.0, f64::max);
    checks.push(
        CheckResult::new("lqk-roots/in-disc-positions", position, 1e-12)
            .with_detail(format!("{} roots in the disc, +-i/sqrt(3)", in_disc.len())),
    );

    let residual = roots.iter().map(|r| r.residual).fold(0.0, f64::max);
    checks.push(CheckResult::new("lqk-roots/residuals", residual, 1e-12));

    let z0 = lqk::axis_zero();
    let z0_sq = z0 * z0;
    let inside = z0_sq.im.abs() < 1e-15 && z0_sq.re > -1.0 && z0_sq.re < 0.0;
    let mut check = CheckResult::new("lqk-roots/z0-squared-interval", (z0_sq.re + 1.0 / 3.0).abs(), 1e-15)
        .with_value(z0_sq)
        .with_detail("z0^2 = -1/3 lies in (-1, 0)");
    check.pass &= inside;
    checks.push(check);

    let count_ok = in_disc.len() == 2 && roots.len() == 4;
    let mut check = CheckResult::new("lqk-roots/count", if count_ok { 0.0 } else { 1.0 }, 0.5);
    check.pass = count_ok;
    checks.push(check);

    SuiteReport::collect("lqk-roots", checks)
}

fn lqk_pairs_suite(cfg: &VerifyConfig) -> SuiteReport {
    let volume = rii_volume_workers(1_000_000, cfg.seed, cfg.workers).expect("floor");
    let mut checks = Vec::new();
    for r in [0.7, 0.8, 0.9] {
        let name = format!("lqk-pairs/r={r}");
        match lqk::interior_zero_pair(r, &volume) {
            Ok(cert) => {
                let mut check = CheckResult::new(
                    format!("{name}/closed-residual"),
                    cert.relative_residual,
                    cfg.tolerances.zero_residual,
                )
                .with_value(C::new(cert.kernel_value[0], cert.kernel_value[1]));
                check.pass &= cert.membership == (true, true);
                if cert.membership != (true, true) {
                    check = check.with_detail("certificate pair escaped the tetrablock");
                }
                checks.push(check);
                match lqk::cross_check_certificate(&cert, &volume) {
                    Ok(cross) => checks.push(CheckResult::new(
                        format!("{name}/pushforward-residual"),
                        cross,
                        cfg.tolerances.cross_residual,
                    )),
                    Err(err) => checks
                        .push(CheckResult::failed(format!("{name}/pushforward-residual"), err.to_string())),
                }
            }
            Err(err) => checks.push(CheckResult::failed(&name, err.to_string())),
        }
    }
    SuiteReport::collect("lqk-pairs", checks)
}

fn falsifier_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();

    match phik_isometry_falsifier(3) {
        Ok(w) => {
            let point_defect = w
                .point
                .iter()
                .flat_map(|xy| [xy[0] - 0.4, xy[1]])
                .map(f64::abs)
                .fold(0.0, f64::max);
            checks.push(
                CheckResult::new("falsifier/k3/canonical-point", point_defect, 1e-12)
                    .with_detail("witness (0.4, 0.4, 0.4)"),
            );
            let norm_defect = (w.norm_before - 0.8)
                .abs()
                .max((w.norm_after - 0.48f64.sqrt()).abs());
            checks.push(
                CheckResult::new("falsifier/k3/norms", norm_defect, 1e-12)
                    .with_detail(format!("norms {} vs {}", w.norm_before, w.norm_after)),
            );
            let mut gap = CheckResult::new("falsifier/k3/gap", 0.1, w.gap);
            gap.pass = w.gap > 0.1;
            gap.detail = Some(format!("gap {}", w.gap));
            checks.push(gap);
        }
        Err(err) => checks.push(CheckResult::failed("falsifier/k3", err.to_string())),
    }

    // k = 2 rotates by -1, which must preserve the norm on samples.
    let k2_rejected = matches!(phik_isometry_falsifier(2), Err(MapError::NormPreservingOrder { k: 2 }));
    let rii = DomainDescriptor::new(DomainName::RII);
    let n = 10_000;
    let batch = rii.sample_uniform(n, cfg.seed).expect("positive count");
    let worst = batch
        .points
        .iter()
        .map(|p| {
            let a = SymPoint::from_slice(p);
            let b = SymPoint::new(a.z11, a.z22, -a.z);
            (a.opnorm() - b.opnorm()).abs()
        })
        .fold(0.0, f64::max);
    let mut check = CheckResult::new("falsifier/k2/norm-preserving", worst, 1e-14)
        .with_detail(format!("{n} samples; falsifier rejects k = 2: {k2_rejected}"));
    check.pass = check.pass && k2_rejected;
    checks.push(check);

    SuiteReport::collect("falsifier", checks)
}

fn rii_contrast_suite(cfg: &VerifyConfig) -> SuiteReport {
    let volume = rii_volume_workers(1_000_000, cfg.seed, cfg.workers).expect("floor");
    let n_pairs = cfg.samples.clamp(10, 2_000_000) as usize;
    let rii = DomainDescriptor::new(DomainName::RII);
    let batch = rii.sample_uniform(2 * n_pairs, cfg.seed).expect("positive count");
    let mut min_scaled = f64::INFINITY;
    let mut errors = 0u32;
    for pair in batch.points.chunks_exact(2) {
        match kernel_rii(
            SymPoint::from_slice(&pair[0]),
            SymPoint::from_slice(&pair[1]),
            &volume,
            false,
        ) {
            // |K| in units of the central value 1/V.
            Ok(k) => min_scaled = min_scaled.min(k.norm() * volume.value),
            Err(_) => errors += 1,
        }
    }
    let mut check = CheckResult::new(format!("rii-contrast/{n_pairs}-pairs"), 1e-6, min_scaled)
        .with_detail(format!("min |K| V = {min_scaled:.3e} over {n_pairs} interior pairs"));
    check.pass = min_scaled > 1e-6 && errors == 0;
    checks_into_report(check)
}

fn checks_into_report(check: CheckResult) -> SuiteReport {
    SuiteReport::collect("rii-contrast", vec![check])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> VerifyConfig {
        VerifyConfig { samples: 50_000, seed: 3, workers: 2, ..Default::default() }
    }

    #[test]
    fn fast_suites_pass() {
        for suite in [
            SuiteName::OperatorLaws,
            SuiteName::LqkRoots,
            SuiteName::LqkPairs,
            SuiteName::Falsifier,
            SuiteName::DeckInvariance,
        ] {
            let report = run_suite(suite, &small_cfg());
            assert!(report.pass, "{suite}: {:?}", report.checks);
        }
    }

    #[test]
    fn bell_suite_small_run() {
        let cfg = VerifyConfig { samples: 200, ..small_cfg() };
        let report = run_suite(SuiteName::Bell, &cfg);
        assert!(report.pass, "{:?}", report.checks);
    }

    #[test]
    fn contrast_suite_small_run() {
        let cfg = VerifyConfig { samples: 2_000, ..small_cfg() };
        let report = run_suite(SuiteName::RiiContrast, &cfg);
        assert!(report.pass, "{:?}", report.checks);
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in SuiteName::all() {
            let parsed: SuiteName = suite.to_string().parse().unwrap();
            assert_eq!(parsed, suite);
        }
        assert!("nope".parse::<SuiteName>().is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = VerifyConfig { samples: 5_000, ..small_cfg() };
        let a = run_suite(SuiteName::Eq1, &cfg);
        let b = run_suite(SuiteName::Eq1, &cfg);
        for (x, y) in a.checks.iter().zip(&b.checks) {
            assert_eq!(x.measure, y.measure);
            assert_eq!(x.value, y.value);
        }
    }
}
