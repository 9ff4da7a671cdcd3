//! Proper holomorphic map bundles.
//!
//! Two maps are bundled: the 2:1 tetrablock map
//! `(z11, z22, z) -> (z11, z22, z11*z22 - z^2)` from `R_II` onto the
//! tetrablock, and the symmetrization map `(z1, z2) -> (z1 + z2, z1*z2)`
//! from the bidisc onto the symmetrized bidisc. Each bundle exposes the
//! forward map, its complex Jacobian determinant, the local inverses off
//! the critical set, and the deck group under which the map is precisely
//! invariant.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{quadratic_roots, worker_rng, DomainDescriptor, DomainName, SampleBatch, SymPoint};
use crate::C;

/// Guard band around the critical set: discriminants of modulus below this
/// raise [`MapError::CriticalValue`].
pub const DEFAULT_EPS_CRIT: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("critical value: discriminant modulus {modulus:e} below guard {guard:e}")]
    CriticalValue { modulus: f64, guard: f64 },
    #[error("point has dimension {got}, map expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rotation order {k} preserves the operator norm; no witness exists")]
    NormPreservingOrder { k: u32 },
    #[error("witness search exhausted its budget for rotation order {k}")]
    SearchExhausted { k: u32 },
    #[error("transform group is not closed: {reason}")]
    GroupNotClosed { reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapName {
    Tetra,
    Sym2,
}

impl fmt::Display for MapName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapName::Tetra => "tetra",
            MapName::Sym2 => "sym2",
        })
    }
}

impl FromStr for MapName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tetra" => Ok(MapName::Tetra),
            "sym2" => Ok(MapName::Sym2),
            other => Err(format!("unknown map `{other}` (expected tetra|sym2)")),
        }
    }
}

/// An invertible linear map on C^n, stored row major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    rows: Vec<Vec<C>>,
}

impl LinearMap {
    pub fn new(rows: Vec<Vec<C>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { rows }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| C::new(f64::from(i == j), 0.0)).collect())
            .collect();
        Self { rows }
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| C::new(if i == j { entries[i] } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        Self { rows }
    }

    /// The permutation swapping the two coordinates of C^2.
    pub fn swap2() -> Self {
        Self::new(vec![
            vec![C::new(0.0, 0.0), C::new(1.0, 0.0)],
            vec![C::new(1.0, 0.0), C::new(0.0, 0.0)],
        ])
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<C>] {
        &self.rows
    }

    pub fn apply(&self, p: &[C]) -> Vec<C> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn compose(&self, other: &Self) -> Self {
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.rows[i][k] * other.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        Self { rows }
    }

    pub fn det(&self) -> C {
        match self.dim() {
            1 => self.rows[0][0],
            2 => self.rows[0][0] * self.rows[1][1] - self.rows[0][1] * self.rows[1][0],
            3 => {
                let m = &self.rows;
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
            n => panic!("determinant not implemented for dimension {n}"),
        }
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol))
    }
}

/// A finite group of invertible linear maps, closure-checked at
/// construction.
#[derive(Debug, Clone)]
pub struct TransformGroup {
    elements: Vec<LinearMap>,
}

impl TransformGroup {
    pub fn new(elements: Vec<LinearMap>) -> Result<Self, MapError> {
        const TOL: f64 = 1e-12;
        if elements.is_empty() {
            return Err(MapError::GroupNotClosed {
                reason: "empty element list".into(),
            });
        }
        let id = LinearMap::identity(elements[0].dim());
        if !elements.iter().any(|e| e.approx_eq(&id, TOL)) {
            return Err(MapError::GroupNotClosed {
                reason: "identity missing".into(),
            });
        }
        for a in &elements {
            let mut has_inverse = false;
            for b in &elements {
                let prod = a.compose(b);
                if !elements.iter().any(|e| e.approx_eq(&prod, TOL)) {
                    return Err(MapError::GroupNotClosed {
                        reason: "product escapes the element list".into(),
                    });
                }
                has_inverse |= prod.approx_eq(&id, TOL);
            }
            if !has_inverse {
                return Err(MapError::GroupNotClosed {
                    reason: "element without inverse".into(),
                });
            }
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[LinearMap] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// A proper holomorphic map bundle: forward map, Jacobian, local inverses
/// and deck group.
#[derive(Debug, Clone)]
pub struct ProperMap {
    pub name: MapName,
    pub source: DomainDescriptor,
    pub target: DomainDescriptor,
    pub multiplicity: usize,
}

impl ProperMap {
    pub fn tetra() -> Self {
        Self {
            name: MapName::Tetra,
            source: DomainDescriptor::new(DomainName::RII),
            target: DomainDescriptor::new(DomainName::Tetrablock),
            multiplicity: 2,
        }
    }

    pub fn sym2() -> Self {
        Self {
            name: MapName::Sym2,
            source: DomainDescriptor::new(DomainName::Bidisc),
            target: DomainDescriptor::new(DomainName::SymBidisc),
            multiplicity: 2,
        }
    }

    pub fn from_name(name: MapName) -> Self {
        match name {
            MapName::Tetra => Self::tetra(),
            MapName::Sym2 => Self::sym2(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source.dimension
    }

    pub fn forward(&self, p: &[C]) -> Vec<C> {
        match self.name {
            MapName::Tetra => vec![p[0], p[1], p[0] * p[1] - p[2] * p[2]],
            MapName::Sym2 => vec![p[0] + p[1], p[0] * p[1]],
        }
    }

    /// Determinant of the complex Jacobian matrix of [`Self::forward`].
    pub fn jacobian(&self, p: &[C]) -> C {
        match self.name {
            MapName::Tetra => -2.0 * p[2],
            MapName::Sym2 => p[0] - p[1],
        }
    }

    /// Discriminant whose vanishing marks critical values of the target
    /// point: `x1*x2 - x3` resp. `x1^2 - 4*x2`.
    pub fn target_discriminant(&self, x: &[C]) -> C {
        match self.name {
            MapName::Tetra => x[0] * x[1] - x[2],
            MapName::Sym2 => x[0] * x[0] - 4.0 * x[1],
        }
    }

    /// All preimages of a regular value, principal branch first. Ordering:
    /// the lift built from the principal square root of the discriminant
    /// comes first, which for a positive real discriminant means the larger
    /// real part.
    pub fn local_inverses(&self, x: &[C]) -> Result<Vec<Vec<C>>, MapError> {
        self.local_inverses_with_guard(x, DEFAULT_EPS_CRIT)
    }

    pub fn local_inverses_with_guard(
        &self,
        x: &[C],
        eps_crit: f64,
    ) -> Result<Vec<Vec<C>>, MapError> {
        if x.len() != self.target.dimension {
            return Err(MapError::DimensionMismatch {
                expected: self.target.dimension,
                got: x.len(),
            });
        }
        let disc = self.target_discriminant(x);
        if disc.norm() <= eps_crit {
            return Err(MapError::CriticalValue {
                modulus: disc.norm(),
                guard: eps_crit,
            });
        }
        Ok(match self.name {
            MapName::Tetra => {
                let s = disc.sqrt();
                vec![vec![x[0], x[1], s], vec![x[0], x[1], -s]]
            }
            MapName::Sym2 => {
                let (r1, r2) = quadratic_roots(x[0], x[1]);
                vec![vec![r1, r2], vec![r2, r1]]
            }
        })
    }

    /// Jacobian determinant of the local inverse branch through `lift`,
    /// evaluated at `forward(lift)`. Derived by implicit differentiation:
    /// `-1/(2z)` for the tetrablock branch with off-diagonal entry `z`,
    /// `1/(t1 - t2)` for the root ordering `(t1, t2)`.
    pub fn inverse_jacobian(&self, lift: &[C]) -> C {
        match self.name {
            MapName::Tetra => (-2.0 * lift[2]).inv(),
            MapName::Sym2 => (lift[0] - lift[1]).inv(),
        }
    }

    /// Deck group under which the map is precisely invariant.
    pub fn deck_group(&self) -> TransformGroup {
        let elements = match self.name {
            MapName::Tetra => vec![LinearMap::identity(3), LinearMap::diagonal(&[1.0, 1.0, -1.0])],
            MapName::Sym2 => vec![LinearMap::identity(2), LinearMap::swap2()],
        };
        TransformGroup::new(elements).expect("bundled deck groups are closed")
    }
}

/// Where a deck-invariance check failed first.
#[derive(Debug, Clone, Serialize)]
pub struct DeckFailure {
    pub sample_index: usize,
    pub point: Vec<[f64; 2]>,
    pub kind: String,
}

/// Outcome of [`deck_invariance_check`].
#[derive(Debug, Clone, Serialize)]
pub struct DeckReport {
    pub samples_checked: usize,
    pub regular_samples: usize,
    pub max_forward_defect: f64,
    pub max_fiber_defect: f64,
    pub pass: bool,
    pub first_failure: Option<DeckFailure>,
}

/// Verifies on a sample batch that (a) `forward o U = forward` for every
/// group element and (b) the fiber of `forward(p)` equals the group orbit
/// of `p` as a set, at every regular sample.
pub fn deck_invariance_check(
    map: &ProperMap,
    group: &TransformGroup,
    samples: &SampleBatch,
) -> DeckReport {
    const FORWARD_TOL: f64 = 1e-14;
    const FIBER_TOL: f64 = 1e-10;

    let mut report = DeckReport {
        samples_checked: samples.len(),
        regular_samples: 0,
        max_forward_defect: 0.0,
        max_fiber_defect: 0.0,
        pass: true,
        first_failure: None,
    };
    let fail = |report: &mut DeckReport, idx: usize, p: &[C], kind: &str| {
        report.pass = false;
        if report.first_failure.is_none() {
            report.first_failure = Some(DeckFailure {
                sample_index: idx,
                point: p.iter().map(|z| [z.re, z.im]).collect(),
                kind: kind.to_string(),
            });
        }
    };

    for (idx, p) in samples.points.iter().enumerate() {
        let image = map.forward(p);
        let mut orbit = Vec::with_capacity(group.order());
        for u in group.elements() {
            let q = u.apply(p);
            if !map.source.is_member(&q).unwrap_or(false) {
                fail(&mut report, idx, p, "orbit leaves the source domain");
                continue;
            }
            let defect = point_distance(&map.forward(&q), &image);
            report.max_forward_defect = report.max_forward_defect.max(defect);
            if defect > FORWARD_TOL {
                fail(&mut report, idx, p, "forward map not group invariant");
            }
            orbit.push(q);
        }
        let Ok(fiber) = map.local_inverses(&image) else {
            continue; // critical sample: fiber-orbit comparison is skipped
        };
        report.regular_samples += 1;
        let defect = set_distance(&fiber, &orbit);
        report.max_fiber_defect = report.max_fiber_defect.max(defect);
        if defect > FIBER_TOL {
            fail(&mut report, idx, p, "fiber differs from group orbit");
        }
    }
    report
}

fn point_distance(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two finite point sets.
fn set_distance(a: &[Vec<C>], b: &[Vec<C>]) -> f64 {
    let one_sided = |from: &[Vec<C>], to: &[Vec<C>]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| point_distance(p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// A point whose operator norm changes under the coordinate rotation
/// `(z11, z22, z) -> (z11, z22, zeta z)`, `zeta = exp(2 pi i / k)`.
#[derive(Debug, Clone, Serialize)]
pub struct FalsifierWitness {
    pub k: u32,
    pub zeta: [f64; 2],
    pub point: [[f64; 2]; 3],
    pub norm_before: f64,
    pub norm_after: f64,
    pub gap: f64,
}

/// Exhibits a witness showing the rotation by a primitive k-th root of
/// unity (k >= 3) in the off-diagonal entry is not an operator-norm
/// isometry of `R_II`, which rules out properness of the degree-k
/// analogues of the tetrablock map.
///
/// Deterministic search: the real diagonal family `(t, t, t)` is scanned at
/// step 0.05, keeping the first member point with a norm gap above 0.1
/// (falling back to 0.05, then to a seeded random search).
pub fn phik_isometry_falsifier(k: u32) -> Result<FalsifierWitness, MapError> {
    if k < 3 {
        return Err(MapError::NormPreservingOrder { k });
    }
    let zeta = C::from_polar(1.0, 2.0 * std::f64::consts::PI / f64::from(k));
    let witness = |p: SymPoint| -> Option<FalsifierWitness> {
        if p.opnorm() >= 1.0 {
            return None;
        }
        let rotated = SymPoint::new(p.z11, p.z22, zeta * p.z);
        let before = p.opnorm();
        let after = rotated.opnorm();
        Some(FalsifierWitness {
            k,
            zeta: [zeta.re, zeta.im],
            point: [
                [p.z11.re, p.z11.im],
                [p.z22.re, p.z22.im],
                [p.z.re, p.z.im],
            ],
            norm_before: before,
            norm_after: after,
            gap: (before - after).abs(),
        })
    };

    let grid: Vec<SymPoint> = (1..20)
        .map(|i| {
            let t = 0.05 * f64::from(i);
            SymPoint::from_re(t, t, t)
        })
        .collect();
    for min_gap in [0.1, 0.05] {
        for p in &grid {
            if let Some(w) = witness(*p) {
                if w.gap > min_gap {
                    return Ok(w);
                }
            }
        }
    }

    // Random fallback for orders where the diagonal family is too flat.
    let rii = DomainDescriptor::new(DomainName::RII);
    let mut rng = worker_rng(0xFA15_1F1E, 0);
    let mut buf = vec![C::new(0.0, 0.0); 3];
    for _ in 0..100_000 {
        rii.draw_box_point(&mut rng, &mut buf);
        if let Some(w) = witness(SymPoint::from_slice(&buf)) {
            if w.gap > 0.05 {
                return Ok(w);
            }
        }
    }
    Err(MapError::SearchExhausted { k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::c;

    /// Finite-difference determinant of the complex Jacobian, central
    /// differences with a real step. Independent of the closed forms.
    fn fd_jacobian_det(map: &ProperMap, p: &[C], h: f64) -> C {
        let n = map.source_dim();
        let mut cols: Vec<Vec<C>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut plus = p.to_vec();
            let mut minus = p.to_vec();
            plus[j] += C::new(h, 0.0);
            minus[j] -= C::new(h, 0.0);
            let fp = map.forward(&plus);
            let fm = map.forward(&minus);
            cols.push(
                fp.iter()
                    .zip(&fm)
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect(),
            );
        }
        let rows: Vec<Vec<C>> = (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
        LinearMap::new(rows).det()
    }

    #[test]
    fn tetra_forward_fixed_points() {
        let m = ProperMap::tetra();
        assert_eq!(m.forward(&[c(0.0, 0.0); 3]), vec![c(0.0, 0.0); 3]);
        assert_eq!(
            m.forward(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]
        );
    }

    #[test]
    fn sym2_forward_substitution() {
        let m = ProperMap::sym2();
        assert_eq!(
            m.forward(&[c(0.5, 0.0), c(-0.5, 0.0)]),
            vec![c(0.0, 0.0), c(-0.25, 0.0)]
        );
    }

    #[test]
    fn jacobians_match_finite_differences() {
        let tetra = ProperMap::tetra();
        let sym2 = ProperMap::sym2();
        let pts3 = [
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.3, 0.1), c(-0.2, 0.4), c(0.25, -0.3)],
            vec![c(0.1, 0.0), c(0.2, 0.0), c(0.0, 0.5)],
        ];
        for p in &pts3 {
            let fd = fd_jacobian_det(&tetra, p, 1e-6);
            let exact = tetra.jacobian(p);
            assert!((fd - exact).norm() < 1e-8, "tetra FD {fd} vs {exact}");
        }
        assert_eq!(
            tetra.jacobian(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
            c(-2.0, 0.0)
        );
        // Critical set is {z = 0}.
        assert_eq!(tetra.jacobian(&[c(0.3, 0.0), c(0.7, 0.0), c(0.0, 0.0)]), c(0.0, 0.0));
        let pts2 = [
            vec![c(0.4, -0.1), c(0.1, 0.3)],
            vec![c(0.0, 0.0), c(0.5, 0.0)],
        ];
        for p in &pts2 {
            let fd = fd_jacobian_det(&sym2, p, 1e-6);
            let exact = sym2.jacobian(p);
            assert!((fd - exact).norm() < 1e-8, "sym2 FD {fd} vs {exact}");
        }
        assert_eq!(sym2.jacobian(&[c(0.5, 0.0), c(0.5, 0.0)]), c(0.0, 0.0));
    }

    #[test]
    fn tetra_local_inverses_ordering_and_roundtrip() {
        let m = ProperMap::tetra();
        let inv = m.local_inverses(&[c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(inv[0], vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(inv[1], vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);

        let x = [c(0.2, 0.0), c(0.3, 0.0), c(0.05, 0.0)];
        let inv = m.local_inverses(&x).unwrap();
        assert!((inv[0][2] - c(0.1, 0.0)).norm() < 1e-15);
        assert!((inv[1][2] - c(-0.1, 0.0)).norm() < 1e-15);
        for pre in &inv {
            let round = m.forward(pre);
            for (a, b) in round.iter().zip(&x) {
                assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
            }
        }
    }

    #[test]
    fn sym2_local_inverses_are_root_orderings() {
        let m = ProperMap::sym2();
        let inv = m.local_inverses(&[c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(inv[0], vec![c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(inv[1], vec![c(-1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn critical_values_are_rejected() {
        let m = ProperMap::tetra();
        let err = m.local_inverses(&[c(0.3, 0.0), c(0.5, 0.0), c(0.15, 0.0)]).unwrap_err();
        assert!(matches!(err, MapError::CriticalValue { .. }));
        let m = ProperMap::sym2();
        let err = m.local_inverses(&[c(1.0, 0.0), c(0.25, 0.0)]).unwrap_err();
        assert!(matches!(err, MapError::CriticalValue { .. }));
    }

    #[test]
    fn multiplicity_and_chain_rule_on_samples() {
        for map in [ProperMap::tetra(), ProperMap::sym2()] {
            let batch = map.source.sample_uniform(1000, 13).unwrap();
            let mut regular = 0;
            for p in &batch.points {
                let x = map.forward(p);
                let Ok(fiber) = map.local_inverses(&x) else { continue };
                regular += 1;
                assert_eq!(fiber.len(), map.multiplicity);
                for lift in &fiber {
                    let chain = map.inverse_jacobian(lift) * map.jacobian(lift);
                    assert!(
                        (chain - c(1.0, 0.0)).norm() < 1e-10,
                        "chain rule defect {chain} at {lift:?}"
                    );
                }
            }
            assert!(regular > 990, "{} regular of {}", regular, batch.len());
        }
    }

    /// Finite-difference determinant of the Jacobian of a local inverse,
    /// tracking the branch through the given lift by nearest-point matching.
    fn fd_inverse_jacobian(map: &ProperMap, x: &[C], lift: &[C], h: f64) -> C {
        let n = x.len();
        let branch_at = |y: &[C]| -> Vec<C> {
            map.local_inverses(y)
                .unwrap()
                .into_iter()
                .min_by(|a, b| {
                    point_distance(a, lift)
                        .partial_cmp(&point_distance(b, lift))
                        .unwrap()
                })
                .unwrap()
        };
        let mut cols: Vec<Vec<C>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut plus = x.to_vec();
            let mut minus = x.to_vec();
            plus[j] += C::new(h, 0.0);
            minus[j] -= C::new(h, 0.0);
            let fp = branch_at(&plus);
            let fm = branch_at(&minus);
            cols.push(fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect());
        }
        let rows: Vec<Vec<C>> = (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
        LinearMap::new(rows).det()
    }

    #[test]
    fn inverse_jacobian_matches_finite_differences() {
        let tetra = ProperMap::tetra();
        let x = [c(0.2, 0.1), c(-0.1, 0.2), c(0.05, -0.02)];
        for lift in tetra.local_inverses(&x).unwrap() {
            let fd = fd_inverse_jacobian(&tetra, &x, &lift, 1e-6);
            let exact = tetra.inverse_jacobian(&lift);
            assert!((fd - exact).norm() < 1e-6 * exact.norm(), "{fd} vs {exact}");
        }
        let sym2 = ProperMap::sym2();
        let x = [c(0.3, -0.2), c(-0.1, 0.05)];
        for lift in sym2.local_inverses(&x).unwrap() {
            let fd = fd_inverse_jacobian(&sym2, &x, &lift, 1e-6);
            let exact = sym2.inverse_jacobian(&lift);
            assert!((fd - exact).norm() < 1e-6 * exact.norm(), "{fd} vs {exact}");
        }
    }

    #[test]
    fn images_land_in_target_domain() {
        for map in [ProperMap::tetra(), ProperMap::sym2()] {
            let batch = map.source.sample_uniform(800, 17).unwrap();
            for p in &batch.points {
                let x = map.forward(p);
                assert!(map.target.is_member(&x).unwrap(), "{:?} escaped", map.name);
            }
        }
    }

    #[test]
    fn deck_invariance_passes_for_bundled_groups() {
        for map in [ProperMap::tetra(), ProperMap::sym2()] {
            let batch = map.source.sample_uniform(500, 23).unwrap();
            let report = deck_invariance_check(&map, &map.deck_group(), &batch);
            assert!(report.pass, "{:?}: {:?}", map.name, report.first_failure);
            assert_eq!(report.max_forward_defect, 0.0);
        }
    }

    #[test]
    fn deck_invariance_fails_for_wrong_group() {
        let map = ProperMap::tetra();
        let wrong = TransformGroup::new(vec![
            LinearMap::identity(3),
            LinearMap::diagonal(&[-1.0, 1.0, 1.0]),
        ])
        .unwrap();
        let batch = map.source.sample_uniform(200, 29).unwrap();
        let report = deck_invariance_check(&map, &wrong, &batch);
        assert!(!report.pass);
        let failure = report.first_failure.unwrap();
        assert_eq!(failure.sample_index, 0);
    }

    #[test]
    fn group_closure_is_verified() {
        // diag(1,1,i) alone has order 4; the pair below is not closed.
        let bad = TransformGroup::new(vec![
            LinearMap::identity(3),
            LinearMap::new(vec![
                vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
            ]),
        ]);
        assert!(matches!(bad, Err(MapError::GroupNotClosed { .. })));
    }

    #[test]
    fn falsifier_canonical_witness_for_k3() {
        let w = phik_isometry_falsifier(3).unwrap();
        assert_eq!(w.point, [[0.4, 0.0], [0.4, 0.0], [0.4, 0.0]]);
        assert!((w.norm_before - 0.8).abs() < 1e-15);
        assert!((w.norm_after - 0.48f64.sqrt()).abs() < 1e-15);
        assert!(w.gap > 0.1);
    }

    #[test]
    fn falsifier_finds_witness_for_k4() {
        let w = phik_isometry_falsifier(4).unwrap();
        assert!(w.gap > 0.05);
        let p = SymPoint::new(
            c(w.point[0][0], w.point[0][1]),
            c(w.point[1][0], w.point[1][1]),
            c(w.point[2][0], w.point[2][1]),
        );
        assert!(p.opnorm() < 1.0);
    }

    #[test]
    fn falsifier_rejects_norm_preserving_orders() {
        assert!(matches!(
            phik_isometry_falsifier(2),
            Err(MapError::NormPreservingOrder { k: 2 })
        ));
        // And indeed z -> -z preserves the norm on samples.
        let rii = DomainDescriptor::new(DomainName::RII);
        let batch = rii.sample_uniform(1000, 31).unwrap();
        for p in &batch.points {
            let a = SymPoint::from_slice(p);
            let b = SymPoint::new(a.z11, a.z22, -a.z);
            assert!((a.opnorm() - b.opnorm()).abs() <= 1e-14);
        }
    }

    #[test]
    fn tetra_deck_invariance_is_algebraic() {
        // forward(z11, z22, -z) = forward(z11, z22, z) holds exactly as a
        // polynomial identity; spot-check the coefficient structure via
        // symbolic composition.
        use crate::operators::Poly3;
        let minus = LinearMap::diagonal(&[1.0, 1.0, -1.0]);
        for component in [
            Poly3::variable(0),
            Poly3::variable(1),
            &(&Poly3::variable(0) * &Poly3::variable(1))
                - &(&Poly3::variable(2) * &Poly3::variable(2)),
        ] {
            let flipped = component.compose_linear(&minus);
            assert!(component.approx_eq(&flipped, 0.0));
        }
    }
}
