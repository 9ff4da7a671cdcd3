//! Lu Qi-Keng zero finding for the tetrablock kernel.
//!
//! Along the axis family `(phi(0,0,u), phi(0,0,v))` the kernel reduces to
//! `(3 + 10 c^2 + 3 c^4) / (V (1 - c^2)^6)` with `c = u conj(v)`, so its
//! zero set is governed by the quartic `6 + 20 t^2 + 6 t^4`, whose roots
//! in the unit disc are `t = +-i/sqrt(3)`. Pulling the boundary pair
//! `(phi(0,0,1), phi(0,0,z0))` into the interior along the rescaling
//! `(u, v) -> (r u, v/r)` produces certified interior zero pairs: the
//! tetrablock Bergman kernel vanishes at interior points, so the
//! tetrablock is not a Lu Qi-Keng domain. Because the absolute kernel
//! scale carries the Monte Carlo volume constant, every certificate is
//! judged by a relative residual against a local kernel scale probe,
//! never by an absolute threshold.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{DomainDescriptor, DomainName, TetraPoint};
use crate::kernels::{
    bell_pushforward, kernel_tetrablock_closed, Kernel, KernelError, VolumeConstant,
};
use crate::maps::ProperMap;
use crate::C;

/// Radius of the parameter probe ring defining the local kernel scale.
const PROBE_RADIUS: f64 = 0.01;
/// Relative residual certifying a zero of the closed-form kernel.
pub const CERT_TOL: f64 = 1e-9;
/// Relative residual required of the independent pushforward re-evaluation.
pub const CROSS_CHECK_TOL: f64 = 1e-8;

/// In-disc axis root `i / sqrt(3)` of the axis-family polynomial.
pub fn axis_zero() -> C {
    C::new(0.0, 1.0 / 3f64.sqrt())
}

#[derive(Debug, Error)]
pub enum LqkError {
    #[error("rescaling parameter r = {r} outside ({min}, 1)", min = axis_zero().norm())]
    OutOfRange { r: f64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// The axis-family polynomial `6 + 20 t^2 + 6 t^4` as its coefficient list.
pub fn axis_family_polynomial() -> [f64; 5] {
    [6.0, 0.0, 20.0, 0.0, 6.0]
}

/// Evaluates the axis-family polynomial.
pub fn axis_family_eval(t: C) -> C {
    let coeffs = axis_family_polynomial();
    let mut acc = C::new(0.0, 0.0);
    for &a in coeffs.iter().rev() {
        acc = acc * t + a;
    }
    acc
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AxisRoot {
    pub value: [f64; 2],
    pub in_disc: bool,
    pub residual: f64,
}

/// All four roots of the axis-family polynomial with in-disc flags. The
/// quartic is a quadratic in `t^2` with roots `t^2 = -1/3` and `t^2 = -3`,
/// solved in closed form; residuals are checked against the polynomial.
pub fn isolate_axis_roots() -> Vec<AxisRoot> {
    // 6 u^2 + 20 u + 6 = 0 => u = (-10 +- 8) / 6.
    let squares = [(-10.0 + 8.0) / 6.0, (-10.0 - 8.0) / 6.0];
    let mut roots = Vec::with_capacity(4);
    for u in squares {
        let r = C::new(u, 0.0).sqrt();
        for root in [r, -r] {
            roots.push(AxisRoot {
                value: [root.re, root.im],
                in_disc: root.norm_sqr() < 1.0,
                residual: axis_family_eval(root).norm(),
            });
        }
    }
    roots
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertMethod {
    AxisRoot,
    GridScan,
}

/// An interior point pair at which the tetrablock kernel vanishes, with
/// the relative residual against the local kernel scale.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroCertificate {
    pub pair: ([[f64; 2]; 3], [[f64; 2]; 3]),
    /// Axis parameters `(u, v)` with `pair = (phi(0,0,u), phi(0,0,v))`.
    pub params: ([f64; 2], [f64; 2]),
    pub kernel_value: [f64; 2],
    pub relative_residual: f64,
    pub membership: (bool, bool),
    pub method: CertMethod,
}

fn axis_point(u: C) -> TetraPoint {
    TetraPoint::new(C::new(0.0, 0.0), C::new(0.0, 0.0), -u * u)
}

fn to_pair_arrays(p: TetraPoint) -> [[f64; 2]; 3] {
    [[p.x1.re, p.x1.im], [p.x2.re, p.x2.im], [p.x3.re, p.x3.im]]
}

/// Largest kernel modulus over a probe ring of radius 0.01 around the
/// parameters; the denominator of every relative residual.
fn local_scale(u: C, v: C, volume: &VolumeConstant) -> f64 {
    let mut scale = 0.0f64;
    for j in 0..8 {
        let theta = 2.0 * std::f64::consts::PI * f64::from(j) / 8.0;
        let delta = C::from_polar(PROBE_RADIUS, theta);
        for (pu, pv) in [(u + delta, v), (u, v + delta)] {
            if let Ok(k) = kernel_tetrablock_closed(axis_point(pu), axis_point(pv), volume, false)
            {
                scale = scale.max(k.norm());
            }
        }
    }
    scale
}

fn certificate(u: C, v: C, volume: &VolumeConstant, method: CertMethod) -> ZeroCertificate {
    let p = axis_point(u);
    let q = axis_point(v);
    let tetra = DomainDescriptor::new(DomainName::Tetrablock);
    let membership = (
        tetra.is_member(&p.to_array()).unwrap_or(false),
        tetra.is_member(&q.to_array()).unwrap_or(false),
    );
    let value = kernel_tetrablock_closed(p, q, volume, false)
        .map(|k| [k.re, k.im])
        .unwrap_or([f64::NAN, f64::NAN]);
    let scale = local_scale(u, v, volume);
    let modulus = (value[0] * value[0] + value[1] * value[1]).sqrt();
    ZeroCertificate {
        pair: (to_pair_arrays(p), to_pair_arrays(q)),
        params: ([u.re, u.im], [v.re, v.im]),
        kernel_value: value,
        relative_residual: if scale > 0.0 { modulus / scale } else { f64::MAX },
        membership,
        method,
    }
}

/// Interior zero pair from the rescaling trick: `p = phi(0,0,r)`,
/// `q = phi(0,0, z0/r)` with `z0 = i/sqrt(3)` and `|z0| < r < 1`.
pub fn interior_zero_pair(r: f64, volume: &VolumeConstant) -> Result<ZeroCertificate, LqkError> {
    interior_zero_pair_with_root(r, volume, false)
}

/// Same pair built from the conjugate root `-i/sqrt(3)`; reported only on
/// request, the certificate is the complex conjugate of the default one.
pub fn interior_zero_pair_with_root(
    r: f64,
    volume: &VolumeConstant,
    conjugate_root: bool,
) -> Result<ZeroCertificate, LqkError> {
    let z0 = if conjugate_root { axis_zero().conj() } else { axis_zero() };
    if !(r > z0.norm() && r < 1.0) {
        return Err(LqkError::OutOfRange { r });
    }
    Ok(certificate(C::new(r, 0.0), z0 / r, volume, CertMethod::AxisRoot))
}

/// Re-evaluates a certificate through the generic pushforward engine at a
/// lifted representative and returns the relative residual against the
/// same local scale. Independent of the closed form.
pub fn cross_check_certificate(
    cert: &ZeroCertificate,
    volume: &VolumeConstant,
) -> Result<f64, LqkError> {
    let u = C::new(cert.params.0[0], cert.params.0[1]);
    let v = C::new(cert.params.1[0], cert.params.1[1]);
    let tetra = ProperMap::tetra();
    let source = Kernel::rii(*volume);
    let zero = C::new(0.0, 0.0);
    let value = bell_pushforward(&source, &tetra, &[zero, zero, u], &[zero, zero, v])?;
    let scale = local_scale(u, v, volume);
    Ok(if scale > 0.0 { value.norm() / scale } else { f64::MAX })
}

/// Parametrised pair families for the scanner, all within the axis slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairFamily {
    /// `(u, v) -> (phi(0,0,u), phi(0,0,v))`.
    Axis,
    /// Second parameter rotated to the imaginary axis:
    /// `(u, v) -> (phi(0,0,u), phi(0,0,iv))`.
    AxisImagSecond,
    /// Diagonal pairs `(p, p)`, `p = phi(0,0,u + iv)`; kernel positive,
    /// no zeros.
    Diagonal,
}

impl PairFamily {
    fn params(self, u: C, v: C) -> (C, C) {
        match self {
            PairFamily::Axis => (u, v),
            PairFamily::AxisImagSecond => (u, C::new(0.0, 1.0) * v),
            PairFamily::Diagonal => {
                let p = u + C::new(0.0, 1.0) * v;
                (p, p)
            }
        }
    }

    fn eval(self, u: C, v: C, volume: &VolumeConstant) -> Option<C> {
        let (a, b) = self.params(u, v);
        kernel_tetrablock_closed(axis_point(a), axis_point(b), volume, false).ok()
    }
}

/// Rectangular scan grid over real parameters `(u, v)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanGrid {
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub nu: usize,
    pub nv: usize,
}

impl ScanGrid {
    pub fn square(range: (f64, f64), n: usize) -> Self {
        Self { u_range: range, v_range: range, nu: n, nv: n }
    }
}

/// Scans the family over the grid, minimising `|K|` inside every cell
/// whose corner values undercut the cell-local maximum. A cell yields a
/// certificate when its interior minimum dips below `tol` times the local
/// maximum and the refined point certifies at the residual tolerance.
/// Certificates come out in grid order.
pub fn grid_scan_zeros(
    family: PairFamily,
    grid: ScanGrid,
    tol: f64,
    volume: &VolumeConstant,
) -> Vec<ZeroCertificate> {
    if tol <= 0.0 {
        return Vec::new();
    }
    // Only cells whose corners already sag below this fraction of the
    // neighbourhood maximum are worth refining.
    const PREFILTER: f64 = 0.5;
    let us: Vec<f64> = linspace(grid.u_range, grid.nu);
    let vs: Vec<f64> = linspace(grid.v_range, grid.nv);
    let modulus = |i: usize, j: usize| -> f64 {
        family
            .eval(C::new(us[i], 0.0), C::new(vs[j], 0.0), volume)
            .map_or(f64::INFINITY, |k| k.norm())
    };
    let mut values = vec![vec![0.0f64; vs.len()]; us.len()];
    for (i, row) in values.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = modulus(i, j);
        }
    }

    let mut certificates = Vec::new();
    for i in 0..us.len() - 1 {
        for j in 0..vs.len() - 1 {
            let corners = [values[i][j], values[i + 1][j], values[i][j + 1], values[i + 1][j + 1]];
            let cell_min = corners.iter().cloned().fold(f64::INFINITY, f64::min);
            // Local maximum over the 3x3 node neighbourhood of the cell.
            let mut cell_max = 0.0f64;
            for row in &values[i.saturating_sub(1)..=(i + 2).min(us.len() - 1)] {
                for &v in &row[j.saturating_sub(1)..=(j + 2).min(vs.len() - 1)] {
                    if v.is_finite() {
                        cell_max = cell_max.max(v);
                    }
                }
            }
            if !cell_min.is_finite() || cell_max <= 0.0 || cell_min >= PREFILTER * cell_max {
                continue;
            }
            let (u, v, refined) = refine_cell(family, &us, &vs, (i, j), volume);
            if refined >= tol * cell_max {
                continue;
            }
            let (pu, pv) = family.params(C::new(u, 0.0), C::new(v, 0.0));
            let cert = certificate(pu, pv, volume, CertMethod::GridScan);
            if cert.relative_residual < CROSS_CHECK_TOL {
                certificates.push(cert);
            }
        }
    }
    certificates
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / n as f64)
        .collect()
}

/// Interval-halving minimisation of `|K|^2` along the dominant direction
/// of a cell; returns the refined parameters and the kernel modulus there.
fn refine_cell(
    family: PairFamily,
    us: &[f64],
    vs: &[f64],
    cell: (usize, usize),
    volume: &VolumeConstant,
) -> (f64, f64, f64) {
    let (i, j) = cell;
    let value_at = |u: f64, v: f64| -> f64 {
        family
            .eval(C::new(u, 0.0), C::new(v, 0.0), volume)
            .map_or(f64::INFINITY, |k| k.norm_sqr())
    };
    // Dominant direction: the larger modulus variation across the cell.
    let du_var = (value_at(us[i + 1], vs[j]) - value_at(us[i], vs[j])).abs();
    let dv_var = (value_at(us[i], vs[j + 1]) - value_at(us[i], vs[j])).abs();
    let along_u = du_var >= dv_var;

    // Anchor the frozen coordinate at the corner with the smaller modulus.
    let (fixed, mut lo, mut hi) = if along_u {
        let v = if value_at(us[i], vs[j]) <= value_at(us[i], vs[j + 1]) { vs[j] } else { vs[j + 1] };
        (v, us[i], us[i + 1])
    } else {
        let u = if value_at(us[i], vs[j]) <= value_at(us[i + 1], vs[j]) { us[i] } else { us[i + 1] };
        (u, vs[j], vs[j + 1])
    };
    let eval_t = |t: f64| if along_u { value_at(t, fixed) } else { value_at(fixed, t) };

    // Halve the bracket keeping the half with the smaller quarter-point
    // value; converges to the interior minimum of the V-shaped modulus.
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let left = 0.5 * (lo + mid);
        let right = 0.5 * (mid + hi);
        if eval_t(left) < eval_t(right) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let (u, v) = if along_u { (t, fixed) } else { (fixed, t) };
    (u, v, eval_t(t).sqrt())
}
