//! Bergman kernels: closed forms and the Bell pushforward engine.
//!
//! Closed forms are bundled for the unit disc, polydiscs and the Cartan
//! domain `R_II`, where `K(t, s) = det(I - t conj(s))^(-3) / Vol(R_II)`.
//! For a proper holomorphic map `pi: D -> G` the pushforward engine
//! evaluates the target kernel through the transformation formula
//!
//! ```text
//! conj(Jpi(w)) K_G(pi(z), pi(w)) = sum_k K_D(pi^k(pi(z)), w) Jpi^k(pi(z))
//! ```
//!
//! summing the source kernel over the local inverses of `pi(z)`. For the
//! tetrablock the sum collapses algebraically: writing `d± = det(I - t±
//! conj(s))` for the two matrix lifts `t±` of `x` and either lift `s` of
//! `y`, the identity `d- - d+ = 4 z conj(w)` cancels the Jacobian
//! denominator exactly and leaves the singularity-free closed form
//!
//! ```text
//! K_E(x, y) = (d+^2 + d+ d- + d-^2) / (V (d+ d-)^3),   V = Vol(R_II),
//! ```
//!
//! which extends continuously across the critical set `x1 x2 = x3` and,
//! unlike the raw quotient, needs no limiting procedure there. The volume
//! constant is always injected by the caller, so normalisation errors can
//! never contaminate zero finding.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{DomainDescriptor, DomainName, SymPoint, TetraPoint};
use crate::maps::{MapError, ProperMap};
use crate::quadrature;
use crate::C;

/// Slack admitted on the operator norm when a kernel argument is allowed
/// to sit on the closure of its domain.
const CLOSURE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("{which} argument is not in the {domain} domain")]
    NonMember { domain: DomainName, which: &'static str },
    #[error("kernel pole: det(I - t conj(s)) vanished")]
    Pole,
    #[error(transparent)]
    Critical(#[from] MapError),
    #[error("volume estimate needs at least {min} samples, got {got}")]
    TooFewSamples { min: u64, got: u64 },
}

/// Monte Carlo estimate of a domain volume, with the binomial standard
/// error of the underlying rejection rate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VolumeConstant {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
}

/// Monte Carlo volume of `R_II`: `pi^3` times the acceptance rate of
/// `opnorm < 1` under uniform sampling of the unit polydisc of C^3.
/// Deterministic for a fixed `(seed, workers)` pair and byte-identical to
/// `mc_integrate` of the constant one over the same stream.
pub fn rii_volume(n: u64, seed: u64) -> Result<VolumeConstant, KernelError> {
    rii_volume_workers(n, seed, 1)
}

pub fn rii_volume_workers(n: u64, seed: u64, workers: usize) -> Result<VolumeConstant, KernelError> {
    const MIN_SAMPLES: u64 = 10_000;
    if n < MIN_SAMPLES {
        return Err(KernelError::TooFewSamples { min: MIN_SAMPLES, got: n });
    }
    let rii = DomainDescriptor::new(DomainName::RII);
    let est = quadrature::mc_integrate(&rii, |_| C::new(1.0, 0.0), n, seed, workers)
        .expect("constant integrand is finite");
    Ok(VolumeConstant {
        value: est.value.re,
        stderr: est.stderr,
        n_samples: n,
        seed,
    })
}

/// Bergman kernel of the unit disc, `1 / (pi (1 - t conj(s))^2)`.
pub fn kernel_disc(t: C, s: C) -> Result<C, KernelError> {
    if t.norm_sqr() >= 1.0 {
        return Err(KernelError::NonMember { domain: DomainName::Disc, which: "first" });
    }
    if s.norm_sqr() >= 1.0 {
        return Err(KernelError::NonMember { domain: DomainName::Disc, which: "second" });
    }
    let d = C::new(1.0, 0.0) - t * s.conj();
    Ok((std::f64::consts::PI * d * d).inv())
}

/// Product kernel of the unit polydisc.
pub fn kernel_polydisc(t: &[C], s: &[C]) -> Result<C, KernelError> {
    let domain = match t.len() {
        2 => DomainName::Bidisc,
        _ => DomainName::Polydisc3,
    };
    if t.iter().any(|z| z.norm_sqr() >= 1.0) {
        return Err(KernelError::NonMember { domain, which: "first" });
    }
    if s.iter().any(|z| z.norm_sqr() >= 1.0) {
        return Err(KernelError::NonMember { domain, which: "second" });
    }
    let mut acc = C::new(1.0, 0.0);
    for (a, b) in t.iter().zip(s) {
        let d = C::new(1.0, 0.0) - a * b.conj();
        acc *= std::f64::consts::PI * d * d;
    }
    Ok(acc.inv())
}

/// `det(I - t conj(s))` for 2x2 symmetric matrices in `(z11, z22, z)`
/// coordinates: `1 - (z11 conj(w11) + 2 z conj(w) + z22 conj(w22))
/// + det(t) conj(det(s))`.
pub fn det_one_minus_pair(t: SymPoint, s: SymPoint) -> C {
    let cross = t.z11 * s.z11.conj() + 2.0 * t.z * s.z.conj() + t.z22 * s.z22.conj();
    C::new(1.0, 0.0) - cross + t.det() * s.det().conj()
}

/// Bergman kernel of the Cartan domain `R_II`. The second argument must be
/// interior; the first may sit on the closure when `closure` is set (the
/// kernel extends analytically to `closure x R_II`).
pub fn kernel_rii(
    t: SymPoint,
    s: SymPoint,
    volume: &VolumeConstant,
    closure: bool,
) -> Result<C, KernelError> {
    check_norm(t.opnorm(), DomainName::RII, "first", closure)?;
    check_norm(s.opnorm(), DomainName::RII, "second", false)?;
    let d = det_one_minus_pair(t, s);
    if d.norm_sqr() == 0.0 {
        return Err(KernelError::Pole);
    }
    Ok((d * d * d).inv() / volume.value)
}

/// Singularity-free closed form of the tetrablock kernel.
pub fn kernel_tetrablock_closed(
    x: TetraPoint,
    y: TetraPoint,
    volume: &VolumeConstant,
    closure: bool,
) -> Result<C, KernelError> {
    check_norm(x.lift_opnorm(), DomainName::Tetrablock, "first", closure)?;
    check_norm(y.lift_opnorm(), DomainName::Tetrablock, "second", false)?;
    let sx = x.lift_offdiag();
    let sy = y.lift_offdiag();
    let lift_plus = SymPoint::new(x.x1, x.x2, sx);
    let lift_minus = SymPoint::new(x.x1, x.x2, -sx);
    let s = SymPoint::new(y.x1, y.x2, sy);
    let dp = det_one_minus_pair(lift_plus, s);
    let dm = det_one_minus_pair(lift_minus, s);
    let prod = dp * dm;
    if prod.norm_sqr() == 0.0 {
        return Err(KernelError::Pole);
    }
    let numerator = dp * dp + prod + dm * dm;
    Ok(numerator / (volume.value * prod * prod * prod))
}

fn check_norm(
    norm: f64,
    domain: DomainName,
    which: &'static str,
    closure: bool,
) -> Result<(), KernelError> {
    let ok = if closure { norm <= 1.0 + CLOSURE_TOL } else { norm < 1.0 };
    if ok {
        Ok(())
    } else {
        Err(KernelError::NonMember { domain, which })
    }
}

/// A named kernel evaluator. `closure` permits the first argument on the
/// closure of the domain; it is off by default.
#[derive(Debug, Clone)]
pub enum Kernel {
    Disc,
    Bidisc,
    Polydisc3,
    RII { volume: VolumeConstant, closure: bool },
    TetrablockClosed { volume: VolumeConstant, closure: bool },
}

impl Kernel {
    pub fn rii(volume: VolumeConstant) -> Self {
        Kernel::RII { volume, closure: false }
    }

    pub fn tetrablock(volume: VolumeConstant) -> Self {
        Kernel::TetrablockClosed { volume, closure: false }
    }

    pub fn with_closure(self, closure: bool) -> Self {
        match self {
            Kernel::RII { volume, .. } => Kernel::RII { volume, closure },
            Kernel::TetrablockClosed { volume, .. } => Kernel::TetrablockClosed { volume, closure },
            other => other,
        }
    }

    pub fn domain(&self) -> DomainName {
        match self {
            Kernel::Disc => DomainName::Disc,
            Kernel::Bidisc => DomainName::Bidisc,
            Kernel::Polydisc3 => DomainName::Polydisc3,
            Kernel::RII { .. } => DomainName::RII,
            Kernel::TetrablockClosed { .. } => DomainName::Tetrablock,
        }
    }

    pub fn evaluate(&self, x: &[C], y: &[C]) -> Result<C, KernelError> {
        match self {
            Kernel::Disc => kernel_disc(x[0], y[0]),
            Kernel::Bidisc | Kernel::Polydisc3 => kernel_polydisc(x, y),
            Kernel::RII { volume, closure } => {
                kernel_rii(SymPoint::from_slice(x), SymPoint::from_slice(y), volume, *closure)
            }
            Kernel::TetrablockClosed { volume, closure } => kernel_tetrablock_closed(
                TetraPoint::from_slice(x),
                TetraPoint::from_slice(y),
                volume,
                *closure,
            ),
        }
    }
}

/// Bell pushforward: evaluates the target-domain kernel at
/// `(pi(z), pi(w))` from the source kernel, summing over the local
/// inverses of `pi(z)`. Both `z` and `w` must be regular for the map.
pub fn bell_pushforward(
    source_kernel: &Kernel,
    map: &ProperMap,
    z: &[C],
    w: &[C],
) -> Result<C, KernelError> {
    bell_pushforward_with_guard(source_kernel, map, z, w, crate::maps::DEFAULT_EPS_CRIT)
}

pub fn bell_pushforward_with_guard(
    source_kernel: &Kernel,
    map: &ProperMap,
    z: &[C],
    w: &[C],
    eps_crit: f64,
) -> Result<C, KernelError> {
    let jw = map.jacobian(w);
    if jw.norm() <= eps_crit {
        return Err(KernelError::Critical(MapError::CriticalValue {
            modulus: jw.norm(),
            guard: eps_crit,
        }));
    }
    let x = map.forward(z);
    let lifts = map.local_inverses_with_guard(&x, eps_crit)?;
    let mut acc = C::new(0.0, 0.0);
    for lift in &lifts {
        acc += source_kernel.evaluate(lift, w)? * map.inverse_jacobian(lift);
    }
    Ok(acc / jw.conj())
}
