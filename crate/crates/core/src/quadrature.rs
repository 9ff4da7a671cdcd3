//! Seeded Monte Carlo integration over the domains.
//!
//! The estimator is plain rejection sampling from the bounding polydisc:
//! `n` proposals are drawn uniformly from the box, non-members contribute
//! zero, and the integral is the box volume times the stream mean. Volume
//! and integrand therefore share one sample stream and their ratio error
//! partially cancels. Worker `k` owns a contiguous share of the proposals
//! on ChaCha8 stream `k`, partial sums are accumulated pairwise in fixed
//! blocks and reduced in worker order, so a fixed `(seed, workers)` pair
//! reproduces the estimate bitwise.

use std::ops::Add;

use thiserror::Error;

use crate::geometry::{worker_rng, DomainDescriptor};
use crate::kernels::{Kernel, KernelError};
use crate::maps::ProperMap;
use crate::operators::{Poly3, WeightFunction};
use crate::C;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("integrand produced a non-finite value at proposal {index}")]
    NonFinite { index: u64 },
    #[error("need at least one sample")]
    EmptySample,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A Monte Carlo estimate; `stderr` is the sample standard deviation of
/// the integrand stream divided by `sqrt(n)`, scaled like the value.
#[derive(Debug, Clone, Copy)]
pub struct MCEstimate {
    pub value: C,
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
}

/// Fixed-block pairwise accumulator. Block sums and the final reduction
/// are both balanced trees, so the summation order is independent of how
/// values are produced and cheap to keep deterministic under fan-out.
pub(crate) struct PairwiseSum<T> {
    block: Vec<T>,
    partials: Vec<T>,
}

const BLOCK: usize = 1024;

impl<T: Add<Output = T> + Default + Copy> PairwiseSum<T> {
    pub fn new() -> Self {
        Self { block: Vec::with_capacity(BLOCK), partials: Vec::new() }
    }

    pub fn push(&mut self, value: T) {
        self.block.push(value);
        if self.block.len() == BLOCK {
            let sum = pairwise(&self.block);
            self.partials.push(sum);
            self.block.clear();
        }
    }

    pub fn finish(mut self) -> T {
        if !self.block.is_empty() {
            let sum = pairwise(&self.block);
            self.partials.push(sum);
        }
        pairwise(&self.partials)
    }
}

pub(crate) fn pairwise<T: Add<Output = T> + Default + Copy>(values: &[T]) -> T {
    match values.len() {
        0 => T::default(),
        1 => values[0],
        n => {
            let mid = n / 2;
            pairwise(&values[..mid]) + pairwise(&values[mid..])
        }
    }
}

struct WorkerMoments {
    sum: C,
    sum_sq: f64,
    first_bad: Option<u64>,
}

/// Proposal stream flavour. The default draws i.i.d. pseudo-random points;
/// the low-discrepancy mode walks a seeded Halton sequence instead, which
/// converges faster on smooth integrands but makes the reported `stderr`
/// nominal (the stream is no longer i.i.d.). Off by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplerKind {
    #[default]
    Pseudo,
    Halton,
}

/// Radical-inverse of `index` in the given base.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv_base = 1.0 / base as f64;
    let mut factor = inv_base;
    let mut result = 0.0;
    while index > 0 {
        result += (index % base) as f64 * factor;
        index /= base;
        factor *= inv_base;
    }
    result
}

const HALTON_BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Halton point of the bounding polydisc: each complex coordinate uses a
/// pair of bases mapped to its disc by the area-preserving polar map.
fn halton_box_point(domain: &DomainDescriptor, index: u64, buf: &mut [C]) {
    for (d, (slot, &radius)) in buf.iter_mut().zip(&domain.bounding_radii).enumerate() {
        let t = radical_inverse(index, HALTON_BASES[2 * d]);
        let s = radical_inverse(index, HALTON_BASES[2 * d + 1]);
        let r = radius * t.sqrt();
        *slot = C::from_polar(r, 2.0 * std::f64::consts::PI * s);
    }
}

/// `integral of f dV` over the domain, from `n` bounding-box proposals.
pub fn mc_integrate<F>(
    domain: &DomainDescriptor,
    f: F,
    n: u64,
    seed: u64,
    workers: usize,
) -> Result<MCEstimate, QuadError>
where
    F: Fn(&[C]) -> C + Sync,
{
    mc_integrate_with(domain, f, n, seed, workers, SamplerKind::Pseudo)
}

pub fn mc_integrate_with<F>(
    domain: &DomainDescriptor,
    f: F,
    n: u64,
    seed: u64,
    workers: usize,
    sampler: SamplerKind,
) -> Result<MCEstimate, QuadError>
where
    F: Fn(&[C]) -> C + Sync,
{
    if n == 0 {
        return Err(QuadError::EmptySample);
    }
    let workers = workers.max(1) as u64;
    let quota = |k: u64| n / workers + u64::from(k < n % workers);
    let offset = |k: u64| (0..k).map(quota).sum::<u64>();

    let run_worker = |k: u64| -> WorkerMoments {
        let mut rng = worker_rng(seed, k);
        let mut buf = vec![C::new(0.0, 0.0); domain.dimension];
        let mut sums = PairwiseSum::<C>::new();
        let mut squares = PairwiseSum::<f64>::new();
        let mut first_bad = None;
        for i in 0..quota(k) {
            match sampler {
                SamplerKind::Pseudo => domain.draw_box_point(&mut rng, &mut buf),
                // Seed offsets the sequence; skip index 0 (the origin
                // repeated in every base).
                SamplerKind::Halton => {
                    halton_box_point(domain, 1 + seed + offset(k) + i, &mut buf)
                }
            }
            let member = domain.is_member(&buf).expect("dimension fixed");
            let value = if member { f(&buf) } else { C::new(0.0, 0.0) };
            if !(value.re.is_finite() && value.im.is_finite()) {
                if first_bad.is_none() {
                    first_bad = Some(offset(k) + i);
                }
                sums.push(C::new(0.0, 0.0));
                squares.push(0.0);
                continue;
            }
            sums.push(value);
            squares.push(value.norm_sqr());
        }
        WorkerMoments { sum: sums.finish(), sum_sq: squares.finish(), first_bad }
    };

    let moments: Vec<WorkerMoments> = if workers == 1 {
        vec![run_worker(0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|k| scope.spawn(move || run_worker(k)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };

    if let Some(index) = moments.iter().filter_map(|m| m.first_bad).min() {
        return Err(QuadError::NonFinite { index });
    }
    let sum = pairwise(&moments.iter().map(|m| m.sum).collect::<Vec<_>>());
    let sum_sq = pairwise(&moments.iter().map(|m| m.sum_sq).collect::<Vec<_>>());

    let vol_box = domain.bounding_volume();
    let mean = sum / n as f64;
    let variance = (sum_sq / n as f64 - mean.norm_sqr()).max(0.0);
    Ok(MCEstimate {
        value: vol_box * mean,
        stderr: vol_box * (variance / n as f64).sqrt(),
        n,
        seed,
    })
}

/// Weighted Bergman-space pairing `integral of f conj(g) w dV`.
pub fn inner_product<F, G>(
    domain: &DomainDescriptor,
    f: F,
    g: G,
    weight: &WeightFunction,
    n: u64,
    seed: u64,
    workers: usize,
) -> Result<MCEstimate, QuadError>
where
    F: Fn(&[C]) -> C + Sync,
    G: Fn(&[C]) -> C + Sync,
{
    mc_integrate(domain, |p| f(p) * g(p).conj() * weight.evaluate(p), n, seed, workers)
}

/// Change-of-variables report: both sides of
/// `m * integral_G f w dV = integral_D (f o pi) |Jpi|^2 (w o pi) dV`
/// estimated independently (target sampling vs source sampling).
#[derive(Debug, Clone)]
pub struct CovReport {
    pub lhs: MCEstimate,
    pub rhs: MCEstimate,
    pub difference: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Seed for the independent source-side stream.
fn derived_seed(seed: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15
}

pub fn change_of_variables_check<F>(
    map: &ProperMap,
    f: F,
    weight: &WeightFunction,
    n: u64,
    seed: u64,
    workers: usize,
) -> Result<CovReport, QuadError>
where
    F: Fn(&[C]) -> C + Sync,
{
    let m = map.multiplicity as f64;
    let lhs_raw = mc_integrate(
        &map.target,
        |x| f(x) * weight.evaluate(x),
        n,
        seed,
        workers,
    )?;
    let lhs = MCEstimate {
        value: lhs_raw.value * m,
        stderr: lhs_raw.stderr * m,
        ..lhs_raw
    };
    let rhs = mc_integrate(
        &map.source,
        |z| {
            let x = map.forward(z);
            let j = map.jacobian(z);
            f(&x) * j.norm_sqr() * weight.evaluate(&x)
        },
        n,
        derived_seed(seed),
        workers,
    )?;
    let difference = (lhs.value - rhs.value).norm();
    let threshold = 4.0 * (lhs.stderr.powi(2) + rhs.stderr.powi(2)).sqrt();
    Ok(CovReport { lhs, rhs, difference, threshold, pass: difference < threshold })
}

/// Reproducing-property report: the pairing of `f` with `K(., z)` against
/// the point value `f(z)`.
#[derive(Debug, Clone)]
pub struct ReproReport {
    pub estimate: MCEstimate,
    pub expected: C,
    pub difference: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Checks `<f, K(., z)> = f(z)` by Monte Carlo: the integrand is
/// `f(w) K(z, w)` by Hermitian symmetry of the kernel.
pub fn reproducing_check(
    kernel: &Kernel,
    f: &Poly3,
    z: &[C],
    n: u64,
    seed: u64,
    workers: usize,
) -> Result<ReproReport, QuadError> {
    let domain = DomainDescriptor::new(kernel.domain());
    let estimate = mc_integrate(
        &domain,
        |w| match kernel.evaluate(z, w) {
            Ok(k) => f.eval(w) * k,
            Err(_) => C::new(f64::NAN, 0.0), // surfaces as NonFinite
        },
        n,
        seed,
        workers,
    )?;
    let expected = f.eval(z);
    let difference = (estimate.value - expected).norm();
    let threshold = 4.0 * estimate.stderr;
    Ok(ReproReport { estimate, expected, difference, threshold, pass: difference < threshold })
}
