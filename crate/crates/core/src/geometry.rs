//! Domain definitions and uniform sampling.
//!
//! Five bounded domains are bundled: the unit disc, the bidisc, the unit
//! polydisc of C^3, the Cartan domain `R_II` of 2x2 symmetric matrices with
//! operator norm below one, the tetrablock `E` and the symmetrized bidisc
//! `G_2`. Each carries a membership predicate and a bounding polydisc used
//! for rejection sampling; sampling is deterministic for a fixed
//! `(seed, worker-count)` pair.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::C;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("point has dimension {got}, domain {domain} expects {expected}")]
    DimensionMismatch {
        domain: DomainName,
        expected: usize,
        got: usize,
    },
    #[error("sample count must be at least 1")]
    EmptySample,
}

/// Point of C^3 identified with the symmetric matrix `[[z11, z], [z, z22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymPoint {
    pub z11: C,
    pub z22: C,
    pub z: C,
}

impl SymPoint {
    pub fn new(z11: C, z22: C, z: C) -> Self {
        Self { z11, z22, z }
    }

    pub fn from_re(z11: f64, z22: f64, z: f64) -> Self {
        Self::new(z11.into(), z22.into(), z.into())
    }

    pub fn from_slice(p: &[C]) -> Self {
        Self::new(p[0], p[1], p[2])
    }

    pub fn to_array(self) -> [C; 3] {
        [self.z11, self.z22, self.z]
    }

    /// Determinant of the identified matrix, `z11*z22 - z^2`.
    pub fn det(self) -> C {
        self.z11 * self.z22 - self.z * self.z
    }

    /// Operator norm of the identified symmetric matrix.
    ///
    /// `||A||^2` is the spectral radius of `A A*`; with
    /// `T = |z11|^2 + |z22|^2 + 2|z|^2` and `D = |z11*z22 - z^2|^2` the
    /// larger eigenvalue of `A A*` is `(T + sqrt(T^2 - 4D)) / 2`. The
    /// result depends on the off-diagonal entry only through `z^2`.
    pub fn opnorm(self) -> f64 {
        let t = self.z11.norm_sqr() + self.z22.norm_sqr() + 2.0 * self.z.norm_sqr();
        let d = self.det().norm_sqr();
        let disc = (t * t - 4.0 * d).max(0.0);
        (0.5 * (t + disc.sqrt())).sqrt()
    }
}

/// Point of C^3 in tetrablock coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetraPoint {
    pub x1: C,
    pub x2: C,
    pub x3: C,
}

impl TetraPoint {
    pub fn new(x1: C, x2: C, x3: C) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn from_re(x1: f64, x2: f64, x3: f64) -> Self {
        Self::new(x1.into(), x2.into(), x3.into())
    }

    pub fn from_slice(p: &[C]) -> Self {
        Self::new(p[0], p[1], p[2])
    }

    pub fn to_array(self) -> [C; 3] {
        [self.x1, self.x2, self.x3]
    }

    /// Principal square root of `x1*x2 - x3`, the off-diagonal entry of a
    /// matrix lift. Both roots give the same operator norm, so membership
    /// below is branch independent.
    pub fn lift_offdiag(self) -> C {
        (self.x1 * self.x2 - self.x3).sqrt()
    }

    /// Operator norm of a matrix lift `(x1, x2, s)` with `s^2 = x1*x2 - x3`.
    pub fn lift_opnorm(self) -> f64 {
        SymPoint::new(self.x1, self.x2, self.lift_offdiag()).opnorm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainName {
    Disc,
    Bidisc,
    Polydisc3,
    RII,
    Tetrablock,
    SymBidisc,
}

impl fmt::Display for DomainName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainName::Disc => "disc",
            DomainName::Bidisc => "bidisc",
            DomainName::Polydisc3 => "polydisc3",
            DomainName::RII => "rii",
            DomainName::Tetrablock => "tetrablock",
            DomainName::SymBidisc => "symbidisc",
        })
    }
}

impl FromStr for DomainName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "disc" => Ok(DomainName::Disc),
            "bidisc" => Ok(DomainName::Bidisc),
            "polydisc3" => Ok(DomainName::Polydisc3),
            "rii" => Ok(DomainName::RII),
            "tetrablock" => Ok(DomainName::Tetrablock),
            "symbidisc" => Ok(DomainName::SymBidisc),
            other => Err(format!(
                "unknown domain `{other}` (expected disc|bidisc|polydisc3|rii|tetrablock|symbidisc)"
            )),
        }
    }
}

/// A named domain with its dimension and the per-coordinate radii of the
/// bounding polydisc used for rejection sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainDescriptor {
    pub name: DomainName,
    pub dimension: usize,
    pub bounding_radii: Vec<f64>,
}

impl DomainDescriptor {
    pub fn new(name: DomainName) -> Self {
        // The tetrablock needs |x3| < 2: |x3| <= |x1 x2| + |s|^2 < 2 for
        // members. The symmetrized bidisc needs |z1 + z2| < 2 in the first
        // coordinate.
        let bounding_radii: Vec<f64> = match name {
            DomainName::Disc => vec![1.0],
            DomainName::Bidisc => vec![1.0, 1.0],
            DomainName::Polydisc3 | DomainName::RII => vec![1.0, 1.0, 1.0],
            DomainName::Tetrablock => vec![1.0, 1.0, 2.0],
            DomainName::SymBidisc => vec![2.0, 1.0],
        };
        Self {
            name,
            dimension: bounding_radii.len(),
            bounding_radii,
        }
    }

    /// Lebesgue volume of the bounding polydisc.
    pub fn bounding_volume(&self) -> f64 {
        self.bounding_radii
            .iter()
            .map(|r| std::f64::consts::PI * r * r)
            .product()
    }

    /// Interior membership. Boundary points (norm exactly one, or a root of
    /// modulus exactly one) are non-members; comparisons are strict.
    pub fn is_member(&self, p: &[C]) -> Result<bool, GeometryError> {
        if p.len() != self.dimension {
            return Err(GeometryError::DimensionMismatch {
                domain: self.name,
                expected: self.dimension,
                got: p.len(),
            });
        }
        Ok(match self.name {
            DomainName::Disc => p[0].norm_sqr() < 1.0,
            DomainName::Bidisc | DomainName::Polydisc3 => {
                p.iter().all(|z| z.norm_sqr() < 1.0)
            }
            DomainName::RII => SymPoint::from_slice(p).opnorm() < 1.0,
            DomainName::Tetrablock => TetraPoint::from_slice(p).lift_opnorm() < 1.0,
            DomainName::SymBidisc => {
                let (r1, r2) = quadratic_roots(p[0], p[1]);
                r1.norm_sqr() < 1.0 && r2.norm_sqr() < 1.0
            }
        })
    }

    /// Draw `n` points i.i.d. uniform with respect to Lebesgue volume, by
    /// rejection from the bounding polydisc. Single worker stream.
    pub fn sample_uniform(&self, n: usize, seed: u64) -> Result<SampleBatch, GeometryError> {
        self.sample_uniform_workers(n, seed, 1)
    }

    /// Multi-stream variant: worker `k` draws from ChaCha8 stream `k` of the
    /// master seed and owns a contiguous share of the batch, so the
    /// concatenation is deterministic for a fixed `(seed, workers)` pair.
    pub fn sample_uniform_workers(
        &self,
        n: usize,
        seed: u64,
        workers: usize,
    ) -> Result<SampleBatch, GeometryError> {
        if n == 0 {
            return Err(GeometryError::EmptySample);
        }
        let workers = workers.max(1);
        let mut points = Vec::with_capacity(n);
        let mut proposals: u64 = 0;
        for k in 0..workers {
            let quota = n / workers + usize::from(k < n % workers);
            let mut rng = worker_rng(seed, k as u64);
            let mut buf = vec![C::new(0.0, 0.0); self.dimension];
            let mut accepted = 0;
            while accepted < quota {
                self.draw_box_point(&mut rng, &mut buf);
                proposals += 1;
                if self.is_member(&buf).expect("dimension fixed") {
                    points.push(buf.clone());
                    accepted += 1;
                }
            }
        }
        Ok(SampleBatch {
            points,
            seed,
            acceptance_rate: n as f64 / proposals as f64,
        })
    }

    /// One point uniform in the bounding polydisc: each coordinate uniform
    /// in its disc, by rejection from the circumscribed square.
    pub(crate) fn draw_box_point<R: Rng>(&self, rng: &mut R, buf: &mut [C]) {
        for (slot, &radius) in buf.iter_mut().zip(&self.bounding_radii) {
            *slot = draw_disc(rng, radius);
        }
    }
}

/// Uniform sample from the open disc of the given radius.
fn draw_disc<R: Rng>(rng: &mut R, radius: f64) -> C {
    loop {
        let re = rng.gen_range(-radius..radius);
        let im = rng.gen_range(-radius..radius);
        if re * re + im * im < radius * radius {
            return C::new(re, im);
        }
    }
}

/// ChaCha8 stream `stream` of the master seed; the documented substream rule
/// for every parallel sampler in the crate.
pub(crate) fn worker_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Roots of `t^2 - b t + c`, principal square root first.
pub(crate) fn quadratic_roots(b: C, c: C) -> (C, C) {
    let disc = b * b - 4.0 * c;
    let s = disc.sqrt();
    ((b + s) / 2.0, (b - s) / 2.0)
}

/// A batch of accepted sample points together with the acceptance rate
/// relative to the bounding polydisc.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub points: Vec<Vec<C>>,
    pub seed: u64,
    pub acceptance_rate: f64,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Convenience for literals in tests and examples.
pub fn c(re: f64, im: f64) -> C {
    Complex64::new(re, im)
}
