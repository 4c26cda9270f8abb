//! Monte Carlo estimates of measures and section measures by rejection sampling in a box.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body::StarBody;
use crate::density::Density;
use crate::error::{check_dim, invalid, Error, Result};
use crate::grassmann::Subspace;
use crate::linalg;

/// Samples per independently seeded batch.
pub const BATCH: usize = 1 << 16;
const RADIUS_PROBES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// `|value - mean| <= sigmas · std_error`.
    pub fn agrees(&self, value: f64, sigmas: f64) -> bool {
        (value - self.mean).abs() <= sigmas * self.std_error
    }

    /// `(value - mean) / std_error`, infinite when the error is zero and the values differ.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = value - self.mean;
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Half-width of a box `[-R, R]^n` containing the body: `1.01` times the analytic circumradius when
/// known, else `1.01` times the largest sampled radius.
pub fn bounding_radius(body: &StarBody) -> Result<f64> {
    let r = match body.circumradius() {
        Some(r) => r,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(0xb0c5);
            (0..RADIUS_PROBES)
                .map(|_| 1.0 / body.gauge(&linalg::random_unit(body.dim(), &mut rng)))
                .fold(0.0, f64::max)
        }
    };
    if r.is_finite() && r > 0.0 {
        Ok(1.01 * r)
    } else {
        Err(Error::Unbounded)
    }
}

/// Per-batch generator derived from `(seed, batch)`.
pub fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

struct Sums {
    sum: f64,
    sumsq: f64,
    hits: usize,
}

// Batches are reduced in index order, so the estimate only depends on (seed, samples).
fn estimate(samples: usize, seed: u64, box_dim: usize, radius: f64, mut point_value: impl FnMut(&[f64]) -> Option<f64>) -> Result<McEstimate> {
    if samples < 2 {
        return Err(invalid("Monte Carlo needs at least two samples"));
    }
    let batches = samples.div_ceil(BATCH);
    let mut sums: Vec<Sums> = Vec::with_capacity(batches);
    let mut y = alloc::vec![0.0; box_dim];
    for b in 0..batches {
        let count = BATCH.min(samples - b * BATCH);
        let mut rng = batch_rng(seed, b as u64);
        let mut s = Sums { sum: 0.0, sumsq: 0.0, hits: 0 };
        for _ in 0..count {
            y.iter_mut().for_each(|v| *v = radius * (2.0 * rng.random::<f64>() - 1.0));
            if let Some(v) = point_value(&y) {
                s.sum += v;
                s.sumsq += v * v;
                s.hits += 1;
            }
        }
        if b == 0 && s.hits == 0 {
            return Err(Error::Unbounded);
        }
        sums.push(s);
    }
    let n = samples as f64;
    let sum: f64 = sums.iter().map(|s| s.sum).sum();
    let sumsq: f64 = sums.iter().map(|s| s.sumsq).sum();
    let volume = (2.0 * radius).powi(box_dim as i32);
    let mean = sum / n;
    let var = ((sumsq / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(McEstimate { mean: volume * mean, std_error: volume * (var / n).sqrt(), samples, seed })
}

/// `∫_K f` from `samples` uniform points of `[-R, R]^n`.
pub fn mc_body_measure(body: &StarBody, density: &Density, samples: usize, seed: u64) -> Result<McEstimate> {
    check_dim(body.dim(), density.dim())?;
    let r = bounding_radius(body)?;
    estimate(samples, seed, body.dim(), r, |x| (body.gauge(x) <= 1.0).then(|| density.value(x)))
}

/// `|K|`.
pub fn mc_body_volume(body: &StarBody, samples: usize, seed: u64) -> Result<McEstimate> {
    let r = bounding_radius(body)?;
    estimate(samples, seed, body.dim(), r, |x| (body.gauge(x) <= 1.0).then_some(1.0))
}

/// `∫_{K∩H} f` from uniform points of the `d`-dimensional box `[-R, R]^d` mapped through the frame.
pub fn mc_section_measure(body: &StarBody, density: &Density, h: &Subspace, samples: usize, seed: u64) -> Result<McEstimate> {
    check_dim(body.dim(), density.dim())?;
    check_dim(body.dim(), h.ambient_dim())?;
    let r = bounding_radius(body)?;
    let frame = h.frame();
    let mut x = alloc::vec![0.0; body.dim()];
    estimate(samples, seed, h.sub_dim(), r, |y| {
        x.iter_mut().enumerate().for_each(|(i, v)| *v = (0..y.len()).map(|j| frame[(i, j)] * y[j]).sum());
        (body.gauge(&x) <= 1.0).then(|| density.value(&x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ball_volume;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    #[test]
    fn known_volumes() {
        let one3 = Density::constant(3, 1.0).unwrap();
        let ball = StarBody::euclidean_ball(3).unwrap();
        let e = mc_body_measure(&ball, &one3, 1_000_000, 1).unwrap();
        assert!(e.agrees(4.0 * PI / 3.0, 3.0), "{e:?}");
        let cube = StarBody::cube(4).unwrap();
        let e = mc_body_measure(&cube, &Density::constant(4, 1.0).unwrap(), 200_000, 2).unwrap();
        assert!(e.agrees(16.0, 3.0), "{e:?}");
        let l1 = StarBody::lp_ball(3, 1.0).unwrap();
        assert!(mc_body_volume(&l1, 400_000, 3).unwrap().agrees(4.0 / 3.0, 3.0));
    }

    #[test]
    fn sections() {
        let ball = StarBody::euclidean_ball(4).unwrap();
        let h = crate::grassmann::haar_sample(4, 1, 7).unwrap();
        let e = mc_section_measure(&ball, &Density::constant(4, 1.0).unwrap(), &h, 400_000, 4).unwrap();
        assert!(e.agrees(ball_volume(3).unwrap(), 3.0), "{e:?}");
        let cube = StarBody::cube(3).unwrap();
        let xy = Subspace::coordinate(3, &[0, 1]).unwrap();
        let e = mc_section_measure(&cube, &Density::constant(3, 1.0).unwrap(), &xy, 100_000, 5).unwrap();
        assert!(e.agrees(4.0, 3.0), "{e:?}");
        // Regular hexagon with side √2.
        let diag = Subspace::hyperplane(&[1.0, 1.0, 1.0]).unwrap();
        let e = mc_section_measure(&cube, &Density::constant(3, 1.0).unwrap(), &diag, 400_000, 6).unwrap();
        assert!(e.agrees(3.0 * 3f64.sqrt(), 3.0), "{e:?}");
    }

    #[test]
    fn deterministic() {
        let ball = StarBody::euclidean_ball(3).unwrap();
        let g = Density::radial_gaussian(3, 1.0).unwrap();
        let a = mc_body_measure(&ball, &g, 100_000, 11).unwrap();
        let b = mc_body_measure(&ball, &g, 100_000, 11).unwrap();
        assert_eq!(a, b);
        let c = mc_body_measure(&ball, &g, 100_000, 12).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn unbiased_over_seeds() {
        let ball = StarBody::euclidean_ball(3).unwrap();
        let exact = ball_volume(3).unwrap();
        let inside = (0..100).filter(|&s| mc_body_volume(&ball, 20_000, s).unwrap().agrees(exact, 3.0)).count();
        assert!(inside >= 99, "{inside}");
    }

    #[test]
    fn gaussian_against_quadrature() {
        let ball = StarBody::euclidean_ball(3).unwrap();
        let g = Density::radial_gaussian(3, 1.0).unwrap();
        let q = crate::sections::body_measure(&ball, &g, &crate::quadrature::QuadratureSpec::default()).unwrap();
        let e = mc_body_measure(&ball, &g, 1_000_000, 13).unwrap();
        assert!(e.agrees(q.value, 3.0), "{e:?} vs {}", q.value);
        assert_relative_eq!(e.mean, q.value, max_relative = 1e-2);
    }

    #[test]
    fn rejects_bad_input() {
        let ball = StarBody::euclidean_ball(3).unwrap();
        assert!(mc_body_measure(&ball, &Density::constant(2, 1.0).unwrap(), 100, 1).is_err());
        assert!(mc_body_volume(&ball, 1, 1).is_err());
    }
}
