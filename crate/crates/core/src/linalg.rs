//! Small dense-vector helpers shared across modules.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn random_gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Uniform point on `S^(n-1)`.
pub fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut v = random_gaussian(n, rng);
        let r = norm(&v);
        if r > 1e-12 {
            v.iter_mut().for_each(|x| *x /= r);
            return v;
        }
    }
}

/// Removes the components of `v` along each (orthonormal) vector in `basis`, twice for stability.
pub fn project_out<'a>(v: &mut [f64], basis: impl Iterator<Item = &'a [f64]> + Clone) {
    for _ in 0..2 {
        for b in basis.clone() {
            let c = dot(v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// Pairwise summation in a fixed order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}
