//! Equal-weight randomized quasi-Monte Carlo points on spheres.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

/// Inverse of the standard normal CDF (Acklam's rational approximation, one Halley step).
pub fn inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const LOW: f64 = 0.024_25;
    let x = if p < LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let e = 0.5 * libm::erfc(-x / core::f64::consts::SQRT_2) - p;
    let u = e * (2.0 * core::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

// Generalized golden ratio: the positive root of x^(m+1) = x + 1.
fn harmonious(m: usize) -> f64 {
    let mut x = 2.0_f64;
    for _ in 0..64 {
        x = (1.0 + x).powf(1.0 / (m as f64 + 1.0));
    }
    x
}

/// `2 * half` antipodally paired points on `S^(m-1)`: a randomly shifted Kronecker sequence in the
/// unit cube pushed through the Gaussian quantile and normalized. Returned flat, point-major.
pub fn kronecker_sphere_points(m: usize, half: usize, shift: &[f64]) -> Vec<f64> {
    let phi = harmonious(m);
    let alpha: Vec<f64> = (1..=m).map(|i| (1.0 / phi.powi(i as i32)).fract()).collect();
    let mut out = alloc::vec![0.0; 2 * half * m];
    let mut g = alloc::vec![0.0; m];
    for j in 0..half {
        let mut r2 = 0.0;
        for i in 0..m {
            let u = (shift[i] + (j as f64 + 1.0) * alpha[i]).fract().clamp(1e-15, 1.0 - 1e-15);
            g[i] = inverse_normal_cdf(u);
            r2 += g[i] * g[i];
        }
        if r2 == 0.0 {
            // Every coordinate at the median; any fixed direction will do.
            g[0] = 1.0;
            r2 = 1.0;
        }
        let r = r2.sqrt();
        for i in 0..m {
            out[j * m + i] = g[i] / r;
            out[(half + j) * m + i] = -g[i] / r;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quantile_inverts_cdf() {
        for &p in &[1e-10, 0.001, 0.02, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-9] {
            let x = inverse_normal_cdf(p);
            let back = 0.5 * libm::erfc(-x / core::f64::consts::SQRT_2);
            assert_relative_eq!(back, p, max_relative = 1e-12);
        }
        assert_eq!(inverse_normal_cdf(0.5), 0.0);
    }

    #[test]
    fn points_are_unit_and_paired() {
        let pts = kronecker_sphere_points(5, 100, &[0.1, 0.2, 0.3, 0.4, 0.5]);
        for p in pts.chunks(5) {
            assert_relative_eq!(crate::linalg::norm(p), 1.0, epsilon = 1e-14);
        }
        for i in 0..5 {
            assert_eq!(pts[i], -pts[500 + i]);
        }
    }
}
