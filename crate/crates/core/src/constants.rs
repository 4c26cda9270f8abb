//! Ball volumes, sphere measures and the slicing constants.
//!
//! `c_nk(n, k) = |B_2^n|^((n-k)/n) / |B_2^(n-k)|` and
//! `d_n(n) = |B_2^(2n)|^((n-1)/n) / |B_2^(2n-2)|`.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function (Lanczos, g = 7), with reflection below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Volume of the unit Euclidean ball in `R^n`.
pub fn ball_volume(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("ball_volume needs n >= 1"));
    }
    let h = n as f64 / 2.0;
    Ok(PI.powf(h) / gamma(h + 1.0))
}

/// Surface measure `|S^(m-1)|` of the unit sphere in `R^m` (`m = 1` gives the two-point sphere, measure 2).
pub fn sphere_measure(m: usize) -> Result<f64> {
    if m == 0 {
        return Err(invalid("sphere_measure needs m >= 1"));
    }
    let h = m as f64 / 2.0;
    Ok(2.0 * PI.powf(h) / gamma(h))
}

pub fn c_nk(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(invalid("c_nk needs 1 <= k <= n-1"));
    }
    let nf = n as f64;
    Ok(ball_volume(n)?.powf((n - k) as f64 / nf) / ball_volume(n - k)?)
}

/// The hyperplane constant `c_n = c_{n,1}`.
pub fn c_n(n: usize) -> Result<f64> {
    c_nk(n, 1)
}

/// Complex hyperplane constant for complex dimension `n >= 2`.
pub fn d_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(invalid("d_n needs complex dimension n >= 2"));
    }
    let nf = n as f64;
    Ok(ball_volume(2 * n)?.powf((nf - 1.0) / nf) / ball_volume(2 * n - 2)?)
}

/// Which inequality a set of constants is attached to; selects the extra factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// `n/(n-k) * c_{n,k}` (stability and the intersection-body inequality).
    Intersection,
    /// `n^{k/2} * n/(n-k) * c_{n,k}` (slicing for arbitrary symmetric convex bodies).
    Slicing,
    /// `n/(n-1) * d_n` in complex dimension n.
    ComplexIntersection,
    /// `2n * n/(n-1) * d_n`.
    ComplexSlicing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicingConstants {
    /// Real ambient dimension for real theorems; complex dimension for complex ones.
    pub n: usize,
    pub k: usize,
    pub ball_vol_n: f64,
    pub sphere_vol_n: f64,
    /// `c_{n,k}` for the real theorems, `d_n` for the complex ones.
    pub c_nk: f64,
    pub factor: f64,
}

impl SlicingConstants {
    pub fn new(n: usize, k: usize, which: Factor) -> Result<Self> {
        let nf = n as f64;
        match which {
            Factor::Intersection | Factor::Slicing => {
                let c = c_nk(n, k)?;
                let kf = k as f64;
                let mut factor = nf / (nf - kf) * c;
                if which == Factor::Slicing {
                    factor *= nf.powf(kf / 2.0);
                }
                Ok(Self {
                    n,
                    k,
                    ball_vol_n: ball_volume(n)?,
                    sphere_vol_n: sphere_measure(n)?,
                    c_nk: c,
                    factor,
                })
            }
            Factor::ComplexIntersection | Factor::ComplexSlicing => {
                let d = d_n(n)?;
                let mut factor = nf / (nf - 1.0) * d;
                if which == Factor::ComplexSlicing {
                    factor *= 2.0 * nf;
                }
                Ok(Self {
                    n,
                    k: 1,
                    ball_vol_n: ball_volume(2 * n)?,
                    sphere_vol_n: sphere_measure(2 * n)?,
                    c_nk: d,
                    factor,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // |B^n| from the two-step recursion |B^n| = 2π/n |B^(n-2)|, independent of Gamma.
    fn ball_by_recursion(n: usize) -> f64 {
        match n {
            0 => 1.0,
            1 => 2.0,
            _ => 2.0 * PI / n as f64 * ball_by_recursion(n - 2),
        }
    }

    #[test]
    fn small_balls() {
        assert_relative_eq!(ball_volume(1).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(ball_volume(2).unwrap(), PI, max_relative = 1e-14);
        assert_relative_eq!(ball_volume(3).unwrap(), 4.0 * PI / 3.0, max_relative = 1e-14);
        assert!(ball_volume(0).is_err());
    }

    #[test]
    fn lanczos_matches_recursion() {
        for n in 1..=60 {
            assert_relative_eq!(ball_volume(n).unwrap(), ball_by_recursion(n), max_relative = 1e-13);
        }
    }

    #[test]
    fn gamma_at_integers_and_halves() {
        let mut fact = 1.0;
        for k in 1..20 {
            assert_relative_eq!(gamma(k as f64), fact, max_relative = 1e-13);
            fact *= k as f64;
        }
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn sphere_is_n_times_ball() {
        for n in 1..=60 {
            let s = sphere_measure(n).unwrap();
            assert_relative_eq!(s, n as f64 * ball_volume(n).unwrap(), max_relative = 1e-12);
        }
        assert_relative_eq!(sphere_measure(1).unwrap(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn c_nk_examples() {
        assert_relative_eq!(c_nk(2, 1).unwrap(), PI.sqrt() / 2.0, max_relative = 1e-14);
        assert_relative_eq!(c_nk(2, 1).unwrap(), 0.886_226_925_452_758, max_relative = 1e-12);
        for n in 2..=30 {
            let expect = ball_volume(n).unwrap().powf(1.0 / n as f64) / 2.0;
            assert_relative_eq!(c_nk(n, n - 1).unwrap(), expect, max_relative = 1e-13);
        }
        assert!(c_nk(5, 0).is_err());
        assert!(c_nk(5, 5).is_err());
    }

    #[test]
    fn constants_below_one() {
        for n in 2..=60 {
            for k in 1..n {
                let c = c_nk(n, k).unwrap();
                assert!(c > 0.0 && c < 1.0, "c_{{{n},{k}}} = {c}");
            }
            let d = d_n(n).unwrap();
            assert!(d > 0.0 && d < 1.0);
            assert_relative_eq!(d, c_nk(2 * n, 2).unwrap(), max_relative = 1e-14);
        }
        assert!(d_n(1).is_err());
    }

    #[test]
    fn d2_is_inverse_sqrt2() {
        assert_relative_eq!(d_n(2).unwrap(), core::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-13);
    }

    #[test]
    fn factors() {
        let c = SlicingConstants::new(4, 1, Factor::Slicing).unwrap();
        assert_relative_eq!(c.factor, 2.0 * 4.0 / 3.0 * c_nk(4, 1).unwrap(), max_relative = 1e-14);
        let z = SlicingConstants::new(3, 1, Factor::ComplexSlicing).unwrap();
        assert_relative_eq!(z.factor, 6.0 * 1.5 * d_n(3).unwrap(), max_relative = 1e-14);
        assert_relative_eq!(z.sphere_vol_n, 6.0 * z.ball_vol_n, max_relative = 1e-12);
    }
}
