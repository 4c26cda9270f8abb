use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::{invalid, Error, Result};
use crate::linalg;

/// Orthonormality tolerance for frames, entrywise on `FᵀF - I`.
pub const FRAME_TOL: f64 = 1e-10;

/// A linear subspace `H ⊂ R^n` of dimension `d`, held as an `n × d` orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    frame: DMatrix<f64>,
}

impl Subspace {
    /// Wraps a frame after checking orthonormality.
    pub fn from_frame(frame: DMatrix<f64>) -> Result<Self> {
        if frame.ncols() == 0 || frame.ncols() > frame.nrows() {
            return Err(invalid("frame must have 1..=n columns"));
        }
        let dev = gram_deviation(&frame);
        if dev > FRAME_TOL {
            return Err(Error::NonOrthonormalFrame(dev));
        }
        Ok(Self { frame })
    }

    /// Frame from column vectors.
    pub fn from_columns(ambient: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let mut flat = Vec::with_capacity(ambient * columns.len());
        for c in columns {
            crate::error::check_dim(ambient, c.len())?;
            flat.extend_from_slice(c);
        }
        Self::from_frame(DMatrix::from_column_slice(ambient, columns.len(), &flat))
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(ambient: usize, axes: &[usize]) -> Result<Self> {
        let mut frame = DMatrix::zeros(ambient, axes.len());
        for (j, &i) in axes.iter().enumerate() {
            if i >= ambient {
                return Err(invalid("axis index out of range"));
            }
            frame[(i, j)] = 1.0;
        }
        Self::from_frame(frame)
    }

    /// The hyperplane `ξ^⊥` for a nonzero normal `ξ`.
    pub fn hyperplane(normal: &[f64]) -> Result<Self> {
        let n = normal.len();
        let r = linalg::norm(normal);
        if n < 2 || !(r > 0.0) {
            return Err(invalid("hyperplane needs a nonzero normal in dimension >= 2"));
        }
        let unit: Vec<f64> = normal.iter().map(|v| v / r).collect();
        let mut basis: Vec<Vec<f64>> = alloc::vec![unit];
        complete_basis(n, &mut basis);
        Self::from_columns(n, &basis[1..])
    }

    pub(crate) fn from_frame_unchecked(frame: DMatrix<f64>) -> Self {
        Self { frame }
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn sub_dim(&self) -> usize {
        self.frame.ncols()
    }

    /// Codimension `k = n - d`.
    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.sub_dim()
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn column(&self, j: usize) -> &[f64] {
        let n = self.ambient_dim();
        &self.frame.as_slice()[j * n..(j + 1) * n]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> + Clone {
        self.frame.as_slice().chunks(self.ambient_dim())
    }

    /// Orthogonal projector `FFᵀ`; equal projectors mean equal subspaces.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.frame * self.frame.transpose()
    }

    /// Max entrywise `|FᵀF - I|`.
    pub fn orthonormality_deviation(&self) -> f64 {
        gram_deviation(&self.frame)
    }

    /// Rotates one frame column towards a random direction orthogonal to the whole frame, by a
    /// Gaussian angle of scale `step`. The result is orthonormal again up to rounding.
    pub fn givens_perturb<R: Rng + ?Sized>(&self, rng: &mut R, step: f64) -> Subspace {
        let n = self.ambient_dim();
        let d = self.sub_dim();
        let j = rng.random_range(0..d);
        let dir = loop {
            let mut g = linalg::random_gaussian(n, rng);
            linalg::project_out(&mut g, self.columns());
            let r = linalg::norm(&g);
            if r > 1e-8 {
                g.iter_mut().for_each(|v| *v /= r);
                break g;
            }
        };
        let angle = step * rng.sample::<f64, _>(rand_distr::StandardNormal);
        let (s, c) = angle.sin_cos();
        let mut frame = self.frame.clone();
        {
            let col = &mut frame.as_mut_slice()[j * n..(j + 1) * n];
            col.iter_mut().zip(&dir).for_each(|(x, u)| *x = c * *x + s * u);
        }
        reorthonormalize(&mut frame);
        Subspace { frame }
    }
}

fn gram_deviation(frame: &DMatrix<f64>) -> f64 {
    let gram = frame.transpose() * frame;
    let mut dev = 0.0_f64;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((gram[(i, j)] - target).abs());
        }
    }
    dev
}

/// Modified Gram–Schmidt, in place, column by column.
pub(crate) fn reorthonormalize(frame: &mut DMatrix<f64>) {
    let n = frame.nrows();
    let d = frame.ncols();
    let data = frame.as_mut_slice();
    for j in 0..d {
        let (done, rest) = data.split_at_mut(j * n);
        let col = &mut rest[..n];
        linalg::project_out(col, done.chunks(n));
        let r = linalg::norm(col);
        col.iter_mut().for_each(|v| *v /= r);
    }
}

/// Extends an orthonormal list to a basis of `R^n`, adding the standard basis vector with the
/// largest residual at each step.
pub(crate) fn complete_basis(n: usize, basis: &mut Vec<Vec<f64>>) {
    while basis.len() < n {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for i in 0..n {
            let mut e = alloc::vec![0.0; n];
            e[i] = 1.0;
            linalg::project_out(&mut e, basis.iter().map(Vec::as_slice));
            let r = linalg::norm(&e);
            if best.as_ref().map_or(true, |(b, _)| r > *b) {
                best = Some((r, e));
            }
        }
        let (r, mut e) = best.unwrap();
        e.iter_mut().for_each(|v| *v /= r);
        basis.push(e);
    }
}

/// Haar-distributed element of `Gr_{n-k}` from a seeded generator.
pub fn haar_sample(n: usize, k: usize, seed: u64) -> Result<Subspace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_sample_with(n, k, &mut rng)
}

/// QR (positive diagonal) of an `n × (n-k)` standard Gaussian matrix.
pub fn haar_sample_with<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Subspace> {
    if k == 0 || k >= n {
        return Err(invalid("haar_sample needs 1 <= k <= n-1"));
    }
    let d = n - k;
    let g = DMatrix::from_vec(n, d, linalg::random_gaussian(n * d, rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    reorthonormalize(&mut q);
    Ok(Subspace::from_frame_unchecked(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn haar_frames_are_orthonormal() {
        let s = haar_sample(4, 2, 7).unwrap();
        assert_eq!(s.sub_dim(), 2);
        assert!(s.orthonormality_deviation() < 1e-12);
        assert!(haar_sample(3, 0, 1).is_err());
        assert!(haar_sample(3, 3, 1).is_err());
    }

    #[test]
    fn haar_is_deterministic() {
        assert_eq!(haar_sample(2, 1, 99).unwrap(), haar_sample(2, 1, 99).unwrap());
        assert_ne!(haar_sample(2, 1, 99).unwrap(), haar_sample(2, 1, 100).unwrap());
    }

    #[test]
    fn line_second_moment_is_one_third() {
        // E⟨u, e1⟩² = 1/n for uniform u; var of ⟨u,e1⟩² is 2(n-1)/(n²(n+2)).
        let samples = 10_000;
        let mean = (0..samples)
            .map(|s| haar_sample(3, 2, s as u64).unwrap().column(0)[0].powi(2))
            .sum::<f64>()
            / samples as f64;
        let sigma = (2.0 * 2.0 / (9.0 * 5.0) / samples as f64).sqrt();
        assert!((mean - 1.0 / 3.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn hyperplane_is_orthogonal_to_normal() {
        let h = Subspace::hyperplane(&[1.0, 2.0, -0.5, 0.3]).unwrap();
        assert_eq!(h.sub_dim(), 3);
        for c in h.columns() {
            assert!(linalg::dot(c, &[1.0, 2.0, -0.5, 0.3]).abs() < 1e-14);
        }
        assert!(h.orthonormality_deviation() < 1e-14);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let f = DMatrix::from_column_slice(3, 1, &[1.0, 1.0, 0.0]);
        assert!(matches!(Subspace::from_frame(f), Err(Error::NonOrthonormalFrame(_))));
    }

    #[test]
    fn perturbation_stays_on_grassmannian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s = haar_sample(6, 2, 1).unwrap();
        for _ in 0..500 {
            s = s.givens_perturb(&mut rng, 0.3);
        }
        assert!(s.orthonormality_deviation() < 1e-12);
        let p = s.projector();
        assert_relative_eq!(p.trace(), 4.0, epsilon = 1e-12);
    }
}
