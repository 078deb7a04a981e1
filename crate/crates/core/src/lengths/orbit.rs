//! Closed-orbit shadows of the eigenline bundle and of the 1-forms `ω_i`.
//!
//! Along the closed orbit of `w = x_1 ⋯ x_k` the flat bundle is transported
//! one letter at a time by `ρ(x_j)⁻¹`. After `j` letters the `i`-th eigenline
//! of `ρ(w)` has become the `i`-th eigenline of the rotation
//! `x_{j+1} ⋯ x_k x_1 ⋯ x_j`. The discrete form assigns to each letter the
//! increment `−(log‖after‖ − log‖before‖)` in a chosen fibre metric; the sum
//! around the loop is `log|λ_i(w)|` for every metric.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::{word_eigen_seeded, SpectralTol};
use crate::error::{Error, Result};
use crate::rep::SurfaceRep;
use crate::word::Word;

/// Inner product on the fibre `R^n`, given by its Gram matrix.
#[derive(Clone, Debug)]
pub struct FibreMetric {
    gram: DMatrix<f64>,
}

impl FibreMetric {
    pub fn new(gram: DMatrix<f64>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::InvalidArgument("gram matrix must be square".into()));
        }
        let asym = (&gram - gram.transpose()).amax();
        if asym > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "gram matrix not symmetric (defect {asym:e})"
            )));
        }
        let min_eig = gram.clone().symmetric_eigen().eigenvalues.min();
        if !(min_eig > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "gram matrix not positive definite (smallest eigenvalue {min_eig:e})"
            )));
        }
        Ok(FibreMetric { gram })
    }

    pub fn euclidean(n: usize) -> Self {
        FibreMetric {
            gram: DMatrix::identity(n, n),
        }
    }

    /// `AᵀA + I/4` with `A` seeded uniform in `[−1, 1]`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let gram = a.transpose() * &a + DMatrix::identity(n, n) * 0.25;
        let gram = (&gram + gram.transpose()) * 0.5;
        FibreMetric { gram }
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn norm(&self, v: &DVector<f64>) -> f64 {
        (v.transpose() * &self.gram * v)[(0, 0)].sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct OrbitIntegral {
    /// One increment per letter, in word order.
    pub increments: Vec<f64>,
    pub total: f64,
}

/// Discrete integral of `ω_i` (0-based `i`) around the closed orbit of `w`.
pub fn orbit_integral(
    rep: &SurfaceRep,
    w: &Word,
    i: usize,
    metric: &FibreMetric,
) -> Result<OrbitIntegral> {
    let tol = SpectralTol::default();
    let n = rep.n();
    if i >= n {
        return Err(Error::InvalidArgument(format!("index {i} out of range for n = {n}")));
    }
    if metric.gram.nrows() != n {
        return Err(Error::InvalidArgument("metric dimension mismatch".into()));
    }
    if w.is_empty() {
        return Err(Error::IdentityWord);
    }
    if !w.is_cyclically_reduced() {
        return Err(Error::InvalidArgument(format!("`{w}` is not cyclically reduced")));
    }
    let letters = w.letters();
    let mut increments = Vec::with_capacity(letters.len());
    for (j, &letter) in letters.iter().enumerate() {
        // eigenline at the base point reached after j letters
        let line = &word_eigen_seeded(rep, &w.rotate(j), &tol, 0)?.eigenlines[i];
        let moved = rep.letter_matrix(letter.inv()) * line;
        increments.push(-(metric.norm(&moved).ln() - metric.norm(line).ln()));
    }
    let total = increments.iter().sum();
    Ok(OrbitIntegral { increments, total })
}

/// Whether the `i`-th eigenline of `ρ(w⁻¹)` equals the `(n+1−i)`-th eigenline
/// of `ρ(w)` for all `i`, as unit vectors up to sign (`|⟨u,v⟩| ≥ 1 − 1e−8`).
///
/// The two spectra are computed from independently seeded iterations.
pub fn eigenline_flip_check(rep: &SurfaceRep, w: &Word) -> Result<bool> {
    let tol = SpectralTol::default();
    let forward = word_eigen_seeded(rep, w, &tol, 0)?;
    let backward = word_eigen_seeded(rep, &w.inverse(), &tol, 7)?;
    let n = rep.n();
    Ok((0..n).all(|i| {
        backward.eigenlines[i]
            .dot(&forward.eigenlines[n - 1 - i])
            .abs()
            >= 1.0 - 1e-8
    }))
}
