//! Sorted real spectra.
//!
//! Two routes are provided. [`eigen_sorted`] decomposes a single (scaled)
//! matrix densely; it is exact up to rounding but only resolves eigenvalues
//! within ~1e16 of the largest one. [`word_eigen`] never forms the product:
//! it runs orthogonal iteration across the letters of the word (a periodic
//! QR / Schur iteration) and reads log-magnitudes off the accumulated
//! triangular diagonals, so every eigenvalue is resolved however wide the
//! spectrum is. Eigenlines come from intersecting the top-`i` flag of `ρ(w)`
//! with the top-`(n−i+1)` flag of `ρ(w⁻¹)`.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rep::{evaluate, SurfaceRep};
use crate::scaled::ScaledMatrix;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralTol {
    /// Minimum gap between consecutive sorted log-magnitudes.
    pub gap: f64,
    /// Largest admissible imaginary part, relative to the spectral radius.
    pub imag: f64,
    /// Period cap for the periodic QR iteration.
    pub max_periods: usize,
    /// Relative change of the per-period log-diagonals that counts as converged.
    pub converge: f64,
}

impl Default for SpectralTol {
    fn default() -> Self {
        SpectralTol {
            gap: 1e-7,
            imag: 1e-7,
            max_periods: 400,
            converge: 1e-13,
        }
    }
}

/// Eigen data sorted by decreasing modulus.
#[derive(Clone, Debug)]
pub struct EigenData {
    pub log_magnitudes: Vec<f64>,
    pub signs: Vec<i8>,
    /// Unit vectors, defined up to sign.
    pub eigenlines: Vec<DVector<f64>>,
}

impl EigenData {
    pub fn n(&self) -> usize {
        self.log_magnitudes.len()
    }

    pub fn min_gap(&self) -> f64 {
        min_gap(&self.log_magnitudes)
    }
}

pub(crate) fn min_gap(sorted: &[f64]) -> f64 {
    sorted
        .windows(2)
        .map(|p| p[0] - p[1])
        .fold(f64::INFINITY, f64::min)
}

fn check_gaps(sorted: &[f64], tol: &SpectralTol) -> Result<()> {
    let gap = min_gap(sorted);
    if gap <= tol.gap || gap.is_nan() {
        return Err(Error::DegenerateGap { gap });
    }
    Ok(())
}

fn sign_of(x: f64) -> i8 {
    if x < 0.0 {
        -1
    } else {
        1
    }
}

/// Right singular vector for the smallest singular value.
fn null_vector(m: DMatrix<f64>) -> DVector<f64> {
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap_or(0);
    let v = v_t.row(k).transpose();
    canonical_sign(v.normalize())
}

/// Largest-|entry| component made positive, for reproducible output.
fn canonical_sign(v: DVector<f64>) -> DVector<f64> {
    let k = v.iamax();
    if v[k] < 0.0 {
        -v
    } else {
        v
    }
}

/// Dense eigen-decomposition of `exp(log_scale) · matrix`, sorted by
/// decreasing modulus. Imaginary parts beyond the tolerance and gaps below
/// it are errors.
pub fn eigen_sorted(m: &ScaledMatrix) -> Result<EigenData> {
    eigen_sorted_with(m, &SpectralTol::default())
}

pub fn eigen_sorted_with(m: &ScaledMatrix, tol: &SpectralTol) -> Result<EigenData> {
    let mat = m.matrix();
    let n = mat.nrows();
    let eig = Schur::try_new(mat.clone(), f64::EPSILON, 10_000)
        .ok_or(Error::DegenerateGap { gap: 0.0 })?
        .complex_eigenvalues();
    let radius = eig.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let imag = eig.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs())) / radius;
    if imag > tol.imag {
        return Err(Error::ComplexSpectrum { imag });
    }
    let mut values: Vec<f64> = eig.iter().map(|z| z.re).collect();
    values.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let log_magnitudes: Vec<f64> = values.iter().map(|v| v.abs().ln() + m.log_scale()).collect();
    check_gaps(&log_magnitudes, tol)?;
    let eigenlines = values
        .iter()
        .map(|&lambda| null_vector(mat - DMatrix::<f64>::identity(n, n) * lambda))
        .collect();
    Ok(EigenData {
        log_magnitudes,
        signs: values.iter().map(|&v| sign_of(v)).collect(),
        eigenlines,
    })
}

/// Result of the periodic QR iteration on `L_1 ⋯ L_k`.
#[derive(Clone, Debug)]
pub(crate) struct PeriodicSchur {
    pub log_diag: Vec<f64>,
    pub signs: Vec<i8>,
    /// Orthonormal frame whose leading columns span the dominant flag.
    pub frame: DMatrix<f64>,
}

/// A fixed, generic orthonormal starting frame.
pub(crate) fn start_frame(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ seed ^ ((n as u64) << 32));
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    m.qr().q()
}

/// Frame movement per period counted as converged, and the largest one from
/// which a stall is accepted as rounding noise.
const FRAME_TIGHT: f64 = 1e-13;
const FRAME_LOOSE: f64 = 1e-8;

pub(crate) fn periodic_schur(
    mats: &[&DMatrix<f64>],
    tol: &SpectralTol,
    seed: u64,
) -> Option<PeriodicSchur> {
    let n = mats.first()?.nrows();
    let mut q = start_frame(n, seed);
    let mut previous: Option<(Vec<f64>, f64, f64)> = None;
    for _ in 0..tol.max_periods {
        let q_start = q.clone();
        let mut log_diag = vec![0.0; n];
        let mut sign_acc = vec![1i8; n];
        for m in mats.iter().rev() {
            let (q_next, r) = (*m * &q).qr().unpack();
            for i in 0..n {
                let d = r[(i, i)];
                log_diag[i] += d.abs().ln();
                sign_acc[i] *= sign_of(d);
            }
            q = q_next;
        }
        // column-wise distance up to sign; eigenlines need the frame itself
        // converged, not just the diagonals
        let frame_change = (0..n)
            .map(|i| {
                let (a, b) = (q.column(i), q_start.column(i));
                (a - b).norm().min((a + b).norm())
            })
            .fold(0.0f64, f64::max);
        let mut change = f64::INFINITY;
        if let Some((prev, prev_frame, prev_change)) = &previous {
            let scale = 1.0 + log_diag.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            change = log_diag
                .iter()
                .zip(prev)
                .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            // Ill-conditioned letters leave rounding noise in the small
            // diagonals and in the frame; once both stop shrinking from an
            // already close frame, that is the noise floor.
            let settled = change <= tol.converge * scale && frame_change <= FRAME_TIGHT;
            let stalled = *prev_frame <= FRAME_LOOSE
                && change > 0.25 * prev_change
                && frame_change > 0.25 * prev_frame;
            if frame_change <= FRAME_LOOSE && (settled || stalled) {
                let signs = (0..n)
                    .map(|i| sign_acc[i] * sign_of(q.column(i).dot(&q_start.column(i))))
                    .collect();
                return Some(PeriodicSchur {
                    log_diag,
                    signs,
                    frame: q,
                });
            }
        }
        previous = Some((log_diag, frame_change, change));
    }
    None
}

fn letter_mats<'a>(rep: &'a SurfaceRep, w: &Word) -> Vec<&'a DMatrix<f64>> {
    w.letters().iter().map(|&l| rep.letter_matrix(l)).collect()
}

/// Explain why the periodic iteration failed, using the dense route.
fn classify_failure(rep: &SurfaceRep, w: &Word, tol: &SpectralTol) -> Error {
    match evaluate(rep, w).and_then(|m| eigen_sorted_with(&m, tol)) {
        Err(e @ Error::ComplexSpectrum { .. }) => e,
        Err(e @ Error::DegenerateGap { .. }) => e,
        Ok(data) => Error::DegenerateGap { gap: data.min_gap() },
        Err(e) => e,
    }
}

fn run(rep: &SurfaceRep, w: &Word, tol: &SpectralTol, seed: u64) -> Result<PeriodicSchur> {
    if w.is_empty() {
        return Err(Error::IdentityWord);
    }
    let mats = letter_mats(rep, w);
    let schur = periodic_schur(&mats, tol, seed).ok_or_else(|| classify_failure(rep, w, tol))?;
    check_gaps(&schur.log_diag, tol)?;
    Ok(schur)
}

/// Sorted log-magnitudes and signs of the eigenvalues of `ρ(w)`.
pub fn word_log_spectrum(
    rep: &SurfaceRep,
    w: &Word,
    tol: &SpectralTol,
) -> Result<(Vec<f64>, Vec<i8>)> {
    let s = run(rep, w, tol, 0)?;
    Ok((s.log_diag, s.signs))
}

/// Full eigen data of `ρ(w)` via the periodic route.
pub fn word_eigen(rep: &SurfaceRep, w: &Word, tol: &SpectralTol) -> Result<EigenData> {
    word_eigen_seeded(rep, w, tol, 0)
}

pub(crate) fn word_eigen_seeded(
    rep: &SurfaceRep,
    w: &Word,
    tol: &SpectralTol,
    seed: u64,
) -> Result<EigenData> {
    let forward = run(rep, w, tol, seed)?;
    let backward = run(rep, &w.inverse(), tol, seed.wrapping_add(1))?;
    let n = rep.n();
    let eigenlines = (0..n)
        .map(|i| flag_intersection(&forward.frame, i + 1, &backward.frame, n - i))
        .collect();
    Ok(EigenData {
        log_magnitudes: forward.log_diag,
        signs: forward.signs,
        eigenlines,
    })
}

/// Unit vector spanning `span(a[:, ..ka]) ∩ span(b[:, ..kb])` when
/// `ka + kb = n + 1` and the flags are transverse.
fn flag_intersection(a: &DMatrix<f64>, ka: usize, b: &DMatrix<f64>, kb: usize) -> DVector<f64> {
    let u = a.columns(0, ka);
    let v = b.columns(0, kb);
    // top eigenvector of the Gram matrix of the projection; nalgebra's thin
    // SVD of the wide cross matrix is only accurate to ~1e-6 here
    let cross = v.transpose() * u;
    let gram = cross.transpose() * &cross;
    let eig = SymmetricEigen::new(gram);
    let k = eig.eigenvalues.imax();
    let coeffs = eig.eigenvectors.column(k).into_owned();
    canonical_sign((u * coeffs).normalize())
}
