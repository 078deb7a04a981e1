//! Length functions `ℓ_i(γ) = log|λ_i(γ)|` on curve classes, their identities,
//! eigenline structure along closed orbits, and length-spectrum tables.

mod eigen;
pub mod exterior;
mod orbit;
mod table;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rep::SurfaceRep;
use crate::word::{ConjugacyClass, Word};

pub(crate) use eigen::min_gap as eigen_min_gap;
pub use eigen::{
    eigen_sorted, eigen_sorted_with, word_eigen, word_log_spectrum, EigenData, SpectralTol,
};
pub use orbit::{eigenline_flip_check, orbit_integral, FibreMetric, OrbitIntegral};
pub use table::{spectrum, spectrum_csv, SpectrumConfig, SpectrumEntry};

/// `(ℓ_1, …, ℓ_n)`, strictly decreasing. Index 0 holds `ℓ_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthVector(Vec<f64>);

impl LengthVector {
    pub fn new(values: Vec<f64>) -> Self {
        LengthVector(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `ℓ_i ↦ −ℓ_{n+1−i}`: the lengths of the inverse curve.
    pub fn flipped(&self) -> LengthVector {
        LengthVector(self.0.iter().rev().map(|x| -x).collect())
    }
}

impl std::ops::Index<usize> for LengthVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub fn length_vector(rep: &SurfaceRep, w: &Word) -> Result<LengthVector> {
    length_vector_with(rep, w, &SpectralTol::default())
}

pub fn length_vector_with(rep: &SurfaceRep, w: &Word, tol: &SpectralTol) -> Result<LengthVector> {
    let reduced = w.cyclically_reduce();
    let (logs, _) = word_log_spectrum(rep, &reduced, tol)?;
    Ok(LengthVector(logs))
}

/// `½·log|λ_1|` for a 2-dimensional representation, exactly as stated in the
/// classical definition this mirrors. Note that with `tr = 2cosh(L/2)` the
/// hyperbolic translation length is `L = 2·log|λ_1|`, four times this value.
pub fn thurston_length(rep2: &SurfaceRep, w: &Word) -> Result<f64> {
    if rep2.n() != 2 {
        return Err(Error::InvalidArgument(format!(
            "thurston length needs n = 2, got n = {}",
            rep2.n()
        )));
    }
    Ok(0.5 * length_vector(rep2, w)?[0])
}

/// Per-class residuals of the sum rule and the inverse flip rule.
#[derive(Clone, Debug)]
pub struct ClassIdentity {
    pub class: ConjugacyClass,
    /// `|Σ_i ℓ_i(w)|`
    pub sum_residual: f64,
    /// `max_i |ℓ_i(w⁻¹) + ℓ_{n+1−i}(w)|`
    pub flip_residual: f64,
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub n: usize,
    pub classes: Vec<ClassIdentity>,
    /// Classes whose spectrum could not be computed, with the reason.
    pub failures: Vec<(ConjugacyClass, String)>,
    pub max_sum_residual: f64,
    pub max_flip_residual: f64,
    pub tolerance: f64,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.max_sum_residual <= self.tolerance
            && self.max_flip_residual <= self.tolerance
    }
}

/// Check `Σ ℓ_i = 0` and `ℓ_i(w⁻¹) = −ℓ_{n+1−i}(w)` on every class. The
/// tolerance is `1e−8·n` for both.
pub fn identity_report(rep: &SurfaceRep, classes: &[ConjugacyClass]) -> IdentityReport {
    identity_report_with(rep, classes, &SpectralTol::default(), 1e-8)
}

pub fn identity_report_with(
    rep: &SurfaceRep,
    classes: &[ConjugacyClass],
    tol: &SpectralTol,
    per_dim_tol: f64,
) -> IdentityReport {
    let results: Vec<std::result::Result<ClassIdentity, (ConjugacyClass, String)>> = classes
        .par_iter()
        .map(|c| {
            let w = c.representative();
            let forward = length_vector_with(rep, w, tol);
            let backward = length_vector_with(rep, &w.inverse(), tol);
            match (forward, backward) {
                (Ok(f), Ok(b)) => {
                    let flip = b
                        .values()
                        .iter()
                        .zip(f.flipped().values())
                        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
                    Ok(ClassIdentity {
                        class: c.clone(),
                        sum_residual: f.sum().abs(),
                        flip_residual: flip,
                    })
                }
                (Err(e), _) | (_, Err(e)) => Err((c.clone(), e.to_string())),
            }
        })
        .collect();
    let mut report = IdentityReport {
        n: rep.n(),
        classes: Vec::new(),
        failures: Vec::new(),
        max_sum_residual: 0.0,
        max_flip_residual: 0.0,
        tolerance: per_dim_tol * rep.n() as f64,
    };
    for r in results {
        match r {
            Ok(ci) => {
                report.max_sum_residual = report.max_sum_residual.max(ci.sum_residual);
                report.max_flip_residual = report.max_flip_residual.max(ci.flip_residual);
                report.classes.push(ci);
            }
            Err(f) => report.failures.push(f),
        }
    }
    report
}
