use nalgebra::DMatrix;

use super::{evaluate, residual_to_pm_identity, SurfaceRep};
use crate::error::Error;
use crate::lengths::{word_log_spectrum, SpectralTol};
use crate::word::{conjugacy_class, walk_reduced_words, ConjugacyClass, Word};

/// Outcome of sampling a representation for Hitchin-like behaviour.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub relator_residual: f64,
    /// No sampled nontrivial word evaluates within `1e−6` of `±Id`.
    pub word_problem_ok: bool,
    /// Every sampled spectrum is real.
    pub eigen_real_ok: bool,
    /// Smallest gap of sorted log-magnitudes over the sample.
    pub min_log_gap: f64,
    pub sample_size: usize,
    /// Sampled words whose spectrum could not be resolved, with the reason.
    pub problems: Vec<(Word, String)>,
}

impl ValidationReport {
    /// Real, gapped spectra on every sample and relator within `relator_tol`.
    /// Finite sampling can never certify membership in the Hitchin component.
    pub fn hitchin_plausible(&self, relator_tol: f64) -> bool {
        self.relator_residual <= relator_tol
            && self.word_problem_ok
            && self.eigen_real_ok
            && self.problems.is_empty()
            && self.min_log_gap > 0.0
    }
}

const IDENTITY_TOL: f64 = 1e-6;

pub fn validate(rep: &SurfaceRep, sample: &[ConjugacyClass], tol: f64) -> ValidationReport {
    let spectral = SpectralTol {
        imag: tol,
        ..SpectralTol::default()
    };
    let relator = conjugacy_class(rep.presentation().relator()).expect("relator is nontrivial");
    let relator_inv = relator.inverse();

    let mut report = ValidationReport {
        relator_residual: rep.relator_residual(),
        word_problem_ok: true,
        eigen_real_ok: true,
        min_log_gap: f64::INFINITY,
        sample_size: sample.len(),
        problems: Vec::new(),
    };
    for class in sample {
        if *class == relator || *class == relator_inv {
            continue;
        }
        let w = class.representative();
        if let Ok(m) = evaluate(rep, w) {
            let (_, dist) = residual_to_pm_identity(&m.to_matrix());
            if m.log_scale().abs() < 1.0 && dist <= IDENTITY_TOL {
                report.word_problem_ok = false;
            }
        }
        match word_log_spectrum(rep, w, &spectral) {
            Ok((logs, _)) => {
                let gap = logs
                    .windows(2)
                    .map(|p| p[0] - p[1])
                    .fold(f64::INFINITY, f64::min);
                report.min_log_gap = report.min_log_gap.min(gap);
            }
            Err(e) => {
                match e {
                    Error::ComplexSpectrum { .. } => report.eigen_real_ok = false,
                    Error::DegenerateGap { gap } => report.min_log_gap = report.min_log_gap.min(gap),
                    _ => {}
                }
                report.problems.push((w.clone(), e.to_string()));
            }
        }
    }
    report
}

/// Every reduced word of length `≤ max_len` that evaluates within `tol` of
/// `±Id`, against the words the presentation forces to be trivial.
#[derive(Clone, Debug)]
pub struct FaithfulnessReport {
    pub words_checked: usize,
    pub near_identity: Vec<Word>,
    /// Near-identity words that are not rotations of the relator or its inverse.
    pub unexpected: Vec<Word>,
    /// Rotations of the relator (within `max_len`) that were not near `±Id`.
    pub missing: Vec<Word>,
}

impl FaithfulnessReport {
    pub fn passed(&self) -> bool {
        self.unexpected.is_empty() && self.missing.is_empty()
    }
}

/// Exhaustive word-problem check at small lengths. The empty word is skipped.
pub fn faithfulness_sweep(rep: &SurfaceRep, max_len: usize, tol: f64) -> FaithfulnessReport {
    let n = rep.n();
    let mut checked = 0usize;
    let mut near_identity = Vec::new();
    walk_reduced_words(
        max_len,
        DMatrix::<f64>::identity(n, n),
        |acc, l| acc * rep.letter_matrix(l),
        |prefix, m| {
            if prefix.is_empty() {
                return;
            }
            checked += 1;
            if residual_to_pm_identity(m).1 <= tol {
                near_identity.push(prefix.iter().copied().collect());
            }
        },
    );
    let expected: Vec<Word> = rep
        .presentation()
        .relator_cyclic_words()
        .into_iter()
        .filter(|w| w.len() <= max_len)
        .collect();
    FaithfulnessReport {
        words_checked: checked,
        unexpected: near_identity.iter().filter(|w| !expected.contains(w)).cloned().collect(),
        missing: expected.iter().filter(|w| !near_identity.contains(w)).cloned().collect(),
        near_identity,
    }
}
