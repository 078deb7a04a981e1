//! Bounded length-spectrum tables with surface-level deduplication.
//!
//! Free-group classes that coincide in the surface group are found by a
//! fingerprint prefilter (equal sorted log-magnitudes) followed by an explicit
//! search for a conjugating group element: some cyclic rotation of one word
//! and some `g` in a ball of reduced words with `ρ(g)ρ(w₂) = ±ρ(w₁)ρ(g)`.
//! A real-matrix similarity would not do: non-conjugate classes with the same
//! spectrum (such as `γ` and `γ⁻¹` when `n = 2`) are always similar in `GL_n`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{length_vector_with, LengthVector, SpectralTol};
use crate::error::Result;
use crate::format::fmt_sig;
use crate::rep::SurfaceRep;
use crate::scaled::max_abs;
use crate::word::{enumerate_classes, walk_reduced_words, ConjugacyClass, Word};

#[derive(Clone, Copy, Debug)]
pub struct SpectrumConfig {
    pub fingerprint_tol: f64,
    /// Relative residual for the conjugator equation.
    pub conjugacy_tol: f64,
    /// Longest conjugator tried.
    pub conjugator_radius: usize,
    pub spectral: SpectralTol,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            fingerprint_tol: 1e-7,
            conjugacy_tol: 1e-6,
            conjugator_radius: 3,
            spectral: SpectralTol::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumEntry {
    pub class: ConjugacyClass,
    pub lengths: LengthVector,
    pub fingerprint: Vec<f64>,
    /// Other enumerated classes found to be the same surface-group class.
    pub merged: Vec<ConjugacyClass>,
}

/// Lengths at 1e-9 resolution, for ordering that ignores rounding noise.
fn bucket(x: f64) -> i64 {
    (x * 1e9).round() as i64
}

fn same_fingerprint(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

struct Conjugators {
    mats: Vec<DMatrix<f64>>,
}

impl Conjugators {
    fn new(rep: &SurfaceRep, radius: usize) -> Self {
        let n = rep.n();
        let mut mats = Vec::new();
        walk_reduced_words(
            radius,
            DMatrix::<f64>::identity(n, n),
            |acc, l| acc * rep.letter_matrix(l),
            |_, m| mats.push(m.clone()),
        );
        Conjugators { mats }
    }

    fn conjugate(&self, rep: &SurfaceRep, w1: &Word, w2: &Word, tol: f64) -> bool {
        let m1 = rep.evaluate_plain(w1);
        (0..w2.len()).any(|k| {
            let m2 = rep.evaluate_plain(&w2.rotate(k));
            self.mats.iter().any(|g| {
                let lhs = g * &m2;
                let rhs = &m1 * g;
                let scale = max_abs(g) * max_abs(&m2).max(max_abs(&m1));
                let plus = max_abs(&(&lhs - &rhs));
                let minus = max_abs(&(&lhs + &rhs));
                plus.min(minus) <= tol * scale
            })
        })
    }
}

/// All classes of length `≤ max_len` with their length vectors, surface-level
/// duplicates merged, sorted ascending by `ℓ_1` at 1e-9 resolution, ties by class order.
pub fn spectrum(rep: &SurfaceRep, max_len: usize, config: &SpectrumConfig) -> Result<Vec<SpectrumEntry>> {
    let classes = enumerate_classes(max_len);
    let mut rows: Vec<(ConjugacyClass, LengthVector)> = classes
        .into_par_iter()
        .map(|c| {
            let l = length_vector_with(rep, c.representative(), &config.spectral)?;
            Ok((c, l))
        })
        .collect::<Result<_>>()?;
    // sort on bucketed values so rounding noise cannot interleave equal
    // fingerprints with a neighbour
    let key = |l: &LengthVector| -> Vec<i64> { l.values().iter().map(|x| bucket(*x)).collect() };
    rows.sort_by(|a, b| key(&a.1).cmp(&key(&b.1)).then_with(|| a.0.cmp(&b.0)));

    // fingerprint groups: consecutive rows close to the group's first row
    let mut groups: Vec<Vec<(ConjugacyClass, LengthVector)>> = Vec::new();
    for row in rows {
        match groups.last_mut() {
            Some(g) if same_fingerprint(g[0].1.values(), row.1.values(), config.fingerprint_tol) => {
                g.push(row)
            }
            _ => groups.push(vec![row]),
        }
    }

    let conjugators = Conjugators::new(rep, config.conjugator_radius);
    let mut entries: Vec<SpectrumEntry> = groups
        .into_par_iter()
        .flat_map_iter(|mut group| {
            group.sort_by(|a, b| a.0.cmp(&b.0));
            let mut kept: Vec<SpectrumEntry> = Vec::new();
            for (class, lengths) in group {
                let twin = kept.iter_mut().find(|e| {
                    conjugators.conjugate(
                        rep,
                        e.class.representative(),
                        class.representative(),
                        config.conjugacy_tol,
                    )
                });
                match twin {
                    Some(e) => e.merged.push(class),
                    None => kept.push(SpectrumEntry {
                        fingerprint: lengths.values().to_vec(),
                        class,
                        lengths,
                        merged: Vec::new(),
                    }),
                }
            }
            kept
        })
        .collect();
    entries.sort_by(|a, b| {
        bucket(a.lengths[0])
            .cmp(&bucket(b.lengths[0]))
            .then_with(|| a.class.cmp(&b.class))
    });
    Ok(entries)
}

/// CSV with header `class,len,l1,...,ln`.
pub fn spectrum_csv(entries: &[SpectrumEntry], n: usize) -> String {
    let mut out = String::from("class,len");
    for i in 1..=n {
        let _ = write!(out, ",l{i}");
    }
    out.push('\n');
    for e in entries {
        let _ = write!(out, "{},{}", e.class, e.class.len());
        for x in e.lengths.values() {
            let _ = write!(out, ",{}", fmt_sig(*x));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::build_octagon_fuchsian;

    #[test]
    fn inverse_generators_stay_separate() {
        let rep = build_octagon_fuchsian();
        let entries = spectrum(&rep, 1, &SpectrumConfig::default()).unwrap();
        assert_eq!(entries.len(), 8);
        assert!(entries.iter().all(|e| e.merged.is_empty()));
    }

    #[test]
    fn csv_header_and_rows() {
        let rep = build_octagon_fuchsian();
        let entries = spectrum(&rep, 1, &SpectrumConfig::default()).unwrap();
        let csv = spectrum_csv(&entries, 2);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("class,len,l1,l2"));
        assert_eq!(lines.next(), Some("a1,1,1.52857091948,-1.52857091948"));
        assert_eq!(csv.lines().count(), 9);
    }
}
