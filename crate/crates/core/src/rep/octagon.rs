//! Side pairings of the regular hyperbolic octagon with vertex angles π/4.
//!
//! Working in the upper half-plane with the octagon centered at `i`, the side
//! pairing across the diameter at angle `kπ/4` is `R_k T R_k⁻¹`, where `T`
//! translates along the imaginary axis by twice the inradius and `R_k` is the
//! elliptic rotation about `i` by `kπ/4`. The relator these four pairings
//! satisfy is recovered by exhaustive search rather than assumed.

use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::{residual_to_pm_identity, Provenance, SurfaceRep, RELATOR_TOL_BUILD};
use crate::word::{conjugacy_class, ConjugacyClass, Letter, Presentation, Word};

/// Translation length of each side pairing, `2·arccosh(1 + √2)`.
pub fn octagon_translation_length() -> f64 {
    2.0 * (1.0 + SQRT_2).acosh()
}

fn rotation(theta: f64) -> DMatrix<f64> {
    let (s, c) = (theta / 2.0).sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, s, -s, c])
}

fn side_pairings() -> [DMatrix<f64>; 4] {
    let half = octagon_translation_length() / 2.0;
    let t = DMatrix::from_row_slice(2, 2, &[half.exp(), 0.0, 0.0, (-half).exp()]);
    [0, 1, 2, 3].map(|k| {
        let r = rotation(k as f64 * FRAC_PI_4);
        let r_inv = r.transpose();
        &r * &t * r_inv
    })
}

fn adjugate(m: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]])
}

/// Words using every letter exactly once (each side is paired exactly once
/// in each direction) that evaluate to `±Id`; returns the canonical one.
fn find_relator(gens: &[DMatrix<f64>; 4], inverses: &[DMatrix<f64>; 4]) -> Word {
    let mat = |l: Letter| {
        if l.is_inverse() {
            &inverses[l.generator()]
        } else {
            &gens[l.generator()]
        }
    };
    let mut best: Option<ConjugacyClass> = None;
    let mut used = [false; 8];
    let mut prefix: Vec<Letter> = Vec::with_capacity(8);
    search(&mut prefix, &mut used, DMatrix::identity(2, 2), &mat, &mut best);
    best.expect("octagon side pairings satisfy a length-8 relator")
        .representative()
        .clone()
}

fn search<'a, F>(
    prefix: &mut Vec<Letter>,
    used: &mut [bool; 8],
    acc: DMatrix<f64>,
    mat: &F,
    best: &mut Option<ConjugacyClass>,
) where
    F: Fn(Letter) -> &'a DMatrix<f64>,
{
    if prefix.len() == 8 {
        let (_, residual) = residual_to_pm_identity(&acc);
        let word = Word::from_iter(prefix.iter().copied());
        if residual <= RELATOR_TOL_BUILD && word.len() == 8 && word.is_cyclically_reduced() {
            let class = conjugacy_class(&word).expect("nonempty");
            if best.as_ref().is_none_or(|b| class < *b) {
                *best = Some(class);
            }
        }
        return;
    }
    for l in Letter::ALL {
        if used[l.index()] || prefix.last() == Some(&l.inv()) {
            continue;
        }
        used[l.index()] = true;
        prefix.push(l);
        search(prefix, used, &acc * mat(l), mat, best);
        prefix.pop();
        used[l.index()] = false;
    }
}

/// The octagon Fuchsian representation (n = 2). Deterministic; built once.
pub fn build_octagon_fuchsian() -> SurfaceRep {
    static OCTAGON: OnceLock<SurfaceRep> = OnceLock::new();
    OCTAGON
        .get_or_init(|| {
            let gens = side_pairings();
            let inverses = [0, 1, 2, 3].map(|k| adjugate(&gens[k]));
            let relator = find_relator(&gens, &inverses);
            let presentation = Presentation::new(relator).expect("relator uses all generators");
            SurfaceRep::new(gens, presentation, Provenance::OctagonFuchsian, RELATOR_TOL_BUILD)
                .expect("octagon construction is a representation")
        })
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn traces_match_inradius_relation() {
        let rep = build_octagon_fuchsian();
        for g in rep.generators() {
            let tr = g.trace();
            assert!((tr - 2.0 * (1.0 + SQRT_2)).abs() < 1e-9, "trace {tr}");
            assert!((g.determinant() - 1.0).abs() < 1e-12);
        }
        assert!((octagon_translation_length() - 3.0571412).abs() < 1e-6);
    }

    #[test]
    fn relator_found_and_tight() {
        let rep = build_octagon_fuchsian();
        assert!(rep.relator_residual() <= 1e-9);
        let r = rep.presentation().relator();
        assert_eq!(r.len(), 8);
        for g in 0..4 {
            let count = r.letters().iter().filter(|l| l.generator() == g).count();
            assert_eq!(count, 2);
        }
    }
}
