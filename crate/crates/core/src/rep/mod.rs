//! Representations of the genus-2 surface group into `SL_n(R)`.

mod deform;
mod io;
mod octagon;
mod sympower;
mod validate;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scaled::{max_abs, ScaledMatrix};
use crate::word::{Letter, Presentation, Word, GENERATOR_NAMES};

pub use deform::{deform, DeformConfig};
pub use io::{load_rep, rep_from_json, rep_to_json, save_rep, RepFile};
pub use octagon::{build_octagon_fuchsian, octagon_translation_length};
pub use sympower::{sym_power_lift, sym_power_matrix, MAX_LIFT_DIM};
pub use self::validate::{faithfulness_sweep, validate, FaithfulnessReport, ValidationReport};

/// Acceptance threshold for relator residuals of loaded/user representations.
pub const RELATOR_TOL_LOAD: f64 = 1e-8;
/// Threshold for the octagon construction.
pub const RELATOR_TOL_BUILD: f64 = 1e-9;
/// Threshold for Newton-deformed representations.
pub const RELATOR_TOL_DEFORM: f64 = 1e-10;
/// Allowed `|det - 1|` for every generator image.
pub const DET_TOL: f64 = 1e-9;
/// Relative residual allowed for numerically solved inverses.
pub const INVERSE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    OctagonFuchsian,
    SymPowerLift,
    User,
    Deformed,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::OctagonFuchsian => "octagon-fuchsian",
            Provenance::SymPowerLift => "sym-power-lift",
            Provenance::User => "user",
            Provenance::Deformed => "deformed",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "octagon-fuchsian" => Ok(Provenance::OctagonFuchsian),
            "sym-power-lift" => Ok(Provenance::SymPowerLift),
            "user" => Ok(Provenance::User),
            "deformed" => Ok(Provenance::Deformed),
            other => Err(Error::Schema(format!("unknown provenance `{other}`"))),
        }
    }
}

/// A representation given by the images of `a1 b1 a2 b2`, all of unit
/// determinant, satisfying the presentation's relator up to `±Id`.
#[derive(Clone, Debug)]
pub struct SurfaceRep {
    n: usize,
    generators: [DMatrix<f64>; 4],
    inverses: [DMatrix<f64>; 4],
    presentation: Presentation,
    provenance: Provenance,
    relator_sign: f64,
    relator_residual: f64,
}

impl SurfaceRep {
    /// Validate and assemble a representation. Inverses are solved
    /// numerically; determinant and relator residual are enforced.
    pub fn new(
        generators: [DMatrix<f64>; 4],
        presentation: Presentation,
        provenance: Provenance,
        relator_tol: f64,
    ) -> Result<Self> {
        let n = check_shapes(&generators)?;
        for (k, g) in generators.iter().enumerate() {
            let det = g.determinant();
            if !det.is_finite() || (det - 1.0).abs() > DET_TOL {
                return Err(Error::Determinant {
                    generator: GENERATOR_NAMES[k].into(),
                    det,
                });
            }
        }
        let inverses: Vec<DMatrix<f64>> = generators
            .iter()
            .enumerate()
            .map(|(k, g)| solve_inverse(g, k))
            .collect::<Result<_>>()?;
        let inverses: [DMatrix<f64>; 4] = inverses.try_into().expect("four generators");
        let mut rep = SurfaceRep {
            n,
            generators,
            inverses,
            presentation,
            provenance,
            relator_sign: 1.0,
            relator_residual: f64::INFINITY,
        };
        rep.measure_relator();
        rep.check_relator(relator_tol)?;
        Ok(rep)
    }

    /// Assemble from generators with exactly known inverses; the relator
    /// residual is supplied by the caller (computed through a more accurate
    /// route than the direct product, e.g. in the 2×2 parent).
    pub(crate) fn from_parts(
        generators: [DMatrix<f64>; 4],
        inverses: [DMatrix<f64>; 4],
        presentation: Presentation,
        provenance: Provenance,
        relator_sign: f64,
        relator_residual: f64,
    ) -> Self {
        SurfaceRep {
            n: generators[0].nrows(),
            generators,
            inverses,
            presentation,
            provenance,
            relator_sign,
            relator_residual,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[DMatrix<f64>; 4] {
        &self.generators
    }

    pub fn inverses(&self) -> &[DMatrix<f64>; 4] {
        &self.inverses
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `+1` if the relator maps near `Id`, `-1` if near `-Id`.
    pub fn relator_sign(&self) -> f64 {
        self.relator_sign
    }

    /// `min(‖ρ(R) − Id‖, ‖ρ(R) + Id‖)` in the max-entry norm.
    pub fn relator_residual(&self) -> f64 {
        self.relator_residual
    }

    pub fn letter_matrix(&self, l: Letter) -> &DMatrix<f64> {
        if l.is_inverse() {
            &self.inverses[l.generator()]
        } else {
            &self.generators[l.generator()]
        }
    }

    /// Plain (unscaled) product along `w`, for short words.
    pub fn evaluate_plain(&self, w: &Word) -> DMatrix<f64> {
        w.letters()
            .iter()
            .fold(DMatrix::identity(self.n, self.n), |acc, &l| {
                acc * self.letter_matrix(l)
            })
    }

    pub(crate) fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    fn measure_relator(&mut self) {
        let r = self.evaluate_plain(self.presentation.relator());
        let (sign, residual) = residual_to_pm_identity(&r);
        self.relator_sign = sign;
        self.relator_residual = residual;
    }

    fn check_relator(&self, tol: f64) -> Result<()> {
        if !(self.relator_residual <= tol) {
            return Err(Error::RelatorResidual {
                residual: self.relator_residual,
                threshold: tol,
            });
        }
        Ok(())
    }
}

/// Ordered product of generator images/inverses along `w`, renormalized after
/// every multiplication.
pub fn evaluate(rep: &SurfaceRep, w: &Word) -> Result<ScaledMatrix> {
    let mut acc = ScaledMatrix::identity(rep.n());
    for &l in w.letters() {
        acc = acc.mul_matrix(rep.letter_matrix(l), 0.0)?;
    }
    Ok(acc)
}

/// Returns the sign `s ∈ {+1, −1}` minimizing `‖m − s·Id‖_max` and that distance.
pub(crate) fn residual_to_pm_identity(m: &DMatrix<f64>) -> (f64, f64) {
    let n = m.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let plus = max_abs(&(m - &id));
    let minus = max_abs(&(m + &id));
    if plus <= minus {
        (1.0, plus)
    } else {
        (-1.0, minus)
    }
}

fn check_shapes(generators: &[DMatrix<f64>; 4]) -> Result<usize> {
    let n = generators[0].nrows();
    if n < 2 {
        return Err(Error::DimensionOutOfRange { n, min: 2, max: MAX_LIFT_DIM });
    }
    for (k, g) in generators.iter().enumerate() {
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::Schema(format!(
                "generator {} is {}x{}, expected {n}x{n}",
                GENERATOR_NAMES[k],
                g.nrows(),
                g.ncols()
            )));
        }
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::Schema(format!(
                "generator {} has non-finite entries",
                GENERATOR_NAMES[k]
            )));
        }
    }
    Ok(n)
}

/// Exact adjugate for 2×2 (unit determinant assumed), LU otherwise.
pub(crate) fn solve_inverse(m: &DMatrix<f64>, generator: usize) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let inv = if n == 2 {
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        DMatrix::from_row_slice(2, 2, &[m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]]) / det
    } else {
        m.clone().lu().try_inverse().ok_or_else(|| Error::SingularInverse {
            generator: GENERATOR_NAMES[generator].into(),
            residual: f64::INFINITY,
        })?
    };
    let residual = max_abs(&(m * &inv - DMatrix::<f64>::identity(n, n)))
        / (max_abs(m) * max_abs(&inv));
    if !(residual <= INVERSE_TOL) {
        return Err(Error::SingularInverse {
            generator: GENERATOR_NAMES[generator].into(),
            residual,
        });
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn provenance_round_trip() {
        for p in [
            Provenance::OctagonFuchsian,
            Provenance::SymPowerLift,
            Provenance::User,
            Provenance::Deformed,
        ] {
            assert_eq!(p.as_str().parse::<Provenance>().unwrap(), p);
        }
        assert!("fuchsian".parse::<Provenance>().is_err());
    }

    #[test]
    fn evaluate_identity_word() {
        let rep = build_octagon_fuchsian();
        let e = evaluate(&rep, &Word::identity()).unwrap();
        assert_eq!(e.log_scale(), 0.0);
        assert_eq!(e.matrix(), &DMatrix::<f64>::identity(2, 2));
    }

    #[test]
    fn evaluate_word_times_inverse_is_identity() {
        let rep = sym_power_lift(&build_octagon_fuchsian(), 4).unwrap();
        let w: Word = "a1 b2 A2 b1 b1 a2".parse().unwrap();
        let raw: Vec<Letter> = w
            .letters()
            .iter()
            .chain(w.inverse().letters())
            .copied()
            .collect();
        // evaluate letter by letter without free reduction
        let mut acc = ScaledMatrix::identity(4);
        // rounding grows with the product of the letter norms
        let mut bound = 1e-14;
        for l in raw {
            acc = acc.mul_matrix(rep.letter_matrix(l), 0.0).unwrap();
            bound *= rep.letter_matrix(l).norm();
        }
        let m = acc.to_matrix();
        assert!(max_abs(&(m - DMatrix::<f64>::identity(4, 4))) < bound.max(1e-12));
    }

    #[test]
    fn non_representation_rejected() {
        let rep = build_octagon_fuchsian();
        let mut gens = rep.generators().clone();
        // perturb while keeping det = 1: multiply by a unipotent
        gens[0] = &gens[0] * DMatrix::from_row_slice(2, 2, &[1.0, 0.05, 0.0, 1.0]);
        let err = SurfaceRep::new(gens, rep.presentation().clone(), Provenance::User, 1e-8)
            .unwrap_err();
        match err {
            Error::RelatorResidual { residual, .. } => assert!(residual > 1e-3),
            other => panic!("unexpected {other}"),
        }
    }
}
