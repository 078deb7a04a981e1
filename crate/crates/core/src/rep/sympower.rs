use nalgebra::DMatrix;

use super::{residual_to_pm_identity, Provenance, SurfaceRep, RELATOR_TOL_LOAD};
use crate::error::{Error, Result};
use crate::scaled::max_abs;
use crate::word::Presentation;

pub const MAX_LIFT_DIM: usize = 12;

fn poly_mul_linear(p: &[f64], x_coef: f64, y_coef: f64) -> Vec<f64> {
    // p indexed by power of y; multiply by (x_coef·x + y_coef·y)
    let mut out = vec![0.0; p.len() + 1];
    for (j, &c) in p.iter().enumerate() {
        out[j] += c * x_coef;
        out[j + 1] += c * y_coef;
    }
    out
}

/// The irreducible `n`-dimensional representation of `A = [[a,b],[c,d]]` on
/// homogeneous polynomials of degree `n−1` in the monomial basis
/// `x^{n−1−k} y^k`: column `k` holds the coefficients of
/// `(a·x + c·y)^{n−1−k} (b·x + d·y)^k`.
pub fn sym_power_matrix(m: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    assert_eq!(m.shape(), (2, 2), "symmetric power of a 2x2 matrix");
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let mut out = DMatrix::zeros(n, n);
    for k in 0..n {
        let mut poly = vec![1.0];
        for _ in 0..(n - 1 - k) {
            poly = poly_mul_linear(&poly, a, c);
        }
        for _ in 0..k {
            poly = poly_mul_linear(&poly, b, d);
        }
        for (j, coef) in poly.into_iter().enumerate() {
            out[(j, k)] = coef;
        }
    }
    out
}

/// Lift a 2-dimensional representation to its `n_target`-Fuchsian point.
///
/// Inverses are lifted exactly, and the relator residual is measured on the
/// lift of the 2×2 relator product, which is the same matrix as the direct
/// `n`-dimensional product but without the rounding growth of long products
/// of large symmetric powers.
pub fn sym_power_lift(rep: &SurfaceRep, n_target: usize) -> Result<SurfaceRep> {
    if rep.n() != 2 {
        return Err(Error::InvalidArgument(format!(
            "symmetric power lift needs a 2-dimensional representation, got n = {}",
            rep.n()
        )));
    }
    if !(2..=MAX_LIFT_DIM).contains(&n_target) {
        return Err(Error::DimensionOutOfRange {
            n: n_target,
            min: 2,
            max: MAX_LIFT_DIM,
        });
    }
    let gens = rep.generators().clone().map(|g| sym_power_matrix(&g, n_target));
    let inverses = rep.inverses().clone().map(|g| sym_power_matrix(&g, n_target));
    let relator2 = rep.evaluate_plain(rep.presentation().relator());
    let (sign, residual) = residual_to_pm_identity(&sym_power_matrix(&relator2, n_target));
    Ok(SurfaceRep::from_parts(
        gens,
        inverses,
        rep.presentation().clone(),
        Provenance::SymPowerLift,
        sign,
        residual,
    ))
}

fn binomial(k: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}

/// Candidates `(x, y)` with `x^{k−j} y^j · C(k, j) = col[j]`, i.e. column 0 or
/// `n−1` of a symmetric power. Both signs are returned.
fn veronese_preimage(col: &[f64]) -> Option<(f64, f64)> {
    let k = col.len() - 1;
    let v: Vec<f64> = col.iter().enumerate().map(|(j, c)| c / binomial(k, j)).collect();
    let top = (0..=k).max_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs()))?;
    if v[top] == 0.0 {
        return None;
    }
    // direction from the two largest neighbouring monomials
    let (p, q) = if top < k { (1.0, v[top + 1] / v[top]) } else { (v[k - 1] / v[k], 1.0) };
    let base = v[top] / (p.powi((k - top) as i32) * q.powi(top as i32));
    let t = if k % 2 == 1 {
        base.signum() * base.abs().powf(1.0 / k as f64)
    } else if base > 0.0 {
        base.powf(1.0 / k as f64)
    } else {
        return None;
    };
    Some((t * p, t * q))
}

/// Recover `A` from `Sym^{n−1}(A)`, up to the sign ambiguity of even powers.
/// Returns `None` unless the lift of the candidate reproduces `m` to a
/// relative `1e−12`.
pub(crate) fn sym_power_root(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = m.nrows();
    let first: Vec<f64> = m.column(0).iter().copied().collect();
    let last: Vec<f64> = m.column(n - 1).iter().copied().collect();
    let (a, c) = veronese_preimage(&first)?;
    let (b, d) = veronese_preimage(&last)?;
    let scale = max_abs(m);
    [1.0, -1.0]
        .iter()
        .flat_map(|&s1| [1.0, -1.0].map(move |s2| (s1, s2)))
        .map(|(s1, s2)| DMatrix::from_row_slice(2, 2, &[s1 * a, s2 * b, s1 * c, s2 * d]))
        .filter(|g| g.determinant() > 0.0)
        .find(|g| max_abs(&(sym_power_matrix(g, n) - m)) <= 1e-12 * scale)
}

/// Recognize generators that are symmetric powers of `SL_2` matrices. The
/// relator is then checked on the 2×2 parents, where double precision is
/// ample, and the inverses are lifted exactly. The direct `n`-dimensional
/// relator product of a Fuchsian lift loses about `(n−1)·8·log10(λ)` digits
/// and is useless as a residual beyond `n ≈ 5`.
pub(crate) fn recognize_lift(gens: [DMatrix<f64>; 4], presentation: &Presentation) -> Option<SurfaceRep> {
    let n = gens[0].nrows();
    if !(3..=MAX_LIFT_DIM).contains(&n) {
        return None;
    }
    let parents: Vec<DMatrix<f64>> = gens.iter().map(sym_power_root).collect::<Option<_>>()?;
    let parents: [DMatrix<f64>; 4] = parents.try_into().ok()?;
    let parent = SurfaceRep::new(parents, presentation.clone(), Provenance::User, RELATOR_TOL_LOAD).ok()?;
    let lift = sym_power_lift(&parent, n).ok()?;
    Some(SurfaceRep::from_parts(
        gens,
        lift.inverses().clone(),
        presentation.clone(),
        Provenance::SymPowerLift,
        lift.relator_sign(),
        lift.relator_residual(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_lifts_to_diagonal() {
        let lambda: f64 = 1.7;
        let d = DMatrix::from_row_slice(2, 2, &[lambda, 0.0, 0.0, 1.0 / lambda]);
        for n in 2..=6 {
            let m = sym_power_matrix(&d, n);
            for i in 0..n {
                for j in 0..n {
                    let expected = if i == j {
                        lambda.powi(n as i32 - 1 - 2 * i as i32)
                    } else {
                        0.0
                    };
                    assert!((m[(i, j)] - expected).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn unipotent_n3() {
        let u = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let expected = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 1.0]);
        assert_eq!(sym_power_matrix(&u, 3), expected);
    }

    #[test]
    fn lift_dimension_checked() {
        let rep = super::super::build_octagon_fuchsian();
        assert!(sym_power_lift(&rep, 1).is_err());
        assert!(sym_power_lift(&rep, 13).is_err());
        let lifted = sym_power_lift(&rep, 5).unwrap();
        assert!(sym_power_lift(&lifted, 3).is_err());
        assert_eq!(lifted.n(), 5);
        assert!(lifted.relator_residual() < 1e-9);
    }

    #[test]
    fn roots_are_recovered() {
        let rep = crate::rep::build_octagon_fuchsian();
        for n in 3..=MAX_LIFT_DIM {
            for g in rep.generators() {
                let lifted = sym_power_matrix(g, n);
                let root = sym_power_root(&lifted).unwrap();
                let same = max_abs(&(&root - g)) < 1e-12 || max_abs(&(&root + g)) < 1e-12;
                assert!(same, "n = {n}");
            }
        }
        let not_a_lift = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.5]);
        assert!(sym_power_root(&not_a_lift).is_none());
    }
}
