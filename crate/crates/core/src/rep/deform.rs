//! Seeded deformations along the relator variety.
//!
//! `a1` and `b1` are perturbed by seeded random matrices and rescaled to unit
//! determinant. `a2` starts perturbed as well; `a2` and `b2` are then moved
//! back onto the relator variety by a minimum-norm Gauss–Newton iteration.
//! Solving for `b2` alone is not possible in general: the relator then forces
//! `b2` to conjugate one product of the other generators onto another, which
//! a generic perturbation of three generators breaks.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{max_abs, solve_inverse, Provenance, SurfaceRep, RELATOR_TOL_DEFORM};
use crate::error::{Error, Result};
use crate::word::Letter;

#[derive(Clone, Copy, Debug)]
pub struct DeformConfig {
    pub max_iterations: usize,
    /// Target for the relator residual (and `|det − 1|`).
    pub tol: f64,
}

impl Default for DeformConfig {
    fn default() -> Self {
        DeformConfig {
            max_iterations: 50,
            tol: RELATOR_TOL_DEFORM,
        }
    }
}

/// Generators the Newton iteration solves for.
const FREE: [usize; 2] = [2, 3];

pub fn deform(rep: &SurfaceRep, seed: u64, epsilon: f64) -> Result<SurfaceRep> {
    deform_with(rep, seed, epsilon, &DeformConfig::default())
}

pub fn deform_with(
    rep: &SurfaceRep,
    seed: u64,
    epsilon: f64,
    config: &DeformConfig,
) -> Result<SurfaceRep> {
    let n = rep.n();
    let scale = rep.generators().iter().map(max_abs).fold(0.0, f64::max);
    if !(epsilon >= 0.0) || epsilon > 0.05 * scale {
        return Err(Error::InvalidArgument(format!(
            "epsilon {epsilon} must lie in [0, {}] (5% of the generator entry scale)",
            0.05 * scale
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = rep.generators().clone();
    for g in gens.iter_mut().take(3) {
        let noise = DMatrix::from_fn(n, n, |_, _| epsilon * rng.random_range(-1.0..1.0));
        *g = unit_determinant(&(&*g + noise))?;
    }

    let relator: Vec<Letter> = rep.presentation().relator().letters().to_vec();
    let sign = rep.relator_sign();
    let mut iterations = 0;
    loop {
        let residual_vec = equations(&gens, &relator, sign)?;
        let residual = residual_vec.amax();
        if residual <= config.tol {
            break;
        }
        if iterations == config.max_iterations || !residual.is_finite() {
            return Err(Error::NewtonDivergence { residual, iterations });
        }
        let jac = jacobian(&gens, &relator)?;
        let svd = jac.svd(true, true);
        let cutoff = 1e-12 * svd.singular_values.max();
        let step = svd
            .solve(&(-&residual_vec), cutoff)
            .map_err(|e| Error::InvalidArgument(format!("newton step failed: {e}")))?;
        // backtrack until the residual norm drops; full steps overshoot
        // when the Jacobian is badly conditioned (large n)
        let current = residual_vec.norm();
        let mut t = 1.0;
        let accepted = loop {
            let trial = apply_step(&gens, &step, t);
            let better = equations(&trial, &relator, sign)
                .map(|f| f.norm() < current)
                .unwrap_or(false);
            if better {
                break Some(trial);
            }
            t *= 0.5;
            if t < 1e-6 {
                break None;
            }
        };
        match accepted {
            Some(next) => gens = next,
            None => return Err(Error::NewtonDivergence { residual, iterations }),
        }
        iterations += 1;
    }

    let out = SurfaceRep::new(gens, rep.presentation().clone(), Provenance::Deformed, RELATOR_TOL_DEFORM)?;
    Ok(if epsilon == 0.0 && iterations == 0 {
        out.with_provenance(rep.provenance())
    } else {
        out
    })
}

fn apply_step(gens: &[DMatrix<f64>; 4], step: &DVector<f64>, t: f64) -> [DMatrix<f64>; 4] {
    let n = gens[0].nrows();
    let mut out = gens.clone();
    for (slot, &g) in FREE.iter().enumerate() {
        for p in 0..n {
            for q in 0..n {
                out[g][(p, q)] += t * step[slot * n * n + p * n + q];
            }
        }
    }
    out
}

fn unit_determinant(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows() as f64;
    let det = m.determinant();
    if !(det > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "perturbed generator has determinant {det}; use a smaller epsilon"
        )));
    }
    Ok(m / det.powf(1.0 / n))
}

fn letter_matrices(gens: &[DMatrix<f64>; 4]) -> Result<[DMatrix<f64>; 4]> {
    let inv: Vec<DMatrix<f64>> = gens
        .iter()
        .enumerate()
        .map(|(k, g)| solve_inverse(g, k))
        .collect::<Result<_>>()?;
    Ok(inv.try_into().expect("four generators"))
}

/// Row-major `ρ(R) − s·Id`, then `det(a2) − 1`, `det(b2) − 1`.
fn equations(gens: &[DMatrix<f64>; 4], relator: &[Letter], sign: f64) -> Result<DVector<f64>> {
    let n = gens[0].nrows();
    let inv = letter_matrices(gens)?;
    let r = relator.iter().fold(DMatrix::identity(n, n), |acc, l| {
        acc * if l.is_inverse() { &inv[l.generator()] } else { &gens[l.generator()] }
    });
    let target = DMatrix::<f64>::identity(n, n) * sign;
    let diff = r - target;
    let mut f = DVector::zeros(n * n + FREE.len());
    for p in 0..n {
        for q in 0..n {
            f[p * n + q] = diff[(p, q)];
        }
    }
    for (slot, &g) in FREE.iter().enumerate() {
        f[n * n + slot] = gens[g].determinant() - 1.0;
    }
    Ok(f)
}

/// Analytic derivative of [`equations`] with respect to the entries of the
/// free generators. An entry `(p, q)` of generator `g` at relator position `j`
/// contributes `P_j E_pq S_j` (or `−P_j g⁻¹ E_pq g⁻¹ S_j` for an inverse letter).
fn jacobian(gens: &[DMatrix<f64>; 4], relator: &[Letter]) -> Result<DMatrix<f64>> {
    let n = gens[0].nrows();
    let inv = letter_matrices(gens)?;
    let mat = |l: &Letter| if l.is_inverse() { &inv[l.generator()] } else { &gens[l.generator()] };
    let len = relator.len();
    let mut prefix = vec![DMatrix::<f64>::identity(n, n); len + 1];
    for j in 0..len {
        prefix[j + 1] = &prefix[j] * mat(&relator[j]);
    }
    let mut suffix = vec![DMatrix::<f64>::identity(n, n); len + 1];
    for j in (0..len).rev() {
        suffix[j] = mat(&relator[j]) * &suffix[j + 1];
    }

    let cols = n * n * FREE.len();
    let mut jac = DMatrix::zeros(n * n + FREE.len(), cols);
    for (slot, &g) in FREE.iter().enumerate() {
        for (j, l) in relator.iter().enumerate() {
            if l.generator() != g {
                continue;
            }
            let (left, right, s) = if l.is_inverse() {
                (&prefix[j] * &inv[g], &inv[g] * &suffix[j + 1], -1.0)
            } else {
                (prefix[j].clone(), suffix[j + 1].clone(), 1.0)
            };
            for p in 0..n {
                for q in 0..n {
                    let col = slot * n * n + p * n + q;
                    for r in 0..n {
                        for c in 0..n {
                            jac[(r * n + c, col)] += s * left[(r, p)] * right[(q, c)];
                        }
                    }
                }
            }
        }
        // d det / d g_pq = det · (g⁻¹)_qp
        let det = gens[g].determinant();
        for p in 0..n {
            for q in 0..n {
                jac[(n * n + slot, slot * n * n + p * n + q)] = det * inv[g][(q, p)];
            }
        }
    }
    Ok(jac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{build_octagon_fuchsian, sym_power_lift};

    #[test]
    fn zero_epsilon_is_fixed_point() {
        let rep = sym_power_lift(&build_octagon_fuchsian(), 3).unwrap();
        let out = deform(&rep, 42, 0.0).unwrap();
        for (a, b) in rep.generators().iter().zip(out.generators()) {
            assert!(max_abs(&(a - b)) <= 1e-12);
        }
    }

    #[test]
    fn small_deformation_lands_on_variety() {
        let rep = sym_power_lift(&build_octagon_fuchsian(), 3).unwrap();
        for seed in [1, 2, 3] {
            let out = deform(&rep, seed, 1e-3).unwrap();
            assert!(out.relator_residual() <= 1e-10);
            assert_eq!(out.provenance(), Provenance::Deformed);
            let moved = max_abs(&(&out.generators()[0] - &rep.generators()[0]));
            assert!(moved > 1e-5);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let rep = sym_power_lift(&build_octagon_fuchsian(), 2).unwrap();
        let gens = rep.generators().clone();
        let relator = rep.presentation().relator().letters().to_vec();
        let jac = jacobian(&gens, &relator).unwrap();
        let h = 1e-6;
        for (slot, &g) in FREE.iter().enumerate() {
            for e in 0..4 {
                let (mut up, mut down) = (gens.clone(), gens.clone());
                up[g][(e / 2, e % 2)] += h;
                down[g][(e / 2, e % 2)] -= h;
                let f1 = equations(&up, &relator, rep.relator_sign()).unwrap();
                let f2 = equations(&down, &relator, rep.relator_sign()).unwrap();
                let fd = (f1 - f2) / (2.0 * h);
                let col = jac.column(slot * 4 + e);
                let err = (&fd - col).amax();
                assert!(err < 1e-6 * (1.0 + col.amax()), "column {}: {err} vs {}", slot * 4 + e, col.amax());
            }
        }
    }

    #[test]
    fn oversized_epsilon_rejected() {
        let rep = build_octagon_fuchsian();
        assert!(deform(&rep, 0, 10.0).is_err());
        assert!(deform(&rep, 0, -1.0).is_err());
    }
}
