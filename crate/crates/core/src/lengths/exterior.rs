//! Exterior powers `Λ^k`, used to read off partial sums `ℓ_1 + … + ℓ_k` as the
//! top log-eigenvalue of `Λ^k ρ(w)`. Only the dominant eigenvalue of each
//! power is needed, and that one survives any amount of renormalization.

use nalgebra::{DMatrix, Schur};

use super::eigen::SpectralTol;
use crate::error::{Error, Result};
use crate::rep::SurfaceRep;
use crate::scaled::ScaledMatrix;
use crate::word::{Letter, Word};

/// Increasing `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            go(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `Λ^k m` in the basis `e_I = e_{i_1} ∧ … ∧ e_{i_k}` of increasing subsets;
/// entry `(I, J)` is the minor `det m[I, J]`.
pub fn exterior_power(m: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let n = m.nrows();
    let sets = subsets(n, k);
    let dim = sets.len();
    let mut out = DMatrix::zeros(dim, dim);
    for (a, rows) in sets.iter().enumerate() {
        for (b, cols) in sets.iter().enumerate() {
            let minor = DMatrix::from_fn(k, k, |i, j| m[(rows[i], cols[j])]);
            out[(a, b)] = minor.determinant();
        }
    }
    out
}

/// Letter matrices of `Λ^k ρ` for `k = 1..=n`.
#[derive(Clone, Debug)]
pub struct ExteriorRep {
    n: usize,
    /// `powers[k-1][letter.index()]`
    powers: Vec<[DMatrix<f64>; 8]>,
}

impl ExteriorRep {
    pub fn new(rep: &SurfaceRep) -> Self {
        let n = rep.n();
        let powers = (1..=n)
            .map(|k| Letter::ALL.map(|l| exterior_power(rep.letter_matrix(l), k)))
            .collect();
        ExteriorRep { n, powers }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letter(&self, k: usize, l: Letter) -> &DMatrix<f64> {
        &self.powers[k - 1][l.index()]
    }

    /// `Λ^k ρ(w)` as a scaled product.
    pub fn evaluate(&self, k: usize, w: &Word) -> Result<ScaledMatrix> {
        let dim = self.powers[k - 1][0].nrows();
        let mut acc = ScaledMatrix::identity(dim);
        for &l in w.letters() {
            acc = acc.mul_matrix(self.letter(k, l), 0.0)?;
        }
        Ok(acc)
    }
}

/// Power iteration on `m`, started from its largest column. Returns the
/// dominant eigenvalue once the residual `‖Mx − λx‖` is at rounding level.
fn power_iteration(m: &DMatrix<f64>, max_iter: usize) -> Option<f64> {
    let start = (0..m.ncols()).max_by(|&i, &j| m.column(i).norm().total_cmp(&m.column(j).norm()))?;
    let mut x = m.column(start).normalize();
    let scale = m.norm();
    for _ in 0..max_iter {
        let y = m * &x;
        let lambda = x.dot(&y);
        if (&y - &x * lambda).norm() <= 1e-14 * scale {
            return Some(lambda);
        }
        let norm = y.norm();
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        x = y / norm;
    }
    None
}

/// Log-modulus and sign of the dominant eigenvalue, which must be real.
///
/// Products `Λ^k ρ(αᵐβ)` are close to rank one for large `m`, where power
/// iteration converges in a step or two; a bounded Schur decomposition
/// handles the rest and detects complex dominant pairs.
pub fn top_eigenvalue(m: &ScaledMatrix, tol: &SpectralTol) -> Result<(f64, i8)> {
    let mat = m.matrix();
    let sign = |x: f64| if x < 0.0 { -1 } else { 1 };
    if mat.nrows() == 1 {
        let x = mat[(0, 0)];
        return Ok((x.abs().ln() + m.log_scale(), sign(x)));
    }
    if let Some(lambda) = power_iteration(mat, 200) {
        return Ok((lambda.abs().ln() + m.log_scale(), sign(lambda)));
    }
    let eig = Schur::try_new(mat.clone(), f64::EPSILON, 10_000)
        .ok_or(Error::DegenerateGap { gap: 0.0 })?
        .complex_eigenvalues();
    let top = eig
        .iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .copied()
        .ok_or_else(|| Error::InvalidArgument("empty matrix".into()))?;
    let imag = top.im.abs() / top.norm();
    if imag > tol.imag {
        return Err(Error::ComplexSpectrum { imag });
    }
    Ok((top.re.abs().ln() + m.log_scale(), sign(top.re)))
}

/// Lengths and signs from the dominant eigenvalues of `Λ^1, …, Λ^n` of the
/// same group element: `ℓ_k = L_k − L_{k−1}`.
pub fn graded_spectrum(powers: &[ScaledMatrix], tol: &SpectralTol) -> Result<(Vec<f64>, Vec<i8>)> {
    let mut logs = Vec::with_capacity(powers.len());
    let mut signs = Vec::with_capacity(powers.len());
    let (mut prev_log, mut prev_sign) = (0.0, 1i8);
    for p in powers {
        let (log, sign) = top_eigenvalue(p, tol)?;
        logs.push(log - prev_log);
        signs.push(sign * prev_sign);
        prev_log = log;
        prev_sign = sign;
    }
    Ok((logs, signs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(subsets(6, 3).len(), 20);
        assert_eq!(subsets(4, 4), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn exterior_power_is_multiplicative() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.5, -1.0, 0.3, 2.0, 0.0, 1.0, 1.5]);
        let b = DMatrix::from_row_slice(3, 3, &[0.2, 1.0, 0.0, 1.0, -1.0, 0.7, 2.0, 0.1, 1.0]);
        let lhs = exterior_power(&(&a * &b), 2);
        let rhs = exterior_power(&a, 2) * exterior_power(&b, 2);
        assert!((lhs - rhs).amax() < 1e-12);
        assert!((exterior_power(&a, 3)[(0, 0)] - a.determinant()).abs() < 1e-12);
    }
}
