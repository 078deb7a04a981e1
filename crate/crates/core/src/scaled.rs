//! Matrices carried together with an additive natural-log scale, so that
//! products of long words never overflow.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Represents `exp(log_scale) * matrix`. After [`ScaledMatrix::normalize`]
/// the largest absolute entry of `matrix` lies in `[1/2, 2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledMatrix {
    matrix: DMatrix<f64>,
    log_scale: f64,
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

impl ScaledMatrix {
    pub fn identity(n: usize) -> Self {
        ScaledMatrix {
            matrix: DMatrix::identity(n, n),
            log_scale: 0.0,
        }
    }

    pub fn new(matrix: DMatrix<f64>, log_scale: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidArgument("scaled matrix must be square".into()));
        }
        let mut s = ScaledMatrix { matrix, log_scale };
        s.normalize()?;
        Ok(s)
    }

    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        ScaledMatrix::new(matrix, 0.0)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Rescale by a power of two so the rescaling itself is exact.
    pub fn normalize(&mut self) -> Result<()> {
        let m = max_abs(&self.matrix);
        if m == 0.0 || !m.is_finite() {
            return Err(Error::InvalidArgument(
                "scaled matrix is zero or non-finite".into(),
            ));
        }
        let k = m.log2().round();
        if k != 0.0 {
            self.matrix *= (-k).exp2();
            self.log_scale += k * std::f64::consts::LN_2;
        }
        Ok(())
    }

    /// Product `self * rhs`, renormalized.
    pub fn mul(&self, rhs: &ScaledMatrix) -> Result<ScaledMatrix> {
        self.mul_matrix(&rhs.matrix, rhs.log_scale)
    }

    /// `self * (exp(rhs_log_scale) * rhs)`, renormalized.
    pub fn mul_matrix(&self, rhs: &DMatrix<f64>, rhs_log_scale: f64) -> Result<ScaledMatrix> {
        ScaledMatrix::new(&self.matrix * rhs, self.log_scale + rhs_log_scale)
    }

    /// `lhs * self`, renormalized.
    pub fn premul_matrix(&self, lhs: &DMatrix<f64>) -> Result<ScaledMatrix> {
        ScaledMatrix::new(lhs * &self.matrix, self.log_scale)
    }

    /// `self ← self * rhs` without renormalizing; callers renormalize on
    /// their own cadence.
    pub fn mul_assign_raw(&mut self, rhs: &ScaledMatrix) {
        self.matrix = &self.matrix * &rhs.matrix;
        self.log_scale += rhs.log_scale;
    }

    /// Binary powering; one renormalization per multiplication.
    pub fn pow(&self, k: usize) -> Result<ScaledMatrix> {
        let mut result = ScaledMatrix::identity(self.dim());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// The represented matrix. Overflows for large `log_scale`; meant for
    /// short words and tests.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        &self.matrix * self.log_scale.exp()
    }
}
