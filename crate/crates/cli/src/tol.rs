//! Tolerance overrides from `--tol key=value` or the `HITCHIN_TOL` variable.

use anyhow::{bail, Context};
use hitchin_core::asymptotic::ConvergenceConfig;
use hitchin_core::lengths::SpectralTol;

#[derive(Clone, Debug)]
pub struct Tolerances {
    pub gap: f64,
    pub eigen_imag: f64,
    /// Relator threshold for a hitchin-plausible verdict.
    pub relator: f64,
    /// Per-dimension tolerance of the identity checks.
    pub identity: f64,
    pub tail: f64,
    pub corr: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let spectral = SpectralTol::default();
        let conv = ConvergenceConfig::default();
        Tolerances {
            gap: spectral.gap,
            eigen_imag: spectral.imag,
            relator: 1e-8,
            identity: 1e-8,
            tail: conv.tail_tol,
            corr: conv.min_correlation,
        }
    }
}

impl Tolerances {
    pub fn parse(items: &[String]) -> anyhow::Result<Self> {
        let mut t = Tolerances::default();
        for item in items.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .with_context(|| format!("tolerance `{item}` is not key=value"))?;
            let value: f64 = value
                .trim()
                .parse()
                .with_context(|| format!("tolerance `{item}` has a non-numeric value"))?;
            if !(value > 0.0 && value.is_finite()) {
                bail!("tolerance `{item}` must be positive");
            }
            let slot = match key.trim() {
                "gap" => &mut t.gap,
                "eigen_imag" => &mut t.eigen_imag,
                "relator" => &mut t.relator,
                "identity" => &mut t.identity,
                "tail" => &mut t.tail,
                "corr" => &mut t.corr,
                other => bail!("unknown tolerance key `{other}`"),
            };
            *slot = value;
        }
        Ok(t)
    }

    pub fn spectral(&self) -> SpectralTol {
        SpectralTol { gap: self.gap, imag: self.eigen_imag, ..SpectralTol::default() }
    }

    pub fn convergence(&self) -> ConvergenceConfig {
        ConvergenceConfig { tail_tol: self.tail, min_correlation: self.corr, ..ConvergenceConfig::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply() {
        let t = Tolerances::parse(&["gap=1e-6".into(), " tail = 1e-9".into(), "".into()]).unwrap();
        assert_eq!(t.gap, 1e-6);
        assert_eq!(t.tail, 1e-9);
        assert_eq!(t.corr, 0.99);
    }

    #[test]
    fn bad_overrides_rejected() {
        for bad in ["gap", "gap=-1", "gap=abc", "speed=1"] {
            assert!(Tolerances::parse(&[bad.into()]).is_err(), "{bad}");
        }
    }
}
