//! The eigenvalue ratio `λ_i(αᵐβ) / λ_i(α)ᵐ` and its limit.
//!
//! In log form the series is `ℓ_i(αᵐβ) − m·ℓ_i(α)`, which converges
//! geometrically to `ℓ_i(α̇)` for the limit current `α̇ = lim αᵐβ − mα`.
//! The products `ρ(α)ᵐρ(β)` are accumulated in every exterior power `Λ^k`
//! so that each partial sum `ℓ_1 + … + ℓ_k` is a dominant eigenvalue, which
//! stays accurate while the spectrum of `ρ(αᵐβ)` spreads over hundreds of
//! orders of magnitude.

use std::fmt::Write as _;

use crate::current::{current_length, CurrentCombo, LengthTable};
use crate::error::{Error, Result};
use crate::format::fmt_sig;
use crate::lengths::exterior::{graded_spectrum, ExteriorRep};
use crate::lengths::{length_vector, LengthVector, SpectralTol};
use crate::rep::SurfaceRep;
use crate::scaled::ScaledMatrix;
use crate::word::{conjugacy_class, Word};

#[derive(Clone, Copy, Debug)]
pub struct SeriesConfig {
    /// Recompute `Λ^k ρ(α)ᵐ` by binary powering every this many steps.
    pub reanchor_every: usize,
    /// Renormalize the running power every this many multiplications.
    pub renorm_every: usize,
    pub spectral: SpectralTol,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            reanchor_every: 32,
            renorm_every: 1,
            spectral: SpectralTol::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RatioSeries {
    pub alpha: Word,
    pub beta: Word,
    pub n: usize,
    pub m_max: usize,
    pub alpha_lengths: Vec<f64>,
    pub alpha_signs: Vec<i8>,
    /// `ℓ(αᵐβ)` at index `m − 1`, `None` when `m` is invalid.
    pub product_lengths: Vec<Option<Vec<f64>>>,
    /// `log_ratio[i][m − 1]`; NaN when `m` is invalid.
    pub log_ratio: Vec<Vec<f64>>,
    /// `sign(λ_i(αᵐβ))·sign(λ_i(α))ᵐ`; 0 when `m` is invalid.
    pub sign: Vec<Vec<i8>>,
    pub invalid: Vec<(usize, String)>,
}

impl RatioSeries {
    pub fn is_valid(&self, m: usize) -> bool {
        self.product_lengths[m - 1].is_some()
    }

    pub fn valid_count(&self) -> usize {
        self.product_lengths.iter().filter(|p| p.is_some()).count()
    }

    /// The word `αᵐβ`, freely reduced.
    pub fn product_word(&self, m: usize) -> Word {
        self.alpha.pow(m).concat(&self.beta)
    }
}

pub fn ratio_series(rep: &SurfaceRep, alpha: &Word, beta: &Word, m_max: usize) -> Result<RatioSeries> {
    ratio_series_with(rep, alpha, beta, m_max, &SeriesConfig::default())
}

pub fn ratio_series_with(
    rep: &SurfaceRep,
    alpha: &Word,
    beta: &Word,
    m_max: usize,
    config: &SeriesConfig,
) -> Result<RatioSeries> {
    if alpha.is_empty() {
        return Err(Error::IdentityWord);
    }
    if m_max < 8 {
        return Err(Error::InvalidArgument(format!("m_max = {m_max} must be at least 8")));
    }
    let reanchor = config.reanchor_every.max(1);
    let renorm = config.renorm_every.max(1);
    let n = rep.n();
    let ext = ExteriorRep::new(rep);
    let alpha_pows: Vec<ScaledMatrix> = (1..=n).map(|k| ext.evaluate(k, alpha)).collect::<Result<_>>()?;
    let beta_pows: Vec<ScaledMatrix> = (1..=n).map(|k| ext.evaluate(k, beta)).collect::<Result<_>>()?;
    let (alpha_lengths, alpha_signs) = graded_spectrum(&alpha_pows, &config.spectral)?;

    let mut series = RatioSeries {
        alpha: alpha.clone(),
        beta: beta.clone(),
        n,
        m_max,
        alpha_lengths,
        alpha_signs,
        product_lengths: Vec::with_capacity(m_max),
        log_ratio: vec![Vec::with_capacity(m_max); n],
        sign: vec![Vec::with_capacity(m_max); n],
        invalid: Vec::new(),
    };

    let mut running: Vec<ScaledMatrix> = alpha_pows.iter().map(|a| ScaledMatrix::identity(a.dim())).collect();
    for m in 1..=m_max {
        for (p, a) in running.iter_mut().zip(&alpha_pows) {
            if m % reanchor == 0 {
                *p = a.pow(m)?;
            } else {
                p.mul_assign_raw(a);
                if m % renorm == 0 {
                    p.normalize()?;
                }
            }
        }
        let outcome = if series.product_word(m).is_empty() {
            Err("αᵐβ is the identity".to_string())
        } else {
            running
                .iter()
                .zip(&beta_pows)
                .map(|(p, b)| p.mul(b))
                .collect::<Result<Vec<_>>>()
                .and_then(|prods| graded_spectrum(&prods, &config.spectral))
                .map_err(|e| e.to_string())
                .and_then(|(logs, signs)| {
                    let gap = crate::lengths::eigen_min_gap(&logs);
                    if gap > config.spectral.gap {
                        Ok((logs, signs))
                    } else {
                        Err(Error::DegenerateGap { gap }.to_string())
                    }
                })
        };
        match outcome {
            Ok((logs, signs)) => {
                for i in 0..n {
                    series.log_ratio[i].push(logs[i] - m as f64 * series.alpha_lengths[i]);
                    let alpha_sign = if m % 2 == 1 { series.alpha_signs[i] } else { 1 };
                    series.sign[i].push(signs[i] * alpha_sign);
                }
                series.product_lengths.push(Some(logs));
            }
            Err(reason) => {
                for i in 0..n {
                    series.log_ratio[i].push(f64::NAN);
                    series.sign[i].push(0);
                }
                series.product_lengths.push(None);
                series.invalid.push((m, reason));
            }
        }
    }
    Ok(series)
}

/// CSV `m,i,log_ratio,sign,diff` with 1-based `i`; `diff` is empty at the
/// first `m` and wherever a neighbour is invalid.
pub fn series_csv(series: &RatioSeries) -> String {
    let mut out = String::from("m,i,log_ratio,sign,diff\n");
    for m in 1..=series.m_max {
        if !series.is_valid(m) {
            continue;
        }
        for i in 0..series.n {
            let x = series.log_ratio[i][m - 1];
            let diff = if m > 1 && series.is_valid(m - 1) {
                fmt_sig(x - series.log_ratio[i][m - 2])
            } else {
                String::new()
            };
            let _ = writeln!(out, "{m},{},{},{},{diff}", i + 1, fmt_sig(x), series.sign[i][m - 1]);
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct ConvergenceConfig {
    /// Largest final successive difference that counts as converged.
    pub tail_tol: f64,
    /// Minimum `|r|` of the log-linear fit of the successive differences.
    pub min_correlation: f64,
    /// Noise floor relative to `1 + max_m |ℓ_i(αᵐβ)|`; differences below it
    /// are rounding noise and are left out of the fit.
    pub relative_noise: f64,
    /// Below this the Aitken step is skipped and the last value is used.
    pub aitken_floor: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            tail_tol: 1e-8,
            min_correlation: 0.99,
            relative_noise: 1e-13,
            aitken_floor: 1e-12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    /// Estimate of `ℓ_i(α̇)`.
    pub limit_estimate: Vec<f64>,
    /// Geometric decay factor `q` per step, if a fit was possible.
    pub rate: Vec<Option<f64>>,
    pub correlation: Vec<Option<f64>>,
    pub tail_residual: Vec<f64>,
    /// `exp(limit_estimate)`, the limit of `|λ_i(αᵐβ)| / |λ_i(α)|ᵐ`.
    pub ratio_limit: Vec<f64>,
    /// First `m` from which the clamped `|Δ|` sequence is nonincreasing.
    pub burn_in: Vec<usize>,
    pub noise_floor: Vec<f64>,
    pub converged: Vec<bool>,
}

impl ConvergenceReport {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

fn aitken(x: &[f64], floor: f64) -> f64 {
    let k = x.len();
    let last = x[k - 1];
    if k < 3 {
        return last;
    }
    let d1 = x[k - 2] - x[k - 3];
    let d2 = last - x[k - 2];
    let denom = d2 - d1;
    if d1.abs() < floor || d2.abs() < floor || denom == 0.0 {
        last
    } else {
        last - d2 * d2 / denom
    }
}

/// Least-squares slope and Pearson correlation of `ys` against `xs`.
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let corr = if syy == 0.0 { 0.0 } else { sxy / (sxx * syy).sqrt() };
    (slope, corr)
}

pub fn convergence_report(series: &RatioSeries) -> Result<ConvergenceReport> {
    convergence_report_with(series, &ConvergenceConfig::default())
}

pub fn convergence_report_with(series: &RatioSeries, config: &ConvergenceConfig) -> Result<ConvergenceReport> {
    // the longest run of consecutive valid m ending at m_max
    let mut start = series.m_max;
    while start > 1 && series.is_valid(start - 1) && series.is_valid(start) {
        start -= 1;
    }
    if !series.is_valid(series.m_max) || series.m_max + 1 - start < 8 {
        return Err(Error::InvalidArgument(format!(
            "need at least 8 consecutive valid m values ending at m_max, have {}",
            if series.is_valid(series.m_max) { series.m_max + 1 - start } else { 0 }
        )));
    }
    let ms: Vec<usize> = (start..=series.m_max).collect();
    let magnitude = ms
        .iter()
        .filter_map(|&m| series.product_lengths[m - 1].as_ref())
        .flat_map(|l| l.iter())
        .fold(0.0f64, |a, x| a.max(x.abs()));

    let mut report = ConvergenceReport {
        limit_estimate: Vec::new(),
        rate: Vec::new(),
        correlation: Vec::new(),
        tail_residual: Vec::new(),
        ratio_limit: Vec::new(),
        burn_in: Vec::new(),
        noise_floor: Vec::new(),
        converged: Vec::new(),
    };
    for i in 0..series.n {
        let xs: Vec<f64> = ms.iter().map(|&m| series.log_ratio[i][m - 1]).collect();
        let diffs: Vec<f64> = xs.windows(2).map(|p| p[1] - p[0]).collect();
        let floor = config.relative_noise * (1.0 + magnitude);
        let tail = diffs.last().map_or(0.0, |d| d.abs());

        // decaying region: differences up to the first one lost in noise
        let region = diffs.iter().take_while(|d| d.abs() > floor).count();
        let (rate, corr) = if region >= 3 {
            let take = (region / 2).max(3);
            let lo = region - take;
            let fx: Vec<f64> = (lo..region).map(|k| ms[k] as f64).collect();
            let fy: Vec<f64> = (lo..region).map(|k| diffs[k].abs().ln()).collect();
            let (slope, r) = linear_fit(&fx, &fy);
            (Some(slope.exp()), Some(r))
        } else {
            (None, None)
        };
        let converged = tail <= config.tail_tol
            && match (rate, corr) {
                (Some(q), Some(r)) => q < 1.0 && -r >= config.min_correlation,
                // fully converged before any fit was possible
                _ => true,
            };

        let clamped: Vec<f64> = diffs.iter().map(|d| d.abs().max(floor)).collect();
        let mut burn = clamped.len();
        while burn > 0 && clamped[burn - 1] >= clamped.get(burn).copied().unwrap_or(0.0) {
            burn -= 1;
        }
        // diffs[k] is x(ms[k+1]) − x(ms[k]); report the m at which it ends
        let burn_in_m = ms[(burn + 1).min(ms.len() - 1)];

        let limit = aitken(&xs, config.aitken_floor);
        report.limit_estimate.push(limit);
        report.ratio_limit.push(limit.exp());
        report.rate.push(rate);
        report.correlation.push(corr);
        report.tail_residual.push(tail);
        report.burn_in.push(burn_in_m);
        report.noise_floor.push(floor);
        report.converged.push(converged);
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct DerivativeReport {
    /// `m·(ℓ_i(α_{1/m}) − ℓ_i(α))` at `[i][m − 1]`, NaN if invalid.
    pub difference_quotient: Vec<Vec<f64>>,
    /// Largest `|difference_quotient − log_ratio|`.
    pub max_identity_error: f64,
    /// Largest disagreement between the series' lengths of `αᵐβ` and an
    /// independent periodic-QR computation.
    pub max_cross_route_error: f64,
    /// The directional derivative `ℓ_i(α̇)`.
    pub derivative: Vec<f64>,
    pub convergence: ConvergenceReport,
    /// Sign sequences `sign[i][m − 1]`, reported as observed.
    pub signs: Vec<Vec<i8>>,
    /// Whether the last quarter of each sign sequence is constant.
    pub signs_settled: Vec<bool>,
}

impl DerivativeReport {
    pub fn identity_holds(&self, tol: f64) -> bool {
        self.max_identity_error <= tol
    }
}

/// Difference-quotient reading of the series through `current_length` on
/// `α_{1/m} = (1/m)·αᵐβ`.
pub fn derivative_consistency(rep: &SurfaceRep, alpha: &Word, beta: &Word, m_max: usize) -> Result<DerivativeReport> {
    let series = ratio_series(rep, alpha, beta, m_max)?;
    let convergence = convergence_report(&series)?;
    let n = series.n;
    let alpha_class = conjugacy_class(alpha)?;
    let mut table = LengthTable::new(n);
    table.insert(alpha_class.clone(), LengthVector::new(series.alpha_lengths.clone()));
    let alpha_combo = CurrentCombo::singleton(alpha_class, 1.0);

    let mut quotient = vec![vec![f64::NAN; m_max]; n];
    let mut max_identity_error = 0.0f64;
    let mut max_cross_route_error = 0.0f64;
    for m in 1..=m_max {
        let Some(lengths) = &series.product_lengths[m - 1] else {
            continue;
        };
        let word = series.product_word(m);
        let class = conjugacy_class(&word)?;
        table.insert(class.clone(), LengthVector::new(lengths.clone()));
        let scaled = CurrentCombo::singleton(class, 1.0 / m as f64);
        let independent = length_vector(rep, &word)?;
        for i in 0..n {
            let q = m as f64 * (current_length(&table, &scaled, i)? - current_length(&table, &alpha_combo, i)?);
            quotient[i][m - 1] = q;
            max_identity_error = max_identity_error.max((q - series.log_ratio[i][m - 1]).abs());
            max_cross_route_error = max_cross_route_error.max((independent[i] - lengths[i]).abs());
        }
    }
    let quarter = (m_max / 4).max(1);
    let signs_settled = series
        .sign
        .iter()
        .map(|s| {
            let tail: Vec<i8> = s[m_max - quarter..].iter().copied().filter(|&x| x != 0).collect();
            tail.windows(2).all(|p| p[0] == p[1])
        })
        .collect();
    Ok(DerivativeReport {
        difference_quotient: quotient,
        max_identity_error,
        max_cross_route_error,
        derivative: convergence.limit_estimate.clone(),
        convergence,
        signs: series.sign.clone(),
        signs_settled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aitken_is_exact_on_geometric_sequences() {
        let xs: Vec<f64> = (0..6).map(|k| 2.0 + 0.5f64.powi(k)).collect();
        assert!((aitken(&xs, 1e-12) - 2.0).abs() < 1e-12);
        assert_eq!(aitken(&[1.0, 1.0, 1.0], 1e-12), 1.0);
    }

    #[test]
    fn fit_of_exact_exponential() {
        let xs: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 0.7 * x).collect();
        let (slope, r) = linear_fit(&xs, &ys);
        assert!((slope + 0.7).abs() < 1e-12);
        assert!((r + 1.0).abs() < 1e-12);
    }
}
