use serde::Serialize;

use crate::error::{Error, Result};

/// Samples `(ε, content)` of an ε → 0 family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContentSeries {
    samples: Vec<(f64, f64)>,
    reference: Option<f64>,
}

impl ContentSeries {
    /// `ε` must be strictly positive and strictly decreasing; values finite and `>= 0`.
    pub fn new(samples: Vec<(f64, f64)>, reference: Option<f64>) -> Result<Self> {
        if samples.iter().any(|&(e, _)| !(e.is_finite() && e > 0.0)) {
            return Err(Error::BadConfig("epsilon values must be positive".into()));
        }
        if samples.windows(2).any(|w| w[1].0 >= w[0].0) {
            return Err(Error::BadConfig("epsilon values must be strictly decreasing".into()));
        }
        if samples.iter().any(|&(_, v)| !v.is_finite() || v < 0.0) {
            return Err(Error::BadConfig("content values must be finite and nonnegative".into()));
        }
        Ok(Self { samples, reference })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn reference(&self) -> Option<f64> {
        self.reference
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub limit_estimate: f64,
    pub slope: f64,
    pub max_residual: f64,
}

/// Least-squares line `value ≈ limit + slope · ε`.
pub fn fit_linear(series: &ContentSeries) -> Result<FitResult> {
    let s = series.samples();
    if s.len() < 2 {
        return Err(Error::TooFewSamples(s.len()));
    }
    let n = s.len() as f64;
    let mx = s.iter().map(|p| p.0).sum::<f64>() / n;
    let my = s.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = s.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = s.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let limit_estimate = my - slope * mx;
    let max_residual = s
        .iter()
        .map(|&(e, v)| (v - limit_estimate - slope * e).abs())
        .fold(0.0, f64::max);
    Ok(FitResult {
        limit_estimate,
        slope,
        max_residual,
    })
}
