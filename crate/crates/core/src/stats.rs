//! Correlations, histograms and the log-frequency versus complexity fit.

use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrelationMethod {
    Pearson,
    /// Pearson on tie-averaged ranks.
    Spearman,
}

impl FromStr for CorrelationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pearson" => Ok(CorrelationMethod::Pearson),
            "spearman" => Ok(CorrelationMethod::Spearman),
            _ => Err(Error::Config(format!("unknown correlation method `{s}`"))),
        }
    }
}

/// 1-based ranks with ties given their average rank.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j + 1) as f64 / 2.0;
        for &k in &idx[i..j] {
            out[k] = avg;
        }
        i = j;
    }
    out
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("a column is constant"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Needs at least 3 paired, finite values and non-constant columns.
pub fn correlate(x: &[f64], y: &[f64], method: CorrelationMethod) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Config(format!("column lengths differ: {} and {}", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(Error::UndefinedCorrelation("fewer than 3 rows"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::UndefinedCorrelation("non-finite value"));
    }
    match method {
        CorrelationMethod::Pearson => pearson(x, y),
        CorrelationMethod::Spearman => pearson(&ranks(x), &ranks(y)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    pub proportion: f64,
}

/// Equal-width histogram over `[min, max]`; the last bin is closed. All
/// values equal gives a single bin.
pub fn density(values: &[f64], bins: usize) -> Result<Vec<DensityBin>> {
    if values.is_empty() {
        return Err(Error::Config("no values".into()));
    }
    if bins == 0 {
        return Err(Error::Config("bins must be at least 1".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("non-finite value".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total = values.len() as f64;
    if lo == hi {
        return Ok(vec![DensityBin {
            lo,
            hi,
            count: values.len() as u64,
            proportion: 1.0,
        }]);
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for v in values {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| DensityBin {
            lo: lo + i as f64 * width,
            hi: if i + 1 == bins { hi } else { lo + (i + 1) as f64 * width },
            count: c,
            proportion: c as f64 / total,
        })
        .collect())
}

/// Least-squares line of `log2(frequency)` against complexity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DingleFit {
    pub slope: f64,
    pub intercept: f64,
    /// Spearman correlation of `log2(frequency)` with complexity.
    pub spearman: f64,
    pub n_points: usize,
}

/// `points` are `(complexity, frequency)` pairs with frequency > 0.
pub fn dingle_fit(points: &[(f64, f64)]) -> Result<DingleFit> {
    if points.iter().any(|&(_, f)| f <= 0.0 || !f.is_finite()) {
        return Err(Error::Config("frequencies must be positive".into()));
    }
    let k: Vec<f64> = points.iter().map(|p| p.0).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.log2()).collect();
    let spearman = correlate(&y, &k, CorrelationMethod::Spearman)?;
    let n = k.len() as f64;
    let mk = k.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = k.iter().zip(&y).map(|(a, b)| (a - mk) * (b - my)).sum();
    let sxx: f64 = k.iter().map(|a| (a - mk) * (a - mk)).sum();
    let slope = sxy / sxx;
    Ok(DingleFit {
        slope,
        intercept: my - slope * mk,
        spearman,
        n_points: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tied_ranks() {
        assert_eq!(ranks(&[3.0, 1.0, 3.0, 2.0]), [3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn known_correlations() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [2.0, 4.0, 6.0, 8.0, 10.0];
        assert!((correlate(&x, &y, CorrelationMethod::Pearson).unwrap() - 1.0).abs() < 1e-12);
        let z = [1.0, 8.0, 27.0, 64.0, 125.0];
        assert_eq!(correlate(&x, &z, CorrelationMethod::Spearman).unwrap(), 1.0);
        let w = [5.0, 4.0, 3.0, 2.0, 1.0];
        assert_eq!(correlate(&x, &w, CorrelationMethod::Spearman).unwrap(), -1.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            correlate(&[1.0, 2.0], &[1.0, 2.0], CorrelationMethod::Pearson),
            Err(Error::UndefinedCorrelation(_))
        ));
        assert!(matches!(
            correlate(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], CorrelationMethod::Spearman),
            Err(Error::UndefinedCorrelation(_))
        ));
    }

    #[test]
    fn histogram() {
        let bins = density(&[0.0, 0.1, 0.5, 1.0], 2).unwrap();
        assert_eq!(bins.iter().map(|b| b.count).collect::<Vec<_>>(), [2, 2]);
        assert_eq!(bins[1].hi, 1.0);
        let flat = density(&[2.0, 2.0], 10).unwrap();
        assert_eq!(flat.len(), 1);
        assert_eq!(flat[0].proportion, 1.0);
    }

    #[test]
    fn line_fit() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (k as f64, 2f64.powi(-2 * k + 1))).collect();
        let fit = dingle_fit(&pts).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert_eq!(fit.spearman, -1.0);
    }
}
