//! Measures over the outcome probabilities of a single measurement.
//!
//! Besides Shannon entropy the module provides the quadratic measures used
//! throughout the crate: the uncertainty `U = 1 − Σ pⱼ²` and the normalized
//! information `I = 𝒩 Σ (pⱼ − 1/n)²`, which vanishes for a uniform
//! distribution and is maximal for a certain outcome.

use crate::tolerance::TOL;
use crate::{Error, Result};

/// Outcome probabilities of one measurement context.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    p: Vec<f64>,
}

impl ProbabilityVector {
    /// Validate a distribution: at least two outcomes, entries in [0, 1] and
    /// unit sum, both up to the probability tolerance.
    ///
    /// Entries within tolerance of the interval are clamped onto it; the
    /// vector is never rescaled.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        let tol = TOL.probability;
        if p.len() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "need at least two outcomes, got {}",
                p.len()
            )));
        }
        if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < -tol || **x > 1.0 + tol) {
            return Err(Error::InvalidDistribution(format!(
                "probability {bad} outside [0, 1]"
            )));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {sum}")));
        }
        Ok(Self {
            p: p.into_iter().map(|x| x.clamp(0.0, 1.0)).collect(),
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    /// Distribution with probability one on outcome `k`.
    pub fn deterministic(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidParameter(format!("outcome {k} of {n}")));
        }
        let mut p = vec![0.0; n];
        p[k] = 1.0;
        Self::new(p)
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.p
    }
}

/// How the quadratic information measure is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationScheme {
    /// 𝒩 = n/(n−1): a certain outcome carries information 1.
    #[default]
    Unit,
    /// 𝒩 = 2ᵏ·k/(2ᵏ−1) for n = 2ᵏ: a certain outcome carries k bits.
    Bits,
}

impl NormalizationScheme {
    /// The factor 𝒩 for `n` outcomes.
    pub fn factor(self, n: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("outcome count {n} < 2")));
        }
        let nf = n as f64;
        match self {
            NormalizationScheme::Unit => Ok(nf / (nf - 1.0)),
            NormalizationScheme::Bits => {
                if !n.is_power_of_two() {
                    return Err(Error::BitsModeRequiresPowerOfTwo(n));
                }
                let k = n.trailing_zeros() as f64;
                Ok(nf * k / (nf - 1.0))
            }
        }
    }

    /// Value of the measure for a deterministic distribution.
    pub fn maximum(self, n: usize) -> Result<f64> {
        match self {
            NormalizationScheme::Unit => {
                self.factor(n)?;
                Ok(1.0)
            }
            NormalizationScheme::Bits => {
                self.factor(n)?;
                Ok(n.trailing_zeros() as f64)
            }
        }
    }
}

impl std::str::FromStr for NormalizationScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Self::Unit),
            "bits" => Ok(Self::Bits),
            other => Err(Error::InvalidParameter(format!(
                "unknown normalization '{other}', expected 'unit' or 'bits'"
            ))),
        }
    }
}

/// Shannon entropy in bits, with 0·log 0 = 0.
pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    -p.p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

/// U = Σ pⱼ(1 − pⱼ) = 1 − Σ pⱼ².
pub fn uncertainty(p: &ProbabilityVector) -> f64 {
    1.0 - p.p.iter().map(|x| x * x).sum::<f64>()
}

/// I = 𝒩 Σ (pⱼ − 1/n)².
pub fn info_measure(p: &ProbabilityVector, scheme: NormalizationScheme) -> Result<f64> {
    let n = p.len();
    let norm = scheme.factor(n)?;
    let centre = 1.0 / n as f64;
    Ok(norm * p.p.iter().map(|x| (x - centre) * (x - centre)).sum::<f64>())
}

/// Signed and squared information of a two-outcome measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryInfo {
    /// i = p₁ − p₂.
    pub i: f64,
    /// I = i².
    pub info: f64,
}

pub fn binary_info(p: &ProbabilityVector) -> Result<BinaryInfo> {
    match p.as_slice() {
        &[p1, p2] => {
            let i = p1 - p2;
            Ok(BinaryInfo { i, info: i * i })
        }
        other => Err(Error::NotBinary(other.len())),
    }
}
