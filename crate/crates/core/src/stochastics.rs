//! Seeded Stern–Gerlach trials.
//!
//! A spin prepared along z and measured along a direction at angle θ lands
//! "up" with p = cos²(θ/2). Every run draws from `ChaCha8Rng` seeded with
//! `seed_from_u64(seed)` on stream `run_index`, so a run is reproducible on its
//! own and runs can be simulated in any order or in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result};

/// Outcome count of N independent trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialRun {
    pub theta: f64,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    /// Number of "up" outcomes, L.
    pub successes: u64,
}

impl TrialRun {
    pub fn fraction(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// p = cos²(θ/2).
pub fn up_probability(theta: f64) -> f64 {
    let c = (0.5 * theta).cos();
    (c * c).clamp(0.0, 1.0)
}

pub fn generator(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn count_successes<R: Rng>(p: f64, trials: u64, rng: &mut R) -> u64 {
    (0..trials).filter(|_| rng.random::<f64>() < p).count() as u64
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("angle {theta} is not finite")))
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    Ok(())
}

/// One run of `trials` measurements on stream 0 of `seed`.
pub fn simulate_sg(theta: f64, trials: u64, seed: u64) -> Result<TrialRun> {
    simulate_sg_stream(theta, trials, seed, 0)
}

pub fn simulate_sg_stream(theta: f64, trials: u64, seed: u64, stream: u64) -> Result<TrialRun> {
    check_theta(theta)?;
    check_trials(trials)?;
    let p = up_probability(theta);
    let successes = count_successes(p, trials, &mut generator(seed, stream));
    Ok(TrialRun {
        theta,
        p,
        trials,
        seed,
        successes,
    })
}

/// U = σ²/N = p(1 − p).
pub fn per_trial_uncertainty(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
    }
    Ok(p * (1.0 - p))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevReport {
    pub theta: f64,
    pub p: f64,
    pub trials: u64,
    pub k: f64,
    pub runs: u64,
    pub seed: u64,
    /// σ = √(p(1 − p)N).
    pub sigma: f64,
    /// 1/k².
    pub bound: f64,
    /// Runs with |L − pN| > kσ.
    pub violations: u64,
    pub empirical_violation_rate: f64,
    /// bound + 3·√(bound/runs).
    pub slack_limit: f64,
    pub within_bound: bool,
    /// Mean of L/N over all runs.
    pub mean_fraction: f64,
}

/// Simulates `runs` independent runs (run r on stream r) and counts how often
/// the deviation |L − pN| exceeds kσ.
pub fn chebyshev_report(theta: f64, trials: u64, k: f64, runs: u64, seed: u64) -> Result<ChebyshevReport> {
    check_theta(theta)?;
    check_trials(trials)?;
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!("k = {k} must be positive")));
    }
    if runs < 100 {
        return Err(Error::InvalidParameter(format!("need at least 100 runs, got {runs}")));
    }
    let p = up_probability(theta);
    let n = trials as f64;
    let sigma = (p * (1.0 - p) * n).sqrt();
    let counts: Vec<u64> = (0..runs)
        .into_par_iter()
        .map(|r| count_successes(p, trials, &mut generator(seed, r)))
        .collect();
    let violations = counts
        .iter()
        .filter(|&&l| (l as f64 - p * n).abs() > k * sigma)
        .count() as u64;
    let bound = 1.0 / (k * k);
    let rate = violations as f64 / runs as f64;
    let slack_limit = bound + 3.0 * (bound / runs as f64).sqrt();
    Ok(ChebyshevReport {
        theta,
        p,
        trials,
        k,
        runs,
        seed,
        sigma,
        bound,
        violations,
        empirical_violation_rate: rate,
        slack_limit,
        within_bound: rate <= slack_limit,
        mean_fraction: counts.iter().sum::<u64>() as f64 / (n * runs as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{Binomial, DiscreteCDF};
    use std::f64::consts::PI;

    #[test]
    fn degenerate_angles() {
        let up = simulate_sg(0.0, 1000, 1).unwrap();
        assert_eq!(up.successes, 1000);
        let down = simulate_sg(PI, 1000, 1).unwrap();
        assert_eq!(down.successes, 0);
    }

    #[test]
    fn same_seed_same_run() {
        let a = simulate_sg(1.1, 5000, 77).unwrap();
        let b = simulate_sg(1.1, 5000, 77).unwrap();
        assert_eq!(a, b);
        let c = simulate_sg_stream(1.1, 5000, 77, 1).unwrap();
        assert_ne!(a.successes, c.successes);
    }

    #[test]
    fn half_angle_concentration() {
        let inside = (0..200u64)
            .filter(|&seed| {
                let f = simulate_sg(PI / 2.0, 10_000, seed).unwrap().fraction();
                (0.48..=0.52).contains(&f)
            })
            .count();
        assert!(inside >= 198, "{inside} of 200");
    }

    #[test]
    fn invalid_inputs() {
        assert!(simulate_sg(0.3, 0, 1).is_err());
        assert!(simulate_sg(f64::NAN, 10, 1).is_err());
        assert!(chebyshev_report(0.3, 100, 0.0, 100, 1).is_err());
        assert!(chebyshev_report(0.3, 100, 2.0, 99, 1).is_err());
        assert!(per_trial_uncertainty(1.5).is_err());
    }

    #[test]
    fn uncertainty_examples() {
        assert_eq!(per_trial_uncertainty(0.5).unwrap(), 0.25);
        assert_eq!(per_trial_uncertainty(1.0).unwrap(), 0.0);
        assert!((per_trial_uncertainty(0.9).unwrap() - 0.09).abs() < 1e-15);
        for n in [1u64, 10, 10_000] {
            let p = 0.3;
            let u = per_trial_uncertainty(p).unwrap();
            let sigma = (p * (1.0 - p) * n as f64).sqrt();
            assert!((sigma * sigma - n as f64 * u).abs() < 1e-12 * n as f64);
        }
    }

    #[test]
    fn report_fields() {
        let r = chebyshev_report(PI / 2.0, 10_000, 2.0, 100, 5).unwrap();
        assert!((r.sigma - 50.0).abs() < 1e-9);
        assert_eq!(r.bound, 0.25);
        let r = chebyshev_report(0.0, 10_000, 2.0, 100, 5).unwrap();
        assert_eq!((r.sigma, r.violations), (0.0, 0));
    }

    /// P(|L − pN| > kσ) for L ~ Binomial(N, p).
    fn exact_tail(p: f64, n: u64, k: f64) -> f64 {
        let sigma = (p * (1.0 - p) * n as f64).sqrt();
        let centre = p * n as f64;
        let lo = (centre - k * sigma).ceil() as u64; // L < lo violates
        let hi = (centre + k * sigma).floor() as u64; // L > hi violates
        let b = Binomial::new(p, n).unwrap();
        let below = if lo == 0 { 0.0 } else { b.cdf(lo - 1) };
        below + b.sf(hi)
    }

    #[test]
    fn violation_rate_matches_binomial_tail() {
        let q = exact_tail(0.5, 10_000, 2.0);
        assert!((q - 0.0455).abs() < 2e-3, "{q}");
        let r = chebyshev_report(PI / 2.0, 10_000, 2.0, 1000, 11).unwrap();
        let spread = 4.0 * (q * (1.0 - q) / 1000.0).sqrt();
        assert!((r.empirical_violation_rate - q).abs() < spread);
        assert!(r.within_bound);
    }

    #[test]
    fn mean_converges_to_p() {
        for (seed, theta) in [(3u64, PI / 4.0), (4, 2.0)] {
            let r = chebyshev_report(theta, 2000, 2.0, 400, seed).unwrap();
            let sigma_frac = (r.p * (1.0 - r.p) / 2000.0).sqrt();
            assert!((r.mean_fraction - r.p).abs() < 4.0 * sigma_frac / (400f64).sqrt());
        }
    }

    #[test]
    fn report_is_deterministic() {
        let a = chebyshev_report(1.0, 500, 1.5, 200, 9).unwrap();
        let b = chebyshev_report(1.0, 500, 1.5, 200, 9).unwrap();
        assert_eq!(a, b);
    }
}
