//! Randomized exploration of apparatus space: Haar fuzzing of the class-count
//! ceilings and a Givens-rotation hill climb that tries to maximize class count.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apparatus::{haar_random, haar_random_separate, seeded_rng, Apparatus, CMatrix};
use crate::bellcore::VarCount;
use crate::detection::Statistics;
use crate::error::{LabError, Result};
use crate::partition::{partition_of, BoundMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub n: VarCount,
    pub stats: Statistics,
    pub trials: usize,
    pub seed: u64,
    pub mode: BoundMode,
}

impl CampaignConfig {
    pub fn new(n: VarCount, stats: Statistics, trials: usize, seed: u64, mode: BoundMode) -> Result<Self> {
        if trials == 0 {
            return Err(LabError::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(Self { n, stats, trials, seed, mode })
    }

    fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }

    fn sample(&self, trial: usize) -> Apparatus {
        match self.mode {
            BoundMode::OneCopy => haar_random(self.n, self.trial_seed(trial)),
            BoundMode::SeparateChannel => haar_random_separate(self.n, self.trial_seed(trial)),
        }
    }
}

/// A trial whose class count exceeded the ceiling for its mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: usize,
    pub class_count: usize,
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub bound: usize,
    /// class count -> number of trials
    pub histogram: BTreeMap<usize, usize>,
    pub max_observed: usize,
    pub violations: Vec<Violation>,
    /// Lowest-index trial that reached `max_observed`.
    pub best_trial: usize,
    pub best_apparatus: Apparatus,
}

impl CampaignReport {
    fn assemble(config: CampaignConfig, results: Vec<(usize, Apparatus, Vec<Violation>)>) -> Self {
        let bound = config.mode.bound(config.n);
        let mut histogram = BTreeMap::new();
        let mut violations = Vec::new();
        let mut best: Option<(usize, usize)> = None;
        for (trial, (count, _, v)) in results.iter().enumerate() {
            *histogram.entry(*count).or_insert(0) += 1;
            violations.extend(v.iter().cloned());
            if best.is_none_or(|(c, _)| *count > c) {
                best = Some((*count, trial));
            }
        }
        let (max_observed, best_trial) = best.expect("at least one trial");
        let best_apparatus = results
            .into_iter()
            .nth(best_trial)
            .map(|(_, app, _)| app)
            .expect("best trial exists");
        Self {
            config,
            bound,
            histogram,
            max_observed,
            violations,
            best_trial,
            best_apparatus,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Partitions `cfg.trials` Haar samples (trial `t` uses seed `cfg.seed + t`)
/// and flags any class count above the mode's ceiling.
pub fn bound_campaign(cfg: &CampaignConfig) -> CampaignReport {
    let bound = cfg.mode.bound(cfg.n);
    let results: Vec<_> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let app = cfg.sample(trial);
            let count = partition_of(&app, cfg.stats).class_count();
            let violation = (count > bound).then_some(Violation {
                trial,
                class_count: count,
                bound,
            });
            (count, app, violation.into_iter().collect())
        })
        .collect();
    CampaignReport::assemble(*cfg, results)
}

/// Left-multiplies rows `p`, `q` of `u` by a Givens rotation with angle
/// `theta` and phase `phi`.
pub fn apply_givens(u: &mut CMatrix, p: usize, q: usize, theta: f64, phi: f64) {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    for m in 0..u.ncols() {
        let (up, uq) = (u[(p, m)], u[(q, m)]);
        u[(p, m)] = up * c - e * uq * s;
        u[(q, m)] = e.conj() * up * s + uq * c;
    }
}

fn perturb<R: Rng + ?Sized>(current: &Apparatus, mode: BoundMode, step_scale: f64, rng: &mut R) -> Apparatus {
    let dim = current.dim();
    let (p, q) = loop {
        let p = rng.random_range(0..dim);
        let q = rng.random_range(0..dim);
        // separate-channel search stays block diagonal: only rotate outputs of one channel
        let same_channel = p % 2 == q % 2;
        if p != q && (mode == BoundMode::OneCopy || same_channel) {
            break (p, q);
        }
    };
    let theta = step_scale * rng.random_range(-1.0..=1.0);
    let phi = rng.random_range(0.0..std::f64::consts::TAU);
    let mut u = current.matrix().clone();
    apply_givens(&mut u, p, q, theta, phi);
    Apparatus::from_parts(current.n(), u)
}

/// Random-restart hill climb on class count.
///
/// `cfg.trials` restarts are run; the first `warm_starts.len()` begin from the
/// given apparatuses, the rest from Haar samples (block diagonal in
/// separate-channel mode). Each restart proposes `budget` Givens
/// perturbations and keeps any that do not lower the class count.
pub fn hill_climb(cfg: &CampaignConfig, budget: usize, step_scale: f64, warm_starts: &[Apparatus]) -> Result<CampaignReport> {
    if budget == 0 {
        return Err(LabError::InvalidConfig("budget must be at least 1".into()));
    }
    if !(step_scale >= 0.0 && step_scale.is_finite()) {
        return Err(LabError::InvalidConfig(format!("invalid step scale {step_scale}")));
    }
    if let Some(bad) = warm_starts.iter().find(|a| a.n() != cfg.n) {
        return Err(LabError::DimensionMismatch {
            expected: cfg.n.modes(),
            found: bad.dim(),
        });
    }
    let bound = cfg.mode.bound(cfg.n);
    let results: Vec<_> = (0..cfg.trials)
        .into_par_iter()
        .map(|restart| {
            let mut current = warm_starts.get(restart).cloned().unwrap_or_else(|| cfg.sample(restart));
            let mut count = partition_of(&current, cfg.stats).class_count();
            let mut violations = Vec::new();
            let flag = |count: usize, violations: &mut Vec<Violation>| {
                if count > bound && violations.is_empty() {
                    violations.push(Violation {
                        trial: restart,
                        class_count: count,
                        bound,
                    });
                }
            };
            flag(count, &mut violations);
            let mut rng = seeded_rng(cfg.trial_seed(restart) ^ 0x9e37_79b9_7f4a_7c15);
            for _ in 0..budget {
                let candidate = perturb(&current, cfg.mode, step_scale, &mut rng);
                let c = partition_of(&candidate, cfg.stats).class_count();
                flag(c, &mut violations);
                if c >= count {
                    current = candidate;
                    count = c;
                }
            }
            (count, current, violations)
        })
        .collect();
    Ok(CampaignReport::assemble(*cfg, results))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apparatus::{check_unitary, hadamard_lr, SAMPLED_TOL};

    fn cfg(n: usize, trials: usize, seed: u64, mode: BoundMode) -> CampaignConfig {
        CampaignConfig::new(VarCount::new(n).unwrap(), Statistics::Boson, trials, seed, mode).unwrap()
    }

    #[test]
    fn zero_trials_rejected() {
        let n = VarCount::new(1).unwrap();
        assert!(CampaignConfig::new(n, Statistics::Boson, 0, 1, BoundMode::OneCopy).is_err());
    }

    #[test]
    fn campaign_histogram_sums_to_trials() {
        let r = bound_campaign(&cfg(1, 50, 3, BoundMode::OneCopy));
        assert_eq!(r.histogram.values().sum::<usize>(), 50);
        assert!(r.max_observed <= 3);
        assert!(r.is_clean());
        let best = partition_of(&r.best_apparatus, Statistics::Boson).class_count();
        assert_eq!(best, r.max_observed);
    }

    #[test]
    fn campaign_is_reproducible() {
        let c = cfg(2, 8, 77, BoundMode::OneCopy);
        assert_eq!(bound_campaign(&c), bound_campaign(&c));
    }

    #[test]
    fn givens_keeps_unitarity() {
        let mut u = hadamard_lr(VarCount::new(2).unwrap()).into_matrix();
        apply_givens(&mut u, 0, 5, 0.3, 1.1);
        apply_givens(&mut u, 2, 1, -1.2, 4.0);
        let app = Apparatus::new(VarCount::new(2).unwrap(), u, 1e-12);
        assert!(app.is_ok());
    }

    #[test]
    fn zero_step_leaves_apparatus() {
        let h = hadamard_lr(VarCount::new(1).unwrap());
        let r = hill_climb(&cfg(1, 1, 5, BoundMode::OneCopy), 20, 0.0, std::slice::from_ref(&h)).unwrap();
        assert_eq!(r.best_apparatus, h);
        assert_eq!(r.max_observed, 3);
    }

    #[test]
    fn warm_start_reaches_optimum() {
        let h = hadamard_lr(VarCount::new(1).unwrap());
        let r = hill_climb(&cfg(1, 3, 9, BoundMode::OneCopy), 100, 0.2, &[h]).unwrap();
        assert_eq!(r.max_observed, 3);
        assert!(r.is_clean());
        assert!(check_unitary(&r.best_apparatus, SAMPLED_TOL).pass);
    }

    #[test]
    fn separate_climb_stays_block_diagonal() {
        let r = hill_climb(&cfg(1, 2, 4, BoundMode::SeparateChannel), 100, 0.5, &[]).unwrap();
        assert!(r.best_apparatus.is_channel_separated());
        assert!(r.max_observed <= 2);
    }

    #[test]
    fn bad_arguments() {
        let c = cfg(1, 1, 1, BoundMode::OneCopy);
        assert!(hill_climb(&c, 0, 0.1, &[]).is_err());
        assert!(hill_climb(&c, 1, -0.1, &[]).is_err());
        assert!(hill_climb(&c, 1, 0.1, &[hadamard_lr(VarCount::new(2).unwrap())]).is_err());
    }
}
