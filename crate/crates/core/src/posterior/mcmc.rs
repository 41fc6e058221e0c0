//! Adaptive random-walk Metropolis on `(atoms, weights)`.
//!
//! Atoms move inside the prior box with reflection at the walls (a symmetric
//! proposal). Weights move in additive log-ratio coordinates
//! `zᵢ = log(pᵢ/p_k)`, whose change of variables adds `Σᵢ log pᵢ` to the
//! target. The two blocks have separate scales, tuned toward the target
//! acceptance during burn-in and frozen afterwards.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{prior_sample, Likelihood, PriorSpec};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::measures::{atom_and_weight_distances, distance_dn, MixingMeasure};
use crate::products::ExchangeableDataset;
use crate::stats::quantile;

pub const QUANTILE_LEVELS: [f64; 3] = [0.5, 0.9, 0.95];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McmcConfig {
    /// Total iterations, burn-in included.
    pub iterations: usize,
    pub burn_in_fraction: f64,
    pub target_acceptance: f64,
    /// Iterations per adaptation batch.
    pub adapt_interval: usize,
    /// Initial atom step as a fraction of each box side; also the initial
    /// log-ratio step.
    pub initial_scale: f64,
    /// Consecutive all-rejected iterations tolerated before giving up.
    pub rejection_window: usize,
    pub thin: usize,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig {
            iterations: 20_000,
            burn_in_fraction: 0.25,
            target_acceptance: 0.23,
            adapt_interval: 50,
            initial_scale: 0.1,
            rejection_window: 5_000,
            thin: 1,
        }
    }
}

impl McmcConfig {
    pub fn burn_in(&self) -> usize {
        (self.iterations as f64 * self.burn_in_fraction).floor() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.burn_in_fraction) {
            return Err(Error::InvalidConfig("burn_in_fraction must lie in [0, 1)".into()));
        }
        if self.iterations == 0 || self.iterations <= self.burn_in() {
            return Err(Error::InvalidConfig("chain has no post-burn-in iterations".into()));
        }
        if self.thin == 0 || self.adapt_interval == 0 || self.rejection_window == 0 {
            return Err(Error::InvalidConfig("thin, adapt_interval and rejection_window must be ≥ 1".into()));
        }
        if !(self.target_acceptance > 0.0 && self.target_acceptance < 1.0) {
            return Err(Error::InvalidConfig("target_acceptance must lie in (0, 1)".into()));
        }
        if !(self.initial_scale > 0.0 && self.initial_scale.is_finite()) {
            return Err(Error::InvalidConfig("initial_scale must be positive".into()));
        }
        Ok(())
    }
}

/// Proposal scales at the end of an adaptation batch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaleSnapshot {
    pub iteration: usize,
    pub atom_scale: f64,
    pub weight_scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Chain {
    /// Post-burn-in draws, canonicalized.
    pub draws: Vec<MixingMeasure>,
    /// Fraction of accepted proposals after burn-in, both blocks pooled.
    pub acceptance_rate: f64,
    pub scale_trace: Vec<ScaleSnapshot>,
    pub seed: u64,
    pub burn_in: usize,
}

impl Chain {
    /// Values of a scalar functional along the chain.
    pub fn trace(&self, f: impl Fn(&MixingMeasure) -> f64) -> Vec<f64> {
        self.draws.iter().map(f).collect()
    }
}

fn reflect(x: f64, lo: f64, hi: f64) -> f64 {
    let w = hi - lo;
    let mut y = (x - lo).rem_euclid(2.0 * w);
    if y > w {
        y = 2.0 * w - y;
    }
    lo + y
}

fn weights_from_alr(z: &[f64]) -> Vec<f64> {
    let mut logits: Vec<f64> = z.to_vec();
    logits.push(0.0);
    let mx = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|v| (v - mx).exp()).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|v| v / total).collect()
}

struct Target<'a> {
    likelihood: Likelihood<'a>,
    prior: &'a PriorSpec,
    kernel: Kernel,
}

impl Target<'_> {
    /// Log target in `(atoms, z)` coordinates.
    fn eval(&self, atoms: &[Vec<f64>], z: &[f64]) -> (f64, Option<MixingMeasure>) {
        let w = weights_from_alr(z);
        let Ok(g) = MixingMeasure::new(atoms.to_vec(), w) else {
            return (f64::NEG_INFINITY, None);
        };
        if !self.prior.supports(&g, &self.kernel) {
            return (f64::NEG_INFINITY, None);
        }
        let jac: f64 = g.weights().iter().map(|p| p.ln()).sum();
        let v = self.likelihood.log_likelihood(&g) + jac;
        if v.is_nan() {
            return (f64::NEG_INFINITY, None);
        }
        (v, Some(g))
    }
}

/// Runs the sampler for a `k0`-atom posterior. Deterministic given `seed`.
pub fn mcmc_run(
    dataset: &ExchangeableDataset,
    kernel: &Kernel,
    prior: &PriorSpec,
    k0: usize,
    config: &McmcConfig,
    seed: u64,
) -> Result<Chain> {
    config.validate()?;
    prior.validate(kernel)?;
    if dataset.m() == 0 {
        return Err(Error::InvalidConfig("dataset is empty".into()));
    }
    dataset.validate_for(kernel)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = Target { likelihood: Likelihood::new(dataset, kernel), prior, kernel: *kernel };

    // Start from a prior draw with finite target.
    let (mut atoms, mut z, mut cur_lp, mut cur_g) = {
        let mut found = None;
        for _ in 0..1000 {
            let g0 = prior_sample(prior, k0, &mut rng)?;
            let pk = g0.weights()[k0 - 1];
            let z: Vec<f64> = g0.weights()[..k0 - 1].iter().map(|p| (p / pk).ln()).collect();
            let atoms = g0.atoms().to_vec();
            if let (lp, Some(g)) = target.eval(&atoms, &z) {
                if lp.is_finite() {
                    found = Some((atoms, z, lp, g));
                    break;
                }
            }
        }
        found.ok_or_else(|| Error::InvalidConfig("no prior draw has positive posterior density".into()))?
    };

    let widths: Vec<f64> = prior.bounds.iter().map(|(lo, hi)| hi - lo).collect();
    let mut log_scale = [config.initial_scale.ln(), config.initial_scale.ln()];
    let blocks = if k0 > 1 { 2 } else { 1 };
    let burn_in = config.burn_in();
    let mut batch_acc = [0usize; 2];
    let mut batch_index = 0usize;
    let mut post_acc = 0usize;
    let mut post_prop = 0usize;
    let mut since_accept = 0usize;
    let mut draws = Vec::with_capacity((config.iterations - burn_in) / config.thin + 1);
    let mut scale_trace = Vec::new();

    for it in 0..config.iterations {
        let mut any = false;
        for block in 0..blocks {
            let s = log_scale[block].exp();
            let (prop_atoms, prop_z) = if block == 0 {
                let a: Vec<Vec<f64>> = atoms
                    .iter()
                    .map(|atom| {
                        atom.iter()
                            .enumerate()
                            .map(|(j, &t)| {
                                let step: f64 = rng.sample(StandardNormal);
                                let (lo, hi) = prior.bounds[j];
                                reflect(t + s * widths[j] * step, lo, hi)
                            })
                            .collect()
                    })
                    .collect();
                (a, z.clone())
            } else {
                let zz: Vec<f64> = z
                    .iter()
                    .map(|&v| {
                        let step: f64 = rng.sample(StandardNormal);
                        v + s * step
                    })
                    .collect();
                (atoms.clone(), zz)
            };
            let (lp, g) = target.eval(&prop_atoms, &prop_z);
            let u: f64 = rng.random();
            let accept = lp.is_finite() && u.ln() < lp - cur_lp;
            if accept {
                atoms = prop_atoms;
                z = prop_z;
                cur_lp = lp;
                cur_g = g.expect("finite target has a measure");
                any = true;
                batch_acc[block] += 1;
            }
            if it >= burn_in {
                post_prop += 1;
                post_acc += accept as usize;
            }
        }
        since_accept = if any { 0 } else { since_accept + 1 };
        if since_accept >= config.rejection_window {
            return Err(Error::AllProposalsRejected { window: config.rejection_window });
        }
        if it < burn_in && (it + 1) % config.adapt_interval == 0 {
            batch_index += 1;
            let gamma = 2.0 / (batch_index as f64).sqrt();
            for block in 0..blocks {
                let rate = batch_acc[block] as f64 / config.adapt_interval as f64;
                log_scale[block] += gamma * (rate - config.target_acceptance);
                batch_acc[block] = 0;
            }
            scale_trace.push(ScaleSnapshot {
                iteration: it + 1,
                atom_scale: log_scale[0].exp(),
                weight_scale: if blocks > 1 { log_scale[1].exp() } else { 0.0 },
            });
        }
        if it >= burn_in && (it - burn_in).is_multiple_of(config.thin) {
            draws.push(cur_g.canonicalize());
        }
    }
    Ok(Chain {
        draws,
        acceptance_rate: post_acc as f64 / post_prop as f64,
        scale_trace,
        seed,
        burn_in,
    })
}

/// Posterior quantiles of `D_{N̄}`, `d_Θ` and `d_p` to the truth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorSummary {
    pub n_bar: f64,
    pub levels: [f64; 3],
    pub d_n: [f64; 3],
    pub d_theta: [f64; 3],
    pub d_p: [f64; 3],
}

pub fn posterior_error_summary(chain: &Chain, g0: &MixingMeasure, n_bar: f64) -> Result<ErrorSummary> {
    if chain.draws.is_empty() {
        return Err(Error::InvalidConfig("chain holds no draws".into()));
    }
    let mut dn = Vec::with_capacity(chain.draws.len());
    let mut dt = Vec::with_capacity(chain.draws.len());
    let mut dp = Vec::with_capacity(chain.draws.len());
    for g in &chain.draws {
        dn.push(distance_dn(g, g0, n_bar)?);
        let (a, b) = atom_and_weight_distances(g, g0)?;
        dt.push(a);
        dp.push(b);
    }
    let q = |v: &[f64]| QUANTILE_LEVELS.map(|l| quantile(v, l));
    Ok(ErrorSummary { n_bar, levels: QUANTILE_LEVELS, d_n: q(&dn), d_theta: q(&dt), d_p: q(&dp) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{batch_means_stderr, mean};

    fn bern_data(s: usize, t: usize) -> ExchangeableDataset {
        let seqs = (0..t).map(|i| vec![if i < s { 1.0 } else { 0.0 }]).collect();
        ExchangeableDataset::new(seqs, None).unwrap()
    }

    #[test]
    fn reflection_stays_in_the_box() {
        for &x in &[-3.7, -0.2, 0.5, 1.3, 9.9] {
            let y = reflect(x, 0.0, 1.0);
            assert!((0.0..=1.0).contains(&y));
        }
        assert!((reflect(1.25, 0.0, 1.0) - 0.75).abs() < 1e-15);
        assert!((reflect(-0.25, 0.0, 1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn conjugate_beta_mean() {
        let d = bern_data(4, 6);
        let prior = PriorSpec::new(vec![(0.0, 1.0)]);
        let chain = mcmc_run(&d, &Kernel::Bernoulli, &prior, 1, &McmcConfig::default(), 5).unwrap();
        let tr = chain.trace(|g| g.atom(0)[0]);
        let (m, se) = (mean(&tr), batch_means_stderr(&tr));
        assert!((m - 0.625).abs() < 3.0 * se, "{m} ± {se}");
        assert!(chain.acceptance_rate > 0.0 && chain.acceptance_rate < 1.0);
    }

    #[test]
    fn same_seed_same_chain() {
        let d = bern_data(3, 10);
        let prior = PriorSpec::new(vec![(0.0, 1.0)]);
        let cfg = McmcConfig { iterations: 2000, ..Default::default() };
        let a = mcmc_run(&d, &Kernel::Bernoulli, &prior, 2, &cfg, 9).unwrap();
        let b = mcmc_run(&d, &Kernel::Bernoulli, &prior, 2, &cfg, 9).unwrap();
        assert_eq!(a.draws, b.draws);
    }

    #[test]
    fn zero_length_chain_is_rejected() {
        let d = bern_data(1, 2);
        let prior = PriorSpec::new(vec![(0.0, 1.0)]);
        let cfg = McmcConfig { iterations: 0, ..Default::default() };
        assert!(matches!(
            mcmc_run(&d, &Kernel::Bernoulli, &prior, 1, &cfg, 1),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn copies_of_truth_have_zero_error() {
        let g0 = MixingMeasure::scalar(&[0.25, 0.75], &[0.4, 0.6]).unwrap();
        let chain = Chain { draws: vec![g0.clone(); 10], acceptance_rate: 0.3, scale_trace: vec![], seed: 0, burn_in: 0 };
        let s = posterior_error_summary(&chain, &g0, 3.0).unwrap();
        assert_eq!(s.d_n, [0.0; 3]);
        assert_eq!(s.d_theta, [0.0; 3]);
        assert_eq!(s.d_p, [0.0; 3]);
    }

    #[test]
    fn alr_roundtrip() {
        let w = weights_from_alr(&[(0.2f64 / 0.5).ln(), (0.3f64 / 0.5).ln()]);
        for (a, b) in w.iter().zip([0.2, 0.3, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
