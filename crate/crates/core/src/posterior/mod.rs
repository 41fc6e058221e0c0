//! Hierarchical Bayes for exact-fitted mixtures of product distributions:
//! prior, unnormalized posterior, a random-walk Metropolis sampler and the
//! contraction-rate experiment.

mod contraction;
mod mcmc;

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{log_sum_exp, ExpFamilySpec, Kernel};
use crate::measures::MixingMeasure;
use crate::products::{log_density_seq, ExchangeableDataset};

pub use contraction::{
    contraction_experiment, default_identifiable_length, ContractionConfig, ContractionReport,
    ContractionRow, LengthLaw,
};
pub use mcmc::{mcmc_run, posterior_error_summary, Chain, ErrorSummary, McmcConfig, ScaleSnapshot, QUANTILE_LEVELS};

/// Uniform prior on a compact box `Θ₁` for every atom, uniform on the
/// simplex for the weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    /// Closed interval per parameter coordinate.
    pub bounds: Vec<(f64, f64)>,
}

impl PriorSpec {
    pub fn new(bounds: Vec<(f64, f64)>) -> Self {
        PriorSpec { bounds }
    }

    /// Checks that the box is finite, non-degenerate and inside the kernel box.
    pub fn validate(&self, kernel: &Kernel) -> Result<()> {
        let kb = kernel.info().bounds;
        if self.bounds.len() != kb.len() {
            return Err(Error::InvalidConfig(format!(
                "prior box has {} coordinates, {} expects {}",
                self.bounds.len(),
                kernel.info().name,
                kb.len()
            )));
        }
        for (j, (&(lo, hi), &(klo, khi))) in self.bounds.iter().zip(&kb).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidConfig(format!(
                    "prior interval {j} = [{lo}, {hi}] must be finite with lower < upper"
                )));
            }
            if lo < klo || hi > khi {
                return Err(Error::InvalidConfig(format!(
                    "prior interval {j} = [{lo}, {hi}] leaves the parameter box ({klo}, {khi})"
                )));
            }
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        self.bounds.iter().map(|(lo, hi)| hi - lo).product()
    }

    pub fn contains(&self, atom: &[f64]) -> bool {
        atom.len() == self.bounds.len()
            && atom.iter().zip(&self.bounds).all(|(&t, &(lo, hi))| t >= lo && t <= hi)
    }

    /// Log prior density of a `k`-atom measure inside the support: `k` uniform
    /// atoms times the flat Dirichlet density `(k−1)!`.
    pub fn log_density_const(&self, k: usize) -> f64 {
        let ln_fact: f64 = (1..k).map(|i| (i as f64).ln()).sum();
        -(k as f64) * self.volume().ln() + ln_fact
    }

    /// Whether `g` lies in the prior support and its atoms are valid kernel
    /// parameters.
    pub fn supports(&self, g: &MixingMeasure, kernel: &Kernel) -> bool {
        g.atoms().iter().all(|a| self.contains(a) && kernel.validate(a).is_ok())
    }
}

/// Draws from the prior: weights as normalized unit exponentials, atoms
/// uniform in the box, redrawn on an (almost surely impossible) collision.
pub fn prior_sample<R: Rng + ?Sized>(prior: &PriorSpec, k0: usize, rng: &mut R) -> Result<MixingMeasure> {
    if k0 == 0 {
        return Err(Error::InvalidConfig("k0 must be ≥ 1".into()));
    }
    for _ in 0..100 {
        let e: Vec<f64> = (0..k0).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = e.iter().sum();
        let weights: Vec<f64> = if k0 == 1 { vec![1.0] } else { e.iter().map(|v| v / total).collect() };
        let atoms: Vec<Vec<f64>> = (0..k0)
            .map(|_| prior.bounds.iter().map(|&(lo, hi)| lo + (hi - lo) * rng.random::<f64>()).collect())
            .collect();
        if let Ok(g) = MixingMeasure::new(atoms, weights) {
            return Ok(g);
        }
    }
    Err(Error::InvalidConfig("prior draws keep colliding; is the box degenerate?".into()))
}

/// Dataset likelihood with sequences grouped by their sufficient statistic
/// when the kernel is an exponential family.
pub(crate) enum Likelihood<'a> {
    ExpFamily {
        spec: ExpFamilySpec,
        /// `(multiplicity, length, ΣT(x), Σ log h(x))`.
        groups: Vec<(f64, f64, Vec<f64>, f64)>,
    },
    Generic {
        kernel: Kernel,
        sequences: &'a [Vec<f64>],
    },
}

impl<'a> Likelihood<'a> {
    pub(crate) fn new(dataset: &'a ExchangeableDataset, kernel: &Kernel) -> Self {
        let Some(spec) = kernel.exp_family() else {
            return Likelihood::Generic { kernel: *kernel, sequences: dataset.sequences() };
        };
        let mut map: BTreeMap<(usize, Vec<u64>), (f64, Vec<f64>, f64)> = BTreeMap::new();
        for seq in dataset.sequences() {
            let mut t = vec![0.0; spec.stat_dim()];
            let mut log_h = 0.0;
            for &x in seq {
                for (acc, v) in t.iter_mut().zip(spec.stat(x)) {
                    *acc += v;
                }
                log_h += spec.log_carrier(x);
            }
            let key = (seq.len(), t.iter().map(|v| v.to_bits()).collect());
            map.entry(key).or_insert((0.0, t, log_h)).0 += 1.0;
        }
        let groups = map.into_iter().map(|((n, _), (c, t, h))| (c, n as f64, t, h)).collect();
        Likelihood::ExpFamily { spec, groups }
    }

    pub(crate) fn log_likelihood(&self, g: &MixingMeasure) -> f64 {
        match self {
            Likelihood::Generic { kernel, sequences } => {
                sequences.iter().map(|s| log_density_seq(g, kernel, s)).sum()
            }
            Likelihood::ExpFamily { spec, groups } => {
                let per_atom: Vec<(f64, Vec<f64>, f64)> = g
                    .atoms()
                    .iter()
                    .zip(g.weights())
                    .map(|(a, p)| {
                        let eta = spec.natural(a);
                        let big_a = spec.log_partition(&eta);
                        (p.ln(), eta, big_a)
                    })
                    .collect();
                let mut terms = vec![0.0; per_atom.len()];
                groups
                    .iter()
                    .map(|(count, n, t, log_h)| {
                        for (slot, (lp, eta, big_a)) in terms.iter_mut().zip(&per_atom) {
                            let dot: f64 = eta.iter().zip(t).map(|(e, s)| e * s).sum();
                            *slot = lp + dot - n * big_a;
                        }
                        count * (log_sum_exp(&terms) + log_h)
                    })
                    .sum()
            }
        }
    }
}

/// `Σᵢ log p_{G,Nᵢ}(Xⁱ) + log Π(G)`, or `−∞` when `G` leaves the prior support.
pub fn log_posterior_unnorm(g: &MixingMeasure, dataset: &ExchangeableDataset, kernel: &Kernel, prior: &PriorSpec) -> f64 {
    if !prior.supports(g, kernel) {
        return f64::NEG_INFINITY;
    }
    Likelihood::new(dataset, kernel).log_likelihood(g) + prior.log_density_const(g.len())
}
