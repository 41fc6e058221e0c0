//! Posterior contraction experiment: simulate, sample, summarize, regress.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mcmc::{mcmc_run, posterior_error_summary, ErrorSummary, McmcConfig};
use super::PriorSpec;
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::measures::MixingMeasure;
use crate::parallel::with_workers;
use crate::products::sample_dataset;
use crate::seed::{derive, rng_for};
use crate::stats::{ols, LinearFit};

/// Law of the sequence lengths `Nᵢ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum LengthLaw {
    Constant { n: usize },
    /// I.i.d. uniform on `{lo, …, hi}`.
    Uniform { lo: usize, hi: usize },
}

impl LengthLaw {
    pub fn min_length(&self) -> usize {
        match *self {
            LengthLaw::Constant { n } => n,
            LengthLaw::Uniform { lo, .. } => lo,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            LengthLaw::Constant { n: 0 } => Err(Error::InvalidConfig("sequence length must be ≥ 1".into())),
            LengthLaw::Uniform { lo, hi } if lo == 0 || lo > hi => {
                Err(Error::InvalidConfig(format!("invalid length range {{{lo}..{hi}}}")))
            }
            _ => Ok(()),
        }
    }

    pub fn draw(&self, m: usize, rng: &mut impl Rng) -> Vec<usize> {
        match *self {
            LengthLaw::Constant { n } => vec![n; m],
            LengthLaw::Uniform { lo, hi } => (0..m).map(|_| rng.random_range(lo..=hi)).collect(),
        }
    }
}

/// Smallest length at which the experiment is meaningful: `2k₀ − 1` for
/// Bernoulli, 2 for gamma (pathological pairs), 1 otherwise.
pub fn default_identifiable_length(kernel: &Kernel, k0: usize) -> usize {
    match kernel {
        Kernel::Bernoulli => 2 * k0 - 1,
        Kernel::Gamma => 2,
        _ => 1,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionConfig {
    pub prior: PriorSpec,
    #[serde(default)]
    pub mcmc: McmcConfig,
    /// Overrides [`default_identifiable_length`].
    #[serde(default)]
    pub identifiable_length: Option<usize>,
    #[serde(default)]
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractionRow {
    pub m: usize,
    pub replicate: usize,
    pub total_length: usize,
    pub acceptance_rate: f64,
    pub summary: ErrorSummary,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    pub kernel: Kernel,
    pub truth: MixingMeasure,
    pub length_law: LengthLaw,
    pub m_grid: Vec<usize>,
    pub replicates: usize,
    pub rows: Vec<ContractionRow>,
    /// `log(median d_p)` against `log m`.
    pub slope_weights: LinearFit,
    /// `log(median d_Θ)` against `log ΣNᵢ`.
    pub slope_atoms: LinearFit,
}

impl ContractionReport {
    pub const CSV_HEADER: &'static str = "m,replicate,total_length,n_bar,acceptance_rate,\
d_n_q50,d_n_q90,d_n_q95,d_theta_q50,d_theta_q90,d_theta_q95,d_p_q50,d_p_q90,d_p_q95";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let s = &r.summary;
            let cells: Vec<String> = [s.d_n, s.d_theta, s.d_p].iter().flatten().map(|v| v.to_string()).collect();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.m,
                r.replicate,
                r.total_length,
                s.n_bar,
                r.acceptance_rate,
                cells.join(",")
            ));
        }
        out
    }

    /// Median over replicates of the posterior-median atom error at `m`.
    pub fn median_atom_error(&self, m: usize) -> Option<f64> {
        let v: Vec<f64> = self.rows.iter().filter(|r| r.m == m).map(|r| r.summary.d_theta[0]).collect();
        (!v.is_empty()).then(|| crate::stats::quantile(&v, 0.5))
    }
}

/// Runs `replicates` independent simulate-then-sample cells for each `m`.
/// Cell `(m, r)` draws everything from streams labelled
/// `"posterior/m={m}/rep={r}/…"`, so results do not depend on scheduling.
pub fn contraction_experiment(
    kernel: &Kernel,
    g0: &MixingMeasure,
    m_grid: &[usize],
    length_law: LengthLaw,
    replicates: usize,
    config: &ContractionConfig,
    seed: u64,
) -> Result<ContractionReport> {
    let mut grid = m_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    if grid.len() < 2 {
        return Err(Error::InvalidConfig("m_grid needs at least two distinct sizes to fit a slope".into()));
    }
    if grid[0] == 0 || replicates == 0 {
        return Err(Error::InvalidConfig("m and replicates must be ≥ 1".into()));
    }
    length_law.validate()?;
    config.mcmc.validate()?;
    config.prior.validate(kernel)?;
    let k0 = g0.len();
    if !config.prior.supports(g0, kernel) {
        return Err(Error::InvalidConfig("the true measure lies outside the prior box".into()));
    }
    let need = config.identifiable_length.unwrap_or_else(|| default_identifiable_length(kernel, k0));
    if length_law.min_length() < need {
        return Err(Error::InvalidConfig(format!(
            "minimum sequence length {} is below the identifiable length {need}",
            length_law.min_length()
        )));
    }

    let cells: Vec<(usize, usize)> = grid.iter().flat_map(|&m| (0..replicates).map(move |r| (m, r))).collect();
    let rows: Vec<ContractionRow> = with_workers(config.workers, || {
        cells
            .par_iter()
            .map(|&(m, r)| {
                let label = format!("posterior/m={m}/rep={r}");
                let mut lrng = rng_for(seed, &format!("{label}/lengths"));
                let lengths = length_law.draw(m, &mut lrng);
                let data = sample_dataset(g0, kernel, &lengths, derive(seed, &format!("{label}/data")))?;
                let chain = mcmc_run(&data, kernel, &config.prior, k0, &config.mcmc, derive(seed, &format!("{label}/mcmc")))?;
                let summary = posterior_error_summary(&chain, g0, data.mean_length())?;
                Ok(ContractionRow {
                    m,
                    replicate: r,
                    total_length: data.total_length(),
                    acceptance_rate: chain.acceptance_rate,
                    summary,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let fit = |xs: Vec<f64>, ys: Vec<f64>, what: &str| {
        ols(&xs, &ys).ok_or_else(|| Error::InvalidConfig(format!("cannot fit the {what} slope")))
    };
    let slope_weights = fit(
        rows.iter().map(|r| (r.m as f64).ln()).collect(),
        rows.iter().map(|r| r.summary.d_p[0].ln()).collect(),
        "weight",
    )?;
    let slope_atoms = fit(
        rows.iter().map(|r| (r.total_length as f64).ln()).collect(),
        rows.iter().map(|r| r.summary.d_theta[0].ln()).collect(),
        "atom",
    )?;
    Ok(ContractionReport {
        kernel: *kernel,
        truth: g0.clone(),
        length_law,
        m_grid: grid,
        replicates,
        rows,
        slope_weights,
        slope_atoms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ContractionConfig {
        ContractionConfig {
            prior: PriorSpec::new(vec![(0.0, 1.0)]),
            mcmc: McmcConfig { iterations: 2000, ..Default::default() },
            identifiable_length: None,
            workers: None,
        }
    }

    #[test]
    fn single_size_grid_is_an_error() {
        let g0 = MixingMeasure::scalar(&[0.25, 0.75], &[0.4, 0.6]).unwrap();
        let r = contraction_experiment(&Kernel::Bernoulli, &g0, &[100], LengthLaw::Constant { n: 3 }, 2, &cfg(), 1);
        assert!(matches!(r, Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn short_sequences_are_rejected() {
        let g0 = MixingMeasure::scalar(&[0.25, 0.75], &[0.4, 0.6]).unwrap();
        let r = contraction_experiment(&Kernel::Bernoulli, &g0, &[10, 20], LengthLaw::Constant { n: 2 }, 2, &cfg(), 1);
        assert!(matches!(r, Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn small_experiment_is_worker_independent() {
        let g0 = MixingMeasure::scalar(&[0.25, 0.75], &[0.4, 0.6]).unwrap();
        let law = LengthLaw::Uniform { lo: 3, hi: 5 };
        let mut c = cfg();
        c.workers = Some(1);
        let a = contraction_experiment(&Kernel::Bernoulli, &g0, &[20, 40], law, 2, &c, 3).unwrap();
        c.workers = Some(3);
        let b = contraction_experiment(&Kernel::Bernoulli, &g0, &[20, 40], law, 2, &c, 3).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.rows.len(), 4);
        assert!(a.slope_weights.r_squared.is_finite());
    }
}
