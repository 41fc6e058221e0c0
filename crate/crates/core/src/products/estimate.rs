//! Estimators of `V(P_{G,N}, P_{G′,N})` and `h(P_{G,N}, P_{G′,N})`.

use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use super::{check_atoms, log_density_seq, ProductMixtureModel};
use crate::error::{Error, Result};
use crate::kernels::{log_sum_exp, DataSpace, Divergence, Kernel};
use crate::measures::MixingMeasure;
use crate::parallel::with_workers;
use crate::quadrature::Integrator;
use crate::seed::{derive, rng_for};

/// Number of `(x ~ P, y ~ P′)` pairs per Monte Carlo chunk. Each chunk owns
/// the stream `derive(seed, "mc/chunk/<index>")`.
pub const MC_CHUNK_PAIRS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactEnumeration,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ExactEnumeration => "exact-enumeration",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DivergenceEstimate {
    pub value: f64,
    /// Zero for exact enumeration; the error estimate for quadrature; the
    /// Monte Carlo standard error otherwise.
    pub stderr: f64,
    pub method: Method,
    /// Outcomes enumerated, or Monte Carlo draws.
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateOptions {
    pub seed: u64,
    /// Monte Carlo draws (split evenly between the two mixtures).
    pub mc_samples: usize,
    /// Hard cap on draws or enumerated outcomes.
    pub budget: usize,
    /// Worker threads for Monte Carlo; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Overrides the automatic method choice.
    pub method: Option<Method>,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            seed: 0,
            mc_samples: 1_000_000,
            budget: 100_000_000,
            workers: None,
            method: None,
            abs_tol: 1e-12,
            rel_tol: 1e-9,
        }
    }
}

impl EstimateOptions {
    pub fn with_seed(seed: u64) -> Self {
        EstimateOptions {
            seed,
            ..Default::default()
        }
    }
}

fn auto_method(kernel: &Kernel, n: usize) -> Method {
    match kernel {
        Kernel::Bernoulli => Method::ExactEnumeration,
        Kernel::GaussianLocation { .. } => Method::Quadrature,
        _ if n <= 2 => Method::Quadrature,
        _ => Method::MonteCarlo,
    }
}

/// Estimates TV or Hellinger between `P_{G,N}` and `P_{G′,N}`.
///
/// The method is picked from the kernel and `N` unless overridden:
/// Bernoulli mixtures are enumerated exactly over the success count;
/// Gaussian location mixtures reduce exactly to the sample mean, a 1-D
/// mixture of `N(μᵢ, σ²/N)`, and are integrated; other continuous kernels use
/// adaptive quadrature for `N ≤ 2` (nested in two dimensions for `N = 2`) and
/// Monte Carlo under the proposal `½(P_{G,N} + P_{G′,N})` beyond that.
pub fn estimate_divergence(
    g: &MixingMeasure,
    h: &MixingMeasure,
    kernel: &Kernel,
    n: usize,
    which: Divergence,
    opts: &EstimateOptions,
) -> Result<DivergenceEstimate> {
    if which == Divergence::Kl {
        return Err(Error::InvalidParameter(
            "product-mixture estimation supports TV and Hellinger only".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("N must be ≥ 1".into()));
    }
    check_atoms(g, kernel)?;
    check_atoms(h, kernel)?;
    if g.dim() != h.dim() {
        return Err(Error::InvalidMeasure("atom dimensions differ".into()));
    }
    let method = opts.method.unwrap_or_else(|| auto_method(kernel, n));
    match method {
        Method::ExactEnumeration => {
            if *kernel != Kernel::Bernoulli {
                return Err(Error::InvalidParameter(
                    "exact enumeration is available for Bernoulli kernels only".into(),
                ));
            }
            if n + 1 > opts.budget {
                return Err(Error::BudgetExceeded(format!("{} outcomes exceed the budget", n + 1)));
            }
            Ok(bernoulli_exact(g, h, n, which))
        }
        Method::Quadrature => match *kernel {
            Kernel::GaussianLocation { sigma } => {
                let reduced = Kernel::GaussianLocation {
                    sigma: sigma / (n as f64).sqrt(),
                };
                quadrature_1d(g, h, &reduced, which, opts)
            }
            _ if kernel.info().data_space == DataSpace::Binary => Err(Error::InvalidParameter(
                "quadrature is not used on discrete data".into(),
            )),
            _ if n == 1 => quadrature_1d(g, h, kernel, which, opts),
            _ if n == 2 => quadrature_2d(g, h, kernel, which, opts),
            _ => Err(Error::InvalidParameter(format!(
                "quadrature is limited to N ≤ 2 for the {} kernel",
                kernel.info().name
            ))),
        },
        Method::MonteCarlo => monte_carlo(g, h, kernel, n, which, opts),
    }
}

fn finish(which: Divergence, raw: f64, raw_err: f64, method: Method, samples: usize) -> DivergenceEstimate {
    let (value, stderr) = match which {
        Divergence::Hellinger => {
            let h = raw.clamp(0.0, 1.0).sqrt();
            let se = if h > 0.0 { raw_err / (2.0 * h) } else { raw_err.sqrt() };
            (h, se)
        }
        _ => (raw.clamp(0.0, 1.0), raw_err),
    };
    DivergenceEstimate {
        value,
        stderr,
        method,
        samples,
    }
}

/// Law of the success count `S = Σⱼ Xⱼ` under `P_{G,N}`.
pub(crate) fn bernoulli_count_law(g: &MixingMeasure, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|s| {
            let terms: Vec<f64> = g
                .atoms()
                .iter()
                .zip(g.weights())
                .map(|(a, p)| {
                    let t = a[0];
                    p.ln() + s as f64 * t.ln() + (n - s) as f64 * (-t).ln_1p()
                })
                .collect();
            (ln_binomial(n as u64, s as u64) + log_sum_exp(&terms)).exp()
        })
        .collect()
}

fn bernoulli_exact(g: &MixingMeasure, h: &MixingMeasure, n: usize, which: Divergence) -> DivergenceEstimate {
    let pg = bernoulli_count_law(g, n);
    let ph = bernoulli_count_law(h, n);
    let raw: f64 = pg
        .iter()
        .zip(&ph)
        .map(|(a, b)| match which {
            Divergence::Tv => 0.5 * (a - b).abs(),
            _ => {
                let d = a.sqrt() - b.sqrt();
                0.5 * d * d
            }
        })
        .sum();
    finish(which, raw, 0.0, Method::ExactEnumeration, n + 1)
}

fn pointwise(which: Divergence, lf: f64, lh: f64) -> f64 {
    match which {
        Divergence::Tv => 0.5 * (lf.exp() - lh.exp()).abs(),
        _ => {
            let d = (0.5 * lf).exp() - (0.5 * lh).exp();
            0.5 * d * d
        }
    }
}

fn breakpoints(kernel: &Kernel, measures: &[&MixingMeasure]) -> Vec<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut pts = Vec::new();
    for g in measures {
        for a in g.atoms() {
            let (l, u, inner) = kernel.effective_support(a);
            lo = lo.min(l);
            hi = hi.max(u);
            pts.extend(inner);
            pts.extend(kernel.boundary_points(a));
        }
    }
    pts.retain(|p| *p > lo && *p < hi);
    pts.push(lo);
    pts.push(hi);
    pts
}

fn quadrature_1d(
    g: &MixingMeasure,
    h: &MixingMeasure,
    kernel: &Kernel,
    which: Divergence,
    opts: &EstimateOptions,
) -> Result<DivergenceEstimate> {
    let pts = breakpoints(kernel, &[g, h]);
    let q = Integrator {
        abs_tol: opts.abs_tol,
        rel_tol: opts.rel_tol,
        max_intervals: 20_000,
    };
    let r = q.integrate(
        |x| pointwise(which, log_density_seq(g, kernel, &[x]), log_density_seq(h, kernel, &[x])),
        &pts,
    )?;
    Ok(finish(which, r.value, r.error, Method::Quadrature, r.intervals * 21))
}

fn component_logs(g: &MixingMeasure, kernel: &Kernel, x: f64) -> Vec<f64> {
    g.atoms()
        .iter()
        .zip(g.weights())
        .map(|(a, p)| p.ln() + kernel.log_density_unchecked(x, a))
        .collect()
}

fn quadrature_2d(
    g: &MixingMeasure,
    h: &MixingMeasure,
    kernel: &Kernel,
    which: Divergence,
    opts: &EstimateOptions,
) -> Result<DivergenceEstimate> {
    let pts = breakpoints(kernel, &[g, h]);
    let width = pts.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - pts.iter().copied().fold(f64::INFINITY, f64::min);
    let inner_q = Integrator {
        abs_tol: opts.abs_tol / width,
        rel_tol: opts.rel_tol,
        max_intervals: 4000,
    };
    let outer_q = Integrator {
        abs_tol: opts.abs_tol,
        rel_tol: opts.rel_tol,
        max_intervals: 4000,
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_err = Cell::new(0.0f64);
    let evals = Cell::new(0usize);
    let outer = outer_q.integrate(
        |x1| {
            if failure.borrow().is_some() {
                return 0.0;
            }
            let a = component_logs(g, kernel, x1);
            let b = component_logs(h, kernel, x1);
            let r = inner_q.integrate(
                |x2| {
                    let ta: Vec<f64> = a
                        .iter()
                        .zip(g.atoms())
                        .map(|(c, t)| c + kernel.log_density_unchecked(x2, t))
                        .collect();
                    let tb: Vec<f64> = b
                        .iter()
                        .zip(h.atoms())
                        .map(|(c, t)| c + kernel.log_density_unchecked(x2, t))
                        .collect();
                    pointwise(which, log_sum_exp(&ta), log_sum_exp(&tb))
                },
                &pts,
            );
            match r {
                Ok(v) => {
                    inner_err.set(inner_err.get().max(v.error));
                    evals.set(evals.get() + v.intervals * 21);
                    v.value
                }
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    0.0
                }
            }
        },
        &pts,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    let err = outer.error + inner_err.get() * width;
    Ok(finish(which, outer.value, err, Method::Quadrature, evals.get()))
}

fn monte_carlo(
    g: &MixingMeasure,
    h: &MixingMeasure,
    kernel: &Kernel,
    n: usize,
    which: Divergence,
    opts: &EstimateOptions,
) -> Result<DivergenceEstimate> {
    if opts.mc_samples > opts.budget {
        return Err(Error::BudgetExceeded(format!(
            "{} Monte Carlo draws exceed the budget of {}",
            opts.mc_samples, opts.budget
        )));
    }
    let pairs = (opts.mc_samples / 2).max(2);
    let mg = ProductMixtureModel::new(g.clone(), *kernel, n)?;
    let mh = ProductMixtureModel::new(h.clone(), *kernel, n)?;
    // Integrand under the balanced proposal, as a function of the log ratio.
    let phi = |x: &[f64]| {
        let d = 0.5 * (log_density_seq(g, kernel, x) - log_density_seq(h, kernel, x));
        match which {
            Divergence::Tv => d.tanh().abs(),
            _ => 1.0 / d.cosh(),
        }
    };
    let chunks = pairs.div_ceil(MC_CHUNK_PAIRS);
    let partial: Vec<(f64, f64, usize)> = with_workers(opts.workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = rng_for(opts.seed, &format!("mc/chunk/{c}"));
                let count = MC_CHUNK_PAIRS.min(pairs - c * MC_CHUNK_PAIRS);
                let (mut s, mut ss) = (0.0, 0.0);
                for _ in 0..count {
                    let x = mg.sample_sequence(&mut rng);
                    let y = mh.sample_sequence(&mut rng);
                    let u = 0.5 * (phi(&x) + phi(&y));
                    s += u;
                    ss += u * u;
                }
                (s, ss, count)
            })
            .collect()
    });
    let (mut s, mut ss, mut count) = (0.0, 0.0, 0usize);
    for (a, b, c) in partial {
        s += a;
        ss += b;
        count += c;
    }
    let mean = s / count as f64;
    let var = ((ss - count as f64 * mean * mean) / (count - 1) as f64).max(0.0);
    let se = (var / count as f64).sqrt();
    let raw = match which {
        Divergence::Tv => mean,
        _ => 1.0 - mean,
    };
    Ok(finish(which, raw, se, Method::MonteCarlo, 2 * count))
}

/// Root average squared Hellinger `√((1/m) Σᵢ h²(P_{G,Nᵢ}, P_{G₀,Nᵢ}))`.
pub fn d_mh(
    g: &MixingMeasure,
    g0: &MixingMeasure,
    kernel: &Kernel,
    lengths: &[usize],
    opts: &EstimateOptions,
) -> Result<f64> {
    if lengths.is_empty() {
        return Err(Error::InvalidParameter("at least one sequence length is required".into()));
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &n in lengths {
        *counts.entry(n).or_default() += 1;
    }
    let mut total = 0.0;
    for (&n, &c) in &counts {
        let o = EstimateOptions {
            seed: derive(opts.seed, &format!("dmh/N={n}")),
            ..opts.clone()
        };
        let h = estimate_divergence(g, g0, kernel, n, Divergence::Hellinger, &o)?.value;
        total += c as f64 * h * h;
    }
    Ok((total / lengths.len() as f64).sqrt())
}
