//! Parametric kernel families `{P_θ}`.
//!
//! Each built-in family supplies a log-density, a sampler, a parameter-box
//! validator, a gradient in `θ` (analytic where available), effective
//! support bounds for quadrature, and, where it applies, its exponential
//! family structure. The two composite families exist mainly for their
//! moment maps.

mod divergence;
mod expfam;
mod moment;

pub use divergence::{divergence_numeric, pairwise_hellinger, pairwise_tv, Divergence};
pub use expfam::{hellinger_expfam, ExpFamilySpec};
pub use moment::{moment_map, MomentMapReport};

use rand::Rng;
use rand_distr::{Beta, Distribution, Exp1, Gamma, Normal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{digamma, ln_gamma};

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

/// Where a family's observations live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSpace {
    RealLine,
    Binary,
    UnitInterval,
}

/// Static description of a family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelInfo {
    pub name: &'static str,
    pub dim: usize,
    /// Open per-coordinate bounds of the parameter box.
    pub bounds: Vec<(f64, f64)>,
    pub data_space: DataSpace,
    pub exp_family: bool,
    pub analytic_gradient: bool,
    pub closed_form_divergences: bool,
}

/// Built-in kernel families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params_fixed", rename_all = "snake_case")]
pub enum Kernel {
    /// `θ ∈ (0, 1)`.
    Bernoulli,
    /// `N(μ, σ²)` with `σ` fixed; `θ = μ`.
    GaussianLocation { sigma: f64 },
    /// Shape/rate gamma; `θ = (α, β)`.
    Gamma,
    /// `Uniform(0, θ)`.
    Uniform,
    /// `σ⁻¹ exp(−(x − ξ)/σ) 1{x > ξ}`; `θ = (ξ, σ)`.
    LocScaleExponential,
    /// `Σᵢ πᵢ N(μᵢ, σ²)` with `θ = (π₁..π_{k−1}, μ₁..μ_k)`, `μ` increasing.
    GaussianLocationMixture { k: usize, sigma: f64 },
    /// `π₁ Beta(α₁ξ, α₁(1−ξ)) + π₂ Beta(α₂ξ, α₂(1−ξ))` on `(0, 1)`;
    /// `θ = (π₁, α₁, α₂)` with `α > 2`.
    BetaPushforwardDp { xi: f64 },
}

impl Kernel {
    /// Checks fixed hyperparameters.
    pub fn validate_spec(&self) -> Result<()> {
        match *self {
            Kernel::GaussianLocation { sigma } | Kernel::GaussianLocationMixture { sigma, .. }
                if !(sigma.is_finite() && sigma > 0.0) =>
            {
                Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")))
            }
            Kernel::GaussianLocationMixture { k, .. } if k < 1 => {
                Err(Error::InvalidParameter("mixture order k must be ≥ 1".into()))
            }
            Kernel::BetaPushforwardDp { xi } if !(xi > 0.0 && xi < 1.0) => {
                Err(Error::InvalidParameter(format!("xi must lie in (0, 1), got {xi}")))
            }
            _ => Ok(()),
        }
    }

    pub fn info(&self) -> KernelInfo {
        let inf = f64::INFINITY;
        let (name, bounds, data_space, exp_family, analytic_gradient, closed) = match *self {
            Kernel::Bernoulli => ("bernoulli", vec![(0.0, 1.0)], DataSpace::Binary, true, true, true),
            Kernel::GaussianLocation { .. } => (
                "gaussian_location",
                vec![(-inf, inf)],
                DataSpace::RealLine,
                true,
                true,
                true,
            ),
            Kernel::Gamma => (
                "gamma",
                vec![(0.0, inf), (0.0, inf)],
                DataSpace::RealLine,
                true,
                true,
                true,
            ),
            Kernel::Uniform => ("uniform", vec![(0.0, inf)], DataSpace::RealLine, false, true, false),
            Kernel::LocScaleExponential => (
                "loc_scale_exponential",
                vec![(-inf, inf), (0.0, inf)],
                DataSpace::RealLine,
                false,
                true,
                false,
            ),
            Kernel::GaussianLocationMixture { k, .. } => {
                let mut b = vec![(0.0, 1.0); k - 1];
                b.extend(std::iter::repeat_n((-inf, inf), k));
                (
                    "gaussian_location_mixture",
                    b,
                    DataSpace::RealLine,
                    false,
                    false,
                    false,
                )
            }
            Kernel::BetaPushforwardDp { .. } => (
                "beta_pushforward_dp",
                vec![(0.0, 1.0), (2.0, inf), (2.0, inf)],
                DataSpace::UnitInterval,
                false,
                false,
                false,
            ),
        };
        KernelInfo {
            name,
            dim: bounds.len(),
            bounds,
            data_space,
            exp_family,
            analytic_gradient,
            closed_form_divergences: closed,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Kernel::Bernoulli | Kernel::GaussianLocation { .. } | Kernel::Uniform => 1,
            Kernel::Gamma | Kernel::LocScaleExponential => 2,
            Kernel::GaussianLocationMixture { k, .. } => 2 * k - 1,
            Kernel::BetaPushforwardDp { .. } => 3,
        }
    }

    /// Checks `θ` against the parameter box (and the family's extra constraints).
    pub fn validate(&self, theta: &[f64]) -> Result<()> {
        self.validate_spec()?;
        if theta.len() != self.dim() {
            return Err(Error::InvalidParameter(format!(
                "{} expects {} parameters, got {}",
                self.info().name,
                self.dim(),
                theta.len()
            )));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        for (i, (&t, &(lo, hi))) in theta.iter().zip(&self.info().bounds).enumerate() {
            if !(t > lo && t < hi) {
                return Err(Error::InvalidParameter(format!(
                    "{} parameter {i} = {t} outside the box ({lo}, {hi})",
                    self.info().name
                )));
            }
        }
        if let Kernel::GaussianLocationMixture { k, .. } = *self {
            let pis = &theta[..k - 1];
            if pis.iter().sum::<f64>() >= 1.0 {
                return Err(Error::InvalidParameter("mixture weights π must sum below 1".into()));
            }
            let mus = &theta[k - 1..];
            if mus.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(
                    "component means must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }

    /// Whether `x` belongs to the data space.
    pub fn in_data_space(&self, x: f64) -> bool {
        match self.info().data_space {
            DataSpace::Binary => x == 0.0 || x == 1.0,
            DataSpace::UnitInterval => x > 0.0 && x < 1.0,
            DataSpace::RealLine => x.is_finite(),
        }
    }

    /// `log f(x | θ)` without validation; `−∞` outside the support.
    pub fn log_density_unchecked(&self, x: f64, theta: &[f64]) -> f64 {
        match *self {
            Kernel::Bernoulli => {
                let t = theta[0];
                if x == 1.0 {
                    t.ln()
                } else if x == 0.0 {
                    (-t).ln_1p()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Kernel::GaussianLocation { sigma } => normal_ln_pdf(x, theta[0], sigma),
            Kernel::Gamma => {
                let (a, b) = (theta[0], theta[1]);
                if x <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    a * b.ln() - ln_gamma(a) + (a - 1.0) * x.ln() - b * x
                }
            }
            Kernel::Uniform => {
                if x > 0.0 && x < theta[0] {
                    -theta[0].ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Kernel::LocScaleExponential => {
                let (xi, s) = (theta[0], theta[1]);
                if x > xi {
                    -s.ln() - (x - xi) / s
                } else {
                    f64::NEG_INFINITY
                }
            }
            Kernel::GaussianLocationMixture { k, sigma } => {
                let terms: Vec<f64> = (0..k)
                    .map(|i| mixture_pi(theta, k, i).ln() + normal_ln_pdf(x, theta[k - 1 + i], sigma))
                    .collect();
                log_sum_exp(&terms)
            }
            Kernel::BetaPushforwardDp { xi } => {
                if !(x > 0.0 && x < 1.0) {
                    return f64::NEG_INFINITY;
                }
                let p1 = theta[0];
                let t1 = p1.ln() + beta_ln_pdf(x, theta[1] * xi, theta[1] * (1.0 - xi));
                let t2 = (-p1).ln_1p() + beta_ln_pdf(x, theta[2] * xi, theta[2] * (1.0 - xi));
                log_sum_exp(&[t1, t2])
            }
        }
    }

    /// `log f(x | θ)` after validating `θ`.
    pub fn log_density(&self, x: f64, theta: &[f64]) -> Result<f64> {
        self.validate(theta)?;
        Ok(self.log_density_unchecked(x, theta))
    }

    pub fn density_unchecked(&self, x: f64, theta: &[f64]) -> f64 {
        self.log_density_unchecked(x, theta).exp()
    }

    /// Draws `count` observations from `P_θ`.
    pub fn sample<R: Rng + ?Sized>(&self, theta: &[f64], count: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.validate(theta)?;
        Ok((0..count).map(|_| self.draw(theta, rng)).collect())
    }

    /// One draw, no validation.
    pub(crate) fn draw<R: Rng + ?Sized>(&self, theta: &[f64], rng: &mut R) -> f64 {
        match *self {
            Kernel::Bernoulli => {
                if rng.random::<f64>() < theta[0] {
                    1.0
                } else {
                    0.0
                }
            }
            Kernel::GaussianLocation { sigma } => {
                let z: f64 = rng.sample(rand_distr::StandardNormal);
                theta[0] + sigma * z
            }
            Kernel::Gamma => Gamma::new(theta[0], 1.0 / theta[1])
                .expect("validated gamma parameters")
                .sample(rng),
            Kernel::Uniform => theta[0] * rng.random::<f64>(),
            Kernel::LocScaleExponential => {
                let e: f64 = rng.sample(Exp1);
                theta[0] + theta[1] * e
            }
            Kernel::GaussianLocationMixture { k, sigma } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut comp = k - 1;
                for i in 0..k {
                    acc += mixture_pi(theta, k, i);
                    if u < acc {
                        comp = i;
                        break;
                    }
                }
                Normal::new(theta[k - 1 + comp], sigma)
                    .expect("validated sigma")
                    .sample(rng)
            }
            Kernel::BetaPushforwardDp { xi } => {
                let alpha = if rng.random::<f64>() < theta[0] {
                    theta[1]
                } else {
                    theta[2]
                };
                Beta::new(alpha * xi, alpha * (1.0 - xi))
                    .expect("validated beta parameters")
                    .sample(rng)
            }
        }
    }

    /// Analytic mean of `P_θ`.
    pub fn mean(&self, theta: &[f64]) -> f64 {
        match *self {
            Kernel::Bernoulli => theta[0],
            Kernel::GaussianLocation { .. } => theta[0],
            Kernel::Gamma => theta[0] / theta[1],
            Kernel::Uniform => theta[0] / 2.0,
            Kernel::LocScaleExponential => theta[0] + theta[1],
            Kernel::GaussianLocationMixture { k, .. } => {
                (0..k).map(|i| mixture_pi(theta, k, i) * theta[k - 1 + i]).sum()
            }
            Kernel::BetaPushforwardDp { xi } => xi,
        }
    }

    /// Analytic variance of `P_θ`.
    pub fn variance(&self, theta: &[f64]) -> f64 {
        match *self {
            Kernel::Bernoulli => theta[0] * (1.0 - theta[0]),
            Kernel::GaussianLocation { sigma } => sigma * sigma,
            Kernel::Gamma => theta[0] / (theta[1] * theta[1]),
            Kernel::Uniform => theta[0] * theta[0] / 12.0,
            Kernel::LocScaleExponential => theta[1] * theta[1],
            Kernel::GaussianLocationMixture { k, sigma } => {
                let m = self.mean(theta);
                (0..k)
                    .map(|i| {
                        let mu = theta[k - 1 + i];
                        mixture_pi(theta, k, i) * (sigma * sigma + mu * mu)
                    })
                    .sum::<f64>()
                    - m * m
            }
            Kernel::BetaPushforwardDp { xi } => {
                // Var = E[Var | α] since E[X | α] = ξ for both components.
                let v = |a: f64| xi * (1.0 - xi) / (a + 1.0);
                theta[0] * v(theta[1]) + (1.0 - theta[0]) * v(theta[2])
            }
        }
    }

    /// Interval outside which `P_θ` has mass below ~1e-14, and the points
    /// where the density is discontinuous or non-smooth.
    pub fn effective_support(&self, theta: &[f64]) -> (f64, f64, Vec<f64>) {
        const Z: f64 = 8.5;
        match *self {
            Kernel::Bernoulli => (0.0, 1.0, vec![]),
            Kernel::GaussianLocation { sigma } => {
                (theta[0] - Z * sigma, theta[0] + Z * sigma, vec![theta[0]])
            }
            Kernel::Gamma => {
                let (a, b) = (theta[0], theta[1]);
                let mut hi = (a + 10.0 * a.sqrt() + 10.0) / b;
                while statrs::function::gamma::gamma_ur(a, b * hi) > 1e-15 {
                    hi *= 1.5;
                }
                let mode = if a > 1.0 { vec![(a - 1.0) / b] } else { vec![] };
                (0.0, hi, mode)
            }
            Kernel::Uniform => (0.0, theta[0], vec![]),
            Kernel::LocScaleExponential => {
                (theta[0], theta[0] + 36.0 * theta[1], vec![theta[0]])
            }
            Kernel::GaussianLocationMixture { k, sigma } => {
                let mus = &theta[k - 1..];
                (
                    mus[0] - Z * sigma,
                    mus[k - 1] + Z * sigma,
                    mus.to_vec(),
                )
            }
            Kernel::BetaPushforwardDp { .. } => (0.0, 1.0, vec![]),
        }
    }

    /// Support boundary points at which the density jumps.
    pub fn boundary_points(&self, theta: &[f64]) -> Vec<f64> {
        match *self {
            Kernel::Uniform => vec![0.0, theta[0]],
            Kernel::LocScaleExponential => vec![theta[0]],
            Kernel::Gamma => vec![0.0],
            _ => vec![],
        }
    }

    /// `∇_θ f(x | θ)`: analytic for the simple families, central finite
    /// differences (step `1e-6·max(1, |θⱼ|)`) for the composites.
    pub fn grad_density(&self, x: f64, theta: &[f64]) -> Result<Vec<f64>> {
        self.validate(theta)?;
        for b in self.boundary_points(theta) {
            if matches!(self, Kernel::Uniform | Kernel::LocScaleExponential)
                && (x - b).abs() <= 1e-12 * (1.0 + b.abs())
            {
                return Err(Error::NonDifferentiablePoint { x });
            }
        }
        Ok(match *self {
            Kernel::Bernoulli => vec![if x == 1.0 { 1.0 } else { -1.0 }],
            Kernel::GaussianLocation { sigma } => {
                let f = self.density_unchecked(x, theta);
                vec![f * (x - theta[0]) / (sigma * sigma)]
            }
            Kernel::Gamma => {
                let (a, b) = (theta[0], theta[1]);
                let f = self.density_unchecked(x, theta);
                if x <= 0.0 {
                    vec![0.0, 0.0]
                } else {
                    vec![f * (b.ln() - digamma(a) + x.ln()), f * (a / b - x)]
                }
            }
            Kernel::Uniform => {
                let t = theta[0];
                if x > 0.0 && x < t {
                    vec![-1.0 / (t * t)]
                } else {
                    vec![0.0]
                }
            }
            Kernel::LocScaleExponential => {
                let (xi, s) = (theta[0], theta[1]);
                let f = self.density_unchecked(x, theta);
                vec![f / s, f * ((x - xi) / (s * s) - 1.0 / s)]
            }
            Kernel::GaussianLocationMixture { .. } | Kernel::BetaPushforwardDp { .. } => {
                self.grad_density_fd(x, theta)
            }
        })
    }

    /// Central finite-difference gradient of the density.
    pub fn grad_density_fd(&self, x: f64, theta: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(theta.len());
        let mut t = theta.to_vec();
        for j in 0..theta.len() {
            let h = 1e-6 * theta[j].abs().max(1.0);
            t[j] = theta[j] + h;
            let up = self.density_unchecked(x, &t);
            t[j] = theta[j] - h;
            let down = self.density_unchecked(x, &t);
            t[j] = theta[j];
            out.push((up - down) / (2.0 * h));
        }
        out
    }

    /// Exponential-family structure, for the families that have one.
    pub fn exp_family(&self) -> Option<ExpFamilySpec> {
        ExpFamilySpec::for_kernel(self)
    }
}

/// Mixture weight `πᵢ` of the Gaussian-mixture composite.
pub(crate) fn mixture_pi(theta: &[f64], k: usize, i: usize) -> f64 {
    if i + 1 < k {
        theta[i]
    } else {
        1.0 - theta[..k - 1].iter().sum::<f64>()
    }
}

pub(crate) fn normal_ln_pdf(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    -0.5 * z * z - sigma.ln() - LN_SQRT_2PI
}

fn beta_ln_pdf(x: f64, a: f64, b: f64) -> f64 {
    (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
}

/// Stable `log Σ exp(vᵢ)`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}
