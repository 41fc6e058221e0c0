//! Exponential-family structure of the built-in kernels.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::{normal_ln_pdf, Kernel};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Form {
    Bernoulli,
    Gaussian { sigma: f64 },
    Gamma,
}

/// `f(x | θ) = exp(⟨η(θ), T(x)⟩ − A(η(θ))) h(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpFamilySpec {
    form: Form,
}

impl ExpFamilySpec {
    pub fn for_kernel(kernel: &Kernel) -> Option<Self> {
        let form = match *kernel {
            Kernel::Bernoulli => Form::Bernoulli,
            Kernel::GaussianLocation { sigma } => Form::Gaussian { sigma },
            Kernel::Gamma => Form::Gamma,
            _ => return None,
        };
        Some(ExpFamilySpec { form })
    }

    /// The kernel this structure describes.
    pub fn kernel(&self) -> Kernel {
        match self.form {
            Form::Bernoulli => Kernel::Bernoulli,
            Form::Gaussian { sigma } => Kernel::GaussianLocation { sigma },
            Form::Gamma => Kernel::Gamma,
        }
    }

    /// Dimension `s` of the sufficient statistic.
    pub fn stat_dim(&self) -> usize {
        match self.form {
            Form::Gamma => 2,
            _ => 1,
        }
    }

    /// `η(θ)`.
    pub fn natural(&self, theta: &[f64]) -> Vec<f64> {
        match self.form {
            Form::Bernoulli => vec![(theta[0] / (1.0 - theta[0])).ln()],
            Form::Gaussian { sigma } => vec![theta[0] / (sigma * sigma)],
            Form::Gamma => vec![theta[0] - 1.0, theta[1]],
        }
    }

    /// `∂η/∂θ`, row `r` holding the gradient of `η_r`.
    pub fn natural_jacobian(&self, theta: &[f64]) -> Vec<Vec<f64>> {
        match self.form {
            Form::Bernoulli => vec![vec![1.0 / (theta[0] * (1.0 - theta[0]))]],
            Form::Gaussian { sigma } => vec![vec![1.0 / (sigma * sigma)]],
            Form::Gamma => vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        }
    }

    /// `T(x)`.
    pub fn stat(&self, x: f64) -> Vec<f64> {
        match self.form {
            Form::Bernoulli | Form::Gaussian { .. } => vec![x],
            Form::Gamma => vec![x.ln(), -x],
        }
    }

    /// `log h(x)`; `−∞` off the support.
    pub fn log_carrier(&self, x: f64) -> f64 {
        match self.form {
            Form::Bernoulli => {
                if x == 0.0 || x == 1.0 {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            Form::Gaussian { sigma } => normal_ln_pdf(x, 0.0, sigma),
            Form::Gamma => {
                if x > 0.0 {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// Whether `η` lies in the natural parameter space.
    pub fn in_domain(&self, eta: &[f64]) -> bool {
        match self.form {
            Form::Bernoulli | Form::Gaussian { .. } => eta[0].is_finite(),
            Form::Gamma => eta[0] > -1.0 && eta[1] > 0.0 && eta.iter().all(|e| e.is_finite()),
        }
    }

    /// Log-partition `A(η)`.
    pub fn log_partition(&self, eta: &[f64]) -> f64 {
        match self.form {
            Form::Bernoulli => softplus(eta[0]),
            Form::Gaussian { sigma } => 0.5 * sigma * sigma * eta[0] * eta[0],
            Form::Gamma => ln_gamma(eta[0] + 1.0) - (eta[0] + 1.0) * eta[1].ln(),
        }
    }

    /// Density rebuilt from the exponential-family pieces.
    pub fn log_density(&self, x: f64, theta: &[f64]) -> f64 {
        let carrier = self.log_carrier(x);
        if carrier == f64::NEG_INFINITY {
            return carrier;
        }
        let eta = self.natural(theta);
        let dot: f64 = eta.iter().zip(self.stat(x)).map(|(e, t)| e * t).sum();
        dot - self.log_partition(&eta) + carrier
    }
}

fn softplus(v: f64) -> f64 {
    if v > 0.0 {
        v + (-v).exp().ln_1p()
    } else {
        v.exp().ln_1p()
    }
}

/// Hellinger distance `h` from `1 − h² = exp(A(η̄) − (A(η₁) + A(η₂))/2)`,
/// `η̄` the natural-parameter midpoint.
pub fn hellinger_expfam(spec: &ExpFamilySpec, theta1: &[f64], theta2: &[f64]) -> Result<f64> {
    let kernel = spec.kernel();
    kernel.validate(theta1)?;
    kernel.validate(theta2)?;
    let e1 = spec.natural(theta1);
    let e2 = spec.natural(theta2);
    let mid: Vec<f64> = e1.iter().zip(&e2).map(|(a, b)| 0.5 * (a + b)).collect();
    if !(spec.in_domain(&e1) && spec.in_domain(&e2) && spec.in_domain(&mid)) {
        return Err(Error::MidpointOutsideDomain);
    }
    let log_affinity =
        spec.log_partition(&mid) - 0.5 * (spec.log_partition(&e1) + spec.log_partition(&e2));
    let h2 = -log_affinity.min(0.0).exp_m1();
    Ok(h2.clamp(0.0, 1.0).sqrt())
}
