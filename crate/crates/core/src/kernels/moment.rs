//! Moment maps `λ(θ)` of the two composite kernels and their Jacobians.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{mixture_pi, Kernel};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentMapReport {
    pub lambda: Vec<f64>,
    /// Central finite-difference Jacobian, row `j` holding `∇_θ λ^(j)`.
    pub jacobian: Vec<Vec<f64>>,
    /// Closed-form determinant. For the Gaussian mixture only `|det J|` has
    /// a closed form, so both determinants are reported in absolute value
    /// there.
    pub det_closed: f64,
    pub det_fd: f64,
}

impl MomentMapReport {
    pub fn relative_mismatch(&self) -> f64 {
        (self.det_closed - self.det_fd).abs() / self.det_closed.abs().max(1.0)
    }
}

fn binomial(n: u32, r: u32) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `E(σY + μ)^j` for standard normal `Y`.
fn normal_raw_moment(mu: f64, sigma: f64, j: u32) -> f64 {
    let mut total = 0.0;
    let mut double_fact = 1.0; // (r − 1)!! for even r
    for r in (0..=j).step_by(2) {
        if r >= 2 {
            double_fact *= (r - 1) as f64;
        }
        total += binomial(j, r) * mu.powi((j - r) as i32) * sigma.powi(r as i32) * double_fact;
    }
    total
}

fn lambda(kernel: &Kernel, theta: &[f64]) -> Vec<f64> {
    match *kernel {
        Kernel::GaussianLocationMixture { k, sigma } => (1..=2 * k as u32 - 1)
            .map(|j| {
                (0..k)
                    .map(|i| mixture_pi(theta, k, i) * normal_raw_moment(theta[k - 1 + i], sigma, j))
                    .sum()
            })
            .collect(),
        Kernel::BetaPushforwardDp { xi } => {
            let pis = [theta[0], 1.0 - theta[0]];
            let alphas = [theta[1], theta[2]];
            (1..=3)
                .map(|j| {
                    (0..2)
                        .map(|i| {
                            let a = alphas[i];
                            pis[i]
                                * (0..=j)
                                    .map(|l| (a * xi + l as f64) / (a + l as f64))
                                    .product::<f64>()
                        })
                        .sum()
                })
                .collect()
        }
        _ => unreachable!("checked by caller"),
    }
}

fn closed_det(kernel: &Kernel, theta: &[f64]) -> f64 {
    match *kernel {
        Kernel::GaussianLocationMixture { k, .. } => {
            let mus = &theta[k - 1..];
            let pis: f64 = (0..k).map(|i| mixture_pi(theta, k, i)).product();
            let mut vander = 1.0;
            for a in 0..k {
                for b in a + 1..k {
                    vander *= (mus[a] - mus[b]).powi(4);
                }
            }
            pis * vander
        }
        Kernel::BetaPushforwardDp { xi } => {
            let (p1, a1, a2) = (theta[0], theta[1], theta[2]);
            let num = 6.0
                * (xi - 1.0).powi(3)
                * xi.powi(3)
                * (2.0 * xi - 1.0)
                * (3.0 * xi - 1.0)
                * (3.0 * xi - 2.0)
                * p1
                * (1.0 - p1)
                * (a1 - a2).powi(4);
            let den: f64 = [a1, a2]
                .iter()
                .map(|a| ((1.0 + a) * (2.0 + a) * (3.0 + a)).powi(2))
                .product();
            num / den
        }
        _ => unreachable!("checked by caller"),
    }
}

/// Evaluates `λ(θ)` for a composite kernel together with closed-form and
/// finite-difference Jacobian determinants.
pub fn moment_map(kernel: &Kernel, theta: &[f64]) -> Result<MomentMapReport> {
    match *kernel {
        Kernel::GaussianLocationMixture { .. } => {}
        Kernel::BetaPushforwardDp { xi } => {
            for bad in [1.0 / 3.0, 0.5, 2.0 / 3.0] {
                if (xi - bad).abs() < 1e-12 {
                    return Err(Error::DegenerateXi(xi));
                }
            }
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "moment maps exist only for composite kernels, not {}",
                kernel.info().name
            )))
        }
    }
    kernel.validate(theta)?;
    let lam = lambda(kernel, theta);
    let d = theta.len();
    let mut jac = vec![vec![0.0; d]; lam.len()];
    let mut t = theta.to_vec();
    for c in 0..d {
        let h = 1e-6 * theta[c].abs().max(1.0);
        t[c] = theta[c] + h;
        let up = lambda(kernel, &t);
        t[c] = theta[c] - h;
        let down = lambda(kernel, &t);
        t[c] = theta[c];
        for r in 0..lam.len() {
            jac[r][c] = (up[r] - down[r]) / (2.0 * h);
        }
    }
    let det_fd = DMatrix::from_fn(lam.len(), d, |r, c| jac[r][c]).determinant();
    let det_closed = closed_det(kernel, theta);
    let (det_closed, det_fd) = match kernel {
        Kernel::GaussianLocationMixture { .. } => (det_closed.abs(), det_fd.abs()),
        _ => (det_closed, det_fd),
    };
    Ok(MomentMapReport {
        lambda: lam,
        jacobian: jac,
        det_closed,
        det_fd,
    })
}
