use std::cell::Cell;

use serde::{Deserialize, Serialize};

use super::{hellinger_expfam, DataSpace, Kernel};
use crate::error::Result;
use crate::quadrature::Integrator;

/// Which divergence to compute. TV and Hellinger use the `½` normalizations
/// `V = ½∫|p − q|` and `h² = ½∫(√p − √q)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Divergence {
    Tv,
    Hellinger,
    Kl,
}

fn breakpoints(kernel: &Kernel, t1: &[f64], t2: &[f64]) -> Vec<f64> {
    let (lo1, hi1, p1) = kernel.effective_support(t1);
    let (lo2, hi2, p2) = kernel.effective_support(t2);
    let lo = lo1.min(lo2);
    let hi = hi1.max(hi2);
    let mut pts = vec![lo, hi];
    pts.extend(p1);
    pts.extend(p2);
    pts.extend(kernel.boundary_points(t1));
    pts.extend(kernel.boundary_points(t2));
    pts.retain(|p| *p >= lo && *p <= hi);
    pts
}

/// TV, Hellinger or KL between `P_θ1` and `P_θ2` by exact summation on
/// discrete data or adaptive quadrature split at every support endpoint.
///
/// KL is `+∞` when `P_θ1` charges a region where `P_θ2` has no mass.
pub fn divergence_numeric(kernel: &Kernel, theta1: &[f64], theta2: &[f64], which: Divergence) -> Result<f64> {
    kernel.validate(theta1)?;
    kernel.validate(theta2)?;
    let pointwise = |f1: f64, f2: f64, l1: f64, l2: f64| -> f64 {
        match which {
            Divergence::Tv => 0.5 * (f1 - f2).abs(),
            Divergence::Hellinger => {
                let d = f1.sqrt() - f2.sqrt();
                0.5 * d * d
            }
            Divergence::Kl => {
                if f1 == 0.0 {
                    0.0
                } else {
                    f1 * (l1 - l2)
                }
            }
        }
    };
    let value = if kernel.info().data_space == DataSpace::Binary {
        [0.0, 1.0]
            .iter()
            .map(|&x| {
                let l1 = kernel.log_density_unchecked(x, theta1);
                let l2 = kernel.log_density_unchecked(x, theta2);
                pointwise(l1.exp(), l2.exp(), l1, l2)
            })
            .sum::<f64>()
    } else {
        let infinite = Cell::new(false);
        let integrand = |x: f64| {
            let l1 = kernel.log_density_unchecked(x, theta1);
            let l2 = kernel.log_density_unchecked(x, theta2);
            if which == Divergence::Kl && l1 > f64::NEG_INFINITY && l2 == f64::NEG_INFINITY {
                infinite.set(true);
                return 0.0;
            }
            pointwise(l1.exp(), l2.exp(), l1, l2)
        };
        let q = Integrator {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_intervals: 20_000,
        };
        let r = q.integrate(integrand, &breakpoints(kernel, theta1, theta2))?;
        if infinite.get() {
            return Ok(f64::INFINITY);
        }
        r.value
    };
    Ok(match which {
        Divergence::Tv => value.clamp(0.0, 1.0),
        Divergence::Hellinger => value.clamp(0.0, 1.0).sqrt(),
        Divergence::Kl => value.max(0.0),
    })
}

/// `h(P_θ1, P_θ2)`, closed form for exponential families.
pub fn pairwise_hellinger(kernel: &Kernel, theta1: &[f64], theta2: &[f64]) -> Result<f64> {
    match kernel.exp_family() {
        Some(spec) => hellinger_expfam(&spec, theta1, theta2),
        None => divergence_numeric(kernel, theta1, theta2, Divergence::Hellinger),
    }
}

/// `V(P_θ1, P_θ2)`, closed form for Bernoulli and Gaussian location.
pub fn pairwise_tv(kernel: &Kernel, theta1: &[f64], theta2: &[f64]) -> Result<f64> {
    match *kernel {
        Kernel::Bernoulli => {
            kernel.validate(theta1)?;
            kernel.validate(theta2)?;
            Ok((theta1[0] - theta2[0]).abs())
        }
        Kernel::GaussianLocation { sigma } => {
            kernel.validate(theta1)?;
            kernel.validate(theta2)?;
            let d = (theta1[0] - theta2[0]).abs();
            Ok(statrs::function::erf::erf(d / (2.0 * std::f64::consts::SQRT_2 * sigma)))
        }
        _ => divergence_numeric(kernel, theta1, theta2, Divergence::Tv),
    }
}
