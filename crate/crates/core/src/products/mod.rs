//! Mixtures of `N`-product distributions `P_{G,N} = Σᵢ pᵢ P_{θᵢ}^{⊗N}`.

mod bounds;
mod dataset;
mod estimate;

pub use bounds::{hellinger_upper_bound, tv_upper_bound, MAX_BRUTE_FORCE_K};
pub use dataset::{sample_dataset, ExchangeableDataset};
pub use estimate::{d_mh, estimate_divergence, DivergenceEstimate, EstimateOptions, Method};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{log_sum_exp, Kernel};
use crate::measures::MixingMeasure;

/// The triple `(G, kernel, N)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductMixtureModel {
    measure: MixingMeasure,
    kernel: Kernel,
    n: usize,
}

impl ProductMixtureModel {
    pub fn new(measure: MixingMeasure, kernel: Kernel, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("sequence length N must be ≥ 1".into()));
        }
        check_atoms(&measure, &kernel)?;
        Ok(ProductMixtureModel { measure, kernel, n })
    }

    pub fn measure(&self) -> &MixingMeasure {
        &self.measure
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `log p_{G,N}(x̄)`.
    pub fn log_density(&self, xs: &[f64]) -> Result<f64> {
        if xs.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: xs.len(),
            });
        }
        Ok(log_density_seq(&self.measure, &self.kernel, xs))
    }

    /// Draws one length-`N` sequence: a latent component, then `N` i.i.d.
    /// observations from it.
    pub fn sample_sequence<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let i = pick_component(self.measure.weights(), rng);
        (0..self.n).map(|_| self.kernel.draw(self.measure.atom(i), rng)).collect()
    }
}

/// `log p_{G,N}(x̄)` for a model.
pub fn log_density_product(model: &ProductMixtureModel, xs: &[f64]) -> Result<f64> {
    model.log_density(xs)
}

/// Checks every atom of `g` against the kernel's parameter box.
pub fn check_atoms(g: &MixingMeasure, kernel: &Kernel) -> Result<()> {
    for (i, a) in g.atoms().iter().enumerate() {
        kernel
            .validate(a)
            .map_err(|e| Error::InvalidParameter(format!("atom {i}: {e}")))?;
    }
    Ok(())
}

/// `log Σᵢ pᵢ Πⱼ f(xⱼ | θᵢ)` of a sequence of any length, unchecked.
pub(crate) fn log_density_seq(g: &MixingMeasure, kernel: &Kernel, xs: &[f64]) -> f64 {
    let terms: Vec<f64> = g
        .atoms()
        .iter()
        .zip(g.weights())
        .map(|(a, p)| p.ln() + xs.iter().map(|&x| kernel.log_density_unchecked(x, a)).sum::<f64>())
        .collect();
    log_sum_exp(&terms)
}

pub(crate) fn pick_component<R: rand::Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        let g = MixingMeasure::scalar(&[0.3, 0.7], &[0.5, 0.5]).unwrap();
        let m = ProductMixtureModel::new(g.clone(), Kernel::Bernoulli, 2).unwrap();
        assert!((m.log_density(&[1.0, 0.0]).unwrap() - 0.21f64.ln()).abs() < 1e-15);
        assert!(matches!(
            m.log_density(&[1.0]),
            Err(Error::LengthMismatch { expected: 2, got: 1 })
        ));

        let one = ProductMixtureModel::new(g, Kernel::Bernoulli, 1).unwrap();
        assert!((one.log_density(&[1.0]).unwrap() - 0.5f64.ln()).abs() < 1e-15);

        let k = Kernel::GaussianLocation { sigma: 1.0 };
        let single = ProductMixtureModel::new(MixingMeasure::dirac(vec![0.4]).unwrap(), k, 3).unwrap();
        let xs = [0.1, -1.0, 2.0];
        let direct: f64 = xs.iter().map(|&x| k.log_density_unchecked(x, &[0.4])).sum();
        assert!((single.log_density(&xs).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn atoms_must_be_in_the_box() {
        let g = MixingMeasure::new(vec![vec![0.0, 1.0]], vec![1.0]).unwrap();
        assert!(ProductMixtureModel::new(g, Kernel::Gamma, 1).is_err());
    }
}
