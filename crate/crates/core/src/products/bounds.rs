//! Upper bounds on divergences between product mixtures in terms of the
//! per-atom kernel divergences and the weight differences.

use crate::error::{Error, Result};
use crate::kernels::{pairwise_hellinger, pairwise_tv, Kernel};
use crate::measures::assignment::for_each_permutation;
use crate::measures::MixingMeasure;

use super::check_atoms;

/// Largest support size for which the permutation search runs.
pub const MAX_BRUTE_FORCE_K: usize = 7;

fn prepare(g: &MixingMeasure, h: &MixingMeasure, kernel: &Kernel, n: usize) -> Result<()> {
    if g.len() != h.len() {
        return Err(Error::MismatchedSupportSize {
            left: g.len(),
            right: h.len(),
        });
    }
    if g.len() > MAX_BRUTE_FORCE_K {
        return Err(Error::BudgetExceeded(format!(
            "exact permutation search is limited to k ≤ {MAX_BRUTE_FORCE_K}, got k = {}",
            g.len()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("N must be ≥ 1".into()));
    }
    check_atoms(g, kernel)?;
    check_atoms(h, kernel)
}

/// `min_τ (atom_scale · maxᵢ d[τ(i)][i] + weight_term(Σᵢ |p_{τ(i)} − p′ᵢ|))`.
fn minimize(
    g: &MixingMeasure,
    h: &MixingMeasure,
    d: &[Vec<f64>],
    atom_scale: f64,
    weight_term: impl Fn(f64) -> f64,
) -> f64 {
    let mut best = f64::INFINITY;
    for_each_permutation(g.len(), |tau| {
        let mut worst = 0.0f64;
        let mut dp = 0.0;
        for (i, &t) in tau.iter().enumerate() {
            worst = worst.max(d[t][i]);
            dp += (g.weights()[t] - h.weights()[i]).abs();
        }
        best = best.min(atom_scale * worst + weight_term(dp));
    });
    best
}

fn pairwise(g: &MixingMeasure, h: &MixingMeasure, f: impl Fn(&[f64], &[f64]) -> Result<f64>) -> Result<Vec<Vec<f64>>> {
    g.atoms()
        .iter()
        .map(|a| h.atoms().iter().map(|b| f(a, b)).collect())
        .collect()
}

/// `h(P_{G,N}, P_{G′,N}) ≤ min_τ (√N maxᵢ h(P_{θ_{τ(i)}}, P_{θ′ᵢ}) + √(½Σ|p_{τ(i)} − p′ᵢ|))`.
pub fn hellinger_upper_bound(g: &MixingMeasure, h: &MixingMeasure, kernel: &Kernel, n: usize) -> Result<f64> {
    prepare(g, h, kernel, n)?;
    let d = pairwise(g, h, |a, b| pairwise_hellinger(kernel, a, b))?;
    Ok(minimize(g, h, &d, (n as f64).sqrt(), |dp| (0.5 * dp).sqrt()))
}

/// Upper bound on `V(P_{G,N}, P_{G′,N})`.
///
/// For `N = 1` this is `min_τ (maxᵢ V(P_{θ_{τ(i)}}, P_{θ′ᵢ}) + ½Σ|Δp|)`. For
/// `N ≥ 2` the atom term is `√(2N) maxᵢ h`, from `V ≤ √2·h` and
/// `h(P^{⊗N}, Q^{⊗N}) ≤ √N h(P, Q)`; without the `√2` the bound fails, e.g.
/// for two Gaussian atoms `0.1` apart at `N = 2`.
pub fn tv_upper_bound(g: &MixingMeasure, h: &MixingMeasure, kernel: &Kernel, n: usize) -> Result<f64> {
    prepare(g, h, kernel, n)?;
    if n == 1 {
        let d = pairwise(g, h, |a, b| pairwise_tv(kernel, a, b))?;
        Ok(minimize(g, h, &d, 1.0, |dp| 0.5 * dp))
    } else {
        let d = pairwise(g, h, |a, b| pairwise_hellinger(kernel, a, b))?;
        Ok(minimize(g, h, &d, (2.0 * n as f64).sqrt(), |dp| 0.5 * dp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::hellinger_expfam;

    fn weight_shift() -> (MixingMeasure, MixingMeasure) {
        (
            MixingMeasure::scalar(&[0.2, 0.8], &[0.5, 0.5]).unwrap(),
            MixingMeasure::scalar(&[0.2, 0.8], &[0.3, 0.7]).unwrap(),
        )
    }

    #[test]
    fn examples() {
        let (g, h) = weight_shift();
        let b = &Kernel::Bernoulli;
        assert_eq!(hellinger_upper_bound(&g, &g, b, 3).unwrap(), 0.0);
        assert_eq!(tv_upper_bound(&g, &g, b, 3).unwrap(), 0.0);
        assert!((hellinger_upper_bound(&g, &h, b, 5).unwrap() - 0.2f64.sqrt()).abs() < 1e-15);
        assert!((tv_upper_bound(&g, &h, b, 5).unwrap() - 0.2).abs() < 1e-15);

        let a = MixingMeasure::dirac(vec![0.5]).unwrap();
        let c = MixingMeasure::dirac(vec![0.6]).unwrap();
        let spec = b.exp_family().unwrap();
        let h1 = hellinger_expfam(&spec, &[0.5], &[0.6]).unwrap();
        assert!((hellinger_upper_bound(&a, &c, b, 4).unwrap() - 2.0 * h1).abs() < 1e-15);

        let g2 = MixingMeasure::scalar(&[0.25, 0.8], &[0.4, 0.6]).unwrap();
        let want = 0.05 + 0.5 * 0.2;
        assert!((tv_upper_bound(&g, &g2, b, 1).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn large_k_is_refused() {
        let atoms: Vec<f64> = (1..=8).map(|i| i as f64 / 10.0).collect();
        let g = MixingMeasure::scalar(&atoms, &[0.125; 8]).unwrap();
        assert!(matches!(
            hellinger_upper_bound(&g, &g, &Kernel::Bernoulli, 1),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
