//! Bernoulli product mixtures: the first-order linear system and the
//! construction of mixing measures that are indistinguishable at length
//! `2k − 2`.

use serde::Serialize;

use super::linear::LinearSystemReport;
use super::vandermonde::bernstein_term;
use crate::error::{Error, Result};
use crate::kernels::{Divergence, Kernel};
use crate::measures::MixingMeasure;
use crate::products::{check_atoms, estimate_divergence, EstimateOptions};

fn bernoulli_atoms(g: &MixingMeasure) -> Result<Vec<f64>> {
    if g.dim() != 1 {
        return Err(Error::InvalidMeasure("Bernoulli atoms are scalars".into()));
    }
    check_atoms(g, &Kernel::Bernoulli)?;
    Ok(g.atoms().iter().map(|a| a[0]).collect())
}

/// First-order system of a length-`n` Bernoulli product mixture.
///
/// Row `s = 0..=n` is the equation `Σᵢ (bᵢ f_s(θᵢ) + aᵢ f_s′(θᵢ)) = 0` with
/// `f_s(θ) = θ^s (1 − θ)^{n−s}`; columns are ordered
/// `(b₁, a₁, b₂, a₂, …)`, so for `n = 2k − 1` the matrix is the transpose of
/// the generalized Vandermonde matrix in the Bernstein basis.
pub fn bernoulli_first_order_system(g: &MixingMeasure, n: usize) -> Result<LinearSystemReport> {
    let thetas = bernoulli_atoms(g)?;
    let matrix = (0..=n)
        .map(|s| {
            thetas
                .iter()
                .flat_map(|&t| {
                    let (v, d) = bernstein_term(t, s, n);
                    [v, d]
                })
                .collect()
        })
        .collect();
    Ok(LinearSystemReport::analyze(matrix))
}

/// A mixing measure `G′ ≠ G` with `P_{G,n} = P_{G′,n}` at `n = 2k − 2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonIdentWitness {
    pub original: MixingMeasure,
    pub witness: MixingMeasure,
    pub n: usize,
    pub a: f64,
    /// `maxₛ |Σ pᵢ θᵢ^s (1−θᵢ)^{n−s} − Σ p′ᵢ θ′ᵢ^s (1−θ′ᵢ)^{n−s}|`.
    pub max_moment_mismatch: f64,
    /// Exact `V(P_{G,n}, P_{G′,n})`.
    pub tv_at_n: f64,
    /// Exact `V(P_{G,n+1}, P_{G′,n+1})`.
    pub tv_at_n_plus_1: f64,
}

/// Barycentric Lagrange interpolant through `(nodes, values)`.
struct Barycentric {
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl Barycentric {
    fn new(nodes: Vec<f64>, values: Vec<f64>) -> Self {
        let weights = (0..nodes.len())
            .map(|j| {
                1.0 / nodes
                    .iter()
                    .enumerate()
                    .filter(|&(l, _)| l != j)
                    .map(|(_, &t)| nodes[j] - t)
                    .product::<f64>()
            })
            .collect();
        Barycentric {
            nodes,
            values,
            weights,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for ((&t, &v), &w) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            if x == t {
                return v;
            }
            let c = w / (x - t);
            num += c * v;
            den += c;
        }
        num / den
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::RootBracketingFailed(format!(
            "no sign change on ({lo}, {hi}): g = {flo:e}, {fhi:e}"
        )));
    }
    while hi - lo > 1e-14 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scaled count probabilities `Σᵢ pᵢ θᵢ^s (1−θᵢ)^{n−s}`, `s = 0..=n`.
fn moments(g: &MixingMeasure, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|s| {
            g.atoms()
                .iter()
                .zip(g.weights())
                .map(|(a, p)| p * bernstein_term(a[0], s, n).0)
                .sum()
        })
        .collect()
}

/// Builds `G′` with the same length-`(2k−2)` law as the Bernoulli `G`.
///
/// Atoms map to `η = θ/(1−θ)` and masses to `y = p(1−θ)^{2k−2}` (the sorted
/// originals occupy slots `k+1..2k`). The polynomial `g` of degree `≤ k`
/// through `g(0) = (−1)^{k+1} a`, `g(η_{2k}) = −1/y_{2k}` and
/// `g(η_i) = (1/y_i) Π_{ℓ≠i, k<ℓ<2k} (η_{2k}−η_ℓ)/(η_i−η_ℓ)` has one root
/// in `(0, η_{k+1})` and one in each `(η_{k+i−1}, η_{k+i})`; those roots are
/// the new atoms, and the new masses follow from the Vandermonde null vector.
pub fn bernoulli_nonidentifiable_witness(g: &MixingMeasure, a: f64) -> Result<NonIdentWitness> {
    bernoulli_atoms(g)?;
    let k = g.len();
    if k < 2 {
        return Err(Error::InvalidMeasure("the construction needs k ≥ 2 atoms".into()));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("a must be positive, got {a}")));
    }
    let n = 2 * k - 2;
    let sorted = g.canonicalize();
    // eta[i], y[i] for the 0-based slots k..2k−1 (slots 0..k−1 are unknown).
    let mut eta = vec![0.0; 2 * k];
    let mut y = vec![0.0; 2 * k];
    for (i, (atom, p)) in sorted.atoms().iter().zip(sorted.weights()).enumerate() {
        let t = atom[0];
        eta[k + i] = t / (1.0 - t);
        y[k + i] = p * (1.0 - t).powi(n as i32);
    }
    let last = 2 * k - 1;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let mut nodes = vec![0.0];
    let mut values = vec![sign * a];
    for i in k..last {
        let prod: f64 = (k..last)
            .filter(|&l| l != i)
            .map(|l| (eta[last] - eta[l]) / (eta[i] - eta[l]))
            .product();
        nodes.push(eta[i]);
        values.push(prod / y[i]);
    }
    nodes.push(eta[last]);
    values.push(-1.0 / y[last]);
    let poly = Barycentric::new(nodes, values);

    eta[0] = bisect(|x| poly.eval(x), 0.0, eta[k])?;
    for i in 1..k {
        eta[i] = bisect(|x| poly.eval(x), eta[k + i - 1], eta[k + i])?;
    }
    let mut atoms = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    for i in 0..k {
        let x_i = -y[last]
            * (0..last)
                .filter(|&l| l != i)
                .map(|l| (eta[last] - eta[l]) / (eta[i] - eta[l]))
                .product::<f64>();
        let theta = eta[i] / (1.0 + eta[i]);
        let p = -x_i / (1.0 - theta).powi(n as i32);
        if !(p > 0.0) {
            return Err(Error::RootBracketingFailed(format!(
                "witness mass {i} is not positive ({p:e})"
            )));
        }
        atoms.push(vec![theta]);
        weights.push(p);
    }
    let witness = MixingMeasure::normalized(atoms, weights)?;

    let m0 = moments(g, n);
    let m1 = moments(&witness, n);
    let max_moment_mismatch = m0.iter().zip(&m1).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
    let exact = EstimateOptions::default();
    let k_b = Kernel::Bernoulli;
    let tv_at_n = estimate_divergence(g, &witness, &k_b, n, Divergence::Tv, &exact)?.value;
    let tv_at_n_plus_1 = estimate_divergence(g, &witness, &k_b, n + 1, Divergence::Tv, &exact)?.value;
    Ok(NonIdentWitness {
        original: g.clone(),
        witness,
        n,
        a,
        max_moment_mismatch,
        tv_at_n,
        tv_at_n_plus_1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::distance_dn;

    #[test]
    fn system_ranks() {
        let g = MixingMeasure::scalar(&[0.3, 0.7], &[0.5, 0.5]).unwrap();
        let full = bernoulli_first_order_system(&g, 3).unwrap();
        assert_eq!(full.rank, 4);
        assert!((full.determinant.unwrap() - 0.0256).abs() < 1e-15);
        let short = bernoulli_first_order_system(&g, 2).unwrap();
        assert_eq!(short.rank, 3);
        assert_eq!(short.nullspace.len(), 1);
        assert!(short.nullspace_residual() < 1e-8);

        let g3 = MixingMeasure::scalar(&[0.15, 0.5, 0.8], &[0.3, 0.3, 0.4]).unwrap();
        assert_eq!(bernoulli_first_order_system(&g3, 5).unwrap().rank, 6);
        assert_eq!(bernoulli_first_order_system(&g3, 4).unwrap().rank, 5);
    }

    #[test]
    fn witness_for_two_atoms() {
        let g = MixingMeasure::scalar(&[0.4, 0.7], &[0.5, 0.5]).unwrap();
        let w1 = bernoulli_nonidentifiable_witness(&g, 1.0).unwrap();
        let t: Vec<f64> = w1.witness.atoms().iter().map(|a| a[0]).collect();
        assert!(t[0] > 0.0 && t[0] < 0.4 && t[1] > 0.4 && t[1] < 0.7, "{t:?}");
        assert!(w1.max_moment_mismatch < 1e-10);
        assert!(w1.tv_at_n < 1e-10);
        assert!(w1.tv_at_n_plus_1 > 1e-4);

        let w2 = bernoulli_nonidentifiable_witness(&g, 2.0).unwrap();
        assert!(w2.tv_at_n < 1e-10);
        assert!(distance_dn(&w1.witness, &w2.witness, 1.0).unwrap() > 1e-6);
    }

    #[test]
    fn witness_for_three_atoms() {
        let g = MixingMeasure::scalar(&[0.2, 0.45, 0.8], &[0.3, 0.3, 0.4]).unwrap();
        let w = bernoulli_nonidentifiable_witness(&g, 1.0).unwrap();
        assert_eq!(w.n, 4);
        assert!(w.max_moment_mismatch < 1e-10, "{w:?}");
        assert!(w.tv_at_n < 1e-10);
        assert!(w.tv_at_n_plus_1 > 1e-4);
    }

    #[test]
    fn witness_preconditions() {
        let one = MixingMeasure::dirac(vec![0.5]).unwrap();
        assert!(bernoulli_nonidentifiable_witness(&one, 1.0).is_err());
        let g = MixingMeasure::scalar(&[0.4, 0.7], &[0.5, 0.5]).unwrap();
        assert!(bernoulli_nonidentifiable_witness(&g, 0.0).is_err());
    }
}
