use serde::Serialize;

use super::assignment::{self, for_each_permutation};
use super::transport;
use super::{euclidean, MixingMeasure};
use crate::error::{Error, Result};

/// Largest `k` for which matchings are enumerated exhaustively (so ties
/// can be broken lexicographically).
const ENUMERATION_LIMIT: usize = 8;
const TIE_TOL: f64 = 1e-12;

fn same_size(g: &MixingMeasure, h: &MixingMeasure) -> Result<()> {
    if g.len() != h.len() {
        return Err(Error::MismatchedSupportSize {
            left: g.len(),
            right: h.len(),
        });
    }
    if g.dim() != h.dim() {
        return Err(Error::InvalidMeasure(format!(
            "atom dimensions differ ({} vs {})",
            g.dim(),
            h.dim()
        )));
    }
    Ok(())
}

/// `cost[j][i]` pairs atom `i` of `g` with atom `j` of `h`, so an assignment
/// row `j → col τ(j)` reads as `τ` in `Σⱼ c(θ_{τ(j)}, θ′ⱼ)`.
fn cost_matrix(g: &MixingMeasure, h: &MixingMeasure, pair: impl Fn(usize, usize) -> f64) -> Vec<Vec<f64>> {
    (0..h.len())
        .map(|j| (0..g.len()).map(|i| pair(i, j)).collect())
        .collect()
}

/// `D_N(G, G′) = min_τ Σᵢ (√N‖θ_{τ(i)} − θ′ᵢ‖₂ + |p_{τ(i)} − p′ᵢ|)`.
///
/// `n` may be any positive real, which covers the averaged length `N̄_m`.
pub fn distance_dn(g: &MixingMeasure, h: &MixingMeasure, n: f64) -> Result<f64> {
    same_size(g, h)?;
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::InvalidParameter(format!("N must be positive, got {n}")));
    }
    let s = n.sqrt();
    let cost = cost_matrix(g, h, |i, j| {
        s * euclidean(g.atom(i), h.atom(j)) + (g.weights()[i] - h.weights()[j]).abs()
    });
    Ok(assignment::solve(&cost).cost)
}

/// `D_{r1,r2}(G, G′) = min_τ Σᵢ (‖θ_{τ(i)} − θ′ᵢ‖₂^{r1} + |p_{τ(i)} − p′ᵢ|^{r2})`.
pub fn distance_dr1r2(g: &MixingMeasure, h: &MixingMeasure, r1: f64, r2: f64) -> Result<f64> {
    same_size(g, h)?;
    if !(r1 >= 1.0 && r2 >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "exponents must be ≥ 1, got ({r1}, {r2})"
        )));
    }
    let cost = cost_matrix(g, h, |i, j| {
        euclidean(g.atom(i), h.atom(j)).powf(r1) + (g.weights()[i] - h.weights()[j]).abs().powf(r2)
    });
    Ok(assignment::solve(&cost).cost)
}

/// Separately minimized atom and weight distances `(d_Θ, d_p)`.
pub fn atom_and_weight_distances(g: &MixingMeasure, h: &MixingMeasure) -> Result<(f64, f64)> {
    same_size(g, h)?;
    let atoms = cost_matrix(g, h, |i, j| euclidean(g.atom(i), h.atom(j)));
    let weights = cost_matrix(g, h, |i, j| (g.weights()[i] - h.weights()[j]).abs());
    Ok((assignment::solve(&atoms).cost, assignment::solve(&weights).cost))
}

/// `W_p(G, G′)` with Euclidean ground cost, solved exactly.
pub fn wasserstein(g: &MixingMeasure, h: &MixingMeasure, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be ≥ 1, got {p}")));
    }
    if g.dim() != h.dim() {
        return Err(Error::InvalidMeasure("atom dimensions differ".into()));
    }
    let cost: Vec<Vec<f64>> = g
        .atoms()
        .iter()
        .map(|a| h.atoms().iter().map(|b| euclidean(a, b).powf(p)).collect())
        .collect();
    let plan = transport::solve(g.weights(), h.weights(), &cost);
    Ok(plan.cost.max(0.0).powf(1.0 / p))
}

/// Optimal relabeling between `g` and a reference `g0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchingResult {
    /// `permutation[i]` is the index of the atom of `g` matched to atom `i`
    /// of `g0`.
    pub permutation: Vec<usize>,
    /// `D₁(G, G₀)` realized by `permutation`.
    pub cost: f64,
    /// Set when `D₁ < ρ/2` and no tie was found.
    pub unique: bool,
}

fn matching_cost(g: &MixingMeasure, g0: &MixingMeasure, perm: &[usize], n: f64) -> f64 {
    let s = n.sqrt();
    perm.iter()
        .enumerate()
        .map(|(i, &t)| s * euclidean(g.atom(t), g0.atom(i)) + (g.weights()[t] - g0.weights()[i]).abs())
        .sum()
}

/// Enumerates all matchings; returns the lexicographically first minimizer
/// and whether another permutation ties with it.
fn enumerate_best(g: &MixingMeasure, g0: &MixingMeasure, n: f64) -> (Vec<usize>, f64, bool) {
    let mut best = f64::INFINITY;
    let mut best_perm = Vec::new();
    let mut tied = false;
    for_each_permutation(g.len(), |p| {
        let c = matching_cost(g, g0, p, n);
        if c < best - TIE_TOL {
            best = c;
            best_perm = p.to_vec();
            tied = false;
        } else if (c - best).abs() <= TIE_TOL {
            tied = true;
        }
    });
    (best_perm, best, tied)
}

/// The `D₁`-optimal permutation between `g` and `g0`.
///
/// When `D₁(G, G₀) < ρ/2` (ρ the minimum gap of `g0`) the minimizer is
/// unique and also optimal for `D_N` at every `N ≥ 1`; this is re-checked for
/// `N ∈ {1, 2, 4, 16}` before `unique` is set.
pub fn optimal_matching(g: &MixingMeasure, g0: &MixingMeasure) -> Result<MatchingResult> {
    same_size(g, g0)?;
    let k = g.len();
    let (permutation, cost, tied) = if k <= ENUMERATION_LIMIT {
        enumerate_best(g, g0, 1.0)
    } else {
        let cost = cost_matrix(g, g0, |i, j| {
            euclidean(g.atom(i), g0.atom(j)) + (g.weights()[i] - g0.weights()[j]).abs()
        });
        let a = assignment::solve(&cost);
        (a.cols, a.cost, false)
    };
    let mut unique = !tied && cost + TIE_TOL < g0.min_gap() / 2.0;
    if unique {
        for n in [1.0, 2.0, 4.0, 16.0] {
            let at_tau = matching_cost(g, g0, &permutation, n);
            let best = distance_dn(g, g0, n)?;
            if at_tau > best + TIE_TOL * (1.0 + best) {
                unique = false;
            }
        }
    }
    Ok(MatchingResult {
        permutation,
        cost,
        unique,
    })
}
