//! Discrete mixing measures `G = Σ pᵢ δ_{θᵢ}` and the distances between them.
//!
//! All permutation-minimizing distances reduce to a linear assignment problem
//! on a k×k cost matrix and are solved exactly by [`assignment::solve`].
//! Wasserstein distances are solved as exact transportation programs in
//! [`transport`].

pub mod assignment;
mod distance;
pub mod transport;

pub use distance::{
    atom_and_weight_distances, distance_dn, distance_dr1r2, optimal_matching, wasserstein,
    MatchingResult,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ pᵢ = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A finitely supported probability measure on `R^q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct MixingMeasure {
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
    min_gap: f64,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawMeasure {
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl TryFrom<RawMeasure> for MixingMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        MixingMeasure::new(raw.atoms, raw.weights)
    }
}

impl From<MixingMeasure> for RawMeasure {
    fn from(g: MixingMeasure) -> Self {
        RawMeasure {
            atoms: g.atoms,
            weights: g.weights,
        }
    }
}

impl MixingMeasure {
    /// Builds a measure, validating every invariant.
    ///
    /// Weights must be strictly positive and sum to one within
    /// [`WEIGHT_SUM_TOL`]; atoms must share one dimension, be finite and be
    /// pairwise distinct. Duplicate atoms are rejected rather than merged.
    pub fn new(atoms: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let k = atoms.len();
        if k == 0 {
            return Err(Error::InvalidMeasure("at least one atom is required".into()));
        }
        if weights.len() != k {
            return Err(Error::InvalidMeasure(format!(
                "{} atoms but {} weights",
                k,
                weights.len()
            )));
        }
        let q = atoms[0].len();
        if q == 0 {
            return Err(Error::InvalidMeasure("atoms must have dimension ≥ 1".into()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if a.len() != q {
                return Err(Error::InvalidMeasure(format!(
                    "atom {i} has dimension {} (expected {q})",
                    a.len()
                )));
            }
            if a.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidMeasure(format!("atom {i} is not finite")));
            }
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "weight {i} = {w} is not strictly positive"
                )));
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        let mut min_gap = f64::INFINITY;
        for i in 0..k {
            for j in (i + 1)..k {
                let d = euclidean(&atoms[i], &atoms[j]);
                if d == 0.0 {
                    return Err(Error::InvalidMeasure(format!("atoms {i} and {j} coincide")));
                }
                min_gap = min_gap.min(d);
            }
        }
        Ok(MixingMeasure {
            atoms,
            weights,
            min_gap,
        })
    }

    /// Builds a measure after rescaling `weights` to sum to one.
    pub fn normalized(atoms: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Self::new(atoms, weights)
    }

    /// Convenience constructor for measures on the real line.
    pub fn scalar(atoms: &[f64], weights: &[f64]) -> Result<Self> {
        Self::new(atoms.iter().map(|&a| vec![a]).collect(), weights.to_vec())
    }

    /// Single point mass.
    pub fn dirac(atom: Vec<f64>) -> Result<Self> {
        Self::new(vec![atom], vec![1.0])
    }

    pub fn atoms(&self) -> &[Vec<f64>] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &[f64] {
        &self.atoms[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of atoms `k`.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Dimension `q` of the parameter space.
    pub fn dim(&self) -> usize {
        self.atoms[0].len()
    }

    /// Minimum pairwise Euclidean gap `ρ` between atoms (`+∞` when k = 1).
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// Returns the measure with atoms sorted lexicographically.
    pub fn canonicalize(&self) -> MixingMeasure {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| lex_cmp(&self.atoms[a], &self.atoms[b]));
        MixingMeasure {
            atoms: order.iter().map(|&i| self.atoms[i].clone()).collect(),
            weights: order.iter().map(|&i| self.weights[i]).collect(),
            min_gap: self.min_gap,
        }
    }

    /// Atoms and weights reordered by `perm` (new index `i` holds old `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> MixingMeasure {
        MixingMeasure {
            atoms: perm.iter().map(|&i| self.atoms[i].clone()).collect(),
            weights: perm.iter().map(|&i| self.weights[i]).collect(),
            min_gap: self.min_gap,
        }
    }

    /// Largest pairwise distance between atoms of `self` and `other` combined.
    pub fn joint_diameter(&self, other: &MixingMeasure) -> f64 {
        let all: Vec<&Vec<f64>> = self.atoms.iter().chain(other.atoms.iter()).collect();
        let mut diam: f64 = 0.0;
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                diam = diam.max(euclidean(all[i], all[j]));
            }
        }
        diam
    }
}

/// Free function form of [`MixingMeasure::canonicalize`].
pub fn canonicalize(g: &MixingMeasure) -> MixingMeasure {
    g.canonicalize()
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    a.len().cmp(&b.len())
}

/// Euclidean norm of `a − b`.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_measures() {
        assert!(MixingMeasure::scalar(&[], &[]).is_err());
        assert!(MixingMeasure::scalar(&[0.1, 0.1], &[0.5, 0.5]).is_err());
        assert!(MixingMeasure::scalar(&[0.1, 0.2], &[0.5, 0.6]).is_err());
        assert!(MixingMeasure::scalar(&[0.1, 0.2], &[1.0, 0.0]).is_err());
        assert!(MixingMeasure::scalar(&[f64::NAN], &[1.0]).is_err());
        assert!(MixingMeasure::new(vec![vec![0.0], vec![0.0, 1.0]], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn records_min_gap() {
        let g = MixingMeasure::scalar(&[0.2, 0.8, 0.5], &[0.2, 0.3, 0.5]).unwrap();
        assert!((g.min_gap() - 0.3).abs() < 1e-15);
        assert_eq!(MixingMeasure::dirac(vec![1.0]).unwrap().min_gap(), f64::INFINITY);
    }

    #[test]
    fn canonicalize_sorts_and_is_idempotent() {
        let g = MixingMeasure::scalar(&[0.8, 0.2], &[0.7, 0.3]).unwrap();
        let c = g.canonicalize();
        assert_eq!(c.atoms(), &[vec![0.2], vec![0.8]]);
        assert_eq!(c.weights(), &[0.3, 0.7]);
        assert_eq!(c.canonicalize(), c);
        let sorted = MixingMeasure::scalar(&[0.2, 0.8], &[0.3, 0.7]).unwrap();
        assert_eq!(sorted.canonicalize(), sorted);
    }

    #[test]
    fn json_round_trip_revalidates() {
        let g = MixingMeasure::new(vec![vec![0.0, 1.0], vec![2.0, 3.0]], vec![0.25, 0.75]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"atoms":[[0.0,1.0],[2.0,3.0]],"weights":[0.25,0.75]}"#);
        let back: MixingMeasure = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let bad: std::result::Result<MixingMeasure, _> =
            serde_json::from_str(r#"{"atoms":[[0.0],[0.0]],"weights":[0.5,0.5]}"#);
        assert!(bad.is_err());
    }
}
