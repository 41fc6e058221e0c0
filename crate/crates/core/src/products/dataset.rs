use serde::{Deserialize, Serialize};

use super::{check_atoms, pick_component};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::measures::MixingMeasure;
use crate::seed::rng_for;

/// `m` independent sequences `X^i_{[Nᵢ]}` of possibly different lengths.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExchangeableDataset {
    sequences: Vec<Vec<f64>>,
    seed: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct Line {
    seq: Vec<f64>,
}

impl ExchangeableDataset {
    pub fn new(sequences: Vec<Vec<f64>>, seed: Option<u64>) -> Result<Self> {
        if let Some(i) = sequences.iter().position(|s| s.is_empty()) {
            return Err(Error::InvalidParameter(format!("sequence {i} is empty")));
        }
        Ok(ExchangeableDataset { sequences, seed })
    }

    /// Checks every value against the kernel's data space.
    pub fn validate_for(&self, kernel: &Kernel) -> Result<()> {
        for (i, s) in self.sequences.iter().enumerate() {
            if let Some(x) = s.iter().find(|&&x| !kernel.in_data_space(x)) {
                return Err(Error::InvalidParameter(format!(
                    "sequence {i} holds {x}, outside the {} data space",
                    kernel.info().name
                )));
            }
        }
        Ok(())
    }

    pub fn sequences(&self) -> &[Vec<f64>] {
        &self.sequences
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn m(&self) -> usize {
        self.sequences.len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.sequences.iter().map(Vec::len).collect()
    }

    pub fn total_length(&self) -> usize {
        self.sequences.iter().map(Vec::len).sum()
    }

    /// `N̄_m = (Σ Nᵢ)/m`.
    pub fn mean_length(&self) -> f64 {
        if self.sequences.is_empty() {
            return 0.0;
        }
        self.total_length() as f64 / self.m() as f64
    }

    /// One `{"seq": [...]}` object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.sequences {
            out.push_str(&serde_json::to_string(&Line { seq: s.clone() }).expect("finite floats"));
            out.push('\n');
        }
        out
    }

    pub fn from_json_lines(text: &str) -> Result<Self> {
        let sequences = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str::<Line>(l).map(|line| line.seq))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(sequences, None)
    }
}

/// Simulates the hierarchical model: each sequence draws a latent component
/// from the weights of `g`, then `Nᵢ` i.i.d. observations from that atom.
/// The stream is derived from `seed`, so the dataset is reproducible.
pub fn sample_dataset(g: &MixingMeasure, kernel: &Kernel, lengths: &[usize], seed: u64) -> Result<ExchangeableDataset> {
    check_atoms(g, kernel)?;
    if lengths.contains(&0) {
        return Err(Error::InvalidParameter("sequence lengths must be ≥ 1".into()));
    }
    let mut rng = rng_for(seed, "dataset");
    let sequences = lengths
        .iter()
        .map(|&n| {
            let i = pick_component(g.weights(), &mut rng);
            (0..n).map(|_| kernel.draw(g.atom(i), &mut rng)).collect()
        })
        .collect();
    ExchangeableDataset::new(sequences, Some(seed))
}
