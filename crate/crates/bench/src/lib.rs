//! Shared fixtures for the criterion benches.

use mixprod::seed::rng_for;
use mixprod::MixingMeasure;
use rand::Rng;

/// A random `k`-atom measure in `[0, 1]^q` with weights bounded away from 0.
pub fn random_measure(k: usize, q: usize, label: &str) -> MixingMeasure {
    let mut rng = rng_for(0xbe9c, label);
    let atoms: Vec<Vec<f64>> = (0..k).map(|_| (0..q).map(|_| rng.random::<f64>()).collect()).collect();
    let weights: Vec<f64> = (0..k).map(|_| 0.1 + rng.random::<f64>()).collect();
    MixingMeasure::normalized(atoms, weights).expect("distinct random atoms")
}

/// A pair of measures of the same size.
pub fn random_pair(k: usize, q: usize) -> (MixingMeasure, MixingMeasure) {
    (random_measure(k, q, &format!("left/{k}/{q}")), random_measure(k, q, &format!("right/{k}/{q}")))
}

/// Two-atom gamma measures around the pathological pair `(2, 3), (3, 3)`.
pub fn gamma_pair() -> (MixingMeasure, MixingMeasure) {
    let g = MixingMeasure::new(vec![vec![2.0, 3.0], vec![3.0, 3.0]], vec![0.5, 0.5]).unwrap();
    let h = MixingMeasure::new(vec![vec![2.2, 3.0], vec![3.0, 2.5]], vec![0.4, 0.6]).unwrap();
    (g, h)
}
