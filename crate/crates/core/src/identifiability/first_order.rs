//! Numeric first-order identifiability checks for general kernels.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{DataSpace, Kernel};
use crate::measures::MixingMeasure;
use crate::quadrature::gauss_legendre;

/// Relative eigenvalue below which a Gram matrix is reported degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Evaluation grid for the function systems.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    /// `{0, 1}` for discrete kernels; otherwise composite Gauss–Legendre on
    /// the effective support, doubled until the smallest eigenvalue settles.
    Auto,
    /// Explicit points with unit weights.
    Points { points: Vec<f64> },
    /// Fixed composite Gauss–Legendre rule with `nodes` per panel.
    GaussLegendre { nodes: usize },
}

/// A perturbation direction `(a₁..a_k, b₁..b_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl Direction {
    pub fn validate(&self, g0: &MixingMeasure) -> Result<()> {
        if self.a.len() != g0.len() || self.b.len() != g0.len() {
            return Err(Error::InvalidDirection(format!(
                "direction has {} atom and {} weight components for k = {}",
                self.a.len(),
                self.b.len(),
                g0.len()
            )));
        }
        if self.a.iter().any(|ai| ai.len() != g0.dim()) {
            return Err(Error::InvalidDirection("atom components must match the atom dimension".into()));
        }
        if self.a.iter().flatten().chain(&self.b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidDirection("components must be finite".into()));
        }
        if self.a.iter().flatten().chain(&self.b).all(|&v| v == 0.0) {
            return Err(Error::InvalidDirection("direction is zero".into()));
        }
        let total: f64 = self.b.iter().sum();
        let scale: f64 = self.b.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        if total.abs() > 1e-12 * scale {
            return Err(Error::InvalidDirection(format!("weight components sum to {total}, not 0")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    /// Smallest eigenvalue of the unit-diagonal Gram matrix.
    pub smallest_eigenvalue: f64,
    pub largest_eigenvalue: f64,
    /// Number of grid points in the final grid.
    pub grid_points: usize,
    /// Whether the smallest eigenvalue settled under grid doubling.
    pub converged: bool,
    /// `smallest / largest < DEGENERACY_THRESHOLD`.
    pub degenerate: bool,
}

impl GramReport {
    pub fn relative_smallest(&self) -> f64 {
        self.smallest_eigenvalue / self.largest_eigenvalue
    }
}

/// Composite Gauss–Legendre nodes over the union of effective supports,
/// split at every support endpoint and interior breakpoint.
fn composite_grid(kernel: &Kernel, atoms: &[Vec<f64>], per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut cuts = Vec::new();
    for a in atoms {
        let (l, u, inner) = kernel.effective_support(a);
        lo = lo.min(l);
        hi = hi.max(u);
        cuts.extend(inner);
        cuts.extend(kernel.boundary_points(a));
        cuts.push(l);
        cuts.push(u);
    }
    cuts.retain(|c| *c >= lo && *c <= hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for w in cuts.windows(2) {
        let (x, q) = gauss_legendre(per_panel, w[0], w[1]);
        nodes.extend(x);
        weights.extend(q);
    }
    (nodes, weights)
}

fn grid_for(kernel: &Kernel, atoms: &[Vec<f64>], grid: &GridSpec, per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    match grid {
        GridSpec::Points { points } => (points.clone(), vec![1.0; points.len()]),
        GridSpec::GaussLegendre { nodes } => composite_grid(kernel, atoms, *nodes),
        GridSpec::Auto => {
            if kernel.info().data_space == DataSpace::Binary {
                (vec![0.0, 1.0], vec![1.0, 1.0])
            } else {
                composite_grid(kernel, atoms, per_panel)
            }
        }
    }
}

/// Extreme eigenvalues of the unit-diagonal Gram matrix of `functions`
/// (each sampled on the grid) under the quadrature weights.
pub fn normalized_gram_eigenvalues(functions: &[Vec<f64>], weights: &[f64]) -> (f64, f64) {
    let m = functions.len();
    let mut gram = DMatrix::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            let v: f64 = functions[a]
                .iter()
                .zip(&functions[b])
                .zip(weights)
                .map(|((x, y), w)| w * x * y)
                .sum();
            gram[(a, b)] = v;
            gram[(b, a)] = v;
        }
    }
    let scale: Vec<f64> = (0..m)
        .map(|i| {
            let d = gram[(i, i)];
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    for a in 0..m {
        for b in 0..m {
            gram[(a, b)] *= scale[a] * scale[b];
        }
    }
    let eig = SymmetricEigen::new(gram).eigenvalues;
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min, max)
}

/// Gram check for an arbitrary (possibly unnormalized) density, with
/// central finite-difference gradients.
pub fn first_order_gram_with(
    density: &dyn Fn(f64, &[f64]) -> f64,
    atoms: &[Vec<f64>],
    nodes: &[f64],
    weights: &[f64],
) -> (f64, f64) {
    let mut functions = Vec::new();
    for a in atoms {
        functions.push(nodes.iter().map(|&x| density(x, a)).collect());
        let mut t = a.clone();
        for j in 0..a.len() {
            let h = 1e-6 * a[j].abs().max(1.0);
            functions.push(
                nodes
                    .iter()
                    .map(|&x| {
                        t[j] = a[j] + h;
                        let up = density(x, &t);
                        t[j] = a[j] - h;
                        let down = density(x, &t);
                        t[j] = a[j];
                        (up - down) / (2.0 * h)
                    })
                    .collect(),
            );
        }
    }
    normalized_gram_eigenvalues(&functions, weights)
}

fn kernel_functions(kernel: &Kernel, atoms: &[Vec<f64>], nodes: &[f64]) -> Result<Vec<Vec<f64>>> {
    let mut functions = Vec::new();
    for a in atoms {
        let mut grads = vec![Vec::with_capacity(nodes.len()); a.len()];
        let mut vals = Vec::with_capacity(nodes.len());
        for &x in nodes {
            vals.push(kernel.density_unchecked(x, a));
            for (j, g) in kernel.grad_density(x, a)?.into_iter().enumerate() {
                grads[j].push(g);
            }
        }
        functions.push(vals);
        functions.extend(grads);
    }
    Ok(functions)
}

/// Smallest eigenvalue of the normalized Gram matrix of
/// `{f(·|θᵢ), ∂f/∂θ_j(·|θᵢ)}` sampled on the grid.
///
/// With [`GridSpec::Auto`] on continuous kernels the grid starts at 16 nodes
/// per panel and doubles until the smallest eigenvalue moves by less than 1%
/// (or stays below the degeneracy threshold), up to 512 per panel.
pub fn first_order_gram(kernel: &Kernel, atoms: &[Vec<f64>], grid: &GridSpec) -> Result<GramReport> {
    if atoms.is_empty() {
        return Err(Error::InvalidParameter("at least one atom is required".into()));
    }
    for a in atoms {
        kernel.validate(a)?;
    }
    let adaptive = matches!(grid, GridSpec::Auto) && kernel.info().data_space != DataSpace::Binary;
    let mut per_panel = 16;
    let mut previous: Option<(f64, f64)> = None;
    loop {
        let (nodes, weights) = grid_for(kernel, atoms, grid, per_panel);
        let functions = kernel_functions(kernel, atoms, &nodes)?;
        let (min, max) = normalized_gram_eigenvalues(&functions, &weights);
        let degenerate = min / max < DEGENERACY_THRESHOLD;
        let settled = previous.is_some_and(|(pmin, pmax)| {
            let both_small = degenerate && pmin / pmax < DEGENERACY_THRESHOLD;
            both_small || (min - pmin).abs() < 0.01 * pmin.abs()
        });
        if !adaptive || settled || per_panel >= 512 {
            return Ok(GramReport {
                smallest_eigenvalue: min.max(0.0),
                largest_eigenvalue: max,
                grid_points: nodes.len(),
                converged: !adaptive || settled,
                degenerate,
            });
        }
        previous = Some((min, max));
        per_panel *= 2;
    }
}

/// `max_x |Σᵢ (aᵢᵀ∇f(x|θᵢ) + bᵢ f(x|θᵢ))|`, divided by
/// `max_x Σᵢ (‖aᵢ‖ ‖∇f(x|θᵢ)‖ + |bᵢ| f(x|θᵢ))`.
///
/// A value near zero means the direction solves the first-order equation on
/// the grid.
pub fn degenerate_direction_check(
    kernel: &Kernel,
    g0: &MixingMeasure,
    direction: &Direction,
    grid: &GridSpec,
) -> Result<f64> {
    direction.validate(g0)?;
    crate::products::check_atoms(g0, kernel)?;
    let atoms = g0.atoms();
    let grid = match grid {
        GridSpec::Auto => GridSpec::GaussLegendre { nodes: 64 },
        other => other.clone(),
    };
    let (nodes, _) = grid_for(kernel, atoms, &grid, 64);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for &x in &nodes {
        let mut r = 0.0;
        let mut s = 0.0;
        for (i, theta) in atoms.iter().enumerate() {
            let f = kernel.density_unchecked(x, theta);
            let grad = kernel.grad_density(x, theta)?;
            let dot: f64 = direction.a[i].iter().zip(&grad).map(|(u, v)| u * v).sum();
            r += dot + direction.b[i] * f;
            let an = direction.a[i].iter().map(|v| v * v).sum::<f64>().sqrt();
            let gn = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
            s += an * gn + direction.b[i].abs() * f;
        }
        worst = worst.max(r.abs());
        scale = scale.max(s);
    }
    Ok(if scale > 0.0 { worst / scale } else { 0.0 })
}

/// The direction `a₁ = (0, β/α), a₂ = 0, b = (−1, +1)` that solves the
/// first-order equation for gamma atoms `(α, β)` and `(α + 1, β)`.
pub fn gamma_pathological_direction(alpha: f64, beta: f64) -> Direction {
    Direction {
        a: vec![vec![0.0, beta / alpha], vec![0.0, 0.0]],
        b: vec![-1.0, 1.0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_pair() -> MixingMeasure {
        MixingMeasure::new(vec![vec![2.0, 3.0], vec![3.0, 3.0]], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn gram_examples() {
        let g = first_order_gram(&Kernel::GaussianLocation { sigma: 1.0 }, &[vec![0.0], vec![1.0]], &GridSpec::Auto).unwrap();
        assert!(g.smallest_eigenvalue > 1e-4, "{g:?}");
        assert!(!g.degenerate);

        let p = first_order_gram(&Kernel::Gamma, gamma_pair().atoms(), &GridSpec::Auto).unwrap();
        assert!(p.relative_smallest() < 1e-10, "{p:?}");
        assert!(p.degenerate);

        let b = first_order_gram(&Kernel::Bernoulli, &[vec![0.3]], &GridSpec::Auto).unwrap();
        assert!(b.smallest_eigenvalue > 0.0);
    }

    #[test]
    fn unnormalized_density_gives_the_same_verdicts() {
        let normalized = |x: f64, t: &[f64]| Kernel::Gamma.density_unchecked(x, t);
        let raw = |x: f64, t: &[f64]| if x > 0.0 { ((t[0] - 1.0) * x.ln() - t[1] * x).exp() } else { 0.0 };
        let (nodes, weights) = composite_grid(&Kernel::Gamma, gamma_pair().atoms(), 64);
        for (atoms, degenerate) in [
            (gamma_pair().atoms().to_vec(), true),
            (vec![vec![2.0, 3.0], vec![3.5, 2.0]], false),
        ] {
            for f in [&normalized as &dyn Fn(f64, &[f64]) -> f64, &raw] {
                let (min, max) = first_order_gram_with(f, &atoms, &nodes, &weights);
                assert_eq!(min / max < 1e-10, degenerate, "{atoms:?}: {min} {max}");
            }
        }
    }

    #[test]
    fn direction_checks() {
        let g0 = gamma_pair();
        let d = gamma_pathological_direction(2.0, 3.0);
        let r = degenerate_direction_check(&Kernel::Gamma, &g0, &d, &GridSpec::Auto).unwrap();
        assert!(r < 1e-10, "{r}");
        let random = Direction {
            a: vec![vec![0.3, -0.2], vec![0.1, 0.4]],
            b: vec![0.25, -0.25],
        };
        assert!(degenerate_direction_check(&Kernel::Gamma, &g0, &random, &GridSpec::Auto).unwrap() > 1e-3);
        let zero = Direction {
            a: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            b: vec![0.0, 0.0],
        };
        assert!(matches!(
            degenerate_direction_check(&Kernel::Gamma, &g0, &zero, &GridSpec::Auto),
            Err(Error::InvalidDirection(_))
        ));
    }
}
