//! Ratio probes of inverse bounds along explicit perturbation paths, and the
//! two-point minimax lower bound.

mod report;

pub use report::{classify_rows, ProbeReport, ProbeRow, Verdict, PLATEAU_BAND, VANISHING_FACTOR};

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::identifiability::Direction;
use crate::kernels::{Divergence, Kernel};
use crate::measures::{distance_dn, distance_dr1r2, wasserstein, MixingMeasure};
use crate::parallel::with_workers;
use crate::products::{check_atoms, estimate_divergence, hellinger_upper_bound, DivergenceEstimate, EstimateOptions, Method};
use crate::seed::derive;

/// Default `ℓ` grid.
pub const DEFAULT_ELL_GRID: [f64; 3] = [10.0, 100.0, 1000.0];

/// Largest allowed `stderr / numerator` for Monte Carlo numerators.
pub const MC_RELATIVE_STDERR_GUARD: f64 = 0.1;

/// Direction rescaled for the path `θᵢ + a′ᵢ/ℓ`, `pᵢ + b′ᵢ/ℓ`:
/// `a′ᵢ = (aᵢ/pᵢ)/c`, `b′ᵢ = bᵢ/c` with `c = Σ(‖aᵢ/pᵢ‖₂ + |bᵢ|)`, so that
/// `D₁(G_ℓ, G₀) = 1/ℓ` once the identity matching is optimal.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedPath {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl NormalizedPath {
    pub fn new(g0: &MixingMeasure, direction: &Direction) -> Result<Self> {
        direction.validate(g0)?;
        let scaled: Vec<Vec<f64>> = direction
            .a
            .iter()
            .zip(g0.weights())
            .map(|(a, p)| a.iter().map(|v| v / p).collect())
            .collect();
        let norm: f64 = scaled
            .iter()
            .map(|a| a.iter().map(|v| v * v).sum::<f64>().sqrt())
            .sum::<f64>()
            + direction.b.iter().map(|v| v.abs()).sum::<f64>();
        Ok(NormalizedPath {
            a: scaled.iter().map(|a| a.iter().map(|v| v / norm).collect()).collect(),
            b: direction.b.iter().map(|v| v / norm).collect(),
        })
    }

    /// `G_ℓ`, checked against the kernel's parameter box.
    pub fn at(&self, g0: &MixingMeasure, kernel: &Kernel, ell: f64) -> Result<MixingMeasure> {
        let t = 1.0 / ell;
        let atoms = g0
            .atoms()
            .iter()
            .zip(&self.a)
            .map(|(th, a)| th.iter().zip(a).map(|(x, d)| x + t * d).collect())
            .collect();
        let weights = g0.weights().iter().zip(&self.b).map(|(p, b)| p + t * b).collect();
        let g = MixingMeasure::new(atoms, weights).map_err(|e| Error::InvalidPath(format!("ℓ = {ell}: {e}")))?;
        check_atoms(&g, kernel).map_err(|e| Error::InvalidPath(format!("ℓ = {ell}: {e}")))?;
        Ok(g)
    }
}

fn cell_options(opts: &EstimateOptions, label: &str) -> EstimateOptions {
    EstimateOptions {
        seed: derive(opts.seed, label),
        workers: None,
        ..opts.clone()
    }
}

fn guarded(est: DivergenceEstimate, what: &str) -> Result<DivergenceEstimate> {
    if est.method == Method::MonteCarlo && est.stderr > MC_RELATIVE_STDERR_GUARD * est.value {
        return Err(Error::BudgetExceeded(format!(
            "{what}: Monte Carlo stderr {:e} exceeds {}% of the estimate {:e}; raise the sample count",
            est.stderr,
            MC_RELATIVE_STDERR_GUARD * 100.0,
            est.value
        )));
    }
    Ok(est)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::InvalidParameter("grid values must be positive and finite".into()));
    }
    Ok(())
}

/// Numerators `V(P_{G_ℓ,N}, P_{G₀,N})` (or Hellinger) along a path.
fn path_numerators(
    kernel: &Kernel,
    g0: &MixingMeasure,
    path: &NormalizedPath,
    n: usize,
    ell_grid: &[f64],
    divergence: Divergence,
    opts: &EstimateOptions,
) -> Result<Vec<(f64, MixingMeasure, DivergenceEstimate)>> {
    let measures: Vec<(f64, MixingMeasure)> = ell_grid
        .iter()
        .map(|&l| path.at(g0, kernel, l).map(|g| (l, g)))
        .collect::<Result<_>>()?;
    with_workers(opts.workers, || {
        measures
            .into_par_iter()
            .map(|(l, g)| {
                let o = cell_options(opts, &format!("probe/N={n}/ell={l}"));
                let est = estimate_divergence(&g, g0, kernel, n, divergence, &o)?;
                Ok((l, g, guarded(est, &format!("ℓ = {l}"))?))
            })
            .collect()
    })
}

/// Ratios `V(P_{G_ℓ,N}, P_{G₀,N}) / D₁(G_ℓ, G₀)` along the normalized path
/// built from a first-order direction.
pub fn inverse_ratio_probe(
    kernel: &Kernel,
    g0: &MixingMeasure,
    direction: &Direction,
    n: usize,
    ell_grid: &[f64],
    divergence: Divergence,
    opts: &EstimateOptions,
) -> Result<ProbeReport> {
    check_grid(ell_grid)?;
    let path = NormalizedPath::new(g0, direction)?;
    let cells = path_numerators(kernel, g0, &path, n, ell_grid, divergence, opts)?;
    let series = format!("N={n}");
    let mut report = ProbeReport::new(
        "inverse_ratio",
        json!({
            "kernel": kernel,
            "g0": g0,
            "direction": direction,
            "normalized_direction": {"a": path.a, "b": path.b},
            "n": n,
            "divergence": divergence,
        }),
    );
    let mut identity_from: Option<f64> = None;
    let mut sorted_cells: Vec<_> = cells.iter().collect();
    sorted_cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (l, g, est) in &sorted_cells {
        let d1 = distance_dn(g, g0, 1.0)?;
        if (d1 - 1.0 / l).abs() <= 1e-12 {
            identity_from.get_or_insert(*l);
        } else {
            identity_from = None;
        }
        report.rows.push(ProbeRow::new(&series, *l, est.value, est.stderr, d1));
    }
    match identity_from {
        Some(l) => report.params["d1_equals_inverse_ell_from"] = json!(l),
        None => report
            .notes
            .push("D1(G_l, G0) = 1/l does not hold at the largest l of the grid".into()),
    }
    report.params["method"] = json!(cells.first().map(|c| c.2.method.as_str()));
    report.classify(&series);
    Ok(report)
}

/// Explicit pairs `(G_ℓ, H_ℓ)` for the location-scale exponential kernel.
///
/// With `ψ = p₁/σ₁`, `G_ℓ` moves `p₁` up by `ψ/((2+2ψ)ℓ)` (and `p₂` down)
/// and `ξ₁` down by `1/((2+2ψ)ℓ)`; `H_ℓ` keeps `(ξ₁, σ₁, p₁)` and puts the
/// second atom at `(ξ₁^ℓ, σ₂)`. Then `D₁(G_ℓ, H_ℓ) = 1/ℓ`.
pub fn locscale_pairs(g0: &MixingMeasure, ell: f64) -> Result<(MixingMeasure, MixingMeasure)> {
    if g0.len() != 2 || g0.dim() != 2 {
        return Err(Error::InvalidParameter("need two atoms (ξ, σ)".into()));
    }
    check_atoms(g0, &Kernel::LocScaleExponential)?;
    let (x1, s1, p1) = (g0.atom(0)[0], g0.atom(0)[1], g0.weights()[0]);
    let (x2, s2, p2) = (g0.atom(1)[0], g0.atom(1)[1], g0.weights()[1]);
    if (x1 - x2).abs() > 1e-12 {
        return Err(Error::InvalidParameter("locations must coincide (ξ₁ = ξ₂)".into()));
    }
    if (s1 - s2).abs() <= 1e-12 {
        return Err(Error::InvalidParameter("scales must differ (σ₁ ≠ σ₂)".into()));
    }
    if (p1 / s1 - p2 / s2).abs() > 1e-9 * (p1 / s1) {
        return Err(Error::InvalidParameter("need p₁/σ₁ = p₂/σ₂".into()));
    }
    let psi = p1 / s1;
    let c = (2.0 + 2.0 * psi) * ell;
    let x1l = x1 - 1.0 / c;
    let dp = psi / c;
    let g = MixingMeasure::new(vec![vec![x1l, s1], vec![x2, s2]], vec![p1 + dp, p2 - dp])
        .map_err(|e| Error::InvalidPath(e.to_string()))?;
    let h = MixingMeasure::new(vec![vec![x1, s1], vec![x1l, s2]], vec![p1, p2])
        .map_err(|e| Error::InvalidPath(e.to_string()))?;
    Ok((g, h))
}

/// Series `pair`: `V(P_{G_ℓ}, P_{H_ℓ}) / D₁(G_ℓ, H_ℓ)` (expected to vanish).
/// Series `one_sided`: `V(P_{G_ℓ}, P_{G₀}) / D₁(G_ℓ, G₀)` (expected to stay
/// bounded away from zero).
pub fn curvature_probe_locscale(g0: &MixingMeasure, ell_grid: &[f64], opts: &EstimateOptions) -> Result<ProbeReport> {
    check_grid(ell_grid)?;
    let kernel = Kernel::LocScaleExponential;
    let pairs: Vec<(f64, MixingMeasure, MixingMeasure)> = ell_grid
        .iter()
        .map(|&l| locscale_pairs(g0, l).map(|(g, h)| (l, g, h)))
        .collect::<Result<_>>()?;
    let mut report = ProbeReport::new(
        "curvature_locscale",
        json!({"kernel": kernel, "g0": g0, "n": 1, "psi": g0.weights()[0] / g0.atom(0)[1]}),
    );
    let cells: Vec<(ProbeRow, ProbeRow)> = with_workers(opts.workers, || {
        pairs
            .par_iter()
            .map(|(l, g, h)| {
                let o = cell_options(opts, &format!("curvature/ell={l}"));
                let v_pair = estimate_divergence(g, h, &kernel, 1, Divergence::Tv, &o)?;
                let v_one = estimate_divergence(g, g0, &kernel, 1, Divergence::Tv, &o)?;
                Ok((
                    ProbeRow::new("pair", *l, v_pair.value, v_pair.stderr, distance_dn(g, h, 1.0)?),
                    ProbeRow::new("one_sided", *l, v_one.value, v_one.stderr, distance_dn(g, g0, 1.0)?),
                ))
            })
            .collect::<Result<_>>()
    })?;
    let (pair, one): (Vec<_>, Vec<_>) = cells.into_iter().unzip();
    report.rows.extend(pair);
    report.rows.extend(one);
    report.classify("pair");
    report.classify("one_sided");
    Ok(report)
}

/// For each `N`, the ratio `h̄(P_{G_ε,N}, P_{G₀,N}) / D_{ψ(N)}(G_ε, G₀)` over
/// the `ε` grid, where `G_ε` shifts the first atom by `ε` along its first
/// coordinate, `ψ(N) = N^ψ_exponent`, and `h̄` is the product-Hellinger upper
/// bound. Series `N=<n>` hold the per-`ε` rows; series `min` holds the
/// per-`N` minima, indexed by `N`.
pub fn sqrt_n_sharpness_probe(
    kernel: &Kernel,
    g0: &MixingMeasure,
    psi_exponent: f64,
    n_grid: &[usize],
    eps_grid: &[f64],
) -> Result<ProbeReport> {
    if !(psi_exponent >= 1.0 && psi_exponent.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "ψ exponent must be ≥ 1, got {psi_exponent}"
        )));
    }
    if n_grid.is_empty() || n_grid.contains(&0) {
        return Err(Error::InvalidParameter("N grid must be nonempty and positive".into()));
    }
    check_atoms(g0, kernel)?;
    let mut report = ProbeReport::new(
        "sqrtN_sharpness",
        json!({"kernel": kernel, "g0": g0, "psi_exponent": psi_exponent, "n_grid": n_grid, "eps_grid": eps_grid}),
    );
    let excluded: Vec<f64> = eps_grid.iter().copied().filter(|e| *e == 0.0).collect();
    if !excluded.is_empty() {
        report.notes.push("ε = 0 gives 0/0 and was excluded".into());
    }
    let eps: Vec<f64> = eps_grid.iter().copied().filter(|e| *e != 0.0).collect();
    if eps.is_empty() {
        return Err(Error::InvalidParameter("ε grid has no nonzero value".into()));
    }
    let mut shifted = Vec::with_capacity(eps.len());
    for &e in &eps {
        let mut atoms = g0.atoms().to_vec();
        atoms[0][0] += e;
        let g = MixingMeasure::new(atoms, g0.weights().to_vec()).map_err(|err| Error::InvalidPath(err.to_string()))?;
        check_atoms(&g, kernel).map_err(|err| Error::InvalidPath(format!("ε = {e}: {err}")))?;
        shifted.push((e, g));
    }
    let mut minima = Vec::new();
    for &n in n_grid {
        let psi = (n as f64).powf(psi_exponent);
        let series = format!("N={n}");
        let mut best: Option<ProbeRow> = None;
        for (e, g) in &shifted {
            let num = hellinger_upper_bound(g, g0, kernel, n)?;
            let den = distance_dn(g, g0, psi)?;
            let row = ProbeRow::new(&series, *e, num, 0.0, den);
            if best.as_ref().is_none_or(|b| row.ratio < b.ratio) {
                best = Some(row.clone());
            }
            report.rows.push(row);
        }
        let b = best.expect("nonempty ε grid");
        minima.push(ProbeRow::new("min", n as f64, b.numerator, 0.0, b.denominator));
    }
    let strictly_decreasing = minima.windows(2).all(|w| w[1].ratio < w[0].ratio);
    report.rows.extend(minima);
    let verdict = if strictly_decreasing && psi_exponent > 1.0 {
        Verdict::Decreasing
    } else {
        classify_rows(&report.series("min"))
    };
    report.verdicts.insert("min".into(), verdict);
    Ok(report)
}

/// Ratios `V/D_{r,1}(G_ℓ, G₀)` (series `D_r1`) and `V/W_r(G_ℓ, G₀)^r`
/// (series `W_r`) along the normalized path of a direction with some
/// `bᵢ ≠ 0`.
#[allow(clippy::too_many_arguments)]
pub fn impact_probe_dr(
    kernel: &Kernel,
    g0: &MixingMeasure,
    direction: &Direction,
    r: f64,
    n: usize,
    ell_grid: &[f64],
    divergence: Divergence,
    opts: &EstimateOptions,
) -> Result<ProbeReport> {
    check_grid(ell_grid)?;
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("r must be ≥ 1, got {r}")));
    }
    if direction.b.iter().all(|&b| b == 0.0) {
        return Err(Error::InvalidDirection("some weight component bᵢ must be nonzero".into()));
    }
    let path = NormalizedPath::new(g0, direction)?;
    let cells = path_numerators(kernel, g0, &path, n, ell_grid, divergence, opts)?;
    let mut report = ProbeReport::new(
        "impact_Dr",
        json!({"kernel": kernel, "g0": g0, "direction": direction, "r": r, "n": n, "divergence": divergence}),
    );
    let mut sorted: Vec<_> = cells.iter().collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (l, g, est) in &sorted {
        let d = distance_dr1r2(g, g0, r, 1.0)?;
        report.rows.push(ProbeRow::new("D_r1", *l, est.value, est.stderr, d));
    }
    for (l, g, est) in &sorted {
        let w = wasserstein(g, g0, r)?.powf(r);
        report.rows.push(ProbeRow::new("W_r", *l, est.value, est.stderr, w));
    }
    report.classify("D_r1");
    report.classify("W_r");
    Ok(report)
}

/// Weight-only path `p₁ + 1/ℓ, p₂ − 1/ℓ` on a two-atom `G₀`; the ratio
/// `V(P_{G_ℓ,N}, P_{G₀,N}) / D_N(G_ℓ, G₀)` equals `½ V(P_{θ₁}^N, P_{θ₂}^N)`,
/// never above `½`.
pub fn weight_only_probe(
    kernel: &Kernel,
    g0: &MixingMeasure,
    n: usize,
    ell_grid: &[f64],
    opts: &EstimateOptions,
) -> Result<ProbeReport> {
    check_grid(ell_grid)?;
    if g0.len() != 2 {
        return Err(Error::InvalidParameter("the weight-only path needs k = 2".into()));
    }
    let direction = Direction {
        a: vec![vec![0.0; g0.dim()]; 2],
        b: vec![1.0, -1.0],
    };
    let mut report = ProbeReport::new("weight_only", json!({"kernel": kernel, "g0": g0, "n": n}));
    let series = format!("N={n}");
    for &l in ell_grid {
        let g = MixingMeasure::new(
            g0.atoms().to_vec(),
            vec![g0.weights()[0] + 1.0 / l, g0.weights()[1] - 1.0 / l],
        )
        .map_err(|e| Error::InvalidPath(format!("ℓ = {l}: {e}")))?;
        let o = cell_options(opts, &format!("weight_only/N={n}/ell={l}"));
        let est = guarded(estimate_divergence(&g, g0, kernel, n, Divergence::Tv, &o)?, "weight-only")?;
        report.rows.push(ProbeRow::new(&series, l, est.value, est.stderr, distance_dn(&g, g0, n as f64)?));
    }
    report.params["direction"] = json!(direction);
    report.classify(&series);
    Ok(report)
}

/// `(a/4)·((1 − a)/(γ√(mN)))^{1/β₀}`.
pub fn lecam_two_point_bound(m: f64, n: f64, gamma: f64, beta0: f64, a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidParameter(format!("a must lie in (0, 1), got {a}")));
    }
    if !(gamma > 0.0 && beta0 > 0.0 && m > 0.0 && n > 0.0) {
        return Err(Error::InvalidParameter("m, N, γ and β₀ must be positive".into()));
    }
    Ok(a / 4.0 * ((1.0 - a) / (gamma * (m * n).sqrt())).powf(1.0 / beta0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identifiability::gamma_pathological_direction;

    fn gamma_g0() -> MixingMeasure {
        MixingMeasure::new(vec![vec![2.0, 3.0], vec![3.0, 3.0]], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn normalized_gamma_direction() {
        let p = NormalizedPath::new(&gamma_g0(), &gamma_pathological_direction(2.0, 3.0)).unwrap();
        assert!((p.a[0][1] - 0.6).abs() < 1e-15);
        assert!((p.b[0] + 0.2).abs() < 1e-15 && (p.b[1] - 0.2).abs() < 1e-15);
        let g = p.at(&gamma_g0(), &Kernel::Gamma, 100.0).unwrap();
        assert!((distance_dn(&g, &gamma_g0(), 1.0).unwrap() - 0.01).abs() < 1e-12);
    }

    #[test]
    fn gamma_ratio_vanishes_at_one_observation() {
        let r = inverse_ratio_probe(
            &Kernel::Gamma,
            &gamma_g0(),
            &gamma_pathological_direction(2.0, 3.0),
            1,
            &DEFAULT_ELL_GRID,
            Divergence::Tv,
            &EstimateOptions::default(),
        )
        .unwrap();
        let ratios: Vec<f64> = r.rows.iter().map(|x| x.ratio).collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
        assert_eq!(r.verdict("N=1"), Some(Verdict::Vanishing));
    }

    #[test]
    fn path_leaving_the_box_is_rejected() {
        let d = Direction {
            a: vec![vec![-100.0, 0.0], vec![0.0, 0.0]],
            b: vec![0.0, 0.0],
        };
        let err = inverse_ratio_probe(&Kernel::Gamma, &gamma_g0(), &d, 1, &[0.4], Divergence::Tv, &EstimateOptions::default());
        assert!(matches!(err, Err(Error::InvalidPath(_))));
    }

    #[test]
    fn locscale_construction() {
        let g0 = MixingMeasure::new(vec![vec![0.0, 1.0], vec![0.0, 2.0]], vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        for l in DEFAULT_ELL_GRID {
            let (g, h) = locscale_pairs(&g0, l).unwrap();
            assert!((distance_dn(&g, &h, 1.0).unwrap() - 1.0 / l).abs() < 1e-12);
        }
        let bad = MixingMeasure::new(vec![vec![0.0, 1.0], vec![0.5, 1.0]], vec![0.5, 0.5]).unwrap();
        assert!(locscale_pairs(&bad, 10.0).is_err());
    }

    #[test]
    fn sqrt_n_rows() {
        let k = Kernel::GaussianLocation { sigma: 1.0 };
        let g0 = MixingMeasure::scalar(&[0.0, 2.0], &[0.5, 0.5]).unwrap();
        let r = sqrt_n_sharpness_probe(&k, &g0, 2.0, &[4, 16, 64], &[0.0, 0.01, 0.1]).unwrap();
        assert_eq!(r.verdict("min"), Some(Verdict::Decreasing));
        assert_eq!(r.notes.len(), 1);
        let mins = r.series("min");
        for w in mins.windows(2) {
            assert!((w[1].ratio / w[0].ratio - 0.5).abs() < 1e-9);
        }
        let control = sqrt_n_sharpness_probe(&k, &g0, 1.0, &[4, 16, 64], &[0.01, 0.1]).unwrap();
        let m = control.series("min");
        assert!(m.iter().all(|x| (x.ratio / m[0].ratio - 1.0).abs() < 1e-9));
    }

    #[test]
    fn impact_probe_matches_inverse_probe_at_r_one() {
        let g0 = gamma_g0();
        let d = gamma_pathological_direction(2.0, 3.0);
        let o = EstimateOptions::default();
        let inv = inverse_ratio_probe(&Kernel::Gamma, &g0, &d, 1, &[10.0, 100.0], Divergence::Tv, &o).unwrap();
        let imp = impact_probe_dr(&Kernel::Gamma, &g0, &d, 1.0, 1, &[10.0, 100.0], Divergence::Tv, &o).unwrap();
        for (a, b) in inv.rows.iter().zip(imp.series("D_r1")) {
            assert!((a.ratio - b.ratio).abs() < 1e-10);
        }
        let no_b = Direction {
            a: d.a.clone(),
            b: vec![0.0, 0.0],
        };
        assert!(impact_probe_dr(&Kernel::Gamma, &g0, &no_b, 2.0, 1, &[10.0], Divergence::Tv, &o).is_err());
    }

    #[test]
    fn weight_only_ratio_is_half_the_atom_tv() {
        let g0 = MixingMeasure::scalar(&[0.2, 0.7], &[0.5, 0.5]).unwrap();
        let r = weight_only_probe(&Kernel::Bernoulli, &g0, 3, &DEFAULT_ELL_GRID, &EstimateOptions::default()).unwrap();
        let a = MixingMeasure::dirac(vec![0.2]).unwrap();
        let b = MixingMeasure::dirac(vec![0.7]).unwrap();
        let v = estimate_divergence(&a, &b, &Kernel::Bernoulli, 3, Divergence::Tv, &EstimateOptions::default()).unwrap().value;
        for row in &r.rows {
            assert!((row.ratio - 0.5 * v).abs() < 1e-12);
            assert!(row.ratio <= 0.5);
        }
    }

    #[test]
    fn lecam_values() {
        assert!((lecam_two_point_bound(100.0, 4.0, 1.0, 1.0, 0.5).unwrap() - 0.003125).abs() < 1e-18);
        let a = lecam_two_point_bound(100.0, 4.0, 1.0, 1.0, 0.3).unwrap();
        let b = lecam_two_point_bound(200.0, 4.0, 1.0, 1.0, 0.3).unwrap();
        assert!((a / b - 2f64.sqrt()).abs() < 1e-12);
        assert!(lecam_two_point_bound(100.0, 4.0, 1.0, 1.0, 1.0).is_err());
        assert!(lecam_two_point_bound(100.0, 4.0, 1.0, 1.0, 1e-9).unwrap() < 1e-9);
    }
}
