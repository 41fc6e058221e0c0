//! Subcommand dispatch and report emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::{ExperimentConfig, IdentifyCheck, ProbeParams, Task};
use crate::error::{Error, Result};
use crate::identifiability::{
    bernoulli_first_order_system, bernoulli_nonidentifiable_witness, degenerate_direction_check, first_order_gram,
    gen_vandermonde_det, vandermonde_product,
};
use crate::kernels::{moment_map, Kernel};
use crate::measures::{atom_and_weight_distances, distance_dn, distance_dr1r2, wasserstein, MixingMeasure};
use crate::posterior::{contraction_experiment, ContractionConfig};
use crate::probes::{
    curvature_probe_locscale, impact_probe_dr, inverse_ratio_probe, lecam_two_point_bound, sqrt_n_sharpness_probe,
    weight_only_probe,
};
use crate::products::{d_mh, estimate_divergence, hellinger_upper_bound, tv_upper_bound, EstimateOptions};
use crate::seed::derive;

/// In-memory result of a subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub csv: String,
    /// Machine-readable envelope.
    pub json: Value,
}

/// Paths written by [`run`].
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub csv: PathBuf,
    pub json: PathBuf,
}

/// Process exit status for an outcome: 0 on success, 2 for configuration
/// errors, 1 for anything raised while computing.
pub fn exit_code(result: &Result<RunOutput>) -> i32 {
    match result {
        Ok(_) => 0,
        Err(Error::Schema { .. } | Error::InvalidConfig(_)) => 2,
        Err(_) => 1,
    }
}

/// Executes `config` and writes `<subcommand>.csv` and `<subcommand>.json`
/// into `out_dir`. On error nothing is left behind under those names.
pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput> {
    let name = config.subcommand.as_str();
    let out = RunOutput {
        csv: out_dir.join(format!("{name}.csv")),
        json: out_dir.join(format!("{name}.json")),
    };
    let result = execute(config).and_then(|report| {
        fs::create_dir_all(out_dir)?;
        fs::write(&out.csv, &report.csv)?;
        let mut text = serde_json::to_string_pretty(&report.json)?;
        text.push('\n');
        fs::write(&out.json, text)?;
        Ok(())
    });
    match result {
        Ok(()) => Ok(out),
        Err(e) => {
            let _ = fs::remove_file(&out.csv);
            let _ = fs::remove_file(&out.json);
            Err(e)
        }
    }
}

/// Runs the subcommand without touching the filesystem.
pub fn execute(config: &ExperimentConfig) -> Result<Report> {
    let (csv, result) = match &config.params {
        Task::Distance(p) => distance(config, p)?,
        Task::Divergence(p) => divergence(config, p)?,
        Task::Identify(p) => identify(config, &p.checks)?,
        Task::Witness(p) => witness(config, &p.a_values)?,
        Task::Probe(p) => probe(config, p)?,
        Task::Minimax(p) => {
            let mut csv = String::from("m,n,gamma,beta0,a,bound\n");
            let mut rows = Vec::new();
            for c in &p.cases {
                let b = lecam_two_point_bound(c.m, c.n, c.gamma, c.beta0, c.a)?;
                writeln!(csv, "{},{},{},{},{},{}", c.m, c.n, c.gamma, c.beta0, c.a, b).unwrap();
                rows.push(json!({"case": c, "bound": b}));
            }
            (csv, json!({"bounds": rows}))
        }
        Task::PosteriorSim(p) => {
            let cfg = ContractionConfig {
                prior: p.prior.clone(),
                mcmc: p.mcmc.clone(),
                identifiable_length: p.identifiable_length,
                workers: config.workers,
            };
            let kernel = config.kernel()?;
            let report = contraction_experiment(
                kernel,
                &config.measures[0],
                &p.m_grid,
                p.length_law,
                p.replicates,
                &cfg,
                derive(config.seed, "posterior-sim"),
            )?;
            let medians: Vec<Value> = report
                .m_grid
                .iter()
                .map(|&m| json!({"m": m, "median_atom_error": report.median_atom_error(m)}))
                .collect();
            let summary = json!({
                "slope_weights_vs_log_m": report.slope_weights,
                "slope_atoms_vs_log_total_length": report.slope_atoms,
                "median_atom_error": medians,
            });
            (report.to_csv(), summary)
        }
    };
    let mut cfg = serde_json::to_value(config)?;
    if let Some(obj) = cfg.as_object_mut() {
        obj.remove("workers");
    }
    Ok(Report {
        csv,
        json: json!({
            "subcommand": config.subcommand.as_str(),
            "seed": config.seed,
            "status": "ok",
            "config": cfg,
            "result": result,
        }),
    })
}

fn options(config: &ExperimentConfig, label: &str, mc_samples: Option<usize>) -> EstimateOptions {
    let mut o = EstimateOptions::with_seed(derive(config.seed, label));
    o.workers = config.workers;
    if let Some(s) = mc_samples {
        o.mc_samples = s;
    }
    o
}

fn distance(config: &ExperimentConfig, p: &super::config::DistanceParams) -> Result<(String, Value)> {
    let mut csv = String::from("left,right,metric,param,value\n");
    let ms = &config.measures;
    for i in 0..ms.len() {
        for j in (i + 1)..ms.len() {
            let (g, h) = (&ms[i], &ms[j]);
            let mut row = |metric: &str, param: String, v: f64| {
                writeln!(csv, "{i},{j},{metric},{param},{v}").unwrap();
            };
            for &p in &p.wasserstein_p {
                row("W_p", p.to_string(), wasserstein(g, h, p)?);
            }
            if g.len() == h.len() {
                for &n in &p.n_values {
                    row("D_N", n.to_string(), distance_dn(g, h, n)?);
                }
                for &(r1, r2) in &p.r_pairs {
                    row("D_r1r2", format!("{r1};{r2}"), distance_dr1r2(g, h, r1, r2)?);
                }
                let (dt, dp) = atom_and_weight_distances(g, h)?;
                row("d_theta", String::new(), dt);
                row("d_p", String::new(), dp);
            }
        }
    }
    Ok((csv, json!({"pairs": ms.len() * ms.len().saturating_sub(1) / 2})))
}

fn divergence(config: &ExperimentConfig, p: &super::config::DivergenceParams) -> Result<(String, Value)> {
    let kernel = config.kernel()?;
    let (g, h) = (&config.measures[0], &config.measures[1]);
    let mut csv = String::from("n,divergence,value,stderr,method,samples,upper_bound\n");
    for &n in &p.n_values {
        for &which in &p.divergences {
            let mut o = options(config, &format!("divergence/N={n}/{which:?}"), p.mc_samples);
            o.method = p.method;
            let est = estimate_divergence(g, h, kernel, n, which, &o)?;
            let bound = match which {
                crate::kernels::Divergence::Tv => tv_upper_bound(g, h, kernel, n).ok(),
                crate::kernels::Divergence::Hellinger => hellinger_upper_bound(g, h, kernel, n).ok(),
                crate::kernels::Divergence::Kl => None,
            };
            writeln!(
                csv,
                "{n},{},{},{},{},{},{}",
                serde_json::to_value(which)?.as_str().unwrap_or_default(),
                est.value,
                est.stderr,
                est.method.as_str(),
                est.samples,
                bound.map(|b| b.to_string()).unwrap_or_default()
            )
            .unwrap();
        }
    }
    let dmh = match &p.lengths {
        Some(lengths) => Some(d_mh(g, h, kernel, lengths, &options(config, "divergence/dmh", p.mc_samples))?),
        None => None,
    };
    Ok((csv, json!({"d_mh": dmh})))
}

fn identify(config: &ExperimentConfig, checks: &[IdentifyCheck]) -> Result<(String, Value)> {
    let mut csv = String::from("check,index,key,value\n");
    let mut out = Vec::new();
    for (i, c) in checks.iter().enumerate() {
        let mut row = |name: &str, key: String, v: f64| {
            writeln!(csv, "{name},{i},{key},{v}").unwrap();
        };
        match c {
            IdentifyCheck::Vandermonde { points, basis } => {
                let det = gen_vandermonde_det(points, *basis);
                let formula = vandermonde_product(points);
                row("vandermonde", "det".into(), det);
                row("vandermonde", "product_formula".into(), formula);
                out.push(json!({"check": "vandermonde", "basis": basis, "det": det, "product_formula": formula}));
            }
            IdentifyCheck::BernoulliSystem { n_values } => {
                let g = &config.measures[0];
                let mut per_n = Vec::new();
                for &n in n_values {
                    let r = bernoulli_first_order_system(g, n)?;
                    let expected = (n + 1).min(2 * g.len());
                    row("bernoulli_system", format!("rank@n={n}"), r.rank as f64);
                    row("bernoulli_system", format!("expected_rank@n={n}"), expected as f64);
                    row("bernoulli_system", format!("smallest_singular_value@n={n}"), r.smallest_singular_value);
                    row("bernoulli_system", format!("nullity@n={n}"), r.nullspace.len() as f64);
                    per_n.push(json!({"n": n, "rank": r.rank, "expected_rank": expected,
                        "smallest_singular_value": r.smallest_singular_value,
                        "nullity": r.nullspace.len(), "determinant": r.determinant}));
                }
                out.push(json!({"check": "bernoulli_system", "systems": per_n}));
            }
            IdentifyCheck::Gram { grid } => {
                let r = first_order_gram(config.kernel()?, config.measures[0].atoms(), grid)?;
                row("gram", "smallest_eigenvalue".into(), r.smallest_eigenvalue);
                row("gram", "largest_eigenvalue".into(), r.largest_eigenvalue);
                row("gram", "relative_smallest".into(), r.relative_smallest());
                row("gram", "degenerate".into(), r.degenerate as u8 as f64);
                out.push(json!({"check": "gram", "report": r}));
            }
            IdentifyCheck::Direction { direction, grid } => {
                let g0 = &config.measures[0];
                let d = direction.resolve(g0)?;
                let residual = degenerate_direction_check(config.kernel()?, g0, &d, grid)?;
                row("direction", "residual".into(), residual);
                out.push(json!({"check": "direction", "direction": d, "residual": residual}));
            }
            IdentifyCheck::MomentMap { theta } => {
                let r = moment_map(config.kernel()?, theta)?;
                for (j, l) in r.lambda.iter().enumerate() {
                    row("moment_map", format!("lambda_{}", j + 1), *l);
                }
                row("moment_map", "det_closed".into(), r.det_closed);
                row("moment_map", "det_fd".into(), r.det_fd);
                row("moment_map", "relative_mismatch".into(), r.relative_mismatch());
                out.push(json!({"check": "moment_map", "report": r}));
            }
        }
    }
    Ok((csv, json!({"checks": out})))
}

fn joined(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

fn witness(config: &ExperimentConfig, a_values: &[f64]) -> Result<(String, Value)> {
    let g = &config.measures[0];
    let mut csv = String::from("a,n,atoms,weights,max_moment_mismatch,tv_at_n,tv_at_n_plus_1\n");
    let mut out = Vec::new();
    for &a in a_values {
        let w = bernoulli_nonidentifiable_witness(g, a)?;
        writeln!(
            csv,
            "{a},{},{},{},{},{},{}",
            w.n,
            joined(w.witness.atoms().iter().map(|t| t[0])),
            joined(w.witness.weights().iter().copied()),
            w.max_moment_mismatch,
            w.tv_at_n,
            w.tv_at_n_plus_1
        )
        .unwrap();
        out.push(w);
    }
    Ok((csv, json!({"witnesses": out})))
}

fn probe(config: &ExperimentConfig, p: &ProbeParams) -> Result<(String, Value)> {
    let g0: &MixingMeasure = &config.measures[0];
    let report = match p {
        ProbeParams::InverseRatio { n, direction, ell_grid, divergence, mc_samples } => inverse_ratio_probe(
            config.kernel()?,
            g0,
            &direction.resolve(g0)?,
            *n,
            ell_grid,
            *divergence,
            &options(config, "probe/inverse_ratio", *mc_samples),
        )?,
        ProbeParams::CurvatureLocscale { ell_grid, mc_samples } => {
            if !matches!(config.kernel, None | Some(Kernel::LocScaleExponential)) {
                return Err(Error::schema("kernel", "the curvature probe is for the location-scale exponential kernel"));
            }
            curvature_probe_locscale(g0, ell_grid, &options(config, "probe/curvature", *mc_samples))?
        }
        ProbeParams::SqrtN { psi_exponent, n_grid, eps_grid } => {
            sqrt_n_sharpness_probe(config.kernel()?, g0, *psi_exponent, n_grid, eps_grid)?
        }
        ProbeParams::ImpactDr { direction, r, n, ell_grid, divergence, mc_samples } => impact_probe_dr(
            config.kernel()?,
            g0,
            &direction.resolve(g0)?,
            *r,
            *n,
            ell_grid,
            *divergence,
            &options(config, "probe/impact", *mc_samples),
        )?,
        ProbeParams::WeightOnly { n, ell_grid, mc_samples } => {
            weight_only_probe(config.kernel()?, g0, *n, ell_grid, &options(config, "probe/weight_only", *mc_samples))?
        }
    };
    Ok((report.to_csv(), report.envelope()))
}
