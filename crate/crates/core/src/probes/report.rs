use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

/// Decay factor `ratio(last)/ratio(first)` below which a series vanishes.
pub const VANISHING_FACTOR: f64 = 0.2;
/// Band `[lo, hi] × median` that a bounded-away series must stay within.
pub const PLATEAU_BAND: (f64, f64) = (0.5, 2.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Vanishing,
    BoundedAway,
    Decreasing,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub series: String,
    /// `ℓ`, `ε` or `N`, depending on the series.
    pub index: f64,
    pub numerator: f64,
    pub numerator_stderr: f64,
    pub denominator: f64,
    pub ratio: f64,
}

impl ProbeRow {
    pub fn new(series: &str, index: f64, numerator: f64, numerator_stderr: f64, denominator: f64) -> Self {
        ProbeRow {
            series: series.to_string(),
            index,
            numerator,
            numerator_stderr,
            denominator,
            ratio: numerator / denominator,
        }
    }

    pub fn ratio_stderr(&self) -> f64 {
        self.numerator_stderr / self.denominator
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub probe: String,
    pub params: serde_json::Value,
    pub rows: Vec<ProbeRow>,
    pub verdicts: BTreeMap<String, Verdict>,
    pub notes: Vec<String>,
}

impl ProbeReport {
    pub fn new(probe: &str, params: serde_json::Value) -> Self {
        ProbeReport {
            probe: probe.to_string(),
            params,
            rows: Vec::new(),
            verdicts: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn series(&self, name: &str) -> Vec<&ProbeRow> {
        self.rows.iter().filter(|r| r.series == name).collect()
    }

    pub fn verdict(&self, series: &str) -> Option<Verdict> {
        self.verdicts.get(series).copied()
    }

    /// Classifies a series by the ratio-probe rules.
    pub fn classify(&mut self, series: &str) {
        let v = classify_rows(&self.series(series));
        self.verdicts.insert(series.to_string(), v);
    }

    pub const CSV_HEADER: &'static str = "probe,series,index,numerator,numerator_stderr,denominator,ratio";

    /// One row per cell; floats in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.probe, r.series, r.index, r.numerator, r.numerator_stderr, r.denominator, r.ratio
            );
        }
        out
    }

    /// Envelope without the table.
    pub fn envelope(&self) -> serde_json::Value {
        serde_json::json!({
            "probe": self.probe,
            "params": self.params,
            "verdicts": self.verdicts,
            "notes": self.notes,
        })
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Vanishing: `ratio(last)/ratio(first) < 0.2` with the drop larger than
/// three combined standard errors. Bounded away: every ratio within
/// `[0.5, 2]×` the median. Rows are taken in increasing index order.
pub fn classify_rows(rows: &[&ProbeRow]) -> Verdict {
    if rows.len() < 2 {
        return Verdict::Inconclusive;
    }
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| a.index.total_cmp(&b.index));
    let first = sorted[0];
    let last = sorted[sorted.len() - 1];
    let se = (first.ratio_stderr().powi(2) + last.ratio_stderr().powi(2)).sqrt();
    if last.ratio / first.ratio < VANISHING_FACTOR && first.ratio - last.ratio > 3.0 * se {
        return Verdict::Vanishing;
    }
    let mut ratios: Vec<f64> = sorted.iter().map(|r| r.ratio).collect();
    let med = median(&mut ratios);
    if sorted
        .iter()
        .all(|r| r.ratio >= PLATEAU_BAND.0 * med && r.ratio <= PLATEAU_BAND.1 * med)
    {
        return Verdict::BoundedAway;
    }
    Verdict::Inconclusive
}
