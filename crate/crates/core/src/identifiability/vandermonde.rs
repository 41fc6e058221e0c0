use serde::{Deserialize, Serialize};

use super::dd::{self, Dd};

/// Basis `f_1..f_{2k}` of the generalized Vandermonde matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "snake_case")]
pub enum Basis {
    /// `f_j(x) = x^{j−1}`.
    Monomial,
    /// `f_j(x) = x^{j−1}(1 − x)^{n−(j−1)}`.
    Bernstein { n: usize },
}

impl Basis {
    /// `(f_j(x), f_j′(x))` for `j = 1..=count`.
    pub fn eval(&self, x: f64, count: usize) -> Vec<(f64, f64)> {
        (0..count)
            .map(|p| match *self {
                Basis::Monomial => {
                    let v = x.powi(p as i32);
                    let d = if p == 0 { 0.0 } else { p as f64 * x.powi(p as i32 - 1) };
                    (v, d)
                }
                Basis::Bernstein { n } => bernstein_term(x, p, n),
            })
            .collect()
    }
}

/// `x^p (1 − x)^{n−p}` and its derivative.
pub(crate) fn bernstein_term(x: f64, p: usize, n: usize) -> (f64, f64) {
    let q = n - p;
    let xp = x.powi(p as i32);
    let yq = (1.0 - x).powi(q as i32);
    let mut d = 0.0;
    if p > 0 {
        d += p as f64 * x.powi(p as i32 - 1) * yq;
    }
    if q > 0 {
        d -= q as f64 * xp * (1.0 - x).powi(q as i32 - 1);
    }
    (xp * yq, d)
}

/// Determinant of the `2k × 2k` matrix whose rows are, for each `x_m` in
/// turn, `(f_j(x_m))_j` and `(f_j′(x_m))_j`, computed by LU factorization.
///
/// Entries and elimination are carried in double-double arithmetic: the
/// determinant vanishes to fourth order as points merge, and plain `f64`
/// elimination loses all relative accuracy there.
///
/// For distinct points this equals `Π_{α<β}(x_α − x_β)⁴` for the monomial
/// basis and for the Bernstein basis with `n = 2k − 1`; it is `1` for `k = 1`
/// with either basis.
pub fn gen_vandermonde_det(xs: &[f64], basis: Basis) -> f64 {
    if xs.is_empty() {
        return 1.0;
    }
    let size = 2 * xs.len();
    let mut m = vec![vec![Dd::ZERO; size]; size];
    for (r, &x) in xs.iter().enumerate() {
        for (j, (v, d)) in eval_dd(basis, x, size).into_iter().enumerate() {
            m[2 * r][j] = v;
            m[2 * r + 1][j] = d;
        }
    }
    dd::determinant(m).to_f64()
}

fn eval_dd(basis: Basis, x: f64, count: usize) -> Vec<(Dd, Dd)> {
    let xd = Dd::from_f64(x);
    let yd = Dd::ONE - xd;
    (0..count)
        .map(|p| {
            let pf = Dd::from_f64(p as f64);
            match basis {
                Basis::Monomial => {
                    let d = if p == 0 { Dd::ZERO } else { pf * xd.powi(p as u32 - 1) };
                    (xd.powi(p as u32), d)
                }
                Basis::Bernstein { n } => {
                    let q = n - p;
                    let qf = Dd::from_f64(q as f64);
                    let v = xd.powi(p as u32) * yd.powi(q as u32);
                    let mut d = Dd::ZERO;
                    if p > 0 {
                        d = d + pf * xd.powi(p as u32 - 1) * yd.powi(q as u32);
                    }
                    if q > 0 {
                        d = d - qf * xd.powi(p as u32) * yd.powi(q as u32 - 1);
                    }
                    (v, d)
                }
            }
        })
        .collect()
}

/// `Π_{α<β}(x_α − x_β)⁴`.
pub fn vandermonde_product(xs: &[f64]) -> f64 {
    let mut out = 1.0;
    for a in 0..xs.len() {
        for b in a + 1..xs.len() {
            out *= (xs[a] - xs[b]).powi(4);
        }
    }
    out
}
