//! Exact discrete optimal transport by the transportation simplex method.
//!
//! The basis is kept as a spanning tree of `m + n − 1` cells over the
//! bipartite row/column graph (degenerate zero-flow cells included), so
//! potentials and pivot cycles are always well defined.

use std::collections::VecDeque;

/// Optimal coupling and its cost.
#[derive(Clone, Debug)]
pub struct TransportPlan {
    pub flow: Vec<Vec<f64>>,
    pub cost: f64,
}

/// Solves `min Σ cᵢⱼ xᵢⱼ` over couplings of `supply` and `demand`.
///
/// Both marginals must be nonnegative with equal totals (up to rounding; the
/// last demand entry absorbs the discrepancy).
pub fn solve(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> TransportPlan {
    let m = supply.len();
    let n = demand.len();
    assert!(m > 0 && n > 0, "empty marginal");
    let mut a = supply.to_vec();
    let mut b = demand.to_vec();
    let gap = a.iter().sum::<f64>() - b.iter().sum::<f64>();
    b[n - 1] = (b[n - 1] + gap).max(0.0);

    let mut flow = vec![vec![0.0; n]; m];
    let mut basic = vec![vec![false; n]; m];

    // North-west corner start: one step right or down at a time keeps the
    // basic cells a spanning tree even under degeneracy.
    let (mut i, mut j) = (0usize, 0usize);
    loop {
        let t = a[i].min(b[j]);
        flow[i][j] = t;
        basic[i][j] = true;
        a[i] -= t;
        b[j] -= t;
        if i == m - 1 && j == n - 1 {
            break;
        }
        if i == m - 1 {
            j += 1;
        } else if j == n - 1 || a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }

    let scale = cost
        .iter()
        .flatten()
        .fold(0.0f64, |acc, &c| acc.max(c.abs()))
        .max(1.0);
    let tol = 1e-13 * scale;
    let max_iter = 1000 * (m + n) * (m + n);

    for _ in 0..max_iter {
        let (u, v) = potentials(&basic, cost, m, n);
        let mut best = -tol;
        let mut enter = None;
        for (i, row) in cost.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if basic[i][j] {
                    continue;
                }
                let r = c - u[i] - v[j];
                if r < best {
                    best = r;
                    enter = Some((i, j));
                }
            }
        }
        let Some((ei, ej)) = enter else { break };

        // Tree path from column node `ej` to row node `ei`.
        let path = tree_path(&basic, m, n, m + ej, ei);
        // Cells along the path alternate −, +, −, … starting next to `ej`.
        let mut theta = f64::INFINITY;
        let mut leave = None;
        for (step, &(ci, cj)) in path.iter().enumerate() {
            if step % 2 == 0 && flow[ci][cj] < theta {
                theta = flow[ci][cj];
                leave = Some((ci, cj));
            }
        }
        let (li, lj) = leave.expect("pivot cycle has a decreasing cell");
        for (step, &(ci, cj)) in path.iter().enumerate() {
            if step % 2 == 0 {
                flow[ci][cj] -= theta;
            } else {
                flow[ci][cj] += theta;
            }
        }
        flow[ei][ej] += theta;
        flow[li][lj] = 0.0;
        basic[li][lj] = false;
        basic[ei][ej] = true;
    }

    for row in flow.iter_mut() {
        for x in row.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
    }
    let cost_value = flow
        .iter()
        .zip(cost)
        .map(|(fr, cr)| fr.iter().zip(cr).map(|(x, c)| x * c).sum::<f64>())
        .sum();
    TransportPlan {
        flow,
        cost: cost_value,
    }
}

fn adjacency(basic: &[Vec<bool>], m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); m + n];
    for i in 0..m {
        for j in 0..n {
            if basic[i][j] {
                adj[i].push(m + j);
                adj[m + j].push(i);
            }
        }
    }
    adj
}

fn potentials(basic: &[Vec<bool>], cost: &[Vec<f64>], m: usize, n: usize) -> (Vec<f64>, Vec<f64>) {
    let adj = adjacency(basic, m, n);
    let mut pot = vec![f64::NAN; m + n];
    let mut queue = VecDeque::new();
    pot[0] = 0.0;
    queue.push_back(0);
    while let Some(node) = queue.pop_front() {
        for &next in &adj[node] {
            if !pot[next].is_nan() {
                continue;
            }
            // u_i + v_j = c_ij on basic cells.
            pot[next] = if node < m {
                cost[node][next - m] - pot[node]
            } else {
                cost[next][node - m] - pot[node]
            };
            queue.push_back(next);
        }
    }
    let u = pot[..m].iter().map(|p| if p.is_nan() { 0.0 } else { *p }).collect();
    let v = pot[m..].iter().map(|p| if p.is_nan() { 0.0 } else { *p }).collect();
    (u, v)
}

/// Cells on the unique tree path between two nodes, in order from `from`.
fn tree_path(basic: &[Vec<bool>], m: usize, n: usize, from: usize, to: usize) -> Vec<(usize, usize)> {
    let adj = adjacency(basic, m, n);
    let mut parent = vec![usize::MAX; m + n];
    let mut queue = VecDeque::new();
    parent[from] = from;
    queue.push_back(from);
    while let Some(node) = queue.pop_front() {
        if node == to {
            break;
        }
        for &next in &adj[node] {
            if parent[next] == usize::MAX {
                parent[next] = node;
                queue.push_back(next);
            }
        }
    }
    let mut nodes = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        nodes.push(cur);
    }
    nodes.reverse();
    nodes
        .windows(2)
        .map(|w| {
            let (x, y) = (w[0], w[1]);
            if x < m {
                (x, y - m)
            } else {
                (y, x - m)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_vertex_enumeration() {
        // Atoms (0, 1), weights (0.5, 0.5) vs (0.3, 0.7): the polytope is
        // x00 ∈ [0, 0.3]; cost = |x01| + |x10| = (0.5 − x00) + (0.3 − x00).
        let cost = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let plan = solve(&[0.5, 0.5], &[0.3, 0.7], &cost);
        assert!((plan.cost - 0.2).abs() < 1e-15);
    }

    #[test]
    fn marginals_are_respected() {
        let supply = [0.1, 0.4, 0.2, 0.3];
        let demand = [0.25, 0.25, 0.5];
        let cost: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..3).map(|j| ((i as f64) - 1.3 * j as f64).abs().powi(2)).collect())
            .collect();
        let plan = solve(&supply, &demand, &cost);
        for (i, s) in supply.iter().enumerate() {
            assert!((plan.flow[i].iter().sum::<f64>() - s).abs() < 1e-14);
        }
        for (j, d) in demand.iter().enumerate() {
            assert!((plan.flow.iter().map(|r| r[j]).sum::<f64>() - d).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_marginals() {
        let cost = vec![vec![0.0, 2.0, 3.0], vec![2.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]];
        let w = [0.2, 0.3, 0.5];
        assert!(solve(&w, &w, &cost).cost.abs() < 1e-15);
    }
}
