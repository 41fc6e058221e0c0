use nalgebra::DMatrix;
use serde::Serialize;

/// Rank analysis of a coefficient matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearSystemReport {
    pub matrix: Vec<Vec<f64>>,
    pub rank: usize,
    /// Singular values in decreasing order (`min(rows, cols)` of them).
    pub singular_values: Vec<f64>,
    pub smallest_singular_value: f64,
    /// Orthonormal basis of the right nullspace.
    pub nullspace: Vec<Vec<f64>>,
    /// Determinant, for square systems.
    pub determinant: Option<f64>,
}

impl LinearSystemReport {
    /// Rank via SVD with tolerance `σ_max · max(rows, cols) · 1e-12`.
    pub fn analyze(matrix: Vec<Vec<f64>>) -> Self {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        // Pad with zero rows so the SVD returns a full set of right vectors.
        let size = rows.max(cols);
        let a = DMatrix::from_fn(size, cols, |r, c| if r < rows { matrix[r][c] } else { 0.0 });
        let svd = a.clone().svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors requested");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
        let sorted: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
        let smax = sorted.first().copied().unwrap_or(0.0);
        let tol = smax * size as f64 * 1e-12;
        let rank = sorted.iter().filter(|&&s| s > tol).count();
        let nullspace = order
            .iter()
            .filter(|&&i| svd.singular_values[i] <= tol)
            .map(|&i| v_t.row(i).iter().copied().collect())
            .collect();
        let singular_values: Vec<f64> = sorted.into_iter().take(rows.min(cols)).collect();
        let determinant = (rows == cols).then(|| DMatrix::from_fn(rows, cols, |r, c| matrix[r][c]).determinant());
        LinearSystemReport {
            smallest_singular_value: singular_values.last().copied().unwrap_or(0.0),
            matrix,
            rank,
            singular_values,
            nullspace,
            determinant,
        }
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    /// `max ‖Av‖₂ / (‖A‖₂ ‖v‖₂)` over the nullspace basis.
    pub fn nullspace_residual(&self) -> f64 {
        let norm = self.singular_values.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
        self.nullspace
            .iter()
            .map(|v| {
                let av: f64 = self
                    .matrix
                    .iter()
                    .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>().powi(2))
                    .sum::<f64>()
                    .sqrt();
                let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                av / (norm * vn)
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace() {
        let r = LinearSystemReport::analyze(vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]);
        assert_eq!(r.rank, 1);
        assert_eq!(r.nullspace.len(), 2);
        assert!(r.nullspace_residual() < 1e-14);
        assert_eq!(r.rank + r.nullspace.len(), r.cols());
        let sq = LinearSystemReport::analyze(vec![vec![2.0, 0.0], vec![0.0, 3.0]]);
        assert_eq!(sq.rank, 2);
        assert!((sq.determinant.unwrap() - 6.0).abs() < 1e-15);
        assert!((sq.smallest_singular_value - 2.0).abs() < 1e-15);
    }
}
