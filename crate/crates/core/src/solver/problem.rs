use crate::error::{Error, Result};
use crate::linalg::{dot, norm, DenseMatrix};
use crate::penalty::PenaltySpec;

/// Tolerance on `|‖x_j‖² - 1|` for a standardized design.
pub const STANDARDIZED_TOL: f64 = 1e-10;

/// A least-squares problem `y ≈ X β`.
///
/// `X` is stored column-major. After [`Problem::standardize`] each column has
/// unit Euclidean norm and `column_norms` holds the norms of the original
/// columns, so coefficients can be mapped back with
/// [`Problem::to_original_scale`].
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    y: Vec<f64>,
    x: DenseMatrix,
    standardized: bool,
    column_norms: Vec<f64>,
    column_means: Vec<f64>,
    y_offset: f64,
}

impl Problem {
    pub fn new(y: Vec<f64>, x: DenseMatrix) -> Result<Self> {
        let (n, p) = (x.nrows(), x.ncols());
        if n == 0 || p == 0 {
            return Err(Error::InvalidProblem(format!("need n >= 1 and p >= 1, got n={n}, p={p}")));
        }
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: y.len() });
        }
        if !y.iter().all(|v| v.is_finite()) || !x.all_finite() {
            return Err(Error::InvalidProblem("non-finite entries in y or X".into()));
        }
        Ok(Self { y, x, standardized: false, column_norms: vec![1.0; p], column_means: vec![0.0; p], y_offset: 0.0 })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn x(&self) -> &DenseMatrix {
        &self.x
    }

    pub fn is_standardized(&self) -> bool {
        self.standardized
    }

    /// Euclidean norms of the columns before standardization.
    pub fn column_norms(&self) -> &[f64] {
        &self.column_norms
    }

    /// Multipliers applied to each column by standardization (`1 / norm`).
    pub fn scale_factors(&self) -> Vec<f64> {
        self.column_norms.iter().map(|c| 1.0 / c).collect()
    }

    /// Mean removed from the response by [`Problem::center_response`].
    pub fn y_offset(&self) -> f64 {
        self.y_offset
    }

    /// Means removed from the original columns by [`Problem::center`].
    pub fn column_means(&self) -> &[f64] {
        &self.column_means
    }

    /// `sqrt(n)`: the factor between coefficients of unit-variance columns and
    /// coefficients of unit-norm columns.
    pub fn sample_scale(&self) -> f64 {
        (self.n() as f64).sqrt()
    }

    /// Scale each column to unit Euclidean norm. The response is untouched.
    pub fn standardize(&self) -> Result<Self> {
        let mut x = self.x.clone();
        let mut norms = self.column_norms.clone();
        for j in 0..x.ncols() {
            let c = norm(x.col(j));
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::ZeroNormColumn(j));
            }
            if c != 1.0 {
                x.col_mut(j).iter_mut().for_each(|v| *v /= c);
            }
            norms[j] *= c;
        }
        Ok(Self { x, standardized: true, column_norms: norms, ..self.clone() })
    }

    /// Subtract the response mean, remembering it for predictions.
    pub fn center_response(&self) -> Self {
        let mean = self.y.iter().sum::<f64>() / self.n() as f64;
        let y = self.y.iter().map(|v| v - mean).collect();
        Self { y, y_offset: self.y_offset + mean, ..self.clone() }
    }

    /// Center the response and every column. Call before standardizing.
    pub fn center(&self) -> Self {
        let n = self.n() as f64;
        let mut x = self.x.clone();
        let mut means = self.column_means.clone();
        for j in 0..x.ncols() {
            let m = x.col(j).iter().sum::<f64>() / n;
            x.col_mut(j).iter_mut().for_each(|v| *v -= m);
            means[j] += m * self.column_norms[j];
        }
        Self { x, column_means: means, ..self.center_response() }
    }

    /// Intercept on the original scale for standardized coefficients `beta`.
    pub fn intercept(&self, beta: &[f64]) -> f64 {
        let orig = self.to_original_scale(beta);
        self.y_offset - dot(&orig, &self.column_means)
    }

    /// Rows `rows` of the problem in the given order, as a fresh unstandardized
    /// problem on the original scale.
    pub fn subset_rows(&self, rows: &[usize]) -> Result<Self> {
        let mut x = self.x.select_rows(rows);
        for j in 0..x.ncols() {
            let (c, m) = (self.column_norms[j], self.column_means[j]);
            if c != 1.0 || m != 0.0 {
                x.col_mut(j).iter_mut().for_each(|v| *v = *v * c + m);
            }
        }
        let y = rows.iter().map(|&i| self.y[i] + self.y_offset).collect();
        Self::new(y, x)
    }

    pub fn check_standardized(&self) -> Result<()> {
        if !self.standardized {
            return Err(Error::InvalidProblem("problem must be standardized first".into()));
        }
        for j in 0..self.p() {
            let c = dot(self.x.col(j), self.x.col(j));
            if (c - 1.0).abs() > STANDARDIZED_TOL {
                return Err(Error::InvalidProblem(format!("column {j} has squared norm {c}")));
            }
        }
        Ok(())
    }

    pub(crate) fn check_beta(&self, beta: &[f64]) -> Result<()> {
        if beta.len() != self.p() {
            return Err(Error::DimensionMismatch { expected: self.p(), got: beta.len() });
        }
        Ok(())
    }

    /// `y - X β`, computed from scratch.
    pub fn residual(&self, beta: &[f64]) -> Vec<f64> {
        let fitted = self.x.mul_vec(beta);
        self.y.iter().zip(fitted).map(|(y, f)| y - f).collect()
    }

    /// `½‖y - Xβ‖² + Σ P(|β_j|)`, computed from scratch.
    pub fn objective(&self, spec: &PenaltySpec, beta: &[f64]) -> f64 {
        let r = self.residual(beta);
        0.5 * dot(&r, &r) + penalty_sum(spec, beta)
    }

    /// Map coefficients of the standardized columns back to the original columns.
    pub fn to_original_scale(&self, beta: &[f64]) -> Vec<f64> {
        beta.iter().zip(&self.column_norms).map(|(b, c)| b / c).collect()
    }

    pub fn to_standardized_scale(&self, beta: &[f64]) -> Vec<f64> {
        beta.iter().zip(&self.column_norms).map(|(b, c)| b * c).collect()
    }

    /// `max_j |x_j' y|`; the smallest `λ` at which `β = 0` satisfies the KKT
    /// conditions.
    pub fn lambda_max(&self) -> f64 {
        (0..self.p()).map(|j| dot(self.x.col(j), &self.y).abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn penalty_sum(spec: &PenaltySpec, beta: &[f64]) -> f64 {
    beta.iter().filter(|b| **b != 0.0).map(|b| spec.value_abs(*b)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(rows: &[Vec<f64>], y: Vec<f64>) -> Problem {
        Problem::new(y, DenseMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn unit_columns_are_unchanged() {
        let p = problem(&[vec![1.0, 0.6], vec![0.0, 0.8]], vec![1.0, 2.0]).standardize().unwrap();
        assert_eq!(p.scale_factors(), vec![1.0, 1.0]);
        assert_eq!(p.x().col(0), &[1.0, 0.0]);
    }

    #[test]
    fn constant_column_factor() {
        let c = 2.5;
        let n = 4;
        let rows: Vec<_> = (0..n).map(|_| vec![c]).collect();
        let p = problem(&rows, vec![0.0; n]).standardize().unwrap();
        let expected = 1.0 / (c * (n as f64).sqrt());
        assert!((p.scale_factors()[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn random_matrix_norms() {
        use rand::Rng as _;
        let mut rng = crate::rng::rng_from_seed(7);
        let rows: Vec<Vec<f64>> = (0..5).map(|_| (0..3).map(|_| rng.random::<f64>() - 0.5).collect()).collect();
        let p = problem(&rows, vec![0.0; 5]).standardize().unwrap();
        for j in 0..3 {
            assert!((norm(p.x().col(j)) - 1.0).abs() < 1e-12);
        }
        p.check_standardized().unwrap();
        // original-scale round trip
        let b = vec![1.0, -2.0, 3.0];
        let back = p.to_standardized_scale(&p.to_original_scale(&b));
        for (u, v) in b.iter().zip(back) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn centering_round_trip_and_intercept() {
        let rows = vec![vec![1.0, 5.0], vec![2.0, 3.0], vec![4.0, 4.0], vec![7.0, 0.0]];
        let x = DenseMatrix::from_rows(&rows).unwrap();
        let truth = [2.0, -1.0];
        let y: Vec<f64> = x.mul_vec(&truth).iter().map(|v| v + 3.0).collect();
        let raw = Problem::new(y.clone(), x).unwrap();
        let std = raw.center().standardize().unwrap();
        for j in 0..2 {
            assert!(std.x().col(j).iter().sum::<f64>().abs() < 1e-12);
        }
        let back = std.subset_rows(&[0, 1, 2, 3]).unwrap();
        for (a, b) in back.x().as_slice().iter().zip(raw.x().as_slice()) {
            assert!((a - b).abs() < 1e-12);
        }
        let beta = std.to_standardized_scale(&truth);
        assert!(std.residual(&beta).iter().all(|r| r.abs() < 1e-12));
        assert!((std.intercept(&beta) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_column_reports_index() {
        let p = problem(&[vec![1.0, 0.0], vec![2.0, 0.0]], vec![1.0, 1.0]);
        assert_eq!(p.standardize().unwrap_err(), Error::ZeroNormColumn(1));
    }

    #[test]
    fn lambda_max_examples() {
        let p = problem(&[vec![1.0, 2.0], vec![3.0, 4.0]], vec![0.0, 0.0]).standardize().unwrap();
        assert_eq!(p.lambda_max(), 0.0);
        let id = Problem::new(vec![3.0, -1.0, 2.0], DenseMatrix::identity(3)).unwrap();
        assert_eq!(id.standardize().unwrap().lambda_max(), 3.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Problem::new(vec![1.0], DenseMatrix::zeros(2, 1)).is_err());
        assert!(Problem::new(vec![f64::NAN], DenseMatrix::zeros(1, 1)).is_err());
        assert!(Problem::new(vec![], DenseMatrix::zeros(0, 1)).is_err());
    }
}
