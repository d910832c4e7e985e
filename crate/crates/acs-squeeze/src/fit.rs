//! Ordinary least-squares fits of optimized-minimum-versus-J data to
//! polynomial forms in `x = 1/J`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A least-squares fit over the basis `{x^d : d in basis_degrees}`,
/// `x = 1/J`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    /// Exponents of the fitted basis functions.
    pub basis_degrees: Vec<u32>,
    /// Fitted coefficients, one per basis degree, in degree-list order.
    pub coefficients: Vec<f64>,
    /// Root-mean-square of the fit residuals.
    pub residual_rms: f64,
    /// The `(J, value)` data that was fitted.
    pub points: Vec<(f64, f64)>,
}

impl FitResult {
    /// Evaluates the fitted curve at spin value `j`.
    pub fn evaluate_at_j(&self, j: f64) -> f64 {
        let x = 1.0 / j;
        self.basis_degrees
            .iter()
            .zip(&self.coefficients)
            .map(|(&d, &c)| c * x.powi(d as i32))
            .sum()
    }
}

/// Fits `value ~ sum_d c_d * (1/J)^d` by ordinary least squares, solved with
/// an orthogonal (singular-value) factorization rather than normal equations.
pub fn fit_inverse_j(points: &[(f64, f64)], degrees: &[u32]) -> Result<FitResult> {
    if degrees.is_empty() {
        return Err(Error::RankDeficient);
    }
    let mut seen = degrees.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != degrees.len() {
        return Err(Error::RankDeficient);
    }
    if points.len() < degrees.len() {
        return Err(Error::TooFewPoints {
            need: degrees.len(),
            got: points.len(),
        });
    }
    let mut js: Vec<f64> = points.iter().map(|&(j, _)| j).collect();
    js.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let distinct = js.windows(2).all(|w| w[0] < w[1]);
    if !distinct || js.iter().any(|&j| j <= 0.0 || !j.is_finite()) {
        return Err(Error::BadFitPoints);
    }

    let m = points.len();
    let n = degrees.len();
    let design = DMatrix::from_fn(m, n, |r, c| (1.0 / points[r].0).powi(degrees[c] as i32));
    let rhs = DVector::from_iterator(m, points.iter().map(|&(_, v)| v));
    let svd = design.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    if svd.singular_values.min() <= max_sv * 1e-12 {
        return Err(Error::RankDeficient);
    }
    let coef = svd
        .solve(&rhs, max_sv * 1e-14)
        .map_err(|_| Error::RankDeficient)?;

    let residuals = &design * &coef - &rhs;
    let residual_rms = (residuals.norm_squared() / m as f64).sqrt();
    Ok(FitResult {
        basis_degrees: degrees.to_vec(),
        coefficients: coef.iter().copied().collect(),
        residual_rms,
        points: points.to_vec(),
    })
}
