use super::product::{eval_product, ProductModel};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TypeEstimate {
    pub value: f64,
    pub band: (f64, f64),
}

/// Exponential type from secant slopes of log|A(iy)| on an increasing grid. The value is
/// the last secant; the band spans the last two, widened by twice their difference.
pub fn estimate_type(model: &ProductModel, y_grid: &[f64]) -> Result<TypeEstimate> {
    if y_grid.len() < 3 {
        return Err(Error::Invalid("type estimate needs at least three grid points".into()));
    }
    if y_grid.windows(2).any(|w| !(w[0] < w[1])) || y_grid[0] <= 0.0 {
        return Err(Error::Invalid("y grid must be positive and increasing".into()));
    }
    let mut logs = Vec::with_capacity(y_grid.len());
    for &y in y_grid {
        let e = eval_product(model, Complex64::new(0.0, y), 1e-8)?;
        logs.push(e.ln_abs);
    }
    type_from_samples(y_grid, &logs)
}

/// The same estimate from precomputed samples ln|A(iy)| on the grid.
pub fn type_from_samples(y_grid: &[f64], logs: &[f64]) -> Result<TypeEstimate> {
    if y_grid.len() < 3 || logs.len() != y_grid.len() {
        return Err(Error::Invalid("type estimate needs at least three samples".into()));
    }
    if logs.iter().any(|l| !l.is_finite()) {
        return Err(Error::Invalid("ln|A(iy)| is not finite on the grid".into()));
    }
    let slopes: Vec<f64> = (1..y_grid.len())
        .map(|i| (logs[i] - logs[i - 1]) / (y_grid[i] - y_grid[i - 1]))
        .collect();
    let s1 = slopes[slopes.len() - 1];
    let s0 = slopes[slopes.len() - 2];
    let d = (s1 - s0).abs();
    let lo = (s0.min(s1) - 2.0 * d).max(0.0);
    let hi = (s0.max(s1) + 2.0 * d).max(lo);
    let value = s1.clamp(lo, hi);
    Ok(TypeEstimate { value, band: (lo, hi) })
}

/// 2^k for k with 2^k in [lo, hi].
pub fn dyadic_grid(lo: f64, hi: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut y = 2f64.powi(lo.log2().ceil() as i32);
    while y <= hi {
        v.push(y);
        y *= 2.0;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entire::SymmetricZeroSet;
    use std::f64::consts::PI;

    #[test]
    fn sine_has_type_pi() {
        let t = estimate_type(&ProductModel::SinPi, &dyadic_grid(1.0, 50.0)).unwrap();
        assert!((t.value - PI).abs() < 0.01 * PI);
        assert!(t.band.0 <= t.value && t.value <= t.band.1);
    }

    #[test]
    fn half_density_lattice() {
        let m = ProductModel::canonical(SymmetricZeroSet::lattice(0.5, 0.1).unwrap());
        let t = estimate_type(&m, &dyadic_grid(1.0, 64.0)).unwrap();
        assert!((t.value - PI / 2.0).abs() < 0.05 * PI / 2.0, "{t:?}");
    }

    #[test]
    fn types_add_under_products() {
        let m = ProductModel::compose(vec![(ProductModel::SinPi, 2)], vec![], 1.0);
        let t = estimate_type(&m, &dyadic_grid(1.0, 50.0)).unwrap();
        assert!((t.value - 2.0 * PI).abs() < 0.02 * 2.0 * PI);
    }

    #[test]
    fn short_grid_is_rejected() {
        assert!(estimate_type(&ProductModel::SinPi, &[1.0, 2.0]).is_err());
    }
}
