//! Central finite differences over flat coordinate slices.

use crate::error::Result;

/// Default step for first derivatives of order-one coordinates.
pub const DEFAULT_STEP: f64 = 1e-5;

/// Step scaled by the coordinate magnitude, `h * max(1, |x|)`.
pub fn scaled_step(h: f64, x: f64) -> f64 {
    h * x.abs().max(1.0)
}

/// Central difference of a scalar function along coordinate `i`.
pub fn partial<F>(f: &F, x: &[f64], i: usize, h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64> + ?Sized,
{
    let mut probe = x.to_vec();
    probe[i] = x[i] + h;
    let plus = f(&probe)?;
    probe[i] = x[i] - h;
    let minus = f(&probe)?;
    Ok((plus - minus) / (2.0 * h))
}

pub fn gradient<F>(f: &F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + ?Sized,
{
    (0..x.len()).map(|i| partial(f, x, i, h)).collect()
}

/// Jacobian `J[i][j] = d f_i / d x_j` of a vector-valued function.
pub fn jacobian<F>(f: &F, x: &[f64], h: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + ?Sized,
{
    let mut columns = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for j in 0..x.len() {
        probe[j] = x[j] + h;
        let plus = f(&probe)?;
        probe[j] = x[j] - h;
        let minus = f(&probe)?;
        probe[j] = x[j];
        columns.push(
            plus.iter()
                .zip(&minus)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect::<Vec<_>>(),
        );
    }
    let rows = columns.first().map_or(0, Vec::len);
    Ok((0..rows)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect())
}

/// Mixed second derivative by nested central differences.
pub fn mixed_partial<F>(f: &F, x: &[f64], i: usize, j: usize, h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64> + ?Sized,
{
    let inner = |y: &[f64]| partial(f, y, j, h);
    partial(&inner, x, i, h)
}
