//! Linear least squares used for expansion-coefficient and decay-order fits.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LsqFit {
    pub coeffs: Vec<f64>,
    /// One-sigma error bars from the residual variance.
    pub std_errors: Vec<f64>,
    /// Root-mean-square residual.
    pub rms_residual: f64,
}

/// Solves `min ‖design·c − y‖₂` with column equilibration and SVD.
pub fn least_squares(design: &DMatrix<f64>, y: &DVector<f64>) -> Result<LsqFit> {
    let (m, k) = design.shape();
    if m < k {
        return Err(Error::FitUnstable(format!("{m} samples for {k} unknowns")));
    }
    let mut scaled = design.clone();
    let mut scales = vec![1.0; k];
    for (j, scale) in scales.iter_mut().enumerate() {
        let norm = scaled.column(j).norm();
        if norm == 0.0 {
            return Err(Error::FitUnstable(format!("basis column {j} vanishes")));
        }
        *scale = norm;
        scaled.column_mut(j).scale_mut(1.0 / norm);
    }
    let svd = scaled.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= smax * 1e-14 {
        return Err(Error::FitUnstable(format!(
            "design is rank deficient (σ_min/σ_max = {:e})",
            smin / smax
        )));
    }
    let sol = svd.solve(y, 0.0).map_err(|e| Error::FitUnstable(e.to_string()))?;
    let resid = y - &scaled * &sol;
    let rss = resid.norm_squared();
    let dof = (m - k).max(1) as f64;
    let sigma2 = rss / dof;
    // (AᵀA)⁻¹ = V Σ⁻² Vᵀ
    let v_t = svd.v_t.as_ref().expect("requested V");
    let mut std_errors = vec![0.0; k];
    for j in 0..k {
        let mut acc = 0.0;
        for i in 0..k {
            let vij = v_t[(i, j)];
            acc += vij * vij / (svd.singular_values[i] * svd.singular_values[i]);
        }
        std_errors[j] = (acc * sigma2).sqrt() / scales[j];
    }
    let coeffs = (0..k).map(|j| sol[j] / scales[j]).collect();
    Ok(LsqFit {
        coeffs,
        std_errors,
        rms_residual: (rss / m as f64).sqrt(),
    })
}

/// Fits `y ≈ Σ_{j≤degree} c_j x^j`.
pub fn poly_fit(xs: &[f64], ys: &[f64], degree: usize) -> Result<LsqFit> {
    let design = DMatrix::from_fn(xs.len(), degree + 1, |i, j| xs[i].powi(j as i32));
    least_squares(&design, &DVector::from_column_slice(ys))
}

/// Slope of `log|f|` against `log r`, reported as a decay order `m` in
/// `|f| ~ r^{-m}`, together with the rms residual of the line fit.
pub fn power_law_order(rs: &[f64], fs: &[f64]) -> Result<(f64, f64)> {
    let xs: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = fs.iter().map(|f| f.abs().ln()).collect();
    let fit = poly_fit(&xs, &ys, 1)?;
    Ok((-fit.coeffs[1], fit.rms_residual))
}

/// `count` points geometrically spaced on `[lo, hi]`.
pub fn geometric(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|i| lo * (ratio * i as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_polynomial() {
        let xs: Vec<f64> = (0..20).map(|i| 0.01 + 0.005 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.3 - 2.0 * x + 5.0 * x * x).collect();
        let fit = poly_fit(&xs, &ys, 3).unwrap();
        assert!((fit.coeffs[0] - 0.3).abs() < 1e-10);
        assert!((fit.coeffs[1] + 2.0).abs() < 1e-8);
        assert!(fit.coeffs[3].abs() < 1e-5);
    }

    #[test]
    fn power_law() {
        let rs = geometric(10.0, 1e4, 30);
        let fs: Vec<f64> = rs.iter().map(|r| 4.0 * r.powi(-3)).collect();
        let (m, res) = power_law_order(&rs, &fs).unwrap();
        assert!((m - 3.0).abs() < 1e-12);
        assert!(res < 1e-12);
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let xs = vec![1.0; 5];
        let ys = vec![2.0; 5];
        assert!(poly_fit(&xs, &ys, 2).is_err());
    }
}
