//! Generic Ricci and scalar curvature from metric components and their
//! first and second partial derivatives, plus a finite-difference driver
//! that supplies those derivatives numerically.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::metric::{MetricSpec, Point};
use crate::numerics::stencil::Stencil;

/// Metric components with first and second coordinate derivatives;
/// `ddg[a*d+b] = ∂_a∂_b g`.
#[derive(Debug, Clone)]
pub struct MetricJets {
    pub g: DMatrix<f64>,
    pub dg: Vec<DMatrix<f64>>,
    pub ddg: Vec<DMatrix<f64>>,
}

fn inverse(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = g.clone().cholesky().ok_or(Error::DegenerateGamma {
        condition: f64::INFINITY,
    })?;
    Ok(chol.inverse())
}

/// Ricci tensor `R_jk = ∂_iΓ^i_jk − ∂_kΓ^i_ji + Γ^i_ip Γ^p_jk − Γ^i_kp Γ^p_ji`.
pub fn ricci_from_jets(jets: &MetricJets) -> Result<DMatrix<f64>> {
    let d = jets.g.nrows();
    let gi = inverse(&jets.g)?;
    let idx3 = |a: usize, b: usize, c: usize| (a * d + b) * d + c;

    // Christoffel symbols of the first kind Γ_{l,jk} and their derivatives.
    let mut g1 = vec![0.0; d * d * d];
    for l in 0..d {
        for j in 0..d {
            for k in j..d {
                let v = 0.5 * (jets.dg[j][(l, k)] + jets.dg[k][(l, j)] - jets.dg[l][(j, k)]);
                g1[idx3(l, j, k)] = v;
                g1[idx3(l, k, j)] = v;
            }
        }
    }
    let mut gam = vec![0.0; d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in j..d {
                let mut acc = 0.0;
                for l in 0..d {
                    acc += gi[(i, l)] * g1[idx3(l, j, k)];
                }
                gam[idx3(i, j, k)] = acc;
                gam[idx3(i, k, j)] = acc;
            }
        }
    }
    // ∂_a g^{il} = −g^{ip} ∂_a g_{pq} g^{ql}
    let dgi: Vec<DMatrix<f64>> = (0..d).map(|a| -(&gi * &jets.dg[a] * &gi)).collect();
    // ∂_a Γ^i_{jk} for the two contractions needed.
    let dgamma = |a: usize, i: usize, j: usize, k: usize| -> f64 {
        let mut acc = 0.0;
        for l in 0..d {
            let d1 = 0.5 * (jets.ddg[a * d + j][(l, k)] + jets.ddg[a * d + k][(l, j)] - jets.ddg[a * d + l][(j, k)]);
            acc += dgi[a][(i, l)] * g1[idx3(l, j, k)] + gi[(i, l)] * d1;
        }
        acc
    };

    let mut ric = DMatrix::zeros(d, d);
    for j in 0..d {
        for k in j..d {
            let mut acc = 0.0;
            for i in 0..d {
                acc += dgamma(i, i, j, k) - dgamma(k, i, j, i);
                for p in 0..d {
                    acc += gam[idx3(i, i, p)] * gam[idx3(p, j, k)] - gam[idx3(i, k, p)] * gam[idx3(p, j, i)];
                }
            }
            ric[(j, k)] = acc;
            ric[(k, j)] = acc;
        }
    }
    Ok(ric)
}

/// `g^{jk} R_jk`.
pub fn scalar_from_jets(jets: &MetricJets) -> Result<f64> {
    let ric = ricci_from_jets(jets)?;
    let gi = inverse(&jets.g)?;
    Ok(gi.component_mul(&ric).sum())
}

/// Finite-difference jets of `metric` at `x` with per-coordinate steps.
pub fn fd_jets<F>(metric: F, x: &[f64], steps: &[f64], stencil: &Stencil) -> Result<MetricJets>
where
    F: Fn(&[f64]) -> Result<DMatrix<f64>>,
{
    let d = x.len();
    let g = metric(x)?;
    let size = g.nrows();
    let mut dg = vec![DMatrix::zeros(size, size); d];
    let mut ddg = vec![DMatrix::zeros(size, size); d * d];
    let w = stencil.d1.len();
    let mut y = x.to_vec();
    for a in 0..d {
        let h = steps[a];
        for i in 0..w {
            let (c1, c2) = (stencil.d1[i], stencil.d2[i]);
            if c1 == 0.0 && c2 == 0.0 {
                continue;
            }
            let gi = if stencil.offset(i) == 0.0 {
                g.clone()
            } else {
                y[a] = x[a] + stencil.offset(i) * h;
                let v = metric(&y)?;
                y[a] = x[a];
                v
            };
            if c1 != 0.0 {
                dg[a] += &gi * (c1 / h);
            }
            ddg[a * d + a] += &gi * (c2 / (h * h));
        }
        for b in a + 1..d {
            let hb = steps[b];
            let mut acc = DMatrix::zeros(size, size);
            for i in 0..w {
                let ci = stencil.d1[i];
                if ci == 0.0 {
                    continue;
                }
                for j in 0..w {
                    let cj = stencil.d1[j];
                    if cj == 0.0 {
                        continue;
                    }
                    y[a] = x[a] + stencil.offset(i) * h;
                    y[b] = x[b] + stencil.offset(j) * hb;
                    acc += metric(&y)? * (ci * cj);
                    y[a] = x[a];
                    y[b] = x[b];
                }
            }
            acc /= h * hb;
            ddg[a * d + b] = acc.clone();
            ddg[b * d + a] = acc;
        }
    }
    Ok(MetricJets { g, dg, ddg })
}

/// Step used by the oracle at radius `r`.
pub fn default_step(r: f64) -> f64 {
    1e-3 * r.max(1.0)
}

/// Scalar curvature of `spec` at `point` from a centered finite-difference
/// stencil of the given order in all coordinates `(r, ξ, φ…)`.
pub fn scalar_curvature_oracle_order(spec: &MetricSpec, point: &Point, step: f64, order: usize) -> Result<f64> {
    let stencil = Stencil::new(order)?;
    let radius = stencil.half_width() as f64 * step;
    if point.r - radius <= spec.r_plus() {
        return Err(Error::StencilOutOfDomain {
            r: point.r,
            radius,
            r_plus: spec.r_plus(),
        });
    }
    let x = point.coords();
    let steps = vec![step; x.len()];
    let jets = fd_jets(
        |c: &[f64]| spec.eval_metric(&Point::new(c[0], c[1..].to_vec())),
        &x,
        &steps,
        &stencil,
    )?;
    scalar_from_jets(&jets)
}

/// Second-order finite-difference scalar curvature.
pub fn scalar_curvature_oracle(spec: &MetricSpec, point: &Point, step: f64) -> Result<f64> {
    scalar_curvature_oracle_order(spec, point, step, 2)
}

/// Scalar curvature of an arbitrary metric given pointwise in a chart.
pub fn scalar_curvature_fd<F>(metric: F, x: &[f64], step: f64, order: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<DMatrix<f64>>,
{
    let stencil = Stencil::new(order)?;
    let jets = fd_jets(metric, x, &vec![step; x.len()], &stencil)?;
    scalar_from_jets(&jets)
}
