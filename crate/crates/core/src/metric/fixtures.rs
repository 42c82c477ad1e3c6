//! Random perturbations of HM-type metrics that satisfy the integrability
//! condition `u_{n−1} + v_{n−1} + tr w_{n−1} = 0` and horizon regularity.

use rand::Rng;

use super::background::BackgroundParams;
use super::spec::MetricSpec;

/// Coefficients at orders `n+1`, `n+2` making
/// `c₁ r^{1−n} + c₂ r^{−n} + e₁ r^{−n−1} + e₂ r^{−n−2}` vanish together with
/// its first derivative at `r₊`.
pub fn vanishing_tail(n: usize, r_plus: f64, c1: f64, c2: f64) -> (f64, f64) {
    let x = 1.0 / r_plus;
    let nf = n as f64;
    let b1 = -(c1 / (x * x) + c2 / x);
    let b2 = -((nf - 1.0) * c1 / (x * x) + nf * c2 / x);
    let e2 = (b2 - (nf + 1.0) * b1) / x;
    let e1 = b1 - e2 * x;
    (e1, e2)
}

fn uniform<R: Rng>(rng: &mut R, amp: f64) -> f64 {
    amp * rng.random_range(-1.0..=1.0)
}

/// Adds a ŵ component profile with orders `n−1`, `n`, tailed when the
/// mode depends on ξ so the perturbation stays smooth at the axis.
fn add_w_profile(spec: &mut MetricSpec, i: usize, j: usize, k: &[i32], c: [f64; 2], s: [f64; 2]) {
    let n = spec.n();
    let rp = spec.r_plus();
    let nn = n as u32;
    let xi_dependent = k[0] != 0;
    let push = |spec: &mut MetricSpec, m: u32, cc: f64, ss: f64| {
        if cc != 0.0 || ss != 0.0 {
            spec.add_w_mode(m, i, j, k.to_vec(), cc, ss)
                .expect("mode has n-1 entries");
        }
    };
    push(spec, nn - 1, c[0], s[0]);
    push(spec, nn, c[1], s[1]);
    if xi_dependent {
        let (ec1, ec2) = vanishing_tail(n, rp, c[0], c[1]);
        let (es1, es2) = vanishing_tail(n, rp, s[0], s[1]);
        push(spec, nn + 1, ec1, es1);
        push(spec, nn + 2, ec2, es2);
    }
}

/// Random L¹-respecting, horizon-regular perturbation of `ĝ` with
/// coefficients of size `amplitude`.
pub fn random_l1_perturbation<R: Rng>(bg: BackgroundParams, amplitude: f64, rng: &mut R) -> MetricSpec {
    let n = bg.n();
    let nn = n as u32;
    let m = n - 2;
    let rp = bg.r_plus();
    let mut spec = MetricSpec::hm_type(bg);

    let u1 = uniform(rng, amplitude);
    let u2 = uniform(rng, amplitude);
    spec.set_u(nn - 1, u1);
    spec.set_u(nn, u2);
    spec.add_v_const(nn - 1, u1);
    spec.add_v_const(nn, u2);

    // Δ = S_v − S_u, vanishing to second order at r₊; δ_{n−1}(ξ) per mode.
    let mut delta1 = Vec::new();
    for k in 0..=2 {
        let c = [uniform(rng, amplitude), uniform(rng, amplitude)];
        let s = if k == 0 {
            [0.0, 0.0]
        } else {
            [uniform(rng, amplitude), uniform(rng, amplitude)]
        };
        let (ec1, ec2) = vanishing_tail(n, rp, c[0], c[1]);
        let (es1, es2) = vanishing_tail(n, rp, s[0], s[1]);
        spec.add_v_mode(nn - 1, k, c[0], s[0]);
        spec.add_v_mode(nn, k, c[1], s[1]);
        spec.add_v_mode(nn + 1, k, ec1, es1);
        spec.add_v_mode(nn + 2, k, ec2, es2);
        delta1.push((k, c[0], s[0]));
    }

    // w_{n−1} = traceless part − ((2u_{n−1} + δ_{n−1}(ξ))/(n−2)) δ; ŵ stores 2w.
    let mut zero_k = vec![0; n - 1];
    for &(k, c, s) in &delta1 {
        zero_k[0] = k;
        let base = if k == 0 { 2.0 * u1 + c } else { c };
        let w_c = -2.0 * base / m as f64;
        let w_s = -2.0 * s / m as f64;
        for i in 0..m {
            add_w_profile(&mut spec, i, i, &zero_k, [w_c, 0.0], [w_s, 0.0]);
        }
    }

    // traceless and order-n parts over a few (ξ, φ³) modes
    let mode_set: Vec<Vec<i32>> = {
        let mut v = Vec::new();
        for kx in 0..=1 {
            for kp in 0..=1 {
                let mut k = vec![0; n - 1];
                k[0] = kx;
                if n > 3 {
                    k[1] = kp;
                } else if kp > 0 {
                    continue;
                }
                v.push(k);
            }
        }
        v
    };
    for k in &mode_set {
        let has_sin = k.iter().any(|&x| x != 0);
        // order n−1: traceless
        if m >= 2 {
            let mut diag_c = vec![0.0; m];
            let mut diag_s = vec![0.0; m];
            for i in 0..m - 1 {
                diag_c[i] = uniform(rng, amplitude);
                diag_s[i] = if has_sin { uniform(rng, amplitude) } else { 0.0 };
            }
            diag_c[m - 1] = -diag_c[..m - 1].iter().sum::<f64>();
            diag_s[m - 1] = -diag_s[..m - 1].iter().sum::<f64>();
            for i in 0..m {
                add_w_profile(&mut spec, i, i, k, [diag_c[i], 0.0], [diag_s[i], 0.0]);
            }
            for i in 0..m {
                for j in i + 1..m {
                    let c = uniform(rng, amplitude);
                    let s = if has_sin { uniform(rng, amplitude) } else { 0.0 };
                    add_w_profile(&mut spec, i, j, k, [c, 0.0], [s, 0.0]);
                }
            }
        }
        // order n: unconstrained symmetric
        for i in 0..m {
            for j in i..m {
                let c = uniform(rng, amplitude);
                let s = if has_sin { uniform(rng, amplitude) } else { 0.0 };
                add_w_profile(&mut spec, i, j, k, [0.0, c], [0.0, s]);
            }
        }
    }
    spec
}
