//! `n − 1 + sⁿ − ns = (1 − s)(n − 1 − s − s² − ⋯ − s^{n−1}) ≥ 0`.

use serde::Serialize;
use twofloat::TwoFloat;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElementaryValue {
    pub direct: f64,
    pub factored: f64,
}

/// Direct and factored evaluations of `n − 1 + sⁿ − ns`. The direct sum
/// is carried in double-double so that its cancellation near `s = 1` does
/// not swamp the comparison.
pub fn elementary_inequality(n: usize, s: f64) -> ElementaryValue {
    let nf = n as f64;
    let ts = TwoFloat::from(s);
    let mut power = TwoFloat::from(1.0);
    for _ in 0..n {
        power *= ts;
    }
    let direct: f64 = (TwoFloat::from(nf - 1.0) + power - ts * nf).into();
    let partial: f64 = (1..n).map(|k| s.powi(k as i32)).sum();
    ElementaryValue {
        direct,
        factored: (1.0 - s) * (nf - 1.0 - partial),
    }
}

/// One row of the sweep over `s` for fixed `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    /// Minimum of the direct value over the sweep.
    pub min: f64,
    pub argmin: f64,
    /// Largest `|direct − factored| / max(|direct|, 1e-300)` away from `s = 1`.
    pub max_rel_gap: f64,
    /// Sample points other than `s = 1` where the value is within `1e-12`
    /// of zero.
    pub spurious_zeros: usize,
}

/// Sweeps `s = k·step` for `k = 1 ..= ⌊s_max/step⌋`.
pub fn elementary_sweep(n: usize, s_max: f64, step: f64) -> SweepRow {
    elementary_sweep_range(n, 0.0, s_max, step)
}

/// Sweeps the positive grid points `s = k·step` in `[s_min, s_max]`.
pub fn elementary_sweep_range(n: usize, s_min: f64, s_max: f64, step: f64) -> SweepRow {
    let first = ((s_min / step).round() as usize).max(1);
    let count = (s_max / step).round() as usize;
    let mut row = SweepRow {
        n,
        min: f64::INFINITY,
        argmin: f64::NAN,
        max_rel_gap: 0.0,
        spurious_zeros: 0,
    };
    for k in first..=count {
        let s = k as f64 * step;
        let v = elementary_inequality(n, s);
        if v.direct < row.min {
            row.min = v.direct;
            row.argmin = s;
        }
        let at_one = (s - 1.0).abs() < 0.5 * step;
        if !at_one {
            row.max_rel_gap = row
                .max_rel_gap
                .max((v.direct - v.factored).abs() / v.direct.abs().max(1e-300));
            if v.direct.abs() <= 1e-12 {
                row.spurious_zeros += 1;
            }
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(elementary_inequality(3, 1.0).direct, 0.0);
        assert_eq!(elementary_inequality(3, 2.0).direct, 4.0);
        assert!((elementary_inequality(4, 0.5).direct - 1.0625).abs() < 1e-15);
        assert!((elementary_inequality(4, 0.5).factored - 1.0625).abs() < 1e-15);
    }

    #[test]
    fn sweep_minimum_at_one() {
        for n in 3..=8 {
            let row = elementary_sweep(n, 4.0, 1e-3);
            assert!(row.min.abs() <= 1e-12 && (row.argmin - 1.0).abs() < 1e-9, "{row:?}");
            assert_eq!(row.spurious_zeros, 0);
            assert!(row.max_rel_gap <= 1e-12, "{row:?}");
        }
    }
}
