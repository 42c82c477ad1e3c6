//! Centered finite-difference stencils.

use crate::error::{Error, Result};

/// Offsets and weights (per unit step) for centered first and second
/// derivatives of the given even accuracy order.
#[derive(Debug, Clone, Copy)]
pub struct Stencil {
    pub order: usize,
    pub d1: &'static [f64],
    pub d2: &'static [f64],
}

const D1_2: [f64; 3] = [-0.5, 0.0, 0.5];
const D2_2: [f64; 3] = [1.0, -2.0, 1.0];
const D1_4: [f64; 5] = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
const D2_4: [f64; 5] = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
const D1_6: [f64; 7] = [
    -1.0 / 60.0,
    3.0 / 20.0,
    -3.0 / 4.0,
    0.0,
    3.0 / 4.0,
    -3.0 / 20.0,
    1.0 / 60.0,
];
const D2_6: [f64; 7] = [
    1.0 / 90.0,
    -3.0 / 20.0,
    3.0 / 2.0,
    -49.0 / 18.0,
    3.0 / 2.0,
    -3.0 / 20.0,
    1.0 / 90.0,
];
const D1_8: [f64; 9] = [
    1.0 / 280.0,
    -4.0 / 105.0,
    1.0 / 5.0,
    -4.0 / 5.0,
    0.0,
    4.0 / 5.0,
    -1.0 / 5.0,
    4.0 / 105.0,
    -1.0 / 280.0,
];
const D2_8: [f64; 9] = [
    -1.0 / 560.0,
    8.0 / 315.0,
    -1.0 / 5.0,
    8.0 / 5.0,
    -205.0 / 72.0,
    8.0 / 5.0,
    -1.0 / 5.0,
    8.0 / 315.0,
    -1.0 / 560.0,
];

impl Stencil {
    pub fn new(order: usize) -> Result<Self> {
        let (d1, d2): (&'static [f64], &'static [f64]) = match order {
            2 => (&D1_2, &D2_2),
            4 => (&D1_4, &D2_4),
            6 => (&D1_6, &D2_6),
            8 => (&D1_8, &D2_8),
            _ => return Err(Error::InvalidSpec(format!("no centered stencil of order {order}"))),
        };
        Ok(Self { order, d1, d2 })
    }

    /// Number of points on each side of the center.
    pub fn half_width(&self) -> usize {
        self.d1.len() / 2
    }

    /// Offset (in steps) of entry `i`.
    pub fn offset(&self, i: usize) -> f64 {
        i as f64 - self.half_width() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_are_exact_on_low_polynomials() {
        for order in [2, 4, 6, 8] {
            let s = Stencil::new(order).unwrap();
            let h = 0.1;
            let x0 = 0.7;
            let deg = order as i32;
            let p = |x: f64| x.powi(deg) / 7.0 + x * x - 3.0 * x;
            let dp = |x: f64| deg as f64 * x.powi(deg - 1) / 7.0 + 2.0 * x - 3.0;
            let ddp = |x: f64| (deg * (deg - 1)) as f64 * x.powi(deg - 2) / 7.0 + 2.0;
            let mut d1 = 0.0;
            let mut d2 = 0.0;
            for i in 0..s.d1.len() {
                let x = x0 + s.offset(i) * h;
                d1 += s.d1[i] * p(x);
                d2 += s.d2[i] * p(x);
            }
            assert!((d1 / h - dp(x0)).abs() < 1e-11, "order {order}");
            assert!((d2 / (h * h) - ddp(x0)).abs() < 1e-9, "order {order}");
        }
    }
}
