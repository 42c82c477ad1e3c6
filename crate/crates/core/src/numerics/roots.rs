//! Bracketing root finders.

/// Bisection on a sign-change bracket `[lo, hi]`, stopping when the bracket
/// is narrower than `rel_tol * |mid|` or stops shrinking.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= rel_tol * mid.abs() {
            return mid;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Newton iteration kept inside a bracket `[lo, hi]` of an increasing
/// function; falls back to bisection when a step leaves the bracket.
///
/// `f` returns `(value, derivative)`.
pub fn newton_increasing<F: Fn(f64) -> (f64, f64)>(f: F, mut lo: f64, mut hi: f64, start: f64, abs_tol: f64) -> f64 {
    let mut x = start.clamp(lo, hi);
    for _ in 0..200 {
        let (v, d) = f(x);
        if v == 0.0 {
            return x;
        }
        if v > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let mut next = if d > 0.0 && d.is_finite() { x - v / d } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= abs_tol || hi - lo <= abs_tol {
            return next;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root() {
        let r = bisect(|x| x * x * x + x - 1.0, 0.0, 1.0, 1e-15);
        assert!((r * r * r + r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn newton_sqrt2() {
        let r = newton_increasing(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, 1.0, 1e-15);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }
}
