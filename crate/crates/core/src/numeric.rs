//! Epsilon-guarded comparisons for quota arithmetic.
//!
//! Decimal quotas such as `0.3` are not exactly representable, so `0.3 * 10.0`
//! lands a hair off `3.0`. Every boundary-sensitive comparison in the crate
//! (floors of `r_i * t`, the strict `debt > alpha` test, partition intervals)
//! goes through these helpers so they agree with each other.

/// Relative tolerance applied at integer and threshold boundaries.
pub const REL_EPS: f64 = 1e-9;

#[inline]
fn tolerance(x: f64) -> f64 {
    REL_EPS * x.abs().max(1.0)
}

/// `floor(x)`, except that values within the tolerance below an integer round up to it.
#[inline]
pub fn guarded_floor(x: f64) -> f64 {
    let f = x.floor();
    if x - f >= 1.0 - tolerance(x) {
        f + 1.0
    } else {
        f
    }
}

/// Strict `value > threshold`, treating values within the tolerance above the
/// threshold as equal to it.
#[inline]
pub fn exceeds(value: f64, threshold: f64) -> bool {
    value > threshold + tolerance(threshold.abs().max(value.abs()))
}

/// `(1 + pi^2 / 3)`, the per-arm constant in the UCB1 pull-count bounds.
pub const UCB_CONSTANT: f64 = 1.0 + std::f64::consts::PI * std::f64::consts::PI / 3.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_rounds_up_representation_error() {
        assert_eq!(guarded_floor(0.3 * 10.0), 3.0);
        assert_eq!(guarded_floor(0.1 * 3.0 * 10.0), 3.0);
        assert_eq!(guarded_floor(2.999_999_999_999), 3.0);
        assert_eq!(guarded_floor(2.99), 2.0);
        assert_eq!(guarded_floor(1.5), 1.0);
        assert_eq!(guarded_floor(-0.5), -1.0);
        assert_eq!(guarded_floor(-1e-15), 0.0);
        assert_eq!(guarded_floor(0.0), 0.0);
    }

    #[test]
    fn exceeds_is_strict_with_slack() {
        assert!(!exceeds(0.0, 0.0));
        assert!(!exceeds(0.3 * 10.0 - 3.0, 0.0));
        assert!(exceeds(0.2, 0.0));
        assert!(!exceeds(-0.2, 0.0));
        assert!(exceeds(5.000_001, 5.0));
        assert!(!exceeds(5.0 + 1e-12, 5.0));
    }

    #[test]
    fn ucb_constant_value() {
        assert!((UCB_CONSTANT - 4.289_868_133_696_453).abs() < 1e-12);
    }
}
