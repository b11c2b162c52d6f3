//! Nonnegative numbers stored by their natural logarithm.
//!
//! Products and powers are exact in the log domain, sums use log-sum-exp, and
//! exponentiation saturates: once the exponent itself leaves the double range
//! the result is flagged as overflowed and compares above every finite value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};

use serde::{Deserialize, Serialize};

/// Largest `ln` of an exponent that [`LogScalar::exp`] still evaluates.
pub const EXP_LN_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LogScalar {
    ln_value: f64,
    is_zero: bool,
    overflow: bool,
}

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar {
        ln_value: f64::NEG_INFINITY,
        is_zero: true,
        overflow: false,
    };

    pub const ONE: LogScalar = LogScalar {
        ln_value: 0.0,
        is_zero: false,
        overflow: false,
    };

    pub const OVERFLOW: LogScalar = LogScalar {
        ln_value: f64::INFINITY,
        is_zero: false,
        overflow: true,
    };

    /// Wraps a nonnegative double. `+inf` maps to the overflow state.
    ///
    /// Panics on negative or NaN input; every quantity handled here is a norm
    /// or a sum of nonnegative terms.
    pub fn new(value: f64) -> Self {
        assert!(value >= 0.0, "LogScalar needs a nonnegative value, got {value}");
        if value == 0.0 {
            Self::ZERO
        } else if value.is_infinite() {
            Self::OVERFLOW
        } else {
            Self::from_ln(value.ln())
        }
    }

    /// Number whose natural log is `ln_value`.
    pub fn from_ln(ln_value: f64) -> Self {
        assert!(!ln_value.is_nan(), "NaN logarithm");
        if ln_value == f64::NEG_INFINITY {
            Self::ZERO
        } else if ln_value == f64::INFINITY {
            Self::OVERFLOW
        } else {
            Self {
                ln_value,
                is_zero: false,
                overflow: false,
            }
        }
    }

    /// Natural log: `-inf` for zero, `+inf` once overflowed.
    pub fn ln(&self) -> f64 {
        if self.is_zero {
            f64::NEG_INFINITY
        } else if self.overflow {
            f64::INFINITY
        } else {
            self.ln_value
        }
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero
    }

    pub fn is_overflow(&self) -> bool {
        self.overflow
    }

    /// The value as a double; `inf` when it exceeds the double range.
    pub fn value(&self) -> f64 {
        self.ln().exp()
    }

    /// `ln(ln x)` when `x > 1` and finite in the log domain.
    pub fn ln_ln(&self) -> Option<f64> {
        let l = self.ln();
        (l.is_finite() && l > 0.0).then(|| l.ln())
    }

    pub fn pow(self, p: f64) -> Self {
        assert!(p.is_finite(), "non-finite exponent {p}");
        if p == 0.0 {
            return Self::ONE;
        }
        match (self.is_zero, self.overflow) {
            (true, _) if p > 0.0 => Self::ZERO,
            (true, _) => Self::OVERFLOW,
            (_, true) if p > 0.0 => Self::OVERFLOW,
            (_, true) => Self::ZERO,
            _ => Self::from_ln(self.ln_value * p),
        }
    }

    /// `e^x`. Saturates to the overflow state when `ln x > 700`.
    pub fn exp(self) -> Self {
        if self.is_zero {
            Self::ONE
        } else if self.overflow || self.ln_value > EXP_LN_LIMIT {
            Self::OVERFLOW
        } else {
            Self::from_ln(self.ln_value.exp())
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<f64> for LogScalar {
    fn from(value: f64) -> Self {
        LogScalar::new(value)
    }
}

impl Mul for LogScalar {
    type Output = LogScalar;

    fn mul(self, rhs: LogScalar) -> LogScalar {
        if self.is_zero || rhs.is_zero {
            LogScalar::ZERO
        } else if self.overflow || rhs.overflow {
            LogScalar::OVERFLOW
        } else {
            LogScalar::from_ln(self.ln_value + rhs.ln_value)
        }
    }
}

impl Mul<f64> for LogScalar {
    type Output = LogScalar;

    fn mul(self, rhs: f64) -> LogScalar {
        self * LogScalar::new(rhs)
    }
}

impl Div for LogScalar {
    type Output = LogScalar;

    fn div(self, rhs: LogScalar) -> LogScalar {
        self * rhs.pow(-1.0)
    }
}

impl Div<f64> for LogScalar {
    type Output = LogScalar;

    fn div(self, rhs: f64) -> LogScalar {
        self / LogScalar::new(rhs)
    }
}

impl Add for LogScalar {
    type Output = LogScalar;

    fn add(self, rhs: LogScalar) -> LogScalar {
        if self.is_zero {
            return rhs;
        }
        if rhs.is_zero {
            return self;
        }
        if self.overflow || rhs.overflow {
            return LogScalar::OVERFLOW;
        }
        let (hi, lo) = if self.ln_value >= rhs.ln_value {
            (self.ln_value, rhs.ln_value)
        } else {
            (rhs.ln_value, self.ln_value)
        };
        LogScalar::from_ln(hi + (lo - hi).exp().ln_1p())
    }
}

impl Add<f64> for LogScalar {
    type Output = LogScalar;

    fn add(self, rhs: f64) -> LogScalar {
        self + LogScalar::new(rhs)
    }
}

impl std::iter::Sum for LogScalar {
    fn sum<I: Iterator<Item = LogScalar>>(iter: I) -> LogScalar {
        iter.fold(LogScalar::ZERO, |a, b| a + b)
    }
}

impl PartialEq for LogScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ln() == other.ln()
    }
}

impl PartialOrd for LogScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.ln().partial_cmp(&other.ln())
    }
}

impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.overflow {
            write!(f, "overflow")
        } else if self.is_zero {
            write!(f, "0")
        } else if self.ln_value.abs() < 700.0 {
            write!(f, "{:.6e}", self.ln_value.exp())
        } else {
            write!(f, "exp({:.6e})", self.ln_value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn zero_and_one() {
        assert!(LogScalar::new(0.0).is_zero());
        assert_eq!(LogScalar::new(1.0).ln(), 0.0);
        assert!(rel((LogScalar::ZERO + LogScalar::new(3.0)).value(), 3.0) < 1e-15);
        assert!((LogScalar::ZERO * LogScalar::OVERFLOW).is_zero());
        assert_eq!(LogScalar::ZERO.exp(), LogScalar::ONE);
    }

    #[test]
    fn exp_saturates_above_limit() {
        let big = LogScalar::new(2.432e7);
        let e = big.exp();
        assert!(!e.is_overflow());
        // ln(x) ~ 17 carries ~17 ulp of absolute error into the exponent
        assert!(rel(e.ln(), 2.432e7) < 1e-13);
        let e2 = e.exp();
        assert!(e2.is_overflow());
        assert!(e2 > LogScalar::from_ln(1e300));
        assert!(LogScalar::from_ln(700.0).exp().ln().is_finite());
        assert!(LogScalar::from_ln(700.5).exp().is_overflow());
    }

    #[test]
    fn arithmetic_matches_doubles() {
        let a = LogScalar::new(3.5);
        let b = LogScalar::new(0.25);
        assert!(rel((a * b).value(), 0.875) < 1e-15);
        assert!(rel((a + b).value(), 3.75) < 1e-15);
        assert!(rel((a / b).value(), 14.0) < 1e-15);
        assert!(rel(a.pow(2.5).value(), 3.5f64.powf(2.5)) < 1e-14);
        assert!(rel(b.exp().value(), 0.25f64.exp()) < 1e-15);
    }

    #[test]
    fn zero_powers() {
        assert!(LogScalar::ZERO.pow(2.0).is_zero());
        assert!(LogScalar::ZERO.pow(-1.0).is_overflow());
        assert_eq!(LogScalar::ZERO.pow(0.0), LogScalar::ONE);
        assert!(LogScalar::OVERFLOW.pow(-2.0).is_zero());
    }

    #[test]
    fn overflow_ordering() {
        assert!(LogScalar::OVERFLOW > LogScalar::from_ln(f64::MAX));
        assert_eq!(LogScalar::OVERFLOW, LogScalar::OVERFLOW);
        assert!(LogScalar::ZERO < LogScalar::new(1e-300));
    }
}
