//! Exact rational scalars.
//!
//! All moment arithmetic in this crate is exact: values are
//! arbitrary-precision rationals, normalized and in lowest terms. Floating
//! point appears only in simulation summaries and report fields that are
//! explicitly documented as floats. `Q` is the scalar type used throughout.

use alloc::string::String;
use core::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar (arbitrary-precision, always in lowest terms).
pub type Q = BigRational;

/// `n` as an exact rational.
pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn q_ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// An unsigned 128-bit count as an exact rational.
pub fn q_u128(n: u128) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A signed 128-bit accumulator as an exact rational.
pub fn q_i128(n: i128) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `base^exp` for a signed integer exponent, as an exact rational.
/// Requires `base ≥ 1` when `exp < 0` (all uses have `base = c ≥ 2`).
pub fn q_pow(base: u64, exp: i64) -> Q {
    let b = BigInt::from(base);
    if exp >= 0 {
        Q::from_integer(b.pow(exp as u32))
    } else {
        Q::new(BigInt::one(), b.pow((-exp) as u32))
    }
}

/// Renders a rational as `"p/q"`, always including the denominator
/// (so integers render as `"1/1"`, `"0/1"`, ...). This is the interchange
/// format used by every JSON report.
pub fn render(q: &Q) -> String {
    let mut s = String::new();
    let _ = write!(s, "{}/{}", q.numer(), q.denom());
    s
}

/// Nearest-possible `f64` view of a rational; used only when handing values
/// to floating-point report fields. Exact for all rationals arising in tests.
pub fn to_f64(q: &Q) -> f64 {
    // num-rational's ToPrimitive handles magnitudes beyond f64 range by
    // saturating through BigInt::to_f64; that is adequate for reporting.
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else if q.is_zero() {
            0.0
        } else {
            f64::INFINITY
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_handles_both_signs() {
        assert_eq!(q_pow(2, 3), q_int(8));
        assert_eq!(q_pow(2, -2), q_ratio(1, 4));
        assert_eq!(q_pow(3, 0), q_int(1));
    }

    #[test]
    fn render_always_shows_denominator() {
        assert_eq!(render(&q_int(1)), "1/1");
        assert_eq!(render(&q_ratio(3, 2)), "3/2");
        assert_eq!(render(&q_ratio(-2, 4)), "-1/2");
        assert_eq!(render(&q_int(0)), "0/1");
    }

    #[test]
    fn to_f64_is_exact_on_dyadics() {
        assert_eq!(to_f64(&q_ratio(3, 4)), 0.75);
        assert_eq!(to_f64(&q_ratio(-1, 2)), -0.5);
    }
}
