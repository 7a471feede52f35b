//! Exact arbitrary-precision arithmetic: rationals, dense rational matrices,
//! and the combinatorial counting functions used by every other module.
//!
//! All probabilities and matrix entries in this crate are `Rat` values kept
//! in lowest terms with positive denominators; no floating point enters any
//! chain computation. Floats appear only at the final comparison step of
//! asymptotic checks and in chi-square statistics.

mod comb;
mod matrix;

pub use comb::{binomial, composition_count, eulerian, factorial};
pub use matrix::{
    char_poly, eval_poly, is_totally_positive, poly_from_roots, row_times_matrix, totally_positive,
    Matrix, MinorViolation, CHAR_POLY_MAX_SIDE, TP_MAX_ORDER, TP_MAX_SIDE,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Exact rational number. Always in lowest terms, denominator positive.
pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat<T: Into<BigInt>>(n: T) -> Rat {
    Rat::from_integer(n.into())
}

/// Fraction `n/d`, reduced. Panics if `d == 0`.
pub fn frac<N: Into<BigInt>, D: Into<BigInt>>(n: N, d: D) -> Rat {
    Rat::new(n.into(), d.into())
}

/// `base^exp` as a big integer.
pub fn int_pow(base: u64, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

/// Lossy conversion for display and asymptotic comparisons only.
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parse "p/q" or a bare integer "p".
pub fn parse_rat(s: &str) -> Result<Rat> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| Error::Invalid(format!("cannot parse rational {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn rational_string_round_trip() {
        assert_eq!(frac(1, 2).to_string(), "1/2");
        assert_eq!(frac(-3, 6).to_string(), "-1/2");
        assert_eq!(rat(7).to_string(), "7");
        assert_eq!(parse_rat("3/4").unwrap(), frac(3, 4));
        assert_eq!(parse_rat("5").unwrap(), rat(5));
        assert!(parse_rat("x/y").is_err());
    }

    #[test]
    fn reduction_invariant() {
        let x = frac(6, -4);
        assert_eq!(x, frac(-3, 2));
        assert!(x.denom().sign() == num_bigint::Sign::Plus);
        assert!((frac(1, 3) * rat(3)).is_one());
    }
}
