//! Completions of K = F_r(T): Laurent series at infinity, v-adic elements at
//! finite primes, and the exponent groups S_inf and S_v.

mod laurent;
mod padic;
mod vadic;

use thiserror::Error;

use crate::ffpoly::FfError;

pub use laurent::{bracket_infty, unit_pow_padic, LaurentSeries, Place};
pub use padic::{PadicExponent, SvPoint};
pub use vadic::{f_order, pow_sv, teichmuller, VadicElem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NonArchError {
    #[error("digit {digit} is out of range for p = {p}")]
    InvalidDigit { digit: u32, p: u32 },
    #[error("p-adic precision {0} is out of range")]
    PrecisionOutOfRange(usize),
    #[error("input is zero")]
    ZeroInput,
    #[error("not a 1-unit")]
    NotAOneUnit,
    #[error("exponent known modulo {available} cannot determine powers to precision {needed}")]
    InsufficientPadicPrecision { needed: u64, available: u128 },
    #[error("series known to precision {available}, {needed} required")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("exponent is {exponent}-adic but the field has characteristic {field}")]
    CharacteristicMismatch { exponent: u32, field: u32 },
    #[error("argument is divisible by the prime")]
    NotCoprime,
    #[error("prime must be monic and irreducible")]
    NotIrreducible,
    #[error("Teichmuller iteration did not stabilise after {iterations} steps")]
    NonConvergence { iterations: usize },
    #[error("division by a series that vanishes to its precision")]
    DivisionByZero,
    #[error("exact inverse is an infinite series; a precision is required")]
    UnboundedPrecision,
    #[error(transparent)]
    Field(#[from] FfError),
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::ffpoly::{field_make, Poly};
    use proptest::prelude::*;

    fn monic(p: u32, coeffs: Vec<i64>) -> Poly {
        let f = field_make(p, 1, None).unwrap();
        let mut c = coeffs;
        c.push(1);
        Poly::from_ints(&f, &c)
    }

    proptest! {
        #[test]
        fn padic_powers_are_multiplicative(
            p in prop::sample::select(vec![2u32, 3, 5]),
            coeffs in prop::collection::vec(0i64..5, 1..5),
            a in 0u32..200, b in 0u32..200,
        ) {
            let n = monic(p, coeffs);
            let m = 24;
            let u = bracket_infty(&n, Some(m)).unwrap();
            let ya = PadicExponent::from_digits(p, digits(a, p, 6)).unwrap();
            let yb = PadicExponent::from_digits(p, digits(b, p, 6)).unwrap();
            let lhs = unit_pow_padic(&u, &ya.add(&yb), m).unwrap();
            let rhs = unit_pow_padic(&u, &ya, m).unwrap().mul(&unit_pow_padic(&u, &yb, m).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bracket_is_multiplicative(
            p in prop::sample::select(vec![2u32, 3]),
            a in prop::collection::vec(0i64..3, 0..4),
            b in prop::collection::vec(0i64..3, 0..4),
        ) {
            let (x, y) = (monic(p, a), monic(p, b));
            let lhs = bracket_infty(&(&x * &y), None).unwrap();
            let rhs = bracket_infty(&x, None).unwrap().mul(&bracket_infty(&y, None).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_roundtrip(
            p in prop::sample::select(vec![2u32, 3, 5]),
            coeffs in prop::collection::vec(0i64..5, 1..5),
        ) {
            let u = bracket_infty(&monic(p, coeffs), Some(16)).unwrap();
            let back = u.mul(&u.inv(None).unwrap());
            prop_assert!(back.is_one_unit());
            prop_assert_eq!(back.coeffs().len(), 1);
        }
    }

    fn digits(mut x: u32, p: u32, n: usize) -> Vec<u32> {
        (0..n).map(|_| { let d = x % p; x /= p; d }).collect()
    }
}
