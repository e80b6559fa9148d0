//! The CM example over `A' = F_2[u]`, `u^2 = T`: the square-root map, the
//! Hecke L-series `L(s) = sum n' n^-s`, the rank-2 module psi whose
//! L-series is `L(s)^2`, and the parity of zero valuations on both sides.

mod parity;
mod psi;

use thiserror::Error;

use crate::drinfeld::DrinfeldError;
use crate::ffpoly::{Field, Poly};
use crate::newton::NewtonError;
use crate::zeta::{power_sum, sum_over_monic, IdentityReport};

pub use parity::{parity_report, ParityReport, ParitySide};
pub use psi::{carlitz_prime, psi_factorization_check, psi_is_carlitz_square, psi_module, PsiReport, PsiRow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Cm2Error {
    #[error("the square-root map needs the base field F_2, got F_{0}")]
    UnsupportedField(u32),
    #[error("{side} Newton polygon is provisional at precision {precision}")]
    ProvisionalPolygon { side: &'static str, precision: usize },
    #[error(transparent)]
    Drinfeld(#[from] DrinfeldError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

fn check_f2(field: &Field) -> Result<(), Cm2Error> {
    if field.r() == 2 {
        Ok(())
    } else {
        Err(Cm2Error::UnsupportedField(field.r()))
    }
}

/// `n'`, the square root of `n` in `A'`. Over F_2 every coefficient is its
/// own square root, so `n'` has the coefficients of `n` read in `u`.
pub fn sqrt_poly(n: &Poly) -> Result<Poly, Cm2Error> {
    check_f2(n.field())?;
    Ok(n.clone())
}

/// The image of `a` in `A'` under `T -> u^2`.
pub fn lift_to_a_prime(a: &Poly) -> Poly {
    a.frobenius(1)
}

/// `l_d(j) = sum_{deg n = d} n' n^j` in `A'` for `d = 0..=dmax`.
pub fn hecke_special(field: &Field, j: u64, dmax: usize) -> Result<Vec<Poly>, Cm2Error> {
    check_f2(field)?;
    Ok((0..=dmax)
        .map(|d| sum_over_monic(field, d, |n| Some(&sqrt_poly(n).unwrap() * &lift_to_a_prime(&n.pow(j)))))
        .collect())
}

/// `l_d(j) = S'_d(2j + 1)` for `d <= dmax`, with `S'` the power sums of `A'`.
pub fn hecke_identity(field: &Field, j: u64, dmax: usize) -> Result<IdentityReport<Poly>, Cm2Error> {
    let lhs = hecke_special(field, j, dmax)?;
    let rhs = (0..=dmax).map(|d| power_sum(field, d, 2 * j + 1)).collect();
    Ok(IdentityReport::from_sides(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;
    use proptest::prelude::*;

    fn f2() -> Field {
        field_make(2, 1, None).unwrap()
    }

    #[test]
    fn sqrt_examples() {
        let f = f2();
        assert_eq!(sqrt_poly(&Poly::x(&f)).unwrap(), Poly::x(&f));
        let g = Poly::from_ints(&f, &[1, 1, 1]);
        assert_eq!(sqrt_poly(&g).unwrap().pow(2), Poly::from_ints(&f, &[1, 0, 1, 0, 1]));
        assert_eq!(sqrt_poly(&Poly::one(&f)).unwrap(), Poly::one(&f));
        let f3 = field_make(3, 1, None).unwrap();
        assert_eq!(sqrt_poly(&Poly::x(&f3)), Err(Cm2Error::UnsupportedField(3)));
    }

    #[test]
    fn hecke_examples() {
        let f = f2();
        let l0 = hecke_special(&f, 0, 1).unwrap();
        assert_eq!(l0, vec![Poly::one(&f), Poly::one(&f)]);
        let l1 = hecke_special(&f, 1, 1).unwrap();
        assert_eq!(l1[1], Poly::from_ints(&f, &[1, 1, 1]));
        assert_eq!(power_sum(&f, 1, 3), l1[1]);
        for j in 0..6 {
            assert!(hecke_identity(&f, j, 5).unwrap().all_hold(), "j = {j}");
        }
    }

    proptest! {
        #[test]
        fn squaring_round_trip(bits in prop::collection::vec(0u32..2, 1..40)) {
            let f = f2();
            let n = Poly::from_reps(&f, &bits);
            let s = sqrt_poly(&n).unwrap();
            prop_assert_eq!(s.pow(2), lift_to_a_prime(&n));
            prop_assert_eq!(s.degree(), n.degree());
        }
    }
}
