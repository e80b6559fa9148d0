use crate::ffpoly::{Field, Poly};
use crate::newton::CoeffValuation;
use crate::nonarch::{bracket_infty, pow_sv, unit_pow_padic, LaurentSeries, NonArchError, PadicExponent, Place, SvPoint, VadicElem};

use super::power_sum::sum_over_monic;
use super::ZetaError;

/// The exponent a family is evaluated at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyExponent {
    Infinity(PadicExponent),
    Finite(SvPoint),
}

/// One coefficient of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalCoeff {
    Infinity(LaurentSeries),
    Finite(VadicElem),
}

impl LocalCoeff {
    pub fn valuation(&self) -> CoeffValuation {
        match self {
            LocalCoeff::Infinity(s) => match (s.valuation(), s.precision()) {
                (Some(v), _) => CoeffValuation::Finite(v),
                (None, Some(m)) => CoeffValuation::AtLeast(m),
                (None, None) => CoeffValuation::Zero,
            },
            LocalCoeff::Finite(x) => match (x.valuation(), x.precision()) {
                (Some(v), _) => CoeffValuation::Finite(v as i64),
                (None, Some(m)) => CoeffValuation::AtLeast(m as i64),
                (None, None) => CoeffValuation::Zero,
            },
        }
    }

    pub fn as_series(&self) -> Option<&LaurentSeries> {
        match self {
            LocalCoeff::Infinity(s) => Some(s),
            LocalCoeff::Finite(_) => None,
        }
    }

    pub fn as_vadic(&self) -> Option<&VadicElem> {
        match self {
            LocalCoeff::Finite(x) => Some(x),
            LocalCoeff::Infinity(_) => None,
        }
    }
}

/// `d -> c_d` for `d = 0..=dmax`, the coefficients of `sum_d c_d x^-d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientFamily {
    pub place: Place,
    pub exponent: FamilyExponent,
    pub coeffs: Vec<LocalCoeff>,
    /// Target precision M; exact coefficients exceed it.
    pub precision: usize,
    pub dmax: usize,
    /// Coefficients were computed exactly (non-negative integer exponent).
    pub exact: bool,
}

impl CoefficientFamily {
    pub fn valuations(&self) -> Vec<CoeffValuation> {
        self.coeffs.iter().map(LocalCoeff::valuation).collect()
    }
}

/// Reversal of a monic `n` of degree d: the polynomial in `pi = 1/T` equal to `<n>`.
fn reversal(n: &Poly) -> Poly {
    let mut c = n.coeffs().to_vec();
    c.reverse();
    Poly::new(n.field(), c)
}

fn series_from_pi_poly(field: &Field, p: &Poly, prec: Option<i64>) -> LaurentSeries {
    LaurentSeries::new(field, Place::Infinity, 0, p.coeffs().to_vec(), prec)
}

/// `c_d(y) = sum_{n monic, deg n = d} <n>^-y` at infinity, to precision `m`.
///
/// When `-y` is a known non-negative integer the coefficients are exact
/// polynomials in `pi`.
pub fn zeta_family_infty(field: &Field, y: &PadicExponent, dmax: usize, m: usize) -> Result<CoefficientFamily, ZetaError> {
    if y.p() != field.p() {
        return Err(NonArchError::CharacteristicMismatch { exponent: y.p(), field: field.p() }.into());
    }
    let exact = y.as_integer().filter(|&n| n <= 0).map(|n| n.unsigned_abs());
    if exact.is_none() && !y.covers(m as u64) {
        return Err(NonArchError::InsufficientPadicPrecision { needed: m as u64, available: y.modulus() }.into());
    }
    let neg = y.neg();
    let mut coeffs = Vec::with_capacity(dmax + 1);
    for d in 0..=dmax {
        let c = match exact {
            Some(e) => {
                let sum = sum_over_monic(field, d, |n| Some(reversal(n).pow(e)));
                series_from_pi_poly(field, &sum, None)
            }
            None => {
                let sum = sum_over_monic(field, d, |n| {
                    let u = bracket_infty(n, Some(m as i64)).expect("monic input");
                    let v = unit_pow_padic(&u, &neg, m as i64).expect("precision checked above");
                    Some(Poly::new(field, v.coeffs().to_vec()))
                });
                series_from_pi_poly(field, &sum, Some(m as i64))
            }
        };
        coeffs.push(LocalCoeff::Infinity(c));
    }
    Ok(CoefficientFamily {
        place: Place::Infinity,
        exponent: FamilyExponent::Infinity(y.clone()),
        coeffs,
        precision: m,
        dmax,
        exact: exact.is_some(),
    })
}

/// `c_d(s) = sum_{n monic, deg n = d, f does not divide n} n^-s` in A_v modulo `f^m`.
///
/// When `-s` is the image of a non-negative integer the coefficients are
/// exact elements of A.
pub fn zeta_family_vadic(field: &Field, s: &SvPoint, f: &Poly, dmax: usize, m: usize) -> Result<CoefficientFamily, ZetaError> {
    let y = s.s2();
    if y.p() != field.p() {
        return Err(NonArchError::CharacteristicMismatch { exponent: y.p(), field: field.p() }.into());
    }
    let exact = s.as_integer().filter(|&n| n <= 0).map(|n| n.unsigned_abs());
    if exact.is_none() && !y.covers(m as u64) {
        return Err(NonArchError::InsufficientPadicPrecision { needed: m as u64, available: y.modulus() }.into());
    }
    // validates f once
    VadicElem::new(Poly::one(field), f, Some(1))?;
    let neg = s.neg();
    let coprime = |n: &Poly| !n.rem(f).unwrap().is_zero();
    let mut coeffs = Vec::with_capacity(dmax + 1);
    for d in 0..=dmax {
        let c = match exact {
            Some(e) => {
                let sum = sum_over_monic(field, d, |n| coprime(n).then(|| n.pow(e)));
                VadicElem::new(sum, f, None)?
            }
            None => {
                let sum = sum_over_monic(field, d, |n| {
                    coprime(n).then(|| pow_sv(n, &neg, f, m).expect("checked above").rep().clone())
                });
                VadicElem::new(sum, f, Some(m))?
            }
        };
        coeffs.push(LocalCoeff::Finite(c));
    }
    Ok(CoefficientFamily {
        place: Place::Finite(f.clone()),
        exponent: FamilyExponent::Finite(s.clone()),
        coeffs,
        precision: m,
        dmax,
        exact: exact.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;

    fn pi_poly(field: &Field, ints: &[i64]) -> LaurentSeries {
        series_from_pi_poly(field, &Poly::from_ints(field, ints), None)
    }

    #[test]
    fn infinity_examples_r2() {
        let f2 = field_make(2, 1, None).unwrap();
        let fam = zeta_family_infty(&f2, &PadicExponent::embed(2, -1, 6).unwrap(), 3, 32).unwrap();
        assert!(fam.exact);
        assert_eq!(fam.coeffs[0].as_series().unwrap(), &pi_poly(&f2, &[1]));
        assert_eq!(fam.coeffs[1].as_series().unwrap(), &pi_poly(&f2, &[0, 1]));
        let fam2 = zeta_family_infty(&f2, &PadicExponent::embed(2, -2, 6).unwrap(), 2, 32).unwrap();
        assert_eq!(fam2.coeffs[1].as_series().unwrap(), &pi_poly(&f2, &[0, 0, 1]));
        assert!(fam2.coeffs[2].as_series().unwrap().is_exact_zero());
    }

    #[test]
    fn zero_exponent_counts() {
        let f3 = field_make(3, 1, None).unwrap();
        let fam = zeta_family_infty(&f3, &PadicExponent::embed(3, 0, 4).unwrap(), 3, 16).unwrap();
        assert_eq!(fam.valuations(), vec![CoeffValuation::Finite(0), CoeffValuation::Zero, CoeffValuation::Zero, CoeffValuation::Zero]);
    }

    #[test]
    fn truncated_route_agrees_with_exact_route() {
        let f3 = field_make(3, 1, None).unwrap();
        let y = PadicExponent::embed(3, -7, 5).unwrap();
        let exact = zeta_family_infty(&f3, &y, 3, 40).unwrap();
        let digits = PadicExponent::from_digits(3, y.digits().to_vec()).unwrap();
        let trunc = zeta_family_infty(&f3, &digits, 3, 40).unwrap();
        assert!(!trunc.exact);
        for d in 0..=3 {
            let a = exact.coeffs[d].as_series().unwrap().truncate(40);
            assert_eq!(&a, trunc.coeffs[d].as_series().unwrap(), "d = {d}");
        }
    }

    #[test]
    fn vadic_examples_r2() {
        let f2 = field_make(2, 1, None).unwrap();
        let t = Poly::x(&f2);
        let s0 = SvPoint::from_integer(0, 2, 1, 2, 6).unwrap();
        let fam0 = zeta_family_vadic(&f2, &s0, &t, 2, 16).unwrap();
        assert_eq!(fam0.coeffs[1].as_vadic().unwrap().rep(), &Poly::one(&f2));
        let s = SvPoint::from_integer(-1, 2, 1, 2, 6).unwrap();
        let fam = zeta_family_vadic(&f2, &s, &t, 2, 16).unwrap();
        assert_eq!(fam.coeffs[0].as_vadic().unwrap().rep(), &Poly::one(&f2));
        assert_eq!(fam.coeffs[1].as_vadic().unwrap().rep(), &Poly::from_ints(&f2, &[1, 1]));
        assert_eq!(fam.coeffs[2].as_vadic().unwrap().rep(), &t);
    }

    #[test]
    fn vadic_truncated_agrees_with_exact() {
        let f3 = field_make(3, 1, None).unwrap();
        let prime = Poly::from_ints(&f3, &[1, 0, 1]);
        let s = SvPoint::from_integer(-5, 3, 2, 3, 4).unwrap();
        let exact = zeta_family_vadic(&f3, &s, &prime, 3, 10).unwrap();
        let opaque = SvPoint::new(s.s1() as i64, s.order(), PadicExponent::from_digits(3, s.s2().digits().to_vec()).unwrap());
        let trunc = zeta_family_vadic(&f3, &opaque, &prime, 3, 10).unwrap();
        for d in 0..=3 {
            let a = exact.coeffs[d].as_vadic().unwrap().truncate(10);
            assert_eq!(&a, trunc.coeffs[d].as_vadic().unwrap(), "d = {d}");
        }
    }
}
