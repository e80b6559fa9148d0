use serde::Serialize;

use crate::ffpoly::{Field, Poly};

use super::{power_sum, power_sum_cached, PowerSumCache};

/// Consecutive vanishing coefficients past the degree bound before stopping.
pub const STOP_WINDOW: usize = 3;

/// `z(x, -j) = sum_d S_d(j) x^-d`, computed for `d = 0..=dmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialPolynomial {
    pub field: Field,
    pub j: u64,
    pub coeffs: Vec<Poly>,
    pub dmax: usize,
    /// Always false: vanishing past `dmax` is observed, not proved.
    pub certified_polynomial: bool,
    /// Largest index with a nonzero coefficient.
    pub observed_degree: usize,
}

/// Summary row for reports.
#[derive(Clone, Debug, Serialize)]
pub struct SpecialPolynomialSummary {
    pub j: u64,
    pub dmax: usize,
    pub observed_degree: usize,
    pub certified_polynomial: bool,
}

impl SpecialPolynomial {
    pub fn summary(&self) -> SpecialPolynomialSummary {
        SpecialPolynomialSummary {
            j: self.j,
            dmax: self.dmax,
            observed_degree: self.observed_degree,
            certified_polynomial: self.certified_polynomial,
        }
    }

    /// `S_d(j)`, or zero past `dmax`.
    pub fn coeff(&self, d: usize) -> Poly {
        self.coeffs.get(d).cloned().unwrap_or_else(|| Poly::zero(&self.field))
    }
}

/// `ceil(log_r(j + 1))`.
pub fn log_bound(r: u32, j: u64) -> usize {
    let mut l = 0usize;
    let mut acc = 1u128;
    while acc < j as u128 + 1 {
        acc *= r as u128;
        l += 1;
    }
    l
}

/// Computes `S_d(j)` for increasing d, stopping once [`STOP_WINDOW`]
/// consecutive coefficients past `log_bound + 1` vanish (and not before
/// `dmax_hint`).
pub fn special_polynomial(field: &Field, j: u64, dmax_hint: Option<usize>) -> SpecialPolynomial {
    special_polynomial_inner(field, j, dmax_hint, |d| power_sum(field, d, j))
}

/// As [`special_polynomial`], reading and filling a cache.
pub fn special_polynomial_cached(field: &Field, j: u64, dmax_hint: Option<usize>, cache: &dyn PowerSumCache) -> SpecialPolynomial {
    special_polynomial_inner(field, j, dmax_hint, |d| power_sum_cached(field, d, j, cache))
}

fn special_polynomial_inner(field: &Field, j: u64, dmax_hint: Option<usize>, mut coeff: impl FnMut(usize) -> Poly) -> SpecialPolynomial {
    let bound = log_bound(field.r(), j) + 1;
    let mut coeffs = Vec::new();
    let mut zeros = 0;
    let mut d = 0;
    loop {
        let c = coeff(d);
        if d > bound {
            zeros = if c.is_zero() { zeros + 1 } else { 0 };
        }
        coeffs.push(c);
        if zeros >= STOP_WINDOW && dmax_hint.is_none_or(|h| d >= h) {
            break;
        }
        d += 1;
    }
    let observed_degree = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    SpecialPolynomial { field: field.clone(), j, dmax: coeffs.len() - 1, coeffs, certified_polynomial: false, observed_degree }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;

    #[test]
    fn r2_examples() {
        let f2 = field_make(2, 1, None).unwrap();
        let z0 = special_polynomial(&f2, 0, None);
        assert_eq!(z0.observed_degree, 0);
        assert_eq!(z0.coeffs[0], Poly::one(&f2));
        let z1 = special_polynomial(&f2, 1, None);
        assert_eq!(z1.observed_degree, 1);
        assert_eq!(z1.coeffs[1], Poly::one(&f2));
        assert!(z1.dmax >= 4);
        assert!(!z1.certified_polynomial);
        let z3 = special_polynomial(&f2, 3, None);
        assert_eq!(z3.coeffs[1], Poly::from_ints(&f2, &[1, 1, 1]));
    }

    #[test]
    fn hint_extends_the_range() {
        let f3 = field_make(3, 1, None).unwrap();
        let z = special_polynomial(&f3, 4, Some(12));
        assert_eq!(z.dmax, 12);
        assert_eq!(log_bound(3, 4), 2);
        assert_eq!(log_bound(2, 0), 0);
    }
}
