//! Truncated Laurent series in a uniformizer, with absolute precision tracking.

use std::fmt;

use crate::ffpoly::{mul_slices, same_field, Field, FqElem, Poly};

use super::{NonArchError, PadicExponent};

/// The place a series is expanded at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// Uniformizer `1/T`.
    Infinity,
    /// Uniformizer a monic prime of A.
    Finite(Poly),
}

/// `sum_{k >= val} c_k pi^k`, known modulo `pi^prec` (or exactly when `prec` is `None`).
///
/// Normal form: `coeffs` is empty or has nonzero first and last entries, and
/// no stored exponent reaches `prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    place: Place,
    val: i64,
    coeffs: Vec<FqElem>,
    prec: Option<i64>,
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    pub fn new(field: &Field, place: Place, val: i64, coeffs: Vec<FqElem>, prec: Option<i64>) -> Self {
        let mut s = LaurentSeries { field: field.clone(), place, val, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => self.coeffs.clear(),
            Some(i) => {
                self.coeffs.drain(..i);
                self.val += i as i64;
            }
        }
        if let Some(p) = self.prec {
            let keep = (p - self.val).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.val = self.prec.unwrap_or(0);
        }
    }

    pub fn zero(field: &Field, place: Place, prec: Option<i64>) -> Self {
        Self::new(field, place, 0, Vec::new(), prec)
    }

    pub fn one(field: &Field, place: Place) -> Self {
        Self::new(field, place, 0, vec![FqElem::ONE], None)
    }

    /// The expansion of `n in A` at infinity: `sum c_k T^k = sum c_k pi^-k`.
    pub fn from_poly_at_infinity(n: &Poly, prec: Option<i64>) -> Self {
        let Some(d) = n.degree() else {
            return Self::zero(n.field(), Place::Infinity, prec);
        };
        let coeffs = n.coeffs().iter().rev().copied().collect();
        Self::new(n.field(), Place::Infinity, -(d as i64), coeffs, prec)
    }

    /// Reads an expansion at infinity back as a polynomial in T, when it has no
    /// negative powers of T and is exact.
    pub fn to_poly_at_infinity(&self) -> Option<Poly> {
        if self.prec.is_some() || self.place != Place::Infinity {
            return None;
        }
        if self.coeffs.is_empty() {
            return Some(Poly::zero(&self.field));
        }
        let top = self.val + self.coeffs.len() as i64 - 1;
        if top > 0 {
            return None;
        }
        let mut v = vec![FqElem::ZERO; (-self.val) as usize + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            v[(-(self.val + k as i64)) as usize] = c;
        }
        Some(Poly::new(&self.field, v))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    /// Exponent of the first stored coefficient.
    pub fn start(&self) -> i64 {
        self.val
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    /// Absolute precision; `None` for exact series.
    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// True for the exact zero series.
    pub fn is_exact_zero(&self) -> bool {
        self.prec.is_none() && self.coeffs.is_empty()
    }

    /// True when no nonzero coefficient is known (exact zero or `O(pi^prec)`).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The valuation, or `None` when the series vanishes to its precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// Coefficient of `pi^k`, or `None` when it lies beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<FqElem> {
        if self.prec.is_some_and(|p| k >= p) {
            return None;
        }
        let i = k - self.val;
        if i < 0 || i >= self.coeffs.len() as i64 {
            return Some(FqElem::ZERO);
        }
        Some(self.coeffs[i as usize])
    }

    /// Leading coefficient, if the series is not zero to precision.
    pub fn leading(&self) -> Option<FqElem> {
        self.coeffs.first().copied()
    }

    /// `val = 0` and leading coefficient 1.
    pub fn is_one_unit(&self) -> bool {
        self.val == 0 && self.leading() == Some(FqElem::ONE)
    }

    fn check(&self, other: &Self) {
        assert!(same_field(&self.field, &other.field), "series over different fields");
        assert!(self.place == other.place, "series at different places");
    }

    /// Lowers the precision to at most `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(&self.field, self.place.clone(), self.val, self.coeffs.clone(), min_opt(self.prec, Some(prec)))
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&c| f.neg(c)).collect();
        Self::new(f, self.place.clone(), self.val, coeffs, self.prec)
    }

    pub fn scale(&self, c: FqElem) -> Self {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&x| f.mul(x, c)).collect();
        Self::new(f, self.place.clone(), self.val, coeffs, self.prec)
    }

    /// Multiplication by `pi^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(&self.field, self.place.clone(), self.val + k, self.coeffs.clone(), self.prec.map(|p| p + k))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let f = &self.field;
        let prec = min_opt(self.prec, other.prec);
        if self.coeffs.is_empty() {
            return other.truncate_opt(prec);
        }
        if other.coeffs.is_empty() {
            return self.truncate_opt(prec);
        }
        let lo = self.val.min(other.val);
        let hi_a = self.val + self.coeffs.len() as i64;
        let hi_b = other.val + other.coeffs.len() as i64;
        let mut hi = hi_a.max(hi_b);
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        let len = (hi - lo).max(0) as usize;
        let mut v = vec![FqElem::ZERO; len];
        for (src, start) in [(&self.coeffs, self.val), (&other.coeffs, other.val)] {
            for (k, &c) in src.iter().enumerate() {
                let idx = start + k as i64 - lo;
                if idx < len as i64 {
                    v[idx as usize] = f.add(v[idx as usize], c);
                }
            }
        }
        Self::new(f, self.place.clone(), lo, v, prec)
    }

    fn truncate_opt(&self, prec: Option<i64>) -> Self {
        match prec {
            Some(p) => self.truncate(p),
            None => self.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; precision `min(prec_a + v_b, prec_b + v_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.field, self.place.clone(), None);
        }
        // a series that vanishes to precision P has valuation at least P
        let va = self.valuation().or(self.prec).unwrap();
        let vb = other.valuation().or(other.prec).unwrap();
        let prec = min_opt(self.prec.map(|p| p + vb), other.prec.map(|p| p + va));
        let start = va + vb;
        let limit = prec.map(|p| (p - start).max(0) as usize);
        let coeffs = mul_slices(&self.field, &self.coeffs, &other.coeffs, limit);
        Self::new(&self.field, self.place.clone(), start, coeffs, prec)
    }

    /// Multiplicative inverse.
    ///
    /// A truncated series keeps its relative precision. An exact series with
    /// more than one term needs `cap`, the absolute precision of the result.
    pub fn inv(&self, cap: Option<i64>) -> Result<Self, NonArchError> {
        let f = &self.field;
        let Some(v) = self.valuation() else {
            return Err(NonArchError::DivisionByZero);
        };
        let u0inv = f.inv(self.coeffs[0]).expect("leading coefficient is nonzero");
        if self.prec.is_none() && self.coeffs.len() == 1 {
            return Ok(Self::new(f, self.place.clone(), -v, vec![u0inv], None));
        }
        let prec = min_opt(self.prec.map(|p| p - 2 * v), cap).ok_or(NonArchError::UnboundedPrecision)?;
        let n = (prec + v).max(0) as usize;
        let mut b = vec![FqElem::ZERO; n];
        for k in 0..n {
            let mut s = if k == 0 { FqElem::ONE } else { FqElem::ZERO };
            for i in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                s = f.sub(s, f.mul(self.coeffs[i], b[k - i]));
            }
            b[k] = f.mul(s, u0inv);
        }
        Ok(Self::new(f, self.place.clone(), -v, b, Some(prec)))
    }

    /// `self / other`; `cap` is passed to [`LaurentSeries::inv`].
    pub fn div(&self, other: &Self, cap: Option<i64>) -> Result<Self, NonArchError> {
        Ok(self.mul(&other.inv(cap)?))
    }

    /// `x^(p^i)`: Frobenius on coefficients and `pi^k -> pi^(k p^i)`, dropping
    /// terms at or beyond `cap`.
    pub fn frobenius(&self, i: u32, cap: Option<i64>) -> Self {
        let f = &self.field;
        let step = (f.p() as i64).pow(i);
        let prec = min_opt(self.prec.map(|p| p * step), cap);
        if self.coeffs.is_empty() {
            return Self::new(f, self.place.clone(), 0, Vec::new(), prec);
        }
        let start = self.val * step;
        let mut v = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            let e = start + k as i64 * step;
            if prec.is_some_and(|p| e >= p) {
                break;
            }
            let idx = (e - start) as usize;
            v.resize(idx + 1, FqElem::ZERO);
            v[idx] = f.frob_pow(c, i);
        }
        Self::new(f, self.place.clone(), start, v, prec)
    }

    /// `x^e` for a non-negative integer `e`, truncated at `cap`.
    ///
    /// Writes `x = pi^v u` with `u` a unit and processes `e` in base p, so each
    /// factor of `u^e` is a sparse Frobenius spread.
    pub fn pow_int(&self, e: u128, cap: Option<i64>) -> Self {
        let f = &self.field;
        if e == 0 {
            return Self::one(f, self.place.clone()).truncate_opt(cap);
        }
        let Some(v) = self.valuation() else {
            return self.clone();
        };
        let shift = v as i128 * e as i128;
        let shift = i64::try_from(shift).expect("valuation of power overflows");
        let unit = self.shift(-v);
        let unit_cap = cap.map(|c| c - shift);
        let p = f.p() as u128;
        let mut acc = Self::one(f, self.place.clone()).truncate_opt(unit_cap);
        let mut e = e;
        let mut i = 0u32;
        while e > 0 {
            let digit = e % p;
            if digit > 0 {
                let spread = unit.frobenius(i, unit_cap);
                for _ in 0..digit {
                    acc = acc.mul(&spread);
                }
            }
            e /= p;
            i += 1;
        }
        acc.shift(shift)
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(format!("[{}]pi^{}", crate::ffpoly::encode_elem(&self.field, *c), self.val + k as i64));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        if let Some(p) = self.prec {
            parts.push(format!("O(pi^{p})"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `<n> = n / sgn(n) T^deg n` expanded at infinity: `sum c_k pi^(deg n - k)`.
/// For monic `n` this is a 1-unit. `prec = None` keeps it exact.
pub fn bracket_infty(n: &Poly, prec: Option<i64>) -> Result<LaurentSeries, NonArchError> {
    let Some(d) = n.degree() else {
        return Err(NonArchError::ZeroInput);
    };
    let f = n.field();
    let lead_inv = f.inv(n.leading().unwrap()).unwrap();
    let exact = LaurentSeries::from_poly_at_infinity(&n.scale(lead_inv), None).shift(d as i64);
    Ok(exact.truncate_opt(prec))
}

/// `u^y` for a 1-unit `u` and `y in Z_p`, to absolute precision `m`.
///
/// Only the digits of `y` below `p^K >= m` matter, since `u^(p^K) = 1 + O(pi^m)`.
pub fn unit_pow_padic(u: &LaurentSeries, y: &PadicExponent, m: i64) -> Result<LaurentSeries, NonArchError> {
    if !u.is_one_unit() {
        return Err(NonArchError::NotAOneUnit);
    }
    if y.p() != u.field().p() {
        return Err(NonArchError::CharacteristicMismatch { exponent: y.p(), field: u.field().p() });
    }
    if m <= 0 {
        return Ok(LaurentSeries::zero(u.field(), u.place().clone(), Some(m)));
    }
    if !y.covers(m as u64) {
        return Err(NonArchError::InsufficientPadicPrecision { needed: m as u64, available: y.modulus() });
    }
    if u.precision().is_some_and(|p| p < m) {
        return Err(NonArchError::InsufficientPrecision { needed: m, available: u.precision().unwrap() });
    }
    let e = y.residue() % needed_modulus(y.p(), m as u64);
    Ok(u.truncate(m).pow_int(e, Some(m)))
}

/// The least power `p^K >= m`.
pub(crate) fn needed_modulus(p: u32, m: u64) -> u128 {
    let mut q = 1u128;
    while q < m as u128 {
        q *= p as u128;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;

    fn f2() -> Field {
        field_make(2, 1, None).unwrap()
    }

    #[test]
    fn geometric_inverse() {
        // (1 - pi)^-1 = 1 + pi + pi^2 + ...
        let f = field_make(3, 1, None).unwrap();
        let one_minus = LaurentSeries::new(&f, Place::Infinity, 0, vec![f.from_int(1), f.from_int(-1)], None);
        let inv = one_minus.inv(Some(10)).unwrap();
        assert_eq!(inv.precision(), Some(10));
        assert!(inv.coeffs().iter().all(|&c| c == FqElem::ONE));
        assert_eq!(inv.coeffs().len(), 10);
        let back = inv.mul(&one_minus);
        assert_eq!(back.coeffs(), &[FqElem::ONE]);
        assert_eq!(back.precision(), Some(10));
    }

    #[test]
    fn precision_rules() {
        let f = f2();
        let a = LaurentSeries::new(&f, Place::Infinity, 1, vec![FqElem::ONE, FqElem::ONE], Some(5));
        let b = LaurentSeries::new(&f, Place::Infinity, 2, vec![FqElem::ONE], Some(4));
        assert_eq!(a.add(&b).precision(), Some(4));
        // min(5 + 2, 4 + 1)
        assert_eq!(a.mul(&b).precision(), Some(5));
        let z = LaurentSeries::zero(&f, Place::Infinity, Some(3));
        assert_eq!(z.valuation(), None);
        assert_eq!(z.mul(&a).precision(), Some(4));
    }

    #[test]
    fn bracket_of_monic_is_one_unit() {
        let f = f2();
        let n = Poly::from_ints(&f, &[1, 1, 0, 1]);
        let b = bracket_infty(&n, Some(8)).unwrap();
        assert!(b.is_one_unit());
        assert_eq!(b.coeff(2), Some(FqElem::ONE));
        assert_eq!(b.coeff(3), Some(FqElem::ONE));
        assert_eq!(b.coeff(1), Some(FqElem::ZERO));
        assert!(matches!(bracket_infty(&Poly::zero(&f), None), Err(NonArchError::ZeroInput)));
    }

    #[test]
    fn integer_exponent_agrees_with_polynomial_power() {
        let f = field_make(3, 1, None).unwrap();
        let n = Poly::from_ints(&f, &[2, 1, 1]);
        for j in [1u64, 2, 5, 13, 40] {
            let exact = bracket_infty(&n.pow(j), None).unwrap();
            let y = PadicExponent::embed(3, j as i64, 6).unwrap();
            let via = unit_pow_padic(&bracket_infty(&n, Some(30)).unwrap(), &y, 30).unwrap();
            assert_eq!(via, exact.truncate(30), "j = {j}");
        }
    }

    #[test]
    fn unit_pow_errors() {
        let f = f2();
        let y = PadicExponent::embed(2, -1, 3).unwrap();
        let u = bracket_infty(&Poly::from_ints(&f, &[1, 1]), Some(20)).unwrap();
        assert!(matches!(unit_pow_padic(&u, &y, 20), Err(NonArchError::InsufficientPadicPrecision { .. })));
        let not_unit = u.shift(1);
        assert!(matches!(unit_pow_padic(&not_unit, &y, 4), Err(NonArchError::NotAOneUnit)));
    }

    #[test]
    fn minus_one_power_is_inverse() {
        let f = field_make(5, 1, None).unwrap();
        let n = Poly::from_ints(&f, &[3, 4, 1]);
        let u = bracket_infty(&n, Some(25)).unwrap();
        let y = PadicExponent::embed(5, -1, 3).unwrap();
        let inv = unit_pow_padic(&u, &y, 25).unwrap();
        assert_eq!(inv, u.inv(None).unwrap());
    }

    #[test]
    fn exact_roundtrip_to_poly() {
        let f = f2();
        let n = Poly::from_ints(&f, &[1, 0, 1, 1]);
        assert_eq!(LaurentSeries::from_poly_at_infinity(&n, None).to_poly_at_infinity(), Some(n));
    }
}
