//! Dense univariate polynomials over F_q, lowest degree first.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{same_field, Field, FqElem};
use super::FfError;

/// An element of F_q[T] (also used for F_q[u] and for residue rings F_q[T]/(f)).
///
/// The coefficient vector never has a trailing zero, so the zero polynomial has
/// no coefficients and `degree()` returns `None` for it.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FqElem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_field(&self.field, &other.field)
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then the coefficient tuple read from the top. Within a degree
/// this is the monic enumeration order.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("T"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("T"))
    }
}

pub(crate) fn trim(v: &mut Vec<FqElem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Schoolbook product of coefficient slices, optionally truncated to `limit` terms.
/// Zero coefficients of `b` are skipped, which makes sparse right operands cheap.
pub(crate) fn mul_slices(field: &Field, a: &[FqElem], b: &[FqElem], limit: Option<usize>) -> Vec<FqElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let full = a.len() + b.len() - 1;
    let n = limit.map_or(full, |l| l.min(full));
    if n == 0 {
        return Vec::new();
    }
    let p = field.p() as u64;
    if field.is_prime_field() && p < (1 << 16) {
        let mut acc = vec![0u64; n];
        let mut pending = 0u64;
        // flush before the accumulators can overflow
        let budget = u64::MAX / ((p - 1) * (p - 1)).max(1) - 1;
        for (k, bk) in b.iter().enumerate() {
            if k >= n {
                break;
            }
            let bv = bk.rep() as u64;
            if bv == 0 {
                continue;
            }
            let top = (n - k).min(a.len());
            for (i, ai) in a[..top].iter().enumerate() {
                acc[i + k] += ai.rep() as u64 * bv;
            }
            pending += 1;
            if pending >= budget {
                acc.iter_mut().for_each(|x| *x %= p);
                pending = 0;
            }
        }
        acc.into_iter().map(|x| FqElem::from_rep_unchecked((x % p) as u32)).collect()
    } else if let Some((add, mul)) = field.mul_table() {
        let r = field.r() as usize;
        let mut acc = vec![0u32; n];
        for (k, bk) in b.iter().enumerate() {
            if k >= n {
                break;
            }
            let bv = bk.rep() as usize;
            if bv == 0 {
                continue;
            }
            let top = (n - k).min(a.len());
            for (i, ai) in a[..top].iter().enumerate() {
                let prod = mul[ai.rep() as usize * r + bv] as usize;
                let slot = &mut acc[i + k];
                *slot = add[*slot as usize * r + prod];
            }
        }
        acc.into_iter().map(FqElem::from_rep_unchecked).collect()
    } else {
        let mut acc = vec![FqElem::ZERO; n];
        for (k, &bk) in b.iter().enumerate() {
            if k >= n || bk.is_zero() {
                continue;
            }
            let top = (n - k).min(a.len());
            for (i, &ai) in a[..top].iter().enumerate() {
                acc[i + k] = field.add(acc[i + k], field.mul(ai, bk));
            }
        }
        acc
    }
}

pub(crate) fn add_slices(field: &Field, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = field.add(*o, s);
    }
    out
}

/// In-place `acc += b`.
pub(crate) fn add_assign_slice(field: &Field, acc: &mut Vec<FqElem>, b: &[FqElem]) {
    if acc.len() < b.len() {
        acc.resize(b.len(), FqElem::ZERO);
    }
    for (o, &s) in acc.iter_mut().zip(b) {
        *o = field.add(*o, s);
    }
}

impl Poly {
    /// Builds a polynomial, trimming trailing zeros.
    pub fn new(field: &Field, mut coeffs: Vec<FqElem>) -> Self {
        trim(&mut coeffs);
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, FqElem::ONE)
    }

    pub fn constant(field: &Field, c: FqElem) -> Self {
        Self::new(field, vec![c])
    }

    /// `c * T^k`.
    pub fn monomial(field: &Field, c: FqElem, k: usize) -> Self {
        let mut v = vec![FqElem::ZERO; k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    /// The variable `T`.
    pub fn x(field: &Field) -> Self {
        Self::monomial(field, FqElem::ONE, 1)
    }

    /// Coefficients from packed representations (reduced mod r).
    pub fn from_reps(field: &Field, reps: &[u32]) -> Self {
        let r = field.r();
        Self::new(field, reps.iter().map(|&x| FqElem::from_rep_unchecked(x % r)).collect())
    }

    /// Coefficients from integers, each mapped through Z -> F_p.
    pub fn from_ints(field: &Field, ints: &[i64]) -> Self {
        Self::new(field, ints.iter().map(|&x| field.from_int(x)).collect())
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FqElem> {
        self.coeffs
    }

    /// Degree; `None` stands for deg 0 = -infinity.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FqElem::ONE
    }

    /// Monic means leading coefficient 1 (positive in the sign-function sense).
    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&FqElem::ONE)
    }

    pub fn leading(&self) -> Option<FqElem> {
        self.coeffs.last().copied()
    }

    pub fn coeff(&self, k: usize) -> FqElem {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Lowest index with a nonzero coefficient (the T-adic order).
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn ensure_same_field(&self, other: &Poly) -> Result<(), FfError> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(FfError::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, FfError> {
        self.ensure_same_field(other)?;
        Ok(Poly::new(&self.field, add_slices(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, FfError> {
        self.ensure_same_field(other)?;
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, FfError> {
        self.ensure_same_field(other)?;
        Ok(Poly::new(&self.field, mul_slices(&self.field, &self.coeffs, &other.coeffs, None)))
    }

    fn neg_ref(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&c| self.field.neg(c)).collect(),
        }
    }

    pub fn scale(&self, c: FqElem) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect())
    }

    /// Multiplication by `T^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![FqElem::ZERO; k];
        v.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs: v }
    }

    /// Product truncated to the terms of degree `< n` (i.e. modulo `T^n`).
    pub fn mul_trunc(&self, other: &Poly, n: usize) -> Poly {
        Poly::new(&self.field, mul_slices(&self.field, &self.coeffs, &other.coeffs, Some(n)))
    }

    /// Reduction modulo `T^n`.
    pub fn truncate(&self, n: usize) -> Poly {
        Poly::new(&self.field, self.coeffs[..n.min(self.coeffs.len())].to_vec())
    }

    /// Euclidean division: `self = q * b + rem` with `deg rem < deg b`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly), FfError> {
        self.ensure_same_field(b)?;
        let Some(db) = b.degree() else {
            return Err(FfError::DivisionByZero);
        };
        let f = &self.field;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(b.coeffs[db]).expect("nonzero leading coefficient");
        let mut q = vec![FqElem::ZERO; rem.len() - db];
        for k in (db..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let t = f.mul(c, lead_inv);
            q[k - db] = t;
            let nt = f.neg(t);
            for (i, &bi) in b.coeffs.iter().enumerate() {
                if !bi.is_zero() {
                    rem[k - db + i] = f.add(rem[k - db + i], f.mul(nt, bi));
                }
            }
        }
        rem.truncate(db);
        Ok((Poly::new(f, q), Poly::new(f, rem)))
    }

    /// Remainder modulo `b`.
    pub fn rem(&self, b: &Poly) -> Result<Poly, FfError> {
        Ok(self.divmod(b)?.1)
    }

    /// Monic scalar multiple (zero stays zero).
    pub fn to_monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(c) => self.scale(self.field.inv(c).unwrap()),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, FfError> {
        self.ensure_same_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.to_monic())
    }

    /// `self^(p^i)`: Frobenius on coefficients and `T -> T^(p^i)`.
    pub fn frobenius(&self, i: u32) -> Poly {
        let f = &self.field;
        if self.is_zero() {
            return self.clone();
        }
        let step = (f.p() as usize).pow(i);
        let mut v = vec![FqElem::ZERO; (self.coeffs.len() - 1) * step + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            v[k * step] = f.frob_pow(c, i);
        }
        Poly { field: f.clone(), coeffs: v }
    }

    /// Exact power. The exponent is processed in base p; each p-power is a
    /// Frobenius spread, so the multiplications have sparse right operands.
    pub fn pow(&self, j: u64) -> Poly {
        let f = &self.field;
        let p = f.p() as u64;
        let mut acc = Poly::one(f);
        let mut e = j;
        let mut i = 0u32;
        while e > 0 {
            let digit = e % p;
            if digit > 0 {
                let spread = self.frobenius(i);
                for _ in 0..digit {
                    acc = Poly::new(f, mul_slices(f, &acc.coeffs, &spread.coeffs, None));
                }
            }
            e /= p;
            i += 1;
        }
        acc
    }

    /// `self^e mod m` by binary square-and-multiply.
    pub fn powmod(&self, e: u128, m: &Poly) -> Result<Poly, FfError> {
        self.ensure_same_field(m)?;
        if m.is_zero() {
            return Err(FfError::DivisionByZero);
        }
        let mut base = self.rem(m)?;
        let mut acc = Poly::one(&self.field).rem(m)?;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Substitution `T -> g` (composition `self(g)`).
    pub fn compose(&self, g: &Poly) -> Poly {
        let f = &self.field;
        let mut acc = Poly::zero(f);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(f, c);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| f.mul(f.from_int((k as u64 % f.p() as u64) as i64), c))
            .collect();
        Poly::new(f, v)
    }

    /// The same coefficients read in another field handle (used when two handles
    /// describe one field, e.g. the base of A and of A').
    pub fn with_field(&self, field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: self.coeffs.clone() }
    }

    /// Human-readable form in the named variable, e.g. `T^2 + T + 1`.
    /// Extension-field coefficients are shown as bracketed digit strings.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut parts = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coef = if f.is_prime_field() {
                c.rep().to_string()
            } else {
                format!("[{}]", crate::ffpoly::encode_elem(f, c))
            };
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            parts.push(match (k, c == FqElem::ONE) {
                (0, _) => coef,
                (_, true) => mono,
                _ => format!("{coef}{mono}"),
            });
        }
        parts.join(" + ")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomials over different fields")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomials over different fields")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomials over different fields")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;

    fn poly(f: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(f, c)
    }

    #[test]
    fn char2_square() {
        let f2 = field_make(2, 1, None).unwrap();
        let t1 = poly(&f2, &[1, 1]);
        assert_eq!(&t1 * &t1, poly(&f2, &[1, 0, 1]));
        assert_eq!(t1.pow(2), poly(&f2, &[1, 0, 1]));
    }

    #[test]
    fn gcd_of_t2_plus_t_and_t() {
        let f2 = field_make(2, 1, None).unwrap();
        let g = poly(&f2, &[0, 1, 1]).gcd(&poly(&f2, &[0, 1])).unwrap();
        assert_eq!(g, poly(&f2, &[0, 1]));
    }

    #[test]
    fn f3_product() {
        let f3 = field_make(3, 1, None).unwrap();
        // (T+1)(T+2) = T^2 + 2
        assert_eq!(&poly(&f3, &[1, 1]) * &poly(&f3, &[2, 1]), poly(&f3, &[2, 0, 1]));
    }

    #[test]
    fn divmod_by_zero_and_mismatch() {
        let f2 = field_make(2, 1, None).unwrap();
        let f3 = field_make(3, 1, None).unwrap();
        let a = poly(&f2, &[1, 1]);
        assert!(matches!(a.divmod(&Poly::zero(&f2)), Err(FfError::DivisionByZero)));
        assert!(matches!(a.divmod(&poly(&f3, &[1])), Err(FfError::FieldMismatch)));
        assert!(matches!(a.try_mul(&poly(&f3, &[1])), Err(FfError::FieldMismatch)));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = field_make(p, m, None).unwrap();
            let a = Poly::from_reps(&f, &[1, 2 % f.r(), 1, 3 % f.r()]);
            let mut acc = Poly::one(&f);
            for j in 0..40u64 {
                assert_eq!(a.pow(j), acc, "p={p} m={m} j={j}");
                acc = &acc * &a;
            }
        }
    }

    #[test]
    fn large_exponent_power() {
        let f2 = field_make(2, 1, None).unwrap();
        let t1 = poly(&f2, &[1, 1]);
        // (T+1)^(2^20) = T^(2^20) + 1
        let big = t1.pow(1 << 20);
        assert_eq!(big.degree(), Some(1 << 20));
        assert_eq!(big.coeffs().iter().filter(|c| !c.is_zero()).count(), 2);
        let million = t1.pow(1_000_000);
        assert_eq!(million.degree(), Some(1_000_000));
        // Lucas: the number of odd binomials C(10^6, k) is 2^popcount(10^6)
        let nonzero = million.coeffs().iter().filter(|c| !c.is_zero()).count();
        assert_eq!(nonzero, 1 << 1_000_000u32.count_ones());
    }

    #[test]
    fn powmod_agrees_with_pow() {
        let f3 = field_make(3, 1, None).unwrap();
        let a = poly(&f3, &[2, 1, 1]);
        let m = poly(&f3, &[1, 0, 1, 1]);
        for e in [0u64, 1, 2, 7, 26, 100] {
            assert_eq!(a.powmod(e as u128, &m).unwrap(), a.pow(e).rem(&m).unwrap());
        }
    }

    #[test]
    fn eval_and_compose() {
        let f3 = field_make(3, 1, None).unwrap();
        let a = poly(&f3, &[1, 0, 1]); // T^2 + 1
        assert_eq!(a.eval(f3.from_int(1)), f3.from_int(2));
        let shifted = a.compose(&poly(&f3, &[1, 1])); // (T+1)^2 + 1 = T^2 + 2T + 2
        assert_eq!(shifted, poly(&f3, &[2, 2, 1]));
    }

    #[test]
    fn display_forms() {
        let f2 = field_make(2, 1, None).unwrap();
        assert_eq!(poly(&f2, &[1, 1, 1]).display("T"), "T^2 + T + 1");
        let f4 = field_make(2, 2, None).unwrap();
        assert_eq!(Poly::from_reps(&f4, &[2, 1]).display("T"), "T + [01]");
    }
}
