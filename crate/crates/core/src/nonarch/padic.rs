//! p-adic exponents (the Z_p coordinate of S_inf) and points of S_v.

use serde::{Deserialize, Serialize};

use super::NonArchError;

/// An element of Z_p known modulo `p^N`, stored as base-p digits (lowest first).
///
/// Exponents built from an integer remember it, so consumers that can work
/// exactly (non-negative integer powers of polynomials) may do so.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicExponent {
    p: u32,
    digits: Vec<u32>,
    integer: Option<i64>,
}

fn max_digits(p: u32) -> usize {
    // keep p^N inside u128 with headroom for products
    let mut n = 0;
    let mut acc: u128 = 1;
    while let Some(next) = acc.checked_mul(p as u128 * p as u128) {
        acc = next / p as u128;
        n += 1;
        if n >= 120 {
            break;
        }
    }
    n
}

impl PadicExponent {
    /// Image of the integer `n` in Z_p, known to `precision` digits.
    pub fn embed(p: u32, n: i64, precision: usize) -> Result<Self, NonArchError> {
        Self::check(p, precision)?;
        let modulus = (p as i128).pow(precision as u32);
        let mut x = (n as i128).rem_euclid(modulus) as u128;
        let digits = (0..precision)
            .map(|_| {
                let d = (x % p as u128) as u32;
                x /= p as u128;
                d
            })
            .collect();
        Ok(PadicExponent { p, digits, integer: Some(n) })
    }

    /// A p-adic number from its first digits.
    pub fn from_digits(p: u32, digits: Vec<u32>) -> Result<Self, NonArchError> {
        Self::check(p, digits.len())?;
        if let Some(&d) = digits.iter().find(|&&d| d >= p) {
            return Err(NonArchError::InvalidDigit { digit: d, p });
        }
        Ok(PadicExponent { p, digits, integer: None })
    }

    fn check(p: u32, precision: usize) -> Result<(), NonArchError> {
        if !crate::ffpoly::is_prime_u64(p as u64) {
            return Err(NonArchError::InvalidDigit { digit: p, p });
        }
        if precision == 0 || precision > max_digits(p) {
            return Err(NonArchError::PrecisionOutOfRange(precision));
        }
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Number of known digits N.
    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    /// `p^N`.
    pub fn modulus(&self) -> u128 {
        (self.p as u128).pow(self.digits.len() as u32)
    }

    /// The representative of the value modulo `p^N` in `[0, p^N)`.
    pub fn residue(&self) -> u128 {
        self.digits.iter().rev().fold(0u128, |acc, &d| acc * self.p as u128 + d as u128)
    }

    /// The integer this exponent was embedded from, if any.
    pub fn as_integer(&self) -> Option<i64> {
        self.integer
    }

    /// True when `p^N >= m`, i.e. the digits pin down powers of 1-units to
    /// precision `m`.
    pub fn covers(&self, m: u64) -> bool {
        self.modulus() >= m as u128
    }

    fn from_residue(p: u32, n: usize, x: u128, integer: Option<i64>) -> Self {
        let mut x = x;
        let digits = (0..n)
            .map(|_| {
                let d = (x % p as u128) as u32;
                x /= p as u128;
                d
            })
            .collect();
        PadicExponent { p, digits, integer }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        let x = (m - self.residue() % m) % m;
        Self::from_residue(self.p, self.precision(), x, self.integer.map(|n| -n))
    }

    /// Multiplication by an integer.
    pub fn scale(&self, k: i64) -> Self {
        let m = self.modulus();
        let kk = (k as i128).rem_euclid(m as i128) as u128;
        let x = mul_mod(self.residue(), kk, m);
        Self::from_residue(self.p, self.precision(), x, self.integer.and_then(|n| n.checked_mul(k)))
    }

    /// Sum, known to the smaller of the two precisions.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let m = (self.p as u128).pow(n as u32);
        let x = (self.residue() % m + other.residue() % m) % m;
        let integer = match (self.integer, other.integer) {
            (Some(a), Some(b)) => a.checked_add(b),
            _ => None,
        };
        Self::from_residue(self.p, n, x, integer)
    }
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    // m <= p^N stays far below 2^64 for the supported precisions in practice;
    // fall back to double-and-add otherwise.
    if let Some(x) = a.checked_mul(b) {
        return x % m;
    }
    let (mut a, mut b, mut acc) = (a % m, b, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            acc = (acc + a) % m;
        }
        a = (a + a) % m;
        b >>= 1;
    }
    acc
}

/// A point of S_v = Z/(r^deg v - 1) x Z_p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvPoint {
    s1: u64,
    order: u64,
    s2: PadicExponent,
}

impl SvPoint {
    /// `order` is `r^deg v - 1`; `s1` is reduced into `[0, order)`.
    pub fn new(s1: i64, order: u64, s2: PadicExponent) -> Self {
        let s1 = (s1 as i128).rem_euclid(order as i128) as u64;
        SvPoint { s1, order, s2 }
    }

    /// Image of the integer `n` in S_v for a prime of degree `deg_v` over F_r.
    pub fn from_integer(n: i64, r: u32, deg_v: usize, p: u32, precision: usize) -> Result<Self, NonArchError> {
        let order = (r as u64).pow(deg_v as u32) - 1;
        Ok(SvPoint::new(n, order, PadicExponent::embed(p, n, precision)?))
    }

    pub fn s1(&self) -> u64 {
        self.s1
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn s2(&self) -> &PadicExponent {
        &self.s2
    }

    /// The integer this point is the image of, when known.
    pub fn as_integer(&self) -> Option<i64> {
        let n = self.s2.as_integer()?;
        ((n as i128).rem_euclid(self.order as i128) as u64 == self.s1).then_some(n)
    }

    pub fn neg(&self) -> Self {
        SvPoint::new(-(self.s1 as i64), self.order, self.s2.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        let s1 = ((self.s1 as i128 * k as i128).rem_euclid(self.order as i128)) as i64;
        SvPoint::new(s1, self.order, self.s2.scale(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_one_is_all_top_digits() {
        let y = PadicExponent::embed(2, -1, 4).unwrap();
        assert_eq!(y.digits(), &[1, 1, 1, 1]);
        assert_eq!(y.residue(), 15);
        let y3 = PadicExponent::embed(3, -1, 3).unwrap();
        assert_eq!(y3.digits(), &[2, 2, 2]);
    }

    #[test]
    fn negation_and_scaling() {
        let y = PadicExponent::embed(3, 5, 6).unwrap();
        assert_eq!(y.neg(), PadicExponent::embed(3, -5, 6).unwrap());
        assert_eq!(y.scale(2), PadicExponent::embed(3, 10, 6).unwrap());
        let z = PadicExponent::from_digits(3, vec![1, 2, 0, 1]).unwrap();
        assert_eq!(z.neg().neg(), z);
        assert_eq!(z.add(&z.neg()).residue(), 0);
        assert!(z.as_integer().is_none());
    }

    #[test]
    fn bad_digits_rejected() {
        assert!(PadicExponent::from_digits(2, vec![0, 2]).is_err());
        assert!(PadicExponent::from_digits(2, vec![]).is_err());
    }

    #[test]
    fn sv_image_of_integer() {
        let s = SvPoint::from_integer(-1, 2, 2, 2, 8).unwrap();
        assert_eq!(s.s1(), 2);
        assert_eq!(s.order(), 3);
        assert_eq!(s.as_integer(), Some(-1));
        assert_eq!(s.neg(), SvPoint::from_integer(1, 2, 2, 2, 8).unwrap());
    }
}
