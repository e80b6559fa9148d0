//! The twisted polynomial ring R{tau} with `tau a = a^r tau`, where R is
//! F_r[w] or a residue field F_r[w]/(P).

use std::fmt;
use std::sync::Arc;

use crate::ffpoly::{FfError, Field, Poly};

/// Coefficient ring of a skew polynomial: `F_r[w]`, or `F_r[w]/(P)` when a
/// modulus is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffRing {
    field: Field,
    modulus: Option<Poly>,
}

impl CoeffRing {
    /// The polynomial ring `F_r[w]`.
    pub fn polynomial(field: &Field) -> Arc<Self> {
        Arc::new(CoeffRing { field: field.clone(), modulus: None })
    }

    /// The residue ring `F_r[w]/(P)` for a monic `P`.
    pub fn residue(modulus: &Poly) -> Arc<Self> {
        Arc::new(CoeffRing { field: modulus.field().clone(), modulus: Some(modulus.to_monic()) })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn modulus(&self) -> Option<&Poly> {
        self.modulus.as_ref()
    }

    /// Degree of the residue field over F_r.
    pub fn degree(&self) -> Option<usize> {
        self.modulus.as_ref().and_then(|m| m.degree())
    }

    pub fn reduce(&self, a: Poly) -> Poly {
        match &self.modulus {
            Some(m) => a.rem(m).expect("modulus is nonzero"),
            None => a,
        }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(a * b)
    }

    /// `a^r`: the coefficients are fixed, so this is `a(w^r)`.
    pub fn frob(&self, a: &Poly) -> Poly {
        self.reduce(a.frobenius(self.field.m()))
    }

    /// `a^(r^k)`.
    pub fn frob_pow(&self, a: &Poly, k: usize) -> Poly {
        let mut x = self.reduce(a.clone());
        for _ in 0..k {
            x = self.frob(&x);
        }
        x
    }

    pub fn is_zero(&self, a: &Poly) -> bool {
        self.reduce(a.clone()).is_zero()
    }
}

/// `sum_i a_i tau^i` with coefficients in a [`CoeffRing`].
#[derive(Clone, PartialEq, Eq)]
pub struct SkewPoly {
    ring: Arc<CoeffRing>,
    coeffs: Vec<Poly>,
}

impl SkewPoly {
    pub fn new(ring: &Arc<CoeffRing>, coeffs: Vec<Poly>) -> Self {
        let mut coeffs: Vec<Poly> = coeffs.into_iter().map(|c| ring.reduce(c)).collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SkewPoly { ring: ring.clone(), coeffs }
    }

    pub fn zero(ring: &Arc<CoeffRing>) -> Self {
        SkewPoly { ring: ring.clone(), coeffs: Vec::new() }
    }

    pub fn one(ring: &Arc<CoeffRing>) -> Self {
        Self::constant(ring, Poly::one(ring.field()))
    }

    pub fn constant(ring: &Arc<CoeffRing>, a: Poly) -> Self {
        Self::new(ring, vec![a])
    }

    /// `tau^k`.
    pub fn tau_pow(ring: &Arc<CoeffRing>, k: usize) -> Self {
        let mut c = vec![Poly::zero(ring.field()); k];
        c.push(Poly::one(ring.field()));
        Self::new(ring, c)
    }

    pub fn ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Poly::zero(self.ring.field()))
    }

    /// tau-degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check(&self, other: &Self) -> Result<(), FfError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(FfError::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FfError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Ok(Self::new(&self.ring, c))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FfError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        Ok(Self::new(&self.ring, c))
    }

    /// `(sum a_i tau^i)(sum b_j tau^j) = sum a_i b_j^(r^i) tau^(i+j)`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, FfError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let ring = &self.ring;
        let mut out = vec![Poly::zero(ring.field()); self.coeffs.len() + other.coeffs.len() - 1];
        // twisted copies of b: row i holds b_j^(r^i)
        let mut twisted: Vec<Poly> = other.coeffs.iter().map(|b| ring.reduce(b.clone())).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(|b| ring.frob(b)).collect();
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in twisted.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &ring.mul(a, b);
                }
            }
        }
        Ok(Self::new(ring, out))
    }

    /// Left multiplication by a coefficient.
    pub fn scale(&self, a: &Poly) -> Self {
        let c = self.coeffs.iter().map(|x| self.ring.mul(a, x)).collect();
        Self::new(&self.ring, c)
    }

    /// The same coefficients read in another ring (reduction when the target has a modulus).
    pub fn reduce_into(&self, ring: &Arc<CoeffRing>) -> Self {
        Self::new(ring, self.coeffs.clone())
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = c.display(var);
            let coeff = if c.coeffs().iter().filter(|x| !x.is_zero()).count() > 1 { format!("({coeff})") } else { coeff };
            parts.push(match i {
                0 => coeff,
                1 if c.is_one() => "tau".to_string(),
                1 => format!("{coeff}*tau"),
                _ if c.is_one() => format!("tau^{i}"),
                _ => format!("{coeff}*tau^{i}"),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("w"))
    }
}

impl std::ops::Add for &SkewPoly {
    type Output = SkewPoly;
    fn add(self, rhs: &SkewPoly) -> SkewPoly {
        self.try_add(rhs).expect("skew polynomials over different rings")
    }
}

impl std::ops::Sub for &SkewPoly {
    type Output = SkewPoly;
    fn sub(self, rhs: &SkewPoly) -> SkewPoly {
        self.try_sub(rhs).expect("skew polynomials over different rings")
    }
}

impl std::ops::Mul for &SkewPoly {
    type Output = SkewPoly;
    fn mul(self, rhs: &SkewPoly) -> SkewPoly {
        self.try_mul(rhs).expect("skew polynomials over different rings")
    }
}

/// Free-function form of the product.
pub fn skew_mul(a: &SkewPoly, b: &SkewPoly) -> Result<SkewPoly, FfError> {
    a.try_mul(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;

    #[test]
    fn f4_square() {
        // F_4 = F_2[w]/(w^2 + w + 1); theta = w
        let f2 = field_make(2, 1, None).unwrap();
        let ring = CoeffRing::residue(&Poly::from_ints(&f2, &[1, 1, 1]));
        let theta = Poly::x(&f2);
        let x = SkewPoly::new(&ring, vec![theta.clone(), Poly::one(&f2)]);
        let sq = &x * &x;
        let th2 = ring.mul(&theta, &theta);
        assert_eq!(sq.coeffs(), &[th2.clone(), ring.reduce(&theta + &th2), Poly::one(&f2)]);
    }

    #[test]
    fn identity_and_twist() {
        let f3 = field_make(3, 1, None).unwrap();
        let ring = CoeffRing::polynomial(&f3);
        let theta = SkewPoly::constant(&ring, Poly::x(&f3));
        let tau = SkewPoly::tau_pow(&ring, 1);
        assert_eq!(&SkewPoly::one(&ring) * &theta, theta);
        assert_eq!(&tau * &theta, SkewPoly::new(&ring, vec![Poly::zero(&f3), Poly::x(&f3).pow(3)]));
    }

    #[test]
    fn mismatched_rings() {
        let f2 = field_make(2, 1, None).unwrap();
        let a = SkewPoly::one(&CoeffRing::polynomial(&f2));
        let b = SkewPoly::one(&CoeffRing::residue(&Poly::x(&f2)));
        assert!(matches!(skew_mul(&a, &b), Err(FfError::FieldMismatch)));
    }
}
