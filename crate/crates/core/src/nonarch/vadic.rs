//! Elements of the completion A_v at a finite prime v = (f), held as
//! polynomials modulo f^M, plus Teichmuller lifts and powers over S_v.

use std::sync::Arc;

use crate::ffpoly::{mul_slices, Poly};

use super::laurent::needed_modulus;
use super::{NonArchError, SvPoint};

#[derive(Debug, PartialEq, Eq)]
struct Ctx {
    prime: Poly,
    prec: Option<usize>,
    modulus: Option<Poly>,
}

/// An element of A_v known modulo `f^M`, or exactly (an unreduced polynomial)
/// when the precision is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VadicElem {
    ctx: Arc<Ctx>,
    rep: Poly,
}

fn is_t(f: &Poly) -> bool {
    f.degree() == Some(1) && f.coeff(0).is_zero()
}

impl VadicElem {
    /// `rep` modulo `prime^prec`. `prime` must be monic and irreducible.
    pub fn new(rep: Poly, prime: &Poly, prec: Option<usize>) -> Result<Self, NonArchError> {
        check_prime(prime)?;
        let ctx = Arc::new(Ctx { prime: prime.clone(), prec, modulus: prec.map(|m| prime.pow(m as u64)) });
        Ok(Self::with_ctx(ctx, rep))
    }

    fn with_ctx(ctx: Arc<Ctx>, rep: Poly) -> Self {
        let rep = reduce(&ctx, rep);
        VadicElem { ctx, rep }
    }

    pub fn prime(&self) -> &Poly {
        &self.ctx.prime
    }

    /// `M`, or `None` when exact.
    pub fn precision(&self) -> Option<usize> {
        self.ctx.prec
    }

    /// Canonical representative: reduced modulo `f^M` when truncated.
    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    /// f-adic order, or `None` when the element vanishes to its precision
    /// (or is exactly zero).
    pub fn valuation(&self) -> Option<usize> {
        if self.rep.is_zero() {
            return None;
        }
        Some(f_order(&self.rep, &self.ctx.prime))
    }

    /// Image in A / f, the leading v-adic digit.
    pub fn residue(&self) -> Poly {
        self.rep.rem(&self.ctx.prime).unwrap()
    }

    fn join(&self, other: &Self) -> Arc<Ctx> {
        assert_eq!(self.ctx.prime, other.ctx.prime, "elements at different primes");
        match (self.ctx.prec, other.ctx.prec) {
            (None, _) => other.ctx.clone(),
            (_, None) => self.ctx.clone(),
            (Some(a), Some(b)) => if a <= b { self.ctx.clone() } else { other.ctx.clone() },
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let ctx = self.join(other);
        Self::with_ctx(ctx, &self.rep + &other.rep)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let ctx = self.join(other);
        Self::with_ctx(ctx, &self.rep - &other.rep)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ctx = self.join(other);
        let prod = match (ctx.prec, is_t(&ctx.prime)) {
            (Some(m), true) => self.rep.mul_trunc(&other.rep, m),
            _ => &self.rep * &other.rep,
        };
        Self::with_ctx(ctx, prod)
    }

    /// Lowers the precision to `m`.
    pub fn truncate(&self, m: usize) -> Self {
        if self.ctx.prec.is_some_and(|p| p <= m) {
            return self.clone();
        }
        let ctx = Arc::new(Ctx { prime: self.ctx.prime.clone(), prec: Some(m), modulus: Some(self.ctx.prime.pow(m as u64)) });
        Self::with_ctx(ctx, self.rep.clone())
    }

    /// `x^(p^i)`, reduced.
    fn frobenius(&self, i: u32) -> Self {
        let spread = match (self.ctx.prec, is_t(&self.ctx.prime)) {
            (Some(m), true) => frob_trunc(&self.rep, i, m),
            _ => self.rep.frobenius(i),
        };
        Self::with_ctx(self.ctx.clone(), spread)
    }

    /// `x^e` for a non-negative integer `e` (base-p digits, sparse factors).
    pub fn pow_int(&self, e: u128) -> Self {
        let f = self.rep.field();
        let p = f.p() as u128;
        let mut acc = Self::with_ctx(self.ctx.clone(), Poly::one(f));
        let mut e = e;
        let mut i = 0u32;
        while e > 0 {
            let digit = e % p;
            if digit > 0 {
                let spread = self.frobenius(i);
                for _ in 0..digit {
                    acc = acc.mul_sparse(&spread);
                }
            }
            e /= p;
            i += 1;
        }
        acc
    }

    fn mul_sparse(&self, spread: &Self) -> Self {
        let f = self.rep.field();
        let limit = match (self.ctx.prec, is_t(&self.ctx.prime)) {
            (Some(m), true) => Some(m),
            _ => None,
        };
        let prod = Poly::new(f, mul_slices(f, self.rep.coeffs(), spread.rep.coeffs(), limit));
        Self::with_ctx(self.ctx.clone(), prod)
    }
}

fn check_prime(prime: &Poly) -> Result<(), NonArchError> {
    if !prime.is_monic() || !crate::ffpoly::is_irreducible(prime).unwrap_or(false) {
        return Err(NonArchError::NotIrreducible);
    }
    Ok(())
}

fn reduce(ctx: &Ctx, rep: Poly) -> Poly {
    match (&ctx.modulus, ctx.prec) {
        (Some(_), Some(m)) if is_t(&ctx.prime) => rep.truncate(m),
        (Some(modulus), _) => rep.rem(modulus).unwrap(),
        (None, _) => rep,
    }
}

fn frob_trunc(rep: &Poly, i: u32, m: usize) -> Poly {
    let f = rep.field();
    let step = (f.p() as usize).pow(i);
    let mut v = Vec::new();
    for (k, &c) in rep.coeffs().iter().enumerate() {
        let e = k * step;
        if e >= m {
            break;
        }
        v.resize(e + 1, crate::ffpoly::FqElem::ZERO);
        v[e] = f.frob_pow(c, i);
    }
    Poly::new(f, v)
}

/// Exact f-adic order of a nonzero polynomial.
pub fn f_order(n: &Poly, f: &Poly) -> usize {
    let mut k = 0;
    let mut cur = n.clone();
    loop {
        let (q, r) = cur.divmod(f).unwrap();
        if !r.is_zero() {
            return k;
        }
        cur = q;
        k += 1;
    }
}

/// Teichmuller representative of `n` modulo `f^m`: the unique root of unity
/// of order dividing `r^deg f - 1` congruent to `n` mod f.
pub fn teichmuller(n: &Poly, f: &Poly, m: usize) -> Result<VadicElem, NonArchError> {
    check_prime(f)?;
    if n.rem(f).unwrap().is_zero() {
        return Err(NonArchError::NotCoprime);
    }
    let field = n.field();
    let steps = field.m() * f.degree().unwrap() as u32;
    let mut x = VadicElem::new(n.clone(), f, Some(m))?;
    // x -> x^Q converges f-adically: x_k = omega mod f^(Q^k)
    let cap = 2 + (usize::BITS - m.leading_zeros()) as usize;
    for _ in 0..cap {
        let next = x.frobenius(steps);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(NonArchError::NonConvergence { iterations: cap })
}

/// `n^s` in A_v modulo `f^m` for `s = (s1, s2)` in S_v:
/// `omega(n)^s1 * <n>_v^s2`, with `<n>_v = n / omega(n)`.
pub fn pow_sv(n: &Poly, s: &SvPoint, f: &Poly, m: usize) -> Result<VadicElem, NonArchError> {
    let y = s.s2();
    if y.p() != n.field().p() {
        return Err(NonArchError::CharacteristicMismatch { exponent: y.p(), field: n.field().p() });
    }
    if !y.covers(m as u64) {
        return Err(NonArchError::InsufficientPadicPrecision { needed: m as u64, available: y.modulus() });
    }
    let omega = teichmuller(n, f, m)?;
    let q = s.order() as u128 + 1;
    let omega_inv = omega.pow_int(q - 2);
    let unit = VadicElem::new(n.clone(), f, Some(m))?.mul(&omega_inv);
    let e = y.residue() % needed_modulus(y.p(), m as u64);
    Ok(omega.pow_int(s.s1() as u128).mul(&unit.pow_int(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;
    use crate::nonarch::PadicExponent;

    #[test]
    fn teichmuller_at_t_is_constant_term() {
        let f = field_make(3, 1, None).unwrap();
        let t = Poly::x(&f);
        let n = Poly::from_ints(&f, &[2, 1, 1]);
        let w = teichmuller(&n, &t, 20).unwrap();
        assert_eq!(w.rep(), &Poly::from_ints(&f, &[2]));
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        let f = field_make(2, 1, None).unwrap();
        let prime = Poly::from_ints(&f, &[1, 1, 1]);
        let n = Poly::from_ints(&f, &[0, 1, 0, 1, 1]);
        let w = teichmuller(&n, &prime, 12).unwrap();
        assert_eq!(w.pow_int(3).rep(), &Poly::one(&f));
        assert_eq!(w.residue(), n.rem(&prime).unwrap());
        assert!(matches!(teichmuller(&prime, &prime, 4), Err(NonArchError::NotCoprime)));
    }

    #[test]
    fn sv_power_of_integer_image() {
        let f = field_make(3, 1, None).unwrap();
        let prime = Poly::from_ints(&f, &[1, 0, 1]);
        let n = Poly::from_ints(&f, &[1, 2, 0, 1]);
        for j in [0i64, 1, 4, 17] {
            let s = SvPoint::from_integer(j, 3, 2, 3, 5).unwrap();
            let got = pow_sv(&n, &s, &prime, 10).unwrap();
            let want = VadicElem::new(n.pow(j as u64), &prime, Some(10)).unwrap();
            assert_eq!(got, want, "j = {j}");
        }
    }

    #[test]
    fn sv_power_of_minus_one_is_inverse() {
        let f = field_make(2, 1, None).unwrap();
        let t = Poly::x(&f);
        let n = Poly::from_ints(&f, &[1, 1, 1]);
        let s = SvPoint::from_integer(-1, 2, 1, 2, 6).unwrap();
        let inv = pow_sv(&n, &s, &t, 40).unwrap();
        let prod = inv.mul(&VadicElem::new(n, &t, Some(40)).unwrap());
        assert_eq!(prod.rep(), &Poly::one(&f));
    }

    #[test]
    fn valuations() {
        let f = field_make(2, 1, None).unwrap();
        let t = Poly::x(&f);
        let x = VadicElem::new(Poly::from_ints(&f, &[0, 0, 1, 1]), &t, Some(5)).unwrap();
        assert_eq!(x.valuation(), Some(2));
        let z = VadicElem::new(Poly::from_ints(&f, &[0, 0, 0, 0, 0, 1]), &t, Some(5)).unwrap();
        assert_eq!(z.valuation(), None);
        let y = PadicExponent::embed(2, 3, 2).unwrap();
        let s = SvPoint::new(0, 1, y);
        assert!(matches!(pow_sv(&Poly::one(&f), &s, &t, 5), Err(NonArchError::InsufficientPadicPrecision { .. })));
    }
}
