//! Finite fields F_q, q = p^m, with elements packed as base-p digit integers.
//!
//! An element of F_{p^m} is the residue of `e_0 + e_1 x + ... + e_{m-1} x^{m-1}`
//! modulo the field modulus; it is stored as the integer `sum e_i p^i`. For
//! `m = 1` this is just the residue mod p. Fields with `p^m <= 256` carry full
//! operation tables.

use std::fmt;
use std::sync::Arc;

use super::FfError;

/// Shared handle to a field descriptor.
pub type Field = Arc<FieldDescriptor>;

/// Largest order for which extension fields are supported (tables are r x r).
pub const MAX_TABLE_ORDER: u32 = 256;

/// An element of F_q in packed base-p digit form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    /// The packed representation `sum e_i p^i`.
    #[inline]
    pub fn rep(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) fn from_rep_unchecked(rep: u32) -> Self {
        FqElem(rep)
    }
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    frob: Vec<u32>,
}

/// Description of F_{p^m}: characteristic, degree, defining modulus and order.
pub struct FieldDescriptor {
    p: u32,
    m: u32,
    r: u32,
    modulus: Option<Vec<u32>>,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDescriptor")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldDescriptor {}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds F_{p^m}.
///
/// With no modulus and `m > 1`, the least monic irreducible of degree `m` in
/// enumeration order (constant term varying fastest) is selected, so that every
/// downstream output is reproducible.
pub fn field_make(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Field, FfError> {
    if !is_prime_u64(p as u64) {
        return Err(FfError::CompositeCharacteristic(p));
    }
    if m == 0 {
        return Err(FfError::DegreeMismatch { expected: 1, found: 0 });
    }
    if m == 1 {
        if let Some(md) = modulus {
            check_modulus_shape(p, 1, md)?;
        }
        return Ok(Arc::new(prime_field(p)));
    }
    let r = (p as u64).checked_pow(m).filter(|&r| r <= MAX_TABLE_ORDER as u64);
    let Some(r) = r else {
        return Err(FfError::FieldTooLarge { p, m });
    };
    let base: Field = Arc::new(prime_field(p));
    let modulus = match modulus {
        Some(md) => {
            check_modulus_shape(p, m, md)?;
            let poly = super::Poly::from_reps(&base, md);
            if !super::is_irreducible(&poly)? {
                return Err(FfError::ReducibleModulus);
            }
            md.to_vec()
        }
        None => least_irreducible(&base, m)?,
    };
    let tables = build_extension_tables(p, m, r as u32, &modulus);
    Ok(Arc::new(FieldDescriptor {
        p,
        m,
        r: r as u32,
        modulus: Some(modulus),
        tables: Some(tables),
    }))
}

fn check_modulus_shape(p: u32, m: u32, md: &[u32]) -> Result<(), FfError> {
    if md.len() != m as usize + 1 || md.last() != Some(&1) || md.iter().any(|&c| c >= p) {
        let found = md.iter().rposition(|&c| c != 0).unwrap_or(0) as u32;
        return Err(FfError::DegreeMismatch { expected: m, found });
    }
    Ok(())
}

fn least_irreducible(base: &Field, m: u32) -> Result<Vec<u32>, FfError> {
    for f in super::enumerate_monic(base, m as usize) {
        if super::is_irreducible(&f)? {
            return Ok(f.coeffs().iter().map(|c| c.rep()).collect());
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn prime_field(p: u32) -> FieldDescriptor {
    let tables = if p <= MAX_TABLE_ORDER {
        let n = p as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = ((a + b) % n) as u32;
                mul[a * n + b] = ((a * b) % n) as u32;
            }
        }
        let neg = (0..n).map(|a| ((n - a) % n) as u32).collect();
        let mut inv = vec![0; n];
        for a in 1..n {
            inv[a] = (1..n).find(|&b| a * b % n == 1).unwrap() as u32;
        }
        let frob = (0..n as u32).collect();
        Some(Tables { add, mul, neg, inv, frob })
    } else {
        None
    };
    FieldDescriptor { p, m: 1, r: p, modulus: None, tables }
}

fn digits(mut x: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn pack(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn build_extension_tables(p: u32, m: u32, r: u32, modulus: &[u32]) -> Tables {
    let n = r as usize;
    let mu = m as usize;
    let all: Vec<Vec<u32>> = (0..r).map(|x| digits(x, p, m)).collect();
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let s: Vec<u32> = (0..mu).map(|i| (all[a][i] + all[b][i]) % p).collect();
            add[a * n + b] = pack(&s, p);
            let mut prod = vec![0u32; 2 * mu - 1];
            for i in 0..mu {
                for j in 0..mu {
                    prod[i + j] = (prod[i + j] + all[a][i] * all[b][j]) % p;
                }
            }
            // reduce by the monic modulus
            for k in (mu..prod.len()).rev() {
                let c = prod[k];
                if c != 0 {
                    for i in 0..mu {
                        prod[k - mu + i] = (prod[k - mu + i] + (p - c) * modulus[i]) % p;
                    }
                    prod[k] = 0;
                }
            }
            mul[a * n + b] = pack(&prod[..mu], p);
        }
    }
    let neg: Vec<u32> = (0..n)
        .map(|a| pack(&all[a].iter().map(|&d| (p - d) % p).collect::<Vec<_>>(), p))
        .collect();
    let mut inv = vec![0; n];
    for a in 1..n {
        inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as u32;
    }
    let frob = (0..n)
        .map(|a| {
            // a^p by repeated multiplication
            let mut acc = 1usize;
            for _ in 0..p {
                acc = mul[acc * n + a] as usize;
            }
            acc as u32
        })
        .collect();
    Tables { add, mul, neg, inv, frob }
}

impl FieldDescriptor {
    /// The characteristic.
    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order `p^m`.
    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Modulus coefficients over F_p, lowest degree first (absent for prime fields).
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    /// Element from its packed representation; `None` when `rep >= r`.
    pub fn elem(&self, rep: u32) -> Option<FqElem> {
        (rep < self.r).then_some(FqElem(rep))
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// All elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.r).map(FqElem)
    }

    /// Base-p digits of an element, lowest first, length `m`.
    pub fn digits(&self, a: FqElem) -> Vec<u32> {
        digits(a.0, self.p, self.m)
    }

    /// Element from base-p digits (lowest first); `None` if a digit is out of range
    /// or too many digits are given.
    pub fn from_digits(&self, ds: &[u32]) -> Option<FqElem> {
        if ds.len() > self.m as usize || ds.iter().any(|&d| d >= self.p) {
            return None;
        }
        Some(FqElem(pack(ds, self.p)))
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.tables {
            Some(t) => FqElem(t.add[(a.0 * self.r + b.0) as usize]),
            None => FqElem(((a.0 as u64 + b.0 as u64) % self.p as u64) as u32),
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        match &self.tables {
            Some(t) => FqElem(t.neg[a.0 as usize]),
            None => FqElem((self.p - a.0) % self.p),
        }
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.tables {
            Some(t) => FqElem(t.mul[(a.0 * self.r + b.0) as usize]),
            None => FqElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        Some(match &self.tables {
            Some(t) => FqElem(t.inv[a.0 as usize]),
            None => self.pow(a, self.p as u64 - 2),
        })
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a;
        let mut acc = FqElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The absolute Frobenius `a -> a^p`.
    #[inline]
    pub fn frob(&self, a: FqElem) -> FqElem {
        match &self.tables {
            Some(t) => FqElem(t.frob[a.0 as usize]),
            None => a,
        }
    }

    /// `a -> a^(p^i)`.
    pub fn frob_pow(&self, a: FqElem, i: u32) -> FqElem {
        if self.m == 1 {
            return a;
        }
        (0..i % self.m).fold(a, |x, _| self.frob(x))
    }

    /// Multiplication table access for the hot polynomial kernels.
    #[inline]
    pub(crate) fn mul_table(&self) -> Option<(&[u32], &[u32])> {
        self.tables.as_ref().map(|t| (&t.add[..], &t.mul[..]))
    }
}

/// True when two handles describe the same field.
#[inline]
pub fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_f2() {
        let f = field_make(2, 1, None).unwrap();
        assert_eq!(f.r(), 2);
        assert_eq!(f.add(FqElem::ONE, FqElem::ONE), FqElem::ZERO);
    }

    #[test]
    fn f4_uses_the_only_irreducible_quadratic() {
        let f = field_make(2, 2, None).unwrap();
        assert_eq!(f.r(), 4);
        assert_eq!(f.modulus(), Some(&[1, 1, 1][..]));
        // x * x = x + 1
        let x = f.elem(2).unwrap();
        assert_eq!(f.mul(x, x), f.elem(3).unwrap());
    }

    #[test]
    fn composite_characteristic_rejected() {
        assert!(matches!(field_make(4, 1, None), Err(FfError::CompositeCharacteristic(4))));
        assert!(matches!(field_make(1, 1, None), Err(FfError::CompositeCharacteristic(1))));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(matches!(field_make(2, 2, Some(&[1, 0, 1])), Err(FfError::ReducibleModulus)));
        assert!(matches!(
            field_make(2, 2, Some(&[1, 1])),
            Err(FfError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (2, 3)] {
            let f = field_make(p, m, None).unwrap();
            for a in f.elements().skip(1) {
                let b = f.inv(a).unwrap();
                assert_eq!(f.mul(a, b), FqElem::ONE);
                assert_eq!(f.pow(a, f.r() as u64 - 1), FqElem::ONE);
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let f = field_make(3, 2, None).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.frob(f.add(a, b)), f.add(f.frob(a), f.frob(b)));
            }
            assert_eq!(f.frob_pow(a, 2), a);
        }
    }
}
