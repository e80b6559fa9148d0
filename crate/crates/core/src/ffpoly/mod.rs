//! Exact arithmetic in F_q and in A = F_r[T]: field construction, polynomial
//! ring operations, monic enumeration and irreducibility.

mod field;
mod poly;

use std::ops::Range;

use thiserror::Error;

pub use field::{field_make, same_field, Field, FieldDescriptor, FqElem, MAX_TABLE_ORDER};
pub(crate) use field::is_prime_u64;
pub use poly::Poly;
pub(crate) use poly::{add_assign_slice, mul_slices};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u32),
    #[error("field modulus is reducible")]
    ReducibleModulus,
    #[error("modulus degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("F_{{{p}^{m}}} exceeds the supported field order")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
}

/// Number of monic polynomials of degree `d` over F_r, or `None` on overflow.
pub fn monic_count(r: u32, d: usize) -> Option<u64> {
    (r as u64).checked_pow(d as u32)
}

/// The monic polynomial of degree `d` with enumeration index `idx`.
///
/// The index is read in base r, constant term as the least significant digit:
/// index `sum_k c_k r^k` gives `T^d + sum_k c_k T^k`, where `c_k` is the
/// packed field element.
pub fn monic_at(field: &Field, d: usize, mut idx: u64) -> Poly {
    let r = field.r() as u64;
    let mut v = Vec::with_capacity(d + 1);
    for _ in 0..d {
        v.push(field.elem((idx % r) as u32).unwrap());
        idx /= r;
    }
    v.push(FqElem::ONE);
    Poly::new(field, v)
}

/// Iterator over a contiguous index range of the monic polynomials of degree `d`.
pub struct MonicIter {
    field: Field,
    d: usize,
    next: u64,
    end: u64,
    current: Vec<u32>,
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.next >= self.end {
            return None;
        }
        let out = Poly::from_reps(&self.field, &self.current);
        self.next += 1;
        // odometer increment, constant term fastest
        let r = self.field.r();
        for digit in self.current[..self.d].iter_mut() {
            *digit += 1;
            if *digit < r {
                break;
            }
            *digit = 0;
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

/// All `r^d` monic polynomials of degree `d`, in enumeration order.
pub fn enumerate_monic(field: &Field, d: usize) -> MonicIter {
    let total = monic_count(field.r(), d).expect("enumeration size overflows u64");
    enumerate_monic_range(field, d, 0..total)
}

/// The monic polynomials of degree `d` whose enumeration index lies in `range`.
/// Disjoint ranges partition the enumeration.
pub fn enumerate_monic_range(field: &Field, d: usize, range: Range<u64>) -> MonicIter {
    let total = monic_count(field.r(), d).expect("enumeration size overflows u64");
    let end = range.end.min(total);
    let start = range.start.min(end);
    let first = monic_at(field, d, start);
    let mut current: Vec<u32> = first.coeffs().iter().map(|c| c.rep()).collect();
    current.resize(d + 1, 0);
    current[d] = 1;
    MonicIter { field: field.clone(), d, next: start, end, current }
}

/// Splits `0..total` into at most `parts` contiguous ranges.
pub fn partition(total: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = (parts.max(1) as u64).min(total.max(1));
    let chunk = total.div_ceil(parts);
    (0..parts)
        .map(|i| (i * chunk).min(total)..((i + 1) * chunk).min(total))
        .filter(|r| !r.is_empty())
        .collect()
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `T^(q^k) mod f` for k = 0..=n, computed by repeated q-th powering.
fn frobenius_orbit(f: &Poly, n: usize) -> Result<Vec<Poly>, FfError> {
    let q = f.field().r() as u128;
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = Poly::x(f.field()).rem(f)?;
    out.push(cur.clone());
    for _ in 0..n {
        cur = cur.powmod(q, f)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Rabin's irreducibility test over F_q: `f | T^(q^n) - T` and
/// `gcd(T^(q^(n/l)) - T, f) = 1` for every prime `l | n`.
pub fn is_irreducible(f: &Poly) -> Result<bool, FfError> {
    let Some(n) = f.degree() else {
        return Err(FfError::ZeroPolynomial);
    };
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let f = f.to_monic();
    let orbit = frobenius_orbit(&f, n)?;
    let x = Poly::x(f.field()).rem(&f)?;
    if orbit[n] != x {
        return Ok(false);
    }
    for l in prime_divisors(n) {
        let g = (&orbit[n / l] - &x).gcd(&f)?;
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monic irreducible polynomials of degree `d`, in enumeration order.
pub fn enumerate_monic_primes(field: &Field, d: usize) -> impl Iterator<Item = Poly> {
    enumerate_monic(field, d).filter(|f| is_irreducible(f).unwrap_or(false))
}

/// All monic primes of degree `1..=dmax`, by degree then enumeration order.
pub fn monic_primes_up_to(field: &Field, dmax: usize) -> Vec<Poly> {
    (1..=dmax).flat_map(|d| enumerate_monic_primes(field, d)).collect()
}

fn moebius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1i64;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Necklace count `(1/d) * sum_{e | d} mu(e) r^(d/e)` of monic irreducibles.
pub fn necklace_count(r: u64, d: usize) -> u64 {
    if d == 0 {
        return 0;
    }
    let total: i128 = (1..=d)
        .filter(|e| d % e == 0)
        .map(|e| moebius(e) as i128 * (r as i128).pow((d / e) as u32))
        .sum();
    (total / d as i128) as u64
}

/// Base-p digit string of an element, lowest digit first (digits > 9 use a-z).
pub fn encode_elem(field: &Field, c: FqElem) -> String {
    field
        .digits(c)
        .into_iter()
        .map(|d| std::char::from_digit(d, 36).expect("p <= 36 for digit strings"))
        .collect()
}

/// Inverse of [`encode_elem`].
pub fn decode_elem(field: &Field, s: &str) -> Option<FqElem> {
    let ds: Option<Vec<u32>> = s.chars().map(|ch| ch.to_digit(36)).collect();
    field.from_digits(&ds?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order_r2_d2() {
        let f2 = field_make(2, 1, None).unwrap();
        let all: Vec<String> = enumerate_monic(&f2, 2).map(|p| p.display("T")).collect();
        assert_eq!(all, ["T^2", "T^2 + 1", "T^2 + T", "T^2 + T + 1"]);
        assert_eq!(enumerate_monic(&f2, 0).map(|p| p.display("T")).collect::<Vec<_>>(), ["1"]);
    }

    #[test]
    fn counts() {
        let f3 = field_make(3, 1, None).unwrap();
        assert_eq!(enumerate_monic(&f3, 3).count(), 27);
        for (i, p) in enumerate_monic(&f3, 3).enumerate() {
            assert_eq!(p, monic_at(&f3, 3, i as u64));
        }
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = field_make(2, 1, None).unwrap();
        assert!(is_irreducible(&Poly::from_ints(&f2, &[1, 1, 1])).unwrap());
        assert!(!is_irreducible(&Poly::from_ints(&f2, &[1, 0, 1])).unwrap());
        assert!(matches!(is_irreducible(&Poly::zero(&f2)), Err(FfError::ZeroPolynomial)));
        let cubics: Vec<String> = enumerate_monic_primes(&f2, 3).map(|p| p.display("T")).collect();
        assert_eq!(cubics, ["T^3 + T + 1", "T^3 + T^2 + 1"]);
        assert_eq!(necklace_count(2, 3), 2);
    }

    #[test]
    fn partition_covers_range() {
        for total in [0u64, 1, 7, 64, 100] {
            for parts in 1..6 {
                let ranges = partition(total, parts);
                let n: u64 = ranges.iter().map(|r| r.end - r.start).sum();
                assert_eq!(n, total);
            }
        }
    }

    #[test]
    fn element_digit_strings() {
        let f9 = field_make(3, 2, None).unwrap();
        for c in f9.elements() {
            assert_eq!(decode_elem(&f9, &encode_elem(&f9, c)), Some(c));
        }
    }
}
