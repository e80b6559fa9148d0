use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::ffpoly::{enumerate_monic, monic_primes_up_to, Field, Poly};
use crate::nonarch::{bracket_infty, pow_sv, unit_pow_padic, LaurentSeries, Place, VadicElem};
use crate::zeta::{CoefficientFamily, FamilyExponent, LocalCoeff};

use super::charpoly::{frobenius_charpoly, FrobCharpoly};
use super::module::{reduce_mod, DrinfeldModuleSpec};
use super::DrinfeldError;

/// What to do with primes of bad reduction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BadPrimePolicy {
    /// Leave the Euler factor out and record the prime.
    #[default]
    Omit,
    Reject,
}

/// Euler factor at one good prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub prime: Poly,
    pub charpoly: FrobCharpoly,
}

impl LocalFactor {
    /// `c(f^k)` for `k = 0..=kmax`.
    pub fn prime_powers(&self, kmax: usize) -> Vec<Poly> {
        let field = self.prime.field();
        let mu = &self.charpoly.mu;
        let mut out = vec![Poly::one(field)];
        match &self.charpoly.a {
            None => {
                for k in 1..=kmax {
                    out.push(&out[k - 1] * mu);
                }
            }
            Some(a) => {
                for k in 1..=kmax {
                    let mut c = a * &out[k - 1];
                    if k >= 2 {
                        c = &c - &(mu * &out[k - 2]);
                    }
                    out.push(c);
                }
            }
        }
        out
    }
}

/// Dirichlet coefficients `c(n)` for monic `n` with `deg n <= D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCoefficients {
    pub field: Field,
    pub degree_bound: usize,
    pub c: BTreeMap<Poly, Poly>,
    pub factors: Vec<LocalFactor>,
    /// Bad primes whose Euler factors were omitted.
    pub skipped: Vec<Poly>,
}

impl DirichletCoefficients {
    pub fn get(&self, n: &Poly) -> Option<&Poly> {
        self.c.get(n)
    }
}

/// Frobenius data at every prime of degree `<= dmax`, in prime order.
pub fn local_factors(module: &DrinfeldModuleSpec, dmax: usize, policy: BadPrimePolicy) -> Result<(Vec<LocalFactor>, Vec<Poly>), DrinfeldError> {
    if module.ring().modulus().is_some() {
        return Err(DrinfeldError::InvalidModule("L-series needs a module over A".into()));
    }
    let primes = monic_primes_up_to(module.field(), dmax);
    let results: Vec<Result<Option<LocalFactor>, DrinfeldError>> = primes
        .par_iter()
        .map(|f| match reduce_mod(module, f) {
            Ok(red) => Ok(Some(LocalFactor { prime: f.clone(), charpoly: frobenius_charpoly(&red)? })),
            Err(DrinfeldError::BadReduction { .. }) if policy == BadPrimePolicy::Omit => Ok(None),
            Err(DrinfeldError::BadReduction { prime }) => Err(DrinfeldError::BadPrimeUnhandled { prime }),
            Err(e) => Err(e),
        })
        .collect();
    let mut factors = Vec::new();
    let mut skipped = Vec::new();
    for (f, res) in primes.into_iter().zip(results) {
        match res? {
            Some(lf) => factors.push(lf),
            None => skipped.push(f),
        }
    }
    Ok((factors, skipped))
}

/// `c(n)` for `deg n <= dmax`, by multiplicativity and the local recursions.
pub fn lseries_coeffs(module: &DrinfeldModuleSpec, dmax: usize, policy: BadPrimePolicy) -> Result<DirichletCoefficients, DrinfeldError> {
    let (factors, skipped) = local_factors(module, dmax, policy)?;
    let field = module.field().clone();
    let mut c = BTreeMap::new();
    c.insert(Poly::one(&field), Poly::one(&field));
    for lf in &factors {
        let df = lf.prime.degree().unwrap();
        let powers = lf.prime_powers(dmax / df);
        let mut fk = vec![Poly::one(&field)];
        for k in 1..powers.len() {
            fk.push(&fk[k - 1] * &lf.prime);
        }
        let mut next = BTreeMap::new();
        for (n, cn) in &c {
            let dn = n.degree().unwrap();
            for k in 1..powers.len() {
                if dn + k * df > dmax {
                    break;
                }
                next.insert(n * &fk[k], cn * &powers[k]);
            }
        }
        c.extend(next);
    }
    // monic n divisible by a skipped prime have c(n) = 0
    for d in 0..=dmax {
        for n in enumerate_monic(&field, d) {
            c.entry(n).or_insert_with(|| Poly::zero(&field));
        }
    }
    Ok(DirichletCoefficients { field, degree_bound: dmax, c, factors, skipped })
}

type Series = BTreeMap<Poly, Poly>;

fn convolve(a: &Series, b: &Series, dmax: usize) -> Series {
    let mut out: Series = BTreeMap::new();
    for (n, x) in a {
        let dn = n.degree().unwrap();
        for (m, y) in b {
            if dn + m.degree().unwrap() > dmax {
                continue;
            }
            let key = n * m;
            let v = x * y;
            let slot = out.entry(key).or_insert_with(|| Poly::zero(n.field()));
            *slot = &*slot + &v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Independent oracle: each Euler factor `(1 - a f^-s + mu f^-2s)^-1` is
/// expanded as a truncated geometric series of Dirichlet series, and the
/// factors are multiplied by Dirichlet convolution.
pub fn euler_product_by_convolution(field: &Field, factors: &[LocalFactor], dmax: usize) -> Series {
    let one = || BTreeMap::from([(Poly::one(field), Poly::one(field))]);
    let mut total = one();
    for lf in factors {
        let f = &lf.prime;
        let mut x: Series = BTreeMap::new();
        match &lf.charpoly.a {
            None => {
                x.insert(f.clone(), lf.charpoly.mu.clone());
            }
            Some(a) => {
                x.insert(f.clone(), a.clone());
                x.insert(f * f, -&lf.charpoly.mu);
            }
        }
        x.retain(|n, v| !v.is_zero() && n.degree().unwrap() <= dmax);
        let mut geo = one();
        let mut term = one();
        for _ in 0..dmax / f.degree().unwrap() {
            term = convolve(&term, &x, dmax);
            for (n, v) in &term {
                let slot = geo.entry(n.clone()).or_insert_with(|| Poly::zero(field));
                *slot = &*slot + v;
            }
        }
        geo.retain(|_, v| !v.is_zero());
        total = convolve(&total, &geo, dmax);
    }
    total
}

fn reversal(n: &Poly) -> Poly {
    let mut c = n.coeffs().to_vec();
    c.reverse();
    Poly::new(n.field(), c)
}

/// `sum_{deg n = d} c(n) <n>^-y` at infinity, or `sum_{deg n = d, f does not divide n} c(n) n^-s`
/// at `v = (f)`, for `d <= dmax`.
pub fn lseries_family(
    coeffs: &DirichletCoefficients,
    exponent: &FamilyExponent,
    place: &Place,
    dmax: usize,
    m: usize,
) -> Result<CoefficientFamily, DrinfeldError> {
    if dmax > coeffs.degree_bound {
        return Err(DrinfeldError::InvalidModule(format!("coefficients known to degree {} < {dmax}", coeffs.degree_bound)));
    }
    let field = &coeffs.field;
    let by_degree = |d: usize| coeffs.c.iter().filter(move |(n, cn)| n.degree() == Some(d) && !cn.is_zero());
    let mut out = Vec::with_capacity(dmax + 1);
    let exact;
    match (exponent, place) {
        (FamilyExponent::Infinity(y), Place::Infinity) => {
            let e = y.as_integer().filter(|&n| n <= 0).map(|n| n.unsigned_abs());
            exact = e.is_some();
            let neg = y.neg();
            for d in 0..=dmax {
                let prec = if exact { None } else { Some(m as i64) };
                let mut acc = LaurentSeries::zero(field, Place::Infinity, prec);
                for (n, cn) in by_degree(d) {
                    let cs = LaurentSeries::from_poly_at_infinity(cn, None);
                    let u = match e {
                        Some(e) => LaurentSeries::new(field, Place::Infinity, 0, reversal(n).pow(e).into_coeffs(), None),
                        None => {
                            let extra = m as i64 + cn.degree().unwrap() as i64;
                            let b = bracket_infty(n, Some(extra))?;
                            unit_pow_padic(&b, &neg, extra)?
                        }
                    };
                    acc = acc.add(&cs.mul(&u));
                }
                out.push(LocalCoeff::Infinity(acc));
            }
        }
        (FamilyExponent::Finite(s), Place::Finite(f)) => {
            let e = s.as_integer().filter(|&n| n <= 0).map(|n| n.unsigned_abs());
            exact = e.is_some();
            let neg = s.neg();
            for d in 0..=dmax {
                let mut acc = Poly::zero(field);
                for (n, cn) in by_degree(d) {
                    if n.rem(f)?.is_zero() {
                        continue;
                    }
                    let p = match e {
                        Some(e) => n.pow(e),
                        None => pow_sv(n, &neg, f, m)?.rep().clone(),
                    };
                    acc = &acc + &(cn * &p);
                }
                out.push(LocalCoeff::Finite(VadicElem::new(acc, f, (!exact).then_some(m))?));
            }
        }
        _ => return Err(DrinfeldError::PlaceMismatch),
    }
    Ok(CoefficientFamily { place: place.clone(), exponent: exponent.clone(), coeffs: out, precision: m, dmax, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;
    use crate::nonarch::{PadicExponent, SvPoint};
    use crate::zeta::zeta_family_infty;

    #[test]
    fn carlitz_coefficients_are_n() {
        for p in [2, 3] {
            let field = field_make(p, 1, None).unwrap();
            let l = lseries_coeffs(&DrinfeldModuleSpec::carlitz(&field), 4, BadPrimePolicy::Omit).unwrap();
            assert!(l.skipped.is_empty());
            for (n, c) in &l.c {
                assert_eq!(n, c);
            }
            assert_eq!(l.c.len() as u64, (0..=4).map(|d| (p as u64).pow(d)).sum::<u64>());
        }
    }

    #[test]
    fn rank2_recursion_matches_convolution() {
        let f2 = field_make(2, 1, None).unwrap();
        let m = DrinfeldModuleSpec::rank2(&f2, Poly::one(&f2), Poly::one(&f2)).unwrap();
        let l = lseries_coeffs(&m, 5, BadPrimePolicy::Omit).unwrap();
        let oracle = euler_product_by_convolution(&f2, &l.factors, 5);
        let nonzero: BTreeMap<Poly, Poly> = l.c.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k.clone(), v.clone())).collect();
        assert_eq!(nonzero, oracle);
        for lf in &l.factors {
            assert_eq!(l.get(&lf.prime), lf.charpoly.a.as_ref());
        }
    }

    #[test]
    fn bad_primes() {
        let f2 = field_make(2, 1, None).unwrap();
        let t = Poly::x(&f2);
        let m = DrinfeldModuleSpec::rank2(&f2, Poly::one(&f2), t.clone()).unwrap();
        let l = lseries_coeffs(&m, 2, BadPrimePolicy::Omit).unwrap();
        assert_eq!(l.skipped, vec![t.clone()]);
        assert!(l.get(&t).unwrap().is_zero());
        assert!(matches!(lseries_coeffs(&m, 2, BadPrimePolicy::Reject), Err(DrinfeldError::BadPrimeUnhandled { .. })));
    }

    #[test]
    fn carlitz_family_is_shifted_zeta() {
        let f2 = field_make(2, 1, None).unwrap();
        let l = lseries_coeffs(&DrinfeldModuleSpec::carlitz(&f2), 4, BadPrimePolicy::Omit).unwrap();
        for j in [0i64, 1, 3, 6] {
            let y = PadicExponent::embed(2, -j, 8).unwrap();
            let fam = lseries_family(&l, &FamilyExponent::Infinity(y), &Place::Infinity, 4, 32).unwrap();
            let z = zeta_family_infty(&f2, &PadicExponent::embed(2, -(j + 1), 8).unwrap(), 4, 32).unwrap();
            for d in 0..=4 {
                let lhs = fam.coeffs[d].as_series().unwrap();
                let rhs = z.coeffs[d].as_series().unwrap().shift(-(d as i64));
                assert_eq!(lhs, &rhs, "j = {j}, d = {d}");
            }
        }
        let y0 = PadicExponent::embed(2, 0, 8).unwrap();
        let fam = lseries_family(&l, &FamilyExponent::Infinity(y0), &Place::Infinity, 1, 32).unwrap();
        assert_eq!(fam.coeffs[1].as_series().unwrap().to_poly_at_infinity(), Some(Poly::one(&f2)));
    }

    #[test]
    fn truncated_and_vadic_routes() {
        let f3 = field_make(3, 1, None).unwrap();
        let l = lseries_coeffs(&DrinfeldModuleSpec::carlitz(&f3), 3, BadPrimePolicy::Omit).unwrap();
        let y = PadicExponent::embed(3, -4, 5).unwrap();
        let exact = lseries_family(&l, &FamilyExponent::Infinity(y.clone()), &Place::Infinity, 3, 30).unwrap();
        let opaque = PadicExponent::from_digits(3, y.digits().to_vec()).unwrap();
        let trunc = lseries_family(&l, &FamilyExponent::Infinity(opaque), &Place::Infinity, 3, 30).unwrap();
        for d in 0..=3 {
            assert_eq!(exact.coeffs[d].as_series().unwrap().truncate(30), *trunc.coeffs[d].as_series().unwrap());
        }
        let t = Poly::x(&f3);
        let s = SvPoint::from_integer(-2, 3, 1, 3, 4).unwrap();
        let fam = lseries_family(&l, &FamilyExponent::Finite(s), &Place::Finite(t.clone()), 2, 10).unwrap();
        assert!(fam.exact);
        // d = 1: sum over n = T + 1, T + 2 of n^3
        let want = &Poly::from_ints(&f3, &[1, 1]).pow(3) + &Poly::from_ints(&f3, &[2, 1]).pow(3);
        assert_eq!(fam.coeffs[1].as_vadic().unwrap().rep(), &want);
    }
}
