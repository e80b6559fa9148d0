use serde::Serialize;

use crate::ffpoly::{FqElem, Poly};

use super::linalg::{coords, solve, LinearSolution};
use super::module::{phi_of, phi_powers, DrinfeldModuleSpec};
use super::skew::SkewPoly;
use super::DrinfeldError;

/// Frobenius characteristic data `(a, mu)` of a reduced module at a prime:
/// `1 - mu t` in rank 1, `1 - a t + mu t^2` in rank 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobCharpoly {
    /// The prime of the coefficient ring the module was reduced at.
    pub prime: Poly,
    pub rank: usize,
    pub a: Option<Poly>,
    pub mu: Poly,
    /// The prime of A below `prime`: the norm `N(P)` of the residue field.
    pub norm: Poly,
    /// `mu = unit * norm`, when `mu` is such a multiple.
    pub unit: Option<FqElem>,
    /// The defining identity re-checked by exact substitution.
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FrobCharpolySummary {
    pub prime: String,
    pub rank: usize,
    pub a: Option<String>,
    pub mu: String,
    pub unit: Option<u32>,
    pub verified: bool,
    pub local_rh: bool,
}

impl FrobCharpoly {
    /// `2 deg a <= deg P`; always true in rank 1.
    pub fn local_rh(&self) -> bool {
        let d = self.prime.degree().unwrap_or(0);
        self.a.as_ref().and_then(Poly::degree).is_none_or(|da| 2 * da <= d)
    }

    pub fn summary(&self) -> FrobCharpolySummary {
        FrobCharpolySummary {
            prime: self.prime.display("T"),
            rank: self.rank,
            a: self.a.as_ref().map(|a| a.display("T")),
            mu: self.mu.display("T"),
            unit: self.unit.map(FqElem::rep),
            verified: self.verified,
            local_rh: self.local_rh(),
        }
    }
}

/// Minimal polynomial over F_r of `x` in the residue field of degree `d`.
fn minimal_polynomial(module: &DrinfeldModuleSpec, x: &Poly, d: usize) -> Poly {
    let ring = module.ring();
    let field = module.field();
    let mut powers = vec![ring.reduce(Poly::one(field))];
    loop {
        let next = ring.mul(powers.last().unwrap(), x);
        let k = powers.len();
        // columns: the coordinates of x^0..x^(k-1); rows: the d coordinates
        let cols: Vec<Vec<FqElem>> = powers.iter().map(|p| coords(p, d)).collect();
        let rows: Vec<Vec<FqElem>> = (0..d).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        if let LinearSolution::Solved { x: c, .. } = solve(field, rows, coords(&next, d), k) {
            let mut v: Vec<FqElem> = c.into_iter().map(|e| field.neg(e)).collect();
            v.push(FqElem::ONE);
            return Poly::new(field, v);
        }
        powers.push(next);
    }
}

/// `N(P)`: the characteristic polynomial of `gamma(T)` acting on the residue field.
fn norm(module: &DrinfeldModuleSpec, d: usize) -> Poly {
    let m = minimal_polynomial(module, module.gamma(), d);
    let e = m.degree().unwrap();
    m.pow((d / e) as u64)
}

/// Coordinates of the tau-coefficients `0..=top` of `s`, flattened.
fn flatten(s: &SkewPoly, top: usize, d: usize) -> Vec<FqElem> {
    (0..=top).flat_map(|i| coords(&s.coeff(i), d)).collect()
}

/// Columns `cols[j]` as a row-major matrix.
fn transpose(cols: &[Vec<FqElem>]) -> Vec<Vec<FqElem>> {
    let n = cols.first().map_or(0, Vec::len);
    (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Solves for the Frobenius characteristic data of a module reduced at a
/// prime of degree d, with `Fr = tau^d`. Rank 1 solves `tau^d = phi_mu`
/// with `deg mu <= d`; rank 2 solves `Fr^2 - phi_a Fr + eps phi_N = 0` for
/// each `eps` in F_r^x, with `deg a <= d`.
pub fn frobenius_charpoly(module: &DrinfeldModuleSpec) -> Result<FrobCharpoly, DrinfeldError> {
    let prime = module
        .ring()
        .modulus()
        .cloned()
        .ok_or_else(|| DrinfeldError::InvalidModule("module must be reduced at a prime".into()))?;
    let d = prime.degree().unwrap();
    let field = module.field().clone();
    let ring = module.ring().clone();
    let n = norm(module, d);
    let fr = SkewPoly::tau_pow(&ring, d);
    let powers = phi_powers(module, d);
    let as_poly = |x: &[FqElem]| Poly::new(&field, x.to_vec());
    let unit_of = |mu: &Poly| {
        let (q, rem) = mu.divmod(&n).ok()?;
        (rem.is_zero() && q.degree() == Some(0)).then(|| q.coeff(0))
    };
    match module.rank() {
        1 => {
            let top = d;
            let cols: Vec<Vec<FqElem>> = powers.iter().map(|p| flatten(p, top, d)).collect();
            let sol = solve(&field, transpose(&cols), flatten(&fr, top, d), d + 1);
            let LinearSolution::Solved { x, nullity } = sol else {
                return Err(DrinfeldError::NoSolution { prime: prime.display("T") });
            };
            if nullity > 0 {
                return Err(DrinfeldError::AmbiguousSolution { prime: prime.display("T"), count: nullity + 1 });
            }
            let mu = as_poly(&x);
            let verified = phi_of(&mu, module) == fr;
            Ok(FrobCharpoly { unit: unit_of(&mu), prime, rank: 1, a: None, mu, norm: n, verified })
        }
        2 => {
            let top = 3 * d;
            let cols: Vec<Vec<FqElem>> = powers.iter().map(|p| flatten(&(p * &fr), top, d)).collect();
            let rows = transpose(&cols);
            let fr2 = &fr * &fr;
            let phi_n = phi_of(&n, module);
            let mut found = Vec::new();
            for eps in field.elements().filter(|e| !e.is_zero()) {
                let rhs = &fr2 + &phi_n.scale(&Poly::constant(&field, eps));
                match solve(&field, rows.clone(), flatten(&rhs, top, d), d + 1) {
                    LinearSolution::Inconsistent => {}
                    LinearSolution::Solved { x, nullity } => found.push((eps, as_poly(&x), nullity)),
                }
            }
            let count = found.iter().map(|(_, _, k)| k + 1).sum();
            match found.as_slice() {
                [] => Err(DrinfeldError::NoSolution { prime: prime.display("T") }),
                [(eps, a, 0)] => {
                    let mu = n.scale(*eps);
                    let lhs = &(&fr2 - &(&phi_of(a, module) * &fr)) + &phi_of(&mu, module);
                    let verified = lhs.is_zero();
                    Ok(FrobCharpoly { unit: Some(*eps), prime, rank: 2, a: Some(a.clone()), mu, norm: n, verified })
                }
                _ => Err(DrinfeldError::AmbiguousSolution { prime: prime.display("T"), count }),
            }
        }
        r => Err(DrinfeldError::RankUnsupported(r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinfeld::reduce_mod;
    use crate::ffpoly::{field_make, monic_primes_up_to, Field};

    fn carlitz_at(field: &Field, f: &Poly) -> FrobCharpoly {
        let c = DrinfeldModuleSpec::carlitz(field);
        frobenius_charpoly(&reduce_mod(&c, f).unwrap()).unwrap()
    }

    #[test]
    fn carlitz_hand_cases() {
        let f2 = field_make(2, 1, None).unwrap();
        let t = Poly::x(&f2);
        let fc = carlitz_at(&f2, &t);
        assert_eq!(fc.mu, t);
        assert!(fc.verified);
        let g = Poly::from_ints(&f2, &[1, 1, 1]);
        assert_eq!(carlitz_at(&f2, &g).mu, g);
        let f3 = field_make(3, 1, None).unwrap();
        let h = Poly::from_ints(&f3, &[1, 0, 1]);
        let fc = carlitz_at(&f3, &h);
        assert_eq!(fc.mu, h);
        assert_eq!(fc.unit, Some(FqElem::ONE));
    }

    #[test]
    fn carlitz_mu_is_f() {
        for p in [2, 3] {
            let field = field_make(p, 1, None).unwrap();
            for f in monic_primes_up_to(&field, 3) {
                let fc = carlitz_at(&field, &f);
                assert!(fc.verified);
                assert_eq!(fc.mu, f);
            }
        }
    }

    #[test]
    fn rank2_local_rh() {
        let f2 = field_make(2, 1, None).unwrap();
        let m = DrinfeldModuleSpec::rank2(&f2, Poly::one(&f2), Poly::one(&f2)).unwrap();
        for f in monic_primes_up_to(&f2, 3) {
            let fc = frobenius_charpoly(&reduce_mod(&m, &f).unwrap()).unwrap();
            assert!(fc.verified, "{f:?}");
            assert!(fc.local_rh());
            assert_eq!(fc.unit, Some(FqElem::ONE));
        }
        // at T: phi_T = tau + tau^2, Fr = tau, so tau^2 + tau - phi_T = 0 gives a = 1, mu = T
        let fc = frobenius_charpoly(&reduce_mod(&m, &Poly::x(&f2)).unwrap()).unwrap();
        assert_eq!(fc.a, Some(Poly::one(&f2)));
        assert_eq!(fc.mu, Poly::x(&f2));
    }

    #[test]
    fn unreduced_module_is_rejected() {
        let f2 = field_make(2, 1, None).unwrap();
        assert!(matches!(frobenius_charpoly(&DrinfeldModuleSpec::carlitz(&f2)), Err(DrinfeldError::InvalidModule(_))));
    }
}
