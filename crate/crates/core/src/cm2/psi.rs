use serde::Serialize;

use crate::drinfeld::{frobenius_charpoly, reduce_mod, CoeffRing, DrinfeldModuleSpec};
use crate::ffpoly::{monic_primes_up_to, Field, Poly};

use super::{check_f2, Cm2Error};

/// `C'_u = sqrt(theta) + tau`, the Carlitz module of `A'`, with `w = sqrt(theta)`.
pub fn carlitz_prime(field: &Field) -> Result<DrinfeldModuleSpec, Cm2Error> {
    check_f2(field)?;
    Ok(DrinfeldModuleSpec::new(&CoeffRing::polynomial(field), vec![Poly::x(field), Poly::one(field)])?)
}

/// `psi_T = theta + (theta + sqrt(theta)) tau + tau^2` over `F_2[w]`, `w = sqrt(theta)`.
pub fn psi_module(field: &Field) -> Result<DrinfeldModuleSpec, Cm2Error> {
    check_f2(field)?;
    let w2 = Poly::from_ints(field, &[0, 0, 1]);
    let mid = Poly::from_ints(field, &[0, 1, 1]);
    Ok(DrinfeldModuleSpec::new(&CoeffRing::polynomial(field), vec![w2, mid, Poly::one(field)])?)
}

/// `psi_T = C'_u C'_u` in the skew ring.
pub fn psi_is_carlitz_square(field: &Field) -> Result<bool, Cm2Error> {
    let c = carlitz_prime(field)?.phi_t_skew();
    Ok(&c * &c == psi_module(field)?.phi_t_skew())
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PsiRow {
    /// The prime `g'` of `A'`.
    pub prime: String,
    pub a: String,
    pub mu: String,
    /// `g`, the prime of A below `g'`.
    pub expected_mu: String,
    pub verified: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PsiReport {
    pub max_degree: usize,
    pub rows: Vec<PsiRow>,
}

impl PsiReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// For each prime `g'` of `A'` with `deg g' <= max_degree`, the rank-2
/// solver on psi reduced at `g'` should return `(a, mu) = (0, g)`, i.e. the
/// Euler factor `1 + g t^2 = (1 + g' t)^2`.
pub fn psi_factorization_check(field: &Field, max_degree: usize) -> Result<PsiReport, Cm2Error> {
    let psi = psi_module(field)?;
    let mut rows = Vec::new();
    for gp in monic_primes_up_to(field, max_degree) {
        let fc = frobenius_charpoly(&reduce_mod(&psi, &gp)?)?;
        // g has the coefficients of g'; over F_2 (1 + g't)^2 = 1 + g'^2 t^2
        let g = gp.clone();
        let a = fc.a.clone().unwrap_or_else(|| Poly::zero(field));
        let holds = fc.verified && a.is_zero() && fc.mu == g;
        rows.push(PsiRow {
            prime: gp.display("u"),
            a: a.display("T"),
            mu: fc.mu.display("T"),
            expected_mu: g.display("T"),
            verified: fc.verified,
            holds,
        });
    }
    Ok(PsiReport { max_degree, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinfeld::{phi_of, SkewPoly};
    use crate::ffpoly::field_make;

    #[test]
    fn psi_is_square_of_carlitz() {
        let f2 = field_make(2, 1, None).unwrap();
        assert!(psi_is_carlitz_square(&f2).unwrap());
    }

    #[test]
    fn hand_cases() {
        let f2 = field_make(2, 1, None).unwrap();
        let psi = psi_module(&f2).unwrap();
        let u = Poly::x(&f2);
        let red = reduce_mod(&psi, &u).unwrap();
        assert_eq!(red.phi_t_skew(), SkewPoly::tau_pow(red.ring(), 2));
        let fc = frobenius_charpoly(&red).unwrap();
        assert_eq!(fc.mu, Poly::x(&f2));
        assert!(fc.a.unwrap().is_zero());
        // direct substitution at g' = u^2 + u + 1: tau^4 + psi_g = 0
        let gp = Poly::from_ints(&f2, &[1, 1, 1]);
        let red = reduce_mod(&psi, &gp).unwrap();
        let lhs = &SkewPoly::tau_pow(red.ring(), 4) + &phi_of(&gp, &red);
        assert!(lhs.is_zero());
        assert!(psi_factorization_check(&f2, 3).unwrap().all_hold());
    }
}
