use num_rational::Ratio;
use serde::Serialize;

use crate::ffpoly::{Field, Poly};
use crate::newton::{zero_spectrum, CoeffValuation, NewtonError, NewtonPolygon};
use crate::zeta::sum_over_monic;

use super::{check_f2, hecke_special, lift_to_a_prime, sqrt_poly, Cm2Error};

/// One side of the parity report.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ParitySide {
    pub valuations: Vec<CoeffValuation>,
    /// Slopes as `num/den` strings, with their lengths.
    pub slopes: Vec<String>,
    pub lengths: Vec<usize>,
    /// Required parity of every slope: 1 for odd, 0 for even.
    pub expected_parity: u8,
    pub parity_holds: bool,
    /// Slopes of the wrong parity (or not integral).
    pub exceptions: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ParityReport {
    pub j: u64,
    pub dmax: usize,
    pub precision: usize,
    pub vadic: ParitySide,
    pub infinity: ParitySide,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.vadic.parity_holds && self.infinity.parity_holds
    }
}

fn side(vals: Vec<CoeffValuation>, parity: i64, name: &'static str, precision: usize) -> Result<ParitySide, Cm2Error> {
    let (slopes, lengths, exceptions) = match NewtonPolygon::new(&vals) {
        Err(NewtonError::AllCoefficientsVanish) => (Vec::new(), Vec::new(), Vec::new()),
        Err(e) => return Err(e.into()),
        Ok(np) => {
            let zs = zero_spectrum(&np);
            if np.provisional || zs.certified_count() < zs.segments.len() {
                return Err(Cm2Error::ProvisionalPolygon { side: name, precision });
            }
            let ok = |s: &Ratio<i64>| s.is_integer() && s.to_integer().rem_euclid(2) == parity;
            let bad = zs.segments.iter().filter(|s| !ok(&s.slope)).map(|s| s.slope.to_string()).collect();
            (zs.segments.iter().map(|s| s.slope.to_string()).collect(), zs.segments.iter().map(|s| s.length).collect(), bad)
        }
    };
    let parity_holds = exceptions.is_empty();
    Ok(ParitySide { valuations: vals, slopes, lengths, expected_parity: parity as u8, parity_holds, exceptions })
}

/// Coefficients `sum_{deg n = d, T does not divide n} n' n^j` in `A'`.
pub(crate) fn vadic_coefficients(field: &Field, j: u64, dmax: usize) -> Vec<Poly> {
    (0..=dmax)
        .map(|d| {
            sum_over_monic(field, d, |n| {
                (!n.coeff(0).is_zero()).then(|| &sqrt_poly(n).unwrap() * &lift_to_a_prime(&n.pow(j)))
            })
        })
        .collect()
}

/// Zero-valuation parities of `L(s)` at `s = -j`: u-adically (v' = (u), v =
/// (T)) every slope should be odd, at infinity every slope even.
pub fn parity_report(field: &Field, j: u64, dmax: usize, m: usize) -> Result<ParityReport, Cm2Error> {
    check_f2(field)?;
    let vadic_vals = vadic_coefficients(field, j, dmax)
        .iter()
        .map(|c| match c.low_order() {
            None => CoeffValuation::Zero,
            Some(k) if k >= m => CoeffValuation::AtLeast(m as i64),
            Some(k) => CoeffValuation::Finite(k as i64),
        })
        .collect();
    let infty_vals = hecke_special(field, j, dmax)?
        .iter()
        .map(|c| match c.degree() {
            None => CoeffValuation::Zero,
            Some(k) => CoeffValuation::Finite(-(k as i64)),
        })
        .collect();
    Ok(ParityReport {
        j,
        dmax,
        precision: m,
        vadic: side(vadic_vals, 1, "v-adic", m)?,
        infinity: side(infty_vals, 0, "infinity", m)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;

    #[test]
    fn small_j() {
        let f2 = field_make(2, 1, None).unwrap();
        let rep = parity_report(&f2, 0, 1, 64).unwrap();
        assert_eq!(rep.infinity.valuations, vec![CoeffValuation::Finite(0), CoeffValuation::Finite(0)]);
        assert_eq!(rep.infinity.slopes, vec!["0".to_string()]);
        for j in 0..6 {
            let rep = parity_report(&f2, j, 6, 64).unwrap();
            assert!(rep.infinity.parity_holds, "j = {j}: {rep:?}");
            // c_0 = 1 and c_1 = (u + 1)^(2j + 1) are both units: one zero of valuation 0
            assert_eq!(rep.vadic.exceptions, vec!["0".to_string()], "j = {j}");
            assert!(!rep.passed());
        }
    }

    #[test]
    fn removed_factor_has_slope_2j_plus_1() {
        let f2 = field_make(2, 1, None).unwrap();
        let rep = parity_report(&f2, 2, 8, 64).unwrap();
        assert!(rep.vadic.slopes.contains(&"5".to_string()), "{rep:?}");
    }

    #[test]
    fn low_precision_is_provisional() {
        let f2 = field_make(2, 1, None).unwrap();
        assert!(matches!(parity_report(&f2, 5, 8, 2), Err(Cm2Error::ProvisionalPolygon { .. })));
    }
}
