use rayon::prelude::*;

use crate::ffpoly::{enumerate_monic_range, monic_count, partition, Field, Poly};
use crate::nonarch::{LaurentSeries, PadicExponent, Place};

use super::family::zeta_family_infty;
use super::power_sum::sum_over_monic;
use super::special::log_bound;
use super::{power_sum, ZetaError};

/// Both sides of an identity at one coefficient index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRow<V> {
    pub d: usize,
    pub lhs: V,
    pub rhs: V,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport<V> {
    pub rows: Vec<IdentityRow<V>>,
}

impl<V: PartialEq> IdentityReport<V> {
    pub(crate) fn from_sides(lhs: Vec<V>, rhs: Vec<V>) -> Self {
        let rows = lhs
            .into_iter()
            .zip(rhs)
            .enumerate()
            .map(|(d, (lhs, rhs))| {
                let holds = lhs == rhs;
                IdentityRow { d, lhs, rhs, holds }
            })
            .collect();
        IdentityReport { rows }
    }

    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }

    /// Indices where the identity fails.
    pub fn failures(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| !r.holds).map(|r| r.d).collect()
    }
}

fn pi_series(field: &Field, p: &Poly, prec: Option<i64>) -> LaurentSeries {
    LaurentSeries::new(field, Place::Infinity, 0, p.coeffs().to_vec(), prec)
}

/// Digits of p needed so that `p^N >= max(m, 2)`.
fn digits_for(p: u32, m: usize) -> usize {
    let mut n = 1;
    while (p as u128).pow(n as u32) < m.max(2) as u128 {
        n += 1;
    }
    n
}

/// Checks `c_d(-j) = S_d(j) pi^(d j)` modulo `pi^m` for `d <= dmax`.
pub fn interp_consistency(field: &Field, j: u64, dmax: usize, m: usize) -> IdentityReport<LaurentSeries> {
    let y = PadicExponent::embed(field.p(), -(j as i64), digits_for(field.p(), m)).expect("valid exponent");
    let fam = zeta_family_infty(field, &y, dmax, m).expect("integer exponents are exact");
    let lhs = fam.coeffs.iter().map(|c| c.as_series().unwrap().truncate(m as i64)).collect();
    let rhs = (0..=dmax)
        .map(|d| {
            let s = power_sum(field, d, j);
            LaurentSeries::from_poly_at_infinity(&s, None).shift((d as u64 * j) as i64).truncate(m as i64)
        })
        .collect();
    IdentityReport::from_sides(lhs, rhs)
}

/// Checks, exactly in A, that the coprime-to-f power sums are the
/// coefficients of `(1 - x^-deg f f^j) z(x, -j)` for `d <= dmax`.
pub fn euler_removed_identity(field: &Field, j: u64, f: &Poly, dmax: usize) -> IdentityReport<Poly> {
    euler_removed_batch(field, &[j], std::slice::from_ref(f), |_, _| dmax).pop().unwrap().2
}

/// [`euler_removed_identity`] for many `(j, f)` at once. Each monic `n` is
/// visited once per degree, its powers built incrementally and added to the
/// coprime sums of every prime it avoids.
pub fn euler_removed_batch(
    field: &Field,
    js: &[u64],
    primes: &[Poly],
    dmax: impl Fn(u64, &Poly) -> usize,
) -> Vec<(u64, Poly, IdentityReport<Poly>)> {
    let bounds: Vec<Vec<usize>> = js.iter().map(|&j| primes.iter().map(|f| dmax(j, f)).collect()).collect();
    let top = bounds.iter().flatten().copied().max().unwrap_or(0);
    // lhs[ji][fi][d]
    let mut lhs: Vec<Vec<Vec<Poly>>> = bounds.iter().map(|row| row.iter().map(|&b| vec![Poly::zero(field); b + 1]).collect()).collect();
    for d in 0..=top {
        let active: Vec<(usize, usize)> = (0..js.len())
            .flat_map(|ji| (0..primes.len()).map(move |fi| (ji, fi)))
            .filter(|&(ji, fi)| bounds[ji][fi] >= d)
            .collect();
        if active.is_empty() {
            continue;
        }
        let total = monic_count(field.r(), d).expect("enumeration size overflows u64");
        let zero = || vec![Vec::<crate::ffpoly::FqElem>::new(); active.len()];
        let sums = partition(total, rayon::current_num_threads() * 4)
            .into_par_iter()
            .map(|range| {
                let mut acc = zero();
                for n in enumerate_monic_range(field, d, range) {
                    let avoids: Vec<bool> = primes.iter().map(|f| !n.rem(f).unwrap().is_zero()).collect();
                    let mut power = Poly::one(field);
                    let mut next_j = 0u64;
                    for (slot, &(ji, fi)) in active.iter().enumerate() {
                        if !avoids[fi] {
                            continue;
                        }
                        let j = js[ji];
                        if j < next_j {
                            power = Poly::one(field);
                            next_j = 0;
                        }
                        while next_j < j {
                            power = &power * &n;
                            next_j += 1;
                        }
                        crate::ffpoly::add_assign_slice(field, &mut acc[slot], power.coeffs());
                    }
                }
                acc
            })
            .reduce(zero, |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    crate::ffpoly::add_assign_slice(field, x, &y);
                }
                a
            });
        for (slot, &(ji, fi)) in active.iter().enumerate() {
            lhs[ji][fi][d] = Poly::new(field, sums[slot].clone());
        }
    }
    let mut out = Vec::new();
    for (ji, &j) in js.iter().enumerate() {
        for (fi, f) in primes.iter().enumerate() {
            let b = bounds[ji][fi];
            let df = f.degree().expect("prime is nonzero");
            let fj = f.pow(j);
            let rhs: Vec<Poly> = (0..=b)
                .map(|d| {
                    let s = power_sum(field, d, j);
                    if d >= df {
                        &s - &(&fj * &power_sum(field, d - df, j))
                    } else {
                        s
                    }
                })
                .collect();
            out.push((j, f.clone(), IdentityReport::from_sides(lhs[ji][fi].clone(), rhs)));
        }
    }
    out
}

/// Degree-1 twist at `v = (f)`, `f = T + c`: the coprime power sums, moved to
/// `v = (T)` by `T -> T - c` and then mapped by `T -> 1/T`, against
/// `(1 - x^-1) sum_d x^-d sum_{deg n = d} <n>^j`. Both sides are exact
/// polynomials in `pi = 1/T`.
pub fn wan_deg1_twist(field: &Field, j: u64, f: &Poly) -> Result<IdentityReport<LaurentSeries>, ZetaError> {
    let r = field.r() as u64;
    if j % (r - 1) != 0 {
        return Err(ZetaError::PreconditionViolated(format!("j = {j} is not divisible by r - 1 = {}", r - 1)));
    }
    if f.degree() != Some(1) || !f.is_monic() {
        return Err(ZetaError::PreconditionViolated("the prime must be monic of degree 1".into()));
    }
    let dmax = log_bound(field.r(), j) + 2;
    let c = f.coeff(0);
    let shift = Poly::new(field, vec![field.neg(c), crate::ffpoly::FqElem::ONE]);
    let lhs = (0..=dmax)
        .map(|d| {
            let coprime = sum_over_monic(field, d, |n| (!n.rem(f).unwrap().is_zero()).then(|| n.pow(j)));
            // T -> T - c sends f to T; T -> 1/T reads the coefficients as powers of pi
            let moved = coprime.compose(&shift);
            pi_series(field, &moved, None)
        })
        .collect();
    let brackets: Vec<Poly> = (0..=dmax)
        .map(|d| {
            sum_over_monic(field, d, |n| {
                let mut rev = n.coeffs().to_vec();
                rev.reverse();
                Some(Poly::new(field, rev).pow(j))
            })
        })
        .collect();
    let rhs = (0..=dmax)
        .map(|d| {
            let v = if d == 0 { brackets[0].clone() } else { &brackets[d] - &brackets[d - 1] };
            pi_series(field, &v, None)
        })
        .collect();
    Ok(IdentityReport::from_sides(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;

    #[test]
    fn interp_small() {
        let f2 = field_make(2, 1, None).unwrap();
        let rep = interp_consistency(&f2, 1, 3, 64);
        assert!(rep.all_hold());
        assert_eq!(rep.rows[1].lhs, pi_series(&f2, &Poly::from_ints(&f2, &[0, 1]), Some(64)));
        assert!(rep.rows[2].lhs.is_zero());
        assert!(interp_consistency(&f2, 0, 2, 64).all_hold());
    }

    #[test]
    fn euler_r2_t_j1() {
        let f2 = field_make(2, 1, None).unwrap();
        let t = Poly::x(&f2);
        let rep = euler_removed_identity(&f2, 1, &t, 4);
        assert!(rep.all_hold());
        assert_eq!(rep.rows[0].lhs, Poly::one(&f2));
        assert_eq!(rep.rows[1].lhs, Poly::from_ints(&f2, &[1, 1]));
        assert_eq!(rep.rows[2].lhs, t);
        assert!(rep.rows[3].lhs.is_zero());
    }

    #[test]
    fn euler_j0_counts() {
        let f3 = field_make(3, 1, None).unwrap();
        let f = Poly::from_ints(&f3, &[1, 0, 1]);
        let rep = euler_removed_identity(&f3, 0, &f, 4);
        assert!(rep.all_hold());
        assert_eq!(rep.rows[2].rhs, Poly::from_ints(&f3, &[-1]));
    }

    #[test]
    fn twist_examples() {
        let f2 = field_make(2, 1, None).unwrap();
        let t = Poly::x(&f2);
        let rep = wan_deg1_twist(&f2, 1, &t).unwrap();
        assert!(rep.all_hold());
        assert_eq!(rep.rows[1].lhs, pi_series(&f2, &Poly::from_ints(&f2, &[1, 1]), None));
        assert_eq!(rep.rows[2].lhs, pi_series(&f2, &Poly::from_ints(&f2, &[0, 1]), None));
        assert!(wan_deg1_twist(&f2, 0, &Poly::from_ints(&f2, &[1, 1])).unwrap().all_hold());
        let f3 = field_make(3, 1, None).unwrap();
        assert!(wan_deg1_twist(&f3, 2, &Poly::from_ints(&f3, &[2, 1])).unwrap().all_hold());
        assert!(matches!(wan_deg1_twist(&f3, 3, &Poly::x(&f3)), Err(ZetaError::PreconditionViolated(_))));
    }
}
