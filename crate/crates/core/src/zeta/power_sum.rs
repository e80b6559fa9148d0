//! Power sums `S_d(j) = sum_{n monic, deg n = d} n^j`.
//!
//! Two independent routes: direct enumeration (partitioned, parallel) and a
//! route through the F_r-linear polynomial `e_V(x) = prod_{b in V} (x - b)` of
//! the space V of polynomials of degree < d.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::ffpoly::{enumerate_monic_range, monic_count, partition, same_field, Field, Poly};

/// How a power sum is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PowerSumMethod {
    /// Linear-space route, exact.
    #[default]
    Fast,
    /// Direct enumeration of all `r^d` monic polynomials.
    Enumerate,
}

/// Storage consulted before computing a power sum and updated afterwards.
pub trait PowerSumCache: Send + Sync {
    fn get(&self, field: &Field, d: usize, j: u64) -> Option<Poly>;
    fn put(&self, field: &Field, d: usize, j: u64, value: &Poly);
    /// Whether a cached value should be recomputed and compared.
    fn spot_check(&self, _d: usize, _j: u64) -> bool {
        false
    }
}

/// `S_d(j)` by the default (fast) route.
pub fn power_sum(field: &Field, d: usize, j: u64) -> Poly {
    power_sum_with(field, d, j, PowerSumMethod::Fast)
}

pub fn power_sum_with(field: &Field, d: usize, j: u64, method: PowerSumMethod) -> Poly {
    match method {
        PowerSumMethod::Fast => power_sum_fast(field, d, j),
        PowerSumMethod::Enumerate => power_sum_enumerated(field, d, j),
    }
}

/// `S_d(j)` through a cache. A spot-checked entry that disagrees with a fresh
/// computation is replaced, and the fresh value returned.
pub fn power_sum_cached(field: &Field, d: usize, j: u64, cache: &dyn PowerSumCache) -> Poly {
    if let Some(v) = cache.get(field, d, j) {
        if !cache.spot_check(d, j) {
            return v;
        }
        let fresh = power_sum(field, d, j);
        if fresh != v {
            cache.put(field, d, j, &fresh);
        }
        return fresh;
    }
    let v = power_sum(field, d, j);
    cache.put(field, d, j, &v);
    v
}

/// Sums `map(n)` over the monic polynomials of degree `d`, splitting the
/// enumeration into contiguous ranges processed in parallel.
pub(crate) fn sum_over_monic<F>(field: &Field, d: usize, map: F) -> Poly
where
    F: Fn(&Poly) -> Option<Poly> + Sync,
{
    let total = monic_count(field.r(), d).expect("enumeration size overflows u64");
    let parts = partition(total, rayon::current_num_threads() * 4);
    parts
        .into_par_iter()
        .map(|range| {
            let mut acc = Vec::new();
            for n in enumerate_monic_range(field, d, range) {
                if let Some(v) = map(&n) {
                    crate::ffpoly::add_assign_slice(field, &mut acc, v.coeffs());
                }
            }
            Poly::new(field, acc)
        })
        .reduce(|| Poly::zero(field), |a, b| &a + &b)
}

/// `S_d(j)` by enumerating all monic polynomials of degree `d`.
pub fn power_sum_enumerated(field: &Field, d: usize, j: u64) -> Poly {
    sum_over_monic(field, d, |n| Some(n.pow(j)))
}

/// `C(j, k) mod p` by Lucas' theorem; `None` when some digit of k exceeds j's.
fn lucas(j: u64, k: u64, p: u64) -> Option<u64> {
    let (mut j, mut k, mut acc) = (j, k, 1u64);
    while k > 0 || j > 0 {
        let (a, b) = (j % p, k % p);
        if b > a {
            return None;
        }
        acc = acc * binom_small(a, b) % p;
        j /= p;
        k /= p;
    }
    Some(acc)
}

fn binom_small(a: u64, b: u64) -> u64 {
    (0..b).fold(1u128, |acc, i| acc * (a - i) as u128 / (i + 1) as u128) as u64
}

/// All `k` whose base-p digits are bounded by those of `j`.
fn digit_submasks(j: u64, p: u64) -> Vec<u64> {
    let mut out = vec![0u64];
    let (mut rest, mut place) = (j, 1u64);
    while rest > 0 {
        let digit = rest % p;
        let mut next = Vec::with_capacity(out.len() * (digit as usize + 1));
        for &k in &out {
            for c in 0..=digit {
                next.push(k + c * place);
            }
        }
        out = next;
        rest /= p;
        place = place.saturating_mul(p);
    }
    out.sort_unstable();
    out
}

/// Data of the space V_d of polynomials of degree < d: the q-coefficients of
/// `e_V`, and the series `1/e_V(x) = x^-R sum_t g_t x^-t` with `R = r^d`.
struct SpaceTable {
    alpha: Vec<Poly>,
    big_r: u64,
    gaps: Vec<u64>,
    g: Mutex<Vec<Poly>>,
}

impl SpaceTable {
    fn new(field: &Field, d: usize) -> Self {
        let r = field.r() as u64;
        let m = field.m();
        // e_0(x) = x; e_{i+1}(x) = e_i(x)^r - e_i(T^i)^(r-1) e_i(x)
        let mut alpha = vec![Poly::one(field)];
        for i in 0..d {
            let value = alpha.iter().enumerate().fold(Poly::zero(field), |acc, (k, a)| {
                let exp = i * r.pow(k as u32) as usize;
                &acc + &a.shift(exp)
            });
            let c = value.pow(r - 1);
            let mut next = Vec::with_capacity(alpha.len() + 1);
            next.push(-&(&c * &alpha[0]));
            for k in 1..alpha.len() {
                next.push(&alpha[k - 1].frobenius(m) - &(&c * &alpha[k]));
            }
            next.push(alpha[alpha.len() - 1].frobenius(m));
            alpha = next;
        }
        let big_r = r.pow(d as u32);
        let gaps = (0..d).map(|i| big_r - r.pow(i as u32)).collect();
        SpaceTable { alpha, big_r, gaps, g: Mutex::new(vec![Poly::one(field)]) }
    }

    /// `P_k = sum_{b in V} b^k = alpha_0 g_{k+1-R}`.
    fn power_sums(&self, field: &Field, ks: &[u64]) -> HashMap<u64, Poly> {
        let tmax = ks.iter().filter(|&&k| k + 1 >= self.big_r).map(|&k| k + 1 - self.big_r).max();
        let mut out = HashMap::new();
        let Some(tmax) = tmax else {
            for &k in ks {
                out.insert(k, Poly::zero(field));
            }
            return out;
        };
        let mut g = self.g.lock().unwrap();
        while (g.len() as u64) <= tmax {
            let t = g.len() as u64;
            let mut acc = Poly::zero(field);
            for (i, &gap) in self.gaps.iter().enumerate() {
                if gap <= t {
                    let prev = &g[(t - gap) as usize];
                    if !prev.is_zero() {
                        acc = &acc + &(&self.alpha[i] * prev);
                    }
                }
            }
            g.push(-&acc);
        }
        for &k in ks {
            let v = if k + 1 >= self.big_r { &self.alpha[0] * &g[(k + 1 - self.big_r) as usize] } else { Poly::zero(field) };
            out.insert(k, v);
        }
        out
    }
}

type TableKey = (u32, u32, Option<Vec<u32>>, usize);

fn table(field: &Field, d: usize) -> Arc<SpaceTable> {
    static TABLES: OnceLock<Mutex<HashMap<TableKey, Arc<SpaceTable>>>> = OnceLock::new();
    let key = (field.p(), field.m(), field.modulus().map(|m| m.to_vec()), d);
    let map = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = map.lock().unwrap().get(&key) {
        return t.clone();
    }
    let t = Arc::new(SpaceTable::new(field, d));
    map.lock().unwrap().entry(key).or_insert(t).clone()
}

/// `S_d(j) = sum_{k <=_p j} C(j,k) T^(d(j-k)) P_k(V_d)`, with the `P_k` read
/// off the expansion of `alpha_0 / e_V(x)`.
pub fn power_sum_fast(field: &Field, d: usize, j: u64) -> Poly {
    let r = field.r() as u64;
    if d >= 1 && (d as u32 >= u64::BITS || r.checked_pow(d as u32).is_none_or(|rd| rd - 1 > j)) {
        // P_k vanishes for k < r^d - 1
        return Poly::zero(field);
    }
    power_sum_by_table(field, d, j)
}

/// The linear-space route without the vanishing shortcut.
pub fn power_sum_by_table(field: &Field, d: usize, j: u64) -> Poly {
    let p = field.p() as u64;
    let ks = digit_submasks(j, p);
    let tbl = table(field, d);
    let sums = tbl.power_sums(field, &ks);
    let mut acc = Poly::zero(field);
    for k in ks {
        let pk = &sums[&k];
        if pk.is_zero() {
            continue;
        }
        let c = lucas(j, k, p).expect("k is a digit submask of j");
        let term = pk.scale(field.from_int(c as i64)).shift(d * (j - k) as usize);
        acc = &acc + &term;
    }
    debug_assert!(same_field(acc.field(), field));
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;

    #[test]
    fn small_values() {
        let f2 = field_make(2, 1, None).unwrap();
        assert_eq!(power_sum(&f2, 0, 7), Poly::one(&f2));
        assert_eq!(power_sum(&f2, 1, 1), Poly::one(&f2));
        assert_eq!(power_sum(&f2, 1, 3), Poly::from_ints(&f2, &[1, 1, 1]));
        assert!(power_sum(&f2, 3, 0).is_zero());
        assert!(power_sum_enumerated(&f2, 3, 0).is_zero());
    }

    #[test]
    fn lucas_and_submasks() {
        assert_eq!(lucas(5, 1, 2), Some(1));
        assert_eq!(lucas(5, 2, 2), None);
        assert_eq!(lucas(7, 3, 3), Some(2));
        assert_eq!(digit_submasks(5, 2), vec![0, 1, 4, 5]);
        assert_eq!(digit_submasks(0, 3), vec![0]);
    }

    #[test]
    fn fast_route_matches_enumeration() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = field_make(p, m, None).unwrap();
            let r = f.r() as u64;
            for d in 0..=4usize {
                if r.pow(d as u32) > 700 {
                    continue;
                }
                for j in 0..=60u64 {
                    assert_eq!(power_sum_fast(&f, d, j), power_sum_enumerated(&f, d, j), "r={r} d={d} j={j}");
                }
            }
        }
    }

    #[test]
    fn fast_route_matches_enumeration_at_larger_j() {
        let f = field_make(3, 1, None).unwrap();
        for j in [80u64, 161, 242, 200] {
            for d in 1..=4 {
                assert_eq!(power_sum_fast(&f, d, j), power_sum_enumerated(&f, d, j), "d={d} j={j}");
            }
        }
    }

    #[test]
    fn table_route_without_shortcut() {
        let f = field_make(2, 1, None).unwrap();
        for d in 1..=5 {
            for j in 0..=40u64 {
                assert_eq!(power_sum_by_table(&f, d, j), power_sum_fast(&f, d, j), "d={d} j={j}");
            }
        }
    }
}
