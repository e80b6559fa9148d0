//! The acceptance battery behind `fzeta verify`.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cm2::{hecke_identity, parity_report, psi_factorization_check, psi_is_carlitz_square};
use crate::drinfeld::{
    euler_product_by_convolution, frobenius_charpoly, lseries_coeffs, reduce_mod, BadPrimePolicy, DrinfeldModuleSpec,
};
use crate::ffpoly::{enumerate_monic, field_make, monic_count, monic_primes_up_to, Field, Poly};
use crate::newton::{zero_spectrum, NewtonPolygon};
use crate::nonarch::{PadicExponent, SvPoint};
use crate::zeta::{
    euler_removed_batch, log_bound, power_sum, power_sum_cached, power_sum_enumerated, power_sum_with, wan_deg1_twist, zeta_family_infty,
    zeta_family_vadic, CoefficientFamily, PowerSumCache, PowerSumMethod,
};

/// Seed for every pseudo-random choice in the battery.
pub const SEED: u64 = 0x5eed_2024;

/// Digits of the pseudo-random p-adic exponents.
pub const EXPONENT_DIGITS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    Quick,
    Full,
}

/// Outcome of one criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionRecord {
    pub id: u8,
    pub name: &'static str,
    pub parameters: Value,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub runtime: Duration,
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "special values are polynomials"),
    (2, "simple zeros at infinity"),
    (3, "Euler factor removal"),
    (4, "degree-1 v-adic twist"),
    (5, "simple zeros at v = (T)"),
    (6, "Carlitz Frobenius and L(C, s)"),
    (7, "rank-2 local Riemann hypothesis"),
    (8, "CM example over F_2[sqrt T]"),
    (9, "oracle equivalences"),
    (10, "determinism"),
];

fn fields(list: &[(u32, u32)]) -> Vec<Field> {
    list.iter().map(|&(p, m)| field_make(p, m, None).expect("valid field")).collect()
}

/// Criterion 1 enumerates degrees with at most this many monic polynomials.
const ENUMERATE_LIMIT: u64 = 1 << 12;

fn is_quick(grid: Grid) -> bool {
    grid == Grid::Quick
}

type Outcome = (Value, bool, String);

fn c1(grid: Grid, cache: Option<&dyn PowerSumCache>) -> Outcome {
    let (rs, jmax): (&[(u32, u32)], u64) = if is_quick(grid) { (&[(2, 1), (3, 1)], 40) } else { (&[(2, 1), (3, 1), (2, 2), (5, 1)], 200) };
    let mut bad = Vec::new();
    let mut checked = 0u64;
    let mut enumerated = 0u64;
    for field in fields(rs) {
        for j in 0..=jmax {
            let b = log_bound(field.r(), j) + 1;
            for d in b + 1..=b + 3 {
                let s = match (cache, monic_count(field.r(), d)) {
                    (_, Some(n)) if n <= ENUMERATE_LIMIT => {
                        enumerated += 1;
                        power_sum_enumerated(&field, d, j)
                    }
                    (Some(c), _) => power_sum_cached(&field, d, j, c),
                    (None, _) => power_sum(&field, d, j),
                };
                checked += 1;
                if !s.is_zero() {
                    bad.push(format!("r={} j={j} d={d}", field.r()));
                }
            }
        }
    }
    let params = json!({"r": rs.iter().map(|&(p, m)| p.pow(m)).collect::<Vec<_>>(), "jMax": jmax, "window": 3});
    let detail = if bad.is_empty() { format!("{checked} coefficients vanish, {enumerated} by enumeration") } else { format!("nonzero: {}", bad.join(", ")) };
    (params, bad.is_empty(), detail)
}

/// `-j` for `j <= jmax`, then `count` seeded random exponents with `EXPONENT_DIGITS` digits.
fn sample_exponents(p: u32, jmax: i64, count: usize, scale: i64) -> Vec<PadicExponent> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ p as u64);
    let mut out: Vec<PadicExponent> = (0..=jmax).map(|j| PadicExponent::embed(p, -j * scale, EXPONENT_DIGITS).unwrap()).collect();
    for _ in 0..count {
        let digits = (0..EXPONENT_DIGITS).map(|_| rng.gen_range(0..p)).collect();
        out.push(PadicExponent::from_digits(p, digits).unwrap().scale(scale));
    }
    out
}

/// Checks a family's polygon: non-provisional, every certified segment of length 1.
fn simple_zeros(fam: &CoefficientFamily) -> Result<(usize, usize), String> {
    let np = NewtonPolygon::new(&fam.valuations()).map_err(|e| e.to_string())?;
    let zs = zero_spectrum(&np);
    if np.provisional {
        return Err("provisional polygon".into());
    }
    if let Some(s) = zs.segments.iter().find(|s| s.certified && s.length != 1) {
        return Err(format!("segment {}..{} has length {}", s.start, s.end, s.length));
    }
    Ok((zs.certified_count(), zs.segments.len()))
}

fn family_battery(grid: Grid, finite: bool) -> Outcome {
    let (jmax, count) = if is_quick(grid) { (8, 4) } else { (30, 20) };
    let (dmax, m) = (8usize, 64usize);
    let mut failures = Vec::new();
    let (mut certified, mut total, mut families) = (0, 0, 0);
    for field in fields(&[(2, 1), (3, 1)]) {
        let r = field.r();
        let t = Poly::x(&field);
        let scale = if finite { r as i64 - 1 } else { 1 };
        for y in sample_exponents(field.p(), jmax, count, scale) {
            let fam = if finite {
                let s = match y.as_integer() {
                    Some(n) => SvPoint::from_integer(n, r, 1, field.p(), EXPONENT_DIGITS).unwrap(),
                    None => SvPoint::new(0, r as u64 - 1, y.clone()),
                };
                zeta_family_vadic(&field, &s, &t, dmax, m)
            } else {
                zeta_family_infty(&field, &y, dmax, m)
            };
            families += 1;
            match fam.map_err(|e| e.to_string()).and_then(|f| simple_zeros(&f)) {
                Ok((c, n)) => {
                    certified += c;
                    total += n;
                }
                Err(e) => failures.push(format!("r={r} y={:?}: {e}", y.digits())),
            }
        }
    }
    let params = json!({"r": [2, 3], "jMax": jmax, "random": count, "digits": EXPONENT_DIGITS, "dmax": dmax, "M": m, "seed": SEED,
        "place": if finite { "T" } else { "infinity" }});
    let detail = if failures.is_empty() {
        format!("{families} families; {certified}/{total} segments certified, all of length 1")
    } else {
        failures.join("; ")
    };
    (params, failures.is_empty(), detail)
}

fn c3(grid: Grid) -> Outcome {
    let (jmax, fdeg) = if is_quick(grid) { (10u64, 2usize) } else { (50, 3) };
    let mut failures = Vec::new();
    let mut checked = 0;
    for field in fields(&[(2, 1), (3, 1)]) {
        let js: Vec<u64> = (0..=jmax).collect();
        let primes = monic_primes_up_to(&field, fdeg);
        let r = field.r();
        let rows = euler_removed_batch(&field, &js, &primes, |j, f| log_bound(r, j) + f.degree().unwrap() + 1);
        for (j, f, rep) in rows {
            checked += rep.rows.len();
            if !rep.all_hold() {
                failures.push(format!("r={r} j={j} f={} d={:?}", f.display("T"), rep.failures()));
            }
        }
    }
    let params = json!({"r": [2, 3], "jMax": jmax, "primeDegreeMax": fdeg, "dmax": "log_bound(j) + deg f + 1"});
    let detail = if failures.is_empty() { format!("{checked} coefficients agree") } else { failures.join("; ") };
    (params, failures.is_empty(), detail)
}

fn c4(grid: Grid) -> Outcome {
    let (list, jmax): (&[(u32, u32)], u64) = if is_quick(grid) { (&[(2, 1), (3, 1)], 20) } else { (&[(2, 1), (3, 1), (2, 2)], 100) };
    let mut failures = Vec::new();
    let mut checked = 0;
    for field in fields(list) {
        let r = field.r() as u64;
        for f in monic_primes_up_to(&field, 1) {
            for j in (0..=jmax).filter(|j| j % (r - 1) == 0) {
                match wan_deg1_twist(&field, j, &f) {
                    Ok(rep) if rep.all_hold() => checked += 1,
                    Ok(rep) => failures.push(format!("r={r} j={j} f={}: d={:?}", f.display("T"), rep.failures())),
                    Err(e) => failures.push(e.to_string()),
                }
            }
        }
    }
    let params = json!({"r": list.iter().map(|&(p, m)| p.pow(m)).collect::<Vec<_>>(), "jMax": jmax, "primes": "all of degree 1"});
    let detail = if failures.is_empty() { format!("{checked} (j, f) pairs agree") } else { failures.join("; ") };
    (params, failures.is_empty(), detail)
}

fn c6(grid: Grid) -> Outcome {
    let (fdeg, dmax) = if is_quick(grid) { (3, 4) } else { (5, 6) };
    let mut failures = Vec::new();
    let mut units = Vec::new();
    for field in fields(&[(2, 1), (3, 1)]) {
        let c = DrinfeldModuleSpec::carlitz(&field);
        let mut eps_by_degree: Vec<Option<u32>> = vec![None; fdeg + 1];
        for f in monic_primes_up_to(&field, fdeg) {
            let d = f.degree().unwrap();
            match reduce_mod(&c, &f).and_then(|red| frobenius_charpoly(&red)) {
                Ok(fc) => {
                    let eps = fc.unit.map(|u| u.rep());
                    if !fc.verified || eps.is_none() {
                        failures.push(format!("r={} f={}: mu={}", field.r(), f.display("T"), fc.mu.display("T")));
                    } else if eps_by_degree[d].is_some_and(|e| Some(e) != eps) {
                        failures.push(format!("r={} deg {d}: unit not constant", field.r()));
                    } else {
                        eps_by_degree[d] = eps;
                    }
                }
                Err(e) => failures.push(e.to_string()),
            }
        }
        units.push(json!({"r": field.r(), "unitByDegree": eps_by_degree[1..].to_vec()}));
        match lseries_coeffs(&c, dmax, BadPrimePolicy::Reject) {
            Ok(l) => {
                let bad = enumerate_upto(&field, dmax).filter(|n| l.get(n) != Some(n)).count();
                if bad > 0 {
                    failures.push(format!("r={}: {bad} coefficients differ from n", field.r()));
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    let params = json!({"r": [2, 3], "primeDegreeMax": fdeg, "D": dmax});
    let detail = if failures.is_empty() { format!("mu = eps f with eps: {}", Value::Array(units)) } else { failures.join("; ") };
    (params, failures.is_empty(), detail)
}

fn enumerate_upto(field: &Field, dmax: usize) -> impl Iterator<Item = Poly> + '_ {
    (0..=dmax).flat_map(move |d| enumerate_monic(field, d))
}

/// The two rank-2 modules of the battery: `theta + tau + tau^2` and `theta + theta tau + tau^2`.
pub fn rank2_modules(field: &Field) -> Vec<DrinfeldModuleSpec> {
    vec![
        DrinfeldModuleSpec::rank2(field, Poly::one(field), Poly::one(field)).unwrap(),
        DrinfeldModuleSpec::rank2(field, Poly::x(field), Poly::one(field)).unwrap(),
    ]
}

fn c7(grid: Grid) -> Outcome {
    let fdeg = if is_quick(grid) { 3 } else { 4 };
    let mut failures = Vec::new();
    let mut checked = 0;
    for field in fields(&[(2, 1), (3, 1)]) {
        for m in rank2_modules(&field) {
            for f in monic_primes_up_to(&field, fdeg) {
                match reduce_mod(&m, &f).and_then(|red| frobenius_charpoly(&red)) {
                    Ok(fc) if fc.verified && fc.local_rh() => checked += 1,
                    Ok(fc) => failures.push(format!("{} at {}: {:?}", m.describe(), f.display("T"), fc.summary())),
                    Err(e) => failures.push(format!("{} at {}: {e}", m.describe(), f.display("T"))),
                }
            }
        }
    }
    let params = json!({"r": [2, 3], "modules": ["theta + tau + tau^2", "theta + theta tau + tau^2"], "primeDegreeMax": fdeg});
    let detail = if failures.is_empty() { format!("{checked} charpolys verified with 2 deg a <= deg f") } else { failures.join("; ") };
    (params, failures.is_empty(), detail)
}

fn c8(grid: Grid) -> Outcome {
    let (hj, hd, gdeg, pj) = if is_quick(grid) { (10u64, 6usize, 3usize, 5u64) } else { (50, 8, 4, 20) };
    let (pd, m) = (8usize, 64usize);
    let f2 = field_make(2, 1, None).unwrap();
    let mut failures = Vec::new();
    let a = psi_is_carlitz_square(&f2).unwrap_or(false);
    if !a {
        failures.push("(a) psi_T != C'_u C'_u".to_string());
    }
    for j in 0..=hj {
        match hecke_identity(&f2, j, hd) {
            Ok(rep) if rep.all_hold() => {}
            Ok(rep) => failures.push(format!("(b) j={j} d={:?}", rep.failures())),
            Err(e) => failures.push(format!("(b) {e}")),
        }
    }
    match psi_factorization_check(&f2, gdeg) {
        Ok(rep) => {
            for row in rep.rows.iter().filter(|r| !r.holds) {
                failures.push(format!("(c) g'={}: a={} mu={}", row.prime, row.a, row.mu));
            }
        }
        Err(e) => failures.push(format!("(c) {e}")),
    }
    let mut vadic_exceptions = Vec::new();
    for j in 0..=pj {
        match parity_report(&f2, j, pd, m) {
            Ok(rep) => {
                if !rep.infinity.parity_holds {
                    failures.push(format!("(d) j={j} infinity slopes {:?}", rep.infinity.exceptions));
                }
                if !rep.vadic.parity_holds {
                    vadic_exceptions.push(format!("j={j}: {}", rep.vadic.exceptions.join(",")));
                }
            }
            Err(e) => failures.push(format!("(d) j={j}: {e}")),
        }
    }
    if !vadic_exceptions.is_empty() {
        failures.push(format!("(d) even v-adic slopes: {}", vadic_exceptions.join("; ")));
    }
    let params = json!({"heckeJMax": hj, "heckeDmax": hd, "psiPrimeDegreeMax": gdeg, "parityJMax": pj, "parityDmax": pd, "M": m});
    let detail = if failures.is_empty() { "(a)-(d) hold".to_string() } else { failures.join("; ") };
    (params, failures.is_empty(), detail)
}

/// Single-threaded oracle: a plain loop over the monic polynomials.
fn power_sum_sequential(field: &Field, d: usize, j: u64) -> Poly {
    let mut acc = Poly::zero(field);
    for n in enumerate_monic(field, d) {
        acc = &acc + &n.pow(j);
    }
    acc
}

fn c9(grid: Grid) -> Outcome {
    let (samples, dmax_euler) = if is_quick(grid) { (15, 4) } else { (50, 5) };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let list = fields(&[(2, 1), (3, 1), (2, 2), (5, 1)]);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let field = &list[rng.gen_range(0..list.len())];
        let dmax = match field.r() {
            2 => 8,
            3 => 5,
            _ => 4,
        };
        let d = rng.gen_range(0..=dmax);
        let j = rng.gen_range(0..=200u64);
        let par = power_sum_with(field, d, j, PowerSumMethod::Enumerate);
        let seq = power_sum_sequential(field, d, j);
        let fast = power_sum_with(field, d, j, PowerSumMethod::Fast);
        if par != seq || fast != seq {
            failures.push(format!("r={} d={d} j={j}", field.r()));
        }
    }
    let mut euler_checked = 0;
    for field in fields(&[(2, 1), (3, 1)]) {
        let mut modules = rank2_modules(&field);
        modules.push(DrinfeldModuleSpec::carlitz(&field));
        for m in modules {
            for big_d in 1..=dmax_euler {
                match lseries_coeffs(&m, big_d, BadPrimePolicy::Omit) {
                    Ok(l) => {
                        let oracle = euler_product_by_convolution(&field, &l.factors, big_d);
                        let recursion: std::collections::BTreeMap<Poly, Poly> =
                            l.c.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k.clone(), v.clone())).collect();
                        if recursion != oracle {
                            failures.push(format!("Euler product {} D={big_d}", m.describe()));
                        }
                        euler_checked += 1;
                    }
                    Err(e) => failures.push(e.to_string()),
                }
            }
        }
    }
    let params = json!({"powerSumSamples": samples, "seed": SEED, "eulerDMax": dmax_euler});
    let detail = if failures.is_empty() {
        format!("{samples} power sums agree across three routes; {euler_checked} Euler products agree")
    } else {
        failures.join("; ")
    };
    (params, failures.is_empty(), detail)
}

/// Runs one criterion. Criterion 10 compares two renderings of the fixed
/// command reports produced by `render_fixed`.
pub fn run_criterion(id: u8, grid: Grid, cache: Option<&dyn PowerSumCache>, render_fixed: &dyn Fn() -> String) -> CriterionRecord {
    let start = Instant::now();
    let (parameters, passed, detail) = match id {
        1 => c1(grid, cache),
        2 => family_battery(grid, false),
        3 => c3(grid),
        4 => c4(grid),
        5 => family_battery(grid, true),
        6 => c6(grid),
        7 => c7(grid),
        8 => c8(grid),
        9 => c9(grid),
        10 => {
            let a = render_fixed();
            let b = render_fixed();
            let same = a == b;
            (json!({"runs": 2}), same, if same { format!("{} bytes identical", a.len()) } else { "reports differ".into() })
        }
        _ => (Value::Null, false, format!("unknown criterion {id}")),
    };
    let name = CRITERIA.iter().find(|(i, _)| *i == id).map_or("unknown", |(_, n)| n);
    CriterionRecord { id, name, parameters, passed, detail, runtime: start.elapsed() }
}
