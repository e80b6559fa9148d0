use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::cm2::{hecke_identity, parity_report, psi_factorization_check, psi_is_carlitz_square, Cm2Error};
use crate::drinfeld::{frobenius_charpoly, lseries_coeffs, lseries_family, reduce_mod, BadPrimePolicy, DrinfeldError, DrinfeldModuleSpec};
use crate::ffpoly::{field_make, is_irreducible, monic_count, FfError, Field, Poly};
use crate::newton::{hensel_root, rh_verdict, zero_spectrum, CoeffValuation, NewtonError, NewtonPolygon};
use crate::nonarch::{NonArchError, PadicExponent, Place, SvPoint};
use crate::zeta::{
    special_polynomial, special_polynomial_cached, zeta_family_infty, zeta_family_vadic, CoefficientFamily, FamilyExponent,
    PowerSumCache, ZetaError,
};

use super::verify::{run_criterion, Grid, CRITERIA};
use super::{envelope, parse_poly, Cli, CliError, Command, ExponentArgs, FieldArgs, Format, ModuleArgs, ModuleKind, Outcome, RunConfig};

/// Largest enumeration a single coefficient may require.
const MAX_ENUMERATION: u64 = 1 << 26;

impl From<FfError> for CliError {
    fn from(e: FfError) -> Self {
        match e {
            FfError::FieldTooLarge { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<NonArchError> for CliError {
    fn from(e: NonArchError) -> Self {
        match e {
            NonArchError::InsufficientPadicPrecision { .. } | NonArchError::InvalidDigit { .. } | NonArchError::PrecisionOutOfRange(_) => {
                CliError::Usage(format!("{e}; pass more exponent digits"))
            }
            NonArchError::NotIrreducible | NonArchError::CharacteristicMismatch { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Math(e.to_string()),
        }
    }
}

impl From<ZetaError> for CliError {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::NonArch(e) => e.into(),
            ZetaError::PreconditionViolated(s) => CliError::Usage(s),
        }
    }
}

impl From<NewtonError> for CliError {
    fn from(e: NewtonError) -> Self {
        match e {
            NewtonError::AllCoefficientsVanish => CliError::Math(format!("{e}; raise --precision or --dmax")),
            _ => CliError::Math(e.to_string()),
        }
    }
}

impl From<DrinfeldError> for CliError {
    fn from(e: DrinfeldError) -> Self {
        match e {
            DrinfeldError::InvalidModule(_) | DrinfeldError::NotIrreducible(_) | DrinfeldError::RankUnsupported(_) => {
                CliError::Usage(e.to_string())
            }
            DrinfeldError::Field(f) => f.into(),
            DrinfeldError::NonArch(n) => n.into(),
            _ => CliError::Math(e.to_string()),
        }
    }
}

impl From<Cm2Error> for CliError {
    fn from(e: Cm2Error) -> Self {
        match e {
            Cm2Error::UnsupportedField(_) => CliError::Usage(e.to_string()),
            Cm2Error::Drinfeld(d) => d.into(),
            Cm2Error::Newton(n) => n.into(),
            Cm2Error::ProvisionalPolygon { .. } => CliError::Math(format!("{e}; raise --precision")),
        }
    }
}

fn build_field(args: &FieldArgs) -> Result<Field, CliError> {
    if !crate::ffpoly::is_prime_u64(args.p as u64) {
        let hint = (2..=args.p)
            .find(|&q| crate::ffpoly::is_prime_u64(q as u64) && args.p % q == 0)
            .and_then(|q| {
                let mut k = 0;
                let mut x = args.p;
                while x % q == 0 {
                    x /= q;
                    k += 1;
                }
                (x == 1).then(|| format!("; F_{} is requested via --p {q} --m {k}", args.p))
            })
            .unwrap_or_default();
        return Err(CliError::Usage(format!("--p {} must be prime{hint}", args.p)));
    }
    let modulus = match &args.modulus {
        None => None,
        Some(s) => {
            let ds: Option<Vec<u32>> = s.chars().filter(|c| *c != ',').map(|c| c.to_digit(36)).collect();
            Some(ds.ok_or_else(|| CliError::Usage(format!("invalid modulus {s:?}")))?)
        }
    };
    Ok(field_make(args.p, args.m, modulus.as_deref())?)
}

fn poly_arg(field: &Field, s: &str) -> Result<Poly, CliError> {
    parse_poly(field, s, 'T').map_err(|e| CliError::Usage(e.to_string()))
}

fn prime_arg(field: &Field, s: &str) -> Result<Poly, CliError> {
    let f = poly_arg(field, s)?;
    if !f.is_monic() || f.degree().unwrap_or(0) == 0 || !is_irreducible(&f)? {
        return Err(CliError::Usage(format!("{s} is not a monic prime")));
    }
    Ok(f)
}

fn check_enumeration(field: &Field, dmax: usize) -> Result<(), CliError> {
    match monic_count(field.r(), dmax) {
        Some(n) if n <= MAX_ENUMERATION => Ok(()),
        _ => Err(CliError::Resource(format!("degree {dmax} needs more than {MAX_ENUMERATION} polynomials per coefficient"))),
    }
}

fn padic_arg(field: &Field, e: &ExponentArgs) -> Result<PadicExponent, CliError> {
    match (&e.y, &e.y_digits) {
        (Some(y), _) => Ok(PadicExponent::embed(field.p(), *y, e.digits)?),
        (None, Some(ds)) => {
            let ds: Result<Vec<u32>, _> = ds.split(',').map(|t| t.trim().parse::<u32>()).collect();
            let ds = ds.map_err(|_| CliError::Usage("--y-digits takes comma-separated digits".into()))?;
            Ok(PadicExponent::from_digits(field.p(), ds)?)
        }
        (None, None) => Err(CliError::Usage("an exponent is required: --y or --y-digits".into())),
    }
}

fn exponent_for(field: &Field, e: &ExponentArgs, place: &Place) -> Result<FamilyExponent, CliError> {
    let y = padic_arg(field, e)?;
    Ok(match place {
        Place::Infinity => FamilyExponent::Infinity(y),
        Place::Finite(f) => {
            let order = (field.r() as u64).pow(f.degree().unwrap() as u32) - 1;
            match e.y {
                Some(n) => FamilyExponent::Finite(SvPoint::from_integer(n, field.r(), f.degree().unwrap(), field.p(), e.digits)?),
                None => FamilyExponent::Finite(SvPoint::new(e.s1, order, y)),
            }
        }
    })
}

fn exponent_json(e: &FamilyExponent) -> Value {
    match e {
        FamilyExponent::Infinity(y) => json!({"digits": y.digits(), "integer": y.as_integer()}),
        FamilyExponent::Finite(s) => json!({"s1": s.s1(), "order": s.order(), "digits": s.s2().digits(), "integer": s.as_integer()}),
    }
}

fn place_json(place: &Place) -> Value {
    match place {
        Place::Infinity => json!("infinity"),
        Place::Finite(f) => json!(f.display("T")),
    }
}

fn field_json(field: &Field) -> Value {
    json!({"p": field.p(), "m": field.m(), "r": field.r(), "modulus": field.modulus()})
}

fn coeff_string(fam: &CoefficientFamily, d: usize) -> String {
    match (fam.coeffs[d].as_series(), fam.coeffs[d].as_vadic()) {
        (Some(s), _) => s.to_string(),
        (_, Some(x)) => {
            let tail = x.precision().map_or(String::new(), |m| format!(" mod ({})^{m}", x.prime().display("T")));
            format!("{}{tail}", x.rep().display("T"))
        }
        _ => unreachable!(),
    }
}

/// Newton data of a family as JSON plus CSV and text renderings.
fn polygon_report(fam: &CoefficientFamily, refine: bool) -> Result<(Value, String, String, bool), CliError> {
    let vals = fam.valuations();
    let np = NewtonPolygon::new(&vals)?;
    let zs = zero_spectrum(&np);
    let verdict = rh_verdict(&zs);
    let mut csv = String::from("d,kind,valuation,vertex\n");
    for (d, v) in vals.iter().enumerate() {
        let (kind, val) = match v {
            CoeffValuation::Finite(x) => ("finite", x.to_string()),
            CoeffValuation::AtLeast(x) => ("atleast", x.to_string()),
            CoeffValuation::Zero => ("zero", String::new()),
        };
        let vertex = np.vertices.iter().any(|&(i, _)| i == d);
        let _ = writeln!(csv, "{d},{kind},{val},{vertex}");
    }
    let mut roots = Vec::new();
    if refine {
        let series: Option<Vec<_>> = fam.coeffs.iter().map(|c| c.as_series().cloned()).collect();
        let Some(series) = series else {
            return Err(CliError::Usage("--refine is available at infinity only".into()));
        };
        for s in zs.segments.iter().filter(|s| s.length == 1 && s.certified) {
            let root = hensel_root(&series, s.start, fam.precision as i64);
            roots.push(match root {
                Ok(z) => json!({"segment": [s.start, s.end], "root": z.to_string()}),
                Err(e) => json!({"segment": [s.start, s.end], "error": e.to_string()}),
            });
        }
    }
    let mut text = String::new();
    for s in &zs.segments {
        let _ = writeln!(text, "segment {}..{} slope {} length {}{}", s.start, s.end, s.slope, s.length, if s.certified { "" } else { " (uncertified)" });
    }
    let _ = writeln!(text, "provisional: {}  all simple: {}", np.provisional, verdict.all_simple());
    let json = json!({
        "points": np.points,
        "vertices": np.vertices,
        "provisional": np.provisional,
        "unresolvedTail": np.unresolved_tail,
        "certifiedSegments": np.certified_segments,
        "segments": zs.segments,
        "verdict": {
            "allSimple": verdict.all_simple(),
            "allSimpleBeyond": verdict.all_simple_beyond,
            "uniqueAbsValue": verdict.unique_abs_value,
            "exceptions": verdict.exceptions,
        },
        "roots": if refine { Value::Array(roots) } else { Value::Null },
    });
    Ok((json, csv, text, np.provisional))
}

fn build_module(field: &Field, m: &ModuleArgs) -> Result<DrinfeldModuleSpec, CliError> {
    match m.module {
        ModuleKind::Carlitz => {
            if m.g1.is_some() || m.g2.is_some() {
                return Err(CliError::Usage("--g1/--g2 apply to --module rank2".into()));
            }
            Ok(DrinfeldModuleSpec::carlitz(field))
        }
        ModuleKind::Rank2 => {
            let g1 = poly_arg(field, m.g1.as_deref().unwrap_or("1"))?;
            let g2 = poly_arg(field, m.g2.as_deref().unwrap_or("1"))?;
            Ok(DrinfeldModuleSpec::rank2(field, g1, g2)?)
        }
    }
}

fn outcome(result: Value, csv: Option<String>, text: String, failed: bool) -> Outcome {
    Outcome { result, csv, text, timing: Value::Object(Map::new()), failed }
}

fn config(command: &'static str, cli: &Cli, params: Value) -> RunConfig {
    RunConfig { command, format: cli.format, threads: cli.threads, params }
}

fn cmd_special(cli: &Cli, field_args: &FieldArgs, j: u64, dmax: Option<usize>, cache: Option<&dyn PowerSumCache>) -> Result<(RunConfig, Outcome), CliError> {
    let field = build_field(field_args)?;
    let sp = match cache {
        Some(c) => special_polynomial_cached(&field, j, dmax, c),
        None => special_polynomial(&field, j, dmax),
    };
    let coeffs: Vec<String> = sp.coeffs[..=sp.observed_degree].iter().map(|c| c.display("T")).collect();
    let mut csv = String::from("d,coefficient\n");
    let mut text = format!("z(x, -{j}) over F_{}:\n", field.r());
    for (d, c) in coeffs.iter().enumerate() {
        let _ = writeln!(csv, "{d},{c}");
        let _ = writeln!(text, "  x^-{d}: {c}");
    }
    let result = json!({
        "field": field_json(&field),
        "j": j,
        "coefficients": coeffs,
        "observedDegree": sp.observed_degree,
        "dmax": sp.dmax,
        "certifiedPolynomial": sp.certified_polynomial,
    });
    let params = json!({"field": field_args, "j": j, "dmax": dmax});
    Ok((config("special", cli, params), outcome(result, Some(csv), text, false)))
}

#[allow(clippy::too_many_arguments)]
fn cmd_newton(
    cli: &Cli,
    field_args: &FieldArgs,
    exponent: &ExponentArgs,
    prime: Option<&str>,
    dmax: usize,
    m: usize,
    refine: bool,
) -> Result<(RunConfig, Outcome), CliError> {
    let field = build_field(field_args)?;
    check_enumeration(&field, dmax)?;
    let place = match prime {
        Some(s) => Place::Finite(prime_arg(&field, s)?),
        None => Place::Infinity,
    };
    let exp = exponent_for(&field, exponent, &place)?;
    let fam = match (&exp, &place) {
        (FamilyExponent::Infinity(y), _) => zeta_family_infty(&field, y, dmax, m)?,
        (FamilyExponent::Finite(s), Place::Finite(f)) => zeta_family_vadic(&field, s, f, dmax, m)?,
        _ => unreachable!(),
    };
    let (poly_json, csv, text, _) = polygon_report(&fam, refine)?;
    let coeffs: Vec<String> = (0..=dmax).map(|d| coeff_string(&fam, d)).collect();
    let mut result = json!({
        "field": field_json(&field),
        "place": place_json(&place),
        "exponent": exponent_json(&exp),
        "exact": fam.exact,
        "precision": m,
        "dmax": dmax,
        "coefficients": coeffs,
    });
    result.as_object_mut().unwrap().extend(poly_json.as_object().unwrap().clone());
    let params = json!({"field": field_args, "exponent": exponent, "prime": prime, "dmax": dmax, "precision": m, "refine": refine});
    Ok((config("newton", cli, params), outcome(result, Some(csv), text, false)))
}

fn cmd_frobenius(cli: &Cli, field_args: &FieldArgs, margs: &ModuleArgs, f: &str) -> Result<(RunConfig, Outcome), CliError> {
    let field = build_field(field_args)?;
    let module = build_module(&field, margs)?;
    let prime = prime_arg(&field, f)?;
    let fc = frobenius_charpoly(&reduce_mod(&module, &prime)?)?;
    let summary = fc.summary();
    let mut result = serde_json::to_value(&summary).unwrap();
    result["module"] = json!(module.describe());
    result["field"] = field_json(&field);
    result["norm"] = json!(fc.norm.display("T"));
    let text = format!(
        "{} at {}: a = {}, mu = {}, verified = {}, 2 deg a <= deg f: {}\n",
        module.describe(),
        summary.prime,
        summary.a.as_deref().unwrap_or("-"),
        summary.mu,
        summary.verified,
        summary.local_rh
    );
    let params = json!({"field": field_args, "module": margs, "f": f});
    Ok((config("frobenius", cli, params), outcome(result, None, text, !fc.verified)))
}

#[allow(clippy::too_many_arguments)]
fn cmd_lseries(
    cli: &Cli,
    field_args: &FieldArgs,
    margs: &ModuleArgs,
    degree: usize,
    exponent: &ExponentArgs,
    prime: Option<&str>,
    m: usize,
) -> Result<(RunConfig, Outcome), CliError> {
    let field = build_field(field_args)?;
    check_enumeration(&field, degree)?;
    let module = build_module(&field, margs)?;
    let l = lseries_coeffs(&module, degree, BadPrimePolicy::Omit)?;
    let rows: Vec<Value> = l.c.iter().map(|(n, c)| json!({"n": n.display("T"), "c": c.display("T")})).collect();
    let factors: Vec<Value> = l.factors.iter().map(|f| serde_json::to_value(f.charpoly.summary()).unwrap()).collect();
    let mut csv = String::from("n,c\n");
    let mut text = format!("L({}, s), deg n <= {degree}\n", module.describe());
    for (n, c) in &l.c {
        let _ = writeln!(csv, "{},{}", n.display("T"), c.display("T"));
        let _ = writeln!(text, "  c({}) = {}", n.display("T"), c.display("T"));
    }
    let mut result = json!({
        "field": field_json(&field),
        "module": module.describe(),
        "degree": degree,
        "coefficients": rows,
        "factors": factors,
        "skipped": l.skipped.iter().map(|p| p.display("T")).collect::<Vec<_>>(),
    });
    let mut provisional = false;
    if exponent.y.is_some() || exponent.y_digits.is_some() {
        let place = match prime {
            Some(s) => Place::Finite(prime_arg(&field, s)?),
            None => Place::Infinity,
        };
        let exp = exponent_for(&field, exponent, &place)?;
        let fam = lseries_family(&l, &exp, &place, degree, m)?;
        let (poly_json, _, poly_text, prov) = polygon_report(&fam, false)?;
        provisional = prov;
        text.push_str(&poly_text);
        result["family"] = json!({
            "place": place_json(&place),
            "exponent": exponent_json(&exp),
            "precision": m,
            "coefficients": (0..=degree).map(|d| coeff_string(&fam, d)).collect::<Vec<_>>(),
            "polygon": poly_json,
        });
    }
    let _ = provisional;
    let params = json!({"field": field_args, "module": margs, "degree": degree, "exponent": exponent, "prime": prime, "precision": m});
    Ok((config("lseries", cli, params), outcome(result, Some(csv), text, false)))
}

fn cmd_sqrtcar(cli: &Cli, j: u64, dmax: usize, m: usize, psi_degree: usize) -> Result<(RunConfig, Outcome), CliError> {
    let f2 = field_make(2, 1, None)?;
    check_enumeration(&f2, dmax)?;
    let square = psi_is_carlitz_square(&f2)?;
    let hecke = hecke_identity(&f2, j, dmax)?;
    let psi = psi_factorization_check(&f2, psi_degree)?;
    let parity = parity_report(&f2, j, dmax, m)?;
    let passed = square && hecke.all_hold() && psi.all_hold() && parity.passed();
    let result = json!({
        "j": j,
        "psiIsCarlitzSquare": square,
        "heckeIdentity": {
            "holds": hecke.all_hold(),
            "failures": hecke.failures(),
            "coefficients": hecke.rows.iter().map(|r| r.lhs.display("u")).collect::<Vec<_>>(),
        },
        "psiFactorization": psi,
        "parity": parity,
        "passed": passed,
    });
    let text = format!(
        "psi_T = C'_u C'_u: {square}\nhecke identity (j = {j}, d <= {dmax}): {}\npsi factorization (deg g' <= {psi_degree}): {}\nparity v-adic odd: {} (slopes {:?})\nparity infinity even: {} (slopes {:?})\n",
        hecke.all_hold(),
        psi.all_hold(),
        parity.vadic.parity_holds,
        parity.vadic.slopes,
        parity.infinity.parity_holds,
        parity.infinity.slopes
    );
    let params = json!({"j": j, "dmax": dmax, "precision": m, "psiDegree": psi_degree});
    Ok((config("sqrtcar", cli, params), outcome(result, None, text, !passed)))
}

/// Small fixed command lines whose reports must be reproducible.
pub const FIXED_RUNS: [&[&str]; 5] = [
    &["special", "--p", "3", "--j", "10"],
    &["newton", "--p", "2", "--y-digits", "1,0,1,1,0,1,0,1", "--dmax", "6"],
    &["frobenius", "--p", "3", "--f", "T^2+1", "--module", "rank2", "--g1", "T"],
    &["lseries", "--p", "2", "--module", "rank2", "--degree", "3", "--y", "-2"],
    &["sqrtcar", "--j", "2", "--dmax", "5", "--psi-degree", "2"],
];

/// The fixed reports, timing removed, concatenated.
pub fn render_fixed_runs() -> String {
    let mut out = String::new();
    for args in FIXED_RUNS {
        let cli = <Cli as clap::Parser>::try_parse_from(std::iter::once("fzeta").chain(args.iter().copied())).expect("fixed runs parse");
        match dispatch(&cli, None) {
            Ok((cfg, oc)) => out.push_str(&serde_json::to_string(&envelope(&cfg, &oc, Value::Null)).unwrap()),
            Err(e) => out.push_str(&e.to_string()),
        }
        out.push('\n');
    }
    out
}

fn cmd_verify(cli: &Cli, quick: bool, full: bool, only: &[u8], cache: Option<&dyn PowerSumCache>) -> Result<(RunConfig, Outcome), CliError> {
    let grid = if full && !quick { Grid::Full } else { Grid::Quick };
    if let Some(bad) = only.iter().find(|id| !CRITERIA.iter().any(|(i, _)| i == *id)) {
        return Err(CliError::Usage(format!("no criterion {bad}")));
    }
    let ids: Vec<u8> = CRITERIA.iter().map(|(i, _)| *i).filter(|i| only.is_empty() || only.contains(i)).collect();
    let mut records = Vec::new();
    let mut timing = Map::new();
    let mut text = String::new();
    for id in ids {
        let rec = run_criterion(id, grid, cache, &render_fixed_runs);
        timing.insert(id.to_string(), json!(rec.runtime.as_secs_f64() * 1e3));
        let _ = writeln!(text, "criterion {:>2} {}: {} ({})", rec.id, if rec.passed { "PASS" } else { "FAIL" }, rec.name, rec.detail);
        records.push(rec);
    }
    let passed = records.iter().all(|r| r.passed);
    let result = json!({"grid": grid, "criteria": records, "passed": passed});
    let params = json!({"grid": grid, "only": only});
    let mut oc = outcome(result, None, text, !passed);
    oc.timing = json!({"criteriaMs": timing});
    Ok((config("verify", cli, params), oc))
}

pub(super) fn dispatch(cli: &Cli, cache: Option<&dyn PowerSumCache>) -> Result<(RunConfig, Outcome), CliError> {
    match &cli.command {
        Command::Special { field, j, dmax } => cmd_special(cli, field, *j, *dmax, cache),
        Command::Newton { field, exponent, prime, dmax, precision, refine } => {
            cmd_newton(cli, field, exponent, prime.as_deref(), *dmax, *precision, *refine)
        }
        Command::Frobenius { field, module, f } => cmd_frobenius(cli, field, module, f),
        Command::Lseries { field, module, degree, exponent, prime, precision } => {
            cmd_lseries(cli, field, module, *degree, exponent, prime.as_deref(), *precision)
        }
        Command::Sqrtcar { j, dmax, precision, psi_degree } => cmd_sqrtcar(cli, *j, *dmax, *precision, *psi_degree),
        Command::Verify { quick, full, only } => {
            if cli.format == Format::Csv {
                return Err(CliError::Usage("csv output is not available for verify".into()));
            }
            cmd_verify(cli, *quick, *full, only, cache)
        }
    }
}
