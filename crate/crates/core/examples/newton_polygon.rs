//! Newton polygon of the family at infinity for a 3-adic exponent, with the
//! simple zeros refined by Newton iteration.

use fzeta::ffpoly::field_make;
use fzeta::newton::{hensel_root, rh_verdict, zero_spectrum, NewtonPolygon};
use fzeta::nonarch::PadicExponent;
use fzeta::zeta::zeta_family_infty;

fn main() {
    let field = field_make(3, 1, None).expect("F_3");
    let y = PadicExponent::from_digits(3, vec![2, 0, 1, 2, 1, 0, 2, 1]).expect("digits");
    let fam = zeta_family_infty(&field, &y, 8, 64).expect("family");
    let np = NewtonPolygon::new(&fam.valuations()).expect("polygon");
    let zs = zero_spectrum(&np);
    for s in &zs.segments {
        println!("d {}..{}: slope {}, {} zero(s), certified {}", s.start, s.end, s.slope, s.length, s.certified);
    }
    println!("verdict: {:?}", rh_verdict(&zs));

    let series: Vec<_> = fam.coeffs.iter().map(|c| c.as_series().unwrap().clone()).collect();
    for s in zs.segments.iter().filter(|s| s.length == 1 && s.certified) {
        match hensel_root(&series, s.start, 6) {
            Ok(z) => println!("zero on {}..{}: {z}", s.start, s.end),
            Err(e) => println!("zero on {}..{}: {e}", s.start, s.end),
        }
    }
}
