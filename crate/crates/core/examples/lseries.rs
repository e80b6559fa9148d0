//! Dirichlet coefficients of L(phi, s) for a rank-2 module over F_2, and
//! the Newton polygon of its family at infinity at s = -1.

use fzeta::drinfeld::{lseries_coeffs, lseries_family, BadPrimePolicy, DrinfeldModuleSpec};
use fzeta::ffpoly::{field_make, Poly};
use fzeta::newton::{zero_spectrum, NewtonPolygon};
use fzeta::nonarch::{PadicExponent, Place};
use fzeta::zeta::FamilyExponent;

fn main() {
    let field = field_make(2, 1, None).expect("F_2");
    let module = DrinfeldModuleSpec::rank2(&field, Poly::one(&field), Poly::one(&field)).expect("module");
    let l = lseries_coeffs(&module, 4, BadPrimePolicy::Omit).expect("coefficients");
    for (n, c) in &l.c {
        println!("c({}) = {}", n.display("T"), c.display("T"));
    }
    let y = PadicExponent::embed(2, -1, 8).expect("exponent");
    let fam = lseries_family(&l, &FamilyExponent::Infinity(y), &Place::Infinity, 4, 32).expect("family");
    let zs = zero_spectrum(&NewtonPolygon::new(&fam.valuations()).expect("polygon"));
    for s in &zs.segments {
        println!("slope {} length {}", s.slope, s.length);
    }
}
