//! Frobenius data of the Carlitz module and of a rank-2 module at small primes.

use fzeta::drinfeld::{frobenius_charpoly, reduce_mod, DrinfeldModuleSpec};
use fzeta::ffpoly::{field_make, monic_primes_up_to, Poly};

fn main() {
    let field = field_make(3, 1, None).expect("F_3");
    let carlitz = DrinfeldModuleSpec::carlitz(&field);
    let rank2 = DrinfeldModuleSpec::rank2(&field, Poly::x(&field), Poly::one(&field)).expect("module");
    for module in [&carlitz, &rank2] {
        println!("{}", module.describe());
        for f in monic_primes_up_to(&field, 2) {
            match reduce_mod(module, &f).and_then(|m| frobenius_charpoly(&m)) {
                Ok(fc) => {
                    let s = fc.summary();
                    println!("  {}: a = {}, mu = {}, local RH {}", s.prime, s.a.as_deref().unwrap_or("-"), s.mu, s.local_rh);
                }
                Err(e) => println!("  {}: {e}", f.display("T")),
            }
        }
    }
}
