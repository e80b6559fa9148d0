//! The CM example over F_2[sqrt T]: psi_T as a square of the Carlitz module
//! of F_2[u], the Hecke identity, and slope parity on both sides.

use fzeta::cm2::{hecke_identity, parity_report, psi_factorization_check, psi_is_carlitz_square};
use fzeta::ffpoly::field_make;

fn main() {
    let f2 = field_make(2, 1, None).expect("F_2");
    println!("psi_T = C'_u C'_u: {}", psi_is_carlitz_square(&f2).expect("psi"));
    println!("psi factorization up to degree 4: {}", psi_factorization_check(&f2, 4).expect("psi").all_hold());
    for j in 0..4 {
        let hecke = hecke_identity(&f2, j, 6).expect("hecke");
        let parity = parity_report(&f2, j, 6, 48).expect("parity");
        println!(
            "j = {j}: hecke {}, v-adic slopes {:?}, infinity slopes {:?}",
            hecke.all_hold(),
            parity.vadic.slopes,
            parity.infinity.slopes
        );
    }
}
