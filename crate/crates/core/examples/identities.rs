//! Euler-factor removal at a prime and the degree-one twist, checked exactly.

use fzeta::ffpoly::{field_make, Poly};
use fzeta::zeta::{euler_removed_identity, wan_deg1_twist};

fn main() {
    let field = field_make(2, 2, None).expect("F_4");
    let f = Poly::from_ints(&field, &[1, 1, 1]);
    for j in [1, 5, 12] {
        let rep = euler_removed_identity(&field, j, &f, 6);
        println!("j = {j}: removal at {} holds on {} coefficients: {}", f.display("T"), rep.rows.len(), rep.all_hold());
    }
    let t = Poly::x(&field);
    for j in [3, 6, 21] {
        let rep = wan_deg1_twist(&field, j, &t).expect("twist");
        println!("j = {j}: twist at T holds: {}", rep.all_hold());
    }
}
