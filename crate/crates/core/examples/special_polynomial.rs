//! Prints the special polynomials z(x, -j) over F_3 for a few j.

use fzeta::ffpoly::field_make;
use fzeta::zeta::special_polynomial;

fn main() {
    let field = field_make(3, 1, None).expect("F_3");
    for j in [2, 4, 8, 10, 26] {
        let sp = special_polynomial(&field, j, None);
        let terms: Vec<String> = (0..=sp.observed_degree)
            .map(|d| format!("({})x^-{d}", sp.coeff(d).display("T")))
            .collect();
        println!("z(x, -{j}) = {}", terms.join(" + "));
    }
    for j in [80, 242, 728] {
        let sp = special_polynomial(&field, j, None);
        let degs: Vec<_> = (0..=sp.observed_degree).map(|d| sp.coeff(d).degree().unwrap_or(0)).collect();
        println!("j = {j}: degree in x^-1 is {}, coefficient degrees {degs:?}", sp.observed_degree);
    }
}
