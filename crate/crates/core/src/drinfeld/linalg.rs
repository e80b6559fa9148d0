//! Dense linear algebra over F_r, just enough for the Frobenius solvers.

use crate::ffpoly::{Field, FqElem, Poly};

/// Outcome of solving `M x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum LinearSolution {
    Inconsistent,
    /// A particular solution and the dimension of the kernel.
    Solved { x: Vec<FqElem>, nullity: usize },
}

/// Gauss-Jordan elimination on `rows`, each of length `ncols`, with right-hand side `rhs`.
pub(crate) fn solve(field: &Field, mut rows: Vec<Vec<FqElem>>, mut rhs: Vec<FqElem>, ncols: usize) -> LinearSolution {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pr);
        rhs.swap(r, pr);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for k in c..ncols {
            rows[r][k] = field.mul(rows[r][k], inv);
        }
        rhs[r] = field.mul(rhs[r], inv);
        for i in 0..nrows {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c];
            for k in c..ncols {
                let t = field.mul(factor, rows[r][k]);
                rows[i][k] = field.sub(rows[i][k], t);
            }
            let t = field.mul(factor, rhs[r]);
            rhs[i] = field.sub(rhs[i], t);
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    if rhs[r..].iter().any(|x| !x.is_zero()) {
        return LinearSolution::Inconsistent;
    }
    let mut x = vec![FqElem::ZERO; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rhs[i];
    }
    LinearSolution::Solved { x, nullity: ncols - pivots.len() }
}

/// Coordinates of a residue `a` (degree < `d`) in the basis `1, w, ..., w^(d-1)`.
pub(crate) fn coords(a: &Poly, d: usize) -> Vec<FqElem> {
    (0..d).map(|k| a.coeff(k)).collect()
}
