//! Row Hermite normal form and integer left kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Unimodular row reduction `U * M = H` with `H` in row echelon form.
///
/// Rows `rank..` of `H` are zero. `H` is reduced to Hermite form: pivots
/// positive, entries above each pivot in `[0, pivot)`.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

pub fn row_echelon(m: &IntMatrix) -> RowEchelon {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut t = 0;
    let mut pivot_cols = Vec::new();

    for c in 0..cols {
        if t == rows {
            break;
        }
        let Some(p) = (t..rows).find(|&i| !h[(i, c)].is_zero()) else {
            continue;
        };
        h.swap_rows(t, p);
        u.swap_rows(t, p);
        for i in t + 1..rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            let a = h[(t, c)].clone();
            let b = h[(i, c)].clone();
            let e = a.extended_gcd(&b);
            let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
            // [[x, y], [-b/g, a/g]] has determinant 1
            let nb = -bg;
            h.combine_rows(t, i, [&e.x, &e.y, &nb, &ag]);
            u.combine_rows(t, i, [&e.x, &e.y, &nb, &ag]);
        }
        if h[(t, c)].is_negative() {
            h.negate_row(t);
            u.negate_row(t);
        }
        let p = h[(t, c)].clone();
        for i in 0..t {
            let q = -h[(i, c)].div_floor(&p);
            h.add_row_multiple(i, t, &q);
            u.add_row_multiple(i, t, &q);
        }
        pivot_cols.push(c);
        t += 1;
    }

    RowEchelon {
        h,
        u,
        rank: t,
        pivot_cols,
    }
}

/// Hermite normal form of the row lattice, zero rows dropped.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let r = row_echelon(m);
    r.h.row_slice(0, r.rank)
}

/// Basis rows of the left kernel lattice `{θ ∈ Z^rows : θ·M = 0}`.
///
/// The basis is in Hermite normal form, hence canonical for the lattice. The
/// result has `rows(M) - rank(M)` rows and `rows(M)` columns.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let r = row_echelon(m);
    let k = r.u.row_slice(r.rank, m.rows());
    if k.rows() == 0 {
        return IntMatrix::zeros(0, m.rows());
    }
    hnf(&k)
}

/// Content-free version of an integer vector (divide by the gcd of entries).
pub fn primitive_part(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}
