//! Invariant factors of a square integer matrix over the rationals.
//!
//! These are the diagonal of the Smith form of `xI - M` over `Q[x]`. Two
//! matrices are conjugate over `Q` iff their invariant factor chains agree,
//! and the chain is the data of the Frobenius (rational canonical) form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{IntMatrix, IntPoly};
use crate::error::{Error, Result};

/// Polynomial over `Q`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct QPoly(Vec<BigRational>);

impl QPoly {
    fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    fn zero() -> Self {
        QPoly(Vec::new())
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn sub(&self, rhs: &QPoly) -> QPoly {
        let n = self.0.len().max(rhs.0.len());
        let z = BigRational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) - rhs.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    fn add(&self, rhs: &QPoly) -> QPoly {
        let n = self.0.len().max(rhs.0.len());
        let z = BigRational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + rhs.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    fn mul(&self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return (QPoly::zero(), self.clone());
        }
        let lead_inv = d.0[dd].recip();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.0.iter().enumerate() {
                rem[k + i] -= &c * di;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    fn monic(&self) -> QPoly {
        match self.0.last() {
            None => self.clone(),
            Some(l) => {
                let inv = l.recip();
                QPoly(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    fn to_int_poly(&self) -> Option<IntPoly> {
        self.0
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<BigInt>>>()
            .map(IntPoly::new)
    }
}

type PolyMatrix = Vec<Vec<QPoly>>;

fn smith_diagonal(mut a: PolyMatrix) -> Vec<QPoly> {
    let n = a.len();
    for t in 0..n {
        loop {
            // pivot: minimal degree nonzero entry in the trailing block
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, e) in row.iter().enumerate().skip(t) {
                    if !e.is_zero() && best.is_none_or(|(_, _, d)| e.degree() < d) {
                        best = Some((i, j, e.degree()));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return (0..n).map(|i| a[i][i].clone()).collect();
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_rem(&p);
                for j in t..n {
                    let v = a[i][j].sub(&q.mul(&a[t][j]));
                    a[i][j] = v;
                }
                debug_assert_eq!(a[i][t], r);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_rem(&p);
                for row in a.iter_mut().skip(t) {
                    let v = row[j].sub(&q.mul(&row[t]));
                    row[j] = v;
                }
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            let offender =
                (t + 1..n).find(|&i| (t + 1..n).any(|j| !a[i][j].div_rem(&p).1.is_zero()));
            match offender {
                Some(i) => {
                    for j in t..n {
                        let v = a[t][j].add(&a[i][j]);
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
    }
    (0..n).map(|i| a[i][i].clone()).collect()
}

/// Nontrivial invariant factors `f_1 | f_2 | ... | f_k` of `M` over `Q`.
///
/// Each factor is monic with integer coefficients and their product is the
/// characteristic polynomial. The identity `I_n` yields `n` copies of `x - 1`.
pub fn frobenius_invariants(m: &IntMatrix) -> Result<Vec<IntPoly>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "frobenius_invariants requires a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let a: PolyMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = BigRational::from_integer(-m[(i, j)].clone());
                    if i == j {
                        QPoly::new(vec![c, BigRational::one()])
                    } else {
                        QPoly::new(vec![c])
                    }
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for d in smith_diagonal(a) {
        if d.is_zero() {
            return Err(Error::Consistency("xI - M is singular over Q[x]".into()));
        }
        if d.degree() == 0 {
            continue;
        }
        let p = d.monic().to_int_poly().ok_or_else(|| {
            Error::Consistency(
                "invariant factor of an integer matrix has non-integer coefficients".into(),
            )
        })?;
        out.push(p);
    }
    Ok(out)
}

/// Rational conjugacy test via invariant factors.
pub fn conjugate_over_q(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    if a.rows() != b.rows() {
        return Ok(false);
    }
    Ok(frobenius_invariants(a)? == frobenius_invariants(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_minus_one() -> IntPoly {
        IntPoly::from_i64(&[-1, 1])
    }

    #[test]
    fn single_jordan_block() {
        let f = frobenius_invariants(&IntMatrix::from_i64(&[[1, 1], [0, 1]])).unwrap();
        assert_eq!(f, vec![x_minus_one().pow(2)]);
    }

    #[test]
    fn identity_splits() {
        let f = frobenius_invariants(&IntMatrix::identity(2)).unwrap();
        assert_eq!(f, vec![x_minus_one(), x_minus_one()]);
    }

    #[test]
    fn shear_powers_are_conjugate() {
        let base = IntMatrix::from_i64(&[[1, 1], [0, 1]]);
        for p in 1..=9 {
            let m = IntMatrix::from_i64(&[[1, p], [0, 1]]);
            assert!(conjugate_over_q(&m, &base).unwrap());
        }
    }

    #[test]
    fn mixed_blocks() {
        // diag(J_2(1), 2): invariant factors {(x-1)^2 (x-2)}
        let m = IntMatrix::from_i64(&[[1, 1, 0], [0, 1, 0], [0, 0, 2]]);
        let f = frobenius_invariants(&m).unwrap();
        assert_eq!(
            f,
            vec![&x_minus_one().pow(2) * &IntPoly::from_i64(&[-2, 1])]
        );
        // diag(1, 1, 2): {x-1, (x-1)(x-2)}
        let m = IntMatrix::from_i64(&[[1, 0, 0], [0, 1, 0], [0, 0, 2]]);
        let f = frobenius_invariants(&m).unwrap();
        assert_eq!(
            f,
            vec![x_minus_one(), &x_minus_one() * &IntPoly::from_i64(&[-2, 1])]
        );
    }

    #[test]
    fn non_square() {
        assert!(frobenius_invariants(&IntMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn empty() {
        assert!(frobenius_invariants(&IntMatrix::zeros(0, 0))
            .unwrap()
            .is_empty());
    }
}
