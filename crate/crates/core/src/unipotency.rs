//! Unipotency and quasi-unipotency deciders for integer matrices.
//!
//! An integer matrix is quasi-unipotent iff every eigenvalue is a root of
//! unity, iff its characteristic polynomial is a product of cyclotomic
//! polynomials. We decide this by trial division against every `Φ_d` that can
//! occur in dimension `n`, i.e. every `d` with `φ(d) <= n`.
//!
//! [`power_conjugacy_witness`] is an independent cross-check: a matrix is
//! quasi-unipotent iff some pair of distinct positive powers is conjugate. It
//! can confirm quasi-unipotency but a miss within the scan bound is only
//! inconclusive.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::dec_u64;
use crate::linalg::{charpoly, frobenius_invariants, unipotent_jordan_profile, IntMatrix, IntPoly};

/// Largest `d` for which Euler's phi and `Φ_d` are computed.
pub const MAX_CYCLOTOMIC_INDEX: u64 = 1000;

/// Euler's totient by trial factorization.
pub fn euler_phi(d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::Domain("euler_phi(0) is undefined".into()));
    }
    if d > MAX_CYCLOTOMIC_INDEX {
        return Err(Error::Domain(format!(
            "euler_phi({d}) exceeds the supported range 1..={MAX_CYCLOTOMIC_INDEX}"
        )));
    }
    let mut n = d;
    let mut phi = d;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    Ok(phi)
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// The `d`-th cyclotomic polynomial, `(x^d - 1) / ∏_{e | d, e < d} Φ_e`.
pub fn cyclotomic(d: u64) -> Result<IntPoly> {
    if d == 0 {
        return Err(Error::Domain("cyclotomic index must be >= 1".into()));
    }
    if d > MAX_CYCLOTOMIC_INDEX {
        return Err(Error::Domain(format!(
            "cyclotomic index {d} exceeds {MAX_CYCLOTOMIC_INDEX}"
        )));
    }
    let mut p = IntPoly::x_pow_minus_one(d as usize);
    for e in divisors(d) {
        if e == d {
            continue;
        }
        p = p
            .exact_div_monic(&cyclotomic(e)?)
            .ok_or_else(|| Error::Consistency(format!("Φ_{e} does not divide x^{d} - 1")))?;
    }
    Ok(p)
}

/// All `d` with `φ(d) <= n`, ascending.
///
/// Since `φ(d) >= sqrt(d / 2)`, every such `d` is at most `2 n^2`.
pub fn cyclotomic_indices_up_to_degree(n: usize) -> Result<Vec<u64>> {
    let bound = (2 * (n as u64) * (n as u64)).max(2);
    if bound > MAX_CYCLOTOMIC_INDEX {
        return Err(Error::Domain(format!(
            "dimension {n} is too large for cyclotomic enumeration"
        )));
    }
    let mut out = Vec::new();
    for d in 1..=bound {
        if euler_phi(d)? <= n as u64 {
            out.push(d);
        }
    }
    Ok(out)
}

/// Largest possible multiplicative order of a quasi-unipotent `n x n` matrix's
/// semisimple part: the maximum `lcm` of distinct `d_i` with `Σ φ(d_i) <= n`.
pub fn max_quasi_unipotent_order(n: usize) -> Result<u64> {
    let cands: Vec<(u64, u64)> = cyclotomic_indices_up_to_degree(n)?
        .into_iter()
        .map(|d| euler_phi(d).map(|p| (d, p)))
        .collect::<Result<_>>()?;

    fn best(cands: &[(u64, u64)], budget: u64, acc: u64) -> u64 {
        let mut top = acc;
        for (i, &(d, phi)) in cands.iter().enumerate() {
            if phi <= budget {
                top = top.max(best(&cands[i + 1..], budget - phi, acc.lcm(&d)));
            }
        }
        top
    }
    Ok(best(&cands, n as u64, 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuasiUnipotencyStatus {
    Unipotent,
    QuasiUnipotent {
        #[serde(with = "dec_u64")]
        order: u64,
    },
    No,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicFactor {
    #[serde(with = "dec_u64")]
    pub index: u64,
    #[serde(with = "dec_u64")]
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiUnipotencyVerdict {
    pub status: QuasiUnipotencyStatus,
    pub cyclotomic_factors: Vec<CyclotomicFactor>,
    /// Non-cyclotomic cofactor of the characteristic polynomial, when
    /// `status` is `No`.
    pub witness: Option<IntPoly>,
}

impl QuasiUnipotencyVerdict {
    pub fn is_quasi_unipotent(&self) -> bool {
        self.status != QuasiUnipotencyStatus::No
    }

    /// The order `t` such that `M^t` is unipotent; `1` for unipotent input.
    pub fn order(&self) -> Option<u64> {
        match self.status {
            QuasiUnipotencyStatus::Unipotent => Some(1),
            QuasiUnipotencyStatus::QuasiUnipotent { order } => Some(order),
            QuasiUnipotencyStatus::No => None,
        }
    }
}

fn require_square(m: &IntMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// `(M - I)^n = 0`.
pub fn is_unipotent(m: &IntMatrix) -> Result<bool> {
    require_square(m)?;
    Ok(m.minus_identity()?.pow(m.rows() as u64)?.is_zero())
}

/// Cyclotomic factorization of a monic integer polynomial of degree `n`.
pub fn cyclotomic_factorization(p: &IntPoly) -> Result<QuasiUnipotencyVerdict> {
    let n = p.degree().unwrap_or(0);
    let mut rest = p.clone();
    let mut factors = Vec::new();
    for d in cyclotomic_indices_up_to_degree(n)? {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let (k, r) = rest.strip_factor(&cyclotomic(d)?);
        if k > 0 {
            factors.push(CyclotomicFactor {
                index: d,
                multiplicity: k as u64,
            });
            rest = r;
        }
    }
    let status = if rest.degree().unwrap_or(0) > 0 {
        QuasiUnipotencyStatus::No
    } else if factors.iter().all(|f| f.index == 1) {
        QuasiUnipotencyStatus::Unipotent
    } else {
        QuasiUnipotencyStatus::QuasiUnipotent {
            order: factors.iter().fold(1, |acc, f| acc.lcm(&f.index)),
        }
    };
    let witness = (status == QuasiUnipotencyStatus::No).then_some(rest);
    Ok(QuasiUnipotencyVerdict {
        status,
        cyclotomic_factors: factors,
        witness,
    })
}

pub fn quasi_unipotency(m: &IntMatrix) -> Result<QuasiUnipotencyVerdict> {
    require_square(m)?;
    cyclotomic_factorization(&charpoly(m)?)
}

pub fn is_quasi_unipotent(m: &IntMatrix) -> Result<bool> {
    Ok(quasi_unipotency(m)?.is_quasi_unipotent())
}

/// First pair `(p, q)`, `0 < p < q <= bound` in lexicographic order, with
/// `M^p` conjugate to `M^q` over the rationals.
pub fn power_conjugacy_witness(m: &IntMatrix, bound: u64) -> Result<Option<(u64, u64)>> {
    require_square(m)?;
    if m.det()?.is_zero() {
        return Err(Error::Domain(
            "power conjugacy scan requires an invertible matrix".into(),
        ));
    }
    let mut invariants = Vec::with_capacity(bound as usize);
    let mut power = IntMatrix::identity(m.rows());
    for _ in 0..bound {
        power = &power * m;
        invariants.push(frobenius_invariants(&power)?);
    }
    for p in 0..invariants.len() {
        for q in p + 1..invariants.len() {
            if invariants[p] == invariants[q] {
                return Ok(Some((p as u64 + 1, q as u64 + 1)));
            }
        }
    }
    Ok(None)
}

/// Size of the largest Jordan block of a quasi-unipotent `M`.
///
/// With `t` the quasi-unipotency order, `M^t` is unipotent and powering
/// preserves Jordan block sizes for nonzero eigenvalues.
pub fn largest_jordan_block_quasi(m: &IntMatrix) -> Result<usize> {
    let v = quasi_unipotency(m)?;
    let Some(t) = v.order() else {
        return Err(Error::NotQuasiUnipotent {
            witness: v.witness.map(|w| w.to_string()).unwrap_or_default(),
        });
    };
    Ok(unipotent_jordan_profile(&m.pow(t)?)?.largest)
}

/// Monic cofactor of `charpoly(M)` after removing every `(x - 1)` factor.
///
/// Nonconstant exactly when `M` is not unipotent; it then witnesses an
/// eigenvalue different from 1.
pub fn non_unipotent_factor(m: &IntMatrix) -> Result<Option<IntPoly>> {
    let cp = charpoly(m)?;
    let (_, rest) = cp.strip_factor(&IntPoly::x_minus(BigInt::from(1)));
    Ok((rest.degree().unwrap_or(0) > 0).then_some(rest))
}
