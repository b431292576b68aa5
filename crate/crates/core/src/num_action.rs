//! Action of `σ` on `Num(X)`, the invariant `j`, and GK-dimension.
//!
//! Translations act trivially on `Num(X)`, so `σ = T_b · α` and `α` have the
//! same action. An explicit formula is only available for `X = E × E`, in
//! the basis `C¹ = 0 × E`, `C² = E × 0`, `C³ = diagonal`.
//!
//! `P` is contravariant: `P(MN) = P(N) · P(M)`, as for any pullback.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{dec_opt_u64, dec_u64};
use crate::linalg::IntMatrix;
use crate::model::VarietyModel;
use crate::unipotency::{largest_jordan_block_quasi, quasi_unipotency};
use crate::wildness::Automorphism;

/// `P_M` for `M ∈ GL₂(Z)` acting on `E × E`.
pub fn p_matrix(m: &IntMatrix) -> Result<IntMatrix> {
    let p = p_matrix_endomorphism(m)?;
    if !m.det()?.abs().is_one() {
        return Err(Error::Domain(format!(
            "p_matrix needs |det M| = 1, got det {}",
            m.det()?
        )));
    }
    Ok(p)
}

/// Same formula without the determinant check (any 2×2 endomorphism).
pub fn p_matrix_endomorphism(m: &IntMatrix) -> Result<IntMatrix> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::Dimension(format!(
            "p_matrix needs a 2x2 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let (a, b, c, d) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 0)], &m[(1, 1)]);
    let s = a + c;
    let t = b + d;
    let rows = vec![
        vec![a * a - a * b, c * c - c * d, &s * &s - &s * &t],
        vec![b * b - a * b, d * d - c * d, &t * &t - &s * &t],
        vec![a * b, c * d, &s * &t],
    ];
    IntMatrix::from_rows(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NumAction {
    IdentityOnNum,
    ExplicitMatrix { matrix: IntMatrix },
    Unavailable { reason: String },
}

pub const UNAVAILABLE_REASON: &str =
    "no explicit Num(X) formula for this model: only translations and E x E are covered";

/// The Num-action of `σ`, where one is known.
pub fn p_sigma(x: &VarietyModel, sigma: &Automorphism) -> Result<NumAction> {
    x.check_endomorphism(&sigma.alpha)?;
    if sigma.alpha.is_identity() {
        return Ok(NumAction::IdentityOnNum);
    }
    if x.is_square_of_elliptic_curve() {
        return Ok(NumAction::ExplicitMatrix {
            matrix: p_matrix(&sigma.alpha.blocks[0])?,
        });
    }
    Ok(NumAction::Unavailable {
        reason: UNAVAILABLE_REASON.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplenessVerdict {
    AllAmpleAreSigmaAmple,
    NoSigmaAmpleExists,
    Unknown,
}

pub fn ampleness_verdict(action: &NumAction) -> Result<AmplenessVerdict> {
    Ok(match action {
        NumAction::IdentityOnNum => AmplenessVerdict::AllAmpleAreSigmaAmple,
        NumAction::ExplicitMatrix { matrix } => {
            if quasi_unipotency(matrix)?.is_quasi_unipotent() {
                AmplenessVerdict::AllAmpleAreSigmaAmple
            } else {
                AmplenessVerdict::NoSigmaAmpleExists
            }
        }
        NumAction::Unavailable { .. } => AmplenessVerdict::Unknown,
    })
}

/// `j + d + 1 <= GKdim B <= j(d - 1) + d + 1` with `d = dim X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkResult {
    #[serde(with = "dec_opt_u64")]
    pub exact: Option<u64>,
    #[serde(with = "dec_u64")]
    pub lower: u64,
    #[serde(with = "dec_u64")]
    pub upper: u64,
    #[serde(with = "dec_opt_u64")]
    pub j: Option<u64>,
}

impl GkResult {
    pub fn from_j(dim: usize, j: u64) -> Self {
        let d = dim as u64;
        let lower = j + d + 1;
        let upper = j * d.saturating_sub(1) + d + 1;
        GkResult {
            exact: (lower == upper).then_some(lower),
            lower,
            upper,
            j: Some(j),
        }
    }
}

/// GK outcome as reported; unknown cases are never guessed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GkOutcome {
    Computed(GkResult),
    Unknown { reason: String },
    NoSigmaAmple { reason: String },
}

impl GkOutcome {
    pub fn result(&self) -> Option<&GkResult> {
        match self {
            GkOutcome::Computed(r) => Some(r),
            _ => None,
        }
    }
}

/// `j = (largest Jordan block of P) - 1`, with the parity facts enforced.
pub fn j_invariant(dim: usize, p: &IntMatrix) -> Result<u64> {
    let j = largest_jordan_block_quasi(p)? as u64 - 1;
    if !j.is_multiple_of(2) {
        return Err(Error::Consistency(format!("odd j = {j} for P = {p}")));
    }
    if dim == 2 && j > 2 {
        return Err(Error::Consistency(format!("j = {j} > 2 on a surface")));
    }
    Ok(j)
}

/// GK data from a Num-action on a variety of dimension `dim`.
///
/// A non-quasi-unipotent explicit action is an error: no σ-ample sheaf
/// exists, so the ring is not of the controlled kind.
pub fn gk_from_action(dim: usize, action: &NumAction) -> Result<Option<GkResult>> {
    match action {
        NumAction::IdentityOnNum => Ok(Some(GkResult::from_j(dim, 0))),
        NumAction::ExplicitMatrix { matrix } => {
            let v = quasi_unipotency(matrix)?;
            if !v.is_quasi_unipotent() {
                let witness = v.witness.map(|w| w.to_string()).unwrap_or_default();
                return Err(Error::NotQuasiUnipotent { witness });
            }
            Ok(Some(GkResult::from_j(dim, j_invariant(dim, matrix)?)))
        }
        NumAction::Unavailable { .. } => Ok(None),
    }
}

/// `None` means the bounds are unavailable for this model.
pub fn gk_dimension(x: &VarietyModel, sigma: &Automorphism) -> Result<Option<GkResult>> {
    gk_from_action(x.dim(), &p_sigma(x, sigma)?)
}

/// [`gk_from_action`] folded into a reportable outcome.
pub fn gk_outcome(dim: usize, action: &NumAction) -> Result<GkOutcome> {
    match gk_from_action(dim, action) {
        Ok(Some(r)) => Ok(GkOutcome::Computed(r)),
        Ok(None) => Ok(GkOutcome::Unknown {
            reason: UNAVAILABLE_REASON.into(),
        }),
        Err(Error::NotQuasiUnipotent { witness }) => Ok(GkOutcome::NoSigmaAmple {
            reason: format!(
                "P is not quasi-unipotent (factor {witness}); no sigma-ample sheaf exists"
            ),
        }),
        Err(e) => Err(e),
    }
}

/// `n · I₂`, used for the scalar law.
pub fn scalar_2x2(n: i64) -> IntMatrix {
    IntMatrix::scalar(2, BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{charpoly, IntPoly};
    use crate::model::{BlockEndomorphism, FgAbelianGroup, GroupElement, Point};

    #[test]
    fn shear() {
        let p = p_matrix(&IntMatrix::from_i64(&[[1, 1], [0, 1]])).unwrap();
        assert_eq!(p, IntMatrix::from_i64(&[[0, 0, -1], [0, 1, 2], [1, 0, 2]]));
        assert_eq!(j_invariant(2, &p).unwrap(), 2);
    }

    #[test]
    fn pinned_composition() {
        let m = IntMatrix::from_i64(&[[1, 1], [0, 1]]);
        let n = IntMatrix::from_i64(&[[1, 0], [1, 1]]);
        let pmn = p_matrix(&(&m * &n)).unwrap();
        assert_eq!(
            pmn,
            IntMatrix::from_i64(&[[2, 0, 3], [-1, 0, -2], [2, 1, 6]])
        );
        assert_eq!(pmn, &p_matrix(&n).unwrap() * &p_matrix(&m).unwrap());
    }

    #[test]
    fn scalars() {
        assert_eq!(
            p_matrix_endomorphism(&scalar_2x2(2)).unwrap(),
            IntMatrix::scalar(3, BigInt::from(4))
        );
        assert!(matches!(p_matrix(&scalar_2x2(2)), Err(Error::Domain(_))));
        assert!(p_matrix(&scalar_2x2(-1)).unwrap().is_identity());
        assert!(matches!(
            p_matrix(&IntMatrix::identity(3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn diagonal_is_triangular() {
        let p = p_matrix(&IntMatrix::from_i64(&[[-1, 0], [0, 1]])).unwrap();
        // diag (a², d², ad) = (1, 1, -1)
        assert_eq!(p[(0, 0)], BigInt::from(1));
        assert_eq!(p[(1, 1)], BigInt::from(1));
        assert_eq!(p[(2, 2)], BigInt::from(-1));
        assert_eq!(p[(1, 0)], BigInt::from(0));
        assert_eq!(p[(2, 0)], BigInt::from(0));
        assert_eq!(p[(2, 1)], BigInt::from(0));
        assert_eq!(
            charpoly(&p).unwrap(),
            &(&IntPoly::x_minus(1.into()) * &IntPoly::x_minus(1.into()))
                * &IntPoly::x_minus((-1).into())
        );
    }

    #[test]
    fn ampleness() {
        assert_eq!(
            ampleness_verdict(&NumAction::IdentityOnNum).unwrap(),
            AmplenessVerdict::AllAmpleAreSigmaAmple
        );
        let hyperbolic = p_matrix(&IntMatrix::from_i64(&[[2, 1], [1, 1]])).unwrap();
        let act = NumAction::ExplicitMatrix { matrix: hyperbolic };
        assert_eq!(
            ampleness_verdict(&act).unwrap(),
            AmplenessVerdict::NoSigmaAmpleExists
        );
        assert!(matches!(
            gk_from_action(2, &act),
            Err(Error::NotQuasiUnipotent { .. })
        ));
        assert!(matches!(
            gk_outcome(2, &act).unwrap(),
            GkOutcome::NoSigmaAmple { .. }
        ));
        let un = NumAction::Unavailable { reason: "x".into() };
        assert_eq!(ampleness_verdict(&un).unwrap(), AmplenessVerdict::Unknown);
    }

    #[test]
    fn gk_values() {
        let g = |k: usize| GroupElement::from_i64(&vec![0; k], &[]);
        for d in 1..=4usize {
            let x = VarietyModel::power_of_curve(d, FgAbelianGroup::free(d));
            let b = Point::new(vec![(0..d).map(|_| g(d)).collect()]);
            let s = Automorphism::translation(&x, b).unwrap();
            let r = gk_dimension(&x, &s).unwrap().unwrap();
            assert_eq!(r.exact, Some(d as u64 + 1));
            assert_eq!(r.j, Some(0));
        }
        let x = VarietyModel::power_of_curve(2, FgAbelianGroup::free(1));
        let s = Automorphism::new(
            &x,
            BlockEndomorphism::new(vec![IntMatrix::from_i64(&[[1, 1], [0, 1]])]),
            x.zero_point(),
        )
        .unwrap();
        let r = gk_dimension(&x, &s).unwrap().unwrap();
        assert_eq!((r.exact, r.lower, r.upper, r.j), (Some(5), 5, 5, Some(2)));

        let x3 = VarietyModel::power_of_curve(3, FgAbelianGroup::free(1));
        let m = IntMatrix::from_i64(&[[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let s3 = Automorphism::new(&x3, BlockEndomorphism::new(vec![m]), x3.zero_point()).unwrap();
        assert!(matches!(
            p_sigma(&x3, &s3).unwrap(),
            NumAction::Unavailable { .. }
        ));
        assert_eq!(gk_dimension(&x3, &s3).unwrap(), None);
    }

    #[test]
    fn bounds_shape() {
        let r = GkResult::from_j(3, 2);
        assert_eq!((r.lower, r.upper, r.exact), (6, 8, None));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["lower"], "6");
        assert!(json["exact"].is_null());
    }
}
