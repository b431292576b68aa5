//! Wildness of `σ = T_b · α` on a modeled abelian variety.
//!
//! `σ` is wild iff `α` is unipotent and either of the following holds (they
//! are equivalent):
//!
//! * the orbit set `S = {b, β(b), β²(b), ...}` generates `X`, where
//!   `β = α - Id` (finite, since `β` is nilpotent);
//! * the image of `b` generates `X / β(X)`.
//!
//! Both routes are implemented independently; [`decide_wildness`] runs both
//! and refuses to answer if they disagree.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{charpoly, IntMatrix, IntPoly};
use crate::model::{
    apply_endo, generates_set, image_quotient, verify_relation, BlockEndomorphism, Point,
    RelationCertificate, VarietyModel,
};
use crate::unipotency::{is_unipotent, non_unipotent_factor};

/// `σ = T_b · α`, i.e. `σ(x) = α(x) + b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    pub alpha: BlockEndomorphism,
    pub b: Point,
}

impl Automorphism {
    /// Checks shapes and blockwise invertibility over `Z`; reduces `b`.
    pub fn new(x: &VarietyModel, alpha: BlockEndomorphism, b: Point) -> Result<Self> {
        x.check_endomorphism(&alpha)?;
        for (i, m) in alpha.blocks.iter().enumerate() {
            if !m.det()?.abs().is_one() {
                return Err(Error::Domain(format!(
                    "alpha block {i} has determinant {}; an automorphism needs ±1",
                    m.det()?
                )));
            }
        }
        let b = x.normalize_point(&b)?;
        Ok(Automorphism { alpha, b })
    }

    pub fn translation(x: &VarietyModel, b: Point) -> Result<Self> {
        Self::new(x, BlockEndomorphism::identity(x), b)
    }

    /// Re-validates against `x`; use after deserializing.
    pub fn validated(self, x: &VarietyModel) -> Result<Self> {
        Self::new(x, self.alpha, self.b)
    }

    pub fn is_translation(&self) -> bool {
        self.alpha.is_identity()
    }

    pub fn apply(&self, x: &VarietyModel, p: &Point) -> Result<Point> {
        let ap = apply_endo(x, &self.alpha, p)?;
        let blocks = x
            .blocks()
            .iter()
            .zip(ap.blocks.iter().zip(&self.b.blocks))
            .map(|(blk, (u, v))| {
                u.iter()
                    .zip(v)
                    .map(|(s, t)| blk.point_group.add(s, t))
                    .collect()
            })
            .collect();
        Ok(Point::new(blocks))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Quotient,
    SetGeneration,
}

/// Machine-checkable reason why `σ` is not wild.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonWildCertificate {
    /// A factor of `charpoly(α_block)` without the root 1.
    NonUnipotentFactor { block: usize, factor: IntPoly },
    /// `θ` kills `β(X)` and `b` on `block`, hence all of `S`.
    RelationVector(RelationCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WildnessVerdict {
    pub wild: bool,
    pub alpha_unipotent: bool,
    pub route: Route,
    pub certificate: Option<NonWildCertificate>,
}

fn non_unipotent_certificate(alpha: &BlockEndomorphism) -> Result<Option<NonWildCertificate>> {
    for (i, m) in alpha.blocks.iter().enumerate() {
        if !is_unipotent(m)? {
            let factor = non_unipotent_factor(m)?.ok_or_else(|| {
                Error::Consistency(format!(
                    "block {i} is not unipotent but charpoly is (x-1)^n"
                ))
            })?;
            return Ok(Some(NonWildCertificate::NonUnipotentFactor {
                block: i,
                factor,
            }));
        }
    }
    Ok(None)
}

/// `S = {b, β(b), ..., β^k(b)}` where `β^{k+1}(b) = 0`.
///
/// Requires `β` nilpotent; `k` is then below the largest block size.
pub fn orbit_set(x: &VarietyModel, sigma: &Automorphism) -> Result<Vec<Point>> {
    let beta = sigma.alpha.minus_identity()?;
    let cap = x.blocks().iter().map(|b| b.multiplicity).max().unwrap_or(0);
    let mut s = Vec::new();
    let mut cur = x.normalize_point(&sigma.b)?;
    for _ in 0..=cap {
        if x.is_zero_point(&cur) {
            return Ok(s);
        }
        let next = apply_endo(x, &beta, &cur)?;
        s.push(cur);
        cur = next;
    }
    Err(Error::Consistency(
        "beta is not nilpotent on b; orbit set did not terminate".into(),
    ))
}

pub fn is_wild(x: &VarietyModel, sigma: &Automorphism, route: Route) -> Result<WildnessVerdict> {
    let sigma = sigma.clone().validated(x)?;
    if let Some(cert) = non_unipotent_certificate(&sigma.alpha)? {
        return Ok(WildnessVerdict {
            wild: false,
            alpha_unipotent: false,
            route,
            certificate: Some(cert),
        });
    }
    let relation = match route {
        Route::SetGeneration => {
            let s = orbit_set(x, &sigma)?;
            generates_set(x, &s)?.certificate
        }
        Route::Quotient => {
            let beta = sigma.alpha.minus_identity()?;
            let q = image_quotient(x, &beta)?;
            let bar = q.project(x, &sigma.b)?;
            q.generates(x, &bar)?
                .certificate
                .map(|c| q.pull_back(&c))
                .transpose()?
        }
    };
    Ok(WildnessVerdict {
        wild: relation.is_none(),
        alpha_unipotent: true,
        route,
        certificate: relation.map(NonWildCertificate::RelationVector),
    })
}

/// Runs both routes; a disagreement is an internal consistency error.
///
/// Returns the quotient-route verdict.
pub fn decide_wildness(x: &VarietyModel, sigma: &Automorphism) -> Result<WildnessVerdict> {
    let q = is_wild(x, sigma, Route::Quotient)?;
    let s = is_wild(x, sigma, Route::SetGeneration)?;
    if q.wild != s.wild || q.alpha_unipotent != s.alpha_unipotent {
        return Err(Error::Consistency(format!(
            "wildness routes disagree: quotient says {}, set generation says {}",
            q.wild, s.wild
        )));
    }
    Ok(q)
}

/// Re-checks a non-wildness certificate from raw inputs: a relation must
/// vanish on every point of the orbit set.
pub fn verify_certificate(
    x: &VarietyModel,
    sigma: &Automorphism,
    cert: &NonWildCertificate,
) -> Result<bool> {
    match cert {
        NonWildCertificate::NonUnipotentFactor { block, factor } => {
            let Some(m) = sigma.alpha.blocks.get(*block) else {
                return Ok(false);
            };
            let divides = charpoly(m)?.exact_div_monic(factor).is_some();
            let no_root_one = !factor.eval(&BigInt::one()).is_zero();
            Ok(factor.degree().unwrap_or(0) > 0 && divides && no_root_one)
        }
        NonWildCertificate::RelationVector(rel) => {
            for m in &sigma.alpha.blocks {
                if !is_unipotent(m)? {
                    return Ok(false);
                }
            }
            verify_relation(x, &orbit_set(x, sigma)?, rel)
        }
    }
}

/// `σ^n = T_{γ(b)} · α^n` with `γ = Σ_{i<n} α^i`.
pub fn sigma_power(x: &VarietyModel, sigma: &Automorphism, n: u64) -> Result<Automorphism> {
    if n == 0 {
        return Err(Error::Domain("sigma_power needs n >= 1".into()));
    }
    x.check_endomorphism(&sigma.alpha)?;
    let gamma_blocks = sigma
        .alpha
        .blocks
        .iter()
        .map(|m| {
            let mut acc = IntMatrix::zeros(m.rows(), m.cols());
            let mut p = IntMatrix::identity(m.rows());
            for _ in 0..n {
                acc = &acc + &p;
                p = &p * m;
            }
            acc
        })
        .collect();
    let gamma = BlockEndomorphism::new(gamma_blocks);
    let b = apply_endo(x, &gamma, &sigma.b)?;
    Automorphism::new(x, sigma.alpha.pow(n)?, b)
}

/// Whether `X` admits a unipotent automorphism other than the identity:
/// exactly when some simple factor is repeated.
pub fn nonidentity_unipotent_exists(x: &VarietyModel) -> bool {
    x.blocks().iter().any(|b| b.multiplicity >= 2)
}
