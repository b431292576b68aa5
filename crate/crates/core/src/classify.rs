//! End-to-end analysis of `σ = T_b · α` on a modeled abelian variety.
//!
//! `B(X, L, σ)` with `L` σ-ample is projectively simple iff `σ` is wild. The
//! verdict is only given when σ-ample sheaves are known to exist.
//!
//! Classification rows (GK-dimension at most 5):
//!
//! | label                    | X       | σ                                   | GK |
//! |--------------------------|---------|-------------------------------------|----|
//! | `gk2-translation-dim1`   | dim 1   | `T_b`, `b` generates `X`            | 2  |
//! | `gk3-translation-dim2`   | dim 2   | `T_b`, `b` generates `X`            | 3  |
//! | `gk4-translation-dim3`   | dim 3   | `T_b`, `b` generates `X`            | 4  |
//! | `gk5-translation-dim4`   | dim 4   | `T_b`, `b` generates `X`            | 5  |
//! | `gk5-unipotent-dim2`     | `E × E` | `α ≠ Id` unipotent, `b̄` generates `X/(α - Id)(X)` | 5 |

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::json::dec_opt_u64;
use crate::model::VarietyModel;
use crate::num_action::{
    ampleness_verdict, gk_outcome, p_sigma, AmplenessVerdict, GkOutcome, NumAction,
};
use crate::unipotency::quasi_unipotency;
use crate::wildness::{decide_wildness, Automorphism, WildnessVerdict};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProjectiveSimplicity {
    Yes,
    No,
    NotApplicable { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: String,
    pub model: VarietyModel,
    pub automorphism: Automorphism,
    pub alpha_unipotent: bool,
    pub wild: WildnessVerdict,
    pub num_action: NumAction,
    #[serde(with = "dec_opt_u64")]
    pub j: Option<u64>,
    pub gk: GkOutcome,
    pub sigma_ample_verdict: AmplenessVerdict,
    pub projectively_simple: ProjectiveSimplicity,
    pub classification_label: Option<String>,
}

/// σ-ampleness from the Num-action, falling back on `α` itself when no
/// explicit action is known: a quasi-unipotent `α` always induces a
/// quasi-unipotent action on `Num(X)`.
pub fn sigma_ampleness(sigma: &Automorphism, action: &NumAction) -> Result<AmplenessVerdict> {
    let v = ampleness_verdict(action)?;
    if v != AmplenessVerdict::Unknown {
        return Ok(v);
    }
    for m in &sigma.alpha.blocks {
        if !quasi_unipotency(m)?.is_quasi_unipotent() {
            return Ok(AmplenessVerdict::Unknown);
        }
    }
    Ok(AmplenessVerdict::AllAmpleAreSigmaAmple)
}

pub fn projective_simplicity(wild: bool, ample: AmplenessVerdict) -> ProjectiveSimplicity {
    match (ample, wild) {
        (AmplenessVerdict::AllAmpleAreSigmaAmple, true) => ProjectiveSimplicity::Yes,
        (AmplenessVerdict::AllAmpleAreSigmaAmple, false) => ProjectiveSimplicity::No,
        (AmplenessVerdict::NoSigmaAmpleExists, _) => ProjectiveSimplicity::NotApplicable {
            reason: "no sigma-ample invertible sheaf exists, so B(X,L,sigma) is not covered".into(),
        },
        (AmplenessVerdict::Unknown, _) => ProjectiveSimplicity::NotApplicable {
            reason: "sigma-ampleness could not be decided for this model".into(),
        },
    }
}

/// The classification row matched by a wild `σ`, if any.
pub fn classification_label(x: &VarietyModel, sigma: &Automorphism, wild: bool) -> Option<String> {
    if !wild {
        return None;
    }
    let d = x.dim();
    if sigma.is_translation() {
        return (1..=4)
            .contains(&d)
            .then(|| format!("gk{}-translation-dim{d}", d + 1));
    }
    x.is_square_of_elliptic_curve()
        .then(|| "gk5-unipotent-dim2".to_string())
}

pub fn analyze(x: &VarietyModel, sigma: &Automorphism) -> Result<AnalysisReport> {
    let sigma = sigma.clone().validated(x)?;
    let wild = decide_wildness(x, &sigma)?;
    let num_action = p_sigma(x, &sigma)?;
    let gk = gk_outcome(x.dim(), &num_action)?;
    let j = gk.result().and_then(|r| r.j);
    let ample = sigma_ampleness(&sigma, &num_action)?;
    let label = classification_label(x, &sigma, wild.wild);
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION.into(),
        model: x.clone(),
        alpha_unipotent: wild.alpha_unipotent,
        projectively_simple: projective_simplicity(wild.wild, ample),
        automorphism: sigma,
        wild,
        num_action,
        j,
        gk,
        sigma_ample_verdict: ample,
        classification_label: label,
    })
}
