//! Symbolic model of an abelian variety `X = ∏ E_i^{n_i}`.
//!
//! # Modeling assumptions
//!
//! * Every simple factor `E_i` has `End(E_i) = Z` and distinct factors are
//!   pairwise non-isogenous, so `Hom(E_i, E_j) = 0` and
//!   `End(X) = ∏ M_{n_i}(Z)`. Factors flagged as having complex
//!   multiplication are rejected.
//! * The points we care about lie in a declared finitely generated subgroup
//!   of each factor, `Z^r ⊕ ⊕ Z/m_j`. The free generators are in general
//!   position: the only relations among declared points are the declared
//!   torsion relations.
//!
//! Under these assumptions generation is decidable. A tuple
//! `(a_1, ..., a_n) ∈ E^n` generates `E^n` iff no nonzero `θ ∈ Z^n` has
//! `Σ θ_i a_i = 0`, and a product of pairwise Hom-free blocks is generated iff
//! each block is.
//!
//! Only the free parts matter for the verdict: if `θ` kills the free parts,
//! then `k θ` also kills the torsion parts, where `k` is the order of the
//! torsion residue. Certificates are scaled by that `k`, so they are exact
//! relations in the group.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::dec_vec;
use crate::linalg::{left_kernel, snf, IntMatrix};

/// `Z^free_rank ⊕ Z/m_1 ⊕ ... ⊕ Z/m_k` with `m_1 | m_2 | ... | m_k`, `m_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct FgAbelianGroup {
    free_rank: usize,
    #[serde(with = "dec_vec")]
    torsion: Vec<BigInt>,
}

#[derive(Deserialize)]
struct RawGroup {
    free_rank: usize,
    #[serde(default, with = "dec_vec")]
    torsion: Vec<BigInt>,
}

impl TryFrom<RawGroup> for FgAbelianGroup {
    type Error = Error;

    fn try_from(raw: RawGroup) -> Result<Self> {
        FgAbelianGroup::new(raw.free_rank, raw.torsion)
    }
}

/// Element of an [`FgAbelianGroup`]: free coordinates plus torsion residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(with = "dec_vec")]
    pub free: Vec<BigInt>,
    #[serde(default, with = "dec_vec")]
    pub torsion: Vec<BigInt>,
}

impl GroupElement {
    pub fn from_i64(free: &[i64], torsion: &[i64]) -> Self {
        GroupElement {
            free: free.iter().map(|&x| BigInt::from(x)).collect(),
            torsion: torsion.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn is_torsion(&self) -> bool {
        self.free.iter().all(Zero::is_zero)
    }
}

impl FgAbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        if let Some(m) = torsion.iter().find(|m| **m < BigInt::from(2)) {
            return Err(Error::InvalidModel(format!(
                "torsion invariant {m} must be at least 2"
            )));
        }
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::InvalidModel(
                "torsion invariants must form a divisibility chain".into(),
            ));
        }
        Ok(FgAbelianGroup { free_rank, torsion })
    }

    pub fn free(free_rank: usize) -> Self {
        FgAbelianGroup {
            free_rank,
            torsion: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_invariants(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    /// The `i`-th free generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut e = self.zero();
        e.free[i] = BigInt::one();
        e
    }

    /// Validates shape and reduces torsion coordinates into `[0, m_i)`.
    pub fn element(&self, free: Vec<BigInt>, torsion: Vec<BigInt>) -> Result<GroupElement> {
        if free.len() != self.free_rank || torsion.len() != self.torsion.len() {
            return Err(Error::ShapeMismatch(format!(
                "element has {} free / {} torsion coordinates, group expects {} / {}",
                free.len(),
                torsion.len(),
                self.free_rank,
                self.torsion.len()
            )));
        }
        Ok(self.reduce(GroupElement { free, torsion }))
    }

    pub fn normalize(&self, e: &GroupElement) -> Result<GroupElement> {
        self.element(e.free.clone(), e.torsion.clone())
    }

    fn reduce(&self, mut e: GroupElement) -> GroupElement {
        for (t, m) in e.torsion.iter_mut().zip(&self.torsion) {
            *t = t.mod_floor(m);
        }
        e
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.reduce(GroupElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .map(|(x, y)| x + y)
                .collect(),
        })
    }

    pub fn scale(&self, k: &BigInt, a: &GroupElement) -> GroupElement {
        self.reduce(GroupElement {
            free: a.free.iter().map(|x| x * k).collect(),
            torsion: a.torsion.iter().map(|x| x * k).collect(),
        })
    }

    /// `Σ coeffs[i] * elems[i]`
    pub fn combination(&self, coeffs: &[BigInt], elems: &[GroupElement]) -> GroupElement {
        coeffs
            .iter()
            .zip(elems)
            .fold(self.zero(), |acc, (c, e)| self.add(&acc, &self.scale(c, e)))
    }

    pub fn is_zero(&self, a: &GroupElement) -> bool {
        a.free.iter().all(Zero::is_zero)
            && a.torsion
                .iter()
                .zip(&self.torsion)
                .all(|(t, m)| t.is_multiple_of(m))
    }

    /// Order of the torsion part of `a` (ignoring free coordinates).
    pub fn torsion_order(&self, a: &GroupElement) -> BigInt {
        a.torsion
            .iter()
            .zip(&self.torsion)
            .fold(BigInt::one(), |acc, (t, m)| acc.lcm(&(m / t.gcd(m))))
    }
}

/// One isotypic block `E^n` of the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub factor: String,
    #[serde(default = "one_usize")]
    pub factor_dim: usize,
    pub multiplicity: usize,
    pub point_group: FgAbelianGroup,
    /// Complex multiplication flag; such factors are outside the model.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub cm: bool,
}

fn one_usize() -> usize {
    1
}

impl Block {
    pub fn new(
        factor: impl Into<String>,
        multiplicity: usize,
        point_group: FgAbelianGroup,
    ) -> Self {
        Block {
            factor: factor.into(),
            factor_dim: 1,
            multiplicity,
            point_group,
            cm: false,
        }
    }

    pub fn with_factor_dim(mut self, factor_dim: usize) -> Self {
        self.factor_dim = factor_dim;
        self
    }
}

/// `X = ∏ E_i^{n_i}` with distinct, pairwise non-isogenous factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawVariety")]
pub struct VarietyModel {
    blocks: Vec<Block>,
}

#[derive(Deserialize)]
struct RawVariety {
    blocks: Vec<Block>,
}

impl TryFrom<RawVariety> for VarietyModel {
    type Error = Error;

    fn try_from(raw: RawVariety) -> Result<Self> {
        VarietyModel::new(raw.blocks)
    }
}

impl VarietyModel {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidModel(
                "a variety needs at least one block".into(),
            ));
        }
        let mut seen = HashSet::new();
        for b in &blocks {
            if !seen.insert(b.factor.as_str()) {
                return Err(Error::InvalidModel(format!(
                    "factor {:?} listed twice; merge it into one block with a multiplicity",
                    b.factor
                )));
            }
            if b.cm {
                return Err(Error::InvalidModel(format!(
                    "factor {:?} has complex multiplication; only End = Z factors are supported",
                    b.factor
                )));
            }
            if b.multiplicity == 0 || b.factor_dim == 0 {
                return Err(Error::InvalidModel(format!(
                    "factor {:?} needs positive multiplicity and dimension",
                    b.factor
                )));
            }
        }
        Ok(VarietyModel { blocks })
    }

    /// Single block `E^n` with `E` an elliptic curve.
    pub fn power_of_curve(n: usize, point_group: FgAbelianGroup) -> Self {
        VarietyModel {
            blocks: vec![Block::new("E", n, point_group)],
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.multiplicity * b.factor_dim)
            .sum()
    }

    /// `X = E x E` for a single elliptic curve without CM.
    pub fn is_square_of_elliptic_curve(&self) -> bool {
        matches!(self.blocks.as_slice(), [b] if b.multiplicity == 2 && b.factor_dim == 1)
    }

    /// Checks a point's shape and returns it with torsion reduced.
    pub fn normalize_point(&self, p: &Point) -> Result<Point> {
        if p.blocks.len() != self.blocks.len() {
            return Err(Error::ShapeMismatch(format!(
                "point has {} blocks, model has {}",
                p.blocks.len(),
                self.blocks.len()
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&p.blocks)
            .enumerate()
            .map(|(i, (b, entries))| {
                if entries.len() != b.multiplicity {
                    return Err(Error::ShapeMismatch(format!(
                        "block {i} of the point has {} entries, expected {}",
                        entries.len(),
                        b.multiplicity
                    )));
                }
                entries.iter().map(|e| b.point_group.normalize(e)).collect()
            })
            .collect::<Result<_>>()?;
        Ok(Point { blocks })
    }

    pub fn zero_point(&self) -> Point {
        Point {
            blocks: self
                .blocks
                .iter()
                .map(|b| vec![b.point_group.zero(); b.multiplicity])
                .collect(),
        }
    }

    pub fn is_zero_point(&self, p: &Point) -> bool {
        self.blocks
            .iter()
            .zip(&p.blocks)
            .all(|(b, es)| es.iter().all(|e| b.point_group.is_zero(e)))
    }

    pub fn check_endomorphism(&self, phi: &BlockEndomorphism) -> Result<()> {
        if phi.blocks.len() != self.blocks.len() {
            return Err(Error::ShapeMismatch(format!(
                "endomorphism has {} blocks, model has {}",
                phi.blocks.len(),
                self.blocks.len()
            )));
        }
        for (i, (b, m)) in self.blocks.iter().zip(&phi.blocks).enumerate() {
            if m.rows() != b.multiplicity || m.cols() != b.multiplicity {
                return Err(Error::ShapeMismatch(format!(
                    "block {i} matrix is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols(),
                    n = b.multiplicity
                )));
            }
        }
        Ok(())
    }
}

/// A point of `X`: per block, `n_i` elements of that block's point group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    pub blocks: Vec<Vec<GroupElement>>,
}

impl Point {
    pub fn new(blocks: Vec<Vec<GroupElement>>) -> Self {
        Point { blocks }
    }
}

/// An element of `End(X) = ∏ M_{n_i}(Z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockEndomorphism {
    pub blocks: Vec<IntMatrix>,
}

impl BlockEndomorphism {
    pub fn new(blocks: Vec<IntMatrix>) -> Self {
        BlockEndomorphism { blocks }
    }

    pub fn identity(x: &VarietyModel) -> Self {
        BlockEndomorphism {
            blocks: x
                .blocks
                .iter()
                .map(|b| IntMatrix::identity(b.multiplicity))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(IntMatrix::is_identity)
    }

    pub fn minus_identity(&self) -> Result<Self> {
        Ok(BlockEndomorphism {
            blocks: self
                .blocks
                .iter()
                .map(IntMatrix::minus_identity)
                .collect::<Result<_>>()?,
        })
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &BlockEndomorphism) -> Result<Self> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::ShapeMismatch("block counts differ".into()));
        }
        Ok(BlockEndomorphism {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.checked_mul(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn pow(&self, n: u64) -> Result<Self> {
        Ok(BlockEndomorphism {
            blocks: self
                .blocks
                .iter()
                .map(|m| m.pow(n))
                .collect::<Result<_>>()?,
        })
    }
}

/// Applies `φ` blockwise: output entry `i` is `Σ_j M[i][j] p_j`.
pub fn apply_endo(x: &VarietyModel, phi: &BlockEndomorphism, p: &Point) -> Result<Point> {
    x.check_endomorphism(phi)?;
    let p = x.normalize_point(p)?;
    let blocks = x
        .blocks
        .iter()
        .zip(&phi.blocks)
        .zip(&p.blocks)
        .map(|((b, m), entries)| {
            (0..m.rows())
                .map(|i| b.point_group.combination(m.row(i), entries))
                .collect()
        })
        .collect();
    Ok(Point { blocks })
}

/// A nonzero `θ ∈ Z^{n_i}` with `Σ θ_j s_j = 0` in block `block` for every
/// point `s` of the tested set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCertificate {
    pub block: usize,
    #[serde(with = "dec_vec")]
    pub theta: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationVerdict {
    pub generates: bool,
    pub certificate: Option<RelationCertificate>,
}

impl GenerationVerdict {
    fn from_relation(rel: Option<RelationCertificate>) -> Self {
        GenerationVerdict {
            generates: rel.is_none(),
            certificate: rel,
        }
    }
}

/// A relation killing every entry tuple in `sets` (each of length `n`), or
/// `None` if the tuples generate `E^n`.
fn block_relation(
    group: &FgAbelianGroup,
    n: usize,
    sets: &[&[GroupElement]],
) -> Option<Vec<BigInt>> {
    if n == 0 {
        return None;
    }
    if sets.is_empty() {
        let mut theta = vec![BigInt::zero(); n];
        theta[0] = BigInt::one();
        return Some(theta);
    }
    let r = group.free_rank();
    // n x (r * |S|): row j holds the free coordinates of entry j of each s.
    let mut coeffs = IntMatrix::zeros(n, r * sets.len());
    for (k, entries) in sets.iter().enumerate() {
        for (j, e) in entries.iter().enumerate() {
            for (c, v) in e.free.iter().enumerate() {
                coeffs[(j, k * r + c)] = v.clone();
            }
        }
    }
    let kernel = left_kernel(&coeffs);
    if kernel.rows() == 0 {
        return None;
    }
    let theta = kernel.row(0).to_vec();
    let k = sets.iter().fold(BigInt::one(), |acc, entries| {
        acc.lcm(&group.torsion_order(&group.combination(&theta, entries)))
    });
    Some(theta.into_iter().map(|t| t * &k).collect())
}

/// Does the set `S` generate `X`? Blocks are decided independently.
///
/// An empty set never generates a positive-dimensional `X`; its certificate
/// is the first unit vector of block 0, which satisfies the (vacuous)
/// relation condition.
pub fn generates_set(x: &VarietyModel, s: &[Point]) -> Result<GenerationVerdict> {
    let pts: Vec<Point> = s
        .iter()
        .map(|p| x.normalize_point(p))
        .collect::<Result<_>>()?;
    for (i, b) in x.blocks.iter().enumerate() {
        let sets: Vec<&[GroupElement]> = pts.iter().map(|p| p.blocks[i].as_slice()).collect();
        if let Some(theta) = block_relation(&b.point_group, b.multiplicity, &sets) {
            return Ok(GenerationVerdict::from_relation(Some(
                RelationCertificate { block: i, theta },
            )));
        }
    }
    Ok(GenerationVerdict::from_relation(None))
}

pub fn generates_point(x: &VarietyModel, a: &Point) -> Result<GenerationVerdict> {
    generates_set(x, std::slice::from_ref(a))
}

/// Checks a relation certificate by direct evaluation on every point of `s`.
pub fn verify_relation(x: &VarietyModel, s: &[Point], cert: &RelationCertificate) -> Result<bool> {
    let Some(b) = x.blocks.get(cert.block) else {
        return Ok(false);
    };
    if cert.theta.len() != b.multiplicity || cert.theta.iter().all(Zero::is_zero) {
        return Ok(false);
    }
    for p in s {
        let p = x.normalize_point(p)?;
        let v = b
            .point_group
            .combination(&cert.theta, &p.blocks[cert.block]);
        if !b.point_group.is_zero(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientBlock {
    /// Rank of `β` on this block.
    pub rank: usize,
    /// `(n - rank) x n` projection onto `E^{n - rank} ≅ E^n / β(E^n)`.
    pub projection: IntMatrix,
}

/// `X / β(X)` described blockwise through the Smith form of `β`.
///
/// With `D = U β V`, `β(E^n) = U^{-1}(E^r x 0)` since every `d E = E`; the
/// quotient map is `p ↦` the last `n - r` coordinates of `U p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientModel {
    pub blocks: Vec<QuotientBlock>,
}

pub fn image_quotient(x: &VarietyModel, beta: &BlockEndomorphism) -> Result<QuotientModel> {
    x.check_endomorphism(beta)?;
    let blocks = beta
        .blocks
        .iter()
        .map(|m| {
            let s = snf(m);
            QuotientBlock {
                rank: s.rank,
                projection: s.u.row_slice(s.rank, m.rows()),
            }
        })
        .collect();
    Ok(QuotientModel { blocks })
}

impl QuotientModel {
    pub fn dim(&self, x: &VarietyModel) -> usize {
        self.blocks
            .iter()
            .zip(&x.blocks)
            .map(|(q, b)| q.projection.rows() * b.factor_dim)
            .sum()
    }

    /// Image of `p` in the quotient; block `i` has `n_i - r_i` entries.
    pub fn project(&self, x: &VarietyModel, p: &Point) -> Result<Point> {
        let p = x.normalize_point(p)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&x.blocks)
            .zip(&p.blocks)
            .map(|((q, b), entries)| {
                (0..q.projection.rows())
                    .map(|i| b.point_group.combination(q.projection.row(i), entries))
                    .collect()
            })
            .collect();
        Ok(Point { blocks })
    }

    /// Does the projected point `bar` generate the quotient?
    ///
    /// A certificate, if any, is given in quotient coordinates; use
    /// [`QuotientModel::pull_back`] to express it on `X`.
    pub fn generates(&self, x: &VarietyModel, bar: &Point) -> Result<GenerationVerdict> {
        if bar.blocks.len() != self.blocks.len() {
            return Err(Error::ShapeMismatch(
                "quotient point has the wrong block count".into(),
            ));
        }
        for (i, ((q, b), entries)) in self
            .blocks
            .iter()
            .zip(&x.blocks)
            .zip(&bar.blocks)
            .enumerate()
        {
            let n = q.projection.rows();
            if entries.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "quotient block {i} expects {n} entries"
                )));
            }
            if let Some(theta) = block_relation(&b.point_group, n, &[entries.as_slice()]) {
                return Ok(GenerationVerdict::from_relation(Some(
                    RelationCertificate { block: i, theta },
                )));
            }
        }
        Ok(GenerationVerdict::from_relation(None))
    }

    /// `θ_q ↦ θ_q · projection`, a functional on `X` vanishing on `β(X)`.
    pub fn pull_back(&self, cert: &RelationCertificate) -> Result<RelationCertificate> {
        let q = self
            .blocks
            .get(cert.block)
            .ok_or_else(|| Error::ShapeMismatch("certificate block out of range".into()))?;
        Ok(RelationCertificate {
            block: cert.block,
            theta: q.projection.left_apply(&cert.theta)?,
        })
    }
}
