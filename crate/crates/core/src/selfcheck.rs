//! The built-in property suite, run by `projsimple selfcheck` and by the
//! acceptance test target.
//!
//! Each check draws its samples from its own seeded streams. Random suites use
//! `max(trials, minimum)` samples so a small `--trials` never drops a suite
//! below its required size.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{analyze, ProjectiveSimplicity};
use crate::error::Error;
use crate::json::dec_u64;
use crate::linalg::{charpoly, frobenius_invariants, unipotent_jordan_profile, IntMatrix, IntPoly};
use crate::model::{Block, BlockEndomorphism, FgAbelianGroup, GroupElement, Point, VarietyModel};
use crate::num_action::{p_matrix, p_matrix_endomorphism, scalar_2x2, GkOutcome};
use crate::random::{
    random_gl2, random_model, random_non_unipotent_automorphism, random_torsion_point,
    random_unimodular_pair, random_unipotent, random_unipotent_automorphism, random_unitriangular,
    trial_rng,
};
use crate::unipotency::{
    is_quasi_unipotent, is_unipotent, largest_jordan_block_quasi, max_quasi_unipotent_order,
    power_conjugacy_witness, quasi_unipotency,
};
use crate::wildness::{
    is_wild, orbit_set, verify_certificate, Automorphism, NonWildCertificate, Route,
};

pub const CHECK_COUNT: u32 = 13;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    #[serde(with = "dec_u64")]
    pub samples: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfCheckReport {
    pub schema_version: String,
    #[serde(with = "dec_u64")]
    pub seed: u64,
    #[serde(with = "dec_u64")]
    pub trials: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

struct Fail(String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(e.to_string())
    }
}

type Outcome = Result<(u64, String), Fail>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), Fail> {
    if cond {
        Ok(())
    } else {
        Err(Fail(msg()))
    }
}

fn at_least(trials: u64, min: u64) -> u64 {
    trials.max(min)
}

fn check_name(id: u32) -> &'static str {
    match id {
        1 => "determinant cube: det P_M = (det M)^3",
        2 => "scalar law: P(nI) = n^2 I",
        3 => "contravariant composition: P(MN) = P(N) P(M)",
        4 => "diagonal eigenvalues: charpoly P(diag(a,d)) = (x-a^2)(x-d^2)(x-ad)",
        5 => "GK-5 chain for the shear on E x E",
        6 => "translation rows: GK = dim + 1 for generating translations",
        7 => "wildness route equivalence",
        8 => "unipotent powers share invariant factors",
        9 => "quasi-unipotency deciders agree on curated suite",
        10 => "quasi-unipotency transfers between M and P_M",
        11 => "parity of j",
        12 => "negative wildness certificates verify",
        13 => "finite-order unipotent matrices are the identity",
        _ => "unknown",
    }
}

pub fn run_check(id: u32, seed: u64, trials: u64) -> CheckResult {
    let outcome = match id {
        1 => det_cube(seed, trials),
        2 => scalar_law(),
        3 => composition(seed, trials),
        4 => diagonal_eigenvalues(),
        5 => gk5_chain(),
        6 => translation_rows(),
        7 => route_equivalence(seed, trials),
        8 => unipotent_powers(seed, trials),
        9 => curated_agreement(),
        10 => qu_transfer(seed, trials),
        11 => parity(seed, trials),
        12 => negative_wildness(seed, trials),
        13 => finite_order_unipotent(seed, trials),
        _ => Err(Fail(format!("no check with id {id}"))),
    };
    let (passed, samples, detail) = match outcome {
        Ok((n, d)) => (true, n, d),
        Err(Fail(msg)) => (false, 0, msg),
    };
    CheckResult {
        id,
        name: check_name(id).into(),
        passed,
        samples,
        detail,
    }
}

pub fn run_selfcheck(seed: u64, trials: u64) -> SelfCheckReport {
    let checks: Vec<CheckResult> = (1..=CHECK_COUNT)
        .map(|id| run_check(id, seed, trials))
        .collect();
    SelfCheckReport {
        schema_version: crate::classify::SCHEMA_VERSION.into(),
        seed,
        trials,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn gl2_samples(seed: u64, suite: u64, n: u64) -> impl Iterator<Item = IntMatrix> {
    (0..n).map(move |t| random_gl2(&mut trial_rng(seed, suite, t), 12))
}

fn gl2_pairs(seed: u64, n: u64) -> impl Iterator<Item = (IntMatrix, IntMatrix)> {
    (0..n).map(move |t| {
        let mut rng = trial_rng(seed, 3, t);
        (random_gl2(&mut rng, 12), random_gl2(&mut rng, 12))
    })
}

fn nonzero_range(k: i64) -> impl Iterator<Item = i64> + Clone {
    (-k..=k).filter(|v| *v != 0)
}

fn det_cube(seed: u64, trials: u64) -> Outcome {
    let n = at_least(trials, 1000);
    for m in gl2_samples(seed, 1, n) {
        let det = m.det()?;
        let p = p_matrix(&m)?;
        ensure(p.det()? == &det * &det * &det, || {
            format!("det P != (det M)^3 for M = {m}")
        })?;
    }
    Ok((n, format!("{n} random GL2(Z) matrices")))
}

fn scalar_law() -> Outcome {
    let mut count = 0;
    for k in nonzero_range(10) {
        let p = p_matrix_endomorphism(&scalar_2x2(k))?;
        ensure(p == IntMatrix::scalar(3, BigInt::from(k * k)), || {
            format!("P({k} I) = {p}")
        })?;
        count += 1;
    }
    Ok((count, "n in [-10, 10] without 0".into()))
}

fn composition(seed: u64, trials: u64) -> Outcome {
    let m = IntMatrix::from_i64(&[[1, 1], [0, 1]]);
    let n = IntMatrix::from_i64(&[[1, 0], [1, 1]]);
    let pinned = p_matrix(&(&m * &n))?;
    ensure(
        pinned == IntMatrix::from_i64(&[[2, 0, 3], [-1, 0, -2], [2, 1, 6]]),
        || format!("pinned instance gave {pinned}"),
    )?;
    ensure(pinned == &p_matrix(&n)? * &p_matrix(&m)?, || {
        "pinned instance not contravariant".into()
    })?;
    let count = at_least(trials, 500);
    for (a, b) in gl2_pairs(seed, count) {
        let lhs = p_matrix(&(&a * &b))?;
        let rhs = &p_matrix(&b)? * &p_matrix(&a)?;
        ensure(lhs == rhs, || {
            format!("P(MN) != P(N)P(M) for M = {a}, N = {b}")
        })?;
    }
    Ok((
        count,
        format!("{count} random pairs plus the pinned instance"),
    ))
}

fn diagonal_eigenvalues() -> Outcome {
    let mut count = 0;
    for a in nonzero_range(5) {
        for d in nonzero_range(5) {
            let m = IntMatrix::from_i64(&[[a, 0], [0, d]]);
            let p = p_matrix_endomorphism(&m)?;
            let expected = &(&IntPoly::x_minus(BigInt::from(a * a))
                * &IntPoly::x_minus(BigInt::from(d * d)))
                * &IntPoly::x_minus(BigInt::from(a * d));
            let got = charpoly(&p)?;
            ensure(got == expected, || {
                format!("diag({a},{d}): charpoly {got}, expected {expected}")
            })?;
            count += 1;
        }
    }
    Ok((count, "a, d in [-5, 5] without 0".into()))
}

fn g(free: &[i64]) -> GroupElement {
    GroupElement::from_i64(free, &[])
}

fn gk_exact(gk: &GkOutcome) -> Option<u64> {
    gk.result().and_then(|r| r.exact)
}

fn gk5_chain() -> Outcome {
    let m = IntMatrix::from_i64(&[[1, 1], [0, 1]]);
    let p = p_matrix(&m)?;
    ensure(
        p == IntMatrix::from_i64(&[[0, 0, -1], [0, 1, 2], [1, 0, 2]]),
        || format!("P = {p}"),
    )?;
    let profile = unipotent_jordan_profile(&p)?;
    ensure(profile.block_sizes == vec![3], || {
        format!("Jordan blocks {:?}", profile.block_sizes)
    })?;
    let x = VarietyModel::power_of_curve(2, FgAbelianGroup::free(1));
    let sigma = Automorphism::new(
        &x,
        BlockEndomorphism::new(vec![m]),
        Point::new(vec![vec![g(&[0]), g(&[1])]]),
    )?;
    let r = analyze(&x, &sigma)?;
    ensure(r.j == Some(2), || format!("j = {:?}", r.j))?;
    ensure(gk_exact(&r.gk) == Some(5), || format!("GK {:?}", r.gk))?;
    ensure(
        r.wild.wild && r.projectively_simple == ProjectiveSimplicity::Yes,
        || "not wild".into(),
    )?;
    ensure(
        r.classification_label.as_deref() == Some("gk5-unipotent-dim2"),
        || format!("label {:?}", r.classification_label),
    )?;
    Ok((1, "P, Jordan block 3, j = 2, GK 5".into()))
}

fn translation_rows() -> Outcome {
    let gens =
        |grp: &FgAbelianGroup, n: usize| (0..n).map(|i| grp.generator(i)).collect::<Vec<_>>();
    let f2 = FgAbelianGroup::free(2);
    let mut cases: Vec<(VarietyModel, Point)> = Vec::new();
    for d in 1..=4 {
        let grp = FgAbelianGroup::free(d);
        cases.push((
            VarietyModel::power_of_curve(d, grp.clone()),
            Point::new(vec![gens(&grp, d)]),
        ));
    }
    // products of distinct factors, and a simple abelian surface
    for mults in [[1, 1], [2, 1], [2, 2]] {
        let x = VarietyModel::new(vec![
            Block::new("E1", mults[0], f2.clone()),
            Block::new("E2", mults[1], f2.clone()),
        ])?;
        let b = Point::new(mults.iter().map(|&k| gens(&f2, k)).collect());
        cases.push((x, b));
    }
    let surface = VarietyModel::new(vec![
        Block::new("A", 1, FgAbelianGroup::free(1)).with_factor_dim(2)
    ])?;
    cases.push((surface, Point::new(vec![vec![g(&[1])]])));

    for (x, b) in &cases {
        let d = x.dim() as u64;
        let r = analyze(x, &Automorphism::translation(x, b.clone())?)?;
        let label = format!("gk{}-translation-dim{d}", d + 1);
        ensure(r.wild.wild, || format!("translation on dim {d} not wild"))?;
        ensure(r.j == Some(0), || format!("j = {:?} on dim {d}", r.j))?;
        ensure(gk_exact(&r.gk) == Some(d + 1), || {
            format!("GK {:?} on dim {d}", r.gk)
        })?;
        ensure(
            r.classification_label.as_deref() == Some(label.as_str()),
            || format!("label {:?} on dim {d}", r.classification_label),
        )?;
        // a non-generating translation gets no label
        let r0 = analyze(x, &Automorphism::translation(x, x.zero_point())?)?;
        ensure(!r0.wild.wild && r0.classification_label.is_none(), || {
            format!("zero translation on dim {d}")
        })?;
    }
    Ok((
        cases.len() as u64,
        "dims 1-4, single and multi-block models".into(),
    ))
}

fn route_equivalence(seed: u64, trials: u64) -> Outcome {
    let n = at_least(trials, 500);
    let (mut wild, mut tame) = (0, 0);
    for t in 0..n {
        let mut rng = trial_rng(seed, 7, t);
        let x = random_model(&mut rng, 3, 4);
        let sparse = [0.0, 0.3, 0.6][rng.gen_range(0..3)];
        let sigma = random_unipotent_automorphism(&mut rng, &x, sparse);
        let q = is_wild(&x, &sigma, Route::Quotient)?;
        let s = is_wild(&x, &sigma, Route::SetGeneration)?;
        ensure(q.wild == s.wild, || format!("routes disagree on trial {t}"))?;
        for v in [&q, &s] {
            if let Some(c) = &v.certificate {
                ensure(verify_certificate(&x, &sigma, c)?, || {
                    format!("bad certificate on trial {t}")
                })?;
            }
        }
        if q.wild {
            wild += 1;
        } else {
            tame += 1;
        }
    }
    Ok((
        n,
        format!("{n} instances, {wild} wild, {tame} not wild, 0 disagreements"),
    ))
}

fn unipotent_powers(seed: u64, trials: u64) -> Outcome {
    let n = at_least(trials, 200);
    for t in 0..n {
        let mut rng = trial_rng(seed, 8, t);
        let dim = rng.gen_range(1..=5);
        let m = random_unipotent(&mut rng, dim);
        let base = frobenius_invariants(&m)?;
        let mut power = m.clone();
        for p in 2..=7 {
            power = &power * &m;
            ensure(frobenius_invariants(&power)? == base, || {
                format!("M^{p} not conjugate to M = {m}")
            })?;
        }
    }
    Ok((n, format!("{n} unipotent matrices up to 5x5, p = 1..7")))
}

fn curated_agreement() -> Outcome {
    let suite = [
        ("I", IntMatrix::identity(2)),
        ("-I", scalar_2x2(-1)),
        ("order 3", IntMatrix::from_i64(&[[0, -1], [1, -1]])),
        ("order 4", IntMatrix::from_i64(&[[0, -1], [1, 0]])),
        ("shear", IntMatrix::from_i64(&[[1, 1], [0, 1]])),
        ("hyperbolic", IntMatrix::from_i64(&[[2, 1], [1, 1]])),
    ];
    for (name, m) in &suite {
        let bound = 2 * max_quasi_unipotent_order(m.rows())?;
        let qu = is_quasi_unipotent(m)?;
        let w = power_conjugacy_witness(m, bound)?;
        ensure(qu == w.is_some(), || {
            format!("{name}: decider {qu}, witness {w:?}")
        })?;
    }
    let v = quasi_unipotency(&suite[5].1)?;
    let expected = IntPoly::from_i64(&[1, -3, 1]);
    ensure(v.witness.as_ref() == Some(&expected), || {
        format!("hyperbolic witness {:?}", v.witness)
    })?;
    Ok((
        suite.len() as u64,
        "I, -I, order 3, order 4, shear, hyperbolic".into(),
    ))
}

fn qu_transfer(seed: u64, trials: u64) -> Outcome {
    let n = at_least(trials, 500);
    let mut qu = 0;
    for m in gl2_samples(seed, 10, n) {
        let a = is_quasi_unipotent(&m)?;
        let b = is_quasi_unipotent(&p_matrix(&m)?)?;
        ensure(a == b, || format!("transfer fails for M = {m}"))?;
        qu += a as u64;
    }
    let minus = scalar_2x2(-1);
    ensure(p_matrix(&minus)?.is_identity(), || "P(-I) != I".into())?;
    ensure(!is_unipotent(&minus)?, || "-I reported unipotent".into())?;
    Ok((n, format!("{n} samples ({qu} quasi-unipotent), P(-I) = I")))
}

fn parity(seed: u64, trials: u64) -> Outcome {
    let mut ps: Vec<IntMatrix> = Vec::new();
    for m in gl2_samples(seed, 1, at_least(trials, 1000)).chain(gl2_samples(
        seed,
        10,
        at_least(trials, 500),
    )) {
        ps.push(p_matrix(&m)?);
    }
    for (a, b) in gl2_pairs(seed, at_least(trials, 500)) {
        ps.push(p_matrix(&(&a * &b))?);
    }
    for a in nonzero_range(5) {
        for d in nonzero_range(5) {
            ps.push(p_matrix_endomorphism(&IntMatrix::from_i64(&[
                [a, 0],
                [0, d],
            ]))?);
        }
    }
    ps.push(p_matrix(&IntMatrix::from_i64(&[[1, 1], [0, 1]]))?);
    let mut checked = 0;
    let mut seen_two = false;
    for p in &ps {
        if !is_quasi_unipotent(p)? {
            continue;
        }
        let j = largest_jordan_block_quasi(p)? - 1;
        ensure(j == 0 || j == 2, || format!("j = {j} for P = {p}"))?;
        seen_two |= j == 2;
        checked += 1;
    }
    ensure(seen_two, || "no sample with j = 2".into())?;
    Ok((
        checked,
        format!("{checked} quasi-unipotent P matrices, all j in {{0, 2}}"),
    ))
}

/// `Σ θ_i s_i = 0` on the certificate's block, for every `s` in the orbit set.
fn relation_holds(
    x: &VarietyModel,
    sigma: &Automorphism,
    block: usize,
    theta: &[BigInt],
) -> Result<bool, Fail> {
    let grp = &x.blocks()[block].point_group;
    let orbit = orbit_set(x, sigma)?;
    let nonzero = theta.iter().any(|c| !c.is_zero());
    Ok(nonzero
        && orbit
            .iter()
            .all(|s| grp.is_zero(&grp.combination(theta, &s.blocks[block]))))
}

fn negative_wildness(seed: u64, trials: u64) -> Outcome {
    let n = at_least(trials, 200);
    let (mut rel, mut fac) = (0, 0);
    for t in 0..n {
        let mut rng = trial_rng(seed, 12, t);
        let x = random_model(&mut rng, 3, 4);
        if t % 2 == 0 {
            let mut sigma = random_unipotent_automorphism(&mut rng, &x, 0.0);
            sigma.b = random_torsion_point(&mut rng, &x);
            for route in [Route::Quotient, Route::SetGeneration] {
                let v = is_wild(&x, &sigma, route)?;
                let Some(NonWildCertificate::RelationVector(c)) = &v.certificate else {
                    return Err(Fail(format!(
                        "trial {t}: torsion b without relation certificate"
                    )));
                };
                ensure(!v.wild, || format!("trial {t}: torsion b reported wild"))?;
                ensure(relation_holds(&x, &sigma, c.block, &c.theta)?, || {
                    format!("trial {t}: relation does not vanish on S")
                })?;
                ensure(
                    verify_certificate(&x, &sigma, v.certificate.as_ref().unwrap())?,
                    || format!("trial {t}: certificate rejected"),
                )?;
            }
            rel += 1;
        } else {
            let sigma = random_non_unipotent_automorphism(&mut rng, &x);
            let v = is_wild(&x, &sigma, Route::Quotient)?;
            let Some(NonWildCertificate::NonUnipotentFactor { block, factor }) = &v.certificate
            else {
                return Err(Fail(format!(
                    "trial {t}: non-unipotent alpha without factor certificate"
                )));
            };
            ensure(!v.wild && !v.alpha_unipotent, || {
                format!("trial {t}: verdict")
            })?;
            let cp = charpoly(&sigma.alpha.blocks[*block])?;
            ensure(cp.exact_div_monic(factor).is_some(), || {
                format!("trial {t}: factor does not divide")
            })?;
            ensure(!factor.eval(&BigInt::one()).is_zero(), || {
                format!("trial {t}: factor has root 1")
            })?;
            fac += 1;
        }
    }
    Ok((
        n,
        format!("{rel} relation certificates, {fac} factor certificates"),
    ))
}

fn finite_order_unipotent(seed: u64, trials: u64) -> Outcome {
    let n = at_least(trials, 200);
    let mut finite = 0;
    for t in 0..n {
        let mut rng = trial_rng(seed, 13, t);
        let dim = rng.gen_range(1..=5);
        // small entries so that identity samples actually occur
        let r = if rng.gen_bool(0.3) { 0 } else { 1 };
        let tri = random_unitriangular(&mut rng, dim, r);
        let (u, inv) = random_unimodular_pair(&mut rng, dim, 2 * dim);
        let m = &(&u * &tri) * &inv;
        ensure(is_unipotent(&m)?, || {
            format!("generator produced non-unipotent {m}")
        })?;
        let mut power = IntMatrix::identity(dim);
        for k in 1..=12 {
            power = &power * &m;
            if power.is_identity() {
                ensure(m.is_identity(), || format!("M^{k} = I but M = {m}"))?;
                finite += 1;
                break;
            }
        }
    }
    Ok((
        n,
        format!("{n} unipotent samples, {finite} of finite order, all equal to I"),
    ))
}
