use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use projsimple::classify::{analyze, ProjectiveSimplicity};
use projsimple::linalg::IntMatrix;
use projsimple::model::{
    apply_endo, generates_point, image_quotient, BlockEndomorphism, Point, VarietyModel,
};
use projsimple::num_action::AmplenessVerdict;
use projsimple::random::{
    random_model, random_non_unipotent_automorphism, random_point, random_unimodular_pair,
    random_unipotent_automorphism, trial_rng, TrialRng,
};
use projsimple::unipotency::is_unipotent;
use projsimple::wildness::{decide_wildness, sigma_power, Automorphism};

fn random_endo(rng: &mut TrialRng, x: &VarietyModel) -> BlockEndomorphism {
    BlockEndomorphism::new(
        x.blocks()
            .iter()
            .map(|b| {
                let n = b.multiplicity;
                let v = (0..n * n)
                    .map(|_| BigInt::from(rng.gen_range(-2..=2)))
                    .collect();
                IntMatrix::from_vec(n, n, v).unwrap()
            })
            .collect(),
    )
}

fn random_automorphism(rng: &mut TrialRng, x: &VarietyModel) -> Automorphism {
    if rng.gen_bool(0.3) {
        random_non_unipotent_automorphism(rng, x)
    } else {
        let sparse = [0.0, 0.4][rng.gen_range(0..2)];
        random_unipotent_automorphism(rng, x, sparse)
    }
}

/// Every block's free coordinates have full row rank (Bareiss rank, not the
/// kernel computation the library uses).
fn generates_by_rank(x: &VarietyModel, p: &Point) -> bool {
    x.blocks().iter().zip(&p.blocks).all(|(b, elems)| {
        let rows: Vec<Vec<BigInt>> = elems.iter().map(|e| e.free.clone()).collect();
        let cols = b.point_group.free_rank();
        let m = IntMatrix::from_vec(b.multiplicity, cols, rows.concat()).unwrap();
        m.rank() == b.multiplicity
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generation_is_basis_independent(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 200, 0);
        let x = random_model(&mut rng, 3, 4);
        let a = random_point(&mut rng, &x, 0.2);
        let u = BlockEndomorphism::new(
            x.blocks().iter().map(|b| random_unimodular_pair(&mut rng, b.multiplicity, 6).0).collect(),
        );
        let ua = apply_endo(&x, &u, &a).unwrap();
        let v = generates_point(&x, &a).unwrap();
        prop_assert_eq!(v.generates, generates_point(&x, &ua).unwrap().generates);
        prop_assert_eq!(v.generates, generates_by_rank(&x, &a));
    }

    #[test]
    fn projection_kills_image(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 201, 0);
        let x = random_model(&mut rng, 3, 4);
        let beta = random_endo(&mut rng, &x);
        let q = image_quotient(&x, &beta).unwrap();
        for _ in 0..4 {
            let p = random_point(&mut rng, &x, 0.0);
            let img = q.project(&x, &apply_endo(&x, &beta, &p).unwrap()).unwrap();
            for (b, elems) in x.blocks().iter().zip(&img.blocks) {
                prop_assert!(elems.iter().all(|e| b.point_group.is_zero(e)));
            }
        }
    }

    #[test]
    fn wildness_is_power_stable(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 202, 0);
        let x = random_model(&mut rng, 2, 3);
        let sigma = random_automorphism(&mut rng, &x);
        let w = decide_wildness(&x, &sigma).unwrap().wild;
        for n in [2, 3, 5] {
            let sn = sigma_power(&x, &sigma, n).unwrap();
            prop_assert_eq!(decide_wildness(&x, &sn).unwrap().wild, w);
        }
    }

    #[test]
    fn wild_implies_unipotent(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 203, 0);
        let x = random_model(&mut rng, 3, 3);
        let sigma = random_automorphism(&mut rng, &x);
        let v = decide_wildness(&x, &sigma).unwrap();
        prop_assert_eq!(v.certificate.is_none(), v.wild);
        if v.wild {
            for m in &sigma.alpha.blocks {
                prop_assert!(is_unipotent(m).unwrap());
            }
            if x.blocks().iter().all(|b| b.multiplicity == 1) {
                prop_assert!(sigma.is_translation());
            }
        }
    }

    #[test]
    fn classification_is_sound(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 204, 0);
        let x = if rng.gen_bool(0.5) {
            random_model(&mut rng, 2, 2)
        } else {
            VarietyModel::power_of_curve(2, projsimple::random::random_group(&mut rng))
        };
        let sigma = if rng.gen_bool(0.3) {
            Automorphism::translation(&x, random_point(&mut rng, &x, 0.2)).unwrap()
        } else {
            random_automorphism(&mut rng, &x)
        };
        let r = analyze(&x, &sigma).unwrap();
        if r.sigma_ample_verdict == AmplenessVerdict::AllAmpleAreSigmaAmple {
            prop_assert_eq!(r.projectively_simple == ProjectiveSimplicity::Yes, r.wild.wild);
        }
        let Some(label) = r.classification_label else { return Ok(()); };
        let d = x.dim();
        if sigma.alpha.is_identity() {
            prop_assert_eq!(label, format!("gk{}-translation-dim{}", d + 1, d));
            prop_assert!(generates_by_rank(&x, &sigma.b));
        } else {
            prop_assert_eq!(label.as_str(), "gk5-unipotent-dim2");
            prop_assert!(x.blocks().len() == 1 && x.blocks()[0].multiplicity == 2 && d == 2);
            let m = &sigma.alpha.blocks[0];
            prop_assert_eq!(m.trace().unwrap(), BigInt::from(2));
            prop_assert!(m.det().unwrap().is_one());
            // β = M - I has rank 1; θ = (r, -p) or (s, -q) spans its left kernel.
            let beta = m.minus_identity().unwrap();
            let (p, q, rr, s) = (&beta[(0, 0)], &beta[(0, 1)], &beta[(1, 0)], &beta[(1, 1)]);
            let theta = if p.is_zero() && rr.is_zero() { [s.clone(), -q] } else { [rr.clone(), -p] };
            let b = &sigma.b.blocks[0];
            let combo: Vec<BigInt> = (0..b[0].free.len())
                .map(|k| &theta[0] * &b[0].free[k] + &theta[1] * &b[1].free[k])
                .collect();
            prop_assert!(combo.iter().any(|c| !c.is_zero()));
        }
    }
}
