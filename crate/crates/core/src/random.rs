//! Seeded generators for property suites.
//!
//! Every trial gets its own ChaCha stream derived from `(seed, suite, trial)`,
//! so results do not depend on execution order.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::IntMatrix;
use crate::model::{Block, BlockEndomorphism, FgAbelianGroup, GroupElement, Point, VarietyModel};
use crate::wildness::Automorphism;

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, suite: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite << 40) | trial);
    rng
}

fn nonzero<R: Rng>(rng: &mut R, k: i64) -> i64 {
    let v = rng.gen_range(1..=k);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// A product of 1 to `max_len` elementary matrices in `GL₂(Z)`:
/// shears `[[1,±1],[0,1]]`, `[[1,0],[±1,1]]` and sign flips.
pub fn random_gl2<R: Rng>(rng: &mut R, max_len: usize) -> IntMatrix {
    let len = rng.gen_range(1..=max_len);
    let mut m = IntMatrix::identity(2);
    for _ in 0..len {
        let s = nonzero(rng, 1);
        let e = match rng.gen_range(0..5) {
            0 | 1 => IntMatrix::from_i64(&[[1, s], [0, 1]]),
            2 | 3 => IntMatrix::from_i64(&[[1, 0], [s, 1]]),
            _ => {
                if s > 0 {
                    IntMatrix::from_i64(&[[-1, 0], [0, 1]])
                } else {
                    IntMatrix::from_i64(&[[1, 0], [0, -1]])
                }
            }
        };
        m = &m * &e;
    }
    m
}

/// A unimodular `U` together with `U⁻¹`, built from `steps` row operations.
pub fn random_unimodular_pair<R: Rng>(
    rng: &mut R,
    n: usize,
    steps: usize,
) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            u = u.scale(&BigInt::from(-1));
            inv = u.clone();
        }
        return (u, inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = BigInt::from(nonzero(rng, 2));
        // u <- E u with E = I + k e_ij; inv <- inv E⁻¹
        u.add_row_multiple(i, j, &k);
        inv.add_col_multiple(j, i, &(-&k));
    }
    (u, inv)
}

/// Upper unitriangular with entries above the diagonal in `[-r, r]`.
pub fn random_unitriangular<R: Rng>(rng: &mut R, n: usize, r: i64) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = BigInt::from(rng.gen_range(-r..=r));
        }
    }
    m
}

/// `U T U⁻¹` with `T` unitriangular.
pub fn random_unipotent<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let t = random_unitriangular(rng, n, 2);
    let (u, inv) = random_unimodular_pair(rng, n, 2 * n);
    &(&u * &t) * &inv
}

/// `U D U⁻¹` with `D` not unipotent: a `-1` on the diagonal, or an order-3
/// or order-4 rotation block when `n >= 2`.
pub fn random_non_unipotent<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    assert!(n >= 1);
    let mut d = random_unitriangular(rng, n, 1);
    let choice = if n >= 2 { rng.gen_range(0..3) } else { 0 };
    match choice {
        0 => {
            let i = rng.gen_range(0..n);
            for c in 0..n {
                d[(i, c)] = -&d[(i, c)];
            }
        }
        _ => {
            let rot = if choice == 1 {
                [[0, -1], [1, 0]]
            } else {
                [[0, -1], [1, -1]]
            };
            for (r, row) in rot.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    d[(r, c)] = BigInt::from(*v);
                }
            }
            for c in 2..n {
                d[(0, c)] = BigInt::from(0);
                d[(1, c)] = BigInt::from(0);
            }
        }
    }
    let (u, inv) = random_unimodular_pair(rng, n, 2 * n);
    &(&u * &d) * &inv
}

pub fn random_group<R: Rng>(rng: &mut R) -> FgAbelianGroup {
    let free_rank = rng.gen_range(0..=3);
    let torsion = match rng.gen_range(0..3) {
        0 => vec![],
        1 => vec![BigInt::from(rng.gen_range(2..=6))],
        _ => {
            let m = rng.gen_range(2..=3);
            vec![BigInt::from(m), BigInt::from(m * rng.gen_range(1..=3))]
        }
    };
    FgAbelianGroup::new(free_rank, torsion).expect("divisibility chain by construction")
}

/// Up to `max_blocks` blocks, each of multiplicity at most `max_mult`.
pub fn random_model<R: Rng>(rng: &mut R, max_blocks: usize, max_mult: usize) -> VarietyModel {
    let k = rng.gen_range(1..=max_blocks);
    let blocks = (0..k)
        .map(|i| {
            Block::new(
                format!("E{}", i + 1),
                rng.gen_range(1..=max_mult),
                random_group(rng),
            )
        })
        .collect();
    VarietyModel::new(blocks).expect("distinct factors by construction")
}

pub fn random_element<R: Rng>(rng: &mut R, g: &FgAbelianGroup, r: i64) -> GroupElement {
    let free = (0..g.free_rank())
        .map(|_| BigInt::from(rng.gen_range(-r..=r)))
        .collect();
    let torsion = g
        .torsion_invariants()
        .iter()
        .map(|m| BigInt::from(rng.gen_range(0..64)) % m)
        .collect();
    g.element(free, torsion).expect("shape by construction")
}

/// Random point; with probability `sparse` each coordinate is zero instead.
pub fn random_point<R: Rng>(rng: &mut R, x: &VarietyModel, sparse: f64) -> Point {
    let blocks = x
        .blocks()
        .iter()
        .map(|b| {
            (0..b.multiplicity)
                .map(|_| {
                    if rng.gen_bool(sparse) {
                        b.point_group.zero()
                    } else {
                        random_element(rng, &b.point_group, 3)
                    }
                })
                .collect()
        })
        .collect();
    Point::new(blocks)
}

/// Torsion-only point: every free coordinate is zero.
pub fn random_torsion_point<R: Rng>(rng: &mut R, x: &VarietyModel) -> Point {
    let mut p = random_point(rng, x, 0.0);
    for e in p.blocks.iter_mut().flatten() {
        e.free.iter_mut().for_each(|c| *c = BigInt::from(0));
    }
    p
}

pub fn random_unipotent_automorphism<R: Rng>(
    rng: &mut R,
    x: &VarietyModel,
    sparse: f64,
) -> Automorphism {
    let alpha = BlockEndomorphism::new(
        x.blocks()
            .iter()
            .map(|b| random_unipotent(rng, b.multiplicity))
            .collect(),
    );
    let b = random_point(rng, x, sparse);
    Automorphism::new(x, alpha, b).expect("unipotent blocks are invertible")
}

/// Like [`random_unipotent_automorphism`] but one block is not unipotent.
pub fn random_non_unipotent_automorphism<R: Rng>(rng: &mut R, x: &VarietyModel) -> Automorphism {
    let bad = rng.gen_range(0..x.blocks().len());
    let alpha = BlockEndomorphism::new(
        x.blocks()
            .iter()
            .enumerate()
            .map(|(i, b)| {
                if i == bad {
                    random_non_unipotent(rng, b.multiplicity)
                } else {
                    random_unipotent(rng, b.multiplicity)
                }
            })
            .collect(),
    );
    let b = random_point(rng, x, 0.2);
    Automorphism::new(x, alpha, b).expect("blocks are unimodular")
}
