use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use projsimple::linalg::{
    charpoly, frobenius_invariants, left_kernel, snf, unipotent_jordan_profile, IntMatrix, IntPoly,
};
use projsimple::random::{random_unimodular_pair, random_unipotent, trial_rng};

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn square(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(move |n| {
        prop::collection::vec(-bound..=bound, n * n).prop_map(move |v| {
            IntMatrix::from_vec(n, n, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

/// Cofactor expansion; an oracle independent of the library's elimination.
fn det_cofactor(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut acc = BigRational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigRational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det_cofactor(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `det(tI - M)` at `t = 0..=n`, then Lagrange interpolation.
fn charpoly_oracle(m: &IntMatrix) -> Vec<BigRational> {
    let n = m.rows();
    let points: Vec<(BigRational, BigRational)> = (0..=n as i64)
        .map(|t| {
            let rows: Vec<Vec<BigRational>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let diag = if i == j {
                                BigInt::from(t)
                            } else {
                                BigInt::zero()
                            };
                            BigRational::from_integer(diag - &m[(i, j)])
                        })
                        .collect()
                })
                .collect();
            (
                BigRational::from_integer(BigInt::from(t)),
                det_cofactor(&rows),
            )
        })
        .collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{k != i} (x - x_k) / (x_i - x_k)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (k, (xk, _)) in points.iter().enumerate() {
            if k == i {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * xk;
            }
            basis = next;
            denom *= xi - xk;
        }
        for (d, c) in basis.iter().enumerate() {
            coeffs[d] += c * yi / &denom;
        }
    }
    coeffs
}

fn as_rational(p: &IntPoly, len: usize) -> Vec<BigRational> {
    let mut v: Vec<BigRational> = p
        .coefficients()
        .iter()
        .cloned()
        .map(BigRational::from_integer)
        .collect();
    v.resize(len, BigRational::zero());
    v
}

fn conjugate(m: &IntMatrix, seed: u64) -> IntMatrix {
    let (u, inv) = random_unimodular_pair(&mut trial_rng(seed, 100, 0), m.rows(), 3 * m.rows());
    &(&inv * m) * &u
}

fn product(ps: &[IntPoly]) -> IntPoly {
    ps.iter().fold(IntPoly::one(), |acc, p| &acc * p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_round_trip(m in matrix(6, 50)) {
        let s = snf(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        if m.rows() > 0 {
            prop_assert!(s.u.det().unwrap().abs().is_one());
        }
        if m.cols() > 0 {
            prop_assert!(s.v.det().unwrap().abs().is_one());
        }
        prop_assert_eq!(s.rank, m.rank());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|d| d.is_positive()));
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn left_kernel_properties(m in matrix(6, 5)) {
        let k = left_kernel(&m);
        prop_assert_eq!(k.rows(), m.rows() - m.rank());
        prop_assert_eq!(k.cols(), m.rows());
        if k.rows() > 0 && m.cols() > 0 {
            prop_assert!((&k * &m).is_zero());
        }
        prop_assert_eq!(k.rank() + m.rank(), m.rows());
        // saturated: the kernel lattice has trivial elementary divisors
        prop_assert!(snf(&k).invariant_factors().iter().all(|d| d.is_one()));
    }

    #[test]
    fn charpoly_matches_interpolation(m in square(5, 9)) {
        let p = charpoly(&m).unwrap();
        prop_assert!(p.is_monic());
        prop_assert_eq!(as_rational(&p, m.rows() + 1), charpoly_oracle(&m));
    }

    #[test]
    fn charpoly_is_conjugation_invariant(m in square(5, 9), seed in any::<u64>()) {
        prop_assert_eq!(charpoly(&conjugate(&m, seed)).unwrap(), charpoly(&m).unwrap());
    }

    #[test]
    fn frobenius_chain(m in square(5, 4), seed in any::<u64>()) {
        let f = frobenius_invariants(&m).unwrap();
        prop_assert_eq!(product(&f), charpoly(&m).unwrap());
        for w in f.windows(2) {
            prop_assert!(w[1].exact_div_monic(&w[0]).is_some());
        }
        prop_assert_eq!(frobenius_invariants(&conjugate(&m, seed)).unwrap(), f);
    }

    #[test]
    fn jordan_blocks_sum_to_dimension(n in 1usize..=6, seed in any::<u64>()) {
        let m = random_unipotent(&mut trial_rng(seed, 101, 0), n);
        let prof = unipotent_jordan_profile(&m).unwrap();
        prop_assert_eq!(prof.block_sizes.iter().sum::<usize>(), n);
        prop_assert_eq!(prof.largest, prof.block_sizes[0]);
        let nil = m.minus_identity().unwrap();
        prop_assert!(nil.pow(prof.largest as u64).unwrap().is_zero());
        if prof.largest > 1 {
            prop_assert!(!nil.pow(prof.largest as u64 - 1).unwrap().is_zero());
        }
    }
}

#[test]
fn oracle_sanity() {
    let m = IntMatrix::from_i64(&[[0, -1], [1, 0]]);
    let expect: Vec<BigRational> = [1, 0, 1]
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect();
    assert_eq!(charpoly_oracle(&m), expect);
}
