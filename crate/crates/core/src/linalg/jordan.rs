use serde::{Deserialize, Serialize};

use super::IntMatrix;
use crate::error::{Error, Result};

/// Jordan block sizes of a unipotent matrix (all for eigenvalue 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanProfile {
    /// Block sizes, largest first.
    pub block_sizes: Vec<usize>,
    /// Size of the largest block; the nilpotency index of `M - I`.
    pub largest: usize,
}

/// Jordan profile of a unipotent `M` from the rank sequence of `N = M - I`.
///
/// With `r_k = rank(N^k)`, the number of blocks of size `>= k` is
/// `r_{k-1} - r_k`.
pub fn unipotent_jordan_profile(m: &IntMatrix) -> Result<JordanProfile> {
    let n_mat = m.minus_identity()?;
    let n = m.rows();
    let mut ranks = vec![n];
    let mut power = IntMatrix::identity(n);
    for _ in 0..n {
        power = &power * &n_mat;
        let r = power.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    if *ranks.last().unwrap() != 0 {
        return Err(Error::NotUnipotent { dim: n });
    }
    let largest = ranks.len() - 1;
    // at_least[k-1] = #blocks with size >= k
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut block_sizes = Vec::new();
    for k in (1..=largest).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        block_sizes.extend(std::iter::repeat_n(k, exactly));
    }
    Ok(JordanProfile {
        block_sizes,
        largest,
    })
}
