use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{IntMatrix, IntPoly};
use crate::error::{Error, Result};

/// Characteristic polynomial `det(xI - M)`.
///
/// Faddeev–LeVerrier recurrence; every division by `k` is exact over the
/// integers, so no rationals are needed. The 0x0 matrix gives `1`.
pub fn charpoly(m: &IntMatrix) -> Result<IntPoly> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "charpoly requires a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        mk = &(m * &mk) + &IntMatrix::scalar(n, c[n - k + 1].clone());
        let t = (m * &mk).trace()?;
        let (q, r) = t.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
        c[n - k] = -q;
    }
    Ok(IntPoly::new(c))
}
