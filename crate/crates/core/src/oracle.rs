//! Dense matrix-exponential propagation, used to cross-check the
//! spectral route on small rings. Not a production path.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dynamics::WalkKind;
use crate::error::{Error, Result};
use crate::model::HamiltonianMatrix;

/// Largest ring accepted by [`propagate`].
pub const ORACLE_GUARD: usize = 64;

const TAYLOR_TERMS: usize = 24;

/// `exp(A)` by scaling and squaring with a truncated Taylor kernel.
///
/// The matrix is scaled by `2^-s` until its 1-norm is at most 1/2, where
/// 24 Taylor terms are accurate far beyond double precision.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    assert!(a.is_square(), "expm requires a square matrix");
    let n = a.nrows();
    let norm = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.map(|z| z * 2f64.powi(-squarings));

    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=TAYLOR_TERMS {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Probabilities at every node after time `t` for a walk started at node 0,
/// from `exp(-i H t)` (quantum) or `exp(-H t)` (classical).
pub fn propagate(h: &HamiltonianMatrix, t: f64, kind: WalkKind) -> Result<Vec<f64>> {
    let n = h.dim();
    if n > ORACLE_GUARD {
        return Err(Error::GuardExceeded {
            n,
            limit: ORACLE_GUARD,
            hint: "the dense oracle is meant for small rings",
        });
    }
    let factor = match kind {
        WalkKind::Quantum => Complex64::new(0.0, -t),
        WalkKind::Classical => Complex64::new(-t, 0.0),
    };
    let generator = h.entries().map(|x| factor * x);
    let u = expm(&generator);
    Ok(u.column(0)
        .iter()
        .map(|z| match kind {
            WalkKind::Quantum => z.norm_sqr(),
            WalkKind::Classical => z.re,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_exponential() {
        let a = DMatrix::from_element(1, 1, Complex64::new(3.0, 1.5));
        let e = expm(&a)[(0, 0)];
        let want = Complex64::new(3.0, 1.5).exp();
        assert!((e - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn rotation_generator() {
        // exp([[0, -x], [x, 0]]) is a rotation by x.
        let x = 7.3;
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(-x, 0.0),
                Complex64::new(x, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let e = expm(&a);
        assert!((e[(0, 0)].re - x.cos()).abs() < 1e-12);
        assert!((e[(1, 0)].re - x.sin()).abs() < 1e-12);
    }
}
