//! Small dense linear algebra over an arbitrary [`Scalar`].

use alloc::vec::Vec;

use crate::scalar::Scalar;

/// Solves `A x = b` by Gaussian elimination with partial pivoting
/// (largest magnitude for float rings, first nonzero for exact ones).
///
/// `a` is row-major and square. Returns `None` if `A` is singular.
pub fn solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    for col in 0..n {
        let pivot = if S::EXACT {
            (col..n).find(|&r| !a[r][col].is_zero())?
        } else {
            let (r, m) = (col..n)
                .map(|r| (r, a[r][col].magnitude()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if m <= 0.0 || a[r][col].is_zero() {
                return None;
            }
            r
        };
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].inv()?;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].times(&inv);
            for c in col..n {
                let v = a[r][c].minus(&factor.times(&a[col][c]));
                a[r][c] = v;
            }
            b[r] = b[r].minus(&factor.times(&b[col]));
        }
    }
    let mut x = alloc::vec![S::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc.minus(&a[r][c].times(&x[c]));
        }
        x[r] = acc.div(&a[r][r])?;
    }
    Some(x)
}
