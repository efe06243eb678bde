//! Dense symmetric factorization, sized for correlation matrices.
//!
//! Covariance matrices here reach ~10⁴×10⁴, so the Cholesky is blocked and
//! the trailing update (the O(n³) part) runs on rayon. Only the lower
//! triangle is referenced or written; the strict upper triangle is left
//! untouched.

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix not positive definite: pivot {pivot:.3e} at index {index}")]
    NotPositiveDefinite { index: usize, pivot: f64 },
}

const BLOCK: usize = 128;

/// In-place lower Cholesky A = L·Lᵀ of a symmetric matrix in row-major
/// storage. On success the lower triangle of `a` holds L.
pub fn cholesky_in_place(a: &mut [f64], n: usize) -> Result<(), LinalgError> {
    assert_eq!(a.len(), n * n);
    let mut k = 0;
    while k < n {
        let kb = BLOCK.min(n - k);

        // factor the diagonal block A[k..k+kb, k..k+kb] serially
        for j in k..k + kb {
            let mut d = a[j * n + j];
            for p in k..j {
                d -= a[j * n + p] * a[j * n + p];
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(LinalgError::NotPositiveDefinite { index: j, pivot: d });
            }
            let djj = d.sqrt();
            a[j * n + j] = djj;
            let inv = 1.0 / djj;
            // column below the pivot, within the panel rows only for now
            for i in j + 1..k + kb {
                let mut s = a[i * n + j];
                for p in k..j {
                    s -= a[i * n + p] * a[j * n + p];
                }
                a[i * n + j] = s * inv;
            }
        }

        if k + kb < n {
            let base = k + kb;
            // panel solve: rows below the block, L[i, k..k+kb]
            let (done, rest) = a.split_at_mut(base * n);
            let diag = &done[k * n..];
            rest.par_chunks_mut(n).for_each(|row| {
                for j in k..k + kb {
                    let mut s = row[j];
                    for p in k..j {
                        s -= row[p] * diag[(j - k) * n + p];
                    }
                    row[j] = s / diag[(j - k) * n + j];
                }
            });

            // gather the solved panel contiguously, then apply the trailing
            // update A22 -= L21·L21ᵀ row-parallel against the read-only copy
            let ntr = n - base;
            let mut panel = vec![0.0f64; ntr * kb];
            for (r, row) in rest.chunks(n).enumerate() {
                panel[r * kb..(r + 1) * kb].copy_from_slice(&row[k..k + kb]);
            }
            rest.par_chunks_mut(n).enumerate().for_each(|(r, row)| {
                let li = &panel[r * kb..(r + 1) * kb];
                for j in base..=base + r {
                    let lj = &panel[(j - base) * kb..(j - base + 1) * kb];
                    let mut s = 0.0;
                    for p in 0..kb {
                        s += li[p] * lj[p];
                    }
                    row[j] -= s;
                }
            });
        }
        k += kb;
    }
    Ok(())
}

/// y = L·x for the lower triangle of `l` (as produced by
/// [`cholesky_in_place`]).
pub fn lower_times_vec(l: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    assert_eq!(l.len(), n * n);
    assert_eq!(x.len(), n);
    let mut y = vec![0.0; n];
    y.par_iter_mut().enumerate().for_each(|(i, yi)| {
        let row = &l[i * n..i * n + i + 1];
        let mut s = 0.0;
        for (p, &lv) in row.iter().enumerate() {
            s += lv * x[p];
        }
        *yi = s;
    });
    y
}
