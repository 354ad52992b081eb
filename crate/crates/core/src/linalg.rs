//! Thin safe wrappers over the LAPACK routines we need: dense symmetric
//! eigensolves, LDLᵀ factorization (for inertia counts and solves) and
//! tridiagonal eigenvalues.

use crate::error::{IcecError, Result};

// openblas-src only provides the link directive; reference it so the
// crate is not pruned.
extern crate openblas_src;

/// Result of a dense symmetric eigendecomposition. Eigenvalues ascending;
/// eigenvectors, when requested, stored column-major (column k pairs with
/// values[k]).
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<f64>>,
}

/// Eigendecomposition of a symmetric n×n matrix in full storage via
/// dsyevd. Consumes the matrix (LAPACK overwrites it).
pub fn sym_eigen(mut a: Vec<f64>, n: usize, want_vectors: bool) -> Result<SymEigen> {
    assert_eq!(a.len(), n * n);
    let jobz = if want_vectors { b'V' } else { b'N' };
    let uplo = b'L';
    let ni = n as i32;
    let mut w = vec![0.0f64; n];
    let mut info = 0i32;
    // workspace query
    let mut work_q = [0.0f64];
    let mut iwork_q = [0i32];
    unsafe {
        lapack_sys::dsyevd_(
            &jobz as *const u8 as *const i8,
            &uplo as *const u8 as *const i8,
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work_q.as_mut_ptr(),
            &(-1i32),
            iwork_q.as_mut_ptr(),
            &(-1i32),
            &mut info,
        );
    }
    if info != 0 {
        return Err(IcecError::Lapack {
            routine: "dsyevd (workspace query)",
            info,
        });
    }
    let lwork = work_q[0] as usize;
    let liwork = iwork_q[0] as usize;
    let mut work = vec![0.0f64; lwork.max(1)];
    let mut iwork = vec![0i32; liwork.max(1)];
    unsafe {
        lapack_sys::dsyevd_(
            &jobz as *const u8 as *const i8,
            &uplo as *const u8 as *const i8,
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &(lwork as i32),
            iwork.as_mut_ptr(),
            &(liwork as i32),
            &mut info,
        );
    }
    if info != 0 {
        return Err(IcecError::Lapack {
            routine: "dsyevd",
            info,
        });
    }
    Ok(SymEigen {
        values: w,
        vectors: want_vectors.then_some(a),
    })
}

/// LDLᵀ (Bunch-Kaufman) factorization of a symmetric matrix, usable both
/// for Sylvester inertia counts and for repeated linear solves.
pub struct LdltFactor {
    n: usize,
    a: Vec<f64>,
    ipiv: Vec<i32>,
}

impl LdltFactor {
    pub fn new(mut a: Vec<f64>, n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let uplo = b'L';
        let ni = n as i32;
        let mut ipiv = vec![0i32; n];
        let mut info = 0i32;
        let mut work_q = [0.0f64];
        unsafe {
            lapack_sys::dsytrf_(
                &uplo as *const u8 as *const i8,
                &ni,
                a.as_mut_ptr(),
                &ni,
                ipiv.as_mut_ptr(),
                work_q.as_mut_ptr(),
                &(-1i32),
                &mut info,
            );
        }
        if info != 0 {
            return Err(IcecError::Lapack {
                routine: "dsytrf (workspace query)",
                info,
            });
        }
        let lwork = work_q[0] as usize;
        let mut work = vec![0.0f64; lwork.max(1)];
        unsafe {
            lapack_sys::dsytrf_(
                &uplo as *const u8 as *const i8,
                &ni,
                a.as_mut_ptr(),
                &ni,
                ipiv.as_mut_ptr(),
                work.as_mut_ptr(),
                &(lwork as i32),
                &mut info,
            );
        }
        if info != 0 {
            return Err(IcecError::Lapack {
                routine: "dsytrf",
                info,
            });
        }
        Ok(Self { n, a, ipiv })
    }

    /// Number of negative eigenvalues, read off the 1×1 and 2×2 blocks of
    /// the D factor (Sylvester's law of inertia).
    pub fn negative_count(&self) -> usize {
        let n = self.n;
        let at = |r: usize, c: usize| self.a[r + c * n];
        let mut neg = 0usize;
        let mut k = 0usize;
        while k < n {
            if self.ipiv[k] > 0 {
                if at(k, k) < 0.0 {
                    neg += 1;
                }
                k += 1;
            } else {
                let d11 = at(k, k);
                let d22 = at(k + 1, k + 1);
                let d21 = at(k + 1, k);
                let det = d11 * d22 - d21 * d21;
                if det < 0.0 {
                    neg += 1; // one of each sign
                } else if d11 + d22 < 0.0 {
                    neg += 2;
                }
                k += 2;
            }
        }
        neg
    }

    /// Solve A x = b in place.
    pub fn solve_in_place(&self, b: &mut [f64]) -> Result<()> {
        assert_eq!(b.len(), self.n);
        let uplo = b'L';
        let ni = self.n as i32;
        let one = 1i32;
        let mut info = 0i32;
        unsafe {
            lapack_sys::dsytrs_(
                &uplo as *const u8 as *const i8,
                &ni,
                &one,
                self.a.as_ptr() as *mut f64,
                &ni,
                self.ipiv.as_ptr() as *mut i32,
                b.as_mut_ptr(),
                &ni,
                &mut info,
            );
        }
        if info != 0 {
            return Err(IcecError::Lapack {
                routine: "dsytrs",
                info,
            });
        }
        Ok(())
    }
}

/// Eigenvalues (ascending) of a symmetric tridiagonal matrix with
/// diagonal `d` and off-diagonal `e` via dsterf.
pub fn tridiag_eigenvalues(d: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    assert_eq!(e.len() + 1, d.len());
    let mut dv = d.to_vec();
    let mut ev = e.to_vec();
    let ni = dv.len() as i32;
    let mut info = 0i32;
    unsafe {
        lapack_sys::dsterf_(&ni, dv.as_mut_ptr(), ev.as_mut_ptr(), &mut info);
    }
    if info != 0 {
        return Err(IcecError::Lapack {
            routine: "dsterf",
            info,
        });
    }
    Ok(dv)
}
