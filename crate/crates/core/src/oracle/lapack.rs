//! Minimal FFI onto LAPACK's divide-and-conquer SVD drivers
//! (`dgesdd` / `zgesdd`) from the system OpenBLAS.
//!
//! Column-major throughout, which matches [`DenseMatrix`]'s layout, so
//! buffers pass straight through. BLAS-level threading is pinned to one
//! thread; parallelism belongs to the callers' trial loops.

use std::ffi::c_char;
use std::sync::Once;

use num_complex::Complex64;

use crate::error::{Error, Result};

extern "C" {
    fn openblas_set_num_threads(n: i32);

    fn dgesdd_(
        jobz: *const c_char,
        m: *const i32,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        s: *mut f64,
        u: *mut f64,
        ldu: *const i32,
        vt: *mut f64,
        ldvt: *const i32,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        info: *mut i32,
    );

    fn zgesdd_(
        jobz: *const c_char,
        m: *const i32,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        s: *mut f64,
        u: *mut Complex64,
        ldu: *const i32,
        vt: *mut Complex64,
        ldvt: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        iwork: *mut i32,
        info: *mut i32,
    );
}

fn single_threaded_blas() {
    static ONCE: Once = Once::new();
    ONCE.call_once(|| unsafe { openblas_set_num_threads(1) });
}

fn check_info(info: i32) -> Result<()> {
    match info {
        0 => Ok(()),
        i if i < 0 => panic!("gesdd: illegal argument {}", -i),
        i => Err(Error::OracleFailure(i)),
    }
}

/// Scalars with an economy (`jobz = 'S'`) gesdd binding. Overwrites `a`;
/// on success `u` is m x k, `s` holds k singular values (descending),
/// `vt` is k x n, with k = min(m, n).
pub trait GesddScalar: Sized + Copy {
    fn gesdd_econ(
        m: usize,
        n: usize,
        a: &mut [Self],
        s: &mut [f64],
        u: &mut [Self],
        vt: &mut [Self],
    ) -> Result<()>;
}

impl GesddScalar for f64 {
    fn gesdd_econ(
        m: usize,
        n: usize,
        a: &mut [f64],
        s: &mut [f64],
        u: &mut [f64],
        vt: &mut [f64],
    ) -> Result<()> {
        single_threaded_blas();
        let k = m.min(n);
        assert_eq!(a.len(), m * n);
        assert_eq!(s.len(), k);
        assert_eq!(u.len(), m * k);
        assert_eq!(vt.len(), k * n);

        let jobz = b'S' as c_char;
        let (mi, ni) = (m as i32, n as i32);
        let (ldu, ldvt) = (m as i32, k as i32);
        let mut iwork = vec![0i32; 8 * k];
        let mut info = 0i32;

        // workspace query
        let mut wkopt = 0.0f64;
        unsafe {
            dgesdd_(
                &jobz, &mi, &ni, a.as_mut_ptr(), &mi, s.as_mut_ptr(),
                u.as_mut_ptr(), &ldu, vt.as_mut_ptr(), &ldvt,
                &mut wkopt, &-1, iwork.as_mut_ptr(), &mut info,
            );
        }
        check_info(info)?;
        let lwork = wkopt as i32;
        let mut work = vec![0.0f64; lwork as usize];
        unsafe {
            dgesdd_(
                &jobz, &mi, &ni, a.as_mut_ptr(), &mi, s.as_mut_ptr(),
                u.as_mut_ptr(), &ldu, vt.as_mut_ptr(), &ldvt,
                work.as_mut_ptr(), &lwork, iwork.as_mut_ptr(), &mut info,
            );
        }
        check_info(info)
    }
}

impl GesddScalar for Complex64 {
    fn gesdd_econ(
        m: usize,
        n: usize,
        a: &mut [Complex64],
        s: &mut [f64],
        u: &mut [Complex64],
        vt: &mut [Complex64],
    ) -> Result<()> {
        single_threaded_blas();
        let k = m.min(n);
        assert_eq!(a.len(), m * n);
        assert_eq!(s.len(), k);
        assert_eq!(u.len(), m * k);
        assert_eq!(vt.len(), k * n);

        let jobz = b'S' as c_char;
        let (mi, ni) = (m as i32, n as i32);
        let (ldu, ldvt) = (m as i32, k as i32);
        let mx = m.max(n);
        let lrwork = k * (5 * k + 7).max(2 * mx + 2 * k + 1) + 64;
        let mut rwork = vec![0.0f64; lrwork];
        let mut iwork = vec![0i32; 8 * k];
        let mut info = 0i32;

        let mut wkopt = Complex64::new(0.0, 0.0);
        unsafe {
            zgesdd_(
                &jobz, &mi, &ni, a.as_mut_ptr(), &mi, s.as_mut_ptr(),
                u.as_mut_ptr(), &ldu, vt.as_mut_ptr(), &ldvt,
                &mut wkopt, &-1, rwork.as_mut_ptr(), iwork.as_mut_ptr(), &mut info,
            );
        }
        check_info(info)?;
        let lwork = wkopt.re as i32;
        let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
        unsafe {
            zgesdd_(
                &jobz, &mi, &ni, a.as_mut_ptr(), &mi, s.as_mut_ptr(),
                u.as_mut_ptr(), &ldu, vt.as_mut_ptr(), &ldvt,
                work.as_mut_ptr(), &lwork, rwork.as_mut_ptr(), iwork.as_mut_ptr(), &mut info,
            );
        }
        check_info(info)
    }
}
