//! Scalar field abstraction over double-precision real and complex numbers.
//!
//! Everything in this crate is generic over [`Scalar`], which has exactly
//! two instantiations: `f64` and [`Complex64`]. Real data is stored and
//! processed as plain `f64`, not as complex numbers with zero imaginary
//! part, which halves memory traffic in the kernels.
//!
//! The inner-product convention is conjugate-linear in the first slot:
//! `<u, v> = u* v = sum_i conj(u_i) v_i`.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::{One, Zero};

/// Which scalar field a matrix or vector lives over.
///
/// Used by file formats and reports; the type-level choice is made by
/// picking `f64` or `Complex64` for the [`Scalar`] parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A double-precision real or complex scalar.
pub trait Scalar:
    Copy
    + Clone
    + Debug
    + Display
    + Default
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    const FIELD: Field;

    /// Complex conjugate (identity for reals). An involution.
    fn conj(self) -> Self;

    fn re(self) -> f64;

    fn im(self) -> f64;

    /// `|z|^2 = z * conj(z)`, computed without a square root; always a
    /// non-negative real.
    fn abs_sq(self) -> f64;

    fn abs(self) -> f64 {
        self.abs_sq().sqrt()
    }

    fn from_re(re: f64) -> Self;

    /// Build from real and imaginary parts; the imaginary part is
    /// discarded for the real field.
    fn from_re_im(re: f64, im: f64) -> Self;

    /// Multiply by a real factor.
    fn scale(self, k: f64) -> Self;

    fn is_finite_scalar(self) -> bool;

    /// One standard draw from a normal source. Real scalars consume one
    /// variate; complex scalars consume two (real part first, then
    /// imaginary), so both parts are independent standard normals.
    fn from_normal_source(next: &mut dyn FnMut() -> f64) -> Self;
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    #[inline(always)]
    fn conj(self) -> Self {
        self
    }

    #[inline(always)]
    fn re(self) -> f64 {
        self
    }

    #[inline(always)]
    fn im(self) -> f64 {
        0.0
    }

    #[inline(always)]
    fn abs_sq(self) -> f64 {
        self * self
    }

    #[inline(always)]
    fn abs(self) -> f64 {
        f64::abs(self)
    }

    #[inline(always)]
    fn from_re(re: f64) -> Self {
        re
    }

    #[inline(always)]
    fn from_re_im(re: f64, _im: f64) -> Self {
        re
    }

    #[inline(always)]
    fn scale(self, k: f64) -> Self {
        self * k
    }

    #[inline(always)]
    fn is_finite_scalar(self) -> bool {
        self.is_finite()
    }

    #[inline]
    fn from_normal_source(next: &mut dyn FnMut() -> f64) -> Self {
        next()
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    #[inline(always)]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }

    #[inline(always)]
    fn re(self) -> f64 {
        self.re
    }

    #[inline(always)]
    fn im(self) -> f64 {
        self.im
    }

    #[inline(always)]
    fn abs_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    #[inline(always)]
    fn from_re(re: f64) -> Self {
        Complex64::new(re, 0.0)
    }

    #[inline(always)]
    fn from_re_im(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }

    #[inline(always)]
    fn scale(self, k: f64) -> Self {
        Complex64::new(self.re * k, self.im * k)
    }

    #[inline(always)]
    fn is_finite_scalar(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    #[inline]
    fn from_normal_source(next: &mut dyn FnMut() -> f64) -> Self {
        let re = next();
        let im = next();
        Complex64::new(re, im)
    }
}
