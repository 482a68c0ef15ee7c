//! Extended-precision real and complex arithmetic used across the workbench:
//! raw double-double values for synthesis-grade error bounds, and a
//! digit-limited mode that rounds every operation to `p` significant decimal
//! digits to emulate a finite-precision backend.

mod dd;
mod pfloat;

pub use dd::Dd;
pub use pfloat::{set_thread_digits, thread_digits, PFloat};

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Real scalar usable as statevector amplitude component.
pub trait RealScalar:
    Clone
    + Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    /// cos/sin of an f64 angle, evaluated at (at least) the scalar's precision.
    fn cos_sin_of(angle: f64) -> (Self, Self);
    /// 1/sqrt(2), the Hadamard and T-gate constant, carried with guard digits
    /// beyond the scalar's working precision where that distinction exists.
    fn inv_sqrt2() -> Self;
    /// Upper bound on the relative roundoff of one arithmetic operation.
    fn unit_roundoff() -> f64;
}

impl RealScalar for f64 {
    fn zero() -> f64 {
        0.0
    }
    fn one() -> f64 {
        1.0
    }
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn cos_sin_of(angle: f64) -> (f64, f64) {
        let (s, c) = angle.sin_cos();
        (c, s)
    }
    fn inv_sqrt2() -> f64 {
        std::f64::consts::FRAC_1_SQRT_2
    }
    fn unit_roundoff() -> f64 {
        f64::EPSILON / 2.0
    }
}

impl RealScalar for Dd {
    fn zero() -> Dd {
        Dd::ZERO
    }
    fn one() -> Dd {
        Dd::ONE
    }
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn sqrt(self) -> Dd {
        Dd::sqrt(self)
    }
    fn cos_sin_of(angle: f64) -> (Dd, Dd) {
        let (s, c) = Dd::from_f64(angle).sin_cos();
        (c, s)
    }
    fn inv_sqrt2() -> Dd {
        Dd::from_f64(0.5).sqrt()
    }
    fn unit_roundoff() -> f64 {
        1e-31
    }
}

/// Complex number over any real scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: RealScalar> Complex<T> {
    pub fn new(re: T, im: T) -> Self {
        Complex { re, im }
    }
    pub fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    pub fn one() -> Self {
        Complex::new(T::one(), T::zero())
    }
    pub fn i() -> Self {
        Complex::new(T::zero(), T::one())
    }
    pub fn from_f64(re: f64, im: f64) -> Self {
        Complex::new(T::from_f64(re), T::from_f64(im))
    }
    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }
    pub fn norm_sqr(self) -> T {
        self.re * self.re + self.im * self.im
    }
    pub fn abs(self) -> T {
        self.norm_sqr().sqrt()
    }
    pub fn scale(self, s: T) -> Self {
        Complex::new(self.re * s, self.im * s)
    }
    pub fn to_c64(self) -> Complex<f64> {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl<T: RealScalar> Add for Complex<T> {
    type Output = Complex<T>;
    fn add(self, rhs: Self) -> Self {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: RealScalar> Sub for Complex<T> {
    type Output = Complex<T>;
    fn sub(self, rhs: Self) -> Self {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: RealScalar> Mul for Complex<T> {
    type Output = Complex<T>;
    fn mul(self, rhs: Self) -> Self {
        Complex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl<T: RealScalar> Neg for Complex<T> {
    type Output = Complex<T>;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

impl<T: RealScalar> Div for Complex<T> {
    type Output = Complex<T>;
    fn div(self, rhs: Self) -> Self {
        let d = rhs.norm_sqr();
        let n = self * rhs.conj();
        Complex::new(n.re / d, n.im / d)
    }
}

pub type C64 = Complex<f64>;
pub type Cdd = Complex<Dd>;

/// Operator norm (largest singular value) of a 2x2 complex matrix
/// [[m00, m01], [m10, m11]], computed at the scalar's precision.
pub fn opnorm_2x2<T: RealScalar>(m: [[Complex<T>; 2]; 2]) -> T {
    // Singular values of M are sqrt of eigenvalues of M^dag M.
    let a = m[0][0].norm_sqr() + m[1][0].norm_sqr();
    let d = m[0][1].norm_sqr() + m[1][1].norm_sqr();
    let b = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
    let tr = a + d;
    let diff = a - d;
    let disc = (diff * diff + T::from_f64(4.0) * b.norm_sqr()).sqrt();
    let lam = (tr + disc) * T::from_f64(0.5);
    let lam = if lam < T::zero() { T::zero() } else { lam };
    lam.sqrt()
}
