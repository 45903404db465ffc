//! Scalar abstractions shared by every numeric module.
//!
//! [`Real`] covers the floating point types the routines are instantiated
//! with (`f32`, `f64`). [`Scalar`] adds the field structure: a scalar is
//! either real or complex over some [`Real`], and linear algebra is written
//! once against that trait.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Field over which matrices and atoms live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Real floating point type.
pub trait Real:
    Float + NumAssign + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal; every `f64` is representable (possibly rounded).
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal fits the real type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Element of `F^n`: a real number or a complex number over [`Scalar::Real`].
pub trait Scalar:
    Copy
    + PartialEq
    + Debug
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
{
    type Real: Real;
    const FIELD: Field;

    fn conj(self) -> Self;
    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    fn from_real(x: Self::Real) -> Self;
    /// Builds a scalar from its parts; the imaginary part is dropped for real scalars.
    fn from_parts(re: Self::Real, im: Self::Real) -> Self;

    #[inline]
    fn abs_sqr(self) -> Self::Real {
        let (a, b) = (self.re(), self.im());
        a * a + b * b
    }

    #[inline]
    fn modulus(self) -> Self::Real {
        self.re().hypot(self.im())
    }

    #[inline]
    fn scale(self, r: Self::Real) -> Self {
        self * Self::from_real(r)
    }

    #[inline]
    fn is_finite(self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }

    /// `self / |self|`, or one for zero.
    #[inline]
    fn phase(self) -> Self {
        let m = self.modulus();
        if m == Self::Real::zero() {
            Self::one()
        } else {
            self.scale(m.recip())
        }
    }
}

macro_rules! real_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;
            const FIELD: Field = Field::Real;

            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn re(self) -> Self::Real {
                self
            }
            #[inline]
            fn im(self) -> Self::Real {
                0.0
            }
            #[inline]
            fn from_real(x: Self::Real) -> Self {
                x
            }
            #[inline]
            fn from_parts(re: Self::Real, _im: Self::Real) -> Self {
                re
            }
            #[inline]
            fn abs_sqr(self) -> Self::Real {
                self * self
            }
            #[inline]
            fn modulus(self) -> Self::Real {
                self.abs()
            }
            #[inline]
            fn scale(self, r: Self::Real) -> Self {
                self * r
            }
        }
    };
}

real_scalar!(f32);
real_scalar!(f64);

impl<T: Real> Scalar for Complex<T> {
    type Real = T;
    const FIELD: Field = Field::Complex;

    #[inline]
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    #[inline]
    fn re(self) -> T {
        self.re
    }
    #[inline]
    fn im(self) -> T {
        self.im
    }
    #[inline]
    fn from_real(x: T) -> Self {
        Complex::new(x, T::zero())
    }
    #[inline]
    fn from_parts(re: T, im: T) -> Self {
        Complex::new(re, im)
    }
    #[inline]
    fn scale(self, r: T) -> Self {
        Complex::new(self.re * r, self.im * r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn real_parts_drop_imaginary() {
        assert_eq!(<f64 as Scalar>::from_parts(2.0, 5.0), 2.0);
        assert_eq!(<f64 as Scalar>::FIELD, Field::Real);
        assert_eq!((-3.0f64).modulus(), 3.0);
    }

    #[test]
    fn complex_modulus_and_phase() {
        let z = Complex64::new(3.0, 4.0);
        assert_eq!(z.modulus(), 5.0);
        assert_eq!(z.abs_sqr(), 25.0);
        let p = z.phase();
        assert!((p.modulus() - 1.0).abs() < 1e-15);
        assert_eq!(Complex64::zero().phase(), Complex64::one());
        assert_eq!(<Complex64 as Scalar>::FIELD, Field::Complex);
    }
}
