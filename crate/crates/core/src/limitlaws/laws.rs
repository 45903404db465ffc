//! Hard-edge limit laws, the Marchenko–Pastur law, and reference laws for
//! distance and modulus statistics.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use statrs::function::erf::erf;

use crate::error::{invalid, Error, Result};
use crate::limitlaws::quadrature::integrate_f64;
use crate::scalar::Scalar;
use crate::spectral::{condition_number, Matrix};

fn nonnegative(t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        Err(invalid(format!("limit laws are defined for t >= 0, got {t}")))
    } else {
        Ok(t)
    }
}

/// `P(n σ_n² ≤ t)` limit for real atoms: `1 − e^{−t/2 − √t}`.
pub fn edelman_real_cdf(t: f64) -> Result<f64> {
    let t = nonnegative(t)?;
    Ok(-(-(t / 2.0 + t.sqrt())).exp_m1())
}

/// `P(n σ_n² ≤ t)` for complex atoms: `1 − e^{−t}`.
pub fn edelman_complex_cdf(t: f64) -> Result<f64> {
    let t = nonnegative(t)?;
    Ok(-(-t).exp_m1())
}

/// Density `(1 + √x)/(2√x) · e^{−(x/2 + √x)}` of the real law.
pub fn edelman_real_density(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let r = x.sqrt();
    (1.0 + r) / (2.0 * r) * (-(x / 2.0 + r)).exp()
}

/// Quadrature of the real density after `x = u²`:
/// `∫₀^{√t} (1 + u) e^{−(u²/2 + u)} du`.
pub fn edelman_real_cdf_quadrature(t: f64) -> Result<f64> {
    let t = nonnegative(t)?;
    integrate_f64(|u| (1.0 + u) * (-(u * u / 2.0 + u)).exp(), 0.0, t.sqrt())
}

/// Marchenko–Pastur density `(1/2π)√(4/x − 1)` on `(0, 4]`.
pub fn mp_density(x: f64) -> f64 {
    if x <= 0.0 || x > 4.0 {
        0.0
    } else {
        (4.0 / x - 1.0).sqrt() / (2.0 * PI)
    }
}

/// `(1/2π)∫₀^{min(t,4)} √(4/x − 1) dx` by adaptive quadrature; the `x^{-1/2}`
/// singularity is removed with `x = u²`, giving `(1/π)∫₀^{√t} √(4 − u²) du`.
pub fn mp_cdf(t: f64) -> Result<f64> {
    let t = nonnegative(t)?.min(4.0);
    let v = integrate_f64(|u| (4.0 - u * u).max(0.0).sqrt() / PI, 0.0, t.sqrt())?;
    Ok(v.min(1.0))
}

/// Closed antiderivative `(sin 2θ + 2θ)/π` with `θ = asin(√t/2)`.
pub fn mp_cdf_closed(t: f64) -> Result<f64> {
    let t = nonnegative(t)?.min(4.0);
    let theta = (t.sqrt() / 2.0).min(1.0).asin();
    Ok(((2.0 * theta).sin() + 2.0 * theta) / PI)
}

/// `P(|g| ≤ t)` for a real standard gaussian: `erf(t/√2)`.
pub fn half_normal_cdf(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        erf(t / std::f64::consts::SQRT_2)
    }
}

/// `P(|g| ≤ t)` for a complex gaussian with `E|g|² = 1`: `1 − e^{−t²}`.
pub fn complex_modulus_cdf(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -(-t * t).exp_m1()
    }
}

/// Named limit law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitLaw {
    /// `n σ_n²`, real atoms.
    EdelmanReal,
    /// `n σ_n²`, complex atoms (exactly `Exp(1)` for complex gaussians).
    EdelmanComplex,
    /// `√n σ_n`, real atoms: `1 − e^{−x²/2 − x}`.
    SqrtEdelmanReal,
    /// `√n σ_n`, complex atoms: `1 − e^{−x²}`.
    SqrtEdelmanComplex,
    /// Squared singular values over `n` of one square draw.
    MarchenkoPastur,
    /// `|g_ℝ|`.
    HalfNormal,
    /// `|g_ℂ|`.
    ComplexModulus,
}

impl LimitLaw {
    pub const ALL: [LimitLaw; 7] = [
        LimitLaw::EdelmanReal,
        LimitLaw::EdelmanComplex,
        LimitLaw::SqrtEdelmanReal,
        LimitLaw::SqrtEdelmanComplex,
        LimitLaw::MarchenkoPastur,
        LimitLaw::HalfNormal,
        LimitLaw::ComplexModulus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimitLaw::EdelmanReal => "edelman_real",
            LimitLaw::EdelmanComplex => "edelman_complex",
            LimitLaw::SqrtEdelmanReal => "sqrt_edelman_real",
            LimitLaw::SqrtEdelmanComplex => "sqrt_edelman_complex",
            LimitLaw::MarchenkoPastur => "mp",
            LimitLaw::HalfNormal => "half_normal",
            LimitLaw::ComplexModulus => "complex_modulus",
        }
    }

    pub fn support(self) -> &'static str {
        match self {
            LimitLaw::MarchenkoPastur => "[0, 4]",
            _ => "[0, inf)",
        }
    }

    /// CDF, zero for negative arguments.
    pub fn cdf(self, t: f64) -> f64 {
        if t.is_nan() {
            return f64::NAN;
        }
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            LimitLaw::EdelmanReal => edelman_real_cdf(t).unwrap_or(f64::NAN),
            LimitLaw::EdelmanComplex => edelman_complex_cdf(t).unwrap_or(f64::NAN),
            LimitLaw::SqrtEdelmanReal => sqrt_scale_cdf(LimitLaw::EdelmanReal, t).unwrap_or(f64::NAN),
            LimitLaw::SqrtEdelmanComplex => {
                sqrt_scale_cdf(LimitLaw::EdelmanComplex, t).unwrap_or(f64::NAN)
            }
            LimitLaw::MarchenkoPastur => mp_cdf_closed(t).unwrap_or(f64::NAN),
            LimitLaw::HalfNormal => half_normal_cdf(t),
            LimitLaw::ComplexModulus => complex_modulus_cdf(t),
        }
    }

    pub fn density(self, t: f64) -> Option<f64> {
        if t < 0.0 {
            return Some(0.0);
        }
        Some(match self {
            LimitLaw::EdelmanReal => edelman_real_density(t),
            LimitLaw::EdelmanComplex => (-t).exp(),
            LimitLaw::SqrtEdelmanReal => (1.0 + t) * (-(t * t / 2.0 + t)).exp(),
            LimitLaw::SqrtEdelmanComplex | LimitLaw::ComplexModulus => 2.0 * t * (-t * t).exp(),
            LimitLaw::MarchenkoPastur => mp_density(t),
            LimitLaw::HalfNormal => (2.0 / PI).sqrt() * (-t * t / 2.0).exp(),
        })
    }

    /// The CDF recomputed by integrating the density; the independent route
    /// behind every closed form.
    pub fn cdf_by_quadrature(self, t: f64) -> Result<f64> {
        let t = nonnegative(t)?;
        match self {
            LimitLaw::EdelmanReal => edelman_real_cdf_quadrature(t),
            LimitLaw::MarchenkoPastur => mp_cdf(t),
            law => integrate_f64(|x| law.density(x).unwrap_or(0.0), 0.0, t),
        }
    }
}

impl fmt::Display for LimitLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LimitLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LimitLaw::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = LimitLaw::ALL.iter().map(|l| l.name()).collect();
                Error::Parse(format!("unknown law '{s}' (known: {})", names.join(", ")))
            })
    }
}

impl Serialize for LimitLaw {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for LimitLaw {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `law.cdf(x²)`: the law of `√X` when `law` is the law of `X`.
pub fn sqrt_scale_cdf(law: LimitLaw, x: f64) -> Result<f64> {
    let x = nonnegative(x)?;
    Ok(law.cdf(x * x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorCheck {
    pub x: f64,
    /// `1 − e^{−x²/2 − x}`.
    pub exact: f64,
    /// `x − x³/3`.
    pub approx: f64,
    /// `exact < x` for `x > 0` (trivially true at zero).
    pub below_diagonal: bool,
    /// `|exact − approx| ≤ x⁴`.
    pub within_quartic: bool,
}

/// Compares the real `√n σ_n` law with its cubic Taylor polynomial on `[0, 1/2]`.
pub fn st_taylor_check(x: f64) -> Result<TaylorCheck> {
    if !(0.0..=0.5).contains(&x) {
        return Err(invalid(format!("Taylor check runs on [0, 0.5], got {x}")));
    }
    let exact = sqrt_scale_cdf(LimitLaw::EdelmanReal, x)?;
    let approx = x - x.powi(3) / 3.0;
    Ok(TaylorCheck {
        x,
        exact,
        approx,
        below_diagonal: x == 0.0 || exact < x,
        within_quartic: (exact - approx).abs() <= x.powi(4),
    })
}

/// `τ(A) = (2n/κ(A))²`, whose law approaches the complex Edelman law for
/// complex atoms since `σ₁ ≈ 2√n`.
pub fn condition_law_statistic<S: Scalar>(a: &Matrix<S>) -> Result<f64> {
    let kappa = condition_number(a)?;
    Ok((2.0 * a.rows() as f64 / kappa).powi(2))
}
