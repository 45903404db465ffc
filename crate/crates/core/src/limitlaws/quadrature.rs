//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod<T: Real>(f: &impl Fn(T) -> T, a: T, b: T) -> Piece<T> {
    let half = T::of(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center);
    let mut k = fc * T::of(WGK[7]);
    let mut g = fc * T::of(WG[3]);
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = radius * T::of(x);
        let pair = f(center - dx) + f(center + dx);
        k += pair * T::of(w);
        if i % 2 == 1 {
            g += pair * T::of(WG[i / 2]);
        }
    }
    Piece {
        a,
        b,
        value: k * radius,
        error: ((k - g) * radius).abs(),
    }
}

/// Integrates `f` over `[a, b]` until the summed Kronrod error estimate drops
/// below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<T: Real>(
    f: impl Fn(T) -> T,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
) -> Result<Quadrature<T>> {
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            error: T::zero(),
            intervals: 0,
        });
    }
    if b < a {
        let q = integrate(f, b, a, abs_tol, rel_tol)?;
        return Ok(Quadrature {
            value: -q.value,
            ..q
        });
    }
    let mut pieces = vec![kronrod(&f, a, b)];
    let floor = T::epsilon() * T::of(50.0);
    loop {
        let value: T = pieces.iter().map(|p| p.value).sum();
        let error: T = pieces.iter().map(|p| p.error).sum();
        if !value.is_finite() {
            return Err(Error::NoConvergence {
                algorithm: "adaptive quadrature (non-finite integrand)",
                iterations: pieces.len(),
            });
        }
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target || error <= floor * value.abs() {
            return Ok(Quadrature {
                value,
                error,
                intervals: pieces.len(),
            });
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence {
                algorithm: "adaptive quadrature",
                iterations: pieces.len(),
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = pieces.swap_remove(worst);
        let mid = T::of(0.5) * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // Interval cannot be split further in this precision.
            pieces.push(Piece {
                error: T::zero(),
                ..p
            });
            continue;
        }
        pieces.push(kronrod(&f, p.a, mid));
        pieces.push(kronrod(&f, mid, p.b));
    }
}

/// [`integrate`] with the tolerances used across the crate for `f64`.
pub fn integrate_f64(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    integrate(f, a, b, 1e-13, 1e-12).map(|q| q.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = integrate(|x: f64| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14, 1e-14).unwrap();
        // ∫ = [x⁶/6 − x³] from −1 to 2 = (64/6 − 8) − (1/6 + 1)
        assert!((q.value - (64.0 / 6.0 - 8.0 - 1.0 / 6.0 - 1.0)).abs() < 1e-13);
        assert_eq!(q.intervals, 1);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // ∫₀¹ x^{-1/2} dx = 2
        let v = integrate_f64(|x| 1.0 / x.sqrt(), 0.0, 1.0).unwrap_or_else(|e| panic!("{e}"));
        assert!((v - 2.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let a = integrate_f64(f64::exp, 0.0, 1.0).unwrap();
        let b = integrate_f64(f64::exp, 1.0, 0.0).unwrap();
        assert!((a - (1f64.exp() - 1.0)).abs() < 1e-14);
        assert_eq!(a, -b);
    }

    #[test]
    fn works_in_single_precision() {
        let q = integrate(|x: f32| x.sin(), 0.0, std::f32::consts::PI, 1e-6, 1e-6).unwrap();
        assert!((q.value - 2.0).abs() < 1e-5);
    }
}
