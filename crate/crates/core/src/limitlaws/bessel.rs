//! Integer-order Bessel functions from their integral representation and
//! the hard-edge Bessel kernel.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::spectral::Matrix;

/// Trapezoid nodes on one period.
pub const BESSEL_NODES: usize = 512;
/// Beyond this the 512-node rule is no longer spectrally accurate.
pub const BESSEL_MAX_ARG: f64 = 200.0;
/// Below this separation the kernel switches to its diagonal extension.
pub const KERNEL_DIAGONAL_DELTA: f64 = 1e-4;

/// `(1/2π) ∫_{−π}^{π} e^{−i(νt − x sin t)} dt` by the periodic trapezoid rule,
/// returned as `(re, im)`. The imaginary part vanishes analytically.
pub fn bessel_j_parts(nu: u32, x: f64) -> Result<(f64, f64)> {
    if nu > 1 {
        return Err(invalid(format!("only orders 0 and 1 are provided, got {nu}")));
    }
    if !x.is_finite() || x.abs() > BESSEL_MAX_ARG {
        return Err(invalid(format!("Bessel argument must satisfy |x| <= {BESSEL_MAX_ARG}, got {x}")));
    }
    let h = 2.0 * PI / BESSEL_NODES as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for k in 0..BESSEL_NODES {
        let t = -PI + k as f64 * h;
        let phase = f64::from(nu) * t - x * t.sin();
        re += phase.cos();
        im -= phase.sin();
    }
    Ok((re / BESSEL_NODES as f64, im / BESSEL_NODES as f64))
}

/// `J_ν(x)` for `ν ∈ {0, 1}`.
pub fn bessel_j(nu: u32, x: f64) -> Result<f64> {
    let (re, im) = bessel_j_parts(nu, x)?;
    debug_assert!(im.abs() <= 1e-10, "imaginary residue {im}");
    Ok(re)
}

/// Hard-edge Bessel kernel
/// `K(x, y) = [√x J₁(√x) J₀(√y) − √y J₀(√x) J₁(√y)] / (2(x − y))`
/// with the continuous diagonal `K(x, x) = (J₀(√x)² + J₁(√x)²)/4`, used at the
/// midpoint whenever `|x − y| ≤ 1e-4`.
pub fn bessel_kernel(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(invalid(format!("Bessel kernel needs positive arguments, got ({x}, {y})")));
    }
    if (x - y).abs() <= KERNEL_DIAGONAL_DELTA {
        return bessel_kernel_diagonal(0.5 * (x + y));
    }
    let (rx, ry) = (x.sqrt(), y.sqrt());
    let (j0x, j1x) = (bessel_j(0, rx)?, bessel_j(1, rx)?);
    let (j0y, j1y) = (bessel_j(0, ry)?, bessel_j(1, ry)?);
    Ok((rx * j1x * j0y - ry * j0x * j1y) / (2.0 * (x - y)))
}

/// `K(x, x)`, the limit of the quotient as `y → x`. Differentiating
/// `√y J₁(√y)` with `(z J₁(z))' = z J₀(z)` and `J₀' = −J₁` collapses the
/// L'Hôpital quotient to this sum of squares.
pub fn bessel_kernel_diagonal(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(invalid(format!("Bessel kernel needs positive arguments, got {x}")));
    }
    let r = x.sqrt();
    let (j0, j1) = (bessel_j(0, r)?, bessel_j(1, r)?);
    Ok(0.25 * (j0 * j0 + j1 * j1))
}

/// `(K(t_i, t_j))_{ij}` on the given points.
pub fn bessel_gram(points: &[f64]) -> Result<Matrix<f64>> {
    let n = points.len();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let k = bessel_kernel(points[i], points[j])?;
            g[(i, j)] = k;
            g[(j, i)] = k;
        }
    }
    Ok(g)
}
