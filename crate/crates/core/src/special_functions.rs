//! Lobachevsky function, dilogarithms and ideal hyperbolic volumes.
//!
//! Sign convention: `Λ(θ) = -∫₀^θ log|2 sin t| dt`, so `Λ(π/6) > 0` is the
//! maximum. Everything is computed in `f64`, aiming at `1e-14` absolute error.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::gl_integrate;

/// Volume of the regular ideal tetrahedron, `3Λ(π/3)`.
pub const V_TET: f64 = 1.014_941_606_409_65;
/// Volume of the regular ideal octahedron, `8Λ(π/4)`.
pub const V_OCT: f64 = 3.663_862_376_708_88;
/// Catalan's constant, `D(i) = v_oct / 4`.
pub const CATALAN: f64 = 0.915_965_594_177_219;

/// A named volume constant.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct VolumeConstant {
    pub name: &'static str,
    pub value: f64,
}

pub fn volume_constants() -> [VolumeConstant; 3] {
    [
        VolumeConstant { name: "v_tet", value: 3.0 * lobachevsky(PI / 3.0) },
        VolumeConstant { name: "v_oct", value: 8.0 * lobachevsky(PI / 4.0) },
        VolumeConstant { name: "catalan", value: 2.0 * lobachevsky(PI / 4.0) },
    ]
}

const TERMS: usize = 30;

/// `ζ(2k)` for `k = 1..=TERMS`.
fn zeta_even() -> &'static [f64; TERMS] {
    static TABLE: OnceLock<[f64; TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; TERMS];
        t[0] = PI * PI / 6.0;
        t[1] = PI.powi(4) / 90.0;
        for (k, slot) in t.iter_mut().enumerate().skip(2) {
            let p = 2 * (k as i32 + 1);
            // summed smallest-first; the tail beyond 2000 is below 1e-19
            *slot = (1..2000).rev().map(|m| (m as f64).powi(-p)).sum();
        }
        t
    })
}

/// Clausen function `Cl₂(φ) = Σ sin(kφ)/k²`.
pub fn clausen(phi: f64) -> f64 {
    if !phi.is_finite() {
        return f64::NAN;
    }
    let mut x = phi.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    if x == 0.0 {
        return 0.0;
    }
    // Cl₂(x) = x − x log|x| + Σ ζ(2k) x^{2k+1} / (k (2k+1) (2π)^{2k}), |x| ≤ π
    let r2 = (x / (2.0 * PI)).powi(2);
    let mut pk = 1.0;
    let mut sum = 0.0;
    for (k, z) in zeta_even().iter().enumerate() {
        pk *= r2;
        let k = (k + 1) as f64;
        let term = z * pk / (k * (2.0 * k + 1.0));
        sum += term;
        if term < 1e-18 {
            break;
        }
    }
    x - x * x.abs().ln() + x * sum
}

/// Lobachevsky function `Λ(θ) = ½ Cl₂(2θ)`: odd and π-periodic.
pub fn lobachevsky(theta: f64) -> f64 {
    0.5 * clausen(2.0 * theta)
}

/// `B_{2k} / (2k+1)!` for the Bernoulli-series form of `Li₂`.
fn bernoulli_coeffs() -> &'static [f64; TERMS] {
    static TABLE: OnceLock<[f64; TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let z = zeta_even();
        let mut t = [0.0; TERMS];
        for k in 1..=TERMS {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            t[k - 1] = sign * 2.0 * z[k - 1] / ((2 * k + 1) as f64 * (2.0 * PI).powi(2 * k as i32));
        }
        t
    })
}

/// `Li₂` through `u = -log(1-z)`; valid for `|u| < 2π`.
fn li2_series(u: Complex64) -> Complex64 {
    let u2 = u * u;
    let mut acc = u - 0.25 * u2;
    let mut p = u * u2;
    for &c in bernoulli_coeffs() {
        let term = p * c;
        acc += term;
        if term.norm() < 1e-18 * acc.norm().max(1e-300) {
            break;
        }
        p *= u2;
    }
    acc
}

/// Principal branch of the dilogarithm `Li₂(z) = -∫₀^z log(1-u) du/u`.
///
/// On the cut `z ∈ (1, ∞)` the limit from below is returned,
/// `Im Li₂(x - i0) = -π log x`.
pub fn dilog(z: Complex64) -> Complex64 {
    let pi2_6 = PI * PI / 6.0;
    if z.re.is_nan() || z.im.is_nan() {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    if z == Complex64::new(1.0, 0.0) {
        return Complex64::new(pi2_6, 0.0);
    }
    let on_cut = z.im == 0.0 && z.re > 1.0;
    let z = if z.im == 0.0 { Complex64::new(z.re, 0.0) } else { z };
    let one = Complex64::new(1.0, 0.0);
    let nz = z.norm_sqr();
    let out = if z.re <= 0.5 {
        if nz > 1.0 {
            let lz = (-z).ln();
            -li2_series(-(one - one / z).ln()) - 0.5 * lz * lz - pi2_6
        } else {
            li2_series(-(one - z).ln())
        }
    } else if nz <= 2.0 * z.re {
        // |1 - z| ≤ 1: reflection Li₂(z) = -Li₂(1-z) + π²/6 - log z log(1-z)
        let u = -z.ln();
        let l1z = if on_cut { Complex64::new((z.re - 1.0).ln(), PI) } else { (one - z).ln() };
        -li2_series(u) + u * l1z + pi2_6
    } else {
        let lz = if on_cut { Complex64::new(z.re.ln(), PI) } else { (-z).ln() };
        -li2_series(-(one - one / z).ln()) - 0.5 * lz * lz - pi2_6
    };
    if on_cut {
        Complex64::new(out.re, -PI * z.re.ln())
    } else if z.im == 0.0 {
        Complex64::new(out.re, 0.0)
    } else {
        out
    }
}

/// Bloch–Wigner dilogarithm `D(z) = Im Li₂(z) + arg(1-z) log|z|`, with `arg`
/// in `(-π, π]`. Vanishes on the real line, including `0` and `1`.
pub fn bloch_wigner(z: Complex64) -> f64 {
    if z.im == 0.0 {
        return 0.0;
    }
    let one_minus = Complex64::new(1.0 - z.re, -z.im);
    dilog(z).im + one_minus.arg() * z.norm().ln()
}

/// Inverse tangent integral `Ti₂(x) = ∫₀^x arctan(t)/t dt`.
pub fn ti2(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let ax = x.abs();
    let v = if ax <= 1.0 {
        ti2_unit(ax)
    } else {
        // Ti₂(x) = Ti₂(1/x) + (π/2) log x for x > 0
        ti2_unit(1.0 / ax) + 0.5 * PI * ax.ln()
    };
    v.copysign(x)
}

fn ti2_unit(x: f64) -> f64 {
    let f = |t: f64| if t == 0.0 { 1.0 } else { t.atan() / t };
    if x <= 0.5 {
        gl_integrate(f, 0.0, x)
    } else {
        gl_integrate(f, 0.0, 0.5) + gl_integrate(f, 0.5, x)
    }
}

/// Volume of the regular ideal bipyramid over an `n`-gon, `2n Λ(π/n)`.
pub fn bipyramid_volume(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::BipyramidDegree(n));
    }
    if n == 2 {
        return Ok(0.0);
    }
    Ok(2.0 * n as f64 * lobachevsky(PI / n as f64))
}
