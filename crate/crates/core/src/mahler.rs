//! Mahler measures and Ronkin functions of two-variable Laurent polynomials.
//!
//! Two independent methods are provided. [`mahler_quadrature`] only needs
//! point evaluations: it averages `log|P|` over shifted root-of-unity grids and
//! extrapolates in the grid size. [`mahler_jensen`] needs coefficients: for
//! each `z = e^{iθ}` Jensen's formula turns the inner integral over `w` into a
//! sum over roots, and the outer integral is done adaptively.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{Evaluator, LaurentPoly2};
use crate::linalg;
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Quadrature,
    Jensen,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MahlerResult {
    pub value: f64,
    pub method: Method,
    /// Base grid size (quadrature) or number of initial panels (Jensen).
    pub grid: usize,
    pub error_estimate: f64,
    pub evaluations: usize,
}

fn grid_mean(p: &dyn Evaluator, n: usize, offset: f64) -> f64 {
    let pts: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + offset) / n as f64)).collect();
    let rows: Vec<f64> =
        pts.par_iter().map(|&z| p.eval_grid(&[z], &pts).iter().map(|v| v.norm().ln()).sum::<f64>()).collect();
    rows.iter().sum::<f64>() / (n * n) as f64
}

/// Fits `m(h) = M + a·h²·log h + b·h²` through three grid levels `h, h/2, h/4`.
fn extrapolate(m: [f64; 3], n: usize) -> f64 {
    let basis = |k: usize| {
        let h = 1.0 / (n << k) as f64;
        [1.0, h * h * h.ln(), h * h]
    };
    let a = nalgebra::Matrix3::from_rows(&[
        nalgebra::RowVector3::from(basis(0)),
        nalgebra::RowVector3::from(basis(1)),
        nalgebra::RowVector3::from(basis(2)),
    ]);
    match a.lu().solve(&nalgebra::Vector3::from(m)) {
        Some(x) => x[0],
        None => m[2],
    }
}

/// Mean of `log|P|` on shifted `N × N` torus grids, extrapolated over
/// `N, 2N, 4N`; the error estimate compares against the extrapolation from
/// `N/2, N, 2N`.
pub fn mahler_quadrature(p: &dyn Evaluator, n: usize) -> Result<MahlerResult> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("quadrature grid {n} is below 4")));
    }
    let sizes = [n / 2, n, 2 * n, 4 * n];
    let run = |offset: f64| -> Vec<f64> { sizes.iter().map(|&m| grid_mean(p, m, offset)).collect() };
    let mut means = run(0.5);
    if means.iter().any(|m| !m.is_finite()) {
        means = run(0.5 + 1.0 / PI);
    }
    if means.iter().any(|m| !m.is_finite()) {
        return Err(Error::NonFinite);
    }
    let fine = extrapolate([means[1], means[2], means[3]], n);
    let coarse = extrapolate([means[0], means[1], means[2]], n / 2);
    let error = (fine - coarse).abs().max(f64::EPSILON * fine.abs().max(1.0));
    Ok(MahlerResult {
        value: fine,
        method: Method::Quadrature,
        grid: n,
        error_estimate: error,
        evaluations: sizes.iter().map(|m| m * m).sum(),
    })
}

/// `m(θ) = log|lead| + Σ log⁺|root|` for `P(e^{iθ}, ·)`.
fn jensen_slice(p: &LaurentPoly2, theta: f64) -> Result<f64> {
    let (_, mut cs) = p.w_coeffs(Complex64::from_polar(1.0, theta));
    let big = cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if big == 0.0 {
        return Ok(f64::MIN_POSITIVE.ln());
    }
    // a vanishing leading coefficient means a root escaped to infinity
    while cs.last().is_some_and(|c| c.norm() <= 1e-14 * big) {
        cs.pop();
    }
    let zeros = cs.iter().take_while(|c| c.norm() <= 1e-14 * big).count();
    let cs = &cs[zeros..];
    let lead = cs[cs.len() - 1].norm().ln();
    let roots = linalg::poly_roots(cs)?;
    Ok(lead + roots.iter().map(|r| r.norm().ln().max(0.0)).sum::<f64>())
}

/// Mahler measure by Jensen's formula in `w` and adaptive Gauss–Kronrod in `θ`.
///
/// `panels` sets the initial subdivision of `[0, 2π]`; each panel is refined
/// until its share of the absolute tolerance `tol` is met.
pub fn mahler_jensen(p: &LaurentPoly2, panels: usize, tol: f64) -> Result<MahlerResult> {
    let Some((i0, i1, j0, j1)) = p.bounds() else {
        return Err(Error::ZeroPolynomial);
    };
    if j0 == j1 {
        if i0 == i1 {
            let c = p.coeff(i0, j0).norm().ln();
            return Ok(MahlerResult {
                value: c,
                method: Method::Jensen,
                grid: 0,
                error_estimate: f64::EPSILON * c.abs().max(1.0),
                evaluations: 0,
            });
        }
        return mahler_jensen(&p.swap_variables(), panels, tol);
    }
    let panels = panels.max(2);
    let breaks: Vec<f64> = (0..=panels).map(|k| 2.0 * PI * k as f64 / panels as f64).collect();
    let share = 2.0 * PI * tol / panels as f64;
    let parts: Vec<Result<quadrature::Integral>> = breaks
        .par_windows(2)
        .map(|w| {
            let failure = std::sync::Mutex::new(None);
            let r = quadrature::integrate(
                |t| match jensen_slice(p, t) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        0.0
                    }
                },
                &[w[0], w[1]],
                share,
            );
            match failure.into_inner().unwrap() {
                Some(e) => Err(e),
                None => Ok(r),
            }
        })
        .collect();
    let (mut value, mut error, mut evals) = (0.0, 0.0, 0);
    for part in parts {
        let part = part?;
        value += part.value;
        error += part.error;
        evals += part.evaluations;
    }
    let value = value / (2.0 * PI);
    Ok(MahlerResult {
        value,
        method: Method::Jensen,
        grid: panels,
        error_estimate: (error / (2.0 * PI)).max(f64::EPSILON * value.abs().max(1.0)),
        evaluations: evals,
    })
}

/// Default Jensen settings: 64 panels, absolute tolerance `1e-10`.
pub fn mahler_jensen_default(p: &LaurentPoly2) -> Result<MahlerResult> {
    mahler_jensen(p, 64, 1e-10)
}

/// Ronkin function `F(X, Y)`: the Mahler measure of `P(e^X z, e^Y w)`.
pub fn ronkin(p: &dyn Evaluator, x: f64, y: f64, n: usize) -> Result<f64> {
    let (sx, sy) = (x.exp(), y.exp());
    let scaled = move |z: Complex64, w: Complex64| p.eval(z * sx, w * sy);
    Ok(mahler_quadrature(&scaled, n)?.value)
}
