//! Small dense linear algebra helpers: complex determinants and polynomial roots.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Determinant by partially pivoted LU.
pub fn det(m: DMatrix<Complex64>) -> Complex64 {
    if m.nrows() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    m.lu().determinant()
}

/// Evaluates `Σ c_k x^k` and its derivative by Horner's rule.
pub fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Roots of `Σ c_k x^k` (ascending coefficients, nonzero leading term).
///
/// Eigenvalues of the companion matrix, each polished by one Newton step.
/// Falls back to Aberth iteration if the Schur form does not converge.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    if lead.norm() == 0.0 {
        return Err(Error::RootFinder);
    }
    if deg == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }
    let mut comp = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let roots: Vec<Complex64> = match comp.try_schur(1e-15, 10_000).and_then(|s| s.eigenvalues()) {
        Some(ev) if ev.iter().all(|r| r.re.is_finite() && r.im.is_finite()) => ev.iter().copied().collect(),
        _ => aberth(coeffs)?,
    };
    Ok(roots
        .into_iter()
        .map(|r| {
            let (p, dp) = horner(coeffs, r);
            if dp.norm() > 0.0 {
                let step = p / dp;
                if step.norm() < 1e-3 * (1.0 + r.norm()) {
                    return r - step;
                }
            }
            r
        })
        .collect())
}

/// Aberth–Ehrlich simultaneous iteration.
pub fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    // Cauchy bound for the initial circle
    let radius = 1.0 + coeffs[..deg].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = horner(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 =
                (0..deg).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            return Ok(z);
        }
    }
    if z.iter().all(|r| r.re.is_finite() && r.im.is_finite()) {
        Ok(z)
    } else {
        Err(Error::RootFinder)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn expand(roots: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![c(1.0, 0.0)];
        for &r in roots {
            let mut q = vec![c(0.0, 0.0); p.len() + 1];
            for (k, &a) in p.iter().enumerate() {
                q[k + 1] += a;
                q[k] -= a * r;
            }
            p = q;
        }
        p
    }

    fn assert_same_roots(mut a: Vec<Complex64>, mut b: Vec<Complex64>) {
        let key = |z: &Complex64| (z.re * 1e6).round() as i64 * 1_000_000_000 + (z.im * 1e6).round() as i64;
        a.sort_by_key(key);
        b.sort_by_key(key);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn companion_roots() {
        let roots = vec![c(2.0, 0.0), c(-0.5, 0.3), c(0.1, -1.0), c(1.0, 1.0), c(-3.0, 0.0)];
        assert_same_roots(poly_roots(&expand(&roots)).unwrap(), roots);
    }

    #[test]
    fn aberth_roots() {
        let roots = vec![c(0.2, 0.0), c(-0.5, 0.7), c(1.5, -1.0), c(0.0, 2.0)];
        assert_same_roots(aberth(&expand(&roots)).unwrap(), roots);
    }

    #[test]
    fn unit_circle_roots() {
        // w⁶ - 1
        let mut p = vec![c(0.0, 0.0); 7];
        p[0] = c(-1.0, 0.0);
        p[6] = c(1.0, 0.0);
        for r in poly_roots(&p).unwrap() {
            assert!((r.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn lu_determinant() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 1.0), c(2.0, 0.0), c(0.0, 1.0), c(3.0, 0.0)]);
        assert!((det(m) - c(3.0, 1.0)).norm() < 1e-14);
    }
}
