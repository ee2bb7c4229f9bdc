//! Two-variable Laurent polynomials with complex coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `Σ c_{ij} zⁱ wʲ`, stored sparsely with zero coefficients dropped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly2 {
    coeffs: BTreeMap<(i64, i64), Complex64>,
}

/// Anything that can be evaluated on the torus.
pub trait Evaluator: Sync {
    fn eval(&self, z: Complex64, w: Complex64) -> Complex64;

    /// Values on the product grid `zs × ws`, row-major in `z`.
    fn eval_grid(&self, zs: &[Complex64], ws: &[Complex64]) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(zs.len() * ws.len());
        for &z in zs {
            for &w in ws {
                out.push(self.eval(z, w));
            }
        }
        out
    }
}

impl<F> Evaluator for F
where
    F: Fn(Complex64, Complex64) -> Complex64 + Sync,
{
    fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self(z, w)
    }
}

fn ipow(x: Complex64, k: i64) -> Complex64 {
    if k >= 0 {
        x.powu(k as u32)
    } else {
        x.inv().powu((-k) as u32)
    }
}

impl LaurentPoly2 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), Complex64)>) -> Self {
        let mut p = Self::new();
        for (k, c) in terms {
            p.add_term(k.0, k.1, c);
        }
        p
    }

    /// Real coefficients, convenient for hand-written polynomials.
    pub fn from_real(terms: &[(i64, i64, f64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(i, j, c)| ((i, j), Complex64::new(c, 0.0))))
    }

    pub fn add_term(&mut self, i: i64, j: i64, c: Complex64) {
        let e = self.coeffs.entry((i, j)).or_default();
        *e += c;
        if e.norm() == 0.0 {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: i64, j: i64) -> Complex64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    /// Number of nonzero terms; see [`Self::is_zero`].
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(min_i, max_i, min_j, max_j)`, or `None` for the zero polynomial.
    pub fn bounds(&self) -> Option<(i64, i64, i64, i64)> {
        let mut it = self.coeffs.keys();
        let &(i0, j0) = it.next()?;
        Some(it.fold((i0, i0, j0, j0), |(a, b, c, d), &(i, j)| (a.min(i), b.max(i), c.min(j), d.max(j))))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Multiplies by the monomial `zᵃ wᵇ`.
    pub fn shift(&self, a: i64, b: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&(i, j), &c)| ((i + a, j + b), c)).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c * s)))
    }

    /// `conj(P(z̄, w̄))`: conjugates every coefficient.
    pub fn conjugate(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&k, c)| (k, c.conj())).collect() }
    }

    /// `P(e^X z, e^Y w)`.
    pub fn rescale(&self, x: f64, y: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&(i, j), &c)| ((i, j), c * (x * i as f64 + y * j as f64).exp())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::new();
        for (&(i, j), &a) in &self.coeffs {
            for (&(k, l), &b) in &other.coeffs {
                p.add_term(i + k, j + l, a * b);
            }
        }
        p
    }

    /// Drops coefficients below `tol` times the largest one.
    pub fn chop(&self, tol: f64) -> Self {
        let cut = tol * self.max_abs_coeff();
        Self { coeffs: self.coeffs.iter().filter(|(_, c)| c.norm() > cut).map(|(&k, &c)| (k, c)).collect() }
    }

    /// Coefficients of the polynomial in `w` at fixed `z`, ascending from
    /// `w^{min_j}`.
    pub fn w_coeffs(&self, z: Complex64) -> (i64, Vec<Complex64>) {
        let Some((_, _, j0, j1)) = self.bounds() else {
            return (0, Vec::new());
        };
        let mut out = vec![Complex64::default(); (j1 - j0 + 1) as usize];
        for (&(i, j), &c) in &self.coeffs {
            out[(j - j0) as usize] += c * ipow(z, i);
        }
        (j0, out)
    }

    /// Same polynomial with the roles of `z` and `w` exchanged.
    pub fn swap_variables(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&(i, j), &c)| ((j, i), c)).collect() }
    }

    pub fn to_record(&self) -> PolyRecord {
        PolyRecord { coeffs: self.coeffs.iter().map(|(&(i, j), c)| TermRecord { i, j, re: c.re, im: c.im }).collect() }
    }

    pub fn from_record(r: &PolyRecord) -> Self {
        Self::from_terms(r.coeffs.iter().map(|t| ((t.i, t.j), Complex64::new(t.re, t.im))))
    }
}

impl Evaluator for LaurentPoly2 {
    fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let (j0, cs) = self.w_coeffs(z);
        let mut acc = Complex64::default();
        for &c in cs.iter().rev() {
            acc = acc * w + c;
        }
        acc * ipow(w, j0)
    }

    fn eval_grid(&self, zs: &[Complex64], ws: &[Complex64]) -> Vec<Complex64> {
        let wpow: Vec<Complex64> =
            ws.iter().map(|&w| self.bounds().map_or(Complex64::new(1.0, 0.0), |b| ipow(w, b.2))).collect();
        let mut out = Vec::with_capacity(zs.len() * ws.len());
        for &z in zs {
            let (_, cs) = self.w_coeffs(z);
            for (k, &w) in ws.iter().enumerate() {
                let mut acc = Complex64::default();
                for &c in cs.iter().rev() {
                    acc = acc * w + c;
                }
                out.push(acc * wpow[k]);
            }
        }
        out
    }
}

/// Serialized form: `{"coeffs":[{"i":..,"j":..,"re":..,"im":..}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub coeffs: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub i: i64,
    pub j: i64,
    pub re: f64,
    pub im: f64,
}

impl Serialize for LaurentPoly2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PolyRecord::deserialize(d).map(|r| Self::from_record(&r))
    }
}
