//! Spanning trees of periodic graphs: exact counts, the Fourier-block
//! spectral product, entropy per fundamental domain and the Temperley lift.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kasteleyn::{assign_kasteleyn_signs, char_poly};
use crate::linalg;
use crate::mahler::{mahler_jensen_default, MahlerResult};
use crate::periodic_graph::{quotient, trace_faces, Builder, Color, FiniteGraph, PeriodicGraph};

/// Fourier block `L(z, w)` of the Laplacian of a periodic graph.
pub fn laplacian_block(t: &PeriodicGraph, z: Complex64, w: Complex64) -> DMatrix<Complex64> {
    let n = t.vertex_count();
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    for e in t.edges() {
        let m = z.powi(e.shift[0] as i32) * w.powi(e.shift[1] as i32) * e.weight;
        l[(e.u, e.u)] += e.weight;
        l[(e.v, e.v)] += e.weight;
        l[(e.u, e.v)] -= m;
        l[(e.v, e.u)] -= m.conj();
    }
    l
}

/// Exact (weighted) spanning-tree count of a finite multigraph.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeCount {
    pub value: BigRational,
    /// False when the input was disconnected; the value is then 0.
    pub connected: bool,
}

impl TreeCount {
    pub fn ln(&self) -> f64 {
        ln_rational(&self.value)
    }
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return num_traits::ToPrimitive::to_f64(x).unwrap().abs().ln();
    }
    let shift = bits - 60;
    let top: BigInt = x.abs() >> shift;
    num_traits::ToPrimitive::to_f64(&top).unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_rational(x: &BigRational) -> f64 {
    ln_big(x.numer()) - ln_big(x.denom())
}

/// Fraction-free Gaussian elimination; returns the determinant.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Matrix-Tree theorem on the reduced Laplacian, in exact arithmetic.
///
/// Weights are read as exact binary fractions and scaled by the common
/// denominator `D`, so the count is `τ(D·ν) / D^{V-1}`.
pub fn count_spanning_trees(h: &FiniteGraph) -> Result<TreeCount> {
    let n = h.n_vertices;
    if n > 4096 {
        return Err(Error::TooLarge(n));
    }
    if !h.is_connected() {
        return Ok(TreeCount { value: BigRational::zero(), connected: false });
    }
    let mut ws = Vec::with_capacity(h.edges.len());
    let mut denom = BigInt::one();
    for &(_, _, w) in &h.edges {
        let r = BigRational::from_float(w).ok_or_else(|| Error::InvalidArgument(format!("weight {w}")))?;
        denom = denom.lcm(r.denom());
        ws.push(r);
    }
    let mut lap = vec![vec![BigInt::zero(); n]; n];
    for (&(u, v, _), r) in h.edges.iter().zip(&ws) {
        if u == v {
            continue;
        }
        let w = (r * BigRational::from_integer(denom.clone())).to_integer();
        lap[u][u] += &w;
        lap[v][v] += &w;
        lap[u][v] -= &w;
        lap[v][u] -= &w;
    }
    let reduced: Vec<Vec<BigInt>> = lap.into_iter().skip(1).map(|row| row.into_iter().skip(1).collect()).collect();
    let det = bareiss(reduced);
    let scale = num_traits::pow(denom, n - 1);
    Ok(TreeCount { value: BigRational::new(det, scale), connected: true })
}

fn nonzero_spectrum_log(t: &PeriodicGraph) -> Result<f64> {
    let l = laplacian_block(t, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).map(|c| c.re);
    let mut ev: Vec<f64> = l.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    if ev.len() > 1 && ev[1].abs() < 1e-10 {
        return Err(Error::SingularBlock(0, 0));
    }
    Ok(ev.iter().skip(1).map(|x| x.ln()).sum())
}

/// `log N_ST(Tₙ)` from the Fourier blocks of the Laplacian.
///
/// `−log(n² N_v) + Σ_{(j,k)≠0} log det L(ωʲ, ωᵏ) + Σ log λ` over the nonzero
/// eigenvalues `λ` of `L(1, 1)`.
pub fn spectral_tree_count(t: &PeriodicGraph, n: usize) -> Result<f64> {
    let nv = t.vertex_count();
    let roots: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect();
    let rows: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut s = 0.0;
            for k in 0..n {
                if j == 0 && k == 0 {
                    continue;
                }
                let d = linalg::det(laplacian_block(t, roots[j], roots[k])).re;
                if d.is_nan() || d <= 1e-300 {
                    return Err(Error::SingularBlock(j, k));
                }
                s += d.ln();
            }
            Ok(s)
        })
        .collect();
    let mut total = nonzero_spectrum_log(t)? - ((n * n * nv) as f64).ln();
    for r in rows {
        total += r?;
    }
    Ok(total)
}

/// `log N_ST(Tₙ)` from a floating Cholesky factorization of the reduced
/// Laplacian of the quotient; independent of the Fourier decomposition.
pub fn matrix_tree_log_count(t: &PeriodicGraph, n: usize) -> Result<f64> {
    let h = quotient(t, n).multigraph();
    let m = h.n_vertices;
    let mut l = DMatrix::<f64>::zeros(m, m);
    for &(u, v, w) in &h.edges {
        l[(u, u)] += w;
        l[(v, v)] += w;
        l[(u, v)] -= w;
        l[(v, u)] -= w;
    }
    let reduced = l.view((1, 1), (m - 1, m - 1)).into_owned();
    let chol = reduced.cholesky().ok_or(Error::SingularBlock(0, 0))?;
    Ok(2.0 * chol.l().diagonal().iter().map(|x| x.ln()).sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeMethod {
    Spectral,
    MatrixTreeExtrapolated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeEntropy {
    pub per_fd: f64,
    pub per_vertex: f64,
    pub n_v: usize,
    pub method: TreeMethod,
    pub schedule: Vec<usize>,
    pub error_estimate: f64,
}

pub const DEFAULT_SCHEDULE: [usize; 4] = [16, 32, 64, 128];

/// Correction terms in the order they enter the fit. The `log n / n²` term
/// comes last: the zero mode's `−log(n² N_v)` cancels it on every lattice
/// tried, and fitting it early costs two digits.
fn correction(n: f64, k: usize) -> f64 {
    let n2 = n * n;
    match k {
        0 => 1.0 / n2,
        1 => 1.0 / (n2 * n2),
        2 => n.ln() / (n2 * n2),
        _ => n.ln() / n2,
    }
}

/// Least-squares fit of `y(n) = z + Σₖ cₖ φₖ(n)` with the first `terms` corrections.
fn fit_limit(ns: &[usize], ys: &[f64], terms: usize) -> Option<f64> {
    let a = DMatrix::from_fn(ns.len(), terms + 1, |i, j| if j == 0 { 1.0 } else { correction(ns[i] as f64, j - 1) });
    let b = nalgebra::DVector::from_column_slice(ys);
    a.svd(true, true).solve(&b, 1e-15).ok().map(|x| x[0])
}

/// Extrapolates `(1/n²) log N_ST(Tₙ)` along a schedule.
///
/// The estimate uses as many correction terms as the schedule supports (at
/// most four); the error is its distance to the fit with one term fewer.
pub fn extrapolate_entropy(ns: &[usize], ys: &[f64]) -> Result<(f64, f64)> {
    if ns.len() < 3 {
        return Err(Error::Extrapolation(format!("need at least 3 grid sizes, got {}", ns.len())));
    }
    let terms = (ns.len() - 1).min(4);
    let best = fit_limit(ns, ys, terms).ok_or_else(|| Error::Extrapolation("singular fit".into()))?;
    let prev = fit_limit(ns, ys, terms - 1).ok_or_else(|| Error::Extrapolation("singular fit".into()))?;
    if !best.is_finite() {
        return Err(Error::Extrapolation("non-finite limit".into()));
    }
    Ok((best, (best - prev).abs().max(f64::EPSILON * best.abs())))
}

fn entropy_from(
    t: &PeriodicGraph,
    schedule: &[usize],
    method: TreeMethod,
    f: impl Fn(usize) -> Result<f64>,
) -> Result<TreeEntropy> {
    let mut ns = schedule.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let ys = ns.iter().map(|&n| Ok(f(n)? / (n * n) as f64)).collect::<Result<Vec<_>>>()?;
    let (per_fd, err) = extrapolate_entropy(&ns, &ys)?;
    let n_v = t.vertex_count();
    Ok(TreeEntropy { per_fd, per_vertex: per_fd / n_v as f64, n_v, method, schedule: ns, error_estimate: err })
}

/// Spanning-tree entropy per fundamental domain, by the spectral formula.
pub fn tree_entropy_fd(t: &PeriodicGraph, schedule: &[usize]) -> Result<TreeEntropy> {
    entropy_from(t, schedule, TreeMethod::Spectral, |n| spectral_tree_count(t, n))
}

/// Same limit from direct determinants of the quotients.
pub fn tree_entropy_matrix_tree(t: &PeriodicGraph, schedule: &[usize]) -> Result<TreeEntropy> {
    entropy_from(t, schedule, TreeMethod::MatrixTreeExtrapolated, |n| matrix_tree_log_count(t, n))
}

fn floor_pos(p: [f64; 2]) -> [f64; 2] {
    [p[0] - p[0].floor(), p[1] - p[1].floor()]
}

/// Generalized Temperley lift.
///
/// White vertices sit at edge midpoints; black vertices are the original
/// vertices and one centroid per face. Every white vertex is joined to the two
/// ends of its edge and to the centroids of the two faces along it.
pub fn temperley_lift(t: &PeriodicGraph) -> Result<PeriodicGraph> {
    let faces = trace_faces(t).map_err(|e| Error::Untraceable(e.to_string()))?;
    let mut b = Builder::new(format!("{}-lift", t.name));
    let pos = |v: usize| t.vertices()[v].pos;
    for (k, e) in t.edges().iter().enumerate() {
        let (p, q) = (pos(e.u), pos(e.v));
        b.colored_vertex(
            format!("e{k}"),
            floor_pos([(p[0] + q[0] + e.shift[0] as f64) / 2.0, (p[1] + q[1] + e.shift[1] as f64) / 2.0]),
            Color::White,
        );
    }
    for v in t.vertices() {
        b.colored_vertex(format!("v:{}", v.id), v.pos, Color::Black);
    }
    let mut centroids = Vec::with_capacity(faces.len());
    for (k, f) in faces.iter().enumerate() {
        let cs = f.corners(t);
        let c = [
            cs.iter().map(|p| p[0]).sum::<f64>() / cs.len() as f64,
            cs.iter().map(|p| p[1]).sum::<f64>() / cs.len() as f64,
        ];
        centroids.push(c);
        b.colored_vertex(format!("f{k}"), floor_pos(c), Color::Black);
    }
    for e in t.edges() {
        let (p, q) = (pos(e.u), pos(e.v));
        let q = [q[0] + e.shift[0] as f64, q[1] + e.shift[1] as f64];
        let m = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
        b.segment(m, p, 1.0)?;
        b.segment(m, q, 1.0)?;
    }
    for (f, c) in faces.iter().zip(&centroids) {
        let cs = f.corners(t);
        for i in 0..cs.len() {
            let (p, q) = (cs[i], cs[(i + 1) % cs.len()]);
            b.segment([(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0], *c, 1.0)?;
        }
    }
    let lift = b.build()?;
    let lf = trace_faces(&lift).map_err(|e| Error::Untraceable(e.to_string()))?;
    if lf.len() != 2 * t.edge_count() || lf.iter().any(|f| f.degree() != 4) {
        return Err(Error::Untraceable(format!(
            "lift has face degrees {:?}, expected {} quadrilaterals",
            lf.degrees(),
            2 * t.edge_count()
        )));
    }
    Ok(lift)
}

/// `M(P_lift)` next to the tree entropy of the original graph.
#[derive(Debug, Clone, Serialize)]
pub struct DimerTreeReport {
    pub mahler: MahlerResult,
    pub entropy: TreeEntropy,
    pub difference: f64,
}

pub fn dimer_tree_identity_check(t: &PeriodicGraph) -> Result<DimerTreeReport> {
    let lift = temperley_lift(&t.uniform())?;
    let a = assign_kasteleyn_signs(&lift)?;
    let p = char_poly(&lift, &a)?;
    let mahler = mahler_jensen_default(&p)?;
    let entropy = tree_entropy_fd(&t.uniform(), &DEFAULT_SCHEDULE)?;
    let difference = mahler.value - entropy.per_fd;
    Ok(DimerTreeReport { mahler, entropy, difference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn complete(n: usize) -> FiniteGraph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j, 1.0));
            }
        }
        FiniteGraph::new(n, edges)
    }

    fn square() -> PeriodicGraph {
        let mut b = Builder::new("square");
        let v = b.vertex("v", [0.5, 0.5]);
        b.edge(v, v, [1, 0], 1.0);
        b.edge(v, v, [0, 1], 1.0);
        b.build().unwrap()
    }

    #[test]
    fn small_complete_graphs() {
        assert_eq!(count_spanning_trees(&complete(3)).unwrap().value.to_integer().to_i64(), Some(3));
        assert_eq!(count_spanning_trees(&complete(4)).unwrap().value.to_integer().to_i64(), Some(16));
        let split = FiniteGraph::new(4, vec![(0, 1, 1.0), (2, 3, 1.0)]);
        let c = count_spanning_trees(&split).unwrap();
        assert!(!c.connected && c.value.is_zero());
    }

    #[test]
    fn weighted_trees_are_exact() {
        // triangle with weights a, b, c has ab + bc + ca trees
        let t = FiniteGraph::new(3, vec![(0, 1, 0.5), (1, 2, 2.0), (2, 0, 0.25)]);
        let c = count_spanning_trees(&t).unwrap();
        assert_eq!(c.value, BigRational::new(BigInt::from(13), BigInt::from(8)));
    }

    #[test]
    fn laplacian_block_is_hermitian_with_zero_row_sums() {
        let t = square();
        let z = Complex64::from_polar(1.0, 0.7);
        let w = Complex64::from_polar(1.0, -1.9);
        let l = laplacian_block(&t, z, w);
        let lc = laplacian_block(&t, z.conj(), w.conj());
        assert!((l.adjoint() - lc).norm() < 1e-14);
        let one = laplacian_block(&t, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        assert!(one.iter().all(|c| c.norm() < 1e-14));
    }

    #[test]
    fn square_lattice_spectral_count() {
        let t = square();
        assert!(spectral_tree_count(&t, 1).unwrap().abs() < 1e-12);
        for n in 2..5 {
            let exact = count_spanning_trees(&quotient(&t, n).multigraph()).unwrap().ln();
            let spec = spectral_tree_count(&t, n).unwrap();
            assert!((exact - spec).abs() < 1e-9 * exact.abs(), "n={n}: {exact} vs {spec}");
        }
    }

    #[test]
    fn square_lattice_entropy() {
        let e = tree_entropy_fd(&square(), &DEFAULT_SCHEDULE).unwrap();
        let expected = 4.0 * crate::special_functions::CATALAN / PI;
        assert!((e.per_fd - expected).abs() < 1e-10, "{e:?}");
    }

    #[test]
    fn square_lift_is_the_weave() {
        let lift = temperley_lift(&square()).unwrap();
        assert_eq!(lift.vertex_count(), 4);
        assert_eq!(lift.edge_count(), 8);
        assert_eq!(trace_faces(&lift).unwrap().degrees(), vec![4; 4]);
    }
}
