//! Kasteleyn matrices of bipartite toroidal graphs, their characteristic
//! polynomials, matching oracles and gauge transformations.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{Evaluator, LaurentPoly2};
use crate::linalg;
use crate::periodic_graph::{
    dart_edge, quotient, trace_faces, validate_bipartite, Color, Face, FiniteGraph, PeriodicGraph,
};

/// Signs and monomial exponents of the magnetically altered Kasteleyn matrix.
///
/// Rows are white vertices, columns black. An edge whose white end is `u`
/// and black end sits in cell `(a, b)` contributes `sign · ν · zᵃ wᵇ`.
#[derive(Debug, Clone, PartialEq)]
pub struct KasteleynAssignment {
    pub sign: Vec<f64>,
    pub zexp: Vec<i64>,
    pub wexp: Vec<i64>,
    pub colors: Vec<Color>,
    /// Row (white) or column (black) index of each vertex.
    pub slot: Vec<usize>,
    pub white: Vec<usize>,
    pub black: Vec<usize>,
}

impl KasteleynAssignment {
    pub fn size(&self) -> usize {
        self.white.len()
    }

    /// `(row, column)` of an edge.
    pub fn entry(&self, g: &PeriodicGraph, e: usize) -> (usize, usize) {
        let edge = &g.edges()[e];
        match self.colors[edge.u] {
            Color::White => (self.slot[edge.u], self.slot[edge.v]),
            Color::Black => (self.slot[edge.v], self.slot[edge.u]),
        }
    }
}

fn face_sign(a: &[f64], f: &Face) -> f64 {
    f.darts.iter().map(|&d| a[dart_edge(d)]).product()
}

fn face_target(f: &Face) -> f64 {
    if (f.degree() / 2) % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Chooses Kasteleyn signs: every face of degree `2k` gets sign product
/// `(-1)^{k+1}`.
///
/// Signs are fixed along a spanning tree of the dual graph, leaves first, and
/// the root face is checked at the end.
pub fn assign_kasteleyn_signs(g: &PeriodicGraph) -> Result<KasteleynAssignment> {
    let colors = validate_bipartite(g)?;
    let mut slot = vec![0; g.vertex_count()];
    let (mut white, mut black) = (Vec::new(), Vec::new());
    for (v, c) in colors.iter().enumerate() {
        let list = if *c == Color::White { &mut white } else { &mut black };
        slot[v] = list.len();
        list.push(v);
    }
    if white.len() != black.len() {
        return Err(Error::Unbalanced { white: white.len(), black: black.len() });
    }
    let faces = trace_faces(g)?;
    if let Some(k) = faces.iter().position(|f| f.degree() % 2 == 1) {
        return Err(Error::OddFace(k));
    }

    let ne = g.edge_count();
    let mut sign = vec![1.0; ne];
    let nf = faces.len();
    let mut parent_edge = vec![usize::MAX; nf];
    let mut seen = vec![false; nf];
    let mut order = Vec::with_capacity(nf);
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(f) = queue.pop_front() {
        order.push(f);
        for &d in &faces.faces[f].darts {
            let other = faces.face_of(d ^ 1);
            if !seen[other] {
                seen[other] = true;
                parent_edge[other] = dart_edge(d);
                queue.push_back(other);
            }
        }
    }
    for &f in order.iter().skip(1).rev() {
        let face = &faces.faces[f];
        if face_sign(&sign, face) != face_target(face) {
            sign[parent_edge[f]] *= -1.0;
        }
    }
    if let Some(k) = faces.iter().position(|f| face_sign(&sign, f) != face_target(f)) {
        return Err(Error::SignInfeasible(k));
    }

    let (mut zexp, mut wexp) = (Vec::with_capacity(ne), Vec::with_capacity(ne));
    for e in g.edges() {
        let s = if colors[e.u] == Color::White { 1 } else { -1 };
        zexp.push(s * e.shift[0]);
        wexp.push(s * e.shift[1]);
    }
    Ok(KasteleynAssignment { sign, zexp, wexp, colors, slot, white, black })
}

fn ipow(x: Complex64, k: i64) -> Complex64 {
    if k >= 0 {
        x.powu(k as u32)
    } else {
        x.inv().powu((-k) as u32)
    }
}

/// `K(z, w)` as a dense matrix.
pub fn kasteleyn_matrix(g: &PeriodicGraph, a: &KasteleynAssignment, z: Complex64, w: Complex64) -> DMatrix<Complex64> {
    let n = a.size();
    let mut m = DMatrix::zeros(n, n);
    for (k, e) in g.edges().iter().enumerate() {
        let (r, c) = a.entry(g, k);
        m[(r, c)] += ipow(z, a.zexp[k]) * ipow(w, a.wexp[k]) * (a.sign[k] * e.weight);
    }
    m
}

/// `P(z, w) = det K(z, w)`.
pub fn kasteleyn_eval(g: &PeriodicGraph, a: &KasteleynAssignment, z: Complex64, w: Complex64) -> Complex64 {
    linalg::det(kasteleyn_matrix(g, a, z, w))
}

/// Borrowed `(graph, assignment)` pair usable wherever an [`Evaluator`] is expected.
#[derive(Clone, Copy)]
pub struct DetEvaluator<'a> {
    pub graph: &'a PeriodicGraph,
    pub assignment: &'a KasteleynAssignment,
}

impl Evaluator for DetEvaluator<'_> {
    fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        kasteleyn_eval(self.graph, self.assignment, z, w)
    }
}

/// Quasi-random test points on and near the unit torus.
pub(crate) fn probe_points(count: usize) -> Vec<(Complex64, Complex64)> {
    let phi = 0.618_033_988_749_894_9_f64;
    let psi = 0.754_877_666_246_692_7_f64;
    (1..=count)
        .map(|k| {
            let k = k as f64;
            let r = if (k as usize).is_multiple_of(3) { 1.3 } else { 1.0 };
            let t1 = 2.0 * std::f64::consts::PI * (k * phi).fract();
            let t2 = 2.0 * std::f64::consts::PI * (k * psi).fract();
            (Complex64::from_polar(r, t1), Complex64::from_polar(1.0 / r, t2))
        })
        .collect()
}

fn dft_roots(n: usize) -> Vec<Complex64> {
    (0..n).map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64)).collect()
}

/// Recovers the coefficients of `P(z, w)` by sampling on roots of unity.
///
/// The exponent window comes from the per-row exponent ranges; sampled values
/// are mapped back by an inverse DFT and checked at 20 off-grid points.
pub fn char_poly(g: &PeriodicGraph, a: &KasteleynAssignment) -> Result<LaurentPoly2> {
    let n = a.size();
    let mut lo = vec![[i64::MAX; 2]; n];
    let mut hi = vec![[i64::MIN; 2]; n];
    for k in 0..g.edge_count() {
        let (r, _) = a.entry(g, k);
        for (t, x) in [a.zexp[k], a.wexp[k]].into_iter().enumerate() {
            lo[r][t] = lo[r][t].min(x);
            hi[r][t] = hi[r][t].max(x);
        }
    }
    if lo.iter().any(|l| l[0] == i64::MAX) {
        return Ok(LaurentPoly2::new());
    }
    let zlo: i64 = lo.iter().map(|l| l[0]).sum();
    let wlo: i64 = lo.iter().map(|l| l[1]).sum();
    let nz = (hi.iter().map(|h| h[0]).sum::<i64>() - zlo + 1) as usize;
    let nw = (hi.iter().map(|h| h[1]).sum::<i64>() - wlo + 1) as usize;
    let zr = dft_roots(nz);
    let wr = dft_roots(nw);
    let samples = DetEvaluator { graph: g, assignment: a }.eval_grid(&zr, &wr);
    let mut terms = Vec::new();
    for p in 0..nz {
        for q in 0..nw {
            let mut acc = Complex64::default();
            for j in 0..nz {
                for k in 0..nw {
                    // ω^{-j·(zlo + p)} η^{-k·(wlo + q)}
                    let ez = (j as i64 * (zlo + p as i64)).rem_euclid(nz as i64) as usize;
                    let ew = (k as i64 * (wlo + q as i64)).rem_euclid(nw as i64) as usize;
                    acc += samples[j * nw + k] * zr[ez].conj() * wr[ew].conj();
                }
            }
            terms.push(((zlo + p as i64, wlo + q as i64), acc / (nz * nw) as f64));
        }
    }
    let mut poly = LaurentPoly2::from_terms(terms).chop(1e-12);
    // coefficients of real-weighted graphs are real
    if g.edges().iter().all(|e| e.weight.is_finite()) {
        poly = LaurentPoly2::from_terms(poly.terms().map(|(k, c)| {
            let im = if c.im.abs() <= 1e-12 * poly.max_abs_coeff() { 0.0 } else { c.im };
            (k, Complex64::new(c.re, im))
        }));
    }
    let worst = probe_points(20)
        .into_iter()
        .map(|(z, w)| {
            let direct = kasteleyn_eval(g, a, z, w);
            let scale = direct.norm().max(1e-3 * poly.max_abs_coeff()).max(f64::MIN_POSITIVE);
            (poly.eval(z, w) - direct).norm() / scale
        })
        .fold(0.0, f64::max);
    if worst > 1e-9 {
        return Err(Error::Residual(worst));
    }
    Ok(poly)
}

/// Torus partition function from the four values `P(±1, ±1)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TorusPartition {
    pub value: f64,
    /// Index into `[(1,1), (1,-1), (-1,1), (-1,-1)]` of the term taken with a minus.
    pub minus: usize,
    pub signs: [i8; 4],
    pub values: [f64; 4],
}

pub const TORUS_POINTS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

/// `Z = ½|Σ εᵢ P(±1, ±1)|` with the single minus sign chosen to reproduce
/// the exact matching count of the `n = 1` quotient.
pub fn partition_function_torus(g: &PeriodicGraph, a: &KasteleynAssignment) -> Result<TorusPartition> {
    let p: Vec<f64> = TORUS_POINTS
        .iter()
        .map(|&(z, w)| kasteleyn_eval(g, a, Complex64::new(z, 0.0), Complex64::new(w, 0.0)).re)
        .collect();
    let oracle = enumerate_matchings(&quotient(g, 1).multigraph())?;
    let cand: [f64; 4] = std::array::from_fn(|m| {
        0.5 * p.iter().enumerate().map(|(i, &v)| if i == m { -v } else { v }).sum::<f64>().abs()
    });
    for m in 0..4 {
        if (cand[m] - oracle).abs() <= 1e-9 * oracle.max(1.0) {
            let mut signs = [1i8; 4];
            signs[m] = -1;
            return Ok(TorusPartition { value: cand[m], minus: m, signs, values: [p[0], p[1], p[2], p[3]] });
        }
    }
    Err(Error::NoSignPattern { oracle, values: cand })
}

/// Largest frontier the matching enumerator accepts.
pub const MAX_FRONTIER: usize = 120;
const MAX_STATES: usize = 1 << 22;

fn bandwidth(h: &FiniteGraph, pos: &[usize]) -> usize {
    h.edges.iter().map(|&(u, v, _)| pos[u].abs_diff(pos[v])).max().unwrap_or(0)
}

fn cuthill_mckee(h: &FiniteGraph) -> Vec<usize> {
    let n = h.n_vertices;
    let mut adj = vec![Vec::new(); n];
    for &(u, v, _) in &h.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    while order.len() < n {
        let start = (0..n).filter(|&v| !seen[v]).min_by_key(|&v| adj[v].len()).unwrap();
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            let mut next: Vec<usize> = adj[x].iter().copied().filter(|&y| !seen[y]).collect();
            next.sort_by_key(|&y| adj[y].len());
            for y in next {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    order
}

fn vertex_order(h: &FiniteGraph) -> Vec<usize> {
    let n = h.n_vertices;
    let mut candidates = vec![cuthill_mckee(h), (0..n).collect()];
    if let Some(p) = &h.positions {
        for key in [[1.0, 1e-3], [1e-3, 1.0], [1.0, 1.0], [1.0, -1.0]] {
            let mut o: Vec<usize> = (0..n).collect();
            o.sort_by(|&a, &b| (key[0] * p[a][0] + key[1] * p[a][1]).total_cmp(&(key[0] * p[b][0] + key[1] * p[b][1])));
            candidates.push(o);
        }
    }
    let invert = |o: &[usize]| {
        let mut pos = vec![0; n];
        for (k, &v) in o.iter().enumerate() {
            pos[v] = k;
        }
        pos
    };
    candidates.into_iter().map(|o| invert(&o)).min_by_key(|pos| bandwidth(h, pos)).unwrap()
}

/// Weighted number of perfect matchings, `Σ_m Π_{e∈m} ν(e)`.
///
/// Exact transfer over a vertex order of small bandwidth: the state is the
/// set of already matched vertices ahead of the current one. Parallel edges
/// count separately; loops are ignored.
pub fn enumerate_matchings(h: &FiniteGraph) -> Result<f64> {
    let n = h.n_vertices;
    if n == 0 {
        return Ok(1.0);
    }
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let pos = vertex_order(h);
    let bw = bandwidth(h, &pos);
    if bw > MAX_FRONTIER {
        return Err(Error::TooLarge(bw));
    }
    // forward[i]: (offset, weight) for edges to later vertices
    let mut forward: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(u, v, w) in &h.edges {
        let (a, b) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
        if a != b {
            forward[a].push((b - a, w));
        }
    }
    let mut states: BTreeMap<u128, f64> = BTreeMap::from([(0u128, 1.0)]);
    for fwd in &forward {
        let mut next: BTreeMap<u128, f64> = BTreeMap::new();
        for (&mask, &val) in &states {
            if mask & 1 == 1 {
                *next.entry(mask >> 1).or_default() += val;
                continue;
            }
            for &(off, w) in fwd {
                let bit = 1u128 << off;
                if mask & bit == 0 {
                    *next.entry((mask | bit) >> 1).or_default() += val * w;
                }
            }
        }
        if next.len() > MAX_STATES {
            return Err(Error::TooLarge(bw));
        }
        states = next;
        if states.is_empty() {
            return Ok(0.0);
        }
    }
    Ok(states.get(&0).copied().unwrap_or(0.0))
}

/// `|det K|` of the `n × n` quotient cut open into a planar graph.
///
/// Signs are inherited from the fundamental domain; only edges that stay
/// inside the supercell are kept, matching [`crate::periodic_graph::TorusGraph::cut_open`].
pub fn planar_determinant(g: &PeriodicGraph, a: &KasteleynAssignment, n: usize) -> f64 {
    let t = quotient(g, n);
    let nb = a.size();
    let size = n * n * nb;
    let mut m = DMatrix::<Complex64>::zeros(size, size);
    for (k, e) in t.supercell.edges().iter().enumerate() {
        if e.shift != [0, 0] || e.u == e.v {
            continue;
        }
        let base = t.edge_base[k];
        let (wv, bv) = if a.colors[t.cells[e.u].1] == Color::White { (e.u, e.v) } else { (e.v, e.u) };
        let row = wv / g.vertex_count() * nb + a.slot[t.cells[wv].1];
        let col = bv / g.vertex_count() * nb + a.slot[t.cells[bv].1];
        m[(row, col)] += Complex64::new(a.sign[base] * e.weight, 0.0);
    }
    linalg::det(m).norm()
}

/// Positive vertex function `F` acting by `ν'(uv) = F(u) F(v) ν(uv)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFunction(pub Vec<f64>);

impl GaugeFunction {
    pub fn identity(n: usize) -> Self {
        GaugeFunction(vec![1.0; n])
    }

    /// `Σ_v log F(v)`: the change of `log Z` per fundamental domain.
    pub fn log_shift(&self) -> f64 {
        self.0.iter().map(|f| f.ln()).sum()
    }
}

/// Applies a gauge and returns the new graph with the `log Z` shift.
pub fn gauge_transform(g: &PeriodicGraph, f: &GaugeFunction) -> Result<(PeriodicGraph, f64)> {
    if f.0.len() != g.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "gauge has {} values for {} vertices",
            f.0.len(),
            g.vertex_count()
        )));
    }
    if let Some(v) = f.0.iter().position(|x| !x.is_finite() || *x <= 0.0) {
        return Err(Error::InvalidArgument(format!("gauge value {} at vertex {v} is not positive", f.0[v])));
    }
    let weights: Vec<f64> = g.edges().iter().map(|e| f.0[e.u] * f.0[e.v] * e.weight).collect();
    Ok((g.with_weights(&weights)?, f.log_shift()))
}

/// Gauge that makes every weight equal to 1, if one exists.
///
/// `log F` is propagated outward from the first white vertex, which keeps
/// `F = 1` there; any edge left inconsistent means no such gauge exists.
pub fn uniformizing_gauge(g: &PeriodicGraph) -> Result<Option<GaugeFunction>> {
    let colors = validate_bipartite(g)?;
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u].push((e.v, e.weight));
        adj[e.v].push((e.u, e.weight));
    }
    let root = colors.iter().position(|&c| c == Color::White).unwrap_or(0);
    let mut logf = vec![f64::NAN; n];
    logf[root] = 0.0;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &(y, w) in &adj[x] {
            if logf[y].is_nan() {
                logf[y] = -w.ln() - logf[x];
                queue.push_back(y);
            }
        }
    }
    for e in g.edges() {
        if (logf[e.u] + logf[e.v] + e.weight.ln()).abs() > 1e-12 {
            return Ok(None);
        }
    }
    Ok(Some(GaugeFunction(logf.into_iter().map(f64::exp).collect())))
}

/// Alternating product `Π ν(wᵢbᵢ) / Π ν(bᵢwᵢ₊₁)` around a face.
pub fn face_alternating_product(g: &PeriodicGraph, face: &Face) -> Result<f64> {
    if face.degree() % 2 == 1 {
        return Err(Error::OddFace(face.degree()));
    }
    let colors = validate_bipartite(g)?;
    let mut x = 1.0;
    for &d in &face.darts {
        let w = g.edges()[dart_edge(d)].weight;
        if colors[g.tail(d)] == Color::White {
            x *= w;
        } else {
            x /= w;
        }
    }
    Ok(x)
}
