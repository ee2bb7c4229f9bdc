//! Isoradial embeddings, rhombus half-angles and critical weights.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::periodic_graph::{trace_faces, Lattice, PeriodicGraph};
use crate::special_functions::lobachevsky;

/// A validated isoradial embedding.
#[derive(Debug, Clone)]
pub struct IsoradialEmbedding {
    pub graph: PeriodicGraph,
    pub lattice: Lattice,
    pub radius: f64,
    /// Half rhombus angle `θₑ` per edge.
    pub theta: Vec<f64>,
    /// Circumcenter of each face, in the frame of the face's first corner.
    pub circumcenters: Vec<[f64; 2]>,
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: [f64; 2]) -> f64 {
    dot(a, a).sqrt()
}

fn circumcenter(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> Option<[f64; 2]> {
    let (b, c) = (sub(q, p), sub(r, p));
    let d = 2.0 * cross(b, c);
    if d.abs() < 1e-14 * dot(b, b).max(dot(c, c)) {
        return None;
    }
    let (bb, cc) = (dot(b, b), dot(c, c));
    Some([p[0] + (c[1] * bb - b[1] * cc) / d, p[1] + (b[0] * cc - c[0] * bb) / d])
}

fn segment_distance(x: [f64; 2], p: [f64; 2], q: [f64; 2]) -> f64 {
    let d = sub(q, p);
    let t = (dot(sub(x, p), d) / dot(d, d)).clamp(0.0, 1.0);
    norm(sub(x, [p[0] + t * d[0], p[1] + t * d[1]]))
}

/// Inside or on the boundary of a simple polygon.
fn in_closure(x: [f64; 2], poly: &[[f64; 2]], tol: f64) -> bool {
    let n = poly.len();
    if (0..n).any(|i| segment_distance(x, poly[i], poly[(i + 1) % n]) <= tol) {
        return true;
    }
    let mut inside = false;
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        if (p[1] > x[1]) != (q[1] > x[1]) {
            let t = (x[1] - p[1]) / (q[1] - p[1]);
            if x[0] < p[0] + t * (q[0] - p[0]) {
                inside = !inside;
            }
        }
    }
    inside
}

/// Unsigned angle between two vectors.
fn angle(a: [f64; 2], b: [f64; 2]) -> f64 {
    cross(a, b).abs().atan2(dot(a, b))
}

/// Validates an isoradial embedding and extracts the half-angles.
///
/// Every face must be cyclic with the common radius `r` (the first face's
/// radius when `r` is `None`) and contain its circumcenter. `θₑ` is half the
/// angle at an endpoint of `e` between the circumcenters of the two faces
/// along `e`.
pub fn check_isoradial(g: &PeriodicGraph, lattice: Lattice, r: Option<f64>) -> Result<IsoradialEmbedding> {
    let faces = trace_faces(g).map_err(|e| Error::Untraceable(e.to_string()))?;
    let mut radius = r;
    let mut centers = Vec::with_capacity(faces.len());
    // tail → circumcenter, per dart
    let mut spoke = vec![[0.0; 2]; 2 * g.edge_count()];
    for (k, f) in faces.iter().enumerate() {
        let cs: Vec<[f64; 2]> = f.corners(g).into_iter().map(|p| lattice.to_cartesian(p)).collect();
        let n = cs.len();
        let mut best = (0.0, 0, 1, 2);
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let area = cross(sub(cs[j], cs[i]), sub(cs[l], cs[i])).abs();
                    if area > best.0 {
                        best = (area, i, j, l);
                    }
                }
            }
        }
        let c = circumcenter(cs[best.1], cs[best.2], cs[best.3]).ok_or(Error::NonCyclicFace(k))?;
        let rk = norm(sub(cs[0], c));
        if cs.iter().any(|&p| (norm(sub(p, c)) - rk).abs() > 1e-7 * rk) {
            return Err(Error::NonCyclicFace(k));
        }
        match radius {
            Some(r0) if (rk - r0).abs() > 1e-7 * r0 => {
                return Err(Error::RadiusMismatch { face: k, found: rk, expected: r0 });
            }
            None => radius = Some(rk),
            _ => {}
        }
        if !in_closure(c, &cs, 1e-9 * rk) {
            return Err(Error::CircumcenterOutside(k));
        }
        for (&d, &p) in f.darts.iter().zip(&cs) {
            spoke[d] = sub(c, p);
        }
        centers.push(c);
    }
    let theta = (0..g.edge_count())
        .map(|e| {
            let (fwd, back) = (2 * e, 2 * e + 1);
            let step = lattice.to_cartesian(g.displacement(fwd));
            let other = [spoke[back][0] + step[0], spoke[back][1] + step[1]];
            0.5 * angle(spoke[fwd], other)
        })
        .collect();
    Ok(IsoradialEmbedding { graph: g.clone(), lattice, radius: radius.unwrap_or(0.0), theta, circumcenters: centers })
}

impl IsoradialEmbedding {
    /// `2π − Σ 2θₑ` around each vertex; zero for a consistent rhombus tiling.
    pub fn angle_defects(&self) -> Vec<f64> {
        let mut sum = vec![0.0; self.graph.vertex_count()];
        for (e, edge) in self.graph.edges().iter().enumerate() {
            sum[edge.u] += 2.0 * self.theta[e];
            sum[edge.v] += 2.0 * self.theta[e];
        }
        sum.into_iter().map(|s| 2.0 * PI - s).collect()
    }

    /// The graph carrying its critical weights.
    pub fn critical_graph(&self) -> Result<PeriodicGraph> {
        self.graph.with_weights(&critical_weights(self))
    }

    pub fn edge_report(&self) -> Vec<EdgeAngle> {
        self.theta.iter().enumerate().map(|(e, &t)| EdgeAngle { edge: e, theta: t, weight: 2.0 * t.sin() }).collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EdgeAngle {
    pub edge: usize,
    pub theta: f64,
    pub weight: f64,
}

/// `ν(e) = 2 sin θₑ`.
pub fn critical_weights(e: &IsoradialEmbedding) -> Vec<f64> {
    e.theta.iter().map(|t| 2.0 * t.sin()).collect()
}

/// Per-edge term `Λ(θ)/π + (θ/π) log(2 sin θ)`.
pub fn edge_term(theta: f64) -> f64 {
    lobachevsky(theta) / PI + theta / PI * (2.0 * theta.sin()).ln()
}

/// Closed-form Mahler measure of the critical-weight characteristic polynomial.
pub fn isoradial_mahler(e: &IsoradialEmbedding) -> f64 {
    e.theta.iter().map(|&t| edge_term(t)).sum()
}

/// `Σ Λ(θₑ)`: volume of the ideal polyhedron of the dual graph.
pub fn dual_polyhedron_volume(e: &IsoradialEmbedding) -> f64 {
    e.theta.iter().map(|&t| lobachevsky(t)).sum()
}
