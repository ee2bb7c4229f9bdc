//! The periodic lattices and links shipped with the crate.
//!
//! Every lattice is embedded with convex faces, so face centroids (and hence
//! Temperley lifts) stay planar.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::periodic_graph::{trace_faces, Builder, Lattice, PeriodicGraph};
use crate::special_functions::{V_OCT, V_TET};

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// Builds a graph from vertex positions and edges given as absolute points.
fn from_segments(name: &str, points: &[[f64; 2]], segments: &[([f64; 2], [f64; 2])]) -> PeriodicGraph {
    let mut b = Builder::new(name);
    for (k, p) in points.iter().enumerate() {
        b.vertex(format!("v{k}"), [frac(p[0]), frac(p[1])]);
    }
    for &(p, q) in segments {
        b.segment(p, q, 1.0).expect("catalog segment endpoints are registered vertices");
    }
    b.build().expect("catalog lattice is valid")
}

pub fn square() -> PeriodicGraph {
    let p = [0.5, 0.5];
    from_segments("square", &[p], &[(p, [1.5, 0.5]), (p, [0.5, 1.5])])
}

/// Triangular lattice; equilateral in [`Lattice::triangular`].
pub fn triangular() -> PeriodicGraph {
    let p = [0.5, 0.5];
    from_segments("triangular", &[p], &[(p, [1.5, 0.5]), (p, [0.5, 1.5]), (p, [-0.5, 1.5])])
}

/// Honeycomb in the triangular basis; regular hexagons.
pub fn honeycomb() -> PeriodicGraph {
    let (p, q) = ([1.0 / 3.0, 1.0 / 3.0], [2.0 / 3.0, 2.0 / 3.0]);
    from_segments("honeycomb", &[p, q], &[(p, q), (p, [q[0] - 1.0, q[1]]), (p, [q[0], q[1] - 1.0])])
}

/// Joins the midpoints of consecutive edges around every vertex.
///
/// For a cubic graph this is its line graph: kagome from the honeycomb, the
/// kite lattice from 4·8·8.
pub fn medial(g: &PeriodicGraph, name: &str) -> Result<PeriodicGraph> {
    let rot = g.rotation()?;
    let mid = |d: usize| {
        let p = g.vertices()[g.tail(d)].pos;
        let s = g.displacement(d);
        [p[0] + s[0] / 2.0, p[1] + s[1] / 2.0]
    };
    let points: Vec<[f64; 2]> = (0..g.edge_count()).map(|e| mid(2 * e)).collect();
    let mut segments = Vec::new();
    for darts in &rot {
        for i in 0..darts.len() {
            segments.push((mid(darts[i]), mid(darts[(i + 1) % darts.len()])));
        }
    }
    Ok(from_segments(name, &points, &segments))
}

/// Replaces every vertex in `which` by a small triangle (or polygon) cut at
/// fraction `t` along its edges.
fn truncate(g: &PeriodicGraph, which: &[usize], t: f64, name: &str) -> Result<PeriodicGraph> {
    let rot = g.rotation()?;
    let corner = |d: usize| {
        let p = g.vertices()[g.tail(d)].pos;
        let s = g.displacement(d);
        [p[0] + t * s[0], p[1] + t * s[1]]
    };
    let cut = |v: usize| which.contains(&v);
    let mut points = Vec::new();
    for (v, vert) in g.vertices().iter().enumerate() {
        if cut(v) {
            points.extend(rot[v].iter().map(|&d| corner(d)));
        } else {
            points.push(vert.pos);
        }
    }
    let mut segments = Vec::new();
    for (v, darts) in rot.iter().enumerate() {
        if cut(v) {
            for i in 0..darts.len() {
                segments.push((corner(darts[i]), corner(darts[(i + 1) % darts.len()])));
            }
        }
    }
    for e in 0..g.edge_count() {
        let (fwd, back) = (2 * e, 2 * e + 1);
        let p = if cut(g.tail(fwd)) { corner(fwd) } else { g.vertices()[g.tail(fwd)].pos };
        let start = g.vertices()[g.tail(fwd)].pos;
        let s = g.displacement(fwd);
        let q = if cut(g.tail(back)) {
            let c = corner(back);
            let base = g.vertices()[g.tail(back)].pos;
            [start[0] + s[0] + c[0] - base[0], start[1] + s[1] + c[1] - base[1]]
        } else {
            [start[0] + s[0], start[1] + s[1]]
        };
        segments.push((p, q));
    }
    Ok(from_segments(name, &points, &segments))
}

pub fn kagome() -> PeriodicGraph {
    medial(&honeycomb(), "kagome").expect("honeycomb embedding is valid")
}

/// Truncated hexagonal lattice `3·12·12`.
pub fn three_twelve_twelve() -> PeriodicGraph {
    truncate(&honeycomb(), &[0, 1], 1.0 / (2.0 + 3f64.sqrt()), "3.12.12").expect("honeycomb embedding is valid")
}

/// Honeycomb with one of its two vertex classes truncated: triangles and
/// nonagons.
pub fn nine() -> PeriodicGraph {
    truncate(&honeycomb(), &[0], 0.25, "nine").expect("honeycomb embedding is valid")
}

/// Truncated square lattice `4·8·8`.
pub fn four_eight_eight() -> PeriodicGraph {
    let t = 1.0 / (2.0 + 2f64.sqrt());
    let c = 0.5;
    let pts = [[c + t, c], [c, c + t], [c - t, c], [c, c - t]];
    let mut segs: Vec<([f64; 2], [f64; 2])> = (0..4).map(|i| (pts[i], pts[(i + 1) % 4])).collect();
    segs.push((pts[0], [pts[2][0] + 1.0, pts[2][1]]));
    segs.push((pts[1], [pts[3][0], pts[3][1] + 1.0]));
    from_segments("4.8.8", &pts, &segs)
}

pub fn kite() -> PeriodicGraph {
    medial(&four_eight_eight(), "kite").expect("4.8.8 embedding is valid")
}

/// Lattices by name, as accepted by the command line.
pub fn lattice(name: &str) -> Result<PeriodicGraph> {
    Ok(match name {
        "square" => square(),
        "triangular" => triangular(),
        "honeycomb" => honeycomb(),
        "kagome" => kagome(),
        "3.12.12" | "three-twelve-twelve" => three_twelve_twelve(),
        "nine" => nine(),
        "4.8.8" | "four-eight-eight" => four_eight_eight(),
        "kite" => kite(),
        _ => return Err(Error::UnknownExample(name.to_string())),
    })
}

pub const LATTICES: [&str; 8] = ["square", "triangular", "honeycomb", "kagome", "3.12.12", "nine", "4.8.8", "kite"];

/// Reference values attached to an example.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Expected {
    pub two_pi_m: Option<f64>,
    pub vol_bipyramid: Option<f64>,
    pub tree_entropy_fd: Option<f64>,
}

/// A periodic link given by one of its Tait graphs.
#[derive(Debug, Clone)]
pub struct ExampleRecord {
    pub name: &'static str,
    pub tait_graph: PeriodicGraph,
    /// Basis in which the Temperley lift is isoradial, if it is.
    pub isoradial_lattice: Option<Lattice>,
    /// Faces of the link diagram: Tait vertex degrees together with Tait face degrees.
    pub face_degrees: Option<Vec<usize>>,
    pub expected: Expected,
}

impl ExampleRecord {
    pub fn dimer_graph(&self) -> Result<PeriodicGraph> {
        crate::spanning_tree::temperley_lift(&self.tait_graph)
    }
}

/// Faces of the alternating link whose Tait graph is `t`: one per vertex and
/// one per face of `t`, with the same degrees.
pub fn link_face_degrees(t: &PeriodicGraph) -> Result<Vec<usize>> {
    let mut d: Vec<usize> = (0..t.vertex_count()).map(|v| t.degree(v)).collect();
    d.extend(trace_faces(t)?.degrees());
    d.sort_unstable_by(|a, b| b.cmp(a));
    Ok(d)
}

pub const EXAMPLES: [&str; 7] =
    ["triaxial", "weave", "rhombitrihexagonal", "three-twelve-twelve", "nine", "four-eight-eight", "kite"];

pub fn example(name: &str) -> Result<ExampleRecord> {
    let (tait, iso, expected) = match name {
        "triaxial" => (
            triangular(),
            Some(Lattice::triangular()),
            Expected {
                two_pi_m: Some(10.0 * V_TET),
                vol_bipyramid: Some(10.0 * V_TET),
                tree_entropy_fd: Some(1.615329),
            },
        ),
        "weave" => (
            square(),
            Some(Lattice::SQUARE),
            Expected { two_pi_m: Some(2.0 * V_OCT), vol_bipyramid: Some(2.0 * V_OCT), tree_entropy_fd: None },
        ),
        "rhombitrihexagonal" => (
            kagome(),
            None,
            Expected { two_pi_m: Some(21.407368), vol_bipyramid: None, tree_entropy_fd: Some(3.407088) },
        ),
        "three-twelve-twelve" => (
            three_twelve_twelve(),
            None,
            Expected { two_pi_m: Some(27.164592), vol_bipyramid: Some(26.6109), tree_entropy_fd: Some(4.323379) },
        ),
        "nine" => (
            nine(),
            None,
            Expected { two_pi_m: Some(18.859756), vol_bipyramid: Some(18.7326), tree_entropy_fd: Some(3.001623) },
        ),
        "four-eight-eight" => (
            four_eight_eight(),
            None,
            Expected {
                two_pi_m: Some(19.7715323218),
                vol_bipyramid: Some(19.6379),
                tree_entropy_fd: Some(4.0 * 0.786684275378832),
            },
        ),
        "kite" => (
            kite(),
            None,
            Expected { two_pi_m: Some(42.287446), vol_bipyramid: Some(41.6207), tree_entropy_fd: Some(6.730256) },
        ),
        _ => return Err(Error::UnknownExample(name.to_string())),
    };
    let face_degrees = Some(link_face_degrees(&tait)?);
    Ok(ExampleRecord {
        name: EXAMPLES.iter().find(|&&n| n == name).copied().unwrap_or("custom"),
        tait_graph: tait,
        isoradial_lattice: iso,
        face_degrees,
        expected,
    })
}

pub fn all_examples() -> Vec<ExampleRecord> {
    EXAMPLES.iter().map(|n| example(n).expect("catalog names are valid")).collect()
}
