//! Z²-periodic embedded graphs.
//!
//! A [`PeriodicGraph`] stores one fundamental domain: vertices with
//! fractional positions in `[0,1)²` and edges `u → v` carrying the integer
//! translation of the cell that holds `v`. The rotation system at each vertex
//! comes from the geometric directions of its edges, so faces of the torus
//! quotient can be traced without any extra input.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Self {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub pos: [f64; 2],
    pub color: Option<Color>,
}

/// Edge from `u` in cell `(0,0)` to `v` in cell `shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub shift: [i64; 2],
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicGraph {
    pub name: String,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

/// A directed half of an edge. Dart `2e` runs `u → v`, dart `2e + 1` runs back.
pub type Dart = usize;

pub fn dart_edge(d: Dart) -> usize {
    d / 2
}

pub fn dart_reverse(d: Dart) -> Dart {
    d ^ 1
}

pub fn is_forward(d: Dart) -> bool {
    d.is_multiple_of(2)
}

fn frac(x: f64) -> (f64, i64) {
    let c = x.floor();
    let mut f = x - c;
    let mut c = c as i64;
    // x slightly below an integer can round up to exactly 1.0
    if f >= 1.0 {
        f -= 1.0;
        c += 1;
    }
    (f, c)
}

impl PeriodicGraph {
    /// Validates and normalizes a fundamental domain.
    ///
    /// Positions outside `[0,1)²` are wrapped back and the shifts of incident
    /// edges are corrected so the embedded cover is unchanged.
    pub fn new(name: impl Into<String>, mut vertices: Vec<Vertex>, mut edges: Vec<Edge>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.id.clone()));
            }
        }
        let mut cells = Vec::with_capacity(vertices.len());
        for v in vertices.iter_mut() {
            let (fx, cx) = frac(v.pos[0]);
            let (fy, cy) = frac(v.pos[1]);
            v.pos = [fx, fy];
            cells.push([cx, cy]);
        }
        for (k, e) in edges.iter_mut().enumerate() {
            if e.u >= vertices.len() {
                return Err(Error::UnknownEndpoint(format!("#{}", e.u)));
            }
            if e.v >= vertices.len() {
                return Err(Error::UnknownEndpoint(format!("#{}", e.v)));
            }
            if !e.weight.is_finite() || e.weight <= 0.0 {
                return Err(Error::NonpositiveWeight { edge: k, weight: e.weight });
            }
            e.shift = [e.shift[0] + cells[e.v][0] - cells[e.u][0], e.shift[1] + cells[e.v][1] - cells[e.u][1]];
            if e.u == e.v && e.shift == [0, 0] {
                return Err(Error::Loop(k));
            }
            if let (Some(a), Some(b)) = (vertices[e.u].color, vertices[e.v].color) {
                if a == b {
                    return Err(Error::ColorConflict(k));
                }
            }
        }
        let g = PeriodicGraph { name: name.into(), vertices, edges };
        if !g.patch_connected(3) {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    /// Same graph with every weight replaced.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        assert_eq!(weights.len(), self.edges.len());
        let mut g = self.clone();
        for (k, (e, &w)) in g.edges.iter_mut().zip(weights).enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::NonpositiveWeight { edge: k, weight: w });
            }
            e.weight = w;
        }
        Ok(g)
    }

    pub fn uniform(&self) -> Self {
        let mut g = self.clone();
        for e in g.edges.iter_mut() {
            e.weight = 1.0;
        }
        g
    }

    pub fn with_colors(&self, colors: &[Color]) -> Result<Self> {
        let mut g = self.clone();
        for (v, &c) in g.vertices.iter_mut().zip(colors) {
            v.color = Some(c);
        }
        for (k, e) in g.edges.iter().enumerate() {
            if colors[e.u] == colors[e.v] {
                return Err(Error::ColorConflict(k));
            }
        }
        Ok(g)
    }

    pub fn colors(&self) -> Option<Vec<Color>> {
        self.vertices.iter().map(|v| v.color).collect()
    }

    pub fn tail(&self, d: Dart) -> usize {
        let e = &self.edges[dart_edge(d)];
        if is_forward(d) {
            e.u
        } else {
            e.v
        }
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tail(dart_reverse(d))
    }

    /// Cell of the head relative to the tail.
    pub fn dart_shift(&self, d: Dart) -> [i64; 2] {
        let s = self.edges[dart_edge(d)].shift;
        if is_forward(d) {
            s
        } else {
            [-s[0], -s[1]]
        }
    }

    /// Head minus tail in fractional coordinates of the cover.
    pub fn displacement(&self, d: Dart) -> [f64; 2] {
        let t = self.vertices[self.tail(d)].pos;
        let h = self.vertices[self.head(d)].pos;
        let s = self.dart_shift(d);
        [h[0] + s[0] as f64 - t[0], h[1] + s[1] as f64 - t[1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.u == v) as usize + (e.v == v) as usize).sum()
    }

    /// Outgoing darts of every vertex sorted counterclockwise by direction.
    pub fn rotation(&self) -> Result<Vec<Vec<Dart>>> {
        let mut out: Vec<Vec<(f64, Dart)>> = vec![Vec::new(); self.vertices.len()];
        for d in 0..2 * self.edges.len() {
            let [dx, dy] = self.displacement(d);
            out[self.tail(d)].push((dy.atan2(dx), d));
        }
        let mut rot = Vec::with_capacity(out.len());
        for (v, mut list) in out.into_iter().enumerate() {
            list.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in list.windows(2) {
                if (w[1].0 - w[0].0).abs() < 1e-12 {
                    return Err(Error::CoincidentDirections(self.vertices[v].id.clone()));
                }
            }
            if list.len() > 1 && (list[0].0 + 2.0 * std::f64::consts::PI - list[list.len() - 1].0) < 1e-12 {
                return Err(Error::CoincidentDirections(self.vertices[v].id.clone()));
            }
            rot.push(list.into_iter().map(|(_, d)| d).collect());
        }
        Ok(rot)
    }

    /// Connectivity of the `n × n` torus quotient.
    pub fn patch_connected(&self, n: usize) -> bool {
        let nv = self.vertices.len();
        if nv == 0 {
            return false;
        }
        let total = n * n * nv;
        let idx = |i: i64, j: i64, b: usize| -> usize {
            let i = i.rem_euclid(n as i64) as usize;
            let j = j.rem_euclid(n as i64) as usize;
            (i * n + j) * nv + b
        };
        let mut adj = vec![Vec::new(); total];
        for e in &self.edges {
            for i in 0..n as i64 {
                for j in 0..n as i64 {
                    let a = idx(i, j, e.u);
                    let b = idx(i + e.shift[0], j + e.shift[1], e.v);
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        let mut seen = vec![false; total];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == total
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            name: self.name.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexRecord { id: v.id.clone(), pos: v.pos, color: v.color })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    u: self.vertices[e.u].id.clone(),
                    v: self.vertices[e.v].id.clone(),
                    shift: vec![e.shift[0] as f64, e.shift[1] as f64],
                    weight: e.weight,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph serializes")
    }
}

/// On-disk form of a periodic graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub name: String,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: String,
    pub pos: [f64; 2],
    #[serde(default)]
    pub color: Option<Color>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub shift: Vec<f64>,
    pub weight: f64,
}

impl TryFrom<GraphFile> for PeriodicGraph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        let mut index = HashMap::new();
        let mut vertices = Vec::with_capacity(file.vertices.len());
        for (i, v) in file.vertices.into_iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.id));
            }
            vertices.push(Vertex { id: v.id, pos: v.pos, color: v.color });
        }
        let mut edges = Vec::with_capacity(file.edges.len());
        for (k, e) in file.edges.into_iter().enumerate() {
            let u = *index.get(&e.u).ok_or_else(|| Error::UnknownEndpoint(e.u.clone()))?;
            let v = *index.get(&e.v).ok_or_else(|| Error::UnknownEndpoint(e.v.clone()))?;
            if e.shift.len() != 2 || e.shift.iter().any(|s| s.fract() != 0.0 || !s.is_finite()) {
                return Err(Error::MalformedShift(k));
            }
            edges.push(Edge { u, v, shift: [e.shift[0] as i64, e.shift[1] as i64], weight: e.weight });
        }
        PeriodicGraph::new(file.name, vertices, edges)
    }
}

/// Parses and validates a graph from its JSON text.
pub fn load_graph(text: &str) -> Result<PeriodicGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    PeriodicGraph::try_from(file)
}

/// Builds a fundamental domain from points of the cover.
///
/// Vertices are registered once with any representative position; edges are
/// then given by the absolute positions of their endpoints, from which the
/// shifts follow.
#[derive(Debug, Default)]
pub struct Builder {
    name: String,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl Builder {
    pub fn new(name: impl Into<String>) -> Self {
        Builder { name: name.into(), ..Default::default() }
    }

    pub fn vertex(&mut self, id: impl Into<String>, pos: [f64; 2]) -> usize {
        let (x, _) = frac(pos[0]);
        let (y, _) = frac(pos[1]);
        self.vertices.push(Vertex { id: id.into(), pos: [x, y], color: None });
        self.vertices.len() - 1
    }

    pub fn colored_vertex(&mut self, id: impl Into<String>, pos: [f64; 2], color: Color) -> usize {
        let k = self.vertex(id, pos);
        self.vertices[k].color = Some(color);
        k
    }

    /// Locates the vertex represented by `p` and the cell it sits in.
    pub fn locate(&self, p: [f64; 2]) -> Option<(usize, [i64; 2])> {
        self.vertices.iter().enumerate().find_map(|(k, v)| {
            let dx = p[0] - v.pos[0];
            let dy = p[1] - v.pos[1];
            let (cx, cy) = (dx.round(), dy.round());
            ((dx - cx).abs() < 1e-9 && (dy - cy).abs() < 1e-9).then_some((k, [cx as i64, cy as i64]))
        })
    }

    pub fn edge(&mut self, u: usize, v: usize, shift: [i64; 2], weight: f64) {
        self.edges.push(Edge { u, v, shift, weight });
    }

    /// Adds the edge between the vertices at absolute positions `p` and `q`.
    pub fn segment(&mut self, p: [f64; 2], q: [f64; 2], weight: f64) -> Result<()> {
        let (u, cu) = self.locate(p).ok_or_else(|| Error::UnknownEndpoint(format!("{p:?}")))?;
        let (v, cv) = self.locate(q).ok_or_else(|| Error::UnknownEndpoint(format!("{q:?}")))?;
        self.edge(u, v, [cv[0] - cu[0], cv[1] - cu[1]], weight);
        Ok(())
    }

    pub fn build(self) -> Result<PeriodicGraph> {
        PeriodicGraph::new(self.name, self.vertices, self.edges)
    }
}

/// A face of the torus quotient, traversed counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub darts: Vec<Dart>,
    pub net: [i64; 2],
}

impl Face {
    pub fn degree(&self) -> usize {
        self.darts.len()
    }

    /// Cell of each dart's tail when the walk starts in cell `(0,0)`.
    pub fn tail_offsets(&self, g: &PeriodicGraph) -> Vec<[i64; 2]> {
        let mut off = [0i64, 0];
        self.darts
            .iter()
            .map(|&d| {
                let here = off;
                let s = g.dart_shift(d);
                off = [off[0] + s[0], off[1] + s[1]];
                here
            })
            .collect()
    }

    /// Unwrapped fractional positions of the corners, in walk order.
    pub fn corners(&self, g: &PeriodicGraph) -> Vec<[f64; 2]> {
        self.darts
            .iter()
            .zip(self.tail_offsets(g))
            .map(|(&d, o)| {
                let p = g.vertices()[g.tail(d)].pos;
                [p[0] + o[0] as f64, p[1] + o[1] as f64]
            })
            .collect()
    }
}

/// All faces of the n = 1 torus quotient plus a dart → face lookup.
#[derive(Debug, Clone)]
pub struct Faces {
    pub faces: Vec<Face>,
    pub dart_face: Vec<usize>,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Face> {
        self.faces.iter()
    }

    pub fn face_of(&self, d: Dart) -> usize {
        self.dart_face[d]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.faces.iter().map(Face::degree).collect()
    }
}

/// Traces the faces of the toroidal cell complex.
///
/// Each face keeps itself on the left: from dart `d` the walk continues with
/// the outgoing dart at `head(d)` that is next clockwise from `reverse(d)`.
pub fn trace_faces(g: &PeriodicGraph) -> Result<Faces> {
    let rot = g.rotation()?;
    let mut pos_in_rot = vec![0usize; 2 * g.edge_count()];
    for list in &rot {
        for (k, &d) in list.iter().enumerate() {
            pos_in_rot[d] = k;
        }
    }
    let next = |d: Dart| -> Dart {
        let r = dart_reverse(d);
        let list = &rot[g.tail(r)];
        let k = pos_in_rot[r];
        list[(k + list.len() - 1) % list.len()]
    };
    let nd = 2 * g.edge_count();
    let mut dart_face = vec![usize::MAX; nd];
    let mut faces = Vec::new();
    for start in 0..nd {
        if dart_face[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut darts = Vec::new();
        let mut net = [0i64, 0];
        let mut d = start;
        loop {
            dart_face[d] = id;
            darts.push(d);
            let s = g.dart_shift(d);
            net = [net[0] + s[0], net[1] + s[1]];
            d = next(d);
            if d == start {
                break;
            }
        }
        if net != [0, 0] {
            return Err(Error::NonContractibleFace { face: id, net });
        }
        faces.push(Face { darts, net });
    }
    let (v, e, f) = (g.vertex_count(), g.edge_count(), faces.len());
    if v + f != e {
        return Err(Error::Euler { v, e, f });
    }
    Ok(Faces { faces, dart_face })
}

/// Two-coloring of the n = 1 quotient, white first.
///
/// Supplied colors are checked and returned unchanged. A failure reports an
/// odd cycle by vertex ids.
pub fn validate_bipartite(g: &PeriodicGraph) -> Result<Vec<Color>> {
    if let Some(colors) = g.colors() {
        for (k, e) in g.edges().iter().enumerate() {
            if colors[e.u] == colors[e.v] {
                return Err(Error::ColorConflict(k));
            }
        }
        return Ok(colors);
    }
    let n = g.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut color: Vec<Option<Color>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(Color::White);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let cx = color[x].unwrap();
            for &y in &adj[x] {
                match color[y] {
                    None => {
                        color[y] = Some(cx.opposite());
                        parent[y] = x;
                        depth[y] = depth[x] + 1;
                        queue.push_back(y);
                    }
                    Some(cy) if cy == cx => {
                        return Err(Error::OddCycle(odd_cycle(g, &parent, &depth, x, y)));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(color.into_iter().map(Option::unwrap).collect())
}

fn odd_cycle(g: &PeriodicGraph, parent: &[usize], depth: &[usize], a: usize, b: usize) -> Vec<String> {
    let (mut x, mut y) = (a, b);
    let mut left = vec![x];
    let mut right = vec![y];
    while x != y {
        if depth[x] >= depth[y] {
            x = parent[x];
            left.push(x);
        } else {
            y = parent[y];
            right.push(y);
        }
    }
    right.pop();
    left.extend(right.into_iter().rev());
    if left.len() > 1 && left.first() == left.last() {
        left.pop();
    }
    left.into_iter().map(|v| g.vertices()[v].id.clone()).collect()
}

/// A finite (multi)graph, used by the exact counting oracles.
#[derive(Debug, Clone, Default)]
pub struct FiniteGraph {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize, f64)>,
    pub positions: Option<Vec<[f64; 2]>>,
    pub colors: Option<Vec<Color>>,
}

impl FiniteGraph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Self {
        FiniteGraph { n_vertices, edges, positions: None, colors: None }
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n_vertices];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// The finite quotient `G / nZ²`.
///
/// Internally the quotient is kept as an `n × n` supercell, itself a
/// periodic graph, so faces and signs of `Gₙ` reuse the same machinery.
#[derive(Debug, Clone)]
pub struct TorusGraph {
    pub n: usize,
    pub base: PeriodicGraph,
    pub supercell: PeriodicGraph,
    /// `(cell, base vertex)` of each quotient vertex.
    pub cells: Vec<([usize; 2], usize)>,
    /// Base edge of each quotient edge.
    pub edge_base: Vec<usize>,
}

impl TorusGraph {
    pub fn vertex_count(&self) -> usize {
        self.supercell.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.supercell.edge_count()
    }

    pub fn index(&self, cell: [usize; 2], base: usize) -> usize {
        (cell[0] * self.n + cell[1]) * self.base.vertex_count() + base
    }

    /// All quotient edges as a finite multigraph (loops dropped).
    pub fn multigraph(&self) -> FiniteGraph {
        self.finite(|_| true)
    }

    /// The quotient cut open along the supercell boundary: only edges that
    /// stay inside the `n × n` block are kept, giving a planar graph.
    pub fn cut_open(&self) -> FiniteGraph {
        self.finite(|e| e.shift == [0, 0])
    }

    fn finite(&self, keep: impl Fn(&Edge) -> bool) -> FiniteGraph {
        let g = &self.supercell;
        FiniteGraph {
            n_vertices: g.vertex_count(),
            edges: g.edges().iter().filter(|e| e.u != e.v && keep(e)).map(|e| (e.u, e.v, e.weight)).collect(),
            positions: Some(g.vertices().iter().map(|v| v.pos).collect()),
            colors: g.colors(),
        }
    }
}

/// Builds the quotient by `nZ²`.
pub fn quotient(g: &PeriodicGraph, n: usize) -> TorusGraph {
    assert!(n >= 1, "quotient needs n >= 1");
    let nv = g.vertex_count();
    let mut vertices = Vec::with_capacity(n * n * nv);
    let mut cells = Vec::with_capacity(n * n * nv);
    for i in 0..n {
        for j in 0..n {
            for (b, v) in g.vertices().iter().enumerate() {
                vertices.push(Vertex {
                    id: if n == 1 { v.id.clone() } else { format!("{}@{},{}", v.id, i, j) },
                    pos: [(i as f64 + v.pos[0]) / n as f64, (j as f64 + v.pos[1]) / n as f64],
                    color: v.color,
                });
                cells.push(([i, j], b));
            }
        }
    }
    let ni = n as i64;
    let mut edges = Vec::with_capacity(n * n * g.edge_count());
    let mut edge_base = Vec::with_capacity(n * n * g.edge_count());
    for i in 0..ni {
        for j in 0..ni {
            for (k, e) in g.edges().iter().enumerate() {
                let (ti, tj) = (i + e.shift[0], j + e.shift[1]);
                let u = ((i * ni + j) as usize) * nv + e.u;
                let v = ((ti.rem_euclid(ni) * ni + tj.rem_euclid(ni)) as usize) * nv + e.v;
                edges.push(Edge { u, v, shift: [ti.div_euclid(ni), tj.div_euclid(ni)], weight: e.weight });
                edge_base.push(k);
            }
        }
    }
    let supercell = PeriodicGraph { name: format!("{}/{}", g.name, n), vertices, edges };
    TorusGraph { n, base: g.clone(), supercell, cells, edge_base }
}

/// Cartesian basis of the translation lattice.
///
/// Graphs are stored in fractional coordinates of the unit square; a lattice
/// maps them to the plane wherever metric data (angles, radii) matters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl Lattice {
    pub const SQUARE: Lattice = Lattice { a: [1.0, 0.0], b: [0.0, 1.0] };

    /// Basis `(1, 0), (1/2, √3/2)` of the triangular lattice.
    pub fn triangular() -> Lattice {
        Lattice { a: [1.0, 0.0], b: [0.5, 3f64.sqrt() / 2.0] }
    }

    pub fn scaled(&self, s: f64) -> Lattice {
        Lattice { a: [s * self.a[0], s * self.a[1]], b: [s * self.b[0], s * self.b[1]] }
    }

    pub fn to_cartesian(&self, p: [f64; 2]) -> [f64; 2] {
        [p[0] * self.a[0] + p[1] * self.b[0], p[0] * self.a[1] + p[1] * self.b[1]]
    }

    pub fn to_fractional(&self, x: [f64; 2]) -> [f64; 2] {
        let det = self.a[0] * self.b[1] - self.a[1] * self.b[0];
        [(x[0] * self.b[1] - x[1] * self.b[0]) / det, (self.a[0] * x[1] - self.a[1] * x[0]) / det]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn honeycomb() -> PeriodicGraph {
        load_graph(
            r#"{"name":"honeycomb",
                "vertices":[{"id":"v0","pos":[0.3,0.3],"color":null},{"id":"v1","pos":[0.7,0.7],"color":null}],
                "edges":[{"u":"v0","v":"v1","shift":[0,0],"weight":1},
                         {"u":"v0","v":"v1","shift":[-1,0],"weight":1},
                         {"u":"v0","v":"v1","shift":[0,-1],"weight":1}]}"#,
        )
        .unwrap()
    }

    fn square() -> PeriodicGraph {
        let mut b = Builder::new("square");
        let v = b.vertex("v", [0.5, 0.5]);
        b.edge(v, v, [1, 0], 1.0);
        b.edge(v, v, [0, 1], 1.0);
        b.build().unwrap()
    }

    fn triangular() -> PeriodicGraph {
        let mut b = Builder::new("triangular");
        let v = b.vertex("v", [0.5, 0.5]);
        b.edge(v, v, [1, 0], 1.0);
        b.edge(v, v, [0, 1], 1.0);
        b.edge(v, v, [-1, 1], 1.0);
        b.build().unwrap()
    }

    #[test]
    fn loads_honeycomb() {
        let g = honeycomb();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edges()[1].shift, [-1, 0]);
    }

    #[test]
    fn rejects_unknown_endpoint() {
        let err = load_graph(
            r#"{"name":"x","vertices":[{"id":"a","pos":[0,0]}],
                "edges":[{"u":"a","v":"x9","shift":[1,0],"weight":1}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("unknown endpoint"), "{err}");
    }

    #[test]
    fn rejects_zero_weight() {
        let err = load_graph(
            r#"{"name":"x","vertices":[{"id":"a","pos":[0,0]}],
                "edges":[{"u":"a","v":"a","shift":[1,0],"weight":0},{"u":"a","v":"a","shift":[0,1],"weight":1}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("nonpositive weight"), "{err}");
    }

    #[test]
    fn rejects_bad_input() {
        let dup = load_graph(r#"{"name":"x","vertices":[{"id":"a","pos":[0,0]},{"id":"a","pos":[0.5,0]}],"edges":[]}"#);
        assert!(matches!(dup, Err(Error::DuplicateVertex(_))));
        let shift = load_graph(
            r#"{"name":"x","vertices":[{"id":"a","pos":[0,0]}],"edges":[{"u":"a","v":"a","shift":[0.5,0],"weight":1}]}"#,
        );
        assert!(matches!(shift, Err(Error::MalformedShift(0))));
        let loop_ = load_graph(
            r#"{"name":"x","vertices":[{"id":"a","pos":[0,0]}],"edges":[{"u":"a","v":"a","shift":[0,0],"weight":1}]}"#,
        );
        assert!(matches!(loop_, Err(Error::Loop(0))));
        let disconnected = load_graph(
            r#"{"name":"x","vertices":[{"id":"a","pos":[0,0]}],"edges":[{"u":"a","v":"a","shift":[1,0],"weight":1}]}"#,
        );
        assert!(matches!(disconnected, Err(Error::Disconnected)));
    }

    #[test]
    fn positions_wrap_with_shift_correction() {
        let mut b = Builder::new("wrapped");
        let a = b.vertex("a", [0.25, 0.25]);
        b.edge(a, a, [1, 0], 1.0);
        b.edge(a, a, [0, 1], 1.0);
        let g = b.build().unwrap();
        let raw = PeriodicGraph::new(
            "raw",
            vec![
                Vertex { id: "a".into(), pos: [0.2, 0.2], color: None },
                Vertex { id: "b".into(), pos: [1.6, 0.2], color: None },
            ],
            vec![
                Edge { u: 0, v: 1, shift: [0, 0], weight: 1.0 },
                Edge { u: 1, v: 0, shift: [1, 0], weight: 1.0 },
                Edge { u: 0, v: 0, shift: [0, 1], weight: 1.0 },
            ],
        )
        .unwrap();
        assert!((raw.vertices()[1].pos[0] - 0.6).abs() < 1e-12);
        assert_eq!(raw.edges()[0].shift, [1, 0]);
        assert_eq!(raw.edges()[1].shift, [0, 0]);
        assert!((raw.displacement(0)[0] - 1.4).abs() < 1e-12);
        assert_eq!(g.vertex_count(), 1);
    }

    #[test]
    fn json_round_trip() {
        let g = honeycomb();
        assert_eq!(load_graph(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn quotient_counts() {
        let sq = quotient(&square(), 2);
        assert_eq!((sq.vertex_count(), sq.edge_count()), (4, 8));
        let hc = quotient(&honeycomb(), 1);
        assert_eq!((hc.vertex_count(), hc.edge_count()), (2, 3));
        assert_eq!(hc.multigraph().edges.len(), 3);
        let tri = quotient(&triangular(), 3);
        assert_eq!((tri.vertex_count(), tri.edge_count()), (9, 27));
    }

    #[test]
    fn faces_of_small_quotients() {
        let sq = trace_faces(&square()).unwrap();
        assert_eq!(sq.degrees(), vec![4]);
        let hc = trace_faces(&honeycomb()).unwrap();
        assert_eq!(hc.degrees(), vec![6]);
        let tri = trace_faces(&triangular()).unwrap();
        assert_eq!(tri.degrees(), vec![3, 3]);
        for n in 1..=4 {
            let q = quotient(&triangular(), n);
            let f = trace_faces(&q.supercell).unwrap();
            assert_eq!(q.vertex_count() + f.len(), q.edge_count());
        }
    }

    #[test]
    fn coincident_directions_rejected() {
        let mut b = Builder::new("bad");
        let a = b.vertex("a", [0.1, 0.1]);
        let c = b.vertex("c", [0.3, 0.1]);
        let d = b.vertex("d", [0.6, 0.1]);
        b.edge(a, c, [0, 0], 1.0);
        b.edge(a, d, [0, 0], 1.0);
        b.edge(c, d, [0, 1], 1.0);
        b.edge(d, a, [1, 0], 1.0);
        let g = b.build().unwrap();
        assert!(matches!(trace_faces(&g), Err(Error::CoincidentDirections(_))));
    }

    #[test]
    fn bipartite_colorings() {
        let c = validate_bipartite(&honeycomb()).unwrap();
        assert_eq!(c, vec![Color::White, Color::Black]);
        match validate_bipartite(&triangular()) {
            Err(Error::OddCycle(cycle)) => assert_eq!(cycle.len() % 2, 1),
            other => panic!("expected odd cycle, got {other:?}"),
        }
        let colored = honeycomb().with_colors(&[Color::Black, Color::White]).unwrap();
        assert_eq!(validate_bipartite(&colored).unwrap(), vec![Color::Black, Color::White]);
    }

    #[test]
    fn bipartite_iff_even_faces_on_double_cover() {
        for g in [square(), triangular(), honeycomb()] {
            let even = trace_faces(&g).unwrap().degrees().iter().all(|d| d % 2 == 0);
            let ok = validate_bipartite(&quotient(&g, 2).supercell).is_ok();
            assert_eq!(even, ok, "{}", g.name);
        }
    }
}
