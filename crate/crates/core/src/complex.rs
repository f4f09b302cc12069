//! Oriented combinatorial 2-complexes and abstract van Kampen labelings.
//!
//! A [`Complex2`] stores each geometric edge once with a chosen orientation
//! and each geometric face once with a chosen orientation and start point.
//! Inverse edges and inverse faces are virtual: an [`OrientedEdge`] is a
//! geometric edge plus a direction, and the inverse face of `f` has boundary
//! `(∂f)⁻¹` read from the same base vertex.
//!
//! Indices in this API are 0-based. The text format (see [`crate::text`])
//! numbers vertices, edges and faces from 1.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// A geometric edge traversed in its stored direction (`forward`) or against it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OrientedEdge {
    pub edge: usize,
    pub forward: bool,
}

impl OrientedEdge {
    pub fn fwd(edge: usize) -> OrientedEdge {
        OrientedEdge { edge, forward: true }
    }

    pub fn rev(edge: usize) -> OrientedEdge {
        OrientedEdge { edge, forward: false }
    }

    /// `+id`/`-id` shorthand with 1-based ids, as in the text format.
    pub fn signed(id: i64) -> OrientedEdge {
        assert!(id != 0, "signed edge ids are 1-based");
        OrientedEdge { edge: id.unsigned_abs() as usize - 1, forward: id > 0 }
    }

    #[must_use]
    pub fn inverse(self) -> OrientedEdge {
        OrientedEdge { edge: self.edge, forward: !self.forward }
    }

    pub fn to_signed(self) -> i64 {
        let id = self.edge as i64 + 1;
        if self.forward {
            id
        } else {
            -id
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Face {
    pub boundary: Vec<OrientedEdge>,
}

impl Face {
    pub fn new(boundary: Vec<OrientedEdge>) -> Face {
        Face { boundary }
    }

    /// Shorthand taking 1-based signed edge ids.
    pub fn from_signed(ids: &[i64]) -> Face {
        Face { boundary: ids.iter().map(|&i| OrientedEdge::signed(i)).collect() }
    }

    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }
}

/// A structural problem reported by [`Complex2::validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Diagnostic {
    VertexOutOfRange { edge: usize, vertex: usize },
    DanglingEdge { face: usize, position: usize, edge: usize },
    EmptyBoundary { face: usize },
    BoundaryNotLoop { face: usize, position: usize },
    BoundaryNotReduced { face: usize, position: usize },
    IsolatedEdge { edge: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Diagnostic::VertexOutOfRange { edge, vertex } => {
                write!(f, "edge {} references missing vertex {}", edge + 1, vertex + 1)
            }
            Diagnostic::DanglingEdge { face, position, edge } => write!(
                f,
                "face {} position {} references missing edge {}",
                face + 1,
                position,
                edge + 1
            ),
            Diagnostic::EmptyBoundary { face } => write!(f, "face {} has an empty boundary", face + 1),
            Diagnostic::BoundaryNotLoop { face, position } => write!(
                f,
                "boundary of face {} is not a loop at position {}",
                face + 1,
                position
            ),
            Diagnostic::BoundaryNotReduced { face, position } => write!(
                f,
                "boundary not cyclically reduced: face {} backtracks at position {}",
                face + 1,
                position
            ),
            Diagnostic::IsolatedEdge { edge } => write!(f, "isolated edge {}", edge + 1),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("invalid complex: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("empty face subset")]
    EmptySubset,
    #[error("face {0} does not exist")]
    NoSuchFace(usize),
    #[error("labeling has {labels} labels for {faces} faces")]
    LabelCount { labels: usize, faces: usize },
    #[error("abstract relator {relator} is used by faces of different lengths ({first} and {second})")]
    InconsistentLength { relator: usize, first: usize, second: usize },
    #[error("abstract relator {0} is not used by any face")]
    UnusedRelator(usize),
}

fn join_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// An oriented combinatorial 2-complex `Y = (V, E, F)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Complex2 {
    vertex_count: usize,
    edges: Vec<Edge>,
    faces: Vec<Face>,
}

impl Complex2 {
    /// Assembles a complex without validating it. Use [`Complex2::build`]
    /// unless the diagnostics are wanted.
    pub fn from_parts(vertex_count: usize, edges: Vec<Edge>, faces: Vec<Face>) -> Complex2 {
        Complex2 { vertex_count, edges, faces }
    }

    /// Assembles and validates, rejecting any structural violation.
    pub fn build(vertex_count: usize, edges: Vec<Edge>, faces: Vec<Face>) -> Result<Complex2, ComplexError> {
        let c = Complex2::from_parts(vertex_count, edges, faces);
        let diagnostics = c.validate();
        if diagnostics.is_empty() {
            Ok(c)
        } else {
            Err(ComplexError::Invalid(diagnostics))
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// `|Y^{(1)}|`, the number of geometric edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|Y|`, the number of geometric faces.
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn boundary(&self, face: usize) -> &[OrientedEdge] {
        &self.faces[face].boundary
    }

    /// `α(e)`
    pub fn start(&self, e: OrientedEdge) -> usize {
        let edge = self.edges[e.edge];
        if e.forward {
            edge.from
        } else {
            edge.to
        }
    }

    /// `ω(e)`
    pub fn end(&self, e: OrientedEdge) -> usize {
        self.start(e.inverse())
    }

    /// Every structural violation, in a deterministic order. Empty iff valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            for v in [e.from, e.to] {
                if v >= self.vertex_count {
                    out.push(Diagnostic::VertexOutOfRange { edge: i, vertex: v });
                }
            }
        }
        let edges_ok = out.is_empty();
        for (fi, face) in self.faces.iter().enumerate() {
            if face.boundary.is_empty() {
                out.push(Diagnostic::EmptyBoundary { face: fi });
                continue;
            }
            let dangling: Vec<_> = face
                .boundary
                .iter()
                .enumerate()
                .filter(|(_, o)| o.edge >= self.edges.len())
                .map(|(position, o)| Diagnostic::DanglingEdge { face: fi, position, edge: o.edge })
                .collect();
            if !dangling.is_empty() || !edges_ok {
                out.extend(dangling);
                continue;
            }
            let n = face.boundary.len();
            for j in 0..n {
                let cur = face.boundary[j];
                let next = face.boundary[(j + 1) % n];
                if self.end(cur) != self.start(next) {
                    out.push(Diagnostic::BoundaryNotLoop { face: fi, position: j });
                }
            }
            for j in 0..n {
                let cur = face.boundary[j];
                let next = face.boundary[(j + 1) % n];
                if next == cur.inverse() {
                    out.push(Diagnostic::BoundaryNotReduced { face: fi, position: j });
                }
            }
        }
        let incidence = self.edge_incidence();
        for (edge, &count) in incidence.iter().enumerate() {
            if count == 0 {
                out.push(Diagnostic::IsolatedEdge { edge });
            }
        }
        out
    }

    /// Number of face-boundary traversals of each geometric edge, with multiplicity.
    pub fn edge_incidence(&self) -> Vec<usize> {
        let mut counts = vec![0; self.edges.len()];
        for face in &self.faces {
            for o in &face.boundary {
                if let Some(c) = counts.get_mut(o.edge) {
                    *c += 1;
                }
            }
        }
        counts
    }

    /// Half-edge degree of every vertex; a loop contributes 2.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            deg[e.from] += 1;
            deg[e.to] += 1;
        }
        deg
    }

    /// Oriented edges leaving each vertex.
    fn outgoing(&self) -> Vec<Vec<OrientedEdge>> {
        let mut out = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.from].push(OrientedEdge::fwd(i));
            out[e.to].push(OrientedEdge::rev(i));
        }
        out
    }

    /// Partition of the geometric edges into maximal arcs.
    ///
    /// Arcs run between vertices of degree ≠ 2 and pass only through
    /// vertices of degree 2. A component whose vertices all have degree 2 is
    /// a single closed arc.
    pub fn maximal_arcs(&self) -> Vec<Arc> {
        let deg = self.degrees();
        let out = self.outgoing();
        let mut visited = vec![false; self.edges.len()];
        let mut arcs = Vec::new();

        let next_at = |v: usize, arrived: OrientedEdge| -> OrientedEdge {
            let back = arrived.inverse();
            let pair = &out[v];
            if pair[0] == back {
                pair[1]
            } else {
                pair[0]
            }
        };

        for v in 0..self.vertex_count {
            if deg[v] == 2 {
                continue;
            }
            for &start in &out[v] {
                if visited[start.edge] {
                    continue;
                }
                let mut path = vec![start];
                visited[start.edge] = true;
                let mut cur = self.end(start);
                while deg[cur] == 2 {
                    let next = next_at(cur, *path.last().unwrap());
                    visited[next.edge] = true;
                    path.push(next);
                    cur = self.end(next);
                }
                arcs.push(Arc { edges: path, closed: false });
            }
        }

        for e in 0..self.edges.len() {
            if visited[e] {
                continue;
            }
            let start = OrientedEdge::fwd(e);
            let mut path = vec![start];
            visited[e] = true;
            let mut cur = self.end(start);
            loop {
                let next = next_at(cur, *path.last().unwrap());
                if next == start {
                    break;
                }
                visited[next.edge] = true;
                path.push(next);
                cur = self.end(next);
            }
            arcs.push(Arc { edges: path, closed: true });
        }
        arcs
    }

    /// Number of maximal-arc traversals along each face boundary.
    pub fn boundary_arc_counts(&self) -> Vec<usize> {
        let deg = self.degrees();
        let closed_firsts: BTreeSet<usize> = self
            .maximal_arcs()
            .iter()
            .filter(|a| a.closed)
            .map(|a| a.edges[0].edge)
            .collect();
        self.faces
            .iter()
            .map(|f| {
                f.boundary
                    .iter()
                    .filter(|&&o| deg[self.start(o)] != 2 || closed_firsts.contains(&o.edge))
                    .count()
            })
            .collect()
    }

    /// Complexity `K`: at most `K` faces, at most `K` maximal arcs, and every
    /// face boundary crossing at most `K` maximal arcs.
    pub fn satisfies_complexity(&self, k: usize) -> bool {
        self.face_count() <= k
            && self.maximal_arcs().len() <= k
            && self.boundary_arc_counts().iter().all(|&c| c <= k)
    }

    /// Smallest `K` for which [`Complex2::satisfies_complexity`] holds.
    pub fn complexity(&self) -> usize {
        let arcs = self.maximal_arcs().len();
        let per_face = self.boundary_arc_counts().into_iter().max().unwrap_or(0);
        self.face_count().max(arcs).max(per_face)
    }

    /// Some geometric edge lies on exactly one face boundary, once.
    pub fn is_contractible(&self) -> bool {
        self.edge_incidence().contains(&1)
    }

    /// Boundary length of a diagram: once per edge adjacent to one face,
    /// twice per edge adjacent to none.
    pub fn diagram_boundary_length(&self) -> usize {
        self.edge_incidence()
            .iter()
            .map(|&c| match c {
                0 => 2,
                1 => 1,
                _ => 0,
            })
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let out = self.outgoing();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &o in &out[v] {
                let w = self.end(o);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The sub-2-complex generated by `faces`: those faces with exactly the
    /// edges and vertices on their boundaries, renumbered in original order.
    pub fn face_subcomplex(&self, faces: &[usize]) -> Result<Subcomplex, ComplexError> {
        if faces.is_empty() {
            return Err(ComplexError::EmptySubset);
        }
        let face_ids: BTreeSet<usize> = faces.iter().copied().collect();
        if let Some(&bad) = face_ids.iter().find(|&&f| f >= self.faces.len()) {
            return Err(ComplexError::NoSuchFace(bad));
        }
        let edge_ids: BTreeSet<usize> = face_ids
            .iter()
            .flat_map(|&f| self.faces[f].boundary.iter().map(|o| o.edge))
            .collect();
        let vertex_ids: BTreeSet<usize> = edge_ids
            .iter()
            .flat_map(|&e| [self.edges[e].from, self.edges[e].to])
            .collect();
        let vmap: HashMap<usize, usize> = vertex_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let emap: HashMap<usize, usize> = edge_ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let edges = edge_ids
            .iter()
            .map(|&e| Edge { from: vmap[&self.edges[e].from], to: vmap[&self.edges[e].to] })
            .collect();
        let new_faces = face_ids
            .iter()
            .map(|&f| Face {
                boundary: self.faces[f]
                    .boundary
                    .iter()
                    .map(|o| OrientedEdge { edge: emap[&o.edge], forward: o.forward })
                    .collect(),
            })
            .collect();
        Ok(Subcomplex {
            complex: Complex2::from_parts(vertex_ids.len(), edges, new_faces),
            faces: face_ids.into_iter().collect(),
            edges: edge_ids.into_iter().collect(),
            vertices: vertex_ids.into_iter().collect(),
        })
    }
}

/// A maximal arc as a reduced path of oriented edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arc {
    pub edges: Vec<OrientedEdge>,
    /// A cycle through degree-2 vertices only, with no endpoints.
    pub closed: bool,
}

impl Arc {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Output of [`Complex2::face_subcomplex`] with the original ids of every
/// kept face, edge and vertex (index `i` of the new complex maps to entry `i`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subcomplex {
    pub complex: Complex2,
    pub faces: Vec<usize>,
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

/// Face label `i` or `i⁻` with `i` a 0-based abstract relator index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FaceLabel {
    pub relator: usize,
    pub inverted: bool,
}

impl FaceLabel {
    pub fn pos(relator: usize) -> FaceLabel {
        FaceLabel { relator, inverted: false }
    }

    pub fn neg(relator: usize) -> FaceLabel {
        FaceLabel { relator, inverted: true }
    }

    /// `±i` with `i` 1-based, as in the text format.
    pub fn signed(value: i64) -> FaceLabel {
        assert!(value != 0, "face labels are 1-based");
        FaceLabel { relator: value.unsigned_abs() as usize - 1, inverted: value < 0 }
    }

    pub fn to_signed(self) -> i64 {
        let i = self.relator as i64 + 1;
        if self.inverted {
            -i
        } else {
            i
        }
    }
}

/// An abstract van Kampen structure: every geometric face labeled by an
/// abstract relator `i ∈ 1..k` or its inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbstractLabeling {
    labels: Vec<FaceLabel>,
    k: usize,
    lengths: Vec<usize>,
}

impl AbstractLabeling {
    pub fn new(c: &Complex2, labels: Vec<FaceLabel>) -> Result<AbstractLabeling, ComplexError> {
        if labels.len() != c.face_count() {
            return Err(ComplexError::LabelCount { labels: labels.len(), faces: c.face_count() });
        }
        let k = labels.iter().map(|l| l.relator + 1).max().unwrap_or(0);
        let mut lengths: Vec<Option<usize>> = vec![None; k];
        for (f, l) in labels.iter().enumerate() {
            let len = c.boundary(f).len();
            match lengths[l.relator] {
                None => lengths[l.relator] = Some(len),
                Some(prev) if prev != len => {
                    return Err(ComplexError::InconsistentLength {
                        relator: l.relator,
                        first: prev,
                        second: len,
                    })
                }
                Some(_) => {}
            }
        }
        let lengths = lengths
            .into_iter()
            .enumerate()
            .map(|(i, l)| l.ok_or(ComplexError::UnusedRelator(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AbstractLabeling { labels, k, lengths })
    }

    /// Every face gets its own positive abstract relator.
    pub fn distinct(c: &Complex2) -> AbstractLabeling {
        AbstractLabeling::new(c, (0..c.face_count()).map(FaceLabel::pos).collect())
            .expect("one relator per face is always consistent")
    }

    pub fn labels(&self) -> &[FaceLabel] {
        &self.labels
    }

    pub fn label(&self, face: usize) -> FaceLabel {
        self.labels[face]
    }

    /// Number of abstract relators `k`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// `ℓ_i` for each abstract relator.
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// `α_i`: faces carrying `±i`.
    pub fn alpha(&self, relator: usize) -> usize {
        self.labels.iter().filter(|l| l.relator == relator).count()
    }

    pub fn faces_with(&self, relator: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&f| self.labels[f].relator == relator).collect()
    }

    /// The boundary of the orientation of `face` that carries the positive
    /// label `i`: `∂f` itself, or `(∂f)⁻¹` read from the same base vertex.
    pub fn positive_boundary(&self, c: &Complex2, face: usize) -> Vec<OrientedEdge> {
        oriented_boundary(c, face, self.labels[face].inverted)
    }

    /// Restricts the labeling to a face subcomplex, renumbering the
    /// abstract relators that remain in use in increasing order.
    pub fn restrict(&self, sub: &Subcomplex) -> AbstractLabeling {
        let used: BTreeSet<usize> = sub.faces.iter().map(|&f| self.labels[f].relator).collect();
        let renumber: HashMap<usize, usize> = used.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let labels = sub
            .faces
            .iter()
            .map(|&f| {
                let l = self.labels[f];
                FaceLabel { relator: renumber[&l.relator], inverted: l.inverted }
            })
            .collect();
        AbstractLabeling::new(&sub.complex, labels).expect("restriction keeps lengths consistent")
    }
}

/// The boundary of `face` read in the given orientation.
pub fn oriented_boundary(c: &Complex2, face: usize, inverted: bool) -> Vec<OrientedEdge> {
    let b = c.boundary(face);
    if inverted {
        b.iter().rev().map(|o| o.inverse()).collect()
    } else {
        b.to_vec()
    }
}

/// "The geometric edge is the `position`-th edge of a face labeled
/// `relator`", with the direction in which that face traverses it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Decoration {
    pub relator: usize,
    pub position: usize,
    pub face: usize,
    pub forward: bool,
}

/// Decorations on each geometric edge, sorted by abstract letter `(i, j)`.
pub fn decorations(c: &Complex2, lab: &AbstractLabeling) -> Vec<Vec<Decoration>> {
    let mut out = vec![Vec::new(); c.edge_count()];
    for face in 0..c.face_count() {
        let relator = lab.label(face).relator;
        for (position, o) in lab.positive_boundary(c, face).into_iter().enumerate() {
            out[o.edge].push(Decoration { relator, position, face, forward: o.forward });
        }
    }
    for d in &mut out {
        d.sort();
    }
    out
}

/// How edges are grouped when counting coincidences for the reduction degree.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum RedConvention {
    /// `e` and `e⁻¹` count together (per geometric edge). Canonical.
    #[default]
    GeometricEdge,
    /// Oriented edges counted separately: the literal double sum over `E`.
    OrientedEdge,
}

/// Reduction degree `Red(Ỹ)` in the canonical per-geometric-edge form.
pub fn reduction_degree(c: &Complex2, lab: &AbstractLabeling) -> usize {
    reduction_degree_with(c, lab, RedConvention::GeometricEdge)
}

pub fn reduction_degree_with(c: &Complex2, lab: &AbstractLabeling, convention: RedConvention) -> usize {
    let mut counts: HashMap<(usize, bool, usize, usize), usize> = HashMap::new();
    for face in 0..c.face_count() {
        let relator = lab.label(face).relator;
        for (j, o) in lab.positive_boundary(c, face).into_iter().enumerate() {
            let dir = match convention {
                RedConvention::GeometricEdge => true,
                RedConvention::OrientedEdge => o.forward,
            };
            *counts.entry((o.edge, dir, relator, j)).or_default() += 1;
        }
    }
    counts.values().map(|&n| n - 1).sum()
}

/// Direct pairwise scan: two distinct faces with the same abstract relator
/// having the same geometric edge at the same boundary position.
pub fn has_reducible_pair(c: &Complex2, lab: &AbstractLabeling) -> bool {
    let boundaries: Vec<Vec<OrientedEdge>> = (0..c.face_count()).map(|f| lab.positive_boundary(c, f)).collect();
    for f in 0..c.face_count() {
        for g in f + 1..c.face_count() {
            if lab.label(f).relator != lab.label(g).relator {
                continue;
            }
            if boundaries[f].iter().zip(&boundaries[g]).any(|(a, b)| a.edge == b.edge) {
                return true;
            }
        }
    }
    false
}

/// `(α_i, η_i)` for one abstract relator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FreeToFill {
    /// Faces labeled `±i`.
    pub alpha: usize,
    /// Free-to-fill abstract letters `(i, j)`.
    pub eta: usize,
}

/// Free-to-fill statistics per abstract relator.
///
/// `(i, j)` is free-to-fill when it is the minimal decoration, in
/// lexicographic `(i, j)` order and ignoring direction, on every geometric
/// edge it decorates.
pub fn free_to_fill_stats(c: &Complex2, lab: &AbstractLabeling) -> Vec<FreeToFill> {
    let decs = decorations(c, lab);
    let mut free: Vec<Vec<bool>> = lab.lengths().iter().map(|&l| vec![true; l]).collect();
    for edge_decs in &decs {
        let Some(min) = edge_decs.first() else { continue };
        let min_letter = (min.relator, min.position);
        for d in edge_decs {
            if (d.relator, d.position) != min_letter {
                free[d.relator][d.position] = false;
            }
        }
    }
    (0..lab.k())
        .map(|i| FreeToFill { alpha: lab.alpha(i), eta: free[i].iter().filter(|&&b| b).count() })
        .collect()
}

/// Both sides of the preferred-face inequality
/// `Σ α_i η_i ≤ |Y^{(1)}| + Red(Y)`, returned as `(lhs, rhs)`.
pub fn free_to_fill_bound(c: &Complex2, lab: &AbstractLabeling) -> (usize, usize) {
    let lhs = free_to_fill_stats(c, lab).iter().map(|s| s.alpha * s.eta).sum();
    (lhs, c.edge_count() + reduction_degree(c, lab))
}
