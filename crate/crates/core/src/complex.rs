//! Finite abstract simplicial complexes.
//!
//! A complex is stored by its facets together with the derived set of all
//! nonempty faces, grouped by dimension and kept in lexicographic order so
//! that every enumeration (and every matrix built from one) is reproducible.
//! Complexes carry named *marked* subcomplexes, given as lists of simplices
//! whose downward closure is the subcomplex.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("empty simplex")]
    EmptySimplex,
    #[error("duplicate vertex {vertex} in simplex {simplex:?}")]
    DuplicateVertex { vertex: VertexId, simplex: Vec<VertexId> },
    #[error("unknown vertex id {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("vertex ids must be dense and in order: expected {expected}, found {found}")]
    VertexIdOrder { expected: VertexId, found: VertexId },
    #[error("unknown mark {0:?}")]
    UnknownMark(String),
    #[error("duplicate mark {0:?}")]
    DuplicateMark(String),
    #[error("mark {mark:?} references {simplex} which is not a face")]
    MarkNotAFace { mark: String, simplex: Simplex },
    #[error("{0} is not a facet of the complex")]
    NotMaximal(Simplex),
    #[error("unknown part index {0}")]
    UnknownPart(usize),
    #[error("identification {index}: {reason}")]
    NotAnIsomorphism { index: usize, reason: String },
    #[error("face {face} of part {part} acquires a repeated vertex under the quotient")]
    RepeatedVertexInQuotient { part: usize, face: Simplex },
    #[error("faces {first} and {second} of part {part} collapse to the same simplex")]
    Collapse { part: usize, first: Simplex, second: Simplex },
    #[error("malformed complex JSON: {0}")]
    Json(String),
}

/// A nonempty simplex given by its strictly increasing vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts the vertices; rejects empty input and repeated vertices.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        let original = vertices.clone();
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicateVertex { vertex: w[0], simplex: original });
        }
        Ok(Simplex(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; simplices are nonempty.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// Codimension-one faces, in the order obtained by deleting vertex 0, 1, ...
    /// A vertex has none.
    pub fn boundary(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n)
            .map(move |skip| Simplex(self.0.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect()))
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        debug_assert!(n < 32);
        (1u32..(1 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
            .collect()
    }

    /// Faces of exactly the given dimension.
    pub fn faces_of_dim(&self, dim: usize) -> Vec<Simplex> {
        combinations(&self.0, dim + 1).into_iter().map(Simplex).collect()
    }

    /// Join with a vertex not in the simplex.
    pub fn with_vertex(&self, v: VertexId) -> Simplex {
        debug_assert!(!self.contains(v));
        let mut out = self.0.clone();
        let pos = out.partition_point(|x| *x < v);
        out.insert(pos, v);
        Simplex(out)
    }

    /// Union of two disjoint simplices.
    pub fn join(&self, other: &Simplex) -> Simplex {
        let mut out: Vec<VertexId> = self.0.iter().chain(other.0.iter()).copied().collect();
        out.sort_unstable();
        out.dedup();
        Simplex(out)
    }
}

impl TryFrom<Vec<VertexId>> for Simplex {
    type Error = ComplexError;
    fn try_from(v: Vec<VertexId>) -> Result<Self, Self::Error> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<VertexId> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// All `k`-element subsets of `items` in lexicographic order of positions.
pub(crate) fn combinations<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let n = items.len();
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub label: String,
}

/// Finite abstract simplicial complex. Immutable after construction.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    name: String,
    vertices: Vec<Vertex>,
    facets: Vec<Simplex>,
    faces: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
    marked: BTreeMap<String, Vec<Simplex>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.vertices == other.vertices
            && self.faces == other.faces
            && self.marked == other.marked
    }
}

impl SimplicialComplex {
    /// Downward closure of the given facets. Vertices that occur in no facet
    /// become isolated vertices.
    pub fn from_facets<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        facets: impl IntoIterator<Item = Vec<VertexId>>,
    ) -> Result<Self, ComplexError> {
        let vertices: Vec<Vertex> =
            labels.into_iter().enumerate().map(|(i, l)| Vertex { id: i as VertexId, label: l.into() }).collect();
        let mut top = Vec::new();
        for f in facets {
            let s = Simplex::new(f)?;
            if let Some(&v) = s.vertices().iter().find(|&&v| v as usize >= vertices.len()) {
                return Err(ComplexError::UnknownVertex(v));
            }
            top.push(s);
        }
        Self::from_generators(String::new(), vertices, top, BTreeMap::new())
    }

    /// Builds a complex from any generating set of simplices (closure is taken).
    pub(crate) fn from_generators(
        name: String,
        vertices: Vec<Vertex>,
        generators: Vec<Simplex>,
        marked: BTreeMap<String, Vec<Simplex>>,
    ) -> Result<Self, ComplexError> {
        let mut set: HashSet<Simplex> = HashSet::new();
        for g in &generators {
            if set.contains(g) {
                continue;
            }
            for f in g.faces() {
                set.insert(f);
            }
        }
        for v in 0..vertices.len() {
            set.insert(Simplex::vertex(v as VertexId));
        }
        Self::from_face_set(name, vertices, set, marked)
    }

    /// `set` must already be downward closed.
    pub(crate) fn from_face_set(
        name: String,
        vertices: Vec<Vertex>,
        set: HashSet<Simplex>,
        marked: BTreeMap<String, Vec<Simplex>>,
    ) -> Result<Self, ComplexError> {
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.label.as_str()) {
                return Err(ComplexError::DuplicateLabel(v.label.clone()));
            }
        }
        let top = set.iter().map(Simplex::dim).max();
        let mut faces: Vec<Vec<Simplex>> = vec![Vec::new(); top.map_or(0, |d| d + 1)];
        for s in set {
            if let Some(&v) = s.vertices().iter().find(|&&v| v as usize >= vertices.len()) {
                return Err(ComplexError::UnknownVertex(v));
            }
            faces[s.dim()].push(s);
        }
        for layer in &mut faces {
            layer.sort_unstable();
        }
        let mut index = HashMap::with_capacity(faces.iter().map(Vec::len).sum());
        for layer in &faces {
            for (i, s) in layer.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        let mut covered: HashSet<&Simplex> = HashSet::new();
        for layer in faces.iter().skip(1) {
            for s in layer {
                for b in s.boundary() {
                    if let Some((k, _)) = index.get_key_value(&b) {
                        covered.insert(k);
                    }
                }
            }
        }
        let mut facets: Vec<Simplex> = faces.iter().flatten().filter(|s| !covered.contains(s)).cloned().collect();
        facets.sort_unstable();

        let mut complex = SimplicialComplex { name, vertices, facets, faces, index, marked: BTreeMap::new() };
        for (name, simplices) in marked {
            complex = complex.with_mark(name, simplices)?;
        }
        Ok(complex)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Adds (or replaces) a marked subcomplex. Every listed simplex must be a face.
    pub fn with_mark(
        mut self,
        name: impl Into<String>,
        simplices: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self, ComplexError> {
        let name = name.into();
        let mut list: Vec<Simplex> = simplices.into_iter().collect();
        for s in &list {
            if !self.contains(s) {
                return Err(ComplexError::MarkNotAFace { mark: name, simplex: s.clone() });
            }
        }
        list.sort_unstable();
        list.dedup();
        self.marked.insert(name, list);
        Ok(self)
    }

    pub fn without_mark(mut self, name: &str) -> Self {
        self.marked.remove(name);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.vertices[v as usize].label
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.vertices.iter().find(|v| v.label == label).map(|v| v.id)
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// Faces of dimension `d` in lexicographic order; empty past the top dimension.
    pub fn faces(&self, d: usize) -> &[Simplex] {
        self.faces.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter().flatten()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    /// `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Position of a face within `faces(s.dim())`.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.f_vector())
    }

    pub fn marks(&self) -> &BTreeMap<String, Vec<Simplex>> {
        &self.marked
    }

    pub fn mark(&self, name: &str) -> Result<&[Simplex], ComplexError> {
        self.marked.get(name).map(Vec::as_slice).ok_or_else(|| ComplexError::UnknownMark(name.to_string()))
    }

    /// All faces of the subcomplex generated by a mark.
    pub fn mark_closure(&self, name: &str) -> Result<BTreeSet<Simplex>, ComplexError> {
        Ok(closure(self.mark(name)?))
    }

    /// Vertex ids used by a mark, ascending.
    pub fn mark_vertices(&self, name: &str) -> Result<Vec<VertexId>, ComplexError> {
        let set: BTreeSet<VertexId> = self.mark(name)?.iter().flat_map(|s| s.vertices().iter().copied()).collect();
        Ok(set.into_iter().collect())
    }

    /// The marked subcomplex as a standalone complex. Vertices are renumbered
    /// densely in ascending order of their old ids; labels are kept.
    pub fn subcomplex(&self, name: &str) -> Result<SimplicialComplex, ComplexError> {
        let faces = self.mark_closure(name)?;
        let verts = self.mark_vertices(name)?;
        let remap: HashMap<VertexId, VertexId> = verts.iter().enumerate().map(|(i, &v)| (v, i as VertexId)).collect();
        let vertices = verts
            .iter()
            .enumerate()
            .map(|(i, &v)| Vertex { id: i as VertexId, label: self.label(v).to_string() })
            .collect();
        let set =
            faces.into_iter().map(|s| Simplex::from_sorted(s.vertices().iter().map(|v| remap[v]).collect())).collect();
        Self::from_face_set(name.to_string(), vertices, set, BTreeMap::new())
    }

    /// All faces of dimension at most `m`. Marks are cut down to their own
    /// `m`-skeleta.
    pub fn skeleton(&self, m: usize) -> SimplicialComplex {
        if self.dim().is_none_or(|d| d <= m) {
            return self.clone();
        }
        let set: HashSet<Simplex> = self.faces.iter().take(m + 1).flatten().cloned().collect();
        let marked = self
            .marked
            .iter()
            .map(|(k, list)| {
                let cut: BTreeSet<Simplex> =
                    list.iter().flat_map(|s| if s.dim() <= m { vec![s.clone()] } else { s.faces_of_dim(m) }).collect();
                (k.clone(), cut.into_iter().collect())
            })
            .collect();
        Self::from_face_set(self.name.clone(), self.vertices.clone(), set, marked)
            .expect("skeleton of a valid complex is valid")
    }

    /// Unordered pairs of disjoint faces of dimensions `s` and `t`. When
    /// `s == t` each pair is listed once with the lexicographically smaller
    /// face first; otherwise the first entry has dimension `s`.
    pub fn disjoint_simplex_pairs(&self, s: usize, t: usize) -> Vec<(&Simplex, &Simplex)> {
        let (a, b) = (self.faces(s), self.faces(t));
        let mut out = Vec::new();
        for (i, x) in a.iter().enumerate() {
            let start = if s == t { i + 1 } else { 0 };
            for y in &b[start..] {
                if x.is_disjoint(y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Removes the given facets as open simplices; their boundaries stay.
    /// Any mark listing a removed simplex is rewritten to list its boundary.
    pub fn remove_facets(&self, removed: &[Simplex]) -> Result<SimplicialComplex, ComplexError> {
        for s in removed {
            if self.facets.binary_search(s).is_err() {
                return Err(ComplexError::NotMaximal(s.clone()));
            }
        }
        let gone: HashSet<&Simplex> = removed.iter().collect();
        let set: HashSet<Simplex> = self.all_faces().filter(|s| !gone.contains(s)).cloned().collect();
        let marked = self
            .marked
            .iter()
            .map(|(k, list)| {
                let rewritten = list
                    .iter()
                    .flat_map(|s| if gone.contains(s) { s.boundary().collect() } else { vec![s.clone()] })
                    .collect();
                (k.clone(), rewritten)
            })
            .collect();
        Self::from_face_set(self.name.clone(), self.vertices.clone(), set, marked)
    }

    /// Copy with every vertex label and mark name prefixed.
    pub fn prefixed(&self, prefix: &str) -> SimplicialComplex {
        let mut out = self.clone();
        for v in &mut out.vertices {
            v.label = format!("{prefix}{}", v.label);
        }
        out.marked = self.marked.iter().map(|(k, v)| (format!("{prefix}{k}"), v.clone())).collect();
        out
    }

    /// Checks downward closure, facet maximality, and mark validity.
    pub fn check_invariants(&self) -> Result<(), String> {
        for s in self.all_faces() {
            for b in s.boundary() {
                if !self.contains(&b) {
                    return Err(format!("{s} present but its face {b} missing"));
                }
            }
        }
        for f in &self.facets {
            if self.faces(f.dim() + 1).iter().any(|g| f.is_face_of(g)) {
                return Err(format!("facet {f} is not maximal"));
            }
        }
        for v in 0..self.vertices.len() {
            if !self.contains(&Simplex::vertex(v as VertexId)) {
                return Err(format!("vertex {v} lies in no face"));
            }
        }
        for (name, list) in &self.marked {
            if let Some(s) = list.iter().find(|s| !self.contains(s)) {
                return Err(format!("mark {name} lists non-face {s}"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            facets: self.facets.iter().map(|s| s.vertices().to_vec()).collect(),
            marked: self
                .marked
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|s| s.vertices().to_vec()).collect()))
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("complex JSON serializes")
    }

    pub fn from_json(json: ComplexJson) -> Result<Self, ComplexError> {
        for (i, v) in json.vertices.iter().enumerate() {
            if v.id as usize != i {
                return Err(ComplexError::VertexIdOrder { expected: i as VertexId, found: v.id });
            }
        }
        let labels: Vec<String> = json.vertices.into_iter().map(|v| v.label).collect();
        let base = Self::from_facets(labels, json.facets)?.with_name(json.name);
        json.marked.into_iter().try_fold(base, |acc, (k, list)| {
            let simplices = list.into_iter().map(Simplex::new).collect::<Result<Vec<_>, _>>()?;
            acc.with_mark(k, simplices)
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self, ComplexError> {
        let json: ComplexJson = serde_json::from_str(text).map_err(|e| ComplexError::Json(e.to_string()))?;
        Self::from_json(json)
    }
}

/// Serialized form: `{"name","vertices":[{"id","label"}],"facets","marked"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub facets: Vec<Vec<VertexId>>,
    #[serde(default)]
    pub marked: BTreeMap<String, Vec<Vec<VertexId>>>,
}

pub(crate) fn alternating_sum(counts: &[usize]) -> i64 {
    counts.iter().enumerate().map(|(i, &n)| if i % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
}

pub(crate) fn closure(generators: &[Simplex]) -> BTreeSet<Simplex> {
    generators.iter().flat_map(Simplex::faces).collect()
}

/// Identifies the vertex set of mark `mark_a` in part `part_a` with that of
/// `mark_b` in part `part_b` through explicit vertex pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identification {
    pub part_a: usize,
    pub mark_a: String,
    pub part_b: usize,
    pub mark_b: String,
    pub pairs: Vec<(VertexId, VertexId)>,
}

impl Identification {
    /// Pairs the two marks' vertices in ascending id order.
    pub fn ascending(
        parts: &[SimplicialComplex],
        part_a: usize,
        mark_a: &str,
        part_b: usize,
        mark_b: &str,
    ) -> Result<Self, ComplexError> {
        let a = parts.get(part_a).ok_or(ComplexError::UnknownPart(part_a))?.mark_vertices(mark_a)?;
        let b = parts.get(part_b).ok_or(ComplexError::UnknownPart(part_b))?.mark_vertices(mark_b)?;
        Ok(Identification {
            part_a,
            mark_a: mark_a.to_string(),
            part_b,
            mark_b: mark_b.to_string(),
            pairs: a.into_iter().zip(b).collect(),
        })
    }

    fn validate(&self, index: usize, parts: &[SimplicialComplex]) -> Result<(), ComplexError> {
        let fail = |reason: String| ComplexError::NotAnIsomorphism { index, reason };
        let pa = parts.get(self.part_a).ok_or(ComplexError::UnknownPart(self.part_a))?;
        let pb = parts.get(self.part_b).ok_or(ComplexError::UnknownPart(self.part_b))?;
        let va = pa.mark_vertices(&self.mark_a)?;
        let vb = pb.mark_vertices(&self.mark_b)?;
        let mut left: Vec<VertexId> = self.pairs.iter().map(|p| p.0).collect();
        let mut right: Vec<VertexId> = self.pairs.iter().map(|p| p.1).collect();
        left.sort_unstable();
        right.sort_unstable();
        if left != va {
            return Err(fail(format!("pairs do not biject onto the vertices of {}", self.mark_a)));
        }
        if right != vb {
            return Err(fail(format!("pairs do not biject onto the vertices of {}", self.mark_b)));
        }
        let map: HashMap<VertexId, VertexId> = self.pairs.iter().copied().collect();
        let image: BTreeSet<Simplex> = pa
            .mark_closure(&self.mark_a)?
            .iter()
            .map(|s| {
                let mut v: Vec<VertexId> = s.vertices().iter().map(|x| map[x]).collect();
                v.sort_unstable();
                Simplex::from_sorted(v)
            })
            .collect();
        if image != pb.mark_closure(&self.mark_b)? {
            return Err(fail(format!("vertex map does not carry {} onto {} simplicially", self.mark_a, self.mark_b)));
        }
        Ok(())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// The smaller root survives, so every root is its class minimum.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Quotient of the disjoint union of `parts` under the transitive closure of
/// the identifications.
///
/// Each class is represented by its smallest vertex (parts numbered in
/// order); quotient ids follow the representatives' order. The label of a
/// class joins the distinct member labels with `=`. Mark names must be
/// unique across parts and are re-expressed in quotient ids.
pub fn glue(parts: &[SimplicialComplex], idents: &[Identification]) -> Result<SimplicialComplex, ComplexError> {
    for (i, id) in idents.iter().enumerate() {
        id.validate(i, parts)?;
    }
    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 0usize;
    for p in parts {
        offsets.push(total);
        total += p.num_vertices();
    }
    let mut uf = UnionFind::new(total);
    for id in idents {
        for &(a, b) in &id.pairs {
            uf.union(offsets[id.part_a] + a as usize, offsets[id.part_b] + b as usize);
        }
    }

    let mut new_id = vec![VertexId::MAX; total];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for g in 0..total {
        let r = uf.find(g);
        if r == g {
            new_id[g] = members.len() as VertexId;
            members.push(Vec::new());
        }
        let id = new_id[r];
        new_id[g] = id;
        members[id as usize].push(g);
    }
    let global_label = |g: usize| -> &str {
        let p = offsets.partition_point(|&o| o <= g) - 1;
        parts[p].label((g - offsets[p]) as VertexId)
    };
    let vertices: Vec<Vertex> = members
        .iter()
        .enumerate()
        .map(|(i, ms)| {
            let mut atoms: Vec<&str> = Vec::new();
            for &g in ms {
                let l = global_label(g);
                if !atoms.contains(&l) {
                    atoms.push(l);
                }
            }
            Vertex { id: i as VertexId, label: atoms.join("=") }
        })
        .collect();

    let map_simplex = |part: usize, s: &Simplex| -> Vec<VertexId> {
        let mut v: Vec<VertexId> = s.vertices().iter().map(|&x| new_id[offsets[part] + x as usize]).collect();
        v.sort_unstable();
        v
    };

    let mut set: HashSet<Simplex> = HashSet::new();
    let mut marked = BTreeMap::new();
    for (pi, part) in parts.iter().enumerate() {
        let mapped: Vec<(Vec<VertexId>, &Simplex)> = part.all_faces().map(|s| (map_simplex(pi, s), s)).collect();
        if let Some((_, s)) = mapped.iter().find(|(m, _)| m.windows(2).any(|w| w[0] == w[1])) {
            return Err(ComplexError::RepeatedVertexInQuotient { part: pi, face: (*s).clone() });
        }
        let mut local: HashMap<Vec<VertexId>, &Simplex> = HashMap::with_capacity(mapped.len());
        for (m, s) in mapped {
            if let Some(prev) = local.insert(m.clone(), s) {
                return Err(ComplexError::Collapse { part: pi, first: prev.clone(), second: s.clone() });
            }
            set.insert(Simplex::from_sorted(m));
        }
        for (name, list) in part.marks() {
            if marked.contains_key(name) {
                return Err(ComplexError::DuplicateMark(name.clone()));
            }
            let mapped: Vec<Simplex> = list.iter().map(|s| Simplex::from_sorted(map_simplex(pi, s))).collect();
            marked.insert(name.clone(), mapped);
        }
    }
    SimplicialComplex::from_face_set("glue".to_string(), vertices, set, marked)
}
