//! Finite descriptions of infinite leveled digraphs with Property Z.
//!
//! A [`PeriodicLayeredDigraph`] is given by a period `p`, one [`LayerPattern`]
//! per residue and an offset. The bipartite layer between levels `i` and
//! `i + 1` is the expansion of pattern `(i + offset) mod p`; the fiber at
//! level `i` is the bottom side of that layer. Vertices carry their level
//! explicitly, so the leveling `v ↦ v.level` is the epimorphism onto the
//! integer line.
//!
//! [`FiniteDigraph`] is the induced subgraph on a bounded range of levels and
//! is what every exhaustive check works on.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One fiber label, e.g. `"-"`, `"o"`, `"+"` or `"0"`.
pub type Label = String;

/// Coordinate tuple of a vertex below its level. Length equals the arity of
/// the owning digraph (1 for factors, `k` for `k`-fold products).
pub type Coords = Vec<Label>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("layer {layer}: top fiber does not match the bottom fiber of layer {next}")]
    IncompatibleFibers { layer: usize, next: usize },
    #[error("layer {layer} has no edges")]
    EmptyLayer { layer: usize },
    #[error("vertex {0} does not belong to this digraph")]
    ForeignVertex(String),
    #[error("bad layer pattern: {0}")]
    BadPattern(String),
    #[error("label {0:?} is duplicated")]
    DuplicateLabel(String),
    #[error("edge references unknown label {0:?}")]
    UnknownLabel(String),
    #[error("label {0:?} is empty or contains one of ',()>' or whitespace")]
    BadLabel(String),
    #[error("coordinate tuples of different lengths ({0} and {1})")]
    MixedArity(usize, usize),
    #[error("a periodic digraph needs at least one layer pattern")]
    NoLayers,
    #[error("edge {0} does not raise the level by exactly one or leaves the window")]
    BadEdge(String),
    #[error("cannot parse vertex {0:?}")]
    VertexSyntax(String),
}

pub(crate) fn check_label(label: &str) -> Result<(), DigraphError> {
    let bad = label.is_empty()
        || label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '(' | ')' | '>'));
    if bad {
        Err(DigraphError::BadLabel(label.to_string()))
    } else {
        Ok(())
    }
}

pub(crate) fn join_coords(coords: &[Label]) -> String {
    coords.join(",")
}

/// A vertex `(level, c1, c2, ...)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub level: i64,
    pub coords: Coords,
}

impl Vertex {
    pub fn new<I, S>(level: i64, coords: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vertex {
            level,
            coords: coords.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.level)?;
        for c in &self.coords {
            write!(f, ",{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Vertex {
    type Err = DigraphError;

    /// Parses `(level,label,label,...)`, ignoring whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DigraphError::VertexSyntax(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(err)?;
        let mut parts = inner.split(',');
        let level = parts
            .next()
            .and_then(|p| p.parse::<i64>().ok())
            .ok_or_else(err)?;
        let coords: Coords = parts.map(str::to_string).collect();
        if coords.is_empty() || coords.iter().any(|c| check_label(c).is_err()) {
            return Err(err());
        }
        Ok(Vertex { level, coords })
    }
}

/// A finite bipartite digraph whose edges all run bottom → top.
///
/// Label order is the construction order and is what "deterministic order"
/// means everywhere else; equality ignores it.
#[derive(Debug, Clone)]
pub struct FiniteBipartiteDigraph {
    bottom: Vec<Coords>,
    top: Vec<Coords>,
    edges: BTreeSet<(usize, usize)>,
    bottom_index: HashMap<Coords, usize>,
    top_index: HashMap<Coords, usize>,
}

fn index_labels(labels: &[Coords]) -> Result<HashMap<Coords, usize>, DigraphError> {
    let mut index = HashMap::with_capacity(labels.len());
    let arity = labels.first().map_or(0, Vec::len);
    for (i, l) in labels.iter().enumerate() {
        if l.len() != arity {
            return Err(DigraphError::MixedArity(arity, l.len()));
        }
        for c in l {
            check_label(c)?;
        }
        if index.insert(l.clone(), i).is_some() {
            return Err(DigraphError::DuplicateLabel(join_coords(l)));
        }
    }
    Ok(index)
}

impl FiniteBipartiteDigraph {
    /// Builds from labelled edges. Every edge endpoint must be listed.
    pub fn new<I>(bottom: Vec<Coords>, top: Vec<Coords>, edges: I) -> Result<Self, DigraphError>
    where
        I: IntoIterator<Item = (Coords, Coords)>,
    {
        let bottom_index = index_labels(&bottom)?;
        let top_index = index_labels(&top)?;
        if let (Some(b), Some(t)) = (bottom.first(), top.first()) {
            if b.len() != t.len() {
                return Err(DigraphError::MixedArity(b.len(), t.len()));
            }
        }
        let mut set = BTreeSet::new();
        for (b, t) in edges {
            let bi = *bottom_index
                .get(&b)
                .ok_or_else(|| DigraphError::UnknownLabel(join_coords(&b)))?;
            let ti = *top_index
                .get(&t)
                .ok_or_else(|| DigraphError::UnknownLabel(join_coords(&t)))?;
            set.insert((bi, ti));
        }
        Ok(FiniteBipartiteDigraph {
            bottom,
            top,
            edges: set,
            bottom_index,
            top_index,
        })
    }

    /// Builds from edges given as (bottom index, top index).
    pub fn from_indices<I>(bottom: Vec<Coords>, top: Vec<Coords>, edges: I) -> Result<Self, DigraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let bottom_index = index_labels(&bottom)?;
        let top_index = index_labels(&top)?;
        let mut set = BTreeSet::new();
        for (b, t) in edges {
            if b >= bottom.len() || t >= top.len() {
                return Err(DigraphError::UnknownLabel(format!("#{b}->#{t}")));
            }
            set.insert((b, t));
        }
        Ok(FiniteBipartiteDigraph {
            bottom,
            top,
            edges: set,
            bottom_index,
            top_index,
        })
    }

    pub fn bottom(&self) -> &[Coords] {
        &self.bottom
    }

    pub fn top(&self) -> &[Coords] {
        &self.top
    }

    pub fn bottom_position(&self, label: &[Label]) -> Option<usize> {
        self.bottom_index.get(label).copied()
    }

    pub fn top_position(&self, label: &[Label]) -> Option<usize> {
        self.top_index.get(label).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.bottom.len() + self.top.len()
    }

    pub fn arity(&self) -> usize {
        self.bottom.first().or(self.top.first()).map_or(0, Vec::len)
    }

    /// Edges as (bottom index, top index), sorted.
    pub fn edge_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Coords, &Coords)> + '_ {
        self.edges.iter().map(|&(b, t)| (&self.bottom[b], &self.top[t]))
    }

    pub fn has_edge_indices(&self, b: usize, t: usize) -> bool {
        self.edges.contains(&(b, t))
    }

    pub fn has_edge(&self, bottom: &[Label], top: &[Label]) -> bool {
        match (self.bottom_position(bottom), self.top_position(top)) {
            (Some(b), Some(t)) => self.edges.contains(&(b, t)),
            _ => false,
        }
    }

    pub fn out_degree(&self, b: usize) -> usize {
        self.edges.range((b, 0)..(b + 1, 0)).count()
    }

    pub fn in_degree(&self, t: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == t).count()
    }

    pub fn successors(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((b, 0)..(b + 1, 0)).map(|e| e.1)
    }

    /// `K_{n,m}` over the default alphabets.
    pub fn complete_bipartite(n: usize, m: usize) -> Self {
        let edges = (0..n).flat_map(|b| (0..m).map(move |t| (b, t)));
        Self::from_indices(fiber_labels(n), fiber_labels(m), edges)
            .expect("default alphabets are valid")
    }

    fn labels_equal(a: &[Coords], b: &[Coords]) -> bool {
        a.len() == b.len() && {
            let sa: BTreeSet<&Coords> = a.iter().collect();
            let sb: BTreeSet<&Coords> = b.iter().collect();
            sa == sb
        }
    }

    fn labelled_edge_set(&self) -> BTreeSet<(&Coords, &Coords)> {
        self.edges().collect()
    }
}

/// Serialized as `{"bottom": [...], "top": [...], "edges": [[b, t], ...]}` with
/// coordinate tuples joined by commas.
impl Serialize for FiniteBipartiteDigraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let joined = |side: &[Coords]| side.iter().map(|c| join_coords(c)).collect::<Vec<_>>();
        let edges: Vec<[String; 2]> = self
            .edges()
            .map(|(b, t)| [join_coords(b), join_coords(t)])
            .collect();
        let mut st = serializer.serialize_struct("FiniteBipartiteDigraph", 3)?;
        st.serialize_field("bottom", &joined(&self.bottom))?;
        st.serialize_field("top", &joined(&self.top))?;
        st.serialize_field("edges", &edges)?;
        st.end()
    }
}

impl PartialEq for FiniteBipartiteDigraph {
    fn eq(&self, other: &Self) -> bool {
        Self::labels_equal(&self.bottom, &other.bottom)
            && Self::labels_equal(&self.top, &other.top)
            && self.edges.len() == other.edges.len()
            && self.labelled_edge_set() == other.labelled_edge_set()
    }
}

impl Eq for FiniteBipartiteDigraph {}

/// Default fiber alphabet of a given size: `-`, `o`, `+` for size 3, decimal
/// indices otherwise.
pub fn fiber_labels(n: usize) -> Vec<Coords> {
    if n == 3 {
        ["-", "o", "+"].iter().map(|s| vec![s.to_string()]).collect()
    } else {
        (0..n).map(|i| vec![i.to_string()]).collect()
    }
}

/// Shape of one layer of a periodic factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerPattern {
    CompleteBipartite { n: usize, m: usize },
    /// Alternating cycle with `size` edges (and `size` vertices).
    AlternatingCycle { size: usize },
    Matching { n: usize },
    Custom(FiniteBipartiteDigraph),
}

impl LayerPattern {
    /// Expands into a concrete bipartite digraph.
    ///
    /// `AlternatingCycle(2k)` joins `i` to `i` and `i + 1 mod k`, except for
    /// `2k = 6`, which uses the signed alphabet and joins `x` to `y` iff
    /// `x + y != 0` (`-`, `o`, `+` read as -1, 0, 1).
    pub fn expand(&self) -> Result<FiniteBipartiteDigraph, DigraphError> {
        match *self {
            LayerPattern::CompleteBipartite { n, m } => {
                if n == 0 || m == 0 {
                    return Err(DigraphError::BadPattern(format!(
                        "complete bipartite K_{{{n},{m}}} needs n, m >= 1"
                    )));
                }
                Ok(FiniteBipartiteDigraph::complete_bipartite(n, m))
            }
            LayerPattern::AlternatingCycle { size } => {
                if size < 4 || size % 2 != 0 {
                    return Err(DigraphError::BadPattern(format!(
                        "alternating cycle size {size} must be even and >= 4"
                    )));
                }
                let k = size / 2;
                let labels = fiber_labels(k);
                let edges: Vec<(usize, usize)> = if k == 3 {
                    let value = |i: usize| i as i64 - 1;
                    (0..3)
                        .flat_map(|b| (0..3).map(move |t| (b, t)))
                        .filter(|&(b, t)| value(b) + value(t) != 0)
                        .collect()
                } else {
                    (0..k).flat_map(|i| [(i, i), (i, (i + 1) % k)]).collect()
                };
                FiniteBipartiteDigraph::from_indices(labels.clone(), labels, edges)
            }
            LayerPattern::Matching { n } => {
                if n == 0 {
                    return Err(DigraphError::BadPattern("matching needs n >= 1".into()));
                }
                let labels = fiber_labels(n);
                FiniteBipartiteDigraph::from_indices(labels.clone(), labels, (0..n).map(|i| (i, i)))
            }
            LayerPattern::Custom(ref g) => Ok(g.clone()),
        }
    }
}

#[derive(Debug, Clone)]
struct Fiber {
    labels: Vec<Coords>,
    index: HashMap<Coords, u32>,
}

/// An infinite leveled digraph given by one period of layer patterns.
#[derive(Debug, Clone)]
pub struct PeriodicLayeredDigraph {
    name: Option<String>,
    patterns: Vec<LayerPattern>,
    offset: i64,
    arity: usize,
    layers: Vec<FiniteBipartiteDigraph>,
    fibers: Vec<Fiber>,
    /// Per residue: bottom index -> sorted successor indices in the next fiber.
    successors: Vec<Vec<Vec<u32>>>,
}

impl PeriodicLayeredDigraph {
    /// Validates fiber compatibility and nonempty layers. The offset is kept
    /// modulo the period.
    pub fn new(patterns: Vec<LayerPattern>, offset: i64) -> Result<Self, DigraphError> {
        if patterns.is_empty() {
            return Err(DigraphError::NoLayers);
        }
        let p = patterns.len();
        let layers = patterns
            .iter()
            .map(LayerPattern::expand)
            .collect::<Result<Vec<_>, _>>()?;
        let arity = layers[0].arity();
        for (i, layer) in layers.iter().enumerate() {
            if layer.edge_count() == 0 {
                return Err(DigraphError::EmptyLayer { layer: i });
            }
            if layer.arity() != arity {
                return Err(DigraphError::MixedArity(arity, layer.arity()));
            }
            let next = (i + 1) % p;
            if !FiniteBipartiteDigraph::labels_equal(layer.top(), layers[next].bottom()) {
                return Err(DigraphError::IncompatibleFibers { layer: i, next });
            }
        }
        let fibers: Vec<Fiber> = layers
            .iter()
            .map(|l| Fiber {
                labels: l.bottom().to_vec(),
                index: l
                    .bottom()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.clone(), i as u32))
                    .collect(),
            })
            .collect();
        let successors = layers
            .iter()
            .enumerate()
            .map(|(r, layer)| {
                let next = &fibers[(r + 1) % p];
                let mut adj = vec![Vec::new(); layer.bottom().len()];
                for (b, t) in layer.edge_indices() {
                    adj[b].push(next.index[&layer.top()[t]]);
                }
                for a in &mut adj {
                    a.sort_unstable();
                }
                adj
            })
            .collect();
        Ok(PeriodicLayeredDigraph {
            name: None,
            patterns,
            offset: offset.rem_euclid(p as i64),
            arity,
            layers,
            fibers,
            successors,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn period(&self) -> usize {
        self.patterns.len()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn patterns(&self) -> &[LayerPattern] {
        &self.patterns
    }

    /// Pattern index used between levels `level` and `level + 1`.
    pub fn residue(&self, level: i64) -> usize {
        (level + self.offset).rem_euclid(self.period() as i64) as usize
    }

    /// The bipartite layer between fibers `i` and `i + 1`.
    pub fn layer(&self, i: i64) -> &FiniteBipartiteDigraph {
        &self.layers[self.residue(i)]
    }

    pub fn fiber(&self, level: i64) -> &[Coords] {
        &self.fibers[self.residue(level)].labels
    }

    pub fn fiber_size(&self, level: i64) -> usize {
        self.fiber(level).len()
    }

    pub fn level_of(&self, v: &Vertex) -> i64 {
        v.level
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.vertex_index(v).is_some()
    }

    /// Position of `v` within its fiber.
    pub fn vertex_index(&self, v: &Vertex) -> Option<u32> {
        self.fibers[self.residue(v.level)].index.get(&v.coords).copied()
    }

    pub fn index_of_coords(&self, level: i64, coords: &[Label]) -> Option<u32> {
        self.fibers[self.residue(level)].index.get(coords).copied()
    }

    pub fn vertex_at(&self, level: i64, index: u32) -> Vertex {
        Vertex {
            level,
            coords: self.fiber(level)[index as usize].clone(),
        }
    }

    /// Successor positions in fiber `level + 1` of the vertex at `index`.
    pub fn successor_indices(&self, level: i64, index: u32) -> &[u32] {
        &self.successors[self.residue(level)][index as usize]
    }

    pub fn has_edge_indices(&self, level: i64, from: u32, to: u32) -> bool {
        self.successor_indices(level, from).binary_search(&to).is_ok()
    }

    pub fn has_edge(&self, u: &Vertex, v: &Vertex) -> Result<bool, DigraphError> {
        let ui = self
            .vertex_index(u)
            .ok_or_else(|| DigraphError::ForeignVertex(u.to_string()))?;
        let vi = self
            .vertex_index(v)
            .ok_or_else(|| DigraphError::ForeignVertex(v.to_string()))?;
        Ok(v.level == u.level + 1 && self.has_edge_indices(u.level, ui, vi))
    }

    /// Induced subgraph on levels `lo..=hi`; vertices ordered by level, then
    /// fiber order.
    pub fn window(&self, lo: i64, hi: i64) -> FiniteDigraph {
        let mut vertices = Vec::new();
        let mut starts = Vec::new();
        for level in lo..=hi {
            starts.push(vertices.len());
            vertices.extend(
                self.fiber(level)
                    .iter()
                    .map(|c| Vertex { level, coords: c.clone() }),
            );
        }
        let mut edges = Vec::new();
        for level in lo..hi {
            let base = starts[(level - lo) as usize];
            let next = starts[(level - lo + 1) as usize];
            for i in 0..self.fiber_size(level) {
                for &j in self.successor_indices(level, i as u32) {
                    edges.push((base + i, next + j as usize));
                }
            }
        }
        FiniteDigraph::from_parts(lo, hi, vertices, edges)
    }

    /// Same digraph with the pattern at level `i` taken from level `i + t`.
    pub fn shifted(&self, t: i64) -> Self {
        let mut g = self.clone();
        g.offset = (self.offset + t).rem_euclid(self.period() as i64);
        g
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Equality as digraphs: same arity and identical layers at every level.
impl PartialEq for PeriodicLayeredDigraph {
    fn eq(&self, other: &Self) -> bool {
        if self.arity != other.arity {
            return false;
        }
        let l = lcm(self.period(), other.period()) as i64;
        (0..l).all(|i| self.layer(i) == other.layer(i))
    }
}

impl Eq for PeriodicLayeredDigraph {}

/// A finite leveled digraph, usually a window of a periodic one.
#[derive(Debug, Clone)]
pub struct FiniteDigraph {
    lo: i64,
    hi: i64,
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl FiniteDigraph {
    /// Validates that every vertex lies in `lo..=hi` and every edge raises
    /// the level by exactly one.
    pub fn new(
        lo: i64,
        hi: i64,
        vertices: Vec<Vertex>,
        edges: Vec<(Vertex, Vertex)>,
    ) -> Result<Self, DigraphError> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if v.level < lo || v.level > hi {
                return Err(DigraphError::ForeignVertex(v.to_string()));
            }
            if index.insert(v.clone(), i).is_some() {
                return Err(DigraphError::DuplicateLabel(v.to_string()));
            }
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            let bad = || DigraphError::BadEdge(format!("{u}>{v}"));
            let ui = *index.get(&u).ok_or_else(bad)?;
            let vi = *index.get(&v).ok_or_else(bad)?;
            if v.level != u.level + 1 {
                return Err(bad());
            }
            idx_edges.push((ui, vi));
        }
        idx_edges.sort_unstable();
        idx_edges.dedup();
        Ok(Self::from_parts(lo, hi, vertices, idx_edges))
    }

    pub(crate) fn from_parts(
        lo: i64,
        hi: i64,
        vertices: Vec<Vertex>,
        mut edges: Vec<(usize, usize)>,
    ) -> Self {
        edges.sort_unstable();
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inc = vec![Vec::new(); vertices.len()];
        for &(u, v) in &edges {
            out[u].push(v);
            inc[v].push(u);
        }
        for l in inc.iter_mut() {
            l.sort_unstable();
        }
        FiniteDigraph {
            lo,
            hi,
            vertices,
            index,
            edges,
            out,
            inc,
        }
    }

    /// Bottom side at `level`, top side at `level + 1`.
    pub fn from_bipartite(g: &FiniteBipartiteDigraph, level: i64) -> Self {
        let mut vertices: Vec<Vertex> = g
            .bottom()
            .iter()
            .map(|c| Vertex { level, coords: c.clone() })
            .collect();
        let nb = vertices.len();
        vertices.extend(g.top().iter().map(|c| Vertex {
            level: level + 1,
            coords: c.clone(),
        }));
        let edges = g.edge_indices().map(|(b, t)| (b, nb + t)).collect();
        Self::from_parts(level, level + 1, vertices, edges)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as vertex indices, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_vertices(&self) -> impl Iterator<Item = (&Vertex, &Vertex)> + '_ {
        self.edges
            .iter()
            .map(|&(u, v)| (&self.vertices[u], &self.vertices[v]))
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.index.contains_key(v)
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn has_edge_indices(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    pub fn has_edge(&self, u: &Vertex, v: &Vertex) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) => self.has_edge_indices(a, b),
            _ => false,
        }
    }

    /// Induced subgraph on levels `lo..=hi` (clamped to this window).
    pub fn restrict(&self, lo: i64, hi: i64) -> FiniteDigraph {
        let lo = lo.max(self.lo);
        let hi = hi.min(self.hi);
        let keep: Vec<usize> = (0..self.vertices.len())
            .filter(|&i| (lo..=hi).contains(&self.vertices[i].level))
            .collect();
        let mut remap = vec![usize::MAX; self.vertices.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let vertices = keep.iter().map(|&i| self.vertices[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| remap[u] != usize::MAX && remap[v] != usize::MAX)
            .map(|&(u, v)| (remap[u], remap[v]))
            .collect();
        FiniteDigraph::from_parts(lo, hi, vertices, edges)
    }
}

/// Structural equality: same bounds, vertex sets and edge sets.
impl PartialEq for FiniteDigraph {
    fn eq(&self, other: &Self) -> bool {
        if self.lo != other.lo
            || self.hi != other.hi
            || self.vertices.len() != other.vertices.len()
            || self.edges.len() != other.edges.len()
        {
            return false;
        }
        let a: BTreeSet<(&Vertex, &Vertex)> = self.edge_vertices().collect();
        let b: BTreeSet<(&Vertex, &Vertex)> = other.edge_vertices().collect();
        self.vertices.iter().all(|v| other.contains(v)) && a == b
    }
}

impl Eq for FiniteDigraph {}
