//! Alternating-walk reachability and the associated digraph Δ.
//!
//! Two edges sharing a tail, or sharing a head, are consecutive in some
//! alternating walk; both relations are transitive on their own, so the
//! equivalence generated by "shares tail or shares head" is exactly
//! reachability. It is computed with a union-find over edges keyed by their
//! endpoints.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::digraph::{Coords, FiniteBipartiteDigraph, FiniteDigraph, PeriodicLayeredDigraph};
use crate::iso;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReachError {
    #[error("the digraph has no edges")]
    EmptyEdgeSet,
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Classes as sorted member lists, ordered by their least member.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut order = Vec::new();
        for x in 0..self.parent.len() {
            let r = self.find(x);
            let entry = by_root.entry(r).or_default();
            if entry.is_empty() {
                order.push(r);
            }
            entry.push(x);
        }
        order
            .into_iter()
            .map(|r| by_root.remove(&r).unwrap_or_default())
            .collect()
    }
}

/// Reachability classes of the edges of `f`, as lists of indices into
/// `f.edges()`.
pub fn reachability_classes(f: &FiniteDigraph) -> Result<Vec<Vec<usize>>, ReachError> {
    let edges = f.edges();
    if edges.is_empty() {
        return Err(ReachError::EmptyEdgeSet);
    }
    let mut sets = DisjointSets::new(edges.len());
    let mut first_by_tail = vec![usize::MAX; f.vertex_count()];
    let mut first_by_head = vec![usize::MAX; f.vertex_count()];
    for (e, &(u, v)) in edges.iter().enumerate() {
        for (slot, key) in [(&mut first_by_tail, u), (&mut first_by_head, v)] {
            if slot[key] == usize::MAX {
                slot[key] = e;
            } else {
                sets.union(slot[key], e);
            }
        }
    }
    Ok(sets.classes())
}

/// The subgraph spanned by one class of edges, as a bipartite digraph.
/// Assumes the class lies in a single layer.
pub fn class_subgraph(f: &FiniteDigraph, class: &[usize]) -> FiniteBipartiteDigraph {
    let mut bottom: Vec<usize> = class.iter().map(|&e| f.edges()[e].0).collect();
    let mut top: Vec<usize> = class.iter().map(|&e| f.edges()[e].1).collect();
    bottom.sort_unstable();
    bottom.dedup();
    top.sort_unstable();
    top.dedup();
    let labels = |ids: &[usize]| -> Vec<Coords> {
        ids.iter().map(|&i| f.vertices()[i].coords.clone()).collect()
    };
    let edges = class.iter().map(|&e| {
        let (u, v) = f.edges()[e];
        (
            bottom.binary_search(&u).expect("tail listed"),
            top.binary_search(&v).expect("head listed"),
        )
    });
    FiniteBipartiteDigraph::from_indices(labels(&bottom), labels(&top), edges)
        .expect("vertices of one window are distinct")
}

pub fn is_complete_bipartite(f: &FiniteBipartiteDigraph) -> bool {
    f.edge_count() == f.bottom().len() * f.top().len()
}

/// Connectivity of the underlying undirected graph.
pub fn is_connected(f: &FiniteBipartiteDigraph) -> bool {
    let nb = f.bottom().len();
    let n = nb + f.top().len();
    if n == 0 {
        return true;
    }
    let mut sets = DisjointSets::new(n);
    let mut components = n;
    for (b, t) in f.edge_indices() {
        if sets.union(b, nb + t) {
            components -= 1;
        }
    }
    components == 1
}

/// A side- and direction-preserving bijection between two bipartite digraphs,
/// as positions into the second digraph's bottom and top lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BipartiteIso {
    pub bottom: Vec<usize>,
    pub top: Vec<usize>,
}

/// Lexicographically least isomorphism (bottoms first, then tops, in `f1`'s
/// label order), if one exists.
pub fn bipartite_iso(f1: &FiniteBipartiteDigraph, f2: &FiniteBipartiteDigraph) -> Option<BipartiteIso> {
    if f1.bottom().len() != f2.bottom().len()
        || f1.top().len() != f2.top().len()
        || f1.edge_count() != f2.edge_count()
    {
        return None;
    }
    let g1 = FiniteDigraph::from_bipartite(f1, 0);
    let g2 = FiniteDigraph::from_bipartite(f2, 0);
    let map = iso::find_isomorphism(&g1, &g2)?;
    let nb = f1.bottom().len();
    Some(BipartiteIso {
        bottom: map[..nb].to_vec(),
        top: map[nb..].iter().map(|&t| t - nb).collect(),
    })
}

/// Δ together with the structural verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaReport {
    pub representative: FiniteBipartiteDigraph,
    /// All reachability classes across the checked layers are isomorphic.
    pub well_defined: bool,
    /// Every class stays inside one layer.
    pub bipartite: bool,
    /// The representative is connected as an undirected graph.
    pub connected: bool,
    pub complete_bipartite: bool,
    pub classes_per_layer: BTreeMap<i64, usize>,
    pub layers_checked: (i64, i64),
}

/// Δ of a finite window: every reachability class of `f` is compared with
/// the first one.
pub fn window_delta(f: &FiniteDigraph) -> Result<DeltaReport, ReachError> {
    let classes = reachability_classes(f)?;
    let mut per_layer: BTreeMap<i64, usize> = BTreeMap::new();
    let mut bipartite = true;
    let mut subgraphs = Vec::with_capacity(classes.len());
    for class in &classes {
        let levels: std::collections::BTreeSet<i64> = class
            .iter()
            .map(|&e| f.vertices()[f.edges()[e].0].level)
            .collect();
        bipartite &= levels.len() == 1;
        let level = *levels.iter().next().expect("classes are nonempty");
        *per_layer.entry(level).or_default() += 1;
        subgraphs.push(class_subgraph(f, class));
    }
    let representative = subgraphs[0].clone();
    let well_defined = bipartite
        && subgraphs[1..]
            .iter()
            .all(|s| bipartite_iso(&representative, s).is_some());
    let (lo, hi) = match (per_layer.keys().next(), per_layer.keys().next_back()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (f.lo(), f.lo()),
    };
    Ok(DeltaReport {
        connected: is_connected(&representative),
        complete_bipartite: is_complete_bipartite(&representative),
        representative,
        well_defined,
        bipartite,
        classes_per_layer: per_layer,
        layers_checked: (lo, hi),
    })
}

/// Δ of a periodic digraph, checked over one full period of layers.
pub fn delta(d: &PeriodicLayeredDigraph) -> DeltaReport {
    let p = d.period() as i64;
    let window = d.window(0, p);
    window_delta(&window).expect("well-formed periodic digraphs have edges in every layer")
}
