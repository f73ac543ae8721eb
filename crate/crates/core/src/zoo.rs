//! Named constructions: the factor `L`, the digraph `D`, McKay–Praeger
//! factors, factors with involvers, regular leveled trees and Diestel–Leader
//! windows.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::digraph::{DigraphError, FiniteDigraph, LayerPattern, PeriodicLayeredDigraph, Vertex};
use crate::product::layerwise_product;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZooError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("involver layers {first} and {second} have no complete bipartite layer between them")]
    InvolverAdjacency { first: usize, second: usize },
    #[error("window needs {vertices} vertices, budget is {budget}")]
    WindowTooLarge { vertices: usize, budget: usize },
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

/// Layers `K_{3,3}` and `AC_6` alternating, fibers `{-, o, +}`.
pub fn factor_l() -> PeriodicLayeredDigraph {
    PeriodicLayeredDigraph::new(
        vec![
            LayerPattern::CompleteBipartite { n: 3, m: 3 },
            LayerPattern::AlternatingCycle { size: 6 },
        ],
        0,
    )
    .expect("L is well-formed")
    .with_name("L")
}

/// `L x L` with the second factor shifted by one level.
pub fn digraph_d() -> PeriodicLayeredDigraph {
    let l = factor_l();
    layerwise_product(&l, &l, 0, 1).with_name("D")
}

pub fn integer_line() -> PeriodicLayeredDigraph {
    PeriodicLayeredDigraph::new(vec![LayerPattern::Matching { n: 1 }], 0)
        .expect("Z is well-formed")
        .with_name("Z")
}

/// One `K_{n,n}` layer followed by `m` perfect matchings.
pub fn factor_mckay_praeger(n: usize, m: usize) -> Result<PeriodicLayeredDigraph, ZooError> {
    if n < 2 || m < 1 {
        return Err(ZooError::BadParams(format!("mckay({n},{m}) needs n >= 2 and m >= 1")));
    }
    let mut patterns = vec![LayerPattern::CompleteBipartite { n, m: n }];
    patterns.extend(std::iter::repeat_n(LayerPattern::Matching { n }, m));
    Ok(PeriodicLayeredDigraph::new(patterns, 0)?.with_name(format!("mckay({n},{m})")))
}

/// Layers that are neither complete bipartite nor matchings.
fn is_involver(p: &LayerPattern) -> Result<bool, DigraphError> {
    Ok(match p {
        LayerPattern::CompleteBipartite { .. } | LayerPattern::Matching { .. } => false,
        LayerPattern::AlternatingCycle { .. } => true,
        LayerPattern::Custom(g) => g.edge_count() != g.bottom().len() * g.top().len(),
    })
}

/// A periodic factor whose involver layers are separated, cyclically, by at
/// least one complete bipartite layer. `allow_adjacent` skips that guard.
pub fn factor_with_involvers(
    patterns: Vec<LayerPattern>,
    allow_adjacent: bool,
) -> Result<PeriodicLayeredDigraph, ZooError> {
    if !allow_adjacent {
        check_involvers(&patterns)?;
    }
    Ok(PeriodicLayeredDigraph::new(patterns, 0)?)
}

pub fn check_involvers(patterns: &[LayerPattern]) -> Result<(), ZooError> {
    let p = patterns.len();
    let involvers: Vec<usize> = (0..p)
        .filter_map(|i| is_involver(&patterns[i]).map(|b| b.then_some(i)).transpose())
        .collect::<Result<_, _>>()?;
    for (k, &first) in involvers.iter().enumerate() {
        let second = involvers[(k + 1) % involvers.len()];
        let gap = (second + p - first - 1) % p + 1;
        let separated = (1..gap)
            .any(|d| matches!(patterns[(first + d) % p], LayerPattern::CompleteBipartite { .. }));
        if !separated {
            return Err(ZooError::InvolverAdjacency { first, second });
        }
    }
    Ok(())
}

pub const DEFAULT_VERTEX_BUDGET: usize = 200_000;

/// A regular leveled tree: every vertex has `in_degree` predecessors and
/// `out_degree` successors.
///
/// Windows are generated from a root `r` at level 0: first up through
/// predecessors, then down through successors. A label records the path, as
/// `r` followed by `u{i}` steps and then `d{c}` steps; when the path turns
/// around, the first down step avoids child 0, which is the vertex it came
/// up from. For `out_degree == 1 < in_degree` the window is the mirror image
/// of the window of the reversed tree, so that in-degrees are complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeLeveledDigraph {
    pub in_degree: usize,
    pub out_degree: usize,
}

pub fn tree_factor(in_degree: usize, out_degree: usize) -> Result<TreeLeveledDigraph, ZooError> {
    if in_degree == 0 || out_degree == 0 {
        return Err(ZooError::BadParams("tree degrees must be at least 1".into()));
    }
    Ok(TreeLeveledDigraph { in_degree, out_degree })
}

/// Cone nodes and index-pair edges.
type Cone = (Vec<TreeNode>, Vec<(usize, usize)>);

#[derive(Clone)]
struct TreeNode {
    ups: Vec<usize>,
    downs: Vec<usize>,
}

impl TreeNode {
    fn level(&self) -> i64 {
        self.downs.len() as i64 - self.ups.len() as i64
    }

    fn label(&self, up: char, down: char) -> String {
        let mut s = String::from("r");
        for i in &self.ups {
            s.push_str(&format!("{up}{i}"));
        }
        for c in &self.downs {
            s.push_str(&format!("{down}{c}"));
        }
        s
    }
}

impl TreeLeveledDigraph {
    pub fn window(&self, lo: i64, hi: i64) -> Result<FiniteDigraph, ZooError> {
        self.window_with_budget(lo, hi, DEFAULT_VERTEX_BUDGET)
    }

    pub fn window_with_budget(&self, lo: i64, hi: i64, budget: usize) -> Result<FiniteDigraph, ZooError> {
        if lo > hi {
            return Err(ZooError::BadParams(format!("empty window [{lo},{hi}]")));
        }
        if self.out_degree == 1 && self.in_degree > 1 {
            let mirror = TreeLeveledDigraph {
                in_degree: 1,
                out_degree: self.in_degree,
            };
            let (vertices, edges) = mirror.cone(-hi, -lo, budget)?;
            let flip = |n: &TreeNode| Vertex::new(-n.level(), [n.label('d', 'u')]);
            let vs: Vec<Vertex> = vertices.iter().map(flip).collect();
            let es = edges
                .iter()
                .map(|&(a, b)| (vs[b].clone(), vs[a].clone()))
                .collect();
            return Ok(sorted_digraph(lo, hi, vs, es));
        }
        let (vertices, edges) = self.cone(lo, hi, budget)?;
        let vs: Vec<Vertex> = vertices
            .iter()
            .map(|n| Vertex::new(n.level(), [n.label('u', 'd')]))
            .collect();
        let es = edges
            .iter()
            .map(|&(a, b)| (vs[a].clone(), vs[b].clone()))
            .collect();
        Ok(sorted_digraph(lo, hi, vs, es))
    }

    /// Nodes of the up-then-down cone restricted to `lo..=hi`, with edges as
    /// index pairs.
    fn cone(&self, lo: i64, hi: i64, budget: usize) -> Result<Cone, ZooError> {
        let mut nodes: Vec<TreeNode> = Vec::new();
        let mut edges = Vec::new();
        let mut stack = vec![TreeNode { ups: vec![], downs: vec![] }];
        let mut index: BTreeMap<(Vec<usize>, Vec<usize>), usize> = BTreeMap::new();
        let too_large = |count: usize| ZooError::WindowTooLarge { vertices: count, budget };
        // levels below lo or above hi are still walked through, but not kept
        let up_limit = (-lo).max(0) as usize;
        while let Some(node) = stack.pop() {
            if node.downs.is_empty() && node.ups.len() < up_limit {
                for i in 0..self.in_degree {
                    let mut ups = node.ups.clone();
                    ups.push(i);
                    stack.push(TreeNode { ups, downs: vec![] });
                }
            }
            if node.level() < hi {
                let first = if node.downs.is_empty() && !node.ups.is_empty() { 1 } else { 0 };
                for c in first..self.out_degree {
                    let mut downs = node.downs.clone();
                    downs.push(c);
                    stack.push(TreeNode { ups: node.ups.clone(), downs });
                }
            }
            if (lo..=hi).contains(&node.level()) {
                if nodes.len() >= budget {
                    return Err(too_large(nodes.len() + 1));
                }
                index.insert((node.ups.clone(), node.downs.clone()), nodes.len());
                nodes.push(node);
            } else if nodes.len() + stack.len() > budget.saturating_mul(4) {
                return Err(too_large(nodes.len() + stack.len()));
            }
        }
        for (i, node) in nodes.iter().enumerate() {
            if node.level() >= hi {
                continue;
            }
            let mut children: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
            if node.downs.is_empty() && !node.ups.is_empty() {
                let mut ups = node.ups.clone();
                ups.pop();
                children.push((ups, vec![]));
            }
            let first = if node.downs.is_empty() && !node.ups.is_empty() { 1 } else { 0 };
            for c in first..self.out_degree {
                let mut downs = node.downs.clone();
                downs.push(c);
                children.push((node.ups.clone(), downs));
            }
            for key in children {
                if let Some(&j) = index.get(&key) {
                    edges.push((i, j));
                }
            }
        }
        Ok((nodes, edges))
    }
}

fn sorted_digraph(lo: i64, hi: i64, mut vertices: Vec<Vertex>, edges: Vec<(Vertex, Vertex)>) -> FiniteDigraph {
    vertices.sort();
    FiniteDigraph::new(lo, hi, vertices, edges).expect("tree windows are leveled")
}

/// Window `lo..=hi` of the layerwise product of the out-tree with
/// `out_degree` successors and the in-tree with `in_degree` predecessors.
/// Vertices are `(level, a, b)` with `a`, `b` tree labels.
pub fn diestel_leader(
    out_degree: usize,
    in_degree: usize,
    lo: i64,
    hi: i64,
    budget: usize,
) -> Result<FiniteDigraph, ZooError> {
    let t1 = tree_factor(1, out_degree)?.window_with_budget(lo, hi, budget)?;
    let t2 = tree_factor(in_degree, 1)?.window_with_budget(lo, hi, budget)?;
    let by_level = |t: &FiniteDigraph| {
        let mut m: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, v) in t.vertices().iter().enumerate() {
            m.entry(v.level).or_default().push(i);
        }
        m
    };
    let (l1, l2) = (by_level(&t1), by_level(&t2));
    let count: usize = (lo..=hi)
        .map(|l| l1.get(&l).map_or(0, Vec::len) * l2.get(&l).map_or(0, Vec::len))
        .sum();
    if count > budget {
        return Err(ZooError::WindowTooLarge { vertices: count, budget });
    }
    let pair = |a: usize, b: usize| {
        let (va, vb) = (&t1.vertices()[a], &t2.vertices()[b]);
        Vertex::new(va.level, [va.coords[0].clone(), vb.coords[0].clone()])
    };
    let mut vertices = Vec::with_capacity(count);
    let mut edges = Vec::new();
    for level in lo..=hi {
        let (Some(xs), Some(ys)) = (l1.get(&level), l2.get(&level)) else {
            continue;
        };
        for &a in xs {
            for &b in ys {
                vertices.push(pair(a, b));
                for &x in t1.out_neighbors(a) {
                    for &y in t2.out_neighbors(b) {
                        edges.push((pair(a, b), pair(x, y)));
                    }
                }
            }
        }
    }
    Ok(sorted_digraph(lo, hi, vertices, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_layers() {
        let l = factor_l();
        assert_eq!(l.layer(0).edge_count(), 9);
        assert!(!l.layer(1).has_edge(&["o".to_string()], &["o".to_string()]));
        assert!((-3..3).all(|i| l.fiber_size(i) == 3));
    }

    #[test]
    fn d_degrees() {
        let d = digraph_d();
        assert_eq!(d.fiber_size(0), 9);
        let w = d.window(-3, 3);
        for (i, v) in w.vertices().iter().enumerate() {
            if v.level < 3 {
                assert_eq!(w.out_neighbors(i).len(), 6);
            }
            if v.level > -3 {
                assert_eq!(w.in_neighbors(i).len(), 6);
            }
        }
    }

    #[test]
    fn mckay_praeger_params() {
        let g = factor_mckay_praeger(2, 1).unwrap();
        assert_eq!(g.period(), 2);
        assert_eq!(g.layer(1).edge_count(), 2);
        assert!(matches!(factor_mckay_praeger(1, 1), Err(ZooError::BadParams(_))));
    }

    #[test]
    fn involver_guard() {
        use LayerPattern::*;
        let k33 = CompleteBipartite { n: 3, m: 3 };
        let ac6 = AlternatingCycle { size: 6 };
        let m3 = Matching { n: 3 };
        assert_eq!(factor_with_involvers(vec![k33.clone(), ac6.clone()], false).unwrap(), factor_l());
        let g = factor_with_involvers(vec![k33.clone(), m3.clone(), ac6.clone(), m3], false).unwrap();
        assert_eq!(g.period(), 4);
        assert!(matches!(
            factor_with_involvers(vec![ac6.clone(), ac6.clone()], false),
            Err(ZooError::InvolverAdjacency { .. })
        ));
        assert!(matches!(
            factor_with_involvers(vec![ac6.clone()], false),
            Err(ZooError::InvolverAdjacency { .. })
        ));
        assert!(factor_with_involvers(vec![ac6.clone(), ac6], true).is_ok());
    }

    #[test]
    fn binary_tree_window() {
        let t = tree_factor(1, 2).unwrap().window(0, 2).unwrap();
        assert_eq!(t.vertex_count(), 7);
        assert_eq!(t.edge_count(), 6);
        let t = tree_factor(1, 2).unwrap().window(-1, 1).unwrap();
        assert_eq!(t.vertex_count(), 1 + 2 + 4);
    }

    #[test]
    fn reversed_tree_mirrors() {
        let out = tree_factor(1, 2).unwrap().window(-1, 2).unwrap();
        let inn = tree_factor(2, 1).unwrap().window(-2, 1).unwrap();
        assert_eq!(out.vertex_count(), inn.vertex_count());
        let swap = |v: &Vertex| {
            let label: String = v.coords[0]
                .chars()
                .map(|c| match c {
                    'u' => 'd',
                    'd' => 'u',
                    c => c,
                })
                .collect();
            Vertex::new(-v.level, [label])
        };
        for (a, b) in out.edge_vertices() {
            assert!(inn.has_edge(&swap(b), &swap(a)));
        }
        assert_eq!(out.edge_count(), inn.edge_count());
    }

    #[test]
    fn unary_tree_is_a_path() {
        let t = tree_factor(1, 1).unwrap().window(-2, 2).unwrap();
        assert_eq!(t.vertex_count(), 5);
        assert_eq!(t.edge_count(), 4);
    }

    #[test]
    fn general_tree_out_degrees() {
        let t = tree_factor(2, 3).unwrap().window(-1, 1).unwrap();
        for (i, v) in t.vertices().iter().enumerate() {
            if v.level < 1 {
                assert_eq!(t.out_neighbors(i).len(), 3, "{v}");
            }
        }
    }

    #[test]
    fn dl_budget() {
        assert!(matches!(
            diestel_leader(2, 2, -2, 2, 10),
            Err(ZooError::WindowTooLarge { .. })
        ));
        let dl = diestel_leader(2, 2, -2, 2, DEFAULT_VERTEX_BUDGET).unwrap();
        assert_eq!(dl.vertex_count(), 5 * 16);
    }
}
