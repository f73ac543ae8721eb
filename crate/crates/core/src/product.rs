//! Layerwise direct products.
//!
//! The product of factors `G_1..G_k` with offsets `o_1..o_k` has, between
//! levels `n` and `n + 1`, the direct product of `layer(G_j, n + o_j)`.
//! Product vertices are flattened coordinate tuples in factor order. The
//! result is materialized over one period (the lcm of the factor periods).

use thiserror::Error;

use crate::digraph::{lcm, Coords, FiniteBipartiteDigraph, LayerPattern, PeriodicLayeredDigraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("a product needs at least two factors, got {0}")]
    TooFewFactors(usize),
    #[error("{factors} factors but {offsets} offsets")]
    LengthMismatch { factors: usize, offsets: usize },
}

/// Factors with one absolute epimorphism offset each.
#[derive(Debug, Clone)]
pub struct ProductDescriptor {
    pub factors: Vec<PeriodicLayeredDigraph>,
    pub offsets: Vec<i64>,
}

impl ProductDescriptor {
    pub fn new(factors: Vec<PeriodicLayeredDigraph>, offsets: Vec<i64>) -> Result<Self, ProductError> {
        if factors.len() != offsets.len() {
            return Err(ProductError::LengthMismatch {
                factors: factors.len(),
                offsets: offsets.len(),
            });
        }
        if factors.len() < 2 {
            return Err(ProductError::TooFewFactors(factors.len()));
        }
        Ok(ProductDescriptor { factors, offsets })
    }

    pub fn period(&self) -> usize {
        self.factors.iter().map(|f| f.period()).fold(1, lcm)
    }
}

/// Direct product of bipartite layers: bottoms and tops are the cartesian
/// products (lexicographic, coordinates flattened), and an edge exists iff
/// every coordinate pair is an edge of its factor.
pub fn bipartite_product(layers: &[&FiniteBipartiteDigraph]) -> FiniteBipartiteDigraph {
    fn tuples(sides: &[&[Coords]]) -> Vec<(Vec<usize>, Coords)> {
        let mut acc: Vec<(Vec<usize>, Coords)> = vec![(Vec::new(), Vec::new())];
        for side in sides {
            acc = acc
                .into_iter()
                .flat_map(|(idx, coords)| {
                    side.iter().enumerate().map(move |(i, c)| {
                        let mut idx = idx.clone();
                        idx.push(i);
                        let mut coords = coords.clone();
                        coords.extend(c.iter().cloned());
                        (idx, coords)
                    })
                })
                .collect();
        }
        acc
    }

    let bottoms: Vec<&[Coords]> = layers.iter().map(|l| l.bottom()).collect();
    let tops: Vec<&[Coords]> = layers.iter().map(|l| l.top()).collect();
    let bottom = tuples(&bottoms);
    let top = tuples(&tops);

    // Mixed-radix positions so that successors can be enumerated per factor.
    let top_radix: Vec<usize> = tops.iter().map(|t| t.len()).collect();
    let top_position = |idx: &[usize]| idx.iter().zip(&top_radix).fold(0, |acc, (i, r)| acc * r + i);

    let mut edges = Vec::new();
    for (b, (bidx, _)) in bottom.iter().enumerate() {
        let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
        for (layer, &bi) in layers.iter().zip(bidx) {
            let succ: Vec<usize> = layer.successors(bi).collect();
            choices = choices
                .into_iter()
                .flat_map(|c| {
                    succ.iter().map(move |&s| {
                        let mut c = c.clone();
                        c.push(s);
                        c
                    })
                })
                .collect();
        }
        edges.extend(choices.iter().map(|c| (b, top_position(c))));
    }
    FiniteBipartiteDigraph::from_indices(
        bottom.into_iter().map(|(_, c)| c).collect(),
        top.into_iter().map(|(_, c)| c).collect(),
        edges,
    )
    .expect("product labels are distinct tuples of distinct labels")
}

fn materialize(factors: &[&PeriodicLayeredDigraph], offsets: &[i64]) -> PeriodicLayeredDigraph {
    let period = factors.iter().map(|f| f.period()).fold(1, lcm);
    let patterns = (0..period as i64)
        .map(|n| {
            let layers: Vec<&FiniteBipartiteDigraph> = factors
                .iter()
                .zip(offsets)
                .map(|(f, &o)| f.layer(n + o))
                .collect();
            LayerPattern::Custom(bipartite_product(&layers))
        })
        .collect();
    let name = factors
        .iter()
        .map(|f| f.name().unwrap_or("G"))
        .collect::<Vec<_>>()
        .join("x");
    PeriodicLayeredDigraph::new(patterns, 0)
        .expect("products of well-formed factors are well-formed")
        .with_name(name)
}

/// Binary layerwise direct product.
pub fn layerwise_product(
    g1: &PeriodicLayeredDigraph,
    g2: &PeriodicLayeredDigraph,
    off1: i64,
    off2: i64,
) -> PeriodicLayeredDigraph {
    materialize(&[g1, g2], &[off1, off2])
}

/// n-ary layerwise direct product.
pub fn layerwise_product_many(d: &ProductDescriptor) -> PeriodicLayeredDigraph {
    let factors: Vec<&PeriodicLayeredDigraph> = d.factors.iter().collect();
    materialize(&factors, &d.offsets)
}

/// Moves the pattern at level `i + t` down to level `i`.
pub fn shift(g: &PeriodicLayeredDigraph, t: i64) -> PeriodicLayeredDigraph {
    g.shifted(t)
}

/// Product of the `l` distinct shifts of a period-`l` factor.
pub fn shift_product(g: &PeriodicLayeredDigraph) -> PeriodicLayeredDigraph {
    let l = g.period();
    if l == 1 {
        return g.clone();
    }
    let shifts: Vec<PeriodicLayeredDigraph> = (0..l as i64).map(|t| shift(g, t)).collect();
    let refs: Vec<&PeriodicLayeredDigraph> = shifts.iter().collect();
    let name = format!("shifts({})", g.name().unwrap_or("G"));
    materialize(&refs, &vec![0; l]).with_name(name)
}
