//! Backtracking search for level- and direction-preserving isomorphisms of
//! finite leveled digraphs.
//!
//! Candidates are pruned by colour refinement started from
//! (level, in-degree, out-degree) and by forward checking of adjacency.
//! Vertices of the first graph are assigned in index order and candidates
//! are tried in increasing index order, so the first isomorphism found is
//! the lexicographically least one.

use std::collections::BTreeMap;

use crate::digraph::FiniteDigraph;

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn empty(n: usize) -> Self {
        BitSet { words: vec![0; n.div_ceil(64)] }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn intersect(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    fn subtract(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

struct Prepared {
    level: Vec<i64>,
    out: Vec<BitSet>,
    inc: Vec<BitSet>,
}

impl Prepared {
    fn new(g: &FiniteDigraph) -> Self {
        let n = g.vertex_count();
        let mut out = vec![BitSet::empty(n); n];
        let mut inc = vec![BitSet::empty(n); n];
        for &(u, v) in g.edges() {
            out[u].insert(v);
            inc[v].insert(u);
        }
        Prepared {
            level: g.vertices().iter().map(|v| v.level).collect(),
            out,
            inc,
        }
    }
}

/// Joint colour refinement of two graphs. Colours are comparable across the
/// two graphs.
fn refine(g1: &FiniteDigraph, g2: &FiniteDigraph) -> (Vec<usize>, Vec<usize>) {
    let initial = |g: &FiniteDigraph| -> Vec<(i64, usize, usize)> {
        (0..g.vertex_count())
            .map(|v| {
                (
                    g.vertices()[v].level,
                    g.in_neighbors(v).len(),
                    g.out_neighbors(v).len(),
                )
            })
            .collect()
    };
    let relabel = |a: &[(i64, usize, usize)], b: &[(i64, usize, usize)]| {
        let ids: BTreeMap<&(i64, usize, usize), usize> = a
            .iter()
            .chain(b)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        (
            a.iter().map(|k| ids[k]).collect::<Vec<_>>(),
            b.iter().map(|k| ids[k]).collect::<Vec<_>>(),
        )
    };
    let (mut c1, mut c2) = relabel(&initial(g1), &initial(g2));
    let mut classes = distinct(&c1, &c2);
    loop {
        let signature = |g: &FiniteDigraph, c: &[usize]| -> Vec<(usize, Vec<usize>, Vec<usize>)> {
            (0..g.vertex_count())
                .map(|v| {
                    let mut o: Vec<usize> = g.out_neighbors(v).iter().map(|&w| c[w]).collect();
                    let mut i: Vec<usize> = g.in_neighbors(v).iter().map(|&w| c[w]).collect();
                    o.sort_unstable();
                    i.sort_unstable();
                    (c[v], o, i)
                })
                .collect()
        };
        let s1 = signature(g1, &c1);
        let s2 = signature(g2, &c2);
        let ids: BTreeMap<&(usize, Vec<usize>, Vec<usize>), usize> = s1
            .iter()
            .chain(&s2)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        let n1: Vec<usize> = s1.iter().map(|k| ids[k]).collect();
        let n2: Vec<usize> = s2.iter().map(|k| ids[k]).collect();
        let next = distinct(&n1, &n2);
        c1 = n1;
        c2 = n2;
        if next == classes {
            return (c1, c2);
        }
        classes = next;
    }
}

fn distinct(a: &[usize], b: &[usize]) -> usize {
    a.iter()
        .chain(b)
        .collect::<std::collections::BTreeSet<_>>()
        .len()
}

/// Reusable isomorphism search between two fixed graphs.
pub(crate) struct IsoSearch<'a> {
    g1: &'a FiniteDigraph,
    p1: Prepared,
    p2: Prepared,
    initial: Option<Vec<BitSet>>,
}

impl<'a> IsoSearch<'a> {
    pub(crate) fn new(g1: &'a FiniteDigraph, g2: &'a FiniteDigraph) -> Self {
        let n = g1.vertex_count();
        let p1 = Prepared::new(g1);
        let p2 = Prepared::new(g2);
        let feasible = n == g2.vertex_count() && g1.edge_count() == g2.edge_count();
        let initial = feasible.then(|| refine(g1, g2)).and_then(|(c1, c2)| {
            let mut hist: BTreeMap<usize, i64> = BTreeMap::new();
            for &c in &c1 {
                *hist.entry(c).or_default() += 1;
            }
            for &c in &c2 {
                *hist.entry(c).or_default() -= 1;
            }
            if hist.values().any(|&d| d != 0) {
                return None;
            }
            let mut by_colour: BTreeMap<usize, BitSet> = BTreeMap::new();
            for (w, &c) in c2.iter().enumerate() {
                by_colour.entry(c).or_insert_with(|| BitSet::empty(n)).insert(w);
            }
            Some(c1.iter().map(|c| by_colour[c].clone()).collect())
        });
        IsoSearch { g1, p1, p2, initial }
    }

    /// Least isomorphism extending the prescribed pairs, if any.
    pub(crate) fn find(&self, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
        let mut domains = self.initial.clone()?;
        let n = domains.len();
        for &(v, w) in fixed {
            if !domains[v].contains(w) {
                return None;
            }
            let mut single = BitSet::empty(n);
            single.insert(w);
            domains[v] = single;
        }
        let mut assignment = vec![usize::MAX; n];
        if self.extend(0, &mut domains, &mut assignment) {
            Some(assignment)
        } else {
            None
        }
    }

    fn extend(&self, v: usize, domains: &mut [BitSet], assignment: &mut [usize]) -> bool {
        let n = domains.len();
        if v == n {
            return true;
        }
        let candidates: Vec<usize> = domains[v].iter().collect();
        for w in candidates {
            let mut next: Vec<BitSet> = domains.to_vec();
            if !self.propagate(v, w, &mut next) {
                continue;
            }
            assignment[v] = w;
            if self.extend(v + 1, &mut next, assignment) {
                domains.clone_from_slice(&next);
                return true;
            }
        }
        assignment[v] = usize::MAX;
        false
    }

    fn propagate(&self, v: usize, w: usize, domains: &mut [BitSet]) -> bool {
        let lv = self.p1.level[v];
        for (u, dom) in domains.iter_mut().enumerate().skip(v + 1) {
            dom.remove(w);
            let lu = self.p1.level[u];
            if lu == lv + 1 {
                if self.p1.out[v].contains(u) {
                    dom.intersect(&self.p2.out[w]);
                } else {
                    dom.subtract(&self.p2.out[w]);
                }
            } else if lu == lv - 1 {
                if self.p1.inc[v].contains(u) {
                    dom.intersect(&self.p2.inc[w]);
                } else {
                    dom.subtract(&self.p2.inc[w]);
                }
            }
            if dom.is_empty() {
                return false;
            }
        }
        true
    }

    pub(crate) fn vertex_count(&self) -> usize {
        self.g1.vertex_count()
    }
}

/// Least level- and direction-preserving isomorphism `g1 -> g2`.
pub(crate) fn find_isomorphism(g1: &FiniteDigraph, g2: &FiniteDigraph) -> Option<Vec<usize>> {
    IsoSearch::new(g1, g2).find(&[])
}

/// Generators (one transversal element per orbit point along a stabilizer
/// chain) and the exact order of the automorphism group.
pub(crate) fn automorphism_group(g: &FiniteDigraph) -> Option<(Vec<Vec<usize>>, u128)> {
    let search = IsoSearch::new(g, g);
    let n = search.vertex_count();
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut order: u128 = 1;
    // Walk the chain from the deepest stabilizer up so that generators of
    // deeper stabilizers are available when closing orbits.
    for k in (0..n).rev() {
        let fixed: Vec<(usize, usize)> = (0..k).map(|b| (b, b)).collect();
        let candidates: Vec<usize> = search.initial.as_ref()?[k].iter().collect();
        let mut orbit = close_orbit(k, &generators, n);
        let mut rejected = vec![false; n];
        for w in candidates {
            if orbit[w] || rejected[w] {
                continue;
            }
            let mut prescribed = fixed.clone();
            prescribed.push((k, w));
            match search.find(&prescribed) {
                Some(p) => {
                    generators.push(p);
                    orbit = close_orbit(k, &generators, n);
                }
                None => {
                    // the whole orbit of w under the known stabilizer is unreachable
                    for x in close_orbit(w, &generators, n)
                        .iter()
                        .enumerate()
                        .filter(|e| *e.1)
                        .map(|e| e.0)
                    {
                        rejected[x] = true;
                    }
                }
            }
        }
        let size = orbit.iter().filter(|&&b| b).count() as u128;
        order = order.checked_mul(size)?;
    }
    Some((generators, order))
}

fn close_orbit(start: usize, generators: &[Vec<usize>], n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for g in generators {
            let y = g[x];
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}
