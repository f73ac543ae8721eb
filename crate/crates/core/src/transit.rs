//! Arcs, finite automorphism groups and orbit evidence for arc transitivity.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::autos::{self, verify_automorphism, GeneratorCatalog, LayeredAutomorphism};
use crate::digraph::{FiniteBipartiteDigraph, FiniteDigraph, PeriodicLayeredDigraph, Vertex};
use crate::iso;
use crate::reach::DisjointSets;
use crate::zoo;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransitError {
    #[error("{vertices} vertices exceed the brute-force bound {bound}")]
    TooLarge { vertices: usize, bound: usize },
    #[error("generator {0} is not a verified automorphism")]
    UnverifiedGenerator(usize),
    #[error("cannot parse arc {0:?}")]
    ArcSyntax(String),
    #[error("levels must increase by one along an arc: {0}")]
    BadLevels(String),
}

/// A sequence of `n + 1` vertices on consecutive levels; `n = 0` is a single
/// vertex. Whether consecutive vertices are joined depends on the digraph and
/// is checked by its consumers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NArc {
    vertices: Vec<Vertex>,
}

impl NArc {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, TransitError> {
        if vertices.is_empty() {
            return Err(TransitError::ArcSyntax(String::new()));
        }
        if vertices.windows(2).any(|w| w[1].level != w[0].level + 1) {
            let arc = NArc { vertices };
            return Err(TransitError::BadLevels(arc.to_string()));
        }
        Ok(NArc { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start_level(&self) -> i64 {
        self.vertices[0].level
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Vertex, &Vertex)> + '_ {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }
}

impl fmt::Display for NArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(">")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for NArc {
    type Err = TransitError;

    /// Parses `"(0,-,-)>(1,o,-)"`, ignoring whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let vertices = s
            .split('>')
            .map(|p| p.parse::<Vertex>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| TransitError::ArcSyntax(s.to_string()))?;
        NArc::new(vertices)
    }
}

impl Serialize for NArc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All `n`-arcs inside `f` as vertex index sequences, in lexicographic order
/// of vertex indices.
pub fn enumerate_arc_indices(f: &FiniteDigraph, n: usize, from: Option<usize>) -> Vec<Vec<usize>> {
    fn extend(f: &FiniteDigraph, n: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if path.len() == n + 1 {
            out.push(path.clone());
            return;
        }
        let last = *path.last().expect("paths start nonempty");
        for &w in f.out_neighbors(last) {
            path.push(w);
            extend(f, n, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    let starts: Vec<usize> = match from {
        Some(v) => vec![v],
        None => (0..f.vertex_count()).collect(),
    };
    for s in starts {
        extend(f, n, &mut vec![s], &mut out);
    }
    out
}

/// All `n`-arcs fully inside `f`, optionally starting at `from`.
pub fn enumerate_arcs(f: &FiniteDigraph, n: usize, from: Option<&Vertex>) -> Vec<NArc> {
    let start = match from {
        Some(v) => match f.index_of(v) {
            Some(i) => Some(i),
            None => return Vec::new(),
        },
        None => None,
    };
    enumerate_arc_indices(f, n, start)
        .into_iter()
        .map(|p| NArc {
            vertices: p.into_iter().map(|i| f.vertices()[i].clone()).collect(),
        })
        .collect()
}

/// A permutation of the vertex indices of one finite digraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinitePermutation {
    pub images: Vec<usize>,
}

impl FinitePermutation {
    /// Bijective, and maps edges onto edges (equal edge counts make "into"
    /// enough).
    pub fn is_automorphism_of(&self, f: &FiniteDigraph) -> bool {
        let n = f.vertex_count();
        let mut seen = vec![false; n];
        self.images.len() == n
            && self
                .images
                .iter()
                .all(|&j| j < n && !std::mem::replace(&mut seen[j], true))
            && f
                .edges()
                .iter()
                .all(|&(u, v)| f.has_edge_indices(self.images[u], self.images[v]))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AutGroup {
    pub generators: Vec<FinitePermutation>,
    pub order: u128,
}

pub const DEFAULT_BRUTE_FORCE_BOUND: usize = 40;

/// Level- and direction-preserving automorphism group of a small finite
/// digraph, by backtracking with refinement.
pub fn brute_force_aut_group(f: &FiniteDigraph, bound: usize) -> Result<AutGroup, TransitError> {
    if f.vertex_count() > bound {
        return Err(TransitError::TooLarge {
            vertices: f.vertex_count(),
            bound,
        });
    }
    let (generators, order) = iso::automorphism_group(f).expect("the identity is always found");
    Ok(AutGroup {
        generators: generators
            .into_iter()
            .map(|images| FinitePermutation { images })
            .collect(),
        order,
    })
}

/// As [`brute_force_aut_group`], with the bottom side at level 0.
pub fn brute_force_aut_group_bipartite(
    b: &FiniteBipartiteDigraph,
    bound: usize,
) -> Result<AutGroup, TransitError> {
    brute_force_aut_group(&FiniteDigraph::from_bipartite(b, 0), bound)
}

/// Something that moves the vertices of a window.
#[derive(Debug, Clone)]
pub enum Generator {
    Layered(LayeredAutomorphism),
    Finite(FinitePermutation),
}

impl Generator {
    fn image(&self, f: &FiniteDigraph, v: usize) -> Option<usize> {
        match self {
            Generator::Layered(a) => a.apply(&f.vertices()[v]).ok().and_then(|w| f.index_of(&w)),
            Generator::Finite(p) => Some(p.images[v]),
        }
    }

    fn is_verified_on(&self, f: &FiniteDigraph) -> bool {
        match self {
            Generator::Layered(a) => {
                f.vertices().iter().all(|v| a.domain().contains(v))
                    && verify_automorphism(a.domain(), a).ok
            }
            Generator::Finite(p) => p.is_automorphism_of(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitMethod {
    GeneratorClosure,
    BruteForceGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub n: usize,
    pub arcs: usize,
    pub orbit_count: usize,
    pub orbit_sizes: Vec<usize>,
    pub method: OrbitMethod,
    pub window: (i64, i64),
    /// False if some generator image left the window and was discarded.
    pub complete: bool,
}

fn closure(f: &FiniteDigraph, n: usize, gens: &[Generator], method: OrbitMethod) -> OrbitReport {
    let arcs = enumerate_arc_indices(f, n, None);
    let position: HashMap<&[usize], usize> = arcs
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_slice(), i))
        .collect();
    let mut sets = DisjointSets::new(arcs.len());
    let mut complete = true;
    // vertex images are cached per generator; arcs only compose them
    let tables: Vec<Vec<Option<usize>>> = gens
        .iter()
        .map(|g| (0..f.vertex_count()).map(|v| g.image(f, v)).collect())
        .collect();
    let mut image = Vec::with_capacity(n + 1);
    for (i, arc) in arcs.iter().enumerate() {
        for table in &tables {
            image.clear();
            image.extend(arc.iter().map_while(|&v| table[v]));
            match (image.len() == arc.len())
                .then(|| position.get(image.as_slice()))
                .flatten()
            {
                Some(&j) => {
                    sets.union(i, j);
                }
                None => complete = false,
            }
        }
    }
    let orbit_sizes: Vec<usize> = sets.classes().iter().map(Vec::len).collect();
    OrbitReport {
        n,
        arcs: arcs.len(),
        orbit_count: orbit_sizes.len(),
        orbit_sizes,
        method,
        window: (f.lo(), f.hi()),
        complete,
    }
}

/// Orbits of the `n`-arcs of `f` under the group generated by `gens`,
/// closed inside the window.
pub fn arc_orbits(f: &FiniteDigraph, n: usize, gens: &[Generator]) -> Result<OrbitReport, TransitError> {
    if let Some(i) = gens.iter().position(|g| !g.is_verified_on(f)) {
        return Err(TransitError::UnverifiedGenerator(i));
    }
    Ok(closure(f, n, gens, OrbitMethod::GeneratorClosure))
}

/// Orbits of the `n`-arcs of `f` under its full automorphism group.
pub fn brute_force_arc_orbits(f: &FiniteDigraph, n: usize, bound: usize) -> Result<OrbitReport, TransitError> {
    let group = brute_force_aut_group(f, bound)?;
    let gens: Vec<Generator> = group.generators.into_iter().map(Generator::Finite).collect();
    Ok(closure(f, n, &gens, OrbitMethod::BruteForceGroup))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificationPath {
    /// Every arc is mapped onto the baseline by an explicit automorphism.
    Constructive,
    /// Orbit closure under supplied verified generators.
    Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcLengthCertificate {
    pub n: usize,
    pub arcs: usize,
    /// Constructive path: arcs whose canonical image is the baseline arc.
    pub mapped_to_baseline: Option<usize>,
    /// Evidence path: orbit closure inside the window.
    pub orbits: Option<OrbitReport>,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificationReport {
    pub path: CertificationPath,
    pub window: (i64, i64),
    pub lengths: Vec<ArcLengthCertificate>,
    /// All arcs of every length up to `n_max` inside the window lie in one
    /// orbit. Says nothing about arcs outside the window.
    pub certified: bool,
}

fn certify_constructive(catalog: &GeneratorCatalog, f: &FiniteDigraph, n_max: usize) -> Vec<ArcLengthCertificate> {
    let d = catalog.domain();
    (0..=n_max)
        .map(|n| {
            let baseline: Vec<(i64, u32)> = autos::baseline_arc(n)
                .vertices()
                .iter()
                .map(|v| (v.level, d.vertex_index(v).expect("baseline lies in D")))
                .collect();
            let arcs = enumerate_arc_indices(f, n, None);
            let mapped = arcs
                .iter()
                .filter(|arc| {
                    let mut walk: Vec<(i64, u32)> = arc
                        .iter()
                        .map(|&i| {
                            let v = &f.vertices()[i];
                            (v.level, d.vertex_index(v).expect("window of D"))
                        })
                        .collect();
                    catalog.canonical_image(&mut walk).is_ok() && walk == baseline
                })
                .count();
            ArcLengthCertificate {
                n,
                arcs: arcs.len(),
                mapped_to_baseline: Some(mapped),
                orbits: None,
                certified: mapped == arcs.len(),
            }
        })
        .collect()
}

/// Window evidence for high arc transitivity of `d`, for arc lengths
/// `0..=n_max` and arcs inside levels `lo..=hi`.
///
/// The digraph `D` is certified constructively. Anything else is checked by
/// orbit closure under `evidence` (or, when absent, translation by one
/// period), and a length counts as certified only if its arcs form a single
/// orbit.
pub fn certify_window_hat(
    d: &PeriodicLayeredDigraph,
    n_max: usize,
    lo: i64,
    hi: i64,
    evidence: Option<&[Generator]>,
) -> Result<CertificationReport, TransitError> {
    let f = d.window(lo, hi);
    let (path, lengths) = if evidence.is_none() && *d == zoo::digraph_d() {
        let catalog = autos::generators_d();
        (CertificationPath::Constructive, certify_constructive(&catalog, &f, n_max))
    } else {
        let default;
        let gens = match evidence {
            Some(g) => g,
            None => {
                let domain = std::sync::Arc::new(d.clone());
                default = [Generator::Layered(LayeredAutomorphism::translation(domain, 1))];
                &default[..]
            }
        };
        let mut lengths = Vec::new();
        for n in 0..=n_max {
            let orbits = arc_orbits(&f, n, gens)?;
            lengths.push(ArcLengthCertificate {
                n,
                arcs: orbits.arcs,
                mapped_to_baseline: None,
                certified: orbits.orbit_count <= 1,
                orbits: Some(orbits),
            });
        }
        (CertificationPath::Evidence, lengths)
    };
    Ok(CertificationReport {
        path,
        window: (lo, hi),
        certified: lengths.iter().all(|l| l.certified),
        lengths,
    })
}
