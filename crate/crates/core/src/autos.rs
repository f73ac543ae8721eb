//! Level-shifting automorphisms of periodic leveled digraphs.
//!
//! A [`LayeredAutomorphism`] moves every vertex up by a fixed `shift` and acts
//! on each fiber by a bijection. The bijection at level `l` is taken from a
//! periodic background unless a finite override exists at `l`. Bijections
//! are stored as position maps from fiber `l` to fiber `l + shift`.
//!
//! The generator catalog for the counterexample `D` and the arc
//! canonicalization built from it live here as well.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::digraph::{lcm, Coords, PeriodicLayeredDigraph, Vertex};
use crate::transit::NArc;
use crate::zoo;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("vertex {0} does not belong to the automorphism's digraph")]
    ForeignVertex(String),
    #[error("automorphisms act on different digraphs")]
    DomainMismatch,
    #[error("map at level {level} is not a bijection onto the target fiber")]
    NotAPermutation { level: i64 },
    #[error("bad exchange: {0}")]
    BadExchange(String),
    #[error("not an arc: {0}")]
    NotAnArc(String),
    #[error("working edge head {0} has third coordinate '+', which no edge from the baseline allows")]
    ImpossibleCoordinate(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
}

/// Position map from one fiber to another.
pub type FiberPerm = Vec<u32>;

fn is_permutation(p: &[u32], target_len: usize) -> bool {
    if p.len() != target_len {
        return false;
    }
    let mut seen = vec![false; target_len];
    p.iter().all(|&j| {
        let j = j as usize;
        j < target_len && !std::mem::replace(&mut seen[j], true)
    })
}

fn invert(p: &[u32]) -> FiberPerm {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j as usize] = i as u32;
    }
    inv
}

fn then(first: &[u32], second: &[u32]) -> FiberPerm {
    first.iter().map(|&j| second[j as usize]).collect()
}

#[derive(Debug, Clone)]
pub struct LayeredAutomorphism {
    domain: Arc<PeriodicLayeredDigraph>,
    shift: i64,
    /// Indexed by `level mod background.len()`; the length is a multiple of
    /// the domain period.
    background: Vec<FiberPerm>,
    overrides: BTreeMap<i64, FiberPerm>,
}

impl LayeredAutomorphism {
    pub fn identity(domain: Arc<PeriodicLayeredDigraph>) -> Self {
        let p = domain.period() as i64;
        let background = (0..p)
            .map(|r| (0..domain.fiber_size(r) as u32).collect())
            .collect();
        LayeredAutomorphism {
            domain,
            shift: 0,
            background,
            overrides: BTreeMap::new(),
        }
    }

    /// Translation by `periods` whole periods, acting as the identity on
    /// labels.
    pub fn translation(domain: Arc<PeriodicLayeredDigraph>, periods: i64) -> Self {
        let mut a = Self::identity(domain);
        a.shift = periods * a.domain.period() as i64;
        a
    }

    /// Periodic map `(l, c) -> (l + shift, f(l, c))` where `f` depends on `l`
    /// only through `l mod period`.
    pub fn from_map<F>(
        domain: Arc<PeriodicLayeredDigraph>,
        shift: i64,
        period: usize,
        f: F,
    ) -> Result<Self, AutError>
    where
        F: Fn(i64, &Coords) -> Coords,
    {
        let q = lcm(period.max(1), domain.period());
        let mut background = Vec::with_capacity(q);
        for r in 0..q as i64 {
            let perm: Option<FiberPerm> = domain
                .fiber(r)
                .iter()
                .map(|c| domain.index_of_coords(r + shift, &f(r, c)))
                .collect();
            match perm {
                Some(p) if is_permutation(&p, domain.fiber_size(r + shift)) => background.push(p),
                _ => return Err(AutError::NotAPermutation { level: r }),
            }
        }
        Ok(LayeredAutomorphism {
            domain,
            shift,
            background,
            overrides: BTreeMap::new(),
        })
    }

    /// Identity everywhere except for the listed vertex exchanges.
    pub fn from_exchanges(
        domain: Arc<PeriodicLayeredDigraph>,
        pairs: &[(Vertex, Vertex)],
    ) -> Result<Self, AutError> {
        let mut a = Self::identity(domain);
        let mut used = BTreeSet::new();
        for (u, v) in pairs {
            if u.level != v.level {
                return Err(AutError::BadExchange(format!("{u} and {v} lie on different levels")));
            }
            let iu = a
                .domain
                .vertex_index(u)
                .ok_or_else(|| AutError::ForeignVertex(u.to_string()))?;
            let iv = a
                .domain
                .vertex_index(v)
                .ok_or_else(|| AutError::ForeignVertex(v.to_string()))?;
            if !used.insert(u.clone()) || !used.insert(v.clone()) {
                return Err(AutError::BadExchange(format!("{u} or {v} is exchanged twice")));
            }
            let level = u.level;
            let base = a.background_at(level).clone();
            let perm = a.overrides.entry(level).or_insert(base);
            perm.swap(iu as usize, iv as usize);
        }
        a.normalize();
        Ok(a)
    }

    /// Replaces the action at one level.
    pub fn with_override(mut self, level: i64, perm: FiberPerm) -> Result<Self, AutError> {
        if perm.len() != self.domain.fiber_size(level)
            || !is_permutation(&perm, self.domain.fiber_size(level + self.shift))
        {
            return Err(AutError::NotAPermutation { level });
        }
        self.overrides.insert(level, perm);
        self.normalize();
        Ok(self)
    }

    pub fn domain(&self) -> &Arc<PeriodicLayeredDigraph> {
        &self.domain
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn background_period(&self) -> usize {
        self.background.len()
    }

    pub fn overrides(&self) -> &BTreeMap<i64, FiberPerm> {
        &self.overrides
    }

    fn background_at(&self, level: i64) -> &FiberPerm {
        &self.background[level.rem_euclid(self.background.len() as i64) as usize]
    }

    pub fn perm_at(&self, level: i64) -> &FiberPerm {
        self.overrides
            .get(&level)
            .unwrap_or_else(|| self.background_at(level))
    }

    /// Levels where the action differs from the background.
    pub fn support_levels(&self) -> impl Iterator<Item = i64> + '_ {
        self.overrides.keys().copied()
    }

    /// Vertices whose image differs from the background image.
    pub fn support(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        for (&level, perm) in &self.overrides {
            let bg = self.background_at(level);
            for (i, (&a, &b)) in perm.iter().zip(bg).enumerate() {
                if a != b {
                    out.push(self.domain.vertex_at(level, i as u32));
                }
            }
        }
        out
    }

    pub fn apply_index(&self, level: i64, index: u32) -> (i64, u32) {
        (level + self.shift, self.perm_at(level)[index as usize])
    }

    pub fn apply(&self, v: &Vertex) -> Result<Vertex, AutError> {
        let i = self
            .domain
            .vertex_index(v)
            .ok_or_else(|| AutError::ForeignVertex(v.to_string()))?;
        let (level, j) = self.apply_index(v.level, i);
        Ok(self.domain.vertex_at(level, j))
    }

    fn same_domain(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.domain, &other.domain) || *self.domain == *other.domain
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self, AutError> {
        if !self.same_domain(other) {
            return Err(AutError::DomainMismatch);
        }
        let q = lcm(self.background.len(), other.background.len());
        let s = other.shift;
        let background = (0..q as i64)
            .map(|r| then(other.background_at(r), self.background_at(r + s)))
            .collect();
        let levels: BTreeSet<i64> = other
            .overrides
            .keys()
            .copied()
            .chain(self.overrides.keys().map(|k| k - s))
            .collect();
        let overrides = levels
            .into_iter()
            .map(|l| (l, then(other.perm_at(l), self.perm_at(l + s))))
            .collect();
        let mut out = LayeredAutomorphism {
            domain: Arc::clone(&other.domain),
            shift: self.shift + s,
            background,
            overrides,
        };
        out.normalize();
        Ok(out)
    }

    pub fn inverse(&self) -> Self {
        let s = self.shift;
        let q = self.background.len() as i64;
        let background = (0..q).map(|r| invert(self.background_at(r - s))).collect();
        let overrides = self
            .overrides
            .iter()
            .map(|(&l, p)| (l + s, invert(p)))
            .collect();
        let mut out = LayeredAutomorphism {
            domain: Arc::clone(&self.domain),
            shift: -s,
            background,
            overrides,
        };
        out.normalize();
        out
    }

    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(Arc::clone(&self.domain));
        for _ in 0..k.unsigned_abs() {
            acc = base.compose(&acc).expect("same domain");
        }
        acc
    }

    /// Drops overrides equal to the background and shortens the background
    /// to its least period that is still a multiple of the domain period.
    fn normalize(&mut self) {
        let q = self.background.len();
        let p = self.domain.period();
        for d in (p..=q).step_by(p) {
            if q.is_multiple_of(d) && (d..q).all(|r| self.background[r] == self.background[r % d]) {
                self.background.truncate(d);
                break;
            }
        }
        let bg = &self.background;
        let q = bg.len() as i64;
        self.overrides
            .retain(|l, perm| *perm != bg[l.rem_euclid(q) as usize]);
    }

    /// Pointwise equality, decided on a window two joint periods wider than
    /// the union of both supports.
    pub fn same_action(&self, other: &Self) -> bool {
        if !self.same_domain(other) || self.shift != other.shift {
            return false;
        }
        let q = lcm(self.background.len(), other.background.len()) as i64;
        let support: BTreeSet<i64> = self.support_levels().chain(other.support_levels()).collect();
        let (lo, hi) = match (support.first(), support.last()) {
            (Some(&a), Some(&b)) => (a - 2 * q, b + 2 * q),
            _ => (0, 2 * q),
        };
        (lo..=hi).all(|l| self.perm_at(l) == other.perm_at(l))
    }

    /// Pointwise equality on the given levels.
    pub fn agrees_on(&self, other: &Self, lo: i64, hi: i64) -> bool {
        self.shift == other.shift && (lo..=hi).all(|l| self.perm_at(l) == other.perm_at(l))
    }
}

/// Outcome of an exhaustive automorphism check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub bijective: bool,
    pub preserves_edges: bool,
    pub inverse_preserves_edges: bool,
    /// Vertices whose image differs from the periodic background.
    pub support_vertices: usize,
    /// Edges with at least one endpoint in the support.
    pub incident_edges: usize,
    pub levels_checked: (i64, i64),
    pub edges_checked: usize,
    pub violations: usize,
    /// First edge (in level, then fiber order) whose image is not an edge.
    pub witness: Option<(Vertex, Vertex)>,
}

/// Checks that `a` is a bijection of `d` mapping edges to edges in both
/// directions.
///
/// Outside the override region the action and the digraph are periodic with
/// joint period `L`, so the layers from one `L` below the lowest override to
/// one `L` above the highest cover every case.
pub fn verify_automorphism(d: &PeriodicLayeredDigraph, a: &LayeredAutomorphism) -> VerificationReport {
    if **a.domain() != *d {
        return VerificationReport {
            ok: false,
            bijective: false,
            preserves_edges: false,
            inverse_preserves_edges: false,
            support_vertices: 0,
            incident_edges: 0,
            levels_checked: (0, 0),
            edges_checked: 0,
            violations: 0,
            witness: None,
        };
    }
    let joint = lcm(a.background_period(), d.period()) as i64;
    let (lo, hi) = match (a.overrides.keys().next(), a.overrides.keys().next_back()) {
        (Some(&first), Some(&last)) => (first - joint - 1, last + joint + 1),
        _ => (0, joint),
    };

    let bijective = (0..a.background_period() as i64)
        .map(|r| (r, a.background_at(r)))
        .chain(a.overrides.iter().map(|(&l, p)| (l, p)))
        .all(|(l, p)| p.len() == d.fiber_size(l) && is_permutation(p, d.fiber_size(l + a.shift)));

    let inverse = a.inverse();
    let mut witness = None;
    let mut violations = 0;
    let mut inverse_violations = 0;
    let mut edges_checked = 0;
    if bijective {
        for level in lo..hi {
            for i in 0..d.fiber_size(level) as u32 {
                for &j in d.successor_indices(level, i) {
                    edges_checked += 1;
                    let (l2, i2) = a.apply_index(level, i);
                    let (_, j2) = a.apply_index(level + 1, j);
                    if !d.has_edge_indices(l2, i2, j2) {
                        violations += 1;
                        witness.get_or_insert_with(|| {
                            (d.vertex_at(level, i), d.vertex_at(level + 1, j))
                        });
                    }
                }
            }
        }
        let (ilo, ihi) = (lo + a.shift, hi + a.shift);
        for level in ilo..ihi {
            for i in 0..d.fiber_size(level) as u32 {
                for &j in d.successor_indices(level, i) {
                    let (l2, i2) = inverse.apply_index(level, i);
                    let (_, j2) = inverse.apply_index(level + 1, j);
                    if !d.has_edge_indices(l2, i2, j2) {
                        inverse_violations += 1;
                    }
                }
            }
        }
    }

    let support: BTreeSet<(i64, u32)> = a
        .support()
        .iter()
        .map(|v| (v.level, d.vertex_index(v).expect("support lies in the domain")))
        .collect();
    let mut incident_edges = 0;
    if let (Some(first), Some(last)) = (support.first(), support.last()) {
        for level in first.0 - 1..=last.0 {
            for i in 0..d.fiber_size(level) as u32 {
                for &j in d.successor_indices(level, i) {
                    if support.contains(&(level, i)) || support.contains(&(level + 1, j)) {
                        incident_edges += 1;
                    }
                }
            }
        }
    }

    VerificationReport {
        ok: bijective && violations == 0 && inverse_violations == 0,
        bijective,
        preserves_edges: bijective && violations == 0,
        inverse_preserves_edges: bijective && inverse_violations == 0,
        support_vertices: support.len(),
        incident_edges,
        levels_checked: (lo, hi),
        edges_checked,
        violations: violations + inverse_violations,
        witness,
    }
}

/// One letter of a generator word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `sigma^k`
    Sigma(i64),
    /// `theta_o`: moves `(0,o,y)` to `(0,-,y)`.
    ThetaLowerO,
    /// `theta_p`: moves `(0,+,y)` to `(0,-,y)`.
    ThetaLowerP,
    /// `theta^o`: moves `(0,x,o)` to `(0,x,-)`.
    ThetaUpperO,
    /// `theta^p`: moves `(0,x,+)` to `(0,x,-)`.
    ThetaUpperP,
    /// `alpha_o`: moves `(1,o,y)` to `(1,-,y)`.
    AlphaLowerO,
    /// `alpha_p`: moves `(1,+,y)` to `(1,-,y)`.
    AlphaLowerP,
    /// `alpha^o`: moves `(1,x,o)` to `(1,x,-)`.
    AlphaUpperO,
    Identity,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Sigma(k) => write!(f, "sigma^{k}"),
            Generator::ThetaLowerO => f.write_str("theta_o"),
            Generator::ThetaLowerP => f.write_str("theta_p"),
            Generator::ThetaUpperO => f.write_str("theta^o"),
            Generator::ThetaUpperP => f.write_str("theta^p"),
            Generator::AlphaLowerO => f.write_str("alpha_o"),
            Generator::AlphaLowerP => f.write_str("alpha_p"),
            Generator::AlphaUpperO => f.write_str("alpha^o"),
            Generator::Identity => f.write_str("id"),
        }
    }
}

impl FromStr for Generator {
    type Err = AutError;

    /// Accepts the word tokens and the catalog names (`theta_lo`, ...).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "sigma" => Generator::Sigma(1),
            "theta_o" | "theta_lo" => Generator::ThetaLowerO,
            "theta_p" | "theta_lp" => Generator::ThetaLowerP,
            "theta^o" | "theta_uo" => Generator::ThetaUpperO,
            "theta^p" | "theta_up" => Generator::ThetaUpperP,
            "alpha_o" | "alpha_lo" => Generator::AlphaLowerO,
            "alpha_p" | "alpha_lp" => Generator::AlphaLowerP,
            "alpha^o" | "alpha_uo" => Generator::AlphaUpperO,
            "id" => Generator::Identity,
            other => {
                let k = other
                    .strip_prefix("sigma^")
                    .and_then(|k| k.parse::<i64>().ok())
                    .ok_or_else(|| AutError::UnknownGenerator(other.to_string()))?;
                Generator::Sigma(k)
            }
        })
    }
}

/// A composition of generators, written outermost first: `"sigma^-1 alpha_o"`
/// applies `alpha_o` and then `sigma^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneratorWord {
    pub letters: Vec<Generator>,
}

impl GeneratorWord {
    /// Builds a word from letters in application order.
    pub fn from_applied(applied: &[Generator]) -> Self {
        let mut letters: Vec<Generator> = Vec::new();
        for &g in applied.iter().rev() {
            match (letters.last_mut(), g) {
                (_, Generator::Identity) | (_, Generator::Sigma(0)) => {}
                (Some(Generator::Sigma(a)), Generator::Sigma(b)) => {
                    *a += b;
                    if *a == 0 {
                        letters.pop();
                    }
                }
                _ => letters.push(g),
            }
        }
        GeneratorWord { letters }
    }

    pub fn evaluate(&self, catalog: &GeneratorCatalog) -> LayeredAutomorphism {
        self.letters
            .iter()
            .fold(catalog.identity.clone(), |acc, &g| {
                acc.compose(&catalog.get(g)).expect("catalog entries share a domain")
            })
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self.letters.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for GeneratorWord {
    type Err = AutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<Generator>, _>>()?;
        Ok(GeneratorWord { letters })
    }
}

/// The shift and the seven exchange automorphisms of `D`.
#[derive(Debug, Clone)]
pub struct GeneratorCatalog {
    domain: Arc<PeriodicLayeredDigraph>,
    pub sigma: LayeredAutomorphism,
    pub theta_lo: LayeredAutomorphism,
    pub theta_lp: LayeredAutomorphism,
    pub theta_uo: LayeredAutomorphism,
    pub theta_up: LayeredAutomorphism,
    pub alpha_lo: LayeredAutomorphism,
    pub alpha_lp: LayeredAutomorphism,
    pub alpha_uo: LayeredAutomorphism,
    pub identity: LayeredAutomorphism,
    sigma_inverse: LayeredAutomorphism,
    /// `sigma^k` for `|k| <= SIGMA_CACHE`, at index `k + SIGMA_CACHE`.
    sigma_powers: Vec<LayeredAutomorphism>,
}

const SIGMA_CACHE: i64 = 16;

const SIGNS: [&str; 3] = ["-", "o", "+"];

/// Exchanges `(level, a, y) <-> (level, b, y)` for all `y` (coordinate 0) or
/// `(level, x, a) <-> (level, x, b)` for all `x` (coordinate 1).
fn exchange(level: i64, coord: usize, a: &str, b: &str) -> Vec<(Vertex, Vertex)> {
    SIGNS
        .iter()
        .map(|other| {
            let make = |s: &str| {
                let mut c = [*other, *other];
                c[coord] = s;
                Vertex::new(level, c)
            };
            (make(a), make(b))
        })
        .collect()
}

/// Builds and returns the generators of `D` exactly as their exchange lists
/// define them. Each one is a verified automorphism (see tests).
pub fn generators_d() -> GeneratorCatalog {
    let domain = Arc::new(zoo::digraph_d());
    let ex = |lists: Vec<Vec<(Vertex, Vertex)>>| {
        let pairs: Vec<(Vertex, Vertex)> = lists.into_iter().flatten().collect();
        LayeredAutomorphism::from_exchanges(Arc::clone(&domain), &pairs).expect("valid exchange list")
    };
    let sigma = LayeredAutomorphism::from_map(Arc::clone(&domain), 1, 1, |_, c| {
        vec![c[1].clone(), c[0].clone()]
    })
    .expect("the coordinate flip permutes every fiber of D");
    GeneratorCatalog {
        theta_lo: ex(vec![exchange(0, 0, "o", "-"), exchange(-1, 0, "o", "+")]),
        theta_lp: ex(vec![exchange(0, 0, "+", "-"), exchange(-1, 0, "+", "-")]),
        theta_uo: ex(vec![exchange(0, 1, "o", "-"), exchange(1, 1, "o", "+")]),
        theta_up: ex(vec![exchange(0, 1, "+", "-"), exchange(1, 1, "+", "-")]),
        alpha_lo: ex(vec![exchange(1, 0, "o", "-"), exchange(2, 0, "+", "o")]),
        alpha_lp: ex(vec![exchange(1, 0, "+", "-"), exchange(2, 0, "+", "-")]),
        alpha_uo: ex(vec![exchange(0, 1, "o", "+"), exchange(1, 1, "-", "o")]),
        identity: LayeredAutomorphism::identity(Arc::clone(&domain)),
        sigma_inverse: sigma.inverse(),
        sigma_powers: (-SIGMA_CACHE..=SIGMA_CACHE).map(|k| sigma.power(k)).collect(),
        sigma,
        domain,
    }
}

impl GeneratorCatalog {
    pub fn domain(&self) -> &Arc<PeriodicLayeredDigraph> {
        &self.domain
    }

    /// Named entries in catalog order.
    pub fn entries(&self) -> [(&'static str, &LayeredAutomorphism); 8] {
        [
            ("sigma", &self.sigma),
            ("theta_lo", &self.theta_lo),
            ("theta_lp", &self.theta_lp),
            ("theta_uo", &self.theta_uo),
            ("theta_up", &self.theta_up),
            ("alpha_lo", &self.alpha_lo),
            ("alpha_lp", &self.alpha_lp),
            ("alpha_uo", &self.alpha_uo),
        ]
    }

    pub fn get(&self, g: Generator) -> Cow<'_, LayeredAutomorphism> {
        Cow::Borrowed(match g {
            Generator::Sigma(k) if k.abs() <= SIGMA_CACHE => &self.sigma_powers[(k + SIGMA_CACHE) as usize],
            Generator::Sigma(k) => return Cow::Owned(self.sigma.power(k)),
            Generator::ThetaLowerO => &self.theta_lo,
            Generator::ThetaLowerP => &self.theta_lp,
            Generator::ThetaUpperO => &self.theta_uo,
            Generator::ThetaUpperP => &self.theta_up,
            Generator::AlphaLowerO => &self.alpha_lo,
            Generator::AlphaLowerP => &self.alpha_lp,
            Generator::AlphaUpperO => &self.alpha_uo,
            Generator::Identity => &self.identity,
        })
    }

    /// Image of the vertex at `(level, index)` under one letter, without
    /// building the automorphism.
    pub fn apply_letter(&self, g: Generator, level: i64, index: u32) -> (i64, u32) {
        let single = |a: &LayeredAutomorphism| a.apply_index(level, index);
        match g {
            Generator::Sigma(k) => {
                let step = if k < 0 { &self.sigma_inverse } else { &self.sigma };
                (0..k.unsigned_abs()).fold((level, index), |(l, i), _| step.apply_index(l, i))
            }
            Generator::ThetaLowerO => single(&self.theta_lo),
            Generator::ThetaLowerP => single(&self.theta_lp),
            Generator::ThetaUpperO => single(&self.theta_uo),
            Generator::ThetaUpperP => single(&self.theta_up),
            Generator::AlphaLowerO => single(&self.alpha_lo),
            Generator::AlphaLowerP => single(&self.alpha_lp),
            Generator::AlphaUpperO => single(&self.alpha_uo),
            Generator::Identity => (level, index),
        }
    }

    /// Runs the canonicalization recipe on an arc given as `(level, fiber
    /// position)` pairs, rewriting it in place. Returns the letters in
    /// application order. The caller guarantees that consecutive entries are
    /// joined.
    pub fn canonical_image(&self, walk: &mut [(i64, u32)]) -> Result<Vec<Generator>, AutError> {
        let d = &self.domain;
        let mut applied = Vec::new();
        let mut step = |g: Generator, walk: &mut [(i64, u32)]| {
            if matches!(g, Generator::Identity | Generator::Sigma(0)) {
                return;
            }
            for v in walk.iter_mut() {
                *v = self.apply_letter(g, v.0, v.1);
            }
            applied.push(g);
        };

        step(Generator::Sigma(-walk[0].0), walk);
        let (x, y) = sign_coords(d, walk[0].0, walk[0].1);
        step([Generator::Identity, Generator::ThetaUpperO, Generator::ThetaUpperP][y], walk);
        step([Generator::Identity, Generator::ThetaLowerO, Generator::ThetaLowerP][x], walk);
        for j in 1..walk.len() {
            let (level, index) = walk[j];
            let (x, y) = sign_coords(d, level, index);
            if y == 2 {
                return Err(AutError::ImpossibleCoordinate(d.vertex_at(level, index).to_string()));
            }
            step([Generator::Identity, Generator::AlphaUpperO][y], walk);
            step([Generator::Identity, Generator::AlphaLowerO, Generator::AlphaLowerP][x], walk);
            step(Generator::Sigma(-1), walk);
        }
        Ok(applied)
    }

    /// Looks up a single generator or evaluates a whole word.
    pub fn by_name(&self, name: &str) -> Result<LayeredAutomorphism, AutError> {
        let word: GeneratorWord = name.parse()?;
        Ok(word.evaluate(self))
    }
}

/// The baseline `n`-arc `(-n,-,-) > ... > (0,-,-)`.
pub fn baseline_arc(n: usize) -> NArc {
    let vertices = (-(n as i64)..=0).map(|l| Vertex::new(l, ["-", "-"])).collect();
    NArc::new(vertices).expect("consecutive levels")
}

#[derive(Debug, Clone)]
pub struct Canonicalization {
    pub psi: LayeredAutomorphism,
    pub word: GeneratorWord,
    pub image: NArc,
    pub reaches_baseline: bool,
}

fn sign_coords(d: &PeriodicLayeredDigraph, level: i64, index: u32) -> (usize, usize) {
    let c = &d.fiber(level)[index as usize];
    let pos = |s: &str| SIGNS.iter().position(|t| *t == s).expect("D uses the signed alphabet");
    (pos(&c[0]), pos(&c[1]))
}

/// Finds an automorphism of `D` sending `arc` to the baseline arc of the same
/// length, following the generator recipe: shift the start to level 0, move
/// it to `(0,-,-)` with the theta generators, then repeatedly straighten the
/// working edge with the alpha generators and shift back down by one.
pub fn canonicalize_arc(catalog: &GeneratorCatalog, arc: &NArc) -> Result<Canonicalization, AutError> {
    let d = catalog.domain();
    let mut current: Vec<(i64, u32)> = Vec::with_capacity(arc.vertices().len());
    for v in arc.vertices() {
        let i = d
            .vertex_index(v)
            .ok_or_else(|| AutError::ForeignVertex(v.to_string()))?;
        current.push((v.level, i));
    }
    for w in current.windows(2) {
        if !d.has_edge_indices(w[0].0, w[0].1, w[1].1) {
            return Err(AutError::NotAnArc(format!(
                "{} > {}",
                d.vertex_at(w[0].0, w[0].1),
                d.vertex_at(w[1].0, w[1].1)
            )));
        }
    }

    let applied = catalog.canonical_image(&mut current)?;
    let psi = applied.iter().fold(catalog.identity.clone(), |acc, &g| {
        catalog.get(g).compose(&acc).expect("catalog entries share a domain")
    });

    let image_vertices = arc
        .vertices()
        .iter()
        .map(|v| psi.apply(v))
        .collect::<Result<Vec<_>, _>>()?;
    let image = NArc::new(image_vertices).expect("automorphisms preserve level steps");
    let reaches_baseline = image == baseline_arc(arc.len());
    Ok(Canonicalization {
        word: GeneratorWord::from_applied(&applied),
        psi,
        image,
        reaches_baseline,
    })
}
