use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::digraph::FiniteDigraph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz source with one rank per level, lowest level at the bottom.
pub fn to_dot(f: &FiniteDigraph, name: &str) -> String {
    let mut levels: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, v) in f.vertices().iter().enumerate() {
        levels.entry(v.level).or_default().push(i);
    }
    let id = |i: usize| quote(&f.vertices()[i].to_string());
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=box, fontsize=10];");
    for members in levels.values() {
        let ids: Vec<String> = members.iter().map(|&i| id(i)).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
    }
    for &(u, v) in f.edges() {
        let _ = writeln!(out, "  {} -> {};", id(u), id(v));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct WindowJson {
    lo: i64,
    hi: i64,
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

pub fn to_json(f: &FiniteDigraph) -> String {
    let w = WindowJson {
        lo: f.lo(),
        hi: f.hi(),
        vertices: f.vertices().iter().map(ToString::to_string).collect(),
        edges: f
            .edge_vertices()
            .map(|(u, v)| (u.to_string(), v.to_string()))
            .collect(),
    };
    serde_json::to_string_pretty(&w).expect("windows serialize")
}
