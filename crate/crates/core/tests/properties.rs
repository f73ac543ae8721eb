use proptest::prelude::*;

use hat_core::autos::{self, generators_d, Generator, GeneratorWord};
use hat_core::cli::{build_periodic, parse_factor_spec, FactorSpec, LayerSpec};
use hat_core::digraph::{Coords, FiniteBipartiteDigraph, LayerPattern, PeriodicLayeredDigraph, Vertex};
use hat_core::product::{layerwise_product, layerwise_product_many, shift, ProductDescriptor};
use hat_core::reach::{self, bipartite_iso};
use hat_core::transit::{enumerate_arcs, NArc};
use hat_core::zoo;

fn letter() -> impl Strategy<Value = Generator> {
    prop_oneof![
        (-3i64..=3).prop_map(Generator::Sigma),
        Just(Generator::ThetaLowerO),
        Just(Generator::ThetaLowerP),
        Just(Generator::ThetaUpperO),
        Just(Generator::ThetaUpperP),
        Just(Generator::AlphaLowerO),
        Just(Generator::AlphaLowerP),
        Just(Generator::AlphaUpperO),
        Just(Generator::Identity),
    ]
}

fn word() -> impl Strategy<Value = GeneratorWord> {
    prop::collection::vec(letter(), 0..6).prop_map(|letters| GeneratorWord { letters })
}

fn d_vertex(lo: i64, hi: i64) -> impl Strategy<Value = Vertex> {
    let sign = prop::sample::select(vec!["-", "o", "+"]);
    (lo..=hi, sign.clone(), sign).prop_map(|(l, x, y)| Vertex::new(l, [x, y]))
}

/// Periodic factors over a common fiber size `n`.
fn factor() -> impl Strategy<Value = PeriodicLayeredDigraph> {
    (2usize..=4).prop_flat_map(|n| {
        let pattern = prop_oneof![
            Just(LayerPattern::CompleteBipartite { n, m: n }),
            Just(LayerPattern::Matching { n }),
            Just(LayerPattern::AlternatingCycle { size: 2 * n }),
        ];
        (prop::collection::vec(pattern, 1..5), -5i64..5)
            .prop_map(|(ps, off)| PeriodicLayeredDigraph::new(ps, off).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn layers_are_periodic(g in factor(), i in -20i64..20) {
        let p = g.period() as i64;
        prop_assert_eq!(g.layer(i), g.layer(i + p));
        prop_assert_eq!(g.fiber(i), g.fiber(i - p));
    }

    #[test]
    fn window_restriction(a in -6i64..0, da in 0i64..3, db in 0i64..3, len in 0i64..4) {
        let d = zoo::digraph_d();
        let (a2, b2) = (a + da, a + da + len);
        let b = b2 + db;
        prop_assert_eq!(d.window(a, b).restrict(a2, b2), d.window(a2, b2));
    }

    #[test]
    fn edges_raise_level_by_one(g in factor(), lo in -5i64..5) {
        let w = g.window(lo, lo + 3);
        for (u, v) in w.edge_vertices() {
            prop_assert_eq!(v.level, u.level + 1);
        }
    }

    #[test]
    fn group_laws_on_words(w1 in word(), w2 in word(), v in d_vertex(-5, 5)) {
        let cat = generators_d();
        let (a, b) = (w1.evaluate(&cat), w2.evaluate(&cat));
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.apply(&v).unwrap(), a.apply(&b.apply(&v).unwrap()).unwrap());
        let round = a.inverse().compose(&a).unwrap();
        prop_assert!(round.same_action(&cat.identity));
        let mut joined = w1.letters.clone();
        joined.extend(w2.letters.iter().copied());
        let joined = GeneratorWord { letters: joined };
        prop_assert!(joined.evaluate(&cat).same_action(&ab));
    }

    #[test]
    fn words_reparse(w in word()) {
        let text = w.to_string();
        let back: GeneratorWord = text.parse().unwrap();
        prop_assert!(back.evaluate(&generators_d()).same_action(&w.evaluate(&generators_d())));
    }

    #[test]
    fn random_arcs_canonicalize(start in d_vertex(-30, 30), choices in prop::collection::vec(0usize..6, 0..9)) {
        let d = zoo::digraph_d();
        let mut vertices = vec![start];
        for c in choices {
            let last = vertices.last().unwrap();
            let i = d.vertex_index(last).unwrap();
            let next = d.successor_indices(last.level, i)[c];
            vertices.push(d.vertex_at(last.level + 1, next));
        }
        let arc = NArc::new(vertices).unwrap();
        let cat = generators_d();
        let c = autos::canonicalize_arc(&cat, &arc).unwrap();
        prop_assert_eq!(&c.image, &autos::baseline_arc(arc.len()));
        prop_assert!(c.word.evaluate(&cat).same_action(&c.psi));
    }

    #[test]
    fn iso_survives_relabeling(perm_b in Just((0..9).collect::<Vec<usize>>()).prop_shuffle(),
                               perm_t in Just((0..9).collect::<Vec<usize>>()).prop_shuffle()) {
        let rep = reach::delta(&zoo::digraph_d()).representative;
        let rename = |c: &Coords, side: &str| vec![format!("{side}{}", c.join(""))];
        let bottom: Vec<Coords> = perm_b.iter().map(|&i| rename(&rep.bottom()[i], "b")).collect();
        let top: Vec<Coords> = perm_t.iter().map(|&i| rename(&rep.top()[i], "t")).collect();
        let edges = rep.edges().map(|(b, t)| (rename(b, "b"), rename(t, "t")));
        let other = FiniteBipartiteDigraph::new(bottom, top, edges).unwrap();
        let iso = bipartite_iso(&rep, &other).unwrap();
        for (b, t) in rep.edge_indices() {
            prop_assert!(other.has_edge_indices(iso.bottom[b], iso.top[t]));
        }
    }

    #[test]
    fn spec_round_trip(g in factor(), name in prop::option::of("[a-z]{1,6}")) {
        let mut spec = FactorSpec::from_digraph(&g);
        spec.name = name;
        let back = parse_factor_spec(&spec.to_json()).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(build_periodic(&back).unwrap(), g);
    }

    #[test]
    fn fiber_sizes_multiply(g1 in factor(), g2 in factor(), o1 in -3i64..3, o2 in -3i64..3, n in -6i64..6) {
        let p = layerwise_product(&g1, &g2, o1, o2);
        prop_assert_eq!(p.fiber_size(n), g1.fiber_size(n + o1) * g2.fiber_size(n + o2));
        prop_assert_eq!(p.layer(n).edge_count(), g1.layer(n + o1).edge_count() * g2.layer(n + o2).edge_count());
    }
}

#[test]
fn product_commutes_up_to_flip() {
    let l = zoo::factor_l();
    let m = zoo::factor_mckay_praeger(3, 2).unwrap();
    let a = layerwise_product(&l, &m, 0, 1).window(-4, 4);
    let b = layerwise_product(&m, &l, 1, 0).window(-4, 4);
    let flip = |v: &Vertex| Vertex::new(v.level, [v.coords[1].clone(), v.coords[0].clone()]);
    assert_eq!(a.edge_count(), b.edge_count());
    for (u, v) in a.edge_vertices() {
        assert!(b.has_edge(&flip(u), &flip(v)));
    }
}

#[test]
fn shift_product_of_l_is_d_up_to_coordinates() {
    let l = zoo::factor_l();
    let s = hat_core::product::shift_product(&l).window(-4, 4);
    assert_eq!(s, zoo::digraph_d().window(-4, 4));
    let triple = layerwise_product_many(&ProductDescriptor::new(vec![l.clone(), shift(&l, 1), l], vec![0, 0, 1]).unwrap());
    assert_eq!(triple.fiber_size(0), 27);
}

#[test]
fn product_with_integer_line_projects() {
    let l = zoo::factor_l();
    let p = layerwise_product_many(&ProductDescriptor::new(vec![zoo::integer_line(), l.clone()], vec![0, 0]).unwrap());
    let w = p.window(-3, 3);
    let project = |v: &Vertex| Vertex::new(v.level, [v.coords[1].clone()]);
    let lw = l.window(-3, 3);
    assert_eq!(w.edge_count(), lw.edge_count());
    assert!(w.edge_vertices().all(|(u, v)| lw.has_edge(&project(u), &project(v))));
}

#[test]
fn arcs_from_every_vertex_of_d() {
    let w = zoo::digraph_d().window(0, 4);
    for n in 0..=4 {
        for v in w.vertices().iter().filter(|v| v.level == 0) {
            assert_eq!(enumerate_arcs(&w, n, Some(v)).len(), 6usize.pow(n as u32));
        }
    }
}

#[test]
fn reachability_classes_stay_in_layers() {
    for g in [zoo::factor_l(), zoo::digraph_d(), zoo::factor_mckay_praeger(2, 3).unwrap()] {
        let w = g.window(-2, 3);
        for class in reach::reachability_classes(&w).unwrap() {
            let levels: std::collections::BTreeSet<i64> =
                class.iter().map(|&e| w.vertices()[w.edges()[e].0].level).collect();
            assert_eq!(levels.len(), 1);
        }
    }
}

#[test]
fn automorphisms_permute_reachability_classes() {
    let cat = generators_d();
    let w = zoo::digraph_d().window(-3, 3);
    let classes = reach::reachability_classes(&w).unwrap();
    let class_of = |u: &Vertex, v: &Vertex| {
        let e = w
            .edges()
            .iter()
            .position(|&(a, b)| w.vertices()[a] == *u && w.vertices()[b] == *v)?;
        classes.iter().position(|c| c.contains(&e))
    };
    for (name, g) in cat.entries().into_iter().skip(1) {
        for class in &classes {
            let images: std::collections::BTreeSet<Option<usize>> = class
                .iter()
                .map(|&e| {
                    let (u, v) = w.edges()[e];
                    let (gu, gv) = (g.apply(&w.vertices()[u]).unwrap(), g.apply(&w.vertices()[v]).unwrap());
                    class_of(&gu, &gv)
                })
                .collect();
            assert_eq!(images.len(), 1, "{name} splits a class");
        }
    }
}

#[test]
fn alpha_generators_commute() {
    let cat = generators_d();
    let subs = [&cat.alpha_lo, &cat.alpha_lp];
    let vertices: Vec<Vertex> = (-2..=4)
        .flat_map(|l| {
            ["-", "o", "+"]
                .into_iter()
                .flat_map(move |x| ["-", "o", "+"].into_iter().map(move |y| Vertex::new(l, [x, y])))
        })
        .collect();
    for a in subs {
        let ab = a.compose(&cat.alpha_uo).unwrap();
        let ba = cat.alpha_uo.compose(a).unwrap();
        for v in &vertices {
            assert_eq!(ab.apply(v).unwrap(), ba.apply(v).unwrap(), "at {v}");
        }
    }
}

#[test]
fn baseline_is_stabilized() {
    let cat = generators_d();
    for i in -8..=0 {
        let v = Vertex::new(i, ["-", "-"]);
        let s = cat.sigma.apply(&v).unwrap();
        assert_eq!(s.coords, v.coords);
        for a in [&cat.alpha_lo, &cat.alpha_lp, &cat.alpha_uo] {
            assert_eq!(a.apply(&v).unwrap(), v);
        }
    }
}

#[test]
fn custom_spec_layers_build() {
    let text = r#"{"period":2,"layers":[
        {"type":"complete_bipartite","n":2,"m":2},
        {"type":"custom","bottom":["0","1"],"top":["0","1"],"edges":[["0","1"],["1","0"]]}
    ],"name":"twist"}"#;
    let spec = parse_factor_spec(text).unwrap();
    assert!(matches!(spec.layers[1], LayerSpec::Custom { .. }));
    let g = build_periodic(&spec).unwrap();
    assert_eq!(g.name(), Some("twist"));
    assert_eq!(g.layer(1).edge_count(), 2);
}
