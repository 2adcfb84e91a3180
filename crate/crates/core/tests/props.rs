//! Property tests over random small signed graphs: orientation consistency,
//! boundary algebra, operation round trips, and agreement of the balance
//! computation with a definitional switching oracle.

use proptest::prelude::*;

use sixflow::analysis::{balanced_component_count, cyclic_edge_connectivity};
use sixflow::ops::{
    boundary, contract_positive_edge, reverse_edge, switch_vertex, undo_contraction,
};
use sixflow::{Dir, EdgeValuation, Orientation, Sign, SignedGraph, VertexId};

/// Random multigraph with loops and parallels, plus a sign-consistent
/// orientation seed and edge values.
fn arb_graph() -> impl Strategy<Value = (SignedGraph, Orientation, EdgeValuation)> {
    (1usize..7)
        .prop_flat_map(|n| {
            let edge = (0..n, 0..n, prop::bool::ANY, prop::bool::ANY);
            (Just(n), prop::collection::vec(edge, 0..10))
        })
        .prop_flat_map(|(n, raw)| {
            let m = raw.len();
            (Just(n), Just(raw), prop::collection::vec(-5i64..=5, m))
        })
        .prop_map(|(n, raw, vals)| {
            let mut g = SignedGraph::new(n);
            let mut dirs = Vec::new();
            for &(u, v, neg, flip) in &raw {
                let sign = if neg { Sign::Negative } else { Sign::Positive };
                g.add_edge(u, v, sign).unwrap();
                let d = match (neg, flip) {
                    (false, false) => [Dir::Away, Dir::Toward],
                    (false, true) => [Dir::Toward, Dir::Away],
                    (true, false) => [Dir::Away, Dir::Away],
                    (true, true) => [Dir::Toward, Dir::Toward],
                };
                dirs.push(d);
            }
            let tau = Orientation::from_dirs(dirs);
            let f = EdgeValuation::from_values(vals);
            (g, tau, f)
        })
}

/// Definitional balance oracle: a component is balanced iff some vertex
/// subset flips its signature to all-positive.
fn balanced_count_oracle(g: &SignedGraph) -> usize {
    // Components by plain BFS.
    let mut comp: std::collections::BTreeMap<VertexId, usize> = Default::default();
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    for &v in g.vertex_ids() {
        if comp.contains_key(&v) {
            continue;
        }
        let id = comps.len();
        let mut members = vec![v];
        comp.insert(v, id);
        let mut queue = vec![v];
        while let Some(x) = queue.pop() {
            for (e, _) in g.incidences(x) {
                for &w in &g.edge(e).unwrap().ends {
                    if let std::collections::btree_map::Entry::Vacant(e) = comp.entry(w) {
                        e.insert(id);
                        members.push(w);
                        queue.push(w);
                    }
                }
            }
        }
        comps.push(members);
    }

    comps
        .iter()
        .filter(|members| {
            let k = members.len();
            (0..(1u32 << (k - 1))).any(|mask| {
                let in_set = |v: VertexId| {
                    let i = members.iter().position(|&x| x == v).unwrap();
                    i > 0 && mask >> (i - 1) & 1 == 1
                };
                g.edges()
                    .filter(|(_, edge)| comp[&edge.ends[0]] == comp[&members[0]])
                    .all(|(_, edge)| {
                        // Loops never change sign under switching.
                        let negative = if edge.is_loop() {
                            edge.sign.is_negative()
                        } else {
                            let flips = edge.ends.iter().filter(|&&v| in_set(v)).count();
                            edge.sign.is_negative() != (flips % 2 == 1)
                        };
                        !negative
                    })
            })
        })
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn orientation_stays_sign_consistent((g, tau, f) in arb_graph()) {
        prop_assert!(tau.is_sign_consistent(&g));
        // Random operation walk: reverse, switch, contract where possible.
        let (mut g, mut tau, mut f) = (g, tau, f);
        let edges: Vec<_> = g.edge_ids().collect();
        for &e in edges.iter().take(3) {
            let (t, fv) = reverse_edge(&g, &tau, e, Some(&f)).unwrap();
            tau = t;
            f = fv.unwrap();
            prop_assert!(tau.is_sign_consistent(&g));
        }
        let vs: Vec<_> = g.vertex_ids().to_vec();
        for &v in vs.iter().take(2) {
            let (ng, nt) = switch_vertex(&g, &tau, v).unwrap();
            g = ng;
            tau = nt;
            prop_assert!(tau.is_sign_consistent(&g));
        }
        let candidate = g
            .edges()
            .find(|(_, edge)| !edge.sign.is_negative() && !edge.is_loop());
        if let Some((e, _)) = candidate {
            let (ng, nt, nf, _) = contract_positive_edge(&g, &tau, &f, e).unwrap();
            prop_assert!(nt.is_sign_consistent(&ng));
            let _ = nf;
        }
    }

    #[test]
    fn boundary_is_linear((g, tau, f) in arb_graph(), scale in -3i64..=3) {
        let mut g2 = EdgeValuation::zeros(g.slot_count());
        for e in g.edge_ids() {
            g2.set(e, scale * f.get(e) + 1);
        }
        let mut sum = EdgeValuation::zeros(g.slot_count());
        for e in g.edge_ids() {
            sum.set(e, f.get(e) + g2.get(e));
        }
        let bf = boundary(&g, &tau, &f).unwrap();
        let bg = boundary(&g, &tau, &g2).unwrap();
        let bs = boundary(&g, &tau, &sum).unwrap();
        for &v in g.vertex_ids() {
            prop_assert_eq!(bs.get(v), bf.get(v) + bg.get(v));
        }
    }

    #[test]
    fn boundary_total_is_carried_by_negative_edges((g, tau, f) in arb_graph()) {
        let b = boundary(&g, &tau, &f).unwrap();
        let mut expected = 0i64;
        for (e, edge) in g.edges() {
            if edge.sign.is_negative() {
                match tau.dirs(e) {
                    [Dir::Away, Dir::Away] => expected += 2 * f.get(e),
                    [Dir::Toward, Dir::Toward] => expected -= 2 * f.get(e),
                    _ => prop_assert!(false, "inconsistent negative edge"),
                }
            }
        }
        prop_assert_eq!(b.sum(), expected);
    }

    #[test]
    fn reverse_preserves_boundary((g, tau, f) in arb_graph()) {
        let before = boundary(&g, &tau, &f).unwrap();
        for e in g.edge_ids().collect::<Vec<_>>() {
            let (t2, f2) = reverse_edge(&g, &tau, e, Some(&f)).unwrap();
            let after = boundary(&g, &t2, &f2.unwrap()).unwrap();
            prop_assert_eq!(&after, &before);
        }
    }

    #[test]
    fn switch_negates_boundary_at_vertex_only((g, tau, f) in arb_graph()) {
        let before = boundary(&g, &tau, &f).unwrap();
        for &v in g.vertex_ids() {
            let (g2, t2) = switch_vertex(&g, &tau, v).unwrap();
            let after = boundary(&g2, &t2, &f).unwrap();
            for &w in g.vertex_ids() {
                let expect = if w == v { -before.get(w) } else { before.get(w) };
                prop_assert_eq!(after.get(w), expect);
            }
            // Involution.
            let (g3, t3) = switch_vertex(&g2, &t2, v).unwrap();
            prop_assert_eq!(&g3, &g);
            prop_assert_eq!(&t3, &tau);
        }
    }

    #[test]
    fn contract_and_undo_round_trip((g, tau, f) in arb_graph()) {
        let candidate = g
            .edges()
            .find(|(_, edge)| !edge.sign.is_negative() && !edge.is_loop());
        if let Some((e, _)) = candidate {
            let before = boundary(&g, &tau, &f).unwrap();
            let (g2, t2, f2, rec) = contract_positive_edge(&g, &tau, &f, e).unwrap();
            let after = boundary(&g2, &t2, &f2).unwrap();
            prop_assert_eq!(after.get(rec.tail), before.get(rec.tail) + before.get(rec.head));
            for &w in g2.vertex_ids() {
                if w != rec.tail {
                    prop_assert_eq!(after.get(w), before.get(w));
                }
            }
            let g3 = undo_contraction(&g2, &rec).unwrap();
            prop_assert_eq!(g3, g);
        }
    }

    #[test]
    fn balance_matches_switching_oracle((g, _tau, _f) in arb_graph()) {
        prop_assert_eq!(balanced_component_count(&g), balanced_count_oracle(&g));
    }

    #[test]
    fn balance_is_switching_invariant((g, tau, _f) in arb_graph()) {
        let count = balanced_component_count(&g);
        for &v in g.vertex_ids() {
            let (g2, _) = switch_vertex(&g, &tau, v).unwrap();
            prop_assert_eq!(balanced_component_count(&g2), count);
        }
    }

    #[test]
    fn cyclic_connectivity_ignores_signs_and_switching((g, tau, _f) in arb_graph()) {
        let base = cyclic_edge_connectivity(&g);
        let mut all_pos = g.clone();
        for e in g.edge_ids().collect::<Vec<_>>() {
            all_pos.set_sign(e, Sign::Positive).unwrap();
        }
        prop_assert_eq!(cyclic_edge_connectivity(&all_pos), base);
        if let Some(&v) = g.vertex_ids().first() {
            let (g2, _) = switch_vertex(&g, &tau, v).unwrap();
            prop_assert_eq!(cyclic_edge_connectivity(&g2), base);
        }
    }
}
