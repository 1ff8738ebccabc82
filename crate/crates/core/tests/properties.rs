use std::sync::OnceLock;

use drcalc::drinvariant::{cg, charge_relation, charge_var, Evaluator, Method};
use drcalc::exactmath::rational::{parse_pq, to_pq};
use drcalc::exactmath::{rat, MultiPoly};
use drcalc::graph::{canonical_form, corpus, StableGraph};
use proptest::prelude::*;

fn graphs() -> &'static [StableGraph] {
    static CORPUS: OnceLock<Vec<StableGraph>> = OnceLock::new();
    CORPUS.get_or_init(|| corpus().unwrap())
}

/// A corpus graph with its vertices shuffled and some edges flipped.
fn relabeled() -> impl Strategy<Value = (StableGraph, StableGraph, Vec<usize>)> {
    (0..graphs().len()).prop_flat_map(|i| {
        let g = graphs()[i].clone();
        let order = Just((0..g.num_vertices()).collect::<Vec<_>>()).prop_shuffle();
        let flips = proptest::collection::vec(any::<bool>(), g.num_edges());
        (Just(g), order, flips).prop_map(|(g, order, flips)| {
            let mut h = g.permute_vertices(&order);
            for (e, f) in flips.into_iter().enumerate() {
                if f {
                    h = h.flip_edge(e);
                }
            }
            (g, h, order)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_form_ignores_labels((g, h, _) in relabeled()) {
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
    }

    #[test]
    fn invariant_follows_vertex_relabeling((g, h, order) in relabeled()) {
        let before = cg(&g, Method::ZagierLaurent).unwrap().value;
        let after = cg(&h, Method::ZagierDivision).unwrap().value;
        let back = after.rename(|v| {
            (0..order.len()).find(|&i| charge_var(i) == v).map(|i| charge_var(order[i])).unwrap_or_else(|| v.to_string())
        });
        prop_assert_eq!(charge_relation(g.num_vertices()).normalize(&back), before);
    }

    #[test]
    fn evaluator_matches_direct_computation((_, h, _) in relabeled()) {
        let eval = Evaluator::new(Method::ZagierLaurent);
        prop_assert_eq!(eval.invariant(&h).unwrap(), cg(&h, Method::ZagierLaurent).unwrap().value);
        let top = 2 * h.num_edges() as u32;
        prop_assert_eq!(eval.top(&h).unwrap(), eval.invariant(&h).unwrap().homogeneous_part(top));
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let q = rat(n, d);
        prop_assert_eq!(parse_pq(&to_pq(&q)).unwrap(), q);
    }

    #[test]
    fn polynomials_round_trip_through_json(terms in proptest::collection::vec((-20i64..20, 1i64..9, 0u32..4, 0u32..4), 0..6)) {
        let mut p = MultiPoly::zero();
        for (n, d, eb, ea) in terms {
            p += MultiPoly::monomial(rat(n, d), &[("b", eb), ("a_2", ea)]);
        }
        let text = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<MultiPoly>(&text).unwrap(), p);
    }
}
