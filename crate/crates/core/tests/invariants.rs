use drcalc::drinvariant::{cg, cg_top, Method, Strategy};
use drcalc::graph::{corpus, kirchhoff_count, spanning_trees};
use num_bigint::BigInt;
use rayon::prelude::*;

#[test]
fn methods_agree_on_corpus() {
    let graphs = corpus().unwrap();
    let bad: Vec<String> = graphs
        .par_iter()
        .filter_map(|g| {
            let o = cg(g, Method::Oracle).unwrap().value;
            let l = cg(g, Method::ZagierLaurent).unwrap().value;
            let d = cg(g, Method::ZagierDivision).unwrap().value;
            (o != l || o != d).then(|| format!("{g:?}\n  oracle {o}\n  laurent {l}\n  division {d}"))
        })
        .collect();
    assert!(bad.is_empty(), "{} of {} disagree:\n{}", bad.len(), graphs.len(), bad.join("\n"));
}

#[test]
fn top_part_and_degree_bound() {
    for g in corpus().unwrap() {
        let full = cg(&g, Method::ZagierLaurent).unwrap().value;
        let top = 2 * g.num_edges() as u32;
        assert!(full.total_degree().unwrap_or(0) <= top);
        for s in [Strategy::Laurent, Strategy::Division] {
            assert_eq!(cg_top(&g, s).unwrap().value, full.homogeneous_part(top), "{g:?}");
        }
    }
}

#[test]
fn orientation_and_edge_order() {
    for g in corpus().unwrap() {
        let base = cg(&g, Method::ZagierLaurent).unwrap().value;
        for e in 0..g.num_edges() {
            let f = g.flip_edge(e);
            assert_eq!(cg(&f, Method::ZagierLaurent).unwrap().value, base, "flip {e} of {g:?}");
            assert_eq!(cg(&f, Method::ZagierDivision).unwrap().value, base);
        }
        let rev: Vec<usize> = (0..g.num_edges()).rev().collect();
        let r = g.permute_edges(&rev);
        assert_eq!(cg(&r, Method::ZagierLaurent).unwrap().value, base, "reorder {g:?}");
        assert_eq!(cg(&r, Method::ZagierDivision).unwrap().value, base);
    }
}

#[test]
fn spanning_tree_counts() {
    for g in corpus().unwrap() {
        assert_eq!(BigInt::from(spanning_trees(&g).unwrap().len()), kirchhoff_count(&g));
    }
}
