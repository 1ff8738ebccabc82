//! Timing the three methods, and the disk cache.
//!
//! cargo run --release --example bench

use drcalc::cli::bench::{bench_rows, to_csv};
use drcalc::drinvariant::{Cache, Evaluator, Method, OracleParams};
use drcalc::graph::{base_corpus, StableGraph};

fn main() -> drcalc::Result<()> {
    let banana = StableGraph::new(
        vec![StableGraph::v(0, &[1]), StableGraph::v(0, &[])],
        vec![StableGraph::e(0, 1), StableGraph::e(0, 1), StableGraph::e(0, 1)],
    )?;
    let mut graphs = vec![banana];
    graphs.extend(base_corpus()?.into_iter().filter(|g| g.num_edges() == 2).take(4));
    let rows = bench_rows(&graphs, &Method::ALL, 3, &OracleParams::default())?;
    print!("{}", to_csv(&rows));

    let dir = std::env::temp_dir().join(format!("drcalc-example-{}", std::process::id()));
    let cache = Cache::new(&dir);
    let eval = Evaluator::new(Method::Oracle).with_cache(cache.clone());
    for g in &graphs {
        eval.invariant(g)?;
    }
    let entries = cache.entries()?;
    let fresh = Evaluator::new(Method::Oracle);
    let same = entries.iter().all(|e| fresh.recompute(e).is_ok_and(|v| v == e.value));
    println!("cache at {}: {} entries, recomputation agrees: {same}", dir.display(), entries.len());
    cache.clear()?;
    std::fs::remove_dir(&dir)?;
    Ok(())
}
