//! Acceptance run: one PASS/FAIL line per criterion, then a non-zero exit if
//! any failed. Runs without the libtest harness so the lines always print.

use std::time::{Duration, Instant};

use drcalc::cli::bench::bench_rows;
use drcalc::drclass::{assemble_dr, DecoratedStratum, DivisorMonomial, Flavor};
use drcalc::drinvariant::{cg, cg_top, Evaluator, Method, OracleParams, Strategy};
use drcalc::exactmath::{bernoulli, rat, regularize_poly_sum, zeta_reg, ConstantTerm, MultiPoly};
use drcalc::graph::{
    automorphism_order, corpus, enumerate_stable_graphs, kirchhoff_count, spanning_trees, StableGraph,
};
use drcalc::identities::{
    check_aux_lemma, check_codim_minus_deg, check_corollary_inversion, check_delta_polynomiality, check_dr_push,
    check_scalar_identities, check_topdeg_global, check_topdeg_per_graph, leg_assignments, CheckReport, Status,
};
use num_bigint::BigInt;
use rayon::prelude::*;

/// Wall-clock budget for the whole equivalence sweep over the corpus.
const EQUIVALENCE_BUDGET: Duration = Duration::from_secs(600);
/// Wall-clock budget per pushforward case.
const PUSH_BUDGET: Duration = Duration::from_secs(600);
/// Required speedup of the Laurent strategy over the oracle on the banana.
const MIN_SPEEDUP: f64 = 10.0;
/// Timing repetitions in the benchmark; the best run counts.
const BENCH_REPEAT: usize = 5;
const SCALAR_ORDER: u32 = 20;
const GLOBAL_CASES: [(u32, u32); 4] = [(1, 1), (1, 2), (2, 0), (2, 1)];
const GLOBAL_CODIM: u32 = 2;
const PUSH_CASES: [(u32, u32, u32); 3] = [(1, 1, 1), (1, 1, 2), (2, 1, 1)];
const CENSUS: [(u32, u32, usize); 3] = [(1, 1, 2), (2, 0, 7), (0, 3, 1)];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(reports: &[CheckReport]) -> Result<(), String> {
    match reports.iter().find(|r| r.status != Status::Pass) {
        Some(r) => Err(r.to_string()),
        None => Ok(()),
    }
}

fn lift<T>(r: drcalc::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn banana() -> StableGraph {
    StableGraph::new(
        vec![StableGraph::v(0, &[1]), StableGraph::v(0, &[])],
        vec![StableGraph::e(0, 1), StableGraph::e(0, 1), StableGraph::e(0, 1)],
    )
    .unwrap()
}

fn equivalence() -> Outcome {
    let start = Instant::now();
    let graphs = lift(corpus())?;
    let bad: Vec<String> = graphs
        .par_iter()
        .filter_map(|g| {
            let vals: Vec<_> = Method::ALL.iter().map(|&m| cg(g, m).map(|i| i.value)).collect();
            match vals.as_slice() {
                [Ok(o), Ok(l), Ok(d)] if o == l && l == d => None,
                _ => Some(g.to_string()),
            }
        })
        .collect();
    require(bad.is_empty(), || format!("methods disagree on {}", bad.join("; ")))?;
    let took = start.elapsed();
    require(took <= EQUIVALENCE_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{} graphs, three methods equal, {:.1}s", graphs.len(), took.as_secs_f64()))
}

fn anchors() -> Outcome {
    let v = StableGraph::v;
    let e = StableGraph::e;
    let point = StableGraph::smooth(1, 1);
    let lp = lift(StableGraph::new(vec![v(0, &[1, 2])], vec![e(0, 0)]))?;
    let tree = lift(StableGraph::new(vec![v(1, &[1]), v(1, &[])], vec![e(0, 1)]))?;
    let expect = [
        (&point, MultiPoly::int(1)),
        (&lp, MultiPoly::constant(rat(-1, 12))),
        (&tree, MultiPoly::var("x_1").pow(2).scale(&rat(-1, 2))),
    ];
    for (g, want) in &expect {
        for m in Method::ALL {
            let got = lift(cg(g, m))?.value;
            require(&got == want, || format!("{g} by {m}: {got}, expected {want}"))?;
        }
    }
    let sum_k = lift(regularize_poly_sum(&MultiPoly::var("k"), "k", ConstantTerm::Reject))?;
    require(sum_k == rat(-1, 12), || format!("regularized sum of k is {sum_k}"))?;
    require(zeta_reg(0) == -bernoulli(2) / rat(2, 1), || "zeta(-1) is not -B_2/2".into())?;
    Ok("C(point)=1, C(loop)=-1/12, C(tree)=-x_1^2/2, regularized sum k = -1/12".into())
}

fn degree_bound() -> Outcome {
    let graphs = lift(corpus())?;
    for g in &graphs {
        let full = lift(cg(g, Method::ZagierLaurent))?.value;
        let top = 2 * g.num_edges() as u32;
        require(full.total_degree().unwrap_or(0) <= top, || format!("{g}: degree above {top}"))?;
        for s in [Strategy::Laurent, Strategy::Division] {
            let t = lift(cg_top(g, s))?.value;
            require(t == full.homogeneous_part(top), || format!("{g}: top part differs ({s:?})"))?;
        }
    }
    Ok(format!("{} graphs, deg <= 2|E| and top part exact", graphs.len()))
}

fn scalar() -> Outcome {
    let reports = lift(check_scalar_identities(SCALAR_ORDER))?;
    all_pass(&reports)?;
    let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    require(names.contains(&"scalar_pole_subtraction"), || "vanishing check missing".into())?;
    Ok(format!("{} identities at order {SCALAR_ORDER}", reports.len()))
}

fn variants(g: &StableGraph) -> Vec<StableGraph> {
    let mut out = vec![g.clone()];
    if g.num_edges() > 0 {
        out.push(g.flip_edge(0));
        let rev: Vec<usize> = (0..g.num_edges()).rev().collect();
        out.push(g.permute_edges(&rev));
    }
    out
}

fn per_graph() -> Outcome {
    let graphs: Vec<StableGraph> = lift(corpus())?.iter().flat_map(variants).collect();
    let reports: Vec<drcalc::Result<CheckReport>> = graphs
        .par_iter()
        .flat_map_iter(|g| {
            [Strategy::Laurent, Strategy::Division]
                .into_iter()
                .flat_map(move |s| [check_topdeg_per_graph(g, s), check_corollary_inversion(g, s)])
        })
        .collect();
    let reports = lift(reports.into_iter().collect::<drcalc::Result<Vec<_>>>())?;
    all_pass(&reports)?;
    Ok(format!("{} checks over {} graph labelings", reports.len(), graphs.len()))
}

fn aux() -> Outcome {
    let mut graphs = Vec::new();
    for g in lift(corpus())? {
        for n in 1..=2 {
            graphs.extend(leg_assignments(&g, n));
        }
    }
    let reports: Vec<drcalc::Result<CheckReport>> =
        graphs.par_iter().map(|g| check_aux_lemma(g, Strategy::Laurent)).collect();
    let reports = lift(reports.into_iter().collect::<drcalc::Result<Vec<_>>>())?;
    all_pass(&reports)?;
    Ok(format!("{} leg assignments, congruence to order 2", reports.len()))
}

fn global() -> Outcome {
    let eval = Evaluator::new(Method::ZagierLaurent);
    let mut reports = Vec::new();
    for (g, n) in GLOBAL_CASES {
        reports.push(lift(check_topdeg_global(g, n, GLOBAL_CODIM, &eval))?);
        reports.push(lift(check_codim_minus_deg(g, n, GLOBAL_CODIM, &eval))?);
    }
    all_pass(&reports)?;

    let table = lift(assemble_dr(1, 1, 1, Flavor::Full, &eval))?;
    let lp = lift(StableGraph::new(vec![StableGraph::v(0, &[1])], vec![StableGraph::e(0, 0)]))?;
    let stratum = DecoratedStratum { graph: lp.clone(), edge_psi: vec![0], divisor: DivisorMonomial::trivial(1) };
    let entry = table.get(&stratum).cloned().ok_or("no loop entry")?;
    let aut = lift(automorphism_order(&lp))? as i64;
    let hand = entry.scale(&rat(aut, 1));
    require(hand == MultiPoly::constant(rat(-1, 12)), || format!("loop entry times |Aut| is {hand}"))?;
    Ok(format!("{} checks at c_max = {GLOBAL_CODIM}, loop entry -1/12", reports.len()))
}

fn push() -> Outcome {
    let eval = Evaluator::new(Method::ZagierLaurent);
    let mut lines = Vec::new();
    for (g, n, c) in PUSH_CASES {
        let start = Instant::now();
        let r = lift(check_dr_push(g, n, c, &eval))?;
        let took = start.elapsed();
        require(r.status == Status::Pass, || r.to_string())?;
        require(took <= PUSH_BUDGET, || format!("({g},{n},{c}) took {took:?}"))?;
        lines.push(format!("({g},{n},{c}) {:.1}s", took.as_secs_f64()));
    }
    Ok(lines.join(", "))
}

fn unidr() -> Outcome {
    let eval = Evaluator::new(Method::ZagierDivision);
    let graphs = lift(corpus())?;
    let reports: Vec<drcalc::Result<CheckReport>> =
        graphs.par_iter().map(|g| check_delta_polynomiality(g, &eval, Strategy::Laurent)).collect();
    let reports = lift(reports.into_iter().collect::<drcalc::Result<Vec<_>>>())?;
    all_pass(&reports)?;
    Ok(format!("{} graphs, degree <= 2|E| in the shifts", reports.len()))
}

fn census() -> Outcome {
    for (g, n, want) in CENSUS {
        let got = lift(enumerate_stable_graphs(g, n, (3 * g + n - 3) as usize))?.len();
        require(got == want, || format!("({g},{n}): {got} graphs, expected {want}"))?;
    }
    let graphs = lift(corpus())?;
    for g in &graphs {
        let trees = lift(spanning_trees(g))?.len();
        require(BigInt::from(trees) == kirchhoff_count(g), || format!("{g}: {trees} trees"))?;
    }
    Ok(format!("2, 7, 1 graphs; Kirchhoff on {} graphs", graphs.len()))
}

fn bench() -> Outcome {
    let rows = lift(bench_rows(
        &[banana()],
        &[Method::Oracle, Method::ZagierLaurent],
        BENCH_REPEAT,
        &OracleParams::default(),
    ))?;
    for r in &rows {
        println!("    {}", r.csv());
    }
    let speedup = rows[0].micros as f64 / rows[1].micros.max(1) as f64;
    require(speedup >= MIN_SPEEDUP, || format!("speedup {speedup:.1}x"))?;
    Ok(format!("laurent {speedup:.1}x faster than the oracle on the banana"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("oracle/zagier equivalence", equivalence),
        ("anchor values", anchors),
        ("degree bound and top part", degree_bound),
        ("scalar identities", scalar),
        ("per-graph correspondence", per_graph),
        ("auxiliary congruence", aux),
        ("global theorem checks", global),
        ("forgetful pushforward", push),
        ("delta polynomiality", unidr),
        ("enumeration censuses", census),
        ("bench speedup", bench),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("PASS {name}: {detail} [{:.1}s]", start.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
