//! Forgetting a marking: the DR table of (g, n+1) pushed down to (g, n).
//!
//! cargo run --release --example pushforward

use drcalc::drclass::{assemble_dr, forget_pushforward, push_sweep, DecoratedGraph, Flavor};
use drcalc::drinvariant::{Evaluator, Method};

fn main() -> drcalc::Result<()> {
    let eval = Evaluator::new(Method::ZagierLaurent);

    // Symbolic: every coefficient is a polynomial in b, a_2 and a_3.
    let table = assemble_dr(1, 2, 2, Flavor::Full, &eval)?;
    let pushed = forget_pushforward(&table.to_strata()?, 2)?;
    println!("forget marking 2 from the genus-1 table, pushed from codimension 2:");
    for (key, coeff) in pushed.codim_part(1).iter() {
        println!("  {}\n      {}", DecoratedGraph::from_key(key), coeff);
    }

    // Numeric: b = 2, sweep over the forgotten charge and interpolate.
    let swept = push_sweep(2, 1, 1, 2, &[], "a_2", &eval)?;
    println!("genus 2, codimension 1, b = 2, as polynomials in a_2:");
    for (key, coeff) in swept.iter() {
        println!("  {}\n      {}", DecoratedGraph::from_key(key), coeff);
    }
    Ok(())
}
