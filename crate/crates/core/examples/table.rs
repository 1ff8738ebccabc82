//! A DR coefficient table and the coefficient of one charge monomial.
//!
//! cargo run --release --example table

use drcalc::drclass::{assemble_dr, extract_coefficient, Flavor};
use drcalc::drinvariant::{Evaluator, Method};
use drcalc::exactmath::rational::to_short;

fn main() -> drcalc::Result<()> {
    let eval = Evaluator::new(Method::ZagierLaurent);
    let table = assemble_dr(1, 2, 2, Flavor::Full, &eval)?;
    println!("genus 1, two markings, codimension <= 2: {} entries", table.entries.len());
    for entry in table.entries.iter().filter(|e| !e.poly.is_zero()) {
        println!("  {:<40} {}", entry.stratum.to_string(), entry.poly);
    }

    println!("coefficient of b*a_2 in codimension 1:");
    for (stratum, c) in extract_coefficient(&table, "b*a_2", 1)? {
        println!("  {:<40} {}", stratum.to_string(), to_short(&c));
    }

    let top = assemble_dr(1, 2, 2, Flavor::Top, &eval)?;
    println!("top-degree flavor: {} entries", top.entries.len());
    Ok(())
}
