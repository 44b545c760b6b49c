//! Gate budgets: how the elementary cost of increments and transforms grows.
//!
//! Run with `cargo run --example gate_budget`.

use qwp::builders::{
    build_increment_pow2, build_transform, TransformKind, TransformPlan,
};
use qwp::circuit::count_gates;
use qwp::classical::d4_word;
use qwp::CoefficientOrder;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("increment mod 2^w, full window:");
    println!("{:>4} {:>8} {:>10} {:>12}", "w", "toffoli", "logical", "elementary");
    for w in 1..=10usize {
        let circuit = build_increment_pow2(w, 0..w, &[])?;
        let report = count_gates(&circuit);
        println!(
            "{:>4} {:>8} {:>10} {:>12}",
            w,
            report.x.double,
            report.logical_total(),
            report.elementary_total
        );
    }

    let word = d4_word();
    println!();
    println!(
        "transforms with the {}-step 4-tap word, length 2^n, depth n:",
        word.step_count()
    );
    println!(
        "{:>4} {:>10} {:>10} {:>14} {:>14}",
        "n", "packet", "pyramid", "packet/n^2", "pyramid/n^2"
    );
    for n in 3..=10usize {
        let mut costs = [0usize; 2];
        for (slot, kind) in [TransformKind::Packet, TransformKind::Pyramid]
            .into_iter()
            .enumerate()
        {
            let plan = TransformPlan::new(kind, n, 1 << n, CoefficientOrder::Interleaved)?;
            let circuit = build_transform(&plan, &word)?;
            costs[slot] = count_gates(&circuit).elementary_total;
        }
        println!(
            "{:>4} {:>10} {:>10} {:>14.2} {:>14.2}",
            n,
            costs[0],
            costs[1],
            costs[0] as f64 / (n * n) as f64,
            costs[1] as f64 / (n * n) as f64
        );
    }
    println!();
    println!(
        "the packet column never exceeds the pyramid column: the packet tree is the\n\
         cheaper transform on this gate model, and both stay within a c*L*n^2 budget."
    );
    Ok(())
}
