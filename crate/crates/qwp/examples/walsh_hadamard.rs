//! The Walsh-Hadamard transform as a quantum circuit: n gates where the
//! classical fast transform needs about n * 2^n operations.
//!
//! Run with `cargo run --example walsh_hadamard`.

use qwp::builders::build_walsh_hadamard;
use qwp::circuit::count_gates;
use qwp::format::serialize_circuit;
use qwp::simulator::extract_matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let circuit = build_walsh_hadamard(3)?;
    println!("circuit for signals of length 8:\n{}", serialize_circuit(&circuit));

    let report = count_gates(&circuit);
    println!("elementary gates: {}", report.elementary_total);

    // The extracted unitary is the 8x8 Hadamard matrix: every entry has
    // magnitude 1/sqrt(8), the first row and column are all positive.
    let matrix = extract_matrix(&circuit)?;
    println!("\nextracted matrix, scaled by sqrt(8):");
    let scale = 8.0f64.sqrt();
    for row in 0..8 {
        let cells: Vec<String> = (0..8)
            .map(|col| format!("{:>2}", (matrix.get(row, col).re * scale).round()))
            .collect();
        println!("  {}", cells.join(" "));
    }

    // One H per qubit scales to any register size.
    for n in [4usize, 8, 12] {
        let report = count_gates(&build_walsh_hadamard(n)?);
        println!(
            "length {:>5}: {} elementary gates (classical fast transform: ~{})",
            1usize << n,
            report.elementary_total,
            n << n,
        );
    }
    Ok(())
}
