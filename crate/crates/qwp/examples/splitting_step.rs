//! One splitting step: a word of local rotations and translations defines a
//! filter pair, the circuit realizes it, and the classical splitting matrix
//! confirms it.
//!
//! Run with `cargo run --example splitting_step`.

use qwp::builders::build_split_analysis;
use qwp::classical::{extract_qmf, haar_word, qmf_check, splitting_matrix_from_word, SplitDirection};
use qwp::simulator::extract_matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let word = haar_word();
    let period = 8;

    // The word's first two synthesis columns are the filter taps.
    let pair = extract_qmf(&word, period)?;
    println!("alpha taps: {:?}", pair.alpha().iter().map(|z| z.re).collect::<Vec<_>>());
    println!("beta taps:  {:?}", pair.beta().iter().map(|z| z.re).collect::<Vec<_>>());
    let report = qmf_check(&pair)?;
    println!(
        "orthonormal within {:.1e}: {}",
        report.max_residual, report.pass
    );

    // Circuit route and matrix route agree.
    let circuit = build_split_analysis(3, &word, period, 0..3, &[])?;
    let from_circuit = extract_matrix(&circuit)?;
    let from_matrices = splitting_matrix_from_word(&word, period, SplitDirection::Analysis)?;
    println!(
        "\ncircuit vs classical analysis matrix: max difference {:.2e}",
        from_circuit.max_abs_diff(&from_matrices)
    );

    println!("\nanalysis matrix, scaled by sqrt(2):");
    let scale = 2.0f64.sqrt();
    for row in 0..period {
        let cells: Vec<String> = (0..period)
            .map(|col| format!("{:>2}", (from_matrices.get(row, col).re * scale).round()))
            .collect();
        println!("  {}", cells.join(" "));
    }
    println!(
        "\neven output rows take sums (approximation), odd rows take\n\
         differences (detail): the first stage of the Walsh-Hadamard product."
    );
    Ok(())
}
