//! A full wavelet packet tree: every subspace split at every level. With
//! the Haar word this reproduces the Walsh-Hadamard transform exactly.
//!
//! Run with `cargo run --example wavelet_packet`.

use num_complex::Complex64;
use qwp::builders::{build_transform, TransformKind, TransformPlan};
use qwp::classical::{classical_transform, extract_qmf, haar_word};
use qwp::simulator::{apply_circuit, embed_signal, extract_data_amplitudes};
use qwp::CoefficientOrder;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 4;
    let plan = TransformPlan::new(
        TransformKind::Packet,
        n,
        1 << n,
        CoefficientOrder::Interleaved,
    )?;
    let word = haar_word();
    let circuit = build_transform(&plan, &word)?;
    println!(
        "packet transform on {} points: {} gates on {} qubits",
        1 << n,
        circuit.len(),
        circuit.n_data()
    );

    // A two-tone signal.
    let signal: Vec<Complex64> = (0..1 << n)
        .map(|i| {
            let t = i as f64 / 16.0 * std::f64::consts::TAU;
            Complex64::new((2.0 * t).sin() + 0.5 * (5.0 * t).cos(), 0.0)
        })
        .collect();

    let state = embed_signal(&signal, &circuit)?;
    let output = apply_circuit(&state, &circuit)?;
    let quantum = extract_data_amplitudes(&output, &circuit)?;
    let classical = classical_transform(&plan, &extract_qmf(&word, 1 << n)?, &signal)?;

    println!("\n index   circuit      filter bank   |difference|");
    let mut worst = 0.0f64;
    for i in 0..1 << n {
        let diff = (quantum[i] - classical[i]).norm();
        worst = worst.max(diff);
        println!(
            "  {:>4}   {:>9.6}    {:>9.6}      {:.1e}",
            i, quantum[i].re, classical[i].re, diff
        );
    }
    println!("\nlargest disagreement: {worst:.2e}");

    let energy_in: f64 = signal.iter().map(|z| z.norm_sqr()).sum();
    let energy_out: f64 = quantum.iter().map(|z| z.norm_sqr()).sum();
    println!("energy in {energy_in:.12} / out {energy_out:.12}");
    Ok(())
}
