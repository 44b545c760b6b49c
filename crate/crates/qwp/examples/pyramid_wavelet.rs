//! The pyramid (wavelet) transform: only the approximation branch is split
//! again at each level, which on a quantum register means conditioning each
//! deeper splitting circuit on the low qubits being zero.
//!
//! Run with `cargo run --example pyramid_wavelet`.

use num_complex::Complex64;
use qwp::builders::{build_transform, TransformKind, TransformPlan};
use qwp::classical::{d4_word, extract_qmf, subband_permutation};
use qwp::simulator::{apply_circuit, embed_signal, extract_data_amplitudes};
use qwp::CoefficientOrder;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 4;
    let len = 1usize << n;
    let plan = TransformPlan::new(TransformKind::Pyramid, n, len, CoefficientOrder::Interleaved)?;
    let word = d4_word();
    let pair = extract_qmf(&word, len)?;
    println!(
        "4-tap filter, alpha = {:?}",
        pair.alpha().iter().map(|z| (z.re * 1e6).round() / 1e6).collect::<Vec<_>>()
    );

    let circuit = build_transform(&plan, &word)?;
    println!(
        "pyramid circuit: {} gates, {} data + {} ancilla qubits",
        circuit.len(),
        circuit.n_data(),
        circuit.n_ancilla()
    );

    // A smooth ramp compresses well: detail coefficients stay small.
    let signal: Vec<Complex64> = (0..len)
        .map(|i| Complex64::new(1.0 + (i as f64 / len as f64), 0.0))
        .collect();
    let state = embed_signal(&signal, &circuit)?;
    let output = apply_circuit(&state, &circuit)?;
    let coefficients = extract_data_amplitudes(&output, &circuit)?;

    // Reorder interleaved coefficients into subband blocks for reading.
    let perm = subband_permutation(&plan)?;
    let mut subband = vec![Complex64::ZERO; len];
    for (i, &p) in perm.iter().enumerate() {
        subband[p] = coefficients[i];
    }

    println!("\nsubband layout (deepest approximation first):");
    let mut block_start = 0;
    let mut labels = vec![format!("A{n}"), format!("D{n}")];
    for level in (1..n).rev() {
        labels.push(format!("D{level}"));
    }
    let mut sizes = vec![len >> n, len >> n];
    for level in (1..n).rev() {
        sizes.push(len >> level);
    }
    for (label, size) in labels.iter().zip(sizes.iter()) {
        let block: Vec<String> = subband[block_start..block_start + size]
            .iter()
            .map(|z| format!("{:>8.4}", z.re))
            .collect();
        println!("  {:<3} {}", label, block.join(" "));
        block_start += size;
    }

    let detail_energy: f64 = subband[1..].iter().map(|z| z.norm_sqr()).sum();
    let total_energy: f64 = subband.iter().map(|z| z.norm_sqr()).sum();
    println!(
        "\napproximation holds {:.2}% of the energy",
        100.0 * (1.0 - detail_energy / total_energy)
    );
    Ok(())
}
