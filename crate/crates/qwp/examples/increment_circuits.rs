//! Reversible increment circuits: the translation operators behind every
//! splitting step, built from a Toffoli carry ripple.
//!
//! Run with `cargo run --example increment_circuits`.

use qwp::builders::{build_increment_mod, build_increment_pow2};
use qwp::circuit::{ControlSpec, QubitRef};
use qwp::format::serialize_circuit;
use qwp::simulator::{apply_circuit, StateVector};

fn trace_permutation(circuit: &qwp::Circuit, values: usize) -> Vec<usize> {
    (0..values)
        .map(|m| {
            let output =
                apply_circuit(&StateVector::basis(circuit.n_qubits(), m), circuit).unwrap();
            output
                .amplitudes()
                .iter()
                .position(|amp| (amp.re - 1.0).abs() < 1e-9)
                .expect("basis state maps to a basis state")
        })
        .collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // |m> -> |m+1 mod 16|: carries c1, c2 live on two ancilla qubits.
    let inc16 = build_increment_pow2(4, 0..4, &[])?;
    println!("increment mod 16:\n{}", serialize_circuit(&inc16));
    println!("permutation: {:?}", trace_permutation(&inc16, 16));

    // A modulus that is not a power of two embeds into the next register
    // size and fixes the wrap-around with an exception qubit.
    let inc6 = build_increment_mod(3, 6, 0..3, &[])?;
    println!("\nincrement mod 6:\n{}", serialize_circuit(&inc6));
    println!("permutation on 0..5: {:?}", trace_permutation(&inc6, 6));

    // Conditioning only needs to touch the gates targeting c1, a1 and a0:
    // blocking the first carry freezes the whole ripple.
    let controls = [ControlSpec::negative(QubitRef::data(4))];
    let conditioned = build_increment_pow2(5, 0..4, &controls)?;
    println!(
        "\nconditioned increment (fires only when qubit 4 is |0>):\n{}",
        serialize_circuit(&conditioned)
    );
    let perm = trace_permutation(&conditioned, 32);
    println!("qubit 4 = |0>: 0..15 map to {:?}", &perm[..16]);
    println!("qubit 4 = |1>: 16..31 map to {:?}", &perm[16..]);
    Ok(())
}
