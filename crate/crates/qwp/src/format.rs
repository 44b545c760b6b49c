//! Text formats: the line-oriented circuit format, signal and matrix CSV
//! files, and the filter tap file.
//!
//! Circuit format (UTF-8, `#` starts a comment, tokens whitespace-separated):
//!
//! ```text
//! qubits <n_data>
//! ancilla <n_ancilla>
//! X t=<q> [c=<±q>[,<±q>...]]
//! H t=<q> [c=...]
//! R theta=<float> t=<q> [c=...]
//! U2 m=<8 floats: re,im row-major> t=<q> [c=...]
//! ```
//!
//! Data qubits are plain indices, ancilla qubits are written `a<k>`; a
//! control `+q` fires on |1>, `-q` on |0>. Floats are emitted with 17
//! significant digits and a lowercase exponent, which round-trips f64
//! exactly, so `parse(serialize(c)) == c` gate for gate.

use crate::circuit::{Circuit, ControlSpec, Gate, GateKind, Polarity, QubitRef};
use crate::math::Mat2;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("circuit file is missing its `qubits` / `ancilla` header")]
    MissingHeader,
    #[error("signal file: line {line}: {message}")]
    Signal { line: usize, message: String },
    #[error("filter file: {0}")]
    Filter(String),
}

/// 17 significant digits, lowercase exponent; round-trip safe for f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Complex number in `re+imj` form.
pub fn fmt_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}j", fmt_f64(z.re), fmt_f64(-z.im))
    } else {
        format!("{}+{}j", fmt_f64(z.re), fmt_f64(z.im))
    }
}

/// Parses `re+imj` / `re-imj`, or a bare real number.
pub fn parse_complex(token: &str) -> Option<Complex64> {
    if let Some(body) = token.strip_suffix('j') {
        // split at the sign that separates re from im (not a leading sign,
        // not one directly after an exponent marker)
        let bytes = body.as_bytes();
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                let re: f64 = body[..i].parse().ok()?;
                let im: f64 = body[i..].parse().ok()?;
                return Some(Complex64::new(re, im));
            }
        }
        let im: f64 = body.parse().ok()?;
        return Some(Complex64::new(0.0, im));
    }
    token.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
}

fn fmt_qubit(q: QubitRef) -> String {
    match q.role {
        crate::circuit::QubitRole::Data => q.index.to_string(),
        crate::circuit::QubitRole::Ancilla => format!("a{}", q.index),
    }
}

fn fmt_controls(controls: &[ControlSpec]) -> String {
    controls
        .iter()
        .map(|c| {
            let sign = match c.polarity {
                Polarity::Positive => '+',
                Polarity::Negative => '-',
            };
            format!("{}{}", sign, fmt_qubit(c.qubit))
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Serializes a circuit into the text format.
pub fn serialize_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(&format!("qubits {}\n", circuit.n_data()));
    out.push_str(&format!("ancilla {}\n", circuit.n_ancilla()));
    for gate in circuit.gates() {
        match &gate.kind {
            GateKind::X => out.push('X'),
            GateKind::H => out.push('H'),
            GateKind::Rot(theta) => out.push_str(&format!("R theta={}", fmt_f64(*theta))),
            GateKind::U2(m) => {
                let floats: Vec<String> = m
                    .0
                    .iter()
                    .flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)])
                    .collect();
                out.push_str(&format!("U2 m={}", floats.join(",")));
            }
        }
        out.push_str(&format!(" t={}", fmt_qubit(gate.target)));
        if !gate.controls.is_empty() {
            out.push_str(&format!(" c={}", fmt_controls(&gate.controls)));
        }
        out.push('\n');
    }
    out
}

fn parse_qubit(token: &str, line: usize) -> Result<QubitRef, ParseError> {
    let syntax = |message: String| ParseError::Syntax { line, message };
    if let Some(rest) = token.strip_prefix('a') {
        let index: usize = rest
            .parse()
            .map_err(|_| syntax(format!("bad ancilla index `{token}`")))?;
        Ok(QubitRef::ancilla(index))
    } else {
        let index: usize = token
            .parse()
            .map_err(|_| syntax(format!("bad qubit index `{token}`")))?;
        Ok(QubitRef::data(index))
    }
}

fn parse_controls(raw: &str, line: usize) -> Result<Vec<ControlSpec>, ParseError> {
    let syntax = |message: String| ParseError::Syntax { line, message };
    raw.split(',')
        .map(|token| {
            let (polarity, rest) = if let Some(rest) = token.strip_prefix('+') {
                (Polarity::Positive, rest)
            } else if let Some(rest) = token.strip_prefix('-') {
                (Polarity::Negative, rest)
            } else {
                return Err(syntax(format!(
                    "control `{token}` must start with `+` or `-`"
                )));
            };
            Ok(ControlSpec {
                qubit: parse_qubit(rest, line)?,
                polarity,
            })
        })
        .collect()
}

/// Parses the text circuit format.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut n_data: Option<usize> = None;
    let mut n_ancilla: Option<usize> = None;
    let mut gates = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let syntax = |message: String| ParseError::Syntax { line, message };
        let content = raw_line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "qubits" => {
                let n = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| syntax("expected `qubits <n>`".into()))?;
                n_data = Some(n);
            }
            "ancilla" => {
                let n = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| syntax("expected `ancilla <n>`".into()))?;
                n_ancilla = Some(n);
            }
            kind_token @ ("X" | "H" | "R" | "U2") => {
                let mut theta: Option<f64> = None;
                let mut matrix: Option<Mat2> = None;
                let mut target: Option<QubitRef> = None;
                let mut controls = Vec::new();
                for token in &tokens[1..] {
                    if let Some(value) = token.strip_prefix("t=") {
                        target = Some(parse_qubit(value, line)?);
                    } else if let Some(value) = token.strip_prefix("theta=") {
                        theta = Some(
                            value
                                .parse()
                                .map_err(|_| syntax(format!("bad angle `{value}`")))?,
                        );
                    } else if let Some(value) = token.strip_prefix("m=") {
                        let floats: Result<Vec<f64>, _> =
                            value.split(',').map(|t| t.parse::<f64>()).collect();
                        let floats = floats
                            .map_err(|_| syntax(format!("bad matrix entry in `{value}`")))?;
                        if floats.len() != 8 {
                            return Err(syntax(format!(
                                "matrix needs 8 floats, got {}",
                                floats.len()
                            )));
                        }
                        matrix = Some(Mat2([
                            Complex64::new(floats[0], floats[1]),
                            Complex64::new(floats[2], floats[3]),
                            Complex64::new(floats[4], floats[5]),
                            Complex64::new(floats[6], floats[7]),
                        ]));
                    } else if let Some(value) = token.strip_prefix("c=") {
                        controls = parse_controls(value, line)?;
                    } else {
                        return Err(syntax(format!("unexpected token `{token}`")));
                    }
                }
                let target = target.ok_or_else(|| syntax("gate is missing `t=`".into()))?;
                let kind = match kind_token {
                    "X" => GateKind::X,
                    "H" => GateKind::H,
                    "R" => GateKind::Rot(
                        theta.ok_or_else(|| syntax("R gate is missing `theta=`".into()))?,
                    ),
                    "U2" => GateKind::U2(
                        matrix.ok_or_else(|| syntax("U2 gate is missing `m=`".into()))?,
                    ),
                    _ => unreachable!(),
                };
                gates.push(Gate::new(kind, target, controls));
            }
            other => {
                return Err(syntax(format!("unknown directive `{other}`")));
            }
        }
    }

    match (n_data, n_ancilla) {
        (Some(d), Some(a)) => Ok(Circuit::with_gates(d, a, gates)),
        _ => Err(ParseError::MissingHeader),
    }
}

/// Writes a signal as CSV: one `re,im` line per amplitude.
pub fn write_signal(amplitudes: &[Complex64]) -> String {
    let mut out = String::new();
    for z in amplitudes {
        out.push_str(&format!("{},{}\n", fmt_f64(z.re), fmt_f64(z.im)));
    }
    out
}

/// Reads a signal CSV; each non-comment line holds `re,im` or a bare real.
pub fn parse_signal(text: &str) -> Result<Vec<Complex64>, ParseError> {
    let mut amplitudes = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parts: Vec<&str> = content.split(',').map(str::trim).collect();
        let value = match parts.as_slice() {
            [re] => re
                .parse::<f64>()
                .map(|re| Complex64::new(re, 0.0))
                .map_err(|_| ParseError::Signal {
                    line,
                    message: format!("bad amplitude `{re}`"),
                })?,
            [re, im] => {
                let re: f64 = re.parse().map_err(|_| ParseError::Signal {
                    line,
                    message: format!("bad real part `{re}`"),
                })?;
                let im: f64 = im.parse().map_err(|_| ParseError::Signal {
                    line,
                    message: format!("bad imaginary part `{im}`"),
                })?;
                Complex64::new(re, im)
            }
            _ => {
                return Err(ParseError::Signal {
                    line,
                    message: "expected `re,im`".into(),
                })
            }
        };
        amplitudes.push(value);
    }
    Ok(amplitudes)
}

/// Writes a matrix as CSV: d lines of d `re+imj` entries.
pub fn write_matrix(matrix: &crate::simulator::DenseMatrix) -> String {
    let mut out = String::new();
    for row in 0..matrix.dim() {
        let entries: Vec<String> = (0..matrix.dim())
            .map(|col| fmt_complex(matrix.get(row, col)))
            .collect();
        out.push_str(&entries.join(","));
        out.push('\n');
    }
    out
}

/// Filter tap file:
///
/// ```text
/// taps <2K>
/// alpha: <2K floats or re+imj tokens>
/// beta: <2K floats or re+imj tokens>
/// ```
pub fn parse_filter(text: &str) -> Result<(Vec<Complex64>, Vec<Complex64>), ParseError> {
    let mut taps: Option<usize> = None;
    let mut alpha: Option<Vec<Complex64>> = None;
    let mut beta: Option<Vec<Complex64>> = None;

    for raw_line in text.lines() {
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("taps") {
            taps = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| ParseError::Filter(format!("bad tap count `{rest}`")))?,
            );
        } else if let Some(rest) = content.strip_prefix("alpha:") {
            alpha = Some(parse_tap_list(rest)?);
        } else if let Some(rest) = content.strip_prefix("beta:") {
            beta = Some(parse_tap_list(rest)?);
        } else {
            return Err(ParseError::Filter(format!("unexpected line `{content}`")));
        }
    }

    let taps = taps.ok_or_else(|| ParseError::Filter("missing `taps` line".into()))?;
    let alpha = alpha.ok_or_else(|| ParseError::Filter("missing `alpha:` line".into()))?;
    let beta = beta.ok_or_else(|| ParseError::Filter("missing `beta:` line".into()))?;
    if alpha.len() != taps || beta.len() != taps {
        return Err(ParseError::Filter(format!(
            "expected {taps} taps, got {} alpha and {} beta",
            alpha.len(),
            beta.len()
        )));
    }
    Ok((alpha, beta))
}

fn parse_tap_list(raw: &str) -> Result<Vec<Complex64>, ParseError> {
    raw.split_whitespace()
        .map(|token| {
            parse_complex(token)
                .ok_or_else(|| ParseError::Filter(format!("bad tap value `{token}`")))
        })
        .collect()
}

/// Writes a filter tap file.
pub fn write_filter(alpha: &[Complex64], beta: &[Complex64]) -> String {
    let fmt_taps = |taps: &[Complex64]| -> String {
        taps.iter()
            .map(|&z| {
                if z.im == 0.0 {
                    fmt_f64(z.re)
                } else {
                    fmt_complex(z)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        "taps {}\nalpha: {}\nbeta: {}\n",
        alpha.len(),
        fmt_taps(alpha),
        fmt_taps(beta),
    )
}
