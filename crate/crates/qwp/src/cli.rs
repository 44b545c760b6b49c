//! Command-line front end: build circuits to files, run signals through
//! them, verify circuits against the classical oracle, count gates, factor
//! filters into lattice angles, and dump matrices.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 build error, 4 malformed signal, 5 dimension mismatch, 6 matrix size
//! refusal. Every command is deterministic: identical inputs produce
//! byte-identical outputs (verification signals come from a fixed-seed
//! generator).

use crate::builders::{
    build_increment_mod, build_increment_pow2, build_transform, build_walsh_hadamard, ceil_log2,
    CoefficientOrder, SplitWord, TransformKind, TransformPlan,
};
use crate::circuit::{count_gates, Circuit, GateKind};
use crate::classical::{
    classical_transform, d4_pair, d4_word, haar_pair, haar_word, subband_permutation, QmfPair,
};
use crate::format;
use crate::lattice::{factorization_to_word, lattice_factor};
use crate::simulator::{
    apply_circuit, embed_signal, extract_data_amplitudes, extract_matrix_block, DenseMatrix,
    MAX_MATRIX_QUBITS,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUILD: i32 = 3;
pub const EXIT_SIGNAL: i32 = 4;
pub const EXIT_DIMENSION: i32 = 5;
pub const EXIT_MATRIX_REFUSED: i32 = 6;

/// Seed for the deterministic verification signals.
const VERIFY_SEED: u64 = 0x5157_5045;
/// Number of random signals used when matrices are too large to extract.
const VERIFY_SIGNALS: usize = 20;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn build(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_BUILD,
            message: message.into(),
        }
    }

    fn signal(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_SIGNAL,
            message: message.into(),
        }
    }

    fn dimension(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_DIMENSION,
            message: message.into(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qwp",
    about = "Quantum circuits for periodized wavelet and wavelet packet transforms",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a circuit and print its gate counts.
    Build(BuildArgs),
    /// Run a signal file through a transform circuit.
    Sim(SimArgs),
    /// Compare a circuit against the classical filter bank.
    Verify(VerifyArgs),
    /// Print the gate-count report of a circuit.
    Count(CountArgs),
    /// Factor a filter pair into lattice rotation angles.
    Factor(FactorArgs),
    /// Dump the circuit's unitary matrix as CSV.
    Matrix(MatrixArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    Walsh,
    Packet,
    Pyramid,
    Increment,
    Decrement,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OrderingArg {
    Interleaved,
    Subband,
}

#[derive(Args, Debug)]
struct SizeArgs {
    /// Number of data qubits (signal length 2^n).
    #[arg(long)]
    qubits: Option<usize>,
    /// Signal period 2N (even); use for lengths that are not powers of two.
    #[arg(long)]
    length: Option<usize>,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(value_enum)]
    kind: KindArg,
    #[command(flatten)]
    size: SizeArgs,
    /// Number of splitting levels; defaults to the maximum the length allows.
    #[arg(long)]
    depth: Option<usize>,
    /// Filter: `haar`, `d4`, or a tap file path.
    #[arg(long)]
    filter: Option<String>,
    /// Output circuit file; without it the circuit goes to standard output.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimArgs {
    #[arg(value_enum)]
    kind: KindArg,
    #[command(flatten)]
    size: SizeArgs,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    filter: Option<String>,
    /// Input signal CSV (one `re,im` line per amplitude, 2^n lines).
    #[arg(long = "in")]
    input: PathBuf,
    /// Coefficient ordering of the output.
    #[arg(long, value_enum, default_value = "interleaved")]
    ordering: OrderingArg,
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    kind: KindArg,
    #[command(flatten)]
    size: SizeArgs,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    filter: Option<String>,
    /// Residual tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Verify this circuit file instead of a freshly built circuit.
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(value_enum)]
    kind: Option<KindArg>,
    #[command(flatten)]
    size: SizeArgs,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    filter: Option<String>,
    /// Count a circuit file instead of a freshly built circuit.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Report counts of the circuit after decomposition to elementary gates.
    #[arg(long)]
    elementary: bool,
    /// Also write the report as CSV.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FactorArgs {
    /// Filter: `haar`, `d4`, or a tap file path.
    #[arg(long)]
    filter: String,
    /// Period used for the orthonormality check; defaults to the tap count.
    #[arg(long)]
    length: Option<usize>,
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[arg(value_enum)]
    kind: Option<KindArg>,
    #[command(flatten)]
    size: SizeArgs,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    filter: Option<String>,
    /// Dump this circuit file instead of a freshly built circuit.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

/// Parses the process arguments, runs the command, and returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Sim(args) => cmd_sim(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Count(args) => cmd_count(args),
        Command::Factor(args) => cmd_factor(args),
        Command::Matrix(args) => cmd_matrix(args),
    }
}

/// Resolved signal size: the period 2N and the data qubit count.
fn resolve_size(size: &SizeArgs) -> Result<(usize, usize), CliError> {
    match (size.qubits, size.length) {
        (Some(n), None) => {
            if n == 0 || n > 20 {
                return Err(CliError::config(format!(
                    "--qubits must be between 1 and 20, got {n}"
                )));
            }
            Ok((1usize << n, n))
        }
        (None, Some(length)) => {
            if length < 2 || length % 2 != 0 {
                return Err(CliError::config(format!(
                    "--length must be an even number of at least 2, got {length}"
                )));
            }
            Ok((length, ceil_log2(length)))
        }
        (Some(_), Some(_)) => Err(CliError::config(
            "--qubits and --length are mutually exclusive",
        )),
        (None, None) => Err(CliError::config("one of --qubits or --length is required")),
    }
}

fn max_depth(length: usize) -> usize {
    length.trailing_zeros() as usize
}

fn resolve_filter(selector: &str, period: usize) -> Result<(QmfPair, SplitWord), CliError> {
    match selector {
        "haar" => Ok((haar_pair(period), haar_word())),
        "d4" => Ok((d4_pair(period), d4_word())),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::config(format!("cannot read filter file `{path}`: {e}"))
            })?;
            let (alpha, beta) =
                format::parse_filter(&text).map_err(|e| CliError::config(e.to_string()))?;
            let pair = QmfPair::new(alpha, beta, period)
                .map_err(|e| CliError::config(e.to_string()))?;
            let factorization =
                lattice_factor(&pair).map_err(|e| CliError::build(e.to_string()))?;
            let word =
                factorization_to_word(&factorization).map_err(|e| CliError::build(e.to_string()))?;
            Ok((pair, word))
        }
    }
}

struct ResolvedPlan {
    plan: TransformPlan,
    pair: QmfPair,
    word: SplitWord,
}

fn resolve_plan(
    kind: KindArg,
    size: &SizeArgs,
    depth: Option<usize>,
    filter: Option<&str>,
    ordering: CoefficientOrder,
) -> Result<ResolvedPlan, CliError> {
    let (length, _) = resolve_size(size)?;
    let transform_kind = match kind {
        KindArg::Packet => TransformKind::Packet,
        KindArg::Pyramid => TransformKind::Pyramid,
        _ => unreachable!("resolve_plan is only called for transform kinds"),
    };
    let depth = depth.unwrap_or_else(|| max_depth(length));
    let plan = TransformPlan::new(transform_kind, depth, length, ordering)
        .map_err(|e| CliError::config(e.to_string()))?;
    let filter = filter.ok_or_else(|| {
        CliError::config("packet and pyramid transforms need --filter (haar, d4, or a file)")
    })?;
    let (pair, word) = resolve_filter(filter, length)?;
    Ok(ResolvedPlan { plan, pair, word })
}

/// Builds the circuit a (kind, size, depth, filter) selection describes.
fn build_kind(
    kind: KindArg,
    size: &SizeArgs,
    depth: Option<usize>,
    filter: Option<&str>,
) -> Result<Circuit, CliError> {
    match kind {
        KindArg::Walsh => {
            let (_, n) = resolve_size(size)?;
            build_walsh_hadamard(n).map_err(|e| CliError::build(e.to_string()))
        }
        KindArg::Increment | KindArg::Decrement => {
            let (length, n) = resolve_size(size)?;
            let circuit = if length.is_power_of_two() {
                build_increment_pow2(n, 0..n, &[])
            } else {
                build_increment_mod(n, length, 0..n, &[])
            }
            .map_err(|e| CliError::build(e.to_string()))?;
            if kind == KindArg::Decrement {
                circuit
                    .inverted()
                    .map_err(|e| CliError::build(e.to_string()))
            } else {
                Ok(circuit)
            }
        }
        KindArg::Packet | KindArg::Pyramid => {
            let resolved = resolve_plan(kind, size, depth, filter, CoefficientOrder::Interleaved)?;
            build_transform(&resolved.plan, &resolved.word)
                .map_err(|e| CliError::build(e.to_string()))
        }
    }
}

fn render_count_report(circuit: &Circuit, elementary_view: bool) -> String {
    let (label, report) = if elementary_view {
        let decomposed = crate::decompose::decompose_unchecked(circuit);
        ("gate counts (elementary)", count_gates(&decomposed))
    } else {
        ("gate counts (logical)", count_gates(circuit))
    };
    let mut out = String::new();
    let _ = writeln!(out, "{label}");
    let _ = writeln!(
        out,
        "  {:<6}{:>8}{:>8}{:>8}{:>8}{:>8}",
        "kind", "c=0", "c=1", "c=2", "c>=3", "total"
    );
    let rows = [
        ("X", report.x),
        ("H", report.h),
        ("R", report.rot),
        ("U2", report.u2),
    ];
    for (name, hist) in rows {
        let _ = writeln!(
            out,
            "  {:<6}{:>8}{:>8}{:>8}{:>8}{:>8}",
            name,
            hist.uncontrolled,
            hist.single,
            hist.double,
            hist.triple_plus,
            hist.total()
        );
    }
    let _ = writeln!(out, "  logical total:    {}", report.logical_total());
    let _ = writeln!(out, "  elementary total: {}", report.elementary_total);
    out
}

fn count_report_csv(circuit: &Circuit, elementary_view: bool) -> String {
    let report = if elementary_view {
        count_gates(&crate::decompose::decompose_unchecked(circuit))
    } else {
        count_gates(circuit)
    };
    let mut out = String::from("kind,c0,c1,c2,c3plus,total\n");
    for (name, hist) in [
        ("X", report.x),
        ("H", report.h),
        ("R", report.rot),
        ("U2", report.u2),
    ] {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            name,
            hist.uncontrolled,
            hist.single,
            hist.double,
            hist.triple_plus,
            hist.total()
        );
    }
    let _ = writeln!(out, "elementary_total,{}", report.elementary_total);
    out
}

/// Counts the leading run of doubly-controlled NOTs onto ancillas: the carry
/// stage of an increment circuit.
fn carry_stage_len(circuit: &Circuit) -> usize {
    circuit
        .gates()
        .iter()
        .take_while(|g| {
            matches!(g.kind, GateKind::X)
                && g.controls.len() == 2
                && g.target.role == crate::circuit::QubitRole::Ancilla
        })
        .count()
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::build(format!("cannot write `{}`: {e}", path.display())))
}

fn cmd_build(args: BuildArgs) -> Result<i32, CliError> {
    let circuit = build_kind(args.kind, &args.size, args.depth, args.filter.as_deref())?;
    let serialized = format::serialize_circuit(&circuit);
    let summary = render_count_report(&circuit, false);
    match &args.out {
        Some(path) => {
            write_output(path, &serialized)?;
            print!("{summary}");
        }
        None => {
            for line in summary.lines() {
                println!("# {line}");
            }
            print!("{serialized}");
        }
    }
    Ok(0)
}

fn cmd_sim(args: SimArgs) -> Result<i32, CliError> {
    let (length, n) = resolve_size(&args.size)?;
    let ordering = match args.ordering {
        OrderingArg::Interleaved => CoefficientOrder::Interleaved,
        OrderingArg::Subband => CoefficientOrder::Subband,
    };
    if ordering == CoefficientOrder::Subband
        && !matches!(args.kind, KindArg::Packet | KindArg::Pyramid)
    {
        return Err(CliError::config(
            "--ordering subband only applies to packet and pyramid transforms",
        ));
    }

    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::signal(format!("cannot read `{}`: {e}", args.input.display())))?;
    let signal =
        format::parse_signal(&text).map_err(|e| CliError::signal(e.to_string()))?;
    if signal.len() != 1 << n {
        return Err(CliError::dimension(format!(
            "signal has {} amplitudes but the circuit expects {}",
            signal.len(),
            1 << n
        )));
    }
    for (i, amp) in signal.iter().enumerate().skip(length) {
        if amp.norm() > 0.0 {
            return Err(CliError::signal(format!(
                "length-{length} transform requires zero amplitudes beyond index {}, \
                 but index {i} is {amp}",
                length - 1
            )));
        }
    }

    let circuit = build_kind(args.kind, &args.size, args.depth, args.filter.as_deref())?;
    let state = embed_signal(&signal, &circuit)
        .map_err(|e| CliError::dimension(e.to_string()))?;
    let output = apply_circuit(&state, &circuit)
        .map_err(|e| CliError::dimension(e.to_string()))?;
    let amplitudes = extract_data_amplitudes(&output, &circuit)
        .map_err(|e| CliError::build(e.to_string()))?;

    let mut coefficients: Vec<Complex64> = amplitudes[..length].to_vec();
    if ordering == CoefficientOrder::Subband {
        let resolved = resolve_plan(args.kind, &args.size, args.depth, args.filter.as_deref(), ordering)?;
        let perm = subband_permutation(&resolved.plan)
            .map_err(|e| CliError::config(e.to_string()))?;
        let mut ordered = vec![Complex64::ZERO; length];
        for (i, &p) in perm.iter().enumerate() {
            ordered[p] = coefficients[i];
        }
        coefficients = ordered;
    }

    let rendered = format::write_signal(&coefficients);
    match &args.out {
        Some(path) => write_output(path, &rendered)?,
        None => print!("{rendered}"),
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, CliError> {
    let (length, n) = resolve_size(&args.size)?;

    // The oracle transform for the requested plan.
    let (plan, pair): (TransformPlan, QmfPair) = match args.kind {
        KindArg::Walsh => {
            let plan = TransformPlan::new(
                TransformKind::Packet,
                max_depth(length),
                length,
                CoefficientOrder::Interleaved,
            )
            .map_err(|e| CliError::config(e.to_string()))?;
            if !length.is_power_of_two() {
                return Err(CliError::config(
                    "walsh verification needs a power-of-two length",
                ));
            }
            (plan, haar_pair(length))
        }
        KindArg::Packet | KindArg::Pyramid => {
            let resolved = resolve_plan(
                args.kind,
                &args.size,
                args.depth,
                args.filter.as_deref(),
                CoefficientOrder::Interleaved,
            )?;
            (resolved.plan, resolved.pair)
        }
        KindArg::Increment | KindArg::Decrement => {
            return Err(CliError::config(
                "verify compares transforms; use `count` or `matrix` for increments",
            ));
        }
    };

    let circuit = match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::config(format!("cannot read `{}`: {e}", path.display()))
            })?;
            let circuit =
                format::parse_circuit(&text).map_err(|e| CliError::build(e.to_string()))?;
            if circuit.n_data() != n {
                return Err(CliError::dimension(format!(
                    "circuit file has {} data qubits, expected {n}",
                    circuit.n_data()
                )));
            }
            circuit
        }
        None => build_kind(args.kind, &args.size, args.depth, args.filter.as_deref())?,
    };

    let (residual, worst_column) = if n <= 6 {
        let got = extract_matrix_block(&circuit, length)
            .map_err(|e| CliError::build(e.to_string()))?;
        let mut oracle = DenseMatrix::zeros(length);
        for col in 0..length {
            let mut basis = vec![Complex64::ZERO; length];
            basis[col] = Complex64::ONE;
            let transformed = classical_transform(&plan, &pair, &basis)
                .map_err(|e| CliError::build(e.to_string()))?;
            for (row, value) in transformed.into_iter().enumerate() {
                oracle.set(row, col, value);
            }
        }
        got.worst_column_diff(&oracle)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
        let mut worst = (0.0f64, 0usize);
        for trial in 0..VERIFY_SIGNALS {
            let mut signal = vec![Complex64::ZERO; 1 << n];
            for slot in signal.iter_mut().take(length) {
                *slot = Complex64::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                );
            }
            let state = embed_signal(&signal, &circuit)
                .map_err(|e| CliError::dimension(e.to_string()))?;
            let output = apply_circuit(&state, &circuit)
                .map_err(|e| CliError::dimension(e.to_string()))?;
            let got = extract_data_amplitudes(&output, &circuit)
                .map_err(|e| CliError::build(e.to_string()))?;
            let want = classical_transform(&plan, &pair, &signal[..length])
                .map_err(|e| CliError::build(e.to_string()))?;
            for (i, (g, w)) in got.iter().zip(want.iter()).enumerate() {
                let d = (g - w).norm();
                if d > worst.0 {
                    worst = (d, i);
                }
            }
            let _ = trial;
        }
        worst
    };

    let verdict = if residual <= args.tol { "PASS" } else { "FAIL" };
    println!(
        "verify {:?} length={} depth={}: max residual {:.3e} (tolerance {:.1e}), worst column {}: {}",
        args.kind, length, plan.depth, residual, args.tol, worst_column, verdict
    );
    if residual <= args.tol {
        Ok(0)
    } else {
        Ok(EXIT_VERIFY_FAILED)
    }
}

fn obtain_circuit(
    kind: Option<KindArg>,
    size: &SizeArgs,
    depth: Option<usize>,
    filter: Option<&str>,
    input: Option<&PathBuf>,
) -> Result<Circuit, CliError> {
    match (kind, input) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::config(format!("cannot read `{}`: {e}", path.display()))
            })?;
            format::parse_circuit(&text).map_err(|e| CliError::build(e.to_string()))
        }
        (Some(kind), None) => build_kind(kind, size, depth, filter),
        (None, None) => Err(CliError::config(
            "either a circuit kind or --in <circuit file> is required",
        )),
    }
}

fn cmd_count(args: CountArgs) -> Result<i32, CliError> {
    let circuit = obtain_circuit(
        args.kind,
        &args.size,
        args.depth,
        args.filter.as_deref(),
        args.input.as_ref(),
    )?;
    print!("{}", render_count_report(&circuit, args.elementary));
    if matches!(args.kind, Some(KindArg::Increment) | Some(KindArg::Decrement)) {
        let carry = carry_stage_len(&circuit);
        let total_toffoli = count_gates(&circuit).x.double;
        println!(
            "  carry-stage toffolis: {carry} (cleanup: {})",
            total_toffoli.saturating_sub(carry)
        );
    }
    if let Some(path) = &args.out {
        write_output(path, &count_report_csv(&circuit, args.elementary))?;
    }
    Ok(0)
}

fn cmd_factor(args: FactorArgs) -> Result<i32, CliError> {
    let pair = match args.filter.as_str() {
        "haar" => haar_pair(args.length.unwrap_or(2)),
        "d4" => d4_pair(args.length.unwrap_or(4)),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::config(format!("cannot read filter file `{path}`: {e}"))
            })?;
            let (alpha, beta) =
                format::parse_filter(&text).map_err(|e| CliError::config(e.to_string()))?;
            let period = args.length.unwrap_or(alpha.len());
            QmfPair::new(alpha, beta, period).map_err(|e| CliError::config(e.to_string()))?
        }
    };
    let factorization = lattice_factor(&pair).map_err(|e| CliError::build(e.to_string()))?;
    println!("angles {}", factorization.angles.len());
    for angle in &factorization.angles {
        println!("{}", format::fmt_f64(*angle));
    }
    let record = factorization.normalization;
    println!(
        "# normalization: even_shift={} alpha_sign={:+} beta_sign={:+}",
        record.even_shift, record.alpha_sign as i32, record.beta_sign as i32
    );
    Ok(0)
}

fn cmd_matrix(args: MatrixArgs) -> Result<i32, CliError> {
    let circuit = obtain_circuit(
        args.kind,
        &args.size,
        args.depth,
        args.filter.as_deref(),
        args.input.as_ref(),
    )?;
    if circuit.n_data() > MAX_MATRIX_QUBITS {
        return Err(CliError {
            code: EXIT_MATRIX_REFUSED,
            message: format!(
                "matrix dump refused: {} data qubits exceeds the {MAX_MATRIX_QUBITS}-qubit bound",
                circuit.n_data()
            ),
        });
    }
    let dim = match (args.size.qubits, args.size.length, args.input.is_some()) {
        (None, Some(length), _) => length,
        _ => 1usize << circuit.n_data(),
    };
    let matrix = extract_matrix_block(&circuit, dim).map_err(|e| CliError::build(e.to_string()))?;
    let rendered = format::write_matrix(&matrix);
    match &args.out {
        Some(path) => write_output(path, &rendered)?,
        None => print!("{rendered}"),
    }
    Ok(0)
}
