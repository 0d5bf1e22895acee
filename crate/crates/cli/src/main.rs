//! `ionjw`: compile fermionic excitations to MS-gate circuits, verify and count them.

mod declared;
mod reference;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ionjw::circuit::{cost, count, deserialize, serialize, Circuit, Gate};
use ionjw::ham::{h3plus_builtin, parse_integrals, term_list, HamiltonianTermList, Reality};
use ionjw::pauli::{MsAxis, PauliString};
use ionjw::sim::{assert_equivalent, circuit_unitary, EquivalenceMode, MAX_QUBITS};
use ionjw::synth::{self, ControlVariant};
use ionjw::trotter::{
    build_trotter_step, build_uccsd_layer_with, trotter_reference, uccsd_reference, AnsatzSpec, Scheduling,
    TrotterConfig,
};
use serde_json::json;

const DEFAULT_TOL: f64 = 1e-9;
const TOL_ENV: &str = "IONJW_TOL";

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    /// Library errors raised while reading a file are input-format errors.
    pub fn from_input(path: &Path, e: ionjw::Error) -> Self {
        Failure::input(format!("{}: {e}", path.display()))
    }

    pub fn from_flags(flag: &str, e: ionjw::Error) -> Self {
        match e {
            ionjw::Error::Parse { .. } | ionjw::Error::Schema(_) => Failure::input(format!("{flag}: {e}")),
            _ => Failure::usage(format!("{flag}: {e}")),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

#[derive(Parser)]
#[command(name = "ionjw", version, about = "Compile fermionic excitations to trapped-ion MS circuits")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compile one excitation or Pauli rotation to a circuit file.
    Compile(CompileArgs),
    /// Recompile the generator declared in a circuit file and compare unitaries.
    Verify(VerifyArgs),
    /// Gate counts of a circuit file.
    Count(CircuitArg),
    /// MS time and layered depth of a circuit file.
    Cost(CostArgs),
    /// One UCCSD layer.
    Uccsd(UccsdArgs),
    /// One first-order Trotter step of a Hamiltonian.
    Trotter(TrotterArgs),
    /// Rebuild the H3+ circuits and compare with the published counts.
    Demo(DemoArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Debug)]
enum Op {
    Single,
    Double,
    Coupled,
    Controlled,
    Higher,
    Mixed,
    Rotation,
}

impl Op {
    fn name(self) -> &'static str {
        match self {
            Op::Single => "single",
            Op::Double => "double",
            Op::Coupled => "coupled",
            Op::Controlled => "controlled",
            Op::Higher => "higher",
            Op::Mixed => "mixed",
            Op::Rotation => "rotation",
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Debug)]
enum AxisArg {
    Xx,
    Yy,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Debug)]
enum VariantArg {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Debug)]
enum SchedulingArg {
    Parallelized,
    Baseline,
    Naive,
}

impl From<SchedulingArg> for Scheduling {
    fn from(s: SchedulingArg) -> Self {
        match s {
            SchedulingArg::Parallelized => Scheduling::Parallelized,
            SchedulingArg::Baseline => Scheduling::Baseline,
            SchedulingArg::Naive => Scheduling::Naive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Debug)]
enum RealityArg {
    Real,
    Complex,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Debug)]
enum ModeArg {
    Exact,
    Phase,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long, value_enum)]
    op: Op,
    /// Orbital indices: `p,q` for singles, `p,q,r,s` for doubles, occupied then virtual for higher orders.
    #[arg(long, value_delimiter = ',')]
    orbitals: Vec<usize>,
    /// Control mode of a controlled single.
    #[arg(long)]
    control: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, value_enum)]
    axis: Option<AxisArg>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Compile the symmetrized generator instead.
    #[arg(long)]
    symmetrized: bool,
    /// Pauli label for `--op rotation`, qubit 0 first.
    #[arg(long, allow_hyphen_values = true)]
    pauli: Option<String>,
    /// Register width (defaults to the largest orbital plus one).
    #[arg(long)]
    qubits: Option<usize>,
    /// Rewrite backward MS gates as forward ones.
    #[arg(long)]
    forward_only: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CircuitArg {
    #[arg(long)]
    circuit: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Frobenius tolerance (default from IONJW_TOL, else 1e-9).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
}

#[derive(Args)]
struct CostArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Duration of a two-qubit MS gate.
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
}

#[derive(Args)]
struct UccsdArgs {
    #[arg(long)]
    modes: usize,
    #[arg(long, value_delimiter = ',')]
    occupied: Vec<usize>,
    /// Defaults to every mode not occupied.
    #[arg(long = "virtual", value_delimiter = ',')]
    virtual_modes: Option<Vec<usize>>,
    /// One angle per excitation, singles first (defaults to zeros).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    params: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = SchedulingArg::Parallelized)]
    scheduling: SchedulingArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TrotterArgs {
    /// Integral file.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    integrals: Option<PathBuf>,
    /// Built-in system (`h3plus`).
    #[arg(long)]
    builtin: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dt: f64,
    /// Orbital class; must match the integral file.
    #[arg(long, value_enum)]
    reality: Option<RealityArg>,
    #[arg(long, value_enum, default_value_t = SchedulingArg::Parallelized)]
    scheduling: SchedulingArg,
    /// Drop density and Coulomb terms.
    #[arg(long)]
    non_local: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    /// System name; only `h3plus` is built in.
    system: String,
    #[arg(long, conflicts_with = "trotter", required_unless_present = "trotter")]
    uccsd: bool,
    #[arg(long)]
    trotter: bool,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    dt: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Compile(a) => compile(a),
        Command::Verify(a) => verify(a, cli.format),
        Command::Count(a) => count_cmd(a, cli.format),
        Command::Cost(a) => cost_cmd(a, cli.format),
        Command::Uccsd(a) => uccsd(a),
        Command::Trotter(a) => trotter(a),
        Command::Demo(a) => demo(a, cli.format),
    }
}

fn write_circuit(c: &Circuit, output: Option<&Path>) -> Outcome {
    let text = serialize(c);
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("--output {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_circuit(path: &Path) -> std::result::Result<Circuit, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    deserialize(&text).map_err(|e| Failure::from_input(path, e))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn reject(flag: &str, present: bool, op: Op) -> Outcome {
    if present {
        Err(Failure::usage(format!("{flag} does not apply to --op {}", op.name())))
    } else {
        Ok(())
    }
}

fn compile(a: CompileArgs) -> Outcome {
    let op = a.op;
    reject("--pauli", a.pauli.is_some() && op != Op::Rotation, op)?;
    reject("--control", a.control.is_some() && op != Op::Controlled, op)?;
    reject("--variant", a.variant.is_some() && op != Op::Controlled, op)?;
    reject("--axis", a.axis.is_some() && op != Op::Single, op)?;
    reject("--orbitals", !a.orbitals.is_empty() && op == Op::Rotation, op)?;
    reject(
        "--symmetrized",
        a.symmetrized && matches!(op, Op::Coupled | Op::Mixed | Op::Rotation),
        op,
    )?;
    if !a.theta.is_finite() {
        return Err(Failure::usage(format!("--theta {} is not finite", a.theta)));
    }
    let orb = &a.orbitals;
    let want_len = match op {
        Op::Single | Op::Controlled => Some(2),
        Op::Double | Op::Coupled | Op::Mixed => Some(4),
        Op::Higher | Op::Rotation => None,
    };
    if let Some(k) = want_len {
        if orb.len() != k {
            return Err(Failure::usage(format!(
                "--orbitals expects {k} indices for --op {}, got {}",
                op.name(),
                orb.len()
            )));
        }
        if let Some(w) = orb.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Failure::usage(format!(
                "--orbitals {}: indices must be strictly increasing ({} >= {})",
                join(orb),
                w[0],
                w[1]
            )));
        }
    }
    if op == Op::Higher {
        if orb.is_empty() || orb.len() % 2 == 1 {
            return Err(Failure::usage("--orbitals expects occupied then virtual modes, equally many"));
        }
        for half in orb.chunks(orb.len() / 2) {
            if let Some(w) = half.windows(2).find(|w| w[0] >= w[1]) {
                return Err(Failure::usage(format!(
                    "--orbitals {}: occupied and virtual lists must each be strictly increasing ({} >= {})",
                    join(orb),
                    w[0],
                    w[1]
                )));
            }
        }
    }

    let mut meta: Vec<(&str, String)> = vec![("op", op.name().into()), ("theta", format!("{:?}", a.theta))];
    let circuit = if op == Op::Rotation {
        let label = a.pauli.clone().ok_or_else(|| Failure::usage("--op rotation needs --pauli"))?;
        let p = PauliString::from_label(&label).map_err(|e| Failure::usage(format!("--pauli {label}: {e}")))?;
        meta.push(("pauli", p.signed_label()));
        synth::compile_pauli_rotation(&p, a.theta).map_err(|e| Failure::from_flags("--pauli", e))?
    } else {
        let max = orb.iter().copied().max().unwrap_or(0).max(a.control.unwrap_or(0));
        let n = a.qubits.unwrap_or(max + 1);
        if max >= n {
            return Err(Failure::usage(format!("--qubits {n} cannot hold orbital {max}")));
        }
        meta.push(("orbitals", join(orb)));
        meta.push(("n", n.to_string()));
        if a.symmetrized {
            meta.push(("symmetrized", "true".into()));
        }
        let flags = "--orbitals";
        let lib = |e| Failure::from_flags(flags, e);
        let term = |t: ionjw::Result<ionjw::fermion::ExcitationTerm>| t.map_err(lib);
        match op {
            Op::Single => {
                let axis = match a.axis.unwrap_or(AxisArg::Xx) {
                    AxisArg::Xx => MsAxis::XX,
                    AxisArg::Yy => MsAxis::YY,
                };
                meta.push(("axis", axis.name().into()));
                if a.symmetrized {
                    let t = term(ionjw::fermion::ExcitationTerm::single(orb[0], orb[1], true, 1.0))?;
                    synth::compile_symmetrized(n, &t, a.theta).map_err(lib)?
                } else {
                    synth::compile_single_excitation(n, orb[0], orb[1], a.theta, axis).map_err(lib)?
                }
            }
            Op::Double => {
                let t = term(ionjw::fermion::ExcitationTerm::double(
                    orb[0], orb[1], orb[2], orb[3], a.symmetrized, 1.0,
                ))?;
                if a.symmetrized {
                    synth::compile_symmetrized(n, &t, a.theta).map_err(lib)?
                } else {
                    synth::compile_double_excitation(n, orb[0], orb[1], orb[2], orb[3], a.theta).map_err(lib)?
                }
            }
            Op::Coupled => {
                synth::compile_coupled_exchange(n, orb[0], orb[1], orb[2], orb[3], a.theta).map_err(lib)?
            }
            Op::Mixed => synth::compile_mixed_cnot(n, orb[0], orb[1], orb[2], orb[3], a.theta).map_err(lib)?,
            Op::Controlled => {
                let j = a.control.ok_or_else(|| Failure::usage("--op controlled needs --control"))?;
                meta.push(("control", j.to_string()));
                if orb.contains(&j) {
                    return Err(Failure::usage(format!("--control {j} repeats an orbital of --orbitals")));
                }
                if a.symmetrized {
                    if a.variant.is_some() {
                        return Err(Failure::usage("--variant does not apply with --symmetrized"));
                    }
                    let t = term(ionjw::fermion::ExcitationTerm::controlled_single(orb[0], orb[1], j, true, 1.0))?;
                    synth::compile_symmetrized(n, &t, a.theta).map_err(lib)?
                } else {
                    let variant = match a.variant.unwrap_or(VariantArg::A) {
                        VariantArg::A => ControlVariant::A,
                        VariantArg::B => ControlVariant::B,
                    };
                    meta.push(("variant", format!("{variant:?}").to_lowercase()));
                    synth::compile_controlled_single(n, orb[0], orb[1], j, a.theta, variant).map_err(lib)?
                }
            }
            Op::Higher => {
                let (occ, virt) = orb.split_at(orb.len() / 2);
                let t = term(ionjw::fermion::ExcitationTerm::higher(occ, virt, a.symmetrized, 1.0))?;
                if a.symmetrized {
                    synth::compile_symmetrized(n, &t, a.theta).map_err(lib)?
                } else {
                    synth::compile_higher_excitation(n, occ, virt, a.theta).map_err(lib)?
                }
            }
            Op::Rotation => unreachable!(),
        }
    };
    let mut circuit = if a.forward_only {
        synth::eliminate_backward_ms(&circuit).map_err(|e| Failure::usage(e.to_string()))?
    } else {
        circuit
    };
    for (k, v) in meta {
        circuit.metadata.insert(k.into(), v);
    }
    write_circuit(&circuit, a.output.as_deref())
}

fn default_tol() -> std::result::Result<f64, Failure> {
    match std::env::var(TOL_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Failure::usage(format!("{TOL_ENV}={v} is not a number"))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn verify(a: VerifyArgs, format: Format) -> Outcome {
    let tol = match a.tol {
        Some(t) => t,
        None => default_tol()?,
    };
    if tol.is_nan() || tol < 0.0 {
        return Err(Failure::usage(format!("--tol {tol} must be non-negative")));
    }
    let c = read_circuit(&a.circuit)?;
    if c.n_qubits() > MAX_QUBITS {
        return Err(Failure::input(format!(
            "{}: {} qubits exceed the oracle limit of {MAX_QUBITS}",
            a.circuit.display(),
            c.n_qubits()
        )));
    }
    let target = declared::target_unitary(&c).map_err(|f| Failure {
        message: format!("{}: {}", a.circuit.display(), f.message),
        ..f
    })?;
    let u = circuit_unitary(&c).map_err(|e| Failure::from_input(&a.circuit, e))?;
    let mode = match a.mode {
        ModeArg::Exact => EquivalenceMode::Exact,
        ModeArg::Phase => EquivalenceMode::GlobalPhase,
    };
    let v = assert_equivalent(&u, &target, mode, tol).map_err(|e| Failure::from_input(&a.circuit, e))?;
    let op = c.metadata.get("op").cloned().unwrap_or_default();
    match format {
        Format::Text => println!(
            "{op}: distance {:.3e} (tol {tol:e}, {}) {}",
            v.distance,
            if mode == EquivalenceMode::Exact { "exact" } else { "global phase" },
            if v.pass { "ok" } else { "FAILED" }
        ),
        Format::Json => println!(
            "{}",
            json!({"op": op, "distance": v.distance, "tol": tol, "pass": v.pass, "ms": c.ms_count()})
        ),
    }
    if v.pass {
        Ok(())
    } else {
        Err(Failure::verification(format!("distance {:.3e} exceeds {tol:e}", v.distance)))
    }
}

fn count_cmd(a: CircuitArg, format: Format) -> Outcome {
    let c = read_circuit(&a.circuit)?;
    let r = count(&c);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&r).expect("report serializes")),
        Format::Text => {
            println!("qubits        {}", c.n_qubits());
            println!("gates         {}", c.len());
            println!("MS            {} ({} forward, {} backward; {} XX, {} YY)", r.ms_total(), r.ms_forward, r.ms_backward, r.ms_xx, r.ms_yy);
            println!("single-qubit  {}", r.single_qubit);
            println!("CRz           {}", r.crz);
            println!("Rzz           {}", r.rzz);
            println!("CNOT          {}", r.cnot);
            println!("global phase  {}", r.global_phase);
            for (k, v) in &r.ms_locality_histogram {
                println!("MS on {k:<2} qubits {v}");
            }
        }
    }
    Ok(())
}

fn cost_cmd(a: CostArgs, format: Format) -> Outcome {
    let c = read_circuit(&a.circuit)?;
    let r = cost(&c, a.tau).map_err(|e| Failure::usage(format!("--tau: {e}")))?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&r).expect("report serializes")),
        Format::Text => {
            println!("MS time  {:.6} (tau {})", r.total_ms_time, a.tau);
            println!("depth    {}", r.sequential_depth);
        }
    }
    Ok(())
}

fn uccsd(a: UccsdArgs) -> Outcome {
    let virt = a
        .virtual_modes
        .clone()
        .unwrap_or_else(|| (0..a.modes).filter(|m| !a.occupied.contains(m)).collect());
    let mut spec = AnsatzSpec::zeros(a.modes, &a.occupied, &virt).map_err(|e| Failure::from_flags("--occupied", e))?;
    if let Some(p) = &a.params {
        if p.len() != spec.params.len() {
            return Err(Failure::usage(format!(
                "--params has {} values for {} excitations",
                p.len(),
                spec.params.len()
            )));
        }
        spec.params = p.clone();
    }
    let mut c = build_uccsd_layer_with(&spec, a.scheduling.into()).map_err(|e| Failure::from_flags("--params", e))?;
    c.metadata.insert("op".into(), "uccsd".into());
    c.metadata.insert("n".into(), a.modes.to_string());
    c.metadata.insert("occupied".into(), join(&spec.occupied));
    c.metadata.insert("virtual".into(), join(&spec.virtual_modes));
    c.metadata.insert("params".into(), spec.params.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(","));
    write_circuit(&c, a.output.as_deref())
}

/// Loads the named built-in or an integral file.
pub fn load_terms(builtin: Option<&str>, path: Option<&Path>) -> std::result::Result<HamiltonianTermList, Failure> {
    match (builtin, path) {
        (Some("h3plus"), _) => Ok(h3plus_builtin()),
        (Some(other), _) => Err(Failure::usage(format!("--builtin {other}: unknown system (try h3plus)"))),
        (None, Some(p)) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            let table = parse_integrals(&text).map_err(|e| Failure::from_input(p, e))?;
            term_list(&table).map_err(|e| Failure::from_input(p, e))
        }
        (None, None) => Err(Failure::usage("one of --integrals or --builtin is required")),
    }
}

fn reality_of(r: RealityArg) -> Reality {
    match r {
        RealityArg::Real => Reality::Real,
        RealityArg::Complex => Reality::Complex,
    }
}

fn trotter(a: TrotterArgs) -> Outcome {
    if !a.dt.is_finite() {
        return Err(Failure::usage(format!("--dt {} is not finite", a.dt)));
    }
    let mut terms = load_terms(a.builtin.as_deref(), a.integrals.as_deref())?;
    if a.non_local {
        terms = terms.non_local();
    }
    let cfg = TrotterConfig {
        dt: a.dt,
        reality: a.reality.map(reality_of).unwrap_or(terms.reality),
        scheduling: a.scheduling.into(),
    };
    let mut c = build_trotter_step(&terms, &cfg).map_err(|e| Failure::from_flags("--reality", e))?;
    c.metadata.insert("op".into(), "trotter".into());
    let source = match (&a.builtin, &a.integrals) {
        (Some(b), _) => format!("builtin:{b}"),
        (None, Some(p)) => format!("file:{}", p.display()),
        _ => unreachable!(),
    };
    c.metadata.insert("source".into(), source);
    c.metadata.insert("scope".into(), if a.non_local { "non-local" } else { "full" }.into());
    write_circuit(&c, a.output.as_deref())
}

fn oracle_line(label: &str, c: &Circuit, target: &ionjw::sim::DenseOperator, tol: f64) -> std::result::Result<(String, bool), Failure> {
    let u = circuit_unitary(c).map_err(|e| Failure::usage(e.to_string()))?;
    let v = assert_equivalent(&u, target, EquivalenceMode::Exact, tol).map_err(|e| Failure::usage(e.to_string()))?;
    Ok((
        format!(
            "oracle ({label}): distance {:.2e}, tol {tol:e}, {}",
            v.distance,
            if v.pass { "ok" } else { "FAILED" }
        ),
        v.pass,
    ))
}

fn demo(a: DemoArgs, format: Format) -> Outcome {
    if a.system != "h3plus" {
        return Err(Failure::usage(format!("demo {}: unknown system (try h3plus)", a.system)));
    }
    let tol = default_tol()?;
    let (lines, data, pass) = if a.uccsd {
        let mut spec = AnsatzSpec::closed_shell(6, 2).map_err(|e| Failure::usage(e.to_string()))?;
        spec.params = (0..spec.params.len()).map(|k| 0.1 * (k + 1) as f64).collect();
        let fast = build_uccsd_layer_with(&spec, Scheduling::Parallelized).map_err(|e| Failure::usage(e.to_string()))?;
        let slow = build_uccsd_layer_with(&spec, Scheduling::Baseline).map_err(|e| Failure::usage(e.to_string()))?;
        let (m, b) = (count(&fast).ms_total(), count(&slow).ms_total());
        let target = uccsd_reference(&spec).map_err(|e| Failure::usage(e.to_string()))?;
        let (o1, p1) = oracle_line("parallelized", &fast, &target, tol)?;
        let (o2, p2) = oracle_line("baseline", &slow, &target, tol)?;
        let ex = spec.excitations().map_err(|e| Failure::usage(e.to_string()))?;
        let singles = ex.iter().filter(|t| matches!(t.kind, ionjw::fermion::ExcitationKind::Single { .. })).count();
        let lines = vec![
            "H3+ UCCSD layer, 6 qubits, reference |110000>".to_string(),
            format!("excitations: {singles} singles, {} doubles", ex.len() - singles),
            format!("{:<14}{:>10}{:>11}", "", "computed", "published"),
            format!("{:<14}{:>10}{:>11}", "parallelized", m, reference::UCCSD_PARALLEL_MS),
            format!("{:<14}{:>10}{:>11}", "baseline", b, reference::UCCSD_BASELINE_MS),
            format!("{:<14}{:>10.1}{:>11.1}", "factor", b as f64 / m as f64, reference::UCCSD_FACTOR),
            format!("MS: {m} (baseline {b}, factor {:.1})", b as f64 / m as f64),
            o1,
            o2,
        ];
        let data = json!({
            "system": "h3plus", "circuit": "uccsd",
            "ms": m, "baseline_ms": b,
            "published": {"ms": reference::UCCSD_PARALLEL_MS, "baseline_ms": reference::UCCSD_BASELINE_MS},
        });
        (lines, data, p1 && p2)
    } else {
        if !a.dt.is_finite() {
            return Err(Failure::usage(format!("--dt {} is not finite", a.dt)));
        }
        let full = h3plus_builtin();
        let nonlocal = full.non_local();
        let step = |t: &HamiltonianTermList, s| {
            build_trotter_step(t, &TrotterConfig { dt: a.dt, reality: Reality::Real, scheduling: s })
                .map_err(|e| Failure::usage(e.to_string()))
        };
        let par = step(&nonlocal, Scheduling::Parallelized)?;
        let (m, s, n) = (
            par.ms_count(),
            step(&nonlocal, Scheduling::Baseline)?.ms_count(),
            step(&nonlocal, Scheduling::Naive)?.ms_count(),
        );
        let whole = step(&full, Scheduling::Parallelized)?;
        let local_ms = whole.ms_count() - m;
        let local_rot = whole
            .gates()
            .iter()
            .filter(|g| matches!(g, Gate::Rz { .. } | Gate::Rzz { .. }))
            .count()
            - par.gates().iter().filter(|g| matches!(g, Gate::Rz { .. } | Gate::Rzz { .. })).count();
        let target = trotter_reference(&full, a.dt).map_err(|e| Failure::usage(e.to_string()))?;
        let (o, pass) = oracle_line("full step", &whole, &target, tol)?;
        let lines = vec![
            format!("H3+ Trotter step, dt {}, 6 qubits, real orbitals", a.dt),
            format!(
                "terms: {} local, {} non-local",
                full.local.len(),
                full.excitations.len()
            ),
            format!("{:<18}{:>10}{:>11}", "non-local MS", "computed", "published"),
            format!("{:<18}{:>10}{:>11}", "parallelized", m, reference::TROTTER_PARALLEL_MS),
            format!("{:<18}{:>10}{:>11}", "string-by-string", s, reference::TROTTER_STRING_MS),
            format!("{:<18}{:>10}{:>11}", "naive", n, reference::TROTTER_NAIVE_MS),
            format!("{:<18}{:>10.1}{:>11.1}", "speedup", s as f64 / m as f64, reference::TROTTER_SPEEDUP),
            format!("local part: {local_rot} Rz/Rzz, {local_ms} MS"),
            format!("MS: {m} (string-by-string {s}, naive {n})"),
            o,
        ];
        let data = json!({
            "system": "h3plus", "circuit": "trotter", "dt": a.dt,
            "ms": m, "string_by_string_ms": s, "naive_ms": n, "local_ms": local_ms,
            "published": {"ms": reference::TROTTER_PARALLEL_MS, "string_by_string_ms": reference::TROTTER_STRING_MS, "naive_ms": reference::TROTTER_NAIVE_MS},
        });
        (lines, data, pass)
    };
    match format {
        Format::Text => lines.iter().for_each(|l| println!("{l}")),
        Format::Json => {
            let mut d = data;
            d["oracle_pass"] = json!(pass);
            println!("{}", serde_json::to_string_pretty(&d).expect("report serializes"));
        }
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::verification("oracle check failed"))
    }
}
