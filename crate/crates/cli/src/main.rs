use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ionlogic::angle::Angle;
use ionlogic::constructions::{
    approx_swap, cnot_alt_cs, cnot_alt_cs_seventh, cnot_first_sideband, cnot_third_sideband, describe, p_gate,
    third_sideband_cz, u_phi, Construction, CsSpec,
};
use ionlogic::document::{read_schedule, schedule_to_string};
use ionlogic::hilbert::{basis_state, RegisterBasisState, StateVector};
use ionlogic::numerics::{find_swap_l, solve_u_phi_angles, swap_cosine, CandidateSource};
use ionlogic::pulse::{physical_to_pulse, pulse_duration, PhysicalPulseParams, PulseKind};
use ionlogic::schedule::{checked_schedule_unitary, run_schedule, schedule_unitary, Schedule, TruncationMode};
use ionlogic::verify::{
    parse_cs, subspace_indices, subspace_label, subspace_matrix, target_from_label, truncation_scan,
    verify_schedule, Target, DEFAULT_LEAK_TOLERANCE, DEFAULT_TOLERANCE,
};
use ionlogic::Error;
use num_complex::Complex64;
use serde_json::{json, Value};

mod format;

use format::{complex, num, round_json};

#[derive(Parser)]
#[command(name = "ionlogic", version, about = "Simulate, synthesize and verify sideband pulse schedules for trapped ions")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a schedule to a basis state, e.g. --initial '|10;0⟩'.
    Simulate {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        initial: String,
        /// Phonon cutoff; defaults to the document's.
        #[arg(long)]
        cutoff: Option<usize>,
        /// Error out when amplitude reaches the cutoff (default).
        #[arg(long, conflicts_with = "auto")]
        strict: bool,
        /// Grow the cutoff as needed instead.
        #[arg(long)]
        auto: bool,
    },
    /// Print the unitary of a schedule, optionally restricted to a subspace such as cs:0,1.
    Unitary {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        subspace: Option<String>,
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Emit a gate construction as a schedule document.
    Synthesize(SynthesizeArgs),
    /// Check a schedule against a target gate.
    Verify {
        #[arg(long)]
        schedule: PathBuf,
        /// cnot:j,k | diag:ion:d0,d1,d2,d3 | phases:ion:p0,p1,p2,p3 | swap:ion:l; read from the label if omitted.
        #[arg(long)]
        target: Option<String>,
        /// Computational subspace levels "low,high".
        #[arg(long)]
        cs: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_LEAK_TOLERANCE)]
        leak_tol: f64,
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Solve the angle system of the diagonal U(φ) family.
    SolveAngles,
    /// Search integers l with |cos(lπ√2)| small.
    FindSwapL {
        #[arg(long, default_value_t = 2500)]
        max: u64,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Convert laboratory pulse parameters to a pulse area and phase.
    Physical {
        #[arg(long)]
        mu: f64,
        #[arg(long = "B")]
        field: f64,
        #[arg(long = "t")]
        duration: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long = "n")]
        order: usize,
        #[arg(long = "Phi", default_value_t = 0.0, allow_negative_numbers = true)]
        laser_phase: f64,
        /// Sideband colour for n ≥ 1.
        #[arg(long, value_enum, default_value_t = Sideband::Blue)]
        kind: Sideband,
        #[arg(long, default_value_t = 0)]
        ion: usize,
    },
    /// Restricted unitary of a schedule over a range of cutoffs.
    Scan {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2,3,8,12")]
        cutoffs: Vec<usize>,
        #[arg(long)]
        subspace: Option<String>,
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sideband {
    Blue,
    Red,
}

#[derive(Args)]
struct SynthesizeArgs {
    #[command(subcommand)]
    gate: Gate,
    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Print the gate segments instead of the document.
    #[arg(long, global = true)]
    describe: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Sideband1,
    Sideband3,
    Altcs2,
    Altcs7,
}

#[derive(Subcommand)]
enum Gate {
    Cnot {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        control: usize,
        #[arg(long, default_value_t = 1)]
        target: usize,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        phi: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        phi2: String,
    },
    Pgate {
        #[arg(long, default_value_t = 0)]
        ion: usize,
    },
    Uphi {
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, default_value_t = 0)]
        ion: usize,
    },
    Swap {
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 0)]
        ion: usize,
    },
    /// Third-order controlled-Z on one ion.
    Cz3 {
        #[arg(long, default_value_t = 0)]
        ion: usize,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        phi2: String,
    },
}

enum Failure {
    Input(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Run = Result<(), Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

/// Writes to standard output; a closed pipe is not an error.
fn write_out(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
}

fn emit(fmt: OutputFormat, text: String, value: Value) {
    match fmt {
        OutputFormat::Text => write_out(&text),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&round_json(value)).expect("report serializes");
            s.push('\n');
            write_out(&s);
        }
    }
}

fn load(path: &Path) -> Result<Schedule, Failure> {
    read_schedule(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// `|b₁b₂…;q⟩`; the brackets are optional.
fn parse_state(text: &str, num_ions: usize) -> Result<RegisterBasisState, Failure> {
    let t = text.trim();
    let t = t.strip_prefix('|').unwrap_or(t);
    let t = t.strip_suffix('⟩').or_else(|| t.strip_suffix('>')).unwrap_or(t);
    let (spins, q) = t
        .split_once(';')
        .ok_or_else(|| input(format!("initial state '{text}': expected |spins;phonons⟩")))?;
    let spins: Vec<u8> = spins
        .trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(input(format!("initial state '{text}': spins must be 0 or 1"))),
        })
        .collect::<Result<_, _>>()?;
    if spins.len() != num_ions {
        return Err(input(format!(
            "initial state '{text}' has {} spins, schedule has {num_ions} ions",
            spins.len()
        )));
    }
    let q = q
        .trim()
        .parse()
        .map_err(|_| input(format!("initial state '{text}': bad phonon number")))?;
    Ok(RegisterBasisState::new(spins, q))
}

fn parse_subspace(text: &str) -> Result<CsSpec, Failure> {
    if !text.trim().starts_with("cs:") {
        return Err(input(format!("subspace '{text}': expected cs:low,high")));
    }
    Ok(parse_cs(text)?)
}

fn angle_arg(name: &str, text: &str) -> Result<Angle, Failure> {
    Angle::parse(text).map_err(|e| input(format!("--{name}: {e}")))
}

fn matrix_text(m: &ndarray::Array2<Complex64>, labels: &[String]) -> String {
    let cells: Vec<Vec<String>> = m.rows().into_iter().map(|r| r.iter().map(|z| complex(*z)).collect()).collect();
    let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
    let lw = labels.iter().map(|s| s.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (label, row) in labels.iter().zip(&cells) {
        out.push_str(&format!("  {label:<lw$}"));
        for c in row {
            out.push_str(&format!("  {c:>width$}"));
        }
        out.push('\n');
    }
    out
}

fn matrix_json(m: &ndarray::Array2<Complex64>) -> Value {
    Value::Array(
        m.rows()
            .into_iter()
            .map(|r| Value::Array(r.iter().map(|z| json!([z.re, z.im])).collect()))
            .collect(),
    )
}

fn pairs_to_matrix(rows: &[Vec<[f64; 2]>]) -> ndarray::Array2<Complex64> {
    let n = rows.len();
    ndarray::Array2::from_shape_fn((n, n), |(r, c)| Complex64::new(rows[r][c][0], rows[r][c][1]))
}

fn simulate(fmt: OutputFormat, path: PathBuf, initial: &str, cutoff: Option<usize>, auto: bool) -> Run {
    let s = load(&path)?;
    let cutoff = cutoff.unwrap_or(s.cutoff);
    let start = parse_state(initial, s.num_ions)?;
    let psi = StateVector::basis(&start, s.num_ions, cutoff)?;
    let mode = if auto { TruncationMode::Auto } else { TruncationMode::Strict };
    let out = run_schedule(&s, &psi, mode)?;
    let support = out.support(1e-12);
    let mut text = format!(
        "schedule: {}\ninitial: {start}\ncutoff: {} (final {})\nnorm: {}\n",
        s.label,
        cutoff,
        out.cutoff,
        num(out.norm())
    );
    let mut rows = Vec::new();
    for (state, amp) in &support {
        text.push_str(&format!(
            "  {state}  {}  probability {}\n",
            complex(*amp),
            num(amp.norm_sqr())
        ));
        rows.push(json!({"state": state.to_string(), "amplitude": [amp.re, amp.im], "probability": amp.norm_sqr()}));
    }
    emit(
        fmt,
        text,
        json!({"schedule": s.label, "initial": start.to_string(), "cutoff": cutoff,
               "final_cutoff": out.cutoff, "norm": out.norm(), "amplitudes": rows}),
    );
    Ok(())
}

fn unitary(fmt: OutputFormat, path: PathBuf, subspace: Option<String>, cutoff: Option<usize>) -> Run {
    let s = load(&path)?;
    let cutoff = cutoff.unwrap_or(s.cutoff);
    match subspace {
        Some(spec) => {
            let cs = parse_subspace(&spec)?;
            let levels = cs.levels();
            let inputs = subspace_indices(s.num_ions, cutoff, &levels)?;
            let op = checked_schedule_unitary(&s, cutoff, &inputs)?;
            let (m, leak) = subspace_matrix(&op, &levels)?;
            let labels: Vec<String> = (0..m.nrows()).map(|i| subspace_label(s.num_ions, &levels, i)).collect();
            let text = format!(
                "schedule: {}\ncutoff: {cutoff}\nsubspace: cs:{cs}\nleakage: {}\n{}",
                s.label,
                num(leak),
                matrix_text(&m, &labels)
            );
            emit(
                fmt,
                text,
                json!({"schedule": s.label, "cutoff": cutoff, "subspace": levels, "basis": labels,
                       "leakage": leak, "matrix": matrix_json(&m)}),
            );
        }
        None => {
            let op = schedule_unitary(&s, cutoff)?;
            let labels = (0..op.dim())
                .map(|i| basis_state(i, s.num_ions, cutoff).map(|b| b.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            let text = format!(
                "schedule: {}\ncutoff: {cutoff}\nunitarity error: {}\n{}",
                s.label,
                num(op.unitarity_error()),
                matrix_text(&op.matrix, &labels)
            );
            emit(
                fmt,
                text,
                json!({"schedule": s.label, "cutoff": cutoff, "basis": labels,
                       "incomplete_pairs": op.incomplete_pairs, "matrix": matrix_json(&op.matrix)}),
            );
        }
    }
    Ok(())
}

fn synthesize(args: SynthesizeArgs) -> Run {
    let con: Construction = match args.gate {
        Gate::Cnot {
            method,
            control,
            target,
            phi,
            phi2,
        } => {
            let phi = angle_arg("phi", &phi)?;
            let phi2 = angle_arg("phi2", &phi2)?;
            match method {
                Method::Sideband1 => cnot_first_sideband(control, target, &phi)?,
                Method::Sideband3 => cnot_third_sideband(control, target, &phi, &phi2)?,
                Method::Altcs2 => cnot_alt_cs(control, target, &phi)?,
                Method::Altcs7 => cnot_alt_cs_seventh(control, target, &phi, &phi2)?,
            }
        }
        Gate::Pgate { ion } => p_gate(ion),
        Gate::Uphi { phi, ion } => u_phi(ion, &angle_arg("phi", &phi)?, &solve_u_phi_angles()?)?,
        Gate::Swap { l, ion } => approx_swap(ion, l)?,
        Gate::Cz3 { ion, phi2 } => third_sideband_cz(ion, &angle_arg("phi2", &phi2)?),
    };
    let text = if args.describe {
        describe(&con)
    } else {
        schedule_to_string(&con.schedule)
    };
    match args.output {
        Some(path) => std::fs::write(&path, text).map_err(|e| input(format!("{}: {e}", path.display())))?,
        None => write_out(&text),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify(
    fmt: OutputFormat,
    path: PathBuf,
    target: Option<String>,
    cs: Option<String>,
    tol: f64,
    leak_tol: f64,
    cutoff: Option<usize>,
) -> Run {
    let s = load(&path)?;
    let inferred = target_from_label(&s.label);
    let target = match (target, &inferred) {
        (Some(t), _) => Target::parse(&t)?,
        (None, Some((t, _))) => t.clone(),
        (None, None) => return Err(input("no --target given and the schedule label does not name one")),
    };
    let cs = match (cs, inferred.and_then(|(_, c)| c)) {
        (Some(text), _) => parse_cs(&text)?,
        (None, Some(c)) => c,
        (None, None) => CsSpec::DEFAULT,
    };
    let cutoff = cutoff.unwrap_or(s.cutoff);
    let report = verify_schedule(&s, &target, cs, cutoff, tol, leak_tol)?;
    let m = pairs_to_matrix(&report.matrix);
    let labels: Vec<String> = (0..m.nrows())
        .map(|i| subspace_label(s.num_ions, &report.levels, i))
        .collect();
    let mut text = format!(
        "schedule: {}\ntarget: {}\ncs: {}\ncutoff: {}\ndistance: {} (tolerance {})\nleakage: {} (tolerance {})\n",
        report.label,
        report.target,
        report.cs,
        report.cutoff,
        num(report.distance),
        num(report.tolerance),
        num(report.leakage),
        num(report.leak_tolerance)
    );
    if let Some(table) = &report.truth_table {
        text.push_str("truth table:\n");
        for e in table {
            text.push_str(&format!(
                "  {} -> {}  phase {}\n",
                subspace_label(s.num_ions, &report.levels, e.input),
                subspace_label(s.num_ions, &report.levels, e.output),
                complex(Complex64::new(e.phase[0], e.phase[1]))
            ));
        }
    }
    text.push_str("matrix:\n");
    text.push_str(&matrix_text(&m, &labels));
    text.push_str(if report.pass { "result: PASS\n" } else { "result: FAIL\n" });
    let value = serde_json::to_value(&report).expect("report serializes");
    emit(fmt, text, value);
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn solve_angles(fmt: OutputFormat) -> Run {
    let s = solve_u_phi_angles()?;
    let mut text = String::new();
    for (name, v) in [("alpha", s.alpha), ("beta", s.beta), ("gamma", s.gamma), ("delta", s.delta)] {
        text.push_str(&format!("{name:<6} {} rad  {} deg\n", num(v), num(v.to_degrees())));
    }
    text.push_str(&format!(
        "residuals: {}\n",
        s.residuals.iter().map(|r| num(*r)).collect::<Vec<_>>().join(" ")
    ));
    let branch = if s.arcsin_branch == ionlogic::numerics::ArcsinBranch::Principal {
        "principal"
    } else {
        "supplement"
    };
    text.push_str(&format!(
        "arcsin branch: {branch}\norientation: {:+}\nemitted family: diag(e^(i phi), e^({}i sqrt(2) phi), 1, e^(-i phi))\n",
        s.orientation,
        if s.sign_branch > 0 { "+" } else { "-" }
    ));
    let value = serde_json::to_value(&s).expect("solution serializes");
    emit(fmt, text, value);
    Ok(())
}

fn find_swap(fmt: OutputFormat, max: u64, top: usize) -> Run {
    let found = find_swap_l(max)?;
    let shown = &found[..top.min(found.len())];
    let mut text = format!("{:>10}  {:<20}  {:<16}  convergent\n", "l", "|cos(l*pi*sqrt(2))|", "source");
    let mut rows = Vec::new();
    for r in shown {
        let source = match r.source {
            CandidateSource::Denominator => "denominator",
            CandidateSource::HalfDenominator => "half-denominator",
            CandidateSource::Sweep => "sweep",
        };
        let conv = r.convergent.map(|(p, q)| format!("{p}/{q}")).unwrap_or_else(|| "-".into());
        text.push_str(&format!("{:>10}  {:<20}  {:<16}  {conv}\n", r.l, num(r.value), source));
        rows.push(json!({"l": r.l, "value": r.value, "source": source, "convergent": r.convergent}));
    }
    let reference = swap_cosine(2378);
    text.push_str(&format!(
        "reference l=2378: {} (an estimate of about 1e-3 is quoted for this l; not asserted)\n",
        num(reference)
    ));
    emit(
        fmt,
        text,
        json!({"max": max, "candidates": rows, "reference": {"l": 2378, "value": reference}}),
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn physical(
    fmt: OutputFormat,
    mu: f64,
    field: f64,
    duration: f64,
    eta: f64,
    order: usize,
    laser_phase: f64,
    kind: Sideband,
    ion: usize,
) -> Run {
    let kind = match (order, kind) {
        (0, _) => PulseKind::Carrier,
        (_, Sideband::Blue) => PulseKind::Blue,
        (_, Sideband::Red) => PulseKind::Red,
    };
    let pp = PhysicalPulseParams {
        mu,
        field,
        duration,
        eta,
        order,
        laser_phase,
    };
    let p = physical_to_pulse(&pp, kind, ion)?;
    let theta = p.theta.radians();
    let phi = p.phi.radians();
    let back = pulse_duration(theta, order, mu, field, eta)?;
    let text = format!(
        "kind: {}\norder: {order}\ntheta: {} rad\nphi: {} rad\nduration for |theta|: {} s\n",
        kind.name(),
        num(theta),
        num(phi),
        num(back)
    );
    emit(
        fmt,
        text,
        json!({"kind": kind.name(), "order": order, "ion": ion, "theta": theta, "phi": phi, "duration": back}),
    );
    Ok(())
}

fn scan(fmt: OutputFormat, path: PathBuf, cutoffs: Vec<usize>, subspace: Option<String>, strict: bool) -> Run {
    let s = load(&path)?;
    let levels: Vec<usize> = match subspace {
        Some(spec) => parse_subspace(&spec)?.levels().to_vec(),
        None => match target_from_label(&s.label) {
            Some((t, cs)) => t.levels(cs.unwrap_or(CsSpec::DEFAULT)),
            None => CsSpec::DEFAULT.levels().to_vec(),
        },
    };
    let report = truncation_scan(&s, &cutoffs, &levels, strict)?;
    let mut text = format!(
        "schedule: {}\nlevels: {:?}\n{:>8}  {:<20}  {:<20}  status\n",
        report.label, report.levels, "cutoff", "leakage", "deviation"
    );
    for e in &report.entries {
        match &e.truncation_error {
            None => text.push_str(&format!(
                "{:>8}  {:<20}  {:<20}  ok\n",
                e.cutoff,
                num(e.leakage),
                num(e.deviation_from_last)
            )),
            Some(err) => text.push_str(&format!("{:>8}  {:<20}  {:<20}  {err}\n", e.cutoff, "-", "-")),
        }
    }
    text.push_str(&format!(
        "max pairwise deviation: {}\nminimal stable cutoff: {}\n",
        num(report.max_pairwise_deviation),
        report
            .minimal_stable_cutoff
            .map(|c| c.to_string())
            .unwrap_or_else(|| "none".into())
    ));
    let value = serde_json::to_value(&report).expect("report serializes");
    emit(fmt, text, value);
    Ok(())
}

fn run(cli: Cli) -> Run {
    let fmt = cli.format;
    match cli.command {
        Command::Simulate {
            schedule,
            initial,
            cutoff,
            strict: _,
            auto,
        } => simulate(fmt, schedule, &initial, cutoff, auto),
        Command::Unitary {
            schedule,
            subspace,
            cutoff,
        } => unitary(fmt, schedule, subspace, cutoff),
        Command::Synthesize(args) => synthesize(args),
        Command::Verify {
            schedule,
            target,
            cs,
            tol,
            leak_tol,
            cutoff,
        } => verify(fmt, schedule, target, cs, tol, leak_tol, cutoff),
        Command::SolveAngles => solve_angles(fmt),
        Command::FindSwapL { max, top } => find_swap(fmt, max, top),
        Command::Physical {
            mu,
            field,
            duration,
            eta,
            order,
            laser_phase,
            kind,
            ion,
        } => physical(fmt, mu, field, duration, eta, order, laser_phase, kind, ion),
        Command::Scan {
            schedule,
            cutoffs,
            subspace,
            strict,
        } => scan(fmt, schedule, cutoffs, subspace, strict),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
