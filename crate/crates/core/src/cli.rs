//! Command-line front end. [`dispatch`] runs one subcommand, prints a summary
//! and writes artifacts to the output directory; the return value is the
//! process exit status.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::graph::{Cut, InstancePair};
use crate::instances::{
    gen_expander_clique, gen_lollipop, gen_random, mix_instance, sdp_gap_mix, unmix_cut_check,
    MixParams, RandomSpec,
};
use crate::io::{parse_instance, write_instance};
use crate::oracle::{brute_force_opt, for_each_cut};
use crate::relaxations::{
    parse_witness, solve_goemans_linial, solve_leighton_rao, solve_spectral, verify_solution,
    write_witness, RelaxationKind, RelaxationValue, SolverConfig, Witness,
};
use crate::rounding::{
    round_rank1, round_rank1_via_approx, write_approx_certificate, write_certificate, RoundConfig,
};
use crate::stcut::{brute_force_min_st_cut, st_certificate, write_flow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_PROPERTY: i32 = 3;

/// Sparsest-cut relaxations, rounding and certificates.
#[derive(Debug, Parser)]
#[command(name = "sparsecut", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Directory for artifacts.
    #[arg(long, default_value = "sparsecut-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct TolArgs {
    #[arg(long, default_value_t = 1e-6)]
    pub solver_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub metric_tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_rounds: usize,
}

impl TolArgs {
    fn config(&self) -> Result<SolverConfig> {
        if !(self.solver_tol > 0.0 && self.metric_tol > 0.0 && self.max_rounds > 0) {
            return Err(Error::InvalidParameter("tolerances and rounds must be positive".into()));
        }
        Ok(SolverConfig {
            solver_tol: self.solver_tol,
            metric_tol: self.metric_tol,
            max_rounds: self.max_rounds,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Spectral,
    Lr,
    Sdp,
}

impl From<KindArg> for RelaxationKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Spectral => RelaxationKind::Spectral,
            KindArg::Lr => RelaxationKind::Lp,
            KindArg::Sdp => RelaxationKind::Sdp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoundMode {
    Rank1,
    Rank1Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Sandwich,
    Rounding,
    Stcut,
    Mixing,
    Lollipop,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a relaxation and write its witness.
    Solve {
        #[arg(long, value_enum)]
        kind: KindArg,
        instance: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Round the SDP for a rank-1 demand graph.
    Round {
        #[arg(value_enum)]
        mode: RoundMode,
        instance: PathBuf,
        /// Rank-1 demand graph file (an instance whose h lines are used).
        #[arg(long)]
        approx: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact minimum sparsity by enumeration.
    Oracle {
        instance: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Spectral s-t cut with its electrical flow (demand lines are ignored).
    Mincut {
        instance: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Mix the demand with the graph.
    Mix {
        instance: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        /// Also compare oracle and SDP values before and after.
        #[arg(long)]
        report: bool,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Recompute a witness's objective and constraint residuals.
    Verify {
        instance: PathBuf,
        witness: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        solver_tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a batch of checks and write a CSV.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    Lollipop {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    ExpanderClique {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long)]
        rank1: bool,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) => EXIT_PROPERTY,
        Error::Solver(_) | Error::EmbeddingBudget { .. } => EXIT_SOLVER,
        _ => EXIT_VALIDATION,
    }
}

/// Outcome of a command that ran to completion.
struct Outcome {
    summary: String,
    artifacts: Vec<(String, String)>,
    property_ok: bool,
}

impl Outcome {
    fn ok(summary: String, artifacts: Vec<(String, String)>) -> Self {
        Self {
            summary,
            artifacts,
            property_ok: true,
        }
    }
}

pub fn dispatch(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (out_dir, result) = run(&config.command);
    match result.and_then(|o| write_artifacts(out_dir, &o).map(|_| o)) {
        Ok(o) => {
            let _ = stdout.write_all(o.summary.as_bytes());
            if o.property_ok {
                EXIT_OK
            } else {
                let _ = writeln!(stderr, "property violated");
                EXIT_PROPERTY
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn write_artifacts(dir: &Path, o: &Outcome) -> Result<()> {
    if o.artifacts.is_empty() {
        return Ok(());
    }
    let io_err = |e: std::io::Error| Error::InvalidParameter(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io_err)?;
    for (name, body) in &o.artifacts {
        fs::write(dir.join(name), body).map_err(io_err)?;
    }
    Ok(())
}

fn read_instance(path: &Path) -> Result<InstancePair> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

fn run(cmd: &Command) -> (&Path, Result<Outcome>) {
    match cmd {
        Command::Solve { kind, instance, tol, out } => (&out.out, cmd_solve((*kind).into(), instance, tol)),
        Command::Round { mode, instance, approx, seed, tol, out } => {
            (&out.out, cmd_round(*mode, instance, approx.as_deref(), *seed, tol))
        }
        Command::Oracle { instance, out } => (&out.out, cmd_oracle(instance)),
        Command::Mincut { instance, s, t, out } => (&out.out, cmd_mincut(instance, *s, *t)),
        Command::Mix { instance, eps, delta, report, tol, out } => {
            (&out.out, cmd_mix(instance, *eps, *delta, *report, tol))
        }
        Command::Gen { kind } => match kind {
            GenKind::Lollipop { k, seed, out } => (&out.out, cmd_gen_lollipop(*k, *seed)),
            GenKind::ExpanderClique { n, d, seed, out } => {
                (&out.out, gen_expander_clique(*n, *d, *seed).map(gen_outcome))
            }
            GenKind::Random { n, density, rank1, seed, out } => {
                let spec = RandomSpec { n: *n, density: *density, rank1: *rank1 };
                (&out.out, gen_random(&spec, *seed).map(gen_outcome))
            }
        },
        Command::Verify { instance, witness, solver_tol, out } => {
            (&out.out, cmd_verify(instance, witness, *solver_tol))
        }
        Command::Suite { name, seed, count, max_n, tol, out } => {
            (&out.out, cmd_suite(*name, *seed, *count, *max_n, tol))
        }
    }
}

fn solve_kind(pair: &InstancePair, kind: RelaxationKind, config: &SolverConfig) -> Result<RelaxationValue> {
    match kind {
        RelaxationKind::Spectral => solve_spectral(pair),
        RelaxationKind::Lp => solve_leighton_rao(pair, config),
        RelaxationKind::Sdp => solve_goemans_linial(pair, config),
    }
}

fn cmd_solve(kind: RelaxationKind, instance: &Path, tol: &TolArgs) -> Result<Outcome> {
    let config = tol.config()?;
    let pair = read_instance(instance)?;
    let rv = solve_kind(&pair, kind, &config)?;
    let summary = format!(
        "{} value {} rounds {} active_cuts {}\n",
        kind.name(),
        rv.value,
        rv.rounds,
        rv.active_cuts
    );
    let file = match kind {
        RelaxationKind::Sdp => "points.txt".to_string(),
        other => format!("{}.witness", other.name()),
    };
    Ok(Outcome::ok(summary, vec![(file, write_witness(&rv))]))
}

fn cmd_round(
    mode: RoundMode,
    instance: &Path,
    approx: Option<&Path>,
    seed: u64,
    tol: &TolArgs,
) -> Result<Outcome> {
    let config = RoundConfig { solver: tol.config()?, seed };
    let pair = read_instance(instance)?;
    match mode {
        RoundMode::Rank1 => {
            if approx.is_some() {
                return Err(Error::InvalidParameter("--approx applies to rank1-approx".into()));
            }
            let cert = round_rank1(&pair, &config)?;
            let text = write_certificate(&cert);
            Ok(Outcome {
                summary: text.clone(),
                property_ok: cert.bound_holds,
                artifacts: vec![("certificate.txt".into(), text)],
            })
        }
        RoundMode::Rank1Approx => {
            let path = approx.ok_or_else(|| {
                Error::InvalidParameter("rank1-approx needs --approx <instance>".into())
            })?;
            let h_approx = read_instance(path)?.h;
            let cert = round_rank1_via_approx(&pair, &h_approx, &config)?;
            let text = write_approx_certificate(&cert);
            Ok(Outcome {
                summary: text.clone(),
                property_ok: cert.bound_holds,
                artifacts: vec![("certificate.txt".into(), text)],
            })
        }
    }
}

fn cmd_oracle(instance: &Path) -> Result<Outcome> {
    let pair = read_instance(instance)?;
    let (cut, rep) = brute_force_opt(&pair)?;
    let text = format!("cut {cut}\nsigma {}\ng_cut {}\nh_cut {}\n", rep.sigma, rep.g_cut, rep.h_cut);
    Ok(Outcome::ok(text.clone(), vec![("oracle.txt".into(), text)]))
}

fn cmd_mincut(instance: &Path, s: usize, t: usize) -> Result<Outcome> {
    let pair = read_instance(instance)?;
    let cert = st_certificate(&pair.g, s, t)?;
    let summary = format!(
        "epsilon {}\ncut {}\ncut_fraction {}\nflow_value {}\nratio {}\nratio_bound {}\n",
        cert.epsilon(),
        cert.cut,
        cert.cut_fraction,
        cert.flow.value,
        cert.ratio,
        cert.ratio_bound
    );
    Ok(Outcome {
        summary,
        property_ok: cert.holds,
        artifacts: vec![("flow.txt".into(), write_flow(&cert))],
    })
}

fn cmd_mix(instance: &Path, eps: f64, delta: f64, report: bool, tol: &TolArgs) -> Result<Outcome> {
    let pair = read_instance(instance)?;
    let p = MixParams::new(eps, delta)?;
    if report {
        let (mixed, r) = sdp_gap_mix(&pair, &p, &tol.config()?)?;
        let text = format!(
            "eps {}\ndelta {}\noriginal_opt {}\noriginal_sdp {}\nmixed_opt {}\nmixed_sdp {}\ncarried_sdp {}\n",
            eps, delta, r.original_opt, r.original_sdp, r.mixed_opt, r.mixed_sdp, r.carried_sdp
        );
        return Ok(Outcome::ok(
            text.clone(),
            vec![("mixed.gp".into(), write_instance(&mixed)), ("gap.txt".into(), text)],
        ));
    }
    let mixed = mix_instance(&pair, &p)?;
    Ok(Outcome::ok(
        format!("mixed instance with n {}\n", mixed.n()),
        vec![("mixed.gp".into(), write_instance(&mixed))],
    ))
}

fn gen_outcome(pair: InstancePair) -> Outcome {
    Outcome::ok(
        format!("generated instance with n {}\n", pair.n()),
        vec![("instance.gp".into(), write_instance(&pair))],
    )
}

fn cmd_gen_lollipop(k: usize, seed: u64) -> Result<Outcome> {
    let l = gen_lollipop(k, seed)?;
    let ratio = crate::relaxations::spectral_ratio(&l.pair, &l.witness);
    let rv = RelaxationValue {
        value: ratio,
        witness: Witness::Spectral(l.witness.clone()),
        rounds: 0,
        active_cuts: 0,
    };
    Ok(Outcome::ok(
        format!("generated lollipop with k {k}, witness ratio {ratio}\n"),
        vec![
            ("instance.gp".into(), write_instance(&l.pair)),
            ("witness.txt".into(), write_witness(&rv)),
        ],
    ))
}

/// Claimed value from a `# <kind> value <v>` header line.
fn claimed_value(text: &str) -> Option<f64> {
    text.lines().find_map(|l| {
        let tok: Vec<&str> = l.trim_start_matches('#').split_whitespace().collect();
        match tok.as_slice() {
            [_, "value", v] if l.starts_with('#') => v.parse().ok(),
            _ => None,
        }
    })
}

fn cmd_verify(instance: &Path, witness: &Path, solver_tol: f64) -> Result<Outcome> {
    let pair = read_instance(instance)?;
    let text = fs::read_to_string(witness)
        .map_err(|e| Error::InvalidParameter(format!("{}: {e}", witness.display())))?;
    let w = parse_witness(&text, pair.n())?;
    let config = SolverConfig { solver_tol, ..SolverConfig::default() };
    let mut rv = RelaxationValue { value: 0.0, witness: w, rounds: 0, active_cuts: 0 };
    rv.value = match claimed_value(&text) {
        Some(v) => v,
        None => verify_solution(&pair, &rv, &config).objective,
    };
    let rep = verify_solution(&pair, &rv, &config);
    let mut out = String::new();
    writeln!(out, "kind {}", rv.kind().name()).unwrap();
    writeln!(out, "claimed {}", rv.value).unwrap();
    writeln!(out, "objective {}", rep.objective).unwrap();
    for (name, r) in &rep.checks {
        writeln!(out, "residual {name} {r}").unwrap();
    }
    writeln!(out, "tolerance {}", rep.tolerance).unwrap();
    writeln!(out, "pass {}", rep.pass).unwrap();
    Ok(Outcome {
        summary: out.clone(),
        property_ok: rep.pass,
        artifacts: vec![("verify.txt".into(), out)],
    })
}

/// Per-instance seed of a suite run.
pub fn derive_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (i as u64).wrapping_add(1).wrapping_mul(0xBF58_476D_1CE4_E5B9)
}

pub const CSV_HEADER: &str = "id,n,opt,spectral,lr,sdp,rounded_sigma,bound,bound_holds";

#[derive(Debug, Clone, Default)]
struct Row {
    id: usize,
    n: usize,
    opt: Option<f64>,
    spectral: Option<f64>,
    lr: Option<f64>,
    sdp: Option<f64>,
    rounded: Option<f64>,
    bound: Option<f64>,
    holds: bool,
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl Row {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.id,
            self.n,
            cell(self.opt),
            cell(self.spectral),
            cell(self.lr),
            cell(self.sdp),
            cell(self.rounded),
            cell(self.bound),
            self.holds
        )
    }
}

const SANDWICH_TOL: f64 = 1e-6;

fn suite_n(i: usize, max_n: usize) -> usize {
    4 + i % (max_n - 3)
}

fn sandwich_row(id: usize, seed: u64, max_n: usize, config: &SolverConfig) -> Result<Row> {
    let n = suite_n(id, max_n);
    let pair = gen_random(&RandomSpec { n, density: 0.4, rank1: id % 2 == 0 }, seed)?;
    let opt = brute_force_opt(&pair)?.1.sigma;
    let spectral = solve_spectral(&pair)?.value;
    let lr = solve_leighton_rao(&pair, config)?.value;
    let sdp = solve_goemans_linial(&pair, config)?.value;
    let holds = spectral <= sdp + SANDWICH_TOL && sdp <= opt + SANDWICH_TOL && lr <= opt + SANDWICH_TOL;
    Ok(Row { id, n, opt: Some(opt), spectral: Some(spectral), lr: Some(lr), sdp: Some(sdp), bound: Some(opt), holds, ..Row::default() })
}

fn rounding_row(id: usize, seed: u64, max_n: usize, config: &SolverConfig) -> Result<Row> {
    let n = suite_n(id, max_n);
    let pair = gen_random(&RandomSpec { n, density: 0.4, rank1: true }, seed)?;
    let opt = brute_force_opt(&pair)?.1.sigma;
    let cert = round_rank1(&pair, &RoundConfig { solver: *config, seed })?;
    let sigma = cert.report.sigma;
    let bound = cert.sqrt_bound();
    Ok(Row {
        id,
        n,
        opt: Some(opt),
        sdp: Some(cert.relax_value),
        rounded: Some(sigma),
        bound: Some(bound),
        holds: cert.sqrt_bound_holds() && sigma >= opt - 1e-9,
        ..Row::default()
    })
}

fn stcut_row(id: usize, seed: u64, max_n: usize) -> Result<Row> {
    let n = suite_n(id, max_n);
    let pair = gen_random(&RandomSpec { n, density: 0.3, rank1: false }, seed)?;
    let (s, t) = (0, n - 1);
    let cert = st_certificate(&pair.g, s, t)?;
    let eps = cert.epsilon();
    let mincut = if n <= 16 { Some(brute_force_min_st_cut(&pair.g, s, t)?.1) } else { None };
    let dominated = mincut.is_none_or(|m| eps <= m + 1e-12);
    Ok(Row {
        id,
        n,
        opt: mincut,
        spectral: Some(eps),
        rounded: Some(cert.cut_fraction),
        bound: Some(eps.sqrt()),
        holds: cert.holds && dominated,
        ..Row::default()
    })
}

fn mixing_row(id: usize, seed: u64, max_n: usize) -> Result<Row> {
    let n = suite_n(id, max_n);
    let pair = gen_random(&RandomSpec { n, density: 0.4, rank1: false }, seed)?;
    let opt = brute_force_opt(&pair)?.1.sigma;
    if !(opt > 0.0 && opt <= 1.0) {
        return Ok(Row { id, n, opt: Some(opt), holds: true, ..Row::default() });
    }
    let p = MixParams::new(opt, (2.0 * opt).min(1.0))?;
    let mixed = mix_instance(&pair, &p)?;
    let mixed_opt = brute_force_opt(&mixed)?.1.sigma;
    let mut implication = true;
    let mut first_err = None;
    for_each_cut(n, |bits| {
        match unmix_cut_check(&pair, &p, &Cut::from_bits(n, bits)) {
            Ok(r) => implication &= !r.antecedent || r.original_sigma <= p.ratio() + 1e-9,
            Err(e) => first_err = first_err.take().or(Some(e)),
        }
    })?;
    if let Some(e) = first_err {
        return Err(e);
    }
    Ok(Row {
        id,
        n,
        opt: Some(opt),
        rounded: Some(mixed_opt),
        bound: Some(p.delta),
        holds: mixed_opt <= p.delta + 1e-9 && implication,
        ..Row::default()
    })
}

/// Lollipop rows for `k = 4, 8, ..` while `2k <= 64`; the bound is twice the
/// constant fitted at `k = 4`.
fn lollipop_rows(seed: u64, count: usize) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let mut c = None;
    let mut k = 4;
    for id in 0..count.clamp(1, 4) {
        let l = gen_lollipop(k, derive_seed(seed, id))?;
        let spectral = solve_spectral(&l.pair)?.value;
        let witness = crate::relaxations::spectral_ratio(&l.pair, &l.witness);
        let c4 = *c.get_or_insert(k as f64 * spectral);
        let opt = if 2 * k <= 16 { Some(brute_force_opt(&l.pair)?.1.sigma) } else { None };
        rows.push(Row {
            id,
            n: 2 * k,
            opt,
            spectral: Some(spectral),
            rounded: Some(witness),
            bound: Some(2.0 * c4 / k as f64),
            holds: k as f64 * spectral <= 2.0 * c4 + 1e-12 && opt.is_none_or(|o| o >= 0.1),
            ..Row::default()
        });
        k *= 2;
    }
    Ok(rows)
}

fn cmd_suite(name: SuiteName, seed: u64, count: usize, max_n: usize, tol: &TolArgs) -> Result<Outcome> {
    let config = tol.config()?;
    if count == 0 {
        return Err(Error::InvalidParameter("--count must be positive".into()));
    }
    if !(4..=crate::oracle::ORACLE_MAX_N).contains(&max_n) {
        return Err(Error::InvalidParameter(format!(
            "--max-n must lie in 4..={}",
            crate::oracle::ORACLE_MAX_N
        )));
    }
    let rows: Vec<Row> = match name {
        SuiteName::Lollipop => lollipop_rows(seed, count)?,
        _ => (0..count)
            .map(|i| {
                let s = derive_seed(seed, i);
                match name {
                    SuiteName::Sandwich => sandwich_row(i, s, max_n, &config),
                    SuiteName::Rounding => rounding_row(i, s, max_n, &config),
                    SuiteName::Stcut => stcut_row(i, s, max_n),
                    SuiteName::Mixing => mixing_row(i, s, max_n),
                    SuiteName::Lollipop => unreachable!(),
                }
            })
            .collect::<Result<_>>()?,
    };
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv());
        csv.push('\n');
    }
    let failed = rows.iter().filter(|r| !r.holds).count();
    let label = format!("{name:?}").to_lowercase();
    let summary = format!("suite {label}: {} instances, {failed} failed\n", rows.len());
    Ok(Outcome {
        summary,
        property_ok: failed == 0,
        artifacts: vec![(format!("{label}.csv"), csv)],
    })
}
