use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wigner_bell::bell::{
    bell_cglmp, bell_compact, bell_qutrit_noncharacter, cglmp_lhv_bound, cglmp_mode_sum,
    cglmp_probability_functional, qubit_chsh_t, BellOperator, CglmpConfig,
};
use wigner_bell::bounds::{
    build_c, lhv_anneal_with_progress, lhv_exact, lhv_exact_generic, nc_bound, AnnealConfig,
    LhvStrategy, Proposal, SolverResult,
};
use wigner_bell::field::{PrimeDim, RationalExponent};
use wigner_bell::operators::{bell_state, cube_unitary, rotated_bell, t_gate, CubeParams, Side};
use wigner_bell::phase_space::{
    c_min, characteristic_fn, extremal_character_scan, max_negativity, negativity_volume,
    wigner_fn, wigner_rotated_bell_closed, PhaseSpaceTable,
};
use wigner_bell::table::{table1_row, Table1Row};
use wigner_bell::{round_sig, Error};

#[derive(Parser)]
#[command(
    name = "wigner-bell",
    version,
    about = "Qudit Wigner-function Bell operators and their classical bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extremal-value table: one row per dimension.
    Table1 {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true, value_parser = parse_dim)]
        dims: Vec<PrimeDim>,
        #[command(flatten)]
        anneal: AnnealArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Local-hidden-variable bound of a Bell operator.
    Bounds {
        #[arg(long, value_parser = parse_dim)]
        d: PrimeDim,
        #[arg(long, value_enum, default_value_t = BellKind::RotatedCube)]
        bell: BellKind,
        #[arg(long, value_enum, default_value_t = Solver::Exact)]
        solver: Solver,
        #[command(flatten)]
        cube: CubeArgs,
        #[command(flatten)]
        anneal: AnnealArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form Wigner table of the cube-rotated Bell state with a summary.
    Wigner {
        #[arg(long, value_parser = parse_dim)]
        d: PrimeDim,
        #[command(flatten)]
        cube: CubeArgs,
        /// Where to write the table; the summary goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Rational-phase CGLMP-type operator: classical bound and quantum values.
    Cglmp {
        #[arg(long, value_parser = parse_dim)]
        d: PrimeDim,
        /// `q0,q1,p0,p1` as integers or fractions.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rational)]
        offsets: Option<Vec<RationalExponent>>,
        /// `γ_1, …, γ_{d−1}`; defaults to the ramp.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<f64>>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Character-sum scan and negativity maximum per dimension.
    Scan {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true, value_parser = parse_dim)]
        dims: Vec<PrimeDim>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BellKind {
    RotatedCube,
    CompactCube,
    QutritNoncharacter,
    QubitChsh,
    Cglmp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Solver {
    Exact,
    Anneal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProposalArg {
    Inclusive,
    Alternative,
}

#[derive(Args)]
struct CubeArgs {
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    gamma: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    z: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    eps: i64,
}

#[derive(Args)]
struct AnnealArgs {
    #[arg(long, default_value_t = 10_000)]
    restarts: usize,
    #[arg(long, default_value_t = 100)]
    iters: usize,
    #[arg(long, default_value_t = 1.5)]
    t0: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ProposalArg::Inclusive)]
    proposal: ProposalArg,
    /// Report `wall_ms` as 0 so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

impl AnnealArgs {
    fn config(&self) -> AnnealConfig {
        AnnealConfig {
            restarts: self.restarts,
            iters: self.iters,
            t0: self.t0,
            seed: self.seed,
            proposal: match self.proposal {
                ProposalArg::Inclusive => Proposal::Inclusive,
                ProposalArg::Alternative => Proposal::Alternative,
            },
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_dim(s: &str) -> Result<PrimeDim, String> {
    let v: u64 = s
        .trim()
        .parse()
        .map_err(|e| format!("{s:?} is not an integer: {e}"))?;
    PrimeDim::new(v).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<RationalExponent, String> {
    s.trim()
        .parse::<RationalExponent>()
        .map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Compute(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPrime(_) | Error::Domain(_) | Error::Validation(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn r12(x: f64) -> f64 {
    round_sig(x, 12)
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) => Ok(Box::new(File::create(p).map_err(|e| io_error(p, e))?)),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

/// Writes records as a JSON value (array when `many`) or as CSV with a header row.
fn emit<T: Serialize>(records: &[T], many: bool, out: &OutputArgs) -> CliResult<()> {
    let path = out.out.as_deref();
    let w = sink(path)?;
    let label = path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    match out.format {
        Format::Json => {
            let mut w = w;
            let res = if many {
                serde_json::to_writer_pretty(&mut w, records)
            } else {
                serde_json::to_writer_pretty(&mut w, &records[0])
            };
            res.map_err(|e| io_error(&label, e))?;
            writeln!(w).map_err(|e| io_error(&label, e))
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            for r in records {
                c.serialize(r).map_err(|e| io_error(&label, e))?;
            }
            c.flush().map_err(|e| io_error(&label, e))
        }
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct SolverCsv {
    d: u64,
    method: String,
    bound: f64,
    heuristic: bool,
    alpha: String,
    beta: String,
    restarts: Option<usize>,
    seed: Option<u64>,
    wall_ms: u64,
}

fn cmd_table1(dims: &[PrimeDim], anneal: &AnnealArgs, out: &OutputArgs) -> CliResult<()> {
    let cfg = anneal.config();
    let mut rows = Vec::new();
    for &d in dims {
        eprintln!("table1: d = {}", d.get());
        let r = table1_row(d, &cfg)?;
        rows.push(Table1Row {
            max_w_scaled: r12(r.max_w_scaled),
            max_negativity: r12(r.max_negativity),
            min_w_scaled: r12(r.min_w_scaled),
            c_min: r12(r.c_min),
            b_lhv: r12(r.b_lhv),
            ..r
        });
    }
    emit(&rows, true, out)
}

fn generic_result(d: PrimeDim, bell: &BellOperator, start: Instant) -> CliResult<SolverResult> {
    let (bound, values) = lhv_exact_generic(bell)?;
    let mut parties = values.into_iter();
    Ok(SolverResult {
        d: d.get(),
        method: "exact".into(),
        bound,
        heuristic: false,
        strategy: LhvStrategy {
            alpha: parties.next().unwrap_or_default(),
            beta: parties.next().unwrap_or_default(),
        },
        restarts: None,
        seed: None,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

fn require_exact(solver: Solver, what: &str) -> CliResult<()> {
    if solver == Solver::Anneal {
        return Err(Failure::Usage(format!(
            "the annealing solver does not apply to {what}"
        )));
    }
    Ok(())
}

fn cmd_bounds(
    d: PrimeDim,
    bell: BellKind,
    solver: Solver,
    cube: &CubeArgs,
    anneal: &AnnealArgs,
    out: &OutputArgs,
) -> CliResult<()> {
    let start = Instant::now();
    let params = || CubeParams::new(cube.gamma, cube.z, cube.eps, d);
    let mut res = match bell {
        BellKind::RotatedCube => match solver {
            Solver::Exact => {
                let p = params()?;
                let st = rotated_bell(&cube_unitary(&p)?, Side::First)?;
                let (bound, strategy) = lhv_exact(&characteristic_fn(&st.projector())?)?;
                SolverResult {
                    d: d.get(),
                    method: "exact".into(),
                    bound,
                    heuristic: false,
                    strategy,
                    restarts: None,
                    seed: None,
                    wall_ms: start.elapsed().as_millis() as u64,
                }
            }
            Solver::Anneal => {
                if (cube.gamma, cube.z, cube.eps) != (1, 0, 0) {
                    return Err(Failure::Usage(
                        "the annealing solver covers γ = 1, z = ε = 0".into(),
                    ));
                }
                let cfg = anneal.config();
                let c = build_c(d)?;
                let step = (cfg.restarts / 10).max(1);
                let r = lhv_anneal_with_progress(&c, d, &cfg, |done| {
                    if done % step == 0 {
                        eprintln!("anneal d={}: {done}/{} restarts", d.get(), cfg.restarts);
                    }
                })?;
                SolverResult {
                    d: d.get(),
                    method: "anneal".into(),
                    bound: r.best,
                    heuristic: true,
                    strategy: r.strategy.to_lhv(d),
                    restarts: Some(cfg.restarts),
                    seed: Some(cfg.seed),
                    wall_ms: start.elapsed().as_millis() as u64,
                }
            }
        },
        BellKind::CompactCube => {
            require_exact(solver, "the compact operator")?;
            generic_result(d, &bell_compact(&params()?)?, start)?
        }
        BellKind::QutritNoncharacter => {
            require_exact(solver, "the qutrit non-character operator")?;
            if d.get() != 3 {
                return Err(Failure::Usage(
                    "the qutrit non-character operator needs --d 3".into(),
                ));
            }
            generic_result(d, &bell_qutrit_noncharacter(), start)?
        }
        BellKind::QubitChsh => {
            require_exact(solver, "the qubit operator")?;
            if d.get() != 2 {
                return Err(Failure::Usage("the qubit operator needs --d 2".into()));
            }
            generic_result(d, &qubit_chsh_t(), start)?
        }
        BellKind::Cglmp => {
            require_exact(solver, "the CGLMP-type operator")?;
            generic_result(d, &bell_cglmp(&CglmpConfig::standard(d), d)?, start)?
        }
    };
    if anneal.no_timing {
        res.wall_ms = 0;
    }
    let res = res.rounded();
    match out.format {
        Format::Json => emit(&[res], false, out),
        Format::Csv => emit(
            &[SolverCsv {
                d: res.d,
                method: res.method,
                bound: res.bound,
                heuristic: res.heuristic,
                alpha: join(&res.strategy.alpha),
                beta: join(&res.strategy.beta),
                restarts: res.restarts,
                seed: res.seed,
                wall_ms: res.wall_ms,
            }],
            false,
            out,
        ),
    }
}

#[derive(Serialize)]
struct WignerSummary {
    d: u64,
    gamma: u64,
    z: u64,
    eps: u64,
    max_w: f64,
    min_w: f64,
    d2_max_w: f64,
    d3_min_w: f64,
    negativity: f64,
    nc_bound: f64,
    /// Largest deviation from the matrix-level Wigner function, for `d ≤ 7`.
    oracle_diff: Option<f64>,
}

#[derive(Serialize)]
struct WignerCell {
    x1: u64,
    z1: u64,
    x2: u64,
    z2: u64,
    w: f64,
}

fn write_table(table: &PhaseSpaceTable, path: &Path, format: Format) -> CliResult<()> {
    let f = File::create(path).map_err(|e| io_error(path, e))?;
    match format {
        Format::Json => {
            let mut f = f;
            serde_json::to_writer(&mut f, table).map_err(|e| io_error(path, e))?;
            writeln!(f).map_err(|e| io_error(path, e))
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(f);
            let d = table.d();
            for (i, v) in table.values().iter().enumerate() {
                let u = wigner_bell::operators::MultiPoint::from_index(i, 2, d);
                let (a, b) = (u.points()[0], u.points()[1]);
                c.serialize(WignerCell {
                    x1: a.x.value(),
                    z1: a.z.value(),
                    x2: b.x.value(),
                    z2: b.z.value(),
                    w: r12(v.re),
                })
                .map_err(|e| io_error(path, e))?;
            }
            c.flush().map_err(|e| io_error(path, e))
        }
    }
}

fn cmd_wigner(d: PrimeDim, cube: &CubeArgs, out: Option<&Path>, format: Format) -> CliResult<()> {
    let p = CubeParams::new(cube.gamma, cube.z, cube.eps, d)?;
    let w = wigner_rotated_bell_closed(&p);
    let oracle_diff = if d.get() <= 7 {
        let u = if d.get() == 2 {
            t_gate()
        } else {
            cube_unitary(&p)?
        };
        let st = rotated_bell(&u, Side::First)?;
        Some(r12(w.max_abs_diff(&wigner_fn(&st.projector())?)))
    } else {
        None
    };
    if let Some(path) = out {
        write_table(&w, path, format)?;
    }
    let m = d.get() as f64;
    let summary = WignerSummary {
        d: d.get(),
        gamma: p.gamma.value(),
        z: p.z.value(),
        eps: p.eps.value(),
        max_w: r12(w.max_re()),
        min_w: r12(w.min_re()),
        d2_max_w: r12(m * m * w.max_re()),
        d3_min_w: r12(m * m * m * w.min_re()),
        negativity: r12(negativity_volume(&w)?),
        nc_bound: r12(nc_bound(&w)?),
        oracle_diff,
    };
    emit(&[summary], false, &OutputArgs { format, out: None })
}

#[derive(Serialize)]
struct CglmpReport {
    d: u64,
    offsets: String,
    weights: String,
    lhv_bound: f64,
    operator_value: f64,
    mode_sum: f64,
    probability_value: f64,
    residue: f64,
}

fn cmd_cglmp(
    d: PrimeDim,
    offsets: Option<Vec<RationalExponent>>,
    weights: Option<Vec<f64>>,
    out: &OutputArgs,
) -> CliResult<()> {
    let mut cfg = CglmpConfig::standard(d);
    if let Some(o) = offsets {
        let o: [RationalExponent; 4] = o.try_into().map_err(|v: Vec<_>| {
            Failure::Usage(format!("--offsets needs 4 values, got {}", v.len()))
        })?;
        cfg = CglmpConfig::new(o, cfg.weights, d)?;
    }
    if let Some(w) = weights {
        cfg = CglmpConfig::new(cfg.offsets(), w, d)?;
    }
    let op = bell_cglmp(&cfg, d)?;
    let phi = bell_state(d);
    let operator_value = op.expectation(&phi).re;
    let probability_value = cglmp_probability_functional(&cfg, &phi.projector())?;
    let report = CglmpReport {
        d: d.get(),
        offsets: cfg
            .offsets()
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        weights: cfg
            .weights
            .iter()
            .map(|w| r12(*w).to_string())
            .collect::<Vec<_>>()
            .join(" "),
        lhv_bound: r12(cglmp_lhv_bound(&cfg, d)),
        operator_value: r12(operator_value),
        mode_sum: r12(cglmp_mode_sum(&cfg, d).re),
        probability_value: r12(probability_value),
        residue: r12((probability_value - 2.0 - operator_value).abs()),
    };
    emit(&[report], false, out)
}

#[derive(Serialize)]
struct ScanRow {
    d: u64,
    d2_max_w: f64,
    d3_min_w: f64,
    argmax_a1: u64,
    argmax_a3: u64,
    argmin_a1: u64,
    argmin_a3: u64,
    max_n: f64,
    max_n_gamma: u64,
    c_min: f64,
}

fn cmd_scan(dims: &[PrimeDim], out: &OutputArgs) -> CliResult<()> {
    let mut rows = Vec::new();
    for &d in dims {
        eprintln!("scan: d = {}", d.get());
        let s = extremal_character_scan(d)?;
        let (n, g) = max_negativity(d)?;
        rows.push(ScanRow {
            d: d.get(),
            d2_max_w: r12(s.max_scaled),
            d3_min_w: r12(s.min_scaled),
            argmax_a1: s.argmax.0,
            argmax_a3: s.argmax.1,
            argmin_a1: s.argmin.0,
            argmin_a3: s.argmin.1,
            max_n: r12(n),
            max_n_gamma: g,
            c_min: r12(c_min(d)),
        });
    }
    emit(&rows, true, out)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Table1 { dims, anneal, out } => cmd_table1(&dims, &anneal, &out),
        Command::Bounds {
            d,
            bell,
            solver,
            cube,
            anneal,
            out,
        } => cmd_bounds(d, bell, solver, &cube, &anneal, &out),
        Command::Wigner {
            d,
            cube,
            out,
            format,
        } => cmd_wigner(d, &cube, out.as_deref(), format),
        Command::Cglmp {
            d,
            offsets,
            weights,
            out,
        } => cmd_cglmp(d, offsets, weights, &out),
        Command::Scan { dims, out } => cmd_scan(&dims, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) | Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
