//! Command-line front end: solves, envelope dumps, convergence studies and
//! the registered examples. Every output is a CSV in the `--out` directory.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser as ClapParser, Subcommand};

use crate::characteristics::{InitialData, Profile};
use crate::envelope::{build_envelope, oracle_envelope, ConvexEnvelope};
use crate::error::Error;
use crate::flux::{parse_flux_spec, FluxFunction, Parser, Polynomial};
use crate::io::{fmt_f64, write_csv};
use crate::solver::{
    jump_envelopes, solve_piecewise, solve_riemann_exact, solve_riemann_numerical,
    SolutionProfile,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Errors below this are treated as exact in convergence tables.
pub const EXACT_ERROR: f64 = 1e-14;
pub const DEFAULT_ORACLE_POINTS: usize = 100_000;
pub const DEFAULT_LADDER: &str = "10x2^5";

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::UnknownNamedFlux(_)
            | Error::InvalidInput(_)
            | Error::InvalidOrder(_)
            | Error::DegenerateStates(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, ClapParser)]
#[command(name = "conslaw", version, about = "Scalar conservation laws with non-convex flux")]
pub struct Cli {
    /// Flat `key: value` file supplying any flag not given on the command line.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and write profile.csv and shocks.csv.
    Solve(SolveArgs),
    /// Write the envelope of a flux between two states, plus a brute-force hull.
    Envelope(EnvelopeArgs),
    /// Shock-position convergence study for a registered example.
    Converge(ConvergeArgs),
    /// Run a registered example.
    Example(ExampleArgs),
}

#[derive(Debug, Args, Default)]
pub struct SolveArgs {
    /// e.g. `polynomial:[0,0,4,-4,1]`, `rational:[0,0,1]/[1,-2,2]`, `named:buckley-leverett{M:0.5}`
    #[arg(long)]
    pub flux: Option<String>,
    /// Riemann data `x0,uL,uR`.
    #[arg(long, allow_hyphen_values = true)]
    pub riemann: Option<String>,
    /// Box data `x0,x1,u_in,u_out`.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub box_data: Option<String>,
    /// Piece list `const:1 | -3 | tanh:-1,1,0,0 | 3 | const:-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub pieces: Option<String>,
    #[arg(long)]
    pub time: Option<f64>,
    /// Interpolating segments per curve piece.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Use the exact envelope solution (Riemann data only).
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct EnvelopeArgs {
    #[arg(long)]
    pub flux: Option<String>,
    /// `uL,uR`.
    #[arg(long, allow_hyphen_values = true)]
    pub states: Option<String>,
    /// Sample count of the brute-force hull.
    #[arg(long)]
    pub oracle_n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub example: Option<u32>,
    /// `AxB^K` for `A, A B, ..., A B^K`, or a comma list.
    #[arg(long)]
    pub ladder: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct ExampleArgs {
    #[arg(long)]
    pub id: Option<u32>,
    #[arg(long)]
    pub time: Option<f64>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Flat `key: value` configuration; `#` starts a comment line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

const CONFIG_KEYS: &[&str] = &[
    "flux", "riemann", "box", "pieces", "time", "nodes", "exact", "out", "states", "oracle-n",
    "example", "ladder", "id",
];

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(CliError::Config(format!(
                    "line {}: expected `key: value`",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("invalid value `{v}` for `{key}`"))),
        }
    }

    fn fill<T: std::str::FromStr>(&self, slot: &mut Option<T>, key: &str) -> CliResult<()> {
        if slot.is_none() {
            *slot = self.get(key)?;
        }
        Ok(())
    }
}

fn required<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Config(format!("missing --{flag}")))
}

/// Comma-separated numbers (fractions allowed).
pub fn parse_numbers(text: &str, expected: usize, what: &str) -> CliResult<Vec<f64>> {
    let mut p = Parser::new(text);
    let mut out = Vec::new();
    loop {
        out.push(p.number()?);
        p.skip_ws();
        match p.bump() {
            Some(',') => continue,
            None => break,
            Some(c) => {
                return Err(CliError::Config(format!(
                    "{what}: unexpected `{c}` at position {}",
                    p.pos - 1
                )))
            }
        }
    }
    if out.len() != expected {
        return Err(CliError::Config(format!(
            "{what}: expected {expected} numbers, got {}",
            out.len()
        )));
    }
    Ok(out)
}

/// Parses `profile | break | profile | ... | profile`.
pub fn parse_pieces(text: &str) -> CliResult<InitialData> {
    let parts: Vec<&str> = text.split('|').map(str::trim).collect();
    if parts.len().is_multiple_of(2) {
        return Err(CliError::Config(
            "pieces: expected alternating profiles and breakpoints".into(),
        ));
    }
    let mut pieces = Vec::new();
    let mut breaks = Vec::new();
    for (k, part) in parts.iter().enumerate() {
        if k % 2 == 1 {
            breaks.push(parse_numbers(part, 1, "pieces breakpoint")?[0]);
            continue;
        }
        let (kind, args) = part
            .split_once(':')
            .ok_or_else(|| CliError::Config(format!("pieces: `{part}` lacks `kind:`")))?;
        let profile = match kind.trim() {
            "const" => Profile::Constant(parse_numbers(args, 1, "const")?[0]),
            "poly" => {
                let n = args.split(',').count();
                Profile::Polynomial(Polynomial::new(parse_numbers(args, n, "poly")?))
            }
            "tanh" => {
                let v = parse_numbers(args, 4, "tanh amp,rate,center,offset")?;
                Profile::Tanh {
                    amp: v[0],
                    rate: v[1],
                    center: v[2],
                    offset: v[3],
                }
            }
            other => {
                return Err(CliError::Config(format!(
                    "pieces: unknown profile `{other}` (const, poly, tanh)"
                )))
            }
        };
        pieces.push(profile);
    }
    Ok(InitialData::new(breaks, pieces)?)
}

/// `AxB^K` or `n1,n2,...`; must be strictly increasing.
pub fn parse_ladder(text: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Config(format!("invalid ladder `{text}`"));
    let ladder: Vec<usize> = if let Some((a, rest)) = text.split_once('x') {
        let (b, k) = rest.split_once('^').ok_or_else(bad)?;
        let (a, b, k): (usize, usize, u32) = (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
            k.trim().parse().map_err(|_| bad())?,
        );
        (0..=k).map(|j| a * b.pow(j)).collect()
    } else {
        text.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<CliResult<_>>()?
    };
    if ladder.is_empty() || ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(format!(
            "ladder `{text}` must be non-empty and strictly increasing"
        )));
    }
    Ok(ladder)
}

/// Initial data of a registered example.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExampleData {
    Riemann { x0: f64, u_l: f64, u_r: f64 },
    Box { x0: f64, x1: f64, u_in: f64, u_out: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleSpec {
    pub id: u32,
    pub title: &'static str,
    pub flux: &'static str,
    pub data: ExampleData,
    pub time: f64,
    pub nodes: usize,
    /// Whether `example` also writes a convergence table.
    pub convergence: bool,
}

impl ExampleSpec {
    pub fn flux(&self) -> FluxFunction {
        parse_flux_spec(self.flux).expect("registered flux specs parse")
    }

    pub fn initial_data(&self) -> InitialData {
        match self.data {
            ExampleData::Riemann { x0, u_l, u_r } => InitialData::riemann(x0, u_l, u_r),
            ExampleData::Box {
                x0,
                x1,
                u_in,
                u_out,
            } => InitialData::box_data(x0, x1, u_in, u_out).expect("registered box is valid"),
        }
    }
}

pub const EXAMPLES: [ExampleSpec; 5] = [
    ExampleSpec {
        id: 1,
        title: "two shocks around a rarefaction",
        flux: "polynomial:[0,0,4,-4,1]",
        data: ExampleData::Riemann { x0: 0.0, u_l: 2.0, u_r: 0.0 },
        time: 1.0,
        nodes: 160,
        convergence: true,
    },
    ExampleSpec {
        id: 2,
        title: "standing shock",
        flux: "polynomial:[0,0,4,-4,1]",
        data: ExampleData::Riemann { x0: 0.0, u_l: 0.0, u_r: 2.0 },
        time: 1.0,
        nodes: 160,
        convergence: false,
    },
    ExampleSpec {
        id: 3,
        title: "shock between two rarefactions",
        flux: "polynomial:[0,0,3,-5/3,1/4]",
        data: ExampleData::Riemann { x0: 0.0, u_l: 0.0, u_r: 3.5 },
        time: 1.0,
        nodes: 160,
        convergence: true,
    },
    ExampleSpec {
        id: 4,
        title: "Buckley-Leverett rarefaction-shock",
        flux: "named:buckley-leverett{M:0.5}",
        data: ExampleData::Riemann { x0: 0.0, u_l: 1.0, u_r: 0.0 },
        time: 1.0,
        nodes: 160,
        convergence: true,
    },
    ExampleSpec {
        id: 5,
        title: "box data, lower and upper envelopes at once",
        flux: "polynomial:[0,0,3,-5/3,1/4]",
        data: ExampleData::Box { x0: 0.0, x1: 5.0, u_in: 5.0, u_out: 0.0 },
        time: 0.1,
        nodes: 160,
        convergence: false,
    },
];

pub fn example(id: u32) -> CliResult<&'static ExampleSpec> {
    EXAMPLES
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| CliError::Config(format!("unknown example {id} (1-5)")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub err: f64,
    /// Local `log2(err_prev / err) / log2(n / n_prev)`.
    pub order: Option<f64>,
}

/// Max shock-position error against the exact fan for each ladder entry.
pub fn converge(spec: &ExampleSpec, ladder: &[usize]) -> CliResult<Vec<ConvergenceRow>> {
    let ExampleData::Riemann { x0, u_l, u_r } = spec.data else {
        return Err(CliError::Config(format!(
            "example {} has no single exact Riemann fan",
            spec.id
        )));
    };
    let flux = spec.flux();
    let exact = solve_riemann_exact(&flux, u_l, u_r, x0, spec.time)?;
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in ladder {
        let num = solve_riemann_numerical(&flux, u_l, u_r, x0, spec.time, n)?;
        if num.shocks.len() != exact.shocks.len() {
            return Err(CliError::Numerical(Error::ProjectionFailure(format!(
                "n = {n}: {} shocks, exact solution has {}",
                num.shocks.len(),
                exact.shocks.len()
            ))));
        }
        let err = num
            .shocks
            .iter()
            .zip(&exact.shocks)
            .map(|(a, b)| (a.x_s - b.x_s).abs())
            .fold(0.0, f64::max);
        let order = rows.last().and_then(|prev| {
            (prev.err > EXACT_ERROR && err > EXACT_ERROR)
                .then(|| (prev.err / err).log2() / (n as f64 / prev.n as f64).log2())
        });
        rows.push(ConvergenceRow { n, err, order });
    }
    Ok(rows)
}

/// Least-squares slope of `-log err` against `log n`, ignoring exact rows.
pub fn fitted_order(rows: &[ConvergenceRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.err > EXACT_ERROR)
        .map(|r| ((r.n as f64).ln(), r.err.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), p| {
        (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx) * (p.0 - mx))
    });
    Some(-num / den)
}

pub fn write_convergence(path: &Path, rows: &[ConvergenceRow]) -> CliResult<()> {
    let lines: Vec<String> = rows
        .iter()
        .map(|r| {
            let order = r.order.map(fmt_f64).unwrap_or_default();
            format!("{},{},{}", r.n, fmt_f64(r.err), order)
        })
        .collect();
    Ok(write_csv(path, "n,err,order", &lines)?)
}

pub fn write_envelope(path: &Path, envs: &[&ConvexEnvelope]) -> CliResult<()> {
    let rows: Vec<String> = envs.iter().flat_map(|e| e.csv_rows()).collect();
    Ok(write_csv(path, crate::envelope::CSV_HEADER, &rows)?)
}

fn write_solution(out: &Path, sol: &SolutionProfile, log: &mut Vec<String>) -> CliResult<()> {
    sol.write_profile(&out.join("profile.csv"))?;
    sol.write_shocks(&out.join("shocks.csv"))?;
    log.push(format!(
        "t = {}: {} shock(s), mass drift {:.3e}",
        sol.t,
        sol.shocks.len(),
        sol.mass_drift()
    ));
    for s in &sol.shocks {
        log.push(format!(
            "  shock x_s = {:.12} u_top = {:.12} u_bot = {:.12} speed = {:.12}",
            s.x_s, s.u_top, s.u_bot, s.speed
        ));
    }
    Ok(())
}

fn write_jump_envelopes(
    out: &Path,
    flux: &FluxFunction,
    init: &InitialData,
    log: &mut Vec<String>,
) -> CliResult<()> {
    let envs = jump_envelopes(flux, init)?;
    if envs.len() > 1 {
        for (k, (_, env)) in envs.iter().enumerate() {
            write_envelope(&out.join(format!("envelope_jump{k}.csv")), &[env])?;
        }
    }
    let all: Vec<&ConvexEnvelope> = envs.iter().map(|(_, e)| e).collect();
    write_envelope(&out.join("envelope.csv"), &all)?;
    for (x, env) in &envs {
        log.push(format!(
            "  jump at x = {x}: {} envelope, {} segment(s)",
            env.side,
            env.segments.len()
        ));
    }
    Ok(())
}

fn run_solve(mut a: SolveArgs, cfg: &ConfigFile) -> CliResult<Vec<String>> {
    cfg.fill(&mut a.flux, "flux")?;
    cfg.fill(&mut a.riemann, "riemann")?;
    cfg.fill(&mut a.box_data, "box")?;
    cfg.fill(&mut a.pieces, "pieces")?;
    cfg.fill(&mut a.time, "time")?;
    cfg.fill(&mut a.nodes, "nodes")?;
    cfg.fill(&mut a.out, "out")?;
    if !a.exact {
        a.exact = cfg.get("exact")?.unwrap_or(false);
    }
    let flux = parse_flux_spec(&required(a.flux, "flux")?)?;
    let t = required(a.time, "time")?;
    let out = required(a.out, "out")?;
    let n = a.nodes.unwrap_or(160);
    let init = match (a.riemann, a.box_data, a.pieces) {
        (Some(r), None, None) => {
            let v = parse_numbers(&r, 3, "riemann x0,uL,uR")?;
            InitialData::riemann(v[0], v[1], v[2])
        }
        (None, Some(b), None) => {
            let v = parse_numbers(&b, 4, "box x0,x1,u_in,u_out")?;
            InitialData::box_data(v[0], v[1], v[2], v[3])?
        }
        (None, None, Some(p)) => parse_pieces(&p)?,
        _ => {
            return Err(CliError::Config(
                "give exactly one of --riemann, --box, --pieces".into(),
            ))
        }
    };
    let mut log = Vec::new();
    let sol = if a.exact {
        let jumps = init.jumps();
        match (init.pieces().len(), jumps.as_slice()) {
            (2, [(x0, ul, ur)]) => solve_riemann_exact(&flux, *ul, *ur, *x0, t)?,
            _ => return Err(CliError::Config("--exact needs Riemann data".into())),
        }
    } else {
        solve_piecewise(&flux, &init, t, n)?
    };
    write_solution(&out, &sol, &mut log)?;
    write_jump_envelopes(&out, &flux, &init, &mut log)?;
    Ok(log)
}

fn run_envelope(mut a: EnvelopeArgs, cfg: &ConfigFile) -> CliResult<Vec<String>> {
    cfg.fill(&mut a.flux, "flux")?;
    cfg.fill(&mut a.states, "states")?;
    cfg.fill(&mut a.oracle_n, "oracle-n")?;
    cfg.fill(&mut a.out, "out")?;
    let flux = parse_flux_spec(&required(a.flux, "flux")?)?;
    let v = parse_numbers(&required(a.states, "states")?, 2, "states uL,uR")?;
    let out = required(a.out, "out")?;
    let env = build_envelope(&flux, v[0], v[1])?;
    let oracle = oracle_envelope(&flux, v[0], v[1], a.oracle_n.unwrap_or(DEFAULT_ORACLE_POINTS))?;
    write_envelope(&out.join("envelope.csv"), &[&env])?;
    write_envelope(&out.join("envelope_oracle.csv"), &[&oracle])?;
    let mut log = vec![format!(
        "{} envelope on [{}, {}]: {} segment(s) (oracle: {})",
        env.side,
        env.interval.0,
        env.interval.1,
        env.segments.len(),
        oracle.segments.len()
    )];
    log.extend(env.csv_rows().into_iter().map(|r| format!("  {r}")));
    Ok(log)
}

fn run_converge(mut a: ConvergeArgs, cfg: &ConfigFile) -> CliResult<Vec<String>> {
    cfg.fill(&mut a.example, "example")?;
    cfg.fill(&mut a.ladder, "ladder")?;
    cfg.fill(&mut a.out, "out")?;
    let spec = example(required(a.example, "example")?)?;
    let ladder = parse_ladder(a.ladder.as_deref().unwrap_or(DEFAULT_LADDER))?;
    let out = required(a.out, "out")?;
    let rows = converge(spec, &ladder)?;
    write_convergence(&out.join("convergence.csv"), &rows)?;
    Ok(convergence_log(&rows))
}

fn convergence_log(rows: &[ConvergenceRow]) -> Vec<String> {
    let mut log: Vec<String> = rows
        .iter()
        .map(|r| {
            let order = r.order.map(|o| format!("{o:.2}")).unwrap_or_default();
            format!("  n = {:4}  err = {:.3e}  order = {order}", r.n, r.err)
        })
        .collect();
    log.push(match fitted_order(rows) {
        Some(p) => format!("fitted order: {p:.3}"),
        None => "fitted order: n/a (errors at round-off)".into(),
    });
    log
}

fn run_example(mut a: ExampleArgs, cfg: &ConfigFile) -> CliResult<Vec<String>> {
    cfg.fill(&mut a.id, "id")?;
    cfg.fill(&mut a.time, "time")?;
    cfg.fill(&mut a.nodes, "nodes")?;
    cfg.fill(&mut a.out, "out")?;
    let spec = example(required(a.id, "id")?)?;
    let out = required(a.out, "out")?;
    let t = a.time.unwrap_or(spec.time);
    let n = a.nodes.unwrap_or(spec.nodes);
    let flux = spec.flux();
    let init = spec.initial_data();
    let mut log = vec![format!("example {}: {}", spec.id, spec.title)];
    let sol = solve_piecewise(&flux, &init, t, n)?;
    write_solution(&out, &sol, &mut log)?;
    write_jump_envelopes(&out, &flux, &init, &mut log)?;
    if spec.convergence {
        let rows = converge(&ExampleSpec { time: t, ..*spec }, &parse_ladder(DEFAULT_LADDER)?)?;
        write_convergence(&out.join("convergence.csv"), &rows)?;
        log.extend(convergence_log(&rows));
    }
    Ok(log)
}

pub fn run(cli: Cli) -> CliResult<Vec<String>> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Solve(a) => run_solve(a, &cfg),
        Command::Envelope(a) => run_envelope(a, &cfg),
        Command::Converge(a) => run_converge(a, &cfg),
        Command::Example(a) => run_example(a, &cfg),
    }
}

/// Parses arguments, runs, prints, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(log) => {
            for line in log {
                println!("{line}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_lists() {
        assert_eq!(parse_numbers("0, 2,-1/2", 3, "x").unwrap(), vec![0.0, 2.0, -0.5]);
        assert!(parse_numbers("0,2", 3, "x").is_err());
        assert!(parse_numbers("0;2", 2, "x").is_err());
    }

    #[test]
    fn ladders() {
        assert_eq!(parse_ladder("10x2^5").unwrap(), vec![10, 20, 40, 80, 160, 320]);
        assert_eq!(parse_ladder("8,16,64").unwrap(), vec![8, 16, 64]);
        assert!(parse_ladder("16,8").is_err());
        assert!(parse_ladder("10x2").is_err());
    }

    #[test]
    fn piece_lists() {
        let d = parse_pieces("const:1 | -3 | tanh:-1,1,0,0 | 3 | const:-1").unwrap();
        assert_eq!(d.breaks(), &[-3.0, 3.0]);
        assert!((d.value(0.5) + 0.5f64.tanh()).abs() < 1e-15);
        assert!(parse_pieces("const:1 | 0").is_err());
        assert!(parse_pieces("wave:1 | 0 | const:0").is_err());
    }

    #[test]
    fn config_files() {
        let c = ConfigFile::parse("# run\nflux: polynomial:[0,0,1]\ntime: 0.5\n").unwrap();
        assert_eq!(c.get::<f64>("time").unwrap(), Some(0.5));
        assert_eq!(
            c.get::<String>("flux").unwrap().as_deref(),
            Some("polynomial:[0,0,1]")
        );
        assert!(ConfigFile::parse("colour: red").is_err());
        assert!(ConfigFile::parse("no separator").is_err());
        assert!(ConfigFile::parse("time: soon").unwrap().get::<f64>("time").is_err());
    }

    #[test]
    fn registry_parses() {
        for e in &EXAMPLES {
            let _ = e.flux();
            let _ = e.initial_data();
        }
        assert!(example(6).is_err());
    }

    #[test]
    fn fitted_order_of_exact_powers() {
        let rows: Vec<ConvergenceRow> = [10usize, 20, 40, 80]
            .iter()
            .map(|&n| ConvergenceRow {
                n,
                err: 3.0 * (n as f64).powi(-5),
                order: None,
            })
            .collect();
        assert!((fitted_order(&rows).unwrap() - 5.0).abs() < 1e-12);
        let exact = [ConvergenceRow {
            n: 10,
            err: 0.0,
            order: None,
        }; 3];
        assert_eq!(fitted_order(&exact), None);
    }
}
