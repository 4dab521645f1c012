//! Command dispatch for the `ksba` binary. Everything here returns the text
//! to print, so the commands are testable without spawning a process.

pub mod dot;

use std::fmt::Write;
use std::io::IsTerminal;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use ksba::algebra::{parse_poly, ProjPoint, Rat};
use ksba::groups::{orbit, same_orbit, verify_transposition_identity, GroupSpec};
use ksba::lattice::{catalog, pair, SurfaceModel, Verdict};
use ksba::replacement::{limit_stable_pair, singularity_summary, verify_stability, DegenerationSpec, StablePairModel};
use ksba::singularities::{classify_ade, milnor_number, CurveGerm};
use ksba::stability::{classify_stability, closed_orbit_type, normal_weights, Configuration, Kind};

#[derive(Parser, Debug)]
#[command(name = "ksba", version, about = "Exact stability, singularity and stable-limit computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Read the input from a file.
    #[arg(long, global = true, conflicts_with = "inline")]
    pub input: Option<PathBuf>,

    /// Take the input from the command line.
    #[arg(long, global = true)]
    pub inline: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[arg(long, global = true, default_value = "s8")]
    pub group: GroupSpec,

    /// Compare configurations up to SL2 as well as relabeling.
    #[arg(long, global = true)]
    pub mod_sl2: bool,

    /// Seed for commands that draw random inputs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// GIT stability of eight points, with the closed-orbit type if any.
    Classify,
    /// The orbit of a configuration under the chosen group.
    Orbit,
    /// Whether two configurations (separated by `;`) share an orbit.
    SameOrbit,
    /// Torus weights on the normal space at a closed-orbit configuration.
    Weights,
    /// The stable limit of a degeneration spec.
    Degenerate,
    /// Re-checks a stable limit, given as a model or a spec.
    Verify,
    /// ADE type and Milnor number of a plane curve germ at the origin.
    Singularity,
    /// The built-in intersection tables of the type c surfaces.
    Tables,
    /// The transposition identities for all crossing transpositions.
    CheckS8,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] ksba::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Lib(ksba::Error::Parse(_)) => 2,
            CliError::Lib(ksba::Error::Audit { .. }) => 4,
            CliError::Lib(ksba::Error::Internal(_)) => 5,
            CliError::Io { .. } => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// What a command produced: the text for stdout and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

struct Style {
    color: bool,
}

impl Style {
    fn from_env() -> Self {
        let disabled = std::env::var("KSBA_COLOR").is_ok_and(|v| v == "0");
        Style { color: !disabled && std::io::stdout().is_terminal() }
    }

    fn status(&self, ok: bool) -> String {
        match (ok, self.color) {
            (true, true) => "\x1b[32mPASS\x1b[0m".into(),
            (false, true) => "\x1b[31mFAIL\x1b[0m".into(),
            (true, false) => "PASS".into(),
            (false, false) => "FAIL".into(),
        }
    }
}

fn read_input(cli: &Cli) -> Result<Option<String>> {
    match (&cli.inline, &cli.input) {
        (Some(s), _) => Ok(Some(s.clone())),
        (None, Some(p)) => std::fs::read_to_string(p)
            .map(Some)
            .map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        (None, None) => Ok(None),
    }
}

fn require_input(cli: &Cli) -> Result<String> {
    read_input(cli)?.ok_or_else(|| CliError::Parse("this command needs --input PATH or --inline STRING".into()))
}

fn json_err(e: serde_json::Error) -> CliError {
    CliError::Parse(format!("invalid json: {e}"))
}

fn parse_point(tok: &str) -> Result<ProjPoint> {
    match tok {
        "inf" | "∞" => Ok(ProjPoint::infinity()),
        t => t.parse::<Rat>().map(ProjPoint::finite).map_err(|e| CliError::Parse(e.to_string())),
    }
}

/// A configuration as JSON (`[["a","b"], ...]` or `["p/q", ...]`) or as
/// comma- or space-separated values where `inf` is the point at infinity.
pub fn parse_configuration(s: &str) -> Result<Configuration> {
    let s = s.trim();
    if s.starts_with('[') {
        if let Ok(c) = serde_json::from_str::<Configuration>(s) {
            return Ok(c);
        }
        let vals: Vec<String> = serde_json::from_str(s).map_err(json_err)?;
        let pts = vals.iter().map(|v| parse_point(v.trim())).collect::<Result<Vec<_>>>()?;
        return eight(pts);
    }
    let pts = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_point)
        .collect::<Result<Vec<_>>>()?;
    eight(pts)
}

fn eight(pts: Vec<ProjPoint>) -> Result<Configuration> {
    if pts.len() != 8 {
        return Err(CliError::Parse(format!("expected 8 points, got {}", pts.len())));
    }
    Ok(Configuration::new(pts)?)
}

fn parse_pair(s: &str) -> Result<(Configuration, Configuration)> {
    #[derive(Deserialize)]
    struct Pair {
        first: Configuration,
        second: Configuration,
    }
    let t = s.trim();
    if t.starts_with('{') {
        let p: Pair = serde_json::from_str(t).map_err(json_err)?;
        return Ok((p.first, p.second));
    }
    match t.split_once(';') {
        Some((a, b)) => Ok((parse_configuration(a)?, parse_configuration(b)?)),
        None => Err(CliError::Parse("expected two configurations separated by `;`".into())),
    }
}

/// The spec schema `{"kind", "partition", "lambda"}`. Decoded here rather
/// than through the library's serde impl so that hypothesis violations keep
/// their error kind.
fn parse_spec(s: &str) -> Result<DegenerationSpec> {
    #[derive(Deserialize)]
    struct Raw {
        kind: Kind,
        partition: Vec<usize>,
        lambda: Vec<Rat>,
    }
    let r: Raw = serde_json::from_str(s.trim()).map_err(json_err)?;
    let n = r.lambda.len();
    let lambda: [Rat; 8] =
        r.lambda.try_into().map_err(|_| ksba::Error::DimensionMismatch { expected: 8, got: n })?;
    Ok(DegenerationSpec::new(r.kind, &r.partition, lambda)?)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn no_dot(cmd: Command) -> CliError {
    CliError::Unsupported(format!("--format dot is not available for {cmd:?}; use degenerate or verify"))
}

pub fn run(cli: &Cli) -> Result<Output> {
    let style = Style::from_env();
    if cli.format == Format::Dot && !matches!(cli.command, Command::Degenerate | Command::Verify) {
        return Err(no_dot(cli.command));
    }
    match cli.command {
        Command::Classify => classify(cli),
        Command::Orbit => orbit_cmd(cli),
        Command::SameOrbit => same_orbit_cmd(cli),
        Command::Weights => weights(cli),
        Command::Degenerate => degenerate(cli),
        Command::Verify => verify(cli, &style),
        Command::Singularity => singularity(cli),
        Command::Tables => tables(cli),
        Command::CheckS8 => check_s8(cli, &style),
    }
}

fn classify(cli: &Cli) -> Result<Output> {
    let c = parse_configuration(&require_input(cli)?)?;
    let class = classify_stability(&c);
    let t = closed_orbit_type(&c);
    Ok(Output::ok(match cli.format {
        Format::Json => to_json(&serde_json::json!({ "class": class, "closed_orbit_type": t })),
        _ => match t {
            Some(t) => format!("{class} ({t})\n"),
            None => format!("{class}\n"),
        },
    }))
}

fn orbit_cmd(cli: &Cli) -> Result<Output> {
    let c = parse_configuration(&require_input(cli)?)?;
    let o = orbit(&c, cli.group, cli.mod_sl2)?;
    Ok(Output::ok(match cli.format {
        Format::Json => to_json(&o),
        _ => {
            let mut s = format!("orbit size {}\n", o.len());
            for x in &o {
                let _ = writeln!(s, "{x}");
            }
            s
        }
    }))
}

fn same_orbit_cmd(cli: &Cli) -> Result<Output> {
    let (a, b) = parse_pair(&require_input(cli)?)?;
    let same = same_orbit(&a, &b, cli.group, cli.mod_sl2)?;
    Ok(Output::ok(match cli.format {
        Format::Json => to_json(&serde_json::json!({ "same_orbit": same })),
        _ => format!("{same}\n"),
    }))
}

fn weights(cli: &Cli) -> Result<Output> {
    let c = parse_configuration(&require_input(cli)?)?;
    let w = normal_weights(&c)?;
    Ok(Output::ok(match cli.format {
        Format::Json => to_json(&w),
        _ => format!("{}\n", w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")),
    }))
}

/// Rows are the basis, columns the basis followed by the named classes.
pub fn intersection_table(s: &SurfaceModel) -> String {
    let mut cols: Vec<String> = s.basis.clone();
    cols.extend(s.classes.iter().map(|(n, _)| n.clone()));
    let cell = |r: &str, c: &str| -> String {
        let (a, b) = (s.class(r).expect("basis name"), s.class(c).expect("column name"));
        pair(s, &a, &b).map(|v| v.to_string()).unwrap_or_else(|e| e.to_string())
    };
    let mut grid = vec![std::iter::once("·".to_string()).chain(cols.iter().cloned()).collect::<Vec<_>>()];
    for r in &s.basis {
        grid.push(std::iter::once(r.clone()).chain(cols.iter().map(|c| cell(r, c))).collect());
    }
    let widths: Vec<usize> =
        (0..=cols.len()).map(|j| grid.iter().map(|row| row[j].chars().count()).max().unwrap_or(0)).collect();
    let mut out = format!("{}\n", s.name);
    for row in &grid {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "  {}", line.join("  "));
    }
    let _ = writeln!(out, "  K = {}", s.canonical);
    for (n, c) in &s.classes {
        let _ = writeln!(out, "  {n} = {c}");
    }
    out
}

fn render_model(m: &StablePairModel) -> String {
    let mut s = String::new();
    if let Some(spec) = &m.spec {
        let _ = writeln!(s, "{spec}");
    }
    let _ = writeln!(s, "relabeling to normal form: {}", m.relabeling);
    for c in &m.components {
        let verdict = match &c.certificate.verdict {
            Verdict::AmpleCertified => "ample (certified)".to_string(),
            v => format!("{v:?}"),
        };
        let sing: Vec<String> =
            singularity_summary(&c.audit).iter().map(|(t, n)| format!("{n} {t}")).collect();
        let _ = writeln!(s, "component {} on {} ({})", c.label, c.surface.name, c.audit.ambient);
        let _ = writeln!(s, "  K + D + (1+ε)/2 B = {}: {verdict}", c.log_class);
        let sing = if sing.is_empty() { "none".to_string() } else { sing.join(", ") };
        let _ = writeln!(s, "  branch singularities: {sing}; lc: {}", c.audit.passes());
        if let Some(b) = &c.marked_invariant {
            let _ = writeln!(s, "  marked cross-ratio: {b}");
        }
        for line in intersection_table(&c.surface).lines() {
            let _ = writeln!(s, "  {line}");
        }
    }
    for c in &m.contracted {
        let _ = writeln!(s, "contracted {} on {}: log class {}, {}", c.label, c.surface.name, c.log_class, c.direction);
    }
    for e in &m.gluing {
        let _ = writeln!(s, "glued {} -- {} along {}", e.from, e.to, e.curve);
    }
    for p in &m.pipeline {
        let _ = writeln!(s, "step: {p}");
    }
    s
}

fn degenerate(cli: &Cli) -> Result<Output> {
    let spec = parse_spec(&require_input(cli)?)?;
    let m = limit_stable_pair(&spec)?;
    Ok(Output::ok(match cli.format {
        Format::Json => to_json(&m),
        Format::Dot => dot::gluing_graph(&m),
        Format::Text => render_model(&m),
    }))
}

fn verify(cli: &Cli, style: &Style) -> Result<Output> {
    let input = require_input(cli)?;
    let m = match serde_json::from_str::<StablePairModel>(input.trim()) {
        Ok(m) => m,
        Err(_) => limit_stable_pair(&parse_spec(&input)?)?,
    };
    let report = verify_stability(&m);
    let code = if report.passes() { 0 } else { 4 };
    for f in &report.failures {
        eprintln!("audit failure in {}: {}", f.component, f.item);
    }
    let text = match cli.format {
        Format::Json => to_json(&report),
        Format::Dot => dot::gluing_graph(&m),
        Format::Text => {
            let mut s = format!("{} stable pair\n", style.status(report.passes()));
            for f in &report.failures {
                let _ = writeln!(s, "  {}: {}", f.component, f.item);
            }
            s
        }
    };
    Ok(Output { text, code })
}

fn singularity(cli: &Cli) -> Result<Output> {
    let f = parse_poly(&require_input(cli)?)?;
    let germ = CurveGerm::new(f)?;
    let t = classify_ade(&germ);
    let mu = milnor_number(&germ);
    Ok(Output::ok(match cli.format {
        Format::Json => to_json(&serde_json::json!({ "type": t, "milnor_number": mu })),
        _ => format!("{t} (mu={mu})\n"),
    }))
}

const TABLE_IDS: [&str; 3] = ["Ex5.7-Y1", "Ex5.7-Y2", "Ex5.8-Y1"];

fn tables(cli: &Cli) -> Result<Output> {
    let models = TABLE_IDS.iter().map(|id| catalog(id)).collect::<ksba::Result<Vec<_>>>()?;
    Ok(Output::ok(match cli.format {
        Format::Json => to_json(&models),
        _ => models.iter().map(intersection_table).collect::<Vec<_>>().join("\n"),
    }))
}

#[derive(Serialize)]
struct S8Row {
    lambda: Vec<Rat>,
    transpositions: Vec<(usize, usize)>,
    failures: Vec<(usize, usize)>,
}

fn random_distinct(g: &mut ChaCha8Rng) -> [Rat; 8] {
    loop {
        let t: [Rat; 8] = std::array::from_fn(|_| Rat::new(g.gen_range(-30..=30), g.gen_range(1..=7)));
        if (0..8).all(|i| (i + 1..8).all(|j| t[i] != t[j])) {
            return t;
        }
    }
}

fn check_s8(cli: &Cli, style: &Style) -> Result<Output> {
    let tuples: Vec<[Rat; 8]> = match read_input(cli)? {
        Some(s) => {
            let c = parse_configuration(&s)?;
            let vals = c
                .points()
                .iter()
                .map(|p| p.value().cloned().ok_or_else(|| CliError::Parse("λ must be finite".into())))
                .collect::<Result<Vec<_>>>()?;
            vec![vals.try_into().expect("eight points")]
        }
        None => {
            let mut g = ChaCha8Rng::seed_from_u64(cli.seed.unwrap_or(0));
            (0..10).map(|_| random_distinct(&mut g)).collect()
        }
    };
    let crossing: Vec<(usize, usize)> = (1..=4).flat_map(|i| (5..=8).map(move |j| (i, j))).collect();
    let mut rows = Vec::new();
    for t in &tuples {
        let mut failures = Vec::new();
        for &(i, j) in &crossing {
            if !verify_transposition_identity(t, i, j)? {
                failures.push((i, j));
            }
        }
        rows.push(S8Row { lambda: t.to_vec(), transpositions: crossing.clone(), failures });
    }
    let ok = rows.iter().all(|r| r.failures.is_empty());
    let text = match cli.format {
        Format::Json => to_json(&rows),
        _ => {
            let mut s = String::new();
            for r in &rows {
                let l: Vec<String> = r.lambda.iter().map(|x| x.to_string()).collect();
                let held = r.transpositions.len() - r.failures.len();
                let _ = writeln!(
                    s,
                    "{} λ=({}): {held}/{} identities hold",
                    style.status(r.failures.is_empty()),
                    l.join(", "),
                    r.transpositions.len()
                );
            }
            s
        }
    };
    Ok(Output { text, code: if ok { 0 } else { 4 } })
}
