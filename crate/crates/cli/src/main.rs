//! `primo`: check, propagate, enumerate, solve and export `.primo` rule bases.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use primo::optimize::{
    decode, encode, ic, solve_exact, solve_heuristic, write_wcnf, EncodeError, Heuristic, SolveError,
};
use primo::parser::parse;
use primo::{
    detect_odd_loops, enumerate, solve_by_components, validate_graph, BoundsState, ComponentError, Graph, Labeling,
    LiteralId, Method, TNormFamily,
};

const EXIT_SEMANTIC: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "primo", version, about = "Defeasible reasoning with certainty bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate; report monotonic cycles and odd loops.
    Check { file: PathBuf },
    /// Print the propagated bounds and information content of every literal.
    Propagate { file: PathBuf },
    /// List admissible labelings, up to --max.
    Extensions { file: PathBuf },
    /// Select the preferred labeling.
    Solve { file: PathBuf },
    /// Write the weighted CNF instance (to -o, or standard output).
    Encode { file: PathBuf },
}

#[derive(Args, Debug)]
struct RunConfig {
    #[arg(long, value_enum, default_value_t = TNorm::Product, global = true)]
    tnorm: TNorm,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact, global = true)]
    method: MethodArg,
    #[arg(long, default_value_t = 8, global = true)]
    beam_width: usize,
    /// Largest number of labelings `extensions` prints.
    #[arg(long, default_value_t = 64, global = true)]
    max: usize,
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    /// Output path for `encode`.
    #[arg(short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Solve one strongly connected component at a time.
    #[arg(long, global = true)]
    components: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TNorm {
    Min,
    Product,
    Luka,
}

impl From<TNorm> for TNormFamily {
    fn from(t: TNorm) -> Self {
        match t {
            TNorm::Min => TNormFamily::MinMax,
            TNorm::Product => TNormFamily::ProductProbSum,
            TNorm::Luka => TNormFamily::Lukasiewicz,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Greedy,
    Beam,
}

/// `plain` separates fields with spaces, `records` with tabs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Records,
}

struct Out {
    sep: &'static str,
    text: String,
}

impl Out {
    fn new(format: Format) -> Self {
        let sep = match format {
            Format::Plain => " ",
            Format::Records => "\t",
        };
        Out {
            sep,
            text: String::new(),
        }
    }

    fn line(&mut self, fields: &[&dyn Display]) {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.text.push_str(self.sep);
            }
            self.text.push_str(&f.to_string());
        }
        self.text.push('\n');
    }

    fn blank(&mut self) {
        self.text.push('\n');
    }
}

/// Failure carrying an exit code; the message goes to standard error.
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn num(v: f64) -> String {
    primo::scalar::fixed6(v)
}

fn load(path: &Path, family: TNormFamily) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_IO, format!("error: cannot read {}: {e}", path.display())))?;
    let spec = parse::<f64>(&text).map_err(|e| {
        let lines: Vec<String> = e
            .diagnostics
            .iter()
            .map(|d| format!("{}:{d}", path.display()))
            .collect();
        fail(EXIT_SEMANTIC, lines.join("\n"))
    })?;
    spec.to_graph(family).map_err(|errors| {
        let lines: Vec<String> = errors.iter().map(|e| format!("{}: {e}", path.display())).collect();
        fail(EXIT_SEMANTIC, lines.join("\n"))
    })
}

fn cycle_text(g: &Graph, cycle: &[primo::Vertex]) -> String {
    cycle.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>().join(" -> ")
}

fn require_valid(g: &Graph) -> Result<(), Failure> {
    let report = validate_graph(g);
    if report.is_valid() {
        return Ok(());
    }
    let lines: Vec<String> = report
        .monotonic_cycles
        .iter()
        .map(|c| format!("error: monotonic cycle: {}", cycle_text(g, c)))
        .collect();
    Err(fail(EXIT_SEMANTIC, lines.join("\n")))
}

fn stable(g: &Graph) -> Result<BoundsState<'_, f64>, Failure> {
    let mut s = BoundsState::initialize(g);
    s.propagate()
        .map_err(|e| fail(EXIT_SEMANTIC, format!("error: propagation is inconsistent: {e}")))?;
    Ok(s)
}

/// Literals sorted by name, positive before negated.
fn sorted_literals(g: &Graph) -> Vec<LiteralId> {
    let mut ids: Vec<LiteralId> = g.literal_ids().collect();
    ids.sort_by(|&a, &b| g.literal(a).cmp(g.literal(b)));
    ids
}

fn labeling_lines(out: &mut Out, g: &Graph, lab: &Labeling<f64>) {
    for l in sorted_literals(g) {
        out.line(&[&"literal", &g.literal(l), &"lb", &num(lab.literal(g, l))]);
    }
}

fn check(g: &Graph, out: &mut Out) -> Result<(), Failure> {
    let report = validate_graph(g);
    out.line(&[&"literals", &g.literal_count()]);
    out.line(&[&"justifications", &g.justification_count()]);
    if report.is_valid() {
        out.line(&[&"monotonic cycles:", &"none"]);
    }
    for c in &report.monotonic_cycles {
        out.line(&[&"monotonic cycle:", &cycle_text(g, c)]);
    }
    let loops = detect_odd_loops(g);
    if loops.is_empty() {
        out.line(&[&"odd loops:", &"none"]);
    } else {
        out.line(&[&"odd loops:", &loops.len()]);
        for l in &loops {
            out.line(&[&"odd loop:", &cycle_text(g, &l.cycle)]);
        }
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(fail(EXIT_SEMANTIC, "error: graph has a monotonic cycle"))
    }
}

fn propagate(g: &Graph, out: &mut Out) -> Result<(), Failure> {
    require_valid(g)?;
    let s = stable(g)?;
    for l in sorted_literals(g) {
        let iv = s.literal_interval(l);
        out.line(&[
            &"literal",
            &g.literal(l),
            &"lb-",
            &num(iv.lo),
            &"lb+",
            &num(iv.hi),
            &"ic",
            &num(ic(&s, l)),
        ]);
    }
    Ok(())
}

fn extensions(g: &Graph, cfg: &RunConfig, out: &mut Out) -> Result<(), Failure> {
    require_valid(g)?;
    let e = enumerate(g, cfg.max).map_err(|e| fail(EXIT_SEMANTIC, format!("error: {e}")))?;
    if e.labelings.is_empty() {
        out.line(&[&"result", &"unsatisfiable"]);
        return Err(fail(EXIT_SEMANTIC, "error: no admissible labeling"));
    }
    for (i, lab) in e.labelings.iter().enumerate() {
        if i > 0 {
            out.blank();
        }
        out.line(&[&"labeling", &(i + 1)]);
        labeling_lines(out, g, lab);
    }
    if e.truncated {
        out.blank();
        out.line(&[&"truncated"]);
    }
    Ok(())
}

fn method(cfg: &RunConfig) -> Option<Heuristic> {
    match cfg.method {
        MethodArg::Exact => None,
        MethodArg::Greedy => Some(Heuristic::Greedy),
        MethodArg::Beam => Some(Heuristic::Beam { width: cfg.beam_width }),
    }
}

fn solve_failure(out: &mut Out, e: SolveError) -> Failure {
    match e {
        SolveError::Unsatisfiable => {
            out.line(&[&"result", &"unsatisfiable"]);
            fail(EXIT_SEMANTIC, "error: no admissible labeling")
        }
        SolveError::NoSolutionFound => {
            out.line(&[&"result", &"unknown"]);
            fail(EXIT_UNKNOWN, "error: heuristic search found no solution")
        }
    }
}

fn solve(g: &Graph, cfg: &RunConfig, out: &mut Out) -> Result<(), Failure> {
    require_valid(g)?;
    let s = stable(g)?;
    let inst = match encode(&s) {
        Ok(inst) => Some(inst),
        Err(EncodeError::AlreadyExact) => None,
        Err(e) => return Err(fail(EXIT_SEMANTIC, format!("error: {e}"))),
    };
    let Some(inst) = inst else {
        out.line(&[&"weight", &num(0.0)]);
        labeling_lines(out, g, &s.to_labeling());
        return Ok(());
    };
    let (assignment, weight, labeling) = if cfg.components {
        let m = method(cfg).map_or(Method::Exact, Method::Heuristic);
        match solve_by_components(g, m) {
            Ok(sol) => (sol.assignment, sol.objective, sol.labeling),
            Err(ComponentError::Solve(e)) => return Err(solve_failure(out, e)),
            Err(e) => return Err(fail(EXIT_SEMANTIC, format!("error: {e}"))),
        }
    } else {
        let sol = match method(cfg) {
            None => solve_exact(&inst),
            Some(h) => solve_heuristic(&inst, h),
        }
        .map_err(|e| solve_failure(out, e))?;
        let lab = decode(&s, &inst, &sol.assignment).map_err(|e| fail(EXIT_SEMANTIC, format!("error: {e}")))?;
        (sol.assignment, sol.weight, lab)
    };
    for (var, x) in inst.vars.iter().zip(&assignment.values) {
        out.line(&[&"assignment", &var.name, &x]);
    }
    out.line(&[&"weight", &num(weight)]);
    labeling_lines(out, g, &labeling);
    Ok(())
}

fn encode_cmd(g: &Graph, cfg: &RunConfig, out: &mut Out) -> Result<(), Failure> {
    require_valid(g)?;
    let s = stable(g)?;
    let inst = match encode(&s) {
        Ok(inst) => inst,
        Err(EncodeError::AlreadyExact) => {
            out.line(&[&"result", &"exact"]);
            return Ok(());
        }
        Err(e) => return Err(fail(EXIT_SEMANTIC, format!("error: {e}"))),
    };
    let text = write_wcnf(&inst);
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| fail(EXIT_IO, format!("error: cannot write {}: {e}", path.display())))?;
            let hard = inst.hard().count();
            out.line(&[&"variables", &inst.vars.len()]);
            out.line(&[&"hard", &hard]);
            out.line(&[&"soft", &(inst.clauses.len() - hard)]);
        }
        None => out.text.push_str(&text),
    }
    Ok(())
}

fn run(cli: &Cli, out: &mut Out) -> Result<(), Failure> {
    let cfg = &cli.config;
    let family = cfg.tnorm.into();
    match &cli.command {
        Command::Check { file } => check(&load(file, family)?, out),
        Command::Propagate { file } => propagate(&load(file, family)?, out),
        Command::Extensions { file } => extensions(&load(file, family)?, cfg, out),
        Command::Solve { file } => solve(&load(file, family)?, cfg, out),
        Command::Encode { file } => encode_cmd(&load(file, family)?, cfg, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out::new(cli.config.format);
    let result = run(&cli, &mut out);
    print!("{}", out.text);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
