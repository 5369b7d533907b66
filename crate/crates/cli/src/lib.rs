//! Argument handling and output rendering for the `chowring` binary.

pub mod checks;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use chowring_core::chowpipe::{
    m01_bounded, orthogonal_bounded, orthogonal_bound, quadrics_bound, reduced_quadrics_bounded, ChowpipeError,
    RingPresentation, M01_BOUND,
};
use chowring_core::localize::{closed_form_pushforward, veronese_pushforward};
use chowring_core::polycore::Polynomial;
use clap::{Parser, Subcommand, ValueEnum};

use checks::{Expectation, SuiteReport, SCHEMA_VERSION};

/// Largest rank accepted without `--force`.
pub const MAX_RANK: usize = 6;
/// Largest twist accepted without `--force`.
pub const MAX_TWIST: u32 = 5;

pub const GRAMMAR: &str = "usage: chowring <command> [--format text|json|latex] [--max-degree <int>] [--out <path>] [--force]
commands:
  m01
  quadrics --n <int> --k <int>
  orthogonal --n <int> --k <int>
  pushforward --n <int> --r <int>
  verify-all
the default format can be set with CHOWRING_FORMAT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Rank-three quadrics of rank at least two
    M01,
    /// Nondegenerate quadrics modulo the weight-k torsor
    Quadrics {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
    },
    /// Complement of the rank-one locus modulo the weight-k torsor
    Orthogonal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
    },
    /// Class of K^r pushed forward along the Veronese embedding
    Pushforward {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Run every verification check
    VerifyAll,
}

impl Command {
    fn rank(&self) -> Option<usize> {
        match *self {
            Command::Quadrics { n, .. } | Command::Orthogonal { n, .. } | Command::Pushforward { n, .. } => Some(n),
            Command::M01 | Command::VerifyAll => None,
        }
    }

    fn twist(&self) -> Option<u32> {
        match *self {
            Command::Quadrics { k, .. } | Command::Orthogonal { k, .. } => Some(k),
            _ => None,
        }
    }

    /// Highest degree among the relations before any simplification.
    pub fn generator_degree(&self) -> Option<u32> {
        match *self {
            Command::M01 => Some(6),
            Command::Quadrics { n, .. } => Some((n * (n + 1) / 2) as u32),
            Command::Orthogonal { n, .. } => Some(n as u32),
            Command::Pushforward { .. } | Command::VerifyAll => None,
        }
    }

    /// Verification horizon used when `--max-degree` is absent.
    pub fn default_bound(&self) -> Option<u32> {
        match *self {
            Command::M01 => Some(M01_BOUND),
            Command::Quadrics { n, .. } => Some(quadrics_bound(n)),
            Command::Orthogonal { n, .. } => Some(orthogonal_bound(n)),
            Command::Pushforward { .. } | Command::VerifyAll => None,
        }
    }

    fn to_args(self) -> String {
        match self {
            Command::M01 => "m01".into(),
            Command::Quadrics { n, k } => format!("quadrics --n {n} --k {k}"),
            Command::Orthogonal { n, k } => format!("orthogonal --n {n} --k {k}"),
            Command::Pushforward { n, r } => format!("pushforward --n {n} --r {r}"),
            Command::VerifyAll => "verify-all".into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "chowring", version, about = "Integral Chow ring presentations of quadric stacks")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, env = "CHOWRING_FORMAT", default_value = "text")]
    format: Format,
    /// Degree up to which ideal equalities are verified
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Write the output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Allow n > 6 or k > 5
    #[arg(long, global = true)]
    force: bool,
}

/// A validated command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub max_degree: Option<u32>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub force: bool,
}

#[derive(Debug)]
pub enum ParseOutcome {
    Config(RunConfig),
    /// `--help` or `--version`: print and exit 0.
    Info(String),
    Usage(String),
}

impl RunConfig {
    pub fn parse<I, T>(argv: I) -> ParseOutcome
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let args = match Args::try_parse_from(argv) {
            Ok(a) => a,
            Err(e) => {
                use clap::error::ErrorKind;
                return match e.kind() {
                    ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseOutcome::Info(e.to_string()),
                    _ => {
                        let text = e.to_string();
                        let first = text.lines().next().unwrap_or("invalid arguments");
                        ParseOutcome::Usage(first.trim_start_matches("error: ").to_string())
                    }
                };
            }
        };
        let config = RunConfig {
            command: args.command,
            max_degree: args.max_degree,
            format: args.format,
            out: args.out,
            force: args.force,
        };
        match config.validate() {
            Ok(()) => ParseOutcome::Config(config),
            Err(msg) => ParseOutcome::Usage(msg),
        }
    }

    fn validate(&self) -> Result<(), String> {
        if let Some(n) = self.command.rank() {
            if n < 2 {
                return Err(format!("--n must be at least 2, got {n}"));
            }
        }
        if let Command::Pushforward { n, r } = self.command {
            if r >= n {
                return Err(format!("--r must be below --n, got r = {r}, n = {n}"));
            }
        }
        if !self.force {
            if let Some(n) = self.command.rank().filter(|&n| n > MAX_RANK) {
                return Err(format!("n = {n} exceeds {MAX_RANK}; pass --force to run anyway"));
            }
            if let Some(k) = self.command.twist().filter(|&k| k > MAX_TWIST) {
                return Err(format!("k = {k} exceeds {MAX_TWIST}; pass --force to run anyway"));
            }
        }
        if let Some(d) = self.max_degree {
            match self.command.generator_degree() {
                None => return Err(format!("--max-degree does not apply to {}", self.command.to_args())),
                Some(g) if d < g => {
                    return Err(format!("--max-degree {d} is below the generator degree {g}"));
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// Limits exceeded under `--force`.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if let Some(n) = self.command.rank().filter(|&n| n > MAX_RANK) {
            w.push(format!("warning: n = {n} exceeds {MAX_RANK}; computations grow quickly with n"));
        }
        if let Some(k) = self.command.twist().filter(|&k| k > MAX_TWIST) {
            w.push(format!("warning: k = {k} exceeds {MAX_TWIST}"));
        }
        w
    }

    pub fn bound(&self) -> Option<u32> {
        self.max_degree.or(self.command.default_bound())
    }
}

/// Rendered output and the exit code it goes with.
struct Rendered {
    body: String,
    code: i32,
}

/// Parses `argv` (including the program name), runs it and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::parse(argv) {
        ParseOutcome::Config(config) => execute(&config, stdout, stderr),
        ParseOutcome::Info(text) => {
            let _ = write!(stdout, "{text}");
            0
        }
        ParseOutcome::Usage(msg) => {
            let _ = writeln!(stderr, "error: {msg}\n{GRAMMAR}");
            1
        }
    }
}

pub fn execute(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    for w in config.warnings() {
        let _ = writeln!(stderr, "{w}");
    }
    let rendered = match compute(config, stderr) {
        Ok(r) => r,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 1;
        }
    };
    let written = match &config.out {
        Some(path) => std::fs::write(path, &rendered.body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(rendered.body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return 1;
    }
    rendered.code
}

fn compute(config: &RunConfig, stderr: &mut dyn Write) -> Result<Rendered, String> {
    let bound = config.bound();
    let result = match config.command {
        Command::M01 => m01_bounded(bound.unwrap()),
        Command::Quadrics { n, k } => reduced_quadrics_bounded(n, k as i64, bound.unwrap()),
        Command::Orthogonal { n, k } => orthogonal_bounded(n, k as i64, bound.unwrap()),
        Command::Pushforward { n, r } => return pushforward(config, n, r),
        Command::VerifyAll => return Ok(verify_all(config, stderr)),
    };
    finish(config, result, stderr)
}

fn finish(
    config: &RunConfig,
    result: Result<RingPresentation, ChowpipeError>,
    stderr: &mut dyn Write,
) -> Result<Rendered, String> {
    match result {
        Ok(pres) => Ok(Rendered { body: render_presentation(config, &pres), code: 0 }),
        Err(ChowpipeError::VerificationFailure(pres)) => {
            let _ = writeln!(stderr, "error: verification failed: {}", pres.failed_checks().join(", "));
            Ok(Rendered { body: render_presentation(config, &pres), code: 2 })
        }
        Err(e) => Err(e.to_string()),
    }
}

fn render_presentation(config: &RunConfig, pres: &RingPresentation) -> String {
    match config.format {
        Format::Text => pres.to_string(),
        Format::Latex => pres.to_latex_document(),
        Format::Json => {
            let mut value = pres.to_json();
            let obj = value.as_object_mut().expect("presentation JSON is an object");
            obj.insert("schema_version".into(), SCHEMA_VERSION.into());
            obj.insert("command".into(), config.command.to_args().into());
            to_json_line(&value)
        }
    }
}

fn to_json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn pushforward(config: &RunConfig, n: usize, r: usize) -> Result<Rendered, String> {
    let local = veronese_pushforward(n, r).map_err(|e| e.to_string())?;
    let closed = closed_form_pushforward(n, r).map_err(|e| e.to_string())?;
    let agree = local == closed;
    let code = if agree { 0 } else { 2 };
    let body = match config.format {
        Format::Text => {
            let mut s = format!("i_*K^{r} for n = {n}:\n{local}\n");
            if agree {
                s.push_str("closed form 2^(n-1-r) H^r R(H): agrees\n");
            } else {
                let _ = writeln!(s, "closed form 2^(n-1-r) H^r R(H): DIFFERS\n{closed}");
            }
            s
        }
        Format::Json => to_json_line(&serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "command": config.command.to_args(),
            "n": n,
            "r": r,
            "localization": local.to_string(),
            "closed_form": closed.to_string(),
            "agree": agree,
        })),
        Format::Latex => pushforward_latex(n, r, &local, &closed, agree),
    };
    Ok(Rendered { body, code })
}

fn pushforward_latex(n: usize, r: usize, local: &Polynomial, closed: &Polynomial, agree: bool) -> String {
    let mut s = String::from("\\documentclass{article}\n\\usepackage{amsmath,amssymb}\n\\begin{document}\n");
    let _ = writeln!(s, "Rank $n = {n}$, power $r = {r}$.");
    let _ = writeln!(s, "\\[\ni_*K^{{{r}}} = {}\n\\]", local.to_latex());
    if agree {
        s.push_str("This agrees with $2^{n-1-r}H^r R(H)$.\n");
    } else {
        let _ = writeln!(s, "This differs from\n\\[\n2^{{n-1-r}}H^r R(H) = {}\n\\]", closed.to_latex());
    }
    s.push_str("\\end{document}\n");
    s
}

fn verify_all(config: &RunConfig, stderr: &mut dyn Write) -> Rendered {
    let all = checks::all_checks();
    let (report, timings) = checks::run_checks(&all);
    for (c, t) in report.checks.iter().zip(&timings) {
        let _ = writeln!(stderr, "{:<42} {:>9.3} s", c.name, t.as_secs_f64());
    }
    let body = match config.format {
        Format::Text => suite_text(&report),
        Format::Json => to_json_line(&report),
        Format::Latex => suite_latex(&report),
    };
    Rendered { body, code: if report.passed { 0 } else { 2 } }
}

fn status(c: &checks::CheckResult) -> &'static str {
    match (c.passed, c.expectation) {
        (true, _) => "pass",
        (false, Expectation::Pass) => "FAIL",
        (false, Expectation::Informative) => "differs",
    }
}

fn bound_text(b: Option<u32>) -> String {
    b.map_or_else(|| "exact".to_string(), |d| format!("D = {d}"))
}

fn suite_text(report: &SuiteReport) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let tag = if c.expectation == Expectation::Informative { " (informative)" } else { "" };
        let _ = writeln!(s, "{:<7} {}{tag} [{}]", status(c), c.name, bound_text(c.degree_bound));
        let _ = writeln!(s, "        {}", c.detail);
    }
    let _ = writeln!(s, "overall: {}", if report.passed { "pass" } else { "FAIL" });
    s
}

fn suite_latex(report: &SuiteReport) -> String {
    let escape = |t: &str| {
        t.replace('\\', "\\textbackslash{}")
            .replace('_', "\\_")
            .replace('^', "\\^{}")
            .replace('&', "\\&")
            .replace('%', "\\%")
            .replace('#', "\\#")
            .replace('$', "\\$")
            .replace('{', "\\{")
            .replace('}', "\\}")
    };
    let mut s = String::from("\\documentclass{article}\n\\begin{document}\n\\begin{tabular}{lll}\n");
    s.push_str("check & status & horizon \\\\\n\\hline\n");
    for c in &report.checks {
        let _ = writeln!(s, "\\texttt{{{}}} & {} & {} \\\\", escape(&c.name), status(c), bound_text(c.degree_bound));
    }
    s.push_str("\\end{tabular}\n\n");
    let _ = writeln!(s, "Overall: {}.", if report.passed { "pass" } else { "fail" });
    s.push_str("\\end{document}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use chowring_core::chowpipe::Step;

    fn config(format: Format) -> RunConfig {
        RunConfig { command: Command::M01, max_degree: None, format, out: None, force: false }
    }

    #[test]
    fn failed_verification_still_emits_the_presentation() {
        let mut pres = RingPresentation::replay(&[Step::AlphaRelations { n: 2 }, Step::TorsorQuotient { k: 0 }]).unwrap();
        pres.verify_against("wrong", &["c1".parse().unwrap()], 4, false).unwrap();
        let mut err = Vec::new();
        let out = finish(&config(Format::Json), pres.into_checked(), &mut err).unwrap();
        assert_eq!(out.code, 2);
        let json: serde_json::Value = serde_json::from_str(&out.body).unwrap();
        assert_eq!(json["verification"][0]["report"]["equal"], false);
        assert!(String::from_utf8(err).unwrap().contains("wrong"));
    }

    #[test]
    fn other_pipeline_errors_are_not_rendered() {
        let mut err = Vec::new();
        let e = ChowpipeError::InvalidParameters("x".into());
        assert!(finish(&config(Format::Text), Err(e), &mut err).is_err());
    }

    #[test]
    fn limits_and_degrees() {
        let parse = |args: &[&str]| RunConfig::parse(std::iter::once("chowring").chain(args.iter().copied()));
        assert!(matches!(parse(&["quadrics", "--n", "6", "--k", "5"]), ParseOutcome::Config(_)));
        assert!(matches!(parse(&["quadrics", "--n", "7", "--k", "0"]), ParseOutcome::Usage(_)));
        assert!(matches!(parse(&["quadrics", "--n", "3", "--k", "6"]), ParseOutcome::Usage(_)));
        match parse(&["quadrics", "--n", "7", "--k", "6", "--force"]) {
            ParseOutcome::Config(c) => assert_eq!(c.warnings().len(), 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse(&["quadrics", "--n", "3", "--k", "1", "--max-degree", "5"]), ParseOutcome::Usage(_)));
        assert!(matches!(parse(&["quadrics", "--n", "3", "--k", "1", "--max-degree", "6"]), ParseOutcome::Config(_)));
        assert!(matches!(parse(&["orthogonal", "--n", "1", "--k", "0"]), ParseOutcome::Usage(_)));
        assert!(matches!(parse(&["pushforward", "--n", "3", "--r", "3"]), ParseOutcome::Usage(_)));
        assert!(matches!(parse(&["pushforward", "--n", "3", "--r", "1", "--max-degree", "9"]), ParseOutcome::Usage(_)));
        assert!(matches!(parse(&["quadrics", "--n", "3", "--k", "-1"]), ParseOutcome::Usage(_)));
        assert!(matches!(parse(&["--help"]), ParseOutcome::Info(_)));
    }
}
