//! The `axbc` command-line frontend.
//!
//! [`run`] parses arguments, reads matrix files and produces a [`Report`];
//! the binary only prints it and exits with [`Report::exit_code`]:
//! `0` for success or a true verdict, `1` for a false or inconsistent
//! verdict, `2` for usage, I/O and parse errors.
//!
//! With `--format machine` the report is line oriented:
//!
//! ```text
//! %command check oracle
//! %input A 1x2
//! 1 2
//! %value consistent true
//! %exit 0
//! ```
//!
//! Matrix bodies use the matrix text format, so [`parse_machine`] recovers
//! every matrix exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::axbc::{self, reproductivity_of, AffineMatMap, ReproReason, SolveError, Verdict};
use crate::gen_inverse::{rank_normal_form, InverseError, OneInverseFamily};
use crate::ratmat::{Consistency, Mat, MatError, ParseError};
use crate::structural::structural_check;
use crate::systems::{self, PresicEq, SystemError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "axbc",
    version,
    about = "Exact solver for the matrix equation AXB = C"
)]
struct Args {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regular Q, P and rank a with Q·A·P = E_a.
    Rnf { a: PathBuf },
    /// One {1}-inverse of A.
    Oneinv {
        a: PathBuf,
        /// Random parameter blocks from this seed.
        #[arg(long, conflicts_with = "zero")]
        seed: Option<u64>,
        /// All parameter blocks zero (the default).
        #[arg(long)]
        zero: bool,
    },
    /// Decide consistency of AXB = C.
    Check {
        #[arg(value_enum)]
        method: CheckMethod,
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
    },
    /// Solution families.
    #[command(subcommand)]
    Solve(SolveCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckMethod {
    Penrose,
    Structural,
    Oracle,
}

#[derive(Debug, Subcommand)]
enum SolveCommand {
    /// General solution of AXB = C.
    Axbc {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        /// Build the family around this particular solution instead.
        #[arg(long)]
        particular: Option<PathBuf>,
    },
    /// The system AX = B, XD = E.
    TwoSided {
        a: PathBuf,
        b: PathBuf,
        d: PathBuf,
        e: PathBuf,
    },
    /// The system AXA = A, AX = XA.
    Commuting { a: PathBuf },
    /// One-sided equations E1..E5 in a square A.
    Presic {
        a: PathBuf,
        #[arg(long = "eq")]
        which: PresicEq,
        /// Use the alternative shift (E3..E5 only).
        #[arg(long)]
        haveric: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", .path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", .path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Inverse(#[from] InverseError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Section {
    Value { key: String, value: String },
    Matrix { name: String, mat: Mat },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, Mat)>,
    pub sections: Vec<Section>,
    pub exit_code: i32,
    pub format: Format,
    /// Message for stderr.
    pub diagnostic: Option<String>,
    /// `--help` / `--version` text, printed instead of a report.
    pub help: Option<String>,
}

impl Report {
    fn new(command: impl Into<String>, format: Format) -> Self {
        Report {
            command: command.into(),
            inputs: Vec::new(),
            sections: Vec::new(),
            exit_code: 0,
            format,
            diagnostic: None,
            help: None,
        }
    }

    fn value(&mut self, key: &str, value: impl ToString) {
        self.sections.push(Section::Value {
            key: key.to_owned(),
            value: value.to_string(),
        });
    }

    fn matrix(&mut self, name: impl Into<String>, mat: &Mat) {
        self.sections.push(Section::Matrix {
            name: name.into(),
            mat: mat.clone(),
        });
    }

    fn verdict(&mut self, key: &str, holds: bool) {
        self.value(key, holds);
        self.exit_code = if holds { 0 } else { 1 };
    }

    /// Looks up a value section.
    pub fn get_value(&self, key: &str) -> Option<&str> {
        self.sections.iter().find_map(|s| match s {
            Section::Value { key: k, value } if k == key => Some(value.as_str()),
            _ => None,
        })
    }

    pub fn get_matrix(&self, name: &str) -> Option<&Mat> {
        self.sections.iter().find_map(|s| match s {
            Section::Matrix { name: n, mat } if n == name => Some(mat),
            _ => None,
        })
    }

    /// Text for stdout in the report's format.
    pub fn render(&self) -> String {
        if let Some(help) = &self.help {
            return help.clone();
        }
        if self.command.is_empty() {
            return String::new();
        }
        match self.format {
            Format::Human => self.render_human(),
            Format::Machine => self.render_machine(),
        }
    }

    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "%command {}", self.command);
        let write_mat = |out: &mut String, tag: &str, name: &str, m: &Mat| {
            let _ = writeln!(out, "%{tag} {name} {}x{}", m.rows(), m.cols());
            out.push_str(&m.to_string());
        };
        for (name, m) in &self.inputs {
            write_mat(&mut out, "input", name, m);
        }
        for s in &self.sections {
            match s {
                Section::Value { key, value } => {
                    let _ = writeln!(out, "%value {key} {value}");
                }
                Section::Matrix { name, mat } => write_mat(&mut out, "matrix", name, mat),
            }
        }
        let _ = writeln!(out, "%exit {}", self.exit_code);
        out
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        if self.command.is_empty() {
            return out;
        }
        let _ = writeln!(out, "== {} ==", self.command);
        let write_mat = |out: &mut String, name: &str, m: &Mat| {
            let _ = writeln!(out, "{name} ({}x{}):", m.rows(), m.cols());
            if m.rows() == 0 || m.cols() == 0 {
                let _ = writeln!(out, "  (empty)");
            }
            for line in m.to_string().lines() {
                let _ = writeln!(out, "  {line}");
            }
        };
        for (name, m) in &self.inputs {
            write_mat(&mut out, name, m);
        }
        for s in &self.sections {
            match s {
                Section::Value { key, value } => {
                    let _ = writeln!(out, "{key}: {value}");
                }
                Section::Matrix { name, mat } => write_mat(&mut out, name, mat),
            }
        }
        out
    }
}

/// A machine report read back from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineReport {
    pub command: String,
    pub inputs: Vec<(String, Mat)>,
    pub sections: Vec<Section>,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Matrix(#[from] ParseError),
}

/// Parses output of [`Report::render_machine`].
pub fn parse_machine(text: &str) -> Result<MachineReport, ReportParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let syntax = |line: usize, msg: &str| ReportParseError::Syntax {
        line: line + 1,
        msg: msg.to_owned(),
    };
    let mut report = MachineReport {
        command: String::new(),
        inputs: Vec::new(),
        sections: Vec::new(),
        exit_code: -1,
    };
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i];
        let Some(rest) = line.strip_prefix('%') else {
            return Err(syntax(i, "expected a `%` header"));
        };
        let (tag, rest) = rest.split_once(' ').unwrap_or((rest, ""));
        match tag {
            "command" => report.command = rest.to_owned(),
            "value" => {
                let (key, value) = rest
                    .split_once(' ')
                    .ok_or_else(|| syntax(i, "value needs a key"))?;
                report.sections.push(Section::Value {
                    key: key.to_owned(),
                    value: value.to_owned(),
                });
            }
            "exit" => {
                report.exit_code = rest.parse().map_err(|_| syntax(i, "bad exit code"))?;
            }
            "input" | "matrix" => {
                let (name, shape) = rest
                    .rsplit_once(' ')
                    .ok_or_else(|| syntax(i, "matrix header needs a shape"))?;
                let (r, c) = shape
                    .split_once('x')
                    .and_then(|(r, c)| Some((r.parse::<usize>().ok()?, c.parse::<usize>().ok()?)))
                    .ok_or_else(|| syntax(i, "bad shape"))?;
                let body_start = i + 1;
                let mut end = body_start;
                while end < lines.len() && !lines[end].starts_with('%') {
                    end += 1;
                }
                let mat = if r == 0 || c == 0 {
                    Mat::zeros(r, c)
                } else {
                    lines[body_start..end]
                        .join("\n")
                        .parse::<Mat>()
                        .map_err(|e| e.offset_lines(body_start))?
                };
                if mat.shape() != (r, c) {
                    return Err(syntax(i, "matrix body does not match its shape"));
                }
                if tag == "input" {
                    report.inputs.push((name.to_owned(), mat));
                } else {
                    report.sections.push(Section::Matrix {
                        name: name.to_owned(),
                        mat,
                    });
                }
                i = end;
                continue;
            }
            _ => return Err(syntax(i, "unknown header")),
        }
        i += 1;
    }
    Ok(report)
}

/// Reads and parses one matrix file.
pub fn read_matrix(path: &Path) -> Result<Mat, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    text.parse().map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let mut report = Report::new("", Format::Human);
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                report.help = Some(e.render().to_string());
            } else {
                report.diagnostic = Some(e.render().to_string());
                report.exit_code = 2;
            }
            return report;
        }
    };
    let format = args.format;
    match execute(args.command, format) {
        Ok(report) => report,
        Err((command, err)) => {
            let mut report = Report::new(command, format);
            report.diagnostic = Some(format!("error: {err}"));
            report.exit_code = 2;
            report
        }
    }
}

type Outcome = Result<Report, (String, CliError)>;

fn execute(command: Command, format: Format) -> Outcome {
    match command {
        Command::Rnf { a } => wrap("rnf", format, |r| rnf(r, &a)),
        Command::Oneinv { a, seed, zero: _ } => wrap("oneinv", format, |r| oneinv(r, &a, seed)),
        Command::Check { method, a, b, c } => {
            let name = match method {
                CheckMethod::Penrose => "check penrose",
                CheckMethod::Structural => "check structural",
                CheckMethod::Oracle => "check oracle",
            };
            wrap(name, format, |r| check(r, method, &a, &b, &c))
        }
        Command::Solve(SolveCommand::Axbc {
            a,
            b,
            c,
            particular,
        }) => wrap("solve axbc", format, |r| {
            solve_axbc(r, &a, &b, &c, particular.as_deref())
        }),
        Command::Solve(SolveCommand::TwoSided { a, b, d, e }) => {
            wrap("solve two-sided", format, |r| two_sided(r, &a, &b, &d, &e))
        }
        Command::Solve(SolveCommand::Commuting { a }) => {
            wrap("solve commuting", format, |r| commuting(r, &a))
        }
        Command::Solve(SolveCommand::Presic { a, which, haveric }) => {
            wrap("solve presic", format, |r| presic(r, &a, which, haveric))
        }
    }
}

fn wrap(
    name: &str,
    format: Format,
    body: impl FnOnce(&mut Report) -> Result<(), CliError>,
) -> Outcome {
    let mut report = Report::new(name, format);
    body(&mut report).map_err(|e| (name.to_owned(), e))?;
    Ok(report)
}

fn load(report: &mut Report, name: &str, path: &Path) -> Result<Mat, CliError> {
    let m = read_matrix(path)?;
    report.inputs.push((name.to_owned(), m.clone()));
    Ok(m)
}

fn rnf(report: &mut Report, a: &Path) -> Result<(), CliError> {
    let a = load(report, "A", a)?;
    let rnf = rank_normal_form(&a);
    report.value("rank", rnf.rank);
    report.matrix("Q", &rnf.q);
    report.matrix("P", &rnf.p);
    report.matrix("E_a", &rnf.normal_form());
    Ok(())
}

fn oneinv(report: &mut Report, a: &Path, seed: Option<u64>) -> Result<(), CliError> {
    let a = load(report, "A", a)?;
    let fam = OneInverseFamily::new(&a);
    let g = match seed {
        Some(s) => fam.sample(s),
        None => fam.canonical(),
    };
    report.value("rank", fam.rank());
    report.value("parameters", fam.parameter_count());
    report.matrix("G", &g);
    Ok(())
}

fn load_abc(
    report: &mut Report,
    a: &Path,
    b: &Path,
    c: &Path,
) -> Result<(Mat, Mat, Mat), CliError> {
    let a = load(report, "A", a)?;
    let b = load(report, "B", b)?;
    let c = load(report, "C", c)?;
    if c.rows() != a.rows() || c.cols() != b.cols() {
        return Err(CliError::Mat(MatError::Shape {
            op: "AXB=C (C must be rows(A) x cols(B))",
            left: (a.rows(), b.cols()),
            right: c.shape(),
        }));
    }
    Ok((a, b, c))
}

fn check(
    report: &mut Report,
    method: CheckMethod,
    a: &Path,
    b: &Path,
    c: &Path,
) -> Result<(), CliError> {
    let (a, b, c) = load_abc(report, a, b, c)?;
    let holds = match method {
        CheckMethod::Oracle => axbc::is_consistent(&a, &b, &c)?,
        CheckMethod::Structural => structural_check(&a, &b, &c)?,
        CheckMethod::Penrose => {
            let a1 = OneInverseFamily::new(&a).canonical();
            let b1 = OneInverseFamily::new(&b).canonical();
            report.matrix("A1", &a1);
            report.matrix("B1", &b1);
            axbc::penrose_check(&a, &b, &c, &a1, &b1)?
        }
    };
    report.verdict("consistent", holds);
    Ok(())
}

/// Shift, dimension, basis and reproductivity of a family.
fn describe_family(report: &mut Report, prefix: &str, map: &AffineMatMap) -> Result<(), CliError> {
    report.matrix(format!("{prefix}.shift"), map.shift());
    let basis = map.image_basis();
    report.value(&format!("{prefix}.dim"), basis.len());
    for (k, b) in basis.iter().enumerate() {
        report.matrix(format!("{prefix}.basis[{k}]"), b);
    }
    let repro = reproductivity_of(map)?;
    report.value(&format!("{prefix}.reproductive"), repro.is_reproductive);
    let reason = match repro.reason {
        ReproReason::Reproductive => "reproductive",
        ReproReason::LinearPartNotIdempotent => "linear-part-not-idempotent",
        ReproReason::ShiftNotFixed => "shift-not-fixed",
    };
    report.value(&format!("{prefix}.reason"), reason);
    if let Some(w) = &repro.witness {
        report.matrix(format!("{prefix}.witness"), w);
    }
    Ok(())
}

fn solve_axbc(
    report: &mut Report,
    a: &Path,
    b: &Path,
    c: &Path,
    particular: Option<&Path>,
) -> Result<(), CliError> {
    let (a, b, c) = load_abc(report, a, b, c)?;
    let x0 = particular.map(|p| load(report, "X0", p)).transpose()?;
    if !axbc::is_consistent(&a, &b, &c)? {
        report.verdict("consistent", false);
        return Ok(());
    }
    report.verdict("consistent", true);
    match x0 {
        None => {
            let f = axbc::general_solution(&a, &b, &c)?;
            describe_family(report, "f", &f)?;
        }
        Some(x0) => {
            let g = axbc::solution_from_particular(&a, &b, &c, &x0)?;
            describe_family(report, "g", &g)?;
            let cert = axbc::representability_certificate(&a, &b, &c, &x0)?;
            let verdict = match cert.verdict {
                Verdict::ProvenNotRepresentable => "proven-not-representable",
                Verdict::Inconclusive => "inconclusive",
            };
            report.value("certificate", verdict);
            report.value("certificate.rank_x0", cert.rank_x0);
            report.value("certificate.bound", cert.bound);
        }
    }
    Ok(())
}

fn two_sided(report: &mut Report, a: &Path, b: &Path, d: &Path, e: &Path) -> Result<(), CliError> {
    let a = load(report, "A", a)?;
    let b = load(report, "B", b)?;
    let d = load(report, "D", d)?;
    let e = load(report, "E", e)?;
    match systems::two_sided_solve(&a, &b, &d, &e)? {
        Consistency::Inconsistent => report.verdict("consistent", false),
        Consistency::Consistent(fams) => {
            report.verdict("consistent", true);
            describe_family(report, "general", &fams.general)?;
            describe_family(report, "reproductive", &fams.reproductive)?;
        }
    }
    Ok(())
}

fn commuting(report: &mut Report, a: &Path) -> Result<(), CliError> {
    let a = load(report, "A", a)?;
    match systems::commuting_system_solve(&a)? {
        Consistency::Inconsistent => report.verdict("consistent", false),
        Consistency::Consistent(out) => {
            report.verdict("consistent", true);
            report.matrix("Abar", &out.abar);
            describe_family(report, "f", &out.family)?;
        }
    }
    Ok(())
}

fn presic(report: &mut Report, a: &Path, which: PresicEq, haveric: bool) -> Result<(), CliError> {
    let a = load(report, "A", a)?;
    let map = if haveric {
        let h = which.haveric().ok_or_else(|| {
            CliError::Usage(format!("--haveric applies to E3..E5, not {which:?}"))
        })?;
        systems::haveric_family(&a, h)?
    } else {
        systems::presic_family(&a, which)?
    };
    report.value(
        "equation",
        format!("{which:?}{}", if haveric { "'" } else { "" }),
    );
    describe_family(report, "f", &map)?;
    Ok(())
}
