//! The `fa` command line.
//!
//! Exit codes: 0 for success or a true decision, 1 for a false decision,
//! 2 for usage errors and 3 when a resource cap is hit. Reports are JSON
//! with sorted keys; timings are left out unless `--timings` is given, so
//! the same command prints the same bytes.

pub mod commands;
pub mod expr;
pub mod formats;
pub mod workspace;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fa_core::Caps;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{err}")]
    Core { module: &'static str, err: fa_core::Error },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { err, .. } if err.is_cap() => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Core { err, .. } if err.is_cap() => "cap",
            CliError::Core { .. } => "input",
        }
    }
}

impl From<fa_core::Error> for CliError {
    fn from(err: fa_core::Error) -> Self {
        CliError::Core { module: "", err }
    }
}

/// What a command produced: a JSON report, a human summary and the exit
/// code.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub code: i32,
}

impl Report {
    pub fn ok(json: Value, text: impl Into<String>) -> Report {
        Report { json, text: text.into(), code: 0 }
    }

    pub fn decision(truth: bool, json: Value, text: impl Into<String>) -> Report {
        Report { json, text: text.into(), code: if truth { 0 } else { 1 } }
    }
}

#[derive(Parser, Debug)]
#[command(name = "fa", version, about = "Automatic sets in groups with an expanding endomorphism")]
pub struct Cli {
    /// Workspace manifest holding named bindings.
    #[arg(long, global = true)]
    pub workspace: Option<PathBuf>,
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(flatten)]
    pub caps: CapArgs,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct CapArgs {
    /// Carries explored by one carry automaton.
    #[arg(long, global = true, env = "FA_CARRY_CAP")]
    pub carry_cap: Option<usize>,
    /// Classes explored while building a kernel.
    #[arg(long, global = true, env = "FA_KERNEL_CAP")]
    pub kernel_cap: Option<usize>,
    /// Default bound B of bounded ladder search.
    #[arg(long, global = true, env = "FA_LADDER_BOUND")]
    pub ladder_bound: Option<u32>,
    /// States visited by one expansion search.
    #[arg(long, global = true, env = "FA_SEARCH_CAP")]
    pub search_cap: Option<usize>,
    /// States of one intermediate automaton.
    #[arg(long, global = true, env = "FA_STATE_CAP")]
    pub state_cap: Option<usize>,
}

impl CapArgs {
    pub fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            carry: self.carry_cap.unwrap_or(d.carry),
            kernel: self.kernel_cap.unwrap_or(d.kernel),
            ladder_bound: self.ladder_bound.unwrap_or(d.ladder_bound),
            search: self.search_cap.unwrap_or(d.search),
            states: self.state_cap.unwrap_or(d.states),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Groups and their endomorphisms.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Spanning sets and the length function.
    #[command(subcommand)]
    Span(SpanCmd),
    /// Plain regular languages given as automaton files.
    #[command(subcommand)]
    Lang(LangCmd),
    /// Presburger arithmetic.
    #[command(subcommand)]
    Presburger(PresburgerCmd),
    /// Automatic sets.
    #[command(subcommand)]
    Set(SetCmd),
    /// Ladders and EDP sets.
    #[command(subcommand)]
    Mt(MtCmd),
    /// Worked examples.
    #[command(subcommand)]
    Demo(DemoCmd),
}

impl Cmd {
    fn module(&self) -> &'static str {
        match self {
            Cmd::Group(_) => "group",
            Cmd::Span(_) => "span",
            Cmd::Lang(_) => "lang",
            Cmd::Presburger(_) => "presburger",
            Cmd::Set(_) => "set",
            Cmd::Mt(_) => "mt",
            Cmd::Demo(_) => "demo",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Summary of a group.
    Describe {
        #[arg(long)]
        group: String,
    },
    /// Value of a digit string s₀ + F^r s₁ + ⋯.
    Eval {
        #[arg(long)]
        group: String,
        /// JSON list of elements, least significant first.
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Coset representatives of F^r Γ.
    Cosets {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum SpanCmd {
    /// Decides whether the group admits a spanning set.
    Gate {
        #[arg(long)]
        group: String,
    },
    /// Checks the spanning axioms for a digit set.
    Verify {
        #[arg(long)]
        group: String,
        /// JSON list of digits.
        #[arg(long)]
        digits: String,
        #[arg(long, default_value_t = 1)]
        power: u32,
        /// Workspace name for the verified set.
        #[arg(long, default_value = "span")]
        name: String,
    },
    /// Searches boxes of digits for a spanning set.
    Search {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 4)]
        max_r: u32,
        #[arg(long, default_value_t = 3)]
        radius: i64,
        #[arg(long, default_value = "span")]
        name: String,
    },
    /// Shortest expansion length ℓ and λ = 2^ℓ of an element.
    Lambda {
        #[arg(long)]
        elem: String,
        #[command(flatten)]
        on: SpanArgs,
    },
}

/// Where the spanning set comes from: --span, else the usual one for
/// --group, else the workspace binding "span".
#[derive(Args, Debug, Clone, Default)]
pub struct SpanArgs {
    #[arg(long)]
    pub span: Option<String>,
    #[arg(long)]
    pub group: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum LangCmd {
    /// Polynomial-growth test; prints the degree or a witness.
    Sparse {
        #[arg(long = "in")]
        input: String,
    },
    /// Number of accepted words of each length.
    Count {
        #[arg(long = "in")]
        input: String,
        #[arg(long, default_value_t = 20)]
        upto: usize,
    },
    /// Parikh image as a semilinear set.
    Parikh {
        #[arg(long = "in")]
        input: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum PresburgerCmd {
    /// Decides a sentence, or compiles a formula with free variables.
    Decide {
        #[arg(long)]
        formula: String,
        /// Bound on the entries of the sample tuples listed.
        #[arg(long, default_value_t = 8)]
        sample: u64,
    },
}

/// The set a command works on.
#[derive(Args, Debug, Clone, Default)]
pub struct SetArgs {
    /// Set file or workspace name.
    #[arg(long)]
    pub set: Option<String>,
    /// Workspace name or built-in.
    #[arg(long)]
    pub name: Option<String>,
    /// Set expression.
    #[arg(long)]
    pub expr: Option<String>,
    #[command(flatten)]
    pub on: SpanArgs,
}

#[derive(Subcommand, Debug)]
pub enum SetCmd {
    /// Evaluates a set expression and optionally stores it.
    Build {
        #[arg(long)]
        expr: String,
        /// Workspace name to store the result under.
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        on: SpanArgs,
    },
    /// Membership of an element (a tuple for arity > 1).
    Member {
        #[command(flatten)]
        target: SetArgs,
        #[arg(long)]
        elem: String,
    },
    /// Elements with expansions of length ≤ n.
    Enumerate {
        #[command(flatten)]
        target: SetArgs,
        #[arg(long, default_value_t = 4)]
        n: u32,
    },
    /// Emptiness.
    Empty {
        #[command(flatten)]
        target: SetArgs,
    },
    /// F-sparsity with a decomposition into simple terms.
    Sparse {
        #[command(flatten)]
        target: SetArgs,
    },
    /// Kernel over the cosets of F^r Γ.
    Kernel {
        #[command(flatten)]
        target: SetArgs,
        #[arg(long)]
        r: Option<u32>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Bounded,
}

#[derive(Subcommand, Debug)]
pub enum MtCmd {
    /// Searches for a ladder of size n.
    Ladder {
        #[command(flatten)]
        target: SetArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Bounded)]
        mode: Mode,
        /// Bound B for bounded mode; defaults to the ladder-bound cap.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// EDP sets.
    #[command(subcommand)]
    Edp(EdpCmd),
}

#[derive(Subcommand, Debug)]
pub enum EdpCmd {
    /// Membership of an element.
    Member {
        #[arg(long)]
        edp: String,
        #[arg(long)]
        elem: String,
    },
    /// Single-letter normal form.
    NormalForm {
        #[arg(long)]
        edp: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// The EDP set of an F-sparse automatic set.
    FromSparse {
        #[command(flatten)]
        target: SetArgs,
        /// Workspace name to store the result under.
        #[arg(long = "store")]
        store: Option<String>,
    },
    /// Elements Σ word(k) with all exponents ≤ bound.
    Values {
        #[arg(long)]
        edp: String,
        #[arg(long, default_value_t = 4)]
        bound: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum DemoCmd {
    /// Checks the definitions of t^ℕ, B and the graph of t^i, t^j ↦ t^(i+j)
    /// in (𝔽_p[t], +, A) exhaustively up to degree dmax.
    Polysnip {
        #[arg(long, default_value_t = 7)]
        p: u32,
        #[arg(long, default_value_t = 12)]
        dmax: u32,
    },
}

fn caps_json(c: &Caps) -> Value {
    json!({"carry": c.carry, "kernel": c.kernel, "ladder_bound": c.ladder_bound, "search": c.search, "states": c.states})
}

fn error_json(module: &str, e: &CliError, caps: &Caps) -> Value {
    let mut err = json!({"module": module, "kind": e.kind(), "message": e.to_string(), "exit": e.exit_code()});
    if let CliError::Core { err: inner, .. } = e {
        if inner.is_cap() {
            err["caps"] = caps_json(caps);
        }
    }
    json!({ "error": err })
}

fn write_out(path: &PathBuf, v: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Prints a line, ignoring a closed stdout.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

/// Runs one command line, printing to stdout and stderr; returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let caps = cli.caps.caps();
    let module = cli.cmd.module();
    let start = Instant::now();
    let result = commands::dispatch(&cli, caps).map_err(|e| match e {
        CliError::Core { err, .. } => CliError::Core { module, err },
        e => e,
    });
    let result = result.and_then(|mut rep| {
        if cli.timings {
            if let Value::Object(m) = &mut rep.json {
                m.insert("timing_ms".into(), json!(start.elapsed().as_millis() as u64));
            }
        }
        if let Some(p) = &cli.out {
            write_out(p, &rep.json)?;
        }
        Ok(rep)
    });
    match result {
        Ok(rep) => {
            if cli.json {
                emit(&serde_json::to_string_pretty(&rep.json).expect("serializable"));
            } else {
                emit(&rep.text);
            }
            rep.code
        }
        Err(e) => {
            let v = error_json(module, &e, &caps);
            if let Some(p) = &cli.out {
                let _ = write_out(p, &v);
            }
            if cli.json {
                emit(&serde_json::to_string_pretty(&v).expect("serializable"));
            }
            eprintln!("fa {module}: {e}");
            if e.exit_code() == 3 {
                eprintln!("caps in effect: {}", caps_json(&caps));
            }
            e.exit_code()
        }
    }
}
