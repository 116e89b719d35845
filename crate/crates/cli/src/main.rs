mod input;
mod request;
mod verify;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use bayonet::cbc::{BayonetPair, CbcFamily, DEFAULT_CLOSURE_CAP, DEFAULT_ENUMERATION_BOUND};
use bayonet::completion::ExpansionRow;
use bayonet::hajos::{FamilyHajosChain, NonHajosSpec};
use bayonet::words::{FiniteCode, Word};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use request::{Request, Status};

/// Exit code for malformed input or usage.
const EXIT_INPUT: u8 = 3;
/// Exit code for failures that are not the input's fault.
const EXIT_INTERNAL: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Library(bayonet::Error),
    Internal(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Input(m) => write!(f, "input: {m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Internal(m) => write!(f, "internal: {m}"),
        }
    }
}

impl From<bayonet::Error> for CliError {
    fn from(e: bayonet::Error) -> Self {
        CliError::Library(e)
    }
}

/// The machine-readable result of one command.
#[derive(Debug, Serialize, Deserialize)]
pub struct CommandResult {
    pub command: String,
    pub verdict: String,
    pub status: Status,
    pub input: Request,
    pub certificate: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct Global {
    /// Input file, `-` for stdin.
    #[arg(long, global = true)]
    input: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Same as `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Largest modulus for exhaustive cbc enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_BOUND)]
    max_n: usize,
    /// Largest prefix-suffix chain reported.
    #[arg(long, global = true, default_value_t = 6)]
    depth_bound: usize,
    /// Family member used as the seed of border construction.
    #[arg(long, global = true, default_value_t = 0)]
    seed_member: usize,
    /// Largest stable closure materialized.
    #[arg(long, global = true, default_value_t = DEFAULT_CLOSURE_CAP)]
    closure_cap: usize,
    /// Include the running time in the output.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Parser)]
#[command(name = "bayonet", version, about = "Decision procedures for complete bayonet codes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Unique decipherability of a word list.
    CheckCode { words: Vec<Word> },
    /// Whether a pair set is an n-cbc.
    CheckCbc,
    /// `X ∘_r Y` for two members of a family.
    Compose {
        #[arg(long, default_value_t = 0)]
        left: usize,
        #[arg(long, default_value_t = 1)]
        right: usize,
        #[arg(long, default_value_t = 0)]
        r: usize,
    },
    /// Compatibility of a family.
    Compatible,
    /// Stable closure of a compatible family.
    Stable,
    #[command(subcommand)]
    Border(BorderCommand),
    #[command(subcommand)]
    Hajos(HajosCommand),
    #[command(subcommand)]
    Krasner(KrasnerCommand),
    /// The triangle property of a cbc.
    Triangle,
    /// φ_{d1,d2} of a member, checked against a border of the closure.
    Phi {
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        #[arg(long, default_value_t = 0)]
        member: usize,
        #[command(flatten)]
        border: BorderArgs,
    },
    /// Divisibility bounds from the μ transforms of a bayonet code.
    MuAnalyze {
        #[arg(long, default_value_t = 7)]
        prime_bound: usize,
    },
    /// The non-Hajós cbc built from four primes.
    Counterexample {
        #[arg(long)]
        p1: usize,
        #[arg(long)]
        p2: usize,
        #[arg(long)]
        q1: usize,
        #[arg(long)]
        q2: usize,
        /// Skip the Krasner border exhaustion.
        #[arg(long)]
        skip_krasner: bool,
    },
    /// Prefix-suffix completion of a Hajós family, or the explicit expansion.
    Complete,
    /// The inclusion equivalence for {a^n} ∪ X with X ⊆ a*ωa*.
    Inclusion {
        #[arg(long)]
        omega: Word,
        #[arg(long)]
        n: usize,
        words: Vec<Word>,
    },
    /// Searches a prefix-suffix chain down to the alphabet.
    PrefixSuffix { words: Vec<Word> },
    /// Joint embeddability of pair sets into a compatible family.
    Embed,
    /// Re-checks a JSON result produced by another command.
    Verify,
}

#[derive(Debug, Args)]
struct BorderArgs {
    /// Border file (JSON or factorization text).
    #[arg(long)]
    border: Option<String>,
    /// Left set, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// Right set, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
}

#[derive(Debug, Subcommand)]
enum BorderCommand {
    /// Constructs a border of the stable closure.
    Find,
    /// Checks a border against the stable closure.
    Check {
        #[command(flatten)]
        border: BorderArgs,
    },
}

#[derive(Debug, Subcommand)]
enum HajosCommand {
    /// Hajós recognition of a cbc.
    Cbc,
    /// Hajós recognition of a family.
    Family,
    /// Hajós and cbc Hajós number classification.
    Number { n: usize },
}

#[derive(Debug, Subcommand)]
enum KrasnerCommand {
    /// Krasner factorizations of size n.
    Enum { n: usize },
    /// Whether a factorization is Krasner.
    Check,
    /// Decomposition against Krasner borders for a family.
    Equiv,
    /// Both characterizations over every n-cbc.
    Sweep { n: usize },
}

/// JSON body of `complete`.
#[derive(Deserialize)]
#[serde(untagged)]
enum CompleteInput {
    Hajos {
        family: CbcFamily,
        omegas: Vec<Word>,
        xs: Vec<Vec<BayonetPair>>,
        #[serde(default)]
        chain: Option<FamilyHajosChain>,
    },
    Expansion {
        code: FiniteCode,
        n: usize,
        t: usize,
        rows: Vec<ExpansionRow>,
    },
}

#[derive(Deserialize)]
struct EmbedInput {
    n: usize,
    required: Vec<Vec<BayonetPair>>,
}

impl Global {
    fn text(&self) -> Result<String, CliError> {
        let path = self.input.as_deref().ok_or_else(|| CliError::usage("this command needs --input <path>"))?;
        input::read_source(path)
    }

    fn words(&self, inline: &[Word]) -> Result<FiniteCode, CliError> {
        if inline.is_empty() {
            input::words(&self.text()?)
        } else {
            Ok(FiniteCode::new(inline.iter().cloned()))
        }
    }

    fn family(&self) -> Result<CbcFamily, CliError> {
        input::family(&self.text()?)
    }

    fn json(&self) -> bool {
        self.json || self.format == Format::Json
    }
}

fn border(args: &BorderArgs, n: usize) -> Result<bayonet::Border, CliError> {
    input::border(args.border.as_deref(), args.p.as_deref(), args.q.as_deref(), n)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::input(format!("JSON input: {e}")))
}

fn request(cmd: &Command, g: &Global) -> Result<Request, CliError> {
    Ok(match cmd {
        Command::CheckCode { words } => Request::CheckCode { words: g.words(words)? },
        Command::CheckCbc => {
            let (n, pairs) = input::raw_cbc(&g.text()?)?;
            Request::CheckCbc { n, pairs }
        }
        Command::Compose { left, right, r } => {
            Request::Compose { family: g.family()?, left: *left, right: *right, r: *r }
        }
        Command::Compatible => Request::Compatible { family: g.family()? },
        Command::Stable => Request::Stable { family: g.family()?, cap: g.closure_cap },
        Command::Border(BorderCommand::Find) => Request::BorderFind { family: g.family()?, seed: g.seed_member },
        Command::Border(BorderCommand::Check { border: b }) => {
            let family = g.family()?;
            let border = border(b, family.n())?;
            Request::BorderCheck { family, border }
        }
        Command::Hajos(HajosCommand::Cbc) => Request::HajosCbc { cbc: input::cbc(&g.text()?)? },
        Command::Hajos(HajosCommand::Family) => Request::HajosFamily { family: g.family()? },
        Command::Hajos(HajosCommand::Number { n }) => Request::HajosNumber { n: *n },
        Command::Krasner(KrasnerCommand::Enum { n }) => Request::KrasnerEnum { n: *n },
        Command::Krasner(KrasnerCommand::Check) => {
            Request::KrasnerCheck { factorization: input::factorization(&g.text()?)? }
        }
        Command::Krasner(KrasnerCommand::Equiv) => Request::KrasnerEquiv { family: g.family()? },
        Command::Krasner(KrasnerCommand::Sweep { n }) => Request::KrasnerSweep { n: *n, bound: g.max_n },
        Command::Triangle => Request::Triangle { cbc: input::cbc(&g.text()?)? },
        Command::Phi { d1, d2, member, border: b } => {
            let family = g.family()?;
            let border = border(b, family.n())?;
            Request::Phi { family, border, member: *member, d1: *d1, d2: *d2 }
        }
        Command::MuAnalyze { prime_bound } => {
            Request::MuAnalyze { words: input::words(&g.text()?)?, prime_bound: *prime_bound }
        }
        Command::Counterexample { p1, p2, q1, q2, skip_krasner } => Request::Counterexample {
            spec: NonHajosSpec::new(*p1, *p2, *q1, *q2),
            check_krasner: !skip_krasner,
        },
        Command::Complete => match parse_json::<CompleteInput>(&g.text()?)? {
            CompleteInput::Hajos { family, omegas, xs, chain } => Request::CompleteHajos { family, omegas, xs, chain },
            CompleteInput::Expansion { code, n, t, rows } => Request::CompleteExpansion { code, n, t, rows },
        },
        Command::Inclusion { omega, n, words } => Request::Inclusion {
            words: g.words(words)?,
            omega: omega.clone(),
            n: *n,
            bound: g.max_n,
            depth_bound: g.depth_bound,
        },
        Command::PrefixSuffix { words } => Request::PrefixSuffix { words: g.words(words)?, depth_bound: g.depth_bound },
        Command::Embed => {
            let e: EmbedInput = parse_json(&g.text()?)?;
            Request::Embed { n: e.n, required: e.required, bound: g.max_n }
        }
        Command::Verify => unreachable!("handled separately"),
    })
}

fn emit(result: &CommandResult, text: &str, json: bool) -> Result<(), CliError> {
    let mut body = String::new();
    if json {
        body = serde_json::to_string_pretty(result).map_err(|e| CliError::Internal(e.to_string()))?;
    } else {
        body.push_str(&format!("{}: {}", result.command, result.verdict));
        if !text.is_empty() {
            body.push('\n');
            body.push_str(text);
        }
        if let Some(ms) = result.timing_ms {
            body.push_str(&format!("\ntime: {ms} ms"));
        }
    }
    print_line(&body)
}

/// Writes one block to stdout; a closed pipe is not an error.
fn print_line(body: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{body}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Internal(e.to_string())),
        _ => Ok(()),
    }
}

fn run_verify(g: &Global) -> Result<u8, CliError> {
    let doc: CommandResult = parse_json(&g.text()?)?;
    let ok = verify::verify(&doc)?;
    let verdict = if ok { "confirmed" } else { "rejected" };
    if g.json() {
        print_line(&serde_json::json!({ "command": "verify", "checked": doc.command, "verdict": verdict }).to_string())?;
    } else {
        print_line(&format!("verify {}: {verdict}", doc.command))?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let g = &cli.global;
    if let Command::Verify = cli.command {
        return run_verify(g);
    }
    let req = request(&cli.command, g)?;
    let start = Instant::now();
    let outcome = req.execute()?;
    let elapsed = start.elapsed().as_millis();
    let result = CommandResult {
        command: req.name(),
        verdict: outcome.verdict,
        status: outcome.status,
        input: req,
        certificate: outcome.certificate,
        timing_ms: g.timing.then_some(elapsed),
    };
    emit(&result, &outcome.text, g.json())?;
    Ok(result.status.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
