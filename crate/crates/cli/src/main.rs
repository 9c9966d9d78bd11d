use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emphase_core::{Bundle, BundleSources, EmphasisQ, PipelineError};

mod commands;

#[derive(Parser)]
#[command(
    name = "emphase",
    version,
    about = "Derive case frames and semantic forms, plan SPL and realize German clauses",
    long_about = "Derive case frames and semantic forms, plan SPL and realize German clauses.\n\n\
        Every data file defaults to the built-in change-of-possession set.\n\
        Exit status: 0 success, 1 input error, 2 rule gap."
)]
struct Cli {
    #[command(flatten)]
    data: DataArgs,

    /// Output style; structured prints parenthesized terms
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// Lexical field definition
    #[arg(long, value_name = "FILE", global = true)]
    field: Option<PathBuf>,
    /// Role rule table
    #[arg(long, value_name = "FILE", global = true)]
    rules: Option<PathBuf>,
    /// Direct case table
    #[arg(long, value_name = "FILE", global = true)]
    cases: Option<PathBuf>,
    /// Oblique (prepositional) realizations
    #[arg(long, value_name = "FILE", global = true)]
    oblique: Option<PathBuf>,
    /// Verb lexicon
    #[arg(long, value_name = "FILE", global = true)]
    lexicon: Option<PathBuf>,
    /// Upper Model types and selection rules
    #[arg(long, value_name = "FILE", global = true)]
    um: Option<PathBuf>,
    /// Referent to noun phrase table
    #[arg(long = "np-lexicon", value_name = "FILE", global = true)]
    np_lexicon: Option<PathBuf>,
    /// Article and pronoun forms
    #[arg(long, value_name = "FILE", global = true)]
    morph: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum QArg {
    Emphatic,
    Nonemphatic,
}

impl From<QArg> for EmphasisQ {
    fn from(q: QArg) -> Self {
        match q {
            QArg::Emphatic => EmphasisQ::Emphatic,
            QArg::Nonemphatic => EmphasisQ::Nonemphatic,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the maximum case frame
    Frame {
        /// Name of the loaded field, or a field file
        #[arg(value_name = "FIELD")]
        name: Option<String>,
    },
    /// Print every semantic form with its verbs and process type
    Forms {
        /// Name of the loaded field, or a field file
        #[arg(value_name = "FIELD")]
        name: Option<String>,
    },
    /// Print the SPL plan for a verb and binding
    Spl(GenerateArgs),
    /// Print the realized sentence for a verb and binding
    Realize(GenerateArgs),
    /// Print the SPL plan followed by the sentence
    Generate(GenerateArgs),
    /// Replay a discourse script and report textual statuses
    Plan {
        #[arg(long, value_name = "FILE")]
        script: PathBuf,
        /// Report only this referent
        #[arg(long)]
        referent: Option<String>,
    },
    /// Cross-check rules, lexicon and Upper Model
    Check,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Verb lemma, e.g. schicken
    #[arg(long)]
    verb: String,
    /// Variable binding file
    #[arg(long, value_name = "FILE")]
    bindings: PathBuf,
    /// Emphasis of the recipient
    #[arg(long = "emphasis-q", value_enum, conflicts_with = "script")]
    emphasis_q: Option<QArg>,
    /// Discourse script deciding the recipient's emphasis
    #[arg(long, value_name = "FILE")]
    script: Option<PathBuf>,
}

/// A failed command and its exit status.
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure {
            code: if e.rule_gap { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn source(path: &Option<PathBuf>, default: (&'static str, &'static str)) -> Result<(String, String), Failure> {
    match path {
        Some(p) => Ok((p.display().to_string(), read_file(p)?)),
        None => Ok((default.0.to_string(), default.1.to_string())),
    }
}

fn pair((name, text): &(String, String)) -> (&str, &str) {
    (name, text)
}

fn load(data: &DataArgs, field_override: Option<&Path>) -> Result<Bundle, Failure> {
    let shipped = BundleSources::shipped();
    let field_path = field_override.map(Path::to_path_buf).or_else(|| data.field.clone());
    let field = source(&field_path, shipped.field)?;
    let rules = source(&data.rules, shipped.rules)?;
    let cases = source(&data.cases, shipped.cases)?;
    let oblique = source(&data.oblique, shipped.oblique)?;
    let lexicon = source(&data.lexicon, shipped.lexicon)?;
    let upper_model = source(&data.um, shipped.upper_model)?;
    let np_lexicon = source(&data.np_lexicon, shipped.np_lexicon)?;
    let morphology = source(&data.morph, shipped.morphology)?;
    Ok(Bundle::load(&BundleSources {
        field: pair(&field),
        rules: pair(&rules),
        cases: pair(&cases),
        oblique: pair(&oblique),
        lexicon: pair(&lexicon),
        upper_model: pair(&upper_model),
        np_lexicon: pair(&np_lexicon),
        morphology: pair(&morphology),
    })?)
}

/// Loads the bundle for a command taking an optional field name or path.
fn load_field(data: &DataArgs, field: Option<&str>) -> Result<Bundle, Failure> {
    let Some(arg) = field else {
        return load(data, None);
    };
    let path = Path::new(arg);
    if path.is_file() {
        if data.field.is_some() {
            return Err(Failure::input("give the field either as --field or as an argument"));
        }
        return load(data, Some(path));
    }
    let bundle = load(data, None)?;
    if bundle.field.name != arg {
        return Err(Failure::input(format!(
            "unknown field {arg}; the loaded field is {}",
            bundle.field.name
        )));
    }
    Ok(bundle)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let structured = cli.format == Format::Structured;
    match &cli.command {
        Command::Frame { name } => commands::frame(&load_field(&cli.data, name.as_deref())?, structured),
        Command::Forms { name } => commands::forms(&load_field(&cli.data, name.as_deref())?, structured),
        Command::Spl(args) => commands::spl(&load(&cli.data, None)?, args, structured),
        Command::Realize(args) => commands::realize(&load(&cli.data, None)?, args, structured),
        Command::Generate(args) => commands::generate(&load(&cli.data, None)?, args, structured),
        Command::Plan { script, referent } => commands::plan(script, referent.as_deref(), structured),
        Command::Check => commands::check(&load(&cli.data, None)?, structured),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors are input errors; exit status 2 is kept for rule gaps.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("emphase: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
