//! `mte`: command-line front-end to the mtekit library.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "mte", version, about = "Morphosyntactic specifications, MSDs, lexica, corpora and alignments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Specification file (tabular or TEI, detected from the content).
    #[arg(long, global = true, value_name = "FILE")]
    pub spec: Option<PathBuf>,
    /// Serialisation of specifications and indexes written.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tabular)]
    pub format: Format,
    /// Default language of MSDs and lexica.
    #[arg(long, global = true)]
    pub lang: Option<String>,
    /// MSD ordering; without it MSDs are read in the language's own ordering,
    /// falling back to the common one.
    #[arg(long, global = true, value_enum)]
    pub ordering: Option<OrderingArg>,
    /// MSDs use the language's localised codes.
    #[arg(long, global = true)]
    pub localise: bool,
    /// Accept MSDs with trailing hyphens.
    #[arg(long, global = true)]
    pub lenient: bool,
    /// Prose reports instead of tab-separated lines.
    #[arg(long, global = true)]
    pub human: bool,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Tabular,
    Tei,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum OrderingArg {
    Common,
    Particular,
}

#[derive(Subcommand)]
enum Command {
    /// Specification operations.
    #[command(subcommand)]
    Spec(SpecCmd),
    /// MSD conversion and validation; reads one MSD per line.
    #[command(subcommand)]
    Msd(MsdCmd),
    /// Lexicon validation and MSD indexes.
    #[command(subcommand)]
    Lex(LexCmd),
    /// Annotated corpus operations.
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Sentence alignments.
    #[command(subcommand)]
    Align(AlignCmd),
}

#[derive(Subcommand)]
pub enum SpecCmd {
    /// Consistency check of the specification.
    Validate,
    /// Attributes, attribute-value pairs and languages per category.
    Stats,
    /// Language section for a new language seeded from existing ones.
    Split {
        /// Comma-separated seed languages.
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<String>,
        #[arg(long)]
        new_language: String,
    },
    /// Merge a language section into the common tables.
    Merge {
        section: PathBuf,
        /// Write the merged specification here; change records then go to
        /// standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Differences between two specifications.
    Diff { old: PathBuf, new: PathBuf },
    /// Markdown document of the specification.
    Render,
}

#[derive(Subcommand)]
pub enum MsdCmd {
    /// Feature structure of each MSD.
    Decode { input: Option<PathBuf> },
    /// MSD of each `Category Attr=value ...` line.
    Encode { input: Option<PathBuf> },
    /// Expansion of each MSD.
    Expand {
        input: Option<PathBuf>,
        #[arg(long, default_value = "minimal")]
        form: String,
    },
    /// Sort MSDs in collation order.
    Sort {
        input: Option<PathBuf>,
        /// Prefix each MSD with its collation key.
        #[arg(long)]
        keys: bool,
    },
    /// Validity and canonical form of each MSD.
    Validate { input: Option<PathBuf> },
    /// Switch MSDs between English and localised codes.
    Relocalise {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Target::Native)]
        to: Target,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Native,
    English,
}

#[derive(Args, Clone)]
pub struct LexArgs {
    pub lexicon: PathBuf,
    /// Fields are separated by runs of whitespace instead of single tabs.
    #[arg(long)]
    pub whitespace: bool,
    /// `=` stands for the other of word-form and lemma.
    #[arg(long)]
    pub equals: bool,
}

#[derive(Subcommand)]
pub enum LexCmd {
    Validate {
        #[command(flatten)]
        lex: LexArgs,
    },
    /// MSD index from the lexicon, with counts when a corpus is given.
    Index {
        #[command(flatten)]
        lex: LexArgs,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum CorpusCmd {
    /// Structure, identifiers and MSD references (against --spec if given).
    Validate {
        corpus: PathBuf,
        /// Reject elements outside the supported subset.
        #[arg(long)]
        strict: bool,
    },
    /// Replace the feature libraries by ones generated from --spec.
    AttachFslib { corpus: PathBuf },
    /// Counts per division, paragraph and text.
    Stats { corpus: PathBuf },
}

#[derive(Subcommand)]
pub enum AlignCmd {
    /// Check links, optionally against the corpora of their documents.
    Validate {
        alignment: PathBuf,
        /// `DOCUMENT=FILE`, repeatable.
        #[arg(long = "corpus", value_name = "DOCUMENT=FILE")]
        corpora: Vec<String>,
    },
    /// Compose two alignments with a shared hub document.
    Compose {
        hub_to_x: PathBuf,
        hub_to_y: PathBuf,
        /// Write the null-link list here.
        #[arg(long)]
        null_report: Option<PathBuf>,
    },
    /// Compose any number of hub alignments into one multi-way alignment.
    ComposeMultiway {
        #[arg(required = true)]
        groups: Vec<PathBuf>,
        #[arg(long)]
        include_hub: bool,
        /// Hub document, when the groups share more than one.
        #[arg(long)]
        hub: Option<String>,
        #[arg(long)]
        null_report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spec(cmd) => commands::spec(&cli.global, cmd),
        Command::Msd(cmd) => commands::msd(&cli.global, cmd),
        Command::Lex(cmd) => commands::lex(&cli.global, cmd),
        Command::Corpus(cmd) => commands::corpus(&cli.global, cmd),
        Command::Align(cmd) => commands::align(&cli.global, cmd),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            eprint!("{}", out.stderr);
            ExitCode::from(if out.failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("mte: {e}");
            ExitCode::from(2)
        }
    }
}
