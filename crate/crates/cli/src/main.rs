use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fwedge_core::expansion::{ExpansionElement, ExpansionError, Family, DEFAULT_CAP};
use fwedge_core::fwedge::{enriched_closure, eval_term, EnrichedTerm, TermError, WedgeMonoid};
use fwedge_core::group::{FiniteGroup, Word};
use fwedge_core::suites::{self, Suite, SuiteConfig, SuiteError};

#[derive(Parser)]
#[command(name = "fwedge", version, about = "Expansions of finite groups into inverse monoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word or an enriched term.
    Eval(EvalArgs),
    /// Count (and optionally list) the elements of an expansion.
    Enumerate(EnumerateArgs),
    /// Run verification suites.
    Check(CheckArgs),
    /// Export a subgraph or the whole Cayley graph as DOT.
    Dot(DotArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Group,
    #[value(name = "M")]
    M,
    #[value(name = "F")]
    F,
    #[value(name = "Mwedge")]
    Mwedge,
    /// `M(G, Y)` over the extended generating set.
    #[value(name = "MY")]
    My,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum By {
    Graphs,
    Words,
}

#[derive(Args)]
struct EvalArgs {
    group: PathBuf,
    #[arg(long, conflicts_with = "term", required_unless_present = "term")]
    word: Option<String>,
    #[arg(long)]
    term: Option<String>,
    #[arg(long, value_enum, default_value = "group")]
    model: Model,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct EnumerateArgs {
    group: PathBuf,
    #[arg(long, value_enum, default_value = "M")]
    model: Model,
    #[arg(long, value_enum, default_value = "graphs")]
    by: By,
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    #[arg(long, default_value_t = DEFAULT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Print every element, not just the count.
    #[arg(long)]
    list: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct CheckArgs {
    group: PathBuf,
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    suite: Suite,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    #[arg(long, default_value_t = DEFAULT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct DotArgs {
    group: PathBuf,
    #[arg(long, conflicts_with_all = ["word", "cayley"])]
    element: Option<String>,
    #[arg(long, conflicts_with = "cayley")]
    word: Option<String>,
    #[arg(long)]
    cayley: bool,
    #[arg(long, value_enum, default_value = "M")]
    model: Model,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: SuiteError| e.to_string())
}

/// Everything that ends a run early, with its exit code.
#[derive(Debug)]
enum Failure {
    Syntax(String),
    Input(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Syntax(_) => 2,
            Failure::Input(_) => 3,
            Failure::Cap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Syntax(m) | Failure::Input(m) | Failure::Cap(m) => m,
        }
    }
}

impl From<ExpansionError> for Failure {
    fn from(e: ExpansionError) -> Self {
        match e {
            ExpansionError::TooLarge { .. } => Failure::Cap(e.to_string()),
            ExpansionError::Parse(_) | ExpansionError::UnknownLetter(_) => Failure::Syntax(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<TermError> for Failure {
    fn from(e: TermError) -> Self {
        match e {
            TermError::Model(_) => Failure::Input(e.to_string()),
            _ => Failure::Syntax(e.to_string()),
        }
    }
}

impl From<SuiteError> for Failure {
    fn from(e: SuiteError) -> Self {
        if e.is_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn load_group(path: &Path) -> Result<FiniteGroup, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    FiniteGroup::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn family(g: &FiniteGroup, model: Model) -> Result<Family, Failure> {
    Ok(match model {
        Model::M => Family::margolis_meakin(g),
        Model::F => Family::f_expansion(g),
        Model::Mwedge => Family::wedge(g),
        Model::My => Family::margolis_meakin_extended(g),
        Model::Group => return Err(Failure::Input("the group model has no subgraphs".into())),
    })
}

fn parse_term(g: &FiniteGroup, text: &str) -> Result<EnrichedTerm, Failure> {
    Ok(EnrichedTerm::parse(text, g.generators())?)
}

fn parse_word(f: &Family, text: &str) -> Result<Word, Failure> {
    Word::parse(text, f.cayley().gens()).map_err(|e| Failure::Syntax(e.to_string()))
}

fn eval_in(g: &FiniteGroup, model: Model, word: Option<&str>, term: Option<&str>) -> Result<String, Failure> {
    if model == Model::Group {
        if let Some(w) = word {
            let w = Word::parse(w, g.generators()).map_err(|e| Failure::Syntax(e.to_string()))?;
            let v = g.eval_word(g.generators(), &w).map_err(|e| Failure::Input(e.to_string()))?;
            return Ok(g.element_name(v).to_string());
        }
        let t = parse_term(g, term.unwrap_or_default())?;
        return Ok(g.element_name(eval_term(g, &t)?).to_string());
    }
    let f = family(g, model)?;
    let value: ExpansionElement = match (model, word) {
        (Model::Mwedge, _) => {
            let t = parse_term(g, word.or(term).unwrap_or_default())?;
            eval_term(&WedgeMonoid::new(g), &t)?
        }
        (_, Some(w)) => f.eval_word(&parse_word(&f, w)?),
        (Model::My, None) => return Err(Failure::Input("M(G,Y) evaluates words only".into())),
        (_, None) => eval_term(&f, &parse_term(g, term.unwrap_or_default())?)?,
    };
    Ok(f.format_element(&value))
}

fn cmd_eval(a: &EvalArgs) -> Result<String, Failure> {
    let g = load_group(&a.group)?;
    let v = eval_in(&g, a.model, a.word.as_deref(), a.term.as_deref())?;
    Ok(match a.format {
        Format::Json => format!("{}\n", json!({ "element": v })),
        _ => format!("{v}\n"),
    })
}

fn cmd_enumerate(a: &EnumerateArgs) -> Result<String, Failure> {
    let g = load_group(&a.group)?;
    let cap = a.cap as u128;
    let names: Vec<String> = match a.model {
        Model::Group => g.elements().map(|x| g.element_name(x).to_string()).collect(),
        model => {
            let f = family(&g, model)?;
            let elems = match (a.by, model) {
                (By::Graphs, Model::Mwedge) => WedgeMonoid::new(&g).enumerate(cap)?,
                (By::Graphs, _) => f.enumerate_elements(cap)?,
                (By::Words, Model::M | Model::My) => {
                    let limit = usize::try_from(cap).unwrap_or(usize::MAX);
                    let found = f.enumerate_by_words_limited(a.max_len, limit.saturating_add(1));
                    if found.len() > limit {
                        return Err(Failure::Cap(format!("word generation exceeded the cap {cap}")));
                    }
                    found
                }
                (By::Words, _) => {
                    // F and M^∧ need m: generate in the enriched signature
                    let letters: Vec<String> = g.generators().letters().iter().map(|l| l.name.clone()).collect();
                    let limit = usize::try_from(cap).unwrap_or(usize::MAX);
                    let found = if model == Model::F {
                        enriched_closure(&f, &letters, limit)?
                    } else {
                        enriched_closure(&WedgeMonoid::new(&g), &letters, limit)?
                    };
                    found.ok_or_else(|| Failure::Cap(format!("generation exceeded the cap {cap}")))?
                }
            };
            elems.iter().map(|s| f.format_element(s)).collect()
        }
    };
    Ok(match a.format {
        Format::Json if a.list => format!("{}\n", json!({ "count": names.len(), "elements": names })),
        Format::Json => format!("{}\n", json!({ "count": names.len() })),
        _ => {
            let mut out = format!("{}\n", names.len());
            if a.list {
                for n in &names {
                    out.push_str(n);
                    out.push('\n');
                }
            }
            out
        }
    })
}

fn cmd_check(a: &CheckArgs) -> Result<(String, bool), Failure> {
    let g = load_group(&a.group)?;
    let cfg = SuiteConfig {
        samples: a.samples,
        seed: a.seed,
        max_len: a.max_len,
        cap: a.cap as u128,
        ..SuiteConfig::default()
    };
    let report = suites::run(&g, a.suite, &cfg)?;
    let text = match a.format {
        Format::Json => format!("{}\n", report.to_json()),
        _ => report.to_string(),
    };
    Ok((text, report.passed()))
}

fn cmd_dot(a: &DotArgs) -> Result<String, Failure> {
    let g = load_group(&a.group)?;
    let model = if a.model == Model::Group { Model::M } else { a.model };
    let f = family(&g, model)?;
    let c = f.cayley();
    let dot = if a.cayley {
        c.to_dot(&c.whole(), &format!("Cay({})", g.name()))
    } else if let Some(text) = &a.element {
        let s = f.parse_element(text)?;
        c.to_dot(&s.graph, &f.format_element(&s))
    } else if let Some(w) = &a.word {
        let s = if model == Model::Mwedge {
            eval_term(&WedgeMonoid::new(&g), &parse_term(&g, w)?)?
        } else {
            f.eval_word(&parse_word(&f, w)?)
        };
        c.to_dot(&s.graph, &f.format_element(&s))
    } else {
        return Err(Failure::Syntax("one of --element, --word or --cayley is required".into()));
    };
    match &a.out {
        Some(path) => {
            fs::write(path, &dot).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(dot),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval(a) => cmd_eval(a).map(|s| (s, true)),
        Command::Enumerate(a) => cmd_enumerate(a).map(|s| (s, true)),
        Command::Check(a) => cmd_check(a),
        Command::Dot(a) => cmd_dot(a).map(|s| (s, true)),
    };
    match outcome {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
