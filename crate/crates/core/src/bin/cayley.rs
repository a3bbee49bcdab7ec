use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use cayley_core::corpus::{generate_tables, CorpusFilter, CorpusSpec, DedupMode};
use cayley_core::element::{act, enumerate, EnumerationResult, GenWord};
use cayley_core::io::{corpus_line, format_element_list, parse_element_list, parse_table, print_table};
use cayley_core::verify::{verify, VerifyOptions};
use cayley_core::{build_cayley_machine, classify, Error, Exec, MulTable};

#[derive(Parser)]
#[command(name = "cayley", version, about = "Cayley automaton semigroups of finite semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify C(S) from the table of S; prints a JSON report.
    Classify { input: PathBuf },
    /// Write the Cayley machine of S as DOT.
    Machine {
        input: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Enumerate C(S) breadth-first; prints a JSON report.
    Enumerate {
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Apply a product of states to a finite prefix.
    Act {
        input: PathBuf,
        /// Comma-separated 1-based states, applied first to last.
        #[arg(long)]
        word: String,
        /// Comma-separated 1-based letters.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        prefix: String,
    },
    /// Cross-check every prediction over all small semigroups.
    Verify {
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        free_len: usize,
        /// labeled, up_to_iso or up_to_iso_anti.
        #[arg(long, default_value = "up_to_iso_anti")]
        mode: String,
        /// h_trivial, not_h_trivial, monoid, commutative or band.
        #[arg(long)]
        filter: Option<String>,
        /// Write the full JSON report here; a summary goes to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Dump the corpus of one order, one table per line.
    Corpus {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "up_to_iso_anti")]
        mode: String,
        #[arg(long)]
        filter: Option<String>,
    },
    /// Print a standard table, e.g. `left_zero:3`, `s3`, `rectangular_band:2x2`, `ijkf`.
    Table { family: String },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
    Disagreements(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(Error::NotAssociative { .. }) => 3,
            Failure::Lib(Error::Parse { .. } | Error::Malformed(_) | Error::SizeCap { .. }) | Failure::Io(_) => 2,
            Failure::Disagreements(_) => 4,
            Failure::Lib(_) => 1,
        }
    }
}

fn read_table(path: &Path) -> Result<MulTable, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_table(&text)?)
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

#[derive(Serialize)]
struct EnumerationJson {
    status: &'static str,
    element_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    cayley: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator_map: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    words: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap_hit: Option<bool>,
}

impl From<&EnumerationResult> for EnumerationJson {
    fn from(result: &EnumerationResult) -> Self {
        let plus_one = |row: &[usize]| row.iter().map(|x| x + 1).collect::<Vec<_>>();
        match result {
            EnumerationResult::Closed { elements, words, cayley, generator_map } => EnumerationJson {
                status: "closed",
                element_count: elements.len(),
                cayley: Some(cayley.rows().iter().map(|r| plus_one(r)).collect()),
                generator_map: Some(plus_one(generator_map)),
                words: Some(words.iter().map(|w| format_element_list(w.letters())).collect()),
                cap_hit: None,
            },
            EnumerationResult::Exceeded { count_reached, cap_hit } => EnumerationJson {
                status: "exceeded",
                element_count: *count_reached,
                cayley: None,
                generator_map: None,
                words: None,
                cap_hit: Some(*cap_hit),
            },
        }
    }
}

fn parse_mode(mode: &str, filter: Option<&str>) -> Result<(DedupMode, Option<CorpusFilter>), Failure> {
    let mode = mode.parse()?;
    let filter = filter.map(str::parse).transpose()?;
    Ok((mode, filter))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { input } => {
            println!("{}", classify(&read_table(&input)?).to_json());
        }
        Command::Machine { input, dot } => {
            let text = build_cayley_machine(&read_table(&input)?).to_dot();
            match dot {
                Some(path) => fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
        }
        Command::Enumerate { input, budget } => {
            let s = read_table(&input)?;
            println!("{}", json(&EnumerationJson::from(&enumerate(&s, budget)?)));
        }
        Command::Act { input, word, prefix } => {
            let s = read_table(&input)?;
            let word = GenWord::new(parse_element_list(&word, s.order())?)?;
            let prefix = parse_element_list(&prefix, s.order())?;
            println!("{}", format_element_list(&act(&s, &word, &prefix)));
        }
        Command::Verify { max_order, budget, free_len, mode, filter, out, sequential } => {
            let (mode, filter) = parse_mode(&mode, filter.as_deref())?;
            let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
            let report = verify(VerifyOptions { max_order, budget, free_len, mode, filter, exec })?;
            if let Some(path) = out {
                fs::write(&path, json(&report)).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            println!("{}", json(&report.summary));
            for table in &report.inconclusive {
                eprintln!("inconclusive free pair search: {table}");
            }
            if !report.is_clean() {
                return Err(Failure::Disagreements(report.disagreements));
            }
        }
        Command::Corpus { order, mode, filter } => {
            let (mode, filter) = parse_mode(&mode, filter.as_deref())?;
            for table in generate_tables(CorpusSpec { order, mode, filter })? {
                println!("{}", corpus_line(&table));
            }
        }
        Command::Table { family } => {
            print!("{}", print_table(&cayley_core::semigroup::named_family(&family)?));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Io(msg) => eprintln!("error: {msg}"),
                Failure::Disagreements(tables) => {
                    eprintln!("error: {} disagreement(s)", tables.len());
                    for table in tables {
                        eprintln!("  {table}");
                    }
                }
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
