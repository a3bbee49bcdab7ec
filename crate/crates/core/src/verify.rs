//! Corpus cross-check: every table-level prediction against what the
//! element engine actually computes.

use std::time::Instant;

use serde::Serialize;

use crate::classify::{classify, find_free_pair, infinite_witness, ClassificationReport, StabilizerWitness};
use crate::corpus::{generate_tables, CorpusFilter, CorpusSpec, DedupMode};
use crate::element::{count_distinct_words_with, enumerate_with, word_count, EnumerateOptions, EnumerationResult, WORD_WORK_CAP};
use crate::error::Result;
use crate::green::brute_force_inflation;
use crate::io::corpus_line;
use crate::par::{self, Exec};
use crate::semigroup::{Element, MulTable};

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub max_order: usize,
    pub budget: usize,
    pub free_len: usize,
    pub mode: DedupMode,
    pub filter: Option<CorpusFilter>,
    pub exec: Exec,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_order: 3,
            budget: 10_000,
            free_len: 4,
            mode: DedupMode::UpToIsoAnti,
            filter: None,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Flags {
    pub is_trivial: bool,
    pub is_finite: bool,
    pub is_free: bool,
    pub free_rank: Option<usize>,
    pub is_left_zero: bool,
    pub is_right_zero: bool,
}

impl From<&ClassificationReport> for Flags {
    fn from(r: &ClassificationReport) -> Self {
        Flags {
            is_trivial: r.is_trivial,
            is_finite: r.is_finite,
            is_free: r.is_free,
            free_rank: r.free_rank,
            is_left_zero: r.is_left_zero,
            is_right_zero: r.is_right_zero,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EngineOutcome {
    /// `closed` or `exceeded`.
    pub status: &'static str,
    pub size: Option<usize>,
    pub count_reached: Option<usize>,
    pub cap_hit: bool,
    pub right_zero_table: Option<bool>,
    pub left_zero_table: Option<bool>,
    pub associative_table: Option<bool>,
    /// Distinct generator states.
    pub generator_states: usize,
    /// Distinct products of length `1..=free_len`, computed only when the
    /// table predicts freeness.
    pub distinct_words: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Agreement {
    /// Closed-form inflation test against the exhaustive search.
    pub inflation: bool,
    pub trivial: bool,
    pub finite: bool,
    pub right_zero: bool,
    pub left_zero: bool,
    /// `None` when the table does not predict freeness.
    pub free: Option<bool>,
}

impl Agreement {
    pub fn all(&self) -> bool {
        self.inflation && self.trivial && self.finite && self.right_zero && self.left_zero && self.free != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FreePairOutcome {
    #[serde(flatten)]
    pub witness: StabilizerWitness,
    /// First passing pair, 1-based. `None` is inconclusive.
    #[serde(serialize_with = "serialize_pair")]
    pub pair: Option<(Element, Element)>,
}

fn serialize_pair<S: serde::Serializer>(pair: &Option<(Element, Element)>, ser: S) -> Result<S::Ok, S::Error> {
    match pair {
        Some((u, v)) => ser.collect_seq([u + 1, v + 1]),
        None => ser.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableCheck {
    pub table: String,
    pub order: usize,
    pub flags: Flags,
    pub engine: EngineOutcome,
    pub agreement: Agreement,
    pub free_pair: Option<FreePairOutcome>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub tables: usize,
    pub agreements: usize,
    pub disagreements: usize,
    /// Non-H-trivial tables where no free pair was found at `free_len`.
    pub inconclusive: usize,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub max_order: usize,
    pub budget: usize,
    pub free_len: usize,
    pub mode: DedupMode,
    pub tables: Vec<TableCheck>,
    pub disagreements: Vec<String>,
    pub inconclusive: Vec<String>,
    pub summary: Summary,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// All cross-checks for one table.
pub fn check_table(s: &MulTable, budget: usize, free_len: usize) -> Result<TableCheck> {
    // Each table runs sequentially; parallelism is across tables.
    let exec = Exec::Sequential;
    let report = classify(s);
    let flags = Flags::from(&report);
    let result = enumerate_with(s, EnumerateOptions { budget, exec, ..Default::default() })?;

    let generator_states = s
        .elements()
        .map(|a| s.lambda_map(a))
        .collect::<std::collections::HashSet<_>>()
        .len();
    let distinct_words = if report.is_free && word_count(s.order(), free_len) <= WORD_WORK_CAP {
        Some(count_distinct_words_with(s, free_len, WORD_WORK_CAP, exec)?)
    } else {
        None
    };

    let (engine, closed_size) = match &result {
        EnumerationResult::Closed { elements, cayley, .. } => (
            EngineOutcome {
                status: "closed",
                size: Some(elements.len()),
                count_reached: None,
                cap_hit: false,
                right_zero_table: Some(cayley.is_right_zero()),
                left_zero_table: Some(cayley.is_left_zero()),
                associative_table: Some(cayley.is_associative()),
                generator_states,
                distinct_words,
            },
            Some(elements.len()),
        ),
        EnumerationResult::Exceeded { count_reached, cap_hit } => (
            EngineOutcome {
                status: "exceeded",
                size: None,
                count_reached: Some(*count_reached),
                cap_hit: *cap_hit,
                right_zero_table: None,
                left_zero_table: None,
                associative_table: None,
                generator_states,
                distinct_words,
            },
            None,
        ),
    };
    let closed = closed_size.is_some();
    let free = report.is_free.then(|| {
        distinct_words == Some(word_count(generator_states, free_len) as usize)
            && report.free_rank == Some(generator_states)
            && !closed
    });
    let agreement = Agreement {
        inflation: brute_force_inflation(s)? == report.is_trivial,
        trivial: report.is_trivial == (closed_size == Some(1)),
        finite: report.is_finite == closed && engine.associative_table != Some(false),
        right_zero: report.is_right_zero == (engine.right_zero_table == Some(true)),
        left_zero: report.is_left_zero == (engine.left_zero_table == Some(true)),
        free,
    };

    let free_pair = match infinite_witness(s) {
        Some(witness) => {
            let pair = find_free_pair(s, &witness, free_len)?;
            Some(FreePairOutcome { witness, pair })
        }
        None => None,
    };

    Ok(TableCheck { table: corpus_line(s), order: s.order(), flags, engine, agreement, free_pair })
}

/// Streams the corpus for orders `1..=max_order` and checks every table.
/// Tables are processed in chunks across workers; the report keeps corpus
/// order.
pub fn verify(opts: VerifyOptions) -> Result<VerifyReport> {
    const CHUNK: usize = 256;
    let start = Instant::now();
    let mut checks = Vec::new();
    for order in 1..=opts.max_order {
        let spec = CorpusSpec { order, mode: opts.mode, filter: opts.filter };
        let mut stream = generate_tables(spec)?.peekable();
        while stream.peek().is_some() {
            let chunk: Vec<MulTable> = stream.by_ref().take(CHUNK).collect();
            for check in par::map(opts.exec, &chunk, |s| check_table(s, opts.budget, opts.free_len)) {
                checks.push(check?);
            }
        }
    }
    let disagreements: Vec<String> = checks.iter().filter(|c| !c.agreement.all()).map(|c| c.table.clone()).collect();
    let inconclusive: Vec<String> = checks
        .iter()
        .filter(|c| c.free_pair.as_ref().is_some_and(|f| f.pair.is_none()))
        .map(|c| c.table.clone())
        .collect();
    let summary = Summary {
        tables: checks.len(),
        agreements: checks.len() - disagreements.len(),
        disagreements: disagreements.len(),
        inconclusive: inconclusive.len(),
        elapsed_ms: start.elapsed().as_millis(),
    };
    Ok(VerifyReport {
        max_order: opts.max_order,
        budget: opts.budget,
        free_len: opts.free_len,
        mode: opts.mode,
        tables: checks,
        disagreements,
        inconclusive,
        summary,
    })
}
