//! Exhaustive generation of small associative tables.
//!
//! Tables are filled cell by cell with backtracking; a partial table is
//! rejected as soon as some triple with all four needed entries known fails
//! associativity. Generation is pull-based, so nothing but the current
//! partial table is held in memory.

use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::green::is_h_trivial;
use crate::par::{self, Exec};
use crate::semigroup::MulTable;

/// Largest order the generator accepts.
pub const CORPUS_CAP: usize = 4;
/// Largest order [`canonical_form`] accepts.
pub const CANONICAL_CAP: usize = 6;

const UNSET: u8 = u8::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DedupMode {
    /// Every labeled table.
    Labeled,
    /// One representative per isomorphism class.
    UpToIso,
    /// One representative per class under isomorphism and anti-isomorphism.
    #[default]
    UpToIsoAnti,
}

impl FromStr for DedupMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "labeled" => Ok(DedupMode::Labeled),
            "up_to_iso" => Ok(DedupMode::UpToIso),
            "up_to_iso_anti" => Ok(DedupMode::UpToIsoAnti),
            _ => Err(Error::Precondition(format!("unknown dedup mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusFilter {
    HTrivial,
    NotHTrivial,
    Monoid,
    Commutative,
    Band,
}

impl CorpusFilter {
    pub fn accepts(self, s: &MulTable) -> bool {
        match self {
            CorpusFilter::HTrivial => is_h_trivial(s),
            CorpusFilter::NotHTrivial => !is_h_trivial(s),
            CorpusFilter::Monoid => s.identity().is_some(),
            CorpusFilter::Commutative => s.is_commutative(),
            CorpusFilter::Band => s.elements().all(|e| s.is_idempotent(e)),
        }
    }
}

impl FromStr for CorpusFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h_trivial" => Ok(CorpusFilter::HTrivial),
            "not_h_trivial" => Ok(CorpusFilter::NotHTrivial),
            "monoid" => Ok(CorpusFilter::Monoid),
            "commutative" => Ok(CorpusFilter::Commutative),
            "band" => Ok(CorpusFilter::Band),
            _ => Err(Error::Precondition(format!("unknown corpus filter `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub order: usize,
    pub mode: DedupMode,
    pub filter: Option<CorpusFilter>,
}

impl CorpusSpec {
    pub fn labeled(order: usize) -> Self {
        CorpusSpec { order, mode: DedupMode::Labeled, filter: None }
    }

    pub fn new(order: usize, mode: DedupMode) -> Self {
        CorpusSpec { order, mode, filter: None }
    }

    fn check(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::Malformed("a semigroup needs at least one element".into()));
        }
        if self.order > CORPUS_CAP {
            return Err(Error::SizeCap { requested: self.order, cap: CORPUS_CAP });
        }
        Ok(())
    }

    fn keep(&self, t: &MulTable) -> bool {
        let representative = match self.mode {
            DedupMode::Labeled => true,
            mode => canonical_form(t, mode).expect("order within cap") == t.cells(),
        };
        representative && self.filter.is_none_or(|f| f.accepts(t))
    }
}

/// Order in which cells are assigned during the search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FillOrder {
    #[default]
    RowMajor,
    ColumnMajor,
}

/// Backtracking search over labeled associative tables.
pub struct LabeledTables {
    n: usize,
    fill: Vec<usize>,
    cells: Vec<u8>,
    depth: usize,
    floor: usize,
    done: bool,
}

impl LabeledTables {
    pub fn new(order: usize, fill_order: FillOrder) -> Result<Self> {
        Self::with_prefix(order, fill_order, &[])
    }

    /// Only tables whose first `prefix.len()` cells, in fill order, are
    /// `prefix`.
    pub fn with_prefix(order: usize, fill_order: FillOrder, prefix: &[u8]) -> Result<Self> {
        CorpusSpec::labeled(order).check()?;
        let n = order;
        let fill: Vec<usize> = match fill_order {
            FillOrder::RowMajor => (0..n * n).collect(),
            FillOrder::ColumnMajor => (0..n).cartesian_product(0..n).map(|(b, a)| a * n + b).collect(),
        };
        assert!(prefix.len() < n * n, "prefix must leave a cell open");
        let mut cells = vec![UNSET; n * n];
        for (i, &v) in prefix.iter().enumerate() {
            cells[fill[i]] = v;
        }
        let mut search = LabeledTables { n, fill, cells, depth: prefix.len(), floor: prefix.len(), done: false };
        search.done = !search.partial_consistent();
        Ok(search)
    }

    fn get(&self, a: usize, b: usize) -> Option<usize> {
        let v = self.cells[a * self.n + b];
        (v != UNSET).then_some(v as usize)
    }

    /// Every triple whose four needed entries are known associates.
    fn partial_consistent(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let Some(ab) = self.get(a, b) else { return true };
                (0..n).all(|c| {
                    let (Some(left), Some(bc)) = (self.get(ab, c), self.get(b, c)) else { return true };
                    self.get(a, bc).is_none_or(|right| left == right)
                })
            })
        })
    }
}

impl Iterator for LabeledTables {
    type Item = MulTable;

    fn next(&mut self) -> Option<MulTable> {
        let total = self.n * self.n;
        while !self.done {
            let cell = self.fill[self.depth];
            // UNSET wraps to 0.
            let candidate = self.cells[cell].wrapping_add(1);
            if candidate as usize >= self.n {
                self.cells[cell] = UNSET;
                if self.depth == self.floor {
                    self.done = true;
                } else {
                    self.depth -= 1;
                }
                continue;
            }
            self.cells[cell] = candidate;
            if !self.partial_consistent() {
                continue;
            }
            if self.depth + 1 == total {
                return Some(MulTable::from_cells_unchecked(self.n, self.cells.clone()));
            }
            self.depth += 1;
        }
        None
    }
}

/// Streams the corpus described by `spec`, row-major fill.
pub fn generate_tables(spec: CorpusSpec) -> Result<impl Iterator<Item = MulTable>> {
    spec.check()?;
    Ok(LabeledTables::new(spec.order, FillOrder::RowMajor)?.filter(move |t| spec.keep(t)))
}

/// The same corpus in the same order, with the search split by first row
/// across workers.
pub fn generate_tables_par(spec: CorpusSpec, exec: Exec) -> Result<Vec<MulTable>> {
    spec.check()?;
    let n = spec.order;
    if n == 1 {
        return Ok(generate_tables(spec)?.collect());
    }
    let prefixes: Vec<Vec<u8>> = (0..n)
        .map(|_| 0..n as u8)
        .multi_cartesian_product()
        .collect();
    let buckets = par::map(exec, &prefixes, |prefix| {
        LabeledTables::with_prefix(n, FillOrder::RowMajor, prefix)
            .map(|tables| tables.filter(|t| spec.keep(t)).collect::<Vec<_>>())
    });
    let mut all = Vec::new();
    for bucket in buckets {
        all.extend(bucket?);
    }
    Ok(all)
}

/// Lexicographically least row-major serialization over all relabelings,
/// and in [`DedupMode::UpToIsoAnti`] also over relabelings of the transpose.
/// In [`DedupMode::Labeled`] this is the table's own serialization.
pub fn canonical_form(s: &MulTable, mode: DedupMode) -> Result<Vec<u8>> {
    let n = s.order();
    if n > CANONICAL_CAP {
        return Err(Error::SizeCap { requested: n, cap: CANONICAL_CAP });
    }
    let variants = match mode {
        DedupMode::Labeled => return Ok(s.cells().to_vec()),
        DedupMode::UpToIso => vec![s.clone()],
        DedupMode::UpToIsoAnti => vec![s.clone(), s.transpose()],
    };
    let mut best: Option<Vec<u8>> = None;
    let mut buf = vec![0u8; n * n];
    for t in &variants {
        for perm in (0..n).permutations(n) {
            for a in 0..n {
                for b in 0..n {
                    buf[perm[a] * n + perm[b]] = perm[t.mul(a, b)] as u8;
                }
            }
            if best.as_ref().is_none_or(|best| buf < *best) {
                best = Some(buf.clone());
            }
        }
    }
    Ok(best.unwrap())
}

/// Number of distinct labeled tables in the class of `s` under `mode`.
pub fn orbit_size(s: &MulTable, mode: DedupMode) -> usize {
    let n = s.order();
    let variants = match mode {
        DedupMode::Labeled => return 1,
        DedupMode::UpToIso => vec![s.clone()],
        DedupMode::UpToIsoAnti => vec![s.clone(), s.transpose()],
    };
    variants
        .iter()
        .flat_map(|t| (0..n).permutations(n).map(move |p| t.relabel(&p).cells().to_vec()))
        .unique()
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::*;

    /// Filter every binary operation on n points.
    fn naive_count(n: usize) -> usize {
        (0..n * n)
            .map(|_| 0..n)
            .multi_cartesian_product()
            .filter(|cells| {
                let rows: Vec<Vec<usize>> = cells.chunks(n).map(<[usize]>::to_vec).collect();
                check_associativity(&rows).unwrap()
            })
            .count()
    }

    #[test]
    fn naive_oracle_counts() {
        assert_eq!([1, 2, 3].map(naive_count), [1, 8, 113]);
    }

    #[test]
    fn labeled_counts_small() {
        for (n, expected) in [(1, 1), (2, 8), (3, 113)] {
            assert_eq!(generate_tables(CorpusSpec::labeled(n)).unwrap().count(), expected);
            assert_eq!(LabeledTables::new(n, FillOrder::ColumnMajor).unwrap().count(), expected);
        }
    }

    #[test]
    fn emitted_tables_are_associative() {
        for t in generate_tables(CorpusSpec::labeled(3)).unwrap() {
            assert!(check_associativity(&t.rows()).unwrap());
        }
    }

    #[test]
    fn parallel_split_matches_stream() {
        for mode in [DedupMode::Labeled, DedupMode::UpToIsoAnti] {
            let spec = CorpusSpec::new(3, mode);
            let streamed: Vec<_> = generate_tables(spec).unwrap().collect();
            assert_eq!(generate_tables_par(spec, Exec::Parallel).unwrap(), streamed);
        }
    }

    #[test]
    fn dedup_counts_and_orbits() {
        // Known class counts: 1, 5, 24 up to isomorphism; 1, 4, 18 up to
        // isomorphism and anti-isomorphism.
        for (n, iso, anti) in [(1, 1, 1), (2, 5, 4), (3, 24, 18)] {
            let reps: Vec<_> = generate_tables(CorpusSpec::new(n, DedupMode::UpToIso)).unwrap().collect();
            assert_eq!(reps.len(), iso);
            let labeled = generate_tables(CorpusSpec::labeled(n)).unwrap().count();
            let total: usize = reps.iter().map(|t| orbit_size(t, DedupMode::UpToIso)).sum();
            assert_eq!(total, labeled);

            let reps: Vec<_> = generate_tables(CorpusSpec::new(n, DedupMode::UpToIsoAnti)).unwrap().collect();
            assert_eq!(reps.len(), anti);
            let total: usize = reps.iter().map(|t| orbit_size(t, DedupMode::UpToIsoAnti)).sum();
            assert_eq!(total, labeled);
        }
    }

    #[test]
    fn canonical_form_examples() {
        let lz = left_zero(2);
        assert_eq!(
            canonical_form(&lz, DedupMode::UpToIso).unwrap(),
            canonical_form(&lz.relabel(&[1, 0]), DedupMode::UpToIso).unwrap()
        );
        assert_ne!(
            canonical_form(&lz, DedupMode::UpToIso).unwrap(),
            canonical_form(&right_zero(2), DedupMode::UpToIso).unwrap()
        );
        assert_eq!(
            canonical_form(&lz, DedupMode::UpToIsoAnti).unwrap(),
            canonical_form(&right_zero(2), DedupMode::UpToIsoAnti).unwrap()
        );
        let z2 = cyclic_group(2);
        assert_eq!(
            canonical_form(&z2, DedupMode::UpToIso).unwrap(),
            canonical_form(&z2, DedupMode::UpToIsoAnti).unwrap()
        );
        assert!(matches!(canonical_form(&null(7), DedupMode::UpToIso), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn caps_and_filters() {
        assert!(matches!(generate_tables(CorpusSpec::labeled(5)), Err(Error::SizeCap { .. })));
        let spec = CorpusSpec { order: 2, mode: DedupMode::Labeled, filter: Some(CorpusFilter::NotHTrivial) };
        // Only the two labelings of Z2.
        assert_eq!(generate_tables(spec).unwrap().count(), 2);
    }
}
