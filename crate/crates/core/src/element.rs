//! Exact computation in the automaton semigroup generated by the states of a
//! Cayley machine.
//!
//! A word `(a1, ..., ak)` names the product of states `a1 ... ak` acting on
//! sequences from the left end, `a1` first. Reading `x`, it writes
//! `ak ... a1 x` and moves to `(a1 x, a2 a1 x, ..., ak ... a1 x)`. Sections
//! preserve word length, which keeps every closure below finite.
//!
//! Element identity is the minimized machine ([`AutElement`]); words are
//! only names for elements. [`enumerate`] avoids building machines for long
//! words: it proves elements distinct by their action on fixed probe
//! sequences and proves them equal by bisimulation on words.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::MealyMachine;
use crate::par::{self, Exec};
use crate::semigroup::{associativity_failure, Element, LambdaMap, MulTable};

/// Default cap on the number of states explored by [`canonicalize`].
pub const CLOSURE_CAP: usize = 10_000;

/// Default cap on the number of words [`count_distinct_words`] and
/// [`crate::classify::free_pair_check`] will canonicalize.
pub const WORD_WORK_CAP: u128 = 1_000_000;

/// A non-empty product of generator states.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenWord(Vec<Element>);

impl GenWord {
    pub fn new(letters: Vec<Element>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(GenWord(letters))
    }

    pub fn checked(s: &MulTable, letters: Vec<Element>) -> Result<Self> {
        letters.iter().try_for_each(|&a| s.check_element(a))?;
        Self::new(letters)
    }

    pub fn single(a: Element) -> Self {
        GenWord(vec![a])
    }

    pub fn letters(&self) -> &[Element] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Concatenation, i.e. the product `self * other`.
    pub fn concat(&self, other: &GenWord) -> GenWord {
        GenWord(self.0.iter().chain(&other.0).copied().collect())
    }
}

/// First-level action of a word: `lambda` of `ak ... a1`.
pub fn tau(s: &MulTable, w: &GenWord) -> LambdaMap {
    s.lambda_map(reversed_product(s, w))
}

/// `ak ... a1`.
fn reversed_product(s: &MulTable, w: &GenWord) -> Element {
    w.0[1..].iter().fold(w.0[0], |acc, &a| s.mul(a, acc))
}

/// Output letter and section in one pass.
fn step(s: &MulTable, w: &[Element], x: Element) -> (Element, Vec<Element>) {
    let mut section = Vec::with_capacity(w.len());
    let mut acc = x;
    for &a in w {
        acc = s.mul(a, acc);
        section.push(acc);
    }
    (acc, section)
}

/// The state reached from `w` after reading `x`:
/// `(a1 x, a2 a1 x, ..., ak ... a1 x)`.
pub fn section(s: &MulTable, w: &GenWord, x: Element) -> GenWord {
    GenWord(step(s, &w.0, x).1)
}

/// Applies `w` to a finite prefix of a sequence.
pub fn act(s: &MulTable, w: &GenWord, prefix: &[Element]) -> Vec<Element> {
    let mut state = w.0.clone();
    prefix
        .iter()
        .map(|&x| {
            let (y, next) = step(s, &state, x);
            state = next;
            y
        })
        .collect()
}

/// Equality of the transformations named by `u` and `v`.
///
/// Bisimulation over pairs of sections: every reachable pair must agree on
/// its first-level action. A pair seen before is assumed equal.
pub fn equal(s: &MulTable, u: &GenWord, v: &GenWord) -> bool {
    let mut seen: HashSet<(Vec<Element>, Vec<Element>)> = HashSet::new();
    let mut stack = vec![(u.0.clone(), v.0.clone())];
    while let Some((p, q)) = stack.pop() {
        if !seen.insert((p.clone(), q.clone())) {
            continue;
        }
        for x in s.elements() {
            let (yp, sp) = step(s, &p, x);
            let (yq, sq) = step(s, &q, x);
            if yp != yq {
                return false;
            }
            stack.push((sp, sq));
        }
    }
    true
}

/// Canonical element of the automaton semigroup: a minimized machine whose
/// initial state is 0 and whose states are numbered breadth-first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AutElement {
    machine: MealyMachine,
}

impl AutElement {
    fn from_machine(machine: &MealyMachine, initial: usize) -> Self {
        AutElement { machine: machine.minimize_from(initial) }
    }

    pub fn machine(&self) -> &MealyMachine {
        &self.machine
    }

    pub fn state_count(&self) -> usize {
        self.machine.state_count()
    }

    pub fn initial(&self) -> usize {
        0
    }

    /// `(state count, letter count, transitions, outputs, initial)` as
    /// little-endian `u32`s. Equal bytes iff equal transformations.
    pub fn to_bytes(&self) -> Vec<u8> {
        let m = &self.machine;
        [m.state_count() as u32, m.letter_count() as u32]
            .iter()
            .chain(m.transitions())
            .chain(m.outputs())
            .chain(&[0u32])
            .flat_map(|v| v.to_le_bytes())
            .collect()
    }

    pub fn act(&self, prefix: &[Element]) -> Vec<Element> {
        self.machine.run(0, prefix)
    }

    /// The product `self * other`: `self` acts first.
    pub fn then(&self, other: &AutElement) -> AutElement {
        let (a, b) = (&self.machine, &other.machine);
        let k = a.letter_count();
        let width = b.state_count();
        let mut index: HashMap<usize, u32> = HashMap::new();
        let mut pairs = vec![(0usize, 0usize)];
        index.insert(0, 0);
        let mut next = Vec::new();
        let mut out = Vec::new();
        let mut head = 0;
        while head < pairs.len() {
            let (p, q) = pairs[head];
            head += 1;
            for x in 0..k {
                let mid = a.output(p, x);
                let target = (a.transition(p, x), b.transition(q, mid));
                let fresh = pairs.len() as u32;
                let id = *index.entry(target.0 * width + target.1).or_insert(fresh);
                if id == fresh {
                    pairs.push(target);
                }
                next.push(id);
                out.push(b.output(q, mid) as u32);
            }
        }
        let product = MealyMachine::new(pairs.len(), k, next, out);
        AutElement::from_machine(&product, 0)
    }
}

/// Closure of `w` under sections, as an (unminimized) machine with `w` as
/// state 0.
fn word_closure(s: &MulTable, w: &GenWord, cap: usize) -> Result<MealyMachine> {
    let n = s.order();
    let mut index: HashMap<Vec<Element>, u32> = HashMap::new();
    let mut words = vec![w.0.clone()];
    index.insert(w.0.clone(), 0);
    let mut next = Vec::new();
    let mut out = Vec::new();
    let mut head = 0;
    while head < words.len() {
        let current = words[head].clone();
        head += 1;
        for x in 0..n {
            let (y, sec) = step(s, &current, x);
            let id = match index.get(&sec) {
                Some(&id) => id,
                None => {
                    if words.len() >= cap {
                        return Err(Error::ClosureBudget { cap });
                    }
                    let id = words.len() as u32;
                    index.insert(sec.clone(), id);
                    words.push(sec);
                    id
                }
            };
            next.push(id);
            out.push(y as u32);
        }
    }
    Ok(MealyMachine::new(words.len(), n, next, out))
}

pub fn canonicalize(s: &MulTable, w: &GenWord) -> Result<AutElement> {
    canonicalize_capped(s, w, CLOSURE_CAP)
}

pub fn canonicalize_capped(s: &MulTable, w: &GenWord, cap: usize) -> Result<AutElement> {
    Ok(AutElement::from_machine(&word_closure(s, w, cap)?, 0))
}

/// The multiplication table of a finite automaton semigroup, over element
/// indices. Not bounded by the size cap of [`MulTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementTable {
    order: usize,
    cells: Vec<u32>,
}

impl ElementTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.order + b] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_associative(&self) -> bool {
        associativity_failure(self.order, |a, b| self.mul(a, b)).is_none()
    }

    /// `uv = v` for all `u, v`.
    pub fn is_right_zero(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == b))
    }

    /// `uv = u` for all `u, v`.
    pub fn is_left_zero(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == a))
    }

    pub fn to_mul_table(&self) -> Result<MulTable> {
        MulTable::from_rows(&self.rows())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Stop once more than this many distinct elements are known.
    pub budget: usize,
    /// Most state pairs a single equality check may explore.
    pub pair_cap: usize,
    pub exec: Exec,
}

impl EnumerateOptions {
    pub fn with_budget(budget: usize) -> Self {
        EnumerateOptions { budget, ..Default::default() }
    }
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { budget: 10_000, pair_cap: PAIR_CAP, exec: Exec::default() }
    }
}

/// Default for [`EnumerateOptions::pair_cap`].
pub const PAIR_CAP: usize = 2_000_000;

#[derive(Clone, Debug)]
pub enum EnumerationResult {
    Closed {
        elements: Vec<AutElement>,
        /// A shortest generator word for each element.
        words: Vec<GenWord>,
        cayley: ElementTable,
        /// Element index of each generator state.
        generator_map: Vec<usize>,
    },
    Exceeded {
        count_reached: usize,
        /// Set when an equality check ran past the pair cap rather than the
        /// element budget running out.
        cap_hit: bool,
    },
}

impl EnumerationResult {
    pub fn is_closed(&self) -> bool {
        matches!(self, EnumerationResult::Closed { .. })
    }

    /// Number of elements when closed.
    pub fn size(&self) -> Option<usize> {
        match self {
            EnumerationResult::Closed { elements, .. } => Some(elements.len()),
            EnumerationResult::Exceeded { .. } => None,
        }
    }

    pub fn cayley(&self) -> Option<&ElementTable> {
        match self {
            EnumerationResult::Closed { cayley, .. } => Some(cayley),
            EnumerationResult::Exceeded { .. } => None,
        }
    }
}

const PROBE_COUNT: usize = 32;
const PROBE_LEN: usize = 32;
const PROBE_SEED: u64 = 0x5eed_cafe;

/// Fixed pseudo-random input sequences. The images of these under an
/// element form its fingerprint: different fingerprints prove two elements
/// differ, equal fingerprints only flag a pair for an exact check.
fn probe_sequences(n: usize) -> Vec<u8> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(PROBE_SEED);
    (0..PROBE_COUNT * PROBE_LEN).map(|_| rng.gen_range(0..n) as u8).collect()
}

/// Image of each probe under the single state `a`: the state `a` maps
/// `x1 x2 ...` to `a x1, a x1 x2, ...`.
fn apply_state(s: &MulTable, a: Element, sequences: &[u8]) -> Box<[u8]> {
    sequences
        .chunks(PROBE_LEN)
        .flat_map(|seq| {
            seq.iter().scan(a, |acc, &x| {
                *acc = s.mul(*acc, x as usize);
                Some(*acc as u8)
            })
        })
        .collect()
}

type WordKey = Box<[u8]>;

/// Word pairs already shown to name the same element. Any set of pairs
/// explored by a successful [`WordEquality::check`] is a bisimulation, so
/// every pair in it is sound to reuse.
struct WordEquality<'a> {
    s: &'a MulTable,
    memo: HashSet<(WordKey, WordKey)>,
    pair_cap: usize,
}

impl<'a> WordEquality<'a> {
    fn new(s: &'a MulTable, pair_cap: usize) -> Self {
        WordEquality { s, memo: HashSet::new(), pair_cap }
    }

    fn step(&self, w: &[u8], x: usize) -> (usize, WordKey) {
        let mut acc = x;
        let section = w
            .iter()
            .map(|&a| {
                acc = self.s.mul(a as usize, acc);
                acc as u8
            })
            .collect();
        (acc, section)
    }

    /// `None` when the pair cap is reached before a verdict.
    fn check(&mut self, u: &[u8], v: &[u8]) -> Option<bool> {
        let key = |p: &[u8], q: &[u8]| -> (WordKey, WordKey) {
            if p <= q { (p.into(), q.into()) } else { (q.into(), p.into()) }
        };
        let mut visited: HashSet<(WordKey, WordKey)> = HashSet::new();
        let mut stack = vec![key(u, v)];
        while let Some(pair) = stack.pop() {
            if pair.0 == pair.1 || self.memo.contains(&pair) || visited.contains(&pair) {
                continue;
            }
            for x in self.s.elements() {
                let (yp, sp) = self.step(&pair.0, x);
                let (yq, sq) = self.step(&pair.1, x);
                if yp != yq {
                    return Some(false);
                }
                stack.push(key(&sp, &sq));
            }
            visited.insert(pair);
            if visited.len() > self.pair_cap {
                return None;
            }
        }
        self.memo.extend(visited);
        Some(true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stop {
    Budget,
    PairCap,
}

/// Known elements, bucketed by fingerprint.
struct ElementStore<'a> {
    equality: WordEquality<'a>,
    words: Vec<WordKey>,
    prints: Vec<Box<[u8]>>,
    buckets: HashMap<Box<[u8]>, Vec<usize>>,
    budget: usize,
}

impl ElementStore<'_> {
    /// The element equal to the candidate and whether it was just added.
    fn intern(&mut self, word: WordKey, print: Box<[u8]>) -> Result<(usize, bool), Stop> {
        let bucket = self.buckets.entry(print.clone()).or_default();
        for &id in bucket.iter() {
            match self.equality.check(&word, &self.words[id]) {
                Some(true) => return Ok((id, false)),
                Some(false) => {}
                None => return Err(Stop::PairCap),
            }
        }
        let id = self.words.len();
        if id + 1 > self.budget {
            return Err(Stop::Budget);
        }
        bucket.push(id);
        self.words.push(word);
        self.prints.push(print);
        Ok((id, true))
    }
}

/// Breadth-first enumeration of the automaton semigroup by right
/// multiplication with the generators.
///
/// Candidates are bucketed by fingerprint; a candidate is new unless an
/// exact equality check matches it to an element in its bucket. Canonical
/// machines are only built once the semigroup has closed.
pub fn enumerate(s: &MulTable, budget: usize) -> Result<EnumerationResult> {
    enumerate_with(s, EnumerateOptions::with_budget(budget))
}

pub fn enumerate_with(s: &MulTable, opts: EnumerateOptions) -> Result<EnumerationResult> {
    if opts.budget < s.order() {
        return Err(Error::Precondition(format!(
            "budget {} is below the semigroup order {}",
            opts.budget,
            s.order()
        )));
    }
    let probes = probe_sequences(s.order());
    let mut store = ElementStore {
        equality: WordEquality::new(s, opts.pair_cap),
        words: Vec::new(),
        prints: Vec::new(),
        buckets: HashMap::new(),
        budget: opts.budget,
    };
    let exceeded = |store: &ElementStore, stop: Stop| EnumerationResult::Exceeded {
        count_reached: store.words.len() + usize::from(stop == Stop::Budget),
        cap_hit: stop == Stop::PairCap,
    };

    let mut generator_map = Vec::with_capacity(s.order());
    let mut gens: Vec<usize> = Vec::new();
    let mut gen_letter: Vec<Element> = Vec::new();
    for a in s.elements() {
        match store.intern(Box::new([a as u8]), apply_state(s, a, &probes)) {
            Ok((id, fresh)) => {
                if fresh {
                    gens.push(id);
                    gen_letter.push(a);
                }
                generator_map.push(id);
            }
            Err(stop) => return Ok(exceeded(&store, stop)),
        }
    }

    // right[e * gens.len() + j] = e * gens[j]
    let mut right: Vec<usize> = Vec::new();
    let mut frontier: Vec<usize> = gens.clone();
    while !frontier.is_empty() {
        let candidates = {
            let prints = &store.prints;
            let gen_letter = &gen_letter;
            let frontier = &frontier;
            par::map_range(opts.exec, frontier.len() * gen_letter.len(), |i| {
                let e = frontier[i / gen_letter.len()];
                apply_state(s, gen_letter[i % gen_letter.len()], &prints[e])
            })
        };
        let mut next_frontier = Vec::new();
        for (i, print) in candidates.into_iter().enumerate() {
            let (e, j) = (frontier[i / gens.len()], i % gens.len());
            let word: WordKey = store.words[e].iter().copied().chain([gen_letter[j] as u8]).collect();
            match store.intern(word, print) {
                Ok((id, fresh)) => {
                    if fresh {
                        next_frontier.push(id);
                    }
                    debug_assert_eq!(right.len(), e * gens.len() + j);
                    right.push(id);
                }
                Err(stop) => return Ok(exceeded(&store, stop)),
            }
        }
        frontier = next_frontier;
    }

    // Elements were expanded in index order, so `right` is dense. The
    // product e * f follows f's word one generator at a time.
    let gen_position: HashMap<Element, usize> = gen_letter.iter().enumerate().map(|(j, &a)| (a, j)).collect();
    let words = store.words;
    let order = words.len();
    let mut cells = Vec::with_capacity(order * order);
    for e in 0..order {
        for word in &words {
            let p = word.iter().fold(e, |acc, &a| right[acc * gens.len() + gen_position[&(a as usize)]]);
            cells.push(p as u32);
        }
    }

    // Canonical machines, each from its prefix's machine.
    let gen_machines: Vec<AutElement> = gen_letter
        .iter()
        .map(|&a| canonicalize(s, &GenWord::single(a)))
        .collect::<Result<_>>()?;
    let index: HashMap<&[u8], usize> = words.iter().enumerate().map(|(id, w)| (&w[..], id)).collect();
    let mut elements: Vec<AutElement> = Vec::with_capacity(order);
    for word in &words {
        let element = if word.len() == 1 {
            gen_machines[gen_position[&(word[0] as usize)]].clone()
        } else {
            let prefix = index[&word[..word.len() - 1]];
            elements[prefix].then(&gen_machines[gen_position[&(word[word.len() - 1] as usize)]])
        };
        elements.push(element);
    }
    debug_assert_eq!(elements.iter().collect::<HashSet<_>>().len(), order);

    Ok(EnumerationResult::Closed {
        elements,
        words: words.iter().map(|w| GenWord(w.iter().map(|&a| a as usize).collect())).collect(),
        cayley: ElementTable { order, cells },
        generator_map,
    })
}

/// All words of lengths `1..=max_len` over `alphabet`, shortlex order.
pub(crate) fn words_up_to(alphabet: &[Element], max_len: usize) -> Vec<GenWord> {
    let mut all = Vec::new();
    let mut level: Vec<Vec<Element>> = vec![vec![]];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
        all.extend(level.iter().cloned().map(GenWord));
    }
    all
}

pub(crate) fn word_count(alphabet: usize, max_len: usize) -> u128 {
    (1..=max_len as u32).map(|l| (alphabet as u128).pow(l)).sum()
}

/// Number of distinct elements among all products of `1..=max_len`
/// generator states.
pub fn count_distinct_words(s: &MulTable, max_len: usize) -> Result<usize> {
    count_distinct_words_with(s, max_len, WORD_WORK_CAP, Exec::default())
}

pub fn count_distinct_words_with(s: &MulTable, max_len: usize, cap: u128, exec: Exec) -> Result<usize> {
    let work = word_count(s.order(), max_len);
    if work > cap {
        return Err(Error::WorkCap { work, cap });
    }
    let alphabet: Vec<Element> = s.elements().collect();
    let words = words_up_to(&alphabet, max_len);
    let forms = par::map(exec, &words, |w| canonicalize(s, w));
    let mut distinct = HashSet::new();
    for form in forms {
        distinct.insert(form?);
    }
    Ok(distinct.len())
}
