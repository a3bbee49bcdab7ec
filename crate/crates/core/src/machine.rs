//! Deterministic complete Mealy machines and the Cayley machine of a
//! semigroup.

use std::collections::HashMap;
use std::fmt::Write;

use crate::semigroup::MulTable;

/// A deterministic complete transducer over letters `0..letters`.
///
/// Transition and output tables are row-major: entry `state * letters + x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MealyMachine {
    states: usize,
    letters: usize,
    next: Vec<u32>,
    out: Vec<u32>,
    state_labels: Option<Vec<String>>,
    letter_labels: Option<Vec<String>>,
}

impl MealyMachine {
    /// # Panics
    /// If either table has the wrong length or an entry is out of range.
    pub fn new(states: usize, letters: usize, next: Vec<u32>, out: Vec<u32>) -> Self {
        assert_eq!(next.len(), states * letters, "transition table size");
        assert_eq!(out.len(), states * letters, "output table size");
        assert!(next.iter().all(|&q| (q as usize) < states), "transition out of range");
        assert!(out.iter().all(|&x| (x as usize) < letters), "output out of range");
        MealyMachine { states, letters, next, out, state_labels: None, letter_labels: None }
    }

    pub fn with_labels(mut self, states: Vec<String>, letters: Vec<String>) -> Self {
        assert_eq!(states.len(), self.states);
        assert_eq!(letters.len(), self.letters);
        self.state_labels = Some(states);
        self.letter_labels = Some(letters);
        self
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn letter_count(&self) -> usize {
        self.letters
    }

    #[inline]
    pub fn transition(&self, state: usize, letter: usize) -> usize {
        self.next[state * self.letters + letter] as usize
    }

    #[inline]
    pub fn output(&self, state: usize, letter: usize) -> usize {
        self.out[state * self.letters + letter] as usize
    }

    pub fn transitions(&self) -> &[u32] {
        &self.next
    }

    pub fn outputs(&self) -> &[u32] {
        &self.out
    }

    pub fn state_label(&self, q: usize) -> String {
        self.state_labels.as_ref().map_or_else(|| (q + 1).to_string(), |l| l[q].clone())
    }

    pub fn letter_label(&self, x: usize) -> String {
        self.letter_labels.as_ref().map_or_else(|| (x + 1).to_string(), |l| l[x].clone())
    }

    /// Runs the machine from `state` over `input`.
    pub fn run(&self, mut state: usize, input: &[usize]) -> Vec<usize> {
        input
            .iter()
            .map(|&x| {
                let y = self.output(state, x);
                state = self.transition(state, x);
                y
            })
            .collect()
    }

    /// Quotient by output equivalence restricted to the states reachable from
    /// `initial`, renumbered breadth-first from `initial` with letters in
    /// index order. The result has `initial` at index 0 and no two equivalent
    /// states, so equal transformations get identical machines.
    pub fn minimize_from(&self, initial: usize) -> MealyMachine {
        let k = self.letters;
        let reach = self.reachable_from(initial);
        let mut local = vec![u32::MAX; self.states];
        for (i, &q) in reach.iter().enumerate() {
            local[q] = i as u32;
        }

        // Moore-style refinement on the reachable part. Initial blocks are
        // output rows; each round splits by successor blocks.
        let out_row = |q: usize| &self.out[q * k..(q + 1) * k];
        let mut block = number_by(reach.iter().map(|&q| out_row(q).to_vec()));
        let mut count = block.iter().max().map_or(0, |&b| b + 1);
        loop {
            let refined = number_by(reach.iter().enumerate().map(|(i, &q)| {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(block[i]);
                sig.extend((0..k).map(|x| block[local[self.transition(q, x)] as usize]));
                sig
            }));
            let refined_count = refined.iter().max().map_or(0, |&b| b + 1);
            block = refined;
            if refined_count == count {
                break;
            }
            count = refined_count;
        }

        // BFS over blocks from the initial state's block.
        let rep_of_block = {
            let mut rep = vec![usize::MAX; count as usize];
            for (i, &q) in reach.iter().enumerate() {
                if rep[block[i] as usize] == usize::MAX {
                    rep[block[i] as usize] = q;
                }
            }
            rep
        };
        let mut canon = vec![u32::MAX; count as usize];
        let mut order = vec![block[0]];
        canon[block[0] as usize] = 0;
        let mut head = 0;
        while head < order.len() {
            let q = rep_of_block[order[head] as usize];
            head += 1;
            for x in 0..k {
                let b = block[local[self.transition(q, x)] as usize];
                if canon[b as usize] == u32::MAX {
                    canon[b as usize] = order.len() as u32;
                    order.push(b);
                }
            }
        }
        let mut next = Vec::with_capacity(order.len() * k);
        let mut out = Vec::with_capacity(order.len() * k);
        for &b in &order {
            let q = rep_of_block[b as usize];
            for x in 0..k {
                next.push(canon[block[local[self.transition(q, x)] as usize] as usize]);
                out.push(self.out[q * k + x]);
            }
        }
        MealyMachine::new(order.len(), k, next, out)
    }

    /// States reachable from `initial`, in BFS order.
    pub fn reachable_from(&self, initial: usize) -> Vec<usize> {
        let mut seen = vec![false; self.states];
        let mut order = vec![initial];
        seen[initial] = true;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for x in 0..self.letters {
                let p = self.transition(q, x);
                if !seen[p] {
                    seen[p] = true;
                    order.push(p);
                }
            }
        }
        order
    }

    /// DOT rendering: one node per state, one edge per (state, letter)
    /// labelled `letter|output`, in state-then-letter order.
    pub fn to_dot(&self) -> String {
        let mut dot = String::from("digraph cayley {\n    rankdir=LR;\n");
        for q in 0..self.states {
            writeln!(dot, "    s{q} [label=\"{}\"];", escape(&self.state_label(q))).unwrap();
        }
        for q in 0..self.states {
            for x in 0..self.letters {
                writeln!(
                    dot,
                    "    s{q} -> s{} [label=\"{}|{}\"];",
                    self.transition(q, x),
                    escape(&self.letter_label(x)),
                    escape(&self.letter_label(self.output(q, x)))
                )
                .unwrap();
            }
        }
        dot.push_str("}\n");
        dot
    }
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Dense ids for keys, in order of first appearance.
fn number_by<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<u32> {
    let mut ids: HashMap<K, u32> = HashMap::new();
    keys.map(|key| {
        let fresh = ids.len() as u32;
        *ids.entry(key).or_insert(fresh)
    })
    .collect()
}

/// The Cayley machine: states and letters are the elements of `S`, and in
/// state `s` reading `x` the machine writes `sx` and moves to `sx`.
pub fn build_cayley_machine(s: &MulTable) -> MealyMachine {
    let n = s.order();
    let cells: Vec<u32> = s.cells().iter().map(|&c| c as u32).collect();
    let labels: Vec<String> = s.elements().map(|x| s.name(x)).collect();
    MealyMachine::new(n, n, cells.clone(), cells).with_labels(labels.clone(), labels)
}

pub fn machine_to_dot(m: &MealyMachine) -> String {
    m.to_dot()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::*;

    #[test]
    fn cayley_machine_of_left_zero_loops() {
        let m = build_cayley_machine(&left_zero(2));
        for s in 0..2 {
            for x in 0..2 {
                assert_eq!(m.transition(s, x), s);
                assert_eq!(m.output(s, x), s);
            }
        }
    }

    #[test]
    fn cayley_machine_entries() {
        let m = build_cayley_machine(&cyclic_group(2));
        assert_eq!((0..2).map(|x| m.transition(0, x)).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!((0..2).map(|x| m.output(0, x)).collect::<Vec<_>>(), vec![0, 1]);
        let m = build_cayley_machine(&ijkf());
        assert_eq!(m.transition(2, 3), 1);
        assert_eq!(m.output(2, 3), 1);
    }

    #[test]
    fn first_letter_action_is_lambda() {
        for s in [ijkf(), symmetric_group_3(), null(3), rectangular_band(2, 3)] {
            let m = build_cayley_machine(&s);
            for a in s.elements() {
                let first: Vec<usize> = s.elements().map(|x| m.output(a, x)).collect();
                assert_eq!(first, s.lambda_map(a).image);
            }
        }
    }

    #[test]
    fn dot_trivial() {
        let dot = build_cayley_machine(&left_zero(1)).to_dot();
        assert_eq!(
            dot,
            "digraph cayley {\n    rankdir=LR;\n    s0 [label=\"1\"];\n    s0 -> s0 [label=\"1|1\"];\n}\n"
        );
    }

    #[test]
    fn dot_counts() {
        let dot = build_cayley_machine(&left_zero(2)).to_dot();
        assert_eq!(dot.matches("[label=\"").count(), 2 + 4);
        assert!(dot.contains("s0 -> s0") && dot.contains("s1 -> s1"));
        assert!(!dot.contains("s0 -> s1"));
        let dot = build_cayley_machine(&ijkf()).to_dot();
        assert_eq!(dot.matches(" -> ").count(), 16);
        assert!(dot.contains("s2 -> s1 [label=\"f|j\"];"));
    }

    #[test]
    fn minimize_collapses_equivalent_states() {
        // Two states that both echo their input and swap into each other.
        let m = MealyMachine::new(2, 2, vec![1, 1, 0, 0], vec![0, 1, 0, 1]);
        let min = m.minimize_from(1);
        assert_eq!(min.state_count(), 1);
        assert_eq!(min.transitions(), &[0, 0]);
        assert_eq!(min.outputs(), &[0, 1]);
        assert_eq!(m.run(0, &[1, 0, 1]), min.run(0, &[1, 0, 1]));
    }
}
