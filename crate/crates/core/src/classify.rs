//! Table-level characterizations of the automaton semigroup `C(S)`.
//!
//! Every predicate is decided on the multiplication table of `S` alone:
//!
//! * trivial, equivalently a group: `S` is an inflation of a right zero
//!   semigroup by null semigroups;
//! * finite: `S` is H-trivial;
//! * free: the minimal ideal `K` is a single R-class of non-singleton
//!   H-classes and some `k` in `K` has `st = skt` for all `s, t`; the rank is
//!   the size of an H-class of `K`;
//! * right zero: `abc = ac` for all `a, b, c`;
//! * left zero: `S^2` is the minimal ideal and that ideal is right zero.

use serde::Serialize;

use crate::element::{canonicalize, equal, word_count, words_up_to, GenWord, WORD_WORK_CAP};
use crate::error::{Error, Result};
use crate::green::{green_relations, inflation_of_right_zero, subset_shape, InflationWitness, SubsetShape};
use crate::par::{self, Exec};
use crate::semigroup::{ElemSet, Element, MulTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeWitness {
    /// The element `k` of the minimal ideal with `st = skt`.
    #[serde(serialize_with = "crate::report::one_based")]
    pub k: Element,
    /// The H-class of `k`; its size is the free rank.
    #[serde(serialize_with = "crate::report::one_based_set")]
    pub h_class: ElemSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    pub inflation: Option<InflationWitness>,
    #[serde(serialize_with = "crate::report::one_based_opt_set")]
    pub nontrivial_h_class: Option<ElemSet>,
    pub free_condition: Option<FreeWitness>,
    #[serde(serialize_with = "crate::report::one_based_set")]
    pub minimal_ideal: ElemSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub is_trivial: bool,
    pub is_group: bool,
    pub is_finite: bool,
    pub is_free: bool,
    pub free_rank: Option<usize>,
    pub is_left_zero: bool,
    pub is_right_zero: bool,
    pub witnesses: Witnesses,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `(k, H_k)` for the first `k` satisfying the free condition, if any.
fn free_condition(s: &MulTable, minimal_ideal: ElemSet, h_class_of: impl Fn(Element) -> ElemSet) -> Option<FreeWitness> {
    minimal_ideal
        .iter()
        .find(|&k| {
            s.elements()
                .all(|a| s.elements().all(|b| s.mul(a, b) == s.mul(s.mul(a, k), b)))
        })
        .map(|k| FreeWitness { k, h_class: h_class_of(k) })
}

pub fn classify(s: &MulTable) -> ClassificationReport {
    let green = green_relations(s);
    let kernel = green.minimal_ideal;
    let mut notes = Vec::new();

    let (is_trivial, inflation) = inflation_of_right_zero(s);
    let is_finite = green.is_h_trivial();

    let single_r_class = kernel.iter().all(|x| green.r_class[x] == green.r_class[kernel.first().unwrap()]);
    let big_h_classes = kernel.iter().all(|x| green.h_class_of(x).len() > 1);
    let free_witness = free_condition(s, kernel, |x| green.h_class_of(x));
    let is_free = single_r_class && big_h_classes && free_witness.is_some();
    let free_rank = if is_free { free_witness.as_ref().map(|w| w.h_class.len()) } else { None };

    let n = s.order();
    let is_right_zero = (0..n).all(|a| {
        (0..n).all(|b| (0..n).all(|c| s.mul(s.mul(a, b), c) == s.mul(a, c)))
    });
    let is_left_zero = s.square() == kernel
        && subset_shape(s, kernel).expect("the minimal ideal is closed") == SubsetShape::RightZero;

    if is_trivial && (is_left_zero || is_right_zero) {
        notes.push("C(S) is trivial, hence also a one-element left and right zero semigroup".into());
    } else if is_left_zero && kernel.len() == 1 {
        notes.push("minimal ideal is a single element".into());
    }
    if is_left_zero && !is_trivial {
        notes.push(format!("C(S) is a left zero semigroup generated by {} distinct states", kernel.len()));
    }
    if !is_finite && !is_free {
        notes.push("infinite but not free".into());
    }

    let nontrivial_h_class = green.h_classes.iter().copied().find(|h| h.len() > 1);
    ClassificationReport {
        is_trivial,
        is_group: is_trivial,
        is_finite,
        is_free,
        free_rank,
        is_left_zero,
        is_right_zero,
        witnesses: Witnesses {
            inflation,
            nontrivial_h_class,
            free_condition: if is_free { free_witness } else { None },
            minimal_ideal: kernel,
        },
        notes,
    }
}

/// A non-singleton H-class together with its left stabilizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerWitness {
    #[serde(serialize_with = "crate::report::one_based_set")]
    pub h_class: ElemSet,
    /// `{t : tH ⊆ H}`.
    #[serde(serialize_with = "crate::report::one_based_set")]
    pub stabilizer: ElemSet,
}

/// For a semigroup that is not H-trivial, the first non-singleton H-class
/// `H` and `T = {t : tH ⊆ H}`. The states of `T` generate a subsemigroup of
/// `C(S)` mapping onto a free semigroup of rank `|H|`.
pub fn infinite_witness(s: &MulTable) -> Option<StabilizerWitness> {
    let green = green_relations(s);
    let h_class = green.h_classes.iter().copied().find(|h| h.len() > 1)?;
    let stabilizer = s
        .elements()
        .filter(|&t| s.set_mul(ElemSet::singleton(t), h_class).is_subset(h_class))
        .collect();
    Some(StabilizerWitness { h_class, stabilizer })
}

/// Whether all words of lengths `1..=max_len` over `{u, v}` name pairwise
/// distinct elements of `C(S)`. A `false` refutes freeness of the pair; a
/// `true` only says no relation exists up to that length.
pub fn free_pair_check(s: &MulTable, u: Element, v: Element, max_len: usize) -> Result<bool> {
    free_pair_check_with(s, u, v, max_len, Exec::default())
}

pub fn free_pair_check_with(s: &MulTable, u: Element, v: Element, max_len: usize, exec: Exec) -> Result<bool> {
    s.check_element(u)?;
    s.check_element(v)?;
    if equal(s, &GenWord::single(u), &GenWord::single(v)) {
        return Err(Error::Precondition(format!(
            "states {} and {} are equal in C(S)",
            u + 1,
            v + 1
        )));
    }
    let work = word_count(2, max_len);
    if work > WORD_WORK_CAP {
        return Err(Error::WorkCap { work, cap: WORD_WORK_CAP });
    }
    let words = words_up_to(&[u, v], max_len);
    let forms = par::map(exec, &words, |w| canonicalize(s, w));
    let mut seen = std::collections::HashSet::new();
    for form in forms {
        if !seen.insert(form?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First pair `u < v` from the stabilizer with distinct states that passes
/// [`free_pair_check`] at `max_len`.
pub fn find_free_pair(s: &MulTable, witness: &StabilizerWitness, max_len: usize) -> Result<Option<(Element, Element)>> {
    let t = witness.stabilizer.to_vec();
    for (i, &u) in t.iter().enumerate() {
        for &v in &t[i + 1..] {
            if equal(s, &GenWord::single(u), &GenWord::single(v)) {
                continue;
            }
            if free_pair_check(s, u, v, max_len)? {
                return Ok(Some((u, v)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::*;

    #[test]
    fn ijkf_is_left_zero() {
        let r = classify(&ijkf());
        assert!(r.is_finite && r.is_left_zero);
        assert!(!r.is_right_zero && !r.is_trivial && !r.is_free);
        assert_eq!(r.witnesses.minimal_ideal.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn right_zero_is_trivial() {
        let r = classify(&right_zero(3));
        assert!(r.is_trivial && r.is_group && r.is_finite && r.is_right_zero);
        assert!(r.witnesses.inflation.is_some());
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn groups_are_free() {
        let r = classify(&cyclic_group(2));
        assert!(!r.is_finite && r.is_free);
        assert_eq!(r.free_rank, Some(2));
        assert_eq!(r.witnesses.free_condition.as_ref().unwrap().k, 0);
        let r = classify(&symmetric_group_3());
        assert_eq!(r.free_rank, Some(6));
        let r = classify(&cyclic_group(1));
        assert!(r.is_trivial && !r.is_free);
    }

    #[test]
    fn right_group_is_free() {
        let s = direct_product(&cyclic_group(2), &right_zero(2)).unwrap();
        let r = classify(&s);
        assert!(r.is_free);
        assert_eq!(r.free_rank, Some(2));
    }

    #[test]
    fn witness_examples() {
        let w = infinite_witness(&cyclic_group(2)).unwrap();
        assert_eq!((w.h_class, w.stabilizer), (ElemSet::full(2), ElemSet::full(2)));
        assert!(infinite_witness(&ijkf()).is_none());

        let s = direct_product(&cyclic_group(2), &right_zero(2)).unwrap();
        let w = infinite_witness(&s).unwrap();
        assert_eq!(w.h_class.len(), 2);
        // Left multiplication by anything preserves the H-class {(0,0), (1,0)}.
        assert_eq!(w.stabilizer, ElemSet::full(4));
    }

    #[test]
    fn free_pairs() {
        assert!(free_pair_check(&cyclic_group(2), 0, 1, 5).unwrap());
        assert!(matches!(free_pair_check(&right_zero(2), 0, 1, 3), Err(Error::Precondition(_))));
        assert!(!free_pair_check(&ijkf(), 1, 2, 3).unwrap());
        assert!(matches!(free_pair_check(&cyclic_group(2), 0, 1, 30), Err(Error::WorkCap { .. })));
    }

    #[test]
    fn json_is_one_based_with_fixed_field_order() {
        let json = classify(&ijkf()).to_json();
        let keys = ["is_trivial", "is_group", "is_finite", "is_free", "free_rank", "is_left_zero", "is_right_zero", "witnesses", "notes"];
        let positions: Vec<usize> = keys.iter().map(|k| json.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(positions.windows(2).all(|p| p[0] < p[1]));
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["witnesses"]["minimal_ideal"], serde_json::json!([1, 2, 3]));
        assert_eq!(value["is_left_zero"], true);
    }
}
