//! Serde helpers that render element indices 1-based.

use serde::ser::{SerializeSeq, Serializer};

use crate::semigroup::{ElemSet, Element};

pub(crate) fn one_based<S: Serializer>(x: &Element, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_u64(*x as u64 + 1)
}

pub(crate) fn one_based_set<S: Serializer>(set: &ElemSet, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(set.iter().map(|x| x + 1))
}

pub(crate) fn one_based_opt_set<S: Serializer>(set: &Option<ElemSet>, ser: S) -> Result<S::Ok, S::Error> {
    match set {
        Some(set) => one_based_set(set, ser),
        None => ser.serialize_none(),
    }
}

pub(crate) fn one_based_sets<S: Serializer>(sets: &[ElemSet], ser: S) -> Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(sets.len()))?;
    for set in sets {
        seq.serialize_element(&set.iter().map(|x| x + 1).collect::<Vec<_>>())?;
    }
    seq.end()
}
