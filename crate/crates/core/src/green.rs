//! Green's relations, the minimal ideal, and structural predicates on subsets.
//!
//! Everything is computed straight from principal ideals. The identity of
//! `S^1` is adjoined virtually: `aS^1` is `aS` plus `a` itself.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::{ElemSet, Element, MulTable};

/// Largest order accepted by [`brute_force_inflation`].
pub const BRUTE_FORCE_CAP: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenData {
    /// Class ids, numbered in order of each class's smallest element.
    pub r_class: Vec<usize>,
    pub l_class: Vec<usize>,
    pub h_class: Vec<usize>,
    pub d_class: Vec<usize>,
    pub r_classes: Vec<ElemSet>,
    pub l_classes: Vec<ElemSet>,
    pub h_classes: Vec<ElemSet>,
    pub d_classes: Vec<ElemSet>,
    /// `d_below[i][j]` iff the ideal generated by D-class `i` is contained in
    /// that of D-class `j`.
    pub d_below: Vec<Vec<bool>>,
    pub minimal_ideal: ElemSet,
    pub idempotents: ElemSet,
}

impl GreenData {
    pub fn r_class_of(&self, x: Element) -> ElemSet {
        self.r_classes[self.r_class[x]]
    }

    pub fn l_class_of(&self, x: Element) -> ElemSet {
        self.l_classes[self.l_class[x]]
    }

    pub fn h_class_of(&self, x: Element) -> ElemSet {
        self.h_classes[self.h_class[x]]
    }

    pub fn d_class_of(&self, x: Element) -> ElemSet {
        self.d_classes[self.d_class[x]]
    }

    pub fn is_h_trivial(&self) -> bool {
        self.h_classes.iter().all(|h| h.len() == 1)
    }
}

/// `aS^1`.
pub fn right_ideal(s: &MulTable, a: Element) -> ElemSet {
    let mut set: ElemSet = s.row(a).collect();
    set.insert(a);
    set
}

/// `S^1 a`.
pub fn left_ideal(s: &MulTable, a: Element) -> ElemSet {
    let mut set: ElemSet = s.elements().map(|x| s.mul(x, a)).collect();
    set.insert(a);
    set
}

/// `S^1 a S^1`.
pub fn two_sided_ideal(s: &MulTable, a: Element) -> ElemSet {
    let right = right_ideal(s, a);
    right.union(s.set_mul(ElemSet::full(s.order()), right))
}

/// Groups elements by a key, numbering classes by smallest member.
fn partition_by<K: PartialEq>(n: usize, key: impl Fn(Element) -> K) -> (Vec<usize>, Vec<ElemSet>) {
    let keys: Vec<K> = (0..n).map(&key).collect();
    let mut ids = vec![usize::MAX; n];
    let mut classes: Vec<ElemSet> = Vec::new();
    for x in 0..n {
        if ids[x] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut class = ElemSet::empty();
        for y in x..n {
            if keys[y] == keys[x] {
                ids[y] = id;
                class.insert(y);
            }
        }
        classes.push(class);
    }
    (ids, classes)
}

pub fn green_relations(s: &MulTable) -> GreenData {
    let n = s.order();
    let rights: Vec<ElemSet> = s.elements().map(|a| right_ideal(s, a)).collect();
    let lefts: Vec<ElemSet> = s.elements().map(|a| left_ideal(s, a)).collect();
    let (r_class, r_classes) = partition_by(n, |a| rights[a]);
    let (l_class, l_classes) = partition_by(n, |a| lefts[a]);
    let (h_class, h_classes) = partition_by(n, |a| (rights[a], lefts[a]));

    // D as the transitive closure of R u L: grow each block by R- and
    // L-classes until nothing changes.
    let mut d_block: Vec<ElemSet> = (0..n).map(ElemSet::singleton).collect();
    for block in &mut d_block {
        loop {
            let grown = block
                .iter()
                .fold(*block, |acc, y| acc.union(r_classes[r_class[y]]).union(l_classes[l_class[y]]));
            if grown == *block {
                break;
            }
            *block = grown;
        }
    }
    let (d_class, d_classes) = partition_by(n, |a| d_block[a]);

    let d_ideals: Vec<ElemSet> = d_classes
        .iter()
        .map(|d| two_sided_ideal(s, d.first().unwrap()))
        .collect();
    let d_below: Vec<Vec<bool>> = d_ideals
        .iter()
        .map(|i| d_ideals.iter().map(|j| i.is_subset(*j)).collect())
        .collect();
    let minimal = (0..d_classes.len())
        .find(|&i| d_below[i].iter().all(|&below| below))
        .expect("a finite semigroup has a minimal ideal");

    GreenData {
        r_class,
        l_class,
        h_class,
        d_class,
        r_classes,
        l_classes,
        h_classes,
        d_classes: d_classes.clone(),
        d_below,
        minimal_ideal: d_classes[minimal],
        idempotents: s.elements().filter(|&e| s.is_idempotent(e)).collect(),
    }
}

pub fn is_h_trivial(s: &MulTable) -> bool {
    green_relations(s).is_h_trivial()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetShape {
    RightZero,
    LeftZero,
    Null,
    RectangularBand,
    Group,
    Other,
}

/// Most specific shape of a closed subset.
///
/// Precedence, most specific first: singleton (reported as right zero),
/// group, left zero, right zero, rectangular band, null, other. A one-element
/// subset satisfies every shape; callers that care should test `len() == 1`.
pub fn subset_shape(s: &MulTable, xs: ElemSet) -> Result<SubsetShape> {
    if xs.is_empty() || !s.is_closed(xs) {
        return Err(Error::NotClosed);
    }
    if xs.len() == 1 {
        return Ok(SubsetShape::RightZero);
    }
    let all = |pred: &dyn Fn(Element, Element) -> bool| {
        xs.iter().all(|x| xs.iter().all(|y| pred(x, y)))
    };
    // A finite subsemigroup is a group iff it is left and right simple,
    // i.e. xX = X = Xx for every x.
    let is_group = xs.iter().all(|x| {
        s.set_mul(ElemSet::singleton(x), xs) == xs && s.set_mul(xs, ElemSet::singleton(x)) == xs
    });
    if is_group {
        return Ok(SubsetShape::Group);
    }
    if all(&|x, y| s.mul(x, y) == x) {
        return Ok(SubsetShape::LeftZero);
    }
    if all(&|x, y| s.mul(x, y) == y) {
        return Ok(SubsetShape::RightZero);
    }
    if all(&|x, y| s.mul(s.mul(x, y), x) == x) {
        return Ok(SubsetShape::RectangularBand);
    }
    let zero = xs.iter().find(|&z| all(&|x, y| s.mul(x, y) == z));
    if zero.is_some() {
        return Ok(SubsetShape::Null);
    }
    Ok(SubsetShape::Other)
}

/// Partition of `S` into classes `S_t` over a right zero subsemigroup `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InflationWitness {
    /// The right zero subsemigroup, ascending.
    #[serde(serialize_with = "crate::report::one_based_set")]
    pub right_zero: ElemSet,
    /// `classes[i]` is `S_t` for the i-th element `t` of `right_zero`.
    #[serde(serialize_with = "crate::report::one_based_sets")]
    pub classes: Vec<ElemSet>,
}

/// Decides whether `S` is an inflation of a right zero semigroup by null
/// semigroups.
///
/// That holds iff every product depends only on its right factor, `ab = φ(b)`,
/// and `φ` is idempotent. The witness is `T = im φ` with `S_t = φ⁻¹(t)`.
pub fn inflation_of_right_zero(s: &MulTable) -> (bool, Option<InflationWitness>) {
    let phi: Vec<Element> = s.row(0).collect();
    let right_only = s.elements().all(|a| s.row(a).eq(phi.iter().copied()));
    if !right_only || phi.iter().any(|&b| phi[b] != b) {
        return (false, None);
    }
    let right_zero: ElemSet = phi.iter().copied().collect();
    let classes = right_zero
        .iter()
        .map(|t| s.elements().filter(|&x| phi[x] == t).collect())
        .collect();
    (true, Some(InflationWitness { right_zero, classes }))
}

/// Exhaustive search for an inflation partition straight from the
/// definition: a right zero subsemigroup `T` and an assignment of every
/// element to some `S_t` with `t ∈ S_t` and `S_u S_t = {t}` for `u, t ∈ T`.
pub fn brute_force_inflation(s: &MulTable) -> Result<bool> {
    let n = s.order();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::SizeCap { requested: n, cap: BRUTE_FORCE_CAP });
    }
    for bits in 1u64..(1 << n) {
        let t: Vec<Element> = (0..n).filter(|&x| bits >> x & 1 == 1).collect();
        let right_zero = t.iter().all(|&u| t.iter().all(|&v| s.mul(u, v) == v));
        if !right_zero {
            continue;
        }
        let rest: Vec<Element> = (0..n).filter(|&x| bits >> x & 1 == 0).collect();
        // owner[x] = index into t of the class containing x.
        let mut owner = vec![0usize; n];
        for (i, &x) in t.iter().enumerate() {
            owner[x] = i;
        }
        let combos = t.len().pow(rest.len() as u32);
        for code in 0..combos {
            let mut c = code;
            for &x in &rest {
                owner[x] = c % t.len();
                c /= t.len();
            }
            let ok = (0..n).all(|x| (0..n).all(|y| s.mul(x, y) == t[owner[y]]));
            if ok {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
