//! Finite semigroups given by multiplication tables.
//!
//! Elements are dense 0-based indices. Every constructor validates closure and
//! associativity, so a [`MulTable`] in hand is always a semigroup.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest order any constructed table may have.
pub const SIZE_CAP: usize = 64;

pub type Element = usize;

/// A set of elements of a semigroup of order at most [`SIZE_CAP`].
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const fn empty() -> Self {
        ElemSet(0)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: Element) -> Self {
        ElemSet(1 << x)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, x: Element) {
        self.0 |= 1 << x;
    }

    pub fn contains(self, x: Element) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<Element> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = Element> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(x)
        })
    }

    pub fn to_vec(self) -> Vec<Element> {
        self.iter().collect()
    }
}

impl FromIterator<Element> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        let mut set = ElemSet::empty();
        for x in iter {
            set.insert(x);
        }
        set
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite semigroup as an associative multiplication table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MulTable {
    order: usize,
    cells: Vec<u8>,
    names: Option<Vec<String>>,
}

/// Checks a raw square table for associativity.
///
/// Returns `Ok(false)` for a well-formed but non-associative table and an
/// error when the input is not a square array of in-range indices.
pub fn check_associativity(rows: &[Vec<usize>]) -> Result<bool> {
    validate_shape(rows)?;
    Ok(associativity_failure(rows.len(), |a, b| rows[a][b]).is_none())
}

fn validate_shape(rows: &[Vec<usize>]) -> Result<()> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Malformed("a semigroup needs at least one element".into()));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Malformed(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        if let Some(&bad) = row.iter().find(|&&x| x >= n) {
            return Err(Error::Malformed(format!(
                "entry {} in row {} is outside 1..={n}",
                bad + 1,
                i + 1
            )));
        }
    }
    Ok(())
}

/// First triple `(a, b, c)` in lexicographic order with `(ab)c != a(bc)`.
pub(crate) fn associativity_failure(
    n: usize,
    mul: impl Fn(usize, usize) -> usize,
) -> Option<(usize, usize, usize)> {
    (0..n)
        .cartesian_product(0..n)
        .cartesian_product(0..n)
        .map(|((a, b), c)| (a, b, c))
        .find(|&(a, b, c)| mul(mul(a, b), c) != mul(a, mul(b, c)))
}

impl MulTable {
    /// Builds a table from 0-based rows, rejecting malformed or
    /// non-associative input.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        validate_shape(rows)?;
        let n = rows.len();
        if n > SIZE_CAP {
            return Err(Error::SizeCap { requested: n, cap: SIZE_CAP });
        }
        let cells = rows.iter().flatten().map(|&x| x as u8).collect();
        Self::from_cells(n, cells)
    }

    pub(crate) fn from_cells(order: usize, cells: Vec<u8>) -> Result<Self> {
        debug_assert_eq!(cells.len(), order * order);
        if let Some((a, b, c)) =
            associativity_failure(order, |a, b| cells[a * order + b] as usize)
        {
            return Err(Error::NotAssociative { a, b, c });
        }
        Ok(MulTable { order, cells, names: None })
    }

    /// Skips the associativity check. The caller guarantees it.
    pub(crate) fn from_cells_unchecked(order: usize, cells: Vec<u8>) -> Self {
        MulTable { order, cells, names: None }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.order {
            return Err(Error::Malformed(format!(
                "{} names given for {} elements",
                names.len(),
                self.order
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.cells[a * self.order + b] as usize
    }

    pub fn row(&self, a: Element) -> impl Iterator<Item = Element> + '_ {
        self.cells[a * self.order..(a + 1) * self.order]
            .iter()
            .map(|&x| x as usize)
    }

    pub fn rows(&self) -> Vec<Vec<Element>> {
        self.elements().map(|a| self.row(a).collect()).collect()
    }

    /// Row-major cells, one byte per entry.
    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of an element: its given name, or its 1-based index.
    pub fn name(&self, x: Element) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => (x + 1).to_string(),
        }
    }

    pub fn check_element(&self, x: Element) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { element: x, order: self.order })
        }
    }

    /// The opposite semigroup, with product `a * b := b a`.
    pub fn transpose(&self) -> MulTable {
        let n = self.order;
        let cells = (0..n)
            .cartesian_product(0..n)
            .map(|(a, b)| self.cells[b * n + a])
            .collect();
        MulTable { order: n, cells, names: self.names.clone() }
    }

    /// Relabels elements: element `x` of `self` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[Element]) -> MulTable {
        let n = self.order;
        let mut cells = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                cells[perm[a] * n + perm[b]] = perm[self.mul(a, b)] as u8;
            }
        }
        let names = self.names.as_ref().map(|names| {
            let mut out = vec![String::new(); n];
            for (x, name) in names.iter().enumerate() {
                out[perm[x]] = name.clone();
            }
            out
        });
        MulTable { order: n, cells, names }
    }

    /// Set product `X Y`.
    pub fn set_mul(&self, xs: ElemSet, ys: ElemSet) -> ElemSet {
        xs.iter()
            .flat_map(|x| ys.iter().map(move |y| self.mul(x, y)))
            .collect()
    }

    pub fn is_closed(&self, xs: ElemSet) -> bool {
        self.set_mul(xs, xs).is_subset(xs)
    }

    /// `S^2 = {ab : a, b in S}`.
    pub fn square(&self) -> ElemSet {
        self.cells.iter().map(|&x| x as usize).collect()
    }

    pub fn is_idempotent(&self, e: Element) -> bool {
        self.mul(e, e) == e
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| (a..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Two-sided identity, if there is one.
    pub fn identity(&self) -> Option<Element> {
        self.elements().find(|&e| {
            self.elements()
                .all(|x| self.mul(e, x) == x && self.mul(x, e) == x)
        })
    }

    pub fn lambda_map(&self, s: Element) -> LambdaMap {
        LambdaMap { image: self.row(s).collect() }
    }
}

impl fmt::Debug for MulTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MulTable({}", self.order)?;
        for row in self.rows() {
            write!(f, "; {}", row.iter().map(|x| x + 1).join(" "))?;
        }
        write!(f, ")")
    }
}

/// Left translation `x -> s x` of a fixed element `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LambdaMap {
    pub image: Vec<Element>,
}

impl LambdaMap {
    pub fn apply(&self, x: Element) -> Element {
        self.image[x]
    }

    /// Composition in right-action order: first `self`, then `next`.
    ///
    /// With this orientation `lambda(s).then(lambda(t)) == lambda(t s)`.
    pub fn then(&self, next: &LambdaMap) -> LambdaMap {
        LambdaMap { image: self.image.iter().map(|&x| next.image[x]).collect() }
    }

    pub fn is_constant(&self) -> bool {
        self.image.iter().all_equal()
    }
}

/// `lambda_s : x -> s x`.
pub fn lambda_map(s: &MulTable, x: Element) -> Result<LambdaMap> {
    s.check_element(x)?;
    Ok(s.lambda_map(x))
}

/// Component-wise product. The pair `(a, b)` gets index `a * |T| + b`.
pub fn direct_product(s: &MulTable, t: &MulTable) -> Result<MulTable> {
    let (n, m) = (s.order(), t.order());
    let order = n * m;
    if order > SIZE_CAP {
        return Err(Error::SizeCap { requested: order, cap: SIZE_CAP });
    }
    let mut cells = Vec::with_capacity(order * order);
    for (a, b) in (0..n).cartesian_product(0..m) {
        for (c, d) in (0..n).cartesian_product(0..m) {
            cells.push((s.mul(a, c) * m + t.mul(b, d)) as u8);
        }
    }
    let names = (0..n)
        .cartesian_product(0..m)
        .map(|(a, b)| format!("({},{})", s.name(a), t.name(b)))
        .collect();
    MulTable::from_cells_unchecked(order, cells).with_names(names)
}

/// Standard small semigroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `xy = x`.
    LeftZero(usize),
    /// `xy = y`.
    RightZero(usize),
    /// Every product is the zero, element 0.
    Null(usize),
    /// Addition modulo n; 0 is the identity.
    CyclicGroup(usize),
    /// Permutations of three points, identity first.
    Symmetric3,
    /// `(i, j)(k, l) = (i, l)` on a p-by-q grid.
    RectangularBand(usize, usize),
    /// Four elements i, j, k, f: {i, j, k} is a right zero ideal, `kf = j`
    /// and `xf = i` otherwise. Its automaton semigroup is a two-element left
    /// zero semigroup.
    Ijkf,
}

impl Family {
    pub fn build(self) -> Result<MulTable> {
        let order = match self {
            Family::LeftZero(n) | Family::RightZero(n) | Family::Null(n) | Family::CyclicGroup(n) => n,
            Family::Symmetric3 => 6,
            Family::RectangularBand(p, q) => p * q,
            Family::Ijkf => 4,
        };
        if order == 0 {
            return Err(Error::Malformed("a semigroup needs at least one element".into()));
        }
        if order > SIZE_CAP {
            return Err(Error::SizeCap { requested: order, cap: SIZE_CAP });
        }
        let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<u8> {
            (0..order)
                .cartesian_product(0..order)
                .map(|(a, b)| f(a, b) as u8)
                .collect()
        };
        let cells = match self {
            Family::LeftZero(_) => table(&|a, _| a),
            Family::RightZero(_) => table(&|_, b| b),
            Family::Null(_) => table(&|_, _| 0),
            Family::CyclicGroup(n) => table(&|a, b| (a + b) % n),
            Family::Symmetric3 => {
                let perms: Vec<Vec<usize>> = (0..3).permutations(3).collect();
                // (pq)(x) = q(p(x)): apply p first.
                table(&|a, b| {
                    let composed: Vec<usize> = (0..3).map(|x| perms[b][perms[a][x]]).collect();
                    perms.iter().position(|p| *p == composed).unwrap()
                })
            }
            Family::RectangularBand(_, q) => table(&|a, b| (a / q) * q + b % q),
            Family::Ijkf => vec![
                0, 1, 2, 0, //
                0, 1, 2, 0, //
                0, 1, 2, 1, //
                0, 1, 2, 0,
            ],
        };
        let table = MulTable::from_cells(order, cells)?;
        match self {
            Family::Ijkf => table.with_names(["i", "j", "k", "f"].map(String::from).to_vec()),
            _ => Ok(table),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `left_zero:N`, `right_zero:N`, `null:N`, `cyclic:N`, `s3`,
    /// `rectangular_band:PxQ` and `ijkf`.
    fn from_str(spec: &str) -> Result<Self> {
        let unknown = || Error::UnknownFamily(spec.to_string());
        let (name, arg) = match spec.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (spec, None),
        };
        let size = || -> Result<usize> { arg.ok_or_else(unknown)?.parse().map_err(|_| unknown()) };
        Ok(match name {
            "left_zero" => Family::LeftZero(size()?),
            "right_zero" => Family::RightZero(size()?),
            "null" => Family::Null(size()?),
            "cyclic" | "cyclic_group" => Family::CyclicGroup(size()?),
            "s3" | "symmetric_group" => Family::Symmetric3,
            "ijkf" => Family::Ijkf,
            "rectangular_band" => {
                let (p, q) = arg.and_then(|a| a.split_once('x')).ok_or_else(unknown)?;
                Family::RectangularBand(
                    p.parse().map_err(|_| unknown())?,
                    q.parse().map_err(|_| unknown())?,
                )
            }
            _ => return Err(unknown()),
        })
    }
}

pub fn named_family(spec: &str) -> Result<MulTable> {
    spec.parse::<Family>()?.build()
}

pub fn left_zero(n: usize) -> MulTable {
    Family::LeftZero(n).build().expect("left zero table")
}

pub fn right_zero(n: usize) -> MulTable {
    Family::RightZero(n).build().expect("right zero table")
}

pub fn null(n: usize) -> MulTable {
    Family::Null(n).build().expect("null table")
}

pub fn cyclic_group(n: usize) -> MulTable {
    Family::CyclicGroup(n).build().expect("cyclic group table")
}

pub fn symmetric_group_3() -> MulTable {
    Family::Symmetric3.build().expect("S3 table")
}

pub fn rectangular_band(p: usize, q: usize) -> MulTable {
    Family::RectangularBand(p, q).build().expect("rectangular band table")
}

pub fn ijkf() -> MulTable {
    Family::Ijkf.build().expect("ijkf table")
}

/// Searches for a bijection `f` with `f(ab) = f(a) f(b)`.
///
/// Backtracking over images with a consistency check on every pair of
/// already-mapped elements; adequate for orders up to a dozen or so.
pub fn find_isomorphism(a: &MulTable, b: &MulTable) -> Option<Vec<Element>> {
    let n = a.order();
    if n != b.order() {
        return None;
    }
    // Cheap invariant: (is idempotent, size of the row image, size of column image).
    let invariant = |t: &MulTable, x: Element| {
        let row: ElemSet = t.row(x).collect();
        let col: ElemSet = t.elements().map(|y| t.mul(y, x)).collect();
        (t.is_idempotent(x), row.len(), col.len())
    };
    let inv_a: Vec<_> = a.elements().map(|x| invariant(a, x)).collect();
    let inv_b: Vec<_> = b.elements().map(|x| invariant(b, x)).collect();
    if inv_a.iter().sorted().ne(inv_b.iter().sorted()) {
        return None;
    }

    fn extend(
        a: &MulTable,
        b: &MulTable,
        inv_a: &[(bool, usize, usize)],
        inv_b: &[(bool, usize, usize)],
        map: &mut Vec<Option<Element>>,
        used: &mut ElemSet,
        next: Element,
    ) -> bool {
        let n = a.order();
        if next == n {
            return true;
        }
        for y in 0..n {
            if used.contains(y) || inv_a[next] != inv_b[y] {
                continue;
            }
            map[next] = Some(y);
            used.insert(y);
            let consistent = (0..=next).all(|p| {
                [(p, next), (next, p)].iter().all(|&(u, v)| {
                    let (fu, fv) = (map[u].unwrap(), map[v].unwrap());
                    match map[a.mul(u, v)] {
                        Some(image) => image == b.mul(fu, fv),
                        // The product's image must still be free for it.
                        None => !used.contains(b.mul(fu, fv)),
                    }
                })
            });
            if consistent && extend(a, b, inv_a, inv_b, map, used, next + 1) {
                return true;
            }
            map[next] = None;
            *used = ElemSet(used.0 & !(1 << y));
        }
        false
    }

    let mut map = vec![None; n];
    let mut used = ElemSet::empty();
    extend(a, b, &inv_a, &inv_b, &mut map, &mut used, 0)
        .then(|| map.into_iter().map(Option::unwrap).collect())
}
