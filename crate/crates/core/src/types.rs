//! The (n,d)-type algebra.
//!
//! An (n,d)-type is an n-tuple of nonempty subsets of the alphabet `[d]`.
//! Subsets are stored as bitmasks (bit `j` is letter `j + 1`), so the
//! alphabet is capped at [`MAX_LETTERS`]. Externally letters are 1-based and
//! printed in the compact notation `(123,16,34)`; alphabets above nine
//! letters use dot-separated elements such as `(1.12.4,3)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::dsu::UnionFind;
use crate::error::{Error, Result};

/// Largest supported alphabet.
pub const MAX_LETTERS: usize = 16;

/// Largest alphabet for which ordered partitions are enumerated
/// (ordered Bell number 545,835 at 8).
pub const MAX_PARTITION_LETTERS: usize = 8;

/// A subset of `[d]` as a bitmask.
pub type LetterSet = u16;

pub fn full_set(d: usize) -> LetterSet {
    debug_assert!(d <= MAX_LETTERS);
    if d == MAX_LETTERS {
        LetterSet::MAX
    } else {
        (1u16 << d) - 1
    }
}

/// 0-based letters of `set` in ascending order.
pub fn letters(set: LetterSet) -> impl Iterator<Item = usize> {
    let mut rest = set;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(j)
        }
    })
}

pub fn singleton(j: usize) -> LetterSet {
    1 << j
}

pub fn is_singleton(set: LetterSet) -> bool {
    set.count_ones() == 1
}

/// Compares two subsets as ascending element lists ("1" < "12" < "13" < "2").
pub fn subset_cmp(a: LetterSet, b: LetterSet) -> Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
        if la != lb {
            return la.cmp(&lb);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

pub fn format_set(set: LetterSet, d: usize) -> String {
    let sep = if d > 9 { "." } else { "" };
    letters(set)
        .map(|j| (j + 1).to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

pub fn parse_set(text: &str, d: usize) -> Result<LetterSet> {
    let text = text.trim();
    if text.is_empty() || text == "{}" || text == "∅" {
        return Ok(0);
    }
    let mut set = 0;
    let mut push = |tok: &str| -> Result<()> {
        let letter: usize = tok
            .parse()
            .map_err(|_| Error::Parse(format!("bad letter {tok:?}")))?;
        if letter == 0 || letter > d {
            return Err(Error::OutOfRange { letter, d });
        }
        set |= singleton(letter - 1);
        Ok(())
    };
    if d > 9 {
        for tok in text.split('.') {
            push(tok.trim())?;
        }
    } else {
        for ch in text.chars() {
            push(&ch.to_string())?;
        }
    }
    Ok(set)
}

fn check_alphabet(d: usize) -> Result<()> {
    if d == 0 || d > MAX_LETTERS {
        return Err(Error::InvalidParameters(format!(
            "alphabet size d = {d} must lie in 1..={MAX_LETTERS}"
        )));
    }
    Ok(())
}

/// An n-tuple of nonempty subsets of `[d]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NdType {
    d: usize,
    entries: Vec<LetterSet>,
}

/// Result of a componentwise intersection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Meet {
    Type(NdType),
    /// 1-based positions whose intersection is empty.
    EmptyPositions(Vec<usize>),
}

impl NdType {
    /// Builds a type from bitmask entries.
    pub fn from_masks(d: usize, entries: Vec<LetterSet>) -> Result<Self> {
        check_alphabet(d)?;
        if entries.is_empty() {
            return Err(Error::InvalidParameters("n must be at least 1".into()));
        }
        let full = full_set(d);
        for (i, &e) in entries.iter().enumerate() {
            if e == 0 {
                return Err(Error::EmptyEntry { position: i + 1 });
            }
            if e & !full != 0 {
                let letter = letters(e & !full).next().unwrap() + 1;
                return Err(Error::OutOfRange { letter, d });
            }
        }
        Ok(Self { d, entries })
    }

    /// Builds a type from 1-based letter lists.
    pub fn make(n: usize, d: usize, entries: &[Vec<usize>]) -> Result<Self> {
        if entries.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: entries.len(),
            });
        }
        check_alphabet(d)?;
        let mut masks = Vec::with_capacity(n);
        for (i, entry) in entries.iter().enumerate() {
            if entry.is_empty() {
                return Err(Error::EmptyEntry { position: i + 1 });
            }
            let mut m = 0;
            for &letter in entry {
                if letter == 0 || letter > d {
                    return Err(Error::OutOfRange { letter, d });
                }
                m |= singleton(letter - 1);
            }
            masks.push(m);
        }
        Self::from_masks(d, masks)
    }

    /// Parses `(123,16,34)` style notation.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        check_alphabet(d)?;
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(t);
        let mut masks = Vec::new();
        for (i, part) in inner.split(',').enumerate() {
            let m = parse_set(part, d)?;
            if m == 0 {
                return Err(Error::EmptyEntry { position: i + 1 });
            }
            masks.push(m);
        }
        Self::from_masks(d, masks)
    }

    /// Like [`NdType::parse`] but also checks the number of entries.
    pub fn parse_with(text: &str, n: usize, d: usize) -> Result<Self> {
        let t = Self::parse(text, d)?;
        if t.n() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: t.n(),
            });
        }
        Ok(t)
    }

    /// The constant type `(j,j,...,j)` for a 0-based letter `j`.
    pub fn constant(n: usize, d: usize, j: usize) -> Self {
        assert!(j < d && n >= 1);
        Self {
            d,
            entries: vec![singleton(j); n],
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[LetterSet] {
        &self.entries
    }

    /// Entry at a 0-based position.
    pub fn entry(&self, i: usize) -> LetterSet {
        self.entries[i]
    }

    /// 1-based letters of the entry at 0-based position `i`.
    pub fn entry_letters(&self, i: usize) -> Vec<usize> {
        letters(self.entries[i]).map(|j| j + 1).collect()
    }

    pub fn same_params(&self, other: &NdType) -> bool {
        self.d == other.d && self.n() == other.n()
    }

    pub(crate) fn check_params(&self, other: &NdType) -> Result<()> {
        if self.same_params(other) {
            Ok(())
        } else {
            Err(Error::ParameterMismatch {
                n1: self.n(),
                d1: self.d,
                n2: other.n(),
                d2: other.d,
            })
        }
    }

    /// Union of all entries.
    pub fn used_letters(&self) -> LetterSet {
        self.entries.iter().fold(0, |acc, &e| acc | e)
    }

    pub fn is_total(&self) -> bool {
        self.entries.iter().all(|&e| is_singleton(e))
    }

    /// True iff every letter of `[d]` occurs somewhere.
    pub fn is_bounded(&self) -> bool {
        self.used_letters() == full_set(self.d)
    }

    pub fn refine(&self, partition: &OrderedPartition) -> NdType {
        debug_assert_eq!(partition.d, self.d);
        let entries = self
            .entries
            .iter()
            .map(|&e| {
                partition
                    .parts
                    .iter()
                    .map(|&p| e & p)
                    .find(|&x| x != 0)
                    .expect("ordered partition covers [d]")
            })
            .collect();
        NdType { d: self.d, entries }
    }

    /// All total refinements. Only the relative order of the letters used
    /// in the type matters, so permutations of those letters are scanned.
    pub fn total_refinements(&self) -> Result<BTreeSet<NdType>> {
        let used: Vec<usize> = letters(self.used_letters()).collect();
        if used.len() > MAX_PARTITION_LETTERS {
            return Err(Error::LimitExceeded(format!(
                "total refinements over {} letters (cap {MAX_PARTITION_LETTERS})",
                used.len()
            )));
        }
        let mut out = BTreeSet::new();
        let mut rank = [0usize; MAX_LETTERS];
        for_each_permutation(&used, |perm| {
            for (r, &j) in perm.iter().enumerate() {
                rank[j] = r;
            }
            let entries = self
                .entries
                .iter()
                .map(|&e| singleton(letters(e).min_by_key(|&j| rank[j]).unwrap()))
                .collect();
            out.insert(NdType { d: self.d, entries });
        });
        Ok(out)
    }

    /// All refinements (including the type itself). Enumerates ordered
    /// partitions of the letters used in the type.
    pub fn refinements(&self) -> Result<BTreeSet<NdType>> {
        let used = self.used_letters();
        let rest = full_set(self.d) & !used;
        let mut out = BTreeSet::new();
        for_each_ordered_partition(used, &mut |parts| {
            let mut parts = parts.to_vec();
            if rest != 0 {
                parts.push(rest);
            }
            let p = OrderedPartition { d: self.d, parts };
            out.insert(self.refine(&p));
        })?;
        Ok(out)
    }

    fn letter_classes(&self) -> UnionFind {
        let mut uf = UnionFind::new(self.d);
        for &e in &self.entries {
            let mut it = letters(e);
            if let Some(first) = it.next() {
                for j in it {
                    uf.union(first, j);
                }
            }
        }
        uf
    }

    /// Number of connected components of `K_A` (isolated letter nodes
    /// included) minus one.
    pub fn arrangement_dim(&self) -> usize {
        let mut uf = self.letter_classes();
        (0..self.d).filter(|&j| uf.find(j) == j).count() - 1
    }

    /// Dimension of the Minkowski cell: letters used minus components of
    /// `K_A` that carry an edge.
    pub fn minkowski_dim(&self) -> usize {
        let used = self.used_letters();
        let mut uf = self.letter_classes();
        let comps = letters(used).filter(|&j| uf.find(j) == j).count();
        used.count_ones() as usize - comps
    }

    pub fn meet(&self, other: &NdType) -> Result<Meet> {
        self.check_params(other)?;
        let entries: Vec<LetterSet> = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a & b)
            .collect();
        let empty: Vec<usize> = entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e == 0)
            .map(|(i, _)| i + 1)
            .collect();
        Ok(if empty.is_empty() {
            Meet::Type(NdType { d: self.d, entries })
        } else {
            Meet::EmptyPositions(empty)
        })
    }

    pub fn join(&self, other: &NdType) -> Result<NdType> {
        self.check_params(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a | b)
            .collect();
        Ok(NdType { d: self.d, entries })
    }

    /// Componentwise inclusion `self ⊆ other`; false when the parameters differ.
    pub fn leq(&self, other: &NdType) -> bool {
        self.same_params(other)
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn type_graph(&self) -> TypeGraph {
        let edges = self
            .entries
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| letters(e).map(move |j| (i, j)))
            .collect();
        TypeGraph {
            n: self.n(),
            d: self.d,
            edges,
        }
    }

    /// Drops the 0-based coordinate `i`; `None` when that would leave no entries.
    pub fn delete_coord(&self, i: usize) -> Option<NdType> {
        if self.n() <= 1 || i >= self.n() {
            return None;
        }
        let mut entries = self.entries.clone();
        entries.remove(i);
        Some(NdType { d: self.d, entries })
    }

    /// Removes the 0-based letter `j` and shifts higher letters down.
    /// `None` if some entry contains `j` or the alphabet would become empty.
    pub fn contract_letter(&self, j: usize) -> Option<NdType> {
        if self.d <= 1 || j >= self.d {
            return None;
        }
        let bit = singleton(j);
        if self.entries.iter().any(|&e| e & bit != 0) {
            return None;
        }
        let low = bit - 1;
        let entries = self
            .entries
            .iter()
            .map(|&e| (e & low) | ((e & !low) >> 1))
            .collect();
        Some(NdType {
            d: self.d - 1,
            entries,
        })
    }
}

impl Ord for NdType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d
            .cmp(&other.d)
            .then(self.entries.len().cmp(&other.entries.len()))
            .then_with(|| {
                self.entries
                    .iter()
                    .zip(&other.entries)
                    .map(|(&a, &b)| subset_cmp(a, b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

impl PartialOrd for NdType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NdType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|&e| format_set(e, self.d))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

impl serde::Serialize for NdType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The bipartite graph `K_A` with nodes `N_1..N_n` and `D_1..D_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeGraph {
    pub n: usize,
    pub d: usize,
    /// 0-based `(i, j)` pairs meaning an edge `N_{i+1} - D_{j+1}`.
    pub edges: Vec<(usize, usize)>,
}

impl TypeGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn union_find(&self) -> (UnionFind, bool) {
        let mut uf = UnionFind::new(self.n + self.d);
        let mut forest = true;
        for &(i, j) in &self.edges {
            if !uf.union(i, self.n + j) {
                forest = false;
            }
        }
        (uf, forest)
    }

    /// Components over all `n + d` nodes.
    pub fn component_count(&self) -> usize {
        let (mut uf, _) = self.union_find();
        (0..self.n + self.d).filter(|&v| uf.find(v) == v).count()
    }

    pub fn is_forest(&self) -> bool {
        self.union_find().1
    }
}

/// An ordered partition `(P_1, ..., P_k)` of `[d]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    d: usize,
    parts: Vec<LetterSet>,
}

impl OrderedPartition {
    pub fn new(d: usize, parts: Vec<LetterSet>) -> Result<Self> {
        check_alphabet(d)?;
        let mut seen = 0;
        for (k, &p) in parts.iter().enumerate() {
            if p == 0 {
                return Err(Error::EmptyEntry { position: k + 1 });
            }
            if p & seen != 0 {
                return Err(Error::InvalidParameters(format!(
                    "part {} overlaps an earlier part",
                    k + 1
                )));
            }
            seen |= p;
        }
        if seen != full_set(d) {
            return Err(Error::InvalidParameters(
                "ordered partition does not cover [d]".into(),
            ));
        }
        Ok(Self { d, parts })
    }

    /// From 1-based letter lists.
    pub fn from_letters(d: usize, parts: &[Vec<usize>]) -> Result<Self> {
        check_alphabet(d)?;
        let mut masks = Vec::new();
        for part in parts {
            let mut m = 0;
            for &letter in part {
                if letter == 0 || letter > d {
                    return Err(Error::OutOfRange { letter, d });
                }
                m |= singleton(letter - 1);
            }
            masks.push(m);
        }
        Self::new(d, masks)
    }

    /// The one-part partition `([d])`.
    pub fn whole(d: usize) -> Self {
        Self {
            d,
            parts: vec![full_set(d)],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn parts(&self) -> &[LetterSet] {
        &self.parts
    }

    /// 0-based index of the part containing the 0-based letter `j`.
    pub fn part_of(&self, j: usize) -> usize {
        self.parts
            .iter()
            .position(|&p| p & singleton(j) != 0)
            .expect("partition covers [d]")
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|&p| format_set(p, self.d)).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl serde::Serialize for OrderedPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Calls `visit` with every ordered partition of the letters in `set`
/// (each as a slice of parts). The empty set has exactly one, empty, partition.
pub fn for_each_ordered_partition(
    set: LetterSet,
    visit: &mut dyn FnMut(&[LetterSet]),
) -> Result<()> {
    let k = set.count_ones() as usize;
    if k > MAX_PARTITION_LETTERS {
        return Err(Error::LimitExceeded(format!(
            "ordered partitions of {k} letters (cap {MAX_PARTITION_LETTERS})"
        )));
    }
    fn rec(rest: LetterSet, stack: &mut Vec<LetterSet>, visit: &mut dyn FnMut(&[LetterSet])) {
        if rest == 0 {
            visit(stack);
            return;
        }
        let mut sub = rest;
        while sub != 0 {
            stack.push(sub);
            rec(rest & !sub, stack, visit);
            stack.pop();
            sub = (sub - 1) & rest;
        }
    }
    rec(set, &mut Vec::new(), visit);
    Ok(())
}

/// All ordered partitions of `[d]`.
pub fn ordered_partitions(d: usize) -> Result<Vec<OrderedPartition>> {
    check_alphabet(d)?;
    let mut out = Vec::new();
    for_each_ordered_partition(full_set(d), &mut |parts| {
        out.push(OrderedPartition {
            d,
            parts: parts.to_vec(),
        })
    })?;
    Ok(out)
}

fn for_each_permutation(items: &[usize], mut visit: impl FnMut(&[usize])) {
    // Heap's algorithm
    let mut a = items.to_vec();
    let n = a.len();
    let mut c = vec![0usize; n];
    visit(&a);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            visit(&a);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Every nonempty subset of `[d]`, in ascending bitmask order.
pub fn nonempty_subsets(d: usize) -> impl Iterator<Item = LetterSet> {
    1..=full_set(d)
}

/// Calls `visit` for every (n,d)-type whose entries are nonempty subsets of
/// the given per-position masks.
pub fn for_each_type_within(d: usize, bounds: &[LetterSet], mut visit: impl FnMut(&NdType)) {
    let n = bounds.len();
    if n == 0 || bounds.contains(&0) {
        return;
    }
    let mut cur = NdType {
        d,
        entries: bounds.to_vec(),
    };
    // iterate submasks of every bound in odometer fashion
    let mut subs: Vec<LetterSet> = bounds.to_vec();
    loop {
        cur.entries.copy_from_slice(&subs);
        visit(&cur);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            let next = (subs[i].wrapping_sub(1)) & bounds[i];
            if next != 0 {
                subs[i] = next;
                break;
            }
            subs[i] = bounds[i];
            i += 1;
        }
    }
}

/// Number of (n,d)-types, `(2^d - 1)^n`, saturating.
pub fn type_count(n: usize, d: usize) -> u128 {
    let base = (1u128 << d) - 1;
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.saturating_mul(base);
    }
    acc
}
