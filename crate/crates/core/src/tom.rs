//! Type collections and the four tropical-oriented-matroid axioms
//! (boundary, comparability, elimination, surrounding), plus deletion,
//! contraction and dimension classification.
//!
//! The pair and per-type scans are independent work items; they run
//! sequentially here and report the first failure in canonical order.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::comparability::{comparability_graph, CycleWitness};
use crate::error::{Error, Result};
use crate::report::Verdict;
use crate::types::{
    for_each_ordered_partition, full_set, subset_cmp, LetterSet, NdType, OrderedPartition,
    MAX_PARTITION_LETTERS,
};

/// A deduplicated, canonically ordered set of (n,d)-types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeCollection {
    n: usize,
    d: usize,
    types: BTreeSet<NdType>,
}

impl TypeCollection {
    pub fn new(n: usize, d: usize, types: impl IntoIterator<Item = NdType>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidParameters(format!("({n},{d})")));
        }
        let mut set = BTreeSet::new();
        for t in types {
            if t.n() != n || t.d() != d {
                return Err(Error::ParameterMismatch {
                    n1: n,
                    d1: d,
                    n2: t.n(),
                    d2: t.d(),
                });
            }
            set.insert(t);
        }
        Ok(Self { n, d, types: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn types(&self) -> &BTreeSet<NdType> {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn contains(&self, t: &NdType) -> bool {
        self.types.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &NdType> {
        self.types.iter()
    }

    /// Types of full arrangement dimension `d - 1` (tuples of singletons).
    pub fn region_topes(&self) -> BTreeSet<NdType> {
        self.with_dim(self.d - 1)
    }

    pub fn vertices(&self) -> BTreeSet<NdType> {
        self.with_dim(0)
    }

    pub fn edges(&self) -> BTreeSet<NdType> {
        if self.d < 2 {
            return BTreeSet::new();
        }
        self.with_dim(1)
    }

    fn with_dim(&self, dim: usize) -> BTreeSet<NdType> {
        self.types
            .iter()
            .filter(|t| t.arrangement_dim() == dim)
            .cloned()
            .collect()
    }
}

/// Buckets the types by arrangement dimension.
pub fn classify(m: &TypeCollection) -> BTreeMap<usize, BTreeSet<NdType>> {
    let mut out: BTreeMap<usize, BTreeSet<NdType>> = BTreeMap::new();
    for t in m.iter() {
        out.entry(t.arrangement_dim())
            .or_default()
            .insert(t.clone());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Evidence {
    Boundary {
        missing: Vec<NdType>,
    },
    Comparability {
        a: NdType,
        b: NdType,
        cycle: CycleWitness,
    },
    Elimination {
        a: NdType,
        b: NdType,
        /// 1-based position.
        position: usize,
    },
    Surrounding {
        a: NdType,
        partition: OrderedPartition,
        refinement: NdType,
    },
}

pub type AxiomVerdict = Verdict<Evidence>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub boundary: AxiomVerdict,
    pub comparability: AxiomVerdict,
    pub elimination: AxiomVerdict,
    pub surrounding: AxiomVerdict,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.verdicts().iter().all(|v| v.passed())
    }

    fn verdicts(&self) -> [&AxiomVerdict; 4] {
        [
            &self.boundary,
            &self.comparability,
            &self.elimination,
            &self.surrounding,
        ]
    }

    pub fn evidence(&self) -> Vec<&Evidence> {
        self.verdicts()
            .iter()
            .filter_map(|v| v.evidence())
            .collect()
    }
}

impl Serialize for AxiomReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AxiomReport", 5)?;
        st.serialize_field("boundary", &self.boundary)?;
        st.serialize_field("comparability", &self.comparability)?;
        st.serialize_field("elimination", &self.elimination)?;
        st.serialize_field("surrounding", &self.surrounding)?;
        st.serialize_field("evidence", &self.evidence())?;
        st.end()
    }
}

pub fn check_boundary(m: &TypeCollection) -> AxiomVerdict {
    let missing: Vec<NdType> = (0..m.d)
        .map(|j| NdType::constant(m.n, m.d, j))
        .filter(|t| !m.contains(t))
        .collect();
    if missing.is_empty() {
        AxiomVerdict::Pass
    } else {
        AxiomVerdict::Fail(Evidence::Boundary { missing })
    }
}

pub fn check_comparability(m: &TypeCollection) -> AxiomVerdict {
    let types: Vec<&NdType> = m.iter().collect();
    for (x, a) in types.iter().enumerate() {
        for b in &types[x + 1..] {
            // CG(B, A) is CG(A, B) reversed, so one orientation suffices
            let g = comparability_graph(a, b).expect("collection shares (n,d)");
            if let Some(cycle) = g.find_cycle() {
                return AxiomVerdict::Fail(Evidence::Comparability {
                    a: (*a).clone(),
                    b: (*b).clone(),
                    cycle,
                });
            }
        }
    }
    AxiomVerdict::Pass
}

/// Whether `c` witnesses elimination of `a`, `b` at 0-based position `j`.
pub fn is_elimination_witness(a: &NdType, b: &NdType, j: usize, c: &NdType) -> bool {
    if !(a.same_params(b) && a.same_params(c)) || j >= a.n() {
        return false;
    }
    (0..a.n()).all(|k| {
        let (ak, bk, ck) = (a.entry(k), b.entry(k), c.entry(k));
        if k == j {
            ck == ak | bk
        } else {
            ck == ak || ck == bk || ck == ak | bk
        }
    })
}

fn search_elimination(m: &TypeCollection, a: &NdType, b: &NdType, j: usize) -> Option<NdType> {
    let options: Vec<Vec<LetterSet>> = (0..m.n)
        .map(|k| {
            let (ak, bk) = (a.entry(k), b.entry(k));
            let mut v = if k == j {
                vec![ak | bk]
            } else {
                vec![ak, bk, ak | bk]
            };
            v.sort_by(|x, y| subset_cmp(*x, *y));
            v.dedup();
            v
        })
        .collect();
    // odometer with position 0 most significant = canonical order
    let mut idx = vec![0usize; m.n];
    loop {
        let entries: Vec<LetterSet> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
        let c = NdType::from_masks(m.d, entries).expect("nonempty entries");
        if m.contains(&c) {
            return Some(c);
        }
        let mut k = m.n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// The canonically first `C ∈ M` with `C_j = A_j ∪ B_j` and
/// `C_k ∈ {A_k, B_k, A_k ∪ B_k}`; `position` is 1-based.
pub fn eliminate_search(
    m: &TypeCollection,
    a: &NdType,
    b: &NdType,
    position: usize,
) -> Result<Option<NdType>> {
    for t in [a, b] {
        if !m.contains(t) {
            return Err(Error::NotMember(t.to_string()));
        }
    }
    if position == 0 || position > m.n {
        return Err(Error::InvalidParameters(format!(
            "position {position} outside 1..={}",
            m.n
        )));
    }
    Ok(search_elimination(m, a, b, position - 1))
}

pub fn check_elimination(m: &TypeCollection) -> AxiomVerdict {
    let types: Vec<&NdType> = m.iter().collect();
    for (x, a) in types.iter().enumerate() {
        // A = B is always witnessed by A itself
        for b in &types[x + 1..] {
            for j in 0..m.n {
                if search_elimination(m, a, b, j).is_none() {
                    return AxiomVerdict::Fail(Evidence::Elimination {
                        a: (*a).clone(),
                        b: (*b).clone(),
                        position: j + 1,
                    });
                }
            }
        }
    }
    AxiomVerdict::Pass
}

/// Every refinement of every member must be a member. Refinements depend only
/// on how a partition orders the letters a type uses, so partitions of those
/// letters are scanned and padded with the unused letters as a last part.
pub fn check_surrounding(m: &TypeCollection) -> Result<AxiomVerdict> {
    if m.d > MAX_PARTITION_LETTERS {
        return Err(Error::LimitExceeded(format!(
            "surrounding check needs d <= {MAX_PARTITION_LETTERS}, got {}",
            m.d
        )));
    }
    for a in m.iter() {
        let used = a.used_letters();
        let rest = full_set(m.d) & !used;
        let mut failure = None;
        for_each_ordered_partition(used, &mut |parts| {
            if failure.is_some() {
                return;
            }
            let mut parts = parts.to_vec();
            if rest != 0 {
                parts.push(rest);
            }
            let p = OrderedPartition::new(m.d, parts).expect("valid partition");
            let r = a.refine(&p);
            if !m.contains(&r) {
                failure = Some(Evidence::Surrounding {
                    a: a.clone(),
                    partition: p,
                    refinement: r,
                });
            }
        })?;
        if let Some(e) = failure {
            return Ok(AxiomVerdict::Fail(e));
        }
    }
    Ok(AxiomVerdict::Pass)
}

pub fn check_tom(m: &TypeCollection) -> Result<AxiomReport> {
    Ok(AxiomReport {
        boundary: check_boundary(m),
        comparability: check_comparability(m),
        elimination: check_elimination(m),
        surrounding: check_surrounding(m)?,
    })
}

/// Deletes the 1-based coordinate `i` from every type.
pub fn tom_deletion(m: &TypeCollection, i: usize) -> Result<TypeCollection> {
    if m.n <= 1 {
        return Err(Error::InvalidParameters(
            "deletion would leave n = 0".into(),
        ));
    }
    if i == 0 || i > m.n {
        return Err(Error::InvalidParameters(format!(
            "coordinate {i} outside 1..={}",
            m.n
        )));
    }
    TypeCollection::new(
        m.n - 1,
        m.d,
        m.iter().map(|t| t.delete_coord(i - 1).expect("n >= 2")),
    )
}

/// Keeps the types avoiding the 1-based letter `j`, relabelled to `[d - 1]`.
pub fn tom_contraction(m: &TypeCollection, j: usize) -> Result<TypeCollection> {
    if m.d <= 1 {
        return Err(Error::InvalidParameters(
            "contraction would leave d = 0".into(),
        ));
    }
    if j == 0 || j > m.d {
        return Err(Error::InvalidParameters(format!(
            "letter {j} outside 1..={}",
            m.d
        )));
    }
    TypeCollection::new(
        m.n,
        m.d - 1,
        m.iter().filter_map(|t| t.contract_letter(j - 1)),
    )
}
