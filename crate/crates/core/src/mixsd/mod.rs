//! Mixed subdivisions of the dilated simplex `nΔ^{d-1}` into Minkowski cells.
//!
//! A cell is stored by its type `A`: the Minkowski sum of the faces
//! `conv{e_j : j ∈ A_i}`. Faces of a cell are exactly its refinements, and
//! its vertices are its total refinements. Under the duality with tropical
//! arrangements the 0-cells of a subdivision (its *vertex topes*) are the
//! same tuples of singletons as the full-dimensional types of the matching
//! oriented matroid (its *region topes*).

pub mod geometry;
pub mod reconstruct;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::comparability::{refinement_witness, CycleWitness, RefinementOutcome};
use crate::error::{Error, Result};
use crate::report::Verdict;
use crate::tom::{check_boundary, check_comparability, check_tom, Evidence, TypeCollection};
use crate::types::{NdType, OrderedPartition, MAX_PARTITION_LETTERS};

pub use geometry::{cell_vertex_points, embed_tope, normalized_volume, LatticePoint};
pub use reconstruct::{is_nice_type, nice_report, reconstruct_from_topes, NiceReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedSubdivision {
    n: usize,
    d: usize,
    cells: BTreeSet<NdType>,
    maximal: BTreeSet<NdType>,
}

fn check_members(n: usize, d: usize, cells: &BTreeSet<NdType>) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameters(format!("n = {n}, d = {d}")));
    }
    for c in cells {
        if c.n() != n || c.d() != d {
            return Err(Error::ParameterMismatch {
                n1: n,
                d1: d,
                n2: c.n(),
                d2: c.d(),
            });
        }
    }
    Ok(())
}

/// True iff `a` is a proper face of `b`.
pub fn is_proper_face(a: &NdType, b: &NdType) -> bool {
    a != b
        && a.leq(b)
        && matches!(
            refinement_witness(a, b),
            Ok(RefinementOutcome::Partition(_))
        )
}

/// Members that are not a proper face of another member.
pub fn inclusion_maximal(cells: &BTreeSet<NdType>) -> BTreeSet<NdType> {
    cells
        .iter()
        .filter(|a| !cells.iter().any(|b| is_proper_face(a, b)))
        .cloned()
        .collect()
}

/// Every face of a Minkowski cell, the cell included.
pub fn faces(a: &NdType) -> Result<BTreeSet<NdType>> {
    a.refinements()
}

impl MixedSubdivision {
    /// Closes the given cells under taking faces.
    pub fn from_maximal_cells(
        n: usize,
        d: usize,
        maximal: impl IntoIterator<Item = NdType>,
    ) -> Result<Self> {
        let mut cells = BTreeSet::new();
        for m in maximal {
            cells.extend(faces(&m)?);
        }
        Self::from_cells(n, d, cells)
    }

    /// Takes the cell set verbatim; no closure is applied.
    pub fn from_cells(n: usize, d: usize, cells: impl IntoIterator<Item = NdType>) -> Result<Self> {
        let cells: BTreeSet<NdType> = cells.into_iter().collect();
        check_members(n, d, &cells)?;
        let maximal = inclusion_maximal(&cells);
        Ok(Self {
            n,
            d,
            cells,
            maximal,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cells(&self) -> &BTreeSet<NdType> {
        &self.cells
    }

    pub fn maximal_cells(&self) -> &BTreeSet<NdType> {
        &self.maximal
    }

    pub fn contains(&self, a: &NdType) -> bool {
        self.cells.contains(a)
    }

    /// The 0-dimensional cells.
    pub fn vertex_topes(&self) -> BTreeSet<NdType> {
        self.cells
            .iter()
            .filter(|c| c.is_total())
            .cloned()
            .collect()
    }

    pub fn validate(&self, volume_check: bool) -> Result<ValidationReport> {
        validate_mixsd(&self.cells, self.n, self.d, volume_check)
    }
}

/// Converts a tropical oriented matroid into its subdivision; the cells are
/// the types themselves and the maximal cells are the vertices.
pub fn tom_to_mixsd(m: &TypeCollection) -> Result<MixedSubdivision> {
    let report = check_tom(m)?;
    if !report.passed() {
        return Err(Error::NotATom(Box::new(report)));
    }
    Ok(MixedSubdivision {
        n: m.n(),
        d: m.d(),
        cells: m.types().clone(),
        maximal: m.vertices(),
    })
}

/// True iff every cell's type graph is a forest.
pub fn is_fine(s: &MixedSubdivision) -> bool {
    s.cells.iter().all(|c| c.type_graph().is_forest())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum SubdivisionEvidence {
    FaceClosure {
        cell: NdType,
        partition: OrderedPartition,
        missing: NdType,
    },
    Comparability {
        a: NdType,
        b: NdType,
        cycle: CycleWitness,
    },
    /// A ridge lying in the wrong number of full-dimensional maximal cells.
    Ridge {
        ridge: NdType,
        bounded: bool,
        maximal_cells: Vec<NdType>,
    },
    LowDimensionalMaximal {
        cell: NdType,
        minkowski_dim: usize,
    },
    Boundary {
        missing: Vec<NdType>,
    },
    Connectivity {
        reached: Vec<NdType>,
        unreached: Vec<NdType>,
    },
    Volume {
        total: u128,
        expected: u128,
    },
}

pub type SubdivisionVerdict = Verdict<SubdivisionEvidence>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub face_closure: SubdivisionVerdict,
    pub comparability: SubdivisionVerdict,
    pub ridge: SubdivisionVerdict,
    pub boundary: SubdivisionVerdict,
    pub connectivity: SubdivisionVerdict,
    pub volume: Option<SubdivisionVerdict>,
}

impl ValidationReport {
    fn verdicts(&self) -> Vec<&SubdivisionVerdict> {
        let mut v = vec![
            &self.face_closure,
            &self.comparability,
            &self.ridge,
            &self.boundary,
            &self.connectivity,
        ];
        v.extend(self.volume.as_ref());
        v
    }

    pub fn passed(&self) -> bool {
        self.verdicts().iter().all(|v| v.passed())
    }

    pub fn evidence(&self) -> Vec<&SubdivisionEvidence> {
        self.verdicts()
            .iter()
            .filter_map(|v| v.evidence())
            .collect()
    }
}

impl Serialize for ValidationReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ValidationReport", 7)?;
        st.serialize_field("face_closure", &self.face_closure)?;
        st.serialize_field("comparability", &self.comparability)?;
        st.serialize_field("ridge", &self.ridge)?;
        st.serialize_field("boundary", &self.boundary)?;
        st.serialize_field("connectivity", &self.connectivity)?;
        st.serialize_field("volume", &self.volume)?;
        st.serialize_field("evidence", &self.evidence())?;
        st.end()
    }
}

fn check_face_closure(cells: &BTreeSet<NdType>) -> Result<SubdivisionVerdict> {
    for c in cells {
        if let Some(missing) = faces(c)?.into_iter().find(|f| !cells.contains(f)) {
            let partition = match refinement_witness(&missing, c)? {
                RefinementOutcome::Partition(p) => p,
                RefinementOutcome::Cycle(_) => unreachable!("faces are refinements"),
            };
            return Ok(Verdict::Fail(SubdivisionEvidence::FaceClosure {
                cell: c.clone(),
                partition,
                missing,
            }));
        }
    }
    Ok(Verdict::Pass)
}

/// Ridge ↦ the full-dimensional maximal cells containing it.
pub fn ridge_incidences(
    d: usize,
    maximal: &BTreeSet<NdType>,
) -> Result<BTreeMap<NdType, Vec<NdType>>> {
    let mut out: BTreeMap<NdType, Vec<NdType>> = BTreeMap::new();
    if d < 2 {
        return Ok(out);
    }
    for m in maximal.iter().filter(|m| m.minkowski_dim() == d - 1) {
        for f in faces(m)? {
            if f.minkowski_dim() == d - 2 {
                out.entry(f).or_default().push(m.clone());
            }
        }
    }
    Ok(out)
}

fn check_ridges(
    d: usize,
    maximal: &BTreeSet<NdType>,
    ridges: &BTreeMap<NdType, Vec<NdType>>,
) -> SubdivisionVerdict {
    if let Some(m) = maximal.iter().find(|m| m.minkowski_dim() != d - 1) {
        return Verdict::Fail(SubdivisionEvidence::LowDimensionalMaximal {
            cell: m.clone(),
            minkowski_dim: m.minkowski_dim(),
        });
    }
    for (r, ms) in ridges {
        let bounded = r.is_bounded();
        if ms.len() != if bounded { 2 } else { 1 } {
            return Verdict::Fail(SubdivisionEvidence::Ridge {
                ridge: r.clone(),
                bounded,
                maximal_cells: ms.clone(),
            });
        }
    }
    Verdict::Pass
}

fn check_connectivity(
    maximal: &BTreeSet<NdType>,
    ridges: &BTreeMap<NdType, Vec<NdType>>,
) -> SubdivisionVerdict {
    let Some(start) = maximal.first() else {
        return Verdict::Fail(SubdivisionEvidence::Connectivity {
            reached: Vec::new(),
            unreached: Vec::new(),
        });
    };
    let mut adj: BTreeMap<&NdType, BTreeSet<&NdType>> = BTreeMap::new();
    for ms in ridges.values() {
        for a in ms {
            for b in ms {
                if a != b {
                    adj.entry(a).or_default().insert(b);
                }
            }
        }
    }
    let mut seen: BTreeSet<&NdType> = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        for &b in adj.get(a).into_iter().flatten() {
            if seen.insert(b) {
                queue.push_back(b);
            }
        }
    }
    if seen.len() == maximal.len() {
        Verdict::Pass
    } else {
        Verdict::Fail(SubdivisionEvidence::Connectivity {
            reached: seen.iter().map(|&c| c.clone()).collect(),
            unreached: maximal
                .iter()
                .filter(|c| !seen.contains(c))
                .cloned()
                .collect(),
        })
    }
}

fn check_volume(n: usize, d: usize, maximal: &BTreeSet<NdType>) -> Result<SubdivisionVerdict> {
    let mut total: u128 = 0;
    for m in maximal {
        total += normalized_volume(m)? as u128;
    }
    let expected = (n as u128).pow(d as u32 - 1);
    Ok(if total == expected {
        Verdict::Pass
    } else {
        Verdict::Fail(SubdivisionEvidence::Volume { total, expected })
    })
}

/// Certifies that `cells` is the full cell set of a mixed subdivision of
/// `nΔ^{d-1}`: closed under faces, pairwise comparable, every interior
/// ridge shared by two maximal cells and every boundary ridge by one, all
/// corners present, and the maximal cells connected through ridges.
pub fn validate_mixsd(
    cells: &BTreeSet<NdType>,
    n: usize,
    d: usize,
    volume_check: bool,
) -> Result<ValidationReport> {
    check_members(n, d, cells)?;
    if d > MAX_PARTITION_LETTERS {
        return Err(Error::LimitExceeded(format!(
            "subdivision checks need d <= {MAX_PARTITION_LETTERS}, got {d}"
        )));
    }
    let collection = TypeCollection::new(n, d, cells.iter().cloned())?;
    let comparability = match check_comparability(&collection) {
        Verdict::Pass => Verdict::Pass,
        Verdict::Fail(Evidence::Comparability { a, b, cycle }) => {
            Verdict::Fail(SubdivisionEvidence::Comparability { a, b, cycle })
        }
        Verdict::Fail(e) => unreachable!("comparability check reported {e:?}"),
    };
    let boundary = match check_boundary(&collection) {
        Verdict::Pass => Verdict::Pass,
        Verdict::Fail(Evidence::Boundary { missing }) => {
            Verdict::Fail(SubdivisionEvidence::Boundary { missing })
        }
        Verdict::Fail(e) => unreachable!("boundary check reported {e:?}"),
    };
    let maximal = inclusion_maximal(cells);
    let ridges = ridge_incidences(d, &maximal)?;
    let ridge = check_ridges(d, &maximal, &ridges);
    // volumes are only defined for full-dimensional cells
    let volume = if volume_check && maximal.iter().all(|m| m.minkowski_dim() == d - 1) {
        Some(check_volume(n, d, &maximal)?)
    } else {
        None
    };
    Ok(ValidationReport {
        face_closure: check_face_closure(cells)?,
        comparability,
        ridge,
        boundary,
        connectivity: check_connectivity(&maximal, &ridges),
        volume,
    })
}

/// Drops the 1-based coordinate `i` from every cell.
pub fn mixsd_deletion(s: &MixedSubdivision, i: usize) -> Result<MixedSubdivision> {
    if s.n <= 1 {
        return Err(Error::InvalidParameters(
            "deletion would leave n = 0".into(),
        ));
    }
    if i == 0 || i > s.n {
        return Err(Error::InvalidParameters(format!(
            "coordinate {i} outside 1..={}",
            s.n
        )));
    }
    MixedSubdivision::from_cells(
        s.n - 1,
        s.d,
        s.cells
            .iter()
            .map(|c| c.delete_coord(i - 1).expect("n >= 2")),
    )
}

/// Restricts to the facet `x_j = 0`: keeps the cells avoiding the 1-based
/// letter `j` and relabels the remaining letters.
pub fn mixsd_contraction(s: &MixedSubdivision, j: usize) -> Result<MixedSubdivision> {
    if s.d <= 1 {
        return Err(Error::InvalidParameters(
            "contraction would leave d = 0".into(),
        ));
    }
    if j == 0 || j > s.d {
        return Err(Error::InvalidParameters(format!(
            "letter {j} outside 1..={}",
            s.d
        )));
    }
    MixedSubdivision::from_cells(
        s.n,
        s.d - 1,
        s.cells.iter().filter_map(|c| c.contract_letter(j - 1)),
    )
}

/// First pair of distinct cells with equal deletions at the 1-based
/// coordinate `i` whose componentwise union is not a cell.
pub fn deletion_fiber_violation(s: &MixedSubdivision, i: usize) -> Option<(NdType, NdType)> {
    if s.n <= 1 || i == 0 || i > s.n {
        return None;
    }
    let mut fibers: BTreeMap<NdType, Vec<&NdType>> = BTreeMap::new();
    for c in &s.cells {
        fibers
            .entry(c.delete_coord(i - 1).unwrap())
            .or_default()
            .push(c);
    }
    for fiber in fibers.values() {
        for (x, a) in fiber.iter().enumerate() {
            for b in &fiber[x + 1..] {
                let union = a.join(b).expect("same parameters");
                if !s.cells.contains(&union) {
                    return Some(((*a).clone(), (*b).clone()));
                }
            }
        }
    }
    None
}
