//! Combinatorial Poincaré duality between a mixed subdivision and an
//! arrangement of tropical pseudohyperplanes.
//!
//! The dual of a cell of Minkowski dimension `k` has dimension `d - 1 - k`,
//! and the face order is reversed. The `i`-th pseudohyperplane consists of
//! the duals of the cells whose `i`-th summand is not a point. Topological
//! conditions are replaced by checkable combinatorial surrogates.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::comparability::CycleWitness;
use crate::dsu::UnionFind;
use crate::error::{Error, Result};
use crate::mixsd::{cell_vertex_points, is_fine, is_proper_face, MixedSubdivision};
use crate::report::Verdict;
use crate::tom::{check_comparability, check_surrounding, Evidence, TypeCollection};
use crate::types::{NdType, OrderedPartition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualCell {
    pub cell: NdType,
    pub dim: usize,
    /// Decided from the primal vertices: the primal cell meets no facet
    /// `x_j = 0` of the simplex.
    pub bounded: bool,
}

/// Dual cells in input order; `incidence` holds `(x, y)` whenever the dual
/// of cell `x` is a proper face of the dual of cell `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualComplex {
    n: usize,
    d: usize,
    cells: Vec<DualCell>,
    incidence: BTreeSet<(usize, usize)>,
}

fn off_boundary(a: &NdType) -> Result<bool> {
    let points = cell_vertex_points(a)?;
    Ok((0..a.d()).all(|j| points.iter().any(|p| p.coords()[j] > 0)))
}

impl DualComplex {
    /// Builds duals for an arbitrary cell list; repeated types are kept so
    /// that the uniqueness check can see them.
    pub fn from_cells(n: usize, d: usize, cells: &[NdType]) -> Result<Self> {
        let mut out = Vec::with_capacity(cells.len());
        for c in cells {
            if c.n() != n || c.d() != d {
                return Err(Error::ParameterMismatch {
                    n1: n,
                    d1: d,
                    n2: c.n(),
                    d2: c.d(),
                });
            }
            out.push(DualCell {
                cell: c.clone(),
                dim: d - 1 - c.minkowski_dim(),
                bounded: off_boundary(c)?,
            });
        }
        let mut incidence = BTreeSet::new();
        for (x, a) in cells.iter().enumerate() {
            for (y, b) in cells.iter().enumerate() {
                if is_proper_face(b, a) {
                    incidence.insert((x, y));
                }
            }
        }
        Ok(Self {
            n,
            d,
            cells: out,
            incidence,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cells(&self) -> &[DualCell] {
        &self.cells
    }

    pub fn incidence(&self) -> &BTreeSet<(usize, usize)> {
        &self.incidence
    }

    /// Dual cells of dimension `k`.
    pub fn with_dim(&self, k: usize) -> impl Iterator<Item = &DualCell> {
        self.cells.iter().filter(move |c| c.dim == k)
    }
}

pub fn dual_complex(s: &MixedSubdivision) -> Result<DualComplex> {
    let report = s.validate(false)?;
    if !report.passed() {
        return Err(Error::InvalidSubdivision(
            serde_json::to_string(&report.evidence()).unwrap_or_default(),
        ));
    }
    let cells: Vec<NdType> = s.cells().iter().cloned().collect();
    DualComplex::from_cells(s.n(), s.d(), &cells)
}

/// The duals of the cells whose `i`-th entry has at least two letters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PseudohyperplaneSlice {
    /// 1-based coordinate.
    pub i: usize,
    pub cells: Vec<NdType>,
    pub dual_dims: Vec<usize>,
    pub unbounded: Vec<bool>,
}

impl PseudohyperplaneSlice {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

pub fn pseudohyperplane(s: &MixedSubdivision, i: usize) -> Result<PseudohyperplaneSlice> {
    if i == 0 || i > s.n() {
        return Err(Error::InvalidParameters(format!(
            "coordinate {i} outside 1..={}",
            s.n()
        )));
    }
    let mut slice = PseudohyperplaneSlice {
        i,
        cells: Vec::new(),
        dual_dims: Vec::new(),
        unbounded: Vec::new(),
    };
    for c in s
        .cells()
        .iter()
        .filter(|c| c.entry(i - 1).count_ones() >= 2)
    {
        slice.cells.push(c.clone());
        slice.dual_dims.push(c.arrangement_dim());
        slice.unbounded.push(!c.is_bounded());
    }
    Ok(slice)
}

/// Shape of the dual 1-skeleton of one slice in the plane case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub i: usize,
    pub vertices: usize,
    pub bounded_edges: usize,
    pub unbounded_edges: usize,
    pub connected: bool,
    pub acyclic: bool,
    pub fine: bool,
}

impl SliceReport {
    /// A tree, with exactly three rays when the subdivision is fine.
    pub fn passed(&self) -> bool {
        self.connected && self.acyclic && (!self.fine || self.unbounded_edges == 3)
    }
}

/// Checks that slice `i` of a subdivision of `nΔ²` is a tree whose rays
/// number three when the subdivision is fine.
pub fn check_slice_structure(s: &MixedSubdivision, i: usize) -> Result<SliceReport> {
    if s.d() != 3 {
        return Err(Error::UnsupportedDimension(s.d()));
    }
    let slice = pseudohyperplane(s, i)?;
    let vertices: Vec<&NdType> = slice
        .cells
        .iter()
        .zip(&slice.dual_dims)
        .filter(|(_, &k)| k == 0)
        .map(|(c, _)| c)
        .collect();
    let index: BTreeMap<&NdType, usize> =
        vertices.iter().enumerate().map(|(x, &c)| (c, x)).collect();
    let mut uf = UnionFind::new(vertices.len());
    let (mut bounded_edges, mut unbounded_edges) = (0, 0);
    let mut acyclic = true;
    for (e, _) in slice
        .cells
        .iter()
        .zip(&slice.dual_dims)
        .filter(|(_, &k)| k == 1)
    {
        let ends: Vec<usize> = vertices
            .iter()
            .filter(|v| is_proper_face(e, v))
            .map(|v| index[v])
            .collect();
        match ends.as_slice() {
            [_] if !e.is_bounded() => unbounded_edges += 1,
            [a, b] if e.is_bounded() => {
                bounded_edges += 1;
                if !uf.union(*a, *b) {
                    acyclic = false;
                }
            }
            // an edge with the wrong number of ends cannot be part of a tree
            _ => acyclic = false,
        }
    }
    let components: BTreeSet<usize> = (0..vertices.len()).map(|x| uf.find(x)).collect();
    Ok(SliceReport {
        i,
        vertices: vertices.len(),
        bounded_edges,
        unbounded_edges,
        connected: components.len() == 1,
        acyclic,
        fine: is_fine(s),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum ArrangementEvidence {
    DuplicateType {
        cell: NdType,
    },
    Surrounding {
        a: NdType,
        partition: OrderedPartition,
        refinement: NdType,
    },
    Comparability {
        a: NdType,
        b: NdType,
        cycle: CycleWitness,
    },
    Boundedness {
        cell: NdType,
        type_bounded: bool,
        dual_bounded: bool,
    },
}

pub type ArrangementVerdict = Verdict<ArrangementEvidence>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementReport {
    pub uniqueness: ArrangementVerdict,
    pub surrounding: ArrangementVerdict,
    pub comparability: ArrangementVerdict,
    pub boundedness: ArrangementVerdict,
}

impl ArrangementReport {
    fn verdicts(&self) -> [&ArrangementVerdict; 4] {
        [
            &self.uniqueness,
            &self.surrounding,
            &self.comparability,
            &self.boundedness,
        ]
    }

    pub fn passed(&self) -> bool {
        self.verdicts().iter().all(|v| v.passed())
    }

    pub fn evidence(&self) -> Vec<&ArrangementEvidence> {
        self.verdicts()
            .iter()
            .filter_map(|v| v.evidence())
            .collect()
    }
}

impl Serialize for ArrangementReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ArrangementReport", 5)?;
        st.serialize_field("uniqueness", &self.uniqueness)?;
        st.serialize_field("surrounding", &self.surrounding)?;
        st.serialize_field("comparability", &self.comparability)?;
        st.serialize_field("boundedness", &self.boundedness)?;
        st.serialize_field("evidence", &self.evidence())?;
        st.end()
    }
}

/// Combinatorial surrogate for the arrangement axioms: every type labels one
/// dual cell, the type set is closed under refinement and pairwise
/// comparable, and bounded dual cells are exactly those of bounded type.
pub fn check_arrangement_axioms(dual: &DualComplex) -> Result<ArrangementReport> {
    let mut seen = BTreeSet::new();
    let uniqueness = match dual.cells.iter().find(|c| !seen.insert(&c.cell)) {
        Some(c) => Verdict::Fail(ArrangementEvidence::DuplicateType {
            cell: c.cell.clone(),
        }),
        None => Verdict::Pass,
    };
    let types = TypeCollection::new(dual.n, dual.d, dual.cells.iter().map(|c| c.cell.clone()))?;
    let surrounding = match check_surrounding(&types)? {
        Verdict::Pass => Verdict::Pass,
        Verdict::Fail(Evidence::Surrounding {
            a,
            partition,
            refinement,
        }) => Verdict::Fail(ArrangementEvidence::Surrounding {
            a,
            partition,
            refinement,
        }),
        Verdict::Fail(e) => unreachable!("surrounding check reported {e:?}"),
    };
    let comparability = match check_comparability(&types) {
        Verdict::Pass => Verdict::Pass,
        Verdict::Fail(Evidence::Comparability { a, b, cycle }) => {
            Verdict::Fail(ArrangementEvidence::Comparability { a, b, cycle })
        }
        Verdict::Fail(e) => unreachable!("comparability check reported {e:?}"),
    };
    let boundedness = match dual.cells.iter().find(|c| c.bounded != c.cell.is_bounded()) {
        Some(c) => Verdict::Fail(ArrangementEvidence::Boundedness {
            cell: c.cell.clone(),
            type_bounded: c.cell.is_bounded(),
            dual_bounded: c.bounded,
        }),
        None => Verdict::Pass,
    };
    Ok(ArrangementReport {
        uniqueness,
        surrounding,
        comparability,
        boundedness,
    })
}

/// Cells of slice `i` grouped by their image under deleting coordinate `j`
/// (both 1-based). Every image is a cell of slice `i` or `i - 1` of the
/// deletion, depending on whether `j` precedes `i`.
pub fn slice_deletion_fibers(
    s: &MixedSubdivision,
    i: usize,
    j: usize,
) -> Result<BTreeMap<NdType, Vec<NdType>>> {
    if i == j || j == 0 || j > s.n() || s.n() < 2 {
        return Err(Error::InvalidParameters(format!(
            "cannot delete {j} from slice {i}"
        )));
    }
    let slice = pseudohyperplane(s, i)?;
    let mut fibers: BTreeMap<NdType, Vec<NdType>> = BTreeMap::new();
    for c in slice.cells {
        fibers
            .entry(c.delete_coord(j - 1).expect("n >= 2"))
            .or_default()
            .push(c);
    }
    Ok(fibers)
}

/// Connected components of the dual graph on maximal cells, as a sanity
/// view of the dual 0-skeleton.
pub fn dual_vertex_components(dual: &DualComplex) -> usize {
    let verts: Vec<usize> = (0..dual.cells.len())
        .filter(|&x| dual.cells[x].dim == 0)
        .collect();
    let pos: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(a, &x)| (x, a)).collect();
    let mut adj = vec![Vec::new(); verts.len()];
    for y in (0..dual.cells.len()).filter(|&y| dual.cells[y].dim == 1) {
        let ends: Vec<usize> = dual
            .incidence
            .iter()
            .filter(|&&(a, b)| b == y && pos.contains_key(&a))
            .map(|&(a, _)| pos[&a])
            .collect();
        for w in ends.windows(2) {
            adj[w[0]].push(w[1]);
            adj[w[1]].push(w[0]);
        }
    }
    let mut seen = vec![false; verts.len()];
    let mut components = 0;
    for s in 0..verts.len() {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    components
}
