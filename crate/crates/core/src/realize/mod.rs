//! Arrangements of min-plus tropical hyperplanes given by exact rational
//! weight matrices.
//!
//! Row `i` of the matrix holds the coefficients `a_i1..a_id` of the tropical
//! linear form `min_j (a_ij + x_j)`; a point `x` has type
//! `A_i = argmin_j (a_ij + x_j)`. Tropical projective space is modelled by
//! pinning `x_d = 0`, so feasibility questions live in `d - 1` unknowns.

pub mod fm;

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::mixsd::{is_fine, tom_to_mixsd};
use crate::tom::TypeCollection;
use crate::types::{letters, singleton, subset_cmp, type_count, LetterSet, NdType, MAX_LETTERS};

pub use fm::{Constraint, LinearSystem, Relation};

/// Caps for [`realizable_tom`].
pub const MAX_CELLS_PRODUCT: usize = 30;
pub const MAX_CANDIDATES: u128 = 10_000_000;

/// `n × d` matrix of exact rational tropical coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    d: usize,
    rows: Vec<Vec<BigRational>>,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParameters(
                "weight matrix needs n >= 1".into(),
            ));
        }
        let d = rows[0].len();
        if d == 0 || d > MAX_LETTERS {
            return Err(Error::InvalidParameters(format!(
                "weight matrix needs 1 <= d <= {MAX_LETTERS}"
            )));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        Ok(Self { d, rows })
    }

    pub fn zeros(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![vec![BigRational::zero(); d]; n])
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| BigRational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i][j]
    }

    /// The point where all sectors of hyperplane `i` (0-based) meet.
    pub fn apex(&self, i: usize) -> ProjectivePoint {
        ProjectivePoint::new(self.rows[i].iter().map(|a| -a).collect()).expect("d >= 1")
    }
}

impl fmt::Display for WeightMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let v: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", v.join(" "))
            })
            .collect();
        write!(f, "{}", rows.join(" "))
    }
}

/// A point of tropical projective space, normalized so the last coordinate is 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<BigRational>,
}

impl ProjectivePoint {
    pub fn new(mut coords: Vec<BigRational>) -> Result<Self> {
        let Some(last) = coords.last().cloned() else {
            return Err(Error::InvalidParameters("point needs d >= 1".into()));
        };
        for c in &mut coords {
            *c -= &last;
        }
        Ok(Self { coords })
    }

    /// From the `d - 1` free coordinates (the last one is 0).
    pub fn from_affine(mut free: Vec<BigRational>) -> Self {
        free.push(BigRational::zero());
        Self { coords: free }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn d(&self) -> usize {
        self.coords.len()
    }
}

/// `A_i = argmin_j (a_ij + x_j)`.
pub fn point_type(w: &WeightMatrix, x: &ProjectivePoint) -> Result<NdType> {
    if x.d() != w.d {
        return Err(Error::DimensionMismatch {
            expected: w.d,
            found: x.d(),
        });
    }
    let entries = w
        .rows
        .iter()
        .map(|row| {
            let values: Vec<BigRational> =
                row.iter().zip(&x.coords).map(|(a, xj)| a + xj).collect();
            let min = values.iter().min().expect("d >= 1");
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| *v == min)
                .fold(0 as LetterSet, |acc, (j, _)| acc | singleton(j))
        })
        .collect();
    NdType::from_masks(w.d, entries)
}

/// The system "x has type `a`" in the unknowns `x_1..x_{d-1}`.
pub fn type_system(w: &WeightMatrix, a: &NdType, strict: bool) -> Result<LinearSystem> {
    if a.n() != w.n() || a.d() != w.d {
        return Err(Error::ParameterMismatch {
            n1: w.n(),
            d1: w.d,
            n2: a.n(),
            d2: a.d(),
        });
    }
    let vars = w.d - 1;
    let mut sys = LinearSystem::new(vars);
    // (a_ij + x_j) - (a_ik + x_k) as coefficients plus constant
    let diff = |row: &[BigRational], j: usize, k: usize| {
        let mut coeffs = vec![BigRational::zero(); vars];
        if j < vars {
            coeffs[j] += BigRational::from_integer(1.into());
        }
        if k < vars {
            coeffs[k] -= BigRational::from_integer(1.into());
        }
        (coeffs, &row[j] - &row[k])
    };
    let ineq = if strict {
        Relation::Less
    } else {
        Relation::LessEq
    };
    for (i, row) in w.rows.iter().enumerate() {
        let ai = a.entry(i);
        let r = ai.trailing_zeros() as usize;
        for j in letters(ai).skip(1) {
            let (c, k) = diff(row, j, r);
            sys.push(c, k, Relation::Eq);
        }
        for l in letters(!ai & crate::types::full_set(w.d)) {
            let (c, k) = diff(row, r, l);
            sys.push(c, k, ineq);
        }
    }
    Ok(sys)
}

/// Whether some point has exactly type `a` (`strict`), or lies in the closure
/// of that region (`!strict`, all inequalities weak).
pub fn type_feasible(w: &WeightMatrix, a: &NdType, strict: bool) -> Result<bool> {
    Ok(type_system(w, a, strict)?.is_feasible())
}

/// A point of type exactly `a`, if one exists.
pub fn type_witness(w: &WeightMatrix, a: &NdType) -> Result<Option<ProjectivePoint>> {
    Ok(type_system(w, a, true)?
        .solve()
        .map(ProjectivePoint::from_affine))
}

fn check_caps(w: &WeightMatrix) -> Result<()> {
    let (n, d) = (w.n(), w.d);
    if n * d > MAX_CELLS_PRODUCT || type_count(n, d) > MAX_CANDIDATES {
        return Err(Error::LimitExceeded(format!(
            "enumeration of (2^{d}-1)^{n} candidate types (caps: n*d <= {MAX_CELLS_PRODUCT}, \
             count <= {MAX_CANDIDATES})"
        )));
    }
    Ok(())
}

/// Visits every type whose entry sizes sum to `total`, in canonical order
/// within the level.
fn for_each_type_of_size(
    n: usize,
    d: usize,
    total: usize,
    by_size: &[Vec<LetterSet>],
    visit: &mut dyn FnMut(&[LetterSet]),
) {
    fn rec(
        pos: usize,
        remaining: usize,
        n: usize,
        d: usize,
        by_size: &[Vec<LetterSet>],
        cur: &mut Vec<LetterSet>,
        visit: &mut dyn FnMut(&[LetterSet]),
    ) {
        if pos == n {
            if remaining == 0 {
                visit(cur);
            }
            return;
        }
        let left = n - pos - 1;
        for size in 1..=d {
            if size > remaining || remaining - size < left || remaining - size > left * d {
                continue;
            }
            for &s in &by_size[size] {
                cur.push(s);
                rec(pos + 1, remaining - size, n, d, by_size, cur, visit);
                cur.pop();
            }
        }
    }
    rec(0, total, n, d, by_size, &mut Vec::with_capacity(n), visit);
}

/// All types of the arrangement. Candidates are scanned by increasing total
/// size; supersets of a type whose closed region is empty are skipped, since
/// their closed regions are empty too.
pub fn realizable_tom(w: &WeightMatrix) -> Result<TypeCollection> {
    check_caps(w)?;
    let (n, d) = (w.n(), w.d);
    let mut by_size: Vec<Vec<LetterSet>> = vec![Vec::new(); d + 1];
    for s in 1..=crate::types::full_set(d) {
        by_size[s.count_ones() as usize].push(s);
    }
    for v in &mut by_size {
        v.sort_by(|a, b| subset_cmp(*a, *b));
    }

    let mut infeasible: Vec<Vec<LetterSet>> = Vec::new();
    let mut found = Vec::new();
    let mut failure = None;
    for total in n..=n * d {
        for_each_type_of_size(n, d, total, &by_size, &mut |entries| {
            if failure.is_some() {
                return;
            }
            let pruned = infeasible
                .iter()
                .any(|inf| inf.iter().zip(entries).all(|(i, e)| i & !e == 0));
            if pruned {
                return;
            }
            let a = NdType::from_masks(d, entries.to_vec()).expect("nonempty entries");
            let result = (|| -> Result<()> {
                if type_feasible(w, &a, true)? {
                    found.push(a.clone());
                } else if !type_feasible(w, &a, false)? {
                    infeasible.push(entries.to_vec());
                }
                Ok(())
            })();
            if let Err(e) = result {
                failure = Some(e);
            }
        });
    }
    if let Some(e) = failure {
        return Err(e);
    }
    TypeCollection::new(n, d, found)
}

/// Whether the arrangement is in general position, i.e. its mixed
/// subdivision is fine.
pub fn is_generic(w: &WeightMatrix) -> Result<bool> {
    let tom = realizable_tom(w)?;
    Ok(is_fine(&tom_to_mixsd(&tom)?))
}
