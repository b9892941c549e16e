//! Recovering a subdivision from its vertex topes.
//!
//! A cell is exactly a union of topes whose total refinements are all topes
//! and which contains no tope other than its own refinements.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::comparability::{refinement_witness, RefinementOutcome};
use crate::error::{Error, Result};
use crate::realize::MAX_CANDIDATES;
use crate::types::{for_each_type_within, LetterSet, NdType};

use super::MixedSubdivision;

/// Why a candidate type is or is not a cell for a given tope set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiceReport {
    /// The componentwise union of the topes inside the type equals the type.
    pub covered: bool,
    /// Total refinements that are not topes.
    pub missing_refinements: Vec<NdType>,
    /// Topes inside the type that are not among its refinements.
    pub interior_topes: Vec<NdType>,
}

impl NiceReport {
    pub fn is_nice(&self) -> bool {
        self.covered && self.missing_refinements.is_empty() && self.interior_topes.is_empty()
    }
}

fn check_topes(topes: &BTreeSet<NdType>, n: usize, d: usize) -> Result<()> {
    for t in topes {
        if t.n() != n || t.d() != d {
            return Err(Error::ParameterMismatch {
                n1: n,
                d1: d,
                n2: t.n(),
                d2: t.d(),
            });
        }
        if !t.is_total() {
            return Err(Error::NotTotal(t.to_string()));
        }
    }
    Ok(())
}

pub fn nice_report(a: &NdType, topes: &BTreeSet<NdType>) -> Result<NiceReport> {
    check_topes(topes, a.n(), a.d())?;
    let mut union = vec![0 as LetterSet; a.n()];
    let mut interior_topes = Vec::new();
    for t in topes.iter().filter(|t| t.leq(a)) {
        for (u, &e) in union.iter_mut().zip(t.entries()) {
            *u |= e;
        }
        if matches!(refinement_witness(t, a)?, RefinementOutcome::Cycle(_)) {
            interior_topes.push(t.clone());
        }
    }
    let missing_refinements = a
        .total_refinements()?
        .into_iter()
        .filter(|r| !topes.contains(r))
        .collect();
    Ok(NiceReport {
        covered: union == a.entries(),
        missing_refinements,
        interior_topes,
    })
}

pub fn is_nice_type(a: &NdType, topes: &BTreeSet<NdType>) -> Result<bool> {
    Ok(nice_report(a, topes)?.is_nice())
}

/// Every nice type for `topes`, scanned over the types bounded by the
/// per-position union of the topes.
pub fn reconstruct_from_topes(
    topes: &BTreeSet<NdType>,
    n: usize,
    d: usize,
) -> Result<MixedSubdivision> {
    if topes.is_empty() {
        return Err(Error::EmptyInput("no topes given".into()));
    }
    check_topes(topes, n, d)?;
    let mut bounds = vec![0 as LetterSet; n];
    for t in topes {
        for (b, &e) in bounds.iter_mut().zip(t.entries()) {
            *b |= e;
        }
    }
    let count = bounds.iter().fold(1u128, |acc, b| {
        acc.saturating_mul((1u128 << b.count_ones()) - 1)
    });
    if count > MAX_CANDIDATES {
        return Err(Error::LimitExceeded(format!(
            "{count} candidate types (cap {MAX_CANDIDATES})"
        )));
    }
    let mut cells = BTreeSet::new();
    let mut failure = None;
    for_each_type_within(d, &bounds, |a| {
        if failure.is_some() {
            return;
        }
        match is_nice_type(a, topes) {
            Ok(true) => {
                cells.insert(a.clone());
            }
            Ok(false) => {}
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    MixedSubdivision::from_cells(n, d, cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str, d: usize) -> NdType {
        NdType::parse(s, d).unwrap()
    }

    fn set(d: usize, xs: &[&str]) -> BTreeSet<NdType> {
        xs.iter().map(|x| t(x, d)).collect()
    }

    #[test]
    fn nice_segments() {
        assert!(is_nice_type(&t("(12,12)", 2), &set(2, &["(1,1)", "(2,2)"])).unwrap());
        let r = nice_report(&t("(12,12)", 2), &set(2, &["(1,1)", "(2,1)", "(2,2)"])).unwrap();
        assert!(!r.is_nice());
        assert_eq!(r.interior_topes, vec![t("(2,1)", 2)]);
    }

    #[test]
    fn hexagon_with_interior_tope() {
        let a = t("(12,23,13)", 3);
        let mut topes = a.total_refinements().unwrap();
        assert!(is_nice_type(&a, &topes).unwrap());
        topes.insert(t("(1,2,3)", 3));
        let r = nice_report(&a, &topes).unwrap();
        assert!(r.covered && r.missing_refinements.is_empty());
        assert_eq!(r.interior_topes, vec![t("(1,2,3)", 3)]);
    }

    #[test]
    fn reconstruction() {
        let s = reconstruct_from_topes(&set(2, &["(1,1)", "(2,2)"]), 2, 2).unwrap();
        assert_eq!(*s.cells(), set(2, &["(1,1)", "(2,2)", "(12,12)"]));
        let s = reconstruct_from_topes(&set(2, &["(1,1)", "(2,1)", "(2,2)"]), 2, 2).unwrap();
        assert_eq!(
            *s.cells(),
            set(2, &["(1,1)", "(2,1)", "(2,2)", "(12,1)", "(2,12)"])
        );
    }

    #[test]
    fn reconstruction_errors() {
        assert!(matches!(
            reconstruct_from_topes(&BTreeSet::new(), 2, 2),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(
            reconstruct_from_topes(&set(2, &["(12,1)"]), 2, 2),
            Err(Error::NotTotal(_))
        ));
    }
}
