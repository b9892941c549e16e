//! Exact feasibility of mixed strict/weak linear systems by Fourier–Motzkin
//! elimination over the rationals, with back-substitution for a witness.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `< 0`
    Less,
    /// `<= 0`
    LessEq,
    /// `= 0`
    Eq,
}

/// `Σ coeffs[k]·x_k + constant  (rel)  0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
    pub rel: Relation,
}

impl Constraint {
    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Truth value of a constraint with no variables.
    fn constant_holds(&self) -> bool {
        match self.rel {
            Relation::Less => self.constant.is_negative(),
            Relation::LessEq => !self.constant.is_positive(),
            Relation::Eq => self.constant.is_zero(),
        }
    }

    pub fn holds_at(&self, x: &[BigRational]) -> bool {
        let v = self
            .coeffs
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (c, xi)| acc + c * xi);
        Constraint {
            coeffs: Vec::new(),
            constant: v,
            rel: self.rel,
        }
        .constant_holds()
    }

    /// Positive rescaling so the first nonzero coefficient is ±1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            if !lead.is_one() {
                for c in &mut self.coeffs {
                    *c = &*c / &lead;
                }
                self.constant = &self.constant / &lead;
            }
        }
        self
    }
}

/// Affine constraints over `vars` rational unknowns.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    vars: usize,
    constraints: Vec<Constraint>,
}

struct Substitution {
    var: usize,
    /// `x_var = Σ coeffs·x + constant`
    coeffs: Vec<BigRational>,
    constant: BigRational,
}

struct Elimination {
    var: usize,
    bounds: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            constraints: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn push(&mut self, coeffs: Vec<BigRational>, constant: BigRational, rel: Relation) {
        assert_eq!(coeffs.len(), self.vars, "coefficient count");
        self.constraints.push(Constraint {
            coeffs,
            constant,
            rel,
        });
    }

    pub fn is_satisfied_by(&self, x: &[BigRational]) -> bool {
        self.constraints.iter().all(|c| c.holds_at(x))
    }

    pub fn is_feasible(&self) -> bool {
        self.solve().is_some()
    }

    /// A satisfying point, or `None` if the system is infeasible.
    pub fn solve(&self) -> Option<Vec<BigRational>> {
        let mut rows = self.constraints.clone();
        let subs = eliminate_equalities(&mut rows)?;
        let mut rows = reduce(rows)?;

        let mut stages = Vec::new();
        while let Some(var) = pick_variable(&rows, self.vars) {
            let (bounds, rest): (Vec<_>, Vec<_>) =
                rows.into_iter().partition(|c| !c.coeffs[var].is_zero());
            let mut next = rest;
            let (pos, neg): (Vec<&Constraint>, Vec<&Constraint>) =
                bounds.iter().partition(|c| c.coeffs[var].is_positive());
            for p in &pos {
                for q in &neg {
                    next.push(combine(p, q, var));
                }
            }
            stages.push(Elimination { var, bounds });
            rows = reduce(next)?;
        }

        let mut x = vec![BigRational::zero(); self.vars];
        for stage in stages.iter().rev() {
            x[stage.var] = pick_value(stage, &x);
        }
        for s in subs.iter().rev() {
            x[s.var] = s
                .coeffs
                .iter()
                .zip(&x)
                .fold(s.constant.clone(), |acc, (c, xi)| acc + c * xi);
        }
        debug_assert!(
            self.is_satisfied_by(&x),
            "back-substitution produced a non-solution"
        );
        Some(x)
    }
}

/// Solves each equality for one of its variables and substitutes it away.
fn eliminate_equalities(rows: &mut Vec<Constraint>) -> Option<Vec<Substitution>> {
    let mut subs = Vec::new();
    while let Some(idx) = rows.iter().position(|c| c.rel == Relation::Eq) {
        let eq = rows.swap_remove(idx);
        let Some(var) = eq.coeffs.iter().position(|c| !c.is_zero()) else {
            if eq.constant.is_zero() {
                continue;
            }
            return None;
        };
        let pivot = eq.coeffs[var].clone();
        let mut coeffs: Vec<BigRational> = eq.coeffs.iter().map(|c| -c / &pivot).collect();
        coeffs[var] = BigRational::zero();
        let constant = -&eq.constant / &pivot;
        for row in rows.iter_mut() {
            let f = std::mem::take(&mut row.coeffs[var]);
            if f.is_zero() {
                continue;
            }
            for (rc, sc) in row.coeffs.iter_mut().zip(&coeffs) {
                *rc += &f * sc;
            }
            row.constant += &f * &constant;
        }
        subs.push(Substitution {
            var,
            coeffs,
            constant,
        });
    }
    Some(subs)
}

/// Drops trivially true rows, fails on trivially false ones, and keeps only
/// the tightest of rows whose coefficient vectors are proportional.
fn reduce(rows: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut best: HashMap<Vec<BigRational>, (BigRational, Relation)> = HashMap::new();
    let mut order = Vec::new();
    for row in rows {
        if row.is_trivial() {
            if !row.constant_holds() {
                return None;
            }
            continue;
        }
        let row = row.normalized();
        match best.get_mut(&row.coeffs) {
            Some((k, rel)) => {
                // c·x + k < 0 is tighter for larger k; strict wins ties
                if row.constant > *k || (row.constant == *k && row.rel == Relation::Less) {
                    *k = row.constant;
                    *rel = row.rel;
                }
            }
            None => {
                order.push(row.coeffs.clone());
                best.insert(row.coeffs, (row.constant, row.rel));
            }
        }
    }
    Some(
        order
            .into_iter()
            .map(|coeffs| {
                let (constant, rel) = best.remove(&coeffs).unwrap();
                Constraint {
                    coeffs,
                    constant,
                    rel,
                }
            })
            .collect(),
    )
}

/// Variable with the fewest generated rows (`pos · neg`), lowest index first.
fn pick_variable(rows: &[Constraint], vars: usize) -> Option<usize> {
    (0..vars)
        .filter_map(|v| {
            let pos = rows.iter().filter(|c| c.coeffs[v].is_positive()).count();
            let neg = rows.iter().filter(|c| c.coeffs[v].is_negative()).count();
            (pos + neg > 0).then_some((pos * neg, v))
        })
        .min()
        .map(|(_, v)| v)
}

fn combine(p: &Constraint, q: &Constraint, var: usize) -> Constraint {
    let a = p.coeffs[var].clone();
    let b = -q.coeffs[var].clone();
    let coeffs = p
        .coeffs
        .iter()
        .zip(&q.coeffs)
        .map(|(pc, qc)| &b * pc + &a * qc)
        .collect();
    let constant = &b * &p.constant + &a * &q.constant;
    let rel = if p.rel == Relation::Less || q.rel == Relation::Less {
        Relation::Less
    } else {
        Relation::LessEq
    };
    Constraint {
        coeffs,
        constant,
        rel,
    }
}

fn pick_value(stage: &Elimination, x: &[BigRational]) -> BigRational {
    let v = stage.var;
    let mut lo: Option<(BigRational, bool)> = None;
    let mut hi: Option<(BigRational, bool)> = None;
    for c in &stage.bounds {
        let rest = c
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != v)
            .fold(c.constant.clone(), |acc, (k, ck)| acc + ck * &x[k]);
        let bound = -rest / &c.coeffs[v];
        let strict = c.rel == Relation::Less;
        if c.coeffs[v].is_positive() {
            let tighter = match &hi {
                None => true,
                Some((h, s)) => bound < *h || (bound == *h && strict && !s),
            };
            if tighter {
                hi = Some((bound, strict));
            }
        } else {
            let tighter = match &lo {
                None => true,
                Some((l, s)) => bound > *l || (bound == *l && strict && !s),
            };
            if tighter {
                lo = Some((bound, strict));
            }
        }
    }
    let one = BigRational::one();
    match (lo, hi) {
        (Some((l, _)), Some((h, _))) => {
            if l == h {
                l
            } else {
                (l + h) / BigRational::from_integer(2.into())
            }
        }
        (Some((l, _)), None) => l + one,
        (None, Some((h, _))) => h - one,
        (None, None) => BigRational::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn c(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| r(x, 1)).collect()
    }

    #[test]
    fn strict_interval() {
        // 0 < x < 1/2
        let mut s = LinearSystem::new(1);
        s.push(c(&[-1]), r(0, 1), Relation::Less);
        s.push(c(&[1]), r(-1, 2), Relation::Less);
        let x = s.solve().unwrap();
        assert_eq!(x, vec![r(1, 4)]);
    }

    #[test]
    fn strict_versus_weak_on_a_point() {
        // x <= 0 and x >= 0 feasible; strict versions are not
        let mut weak = LinearSystem::new(1);
        weak.push(c(&[1]), r(0, 1), Relation::LessEq);
        weak.push(c(&[-1]), r(0, 1), Relation::LessEq);
        assert_eq!(weak.solve().unwrap(), vec![r(0, 1)]);
        let mut strict = LinearSystem::new(1);
        strict.push(c(&[1]), r(0, 1), Relation::Less);
        strict.push(c(&[-1]), r(0, 1), Relation::LessEq);
        assert!(!strict.is_feasible());
    }

    #[test]
    fn equalities_are_substituted() {
        // x - y = 1, y + z = 0, x + z < 2, z > 3  → x = y + 1 = 1 - z, so 1 - z + z = 1 < 2 ok
        let mut s = LinearSystem::new(3);
        s.push(c(&[1, -1, 0]), r(-1, 1), Relation::Eq);
        s.push(c(&[0, 1, 1]), r(0, 1), Relation::Eq);
        s.push(c(&[1, 0, 1]), r(-2, 1), Relation::Less);
        s.push(c(&[0, 0, -1]), r(3, 1), Relation::Less);
        let x = s.solve().unwrap();
        assert!(s.is_satisfied_by(&x));
        // inconsistent equalities
        let mut e = LinearSystem::new(1);
        e.push(c(&[1]), r(-1, 1), Relation::Eq);
        e.push(c(&[2]), r(-3, 1), Relation::Eq);
        assert!(!e.is_feasible());
    }

    #[test]
    fn strictness_propagates_through_chains() {
        // x < y, y <= z, z <= x: infeasible; all weak: feasible
        let mut s = LinearSystem::new(3);
        s.push(c(&[1, -1, 0]), r(0, 1), Relation::Less);
        s.push(c(&[0, 1, -1]), r(0, 1), Relation::LessEq);
        s.push(c(&[-1, 0, 1]), r(0, 1), Relation::LessEq);
        assert!(!s.is_feasible());
        let mut w = LinearSystem::new(3);
        w.push(c(&[1, -1, 0]), r(0, 1), Relation::LessEq);
        w.push(c(&[0, 1, -1]), r(0, 1), Relation::LessEq);
        w.push(c(&[-1, 0, 1]), r(0, 1), Relation::LessEq);
        assert!(w.is_feasible());
    }

    #[test]
    fn proportional_rows_keep_the_tightest() {
        let rows = vec![
            Constraint {
                coeffs: c(&[2, -2]),
                constant: r(-4, 1),
                rel: Relation::LessEq,
            },
            Constraint {
                coeffs: c(&[1, -1]),
                constant: r(-1, 1),
                rel: Relation::LessEq,
            },
            Constraint {
                coeffs: c(&[1, -1]),
                constant: r(-1, 1),
                rel: Relation::Less,
            },
        ];
        let out = reduce(rows).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].constant, r(-1, 1));
        assert_eq!(out[0].rel, Relation::Less);
    }

    #[test]
    fn unconstrained_system_is_feasible() {
        let s = LinearSystem::new(2);
        assert_eq!(s.solve().unwrap(), vec![r(0, 1), r(0, 1)]);
    }
}
