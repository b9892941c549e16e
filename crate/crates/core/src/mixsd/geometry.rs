//! Lattice geometry of Minkowski cells in `nΔ^{d-1}`: the standard embedding
//! of topes, vertex sets, exact pulling triangulations and normalized volumes.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::types::NdType;

/// Combinations scanned per facet search before giving up.
const MAX_FACET_CANDIDATES: u128 = 2_000_000;

/// A point of `Z^d_{>=0}` with coordinate sum `n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn squared_distance(&self, other: &LatticePoint) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// `x_j` counts the positions whose singleton is `{j}`.
pub fn embed_tope(v: &NdType) -> Result<LatticePoint> {
    if !v.is_total() {
        return Err(Error::NotTotal(v.to_string()));
    }
    let mut x = vec![0i64; v.d()];
    for &e in v.entries() {
        x[e.trailing_zeros() as usize] += 1;
    }
    Ok(LatticePoint(x))
}

/// Embedded total refinements of `a`, i.e. the vertices of its Minkowski cell.
pub fn cell_vertex_points(a: &NdType) -> Result<BTreeSet<LatticePoint>> {
    a.total_refinements()?.iter().map(embed_tope).collect()
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let k = m.len();
    if k == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..k {
            for col in c + 1..k {
                m[r][col] = (m[r][col] * m[c][c] - m[r][c] * m[c][col]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[c][c];
    }
    sign * m[k - 1][k - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rank of integer row vectors and the pivot columns found by elimination.
pub fn rank_and_pivots(rows: &[Vec<i128>]) -> (usize, Vec<usize>) {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i == r || m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[r][c], m[i][c]);
            let pivot_row = m[r].clone();
            for (x, &y) in m[i].iter_mut().zip(&pivot_row) {
                *x = *x * a - y * b;
            }
            let g = m[i].iter().fold(0, |g, &x| gcd(g, x));
            if g > 1 {
                for x in &mut m[i] {
                    *x /= g;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (r, pivots)
}

/// Affine dimension of a point set (`-1` style empty sets report 0).
pub fn affine_rank(points: &[Vec<i64>]) -> usize {
    let Some(base) = points.first() else {
        return 0;
    };
    let diffs: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    rank_and_pivots(&diffs).0
}

fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128)
}

fn for_each_combination(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Pulling triangulation of `conv(points[subset])`: cone from the least point
/// over the triangulated facets that avoid it. Returns simplices as index
/// lists into `points`, each with `dim + 1` entries.
pub fn pulling_triangulation(points: &[Vec<i64>], subset: &[usize]) -> Result<Vec<Vec<usize>>> {
    let mut subset = subset.to_vec();
    subset.sort_by(|&a, &b| points[a].cmp(&points[b]));
    subset.dedup_by(|a, b| points[*a] == points[*b]);
    let Some(&base) = subset.first() else {
        return Ok(Vec::new());
    };
    let diffs: Vec<Vec<i128>> = subset[1..]
        .iter()
        .map(|&p| {
            points[p]
                .iter()
                .zip(&points[base])
                .map(|(a, b)| (a - b) as i128)
                .collect()
        })
        .collect();
    let (k, cols) = rank_and_pivots(&diffs);
    if k == 0 {
        return Ok(vec![vec![base]]);
    }
    if binomial(subset.len(), k) > MAX_FACET_CANDIDATES {
        return Err(Error::LimitExceeded(format!(
            "facet search over {} points in dimension {k}",
            subset.len()
        )));
    }
    // coordinates on which the affine hull projects injectively
    let proj: Vec<Vec<i128>> = subset
        .iter()
        .map(|&p| {
            cols.iter()
                .map(|&c| (points[p][c] - points[base][c]) as i128)
                .collect()
        })
        .collect();

    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for_each_combination(subset.len(), k, |comb| {
        let origin = &proj[comb[0]];
        let spans: Vec<Vec<i128>> = comb[1..]
            .iter()
            .map(|&q| proj[q].iter().zip(origin).map(|(a, b)| a - b).collect())
            .collect();
        if rank_and_pivots(&spans).0 != k - 1 {
            return;
        }
        let mut on = Vec::new();
        let (mut pos, mut neg) = (false, false);
        for (x, p) in proj.iter().enumerate() {
            let mut m = spans.clone();
            m.push(p.iter().zip(origin).map(|(a, b)| a - b).collect());
            match determinant(m).signum() {
                0 => on.push(subset[x]),
                1 => pos = true,
                _ => neg = true,
            }
        }
        if !(pos && neg) {
            facets.insert(on);
        }
    });

    let mut simplices = Vec::new();
    for facet in facets.iter().filter(|f| !f.contains(&base)) {
        for mut s in pulling_triangulation(points, facet)? {
            s.push(base);
            simplices.push(s);
        }
    }
    Ok(simplices)
}

/// Lattice-normalized `(d-1)`-volume of a full-dimensional Minkowski cell.
/// The cell sits in `Σx = n`; dropping the last coordinate is a lattice
/// isomorphism onto `Z^{d-1}`.
pub fn normalized_volume(a: &NdType) -> Result<u64> {
    let d = a.d();
    if a.minkowski_dim() != d - 1 {
        return Err(Error::NotFullDim(a.to_string()));
    }
    let points: Vec<Vec<i64>> = cell_vertex_points(a)?
        .into_iter()
        .map(|p| p.0[..d - 1].to_vec())
        .collect();
    if d == 1 {
        return Ok(1);
    }
    let all: Vec<usize> = (0..points.len()).collect();
    let mut total: i128 = 0;
    for s in pulling_triangulation(&points, &all)? {
        let apex = &points[s[0]];
        let m: Vec<Vec<i128>> = s[1..]
            .iter()
            .map(|&v| {
                points[v]
                    .iter()
                    .zip(apex)
                    .map(|(a, b)| (a - b) as i128)
                    .collect()
            })
            .collect();
        total += determinant(m).abs();
    }
    Ok(total as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str, d: usize) -> NdType {
        NdType::parse(s, d).unwrap()
    }

    #[test]
    fn embedding() {
        assert_eq!(
            embed_tope(&t("(1,2,3)", 3)).unwrap(),
            LatticePoint(vec![1, 1, 1])
        );
        assert_eq!(
            embed_tope(&t("(1,1)", 2)).unwrap(),
            LatticePoint(vec![2, 0])
        );
        assert_eq!(
            embed_tope(&t("(2,1)", 2)).unwrap(),
            LatticePoint(vec![1, 1])
        );
        assert!(matches!(
            embed_tope(&t("(12,1)", 2)),
            Err(Error::NotTotal(_))
        ));
    }

    #[test]
    fn vertex_points() {
        assert_eq!(cell_vertex_points(&t("(2,3)", 3)).unwrap().len(), 1);
        let seg: Vec<_> = cell_vertex_points(&t("(12,12)", 2))
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(
            seg,
            vec![LatticePoint(vec![0, 2]), LatticePoint(vec![2, 0])]
        );
        let hex = cell_vertex_points(&t("(12,23,13)", 3)).unwrap();
        assert_eq!(hex.len(), 6);
        assert!(hex.iter().all(|p| p.sum() == 3));
        let raw: Vec<Vec<i64>> = hex.into_iter().map(|p| p.0).collect();
        assert_eq!(affine_rank(&raw), 2);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(vec![vec![2, 0], vec![0, 3]]), 6);
        assert_eq!(determinant(vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(
            determinant(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]),
            -3
        );
        assert_eq!(determinant(vec![vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn volumes() {
        assert_eq!(normalized_volume(&t("(12,12)", 2)).unwrap(), 2);
        assert_eq!(normalized_volume(&t("(12,1)", 2)).unwrap(), 1);
        assert_eq!(normalized_volume(&t("(12,23,13)", 3)).unwrap(), 6);
        assert_eq!(normalized_volume(&t("(123)", 3)).unwrap(), 1);
        assert_eq!(normalized_volume(&t("(1234,1234)", 4)).unwrap(), 8);
        assert!(matches!(
            normalized_volume(&t("(12,12)", 3)),
            Err(Error::NotFullDim(_))
        ));
    }

    #[test]
    fn square_triangulates_into_two_triangles() {
        let pts = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let s = pulling_triangulation(&pts, &[0, 1, 2, 3]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|x| x.len() == 3 && x.contains(&0)));
    }
}
