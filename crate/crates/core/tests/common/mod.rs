//! Fixtures and independent oracles shared by the integration targets.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tropmat::realize::{is_generic, WeightMatrix};
use tropmat::NdType;

pub const SHAPES: [(usize, usize); 5] = [(2, 2), (2, 3), (3, 3), (4, 3), (3, 4)];

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn t(s: &str, d: usize) -> NdType {
    NdType::parse(s, d).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut StdRng, range: i64, max_den: i64) -> BigRational {
    let q = rng.gen_range(1..=max_den);
    rat(rng.gen_range(-range * q..=range * q), q)
}

pub fn random_weights(
    rng: &mut StdRng,
    n: usize,
    d: usize,
    range: i64,
    max_den: i64,
) -> WeightMatrix {
    WeightMatrix::new(
        (0..n)
            .map(|_| {
                (0..d)
                    .map(|_| random_rational(rng, range, max_den))
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

/// Random matrices with generic-looking entries, small-integer matrices that
/// produce coincidences, and the all-zero matrix, for every shape.
pub fn weight_corpus() -> Vec<(String, WeightMatrix)> {
    let mut rng = rng(0x7a0b_5eed);
    let mut out = Vec::new();
    for &(n, d) in &SHAPES {
        for k in 0..6 {
            out.push((
                format!("({n},{d}) rational #{k}"),
                random_weights(&mut rng, n, d, 5, 97),
            ));
        }
        for k in 0..5 {
            out.push((
                format!("({n},{d}) small-int #{k}"),
                random_weights(&mut rng, n, d, 1, 1),
            ));
        }
        out.push((
            format!("({n},{d}) zero"),
            WeightMatrix::zeros(n, d).unwrap(),
        ));
    }
    out
}

/// A weight matrix whose arrangement is generic, by rejection sampling.
pub fn generic_weights(rng: &mut StdRng, n: usize, d: usize) -> WeightMatrix {
    loop {
        let w = random_weights(rng, n, d, 20, 1009);
        if is_generic(&w).unwrap() {
            return w;
        }
    }
}

/// Every ordered partition of `[d]` (0-based letters), built from the maps
/// `[d] → [d]` whose image is an initial segment.
pub fn oracle_ordered_partitions(d: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let total = d.pow(d as u32);
    for code in 0..total {
        let mut c = code;
        let rank: Vec<usize> = (0..d)
            .map(|_| {
                let r = c % d;
                c /= d;
                r
            })
            .collect();
        let k = rank.iter().max().unwrap() + 1;
        if (0..k).all(|r| rank.contains(&r)) {
            out.push(
                (0..k)
                    .map(|r| (0..d).filter(|&j| rank[j] == r).collect())
                    .collect(),
            );
        }
    }
    out
}

/// Keeps, per entry, the letters of the first part that meets it.
pub fn oracle_refine(b: &NdType, parts: &[Vec<usize>]) -> Vec<BTreeSet<usize>> {
    (0..b.n())
        .map(|i| {
            let entry: BTreeSet<usize> = b.entry_letters(i).into_iter().map(|j| j - 1).collect();
            parts
                .iter()
                .map(|p| {
                    p.iter()
                        .copied()
                        .filter(|j| entry.contains(j))
                        .collect::<BTreeSet<_>>()
                })
                .find(|s| !s.is_empty())
                .unwrap()
        })
        .collect()
}

/// Entries as sets of 0-based letters.
pub fn as_sets(a: &NdType) -> Vec<BTreeSet<usize>> {
    (0..a.n())
        .map(|i| a.entry_letters(i).into_iter().map(|j| j - 1).collect())
        .collect()
}

/// Brute force: is `a` obtained from `b` by some ordered partition?
pub fn oracle_is_refinement(a: &NdType, b: &NdType, partitions: &[Vec<Vec<usize>>]) -> bool {
    let target = as_sets(a);
    partitions.iter().any(|p| oracle_refine(b, p) == target)
}

/// All (n,d)-types, from bitmask tuples.
pub fn all_types(n: usize, d: usize) -> Vec<NdType> {
    let full = (1u16 << d) - 1;
    let mut out = Vec::new();
    let mut cur = vec![1u16; n];
    loop {
        out.push(NdType::from_masks(d, cur.clone()).unwrap());
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if cur[i] < full {
                cur[i] += 1;
                break;
            }
            cur[i] = 1;
            i += 1;
        }
    }
}

/// A uniformly random type with entries inside those of `b`.
pub fn random_subtype(rng: &mut StdRng, b: &NdType) -> NdType {
    let entries = b
        .entries()
        .iter()
        .map(|&e| loop {
            let s = rng.gen_range(1..=e) & e;
            if s != 0 {
                break s;
            }
        })
        .collect();
    NdType::from_masks(b.d(), entries).unwrap()
}

pub fn random_type(rng: &mut StdRng, n: usize, d: usize) -> NdType {
    let full = (1u16 << d) - 1;
    NdType::from_masks(d, (0..n).map(|_| rng.gen_range(1..=full)).collect()).unwrap()
}

/// Normalized volume of a product of simplices of dimensions `k_i`: the
/// multinomial `(Σk_i)! / ∏k_i!`.
pub fn product_of_simplices_volume(dims: &[usize]) -> u64 {
    let fact = |k: usize| (1..=k as u64).product::<u64>();
    fact(dims.iter().sum()) / dims.iter().map(|&k| fact(k)).product::<u64>()
}

pub fn binomial(m: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (m - i) / (i + 1))
}

/// Normalized volume of a Minkowski cell by counting draconian sequences:
/// sum over `a` with `Σa = d - 1` and `Σ_{i∈S} a_i ≤ |∪_{i∈S} A_i| - 1` for
/// every nonempty `S`, of the multinomial `(d-1)! / ∏ a_i!`.
pub fn oracle_volume(a: &NdType) -> u64 {
    let n = a.n();
    let d = a.d();
    let fact = |k: usize| (1..=k as u64).product::<u64>();
    let mut total = 0;
    let mut seq = vec![0usize; n];
    loop {
        if seq.iter().sum::<usize>() == d - 1 {
            let ok = (1u32..(1 << n)).all(|s| {
                let (mut sum, mut union) = (0, 0u16);
                for (i, &k) in seq.iter().enumerate() {
                    if s >> i & 1 == 1 {
                        sum += k;
                        union |= a.entry(i);
                    }
                }
                sum < union.count_ones() as usize
            });
            if ok {
                total += fact(d - 1) / seq.iter().map(|&x| fact(x)).product::<u64>();
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return total;
            }
            if seq[i] < d - 1 {
                seq[i] += 1;
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}
