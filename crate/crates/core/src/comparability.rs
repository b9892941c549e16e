//! Comparability multigraphs of type pairs and mixed directed-cycle detection.
//!
//! A directed cycle in a mixed graph is a closed walk using at least one
//! directed edge, with every directed edge traversed forwards. Contracting the
//! undirected components reduces this to ordinary cycle detection on the
//! quotient digraph, and the acyclic quotient yields the ordered partition
//! that refines one type into another.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::dsu::UnionFind;
use crate::error::{Error, Result};
use crate::types::{full_set, letters, singleton, LetterSet, NdType, OrderedPartition};

/// Mixed multigraph on the letters `0..d` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedMultigraph {
    d: usize,
    /// Keyed by `(a, b)` with `a < b`.
    undirected: BTreeMap<(usize, usize), usize>,
    directed: BTreeMap<(usize, usize), usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Undirected,
    Directed,
}

/// One traversed edge of a cycle witness (0-based letters).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleStep {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

/// A closed walk containing at least one forward directed edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWitness {
    pub steps: Vec<CycleStep>,
}

impl CycleWitness {
    /// Visited letters, 1-based, with the start repeated at the end.
    pub fn letters(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.steps.iter().map(|s| s.from + 1).collect();
        if let Some(first) = out.first().copied() {
            out.push(first);
        }
        out
    }

    /// Checks that the walk is closed, contiguous, uses at least one directed
    /// edge, and that every step exists in `graph` with the stated orientation.
    pub fn replay(&self, graph: &MixedMultigraph) -> bool {
        if self.steps.is_empty() {
            return false;
        }
        let contiguous = self.steps.windows(2).all(|w| w[0].to == w[1].from);
        let closed = self.steps.last().unwrap().to == self.steps[0].from;
        let has_directed = self.steps.iter().any(|s| s.kind == EdgeKind::Directed);
        let edges_exist = self.steps.iter().all(|s| match s.kind {
            EdgeKind::Directed => graph.directed_multiplicity(s.from, s.to) > 0,
            EdgeKind::Undirected => graph.undirected_multiplicity(s.from, s.to) > 0,
        });
        contiguous && closed && has_directed && edges_exist
    }
}

impl fmt::Display for CycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(first) = self.steps.first() else {
            return write!(f, "<empty>");
        };
        write!(f, "{}", first.from + 1)?;
        for s in &self.steps {
            let arrow = match s.kind {
                EdgeKind::Directed => "->",
                EdgeKind::Undirected => "--",
            };
            write!(f, " {arrow} {}", s.to + 1)?;
        }
        Ok(())
    }
}

impl serde::Serialize for CycleWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Depth-first frame: node, next edge index, edge used to enter.
type Frame = (usize, usize, Option<(usize, usize)>);

impl MixedMultigraph {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            undirected: BTreeMap::new(),
            directed: BTreeMap::new(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Adds an undirected edge; loops are ignored.
    pub fn add_undirected(&mut self, a: usize, b: usize) {
        if a != b {
            *self.undirected.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }

    /// Adds a directed edge `a -> b`; loops are ignored.
    pub fn add_directed(&mut self, a: usize, b: usize) {
        if a != b {
            *self.directed.entry((a, b)).or_insert(0) += 1;
        }
    }

    pub fn undirected_multiplicity(&self, a: usize, b: usize) -> usize {
        self.undirected
            .get(&(a.min(b), a.max(b)))
            .copied()
            .unwrap_or(0)
    }

    pub fn directed_multiplicity(&self, a: usize, b: usize) -> usize {
        self.directed.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn undirected_edges(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.undirected.iter().map(|(&k, &m)| (k, m))
    }

    pub fn directed_edges(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.directed.iter().map(|(&k, &m)| (k, m))
    }

    /// Same graph with every directed edge reversed.
    pub fn reversed(&self) -> Self {
        Self {
            d: self.d,
            undirected: self.undirected.clone(),
            directed: self
                .directed
                .iter()
                .map(|(&(a, b), &m)| ((b, a), m))
                .collect(),
        }
    }

    fn undirected_classes(&self) -> UnionFind {
        let mut uf = UnionFind::new(self.d);
        for &(a, b) in self.undirected.keys() {
            uf.union(a, b);
        }
        uf
    }

    /// Shortest undirected path from `from` to `to` (assumed connected).
    fn undirected_path(&self, from: usize, to: usize) -> Vec<CycleStep> {
        if from == to {
            return Vec::new();
        }
        let mut adj = vec![Vec::new(); self.d];
        for &(a, b) in self.undirected.keys() {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut prev = vec![usize::MAX; self.d];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &w in &adj[v] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            let u = prev[v];
            path.push(CycleStep {
                from: u,
                to: v,
                kind: EdgeKind::Undirected,
            });
            v = u;
        }
        path.reverse();
        path
    }

    /// Expands a cyclic sequence of directed edges into a full walk by
    /// joining consecutive edges through undirected paths.
    fn expand(&self, directed: &[(usize, usize)]) -> CycleWitness {
        let mut steps = Vec::new();
        for (t, &(u, v)) in directed.iter().enumerate() {
            steps.push(CycleStep {
                from: u,
                to: v,
                kind: EdgeKind::Directed,
            });
            let next_start = directed[(t + 1) % directed.len()].0;
            steps.extend(self.undirected_path(v, next_start));
        }
        CycleWitness { steps }
    }

    /// Returns a directed cycle if one exists.
    pub fn find_cycle(&self) -> Option<CycleWitness> {
        let mut uf = self.undirected_classes();
        // a directed edge inside one undirected class closes a cycle at once
        for &(u, v) in self.directed.keys() {
            if uf.same(u, v) {
                return Some(self.expand(&[(u, v)]));
            }
        }
        let comp: Vec<usize> = (0..self.d).map(|j| uf.find(j)).collect();
        let mut adj: Vec<Vec<(usize, (usize, usize))>> = vec![Vec::new(); self.d];
        for &(u, v) in self.directed.keys() {
            adj[comp[u]].push((comp[v], (u, v)));
        }

        // iterative three-colour DFS over component representatives
        #[derive(Clone, Copy, PartialEq)]
        enum Colour {
            White,
            Grey,
            Black,
        }
        let mut colour = vec![Colour::White; self.d];
        for root in 0..self.d {
            if comp[root] != root || colour[root] != Colour::White {
                continue;
            }
            let mut stack: Vec<Frame> = vec![(root, 0, None)];
            colour[root] = Colour::Grey;
            while let Some(&mut (node, ref mut idx, _)) = stack.last_mut() {
                if *idx < adj[node].len() {
                    let (next, edge) = adj[node][*idx];
                    *idx += 1;
                    match colour[next] {
                        Colour::White => {
                            colour[next] = Colour::Grey;
                            stack.push((next, 0, Some(edge)));
                        }
                        Colour::Grey => {
                            let start = stack.iter().position(|f| f.0 == next).unwrap();
                            let mut cycle: Vec<(usize, usize)> =
                                stack[start + 1..].iter().map(|f| f.2.unwrap()).collect();
                            cycle.push(edge);
                            return Some(self.expand(&cycle));
                        }
                        Colour::Black => {}
                    }
                } else {
                    colour[node] = Colour::Black;
                    stack.pop();
                }
            }
        }
        None
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Graphviz rendering with 1-based letters, for debugging.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph comparability {\n");
        for j in 0..self.d {
            s.push_str(&format!("  {};\n", j + 1));
        }
        for (&(a, b), &m) in &self.undirected {
            for _ in 0..m {
                s.push_str(&format!("  {} -- {};\n", a + 1, b + 1));
            }
        }
        for (&(a, b), &m) in &self.directed {
            for _ in 0..m {
                s.push_str(&format!("  {} -> {};\n", a + 1, b + 1));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// The comparability graph `CG(A, B)`: for every position `i` and letters
/// `j ∈ A_i`, `k ∈ B_i` with `j != k`, an undirected edge when both lie in
/// `A_i ∩ B_i`, otherwise a directed edge `j -> k`.
pub fn comparability_graph(a: &NdType, b: &NdType) -> Result<MixedMultigraph> {
    a.check_params(b)?;
    let mut g = MixedMultigraph::new(a.d());
    for (&ai, &bi) in a.entries().iter().zip(b.entries()) {
        let both = ai & bi;
        for j in letters(ai) {
            for k in letters(bi) {
                if j == k {
                    continue;
                }
                if both & singleton(j) != 0 && both & singleton(k) != 0 {
                    g.add_undirected(j, k);
                } else {
                    g.add_directed(j, k);
                }
            }
        }
    }
    Ok(g)
}

/// Whether `A` and `B` are comparable (acyclic comparability graph).
pub fn comparable(a: &NdType, b: &NdType) -> Result<bool> {
    Ok(comparability_graph(a, b)?.is_acyclic())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefinementOutcome {
    /// `refine(B, P) == A`.
    Partition(OrderedPartition),
    Cycle(CycleWitness),
}

impl RefinementOutcome {
    pub fn partition(&self) -> Option<&OrderedPartition> {
        match self {
            Self::Partition(p) => Some(p),
            Self::Cycle(_) => None,
        }
    }
}

/// Decides whether `a` is a refinement of `b` (requires `a ⊆ b`). On success
/// the ordered partition is a linear extension of the contracted comparability
/// digraph; ties go to the component with the smallest least letter, and
/// letters absent from `b` form a trailing part.
pub fn refinement_witness(a: &NdType, b: &NdType) -> Result<RefinementOutcome> {
    a.check_params(b)?;
    if !a.leq(b) {
        return Err(Error::NotSubset {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let g = comparability_graph(a, b)?;
    if let Some(w) = g.find_cycle() {
        return Ok(RefinementOutcome::Cycle(w));
    }
    let d = a.d();
    let used = b.used_letters();
    let mut uf = g.undirected_classes();
    let mut classes: BTreeMap<usize, LetterSet> = BTreeMap::new();
    for j in letters(used) {
        *classes.entry(uf.find(j)).or_insert(0) |= singleton(j);
    }
    let mut succ: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut indeg: BTreeMap<usize, usize> = classes.keys().map(|&r| (r, 0)).collect();
    for ((u, v), _) in g.directed_edges() {
        let (ru, rv) = (uf.find(u), uf.find(v));
        if succ.entry(ru).or_default().insert(rv) {
            *indeg.get_mut(&rv).unwrap() += 1;
        }
    }
    // Kahn; ready classes keyed by their least letter
    let mut ready: BTreeSet<(u32, usize)> = indeg
        .iter()
        .filter(|(_, &k)| k == 0)
        .map(|(&r, _)| (classes[&r].trailing_zeros(), r))
        .collect();
    let mut parts = Vec::with_capacity(classes.len() + 1);
    while let Some(first) = ready.pop_first() {
        let r = first.1;
        parts.push(classes[&r]);
        if let Some(next) = succ.get(&r) {
            for &s in next {
                let k = indeg.get_mut(&s).unwrap();
                *k -= 1;
                if *k == 0 {
                    ready.insert((classes[&s].trailing_zeros(), s));
                }
            }
        }
    }
    assert_eq!(parts.len(), classes.len(), "contracted graph was acyclic");
    let rest = full_set(d) & !used;
    if rest != 0 {
        parts.push(rest);
    }
    let p = OrderedPartition::new(d, parts)?;
    assert_eq!(
        &b.refine(&p),
        a,
        "linear extension must reproduce the refinement"
    );
    Ok(RefinementOutcome::Partition(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str, d: usize) -> NdType {
        NdType::parse(s, d).unwrap()
    }

    #[test]
    fn equal_types_give_only_undirected_edges() {
        let a = t("(12,123)", 3);
        let g = comparability_graph(&a, &a).unwrap();
        assert_eq!(g.directed_edges().count(), 0);
        assert!(g.undirected_edges().count() > 0);
        assert!(g.is_acyclic());
    }

    #[test]
    fn hexagon_against_tope_is_a_three_cycle() {
        let g = comparability_graph(&t("(12,23,13)", 3), &t("(1,2,3)", 3)).unwrap();
        let dir: Vec<_> = g.directed_edges().map(|(e, _)| e).collect();
        assert_eq!(dir, vec![(0, 2), (1, 0), (2, 1)]);
        assert_eq!(g.undirected_edges().count(), 0);
        let w = g.find_cycle().unwrap();
        assert!(w.replay(&g));
        let l = w.letters();
        assert_eq!(l.len(), 4);
        // 1 -> 3 -> 2 -> 1 up to rotation
        let rot: Vec<usize> = {
            let s = l[..3].to_vec();
            let k = s.iter().position(|&x| x == 1).unwrap();
            (0..4).map(|i| s[(k + i) % 3]).collect()
        };
        assert_eq!(rot, vec![1, 3, 2, 1]);
    }

    #[test]
    fn six_letter_graph_classes() {
        let a = t("(123,1,3,4,56)", 6);
        let b = t("(123,16,34,456,56)", 6);
        let g = comparability_graph(&a, &b).unwrap();
        assert!(g.is_acyclic());
        let mut uf = g.undirected_classes();
        assert!(uf.same(0, 1) && uf.same(1, 2));
        assert!(uf.same(4, 5));
        assert!(!uf.same(3, 0) && !uf.same(3, 4) && !uf.same(0, 4));
        assert_eq!(g.directed_multiplicity(0, 5), 1);
        assert_eq!(g.directed_multiplicity(2, 3), 1);
        assert_eq!(g.directed_multiplicity(3, 4), 1);
        assert_eq!(g.directed_multiplicity(3, 5), 1);
    }

    #[test]
    fn undirected_plus_back_edge_is_a_cycle() {
        let g = comparability_graph(&t("(12,12)", 2), &t("(12,1)", 2)).unwrap();
        assert_eq!(g.undirected_multiplicity(0, 1), 2);
        assert_eq!(g.directed_multiplicity(1, 0), 1);
        let w = g.find_cycle().unwrap();
        assert!(w.replay(&g));
        assert!(w.steps.iter().any(|s| s.kind == EdgeKind::Undirected));
    }

    #[test]
    fn witness_examples() {
        let a = t("(123,1,3,4,56)", 6);
        let b = t("(123,16,34,456,56)", 6);
        let p = refinement_witness(&a, &b).unwrap();
        let want =
            OrderedPartition::from_letters(6, &[vec![1, 2, 3], vec![4], vec![5, 6]]).unwrap();
        assert_eq!(p, RefinementOutcome::Partition(want));

        let c = t("(12,23)", 3);
        let p = refinement_witness(&c, &c).unwrap();
        assert_eq!(p.partition().unwrap(), &OrderedPartition::whole(3));

        match refinement_witness(&t("(1,2)", 2), &t("(12,12)", 2)).unwrap() {
            RefinementOutcome::Cycle(w) => {
                assert_eq!(w.steps.len(), 2);
                assert!(w.steps.iter().all(|s| s.kind == EdgeKind::Directed));
            }
            other => panic!("expected a cycle, got {other:?}"),
        }

        assert!(matches!(
            refinement_witness(&t("(12,2)", 2), &t("(1,2)", 2)),
            Err(Error::NotSubset { .. })
        ));
    }

    #[test]
    fn unused_letters_go_last() {
        let a = t("(2,2)", 3);
        let b = t("(12,2)", 3);
        let p = refinement_witness(&a, &b).unwrap();
        let p = p.partition().unwrap();
        assert_eq!(p.parts().last(), Some(&0b100));
        assert_eq!(b.refine(p), a);
    }

    #[test]
    fn dot_export_lists_edges() {
        let g = comparability_graph(&t("(12,12)", 2), &t("(12,1)", 2)).unwrap();
        let dot = g.to_dot();
        assert!(dot.contains("1 -- 2"));
        assert!(dot.contains("2 -> 1"));
    }
}
