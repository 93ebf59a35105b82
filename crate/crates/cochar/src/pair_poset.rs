//! Cocharacter pairs `(M_S, μ_S)`, their partial order, strictly decreasing
//! pairs, extensions and cubes.

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::root_datum::{LeviSet, OrderMode, RootDatum};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

/// A Levi set with an `M_S`-dominant integral cocharacter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CocharacterPair {
    pub levi: LeviSet,
    pub mu: Vec<i64>,
}

impl CocharacterPair {
    pub fn new(levi: LeviSet, mu: Vec<i64>) -> Self {
        CocharacterPair { levi, mu }
    }

    /// The pair `(G, μ)` with `μ` made dominant.
    pub fn top(rd: &RootDatum, mu: &[i64]) -> Self {
        CocharacterPair { levi: rd.delta(), mu: rd.dominant_rep(rd.delta(), mu) }
    }

    pub fn validate(&self, rd: &RootDatum) -> Result<()> {
        rd.check_cocharacter(&self.mu)?;
        rd.check_levi(self.levi)?;
        if !rd.is_gamma_stable(self.levi) {
            return Err(Error::LeviMismatch(format!("{} is not Galois-stable", self.levi)));
        }
        if !rd.is_dominant(self.levi, &self.mu) {
            return Err(Error::NotDominant(format!("{:?}", self.mu)));
        }
        Ok(())
    }

    pub fn theta(&self, rd: &RootDatum) -> Vec<Q> {
        rd.theta(self.levi, &self.mu)
    }

    /// Block notation, e.g. `(GL_1xGL_2xGL_1, (1)(1,0)(0))`.
    pub fn label(&self, rd: &RootDatum) -> String {
        let blocks = rd.blocks(self.levi);
        let names: Vec<String> = blocks.iter().map(|b| format!("GL_{}", b.len)).collect();
        let mut weights = String::new();
        for b in &blocks {
            let vals: Vec<String> = self.mu[b.range()].iter().map(|v| v.to_string()).collect();
            let _ = write!(weights, "({})", vals.join(","));
        }
        format!("({}, {})", names.join("x"), weights)
    }
}

/// Nodes sorted by `(S, μ)`; `edges` holds `(lower, upper)` index pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPoset {
    pub top: CocharacterPair,
    pub nodes: Vec<CocharacterPair>,
    pub edges: Vec<(usize, usize)>,
}

impl PairPoset {
    fn assemble(top: CocharacterPair, nodes: BTreeSet<CocharacterPair>, raw: &[(CocharacterPair, CocharacterPair)]) -> Self {
        let nodes: Vec<CocharacterPair> = nodes.into_iter().collect();
        let index: HashMap<&CocharacterPair, usize> = nodes.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut edges: Vec<(usize, usize)> = raw.iter().map(|(lo, hi)| (index[lo], index[hi])).collect();
        edges.sort_unstable();
        edges.dedup();
        PairPoset { top, nodes, edges }
    }

    pub fn index_of(&self, p: &CocharacterPair) -> Option<usize> {
        self.nodes.binary_search(p).ok()
    }

    pub fn contains(&self, p: &CocharacterPair) -> bool {
        self.index_of(p).is_some()
    }

    /// Lower covers of each node.
    pub fn lower_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(lo, hi) in &self.edges {
            adj[hi].push(lo);
        }
        adj
    }

    /// Every node lying below some node of `seeds` (seeds included).
    pub fn downward_closure(&self, seeds: &[CocharacterPair]) -> Vec<CocharacterPair> {
        let adj = self.lower_adjacency();
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<usize> = seeds.iter().filter_map(|p| self.index_of(p)).collect();
        while let Some(i) = stack.pop() {
            if std::mem::replace(&mut seen[i], true) {
                continue;
            }
            stack.extend(adj[i].iter().copied());
        }
        (0..self.nodes.len()).filter(|&i| seen[i]).map(|i| self.nodes[i].clone()).collect()
    }
}

/// All ways to split the multiset `values` into consecutive parts of the
/// given sizes, each part sorted descending. Results are distinct and sorted.
pub fn multiset_splits(values: &[i64], sizes: &[usize]) -> Vec<Vec<Vec<i64>>> {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_default() += 1;
    }
    let counts: Vec<(i64, usize)> = counts.into_iter().rev().collect();
    let mut out = Vec::new();
    split_rec(&counts, sizes, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn split_rec(counts: &[(i64, usize)], sizes: &[usize], acc: &mut Vec<Vec<i64>>, out: &mut Vec<Vec<Vec<i64>>>) {
    let Some((&size, rest)) = sizes.split_first() else {
        out.push(acc.clone());
        return;
    };
    let mut part = Vec::with_capacity(size);
    choose_rec(counts, 0, size, &mut part, &mut |part, remaining| {
        acc.push(part.to_vec());
        split_rec(remaining, rest, acc, out);
        acc.pop();
    });
}

/// Receives the chosen part and the remaining multiplicities.
type PartVisitor<'a> = dyn FnMut(&[i64], &[(i64, usize)]) + 'a;

fn choose_rec(
    counts: &[(i64, usize)],
    i: usize,
    need: usize,
    part: &mut Vec<i64>,
    f: &mut PartVisitor<'_>,
) {
    if need == 0 {
        let taken: BTreeMap<i64, usize> = part.iter().fold(BTreeMap::new(), |mut m, &v| {
            *m.entry(v).or_default() += 1;
            m
        });
        let remaining: Vec<(i64, usize)> = counts
            .iter()
            .map(|&(v, c)| (v, c - taken.get(&v).copied().unwrap_or(0)))
            .collect();
        f(part, &remaining);
        return;
    }
    if i == counts.len() {
        return;
    }
    let (v, c) = counts[i];
    for take in (0..=c.min(need)).rev() {
        part.extend(std::iter::repeat_n(v, take));
        choose_rec(counts, i + 1, need - take, part, f);
        part.truncate(part.len() - take);
    }
}

/// All `M_small`-dominant `μ'` conjugate to `μ` under the Weyl group of
/// `M_big` (requires `small ⊆ big`).
pub fn dominant_conjugates(rd: &RootDatum, big: LeviSet, small: LeviSet, mu: &[i64]) -> Vec<Vec<i64>> {
    let small_blocks = rd.blocks(small);
    let mut results: Vec<Vec<i64>> = vec![mu.to_vec()];
    for b in rd.blocks(big) {
        let sizes: Vec<usize> = small_blocks
            .iter()
            .filter(|s| b.range().contains(&s.start))
            .map(|s| s.len)
            .collect();
        if sizes.len() == 1 {
            for r in results.iter_mut() {
                r[b.range()].sort_unstable_by(|x, y| y.cmp(x));
            }
            continue;
        }
        let splits = multiset_splits(&mu[b.range()], &sizes);
        let mut next = Vec::with_capacity(results.len() * splits.len());
        for r in &results {
            for sp in &splits {
                let mut v = r.clone();
                let flat: Vec<i64> = sp.concat();
                v[b.range()].copy_from_slice(&flat);
                next.push(v);
            }
        }
        results = next;
    }
    results.sort();
    results.dedup();
    results
}

/// `lower ⋖ upper` in the cover relation.
pub fn covers(rd: &RootDatum, lower: &CocharacterPair, upper: &CocharacterPair) -> bool {
    if !lower.levi.is_subset(upper.levi) || lower.levi == upper.levi {
        return false;
    }
    let added = upper.levi.difference(lower.levi);
    if !rd.relative_roots().contains(&added) {
        return false;
    }
    rd.is_conjugate_in_levi(upper.levi, &lower.mu, &upper.mu)
        && rd.precneq(&upper.theta(rd), &lower.theta(rd), OrderMode::Relative)
}

/// All lower covers of `p`, sorted.
pub fn children(rd: &RootDatum, p: &CocharacterPair) -> Vec<CocharacterPair> {
    let theta = p.theta(rd);
    let mut out = BTreeSet::new();
    for orbit in rd.root_orbits(p.levi) {
        let s2 = p.levi.difference(orbit);
        for mu2 in dominant_conjugates(rd, p.levi, s2, &p.mu) {
            let t2 = rd.theta(s2, &mu2);
            if rd.precneq(&theta, &t2, OrderMode::Relative) {
                out.insert(CocharacterPair::new(s2, mu2));
            }
        }
    }
    out.into_iter().collect()
}

/// Reflexive-transitive closure of the cover relation.
pub fn leq(rd: &RootDatum, lower: &CocharacterPair, upper: &CocharacterPair) -> bool {
    if lower == upper {
        return true;
    }
    if !lower.levi.is_subset(upper.levi) {
        return false;
    }
    let target = lower.theta(rd);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([upper.clone()]);
    while let Some(p) = queue.pop_front() {
        for c in children(rd, &p) {
            if c == *lower {
                return true;
            }
            if lower.levi.is_subset(c.levi)
                && c.levi != lower.levi
                && rd.preceq(&c.theta(rd), &target, OrderMode::Relative)
                && seen.insert(c.clone())
            {
                queue.push_back(c);
            }
        }
    }
    false
}

/// All pairs `≤ top`, with every cover edge among them.
pub fn down_set(rd: &RootDatum, top: &CocharacterPair) -> PairPoset {
    let mut nodes = BTreeSet::from([top.clone()]);
    let mut raw = Vec::new();
    let mut queue = VecDeque::from([top.clone()]);
    while let Some(p) = queue.pop_front() {
        for c in children(rd, &p) {
            raw.push((c.clone(), p.clone()));
            if nodes.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    PairPoset::assemble(top.clone(), nodes, &raw)
}

/// `⟨θ(p), α⟩ > 0` for every `α ∈ relative_to \ S`.
pub fn is_strictly_decreasing(rd: &RootDatum, p: &CocharacterPair, relative_to: LeviSet) -> Result<bool> {
    if !p.levi.is_subset(relative_to) {
        return Err(Error::LeviMismatch(format!("{} is not contained in {}", p.levi, relative_to)));
    }
    let theta = p.theta(rd);
    Ok(relative_to
        .difference(p.levi)
        .indices()
        .iter()
        .all(|&k| rd.pair_root(&theta, k).is_positive()))
}

pub fn is_sd(rd: &RootDatum, p: &CocharacterPair) -> bool {
    is_strictly_decreasing(rd, p, rd.delta()).unwrap_or(false)
}

/// The unique pair at Levi `s'` lying above `p`.
pub fn extension(rd: &RootDatum, p: &CocharacterPair, s_prime: LeviSet) -> Result<CocharacterPair> {
    if !is_strictly_decreasing(rd, p, s_prime)? {
        return Err(Error::NotStrictlyDecreasing);
    }
    Ok(CocharacterPair::new(s_prime, rd.dominant_rep(s_prime, &p.mu)))
}

/// Extensions of `p` to every union of `S` with relative roots pairing
/// positively against `θ(p)`.
pub fn cube(rd: &RootDatum, p: &CocharacterPair) -> PairPoset {
    let theta = p.theta(rd);
    let positive: Vec<LeviSet> = rd
        .relative_roots()
        .into_iter()
        .filter(|o| o.intersection(p.levi).is_empty())
        .filter(|o| rd.pair_root(&theta, o.indices()[0]).is_positive())
        .collect();
    let mut nodes = BTreeSet::new();
    let mut top = p.clone();
    for mask in 0u64..1 << positive.len() {
        let s = positive
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(p.levi, |acc, (_, o)| acc.union(*o));
        let e = extension(rd, p, s).expect("cube vertices are strictly decreasing extensions");
        if mask + 1 == 1 << positive.len() {
            top = e.clone();
        }
        nodes.insert(e);
    }
    let list: Vec<CocharacterPair> = nodes.iter().cloned().collect();
    let raw: Vec<(CocharacterPair, CocharacterPair)> = list
        .iter()
        .flat_map(|a| list.iter().map(move |b| (a.clone(), b.clone())))
        .filter(|(a, b)| covers(rd, a, b))
        .collect();
    PairPoset::assemble(top, nodes, &raw)
}

/// Strictly decreasing pairs below `(G, μ)`.
pub fn sd_set(rd: &RootDatum, mu: &[i64]) -> Vec<CocharacterPair> {
    let poset = down_set(rd, &CocharacterPair::top(rd, mu));
    poset.nodes.into_iter().filter(|p| is_sd(rd, p)).collect()
}

/// DOT digraph with arrows from each pair to its lower covers.
pub fn hasse_dot(rd: &RootDatum, poset: &PairPoset) -> String {
    let mut s = String::from("digraph poset {\n");
    for (i, p) in poset.nodes.iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{}\"];", p.label(rd));
    }
    let mut edges = poset.edges.clone();
    edges.sort_by_key(|&(lo, hi)| (hi, lo));
    for (lo, hi) in edges {
        let _ = writeln!(s, "  n{hi} -> n{lo};");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::{build_root_datum, GroupSpec};

    fn gl(n: usize) -> RootDatum {
        build_root_datum(&GroupSpec::gl(n)).unwrap()
    }

    fn pair(s: &[usize], mu: &[i64]) -> CocharacterPair {
        CocharacterPair::new(LeviSet::from_indices(s.iter().copied()), mu.to_vec())
    }

    #[test]
    fn splits_enumerate_distributions() {
        let s = multiset_splits(&[1, 1, 0, 0], &[2, 2]);
        assert_eq!(s, vec![vec![vec![0, 0], vec![1, 1]], vec![vec![1, 0], vec![1, 0]], vec![vec![1, 1], vec![0, 0]]]);
        assert_eq!(multiset_splits(&[2, 1, 0], &[1, 1, 1]).len(), 6);
    }

    #[test]
    fn cover_examples() {
        let rd = gl(4);
        assert!(covers(&rd, &pair(&[0, 1], &[1, 1, 0, 0]), &pair(&[0, 1, 2], &[1, 1, 0, 0])));
        assert!(!covers(&rd, &pair(&[0], &[1, 1, 0, 0]), &pair(&[0, 2], &[1, 1, 0, 0])));
        let p = pair(&[0, 1, 2], &[1, 1, 0, 0]);
        assert!(!covers(&rd, &p, &p));
    }

    #[test]
    fn leq_examples() {
        let rd = gl(4);
        let top = pair(&[0, 1, 2], &[1, 1, 0, 0]);
        assert!(leq(&rd, &pair(&[], &[1, 1, 0, 0]), &top));
        assert!(!leq(&rd, &pair(&[], &[1, 0, 1, 0]), &top));
        assert!(leq(&rd, &top, &top));
    }

    #[test]
    fn small_down_sets() {
        let rd = gl(1);
        assert_eq!(down_set(&rd, &pair(&[], &[3])).nodes.len(), 1);
        let rd = gl(2);
        let ds = down_set(&rd, &pair(&[0], &[1, 0]));
        assert_eq!(ds.nodes, vec![pair(&[], &[1, 0]), pair(&[0], &[1, 0])]);
        assert_eq!(ds.edges, vec![(0, 1)]);
    }

    #[test]
    fn sd_examples() {
        let rd = gl(4);
        assert!(is_sd(&rd, &pair(&[0, 1], &[1, 1, 0, 0])));
        assert!(!is_sd(&rd, &pair(&[0], &[1, 1, 0, 0])));
        assert!(is_sd(&rd, &pair(&[0, 1, 2], &[1, 1, 0, 0])));
        assert!(is_strictly_decreasing(&rd, &pair(&[0, 1, 2], &[1, 1, 0, 0]), LeviSet::from_indices([0])).is_err());
        assert_eq!(sd_set(&rd, &[1, 1, 0, 0]).len(), 5);
        assert_eq!(sd_set(&rd, &[2, 2, 2, 2]), vec![pair(&[0, 1, 2], &[2, 2, 2, 2])]);
        assert_eq!(sd_set(&gl(2), &[1, 0]).len(), 2);
    }

    #[test]
    fn extension_examples() {
        let rd = gl(4);
        let e = extension(&rd, &pair(&[0, 1], &[1, 1, 0, 0]), rd.delta()).unwrap();
        assert_eq!(e, pair(&[0, 1, 2], &[1, 1, 0, 0]));
        let p = pair(&[], &[1, 1, 0, 0]);
        assert_eq!(extension(&rd, &p, LeviSet::empty()).unwrap(), p);
        assert_eq!(extension(&rd, &p, LeviSet::from_indices([1])).unwrap(), pair(&[1], &[1, 1, 0, 0]));
        assert!(extension(&rd, &p, LeviSet::from_indices([0])).is_err());
    }

    #[test]
    fn cube_examples() {
        let rd = gl(4);
        let c = cube(&rd, &pair(&[0, 1], &[1, 1, 0, 0]));
        assert_eq!((c.nodes.len(), c.edges.len()), (2, 1));
        let c = cube(&rd, &pair(&[0, 1, 2], &[1, 1, 0, 0]));
        assert_eq!(c.nodes.len(), 1);
        let c = cube(&rd, &pair(&[1], &[1, 1, 0, 0]));
        assert_eq!((c.nodes.len(), c.edges.len()), (4, 4));
    }

    #[test]
    fn dot_output() {
        let rd = gl(2);
        let dot = hasse_dot(&rd, &down_set(&rd, &pair(&[0], &[1, 0])));
        assert!(dot.contains("label=\"(GL_2, (1,0))\""));
        assert!(dot.contains("label=\"(GL_1xGL_1, (1)(0))\""));
        assert_eq!(dot.matches("->").count(), 1);
    }
}
