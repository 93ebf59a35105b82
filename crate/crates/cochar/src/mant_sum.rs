//! Signed sums `M_{G,b,μ}`, the sum and induction identities, I-sets,
//! Rel sets and the Weyl-coset bijection.

use crate::error::{Error, Result};
use crate::kottwitz::{b_transfer, enumerate_b, in_b, t_map, IsocrystalClass};
use crate::pair_poset::{dominant_conjugates, down_set, is_sd, CocharacterPair, PairPoset};
use crate::root_datum::{build_root_datum, perm_apply, perm_inverse, GroupSpec, LeviSet, Perm, RootDatum};
use serde::{Deserialize, Serialize};
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// An element of the free abelian group on cocharacter pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPairSum {
    terms: BTreeMap<CocharacterPair, i64>,
}

impl SignedPairSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(p: CocharacterPair) -> Self {
        let mut s = Self::new();
        s.add(p, 1);
        s
    }

    pub fn add(&mut self, p: CocharacterPair, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(p) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add_sum(&mut self, other: &SignedPairSum, scale: i64) {
        for (p, c) in &other.terms {
            self.add(p.clone(), c * scale);
        }
    }

    pub fn coeff(&self, p: &CocharacterPair) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CocharacterPair, i64)> {
        self.terms.iter().map(|(p, c)| (p, *c))
    }

    pub fn render(&self, rd: &RootDatum) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (p, c)) in self.iter().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let mag = if c.abs() == 1 { String::new() } else { format!("{}*", c.abs()) };
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&format!("{sign}{mag}{}", p.label(rd)));
        }
        out
    }
}

impl FromIterator<(CocharacterPair, i64)> for SignedPairSum {
    fn from_iter<I: IntoIterator<Item = (CocharacterPair, i64)>>(it: I) -> Self {
        let mut s = Self::new();
        for (p, c) in it {
            s.add(p, c);
        }
        s
    }
}

impl fmt::Display for SignedPairSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(p, c)| format!("{c}*({}, {:?})", p.levi, p.mu)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct Term {
    levi: LeviSet,
    mu: Vec<i64>,
    coeff: i64,
}

impl Serialize for SignedPairSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<Term> =
            self.iter().map(|(p, c)| Term { levi: p.levi, mu: p.mu.clone(), coeff: c }).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedPairSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        Ok(terms.into_iter().map(|t| (CocharacterPair::new(t.levi, t.mu), t.coeff)).collect())
    }
}

/// `(G, μ)` with its down-set, `B(G, μ)` and the strictly decreasing pairs
/// tagged by their image under `T`.
#[derive(Clone, Debug)]
pub struct MantContext {
    pub rd: RootDatum,
    pub top: CocharacterPair,
    pub poset: PairPoset,
    pub classes: Vec<IsocrystalClass>,
    pub sd: Vec<(CocharacterPair, IsocrystalClass)>,
}

impl MantContext {
    pub fn new(rd: &RootDatum, mu: &[i64]) -> Result<Self> {
        rd.check_cocharacter(mu)?;
        let top = CocharacterPair::top(rd, mu);
        let poset = down_set(rd, &top);
        let classes = enumerate_b(rd, &top.mu)?;
        let sd = poset
            .nodes
            .iter()
            .filter(|p| is_sd(rd, p))
            .map(|p| Ok((p.clone(), t_map(rd, p)?)))
            .collect::<Result<_>>()?;
        Ok(MantContext { rd: rd.clone(), top, poset, classes, sd })
    }

    pub fn fiber(&self, b: &IsocrystalClass) -> Vec<CocharacterPair> {
        self.sd.iter().filter(|(_, t)| t == b).map(|(p, _)| p.clone()).collect()
    }

    pub fn r_set(&self, b: &IsocrystalClass) -> Vec<CocharacterPair> {
        self.poset.downward_closure(&self.fiber(b))
    }

    pub fn m_sum(&self, b: &IsocrystalClass) -> SignedPairSum {
        self.r_set(b)
            .into_iter()
            .map(|p| {
                let sign = corank_sign(&self.rd, b.levi, p.levi);
                (p, sign)
            })
            .collect()
    }
}

/// `(-1)^L` with `L` the number of relative simple roots in `big \ small`.
pub fn corank_sign(rd: &RootDatum, big: LeviSet, small: LeviSet) -> i64 {
    if rd.root_orbits(big.difference(small)).len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Downward closure of `T^{-1}(b) ∩ SD_μ`.
pub fn r_set(rd: &RootDatum, b: &IsocrystalClass, mu: &[i64]) -> Result<Vec<CocharacterPair>> {
    Ok(MantContext::new(rd, mu)?.r_set(b))
}

/// `M_{G,b,μ} = Σ_{R_{G,b,μ}} (-1)^{|S_b \ S|} (M_S, μ_S)`.
pub fn m_sum(rd: &RootDatum, b: &IsocrystalClass, mu: &[i64]) -> Result<SignedPairSum> {
    Ok(MantContext::new(rd, mu)?.m_sum(b))
}

/// Residual `Σ_b M_{G,b,μ} - (G, μ)`; zero when the sum identity holds.
pub fn sum_formula_residual(rd: &RootDatum, mu: &[i64]) -> Result<SignedPairSum> {
    let ctx = MantContext::new(rd, mu)?;
    let mut total = SignedPairSum::new();
    for b in &ctx.classes {
        total.add_sum(&ctx.m_sum(b), 1);
    }
    total.add(ctx.top.clone(), -1);
    Ok(total)
}

pub fn verify_sum_formula(rd: &RootDatum, mu: &[i64]) -> Result<bool> {
    Ok(sum_formula_residual(rd, mu)?.is_zero())
}

/// For every pair strictly below `(G, μ)`, the signs over the classes whose
/// R-set contains it cancel; for strictly decreasing pairs those classes
/// are the images of the cube.
pub fn verify_sign_cancellation(rd: &RootDatum, mu: &[i64]) -> Result<bool> {
    let ctx = MantContext::new(rd, mu)?;
    let r_sets: Vec<BTreeSet<CocharacterPair>> =
        ctx.classes.iter().map(|b| ctx.r_set(b).into_iter().collect()).collect();
    for p in &ctx.poset.nodes {
        if *p == ctx.top {
            continue;
        }
        let ys: Vec<&IsocrystalClass> =
            ctx.classes.iter().zip(&r_sets).filter(|(_, r)| r.contains(p)).map(|(b, _)| b).collect();
        let total: i64 = ys.iter().map(|b| corank_sign(rd, b.levi, p.levi)).sum();
        if total != 0 {
            return Ok(false);
        }
        if is_sd(rd, p) {
            let cube = crate::pair_poset::cube(rd, p);
            let images: BTreeSet<IsocrystalClass> =
                cube.nodes.iter().map(|q| t_map(rd, q)).collect::<Result<_>>()?;
            let found: BTreeSet<IsocrystalClass> = ys.into_iter().cloned().collect();
            if images != found {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn require_contains(big: LeviSet, small: LeviSet) -> Result<()> {
    if small.is_subset(big) {
        Ok(())
    } else {
        Err(Error::LeviMismatch(format!("{small} is not contained in {big}")))
    }
}

/// `I^{G,μ}_{M_S,b_S}`: `M_S`-dominant `μ_S ∼_G μ` with `b_S ∈ B(M_S, μ_S)`.
pub fn i_set(rd: &RootDatum, s: LeviSet, b: &IsocrystalClass, mu: &[i64]) -> Result<Vec<CocharacterPair>> {
    require_contains(s, b.levi)?;
    let (sub, bs) = b_transfer(rd, b, s)?;
    let mu = rd.dominant_rep(rd.delta(), mu);
    Ok(dominant_conjugates(rd, rd.delta(), s, &mu)
        .into_iter()
        .filter(|m| in_b(&sub, &bs, m))
        .map(|m| CocharacterPair::new(s, m))
        .collect())
}

/// `Σ_{I-set} i^G_{M_S}(M_{M_S,b_S,μ_S})`.
pub fn induced_sum(rd: &RootDatum, s: LeviSet, b: &IsocrystalClass, mu: &[i64]) -> Result<SignedPairSum> {
    let (sub, bs) = b_transfer(rd, b, s)?;
    let mut total = SignedPairSum::new();
    for p in i_set(rd, s, b, mu)? {
        total.add_sum(&m_sum(&sub, &bs, &p.mu)?, 1);
    }
    Ok(total)
}

pub fn verify_induction_formula(rd: &RootDatum, s: LeviSet, b: &IsocrystalClass, mu: &[i64]) -> Result<bool> {
    Ok(induced_sum(rd, s, b, mu)? == m_sum(rd, b, mu)?)
}

/// `I^{G,μ}_{M_{S2}} = ⨿_{μ_{S1}} I^{M_{S1},μ_{S1}}_{M_{S2}}` for `S_b ⊆ S2 ⊆ S1`.
pub fn verify_i_transitivity(
    rd: &RootDatum,
    s2: LeviSet,
    s1: LeviSet,
    b: &IsocrystalClass,
    mu: &[i64],
) -> Result<bool> {
    require_contains(s1, s2)?;
    require_contains(s2, b.levi)?;
    let direct: BTreeSet<CocharacterPair> = i_set(rd, s2, b, mu)?.into_iter().collect();
    let (sub1, b1) = b_transfer(rd, b, s1)?;
    let mut union = BTreeSet::new();
    let mut count = 0;
    for p1 in i_set(rd, s1, b, mu)? {
        for p2 in i_set(&sub1, s2, &b1, &p1.mu)? {
            count += 1;
            union.insert(p2);
        }
    }
    Ok(count == union.len() && union == direct)
}

/// Coordinates and simple roots owned by each factor of a product group.
type FactorLayout = (std::ops::Range<usize>, Vec<usize>, GroupSpec);

fn factor_layout(rd: &RootDatum) -> Result<Vec<FactorLayout>> {
    let factors = rd.factors().ok_or_else(|| Error::NotProduct("datum has no factor structure".into()))?;
    Ok(factors
        .iter()
        .map(|f| {
            let range = f.offset..f.offset + f.degree * f.rank;
            let roots = (0..rd.num_roots()).filter(|&k| range.contains(&rd.root_coord(k))).collect();
            (range, roots, GroupSpec::res(f.degree, f.rank))
        })
        .collect())
}

fn split_pair(layout: &[(std::ops::Range<usize>, Vec<usize>, GroupSpec)], p: &CocharacterPair) -> Vec<CocharacterPair> {
    layout
        .iter()
        .map(|(range, roots, _)| {
            let levi = LeviSet::from_indices(roots.iter().enumerate().filter(|(_, &k)| p.levi.contains(k)).map(|(i, _)| i));
            CocharacterPair::new(levi, p.mu[range.clone()].to_vec())
        })
        .collect()
}

fn join_pairs(layout: &[(std::ops::Range<usize>, Vec<usize>, GroupSpec)], parts: &[CocharacterPair]) -> CocharacterPair {
    let mut levi = LeviSet::empty();
    let mut mu = Vec::new();
    for ((_, roots, _), q) in layout.iter().zip(parts) {
        for i in q.levi.indices() {
            levi = levi.with(roots[i]);
        }
        mu.extend_from_slice(&q.mu);
    }
    CocharacterPair::new(levi, mu)
}

/// Per-factor data of a product group, each with its own datum.
pub fn factor_data(rd: &RootDatum) -> Result<Vec<RootDatum>> {
    factor_layout(rd)?.iter().map(|(_, _, spec)| build_root_datum(spec)).collect()
}

/// Tensor product of per-factor sums into a sum on the product group.
pub fn tensor(rd: &RootDatum, parts: &[SignedPairSum]) -> Result<SignedPairSum> {
    let layout = factor_layout(rd)?;
    if parts.len() != layout.len() {
        return Err(Error::NotProduct(format!("expected {} factors, got {}", layout.len(), parts.len())));
    }
    let mut acc: Vec<(Vec<CocharacterPair>, i64)> = vec![(Vec::new(), 1)];
    for part in parts {
        let mut next = Vec::new();
        for (prefix, c) in &acc {
            for (p, d) in part.iter() {
                let mut v = prefix.clone();
                v.push(p.clone());
                next.push((v, c * d));
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().map(|(v, c)| (join_pairs(&layout, &v), c)).collect())
}

/// Factor a sum on a product group into per-factor sums.
pub fn product_decompose(rd: &RootDatum, sum: &SignedPairSum) -> Result<Vec<SignedPairSum>> {
    let layout = factor_layout(rd)?;
    let Some((reference, c0)) = sum.iter().next().map(|(p, c)| (split_pair(&layout, p), c)) else {
        return Ok(vec![SignedPairSum::new(); layout.len()]);
    };
    let mut parts = vec![SignedPairSum::new(); layout.len()];
    for (p, c) in sum.iter() {
        let split = split_pair(&layout, p);
        for i in 0..layout.len() {
            let others_match = (0..layout.len()).all(|j| j == i || split[j] == reference[j]);
            if !others_match || parts[i].coeff(&split[i]) != 0 {
                continue;
            }
            let v = if i == 0 {
                c
            } else if c % c0 == 0 {
                c / c0
            } else {
                return Err(Error::NotProduct("coefficients do not factor".into()));
            };
            parts[i].add(split[i].clone(), v);
        }
    }
    if tensor(rd, &parts)? != *sum {
        return Err(Error::NotProduct("support is not of product form".into()));
    }
    Ok(parts)
}

/// `Rel^{G,μ}_{M_S,b}` for `S ⊆ S_b`.
pub fn rel_set(rd: &RootDatum, s: LeviSet, b: &IsocrystalClass, mu: &[i64]) -> Result<Vec<CocharacterPair>> {
    Ok(rel_set_in(&MantContext::new(rd, mu)?, s, b)?.into_iter().collect())
}

fn rel_set_in(ctx: &MantContext, s: LeviSet, b: &IsocrystalClass) -> Result<BTreeSet<CocharacterPair>> {
    require_contains(b.levi, s)?;
    let rd = &ctx.rd;
    let mut out = BTreeSet::new();
    for pb in ctx.fiber(b) {
        let target = pb.theta(rd);
        for m in dominant_conjugates(rd, pb.levi, s, &pb.mu) {
            if rd.theta(s, &m) == target {
                out.insert(CocharacterPair::new(s, m));
            }
        }
    }
    Ok(out)
}

/// Minimal coset representatives, as coordinate permutations `i ↦ w[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylCosets {
    /// `W^{M_S}`.
    pub left: Vec<Perm>,
    /// `W^{M_S,N_S}`.
    pub double: Vec<Perm>,
    /// Elements of `W^{M_S,N_S}` with `w(M_S) ⊆ N_S`.
    pub into_n: Vec<Perm>,
}

fn increasing_on(rd: &RootDatum, w: &[usize], s: LeviSet) -> bool {
    s.indices().iter().all(|&k| {
        let c = rd.root_coord(k);
        w[c] < w[c + 1]
    })
}

fn maps_into(rd: &RootDatum, w: &[usize], s: LeviSet, n: LeviSet) -> bool {
    rd.blocks(s).iter().all(|b| {
        let target = rd.block_of(n, w[b.start]);
        b.range().all(|c| target.range().contains(&w[c]))
    })
}

/// Image `w(S)` of a Levi set under `w`, if it is standard.
pub fn levi_image(rd: &RootDatum, w: &[usize], s: LeviSet) -> Option<LeviSet> {
    let mut out = LeviSet::empty();
    for b in rd.blocks(s) {
        let mut img: Vec<usize> = b.range().map(|c| w[c]).collect();
        img.sort_unstable();
        if img.windows(2).any(|p| p[1] != p[0] + 1) {
            return None;
        }
        for c in img[0]..img[img.len() - 1] {
            let k = (0..rd.num_roots()).find(|&k| rd.root_coord(k) == c)?;
            out = out.with(k);
        }
    }
    Some(out)
}

pub fn weyl_cosets(rd: &RootDatum, s: LeviSet, n: LeviSet) -> WeylCosets {
    let mut left = Vec::new();
    let mut double = Vec::new();
    let mut into_n = Vec::new();
    for w in rd.relative_weyl_group() {
        if !increasing_on(rd, &w, s) {
            continue;
        }
        left.push(w.clone());
        if !increasing_on(rd, &perm_inverse(&w), n) {
            continue;
        }
        double.push(w.clone());
        if maps_into(rd, &w, s, n) {
            into_n.push(w);
        }
    }
    WeylCosets { left, double, into_n }
}

/// The unique `(b, w)` with `w ∈ W^{M_S,M_b}` and `(w(M_S), w(μ_S))` in
/// `Rel^{G,μ}_{w(M_S),b}`.
pub fn unique_transfer(rd: &RootDatum, p: &CocharacterPair, mu: &[i64]) -> Result<(IsocrystalClass, Perm)> {
    p.validate(rd)?;
    if !rd.is_conjugate_in_levi(rd.delta(), &p.mu, mu) {
        return Err(Error::NotConjugate(format!("{:?} and {:?}", p.mu, mu)));
    }
    let theta = p.theta(rd);
    let mut w = vec![0; rd.rank()];
    for blk in rd.delta_blocks() {
        let mut order: Vec<usize> = blk.range().collect();
        order.sort_by(|&a, &b| theta[b].cmp(&theta[a]));
        for (pos, &src) in order.iter().enumerate() {
            w[src] = blk.start + pos;
        }
    }
    let x = perm_apply(&w, &theta);
    let s_b = LeviSet::from_indices(
        rd.delta().indices().into_iter().filter(|&k| x[rd.root_coord(k)] == x[rd.root_coord(k) + 1]),
    );
    let wmu = perm_apply(&w, &p.mu);
    let b = t_map(rd, &CocharacterPair::new(s_b, rd.dominant_rep(s_b, &wmu)))?;
    Ok((b, w))
}

/// Checks the bijection between pairs at `M_S` conjugate to `μ` and
/// `⨿_b ⨿_{w ∈ W_b} Rel^{G,μ}_{w(M_S),b}`.
pub fn verify_sumrel_bijection(rd: &RootDatum, s: LeviSet, mu: &[i64]) -> Result<bool> {
    let ctx = MantContext::new(rd, mu)?;
    let mut target: BTreeSet<(IsocrystalClass, Perm, CocharacterPair)> = BTreeSet::new();
    for b in &ctx.classes {
        for w in weyl_cosets(rd, s, b.levi).into_n {
            let Some(ws) = levi_image(rd, &w, s) else {
                return Ok(false);
            };
            for q in rel_set_in(&ctx, ws, b)? {
                target.insert((b.clone(), w.clone(), q));
            }
        }
    }
    let source = dominant_conjugates(rd, rd.delta(), s, &ctx.top.mu);
    let mut image = BTreeSet::new();
    for m in source.iter() {
        let p = CocharacterPair::new(s, m.clone());
        let (b, w) = unique_transfer(rd, &p, &ctx.top.mu)?;
        let Some(ws) = levi_image(rd, &w, s) else {
            return Ok(false);
        };
        let q = CocharacterPair::new(ws, perm_apply(&w, m));
        let t = (b, w, q);
        if !target.contains(&t) || !image.insert(t) {
            return Ok(false);
        }
    }
    Ok(image.len() == target.len())
}

/// A Galois orbit of pairs with the stabilizer of its first member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisOrbit {
    pub members: Vec<CocharacterPair>,
    /// Indices into `rd.gamma()`.
    pub stabilizer: Vec<usize>,
}

/// Indices of the diagram elements fixing the `G`-conjugacy class of `μ`.
pub fn reflex_subgroup(rd: &RootDatum, mu: &[i64]) -> Vec<usize> {
    let dom = rd.dominant_rep(rd.delta(), mu);
    (0..rd.gamma().len())
        .filter(|&g| rd.dominant_rep(rd.delta(), &rd.gamma()[g].apply_int(mu)) == dom)
        .collect()
}

pub fn act(rd: &RootDatum, g: usize, p: &CocharacterPair) -> CocharacterPair {
    let levi = rd.apply_gamma_levi(g, p.levi);
    CocharacterPair::new(levi, rd.dominant_rep(levi, &rd.gamma()[g].apply_int(&p.mu)))
}

/// Partition `pairs` into orbits of the subgroup `group` of `rd.gamma()`;
/// `None` if the set is not a union of orbits.
pub fn galois_orbit_partition(
    rd: &RootDatum,
    pairs: &[CocharacterPair],
    group: &[usize],
) -> Option<Vec<GaloisOrbit>> {
    let all: BTreeSet<&CocharacterPair> = pairs.iter().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in pairs {
        if seen.contains(p) {
            continue;
        }
        let mut members = BTreeSet::new();
        let mut stabilizer = Vec::new();
        for &g in group {
            let q = act(rd, g, p);
            if !all.contains(&q) {
                return None;
            }
            if q == *p {
                stabilizer.push(g);
            }
            members.insert(q);
        }
        seen.extend(members.iter().cloned());
        out.push(GaloisOrbit { members: members.into_iter().collect(), stabilizer });
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::rational::Q;

    fn gl(n: usize) -> RootDatum {
        build_root_datum(&GroupSpec::gl(n)).unwrap()
    }

    fn class(rd: &RootDatum, mu: &[i64], nu: &[(i64, i64)]) -> IsocrystalClass {
        let nu: Vec<Q> = nu.iter().map(|&(a, b)| q(a, b)).collect();
        enumerate_b(rd, mu).unwrap().into_iter().find(|c| c.newton == nu).unwrap()
    }

    fn pair(levi: &[usize], mu: &[i64]) -> CocharacterPair {
        CocharacterPair::new(LeviSet::from_indices(levi.iter().copied()), mu.to_vec())
    }

    #[test]
    fn basic_gl4_sum() {
        let rd = gl(4);
        let b = class(&rd, &[1, 1, 0, 0], &[(1, 2); 4]);
        let s = m_sum(&rd, &b, &[1, 1, 0, 0]).unwrap();
        assert_eq!(s.len(), 8);
        for (p, c) in s.iter() {
            let corank = 3 - p.levi.len();
            assert_eq!(c, if corank % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn nonbasic_r_set() {
        let rd = gl(4);
        let b = class(&rd, &[1, 1, 0, 0], &[(1, 1), (1, 2), (1, 2), (0, 1)]);
        let r = r_set(&rd, &b, &[1, 1, 0, 0]).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&pair(&[1], &[1, 1, 0, 0])));
        let torus = gl(2);
        let b = class(&torus, &[1, 0], &[(1, 1), (0, 1)]);
        assert_eq!(m_sum(&torus, &b, &[1, 0]).unwrap(), SignedPairSum::singleton(pair(&[], &[1, 0])));
    }

    #[test]
    fn sum_formula_examples() {
        assert!(verify_sum_formula(&gl(4), &[1, 1, 0, 0]).unwrap());
        assert!(verify_sum_formula(&gl(4), &[2, 2, 2, 2]).unwrap());
        let res = build_root_datum(&GroupSpec::res(2, 2)).unwrap();
        assert!(verify_sum_formula(&res, &[1, 0, 0, 0]).unwrap());
        assert!(verify_sign_cancellation(&gl(4), &[1, 1, 0, 0]).unwrap());
    }

    #[test]
    fn i_set_examples() {
        let rd = gl(4);
        let mu = [1, 1, 0, 0];
        let b = class(&rd, &mu, &[(1, 1), (1, 1), (0, 1), (0, 1)]);
        assert_eq!(i_set(&rd, LeviSet::from_indices([0, 2]), &b, &mu).unwrap(), vec![pair(&[0, 2], &mu)]);
        let basic = class(&rd, &mu, &[(1, 2); 4]);
        assert_eq!(i_set(&rd, rd.delta(), &basic, &mu).unwrap(), vec![pair(&[0, 1, 2], &mu)]);
        let b = class(&rd, &mu, &[(1, 1), (1, 2), (1, 2), (0, 1)]);
        assert_eq!(i_set(&rd, LeviSet::from_indices([1, 2]), &b, &mu).unwrap(), vec![pair(&[1, 2], &[1, 1, 0, 0])]);
        assert!(i_set(&rd, LeviSet::empty(), &b, &mu).is_err());
    }

    #[test]
    fn induction_examples() {
        let rd = gl(4);
        let mu = [1, 1, 0, 0];
        for b in enumerate_b(&rd, &mu).unwrap() {
            for s in rd.delta().subsets() {
                if b.levi.is_subset(s) {
                    assert!(verify_induction_formula(&rd, s, &b, &mu).unwrap(), "{b} {s}");
                    for s1 in rd.delta().subsets() {
                        if s.is_subset(s1) {
                            assert!(verify_i_transitivity(&rd, s, s1, &b, &mu).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn product_examples() {
        let rd = build_root_datum(&GroupSpec::product(&[(1, 2), (1, 2)])).unwrap();
        let mu = [1, 0, 1, 0];
        let basic = class(&rd, &mu, &[(1, 2); 4]);
        let s = m_sum(&rd, &basic, &mu).unwrap();
        assert_eq!(s.len(), 4);
        let parts = product_decompose(&rd, &s).unwrap();
        assert_eq!(parts.iter().map(|p| p.len()).collect::<Vec<_>>(), vec![2, 2]);
        let mixed = class(&rd, &mu, &[(1, 1), (0, 1), (1, 2), (1, 2)]);
        let parts = product_decompose(&rd, &m_sum(&rd, &mixed, &mu).unwrap()).unwrap();
        assert_eq!(parts.iter().map(|p| p.len()).collect::<Vec<_>>(), vec![1, 2]);
        let mut bad = SignedPairSum::singleton(pair(&[0, 1], &mu));
        bad.add(pair(&[], &mu), 1);
        assert!(product_decompose(&rd, &bad).is_err());
    }

    #[test]
    fn rel_set_examples() {
        let rd = gl(4);
        let mu = [1, 1, 0, 0];
        let basic = class(&rd, &mu, &[(1, 2); 4]);
        assert_eq!(rel_set(&rd, LeviSet::from_indices([0, 2]), &basic, &mu).unwrap(), vec![pair(&[0, 2], &[1, 0, 1, 0])]);
        let b = class(&rd, &mu, &[(2, 3), (2, 3), (2, 3), (0, 1)]);
        assert_eq!(rel_set(&rd, b.levi, &b, &mu).unwrap(), vec![pair(&[0, 1], &mu)]);
    }

    #[test]
    fn coset_examples() {
        let rd = gl(3);
        let c = weyl_cosets(&rd, LeviSet::from_indices([0]), LeviSet::from_indices([1]));
        assert_eq!(c.left.len(), 3);
        assert_eq!(weyl_cosets(&rd, rd.delta(), rd.delta()).left, vec![vec![0, 1, 2]]);
        let g4 = gl(4);
        assert_eq!(weyl_cosets(&g4, LeviSet::empty(), g4.delta()).left.len(), 24);
    }

    #[test]
    fn transfer_examples() {
        let rd = gl(4);
        let mu = [1, 1, 0, 0];
        let (b, w) = unique_transfer(&rd, &pair(&[0, 2], &[1, 0, 1, 0]), &mu).unwrap();
        assert!(b.is_basic(&rd));
        assert_eq!(w, vec![0, 1, 2, 3]);
        let (b, w) = unique_transfer(&rd, &pair(&[0, 2], &[0, 0, 1, 1]), &mu).unwrap();
        assert_eq!(b.newton, vec![q(1, 1), q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(w, vec![2, 3, 0, 1]);
        assert!(unique_transfer(&rd, &pair(&[0, 2], &[1, 0, 0, 0]), &mu).is_err());
    }

    #[test]
    fn sumrel_examples() {
        let rd = gl(4);
        assert!(verify_sumrel_bijection(&rd, LeviSet::from_indices([0, 2]), &[1, 1, 0, 0]).unwrap());
        assert!(verify_sumrel_bijection(&rd, rd.delta(), &[1, 1, 0, 0]).unwrap());
        assert!(verify_sumrel_bijection(&gl(3), LeviSet::empty(), &[1, 1, 0]).unwrap());
    }

    #[test]
    fn galois_examples() {
        let rd = gl(4);
        let ctx = MantContext::new(&rd, &[1, 1, 0, 0]).unwrap();
        let orbits = galois_orbit_partition(&rd, &ctx.poset.nodes, &[0]).unwrap();
        assert!(orbits.iter().all(|o| o.members.len() == 1));
        let res = build_root_datum(&GroupSpec::res(2, 3)).unwrap();
        let mut found_pair_orbit = false;
        for mu in [[1, 0, 0, 1, 0, 0], [1, 1, 0, 1, 1, 0], [1, 0, 0, 0, 0, 0]] {
            let group = reflex_subgroup(&res, &mu);
            let ctx = MantContext::new(&res, &mu).unwrap();
            for b in &ctx.classes {
                assert!(galois_orbit_partition(&res, &ctx.r_set(b), &group).is_some());
                for s in res.stable_levis() {
                    if !b.levi.is_subset(s) {
                        continue;
                    }
                    let is = i_set(&res, s, b, &mu).unwrap();
                    let orbits = galois_orbit_partition(&res, &is, &group).unwrap();
                    found_pair_orbit |= orbits.iter().any(|o| o.members.len() == 2 && o.stabilizer == vec![0]);
                }
            }
        }
        assert!(found_pair_orbit);
    }

    #[test]
    fn serde_roundtrip() {
        let rd = gl(4);
        let b = class(&rd, &[1, 1, 0, 0], &[(1, 2); 4]);
        let s = m_sum(&rd, &b, &[1, 1, 0, 0]).unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<SignedPairSum>(&js).unwrap(), s);
    }
}
