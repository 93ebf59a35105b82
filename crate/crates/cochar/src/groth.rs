//! Symbolic Grothendieck-group elements and the maps `[M_S, μ_S]` and
//! `Mant_{b,μ}` built from them.
//!
//! A representation is stored through its Jacquet vector: the multiset of
//! orderings of cuspidal lines (one sequence per relative `Δ`-block) read
//! off from the Jacquet module to the minimal Levi through which its
//! cuspidal support factors. For multiplicity-free supports the irreducible
//! constituents are the cells cut out by the relative order of linked
//! lines; otherwise only full parabolic inductions are modelled.

use crate::error::{Error, Result};
use crate::kottwitz::{b_transfer, IsocrystalClass};
use crate::mant_sum::{galois_orbit_partition, i_set, reflex_subgroup, rel_set, MantContext, SignedPairSum};
use crate::pair_poset::{dominant_conjugates, CocharacterPair};
use crate::rational::{fmt_q, qi, serde_q, zero, Q};
use crate::root_datum::{LeviSet, RootDatum};
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A supercuspidal `ρ|det|^twist` of some `GL_dim` over the factor's field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CuspidalLine {
    pub id: String,
    #[serde(with = "serde_q")]
    pub twist: Q,
    #[serde(default = "unit_dim")]
    pub dim: usize,
}

fn unit_dim() -> usize {
    1
}

impl CuspidalLine {
    pub fn new(id: &str, twist: Q, dim: usize) -> Self {
        CuspidalLine { id: id.to_string(), twist, dim }
    }

    pub fn shifted(&self, by: &Q) -> Self {
        CuspidalLine { id: self.id.clone(), twist: &self.twist + by, dim: self.dim }
    }

    fn linked_below(&self, hi: &CuspidalLine) -> bool {
        self.id == hi.id && self.dim == hi.dim && &hi.twist - &self.twist == Q::one()
    }
}

impl fmt::Display for CuspidalLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim == 1 {
            write!(f, "{}({})", self.id, fmt_q(&self.twist))
        } else {
            write!(f, "{}[{}]({})", self.id, self.dim, fmt_q(&self.twist))
        }
    }
}

/// One sequence of lines per block.
pub type Arrangement = Vec<Vec<CuspidalLine>>;
pub type JacquetVector = BTreeMap<Arrangement, i64>;

fn jadd(v: &mut JacquetVector, k: Arrangement, c: i64) {
    if c == 0 {
        return;
    }
    let e = v.entry(k.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        v.remove(&k);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Regular,
    Supercuspidal,
}

/// A block of a Levi in relative coordinates of one factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelBlock {
    pub factor: usize,
    pub start: usize,
    pub len: usize,
}

/// Blocks of `M_S` on the first embedding copy of each factor.
pub fn rel_blocks(rd: &RootDatum, s: LeviSet) -> Result<Vec<RelBlock>> {
    let factors = rd
        .factors()
        .ok_or_else(|| Error::Unsupported("representations need a factor decomposition".into()))?;
    let mut out = Vec::new();
    for b in rd.blocks(s) {
        for (fi, f) in factors.iter().enumerate() {
            if b.start >= f.offset && b.start < f.offset + f.rank {
                out.push(RelBlock { factor: fi, start: b.start - f.offset, len: b.len });
            }
        }
    }
    Ok(out)
}

fn abs_start(rd: &RootDatum, blk: &RelBlock, copy: usize) -> usize {
    let f = &rd.factors().expect("factor data")[blk.factor];
    f.offset + copy * f.rank + blk.start
}

fn degree(rd: &RootDatum, factor: usize) -> usize {
    rd.factors().expect("factor data")[factor].degree
}

/// For each block of `inner`, the index of the block of `outer` containing it.
fn containing(inner: &[RelBlock], outer: &[RelBlock]) -> Result<Vec<usize>> {
    inner
        .iter()
        .map(|i| {
            outer
                .iter()
                .position(|o| o.factor == i.factor && o.start <= i.start && i.start + i.len <= o.start + o.len)
                .ok_or_else(|| Error::LeviMismatch("block not contained in an outer block".into()))
        })
        .collect()
}

fn sorted(mut v: Vec<CuspidalLine>) -> Vec<CuspidalLine> {
    v.sort();
    v
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Distinct orderings of a multiset of lines.
pub fn arrangements(support: &[CuspidalLine]) -> Vec<Vec<CuspidalLine>> {
    let mut cur = sorted(support.to_vec());
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Number of labelled orderings collapsing onto one ordering of `support`.
fn labelled_multiplicity(support: &[CuspidalLine]) -> i64 {
    let s = sorted(support.to_vec());
    let mut out = 1;
    let mut i = 0;
    while i < s.len() {
        let j = (i..s.len()).find(|&j| s[j] != s[i]).unwrap_or(s.len());
        out *= factorial(j - i);
        i = j;
    }
    out
}

fn multiplicity_free(support: &[CuspidalLine]) -> bool {
    let s = sorted(support.to_vec());
    s.windows(2).all(|w| w[0] != w[1])
}

/// Linked pairs `(hi, lo)` of a sorted support, ordered by the higher twist
/// descending.
fn linked_pairs(support: &[CuspidalLine]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (lo, a) in support.iter().enumerate() {
        for (hi, b) in support.iter().enumerate() {
            if a.linked_below(b) {
                out.push((hi, lo));
            }
        }
    }
    out.sort_by(|x, y| {
        support[y.0]
            .twist
            .cmp(&support[x.0].twist)
            .then_with(|| support[x.0].id.cmp(&support[y.0].id))
    });
    out
}

fn cell_bits(support: &[CuspidalLine], pairs: &[(usize, usize)], seq: &[CuspidalLine]) -> Vec<bool> {
    let pos = |l: &CuspidalLine| seq.iter().position(|x| x == l).expect("line in ordering");
    pairs.iter().map(|&(hi, lo)| pos(&support[hi]) < pos(&support[lo])).collect()
}

/// An ordering realising the given orientation of the linked pairs.
fn cell_representative(support: &[CuspidalLine], pairs: &[(usize, usize)], bits: &[bool]) -> Vec<CuspidalLine> {
    let n = support.len();
    let mut indeg = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for (&(hi, lo), &b) in pairs.iter().zip(bits) {
        let (a, c) = if b { (hi, lo) } else { (lo, hi) };
        succ[a].push(c);
        indeg[c] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        out.push(support[i].clone());
        for &c in &succ[i] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.insert(c);
            }
        }
    }
    out
}

fn bit_vectors(k: usize) -> Vec<Vec<bool>> {
    (0..1u64 << k).map(|m| (0..k).map(|i| m >> (k - 1 - i) & 1 == 1).collect()).collect()
}

/// Constituent of a representation on a single block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BlockClass {
    /// Irreducible with multiplicity-free support, named by the orientation
    /// of its linked pairs.
    Cell { support: Vec<CuspidalLine>, bits: Vec<bool> },
    /// Full parabolic induction of the support.
    Induced { support: Vec<CuspidalLine> },
}

impl BlockClass {
    fn classify(seq: &[CuspidalLine]) -> BlockClass {
        let support = sorted(seq.to_vec());
        if multiplicity_free(&support) {
            let pairs = linked_pairs(&support);
            let bits = cell_bits(&support, &pairs, seq);
            BlockClass::Cell { support, bits }
        } else {
            BlockClass::Induced { support }
        }
    }

    pub fn support(&self) -> &[CuspidalLine] {
        match self {
            BlockClass::Cell { support, .. } | BlockClass::Induced { support } => support,
        }
    }

    /// Jacquet vector of the constituent.
    pub fn vector(&self) -> Vec<(Vec<CuspidalLine>, i64)> {
        match self {
            BlockClass::Cell { support, bits } => {
                let pairs = linked_pairs(support);
                arrangements(support)
                    .into_iter()
                    .filter(|o| cell_bits(support, &pairs, o) == *bits)
                    .map(|o| (o, 1))
                    .collect()
            }
            BlockClass::Induced { support } => {
                let m = labelled_multiplicity(support);
                arrangements(support).into_iter().map(|o| (o, m)).collect()
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            BlockClass::Cell { bits, .. } if !bits.is_empty() => {
                format!("[{}]", bits.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>())
            }
            _ => {
                let ls: Vec<String> = self.support().iter().map(|l| l.to_string()).collect();
                format!("I({})", ls.join(","))
            }
        }
    }
}

/// Irreducible (or fully induced) class, one constituent per block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepClass {
    pub blocks: Vec<BlockClass>,
}

impl RepClass {
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.label()).collect();
        parts.join(" x ")
    }

    pub fn vector(&self) -> JacquetVector {
        let mut acc: Vec<(Arrangement, i64)> = vec![(Vec::new(), 1)];
        for b in &self.blocks {
            let v = b.vector();
            acc = acc
                .into_iter()
                .flat_map(|(a, c)| {
                    v.iter().map(move |(o, d)| {
                        let mut a = a.clone();
                        a.push(o.clone());
                        (a, c * d)
                    })
                })
                .collect();
        }
        acc.into_iter().collect()
    }

    pub fn support(&self) -> Vec<Vec<CuspidalLine>> {
        self.blocks.iter().map(|b| b.support().to_vec()).collect()
    }
}

impl fmt::Display for RepClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A virtual representation of `G` given by its Jacquet vector over the
/// relative `Δ`-blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalRep {
    pub regime: Regime,
    pub vector: JacquetVector,
}

impl FormalRep {
    pub fn from_vector(rd: &RootDatum, regime: Regime, vector: JacquetVector) -> Result<Self> {
        let outer = rel_blocks(rd, rd.delta())?;
        for o in vector.keys() {
            check_shape(o, &outer)?;
            if regime == Regime::Regular && !o.iter().all(|s| multiplicity_free(s)) {
                return Err(Error::InvalidInput("regular support must be multiplicity-free".into()));
            }
        }
        let rep = FormalRep { regime, vector };
        decompose(&rep.vector)?;
        Ok(rep)
    }

    /// The irreducible with the given support and orientation on each block.
    pub fn cell(rd: &RootDatum, support: &[Vec<CuspidalLine>], bits: &[Vec<bool>]) -> Result<Self> {
        let blocks = support
            .iter()
            .zip(bits)
            .map(|(s, b)| {
                let s = sorted(s.clone());
                if !multiplicity_free(&s) {
                    return Err(Error::InvalidInput("cell support must be multiplicity-free".into()));
                }
                if linked_pairs(&s).len() != b.len() {
                    return Err(Error::InvalidInput(format!(
                        "support has {} linked pairs, got {} bits",
                        linked_pairs(&s).len(),
                        b.len()
                    )));
                }
                Ok(BlockClass::Cell { support: s, bits: b.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        if blocks.len() != support.len() || support.len() != bits.len() {
            return Err(Error::InvalidInput("one support and one bit list per block".into()));
        }
        FormalRep::from_vector(rd, Regime::Regular, RepClass { blocks }.vector())
    }

    /// Cuspidal support, one sorted multiset per block.
    pub fn ll_ss(&self) -> Vec<Vec<CuspidalLine>> {
        match self.vector.keys().next() {
            Some(o) => o.iter().map(|s| sorted(s.clone())).collect(),
            None => Vec::new(),
        }
    }

    pub fn classes(&self) -> Result<Vec<(RepClass, i64)>> {
        decompose(&self.vector)
    }
}

fn check_shape(o: &Arrangement, blocks: &[RelBlock]) -> Result<()> {
    if o.len() != blocks.len() {
        return Err(Error::InvalidInput(format!("expected {} blocks, got {}", blocks.len(), o.len())));
    }
    for (seq, b) in o.iter().zip(blocks) {
        let d: usize = seq.iter().map(|l| l.dim).sum();
        if d != b.len || seq.iter().any(|l| l.dim == 0) {
            return Err(Error::InvalidInput(format!("lines of total rank {d} on a block of rank {}", b.len)));
        }
    }
    Ok(())
}

/// A supercuspidal representation of `M_S`: one line per relative block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Supercuspidal {
    pub levi: LeviSet,
    pub lines: Vec<CuspidalLine>,
}

impl Supercuspidal {
    /// `I^G_{M_S}(ρ)` in the datum `rd`.
    pub fn induce(&self, rd: &RootDatum) -> Result<FormalRep> {
        rd.check_levi(self.levi)?;
        let inner = rel_blocks(rd, self.levi)?;
        let arr: Arrangement = self.lines.iter().map(|l| vec![l.clone()]).collect();
        check_shape(&arr, &inner)?;
        let vector = induce(rd, self.levi, &BTreeMap::from([(arr, 1)]))?;
        Ok(FormalRep { regime: Regime::Supercuspidal, vector })
    }
}

/// Split every ordering of `v` along the blocks of `M_S`; orderings that do
/// not fit are dropped. This is the normalized Jacquet module to `M_S`.
pub fn jacquet(rd: &RootDatum, v: &JacquetVector, s: LeviSet) -> Result<JacquetVector> {
    rd.check_levi(s)?;
    let outer = rel_blocks(rd, rd.delta())?;
    let inner = rel_blocks(rd, s)?;
    let within = containing(&inner, &outer)?;
    let mut out = JacquetVector::new();
    'next: for (o, &a) in v {
        let mut parts: Arrangement = Vec::with_capacity(inner.len());
        for (d, seq) in o.iter().enumerate() {
            let mut it = seq.iter();
            for (j, blk) in inner.iter().enumerate() {
                if within[j] != d {
                    continue;
                }
                let mut part = Vec::new();
                let mut filled = 0;
                while filled < blk.len {
                    match it.next() {
                        Some(l) => {
                            filled += l.dim;
                            part.push(l.clone());
                        }
                        None => continue 'next,
                    }
                }
                if filled != blk.len {
                    continue 'next;
                }
                parts.push(part);
            }
        }
        jadd(&mut out, parts, a);
    }
    Ok(out)
}

fn interleavings(seqs: &[Vec<CuspidalLine>]) -> Vec<Vec<CuspidalLine>> {
    fn go(seqs: &[Vec<CuspidalLine>], pos: &mut Vec<usize>, cur: &mut Vec<CuspidalLine>, out: &mut Vec<Vec<CuspidalLine>>) {
        let mut done = true;
        for i in 0..seqs.len() {
            if pos[i] < seqs[i].len() {
                done = false;
                cur.push(seqs[i][pos[i]].clone());
                pos[i] += 1;
                go(seqs, pos, cur, out);
                pos[i] -= 1;
                cur.pop();
            }
        }
        if done {
            out.push(cur.clone());
        }
    }
    let mut out = Vec::new();
    go(seqs, &mut vec![0; seqs.len()], &mut Vec::new(), &mut out);
    out
}

/// Normalized parabolic induction from `M_S` to the active group.
pub fn induce(rd: &RootDatum, s: LeviSet, v: &JacquetVector) -> Result<JacquetVector> {
    rd.check_levi(s)?;
    let outer = rel_blocks(rd, rd.delta())?;
    let inner = rel_blocks(rd, s)?;
    let within = containing(&inner, &outer)?;
    let mut out = JacquetVector::new();
    for (o, &a) in v {
        check_shape(o, &inner)?;
        let mut acc: Vec<Arrangement> = vec![Vec::new()];
        for d in 0..outer.len() {
            let seqs: Vec<Vec<CuspidalLine>> = (0..inner.len()).filter(|&j| within[j] == d).map(|j| o[j].clone()).collect();
            let shuffles = interleavings(&seqs);
            acc = acc
                .into_iter()
                .flat_map(|a| {
                    shuffles.iter().map(move |x| {
                        let mut a = a.clone();
                        a.push(x.clone());
                        a
                    })
                })
                .collect();
        }
        for x in acc {
            jadd(&mut out, x, a);
        }
    }
    Ok(out)
}

/// Write a Jacquet vector as a combination of classes, checking that every
/// class occurs with one coefficient across all of its orderings.
pub fn decompose(v: &JacquetVector) -> Result<Vec<(RepClass, i64)>> {
    let mut by_support: BTreeMap<Vec<Vec<CuspidalLine>>, Vec<(&Arrangement, i64)>> = BTreeMap::new();
    for (o, &a) in v {
        let sup: Vec<Vec<CuspidalLine>> = o.iter().map(|s| sorted(s.clone())).collect();
        by_support.entry(sup).or_default().push((o, a));
    }
    let mut out = Vec::new();
    for (sup, entries) in by_support {
        let norm: i64 = sup.iter().filter(|s| !multiplicity_free(s)).map(|s| labelled_multiplicity(s)).product();
        // class -> (coefficient, orderings seen)
        let mut seen: BTreeMap<RepClass, (i64, usize)> = BTreeMap::new();
        for (o, a) in entries {
            if a % norm != 0 {
                return Err(Error::Regroup(format!("coefficient {a} not divisible by {norm}")));
            }
            let cls = RepClass { blocks: o.iter().map(|s| BlockClass::classify(s)).collect() };
            let e = seen.entry(cls).or_insert((a / norm, 0));
            if e.0 != a / norm {
                return Err(Error::Regroup("coefficients differ within one class".into()));
            }
            e.1 += 1;
        }
        let sizes: Vec<BTreeMap<BlockClass, usize>> = sup
            .iter()
            .map(|s| {
                let mut m = BTreeMap::new();
                for o in arrangements(s) {
                    *m.entry(BlockClass::classify(&o)).or_insert(0) += 1;
                }
                m
            })
            .collect();
        for (cls, (c, count)) in seen {
            let size: usize = cls.blocks.iter().zip(&sizes).map(|(b, m)| m[b]).product();
            if size != count {
                return Err(Error::Regroup(format!("class {} is only partly present", cls.label())));
            }
            out.push((cls, c));
        }
    }
    Ok(out)
}

/// Classes of `I^G_{M_S}` applied to an `M_S` vector whose blocks all have
/// the same supports. Multiplicity-free supports are read off one ordering
/// per class; otherwise the induced vector is built and decomposed.
fn induced_classes(rd: &RootDatum, s: LeviSet, v: &JacquetVector) -> Result<Vec<(RepClass, i64)>> {
    let Some(first) = v.keys().next() else { return Ok(Vec::new()) };
    let outer = rel_blocks(rd, rd.delta())?;
    let inner = rel_blocks(rd, s)?;
    let within = containing(&inner, &outer)?;
    let outer_support: Vec<Vec<CuspidalLine>> = (0..outer.len())
        .map(|d| sorted((0..inner.len()).filter(|&j| within[j] == d).flat_map(|j| first[j].clone()).collect()))
        .collect();
    if !outer_support.iter().all(|x| multiplicity_free(x)) {
        return decompose(&induce(rd, s, v)?);
    }
    let inner_sets: Vec<BTreeSet<&CuspidalLine>> = first.iter().map(|x| x.iter().collect()).collect();
    let pairs: Vec<Vec<(usize, usize)>> = outer_support.iter().map(|x| linked_pairs(x)).collect();
    let choices: Vec<Vec<Vec<bool>>> = pairs.iter().map(|p| bit_vectors(p.len())).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; outer.len()];
    loop {
        let reps: Vec<Vec<CuspidalLine>> = (0..outer.len())
            .map(|d| cell_representative(&outer_support[d], &pairs[d], &choices[d][idx[d]]))
            .collect();
        let proj: Arrangement = (0..inner.len())
            .map(|j| reps[within[j]].iter().filter(|l| inner_sets[j].contains(l)).cloned().collect())
            .collect();
        if let Some(&c) = v.get(&proj) {
            let blocks = (0..outer.len())
                .map(|d| BlockClass::Cell { support: outer_support[d].clone(), bits: choices[d][idx[d]].clone() })
                .collect();
            out.push((RepClass { blocks }, c));
        }
        let mut k = 0;
        loop {
            if k == outer.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `r_{-λ}` applied to the Langlands parameter of one line on one embedding
/// copy of a factor. `weights` is `λ`, dominant, of length `dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaloisPiece {
    pub factor: usize,
    pub copy: usize,
    pub id: String,
    pub weights: Vec<i64>,
}

impl GaloisPiece {
    fn render(&self, show_copy: bool) -> String {
        let base = format!("LL({})", self.id);
        let core = if self.weights.iter().all(|&w| w == 0 || w == 1) {
            let k = self.weights.iter().filter(|&&w| w == 1).count();
            if k == 1 {
                format!("{base}^∨")
            } else {
                format!("Λ^{k}{base}^∨")
            }
        } else {
            let w: Vec<String> = self.weights.iter().map(|x| x.to_string()).collect();
            format!("r_-({}){base}", w.join(","))
        };
        if show_copy {
            format!("{core}@{}.{}", self.factor, self.copy)
        } else {
            core
        }
    }
}

/// A representation of the reflex Weil group: the tensor product of the
/// pieces twisted by `|·|^tate`, induced from the subgroup `field` of the
/// diagram group across an orbit of `orbit_size` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaloisSymbol {
    pub pieces: Vec<GaloisPiece>,
    #[serde(with = "serde_q")]
    pub tate: Q,
    pub field: Vec<usize>,
    pub orbit_size: usize,
}

impl GaloisSymbol {
    pub fn render(&self, show_copy: bool) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.pieces.len() {
            let j = (i..self.pieces.len()).find(|&j| self.pieces[j] != self.pieces[i]).unwrap_or(self.pieces.len());
            let p = self.pieces[i].render(show_copy);
            parts.push(if j - i > 1 { format!("{p}^{}", j - i) } else { p });
            i = j;
        }
        let body = if parts.is_empty() { "1".to_string() } else { parts.join("⊗") };
        let core = format!("{body}({})", fmt_q(&self.tate));
        if self.orbit_size > 1 {
            format!("Ind[{}]{core}", self.orbit_size)
        } else {
            core
        }
    }
}

/// Integer combination of `class ⊗ symbol` terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvalResult {
    pub terms: BTreeMap<(RepClass, GaloisSymbol), i64>,
}

impl EvalResult {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, class: RepClass, symbol: GaloisSymbol, c: i64) {
        if c == 0 {
            return;
        }
        let key = (class, symbol);
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add_result(&mut self, other: &EvalResult, scale: i64) {
        for ((c, s), &k) in &other.terms {
            self.add(c.clone(), s.clone(), k * scale);
        }
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

    pub fn iter(&self) -> impl Iterator<Item = (&RepClass, &GaloisSymbol, i64)> {
        self.terms.iter().map(|((c, s), &k)| (c, s, k))
    }

    pub fn render(&self, rd: &RootDatum) -> String {
        let show_copy = rd.gamma().len() > 1;
        if self.is_zero() {
            return "0".to_string();
        }
        self.iter()
            .map(|(c, s, k)| format!("{}{k} {} {}", if k > 0 { "+" } else { "" }, c.label(), s.render(show_copy)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn act_piece(rd: &RootDatum, g: usize, p: &GaloisPiece) -> GaloisPiece {
    let f = &rd.factors().expect("factor data")[p.factor];
    let image = rd.gamma()[g].perm[f.offset + p.copy * f.rank];
    GaloisPiece { copy: (image - f.offset) / f.rank, ..p.clone() }
}

fn sorted_pieces(mut v: Vec<GaloisPiece>) -> Vec<GaloisPiece> {
    v.sort();
    v
}

fn canonical_pieces(rd: &RootDatum, group: &[usize], pieces: &[GaloisPiece]) -> Vec<GaloisPiece> {
    group
        .iter()
        .map(|&g| sorted_pieces(pieces.iter().map(|p| act_piece(rd, g, p)).collect()))
        .min()
        .unwrap_or_else(|| sorted_pieces(pieces.to_vec()))
}

fn pair_q(v: &[Q], mu: &[i64]) -> Q {
    v.iter().zip(mu).fold(zero(), |a, (r, &m)| a + r * qi(m))
}

/// Galois factor of one block on one copy: `r_{-λ}` of the sum of the
/// parameters of its lines, split over the lines. Returns pieces with the
/// twist `-Σ |λ_j| (t_j + shift)`.
fn block_pieces(
    factor: usize,
    copy: usize,
    lines: &[CuspidalLine],
    weights: &[i64],
    shift: &Q,
) -> Result<Vec<(Vec<GaloisPiece>, Q)>> {
    if weights.iter().all(|&w| w == 0) {
        return Ok(vec![(Vec::new(), zero())]);
    }
    let piece = |l: &CuspidalLine, w: Vec<i64>| {
        let size: i64 = w.iter().sum();
        let t = -(qi(size) * (&l.twist + shift));
        (GaloisPiece { factor, copy, id: l.id.clone(), weights: w }, t)
    };
    if lines.len() == 1 {
        let (p, t) = piece(&lines[0], weights.to_vec());
        return Ok(vec![(vec![p], t)]);
    }
    let a = *weights.iter().min().expect("nonempty block");
    if weights.iter().any(|&w| w != a && w != a + 1) {
        return Err(Error::NonMinuscule(format!("{weights:?} on a block with {} lines", lines.len())));
    }
    let k = weights.iter().filter(|&&w| w == a + 1).count();
    let mut out = Vec::new();
    let mut split = vec![0usize; lines.len()];
    fn go(
        i: usize,
        left: usize,
        lines: &[CuspidalLine],
        split: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if i == lines.len() {
            if left == 0 {
                emit(split);
            }
            return;
        }
        for ki in 0..=left.min(lines[i].dim) {
            split[i] = ki;
            go(i + 1, left - ki, lines, split, emit);
        }
        split[i] = 0;
    }
    go(0, k, lines, &mut split, &mut |ks| {
        let mut pieces = Vec::new();
        let mut tate = zero();
        for (l, &kj) in lines.iter().zip(ks) {
            let mut w = vec![a + 1; kj];
            w.extend(std::iter::repeat_n(a, l.dim - kj));
            if w.iter().all(|&x| x == 0) {
                continue;
            }
            let (p, t) = piece(l, w);
            pieces.push(p);
            tate += t;
        }
        out.push((pieces, tate));
    });
    Ok(out)
}

/// Galois factors for `μ_S` on the blocks of `M_S` carrying the given
/// supports, each block shifted by `shifts[j]`.
fn galois_terms(
    rd: &RootDatum,
    s: LeviSet,
    mu_s: &[i64],
    supports: &[Vec<CuspidalLine>],
    shifts: &[Q],
) -> Result<Vec<(Vec<GaloisPiece>, Q)>> {
    let inner = rel_blocks(rd, s)?;
    let mut acc: Vec<(Vec<GaloisPiece>, Q)> = vec![(Vec::new(), zero())];
    for (j, blk) in inner.iter().enumerate() {
        for copy in 0..degree(rd, blk.factor) {
            let st = abs_start(rd, blk, copy);
            let w = &mu_s[st..st + blk.len];
            let opts = block_pieces(blk.factor, copy, &supports[j], w, &shifts[j])?;
            acc = acc
                .into_iter()
                .flat_map(|(p, t)| {
                    opts.iter().map(move |(q, u)| {
                        let mut p = p.clone();
                        p.extend(q.iter().cloned());
                        (p, &t + u)
                    })
                })
                .collect();
        }
    }
    Ok(acc.into_iter().map(|(p, t)| (sorted_pieces(p), t)).collect())
}

/// `r_{-μ_S} ∘ LL` on a representation of `M_S` with the given block
/// supports, twisted by `|·|^{-<ρ_{M_S}, μ_S>}`.
pub fn galois_apply(
    rd: &RootDatum,
    s: LeviSet,
    mu_s: &[i64],
    supports: &[Vec<CuspidalLine>],
) -> Result<Vec<(Vec<GaloisPiece>, Q)>> {
    rd.check_cocharacter(mu_s)?;
    let inner = rel_blocks(rd, s)?;
    if supports.len() != inner.len() {
        return Err(Error::InvalidInput(format!("expected {} block supports", inner.len())));
    }
    let base = -rd.rho_pairing(mu_s, s);
    let shifts = vec![zero(); inner.len()];
    Ok(galois_terms(rd, s, mu_s, supports, &shifts)?.into_iter().map(|(p, t)| (p, &base + t)).collect())
}

/// Pairs `(M_S, μ_S)` with `μ_S ∼_G μ` for a minuscule `μ`.
pub fn branch_minuscule(rd: &RootDatum, s: LeviSet, mu: &[i64]) -> Result<Vec<CocharacterPair>> {
    rd.check_cocharacter(mu)?;
    rd.check_levi(s)?;
    let lo = *mu.iter().min().unwrap_or(&0);
    if mu.iter().any(|&m| m != lo && m != lo + 1) {
        return Err(Error::NonMinuscule(format!("{mu:?}")));
    }
    let dom = rd.dominant_rep(rd.delta(), mu);
    Ok(dominant_conjugates(rd, rd.delta(), s, &dom).into_iter().map(|m| CocharacterPair::new(s, m)).collect())
}

type RawTerm = (RepClass, Vec<GaloisPiece>, Q, i64);

fn bracket_raw(rd: &RootDatum, p: &CocharacterPair, rep: &FormalRep, mu: &[i64]) -> Result<Vec<RawTerm>> {
    p.validate(rd)?;
    rd.check_cocharacter(mu)?;
    if !rd.is_conjugate_in_levi(rd.delta(), &p.mu, mu) {
        return Err(Error::NotConjugate(format!("{:?} and {mu:?}", p.mu)));
    }
    let inner = rel_blocks(rd, p.levi)?;
    let rho_g = rd.rho().to_vec();
    let rho_m = rd.rho_vector(p.levi);
    let structural = pair_q(&rho_g, &p.mu) - pair_q(&rho_m, &p.mu) - pair_q(&rho_g, mu);
    let shifts: Vec<Q> = inner
        .iter()
        .map(|b| {
            let c = abs_start(rd, b, 0);
            &rho_g[c] - &rho_m[c]
        })
        .collect();
    let mut check = structural.clone();
    for (j, b) in inner.iter().enumerate() {
        for copy in 0..degree(rd, b.factor) {
            let st = abs_start(rd, b, copy);
            let size: i64 = p.mu[st..st + b.len].iter().sum();
            check -= qi(size) * &shifts[j];
        }
    }
    assert_eq!(check, -pair_q(&rho_g, mu), "modulus shifts must cancel against the pair twist");

    let jv = jacquet(rd, &rep.vector, p.levi)?;
    let mut groups: BTreeMap<Vec<Vec<CuspidalLine>>, JacquetVector> = BTreeMap::new();
    for (o, a) in jv {
        let key: Vec<Vec<CuspidalLine>> = o.iter().map(|x| sorted(x.clone())).collect();
        groups.entry(key).or_default().insert(o, a);
    }
    let mut out = Vec::new();
    for (key, v) in groups {
        let classes = induced_classes(rd, p.levi, &v)?;
        if classes.is_empty() {
            continue;
        }
        let galois = galois_terms(rd, p.levi, &p.mu, &key, &shifts)?;
        for (cls, c) in &classes {
            for (pieces, t) in &galois {
                out.push((cls.clone(), pieces.clone(), &structural + t, *c));
            }
        }
    }
    Ok(out)
}

fn stabilizer_in(rd: &RootDatum, group: &[usize], p: &CocharacterPair) -> Vec<usize> {
    group.iter().copied().filter(|&g| crate::mant_sum::act(rd, g, p) == *p).collect()
}

/// `[M_S, μ_S]` applied to `rep`, for the pair `p` and `μ ∼_G μ_S`.
pub fn bracket(rd: &RootDatum, p: &CocharacterPair, rep: &FormalRep, mu: &[i64]) -> Result<EvalResult> {
    let group = reflex_subgroup(rd, mu);
    let field = stabilizer_in(rd, &group, p);
    let mut out = EvalResult::new();
    for (cls, pieces, tate, c) in bracket_raw(rd, p, rep, mu)? {
        let sym = GaloisSymbol { pieces: canonical_pieces(rd, &group, &pieces), tate, field: field.clone(), orbit_size: 1 };
        out.add(cls, sym, c);
    }
    Ok(out)
}

/// Evaluate a signed pair sum, one bracket per Galois orbit of pairs.
pub fn evaluate_sum(rd: &RootDatum, sum: &SignedPairSum, mu: &[i64], rep: &FormalRep) -> Result<EvalResult> {
    let group = reflex_subgroup(rd, mu);
    let pairs: Vec<CocharacterPair> = sum.iter().map(|(p, _)| p.clone()).collect();
    let orbits = galois_orbit_partition(rd, &pairs, &group)
        .ok_or_else(|| Error::Unsupported("pair sum is not a union of Galois orbits".into()))?;
    let mut out = EvalResult::new();
    for orbit in orbits {
        let p = &orbit.members[0];
        let sign = sum.coeff(p);
        if orbit.members.iter().any(|q| sum.coeff(q) != sign) {
            return Err(Error::Unsupported("coefficients vary along a Galois orbit".into()));
        }
        for (cls, pieces, tate, c) in bracket_raw(rd, p, rep, mu)? {
            let sym = GaloisSymbol {
                pieces: canonical_pieces(rd, &group, &pieces),
                tate,
                field: orbit.stabilizer.clone(),
                orbit_size: orbit.members.len(),
            };
            out.add(cls, sym, sign * c);
        }
    }
    Ok(out)
}

/// Evaluate a signed pair sum restricted to the Weil group of the
/// splitting field: every pair is bracketed on its own and no Galois
/// structure is kept.
pub fn evaluate_sum_flat(rd: &RootDatum, sum: &SignedPairSum, mu: &[i64], rep: &FormalRep) -> Result<EvalResult> {
    let mut out = EvalResult::new();
    for (p, sign) in sum.iter() {
        for (cls, pieces, tate, c) in bracket_raw(rd, p, rep, mu)? {
            out.add(cls, GaloisSymbol { pieces, tate, field: vec![0], orbit_size: 1 }, sign * c);
        }
    }
    Ok(out)
}

/// `Mant_{b,μ}` on a symbolic representation.
pub fn evaluate_m(rd: &RootDatum, b: &IsocrystalClass, mu: &[i64], rep: &FormalRep) -> Result<EvalResult> {
    let ctx = MantContext::new(rd, mu)?;
    evaluate_sum(rd, &ctx.m_sum(b), mu, rep)
}

pub fn evaluate_m_flat(rd: &RootDatum, b: &IsocrystalClass, mu: &[i64], rep: &FormalRep) -> Result<EvalResult> {
    let ctx = MantContext::new(rd, mu)?;
    evaluate_sum_flat(rd, &ctx.m_sum(b), mu, rep)
}

/// Both sides of the Harris-Viehmann identity for `I^G_{M_S}(ρ)` with `ρ`
/// supercuspidal on `M_S` and `M_S ⊆ M_b`. With `flat` both sides are
/// restricted to the Weil group of the splitting field.
pub fn harris_sides(
    rd: &RootDatum,
    s: LeviSet,
    b: &IsocrystalClass,
    mu: &[i64],
    rho: &Supercuspidal,
    flat: bool,
) -> Result<(EvalResult, EvalResult)> {
    if rho.levi != s {
        return Err(Error::LeviMismatch("ρ must live on M_S".into()));
    }
    if !s.is_subset(b.levi) {
        return Err(Error::LeviMismatch(format!("{s} is not contained in {}", b.levi)));
    }
    let full = rho.induce(rd)?;
    let group = reflex_subgroup(rd, mu);
    let base = -pair_q(rd.rho(), mu);

    let mut rhs = EvalResult::new();
    let classes = decompose(&full.vector)?;
    let rel = rel_set(rd, s, b, mu)?;
    let orbits = galois_orbit_partition(rd, &rel, &group)
        .ok_or_else(|| Error::Unsupported("relevant set is not Galois-stable".into()))?;
    let supports: Vec<Vec<CuspidalLine>> = rho.lines.iter().map(|l| vec![l.clone()]).collect();
    let no_shift = vec![zero(); rho.lines.len()];
    let reps: Vec<(CocharacterPair, Vec<usize>, usize)> = if flat {
        rel.iter().map(|p| (p.clone(), vec![0], 1)).collect()
    } else {
        orbits.into_iter().map(|o| (o.members[0].clone(), o.stabilizer, o.members.len())).collect()
    };
    for (p, field, orbit_size) in reps {
        for (pieces, t) in galois_terms(rd, s, &p.mu, &supports, &no_shift)? {
            let pieces = if flat { pieces } else { canonical_pieces(rd, &group, &pieces) };
            let sym = GaloisSymbol { pieces, tate: &base + t, field: field.clone(), orbit_size };
            for (cls, c) in &classes {
                rhs.add(cls.clone(), sym.clone(), *c);
            }
        }
    }

    let eval = if flat { evaluate_m_flat } else { evaluate_m };
    let lhs = if b.is_basic(rd) {
        eval(rd, b, mu, &full)?
    } else {
        let mut lhs = EvalResult::new();
        let (sub, b_sub) = b_transfer(rd, b, b.levi)?;
        let rho_g = rd.rho();
        let rho_b = rd.rho_vector(b.levi);
        let modulus = |blk: &RelBlock| {
            let c = abs_start(rd, blk, 0);
            &rho_g[c] - &rho_b[c]
        };
        let lines = rho
            .lines
            .iter()
            .zip(rel_blocks(rd, s)?)
            .map(|(l, blk)| l.shifted(&modulus(&blk)))
            .collect();
        let twisted = Supercuspidal { levi: s, lines }.induce(&sub)?;
        let b_blocks = rel_blocks(rd, b.levi)?;
        for pb in i_set(rd, b.levi, b, mu)? {
            let extra = pair_q(rho_g, &pb.mu) - pair_q(rho_g, mu);
            let inner = eval(&sub, &b_sub, &pb.mu, &twisted)?;
            for (cls, sym, c) in inner.iter() {
                let mut v = JacquetVector::new();
                for (o, k) in cls.vector() {
                    let back: Arrangement = o
                        .iter()
                        .zip(&b_blocks)
                        .map(|(seq, blk)| {
                            let m = -modulus(blk);
                            seq.iter().map(|l| l.shifted(&m)).collect()
                        })
                        .collect();
                    jadd(&mut v, back, k);
                }
                let sym = GaloisSymbol { tate: &sym.tate + &extra, ..sym.clone() };
                for (g_cls, gc) in decompose(&induce(rd, b.levi, &v)?)? {
                    lhs.add(g_cls, sym.clone(), c * gc);
                }
            }
        }
        lhs
    };
    Ok((lhs, rhs))
}

/// Check the Harris-Viehmann identity. Split groups compare full symbols;
/// otherwise both sides are compared after restriction to the splitting
/// field.
pub fn check_harris(rd: &RootDatum, s: LeviSet, b: &IsocrystalClass, mu: &[i64], rho: &Supercuspidal) -> Result<bool> {
    let (lhs, rhs) = harris_sides(rd, s, b, mu, rho, rd.gamma().len() > 1)?;
    Ok(lhs == rhs)
}

/// `Σ_b Mant_{b,μ}(rep)` against `[G, μ](rep)`.
pub fn check_mant_total(rd: &RootDatum, mu: &[i64], rep: &FormalRep) -> Result<bool> {
    let ctx = MantContext::new(rd, mu)?;
    let flat = rd.gamma().len() > 1;
    let mut total = EvalResult::new();
    for b in &ctx.classes {
        let sum = ctx.m_sum(b);
        total.add_result(&if flat { evaluate_sum_flat(rd, &sum, mu, rep)? } else { evaluate_sum(rd, &sum, mu, rep)? }, 1);
    }
    let top = SignedPairSum::singleton(ctx.top.clone());
    let top = if flat { evaluate_sum_flat(rd, &top, mu, rep)? } else { bracket(rd, &ctx.top, rep, mu)? };
    Ok(total == top)
}

/// JSON description of a representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RepSpec {
    Fixture(String),
    Supercuspidal {
        regime: Regime,
        levi: LeviSet,
        lines: Vec<CuspidalLine>,
    },
    Cells {
        regime: Regime,
        support: Vec<Vec<CuspidalLine>>,
        cells: Vec<CellSpec>,
    },
    Vector {
        regime: Regime,
        vector: Vec<VectorEntry>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellSpec {
    pub bits: Vec<Vec<bool>>,
    #[serde(default = "unit_coeff")]
    pub coeff: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorEntry {
    pub arrangement: Arrangement,
    pub coeff: i64,
}

fn unit_coeff() -> i64 {
    1
}

impl RepSpec {
    pub fn to_rep(&self, rd: &RootDatum) -> Result<FormalRep> {
        match self {
            RepSpec::Fixture(name) => gl4_fixture::rep_by_name(rd, name),
            RepSpec::Supercuspidal { regime, levi, lines } => {
                if *regime != Regime::Supercuspidal {
                    return Err(Error::InvalidInput("levi and lines describe a supercuspidal datum".into()));
                }
                Supercuspidal { levi: *levi, lines: lines.clone() }.induce(rd)
            }
            RepSpec::Cells { regime, support, cells } => {
                if *regime != Regime::Regular {
                    return Err(Error::InvalidInput("cells need the regular regime".into()));
                }
                let mut v = JacquetVector::new();
                for c in cells {
                    for (o, k) in FormalRep::cell(rd, support, &c.bits)?.vector {
                        jadd(&mut v, o, k * c.coeff);
                    }
                }
                FormalRep::from_vector(rd, Regime::Regular, v)
            }
            RepSpec::Vector { regime, vector } => {
                let mut v = JacquetVector::new();
                for e in vector {
                    jadd(&mut v, e.arrangement.clone(), e.coeff);
                }
                FormalRep::from_vector(rd, *regime, v)
            }
        }
    }
}

pub fn parse_rep(rd: &RootDatum, text: &str) -> Result<FormalRep> {
    let trimmed = text.trim();
    let spec: RepSpec = if trimmed.starts_with('{') || trimmed.starts_with('"') {
        serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        RepSpec::Fixture(trimmed.to_string())
    };
    spec.to_rep(rd)
}

impl Serialize for EvalResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            class: &'a RepClass,
            label: String,
            symbol: &'a GaloisSymbol,
            coeff: i64,
        }
        s.collect_seq(self.iter().map(|(class, symbol, coeff)| Term { class, label: class.label(), symbol, coeff }))
    }
}

impl Serialize for FormalRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let vector: Vec<VectorEntry> =
            self.vector.iter().map(|(o, &c)| VectorEntry { arrangement: o.clone(), coeff: c }).collect();
        let mut st = s.serialize_struct("FormalRep", 2)?;
        st.serialize_field("regime", &self.regime)?;
        st.serialize_field("vector", &vector)?;
        st.end()
    }
}

/// The `GL_4` example with cuspidal support `ρ(0), …, ρ(3)`.
pub mod gl4_fixture {
    use super::*;
    use crate::root_datum::{build_root_datum, GroupSpec};

    /// Orderings of each irreducible, written as the twists read left to
    /// right.
    pub const OMEGA: [(&str, &[&str]); 8] = [
        ("111", &["3210"]),
        ("011", &["2310", "2130", "2103"]),
        ("101", &["3120", "1320", "1302", "3102", "1032"]),
        ("110", &["3201", "3021", "0321"]),
        ("001", &["1203", "1023", "1230"]),
        ("010", &["2013", "2031", "0213", "0231", "2301"]),
        ("100", &["3012", "0312", "0132"]),
        ("000", &["0123"]),
    ];

    pub fn datum() -> RootDatum {
        build_root_datum(&GroupSpec::gl(4)).expect("GL_4")
    }

    pub fn mu() -> Vec<i64> {
        vec![1, 1, 0, 0]
    }

    pub fn line(t: i64) -> CuspidalLine {
        CuspidalLine::new("rho", qi(t), 1)
    }

    pub fn support() -> Vec<CuspidalLine> {
        (0..4).map(line).collect()
    }

    fn ordering(word: &str) -> Arrangement {
        vec![word.chars().map(|c| line(c.to_digit(10).expect("digit") as i64)).collect()]
    }

    fn bits(label: &str) -> Vec<bool> {
        label.chars().map(|c| c == '1').collect()
    }

    /// The irreducible with the given label as tabulated.
    pub fn rep(label: &str) -> Result<FormalRep> {
        let (_, words) = OMEGA
            .iter()
            .find(|(l, _)| *l == label)
            .ok_or_else(|| Error::InvalidInput(format!("unknown label {label}")))?;
        let vector = words.iter().map(|w| (ordering(w), 1)).collect();
        Ok(FormalRep { regime: Regime::Regular, vector })
    }

    /// `gl4` or `gl4:[bits]`; `appendixA` is accepted in place of `gl4`.
    pub fn rep_by_name(rd: &RootDatum, name: &str) -> Result<FormalRep> {
        let label = match name {
            "gl4" | "appendixA" => "111",
            _ => name
                .strip_prefix("gl4:")
                .or_else(|| name.strip_prefix("appendixA:"))
                .map(|s| s.trim_matches(|c| c == '[' || c == ']'))
                .ok_or_else(|| Error::InvalidInput(format!("unknown fixture {name}")))?,
        };
        if rd.rank() != 4 || rel_blocks(rd, rd.delta())?.len() != 1 {
            return Err(Error::InvalidInput("the fixture lives on GL_4".into()));
        }
        rep(label)
    }

    /// Check that the table is exactly the cell decomposition of the
    /// orderings of the support.
    pub fn validate() -> Result<()> {
        let sup = support();
        let pairs = linked_pairs(&sup);
        let mut covered = BTreeSet::new();
        for (label, words) in OMEGA {
            let want = bits(label);
            for w in words {
                let o = ordering(w);
                if cell_bits(&sup, &pairs, &o[0]) != want || !covered.insert(o) {
                    return Err(Error::Regroup(format!("ordering {w} misfiled under [{label}]")));
                }
            }
        }
        if covered.len() != 24 {
            return Err(Error::Regroup("table does not cover all orderings".into()));
        }
        Ok(())
    }

    /// `Mant_{b,μ}([111])` for the basic `b`, as tabulated.
    pub fn expected() -> EvalResult {
        let rd = datum();
        let group = reflex_subgroup(&rd, &mu());
        let dual = GaloisPiece { factor: 0, copy: 0, id: "rho".into(), weights: vec![1] };
        let mut out = EvalResult::new();
        for (label, tate, c) in [("111", -4, 1), ("111", -3, 1), ("110", -5, -1), ("011", -5, -1), ("010", -6, 1), ("000", -7, -1)] {
            let cls = RepClass { blocks: vec![BlockClass::Cell { support: support(), bits: bits(label) }] };
            let sym = GaloisSymbol { pieces: vec![dual.clone(), dual.clone()], tate: qi(tate), field: group.clone(), orbit_size: 1 };
            out.add(cls, sym, c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kottwitz::enumerate_b;
    use crate::rational::q;
    use crate::root_datum::{build_root_datum, GroupSpec};

    fn gl(n: usize) -> RootDatum {
        build_root_datum(&GroupSpec::gl(n)).unwrap()
    }

    fn basic(rd: &RootDatum, mu: &[i64]) -> IsocrystalClass {
        enumerate_b(rd, mu).unwrap().into_iter().find(|b| b.is_basic(rd)).unwrap()
    }

    #[test]
    fn fixture_matches_generated_cells() {
        gl4_fixture::validate().unwrap();
        for (label, _) in gl4_fixture::OMEGA {
            let rep = gl4_fixture::rep(label).unwrap();
            let cls = rep.classes().unwrap();
            assert_eq!(cls.len(), 1);
            assert_eq!(cls[0].0.label(), format!("[{label}]"));
        }
    }

    #[test]
    fn principal_series_is_sum_of_cells() {
        let rd = gl(4);
        let rho = Supercuspidal { levi: LeviSet::empty(), lines: gl4_fixture::support() };
        let rep = rho.induce(&rd).unwrap();
        let cls = rep.classes().unwrap();
        assert_eq!(cls.len(), 8);
        assert!(cls.iter().all(|(_, c)| *c == 1));
    }

    #[test]
    fn gl4_fixture_basic_value() {
        let rd = gl4_fixture::datum();
        let mu = gl4_fixture::mu();
        let rep = gl4_fixture::rep("111").unwrap();
        let got = evaluate_m(&rd, &basic(&rd, &mu), &mu, &rep).unwrap();
        assert_eq!(got, gl4_fixture::expected(), "\n{}", got.render(&rd));
    }

    #[test]
    fn galois_part_of_top_pair() {
        let rd = gl(4);
        let sup = vec![gl4_fixture::support()];
        let terms = galois_apply(&rd, rd.delta(), &[1, 1, 0, 0], &sup).unwrap();
        let mut sums: Vec<Q> = terms.iter().map(|(_, t)| t + qi(2)).collect();
        sums.sort();
        assert_eq!(sums, [-5, -4, -3, -3, -2, -1].map(qi).to_vec());
    }

    #[test]
    fn kottwitz_case_on_gl3() {
        let rd = gl(3);
        let mu = [1, 0, 0];
        let pi = CuspidalLine::new("pi", q(1, 2), 3);
        let rep = Supercuspidal { levi: rd.delta(), lines: vec![pi] }.induce(&rd).unwrap();
        for b in enumerate_b(&rd, &mu).unwrap() {
            let got = evaluate_m(&rd, &b, &mu, &rep).unwrap();
            if b.is_basic(&rd) {
                assert_eq!(got.len(), 1);
                let (_, sym, c) = got.iter().next().unwrap();
                assert_eq!(c, 1);
                assert_eq!(sym.tate, qi(-1) - q(1, 2));
            } else {
                assert!(got.is_zero());
            }
        }
    }

    #[test]
    fn jacquet_of_induced_cuspidal_on_gl3() {
        // Double cosets for GL_1×GL_2 against GL_2×GL_1: the identity and the
        // cycle 0→2, 1→0, 2→1. Only the cycle carries GL_2 into GL_2.
        let rd = gl(3);
        let (r1, r2) = (CuspidalLine::new("r1", zero(), 1), CuspidalLine::new("r2", zero(), 2));
        let rep = Supercuspidal { levi: LeviSet::from_indices([1]), lines: vec![r1.clone(), r2.clone()] }
            .induce(&rd)
            .unwrap();
        let j = jacquet(&rd, &rep.vector, LeviSet::from_indices([0])).unwrap();
        let want: JacquetVector = [(vec![vec![r2], vec![r1]], 1)].into_iter().collect();
        assert_eq!(j, want);
    }

    #[test]
    fn harris_gl3_non_basic() {
        let rd = gl(3);
        let mu = [1, 1, 0];
        let b = enumerate_b(&rd, &mu)
            .unwrap()
            .into_iter()
            .find(|b| b.levi == LeviSet::from_indices([1]))
            .unwrap();
        let s = LeviSet::from_indices([1]);
        let rho = Supercuspidal {
            levi: s,
            lines: vec![CuspidalLine::new("a", zero(), 1), CuspidalLine::new("b", zero(), 2)],
        };
        let (lhs, rhs) = harris_sides(&rd, s, &b, &mu, &rho, false).unwrap();
        assert_eq!(lhs, rhs, "\n{}\n--\n{}", lhs.render(&rd), rhs.render(&rd));
        assert!(!rhs.is_zero());
        assert!(rhs.iter().all(|(_, s, _)| s.tate == qi(-1)));
    }

    #[test]
    fn harris_small_sweep() {
        for n in 2..=4 {
            let rd = gl(n);
            for k in 1..n {
                let mu: Vec<i64> = (0..n).map(|i| (i < k) as i64).collect();
                for b in enumerate_b(&rd, &mu).unwrap() {
                    for s in b.levi.subsets() {
                        let lines = rel_blocks(&rd, s)
                            .unwrap()
                            .iter()
                            .enumerate()
                            .map(|(j, blk)| CuspidalLine::new(&format!("r{j}"), q(j as i64, 3), blk.len))
                            .collect();
                        let rho = Supercuspidal { levi: s, lines };
                        assert!(check_harris(&rd, s, &b, &mu, &rho).unwrap(), "n={n} mu={mu:?} b={b} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn mant_total_on_fixture() {
        let rd = gl4_fixture::datum();
        for (label, _) in gl4_fixture::OMEGA {
            let rep = gl4_fixture::rep(label).unwrap();
            assert!(check_mant_total(&rd, &gl4_fixture::mu(), &rep).unwrap(), "[{label}]");
        }
    }

    #[test]
    fn fast_and_full_induction_agree() {
        let rd = gl(4);
        let s = LeviSet::from_indices([0]);
        let mut v = JacquetVector::new();
        v.insert(vec![vec![gl4_fixture::line(1), gl4_fixture::line(0)], vec![gl4_fixture::line(2)], vec![gl4_fixture::line(3)]], 1);
        let mut fast = induced_classes(&rd, s, &v).unwrap();
        let mut full = decompose(&induce(&rd, s, &v).unwrap()).unwrap();
        fast.sort();
        full.sort();
        assert_eq!(fast, full);
    }

    #[test]
    fn rep_spec_round_trip() {
        let rd = gl(4);
        let rep = parse_rep(&rd, "gl4:[101]").unwrap();
        assert_eq!(rep.vector.len(), 5);
        assert_eq!(parse_rep(&rd, "appendixA:[101]").unwrap().vector, rep.vector);
        let json = r#"{"regime":"supercuspidal","levi":[1],"lines":[{"id":"a","twist":"0"},{"id":"b","twist":"1/2","dim":2},{"id":"c","twist":"0"}]}"#;
        let rep = parse_rep(&rd, json).unwrap();
        assert_eq!(rep.vector.len(), 6);
    }
}
