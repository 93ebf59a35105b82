//! Based root data for products of Weil-restricted general linear groups.
//!
//! Coordinates of `X_*(T)` are ordered factor-major, then block-major: factor
//! `i` of degree `d` and rank `n` owns `d` consecutive blocks of `n`
//! coordinates, one per embedding. Simple root `k` is `e_c - e_{c+1}` where
//! `c = root_coord(k)`; roots are indexed in coordinate order.
//!
//! A `RootDatum` also carries an *active* simple-root set. Restricting it to a
//! Levi `S` (see [`RootDatum::levi_datum`]) yields the datum of `M_S` on the
//! same coordinates, which is how "inside the group `M_S`" computations run.

use crate::error::{Error, Result};
use crate::rational::{q, qi, zero, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub degree: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub factors: Vec<Factor>,
}

impl GroupSpec {
    pub fn gl(n: usize) -> Self {
        Self::res(1, n)
    }

    pub fn res(degree: usize, rank: usize) -> Self {
        GroupSpec { factors: vec![Factor { degree, rank }] }
    }

    pub fn product(factors: &[(usize, usize)]) -> Self {
        GroupSpec {
            factors: factors.iter().map(|&(degree, rank)| Factor { degree, rank }).collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Parse labels such as `GL4`, `Res2GL3` or `GL2xRes3GL1`.
    pub fn from_label(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("group label {s:?}"));
        let mut factors = Vec::new();
        for part in s.split('x') {
            let (degree, rest) = match part.strip_prefix("Res") {
                Some(r) => {
                    let i = r.find("GL").ok_or_else(bad)?;
                    (r[..i].parse().map_err(|_| bad())?, &r[i..])
                }
                None => (1, part),
            };
            let rank = rest.strip_prefix("GL").ok_or_else(bad)?.parse().map_err(|_| bad())?;
            factors.push(Factor { degree, rank });
        }
        let spec = GroupSpec { factors };
        spec.validate()?;
        Ok(spec)
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.degree * f.rank).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::InvalidGroup("empty factor list".into()));
        }
        if self.factors.iter().any(|f| f.degree == 0 || f.rank == 0) {
            return Err(Error::InvalidGroup("degrees and ranks must be positive".into()));
        }
        if self.rank() > 64 {
            return Err(Error::InvalidGroup("total rank above 64 is not supported".into()));
        }
        Ok(())
    }
}

/// Subset of simple-root indices, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct LeviSet(u64);

impl LeviSet {
    pub const fn empty() -> Self {
        LeviSet(0)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        LeviSet(it.into_iter().fold(0u64, |m, i| m | (1 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn from_bits(b: u64) -> Self {
        LeviSet(b)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        LeviSet(self.0 | 1 << i)
    }

    pub fn union(self, o: Self) -> Self {
        LeviSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        LeviSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        LeviSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    /// All subsets of `self`.
    pub fn subsets(self) -> Vec<LeviSet> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = self.0;
        loop {
            out.push(LeviSet(sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.0;
        }
        out.reverse();
        out
    }
}

impl Ord for LeviSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(&other.indices())
    }
}

impl PartialOrd for LeviSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for LeviSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LeviSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.iter().any(|&i| i >= 64) {
            return Err(serde::de::Error::custom("root index out of range"));
        }
        Ok(LeviSet::from_indices(v))
    }
}

impl fmt::Display for LeviSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Weyl element as a coordinate permutation: coordinate `i` moves to `w[i]`.
pub type Perm = Vec<usize>;

pub fn perm_identity(n: usize) -> Perm {
    (0..n).collect()
}

/// `(a ∘ b)[i] = a[b[i]]`.
pub fn perm_compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn perm_inverse(w: &[usize]) -> Perm {
    let mut inv = vec![0; w.len()];
    for (i, &j) in w.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn perm_apply<T: Clone>(w: &[usize], x: &[T]) -> Vec<T> {
    let mut out = x.to_vec();
    for (i, &j) in w.iter().enumerate() {
        out[j] = x[i].clone();
    }
    out
}

/// Diagram automorphism `x ↦ ±P x` of the coordinate lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoordAuto {
    pub perm: Perm,
    pub negate: bool,
}

impl CoordAuto {
    pub fn identity(n: usize) -> Self {
        CoordAuto { perm: perm_identity(n), negate: false }
    }

    pub fn compose(&self, other: &CoordAuto) -> CoordAuto {
        CoordAuto {
            perm: perm_compose(&self.perm, &other.perm),
            negate: self.negate != other.negate,
        }
    }

    pub fn apply_int(&self, x: &[i64]) -> Vec<i64> {
        let y = perm_apply(&self.perm, x);
        if self.negate {
            y.into_iter().map(|v| -v).collect()
        } else {
            y
        }
    }

    pub fn apply_q(&self, x: &[Q]) -> Vec<Q> {
        let y = perm_apply(&self.perm, x);
        if self.negate {
            y.into_iter().map(|v| -v).collect()
        } else {
            y
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderMode {
    Absolute,
    Relative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorInfo {
    pub degree: usize,
    pub rank: usize,
    /// First absolute coordinate.
    pub offset: usize,
    /// First relative coordinate (one per `GL_n` coordinate over the field).
    pub rel_offset: usize,
}

/// A maximal run of coordinates joined by roots of some Levi set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    pub start: usize,
    pub len: usize,
}

impl Block {
    pub fn range(self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    n: usize,
    root_coords: Vec<usize>,
    delta: LeviSet,
    gamma: Vec<CoordAuto>,
    gamma_roots: Vec<Vec<usize>>,
    factors: Option<Vec<FactorInfo>>,
    rho: Vec<Q>,
}

/// Build the datum of `Π Res_{F_i/Q_p} GL_{n_i}` from its spec.
pub fn build_root_datum(spec: &GroupSpec) -> Result<RootDatum> {
    spec.validate()?;
    let n = spec.rank();
    let mut factors = Vec::new();
    let mut block_sizes = Vec::new();
    let (mut off, mut rel) = (0, 0);
    for f in &spec.factors {
        factors.push(FactorInfo { degree: f.degree, rank: f.rank, offset: off, rel_offset: rel });
        block_sizes.extend(std::iter::repeat_n(f.rank, f.degree));
        off += f.degree * f.rank;
        rel += f.rank;
    }
    // Frobenius shifts every factor's embedding blocks simultaneously.
    let mut frob = perm_identity(n);
    for fi in &factors {
        for t in 0..fi.degree {
            for j in 0..fi.rank {
                frob[fi.offset + t * fi.rank + j] = fi.offset + ((t + 1) % fi.degree) * fi.rank + j;
            }
        }
    }
    let mut rd = RootDatum::from_blocks(&block_sizes, &[CoordAuto { perm: frob, negate: false }])?;
    rd.factors = Some(factors);
    Ok(rd)
}

impl RootDatum {
    /// Generic type-A datum: consecutive blocks of the given sizes, with the
    /// diagram group generated by `gens`.
    pub fn from_blocks(block_sizes: &[usize], gens: &[CoordAuto]) -> Result<RootDatum> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::InvalidGroup("block sizes must be positive".into()));
        }
        let n: usize = block_sizes.iter().sum();
        if n > 64 {
            return Err(Error::InvalidGroup("total rank above 64 is not supported".into()));
        }
        let mut root_coords = Vec::new();
        let mut start = 0;
        for &b in block_sizes {
            root_coords.extend(start..start + b - 1);
            start += b;
        }
        let all = LeviSet::from_indices(0..root_coords.len());
        for g in gens {
            if g.perm.len() != n || perm_inverse(&g.perm).len() != n {
                return Err(Error::InvalidGroup("automorphism has wrong length".into()));
            }
            let mut seen = vec![false; n];
            for &j in &g.perm {
                if j >= n || seen[j] {
                    return Err(Error::InvalidGroup("automorphism is not a permutation".into()));
                }
                seen[j] = true;
            }
        }
        let mut rd = RootDatum {
            n,
            root_coords,
            delta: all,
            gamma: Vec::new(),
            gamma_roots: Vec::new(),
            factors: None,
            rho: Vec::new(),
        };
        rd.gamma = close_group(n, gens);
        rd.gamma_roots = rd
            .gamma
            .iter()
            .map(|g| rd.root_image(g))
            .collect::<Result<Vec<_>>>()?;
        rd.rho = rd.rho_vector(rd.delta);
        for g in &rd.gamma {
            if g.apply_q(&rd.rho) != rd.rho {
                return Err(Error::InvalidGroup("automorphism does not fix rho".into()));
            }
        }
        Ok(rd)
    }

    fn root_image(&self, g: &CoordAuto) -> Result<Vec<usize>> {
        (0..self.root_coords.len())
            .map(|k| {
                let c = self.root_coords[k];
                let (a, b) = (g.perm[c], g.perm[c + 1]);
                let (hi, lo) = if g.negate { (b, a) } else { (a, b) };
                if lo == hi + 1 {
                    if let Some(l) = self.root_coords.iter().position(|&x| x == hi) {
                        return Ok(l);
                    }
                }
                Err(Error::InvalidGroup("automorphism does not preserve the simple roots".into()))
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn num_roots(&self) -> usize {
        self.root_coords.len()
    }

    pub fn root_coord(&self, k: usize) -> usize {
        self.root_coords[k]
    }

    /// Active simple roots `Δ`.
    pub fn delta(&self) -> LeviSet {
        self.delta
    }

    pub fn gamma(&self) -> &[CoordAuto] {
        &self.gamma
    }

    pub fn gamma_on_roots(&self, g: usize) -> &[usize] {
        &self.gamma_roots[g]
    }

    pub fn factors(&self) -> Option<&[FactorInfo]> {
        self.factors.as_deref()
    }

    pub fn rho(&self) -> &[Q] {
        &self.rho
    }

    /// Whether every diagram automorphism is a plain permutation cyclically
    /// shifting embedding blocks (the Weil-restriction class).
    pub fn is_restriction_class(&self) -> bool {
        self.factors.is_some()
    }

    pub fn relative_rank(&self) -> usize {
        self.factors.as_ref().map_or(self.n, |f| f.iter().map(|x| x.rank).sum())
    }

    /// Datum of `M_S` on the same coordinates. `S` must be a Γ-stable subset of `Δ`.
    pub fn levi_datum(&self, s: LeviSet) -> Result<RootDatum> {
        if !s.is_subset(self.delta) {
            return Err(Error::LeviMismatch(format!("{s} is not contained in {}", self.delta)));
        }
        if !self.is_gamma_stable(s) {
            return Err(Error::LeviMismatch(format!("{s} is not Galois-stable")));
        }
        let mut rd = self.clone();
        rd.delta = s;
        rd.rho = rd.rho_vector(s);
        Ok(rd)
    }

    pub fn check_cocharacter(&self, mu: &[i64]) -> Result<()> {
        if mu.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "cocharacter has length {}, expected {}",
                mu.len(),
                self.n
            )));
        }
        Ok(())
    }

    pub fn check_levi(&self, s: LeviSet) -> Result<()> {
        if !s.is_subset(self.delta) {
            return Err(Error::LeviMismatch(format!("{s} is not contained in {}", self.delta)));
        }
        Ok(())
    }

    /// Blocks of `M_S` covering all coordinates (singletons included).
    pub fn blocks(&self, s: LeviSet) -> Vec<Block> {
        let mut joined = vec![false; self.n];
        for k in s.indices() {
            if k < self.root_coords.len() {
                joined[self.root_coords[k]] = true;
            }
        }
        let mut out = Vec::new();
        let mut start = 0;
        for (c, &j) in joined.iter().enumerate().take(self.n) {
            if !j {
                out.push(Block { start, len: c + 1 - start });
                start = c + 1;
            }
        }
        out
    }

    /// Irreducible components of the active root system (blocks of `Δ`).
    pub fn delta_blocks(&self) -> Vec<Block> {
        self.blocks(self.delta)
    }

    pub fn block_of(&self, s: LeviSet, coord: usize) -> Block {
        *self.blocks(s).iter().find(|b| b.range().contains(&coord)).expect("coordinate in range")
    }

    pub fn apply_gamma_levi(&self, g: usize, s: LeviSet) -> LeviSet {
        LeviSet::from_indices(s.indices().into_iter().map(|k| self.gamma_roots[g][k]))
    }

    pub fn is_gamma_stable(&self, s: LeviSet) -> bool {
        (0..self.gamma.len()).all(|g| self.apply_gamma_levi(g, s) == s)
    }

    /// Largest Γ-stable subset of `S`.
    pub fn gamma_core(&self, s: LeviSet) -> LeviSet {
        (0..self.gamma.len()).fold(s, |acc, g| acc.intersection(self.apply_gamma_levi(g, s)))
    }

    /// Γ-orbits of active simple roots: the relative simple roots.
    pub fn relative_roots(&self) -> Vec<LeviSet> {
        self.root_orbits(self.delta)
    }

    /// Γ-orbits of the roots in `s` (which should be Γ-stable).
    pub fn root_orbits(&self, s: LeviSet) -> Vec<LeviSet> {
        let mut seen = LeviSet::empty();
        let mut out = Vec::new();
        for k in s.indices() {
            if seen.contains(k) {
                continue;
            }
            let orbit = LeviSet::from_indices(self.gamma_roots.iter().map(|r| r[k]));
            seen = seen.union(orbit);
            out.push(orbit);
        }
        out
    }

    /// All Γ-stable subsets of `Δ`.
    pub fn stable_levis(&self) -> Vec<LeviSet> {
        let orbits = self.relative_roots();
        let mut out: Vec<LeviSet> = (0u64..1 << orbits.len())
            .map(|m| {
                orbits
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .fold(LeviSet::empty(), |acc, (_, o)| acc.union(*o))
            })
            .collect();
        out.sort();
        out
    }

    /// `⟨x, α_k⟩` for the simple root `α_k`.
    pub fn pair_root(&self, x: &[Q], k: usize) -> Q {
        let c = self.root_coords[k];
        &x[c] - &x[c + 1]
    }

    pub fn pair_root_int(&self, x: &[i64], k: usize) -> i64 {
        let c = self.root_coords[k];
        x[c] - x[c + 1]
    }

    pub fn gamma_average(&self, mu: &[i64]) -> Vec<Q> {
        let mut acc = vec![zero(); self.n];
        for g in &self.gamma {
            for (a, v) in acc.iter_mut().zip(g.apply_int(mu)) {
                *a += qi(v);
            }
        }
        let k = qi(self.gamma.len() as i64);
        acc.into_iter().map(|a| a / &k).collect()
    }

    pub fn gamma_average_q(&self, x: &[Q]) -> Vec<Q> {
        let mut acc = vec![zero(); self.n];
        for g in &self.gamma {
            for (a, v) in acc.iter_mut().zip(g.apply_q(x)) {
                *a += v;
            }
        }
        let k = qi(self.gamma.len() as i64);
        acc.into_iter().map(|a| a / &k).collect()
    }

    pub fn is_gamma_fixed(&self, x: &[Q]) -> bool {
        self.gamma.iter().all(|g| g.apply_q(x) == x)
    }

    /// Average of `x` over `W^rel_{M_S}`; for type A this is the block mean
    /// over the blocks of the Γ-stable core of `S`.
    pub fn levi_average(&self, s: LeviSet, x: &[Q]) -> Vec<Q> {
        let mut out = x.to_vec();
        for b in self.blocks(self.gamma_core(s)) {
            let mean = x[b.range()].iter().fold(zero(), |a, v| a + v) / qi(b.len as i64);
            for c in b.range() {
                out[c] = mean.clone();
            }
        }
        out
    }

    pub fn theta(&self, s: LeviSet, mu: &[i64]) -> Vec<Q> {
        self.levi_average(s, &self.gamma_average(mu))
    }

    /// Sort each `M_S` block in descending order.
    pub fn dominant_rep(&self, s: LeviSet, mu: &[i64]) -> Vec<i64> {
        let mut out = mu.to_vec();
        for b in self.blocks(s) {
            out[b.range()].sort_unstable_by(|a, b| b.cmp(a));
        }
        out
    }

    pub fn is_dominant(&self, s: LeviSet, mu: &[i64]) -> bool {
        s.indices().iter().all(|&k| self.pair_root_int(mu, k) >= 0)
    }

    pub fn is_conjugate_in_levi(&self, s: LeviSet, a: &[i64], b: &[i64]) -> bool {
        self.dominant_rep(s, a) == self.dominant_rep(s, b)
    }

    /// `x ⪯ y`: `y - x` is a non-negative combination of active simple
    /// coroots. Relative mode compares Γ-fixed vectors only; on them the
    /// absolute coefficients are Γ-invariant, hence relative coefficients.
    pub fn preceq(&self, x: &[Q], y: &[Q], mode: OrderMode) -> bool {
        if mode == OrderMode::Relative && !(self.is_gamma_fixed(x) && self.is_gamma_fixed(y)) {
            return false;
        }
        for b in self.delta_blocks() {
            let mut partial = zero();
            for c in b.range() {
                partial += &y[c] - &x[c];
                if partial.is_negative() {
                    return false;
                }
            }
            if !partial.is_zero() {
                return false;
            }
        }
        true
    }

    /// Strict version: `x ≺ y`.
    pub fn precneq(&self, x: &[Q], y: &[Q], mode: OrderMode) -> bool {
        x != y && self.preceq(x, y, mode)
    }

    /// `ρ_{M_S}`: half-sum of positive roots of `M_S`.
    pub fn rho_vector(&self, s: LeviSet) -> Vec<Q> {
        let mut out = vec![zero(); self.n];
        for b in self.blocks(s) {
            for (j, c) in b.range().enumerate() {
                out[c] = q(b.len as i64 - 1 - 2 * j as i64, 2);
            }
        }
        out
    }

    pub fn rho_pairing(&self, mu: &[i64], s: LeviSet) -> Q {
        self.rho_vector(s).iter().zip(mu).fold(zero(), |a, (r, &m)| a + r * qi(m))
    }

    /// Dominant representative of a rational vector within the active blocks.
    pub fn dominant_q(&self, x: &[Q]) -> Vec<Q> {
        let mut out = x.to_vec();
        for b in self.delta_blocks() {
            out[b.range()].sort_by(|a, b| b.cmp(a));
        }
        out
    }

    /// Γ₀-orbit of a simple root, checked against the supported cases.
    fn orbit_shape(&self, alpha: usize) -> Result<(LeviSet, bool)> {
        if !self.delta.contains(alpha) {
            return Err(Error::InvalidInput(format!("root {alpha} is not active")));
        }
        let orbit = LeviSet::from_indices(self.gamma_roots.iter().map(|r| r[alpha]));
        let idx = orbit.indices();
        let adjacent: Vec<(usize, usize)> = idx
            .iter()
            .flat_map(|&a| idx.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| a < b && self.root_coords[b] == self.root_coords[a] + 1)
            .collect();
        match (adjacent.len(), idx.len()) {
            (0, _) => Ok((orbit, false)),
            (1, 2) => Ok((orbit, true)),
            _ => Err(Error::Unsupported(format!(
                "orbit of root {alpha} is outside the orthogonal and adjacent-pair cases"
            ))),
        }
    }

    /// Longest element of the Weyl group generated by the Γ₀-orbit of `σ_α`.
    pub fn relative_reflection(&self, alpha: usize) -> Result<Perm> {
        let (orbit, adjacent) = self.orbit_shape(alpha)?;
        let mut w = perm_identity(self.n);
        if adjacent {
            let c = orbit.indices().iter().map(|&k| self.root_coords[k]).min().unwrap();
            w.swap(c, c + 2);
        } else {
            for k in orbit.indices() {
                let c = self.root_coords[k];
                w.swap(c, c + 1);
            }
        }
        Ok(w)
    }

    /// Relative coroot of `res(α)` as a vector of `X_*(T)_Q`.
    pub fn relative_coroot(&self, alpha: usize) -> Result<Vec<Q>> {
        let w = self.relative_reflection(alpha)?;
        for c in 0..self.n {
            let mut e = vec![zero(); self.n];
            e[c] = qi(1);
            let x = self.gamma_average_q(&e);
            let p = self.pair_root(&x, alpha);
            if !p.is_zero() {
                let wx = perm_apply(&w, &x);
                return Ok(x.iter().zip(&wx).map(|(a, b)| (a - b) / &p).collect());
            }
        }
        Err(Error::Unsupported("no Galois-fixed vector detects the root".into()))
    }

    /// The `c` in `res(δ_α) = c · δ_res(α)`.
    pub fn fundamental_weight_restriction(&self, alpha: usize) -> Result<u32> {
        let coroot = self.relative_coroot(alpha)?;
        let c = self.root_coords[alpha];
        let b = self.block_of(self.delta, c);
        let len = qi(b.len as i64);
        let head = qi((c + 1 - b.start) as i64);
        let total = coroot[b.range()].iter().fold(zero(), |a, v| a + v);
        let pref = coroot[b.start..=c].iter().fold(zero(), |a, v| a + v);
        let val = pref - head / len * total;
        if val == qi(1) {
            Ok(1)
        } else if val == qi(2) {
            Ok(2)
        } else {
            Err(Error::Unsupported(format!("restriction coefficient {val}")))
        }
    }

    /// The absolute Weyl group of the active root system.
    pub fn weyl_group(&self) -> Vec<Perm> {
        let mut out = vec![perm_identity(self.n)];
        for b in self.delta_blocks() {
            let local = permutations(b.len);
            let mut next = Vec::with_capacity(out.len() * local.len());
            for w in &out {
                for p in &local {
                    let mut v = w.clone();
                    for (j, &pj) in p.iter().enumerate() {
                        v[b.start + j] = b.start + pj;
                    }
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// `W^rel = (W^abs)^{Γ₀}`.
    pub fn relative_weyl_group(&self) -> Vec<Perm> {
        self.weyl_group()
            .into_iter()
            .filter(|w| self.commutes_with_gamma(w))
            .collect()
    }

    pub fn commutes_with_gamma(&self, w: &[usize]) -> bool {
        self.gamma.iter().all(|g| perm_compose(&g.perm, w) == perm_compose(w, &g.perm))
    }

    /// Cartan integer `⟨α̌_a, α_b⟩`.
    pub fn cartan(&self, a: usize, b: usize) -> i64 {
        let (ca, cb) = (self.root_coords[a], self.root_coords[b]);
        let coroot = |c: usize| if c == ca { 1 } else if c == ca + 1 { -1 } else { 0 };
        coroot(cb) - coroot(cb + 1)
    }
}

fn close_group(n: usize, gens: &[CoordAuto]) -> Vec<CoordAuto> {
    let mut elems = vec![CoordAuto::identity(n)];
    let mut seen: BTreeSet<(Perm, bool)> = BTreeSet::new();
    seen.insert((perm_identity(n), false));
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let h = g.compose(&elems[i]);
            if seen.insert((h.perm.clone(), h.negate)) {
                elems.push(h);
            }
        }
        i += 1;
    }
    elems
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur = perm_identity(n);
    loop {
        out.push(cur.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_labels_parse() {
        assert_eq!(GroupSpec::from_label("GL4").unwrap(), GroupSpec::gl(4));
        assert_eq!(GroupSpec::from_label("Res2GL3").unwrap(), GroupSpec::res(2, 3));
        assert_eq!(GroupSpec::from_label("GL2xRes3GL1").unwrap(), GroupSpec::product(&[(1, 2), (3, 1)]));
        assert!(GroupSpec::from_label("GL").is_err());
        assert!(GroupSpec::from_label("Res0GL2").is_err());
    }
    use crate::rational::to_qvec;

    fn gl(n: usize) -> RootDatum {
        build_root_datum(&GroupSpec::gl(n)).unwrap()
    }

    fn qv(v: &[(i64, i64)]) -> Vec<Q> {
        v.iter().map(|&(a, b)| q(a, b)).collect()
    }

    #[test]
    fn split_gl4_shape() {
        let rd = gl(4);
        assert_eq!(rd.rank(), 4);
        assert_eq!(rd.num_roots(), 3);
        assert_eq!(rd.gamma().len(), 1);
        assert_eq!(rd.rho(), &qv(&[(3, 2), (1, 2), (-1, 2), (-3, 2)])[..]);
        for a in 0..3 {
            for b in 0..3 {
                let expect = match (a as i64 - b as i64).abs() {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                };
                assert_eq!(rd.cartan(a, b), expect);
            }
        }
    }

    #[test]
    fn restriction_swaps_blocks() {
        let rd = build_root_datum(&GroupSpec::res(2, 2)).unwrap();
        assert_eq!(rd.gamma().len(), 2);
        assert_eq!(rd.gamma()[1].perm, vec![2, 3, 0, 1]);
        assert_eq!(rd.gamma_on_roots(1), &[1, 0]);
        assert_eq!(rd.relative_roots(), vec![LeviSet::from_indices([0, 1])]);
    }

    #[test]
    fn torus_has_no_roots() {
        let rd = gl(1);
        assert_eq!(rd.num_roots(), 0);
        assert!(build_root_datum(&GroupSpec { factors: vec![] }).is_err());
    }

    #[test]
    fn gamma_average_examples() {
        let rd = build_root_datum(&GroupSpec::res(2, 2)).unwrap();
        assert_eq!(rd.gamma_average(&[1, 0, 0, 0]), qv(&[(1, 2), (0, 1), (1, 2), (0, 1)]));
        assert_eq!(rd.gamma_average(&[1, 1, 1, 1]), to_qvec(&[1, 1, 1, 1]));
        assert_eq!(gl(3).gamma_average(&[2, 0, -1]), to_qvec(&[2, 0, -1]));
    }

    #[test]
    fn theta_examples() {
        let rd = gl(4);
        let mu = [1, 1, 0, 0];
        assert_eq!(rd.theta(rd.delta(), &mu), qv(&[(1, 2); 4]));
        assert_eq!(rd.theta(LeviSet::from_indices([0, 1]), &mu), qv(&[(2, 3), (2, 3), (2, 3), (0, 1)]));
        assert_eq!(rd.theta(LeviSet::from_indices([0, 2]), &mu), to_qvec(&mu));
    }

    #[test]
    fn dominant_rep_examples() {
        assert_eq!(gl(4).dominant_rep(LeviSet::from_indices([0, 1, 2]), &[0, 1, 0, 1]), vec![1, 1, 0, 0]);
        assert_eq!(gl(3).dominant_rep(LeviSet::from_indices([0]), &[0, 1, 2]), vec![1, 0, 2]);
        assert_eq!(gl(3).dominant_rep(LeviSet::empty(), &[0, 1, 2]), vec![0, 1, 2]);
    }

    #[test]
    fn conjugacy_examples() {
        let rd = gl(4);
        assert!(rd.is_conjugate_in_levi(rd.delta(), &[1, 1, 0, 0], &[1, 0, 1, 0]));
        assert!(!rd.is_conjugate_in_levi(LeviSet::from_indices([0, 2]), &[1, 1, 0, 0], &[1, 0, 1, 0]));
    }

    #[test]
    fn preceq_examples() {
        let rd = gl(4);
        let half = qv(&[(1, 2); 4]);
        let mu = to_qvec(&[1, 1, 0, 0]);
        assert!(rd.preceq(&half, &mu, OrderMode::Absolute));
        assert!(!rd.preceq(&mu, &half, OrderMode::Absolute));
        assert!(rd.preceq(&mu, &mu, OrderMode::Relative));
        assert!(!rd.precneq(&mu, &mu, OrderMode::Relative));
    }

    #[test]
    fn rho_pairing_examples() {
        let rd = gl(4);
        assert_eq!(rd.rho_pairing(&[1, 1, 0, 0], rd.delta()), qi(2));
        assert_eq!(rd.rho_pairing(&[0, 0, 0, 0], rd.delta()), qi(0));
        assert_eq!(gl(2).rho_pairing(&[1, 0], LeviSet::from_indices([0])), q(1, 2));
    }

    #[test]
    fn rho_pairs_to_one_with_simple_coroots() {
        let rd = build_root_datum(&GroupSpec::product(&[(2, 3), (1, 2)])).unwrap();
        for k in 0..rd.num_roots() {
            assert_eq!(rd.pair_root(rd.rho(), k), qi(1));
        }
    }

    #[test]
    fn relative_reflection_examples() {
        assert_eq!(gl(3).relative_reflection(0).unwrap(), vec![1, 0, 2]);
        let rd = build_root_datum(&GroupSpec::res(2, 2)).unwrap();
        assert_eq!(rd.relative_reflection(0).unwrap(), vec![1, 0, 3, 2]);
        let rd = build_root_datum(&GroupSpec::res(2, 3)).unwrap();
        let w = rd.relative_reflection(0).unwrap();
        assert_eq!(w, vec![1, 0, 2, 4, 3, 5]);
        assert_eq!(perm_compose(&w, &w), perm_identity(6));
    }

    #[test]
    fn fundamental_weight_coefficients() {
        assert_eq!(gl(3).fundamental_weight_restriction(1).unwrap(), 1);
        let rd = build_root_datum(&GroupSpec::res(2, 3)).unwrap();
        assert_eq!(rd.fundamental_weight_restriction(0).unwrap(), 1);
        // GL_3 with the outer automorphism x ↦ -rev(x): the orbit {α_1, α_2} is adjacent.
        let flip = CoordAuto { perm: vec![2, 1, 0], negate: true };
        let rd = RootDatum::from_blocks(&[3], &[flip]).unwrap();
        assert_eq!(rd.relative_reflection(0).unwrap(), vec![2, 1, 0]);
        assert_eq!(rd.fundamental_weight_restriction(0).unwrap(), 2);
    }

    #[test]
    fn levi_subsets_and_order() {
        let s = LeviSet::from_indices([2, 0]);
        assert_eq!(s.indices(), vec![0, 2]);
        assert_eq!(s.subsets().len(), 4);
        assert!(LeviSet::from_indices([0]) < LeviSet::from_indices([1]));
        assert!(LeviSet::from_indices([0, 2]) < LeviSet::from_indices([1]));
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[0,2]");
        assert_eq!(serde_json::from_str::<LeviSet>(&json).unwrap(), s);
    }

    #[test]
    fn group_spec_json() {
        let g = GroupSpec::from_json(r#"{"factors":[{"degree":2,"rank":3}]}"#).unwrap();
        assert_eq!(g, GroupSpec::res(2, 3));
        assert!(GroupSpec::from_json("{}").is_err());
    }

    #[test]
    fn permutations_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(gl(3).weyl_group().len(), 6);
        let rd = build_root_datum(&GroupSpec::res(2, 2)).unwrap();
        assert_eq!(rd.weyl_group().len(), 4);
        assert_eq!(rd.relative_weyl_group().len(), 2);
    }
}
