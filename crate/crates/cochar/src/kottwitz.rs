//! The Kottwitz set: classes `b = (S_b, ν, κ)`, enumeration of `B(G, μ)`,
//! and the map `T` from strictly decreasing pairs.

use crate::error::{Error, Result};
use crate::pair_poset::{is_sd, sd_set, CocharacterPair};
use crate::rational::{fmt_qvec, qi, serde_qvec, zero, Q};
use crate::root_datum::{Block, LeviSet, OrderMode, RootDatum};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// An element of `B(G)` through its Levi, Newton point and Kottwitz point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsocrystalClass {
    pub levi: LeviSet,
    #[serde(with = "serde_qvec")]
    pub newton: Vec<Q>,
    pub kappa: Vec<i64>,
}

impl IsocrystalClass {
    pub fn is_basic(&self, rd: &RootDatum) -> bool {
        self.levi == rd.delta()
    }
}

impl fmt::Display for IsocrystalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nu={} kappa={:?} levi={}", fmt_qvec(&self.newton), self.kappa, self.levi)
    }
}

/// `X^*(Z(M̂_S)^Γ)` presented inside `X_*(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterLattice {
    pub levi: LeviSet,
    /// `κ_j(μ) = ⟨basis[j], μ⟩`.
    pub basis: Vec<Vec<i64>>,
    /// Image in `𝔄_{M_S,Q}` of the `j`-th generator.
    pub map_to_a: Vec<Vec<Q>>,
}

impl CenterLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn kappa(&self, mu: &[i64]) -> Vec<i64> {
        self.basis.iter().map(|b| b.iter().zip(mu).map(|(x, y)| x * y).sum()).collect()
    }

    pub fn to_a(&self, chi: &[i64]) -> Vec<Q> {
        let n = self.map_to_a.first().map_or(0, |v| v.len());
        let mut out = vec![zero(); n];
        for (c, v) in chi.iter().zip(&self.map_to_a) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += x * qi(*c);
            }
        }
        out
    }
}

/// Γ-orbits of the blocks of `M_S`, each listed in coordinate order.
pub fn block_orbits(rd: &RootDatum, s: LeviSet) -> Vec<Vec<Block>> {
    let blocks = rd.blocks(s);
    let mut seen = vec![false; blocks.len()];
    let mut out = Vec::new();
    for i in 0..blocks.len() {
        if seen[i] {
            continue;
        }
        let mut orbit = BTreeSet::new();
        for g in rd.gamma() {
            let img = g.perm[blocks[i].start];
            let j = blocks.iter().position(|b| b.range().contains(&img)).unwrap();
            orbit.insert(j);
        }
        for &j in &orbit {
            seen[j] = true;
        }
        out.push(orbit.into_iter().map(|j| blocks[j]).collect());
    }
    out
}

/// Column-reduce `rows` to diagonal form. Returns the diagonal and the
/// unimodular column transform `q` with `rows · q` diagonal.
#[allow(clippy::needless_range_loop)]
fn diagonalize(mut a: Vec<Vec<i64>>, n: usize) -> (Vec<i64>, Vec<Vec<i64>>) {
    let m = a.len();
    let mut q: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return (diag, q);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in q.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let f = a[i][t] / p;
                for j in 0..n {
                    a[i][j] -= f * a[t][j];
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let f = a[t][j] / p;
                for row in a.iter_mut() {
                    row[j] -= f * row[t];
                }
                for row in q.iter_mut() {
                    row[j] -= f * row[t];
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                diag.push(p.abs());
                break;
            }
        }
    }
    (diag, q)
}

#[allow(clippy::needless_range_loop)]
fn invert_unimodular(q: &[Vec<i64>]) -> Vec<Vec<Q>> {
    let n = q.len();
    let mut a: Vec<Vec<Q>> = q
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Q> = r.iter().map(|&x| qi(x)).collect();
            row.extend((0..n).map(|j| qi(i64::from(i == j))));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("unimodular");
        a.swap(c, p);
        let inv = qi(1) / &a[c][c];
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let d = &f * &a[c][j];
                    a[r][j] -= d;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Presentation of `X_*(T) / ⟨coroots of M_S⟩` modulo Γ-coinvariance.
pub fn center_character_lattice(rd: &RootDatum, s: LeviSet) -> Result<CenterLattice> {
    rd.check_levi(s)?;
    let n = rd.rank();
    let mut rel: Vec<Vec<i64>> = Vec::new();
    for k in s.indices() {
        let c = rd.root_coord(k);
        let mut v = vec![0; n];
        v[c] = 1;
        v[c + 1] = -1;
        rel.push(v);
    }
    for g in rd.gamma() {
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            let ge = g.apply_int(&e);
            let v: Vec<i64> = e.iter().zip(&ge).map(|(a, b)| a - b).collect();
            if v.iter().any(|&x| x != 0) {
                rel.push(v);
            }
        }
    }
    let (diag, q) = diagonalize(rel, n);
    let torsion: Vec<String> = diag.iter().filter(|&&d| d > 1).map(|d| d.to_string()).collect();
    if !torsion.is_empty() {
        return Err(Error::Torsion(torsion));
    }
    let free = n - diag.len();
    if rd.gamma().iter().all(|g| !g.negate) {
        let orbits = block_orbits(rd, s);
        debug_assert_eq!(orbits.len(), free);
        let mut basis = Vec::new();
        let mut map_to_a = Vec::new();
        for orbit in &orbits {
            let mut b = vec![0; n];
            let size: usize = orbit.iter().map(|x| x.len).sum();
            let mut a = vec![zero(); n];
            for blk in orbit {
                for c in blk.range() {
                    b[c] = 1;
                    a[c] = Q::new(1.into(), (size as i64).into());
                }
            }
            basis.push(b);
            map_to_a.push(a);
        }
        return Ok(CenterLattice { levi: s, basis, map_to_a });
    }
    let qinv = invert_unimodular(&q);
    let rank = diag.len();
    let basis: Vec<Vec<i64>> = (rank..n).map(|j| (0..n).map(|i| q[i][j]).collect()).collect();
    let map_to_a = (rank..n)
        .map(|j| rd.levi_average(s, &rd.gamma_average_q(&qinv[j])))
        .collect();
    Ok(CenterLattice { levi: s, basis, map_to_a })
}

/// Image of `μ` in `X^*(Z(M̂_S)^Γ)`; for GL blocks, per-orbit block sums.
pub fn kappa_at(rd: &RootDatum, s: LeviSet, mu: &[i64]) -> Vec<i64> {
    if rd.gamma().iter().all(|g| !g.negate) {
        return block_orbits(rd, s)
            .iter()
            .map(|o| o.iter().flat_map(|b| b.range()).map(|c| mu[c]).sum())
            .collect();
    }
    center_character_lattice(rd, s).expect("torsion-free lattice").kappa(mu)
}

/// The Kottwitz point at the level of the datum's own group, read off `ν`.
pub fn kappa_from_newton(rd: &RootDatum, newton: &[Q]) -> Vec<i64> {
    block_orbits(rd, rd.delta())
        .iter()
        .map(|o| {
            let s = o.iter().flat_map(|b| b.range()).fold(zero(), |a, c| a + &newton[c]);
            s.to_integer().to_i64().expect("small Kottwitz point")
        })
        .collect()
}

/// `B(G, μ)` sorted by `(|S_b|` descending, `ν)`.
pub fn enumerate_b(rd: &RootDatum, mu: &[i64]) -> Result<Vec<IsocrystalClass>> {
    rd.check_cocharacter(mu)?;
    if !rd.is_dominant(rd.delta(), mu) {
        return Err(Error::NotDominant(format!("{mu:?}")));
    }
    if rd.gamma().iter().any(|g| g.negate) {
        return Err(Error::Unsupported("enumeration needs a Weil-restriction datum".into()));
    }
    let target = rd.gamma_average(mu);
    let kappa = kappa_at(rd, rd.delta(), mu);
    let components = block_orbits(rd, rd.delta());
    // Per component: list of (local composition sizes, slopes).
    let mut per_component: Vec<Vec<(Vec<usize>, Vec<Q>)>> = Vec::new();
    for comp in &components {
        let d = comp.len() as i64;
        let head = comp[0];
        let mut prefix = vec![zero()];
        for c in head.range() {
            let next = prefix.last().unwrap() + &target[c];
            prefix.push(next);
        }
        let mut found = Vec::new();
        for comp_sizes in compositions(head.len) {
            let mut slopes = Vec::new();
            polygon_rec(&comp_sizes, &prefix, d, 0, 0, &zero(), None, &mut slopes, &mut found);
        }
        per_component.push(found);
    }
    let mut classes = BTreeSet::new();
    let mut choice = vec![0usize; components.len()];
    loop {
        let mut newton = vec![zero(); rd.rank()];
        let mut levi = LeviSet::empty();
        for (ci, comp) in components.iter().enumerate() {
            let (sizes, slopes) = &per_component[ci][choice[ci]];
            for blk in comp {
                let mut c = blk.start;
                for (m, s) in sizes.iter().zip(slopes) {
                    newton[c..c + m].fill(s.clone());
                    c += m;
                }
            }
            for k in rd.delta().indices() {
                let c = rd.root_coord(k);
                if comp.iter().any(|b| b.range().contains(&c)) && newton[c] == newton[c + 1] {
                    levi = levi.with(k);
                }
            }
        }
        if rd.preceq(&newton, &target, OrderMode::Relative) && kappa_from_newton(rd, &newton) == kappa {
            classes.insert(IsocrystalClass { levi, newton, kappa: kappa.clone() });
        }
        if !advance(&mut choice, &per_component.iter().map(|v| v.len()).collect::<Vec<_>>()) {
            break;
        }
    }
    let mut out: Vec<IsocrystalClass> = classes.into_iter().collect();
    out.sort_by(|a, b| b.levi.len().cmp(&a.levi.len()).then_with(|| a.newton.cmp(&b.newton)));
    Ok(out)
}

fn advance(choice: &mut [usize], sizes: &[usize]) -> bool {
    if sizes.contains(&0) {
        return false;
    }
    for i in (0..choice.len()).rev() {
        choice[i] += 1;
        if choice[i] < sizes[i] {
            return true;
        }
        choice[i] = 0;
    }
    false
}

/// Ordered compositions of `n`.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (0u64..1 << (n - 1))
        .map(|mask| {
            let mut parts = Vec::new();
            let mut len = 1;
            for i in 0..n - 1 {
                if mask >> i & 1 == 1 {
                    parts.push(len);
                    len = 1;
                } else {
                    len += 1;
                }
            }
            parts.push(len);
            parts
        })
        .collect()
}

/// Strictly decreasing slope sequences on a fixed composition with integral
/// orbit sums, under the polygon `prefix` and ending on it.
#[allow(clippy::too_many_arguments)]
fn polygon_rec(
    sizes: &[usize],
    prefix: &[Q],
    d: i64,
    j: usize,
    pos: usize,
    prev: &Q,
    prev_slope: Option<&Q>,
    slopes: &mut Vec<Q>,
    out: &mut Vec<(Vec<usize>, Vec<Q>)>,
) {
    if j == sizes.len() {
        if *prev == prefix[pos] {
            out.push((sizes.to_vec(), slopes.clone()));
        }
        return;
    }
    let m = sizes[j] as i64;
    let end = pos + sizes[j];
    let total = prefix.last().unwrap();
    let rest = (prefix.len() - 1 - end) as i64;
    let dq = qi(d);
    let hi = ((&prefix[end] - prev) * &dq).floor().to_integer();
    let mut chis = Vec::new();
    if rest == 0 {
        let exact = (total - prev) * &dq;
        if exact.is_integer() && exact.to_integer() <= hi {
            chis.push(exact.to_integer());
        }
    } else {
        let lo_bound = (total - prev) * &dq * qi(m) / qi(m + rest);
        let lo: num_bigint::BigInt = lo_bound.floor().to_integer() + 1;
        let mut c = lo;
        while c <= hi {
            chis.push(c.clone());
            c += 1;
        }
    }
    for chi in chis {
        let slope = Q::new(chi.clone(), (d * m).into());
        if prev_slope.is_some_and(|p| slope >= *p) {
            continue;
        }
        let next = prev + Q::new(chi.clone(), d.into());
        if next > prefix[end] {
            continue;
        }
        slopes.push(slope.clone());
        polygon_rec(sizes, prefix, d, j + 1, end, &next, Some(&slope), slopes, out);
        slopes.pop();
    }
}

/// `T(p) = (S_p, θ(p), κ(μ_p))` for a strictly decreasing pair.
pub fn t_map(rd: &RootDatum, p: &CocharacterPair) -> Result<IsocrystalClass> {
    p.validate(rd)?;
    if !is_sd(rd, p) {
        return Err(Error::NotStrictlyDecreasing);
    }
    Ok(IsocrystalClass {
        levi: p.levi,
        newton: p.theta(rd),
        kappa: kappa_at(rd, rd.delta(), &p.mu),
    })
}

/// `T^{-1}(b) ∩ SD_μ`.
pub fn fiber_t(rd: &RootDatum, b: &IsocrystalClass, mu: &[i64]) -> Vec<CocharacterPair> {
    sd_set(rd, mu)
        .into_iter()
        .filter(|p| t_map(rd, p).is_ok_and(|t| t == *b))
        .collect()
}

/// The class `b_S` of `M_S` attached to `b` for `S ⊇ S_b`, with its datum.
pub fn b_transfer(rd: &RootDatum, b: &IsocrystalClass, s: LeviSet) -> Result<(RootDatum, IsocrystalClass)> {
    if !b.levi.is_subset(s) {
        return Err(Error::LeviMismatch(format!("{} does not contain {}", s, b.levi)));
    }
    let sub = rd.levi_datum(s)?;
    let kappa = kappa_from_newton(&sub, &b.newton);
    Ok((sub, IsocrystalClass { levi: b.levi, newton: b.newton.clone(), kappa }))
}

/// Membership `b ∈ B(G, μ)` without enumerating.
pub fn in_b(rd: &RootDatum, b: &IsocrystalClass, mu: &[i64]) -> bool {
    let target = rd.gamma_average(mu);
    let dominant = b
        .levi
        .is_subset(rd.delta())
        && rd.delta().indices().iter().all(|&k| {
            let p = rd.pair_root(&b.newton, k);
            if b.levi.contains(k) {
                p.is_zero()
            } else {
                p.is_positive()
            }
        });
    dominant
        && rd.is_gamma_fixed(&b.newton)
        && rd.preceq(&b.newton, &target, OrderMode::Relative)
        && kappa_from_newton(rd, &b.newton) == kappa_at(rd, rd.delta(), mu)
        && b.kappa == kappa_at(rd, rd.delta(), mu)
        && center_character_lattice(rd, b.levi)
            .map(|l| {
                let chi: Vec<Q> = l
                    .basis
                    .iter()
                    .map(|row| row.iter().zip(&b.newton).fold(zero(), |a, (x, y)| a + y * qi(*x)))
                    .collect();
                chi.iter().all(|c| c.is_integer())
            })
            .unwrap_or(false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionReport {
    pub equal: bool,
    pub uncovered: Vec<IsocrystalClass>,
    pub outside: Vec<IsocrystalClass>,
}

/// Compare `T(SD_μ)` with `B(G, μ)`.
pub fn test_open_question(rd: &RootDatum, mu: &[i64]) -> Result<QuestionReport> {
    let mu = rd.dominant_rep(rd.delta(), mu);
    let b: BTreeSet<IsocrystalClass> = enumerate_b(rd, &mu)?.into_iter().collect();
    let image: BTreeSet<IsocrystalClass> = sd_set(rd, &mu)
        .iter()
        .map(|p| t_map(rd, p))
        .collect::<Result<_>>()?;
    let uncovered: Vec<_> = b.difference(&image).cloned().collect();
    let outside: Vec<_> = image.difference(&b).cloned().collect();
    Ok(QuestionReport { equal: uncovered.is_empty() && outside.is_empty(), uncovered, outside })
}
