//! Exhaustive and randomized verification drivers over the standard sweep
//! of groups and cocharacters.

use crate::error::Result;
use crate::groth::{
    gl4_fixture, check_harris, check_mant_total, decompose, evaluate_m, rel_blocks, BlockClass, CuspidalLine,
    EvalResult, FormalRep, GaloisPiece, GaloisSymbol, JacquetVector, Regime, RepClass, Supercuspidal,
};
use crate::kottwitz::{enumerate_b, test_open_question};
use crate::mant_sum::{
    reflex_subgroup, verify_i_transitivity, verify_induction_formula, verify_sign_cancellation, verify_sum_formula,
    verify_sumrel_bijection,
};
use crate::pair_poset::{dominant_conjugates, down_set};
use crate::rational::{q, qi, to_qvec, zero, Q};
use crate::root_datum::{build_root_datum, perm_apply, perm_compose, GroupSpec, LeviSet, OrderMode, RootDatum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// One group with one dominant cocharacter.
#[derive(Clone, Debug)]
pub struct Instance {
    pub group: String,
    pub rd: RootDatum,
    pub mu: Vec<i64>,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mu={:?}", self.group, self.mu)
    }
}

/// Outcome of one verification over a sweep.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        writeln!(f, "{}: {status} ({} cases, {} failures)", self.name, self.cases, self.failures.len())?;
        for x in &self.failures {
            writeln!(f, "  {x}")?;
        }
        Ok(())
    }
}

pub fn group_label(spec: &GroupSpec) -> String {
    let parts: Vec<String> = spec
        .factors
        .iter()
        .map(|f| if f.degree == 1 { format!("GL{}", f.rank) } else { format!("Res{}GL{}", f.degree, f.rank) })
        .collect();
    parts.join("x")
}

fn minuscule(n: usize) -> Vec<Vec<i64>> {
    (0..=n).map(|k| (0..n).map(|i| (i < k) as i64).collect()).collect()
}

/// Non-increasing vectors of length `n` with entries in `0..=top`.
fn dominant_up_to(n: usize, top: i64) -> Vec<Vec<i64>> {
    fn go(n: usize, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in (0..=cap).rev() {
            cur.push(v);
            go(n, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, top, &mut Vec::new(), &mut out);
    out
}

/// Concatenations of one minuscule block per embedding copy of each factor.
fn per_copy_minuscule(spec: &GroupSpec) -> Vec<Vec<i64>> {
    let mut acc: Vec<Vec<i64>> = vec![Vec::new()];
    for f in &spec.factors {
        for _ in 0..f.degree {
            let opts = minuscule(f.rank);
            acc = acc
                .into_iter()
                .flat_map(|a| {
                    opts.iter().map(move |o| {
                        let mut a = a.clone();
                        a.extend(o);
                        a
                    })
                })
                .collect();
        }
    }
    acc
}

fn instances_for(spec: GroupSpec, mus: Vec<Vec<i64>>) -> Vec<Instance> {
    let rd = build_root_datum(&spec).expect("sweep group");
    let group = group_label(&spec);
    mus.into_iter().map(|mu| Instance { group: group.clone(), rd: rd.clone(), mu }).collect()
}

/// Every dominant cocharacter of `spec` that is minuscule on each embedding
/// copy.
pub fn group_instances(spec: &GroupSpec) -> Result<Vec<Instance>> {
    spec.validate()?;
    build_root_datum(spec)?;
    Ok(instances_for(spec.clone(), per_copy_minuscule(spec)))
}

/// Which families of the standard sweep to include.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepClass {
    /// Bound on the relative rank `Σ n_i`.
    pub max_rank: usize,
    pub split_minuscule: bool,
    pub split_small_weights: bool,
    pub restrictions: bool,
    pub products: bool,
}

impl SweepClass {
    pub fn full(max_rank: usize) -> Self {
        SweepClass { max_rank, split_minuscule: true, split_small_weights: true, restrictions: true, products: true }
    }

    pub fn split_minuscule(max_rank: usize) -> Self {
        SweepClass {
            max_rank,
            split_minuscule: true,
            split_small_weights: false,
            restrictions: false,
            products: false,
        }
    }
}

/// Minuscule `μ` on `GL_n` (n ≤ 6), weights in `{0,1,2}` on `GL_n` (n ≤ 4),
/// `Res_d GL_n` with `d ≤ 3, n ≤ 3`, and products of two factors of total
/// rank ≤ 6, all cut down to relative rank `max_rank`.
pub fn instances(class: SweepClass) -> Vec<Instance> {
    let mut out = Vec::new();
    if class.split_minuscule {
        for n in 1..=class.max_rank.min(6) {
            out.extend(instances_for(GroupSpec::gl(n), minuscule(n)));
        }
    }
    if class.split_small_weights {
        for n in 1..=class.max_rank.min(4) {
            let mus = dominant_up_to(n, 2).into_iter().filter(|m| m.contains(&2)).collect();
            out.extend(instances_for(GroupSpec::gl(n), mus));
        }
    }
    if class.restrictions {
        for d in 2..=3 {
            for n in 1..=class.max_rank.min(3) {
                let spec = GroupSpec::res(d, n);
                let mus = per_copy_minuscule(&spec);
                out.extend(instances_for(spec, mus));
            }
        }
    }
    if class.products {
        let mut specs = Vec::new();
        for a in 1..=3 {
            for b in a..=(6 - a) {
                specs.push(GroupSpec::product(&[(1, a), (1, b)]));
            }
        }
        specs.push(GroupSpec::product(&[(2, 1), (1, 2)]));
        specs.push(GroupSpec::product(&[(2, 2), (1, 1)]));
        for spec in specs {
            let rel: usize = spec.factors.iter().map(|f| f.rank).sum();
            if rel <= class.max_rank {
                let mus = per_copy_minuscule(&spec);
                out.extend(instances_for(spec, mus));
            }
        }
    }
    out
}

fn run<T, F>(name: &str, items: &[T], check: F) -> Report
where
    T: Sync,
    F: Fn(&T) -> Result<(usize, Vec<String>)> + Sync,
{
    let parts: Vec<(usize, Vec<String>)> = items
        .par_iter()
        .map(|it| check(it).unwrap_or_else(|e| (1, vec![format!("error: {e}")])))
        .collect();
    let mut report = Report { name: name.to_string(), ..Default::default() };
    for (c, f) in parts {
        report.cases += c;
        report.failures.extend(f);
    }
    report
}

/// Sum formula and the sign cancellation behind it.
pub fn verify_sum(items: &[Instance]) -> Report {
    run("sum", items, |it| {
        let mut fails = Vec::new();
        if !verify_sum_formula(&it.rd, &it.mu)? {
            fails.push(format!("{it}: sum formula"));
        }
        if !verify_sign_cancellation(&it.rd, &it.mu)? {
            fails.push(format!("{it}: sign cancellation"));
        }
        Ok((1, fails))
    })
}

fn stable_supersets(rd: &RootDatum, s: LeviSet) -> Vec<LeviSet> {
    rd.stable_levis().into_iter().filter(|t| s.is_subset(*t)).collect()
}

/// Induction formula for every `S ⊇ S_b`.
pub fn verify_induction(items: &[Instance]) -> Report {
    run("induction", items, |it| {
        let mut fails = Vec::new();
        let mut cases = 0;
        for b in enumerate_b(&it.rd, &it.mu)? {
            for s in stable_supersets(&it.rd, b.levi) {
                cases += 1;
                if !verify_induction_formula(&it.rd, s, &b, &it.mu)? {
                    fails.push(format!("{it}: b={b} S={s}"));
                }
            }
        }
        Ok((cases, fails))
    })
}

/// I-transitivity for every `S_b ⊆ S2 ⊆ S1`.
pub fn verify_itrans(items: &[Instance]) -> Report {
    run("itrans", items, |it| {
        let mut fails = Vec::new();
        let mut cases = 0;
        for b in enumerate_b(&it.rd, &it.mu)? {
            let sups = stable_supersets(&it.rd, b.levi);
            for &s1 in &sups {
                for &s2 in sups.iter().filter(|s2| s2.is_subset(s1)) {
                    cases += 1;
                    if !verify_i_transitivity(&it.rd, s2, s1, &b, &it.mu)? {
                        fails.push(format!("{it}: b={b} S2={s2} S1={s1}"));
                    }
                }
            }
        }
        Ok((cases, fails))
    })
}

/// The bijection between relevant pairs and `⨿_b` I-sets, for every stable `S`.
pub fn verify_sumrel(items: &[Instance]) -> Report {
    run("sumrel", items, |it| {
        let mut fails = Vec::new();
        let levis = it.rd.stable_levis();
        for &s in &levis {
            if !verify_sumrel_bijection(&it.rd, s, &it.mu)? {
                fails.push(format!("{it}: S={s}"));
            }
        }
        Ok((levis.len(), fails))
    })
}

/// `T(SD_μ) = B(G, μ)`, reported per instance.
pub fn verify_question(items: &[Instance]) -> Report {
    run("question", items, |it| {
        let r = test_open_question(&it.rd, &it.mu)?;
        let mut fails = Vec::new();
        for b in &r.uncovered {
            fails.push(format!("{it}: {b} not in the image of T"));
        }
        for b in &r.outside {
            fails.push(format!("{it}: T produces {b} outside B(G,mu)"));
        }
        Ok((1, fails))
    })
}

/// `⟨ρ_G - ρ_{M_{S1}}, ·⟩` agrees on `M_{S1}`-conjugate cocharacters, for
/// every pair below `(G, μ)` and every `S2 ⊆ S1`.
pub fn verify_transtwist(items: &[Instance]) -> Report {
    run("transtwist", items, |it| {
        let rd = &it.rd;
        let mut fails = Vec::new();
        let mut cases = 0;
        let top = crate::pair_poset::CocharacterPair::top(rd, &it.mu);
        for p in down_set(rd, &top).nodes {
            let rel: Vec<Q> = rd.rho().iter().zip(rd.rho_vector(p.levi)).map(|(a, b)| a - b).collect();
            let pair = |m: &[i64]| rel.iter().zip(m).fold(zero(), |a, (r, &x)| a + r * qi(x));
            let base = pair(&p.mu);
            for s2 in p.levi.subsets().into_iter().filter(|s| rd.is_gamma_stable(*s)) {
                for m in dominant_conjugates(rd, p.levi, s2, &p.mu) {
                    cases += 1;
                    if pair(&m) != base {
                        fails.push(format!("{it}: pair {} S2={s2} mu2={m:?}", p.label(rd)));
                    }
                }
            }
        }
        Ok((cases, fails))
    })
}

/// A supercuspidal of `G`: one line per factor.
pub fn kottwitz_rep(rd: &RootDatum) -> Result<(Supercuspidal, FormalRep)> {
    let lines = rel_blocks(rd, rd.delta())?
        .iter()
        .map(|b| CuspidalLine::new(&format!("pi{}", b.factor), q(b.factor as i64 + 1, 2), b.len))
        .collect();
    let rho = Supercuspidal { levi: rd.delta(), lines };
    let rep = rho.induce(rd)?;
    Ok((rho, rep))
}

/// `[ρ] ⊗ r_{-μ} ∘ LL(ρ)` twisted by `|·|^{-<ρ_G, μ>}`, built directly from
/// the weights of `μ` on each embedding copy.
pub fn kottwitz_expected(rd: &RootDatum, mu: &[i64], rho: &Supercuspidal) -> Result<EvalResult> {
    let mu = rd.dominant_rep(rd.delta(), mu);
    let factors = rd.factors().expect("factor data").to_vec();
    let mut pieces = Vec::new();
    let mut tate = -rd.rho_pairing(&mu, rd.delta());
    for (fi, f) in factors.iter().enumerate() {
        let line = &rho.lines[fi];
        for copy in 0..f.degree {
            let st = f.offset + copy * f.rank;
            let w = mu[st..st + f.rank].to_vec();
            if w.iter().all(|&x| x == 0) {
                continue;
            }
            let size: i64 = w.iter().sum();
            tate -= qi(size) * &line.twist;
            pieces.push(GaloisPiece { factor: fi, copy, id: line.id.clone(), weights: w });
        }
    }
    pieces.sort();
    let class = RepClass {
        blocks: rho.lines.iter().map(|l| BlockClass::Cell { support: vec![l.clone()], bits: vec![] }).collect(),
    };
    let mut out = EvalResult::new();
    out.add(class, GaloisSymbol { pieces, tate, field: reflex_subgroup(rd, &mu), orbit_size: 1 }, 1);
    Ok(out)
}

/// `Mant_{b,μ}` of a supercuspidal is the Kottwitz term for basic `b` and 0
/// otherwise.
pub fn verify_kottwitz(items: &[Instance]) -> Report {
    run("kottwitz", items, |it| {
        let (rho, rep) = kottwitz_rep(&it.rd)?;
        let expected = kottwitz_expected(&it.rd, &it.mu, &rho)?;
        let mut fails = Vec::new();
        let mut cases = 0;
        for b in enumerate_b(&it.rd, &it.mu)? {
            cases += 1;
            let got = evaluate_m(&it.rd, &b, &it.mu, &rep)?;
            let ok = if b.is_basic(&it.rd) { got == expected } else { got.is_zero() };
            if !ok {
                fails.push(format!("{it}: b={b} got {}", got.render(&it.rd).replace('\n', " ")));
            }
        }
        Ok((cases, fails))
    })
}

/// Supercuspidal data on `M_S`: unlinked lines, or lines of one cuspidal
/// family in consecutive twists where the block sizes allow linking.
pub fn harris_inputs(rd: &RootDatum, s: LeviSet) -> Result<Vec<Supercuspidal>> {
    let blocks = rel_blocks(rd, s)?;
    let generic = blocks.iter().enumerate().map(|(j, b)| CuspidalLine::new(&format!("r{j}"), q(j as i64, 3), b.len)).collect();
    let linked = blocks.iter().enumerate().map(|(j, b)| CuspidalLine::new(&format!("d{}", b.len), qi(j as i64), b.len)).collect();
    Ok(vec![Supercuspidal { levi: s, lines: generic }, Supercuspidal { levi: s, lines: linked }])
}

fn is_minuscule(mu: &[i64]) -> bool {
    let lo = mu.iter().min().copied().unwrap_or(0);
    mu.iter().all(|&m| m == lo || m == lo + 1)
}

/// Harris-Viehmann identity for every `S ⊆ S_b`; instances with a
/// non-minuscule `μ` are skipped.
pub fn verify_harris(items: &[Instance]) -> Report {
    run("harris", items, |it| {
        let rd = &it.rd;
        if !is_minuscule(&it.mu) {
            return Ok((0, Vec::new()));
        }
        let mut fails = Vec::new();
        let mut cases = 0;
        for b in enumerate_b(rd, &it.mu)? {
            for s in b.levi.subsets().into_iter().filter(|s| rd.is_gamma_stable(*s)) {
                for rho in harris_inputs(rd, s)? {
                    cases += 1;
                    if !check_harris(rd, s, &b, &it.mu, &rho)? {
                        let lines: Vec<String> = rho.lines.iter().map(|l| l.to_string()).collect();
                        fails.push(format!("{it}: b={b} S={s} rho={}", lines.join(",")));
                    }
                }
            }
        }
        Ok((cases, fails))
    })
}

/// A random combination of irreducibles with regular support on `GL_n`.
pub fn random_regular_rep(rd: &RootDatum, rng: &mut ChaCha8Rng) -> Result<FormalRep> {
    let n = rd.rank();
    let mut support: Vec<CuspidalLine> = Vec::new();
    while support.len() < n {
        let id = if rng.gen_bool(0.7) { "a" } else { "b" };
        let l = CuspidalLine::new(id, qi(rng.gen_range(0..4)), 1);
        if !support.contains(&l) {
            support.push(l);
        }
    }
    let full = RepClass { blocks: vec![BlockClass::Induced { support }] }.vector();
    let pairs = decompose(&full)?;
    let count = rng.gen_range(1..=2.min(pairs.len()));
    let mut v = JacquetVector::new();
    for _ in 0..count {
        let (cls, _) = &pairs[rng.gen_range(0..pairs.len())];
        let c = if rng.gen_bool(0.5) { 1 } else { -2 };
        for (o, k) in cls.vector() {
            *v.entry(o).or_insert(0) += k * c;
        }
    }
    v.retain(|_, c| *c != 0);
    FormalRep::from_vector(rd, Regime::Regular, v)
}

/// `Σ_b Mant_{b,μ}(π) = [G, μ](π)` on the tabulated `GL_4` example and on
/// `samples` random regular representations of `GL_n`, `n ≤ max_n`.
pub fn verify_consistency(samples: usize, max_n: usize, seed: u64) -> Report {
    let mut cases: Vec<(RootDatum, Vec<i64>, FormalRep, String)> = Vec::new();
    let rd4 = gl4_fixture::datum();
    for (label, _) in gl4_fixture::OMEGA {
        let rep = gl4_fixture::rep(label).expect("fixture");
        cases.push((rd4.clone(), gl4_fixture::mu(), rep, format!("fixture [{label}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let n = rng.gen_range(2..=max_n.max(2));
        let rd = build_root_datum(&GroupSpec::gl(n)).expect("GL_n");
        let k = rng.gen_range(1..n);
        let mu: Vec<i64> = (0..n).map(|j| (j < k) as i64).collect();
        match random_regular_rep(&rd, &mut rng) {
            Ok(rep) => cases.push((rd, mu, rep, format!("sample {i} GL{n}"))),
            Err(e) => cases.push((rd, mu, FormalRep { regime: Regime::Regular, vector: Default::default() }, format!("sample {i}: {e}"))),
        }
    }
    run("consistency", &cases, |(rd, mu, rep, label)| {
        let ok = check_mant_total(rd, mu, rep)?;
        Ok((1, if ok { vec![] } else { vec![format!("{label} mu={mu:?}")] }))
    })
}

/// Relative reflections, restriction coefficients of fundamental weights
/// and monotonicity of Galois averaging.
pub fn verify_relative_weyl(spec: &GroupSpec, samples: usize, seed: u64) -> Report {
    let label = group_label(spec);
    let items = [spec.clone()];
    run("relative_weyl", &items, |spec| {
        let rd = build_root_datum(spec)?;
        let mut fails = Vec::new();
        let mut cases = 0;
        let n = rd.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for alpha in rd.delta().indices() {
            cases += 1;
            let w = rd.relative_reflection(alpha)?;
            let id: Vec<usize> = (0..n).collect();
            if perm_compose(&w, &w) != id {
                fails.push(format!("{label}: reflection for root {alpha} is not an involution"));
            }
            if !rd.commutes_with_gamma(&w) {
                fails.push(format!("{label}: reflection for root {alpha} is not Galois-invariant"));
            }
            // On Galois-fixed vectors: negates the pairing with the root and
            // moves every vector along one fixed direction.
            let mut direction: Option<Vec<Q>> = None;
            for _ in 0..8 {
                let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
                let x = rd.gamma_average(&x);
                let wx = perm_apply(&w, &x);
                let p = rd.pair_root(&x, alpha);
                if rd.pair_root(&wx, alpha) != -p.clone() || !rd.is_gamma_fixed(&wx) {
                    fails.push(format!("{label}: reflection for root {alpha} misbehaves on {x:?}"));
                    break;
                }
                if p == zero() {
                    if wx != x {
                        fails.push(format!("{label}: reflection for root {alpha} moves an orthogonal vector"));
                    }
                    continue;
                }
                let d: Vec<Q> = x.iter().zip(&wx).map(|(a, b)| (a - b) / &p).collect();
                match &direction {
                    None => direction = Some(d),
                    Some(d0) if *d0 != d => {
                        fails.push(format!("{label}: reflection for root {alpha} is not rank one"));
                        break;
                    }
                    _ => {}
                }
            }
            let orbit: Vec<usize> = (0..rd.gamma().len()).map(|g| rd.gamma_on_roots(g)[alpha]).collect();
            let coords: Vec<usize> = orbit.iter().map(|&k| rd.root_coord(k)).collect();
            let adjacent = coords.iter().any(|&c| coords.contains(&(c + 1)));
            let want = if adjacent { 2 } else { 1 };
            match rd.fundamental_weight_restriction(alpha) {
                Ok(c) if c == want => {}
                other => fails.push(format!("{label}: restriction coefficient for root {alpha}: {other:?}, expected {want}")),
            }
        }
        for _ in 0..samples {
            cases += 1;
            let lo: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            let mut hi = lo.clone();
            for k in rd.delta().indices() {
                let c = rng.gen_range(0..=2);
                let i = rd.root_coord(k);
                hi[i] += c;
                hi[i + 1] -= c;
            }
            let (lo_q, hi_q) = (to_qvec(&lo), to_qvec(&hi));
            if !rd.preceq(&lo_q, &hi_q, OrderMode::Absolute) {
                fails.push(format!("{label}: constructed pair {lo:?} <= {hi:?} not detected"));
                continue;
            }
            if !rd.preceq(&rd.gamma_average(&lo), &rd.gamma_average(&hi), OrderMode::Relative) {
                fails.push(format!("{label}: averaging breaks {lo:?} <= {hi:?}"));
            }
        }
        Ok((cases, fails))
    })
}
