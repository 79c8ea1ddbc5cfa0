//! Torus-translate detection: which cosets `a · T_N` of subtori lie in the
//! zero set of a polynomial system in `G_m^n`.
//!
//! A subtorus is given by the lattice `N ⊂ Z^n` spanned by the rows of an
//! exponent matrix `E`; the coset `a · T_N` is parametrized by
//! `t -> (a_1 t^{E_1}, ..., a_n t^{E_n})`. Substituting splits each
//! polynomial into parts indexed by `E·I`, and the translate lies in the
//! variety iff every part vanishes at `a`.

use crate::exactnum::{lattice, QMatrix, Rational, UniPoly};
use crate::groebner::{self, Budget, GroebnerError};
use crate::multipoly::MultiPoly;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScanError {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("subgroup has ambient dimension {got}, expected {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("tier mode needs a single polynomial in three variables")]
    TierModeUnsupported,
    #[error("distinguished exponent {0:?} is not in the support")]
    NotInSupport(Vec<i32>),
}

/// Subgroup of `Z^n` stored as its row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ExponentSubgroup {
    n: usize,
    basis: Vec<Vec<i64>>,
}

impl ExponentSubgroup {
    /// The lattice spanned by `rows`.
    pub fn new(n: usize, rows: &[Vec<i64>]) -> Self {
        ExponentSubgroup { n, basis: lattice::hnf(rows) }
    }

    /// `span_Q(rows) ∩ Z^n`.
    pub fn saturated(n: usize, rows: &[Vec<i64>]) -> Self {
        ExponentSubgroup { n, basis: lattice::saturate(rows) }
    }

    pub fn identity(n: usize) -> Self {
        ExponentSubgroup { n, basis: lattice::identity(n) }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn is_saturated(&self) -> bool {
        self.basis.is_empty() || lattice::saturate(&self.basis) == self.basis
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        lattice::hnf(&rows) == self.basis
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateStatus {
    Open,
    PrunedSingleton,
    TrivialIdeal,
    Survivor,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosetCandidate {
    pub subgroup: ExponentSubgroup,
    /// Generators of the coefficient ideal. For a survivor these are the
    /// generators with coordinate-hyperplane components removed, pulled back
    /// from the slice when `fixed` columns of `E` are unimodular and left on
    /// the slice otherwise.
    #[serde(skip)]
    pub ideal: Vec<MultiPoly>,
    pub status: CandidateStatus,
    /// Variables `i` with a generator `a_i^k ∓ 1` (translates by torsion).
    pub binomial_torsion: Vec<usize>,
    /// Coordinates set to 1 before the torus check. The coefficient variety
    /// is stable under `T_N`, so fixing one coordinate per pivot of `N`
    /// keeps exactly one representative of each coset over the algebraic
    /// closure.
    pub fixed: Vec<usize>,
    pub note: Option<String>,
}

fn ring_of(polys: &[MultiPoly]) -> Result<usize, ScanError> {
    let n = polys.first().map_or(0, |p| p.nvars());
    if polys.iter().any(|p| p.nvars() != n) {
        return Err(ScanError::RingMismatch);
    }
    Ok(n)
}

/// Distinct images `E·I` of each support.
fn projections(polys: &[MultiPoly], e: &[Vec<i64>]) -> Vec<BTreeSet<Vec<i64>>> {
    polys
        .iter()
        .map(|p| p.support().iter().map(|m| e.iter().map(|row| row.iter().zip(m).map(|(a, &b)| a * b as i64).sum()).collect()).collect())
        .collect()
}

/// All subgroups reachable from `m` by repeatedly passing to the orthogonal
/// complement, inside the current subgroup, of a difference of projected
/// support elements. Subgroups are saturated; the result includes `m` and is
/// sorted by rank (descending) and then by HNF.
pub fn enumerate_subspaces(polys: &[MultiPoly], m: &ExponentSubgroup) -> Result<Vec<ExponentSubgroup>, ScanError> {
    let n = ring_of(polys)?;
    if m.ambient() != n {
        return Err(ScanError::DimensionMismatch { got: m.ambient(), want: n });
    }
    let start = ExponentSubgroup::saturated(n, m.basis());
    let mut seen: BTreeSet<ExponentSubgroup> = BTreeSet::new();
    seen.insert(start.clone());
    let mut todo = vec![start];
    while let Some(s) = todo.pop() {
        let r = s.rank();
        if r <= 1 {
            continue;
        }
        let mut dirs: BTreeSet<Vec<i64>> = BTreeSet::new();
        for proj in projections(polys, s.basis()) {
            let pts: Vec<&Vec<i64>> = proj.iter().collect();
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    let d: Vec<i64> = pts[a].iter().zip(pts[b]).map(|(x, y)| x - y).collect();
                    dirs.insert(lattice::primitive(&d));
                }
            }
        }
        let children: Vec<ExponentSubgroup> = dirs
            .par_iter()
            .map(|d| {
                let ker = lattice::integer_kernel(&[d.clone()], r);
                let rows: Vec<Vec<i64>> =
                    ker.iter().map(|c| (0..n).map(|j| c.iter().zip(s.basis()).map(|(ci, row)| ci * row[j]).sum()).collect()).collect();
                ExponentSubgroup::saturated(n, &rows)
            })
            .collect();
        for c in children {
            if c.rank() > 0 && seen.insert(c.clone()) {
                todo.push(c);
            }
        }
    }
    let mut out: Vec<ExponentSubgroup> = seen.into_iter().collect();
    out.sort_by(|a, b| b.rank().cmp(&a.rank()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Parts `p_J` of every polynomial, as ordinary polynomials in `a`.
pub fn coefficient_parts(polys: &[MultiPoly], n: &ExponentSubgroup) -> Vec<Vec<MultiPoly>> {
    polys
        .iter()
        .map(|p| p.substitute_torus(n.basis()).into_iter().map(|(_, q)| q.clear_denominators_monomial().set_laurent(false)).collect())
        .collect()
}

/// True if some part is a single term, which forces a coordinate of `a` to
/// vanish.
pub fn has_singleton(parts: &[Vec<MultiPoly>]) -> bool {
    parts.iter().flatten().any(|q| q.nterms() == 1)
}

/// Coordinates fixed to 1 by [`torus_slice`]: for rank one the first entry
/// with `|e_i| = 1` (else the first nonzero one), otherwise the HNF pivots.
pub fn slice_coords(n: &ExponentSubgroup) -> Vec<usize> {
    let b = n.basis();
    if b.len() == 1 {
        let e = &b[0];
        return (0..e.len()).find(|&i| e[i].abs() == 1).or_else(|| (0..e.len()).find(|&i| e[i] != 0)).into_iter().collect();
    }
    b.iter().filter_map(|r| r.iter().position(|&x| x != 0)).collect()
}

/// Sets the `fixed` coordinates to 1 and divides out monomial factors, which
/// are units on the torus.
pub fn torus_slice(polys: &[MultiPoly], fixed: &[usize]) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = Vec::new();
    for p in polys {
        let q = MultiPoly::from_terms(
            p.nvars(),
            p.terms().map(|(m, c)| (m.0.iter().enumerate().map(|(i, &e)| if fixed.contains(&i) { 0 } else { e }).collect(), c.clone())),
        );
        if q.is_zero() {
            continue;
        }
        let q = q.strip_monomial_factor().set_laurent(false).primitive();
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

/// Pulls the sliced ideal back to all of `G_m^n` along the projection
/// `a -> a ∘ t(a)^{-E}` onto the slice. Needs the fixed columns of `E` to be
/// unimodular so that `t(a)` is a Laurent monomial.
fn unslice(ideal: &[MultiPoly], n: &ExponentSubgroup, fixed: &[usize]) -> Option<Vec<MultiPoly>> {
    let e = n.basis();
    let dim = n.ambient();
    let m = QMatrix::from_rows(fixed.iter().map(|&s| e.iter().map(|row| Rational::from_integer(row[s].into())).collect()).collect());
    let minv = m.inverse()?;
    if minv.to_rows().iter().flatten().any(|x| !x.is_integer()) {
        return None;
    }
    let subs: Vec<MultiPoly> = (0..dim)
        .map(|j| {
            let mut exps = vec![0i32; dim];
            exps[j] += 1;
            for (si, &s) in fixed.iter().enumerate() {
                let w: i64 = (0..e.len()).map(|k| e[k][j] * minv.row(k)[si].to_integer().to_i64().unwrap()).sum();
                exps[s] -= w as i32;
            }
            MultiPoly::monomial(dim, exps, Rational::one())
        })
        .collect();
    let mut out = Vec::new();
    for g in ideal {
        let q = g.compose(&subs)?.clear_denominators_monomial().primitive();
        if !q.is_zero() && !out.contains(&q) {
            out.push(q);
        }
    }
    Some(out)
}

fn binomial_torsion(ideal: &[MultiPoly]) -> Vec<usize> {
    let mut out = BTreeSet::new();
    for g in ideal {
        let terms: Vec<_> = g.terms().collect();
        if terms.len() != 2 || terms[0].0 .0.iter().any(|&x| x != 0) {
            continue;
        }
        let vars: Vec<usize> = (0..g.nvars()).filter(|&i| terms[1].0 .0[i] != 0).collect();
        let (c0, c1) = (terms[0].1, terms[1].1);
        if vars.len() == 1 && c0.abs() == c1.abs() {
            out.insert(vars[0]);
        }
    }
    out.into_iter().collect()
}

/// Builds the coefficient ideal of `polys` along `n` and classifies it.
pub fn coefficient_variety(polys: &[MultiPoly], n: &ExponentSubgroup, budget: &Budget) -> CosetCandidate {
    let parts = coefficient_parts(polys, n);
    let ideal: Vec<MultiPoly> = parts.iter().flatten().cloned().collect();
    let mut cand = CosetCandidate { subgroup: n.clone(), ideal, status: CandidateStatus::Open, binomial_torsion: vec![], fixed: vec![], note: None };
    if has_singleton(&parts) {
        cand.status = CandidateStatus::PrunedSingleton;
        return cand;
    }
    classify_on_torus(&mut cand, budget);
    cand
}

/// Removes coordinate-hyperplane components and decides triviality.
fn classify_on_torus(cand: &mut CosetCandidate, budget: &Budget) {
    cand.fixed = slice_coords(&cand.subgroup);
    cand.ideal = torus_slice(&cand.ideal, &cand.fixed);
    match groebner::torus_trivial(&cand.ideal, budget) {
        Ok(true) => {
            cand.status = CandidateStatus::TrivialIdeal;
            return;
        }
        Ok(false) => {}
        Err(e) => {
            cand.status = CandidateStatus::Undetermined;
            cand.note = Some(e.to_string());
            return;
        }
    }
    match groebner::saturate_torus(&cand.ideal, budget).and_then(|s| Ok((groebner::is_trivial(&s, budget)?, s))) {
        Ok((true, _)) => cand.status = CandidateStatus::TrivialIdeal,
        Ok((false, s)) => {
            cand.binomial_torsion = binomial_torsion(&s);
            cand.ideal = unslice(&s, &cand.subgroup, &cand.fixed).unwrap_or(s);
            cand.status = CandidateStatus::Survivor;
        }
        Err(e) => {
            cand.status = CandidateStatus::Undetermined;
            cand.note = Some(e.to_string());
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanOptions {
    /// Replicates the three-tier search with a distinguished support element.
    pub tier_mode: Option<TierConfig>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TierConfig {
    pub lambda1: Vec<i32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TierCounts {
    /// Distinct candidate vectors with `E` and `-E` identified.
    pub tier1_up_to_sign: usize,
    /// Distinct candidate vectors counting `E` and `-E` separately.
    pub tier1_signed: usize,
    pub tier2: usize,
    pub tier3: usize,
    pub tier2_vectors: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankCount {
    pub rank: usize,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub candidates_by_rank: Vec<RankCount>,
    pub pruned_singleton: usize,
    pub trivial: usize,
    pub undetermined: usize,
    pub survivors: Vec<CosetCandidate>,
    pub tiers: Option<TierCounts>,
    /// Stage counts for saturated scans: after singleton pruning, after
    /// peripheral saturation, after the extra conditions.
    pub stages: Vec<(String, usize)>,
    #[serde(skip)]
    pub all: Vec<CosetCandidate>,
}

fn rank_counts(subs: &[ExponentSubgroup]) -> Vec<RankCount> {
    let mut m: BTreeMap<usize, usize> = BTreeMap::new();
    for s in subs {
        *m.entry(s.rank()).or_default() += 1;
    }
    m.into_iter().rev().map(|(rank, count)| RankCount { rank, count }).collect()
}

fn summarize(subs: &[ExponentSubgroup], cands: Vec<CosetCandidate>) -> ScanReport {
    let count = |s: CandidateStatus| cands.iter().filter(|c| c.status == s).count();
    ScanReport {
        candidates_by_rank: rank_counts(subs),
        pruned_singleton: count(CandidateStatus::PrunedSingleton),
        trivial: count(CandidateStatus::TrivialIdeal),
        undetermined: count(CandidateStatus::Undetermined),
        survivors: cands.iter().filter(|c| c.status == CandidateStatus::Survivor).cloned().collect(),
        tiers: None,
        stages: vec![],
        all: cands,
    }
}

/// Algorithm "torus containment": enumerate subgroups, then test each
/// coefficient ideal.
pub fn scan(polys: &[MultiPoly], m: &ExponentSubgroup, options: &ScanOptions, budget: &Budget) -> Result<ScanReport, ScanError> {
    if let Some(t) = &options.tier_mode {
        return tier_scan(polys, &t.lambda1, budget);
    }
    let subs = enumerate_subspaces(polys, m)?;
    let cands: Vec<CosetCandidate> = subs.par_iter().map(|n| coefficient_variety(polys, n, budget)).collect();
    Ok(summarize(&subs, cands))
}

fn sub3(a: &[i32], b: &[i32]) -> [i64; 3] {
    [(a[0] - b[0]) as i64, (a[1] - b[1]) as i64, (a[2] - b[2]) as i64]
}

/// Support sorted by degree-reverse-lexicographic order, largest first.
pub fn degrevlex_sorted(support: &[Vec<i32>]) -> Vec<Vec<i32>> {
    let mut s = support.to_vec();
    s.sort_by(|a, b| {
        let da: i32 = a.iter().sum();
        let db: i32 = b.iter().sum();
        db.cmp(&da).then_with(|| {
            for i in (0..a.len()).rev() {
                if a[i] != b[i] {
                    return a[i].cmp(&b[i]);
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    s
}

/// True if every support element shares its pairing with `e` with another.
pub fn friend_condition(support: &[Vec<i32>], e: &[i64]) -> bool {
    let mut cnt: BTreeMap<i64, usize> = BTreeMap::new();
    for m in support {
        *cnt.entry(m.iter().zip(e).map(|(&a, &b)| a as i64 * b).sum()).or_default() += 1;
    }
    cnt.values().all(|&c| c >= 2)
}

/// Rank-one candidates for a surface in `G_m^3`.
///
/// Tier 1: for each friend `λ1'` of the fixed `λ1`, take the first `λ2` (in
/// degrevlex order of the support) such that `λ1 - λ1'` and `λ2 - λ2'` are
/// independent for every `λ2' ≠ λ2`; each such pair of differences gives a
/// candidate `E` by the cross product. Tier 2 keeps the `E` for which every
/// support element has a friend. Tier 3 tests the coefficient ideal.
pub fn tier_scan(polys: &[MultiPoly], lambda1: &[i32], budget: &Budget) -> Result<ScanReport, ScanError> {
    if polys.len() != 1 || polys[0].nvars() != 3 {
        return Err(ScanError::TierModeUnsupported);
    }
    let supp = degrevlex_sorted(&polys[0].support());
    if !supp.iter().any(|m| m == lambda1) {
        return Err(ScanError::NotInSupport(lambda1.to_vec()));
    }
    let tier1: Vec<Vec<[i64; 3]>> = supp
        .par_iter()
        .filter(|l1p| l1p.as_slice() != lambda1)
        .map(|l1p| {
            let d1 = sub3(lambda1, l1p);
            for l2 in &supp {
                let es: Option<Vec<[i64; 3]>> = supp
                    .iter()
                    .filter(|l2p| *l2p != l2)
                    .map(|l2p| {
                        let c = lattice::cross3(&d1, &sub3(l2, l2p));
                        if c == [0, 0, 0] {
                            None
                        } else {
                            Some(c)
                        }
                    })
                    .collect();
                if let Some(es) = es {
                    return es;
                }
            }
            vec![]
        })
        .collect();
    let mut signed: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut unsigned: BTreeSet<Vec<i64>> = BTreeSet::new();
    for c in tier1.iter().flatten() {
        let g = c.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
        signed.insert(c.iter().map(|x| x / g).collect());
        unsigned.insert(lattice::primitive(c));
    }
    let tier2: Vec<Vec<i64>> = unsigned.iter().filter(|e| friend_condition(&supp, e)).cloned().collect();
    let cands: Vec<CosetCandidate> = tier2.par_iter().map(|e| coefficient_variety(polys, &ExponentSubgroup::saturated(3, &[e.clone()]), budget)).collect();
    let subs: Vec<ExponentSubgroup> = cands.iter().map(|c| c.subgroup.clone()).collect();
    let mut rep = summarize(&subs, cands);
    rep.tiers = Some(TierCounts {
        tier1_up_to_sign: unsigned.len(),
        tier1_signed: signed.len(),
        tier2: tier2.len(),
        tier3: rep.survivors.len(),
        tier2_vectors: tier2,
    });
    Ok(rep)
}

/// Saturated scan: singleton pruning, then removal of translates lying in
/// the peripheral divisor, then the extra conditions. Each stage saturates by
/// the coefficient ideal of every peripheral polynomial in turn.
pub fn saturated_scan(
    polys: &[MultiPoly],
    m: &[ExponentSubgroup],
    peripheral: &[MultiPoly],
    extra: &[MultiPoly],
    budget: &Budget,
) -> Result<ScanReport, ScanError> {
    let mut all: BTreeSet<ExponentSubgroup> = BTreeSet::new();
    for mi in m {
        all.extend(enumerate_subspaces(polys, mi)?);
    }
    let mut subs: Vec<ExponentSubgroup> = all.into_iter().collect();
    subs.sort_by(|a, b| b.rank().cmp(&a.rank()).then_with(|| a.cmp(b)));
    let cands: Vec<CosetCandidate> = subs.par_iter().map(|n| peripheral_stage(polys, n, peripheral, extra, budget)).collect();
    let after_singleton = cands.iter().filter(|c| c.status != CandidateStatus::PrunedSingleton).count();
    let after_peripheral = cands.iter().filter(|c| !matches!(c.status, CandidateStatus::PrunedSingleton) && c.note.as_deref() != Some("peripheral")).count();
    let final_count = cands.iter().filter(|c| matches!(c.status, CandidateStatus::Survivor | CandidateStatus::Undetermined)).count();
    let mut rep = summarize(&subs, cands);
    rep.stages = vec![
        ("enumerated".into(), subs.len()),
        ("after-singleton".into(), after_singleton),
        ("after-peripheral".into(), after_peripheral),
        ("after-conditions".into(), final_count),
    ];
    Ok(rep)
}

/// Counts of the enumeration stage alone, without any Gröbner work.
#[derive(Clone, Debug, Serialize)]
pub struct SubspaceCensus {
    pub per_generator: Vec<usize>,
    pub enumerated: usize,
    pub by_rank: Vec<RankCount>,
    pub after_singleton: usize,
}

/// Union of the subgroups enumerated from each of `m` and the number left
/// after singleton pruning.
pub fn subspace_census(polys: &[MultiPoly], m: &[ExponentSubgroup]) -> Result<SubspaceCensus, ScanError> {
    let mut all: BTreeSet<ExponentSubgroup> = BTreeSet::new();
    let mut per_generator = Vec::with_capacity(m.len());
    for mi in m {
        let subs = enumerate_subspaces(polys, mi)?;
        per_generator.push(subs.len());
        all.extend(subs);
    }
    let subs: Vec<ExponentSubgroup> = all.into_iter().collect();
    let after_singleton = subs.par_iter().filter(|n| !has_singleton(&coefficient_parts(polys, n))).count();
    Ok(SubspaceCensus { per_generator, enumerated: subs.len(), by_rank: rank_counts(&subs), after_singleton })
}

/// Saturates by the coefficient ideal of each peripheral polynomial.
fn saturate_peripheral(
    ideal: Vec<MultiPoly>,
    n: &ExponentSubgroup,
    peripheral: &[MultiPoly],
    budget: &Budget,
) -> Result<Vec<MultiPoly>, GroebnerError> {
    let mut cur = ideal;
    for g in peripheral {
        let parts = coefficient_parts(std::slice::from_ref(g), n);
        // A singleton part means the translate never lies in this component.
        if has_singleton(&parts) {
            continue;
        }
        let j = torus_slice(&parts.into_iter().flatten().collect::<Vec<_>>(), &slice_coords(n));
        cur = groebner::saturate_ideal(&cur, &j, budget)?;
        if groebner::is_trivial(&cur, budget)? {
            return Ok(vec![MultiPoly::one(n.ambient())]);
        }
    }
    Ok(cur)
}

fn peripheral_stage(polys: &[MultiPoly], n: &ExponentSubgroup, peripheral: &[MultiPoly], extra: &[MultiPoly], budget: &Budget) -> CosetCandidate {
    let parts = coefficient_parts(polys, n);
    let ideal: Vec<MultiPoly> = parts.iter().flatten().cloned().collect();
    let mut cand = CosetCandidate { subgroup: n.clone(), ideal, status: CandidateStatus::Open, binomial_torsion: vec![], fixed: vec![], note: None };
    if has_singleton(&parts) {
        cand.status = CandidateStatus::PrunedSingleton;
        return cand;
    }
    cand.fixed = slice_coords(n);
    cand.ideal = torus_slice(&cand.ideal, &cand.fixed);
    let fixed = cand.fixed.clone();
    let run = || -> Result<(bool, bool, Vec<MultiPoly>), GroebnerError> {
        let k = groebner::saturate_torus(&cand.ideal, budget)?;
        let k = saturate_peripheral(k, n, peripheral, budget)?;
        if groebner::is_trivial(&k, budget)? {
            return Ok((true, false, k));
        }
        if extra.is_empty() {
            return Ok((false, false, k));
        }
        let mut with = k.clone();
        with.extend(torus_slice(&coefficient_parts(extra, n).into_iter().flatten().collect::<Vec<_>>(), &fixed));
        let s = groebner::saturate_torus(&with, budget)?;
        let s = saturate_peripheral(s, n, peripheral, budget)?;
        let t = groebner::is_trivial(&s, budget)?;
        Ok((false, t, s))
    };
    match run() {
        Ok((true, _, _)) => {
            cand.status = CandidateStatus::TrivialIdeal;
            cand.note = Some("peripheral".into());
        }
        Ok((false, true, _)) => {
            cand.status = CandidateStatus::TrivialIdeal;
            cand.note = Some("conditions".into());
        }
        Ok((false, false, s)) => {
            cand.binomial_torsion = binomial_torsion(&s);
            cand.ideal = unslice(&s, n, &fixed).unwrap_or(s);
            cand.status = CandidateStatus::Survivor;
        }
        Err(e) => {
            cand.status = CandidateStatus::Undetermined;
            cand.note = Some(e.to_string());
        }
    }
    cand
}

/// Rational points of a zero-dimensional ideal, by univariate elimination
/// in each variable and exact verification of the candidate tuples. `None`
/// if some eliminant vanishes (positive dimension) or the budget runs out.
pub fn rational_points(gens: &[MultiPoly], budget: &Budget) -> Option<Vec<Vec<Rational>>> {
    let n = gens.first()?.nvars();
    let mut roots: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for i in 0..n {
        let e = groebner::eliminate(gens, &[i], budget).ok()?;
        let u = e.into_iter().find(|p| !p.is_zero())?;
        let mut c = vec![Rational::zero(); u.total_degree().unwrap_or(0) as usize + 1];
        for (m, a) in u.terms() {
            c[m.0[i] as usize] = a.clone();
        }
        let up = UniPoly::new(c);
        if up.degree() == Some(0) {
            return Some(vec![]);
        }
        roots.push(up.rational_roots());
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    if roots.iter().any(|r| r.is_empty()) {
        return Some(out);
    }
    loop {
        let pt: Vec<Rational> = idx.iter().enumerate().map(|(i, &k)| roots[i][k].clone()).collect();
        if gens.iter().all(|g| g.eval_q(&pt).map_or(false, |v| v.is_zero())) {
            out.push(pt);
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Some(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < roots[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// A one-parameter coset `t -> (a_i t^{e_i})` with rational `a`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CosetLine {
    pub exponents: Vec<i64>,
    #[serde(serialize_with = "ser_rats")]
    pub point: Vec<Rational>,
}

fn ser_rats<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl std::fmt::Display for CosetLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .point
            .iter()
            .zip(&self.exponents)
            .map(|(a, &e)| match (a.is_one(), e) {
                (_, 0) => a.to_string(),
                (true, 1) => "t".into(),
                (true, _) => format!("t^{e}"),
                (false, 1) => format!("{a}*t"),
                (false, _) => format!("{a}*t^{e}"),
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Rational cosets of a rank-one survivor: with the sliced coordinate set to
/// 1 each coset has one point, so this solves a zero-dimensional system.
pub fn coset_lines(cand: &CosetCandidate, budget: &Budget) -> Option<Vec<CosetLine>> {
    if cand.subgroup.rank() != 1 || cand.status != CandidateStatus::Survivor {
        return None;
    }
    let e = &cand.subgroup.basis()[0];
    let n = e.len();
    let mut gens = cand.ideal.clone();
    for &i in &cand.fixed {
        gens.push(MultiPoly::var(n, i).sub(&MultiPoly::one(n)));
    }
    let pts = rational_points(&gens, budget)?;
    let mut lines: Vec<CosetLine> = pts.into_iter().map(|point| CosetLine { exponents: e.clone(), point }).collect();
    lines.sort();
    Some(lines)
}

/// Checks `p(a_1 t^{e_1}, ...) = 0` at the given sample parameters.
pub fn line_vanishes(polys: &[MultiPoly], line: &CosetLine, ts: &[Rational]) -> bool {
    ts.iter().all(|t| {
        let pt: Vec<Rational> = line.point.iter().zip(&line.exponents).map(|(a, &e)| a * t.pow(e as i32)).collect();
        polys.iter().all(|p| p.eval_q(&pt).map_or(false, |v| v.is_zero()))
    })
}

/// Brute-force oracle: primitive rank-one directions of sup-norm at most `r`
/// (first nonzero entry positive) whose coefficient ideal is nontrivial on
/// the torus.
pub fn brute_force_directions(polys: &[MultiPoly], r: i64, budget: &Budget) -> Vec<Vec<i64>> {
    let n = polys[0].nvars();
    let mut out = Vec::new();
    let mut e = vec![-r; n];
    loop {
        if e.iter().any(|&x| x != 0) && lattice::primitive(&e) == e {
            let c = coefficient_variety(polys, &ExponentSubgroup::saturated(n, &[e.clone()]), budget);
            if c.status == CandidateStatus::Survivor {
                out.push(e.clone());
            }
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if e[k] < r {
                e[k] += 1;
                break;
            }
            e[k] = -r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    fn p(s: &str, v: &[&str]) -> MultiPoly {
        MultiPoly::parse(s, v, false).unwrap()
    }

    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn subspaces_of_a_line() {
        let subs = enumerate_subspaces(&[p("x + y + 1", &["x", "y"])], &ExponentSubgroup::identity(2)).unwrap();
        let want: Vec<ExponentSubgroup> = vec![
            ExponentSubgroup::identity(2),
            ExponentSubgroup::saturated(2, &[vec![0, 1]]),
            ExponentSubgroup::saturated(2, &[vec![1, 0]]),
            ExponentSubgroup::saturated(2, &[vec![1, 1]]),
        ];
        let got: BTreeSet<_> = subs.into_iter().collect();
        assert_eq!(got, want.into_iter().collect());
    }

    #[test]
    fn rank_one_has_no_children() {
        let m = ExponentSubgroup::saturated(3, &[vec![1, 2, 3]]);
        assert_eq!(enumerate_subspaces(&[p("x*y*z + x + y + z", &XYZ)], &m).unwrap(), vec![m]);
    }

    #[test]
    fn coefficient_variety_examples() {
        let b = Budget::default();
        let cubic = [p("x*y*z + x + y + z", &XYZ)];
        let c = coefficient_variety(&cubic, &ExponentSubgroup::saturated(3, &[vec![1, 0, 0]]), &b);
        assert_eq!(c.status, CandidateStatus::Survivor);
        let c = coefficient_variety(&[p("x + y + 1", &["x", "y"])], &ExponentSubgroup::saturated(2, &[vec![1, -1]]), &b);
        assert_eq!(c.status, CandidateStatus::PrunedSingleton);
        let c = coefficient_variety(&[p("x*y - 1", &["x", "y"])], &ExponentSubgroup::saturated(2, &[vec![1, -1]]), &b);
        assert_eq!(c.status, CandidateStatus::Survivor);
        assert_eq!(c.ideal, vec![p("x*y - 1", &["x", "y"])]);
    }

    #[test]
    fn cubic_has_six_lines() {
        let b = Budget::default();
        let cubic = [p("x*y*z + x + y + z", &XYZ)];
        let rep = scan(&cubic, &ExponentSubgroup::identity(3), &ScanOptions::default(), &b).unwrap();
        let mut lines: Vec<CosetLine> = rep.survivors.iter().flat_map(|c| coset_lines(c, &b).unwrap()).collect();
        lines.sort();
        assert_eq!(lines.len(), 6);
        let ts: Vec<Rational> = (2..8).map(|k| rat(k, 3)).collect();
        for l in &lines {
            assert!(line_vanishes(&cubic, l, &ts));
            let mut vals: Vec<Rational> = l.point.iter().zip(&l.exponents).filter(|(_, &e)| e == 0).map(|(a, _)| a.clone()).collect();
            vals.sort();
            assert_eq!(vals, vec![int(-1), int(1)]);
        }
        assert!(rep.survivors.iter().all(|c| c.subgroup.rank() == 1));
    }

    #[test]
    fn point_variety_has_no_translates() {
        let rep = scan(&[p("x - 1", &["x"])], &ExponentSubgroup::identity(1), &ScanOptions::default(), &Budget::default()).unwrap();
        assert!(rep.survivors.is_empty());
    }

    #[test]
    fn saturated_toy() {
        let v = ["x", "y"];
        let rep = saturated_scan(&[p("x*y - 1", &v)], &[ExponentSubgroup::saturated(2, &[vec![1, -1]])], &[p("x - 1", &v)], &[], &Budget::default()).unwrap();
        assert_eq!(rep.survivors.len(), 1);
        assert_eq!(rep.survivors[0].ideal, vec![p("x*y - 1", &v)]);
    }

    #[test]
    fn degrevlex_puts_expected_term_first() {
        let s = degrevlex_sorted(&[vec![5, 6, 3], vec![6, 6, 2], vec![6, 5, 3], vec![0, 0, 0]]);
        assert_eq!(s, vec![vec![6, 6, 2], vec![6, 5, 3], vec![5, 6, 3], vec![0, 0, 0]]);
    }

    fn arb_poly2() -> impl Strategy<Value = MultiPoly> {
        prop::collection::btree_map((0..3i32, 0..3i32), -2i64..3, 2..5).prop_map(|m| {
            MultiPoly::from_terms(2, m.into_iter().filter(|(_, c)| *c != 0).map(|((a, b), c)| (vec![a, b], int(c))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]
        #[test]
        fn scan_agrees_with_brute_force(f in arb_poly2()) {
            prop_assume!(f.nterms() >= 2);
            let b = Budget::default();
            let rep = scan(&[f.clone()], &ExponentSubgroup::identity(2), &ScanOptions::default(), &b).unwrap();
            let found: BTreeSet<Vec<i64>> = rep.survivors.iter().filter(|c| c.subgroup.rank() == 1).map(|c| c.subgroup.basis()[0].clone()).collect();
            let brute: BTreeSet<Vec<i64>> = brute_force_directions(&[f], 3, &b).into_iter().collect();
            // Every direction found by brute force is enumerated, and every
            // enumerated survivor within the box is confirmed.
            prop_assert!(brute.is_subset(&found));
            for e in &found {
                if e.iter().all(|x| x.abs() <= 3) {
                    prop_assert!(brute.contains(e));
                }
            }
        }
    }
}
