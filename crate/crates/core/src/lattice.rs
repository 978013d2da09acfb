//! The multiplicity lattice `Λ = {m : A → ℤ≥0}` of a fixed plane arrangement.
//!
//! `Λ'` is where `Δ ≠ 0`, `Λ_K` the cone where `K` outweighs all other lines,
//! and `Λ0 = Λ' ∖ ∪ Λ_K`. Each connected component of `Λ0` is an open
//! L¹-ball around a unique peak on which `Δ` decreases linearly; the
//! verifiers here check this and the neighbouring statements exhaustively
//! on finite windows.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiarr2::{exponents, Arrangement2, Multiplicity};

/// A finite window `{m : m(H) ≤ cap(H), |m| ≤ total}` of the lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeRegion {
    caps: Vec<u32>,
    total: Option<u64>,
}

impl LatticeRegion {
    pub fn new(caps: Vec<u32>, total: Option<u64>) -> Self {
        LatticeRegion { caps, total }
    }

    pub fn uniform(h: usize, cap: u32) -> Self {
        Self::new(vec![cap; h], None)
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn total(&self) -> Option<u64> {
        self.total
    }

    pub fn contains(&self, m: &Multiplicity) -> bool {
        m.len() == self.caps.len()
            && m.values().iter().zip(&self.caps).all(|(v, c)| v <= c)
            && self.total.is_none_or(|t| m.total() <= t)
    }

    /// Number of points in the box, ignoring the total cap (an upper bound).
    pub fn box_size(&self) -> u128 {
        self.caps.iter().map(|&c| c as u128 + 1).product()
    }

    /// Whether the closed ball of radius `r` around `m` stays inside.
    pub fn encloses_ball(&self, m: &Multiplicity, r: u64) -> bool {
        m.values()
            .iter()
            .zip(&self.caps)
            .all(|(&v, &c)| v as u64 + r <= c as u64)
            && self.total.is_none_or(|t| m.total() + r <= t)
    }
}

/// All points of the region in lexicographic order, each once.
pub fn enumerate_multiplicities(region: &LatticeRegion) -> impl Iterator<Item = Multiplicity> + '_ {
    let h = region.caps.len();
    let mut cur = Some(vec![0u32; h]);
    std::iter::from_fn(move || loop {
        let out = cur.clone()?;
        // odometer step, last coordinate fastest
        let mut next = out.clone();
        let mut i = h;
        cur = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if next[i] < region.caps[i] {
                next[i] += 1;
                break Some(next);
            }
            next[i] = 0;
        };
        let m = Multiplicity::new(out);
        if region.total.is_none_or(|t| m.total() <= t) {
            return Some(m);
        }
    })
}

/// `d(m, m') = Σ |m(H) - m'(H)|`.
pub fn lattice_distance(m: &Multiplicity, other: &Multiplicity) -> Result<u64> {
    if m.len() != other.len() {
        return Err(Error::LengthMismatch {
            expected: m.len(),
            found: other.len(),
        });
    }
    Ok(m.values()
        .iter()
        .zip(other.values())
        .map(|(&a, &b)| (a as i64 - b as i64).unsigned_abs())
        .sum())
}

/// Which part of the lattice a multiplicity lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", content = "line")]
pub enum LatticeClass {
    /// `Δ(m) = 0`, i.e. `m ∉ Λ'`.
    ZeroDelta,
    /// `m ∈ Λ0`.
    FiniteComponent,
    /// `m ∈ Λ_K` for the given line index.
    InfiniteComponent(usize),
}

fn class_of(m: &Multiplicity, delta: u64) -> LatticeClass {
    if delta == 0 {
        LatticeClass::ZeroDelta
    } else if let Some(k) = m.dominant() {
        LatticeClass::InfiniteComponent(k)
    } else {
        LatticeClass::FiniteComponent
    }
}

pub fn classify(a: &Arrangement2, m: &Multiplicity) -> Result<LatticeClass> {
    Ok(class_of(m, exponents(a, m)?.delta()))
}

/// Memoized Δ for one arrangement.
pub struct DeltaCache<'a> {
    arrangement: &'a Arrangement2,
    map: HashMap<Multiplicity, u64>,
}

impl<'a> DeltaCache<'a> {
    pub fn new(arrangement: &'a Arrangement2) -> Self {
        DeltaCache {
            arrangement,
            map: HashMap::new(),
        }
    }

    /// Fills the cache for every point of `region`, in parallel.
    pub fn prefill(&mut self, region: &LatticeRegion) -> Result<()> {
        let pts: Vec<Multiplicity> = enumerate_multiplicities(region)
            .filter(|m| !self.map.contains_key(m))
            .collect();
        let a = self.arrangement;
        let computed = pts
            .into_par_iter()
            .map(|m| exponents(a, &m).map(|e| (m, e.delta())))
            .collect::<Result<Vec<_>>>()?;
        self.map.extend(computed);
        Ok(())
    }

    pub fn get(&mut self, m: &Multiplicity) -> Result<u64> {
        if let Some(&d) = self.map.get(m) {
            return Ok(d);
        }
        let d = exponents(self.arrangement, m)?.delta();
        self.map.insert(m.clone(), d);
        Ok(d)
    }

    pub fn class(&mut self, m: &Multiplicity) -> Result<LatticeClass> {
        let d = self.get(m)?;
        Ok(class_of(m, d))
    }
}

/// The `d = 1` neighbours of `m` inside `Λ`, in lexicographic order.
pub fn neighbours(m: &Multiplicity) -> Vec<Multiplicity> {
    let mut out = Vec::with_capacity(2 * m.len());
    for i in 0..m.len() {
        if m.values()[i] > 0 {
            let mut v = m.values().to_vec();
            v[i] -= 1;
            out.push(Multiplicity::new(v));
        }
        let mut v = m.values().to_vec();
        v[i] += 1;
        out.push(Multiplicity::new(v));
    }
    out.sort();
    out
}

/// All `μ ≥ 0` with `d(center, μ) < radius`, sorted.
pub fn open_ball(center: &Multiplicity, radius: u64) -> Vec<Multiplicity> {
    fn rec(c: &[u32], i: usize, budget: i64, cur: &mut Vec<u32>, out: &mut Vec<Multiplicity>) {
        if i == c.len() {
            out.push(Multiplicity::new(cur.clone()));
            return;
        }
        let lo = (c[i] as i64 - budget).max(0);
        let hi = c[i] as i64 + budget;
        for v in lo..=hi {
            cur.push(v as u32);
            rec(c, i + 1, budget - (v - c[i] as i64).abs(), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if radius == 0 {
        return out;
    }
    rec(
        center.values(),
        0,
        radius as i64 - 1,
        &mut Vec::new(),
        &mut out,
    );
    out.sort();
    out
}

const MAX_ASCENT_STEPS: usize = 10_000;

/// Greedy Δ-ascent inside `Λ0`: repeatedly step to the lexicographically
/// smallest neighbour in `Λ0` whose Δ is one larger.
pub fn ascend_to_peak(cache: &mut DeltaCache<'_>, m: &Multiplicity) -> Result<Multiplicity> {
    let mut cur = m.clone();
    for _ in 0..MAX_ASCENT_STEPS {
        let d = cache.get(&cur)?;
        let mut next = None;
        for n in neighbours(&cur) {
            if cache.get(&n)? == d + 1 && cache.class(&n)? == LatticeClass::FiniteComponent {
                next = Some(n);
                break;
            }
        }
        match next {
            Some(n) => cur = n,
            None => return Ok(cur),
        }
    }
    Err(Error::Internal(format!(
        "Δ-ascent from {m} did not terminate after {MAX_ASCENT_STEPS} steps (last point {cur})"
    )))
}

/// A finite component of `Λ0` described by its peak.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub peak: Multiplicity,
    pub peak_delta: u64,
    /// Sorted `(μ, Δ(μ))` for every member.
    pub members: Vec<(Multiplicity, u64)>,
}

/// The component of `Λ0` containing `m`.
///
/// The peak is found by greedy ascent; the result is then re-verified by
/// direct exponent computation: the component (explored by breadth-first
/// search inside `Λ0`) must equal the open ball of radius `Δ(peak)` and
/// satisfy `Δ(μ) = Δ(peak) - d(peak, μ)`.
pub fn component_of(a: &Arrangement2, m: &Multiplicity) -> Result<ComponentReport> {
    let mut cache = DeltaCache::new(a);
    component_with_cache(&mut cache, m)
}

pub fn component_with_cache(
    cache: &mut DeltaCache<'_>,
    m: &Multiplicity,
) -> Result<ComponentReport> {
    let class = cache.class(m)?;
    if class != LatticeClass::FiniteComponent {
        return Err(Error::NotInFiniteComponent(format!("{m} is {class:?}")));
    }
    let peak = ascend_to_peak(cache, m)?;
    let peak_delta = cache.get(&peak)?;
    let ball = open_ball(&peak, peak_delta);

    let mut members = Vec::with_capacity(ball.len());
    for mu in &ball {
        let d = lattice_distance(&peak, mu)?;
        let got = cache.get(mu)?;
        if got != peak_delta - d || cache.class(mu)? != LatticeClass::FiniteComponent {
            return Err(Error::TheoremViolation(format!(
                "ball law fails at {mu}: Δ = {got}, expected {} (peak {peak}, Δ = {peak_delta})",
                peak_delta - d
            )));
        }
        members.push((mu.clone(), got));
    }

    let ball_set: BTreeSet<&Multiplicity> = ball.iter().collect();
    let explored = explore_component(cache, &peak, ball.len() + 1, |_| true)?;
    if explored.len() != ball_set.len() || explored.iter().any(|x| !ball_set.contains(x)) {
        return Err(Error::TheoremViolation(format!(
            "component of peak {peak} is not the open ball of radius {peak_delta}"
        )));
    }
    Ok(ComponentReport {
        peak,
        peak_delta,
        members,
    })
}

/// Breadth-first exploration of the `Λ0`-component of `start`, restricted
/// to points accepted by `inside`. Errors if more than `limit` points are found.
fn explore_component(
    cache: &mut DeltaCache<'_>,
    start: &Multiplicity,
    limit: usize,
    inside: impl Fn(&Multiplicity) -> bool,
) -> Result<BTreeSet<Multiplicity>> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(cur) = queue.pop_front() {
        for n in neighbours(&cur) {
            if seen.contains(&n) || !inside(&n) {
                continue;
            }
            if cache.class(&n)? == LatticeClass::FiniteComponent {
                seen.insert(n.clone());
                if seen.len() > limit {
                    return Err(Error::TheoremViolation(format!(
                        "component of {start} exceeds {limit} points"
                    )));
                }
                queue.push_back(n);
            }
        }
    }
    Ok(seen)
}

/// A pair of adjacent lattice points violating `|Δ(m1) - Δ(m2)| = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacentPair {
    pub m1: Multiplicity,
    pub m2: Multiplicity,
    pub delta1: u64,
    pub delta2: u64,
}

/// Result of one exhaustive scan. `expected_violation` is set when the
/// field has positive characteristic, where the characteristic-zero
/// statements are not claimed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaOneReport {
    pub characteristic: u64,
    pub points: usize,
    pub pairs_checked: usize,
    pub violations: Vec<AdjacentPair>,
    pub parity_violations: Vec<Multiplicity>,
    pub passed: bool,
    pub expected_violation: bool,
}

/// Checks `|Δ(m1) - Δ(m2)| = 1` for every adjacent pair in the region and
/// the parity law `Δ(m) ≡ |m| (mod 2)` at every point.
pub fn verify_lemma_one(a: &Arrangement2, region: &LatticeRegion) -> Result<LemmaOneReport> {
    let table = delta_table(a, region)?;
    let mut violations = Vec::new();
    let mut pairs = 0;
    for (m, &d) in &table {
        for i in 0..m.len() {
            let mut v = m.values().to_vec();
            v[i] += 1;
            let n = Multiplicity::new(v);
            if let Some(&dn) = table.get(&n) {
                pairs += 1;
                if d.abs_diff(dn) != 1 {
                    violations.push(AdjacentPair {
                        m1: m.clone(),
                        m2: n,
                        delta1: d,
                        delta2: dn,
                    });
                }
            }
        }
    }
    let parity_violations = parity_violations(&table);
    let passed = violations.is_empty() && parity_violations.is_empty();
    let characteristic = a.field().characteristic();
    Ok(LemmaOneReport {
        characteristic,
        points: table.len(),
        pairs_checked: pairs,
        violations,
        parity_violations,
        passed,
        expected_violation: !passed && characteristic != 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitReport {
    pub characteristic: u64,
    pub lines: usize,
    pub bound: u64,
    pub points: usize,
    pub balanced_checked: usize,
    /// Balanced points with `Δ > h - 2`, with their Δ.
    pub violations: Vec<(Multiplicity, u64)>,
    /// Balanced points attaining `Δ = h - 2`.
    pub maximizers: Vec<Multiplicity>,
    pub parity_violations: Vec<Multiplicity>,
    pub applicable: bool,
    pub passed: bool,
    pub expected_violation: bool,
}

/// Checks `Δ(m) ≤ h - 2` for every balanced point of the region.
pub fn verify_theorem_limit(a: &Arrangement2, region: &LatticeRegion) -> Result<LimitReport> {
    let h = a.len();
    let table = delta_table(a, region)?;
    let bound = h.saturating_sub(2) as u64;
    let mut violations = Vec::new();
    let mut maximizers = Vec::new();
    let mut balanced = 0;
    for (m, &d) in &table {
        if !m.is_balanced() {
            continue;
        }
        balanced += 1;
        if d > bound {
            violations.push((m.clone(), d));
        } else if d == bound {
            maximizers.push(m.clone());
        }
    }
    let characteristic = a.field().characteristic();
    let parity_violations = parity_violations(&table);
    let applicable = h > 2;
    let passed = violations.is_empty() && parity_violations.is_empty();
    Ok(LimitReport {
        characteristic,
        lines: h,
        bound,
        points: table.len(),
        balanced_checked: balanced,
        violations,
        maximizers,
        parity_violations,
        applicable,
        passed,
        expected_violation: !passed && characteristic != 0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentStatus {
    Verified,
    /// The closed ball around the peak leaves the region.
    Clipped,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub peak: Multiplicity,
    pub peak_delta: u64,
    pub size: usize,
    pub status: ComponentStatus,
    /// Set when some member is adjacent to a point of `Λ' ∖ Λ0`, so that
    /// taking components with adjacency inside `Λ'` would give a different set.
    pub lambda_prime_adjacency_differs: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrReport {
    pub characteristic: u64,
    pub points: usize,
    pub components: Vec<ComponentSummary>,
    pub verified: usize,
    pub clipped: usize,
    pub failed: usize,
    pub passed: bool,
    pub expected_violation: bool,
}

/// Finds every component of `Λ0` meeting the region and, for those whose
/// closed peak ball fits inside, checks the ball shape, the linear Δ law,
/// peak uniqueness, and that greedy ascent from three pseudo-randomly
/// chosen members ends at the same peak.
pub fn verify_theorem_str(a: &Arrangement2, region: &LatticeRegion) -> Result<StrReport> {
    let mut cache = DeltaCache::new(a);
    cache.prefill(region)?;
    let finite: Vec<Multiplicity> = enumerate_multiplicities(region)
        .filter(|m| cache.class(m).ok() == Some(LatticeClass::FiniteComponent))
        .collect();

    let mut assigned: BTreeSet<Multiplicity> = BTreeSet::new();
    let mut components = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let limit = finite.len() + 1;
    for start in &finite {
        if assigned.contains(start) {
            continue;
        }
        let comp = explore_component(&mut cache, start, limit, |m| region.contains(m))?;
        assigned.extend(comp.iter().cloned());
        components.push(summarize_component(&mut cache, region, comp, &mut rng)?);
    }
    components.sort_by(|x, y| x.peak.cmp(&y.peak));
    let count = |s| components.iter().filter(|c| c.status == s).count();
    let (verified, clipped, failed) = (
        count(ComponentStatus::Verified),
        count(ComponentStatus::Clipped),
        count(ComponentStatus::Failed),
    );
    let characteristic = a.field().characteristic();
    Ok(StrReport {
        characteristic,
        points: region_len(region),
        components,
        verified,
        clipped,
        failed,
        passed: failed == 0,
        expected_violation: failed > 0 && characteristic != 0,
    })
}

fn summarize_component(
    cache: &mut DeltaCache<'_>,
    region: &LatticeRegion,
    comp: BTreeSet<Multiplicity>,
    rng: &mut ChaCha8Rng,
) -> Result<ComponentSummary> {
    let mut best: Vec<(&Multiplicity, u64)> = Vec::new();
    let mut top = 0;
    for m in &comp {
        let d = cache.get(m)?;
        if d > top {
            top = d;
            best.clear();
        }
        if d == top {
            best.push((m, d));
        }
    }
    let peak = best[0].0.clone();
    let mut summary = ComponentSummary {
        peak: peak.clone(),
        peak_delta: top,
        size: comp.len(),
        status: ComponentStatus::Clipped,
        lambda_prime_adjacency_differs: false,
        detail: None,
    };
    if !region.encloses_ball(&peak, top) {
        return Ok(summary);
    }
    let fail = |mut s: ComponentSummary, why: String| {
        s.status = ComponentStatus::Failed;
        s.detail = Some(why);
        Ok(s)
    };
    if best.len() != 1 {
        return fail(
            summary,
            format!("{} points attain the maximum Δ = {top}", best.len()),
        );
    }
    let ball = open_ball(&peak, top);
    if ball.len() != comp.len() || ball.iter().any(|m| !comp.contains(m)) {
        return fail(
            summary,
            format!("component is not the open ball of radius {top}"),
        );
    }
    for mu in &ball {
        let d = lattice_distance(&peak, mu)?;
        let got = cache.get(mu)?;
        if got != top - d {
            return fail(summary, format!("Δ({mu}) = {got}, expected {}", top - d));
        }
    }
    let members: Vec<&Multiplicity> = comp.iter().collect();
    for m in members.choose_multiple(rng, 3) {
        let reached = ascend_to_peak(cache, m)?;
        if reached != peak {
            return fail(
                summary,
                format!("ascent from {m} reached {reached}, not {peak}"),
            );
        }
    }
    for m in &comp {
        for n in neighbours(m) {
            if matches!(cache.class(&n)?, LatticeClass::InfiniteComponent(_)) {
                summary.lambda_prime_adjacency_differs = true;
            }
        }
    }
    summary.status = ComponentStatus::Verified;
    Ok(summary)
}

fn region_len(region: &LatticeRegion) -> usize {
    enumerate_multiplicities(region).count()
}

/// Δ at every point of the region, computed in parallel and returned in
/// canonical (lexicographic) order.
pub fn delta_table(
    a: &Arrangement2,
    region: &LatticeRegion,
) -> Result<BTreeMap<Multiplicity, u64>> {
    let pts: Vec<Multiplicity> = enumerate_multiplicities(region).collect();
    let rows = pts
        .into_par_iter()
        .map(|m| exponents(a, &m).map(|e| (m, e.delta())))
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().collect())
}

fn parity_violations(table: &BTreeMap<Multiplicity, u64>) -> Vec<Multiplicity> {
    table
        .iter()
        .filter(|(m, &d)| d % 2 != m.total() % 2)
        .map(|(m, _)| m.clone())
        .collect()
}
