//! The affine connection `∇_θ(f ∂1 + g ∂2) = θ(f) ∂1 + θ(g) ∂2` and the
//! shift map `Φ0(θ) = ∇_θ θ0` from `D(A,m)` to `D(A, m0 + m - 1)` for
//! 0/1-multiplicities `m`, where `θ0` is the lower-degree basis of a
//! balanced `m0` with maximal gap `Δ(m0) = h - 2`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{delta_table, lattice_distance, DeltaCache, LatticeRegion};
use crate::multiarr2::{
    basis, exponents, lower_degree_basis, saito_det, saito_scalar, Arrangement2, Derivation2,
    Multiplicity,
};

/// `∇_θ φ`: `θ` applied to each coefficient of `φ`.
pub fn nabla(theta: &Derivation2, phi: &Derivation2) -> Derivation2 {
    Derivation2::new(theta.apply(phi.f()), theta.apply(phi.g()))
}

/// Constant derivations `∂_{x1}, ∂_{x2}` dual to the first two lines of
/// `A`, i.e. `∂_{x_i}(α_j) = δ_ij` with `x_i = α_i`.
pub fn coordinate_derivations(a: &Arrangement2) -> Result<[Derivation2; 2]> {
    if a.len() < 2 {
        return Err(Error::Hypothesis(
            "need at least two lines to choose coordinates".into(),
        ));
    }
    let (l1, l2) = (&a.forms()[0], &a.forms()[1]);
    let det = &(l1.a() * l2.b()) - &(l2.a() * l1.b());
    let inv = det
        .inv()
        .ok_or_else(|| Error::Internal("first two lines are proportional".into()))?;
    Ok([
        Derivation2::constant(l2.b() * &inv, &(-l2.a()) * &inv),
        Derivation2::constant(&(-l1.b()) * &inv, l1.a() * &inv),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub m: Multiplicity,
    pub theta: String,
    /// `m - m_i` for `i = 1, 2`, floored at zero.
    pub reduced: [Multiplicity; 2],
    pub images: [String; 2],
    pub member: [bool; 2],
    pub passed: bool,
}

/// Checks `∇_{∂_{x_i}} θ ∈ D(A, m - m_i)` for `i = 1, 2`, where the first
/// two lines serve as coordinates and `m_i` is 0 on `{x_j = 0}` (`j ≠ i`)
/// and 1 on every other line.
pub fn nabla_descent_check(
    a: &Arrangement2,
    m: &Multiplicity,
    theta: &Derivation2,
) -> Result<DescentReport> {
    if m.len() != a.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: m.len(),
        });
    }
    let partials = coordinate_derivations(a)?;
    let mut reduced = Vec::new();
    let mut images = Vec::new();
    let mut member = Vec::new();
    for (i, d) in partials.iter().enumerate() {
        let j = 1 - i;
        let mi: Vec<u32> = (0..a.len()).map(|k| u32::from(k != j)).collect();
        let target = m.saturating_sub(&Multiplicity::new(mi));
        let image = nabla(d, theta);
        member.push(image.is_member(a, &target));
        images.push(image.to_string());
        reduced.push(target);
    }
    let passed = member.iter().all(|&b| b);
    Ok(DescentReport {
        m: m.clone(),
        theta: theta.to_string(),
        reduced: [reduced[0].clone(), reduced[1].clone()],
        images: [images[0].clone(), images[1].clone()],
        member: [member[0], member[1]],
        passed,
    })
}

/// Which hypothesis of the shift theorem is in force.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftHypothesis {
    /// `h = 3` and `m0 - 1` balanced.
    ThreeLinesShiftedBalanced,
    /// `h ≥ 4`.
    AtLeastFourLines,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "count")]
pub enum ShiftMode {
    Exhaustive,
    Sampled(usize),
}

/// Exhaustive up to this many lines; beyond it a fixed sample is used.
pub const EXHAUSTIVE_MAX_LINES: usize = 12;
pub const SAMPLE_SIZE: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftRow {
    pub m: Multiplicity,
    pub target: Multiplicity,
    pub basis: [String; 2],
    pub images: [String; 2],
    pub image_degrees: [usize; 2],
    /// `|m0 + m - 1| = 2 deg θ0 + |m| - 2`.
    pub degree_bookkeeping: bool,
    pub images_in_target: bool,
    /// `c` with `det(Φ0 θ1, Φ0 θ2) = c · ∏ α^{m0+m-1}`, when nonzero.
    pub saito_scalar: Option<String>,
    pub pass: bool,
}

/// Per-shift record of the Saito check for `Φ0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftCertificate {
    pub m0: Multiplicity,
    pub theta0: String,
    pub theta0_degree: usize,
    pub hypothesis: ShiftHypothesis,
    pub mode: ShiftMode,
    pub checked_shifts: Vec<ShiftRow>,
    pub passed: bool,
}

impl ShiftCertificate {
    pub fn failures(&self) -> impl Iterator<Item = &ShiftRow> {
        self.checked_shifts.iter().filter(|r| !r.pass)
    }
}

/// Checks the hypotheses of the shift theorem for `m0`, returning the one
/// in force or a description of the first failure.
pub fn shift_hypothesis(
    a: &Arrangement2,
    m0: &Multiplicity,
) -> Result<std::result::Result<ShiftHypothesis, String>> {
    let h = a.len();
    if m0.len() != h {
        return Err(Error::LengthMismatch {
            expected: h,
            found: m0.len(),
        });
    }
    if h <= 2 {
        return Ok(Err(format!("h = {h} ≤ 2")));
    }
    if m0.values().contains(&0) {
        return Ok(Err(format!("m0 = {m0} has a zero entry")));
    }
    if !m0.is_balanced() {
        return Ok(Err(format!("m0 = {m0} is not balanced")));
    }
    let delta = exponents(a, m0)?.delta();
    if delta != h as u64 - 2 {
        return Ok(Err(format!("Δ(m0) = {delta} ≠ h - 2 = {}", h - 2)));
    }
    if h >= 4 {
        return Ok(Ok(ShiftHypothesis::AtLeastFourLines));
    }
    let minus_one = Multiplicity::new(m0.values().iter().map(|v| v - 1).collect());
    if minus_one.is_balanced() {
        Ok(Ok(ShiftHypothesis::ThreeLinesShiftedBalanced))
    } else {
        Ok(Err(format!(
            "h = 3 and m0 - 1 = {minus_one} is not balanced"
        )))
    }
}

/// Builds the shift certificate for `m0` with `θ0` its canonical
/// lower-degree basis. Hypothesis failures are reported as
/// [`Error::Hypothesis`]; a failing Saito check under satisfied hypotheses
/// is recorded in the certificate (`passed = false`).
pub fn shift_isomorphism_check(a: &Arrangement2, m0: &Multiplicity) -> Result<ShiftCertificate> {
    let hyp = shift_hypothesis(a, m0)?.map_err(Error::Hypothesis)?;
    let theta0 = lower_degree_basis(a, m0)?;
    shift_check_with(a, m0, &theta0, hyp)
}

fn shifts(h: usize) -> (ShiftMode, Vec<Multiplicity>) {
    if h <= EXHAUSTIVE_MAX_LINES {
        let all = (0u32..1 << h)
            .map(|bits| Multiplicity::new((0..h).map(|i| (bits >> (h - 1 - i)) & 1).collect()))
            .collect();
        return (ShiftMode::Exhaustive, all);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5f1f7);
    let mut seen = BTreeSet::new();
    while seen.len() < SAMPLE_SIZE {
        seen.insert(Multiplicity::new(
            (0..h).map(|_| rng.gen_range(0..=1)).collect(),
        ));
    }
    (ShiftMode::Sampled(SAMPLE_SIZE), seen.into_iter().collect())
}

/// A homogeneous basis of `D(A,m)`; `∂1, ∂2` when `m = 0`.
fn basis_or_standard(a: &Arrangement2, m: &Multiplicity) -> Result<(Derivation2, Derivation2)> {
    if m.total() == 0 {
        let f = a.field();
        return Ok((
            Derivation2::constant(f.one(), f.zero()),
            Derivation2::constant(f.zero(), f.one()),
        ));
    }
    basis(a, m)
}

fn shift_check_with(
    a: &Arrangement2,
    m0: &Multiplicity,
    theta0: &Derivation2,
    hypothesis: ShiftHypothesis,
) -> Result<ShiftCertificate> {
    let (mode, ms) = shifts(a.len());
    let d0 = theta0.degree() as i64;
    let mut rows = ms
        .into_par_iter()
        .map(|m| -> Result<ShiftRow> {
            let target = m0
                .shift(&m)
                .ok_or_else(|| Error::Internal(format!("m0 + m - 1 negative for m = {m}")))?;
            let (t1, t2) = basis_or_standard(a, &m)?;
            let (p1, p2) = (nabla(&t1, theta0), nabla(&t2, theta0));
            let bookkeeping = target.total() as i64 == 2 * d0 + m.total() as i64 - 2;
            let in_target = p1.is_member(a, &target) && p2.is_member(a, &target);
            let scalar = saito_scalar(a, &target, &p1, &p2);
            let pass = bookkeeping && in_target && scalar.is_some();
            Ok(ShiftRow {
                m,
                target,
                basis: [t1.to_string(), t2.to_string()],
                images: [p1.to_string(), p2.to_string()],
                image_degrees: [p1.degree(), p2.degree()],
                degree_bookkeeping: bookkeeping,
                images_in_target: in_target,
                saito_scalar: scalar.map(|c| c.to_string()),
                pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|x, y| x.m.cmp(&y.m));
    let passed = rows.iter().all(|r| r.pass);
    Ok(ShiftCertificate {
        m0: m0.clone(),
        theta0: theta0.to_string(),
        theta0_degree: theta0.degree(),
        hypothesis,
        mode,
        checked_shifts: rows,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerVerdict {
    pub is_euler: bool,
    /// Why the answer is `false`; empty when `true`.
    pub reasons: Vec<String>,
    pub certificate: Option<ShiftCertificate>,
}

/// Whether `θ` is the `(A,m)`-Euler derivation: a lower-degree basis of
/// `D(A,m)` for an `m` satisfying the shift theorem's hypotheses. When the
/// answer is yes the shift certificate is computed with `θ` itself, and a
/// failing certificate is returned as [`Error::TheoremViolation`].
pub fn is_am_euler(
    a: &Arrangement2,
    m: &Multiplicity,
    theta: &Derivation2,
) -> Result<EulerVerdict> {
    let mut reasons = Vec::new();
    let hyp = match shift_hypothesis(a, m)? {
        Ok(h) => Some(h),
        Err(why) => {
            reasons.push(why);
            None
        }
    };
    if theta.is_zero() {
        reasons.push("θ is zero".into());
    } else if m.total() > 0 {
        let exp = exponents(a, m)?;
        if theta.degree() as u64 != exp.d1 {
            reasons.push(format!("deg θ = {} ≠ d1 = {}", theta.degree(), exp.d1));
        }
        if !theta.is_member(a, m) {
            reasons.push("θ ∉ D(A,m)".into());
        }
    }
    let Some(hyp) = hyp.filter(|_| reasons.is_empty()) else {
        return Ok(EulerVerdict {
            is_euler: false,
            reasons,
            certificate: None,
        });
    };
    let cert = shift_check_with(a, m, theta, hyp)?;
    if !cert.passed {
        let bad: Vec<String> = cert.failures().map(|r| r.m.to_string()).collect();
        return Err(Error::TheoremViolation(format!(
            "shift isomorphism fails for A = {a}, m0 = {m}, θ0 = {theta} at shifts {}",
            bad.join(" ")
        )));
    }
    Ok(EulerVerdict {
        is_euler: true,
        reasons,
        certificate: Some(cert),
    })
}

/// Two lower-degree bases checked for S-independence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NextPair {
    pub m1: Multiplicity,
    pub m2: Multiplicity,
    pub independent: bool,
}

/// Whether `(m1, m2)` satisfies the hypotheses of the independence
/// property: `m1 = m2 + e_i - e_j`, `Δ(m1) = Δ(m2) = 1`, and both the
/// componentwise max and min have `Δ = 0`.
pub fn next_pair_hypotheses(
    cache: &mut DeltaCache<'_>,
    m1: &Multiplicity,
    m2: &Multiplicity,
) -> Result<bool> {
    if lattice_distance(m1, m2)? != 2 {
        return Ok(false);
    }
    let ups = m1
        .values()
        .iter()
        .zip(m2.values())
        .filter(|(a, b)| a > b)
        .count();
    if ups != 1 || cache.get(m1)? != 1 || cache.get(m2)? != 1 {
        return Ok(false);
    }
    let hi = Multiplicity::new(
        m1.values()
            .iter()
            .zip(m2.values())
            .map(|(a, b)| *a.max(b))
            .collect(),
    );
    let lo = Multiplicity::new(
        m1.values()
            .iter()
            .zip(m2.values())
            .map(|(a, b)| *a.min(b))
            .collect(),
    );
    Ok(cache.get(&hi)? == 0 && cache.get(&lo)? == 0)
}

/// Independence of the two lower-degree bases (nonzero Saito determinant).
pub fn lower_bases_independent(
    a: &Arrangement2,
    m1: &Multiplicity,
    m2: &Multiplicity,
) -> Result<bool> {
    let t1 = lower_degree_basis(a, m1)?;
    let t2 = lower_degree_basis(a, m2)?;
    Ok(!saito_det(&t1, &t2).is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NextScanReport {
    pub pairs_found: usize,
    pub failures: Vec<NextPair>,
    pub passed: bool,
}

/// Every hypothesis-satisfying pair with both points in `region`.
pub fn scan_next_pairs(a: &Arrangement2, region: &LatticeRegion) -> Result<NextScanReport> {
    let table = delta_table(a, region)?;
    let mut cache = DeltaCache::new(a);
    cache.prefill(region)?;
    let mut candidates = Vec::new();
    for (m2, &d) in &table {
        if d != 1 {
            continue;
        }
        for i in 0..m2.len() {
            for j in 0..m2.len() {
                if i == j || m2.values()[j] == 0 {
                    continue;
                }
                let mut v = m2.values().to_vec();
                v[i] += 1;
                v[j] -= 1;
                let m1 = Multiplicity::new(v);
                if m1 < *m2 || !region.contains(&m1) {
                    continue;
                }
                if next_pair_hypotheses(&mut cache, &m1, m2)? {
                    candidates.push((m1, m2.clone()));
                }
            }
        }
    }
    let checked = candidates
        .into_par_iter()
        .map(|(m1, m2)| {
            lower_bases_independent(a, &m1, &m2).map(|independent| NextPair {
                m1,
                m2,
                independent,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<NextPair> = checked.iter().filter(|p| !p.independent).cloned().collect();
    Ok(NextScanReport {
        pairs_found: checked.len(),
        passed: failures.is_empty(),
        failures,
    })
}
