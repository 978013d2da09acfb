use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chambers::chamber_count;
use super::intersection::{char_poly, char_poly_affine, CharPoly};
use super::{cone, plane_basis, AffineArrangement2, Arrangement3};
use crate::error::{Error, Result};
use crate::exactalg::{Field, LinearForm2, Scalar};
use crate::multiarr2::{exponents, nonbalanced_exponents, Arrangement2, Exponents2, Multiplicity};

/// The Ziegler restriction `(A'', m0)` of `A` onto `H0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZieglerRestriction {
    pub h0: usize,
    pub arrangement: Arrangement2,
    pub multiplicity: Multiplicity,
    /// Coordinates on `H0` used to express the restricted forms.
    pub basis: [[Scalar; 3]; 2],
    /// For each line of `A''`, the planes of `A` restricting to it.
    pub preimages: Vec<Vec<usize>>,
}

/// Restricts every `H ≠ H0` to `H0`, identifying `H0` with the plane via
/// [`plane_basis`], and counts coincidences.
pub fn ziegler_restriction(a: &Arrangement3, h0: usize) -> Result<ZieglerRestriction> {
    a.check_index(h0)?;
    if a.len() < 2 {
        return Err(Error::Hypothesis(
            "Ziegler restriction needs at least two planes".into(),
        ));
    }
    let basis = plane_basis(&a.forms()[h0])?;
    let mut lines: Vec<LinearForm2> = Vec::new();
    let mut preimages: Vec<Vec<usize>> = Vec::new();
    for (i, beta) in a.forms().iter().enumerate() {
        if i == h0 {
            continue;
        }
        let l = LinearForm2::new(beta.eval(&basis[0]), beta.eval(&basis[1]))?;
        match lines.iter().position(|x| *x == l) {
            Some(j) => preimages[j].push(i),
            None => {
                lines.push(l);
                preimages.push(vec![i]);
            }
        }
    }
    let multiplicity = Multiplicity::new(preimages.iter().map(|p| p.len() as u32).collect());
    Ok(ZieglerRestriction {
        h0,
        arrangement: Arrangement2::new(a.field(), lines)?,
        multiplicity,
        basis,
        preimages,
    })
}

fn restriction_exponents(z: &ZieglerRestriction) -> Result<Exponents2> {
    if z.multiplicity.dominant().is_some() {
        Ok(nonbalanced_exponents(&z.arrangement, &z.multiplicity)?.0)
    } else {
        exponents(&z.arrangement, &z.multiplicity)
    }
}

/// `χ(A,t) / (t - 1)`.
fn reduced_char_poly(a: &Arrangement3) -> Result<(CharPoly, CharPoly)> {
    let chi = char_poly(a);
    let q = chi
        .div_linear(1)
        .ok_or_else(|| Error::Internal(format!("(t-1) does not divide χ = {chi}")))?;
    Ok((chi, q))
}

fn coker(c2: i64, exp: &Exponents2, a: &Arrangement3, h0: usize) -> Result<i64> {
    let v = c2 - (exp.d1 * exp.d2) as i64;
    if v < 0 {
        return Err(Error::TheoremViolation(format!(
            "c2 - d1 d2 = {v} < 0 for {a} at H0 = {h0}"
        )));
    }
    Ok(v)
}

/// `dim coker π = c2 - d1 d2` where `χ(A,t) = (t-1)(t² - c1 t + c2)` and
/// `(d1, d2) = exp(A'', m0)`.
pub fn yoshinaga_coker_dim(a: &Arrangement3, h0: usize) -> Result<i64> {
    let z = ziegler_restriction(a, h0)?;
    let (_, q) = reduced_char_poly(a)?;
    coker(q.coeff(0), &restriction_exponents(&z)?, a, h0)
}

/// How a freeness verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionRoute {
    /// The Ziegler multiplicity is unbalanced; its exponents are explicit.
    Unbalanced,
    /// Balanced, and `χ/(t-1)` splits with gap `h-2` or `h-3`.
    Fc,
    /// `χ` does not split over ℤ, so `A` is not free.
    NonSplit,
    /// Exponents of the restriction compared with `c2`.
    Yoshinaga,
}

impl DecisionRoute {
    pub fn tag(&self) -> &'static str {
        match self {
            DecisionRoute::Unbalanced => "nb",
            DecisionRoute::Fc => "fc",
            DecisionRoute::NonSplit => "nonsplit",
            DecisionRoute::Yoshinaga => "yoshinaga",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessVerdict {
    pub free: bool,
    /// `(1, d1, d2)` when free.
    pub exponents: Option<[u64; 3]>,
    pub coker_dim: i64,
    pub h0: usize,
    pub h0_form: String,
    pub ziegler_lines: Vec<String>,
    pub ziegler_multiplicity: Multiplicity,
    pub ziegler_exponents: [u64; 2],
    pub char_poly: CharPoly,
    pub route: DecisionRoute,
    pub combinatorial: bool,
}

/// The route fixed by combinatorics alone: unbalanced restriction, or a
/// balanced one whose `χ/(t-1)` splits with gap `h-2` or `h-3`.
pub fn combinatorial_route(z: &ZieglerRestriction, reduced: &CharPoly) -> DecisionRoute {
    let h = z.arrangement.len() as i64;
    if z.multiplicity.dominant().is_some() {
        return DecisionRoute::Unbalanced;
    }
    match reduced.quadratic_roots() {
        None => DecisionRoute::NonSplit,
        Some((a, b)) if h > 2 && (b - a == h - 2 || b - a == h - 3) => DecisionRoute::Fc,
        Some(_) => DecisionRoute::Yoshinaga,
    }
}

/// Freeness of `A` decided through its Ziegler restriction onto `H0`.
pub fn is_free_at(a: &Arrangement3, h0: usize) -> Result<FreenessVerdict> {
    a.check_index(h0)?;
    let (chi, reduced) = reduced_char_poly(a)?;
    if a.len() == 1 {
        return Ok(FreenessVerdict {
            free: true,
            exponents: Some([1, 0, 0]),
            coker_dim: 0,
            h0,
            h0_form: a.forms()[h0].to_string(),
            ziegler_lines: vec![],
            ziegler_multiplicity: Multiplicity::new(vec![]),
            ziegler_exponents: [0, 0],
            char_poly: chi,
            route: DecisionRoute::Unbalanced,
            combinatorial: true,
        });
    }
    let z = ziegler_restriction(a, h0)?;
    let exp = restriction_exponents(&z)?;
    let coker_dim = coker(reduced.coeff(0), &exp, a, h0)?;
    let route = combinatorial_route(&z, &reduced);
    let free = coker_dim == 0;
    match route {
        DecisionRoute::Fc if !free => {
            return Err(Error::TheoremViolation(format!(
                "balanced restriction with χ = {chi} should be free, coker = {coker_dim}"
            )))
        }
        DecisionRoute::NonSplit if free => {
            return Err(Error::TheoremViolation(format!(
                "free arrangement with non-split χ = {chi}"
            )))
        }
        _ => {}
    }
    if free && chi != CharPoly::from_roots(&[1, exp.d1 as i64, exp.d2 as i64]) {
        return Err(Error::TheoremViolation(format!(
            "free with exp (1,{},{}) but χ = {chi}",
            exp.d1, exp.d2
        )));
    }
    Ok(FreenessVerdict {
        free,
        exponents: free.then_some([1, exp.d1, exp.d2]),
        coker_dim,
        h0,
        h0_form: a.forms()[h0].to_string(),
        ziegler_lines: z
            .arrangement
            .forms()
            .iter()
            .map(|l| l.to_string())
            .collect(),
        ziegler_multiplicity: z.multiplicity,
        ziegler_exponents: [exp.d1, exp.d2],
        char_poly: chi,
        route,
        combinatorial: matches!(route, DecisionRoute::Unbalanced | DecisionRoute::Fc),
    })
}

/// Freeness with `H0` the first plane in canonical order.
pub fn is_free(a: &Arrangement3) -> Result<FreenessVerdict> {
    let h0 = (0..a.len())
        .min_by(|&i, &j| a.forms()[i].cmp(&a.forms()[j]))
        .ok_or_else(|| Error::Hypothesis("empty arrangement".into()))?;
    is_free_at(a, h0)
}

/// Verdicts for every choice of `H0`, computed in parallel.
pub fn is_free_all(a: &Arrangement3) -> Result<Vec<FreenessVerdict>> {
    (0..a.len())
        .into_par_iter()
        .map(|h0| is_free_at(a, h0))
        .collect()
}

struct Coned {
    coned: Arrangement3,
    h0: usize,
    z: ZieglerRestriction,
}

fn cone_restriction(a: &AffineArrangement2) -> Result<Option<Coned>> {
    if a.is_empty() {
        return Ok(None);
    }
    let (coned, h0) = cone(a)?;
    let z = ziegler_restriction(&coned, h0)?;
    Ok(Some(Coned { coned, h0, z }))
}

/// Outcome of the combinatorial freeness test for a coned affine arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FcVerdict {
    pub applies: bool,
    pub free: Option<bool>,
    pub reason: Option<String>,
    pub h: usize,
    pub chi_bar: CharPoly,
    /// `2` for gap `h-2`, `3` for gap `h-3`.
    pub gap_case: Option<u8>,
    pub d: Option<i64>,
    pub coker_dim: Option<i64>,
}

/// Balanced Ziegler restriction of `cĀ` with `h > 2` and
/// `χ(Ā,t) = (t-d)(t-d-h+2)` or `(t-d)(t-d-h+3)` forces `cĀ` free. The
/// conclusion is cross-checked against the cokernel dimension.
pub fn thm_fc_check(a: &AffineArrangement2) -> Result<FcVerdict> {
    let chi_bar = char_poly_affine(a);
    let mut v = FcVerdict {
        applies: false,
        free: None,
        reason: None,
        h: 0,
        chi_bar: chi_bar.clone(),
        gap_case: None,
        d: None,
        coker_dim: None,
    };
    let Some(c) = cone_restriction(a)? else {
        v.reason = Some("h = 0 ≤ 2".into());
        return Ok(v);
    };
    let h = c.z.arrangement.len();
    v.h = h;
    if h <= 2 {
        v.reason = Some(format!("h = {h} ≤ 2"));
        return Ok(v);
    }
    if c.z.multiplicity.dominant().is_some() {
        v.reason = Some(format!(
            "Ziegler multiplicity {} is unbalanced",
            c.z.multiplicity
        ));
        return Ok(v);
    }
    let Some((lo, hi)) = chi_bar.quadratic_roots() else {
        v.reason = Some(format!("χ(Ā,t) = {chi_bar} does not split over ℤ"));
        return Ok(v);
    };
    let gap = hi - lo;
    let case = if gap == h as i64 - 2 {
        2
    } else if gap == h as i64 - 3 {
        3
    } else {
        v.reason = Some(format!(
            "root gap {gap} is neither h-2 = {} nor h-3 = {}",
            h as i64 - 2,
            h as i64 - 3
        ));
        return Ok(v);
    };
    let k = yoshinaga_coker_dim(&c.coned, c.h0)?;
    if k != 0 {
        return Err(Error::TheoremViolation(format!(
            "{a}: hypotheses hold (h = {h}, χ = {chi_bar}) but coker = {k}"
        )));
    }
    v.applies = true;
    v.free = Some(true);
    v.gap_case = Some(case);
    v.d = Some(lo);
    v.coker_dim = Some(0);
    Ok(v)
}

/// Which bound applies: case 1 when `k - (h-2)` is even, case 2 when odd.
fn parity_case(k: i64, h: i64) -> (u8, i64, i64) {
    if (k - (h - 2)).rem_euclid(2) == 0 {
        (1, (k - h + 2) / 2, h - 2)
    } else {
        (2, (k - h + 3) / 2, h - 3)
    }
}

/// Splitting-type bounds for a balanced affine arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestReport {
    pub applicable: bool,
    pub reason: Option<String>,
    pub k: usize,
    pub h: usize,
    pub roots: Option<(i64, i64)>,
    pub case: Option<u8>,
    pub d: Option<i64>,
    /// `d ≤ a ≤ b ≤ d + h - 2` (case 1) or `d + h - 3` (case 2); `None`
    /// when not applicable.
    pub holds: Option<bool>,
}

pub fn thm_rest_check(a: &AffineArrangement2) -> Result<RestReport> {
    let chi_bar = char_poly_affine(a);
    let mut r = RestReport {
        applicable: false,
        reason: None,
        k: a.len(),
        h: 0,
        roots: None,
        case: None,
        d: None,
        holds: None,
    };
    let Some(c) = cone_restriction(a)? else {
        r.reason = Some("h = 0 ≤ 2".into());
        return Ok(r);
    };
    r.h = c.z.arrangement.len();
    if let Some(why) = balanced_gate(&c.z) {
        r.reason = Some(why);
        return Ok(r);
    }
    let Some((lo, hi)) = chi_bar.quadratic_roots() else {
        r.reason = Some(format!("χ(Ā,t) = {chi_bar} does not split over ℤ"));
        return Ok(r);
    };
    let (case, d, width) = parity_case(a.len() as i64, r.h as i64);
    r.applicable = true;
    r.roots = Some((lo, hi));
    r.case = Some(case);
    r.d = Some(d);
    r.holds = Some(d <= lo && hi <= d + width);
    Ok(r)
}

fn balanced_gate(z: &ZieglerRestriction) -> Option<String> {
    let h = z.arrangement.len();
    if h <= 2 {
        Some(format!("h = {h} ≤ 2"))
    } else if z.multiplicity.dominant().is_some() {
        Some(format!(
            "Ziegler multiplicity {} is unbalanced",
            z.multiplicity
        ))
    } else {
        None
    }
}

/// Chamber lower bound for a balanced real affine arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rest2Report {
    pub applicable: bool,
    pub reason: Option<String>,
    pub k: usize,
    pub h: usize,
    pub case: Option<u8>,
    pub d: Option<i64>,
    pub c2: i64,
    pub c2_bound: Option<i64>,
    pub chambers: Option<u64>,
    pub chamber_bound: Option<i64>,
    pub equality: bool,
    /// Set when the bound is attained: the verdict of `is_free(cĀ)`.
    pub freeness_confirmed: Option<bool>,
    pub holds: Option<bool>,
}

pub fn thm_rest2_check(a: &AffineArrangement2) -> Result<Rest2Report> {
    let chi_bar = char_poly_affine(a);
    let c2 = chi_bar.coeff(0);
    let mut r = Rest2Report {
        applicable: false,
        reason: None,
        k: a.len(),
        h: 0,
        case: None,
        d: None,
        c2,
        c2_bound: None,
        chambers: None,
        chamber_bound: None,
        equality: false,
        freeness_confirmed: None,
        holds: None,
    };
    if a.field() != Field::Rational {
        r.reason = Some(format!("chambers need a real field, got {}", a.field()));
        return Ok(r);
    }
    let Some(c) = cone_restriction(a)? else {
        r.reason = Some("h = 0 ≤ 2".into());
        return Ok(r);
    };
    r.h = c.z.arrangement.len();
    if let Some(why) = balanced_gate(&c.z) {
        r.reason = Some(why);
        return Ok(r);
    }
    let k = a.len() as i64;
    let (case, d, width) = parity_case(k, r.h as i64);
    let bound = d * (d + width);
    let chambers = chamber_count(a)?.zaslavsky;
    let chamber_bound = 1 + k + bound;
    r.applicable = true;
    r.case = Some(case);
    r.d = Some(d);
    r.c2_bound = Some(bound);
    r.chambers = Some(chambers);
    r.chamber_bound = Some(chamber_bound);
    r.equality = chambers as i64 == chamber_bound;
    let mut holds = c2 >= bound && chambers as i64 >= chamber_bound;
    if r.equality {
        let free = is_free_at(&c.coned, c.h0)?.free;
        r.freeness_confirmed = Some(free);
        holds &= free;
    }
    r.holds = Some(holds);
    Ok(r)
}

/// Membership in the class of arrangements whose Ziegler restrictions are
/// all balanced and whose `χ` splits with a large enough gap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pb3Certificate {
    pub member: bool,
    pub all_balanced: bool,
    /// First `H0` whose restriction is unbalanced.
    pub failing_restriction: Option<(usize, Multiplicity)>,
    pub char_poly: CharPoly,
    pub roots: Option<(i64, i64)>,
    pub witness_h0: Option<usize>,
    pub witness_h: Option<usize>,
    /// How the existential over `H0` was read.
    pub reading: String,
    pub reason: Option<String>,
}

pub fn pb3_membership(a: &Arrangement3) -> Result<Pb3Certificate> {
    let (chi, reduced) = reduced_char_poly(a)?;
    let mut cert = Pb3Certificate {
        member: false,
        all_balanced: false,
        failing_restriction: None,
        char_poly: chi.clone(),
        roots: reduced.quadratic_roots(),
        witness_h0: None,
        witness_h: None,
        reading:
            "exists H0 whose h = |A''| satisfies |d - d'| ≥ h - 3; χ itself does not depend on H0"
                .into(),
        reason: None,
    };
    if a.len() < 2 {
        cert.reason = Some("fewer than two planes".into());
        return Ok(cert);
    }
    let restrictions: Vec<ZieglerRestriction> = (0..a.len())
        .into_par_iter()
        .map(|h0| ziegler_restriction(a, h0))
        .collect::<Result<_>>()?;
    if let Some(z) = restrictions
        .iter()
        .find(|z| z.multiplicity.dominant().is_some())
    {
        cert.failing_restriction = Some((z.h0, z.multiplicity.clone()));
        cert.reason = Some(format!(
            "restriction onto H{} has unbalanced multiplicity {}",
            z.h0, z.multiplicity
        ));
        return Ok(cert);
    }
    cert.all_balanced = true;
    let Some((d, d2)) = cert.roots else {
        cert.reason = Some(format!("χ = {chi} does not split over ℤ"));
        return Ok(cert);
    };
    match restrictions
        .iter()
        .find(|z| d2 - d >= z.arrangement.len() as i64 - 3)
    {
        Some(z) => {
            cert.member = true;
            cert.witness_h0 = Some(z.h0);
            cert.witness_h = Some(z.arrangement.len());
        }
        None => cert.reason = Some(format!("gap {} below h - 3 for every H0", d2 - d)),
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn braid() -> Arrangement3 {
        Arrangement3::from_ints(
            Q,
            &[
                (1, 0, 0),
                (0, 1, 0),
                (0, 0, 1),
                (1, -1, 0),
                (1, 0, -1),
                (0, 1, -1),
            ],
        )
        .unwrap()
    }

    fn generic4() -> Arrangement3 {
        Arrangement3::from_ints(Q, &[(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]).unwrap()
    }

    fn boolean() -> Arrangement3 {
        Arrangement3::from_ints(Q, &[(1, 0, 0), (0, 1, 0), (0, 0, 1)]).unwrap()
    }

    #[test]
    fn ziegler_examples() {
        let z = ziegler_restriction(&braid(), 2).unwrap();
        assert_eq!(
            z.arrangement,
            Arrangement2::from_ints(Q, &[(1, 0), (0, 1), (1, -1)]).unwrap()
        );
        assert_eq!(z.multiplicity.values(), &[2, 2, 1]);
        let z = ziegler_restriction(&boolean(), 2).unwrap();
        assert_eq!(z.multiplicity.values(), &[1, 1]);
        let z = ziegler_restriction(&generic4(), 3).unwrap();
        assert_eq!(z.multiplicity.values(), &[1, 1, 1]);
        assert!(ziegler_restriction(&boolean(), 3).is_err());
    }

    #[test]
    fn coker_examples() {
        for h0 in 0..6 {
            assert_eq!(yoshinaga_coker_dim(&braid(), h0).unwrap(), 0);
        }
        assert_eq!(yoshinaga_coker_dim(&generic4(), 0).unwrap(), 1);
        assert_eq!(yoshinaga_coker_dim(&boolean(), 0).unwrap(), 0);
    }

    #[test]
    fn freeness_examples() {
        let v = is_free(&braid()).unwrap();
        assert!(v.free && v.combinatorial);
        assert_eq!(v.exponents, Some([1, 2, 3]));
        assert_eq!(v.route, DecisionRoute::Fc);
        let v = is_free(&generic4()).unwrap();
        assert!(!v.free);
        assert_eq!(v.coker_dim, 1);
        assert_eq!(v.route, DecisionRoute::NonSplit);
        let v = is_free(&boolean()).unwrap();
        assert_eq!(v.exponents, Some([1, 1, 1]));
        let single = Arrangement3::from_ints(Q, &[(1, 2, 3)]).unwrap();
        assert_eq!(is_free(&single).unwrap().exponents, Some([1, 0, 0]));
    }

    #[test]
    fn fc_examples() {
        let d = super::super::decone(&braid(), 2).unwrap();
        let v = thm_fc_check(&d).unwrap();
        assert!(v.applies);
        assert_eq!((v.d, v.gap_case, v.h), (Some(2), Some(2), 3));
        let g = super::super::decone(&generic4(), 3).unwrap();
        let v = thm_fc_check(&g).unwrap();
        assert!(!v.applies);
        assert!(v.reason.unwrap().contains("does not split"));
        let boolean_decone = AffineArrangement2::from_ints(Q, &[(1, 0, 0), (0, 1, 0)]).unwrap();
        assert!(!thm_fc_check(&boolean_decone).unwrap().applies);
    }

    #[test]
    fn rest_examples() {
        let d = super::super::decone(&braid(), 2).unwrap();
        let r = thm_rest_check(&d).unwrap();
        assert_eq!(
            (r.case, r.d, r.roots, r.holds),
            (Some(1), Some(2), Some((2, 3)), Some(true))
        );
        let b = AffineArrangement2::from_ints(Q, &[(1, 0, 0), (0, 1, 0)]).unwrap();
        assert_eq!(thm_rest_check(&b).unwrap().holds, None);
        let r2 = thm_rest2_check(&d).unwrap();
        assert_eq!(r2.chambers, Some(12));
        assert_eq!(r2.chamber_bound, Some(12));
        assert!(r2.equality);
        assert_eq!(r2.freeness_confirmed, Some(true));
        assert_eq!(r2.holds, Some(true));
    }

    #[test]
    fn pb3_examples() {
        let c = pb3_membership(&braid()).unwrap();
        assert!(c.member);
        assert_eq!(c.roots, Some((2, 3)));
        let near_pencil =
            Arrangement3::from_ints(Q, &[(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 2, 0), (0, 0, 1)])
                .unwrap();
        let c = pb3_membership(&near_pencil).unwrap();
        assert!(!c.member && c.failing_restriction.is_some());
        let c = pb3_membership(&generic4()).unwrap();
        assert!(!c.member && c.all_balanced && c.roots.is_none());
    }
}
