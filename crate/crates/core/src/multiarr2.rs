//! Logarithmic derivation modules of plane multiarrangements.
//!
//! Every 2-multiarrangement is free, so `D(A,m) ≅ S(-d1) ⊕ S(-d2)` with
//! `d1 + d2 = |m|`. The solver finds `d1` as the least degree in which the
//! tangency conditions have a nonzero solution, then reads bases off the
//! canonical kernel of the degree-`d` constraint matrix.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{
    binary_form_divides, divisibility_constraints, BinaryForm, Field, LinearForm2, Matrix, Scalar,
};

/// A central arrangement of distinct lines in the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrangement2 {
    field: Field,
    forms: Vec<LinearForm2>,
}

impl Arrangement2 {
    pub fn new(field: Field, forms: Vec<LinearForm2>) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::Hypothesis(
                "an arrangement needs at least one line".into(),
            ));
        }
        for (i, f) in forms.iter().enumerate() {
            if f.field() != field {
                return Err(Error::MixedField {
                    expected: field.to_string(),
                    found: f.field().to_string(),
                });
            }
            if forms[..i].contains(f) {
                return Err(Error::DuplicateHyperplane(f.to_string()));
            }
        }
        Ok(Arrangement2 { field, forms })
    }

    pub fn from_ints(field: Field, forms: &[(i64, i64)]) -> Result<Self> {
        let forms = forms
            .iter()
            .map(|&(a, b)| LinearForm2::from_ints(field, a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, forms)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn forms(&self) -> &[LinearForm2] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// `∏ α_H^{m(H)}`.
    pub fn defining_polynomial(&self, m: &Multiplicity) -> BinaryForm {
        self.forms
            .iter()
            .zip(m.values())
            .fold(BinaryForm::constant(self.field.one()), |acc, (a, &k)| {
                acc.mul(&a.to_form().pow(k))
            })
    }

    /// The arrangement in the coordinates `x ↦ T x`: each `α` becomes `α ∘ T`.
    pub fn pullback(&self, t: &[[Scalar; 2]; 2]) -> Result<Self> {
        let forms = self
            .forms
            .iter()
            .map(|l| {
                LinearForm2::new(
                    &(l.a() * &t[0][0]) + &(l.b() * &t[1][0]),
                    &(l.a() * &t[0][1]) + &(l.b() * &t[1][1]),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.field, forms)
    }

    fn check(&self, m: &Multiplicity) -> Result<()> {
        if m.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: m.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Arrangement2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.forms.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}} over {}", parts.join(", "), self.field)
    }
}

/// A point of the multiplicity lattice: one nonnegative integer per line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiplicity(Vec<u32>);

impl Multiplicity {
    pub fn new(values: Vec<u32>) -> Self {
        Multiplicity(values)
    }

    pub fn constant(h: usize, k: u32) -> Self {
        Multiplicity(vec![k; h])
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|m|`.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&v| v as u64).sum()
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// `2·max m ≤ |m|`: no line carries more than the others together.
    pub fn is_balanced(&self) -> bool {
        2 * self.max() as u64 <= self.total()
    }

    /// The line `K` with `m(K) > |m| - m(K)`, if any (there is at most one).
    pub fn dominant(&self) -> Option<usize> {
        let total = self.total();
        self.0.iter().position(|&v| 2 * v as u64 > total)
    }

    /// Componentwise `self - other`, floored at zero.
    pub fn saturating_sub(&self, other: &Multiplicity) -> Multiplicity {
        Multiplicity(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.saturating_sub(*b))
                .collect(),
        )
    }

    /// Componentwise `self + other - 1`; `None` if any entry would be negative.
    pub fn shift(&self, other: &Multiplicity) -> Option<Multiplicity> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a + b).checked_sub(1))
            .collect::<Option<Vec<_>>>()
            .map(Multiplicity)
    }
}

impl From<Vec<u32>> for Multiplicity {
    fn from(v: Vec<u32>) -> Self {
        Multiplicity(v)
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A homogeneous derivation `f ∂1 + g ∂2` with `deg f = deg g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation2 {
    f: BinaryForm,
    g: BinaryForm,
}

impl Derivation2 {
    pub fn new(f: BinaryForm, g: BinaryForm) -> Self {
        assert_eq!(
            f.degree(),
            g.degree(),
            "derivation components must share a degree"
        );
        Derivation2 { f, g }
    }

    pub fn zero(field: Field, degree: usize) -> Self {
        Self::new(
            BinaryForm::zero(field, degree),
            BinaryForm::zero(field, degree),
        )
    }

    /// `x1 ∂1 + x2 ∂2`.
    pub fn euler(field: Field) -> Self {
        Self::new(
            BinaryForm::from_ints(field, &[0, 1]),
            BinaryForm::from_ints(field, &[1, 0]),
        )
    }

    /// The constant derivation `a ∂1 + b ∂2`.
    pub fn constant(a: Scalar, b: Scalar) -> Self {
        Self::new(BinaryForm::constant(a), BinaryForm::constant(b))
    }

    /// Reads the kernel-vector layout `[f_0..f_d, g_0..g_d]`.
    pub fn from_vector(field: Field, v: &[Scalar]) -> Self {
        assert!(v.len() >= 2 && v.len().is_multiple_of(2));
        let n = v.len() / 2;
        Self::new(
            BinaryForm::from_coeffs(field, v[..n].to_vec()),
            BinaryForm::from_coeffs(field, v[n..].to_vec()),
        )
    }

    pub fn to_vector(&self) -> Vec<Scalar> {
        self.f
            .coeffs()
            .iter()
            .chain(self.g.coeffs())
            .cloned()
            .collect()
    }

    pub fn f(&self) -> &BinaryForm {
        &self.f
    }

    pub fn g(&self) -> &BinaryForm {
        &self.g
    }

    pub fn field(&self) -> Field {
        self.f.field()
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    /// `θ(P) = f ∂P/∂x1 + g ∂P/∂x2`. Constants map to the zero form of
    /// degree `deg θ`.
    pub fn apply(&self, p: &BinaryForm) -> BinaryForm {
        if p.degree() == 0 {
            return BinaryForm::zero(self.field(), self.degree());
        }
        self.f.mul(&p.partial(0)).add(&self.g.mul(&p.partial(1)))
    }

    /// `θ(α) = a f + b g`.
    pub fn apply_linear(&self, alpha: &LinearForm2) -> BinaryForm {
        self.f.scale(alpha.a()).add(&self.g.scale(alpha.b()))
    }

    pub fn add(&self, other: &Derivation2) -> Derivation2 {
        Self::new(self.f.add(&other.f), self.g.add(&other.g))
    }

    pub fn scale(&self, c: &Scalar) -> Derivation2 {
        Self::new(self.f.scale(c), self.g.scale(c))
    }

    /// `p · θ`.
    pub fn mul_form(&self, p: &BinaryForm) -> Derivation2 {
        Self::new(p.mul(&self.f), p.mul(&self.g))
    }

    /// Scaled so the first nonzero entry of [`Derivation2::to_vector`] is 1.
    pub fn monic(&self) -> Derivation2 {
        match self.to_vector().into_iter().find(|c| !c.is_zero()) {
            Some(lead) => self.scale(&lead.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// Some `c` with `self = c · other`.
    pub fn scalar_ratio(&self, other: &Derivation2) -> Option<Scalar> {
        let (a, b) = (self.to_vector(), other.to_vector());
        if a.len() != b.len() {
            return None;
        }
        let i = b.iter().position(|c| !c.is_zero())?;
        let c = a[i].div(&b[i])?;
        (other.scale(&c) == *self).then_some(c)
    }

    /// Whether `θ(α_H) ∈ α_H^{m(H)} S` for every line.
    pub fn is_member(&self, a: &Arrangement2, m: &Multiplicity) -> bool {
        a.forms()
            .iter()
            .zip(m.values())
            .all(|(l, &k)| binary_form_divides(l, k, &self.apply_linear(l)))
    }
}

impl fmt::Display for Derivation2 {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.f.is_zero(), self.g.is_zero()) {
            (true, true) => write!(fm, "0"),
            (false, true) => write!(fm, "({})∂1", self.f),
            (true, false) => write!(fm, "({})∂2", self.g),
            (false, false) => write!(fm, "({})∂1 + ({})∂2", self.f, self.g),
        }
    }
}

/// `exp(A,m) = (d1, d2)` with `d1 ≤ d2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Exponents2 {
    pub d1: u64,
    pub d2: u64,
}

impl Exponents2 {
    pub fn new(a: u64, b: u64) -> Self {
        Exponents2 {
            d1: a.min(b),
            d2: a.max(b),
        }
    }

    /// `Δ = d2 - d1`.
    pub fn delta(&self) -> u64 {
        self.d2 - self.d1
    }
}

impl fmt::Display for Exponents2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.d1, self.d2)
    }
}

/// Stacked tangency conditions on a generic degree-`d` derivation; the
/// unknowns are laid out as in [`Derivation2::from_vector`].
pub fn degree_constraints(a: &Arrangement2, m: &Multiplicity, d: usize) -> Result<Matrix> {
    a.check(m)?;
    let field = a.field();
    let n = d + 1;
    let mut out = Matrix::zeros(field, 0, 2 * n);
    for (l, &k) in a.forms().iter().zip(m.values()) {
        if k == 0 {
            continue;
        }
        let c = divisibility_constraints(l, k, d)?;
        let mut block = Matrix::zeros(field, c.rows(), 2 * n);
        for r in 0..c.rows() {
            for j in 0..n {
                let v = c.get(r, j);
                if v.is_zero() {
                    continue;
                }
                block.set(r, j, v * l.a());
                block.set(r, n + j, v * l.b());
            }
        }
        out.append_rows(&block)?;
    }
    Ok(out)
}

/// `dim_K D(A,m)_d`.
pub fn derivation_space_dim(a: &Arrangement2, m: &Multiplicity, d: usize) -> Result<usize> {
    let c = degree_constraints(a, m, d)?;
    Ok(c.cols() - c.rank()?)
}

/// Canonical basis of the degree-`d` component of `D(A,m)`, in reduced
/// echelon order of the coefficient vectors.
pub fn degree_component(a: &Arrangement2, m: &Multiplicity, d: usize) -> Result<Vec<Derivation2>> {
    let c = degree_constraints(a, m, d)?;
    Ok(c.kernel_basis()?
        .iter()
        .map(|v| Derivation2::from_vector(a.field(), v))
        .collect())
}

/// `exp(A,m)` by the degree scan: `d1` is the least degree carrying a
/// nonzero derivation, `d2 = |m| - d1`.
pub fn exponents(a: &Arrangement2, m: &Multiplicity) -> Result<Exponents2> {
    a.check(m)?;
    let total = m.total();
    for d in 0..=total / 2 {
        if derivation_space_dim(a, m, d as usize)? > 0 {
            return Ok(Exponents2::new(d, total - d));
        }
    }
    Err(Error::Internal(format!(
        "no derivation of degree ≤ {} for {a} with m = {m}",
        total / 2
    )))
}

pub fn delta(a: &Arrangement2, m: &Multiplicity) -> Result<u64> {
    Ok(exponents(a, m)?.delta())
}

pub fn is_balanced(a: &Arrangement2, m: &Multiplicity) -> Result<bool> {
    a.check(m)?;
    Ok(m.is_balanced())
}

/// The canonical nonzero element of degree `d1`: the first vector of the
/// canonical kernel basis, leading coefficient 1.
pub fn lower_degree_basis(a: &Arrangement2, m: &Multiplicity) -> Result<Derivation2> {
    if m.total() == 0 {
        a.check(m)?;
        return Err(Error::EmptyMultiplicity);
    }
    let exp = exponents(a, m)?;
    degree_component(a, m, exp.d1 as usize)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal(format!("empty degree-{} component", exp.d1)))
}

/// `f1 g2 - f2 g1`.
pub fn saito_det(t1: &Derivation2, t2: &Derivation2) -> BinaryForm {
    t1.f.mul(&t2.g).sub(&t2.f.mul(&t1.g))
}

/// Scalar `c ≠ 0` with `saito_det(t1, t2) = c · ∏ α_H^{m(H)}`, provided both
/// derivations lie in `D(A,m)`; `None` when the pair is not a basis.
pub fn saito_scalar(
    a: &Arrangement2,
    m: &Multiplicity,
    t1: &Derivation2,
    t2: &Derivation2,
) -> Option<Scalar> {
    if !t1.is_member(a, m) || !t2.is_member(a, m) {
        return None;
    }
    let det = saito_det(t1, t2);
    let q = a.defining_polynomial(m);
    det.scalar_ratio(&q).filter(|c| !c.is_zero())
}

/// A homogeneous basis `(θ1, θ2)` of degrees `(d1, d2)`.
///
/// `θ2` is the vector of the canonical degree-`d2` kernel basis whose pivot
/// is not a pivot of `S_{d2-d1}·θ1`; it is therefore independent of the
/// basis chosen for that subspace.
pub fn basis(a: &Arrangement2, m: &Multiplicity) -> Result<(Derivation2, Derivation2)> {
    let theta1 = lower_degree_basis(a, m)?;
    let exp = exponents(a, m)?;
    let field = a.field();
    let k = (exp.d2 - exp.d1) as usize;
    let multiples: Vec<Vec<Scalar>> = (0..=k)
        .map(|i| {
            theta1
                .mul_form(&BinaryForm::monomial(field, k, i, field.one()))
                .to_vector()
        })
        .collect();
    let width = multiples[0].len();
    let (_, taken) = Matrix::from_rows(field, width, multiples)?.rref();
    let theta2 = degree_component(a, m, exp.d2 as usize)?
        .into_iter()
        .find(|v| {
            let pivot = v.to_vector().iter().position(|c| !c.is_zero());
            pivot.is_some_and(|p| !taken.contains(&p))
        })
        .ok_or_else(|| {
            Error::Internal(format!(
                "no complement to S·θ1 in degree {} for m = {m}",
                exp.d2
            ))
        })?;
    if saito_scalar(a, m, &theta1, &theta2).is_none() {
        return Err(Error::Internal(format!(
            "Saito determinant check failed for {a}, m = {m}"
        )));
    }
    Ok((theta1, theta2))
}

/// Exponents and lower-degree basis of an unbalanced multiplicity, read
/// off directly: with `K` dominant, `∏_{H≠K} α_H^{m(H)} · ∂_v` where `∂_v`
/// is the constant derivation killing `α_K`.
pub fn nonbalanced_exponents(
    a: &Arrangement2,
    m: &Multiplicity,
) -> Result<(Exponents2, Derivation2)> {
    a.check(m)?;
    let k = m.dominant().ok_or(Error::Balanced)?;
    let field = a.field();
    let total = m.total();
    let mk = m.values()[k] as u64;
    let alpha = &a.forms()[k];
    let dv = Derivation2::constant(alpha.b().clone(), -alpha.a());
    let mut rest = m.values().to_vec();
    rest[k] = 0;
    let p = a.defining_polynomial(&Multiplicity::new(rest));
    let theta = dv.mul_form(&p).monic();
    debug_assert!(theta.f().field() == field);
    Ok((Exponents2::new(mk, total - mk), theta))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn a2(field: Field) -> Arrangement2 {
        Arrangement2::from_ints(field, &[(1, 0), (0, 1), (1, 1)]).unwrap()
    }

    fn b2() -> Arrangement2 {
        Arrangement2::from_ints(Q, &[(1, 0), (0, 1), (1, -1), (1, 1)]).unwrap()
    }

    fn m(v: &[u32]) -> Multiplicity {
        Multiplicity::new(v.to_vec())
    }

    #[test]
    fn duplicate_lines_rejected() {
        assert!(matches!(
            Arrangement2::from_ints(Q, &[(1, 0), (2, 0)]),
            Err(Error::DuplicateHyperplane(_))
        ));
    }

    #[test]
    fn simple_a2_dimensions() {
        let a = a2(Q);
        let one = m(&[1, 1, 1]);
        assert_eq!(derivation_space_dim(&a, &one, 0).unwrap(), 0);
        assert_eq!(derivation_space_dim(&a, &one, 1).unwrap(), 1);
        assert_eq!(derivation_space_dim(&a, &one, 2).unwrap(), 3);
    }

    #[test]
    fn remark_dimension_in_char_two() {
        let a = a2(Field::Prime(2));
        assert_eq!(derivation_space_dim(&a, &m(&[4, 4, 4]), 3).unwrap(), 0);
    }

    #[test]
    fn exponent_examples() {
        let a = a2(Q);
        assert_eq!(
            exponents(&a, &m(&[1, 1, 1])).unwrap(),
            Exponents2::new(1, 2)
        );
        assert_eq!(
            exponents(&a, &m(&[2, 2, 1])).unwrap(),
            Exponents2::new(2, 3)
        );
        assert_eq!(
            exponents(&a, &m(&[5, 1, 1])).unwrap(),
            Exponents2::new(2, 5)
        );
        assert_eq!(
            exponents(&a, &m(&[0, 0, 0])).unwrap(),
            Exponents2::new(0, 0)
        );
        assert_eq!(
            exponents(&a2(Field::Prime(2)), &m(&[4, 4, 4])).unwrap(),
            Exponents2::new(4, 8)
        );
        assert!(matches!(
            exponents(&a, &m(&[1, 1])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn lower_degree_basis_examples() {
        let a = a2(Q);
        let e = lower_degree_basis(&a, &m(&[1, 1, 1])).unwrap();
        assert!(e.scalar_ratio(&Derivation2::euler(Q)).is_some());

        let f2 = Field::Prime(2);
        let t = lower_degree_basis(&a2(f2), &m(&[4, 4, 4])).unwrap();
        let expected = Derivation2::new(
            BinaryForm::monomial(f2, 4, 4, f2.one()),
            BinaryForm::monomial(f2, 4, 0, f2.one()),
        );
        assert!(t.scalar_ratio(&expected).is_some());

        // x2 (x1 + x2) ∂2
        let t = lower_degree_basis(&a, &m(&[5, 1, 1])).unwrap();
        let expected =
            Derivation2::new(BinaryForm::zero(Q, 2), BinaryForm::from_ints(Q, &[1, 1, 0]));
        assert!(t.scalar_ratio(&expected).is_some());

        assert_eq!(
            lower_degree_basis(&a, &m(&[0, 0, 0])),
            Err(Error::EmptyMultiplicity)
        );
    }

    #[test]
    fn bases_satisfy_saito() {
        let a = a2(Q);
        let one = m(&[1, 1, 1]);
        let (t1, t2) = basis(&a, &one).unwrap();
        assert_eq!((t1.degree(), t2.degree()), (1, 2));
        assert!(saito_scalar(&a, &one, &t1, &t2).is_some());

        let single = Arrangement2::from_ints(Q, &[(1, 0)]).unwrap();
        let (t1, t2) = basis(&single, &m(&[3])).unwrap();
        assert_eq!(t1, Derivation2::constant(Q.zero(), Q.one()));
        let x1_cubed = Derivation2::new(
            BinaryForm::monomial(Q, 3, 3, Q.one()),
            BinaryForm::zero(Q, 3),
        );
        assert_eq!(t2, x1_cubed);
    }

    #[test]
    fn saito_det_examples() {
        let d1 = Derivation2::constant(Q.one(), Q.zero());
        let d2 = Derivation2::constant(Q.zero(), Q.one());
        assert_eq!(saito_det(&d1, &d2), BinaryForm::constant(Q.one()));
        let e = Derivation2::euler(Q);
        assert!(saito_det(&e, &e).is_zero());
        let x1sq = Derivation2::new(BinaryForm::from_ints(Q, &[0, 0, 1]), BinaryForm::zero(Q, 2));
        // −x1^2 x2
        assert_eq!(
            saito_det(&e, &x1sq),
            BinaryForm::from_ints(Q, &[0, 0, -1, 0])
        );
    }

    #[test]
    fn balance_and_delta() {
        assert!(m(&[1, 1, 1]).is_balanced());
        assert!(!m(&[5, 1, 1]).is_balanced());
        assert!(m(&[2, 2, 1]).is_balanced());
        assert_eq!(delta(&a2(Q), &m(&[1, 1, 1])).unwrap(), 1);
        assert_eq!(delta(&a2(Q), &m(&[5, 1, 1])).unwrap(), 3);
        assert_eq!(delta(&b2(), &m(&[1, 1, 1, 1])).unwrap(), 2);
    }

    #[test]
    fn nonbalanced_fast_path() {
        let a = a2(Q);
        let (e, t) = nonbalanced_exponents(&a, &m(&[5, 1, 1])).unwrap();
        assert_eq!(e, Exponents2::new(2, 5));
        assert!(t.apply_linear(&a.forms()[0]).is_zero());
        assert!(t.is_member(&a, &m(&[5, 1, 1])));

        let two = Arrangement2::from_ints(Q, &[(1, 0), (0, 1)]).unwrap();
        let (e, _) = nonbalanced_exponents(&two, &m(&[3, 1])).unwrap();
        assert_eq!(e, Exponents2::new(1, 3));
        assert_eq!(e, exponents(&two, &m(&[3, 1])).unwrap());

        let (e, _) = nonbalanced_exponents(&a, &m(&[9, 2, 2])).unwrap();
        assert_eq!(e, Exponents2::new(4, 9));
        assert_eq!(e, exponents(&a, &m(&[9, 2, 2])).unwrap());

        assert_eq!(
            nonbalanced_exponents(&a, &m(&[1, 1, 1])).map(|_| ()),
            Err(Error::Balanced)
        );
    }

    #[test]
    fn zero_multiplicities_impose_nothing() {
        let a = b2();
        assert_eq!(
            exponents(&a, &m(&[2, 0, 2, 0])).unwrap(),
            exponents(
                &Arrangement2::from_ints(Q, &[(1, 0), (1, -1)]).unwrap(),
                &m(&[2, 2])
            )
            .unwrap()
        );
    }
}
