//! Central 3-arrangements and affine line arrangements.
//!
//! Freeness of a central 3-arrangement is decided through the Ziegler
//! restriction onto a plane `H0`: with `χ(A,t) = (t-1)(t² - c1 t + c2)` and
//! `exp(A'', m0) = (d1, d2)`, the cokernel of the restriction map has
//! dimension `c2 - d1 d2 ≥ 0`, and `A` is free exactly when it vanishes.

mod chambers;
mod freeness;
mod intersection;

use std::fmt;

pub use chambers::{chamber_count, euler_chamber_count, ChamberCount, EULER_ORACLE_MAX_LINES};
pub use freeness::{
    combinatorial_route, is_free, is_free_all, is_free_at, pb3_membership, thm_fc_check,
    thm_rest2_check, thm_rest_check, yoshinaga_coker_dim, ziegler_restriction, DecisionRoute,
    FcVerdict, FreenessVerdict, Pb3Certificate, Rest2Report, RestReport, ZieglerRestriction,
};
pub use intersection::{
    affine_poset, char_poly, char_poly_affine, intersection_lattice, CharPoly, Flat,
    IntersectionLattice,
};

use crate::error::{Error, Result};
use crate::exactalg::{canonical_projective, Field, Matrix, Scalar};

/// A plane `a x + b y + c z = 0`, canonical up to scaling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm3([Scalar; 3]);

impl LinearForm3 {
    pub fn new(coeffs: [Scalar; 3]) -> Result<Self> {
        let field = coeffs[0].field();
        let c = canonical_projective(field, &coeffs)?;
        Ok(LinearForm3(c.try_into().expect("three coefficients")))
    }

    pub fn from_ints(field: Field, a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new([a, b, c].map(|x| Scalar::from_i64(field, x)))
    }

    pub fn coeffs(&self) -> &[Scalar; 3] {
        &self.0
    }

    pub fn field(&self) -> Field {
        self.0[0].field()
    }

    /// `α(v)`.
    pub fn eval(&self, v: &[Scalar; 3]) -> Scalar {
        self.0
            .iter()
            .zip(v)
            .fold(self.field().zero(), |acc, (a, b)| &acc + &(a * b))
    }
}

fn write_linear(f: &mut fmt::Formatter<'_>, coeffs: &[Scalar], vars: &[&str]) -> fmt::Result {
    let mut first = true;
    for (c, v) in coeffs.iter().zip(vars) {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        if abs.is_one() {
            write!(f, "{v}")?;
        } else {
            write!(f, "{abs}*{v}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for LinearForm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, &self.0, &["x", "y", "z"])
    }
}

/// A central arrangement of distinct planes in 3-space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrangement3 {
    field: Field,
    forms: Vec<LinearForm3>,
}

impl Arrangement3 {
    pub fn new(field: Field, forms: Vec<LinearForm3>) -> Result<Self> {
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
        Ok(Arrangement3 { field, forms })
    }

    pub fn from_ints(field: Field, forms: &[(i64, i64, i64)]) -> Result<Self> {
        let forms = forms
            .iter()
            .map(|&(a, b, c)| LinearForm3::from_ints(field, a, b, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, forms)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn forms(&self) -> &[LinearForm3] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub(crate) fn check_index(&self, h0: usize) -> Result<()> {
        if h0 >= self.len() {
            return Err(Error::HyperplaneIndex {
                index: h0,
                len: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Arrangement3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.forms.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// An affine line `a x + b y = c` with `(a, b) ≠ (0, 0)`, canonical up to
/// scaling of the triple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineLine([Scalar; 3]);

impl AffineLine {
    pub fn new(a: Scalar, b: Scalar, c: Scalar) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroForm);
        }
        let field = a.field();
        let v = canonical_projective(field, &[a, b, c])?;
        Ok(AffineLine(v.try_into().expect("three coefficients")))
    }

    pub fn from_ints(field: Field, a: i64, b: i64, c: i64) -> Result<Self> {
        let [a, b, c] = [a, b, c].map(|x| Scalar::from_i64(field, x));
        Self::new(a, b, c)
    }

    /// `(a, b, c)` for `a x + b y = c`.
    pub fn coeffs(&self) -> &[Scalar; 3] {
        &self.0
    }
}

impl fmt::Display for AffineLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, &self.0[..2], &["x", "y"])?;
        write!(f, " = {}", self.0[2])
    }
}

/// A finite set of distinct affine lines in the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineArrangement2 {
    field: Field,
    lines: Vec<AffineLine>,
}

impl AffineArrangement2 {
    pub fn new(field: Field, lines: Vec<AffineLine>) -> Result<Self> {
        for (i, l) in lines.iter().enumerate() {
            if l.0[0].field() != field {
                return Err(Error::MixedField {
                    expected: field.to_string(),
                    found: l.0[0].field().to_string(),
                });
            }
            if lines[..i].contains(l) {
                return Err(Error::DuplicateHyperplane(l.to_string()));
            }
        }
        Ok(AffineArrangement2 { field, lines })
    }

    pub fn from_ints(field: Field, lines: &[(i64, i64, i64)]) -> Result<Self> {
        let lines = lines
            .iter()
            .map(|&(a, b, c)| AffineLine::from_ints(field, a, b, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, lines)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lines(&self) -> &[AffineLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

impl fmt::Display for AffineArrangement2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lines.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Coning: `a x + b y = c` becomes `a x + b y - c z = 0`, and the plane at
/// infinity `z = 0` is appended. Returns the arrangement and the index of `z = 0`.
pub fn cone(affine: &AffineArrangement2) -> Result<(Arrangement3, usize)> {
    let mut forms = affine
        .lines
        .iter()
        .map(|l| {
            let [a, b, c] = &l.0;
            LinearForm3::new([a.clone(), b.clone(), -c])
        })
        .collect::<Result<Vec<_>>>()?;
    let f = affine.field;
    forms.push(LinearForm3::new([f.zero(), f.zero(), f.one()])?);
    let h0 = forms.len() - 1;
    Ok((Arrangement3::new(f, forms)?, h0))
}

/// Two independent vectors spanning the plane `α = 0`: the reduced-echelon
/// basis of its kernel, each scaled to canonical (coprime integer) form.
pub fn plane_basis(alpha: &LinearForm3) -> Result<[[Scalar; 3]; 2]> {
    let field = alpha.field();
    let m = Matrix::from_rows(field, 3, vec![alpha.0.to_vec()])?;
    let k = m.kernel_basis()?;
    let v: Vec<[Scalar; 3]> = k
        .iter()
        .map(|v| canonical_projective(field, v).map(|c| c.try_into().expect("three coordinates")))
        .collect::<Result<_>>()?;
    match <[[Scalar; 3]; 2]>::try_from(v) {
        Ok(b) => Ok(b),
        Err(_) => Err(Error::Internal(format!(
            "kernel of {alpha} is not 2-dimensional"
        ))),
    }
}

/// Deconing with respect to `H0`: the remaining planes restricted to the
/// affine plane `α_{H0} = 1`, in the affine coordinates `p0 + s v1 + t v2`
/// where `v1, v2` is [`plane_basis`] of `H0` and `p0` is the scaled unit
/// vector at the first nonzero coefficient of `α_{H0}`.
pub fn decone(a: &Arrangement3, h0: usize) -> Result<AffineArrangement2> {
    a.check_index(h0)?;
    let field = a.field;
    let alpha = &a.forms[h0];
    let [v1, v2] = plane_basis(alpha)?;
    let j = alpha
        .0
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero form");
    let mut p0 = [field.zero(), field.zero(), field.zero()];
    p0[j] = alpha.0[j].inv().unwrap();
    let lines = a
        .forms
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != h0)
        .map(|(_, beta)| AffineLine::new(beta.eval(&v1), beta.eval(&v2), -beta.eval(&p0)))
        .collect::<Result<Vec<_>>>()?;
    AffineArrangement2::new(field, lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn cone_examples() {
        let x0 = AffineArrangement2::from_ints(Q, &[(1, 0, 0)]).unwrap();
        let (c, h0) = cone(&x0).unwrap();
        assert_eq!(
            c,
            Arrangement3::from_ints(Q, &[(1, 0, 0), (0, 0, 1)]).unwrap()
        );
        assert_eq!(h0, 1);
        let x1 = AffineArrangement2::from_ints(Q, &[(1, 0, 1)]).unwrap();
        let (c, _) = cone(&x1).unwrap();
        assert_eq!(c.forms()[0].to_string(), "x - z");
        assert_eq!(decone(&c, 1).unwrap(), x1);
    }

    #[test]
    fn braid_decone_round_trip() {
        let braid = Arrangement3::from_ints(
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
        .unwrap();
        let d = decone(&braid, 2).unwrap();
        assert_eq!(d.len(), 5);
        assert_eq!(d.lines()[3].to_string(), "x = 1");
        let (c, h0) = cone(&d).unwrap();
        assert_eq!(decone(&c, h0).unwrap(), d);
        assert_eq!(c.len(), 6);
    }

    #[test]
    fn plane_basis_of_generic_plane() {
        let a = LinearForm3::from_ints(Q, 1, 1, 1).unwrap();
        let [v1, v2] = plane_basis(&a).unwrap();
        assert!(a.eval(&v1).is_zero() && a.eval(&v2).is_zero());
        let z = LinearForm3::from_ints(Q, 0, 0, 1).unwrap();
        let [v1, v2] = plane_basis(&z).unwrap();
        assert_eq!(v1, [Q.one(), Q.zero(), Q.zero()]);
        assert_eq!(v2, [Q.zero(), Q.one(), Q.zero()]);
    }

    #[test]
    fn affine_line_validation() {
        assert!(AffineLine::from_ints(Q, 0, 0, 1).is_err());
        assert_eq!(
            AffineLine::from_ints(Q, -2, 0, -2).unwrap(),
            AffineLine::from_ints(Q, 1, 0, 1).unwrap()
        );
        assert!(AffineArrangement2::from_ints(Q, &[(1, 0, 1), (2, 0, 2)]).is_err());
    }
}
