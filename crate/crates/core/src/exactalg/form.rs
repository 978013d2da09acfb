use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Canonical representative of a nonzero vector up to scaling.
///
/// Over ℚ: coprime integers, first nonzero entry positive. Over 𝔽_p: first
/// nonzero entry equal to 1.
pub fn canonical_projective(field: Field, v: &[Scalar]) -> Result<Vec<Scalar>> {
    if let Some(s) = v.iter().find(|s| s.field() != field) {
        return Err(Error::MixedField {
            expected: field.to_string(),
            found: s.field().to_string(),
        });
    }
    let Some(lead) = v.iter().find(|s| !s.is_zero()) else {
        return Err(Error::ZeroForm);
    };
    match field {
        Field::Rational => {
            let qs: Vec<&BigRational> = v.iter().map(|s| s.as_rational().unwrap()).collect();
            let l = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let ints: Vec<BigInt> = qs.iter().map(|q| q.numer() * &l / q.denom()).collect();
            let mut g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
            if lead.is_negative() {
                g = -g;
            }
            Ok(ints
                .into_iter()
                .map(|n| Scalar::Rational(BigRational::from_integer(n / &g)))
                .collect())
        }
        Field::Prime(_) => {
            let inv = lead.inv().expect("nonzero");
            Ok(v.iter().map(|s| s * &inv).collect())
        }
    }
}

/// A linear form `a·x1 + b·x2`, stored canonically (see
/// [`canonical_projective`]) so that equal hyperplanes compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm2 {
    a: Scalar,
    b: Scalar,
}

impl LinearForm2 {
    pub fn new(a: Scalar, b: Scalar) -> Result<Self> {
        let field = a.field();
        let c = canonical_projective(field, &[a, b])?;
        let mut it = c.into_iter();
        Ok(LinearForm2 {
            a: it.next().unwrap(),
            b: it.next().unwrap(),
        })
    }

    pub fn from_ints(field: Field, a: i64, b: i64) -> Result<Self> {
        Self::new(Scalar::from_i64(field, a), Scalar::from_i64(field, b))
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn to_form(&self) -> BinaryForm {
        BinaryForm::from_coeffs(self.field(), vec![self.b.clone(), self.a.clone()])
    }
}

impl fmt::Display for LinearForm2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_form())
    }
}

/// A homogeneous binary form of fixed degree `d`; `coeffs[i]` is the
/// coefficient of `x1^i x2^(d-i)`. The zero form exists at every degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    pub fn zero(field: Field, degree: usize) -> Self {
        BinaryForm {
            field,
            coeffs: vec![field.zero(); degree + 1],
        }
    }

    /// `coeffs` must be nonempty and all in `field`.
    pub fn from_coeffs(field: Field, coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        BinaryForm { field, coeffs }
    }

    pub fn from_ints(field: Field, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            field,
            coeffs.iter().map(|&c| Scalar::from_i64(field, c)).collect(),
        )
    }

    /// `c · x1^i x2^(d-i)`.
    pub fn monomial(field: Field, degree: usize, i: usize, c: Scalar) -> Self {
        let mut f = Self::zero(field, degree);
        f.coeffs[i] = c;
        f
    }

    pub fn constant(c: Scalar) -> Self {
        BinaryForm {
            field: c.field(),
            coeffs: vec![c],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(
            self.degree(),
            other.degree(),
            "adding forms of different degree"
        );
        BinaryForm {
            field: self.field,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &BinaryForm) -> BinaryForm {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, c: &Scalar) -> BinaryForm {
        BinaryForm {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = BinaryForm::zero(self.field, self.degree() + other.degree());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BinaryForm {
        let mut acc = BinaryForm::constant(self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in `x1` (`var = 0`) or `x2` (`var = 1`). The
    /// derivative of a constant is the zero form of degree 0.
    pub fn partial(&self, var: usize) -> BinaryForm {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::zero(self.field, 0);
        }
        let mut out = BinaryForm::zero(self.field, d - 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            match var {
                0 if i > 0 => out.coeffs[i - 1] = c.mul_int(i as u64),
                1 if i < d => out.coeffs[i] = c.mul_int((d - i) as u64),
                0 | 1 => {}
                _ => panic!("binary forms have two variables"),
            }
        }
        out
    }

    /// Division with remainder by a nonzero `divisor`, treating `x1` as the
    /// main variable: quotient coefficients are peeled off from the top.
    /// Returns `(quotient, remainder)` with `self = quotient·divisor + remainder`.
    /// The remainder is supported on the `k` coefficient slots not reached
    /// by the quotient (or is `self` when `deg divisor > deg self`).
    pub fn div_rem(&self, divisor: &BinaryForm) -> (Option<BinaryForm>, BinaryForm) {
        let (d, k) = (self.degree(), divisor.degree());
        let e = divisor
            .coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .expect("division by the zero form");
        if k > d {
            return (None, self.clone());
        }
        let lead_inv = divisor.coeffs[e].inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); d - k + 1];
        for j in (0..=d - k).rev() {
            let c = &rem[j + e] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (t, dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[j + t] = &rem[j + t] - &(&c * dc);
                }
            }
            quot[j] = c;
        }
        (
            Some(BinaryForm::from_coeffs(self.field, quot)),
            BinaryForm::from_coeffs(self.field, rem),
        )
    }

    /// `self / divisor` when the division is exact.
    pub fn exact_div(&self, divisor: &BinaryForm) -> Option<BinaryForm> {
        if self.is_zero() {
            let dd = divisor.degree();
            return (dd <= self.degree()).then(|| BinaryForm::zero(self.field, self.degree() - dd));
        }
        match self.div_rem(divisor) {
            (Some(q), r) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Some `c` with `self = c · other`, if one exists (`other` nonzero).
    pub fn scalar_ratio(&self, other: &BinaryForm) -> Option<Scalar> {
        if self.degree() != other.degree() {
            return None;
        }
        let i = other.coeffs.iter().position(|c| !c.is_zero())?;
        let c = self.coeffs[i].div(&other.coeffs[i])?;
        (other.scale(&c) == *self).then_some(c)
    }

    /// Scales so the first nonzero coefficient is 1; the zero form is returned as is.
    pub fn monic(&self) -> BinaryForm {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(lead) => self.scale(&lead.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// The form with `x1` and `x2` exchanged.
    pub fn swap_vars(&self) -> BinaryForm {
        let mut c = self.coeffs.clone();
        c.reverse();
        BinaryForm::from_coeffs(self.field, c)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for i in (0..=d).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let mut mono = Vec::new();
            match i {
                0 => {}
                1 => mono.push("x1".to_string()),
                _ => mono.push(format!("x1^{i}")),
            }
            match d - i {
                0 => {}
                1 => mono.push("x2".to_string()),
                e => mono.push(format!("x2^{e}")),
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
            match (abs.is_one(), mono.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", mono.join("*"))?,
                (false, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{}", mono.join("*"))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Linear conditions on the `d+1` coefficients of a degree-`d` form `P`
/// expressing `α^k | P`.
///
/// Row `r` is the `r`-th remainder coefficient of dividing the generic
/// form by `α^k`; column `c` is the remainder of the monomial
/// `x1^c x2^(d-c)`. When `k > d` the remainder is `P` itself, padded with
/// zero rows to `k` rows.
pub fn divisibility_constraints(alpha: &LinearForm2, k: u32, d: usize) -> Result<Matrix> {
    let field = alpha.field();
    let divisor = alpha.to_form().pow(k);
    let k = k as usize;
    if k == 0 {
        return Ok(Matrix::zeros(field, 0, d + 1));
    }
    if k > d {
        let mut m = Matrix::zeros(field, k, d + 1);
        for i in 0..=d {
            m.set(i, i, field.one());
        }
        return Ok(m);
    }
    let e = divisor.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
    // Slots j+e (j = 0..=d-k) are cleared by the quotient; the rest hold the remainder.
    let slots: Vec<usize> = (0..=d).filter(|&i| i < e || i > d - k + e).collect();
    debug_assert_eq!(slots.len(), k);
    let mut m = Matrix::zeros(field, k, d + 1);
    for c in 0..=d {
        let mono = BinaryForm::monomial(field, d, c, field.one());
        let (_, rem) = mono.div_rem(&divisor);
        for (r, &s) in slots.iter().enumerate() {
            m.set(r, c, rem.coeffs[s].clone());
        }
    }
    Ok(m)
}

/// Whether `α^k` divides `P`. The zero form is divisible by everything.
pub fn binary_form_divides(alpha: &LinearForm2, k: u32, p: &BinaryForm) -> bool {
    if p.is_zero() || k == 0 {
        return true;
    }
    if k as usize > p.degree() {
        return false;
    }
    p.exact_div(&alpha.to_form().pow(k)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn canonical_linear_forms() {
        let l = LinearForm2::new(
            Scalar::Rational(BigRational::new((-2).into(), 3.into())),
            Scalar::Rational(BigRational::new(4.into(), 3.into())),
        )
        .unwrap();
        assert_eq!(l, LinearForm2::from_ints(Q, 1, -2).unwrap());
        assert_eq!(l.to_string(), "x1 - 2*x2");
        assert!(LinearForm2::from_ints(Q, 0, 0).is_err());
        let f = Field::Prime(5);
        let l = LinearForm2::from_ints(f, 2, 4).unwrap();
        assert_eq!(l, LinearForm2::from_ints(f, 1, 2).unwrap());
    }

    #[test]
    fn derivative_and_display() {
        // x1^2 + 2 x1 x2 + x2^2
        let p = BinaryForm::from_ints(Q, &[1, 2, 1]);
        assert_eq!(p.to_string(), "x1^2 + 2*x1*x2 + x2^2");
        assert_eq!(p.partial(0), BinaryForm::from_ints(Q, &[2, 2]));
        assert_eq!(p.partial(1), BinaryForm::from_ints(Q, &[2, 2]));
        assert_eq!(BinaryForm::from_ints(Q, &[0, 0]).to_string(), "0");
        assert_eq!(BinaryForm::from_ints(Q, &[0, -1]).to_string(), "-x1");
    }

    #[test]
    fn square_is_divisible() {
        let alpha = LinearForm2::from_ints(Q, 1, 1).unwrap();
        let p = BinaryForm::from_ints(Q, &[1, 2, 1]);
        assert!(binary_form_divides(&alpha, 2, &p));
        let m = divisibility_constraints(&alpha, 2, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert!(m.mul_vec(p.coeffs()).iter().all(Scalar::is_zero));
    }

    #[test]
    fn coordinate_divisibility() {
        let x1 = LinearForm2::from_ints(Q, 1, 0).unwrap();
        let m = divisibility_constraints(&x1, 1, 1).unwrap();
        let k = m.kernel_basis().unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(BinaryForm::from_coeffs(Q, k[0].clone()).to_string(), "x1");
        assert!(!binary_form_divides(
            &x1,
            1,
            &BinaryForm::from_ints(Q, &[1, 0, 0, 0])
        ));
    }

    #[test]
    fn x2_power_constraints() {
        let x2 = LinearForm2::from_ints(Q, 0, 1).unwrap();
        let m = divisibility_constraints(&x2, 2, 3).unwrap();
        let k = m.kernel_basis().unwrap();
        // forms divisible by x2^2 in degree 3: x2^3, x1 x2^2
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(binary_form_divides(&x2, 2, &BinaryForm::from_coeffs(Q, v)));
        }
    }

    #[test]
    fn cube_cannot_divide_quadratic() {
        let alpha = LinearForm2::from_ints(Q, 1, -1).unwrap();
        let m = divisibility_constraints(&alpha, 3, 2).unwrap();
        assert_eq!(m.rows(), 3);
        assert!(m.kernel_basis().unwrap().is_empty());
        // brute force over the monomial basis and small combinations
        for a in -2..=2 {
            for b in -2..=2 {
                for c in -2..=2 {
                    let p = BinaryForm::from_ints(Q, &[a, b, c]);
                    assert_eq!(binary_form_divides(&alpha, 3, &p), p.is_zero());
                }
            }
        }
    }

    #[test]
    fn char_two_fourth_power() {
        let f = Field::Prime(2);
        let x1 = LinearForm2::from_ints(f, 1, 0).unwrap();
        let p = BinaryForm::monomial(f, 4, 4, f.one());
        assert!(binary_form_divides(&x1, 4, &p));
        // (x1+x2)^4 = x1^4 + x2^4 over F_2
        let s = LinearForm2::from_ints(f, 1, 1).unwrap().to_form().pow(4);
        assert_eq!(s, BinaryForm::from_ints(f, &[1, 0, 0, 0, 1]));
    }

    #[test]
    fn exact_division_and_ratio() {
        let a = LinearForm2::from_ints(Q, 1, 2).unwrap().to_form();
        let b = LinearForm2::from_ints(Q, 0, 1).unwrap().to_form();
        let p = a.mul(&b).mul(&a);
        assert_eq!(p.exact_div(&a.mul(&a)), Some(b.clone()));
        assert_eq!(p.exact_div(&b.mul(&b)), None);
        let two = Scalar::from_i64(Q, -2);
        assert_eq!(p.scale(&two).scalar_ratio(&p), Some(two));
    }
}
