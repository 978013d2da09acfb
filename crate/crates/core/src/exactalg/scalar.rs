use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of an arrangement: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Validated constructor for `𝔽_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::InvalidPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_i64(*self, 0)
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_i64(*self, 1)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept reduced with positive
/// denominator (guaranteed by `BigRational`); residues lie in `[0, p)`.
///
/// Arithmetic between elements of different fields is a programming error
/// and panics; fallible entry points (`Matrix::kernel_basis`, constructors)
/// check field agreement up front and return [`Error::MixedField`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, p: u64 },
}

impl Scalar {
    pub fn from_i64(field: Field, n: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Mod {
                value: (n as i128).rem_euclid(p as i128) as u64,
                p,
            },
        }
    }

    /// Maps an exact rational into `field`. Fails over `𝔽_p` when the
    /// denominator is divisible by `p`.
    pub fn from_rational(field: Field, q: &BigRational) -> Result<Scalar> {
        match field {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let num = q.numer().mod_floor(&pb).to_u64().expect("residue fits u64");
                let den = q.denom().mod_floor(&pb).to_u64().expect("residue fits u64");
                if den == 0 {
                    return Err(Error::Parse(format!(
                        "denominator of {q} vanishes modulo {p}"
                    )));
                }
                let n = Scalar::Mod { value: num, p };
                let d = Scalar::Mod { value: den, p };
                Ok(&n * &d.inv().expect("nonzero residue"))
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Mod { .. } => None,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|r| self * &r)
    }

    /// `self * n` for a machine integer, used by derivatives.
    pub fn mul_int(&self, n: u64) -> Scalar {
        self * &Scalar::from_i64(self.field(), n as i64)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::from_i64(self.field(), 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sign used for canonicalization: rationals by sign, residues as nonnegative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }

    /// Exact decimal string: `"3"`, `"-7/2"`, or the residue for `𝔽_p`.
    pub fn to_exact_string(&self) -> String {
        self.to_string()
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

fn same_prime(a: u64, b: u64) -> u64 {
    assert_eq!(a, b, "mixed-field arithmetic: F_{a} and F_{b}");
    a
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Mod {
                    value: ((*a as u128 + *b as u128) % p as u128) as u64,
                    p,
                }
            }
            _ => panic!("mixed-field arithmetic: Q and F_p"),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Mod {
                    value: ((*a as u128 * *b as u128) % p as u128) as u64,
                    p,
                }
            }
            _ => panic!("mixed-field arithmetic: Q and F_p"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used only for deterministic sorting (residues by value).
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) => (p, a).cmp(&(q, b)),
            (Scalar::Rational(_), Scalar::Mod { .. }) => Ordering::Less,
            (Scalar::Mod { .. }, Scalar::Rational(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(_) => write!(f, "{self}"),
            Scalar::Mod { value, p } => write!(f, "{value} (mod {p})"),
        }
    }
}

/// Parses `"3"`, `"-7/2"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact number: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Canonical string of a rational (`"3"`, `"-7/2"`).
pub fn rational_to_string(q: &BigRational) -> String {
    Scalar::Rational(q.clone()).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn rationals_stay_reduced() {
        let s = &q(2, 4) + &q(1, 4);
        assert_eq!(s, q(3, 4));
        if let Scalar::Rational(r) = q(6, -8) {
            assert_eq!(r.numer(), &BigInt::from(-3));
            assert_eq!(r.denom(), &BigInt::from(4));
        }
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = Scalar::from_i64(f, -1);
        assert_eq!(a, Scalar::Mod { value: 6, p: 7 });
        let inv = Scalar::from_i64(f, 3).inv().unwrap();
        assert!((&inv * &Scalar::from_i64(f, 3)).is_one());
        assert!(Scalar::from_i64(f, 14).is_zero());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
    }

    #[test]
    fn rational_into_prime_field() {
        let f = Field::Prime(5);
        let half = parse_rational("1/2").unwrap();
        let s = Scalar::from_rational(f, &half).unwrap();
        assert_eq!(s, Scalar::Mod { value: 3, p: 5 });
        assert!(Scalar::from_rational(f, &parse_rational("1/10").unwrap()).is_err());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(
            rational_to_string(&parse_rational("-14/4").unwrap()),
            "-7/2"
        );
        assert_eq!(rational_to_string(&parse_rational(" 3 ").unwrap()), "3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    #[should_panic(expected = "mixed-field")]
    fn mixed_fields_panic() {
        let _ = &q(1, 1) + &Scalar::from_i64(Field::Prime(3), 1);
    }
}
