use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AffineArrangement2, Arrangement3};
use crate::exactalg::Scalar;

/// One element of an intersection poset, identified by the set of
/// hyperplanes containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flat {
    pub dim: usize,
    pub hyperplanes: Vec<usize>,
    pub mobius: i64,
}

/// Intersection poset with Möbius values, ordered by decreasing dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionLattice {
    pub ambient_dim: usize,
    pub flats: Vec<Flat>,
}

impl IntersectionLattice {
    fn build(ambient_dim: usize, mut sets: Vec<(usize, Vec<usize>)>) -> Self {
        sets.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let mut flats: Vec<Flat> = Vec::with_capacity(sets.len());
        for (dim, hyperplanes) in sets {
            let above: i64 = flats
                .iter()
                .filter(|y| y.dim > dim && is_subset(&y.hyperplanes, &hyperplanes))
                .map(|y| y.mobius)
                .sum();
            let mobius = if hyperplanes.is_empty() { 1 } else { -above };
            flats.push(Flat {
                dim,
                hyperplanes,
                mobius,
            });
        }
        IntersectionLattice { ambient_dim, flats }
    }

    /// Flats of the given dimension.
    pub fn of_dim(&self, dim: usize) -> impl Iterator<Item = &Flat> {
        self.flats.iter().filter(move |f| f.dim == dim)
    }

    /// Number of flats per codimension `0..=ambient_dim`.
    pub fn rank_counts(&self) -> Vec<usize> {
        (0..=self.ambient_dim)
            .map(|r| self.of_dim(self.ambient_dim - r).count())
            .collect()
    }

    /// `χ(t) = Σ μ(X) t^{dim X}`.
    pub fn char_poly(&self) -> CharPoly {
        let mut c = vec![0i64; self.ambient_dim + 1];
        for f in &self.flats {
            c[f.dim] += f.mobius;
        }
        CharPoly::new(c)
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.len() < big.len() && small.iter().all(|h| big.binary_search(h).is_ok())
}

fn cross(u: &[Scalar; 3], v: &[Scalar; 3]) -> [Scalar; 3] {
    [
        &(&u[1] * &v[2]) - &(&u[2] * &v[1]),
        &(&u[2] * &v[0]) - &(&u[0] * &v[2]),
        &(&u[0] * &v[1]) - &(&u[1] * &v[0]),
    ]
}

/// `L(A)` of a central 3-arrangement by pairwise intersection.
pub fn intersection_lattice(a: &Arrangement3) -> IntersectionLattice {
    let n = a.len();
    let mut sets: Vec<(usize, Vec<usize>)> = vec![(3, vec![])];
    sets.extend((0..n).map(|i| (2, vec![i])));
    let mut lines = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let dir = cross(a.forms[i].coeffs(), a.forms[j].coeffs());
            let through: Vec<usize> = (0..n)
                .filter(|&k| a.forms[k].eval(&dir).is_zero())
                .collect();
            lines.insert(through);
        }
    }
    let has_origin = lines.len() >= 2;
    sets.extend(lines.into_iter().map(|s| (1, s)));
    if has_origin {
        sets.push((0, (0..n).collect()));
    }
    IntersectionLattice::build(3, sets)
}

/// Intersection poset of an affine line arrangement (plane, lines, points).
pub fn affine_poset(a: &AffineArrangement2) -> IntersectionLattice {
    let n = a.len();
    let mut sets: Vec<(usize, Vec<usize>)> = vec![(2, vec![])];
    sets.extend((0..n).map(|i| (1, vec![i])));
    let mut points = BTreeSet::new();
    for (_, through) in intersection_points(a) {
        points.insert(through);
    }
    sets.extend(points.into_iter().map(|s| (0, s)));
    IntersectionLattice::build(2, sets)
}

/// Distinct intersection points with the sorted list of lines through each.
pub(crate) fn intersection_points(a: &AffineArrangement2) -> Vec<([Scalar; 2], Vec<usize>)> {
    let n = a.len();
    let mut found: Vec<([Scalar; 2], Vec<usize>)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let [a1, b1, c1] = a.lines[i].coeffs();
            let [a2, b2, c2] = a.lines[j].coeffs();
            let det = &(a1 * b2) - &(a2 * b1);
            let Some(inv) = det.inv() else { continue };
            let x = &(&(c1 * b2) - &(c2 * b1)) * &inv;
            let y = &(&(a1 * c2) - &(a2 * c1)) * &inv;
            if found.iter().any(|(p, _)| p[0] == x && p[1] == y) {
                continue;
            }
            let through: Vec<usize> = (0..n)
                .filter(|&k| {
                    let [a, b, c] = a.lines[k].coeffs();
                    (&(&(a * &x) + &(b * &y)) - c).is_zero()
                })
                .collect();
            found.push(([x, y], through));
        }
    }
    found
}

/// Characteristic polynomial of a central 3-arrangement.
pub fn char_poly(a: &Arrangement3) -> CharPoly {
    intersection_lattice(a).char_poly()
}

/// Characteristic polynomial `t² - k t + Σ (n_p - 1)` of an affine line arrangement.
pub fn char_poly_affine(a: &AffineArrangement2) -> CharPoly {
    affine_poset(a).char_poly()
}

/// Integer polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharPoly(Vec<i64>);

impl CharPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        CharPoly(coeffs)
    }

    /// `∏ (t - r)`.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots
            .iter()
            .fold(CharPoly(vec![1]), |p, &r| p.mul(&CharPoly(vec![-r, 1])))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.0.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    pub fn mul(&self, other: &CharPoly) -> CharPoly {
        let mut c = vec![0i64; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        CharPoly::new(c)
    }

    /// Quotient by `(t - r)` when the division is exact.
    pub fn div_linear(&self, r: i64) -> Option<CharPoly> {
        if self.degree() == 0 {
            return None;
        }
        let n = self.degree();
        let mut q = vec![0i64; n];
        let mut carry = 0i64;
        for i in (0..=n).rev() {
            let v = self.0[i] + carry;
            if i == 0 {
                return (v == 0).then(|| CharPoly::new(q));
            }
            q[i - 1] = v;
            carry = v * r;
        }
        unreachable!()
    }

    /// Integer roots `a ≤ b` of a monic quadratic, decided by an exact
    /// discriminant square test.
    pub fn quadratic_roots(&self) -> Option<(i64, i64)> {
        if self.degree() != 2 || self.0[2] != 1 {
            return None;
        }
        let (p, q) = (self.0[1] as i128, self.0[0] as i128);
        let disc = p * p - 4 * q;
        if disc < 0 {
            return None;
        }
        let s = isqrt(disc);
        if s * s != disc || (s - p) % 2 != 0 {
            return None;
        }
        Some((((-p - s) / 2) as i64, ((-p + s) / 2) as i64))
    }
}

fn isqrt(n: i128) -> i128 {
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 && !(first && i == 0) {
                continue;
            }
            let abs = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            match (abs, i) {
                (_, 0) => write!(f, "{abs}")?,
                (1, _) => write!(f, "{mono}")?,
                _ => write!(f, "{abs}*{mono}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    const Q: Field = Field::Rational;

    #[test]
    fn boolean_lattice() {
        let a = Arrangement3::from_ints(Q, &[(1, 0, 0), (0, 1, 0), (0, 0, 1)]).unwrap();
        let l = intersection_lattice(&a);
        assert_eq!(l.rank_counts(), vec![1, 3, 3, 1]);
        assert_eq!(l.of_dim(0).next().unwrap().mobius, -1);
        assert_eq!(l.char_poly(), CharPoly::from_roots(&[1, 1, 1]));
    }

    #[test]
    fn braid_lattice() {
        let a = Arrangement3::from_ints(
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
        let l = intersection_lattice(&a);
        let triples = l.of_dim(1).filter(|f| f.hyperplanes.len() == 3).count();
        let doubles = l.of_dim(1).filter(|f| f.hyperplanes.len() == 2).count();
        assert_eq!((triples, doubles), (4, 3));
        assert_eq!(l.char_poly(), CharPoly::from_roots(&[1, 2, 3]));
    }

    #[test]
    fn generic_four() {
        let a = Arrangement3::from_ints(Q, &[(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]).unwrap();
        let l = intersection_lattice(&a);
        assert!(l.of_dim(1).all(|f| f.hyperplanes.len() == 2));
        assert_eq!(l.of_dim(0).next().unwrap().mobius, -3);
        let chi = l.char_poly();
        assert_eq!(chi.coeffs(), &[-3, 6, -4, 1]);
        let q = chi.div_linear(1).unwrap();
        assert_eq!(q.coeffs(), &[3, -3, 1]);
        assert_eq!(q.quadratic_roots(), None);
    }

    #[test]
    fn pencil_has_no_origin() {
        let a = Arrangement3::from_ints(Q, &[(1, 0, 0), (0, 1, 0), (1, 1, 0)]).unwrap();
        let chi = char_poly(&a);
        assert_eq!(chi.coeffs(), &[0, 2, -3, 1]);
    }

    #[test]
    fn affine_examples() {
        let one = AffineArrangement2::from_ints(Q, &[(1, 0, 0)]).unwrap();
        assert_eq!(char_poly_affine(&one).coeffs(), &[0, -1, 1]);
        let par = AffineArrangement2::from_ints(Q, &[(1, 0, 0), (1, 0, 1)]).unwrap();
        assert_eq!(char_poly_affine(&par).coeffs(), &[0, -2, 1]);
        let tri = AffineArrangement2::from_ints(Q, &[(1, 0, 0), (0, 1, 0), (1, 1, 0)]).unwrap();
        assert_eq!(char_poly_affine(&tri).coeffs(), &[2, -3, 1]);
    }

    #[test]
    fn poly_display_and_roots() {
        let p = CharPoly::from_roots(&[1, 2, 3]);
        assert_eq!(p.to_string(), "t^3 - 6*t^2 + 11*t - 6");
        assert_eq!(
            CharPoly::from_roots(&[2, 3]).quadratic_roots(),
            Some((2, 3))
        );
        assert_eq!(
            CharPoly::from_roots(&[-1, 4]).quadratic_roots(),
            Some((-1, 4))
        );
        assert_eq!(CharPoly::new(vec![0]).to_string(), "0");
        assert_eq!(p.eval(-1), -24);
        assert!(p.div_linear(4).is_none());
    }
}
