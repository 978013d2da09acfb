//! Independent oracles, written without the library's linear algebra.
#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use multiarr::arr3::{AffineArrangement2, Arrangement3};
use multiarr::multiarr2::Arrangement2;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rank by plain Gaussian elimination over ℚ.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                for j in c..cols {
                    let v = &rows[r][j] * &f;
                    rows[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut c = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn poly_pow(a: &[BigRational], e: usize) -> Vec<BigRational> {
    (0..e).fold(vec![BigRational::one()], |acc, _| poly_mul(&acc, a))
}

fn lines_of(a: &Arrangement2) -> Vec<(BigRational, BigRational)> {
    a.forms()
        .iter()
        .map(|l| {
            (
                l.a().as_rational().unwrap().clone(),
                l.b().as_rational().unwrap().clone(),
            )
        })
        .collect()
}

/// `dim D(A,m)_d` over ℚ: `α^k | p` is tested by substituting
/// `x = s u + t w` with `α(u) = 0`, `α(w) = 1` and asking the coefficients
/// of `t^0 .. t^{k-1}` to vanish.
pub fn oracle_dim(a: &Arrangement2, m: &[u32], d: usize) -> usize {
    let n = 2 * (d + 1);
    let mut rows = Vec::new();
    for ((a1, b1), &k) in lines_of(a).iter().zip(m) {
        let (u1, u2) = (b1.clone(), -a1.clone());
        let (w1, w2) = if !a1.is_zero() {
            (BigRational::one() / a1, BigRational::zero())
        } else {
            (BigRational::zero(), BigRational::one() / b1)
        };
        // coefficient of t^j in x1^i x2^(d-i) after substitution (s = 1)
        let expand: Vec<Vec<BigRational>> = (0..=d)
            .map(|i| {
                poly_mul(
                    &poly_pow(&[u1.clone(), w1.clone()], i),
                    &poly_pow(&[u2.clone(), w2.clone()], d - i),
                )
            })
            .collect();
        for j in 0..(k as usize).min(d + 1) {
            let mut row = vec![BigRational::zero(); n];
            for i in 0..=d {
                row[i] = a1 * &expand[i][j];
                row[d + 1 + i] = b1 * &expand[i][j];
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return n;
    }
    n - rank(rows)
}

/// `(d1, d2)` with `d1` the least degree carrying a derivation.
pub fn oracle_exponents(a: &Arrangement2, m: &[u32]) -> (u64, u64) {
    let total: u64 = m.iter().map(|&x| x as u64).sum();
    let d1 = (0..=total)
        .find(|&d| oracle_dim(a, m, d as usize) > 0)
        .expect("some degree carries a derivation");
    (d1, total - d1)
}

fn rational_rows(rows: &[[BigRational; 3]]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

/// `χ(A,t) = Σ_B (-1)^{|B|} t^{3 - rank B}`, low coefficient first.
pub fn whitney_central(a: &Arrangement3) -> Vec<i64> {
    let forms: Vec<[BigRational; 3]> = a
        .forms()
        .iter()
        .map(|f| f.coeffs().clone().map(|c| c.as_rational().unwrap().clone()))
        .collect();
    let mut chi = vec![0i64; 4];
    for mask in 0u32..(1 << forms.len()) {
        let sub: Vec<[BigRational; 3]> = (0..forms.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| forms[i].clone())
            .collect();
        let r = if sub.is_empty() {
            0
        } else {
            rank(rational_rows(&sub))
        };
        let sign = if sub.len().is_multiple_of(2) { 1 } else { -1 };
        chi[3 - r] += sign;
    }
    chi
}

/// Affine version: only subsets with nonempty intersection contribute.
pub fn whitney_affine(a: &AffineArrangement2) -> Vec<i64> {
    let lines: Vec<[BigRational; 3]> = a
        .lines()
        .iter()
        .map(|l| l.coeffs().clone().map(|c| c.as_rational().unwrap().clone()))
        .collect();
    let mut chi = vec![0i64; 3];
    for mask in 0u32..(1 << lines.len()) {
        let sub: Vec<&[BigRational; 3]> = (0..lines.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &lines[i])
            .collect();
        let (r, consistent) = if sub.is_empty() {
            (0, true)
        } else {
            let coef: Vec<Vec<BigRational>> = sub.iter().map(|l| l[..2].to_vec()).collect();
            let aug: Vec<Vec<BigRational>> = sub.iter().map(|l| l.to_vec()).collect();
            let r = rank(coef);
            (r, r == rank(aug))
        };
        if consistent {
            chi[2 - r] += if sub.len().is_multiple_of(2) { 1 } else { -1 };
        }
    }
    chi
}

/// Trims trailing zeros so the vector compares equal to `CharPoly::coeffs`.
pub fn trimmed(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}
