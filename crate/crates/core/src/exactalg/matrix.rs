use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a single exact field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    /// Builds a matrix from rows. Field agreement is not checked here;
    /// [`Matrix::kernel_basis`] and [`Matrix::rank`] reject mixed input.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            field,
            rows: n,
            cols,
            data,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Appends the rows of `other` (same column count and field).
    pub fn append_rows(&mut self, other: &Matrix) -> Result<()> {
        if other.cols != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        if other.field != self.field {
            return Err(mixed(self.field, other.field));
        }
        self.data.extend(other.data.iter().cloned());
        self.rows += other.rows;
        Ok(())
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    fn check_field(&self) -> Result<()> {
        match self.data.iter().find(|s| s.field() != self.field) {
            Some(s) => Err(mixed(self.field, s.field())),
            None => Ok(()),
        }
    }

    pub fn rank(&self) -> Result<usize> {
        self.check_field()?;
        Ok(self.rref().1.len())
    }

    /// Basis of the right null space `{v : M v = 0}`.
    ///
    /// The basis is returned in reduced row-echelon form (as rows): each
    /// vector's first nonzero entry is 1 and sits in a column where every
    /// other basis vector vanishes. This is a function of the null space
    /// alone, so equal kernels give identical output.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<Scalar>>> {
        self.check_field()?;
        let (reduced, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut raw = Vec::new();
        for free in (0..self.cols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -reduced.get(r, free);
            }
            raw.push(v);
        }
        if raw.is_empty() {
            return Ok(raw);
        }
        let k = Matrix::from_rows(self.field, self.cols, raw)?;
        let (canon, piv) = k.rref();
        Ok((0..piv.len()).map(|r| canon.row(r).to_vec()).collect())
    }

    /// Reduced row-echelon form and pivot columns. Pivots are the first
    /// nonzero entry in column order.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        match self.field {
            Field::Rational => self.rref_rational(),
            Field::Prime(p) => self.rref_mod(p),
        }
    }

    fn rref_rational(&self) -> (Matrix, Vec<usize>) {
        // Clear denominators row by row, then eliminate fraction-free.
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| {
                let row: Vec<&BigRational> = self
                    .row(r)
                    .iter()
                    .map(|s| s.as_rational().expect("checked field"))
                    .collect();
                let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                row.iter().map(|q| (q.numer() * &l) / q.denom()).collect()
            })
            .collect();
        let pivots = bareiss_echelon(&mut m, self.cols);

        let mut rows: Vec<Vec<BigRational>> = m
            .into_iter()
            .take(pivots.len())
            .map(|row| row.into_iter().map(BigRational::from_integer).collect())
            .collect();
        for (r, &c) in pivots.iter().enumerate().rev() {
            let inv = rows[r][c].recip();
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = rows[r].clone();
            for upper in rows.iter_mut().take(r) {
                let f = upper[c].clone();
                if f.is_zero() {
                    continue;
                }
                for (x, y) in upper.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        let rows = rows
            .into_iter()
            .map(|row| row.into_iter().map(Scalar::Rational).collect())
            .collect();
        (
            Matrix::from_rows(Field::Rational, self.cols, rows).expect("shape preserved"),
            pivots,
        )
    }

    fn rref_mod(&self, p: u64) -> (Matrix, Vec<usize>) {
        let mut m: Vec<Vec<Scalar>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == m.len() {
                break;
            }
            let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, pr);
            let inv = m[row][col].inv().expect("nonzero pivot");
            for x in m[row].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = m[row].clone();
            for (r, other) in m.iter_mut().enumerate() {
                if r == row || other[col].is_zero() {
                    continue;
                }
                let f = other[col].clone();
                for (x, y) in other.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
            pivots.push(col);
            row += 1;
        }
        m.truncate(pivots.len());
        (
            Matrix::from_rows(Field::Prime(p), self.cols, m).expect("shape preserved"),
            pivots,
        )
    }
}

fn mixed(expected: Field, found: Field) -> Error {
    Error::MixedField {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// Bareiss fraction-free forward elimination in place. Every division is
/// exact because each entry is a minor of the original matrix. Returns the
/// pivot columns; rows past `pivots.len()` are zero afterwards.
fn bareiss_echelon(m: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let (top, rest) = m.split_at_mut(row + 1);
        let pivot_row = &top[row];
        let pv = pivot_row[col].clone();
        for other in rest.iter_mut() {
            let lead = std::mem::take(&mut other[col]);
            for j in col + 1..cols {
                let v = &pv * &other[j] - &lead * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                other[j] = v / &prev;
            }
        }
        prev = pv;
        pivots.push(col);
        row += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            Field::Rational,
            cols,
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| Scalar::from_i64(Field::Rational, x))
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    fn ints(v: &[Scalar]) -> Vec<i64> {
        v.iter()
            .map(|s| s.to_string().parse::<i64>().unwrap())
            .collect()
    }

    #[test]
    fn projection_kernel() {
        let k = qm(&[&[1, 0]]).kernel_basis().unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(ints(&k[0]), vec![0, 1]);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(qm(&[&[1, 0], &[0, 1]]).kernel_basis().unwrap().is_empty());
    }

    #[test]
    fn all_ones_row() {
        let m = qm(&[&[1, 1, 1]]);
        let k = m.kernel_basis().unwrap();
        assert_eq!(k.len(), 2);
        assert_eq!(ints(&k[0]), vec![1, 0, -1]);
        assert_eq!(ints(&k[1]), vec![0, 1, -1]);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn empty_row_set_gives_standard_basis() {
        let m = Matrix::zeros(Field::Rational, 0, 3);
        let k = m.kernel_basis().unwrap();
        assert_eq!(k.len(), 3);
        assert_eq!(ints(&k[2]), vec![0, 0, 1]);
    }

    #[test]
    fn bareiss_handles_skipped_columns() {
        let m = qm(&[&[0, 2, 4, 6], &[0, 1, 2, 5], &[0, 3, 6, 1]]);
        assert_eq!(m.rank().unwrap(), 2);
        let k = m.kernel_basis().unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn mixed_field_rejected() {
        let m = Matrix::from_rows(
            Field::Rational,
            2,
            vec![vec![Field::Rational.one(), Field::Prime(3).one()]],
        )
        .unwrap();
        assert!(matches!(m.kernel_basis(), Err(Error::MixedField { .. })));
    }

    #[test]
    fn prime_field_rank_drops() {
        let f = Field::Prime(2);
        let m = Matrix::from_rows(
            f,
            2,
            vec![
                vec![f.one(), f.one()],
                vec![Scalar::from_i64(f, 3), Scalar::from_i64(f, 1)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank().unwrap(), 1);
    }
}
