use serde::{Deserialize, Serialize};

use super::intersection::{char_poly_affine, intersection_points};
use super::AffineArrangement2;
use crate::error::{Error, Result};
use crate::exactalg::Field;

/// Above this many lines only the Zaslavsky count is computed.
pub const EULER_ORACLE_MAX_LINES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberCount {
    /// `|χ(Ā,-1)| = 1 + k + c2`.
    pub zaslavsky: u64,
    /// Independent count from Euler's formula, when run.
    pub euler: Option<u64>,
}

/// Number of connected components of the complement in ℝ².
pub fn chamber_count(a: &AffineArrangement2) -> Result<ChamberCount> {
    if a.field() != Field::Rational {
        return Err(Error::NotRational(format!(
            "chambers are defined over ℝ; arrangement is over {}",
            a.field()
        )));
    }
    let z = char_poly_affine(a).eval(-1);
    let zaslavsky =
        u64::try_from(z).map_err(|_| Error::Internal(format!("χ(Ā,-1) = {z} is negative")))?;
    let euler = if a.len() <= EULER_ORACLE_MAX_LINES {
        let e = euler_chamber_count(a)?;
        if e != zaslavsky {
            return Err(Error::Internal(format!(
                "chamber counts disagree: Zaslavsky {zaslavsky}, Euler {e}"
            )));
        }
        Some(e)
    } else {
        None
    };
    Ok(ChamberCount { zaslavsky, euler })
}

/// Faces of the planar graph on the one-point compactification: vertices
/// are the intersection points plus `∞`, and a line through `p` points is
/// cut into `p + 1` edges.
pub fn euler_chamber_count(a: &AffineArrangement2) -> Result<u64> {
    if a.field() != Field::Rational {
        return Err(Error::NotRational(a.field().to_string()));
    }
    if a.is_empty() {
        return Ok(1);
    }
    let points = intersection_points(a);
    let mut on_line = vec![0u64; a.len()];
    for (_, through) in &points {
        for &l in through {
            on_line[l] += 1;
        }
    }
    let v = points.len() as u64 + 1;
    let e: u64 = on_line.iter().map(|p| p + 1).sum();
    Ok(2 + e - v)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn small_counts() {
        let one = AffineArrangement2::from_ints(Q, &[(1, 0, 0)]).unwrap();
        assert_eq!(chamber_count(&one).unwrap().zaslavsky, 2);
        let cross = AffineArrangement2::from_ints(Q, &[(1, 0, 0), (0, 1, 0)]).unwrap();
        assert_eq!(chamber_count(&cross).unwrap().euler, Some(4));
        let parallel =
            AffineArrangement2::from_ints(Q, &[(1, 0, 0), (1, 0, 1), (1, 0, 2)]).unwrap();
        assert_eq!(chamber_count(&parallel).unwrap().zaslavsky, 4);
        let empty = AffineArrangement2::new(Q, vec![]).unwrap();
        assert_eq!(chamber_count(&empty).unwrap().zaslavsky, 1);
    }

    #[test]
    fn prime_field_rejected() {
        let f = Field::prime(5).unwrap();
        let a = AffineArrangement2::from_ints(f, &[(1, 0, 0)]).unwrap();
        assert!(matches!(chamber_count(&a), Err(Error::NotRational(_))));
    }
}
