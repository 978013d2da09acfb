//! JSON arrangement documents.
//!
//! ```json
//! {"central": true, "dim": 2, "field": "Q", "name": "A2",
//!  "hyperplanes": [{"coeffs": ["1", "0"], "mult": 2}, ...]}
//! ```
//!
//! `field` is `"Q"` or `{"p": 5}`. Coefficients are exact decimal strings
//! (`"3"`, `"-7/2"`). An affine document (`central: false`, `dim: 2`) lists
//! `a x + b y = c` as `[a, b, c]`. Multiplicities are only allowed on
//! central `dim: 2` documents and default to 1.

use serde::{Deserialize, Serialize};

use crate::arr3::{AffineArrangement2, AffineLine, Arrangement3, LinearForm3};
use crate::error::{Error, Result};
use crate::exactalg::{parse_rational, Field, LinearForm2, Scalar};
use crate::multiarr2::{Arrangement2, Multiplicity};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime { p: u64 },
}

impl FieldSpec {
    pub fn from_field(f: Field) -> Self {
        match f {
            Field::Rational => FieldSpec::Named("Q".into()),
            Field::Prime(p) => FieldSpec::Prime { p },
        }
    }

    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldSpec::Named(s) if s == "Q" => Ok(Field::Rational),
            FieldSpec::Named(s) => Err(Error::Parse(format!(
                "unknown field {s:?}, expected \"Q\" or {{\"p\": prime}}"
            ))),
            FieldSpec::Prime { p } => Field::prime(*p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneEntry {
    pub coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementDocument {
    pub field: FieldSpec,
    pub dim: usize,
    pub central: bool,
    pub hyperplanes: Vec<HyperplaneEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// What a document describes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Multi(Arrangement2, Multiplicity),
    Central3(Arrangement3),
    Affine2(AffineArrangement2),
}

impl ArrangementDocument {
    /// Parses and validates a document; syntax errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: ArrangementDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.interpret()?;
        Ok(doc)
    }

    /// Canonical JSON: sorted keys, two-space indentation, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("documents serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn field(&self) -> Result<Field> {
        self.field.to_field()
    }

    pub fn interpret(&self) -> Result<Parsed> {
        let field = self.field()?;
        let width = match (self.dim, self.central) {
            (2, true) => 2,
            (3, true) => 3,
            (2, false) => 3,
            (d, c) => {
                return Err(Error::Parse(format!(
                    "unsupported document: dim {d}, central {c}"
                )))
            }
        };
        let mut rows = Vec::with_capacity(self.hyperplanes.len());
        for (i, h) in self.hyperplanes.iter().enumerate() {
            if h.coeffs.len() != width {
                return Err(Error::Parse(format!(
                    "hyperplane {i}: expected {width} coefficients, found {}",
                    h.coeffs.len()
                )));
            }
            if h.mult.is_some() && !(self.dim == 2 && self.central) {
                return Err(Error::Parse(format!(
                    "hyperplane {i}: multiplicities are only allowed on central dim-2 documents"
                )));
            }
            let row = h
                .coeffs
                .iter()
                .map(|c| {
                    parse_rational(c)
                        .and_then(|q| Scalar::from_rational(field, &q))
                        .map_err(|e| Error::Parse(format!("hyperplane {i}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let ctx = |i: usize| move |e: Error| Error::Parse(format!("hyperplane {i}: {e}"));
        match (self.dim, self.central) {
            (2, true) => {
                let forms = rows
                    .into_iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let [a, b]: [Scalar; 2] = r.try_into().unwrap();
                        LinearForm2::new(a, b).map_err(ctx(i))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let m = self
                    .hyperplanes
                    .iter()
                    .map(|h| h.mult.unwrap_or(1))
                    .collect();
                Ok(Parsed::Multi(
                    Arrangement2::new(field, forms)?,
                    Multiplicity::new(m),
                ))
            }
            (3, true) => {
                let forms = rows
                    .into_iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let c: [Scalar; 3] = r.try_into().unwrap();
                        if c.iter().all(Scalar::is_zero) {
                            return Err(ctx(i)(Error::ZeroForm));
                        }
                        LinearForm3::new(c).map_err(ctx(i))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Parsed::Central3(Arrangement3::new(field, forms)?))
            }
            _ => {
                let lines = rows
                    .into_iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let [a, b, c]: [Scalar; 3] = r.try_into().unwrap();
                        AffineLine::new(a, b, c).map_err(ctx(i))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Parsed::Affine2(AffineArrangement2::new(field, lines)?))
            }
        }
    }

    pub fn from_multi(name: Option<&str>, a: &Arrangement2, m: &Multiplicity) -> Self {
        let hyperplanes = a
            .forms()
            .iter()
            .zip(m.values())
            .map(|(l, &k)| HyperplaneEntry {
                coeffs: vec![l.a().to_exact_string(), l.b().to_exact_string()],
                mult: Some(k),
            })
            .collect();
        ArrangementDocument {
            field: FieldSpec::from_field(a.field()),
            dim: 2,
            central: true,
            hyperplanes,
            name: name.map(String::from),
        }
    }

    pub fn from_central3(name: Option<&str>, a: &Arrangement3) -> Self {
        let hyperplanes = a
            .forms()
            .iter()
            .map(|f| HyperplaneEntry {
                coeffs: f.coeffs().iter().map(Scalar::to_exact_string).collect(),
                mult: None,
            })
            .collect();
        ArrangementDocument {
            field: FieldSpec::from_field(a.field()),
            dim: 3,
            central: true,
            hyperplanes,
            name: name.map(String::from),
        }
    }

    pub fn from_affine2(name: Option<&str>, a: &AffineArrangement2) -> Self {
        let hyperplanes = a
            .lines()
            .iter()
            .map(|l| HyperplaneEntry {
                coeffs: l.coeffs().iter().map(Scalar::to_exact_string).collect(),
                mult: None,
            })
            .collect();
        ArrangementDocument {
            field: FieldSpec::from_field(a.field()),
            dim: 2,
            central: false,
            hyperplanes,
            name: name.map(String::from),
        }
    }
}
