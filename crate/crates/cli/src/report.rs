use std::io::Write;
use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use multiarr::arr3::{self, chamber_count, char_poly, char_poly_affine, is_free_all, CharPoly};
use multiarr::document::{ArrangementDocument, Parsed};
use multiarr::exactalg::Field;
use multiarr::multiarr2::exponents;
use multiarr::suite::Status;
use multiarr::Error;

/// A failed run: message for stderr plus the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Failure { code: 1, message }
    }

    pub fn io(message: String) -> Self {
        Failure { code: 3, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TheoremViolation(_) | Error::Internal(_) => 2,
            Error::Parse(_) => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub struct Input {
    path: Option<String>,
    sha256: Option<String>,
}

impl Input {
    pub fn new(path: &str, bytes: &[u8]) -> Self {
        Input {
            path: Some(path.to_string()),
            sha256: Some(hex::encode(Sha256::digest(bytes))),
        }
    }

    pub fn none() -> Self {
        Input {
            path: None,
            sha256: None,
        }
    }
}

struct Check {
    name: String,
    status: Status,
    detail: String,
}

pub struct Report {
    command: &'static str,
    args: Value,
    input: Input,
    pub lines: Vec<String>,
    checks: Vec<Check>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str, args: Value, input: Input) -> Self {
        Report {
            command,
            args,
            input,
            lines: Vec::new(),
            checks: Vec::new(),
            result: Value::Null,
        }
    }

    pub fn line(&mut self, s: String) {
        self.lines.push(s);
    }

    pub fn check(&mut self, name: &str, status: Status, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            status,
            detail,
        });
    }

    /// 2 when any check failed, 0 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "status": c.status, "detail": c.detail }))
            .collect();
        canonical(json!({
            "command": self.command,
            "args": self.args,
            "input": { "path": self.input.path, "sha256": self.input.sha256 },
            "checks": checks,
            "result": self.result,
            "version": env!("CARGO_PKG_VERSION"),
        }))
    }

    /// Writes to stdout; a closed pipe ends output silently.
    pub fn emit(&self, as_json: bool, elapsed: Duration) {
        let _ = self.write(&mut std::io::stdout().lock(), as_json, elapsed);
    }

    fn write(&self, out: &mut impl Write, as_json: bool, elapsed: Duration) -> std::io::Result<()> {
        if as_json {
            let text = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
            return writeln!(out, "{text}");
        }
        for l in &self.lines {
            writeln!(out, "{l}")?;
        }
        for c in &self.checks {
            if c.detail.is_empty() {
                writeln!(out, "{:<18} {}", c.status.label(), c.name)?;
            } else {
                writeln!(out, "{:<18} {}: {}", c.status.label(), c.name, c.detail)?;
            }
        }
        if let Some(d) = &self.input.sha256 {
            writeln!(out, "input sha256 {d}")?;
        }
        writeln!(out, "elapsed {} ms", elapsed.as_millis())
    }
}

/// Numbers become decimal strings; object keys are already sorted.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        Value::Object(o) => Value::Object(
            o.into_iter()
                .map(|(k, v)| (k, canonical(v)))
                .collect::<Map<_, _>>(),
        ),
        other => other,
    }
}

/// Consistency check of one corpus document.
pub fn check_document(doc: &ArrangementDocument) -> Result<(Status, String), Failure> {
    let parsed = doc.interpret().map_err(|e| Failure::io(e.to_string()))?;
    Ok(match parsed {
        Parsed::Multi(a, m) => {
            let e = exponents(&a, &m)?;
            let bound = a.len().saturating_sub(2) as u64;
            let detail = format!("exp={e} Δ={} balanced={}", e.delta(), m.is_balanced());
            if m.is_balanced() && a.len() > 2 && e.delta() > bound {
                if a.field().characteristic() != 0 {
                    (Status::ExpectedViolation, detail)
                } else {
                    (Status::Fail, detail)
                }
            } else {
                (Status::Pass, detail)
            }
        }
        Parsed::Central3(a) => {
            let all = is_free_all(&a)?;
            let agree = all.windows(2).all(|w| w[0].free == w[1].free);
            let decone_ok = (0..a.len()).try_fold(true, |ok, h0| -> Result<bool, Failure> {
                let d = arr3::decone(&a, h0)?;
                Ok(ok && CharPoly::from_roots(&[1]).mul(&char_poly_affine(&d)) == char_poly(&a))
            })?;
            let detail = format!(
                "free={} over all {} choices of H0; coning identity={decone_ok}",
                all.first().is_some_and(|v| v.free),
                all.len()
            );
            let st = if agree && decone_ok {
                Status::Pass
            } else {
                Status::Fail
            };
            (st, detail)
        }
        Parsed::Affine2(a) => {
            let (c, _) = arr3::cone(&a)?;
            let ok = char_poly(&c) == CharPoly::from_roots(&[1]).mul(&char_poly_affine(&a));
            let mut detail = format!("χ = {} coning identity={ok}", char_poly_affine(&a));
            if a.field() == Field::Rational {
                let ch = chamber_count(&a)?;
                detail.push_str(&format!(" chambers={}", ch.zaslavsky));
            }
            (if ok { Status::Pass } else { Status::Fail }, detail)
        }
    })
}
