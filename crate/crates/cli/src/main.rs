//! `multiarr`: exponents, lattice scans, shift certificates and freeness
//! verdicts from arrangement documents.

mod report;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use multiarr::arr3::{self, is_free, is_free_at, thm_fc_check, FreenessVerdict};
use multiarr::document::{ArrangementDocument, Parsed};
use multiarr::lattice::{
    delta_table, verify_lemma_one, verify_theorem_limit, verify_theorem_str, LatticeRegion,
};
use multiarr::multiarr2::{basis, exponents, Arrangement2, Multiplicity};
use multiarr::shift::shift_isomorphism_check;
use multiarr::suite::{run_desk_suite, Status};
use multiarr::Error;

use report::{Failure, Input, Report};

#[derive(Parser)]
#[command(
    name = "multiarr",
    version,
    about = "Logarithmic derivations of plane multiarrangements and freeness of 3-arrangements"
)]
struct Cli {
    /// Worker threads for scans (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Emit canonical JSON instead of the human table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exponents, Δ, balancedness and a homogeneous basis of D(A,m).
    Exp {
        /// Arrangement document, or `-` for stdin.
        file: String,
    },
    /// Δ over a box of multiplicities, optionally verifying a lattice law.
    Lattice {
        file: String,
        /// Per-line caps, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        caps: Vec<u32>,
        /// Upper bound on |m|.
        #[arg(long)]
        total: Option<u64>,
        #[arg(long, value_enum)]
        verify: Option<Verify>,
        /// Refuse regions with more points than this.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
    /// Shift-isomorphism certificate for a base multiplicity m0.
    Shift {
        file: String,
        /// Base multiplicity (default: the document's multiplicities).
        #[arg(long, value_delimiter = ',')]
        m0: Option<Vec<u32>>,
    },
    /// Freeness verdict for a central 3-arrangement or the coning of an affine one.
    Free {
        file: String,
        /// Restriction plane (index into the coned arrangement for affine input).
        #[arg(long = "H0")]
        h0: Option<usize>,
    },
    /// Run a verification suite.
    VerifyAll {
        #[arg(long, default_value = "desk")]
        suite: String,
        /// Also check every `*.json` document in this directory.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    One,
    Str,
    Limit,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} workers: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    match run(&cli.command) {
        Ok(report) => {
            report.emit(cli.json, start.elapsed());
            ExitCode::from(report.exit_code())
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_input(file: &str) -> Result<(Input, ArrangementDocument), Failure> {
    let mut bytes = Vec::new();
    let res = if file == "-" {
        std::io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        std::fs::read(file).map(|b| bytes = b)
    };
    res.map_err(|e| Failure::io(format!("{file}: {e}")))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| Failure::io(format!("{file}: not UTF-8: {e}")))?;
    let doc = ArrangementDocument::parse(&text).map_err(|e| Failure::io(format!("{file}: {e}")))?;
    Ok((Input::new(file, &bytes), doc))
}

fn interpret(file: &str, doc: &ArrangementDocument) -> Result<Parsed, Failure> {
    doc.interpret()
        .map_err(|e| Failure::io(format!("{file}: {e}")))
}

fn multi(file: &str, doc: &ArrangementDocument) -> Result<(Arrangement2, Multiplicity), Failure> {
    match interpret(file, doc)? {
        Parsed::Multi(a, m) => Ok((a, m)),
        _ => Err(Failure::usage(format!(
            "{file}: expected a central dim-2 document"
        ))),
    }
}

fn run(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Exp { file } => cmd_exp(file),
        Command::Lattice {
            file,
            caps,
            total,
            verify,
            budget,
        } => cmd_lattice(file, caps, *total, *verify, *budget),
        Command::Shift { file, m0 } => cmd_shift(file, m0.as_deref()),
        Command::Free { file, h0 } => cmd_free(file, *h0),
        Command::VerifyAll { suite, corpus } => cmd_verify_all(suite, corpus.as_ref()),
    }
}

fn char_warning(a: &Arrangement2) -> Option<String> {
    let p = a.field().characteristic();
    (p != 0).then(|| {
        format!("warning: characteristic {p}; the characteristic-zero bounds are not claimed here")
    })
}

fn cmd_exp(file: &str) -> Result<Report, Failure> {
    let (input, doc) = read_input(file)?;
    let (a, m) = multi(file, &doc)?;
    let exp = exponents(&a, &m)?;
    let balanced = m.is_balanced();
    let mut r = Report::new("exp", json!({ "file": file }), input);
    r.line(format!("exp={exp} Δ={} balanced={balanced}", exp.delta()));
    let mut basis_json = Value::Null;
    if m.total() > 0 {
        let (t1, t2) = basis(&a, &m)?;
        r.line(format!("θ1 = {t1}"));
        r.line(format!("θ2 = {t2}"));
        basis_json = json!([t1.to_string(), t2.to_string()]);
    }
    if let Some(w) = char_warning(&a) {
        r.line(w);
        if balanced && exp.delta() + 2 > a.len() as u64 {
            r.check(
                "balanced gap bound Δ ≤ h-2",
                Status::ExpectedViolation,
                format!("Δ={} > h-2={}", exp.delta(), a.len().saturating_sub(2)),
            );
        }
    }
    r.result = json!({
        "arrangement": a.to_string(),
        "field": a.field().to_string(),
        "multiplicity": m,
        "exponents": [exp.d1, exp.d2],
        "delta": exp.delta(),
        "balanced": balanced,
        "basis": basis_json,
    });
    Ok(r)
}

fn cmd_lattice(
    file: &str,
    caps: &[u32],
    total: Option<u64>,
    verify: Option<Verify>,
    budget: u128,
) -> Result<Report, Failure> {
    let (input, doc) = read_input(file)?;
    let (a, _) = multi(file, &doc)?;
    if caps.len() != a.len() {
        return Err(Failure::usage(format!(
            "--caps has {} entries, arrangement has {} lines",
            caps.len(),
            a.len()
        )));
    }
    let region = LatticeRegion::new(caps.to_vec(), total);
    if region.box_size() > budget {
        return Err(Error::RegionTooLarge {
            points: region.box_size(),
            budget,
        }
        .into());
    }
    let args =
        json!({ "file": file, "caps": caps, "total": total, "verify": verify.map(verify_name) });
    let mut r = Report::new("lattice", args, input);
    if let Some(w) = char_warning(&a) {
        r.line(w);
    }
    match verify {
        None => {
            let table = delta_table(&a, &region)?;
            for (m, d) in &table {
                r.line(format!("{m} Δ={d}"));
            }
            let rows: Vec<Value> = table
                .iter()
                .map(|(m, d)| json!({ "m": m, "delta": d }))
                .collect();
            r.result = json!({ "points": rows });
        }
        Some(Verify::One) => {
            let rep = verify_lemma_one(&a, &region)?;
            r.line(format!(
                "points={} adjacent pairs={} violations={} parity violations={}",
                rep.points,
                rep.pairs_checked,
                rep.violations.len(),
                rep.parity_violations.len()
            ));
            for v in &rep.violations {
                r.line(format!(
                    "  {} Δ={} / {} Δ={}",
                    v.m1, v.delta1, v.m2, v.delta2
                ));
            }
            r.check(
                "adjacent Δ differ by one",
                status(rep.passed, rep.expected_violation),
                String::new(),
            );
            r.result = serde_json::to_value(&rep).expect("serializable");
        }
        Some(Verify::Limit) => {
            let rep = verify_theorem_limit(&a, &region)?;
            r.line(format!(
                "points={} balanced={} bound={} violations={} maximizers={}",
                rep.points,
                rep.balanced_checked,
                rep.bound,
                rep.violations.len(),
                rep.maximizers.len()
            ));
            for (m, d) in &rep.violations {
                r.line(format!("  violation {m} Δ={d}"));
            }
            r.check(
                "balanced gap bound Δ ≤ h-2",
                status(rep.passed, rep.expected_violation),
                String::new(),
            );
            r.result = serde_json::to_value(&rep).expect("serializable");
        }
        Some(Verify::Str) => {
            let rep = verify_theorem_str(&a, &region)?;
            r.line(format!(
                "components={} verified={} clipped={} failed={}",
                rep.components.len(),
                rep.verified,
                rep.clipped,
                rep.failed
            ));
            for c in &rep.components {
                r.line(format!(
                    "  peak {} Δ={} size={} {:?}",
                    c.peak, c.peak_delta, c.size, c.status
                ));
            }
            r.check(
                "finite components are peak balls",
                status(rep.passed, rep.expected_violation),
                String::new(),
            );
            r.result = serde_json::to_value(&rep).expect("serializable");
        }
    }
    Ok(r)
}

fn verify_name(v: Verify) -> &'static str {
    match v {
        Verify::One => "one",
        Verify::Str => "str",
        Verify::Limit => "limit",
    }
}

fn status(passed: bool, expected: bool) -> Status {
    match (passed, expected) {
        (true, _) => Status::Pass,
        (false, true) => Status::ExpectedViolation,
        (false, false) => Status::Fail,
    }
}

fn cmd_shift(file: &str, m0: Option<&[u32]>) -> Result<Report, Failure> {
    let (input, doc) = read_input(file)?;
    let (a, m_doc) = multi(file, &doc)?;
    let m0 = m0.map(|v| Multiplicity::new(v.to_vec())).unwrap_or(m_doc);
    let cert = shift_isomorphism_check(&a, &m0)?;
    let mut r = Report::new("shift", json!({ "file": file, "m0": m0 }), input);
    r.line(format!(
        "m0={} θ0 = {} ({:?}, {} shifts)",
        cert.m0,
        cert.theta0,
        cert.hypothesis,
        cert.checked_shifts.len()
    ));
    for row in &cert.checked_shifts {
        r.line(format!(
            "  m={} target={} {} saito={}",
            row.m,
            row.target,
            if row.pass { "pass" } else { "FAIL" },
            row.saito_scalar.as_deref().unwrap_or("-")
        ));
    }
    r.check(
        "shift isomorphism",
        status(cert.passed, false),
        String::new(),
    );
    r.result = serde_json::to_value(&cert).expect("serializable");
    Ok(r)
}

fn verdict_line(v: &FreenessVerdict) -> String {
    let comb = format!("combinatorial={}({})", v.combinatorial, v.route.tag());
    match v.exponents {
        Some([a, b, c]) if v.free => format!("FREE exp=({a},{b},{c}) coker=0 {comb}"),
        _ => format!("NOT FREE coker={} {comb}", v.coker_dim),
    }
}

fn cmd_free(file: &str, h0: Option<usize>) -> Result<Report, Failure> {
    let (input, doc) = read_input(file)?;
    let mut r = Report::new("free", json!({ "file": file, "H0": h0 }), input);
    let (a, h0) = match interpret(file, &doc)? {
        Parsed::Central3(a) => (a, h0),
        Parsed::Affine2(aff) => {
            let (c, inf) = arr3::cone(&aff)?;
            let fc = thm_fc_check(&aff)?;
            r.line(format!(
                "coned {} lines; χ(Ā,t) = {}; fc applies={}{}",
                aff.len(),
                fc.chi_bar,
                fc.applies,
                fc.reason
                    .as_deref()
                    .map(|s| format!(" ({s})"))
                    .unwrap_or_default()
            ));
            (c, Some(h0.unwrap_or(inf)))
        }
        Parsed::Multi(..) => {
            return Err(Failure::usage(format!(
                "{file}: expected a dim-3 central or dim-2 affine document"
            )))
        }
    };
    let v = match h0 {
        Some(i) => is_free_at(&a, i)?,
        None => is_free(&a)?,
    };
    r.lines.insert(0, verdict_line(&v));
    r.line(format!("χ(A,t) = {}", v.char_poly));
    r.line(format!(
        "H0 = {} [{}]; Ziegler restriction {{{}}} m0={} exp=({},{})",
        v.h0,
        v.h0_form,
        v.ziegler_lines.join(", "),
        v.ziegler_multiplicity,
        v.ziegler_exponents[0],
        v.ziegler_exponents[1]
    ));
    r.result = serde_json::to_value(&v).expect("serializable");
    Ok(r)
}

fn cmd_verify_all(suite: &str, corpus: Option<&PathBuf>) -> Result<Report, Failure> {
    if suite != "desk" {
        return Err(Failure::usage(format!(
            "unknown suite {suite:?} (available: desk)"
        )));
    }
    let mut docs = Vec::new();
    if let Some(dir) = corpus {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for p in paths {
            let name = p.display().to_string();
            let (_, doc) = read_input(&name)?;
            docs.push((name, doc));
        }
    }
    let args = json!({ "suite": suite, "corpus": corpus.map(|p| p.display().to_string()) });
    let mut r = Report::new("verify-all", args, Input::none());
    for (name, doc) in &docs {
        let (st, detail) = report::check_document(doc)?;
        r.check(&format!("document {name}"), st, detail);
    }
    let suite = run_desk_suite();
    for c in &suite.criteria {
        r.check(
            &format!("[{}] {}", c.id, c.name),
            c.status,
            c.detail.clone(),
        );
    }
    r.result = serde_json::to_value(&suite).expect("serializable");
    Ok(r)
}
