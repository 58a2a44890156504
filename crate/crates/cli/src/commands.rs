//! Implementations of the CLI subcommands, returning both a text rendering
//! and a JSON value so the binary can pick per the `--json` flag.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::json;

use g2calc::exterior::Form;
use g2calc::g2::{self, Classification, G2Context, Witness};
use g2calc::polyring::Polynomial;
use g2calc::verify;
use g2calc::{MsympStructure, Rational};

use crate::value::{Elaborator, Value};
use crate::CliError;

pub struct CommandOutput {
    pub text: String,
    pub json: serde_json::Value,
}

pub fn cmd_eval(dim: usize, src: &str) -> Result<CommandOutput, CliError> {
    let el = Elaborator::new(dim)?;
    let v = el.eval_str(src)?;
    Ok(CommandOutput {
        text: v.render(),
        json: json!({
            "kind": v.kind(),
            "grade": v.grade(),
            "dim": dim,
            "value": v.render(),
        }),
    })
}

pub fn cmd_classify(
    dim: usize,
    form_src: Option<&str>,
    multivector_src: Option<&str>,
) -> Result<CommandOutput, CliError> {
    if dim != 7 {
        return Err(CliError::Usage(
            "classification runs on the standard dimension-7 structures; drop --dim or set it to 7"
                .to_string(),
        ));
    }
    let el = Elaborator::new(dim)?;
    let ctx = G2Context::standard();
    let value = match (form_src, multivector_src) {
        (Some(s), None) | (None, Some(s)) => el.eval_str(s)?,
        _ => {
            return Err(CliError::Usage(
                "pass exactly one of --form or --multivector".to_string(),
            ))
        }
    };

    // run whichever classifiers admit the object's grade
    let (roc, coroc, is_mv) = match (&value, form_src.is_some()) {
        (Value::Form(_) | Value::Scalar(_), true) => {
            let f = match &value {
                Value::Form(f) => f.clone(),
                Value::Scalar(p) => Form::scalar(7, p.clone()),
                _ => unreachable!(),
            };
            let roc = (f.grade() <= 1)
                .then(|| ctx.classify_rochesterian_form(&f))
                .transpose()?;
            let coroc = (f.grade() <= 2)
                .then(|| ctx.classify_corochesterian_form(&f))
                .transpose()?;
            (roc, coroc, false)
        }
        (Value::MultiVector(q), false) => {
            let roc = (1..=2)
                .contains(&q.grade())
                .then(|| ctx.classify_rochesterian_multivector(q))
                .transpose()?;
            let coroc = (1..=3)
                .contains(&q.grade())
                .then(|| ctx.classify_corochesterian_multivector(q))
                .transpose()?;
            (roc, coroc, true)
        }
        (v, true) => {
            return Err(CliError::Usage(format!(
                "--form expects a form expression, found a {}",
                v.kind()
            )))
        }
        (v, false) => {
            return Err(CliError::Usage(format!(
                "--multivector expects a multivector expression, found a {}",
                v.kind()
            )))
        }
    };
    if roc.is_none() && coroc.is_none() {
        return Err(CliError::Usage(format!(
            "grade {} admits neither classification",
            value.grade()
        )));
    }

    let witness_of = |c: &Classification| c.witness.as_ref().map(Witness::to_string);
    let mut parts = Vec::new();
    if is_mv {
        if let Some(r) = &roc {
            parts.push(format!("g2: {}", r.closed_contraction.unwrap_or(false)));
        }
        if let Some(c) = &coroc {
            parts.push(format!("cog2: {}", c.closed_contraction.unwrap_or(false)));
        }
    }
    if let Some(r) = &roc {
        parts.push(format!("rochesterian: {}", r.member));
    }
    if let Some(c) = &coroc {
        parts.push(format!("corochesterian: {}", c.member));
    }
    let roc_witness = roc.as_ref().filter(|r| r.member).and_then(witness_of);
    let coroc_witness = coroc.as_ref().filter(|c| c.member).and_then(witness_of);
    let (witness, cowitness) = match (roc_witness, coroc_witness) {
        (Some(w), Some(v)) => (Some(w), Some(v)),
        (Some(w), None) => (Some(w), None),
        (None, Some(v)) => (Some(v), None),
        (None, None) => (None, None),
    };
    if let Some(w) = &witness {
        parts.push(format!("witness {w}"));
    }
    if let Some(w) = &cowitness {
        parts.push(format!("cowitness {w}"));
    }

    let object = value.render();
    let mut text = format!("object: {object}\n");
    text.push_str(&parts.join(", "));
    let mut map = serde_json::Map::new();
    map.insert("object".into(), json!(object));
    if is_mv {
        if let Some(r) = &roc {
            map.insert("g2".into(), json!(r.closed_contraction));
        }
        if let Some(c) = &coroc {
            map.insert("cog2".into(), json!(c.closed_contraction));
        }
    }
    if let Some(r) = &roc {
        map.insert("rochesterian".into(), json!(r.member));
    }
    if let Some(c) = &coroc {
        map.insert("corochesterian".into(), json!(c.member));
    }
    map.insert("witness".into(), json!(witness));
    if cowitness.is_some() {
        map.insert("cowitness".into(), json!(cowitness));
    }
    Ok(CommandOutput {
        text,
        json: serde_json::Value::Object(map),
    })
}

/// Builds the structure named by `--omega`: a builtin name or a JSON file of
/// multi-index/rational pairs.
pub fn load_structure(dim: usize, spec: &str) -> Result<MsympStructure, CliError> {
    let omega = match spec {
        "phi0" => {
            require_dim7(dim, spec)?;
            g2::phi0()
        }
        "starphi0" => {
            require_dim7(dim, spec)?;
            g2::star_phi0()
        }
        path => load_form_file(dim, path)?,
    };
    Ok(MsympStructure::build(omega)?)
}

fn require_dim7(dim: usize, name: &str) -> Result<(), CliError> {
    if dim != 7 {
        return Err(CliError::Usage(format!(
            "'{name}' lives in dimension 7, current dimension is {dim}"
        )));
    }
    Ok(())
}

/// JSON file format: an object whose keys are digit strings of axis labels
/// and whose values are rational strings, e.g. `{"145": "-3/2", "23": "1"}`.
fn load_form_file(dim: usize, path: &str) -> Result<Form, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read '{path}': {e}")))?;
    let parsed: serde_json::Value = serde_json::from_str(&raw)
        .map_err(|e| CliError::Io(format!("'{path}' is not valid JSON: {e}")))?;
    let Some(map) = parsed.as_object() else {
        return Err(CliError::Io(format!(
            "'{path}' must contain a JSON object of multi-index/coefficient pairs"
        )));
    };
    let mut grade = None;
    let mut omega: Option<Form> = None;
    for (key, value) in map {
        if key.is_empty() || !key.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CliError::Io(format!("bad multi-index key '{key}'")));
        }
        let axes: Vec<u8> = key.bytes().map(|b| b - b'0').collect();
        if axes.iter().any(|&a| a == 0 || a as usize > dim) {
            return Err(CliError::Io(format!(
                "key '{key}' names an axis outside 1..={dim}"
            )));
        }
        match grade {
            None => grade = Some(axes.len()),
            Some(g) if g == axes.len() => {}
            Some(g) => {
                return Err(CliError::Io(format!(
                    "mixed grades in form file: {g} and {}",
                    axes.len()
                )))
            }
        }
        let c = match value {
            serde_json::Value::String(s) => parse_rational(s)
                .ok_or_else(|| CliError::Io(format!("bad rational '{s}' for key '{key}'")))?,
            serde_json::Value::Number(n) => {
                let Some(i) = n.as_i64() else {
                    return Err(CliError::Io(format!(
                        "coefficient for '{key}' must be an integer or a rational string"
                    )));
                };
                Rational::from_integer(BigInt::from(i))
            }
            _ => {
                return Err(CliError::Io(format!(
                    "coefficient for '{key}' must be a string or integer"
                )))
            }
        };
        // normalize arbitrary digit order through the wedge
        let mut term = Form::scalar(dim, Polynomial::constant(dim, c));
        for a in axes {
            term = term.wedge(&Form::basis(dim, &[a])?)?;
        }
        omega = Some(match omega {
            None => term,
            Some(acc) => &acc + &term,
        });
    }
    let Some(omega) = omega else {
        return Err(CliError::Io(format!("'{path}' defines no terms")));
    };
    Ok(omega)
}

fn parse_rational(s: &str) -> Option<Rational> {
    // tolerate the typographic minus sign in hand-written files
    let s = s.trim().replace('\u{2212}', "-");
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().to_string(), d.trim().to_string()),
        None => (s, "1".to_string()),
    };
    let numer: BigInt = n.parse().ok()?;
    let denom: BigInt = d.parse().ok()?;
    if denom == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(numer, denom))
}

pub fn cmd_solve(dim: usize, omega_spec: &str, alpha_src: &str) -> Result<CommandOutput, CliError> {
    let structure = load_structure(dim, omega_spec)?;
    let el = Elaborator::new(dim)?;
    let alpha = match el.eval_str(alpha_src)? {
        Value::Form(f) => f,
        Value::Scalar(p) => Form::scalar(dim, p),
        v => {
            return Err(CliError::Usage(format!(
                "solve expects a form, found a {}",
                v.kind()
            )))
        }
    };
    if alpha.grade() + 1 >= structure.degree() {
        return Err(CliError::Usage(format!(
            "alpha must have grade at most {}, found {}",
            structure.k() - 1,
            alpha.grade()
        )));
    }
    let result = structure.solve_hamiltonian(&alpha)?;
    let mut text = String::new();
    let status = match result.status {
        g2calc::SolveStatus::None => "none",
        g2calc::SolveStatus::Unique => "unique",
        g2calc::SolveStatus::Underdetermined => "underdetermined",
    };
    let _ = writeln!(text, "status: {status}");
    if let Some(q) = &result.particular {
        let _ = writeln!(text, "particular: {q}");
    }
    let _ = write!(text, "kernel dimension: {}", result.kernel_basis.len());
    let mut json = result.to_json();
    json["omega"] = json!(omega_spec);
    json["multivector_grade"] = json!(structure.k() - alpha.grade());
    Ok(CommandOutput { text, json })
}

pub fn cmd_structure_info(dim: usize, omega_spec: &str) -> Result<CommandOutput, CliError> {
    let structure = load_structure(dim, omega_spec)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "omega: {} (degree {}, dim {})",
        structure.omega(),
        structure.degree(),
        structure.dim()
    );
    let _ = writeln!(
        text,
        "nondegenerate: grade-1 contraction map has full rank {}",
        structure.map(1).map(|m| m.rank).unwrap_or(0)
    );
    for m in structure.maps() {
        let _ = writeln!(
            text,
            "map j={}: grade {} -> grade {}, rank {}, kernel dimension {}",
            m.j,
            m.j,
            structure.degree() - m.j,
            m.rank,
            m.kernel.len()
        );
    }
    let text = text.trim_end().to_string();
    let json = json!({
        "omega": structure.omega().to_string(),
        "degree": structure.degree(),
        "dim": structure.dim(),
        "maps": structure.maps().iter().map(|m| json!({
            "j": m.j,
            "rank": m.rank,
            "kernel_dim": m.kernel.len(),
            "kernel_basis": m.kernel.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    Ok(CommandOutput { text, json })
}

pub fn cmd_verify(seed: u64, trials: usize) -> (CommandOutput, bool) {
    let report = verify::run(seed, trials);
    let mut text = String::new();
    let total = report.checks.len();
    for (i, c) in report.checks.iter().enumerate() {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            text,
            "[{:>2}/{total}] {status}  {:<40} {}",
            i + 1,
            c.name,
            c.anchor
        );
        if let Some(ce) = &c.counterexample {
            let _ = writeln!(text, "        counterexample: {ce}");
        }
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    let _ = write!(
        text,
        "seed {seed}, trials {trials}: {passed}/{total} checks passed"
    );
    let ok = report.all_passed();
    (
        CommandOutput {
            text,
            json: report.to_json(),
        },
        ok,
    )
}
