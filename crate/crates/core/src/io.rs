//! JSON instance files, solution archives and run reports.
//!
//! Rationals are written as `"p/q"` strings; multiprecision values as
//! `"<re-hex>|<im-hex>@<bits>"` with binary hex significands, so every number
//! survives a round trip exactly.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{rational_to_string, BigComplex, Rational, Scalar};
use crate::cartan::{make_cartan_A, CartanData, ProblemInstance, WeightData};
use crate::master::{bae_residual, BetheCandidate, EigenvalueVector};
use crate::solver::{Admissibility, SolutionRecord, SolverConfig};

pub const ARCHIVE_SCHEMA: &str = "gaudin-solutions/1";
pub const REPORT_SCHEMA: &str = "gaudin-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("field `{field}`: {msg}")]
    Field { field: String, msg: String },
    #[error("unsupported schema `{0}`")]
    Schema(String),
}

fn field(f: impl Into<String>, msg: impl Into<String>) -> IoError {
    IoError::Field {
        field: f.into(),
        msg: msg.into(),
    }
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    match x {
        Scalar::Exact(q) => Value::String(rational_to_string(q)),
        Scalar::Approx(c) => Value::String(format!("{}@{}", c.to_hex(), c.precision())),
    }
}

pub fn scalar_from_json(v: &Value, name: &str) -> Result<Scalar, IoError> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(field(name, "expected a number or string")),
    };
    if let Some((hex, prec)) = s.split_once('@') {
        let prec: usize = prec.parse().map_err(|_| field(name, format!("bad precision in `{s}`")))?;
        let c = BigComplex::from_hex(hex, prec).map_err(|e| field(name, e.to_string()))?;
        return Ok(Scalar::Approx(c));
    }
    Scalar::parse(&s).map_err(|_| field(name, format!("cannot read `{s}` as a rational")))
}

fn rational_from_json(v: &Value, name: &str) -> Result<Rational, IoError> {
    match scalar_from_json(v, name)? {
        Scalar::Exact(q) => Ok(q),
        Scalar::Approx(_) => Err(field(name, "expected an exact rational")),
    }
}

fn array<'a>(v: &'a Value, name: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| field(name, "expected an array"))
}

fn int_matrix(v: &Value, name: &str) -> Result<Vec<Vec<i64>>, IoError> {
    array(v, name)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            array(row, &format!("{name}[{i}]"))?
                .iter()
                .enumerate()
                .map(|(j, x)| x.as_i64().ok_or_else(|| field(format!("{name}[{i}][{j}]"), "expected an integer")))
                .collect()
        })
        .collect()
}

fn rational_matrix(v: &Value, name: &str) -> Result<Vec<Vec<Rational>>, IoError> {
    array(v, name)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            array(row, &format!("{name}[{i}]"))?
                .iter()
                .enumerate()
                .map(|(j, x)| rational_from_json(x, &format!("{name}[{i}][{j}]")))
                .collect()
        })
        .collect()
}

pub fn instance_from_value(v: &Value) -> Result<ProblemInstance, IoError> {
    let obj = v.as_object().ok_or_else(|| field("<root>", "expected an object"))?;
    let get = |k: &str| obj.get(k).ok_or_else(|| field(k, "missing"));
    let alg = get("algebra")?;
    let cartan = if let Some(t) = alg.get("type") {
        if t.as_str() != Some("A") {
            return Err(field("algebra.type", "only \"A\" is supported"));
        }
        let r = alg
            .get("rank")
            .and_then(Value::as_u64)
            .filter(|&r| r >= 1)
            .ok_or_else(|| field("algebra.rank", "expected a positive integer"))?;
        make_cartan_A(r as usize)
    } else {
        let a = int_matrix(alg.get("cartan").ok_or_else(|| field("algebra.cartan", "missing"))?, "algebra.cartan")?;
        let d = match alg.get("symmetrizer") {
            Some(s) => array(s, "algebra.symmetrizer")?
                .iter()
                .enumerate()
                .map(|(i, x)| x.as_i64().ok_or_else(|| field(format!("algebra.symmetrizer[{i}]"), "expected an integer")))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![1; a.len()],
        };
        CartanData::new(a, d).map_err(|e| field("algebra", e.to_string()))?
    };
    let m = rational_matrix(get("weights")?, "weights")?;
    let gram = obj.get("gram").map(|g| rational_matrix(g, "gram")).transpose()?;
    let z = array(get("z")?, "z")?
        .iter()
        .enumerate()
        .map(|(i, x)| scalar_from_json(x, &format!("z[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let l = array(get("l")?, "l")?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_u64()
                .map(|k| k as usize)
                .ok_or_else(|| field(format!("l[{i}]"), "expected a non-negative integer"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ProblemInstance::new(cartan, WeightData { m, gram }, z, l).map_err(|e| {
        let name = match e {
            crate::cartan::CartanError::CoincidentPoints(..) => "z",
            crate::cartan::CartanError::GramMismatch(..) | crate::cartan::CartanError::GramRequired => "gram",
            _ => "weights",
        };
        field(name, e.to_string())
    })
}

pub fn parse_instance(text: &str) -> Result<ProblemInstance, IoError> {
    let v: Value = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
    instance_from_value(&v)
}

/// Canonical JSON form (explicit Cartan data, exact strings).
pub fn instance_to_value(inst: &ProblemInstance) -> Value {
    let q = |r: &Rational| Value::String(rational_to_string(r));
    let mut obj = Map::new();
    obj.insert(
        "algebra".into(),
        json!({ "cartan": inst.cartan.matrix(), "symmetrizer": inst.cartan.symmetrizer() }),
    );
    obj.insert(
        "weights".into(),
        Value::Array(inst.weights.m.iter().map(|w| Value::Array(w.iter().map(q).collect())).collect()),
    );
    if let Some(g) = &inst.weights.gram {
        obj.insert(
            "gram".into(),
            Value::Array(g.iter().map(|w| Value::Array(w.iter().map(q).collect())).collect()),
        );
    }
    obj.insert("z".into(), Value::Array(inst.z.iter().map(scalar_to_json).collect()));
    obj.insert("l".into(), json!(inst.l));
    Value::Object(obj)
}

/// SHA-256 of the canonical JSON form, hex.
pub fn instance_digest(inst: &ProblemInstance) -> String {
    let text = serde_json::to_string(&instance_to_value(inst)).expect("serializable");
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn candidate_to_json(t: &BetheCandidate) -> Value {
    Value::Array(t.t.iter().map(|c| Value::Array(c.iter().map(scalar_to_json).collect())).collect())
}

fn candidate_from_json(v: &Value, name: &str) -> Result<BetheCandidate, IoError> {
    let t = array(v, name)?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            array(c, &format!("{name}[{i}]"))?
                .iter()
                .enumerate()
                .map(|(j, x)| scalar_from_json(x, &format!("{name}[{i}][{j}]")))
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BetheCandidate::new(t))
}

fn record_to_json(r: &SolutionRecord) -> Value {
    json!({
        "t": candidate_to_json(&r.t),
        "residual": r.residual,
        "mu": Value::Array(r.mu.mu.iter().map(scalar_to_json).collect()),
        "admissible": {
            "distinct": r.admissibility.distinct,
            "avoids_z": r.admissibility.avoids_z,
            "colors_distinct": r.admissibility.colors_distinct,
        },
        "precision": r.precision,
        "diverged": r.diverged,
    })
}

fn record_from_json(v: &Value, k: usize) -> Result<SolutionRecord, IoError> {
    let name = |f: &str| format!("solutions[{k}].{f}");
    let get = |f: &str| v.get(f).ok_or_else(|| field(name(f), "missing"));
    let flag = |f: &str| {
        get("admissible")?
            .get(f)
            .and_then(Value::as_bool)
            .ok_or_else(|| field(name(&format!("admissible.{f}")), "expected a boolean"))
    };
    Ok(SolutionRecord {
        t: candidate_from_json(get("t")?, &name("t"))?,
        residual: get("residual")?
            .as_f64()
            .ok_or_else(|| field(name("residual"), "expected a number"))?,
        mu: EigenvalueVector {
            mu: array(get("mu")?, &name("mu"))?
                .iter()
                .enumerate()
                .map(|(i, x)| scalar_from_json(x, &format!("{}[{i}]", name("mu"))))
                .collect::<Result<_, _>>()?,
        },
        admissibility: Admissibility {
            distinct: flag("distinct")?,
            avoids_z: flag("avoids_z")?,
            colors_distinct: flag("colors_distinct")?,
        },
        precision: get("precision")?
            .as_u64()
            .ok_or_else(|| field(name("precision"), "expected an integer"))? as usize,
        diverged: get("diverged")?
            .as_bool()
            .ok_or_else(|| field(name("diverged"), "expected a boolean"))?,
    })
}

/// Solutions together with the instance and solver settings that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct Archive {
    pub instance: ProblemInstance,
    pub config: SolverConfig,
    pub solutions: Vec<SolutionRecord>,
}

impl Archive {
    pub fn to_value(&self) -> Value {
        let c = &self.config;
        json!({
            "schema": ARCHIVE_SCHEMA,
            "tool_version": TOOL_VERSION,
            "instance_digest": instance_digest(&self.instance),
            "instance": instance_to_value(&self.instance),
            "config": {
                "precision": c.precision,
                "tolerance": c.residual_tolerance(),
                "max_iterations": c.max_iterations,
                "starts": c.starts,
                "seed": c.seed,
                "dedupe_tolerance": c.dedupe_tolerance,
                "center": c.center.map(|(a, b)| vec![a, b]),
                "radius": c.radius,
            },
            "solutions": Value::Array(self.solutions.iter().map(record_to_json).collect()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Archive, IoError> {
        let v: Value = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
        match v.get("schema").and_then(Value::as_str) {
            Some(ARCHIVE_SCHEMA) => {}
            Some(s) => return Err(IoError::Schema(s.to_string())),
            None => return Err(field("schema", "missing")),
        }
        let instance = instance_from_value(v.get("instance").ok_or_else(|| field("instance", "missing"))?)?;
        let c = v.get("config").ok_or_else(|| field("config", "missing"))?;
        let num = |f: &str| c.get(f).and_then(Value::as_f64).ok_or_else(|| field(format!("config.{f}"), "expected a number"));
        let int = |f: &str| c.get(f).and_then(Value::as_u64).ok_or_else(|| field(format!("config.{f}"), "expected an integer"));
        let center = match c.get("center") {
            Some(Value::Array(a)) if a.len() == 2 => Some((
                a[0].as_f64().ok_or_else(|| field("config.center", "expected numbers"))?,
                a[1].as_f64().ok_or_else(|| field("config.center", "expected numbers"))?,
            )),
            None | Some(Value::Null) => None,
            _ => return Err(field("config.center", "expected [re, im]")),
        };
        let config = SolverConfig {
            precision: int("precision")? as usize,
            tolerance: Some(num("tolerance")?),
            max_iterations: int("max_iterations")? as usize,
            starts: int("starts")? as usize,
            center,
            radius: c.get("radius").and_then(Value::as_f64),
            seed: int("seed")?,
            dedupe_tolerance: num("dedupe_tolerance")?,
        };
        let solutions = array(v.get("solutions").ok_or_else(|| field("solutions", "missing"))?, "solutions")?
            .iter()
            .enumerate()
            .map(|(k, r)| record_from_json(r, k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Archive {
            instance,
            config,
            solutions,
        })
    }

    /// Indices of records whose recomputed residual disagrees with the stored one beyond
    /// the record's precision.
    pub fn stale_records(&self) -> Vec<usize> {
        self.solutions
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                let slack = 2f64.powi(16 - r.precision.max(16) as i32) + 1e-9 * r.residual;
                !matches!(bae_residual(&self.instance, &r.t), Ok(res) if (res.max_norm() - r.residual).abs() <= slack)
            })
            .map(|(k, _)| k)
            .collect()
    }
}

/// One verdict inside a [`RunReport`]; `op` names the library operation behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckVerdict {
    pub name: String,
    pub op: &'static str,
    pub pass: bool,
    pub residual: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub subcommand: String,
    pub instance_digest: String,
    pub seed: u64,
    pub checks: Vec<CheckVerdict>,
}

impl RunReport {
    pub fn new(subcommand: &str, inst: &ProblemInstance, seed: u64) -> Self {
        RunReport {
            subcommand: subcommand.to_string(),
            instance_digest: instance_digest(inst),
            seed,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, op: &'static str, pass: bool, residual: Option<f64>, detail: impl Into<String>) {
        self.checks.push(CheckVerdict {
            name: name.into(),
            op,
            pass,
            residual,
            detail: detail.into(),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema": REPORT_SCHEMA,
            "tool_version": TOOL_VERSION,
            "subcommand": self.subcommand,
            "instance_digest": self.instance_digest,
            "seed": self.seed,
            "pass": self.all_pass(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "op": c.op,
                "pass": c.pass,
                "residual": c.residual,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }

    pub fn to_human(&self) -> String {
        let mut s = format!(
            "{} on instance {} (seed {})\n",
            self.subcommand,
            &self.instance_digest[..12.min(self.instance_digest.len())],
            self.seed
        );
        for c in &self.checks {
            let res = c.residual.map(|r| format!(" residual {r:.3e}")).unwrap_or_default();
            s.push_str(&format!(
                "  [{}] {}{}{}{}\n",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                res,
                if c.detail.is_empty() { "" } else { ": " },
                c.detail
            ));
        }
        s.push_str(if self.all_pass() { "all checks passed\n" } else { "some checks failed\n" });
        s
    }
}
