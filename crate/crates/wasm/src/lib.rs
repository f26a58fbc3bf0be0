//! Browser demo bindings. Every entry point takes and returns JSON text.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use gaudin_core::algebra::{BigComplex, Scalar};
use gaudin_core::canonical::canonical_vector;
use gaudin_core::cartan::ProblemInstance;
use gaudin_core::forms::{forms_report, FormsInput};
use gaudin_core::io::{instance_digest, parse_instance, scalar_from_json};
use gaudin_core::master::{eigenvalues_from_t, BetheCandidate};
use gaudin_core::rep::WeightSpace;
use gaudin_core::solver::{solve_bae, SolverConfig};
use gaudin_core::sov::eigenfunction_check;

/// Demo precision; enough for residuals far below the display resolution.
const PRECISION: usize = 128;
/// Largest weight space the page will assemble matrices for.
const MAX_DIM: usize = 400;

fn pair(x: &Scalar) -> Value {
    let (re, im) = x.to_f64_pair();
    json!([re, im])
}

fn list(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(pair).collect())
}

fn config(starts: u32, seed: u64) -> SolverConfig {
    SolverConfig {
        precision: PRECISION,
        starts: starts.clamp(1, 256) as usize,
        seed,
        ..SolverConfig::default()
    }
}

fn load(instance: &str) -> Result<ProblemInstance, String> {
    parse_instance(instance).map_err(|e| e.to_string())
}

/// Bethe roots with their eigenvalues and residuals.
pub fn solve_json(instance: &str, starts: u32, seed: u64) -> Result<String, String> {
    let inst = load(instance)?;
    let sols = solve_bae(&inst, &config(starts, seed)).map_err(|e| e.to_string())?;
    let out: Vec<Value> = sols
        .iter()
        .map(|s| {
            json!({
                "t": s.t.t.iter().map(|c| list(c)).collect::<Vec<_>>(),
                "mu": list(&s.mu.mu),
                "residual": s.residual,
                "admissible": s.admissibility.ok(),
            })
        })
        .collect();
    Ok(json!({ "digest": instance_digest(&inst), "solutions": out }).to_string())
}

/// Gaudin identities on the weight space, then the Bethe vector of every solution
/// as an eigenvector, comparing Rayleigh quotients with the closed-form eigenvalues.
pub fn spectrum_json(instance: &str, starts: u32, seed: u64) -> Result<String, String> {
    let inst = load(instance)?;
    if !inst.cartan.is_type_a() {
        return Err("the spectrum view needs a type A instance".into());
    }
    let space = WeightSpace::new(&inst, &inst.l).map_err(|e| e.to_string())?;
    if space.dim() > MAX_DIM {
        return Err(format!("weight space of dimension {} is too large for the page", space.dim()));
    }
    let hs = space.gaudin_matrices(&inst.z).map_err(|e| e.to_string())?;
    let mut commute = true;
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            commute &= hs[i].commutator(&hs[j]).map_err(|e| e.to_string())?.is_zero();
        }
    }
    let sols = solve_bae(&inst, &config(starts, seed)).map_err(|e| e.to_string())?;
    let mut vectors = Vec::new();
    for s in &sols {
        let v = canonical_vector(&inst, &s.t).map_err(|e| e.to_string())?;
        let norm = v.max_abs();
        let singular = space.singular_residual(&v).map_err(|e| e.to_string())? / norm;
        let e = eigenfunction_check(&inst, &s.t).map_err(|e| e.to_string())?;
        vectors.push(json!({
            "t": s.t.t.iter().map(|c| list(c)).collect::<Vec<_>>(),
            "rayleigh": list(&e.mu),
            "mu": list(&s.mu.mu),
            "eigen_residual": e.residual,
            "singular_residual": singular,
        }));
    }
    Ok(json!({ "dim": space.dim(), "commute": commute, "vectors": vectors }).to_string())
}

fn parse_t(inst: &ProblemInstance, t: &str) -> Result<BetheCandidate, String> {
    let v: Value = serde_json::from_str(t).map_err(|e| e.to_string())?;
    let colors = v.as_array().ok_or("roots must be a list per color")?;
    if colors.len() != inst.rank() {
        return Err(format!("expected {} colors of roots, got {}", inst.rank(), colors.len()));
    }
    let mut out = Vec::new();
    for (i, c) in colors.iter().enumerate() {
        let roots = c.as_array().ok_or_else(|| format!("color {i} must be a list"))?;
        let mut row = Vec::new();
        for (a, x) in roots.iter().enumerate() {
            let s = match x {
                Value::Number(n) => Scalar::Approx(BigComplex::from_f64(n.as_f64().unwrap_or(f64::NAN), 0.0, PRECISION)),
                Value::Array(p) if p.len() == 2 => {
                    let re = p[0].as_f64().ok_or_else(|| format!("t[{i}][{a}] real part"))?;
                    let im = p[1].as_f64().ok_or_else(|| format!("t[{i}][{a}] imaginary part"))?;
                    Scalar::Approx(BigComplex::from_f64(re, im, PRECISION))
                }
                _ => scalar_from_json(x, &format!("t[{i}][{a}]")).map_err(|e| e.to_string())?,
            };
            row.push(s);
        }
        out.push(row);
    }
    Ok(BetheCandidate::new(out))
}

/// Every form of the Bethe equations at a user-supplied candidate.
pub fn forms_json(instance: &str, t: &str) -> Result<String, String> {
    let inst = load(instance)?;
    let cand = parse_t(&inst, t)?;
    if cand.t.iter().map(Vec::len).collect::<Vec<_>>() != inst.l {
        return Err(format!("root counts must match l = {:?}", inst.l));
    }
    let mu = eigenvalues_from_t(&inst, &cand).ok();
    let tol = 2f64.powi(48 - PRECISION as i32);
    let rep = forms_report(&inst, &FormsInput::Candidate(cand), mu.as_ref(), PRECISION, tol);
    let checks: Vec<Value> = rep
        .checks
        .iter()
        .map(|c| json!({ "form": c.form, "pass": c.pass, "residual": c.residual, "detail": c.detail }))
        .collect();
    Ok(json!({ "all_pass": rep.all_pass(), "checks": checks }).to_string())
}

#[wasm_bindgen]
pub fn solve(instance: &str, starts: u32, seed: u64) -> Result<String, JsValue> {
    solve_json(instance, starts, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn spectrum(instance: &str, starts: u32, seed: u64) -> Result<String, JsValue> {
    spectrum_json(instance, starts, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn forms(instance: &str, t: &str) -> Result<String, JsValue> {
    forms_json(instance, t).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: &str = r#"{"algebra":{"type":"A","rank":1},"weights":[["1"],["1"]],"z":["0","1"],"l":[1]}"#;
    const SL3: &str = r#"{"algebra":{"type":"A","rank":2},"weights":[["1/3","2/5"],["3/2","-1/4"]],"z":["0","1"],"l":[1,1]}"#;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn solve_running() {
        let v = parse(&solve_json(RUNNING, 8, 0).unwrap());
        let sols = v["solutions"].as_array().unwrap();
        assert_eq!(sols.len(), 1);
        assert!((sols[0]["t"][0][0][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
        assert!((sols[0]["mu"][0][0].as_f64().unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn spectrum_matches() {
        let v = parse(&spectrum_json(SL3, 16, 0).unwrap());
        assert_eq!(v["commute"], true);
        for w in v["vectors"].as_array().unwrap() {
            assert!(w["eigen_residual"].as_f64().unwrap() < 1e-20);
            for s in 0..2 {
                let a = w["rayleigh"][s][0].as_f64().unwrap();
                let b = w["mu"][s][0].as_f64().unwrap();
                assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn forms_exact_and_perturbed() {
        let ok = parse(&forms_json(RUNNING, r#"[["1/2"]]"#).unwrap());
        assert_eq!(ok["all_pass"], true);
        let bad = parse(&forms_json(RUNNING, "[[0.51]]").unwrap());
        assert_eq!(bad["all_pass"], false);
        assert!(bad["checks"].as_array().unwrap().iter().all(|c| c["pass"] == false));
        assert!(forms_json(RUNNING, "[[0.5, 0.2]]").is_err());
        assert!(forms_json(RUNNING, "[[\"x\"]]").is_err());
    }
}
