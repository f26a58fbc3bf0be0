//! One report covering every applicable form of the Bethe equations.

use crate::algebra::{poly_roots_scalar, Scalar, UniPoly};
use crate::cartan::ProblemInstance;
use crate::master::{bae_residual, BetheCandidate, EigenvalueVector};

use super::{mu_from_h, mu_solve, new_form_residual, oper_check, polys_from_t, stieltjes_reduce};

#[derive(Clone, Debug)]
pub enum FormsInput {
    Candidate(BetheCandidate),
    Polys(Vec<UniPoly>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormCheck {
    pub form: &'static str,
    pub pass: bool,
    pub residual: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormsReport {
    pub checks: Vec<FormCheck>,
    pub mu: Option<EigenvalueVector>,
}

impl FormsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn all_fail(&self) -> bool {
        self.checks.iter().all(|c| !c.pass)
    }
}

fn check(form: &'static str, pass: bool, residual: f64, detail: impl Into<String>) -> FormCheck {
    FormCheck { form, pass, residual, detail: detail.into() }
}

/// Evaluates the direct, divisibility, single-equation and (sl3) oper forms.
pub fn forms_report(
    inst: &ProblemInstance,
    input: &FormsInput,
    mu: Option<&EigenvalueVector>,
    prec: usize,
    tol: f64,
) -> FormsReport {
    let mut checks = Vec::new();
    let (t, ps) = match input {
        FormsInput::Candidate(t) => (Some(t.clone()), polys_from_t(t)),
        FormsInput::Polys(ps) => {
            let roots: Option<Vec<Vec<Scalar>>> = ps.iter().map(|p| poly_roots_scalar(p, prec).ok()).collect();
            (roots.map(BetheCandidate::new), ps.clone())
        }
    };

    match t.as_ref().map(|t| bae_residual(inst, t)) {
        Some(Ok(r)) => {
            let norm = r.max_norm();
            let pass = if r.flatten().iter().all(Scalar::is_exact) { r.is_zero() } else { norm <= tol };
            checks.push(check("direct", pass, norm, format!("{} equations", r.flatten().len())));
        }
        Some(Err(e)) => checks.push(check("direct", false, f64::INFINITY, e.to_string())),
        None => checks.push(check("direct", false, f64::INFINITY, "roots unavailable")),
    }

    let stieltjes = stieltjes_reduce(inst, &ps, tol);
    match &stieltjes {
        Ok(st) => {
            let norm = st.colors.iter().map(|c| c.remainder.max_abs()).fold(0.0, f64::max);
            let detail = match st.failure() {
                None => "all colors divisible".to_string(),
                Some((i, _)) => format!("color {} not divisible", i + 1),
            };
            checks.push(check("stieltjes", st.divisible(), norm, detail));
        }
        Err(e) => checks.push(check("stieltjes", false, f64::INFINITY, e.to_string())),
    }

    let solved = match mu {
        Some(m) => Ok(m.clone()),
        None => mu_solve(inst, &ps, tol),
    };
    let mut mu_out = None;
    match solved {
        Ok(m) => match new_form_residual(inst, &ps, &m, tol) {
            Ok(res) => {
                let scale = res.residual.max_abs();
                checks.push(check("new-form", res.vanishes(tol), scale, "residual of the single equation"));
                mu_out = Some(m);
            }
            Err(e) => checks.push(check("new-form", false, f64::INFINITY, e.to_string())),
        },
        Err(e) => checks.push(check("new-form", false, f64::INFINITY, e.to_string())),
    }

    if inst.rank() == 1 {
        let from_h = stieltjes
            .ok()
            .and_then(|st| st.colors[0].h.clone())
            .map(|h| mu_from_h(inst, &h));
        match (from_h, &mu_out) {
            (Some(Ok(a)), Some(b)) => {
                let dev = a.mu.iter().zip(&b.mu).map(|(x, y)| (x - y).abs_f64()).fold(0.0, f64::max);
                let pass = if a.mu.iter().chain(&b.mu).all(Scalar::is_exact) { a == *b } else { dev <= tol };
                checks.push(check("mu-from-H", pass, dev, "μ from H agrees with μ from the single equation"));
            }
            (Some(Err(e)), _) => checks.push(check("mu-from-H", false, f64::INFINITY, e.to_string())),
            _ => checks.push(check("mu-from-H", false, f64::INFINITY, "no H or no μ")),
        }
    }

    if inst.rank() == 2 && inst.cartan.is_type_a() {
        match t.as_ref().map(|t| oper_check(inst, t, tol)) {
            Some(Ok(d)) => {
                let dev = d.exponents.iter().map(|e| e.deviation).fold(0.0, f64::max);
                let detail = format!(
                    "D_t P1 = 0: {}, regular at t: {}, exponents: {}",
                    d.kills_p1,
                    d.regular_at_t,
                    d.exponents.iter().all(|e| e.ok)
                );
                checks.push(check("oper", d.verdict(), dev, detail));
            }
            Some(Err(e)) => checks.push(check("oper", false, f64::INFINITY, e.to_string())),
            None => checks.push(check("oper", false, f64::INFINITY, "roots unavailable")),
        }
    }

    FormsReport { checks, mu: mu_out }
}
