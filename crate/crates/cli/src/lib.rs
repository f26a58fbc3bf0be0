//! Orchestration behind the `gaudin` binary; every check delegates to a `gaudin-core` operation.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gaudin_core::algebra::{MultiPoly, Scalar};
use gaudin_core::canonical::canonical_vector;
use gaudin_core::cartan::ProblemInstance;
use gaudin_core::forms::{forms_report, FormsInput};
use gaudin_core::io::{parse_instance, Archive, RunReport};
use gaudin_core::master::{bae_residual, BetheCandidate, EigenvalueVector};
use gaudin_core::rep::{PolyModel, WeightSpace};
use gaudin_core::solver::{solve_bae, SolutionRecord, SolverConfig};
use gaudin_core::sov;

#[derive(Parser, Debug)]
#[command(name = "gaudin", version, about = "Bethe ansatz, weight functions and separation of variables for Gaudin models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the Bethe equations and print a solution archive
    Solve(Common),
    /// Check every solution against the equivalent forms of the Bethe equations
    VerifyForms(Common),
    /// Build Bethe vectors and test singularity and the eigenvector property
    BetheVector(Common),
    /// Exact identities of the Gaudin Hamiltonians on the weight space
    GaudinCheck(Common),
    /// Separation of variables: Sklyanin identity, separated equation, Ψ cross-check
    SovCheck(Common),
    /// Render a solution archive and re-check its stored residuals
    Report(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Instance file (an archive for `report`)
    pub input: PathBuf,
    /// Precision of refinement and numeric checks, in bits
    #[arg(long, default_value_t = 256)]
    pub precision: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random Newton starts
    #[arg(long, default_value_t = 48)]
    pub starts: usize,
    /// Tolerance of the numeric checks (default 2^(48 − precision))
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Rational sample points per sampled identity
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Use the solutions of this archive instead of solving
    #[arg(long)]
    pub archive: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

/// Input problems map to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub struct Outcome {
    pub code: i32,
    pub output: String,
}

impl Common {
    fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or_else(|| 2f64.powi(48 - self.precision as i32))
    }

    fn config(&self) -> SolverConfig {
        SolverConfig {
            precision: self.precision,
            starts: self.starts,
            seed: self.seed,
            ..SolverConfig::default()
        }
    }
}

fn read(path: &PathBuf) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_instance(c: &Common) -> Result<ProblemInstance, InputError> {
    parse_instance(&read(&c.input)?).map_err(|e| InputError(format!("{}: {e}", c.input.display())))
}

fn solutions(c: &Common, inst: &ProblemInstance) -> Result<Vec<SolutionRecord>, InputError> {
    match &c.archive {
        Some(p) => {
            let a = Archive::from_json(&read(p)?).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
            if a.instance != *inst {
                return Err(InputError(format!("{} was produced for a different instance", p.display())));
            }
            Ok(a.solutions)
        }
        None => solve_bae(inst, &c.config()).map_err(|e| InputError(e.to_string())),
    }
}

fn type_a_small(inst: &ProblemInstance, what: &str) -> Result<(), InputError> {
    if !inst.cartan.is_type_a() {
        return Err(InputError(format!("{what} needs a type A instance")));
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<Outcome, InputError> {
    let (c, report, extra) = match &cli.command {
        Command::Solve(c) => {
            let inst = load_instance(c)?;
            let sols = solutions(c, &inst)?;
            let config = c.config();
            let tol = config.residual_tolerance();
            let mut r = RunReport::new("solve", &inst, c.seed);
            for (k, s) in sols.iter().enumerate() {
                r.push(
                    format!("solution {k}"),
                    "solve_bae",
                    s.residual <= tol && s.admissibility.ok() && !s.diverged,
                    Some(s.residual),
                    fmt_t(&s.t),
                );
            }
            let archive = Archive {
                instance: inst,
                config,
                solutions: sols,
            };
            (c, r, Some(archive.to_json()))
        }
        Command::VerifyForms(c) => {
            let inst = load_instance(c)?;
            let sols = solutions(c, &inst)?;
            let mut r = RunReport::new("verify-forms", &inst, c.seed);
            for (k, s) in sols.iter().enumerate() {
                let fr = forms_report(&inst, &FormsInput::Candidate(s.t.clone()), Some(&s.mu), c.precision, c.tolerance());
                for f in fr.checks {
                    r.push(format!("solution {k} {}", f.form), "forms_report", f.pass, Some(f.residual), f.detail);
                }
            }
            (c, r, None)
        }
        Command::BetheVector(c) => {
            let inst = load_instance(c)?;
            type_a_small(&inst, "bethe-vector")?;
            let sols = solutions(c, &inst)?;
            (c, bethe_vector(c, &inst, &sols)?, None)
        }
        Command::GaudinCheck(c) => {
            let inst = load_instance(c)?;
            type_a_small(&inst, "gaudin-check")?;
            (c, gaudin_check(c, &inst)?, None)
        }
        Command::SovCheck(c) => {
            let inst = load_instance(c)?;
            type_a_small(&inst, "sov-check")?;
            if inst.rank() > 2 {
                return Err(InputError("sov-check supports sl2 and sl3 only".into()));
            }
            let sols = solutions(c, &inst)?;
            (c, sov_check(c, &inst, &sols)?, None)
        }
        Command::Report(c) => {
            let a = Archive::from_json(&read(&c.input)?).map_err(|e| InputError(format!("{}: {e}", c.input.display())))?;
            let stale = a.stale_records();
            let mut r = RunReport::new("report", &a.instance, a.config.seed);
            for (k, s) in a.solutions.iter().enumerate() {
                r.push(
                    format!("solution {k}"),
                    "bae_residual",
                    !stale.contains(&k),
                    Some(s.residual),
                    format!("{} μ = {}", fmt_t(&s.t), fmt_list(&s.mu.mu)),
                );
            }
            (c, r, None)
        }
    };
    let code = if report.all_pass() { 0 } else { 1 };
    let output = match (c.format, extra) {
        (Format::Machine, Some(archive)) => archive + "\n",
        (Format::Machine, None) => report.to_json() + "\n",
        (Format::Human, _) => report.to_human(),
    };
    Ok(Outcome { code, output })
}

fn fmt_scalar(x: &Scalar) -> String {
    match x {
        Scalar::Exact(_) => x.to_string(),
        Scalar::Approx(_) => {
            let (re, im) = x.to_f64_pair();
            if im.abs() <= 1e-40 * re.abs().max(1.0) {
                format!("{re:.12}")
            } else {
                format!("{re:.12}{im:+.12}i")
            }
        }
    }
}

fn fmt_list(v: &[Scalar]) -> String {
    format!("({})", v.iter().map(fmt_scalar).collect::<Vec<_>>().join(", "))
}

fn fmt_t(t: &BetheCandidate) -> String {
    format!("t = [{}]", t.t.iter().map(|c| fmt_list(c)).collect::<Vec<_>>().join(", "))
}

fn err(e: impl fmt::Display) -> InputError {
    InputError(e.to_string())
}

fn bethe_vector(c: &Common, inst: &ProblemInstance, sols: &[SolutionRecord]) -> Result<RunReport, InputError> {
    let tol = c.tolerance();
    let space = WeightSpace::new(inst, &inst.l).map_err(err)?;
    let mut r = RunReport::new("bethe-vector", inst, c.seed);
    for (k, s) in sols.iter().enumerate() {
        let v = match canonical_vector(inst, &s.t) {
            Ok(v) => v,
            Err(e) => {
                r.push(format!("solution {k} canonical"), "canonical_vector", false, None, e.to_string());
                continue;
            }
        };
        let norm = v.max_abs();
        r.push(format!("solution {k} nonzero"), "canonical_vector", norm > 0.0, None, format!("max norm {norm:.6e}"));
        let sing = space.singular_residual(&v).map_err(err)? / norm.max(f64::MIN_POSITIVE);
        r.push(format!("solution {k} singular"), "is_singular", sing <= tol, Some(sing), "");
        match sov::eigenfunction_check(inst, &s.t) {
            Ok(e) => {
                let gap = e
                    .mu
                    .iter()
                    .zip(&s.mu.mu)
                    .map(|(a, b)| (a - b).abs_f64())
                    .fold(0.0, f64::max);
                r.push(format!("solution {k} eigenvector"), "eigenfunction_check", e.residual <= tol, Some(e.residual), "");
                r.push(
                    format!("solution {k} eigenvalues"),
                    "eigenvalues_from_t",
                    gap <= tol * (1.0 + e.mu.iter().map(Scalar::abs_f64).fold(0.0, f64::max)),
                    Some(gap),
                    fmt_list(&s.mu.mu),
                );
            }
            Err(e) => r.push(format!("solution {k} eigenvector"), "eigenfunction_check", false, None, e.to_string()),
        }
    }
    Ok(r)
}

fn gaudin_check(c: &Common, inst: &ProblemInstance) -> Result<RunReport, InputError> {
    let space = WeightSpace::new(inst, &inst.l).map_err(err)?;
    let hs = space.gaudin_matrices(&inst.z).map_err(err)?;
    let mut r = RunReport::new("gaudin-check", inst, c.seed);
    let dim = space.dim();
    let mut sum = gaudin_core::algebra::Matrix::zeros(dim, dim);
    for h in &hs {
        sum = sum.add(h).map_err(err)?;
    }
    r.push("sum of Hamiltonians", "gaudin_matrices", sum.is_zero(), Some(sum.max_abs()), format!("dim {dim}"));
    let mut worst: f64 = 0.0;
    let mut commute = true;
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            let cm = hs[i].commutator(&hs[j]).map_err(err)?;
            commute &= cm.is_zero();
            worst = worst.max(cm.max_abs());
        }
    }
    r.push("commutators", "gaudin_matrices", commute, Some(worst), "");
    if inst.rank() <= 2 {
        // the same Hamiltonians from the differential-operator model
        let model = PolyModel::from_space(&space).map_err(err)?;
        let ops = model.gaudin_ops(&inst.z).map_err(err)?;
        let same = ops
            .iter()
            .zip(&hs)
            .all(|(op, h)| model.matrix_of(op, &space, &space).is_ok_and(|m| m == *h));
        r.push("polynomial model agrees", "gaudin_ops", same, None, "");
    }
    if inst.rank() == 2 {
        let g = sov::graded_casimir_checks(inst, &inst.l, c.samples, c.seed).map_err(err)?;
        r.push("grading of Ω parts", "graded_casimir_checks", g.grading, None, format!("{} monomials", g.monomials));
        r.push("x3-free annihilation", "graded_casimir_checks", g.annihilation, None, "");
        r.push("Ω<0 vanishes on the diagonal", "graded_casimir_checks", g.diagonal, None, format!("{} samples", g.samples));
        r.push("leading term on the diagonal", "diagonal_leading_term", g.leading, None, "");
    }
    Ok(r)
}

/// Zero-sum rational eigenvalue guess for identities that hold for any μ.
fn generic_mu(n: usize) -> EigenvalueVector {
    let mut mu: Vec<Scalar> = (1..n).map(|i| Scalar::ratio(2 * i as i64 - 1, 3)).collect();
    let s = mu.iter().fold(Scalar::zero(), |a, b| &a + b);
    mu.push(-s);
    EigenvalueVector { mu }
}

fn generic_t(inst: &ProblemInstance, seed: u64) -> BetheCandidate {
    let mut k = seed as i64 % 7;
    let t = inst
        .l
        .iter()
        .map(|&n| {
            (0..n)
                .map(|_| {
                    k += 1;
                    Scalar::ratio(11 * k + 3, 7 * k + 2)
                })
                .collect()
        })
        .collect();
    BetheCandidate::new(t)
}

fn sov_check(c: &Common, inst: &ProblemInstance, sols: &[SolutionRecord]) -> Result<RunReport, InputError> {
    let tol = c.tolerance();
    let mut r = RunReport::new("sov-check", inst, c.seed);
    let space = WeightSpace::new(inst, &inst.l).map_err(err)?;
    let model = PolyModel::from_space(&space).map_err(err)?;
    let n = inst.n();
    let t = generic_t(inst, c.seed);
    let psi = canonical_vector(inst, &t)
        .map_err(err)
        .and_then(|v| model.polynomial_of(&space, &v).map_err(err))?;
    let pts = sov::sample_points(inst, c.samples, c.seed, false, &t.flatten()).map_err(err)?;
    if inst.rank() == 1 {
        let mu = generic_mu(n);
        let mut ok = true;
        let mut parts = true;
        for b in space.basis() {
            let f = MultiPoly::monomial(model.vars(), model.monomial(b), Scalar::one());
            ok &= sov::verify_sklyanin_sl2(inst, &f, &mu, 0.0).map_err(err)?.holds();
            parts &= sov::sklyanin_components(inst, &f).map_err(err)? == (true, true);
        }
        r.push("Sklyanin identity on monomials", "verify_sklyanin_sl2", ok, None, format!("{} monomials", space.dim()));
        r.push("component identities", "sklyanin_components", parts, None, "");
        let mut same = true;
        for p in &pts {
            let x = sov::uy_to_x(inst, p).map_err(err)?;
            same &= sov::psi_sl2(inst, &t, p).is_ok_and(|v| v == psi.eval(&x));
        }
        r.push("Ψ in separated coordinates", "psi_sl2", same, None, format!("{} points", pts.len()));
        for (k, s) in sols.iter().enumerate() {
            let f = canonical_vector(inst, &s.t)
                .map_err(err)
                .and_then(|v| model.polynomial_of(&space, &v).map_err(err))?;
            let v = sov::verify_sklyanin_sl2(inst, &f, &s.mu, tol).map_err(err)?;
            let dev = v.deviation.iter().cloned().fold(0.0, f64::max);
            r.push(format!("solution {k} separated equations"), "verify_sklyanin_sl2", v.holds() && v.both_zero, Some(dev), "");
        }
    } else {
        let mut same = true;
        for p in &pts {
            let x = sov::uy_to_x(inst, p).map_err(err)?;
            same &= sov::psi_separated(inst, &t, p).is_ok_and(|v| v == psi.eval(&x));
        }
        r.push("Ψ in separated coordinates", "psi_separated", same, None, format!("{} points", pts.len()));
        let bound = n * (inst.l[0] + inst.l[1]) + n;
        let count = c.samples.max(bound);
        let mut check = |name: String, t: &BetheCandidate, mu: &EigenvalueVector, want_zero: bool| -> Result<(), InputError> {
            let diag = sov::sample_points(inst, count, c.seed ^ 0xd1a6, true, &t.flatten()).map_err(err)?;
            match sov::verify_separation_sl3(inst, t, mu, &diag, tol) {
                Ok(v) => {
                    let pass = v.holds() && (!want_zero || v.magnitude <= tol.sqrt());
                    r.push(name, "verify_separation_sl3", pass, Some(v.max_deviation), format!("degree bound {}, {} samples", v.degree_bound, v.samples));
                }
                Err(e) => r.push(name, "verify_separation_sl3", false, None, e.to_string()),
            }
            Ok(())
        };
        check("separated equation, generic t".into(), &t, &generic_mu(n), false)?;
        for (k, s) in sols.iter().enumerate() {
            check(format!("solution {k} separated equation"), &s.t, &s.mu, true)?;
        }
    }
    for (k, s) in sols.iter().enumerate() {
        let res = bae_residual(inst, &s.t).map(|v| v.max_norm()).unwrap_or(f64::INFINITY);
        r.push(format!("solution {k} Bethe equations"), "bae_residual", res <= tol, Some(res), "");
    }
    Ok(r)
}
