//! Multiprecision Newton solver for the Bethe equations with seeded random starts.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{BigComplex, Matrix, Scalar};
use crate::cartan::{CartanError, Pairings, ProblemInstance};
use crate::master::{bae_residual_with, eigenvalues_from_t, BetheCandidate, EigenvalueVector, MasterError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Master(#[from] MasterError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// bits of the final refinement
    pub precision: usize,
    /// residual target; `None` means 2^{16−precision}
    pub tolerance: Option<f64>,
    pub max_iterations: usize,
    pub starts: usize,
    /// sampling disk; `None` means the centroid of z and twice the z-spread
    pub center: Option<(f64, f64)>,
    pub radius: Option<f64>,
    pub seed: u64,
    pub dedupe_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            precision: 256,
            tolerance: None,
            max_iterations: 120,
            starts: 48,
            center: None,
            radius: None,
            seed: 0,
            dedupe_tolerance: 1e-20,
        }
    }
}

impl SolverConfig {
    pub fn residual_tolerance(&self) -> f64 {
        self.tolerance.unwrap_or_else(|| 2f64.powi(16 - self.precision as i32))
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let tol = self.residual_tolerance();
        if !(tol > 0.0) || !(self.dedupe_tolerance > 0.0) {
            return Err(SolverError::Config("tolerances must be positive".into()));
        }
        if self.dedupe_tolerance <= tol {
            return Err(SolverError::Config(format!(
                "dedupe tolerance {:e} must exceed residual tolerance {tol:e}",
                self.dedupe_tolerance
            )));
        }
        if self.radius.is_some_and(|r| !(r > 0.0)) {
            return Err(SolverError::Config("radius must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Admissibility {
    /// same-color coordinates pairwise distinct
    pub distinct: bool,
    /// no coordinate at a marked point
    pub avoids_z: bool,
    /// coordinates of linked colors (a_ij ≠ 0) distinct
    pub colors_distinct: bool,
}

impl Admissibility {
    pub fn ok(&self) -> bool {
        self.distinct && self.avoids_z && self.colors_distinct
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionRecord {
    pub t: BetheCandidate,
    pub residual: f64,
    pub mu: EigenvalueVector,
    pub admissibility: Admissibility,
    pub precision: usize,
    /// refinement failed to reach the residual target
    pub diverged: bool,
}

fn as_complex(x: &Scalar, prec: usize) -> BigComplex {
    x.to_complex(prec)
}

fn dist(a: &Scalar, b: &Scalar) -> f64 {
    (a - b).abs_f64()
}

pub fn admissibility(inst: &ProblemInstance, t: &BetheCandidate, sep: f64) -> Admissibility {
    let mut a = Admissibility {
        distinct: true,
        avoids_z: true,
        colors_distinct: true,
    };
    for (i, ti) in t.t.iter().enumerate() {
        for (j, x) in ti.iter().enumerate() {
            a.avoids_z &= inst.z.iter().all(|z| dist(x, z) > sep);
            a.distinct &= ti[j + 1..].iter().all(|y| dist(x, y) > sep);
            for (k, tk) in t.t.iter().enumerate().skip(i + 1) {
                if inst.cartan.a(i, k) != 0 {
                    a.colors_distinct &= tk.iter().all(|y| dist(x, y) > sep);
                }
            }
        }
    }
    a
}

/// ∂R_{(i,j)}/∂t_{(s,k)}, rows and columns in flattened order.
fn jacobian(p: &Pairings, z: &[Scalar], cand: &BetheCandidate) -> Result<Matrix, MasterError> {
    let l = cand.l();
    let offs: Vec<usize> = l
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let total = cand.total();
    let mut jm = Matrix::zeros(total, total);
    for (i, ti) in cand.t.iter().enumerate() {
        for (j, x) in ti.iter().enumerate() {
            let row = offs[i] + j;
            let mut diag = Scalar::zero();
            for (s, zs) in z.iter().enumerate() {
                let w = (x - zs)
                    .inv()
                    .map_err(|_| MasterError::HitsMarkedPoint { color: i, index: j, point: s })?;
                diag = &diag + &(&Scalar::Exact(p.lambda_alpha[s][i].clone()) * &(&w * &w));
            }
            for (s, ts) in cand.t.iter().enumerate() {
                let coef = Scalar::Exact(p.alpha[s][i].clone());
                if coef.is_zero() {
                    continue;
                }
                for (k, y) in ts.iter().enumerate() {
                    if s == i && k == j {
                        continue;
                    }
                    let w = (x - y).inv().map_err(|_| MasterError::Collision {
                        color: i,
                        index: j,
                        other_color: s,
                        other_index: k,
                    })?;
                    let d = &coef * &(&w * &w);
                    diag = &diag - &d;
                    jm.set(row, offs[s] + k, d);
                }
            }
            jm.set(row, row, diag);
        }
    }
    Ok(jm)
}

enum Step {
    Converged(BetheCandidate, f64),
    Failed,
}

/// Equation scales g_{ij} = ∏_s (t_{ij} − z_s) and their log-derivatives Σ_s 1/(t_{ij} − z_s).
fn scales(z: &[Scalar], cand: &BetheCandidate) -> Option<Vec<(Scalar, Scalar)>> {
    cand.flatten()
        .iter()
        .map(|x| {
            let mut g = Scalar::one();
            let mut lg = Scalar::zero();
            for zs in z {
                let d = x - zs;
                lg = &lg + &d.inv().ok()?;
                g = &g * &d;
            }
            Some((g, lg))
        })
        .collect()
}

/// Newton on the scaled equations g_{ij}R_{ij} = 0 (same zeros, no escape to infinity where
/// R → 0), stopping when the unscaled residual is at most `tol`. With `damped`, steps are
/// halved until the scaled residual decreases.
fn newton(p: &Pairings, z: &[Scalar], start: BetheCandidate, tol: f64, iters: usize, bound: f64, damped: bool) -> Step {
    let l = start.l();
    let eval = |c: &BetheCandidate| -> Option<(Vec<Scalar>, Vec<Scalar>, f64, f64)> {
        let r = bae_residual_with(p, z, c).ok()?.flatten();
        let sc = scales(z, c)?;
        let g: Vec<Scalar> = r.iter().zip(&sc).map(|(ri, (gi, _))| ri * gi).collect();
        let rn = r.iter().map(Scalar::abs_f64).fold(0.0, f64::max);
        let gn = g.iter().map(Scalar::abs_f64).fold(0.0, f64::max);
        Some((r, g, rn, gn))
    };
    let mut t = start;
    let Some(mut cur) = eval(&t) else {
        return Step::Failed;
    };
    for _ in 0..iters {
        if cur.2 <= tol {
            return Step::Converged(t, cur.2);
        }
        let (Ok(mut jm), Some(sc)) = (jacobian(p, z, &t), scales(z, &t)) else {
            return Step::Failed;
        };
        for (row, (g, lg)) in sc.iter().enumerate() {
            for c in 0..jm.cols() {
                let v = jm.get(row, c) * g;
                jm.set(row, c, v);
            }
            // d/dt_row of g_row
            jm.add_to(row, row, &(&(g * lg) * &cur.0[row]));
        }
        let delta = match jm.solve(&cur.1, 0.0) {
            Ok(Some(d)) => d,
            _ => return Step::Failed,
        };
        let flat = t.flatten();
        let mut lambda = Scalar::one();
        let mut accepted = None;
        for _ in 0..if damped { 30 } else { 1 } {
            let next: Vec<Scalar> = flat.iter().zip(&delta).map(|(x, d)| x - &(&lambda * d)).collect();
            let cand = BetheCandidate::from_flat(&l, &next);
            if let Some(e) = eval(&cand) {
                if !damped || e.3 < cur.3 {
                    accepted = Some((cand, e));
                    break;
                }
            }
            lambda = &lambda * &Scalar::ratio(1, 2);
        }
        let Some((cand, e)) = accepted else {
            return Step::Failed;
        };
        if cand.flatten().iter().any(|x| !(x.abs_f64() <= bound)) {
            return Step::Failed;
        }
        t = cand;
        cur = e;
    }
    if cur.2 <= tol {
        Step::Converged(t, cur.2)
    } else {
        Step::Failed
    }
}

fn sampling_disk(inst: &ProblemInstance, cfg: &SolverConfig) -> ((f64, f64), f64) {
    let pts: Vec<(f64, f64)> = inst.z.iter().map(Scalar::to_f64_pair).collect();
    let n = pts.len().max(1) as f64;
    let centroid = (
        pts.iter().map(|p| p.0).sum::<f64>() / n,
        pts.iter().map(|p| p.1).sum::<f64>() / n,
    );
    let center = cfg.center.unwrap_or(centroid);
    let spread = pts
        .iter()
        .map(|p| ((p.0 - center.0).powi(2) + (p.1 - center.1).powi(2)).sqrt())
        .fold(0.0, f64::max);
    let radius = cfg.radius.unwrap_or(2.0 * if spread > 0.0 { spread } else { 1.0 });
    (center, radius)
}

fn record(inst: &ProblemInstance, t: BetheCandidate, residual: f64, prec: usize, sep: f64) -> Result<SolutionRecord, SolverError> {
    let mu = eigenvalues_from_t(inst, &t)?;
    let admissibility = admissibility(inst, &t, sep);
    Ok(SolutionRecord {
        t,
        residual,
        mu,
        admissibility,
        precision: prec,
        diverged: false,
    })
}

/// Coarse stage precision (bits).
const COARSE_PRECISION: usize = 96;

/// Converged, admissible, deduplicated solutions, sorted canonically.
pub fn solve_bae(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<Vec<SolutionRecord>, SolverError> {
    cfg.validate()?;
    let p = inst.pairings()?;
    let l = inst.l.clone();
    if l.iter().all(|&k| k == 0) {
        let t = BetheCandidate::empty(inst.rank());
        return Ok(vec![record(inst, t, 0.0, cfg.precision, cfg.dedupe_tolerance)?]);
    }
    let ((cx, cy), radius) = sampling_disk(inst, cfg);
    let total: usize = l.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let coarse = COARSE_PRECISION.min(cfg.precision.max(64));
    // in odd starts each root spreads log-uniformly out to 16 radii, for roots far from the points
    let starts: Vec<BetheCandidate> = (0..cfg.starts)
        .map(|k| {
            let flat: Vec<Scalar> = (0..total)
                .map(|_| {
                    let reach = if k % 2 == 1 { 16f64.powf(rng.gen::<f64>()) } else { 1.0 };
                    let r = reach * radius * rng.gen::<f64>().sqrt();
                    let th = std::f64::consts::TAU * rng.gen::<f64>();
                    Scalar::Approx(BigComplex::from_f64(cx + r * th.cos(), cy + r * th.sin(), coarse))
                })
                .collect();
            BetheCandidate::from_flat(&l, &flat)
        })
        .collect();
    let coarse_tol = 2f64.powi(16 - coarse as i32).max(cfg.residual_tolerance());
    let bound = 1e6 * (radius + cx.abs() + cy.abs() + 1.0);
    let run = |s: &BetheCandidate| -> Option<SolutionRecord> {
        let Step::Converged(t, res) = newton(&p, &inst.z, s.clone(), coarse_tol, cfg.max_iterations, bound, true) else {
            return None;
        };
        let rec = record(inst, t, res, coarse, cfg.dedupe_tolerance).ok()?;
        if !rec.admissibility.ok() {
            return None;
        }
        let fine = refine_with(inst, &p, &rec, cfg.precision, cfg.residual_tolerance()).ok()?;
        (!fine.diverged && fine.admissibility.ok()).then_some(fine)
    };
    #[cfg(feature = "parallel")]
    let found: Vec<Option<SolutionRecord>> = {
        use rayon::prelude::*;
        starts.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let found: Vec<Option<SolutionRecord>> = starts.iter().map(run).collect();
    Ok(dedupe_modulo_sl(found.into_iter().flatten().collect(), cfg.dedupe_tolerance))
}

pub fn refine(inst: &ProblemInstance, rec: &SolutionRecord, precision: usize) -> Result<SolutionRecord, SolverError> {
    let p = inst.pairings()?;
    refine_with(inst, &p, rec, precision, 2f64.powi(16 - precision as i32))
}

fn refine_with(
    inst: &ProblemInstance,
    p: &Pairings,
    rec: &SolutionRecord,
    precision: usize,
    tol: f64,
) -> Result<SolutionRecord, SolverError> {
    let sep = 2.0 * tol.max(f64::MIN_POSITIVE);
    if rec.t.is_exact() {
        if let Ok(r) = bae_residual_with(p, &inst.z, &rec.t) {
            if r.is_zero() {
                let mut out = record(inst, rec.t.clone(), 0.0, precision, sep)?;
                out.admissibility = rec.admissibility;
                return Ok(out);
            }
        }
    }
    let t = rec.t.to_numeric(precision);
    let bound = 1e6 * (1.0 + t.flatten().iter().map(Scalar::abs_f64).fold(0.0, f64::max));
    match newton(p, &inst.z, t, tol, 40, bound, false) {
        Step::Converged(t, res) => {
            let mut out = record(inst, t, res, precision, sep)?;
            out.admissibility = rec.admissibility;
            Ok(out)
        }
        Step::Failed => Ok(SolutionRecord {
            diverged: true,
            precision,
            ..rec.clone()
        }),
    }
}

fn canonical(t: &BetheCandidate) -> BetheCandidate {
    BetheCandidate::new(
        t.t.iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_by(|a, b| as_complex(a, 64).cmp_lex(&as_complex(b, 64)));
                c
            })
            .collect(),
    )
}

/// Same S_l-orbit within `tol`: per color, a greedy matching of coordinates.
fn same_orbit(a: &BetheCandidate, b: &BetheCandidate, tol: f64) -> bool {
    a.l() == b.l()
        && a.t.iter().zip(&b.t).all(|(ca, cb)| {
            let mut used = vec![false; cb.len()];
            ca.iter().all(|x| {
                let best = cb
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| !used[*k])
                    .map(|(k, y)| (k, dist(x, y)))
                    .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap_or(Ordering::Equal));
                match best {
                    Some((k, d)) if d <= tol => {
                        used[k] = true;
                        true
                    }
                    _ => false,
                }
            })
        })
}

fn order(a: &SolutionRecord, b: &SolutionRecord) -> Ordering {
    for (x, y) in a.t.flatten().iter().zip(b.t.flatten().iter()) {
        match as_complex(x, 64).cmp_lex(&as_complex(y, 64)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// One canonical representative per orbit (smallest residual kept), sorted.
pub fn dedupe_modulo_sl(records: Vec<SolutionRecord>, tol: f64) -> Vec<SolutionRecord> {
    let mut out: Vec<SolutionRecord> = Vec::new();
    for mut r in records {
        r.t = canonical(&r.t);
        match out.iter_mut().find(|o| same_orbit(&o.t, &r.t, tol)) {
            Some(o) => {
                if r.residual < o.residual {
                    *o = r;
                }
            }
            None => out.push(r),
        }
    }
    out.sort_by(order);
    out
}
