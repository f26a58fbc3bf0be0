//! The sl3 grading by x₃-degree, the diagonal y₁ = y₂, and Ψ in separated coordinates.

use std::collections::BTreeMap;

use crate::algebra::{poly_roots_scalar, MultiPoly, Scalar, UniPoly, Vars};
use crate::cartan::ProblemInstance;
use crate::master::{BetheCandidate, EigenvalueVector};
use crate::rep::{DiffOp, PolyModel, WeightSpace};

use super::{
    clearing, compose_with_change, model_for, sample_points, univariate_in, uy_to_x, uy_vars, y_index,
    SeparationPoint, SovError,
};

#[derive(Clone, Debug, PartialEq)]
pub struct GradedComponent {
    pub degree: u32,
    pub poly: MultiPoly,
}

fn is_x3(name: &str) -> bool {
    name.starts_with("x3_")
}

fn x3_degree(vars: &Vars, e: &[u32]) -> u32 {
    vars.names()
        .iter()
        .zip(e)
        .filter(|(n, _)| is_x3(n))
        .map(|(_, &k)| k)
        .sum()
}

/// Split by total x₃-degree, lowest first.
pub fn degree_decompose(f: &MultiPoly) -> Vec<GradedComponent> {
    let vars = f.vars().clone();
    let mut parts: BTreeMap<u32, Vec<(Vec<u32>, Scalar)>> = BTreeMap::new();
    for (e, c) in f.terms() {
        parts.entry(x3_degree(&vars, e)).or_default().push((e.clone(), c.clone()));
    }
    parts
        .into_iter()
        .map(|(degree, terms)| GradedComponent {
            degree,
            poly: MultiPoly::from_terms(&vars, terms),
        })
        .collect()
}

fn rank_two(inst: &ProblemInstance) -> Result<PolyModel, SovError> {
    if inst.rank() != 2 {
        return Err(SovError::Rank { want: 2, got: inst.rank() });
    }
    model_for(inst)
}

/// Outcome of the grading and diagonal identities on one weight space.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedCheck {
    pub monomials: usize,
    pub samples: usize,
    /// Ω₀, Ω̃₀ keep d, Ω_{>0} raises it by one, Ω_{<0} lowers it by one
    pub grading: bool,
    /// Ω̃₀ and Ω_{<0} kill x₃-free monomials
    pub annihilation: bool,
    /// Ω_{<0}F vanishes on the diagonal
    pub diagonal: bool,
    /// (ΩF)₀ = Ω₀F₀ on the diagonal
    pub leading: bool,
}

impl GradedCheck {
    pub fn holds(&self) -> bool {
        self.grading && self.annihilation && self.diagonal && self.leading
    }
}

fn graded_table(model: &PolyModel) -> Result<Vec<((usize, usize), [DiffOp; 4])>, SovError> {
    let n = model.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(((i, j), model.casimir_graded(i, j)?));
            }
        }
    }
    Ok(out)
}

fn diagonal_x(inst: &ProblemInstance, samples: usize, seed: u64) -> Result<Vec<Vec<Scalar>>, SovError> {
    sample_points(inst, samples, seed, true, &[])?
        .iter()
        .map(|p| uy_to_x(inst, p))
        .collect()
}

pub fn graded_casimir_checks(
    inst: &ProblemInstance,
    l: &[usize],
    samples: usize,
    seed: u64,
) -> Result<GradedCheck, SovError> {
    let model = rank_two(inst)?;
    let space = WeightSpace::new(inst, l)?;
    let vars = model.vars().clone();
    let table = graded_table(&model)?;
    let points = diagonal_x(inst, samples, seed)?;
    let mut check = GradedCheck {
        monomials: space.dim(),
        samples,
        grading: true,
        annihilation: true,
        diagonal: true,
        leading: true,
    };
    let shifts = [0i64, 0, 1, -1];
    for b in space.basis() {
        let e = model.monomial(b);
        let f = MultiPoly::monomial(&vars, e.clone(), Scalar::one());
        let d = x3_degree(&vars, &e) as i64;
        for (_, parts) in &table {
            for (op, &s) in parts.iter().zip(&shifts) {
                let g = op.apply(&f);
                check.grading &= g.terms().all(|(ge, _)| x3_degree(&vars, ge) as i64 == d + s);
            }
            if d == 0 {
                check.annihilation &= parts[1].apply(&f).is_zero() && parts[3].apply(&f).is_zero();
            }
            let low = parts[3].apply(&f);
            check.diagonal &= points.iter().all(|x| low.eval(x).is_zero());
        }
    }
    // a generic element of M[l] with components in every degree
    let mut generic = MultiPoly::zero(&vars);
    for (k, b) in space.basis().iter().enumerate() {
        let c = Scalar::ratio(((k * 7 + 3) % 11) as i64 - 5, (k % 4 + 1) as i64);
        generic = generic.add(&MultiPoly::monomial(&vars, model.monomial(b), c));
    }
    check.leading = diagonal_leading_term(inst, &generic, samples, seed ^ 0x9e37)?;
    Ok(check)
}

/// (Ω^{(ij)}F)₀|_D = (Ω₀^{(ij)}F₀)|_D for all ordered pairs, at seeded diagonal samples.
pub fn diagonal_leading_term(inst: &ProblemInstance, f: &MultiPoly, samples: usize, seed: u64) -> Result<bool, SovError> {
    let model = rank_two(inst)?;
    let points = diagonal_x(inst, samples, seed)?;
    let f0 = degree_decompose(f)
        .into_iter()
        .find(|c| c.degree == 0)
        .map_or_else(|| MultiPoly::zero(model.vars()), |c| c.poly);
    for ((i, j), parts) in graded_table(&model)? {
        let full = model.casimir(i, j).apply(f);
        let full0 = degree_decompose(&full)
            .into_iter()
            .find(|c| c.degree == 0)
            .map_or_else(|| MultiPoly::zero(model.vars()), |c| c.poly);
        let lead = parts[0].apply(&f0);
        if points.iter().any(|x| full0.eval(x) != lead.eval(x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Comparison of the Gaudin side with the separated operator on the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationVerdict {
    pub degree_bound: u32,
    pub samples: usize,
    pub first_failure: Option<usize>,
    pub max_deviation: f64,
    /// coefficient-wise comparison of the cleared, restricted polynomials
    pub symbolic: bool,
    /// largest value of either side over all samples
    pub magnitude: f64,
}

impl SeparationVerdict {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none() && self.symbolic
    }
}

/// ∏_k A₁(t_k^{(1)}) ∏_m A₂(t_m^{(2)}) / ∏_s P₁(z_s)P₂(z_s) as an x-polynomial,
/// A_c(t) = Σ_i x_c^{(i)} ∏_{s≠i}(t − z_s).
fn psi_zero_x(model: &PolyModel, inst: &ProblemInstance, t: &BetheCandidate) -> Result<MultiPoly, SovError> {
    let vars = model.vars();
    let mut f = MultiPoly::one(vars);
    let mut den = Scalar::one();
    for c in 0..2 {
        for tk in &t.t[c] {
            let mut a = MultiPoly::zero(vars);
            for i in 0..inst.n() {
                let w = clearing(&inst.z, Some(i)).eval(tk);
                a = a.add(&MultiPoly::var(vars, model.var(c + 1, i)).scale(&w));
            }
            f = f.mul(&a);
            for z in &inst.z {
                den = &den * &(tk - z);
            }
        }
    }
    let inv = den
        .inv()
        .map_err(|_| SovError::Pole("P(z_s) = 0".into()))?;
    Ok(f.scale(&inv))
}

/// Ψ₀ = u₁^{l₁}u₂^{l₂} ∏_j P₁(y₁^{(j)})P₂(y₂^{(j)}) / ∏_s P₁(z_s)P₂(z_s) in (u, y), P_c(x) = ∏(t − x).
pub fn psi_zero_poly(inst: &ProblemInstance, t: &BetheCandidate) -> Result<MultiPoly, SovError> {
    if inst.rank() != 2 || t.t.len() != 2 {
        return Err(SovError::Rank { want: 2, got: inst.rank() });
    }
    let n = inst.n();
    let vars = uy_vars(2, n)?;
    let mut f = MultiPoly::one(&vars);
    let mut den = Scalar::one();
    for c in 0..2 {
        let p = UniPoly::from_roots(&t.t[c], crate::algebra::RootConvention::Reversed);
        f = f.mul(&MultiPoly::var(&vars, c).pow(t.t[c].len() as u32));
        for j in 0..n - 1 {
            f = f.mul(&univariate_in(&vars, y_index(2, c, j), &p));
        }
        for z in &inst.z {
            den = &den * &p.eval(z);
        }
    }
    let inv = den
        .inv()
        .map_err(|_| SovError::Pole("P(z_s) = 0".into()))?;
    Ok(f.scale(&inv))
}

/// Move every y₂ exponent onto y₁ (restriction to y₁ = y₂).
fn restrict_diagonal(p: &MultiPoly) -> MultiPoly {
    let vars = p.vars().clone();
    let m = (vars.len() - 3) / 3;
    MultiPoly::from_terms(
        &vars,
        p.terms().map(|(e, c)| {
            let mut e = e.clone();
            for j in 0..m {
                let (a, b) = (y_index(2, 0, j), y_index(2, 1, j));
                e[a] += e[b];
                e[b] = 0;
            }
            (e, c.clone())
        }),
    )
}

fn close(a: &Scalar, b: &Scalar, tol: f64) -> (bool, f64) {
    let d = (a - b).abs_f64();
    if a.is_exact() && b.is_exact() {
        return (a == b, d);
    }
    let scale = a.abs_f64().max(b.abs_f64()).max(1.0);
    (d <= tol * scale, d / scale)
}

/// Checks, on the diagonal, the Ω₀-built Gaudin side Σ_i (H_i⁰ − μ_i)F₀ / (y₁^{(j)} − z_i)
/// against f₁₁ − f₁₂ + f₂₂ − f₁Σm₁/(y₁−z) − f₂Σm₂/(y₁−z) + fΣ(A − μ)/(y₁−z), f₁ = ∂/∂y₁^{(j)},
/// f₂ = ∂/∂y₂^{(j)}, for every j. Samples must lie on the diagonal.
pub fn verify_separation_sl3(
    inst: &ProblemInstance,
    t: &BetheCandidate,
    mu: &EigenvalueVector,
    samples: &[SeparationPoint],
    tol: f64,
) -> Result<SeparationVerdict, SovError> {
    let model = rank_two(inst)?;
    let n = inst.n();
    if t.l() != inst.l {
        return Err(SovError::Shape(format!("candidate sizes {:?} vs l {:?}", t.l(), inst.l)));
    }
    if mu.mu.len() != n {
        return Err(SovError::Shape(format!("{} eigenvalues for {n} points", mu.mu.len())));
    }
    let degree_bound = (n * (inst.l[0] + inst.l[1]) + n - 1) as u32;
    if samples.len() as u64 <= degree_bound as u64 {
        return Err(SovError::InsufficientSamples {
            samples: samples.len(),
            bound: degree_bound,
        });
    }
    if let Some(k) = samples.iter().position(|p| !p.is_diagonal()) {
        return Err(SovError::Shape(format!("sample {k} is off the diagonal")));
    }
    let p = inst.pairings()?;
    let a = p.highest_weight_energy(&inst.z);
    let m = |i: usize, c: usize| Scalar::Exact(p.lambda_alpha[i][c].clone());

    // Gaudin side in x
    let table = graded_table(&model)?;
    let mut g = vec![MultiPoly::zero(model.vars()); n];
    let f0x = psi_zero_x(&model, inst, t)?;
    for ((i, j), parts) in &table {
        let w = (&inst.z[*i] - &inst.z[*j])
            .inv()
            .map_err(|_| SovError::Pole(format!("z_{} = z_{}", i + 1, j + 1)))?;
        g[*i] = g[*i].add(&parts[0].apply(&f0x).scale(&w));
    }
    for i in 0..n {
        g[i] = g[i].sub(&f0x.scale(&mu.mu[i]));
    }

    // separated side in (u, y)
    let f = psi_zero_poly(inst, t)?;
    let vars = f.vars().clone();
    let derivs: Vec<[MultiPoly; 5]> = (0..n - 1)
        .map(|j| {
            let (y1, y2) = (y_index(2, 0, j), y_index(2, 1, j));
            let f1 = f.derive(y1);
            let f2 = f.derive(y2);
            [f1.derive(y1), f1.derive(y2), f2.derive(y2), f1, f2]
        })
        .collect();

    let mut verdict = SeparationVerdict {
        degree_bound,
        samples: samples.len(),
        first_failure: None,
        max_deviation: 0.0,
        symbolic: true,
        magnitude: 0.0,
    };
    for (k, pt) in samples.iter().enumerate() {
        let x = uy_to_x(inst, pt)?;
        let flat = pt.flatten();
        let gv: Vec<Scalar> = g.iter().map(|gi| gi.eval(&x)).collect();
        let mut ok = true;
        for (j, d) in derivs.iter().enumerate() {
            let y = &pt.y[0][j];
            let mut lhs = Scalar::zero();
            let (mut s1, mut s2, mut s0) = (Scalar::zero(), Scalar::zero(), Scalar::zero());
            for i in 0..n {
                let r = (y - &inst.z[i])
                    .inv()
                    .map_err(|_| SovError::Pole(format!("y_1^({}) = z_{}", j + 1, i + 1)))?;
                lhs = &lhs + &(&gv[i] * &r);
                s1 = &s1 + &(&m(i, 0) * &r);
                s2 = &s2 + &(&m(i, 1) * &r);
                s0 = &s0 + &(&(&a[i] - &mu.mu[i]) * &r);
            }
            let ev: Vec<Scalar> = d.iter().map(|q| q.eval(&flat)).collect();
            let rhs = &(&(&(&ev[0] - &ev[1]) + &ev[2]) - &(&ev[3] * &s1)) - &(&ev[4] * &s2);
            let rhs = &rhs + &(&f.eval(&flat) * &s0);
            verdict.magnitude = verdict.magnitude.max(lhs.abs_f64()).max(rhs.abs_f64());
            let (good, dev) = close(&lhs, &rhs, tol);
            verdict.max_deviation = verdict.max_deviation.max(dev);
            ok &= good;
        }
        if !ok && verdict.first_failure.is_none() {
            verdict.first_failure = Some(k);
        }
    }

    // coefficient-wise identity after clearing ∏(y₁^{(j)} − z)
    let transported: Vec<MultiPoly> = g
        .iter()
        .map(|gi| compose_with_change(inst, gi))
        .collect::<Result<_, _>>()?;
    for (j, d) in derivs.iter().enumerate() {
        let y1 = y_index(2, 0, j);
        let q = univariate_in(&vars, y1, &clearing(&inst.z, None));
        let mut lhs = MultiPoly::zero(&vars);
        let mut rhs = q.mul(&d[0].sub(&d[1]).add(&d[2]));
        for i in 0..n {
            let c = univariate_in(&vars, y1, &clearing(&inst.z, Some(i)));
            lhs = lhs.add(&c.mul(&transported[i]));
            rhs = rhs
                .sub(&c.mul(&d[3]).scale(&m(i, 0)))
                .sub(&c.mul(&d[4]).scale(&m(i, 1)))
                .add(&c.mul(&f).scale(&(&a[i] - &mu.mu[i])));
        }
        let diff = restrict_diagonal(&lhs.sub(&rhs));
        verdict.symbolic &= if diff.is_exact() {
            diff.is_zero()
        } else {
            diff.max_abs() <= tol * lhs.max_abs().max(rhs.max_abs()).max(1.0)
        };
    }
    Ok(verdict)
}

/// One Ξ_{(k,m)} term; `k` and `m` are 0-based ordered index vectors of equal length.
#[derive(Clone, Debug, PartialEq)]
pub struct XiTerm {
    pub k: Vec<usize>,
    pub m: Vec<usize>,
    pub value: Scalar,
}

fn xi_factor(a: &Scalar, b: &Scalar, z: &[Scalar], point: &SeparationPoint) -> Result<Scalar, SovError> {
    let pole = |what: &str| SovError::Pole(what.to_string());
    let mut v = (b - a).inv().map_err(|_| pole("t^(2) = t^(1)"))?;
    for j in 0..point.y[0].len() {
        let num = a - &point.y[2][j];
        let den = &(a - &point.y[0][j]) * &(b - &point.y[1][j]);
        v = &v * &num.checked_div(&den).map_err(|_| pole("t = y"))?;
    }
    for zs in z {
        v = &v * &(b - zs);
    }
    Ok(v)
}

pub fn psi_term(
    t: &BetheCandidate,
    z: &[Scalar],
    point: &SeparationPoint,
    k: &[usize],
    m: &[usize],
) -> Result<XiTerm, SovError> {
    if k.len() != m.len() {
        return Err(SovError::Shape("|k| ≠ |m|".into()));
    }
    let mut value = Scalar::one();
    for (&ka, &ma) in k.iter().zip(m) {
        let (a, b) = (
            t.t[0].get(ka).ok_or_else(|| SovError::Shape(format!("k = {ka}")))?,
            t.t[1].get(ma).ok_or_else(|| SovError::Shape(format!("m = {ma}")))?,
        );
        value = &value * &xi_factor(a, b, z, point)?;
    }
    Ok(XiTerm {
        k: k.to_vec(),
        m: m.to_vec(),
        value,
    })
}

/// Ordered tuples of d distinct indices below `n`.
fn arrangements(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::new();
        for p in &out {
            for i in (0..n).filter(|i| !p.contains(i)) {
                let mut q = p.clone();
                q.push(i);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Ψ degree by degree: entry d is Ψ₀·(1/d!)(u₃/(u₁u₂))^d Σ_{d-admissible} Ξ.
pub fn psi_components(
    inst: &ProblemInstance,
    t: &BetheCandidate,
    point: &SeparationPoint,
) -> Result<Vec<Scalar>, SovError> {
    let psi0 = psi_zero_poly(inst, t)?.eval(&point.flatten());
    let (l1, l2) = (t.t[0].len(), t.t[1].len());
    let ratio = point.u[2]
        .checked_div(&(&point.u[0] * &point.u[1]))
        .map_err(|_| SovError::Pole("u₁u₂ = 0".into()))?;
    let mut out = vec![psi0.clone()];
    let mut fact = 1i64;
    for d in 1..=l1.min(l2) {
        fact *= d as i64;
        let mut s = Scalar::zero();
        for k in arrangements(l1, d) {
            for m in arrangements(l2, d) {
                s = &s + &psi_term(t, &inst.z, point, &k, &m)?.value;
            }
        }
        let w = &ratio.pow(d as u32) * &Scalar::ratio(1, fact);
        out.push(&(&psi0 * &w) * &s);
    }
    Ok(out)
}

/// Ψ(t, z, u, y).
pub fn psi_separated(inst: &ProblemInstance, t: &BetheCandidate, point: &SeparationPoint) -> Result<Scalar, SovError> {
    Ok(psi_components(inst, t, point)?
        .iter()
        .fold(Scalar::zero(), |a, b| &a + b))
}

/// Recovers t from the univariate factors of Ψ₀ (numerically, at `prec` bits) and rebuilds
/// every component of Ψ at `point`.
pub fn reconstruct_psi_terms(
    inst: &ProblemInstance,
    psi0: &MultiPoly,
    point: &SeparationPoint,
    prec: usize,
) -> Result<Vec<Scalar>, SovError> {
    if inst.rank() != 2 || inst.n() < 2 {
        return Err(SovError::Shape("need sl3 with at least two points".into()));
    }
    let base = sample_points(inst, 1, 0x5eed, false, &[])?.remove(0).flatten();
    let single = Vars::new(["s"]);
    let mut t = Vec::with_capacity(2);
    for c in 0..2 {
        let free = y_index(2, c, 0);
        let images: Vec<MultiPoly> = (0..base.len())
            .map(|v| {
                if v == free {
                    MultiPoly::var(&single, 0)
                } else {
                    MultiPoly::constant(&single, base[v].clone())
                }
            })
            .collect();
        let restricted = psi0.substitute(&images)?;
        let coeffs: Vec<Scalar> = (0..=restricted.total_degree())
            .map(|k| restricted.coefficient(&[k]))
            .collect();
        let p = UniPoly::new(coeffs);
        t.push(match p.degree() {
            None | Some(0) => Vec::new(),
            Some(1) => vec![(-&p.coeff(0)).checked_div(&p.coeff(1))?],
            Some(_) => poly_roots_scalar(&p, prec)?,
        });
    }
    psi_components(inst, &BetheCandidate::new(t), point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use crate::canonical::canonical_vector;
    use crate::master::{bae_residual, eigenvalues_from_t};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_parts_signed(n.into(), d.into())
    }

    fn instance(m: &[[(i64, i64); 2]], z: &[(i64, i64)], l: [usize; 2]) -> ProblemInstance {
        ProblemInstance::type_a(
            m.iter().map(|w| w.iter().map(|&(a, b)| q(a, b)).collect()).collect(),
            z.iter().map(|&(a, b)| Scalar::ratio(a, b)).collect(),
            l.to_vec(),
        )
        .unwrap()
    }

    fn rational_t(l: [usize; 2]) -> BetheCandidate {
        let pool = [(2, 7), (-5, 3), (9, 4), (-1, 6)];
        BetheCandidate::new(vec![
            (0..l[0]).map(|k| Scalar::ratio(pool[k].0, pool[k].1)).collect(),
            (0..l[1]).map(|k| Scalar::ratio(pool[k + 2].0, pool[k + 2].1)).collect(),
        ])
    }

    #[test]
    fn decompose_examples() {
        let inst = instance(&[[(1, 1), (1, 1)]; 2], &[(0, 1), (1, 1)], [1, 1]);
        let model = model_for(&inst).unwrap();
        let v = model.vars().clone();
        let x1 = MultiPoly::var(&v, model.var(1, 0));
        let x2 = MultiPoly::var(&v, model.var(2, 0));
        let x3 = MultiPoly::var(&v, model.var(3, 0));
        let parts = degree_decompose(&x1.mul(&x2));
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].degree, 0);
        assert_eq!(degree_decompose(&x3)[0].degree, 1);
        let f = x1.mul(&x2).add(&x3);
        let parts = degree_decompose(&f);
        assert_eq!(parts.iter().map(|c| c.degree).collect::<Vec<_>>(), vec![0, 1]);
        let sum = parts.iter().fold(MultiPoly::zero(&v), |a, c| a.add(&c.poly));
        assert_eq!(sum, f);
    }

    #[test]
    fn grading_identities() {
        for (n, l) in [(2, [1, 1]), (2, [2, 1]), (3, [1, 1]), (3, [2, 2])] {
            let m: Vec<[(i64, i64); 2]> = (0..n).map(|i| [(i as i64 + 1, 2), (-1, 3 + i as i64)]).collect();
            let z: Vec<(i64, i64)> = (0..n).map(|i| (2 * i as i64 - 1, i as i64 + 1)).collect();
            let inst = instance(&m, &z, l);
            let c = graded_casimir_checks(&inst, &l, 4, 11).unwrap();
            assert!(c.holds(), "n={n} l={l:?}: {c:?}");
        }
    }

    #[test]
    fn psi_cross_check() {
        for (n, l) in [(2, [1, 1]), (2, [2, 1]), (3, [1, 2]), (2, [2, 2])] {
            let m: Vec<[(i64, i64); 2]> = (0..n).map(|i| [(i as i64 + 2, 3), (1, i as i64 + 1)]).collect();
            let z: Vec<(i64, i64)> = (0..n).map(|i| (3 * i as i64 - 2, 2)).collect();
            let inst = instance(&m, &z, l);
            let t = rational_t(l);
            let model = model_for(&inst).unwrap();
            let space = WeightSpace::new(&inst, &l).unwrap();
            let psi = model.polynomial_of(&space, &canonical_vector(&inst, &t).unwrap()).unwrap();
            let avoid: Vec<Scalar> = t.flatten();
            for p in sample_points(&inst, 6, 5, false, &avoid).unwrap() {
                let x = uy_to_x(&inst, &p).unwrap();
                assert_eq!(psi.eval(&x), psi_separated(&inst, &t, &p).unwrap(), "n={n} l={l:?}");
            }
        }
    }

    #[test]
    fn psi_u3_zero_and_single_term() {
        let inst = instance(&[[(1, 1), (1, 1)]; 2], &[(0, 1), (1, 1)], [1, 1]);
        let t = rational_t([1, 1]);
        let mut p = sample_points(&inst, 1, 2, false, &t.flatten()).unwrap().remove(0);
        let comps = psi_components(&inst, &t, &p).unwrap();
        // Ψ₁ = Ψ₀ (u₃/(u₁u₂)) (t₁ − y₃)/((t₁ − y₁)(t₂ − y₂)) (t₂ − z₁)(t₂ − z₂)/(t₂ − t₁)
        let (t1, t2) = (&t.t[0][0], &t.t[1][0]);
        let (y1, y2, y3) = (&p.y[0][0], &p.y[1][0], &p.y[2][0]);
        let xi = &(&(t1 - y3) * &(&(t2 - &inst.z[0]) * &(t2 - &inst.z[1])))
            * &(&(&(t1 - y1) * &(t2 - y2)) * &(t2 - t1)).inv().unwrap();
        let want = &(&comps[0] * &p.u[2].checked_div(&(&p.u[0] * &p.u[1])).unwrap()) * &xi;
        assert_eq!(comps[1], want);
        p.u[2] = Scalar::zero();
        assert_eq!(psi_separated(&inst, &t, &p).unwrap(), psi_components(&inst, &t, &p).unwrap()[0]);
    }

    #[test]
    fn psi_reconstruction() {
        let inst = instance(&[[(1, 2), (2, 1)], [(3, 1), (1, 3)], [(1, 1), (1, 1)]], &[(0, 1), (1, 1), (-2, 1)], [2, 2]);
        let t = rational_t([2, 2]);
        let psi0 = psi_zero_poly(&inst, &t).unwrap();
        let p = sample_points(&inst, 1, 9, false, &t.flatten()).unwrap().remove(0);
        let direct = psi_components(&inst, &t, &p).unwrap();
        let rebuilt = reconstruct_psi_terms(&inst, &psi0, &p, 256).unwrap();
        for (a, b) in direct.iter().zip(&rebuilt) {
            assert!((a - b).abs_f64() <= 1e-50 * a.abs_f64().max(1.0));
        }
    }

    #[test]
    fn separation_identity_generic() {
        for (n, l) in [(2, [0, 0]), (2, [1, 1]), (2, [2, 1]), (3, [1, 1])] {
            let m: Vec<[(i64, i64); 2]> = (0..n).map(|i| [(i as i64 + 1, 3), (2, i as i64 + 1)]).collect();
            let z: Vec<(i64, i64)> = (0..n).map(|i| (i as i64 * 5 - 3, 2)).collect();
            let inst = instance(&m, &z, l);
            let t = rational_t(l);
            let mu = EigenvalueVector {
                mu: (0..n).map(|i| Scalar::ratio(i as i64 * 4 - 3, 7)).collect(),
            };
            let bound = (n * (l[0] + l[1]) + n - 1) + 1;
            let pts = sample_points(&inst, bound, 1, true, &t.flatten()).unwrap();
            let v = verify_separation_sl3(&inst, &t, &mu, &pts, 0.0).unwrap();
            assert!(v.holds(), "n={n} l={l:?}: {v:?}");
            assert!(verify_separation_sl3(&inst, &t, &mu, &pts[1..], 0.0).is_err());
        }
    }

    #[test]
    fn separation_at_critical_point() {
        // m = ((1,3),(2,1)), z = (0,1), t = ((1/3),(t₂)) with t₂ solving the second equation
        let inst = instance(&[[(1, 1), (0, 1)], [(0, 1), (1, 1)]], &[(0, 1), (1, 1)], [1, 1]);
        // search a rational critical point among small candidates
        let cands = [(1, 3), (2, 3), (1, 2), (1, 4), (3, 4), (-1, 1), (2, 1)];
        let mut found = None;
        for a in cands {
            for b in cands {
                let t = BetheCandidate::new(vec![vec![Scalar::ratio(a.0, a.1)], vec![Scalar::ratio(b.0, b.1)]]);
                if bae_residual(&inst, &t).map(|r| r.is_zero()).unwrap_or(false) {
                    found = Some(t);
                }
            }
        }
        let t = found.expect("rational critical point");
        let mu = eigenvalues_from_t(&inst, &t).unwrap();
        let pts = sample_points(&inst, 6, 4, true, &t.flatten()).unwrap();
        let v = verify_separation_sl3(&inst, &t, &mu, &pts, 0.0).unwrap();
        assert!(v.holds() && v.magnitude == 0.0, "{v:?}");
    }
}
