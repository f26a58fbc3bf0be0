//! Equivalent forms of the Bethe ansatz equations: Stieltjes divisibility,
//! the single differential equation with Gaudin eigenvalues, and the sl3 oper.

mod oper;
mod report;

pub use oper::{oper_check, ExponentCheck, OperData, RatFn};
pub use report::{forms_report, FormCheck, FormsInput, FormsReport};

use crate::algebra::{partial_fractions_simple, AlgebraError, Matrix, RootConvention, Scalar, SimplePoleSum, UniPoly};
use crate::cartan::{CartanError, Pairings, ProblemInstance};
use crate::master::{EigenvalueVector, MasterError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormsError {
    #[error("P_{0} is the zero polynomial")]
    ZeroPolynomial(usize),
    #[error("expected {want} polynomials, got {got}")]
    Count { want: usize, got: usize },
    #[error("H has degree {degree}, above the bound {bound}")]
    Degree { degree: usize, bound: usize },
    #[error("P_{color} vanishes at z_{point}")]
    VanishesAtPoint { color: usize, point: usize },
    #[error("μ does not sum to zero")]
    MuSum,
    #[error("the linear system for μ is inconsistent (residual {0:e})")]
    Inconsistent(f64),
    #[error("operation needs rank {want}, instance has rank {got}")]
    Rank { want: usize, got: usize },
    #[error("operation needs a type-A Cartan matrix")]
    NotTypeA,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Master(#[from] MasterError),
}

/// Divisibility data of one color.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorForm {
    pub p: UniPoly,
    pub f: UniPoly,
    pub g: UniPoly,
    /// `None` when F P″ − G P′ is not divisible by P.
    pub h: Option<UniPoly>,
    pub remainder: UniPoly,
    /// T′/T = Σ_s ⟨Λ_s, α^∨⟩/(x − z_s)
    pub log_t: SimplePoleSum,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StieltjesData {
    pub colors: Vec<ColorForm>,
}

impl StieltjesData {
    pub fn divisible(&self) -> bool {
        self.colors.iter().all(|c| c.h.is_some())
    }

    /// First color whose divisibility fails, with its remainder.
    pub fn failure(&self) -> Option<(usize, &UniPoly)> {
        self.colors
            .iter()
            .enumerate()
            .find(|(_, c)| c.h.is_none())
            .map(|(i, c)| (i, &c.remainder))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewFormResidual {
    pub residual: UniPoly,
    pub mu: EigenvalueVector,
}

impl NewFormResidual {
    pub fn vanishes(&self, tol: f64) -> bool {
        self.residual.is_negligible(tol)
    }
}

/// ∏_{k≠s}(x − z_k)
pub(crate) fn f_without(z: &[Scalar], s: usize) -> UniPoly {
    let others: Vec<Scalar> = z
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != s)
        .map(|(_, v)| v.clone())
        .collect();
    UniPoly::from_roots(&others, RootConvention::Monic)
}

pub(crate) fn f_all(z: &[Scalar]) -> UniPoly {
    UniPoly::from_roots(z, RootConvention::Monic)
}

fn product(ps: &[UniPoly], skip: &[usize]) -> UniPoly {
    ps.iter()
        .enumerate()
        .filter(|(k, _)| !skip.contains(k))
        .fold(UniPoly::one(), |acc, (_, p)| acc.mul(p))
}

fn check_polys(inst: &ProblemInstance, ps: &[UniPoly]) -> Result<(), FormsError> {
    if ps.len() != inst.rank() {
        return Err(FormsError::Count { want: inst.rank(), got: ps.len() });
    }
    if let Some(i) = ps.iter().position(UniPoly::is_zero) {
        return Err(FormsError::ZeroPolynomial(i));
    }
    Ok(())
}

/// P_i = ∏_j (t_j^{(i)} − x) for each color.
pub fn polys_from_t(t: &crate::master::BetheCandidate) -> Vec<UniPoly> {
    t.t.iter()
        .map(|c| UniPoly::from_roots(c, RootConvention::Reversed))
        .collect()
}

/// F_i, G_i and the divisibility test of F_i P_i″ − G_i P_i′ by P_i.
pub fn stieltjes_reduce(inst: &ProblemInstance, ps: &[UniPoly], tol: f64) -> Result<StieltjesData, FormsError> {
    check_polys(inst, ps)?;
    let r = inst.rank();
    let z = &inst.z;
    let f0 = f_all(z);
    let mut colors = Vec::with_capacity(r);
    for i in 0..r {
        let neighbours: Vec<usize> = (0..r).filter(|&j| j != i && inst.cartan.a(i, j) < 0).collect();
        let others: Vec<usize> = (0..r).filter(|j| !neighbours.contains(j)).collect();
        let pn = product(ps, &others);
        let f = f0.mul(&pn);
        let m: Vec<Scalar> = inst.weights.m.iter().map(|ms| Scalar::Exact(ms[i].clone())).collect();
        let mut g = UniPoly::zero();
        for (s, ms) in m.iter().enumerate() {
            g = g.add(&f_without(z, s).mul(&pn).scale(ms));
        }
        for &j in &neighbours {
            let mut skip = others.clone();
            skip.push(j);
            let f_over_pj = f0.mul(&product(ps, &skip));
            g = g.sub(&ps[j].derivative().mul(&f_over_pj).scale(&Scalar::int(inst.cartan.a(i, j))));
        }
        let p = &ps[i];
        let lhs = f.mul(&p.derivative().derivative()).sub(&g.mul(&p.derivative()));
        let (q, rem) = lhs.div_rem(p)?;
        let ok = if rem.is_exact() {
            rem.is_zero()
        } else {
            rem.max_abs() <= tol * lhs.max_abs().max(1.0)
        };
        let h = ok.then(|| q.neg());
        colors.push(ColorForm {
            p: p.clone(),
            f,
            g,
            h,
            remainder: rem,
            log_t: SimplePoleSum::new(z.clone(), m)?,
        });
    }
    Ok(StieltjesData { colors })
}

/// μ_s = A_s − c_s with H/F = Σ c_s/(x − z_s) (rank 1).
pub fn mu_from_h(inst: &ProblemInstance, h: &UniPoly) -> Result<EigenvalueVector, FormsError> {
    if inst.rank() != 1 {
        return Err(FormsError::Rank { want: 1, got: inst.rank() });
    }
    let n = inst.n();
    if let Some(d) = h.degree() {
        if d + 2 > n {
            return Err(FormsError::Degree { degree: d, bound: n.saturating_sub(2) });
        }
    }
    let c = partial_fractions_simple(h, &inst.z)?;
    let a = inst.pairings()?.highest_weight_energy(&inst.z);
    Ok(EigenvalueVector {
        mu: a.iter().zip(c.residues()).map(|(a, c)| a - c).collect(),
    })
}

struct NewFormParts {
    /// residual at μ = 0
    base: UniPoly,
    /// coefficient polynomial of −μ_s
    columns: Vec<UniPoly>,
}

fn new_form_parts(inst: &ProblemInstance, p: &Pairings, ps: &[UniPoly]) -> NewFormParts {
    let r = inst.rank();
    let z = &inst.z;
    let f0 = f_all(z);
    let mut base = UniPoly::zero();
    let half = Scalar::ratio(1, 2);
    for i in 0..r {
        let aii = Scalar::Exact(p.alpha[i][i].clone());
        let others = product(ps, &[i]);
        base = base.add(&ps[i].derivative().derivative().mul(&f0).mul(&others).scale(&(&aii * &half)));
        for j in i + 1..r {
            let aij = Scalar::Exact(p.alpha[i][j].clone());
            if aij.is_zero() {
                continue;
            }
            let rest = product(ps, &[i, j]);
            base = base.add(&ps[i].derivative().mul(&ps[j].derivative()).mul(&f0).mul(&rest).scale(&aij));
        }
        let mut tsum = UniPoly::zero();
        for s in 0..z.len() {
            tsum = tsum.add(&f_without(z, s).scale(&Scalar::Exact(p.lambda_alpha[s][i].clone())));
        }
        base = base.sub(&ps[i].derivative().mul(&others).mul(&tsum));
    }
    let all = product(ps, &[]);
    let a = p.highest_weight_energy(z);
    let mut columns = Vec::with_capacity(z.len());
    for (s, a_s) in a.iter().enumerate() {
        let col = all.mul(&f_without(z, s));
        base = base.add(&col.scale(a_s));
        columns.push(col);
    }
    NewFormParts { base, columns }
}

/// The new single equation, cleared by F·∏P_i, at the given μ.
pub fn new_form_residual(
    inst: &ProblemInstance,
    ps: &[UniPoly],
    mu: &EigenvalueVector,
    tol: f64,
) -> Result<NewFormResidual, FormsError> {
    check_polys(inst, ps)?;
    if mu.mu.len() != inst.n() {
        return Err(FormsError::Count { want: inst.n(), got: mu.mu.len() });
    }
    let sum = mu.sum();
    if (sum.is_exact() && !sum.is_zero()) || sum.abs_f64() > tol {
        return Err(FormsError::MuSum);
    }
    let p = inst.pairings()?;
    let parts = new_form_parts(inst, &p, ps);
    let mut residual = parts.base;
    for (col, m) in parts.columns.iter().zip(&mu.mu) {
        residual = residual.sub(&col.scale(m));
    }
    Ok(NewFormResidual { residual, mu: mu.clone() })
}

/// Solves the affine system residual(μ) = 0, Σμ = 0.
pub fn mu_solve(inst: &ProblemInstance, ps: &[UniPoly], tol: f64) -> Result<EigenvalueVector, FormsError> {
    check_polys(inst, ps)?;
    for (i, pi) in ps.iter().enumerate() {
        for (s, zs) in inst.z.iter().enumerate() {
            let v = pi.eval(zs);
            if v.is_zero() || (!v.is_exact() && v.abs_f64() <= tol) {
                return Err(FormsError::VanishesAtPoint { color: i, point: s });
            }
        }
    }
    let p = inst.pairings()?;
    let parts = new_form_parts(inst, &p, ps);
    let n = inst.n();
    let rows = parts
        .columns
        .iter()
        .map(|c| c.coeffs().len())
        .chain([parts.base.coeffs().len()])
        .max()
        .unwrap_or(0);
    let mut a = Matrix::zeros(rows + 1, n);
    let mut b = vec![Scalar::zero(); rows + 1];
    for (s, col) in parts.columns.iter().enumerate() {
        for k in 0..rows {
            a.set(k, s, col.coeff(k));
        }
        a.set(rows, s, Scalar::one());
    }
    for (k, bk) in b.iter_mut().enumerate().take(rows) {
        *bk = parts.base.coeff(k);
    }
    let scale = parts.base.max_abs().max(1.0);
    let sol = a.solve(&b, tol)?.ok_or(FormsError::Inconsistent(f64::NAN))?;
    let mu = EigenvalueVector { mu: sol };
    let res = new_form_residual(inst, ps, &mu, tol.max(1e-300) * scale)?;
    if !res.vanishes(tol * scale) {
        return Err(FormsError::Inconsistent(res.residual.max_abs()));
    }
    Ok(mu)
}

/// μ_s = A_s − Σ_i (Λ_s, α_i) (P_i′/P_i)(z_s), with P_i = ∏(t − x).
pub fn mu_from_polys(inst: &ProblemInstance, ps: &[UniPoly]) -> Result<EigenvalueVector, FormsError> {
    check_polys(inst, ps)?;
    let p = inst.pairings()?;
    let mut mu = p.highest_weight_energy(&inst.z);
    for (s, zs) in inst.z.iter().enumerate() {
        for (i, pi) in ps.iter().enumerate() {
            let v = pi.eval(zs);
            let ratio = pi
                .derivative()
                .eval(zs)
                .checked_div(&v)
                .map_err(|_| FormsError::VanishesAtPoint { color: i, point: s })?;
            mu[s] = &mu[s] - &(&Scalar::Exact(p.lambda_alpha[s][i].clone()) * &ratio);
        }
    }
    Ok(EigenvalueVector { mu })
}

/// Dimension of the space of polynomial P of degree ≤ `degree` solving
/// F P″ − G P′ + H P = 0 (rank 1, G = F·T′/T).
pub fn stieltjes_solution_dimension(
    inst: &ProblemInstance,
    h: &UniPoly,
    degree: usize,
    tol: f64,
) -> Result<usize, FormsError> {
    if inst.rank() != 1 {
        return Err(FormsError::Rank { want: 1, got: inst.rank() });
    }
    let z = &inst.z;
    let f = f_all(z);
    let mut g = UniPoly::zero();
    for (s, ms) in inst.weights.m.iter().enumerate() {
        g = g.add(&f_without(z, s).scale(&Scalar::Exact(ms[0].clone())));
    }
    let images: Vec<UniPoly> = (0..=degree)
        .map(|k| {
            let mut c = vec![Scalar::zero(); k + 1];
            c[k] = Scalar::one();
            let xk = UniPoly::new(c);
            f.mul(&xk.derivative().derivative())
                .sub(&g.mul(&xk.derivative()))
                .add(&h.mul(&xk))
        })
        .collect();
    let rows = images.iter().map(|p| p.coeffs().len()).max().unwrap_or(0).max(1);
    let mut m = Matrix::zeros(rows, degree + 1);
    for (k, im) in images.iter().enumerate() {
        for j in 0..rows {
            m.set(j, k, im.coeff(j));
        }
    }
    Ok(m.nullspace(tol).len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    pub(crate) fn running() -> ProblemInstance {
        ProblemInstance::type_a(
            vec![vec![Rational::ONE], vec![Rational::ONE]],
            vec![Scalar::int(0), Scalar::int(1)],
            vec![1],
        )
        .unwrap()
    }

    fn p_of(root: Scalar) -> UniPoly {
        UniPoly::from_roots(&[root], RootConvention::Reversed)
    }

    #[test]
    fn running_example_chain() {
        let inst = running();
        let ps = vec![p_of(Scalar::ratio(1, 2))];
        let st = stieltjes_reduce(&inst, &ps, 0.0).unwrap();
        let c = &st.colors[0];
        assert_eq!(c.f, UniPoly::new(vec![Scalar::int(0), Scalar::int(-1), Scalar::int(1)]));
        assert_eq!(c.g, UniPoly::new(vec![Scalar::int(-1), Scalar::int(2)]));
        assert_eq!(c.h, Some(UniPoly::constant(Scalar::int(2))));
        let mu = mu_from_h(&inst, c.h.as_ref().unwrap()).unwrap();
        assert_eq!(mu.mu, vec![Scalar::ratio(3, 2), Scalar::ratio(-3, 2)]);
        assert!(new_form_residual(&inst, &ps, &mu, 0.0).unwrap().residual.is_zero());
        assert_eq!(mu_solve(&inst, &ps, 0.0).unwrap(), mu);
        assert_eq!(mu_from_polys(&inst, &ps).unwrap(), mu);
        let off = EigenvalueVector { mu: vec![Scalar::int(1), Scalar::int(-1)] };
        assert!(!new_form_residual(&inst, &ps, &off, 0.0).unwrap().residual.is_zero());
    }

    #[test]
    fn non_solution_fails() {
        let inst = running();
        let ps = vec![p_of(Scalar::ratio(1, 3))];
        let st = stieltjes_reduce(&inst, &ps, 0.0).unwrap();
        let (color, rem) = st.failure().unwrap();
        assert_eq!(color, 0);
        // remainder of F P″ − G P′ by P is the constant G(1/3)·1
        assert_eq!(rem, &UniPoly::constant(Scalar::ratio(-1, 3)));
        assert!(matches!(mu_solve(&inst, &ps, 0.0), Err(FormsError::Inconsistent(_))));
    }

    #[test]
    fn trivial_polys() {
        let inst = running().with_l(vec![0]);
        let ps = vec![UniPoly::one()];
        let st = stieltjes_reduce(&inst, &ps, 0.0).unwrap();
        assert_eq!(st.colors[0].h, Some(UniPoly::zero()));
        let a = inst.pairings().unwrap().highest_weight_energy(&inst.z);
        let mu = EigenvalueVector { mu: a };
        assert!(new_form_residual(&inst, &ps, &mu, 0.0).unwrap().residual.is_zero());
        assert!(matches!(stieltjes_reduce(&inst, &[UniPoly::zero()], 0.0), Err(FormsError::ZeroPolynomial(0))));
    }

    #[test]
    fn mu_from_h_degree_bound() {
        let inst = running();
        assert!(matches!(mu_from_h(&inst, &UniPoly::x()), Err(FormsError::Degree { .. })));
        let mu = mu_from_h(&inst, &UniPoly::zero()).unwrap();
        assert_eq!(mu.mu, vec![Scalar::ratio(-1, 2), Scalar::ratio(1, 2)]);
    }

    #[test]
    fn uniqueness_one_dimensional() {
        // m = (1/3, 1), z = (0, 1), l = 1; t solves 1/3/t + 1/(t−1) = 0 ⇒ t = 1/4.
        let q = |n: i64, d: i64| Rational::from_parts_signed(n.into(), d.into());
        let inst = ProblemInstance::type_a(vec![vec![q(1, 3)], vec![q(1, 1)]], vec![Scalar::int(0), Scalar::int(1)], vec![1])
            .unwrap();
        let ps = vec![p_of(Scalar::ratio(1, 4))];
        let st = stieltjes_reduce(&inst, &ps, 0.0).unwrap();
        let h = st.colors[0].h.clone().unwrap();
        assert_eq!(stieltjes_solution_dimension(&inst, &h, 1, 0.0).unwrap(), 1);
    }
}
