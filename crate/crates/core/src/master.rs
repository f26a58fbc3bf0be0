//! Logarithmic gradients of the master function: Bethe residuals in t and
//! eigenvalues in z.

use crate::algebra::{Rational, Scalar};
use crate::cartan::{CartanError, Pairings, ProblemInstance};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MasterError {
    #[error("t^({color})_{index} coincides with z_{point}")]
    HitsMarkedPoint { color: usize, index: usize, point: usize },
    #[error("t^({color})_{index} coincides with t^({other_color})_{other_index}")]
    Collision {
        color: usize,
        index: usize,
        other_color: usize,
        other_index: usize,
    },
    #[error("candidate shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// Grouped Bethe variables, one list per color (indices 0-based in code).
#[derive(Clone, Debug, PartialEq)]
pub struct BetheCandidate {
    pub t: Vec<Vec<Scalar>>,
}

impl BetheCandidate {
    pub fn new(t: Vec<Vec<Scalar>>) -> Self {
        BetheCandidate { t }
    }

    pub fn empty(rank: usize) -> Self {
        BetheCandidate { t: vec![Vec::new(); rank] }
    }

    pub fn l(&self) -> Vec<usize> {
        self.t.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.t.iter().map(Vec::len).sum()
    }

    pub fn flatten(&self) -> Vec<Scalar> {
        self.t.iter().flatten().cloned().collect()
    }

    pub fn from_flat(l: &[usize], flat: &[Scalar]) -> Self {
        let mut it = flat.iter().cloned();
        BetheCandidate {
            t: l.iter().map(|&k| it.by_ref().take(k).collect()).collect(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.t.iter().flatten().all(Scalar::is_exact)
    }

    pub fn to_numeric(&self, prec: usize) -> Self {
        BetheCandidate {
            t: self
                .t
                .iter()
                .map(|c| c.iter().map(|x| x.to_numeric(prec)).collect())
                .collect(),
        }
    }

    fn check_shape(&self, inst: &ProblemInstance) -> Result<(), MasterError> {
        if self.l() != inst.l {
            return Err(MasterError::Shape(format!(
                "candidate sizes {:?} differ from l = {:?}",
                self.l(),
                inst.l
            )));
        }
        Ok(())
    }
}

/// Left sides of the Bethe equations, one per t^{(i)}_j, in the Φ⁻¹∂Φ convention.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualVector {
    pub values: Vec<Vec<Scalar>>,
}

impl ResidualVector {
    pub fn max_norm(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .map(Scalar::abs_f64)
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Scalar::is_zero)
    }

    pub fn flatten(&self) -> Vec<Scalar> {
        self.values.iter().flatten().cloned().collect()
    }

    /// The same equations with the opposite overall sign.
    pub fn negated(&self) -> Self {
        ResidualVector {
            values: self
                .values
                .iter()
                .map(|c| c.iter().map(|x| -x).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueVector {
    pub mu: Vec<Scalar>,
}

impl EigenvalueVector {
    pub fn sum(&self) -> Scalar {
        self.mu.iter().fold(Scalar::zero(), |a, b| &a + b)
    }
}

fn ex(q: &Rational) -> Scalar {
    Scalar::Exact(q.clone())
}

fn recip(x: Scalar, err: impl FnOnce() -> MasterError) -> Result<Scalar, MasterError> {
    x.inv().map_err(|_| err())
}

/// Residuals of the Bethe equations at t.
pub fn bae_residual(inst: &ProblemInstance, cand: &BetheCandidate) -> Result<ResidualVector, MasterError> {
    cand.check_shape(inst)?;
    let p = inst.pairings()?;
    bae_residual_with(&p, &inst.z, cand)
}

pub(crate) fn bae_residual_with(p: &Pairings, z: &[Scalar], cand: &BetheCandidate) -> Result<ResidualVector, MasterError> {
    let r = cand.t.len();
    let mut values = Vec::with_capacity(r);
    for i in 0..r {
        let mut col = Vec::with_capacity(cand.t[i].len());
        for (j, tj) in cand.t[i].iter().enumerate() {
            let mut acc = Scalar::zero();
            for (s, zs) in z.iter().enumerate() {
                let w = recip(tj - zs, || MasterError::HitsMarkedPoint { color: i, index: j, point: s })?;
                acc = &acc - &(&ex(&p.lambda_alpha[s][i]) * &w);
            }
            for (s2, ts) in cand.t.iter().enumerate() {
                let coef = ex(&p.alpha[s2][i]);
                if coef.is_zero() {
                    continue;
                }
                for (k, tk) in ts.iter().enumerate() {
                    if s2 == i && k == j {
                        continue;
                    }
                    let w = recip(tj - tk, || MasterError::Collision {
                        color: i,
                        index: j,
                        other_color: s2,
                        other_index: k,
                    })?;
                    acc = &acc + &(&coef * &w);
                }
            }
            col.push(acc);
        }
        values.push(col);
    }
    Ok(ResidualVector { values })
}

/// μ_s = ∂_{z_s} log Φ.
pub fn eigenvalues_from_t(inst: &ProblemInstance, cand: &BetheCandidate) -> Result<EigenvalueVector, MasterError> {
    cand.check_shape(inst)?;
    let p = inst.pairings()?;
    let mut mu = p.highest_weight_energy(&inst.z);
    for (s, zs) in inst.z.iter().enumerate() {
        for (i, ti) in cand.t.iter().enumerate() {
            for (j, tj) in ti.iter().enumerate() {
                let w = recip(tj - zs, || MasterError::HitsMarkedPoint { color: i, index: j, point: s })?;
                mu[s] = &mu[s] + &(&ex(&p.lambda_alpha[s][i]) * &w);
            }
        }
    }
    Ok(EigenvalueVector { mu })
}

/// Variable of a master-function factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MasterVar {
    Z(usize),
    T(usize, usize),
}

/// Φ as a product of (u − v)^e over pairs of variables.
#[derive(Clone, Debug)]
pub struct MasterFactors {
    pub factors: Vec<(MasterVar, MasterVar, Rational)>,
}

impl MasterFactors {
    pub fn new(inst: &ProblemInstance) -> Result<Self, MasterError> {
        let p = inst.pairings()?;
        let n = inst.n();
        let l = &inst.l;
        let mut factors = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                factors.push((MasterVar::Z(i), MasterVar::Z(j), p.gram[i][j].clone()));
            }
        }
        for i in 0..l.len() {
            for j in 0..l[i] {
                for s in 0..n {
                    factors.push((MasterVar::T(i, j), MasterVar::Z(s), -p.lambda_alpha[s][i].clone()));
                }
            }
        }
        for i in 0..l.len() {
            for j in 0..l[i] {
                for s in j + 1..l[i] {
                    factors.push((MasterVar::T(i, j), MasterVar::T(i, s), p.alpha[i][i].clone()));
                }
            }
        }
        for i in 0..l.len() {
            for i2 in i + 1..l.len() {
                if p.alpha[i][i2] == Rational::ZERO {
                    continue;
                }
                for j in 0..l[i] {
                    for k in 0..l[i2] {
                        factors.push((MasterVar::T(i, j), MasterVar::T(i2, k), p.alpha[i][i2].clone()));
                    }
                }
            }
        }
        Ok(MasterFactors { factors })
    }

    /// Φ⁻¹ ∂Φ/∂v at (t, z).
    pub fn log_derivative(&self, v: MasterVar, z: &[Scalar], cand: &BetheCandidate) -> Result<Scalar, MasterError> {
        let val = |x: MasterVar| match x {
            MasterVar::Z(s) => z[s].clone(),
            MasterVar::T(i, j) => cand.t[i][j].clone(),
        };
        let mut acc = Scalar::zero();
        for (a, b, e) in &self.factors {
            let sign = if *a == v {
                1
            } else if *b == v {
                -1
            } else {
                continue;
            };
            let w = recip(&val(*a) - &val(*b), || match (*a, *b) {
                (MasterVar::T(i, j), MasterVar::Z(s)) => MasterError::HitsMarkedPoint { color: i, index: j, point: s },
                (MasterVar::T(i, j), MasterVar::T(k, m)) => MasterError::Collision {
                    color: i,
                    index: j,
                    other_color: k,
                    other_index: m,
                },
                _ => MasterError::Shape("coincident marked points".into()),
            })?;
            acc = &acc + &(&(&ex(e) * &w) * &Scalar::int(sign));
        }
        Ok(acc)
    }

    /// Critical-point equations Φ⁻¹∂Φ/∂t = 0 from the factor list.
    pub fn critical(&self, z: &[Scalar], cand: &BetheCandidate) -> Result<ResidualVector, MasterError> {
        let values = cand
            .t
            .iter()
            .enumerate()
            .map(|(i, ti)| {
                (0..ti.len())
                    .map(|j| self.log_derivative(MasterVar::T(i, j), z, cand))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ResidualVector { values })
    }
}
