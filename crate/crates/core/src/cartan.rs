//! Cartan data, weights and the scalar products used throughout.

use crate::algebra::{Matrix, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CartanError {
    #[error("invalid Cartan data: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("Cartan matrix is singular and no Gram matrix was supplied")]
    GramRequired,
    #[error("supplied Gram matrix disagrees with the computed one at ({0},{1})")]
    GramMismatch(usize, usize),
    #[error("shape: {0}")]
    Shape(String),
    #[error("marked points z_{0} and z_{1} coincide")]
    CoincidentPoints(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CartanData {
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct CartanDiagnostics {
    pub violations: Vec<String>,
    pub invertible: bool,
}

impl CartanDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the generalized-Cartan and symmetrizability axioms.
pub fn validate(a: &[Vec<i64>], d: &[i64]) -> CartanDiagnostics {
    let r = a.len();
    let mut v = Vec::new();
    if r == 0 {
        v.push("rank must be at least 1".to_string());
    }
    if a.iter().any(|row| row.len() != r) {
        v.push("matrix is not square".to_string());
        return CartanDiagnostics { violations: v, invertible: false };
    }
    if d.len() != r {
        v.push(format!("symmetrizer has length {} for rank {r}", d.len()));
    }
    for i in 0..r {
        if a[i][i] != 2 {
            v.push(format!("a_{i}{i} = {} (must be 2)", a[i][i]));
        }
        if d.get(i).is_some_and(|&x| x <= 0) {
            v.push(format!("d_{i} = {} must be positive", d[i]));
        }
        for j in 0..r {
            if i == j {
                continue;
            }
            if a[i][j] > 0 {
                v.push(format!("a_{i}{j} = {} must be ≤ 0", a[i][j]));
            }
            if (a[i][j] == 0) != (a[j][i] == 0) {
                v.push(format!("a_{i}{j} = 0 but a_{j}{i} ≠ 0 or vice versa"));
            }
            if j > i && d.len() == r && d[i] * a[i][j] != d[j] * a[j][i] {
                v.push(format!("D·A not symmetric at ({i},{j})"));
            }
        }
    }
    let invertible = r > 0 && int_matrix(a).rank(0.0) == r;
    CartanDiagnostics {
        violations: v,
        invertible,
    }
}

fn int_matrix(a: &[Vec<i64>]) -> Matrix {
    Matrix::from_rows(
        a.iter()
            .map(|row| row.iter().map(|&x| Scalar::int(x)).collect())
            .collect(),
    )
    .expect("square")
}

/// Type A_r, i.e. sl_{r+1}.
#[allow(non_snake_case)]
pub fn make_cartan_A(r: usize) -> CartanData {
    let a = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    CartanData { a, d: vec![1; r] }
}

impl CartanData {
    pub fn new(a: Vec<Vec<i64>>, d: Vec<i64>) -> Result<Self, CartanError> {
        let diag = validate(&a, &d);
        if !diag.is_valid() {
            return Err(CartanError::Invalid(diag.violations));
        }
        Ok(CartanData { a, d })
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.d
    }

    /// Is this the Cartan matrix of sl_{r+1} with unit symmetrizer?
    pub fn is_type_a(&self) -> bool {
        *self == make_cartan_A(self.rank())
    }

    /// (α_i, α_j) = d_i a_ij.
    pub fn root_pairing(&self, i: usize, j: usize) -> Rational {
        Rational::from(self.d[i] * self.a[i][j])
    }

    pub fn is_invertible(&self) -> bool {
        validate(&self.a, &self.d).invertible
    }

    /// A⁻¹ over the rationals.
    pub fn inverse(&self) -> Option<Vec<Vec<Rational>>> {
        invert(&int_matrix(&self.a))
    }

    /// B = D·A.
    pub fn symmetric_form(&self) -> Vec<Vec<i64>> {
        (0..self.rank())
            .map(|i| (0..self.rank()).map(|j| self.d[i] * self.a[i][j]).collect())
            .collect()
    }
}

fn invert(m: &Matrix) -> Option<Vec<Vec<Rational>>> {
    let n = m.rows();
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, Scalar::one());
    }
    let (r, piv) = aug.rref(0.0);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| r.get(i, n + j).as_rational().cloned().expect("exact"))
                    .collect()
            })
            .collect(),
    )
}

/// Weights by coroot pairings m_s[i] = ⟨Λ_s, α_i^∨⟩, with an optional explicit Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightData {
    pub m: Vec<Vec<Rational>>,
    pub gram: Option<Vec<Vec<Rational>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub cartan: CartanData,
    pub weights: WeightData,
    pub z: Vec<Scalar>,
    pub l: Vec<usize>,
}

/// All scalar products, exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Pairings {
    /// (α_i, α_j)
    pub alpha: Vec<Vec<Rational>>,
    /// (Λ_s, α_i), indexed [s][i]
    pub lambda_alpha: Vec<Vec<Rational>>,
    /// (Λ_s, Λ_k)
    pub gram: Vec<Vec<Rational>>,
}

fn computed_gram(c: &CartanData, m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let r = c.rank();
    let b = Matrix::from_rows(
        c.symmetric_form()
            .iter()
            .map(|row| row.iter().map(|&x| Scalar::int(x)).collect())
            .collect(),
    )
    .ok()?;
    let binv = invert(&b)?;
    let n = m.len();
    let dm: Vec<Vec<Rational>> = m
        .iter()
        .map(|ms| (0..r).map(|i| &ms[i] * Rational::from(c.d[i])).collect())
        .collect();
    Some(
        (0..n)
            .map(|s| {
                (0..n)
                    .map(|k| {
                        let mut acc = Rational::ZERO;
                        for i in 0..r {
                            for j in 0..r {
                                acc += &dm[s][i] * &dm[k][j] * &binv[i][j];
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect(),
    )
}

impl ProblemInstance {
    pub fn new(
        cartan: CartanData,
        weights: WeightData,
        z: Vec<Scalar>,
        l: Vec<usize>,
    ) -> Result<Self, CartanError> {
        let r = cartan.rank();
        let n = z.len();
        if weights.m.len() != n {
            return Err(CartanError::Shape(format!(
                "{} weights for {} points",
                weights.m.len(),
                n
            )));
        }
        if let Some(s) = weights.m.iter().position(|w| w.len() != r) {
            return Err(CartanError::Shape(format!("weight {s} has wrong length (rank {r})")));
        }
        if l.len() != r {
            return Err(CartanError::Shape(format!("l has length {} for rank {r}", l.len())));
        }
        if let Some(g) = &weights.gram {
            if g.len() != n || g.iter().any(|row| row.len() != n) {
                return Err(CartanError::Shape("gram must be n×n".into()));
            }
        }
        for i in 0..n {
            for k in i + 1..n {
                if (&z[i] - &z[k]).is_zero() {
                    return Err(CartanError::CoincidentPoints(i, k));
                }
            }
        }
        let inst = ProblemInstance { cartan, weights, z, l };
        inst.pairings()?;
        Ok(inst)
    }

    /// Convenience constructor for sl_{r+1} with integer/rational weights.
    pub fn type_a(m: Vec<Vec<Rational>>, z: Vec<Scalar>, l: Vec<usize>) -> Result<Self, CartanError> {
        let r = l.len();
        Self::new(make_cartan_A(r), WeightData { m, gram: None }, z, l)
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// Same data at a different occupation vector.
    pub fn with_l(&self, l: Vec<usize>) -> Self {
        ProblemInstance { l, ..self.clone() }
    }

    pub fn pairings(&self) -> Result<Pairings, CartanError> {
        let c = &self.cartan;
        let r = c.rank();
        let alpha = (0..r)
            .map(|i| (0..r).map(|j| c.root_pairing(i, j)).collect())
            .collect();
        let lambda_alpha = self
            .weights
            .m
            .iter()
            .map(|ms| (0..r).map(|i| &ms[i] * Rational::from(c.d[i])).collect())
            .collect();
        let computed = computed_gram(c, &self.weights.m);
        let gram = match (&self.weights.gram, computed) {
            (Some(g), Some(cg)) => {
                for (s, (row, crow)) in g.iter().zip(&cg).enumerate() {
                    for (k, (a, b)) in row.iter().zip(crow).enumerate() {
                        if a != b {
                            return Err(CartanError::GramMismatch(s, k));
                        }
                    }
                }
                g.clone()
            }
            (Some(g), None) => g.clone(),
            (None, Some(cg)) => cg,
            (None, None) => return Err(CartanError::GramRequired),
        };
        Ok(Pairings {
            alpha,
            lambda_alpha,
            gram,
        })
    }
}

impl Pairings {
    /// A_s = Σ_{k≠s} (Λ_s,Λ_k)/(z_s − z_k).
    pub fn highest_weight_energy(&self, z: &[Scalar]) -> Vec<Scalar> {
        let n = z.len();
        (0..n)
            .map(|s| {
                (0..n).filter(|&k| k != s).fold(Scalar::zero(), |acc, k| {
                    let term = Scalar::Exact(self.gram[s][k].clone())
                        .checked_div(&(&z[s] - &z[k]))
                        .expect("distinct points");
                    &acc + &term
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_parts_signed(n.into(), d.into())
    }

    #[test]
    fn type_a_matrices() {
        assert_eq!(make_cartan_A(1).matrix(), &[vec![2]]);
        assert_eq!(make_cartan_A(2).matrix(), &[vec![2, -1], vec![-1, 2]]);
        let a3 = make_cartan_A(3);
        assert_eq!(a3.a(0, 2), 0);
        assert_eq!(a3.a(1, 2), -1);
    }

    #[test]
    fn fundamental_weight_norms() {
        let sl2 = ProblemInstance::type_a(vec![vec![q(1, 1)]], vec![Scalar::int(0)], vec![0]).unwrap();
        assert_eq!(sl2.pairings().unwrap().gram[0][0], q(1, 2));
        let sl3 = ProblemInstance::type_a(vec![vec![q(1, 1), q(0, 1)]], vec![Scalar::int(0)], vec![0, 0])
            .unwrap();
        let p = sl3.pairings().unwrap();
        assert_eq!(p.gram[0][0], q(2, 3));
        assert_eq!(p.alpha[1][1], q(2, 1));
    }

    #[test]
    fn validation_examples() {
        let ok = validate(&[vec![2, -1], vec![-1, 2]], &[1, 1]);
        assert!(ok.is_valid() && ok.invertible);
        let bad = validate(&[vec![2, -1], vec![0, 2]], &[1, 1]);
        assert!(!bad.is_valid());
        let affine = validate(&[vec![2, -2], vec![-2, 2]], &[1, 1]);
        assert!(affine.is_valid() && !affine.invertible);
        let c = CartanData::new(vec![vec![2, -2], vec![-2, 2]], vec![1, 1]).unwrap();
        let w = WeightData { m: vec![vec![q(1, 1), q(0, 1)]], gram: None };
        assert_eq!(
            ProblemInstance::new(c, w, vec![Scalar::int(0)], vec![0, 0]),
            Err(CartanError::GramRequired)
        );
    }

    #[test]
    fn non_simply_laced_form() {
        let c = CartanData::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 2]).unwrap();
        assert_eq!(c.symmetric_form(), vec![vec![2, -2], vec![-2, 4]]);
        assert_eq!(c.root_pairing(1, 1), q(4, 1));
    }

    #[test]
    fn gram_consistency() {
        let c = make_cartan_A(1);
        let w = WeightData { m: vec![vec![q(1, 1)], vec![q(1, 1)]], gram: Some(vec![vec![q(1, 2), q(1, 2)], vec![q(1, 2), q(1, 3)]]) };
        let err = ProblemInstance::new(c, w, vec![Scalar::int(0), Scalar::int(1)], vec![1]).unwrap_err();
        assert_eq!(err, CartanError::GramMismatch(1, 1));
    }
}
