//! The canonical weight function ω_{l,n} and Bethe vectors.

use crate::algebra::Scalar;
use crate::cartan::ProblemInstance;
use crate::master::BetheCandidate;
use crate::rep::{colors_of, lowering_generators, PbwIndex, RepError, TensorVector, WeightSpace};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CanonicalError {
    #[error("index has color content {got:?}, expected {want:?}")]
    NotInWeightSpace { got: Vec<usize>, want: Vec<usize> },
    #[error("pole of ω at factor {0}")]
    Pole(String),
    #[error("candidate shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// An element (j, a, b, q) of S(I), with j 0-based and (a, b) the generator e_{a,b}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub j: usize,
    pub a: usize,
    pub b: usize,
    pub q: u32,
}

/// S(I), the subsets S_i(I) as positions into S(I), and the sizes of B(I).
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleData {
    pub slots: Vec<Slot>,
    pub by_color: Vec<Vec<usize>>,
    /// multiplicity 1/∏ (i^j_{a,b})! denominators
    pub factorial_product: u64,
}

impl AdmissibleData {
    /// |B(I)| = l₁!⋯l_r!.
    pub fn bijection_count(&self) -> u64 {
        self.by_color.iter().map(|c| factorial(c.len())).product()
    }

    /// All β ∈ B(I); β[i][k] is the index assigned to the k-th element of S_i(I).
    pub fn bijections(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for c in &self.by_color {
            let perms = permutations(c.len());
            out = out
                .into_iter()
                .flat_map(|pre| {
                    perms.iter().map(move |p| {
                        let mut v = pre.clone();
                        v.push(p.clone());
                        v
                    })
                })
                .collect();
        }
        out
    }
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

pub fn enumerate_admissible(index: &PbwIndex, l: &[usize]) -> Result<AdmissibleData, CanonicalError> {
    let rank = l.len();
    let got = index.colors(rank);
    if got != l {
        return Err(CanonicalError::NotInWeightSpace { got, want: l.to_vec() });
    }
    let gens = lowering_generators(rank);
    let mut slots = Vec::new();
    let mut factorial_product = 1u64;
    for (j, f) in index.factors().iter().enumerate() {
        for (g, &k) in f.iter().enumerate() {
            let (a, b) = gens[g];
            factorial_product *= factorial(k as usize);
            for q in 1..=k {
                slots.push(Slot { j, a, b, q });
            }
        }
    }
    let by_color = (0..rank)
        .map(|i| {
            slots
                .iter()
                .enumerate()
                .filter(|(_, s)| colors_of(s.a, s.b).contains(&i))
                .map(|(p, _)| p)
                .collect()
        })
        .collect();
    Ok(AdmissibleData {
        slots,
        by_color,
        factorial_product,
    })
}

fn inv(x: Scalar, what: impl FnOnce() -> String) -> Result<Scalar, CanonicalError> {
    x.inv().map_err(|_| CanonicalError::Pole(what()))
}

/// ω_I(t, z).
pub fn omega_coefficient(index: &PbwIndex, t: &BetheCandidate, z: &[Scalar]) -> Result<Scalar, CanonicalError> {
    let l = t.l();
    let data = enumerate_admissible(index, &l)?;
    if index.factors().len() != z.len() {
        return Err(CanonicalError::Shape("index and z disagree on n".into()));
    }
    // position of each slot inside each S_i(I)
    let mut pos_in_color = vec![vec![usize::MAX; l.len()]; data.slots.len()];
    for (i, c) in data.by_color.iter().enumerate() {
        for (k, &p) in c.iter().enumerate() {
            pos_in_color[p][i] = k;
        }
    }
    let mut total = Scalar::zero();
    for beta in data.bijections() {
        let mut prod = Scalar::one();
        for (p, s) in data.slots.iter().enumerate() {
            let pick = |i: usize| beta[i][pos_in_color[p][i]];
            let b0 = s.b - 1;
            let tb = &t.t[b0][pick(b0)];
            prod = &prod
                * &inv(tb - &z[s.j], || format!("t^({})_{} − z_{}", s.b, pick(b0) + 1, s.j + 1))?;
            for i in b0 + 1..s.a - 1 {
                let d = &t.t[i][pick(i)] - &t.t[i - 1][pick(i - 1)];
                prod = &prod
                    * &inv(d, || {
                        format!("t^({})_{} − t^({})_{}", i + 1, pick(i) + 1, i, pick(i - 1) + 1)
                    })?;
            }
        }
        total = &total + &prod;
    }
    Ok(&total * &Scalar::ratio(1, data.factorial_product as i64))
}

/// ω_{l,n}(t, z) = Σ_I ω_I F_I v.
pub fn canonical_vector(inst: &ProblemInstance, t: &BetheCandidate) -> Result<TensorVector, CanonicalError> {
    if t.l() != inst.l {
        return Err(CanonicalError::Shape(format!("candidate sizes {:?} vs l {:?}", t.l(), inst.l)));
    }
    let space = WeightSpace::new(inst, &inst.l)?;
    canonical_vector_in(&space, t, &inst.z)
}

pub fn canonical_vector_in(space: &WeightSpace, t: &BetheCandidate, z: &[Scalar]) -> Result<TensorVector, CanonicalError> {
    let basis = space.basis();
    #[cfg(feature = "parallel")]
    let coeffs: Vec<Result<Scalar, CanonicalError>> = {
        use rayon::prelude::*;
        basis.par_iter().map(|b| omega_coefficient(b, t, z)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let coeffs: Vec<Result<Scalar, CanonicalError>> = basis.iter().map(|b| omega_coefficient(b, t, z)).collect();
    let mut v = TensorVector::zero(space.l().to_vec());
    for (b, c) in basis.iter().zip(coeffs) {
        let c = c?;
        if !c.is_zero() {
            v.coeffs.insert(b.clone(), c);
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn idx(v: Vec<Vec<u32>>) -> PbwIndex {
        PbwIndex(v)
    }

    #[test]
    fn admissible_counts() {
        let d = enumerate_admissible(&idx(vec![vec![1], vec![0]]), &[1]).unwrap();
        assert_eq!((d.slots.len(), d.bijection_count()), (1, 1));
        let d = enumerate_admissible(&idx(vec![vec![0, 1, 0], vec![0, 0, 0]]), &[1, 1]).unwrap();
        assert_eq!(d.slots.len(), 1);
        assert_eq!(d.by_color, vec![vec![0], vec![0]]);
        assert_eq!(d.bijection_count(), 1);
        let d = enumerate_admissible(&idx(vec![vec![2], vec![0]]), &[2]).unwrap();
        assert_eq!(d.bijection_count(), 2);
        assert_eq!(d.bijections().len(), 2);
        assert!(enumerate_admissible(&idx(vec![vec![1], vec![0]]), &[2]).is_err());
    }

    #[test]
    fn sl2_square_term() {
        let t = BetheCandidate::new(vec![vec![Scalar::ratio(1, 3), Scalar::int(5)]]);
        let z = [Scalar::int(-1), Scalar::int(2)];
        let got = omega_coefficient(&idx(vec![vec![2], vec![0]]), &t, &z).unwrap();
        let want = (&(&Scalar::ratio(1, 3) - &z[0]) * &(&Scalar::int(5) - &z[0])).inv().unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn empty_weight() {
        let inst = ProblemInstance::type_a(
            vec![vec![Rational::ONE], vec![Rational::ONE]],
            vec![Scalar::int(0), Scalar::int(1)],
            vec![0],
        )
        .unwrap();
        let v = canonical_vector(&inst, &BetheCandidate::empty(1)).unwrap();
        assert_eq!(v.coeffs.len(), 1);
        assert_eq!(v.get(&idx(vec![vec![0], vec![0]])), Scalar::one());
    }

    #[test]
    fn pole_reported() {
        let t = BetheCandidate::new(vec![vec![Scalar::int(0)], vec![Scalar::int(0)]]);
        let z = [Scalar::int(1), Scalar::int(2)];
        let e = omega_coefficient(&idx(vec![vec![0, 1, 0], vec![0, 0, 0]]), &t, &z).unwrap_err();
        assert!(matches!(e, CanonicalError::Pole(_)));
    }

    #[test]
    fn sl3_six_terms() {
        let (t1, t2) = (Scalar::ratio(2, 7), Scalar::ratio(-5, 3));
        let (z1, z2) = (Scalar::ratio(1, 2), Scalar::int(3));
        let t = BetheCandidate::new(vec![vec![t1.clone()], vec![t2.clone()]]);
        let z = [z1.clone(), z2.clone()];
        let r = |a: &Scalar, b: &Scalar| (a - b).inv().unwrap();
        // generator order e21, e31, e32
        let cases = [
            (vec![vec![1, 0, 1], vec![0, 0, 0]], &r(&t1, &z1) * &r(&t2, &z1)),
            (vec![vec![0, 1, 0], vec![0, 0, 0]], &r(&t2, &t1) * &r(&t1, &z1)),
            (vec![vec![1, 0, 0], vec![0, 0, 1]], &r(&t1, &z1) * &r(&t2, &z2)),
            (vec![vec![0, 0, 1], vec![1, 0, 0]], &r(&t2, &z1) * &r(&t1, &z2)),
            (vec![vec![0, 0, 0], vec![1, 0, 1]], &r(&t1, &z2) * &r(&t2, &z2)),
            (vec![vec![0, 0, 0], vec![0, 1, 0]], &r(&t2, &t1) * &r(&t1, &z2)),
        ];
        for (i, want) in cases {
            assert_eq!(omega_coefficient(&idx(i), &t, &z).unwrap(), want);
        }
    }
}
