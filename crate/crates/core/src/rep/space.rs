//! Weight subspaces M_Λ[l] of tensor products of Verma modules and the
//! operators acting on them.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{Matrix, Rational, Scalar};
use crate::cartan::ProblemInstance;

use super::pbw::{colors_of, lowering_generators, Element, FactorAction, LinComb};
use super::RepError;

/// Per-factor PBW exponents, generators in the order e_{2,1} < e_{3,1} < … .
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwIndex(pub Vec<Vec<u32>>);

impl PbwIndex {
    pub fn factors(&self) -> &[Vec<u32>] {
        &self.0
    }

    fn flat(&self) -> Vec<u32> {
        self.0.iter().flatten().copied().collect()
    }

    /// Color content Σ_j Σ_{b ≤ i < a} i^j_{a,b}.
    pub fn colors(&self, rank: usize) -> Vec<usize> {
        let gens = lowering_generators(rank);
        let mut c = vec![0usize; rank];
        for f in &self.0 {
            for (g, &k) in f.iter().enumerate() {
                let (a, b) = gens[g];
                for i in colors_of(a, b) {
                    c[i] += k as usize;
                }
            }
        }
        c
    }

    /// Human label such as `e21*e32 v ⊗ v`.
    pub fn label(&self, rank: usize) -> String {
        let gens = lowering_generators(rank);
        self.0
            .iter()
            .map(|f| {
                let mut parts: Vec<String> = Vec::new();
                for (g, &k) in f.iter().enumerate() {
                    let (a, b) = gens[g];
                    match k {
                        0 => {}
                        1 => parts.push(format!("e{a}{b}")),
                        _ => parts.push(format!("e{a}{b}^{k}")),
                    }
                }
                if parts.is_empty() {
                    "v".to_string()
                } else {
                    format!("{} v", parts.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" ⊗ ")
    }
}

/// Monomials of one factor with color content bounded by `bound`, keyed by content.
fn factor_monomials(rank: usize, bound: &[usize]) -> Vec<(Vec<u32>, Vec<usize>)> {
    let gens = lowering_generators(rank);
    let mut out = Vec::new();
    let mut cur = vec![0u32; gens.len()];
    let mut content = vec![0usize; rank];
    fn rec(
        g: usize,
        gens: &[(usize, usize)],
        bound: &[usize],
        cur: &mut Vec<u32>,
        content: &mut Vec<usize>,
        out: &mut Vec<(Vec<u32>, Vec<usize>)>,
    ) {
        if g == gens.len() {
            out.push((cur.clone(), content.clone()));
            return;
        }
        let (a, b) = gens[g];
        let cols: Vec<usize> = colors_of(a, b).collect();
        let mut k = 0u32;
        loop {
            rec(g + 1, gens, bound, cur, content, out);
            if cols.iter().any(|&i| content[i] + 1 > bound[i]) {
                break;
            }
            for &i in &cols {
                content[i] += 1;
            }
            k += 1;
            cur[g] = k;
        }
        for &i in &cols {
            content[i] -= k as usize;
        }
        cur[g] = 0;
    }
    rec(0, &gens, bound, &mut cur, &mut content, &mut out);
    out
}

/// All I ∈ P(l, n), in descending lexicographic order of the flattened exponents.
pub fn enumerate_basis(rank: usize, n: usize, l: &[usize]) -> Vec<PbwIndex> {
    let monos = factor_monomials(rank, l);
    let mut out = Vec::new();
    let mut cur: Vec<Vec<u32>> = Vec::with_capacity(n);
    fn rec(
        s: usize,
        n: usize,
        remaining: &mut Vec<usize>,
        monos: &[(Vec<u32>, Vec<usize>)],
        cur: &mut Vec<Vec<u32>>,
        out: &mut Vec<PbwIndex>,
    ) {
        if s == n {
            if remaining.iter().all(|&r| r == 0) {
                out.push(PbwIndex(cur.clone()));
            }
            return;
        }
        for (m, c) in monos {
            if c.iter().zip(remaining.iter()).all(|(a, b)| a <= b) {
                for (r, a) in remaining.iter_mut().zip(c) {
                    *r -= a;
                }
                cur.push(m.clone());
                rec(s + 1, n, remaining, monos, cur, out);
                cur.pop();
                for (r, a) in remaining.iter_mut().zip(c) {
                    *r += a;
                }
            }
        }
    }
    let mut rem = l.to_vec();
    if n == 0 {
        if rem.iter().all(|&r| r == 0) {
            out.push(PbwIndex(Vec::new()));
        }
        return out;
    }
    rec(0, n, &mut rem, &monos, &mut cur, &mut out);
    out.sort_by_key(|b| std::cmp::Reverse(b.flat()));
    out
}

/// An element of M_Λ[l].
#[derive(Clone, Debug, PartialEq)]
pub struct TensorVector {
    pub l: Vec<usize>,
    pub coeffs: BTreeMap<PbwIndex, Scalar>,
}

impl TensorVector {
    pub fn zero(l: Vec<usize>) -> Self {
        TensorVector {
            l,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Scalar::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    pub fn get(&self, i: &PbwIndex) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }
}

/// M_Λ[l] with a fixed basis enumeration.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    rank: usize,
    n: usize,
    l: Vec<usize>,
    m: Vec<Vec<Rational>>,
    basis: Vec<PbwIndex>,
    lookup: HashMap<PbwIndex, usize>,
}

impl WeightSpace {
    /// Requires a type-A instance.
    pub fn new(inst: &ProblemInstance, l: &[usize]) -> Result<Self, RepError> {
        if !inst.cartan.is_type_a() {
            return Err(RepError::NotTypeA);
        }
        Ok(Self::from_parts(inst.rank(), inst.weights.m.clone(), l))
    }

    pub fn from_parts(rank: usize, m: Vec<Vec<Rational>>, l: &[usize]) -> Self {
        let n = m.len();
        let basis = enumerate_basis(rank, n, l);
        let lookup = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        WeightSpace {
            rank,
            n,
            l: l.to_vec(),
            m,
            basis,
            lookup,
        }
    }

    /// Same modules, another weight.
    pub fn at(&self, l: &[usize]) -> Self {
        Self::from_parts(self.rank, self.m.clone(), l)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> &[usize] {
        &self.l
    }

    pub fn weights(&self) -> &[Vec<Rational>] {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PbwIndex] {
        &self.basis
    }

    pub fn index_of(&self, b: &PbwIndex) -> Option<usize> {
        self.lookup.get(b).copied()
    }

    pub fn actions(&self) -> Vec<FactorAction> {
        self.m
            .iter()
            .map(|ms| FactorAction::new(self.rank, ms.clone()))
            .collect()
    }

    pub fn to_dense(&self, v: &TensorVector) -> Result<Vec<Scalar>, RepError> {
        if v.l != self.l {
            return Err(RepError::WrongSubspace);
        }
        let mut out = vec![Scalar::zero(); self.dim()];
        for (b, c) in &v.coeffs {
            let i = self.index_of(b).ok_or(RepError::WrongSubspace)?;
            out[i] = c.clone();
        }
        Ok(out)
    }

    pub fn from_dense(&self, v: &[Scalar]) -> TensorVector {
        TensorVector {
            l: self.l.clone(),
            coeffs: self
                .basis
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
        }
    }

    /// Target weight of an element applied to M[l]; `None` when it leaves the cone.
    pub fn shifted_l(&self, x: Element) -> Option<Vec<usize>> {
        let mut l: Vec<i64> = self.l.iter().map(|&v| v as i64).collect();
        if let Element::E(a, b) = x {
            let (lo, hi, s) = if a > b { (b, a, 1) } else { (a, b, -1) };
            for i in colors_of(hi, lo) {
                l[i] += s;
            }
        }
        if l.iter().any(|&v| v < 0) {
            None
        } else {
            Some(l.into_iter().map(|v| v as usize).collect())
        }
    }

    fn apply_factor(
        acts: &mut [FactorAction],
        s: usize,
        x: Element,
        basis: &PbwIndex,
    ) -> Vec<(PbwIndex, Rational)> {
        acts[s]
            .apply(x, &basis.0[s])
            .into_iter()
            .map(|(m, c)| {
                let mut b = basis.clone();
                b.0[s] = m;
                (b, c)
            })
            .collect()
    }

    /// Matrix of Σ_s X^{(s)} from M[l] to M[l′].
    pub fn generator_matrix(&self, x: Element) -> (WeightSpace, Matrix) {
        let target = match self.shifted_l(x) {
            Some(l2) => self.at(&l2),
            None => WeightSpace {
                basis: Vec::new(),
                lookup: HashMap::new(),
                ..self.clone()
            },
        };
        let mut acts = self.actions();
        let mut mat = Matrix::zeros(target.dim(), self.dim());
        for (col, b) in self.basis.iter().enumerate() {
            for s in 0..self.n {
                for (b2, c) in Self::apply_factor(&mut acts, s, x, b) {
                    let row = target.index_of(&b2).expect("weight bookkeeping");
                    mat.add_to(row, col, &Scalar::Exact(c));
                }
            }
        }
        (target, mat)
    }

    /// Ω^{(ij)} = Σ_{a≠b} e_ab ⊗ e_ba + Σ (A⁻¹)_{cd} h_c ⊗ h_d in factors (i, j).
    pub fn casimir_matrix(&self, i: usize, j: usize) -> Result<Matrix, RepError> {
        if i == j || i >= self.n || j >= self.n {
            return Err(RepError::FactorIndex(i, j));
        }
        let ainv = crate::cartan::make_cartan_A(self.rank)
            .inverse()
            .ok_or(RepError::SingularCartan)?;
        let r1 = self.rank + 1;
        let mut acts = self.actions();
        let mut mat = Matrix::zeros(self.dim(), self.dim());
        for (col, b) in self.basis.iter().enumerate() {
            let mut acc: BTreeMap<PbwIndex, Rational> = BTreeMap::new();
            for a in 1..=r1 {
                for bb in 1..=r1 {
                    if a == bb {
                        continue;
                    }
                    for (b1, c1) in Self::apply_factor(&mut acts, j, Element::E(bb, a), b) {
                        for (b2, c2) in Self::apply_factor(&mut acts, i, Element::E(a, bb), &b1) {
                            *acc.entry(b2).or_insert(Rational::ZERO) += &c1 * &c2;
                        }
                    }
                }
            }
            for c in 1..=self.rank {
                let wc = acts[i].weight(c, &b.0[i]);
                for d in 1..=self.rank {
                    let coef = &ainv[c - 1][d - 1];
                    if *coef == Rational::ZERO {
                        continue;
                    }
                    let wd = acts[j].weight(d, &b.0[j]);
                    *acc.entry(b.clone()).or_insert(Rational::ZERO) += coef * &wc * wd;
                }
            }
            for (b2, v) in acc {
                if v != Rational::ZERO {
                    let row = self.index_of(&b2).expect("Casimir preserves weight");
                    mat.set(row, col, Scalar::Exact(v));
                }
            }
        }
        Ok(mat)
    }

    /// H_i(z) = Σ_{j≠i} Ω^{(ij)}/(z_i − z_j), for all i.
    pub fn gaudin_matrices(&self, z: &[Scalar]) -> Result<Vec<Matrix>, RepError> {
        if z.len() != self.n {
            return Err(RepError::Shape("one point per factor".into()));
        }
        let mut omegas: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
        let pairs: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .collect();
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            let built: Vec<_> = pairs
                .par_iter()
                .map(|&(i, j)| self.casimir_matrix(i, j).map(|m| ((i, j), m)))
                .collect::<Result<_, _>>()?;
            omegas.extend(built);
        }
        #[cfg(not(feature = "parallel"))]
        for &(i, j) in &pairs {
            omegas.insert((i, j), self.casimir_matrix(i, j)?);
        }
        let mut hs = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut h = Matrix::zeros(self.dim(), self.dim());
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let om = &omegas[&(i.min(j), i.max(j))];
                let w = Scalar::one()
                    .checked_div(&(&z[i] - &z[j]))
                    .map_err(|_| RepError::CoincidentPoints(i, j))?;
                h = h.add(&om.scale(&w)).expect("same shape");
            }
            hs.push(h);
        }
        Ok(hs)
    }

    /// Residual of the singular-vector condition: max over simple raising generators
    /// of the max-norm of e_{a,a+1}·v.
    pub fn singular_residual(&self, v: &TensorVector) -> Result<f64, RepError> {
        let dense = self.to_dense(v)?;
        let mut worst: f64 = 0.0;
        for a in 1..=self.rank {
            let (_, mat) = self.generator_matrix(Element::E(a, a + 1));
            let img = mat.mul_vec(&dense).expect("shape");
            worst = worst.max(img.iter().map(Scalar::abs_f64).fold(0.0, f64::max));
        }
        Ok(worst)
    }

    /// Exact test: e_{a,a+1} v = 0 for every a (numeric entries must vanish exactly).
    pub fn is_singular(&self, v: &TensorVector) -> Result<bool, RepError> {
        let dense = self.to_dense(v)?;
        for a in 1..=self.rank {
            let (_, mat) = self.generator_matrix(Element::E(a, a + 1));
            if !mat.mul_vec(&dense).expect("shape").iter().all(Scalar::is_zero) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Straightens a word applied to the highest-weight vector of one factor.
pub fn straighten(rank: usize, m: &[Rational], word: &[(usize, usize)]) -> LinComb {
    FactorAction::new(rank, m.to_vec()).straighten(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Scalar;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_parts_signed(n.into(), d.into())
    }

    fn sl2_space(m: &[i64], l: usize) -> WeightSpace {
        WeightSpace::from_parts(1, m.iter().map(|&x| vec![q(x, 1)]).collect(), &[l])
    }

    #[test]
    fn basis_examples() {
        let s = sl2_space(&[1, 1], 1);
        assert_eq!(s.basis(), &[PbwIndex(vec![vec![1], vec![0]]), PbwIndex(vec![vec![0], vec![1]])]);
        let s3 = WeightSpace::from_parts(2, vec![vec![q(1, 1), q(0, 1)]; 2], &[1, 1]);
        assert_eq!(s3.dim(), 6);
        let s0 = WeightSpace::from_parts(2, vec![vec![q(1, 1), q(0, 1)]; 3], &[0, 0]);
        assert_eq!(s0.dim(), 1);
        assert!(s0.basis()[0].0.iter().flatten().all(|&e| e == 0));
    }

    #[test]
    fn dimension_counts_compositions() {
        // sl2: compositions of l into n parts.
        let s = sl2_space(&[1, 2, 3], 4);
        assert_eq!(s.dim(), 15);
        for b in s.basis() {
            assert_eq!(b.colors(1), vec![4]);
        }
    }

    #[test]
    fn casimir_sl2_example() {
        let s = sl2_space(&[1, 1], 1);
        let om = s.casimir_matrix(0, 1).unwrap();
        let want = Matrix::from_rows(vec![
            vec![Scalar::ratio(-1, 2), Scalar::int(1)],
            vec![Scalar::int(1), Scalar::ratio(-1, 2)],
        ])
        .unwrap();
        assert_eq!(om, want);
        let s0 = sl2_space(&[1, 1], 0);
        assert_eq!(*s0.casimir_matrix(0, 1).unwrap().get(0, 0), Scalar::ratio(1, 2));
    }

    #[test]
    fn gaudin_two_point() {
        let s = sl2_space(&[1, 1], 1);
        let hs = s.gaudin_matrices(&[Scalar::int(0), Scalar::int(1)]).unwrap();
        assert_eq!(hs[0], hs[1].scale(&Scalar::int(-1)));
        // Eigenvalues −1/2 and 3/2: charpoly (λ + 1/2)(λ − 3/2).
        let cp = hs[0].charpoly().unwrap();
        assert!(cp.eval(&Scalar::ratio(-1, 2)).is_zero());
        assert!(cp.eval(&Scalar::ratio(3, 2)).is_zero());
        assert_eq!(cp.degree(), Some(2));
    }

    #[test]
    fn singular_examples() {
        let s = sl2_space(&[1, 1], 1);
        let minus = s.from_dense(&[Scalar::int(1), Scalar::int(-1)]);
        let plus = s.from_dense(&[Scalar::int(1), Scalar::int(1)]);
        assert!(s.is_singular(&minus).unwrap());
        assert!(!s.is_singular(&plus).unwrap());
        let s0 = sl2_space(&[1, 1], 0);
        assert!(s0.is_singular(&s0.from_dense(&[Scalar::one()])).unwrap());
    }
}
