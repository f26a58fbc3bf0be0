//! Polynomial realizations of the sl2 and sl3 Verma tensor products: generators
//! and Casimir operators as differential operators in the x-variables.

use std::collections::BTreeMap;

use crate::algebra::{Matrix, MultiPoly, Rational, Scalar, Vars};

use super::pbw::Element;
use super::space::{PbwIndex, WeightSpace};
use super::RepError;

/// A differential operator Σ c · x^α ∂^β in normal order (multiplications left).
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp {
    nv: usize,
    terms: BTreeMap<(Vec<u32>, Vec<u32>), Scalar>,
}

fn falling(n: u32, k: u32) -> i64 {
    (0..k).map(|i| (n - i) as i64).product()
}

fn binom(n: u32, k: u32) -> i64 {
    falling(n, k) / falling(k, k)
}

impl DiffOp {
    pub fn zero(nv: usize) -> Self {
        DiffOp {
            nv,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nv: usize, c: Scalar) -> Self {
        let mut op = Self::zero(nv);
        op.push(vec![0; nv], vec![0; nv], c);
        op
    }

    pub fn x(nv: usize, v: usize) -> Self {
        let mut e = vec![0; nv];
        e[v] = 1;
        let mut op = Self::zero(nv);
        op.push(e, vec![0; nv], Scalar::one());
        op
    }

    pub fn d(nv: usize, v: usize) -> Self {
        let mut e = vec![0; nv];
        e[v] = 1;
        let mut op = Self::zero(nv);
        op.push(vec![0; nv], e, Scalar::one());
        op
    }

    fn push(&mut self, xe: Vec<u32>, de: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (xe, de);
        let v = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((xe, de), c) in &o.terms {
            out.push(xe.clone(), de.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.nv);
        for ((xe, de), c) in &self.terms {
            out.push(xe.clone(), de.clone(), c * s);
        }
        out
    }

    /// Operator product `self ∘ o`, normal-ordered by the Leibniz rule.
    pub fn compose(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nv);
        for ((x1, d1), c1) in &self.terms {
            for ((x2, d2), c2) in &o.terms {
                // ∂^{d1} x^{x2} = Σ_γ Π C(d1,γ) falling(x2,γ) x^{x2−γ} ∂^{d1−γ}
                let mut gammas: Vec<Vec<u32>> = vec![Vec::new()];
                for v in 0..self.nv {
                    let top = d1[v].min(x2[v]);
                    gammas = gammas
                        .into_iter()
                        .flat_map(|g| {
                            (0..=top).map(move |k| {
                                let mut g2 = g.clone();
                                g2.push(k);
                                g2
                            })
                        })
                        .collect();
                }
                for g in gammas {
                    let mut coef = 1i64;
                    for v in 0..self.nv {
                        coef *= binom(d1[v], g[v]) * falling(x2[v], g[v]);
                    }
                    let xe: Vec<u32> = (0..self.nv).map(|v| x1[v] + x2[v] - g[v]).collect();
                    let de: Vec<u32> = (0..self.nv).map(|v| d1[v] - g[v] + d2[v]).collect();
                    out.push(xe, de, &(c1 * c2) * &Scalar::int(coef));
                }
            }
        }
        out
    }

    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        let vars = f.vars().clone();
        let mut acc: Vec<(Vec<u32>, Scalar)> = Vec::new();
        for ((xe, de), c) in &self.terms {
            for (e, a) in f.terms() {
                if e.iter().zip(de).any(|(p, q)| p < q) {
                    continue;
                }
                let mut coef = 1i64;
                for v in 0..self.nv {
                    coef *= falling(e[v], de[v]);
                }
                let ne: Vec<u32> = (0..self.nv).map(|v| e[v] - de[v] + xe[v]).collect();
                acc.push((ne, &(a * c) * &Scalar::int(coef)));
            }
        }
        MultiPoly::from_terms(&vars, acc)
    }

    /// Change in the total degree of the variables in `mask` for each term.
    pub fn degree_shifts(&self, mask: &[bool]) -> Vec<i64> {
        self.terms
            .keys()
            .map(|(xe, de)| {
                (0..self.nv)
                    .filter(|&v| mask[v])
                    .map(|v| xe[v] as i64 - de[v] as i64)
                    .sum()
            })
            .collect()
    }

    /// Terms whose multiplier or derivative touches a masked variable.
    pub fn split_touching(&self, mask: &[bool]) -> (DiffOp, DiffOp) {
        let mut yes = Self::zero(self.nv);
        let mut no = Self::zero(self.nv);
        for ((xe, de), c) in &self.terms {
            let touches = (0..self.nv).any(|v| mask[v] && (xe[v] > 0 || de[v] > 0));
            let target = if touches { &mut yes } else { &mut no };
            target.push(xe.clone(), de.clone(), c.clone());
        }
        (yes, no)
    }

    /// Terms by their net degree change on the masked variables.
    pub fn split_by_shift(&self, mask: &[bool]) -> BTreeMap<i64, DiffOp> {
        let mut out: BTreeMap<i64, DiffOp> = BTreeMap::new();
        for ((xe, de), c) in &self.terms {
            let s: i64 = (0..self.nv)
                .filter(|&v| mask[v])
                .map(|v| xe[v] as i64 - de[v] as i64)
                .sum();
            out.entry(s)
                .or_insert_with(|| Self::zero(self.nv))
                .push(xe.clone(), de.clone(), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The x-variable realization for rank 1 or 2.
#[derive(Clone, Debug)]
pub struct PolyModel {
    rank: usize,
    n: usize,
    m: Vec<Vec<Rational>>,
    gram: Vec<Vec<Rational>>,
    vars: Vars,
}

impl PolyModel {
    pub fn new(rank: usize, m: Vec<Vec<Rational>>, gram: Vec<Vec<Rational>>) -> Result<Self, RepError> {
        let n = m.len();
        let names: Vec<String> = match rank {
            1 => (1..=n).map(|i| format!("x{i}")).collect(),
            2 => (1..=n)
                .flat_map(|i| (1..=3).map(move |k| format!("x{k}_{i}")))
                .collect(),
            _ => return Err(RepError::RankTooLarge(rank)),
        };
        Ok(PolyModel {
            rank,
            n,
            m,
            gram,
            vars: Vars::new(names),
        })
    }

    pub fn from_space(space: &WeightSpace) -> Result<Self, RepError> {
        let inst = crate::cartan::ProblemInstance::type_a(
            space.weights().to_vec(),
            (0..space.n()).map(|i| Scalar::int(i as i64)).collect(),
            space.l().to_vec(),
        )
        .map_err(|e| RepError::Shape(e.to_string()))?;
        let gram = inst.pairings().map_err(|e| RepError::Shape(e.to_string()))?.gram;
        Self::new(space.rank(), space.weights().to_vec(), gram)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nv(&self) -> usize {
        self.vars.len()
    }

    /// Index of x_k^{(i)} (k = 1..3, i 0-based) for sl3, x^{(i)} for sl2 (k ignored).
    pub fn var(&self, k: usize, i: usize) -> usize {
        match self.rank {
            1 => i,
            _ => 3 * i + (k - 1),
        }
    }

    fn mm(&self, i: usize, c: usize) -> Scalar {
        Scalar::Exact(self.m[i][c - 1].clone())
    }

    /// Mask of the x₃ variables (sl3 degree).
    pub fn x3_mask(&self) -> Vec<bool> {
        (0..self.nv()).map(|v| self.rank == 2 && v % 3 == 2).collect()
    }

    /// Monomial of a basis index.
    pub fn monomial(&self, b: &PbwIndex) -> Vec<u32> {
        let mut e = vec![0; self.nv()];
        for (i, f) in b.factors().iter().enumerate() {
            match self.rank {
                1 => e[i] = f[0],
                _ => {
                    // PBW order (e21, e31, e32) ↔ (x1, x3, x2)
                    e[self.var(1, i)] = f[0];
                    e[self.var(3, i)] = f[1];
                    e[self.var(2, i)] = f[2];
                }
            }
        }
        e
    }

    pub fn index_of_monomial(&self, e: &[u32]) -> PbwIndex {
        PbwIndex(
            (0..self.n)
                .map(|i| match self.rank {
                    1 => vec![e[i]],
                    _ => vec![e[self.var(1, i)], e[self.var(3, i)], e[self.var(2, i)]],
                })
                .collect(),
        )
    }

    /// Generator in factor i.
    pub fn generator(&self, x: Element, i: usize) -> DiffOp {
        let nv = self.nv();
        let xx = |k: usize| DiffOp::x(nv, self.var(k, i));
        let dd = |k: usize| DiffOp::d(nv, self.var(k, i));
        let c = |s: Scalar| DiffOp::constant(nv, s);
        let int = |v: i64| c(Scalar::int(v));
        if self.rank == 1 {
            let m = self.mm(i, 1);
            return match x {
                Element::E(2, 1) => xx(1),
                Element::E(1, 2) => xx(1).compose(&dd(1)).compose(&dd(1)).scale(&Scalar::int(-1)).add(&dd(1).scale(&m)),
                Element::H(1) => xx(1).compose(&dd(1)).scale(&Scalar::int(-2)).add(&c(m)),
                _ => panic!("not an sl2 element: {x:?}"),
            };
        }
        let (m1, m2) = (self.mm(i, 1), self.mm(i, 2));
        let (x1, x2, x3) = (xx(1), xx(2), xx(3));
        let (d1, d2, d3) = (dd(1), dd(2), dd(3));
        match x {
            Element::E(2, 1) => x1,
            Element::E(3, 1) => x3,
            Element::E(3, 2) => x2.add(&x3.compose(&d1)),
            Element::H(1) => x1
                .compose(&d1)
                .scale(&Scalar::int(-2))
                .add(&x2.compose(&d2))
                .sub(&x3.compose(&d3))
                .add(&c(m1)),
            Element::H(2) => x2
                .compose(&d2)
                .scale(&Scalar::int(-2))
                .add(&x1.compose(&d1))
                .sub(&x3.compose(&d3))
                .add(&c(m2)),
            Element::E(1, 2) => x1
                .compose(&d1)
                .compose(&d1)
                .scale(&Scalar::int(-1))
                .add(&x2.compose(&d1).compose(&d2))
                .sub(&x2.compose(&d3))
                .sub(&x3.compose(&d3).compose(&d1))
                .add(&d1.scale(&m1)),
            Element::E(2, 3) => x2
                .compose(&d2)
                .compose(&d2)
                .scale(&Scalar::int(-1))
                .add(&x1.compose(&d3))
                .add(&d2.scale(&m2)),
            Element::E(1, 3) => x3
                .compose(&d3)
                .compose(&d3)
                .scale(&Scalar::int(-1))
                .sub(&x1.compose(&d1).compose(&d3))
                .add(&x2.compose(&d1).compose(&d2).compose(&d2))
                .sub(&x2.compose(&d2).compose(&d3))
                .sub(&d1.compose(&d2).scale(&m2))
                .add(&d3.scale(&(&m1 + &m2)))
                .add(&int(0)),
            _ => panic!("not an sl3 element: {x:?}"),
        }
    }

    /// Ω^{(ij)} assembled from the generator operators.
    pub fn casimir(&self, i: usize, j: usize) -> DiffOp {
        let nv = self.nv();
        let r1 = self.rank + 1;
        let mut om = DiffOp::zero(nv);
        for a in 1..=r1 {
            for b in 1..=r1 {
                if a != b {
                    om = om.add(&self.generator(Element::E(a, b), i).compose(&self.generator(Element::E(b, a), j)));
                }
            }
        }
        let ainv = crate::cartan::make_cartan_A(self.rank).inverse().expect("type A");
        for c in 1..=self.rank {
            for d in 1..=self.rank {
                let hc = self.generator(Element::H(c), i);
                let hd = self.generator(Element::H(d), j);
                om = om.add(&hc.compose(&hd).scale(&Scalar::Exact(ainv[c - 1][d - 1].clone())));
            }
        }
        om
    }

    /// Closed form of the sl2 Casimir: −x_i x_j(∂_i − ∂_j)² + (m_i x_j − m_j x_i)(∂_i − ∂_j) + (Λ_i,Λ_j).
    pub fn casimir_sl2_closed(&self, i: usize, j: usize) -> DiffOp {
        let nv = self.nv();
        let (xi, xj) = (DiffOp::x(nv, i), DiffOp::x(nv, j));
        let dij = DiffOp::d(nv, i).sub(&DiffOp::d(nv, j));
        let (mi, mj) = (self.mm(i, 1), self.mm(j, 1));
        xi.compose(&xj)
            .compose(&dij)
            .compose(&dij)
            .scale(&Scalar::int(-1))
            .add(&xj.scale(&mi).sub(&xi.scale(&mj)).compose(&dij))
            .add(&DiffOp::constant(nv, Scalar::Exact(self.gram[i][j].clone())))
    }

    /// The four graded parts (Ω₀, Ω̃₀, Ω_{>0}, Ω_{<0}) for sl3.
    pub fn casimir_graded(&self, i: usize, j: usize) -> Result<[DiffOp; 4], RepError> {
        if self.rank != 2 {
            return Err(RepError::Shape("graded Casimir exists for sl3 only".into()));
        }
        let nv = self.nv();
        let x = |k: usize, s: usize| DiffOp::x(nv, self.var(k, s));
        let d = |k: usize, s: usize| DiffOp::d(nv, self.var(k, s));
        let c = |v: Scalar| DiffOp::constant(nv, v);
        let diff = |k: usize| d(k, i).sub(&d(k, j));
        let (mi1, mi2) = (self.mm(i, 1), self.mm(i, 2));
        let (mj1, mj2) = (self.mm(j, 1), self.mm(j, 2));
        let gram = Scalar::Exact(self.gram[i][j].clone());

        let omega0 = c(gram)
            .add(
                &x(1, j)
                    .compose(&x(2, i))
                    .compose(&d(2, i))
                    .sub(&x(1, i).compose(&x(2, j)).compose(&d(2, j)))
                    .compose(&diff(1)),
            )
            .sub(&x(1, i).compose(&x(1, j)).compose(&diff(1)).compose(&diff(1)))
            .sub(&x(2, i).compose(&x(2, j)).compose(&diff(2)).compose(&diff(2)))
            .add(&x(1, j).scale(&mi1).sub(&x(1, i).scale(&mj1)).compose(&diff(1)))
            .add(&x(2, j).scale(&mi2).sub(&x(2, i).scale(&mj2)).compose(&diff(2)));

        let mi12 = &mi1 + &mi2;
        let mj12 = &mj1 + &mj2;
        let omega0t = x(3, i)
            .compose(&x(1, j))
            .add(&x(1, i).compose(&x(3, j)))
            .compose(&diff(1))
            .compose(&diff(3))
            .scale(&Scalar::int(-1))
            .sub(&x(3, i).compose(&x(3, j)).compose(&diff(3)).compose(&diff(3)))
            .add(
                &x(2, j)
                    .compose(&x(3, i))
                    .compose(&d(2, j))
                    .sub(&x(2, i).compose(&x(3, j)).compose(&d(2, i)))
                    .compose(&diff(3)),
            )
            .add(&x(3, j).scale(&mi12).sub(&x(3, i).scale(&mj12)).compose(&diff(3)));

        let omega_up = x(2, i)
            .compose(&x(3, j))
            .compose(&d(2, i))
            .compose(&d(2, i))
            .sub(&x(3, i).compose(&x(2, j)).compose(&d(2, j)).compose(&d(2, j)))
            .compose(&diff(1))
            .add(
                &x(3, i)
                    .compose(&d(2, j))
                    .scale(&mj2)
                    .sub(&x(3, j).compose(&d(2, i)).scale(&mi2))
                    .compose(&diff(1)),
            );

        let omega_down = x(1, i)
            .compose(&x(2, j))
            .sub(&x(1, j).compose(&x(2, i)))
            .compose(&diff(3));

        Ok([omega0, omega0t, omega_up, omega_down])
    }

    /// Matrix of an operator on M[l] → M[l′] in the PBW-identified monomial basis.
    pub fn matrix_of(&self, op: &DiffOp, source: &WeightSpace, target: &WeightSpace) -> Result<Matrix, RepError> {
        let mut mat = Matrix::zeros(target.dim(), source.dim());
        for (col, b) in source.basis().iter().enumerate() {
            let f = MultiPoly::monomial(&self.vars, self.monomial(b), Scalar::one());
            let g = op.apply(&f);
            for (e, c) in g.terms() {
                let idx = self.index_of_monomial(e);
                let row = target.index_of(&idx).ok_or(RepError::WrongSubspace)?;
                mat.add_to(row, col, c);
            }
        }
        Ok(mat)
    }

    /// Polynomial of a basis vector.
    pub fn polynomial_of(&self, space: &WeightSpace, v: &super::TensorVector) -> Result<MultiPoly, RepError> {
        let dense = space.to_dense(v)?;
        Ok(MultiPoly::from_terms(
            &self.vars,
            space
                .basis()
                .iter()
                .zip(dense)
                .map(|(b, c)| (self.monomial(b), c)),
        ))
    }

    /// Generator matrices on M[l] (sources and targets as in [`WeightSpace::generator_matrix`]).
    pub fn generator_matrix(&self, x: Element, space: &WeightSpace) -> Result<Matrix, RepError> {
        let (target, _) = space.generator_matrix(x);
        let mut op = DiffOp::zero(self.nv());
        for i in 0..self.n {
            op = op.add(&self.generator(x, i));
        }
        self.matrix_of(&op, space, &target)
    }

    /// Gaudin Hamiltonians as operators.
    pub fn gaudin_ops(&self, z: &[Scalar]) -> Result<Vec<DiffOp>, RepError> {
        self.gaudin_from(z, |i, j| self.casimir(i, j))
    }

    /// Σ_{j≠i} op(i,j)/(z_i − z_j) for a pairwise operator family.
    pub fn gaudin_from(&self, z: &[Scalar], op: impl Fn(usize, usize) -> DiffOp) -> Result<Vec<DiffOp>, RepError> {
        (0..self.n)
            .map(|i| {
                let mut h = DiffOp::zero(self.nv());
                for j in 0..self.n {
                    if j == i {
                        continue;
                    }
                    let w = Scalar::one()
                        .checked_div(&(&z[i] - &z[j]))
                        .map_err(|_| RepError::CoincidentPoints(i, j))?;
                    h = h.add(&op(i, j).scale(&w));
                }
                Ok(h)
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[Vec<Rational>] {
        &self.m
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }
}

/// All generator matrices on M[l] built from the polynomial model (rank ≤ 2).
pub fn polynomial_model_matrices(space: &WeightSpace) -> Result<Vec<(Element, Matrix)>, RepError> {
    let model = PolyModel::from_space(space)?;
    all_elements(space.rank())
        .into_iter()
        .map(|x| model.generator_matrix(x, space).map(|m| (x, m)))
        .collect()
}

pub fn all_elements(rank: usize) -> Vec<Element> {
    let r1 = rank + 1;
    let mut v = Vec::new();
    for a in 1..=r1 {
        for b in 1..=r1 {
            if a != b {
                v.push(Element::E(a, b));
            }
        }
    }
    for c in 1..=rank {
        v.push(Element::H(c));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_parts_signed(n.into(), d.into())
    }

    #[test]
    fn sl2_e_on_x() {
        let model = PolyModel::new(1, vec![vec![q(5, 3)]], vec![vec![q(25, 18)]]).unwrap();
        let e = model.generator(Element::E(1, 2), 0);
        let x = MultiPoly::var(model.vars(), 0);
        assert_eq!(e.apply(&x), MultiPoly::constant(model.vars(), Scalar::ratio(5, 3)));
    }

    #[test]
    fn compose_leibniz() {
        // ∂ ∘ x = x∂ + 1
        let d = DiffOp::d(1, 0);
        let x = DiffOp::x(1, 0);
        let got = d.compose(&x);
        let want = x.compose(&d).add(&DiffOp::constant(1, Scalar::one()));
        assert_eq!(got, want);
    }

    #[test]
    fn generators_match_straightening() {
        for (rank, l) in [(1usize, vec![2usize]), (2, vec![1, 1]), (2, vec![2, 1])] {
            let m = (0..2)
                .map(|s| (0..rank).map(|c| q(2 * s as i64 + c as i64 + 1, 3)).collect())
                .collect();
            let space = WeightSpace::from_parts(rank, m, &l);
            for (x, pm) in polynomial_model_matrices(&space).unwrap() {
                let (_, sm) = space.generator_matrix(x);
                assert_eq!(pm, sm, "generator {x:?} rank {rank} l {l:?}");
            }
        }
    }

    fn sl3_model() -> PolyModel {
        let m = vec![vec![q(1, 3), q(2, 1)], vec![q(-3, 2), q(5, 7)]];
        let space = WeightSpace::from_parts(2, m, &[1, 1]);
        PolyModel::from_space(&space).unwrap()
    }

    #[test]
    fn casimir_matches_straightening() {
        for l in [vec![1usize, 1], vec![2, 1], vec![2, 2]] {
            let m = vec![vec![q(1, 3), q(2, 1)], vec![q(-3, 2), q(5, 7)]];
            let space = WeightSpace::from_parts(2, m, &l);
            let model = PolyModel::from_space(&space).unwrap();
            let om = model.matrix_of(&model.casimir(0, 1), &space, &space).unwrap();
            assert_eq!(om, space.casimir_matrix(0, 1).unwrap());
        }
        let space = WeightSpace::from_parts(1, vec![vec![q(1, 2)], vec![q(4, 3)]], &[3]);
        let model = PolyModel::from_space(&space).unwrap();
        assert_eq!(model.casimir(0, 1), model.casimir_sl2_closed(0, 1));
        let om = model.matrix_of(&model.casimir(0, 1), &space, &space).unwrap();
        assert_eq!(om, space.casimir_matrix(0, 1).unwrap());
    }

    #[test]
    fn graded_parts_sum_and_classify() {
        let model = sl3_model();
        let om = model.casimir(0, 1);
        let [o0, o0t, up, down] = model.casimir_graded(0, 1).unwrap();
        assert_eq!(o0.add(&o0t).add(&up).add(&down), om);
        let mask = model.x3_mask();
        let by = om.split_by_shift(&mask);
        assert_eq!(by.get(&1), Some(&up));
        assert_eq!(by.get(&-1), Some(&down));
        let (touch, rest) = by[&0].split_touching(&mask);
        assert_eq!(touch, o0t);
        assert_eq!(rest, o0);
        assert_eq!(by.len(), 3);
    }
}
