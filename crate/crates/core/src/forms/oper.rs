//! The third-order operator D_t attached to an sl3 Bethe candidate.

use crate::algebra::{Scalar, UniPoly};
use crate::cartan::ProblemInstance;
use crate::master::BetheCandidate;

use super::{f_all, f_without, polys_from_t, FormsError};

/// A rational function num/den.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl RatFn {
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        RatFn { num, den }
    }

    pub fn poly(p: UniPoly) -> Self {
        RatFn { num: p, den: UniPoly::one() }
    }

    pub fn add(&self, o: &Self) -> Self {
        RatFn {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&RatFn { num: o.num.neg(), den: o.den.clone() })
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFn {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    pub fn derivative(&self) -> Self {
        RatFn {
            num: self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative())),
            den: self.den.mul(&self.den),
        }
    }

    /// Is num/den zero, with `tol` relative to the numerator's coefficient scale.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.num.is_negligible(tol)
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar, crate::algebra::AlgebraError> {
        self.num.eval(x).checked_div(&self.den.eval(x))
    }
}

/// Indicial polynomial at one singular point against the expected exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentCheck {
    /// `Some(s)` for z_s, `None` for ∞
    pub point: Option<usize>,
    pub expected: Vec<Scalar>,
    /// in ρ, where local solutions behave as (x − z_s)^ρ or x^{−ρ}
    pub indicial: UniPoly,
    pub deviation: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperData {
    /// ln′ of the three factors, left to right, over the common denominator `q`
    pub factor_logs: [UniPoly; 3],
    pub q: UniPoly,
    /// D_t = ∂³ + a₂ ∂² + a₁ ∂ + a₀
    pub a2: RatFn,
    pub a1: RatFn,
    pub a0: RatFn,
    pub kills_p1: bool,
    /// coefficients have no poles at the roots of P₁P₂
    pub regular_at_t: bool,
    pub exponents: Vec<ExponentCheck>,
}

impl OperData {
    pub fn verdict(&self) -> bool {
        self.kills_p1 && self.regular_at_t && self.exponents.iter().all(|e| e.ok)
    }

    /// Expanded operator applied to a rational function.
    pub fn apply(&self, f: &RatFn) -> RatFn {
        let d1 = f.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        d3.add(&self.a2.mul(&d2)).add(&self.a1.mul(&d1)).add(&self.a0.mul(f))
    }

    /// Factored operator applied to a rational function.
    pub fn apply_factored(&self, f: &RatFn) -> RatFn {
        let mut g = f.clone();
        for n in self.factor_logs.iter().rev() {
            let l = RatFn::new(n.clone(), self.q.clone());
            g = g.derivative().sub(&l.mul(&g));
        }
        g
    }
}

fn monic_cubic(roots: &[Scalar]) -> UniPoly {
    UniPoly::from_roots(roots, crate::algebra::RootConvention::Monic)
}

/// ρ(ρ−1)(ρ−2) + α₂ρ(ρ−1) + α₁ρ + α₀
fn indicial(al2: &Scalar, al1: &Scalar, al0: &Scalar) -> UniPoly {
    let rho = UniPoly::x();
    let r1 = rho.sub(&UniPoly::one());
    let r2 = rho.sub(&UniPoly::constant(Scalar::int(2)));
    rho.mul(&r1)
        .mul(&r2)
        .add(&rho.mul(&r1).scale(al2))
        .add(&rho.scale(al1))
        .add(&UniPoly::constant(al0.clone()))
}

fn compare(expected: &[Scalar], ind: &UniPoly, tol: f64, point: Option<usize>) -> ExponentCheck {
    let want = monic_cubic(expected);
    let diff = ind.sub(&want);
    let deviation = diff.max_abs();
    let ok = if diff.is_exact() { diff.is_zero() } else { deviation <= tol * want.max_abs().max(1.0) };
    ExponentCheck {
        point,
        expected: expected.to_vec(),
        indicial: ind.clone(),
        deviation,
        ok,
    }
}

fn divisible(num: &UniPoly, d: &UniPoly, tol: f64) -> Result<bool, FormsError> {
    Ok(num.exact_divide(d, tol)?.1)
}

/// Expands D_t, checks D_t P₁ = 0, regularity at the roots of P₁P₂, and the
/// indicial exponents at every z_s and ∞.
pub fn oper_check(inst: &ProblemInstance, t: &BetheCandidate, tol: f64) -> Result<OperData, FormsError> {
    if inst.rank() != 2 {
        return Err(FormsError::Rank { want: 2, got: inst.rank() });
    }
    if !inst.cartan.is_type_a() {
        return Err(FormsError::NotTypeA);
    }
    let ps = polys_from_t(t);
    let (p1, p2) = (&ps[0], &ps[1]);
    let z = &inst.z;
    let f = f_all(z);
    let tau = |c: usize| {
        z.iter().enumerate().fold(UniPoly::zero(), |acc, (s, _)| {
            acc.add(&f_without(z, s).scale(&Scalar::Exact(inst.weights.m[s][c].clone())))
        })
    };
    let (tau1, tau2) = (tau(0), tau(1));
    let p12 = p1.mul(p2);
    let q = f.mul(&p12);
    let n1 = p1.derivative().mul(&f).mul(p2);
    let n2 = p2.derivative().mul(&f).mul(p1).add(&tau1.mul(&p12)).sub(&n1);
    let n3 = tau1.add(&tau2).mul(&p12).sub(&p2.derivative().mul(&f).mul(p1));

    let pn = n1.add(&n2);
    let qd = q.derivative();
    let m = n2.mul(&n1).sub(&n1.derivative().mul(&q)).add(&n1.mul(&qd));
    let a2n = pn.add(&n3).neg();
    let a1n = m.sub(&pn.derivative().mul(&q).sub(&pn.mul(&qd))).add(&n3.mul(&pn));
    let a0n = m.derivative().mul(&q).sub(&m.mul(&qd).scale(&Scalar::int(2))).sub(&n3.mul(&m));

    let q2 = q.mul(&q);
    let q3 = q2.mul(&q);
    let killed = q3
        .mul(&p1.derivative().derivative().derivative())
        .add(&q2.mul(&a2n).mul(&p1.derivative().derivative()))
        .add(&q.mul(&a1n).mul(&p1.derivative()))
        .add(&a0n.mul(p1));
    let kills_p1 = killed.is_negligible(tol * q3.max_abs().max(1.0));

    let regular_at_t = divisible(&a2n, &p12, tol)?
        && divisible(&a1n, &p12.mul(&p12), tol)?
        && divisible(&a0n, &p12.mul(&p12).mul(&p12), tol)?;

    let mut exponents = Vec::new();
    for (s, zs) in z.iter().enumerate() {
        let rest = f_without(z, s).mul(&p12);
        let rv = rest.eval(zs);
        let al2 = a2n.eval(zs).checked_div(&rv)?;
        let al1 = a1n.eval(zs).checked_div(&rv.pow(2))?;
        let al0 = a0n.eval(zs).checked_div(&rv.pow(3))?;
        let ms = &inst.weights.m[s];
        let m1 = Scalar::Exact(ms[0].clone());
        let m12 = Scalar::Exact(&ms[0] + &ms[1]);
        let expected = vec![Scalar::zero(), &m1 + &Scalar::one(), &m12 + &Scalar::int(2)];
        exponents.push(compare(&expected, &indicial(&al2, &al1, &al0), tol, Some(s)));
    }

    // at ∞, a_k ~ β_k x^{k−3}; D x^λ ~ [λ(λ−1)(λ−2) + β₂λ(λ−1) + β₁λ + β₀] x^{λ−3}
    let dq = q.degree().unwrap_or(0);
    let lc = q.leading().cloned().unwrap_or_else(Scalar::one);
    let top = |num: &UniPoly, k: usize| -> Result<Scalar, FormsError> {
        let want = k * dq - k;
        Ok(num.coeff(want).checked_div(&lc.pow(k as u32))?)
    };
    let (b2, b1, b0) = (top(&a2n, 1)?, top(&a1n, 2)?, top(&a0n, 3)?);
    let (l1, l2) = (Scalar::int(inst.l[0] as i64), Scalar::int(inst.l[1] as i64));
    let big_m = |c: usize| {
        Scalar::Exact(inst.weights.m.iter().fold(crate::algebra::Rational::ZERO, |a, ms| a + &ms[c]))
    };
    let (mm1, mm2) = (big_m(0), big_m(1));
    let rho = [
        -&l1,
        &(&(&l1 - &mm1) - &l2) - &Scalar::one(),
        &(&(&l2 - &mm1) - &mm2) - &Scalar::int(2),
    ];
    let lambdas: Vec<Scalar> = rho.iter().map(|r| -r).collect();
    let ind_lambda = indicial(&b2, &b1, &b0);
    let mut inf = compare(&lambdas, &ind_lambda, tol, None);
    // regular singularity at ∞ needs a_k = O(x^{k−3})
    let bounded = [(&a2n, 1usize), (&a1n, 2), (&a0n, 3)].iter().all(|(num, k)| {
        let want = k * dq - k;
        (want + 1..=num.degree().unwrap_or(0)).all(|j| {
            let c = num.coeff(j);
            c.is_zero() || (!c.is_exact() && c.abs_f64() <= tol * num.max_abs().max(1.0))
        })
    });
    inf.ok &= bounded;
    inf.expected = rho.to_vec();
    // report the indicial polynomial in ρ = −λ
    inf.indicial = ind_lambda.compose_linear(&Scalar::zero(), &Scalar::int(-1));
    exponents.push(inf);

    Ok(OperData {
        factor_logs: [n3, n2, n1],
        q: q.clone(),
        a2: RatFn::new(a2n, q.clone()),
        a1: RatFn::new(a1n, q2),
        a0: RatFn::new(a0n, q3),
        kills_p1,
        regular_at_t,
        exponents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn inst(l: Vec<usize>) -> ProblemInstance {
        let q = |n: i64| Rational::from(n);
        ProblemInstance::type_a(
            vec![vec![q(1), q(3)], vec![q(2), q(1)]],
            vec![Scalar::int(0), Scalar::int(1)],
            l,
        )
        .unwrap()
    }

    #[test]
    fn empty_weight_oper() {
        let i = inst(vec![0, 0]);
        let d = oper_check(&i, &BetheCandidate::empty(2), 0.0).unwrap();
        assert!(d.verdict(), "{:?}", d.exponents);
    }

    #[test]
    fn single_root_oper() {
        let i = inst(vec![1, 0]);
        let t = BetheCandidate::new(vec![vec![Scalar::ratio(1, 3)], vec![]]);
        let d = oper_check(&i, &t, 0.0).unwrap();
        assert!(d.kills_p1 && d.regular_at_t);
        assert!(d.verdict(), "{:?}", d.exponents);
        let bad = BetheCandidate::new(vec![vec![Scalar::ratio(1, 2)], vec![]]);
        let d = oper_check(&i, &bad, 0.0).unwrap();
        assert!(d.kills_p1 && !d.regular_at_t);
    }

    #[test]
    fn factored_equals_expanded() {
        let i = inst(vec![1, 1]);
        let t = BetheCandidate::new(vec![vec![Scalar::ratio(2, 5)], vec![Scalar::ratio(-3, 2)]]);
        let d = oper_check(&i, &t, 0.0).unwrap();
        for k in 0..4usize {
            let mut c = vec![Scalar::zero(); k + 1];
            c[k] = Scalar::one();
            let f = RatFn::poly(UniPoly::new(c).add(&UniPoly::constant(Scalar::ratio(1, 7))));
            assert!(d.apply(&f).sub(&d.apply_factored(&f)).is_zero(0.0));
        }
    }
}
