//! Sparse multivariate polynomials over a fixed, named variable set.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, which gives a
//! lexicographic canonical order for printing and serialization.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, Scalar};

pub type Exponents = Vec<u32>;

/// Shared variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Vars(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Exponents, Scalar>,
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Scalar) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Scalar::one())
    }

    pub fn var(vars: &Vars, idx: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Self::monomial(vars, e, Scalar::one())
    }

    pub fn monomial(vars: &Vars, exps: Exponents, c: Scalar) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent length mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Exponents, Scalar)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(Scalar::is_exact)
    }

    pub fn coefficient(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, e: Exponents, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check_vars(&self, o: &Self) {
        assert!(
            self.vars == o.vars,
            "variable sets differ: {:?} vs {:?}",
            self.vars.names(),
            o.vars.names()
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_vars(o);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_vars(o);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(&self.vars);
        if s.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_vars(o);
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derive(&self, idx: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] -= 1;
            out.add_term(e2, c * &Scalar::int(e[idx] as i64));
        }
        out
    }

    /// `∂^k / ∂v^k`.
    pub fn derive_n(&self, idx: usize, k: u32) -> Self {
        (0..k).fold(self.clone(), |acc, _| acc.derive(idx))
    }

    pub fn derive_by_name(&self, name: &str) -> Result<Self, AlgebraError> {
        let idx = self
            .vars
            .index(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(self.derive(idx))
    }

    /// Evaluation at a point given in variable order.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.vars.len(), "point dimension mismatch");
        // Cache powers per variable.
        let mut powers: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]; point.len()];
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[v].len() <= k as usize {
                    let next = powers[v].last().map(|p| p * &point[v]).unwrap_or_default();
                    powers[v].push(next);
                }
                t = &t * &powers[v][k as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn eval_map(&self, point: &HashMap<String, Scalar>) -> Result<Scalar, AlgebraError> {
        let pt = self
            .vars
            .names()
            .iter()
            .map(|n| {
                point
                    .get(n)
                    .cloned()
                    .ok_or_else(|| AlgebraError::UnknownVariable(n.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.eval(&pt))
    }

    /// Composition with one image per variable (in variable order). All images share
    /// the target variable set.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<Self, AlgebraError> {
        if images.len() != self.vars.len() {
            return Err(AlgebraError::Shape(format!(
                "{} images for {} variables",
                images.len(),
                self.vars.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(Self::constant(&self.vars, self.coefficient(&[]))),
        };
        if images.iter().any(|p| p.vars != target) {
            return Err(AlgebraError::Shape("images over different variable sets".into()));
        }
        let mut cache: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one(&target)]; images.len()];
        let mut out = MultiPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[v].len() <= k as usize {
                    let next = cache[v].last().map(|p| p.mul(&images[v])).expect("nonempty");
                    cache[v].push(next);
                }
                t = t.mul(&cache[v][k as usize]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    pub fn substitute_map(&self, images: &HashMap<String, MultiPoly>) -> Result<Self, AlgebraError> {
        let list = self
            .vars
            .names()
            .iter()
            .map(|n| {
                images
                    .get(n)
                    .cloned()
                    .ok_or_else(|| AlgebraError::UnknownVariable(n.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.substitute(&list)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|e| e[idx]).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// Keep only the terms selected by `keep`.
    pub fn filter(&self, keep: impl Fn(&[u32]) -> bool) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-express over a larger variable set; `map[i]` is the target index of variable `i`.
    pub fn embed(&self, target: &Vars, map: &[usize]) -> Self {
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                e2[map[i]] += k;
            }
            out.add_term(e2, c.clone());
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names = self.vars.names();
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*{}", names[v])?,
                    _ => write!(f, "*{}^{}", names[v], k)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitute_examples() {
        let xv = Vars::new(["x1", "x2"]);
        let uy = Vars::new(["u", "y", "z1", "z2"]);
        let u = MultiPoly::var(&uy, 0);
        let y = MultiPoly::var(&uy, 1);
        let z1 = MultiPoly::var(&uy, 2);
        let z2 = MultiPoly::var(&uy, 3);

        let f = MultiPoly::var(&xv, 0).add(&MultiPoly::var(&xv, 1));
        let zero = MultiPoly::zero(&uy);
        assert!(f.substitute(&[zero.clone(), zero]).unwrap().is_zero());

        let g = MultiPoly::var(&xv, 0).mul(&MultiPoly::var(&xv, 1));
        let a = u.mul(&z1.sub(&y));
        let b = u.mul(&z2.sub(&y));
        let got = g.substitute(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(got, u.pow(2).mul(&z1.sub(&y)).mul(&z2.sub(&y)));

        let mut m = HashMap::new();
        m.insert("x1".to_string(), a);
        assert!(g.substitute_map(&m).is_err());
    }

    #[test]
    fn derive_and_eval() {
        let v = Vars::new(["u", "y"]);
        let f = MultiPoly::var(&v, 0).pow(2).mul(&MultiPoly::var(&v, 1));
        let df = f.derive_by_name("u").unwrap();
        assert_eq!(df, MultiPoly::monomial(&v, vec![1, 1], Scalar::int(2)));
        assert_eq!(f.eval(&[Scalar::int(2), Scalar::int(3)]), Scalar::int(12));
        let g = MultiPoly::var(&v, 0);
        assert!(g.derive(1).is_zero());
        assert!(f.derive_by_name("w").is_err());
    }
}
