//! Rational functions with simple poles: `Σ c_s / (x − z_s)`.

use super::{AlgebraError, Scalar, UniPoly, RootConvention};

#[derive(Clone, Debug, PartialEq)]
pub struct SimplePoleSum {
    poles: Vec<Scalar>,
    residues: Vec<Scalar>,
}

impl SimplePoleSum {
    pub fn new(poles: Vec<Scalar>, residues: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if poles.len() != residues.len() {
            return Err(AlgebraError::Shape(format!(
                "{} poles but {} residues",
                poles.len(),
                residues.len()
            )));
        }
        check_distinct(&poles)?;
        Ok(SimplePoleSum { poles, residues })
    }

    pub fn poles(&self) -> &[Scalar] {
        &self.poles
    }

    pub fn residues(&self) -> &[Scalar] {
        &self.residues
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar, AlgebraError> {
        let mut acc = Scalar::zero();
        for (z, c) in self.poles.iter().zip(&self.residues) {
            acc = &acc + &c.checked_div(&(x - z))?;
        }
        Ok(acc)
    }

    /// `F · Σ c_s/(x − z_s)` with `F = ∏(x − z_s)`, a polynomial of degree < n.
    pub fn cleared(&self) -> UniPoly {
        let mut acc = UniPoly::zero();
        for (s, c) in self.residues.iter().enumerate() {
            let others: Vec<Scalar> = self
                .poles
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != s)
                .map(|(_, z)| z.clone())
                .collect();
            acc = acc.add(&UniPoly::from_roots(&others, RootConvention::Monic).scale(c));
        }
        acc
    }
}

fn check_distinct(poles: &[Scalar]) -> Result<(), AlgebraError> {
    for i in 0..poles.len() {
        for k in i + 1..poles.len() {
            if (&poles[i] - &poles[k]).is_zero() {
                return Err(AlgebraError::RepeatedPole(i, k));
            }
        }
    }
    Ok(())
}

/// Residues of `H / ∏(x − z_s)`.
pub fn partial_fractions_simple(h: &UniPoly, poles: &[Scalar]) -> Result<SimplePoleSum, AlgebraError> {
    check_distinct(poles)?;
    if let Some(d) = h.degree() {
        if d + 1 > poles.len() {
            return Err(AlgebraError::DegreeTooLarge {
                degree: d,
                bound: poles.len().saturating_sub(1),
            });
        }
    }
    let f = UniPoly::from_roots(poles, RootConvention::Monic);
    let df = f.derivative();
    let residues = poles
        .iter()
        .map(|z| h.eval(z).checked_div(&df.eval(z)))
        .collect::<Result<Vec<_>, _>>()?;
    SimplePoleSum::new(poles.to_vec(), residues)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z01() -> Vec<Scalar> {
        vec![Scalar::int(0), Scalar::int(1)]
    }

    #[test]
    fn examples() {
        let s = partial_fractions_simple(&UniPoly::constant(Scalar::int(-2)), &z01()).unwrap();
        assert_eq!(s.residues(), &[Scalar::int(2), Scalar::int(-2)]);
        assert_eq!(s.cleared(), UniPoly::constant(Scalar::int(-2)));

        let s = partial_fractions_simple(&UniPoly::one(), &z01()).unwrap();
        assert_eq!(s.residues(), &[Scalar::int(-1), Scalar::int(1)]);

        let s = partial_fractions_simple(&UniPoly::zero(), &z01()).unwrap();
        assert!(s.residues().iter().all(Scalar::is_zero));
    }

    #[test]
    fn rejects_bad_input() {
        let rep = vec![Scalar::int(1), Scalar::int(1)];
        assert!(partial_fractions_simple(&UniPoly::one(), &rep).is_err());
        assert!(partial_fractions_simple(&UniPoly::x().mul(&UniPoly::x()), &z01()).is_err());
    }
}
