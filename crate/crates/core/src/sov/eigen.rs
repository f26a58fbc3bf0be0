use crate::algebra::Scalar;
use crate::canonical::canonical_vector_in;
use crate::cartan::ProblemInstance;
use crate::master::BetheCandidate;
use crate::rep::WeightSpace;

use super::SovError;

/// Rayleigh quotients of ω(t) under the Gaudin matrices and the relative residual
/// max_i ‖H_iω − μ_iω‖ / ‖ω‖ (sup norms).
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCheck {
    pub mu: Vec<Scalar>,
    pub residual: f64,
    pub norm: f64,
}

pub fn eigenfunction_check(inst: &ProblemInstance, t: &BetheCandidate) -> Result<EigenCheck, SovError> {
    let space = WeightSpace::new(inst, &inst.l)?;
    let v = space.to_dense(&canonical_vector_in(&space, t, &inst.z)?)?;
    let norm = v.iter().map(Scalar::abs_f64).fold(0.0, f64::max);
    let sq = v.iter().fold(Scalar::zero(), |a, x| &a + &(&x.conj() * x));
    let mut mu = Vec::with_capacity(inst.n());
    let mut residual: f64 = 0.0;
    for h in space.gaudin_matrices(&inst.z)? {
        let w = h.mul_vec(&v)?;
        let dot = v.iter().zip(&w).fold(Scalar::zero(), |a, (x, y)| &a + &(&x.conj() * y));
        let m = if sq.is_zero() { Scalar::zero() } else { dot.checked_div(&sq)? };
        let r = w
            .iter()
            .zip(&v)
            .map(|(y, x)| (y - &(&m * x)).abs_f64())
            .fold(0.0, f64::max);
        residual = residual.max(if norm > 0.0 { r / norm } else { r });
        mu.push(m);
    }
    Ok(EigenCheck { mu, residual, norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use crate::master::eigenvalues_from_t;

    #[test]
    fn bethe_vector_is_eigen() {
        let inst = ProblemInstance::type_a(
            vec![vec![Rational::ONE], vec![Rational::ONE]],
            vec![Scalar::int(0), Scalar::int(1)],
            vec![1],
        )
        .unwrap();
        let t = BetheCandidate::new(vec![vec![Scalar::ratio(1, 2)]]);
        let c = eigenfunction_check(&inst, &t).unwrap();
        assert_eq!(c.residual, 0.0);
        assert_eq!(c.mu, eigenvalues_from_t(&inst, &t).unwrap().mu);
        let off = BetheCandidate::new(vec![vec![Scalar::ratio(1, 3)]]);
        assert!(eigenfunction_check(&inst, &off).unwrap().residual > 0.1);
    }
}
