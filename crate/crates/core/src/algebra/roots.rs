//! Simultaneous root finding (Aberth–Ehrlich) at arbitrary precision.

use super::{AlgebraError, BigComplex, Scalar, UniPoly};

/// All complex roots of `p` at `prec` bits, with multiplicity.
pub fn poly_roots(p: &UniPoly, prec: usize) -> Result<Vec<BigComplex>, AlgebraError> {
    let deg = p.degree().ok_or(AlgebraError::ZeroPolynomialDivisor)?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let coeffs: Vec<BigComplex> = p.coeffs().iter().map(|c| c.to_complex(prec)).collect();
    let lead = coeffs[deg].clone();
    let monic: Vec<BigComplex> = coeffs
        .iter()
        .map(|c| c.div(&lead))
        .collect::<Result<_, _>>()?;
    if deg == 1 {
        return Ok(vec![monic[0].neg()]);
    }

    let radius = 1.0
        + monic[..deg]
            .iter()
            .map(BigComplex::abs_f64)
            .fold(0.0, f64::max);
    let mut z: Vec<BigComplex> = (0..deg)
        .map(|k| {
            let ang = std::f64::consts::TAU * k as f64 / deg as f64 + 0.4;
            BigComplex::from_f64(0.5 * radius * ang.cos(), 0.5 * radius * ang.sin(), prec)
        })
        .collect();

    let eval = |x: &BigComplex| -> (BigComplex, BigComplex) {
        let mut v = BigComplex::zero(prec);
        let mut dv = BigComplex::zero(prec);
        for c in monic.iter().rev() {
            dv = dv.mul(x).add(&v);
            v = v.mul(x).add(c);
        }
        (v, dv)
    };

    let tol = 2f64.powi(-(prec as i32) + 12);
    let max_iter = 100 + 4 * prec;
    for _ in 0..max_iter {
        let mut worst = 0.0f64;
        for k in 0..deg {
            let (v, dv) = eval(&z[k]);
            if v.is_zero() {
                continue;
            }
            let Ok(ratio) = v.div(&dv) else {
                // Stationary point: nudge and retry on the next sweep.
                z[k] = z[k].add(&BigComplex::from_f64(1e-3, 1e-3, prec));
                worst = f64::INFINITY;
                continue;
            };
            let mut s = BigComplex::zero(prec);
            for j in 0..deg {
                if j != k {
                    if let Ok(t) = z[k].sub(&z[j]).inv() {
                        s = s.add(&t);
                    }
                }
            }
            let denom = BigComplex::one(prec).sub(&ratio.mul(&s));
            let step = ratio.div(&denom).unwrap_or(ratio);
            z[k] = z[k].sub(&step);
            let scale = z[k].abs_f64().max(1.0);
            worst = worst.max(step.abs_f64() / scale);
        }
        if worst <= tol {
            break;
        }
    }
    z.sort_by(|a, b| a.cmp_lex(b));
    Ok(z)
}

/// Roots as numeric scalars.
pub fn poly_roots_scalar(p: &UniPoly, prec: usize) -> Result<Vec<Scalar>, AlgebraError> {
    Ok(poly_roots(p, prec)?.into_iter().map(Scalar::Approx).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RootConvention;

    #[test]
    fn recovers_rational_roots() {
        let roots = [Scalar::ratio(1, 3), Scalar::int(-2), Scalar::ratio(7, 5)];
        let p = UniPoly::from_roots(&roots, RootConvention::Reversed);
        let found = poly_roots(&p, 200).unwrap();
        let mut want: Vec<f64> = roots.iter().map(|r| r.to_f64_pair().0).collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (f, w) in found.iter().zip(want) {
            assert!((f.to_f64_pair().0 - w).abs() < 1e-14);
            assert!(f.to_f64_pair().1.abs() < 1e-14);
            assert!(p.eval(&Scalar::Approx(f.clone())).abs_f64() < 1e-50);
        }
    }

    #[test]
    fn complex_pair() {
        // x^2 + 1
        let p = UniPoly::new(vec![Scalar::one(), Scalar::zero(), Scalar::one()]);
        let r = poly_roots(&p, 128).unwrap();
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z.abs_f64() - 1.0).abs() < 1e-30);
            assert!(z.to_f64_pair().0.abs() < 1e-30);
        }
    }
}
