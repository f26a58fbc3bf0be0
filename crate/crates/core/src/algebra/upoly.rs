//! Dense univariate polynomials, constant term first.

use std::fmt;

use super::{AlgebraError, Scalar};

#[derive(Clone, Debug, PartialEq, Default)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

/// Orientation of the linear factors in [`UniPoly::from_roots`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootConvention {
    /// ∏ (t_j − x)
    Reversed,
    /// ∏ (x − t_j)
    Monic,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Scalar::zero(), Scalar::one()])
    }

    /// `a + b x`.
    pub fn linear(a: Scalar, b: Scalar) -> Self {
        Self::new(vec![a, b])
    }

    pub fn from_roots(roots: &[Scalar], convention: RootConvention) -> Self {
        let mut acc = Self::one();
        for r in roots {
            let factor = match convention {
                RootConvention::Reversed => Self::linear(r.clone(), Scalar::int(-1)),
                RootConvention::Monic => Self::linear(-r, Scalar::one()),
            };
            acc = acc.mul(&factor);
        }
        acc
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::int(k as i64))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Long division `self = q·d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), AlgebraError> {
        let dd = d.degree().ok_or(AlgebraError::ZeroPolynomialDivisor)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * dc);
                }
            }
            // The top entry is cancelled by construction; pin it to exact zero so
            // rounding noise on the numeric track does not leak into the remainder.
            rem[k + dd] = Scalar::zero();
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Division with exactness test. Over exact coefficients the remainder must vanish;
    /// otherwise each remainder coefficient must be at most `tol` times the largest
    /// coefficient magnitude of `self` (or `tol` itself when that is below one).
    pub fn exact_divide(&self, d: &Self, tol: f64) -> Result<(Self, bool), AlgebraError> {
        let (q, r) = self.div_rem(d)?;
        let exact = if r.is_exact() {
            r.is_zero()
        } else {
            r.max_abs() <= tol * self.max_abs().max(1.0)
        };
        Ok((q, exact))
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// Is this polynomial zero to within `tol` (exactly zero on the exact track)?
    pub fn is_negligible(&self, tol: f64) -> bool {
        if self.is_exact() {
            self.is_zero()
        } else {
            self.max_abs() <= tol
        }
    }

    pub fn to_numeric(&self, prec: usize) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.to_numeric(prec)).collect())
    }

    /// Substitute `x ↦ a + b x`.
    pub fn compose_linear(&self, a: &Scalar, b: &Scalar) -> Self {
        let lin = Self::linear(a.clone(), b.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(&lin).add(&Self::constant(c.clone())))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}
