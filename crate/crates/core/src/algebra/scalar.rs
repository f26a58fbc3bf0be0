//! Exact-or-numeric scalars.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_int::{IBig, UBig};

use super::{AlgebraError, BigComplex, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Approx(BigComplex),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Exact(q)
    }
}

impl From<BigComplex> for Scalar {
    fn from(c: BigComplex) -> Self {
        Scalar::Approx(c)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::ZERO)
    }

    pub fn one() -> Self {
        Scalar::Exact(Rational::ONE)
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(Rational::from(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Exact(Rational::from_parts_signed(IBig::from(n), IBig::from(d)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => *q == Rational::ZERO,
            Scalar::Approx(c) => c.is_zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Approx(_) => None,
        }
    }

    /// Working precision of a numeric scalar; `None` for exact ones.
    pub fn precision(&self) -> Option<usize> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Approx(c) => Some(c.precision()),
        }
    }

    pub fn to_complex(&self, prec: usize) -> BigComplex {
        match self {
            Scalar::Exact(q) => BigComplex::from_rational(q, prec),
            Scalar::Approx(c) => c.with_precision(prec),
        }
    }

    /// Numeric view at the given precision (exact values are rounded).
    pub fn to_numeric(&self, prec: usize) -> Scalar {
        Scalar::Approx(self.to_complex(prec))
    }

    pub fn abs_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64().value().abs(),
            Scalar::Approx(c) => c.abs_f64(),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        match self {
            Scalar::Exact(q) => (q.to_f64().value(), 0.0),
            Scalar::Approx(c) => c.to_f64_pair(),
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(_) => self.clone(),
            Scalar::Approx(c) => Scalar::Approx(c.conj()),
        }
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a / b),
            (a, b) => {
                let p = joint_precision(a, b);
                Scalar::Approx(a.to_complex(p).div(&b.to_complex(p))?)
            }
        })
    }

    pub fn inv(&self) -> Result<Scalar, AlgebraError> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.125"` or `"1e-3"`.
    /// Decimals are read exactly as rationals.
    pub fn parse(s: &str) -> Result<Scalar, AlgebraError> {
        parse_rational(s).map(Scalar::Exact)
    }
}

fn joint_precision(a: &Scalar, b: &Scalar) -> usize {
    match (a.precision(), b.precision()) {
        (Some(p), Some(q)) => p.min(q),
        (Some(p), None) | (None, Some(p)) => p,
        (None, None) => super::complex::MIN_PRECISION,
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let t = s.trim();
    let err = || AlgebraError::Parse(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if t.contains('/') {
        let (n, d) = t.split_once('/').ok_or_else(err)?;
        let n = IBig::from_str(n.trim()).map_err(|_| err())?;
        let d = IBig::from_str(d.trim()).map_err(|_| err())?;
        if d == IBig::ZERO {
            return Err(err());
        }
        return Ok(Rational::from_parts_signed(n, d));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i64>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = IBig::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = UBig::from(10u8);
    if scale >= 0 {
        Ok(Rational::from(num * IBig::from(ten.pow(scale as usize))))
    } else {
        Ok(Rational::from_parts(num, ten.pow((-scale) as usize)))
    }
}

pub fn rational_to_string(q: &Rational) -> String {
    if *q.denominator() == UBig::ONE {
        q.numerator().to_string()
    } else {
        format!("{}/{}", q.numerator(), q.denominator())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $cm:ident) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: &'a Scalar) -> Scalar {
                match (self, o) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.$m(b)),
                    (a, b) => {
                        let p = joint_precision(a, b);
                        Scalar::Approx(a.to_complex(p).$cm(&b.to_complex(p)))
                    }
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &'a Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(-q.clone()),
            Scalar::Approx(c) => Scalar::Approx(c.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => f.write_str(&rational_to_string(q)),
            Scalar::Approx(c) => write!(f, "{c}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(Scalar::parse("3/6").unwrap(), Scalar::ratio(1, 2));
        assert_eq!(Scalar::parse("-0.125").unwrap(), Scalar::ratio(-1, 8));
        assert_eq!(Scalar::parse("2.5e1").unwrap(), Scalar::int(25));
        assert_eq!(Scalar::parse("1e-3").unwrap(), Scalar::ratio(1, 1000));
        assert_eq!(Scalar::parse("7").unwrap(), Scalar::int(7));
        assert!(Scalar::parse("1/0").is_err());
        assert!(Scalar::parse("abc").is_err());
        assert!(Scalar::parse("").is_err());
    }

    #[test]
    fn canonical_zero() {
        let z = Scalar::parse("0/5").unwrap();
        let q = z.as_rational().unwrap();
        assert_eq!(*q.denominator(), UBig::ONE);
        assert_eq!(rational_to_string(q), "0");
    }

    #[test]
    fn mixed_promotes_to_numeric() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::Approx(BigComplex::one(128));
        let c = &a + &b;
        assert_eq!(c.precision(), Some(128));
        assert!((c.abs_f64() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exact_division() {
        let a = Scalar::ratio(2, 3);
        assert_eq!(a.checked_div(&Scalar::ratio(4, 9)).unwrap(), Scalar::ratio(3, 2));
        assert!(a.checked_div(&Scalar::zero()).is_err());
        assert_eq!(Scalar::ratio(-2, 3).pow(3), Scalar::ratio(-8, 27));
    }
}
