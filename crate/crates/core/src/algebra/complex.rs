//! Multiprecision complex numbers on top of `dashu_float`.
//!
//! Every value carries its own working precision in bits. Binary operations
//! round the result to the smaller of the two operand precisions.

use std::cmp::Ordering;
use std::fmt;

use dashu_base::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;

use super::{AlgebraError, Rational};

/// Binary float with round-half-even.
pub type Float = FBig<HalfEven, 2>;

/// Smallest accepted working precision.
pub const MIN_PRECISION: usize = 64;

#[derive(Clone, Debug)]
pub struct BigComplex {
    re: Float,
    im: Float,
    prec: usize,
}

fn round(x: Float, prec: usize) -> Float {
    x.with_precision(prec).value()
}

fn float_zero(prec: usize) -> Float {
    Float::ZERO.with_precision(prec).value()
}

impl BigComplex {
    pub fn new(re: Float, im: Float, prec: usize) -> Self {
        let prec = prec.max(MIN_PRECISION);
        BigComplex {
            re: round(re, prec),
            im: round(im, prec),
            prec,
        }
    }

    pub fn zero(prec: usize) -> Self {
        let prec = prec.max(MIN_PRECISION);
        BigComplex {
            re: float_zero(prec),
            im: float_zero(prec),
            prec,
        }
    }

    pub fn one(prec: usize) -> Self {
        Self::from_rational(&Rational::ONE, prec)
    }

    pub fn from_rational(q: &Rational, prec: usize) -> Self {
        let prec = prec.max(MIN_PRECISION);
        let re: Float = q.to_float::<HalfEven, 2>(prec).value();
        BigComplex {
            re: round(re, prec),
            im: float_zero(prec),
            prec,
        }
    }

    pub fn from_rationals(re: &Rational, im: &Rational, prec: usize) -> Self {
        let prec = prec.max(MIN_PRECISION);
        BigComplex {
            re: round(re.to_float::<HalfEven, 2>(prec).value(), prec),
            im: round(im.to_float::<HalfEven, 2>(prec).value(), prec),
            prec,
        }
    }

    /// Exact conversion of two doubles (every finite `f64` is a dyadic rational).
    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        let cv = |v: f64| -> Float {
            Float::try_from(v).unwrap_or_else(|_| float_zero(prec))
        };
        Self::new(cv(re), cv(im), prec)
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        Self::new(self.re.clone(), self.im.clone(), prec)
    }

    pub fn is_zero(&self) -> bool {
        self.re.repr().is_zero() && self.im.repr().is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.repr().is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        BigComplex {
            re: round(&self.re + &o.re, p),
            im: round(&self.im + &o.im, p),
            prec: p,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        BigComplex {
            re: round(&self.re - &o.re, p),
            im: round(&self.im - &o.im, p),
            prec: p,
        }
    }

    pub fn neg(&self) -> Self {
        BigComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        BigComplex {
            re: round(re, p),
            im: round(im, p),
            prec: p,
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        self.mul(&Self::from_rational(q, self.prec))
    }

    /// |z|² at working precision.
    pub fn norm_sqr(&self) -> Float {
        round(&self.re * &self.re + &self.im * &self.im, self.prec)
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let p = self.prec.min(o.prec);
        // Work at a few guard bits then round.
        let g = p + 8;
        let (a, b) = (round(self.re.clone(), g), round(self.im.clone(), g));
        let (c, d) = (round(o.re.clone(), g), round(o.im.clone(), g));
        let den = &c * &c + &d * &d;
        let re = (&a * &c + &b * &d) / &den;
        let im = (&b * &c - &a * &d) / &den;
        Ok(BigComplex {
            re: round(re, p),
            im: round(im, p),
            prec: p,
        })
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        Self::one(self.prec).div(self)
    }

    /// Magnitude as a double; saturates to `f64::MAX` / 0 outside range.
    pub fn abs_f64(&self) -> f64 {
        let (r, i) = self.to_f64_pair();
        r.hypot(i)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().value(), self.im.to_f64().value())
    }

    /// Ordering used for canonical representatives: real part, then imaginary.
    pub fn cmp_lex(&self, o: &Self) -> Ordering {
        match self.re.partial_cmp(&o.re).unwrap_or(Ordering::Equal) {
            Ordering::Equal => self.im.partial_cmp(&o.im).unwrap_or(Ordering::Equal),
            ord => ord,
        }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec;
        if self.is_zero() {
            return Self::zero(p);
        }
        let g = p + 16;
        let re = round(self.re.clone(), g);
        let im = round(self.im.clone(), g);
        let modulus = (&re * &re + &im * &im).sqrt();
        let two = Float::from(2u8);
        let half_sqrt = |v: Float| -> Float {
            let h = v / &two;
            if h <= float_zero(g) {
                float_zero(g)
            } else {
                h.sqrt()
            }
        };
        let a = half_sqrt(&modulus + &re);
        let b_abs = half_sqrt(&modulus - &re);
        let b = if im < float_zero(g) { -b_abs } else { b_abs };
        BigComplex::new(a, b, p)
    }

    /// Lossless text form: `re|im` with each part `[-]0x<hex significand>p<exp>`.
    pub fn to_hex(&self) -> String {
        format!("{}|{}", float_to_hex(&self.re), float_to_hex(&self.im))
    }

    pub fn from_hex(s: &str, prec: usize) -> Result<Self, AlgebraError> {
        let (r, i) = s
            .split_once('|')
            .ok_or_else(|| AlgebraError::Parse(s.to_string()))?;
        Ok(Self::new(float_from_hex(r)?, float_from_hex(i)?, prec))
    }

    /// Closest rational with denominator a power of two (exact value of the float).
    pub fn to_rational_parts(&self) -> (Rational, Rational) {
        (float_to_rational(&self.re), float_to_rational(&self.im))
    }
}

pub fn float_to_rational(x: &Float) -> Rational {
    let sig = x.repr().significand().clone();
    let exp = x.repr().exponent();
    if exp >= 0 {
        Rational::from(sig << exp as usize)
    } else {
        let den = dashu_int::UBig::ONE << (-exp) as usize;
        Rational::from_parts(sig, den)
    }
}

fn float_to_hex(x: &Float) -> String {
    let sig = x.repr().significand();
    let exp = x.repr().exponent();
    let neg = *sig < IBig::ZERO;
    let mag = if neg { -sig.clone() } else { sig.clone() };
    format!(
        "{}0x{}p{}",
        if neg { "-" } else { "" },
        mag.in_radix(16),
        exp
    )
}

fn float_from_hex(s: &str) -> Result<Float, AlgebraError> {
    let err = || AlgebraError::Parse(s.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let body = body.strip_prefix("0x").ok_or_else(err)?;
    let (mant, exp) = body.split_once('p').ok_or_else(err)?;
    let mag = IBig::from_str_radix(mant, 16).map_err(|_| err())?;
    let exp: isize = exp.parse().map_err(|_| err())?;
    let sig = if neg { -mag } else { mag };
    Ok(Float::from_parts(sig, exp))
}

impl PartialEq for BigComplex {
    fn eq(&self, o: &Self) -> bool {
        self.re == o.re && self.im == o.im
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, i) = self.to_f64_pair();
        if i == 0.0 {
            write!(f, "{r:.17e}")
        } else if i < 0.0 {
            write!(f, "{r:.17e}-{:.17e}i", -i)
        } else {
            write!(f, "{r:.17e}+{i:.17e}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from_parts(n.into(), d.into())
    }

    #[test]
    fn arithmetic_roundtrip() {
        let a = BigComplex::from_rationals(&q(1, 3), &q(-2, 7), 128);
        let b = BigComplex::from_rationals(&q(5, 2), &q(1, 9), 128);
        let back = a.mul(&b).div(&b).unwrap();
        assert!(back.sub(&a).abs_f64() < 1e-36);
        assert!(a.add(&b).sub(&b).sub(&a).abs_f64() < 1e-36);
    }

    #[test]
    fn mixed_precision_rounds_down() {
        let a = BigComplex::one(256);
        let b = BigComplex::one(96);
        assert_eq!(a.add(&b).precision(), 96);
    }

    #[test]
    fn hex_roundtrip_is_lossless() {
        let a = BigComplex::from_rationals(&q(1, 3), &q(-22, 7), 200);
        let s = a.to_hex();
        let b = BigComplex::from_hex(&s, 200).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sqrt_squares_back() {
        let a = BigComplex::from_rationals(&q(-3, 1), &q(4, 1), 128);
        let r = a.sqrt();
        assert!(r.mul(&r).sub(&a).abs_f64() < 1e-30);
        assert!(r.sub(&BigComplex::from_rationals(&q(1, 1), &q(2, 1), 128)).abs_f64() < 1e-30);
    }

    #[test]
    fn divide_by_zero_errors() {
        assert!(BigComplex::one(64).div(&BigComplex::zero(64)).is_err());
    }
}
