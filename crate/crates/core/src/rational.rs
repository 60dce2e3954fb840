//! Exact rationals with a stable `"p/q"` string encoding, and certified
//! enclosures of irrational quantities.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number. Serializes as `"p/q"` (or `"p"` when integral)
/// so that reports stay exact and diff cleanly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn pow(&self, e: u32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, e))
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// Decimal approximation, for human-readable output only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(String);

impl FromStr for Rational {
    type Err = ParseRationalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rational::new(n, d))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(std::ops::$tr::$m(self.0, rhs.0))
            }
        }
        impl<'a> std::ops::$tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(std::ops::$tr::$m(&self.0, &rhs.0))
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::integer(n)
    }
}

/// Closed interval `[lo, hi]` known to contain a real quantity. Exact
/// quantities have `lo == hi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalEnclosure {
    pub lo: Rational,
    pub hi: Rational,
}

/// Denominator used for enclosing square roots.
pub const SQRT_SCALE: u64 = 1_000_000;

impl RationalEnclosure {
    pub fn exact(v: Rational) -> Self {
        RationalEnclosure { lo: v.clone(), hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// `√n` enclosed between consecutive multiples of `1/SQRT_SCALE`;
    /// exact when `n · SQRT_SCALE²` is a perfect square.
    pub fn sqrt(n: &BigUint) -> Self {
        let scale = BigUint::from(SQRT_SCALE);
        let scaled = n * &scale * &scale;
        let s = scaled.sqrt();
        let den = BigInt::from(SQRT_SCALE);
        let lo = Rational::new(BigInt::from(s.clone()), den.clone());
        if &s * &s == scaled {
            Self::exact(lo)
        } else {
            let hi = Rational::new(BigInt::from(s + 1u32), den);
            RationalEnclosure { lo, hi }
        }
    }

    /// `c / self` for a positive constant `c` and a positive enclosure.
    pub fn recip_scaled(&self, c: &Rational) -> Self {
        assert!(self.lo.0.is_positive(), "enclosure must be positive");
        RationalEnclosure { lo: c / &self.hi, hi: c / &self.lo }
    }

    /// `hi - lo`
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl fmt::Display for RationalEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// `ℓ^e` as an exact rational; `e` may be negative.
pub fn ell_pow(ell: u64, e: i64) -> Rational {
    let p = BigInt::from(ell).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        for s in ["25/16", "-3/7", "250", "0"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
            let j = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<Rational>(&j).unwrap(), r);
        }
        assert_eq!("6/4".parse::<Rational>().unwrap().to_string(), "3/2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn sqrt_enclosures() {
        let one = RationalEnclosure::sqrt(&BigUint::from(1u32));
        assert!(one.is_exact());
        assert_eq!(one.lo, Rational::one());
        let two = RationalEnclosure::sqrt(&BigUint::from(2u32));
        assert!(!two.is_exact());
        assert!(two.lo.pow(2) < Rational::integer(2));
        assert!(two.hi.pow(2) > Rational::integer(2));
        assert_eq!(two.width(), Rational::new(1, 1_000_000));
    }

    #[test]
    fn floors_and_ceils() {
        let q = Rational::new(1, 4);
        assert_eq!(q.floor(), BigInt::from(0));
        assert_eq!(q.ceil(), BigInt::from(1));
        assert_eq!(ell_pow(2, -2), q);
    }
}
