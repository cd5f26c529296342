//! Exact arithmetic in `ℚ(√2)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `a + b√2` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadRat {
    a: BigRational,
    b: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuadRat {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn sqrt2() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::rational(rat(n, d))
    }

    pub fn rational(a: BigRational) -> Self {
        Self::new(a, BigRational::zero())
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::rational(BigRational::from_integer(n))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign. When the parts have opposite signs, `|a|` is compared with
    /// `|b|√2` by squaring.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sb == Ordering::Equal || sa == sb {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        let two = BigRational::from_integer(2.into());
        if &self.a * &self.a > &self.b * &self.b * two {
            sa
        } else {
            sb
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `1 / (a + b√2) = (a − b√2) / (a² − 2b²)`.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let two = BigRational::from_integer(2.into());
        let norm = &self.a * &self.a - &self.b * &self.b * two;
        Some(Self::new(&self.a / &norm, -&self.b / &norm))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(&self.a * r, &self.b * r)
    }

    /// Exact floor. Over a common denominator `D` the value is
    /// `(A + B√2) / D`; `⌊B√2⌋` comes from an integer square root and the
    /// remaining unit ambiguity is settled by one exact comparison.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        let d = self.a.denom().lcm(self.b.denom());
        let big_a = self.a.numer() * (&d / self.a.denom());
        let big_b = self.b.numer() * (&d / self.b.denom());
        let r: BigInt = Roots::sqrt(&(&big_b * &big_b * 2u32));
        let s = if big_b.is_positive() { r } else { -r - 1 };
        let m0 = (big_a + s).div_floor(&d);
        let next: BigInt = &m0 + 1;
        if Self::from_bigint(next.clone()) <= *self {
            next
        } else {
            m0
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self.clone()).floor()
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        f(&self.a) + f(&self.b) * std::f64::consts::SQRT_2
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Midpoint of two values.
    pub fn midpoint(&self, other: &Self) -> Self {
        (self + other).scale(&rat(1, 2))
    }
}

impl Ord for QuadRat {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b == other.b {
            return self.a.cmp(&other.a);
        }
        (self - other).signum()
    }
}

impl PartialOrd for QuadRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<BigRational> for QuadRat {
    fn from(a: BigRational) -> Self {
        Self::rational(a)
    }
}

impl From<i64> for QuadRat {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl From<BigInt> for QuadRat {
    fn from(n: BigInt) -> Self {
        Self::from_bigint(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&QuadRat> for &QuadRat {
            type Output = QuadRat;
            fn $m(self, rhs: &QuadRat) -> QuadRat {
                let f: fn(&QuadRat, &QuadRat) -> QuadRat = $body;
                f(self, rhs)
            }
        }
        impl $tr<QuadRat> for QuadRat {
            type Output = QuadRat;
            fn $m(self, rhs: QuadRat) -> QuadRat {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadRat> for QuadRat {
            type Output = QuadRat;
            fn $m(self, rhs: &QuadRat) -> QuadRat {
                (&self).$m(rhs)
            }
        }
        impl $tr<QuadRat> for &QuadRat {
            type Output = QuadRat;
            fn $m(self, rhs: QuadRat) -> QuadRat {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |x, y| QuadRat::new(&x.a + &y.a, &x.b + &y.b));
binop!(Sub, sub, |x, y| QuadRat::new(&x.a - &y.a, &x.b - &y.b));
binop!(Mul, mul, |x, y| {
    let two = BigRational::from_integer(2.into());
    QuadRat::new(&x.a * &y.a + &x.b * &y.b * two, &x.a * &y.b + &x.b * &y.a)
});

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat::new(-self.a, -self.b)
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        -self.clone()
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√2", self.b),
            (false, false) if self.b.is_negative() => write!(f, "{} - {}√2", self.a, -&self.b),
            (false, false) => write!(f, "{} + {}√2", self.a, self.b),
        }
    }
}

/// Parses `p/q`, `p/q+r/s*r2` or `p/q-r/s*r2` (integers allowed for either
/// part), which is how values are written on the command line.
impl FromStr for QuadRat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let parse_rat = |t: &str| -> Result<BigRational, String> {
            if t.is_empty() {
                return Err(format!("bad number in {s:?}"));
            }
            t.parse::<BigRational>().map_err(|e| format!("bad number {t:?}: {e}"))
        };
        let Some(body) = s.strip_suffix("*r2") else {
            return Ok(Self::rational(parse_rat(&s)?));
        };
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        match split {
            Some(i) => {
                let (a, b) = body.split_at(i);
                let b = b.strip_prefix('+').unwrap_or(b);
                Ok(Self::new(parse_rat(a)?, parse_rat(b)?))
            }
            None => Ok(Self::new(BigRational::zero(), parse_rat(body)?)),
        }
    }
}

impl Serialize for QuadRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [
            self.a.numer().to_string(),
            self.a.denom().to_string(),
            self.b.numer().to_string(),
            self.b.denom().to_string(),
        ]
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = <[String; 4]>::deserialize(d)?;
        let int = |t: &str| t.parse::<BigInt>().map_err(|e| D::Error::custom(format!("bad integer {t:?}: {e}")));
        let [an, ad, bn, bd] = [int(&parts[0])?, int(&parts[1])?, int(&parts[2])?, int(&parts[3])?];
        if ad.is_zero() || bd.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Self::new(BigRational::new(an, ad), BigRational::new(bn, bd)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_sits_between_known_rationals() {
        let r2 = QuadRat::sqrt2();
        assert!(QuadRat::frac(1414, 1000) < r2);
        assert!(r2 < QuadRat::frac(1415, 1000));
        assert_eq!(&r2 * &r2, QuadRat::int(2));
    }

    #[test]
    fn floor_of_irrationals() {
        assert_eq!(QuadRat::sqrt2().floor(), BigInt::from(1));
        assert_eq!((-QuadRat::sqrt2()).floor(), BigInt::from(-2));
        let x = QuadRat::new(rat(3, 7), rat(-5, 3));
        assert_eq!(x.floor(), BigInt::from((x.to_f64()).floor() as i64));
    }

    #[test]
    fn reciprocal_round_trips() {
        let x = QuadRat::new(rat(1, 3), rat(2, 5));
        assert_eq!(&x * &x.recip().unwrap(), QuadRat::one());
        assert!(QuadRat::zero().recip().is_none());
    }

    #[test]
    fn json_is_four_decimal_strings() {
        let x = QuadRat::new(rat(-1, 2), rat(3, 4));
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"["-1","2","3","4"]"#);
        assert_eq!(serde_json::from_str::<QuadRat>(&text).unwrap(), x);
        assert!(serde_json::from_str::<QuadRat>(r#"["1","0","0","1"]"#).is_err());
    }

    #[test]
    fn parses_command_line_forms() {
        assert_eq!("3/4".parse::<QuadRat>().unwrap(), QuadRat::frac(3, 4));
        assert_eq!("1/2+1/3*r2".parse::<QuadRat>().unwrap(), QuadRat::new(rat(1, 2), rat(1, 3)));
        assert_eq!("-1-2*r2".parse::<QuadRat>().unwrap(), QuadRat::new(rat(-1, 1), rat(-2, 1)));
        assert_eq!("-1*r2".parse::<QuadRat>().unwrap(), -QuadRat::sqrt2());
    }
}
