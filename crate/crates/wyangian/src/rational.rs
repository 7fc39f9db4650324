//! Exact rational coefficients.
//!
//! Almost every coefficient met in practice is a small integer, so [`Q`]
//! keeps an `i64` numerator/denominator pair and only falls back to a
//! big rational when a checked operation overflows.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational number.
#[derive(Clone, Debug)]
pub enum Q {
    /// Reduced fraction with positive denominator.
    Small(i64, i64),
    /// Reduced fraction that does not fit in `i64` parts.
    Big(BigRational),
}

impl Q {
    pub const ZERO: Q = Q::Small(0, 1);
    pub const ONE: Q = Q::Small(1, 1);

    pub fn int(n: i64) -> Q {
        Q::Small(n, 1)
    }

    /// Builds `n/d`; panics if `d == 0`.
    pub fn new(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        Q::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Q {
        let g = n.gcd(&d);
        let (mut n, mut d) = if g == 0 { (0, 1) } else { (n / g, d / g) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Q::Small(n, d),
            _ => Q::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Q::Small(n, d),
            _ => Q::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, d) => *d == 1,
            Q::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(n, _) => *n < 0,
            Q::Big(r) => r.is_negative(),
        }
    }

    pub fn abs(&self) -> Q {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Q> {
        match self {
            Q::Small(0, _) => None,
            Q::Small(n, d) => Some(Q::from_i128(*d as i128, *n as i128)),
            Q::Big(r) => Some(Q::from_big(r.recip())),
        }
    }

    pub fn pow(&self, e: u32) -> Q {
        let mut acc = Q::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn numer_string(&self) -> String {
        match self {
            Q::Small(n, _) => n.to_string(),
            Q::Big(r) => r.numer().to_string(),
        }
    }

    pub fn denom_string(&self) -> String {
        match self {
            Q::Small(_, d) => d.to_string(),
            Q::Big(r) => r.denom().to_string(),
        }
    }
}

impl Default for Q {
    fn default() -> Self {
        Q::ZERO
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Self {
        Q::int(n)
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Q) -> bool {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => a == c && b == d,
            // Big values are kept only when they do not fit, so mixed
            // variants are never equal.
            (Q::Big(x), Q::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Q {}

impl std::hash::Hash for Q {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Q::Small(n, d) => {
                n.hash(state);
                d.hash(state);
            }
            Q::Big(r) => r.hash(state),
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Q) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Q) -> Ordering {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128))),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Q> for &'a Q {
    type Output = Q;
    fn add(self, rhs: &Q) -> Q {
        if let (Q::Small(a, b), Q::Small(c, d)) = (self, rhs) {
            if b == d {
                if let Some(s) = a.checked_add(*c) {
                    return if *b == 1 { Q::Small(s, 1) } else { Q::from_i128(s as i128, *b as i128) };
                }
            }
            let n = (*a as i128) * (*d as i128) + (*c as i128) * (*b as i128);
            let den = (*b as i128) * (*d as i128);
            return Q::from_i128(n, den);
        }
        Q::from_big(self.to_big() + rhs.to_big())
    }
}

impl<'a> Sub<&'a Q> for &'a Q {
    type Output = Q;
    fn sub(self, rhs: &Q) -> Q {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a Q> for &'a Q {
    type Output = Q;
    fn mul(self, rhs: &Q) -> Q {
        if let (Q::Small(a, b), Q::Small(c, d)) = (self, rhs) {
            if *b == 1 && *d == 1 {
                if let Some(p) = a.checked_mul(*c) {
                    return Q::Small(p, 1);
                }
            }
            return Q::from_i128((*a as i128) * (*c as i128), (*b as i128) * (*d as i128));
        }
        Q::from_big(self.to_big() * rhs.to_big())
    }
}

impl<'a> Div<&'a Q> for &'a Q {
    type Output = Q;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Q) -> Q {
        self * &rhs.recip().expect("division by zero")
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self {
            Q::Small(n, d) => match n.checked_neg() {
                Some(m) => Q::Small(m, d),
                None => Q::from_i128(-(n as i128), d as i128),
            },
            Q::Big(r) => Q::from_big(-r),
        }
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Q> for Q {
            type Output = Q;
            fn $f(self, rhs: Q) -> Q {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Q> for Q {
    fn add_assign(&mut self, rhs: &Q) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Q> for Q {
    fn sub_assign(&mut self, rhs: &Q) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Q> for Q {
    fn mul_assign(&mut self, rhs: &Q) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Q {
    /// Always `num/den`, e.g. `3/1`, `-1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer_string(), self.denom_string())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseQError(pub String);

impl FromStr for Q {
    type Err = ParseQError;

    /// Accepts `n`, `n/d`, with optional sign on the numerator.
    fn from_str(s: &str) -> Result<Q, ParseQError> {
        let s = s.trim();
        let err = || ParseQError(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Q::from_big(BigRational::new(n, d)))
    }
}

impl Zero for Q {
    fn zero() -> Q {
        Q::ZERO
    }
    fn is_zero(&self) -> bool {
        Q::is_zero(self)
    }
}

impl One for Q {
    fn one() -> Q {
        Q::ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_sign_and_gcd() {
        assert_eq!(Q::new(2, -4), Q::new(-1, 2));
        assert_eq!(Q::new(0, -7), Q::ZERO);
        assert_eq!(Q::new(-6, 3).to_string(), "-2/1");
    }

    #[test]
    fn overflow_promotes_to_big() {
        let big = Q::int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Q::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back, Q::Small(..)));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3/1", "-1/2", "0/1", "170141183460469231731687303715884105727/3"] {
            let q: Q = s.parse().unwrap();
            assert_eq!(q.to_string(), s);
        }
        assert_eq!("4".parse::<Q>().unwrap(), Q::int(4));
        assert!("1/0".parse::<Q>().is_err());
    }

    #[test]
    fn ordering_is_numeric() {
        assert!(Q::new(1, 3) < Q::new(1, 2));
        assert!(Q::new(-1, 2) < Q::ZERO);
    }
}
