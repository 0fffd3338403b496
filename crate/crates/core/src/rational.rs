//! Exact rationals and p-adic valuations of integers and rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced rational with positive denominator.
///
/// Serialized as the string `"num/den"` (or `"num"` when the denominator is 1).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::MalformedRational("zero denominator".into()));
        }
        Ok(ExactRational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big_rational(self) -> BigRational {
        self.0
    }

    pub fn pow(&self, e: i32) -> Self {
        ExactRational(num_traits::Pow::pow(&self.0, e))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactRational(self.0.recip()))
    }

    /// `v_p(self)`, or `None` for zero.
    pub fn valuation(&self, p: u64) -> Option<i64> {
        if self.0.is_zero() {
            return None;
        }
        Some(int_valuation(self.0.numer(), p) as i64 - int_valuation(self.0.denom(), p) as i64)
    }

    /// `p^(-v_p(self))`; zero for zero.
    pub fn norm(&self, p: u64) -> ExactRational {
        match self.valuation(p) {
            None => ExactRational::zero(),
            Some(v) => p_power(p, -v),
        }
    }

    /// Residue of a p-integral rational modulo `p^e`, in `[0, p^e)`.
    pub fn residue(&self, p: u64, e: u32) -> Option<BigInt> {
        let modulus = BigInt::from(p).pow(e);
        let den = self.0.denom().mod_floor(&modulus);
        let inv = mod_inverse(&den, &modulus)?;
        Some((self.0.numer() * inv).mod_floor(&modulus))
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedRational(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(ExactRational(BigRational::new(num, den)))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// panics on a zero divisor, like the underlying rational type
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

/// Exponent of `p` in a nonzero integer; 0 for zero.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    if n.is_zero() {
        return 0;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(n)` for machine integers; `u32::MAX` for zero.
pub fn small_valuation(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// `p^e` as an exact rational; `e` may be negative.
pub fn p_power(p: u64, e: i64) -> ExactRational {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        ExactRational::from_integer(base)
    } else {
        ExactRational(BigRational::new(BigInt::one(), base))
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Deterministic primality by trial division; inputs here are small primes.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}
