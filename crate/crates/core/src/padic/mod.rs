//! Finite-precision p-adic numbers in canonical form.
//!
//! A nonzero value is stored as `p^valuation * unit` where `unit` is an
//! integer in `[0, p^prec)` not divisible by `p`; it is known modulo
//! `p^(valuation + prec)`. The relative precision is capped by the context
//! when a value is created and can only shrink under arithmetic: adding
//! values of different valuations keeps the weaker absolute precision, and
//! cancellation raises the valuation while dropping known digits.
//!
//! A value whose known digits are all zero is *zero to precision*: it only
//! records the absolute precision to which it is known to vanish, and
//! `valuation()` refuses to answer for it.

mod analytic;

pub use analytic::{exp_p, log_p};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{is_prime, mod_inverse, p_power, ExactRational};

/// Absolute precision recorded by an exactly known zero.
const EXACT_ZERO: i64 = i64::MAX / 4;

/// The prime and the working relative precision (in digits).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PadicContext {
    p: u64,
    prec: u32,
}

impl PadicContext {
    pub const MIN_PRECISION: u32 = 4;

    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if prec < Self::MIN_PRECISION {
            return Err(Error::PrecisionTooSmall(prec));
        }
        Ok(PadicContext { p, prec })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Same prime, `extra` more digits.
    pub fn widened(&self, extra: u32) -> Self {
        PadicContext {
            p: self.p,
            prec: self.prec + extra,
        }
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        PadicContext {
            p: self.p,
            prec: prec.max(Self::MIN_PRECISION),
        }
    }

    pub fn embed(&self, r: &ExactRational) -> PadicNumber {
        PadicNumber::embed(r, self)
    }

    pub fn embed_int(&self, n: i64) -> PadicNumber {
        PadicNumber::embed(&ExactRational::from(n), self)
    }

    pub fn one(&self) -> PadicNumber {
        self.embed_int(1)
    }

    pub fn zero(&self) -> PadicNumber {
        PadicNumber::exact_zero(self.p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    p: u64,
    /// `v_p` of the value; for zero-to-precision values, the absolute precision.
    valuation: i64,
    unit: BigInt,
    /// Known digits; 0 iff zero to precision.
    prec: u32,
}

fn pow_p(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

impl PadicNumber {
    pub fn exact_zero(p: u64) -> Self {
        Self::zero_to(p, EXACT_ZERO)
    }

    /// Zero known modulo `p^abs`.
    pub fn zero_to(p: u64, abs: i64) -> Self {
        PadicNumber {
            p,
            valuation: abs.min(EXACT_ZERO),
            unit: BigInt::zero(),
            prec: 0,
        }
    }

    /// Builds `p^valuation * value` known to `prec` relative digits, putting
    /// the result in canonical form (extra factors of `p` move into the
    /// valuation and cost known digits).
    pub fn from_parts(p: u64, valuation: i64, value: BigInt, prec: i64) -> Self {
        if prec <= 0 {
            return Self::zero_to(p, valuation.saturating_add(prec));
        }
        let pb = BigInt::from(p);
        let mut value = value.mod_floor(&pow_p(p, prec as u32));
        let mut valuation = valuation;
        let mut prec = prec;
        while prec > 0 {
            if value.is_zero() {
                return Self::zero_to(p, valuation + prec);
            }
            let (q, r) = value.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            value = q;
            valuation += 1;
            prec -= 1;
        }
        if prec == 0 {
            return Self::zero_to(p, valuation);
        }
        PadicNumber {
            p,
            valuation,
            unit: value,
            prec: prec as u32,
        }
    }

    /// Canonical expansion of `r` to the context precision.
    pub fn embed(r: &ExactRational, ctx: &PadicContext) -> Self {
        let p = ctx.p;
        let Some(v) = r.valuation(p) else {
            return Self::exact_zero(p);
        };
        let scaled = r * &p_power(p, -v);
        let unit = scaled
            .residue(p, ctx.prec)
            .expect("unit part has a denominator prime to p");
        Self::from_parts(p, v, unit, ctx.prec as i64)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.prec == 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec == 0 && self.valuation >= EXACT_ZERO
    }

    pub fn valuation(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroValuation);
        }
        Ok(self.valuation)
    }

    /// `p^(-valuation)`; zero for values that are zero to precision.
    pub fn norm(&self) -> ExactRational {
        match self.valuation() {
            Ok(v) => p_power(self.p, -v),
            Err(_) => ExactRational::zero(),
        }
    }

    pub fn relative_precision(&self) -> u32 {
        self.prec
    }

    /// Exponent `e` such that the value is known modulo `p^e`.
    pub fn absolute_precision(&self) -> i64 {
        if self.is_zero() {
            self.valuation
        } else {
            self.valuation + self.prec as i64
        }
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// Canonical digits `x_0, x_1, ...` (least significant first); empty for zero.
    pub fn digits(&self) -> Vec<u64> {
        let pb = BigInt::from(self.p);
        let mut out = Vec::with_capacity(self.prec as usize);
        let mut u = self.unit.clone();
        for _ in 0..self.prec {
            let (q, r) = u.div_rem(&pb);
            out.push(r.try_into().expect("digit fits in u64"));
            u = q;
        }
        out
    }

    /// Digit `j` of the unit part (`a_j` in the canonical expansion); 0 past the known digits.
    pub fn digit(&self, j: u32) -> u64 {
        if j >= self.prec {
            return 0;
        }
        let pb = BigInt::from(self.p);
        let d = (&self.unit / pb.pow(j)).mod_floor(&pb);
        d.try_into().expect("digit fits in u64")
    }

    /// The exact rational `p^valuation * unit` represented by the known digits.
    pub fn to_rational(&self) -> ExactRational {
        if self.is_zero() {
            return ExactRational::zero();
        }
        &ExactRational::from_integer(self.unit.clone()) * &p_power(self.p, self.valuation)
    }

    /// Drops digits so that at most `prec` relative digits remain.
    pub fn truncated(&self, prec: u32) -> Self {
        if self.is_zero() || prec >= self.prec {
            return self.clone();
        }
        Self::from_parts(self.p, self.valuation, self.unit.clone(), prec as i64)
    }

    /// Drops digits at and beyond absolute position `abs`.
    pub fn truncated_abs(&self, abs: i64) -> Self {
        if abs >= self.absolute_precision() {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero_to(self.p, abs);
        }
        Self::from_parts(
            self.p,
            self.valuation,
            self.unit.clone(),
            abs - self.valuation,
        )
    }

    /// Residue of a p-adic integer modulo `p^e`, if known to that precision.
    pub fn residue(&self, e: u32) -> Option<BigInt> {
        if self.absolute_precision() < e as i64 {
            return None;
        }
        if self.is_zero() || self.valuation >= e as i64 {
            return Some(BigInt::zero());
        }
        if self.valuation < 0 {
            return None;
        }
        let m = pow_p(self.p, e);
        Some((&self.unit * pow_p(self.p, self.valuation as u32)).mod_floor(&m))
    }

    /// Valuation of `self - other`, or the absolute precision of the
    /// difference when it is zero to precision.
    pub fn agreement(&self, other: &Self) -> i64 {
        let d = self - other;
        d.valuation.min(EXACT_ZERO)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.assert_same_prime(rhs);
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero_to(
                self.p,
                self.valuation.saturating_sub(rhs.valuation),
            ));
        }
        let prec = self.prec.min(rhs.prec);
        let m = pow_p(self.p, prec);
        let inv = mod_inverse(&rhs.unit, &m).expect("units are invertible");
        Ok(Self::from_parts(
            self.p,
            self.valuation - rhs.valuation,
            &self.unit * inv,
            prec as i64,
        ))
    }

    pub fn inverse(&self) -> Result<Self> {
        let one = Self::from_parts(self.p, 0, BigInt::one(), self.prec.max(1) as i64);
        one.checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::from_parts(self.p, 0, BigInt::one(), self.prec.max(1) as i64);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self * &PadicNumber::embed(
            &ExactRational::from(n),
            &PadicContext {
                p: self.p,
                prec: self.prec.max(1),
            },
        )
    }

    /// Membership in `E_p = { x unit : |x - 1|_p < p^(-1/(p-1)) }`, i.e.
    /// `v_p(x - 1) >= 1` for odd `p` and `>= 2` for `p = 2`.
    pub fn in_ep(&self) -> bool {
        if self.is_zero() || self.valuation != 0 {
            return false;
        }
        let need = ep_threshold(self.p);
        let one = Self::from_parts(self.p, 0, BigInt::one(), self.prec as i64);
        let d = self - &one;
        // for a difference that is zero to precision this is its absolute precision
        d.valuation >= need
    }

    fn assert_same_prime(&self, other: &Self) {
        assert_eq!(
            self.p, other.p,
            "mixing p-adic numbers over different primes"
        );
    }
}

/// Least valuation of `x - 1` for `x` in `E_p` (also the exp_p domain bound).
pub fn ep_threshold(p: u64) -> i64 {
    if p == 2 {
        2
    } else {
        1
    }
}

impl Add<&PadicNumber> for &PadicNumber {
    type Output = PadicNumber;

    fn add(self, rhs: &PadicNumber) -> PadicNumber {
        self.assert_same_prime(rhs);
        let abs = self.absolute_precision().min(rhs.absolute_precision());
        let v = self.valuation.min(rhs.valuation);
        if v >= abs {
            return PadicNumber::zero_to(self.p, abs);
        }
        let lift = |x: &PadicNumber| -> BigInt {
            if x.is_zero() || x.valuation >= abs {
                BigInt::zero()
            } else {
                &x.unit * pow_p(x.p, (x.valuation - v) as u32)
            }
        };
        PadicNumber::from_parts(self.p, v, lift(self) + lift(rhs), abs - v)
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;

    fn neg(self) -> PadicNumber {
        if self.is_zero() {
            return self.clone();
        }
        PadicNumber::from_parts(self.p, self.valuation, -&self.unit, self.prec as i64)
    }
}

impl Sub<&PadicNumber> for &PadicNumber {
    type Output = PadicNumber;

    fn sub(self, rhs: &PadicNumber) -> PadicNumber {
        self + &(-rhs)
    }
}

impl Mul<&PadicNumber> for &PadicNumber {
    type Output = PadicNumber;

    fn mul(self, rhs: &PadicNumber) -> PadicNumber {
        self.assert_same_prime(rhs);
        match (self.is_zero(), rhs.is_zero()) {
            (true, true) => {
                PadicNumber::zero_to(self.p, self.valuation.saturating_add(rhs.valuation))
            }
            (true, false) => {
                PadicNumber::zero_to(self.p, self.valuation.saturating_add(rhs.valuation))
            }
            (false, true) => {
                PadicNumber::zero_to(self.p, rhs.valuation.saturating_add(self.valuation))
            }
            (false, false) => {
                let prec = self.prec.min(rhs.prec);
                PadicNumber::from_parts(
                    self.p,
                    self.valuation + rhs.valuation,
                    &self.unit * &rhs.unit,
                    prec as i64,
                )
            }
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: PadicNumber) -> PadicNumber {
                (&self).$m(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        -&self
    }
}

impl fmt::Display for PadicNumber {
    /// `p^v * (d0 + d1 p + ...)` written as the digit string, most significant first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p, self.valuation);
        }
        let digits = self.digits();
        let body: Vec<String> = digits.iter().rev().map(|d| d.to_string()).collect();
        let sep = if self.p > 10 { "," } else { "" };
        write!(
            f,
            "{}^{} * ...{} + O({}^{})",
            self.p,
            self.valuation,
            body.join(sep),
            self.p,
            self.absolute_precision()
        )
    }
}

impl PartialOrd for PadicNumber {
    /// Orders by `(p, valuation, digits)`; used only to sort results deterministically.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(
            self.p
                .cmp(&other.p)
                .then(self.valuation.cmp(&other.valuation))
                .then(self.digits().cmp(&other.digits()))
                .then(self.prec.cmp(&other.prec)),
        )
    }
}

/// Wire form `{"valuation": int, "digits": [int...], "precision": int}`.
///
/// The prime is not part of the wire form; reports carry it alongside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicRepr {
    pub valuation: i64,
    pub digits: Vec<u64>,
    pub precision: u32,
}

impl PadicNumber {
    pub fn to_repr(&self) -> PadicRepr {
        PadicRepr {
            valuation: self.valuation,
            digits: self.digits(),
            precision: self.prec,
        }
    }

    pub fn from_repr(repr: &PadicRepr, p: u64) -> Result<Self> {
        if repr.digits.len() != repr.precision as usize {
            return Err(Error::InvalidParameters(format!(
                "{} digits listed for precision {}",
                repr.digits.len(),
                repr.precision
            )));
        }
        if repr.digits.iter().any(|&d| d >= p) {
            return Err(Error::InvalidParameters(format!(
                "digit out of range for p = {p}"
            )));
        }
        if repr.precision == 0 {
            return Ok(Self::zero_to(p, repr.valuation));
        }
        if repr.digits[0] == 0 {
            return Err(Error::InvalidParameters("leading digit is zero".into()));
        }
        let pb = BigInt::from(p);
        let unit = repr
            .digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * &pb + BigInt::from(d));
        Ok(Self::from_parts(
            p,
            repr.valuation,
            unit,
            repr.precision as i64,
        ))
    }
}

impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

/// Integer approximant `n` with `|x - n|_p <= p^-abs` for a p-adic integer `x`.
pub(crate) fn integer_approximant(x: &PadicNumber) -> Option<BigInt> {
    if x.is_zero() {
        return Some(BigInt::zero());
    }
    if x.valuation < 0 {
        return None;
    }
    Some(&x.unit * pow_p(x.p, x.valuation as u32))
}
