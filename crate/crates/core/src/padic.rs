//! Rational numbers seen as elements of the p-adic field.
//!
//! Every point the rest of the crate touches is a rational number, so the
//! valuation, norm, digits and fractional part are all exact. The additive
//! character `chi_p(x) = exp(2 pi i {x}_p)` is carried as an exact phase and
//! only turned into a floating-point complex number on request.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A prime number, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if num_prime::nt_funcs::is_prime64(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    pub fn as_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^e` as an exact rational, `e` of any sign.
    pub fn pow(self, e: i64) -> BigRational {
        let base = BigInt::from(self.0).pow(e.unsigned_abs() as u32);
        if e >= 0 {
            BigRational::from_integer(base)
        } else {
            BigRational::new_raw(BigInt::one(), base)
        }
    }

    /// `p^e` as a float.
    pub fn powf(self, e: f64) -> f64 {
        self.as_f64().powf(e)
    }

    pub fn powi(self, e: i64) -> f64 {
        self.as_f64().powf(e as f64)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Number of times `p` divides the nonzero integer `n`.
pub(crate) fn ord_p(p: u64, n: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    if let Some(mut m) = n.abs().to_u128() {
        let p = p as u128;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        return k;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        m = q;
        k += 1;
    }
}

/// Valuation of a rational; `None` stands for `+infinity` (the value 0).
pub(crate) fn valuation_of(p: Prime, x: &BigRational) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(ord_p(p.0, x.numer()) - ord_p(p.0, x.denom()))
}

fn mod_inverse_i128(a: i128, m: i128) -> i128 {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m)
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Fractional part `{x}_p`, computed by a modular inverse.
///
/// With `x = p^g a / b` (p coprime to a and b) and `g < 0`, the result is
/// `(a * b^{-1} mod p^{-g}) / p^{-g}`.
pub(crate) fn fractional_part_of(p: Prime, x: &BigRational) -> BigRational {
    let Some(v) = valuation_of(p, x) else {
        return BigRational::zero();
    };
    if v >= 0 {
        return BigRational::zero();
    }
    let s = (-v) as u32;
    // x = num / den with den = p^s * b
    let num = x.numer();
    let den = x.denom();
    if let (Some(n), Some(d), Some(m)) = (
        num.to_i128(),
        den.to_i128(),
        (p.0 as i128).checked_pow(s).filter(|m| *m < (1i128 << 62)),
    ) {
        let b = d / m;
        let k = (n.rem_euclid(m) * mod_inverse_i128(b, m)).rem_euclid(m);
        return BigRational::new(BigInt::from(k), BigInt::from(m));
    }
    let m = p.as_bigint().pow(s);
    let b = den / &m;
    let k = (num.mod_floor(&m) * mod_inverse_big(&b, &m)).mod_floor(&m);
    BigRational::new(k, m)
}

/// Parses `"num"` or `"num/den"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| err())?;
    let d = BigInt::from_str(d).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(n, d))
}

/// `"num/den"`, denominator omitted when it is 1.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A rational number regarded as an element of `Q_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicRational {
    p: Prime,
    value: BigRational,
}

impl PadicRational {
    pub fn new(p: Prime, value: BigRational) -> Self {
        PadicRational { p, value }
    }

    /// Checks primality of `p`.
    pub fn with_prime(p: u64, value: BigRational) -> Result<Self> {
        Ok(Self::new(Prime::new(p)?, value))
    }

    pub fn from_int(p: Prime, n: i64) -> Self {
        Self::new(p, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(p: Prime, num: i64, den: i64) -> Self {
        Self::new(p, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero(p: Prime) -> Self {
        Self::new(p, BigRational::zero())
    }

    /// `p^e`.
    pub fn power_of_p(p: Prime, e: i64) -> Self {
        Self::new(p, p.pow(e))
    }

    pub fn parse(p: Prime, s: &str) -> Result<Self> {
        Ok(Self::new(p, parse_rational(s)?))
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn into_value(self) -> BigRational {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// `gamma(x)`, or `None` (= +infinity) for zero.
    pub fn valuation(&self) -> Option<i64> {
        valuation_of(self.p, &self.value)
    }

    /// `|x|_p` as an exact rational.
    pub fn norm(&self) -> BigRational {
        match self.valuation() {
            None => BigRational::zero(),
            Some(v) => self.p.pow(-v),
        }
    }

    /// `log_p |x|_p`, `None` for zero.
    pub fn norm_exp(&self) -> Option<i64> {
        self.valuation().map(|v| -v)
    }

    pub fn fractional_part(&self) -> BigRational {
        fractional_part_of(self.p, &self.value)
    }

    /// `chi_p(x) = exp(2 pi i {x}_p)`.
    pub fn character(&self) -> UnitPhase {
        UnitPhase {
            p: self.p,
            phase: self.fractional_part(),
        }
    }

    /// Whether `x` is a p-adic integer.
    pub fn is_integral(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    /// `p^e * x`.
    pub fn scale(&self, e: i64) -> Self {
        Self::new(self.p, &self.value * self.p.pow(e))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self::new(self.p, &self.value * BigInt::from(k))
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.p, other.p,
            "mixing p-adic numbers over different primes"
        );
    }
}

impl fmt::Display for PadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.value))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a PadicRational> for &'a PadicRational {
            type Output = PadicRational;
            fn $m(self, rhs: &'a PadicRational) -> PadicRational {
                self.check(rhs);
                PadicRational::new(self.p, (&self.value).$m(&rhs.value))
            }
        }
        impl $tr for PadicRational {
            type Output = PadicRational;
            fn $m(self, rhs: PadicRational) -> PadicRational {
                (&self).$m(&rhs)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &PadicRational {
    type Output = PadicRational;
    fn neg(self) -> PadicRational {
        PadicRational::new(self.p, -&self.value)
    }
}

impl Neg for PadicRational {
    type Output = PadicRational;
    fn neg(self) -> PadicRational {
        -&self
    }
}

/// `exp(2 pi i q)` for an exact phase `0 <= q < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitPhase {
    p: Prime,
    phase: BigRational,
}

impl UnitPhase {
    /// Reduces `q` modulo 1.
    pub fn new(p: Prime, q: BigRational) -> Self {
        let f = &q - q.floor();
        UnitPhase { p, phase: f }
    }

    pub fn one(p: Prime) -> Self {
        UnitPhase {
            p,
            phase: BigRational::zero(),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn phase(&self) -> &BigRational {
        &self.phase
    }

    pub fn is_one(&self) -> bool {
        self.phase.is_zero()
    }

    /// `e^{2 pi i k q}`.
    pub fn pow(&self, k: i64) -> Self {
        UnitPhase::new(
            self.p,
            &self.phase * BigRational::from_integer(BigInt::from(k)),
        )
    }

    pub fn conj(&self) -> Self {
        Self::new(self.p, -&self.phase)
    }

    /// Double-precision value, exact at the quarter turns.
    pub fn value(&self) -> Complex64 {
        phase_to_complex(&self.phase)
    }
}

pub(crate) fn phase_to_complex(q: &BigRational) -> Complex64 {
    let four = q * BigInt::from(4);
    if four.is_integer() {
        return match four.to_integer().mod_floor(&BigInt::from(4)).to_u8() {
            Some(0) => Complex64::new(1.0, 0.0),
            Some(1) => Complex64::new(0.0, 1.0),
            Some(2) => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let n = q.numer().to_f64().unwrap_or(0.0);
    let d = q.denom().to_f64().unwrap_or(1.0);
    let mut t = q
        .numer()
        .mod_floor(q.denom())
        .to_f64()
        .map(|r| r / d)
        .unwrap_or(n / d);
    if t > 0.5 {
        t -= 1.0;
    }
    let (s, c) = (2.0 * std::f64::consts::PI * t).sin_cos();
    Complex64::new(c, s)
}

impl Mul for &UnitPhase {
    type Output = UnitPhase;
    // roots of unity multiply by adding their phases
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &UnitPhase) -> UnitPhase {
        UnitPhase::new(self.p, &self.phase + &rhs.phase)
    }
}

impl Mul for UnitPhase {
    type Output = UnitPhase;
    fn mul(self, rhs: UnitPhase) -> UnitPhase {
        &self * &rhs
    }
}

impl fmt::Display for UnitPhase {
    /// `k/p^m`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase.is_zero() {
            return f.write_str("0");
        }
        let m = ord_p(self.p.0, self.phase.denom());
        match Some(m).filter(|&m| self.p.pow(m).numer() == self.phase.denom()) {
            Some(m) => write!(f, "{}/{}^{}", self.phase.numer(), self.p, m),
            None => f.write_str(&format_rational(&self.phase)),
        }
    }
}

impl Serialize for UnitPhase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Closed ball `B_gamma(a) = { x : |x - a|_p <= p^gamma }`.
///
/// The center is reduced to the representative `p^{-gamma} {p^gamma a}_p`,
/// so equal balls compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ball {
    center: PadicRational,
    radius_exp: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallRelation {
    Disjoint,
    Equal,
    FirstInsideSecond,
    SecondInsideFirst,
}

impl Ball {
    pub fn new(center: PadicRational, radius_exp: i64) -> Self {
        let p = center.prime();
        let shifted = center.scale(radius_exp);
        let canon = fractional_part_of(p, shifted.value()) * p.pow(-radius_exp);
        Ball {
            center: PadicRational::new(p, canon),
            radius_exp,
        }
    }

    /// `B_gamma(0)`.
    pub fn centered(p: Prime, radius_exp: i64) -> Self {
        Ball {
            center: PadicRational::zero(p),
            radius_exp,
        }
    }

    pub fn prime(&self) -> Prime {
        self.center.prime()
    }

    pub fn center(&self) -> &PadicRational {
        &self.center
    }

    pub fn radius_exp(&self) -> i64 {
        self.radius_exp
    }

    pub fn contains(&self, x: &PadicRational) -> bool {
        let d = x - &self.center;
        d.norm_exp().is_none_or(|e| e <= self.radius_exp)
    }

    /// Whether `self` is a subset of `other` (primes assumed equal).
    pub fn is_inside(&self, other: &Ball) -> bool {
        self.radius_exp <= other.radius_exp && other.contains(&self.center)
    }

    pub fn relation(&self, other: &Ball) -> Result<BallRelation> {
        if self.prime() != other.prime() {
            return Err(Error::PrimeMismatch(
                self.prime().get(),
                other.prime().get(),
            ));
        }
        Ok(match self.radius_exp.cmp(&other.radius_exp) {
            Ordering::Equal => {
                if self.center == other.center {
                    BallRelation::Equal
                } else {
                    BallRelation::Disjoint
                }
            }
            Ordering::Less if other.contains(&self.center) => BallRelation::FirstInsideSecond,
            Ordering::Greater if self.contains(&other.center) => BallRelation::SecondInsideFirst,
            _ => BallRelation::Disjoint,
        })
    }

    /// Haar measure `p^gamma`.
    pub fn haar_measure(&self) -> BigRational {
        self.prime().pow(self.radius_exp)
    }

    /// The `p` disjoint sub-balls of radius `p^{gamma-1}`.
    pub fn children(&self) -> Vec<Ball> {
        let p = self.prime();
        let step = PadicRational::power_of_p(p, -self.radius_exp);
        (0..p.get() as i64)
            .map(|t| Ball::new(&self.center + &step.mul_int(t), self.radius_exp - 1))
            .collect()
    }

    /// The enclosing ball of radius `p^{gamma+1}`.
    pub fn parent(&self) -> Ball {
        Ball::new(self.center.clone(), self.radius_exp + 1)
    }

    /// The enclosing ball of radius `p^level` (`level >= gamma`).
    pub fn ancestor(&self, level: i64) -> Ball {
        debug_assert!(level >= self.radius_exp);
        Ball::new(self.center.clone(), level)
    }

    /// All sub-balls of radius `p^level`, `level <= gamma`.
    pub fn descendants(&self, level: i64) -> Vec<Ball> {
        assert!(level <= self.radius_exp);
        let p = self.prime();
        let count = p.get().pow((self.radius_exp - level) as u32);
        let step = PadicRational::power_of_p(p, -self.radius_exp);
        (0..count as i64)
            .map(|t| Ball::new(&self.center + &step.mul_int(t), level))
            .collect()
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B_{}({})", self.radius_exp, self.center)
    }
}

/// Serde adapter: rationals as `"num/den"` strings.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: u64, n: i64, d: i64) -> PadicRational {
        PadicRational::from_ratio(Prime::new(p).unwrap(), n, d)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Digit recursion: peel off the lowest digit of the canonical expansion.
    fn fractional_part_by_digits(p: u64, x: &BigRational) -> BigRational {
        let pr = Prime::new(p).unwrap();
        let Some(v) = valuation_of(pr, x) else {
            return BigRational::zero();
        };
        if v >= 0 {
            return BigRational::zero();
        }
        let mut y = x * pr.pow(-v); // unit
        let mut acc = BigRational::zero();
        for i in 0..(-v) {
            // digit = y mod p, taken in Z_(p)
            let num = y.numer().clone();
            let den = y.denom().clone();
            let pb = BigInt::from(p);
            let inv = mod_inverse_big(&den, &pb);
            let digit = (num * inv).mod_floor(&pb);
            acc += BigRational::from_integer(digit.clone()) * pr.pow(v + i);
            y = (y - BigRational::from_integer(digit)) / BigRational::from_integer(pb);
        }
        acc
    }

    #[test]
    fn primes_are_checked() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(1_000_000_007).is_ok());
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert_eq!(Prime::new(91), Err(Error::NotPrime(91)));
        assert!(PadicRational::with_prime(4, rat(1, 2)).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(q(3, 12, 1).valuation(), Some(1));
        assert_eq!(q(2, 0, 1).valuation(), None);
        assert_eq!(q(5, 7, 50).valuation(), Some(-2));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(q(3, 12, 1).norm(), rat(1, 3));
        assert_eq!(q(2, 3, 4).norm(), rat(4, 1));
        assert_eq!(q(2, 0, 1).norm(), rat(0, 1));
    }

    #[test]
    fn fractional_part_examples() {
        assert_eq!(q(2, 1, 2).fractional_part(), rat(1, 2));
        assert_eq!(q(2, -1, 2).fractional_part(), rat(1, 2));
        assert_eq!(q(3, 7, 1).fractional_part(), rat(0, 1));
        assert_eq!(fractional_part_by_digits(2, &rat(-1, 2)), rat(1, 2));
        // -1/4 in Q_2: ...1111.11 -> {x} = 3/4
        assert_eq!(q(2, -1, 4).fractional_part(), rat(3, 4));
        assert_eq!(fractional_part_by_digits(2, &rat(-1, 4)), rat(3, 4));
    }

    #[test]
    fn fractional_part_matches_digit_recursion() {
        for p in [2u64, 3, 5, 7] {
            for n in -60i64..60 {
                for d in [1i64, 2, 3, 4, 6, 9, 25, 27, 49, 50, 98, 125, 343, 1000] {
                    let x = rat(n, d);
                    assert_eq!(
                        fractional_part_of(Prime::new(p).unwrap(), &x),
                        fractional_part_by_digits(p, &x),
                        "p={p} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn fractional_part_big_path() {
        let p = Prime::new(3).unwrap();
        let x = BigRational::new(BigInt::from(7), p.as_bigint().pow(90) * 11);
        let f = fractional_part_of(p, &x);
        assert_eq!(f.denom(), &p.as_bigint().pow(90));
        let diff = PadicRational::new(p, x - f);
        assert!(diff.is_integral());
    }

    #[test]
    fn character_examples() {
        let c = q(2, 1, 2).character();
        assert_eq!(c.phase(), &rat(1, 2));
        assert_eq!(c.value(), Complex64::new(-1.0, 0.0));
        let c = q(3, 2, 1).character();
        assert!(c.is_one());
        assert_eq!(c.value(), Complex64::new(1.0, 0.0));
        let c = q(2, -1, 2).character();
        assert_eq!(c.phase(), &rat(1, 2));
        assert_eq!(c.value(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn phase_formatting() {
        assert_eq!(q(2, 1, 4).character().to_string(), "1/2^2");
        assert_eq!(q(3, 5, 1).character().to_string(), "0");
        assert_eq!(q(3, 1, 18).character().to_string(), "5/3^2");
        assert_eq!(
            serde_json::to_string(&q(5, 3, 25).character()).unwrap(),
            "\"3/5^2\""
        );
    }

    #[test]
    fn phase_product_adds_mod_one() {
        let a = q(2, 3, 4).character();
        let b = q(2, 1, 2).character();
        assert_eq!((&a * &b).phase(), &rat(1, 4));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(-1, 2)), "-1/2");
    }

    #[test]
    fn ball_relation_examples() {
        let p = Prime::new(2).unwrap();
        let b = |c: i64, g: i64| Ball::new(PadicRational::from_int(p, c), g);
        assert_eq!(b(0, 0).relation(&b(1, 0)).unwrap(), BallRelation::Equal);
        assert_eq!(
            b(0, -1).relation(&b(1, -1)).unwrap(),
            BallRelation::Disjoint
        );
        assert_eq!(
            b(0, 0).relation(&b(0, 1)).unwrap(),
            BallRelation::FirstInsideSecond
        );
        assert_eq!(
            b(0, 1).relation(&b(0, 0)).unwrap(),
            BallRelation::SecondInsideFirst
        );
        let other = Ball::centered(Prime::new(3).unwrap(), 0);
        assert_eq!(b(0, 0).relation(&other), Err(Error::PrimeMismatch(2, 3)));
    }

    #[test]
    fn haar_measure_examples() {
        let ball = |p: u64, g: i64| Ball::centered(Prime::new(p).unwrap(), g);
        assert_eq!(ball(2, 0).haar_measure(), rat(1, 1));
        assert_eq!(ball(3, -2).haar_measure(), rat(1, 9));
        assert_eq!(ball(5, 2).haar_measure(), rat(25, 1));
    }

    #[test]
    fn canonical_centers() {
        let p = Prime::new(3).unwrap();
        let a = Ball::new(PadicRational::from_ratio(p, 1, 2), -2);
        let b = Ball::new(
            PadicRational::from_ratio(p, 1, 2) + PadicRational::from_int(p, 9 * 7),
            -2,
        );
        assert_eq!(a, b);
        assert!(a.contains(&PadicRational::from_ratio(p, 1, 2)));
        let c = Ball::new(PadicRational::from_ratio(p, 5, 9), 1);
        assert_eq!(c.center(), &PadicRational::from_ratio(p, 2, 9));
    }

    #[test]
    fn children_partition_parent() {
        let p = Prime::new(3).unwrap();
        let ball = Ball::new(PadicRational::from_ratio(p, 4, 9), 1);
        let kids = ball.children();
        assert_eq!(kids.len(), 3);
        let total: BigRational = kids.iter().map(Ball::haar_measure).sum();
        assert_eq!(total, ball.haar_measure());
        for (i, a) in kids.iter().enumerate() {
            assert_eq!(a.relation(&ball).unwrap(), BallRelation::FirstInsideSecond);
            assert_eq!(a.parent(), ball);
            for b in &kids[i + 1..] {
                assert_eq!(a.relation(b).unwrap(), BallRelation::Disjoint);
            }
        }
        assert_eq!(ball.descendants(-1).len(), 9);
    }
}
