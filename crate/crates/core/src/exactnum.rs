//! Exact arithmetic in Z[1/6].
//!
//! A [`Coefficient`] stores `numerator · 2^(-exp2) · 3^(-exp3)` with the
//! numerator coprime to 6. Every value therefore has exactly one
//! representation, and a denominator containing a prime other than 2 or 3
//! cannot be constructed at all.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::{ExtendedGcd, Integer};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coefficient {
    num: BigInt,
    exp2: i32,
    exp3: i32,
}

fn strip(mut n: BigInt) -> (BigInt, i32, i32) {
    if n.is_zero() {
        return (n, 0, 0);
    }
    let v2 = n.trailing_zeros().unwrap_or(0);
    if v2 > 0 {
        n >>= v2;
    }
    let three = BigInt::from(3u8);
    let mut v3 = 0i32;
    loop {
        let (q, r) = n.div_rem(&three);
        if !r.is_zero() {
            break;
        }
        n = q;
        v3 += 1;
    }
    (n, v2 as i32, v3)
}

fn pow3(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(3u8), e as usize)
}

fn scale(n: &BigInt, e2: u32, e3: u32) -> BigInt {
    let mut out = n.clone();
    if e3 > 0 {
        out *= pow3(e3);
    }
    if e2 > 0 {
        out <<= e2;
    }
    out
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient { num: BigInt::zero(), exp2: 0, exp3: 0 }
    }

    pub fn one() -> Self {
        Coefficient { num: BigInt::one(), exp2: 0, exp3: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        let (num, v2, v3) = strip(n.into());
        Coefficient { num, exp2: -v2, exp3: -v3 }
    }

    /// `n / (2^a 3^b)`.
    pub fn from_parts<T: Into<BigInt>>(n: T, a: u32, b: u32) -> Self {
        let mut c = Coefficient::from_int(n);
        if !c.is_zero() {
            c.exp2 += a as i32;
            c.exp3 += b as i32;
        }
        c
    }

    /// The unit `2^a 3^b` for arbitrary signed exponents.
    pub fn unit(a: i32, b: i32) -> Self {
        Coefficient { num: BigInt::one(), exp2: -a, exp3: -b }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exp2(&self) -> i32 {
        self.exp2
    }

    pub fn exp3(&self) -> i32 {
        self.exp3
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.exp2 == 0 && self.exp3 == 0
    }

    pub fn is_unit(&self) -> bool {
        !self.num.is_zero() && self.num.magnitude().is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.num.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Euclidean size: absolute value of the 6-free part.
    pub fn norm6(&self) -> BigInt {
        self.num.abs()
    }

    /// The unit part `±2^a 3^b` such that `self = unit_part · norm6`.
    pub fn unit_part(&self) -> Coefficient {
        if self.is_zero() {
            return Coefficient::one();
        }
        let s = if self.num.is_negative() { -BigInt::one() } else { BigInt::one() };
        Coefficient { num: s, exp2: self.exp2, exp3: self.exp3 }
    }

    /// Inverse of a unit; `None` for non-units.
    pub fn inverse(&self) -> Option<Coefficient> {
        if !self.is_unit() {
            return None;
        }
        Some(Coefficient { num: self.num.clone(), exp2: -self.exp2, exp3: -self.exp3 })
    }

    /// `self / other` when the quotient lies in Z[1/6].
    pub fn checked_div(&self, other: &Coefficient) -> Option<Coefficient> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Coefficient::zero());
        }
        let (q, r) = self.num.div_rem(&other.num);
        if !r.is_zero() {
            return None;
        }
        Some(Coefficient { num: q, exp2: self.exp2 - other.exp2, exp3: self.exp3 - other.exp3 })
    }

    pub fn div_unit(&self, unit: &Coefficient) -> Coefficient {
        self.checked_div(unit).expect("division by a non-unit")
    }

    /// Euclidean division under the 6-free absolute value:
    /// `self = q·b + r` with `|r|₆ < |b|₆`.
    pub fn euclidean_divide(&self, b: &Coefficient) -> Result<(Coefficient, Coefficient)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok((Coefficient::zero(), Coefficient::zero()));
        }
        let bn = b.num.abs();
        let (q, r) = self.num.div_mod_floor(&bn);
        let ua = Coefficient { num: BigInt::one(), exp2: self.exp2, exp3: self.exp3 };
        let ub = b.unit_part();
        let q = &ua * &Coefficient::from_int(q);
        let q = q.div_unit(&ub);
        let r = &ua * &Coefficient::from_int(r);
        Ok((q, r))
    }

    /// Extended gcd on 6-free parts: returns `(g, s, t)` with
    /// `s·self + t·other = g` and `g` a positive 6-free integer.
    pub fn xgcd(&self, other: &Coefficient) -> (Coefficient, Coefficient, Coefficient) {
        let ExtendedGcd { gcd, x, y, .. } = self.num.extended_gcd(&other.num);
        let ua = Coefficient { num: BigInt::one(), exp2: self.exp2, exp3: self.exp3 };
        let ub = Coefficient { num: BigInt::one(), exp2: other.exp2, exp3: other.exp3 };
        let s = Coefficient::from_int(x).div_unit(&ua);
        let t = Coefficient::from_int(y).div_unit(&ub);
        (Coefficient::from_int(gcd), s, t)
    }

    pub fn pow(&self, e: u32) -> Coefficient {
        Coefficient {
            num: num_traits::pow(self.num.clone(), e as usize),
            exp2: self.exp2 * e as i32,
            exp3: self.exp3 * e as i32,
        }
    }

    /// Numerator and positive denominator of the value as ordinary integers.
    pub fn to_fraction(&self) -> (BigInt, BigInt) {
        if self.is_zero() {
            return (BigInt::zero(), BigInt::one());
        }
        let n = scale(&self.num, (-self.exp2).max(0) as u32, (-self.exp3).max(0) as u32);
        let d = scale(&BigInt::one(), self.exp2.max(0) as u32, self.exp3.max(0) as u32);
        (n, d)
    }

    /// `n / d` when the reduced denominator is a product of 2s and 3s.
    pub fn from_fraction(n: &BigInt, d: &BigInt) -> Option<Coefficient> {
        if d.is_zero() {
            return None;
        }
        let (dn, d2, d3) = strip(d.clone());
        let (nn, n2, n3) = strip(n.clone());
        if nn.is_zero() {
            return Some(Coefficient::zero());
        }
        let (q, r) = nn.div_rem(&dn);
        if !r.is_zero() {
            return None;
        }
        Some(Coefficient { num: q, exp2: d2 - n2, exp3: d3 - n3 })
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.exp2 > 0 || self.exp3 > 0 {
            return None;
        }
        self.to_fraction().0.to_i64()
    }

    /// Residue modulo a prime `p ≥ 5`.
    pub fn mod_prime(&self, p: u64) -> u64 {
        if self.is_zero() {
            return 0;
        }
        let pb = BigInt::from(p);
        let mut v = self.num.mod_floor(&pb).to_u64().unwrap();
        let inv2 = p.div_ceil(2);
        let inv3 = modinv(3, p);
        let (f2, e2) = if self.exp2 >= 0 { (inv2, self.exp2) } else { (2, -self.exp2) };
        let (f3, e3) = if self.exp3 >= 0 { (inv3, self.exp3) } else { (3, -self.exp3) };
        v = mulmod(v, powmod(f2, e2 as u64, p), p);
        mulmod(v, powmod(f3, e3 as u64, p), p)
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn modinv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, b: &Coefficient) -> Coefficient {
        if self.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return self.clone();
        }
        let e2 = self.exp2.max(b.exp2);
        let e3 = self.exp3.max(b.exp3);
        let x = scale(&self.num, (e2 - self.exp2) as u32, (e3 - self.exp3) as u32);
        let y = scale(&b.num, (e2 - b.exp2) as u32, (e3 - b.exp3) as u32);
        let (num, v2, v3) = strip(x + y);
        if num.is_zero() {
            return Coefficient::zero();
        }
        Coefficient { num, exp2: e2 - v2, exp3: e3 - v3 }
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, b: &Coefficient) -> Coefficient {
        self + &(-b)
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, b: &Coefficient) -> Coefficient {
        if self.is_zero() || b.is_zero() {
            return Coefficient::zero();
        }
        Coefficient { num: &self.num * &b.num, exp2: self.exp2 + b.exp2, exp3: self.exp3 + b.exp3 }
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient { num: -&self.num, exp2: self.exp2, exp3: self.exp3 }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(mut self) -> Coefficient {
        self.num = -self.num;
        self
    }
}

impl Add for Coefficient {
    type Output = Coefficient;
    fn add(self, b: Coefficient) -> Coefficient {
        &self + &b
    }
}

impl Sub for Coefficient {
    type Output = Coefficient;
    fn sub(self, b: Coefficient) -> Coefficient {
        &self - &b
    }
}

impl Mul for Coefficient {
    type Output = Coefficient;
    fn mul(self, b: Coefficient) -> Coefficient {
        &self * &b
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, b: &Coefficient) {
        *self = &*self + b;
    }
}

impl SubAssign<&Coefficient> for Coefficient {
    fn sub_assign(&mut self, b: &Coefficient) {
        *self = &*self - b;
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::from_int(n)
    }
}

impl From<i32> for Coefficient {
    fn from(n: i32) -> Self {
        Coefficient::from_int(n)
    }
}

impl PartialOrd for Coefficient {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coefficient {
    /// Order by value.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.to_fraction();
        let (c, d) = other.to_fraction();
        (a * d).cmp(&(c * b))
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.to_fraction();
        if d.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

impl FromStr for Coefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid coefficient {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let Some(d) = d else {
            return Ok(Coefficient::from_int(n));
        };
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if !d.is_positive() {
            return Err(bad());
        }
        let c = Coefficient::from_fraction(&n, &d).ok_or_else(|| Error::BadDenominator(s.to_string()))?;
        Ok(c)
    }
}

impl serde::Serialize for Coefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Coefficient {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coefficient {
        s.parse().unwrap()
    }

    #[test]
    fn sums() {
        assert_eq!(&c("1/8") + &c("1/8"), c("1/4"));
        assert!((&c("247145/2916") + &c("-247145/2916")).is_zero());
        assert_eq!(&c("1/2") + &c("1/3"), c("5/6"));
        assert_eq!(c("0"), Coefficient::zero());
        assert_eq!(c("0/4").exp2(), 0);
    }

    #[test]
    fn rejects_foreign_denominators() {
        assert!(matches!("1/5".parse::<Coefficient>(), Err(Error::BadDenominator(_))));
        assert!("3/10".parse::<Coefficient>().is_err());
        assert!("1/0".parse::<Coefficient>().is_err());
        assert_eq!(c("6/12"), c("1/2"));
    }

    #[test]
    fn euclid() {
        let (q, r) = c("7").euclidean_divide(&c("5")).unwrap();
        assert_eq!((q, r), (c("1"), c("2")));
        let (q, r) = c("5").euclidean_divide(&c("10")).unwrap();
        assert_eq!((q, r), (c("1/2"), c("0")));
        let (q, r) = c("1").euclidean_divide(&c("5")).unwrap();
        assert_eq!((q, r), (c("0"), c("1")));
        assert!(c("1").euclidean_divide(&c("0")).is_err());
    }

    #[test]
    fn units() {
        assert!(c("-2/3").is_unit());
        assert!(c("9/4").is_unit());
        assert!(!c("5/4").is_unit());
        assert!(!Coefficient::zero().is_unit());
        assert_eq!(c("12").to_string(), "12");
        assert_eq!(c("-7/24").to_string(), "-7/24");
    }

    #[test]
    fn residues() {
        let p = 1_000_000_007u64;
        let x = c("-7/24");
        let back = mulmod(x.mod_prime(p), 24, p);
        assert_eq!(back, p - 7);
    }
}
