//! Exact reduced rationals with an inline fast path.
//!
//! Values whose reduced numerator fits in `i64` and denominator fits in `u64`
//! are stored inline; everything else spills to `num-bigint`. The split is
//! canonical (a value is `Small` iff it fits), so derived equality and hashing
//! are value-based.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    Small { num: i64, den: u64 },
    Big { num: BigInt, den: BigUint },
}

/// An exact rational number kept in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct BigRat(Repr);

/// Compact identity of a value, used by the counting engines. Two values are
/// equal iff their keys are equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum ValueKey {
    Small(i64, u64),
    Big(BigRat),
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if (a | b) >> 64 == 0 {
        return gcd_u64(a as u64, b as u64) as u128;
    }
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
        if (a | b) >> 64 == 0 {
            return (gcd_u64(a as u64, b as u64) as u128) << shift;
        }
    }
}

impl BigRat {
    pub fn zero() -> Self {
        BigRat(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        BigRat(Repr::Small { num: 1, den: 1 })
    }

    pub fn from_integer(n: i64) -> Self {
        BigRat(Repr::Small { num: n, den: 1 })
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big_parts(n, BigUint::one())
    }

    /// `num / den` in lowest terms.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        Ok(Self::from_big_parts(num, den.into_parts().1))
    }

    /// `num / den` for machine integers.
    ///
    /// Panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "BigRat::frac with zero denominator");
        let (n, d) = if den < 0 {
            (-(num as i128), den.unsigned_abs() as u128)
        } else {
            (num as i128, den as u128)
        };
        Self::from_wide(n, d)
    }

    /// Reduce `num / den` with `den > 0`.
    fn from_wide(num: i128, den: u128) -> Self {
        debug_assert!(den != 0);
        let mag = num.unsigned_abs();
        let g = if den == 1 { 1 } else { gcd_u128(mag, den) };
        if g > 1 {
            Self::from_coprime_wide(num / g as i128, den / g)
        } else {
            Self::from_coprime_wide(num, den)
        }
    }

    /// `num / den` already in lowest terms with `den > 0`.
    fn from_coprime_wide(num: i128, den: u128) -> Self {
        let mag = num.unsigned_abs();
        let neg = num < 0;
        if den <= u64::MAX as u128 {
            if !neg && mag <= i64::MAX as u128 {
                return BigRat(Repr::Small { num: mag as i64, den: den as u64 });
            }
            if neg && mag <= 1u128 << 63 {
                return BigRat(Repr::Small { num: (mag as i128).wrapping_neg() as i64, den: den as u64 });
            }
        }
        let sign = if mag == 0 { Sign::NoSign } else if neg { Sign::Minus } else { Sign::Plus };
        BigRat(Repr::Big { num: BigInt::from_biguint(sign, BigUint::from(mag)), den: BigUint::from(den) })
    }

    fn from_big_parts(num: BigInt, den: BigUint) -> Self {
        debug_assert!(!den.is_zero());
        let g = num.magnitude().gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num / BigInt::from(g.clone()), den / g) };
        match (num.to_i64(), den.to_u64()) {
            (Some(n), Some(d)) => BigRat(Repr::Small { num: n, den: d }),
            _ => BigRat(Repr::Big { num, den }),
        }
    }

    fn big_parts(&self) -> (BigInt, BigUint) {
        match &self.0 {
            Repr::Small { num, den } => (BigInt::from(*num), BigUint::from(*den)),
            Repr::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    pub fn numer(&self) -> BigInt {
        self.big_parts().0
    }

    pub fn denom(&self) -> BigUint {
        self.big_parts().1
    }

    /// Inline `(numerator, denominator)` when the value fits in machine words.
    pub fn as_small(&self) -> Option<(i64, u64)> {
        match self.0 {
            Repr::Small { num, den } => Some((num, den)),
            Repr::Big { .. } => None,
        }
    }

    #[cfg(test)]
    pub(crate) fn key(&self) -> ValueKey {
        match self.0 {
            Repr::Small { num, den } => ValueKey::Small(num, den),
            Repr::Big { .. } => ValueKey::Big(self.clone()),
        }
    }

    pub(crate) fn from_key(key: &ValueKey) -> Self {
        match key {
            ValueKey::Small(n, d) => BigRat(Repr::Small { num: *n, den: *d }),
            ValueKey::Big(v) => v.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big { den, .. } => den.is_one(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big { num, .. } => num.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num > 0,
            Repr::Big { num, .. } => num.is_positive(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// `1 / self`, or an error for zero.
    pub fn recip(&self) -> Result<Self> {
        match &self.0 {
            Repr::Small { num: 0, .. } => Err(Error::DivisionByZero),
            Repr::Small { num, den } => {
                let n = if *num < 0 { -(*den as i128) } else { *den as i128 };
                Ok(Self::from_wide(n, num.unsigned_abs() as u128))
            }
            Repr::Big { num, den } => {
                let n = BigInt::from_biguint(num.sign(), den.clone());
                Ok(Self::from_big_parts(n, num.magnitude().clone()))
            }
        }
    }

    pub fn checked_div(&self, rhs: &BigRat) -> Result<Self> {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &rhs.0) {
            if *c == 0 {
                return Err(Error::DivisionByZero);
            }
            if *a == 0 {
                return Ok(BigRat::zero());
            }
            // (a/b)/(c/d) = (a·d)/(b·c), cross-reduced so no further gcd is needed
            let g1 = gcd_u64(a.unsigned_abs(), c.unsigned_abs()).max(1);
            let g2 = gcd_u64(*b, *d);
            let num = (*a as i128 / g1 as i128) * (*d / g2) as i128;
            let den = (*b / g2) as i128 * (*c as i128 / g1 as i128);
            return Ok(if den < 0 {
                Self::from_coprime_wide(-num, den.unsigned_abs())
            } else {
                Self::from_coprime_wide(num, den as u128)
            });
        }
        Ok(self * &rhs.recip()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i32) -> Result<Self> {
        let base = if exp < 0 { self.recip()? } else { self.clone() };
        let e = exp.unsigned_abs();
        let (n, d) = base.big_parts();
        Ok(Self::from_big_parts(num_traits::pow(n, e as usize), num_traits::pow(d, e as usize)))
    }

    /// Nearest `f64`; huge magnitudes saturate to infinity.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big { num, den } => {
                let nb = num.bits();
                let db = den.bits();
                let ns = nb.saturating_sub(64);
                let ds = db.saturating_sub(64);
                let n = (num >> ns).to_f64().unwrap_or(f64::NAN);
                let d = (den >> ds).to_f64().unwrap_or(f64::NAN);
                let scale = ns as i64 - ds as i64;
                n / d * 2f64.powi(scale.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
            }
        }
    }

    /// Floor as a big integer.
    pub fn floor(&self) -> BigInt {
        let (n, d) = self.big_parts();
        n.div_floor(&BigInt::from(d))
    }

    /// Ceiling as a big integer.
    pub fn ceil(&self) -> BigInt {
        -((-self).floor())
    }

    /// Canonical `numerator/denominator` text, always with the slash.
    pub fn to_fraction_string(&self) -> String {
        match &self.0 {
            Repr::Small { num, den } => format!("{num}/{den}"),
            Repr::Big { num, den } => format!("{num}/{den}"),
        }
    }
}

impl Default for BigRat {
    fn default() -> Self {
        BigRat::zero()
    }
}

impl Hash for BigRat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                0u8.hash(state);
                num.hash(state);
                den.hash(state);
            }
            Repr::Big { num, den } => {
                1u8.hash(state);
                num.hash(state);
                den.hash(state);
            }
        }
    }
}

impl From<i64> for BigRat {
    fn from(n: i64) -> Self {
        BigRat::from_integer(n)
    }
}

impl From<u64> for BigRat {
    fn from(n: u64) -> Self {
        BigRat::from_wide(n as i128, 1)
    }
}

impl From<i32> for BigRat {
    fn from(n: i32) -> Self {
        BigRat::from_integer(n as i64)
    }
}

impl From<BigInt> for BigRat {
    fn from(n: BigInt) -> Self {
        BigRat::from_bigint(n)
    }
}

impl Ord for BigRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if b == d {
                    return a.cmp(c);
                }
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => {
                let (a, b) = self.big_parts();
                let (c, d) = other.big_parts();
                (a * BigInt::from(d)).cmp(&(c * BigInt::from(b)))
            }
        }
    }
}

impl PartialOrd for BigRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for &BigRat {
    type Output = BigRat;
    fn neg(self) -> BigRat {
        match &self.0 {
            Repr::Small { num, den } => BigRat::from_wide(-(*num as i128), *den as u128),
            Repr::Big { num, den } => BigRat::from_big_parts(-num, den.clone()),
        }
    }
}

impl Neg for BigRat {
    type Output = BigRat;
    fn neg(self) -> BigRat {
        -&self
    }
}

fn add_small(a: i64, b: u64, c: i64, d: u64) -> Option<BigRat> {
    if b == 1 && d == 1 {
        return a.checked_add(c).map(BigRat::from_integer);
    }
    if b == d {
        let n = a as i128 + c as i128;
        return Some(BigRat::from_wide(n, b as u128));
    }
    // a/b + c/d = (a·d' + c·b') / (b·d') with d' = d/g, b' = b/g, g = gcd(b, d);
    // only g can share factors with the new numerator
    let g = gcd_u64(b, d);
    let (bb, dd) = (b / g, d / g);
    let n = (a as i128 * dd as i128).checked_add(c as i128 * bb as i128)?;
    let den = b as u128 * dd as u128;
    if g == 1 {
        return Some(BigRat::from_coprime_wide(n, den));
    }
    let g2 = gcd_u128(n.unsigned_abs(), g as u128);
    Some(BigRat::from_coprime_wide(n / g2 as i128, den / g2))
}

fn mul_small(a: i64, b: u64, c: i64, d: u64) -> BigRat {
    if b == 1 && d == 1 {
        if let Some(p) = a.checked_mul(c) {
            return BigRat::from_integer(p);
        }
    }
    if a == 0 || c == 0 {
        return BigRat::zero();
    }
    // cross-reduce so the product is already in lowest terms
    let g1 = gcd_u64(a.unsigned_abs(), d);
    let g2 = gcd_u64(c.unsigned_abs(), b);
    let n1 = a as i128 / g1.max(1) as i128;
    let n2 = c as i128 / g2.max(1) as i128;
    let d1 = b as u128 / g2.max(1) as u128;
    let d2 = d as u128 / g1.max(1) as u128;
    BigRat::from_coprime_wide(n1 * n2, d1 * d2)
}

impl Add for &BigRat {
    type Output = BigRat;
    fn add(self, rhs: &BigRat) -> BigRat {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &rhs.0) {
            if let Some(r) = add_small(*a, *b, *c, *d) {
                return r;
            }
        }
        let (a, b) = self.big_parts();
        let (c, d) = rhs.big_parts();
        let num = a * BigInt::from(d.clone()) + c * BigInt::from(b.clone());
        BigRat::from_big_parts(num, b * d)
    }
}

impl Sub for &BigRat {
    type Output = BigRat;
    fn sub(self, rhs: &BigRat) -> BigRat {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &rhs.0) {
            if *c != i64::MIN {
                if let Some(r) = add_small(*a, *b, -*c, *d) {
                    return r;
                }
            }
        }
        self + &(-rhs)
    }
}

impl Mul for &BigRat {
    type Output = BigRat;
    fn mul(self, rhs: &BigRat) -> BigRat {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &rhs.0) {
            return mul_small(*a, *b, *c, *d);
        }
        let (a, b) = self.big_parts();
        let (c, d) = rhs.big_parts();
        BigRat::from_big_parts(a * c, b * d)
    }
}

impl Div for &BigRat {
    type Output = BigRat;
    /// Panics on division by zero; see [`BigRat::checked_div`].
    fn div(self, rhs: &BigRat) -> BigRat {
        self.checked_div(rhs).expect("BigRat division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for BigRat {
            type Output = BigRat;
            fn $m(self, rhs: BigRat) -> BigRat { (&self).$m(&rhs) }
        }
        impl $tr<&BigRat> for BigRat {
            type Output = BigRat;
            fn $m(self, rhs: &BigRat) -> BigRat { (&self).$m(rhs) }
        }
        impl $tr<BigRat> for &BigRat {
            type Output = BigRat;
            fn $m(self, rhs: BigRat) -> BigRat { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big { num, den } if den.is_one() => write!(f, "{num}"),
            Repr::Big { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl fmt::Debug for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BigRat {
    type Err = Error;

    /// Accepts `n`, `n/d` and plain decimals such as `-0.75`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::ParseRational(s.to_string());
        if let Some((n, d)) = t.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            return BigRat::new(n, d).map_err(|_| bad());
        }
        if let Some((int, frac)) = t.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let neg = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
            let mut n = BigInt::from_str(&digits).map_err(|_| bad())?;
            if neg {
                n = -n;
            }
            let d = num_traits::pow(BigInt::from(10u32), frac.len());
            return BigRat::new(n, d);
        }
        let n = BigInt::from_str(t).map_err(|_| bad())?;
        Ok(BigRat::from_bigint(n))
    }
}

impl Serialize for BigRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BigRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
