//! Arbitrary-precision integers with an inline fast path.
//!
//! Values that fit in an `i64` are stored inline; every operation on the
//! inline representation is checked and promotes to a heap `BigInt` on
//! overflow. A value is stored as `Big` only when it does not fit in an
//! `i64`, so structural equality and hashing coincide with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Euclidean division: `self = q * d + r` with `0 <= r < |d|`.
    pub fn div_rem_euclid(&self, d: &Int) -> (Int, Int) {
        assert!(!d.is_zero(), "division by zero");
        if let (Int::Small(a), Int::Small(b)) = (self, d) {
            if let (Some(q), Some(r)) = (a.checked_div_euclid(*b), a.checked_rem_euclid(*b)) {
                return (Int::Small(q), Int::Small(r));
            }
        }
        let a = self.to_bigint();
        let b = d.to_bigint();
        let mut q = &a / &b;
        let mut r = &a - &q * &b;
        if r.is_negative() {
            if b.is_positive() {
                q -= 1;
                r += &b;
            } else {
                q += 1;
                r -= &b;
            }
        }
        (Int::from_big(q), Int::from_big(r))
    }

    /// Exact division; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Int) -> Int {
        let (q, r) = self.div_rem_euclid(d);
        assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, other: &Int) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem_euclid(self).1.is_zero()
    }

    pub fn gcd(&self, other: &Int) -> Int {
        let (mut a, mut b) = (self.abs(), other.abs());
        while !b.is_zero() {
            let r = a.div_rem_euclid(&b).1;
            a = b;
            b = r;
        }
        a
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
    pub fn extended_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
        let (mut old_r, mut r) = (a.clone(), b.clone());
        let (mut old_s, mut s) = (Int::ONE, Int::ZERO);
        let (mut old_t, mut t) = (Int::ZERO, Int::ONE);
        while !r.is_zero() {
            let q = floor_div(&old_r, &r);
            let nr = &old_r - &(&q * &r);
            old_r = std::mem::replace(&mut r, nr);
            let ns = &old_s - &(&q * &s);
            old_s = std::mem::replace(&mut s, ns);
            let nt = &old_t - &(&q * &t);
            old_t = std::mem::replace(&mut t, nt);
        }
        if old_r.is_negative() {
            (-old_r, -old_s, -old_t)
        } else {
            (old_r, old_s, old_t)
        }
    }

    pub fn binomial(n: u64, k: u64) -> Int {
        if k > n {
            return Int::ZERO;
        }
        let k = k.min(n - k);
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        Int::from_big(acc)
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn floor_div(a: &Int, b: &Int) -> Int {
    a.div_rem_euclid(b).0
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<u64> for Int {
    fn from(v: u64) -> Self {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::Big(Box::new(BigInt::from(v))),
        }
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Self {
        Int::from(v as u64)
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int::from_big(v)
    }
}

impl<'a> Add<&'a Int> for &'a Int {
    type Output = Int;
    fn add(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_add(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_bigint() + rhs.to_bigint())
    }
}

impl<'a> Sub<&'a Int> for &'a Int {
    type Output = Int;
    fn sub(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_sub(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_bigint() - rhs.to_bigint())
    }
}

impl<'a> Mul<&'a Int> for &'a Int {
    type Output = Int;
    fn mul(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_mul(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_bigint() * rhs.to_bigint())
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        if let Int::Small(a) = self {
            if let Some(v) = a.checked_neg() {
                return Int::Small(v);
            }
        }
        Int::from_big(-self.to_bigint())
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

impl Add for Int {
    type Output = Int;
    fn add(self, rhs: Int) -> Int {
        &self + &rhs
    }
}

impl Sub for Int {
    type Output = Int;
    fn sub(self, rhs: Int) -> Int {
        &self - &rhs
    }
}

impl Mul for Int {
    type Output = Int;
    fn mul(self, rhs: Int) -> Int {
        &self * &rhs
    }
}

impl AddAssign<&Int> for Int {
    fn add_assign(&mut self, rhs: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(v) = a.checked_add(*b) {
                *self = Int::Small(v);
                return;
            }
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Int> for Int {
    fn sub_assign(&mut self, rhs: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(v) = a.checked_sub(*b) {
                *self = Int::Small(v);
                return;
            }
        }
        *self = &*self - rhs;
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Int {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Int::Small(v));
        }
        Ok(Int::from_big(s.parse::<BigInt>()?))
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Self {
        Int::ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn overflow_promotes() {
        let a = Int::from(i64::MAX);
        let b = &a + &Int::ONE;
        assert!(matches!(b, Int::Big(_)));
        assert_eq!(b.to_string(), "9223372036854775808");
        let c = &b - &Int::ONE;
        assert_eq!(c, Int::Small(i64::MAX));
        let sq = &a * &a;
        assert_eq!(sq.to_bigint(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        assert_eq!(-Int::from(i64::MIN), Int::from_big(-BigInt::from(i64::MIN)));
    }

    #[test]
    fn extended_gcd_cases() {
        let (g, s, t) = Int::extended_gcd(&Int::from(4), &Int::from(6));
        assert_eq!((g.clone(), s.clone(), t.clone()), (Int::from(2), Int::from(-1), Int::from(1)));
        let (g, s, t) = Int::extended_gcd(&Int::from(-12), &Int::from(18));
        assert_eq!(g, Int::from(6));
        assert_eq!(&(&s * &Int::from(-12)) + &(&t * &Int::from(18)), g);
    }

    #[test]
    fn binomials() {
        assert_eq!(Int::binomial(4, 2), Int::from(6));
        assert_eq!(Int::binomial(10, 0), Int::ONE);
        assert_eq!(Int::binomial(3, 5), Int::ZERO);
        assert_eq!(Int::binomial(70, 35).to_string(), "112186277816662845432");
    }

    proptest! {
        #[test]
        fn matches_bigint(a in any::<i64>(), b in any::<i64>()) {
            let (x, y) = (Int::from(a), Int::from(b));
            let (bx, by) = (BigInt::from(a), BigInt::from(b));
            prop_assert_eq!((&x + &y).to_bigint(), &bx + &by);
            prop_assert_eq!((&x - &y).to_bigint(), &bx - &by);
            prop_assert_eq!((&x * &y).to_bigint(), &bx * &by);
            if b != 0 {
                let (q, r) = x.div_rem_euclid(&y);
                prop_assert!(!r.is_negative() && r < y.abs());
                prop_assert_eq!(&(&q * &y) + &r, x.clone());
            }
        }
    }
}
