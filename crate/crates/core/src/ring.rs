//! Exact arithmetic in the ring Z[1/2, √2].
//!
//! Every value is stored as a canonical triple `(a, b, k)` meaning
//! `(a + b·√2) / 2^k`. Since √2 is irrational the canonical triple is a unique
//! representative, so equality is structural.
//!
//! Integers are checked `i128`. The `checked_*` methods return
//! [`RingError::Overflow`]; the operator impls panic with the same message
//! instead of wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use thiserror::Error;

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;
// √2 − SQRT_2
const SQRT_2_LO: f64 = -9.667_293_313_452_913e-17;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("integer overflow in ring {0}")]
    Overflow(&'static str),
    #[error("malformed ring literal {0:?}")]
    Parse(String),
}

/// An exact real number `(a + b·√2) / 2^k` in canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RingReal {
    a: i128,
    b: i128,
    k: u32,
}

impl RingReal {
    pub const ZERO: RingReal = RingReal { a: 0, b: 0, k: 0 };
    pub const ONE: RingReal = RingReal { a: 1, b: 0, k: 0 };
    /// 1/2
    pub const HALF: RingReal = RingReal { a: 1, b: 0, k: 1 };
    /// 1/√2 = √2/2
    pub const FRAC_1_SQRT_2: RingReal = RingReal { a: 0, b: 1, k: 1 };
    pub const SQRT_2: RingReal = RingReal { a: 0, b: 1, k: 0 };

    /// Builds a canonical value from an arbitrary triple.
    pub fn new(a: i128, b: i128, k: u32) -> Self {
        let mut x = RingReal { a, b, k };
        x.canonicalize();
        x
    }

    pub fn from_int(a: i128) -> Self {
        RingReal { a, b: 0, k: 0 }
    }

    /// Rational part numerator.
    pub fn a(&self) -> i128 {
        self.a
    }

    /// √2 part numerator.
    pub fn b(&self) -> i128 {
        self.b
    }

    /// Power-of-two denominator exponent.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn is_canonical(&self) -> bool {
        if self.a == 0 && self.b == 0 {
            return self.k == 0;
        }
        self.k == 0 || self.a % 2 != 0 || self.b % 2 != 0
    }

    fn canonicalize(&mut self) {
        if self.a == 0 && self.b == 0 {
            self.k = 0;
            return;
        }
        if self.k == 0 {
            return;
        }
        let shift = self.a.trailing_zeros().min(self.b.trailing_zeros()).min(self.k);
        self.a >>= shift;
        self.b >>= shift;
        self.k -= shift;
    }

    fn lift(x: i128, by: u32) -> Result<i128, RingError> {
        if by >= 127 {
            return if x == 0 {
                Ok(0)
            } else {
                Err(RingError::Overflow("denominator alignment"))
            };
        }
        x.checked_mul(1i128 << by)
            .ok_or(RingError::Overflow("denominator alignment"))
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, RingError> {
        let k = self.k.max(rhs.k);
        let a1 = Self::lift(self.a, k - self.k)?;
        let b1 = Self::lift(self.b, k - self.k)?;
        let a2 = Self::lift(rhs.a, k - rhs.k)?;
        let b2 = Self::lift(rhs.b, k - rhs.k)?;
        let a = a1.checked_add(a2).ok_or(RingError::Overflow("add"))?;
        let b = b1.checked_add(b2).ok_or(RingError::Overflow("add"))?;
        Ok(Self::new(a, b, k))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, RingError> {
        self.checked_add(rhs.checked_neg()?)
    }

    pub fn checked_neg(self) -> Result<Self, RingError> {
        let a = self.a.checked_neg().ok_or(RingError::Overflow("neg"))?;
        let b = self.b.checked_neg().ok_or(RingError::Overflow("neg"))?;
        Ok(RingReal { a, b, k: self.k })
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, RingError> {
        let ovf = || RingError::Overflow("mul");
        // (a1 + b1√2)(a2 + b2√2) = (a1a2 + 2b1b2) + (a1b2 + a2b1)√2
        let aa = self.a.checked_mul(rhs.a).ok_or_else(ovf)?;
        let bb = self
            .b
            .checked_mul(rhs.b)
            .and_then(|x| x.checked_mul(2))
            .ok_or_else(ovf)?;
        let ab = self.a.checked_mul(rhs.b).ok_or_else(ovf)?;
        let ba = self.b.checked_mul(rhs.a).ok_or_else(ovf)?;
        let a = aa.checked_add(bb).ok_or_else(ovf)?;
        let b = ab.checked_add(ba).ok_or_else(ovf)?;
        let k = self.k.checked_add(rhs.k).ok_or_else(ovf)?;
        Ok(Self::new(a, b, k))
    }

    /// Divides by 2 exactly.
    pub fn half(self) -> Self {
        Self::new(self.a, self.b, self.k + 1)
    }

    /// Multiplies by 1/√2 exactly.
    pub fn div_sqrt2(self) -> Self {
        // (a + b√2)/√2 = (2b + a√2)/2
        Self::new(2 * self.b, self.a, self.k + 1)
    }

    /// `f64` value of `(a + b·√2) / 2^k`, evaluated with a double-double
    /// √2 and error-free transformations so cancellation between the two parts
    /// does not lose precision.
    pub fn to_f64(&self) -> f64 {
        let scale = (2.0f64).powi(-(self.k as i32));
        let a = self.a as f64;
        let b = self.b as f64;
        if self.b == 0 {
            return a * scale;
        }
        let p = b * SQRT_2;
        let p_err = b.mul_add(SQRT_2, -p);
        let q = b * SQRT_2_LO;
        let s = a + p;
        let bb = s - a;
        let s_err = (a - (s - bb)) + (p - bb);
        (s + (s_err + p_err + q)) * scale
    }

    /// Sign of the value, decided exactly.
    pub fn signum(&self) -> i32 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sb == 0 {
            return sa as i32;
        }
        if sa == 0 || sa == sb {
            return sb as i32;
        }
        // opposite signs: compare a² with 2b²
        let aa = (self.a as f64).abs();
        let bb = (self.b as f64).abs() * SQRT_2;
        match self
            .a
            .checked_mul(self.a)
            .zip(self.b.checked_mul(self.b).and_then(|x| x.checked_mul(2)))
        {
            Some((a2, b2)) => match a2.cmp(&b2) {
                Ordering::Greater => sa as i32,
                Ordering::Less => sb as i32,
                Ordering::Equal => 0,
            },
            None => {
                if aa > bb {
                    sa as i32
                } else {
                    sb as i32
                }
            }
        }
    }
}

impl From<i64> for RingReal {
    fn from(v: i64) -> Self {
        RingReal::from_int(v as i128)
    }
}

impl From<i32> for RingReal {
    fn from(v: i32) -> Self {
        RingReal::from_int(v as i128)
    }
}

impl Add for RingReal {
    type Output = RingReal;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for RingReal {
    type Output = RingReal;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for RingReal {
    type Output = RingReal;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for RingReal {
    type Output = RingReal;
    fn neg(self) -> Self {
        self.checked_neg().unwrap_or_else(|e| panic!("{e}"))
    }
}

impl AddAssign for RingReal {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for RingReal {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for RingReal {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for RingReal {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(RingReal::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for RingReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*r2)/2^{}", self.a, self.b, self.k)
    }
}

impl fmt::Debug for RingReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses the literal syntax `(a + b*r2)/2^k`. A negative √2 part may be
/// written either as `+ -3*r2` or `- 3*r2`. The result is canonicalized.
impl FromStr for RingReal {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RingError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = compact.strip_prefix('(').ok_or_else(err)?;
        let (inner, tail) = rest.split_once(')').ok_or_else(err)?;
        let k: u32 = tail.strip_prefix("/2^").ok_or_else(err)?.parse().map_err(|_| err())?;
        let inner = inner.strip_suffix("*r2").ok_or_else(err)?;
        // split at the operator between the two integers (skip a leading sign)
        let split = inner
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .ok_or_else(err)?;
        let a: i128 = inner[..split].parse().map_err(|_| err())?;
        let op = &inner[split..split + 1];
        let b_text = &inner[split + 1..];
        let mut b: i128 = b_text.parse().map_err(|_| err())?;
        if op == "-" {
            b = b.checked_neg().ok_or_else(err)?;
        }
        Ok(RingReal::new(a, b, k))
    }
}

impl serde::Serialize for RingReal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for RingReal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
