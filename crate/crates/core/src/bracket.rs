//! Rational enclosures of irrational quantities (fractional powers,
//! logarithms) so that every comparison stays in exact arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Serialize, Serializer};

/// Decimal digits kept by the default enclosures.
pub const DEFAULT_DIGITS: u32 = 12;

/// A closed interval `[lo, hi]` of rationals known to contain a real value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Bracket {
    pub fn exact(v: BigRational) -> Self {
        Bracket { lo: v.clone(), hi: v }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Bracket::exact(BigRational::from_integer(n.into()))
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Bracket { lo, hi }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    /// `Some(ordering)` when the whole interval lies on one side of `v`
    /// (or the interval is the single point `v`).
    pub fn compare(&self, v: &BigRational) -> Option<Ordering> {
        if self.hi < *v {
            Some(Ordering::Less)
        } else if self.lo > *v {
            Some(Ordering::Greater)
        } else if self.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Bracket) -> Bracket {
        Bracket::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    /// Product of two nonnegative enclosures.
    pub fn mul_nonneg(&self, other: &Bracket) -> Bracket {
        debug_assert!(!self.lo.is_negative() && !other.lo.is_negative());
        Bracket::new(&self.lo * &other.lo, &self.hi * &other.hi)
    }

    /// `numerator / self` for a nonnegative numerator and a positive `self`.
    pub fn recip_scaled(&self, numerator: &BigRational) -> Bracket {
        debug_assert!(self.lo.is_positive());
        Bracket::new(numerator / &self.hi, numerator / &self.lo)
    }

    /// `self / denominator` for a nonnegative `self` and a positive
    /// denominator enclosure.
    pub fn div_nonneg(&self, denominator: &Bracket) -> Bracket {
        debug_assert!(denominator.lo.is_positive());
        Bracket::new(&self.lo / &denominator.hi, &self.hi / &denominator.lo)
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", decimal_floor(&self.lo, 6))
        } else {
            write!(f, "[{}, {}]", decimal_floor(&self.lo, 6), decimal_ceil(&self.hi, 6))
        }
    }
}

/// Serialized as `{"lo": "...", "hi": "..."}` with exact fraction strings.
impl Serialize for Bracket {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Bracket", 2)?;
        st.serialize_field("lo", &fraction_string(&self.lo))?;
        st.serialize_field("hi", &fraction_string(&self.hi))?;
        st.end()
    }
}

pub fn fraction_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn decimal(r: &BigRational, digits: u32, round_up: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r.numer() * &scale;
    let (q, rem) = scaled.div_mod_floor(r.denom());
    let q = if round_up && !rem.is_zero() { q + 1 } else { q };
    let neg = q.is_negative();
    let digits_str = q.abs().to_string();
    let width = digits as usize + 1;
    let padded = format!("{digits_str:0>width$}");
    let (int, frac) = padded.split_at(padded.len() - digits as usize);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Largest multiple of `10^-digits` not above `r`.
pub fn decimal_floor(r: &BigRational, digits: u32) -> String {
    decimal(r, digits, false)
}

/// Smallest multiple of `10^-digits` not below `r`.
pub fn decimal_ceil(r: &BigRational, digits: u32) -> String {
    decimal(r, digits, true)
}

/// `(⌊m^{1/k}⌋, ⌈m^{1/k}⌉)` for `m ≥ 0`.
pub fn integer_root_bounds(m: &BigInt, k: u32) -> (BigInt, BigInt) {
    assert!(!m.is_negative() && k >= 1);
    let floor = m.nth_root(k);
    let ceil = if Pow::pow(&floor, k) == *m {
        floor.clone()
    } else {
        &floor + 1
    };
    (floor, ceil)
}

/// Enclosure of `base^{num/den}` of width at most `10^-digits`, exact when
/// the power is rational.
pub fn rational_power(base: &BigInt, num: u32, den: u32, digits: u32) -> Bracket {
    assert!(!base.is_negative() && den >= 1);
    let scale = BigInt::from(10u32).pow(digits);
    let m = Pow::pow(base, num) * Pow::pow(&scale, den);
    let (floor, ceil) = integer_root_bounds(&m, den);
    let denom = scale;
    Bracket::new(
        BigRational::new(floor, denom.clone()),
        BigRational::new(ceil, denom),
    )
}

// Fixed-point precision for the logarithm series.
const LOG_BITS: u64 = 128;

/// Enclosure of `atanh(t)` for rational `0 ≤ t ≤ 1/3` in units of
/// `2^-LOG_BITS`, returned as integer numerators `(lo, hi)`.
fn atanh_fixed(t: &BigRational) -> (BigInt, BigInt) {
    let one = BigInt::one() << LOG_BITS;
    let t2 = t * t;
    let mut power = t.clone();
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut k = 1u64;
    loop {
        let term = &power / BigRational::from_integer(k.into());
        let scaled = term * BigRational::from_integer(one.clone());
        lo += scaled.floor().to_integer();
        hi += scaled.ceil().to_integer();
        power = &power * &t2;
        k += 2;
        // Remaining tail ≤ t^k / (k (1 − t²)) ≤ 9/8 · t^k / k.
        let tail = &power / BigRational::from_integer(k.into())
            * BigRational::new(9.into(), 8.into())
            * BigRational::from_integer(one.clone());
        if tail < BigRational::one() || power.is_zero() {
            hi += tail.ceil().to_integer();
            return (lo, hi);
        }
    }
}

/// Enclosure of the natural logarithm of an integer `n ≥ 1`.
pub fn ln_bracket(n: &BigInt) -> Bracket {
    assert!(n.is_positive());
    let k = n.bits() - 1;
    let pow = BigInt::one() << k;
    // n = 2^k · y with 1 ≤ y < 2, ln y = 2 atanh((y − 1)/(y + 1)).
    let t = BigRational::new(n - &pow, n + &pow);
    let (ylo, yhi) = atanh_fixed(&t);
    let (l2lo, l2hi) = atanh_fixed(&BigRational::new(1.into(), 3.into()));
    let kk = BigInt::from(k);
    let denom = BigInt::one() << LOG_BITS;
    let lo = (ylo + &kk * l2lo) * 2;
    let hi = (yhi + &kk * l2hi) * 2;
    Bracket::new(BigRational::new(lo, denom.clone()), BigRational::new(hi, denom))
}
