//! Arbitrary-precision dyadic numbers: `mant * 2^exp` with `BigInt` mantissa.
//!
//! Addition and multiplication are exact; rounding is explicit so the ball
//! layer can account for every rounding step in its radii.

use num::bigint::{BigInt, Sign};
use num::{BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// 2^e
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the most significant bit, i.e. floor(log2 |x|) + 1.
    pub fn magnitude_exp(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant.bits() as i64
    }

    /// Truncate the mantissa to at most `prec` bits toward zero.
    /// Returns the rounded value and an upper bound on the absolute error.
    pub fn round(&self, prec: u64) -> (Dyadic, Dyadic) {
        let bits = self.mant.bits();
        if bits <= prec {
            return (self.clone(), Dyadic::zero());
        }
        let shift = (bits - prec) as i64;
        // Truncate the magnitude so the error is bounded by one ulp.
        let (sign, mag) = (self.mant.sign(), self.mant.magnitude().clone());
        let mag = mag >> shift as u64;
        let mant = BigInt::from_biguint(sign, mag);
        let rounded = Dyadic::new(mant, self.exp + shift);
        (rounded, Dyadic::pow2(self.exp + shift))
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Approximate reciprocal with `prec` significant bits.
    /// Returns `(q, err)` with `|1/x - q| <= err`. Panics on zero input.
    pub fn recip(&self, prec: u64) -> (Dyadic, Dyadic) {
        assert!(!self.is_zero(), "dyadic reciprocal of zero");
        let bits = self.mant.bits();
        let k = prec + bits + 2;
        let num = BigInt::one() << k;
        let q = num / &self.mant;
        // Floor division of the numerator: error below one unit in 2^(-k-exp).
        let exp = -(k as i64) - self.exp;
        (Dyadic::new(q, exp), Dyadic::pow2(exp + 1))
    }

    /// Approximate quotient `self / other` with `prec` significant bits.
    pub fn div(&self, other: &Dyadic, prec: u64) -> (Dyadic, Dyadic) {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let shift = prec as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2;
        let shift = shift.max(0) as u64;
        let num = &self.mant << shift;
        let q = num / &other.mant;
        let exp = self.exp - other.exp - shift as i64;
        (Dyadic::new(q, exp), Dyadic::pow2(exp + 1))
    }

    /// Floor square root with `prec` significant bits, input must be >= 0.
    /// Returns `(s, err)` with `|sqrt(x) - s| <= err`.
    pub fn sqrt(&self, prec: u64) -> (Dyadic, Dyadic) {
        assert!(!self.is_negative(), "dyadic sqrt of negative number");
        if self.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        // Scale so the integer sqrt carries ~prec bits, with even exponent.
        let bits = self.mant.bits();
        let want = 2 * prec + 4;
        let mut shift = want.saturating_sub(bits) as i64;
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let scaled = self.mant.magnitude() << shift as u64;
        let root = scaled.sqrt();
        let exp = (self.exp - shift) / 2;
        let s = Dyadic::new(BigInt::from(root), exp);
        (s, Dyadic::pow2(exp + 1))
    }

    /// Exact conversion from a rational is impossible in general; rounds to
    /// `prec` bits. Returns `(d, err)`.
    pub fn from_rational(r: &BigRational, prec: u64) -> (Dyadic, Dyadic) {
        if r.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let num = r.numer();
        let den = r.denom();
        // Denominator a power of two: exact.
        let den_mag = den.magnitude();
        if den_mag.count_ones() == 1 {
            let tz = den_mag.trailing_zeros().unwrap_or(0) as i64;
            let sign = if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
                -num.abs()
            } else {
                num.abs()
            };
            return (Dyadic::new(sign, -tz), Dyadic::zero());
        }
        let a = Dyadic::new(num.clone(), 0);
        let b = Dyadic::new(den.clone(), 0);
        a.div(&b, prec)
    }

    pub fn cmp_abs(&self, other: &Dyadic) -> Ordering {
        self.abs().cmp(&other.abs())
    }

    pub fn to_f64(&self) -> f64 {
        use num::ToPrimitive;
        if self.is_zero() {
            return 0.0;
        }
        let (top, _) = self.round(64);
        top.mant.to_f64().unwrap_or(f64::NAN) * (top.exp as f64).exp2()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).mant.sign().cmp(&Sign::NoSign)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_roundtrip() {
        let a = Dyadic::from_i64(3).mul(&Dyadic::pow2(-2)); // 0.75
        let b = Dyadic::from_i64(5).mul(&Dyadic::pow2(-3)); // 0.625
        assert_eq!(a.add(&b).to_f64(), 1.375);
        assert_eq!(a.mul(&b).to_f64(), 0.46875);
        assert_eq!(a.sub(&b).to_f64(), 0.125);
    }

    #[test]
    fn sqrt_two() {
        let (s, err) = Dyadic::from_i64(2).sqrt(128);
        let x = s.to_f64();
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(err.to_f64() < 1e-35);
    }

    #[test]
    fn division_error_bound() {
        let (q, err) = Dyadic::from_i64(1).div(&Dyadic::from_i64(3), 200);
        let check = q.mul(&Dyadic::from_i64(3)).sub(&Dyadic::one()).abs();
        assert!(check < err.mul(&Dyadic::from_i64(3)));
    }

    #[test]
    fn ordering() {
        assert!(Dyadic::from_i64(-2) < Dyadic::from_i64(1));
        assert!(Dyadic::pow2(-1) > Dyadic::pow2(-2));
    }
}
