//! Real and complex ball arithmetic over dyadic midpoints.
//!
//! Every operation is inclusion-correct: the result ball contains the exact
//! image of every point of the input balls. Rounding of midpoints is folded
//! into the radius.

use super::dyadic::Dyadic;
use num::bigint::BigInt;
use num::BigRational;
use std::fmt;
use std::sync::Mutex;

/// Radii are kept at low precision (rounded up) to stop mantissa growth.
const RAD_BITS: u64 = 16;

fn round_rad_up(r: &Dyadic) -> Dyadic {
    if r.is_zero() {
        return Dyadic::zero();
    }
    let (rounded, err) = r.round(RAD_BITS);
    rounded.add(&err)
}

#[derive(Clone, PartialEq)]
pub struct RealBall {
    pub mid: Dyadic,
    pub rad: Dyadic,
}

impl RealBall {
    pub fn zero() -> Self {
        RealBall { mid: Dyadic::zero(), rad: Dyadic::zero() }
    }

    pub fn one() -> Self {
        RealBall { mid: Dyadic::one(), rad: Dyadic::zero() }
    }

    pub fn exact(mid: Dyadic) -> Self {
        RealBall { mid, rad: Dyadic::zero() }
    }

    pub fn new(mid: Dyadic, rad: Dyadic) -> Self {
        debug_assert!(!rad.is_negative());
        RealBall { mid, rad: round_rad_up(&rad) }
    }

    pub fn from_i64(v: i64) -> Self {
        RealBall::exact(Dyadic::from_i64(v))
    }

    pub fn from_rational(r: &BigRational, prec: u64) -> Self {
        let (mid, err) = Dyadic::from_rational(r, prec);
        RealBall::new(mid, err)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        !self.lower().is_negative() && !self.lower().is_zero()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.lower().is_negative()
    }

    /// Upper bound on |x| over the ball.
    pub fn abs_upper(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    pub fn neg(&self) -> RealBall {
        RealBall { mid: self.mid.neg(), rad: self.rad.clone() }
    }

    pub fn add(&self, other: &RealBall, prec: u64) -> RealBall {
        let (mid, err) = self.mid.add(&other.mid).round(prec);
        RealBall::new(mid, self.rad.add(&other.rad).add(&err))
    }

    pub fn sub(&self, other: &RealBall, prec: u64) -> RealBall {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &RealBall, prec: u64) -> RealBall {
        let (mid, err) = self.mid.mul(&other.mid).round(prec);
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad))
            .add(&err);
        RealBall::new(mid, rad)
    }

    pub fn mul_i64(&self, k: i64, prec: u64) -> RealBall {
        self.mul(&RealBall::from_i64(k), prec)
    }

    /// Reciprocal; the ball must exclude zero.
    pub fn recip(&self, prec: u64) -> Option<RealBall> {
        if self.contains_zero() {
            return None;
        }
        let lo = self.mid.abs().sub(&self.rad); // > 0
        let (q, qerr) = self.mid.recip(prec);
        // |1/x - 1/mid| <= rad / (|mid| * lo)
        let denom = self.mid.abs().mul(&lo);
        let (prop, perr) = self.rad.div(&denom, RAD_BITS);
        Some(RealBall::new(q, qerr.add(&prop).add(&perr)))
    }

    pub fn div(&self, other: &RealBall, prec: u64) -> Option<RealBall> {
        Some(self.mul(&other.recip(prec)?, prec))
    }

    /// Square root; the ball must be >= 0 (radius may touch zero).
    pub fn sqrt(&self, prec: u64) -> Option<RealBall> {
        let lo = self.lower();
        if lo.is_negative() {
            return None;
        }
        let hi = self.upper();
        let (smid, serr) = self.mid.sqrt(prec);
        let (slo, _) = lo.sqrt(RAD_BITS + 8);
        let (shi, shierr) = hi.sqrt(RAD_BITS + 8);
        // Enclose [sqrt(lo), sqrt(hi)] around smid.
        let up = shi.add(&shierr).sub(&smid);
        let down = smid.sub(&slo);
        let rad = if up > down { up } else { down };
        Some(RealBall::new(smid, rad.add(&serr)))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }
}

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.2e}", self.mid.to_f64(), self.rad.to_f64())
    }
}

#[derive(Clone, PartialEq)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn zero() -> Self {
        ComplexBall { re: RealBall::zero(), im: RealBall::zero() }
    }

    pub fn one() -> Self {
        ComplexBall { re: RealBall::one(), im: RealBall::zero() }
    }

    pub fn i() -> Self {
        ComplexBall { re: RealBall::zero(), im: RealBall::one() }
    }

    pub fn from_real(re: RealBall) -> Self {
        ComplexBall { re, im: RealBall::zero() }
    }

    pub fn from_f64_approx(re: f64, im: f64, prec: u64) -> Self {
        // f64 -> exact dyadic (f64s are dyadic rationals)
        ComplexBall {
            re: RealBall::exact(dyadic_from_f64(re, prec)),
            im: RealBall::exact(dyadic_from_f64(im, prec)),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.re.is_exact() && self.im.is_exact()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, o: &ComplexBall, prec: u64) -> ComplexBall {
        ComplexBall { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn sub(&self, o: &ComplexBall, prec: u64) -> ComplexBall {
        ComplexBall { re: self.re.sub(&o.re, prec), im: self.im.sub(&o.im, prec) }
    }

    pub fn mul(&self, o: &ComplexBall, prec: u64) -> ComplexBall {
        let re = self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec);
        let im = self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec);
        ComplexBall { re, im }
    }

    /// |z|^2 as a real ball.
    pub fn norm_sqr(&self, prec: u64) -> RealBall {
        self.re.mul(&self.re, prec).add(&self.im.mul(&self.im, prec), prec)
    }

    pub fn abs(&self, prec: u64) -> RealBall {
        self.norm_sqr(prec).sqrt(prec).expect("norm_sqr is nonnegative")
    }

    /// Upper bound on |z| over the ball (cheap, for residual reporting).
    pub fn abs_upper(&self) -> Dyadic {
        // |re| + |im| bounds sqrt(re^2+im^2) from above within factor sqrt(2);
        // fine for an upper bound.
        self.re.abs_upper().add(&self.im.abs_upper())
    }

    pub fn recip(&self, prec: u64) -> Option<ComplexBall> {
        let n = self.norm_sqr(prec);
        let inv = n.recip(prec)?;
        Some(ComplexBall {
            re: self.re.mul(&inv, prec),
            im: self.im.neg().mul(&inv, prec),
        })
    }

    pub fn div(&self, o: &ComplexBall, prec: u64) -> Option<ComplexBall> {
        Some(self.mul(&o.recip(prec)?, prec))
    }

    /// Principal square root. Requires the ball to be verifiably away from
    /// the branch cut (re > 0, or im bounded away from 0); otherwise `None`.
    pub fn sqrt(&self, prec: u64) -> Option<ComplexBall> {
        if self.im.contains_zero() && self.re.is_nonnegative() {
            // Verified nonnegative-real-ish: treat as real sqrt, keep the
            // imaginary uncertainty.
            let r = self.re.sqrt(prec)?;
            // |sqrt(z) - sqrt(re)| <= |im| / (2 sqrt(max(re_lo, im_err)))... keep
            // it simple: only allow exact-zero imaginary part here.
            if self.im.is_exact() && self.im.mid.is_zero() {
                return Some(ComplexBall::from_real(r));
            }
        }
        if !(self.re.is_positive()
            || self.im.is_positive()
            || self.im.upper().is_negative())
        {
            return None; // possibly touches the branch cut
        }
        let two = RealBall::from_i64(2);
        let a = self.abs(prec);
        // s = sqrt((|z| + |re|)/2)
        let s = a.add(&self.re.abs(), prec).div(&two, prec)?.sqrt(prec)?;
        if self.re.is_nonnegative() || self.re.contains_zero() {
            let im = self.im.div(&s.mul(&two, prec), prec)?;
            Some(ComplexBall { re: s, im })
        } else {
            let t = self.im.abs().div(&s.mul(&two, prec), prec)?;
            let (re, im) = if self.im.is_nonnegative() || self.im.contains_zero() {
                (t, s)
            } else {
                (t, s.neg())
            };
            Some(ComplexBall { re, im })
        }
    }

    pub fn pow_i64(&self, mut n: i64, prec: u64) -> Option<ComplexBall> {
        let mut base = if n < 0 {
            n = -n;
            self.recip(prec)?
        } else {
            self.clone()
        };
        let mut acc = ComplexBall::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            base = base.mul(&base, prec);
            n >>= 1;
        }
        Some(acc)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl RealBall {
    fn abs(&self) -> RealBall {
        if self.is_nonnegative() {
            self.clone()
        } else if self.upper().is_negative() {
            self.neg()
        } else {
            // straddles zero: [0, max(|lo|,|hi|)]
            let hi = {
                let a = self.lower().abs();
                let b = self.upper().abs();
                if a > b {
                    a
                } else {
                    b
                }
            };
            let (half, err) = hi.div(&Dyadic::from_i64(2), RAD_BITS);
            RealBall::new(half.clone(), half.add(&err))
        }
    }
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?} i)", self.re, self.im)
    }
}

pub fn dyadic_from_f64(v: f64, _prec: u64) -> Dyadic {
    if v == 0.0 {
        return Dyadic::zero();
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), exp - 1075)
    };
    Dyadic::new(BigInt::from(sign * mant as i64), e)
}

// ---------------------------------------------------------------------------
// pi and roots of unity

static PI_CACHE: Mutex<Option<(u64, RealBall)>> = Mutex::new(None);

/// pi as a real ball at the requested precision (Machin's formula).
pub fn pi(prec: u64) -> RealBall {
    {
        let guard = PI_CACHE.lock().unwrap();
        if let Some((p, ball)) = guard.as_ref() {
            if *p >= prec {
                return ball.clone();
            }
        }
    }
    let work = prec + 32;
    let a = atan_inv(5, work);
    let b = atan_inv(239, work);
    let four = RealBall::from_i64(4);
    let quarter = four.mul(&a, work).sub(&b, work);
    let result = quarter.mul(&four, work);
    let mut guard = PI_CACHE.lock().unwrap();
    *guard = Some((prec, result.clone()));
    result
}

/// arctan(1/k) for integer k >= 2, via the alternating Taylor series.
fn atan_inv(k: i64, prec: u64) -> RealBall {
    let inv_k2 = RealBall::from_i64(k * k).recip(prec).unwrap();
    let mut term = RealBall::from_i64(k).recip(prec).unwrap(); // 1/k^(2n+1)
    let mut sum = RealBall::zero();
    let mut n: i64 = 0;
    loop {
        let contrib = term.div(&RealBall::from_i64(2 * n + 1), prec).unwrap();
        if n % 2 == 0 {
            sum = sum.add(&contrib, prec);
        } else {
            sum = sum.sub(&contrib, prec);
        }
        // Alternating series: tail bounded by the next term.
        term = term.mul(&inv_k2, prec);
        let next = term.div(&RealBall::from_i64(2 * n + 3), prec).unwrap();
        if next.abs_upper() < Dyadic::pow2(-(prec as i64) - 4) {
            sum = RealBall::new(sum.mid.clone(), sum.rad.add(&next.abs_upper()));
            return sum;
        }
        n += 1;
    }
}

/// cos(x) + i sin(x) for |x| <= pi/2, by Taylor series with rigorous tails.
fn cis_small(x: &RealBall, prec: u64) -> ComplexBall {
    let x2 = x.mul(x, prec);
    // cos
    let mut cos = RealBall::one();
    let mut term = RealBall::one();
    let mut k: i64 = 1;
    loop {
        term = term.mul(&x2, prec).div(&RealBall::from_i64((2 * k - 1) * 2 * k), prec).unwrap();
        if k % 2 == 1 {
            cos = cos.sub(&term, prec);
        } else {
            cos = cos.add(&term, prec);
        }
        if term.abs_upper() < Dyadic::pow2(-(prec as i64) - 4) {
            cos = RealBall::new(cos.mid.clone(), cos.rad.add(&term.abs_upper()));
            break;
        }
        k += 1;
    }
    // sin
    let mut sin = x.clone();
    let mut term = x.clone();
    let mut k: i64 = 1;
    loop {
        term = term.mul(&x2, prec).div(&RealBall::from_i64(2 * k * (2 * k + 1)), prec).unwrap();
        if k % 2 == 1 {
            sin = sin.sub(&term, prec);
        } else {
            sin = sin.add(&term, prec);
        }
        if term.abs_upper() < Dyadic::pow2(-(prec as i64) - 4) {
            sin = RealBall::new(sin.mid.clone(), sin.rad.add(&term.abs_upper()));
            break;
        }
        k += 1;
    }
    ComplexBall { re: cos, im: sin }
}

/// e^(2 pi i k / n) as a complex ball.
pub fn root_of_unity(n: u64, k: i64, prec: u64) -> ComplexBall {
    let n_i = n as i64;
    let k = k.rem_euclid(n_i);
    // Reduce to the first octant via symmetry: compute angle 2 pi k/n.
    // Quadrant decomposition on 4k/n.
    let work = prec + 16;
    let two_pi = pi(work).mul(&RealBall::from_i64(2), work);
    let frac = RealBall::from_i64(k).div(&RealBall::from_i64(n_i), work).unwrap();
    // Choose quadrant so the reduced angle is at most pi/2 in magnitude.
    let quarter = (4 * k) / n_i; // 0..=3
    let base_k = quarter as i64;
    let angle = frac
        .sub(&RealBall::from_i64(base_k).div(&RealBall::from_i64(4), work).unwrap(), work)
        .mul(&two_pi, work);
    let z = cis_small(&angle, work);
    match quarter {
        0 => z,
        1 => ComplexBall { re: z.im.neg(), im: z.re.clone() },
        2 => ComplexBall { re: z.re.neg(), im: z.im.neg() },
        _ => ComplexBall { re: z.im.clone(), im: z.re.neg() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_value() {
        let p = pi(128);
        assert!((p.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(p.rad_f64() < 1e-35);
    }

    #[test]
    fn roots_of_unity_orders() {
        for (n, k) in [(48u64, 1i64), (42, 1), (48, 7), (42, 13), (4, 1), (3, 1)] {
            let z = root_of_unity(n, k, 192);
            let pow = z.pow_i64(n as i64, 192).unwrap();
            let diff = pow.sub(&ComplexBall::one(), 192);
            assert!(diff.abs_upper().to_f64() < 1e-40, "zeta_{n}^{k} order check");
        }
    }

    #[test]
    fn root_quadrants() {
        let z = root_of_unity(48, 13, 160); // just past the quarter turn
        assert!(z.re.to_f64() < 0.0);
        assert!(z.im.to_f64() > 0.0);
        let z = root_of_unity(48, 25, 160);
        assert!(z.re.to_f64() < 0.0 && z.im.to_f64() < 0.0);
        let z = root_of_unity(48, 37, 160);
        assert!(z.re.to_f64() > 0.0 && z.im.to_f64() < 0.0);
    }

    #[test]
    fn complex_sqrt_branches() {
        let z = ComplexBall::from_f64_approx(-3.0, 4.0, 128);
        let s = z.sqrt(128).unwrap();
        let back = s.mul(&s, 128);
        let diff = back.sub(&z, 128);
        assert!(diff.abs_upper().to_f64() < 1e-30);
        assert!(s.re.to_f64() > 0.0);

        let z = ComplexBall::from_f64_approx(-3.0, -4.0, 128);
        let s = z.sqrt(128).unwrap();
        let back = s.mul(&s, 128);
        assert!(back.sub(&z, 128).abs_upper().to_f64() < 1e-30);
    }

    #[test]
    fn inclusion_under_mul() {
        // (1/3 ± eps) * (3 ± eps) must contain 1.
        let third = RealBall::from_i64(1).div(&RealBall::from_i64(3), 64).unwrap();
        let three = RealBall::from_i64(3);
        let prod = third.mul(&three, 64);
        let one = Dyadic::one();
        assert!(prod.lower() <= one && one <= prod.upper());
    }
}
