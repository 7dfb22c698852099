//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! Elements are rational coefficient vectors over powers of a primitive
//! N-th root of unity, reduced modulo the N-th cyclotomic polynomial.

use super::ball::{root_of_unity, ComplexBall};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

/// The N-th cyclotomic polynomial as a monic integer polynomial
/// (coefficient vector, low degree first).
fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    // x^n - 1 divided by Phi_d for each proper divisor d of n.
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cached_phi(d);
            poly = poly_div_exact(&poly, &phi_d);
        }
    }
    poly
}

static PHI_CACHE: Mutex<Option<HashMap<u64, Vec<BigInt>>>> = Mutex::new(None);

fn cached_phi(n: u64) -> Vec<BigInt> {
    {
        let guard = PHI_CACHE.lock().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(p) = map.get(&n) {
                return p.clone();
            }
        }
    }
    let p = cyclotomic_poly(n);
    let mut guard = PHI_CACHE.lock().unwrap();
    guard.get_or_insert_with(HashMap::new).insert(n, p.clone());
    p
}

/// Exact division of integer polynomials (panics if not exact).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dn >= dd);
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = rem[i + dd].clone() / den[dd].clone();
        quot[i] = c.clone();
        for j in 0..=dd {
            let t = &den[j] * &c;
            rem[i + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// An element of Q(zeta_N), reduced modulo Phi_N.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u64,
    /// Length = deg Phi_N; coefficient of zeta^i at index i.
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn zero(order: u64) -> Self {
        let deg = cached_phi(order).len() - 1;
        Cyclotomic { order, coeffs: vec![BigRational::zero(); deg] }
    }

    pub fn one(order: u64) -> Self {
        let mut z = Cyclotomic::zero(order);
        z.coeffs[0] = BigRational::one();
        z
    }

    pub fn from_rational(order: u64, r: BigRational) -> Self {
        let mut z = Cyclotomic::zero(order);
        z.coeffs[0] = r;
        z
    }

    /// zeta_N^k
    pub fn root(order: u64, k: i64) -> Self {
        let k = k.rem_euclid(order as i64) as usize;
        let deg = cached_phi(order).len() - 1;
        let mut raw = vec![BigRational::zero(); order as usize];
        raw[k] = BigRational::one();
        Cyclotomic { order, coeffs: reduce_mod_phi(raw, order, deg) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Lift both operands into Q(zeta_lcm).
    fn align(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let l = num::integer::lcm(a.order, b.order);
        (a.lift(l), b.lift(l))
    }

    pub fn lift(&self, order: u64) -> Cyclotomic {
        assert!(order % self.order == 0, "can only lift to a multiple order");
        if order == self.order {
            return self.clone();
        }
        let stride = (order / self.order) as usize;
        let deg = cached_phi(order).len() - 1;
        let mut raw = vec![BigRational::zero(); order as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[i * stride] += c;
            }
        }
        Cyclotomic { order, coeffs: reduce_mod_phi(raw, order, deg) }
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::align(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn neg(&self) -> Cyclotomic {
        let mut a = self.clone();
        for c in a.coeffs.iter_mut() {
            *c = -c.clone();
        }
        a
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::align(self, other);
        let order = a.order;
        let deg = a.coeffs.len();
        let mut raw = vec![BigRational::zero(); 2 * deg];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                raw[i + j] += x * y;
            }
        }
        Cyclotomic { order, coeffs: reduce_mod_phi(raw, order, deg) }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inv(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.is_rational() {
            return Some(Cyclotomic::from_rational(self.order, r.recip()));
        }
        let phi: Vec<BigRational> = cached_phi(self.order)
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect();
        let a: Vec<BigRational> = self.coeffs.clone();
        // Extended Euclid: s*a + t*phi = gcd; gcd must be a nonzero constant.
        let (g, s) = poly_ext_gcd(&a, &phi);
        let g0 = g[0].clone();
        if g.len() != 1 || g0.is_zero() {
            return None;
        }
        let deg = self.coeffs.len();
        let mut coeffs: Vec<BigRational> = s.iter().map(|c| c / &g0).collect();
        coeffs.resize(2 * deg, BigRational::zero());
        Some(Cyclotomic { order: self.order, coeffs: reduce_mod_phi(coeffs, self.order, deg) })
    }

    /// Complex conjugation: zeta -> zeta^(N-1).
    pub fn conj(&self) -> Cyclotomic {
        let order = self.order;
        let deg = self.coeffs.len();
        let mut raw = vec![BigRational::zero(); order as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let idx = ((order as usize) - i) % order as usize;
                raw[idx] += c;
            }
        }
        Cyclotomic { order, coeffs: reduce_mod_phi(raw, order, deg) }
    }

    pub fn pow(&self, n: i64) -> Option<Cyclotomic> {
        let mut base = if n < 0 { self.inv()? } else { self.clone() };
        let mut n = n.unsigned_abs();
        let mut acc = Cyclotomic::one(self.order);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        Some(acc)
    }

    /// Evaluate to a complex ball at the requested precision.
    pub fn to_ball(&self, prec: u64) -> ComplexBall {
        let mut acc = ComplexBall::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = root_of_unity(self.order, i as i64, prec);
            let r = super::ball::RealBall::from_rational(c, prec);
            acc = acc.add(&z.mul(&ComplexBall::from_real(r), prec), prec);
        }
        acc
    }
}

/// Reduce a raw coefficient vector (any length) modulo Phi_N, returning
/// exactly `deg` coefficients. Uses zeta^N = 1 first, then division by Phi_N.
fn reduce_mod_phi(mut raw: Vec<BigRational>, order: u64, deg: usize) -> Vec<BigRational> {
    let n = order as usize;
    // Fold exponents mod N.
    if raw.len() > n {
        for i in n..raw.len() {
            let c = std::mem::replace(&mut raw[i], BigRational::zero());
            if !c.is_zero() {
                raw[i % n] += c;
            }
        }
        raw.truncate(n);
    }
    raw.resize(n.max(deg), BigRational::zero());
    // Polynomial remainder modulo Phi_N (monic).
    let phi = cached_phi(order);
    let d = phi.len() - 1;
    for i in (d..raw.len()).rev() {
        let c = std::mem::replace(&mut raw[i], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        for j in 0..d {
            let t = BigRational::from(phi[j].clone()) * &c;
            raw[i - d + j] -= t;
        }
    }
    raw.truncate(deg);
    raw
}

/// Extended gcd for rational polynomials: returns (g, s) with
/// s*a = g mod b and g the (non-normalized) gcd.
fn poly_ext_gcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    let trim = |v: &mut Vec<BigRational>| {
        while v.len() > 1 && v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
    };
    let mut r0: Vec<BigRational> = b.to_vec();
    let mut r1: Vec<BigRational> = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Vec<BigRational> = vec![BigRational::zero()];
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, rem) = poly_divmod(&r0, &r1);
        let s_next = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = rem;
        trim(&mut r1);
        s0 = s1;
        s1 = s_next;
    }
    (r0, s0)
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let dn = rem.len() - 1;
    if dn < dd {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        if rem[i + dd].is_zero() {
            continue;
        }
        let c = &rem[i + dd] / &den[dd];
        quot[i] = c.clone();
        for j in 0..=dd {
            let t = &den[j] * &c;
            rem[i + j] -= t;
        }
    }
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    out.resize(a.len().max(b.len()), BigRational::zero());
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*z{}^{}", c, self.order, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_small_orders() {
        // Phi_1 = x - 1, Phi_2 = x + 1, Phi_4 = x^2 + 1
        assert_eq!(cached_phi(4).len(), 3);
        // Phi_48 has degree phi(48) = 16: x^16 - x^8 + 1
        let p48 = cached_phi(48);
        assert_eq!(p48.len(), 17);
        assert_eq!(p48[0], BigInt::from(1));
        assert_eq!(p48[8], BigInt::from(-1));
        assert_eq!(p48[16], BigInt::from(1));
        // deg Phi_42 = phi(42) = 12
        assert_eq!(cached_phi(42).len(), 13);
    }

    #[test]
    fn root_order_and_inverse() {
        let z = Cyclotomic::root(48, 1);
        assert_eq!(z.pow(48).unwrap(), Cyclotomic::one(48));
        assert!(z.pow(24).unwrap() == Cyclotomic::from_rational(48, BigRational::from(BigInt::from(-1))));
        let zi = z.inv().unwrap();
        assert_eq!(z.mul(&zi), Cyclotomic::one(48));
        assert_eq!(zi, Cyclotomic::root(48, -1));
    }

    #[test]
    fn conjugation_involution() {
        let z = Cyclotomic::root(42, 5).add(&Cyclotomic::root(42, 11).mul(&Cyclotomic::from_rational(42, BigRational::new(BigInt::from(2), BigInt::from(3)))));
        assert_eq!(z.conj().conj(), z);
        // z * conj(z) is real: equals its own conjugate
        let n = z.mul(&z.conj());
        assert_eq!(n.conj(), n);
    }

    #[test]
    fn ball_evaluation_matches() {
        let z = Cyclotomic::root(48, 1);
        let b = z.to_ball(128);
        let (re, im) = b.to_f64_pair();
        let theta = 2.0 * std::f64::consts::PI / 48.0;
        assert!((re - theta.cos()).abs() < 1e-14);
        assert!((im - theta.sin()).abs() < 1e-14);
    }

    #[test]
    fn mixed_order_arithmetic() {
        let a = Cyclotomic::root(4, 1); // i
        let b = Cyclotomic::root(3, 1);
        let s = a.mul(&b);
        assert_eq!(s.order(), 12);
        assert_eq!(s, Cyclotomic::root(12, 7));
    }
}
