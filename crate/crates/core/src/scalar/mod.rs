//! Exact and verified-approximate complex scalars.
//!
//! A [`Scalar`] is one of:
//! - `Cyclo`: an exact element of Q(zeta_N), reduced mod the cyclotomic
//!   polynomial — the representation of all root-of-unity constants;
//! - `Radical`: an exact expression tree over rationals and cyclotomics
//!   closed under field operations and square roots — used for the
//!   embedding coordinate constants;
//! - `Ball`: a complex ball (midpoint + radius) at a stated precision.
//!
//! Arithmetic stays exact while every operand is `Cyclo`; any mix with a
//! `Ball` coerces to balls at the context precision. Radical trees are kept
//! exact only while being built (parsing, constant tables); inside heavy
//! arithmetic they are evaluated to balls.

pub mod ball;
pub mod cyclotomic;
pub mod dyadic;
pub mod parse;

pub use ball::{pi, root_of_unity, ComplexBall, RealBall};
pub use cyclotomic::Cyclotomic;
pub use dyadic::Dyadic;

use num::{BigInt, BigRational, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScalarError {
    #[error("division by zero (or by a ball containing zero)")]
    DivisionByZero,
    #[error("square root branch is ambiguous: ball not verifiably off the cut")]
    BranchAmbiguous,
    #[error("square root of a verifiably negative real")]
    NegativeSqrt,
    #[error("scalar parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Working precision and the tolerance for approximate-equality judgments.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    pub bits: u64,
    pub tolerance: f64,
}

impl PrecisionContext {
    pub fn new(bits: u64, tolerance: f64) -> Self {
        assert!(bits >= 53, "precision below 53 bits");
        assert!(tolerance > 0.0, "tolerance must be positive");
        PrecisionContext { bits, tolerance }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { bits: 256, tolerance: 1e-10 }
    }
}

/// Exact expression tree over rationals, cyclotomics, and square roots.
#[derive(Clone, Debug, PartialEq)]
pub enum RadicalExpr {
    Rational(BigRational),
    Cyclo(Cyclotomic),
    Add(Arc<RadicalExpr>, Arc<RadicalExpr>),
    Sub(Arc<RadicalExpr>, Arc<RadicalExpr>),
    Mul(Arc<RadicalExpr>, Arc<RadicalExpr>),
    Div(Arc<RadicalExpr>, Arc<RadicalExpr>),
    Pow(Arc<RadicalExpr>, i64),
    Sqrt(Arc<RadicalExpr>),
}

impl RadicalExpr {
    pub fn eval(&self, prec: u64) -> Result<ComplexBall, ScalarError> {
        match self {
            RadicalExpr::Rational(r) => {
                Ok(ComplexBall::from_real(RealBall::from_rational(r, prec)))
            }
            RadicalExpr::Cyclo(c) => Ok(c.to_ball(prec)),
            RadicalExpr::Add(a, b) => Ok(a.eval(prec)?.add(&b.eval(prec)?, prec)),
            RadicalExpr::Sub(a, b) => Ok(a.eval(prec)?.sub(&b.eval(prec)?, prec)),
            RadicalExpr::Mul(a, b) => Ok(a.eval(prec)?.mul(&b.eval(prec)?, prec)),
            RadicalExpr::Div(a, b) => a
                .eval(prec)?
                .div(&b.eval(prec)?, prec)
                .ok_or(ScalarError::DivisionByZero),
            RadicalExpr::Pow(a, n) => a
                .eval(prec)?
                .pow_i64(*n, prec)
                .ok_or(ScalarError::DivisionByZero),
            RadicalExpr::Sqrt(a) => {
                let v = a.eval(prec)?;
                if v.im.is_exact()
                    && v.im.mid.is_zero()
                    && v.re.upper().is_negative()
                {
                    return Err(ScalarError::NegativeSqrt);
                }
                v.sqrt(prec).ok_or(ScalarError::BranchAmbiguous)
            }
        }
    }

    pub fn conj(&self) -> RadicalExpr {
        match self {
            RadicalExpr::Rational(r) => RadicalExpr::Rational(r.clone()),
            RadicalExpr::Cyclo(c) => RadicalExpr::Cyclo(c.conj()),
            RadicalExpr::Add(a, b) => {
                RadicalExpr::Add(Arc::new(a.conj()), Arc::new(b.conj()))
            }
            RadicalExpr::Sub(a, b) => {
                RadicalExpr::Sub(Arc::new(a.conj()), Arc::new(b.conj()))
            }
            RadicalExpr::Mul(a, b) => {
                RadicalExpr::Mul(Arc::new(a.conj()), Arc::new(b.conj()))
            }
            RadicalExpr::Div(a, b) => {
                RadicalExpr::Div(Arc::new(a.conj()), Arc::new(b.conj()))
            }
            RadicalExpr::Pow(a, n) => RadicalExpr::Pow(Arc::new(a.conj()), *n),
            RadicalExpr::Sqrt(a) => RadicalExpr::Sqrt(Arc::new(a.conj())),
        }
    }
}

#[derive(Clone, PartialEq)]
pub enum Scalar {
    Cyclo(Cyclotomic),
    Radical(Arc<RadicalExpr>),
    Ball(ComplexBall),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Cyclo(Cyclotomic::zero(1))
    }

    pub fn one() -> Self {
        Scalar::Cyclo(Cyclotomic::one(1))
    }

    pub fn from_i64(v: i64) -> Self {
        Scalar::Cyclo(Cyclotomic::from_rational(1, BigRational::from(BigInt::from(v))))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Cyclo(Cyclotomic::from_rational(1, r))
    }

    pub fn i() -> Self {
        Scalar::Cyclo(Cyclotomic::root(4, 1))
    }

    pub fn sqrt_expr(inner: Scalar) -> Self {
        let leaf = match inner {
            Scalar::Cyclo(c) => match c.is_rational() {
                Some(r) => RadicalExpr::Rational(r),
                None => RadicalExpr::Cyclo(c),
            },
            Scalar::Radical(r) => (*r).clone(),
            Scalar::Ball(_) => {
                // sqrt of a ball happens immediately, not as a tree
                return inner;
            }
        };
        Scalar::Radical(Arc::new(RadicalExpr::Sqrt(Arc::new(leaf))))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Ball(_))
    }

    /// Structural zero test for exact values; for balls, true only when the
    /// ball is exactly the origin.
    pub fn is_structural_zero(&self) -> bool {
        match self {
            Scalar::Cyclo(c) => c.is_zero(),
            Scalar::Radical(_) => false,
            Scalar::Ball(b) => {
                b.re.is_exact() && b.im.is_exact() && b.re.mid.is_zero() && b.im.mid.is_zero()
            }
        }
    }

    pub fn to_ball(&self, ctx: &PrecisionContext) -> Result<ComplexBall, ScalarError> {
        match self {
            Scalar::Cyclo(c) => Ok(c.to_ball(ctx.bits)),
            Scalar::Radical(r) => r.eval(ctx.bits),
            Scalar::Ball(b) => Ok(b.clone()),
        }
    }

    fn as_radical(&self) -> Option<RadicalExpr> {
        match self {
            Scalar::Cyclo(c) => Some(match c.is_rational() {
                Some(r) => RadicalExpr::Rational(r),
                None => RadicalExpr::Cyclo(c.clone()),
            }),
            Scalar::Radical(r) => Some((**r).clone()),
            Scalar::Ball(_) => None,
        }
    }

    pub fn add(&self, other: &Scalar, ctx: &PrecisionContext) -> Scalar {
        match (self, other) {
            (Scalar::Cyclo(a), Scalar::Cyclo(b)) => Scalar::Cyclo(a.add(b)),
            _ => match (self.as_radical(), other.as_radical()) {
                (Some(a), Some(b)) => {
                    Scalar::Radical(Arc::new(RadicalExpr::Add(Arc::new(a), Arc::new(b))))
                }
                _ => self.ball_binop(other, ctx, |a, b, p| a.add(b, p)),
            },
        }
    }

    pub fn sub(&self, other: &Scalar, ctx: &PrecisionContext) -> Scalar {
        self.add(&other.neg(), ctx)
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Cyclo(c) => Scalar::Cyclo(c.neg()),
            Scalar::Radical(r) => Scalar::Radical(Arc::new(RadicalExpr::Sub(
                Arc::new(RadicalExpr::Rational(BigRational::zero())),
                r.clone(),
            ))),
            Scalar::Ball(b) => Scalar::Ball(b.neg()),
        }
    }

    pub fn mul(&self, other: &Scalar, ctx: &PrecisionContext) -> Scalar {
        match (self, other) {
            (Scalar::Cyclo(a), Scalar::Cyclo(b)) => Scalar::Cyclo(a.mul(b)),
            _ => match (self.as_radical(), other.as_radical()) {
                (Some(a), Some(b)) => {
                    Scalar::Radical(Arc::new(RadicalExpr::Mul(Arc::new(a), Arc::new(b))))
                }
                _ => self.ball_binop(other, ctx, |a, b, p| a.mul(b, p)),
            },
        }
    }

    pub fn div(&self, other: &Scalar, ctx: &PrecisionContext) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Cyclo(a), Scalar::Cyclo(b)) => {
                let inv = b.inv().ok_or(ScalarError::DivisionByZero)?;
                Ok(Scalar::Cyclo(a.mul(&inv)))
            }
            _ => match (self.as_radical(), other.as_radical()) {
                (Some(a), Some(b)) => Ok(Scalar::Radical(Arc::new(RadicalExpr::Div(
                    Arc::new(a),
                    Arc::new(b),
                )))),
                _ => {
                    let a = self.to_ball(ctx)?;
                    let b = other.to_ball(ctx)?;
                    Ok(Scalar::Ball(
                        a.div(&b, ctx.bits).ok_or(ScalarError::DivisionByZero)?,
                    ))
                }
            },
        }
    }

    pub fn conj(&self, _ctx: &PrecisionContext) -> Scalar {
        match self {
            Scalar::Cyclo(c) => Scalar::Cyclo(c.conj()),
            Scalar::Radical(r) => Scalar::Radical(Arc::new(r.conj())),
            Scalar::Ball(b) => Scalar::Ball(b.conj()),
        }
    }

    pub fn pow(&self, n: i64, ctx: &PrecisionContext) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Cyclo(c) => Ok(Scalar::Cyclo(c.pow(n).ok_or(ScalarError::DivisionByZero)?)),
            Scalar::Radical(r) => Ok(Scalar::Radical(Arc::new(RadicalExpr::Pow(r.clone(), n)))),
            Scalar::Ball(b) => Ok(Scalar::Ball(
                b.pow_i64(n, ctx.bits).ok_or(ScalarError::DivisionByZero)?,
            )),
        }
    }

    fn ball_binop(
        &self,
        other: &Scalar,
        ctx: &PrecisionContext,
        f: impl Fn(&ComplexBall, &ComplexBall, u64) -> ComplexBall,
    ) -> Scalar {
        let a = self.to_ball(ctx).expect("exact operand evaluates");
        let b = other.to_ball(ctx).expect("exact operand evaluates");
        Scalar::Ball(f(&a, &b, ctx.bits))
    }

    /// |self - other| <= tolerance, radii folded in.
    pub fn approx_eq(&self, other: &Scalar, ctx: &PrecisionContext) -> bool {
        if let (Scalar::Cyclo(a), Scalar::Cyclo(b)) = (self, other) {
            return a.sub(b).is_zero();
        }
        let a = match self.to_ball(ctx) {
            Ok(v) => v,
            Err(_) => return false,
        };
        let b = match other.to_ball(ctx) {
            Ok(v) => v,
            Err(_) => return false,
        };
        let d = a.sub(&b, ctx.bits);
        d.abs_upper().to_f64() <= ctx.tolerance
    }

    /// Upper bound on |self| (for residual reports).
    pub fn abs_upper(&self, ctx: &PrecisionContext) -> f64 {
        match self.to_ball(ctx) {
            Ok(b) => b.abs_upper().to_f64(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn to_f64_pair(&self, ctx: &PrecisionContext) -> (f64, f64) {
        self.to_ball(ctx).map(|b| b.to_f64_pair()).unwrap_or((f64::NAN, f64::NAN))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx = PrecisionContext::new(64, 1e-10);
        let (re, im) = self.to_f64_pair(&ctx);
        if im.abs() < 1e-12 {
            write!(f, "{re:.8}")
        } else {
            write!(f, "{re:.8}{im:+.8}i")
        }
    }
}

// ---------------------------------------------------------------------------
// Domain constants

/// The primitive root of unity of order 3(4+level), exactly.
pub fn q_root(level: u32) -> Scalar {
    assert!(level >= 1, "level must be positive");
    let order = 3 * (4 + level as u64);
    Scalar::Cyclo(Cyclotomic::root(order, 1))
}

/// The n-th quantum integer [n]_q as the Laurent sum
/// q^(n-1) + q^(n-3) + ... + q^(1-n); no division involved.
pub fn quantum_int(n: i64, q: &Scalar, ctx: &PrecisionContext) -> Scalar {
    if n == 0 {
        return Scalar::zero();
    }
    let (sign, n_abs) = if n < 0 { (true, -n) } else { (false, n) };
    let mut acc = Scalar::zero();
    let mut k = n_abs - 1;
    loop {
        acc = acc.add(&q.pow(k, ctx).expect("unit q"), ctx);
        if k <= 1 - n_abs {
            break;
        }
        k -= 2;
    }
    if sign {
        acc.neg()
    } else {
        acc
    }
}

/// The loop value q^10 + q^8 + q^2 + 1 + q^-2 + q^-8 + q^-10.
pub fn delta(q: &Scalar, ctx: &PrecisionContext) -> Scalar {
    let mut acc = Scalar::zero();
    for e in [10i64, 8, 2, 0, -2, -8, -10] {
        acc = acc.add(&q.pow(e, ctx).expect("unit q"), ctx);
    }
    acc
}

/// kappa^2 = [7]_q - 1, the bigon coefficient.
pub fn kappa_sq(q: &Scalar, ctx: &PrecisionContext) -> Scalar {
    quantum_int(7, q, ctx).sub(&Scalar::one(), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn q_root_orders() {
        // level 4: primitive 48th root; level 3: primitive 42nd root
        let q4 = q_root(4);
        let q3 = q_root(3);
        assert!(q4.pow(48, &ctx()).unwrap().approx_eq(&Scalar::one(), &ctx()));
        assert!(!q4.pow(24, &ctx()).unwrap().approx_eq(&Scalar::one(), &ctx()));
        assert!(q3.pow(42, &ctx()).unwrap().approx_eq(&Scalar::one(), &ctx()));
        assert!(!q3.pow(21, &ctx()).unwrap().approx_eq(&Scalar::one(), &ctx()));
    }

    #[test]
    fn quantum_int_small() {
        let q4 = q_root(4);
        assert!(quantum_int(1, &q4, &ctx()).approx_eq(&Scalar::one(), &ctx()));
        let expect = q4
            .pow(1, &ctx())
            .unwrap()
            .add(&q4.pow(-1, &ctx()).unwrap(), &ctx());
        assert!(quantum_int(2, &q4, &ctx()).approx_eq(&expect, &ctx()));
    }

    #[test]
    fn quantum_int_quotient_identity() {
        // [n]_q (q - q^-1) = q^n - q^-n over a spread of n and roots q
        let c = ctx();
        for (order, k) in [(48u64, 1i64), (42, 5), (30, 7), (17, 3)] {
            let q = Scalar::Cyclo(Cyclotomic::root(order, k));
            let qmq = q.sub(&q.pow(-1, &c).unwrap(), &c);
            for n in -20..=20 {
                let lhs = quantum_int(n, &q, &c).mul(&qmq, &c);
                let rhs = q.pow(n, &c).unwrap().sub(&q.pow(-n, &c).unwrap(), &c);
                assert!(lhs.approx_eq(&rhs, &c), "n={n} order={order} k={k}");
            }
        }
    }

    #[test]
    fn delta_at_one() {
        assert!(delta(&Scalar::one(), &ctx()).approx_eq(&Scalar::from_i64(7), &ctx()));
    }

    #[test]
    fn delta_level4_value() {
        // 1 + 2cos(15) + 2cos(60) + 2cos(75) in degrees
        let d = delta(&q_root(4), &ctx());
        let (re, im) = d.to_f64_pair(&ctx());
        let expect = 1.0
            + 2.0 * (15f64).to_radians().cos()
            + 2.0 * (60f64).to_radians().cos()
            + 2.0 * (75f64).to_radians().cos();
        assert!((re - expect).abs() < 1e-12);
        assert!(im.abs() < 1e-12);
    }

    #[test]
    fn bigon_coefficient_is_real() {
        let k2 = kappa_sq(&q_root(4), &ctx());
        let (re, im) = k2.to_f64_pair(&ctx());
        assert!(im.abs() < 1e-12);
        assert!(re > 0.0);
    }

    #[test]
    fn field_axioms_randomized() {
        // (a+b)*c = a*c + b*c on pseudo-random cyclotomics, exactly.
        let c = ctx();
        let mk = |seed: i64| {
            let mut acc = Scalar::zero();
            for j in 0..4 {
                let coeff = Scalar::from_rational(BigRational::new(
                    BigInt::from((seed * 37 + j * 11) % 23 - 11),
                    BigInt::from(1 + ((seed + j) % 5).abs()),
                ));
                let z = Scalar::Cyclo(Cyclotomic::root(48, (seed * 7 + j * 13) % 48));
                acc = acc.add(&coeff.mul(&z, &c), &c);
            }
            acc
        };
        for s in 0..24 {
            let (a, b, cc) = (mk(s), mk(s + 100), mk(s + 200));
            let lhs = a.add(&b, &c).mul(&cc, &c);
            let rhs = a.mul(&cc, &c).add(&b.mul(&cc, &c), &c);
            match (lhs, rhs) {
                (Scalar::Cyclo(x), Scalar::Cyclo(y)) => assert!(x.sub(&y).is_zero()),
                _ => panic!("expected exact arithmetic"),
            }
        }
    }

    #[test]
    fn conjugate_involution_and_distribution() {
        let c = ctx();
        let a = Scalar::Cyclo(Cyclotomic::root(48, 5));
        let b = Scalar::sqrt_expr(Scalar::from_i64(3));
        let ab = a.mul(&b, &c);
        assert!(ab
            .conj(&c)
            .conj(&c)
            .approx_eq(&ab, &c));
        let lhs = a.add(&b, &c).conj(&c);
        let rhs = a.conj(&c).add(&b.conj(&c), &c);
        assert!(lhs.approx_eq(&rhs, &c));
        let lhs = ab.conj(&c);
        let rhs = a.conj(&c).mul(&b.conj(&c), &c);
        assert!(lhs.approx_eq(&rhs, &c));
    }

    #[test]
    fn ball_inclusion_correctness() {
        // For exact inputs, the exact result lies inside the computed ball.
        let c = PrecisionContext::new(64, 1e-10);
        let third = Scalar::from_rational(BigRational::new(BigInt::from(1), BigInt::from(3)));
        let b = third.to_ball(&c).unwrap();
        let three = ComplexBall::from_real(RealBall::from_i64(3));
        let prod = b.mul(&three, c.bits);
        // 1 in [lo, hi]
        assert!(prod.re.lower() <= Dyadic::one());
        assert!(Dyadic::one() <= prod.re.upper());
    }

    #[test]
    fn radical_alpha4_value() {
        // sqrt(2 + sqrt(3) - sqrt(2 + sqrt(3))) evaluates near 1.2867
        let c = ctx();
        let three_sqrt = Scalar::sqrt_expr(Scalar::from_i64(3));
        let inner = Scalar::from_i64(2).add(&three_sqrt, &c);
        let alpha4 = Scalar::sqrt_expr(inner.sub(&Scalar::sqrt_expr(inner.clone()), &c));
        let (re, _) = alpha4.to_f64_pair(&c);
        let expect = (2.0 + 3f64.sqrt() - (2.0 + 3f64.sqrt()).sqrt()).sqrt();
        assert!((re - expect).abs() < 1e-14);
    }
}
