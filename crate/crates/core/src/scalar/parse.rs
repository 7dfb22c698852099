//! Scalar grammar: integers, rationals, `q`, `i`, `sqrt(..)`, `+ - * / ^`,
//! parentheses, and decimal literals. Decimals parse to balls carrying an
//! explicit half-ulp radius; everything else stays exact. The printer emits
//! the same grammar, round-trip stable on exact values.

use super::{Cyclotomic, PrecisionContext, RealBall, Scalar, ScalarError};
use num::{BigInt, BigRational, One, Zero};
use num::pow::Pow;


/// Binds the symbol `q` to a primitive root of unity of the given order.
#[derive(Clone, Copy, Debug)]
pub struct QBinding {
    pub order: u64,
}

impl QBinding {
    pub fn level(level: u32) -> Self {
        QBinding { order: 3 * (4 + level as u64) }
    }
}

pub fn parse_scalar(
    text: &str,
    q: QBinding,
    ctx: &PrecisionContext,
) -> Result<Scalar, ScalarError> {
    let mut p = Parser { input: text.as_bytes(), pos: 0, q, ctx };
    p.skip_ws();
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    q: QBinding,
    ctx: &'a PrecisionContext,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = acc.add(&rhs, self.ctx);
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = acc.sub(&rhs, self.ctx);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = acc.mul(&rhs, self.ctx);
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                acc = acc.div(&rhs, self.ctx)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ScalarError> {
        self.skip_ws();
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Scalar, ScalarError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.eat(b'^') {
            let e = self.signed_int()?;
            base.pow(e, self.ctx)
        } else {
            Ok(base)
        }
    }

    fn signed_int(&mut self) -> Result<i64, ScalarError> {
        self.skip_ws();
        let neg = self.eat(b'-');
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer exponent"));
        }
        let s = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        let v: i64 = s.parse().map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(Scalar::Cyclo(Cyclotomic::root(self.q.order, 1)))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Scalar::i())
            }
            Some(b's') => {
                let rest = &self.input[self.pos..];
                if rest.starts_with(b"sqrt") {
                    self.pos += 4;
                    self.skip_ws();
                    if !self.eat(b'(') {
                        return Err(self.err("expected '(' after sqrt"));
                    }
                    let inner = self.expr()?;
                    self.skip_ws();
                    if !self.eat(b')') {
                        return Err(self.err("expected ')'"));
                    }
                    if let Scalar::Ball(b) = &inner {
                        let s = b.sqrt(self.ctx.bits).ok_or(ScalarError::BranchAmbiguous)?;
                        return Ok(Scalar::Ball(s));
                    }
                    // Validate the branch at parse time per the context bits.
                    let probe = Scalar::sqrt_expr(inner);
                    probe.to_ball(self.ctx)?;
                    Ok(probe)
                } else {
                    Err(self.err("unknown symbol"))
                }
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            _ => Err(self.err("expected a value")),
        }
    }

    fn number(&mut self) -> Result<Scalar, ScalarError> {
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        let int_part = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            let fstart = self.pos;
            while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                self.pos += 1;
            }
            if self.pos == fstart {
                return Err(self.err("decimal with zero digits"));
            }
            let frac = std::str::from_utf8(&self.input[fstart..self.pos]).unwrap();
            let digits = frac.len() as u32;
            let mantissa: BigInt = format!("{int_part}{frac}")
                .parse()
                .map_err(|_| self.err("bad number"))?;
            let denom = BigInt::from(10u32).pow(digits);
            let mid = BigRational::new(mantissa, denom.clone());
            // half-ulp radius: 10^-digits / 2
            let rad = BigRational::new(BigInt::one(), denom * BigInt::from(2));
            let mid_ball = RealBall::from_rational(&mid, self.ctx.bits);
            let rad_ball = RealBall::from_rational(&rad, 32);
            let ball = RealBall::new(
                mid_ball.mid.clone(),
                mid_ball.rad.add(&rad_ball.upper()),
            );
            Ok(Scalar::Ball(super::ComplexBall::from_real(ball)))
        } else {
            let v: BigInt = int_part.parse().map_err(|_| self.err("bad integer"))?;
            Ok(Scalar::from_rational(BigRational::from(v)))
        }
    }
}

// ---------------------------------------------------------------------------
// Printing

/// Canonical text form. Exact values round-trip exactly; balls print as
/// decimals with enough digits that the reparsed half-ulp radius encloses
/// the original ball.
pub fn print_scalar(s: &Scalar, q: QBinding, ctx: &PrecisionContext) -> String {
    match s {
        Scalar::Cyclo(c) => print_cyclo(c, q).unwrap_or_else(|| print_ball(s, ctx)),
        Scalar::Radical(r) => print_radical(r),
        Scalar::Ball(_) => print_ball(s, ctx),
    }
}

fn print_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn print_cyclo(c: &Cyclotomic, q: QBinding) -> Option<String> {
    if let Some(r) = c.is_rational() {
        return Some(print_rational(&r));
    }
    if c.order() == 4 {
        // a + b*i
        let a = &c.coeffs()[0];
        let b = &c.coeffs()[1];
        let mut parts = Vec::new();
        if !a.is_zero() {
            parts.push(print_rational(a));
        }
        if !b.is_zero() {
            parts.push(format!("{}*i", print_rational(b)));
        }
        return Some(parts.join("+").replace("+-", "-"));
    }
    if q.order % c.order() != 0 {
        return None;
    }
    let lifted = c.lift(q.order);
    let mut parts = Vec::new();
    for (k, coeff) in lifted.coeffs().iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let t = if k == 0 {
            print_rational(coeff)
        } else if coeff.is_one() {
            format!("q^{k}")
        } else {
            format!("{}*q^{k}", print_rational(coeff))
        };
        parts.push(t);
    }
    if parts.is_empty() {
        return Some("0".to_string());
    }
    Some(parts.join("+").replace("+-", "-"))
}

fn print_radical(r: &super::RadicalExpr) -> String {
    use super::RadicalExpr::*;
    match r {
        Rational(x) => {
            if x.numer() < &BigInt::zero() {
                format!("({})", print_rational(x))
            } else {
                print_rational(x)
            }
        }
        Cyclo(c) => {
            // Radical-embedded cyclotomics print against their own order.
            print_cyclo(c, QBinding { order: c.order() })
                .map(|s| format!("({s})"))
                .unwrap_or_else(|| "0".to_string())
        }
        Add(a, b) => format!("({}+{})", print_radical(a), print_radical(b)),
        Sub(a, b) => format!("({}-{})", print_radical(a), print_radical(b)),
        Mul(a, b) => format!("({}*{})", print_radical(a), print_radical(b)),
        Div(a, b) => format!("({}/{})", print_radical(a), print_radical(b)),
        Pow(a, n) => format!("({}^{})", print_radical(a), n),
        Sqrt(a) => format!("sqrt({})", print_radical(a)),
    }
}

const BALL_DIGITS: usize = 60;

fn print_ball(s: &Scalar, ctx: &PrecisionContext) -> String {
    let b = s.to_ball(ctx).expect("printable scalar");
    let re = decimal_string(&b.re, BALL_DIGITS);
    if b.im.mid.is_zero() && b.im.rad.is_zero() {
        return re;
    }
    let im_abs = decimal_string(&b.im.abs_ball_for_print(), BALL_DIGITS);
    if b.im.mid.is_negative() {
        format!("{re}-{im_abs}*i")
    } else {
        format!("{re}+{im_abs}*i")
    }
}

impl RealBall {
    fn abs_ball_for_print(&self) -> RealBall {
        if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }
}

/// Fixed-point decimal with `digits` fractional digits, truncated toward
/// zero by way of rounding the scaled midpoint.
fn decimal_string(b: &RealBall, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    // mid * 10^digits rounded to nearest integer
    let mid = &b.mid;
    let scaled = if mid.exp() >= 0 {
        mid.mant() * &scale << mid.exp() as u64
    } else {
        // (mant * scale) >> (-exp), rounding
        let shifted = mid.mant() * &scale;
        let half = BigInt::one() << ((-mid.exp()) as u64 - 1);
        let adj = if shifted >= BigInt::zero() { &shifted + &half } else { &shifted - &half };
        adj >> (-mid.exp()) as u64
    };
    let neg = scaled < BigInt::zero();
    let mag = if neg { -scaled } else { scaled };
    let s = mag.to_string();
    let (int_part, frac_part) = if s.len() > digits {
        (s[..s.len() - digits].to_string(), s[s.len() - digits..].to_string())
    } else {
        ("0".to_string(), format!("{:0>width$}", s, width = digits))
    };
    format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{delta, q_root};

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn parse_exact_forms() {
        let q = QBinding::level(4);
        let c = ctx();
        // q^-4: the first change-of-basis constant at level 4
        let v = parse_scalar("q^-4", q, &c).unwrap();
        let expect = q_root(4).pow(-4, &c).unwrap();
        assert!(v.approx_eq(&expect, &c));
        assert!(v.is_exact());

        let v = parse_scalar("0", q, &c).unwrap();
        assert!(v.is_structural_zero());

        let v = parse_scalar("q^10 + q^8 + q^2 + 1 + q^-2 + q^-8 + q^-10", q, &c).unwrap();
        assert!(v.approx_eq(&delta(&q_root(4), &c), &c));

        let v = parse_scalar("-(3/4)*i + 2", q, &c).unwrap();
        assert!(v.is_exact());
    }

    #[test]
    fn parse_decimal_radius() {
        let q = QBinding::level(3);
        let c = ctx();
        let v = parse_scalar("1.08393", q, &c).unwrap();
        match v {
            Scalar::Ball(b) => {
                assert!((b.re.to_f64() - 1.08393).abs() < 1e-9);
                let r = b.re.rad_f64();
                assert!(r <= 5.1e-6 && r >= 4.9e-6, "half-ulp radius, got {r}");
            }
            _ => panic!("decimal must parse to a ball"),
        }
    }

    #[test]
    fn zero_digit_decimal_rejected() {
        assert!(parse_scalar("3.", QBinding::level(4), &ctx()).is_err());
    }

    #[test]
    fn error_has_position() {
        match parse_scalar("1 + $", QBinding::level(4), &ctx()) {
            Err(ScalarError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn roundtrip_exact() {
        let q = QBinding::level(4);
        let c = ctx();
        for text in ["q^5-3*q^2+1/2", "sqrt(2+sqrt(3))", "(1-i)/2", "7"] {
            let v = parse_scalar(text, q, &c).unwrap();
            let printed = print_scalar(&v, q, &c);
            let reparsed = parse_scalar(&printed, q, &c).unwrap();
            assert!(v.approx_eq(&reparsed, &c), "{text} -> {printed}");
            assert_eq!(v.is_exact(), reparsed.is_exact(), "{text} -> {printed}");
        }
    }

    #[test]
    fn roundtrip_ball_inclusion() {
        let q = QBinding::level(4);
        let c = ctx();
        let v = parse_scalar("0.474073+0.474073*i", q, &c).unwrap();
        let printed = print_scalar(&v, q, &c);
        let reparsed = parse_scalar(&printed, q, &c).unwrap();
        assert!(v.approx_eq(&reparsed, &c));
    }
}
