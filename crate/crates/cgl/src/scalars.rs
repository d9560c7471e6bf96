//! Exact arithmetic in the coefficient field `K = Q(q)`.
//!
//! Two scalar representations live here: [`RatFunc`], a reduced fraction of
//! integer polynomials in `q`, and [`MonomialScalar`], the multiplicative
//! subgroup `c * q^e` used for twist parameters and torus entries.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Univariate polynomial over Z in the parameter `q`, coefficients ascending,
/// no trailing zeros (the zero polynomial is the empty vector).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * q^e`, `e >= 0`.
    pub fn monomial(c: BigInt, e: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = c;
        IntPoly(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Positive gcd of the coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
        }
        g
    }

    pub fn mul_bigint(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn shift(&self, e: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); e];
        v.extend(self.0.iter().cloned());
        IntPoly(v)
    }

    /// Exact division; panics if `d` does not divide `self` in Z[q].
    pub fn div_exact(&self, d: &IntPoly) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let mut rem = self.0.clone();
        let dd = d.degree().unwrap();
        let n = self.degree().unwrap();
        assert!(n >= dd, "inexact polynomial division");
        let mut quot = vec![BigInt::zero(); n - dd + 1];
        for i in (0..quot.len()).rev() {
            let lead = rem[i + dd].clone();
            if lead.is_zero() {
                continue;
            }
            let (c, r) = lead.div_rem(&d.0[dd]);
            assert!(r.is_zero(), "inexact polynomial division");
            quot[i] = c.clone();
            for (k, dk) in d.0.iter().enumerate() {
                rem[i + k] -= &c * dk;
            }
        }
        assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
        Self::new(quot)
    }

    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        // lc(d)^(deg a - deg d + 1) * a  mod  d
        let mut a = self.clone();
        let dd = d.degree().unwrap();
        let lc = d.leading_coeff();
        while let Some(na) = a.degree() {
            if na < dd {
                break;
            }
            let la = a.leading_coeff();
            a = a.mul_bigint(&lc) - d.shift(na - dd).mul_bigint(&la);
        }
        a
    }

    fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.div_exact(&IntPoly::constant(c))
    }

    /// gcd in Z[q], normalized with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part().mul_bigint(&self.content().gcd(&other.content()));
        }
        if other.is_zero() {
            return self.primitive_part().mul_bigint(&self.content().gcd(&other.content()));
        }
        let cont = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.mul_bigint(&cont)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.0.len().max(rhs.0.len());
        let mut v = vec![BigInt::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in rhs.0.iter().enumerate() {
            v[i] += c;
        }
        IntPoly::new(v)
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: IntPoly) -> IntPoly {
        let n = self.0.len().max(rhs.0.len());
        let mut v = vec![BigInt::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in rhs.0.iter().enumerate() {
            v[i] -= c;
        }
        IntPoly::new(v)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if e == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

/// Parse the `<int> [* q^<int>]` term syntax joined by `+` and `-`,
/// e.g. `"1 - q^2"` or `"3*q - 2"`. Errors carry a byte offset.
pub fn parse_int_poly(s: &str) -> Result<IntPoly, Error> {
    let bytes = s.as_bytes();
    let mut pos = 0usize;
    let mut acc = IntPoly::zero();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && (bytes[*pos] as char).is_whitespace() {
            *pos += 1;
        }
    };
    let err = |pos: usize, msg: &str| Error::Syntax {
        offset: pos,
        msg: format!("{} in polynomial {:?}", msg, s),
    };
    skip_ws(&mut pos);
    if pos >= bytes.len() {
        return Err(err(pos, "empty polynomial"));
    }
    let mut sign = BigInt::one();
    loop {
        skip_ws(&mut pos);
        // optional sign
        if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            if bytes[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
            skip_ws(&mut pos);
        }
        // term: integer, q-part, or both
        let mut coeff = BigInt::one();
        let mut saw_int = false;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos > start {
            coeff = s[start..pos].parse().map_err(|_| err(start, "bad integer"))?;
            saw_int = true;
        }
        skip_ws(&mut pos);
        if pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
            skip_ws(&mut pos);
        }
        let mut exp = 0usize;
        let mut saw_q = false;
        if pos < bytes.len() && bytes[pos] == b'q' {
            saw_q = true;
            pos += 1;
            exp = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let es = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == es {
                    return Err(err(pos, "missing exponent"));
                }
                exp = s[es..pos].parse().map_err(|_| err(es, "bad exponent"))?;
            }
        }
        if !saw_int && !saw_q {
            return Err(err(pos, "expected term"));
        }
        acc = &acc + &IntPoly::monomial(sign.clone() * coeff, exp);
        sign = BigInt::one();
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] != b'+' && bytes[pos] != b'-' {
            return Err(err(pos, "expected '+' or '-'"));
        }
    }
    Ok(acc)
}

/// An element of Q(q): a reduced fraction of integer polynomials.
///
/// Canonical form: gcd(num, den) = 1 in Z[q], den has positive leading
/// coefficient, zero is 0/1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl RatFunc {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return RatFunc { num: IntPoly::zero(), den: IntPoly::one() };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        if den.leading_coeff().is_negative() {
            num = -&num;
            den = -&den;
        }
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc { num: IntPoly::zero(), den: IntPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: IntPoly::one(), den: IntPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc { num: IntPoly::constant(BigInt::from(n)), den: IntPoly::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        RatFunc::reduced(
            IntPoly::constant(r.numer().clone()),
            IntPoly::constant(r.denom().clone()),
        )
    }

    /// `c * q^e` with `e` of either sign.
    pub fn q_power(c: &BigRational, e: i64) -> Self {
        let (num, den) = if e >= 0 {
            (IntPoly::monomial(c.numer().clone(), e as usize), IntPoly::constant(c.denom().clone()))
        } else {
            (IntPoly::constant(c.numer().clone()), IntPoly::monomial(c.denom().clone(), (-e) as usize))
        };
        RatFunc::reduced(num, den)
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self, Error> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = RatFunc::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// If this is a single term `c * q^e`, return `(c, e)`.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        if self.is_zero() {
            return None;
        }
        let nz_num: Vec<_> = self.num.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let nz_den: Vec<_> = self.den.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        if nz_num.len() != 1 || nz_den.len() != 1 {
            return None;
        }
        let (en, cn) = nz_num[0];
        let (ed, cd) = nz_den[0];
        Some((
            BigRational::new(cn.clone(), cd.clone()),
            en as i64 - ed as i64,
        ))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::reduced(num, &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        let num = (&self.num * &rhs.den).sub(&rhs.num * &self.den);
        RatFunc::reduced(num, &self.den * &rhs.den)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by zero in Q(q)");
        RatFunc::reduced(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == IntPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// A scalar of the form `c * q^e` with `c` a nonzero rational.
///
/// All twist parameters, torus entries and eigenvalues are kept in this
/// form; it makes monomial-equation solving and the root-of-unity test exact.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialScalar {
    pub c: BigRational,
    pub e: i64,
}

impl MonomialScalar {
    pub fn new(c: BigRational, e: i64) -> Result<Self, Error> {
        if c.is_zero() {
            return Err(Error::InvariantViolation("monomial scalar with zero coefficient".into()));
        }
        Ok(MonomialScalar { c, e })
    }

    pub fn one() -> Self {
        MonomialScalar { c: BigRational::one(), e: 0 }
    }

    /// `q^e`.
    pub fn q(e: i64) -> Self {
        MonomialScalar { c: BigRational::one(), e }
    }

    /// `n * q^e` for integer `n != 0`.
    pub fn int_q(n: i64, e: i64) -> Self {
        MonomialScalar { c: BigRational::from_integer(BigInt::from(n)), e }
    }

    pub fn is_one(&self) -> bool {
        self.e == 0 && self.c.is_one()
    }

    pub fn mul(&self, rhs: &MonomialScalar) -> MonomialScalar {
        MonomialScalar { c: &self.c * &rhs.c, e: self.e + rhs.e }
    }

    pub fn inv(&self) -> MonomialScalar {
        MonomialScalar { c: self.c.recip(), e: -self.e }
    }

    pub fn pow(&self, m: i64) -> MonomialScalar {
        if m == 0 {
            return MonomialScalar::one();
        }
        let base = if m < 0 { self.inv() } else { self.clone() };
        let mut acc = MonomialScalar::one();
        for _ in 0..m.abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        RatFunc::q_power(&self.c, self.e)
    }

    /// True iff some power is 1. With `q` transcendental over Q, this happens
    /// exactly for `e = 0` and `c` in `{1, -1}`.
    pub fn is_root_of_unity(&self) -> bool {
        self.e == 0 && (self.c.is_one() || (-&self.c).is_one())
    }
}

impl fmt::Display for MonomialScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 0 {
            write!(f, "{}", self.c)
        } else if self.c.is_one() {
            write!(f, "q^{}", self.e)
        } else {
            write!(f, "{}*q^{}", self.c, self.e)
        }
    }
}

/// `[m]_s = 1 + s + ... + s^(m-1)` as an element of Q(q).
pub fn q_int(s: &MonomialScalar, m: u32) -> RatFunc {
    let mut acc = RatFunc::zero();
    let mut pw = MonomialScalar::one();
    for _ in 0..m {
        acc = &acc + &pw.to_ratfunc();
        pw = pw.mul(s);
    }
    acc
}

/// `[m]_s! = [1]_s [2]_s ... [m]_s`, with the empty product `[0]_s! = 1`.
pub fn q_int_factorial(s: &MonomialScalar, m: u32) -> RatFunc {
    let mut acc = RatFunc::one();
    for i in 1..=m {
        acc = &acc * &q_int(s, i);
    }
    acc
}

/// Parse a rational like `-1/2` or `3`.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| Error::Syntax {
        offset: 0,
        msg: format!("bad rational {:?}", s),
    })?;
    let d: BigInt = den.parse().map_err(|_| Error::Syntax {
        offset: 0,
        msg: format!("bad rational {:?}", s),
    })?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}
