//! Laurent polynomials in x1..x6 with arbitrary-precision integer coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order and
//! equality are canonical. Multiplication and exact division take a packed
//! fast path (exponents in one `u64`, coefficients in `i128`) and fall back to
//! `BigInt` arithmetic when either representation would overflow.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use crate::error::LaurentError;

/// Number of variables.
pub const NVARS: usize = 6;

/// Exponents of x1..x6 in a single monomial.
pub type ExponentVector = [i32; NVARS];

/// A Laurent polynomial over the integers. No stored coefficient is zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<ExponentVector, BigInt>,
}

// Packed exponent keys: 10 bits per variable, x1 in the high bits, so the
// integer order of keys agrees with lex order on exponent vectors.
const FIELD_BITS: u32 = 10;
const BIAS: i32 = 512;
const FIELD_MASK: u64 = (1 << FIELD_BITS) - 1;

fn bias_key() -> u64 {
    (0..NVARS).fold(0u64, |k, _| (k << FIELD_BITS) | BIAS as u64)
}

fn pack(e: &ExponentVector) -> u64 {
    e.iter()
        .fold(0u64, |k, &x| (k << FIELD_BITS) | (x + BIAS) as u64)
}

fn unpack(mut key: u64) -> ExponentVector {
    let mut e = [0i32; NVARS];
    for slot in e.iter_mut().rev() {
        *slot = (key & FIELD_MASK) as i32 - BIAS;
        key >>= FIELD_BITS;
    }
    e
}

fn in_pack_range(lo: i32, hi: i32) -> bool {
    lo >= -BIAS && hi < BIAS
}

fn add_exp(a: &ExponentVector, b: &ExponentVector) -> ExponentVector {
    std::array::from_fn(|i| a[i] + b[i])
}

fn sub_exp(a: &ExponentVector, b: &ExponentVector) -> ExponentVector {
    std::array::from_fn(|i| a[i] - b[i])
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial([0; NVARS], BigInt::from(c))
    }

    /// The variable x_i, 1-indexed.
    pub fn var(i: usize) -> Self {
        assert!((1..=NVARS).contains(&i), "variable index {i} out of range");
        let mut e = [0; NVARS];
        e[i - 1] = 1;
        Self::monomial(e, BigInt::one())
    }

    pub fn monomial(e: ExponentVector, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (ExponentVector, BigInt)>>(it: I) -> Self {
        let mut terms: BTreeMap<ExponentVector, BigInt> = BTreeMap::new();
        for (e, c) in it {
            *terms.entry(e).or_default() += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Option<&BigInt> {
        self.terms.get(e)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// True when every coefficient is strictly positive.
    pub fn has_positive_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Largest term in lex order.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Componentwise minimum exponent over all terms (zero vector for 0).
    pub fn min_exponents(&self) -> ExponentVector {
        self.exponent_bound(i32::min)
    }

    /// Componentwise maximum exponent over all terms (zero vector for 0).
    pub fn max_exponents(&self) -> ExponentVector {
        self.exponent_bound(i32::max)
    }

    fn exponent_bound(&self, pick: fn(i32, i32) -> i32) -> ExponentVector {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return [0; NVARS];
        };
        let mut out = *first;
        for e in it {
            for i in 0..NVARS {
                out[i] = pick(out[i], e[i]);
            }
        }
        out
    }

    /// Multiplies every exponent vector by the monomial x^shift.
    pub fn shift(&self, shift: &ExponentVector) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exp(e, shift), c.clone()))
                .collect(),
        }
    }

    /// Sum of all coefficients, i.e. the value at x1 = ... = x6 = 1.
    pub fn eval_at_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.get_mut(e) {
                Some(slot) => {
                    *slot += c;
                    if slot.is_zero() {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(*e, c.clone());
                }
            }
        }
        Self { terms }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_monomial() || other.is_monomial() {
            let (m, p) = if self.is_monomial() { (self, other) } else { (other, self) };
            let (me, mc) = m.terms.iter().next().expect("monomial has a term");
            return Self {
                terms: p
                    .terms
                    .iter()
                    .map(|(e, c)| (add_exp(e, me), c * mc))
                    .collect(),
            };
        }
        self.mul_packed(other).unwrap_or_else(|| self.mul_big(other))
    }

    fn product_fits(&self, other: &Self) -> bool {
        let (lo_a, hi_a) = (self.min_exponents(), self.max_exponents());
        let (lo_b, hi_b) = (other.min_exponents(), other.max_exponents());
        (0..NVARS).all(|i| in_pack_range(lo_a[i] + lo_b[i], hi_a[i] + hi_b[i]))
    }

    fn small_terms(&self) -> Option<Vec<(u64, i128)>> {
        self.terms
            .iter()
            .map(|(e, c)| c.to_i64().map(|v| (pack(e), v as i128)))
            .collect()
    }

    fn mul_packed(&self, other: &Self) -> Option<Self> {
        if !self.product_fits(other) {
            return None;
        }
        let a = self.small_terms()?;
        let b = other.small_terms()?;
        let bias = bias_key();
        let mut acc: FxHashMap<u64, i128> = FxHashMap::default();
        acc.reserve(a.len().max(b.len()) * 4);
        for &(ka, ca) in &a {
            for &(kb, cb) in &b {
                let slot = acc.entry(ka + kb - bias).or_insert(0);
                *slot = slot.checked_add(ca * cb)?;
            }
        }
        Some(Self::from_packed(acc))
    }

    fn from_packed(acc: FxHashMap<u64, i128>) -> Self {
        let mut v: Vec<(u64, i128)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        v.sort_unstable_by_key(|t| t.0);
        Self {
            terms: v
                .into_iter()
                .map(|(k, c)| (unpack(k), BigInt::from(c)))
                .collect(),
        }
    }

    fn mul_big(&self, other: &Self) -> Self {
        let mut acc: FxHashMap<ExponentVector, BigInt> = FxHashMap::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *acc.entry(add_exp(ea, eb)).or_default() += ca * cb;
            }
        }
        Self {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Returns `r` with `r * divisor == self`, or `NonExactDivision`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, LaurentError> {
        if divisor.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if divisor.is_monomial() {
            let (de, dc) = divisor.terms.iter().next().expect("monomial has a term");
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return Err(LaurentError::NonExactDivision);
                }
                terms.insert(sub_exp(e, de), q);
            }
            return Ok(Self { terms });
        }
        // Shift both operands to ordinary polynomials; the quotient of two
        // polynomials not divisible by any x_i is itself an ordinary polynomial.
        let lo_p = self.min_exponents();
        let lo_q = divisor.min_exponents();
        let p = self.shift(&lo_p.map(|x| -x));
        let q = divisor.shift(&lo_q.map(|x| -x));
        let quot = match p.div_poly_packed(&q) {
            Some(r) => r?,
            None => p.div_poly_big(&q)?,
        };
        Ok(quot.shift(&sub_exp(&lo_p, &lo_q)))
    }

    fn div_poly_packed(&self, q: &Self) -> Option<Result<Self, LaurentError>> {
        let (hi_p, hi_q) = (self.max_exponents(), q.max_exponents());
        if !(0..NVARS).all(|i| in_pack_range(0, hi_p[i] + hi_q[i])) {
            return None;
        }
        let mut rem: BTreeMap<u64, i128> = self.small_terms()?.into_iter().collect();
        let qs = q.small_terms()?;
        let (lead_key, lead_c) = *qs.last().expect("nonzero divisor");
        let lead_e = unpack(lead_key);
        let bias = bias_key();
        let mut quot: Vec<(u64, i128)> = Vec::new();
        while let Some((&rk, &rc)) = rem.iter().next_back() {
            let re = unpack(rk);
            if (0..NVARS).any(|i| re[i] < lead_e[i]) || rc % lead_c != 0 {
                return Some(Err(LaurentError::NonExactDivision));
            }
            let tc = rc / lead_c;
            let tk = rk - lead_key + bias;
            quot.push((tk, tc));
            for &(k, c) in &qs {
                let key = tk + k - bias;
                let prod = tc.checked_mul(c)?;
                let slot = rem.entry(key).or_insert(0);
                *slot = slot.checked_sub(prod)?;
                if *slot == 0 {
                    rem.remove(&key);
                }
            }
        }
        quot.sort_unstable_by_key(|t| t.0);
        Some(Ok(Self {
            terms: quot
                .into_iter()
                .map(|(k, c)| (unpack(k), BigInt::from(c)))
                .collect(),
        }))
    }

    fn div_poly_big(&self, q: &Self) -> Result<Self, LaurentError> {
        let mut rem = self.terms.clone();
        let (lead_e, lead_c) = q.leading_term().expect("nonzero divisor");
        let (lead_e, lead_c) = (*lead_e, lead_c.clone());
        let mut quot = BTreeMap::new();
        while let Some((re, rc)) = rem.iter().next_back() {
            if (0..NVARS).any(|i| re[i] < lead_e[i]) {
                return Err(LaurentError::NonExactDivision);
            }
            let (tc, r) = rc.div_rem(&lead_c);
            if !r.is_zero() {
                return Err(LaurentError::NonExactDivision);
            }
            let te = sub_exp(re, &lead_e);
            for (e, c) in &q.terms {
                let key = add_exp(&te, e);
                let slot = rem.entry(key).or_default();
                *slot -= &tc * c;
                if slot.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.insert(te, tc);
        }
        Ok(Self { terms: quot })
    }

    /// Exact evaluation at a rational point.
    pub fn specialize(&self, values: &[BigRational; NVARS]) -> Result<BigRational, LaurentError> {
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k < 0 && values[i].is_zero() {
                    return Err(LaurentError::ZeroDenominator { var: i + 1 });
                }
                term *= num_traits::pow::Pow::pow(&values[i], k);
            }
            total += term;
        }
        Ok(total)
    }

    /// Convenience wrapper around [`specialize`](Self::specialize) for integer points.
    pub fn specialize_int(&self, values: &[i64; NVARS]) -> Result<BigRational, LaurentError> {
        let vals: [BigRational; NVARS] =
            std::array::from_fn(|i| BigRational::from_integer(BigInt::from(values[i])));
        self.specialize(&vals)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: Self) -> LaurentPoly {
        LaurentPoly::add(self, rhs)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: Self) -> LaurentPoly {
        LaurentPoly::sub(self, rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Self) -> LaurentPoly {
        LaurentPoly::mul(self, rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &ExponentVector) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, k)?;
        }
    }
    Ok(())
}

impl fmt::Display for LaurentPoly {
    /// Terms from the lex-largest down, e.g. `x3*x5 + x4*x6 - 2*x1^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let constant = e.iter().all(|&k| k == 0);
            if constant {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> LaurentError {
        LaurentError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn digits(&mut self) -> Result<&'a str, LaurentError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits"))
    }

    fn term(&mut self) -> Result<(ExponentVector, BigInt), LaurentError> {
        let mut e = [0i32; NVARS];
        let mut c = BigInt::one();
        loop {
            match self.peek() {
                Some(b'x') => {
                    self.pos += 1;
                    let idx: usize = self.digits()?.parse().map_err(|_| self.err("bad index"))?;
                    if !(1..=NVARS).contains(&idx) {
                        return Err(self.err("variable index out of range"));
                    }
                    let mut k = 1i32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let neg = self.peek() == Some(b'-');
                        if neg {
                            self.pos += 1;
                        }
                        k = self.digits()?.parse().map_err(|_| self.err("bad exponent"))?;
                        if neg {
                            k = -k;
                        }
                    }
                    e[idx - 1] += k;
                }
                Some(d) if d.is_ascii_digit() => {
                    let n: BigInt = self.digits()?.parse().map_err(|_| self.err("bad integer"))?;
                    c *= n;
                }
                _ => return Err(self.err("expected a factor")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((e, c));
            }
        }
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Parses the grammar produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let mut terms = Vec::new();
        let mut sign = BigInt::one();
        if p.peek() == Some(b'-') {
            p.pos += 1;
            sign = -sign;
        }
        loop {
            let (e, c) = p.term()?;
            terms.push((e, c * &sign));
            match p.peek() {
                None => break,
                Some(b'+') => sign = BigInt::one(),
                Some(b'-') => sign = -BigInt::one(),
                Some(_) => return Err(p.err("expected + or -")),
            }
            p.pos += 1;
        }
        Ok(Self::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> LaurentPoly {
        LaurentPoly::var(i)
    }

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn additive_identity_and_inverse() {
        assert_eq!(&x(1) + &LaurentPoly::zero(), x(1));
        let q = p("3*x1*x2^-1 - x4 + 7");
        assert!((&q + &q.neg()).is_zero());
    }

    #[test]
    fn numerator_of_a_has_two_terms() {
        let num = &(&x(3) * &x(5)) + &(&x(4) * &x(6));
        assert_eq!(num.num_terms(), 2);
        let a = &num * &p("x1^-1*x2^-1");
        assert_eq!(a.num_terms(), 2);
        assert_eq!(a, p("x1^-1*x2^-1*x3*x5 + x1^-1*x2^-1*x4*x6"));
    }

    #[test]
    fn unit_times_inverse() {
        assert_eq!(&x(1) * &p("x1^-1"), LaurentPoly::one());
    }

    #[test]
    fn monomial_division() {
        let num = p("x3*x5 + x4*x6");
        assert_eq!(num.div_exact(&x(1)).unwrap(), p("x1^-1*x3*x5 + x1^-1*x4*x6"));
        assert_eq!(x(1).div_exact(&x(2)).unwrap(), p("x1*x2^-1"));
    }

    #[test]
    fn non_exact_division_is_reported() {
        let r = p("x1 + x2").div_exact(&p("x1 + x3"));
        assert_eq!(r, Err(LaurentError::NonExactDivision));
        let r = p("x1 + 2*x2").div_exact(&p("2*x1 + 2*x2"));
        assert_eq!(r, Err(LaurentError::NonExactDivision));
        assert_eq!(x(1).div_exact(&LaurentPoly::zero()), Err(LaurentError::DivisionByZero));
    }

    #[test]
    fn binomial_division_roundtrip() {
        let a = p("x1*x3 + x2*x4");
        let b = p("x2*x5 + x1*x6 + x1^-2");
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
    }

    #[test]
    fn big_coefficients_take_the_bigint_path() {
        let big = p("x1 + 123456789012345678901234567890*x2");
        let other = p("x3 - 98765432109876543210*x4");
        let prod = &big * &other;
        assert_eq!(prod.div_exact(&other).unwrap(), big);
        let hi = p("x1^600 + x2");
        let prod = &hi * &hi;
        assert_eq!(prod.num_terms(), 3);
        assert_eq!(prod.div_exact(&hi).unwrap(), hi);
    }

    #[test]
    fn specialize_values() {
        let a = p("x1^-1*x2^-1*x3*x5 + x1^-1*x2^-1*x4*x6");
        assert_eq!(a.eval_at_ones(), BigInt::from(2));
        let d = p("x3*x4^-1*x5^-1*x6 + x1^-1*x2*x3*x4^-1 + x1^-1*x2*x5^-1*x6");
        assert_eq!(d.specialize_int(&[1; 6]).unwrap(), BigRational::from_integer(3.into()));
        let r = x(1).div_exact(&x(2)).unwrap().specialize_int(&[1, 0, 1, 1, 1, 1]);
        assert_eq!(r, Err(LaurentError::ZeroDenominator { var: 2 }));
        let half = p("x1^-1").specialize_int(&[2, 1, 1, 1, 1, 1]).unwrap();
        assert_eq!(half, BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let q = p("-2*x1^-3*x6 + x2 - 5 + x4^2*x5");
        let s = q.to_string();
        assert_eq!(s, "x2 + x4^2*x5 - 5 - 2*x1^-3*x6");
        assert_eq!(p(&s), q);
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(p("0"), LaurentPoly::zero());
        assert!("x7".parse::<LaurentPoly>().is_err());
        assert!("x1 +".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = p("x1 + x2^-1");
        let mut acc = LaurentPoly::one();
        for _ in 0..7 {
            acc = &acc * &a;
        }
        assert_eq!(a.pow(7), acc);
        assert_eq!(acc.eval_at_ones(), BigInt::from(128));
    }
}
