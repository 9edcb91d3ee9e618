//! Exact arithmetic in the rational function field `Q(p1, ..., pm)`.
//!
//! A [`Scalar`] is a quotient of two sparse polynomials with rational
//! coefficients. Canonicalization is deliberately shallow: rational content,
//! common monomial factors and the sign of the denominator are normalized, and
//! cheap cancellations (exact division, univariate gcd) are attempted. Two
//! scalars are compared by cross-multiplication, so equality is exact even when
//! the stored representations differ.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no value assigned to parameter `{0}`")]
    MissingParameter(String),
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("invalid parameter name `{0}`")]
    InvalidName(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A named indeterminate of the coefficient field.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Parameter(Arc<str>);

impl Parameter {
    pub fn new(name: &str) -> Result<Self, ScalarError> {
        if is_identifier(name) {
            Ok(Parameter(Arc::from(name)))
        } else {
            Err(ScalarError::InvalidName(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `[a-zA-Z][a-zA-Z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}

/// Power product of parameters, sorted by parameter name, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
struct Monomial(Vec<(Parameter, u32)>);

impl Monomial {
    fn one() -> Self {
        Monomial(Vec::new())
    }

    fn var(p: Parameter) -> Self {
        Monomial(alloc::vec![(p, 1)])
    }

    fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (p, e) in &self.0 {
            if j < other.0.len() && &other.0[j].0 == p {
                let f = other.0[j].1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((p.clone(), e - f)),
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < *p {
                return None;
            } else {
                out.push((p.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    fn exponent(&self, p: &Parameter) -> u32 {
        self.0.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }

    /// Componentwise minimum.
    fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for (p, e) in &self.0 {
            let f = other.exponent(p);
            if f > 0 {
                out.push((p.clone(), (*e).min(f)));
            }
        }
        Monomial(out)
    }
}

// Graded lexicographic, the alphabetically first parameter being most significant.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            let mut i = 0;
            loop {
                match (a.get(i), b.get(i)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((p, e)), Some((q, f))) => match p.cmp(q) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match e.cmp(f) {
                            Ordering::Equal => i += 1,
                            o => return o,
                        },
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over Q in the parameters.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    fn one() -> Self {
        Poly::constant(Rational::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    fn lead(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect() }
    }

    fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.div(m).expect("monomial divides every term"), c.clone()))
                .collect(),
        }
    }

    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Monomial::one() };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    fn variables(&self) -> Vec<Parameter> {
        let mut vs: Vec<Parameter> =
            self.terms.keys().flat_map(|m| m.0.iter().map(|(p, _)| p.clone())).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.lead()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.lead() {
            let m = rm.div(dm)?;
            let c = rc / dc;
            rem = rem.sub(&d.mul_monomial(&m).scale(&c));
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Univariate view: coefficients indexed by exponent of `p`.
    fn univariate(&self, p: &Parameter) -> Vec<Rational> {
        let deg = self.terms.keys().map(|m| m.exponent(p)).max().unwrap_or(0) as usize;
        let mut coeffs = alloc::vec![Rational::zero(); deg + 1];
        for (m, c) in &self.terms {
            coeffs[m.exponent(p) as usize] += c;
        }
        coeffs
    }

    fn from_univariate(p: &Parameter, coeffs: &[Rational]) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let m = if e == 0 { Monomial::one() } else { Monomial(alloc::vec![(p.clone(), e as u32)]) };
            out.add_term(m, c.clone());
        }
        out
    }

    fn eval(&self, point: &BTreeMap<Parameter, Rational>) -> Result<Rational, ScalarError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (p, e) in &m.0 {
                let v = point.get(p).ok_or_else(|| ScalarError::MissingParameter(p.name().to_string()))?;
                t *= num_traits::pow(v.clone(), *e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Rational `c` such that `self / c` has coprime integer coefficients.
    fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rational::one()
        } else {
            Rational::new(num, den)
        }
    }
}

fn univariate_trim(v: &mut Vec<Rational>) {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn univariate_gcd(mut a: Vec<Rational>, mut b: Vec<Rational>) -> Vec<Rational> {
    univariate_trim(&mut a);
    univariate_trim(&mut b);
    let is_zero = |v: &Vec<Rational>| v.len() == 1 && v[0].is_zero();
    while !is_zero(&b) {
        // a mod b
        let lb = b.last().unwrap().clone();
        while a.len() >= b.len() && !is_zero(&a) {
            let shift = a.len() - b.len();
            let f = a.last().unwrap() / &lb;
            for (i, c) in b.iter().enumerate() {
                a[i + shift] -= c * &f;
            }
            a.pop();
            univariate_trim(&mut a);
            if a.is_empty() {
                a.push(Rational::zero());
            }
        }
        core::mem::swap(&mut a, &mut b);
    }
    let l = a.last().unwrap().clone();
    a.iter().map(|c| c / &l).collect()
}

fn univariate_div(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = a.to_vec();
    univariate_trim(&mut a);
    let mut b = b.to_vec();
    univariate_trim(&mut b);
    if a.len() < b.len() {
        return alloc::vec![Rational::zero()];
    }
    let mut q = alloc::vec![Rational::zero(); a.len() - b.len() + 1];
    let lb = b.last().unwrap().clone();
    for shift in (0..q.len()).rev() {
        let f = &a[shift + b.len() - 1] / &lb;
        for (i, c) in b.iter().enumerate() {
            a[i + shift] -= c * &f;
        }
        q[shift] = f;
    }
    q
}

/// An element of `Q(params)`.
#[derive(Clone)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Scalar { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_rational(c: Rational) -> Self {
        Scalar { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(BigInt::from(c)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn param(p: &Parameter) -> Self {
        let mut num = Poly::zero();
        num.add_term(Monomial::var(p.clone()), Rational::one());
        Scalar { num, den: Poly::one() }
    }

    /// Shorthand for a parameter given by name; panics on an invalid name.
    pub fn var(name: &str) -> Self {
        Scalar::param(&Parameter::new(name).expect("valid parameter name"))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        (self - &Scalar::one()).is_zero()
    }

    /// The rational value if this scalar does not depend on any parameter.
    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// Parameters occurring in the stored numerator or denominator.
    pub fn parameters(&self) -> Vec<Parameter> {
        let mut vs = self.num.variables();
        vs.extend(self.den.variables());
        vs.sort();
        vs.dedup();
        vs
    }

    fn from_parts(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        let mut s = Scalar { num, den };
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = self.num.monomial_content().gcd(&self.den.monomial_content());
        if !g.is_one() {
            self.num = self.num.div_monomial(&g);
            self.den = self.den.div_monomial(&g);
        }
        if let Some(c) = self.den.as_constant() {
            self.num = self.num.scale(&c.recip());
            self.den = Poly::one();
            return;
        }
        self.cancel_common();
        // both sides primitive over Z up to the reduced ratio of their contents
        let (cn, cd) = (self.num.content(), self.den.content());
        let r = cn.clone() / cd.clone();
        let sign = if self.den.lead().is_some_and(|(_, l)| l.is_negative()) { -Rational::one() } else { Rational::one() };
        let fnum = Rational::from_integer(r.numer().clone()) / cn * &sign;
        let fden = Rational::from_integer(r.denom().clone()) / cd * &sign;
        if !fnum.is_one() {
            self.num = self.num.scale(&fnum);
        }
        if !fden.is_one() {
            self.den = self.den.scale(&fden);
        }
    }

    fn cancel_common(&mut self) {
        if let Some(q) = self.num.exact_div(&self.den) {
            self.num = q;
            self.den = Poly::one();
            return;
        }
        if self.num.terms.len() > 1 {
            if let Some(q) = self.den.exact_div(&self.num) {
                self.num = Poly::one();
                self.den = q;
                return;
            }
        }
        let mut vars = self.num.variables();
        vars.extend(self.den.variables());
        vars.sort();
        vars.dedup();
        if vars.len() == 1 && self.num.terms.len() > 1 {
            let p = &vars[0];
            let (a, b) = (self.num.univariate(p), self.den.univariate(p));
            let g = univariate_gcd(a.clone(), b.clone());
            if g.len() > 1 {
                self.num = Poly::from_univariate(p, &univariate_div(&a, &g));
                self.den = Poly::from_univariate(p, &univariate_div(&b, &g));
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::from_parts(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn recip(&self) -> Result<Scalar, ScalarError> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: i32) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn eval_at(&self, point: &BTreeMap<Parameter, Rational>) -> Result<Rational, ScalarError> {
        let n = self.num.eval(point)?;
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(ScalarError::PoleAtPoint);
        }
        Ok(n / d)
    }

    /// Parses the scalar expression grammar.
    pub fn parse(text: &str) -> Result<Scalar, ScalarError> {
        crate::scalar::parser::parse(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn combine(op: FieldOp, a: &Scalar, b: &Scalar) -> Result<Scalar, ScalarError> {
    match op {
        FieldOp::Add => Ok(a + b),
        FieldOp::Sub => Ok(a - b),
        FieldOp::Mul => Ok(a * b),
        FieldOp::Div => a.checked_div(b),
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            let mut s = Scalar { num: self.num.add(&rhs.num), den: self.den.clone() };
            if !s.den.is_one() {
                s.canonicalize();
            } else if s.num.is_zero() {
                s.den = Poly::one();
            }
            return s;
        }
        Scalar::from_parts(self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)), self.den.mul(&rhs.den))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar { num: self.num.mul(&rhs.num), den: Poly::one() };
        }
        Scalar::from_parts(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for Scalar {
    fn from(c: i64) -> Self {
        Scalar::from_int(c)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    for (i, (p, e)) in m.0.iter().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        if *e == 1 {
            write!(f, "{p}")?;
        } else {
            write!(f, "{p}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write_rational(f, &a)?;
            } else if !a.is_one() {
                write_rational(f, &a)?;
                f.write_str("*")?;
                write_monomial(f, m)?;
            } else if i == 0 && neg && m.0[0].1 > 1 {
                // a leading `-q^2` would read back as `(-q)^2`
                f.write_str("(")?;
                write_monomial(f, m)?;
                f.write_str(")")?;
            } else {
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.terms.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let single_power = self.den.terms.len() == 1 && {
            let (m, c) = self.den.terms.iter().next().unwrap();
            c.is_one() && m.0.len() == 1
        };
        if single_power {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

pub(crate) mod parser {
    //! `expr := term (("+"|"-") term)*`
    //! `term := factor (("*"|"/") factor)*`
    //! `factor := atom ("^" integer)?`
    //! `atom := rational | identifier | "(" expr ")" | "-" atom`

    use super::*;

    struct Parser<'a> {
        src: &'a [u8],
        pos: usize,
    }

    pub(crate) fn parse(text: &str) -> Result<Scalar, ScalarError> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(v)
    }

    impl Parser<'_> {
        fn err(&self, msg: &str) -> ScalarError {
            ScalarError::Parse { pos: self.pos, msg: msg.to_string() }
        }

        fn skip_ws(&mut self) {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.src.get(self.pos).copied()
        }

        fn expr(&mut self) -> Result<Scalar, ScalarError> {
            let mut acc = self.term()?;
            while let Some(c @ (b'+' | b'-')) = self.peek() {
                self.pos += 1;
                let t = self.term()?;
                acc = if c == b'+' { &acc + &t } else { &acc - &t };
            }
            Ok(acc)
        }

        fn term(&mut self) -> Result<Scalar, ScalarError> {
            let mut acc = self.factor()?;
            while let Some(c @ (b'*' | b'/')) = self.peek() {
                self.pos += 1;
                let at = self.pos;
                let f = self.factor()?;
                acc = if c == b'*' {
                    &acc * &f
                } else {
                    acc.checked_div(&f).map_err(|_| ScalarError::Parse {
                        pos: at,
                        msg: "division by zero".to_string(),
                    })?
                };
            }
            Ok(acc)
        }

        fn factor(&mut self) -> Result<Scalar, ScalarError> {
            let base = self.atom()?;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let at = self.pos;
                let neg = if self.peek() == Some(b'-') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let n = self.integer()?;
                let e = i32::try_from(n).map_err(|_| self.err("exponent too large"))?;
                let e = if neg { -e } else { e };
                return base
                    .pow(e)
                    .map_err(|_| ScalarError::Parse { pos: at, msg: "zero raised to a negative power".to_string() });
            }
            Ok(base)
        }

        fn integer(&mut self) -> Result<u64, ScalarError> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected integer"));
            }
            core::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse::<u64>()
                .map_err(|_| ScalarError::Parse { pos: start, msg: "integer out of range".to_string() })
        }

        fn atom(&mut self) -> Result<Scalar, ScalarError> {
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let v = self.expr()?;
                    if self.peek() != Some(b')') {
                        return Err(self.err("expected `)`"));
                    }
                    self.pos += 1;
                    Ok(v)
                }
                Some(b'-') => {
                    self.pos += 1;
                    Ok(-self.atom()?)
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let n: BigInt = digits.parse().map_err(|_| self.err("bad integer"))?;
                    Ok(Scalar::from_rational(Rational::from_integer(n)))
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    Ok(Scalar::param(&Parameter::new(name)?))
                }
                Some(_) => Err(self.err("unexpected character")),
                None => Err(self.err("unexpected end of input")),
            }
        }
    }
}
