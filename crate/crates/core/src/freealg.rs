//! Words in the free algebra, the PBW rewriting engine and affine
//! endomorphisms acting on normal forms.
//!
//! Generators are numbered from 1. Relations are always applied in the
//! descending direction `x_j x_i -> q_ij x_i x_j + sum_k a_ij,k x_k + b_ij`.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::presentation::{AlgebraPresentation, PresentationError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeAlgError {
    #[error("word has no descent")]
    NoDescent,
    #[error("generator index {0} out of range")]
    IndexOutOfRange(usize),
}

/// Which adjacent descent `x_j x_i` (`j > i`) is rewritten first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn inversions(&self) -> usize {
        let w = &self.0;
        let mut c = 0;
        for s in 0..w.len() {
            for t in s + 1..w.len() {
                if w[s] > w[t] {
                    c += 1;
                }
            }
        }
        c
    }

    fn descent(&self, strategy: Strategy) -> Option<usize> {
        let w = &self.0;
        let mut positions = (0..w.len().saturating_sub(1)).filter(|&p| w[p] > w[p + 1]);
        match strategy {
            Strategy::Leftmost => positions.next(),
            Strategy::Rightmost => positions.next_back(),
        }
    }

    /// Exponent vector of an ascending word, `None` if it has a descent.
    pub fn to_exponents(&self, n: usize) -> Option<Exponents> {
        if self.descent(Strategy::Leftmost).is_some() {
            return None;
        }
        let mut e = vec![0u32; n];
        for &l in &self.0 {
            e[l - 1] += 1;
        }
        Some(Exponents(e))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (t, l) in self.0.iter().enumerate() {
            if t > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

/// Element of the free algebra.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreePoly {
    terms: BTreeMap<Word, Scalar>,
}

impl FreePoly {
    pub fn zero() -> Self {
        FreePoly::default()
    }

    pub fn word(w: Word) -> Self {
        let mut p = FreePoly::zero();
        p.add_term(w, Scalar::one());
        p
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        add_into(&mut self.terms, w, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().rev().map(|(w, c)| (w.to_string(), c)))
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Scalar>, k: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        alloc::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        alloc::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Exponent vector `alpha` of the ordered monomial `x_1^a1 ... x_n^an`.
///
/// Ordered degree-lexicographically with `x_1 < ... < x_n`: total degree
/// first, then the exponent of `x_n`, then `x_{n-1}`, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponents(Vec<u32>);

impl Exponents {
    pub fn new(e: Vec<u32>) -> Self {
        Exponents(e)
    }

    pub fn zero(n: usize) -> Self {
        Exponents(vec![0; n])
    }

    /// The generator `x_k`.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k - 1] = 1;
        Exponents(e)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn to_word(&self) -> Word {
        let mut v = Vec::with_capacity(self.degree() as usize);
        for (i, &a) in self.0.iter().enumerate() {
            v.extend(core::iter::repeat_n(i + 1, a as usize));
        }
        Word(v)
    }

    /// All exponent vectors of length `n` with total degree at most `d`,
    /// in increasing order.
    pub fn up_to_degree(n: usize, d: u32) -> Vec<Exponents> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponents>) {
            if i == cur.len() {
                out.push(Exponents(cur.clone()));
                return;
            }
            for a in 0..=left {
                cur[i] = a;
                rec(i + 1, left - a, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, d, &mut cur, &mut out);
        out.sort();
        out
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if a > 1 {
                write!(f, "^{a}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// PBW normal form: a combination of ordered monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NormalPoly {
    terms: BTreeMap<Exponents, Scalar>,
}

impl NormalPoly {
    pub fn zero() -> Self {
        NormalPoly::default()
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        let mut p = NormalPoly::zero();
        p.add_term(Exponents::zero(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        NormalPoly::constant(n, Scalar::one())
    }

    pub fn monomial(e: Exponents) -> Self {
        let mut p = NormalPoly::zero();
        p.add_term(e, Scalar::one());
        p
    }

    /// `lambda x_k + mu`.
    pub fn affine(n: usize, k: usize, lambda: &Scalar, mu: &Scalar) -> Self {
        let mut p = NormalPoly::zero();
        p.add_term(Exponents::unit(n, k), lambda.clone());
        p.add_term(Exponents::zero(n), mu.clone());
        p
    }

    pub fn add_term(&mut self, e: Exponents, c: Scalar) {
        add_into(&mut self.terms, e, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponents) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Exponents::degree)
    }

    pub fn scale(&self, c: &Scalar) -> NormalPoly {
        if c.is_zero() {
            return NormalPoly::zero();
        }
        NormalPoly { terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn to_free(&self) -> FreePoly {
        let mut p = FreePoly::zero();
        for (e, c) in &self.terms {
            p.add_term(e.to_word(), c.clone());
        }
        p
    }

    pub fn add_assign_ref(&mut self, other: &NormalPoly) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl<'a> Add<&'a NormalPoly> for &'a NormalPoly {
    type Output = NormalPoly;
    fn add(self, rhs: &NormalPoly) -> NormalPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a NormalPoly> for &'a NormalPoly {
    type Output = NormalPoly;
    fn sub(self, rhs: &NormalPoly) -> NormalPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &NormalPoly {
    type Output = NormalPoly;
    fn neg(self) -> NormalPoly {
        NormalPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl fmt::Display for NormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().rev().map(|(e, c)| (e.to_string(), c)))
    }
}

/// Renders `c1 m1 + c2 m2 - ...` with unit coefficients and unit monomials elided.
fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (alloc::string::String, &'a Scalar)>,
{
    let mut first = true;
    for (mono, c) in terms {
        let (negative, mag) = match c.as_rational() {
            Some(r) if r < num_traits::Zero::zero() => (true, -c),
            Some(_) => (false, c.clone()),
            None => {
                let neg = -c;
                let s = neg.to_string();
                if c.to_string().starts_with('-') && !s.contains(' ') {
                    (true, neg)
                } else {
                    (false, c.clone())
                }
            }
        };
        if first {
            if negative {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if negative { " - " } else { " + " })?;
        }
        first = false;
        let unit_mono = mono == "1";
        let cs = mag.to_string();
        if mag.is_one() {
            f.write_str(&mono)?;
        } else if unit_mono {
            if cs.contains(' ') {
                write!(f, "({cs})")?;
            } else {
                f.write_str(&cs)?;
            }
        } else if cs.contains(' ') || cs.starts_with('-') {
            write!(f, "({cs}) {mono}")?;
        } else {
            write!(f, "{cs} {mono}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Affine substitution `x_j -> lambda_j x_j + mu_j` on each generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineEndo {
    images: Vec<(Scalar, Scalar)>,
}

impl AffineEndo {
    pub fn identity(n: usize) -> Self {
        AffineEndo { images: vec![(Scalar::one(), Scalar::zero()); n] }
    }

    pub fn from_images(images: Vec<(Scalar, Scalar)>) -> Self {
        AffineEndo { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn set(&mut self, j: usize, lambda: Scalar, mu: Scalar) {
        self.images[j - 1] = (lambda, mu);
    }

    /// `(lambda_j, mu_j)` for generator `j`.
    pub fn image(&self, j: usize) -> &(Scalar, Scalar) {
        &self.images[j - 1]
    }

    pub fn images(&self) -> &[(Scalar, Scalar)] {
        &self.images
    }

    pub fn is_bijective(&self) -> bool {
        self.images.iter().all(|(l, _)| !l.is_zero())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineEndo) -> AffineEndo {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|((ls, ms), (lo, mo))| (lo * ls, &(lo * ms) + mo))
            .collect();
        AffineEndo { images }
    }

    pub fn inverse(&self) -> Option<AffineEndo> {
        let mut images = Vec::with_capacity(self.images.len());
        for (l, m) in &self.images {
            let li = l.recip().ok()?;
            let mu = -(&li * m);
            images.push((li, mu));
        }
        Some(AffineEndo { images })
    }

    /// True iff `e1 ∘ e2` and `e2 ∘ e1` agree on every generator.
    pub fn commutes_with(&self, other: &AffineEndo) -> bool {
        self.compose(other) == other.compose(self)
    }
}

/// A validated presentation prepared for rewriting.
#[derive(Debug, Clone)]
pub struct Algebra {
    pres: AlgebraPresentation,
    n: usize,
    // indexed [i][j] with 1 <= i < j <= n, stored 0-based
    q: Vec<Vec<Scalar>>,
    lin: Vec<Vec<Vec<(usize, Scalar)>>>,
    b: Vec<Vec<Scalar>>,
}

impl Algebra {
    pub fn new(pres: &AlgebraPresentation) -> Result<Self, PresentationError> {
        let pres = pres.to_descending()?;
        let n = pres.n();
        let mut q = vec![vec![Scalar::one(); n]; n];
        let mut lin = vec![vec![Vec::new(); n]; n];
        let mut b = vec![vec![Scalar::zero(); n]; n];
        for (i, j) in pres.pairs() {
            q[i - 1][j - 1] = pres.q(i, j);
            b[i - 1][j - 1] = pres.b(i, j);
            for k in 1..=n {
                let a = pres.a(i, j, k);
                if !a.is_zero() {
                    lin[i - 1][j - 1].push((k, a));
                }
            }
        }
        Ok(Algebra { pres, n, q, lin, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The defining presentation in descending orientation.
    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.pres
    }

    pub fn q(&self, i: usize, j: usize) -> &Scalar {
        &self.q[i - 1][j - 1]
    }

    pub fn b(&self, i: usize, j: usize) -> &Scalar {
        &self.b[i - 1][j - 1]
    }

    /// Nonzero `(k, a_ij,k)` for the pair `i < j`.
    pub fn linear(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.lin[i - 1][j - 1]
    }

    pub fn check_word(&self, w: &Word) -> Result<(), FreeAlgError> {
        match w.0.iter().find(|&&l| l == 0 || l > self.n) {
            Some(&l) => Err(FreeAlgError::IndexOutOfRange(l)),
            None => Ok(()),
        }
    }

    fn rewrite_at(&self, w: &Word, p: usize) -> Vec<(Word, Scalar)> {
        let (j, i) = (w.0[p], w.0[p + 1]);
        let pre = &w.0[..p];
        let post = &w.0[p + 2..];
        let build = |mid: &[usize]| {
            let mut v = Vec::with_capacity(pre.len() + mid.len() + post.len());
            v.extend_from_slice(pre);
            v.extend_from_slice(mid);
            v.extend_from_slice(post);
            Word(v)
        };
        let mut out = Vec::with_capacity(2 + self.linear(i, j).len());
        out.push((build(&[i, j]), self.q(i, j).clone()));
        for (k, a) in self.linear(i, j) {
            out.push((build(&[*k]), a.clone()));
        }
        if !self.b(i, j).is_zero() {
            out.push((build(&[]), self.b(i, j).clone()));
        }
        out
    }

    /// Rewrites one descent of `w`, chosen by `strategy`.
    pub fn reduce_once(&self, w: &Word, strategy: Strategy) -> Result<FreePoly, FreeAlgError> {
        self.check_word(w)?;
        let p = w.descent(strategy).ok_or(FreeAlgError::NoDescent)?;
        let mut out = FreePoly::zero();
        for (w, c) in self.rewrite_at(w, p) {
            out.add_term(w, c);
        }
        Ok(out)
    }

    /// Reduces every term to PBW normal form.
    ///
    /// Terms are processed from the largest `(degree, inversions)` down so
    /// that every word is rewritten once with its fully collected coefficient.
    pub fn normalize(&self, p: &FreePoly, strategy: Strategy) -> NormalPoly {
        let mut work: BTreeMap<(usize, usize, Word), Scalar> = BTreeMap::new();
        for (w, c) in p.terms() {
            add_into(&mut work, (w.len(), w.inversions(), w.clone()), c.clone());
        }
        let mut out = NormalPoly::zero();
        while let Some(((_, _, w), c)) = work.pop_last() {
            match w.descent(strategy) {
                None => out.add_term(w.to_exponents(self.n).expect("ascending word"), c),
                Some(pos) => {
                    for (w2, c2) in self.rewrite_at(&w, pos) {
                        let key = (w2.len(), w2.inversions(), w2);
                        add_into(&mut work, key, &c * &c2);
                    }
                }
            }
        }
        out
    }

    pub fn normalize_word(&self, w: &Word) -> NormalPoly {
        self.normalize(&FreePoly::word(w.clone()), Strategy::Leftmost)
    }

    pub fn multiply(&self, a: &NormalPoly, b: &NormalPoly) -> NormalPoly {
        let mut prod = FreePoly::zero();
        for (ea, ca) in a.terms() {
            let wa = ea.to_word();
            for (eb, cb) in b.terms() {
                prod.add_term(wa.concat(&eb.to_word()), ca * cb);
            }
        }
        self.normalize(&prod, Strategy::Leftmost)
    }

    /// Image of a generator: `lambda_j x_j + mu_j`.
    pub fn endo_generator(&self, e: &AffineEndo, j: usize) -> NormalPoly {
        let (l, m) = e.image(j);
        NormalPoly::affine(self.n, j, l, m)
    }

    /// Multiplicative extension of `e`, evaluated monomial by monomial.
    pub fn apply_endo(&self, e: &AffineEndo, p: &NormalPoly) -> NormalPoly {
        let mut out = NormalPoly::zero();
        let mut cache: BTreeMap<(usize, u32), NormalPoly> = BTreeMap::new();
        for (ex, c) in p.terms() {
            let mut acc = NormalPoly::constant(self.n, c.clone());
            for (idx, &a) in ex.as_slice().iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let j = idx + 1;
                let pw = self.endo_power(e, j, a, &mut cache);
                acc = self.multiply(&acc, &pw);
            }
            out.add_assign_ref(&acc);
        }
        out
    }

    fn endo_power(
        &self,
        e: &AffineEndo,
        j: usize,
        a: u32,
        cache: &mut BTreeMap<(usize, u32), NormalPoly>,
    ) -> NormalPoly {
        if let Some(p) = cache.get(&(j, a)) {
            return p.clone();
        }
        let g = self.endo_generator(e, j);
        let p = if a == 1 { g } else { self.multiply(&self.endo_power(e, j, a - 1, cache), &g) };
        cache.insert((j, a), p.clone());
        p
    }

    /// True iff `e` maps every defining relation to zero.
    pub fn is_relation_preserving(&self, e: &AffineEndo) -> bool {
        self.relation_images(e).iter().all(|(_, _, r)| r.is_zero())
    }

    /// `e(x_j)e(x_i) - q_ij e(x_i)e(x_j) - sum_k a_ij,k e(x_k) - b_ij` for each pair.
    pub fn relation_images(&self, e: &AffineEndo) -> Vec<(usize, usize, NormalPoly)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                let ei = self.endo_generator(e, i);
                let ej = self.endo_generator(e, j);
                let mut r = self.multiply(&ej, &ei);
                r = &r - &self.multiply(&ei, &ej).scale(self.q(i, j));
                for (k, a) in self.linear(i, j) {
                    r = &r - &self.endo_generator(e, *k).scale(a);
                }
                r = &r - &NormalPoly::constant(self.n, self.b(i, j).clone());
                out.push((i, j, r));
            }
        }
        out
    }
}
