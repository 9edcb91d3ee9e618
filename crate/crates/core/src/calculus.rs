//! Differential calculus on a bi-quadratic algebra.
//!
//! One-forms are free right modules on `dx_1, ..., dx_n`, and a twist family
//! `rho_k` fixes the left action through `p dx_k = dx_k rho_k(p)`. Every form
//! is stored with right coefficients: `sum_S dx_S a_S` with `S` increasing.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::freealg::{AffineEndo, Algebra, Exponents, NormalPoly, Strategy};
use crate::linalg;
use crate::presentation::{AlgebraPresentation, PresentationError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalculusError {
    #[error("form degree {degree} exceeds the number of generators {n}")]
    DegreeOverflow { degree: usize, n: usize },
    #[error("twist family has {got} maps, algebra has {n} generators")]
    ArityMismatch { got: usize, n: usize },
    #[error(transparent)]
    Obstruction(#[from] Obstruction),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// A relation coefficient `a_ij,k != 0` with `k` outside `{i, j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, thiserror::Error)]
#[error("a({i},{j},{k}) ≠ 0")]
pub struct Obstruction {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

/// First triple `(i, j, k)` in lexicographic order with `a_ij,k != 0`, `k ∉ {i, j}`.
pub fn find_obstruction(pres: &AlgebraPresentation) -> Option<Obstruction> {
    let n = pres.n();
    for (i, j) in pres.pairs() {
        for k in 1..=n {
            if k != i && k != j && !pres.a(i, j, k).is_zero() {
                return Some(Obstruction { i, j, k });
            }
        }
    }
    None
}

/// One affine map `rho_k` per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistFamily {
    rho: Vec<AffineEndo>,
}

impl TwistFamily {
    pub fn new(rho: Vec<AffineEndo>) -> Self {
        TwistFamily { rho }
    }

    pub fn identity(n: usize) -> Self {
        TwistFamily { rho: vec![AffineEndo::identity(n); n] }
    }

    pub fn n(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self, k: usize) -> &AffineEndo {
        &self.rho[k - 1]
    }

    pub fn maps(&self) -> &[AffineEndo] {
        &self.rho
    }

    /// `rho_k(x_k) = x_k` for every `k` and every map bijective.
    pub fn is_well_formed(&self) -> bool {
        let one = Scalar::one();
        self.rho.iter().enumerate().all(|(idx, r)| {
            r.n() == self.rho.len() && r.is_bijective() && {
                let (l, m) = r.image(idx + 1);
                *l == one && m.is_zero()
            }
        })
    }

    /// The family forced by freeness of one-forms and compatibility of `d`
    /// with the relations: for `i < j`,
    /// `rho_i(x_j) = q_ij x_j + a_ij,i` and `rho_j(x_i) = q_ij^-1 (x_i - a_ij,j)`.
    pub fn forced(pres: &AlgebraPresentation) -> Result<TwistFamily, CalculusError> {
        let pres = pres.to_descending()?;
        if let Some(o) = find_obstruction(&pres) {
            return Err(o.into());
        }
        let n = pres.n();
        let mut rho = vec![AffineEndo::identity(n); n];
        for (i, j) in pres.pairs() {
            let q = pres.q(i, j);
            let qinv = q.recip().expect("validated q is nonzero");
            rho[i - 1].set(j, q, pres.a(i, j, i));
            let mu = -(&qinv * &pres.a(i, j, j));
            rho[j - 1].set(i, qinv, mu);
        }
        Ok(TwistFamily { rho })
    }
}

/// A `k`-form `sum_S dx_S a_S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KForm {
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, NormalPoly>,
}

impl KForm {
    pub fn zero(degree: usize) -> Self {
        KForm { degree, coeffs: BTreeMap::new() }
    }

    /// `dx_S a` for an increasing index list `S`.
    pub fn term(subset: Vec<usize>, a: NormalPoly) -> Self {
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        let mut f = KForm::zero(subset.len());
        f.add_term(subset, a);
        f
    }

    pub fn function(a: NormalPoly) -> Self {
        KForm::term(Vec::new(), a)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &NormalPoly)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, subset: &[usize]) -> NormalPoly {
        self.coeffs.get(subset).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, subset: Vec<usize>, a: NormalPoly) {
        if a.is_zero() {
            return;
        }
        let e = self.coeffs.entry(subset).or_default();
        e.add_assign_ref(&a);
        if e.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_form(&mut self, other: &KForm) {
        for (s, a) in &other.coeffs {
            self.add_term(s.clone(), a.clone());
        }
    }

    pub fn sub_form(&self, other: &KForm) -> KForm {
        let mut out = self.clone();
        for (s, a) in &other.coeffs {
            out.add_term(s.clone(), -a);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> KForm {
        let mut out = KForm::zero(self.degree);
        for (s, a) in &self.coeffs {
            out.add_term(s.clone(), a.scale(c));
        }
        out
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (t, (s, a)) in self.coeffs.iter().enumerate() {
            if t > 0 {
                f.write_str(" + ")?;
            }
            if s.is_empty() {
                write!(f, "({a})")?;
                continue;
            }
            for (u, k) in s.iter().enumerate() {
                if u > 0 {
                    f.write_str("∧")?;
                }
                write!(f, "dx{k}")?;
            }
            write!(f, "·({a})")?;
        }
        Ok(())
    }
}

/// The volume form `dx_1 ∧ ... ∧ dx_n` and its twist `nu_omega` with `a ω = ω nu_omega(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeData {
    pub nu_omega: AffineEndo,
    n: usize,
}

impl VolumeData {
    pub fn omega(&self) -> KForm {
        KForm::term((1..=self.n).collect(), NormalPoly::one(self.n))
    }

    /// The right coefficient of a top-degree form.
    pub fn pi_omega(&self, f: &KForm) -> NormalPoly {
        f.coefficient(&(1..=self.n).collect::<Vec<_>>())
    }
}

/// An algebra together with a twist family.
#[derive(Debug, Clone)]
pub struct Calculus {
    alg: Algebra,
    tw: TwistFamily,
}

impl Calculus {
    pub fn new(alg: Algebra, tw: TwistFamily) -> Result<Self, CalculusError> {
        if tw.n() != alg.n() || tw.maps().iter().any(|r| r.n() != alg.n()) {
            return Err(CalculusError::ArityMismatch { got: tw.n(), n: alg.n() });
        }
        Ok(Calculus { alg, tw })
    }

    /// The calculus of the forced twist family.
    pub fn forced(pres: &AlgebraPresentation) -> Result<Self, CalculusError> {
        let tw = TwistFamily::forced(pres)?;
        Calculus::new(Algebra::new(pres)?, tw)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn twists(&self) -> &TwistFamily {
        &self.tw
    }

    pub fn n(&self) -> usize {
        self.alg.n()
    }

    /// Moves `p` rightward past `dx_{t_1}, dx_{t_2}, ...`: applies `rho_{t_1}` first.
    pub fn push_through(&self, p: &NormalPoly, seq: &[usize]) -> NormalPoly {
        let mut acc = p.clone();
        for &t in seq {
            acc = self.alg.apply_endo(self.tw.rho(t), &acc);
        }
        acc
    }

    /// Sorts a product of `dx`'s by adjacent swaps,
    /// `dx_j ∧ dx_i = -lambda dx_i ∧ dx_j` with `lambda` the linear coefficient of
    /// `rho_i(x_j)`. Returns `None` when an index repeats.
    pub fn sort_dx(&self, seq: &[usize], strategy: Strategy) -> Option<(Scalar, Vec<usize>)> {
        let mut v = seq.to_vec();
        let mut c = Scalar::one();
        loop {
            let mut pos = (0..v.len().saturating_sub(1)).filter(|&p| v[p] >= v[p + 1]);
            let p = match strategy {
                Strategy::Leftmost => pos.next(),
                Strategy::Rightmost => pos.next_back(),
            };
            let Some(p) = p else { return Some((c, v)) };
            let (j, i) = (v[p], v[p + 1]);
            if i == j {
                return None;
            }
            let (lambda, _) = self.tw.rho(i).image(j);
            c = -(&c * lambda);
            v.swap(p, p + 1);
        }
    }

    pub fn differential(&self, a: &NormalPoly) -> KForm {
        let n = self.n();
        let mut out = KForm::zero(1);
        for (e, c) in a.terms() {
            let w = e.to_word();
            let letters = w.letters();
            for t in 0..letters.len() {
                let k = letters[t];
                let mut prefix = vec![0u32; n];
                for &l in &letters[..t] {
                    prefix[l - 1] += 1;
                }
                let mut suffix = vec![0u32; n];
                for &l in &letters[t + 1..] {
                    suffix[l - 1] += 1;
                }
                let pre = self.alg.apply_endo(self.tw.rho(k), &NormalPoly::monomial(Exponents::new(prefix)));
                let coeff = self.alg.multiply(&pre, &NormalPoly::monomial(Exponents::new(suffix)));
                out.add_term(vec![k], coeff.scale(c));
            }
        }
        out
    }

    /// `l_k prod_{r<k} rho_k(x_r)^{l_r} x_k^{l_k - 1} x_{k+1}^{l_{k+1}} ... x_n^{l_n}`.
    pub fn partial_closed_form(&self, k: usize, alpha: &Exponents) -> NormalPoly {
        let n = self.n();
        let l = alpha.as_slice();
        if l[k - 1] == 0 {
            return NormalPoly::zero();
        }
        let mut head = vec![0u32; n];
        head[..k - 1].copy_from_slice(&l[..k - 1]);
        let mut tail = l.to_vec();
        tail[..k - 1].iter_mut().for_each(|x| *x = 0);
        tail[k - 1] -= 1;
        let twisted = self.alg.apply_endo(self.tw.rho(k), &NormalPoly::monomial(Exponents::new(head)));
        let p = self.alg.multiply(&twisted, &NormalPoly::monomial(Exponents::new(tail)));
        p.scale(&Scalar::from_int(l[k - 1] as i64))
    }

    pub fn wedge(&self, f: &KForm, g: &KForm) -> Result<KForm, CalculusError> {
        let degree = f.degree + g.degree;
        if degree > self.n() {
            return Err(CalculusError::DegreeOverflow { degree, n: self.n() });
        }
        let mut out = KForm::zero(degree);
        for (s, a) in &f.coeffs {
            for (t, b) in &g.coeffs {
                let mut seq = s.clone();
                seq.extend_from_slice(t);
                let Some((c, sorted)) = self.sort_dx(&seq, Strategy::Leftmost) else { continue };
                let moved = self.push_through(a, t);
                out.add_term(sorted, self.alg.multiply(&moved, b).scale(&c));
            }
        }
        Ok(out)
    }

    /// `d(dx_S a) = (-1)^|S| dx_S ∧ da`.
    pub fn d(&self, f: &KForm) -> Result<KForm, CalculusError> {
        let degree = f.degree + 1;
        if degree > self.n() {
            return Err(CalculusError::DegreeOverflow { degree, n: self.n() });
        }
        let mut out = KForm::zero(degree);
        for (s, a) in &f.coeffs {
            let sign = if s.len() % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
            for (kk, da) in self.differential(a).coeffs {
                let mut seq = s.clone();
                seq.extend(kk);
                if let Some((c, sorted)) = self.sort_dx(&seq, Strategy::Leftmost) {
                    out.add_term(sorted, da.scale(&(&c * &sign)));
                }
            }
        }
        Ok(out)
    }

    /// `p · sum_S dx_S a_S = sum_S dx_S rho_S(p) a_S`.
    pub fn left_multiply_form(&self, p: &NormalPoly, f: &KForm) -> KForm {
        let mut out = KForm::zero(f.degree);
        for (s, a) in &f.coeffs {
            let moved = self.push_through(p, s);
            out.add_term(s.clone(), self.alg.multiply(&moved, a));
        }
        out
    }

    pub fn right_multiply_form(&self, f: &KForm, p: &NormalPoly) -> KForm {
        let mut out = KForm::zero(f.degree);
        for (s, a) in &f.coeffs {
            out.add_term(s.clone(), self.alg.multiply(a, p));
        }
        out
    }

    /// `nu_omega` is the composite of the twists in the order they act when
    /// a function moves past `dx_1 ∧ ... ∧ dx_n`: `rho_1` first.
    pub fn volume_data(&self) -> VolumeData {
        let n = self.n();
        let mut nu = AffineEndo::identity(n);
        for k in 1..=n {
            nu = self.tw.rho(k).compose(&nu);
        }
        VolumeData { nu_omega: nu, n }
    }

    /// Pairs `(dx_S, c dx_{S^c})`, one for every increasing `S` of size `j`,
    /// with `c` chosen so that `c dx_{S^c} ∧ dx_S = ω`.
    pub fn integral_form_generators(&self, j: usize) -> Vec<(KForm, KForm)> {
        let n = self.n();
        let one = NormalPoly::one(n);
        subsets(n, j)
            .into_iter()
            .filter_map(|s| {
                let comp: Vec<usize> = (1..=n).filter(|k| !s.contains(k)).collect();
                let mut seq = comp.clone();
                seq.extend_from_slice(&s);
                let (c, _) = self.sort_dx(&seq, Strategy::Leftmost)?;
                let c = c.recip().ok()?;
                Some((KForm::term(s, one.clone()), KForm::term(comp, one.scale(&c))))
            })
            .collect()
    }

    /// Checks, on every `dx_T m` with `|T| = j` and `deg m <= 2`, both
    /// `ω' = sum_i ω_i π(ω̄_i ∧ ω')` and
    /// `ω' = sum_i nu_omega^-1(π(ω' ∧ ω_i)) ω̄_i` (pairs of size `n - j`).
    pub fn verify_integral_identity(&self, j: usize) -> bool {
        let n = self.n();
        if j > n {
            return false;
        }
        let vol = self.volume_data();
        let Some(nu_inv) = vol.nu_omega.inverse() else { return false };
        let gens = self.integral_form_generators(j);
        let mirror = self.integral_form_generators(n - j);
        let expected = binomial(n, j);
        if gens.len() != expected || mirror.len() != binomial(n, n - j) {
            return false;
        }
        for t in subsets(n, j) {
            for m in Exponents::up_to_degree(n, 2) {
                let w = KForm::term(t.clone(), NormalPoly::monomial(m));
                let mut first = KForm::zero(j);
                for (om, bar) in &gens {
                    let Ok(top) = self.wedge(bar, &w) else { return false };
                    first.add_form(&self.right_multiply_form(om, &vol.pi_omega(&top)));
                }
                if first != w {
                    return false;
                }
                let mut second = KForm::zero(j);
                for (om, bar) in &mirror {
                    let Ok(top) = self.wedge(&w, om) else { return false };
                    let c = self.alg.apply_endo(&nu_inv, &vol.pi_omega(&top));
                    second.add_form(&self.left_multiply_form(&c, bar));
                }
                if second != w {
                    return false;
                }
            }
        }
        true
    }

    /// Basis of `{a : deg a <= bound, da = 0}`.
    pub fn kernel_of_d(&self, bound: u32) -> Vec<NormalPoly> {
        let basis = Exponents::up_to_degree(self.n(), bound);
        let cols: Vec<BTreeMap<(usize, Exponents), Scalar>> = basis
            .iter()
            .map(|e| {
                let mut col = BTreeMap::new();
                for (s, a) in self.differential(&NormalPoly::monomial(e.clone())).coeffs {
                    for (m, c) in a.terms() {
                        col.insert((s[0], m.clone()), c.clone());
                    }
                }
                col
            })
            .collect();
        linalg::kernel(&cols)
            .into_iter()
            .map(|v| {
                let mut p = NormalPoly::zero();
                for (e, c) in basis.iter().zip(v) {
                    p.add_term(e.clone(), c);
                }
                p
            })
            .collect()
    }

    /// `d(d m) = 0` for every monomial of degree at most `depth`.
    pub fn check_dd_zero(&self, depth: u32) -> bool {
        if self.n() < 2 {
            return true;
        }
        Exponents::up_to_degree(self.n(), depth).into_iter().all(|e| {
            let df = self.differential(&NormalPoly::monomial(e));
            self.d(&df).is_ok_and(|f| f.is_zero())
        })
    }

    /// `d(ab) = (da) b + a (db)` on monomials with `deg a + deg b <= depth`.
    pub fn check_leibniz(&self, depth: u32) -> bool {
        let monos = Exponents::up_to_degree(self.n(), depth);
        for a in &monos {
            for b in &monos {
                if a.degree() == 0 || b.degree() == 0 || a.degree() + b.degree() > depth {
                    continue;
                }
                let (pa, pb) = (NormalPoly::monomial(a.clone()), NormalPoly::monomial(b.clone()));
                let lhs = self.differential(&self.alg.multiply(&pa, &pb));
                let mut rhs = self.right_multiply_form(&self.differential(&pa), &pb);
                rhs.add_form(&self.left_multiply_form(&pa, &self.differential(&pb)));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// The kernel of `d` up to degree `depth` is spanned by `1`.
    pub fn check_connected(&self, depth: u32) -> bool {
        let k = self.kernel_of_d(depth);
        k.len() == 1 && k[0].degree() == Some(0)
    }

    /// `a ω = ω nu_omega(a)` on every monomial of degree at most `depth`.
    pub fn check_volume_twist(&self, depth: u32) -> bool {
        let vol = self.volume_data();
        let omega = vol.omega();
        Exponents::up_to_degree(self.n(), depth).into_iter().all(|e| {
            let a = NormalPoly::monomial(e);
            let lhs = self.left_multiply_form(&a, &omega);
            let rhs = self.right_multiply_form(&omega, &self.alg.apply_endo(&vol.nu_omega, &a));
            lhs == rhs
        })
    }

    /// Closed-form partials agree with the Leibniz expansion up to `depth`.
    pub fn check_partials(&self, depth: u32) -> bool {
        Exponents::up_to_degree(self.n(), depth).into_iter().all(|e| {
            let df = self.differential(&NormalPoly::monomial(e.clone()));
            (1..=self.n()).all(|k| df.coefficient(&[k]) == self.partial_closed_form(k, &e))
        })
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Increasing index lists of size `k` drawn from `1..=n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..=n {
            cur.push(s);
            rec(s + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}
