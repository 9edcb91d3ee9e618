//! Bi-quadratic presentations: data, validation, orientation handling and the
//! two PBW-consistency decisions (overlap resolution for any `n`, and the
//! closed ten-condition test for three generators).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::freealg::{Algebra, FreePoly, NormalPoly, Strategy, Word};
use crate::scalar::{Parameter, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("invalid presentation: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("closed PBW conditions need exactly 3 generators, got {0}")]
    WrongArity(usize),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join("; ")
}

/// Which side of each relation carries the out-of-order product.
///
/// `Descending`: `x_j x_i = q_ij x_i x_j + sum_k a_ij,k x_k + b_ij` for `i < j`.
/// `Ascending`: `x_i x_j = q_ij x_j x_i + sum_k a_ij,k x_k + b_ij` for `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Descending,
    Ascending,
}

impl Orientation {
    pub fn opposite(self) -> Self {
        match self {
            Orientation::Descending => Orientation::Ascending,
            Orientation::Ascending => Orientation::Descending,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Descending => "descending",
            Orientation::Ascending => "ascending",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoGenerators,
    PairOutOfRange { i: usize, j: usize },
    IndexOutOfRange { i: usize, j: usize, k: usize },
    ZeroQ { i: usize, j: usize },
    UndeclaredParameter(String),
    DuplicateParameter(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoGenerators => write!(f, "at least one generator is required"),
            Violation::PairOutOfRange { i, j } => write!(f, "pair ({i},{j}) must satisfy 1 <= i < j <= n"),
            Violation::IndexOutOfRange { i, j, k } => write!(f, "index ({i},{j},{k}) out of range"),
            Violation::ZeroQ { i, j } => write!(f, "q must be nonzero (q {i} {j})"),
            Violation::UndeclaredParameter(p) => write!(f, "undeclared parameter `{p}`"),
            Violation::DuplicateParameter(p) => write!(f, "parameter `{p}` declared twice"),
        }
    }
}

/// A bi-quadratic presentation `k[x_1..x_n; Q, A, B]`.
///
/// Only explicitly set entries are stored; absent `q` read as 1 and absent
/// `a`, `b` read as 0.
#[derive(Debug, Clone)]
pub struct AlgebraPresentation {
    pub name: Option<String>,
    n: usize,
    params: Vec<Parameter>,
    q: BTreeMap<(usize, usize), Scalar>,
    a: BTreeMap<(usize, usize, usize), Scalar>,
    b: BTreeMap<(usize, usize), Scalar>,
    orientation: Orientation,
}

impl AlgebraPresentation {
    pub fn new(n: usize) -> Self {
        AlgebraPresentation {
            name: None,
            n,
            params: Vec::new(),
            q: BTreeMap::new(),
            a: BTreeMap::new(),
            b: BTreeMap::new(),
            orientation: Orientation::Descending,
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_orientation(mut self, o: Orientation) -> Self {
        self.orientation = o;
        self
    }

    /// Declares parameters by name; panics on an invalid identifier.
    pub fn with_params(mut self, names: &[&str]) -> Self {
        for n in names {
            self.params.push(Parameter::new(n).expect("valid parameter name"));
        }
        self
    }

    pub fn add_param(&mut self, p: Parameter) {
        self.params.push(p);
    }

    pub fn set_q(&mut self, i: usize, j: usize, v: Scalar) -> &mut Self {
        self.q.insert((i, j), v);
        self
    }

    pub fn set_a(&mut self, i: usize, j: usize, k: usize, v: Scalar) -> &mut Self {
        self.a.insert((i, j, k), v);
        self
    }

    pub fn set_b(&mut self, i: usize, j: usize, v: Scalar) -> &mut Self {
        self.b.insert((i, j), v);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &[Parameter] {
        &self.params
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn q(&self, i: usize, j: usize) -> Scalar {
        self.q.get(&(i, j)).cloned().unwrap_or_else(Scalar::one)
    }

    pub fn a(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.a.get(&(i, j, k)).cloned().unwrap_or_default()
    }

    pub fn b(&self, i: usize, j: usize) -> Scalar {
        self.b.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Explicitly stored entries, for serialization.
    pub fn q_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.q.iter()
    }

    pub fn a_entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Scalar)> {
        self.a.iter()
    }

    pub fn b_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.b.iter()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.n;
        if n == 0 {
            out.push(Violation::NoGenerators);
        }
        let pair_ok = |i: usize, j: usize| 1 <= i && i < j && j <= n;
        for &(i, j) in self.q.keys().chain(self.b.keys()) {
            if !pair_ok(i, j) {
                out.push(Violation::PairOutOfRange { i, j });
            }
        }
        for &(i, j, k) in self.a.keys() {
            if !pair_ok(i, j) || k == 0 || k > n {
                out.push(Violation::IndexOutOfRange { i, j, k });
            }
        }
        for (&(i, j), v) in &self.q {
            if v.is_zero() {
                out.push(Violation::ZeroQ { i, j });
            }
        }
        let mut seen = Vec::new();
        for p in &self.params {
            if seen.contains(&p) {
                out.push(Violation::DuplicateParameter(p.name().into()));
            }
            seen.push(p);
        }
        let mut undeclared = Vec::new();
        for v in self.q.values().chain(self.a.values()).chain(self.b.values()) {
            for p in v.parameters() {
                if !self.params.contains(&p) && !undeclared.contains(&p) {
                    undeclared.push(p);
                }
            }
        }
        out.extend(undeclared.into_iter().map(|p| Violation::UndeclaredParameter(p.name().into())));
        out
    }

    pub fn ensure_valid(&self) -> Result<(), PresentationError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(PresentationError::Invalid(v))
        }
    }

    /// The same algebra written in the opposite orientation.
    ///
    /// Solving `x_j x_i = q x_i x_j + L + b` for `x_i x_j` gives
    /// `x_i x_j = q^-1 x_j x_i - q^-1 L - q^-1 b`, and the map is an involution.
    pub fn translate_orientation(&self) -> Result<AlgebraPresentation, PresentationError> {
        self.ensure_valid()?;
        let mut out = AlgebraPresentation {
            name: self.name.clone(),
            n: self.n,
            params: self.params.clone(),
            q: BTreeMap::new(),
            a: BTreeMap::new(),
            b: BTreeMap::new(),
            orientation: self.orientation.opposite(),
        };
        for (i, j) in self.pairs() {
            let q = self.q(i, j);
            let qinv = q.recip().expect("validated q is nonzero");
            if self.q.contains_key(&(i, j)) {
                out.q.insert((i, j), qinv.clone());
            }
            for k in 1..=self.n {
                if let Some(a) = self.a.get(&(i, j, k)) {
                    out.a.insert((i, j, k), -(&qinv * a));
                }
            }
            if let Some(b) = self.b.get(&(i, j)) {
                out.b.insert((i, j), -(&qinv * b));
            }
        }
        Ok(out)
    }

    /// This presentation in canonical (descending) orientation.
    pub fn to_descending(&self) -> Result<AlgebraPresentation, PresentationError> {
        match self.orientation {
            Orientation::Descending => {
                self.ensure_valid()?;
                Ok(self.clone())
            }
            Orientation::Ascending => self.translate_orientation(),
        }
    }

    pub fn to_ascending(&self) -> Result<AlgebraPresentation, PresentationError> {
        match self.orientation {
            Orientation::Ascending => {
                self.ensure_valid()?;
                Ok(self.clone())
            }
            Orientation::Descending => self.translate_orientation(),
        }
    }

    /// Field-wise equality with defaults filled in and exact scalar comparison.
    pub fn same_data(&self, other: &AlgebraPresentation) -> bool {
        if self.n != other.n || self.orientation != other.orientation || self.name != other.name {
            return false;
        }
        let mut ps = self.params.clone();
        let mut qs = other.params.clone();
        ps.sort();
        qs.sort();
        if ps != qs {
            return false;
        }
        self.pairs().all(|(i, j)| {
            self.q(i, j) == other.q(i, j)
                && self.b(i, j) == other.b(i, j)
                && (1..=self.n).all(|k| self.a(i, j, k) == other.a(i, j, k))
        })
    }

    /// Decides PBW consistency by resolving every overlap `x_k x_j x_i`,
    /// `i < j < k`, once starting from the top pair and once from the bottom.
    pub fn check_pbw_by_overlaps(&self) -> Result<PbwReport, PresentationError> {
        let alg = Algebra::new(self)?;
        Ok(alg.check_overlaps())
    }

    /// The ten closed conditions for three generators, read off the
    /// descending coefficients.
    pub fn check_pbw3_closed(&self) -> Result<ClosedPbwReport, PresentationError> {
        if self.n != 3 {
            return Err(PresentationError::WrongArity(self.n));
        }
        let p = self.to_descending()?;
        let (q1, q2, q3) = (p.q(1, 2), p.q(1, 3), p.q(2, 3));
        let (a, b, c) = (p.a(1, 2, 1), p.a(1, 2, 2), p.a(1, 2, 3));
        let (al, be, ga) = (p.a(1, 3, 1), p.a(1, 3, 2), p.a(1, 3, 3));
        let (la, mu, nu) = (p.a(2, 3, 1), p.a(2, 3, 2), p.a(2, 3, 3));
        let (b1, b2, b3) = (p.b(1, 2), p.b(1, 3), p.b(2, 3));
        let one = Scalar::one();
        let zero = Scalar::zero();
        let om = |x: &Scalar| &one - x;

        let mut conditions = Vec::with_capacity(10);
        let mut push = |id: u8, lhs: Scalar, rhs: Scalar| {
            let holds = lhs == rhs;
            conditions.push(ClosedCondition { id, lhs, rhs, holds });
        };
        push(11, &om(&q3) * &al, &om(&q2) * &mu);
        push(12, &om(&q3) * &a, &om(&q1) * &nu);
        push(13, &om(&q2) * &b, &om(&q1) * &ga);
        push(14, &om(&(&q1 * &q2)) * &la, zero.clone());
        push(15, &(&q1 - &q3) * &be, zero.clone());
        push(16, &om(&(&q2 * &q3)) * &c, zero.clone());
        push(
            17,
            &(&(&(&(&(&om(&q3) * &al) - &mu) * &a) + &(&(&b + &(&q1 * &ga)) * &la)) - &(&nu * &al))
                + &(&(&(&q1 * &q2) - &one) * &b3),
            zero.clone(),
        );
        push(
            18,
            &(&(&(&(&a - &nu) * &be) + &(&(&q1 * &ga) * &mu)) - &(&(&q3 * &al) * &b)) + &(&(&q1 - &q3) * &b2),
            zero.clone(),
        );
        push(
            19,
            &(&(&(&(&a + &(&(&q1 - &one) * &nu)) * &ga) + &(&b * &nu)) - &(&(&mu + &(&q3 * &al)) * &c))
                + &(&om(&(&q2 * &q3)) * &b1),
            zero.clone(),
        );
        push(
            20,
            &(&(-&(&(&mu + &(&q3 * &al)) * &b1)) + &(&(&a - &nu) * &b2)) + &(&(&b + &(&q1 * &ga)) * &b3),
            zero,
        );
        let passes = conditions.iter().all(|c| c.holds);
        Ok(ClosedPbwReport { conditions, passes })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapFailure {
    /// `(i, j, k)` with `i < j < k`, naming the word `x_k x_j x_i`.
    pub triple: (usize, usize, usize),
    /// Leftmost-first normal form minus rightmost-first normal form.
    pub difference: NormalPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PbwReport {
    pub consistent: bool,
    pub failures: Vec<OverlapFailure>,
}

/// One of the closed conditions for three generators, with ids 11 to 20.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedCondition {
    pub id: u8,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedPbwReport {
    pub conditions: Vec<ClosedCondition>,
    pub passes: bool,
}

impl ClosedPbwReport {
    pub fn failing(&self) -> impl Iterator<Item = &ClosedCondition> {
        self.conditions.iter().filter(|c| !c.holds)
    }
}

impl Algebra {
    pub(crate) fn check_overlaps(&self) -> PbwReport {
        let n = self.n();
        let mut failures = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let w = FreePoly::word(Word::new(alloc::vec![k, j, i]));
                    let left = self.normalize(&w, Strategy::Leftmost);
                    let right = self.normalize(&w, Strategy::Rightmost);
                    let difference = &left - &right;
                    if !difference.is_zero() {
                        failures.push(OverlapFailure { triple: (i, j, k), difference });
                    }
                }
            }
        }
        PbwReport { consistent: failures.is_empty(), failures }
    }
}

/// Parametric families of the example catalog.
pub mod families {
    use super::*;

    fn int(c: i64) -> Scalar {
        Scalar::from_int(c)
    }

    pub fn polynomial(n: usize) -> AlgebraPresentation {
        AlgebraPresentation::new(n).named(&format!("polynomial-{n}"))
    }

    /// `A_n`: `x_1..x_n, y_1..y_n` with `y_i = x_{n+i}` and `x_{n+i} x_i = x_i x_{n+i} - 1`.
    pub fn weyl(n: usize) -> AlgebraPresentation {
        let mut p = AlgebraPresentation::new(2 * n).named(&format!("weyl-{n}"));
        for i in 1..=n {
            p.set_b(i, n + i, int(-1));
        }
        p
    }

    /// `x_j x_i = l_ij x_i x_j` with one parameter `l<i><j>` per pair.
    pub fn multiplicative_weyl(n: usize) -> AlgebraPresentation {
        let mut p = AlgebraPresentation::new(n).named(&format!("multiplicative-weyl-{n}"));
        let pairs: Vec<_> = p.pairs().collect();
        for (i, j) in pairs {
            let name = format!("l{i}{j}");
            let par = Parameter::new(&name).expect("valid name");
            p.add_param(par.clone());
            p.set_q(i, j, Scalar::param(&par));
        }
        p
    }

    /// `t_1..t_n, E_1..E_m` with `E_i t_i = t_i E_i + E_i` for `i <= min(n, m)`.
    pub fn shift_ops(n: usize, m: usize) -> AlgebraPresentation {
        let mut p = AlgebraPresentation::new(n + m).named(&format!("shift-ops-{n}-{m}"));
        for i in 1..=n.min(m) {
            p.set_a(i, n + i, n + i, int(1));
        }
        p
    }

    /// `t_1..t_n, D_1..D_m` with `D_i t_i = t_i D_i + D_i + 1` for `i <= min(n, m)`.
    pub fn difference_ops(n: usize, m: usize) -> AlgebraPresentation {
        let mut p = AlgebraPresentation::new(n + m).named(&format!("difference-ops-{n}-{m}"));
        for i in 1..=n.min(m) {
            p.set_a(i, n + i, n + i, int(1));
            p.set_b(i, n + i, int(1));
        }
        p
    }

    /// `x_i, y_i, z_i` as `x_i, x_{n+i}, x_{2n+i}` with
    /// `x_i z_i = q z_i x_i`, `z_i y_i = q y_i z_i`, `x_i y_i - q^-1 y_i x_i + z_i = 0`.
    pub fn q_heisenberg(n: usize) -> AlgebraPresentation {
        let mut p = AlgebraPresentation::new(3 * n).named(&format!("q-heisenberg-{n}")).with_params(&["q"]);
        let q = Scalar::var("q");
        let qinv = q.recip().expect("nonzero");
        for i in 1..=n {
            // y x = q x y + q z
            p.set_q(i, n + i, q.clone());
            p.set_a(i, n + i, 2 * n + i, q.clone());
            // z x = q^-1 x z
            p.set_q(i, 2 * n + i, qinv.clone());
            // z y = q y z
            p.set_q(n + i, 2 * n + i, q.clone());
        }
        p
    }
}
