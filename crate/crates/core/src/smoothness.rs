//! Smoothness verdicts.
//!
//! A presentation with a relation coefficient `a_ij,k != 0`, `k ∉ {i, j}`,
//! admits no `n`-dimensional calculus and is reported as not smooth.
//! Otherwise the forced twist family is constructed and every proof
//! obligation of the free calculus is checked exactly up to a degree bound.
//! When some obligation fails the verdict is undetermined: the sufficient
//! conditions are attached as an explanation, never used to guess.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::calculus::{find_obstruction, Calculus, CalculusError, Obstruction, TwistFamily};
use crate::freealg::Algebra;
use crate::presentation::{AlgebraPresentation, PbwReport, PresentationError};
use crate::scalar::Scalar;

pub const DEFAULT_DEPTH: u32 = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SmoothnessError {
    #[error("presentation is not PBW-consistent")]
    InconsistentPresentation(PbwReport),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionEntry {
    /// The equation written as `left - right`, with symbolic indices.
    pub id: &'static str,
    pub i: usize,
    pub j: usize,
    pub k: Option<usize>,
    pub lhs: Scalar,
    pub holds: bool,
}

impl ConditionEntry {
    pub fn indices(&self) -> String {
        match self.k {
            Some(k) => format!("({},{},{})", self.i, self.j, k),
            None => format!("({},{})", self.i, self.j),
        }
    }
}

impl fmt::Display for ConditionEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} at {}", self.id, self.lhs, self.indices())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConditionReport {
    pub entries: Vec<ConditionEntry>,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionEntry> {
        self.entries.iter().filter(|e| !e.holds)
    }
}

/// The sufficient conditions for smoothness, instantiated on the ascending
/// coefficients `x_i x_j = q_ij x_j x_i + sum_k a_ij,k x_k + b_ij` (`i < j`).
pub fn smoothness_conditions(pres: &AlgebraPresentation) -> Result<ConditionReport, PresentationError> {
    let p = pres.to_ascending()?;
    let n = p.n();
    let one = Scalar::one();
    let q = |i: usize, j: usize| p.q(i, j);
    let a = |i: usize, j: usize, k: usize| p.a(i, j, k);
    let b = |i: usize, j: usize| p.b(i, j);
    let om = |x: Scalar| &one - &x;
    let mut entries = Vec::new();
    let mut push = |id: &'static str, i: usize, j: usize, k: Option<usize>, lhs: Scalar| {
        let holds = lhs.is_zero();
        entries.push(ConditionEntry { id, i, j, k, lhs, holds });
    };
    for (i, j) in p.pairs() {
        for k in (1..=n).filter(|&k| k != i && k != j) {
            push("a_ij,k", i, j, Some(k), a(i, j, k));
        }
        push("b(q-1) - a_i a_j", i, j, None, &(&b(i, j) * &(&q(i, j) - &one)) - &(&a(i, j, i) * &a(i, j, j)));
        for k in 1..=n {
            if i < k && k < j {
                push(
                    "a_ij,j(1-q_ik) - a_ik,k(1-q_ij)",
                    i,
                    j,
                    Some(k),
                    &(&a(i, j, j) * &om(q(i, k))) - &(&a(i, k, k) * &om(q(i, j))),
                );
                push(
                    "a_kj,j(1-q_ik) - a_ik,i(1-q_kj)",
                    i,
                    j,
                    Some(k),
                    &(&a(k, j, j) * &om(q(i, k))) - &(&a(i, k, i) * &om(q(k, j))),
                );
                push(
                    "a_ij,j a_kj,j + b_kj(q_kj-q_ij)",
                    i,
                    j,
                    Some(k),
                    &(&a(i, j, j) * &a(k, j, j)) + &(&b(k, j) * &(&q(k, j) - &q(i, j))),
                );
                push(
                    "b_ij(q_ik-q_kj) + a_kj,k a_ij,j q_ik - q_kj a_ik,k a_ij,i",
                    i,
                    j,
                    Some(k),
                    &(&(&b(i, j) * &(&q(i, k) - &q(k, j))) + &(&(&a(k, j, k) * &a(i, j, j)) * &q(i, k)))
                        - &(&(&q(k, j) * &a(i, k, k)) * &a(i, j, i)),
                );
            } else if k < i {
                push(
                    "a_ij,i(1-q_kj) - a_kj,k(1-q_ij)",
                    i,
                    j,
                    Some(k),
                    &(&a(i, j, i) * &om(q(k, j))) - &(&a(k, j, k) * &om(q(i, j))),
                );
                push(
                    "a_ki,i(1-q_kj) - a_kj,j(1-q_ki)",
                    i,
                    j,
                    Some(k),
                    &(&a(k, i, i) * &om(q(k, j))) - &(&a(k, j, j) * &om(q(k, i))),
                );
                push(
                    "a_ij,j(1-q_ki) - a_ki,k(1-q_ij)",
                    i,
                    j,
                    Some(k),
                    &(&a(i, j, j) * &om(q(k, i))) - &(&a(k, i, k) * &om(q(i, j))),
                );
                push(
                    "b_ij(1-q_ki q_kj) + a_ki,k a_ij,i + q_ki a_ij,j a_kj,k",
                    i,
                    j,
                    Some(k),
                    &(&(&b(i, j) * &om(&q(k, i) * &q(k, j))) + &(&a(k, i, k) * &a(i, j, i)))
                        + &(&(&q(k, i) * &a(i, j, j)) * &a(k, j, k)),
                );
            } else if k > j {
                push(
                    "a_jk,k(1-q_ij) - a_ij,i(1-q_jk)",
                    i,
                    j,
                    Some(k),
                    &(&a(j, k, k) * &om(q(i, j))) - &(&a(i, j, i) * &om(q(j, k))),
                );
                push(
                    "a_ik,i(1-q_jk) - a_jk,j(1-q_ik)",
                    i,
                    j,
                    Some(k),
                    &(&a(i, k, i) * &om(q(j, k))) - &(&a(j, k, j) * &om(q(i, k))),
                );
                push(
                    "a_ik,k(1-q_ij) - a_ij,j(1-q_ik)",
                    i,
                    j,
                    Some(k),
                    &(&a(i, k, k) * &om(q(i, j))) - &(&a(i, j, j) * &om(q(i, k))),
                );
                push(
                    "b_ij(1-q_ik q_jk) + a_ik,k a_ij,i + q_ik a_ij,j a_jk,k",
                    i,
                    j,
                    Some(k),
                    &(&(&b(i, j) * &om(&q(i, k) * &q(j, k))) + &(&a(i, k, k) * &a(i, j, i)))
                        + &(&(&q(i, k) * &a(i, j, j)) * &a(j, k, k)),
                );
            }
        }
    }
    Ok(ConditionReport { entries })
}

/// First triple `(i, j, k)` with `a_ij,k != 0` and `k ∉ {i, j}`.
pub fn obstruction_triple(pres: &AlgebraPresentation) -> Result<Option<Obstruction>, PresentationError> {
    Ok(find_obstruction(&pres.to_descending()?))
}

/// Outcome of each proof obligation for a candidate twist family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRecord {
    pub depth: u32,
    pub well_formed: bool,
    /// `rho_k` respects every defining relation, one flag per generator.
    pub endomorphisms: Vec<bool>,
    /// Every pair of twists commutes.
    pub commutation: bool,
    pub dd_zero: bool,
    pub leibniz: bool,
    pub partials: bool,
    pub connected: bool,
    pub volume_twist: bool,
    pub integral_identity: bool,
}

impl WitnessRecord {
    pub fn passes(&self) -> bool {
        self.well_formed
            && self.endomorphisms.iter().all(|&b| b)
            && self.commutation
            && self.dd_zero
            && self.leibniz
            && self.partials
            && self.connected
            && self.volume_twist
            && self.integral_identity
    }
}

pub fn verify_witness(
    pres: &AlgebraPresentation,
    tw: &TwistFamily,
    depth: u32,
) -> Result<WitnessRecord, SmoothnessError> {
    let calc = Calculus::new(Algebra::new(pres)?, tw.clone())?;
    Ok(verify_calculus(&calc, depth))
}

fn verify_calculus(calc: &Calculus, depth: u32) -> WitnessRecord {
    let n = calc.n();
    let tw = calc.twists();
    let alg = calc.algebra();
    let endomorphisms: Vec<bool> = tw.maps().iter().map(|r| alg.is_relation_preserving(r)).collect();
    let commutation = (1..=n).all(|i| (i + 1..=n).all(|j| tw.rho(i).commutes_with(tw.rho(j))));
    WitnessRecord {
        depth,
        well_formed: tw.is_well_formed(),
        endomorphisms,
        commutation,
        dd_zero: calc.check_dd_zero(depth),
        leibniz: calc.check_leibniz(depth),
        partials: calc.check_partials(depth),
        connected: calc.check_connected(depth),
        volume_twist: calc.check_volume_twist(depth),
        integral_identity: (0..=n).all(|j| calc.verify_integral_identity(j)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Smooth,
    NotSmooth,
    Undetermined,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Smooth => "smooth",
            Status::NotSmooth => "not-smooth",
            Status::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessVerdict {
    pub status: Status,
    /// Present exactly when the status is smooth.
    pub witness: Option<TwistFamily>,
    /// Present exactly when the status is not smooth.
    pub obstruction: Option<Obstruction>,
    /// The forced family that was checked, if one exists.
    pub candidate: Option<TwistFamily>,
    pub conditions: ConditionReport,
    pub checks: Option<WitnessRecord>,
    /// Gelfand-Kirillov dimension, equal to the number of generators.
    pub gkdim: usize,
}

/// Classifies a PBW-consistent presentation.
pub fn analyze(pres: &AlgebraPresentation, depth: u32) -> Result<SmoothnessVerdict, SmoothnessError> {
    let pres = pres.to_descending()?;
    let pbw = pres.check_pbw_by_overlaps()?;
    if !pbw.consistent {
        return Err(SmoothnessError::InconsistentPresentation(pbw));
    }
    let conditions = smoothness_conditions(&pres)?;
    let gkdim = pres.n();
    if let Some(o) = find_obstruction(&pres) {
        return Ok(SmoothnessVerdict {
            status: Status::NotSmooth,
            witness: None,
            obstruction: Some(o),
            candidate: None,
            conditions,
            checks: None,
            gkdim,
        });
    }
    let calc = Calculus::forced(&pres)?;
    let record = verify_calculus(&calc, depth);
    let tw = calc.twists().clone();
    let (status, witness) = if record.passes() { (Status::Smooth, Some(tw.clone())) } else { (Status::Undetermined, None) };
    Ok(SmoothnessVerdict { status, witness, obstruction: None, candidate: Some(tw), conditions, checks: Some(record), gkdim })
}
