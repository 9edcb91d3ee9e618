//! Built-in example algebras.
//!
//! Fixed entries are stored as presentation files under `data/`. Parametric
//! families such as `weyl-3` or `shift-ops-2-1` are generated on demand.

use biquad_core::presentation::{families, AlgebraPresentation};

use crate::format::{parse_presentation, FormatError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("catalog entry `{name}` is malformed: {source}")]
    Malformed { name: String, source: FormatError },
}

macro_rules! entries {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/", $name, ".alg")))),*]
    };
}

static FILES: &[(&str, &str)] = entries![
    "polynomial-2",
    "polynomial-3",
    "polynomial-4",
    "quantum-plane",
    "weyl-1",
    "weyl-2",
    "u-n2",
    "quantum-weyl",
    "multiplicative-weyl-3",
    "shift-ops-1-1",
    "difference-ops-1-1",
    "q-heisenberg-1",
    "uq-so3",
    "aw3",
    "dispin",
    "u-sl2",
    "u-so3",
    "wq-sl2",
    "cyclic-quantum-weyl-3",
];

const ALIASES: &[(&str, &str)] = &[
    ("polynomial", "polynomial-2"),
    ("weyl", "weyl-1"),
    ("multiplicative-weyl", "multiplicative-weyl-3"),
    ("shift-ops", "shift-ops-1-1"),
    ("difference-ops", "difference-ops-1-1"),
    ("q-heisenberg", "q-heisenberg-1"),
];

// Generous enough for every use, small enough to keep rewriting tractable.
const MAX_FAMILY_SIZE: usize = 12;

/// Names of the stored entries, in catalog order.
pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}

fn resolve(name: &str) -> &str {
    ALIASES.iter().find(|(a, _)| *a == name).map_or(name, |(_, t)| t)
}

/// Source text of a stored entry.
pub fn source(name: &str) -> Option<&'static str> {
    let name = resolve(name);
    FILES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

fn family(name: &str) -> Option<AlgebraPresentation> {
    let sizes = |rest: &str| -> Option<Vec<usize>> {
        let v: Option<Vec<usize>> = rest.split('-').map(|t| t.parse().ok()).collect();
        v.filter(|v| v.iter().all(|&x| (1..=MAX_FAMILY_SIZE).contains(&x)))
    };
    let one = |prefix: &str| name.strip_prefix(prefix).and_then(sizes).filter(|v| v.len() == 1).map(|v| v[0]);
    let two = |prefix: &str| name.strip_prefix(prefix).and_then(sizes).filter(|v| v.len() == 2).map(|v| (v[0], v[1]));
    if let Some(n) = one("multiplicative-weyl-") {
        return Some(families::multiplicative_weyl(n));
    }
    if let Some(n) = one("polynomial-") {
        return Some(families::polynomial(n));
    }
    if let Some(n) = one("weyl-") {
        return Some(families::weyl(n));
    }
    if let Some(n) = one("q-heisenberg-") {
        return Some(families::q_heisenberg(n));
    }
    if let Some((n, m)) = two("shift-ops-") {
        return Some(families::shift_ops(n, m));
    }
    if let Some((n, m)) = two("difference-ops-") {
        return Some(families::difference_ops(n, m));
    }
    None
}

/// Looks up a stored entry, an alias, or a parametric family member.
pub fn get(name: &str) -> Result<AlgebraPresentation, CatalogError> {
    if let Some(text) = source(name) {
        return parse_presentation(text)
            .map_err(|source| CatalogError::Malformed { name: name.to_string(), source });
    }
    family(resolve(name)).ok_or_else(|| CatalogError::UnknownName(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use biquad_core::scalar::Scalar;

    #[test]
    fn every_entry_parses_and_validates() {
        for n in names() {
            let p = get(n).unwrap();
            assert!(p.validate().is_empty(), "{n}");
            assert_eq!(p.name.as_deref(), Some(n));
        }
    }

    #[test]
    fn golden_entries() {
        let qp = get("quantum-plane").unwrap();
        assert_eq!(qp.n(), 2);
        assert_eq!(qp.q(1, 2), Scalar::var("q"));
        assert!(qp.a(1, 2, 1).is_zero() && qp.b(1, 2).is_zero());

        let w = get("weyl").unwrap();
        assert_eq!(w.n(), 2);
        assert!(w.q(1, 2).is_one());
        assert_eq!(w.b(1, 2), Scalar::from_int(-1));

        let c = get("cyclic-quantum-weyl-3").unwrap();
        assert_eq!(c.n(), 3);
        let s = Scalar::var("s");
        // stored ascending as x y = s^2 y x + alpha
        assert_eq!(c.q(1, 2), (&s * &s).recip().unwrap());
        assert_eq!(c.b(1, 2), -Scalar::var("alpha").checked_div(&(&s * &s)).unwrap());
    }

    #[test]
    fn families_and_aliases() {
        assert_eq!(get("weyl-3").unwrap().n(), 6);
        assert_eq!(get("shift-ops-2-3").unwrap().n(), 5);
        assert_eq!(get("q-heisenberg-2").unwrap().n(), 6);
        assert!(get("weyl-2").unwrap().same_data(&families::weyl(2)));
        assert!(get("q-heisenberg-1").unwrap().same_data(&families::q_heisenberg(1)));
        assert!(get("shift-ops-1-1").unwrap().same_data(&families::shift_ops(1, 1)));
        assert!(get("difference-ops-1-1").unwrap().same_data(&families::difference_ops(1, 1)));
        assert!(get("multiplicative-weyl-3").unwrap().same_data(&families::multiplicative_weyl(3)));
        assert!(matches!(get("nope"), Err(CatalogError::UnknownName(n)) if n == "nope"));
        assert!(get("weyl-0").is_err());
        assert!(get("weyl-99").is_err());
    }
}
