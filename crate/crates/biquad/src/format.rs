//! The line-oriented presentation file format.
//!
//! ```text
//! algebra "NAME"
//! generators N
//! parameters p1, p2
//! orientation descending
//! q I J = EXPR
//! a I J K = EXPR
//! b I J = EXPR
//! ```
//!
//! `#` starts a comment. Ascending files are translated to descending form
//! after parsing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use biquad_core::presentation::{AlgebraPresentation, Orientation, Violation};
use biquad_core::scalar::{is_identifier, Parameter, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid presentation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
}

impl FormatError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        FormatError::Parse { line, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Algebra,
    Generators,
    Parameters,
    Orientation,
    Q(usize, usize),
    A(usize, usize, usize),
    B(usize, usize),
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_index(tok: &str, n: usize, line: usize) -> Result<usize, FormatError> {
    let v: usize = tok.parse().map_err(|_| FormatError::at(line, format!("expected an index, found `{tok}`")))?;
    if v == 0 || v > n {
        return Err(FormatError::at(line, format!("index {v} out of range 1..={n}")));
    }
    Ok(v)
}

/// Parses and validates a presentation file, returning it in descending form.
pub fn parse_presentation(text: &str) -> Result<AlgebraPresentation, FormatError> {
    let mut seen: BTreeSet<Key> = BTreeSet::new();
    let mut name: Option<String> = None;
    let mut n: Option<usize> = None;
    let mut params: Vec<(Parameter, usize)> = Vec::new();
    let mut orientation = Orientation::Descending;
    let mut entries: Vec<(Key, Scalar, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let (head, rest) = match body.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (body, ""),
        };
        let mut claim = |k: Key| {
            if seen.insert(k) {
                Ok(())
            } else {
                Err(FormatError::at(line, format!("duplicate `{}` entry", describe(k))))
            }
        };
        match head {
            "algebra" => {
                claim(Key::Algebra)?;
                let inner = rest
                    .strip_prefix('"')
                    .and_then(|r| r.strip_suffix('"'))
                    .filter(|r| !r.contains('"'))
                    .ok_or_else(|| FormatError::at(line, "algebra name must be a double-quoted string"))?;
                name = Some(inner.to_string());
            }
            "generators" => {
                claim(Key::Generators)?;
                let v: usize = rest
                    .parse()
                    .map_err(|_| FormatError::at(line, format!("expected a generator count, found `{rest}`")))?;
                if v == 0 {
                    return Err(FormatError::at(line, "at least one generator is required"));
                }
                n = Some(v);
            }
            "parameters" => {
                claim(Key::Parameters)?;
                for tok in rest.split(',').map(str::trim) {
                    if !is_identifier(tok) {
                        return Err(FormatError::at(line, format!("invalid parameter name `{tok}`")));
                    }
                    let p = Parameter::new(tok).expect("checked identifier");
                    if params.iter().any(|(q, _)| *q == p) {
                        return Err(FormatError::at(line, format!("parameter `{tok}` declared twice")));
                    }
                    params.push((p, line));
                }
            }
            "orientation" => {
                claim(Key::Orientation)?;
                orientation = match rest {
                    "descending" => Orientation::Descending,
                    "ascending" => Orientation::Ascending,
                    other => return Err(FormatError::at(line, format!("unknown orientation `{other}`"))),
                };
            }
            "q" | "a" | "b" => {
                let n = n.ok_or_else(|| FormatError::at(line, "`generators` must precede relation entries"))?;
                let (lhs, expr) = rest
                    .split_once('=')
                    .ok_or_else(|| FormatError::at(line, "expected `= EXPR`"))?;
                let idx: Vec<&str> = lhs.split_whitespace().collect();
                let arity = if head == "a" { 3 } else { 2 };
                if idx.len() != arity {
                    return Err(FormatError::at(line, format!("`{head}` takes {arity} indices")));
                }
                let i = parse_index(idx[0], n, line)?;
                let j = parse_index(idx[1], n, line)?;
                if i >= j {
                    return Err(FormatError::at(line, format!("indices must satisfy i < j, got {i} {j}")));
                }
                let key = match head {
                    "q" => Key::Q(i, j),
                    "b" => Key::B(i, j),
                    _ => Key::A(i, j, parse_index(idx[2], n, line)?),
                };
                claim(key)?;
                let value = Scalar::parse(expr.trim()).map_err(|e| FormatError::at(line, e.to_string()))?;
                if matches!(key, Key::Q(..)) && value.is_zero() {
                    return Err(FormatError::at(line, format!("q must be nonzero (q {i} {j})")));
                }
                entries.push((key, value, line));
            }
            other => return Err(FormatError::at(line, format!("unknown key `{other}`"))),
        }
    }

    let last = text.lines().count().max(1);
    let n = n.ok_or_else(|| FormatError::at(last, "missing `generators` line"))?;
    let declared: BTreeMap<&Parameter, usize> = params.iter().map(|(p, l)| (p, *l)).collect();
    for (_, v, line) in &entries {
        if let Some(p) = v.parameters().into_iter().find(|p| !declared.contains_key(p)) {
            return Err(FormatError::at(*line, format!("undeclared parameter `{p}`")));
        }
    }

    let mut pres = AlgebraPresentation::new(n).with_orientation(orientation);
    pres.name = name;
    for (p, _) in params {
        pres.add_param(p);
    }
    for (key, v, _) in entries {
        match key {
            Key::Q(i, j) => pres.set_q(i, j, v),
            Key::A(i, j, k) => pres.set_a(i, j, k, v),
            Key::B(i, j) => pres.set_b(i, j, v),
            _ => unreachable!("only relation keys are collected"),
        };
    }
    let violations = pres.validate();
    if !violations.is_empty() {
        return Err(FormatError::Validation(violations));
    }
    pres.to_descending().map_err(|_| FormatError::Validation(pres.validate()))
}

fn describe(k: Key) -> String {
    match k {
        Key::Algebra => "algebra".into(),
        Key::Generators => "generators".into(),
        Key::Parameters => "parameters".into(),
        Key::Orientation => "orientation".into(),
        Key::Q(i, j) => format!("q {i} {j}"),
        Key::A(i, j, k) => format!("a {i} {j} {k}"),
        Key::B(i, j) => format!("b {i} {j}"),
    }
}

/// Writes a presentation in the file format, in its own orientation.
pub fn emit_presentation(p: &AlgebraPresentation) -> String {
    let mut s = String::new();
    if let Some(name) = &p.name {
        let _ = writeln!(s, "algebra \"{name}\"");
    }
    let _ = writeln!(s, "generators {}", p.n());
    if !p.params().is_empty() {
        let names: Vec<&str> = p.params().iter().map(Parameter::name).collect();
        let _ = writeln!(s, "parameters {}", names.join(", "));
    }
    let _ = writeln!(s, "orientation {}", p.orientation().as_str());
    for ((i, j), v) in p.q_entries() {
        let _ = writeln!(s, "q {i} {j} = {v}");
    }
    for ((i, j, k), v) in p.a_entries() {
        let _ = writeln!(s, "a {i} {j} {k} = {v}");
    }
    for ((i, j), v) in p.b_entries() {
        let _ = writeln!(s, "b {i} {j} = {v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(text: &str) -> usize {
        match parse_presentation(text) {
            Err(FormatError::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn quantum_plane_file() {
        let p = parse_presentation("algebra \"quantum-plane\"\ngenerators 2\nparameters q\nq 1 2 = q\n").unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.params(), [Parameter::new("q").unwrap()]);
        assert_eq!(p.q(1, 2), Scalar::var("q"));
        assert_eq!(p.name.as_deref(), Some("quantum-plane"));
    }

    #[test]
    fn duplicates_are_rejected() {
        assert_eq!(line_of("generators 2\nparameters q\nq 1 2 = q\nq 1 2 = 2\n"), 4);
        assert_eq!(line_of("generators 2\ngenerators 2\n"), 2);
    }

    #[test]
    fn ascending_sl2_is_translated() {
        let text = "algebra \"u-sl2\"\ngenerators 3\norientation ascending\na 1 2 3 = 1\na 1 3 1 = -2\na 2 3 2 = 2\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.orientation(), Orientation::Descending);
        assert_eq!(p.a(1, 2, 3), Scalar::from_int(-1));
        assert_eq!(p.a(1, 3, 1), Scalar::from_int(2));
    }

    #[test]
    fn diagnostics_carry_lines() {
        assert_eq!(line_of("generators 2\n# note\nfoo 1\n"), 3);
        assert_eq!(line_of("generators 2\nq 1 3 = 2\n"), 2);
        assert_eq!(line_of("generators 2\nq 2 1 = 2\n"), 2);
        assert_eq!(line_of("generators 2\nb 1 2 = t\n"), 2);
        assert_eq!(line_of("generators 2\nq 1 2 = 0\n"), 2);
        assert_eq!(line_of("q 1 2 = 2\ngenerators 2\n"), 1);
        assert_eq!(line_of("algebra x\ngenerators 2\n"), 1);
        assert_eq!(line_of("algebra \"x\"\n"), 1);
        assert_eq!(line_of("generators 2\nq 1 2 = (q\nparameters q\n"), 2);
    }

    #[test]
    fn comments_and_quoted_hashes() {
        let p = parse_presentation("algebra \"a#b\" # trailing\ngenerators 1 # one\n").unwrap();
        assert_eq!(p.name.as_deref(), Some("a#b"));
    }

    #[test]
    fn emit_round_trip() {
        let text = "algebra \"t\"\ngenerators 3\nparameters s, t\nq 1 2 = s^2\na 1 3 2 = 1/s\nb 2 3 = (t - 1)/(s + 1)\n";
        let p = parse_presentation(text).unwrap();
        let back = parse_presentation(&emit_presentation(&p)).unwrap();
        assert!(back.same_data(&p));
    }
}
