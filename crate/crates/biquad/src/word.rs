//! Word input such as `x2^2 x1`.

use biquad_core::freealg::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("malformed token `{0}`, expected x<i> or x<i>^<k>")]
    Malformed(String),
    #[error("generator x{index} out of range 1..={n}")]
    OutOfRange { index: usize, n: usize },
}

// Bounds the rewriting work a single command line can request.
const MAX_POWER: usize = 64;

/// Parses whitespace-separated generator powers into a single word.
pub fn parse_word(text: &str, n: usize) -> Result<Word, WordError> {
    let mut letters = Vec::new();
    for tok in text.split_whitespace() {
        let bad = || WordError::Malformed(tok.to_string());
        let body = tok.strip_prefix('x').ok_or_else(bad)?;
        let (idx, pow) = match body.split_once('^') {
            Some((i, k)) => (i, k),
            None => (body, "1"),
        };
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        if !digits(idx) || !digits(pow) {
            return Err(bad());
        }
        let index: usize = idx.parse().map_err(|_| bad())?;
        let k: usize = pow.parse().map_err(|_| bad())?;
        if index == 0 || index > n {
            return Err(WordError::OutOfRange { index, n });
        }
        if k > MAX_POWER {
            return Err(bad());
        }
        letters.extend(std::iter::repeat_n(index, k));
    }
    Ok(Word::new(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(parse_word("x2^2 x1", 2).unwrap().letters(), [2, 2, 1]);
        assert_eq!(parse_word("x1", 3).unwrap().letters(), [1]);
        assert_eq!(parse_word("x5", 3), Err(WordError::OutOfRange { index: 5, n: 3 }));
        assert!(parse_word("", 2).unwrap().is_empty());
        for bad in ["y1", "x", "x1^", "x^2", "x1^-1", "x1 ^2", "x1x2"] {
            assert!(matches!(parse_word(bad, 3), Err(WordError::Malformed(_))), "{bad}");
        }
    }
}
