//! Textual grammar for morphism words.
//!
//! A word is written exactly the way normal forms print: an optional
//! target idempotent, a sequence of `U{..}` and `D{..}` factors, and a
//! mandatory source idempotent, composed right to left:
//!
//! ```text
//! e[4] U{0} D{1,0} e[16]
//! ```
//!
//! means: start at vertex 16, reflect down along `{1,0}`, then reflect
//! up along `{0}`, landing at vertex 4. The leading idempotent, when
//! present, is checked against the computed endpoint.

use thiserror::Error;

use crate::admissible::{AdmissibleSet, ParseSetError};
use crate::algebra::{Morphism, RawWord, RewriteError, Rewriter};
use crate::quiver::GeneratorKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("malformed word near `{0}`")]
    Syntax(String),
    #[error("word has no source idempotent")]
    MissingSource,
    #[error(transparent)]
    Set(#[from] ParseSetError),
    #[error("word ends at vertex {actual} but is written with target e[{stated}]")]
    TargetMismatch { stated: u64, actual: u64 },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// A parsed word: the factor sequence plus the target the text claimed,
/// if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedWord {
    pub raw: RawWord,
    pub stated_target: Option<u64>,
}

fn parse_vertex(tok: &str) -> Result<u64, ExprError> {
    tok.strip_prefix("e[")
        .and_then(|x| x.strip_suffix(']'))
        .and_then(|x| x.trim().parse().ok())
        .ok_or_else(|| ExprError::Syntax(tok.to_string()))
}

/// Parse a word expression. Factors are applied right to left, so the
/// rightmost `e[w]` is the source.
pub fn parse_word(input: &str) -> Result<ParsedWord, ExprError> {
    let tokens: Vec<&str> = input.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(ExprError::MissingSource);
    }
    let source = parse_vertex(tokens[tokens.len() - 1])?;
    let mut factors = Vec::new();
    let mut stated_target = None;
    for (n, tok) in tokens[..tokens.len() - 1].iter().enumerate() {
        if let Some(body) = tok.strip_prefix('U').filter(|b| b.starts_with('{')) {
            factors.push((GeneratorKind::Up, AdmissibleSet::parse(body)?));
        } else if let Some(body) = tok.strip_prefix('D').filter(|b| b.starts_with('{')) {
            factors.push((GeneratorKind::Down, AdmissibleSet::parse(body)?));
        } else if n == 0 && tok.starts_with("e[") {
            stated_target = Some(parse_vertex(tok)?);
        } else {
            return Err(ExprError::Syntax(tok.to_string()));
        }
    }
    // The text reads left to right with the last factor applied first.
    factors.reverse();
    Ok(ParsedWord {
        raw: RawWord { source, factors },
        stated_target,
    })
}

/// Normalize a parsed word, verifying the stated target if present.
pub fn eval_word(rw: &mut Rewriter, word: &ParsedWord) -> Result<Morphism, ExprError> {
    let m = rw.normalize(&word.raw)?;
    if let Some(stated) = word.stated_target {
        // A vanished word settles at its source; only nonzero results
        // carry a target worth checking.
        if !m.is_zero() && stated != m.target {
            return Err(ExprError::TargetMismatch {
                stated,
                actual: m.target,
            });
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Prime;

    #[test]
    fn parses_the_reference_word() {
        let w = parse_word("e[4] U{0} D{1,0} e[16]").unwrap();
        assert_eq!(w.stated_target, Some(4));
        assert_eq!(w.raw.source, 16);
        assert_eq!(w.raw.factors.len(), 2);
        assert_eq!(w.raw.factors[0].0, GeneratorKind::Down);
        assert_eq!(w.raw.factors[0].1, AdmissibleSet::parse("{1,0}").unwrap());
        assert_eq!(w.raw.factors[1].0, GeneratorKind::Up);
    }

    #[test]
    fn idempotents_and_errors() {
        let w = parse_word("e[7]").unwrap();
        assert_eq!(w.raw.source, 7);
        assert!(w.raw.factors.is_empty());
        assert!(parse_word("").is_err());
        assert!(parse_word("U{0} D{1}").is_err());
        assert!(parse_word("e[4] X{0} e[16]").is_err());
        assert!(parse_word("e[4] e[5] U{0} e[16]").is_err());
    }

    #[test]
    fn eval_checks_the_stated_target() {
        let mut rw = Rewriter::new(Prime::new(3));
        let ok = parse_word("e[4] U{0} D{1,0} e[16]").unwrap();
        let m = eval_word(&mut rw, &ok).unwrap();
        assert_eq!(m.target, 4);
        let bad = parse_word("e[5] U{0} D{1,0} e[16]").unwrap();
        assert_eq!(
            eval_word(&mut rw, &bad).unwrap_err(),
            ExprError::TargetMismatch { stated: 5, actual: 4 }
        );
    }

    #[test]
    fn display_round_trips_through_the_parser() {
        use crate::algebra::hom_basis;
        let p = Prime::new(3);
        let mut rw = Rewriter::new(p);
        for v in 1..80u64 {
            for w in 1..80u64 {
                for word in hom_basis(v, w, p) {
                    let parsed = parse_word(&word.display(p)).unwrap();
                    let m = eval_word(&mut rw, &parsed).unwrap();
                    assert_eq!(m.terms.len(), 1, "{}", word.display(p));
                    let (only, coeff) = m.terms.iter().next().unwrap();
                    assert_eq!(only, &word, "round trip of {}", word.display(p));
                    assert_eq!(coeff.value(), 1);
                }
            }
        }
    }
}
