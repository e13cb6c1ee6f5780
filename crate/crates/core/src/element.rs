//! Textual inputs: words as `xxyy` or compositions as `(2,1,2)`, and the
//! element forms `(1-tau)(W)` and `partial(n)(W)`.

use crate::error::{Error, Result};
use crate::operators::{one_minus_tau, partial};
use crate::poly::Poly;
use crate::word::{word_of_composition, Word};

/// Parses a word given either as letters or as a composition.
pub fn parse_word(s: &str) -> Result<Word> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let ks = inner
            .split(',')
            .map(|k| {
                k.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid composition `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        return word_of_composition(&ks);
    }
    s.parse()
}

/// Splits `head(arg)rest` into `(arg, rest)`.
fn parenthesized<'a>(s: &'a str, head: &str) -> Option<(&'a str, &'a str)> {
    let rest = s.strip_prefix(head)?.trim_start().strip_prefix('(')?;
    let close = rest.find(')')?;
    Some((&rest[..close], &rest[close + 1..]))
}

fn outer_argument(s: &str) -> Result<&str> {
    let s = s.trim();
    s.strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected a parenthesized word, found `{s}`")))
}

/// Parses `WORD`, `(1-tau)(WORD)` or `partial(n)(WORD)`.
pub fn parse_element(s: &str) -> Result<Poly> {
    let s = s.trim();
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = compact.strip_prefix("(1-tau)") {
        let w = parse_word(outer_argument(rest)?)?;
        return Ok(one_minus_tau(&Poly::from(w)));
    }
    if let Some((n, rest)) = parenthesized(&compact, "partial") {
        let n: u32 = n
            .parse()
            .map_err(|_| Error::Parse(format!("invalid derivation index `{n}`")))?;
        let w = parse_word(outer_argument(rest)?)?;
        return partial(n, &Poly::from(w));
    }
    Ok(Poly::from(parse_word(&compact)?))
}
