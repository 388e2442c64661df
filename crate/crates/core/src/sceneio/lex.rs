use std::str::FromStr;

use super::{FormatError, Pos};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub quoted: bool,
    pub pos: Pos,
}

/// Maps invalid UTF-8 to a parse error at the first bad byte.
pub(crate) fn decode(bytes: &[u8]) -> Result<&str, FormatError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let good = &bytes[..e.valid_up_to()];
        let line = good.iter().filter(|&&b| b == b'\n').count() + 1;
        let start = good.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        let column = std::str::from_utf8(&good[start..]).map_or(1, |s| s.chars().count() + 1);
        FormatError::parse(Pos { line, column }, "UTF-8 text")
    })
}

/// Splits one line into whitespace-separated tokens; `#` outside quotes ends it.
pub(crate) fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token<'_>>, FormatError> {
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    let mut col = 0usize;
    while let Some(&(i, c)) = chars.peek() {
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        let start_col = col + 1;
        if c == '"' {
            chars.next();
            col += 1;
            let body_start = i + 1;
            let mut end = None;
            for (j, d) in chars.by_ref() {
                col += 1;
                if d == '"' {
                    end = Some(j);
                    break;
                }
            }
            let Some(end) = end else {
                return Err(FormatError::parse(Pos { line: lineno, column: start_col }, "closing '\"'"));
            };
            tokens.push(Token { text: &line[body_start..end], quoted: true, pos: Pos { line: lineno, column: start_col } });
            continue;
        }
        let mut end = line.len();
        while let Some(&(j, d)) = chars.peek() {
            if d.is_whitespace() || d == '#' {
                end = j;
                break;
            }
            if d == '"' {
                return Err(FormatError::parse(Pos { line: lineno, column: col + 1 }, "whitespace before '\"'"));
            }
            chars.next();
            col += 1;
        }
        tokens.push(Token { text: &line[i..end], quoted: false, pos: Pos { line: lineno, column: start_col } });
    }
    Ok(tokens)
}

pub(crate) fn finite(text: &str, pos: Pos) -> Result<f64, FormatError> {
    let looks_numeric = text.chars().all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
    match f64::from_str(text) {
        Ok(x) if looks_numeric && x.is_finite() => Ok(x),
        _ => Err(FormatError::parse(pos, "a finite number")),
    }
}

/// Comma-separated list of exactly `N` numbers.
pub(crate) fn numbers<const N: usize>(text: &str, pos: Pos) -> Result<[f64; N], FormatError> {
    let mut out = [0.0; N];
    let mut parts = text.split(',');
    let mut offset = 0;
    for (k, slot) in out.iter_mut().enumerate() {
        let Some(p) = parts.next() else {
            return Err(FormatError::parse(pos, format!("{N} comma-separated numbers, found {k}")));
        };
        *slot = finite(p, Pos { line: pos.line, column: pos.column + offset })?;
        offset += p.chars().count() + 1;
    }
    if parts.next().is_some() {
        return Err(FormatError::parse(pos, format!("{N} comma-separated numbers")));
    }
    Ok(out)
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_and_quotes() {
        let t = tokenize(r#"node Area "Left Foot" pos=1,2,3 # tail"#, 4).unwrap();
        let got: Vec<_> = t.iter().map(|t| (t.text, t.quoted, t.pos.column)).collect();
        assert_eq!(got, vec![("node", false, 1), ("Area", false, 6), ("Left Foot", true, 11), ("pos=1,2,3", false, 23)]);
    }

    #[test]
    fn unterminated_quote() {
        let e = tokenize(r#"node Area "abc"#, 2).unwrap_err();
        assert_eq!(e.pos(), Pos { line: 2, column: 11 });
    }

    #[test]
    fn numbers_reject_specials() {
        let p = Pos { line: 1, column: 1 };
        assert!(finite("inf", p).is_err());
        assert!(finite("NaN", p).is_err());
        assert!(finite("1e999", p).is_err());
        assert_eq!(finite("-2.5e-1", p).unwrap(), -0.25);
        assert_eq!(numbers::<3>("1,2,3", p).unwrap(), [1.0, 2.0, 3.0]);
        assert_eq!(numbers::<3>("1,x,3", p).unwrap_err().pos().column, 3);
        assert!(numbers::<3>("1,2", p).is_err());
        assert!(numbers::<3>("1,2,3,4", p).is_err());
    }

    #[test]
    fn bad_utf8_position() {
        let e = decode(b"ok\nab\xff").unwrap_err();
        assert_eq!(e.pos(), Pos { line: 2, column: 3 });
    }
}
