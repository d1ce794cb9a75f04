//! The `bwd...duals...` string format.
//!
//! `bwd1v1v1p1duals1v1x2` reads as: matrices `[[1]]`, `[[1],[1]]`
//! (separated by `v`, rows by `p`, entries by `x`), then one dual group per
//! even depth with 1-based entries.

use super::{Bigraph, BigraphPair, BigraphWithDuals, DualData, InclusionMatrix};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { position: self.pos, message: message.into() }
    }

    fn expect_literal(&mut self, lit: &str) -> Result<()> {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.error(format!("expected `{lit}`")))
        }
    }

    fn digit(&mut self) -> Result<u8> {
        match self.peek() {
            Some(c @ b'0'..=b'9') => {
                self.pos += 1;
                Ok(c - b'0')
            }
            _ => Err(self.error("expected a digit")),
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while let Some(b'0'..=b'9') = self.peek() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| Error::Syntax { position: start, message: "number too large".into() })
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

/// Parses one bigraph with dual data.
pub fn parse_bigraph(text: &str) -> Result<BigraphWithDuals> {
    let mut cur = Cursor { src: text.as_bytes(), pos: 0 };
    cur.expect_literal("bwd")?;

    let mut raw: Vec<(usize, Vec<Vec<u8>>)> = Vec::new();
    if cur.peek() != Some(b'd') {
        loop {
            let start = cur.pos;
            let mut rows = vec![vec![cur.digit()?]];
            loop {
                if cur.eat(b'x') {
                    rows.last_mut().unwrap().push(cur.digit()?);
                } else if cur.eat(b'p') {
                    rows.push(vec![cur.digit()?]);
                } else {
                    break;
                }
            }
            raw.push((start, rows));
            if !cur.eat(b'v') {
                break;
            }
        }
    }
    cur.expect_literal("duals")?;

    let mut groups = Vec::new();
    loop {
        let mut group = Vec::new();
        loop {
            let at = cur.pos;
            let n = cur.number()?;
            if n == 0 {
                return Err(Error::Syntax { position: at, message: "dual entries are 1-based".into() });
            }
            group.push(n - 1);
            if !cur.eat(b'x') {
                break;
            }
        }
        groups.push(group);
        if !cur.eat(b'v') {
            break;
        }
    }
    if cur.pos != text.len() {
        return Err(cur.error("unexpected trailing input"));
    }

    let mut matrices = Vec::with_capacity(raw.len());
    for (d, (_, rows)) in raw.into_iter().enumerate() {
        let m = InclusionMatrix::new(rows)
            .map_err(|e| Error::Structure(format!("depth {}: {}", d + 1, strip(e))))?;
        matrices.push(m);
    }
    let graph = Bigraph::new(matrices)?;
    BigraphWithDuals::new(graph, DualData::new(groups)?)
}

fn strip(e: Error) -> String {
    match e {
        Error::Structure(m) => m,
        other => other.to_string(),
    }
}

pub fn serialize_bigraph(g: &BigraphWithDuals) -> String {
    let mut out = String::from("bwd");
    for (d, m) in g.graph().matrices().iter().enumerate() {
        if d > 0 {
            out.push('v');
        }
        for (i, row) in m.rows().iter().enumerate() {
            if i > 0 {
                out.push('p');
            }
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    out.push('x');
                }
                out.push((b'0' + e) as char);
            }
        }
    }
    out.push_str("duals");
    for (g_idx, inv) in g.duals().groups().iter().enumerate() {
        if g_idx > 0 {
            out.push('v');
        }
        for (i, &j) in inv.iter().enumerate() {
            if i > 0 {
                out.push('x');
            }
            out.push_str(&(j + 1).to_string());
        }
    }
    out
}

/// Parses two codec strings separated by whitespace and/or a comma,
/// optionally wrapped in parentheses.
pub fn parse_pair(text: &str) -> Result<BigraphPair> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(trimmed);
    let parts: Vec<&str> =
        inner.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    if parts.len() != 2 {
        return Err(Error::Syntax {
            position: 0,
            message: format!("expected two graphs, found {}", parts.len()),
        });
    }
    let first = parse_bigraph(parts[0])?;
    let second = parse_bigraph(parts[1]).map_err(|e| match e {
        Error::Syntax { position, message } => Error::Syntax {
            position: position + (parts[1].as_ptr() as usize - text.as_ptr() as usize),
            message,
        },
        other => other,
    })?;
    BigraphPair::new(first, second)
}

pub fn serialize_pair(p: &BigraphPair) -> String {
    format!("{} {}", serialize_bigraph(p.first()), serialize_bigraph(p.second()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haagerup_shape() {
        let g = parse_bigraph("bwd1v1v1v1p1v1x0p0x1v1x0p0x1duals1v1v1x2v2x1").unwrap();
        assert_eq!(g.depth(), 6);
        assert_eq!(g.graph().vertex_counts(), vec![1, 1, 1, 1, 2, 2, 2]);
        assert_eq!(g.duals().at(6), &[1, 0]);
        assert_eq!(g.supertransitivity(), 3);
    }

    #[test]
    fn single_edge() {
        let g = parse_bigraph("bwd1duals1").unwrap();
        assert_eq!(g.depth(), 1);
        assert_eq!(serialize_bigraph(&g), "bwd1duals1");
    }

    #[test]
    fn syntax_positions() {
        match parse_bigraph("bwdXduals1") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("{other:?}"),
        }
        match parse_bigraph("bwd1v1duals1x") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 13),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_bigraph("bwd1duals1 "), Err(Error::Syntax { position: 10, .. })));
        assert!(matches!(parse_bigraph("bwd1duals0"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn structural_errors() {
        // wrong number of dual groups
        assert!(matches!(parse_bigraph("bwd1v1p1duals1x2v1"), Err(Error::Structure(_))));
        assert!(matches!(parse_bigraph("bwd1v0p1duals1v1x2"), Err(Error::Structure(_))));
        assert!(matches!(parse_bigraph("bwd1x1duals1"), Err(Error::Structure(_))));
        assert!(matches!(parse_bigraph("bwd1v1p1duals1v2x2"), Err(Error::Structure(_))));
        assert!(matches!(parse_bigraph("bwd1duals2"), Err(Error::Structure(_))));
    }

    #[test]
    fn pair_forms() {
        let a = parse_pair("(bwd1duals1, bwd1duals1)").unwrap();
        let b = parse_pair("bwd1duals1 bwd1duals1").unwrap();
        assert_eq!(a, b);
        assert_eq!(serialize_pair(&a), "bwd1duals1 bwd1duals1");
    }
}
