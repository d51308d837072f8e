//! Canonical text formats shared by every artifact file.
//!
//! A matrix block is a header line `dim=<n> mod=<m>` followed by n lines of
//! n space-separated decimal residues. Files are UTF-8 with LF endings and
//! no trailing whitespace; section headers look like `[name]`. Writers emit
//! the canonical form exactly, and the parser rejects anything that would
//! not re-serialize byte-identically.

use thiserror::Error;

use crate::matrix::ModMatrix;
use crate::modular::Modulus;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, msg: impl Into<String>) -> Self {
        Self {
            line,
            msg: msg.into(),
        }
    }
}

/// Appends the canonical block for `m`.
pub fn write_matrix(out: &mut String, m: &ModMatrix) {
    let n = m.dim();
    out.push_str(&format!("dim={} mod={}\n", n, m.modulus().value()));
    for row in 0..n {
        for col in 0..n {
            if col > 0 {
                out.push(' ');
            }
            out.push_str(&m.get(row, col).to_string());
        }
        out.push('\n');
    }
}

pub fn format_matrix(m: &ModMatrix) -> String {
    let mut s = String::new();
    write_matrix(&mut s, m);
    s
}

/// Ordered key=value metadata, serialized inside a `[meta]` section.
/// Keeping the entries ordered makes parse-then-serialize the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileMeta {
    entries: Vec<(String, String)>,
}

impl FileMeta {
    pub fn new() -> Self {
        Self::default()
    }

    /// Standard header: tool version, generator name, seed.
    pub fn standard(version: &str, generator: Option<&str>, seed: Option<u64>) -> Self {
        let mut meta = Self::new();
        meta.push("version", version);
        if let Some(g) = generator {
            meta.push("generator", g);
        }
        if let Some(s) = seed {
            meta.push("seed", s.to_string());
        }
        meta
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push((key.into(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn remove(&mut self, key: &str) {
        self.entries.retain(|(k, _)| k != key);
    }

    pub fn seed(&self) -> Option<u64> {
        self.get("seed").and_then(|s| s.parse().ok())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn write(&self, out: &mut String) {
        if self.entries.is_empty() {
            return;
        }
        out.push_str("[meta]\n");
        for (k, v) in &self.entries {
            out.push_str(&format!("{k}={v}\n"));
        }
    }
}

/// Line cursor over a section file.
pub struct Cursor<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str) -> Result<Self, ParseError> {
        if text.contains('\r') {
            return Err(ParseError::new(0, "CR line endings not allowed"));
        }
        let mut lines: Vec<&str> = text.split('\n').collect();
        // a trailing newline leaves one empty tail element
        if lines.last() == Some(&"") {
            lines.pop();
        }
        Ok(Self { lines, pos: 0 })
    }

    pub fn line_no(&self) -> usize {
        self.pos + 1
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.lines.len()
    }

    pub fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    fn next_line(&mut self) -> Result<&'a str, ParseError> {
        let line = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| ParseError::new(self.line_no(), "unexpected end of file"))?;
        self.pos += 1;
        Ok(line)
    }

    /// Consumes the exact section header `[name]`.
    pub fn expect_section(&mut self, name: &str) -> Result<(), ParseError> {
        let no = self.line_no();
        let line = self.next_line()?;
        let want = format!("[{name}]");
        if line != want {
            return Err(ParseError::new(no, format!("expected {want}, got {line:?}")));
        }
        Ok(())
    }

    /// True when the next line is the given section header (not consumed).
    pub fn at_section(&self, name: &str) -> bool {
        self.peek() == Some(&format!("[{name}]")[..])
    }

    /// Parses one canonical matrix block. Entries must be strictly reduced
    /// and separated by single spaces so round-trips stay bit-exact.
    pub fn parse_matrix(&mut self) -> Result<ModMatrix, ParseError> {
        let header_no = self.line_no();
        let header = self.next_line()?;
        let (dim_part, mod_part) = header
            .split_once(' ')
            .ok_or_else(|| ParseError::new(header_no, "expected `dim=<n> mod=<m>`"))?;
        let dim: usize = dim_part
            .strip_prefix("dim=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ParseError::new(header_no, "bad dim= field"))?;
        let modulus_value: u64 = mod_part
            .strip_prefix("mod=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ParseError::new(header_no, "bad mod= field"))?;
        let modulus = Modulus::new(modulus_value)
            .map_err(|e| ParseError::new(header_no, e.to_string()))?;
        let mut entries = Vec::with_capacity(dim * dim);
        for _ in 0..dim {
            let no = self.line_no();
            let line = self.next_line()?;
            let row: Vec<u64> = line
                .split(' ')
                .map(|tok| {
                    tok.parse::<u64>()
                        .map_err(|_| ParseError::new(no, format!("bad entry {tok:?}")))
                })
                .collect::<Result<_, _>>()?;
            if row.len() != dim {
                return Err(ParseError::new(
                    no,
                    format!("expected {dim} entries, got {}", row.len()),
                ));
            }
            let canonical = row
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            if canonical != line {
                return Err(ParseError::new(no, "row is not in canonical form"));
            }
            for &v in &row {
                if v >= modulus_value {
                    return Err(ParseError::new(
                        no,
                        format!("entry {v} not reduced mod {modulus_value}"),
                    ));
                }
            }
            entries.extend(row);
        }
        ModMatrix::new(dim, modulus, entries)
            .map_err(|e| ParseError::new(header_no, e.to_string()))
    }

    /// Parses an optional `[meta]` section of key=value lines.
    pub fn parse_meta(&mut self) -> Result<FileMeta, ParseError> {
        let mut meta = FileMeta::new();
        if !self.at_section("meta") {
            return Ok(meta);
        }
        self.expect_section("meta")?;
        while let Some(line) = self.peek() {
            if line.starts_with('[') {
                break;
            }
            let no = self.line_no();
            let line = self.next_line()?;
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ParseError::new(no, "expected key=value"))?;
            meta.push(k, v);
        }
        Ok(meta)
    }

    /// Parses a `key=value` line with the given key.
    pub fn expect_key_value(&mut self, key: &str) -> Result<String, ParseError> {
        let no = self.line_no();
        let line = self.next_line()?;
        line.strip_prefix(&format!("{key}=")[..])
            .map(str::to_owned)
            .ok_or_else(|| ParseError::new(no, format!("expected {key}=..., got {line:?}")))
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(ParseError::new(self.line_no(), "trailing content"))
        }
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line_no(), msg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn matrix_roundtrip() {
        let a = ModMatrix::new(2, m(569), vec![502, 108, 3, 322]).unwrap();
        let text = format_matrix(&a);
        assert_eq!(text, "dim=2 mod=569\n502 108\n3 322\n");
        let mut cur = Cursor::new(&text).unwrap();
        let back = cur.parse_matrix().unwrap();
        cur.expect_end().unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn parser_rejects_unreduced_entries() {
        let mut cur = Cursor::new("dim=2 mod=5\n7 0\n0 1\n").unwrap();
        assert!(cur.parse_matrix().is_err());
    }

    #[test]
    fn parser_rejects_noncanonical_spacing() {
        let mut cur = Cursor::new("dim=2 mod=5\n1  0\n0 1\n").unwrap();
        assert!(cur.parse_matrix().is_err());
        let mut cur = Cursor::new("dim=2 mod=5\n1 0 \n0 1\n").unwrap();
        assert!(cur.parse_matrix().is_err());
    }

    #[test]
    fn meta_roundtrip_preserves_order() {
        let mut meta = FileMeta::standard("0.1.0", Some("xoshiro256**"), Some(42));
        meta.push("p", "541");
        let mut text = String::new();
        meta.write(&mut text);
        let mut cur = Cursor::new(&text).unwrap();
        let back = cur.parse_meta().unwrap();
        assert_eq!(back, meta);
        assert_eq!(back.seed(), Some(42));
        assert_eq!(back.get("p"), Some("541"));
    }
}
