//! Readers for bibliographic libraries: JSON lines and a BibTeX subset.

use std::io::BufRead;
use std::path::Path;

use super::{BiblioRecord, RuleError};

/// One JSON object per line; blank lines are skipped.
pub fn read_jsonl_records<R: BufRead>(reader: R, origin: &str) -> Result<Vec<BiblioRecord>, RuleError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| RuleError::Io { path: origin.into(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: BiblioRecord = serde_json::from_str(&line).map_err(|e| RuleError::Parse {
            path: origin.into(),
            line: i + 1,
            message: e.to_string(),
        })?;
        record.validate()?;
        out.push(record);
    }
    Ok(out)
}

/// Reads `@type{key, field = {value}, field = "value", year = 2009}` entries.
/// Authors are split on `and`; `Last, First` is rewritten to `First Last`.
/// `@comment`, `@string` and `@preamble` blocks are skipped.
pub fn read_bibtex(text: &str, origin: &str) -> Result<Vec<BiblioRecord>, RuleError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, origin };
    let mut out = Vec::new();
    while let Some(at) = text[p.pos..].find('@') {
        p.pos += at + 1;
        let kind = p.ident().to_ascii_lowercase();
        p.skip_ws();
        let close = match p.peek() {
            Some(b'{') => b'}',
            Some(b'(') => b')',
            _ => return Err(p.error("expected '{' after entry type")),
        };
        p.pos += 1;
        if matches!(kind.as_str(), "comment" | "string" | "preamble") {
            p.skip_balanced(close)?;
            continue;
        }
        p.skip_ws();
        let key = p.until(b',').trim().to_string();
        if key.is_empty() {
            return Err(p.error("entry without a citation key"));
        }
        p.pos += 1;
        let mut record = BiblioRecord { record_id: key, title: String::new(), authors: Vec::new(), venue: String::new(), year: 0 };
        loop {
            p.skip_ws();
            match p.peek() {
                Some(c) if c == close => {
                    p.pos += 1;
                    break;
                }
                None => return Err(p.error("unterminated entry")),
                _ => {}
            }
            let field = p.ident().to_ascii_lowercase();
            if field.is_empty() {
                return Err(p.error("expected a field name"));
            }
            p.skip_ws();
            if p.peek() != Some(b'=') {
                return Err(p.error(&format!("expected '=' after {field}")));
            }
            p.pos += 1;
            p.skip_ws();
            let value = collapse(&p.value()?);
            match field.as_str() {
                "title" => record.title = value,
                "author" => record.authors = split_authors(&value),
                "journal" | "booktitle" => record.venue = value,
                "year" => {
                    record.year = value.parse().map_err(|_| p.error(&format!("bad year {value:?}")))?;
                }
                _ => {}
            }
            p.skip_ws();
            if p.peek() == Some(b',') {
                p.pos += 1;
            }
        }
        record.validate()?;
        out.push(record);
    }
    Ok(out)
}

/// Dispatches on extension: `.bib` is BibTeX, anything else JSON lines.
pub fn read_records_file(path: &Path) -> Result<Vec<BiblioRecord>, RuleError> {
    let origin = path.display().to_string();
    let io = |source| RuleError::Io { path: origin.clone(), source };
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("bib")) {
        read_bibtex(&std::fs::read_to_string(path).map_err(io)?, &origin)
    } else {
        let file = std::fs::File::open(path).map_err(io)?;
        read_jsonl_records(std::io::BufReader::new(file), &origin)
    }
}

fn split_authors(value: &str) -> Vec<String> {
    value
        .split(" and ")
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(|a| match a.split_once(',') {
            Some((last, first)) => format!("{} {}", first.trim(), last.trim()),
            None => a.to_string(),
        })
        .collect()
}

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    origin: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn line(&self) -> usize {
        self.src[..self.pos.min(self.src.len())].iter().filter(|&&b| b == b'\n').count() + 1
    }

    fn error(&self, message: &str) -> RuleError {
        RuleError::Parse { path: self.origin.into(), line: self.line(), message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn until(&mut self, stop: u8) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|b| b != stop) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    /// Consumes up to and including the unmatched `close`.
    fn skip_balanced(&mut self, close: u8) -> Result<(), RuleError> {
        let open = if close == b'}' { b'{' } else { b'(' };
        let mut depth = 1;
        while let Some(b) = self.peek() {
            self.pos += 1;
            if b == open {
                depth += 1;
            } else if b == close {
                depth -= 1;
                if depth == 0 {
                    return Ok(());
                }
            }
        }
        Err(self.error("unbalanced block"))
    }

    fn value(&mut self) -> Result<String, RuleError> {
        match self.peek() {
            Some(b'{') => {
                self.pos += 1;
                let start = self.pos;
                self.skip_balanced(b'}')?;
                let inner = String::from_utf8_lossy(&self.src[start..self.pos - 1]);
                Ok(inner.replace(['{', '}'], ""))
            }
            Some(b'"') => {
                self.pos += 1;
                let start = self.pos;
                let mut depth = 0;
                loop {
                    match self.peek() {
                        None => return Err(self.error("unterminated string")),
                        Some(b'{') => depth += 1,
                        Some(b'}') => depth -= 1,
                        Some(b'"') if depth == 0 => break,
                        _ => {}
                    }
                    self.pos += 1;
                }
                let inner = String::from_utf8_lossy(&self.src[start..self.pos]).replace(['{', '}'], "");
                self.pos += 1;
                Ok(inner)
            }
            Some(b) if b.is_ascii_alphanumeric() => Ok(self.ident()),
            _ => Err(self.error("expected a field value")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIB: &str = r#"
@comment{ ignored {nested} }
@inproceedings{lee2009,
  author    = {Lee, Ann and Raj Kumar},
  title     = {Grid {Storage} at
               scale},
  booktitle = "Proc. ICID",
  year      = 2009
}
@article(mei10, author = "Mei Wong", title = "Opera", journal = {JDS}, year = {2010},)
"#;

    #[test]
    fn parses_bibtex_subset() {
        let recs = read_bibtex(BIB, "t.bib").unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].record_id, "lee2009");
        assert_eq!(recs[0].authors, vec!["Ann Lee", "Raj Kumar"]);
        assert_eq!(recs[0].title, "Grid Storage at scale");
        assert_eq!(recs[0].venue, "Proc. ICID");
        assert_eq!(recs[0].year, 2009);
        assert_eq!(recs[1].record_id, "mei10");
        assert_eq!(recs[1].authors, vec!["Mei Wong"]);
        assert_eq!(recs[1].venue, "JDS");
        assert_eq!(recs[1].year, 2010);
    }

    #[test]
    fn bibtex_errors_carry_line() {
        let err = read_bibtex("\n\n@article{k, title = }", "x.bib").unwrap_err();
        assert!(err.to_string().starts_with("x.bib:3:"), "{err}");
        assert!(read_bibtex("@article{k, title = {x}}", "x.bib").is_err(), "no authors");
    }

    #[test]
    fn jsonl_records() {
        let input = "{\"id\":\"r1\",\"title\":\"t\",\"authors\":[\"A\",\"B\"],\"venue\":\"v\",\"year\":2001}\n\n{\"record_id\":\"r2\",\"authors\":[\"C\"]}\n";
        let recs = read_jsonl_records(input.as_bytes(), "m").unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].record_id, "r2");
        let err = read_jsonl_records("{}\n".as_bytes(), "m").unwrap_err();
        assert!(err.to_string().starts_with("m:1:"), "{err}");
    }
}
