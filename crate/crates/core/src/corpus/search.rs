use crate::text::{tokenize, tokenize_spans};

use super::{Corpus, CorpusError, Snippet};

/// Width of a snippet summary, in characters.
pub const SUMMARY_WIDTH: usize = 160;

/// One conjunct of a query: a quoted phrase or a bare term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryClause {
    pub terms: Vec<String>,
}

/// Splits a query into quoted phrases and bare terms. An unterminated quote
/// runs to the end of the query. Clauses without tokens are dropped.
pub fn parse_query(query: &str) -> Vec<QueryClause> {
    let mut clauses = Vec::new();
    for (i, segment) in query.split('"').enumerate() {
        if i % 2 == 1 {
            let terms = tokenize(segment);
            if !terms.is_empty() {
                clauses.push(QueryClause { terms });
            }
        } else {
            clauses.extend(tokenize(segment).into_iter().map(|t| QueryClause { terms: vec![t] }));
        }
    }
    clauses
}

impl Corpus {
    /// Documents matching every clause, with the summed occurrence count as
    /// score. Ordered by score descending, then doc id ascending.
    fn ranked_matches(&self, clauses: &[QueryClause]) -> Vec<(u32, u32)> {
        let Some((first, rest)) = clauses.split_first() else {
            return Vec::new();
        };
        let mut acc = self.phrase_matches(&first.terms);
        for clause in rest {
            if acc.is_empty() {
                break;
            }
            let other = self.phrase_matches(&clause.terms);
            acc.retain_mut(|(doc, score)| match other.binary_search_by_key(doc, |&(d, _)| d) {
                Ok(k) => {
                    *score += other[k].1;
                    true
                }
                Err(_) => false,
            });
        }
        acc.sort_by(|(da, sa), (db, sb)| {
            sb.cmp(sa)
                .then_with(|| self.documents[*da as usize].doc_id.cmp(&self.documents[*db as usize].doc_id))
        });
        acc
    }

    /// Number of documents matching the conjunctive query.
    pub fn query_hits(&self, query: &str) -> u64 {
        let clauses = parse_query(query);
        if clauses.is_empty() {
            return 0;
        }
        self.ranked_matches(&clauses).len() as u64
    }

    pub fn search(&self, query: &str, max_results: usize) -> Result<Vec<Snippet>, CorpusError> {
        if max_results == 0 {
            return Err(CorpusError::InvalidQuery("max_results must be at least 1".into()));
        }
        let clauses = parse_query(query);
        Ok(self
            .ranked_matches(&clauses)
            .into_iter()
            .take(max_results)
            .enumerate()
            .map(|(i, (doc, _))| {
                let d = &self.documents[doc as usize];
                Snippet {
                    doc_id: d.doc_id.clone(),
                    query: query.to_string(),
                    rank: i + 1,
                    title: d.title.clone(),
                    summary: summary_window(&d.body, &clauses),
                    url: d.url.clone(),
                }
            })
            .collect())
    }
}

/// Whole words of `body` within a `SUMMARY_WIDTH`-character window centred on
/// the earliest clause match in the body (or the start of the body when the
/// match is only in the title).
fn summary_window(body: &str, clauses: &[QueryClause]) -> String {
    let tokens = tokenize_spans(body);
    if tokens.is_empty() {
        return String::new();
    }
    let terms: Vec<&str> = tokens.iter().map(|t| t.term.as_str()).collect();
    let first_match = clauses
        .iter()
        .filter_map(|c| {
            terms
                .windows(c.terms.len())
                .position(|w| w.iter().zip(&c.terms).all(|(a, b)| *a == b))
                .map(|i| (i, i + c.terms.len() - 1))
        })
        .min();
    let center_byte = first_match.map_or(0, |(i, j)| (tokens[i].start + tokens[j].end) / 2);

    let char_starts: Vec<usize> = body.char_indices().map(|(b, _)| b).collect();
    let total = char_starts.len();
    if total <= SUMMARY_WIDTH {
        let (s, e) = (tokens[0].start, tokens[tokens.len() - 1].end);
        return body[s..e].to_string();
    }
    let center = char_starts.partition_point(|&b| b < center_byte);
    let start_char = center.saturating_sub(SUMMARY_WIDTH / 2).min(total - SUMMARY_WIDTH);
    let end_char = start_char + SUMMARY_WIDTH;
    let lo = char_starts[start_char];
    let hi = char_starts.get(end_char).copied().unwrap_or(body.len());

    let inside: Vec<_> = tokens.iter().filter(|t| t.start >= lo && t.end <= hi).collect();
    match (inside.first(), inside.last()) {
        (Some(a), Some(b)) => body[a.start..b.end].to_string(),
        _ => String::new(),
    }
}
