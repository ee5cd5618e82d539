//! Immutable document corpus with a positional inverted index.
//!
//! The corpus answers exact-phrase singleton and doubleton hit counts and
//! produces ranked snippets, standing in for a web search engine. Because
//! every count comes from one index, a doubleton can never exceed either
//! of its singletons.

mod io;
mod provider;
mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{tokenize, tokenize_spans};

pub use io::{read_dir, read_jsonl, read_jsonl_file, CorpusManifest};
pub use provider::SearchProvider;
pub use search::{parse_query, QueryClause, SUMMARY_WIDTH};

/// Default cap on the number of snippets returned for one query.
pub const DEFAULT_SNIPPET_CAP: usize = 600;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("duplicate document id: {0}")]
    DuplicateDocId(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("probability undefined on an empty corpus")]
    EmptyCorpus,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("corrupt corpus index: {0}")]
    CorruptIndex(String),
}

/// One indexed page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    #[serde(rename = "id", alias = "doc_id")]
    pub doc_id: String,
    #[serde(default)]
    pub url: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub body: String,
    #[serde(default)]
    pub source_tag: String,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, url: impl Into<String>, title: impl Into<String>, body: impl Into<String>) -> Self {
        Document {
            doc_id: doc_id.into(),
            url: url.into(),
            title: title.into(),
            body: body.into(),
            source_tag: String::new(),
        }
    }

    /// Title and body tokens. Body positions start one past the title so a
    /// phrase never spans the two fields.
    fn positioned_terms(&self) -> Vec<(String, u32)> {
        let title = tokenize(&self.title);
        let offset = if title.is_empty() { 0 } else { title.len() as u32 + 1 };
        let mut out: Vec<(String, u32)> = title.into_iter().zip(0u32..).collect();
        out.extend(
            tokenize_spans(&self.body)
                .into_iter()
                .zip(offset..)
                .map(|(t, p)| (t.term, p)),
        );
        out
    }
}

/// A search result unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snippet {
    pub doc_id: String,
    pub query: String,
    pub rank: usize,
    pub title: String,
    pub summary: String,
    pub url: String,
}

/// Singleton and doubleton counts for a pair of phrases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitCounts {
    pub singleton_a: u64,
    pub singleton_b: u64,
    pub doubleton: u64,
}

impl HitCounts {
    pub fn new(singleton_a: u64, singleton_b: u64, doubleton: u64) -> Self {
        HitCounts { singleton_a, singleton_b, doubleton }
    }

    /// Doubleton bounded by both singletons.
    pub fn is_consistent(&self) -> bool {
        self.doubleton <= self.singleton_a.min(self.singleton_b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc: u32,
    pub positions: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCorpus")]
pub struct Corpus {
    documents: Vec<Document>,
    index: BTreeMap<String, Vec<Posting>>,
    #[serde(skip)]
    by_id: BTreeMap<String, u32>,
}

#[derive(Deserialize)]
struct RawCorpus {
    documents: Vec<Document>,
    index: BTreeMap<String, Vec<Posting>>,
}

impl TryFrom<RawCorpus> for Corpus {
    type Error = CorpusError;

    fn try_from(raw: RawCorpus) -> Result<Self, Self::Error> {
        let rebuilt = Corpus::ingest(raw.documents)?;
        if rebuilt.index != raw.index {
            return Err(CorpusError::CorruptIndex(
                "stored index does not match the documents".into(),
            ));
        }
        Ok(rebuilt)
    }
}

impl Corpus {
    /// Builds the corpus and its index. Fails on the first repeated id.
    pub fn ingest(documents: Vec<Document>) -> Result<Corpus, CorpusError> {
        let mut by_id = BTreeMap::new();
        for (i, doc) in documents.iter().enumerate() {
            if by_id.insert(doc.doc_id.clone(), i as u32).is_some() {
                return Err(CorpusError::DuplicateDocId(doc.doc_id.clone()));
            }
        }
        let mut index: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
        for (i, doc) in documents.iter().enumerate() {
            let i = i as u32;
            for (term, pos) in doc.positioned_terms() {
                let list = index.entry(term).or_default();
                match list.last_mut() {
                    Some(p) if p.doc == i => p.positions.push(pos),
                    _ => list.push(Posting { doc: i, positions: vec![pos] }),
                }
            }
        }
        Ok(Corpus { documents, index, by_id })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn document(&self, doc_id: &str) -> Option<&Document> {
        self.by_id.get(doc_id).map(|&i| &self.documents[i as usize])
    }

    /// Number of distinct indexed terms.
    pub fn vocabulary_size(&self) -> usize {
        self.index.len()
    }

    /// Total number of indexed tokens across all documents.
    pub fn token_count(&self) -> usize {
        self.index
            .values()
            .flat_map(|list| list.iter().map(|p| p.positions.len()))
            .sum()
    }

    /// Doc ids in the posting list for `term` (already lowercased).
    pub fn postings(&self, term: &str) -> Vec<&str> {
        self.index
            .get(term)
            .map(|list| {
                list.iter()
                    .map(|p| self.documents[p.doc as usize].doc_id.as_str())
                    .collect()
            })
            .unwrap_or_default()
    }

    fn phrase_terms(phrase: &str) -> Result<Vec<String>, CorpusError> {
        let terms = tokenize(phrase);
        if terms.is_empty() {
            return Err(CorpusError::InvalidQuery(format!(
                "phrase {phrase:?} has no searchable tokens"
            )));
        }
        Ok(terms)
    }

    /// Documents containing `terms` consecutively, with the number of
    /// occurrences in each. Sorted by internal document number.
    pub(crate) fn phrase_matches(&self, terms: &[String]) -> Vec<(u32, u32)> {
        let mut lists = Vec::with_capacity(terms.len());
        for t in terms {
            match self.index.get(t) {
                Some(list) => lists.push(list),
                None => return Vec::new(),
            }
        }
        let (first, rest) = lists.split_first().expect("non-empty phrase");
        let mut out = Vec::new();
        'docs: for head in first.iter() {
            let mut tails = Vec::with_capacity(rest.len());
            for list in rest {
                match list.binary_search_by_key(&head.doc, |p| p.doc) {
                    Ok(k) => tails.push(&list[k].positions),
                    Err(_) => continue 'docs,
                }
            }
            let count = head
                .positions
                .iter()
                .filter(|&&start| {
                    tails
                        .iter()
                        .enumerate()
                        .all(|(k, pos)| pos.binary_search(&(start + k as u32 + 1)).is_ok())
                })
                .count() as u32;
            if count > 0 {
                out.push((head.doc, count));
            }
        }
        out
    }

    fn phrase_docs(&self, phrase: &str) -> Result<Vec<u32>, CorpusError> {
        let terms = Self::phrase_terms(phrase)?;
        Ok(self.phrase_matches(&terms).into_iter().map(|(d, _)| d).collect())
    }

    /// Number of documents containing `phrase` as an exact token sequence.
    pub fn phrase_hits(&self, phrase: &str) -> Result<u64, CorpusError> {
        Ok(self.phrase_docs(phrase)?.len() as u64)
    }

    pub fn co_hits(&self, phrase_a: &str, phrase_b: &str) -> Result<HitCounts, CorpusError> {
        let a = self.phrase_docs(phrase_a)?;
        let b = self.phrase_docs(phrase_b)?;
        let both = sorted_intersection_len(&a, &b);
        Ok(HitCounts::new(a.len() as u64, b.len() as u64, both as u64))
    }

    /// `phrase_hits / N` under a uniform distribution over documents.
    pub fn hit_probability(&self, phrase: &str) -> Result<f64, CorpusError> {
        if self.is_empty() {
            return Err(CorpusError::EmptyCorpus);
        }
        Ok(self.phrase_hits(phrase)? as f64 / self.len() as f64)
    }
}

fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
