//! Keyword extraction and name disambiguation.
//!
//! Candidate words for an actor come from the snippets returned for the
//! actor's name. Each word carries two pieces of evidence: its TF.IDF over
//! those snippets and the fraction of the corpus where it co-occurs with the
//! name. `delta` is the gap between the two after scaling each by its
//! maximum; words where both agree rank first.

mod cluster;
mod metrics;
mod query;
mod tfidf;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, SearchProvider};
use crate::network::Actor;
use crate::par::{self, Execution};
use crate::text::tokenize;

pub use cluster::cluster_references;
pub use metrics::{
    clustering_scores, f_measure, reference_precision, reference_recall, ClusterScores, Clustering, Partition,
    ReferencePartition,
};
pub use query::{build_query, pair_keywords, quote_phrase, QueryMode};
pub use tfidf::{tfidf, tfidf_table, LogBase};

pub const DEFAULT_CUTOFF_RATIO: f64 = 0.3;
pub const DEFAULT_KEYWORD_CAP: usize = 30;

#[derive(Debug, Error)]
pub enum KeywordError {
    #[error("TF.IDF needs at least one document")]
    EmptyView,
    #[error("query mode {mode} needs {needed} keyword(s), {available} available")]
    MissingKeyword { mode: QueryMode, needed: usize, available: usize },
    #[error("unknown reference {0:?}")]
    UnknownReference(String),
    #[error("reference {0:?} appears in more than one block")]
    OverlappingBlocks(String),
    #[error("clustering scores need at least one reference")]
    EmptyUniverse,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordCandidate {
    pub word: String,
    pub tfidf: f64,
    /// Documents containing both the word and the actor name, over N.
    pub hit_fraction: f64,
    pub delta: f64,
}

impl KeywordCandidate {
    pub fn new(word: impl Into<String>, tfidf: f64, hit_fraction: f64) -> Self {
        KeywordCandidate { word: word.into(), tfidf, hit_fraction, delta: 0.0 }
    }
}

/// Which end of the delta ranking is preferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaOrder {
    #[default]
    Ascending,
    Descending,
}

/// Keeps words whose TF.IDF exceeds `ratio` times the best one, at most `cap`
/// of them, highest first (ties by word).
pub fn select_keywords(candidates: &[KeywordCandidate], ratio: f64, cap: usize) -> Vec<KeywordCandidate> {
    let Some(max) = candidates.iter().map(|c| c.tfidf).reduce(f64::max) else {
        return Vec::new();
    };
    let cutoff = ratio * max;
    let mut kept: Vec<KeywordCandidate> = candidates.iter().filter(|c| c.tfidf > cutoff).cloned().collect();
    kept.sort_by(|a, b| b.tfidf.total_cmp(&a.tfidf).then_with(|| a.word.cmp(&b.word)));
    kept.truncate(cap);
    kept
}

/// Fills in `delta = |tfidf/max_tfidf - hit/max_hit|` and sorts by it. A
/// vector whose maximum is zero is left unscaled.
pub fn delta_rank(candidates: &[KeywordCandidate], order: DeltaOrder) -> Vec<KeywordCandidate> {
    let scale = |max: f64| if max > 0.0 { max } else { 1.0 };
    let nu_max = scale(candidates.iter().map(|c| c.tfidf).fold(0.0, f64::max));
    let ups_max = scale(candidates.iter().map(|c| c.hit_fraction).fold(0.0, f64::max));
    let mut ranked: Vec<KeywordCandidate> = candidates
        .iter()
        .map(|c| KeywordCandidate { delta: (c.tfidf / nu_max - c.hit_fraction / ups_max).abs(), ..c.clone() })
        .collect();
    ranked.sort_by(|a, b| {
        let by_delta = a.delta.total_cmp(&b.delta);
        let by_delta = if order == DeltaOrder::Descending { by_delta.reverse() } else { by_delta };
        by_delta.then_with(|| a.word.cmp(&b.word))
    });
    ranked
}

/// Settings for [`extract_keywords`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeywordOptions {
    pub snippet_cap: usize,
    pub cutoff_ratio: f64,
    pub cap: usize,
    pub log_base: LogBase,
    pub delta_order: DeltaOrder,
    pub execution: Execution,
}

impl Default for KeywordOptions {
    fn default() -> Self {
        KeywordOptions {
            snippet_cap: crate::corpus::DEFAULT_SNIPPET_CAP,
            cutoff_ratio: DEFAULT_CUTOFF_RATIO,
            cap: DEFAULT_KEYWORD_CAP,
            log_base: LogBase::Natural,
            delta_order: DeltaOrder::Ascending,
            execution: Execution::default(),
        }
    }
}

/// Selected, delta-ranked keywords of one actor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordReport {
    pub actor: String,
    pub snippets: usize,
    pub candidates: Vec<KeywordCandidate>,
}

impl KeywordReport {
    pub fn words(&self) -> Vec<String> {
        self.candidates.iter().map(|c| c.word.clone()).collect()
    }

    /// CSV with columns actor, rank, word, tfidf, hit_fraction, delta.
    pub fn to_csv(&self) -> String {
        reports_to_csv(std::slice::from_ref(self))
    }
}

/// One CSV for several reports, rows grouped by actor.
pub fn reports_to_csv(reports: &[KeywordReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["actor", "rank", "word", "tfidf", "hit_fraction", "delta"]).expect("in-memory write");
    for r in reports {
        for (i, c) in r.candidates.iter().enumerate() {
            w.write_record([
                r.actor.clone(),
                (i + 1).to_string(),
                c.word.clone(),
                c.tfidf.to_string(),
                c.hit_fraction.to_string(),
                c.delta.to_string(),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Runs the whole keyword pipeline for one actor: search the name, score
/// snippet words by TF.IDF, select, attach co-occurrence evidence and rank
/// by delta. An actor with no hits yields an empty report.
pub fn extract_keywords<P: SearchProvider + ?Sized>(
    provider: &P,
    actor: &Actor,
    opts: &KeywordOptions,
) -> Result<KeywordReport, KeywordError> {
    let name_query = quote_phrase(&actor.name);
    let snippets = provider.search(&name_query, opts.snippet_cap)?;
    if snippets.is_empty() {
        log::warn!("no hits for actor {:?}", actor.name);
        return Ok(KeywordReport { actor: actor.name.clone(), snippets: 0, candidates: Vec::new() });
    }
    let view: Vec<Vec<String>> = snippets.iter().map(|s| tokenize(&format!("{}\n{}", s.title, s.summary))).collect();
    let name_terms: BTreeSet<String> = tokenize(&actor.name).into_iter().collect();
    let candidates: Vec<KeywordCandidate> = tfidf_table(&view, opts.log_base)?
        .into_iter()
        .filter(|(w, _)| !name_terms.contains(w))
        .map(|(w, score)| KeywordCandidate::new(w, score, 0.0))
        .collect();
    let selected = select_keywords(&candidates, opts.cutoff_ratio, opts.cap);

    let n = provider.total_documents() as f64;
    let fractions = par::map(opts.execution, &selected, |c| {
        provider.co_hits(&actor.name, &c.word).map(|h| h.doubleton as f64 / n)
    });
    let mut with_hits = Vec::with_capacity(selected.len());
    for (c, f) in selected.into_iter().zip(fractions) {
        with_hits.push(KeywordCandidate { hit_fraction: f?, ..c });
    }
    Ok(KeywordReport {
        actor: actor.name.clone(),
        snippets: snippets.len(),
        candidates: delta_rank(&with_hits, opts.delta_order),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, Document};

    fn cand(word: &str, tfidf: f64) -> KeywordCandidate {
        KeywordCandidate::new(word, tfidf, 0.0)
    }

    #[test]
    fn equal_scores_all_kept() {
        let cs: Vec<_> = (0..10).map(|i| cand(&format!("w{i}"), 2.0)).collect();
        assert_eq!(select_keywords(&cs, 0.3, 30).len(), 10);
    }

    #[test]
    fn cap_of_thirty() {
        let cs: Vec<_> = (0..50).map(|i| cand(&format!("w{i:02}"), 1.0 + i as f64 / 100.0)).collect();
        let kept = select_keywords(&cs, 0.3, DEFAULT_KEYWORD_CAP);
        assert_eq!(kept.len(), 30);
        assert_eq!(kept[0].word, "w49");
        assert!(kept.windows(2).all(|w| w[0].tfidf >= w[1].tfidf));
    }

    #[test]
    fn below_cutoff_excluded() {
        let kept = select_keywords(&[cand("top", 1.0), cand("low", 0.2), cand("edge", 0.3)], 0.3, 30);
        assert_eq!(kept.iter().map(|c| c.word.as_str()).collect::<Vec<_>>(), vec!["top"]);
        assert!(select_keywords(&[], 0.3, 30).is_empty());
    }

    #[test]
    fn ties_break_by_word() {
        let kept = select_keywords(&[cand("b", 1.0), cand("a", 1.0), cand("c", 1.0)], 0.3, 2);
        assert_eq!(kept.iter().map(|c| c.word.as_str()).collect::<Vec<_>>(), vec!["a", "b"]);
    }

    #[test]
    fn delta_ranking_by_hand() {
        // nu max 4, upsilon max 0.5:
        //   a: |4/4 - 0.5/0.5| = 0
        //   b: |2/4 - 0.1/0.5| = 0.3
        //   c: |1/4 - 0.5/0.5| = 0.75
        //   d: |3/4 - 0.2/0.5| = 0.35
        let cs = vec![
            KeywordCandidate::new("c", 1.0, 0.5),
            KeywordCandidate::new("b", 2.0, 0.1),
            KeywordCandidate::new("a", 4.0, 0.5),
            KeywordCandidate::new("d", 3.0, 0.2),
        ];
        let ranked = delta_rank(&cs, DeltaOrder::Ascending);
        assert_eq!(ranked.iter().map(|c| c.word.as_str()).collect::<Vec<_>>(), vec!["a", "b", "d", "c"]);
        let expected = [0.0, 0.3, 0.35, 0.75];
        for (c, e) in ranked.iter().zip(expected) {
            assert!((c.delta - e).abs() < 1e-12, "{} {}", c.word, c.delta);
        }
        let desc = delta_rank(&cs, DeltaOrder::Descending);
        assert_eq!(desc[0].word, "c");
    }

    #[test]
    fn delta_zero_max_vectors() {
        let ranked = delta_rank(&[KeywordCandidate::new("x", 0.0, 0.0)], DeltaOrder::Ascending);
        assert_eq!(ranked.len(), 1);
        assert_eq!(ranked[0].delta, 0.0);
    }

    #[test]
    fn pipeline_on_small_corpus() {
        let docs = vec![
            Document::new("1", "http://u.edu/a", "Ann Lee", "Ann Lee teaches grid computing"),
            Document::new("2", "http://u.edu/b", "", "Ann Lee on grid storage"),
            Document::new("3", "http://u.edu/c", "", "Ann Lee sings opera"),
            Document::new("4", "http://v.org/", "", "grid networks without her"),
        ];
        let corpus = Corpus::ingest(docs).unwrap();
        let report = extract_keywords(&corpus, &Actor::new("Ann Lee"), &KeywordOptions::default()).unwrap();
        assert_eq!(report.snippets, 3);
        let words = report.words();
        assert!(!words.contains(&"ann".to_string()));
        assert!(words.contains(&"opera".to_string()));
        let opera = report.candidates.iter().find(|c| c.word == "opera").unwrap();
        assert!((opera.hit_fraction - 0.25).abs() < 1e-12);
        assert!(report.candidates.windows(2).all(|w| w[0].delta <= w[1].delta));
        assert!(report.to_csv().starts_with("actor,rank,word,tfidf,hit_fraction,delta\nAnn Lee,1,"), "{}", report.to_csv());

        let empty = extract_keywords(&corpus, &Actor::new("Nobody Here"), &KeywordOptions::default()).unwrap();
        assert!(empty.candidates.is_empty());
    }
}
