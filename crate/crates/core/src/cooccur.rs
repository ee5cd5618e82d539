//! Pairwise relation strength: hit-count Jaccard (SRS) and URL-vector cosine
//! (USR), with thresholding.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, HitCounts, SearchProvider};
use crate::keywords::{build_query, pair_keywords, quote_phrase, QueryMode};
use crate::network::{Actor, Method};
use crate::par::{self, Execution};
use crate::text::normalize_name;
use crate::url::{build_url_vector, url_distance, CanonicalRules, UrlVector};

pub const DEFAULT_ALPHA_SRS: f64 = 0.0001;
pub const DEFAULT_ALPHA_USR: f64 = 0.01;
pub const DEFAULT_ALPHA_ARS: f64 = 0.0001;

#[derive(Debug, Error)]
pub enum SimilarityError {
    #[error("similarity undefined: both singleton counts are zero")]
    Undefined,
    #[error("inconsistent hit counts: doubleton {doubleton} exceeds a singleton ({a}, {b})")]
    Inconsistent { a: u64, b: u64, doubleton: u64 },
    #[error("pair scoring needs at least two actors, got {0}")]
    TooFewActors(usize),
    #[error("method {0} is not a pairwise co-occurrence method")]
    UnsupportedMethod(Method),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// A scored unordered actor pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub actor_a: String,
    pub actor_b: String,
    pub method: Method,
    pub score: f64,
    /// The score could not be computed and was recorded as 0.
    #[serde(default)]
    pub undefined: bool,
}

/// `|a∩b| / (|a| + |b| - |a∩b|)`.
pub fn jaccard_similarity(hits: &HitCounts) -> Result<f64, SimilarityError> {
    if !hits.is_consistent() {
        return Err(SimilarityError::Inconsistent {
            a: hits.singleton_a,
            b: hits.singleton_b,
            doubleton: hits.doubleton,
        });
    }
    if hits.singleton_a == 0 && hits.singleton_b == 0 {
        return Err(SimilarityError::Undefined);
    }
    let union = hits.singleton_a + hits.singleton_b - hits.doubleton;
    Ok(hits.doubleton as f64 / union as f64)
}

#[derive(Debug, Clone, Default)]
pub struct ScoringOptions {
    pub execution: Execution,
    pub snippet_cap: usize,
    pub url_rules: CanonicalRules,
    /// Keyword augmentation for SRS queries.
    pub mode: QueryMode,
    /// Ranked keywords per actor, keyed by normalized name. Needed for every
    /// mode except `noK`.
    pub keywords: BTreeMap<String, Vec<String>>,
}

impl ScoringOptions {
    pub fn new() -> Self {
        ScoringOptions { snippet_cap: crate::corpus::DEFAULT_SNIPPET_CAP, ..Default::default() }
    }
}

fn srs_counts<P: SearchProvider + ?Sized>(
    provider: &P,
    a: &Actor,
    b: &Actor,
    opts: &ScoringOptions,
) -> Result<Option<HitCounts>, SimilarityError> {
    if opts.mode == QueryMode::NoK {
        return Ok(Some(provider.co_hits(&a.name, &b.name)?));
    }
    let empty = Vec::new();
    let ka = opts.keywords.get(&normalize_name(&a.name)).unwrap_or(&empty);
    let kb = opts.keywords.get(&normalize_name(&b.name)).unwrap_or(&empty);
    let ranked = pair_keywords(ka, kb);
    let Ok(pair_query) = build_query((&a.name, &b.name), &ranked, opts.mode) else {
        return Ok(None);
    };
    let extra: Vec<&str> = opts.mode.pick(&ranked).expect("checked by build_query");
    let extra = extra.join(" ");
    let single = |name: &str| provider.query_hits(&format!("{} {extra}", quote_phrase(name)));
    Ok(Some(HitCounts::new(single(&a.name)?, single(&b.name)?, provider.query_hits(&pair_query)?)))
}

/// One score per unordered actor pair, in row-major pair order. Pairs whose
/// similarity is undefined are kept with score 0 and `undefined` set.
pub fn score_all_pairs<P: SearchProvider + ?Sized>(
    provider: &P,
    actors: &[Actor],
    method: Method,
    opts: &ScoringOptions,
) -> Result<Vec<PairScore>, SimilarityError> {
    if actors.len() < 2 {
        return Err(SimilarityError::TooFewActors(actors.len()));
    }
    let pairs = par::index_pairs(actors.len());
    let make = |i: usize, j: usize, score: Option<f64>| PairScore {
        actor_a: actors[i].name.clone(),
        actor_b: actors[j].name.clone(),
        method,
        score: score.unwrap_or(0.0),
        undefined: score.is_none(),
    };
    match method {
        Method::Srs => {
            let scored = par::map(opts.execution, &pairs, |&(i, j)| -> Result<PairScore, SimilarityError> {
                let score = match srs_counts(provider, &actors[i], &actors[j], opts)? {
                    Some(h) => match jaccard_similarity(&h) {
                        Ok(s) => Some(s),
                        Err(SimilarityError::Undefined | SimilarityError::Inconsistent { .. }) => None,
                        Err(e) => return Err(e),
                    },
                    None => None,
                };
                Ok(make(i, j, score))
            });
            scored.into_iter().collect()
        }
        Method::Usr => {
            let vectors = url_vectors(provider, actors, opts)?;
            Ok(par::map(opts.execution, &pairs, |&(i, j)| make(i, j, Some(url_distance(&vectors[i], &vectors[j])))))
        }
        other => Err(SimilarityError::UnsupportedMethod(other)),
    }
}

/// URL vector of every actor from the snippets of its name query.
pub fn url_vectors<P: SearchProvider + ?Sized>(
    provider: &P,
    actors: &[Actor],
    opts: &ScoringOptions,
) -> Result<Vec<UrlVector>, SimilarityError> {
    par::map(opts.execution, actors, |a| -> Result<UrlVector, SimilarityError> {
        let snippets = provider.search(&quote_phrase(&a.name), opts.snippet_cap.max(1))?;
        Ok(build_url_vector(a, &snippets, &opts.url_rules))
    })
    .into_iter()
    .collect()
}

/// Scores above `alpha` (or at least `alpha` when `strict` is false), in
/// input order. Undefined scores never pass.
pub fn threshold_relations(scores: &[PairScore], alpha: f64, strict: bool) -> Vec<PairScore> {
    scores
        .iter()
        .filter(|s| !s.undefined && if strict { s.score > alpha } else { s.score >= alpha })
        .cloned()
        .collect()
}

/// CSV audit trail: `actor_a,actor_b,method,score`.
pub fn scores_to_csv(scores: &[PairScore]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["actor_a", "actor_b", "method", "score"]).expect("in-memory write");
    for s in scores {
        w.write_record([s.actor_a.as_str(), s.actor_b.as_str(), s.method.as_str(), &s.score.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Reads the output of [`scores_to_csv`]. Returns a message naming the bad
/// row on failure.
pub fn scores_from_csv(input: &str) -> Result<Vec<PairScore>, String> {
    let mut r = csv::Reader::from_reader(input.as_bytes());
    let headers = r.headers().map_err(|e| e.to_string())?.clone();
    if headers.iter().collect::<Vec<_>>() != ["actor_a", "actor_b", "method", "score"] {
        return Err(format!("unexpected header {:?}", headers.iter().collect::<Vec<_>>()));
    }
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row.map_err(|e| format!("row {}: {e}", i + 1))?;
        let method = row[2].parse::<Method>().map_err(|e| format!("row {}: {e}", i + 1))?;
        let score = row[3].parse::<f64>().map_err(|e| format!("row {}: score: {e}", i + 1))?;
        out.push(PairScore { actor_a: row[0].to_string(), actor_b: row[1].to_string(), method, score, undefined: false });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, Document};
    use proptest::prelude::*;

    #[test]
    fn hand_computed_jaccard() {
        let s = jaccard_similarity(&HitCounts::new(1200, 3870, 13)).unwrap();
        assert!((s - 13.0 / 5057.0).abs() < 1e-12);
        assert!((s - 0.002571).abs() < 1e-6);
        assert_eq!(jaccard_similarity(&HitCounts::new(9, 9, 9)).unwrap(), 1.0);
        assert_eq!(jaccard_similarity(&HitCounts::new(5, 7, 0)).unwrap(), 0.0);
    }

    #[test]
    fn undefined_and_inconsistent() {
        assert!(matches!(jaccard_similarity(&HitCounts::new(0, 0, 0)), Err(SimilarityError::Undefined)));
        assert!(matches!(
            jaccard_similarity(&HitCounts::new(3, 2, 4)),
            Err(SimilarityError::Inconsistent { .. })
        ));
    }

    fn fixture() -> (Corpus, Vec<Actor>) {
        let docs = vec![
            Document::new("1", "http://u.edu/cs/a", "", "ann lee and raj kumar wrote grid papers"),
            Document::new("2", "http://u.edu/cs/b", "", "ann lee on grid"),
            Document::new("3", "http://u.edu/math", "", "raj kumar and mei tan"),
            Document::new("4", "http://w.org/", "", "mei tan alone"),
        ];
        let actors = ["Ann Lee", "Raj Kumar", "Mei Tan", "No Body"].map(Actor::new).to_vec();
        (Corpus::ingest(docs).unwrap(), actors)
    }

    #[test]
    fn srs_pairs_match_hand_counts() {
        let (corpus, actors) = fixture();
        let scores = score_all_pairs(&corpus, &actors, Method::Srs, &ScoringOptions::new()).unwrap();
        assert_eq!(scores.len(), 6);
        // ann: {1,2}, raj: {1,3}, mei: {3,4}
        let expect = [(1.0 / 3.0, false), (0.0, false), (0.0, false), (1.0 / 3.0, false), (0.0, false), (0.0, false)];
        for (s, (e, u)) in scores.iter().zip(expect) {
            assert!((s.score - e).abs() < 1e-12, "{s:?}");
            assert_eq!(s.undefined, u);
        }
        assert_eq!((scores[0].actor_a.as_str(), scores[0].actor_b.as_str()), ("Ann Lee", "Raj Kumar"));
        let seq = score_all_pairs(
            &corpus,
            &actors,
            Method::Srs,
            &ScoringOptions { execution: Execution::Sequential, ..ScoringOptions::new() },
        )
        .unwrap();
        assert_eq!(seq, scores);
    }

    #[test]
    fn undefined_pairs_are_flagged() {
        let corpus = Corpus::ingest(vec![Document::new("1", "", "", "x")]).unwrap();
        let actors = [Actor::new("a b"), Actor::new("c d")];
        let s = score_all_pairs(&corpus, &actors, Method::Srs, &ScoringOptions::new()).unwrap();
        assert!(s[0].undefined);
        assert_eq!(s[0].score, 0.0);
        assert!(threshold_relations(&s, 0.0, false).is_empty());
    }

    #[test]
    fn keyword_mode_conjoins_keyword() {
        let (corpus, actors) = fixture();
        let mut opts = ScoringOptions { mode: QueryMode::K1, ..ScoringOptions::new() };
        opts.keywords.insert("ann lee".into(), vec!["grid".into()]);
        let s = score_all_pairs(&corpus, &actors[..3], Method::Srs, &opts).unwrap();
        // "ann lee" grid: {1,2}; "raj kumar" grid: {1}; both: {1}
        assert!((s[0].score - 0.5).abs() < 1e-12);
        // mei tan with grid: no hits on either side → undefined
        assert!(s[2].undefined);
        let opts = ScoringOptions { mode: QueryMode::K2, ..opts };
        let s = score_all_pairs(&corpus, &actors[..3], Method::Srs, &opts).unwrap();
        assert!(s.iter().all(|p| p.undefined));
    }

    #[test]
    fn usr_pairs() {
        let (corpus, actors) = fixture();
        let s = score_all_pairs(&corpus, &actors, Method::Usr, &ScoringOptions::new()).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s[0].score > 0.0 && s[0].score <= 1.0);
        // No Body has no snippets
        assert_eq!(s[2].score, 0.0);
        assert!(s.iter().all(|p| !p.undefined));
    }

    #[test]
    fn arity_and_method_errors() {
        let (corpus, actors) = fixture();
        assert!(matches!(
            score_all_pairs(&corpus, &actors[..1], Method::Srs, &ScoringOptions::new()),
            Err(SimilarityError::TooFewActors(1))
        ));
        assert!(matches!(
            score_all_pairs(&corpus, &actors, Method::Ars, &ScoringOptions::new()),
            Err(SimilarityError::UnsupportedMethod(Method::Ars))
        ));
    }

    fn ps(score: f64) -> PairScore {
        PairScore { actor_a: "a".into(), actor_b: "b".into(), method: Method::Srs, score, undefined: false }
    }

    #[test]
    fn thresholds() {
        let s = vec![ps(0.2), ps(0.0001), ps(0.5)];
        assert_eq!(threshold_relations(&s, 0.0, true), s);
        assert!(threshold_relations(&s, 0.9, true).is_empty());
        assert_eq!(threshold_relations(&s, 0.0001, true).len(), 2);
        assert_eq!(threshold_relations(&s, 0.0001, false).len(), 3);
    }

    #[test]
    fn csv_columns() {
        let csv = scores_to_csv(&[ps(0.25)]);
        assert_eq!(csv, "actor_a,actor_b,method,score\na,b,SRS,0.25\n");
        assert_eq!(scores_from_csv(&csv).unwrap(), vec![ps(0.25)]);
        assert!(scores_from_csv("a,b\n").is_err());
        assert!(scores_from_csv("actor_a,actor_b,method,score\na,b,XYZ,1\n").unwrap_err().starts_with("row 1:"));
    }

    proptest! {
        #[test]
        fn jaccard_symmetric(a in 0u64..1000, b in 0u64..1000, d in 0u64..1000) {
            let d = d.min(a).min(b);
            let x = jaccard_similarity(&HitCounts::new(a, b, d));
            let y = jaccard_similarity(&HitCounts::new(b, a, d));
            match (x, y) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false),
            }
        }

        #[test]
        fn jaccard_monotone_in_doubleton(a in 1u64..1000, b in 1u64..1000, d in 0u64..1000) {
            let d = d.min(a).min(b);
            prop_assume!(d < a.min(b));
            let lo = jaccard_similarity(&HitCounts::new(a, b, d)).unwrap();
            let hi = jaccard_similarity(&HitCounts::new(a, b, d + 1)).unwrap();
            prop_assert!(hi > lo);
        }

        #[test]
        fn threshold_subset_and_idempotent(scores in prop::collection::vec(0.0f64..1.0, 0..30), alpha in 0.0f64..1.0) {
            let s: Vec<_> = scores.into_iter().map(ps).collect();
            let once = threshold_relations(&s, alpha, true);
            prop_assert!(once.len() <= s.len());
            prop_assert_eq!(threshold_relations(&once, alpha, true), once);
        }
    }
}
