//! Relations from bibliographic records via association rules.
//!
//! For a seed actor `a` and optional keyword `x`, the query `q = a AND x`
//! selects the transaction set M (records matching q). Each co-author `b`
//! of a matching record gives a transaction `q ⇒ b` that holds. From the
//! counts
//!
//! * `|M|`: records matching q,
//! * `support(b)`: matching records that list b,
//! * `|Db|`: records anywhere in the library that list b,
//!
//! the rule's conditional probability is `support / |M|` and its similarity
//! is `support / (|M| + |Db| - support)`.

mod records;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::keywords::{tfidf_table, LogBase};
use crate::network::{Actor, NetworkError, SocialNetwork};
use crate::par::{self, Execution};
use crate::text::{contains_sequence, normalize_name, tokenize};

pub use records::{read_bibtex, read_jsonl_records, read_records_file};

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("record {record_id}: {message}")]
    InvalidRecord { record_id: String, message: String },
    #[error("invalid rule counts: {0}")]
    InvalidStats(String),
    #[error("conditional probability undefined: no transactions")]
    UndefinedProbability,
    #[error("rule similarity undefined: zero denominator")]
    UndefinedSimilarity,
    #[error("root degree must be at least 1")]
    InvalidDegree,
    #[error("association-rule extraction needs at least one seed")]
    NoSeeds,
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiblioRecord {
    #[serde(rename = "id", alias = "record_id")]
    pub record_id: String,
    #[serde(default)]
    pub title: String,
    pub authors: Vec<String>,
    #[serde(default)]
    pub venue: String,
    #[serde(default)]
    pub year: i32,
}

impl BiblioRecord {
    /// At least one author, and no author listed twice.
    pub fn validate(&self) -> Result<(), RuleError> {
        let bad = |message: &str| RuleError::InvalidRecord { record_id: self.record_id.clone(), message: message.into() };
        if self.authors.is_empty() {
            return Err(bad("no authors"));
        }
        let mut seen = BTreeSet::new();
        for a in &self.authors {
            let key = normalize_name(a);
            if key.is_empty() {
                return Err(bad("empty author name"));
            }
            if !seen.insert(key) {
                return Err(bad(&format!("author {a:?} listed twice")));
            }
        }
        Ok(())
    }

    fn has_author(&self, key: &str) -> bool {
        self.authors.iter().any(|a| normalize_name(a) == key)
    }

    fn mentions(&self, keyword: &[String]) -> bool {
        contains_sequence(&tokenize(&self.title), keyword) || contains_sequence(&tokenize(&self.venue), keyword)
    }
}

/// One `q ⇒ b` row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub record_id: String,
    pub seed: String,
    pub keyword: String,
    pub consequent: String,
    pub truth: bool,
}

/// The transactions of one query together with `|M|`, which counts matching
/// records even when they list no co-author.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransactionSet {
    pub seed: String,
    pub keyword: String,
    pub total_m: u64,
    pub transactions: Vec<Transaction>,
}

impl TransactionSet {
    /// Support per consequent (normalized name), with the first spelling seen.
    pub fn supports(&self) -> BTreeMap<String, (String, u64)> {
        let mut out: BTreeMap<String, (String, u64)> = BTreeMap::new();
        for t in self.transactions.iter().filter(|t| t.truth) {
            out.entry(normalize_name(&t.consequent)).or_insert_with(|| (t.consequent.clone(), 0)).1 += 1;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleStats {
    pub total_m: u64,
    pub support: u64,
    pub db_size: u64,
}

impl RuleStats {
    pub fn new(total_m: u64, support: u64, db_size: u64) -> Result<RuleStats, RuleError> {
        if support > total_m || support > db_size {
            return Err(RuleError::InvalidStats(format!(
                "support {support} exceeds |M| = {total_m} or |Db| = {db_size}"
            )));
        }
        Ok(RuleStats { total_m, support, db_size })
    }
}

/// Every (matching record, co-author) transaction for the query
/// `seed AND keyword`. An empty keyword matches on the name alone.
pub fn build_transactions(records: &[BiblioRecord], seed: &Actor, keyword: &str, exec: Execution) -> TransactionSet {
    let seed_key = normalize_name(&seed.name);
    let kw = tokenize(keyword);
    let hits = par::map(exec, records, |r| r.has_author(&seed_key) && (kw.is_empty() || r.mentions(&kw)));
    let matching: Vec<&BiblioRecord> = records.iter().zip(hits).filter_map(|(r, hit)| hit.then_some(r)).collect();
    let transactions = matching
        .iter()
        .flat_map(|r| {
            r.authors.iter().filter(|a| normalize_name(a) != seed_key).map(|a| Transaction {
                record_id: r.record_id.clone(),
                seed: seed.name.clone(),
                keyword: keyword.to_string(),
                consequent: a.clone(),
                truth: true,
            })
        })
        .collect();
    TransactionSet { seed: seed.name.clone(), keyword: keyword.to_string(), total_m: matching.len() as u64, transactions }
}

/// `support / |M|`.
pub fn conditional_probability(stats: &RuleStats) -> Result<f64, RuleError> {
    if stats.total_m == 0 {
        return Err(RuleError::UndefinedProbability);
    }
    Ok(stats.support as f64 / stats.total_m as f64)
}

/// `support / (|M| + |Db| - support)`.
pub fn modified_jaccard(stats: &RuleStats) -> Result<f64, RuleError> {
    let denom = stats.total_m + stats.db_size - stats.support;
    if denom == 0 {
        return Err(RuleError::UndefinedSimilarity);
    }
    Ok(stats.support as f64 / denom as f64)
}

/// Number of records listing each author, by normalized name.
pub fn author_frequencies(records: &[BiblioRecord]) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for r in records {
        for a in &r.authors {
            *out.entry(normalize_name(a)).or_insert(0) += 1;
        }
    }
    out
}

/// One scored rule `seed ⇒ b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleScore {
    pub seed: String,
    pub consequent: String,
    pub stats: RuleStats,
    pub probability: f64,
    pub similarity: f64,
}

/// Scores every rule of every seed, seeds in input order and consequents by
/// normalized name.
pub fn score_rules(records: &[BiblioRecord], seeds: &[Actor], keyword: &str, exec: Execution) -> Result<Vec<RuleScore>, RuleError> {
    for r in records {
        r.validate()?;
    }
    let freq = author_frequencies(records);
    let per_seed = par::map(exec, seeds, |seed| -> Result<Vec<RuleScore>, RuleError> {
        let set = build_transactions(records, seed, keyword, Execution::Sequential);
        set.supports()
            .into_iter()
            .map(|(key, (name, support))| {
                let stats = RuleStats::new(set.total_m, support, freq.get(&key).copied().unwrap_or(0))?;
                Ok(RuleScore {
                    seed: seed.name.clone(),
                    consequent: name,
                    probability: conditional_probability(&stats)?,
                    similarity: modified_jaccard(&stats)?,
                    stats,
                })
            })
            .collect()
    });
    let mut out = Vec::new();
    for rules in per_seed {
        out.extend(rules?);
    }
    Ok(out)
}

/// Builds the co-authorship network: seeds plus every discovered co-author
/// as nodes, an edge wherever the rule similarity exceeds `alpha`. A pair
/// reached from both ends keeps the higher-scoring rule.
pub fn extract_ars_network(
    records: &[BiblioRecord],
    seeds: &[Actor],
    keyword: &str,
    alpha: f64,
    exec: Execution,
) -> Result<(SocialNetwork, Vec<RuleScore>), RuleError> {
    if seeds.is_empty() {
        return Err(RuleError::NoSeeds);
    }
    let rules = score_rules(records, seeds, keyword, exec)?;
    let mut net = SocialNetwork::new();
    for s in seeds {
        if net.node_of(&s.name).is_none() {
            net.add_actor(s.clone())?;
        }
    }
    for r in &rules {
        if net.node_of(&r.consequent).is_none() {
            net.add_actor(Actor::new(r.consequent.clone()))?;
        }
    }
    for r in best_rules(&rules, alpha, true) {
        net.add_rule_relation(&r.seed, &r.consequent, r.similarity, r.probability)?;
    }
    Ok((net, rules))
}

/// Rules passing the threshold, one per unordered pair: the higher
/// similarity wins, the earlier rule on ties. Output follows first discovery.
pub fn best_rules(rules: &[RuleScore], alpha: f64, strict: bool) -> Vec<&RuleScore> {
    let mut best: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut order = Vec::new();
    for (i, r) in rules.iter().enumerate() {
        if !(if strict { r.similarity > alpha } else { r.similarity >= alpha }) {
            continue;
        }
        let (a, b) = (normalize_name(&r.seed), normalize_name(&r.consequent));
        let key = if a <= b { (a, b) } else { (b, a) };
        match best.get(&key) {
            Some(&j) if rules[j].similarity >= r.similarity => {}
            Some(_) => {
                best.insert(key, i);
            }
            None => {
                order.push(key.clone());
                best.insert(key, i);
            }
        }
    }
    order.iter().map(|k| &rules[best[k]]).collect()
}

/// A candidate label word for the tree rooted at a transaction set's seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelKeyword {
    pub word: String,
    pub tfidf: f64,
    /// `tfidf * N / root_degree`.
    pub normalized: f64,
}

/// Ranks label words for the seed of `set`. The documents of `corpus` that
/// mention the seed form the view; names of the seed and its consequents
/// are excluded. Words are ordered by `tfidf * N / root_degree`, ties by word.
pub fn label_tree_keywords(
    set: &TransactionSet,
    corpus: &Corpus,
    root_degree: u64,
    base: LogBase,
) -> Result<Vec<LabelKeyword>, RuleError> {
    if root_degree == 0 {
        return Err(RuleError::InvalidDegree);
    }
    let seed_terms = tokenize(&set.seed);
    let view: Vec<Vec<String>> = corpus
        .documents()
        .iter()
        .map(|d| tokenize(&format!("{}\n{}", d.title, d.body)))
        .filter(|toks| contains_sequence(toks, &seed_terms))
        .collect();
    if view.is_empty() {
        return Ok(Vec::new());
    }
    let excluded: BTreeSet<String> = std::iter::once(set.seed.as_str())
        .chain(set.transactions.iter().map(|t| t.consequent.as_str()))
        .flat_map(tokenize)
        .collect();
    let scale = view.len() as f64 / root_degree as f64;
    let table = tfidf_table(&view, base).expect("view is non-empty");
    let mut ranked: Vec<LabelKeyword> = table
        .into_iter()
        .filter(|(w, _)| !excluded.contains(w))
        .map(|(word, tfidf)| LabelKeyword { word, tfidf, normalized: tfidf * scale })
        .collect();
    ranked.sort_by(|a, b| b.normalized.total_cmp(&a.normalized).then_with(|| a.word.cmp(&b.word)));
    Ok(ranked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;
    use crate::network::Method;

    fn rec(id: &str, title: &str, authors: &[&str]) -> BiblioRecord {
        BiblioRecord {
            record_id: id.into(),
            title: title.into(),
            authors: authors.iter().map(|a| a.to_string()).collect(),
            venue: "ICID".into(),
            year: 2011,
        }
    }

    fn brute_transactions(records: &[BiblioRecord], seed: &str) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for r in records {
            if r.authors.iter().any(|a| a.eq_ignore_ascii_case(seed)) {
                for a in &r.authors {
                    if !a.eq_ignore_ascii_case(seed) {
                        out.push((r.record_id.clone(), a.clone()));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn single_record_single_transaction() {
        let set = build_transactions(&[rec("r1", "t", &["A", "B"])], &Actor::new("a"), "", Execution::Sequential);
        assert_eq!(set.total_m, 1);
        assert_eq!(set.transactions.len(), 1);
        assert_eq!(set.transactions[0].consequent, "B");
        assert!(set.transactions[0].truth);
    }

    #[test]
    fn unrelated_record_contributes_nothing() {
        let set = build_transactions(&[rec("r1", "t", &["C", "B"])], &Actor::new("A"), "", Execution::Sequential);
        assert_eq!(set.total_m, 0);
        assert!(set.transactions.is_empty());
    }

    #[test]
    fn keyword_filters_on_title_and_venue() {
        let records = [rec("r1", "Grid computing", &["A", "B"]), rec("r2", "Opera", &["A", "C"])];
        let set = build_transactions(&records, &Actor::new("A"), "grid", Execution::Sequential);
        assert_eq!(set.total_m, 1);
        assert_eq!(set.transactions[0].consequent, "B");
        let venue = build_transactions(&records, &Actor::new("A"), "icid", Execution::Sequential);
        assert_eq!(venue.total_m, 2);
    }

    #[test]
    fn transactions_match_nested_loop() {
        let records = vec![
            rec("r1", "x", &["A", "B", "C"]),
            rec("r2", "y", &["B", "A"]),
            rec("r3", "z", &["C", "D"]),
            rec("r4", "w", &["A"]),
        ];
        let set = build_transactions(&records, &Actor::new("A"), "", Execution::Parallel);
        let got: Vec<_> = set.transactions.iter().map(|t| (t.record_id.clone(), t.consequent.clone())).collect();
        assert_eq!(got, brute_transactions(&records, "A"));
        assert_eq!(set.total_m, 3);
        let supports = set.supports();
        assert_eq!(supports["b"].1, 2);
        assert_eq!(supports["c"].1, 1);
    }

    #[test]
    fn probability_and_similarity_by_hand() {
        assert_eq!(conditional_probability(&RuleStats::new(10, 5, 8).unwrap()).unwrap(), 0.5);
        assert_eq!(conditional_probability(&RuleStats::new(4, 4, 4).unwrap()).unwrap(), 1.0);
        assert!(matches!(conditional_probability(&RuleStats::new(0, 0, 3).unwrap()), Err(RuleError::UndefinedProbability)));
        assert!((modified_jaccard(&RuleStats::new(10, 5, 8).unwrap()).unwrap() - 5.0 / 13.0).abs() < 1e-15);
        assert_eq!(modified_jaccard(&RuleStats::new(7, 7, 7).unwrap()).unwrap(), 1.0);
        assert_eq!(modified_jaccard(&RuleStats::new(7, 0, 7).unwrap()).unwrap(), 0.0);
        assert!(matches!(modified_jaccard(&RuleStats::new(0, 0, 0).unwrap()), Err(RuleError::UndefinedSimilarity)));
        assert!(RuleStats::new(3, 4, 9).is_err());
        assert!(RuleStats::new(9, 4, 3).is_err());
    }

    #[test]
    fn rule_similarity_has_jaccard_shape() {
        use crate::cooccur::jaccard_similarity;
        use crate::corpus::HitCounts;
        for (m, s, d) in [(10, 5, 8), (3, 1, 1), (100, 0, 5)] {
            let rule = modified_jaccard(&RuleStats::new(m, s, d).unwrap()).unwrap();
            let jac = jaccard_similarity(&HitCounts::new(m, d, s)).unwrap();
            assert_eq!(rule, jac);
        }
    }

    #[test]
    fn invalid_records_are_named() {
        let err = score_rules(&[rec("bad", "t", &["A", "a "])], &[Actor::new("A")], "", Execution::Sequential).unwrap_err();
        assert!(err.to_string().starts_with("record bad:"), "{err}");
        assert!(rec("none", "t", &[]).validate().is_err());
    }

    #[test]
    fn empty_library_gives_isolated_seeds() {
        let seeds = [Actor::new("A"), Actor::new("B")];
        let (net, rules) = extract_ars_network(&[], &seeds, "", 0.0001, Execution::Sequential).unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.edge_count(), 0);
        assert!(rules.is_empty());
        assert!(matches!(extract_ars_network(&[], &[], "", 0.0, Execution::Sequential), Err(RuleError::NoSeeds)));
    }

    #[test]
    fn toy_library_matches_hand_graph() {
        // A-B, A-C, B-C from r1; C-D from r2; A alone in r3.
        let records = vec![rec("r1", "x", &["A", "B", "C"]), rec("r2", "y", &["C", "D"]), rec("r3", "z", &["A"])];
        let seeds = [Actor::new("A"), Actor::new("C")];
        let (net, _) = extract_ars_network(&records, &seeds, "", 0.0001, Execution::Parallel).unwrap();
        assert_eq!(net.node_count(), 4);
        let pairs: Vec<(String, String)> = net.name_pairs().into_iter().collect();
        let expect: Vec<(String, String)> = [("a", "b"), ("a", "c"), ("c", "d"), ("b", "c")]
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(pairs, expect);
        // A ⇒ C: |M_A| = 2, support 1, |Db_C| = 2 → 1/3; C ⇒ A: 1/(2+2-1) = 1/3.
        let ac = net
            .edges()
            .find(|e| {
                let (a, b) = net.endpoint_names(e);
                (a, b) == ("A", "C")
            })
            .unwrap();
        assert!((ac.weight - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(ac.conditional_probability, Some(0.5));
        assert!(net.edges().all(|e| e.method == Method::Ars));
        let again = extract_ars_network(&records, &seeds, "", 0.0001, Execution::Sequential).unwrap().0;
        assert_eq!(again, net);
    }

    fn label_corpus() -> Corpus {
        Corpus::ingest(vec![
            Document::new("1", "", "", "Ann Lee grid grid"),
            Document::new("2", "", "", "Ann Lee opera"),
            Document::new("3", "", "", "Ann Lee grid storage Raj"),
            Document::new("4", "", "", "unrelated grid"),
        ])
        .unwrap()
    }

    fn label_set() -> TransactionSet {
        build_transactions(&[rec("r", "t", &["Ann Lee", "Raj"])], &Actor::new("Ann Lee"), "", Execution::Sequential)
    }

    #[test]
    fn label_ranking_by_hand() {
        let ranked = label_tree_keywords(&label_set(), &label_corpus(), 2, LogBase::Natural).unwrap();
        // View = docs 1..3 (N = 3); "raj" is a consequent name, excluded.
        // grid:    (2/4 + 1/5) ln(3/2)
        // opera:   (1/3) ln 3
        // storage: (1/5) ln 3
        let grid = (2.0 / 4.0 + 1.0 / 5.0) * 1.5f64.ln();
        let opera = (1.0 / 3.0) * 3f64.ln();
        let storage = 0.2 * 3f64.ln();
        let words: Vec<&str> = ranked.iter().map(|k| k.word.as_str()).collect();
        assert_eq!(words, vec!["opera", "grid", "storage"]);
        for (k, t) in ranked.iter().zip([opera, grid, storage]) {
            assert!((k.tfidf - t).abs() < 1e-12);
            assert!((k.normalized - t * 3.0 / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn label_ranking_edge_cases() {
        assert!(matches!(
            label_tree_keywords(&label_set(), &label_corpus(), 0, LogBase::Natural),
            Err(RuleError::InvalidDegree)
        ));
        let raw = label_tree_keywords(&label_set(), &label_corpus(), 3, LogBase::Natural).unwrap();
        assert!(raw.iter().all(|k| (k.normalized - k.tfidf).abs() < 1e-15));
        let single = Corpus::ingest(vec![Document::new("1", "", "", "Ann Lee opera")]).unwrap();
        let ranked = label_tree_keywords(&label_set(), &single, 7, LogBase::Natural).unwrap();
        assert_eq!(ranked[0].word, "opera");
    }
}
