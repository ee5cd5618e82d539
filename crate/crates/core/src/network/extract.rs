//! The end-to-end pipeline: keywords, pair scores, thresholding, network.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Actor, Method, NetworkError, SocialNetwork};
use crate::assoc::{best_rules, score_rules, BiblioRecord, RuleError};
use crate::config::{ConfigError, RunConfig};
use crate::cooccur::{score_all_pairs, threshold_relations, PairScore, SimilarityError};
use crate::corpus::SearchProvider;
use crate::keywords::{extract_keywords, KeywordError, KeywordReport, QueryMode};
use crate::par;
use crate::text::normalize_name;

#[derive(Debug, Error)]
pub enum ExtractionError {
    #[error("no actors to build a network from")]
    NoActors,
    #[error("method {0} needs bibliographic records")]
    MissingRecords(Method),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("keyword extraction for {actor:?}: {source}")]
    Keywords {
        actor: String,
        #[source]
        source: KeywordError,
    },
    #[error("pair scoring: {0}")]
    Scoring(#[source] SimilarityError),
    #[error("association rules: {0}")]
    Rules(#[source] RuleError),
    #[error("network assembly: {0}")]
    Network(#[source] NetworkError),
}

/// A labeled network with the scores and keyword reports behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub network: SocialNetwork,
    /// Every scored pair (or rule), before thresholding.
    pub scores: Vec<PairScore>,
    pub keywords: Vec<KeywordReport>,
}

fn keyword_reports<P: SearchProvider + ?Sized>(
    provider: &P,
    actors: &[Actor],
    config: &RunConfig,
) -> Result<Vec<KeywordReport>, ExtractionError> {
    let opts = config.keyword_options();
    par::map(config.execution, actors, |a| {
        extract_keywords(provider, a, &opts).map_err(|source| ExtractionError::Keywords { actor: a.name.clone(), source })
    })
    .into_iter()
    .collect()
}

/// The actor with its selected keywords added as attributes.
fn with_keywords(actor: &Actor, report: Option<&KeywordReport>, config: &RunConfig) -> Actor {
    let mut out = actor.clone();
    if config.keyword_attributes {
        if let Some(r) = report {
            out.attributes.extend(r.words());
        }
    }
    out
}

/// Builds the network of `actors` with `method`. ARS reads `records`; the
/// other methods query `provider`. Keywords come from `provider` for every
/// method.
pub fn extract_network<P: SearchProvider + ?Sized>(
    provider: &P,
    actors: &[Actor],
    method: Method,
    config: &RunConfig,
    records: Option<&[BiblioRecord]>,
) -> Result<Extraction, ExtractionError> {
    config.validate()?;
    if actors.is_empty() {
        return Err(ExtractionError::NoActors);
    }
    let alpha = config.alpha.get(method);
    match method {
        Method::Srs | Method::Usr => {
            let needs_keywords = config.keyword_attributes || (method == Method::Srs && config.mode != QueryMode::NoK);
            let keywords = if needs_keywords { keyword_reports(provider, actors, config)? } else { Vec::new() };
            let mut net = SocialNetwork::new();
            for (i, a) in actors.iter().enumerate() {
                net.add_actor(with_keywords(a, keywords.get(i), config)).map_err(ExtractionError::Network)?;
            }
            let scores = if actors.len() < 2 {
                Vec::new()
            } else {
                let mut opts = config.scoring_options();
                opts.keywords = keywords.iter().map(|r| (normalize_name(&r.actor), r.words())).collect();
                score_all_pairs(provider, actors, method, &opts).map_err(ExtractionError::Scoring)?
            };
            for s in threshold_relations(&scores, alpha, config.strict_threshold) {
                net.add_relation(&s.actor_a, &s.actor_b, s.score, method).map_err(ExtractionError::Network)?;
            }
            Ok(Extraction { network: net.attach_labels(), scores, keywords })
        }
        Method::Ars => {
            let records = records.ok_or(ExtractionError::MissingRecords(method))?;
            let rules = score_rules(records, actors, &config.ars_keyword, config.execution).map_err(ExtractionError::Rules)?;
            let mut members: Vec<Actor> = Vec::new();
            let mut seen = BTreeSet::new();
            for a in actors.iter().cloned().chain(rules.iter().map(|r| Actor::new(r.consequent.clone()))) {
                if seen.insert(a.key()) {
                    members.push(a);
                } else if members.len() < actors.len() {
                    return Err(ExtractionError::Network(NetworkError::DuplicateActor(a.name)));
                }
            }
            let keywords = if config.keyword_attributes { keyword_reports(provider, &members, config)? } else { Vec::new() };
            let mut net = SocialNetwork::new();
            for (i, a) in members.iter().enumerate() {
                net.add_actor(with_keywords(a, keywords.get(i), config)).map_err(ExtractionError::Network)?;
            }
            for r in best_rules(&rules, alpha, config.strict_threshold) {
                net.add_rule_relation(&r.seed, &r.consequent, r.similarity, r.probability)
                    .map_err(ExtractionError::Network)?;
            }
            let scores = rules
                .iter()
                .map(|r| PairScore {
                    actor_a: r.seed.clone(),
                    actor_b: r.consequent.clone(),
                    method: Method::Ars,
                    score: r.similarity,
                    undefined: false,
                })
                .collect();
            Ok(Extraction { network: net.attach_labels(), scores, keywords })
        }
        Method::External => Err(ExtractionError::Config(ConfigError("method must be one of srs, usr, ars".into()))),
    }
}
