use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Snippet;
use crate::network::Actor;

use super::{CanonicalRules, CanonicalUrl};

/// An actor's URL profile: hierarchy-prefix key to accumulated weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UrlVector {
    pub actor: String,
    pub components: BTreeMap<String, f64>,
    /// Snippet URLs that failed to parse.
    #[serde(default)]
    pub skipped: usize,
}

impl UrlVector {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.components.values().map(|w| w * w).sum::<f64>().sqrt()
    }
}

/// Groups the snippets' canonical URLs; a URL seen `u` times at depth `n`
/// adds `u * n` to each of its `n` hierarchy prefixes.
pub fn build_url_vector(actor: &Actor, snippets: &[Snippet], rules: &CanonicalRules) -> UrlVector {
    let mut groups: BTreeMap<String, (CanonicalUrl, u64)> = BTreeMap::new();
    let mut skipped = 0;
    for s in snippets {
        match CanonicalUrl::parse(&s.url, rules) {
            Ok(c) => groups.entry(c.canonical_string.clone()).or_insert((c, 0)).1 += 1,
            Err(e) => {
                log::warn!("skipping snippet {} for {}: {e}", s.doc_id, actor.name);
                skipped += 1;
            }
        }
    }
    let mut components = BTreeMap::new();
    for (url, count) in groups.values() {
        let weight = (*count as f64) * url.depth as f64;
        for key in url.hierarchy_prefixes() {
            *components.entry(key).or_insert(0.0) += weight;
        }
    }
    UrlVector { actor: actor.name.clone(), components, skipped }
}

/// Cosine similarity over the union of keys; 0 when either side is empty.
pub fn url_distance(a: &UrlVector, b: &UrlVector) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let (small, large) = if a.components.len() <= b.components.len() { (a, b) } else { (b, a) };
    let dot: f64 = small
        .components
        .iter()
        .filter_map(|(k, w)| large.components.get(k).map(|v| w * v))
        .sum();
    (dot / (na * nb)).clamp(0.0, 1.0)
}
