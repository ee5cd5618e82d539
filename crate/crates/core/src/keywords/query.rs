use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::KeywordError;

/// How relation keywords are added to a name-pair query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum QueryMode {
    /// Name pair only.
    #[default]
    #[serde(rename = "noK")]
    NoK,
    /// Name pair plus the top keyword.
    K1,
    /// Name pair plus the second keyword.
    K2,
    /// Name pair plus the top two keywords.
    #[serde(rename = "K1K2")]
    K1K2,
}

impl QueryMode {
    /// Keywords the mode appends, chosen from a ranked list.
    pub fn pick(self, ranked: &[String]) -> Result<Vec<&str>, KeywordError> {
        let needed = match self {
            QueryMode::NoK => 0,
            QueryMode::K1 => 1,
            QueryMode::K2 | QueryMode::K1K2 => 2,
        };
        if ranked.len() < needed {
            return Err(KeywordError::MissingKeyword { mode: self, needed, available: ranked.len() });
        }
        Ok(match self {
            QueryMode::NoK => vec![],
            QueryMode::K1 => vec![&ranked[0]],
            QueryMode::K2 => vec![&ranked[1]],
            QueryMode::K1K2 => vec![&ranked[0], &ranked[1]],
        })
    }
}

impl fmt::Display for QueryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryMode::NoK => "noK",
            QueryMode::K1 => "K1",
            QueryMode::K2 => "K2",
            QueryMode::K1K2 => "K1K2",
        })
    }
}

impl FromStr for QueryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nok" => Ok(QueryMode::NoK),
            "k1" => Ok(QueryMode::K1),
            "k2" => Ok(QueryMode::K2),
            "k1k2" | "k1+k2" => Ok(QueryMode::K1K2),
            other => Err(format!("unknown query mode {other:?} (noK, K1, K2, K1K2)")),
        }
    }
}

/// Wraps a name in double quotes for exact-phrase search.
pub fn quote_phrase(name: &str) -> String {
    format!("\"{}\"", name.replace('"', " ").split_whitespace().collect::<Vec<_>>().join(" "))
}

/// `"A B" "C D"` followed by the keywords the mode selects.
pub fn build_query(pair: (&str, &str), ranked: &[String], mode: QueryMode) -> Result<String, KeywordError> {
    let mut q = format!("{} {}", quote_phrase(pair.0), quote_phrase(pair.1));
    for k in mode.pick(ranked)? {
        q.push(' ');
        q.push_str(k);
    }
    Ok(q)
}

/// Merges two actors' ranked keyword lists: words both share come first
/// (by summed rank), then the rest (by best rank); ties by word.
pub fn pair_keywords(a: &[String], b: &[String]) -> Vec<String> {
    let rank = |list: &[String]| -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for (i, w) in list.iter().enumerate() {
            m.entry(w.clone()).or_insert(i);
        }
        m
    };
    let (ra, rb) = (rank(a), rank(b));
    let mut keyed: Vec<((u8, usize), String)> = Vec::new();
    for (w, &i) in &ra {
        match rb.get(w) {
            Some(&j) => keyed.push(((0, i + j), w.clone())),
            None => keyed.push(((1, i), w.clone())),
        }
    }
    for (w, &j) in &rb {
        if !ra.contains_key(w) {
            keyed.push(((1, j), w.clone()));
        }
    }
    keyed.sort();
    keyed.into_iter().map(|(_, w)| w).collect()
}
