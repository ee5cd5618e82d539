use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::KeywordError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "e")]
    Natural,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "10")]
    Ten,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
            LogBase::Ten => x.log10(),
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "e" | "ln" | "natural" => Ok(LogBase::Natural),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            other => Err(format!("unsupported log base {other:?} (e, 2 or 10)")),
        }
    }
}

/// TF.IDF of `word` over a view of tokenized documents:
/// `sum_j count_j(w) / len_j * log(N / df(w))`. Zero for an absent word.
pub fn tfidf(view: &[Vec<String>], word: &str, base: LogBase) -> Result<f64, KeywordError> {
    if view.is_empty() {
        return Err(KeywordError::EmptyView);
    }
    let mut tf = 0.0;
    let mut df = 0usize;
    for doc in view {
        let count = doc.iter().filter(|t| *t == word).count();
        if count > 0 {
            df += 1;
            tf += count as f64 / doc.len() as f64;
        }
    }
    if df == 0 {
        return Ok(0.0);
    }
    Ok(tf * base.log(view.len() as f64 / df as f64))
}

/// TF.IDF of every word in the view, computed in one pass.
pub fn tfidf_table(view: &[Vec<String>], base: LogBase) -> Result<BTreeMap<String, f64>, KeywordError> {
    if view.is_empty() {
        return Err(KeywordError::EmptyView);
    }
    let mut stats: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for doc in view {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for t in doc {
            *counts.entry(t.as_str()).or_default() += 1;
        }
        for (t, c) in counts {
            let e = stats.entry(t).or_default();
            e.0 += c as f64 / doc.len() as f64;
            e.1 += 1;
        }
    }
    let n = view.len() as f64;
    Ok(stats
        .into_iter()
        .map(|(t, (tf, df))| (t.to_string(), tf * base.log(n / df as f64)))
        .collect())
}
