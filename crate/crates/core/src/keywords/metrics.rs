//! Per-reference recall and precision of a clustering against a true
//! partition, and their averages.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::KeywordError;

/// Disjoint blocks of reference ids. Serialized as an array of arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<String>>", into = "Vec<Vec<String>>")]
pub struct Partition {
    blocks: Vec<Vec<String>>,
    block_of: BTreeMap<String, usize>,
}

/// The true grouping of references by person.
pub type ReferencePartition = Partition;
/// A system-produced grouping of references.
pub type Clustering = Partition;

impl Partition {
    /// Empty blocks are dropped; a reference in two blocks is an error.
    pub fn new(blocks: Vec<Vec<String>>) -> Result<Partition, KeywordError> {
        let blocks: Vec<Vec<String>> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
        let mut block_of = BTreeMap::new();
        for (i, block) in blocks.iter().enumerate() {
            for r in block {
                if block_of.insert(r.clone(), i).is_some() {
                    return Err(KeywordError::OverlappingBlocks(r.clone()));
                }
            }
        }
        Ok(Partition { blocks, block_of })
    }

    /// Builds a partition from a per-reference label, blocks in first-seen
    /// label order.
    pub fn from_labels<L: Eq + std::hash::Hash>(labels: impl IntoIterator<Item = (String, L)>) -> Result<Partition, KeywordError> {
        let mut index: HashMap<L, usize> = HashMap::new();
        let mut blocks: Vec<Vec<String>> = Vec::new();
        for (r, l) in labels {
            let next = index.len();
            let i = *index.entry(l).or_insert(next);
            if i == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[i].push(r);
        }
        Partition::new(blocks)
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    /// Number of references.
    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn references(&self) -> impl Iterator<Item = &str> {
        self.block_of.keys().map(String::as_str)
    }

    pub fn contains(&self, r: &str) -> bool {
        self.block_of.contains_key(r)
    }

    fn block(&self, r: &str) -> Result<usize, KeywordError> {
        self.block_of.get(r).copied().ok_or_else(|| KeywordError::UnknownReference(r.to_string()))
    }
}

impl TryFrom<Vec<Vec<String>>> for Partition {
    type Error = KeywordError;

    fn try_from(blocks: Vec<Vec<String>>) -> Result<Self, Self::Error> {
        Partition::new(blocks)
    }
}

impl From<Partition> for Vec<Vec<String>> {
    fn from(p: Partition) -> Self {
        p.blocks
    }
}

fn shared(a: &[String], b: &[String]) -> usize {
    let small: BTreeSet<&String> = a.iter().collect();
    b.iter().filter(|r| small.contains(r)).count()
}

/// Fraction of the true block of `reference` that the system put in the
/// same cluster.
pub fn reference_recall(reference: &str, truth: &ReferencePartition, sys: &Clustering) -> Result<f64, KeywordError> {
    let p = &truth.blocks[truth.block(reference)?];
    let c = &sys.blocks[sys.block(reference)?];
    Ok(shared(p, c) as f64 / p.len() as f64)
}

/// Fraction of the system cluster of `reference` that truly co-refers.
pub fn reference_precision(reference: &str, truth: &ReferencePartition, sys: &Clustering) -> Result<f64, KeywordError> {
    let p = &truth.blocks[truth.block(reference)?];
    let c = &sys.blocks[sys.block(reference)?];
    Ok(shared(p, c) as f64 / c.len() as f64)
}

/// Harmonic mean, 0 when both inputs are 0.
pub fn f_measure(recall: f64, precision: f64) -> f64 {
    if recall + precision == 0.0 {
        0.0
    } else {
        2.0 * recall * precision / (recall + precision)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterScores {
    pub recall: f64,
    pub precision: f64,
    pub f_measure: f64,
}

impl ClusterScores {
    pub fn from_averages(recall: f64, precision: f64) -> Self {
        ClusterScores { recall, precision, f_measure: f_measure(recall, precision) }
    }
}

/// Averages per-reference recall and precision over all references. Both
/// structures must cover the same references.
pub fn clustering_scores(truth: &ReferencePartition, sys: &Clustering) -> Result<ClusterScores, KeywordError> {
    if let Some(r) = truth.references().find(|r| !sys.contains(r)) {
        return Err(KeywordError::UnknownReference(r.to_string()));
    }
    if let Some(r) = sys.references().find(|r| !truth.contains(r)) {
        return Err(KeywordError::UnknownReference(r.to_string()));
    }
    if truth.is_empty() {
        return Err(KeywordError::EmptyUniverse);
    }
    // Overlap between every (true block, cluster) pair.
    let mut overlap: HashMap<(usize, usize), usize> = HashMap::new();
    for (r, &p) in &truth.block_of {
        *overlap.entry((p, sys.block_of[r])).or_default() += 1;
    }
    let (mut rec, mut prec) = (0.0, 0.0);
    for (r, &p) in &truth.block_of {
        let c = sys.block_of[r];
        let n = overlap[&(p, c)] as f64;
        rec += n / truth.blocks[p].len() as f64;
        prec += n / sys.blocks[c].len() as f64;
    }
    let total = truth.len() as f64;
    Ok(ClusterScores::from_averages(rec / total, prec / total))
}
