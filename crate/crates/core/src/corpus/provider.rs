use super::{Corpus, CorpusError, HitCounts, Snippet};

/// The query surface every hit-count source must offer. [`Corpus`] is the
/// reference implementation; a client for a live engine would implement the
/// same contract.
pub trait SearchProvider: Sync {
    /// Size of the indexed collection (N).
    fn total_documents(&self) -> u64;

    fn phrase_hits(&self, phrase: &str) -> Result<u64, CorpusError>;

    fn co_hits(&self, phrase_a: &str, phrase_b: &str) -> Result<HitCounts, CorpusError>;

    fn search(&self, query: &str, max_results: usize) -> Result<Vec<Snippet>, CorpusError>;

    /// Hits for a conjunctive query in `search` syntax.
    fn query_hits(&self, query: &str) -> Result<u64, CorpusError>;

    fn hit_probability(&self, phrase: &str) -> Result<f64, CorpusError> {
        let n = self.total_documents();
        if n == 0 {
            return Err(CorpusError::EmptyCorpus);
        }
        Ok(self.phrase_hits(phrase)? as f64 / n as f64)
    }
}

impl SearchProvider for Corpus {
    fn total_documents(&self) -> u64 {
        self.len() as u64
    }

    fn phrase_hits(&self, phrase: &str) -> Result<u64, CorpusError> {
        Corpus::phrase_hits(self, phrase)
    }

    fn co_hits(&self, phrase_a: &str, phrase_b: &str) -> Result<HitCounts, CorpusError> {
        Corpus::co_hits(self, phrase_a, phrase_b)
    }

    fn search(&self, query: &str, max_results: usize) -> Result<Vec<Snippet>, CorpusError> {
        Corpus::search(self, query, max_results)
    }

    fn query_hits(&self, query: &str) -> Result<u64, CorpusError> {
        Ok(Corpus::query_hits(self, query))
    }
}
