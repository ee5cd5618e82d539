//! Social network extraction from document corpora.
//!
//! Three extraction methods share one pipeline: co-occurrence similarity over
//! phrase hit counts (SRS), URL-hierarchy vectors of search snippets (USR),
//! and association rules over bibliographic records (ARS). Actor names are
//! disambiguated with TF.IDF keywords, and extracted graphs are scored
//! against a benchmark by edge overlap.

pub mod assoc;
pub mod config;
pub mod cooccur;
pub mod corpus;
pub mod eval;
pub mod keywords;
pub mod network;
pub mod par;
pub mod text;
pub mod url;

pub use config::RunConfig;
pub use corpus::{Corpus, Document, HitCounts, SearchProvider, Snippet};
pub use network::{Actor, SocialNetwork};
pub use par::Execution;
