//! URL token structure, canonicalization and per-actor URL vectors.
//!
//! A URL is read as `scheme://d_m...d_2.d_1:port/p_1/.../p_{n-1}?query#fragment`.
//! The page sits at layer `n = 1 + |path|` of its site hierarchy, and the
//! prefixes `host`, `host/p_1`, ... name those layers.

mod canonical;
mod parse;
mod vector;

use thiserror::Error;

pub use canonical::{canonicalize, CanonicalRules, CanonicalUrl};
pub use parse::{parse_url, UrlParts};
pub use vector::{build_url_vector, url_distance, UrlVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UrlError {
    #[error("malformed URL {url:?}: missing {component}")]
    Missing { url: String, component: &'static str },
    #[error("malformed URL {url:?}: invalid port {port:?}")]
    InvalidPort { url: String, port: String },
    #[error("malformed URL {url:?}: invalid scheme {scheme:?}")]
    InvalidScheme { url: String, scheme: String },
}
