//! Tokenization and name normalization shared by every module.

use unicode_segmentation::UnicodeSegmentation;

/// A token together with its byte span in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub term: String,
    pub start: usize,
    pub end: usize,
}

/// Lowercased Unicode words of `text`, in order.
pub fn tokenize(text: &str) -> Vec<String> {
    text.unicode_words().map(str::to_lowercase).collect()
}

/// Like [`tokenize`] but keeps byte offsets into `text`.
pub fn tokenize_spans(text: &str) -> Vec<Token> {
    text.unicode_word_indices()
        .map(|(start, word)| Token {
            term: word.to_lowercase(),
            start,
            end: start + word.len(),
        })
        .collect()
}

/// Case-folds and collapses runs of whitespace. Used wherever actor names are
/// compared across sources.
pub fn normalize_name(name: &str) -> String {
    name.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Whether `needle` occurs as a contiguous run inside `haystack`.
pub fn contains_sequence(haystack: &[String], needle: &[String]) -> bool {
    if needle.is_empty() {
        return false;
    }
    haystack.windows(needle.len()).any(|w| w == needle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowercases_and_splits_on_word_boundaries() {
        assert_eq!(tokenize("Alice meets BOB."), vec!["alice", "meets", "bob"]);
        assert_eq!(tokenize("Kuala-Lumpur, 2011"), vec!["kuala", "lumpur", "2011"]);
        assert!(tokenize("  ... ").is_empty());
    }

    #[test]
    fn spans_point_back_into_source() {
        let text = "Hello, Wörld";
        let toks = tokenize_spans(text);
        assert_eq!(toks.len(), 2);
        assert_eq!(&text[toks[1].start..toks[1].end], "Wörld");
        assert_eq!(toks[1].term, "wörld");
    }

    #[test]
    fn name_normalization() {
        assert_eq!(normalize_name("  Ada   LOVELACE "), "ada lovelace");
    }

    #[test]
    fn sequence_containment() {
        let hay = tokenize("a b c d");
        assert!(contains_sequence(&hay, &tokenize("b c")));
        assert!(!contains_sequence(&hay, &tokenize("c b")));
        assert!(!contains_sequence(&hay, &[]));
    }
}
