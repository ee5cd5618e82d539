use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::Snippet;
use crate::text::tokenize;
use crate::url::{CanonicalRules, CanonicalUrl};

use super::{Clustering, KeywordError};

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        // Smaller index wins so roots stay deterministic.
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

/// Groups snippets that sit on the same canonical host (authority) and share
/// at least one of `keywords`, closed transitively. Snippets whose URL does
/// not parse are kept apart. Reference ids are the snippets' doc ids.
pub fn cluster_references(
    snippets: &[Snippet],
    keywords: &[String],
    rules: &CanonicalRules,
) -> Result<Clustering, KeywordError> {
    let keywords: BTreeSet<&str> = keywords.iter().map(String::as_str).collect();
    let mut parent: Vec<usize> = (0..snippets.len()).collect();
    // (authority, keyword) -> first snippet seen with both
    let mut first_with: BTreeMap<(String, String), usize> = BTreeMap::new();
    for (i, s) in snippets.iter().enumerate() {
        let Ok(url) = CanonicalUrl::parse(&s.url, rules) else {
            continue;
        };
        let authority = url.parts.authority();
        let words: BTreeSet<String> = tokenize(&format!("{}\n{}", s.title, s.summary)).into_iter().collect();
        for w in words.iter().filter(|w| keywords.contains(w.as_str())) {
            match first_with.get(&(authority.clone(), w.clone())) {
                Some(&j) => union(&mut parent, i, j),
                None => {
                    first_with.insert((authority.clone(), w.clone()), i);
                }
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (i, s) in snippets.iter().enumerate() {
        let root = find(&mut parent, i);
        blocks.entry(root).or_default().push(s.doc_id.clone());
    }
    Clustering::new(blocks.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snip(id: &str, url: &str, text: &str) -> Snippet {
        Snippet {
            doc_id: id.into(),
            query: "\"ann lee\"".into(),
            rank: 1,
            title: String::new(),
            summary: text.into(),
            url: url.into(),
        }
    }

    fn kw(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn same_host_shared_keywords_one_cluster() {
        let s = [
            snip("1", "http://u.edu/a", "grid talk"),
            snip("2", "http://U.edu:80/b", "grid and storage"),
            snip("3", "http://u.edu/c/d", "storage only"),
        ];
        let c = cluster_references(&s, &kw(&["grid", "storage"]), &CanonicalRules::default()).unwrap();
        assert_eq!(c.blocks(), &[kw(&["1", "2", "3"])]);
    }

    #[test]
    fn disjoint_hosts_and_keywords_are_singletons() {
        let s = [
            snip("1", "http://a.org/", "grid"),
            snip("2", "http://b.org/", "grid"),
            snip("3", "http://a.org/x", "opera"),
            snip("4", "not a url", "grid"),
        ];
        let c = cluster_references(&s, &kw(&["grid", "opera"]), &CanonicalRules::default()).unwrap();
        assert_eq!(c.blocks().len(), 4);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn no_keywords_means_no_merging() {
        let s = [snip("1", "http://a.org/", "grid"), snip("2", "http://a.org/", "grid")];
        let c = cluster_references(&s, &[], &CanonicalRules::default()).unwrap();
        assert_eq!(c.blocks().len(), 2);
    }
}
