use serde::{Deserialize, Serialize};

use super::{parse_url, UrlError, UrlParts};

/// Canonicalization rules; each can be switched off independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CanonicalRules {
    pub lowercase: bool,
    pub strip_default_port: bool,
    pub drop_fragment: bool,
    pub drop_user_info: bool,
    pub sort_query: bool,
    pub decode_unreserved: bool,
    pub trim_trailing_slash: bool,
}

impl Default for CanonicalRules {
    fn default() -> Self {
        CanonicalRules {
            lowercase: true,
            strip_default_port: true,
            drop_fragment: true,
            drop_user_info: true,
            sort_query: true,
            decode_unreserved: true,
            trim_trailing_slash: true,
        }
    }
}

/// A normalized URL and its layer count in the site hierarchy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalUrl {
    pub canonical_string: String,
    pub parts: UrlParts,
    /// `1 + |path|`.
    pub depth: usize,
}

impl CanonicalUrl {
    pub fn parse(raw: &str, rules: &CanonicalRules) -> Result<CanonicalUrl, UrlError> {
        Ok(canonicalize(parse_url(raw)?, rules))
    }

    /// One key per layer: `authority`, `authority/p_1`, `authority/p_1/p_2`, ...
    pub fn hierarchy_prefixes(&self) -> Vec<String> {
        let mut key = self.parts.authority();
        let mut out = Vec::with_capacity(self.depth);
        out.push(key.clone());
        for p in &self.parts.path_tokens {
            key.push('/');
            key.push_str(p);
            out.push(key.clone());
        }
        out
    }
}

fn default_port(scheme: &str) -> Option<u16> {
    match scheme {
        "http" => Some(80),
        "https" => Some(443),
        _ => None,
    }
}

pub fn canonicalize(mut parts: UrlParts, rules: &CanonicalRules) -> CanonicalUrl {
    if rules.lowercase {
        parts.scheme.make_ascii_lowercase();
        for label in &mut parts.authority_tokens {
            *label = label.to_lowercase();
        }
    }
    if rules.strip_default_port && parts.port.is_some() && parts.port == default_port(&parts.scheme.to_ascii_lowercase()) {
        parts.port = None;
    }
    if rules.drop_fragment {
        parts.fragment = None;
    }
    if rules.drop_user_info {
        parts.user_info = None;
    }
    if rules.decode_unreserved {
        for p in &mut parts.path_tokens {
            *p = decode_unreserved(p);
        }
        for (k, v) in &mut parts.query_params {
            *k = decode_unreserved(k);
            if let Some(v) = v {
                *v = decode_unreserved(v);
            }
        }
    }
    if rules.sort_query {
        parts.query_params.sort_by(|a, b| a.0.cmp(&b.0));
    }
    if rules.trim_trailing_slash {
        while parts.path_tokens.last().is_some_and(String::is_empty) {
            parts.path_tokens.pop();
        }
    }
    CanonicalUrl {
        canonical_string: parts.to_url_string(),
        depth: 1 + parts.path_tokens.len(),
        parts,
    }
}

fn is_unreserved(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~')
}

/// Decodes `%XX` escapes of unreserved characters and upper-cases the hex
/// digits of every other escape, repeated until nothing changes (a decoded
/// digit can complete a new escape, as in `%%361`).
fn decode_unreserved(s: &str) -> String {
    let mut cur = decode_once(s);
    loop {
        let next = decode_once(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn decode_once(s: &str) -> String {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%'
            && i + 2 < bytes.len()
            && bytes[i + 1].is_ascii_hexdigit()
            && bytes[i + 2].is_ascii_hexdigit()
        {
            let hex = &s[i + 1..i + 3];
            let b = u8::from_str_radix(hex, 16).expect("two hex digits");
            if is_unreserved(b) {
                out.push(b);
            } else {
                out.push(b'%');
                out.extend(hex.to_ascii_uppercase().bytes());
            }
            i += 3;
            continue;
        }
        out.push(bytes[i]);
        i += 1;
    }
    String::from_utf8(out).expect("only ASCII escapes are rewritten")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn canon(raw: &str) -> CanonicalUrl {
        CanonicalUrl::parse(raw, &CanonicalRules::default()).unwrap()
    }

    #[test]
    fn case_and_default_port_collapse() {
        assert_eq!(canon("HTTP://Site.COM:80/a/").canonical_string, "http://site.com/a");
        assert_eq!(canon("http://site.com/a").canonical_string, "http://site.com/a");
        assert_eq!(canon("https://site.com:443").canonical_string, "https://site.com");
        assert_eq!(canon("https://site.com:80").canonical_string, "https://site.com:80");
    }

    #[test]
    fn fragment_and_user_info_dropped() {
        assert_eq!(canon("http://x.y/p#frag").canonical_string, "http://x.y/p");
        assert_eq!(canon("http://u@x.y/p").canonical_string, "http://x.y/p");
    }

    #[test]
    fn query_sorted_stably() {
        assert_eq!(canon("http://h/?b=2&a=1&b=1").canonical_string, "http://h?a=1&b=2&b=1");
    }

    #[test]
    fn unreserved_escapes_decoded() {
        assert_eq!(canon("http://h/%7Euser/%41b%2fc?q=%2d%20").canonical_string, "http://h/~user/Ab%2Fc?q=-%20");
        assert_eq!(decode_unreserved("100%"), "100%");
        assert_eq!(decode_unreserved("%zz%4"), "%zz%4");
        assert_eq!(decode_unreserved("%%6161"), "%A61");
        assert_eq!(decode_unreserved("%%361"), "a");
    }

    #[test]
    fn depth_and_prefixes() {
        let u = canon("http://a.b/x/y");
        assert_eq!(u.depth, 3);
        assert_eq!(u.hierarchy_prefixes(), vec!["a.b", "a.b/x", "a.b/x/y"]);
        let u = canon("http://a.b/");
        assert_eq!(u.depth, 1);
        assert_eq!(u.hierarchy_prefixes(), vec!["a.b"]);
        let u = canon("http://a.b:8080/x");
        assert_eq!(u.hierarchy_prefixes(), vec!["a.b:8080", "a.b:8080/x"]);
    }

    #[test]
    fn search_result_url_prefix() {
        let u = canon("http://search.yahoo.com/search;_ylt=AjoEJrO9wuxK84pfA74_RvCbvZx4?vc=&fp_ip=my&p=x");
        assert_eq!(u.hierarchy_prefixes()[0], "search.yahoo.com");
        assert_eq!(u.parts.path_tokens[0], "search;_ylt=AjoEJrO9wuxK84pfA74_RvCbvZx4");
    }

    #[test]
    fn disabled_rules_leave_parts_alone() {
        let rules = CanonicalRules { drop_fragment: false, lowercase: false, ..Default::default() };
        let u = CanonicalUrl::parse("http://X.y/p#f", &rules).unwrap();
        assert_eq!(u.canonical_string, "http://X.y/p#f");
    }

    proptest! {
        #[test]
        fn idempotent(
            scheme in "(http|HTTPS|ftp)",
            labels in prop::collection::vec("[a-zA-Z0-9]{1,5}", 1..4),
            port in prop::option::of(prop_oneof![Just(80u16), Just(443u16), 1u16..9000]),
            path in prop::collection::vec("[a-z~%0-9A-F;=]{0,4}", 0..4),
            query in prop::collection::vec(("[a-c%]{0,2}", prop::option::of("[a-z=%7E]{0,3}")), 0..4),
            frag in prop::option::of("[a-z#]{0,3}"),
        ) {
            let mut parts = UrlParts {
                scheme, authority_tokens: labels, user_info: None, port,
                path_tokens: path, query_params: query, fragment: frag,
            };
            parts.query_params.retain(|(k, v)| !k.is_empty() || v.is_some());
            let raw = parts.to_url_string();
            let once = CanonicalUrl::parse(&raw, &CanonicalRules::default()).unwrap();
            let twice = CanonicalUrl::parse(&once.canonical_string, &CanonicalRules::default()).unwrap();
            prop_assert_eq!(&once.canonical_string, &twice.canonical_string);
            prop_assert_eq!(once.hierarchy_prefixes().len(), once.depth);
        }
    }
}
