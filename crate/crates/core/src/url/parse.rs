use serde::{Deserialize, Serialize};

use super::UrlError;

/// Components of a URL, split at the usual delimiters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UrlParts {
    pub scheme: String,
    /// Host labels in written order, `[d_m, ..., d_1]`; the top-level label is last.
    pub authority_tokens: Vec<String>,
    pub user_info: Option<String>,
    pub port: Option<u16>,
    /// Path segments; a trailing slash shows up as a final empty segment.
    pub path_tokens: Vec<String>,
    pub query_params: Vec<(String, Option<String>)>,
    pub fragment: Option<String>,
}

impl UrlParts {
    pub fn host(&self) -> String {
        self.authority_tokens.join(".")
    }

    /// `host[:port]`, without user info.
    pub fn authority(&self) -> String {
        match self.port {
            Some(p) => format!("{}:{p}", self.host()),
            None => self.host(),
        }
    }

    /// Domain label `d_i`, counting from the top-level label as `d_1`.
    pub fn domain_label(&self, i: usize) -> Option<&str> {
        let n = self.authority_tokens.len();
        (i >= 1 && i <= n).then(|| self.authority_tokens[n - i].as_str())
    }

    /// Reassembles the parts into a URL string.
    pub fn to_url_string(&self) -> String {
        let mut s = format!("{}://", self.scheme);
        if let Some(u) = &self.user_info {
            s.push_str(u);
            s.push('@');
        }
        s.push_str(&self.authority());
        for p in &self.path_tokens {
            s.push('/');
            s.push_str(p);
        }
        if !self.query_params.is_empty() {
            s.push('?');
            let q: Vec<String> = self
                .query_params
                .iter()
                .map(|(k, v)| match v {
                    Some(v) => format!("{k}={v}"),
                    None => k.clone(),
                })
                .collect();
            s.push_str(&q.join("&"));
        }
        if let Some(f) = &self.fragment {
            s.push('#');
            s.push_str(f);
        }
        s
    }
}

impl std::fmt::Display for UrlParts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_url_string())
    }
}

pub fn parse_url(raw: &str) -> Result<UrlParts, UrlError> {
    let url = raw.trim();
    let missing = |component| UrlError::Missing { url: url.to_string(), component };
    if url.is_empty() {
        return Err(missing("scheme"));
    }
    let (scheme, rest) = url.split_once("://").ok_or_else(|| missing("scheme"))?;
    if scheme.is_empty() {
        return Err(missing("scheme"));
    }
    let valid_scheme = scheme.starts_with(|c: char| c.is_ascii_alphabetic())
        && scheme.chars().all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c));
    if !valid_scheme {
        return Err(UrlError::InvalidScheme { url: url.to_string(), scheme: scheme.to_string() });
    }

    let (rest, fragment) = match rest.split_once('#') {
        Some((r, f)) => (r, Some(f.to_string())),
        None => (rest, None),
    };
    let (rest, query) = match rest.split_once('?') {
        Some((r, q)) => (r, Some(q)),
        None => (rest, None),
    };
    let (authority, path) = match rest.find('/') {
        Some(i) => (&rest[..i], Some(&rest[i + 1..])),
        None => (rest, None),
    };

    let (user_info, host_port) = match authority.rsplit_once('@') {
        Some((u, h)) => (Some(u.to_string()), h),
        None => (None, authority),
    };
    let (host, port) = split_port(host_port, url)?;
    if host.is_empty() {
        return Err(missing("authority"));
    }

    let path_tokens = path
        .map(|p| p.split('/').map(str::to_string).collect())
        .unwrap_or_default();
    let query_params = query
        .map(|q| {
            q.split('&')
                .filter(|kv| !kv.is_empty())
                .map(|kv| match kv.split_once('=') {
                    Some((k, v)) => (k.to_string(), Some(v.to_string())),
                    None => (kv.to_string(), None),
                })
                .collect()
        })
        .unwrap_or_default();

    Ok(UrlParts {
        scheme: scheme.to_string(),
        authority_tokens: host.split('.').map(str::to_string).collect(),
        user_info,
        port,
        path_tokens,
        query_params,
        fragment,
    })
}

fn split_port<'a>(host_port: &'a str, url: &str) -> Result<(&'a str, Option<u16>), UrlError> {
    // Bracketed IPv6 literals keep their colons.
    let search_from = if host_port.starts_with('[') {
        host_port.find(']').map_or(host_port.len(), |i| i + 1)
    } else {
        0
    };
    match host_port[search_from..].rfind(':') {
        Some(i) => {
            let i = search_from + i;
            let port = &host_port[i + 1..];
            if port.is_empty() {
                return Ok((&host_port[..i], None));
            }
            let n = port
                .parse::<u16>()
                .map_err(|_| UrlError::InvalidPort { url: url.to_string(), port: port.to_string() })?;
            Ok((&host_port[..i], Some(n)))
        }
        None => Ok((host_port, None)),
    }
}
