//! URL extraction from metadata, comments, and post bodies.
//!
//! Tokenization rules (mirrored by the reference extractor in the test
//! suite): a URL token starts at `http://` or `https://` (case-insensitive,
//! not preceded by an alphanumeric) and extends over RFC 3986 characters;
//! trailing sentence punctuation is trimmed, and a trailing `)` is trimmed
//! when the token contains no `(`. A second pass finds bare-domain tokens
//! for hosts in the known-host table, again word-bounded, skipping spans
//! already covered by a scheme-ful token; those get an `https://` prefix.

use serde::{Deserialize, Serialize};

use super::hosts::HostTable;

/// Where a URL was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UrlOrigin {
    Description,
    Comment,
    CommunityPost,
}

/// A URL lifted out of a text field, with enough provenance to trace it
/// back: the owning video id for descriptions and comments, the post id
/// for community posts, and the localization language when applicable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractedUrl {
    pub url: String,
    pub origin: UrlOrigin,
    pub origin_id: String,
    pub language_tag: Option<String>,
}

fn is_url_char(c: char) -> bool {
    c.is_ascii_alphanumeric()
        || matches!(
            c,
            '-' | '.' | '_' | '~' | ':' | '/' | '?' | '#' | '[' | ']' | '@' | '!' | '$' | '&'
                | '\'' | '(' | ')' | '*' | '+' | ',' | ';' | '=' | '%'
        )
}

fn trim_token(token: &str) -> &str {
    let mut t = token;
    loop {
        let before = t;
        t = t.trim_end_matches(['.', ',', ';', ':', '!', '?', '\'', '"']);
        if t.ends_with(')') && !t.contains('(') {
            t = &t[..t.len() - 1];
        }
        if t == before {
            return t;
        }
    }
}

fn valid_absolute(url: &str) -> bool {
    url::Url::parse(url)
        .map(|u| u.host_str().is_some())
        .unwrap_or(false)
}

/// Extracts every URL token from `text` in document order. Scheme-ful
/// tokens come first in scan order; bare-domain tokens matching the
/// known-host table are normalized to `https://` URLs.
pub fn extract_urls(
    text: &str,
    origin: UrlOrigin,
    origin_id: &str,
    language_tag: Option<&str>,
    known_hosts: &HostTable,
) -> Vec<ExtractedUrl> {
    let chars: Vec<char> = text.chars().collect();
    // ASCII-lowercased copy for case-insensitive scheme and host matching;
    // table hosts are ASCII, and ASCII folding keeps offsets aligned.
    let scan: Vec<char> = chars.iter().map(|c| c.to_ascii_lowercase()).collect();

    let mut spans: Vec<(usize, usize, String)> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ahead = |prefix: &str| -> bool {
            let p: Vec<char> = prefix.chars().collect();
            scan[i..].starts_with(&p)
        };
        let boundary_ok = i == 0 || !chars[i - 1].is_alphanumeric();
        if boundary_ok && (ahead("http://") || ahead("https://")) {
            let mut end = i;
            while end < chars.len() && is_url_char(chars[end]) {
                end += 1;
            }
            let raw: String = chars[i..end].iter().collect();
            let trimmed = trim_token(&raw);
            if valid_absolute(trimmed) {
                spans.push((i, i + trimmed.chars().count(), trimmed.to_string()));
                i = end;
                continue;
            }
            i = end.max(i + 1);
            continue;
        }
        i += 1;
    }

    // Bare-domain pass over the known-host table.
    let mut bare: Vec<(usize, usize, String)> = Vec::new();
    for host in known_hosts.all_hosts() {
        let needle: Vec<char> = host.chars().collect();
        if needle.is_empty() || needle.len() > scan.len() {
            continue;
        }
        let mut from = 0;
        while from + needle.len() <= scan.len() {
            if scan[from..from + needle.len()] != needle[..] {
                from += 1;
                continue;
            }
            let start = from;
            let prev_ok = start == 0
                || (!chars[start - 1].is_alphanumeric()
                    && chars[start - 1] != '.'
                    && chars[start - 1] != '-'
                    && chars[start - 1] != '/');
            let mut end = start + needle.len();
            // A longer host label (e.g. "mediafire.com.evil.net") is not a
            // table match.
            let label_ends = end >= chars.len()
                || !(chars[end].is_alphanumeric() || chars[end] == '.' || chars[end] == '-');
            if prev_ok && label_ends {
                while end < chars.len() && is_url_char(chars[end]) {
                    end += 1;
                }
                let raw: String = chars[start..end].iter().collect();
                let trimmed = trim_token(&raw).to_string();
                let covered = spans
                    .iter()
                    .any(|(s, e, _)| start < *e && *s < start + trimmed.chars().count());
                let candidate = format!("https://{trimmed}");
                if !covered && valid_absolute(&candidate) {
                    bare.push((start, start + trimmed.chars().count(), candidate));
                }
                from = end;
            } else {
                from += 1;
            }
        }
    }

    spans.extend(bare);
    spans.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.2.cmp(&b.2)));
    spans.dedup_by(|a, b| a.0 == b.0 && a.2 == b.2);

    spans
        .into_iter()
        .map(|(_, _, url)| ExtractedUrl {
            url,
            origin,
            origin_id: origin_id.to_string(),
            language_tag: language_tag.map(String::from),
        })
        .collect()
}
