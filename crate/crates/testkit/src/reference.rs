//! Brute-force reference scanners.

use std::collections::{BTreeMap, BTreeSet};

use unicode_normalization::UnicodeNormalization;

use tubescan_core::lexicon::KeywordLexicon;
use tubescan_core::links::HostTable;
use tubescan_core::model::{MatchResult, VideoMetadata};
use tubescan_core::MisrepresentationFinding;

/// Reference normalizer: same documented semantics (lowercase, NFC,
/// collapse whitespace runs to single spaces, trim), built by splitting
/// into words instead of streaming.
pub fn normalize_reference(raw: &str) -> String {
    let composed: String = raw.to_lowercase().nfc().collect();
    let mut words: Vec<String> = Vec::new();
    let mut current = String::new();
    for ch in composed.chars() {
        if ch.is_whitespace() {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
        } else {
            current.push(ch);
        }
    }
    if !current.is_empty() {
        words.push(current);
    }
    words.join(" ")
}

/// Reference word-bounded occurrence test, scanning byte offsets with
/// `str::starts_with` instead of char-slice comparison.
pub fn occurs_bounded_reference(haystack: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    let first_alnum = needle.chars().next().expect("non-empty").is_alphanumeric();
    let last_alnum = needle.chars().last().expect("non-empty").is_alphanumeric();
    let mut offsets: Vec<usize> = haystack.char_indices().map(|(o, _)| o).collect();
    offsets.push(haystack.len());
    for &offset in &offsets {
        if !haystack[offset..].starts_with(needle) {
            continue;
        }
        let start_ok = offset == 0
            || !first_alnum
            || !haystack[..offset]
                .chars()
                .next_back()
                .expect("offset > 0")
                .is_alphanumeric();
        let end = offset + needle.len();
        let end_ok = end == haystack.len()
            || !last_alnum
            || !haystack[end..].chars().next().expect("end < len").is_alphanumeric();
        if start_ok && end_ok {
            return true;
        }
    }
    false
}

/// Reference keyword matcher: exhaustive scan of every lexicon entry over
/// the reference-normalized text.
pub fn match_keywords_reference(text: &str, lexicon: &KeywordLexicon) -> MatchResult {
    let haystack = normalize_reference(text);
    let mut result = MatchResult::default();
    for term in lexicon.bait_terms() {
        if occurs_bounded_reference(&haystack, term) {
            result.matched_bait.insert(term.clone());
        }
    }
    for (label, variants) in lexicon.product_names() {
        let mut matched = BTreeSet::new();
        for variant in variants {
            if occurs_bounded_reference(&haystack, variant) {
                matched.insert(variant.clone());
            }
        }
        if !matched.is_empty() {
            result.matched_products.insert(label.clone(), matched);
        }
    }
    for phrase in lexicon.testimonial_phrases() {
        if occurs_bounded_reference(&haystack, phrase) {
            result.matched_testimonials.insert(phrase.clone());
        }
    }
    for marker in lexicon.archive_password_markers() {
        if occurs_bounded_reference(&haystack, marker) {
            result.matched_password_markers.insert(marker.clone());
        }
    }
    result
}

fn merged_reference(fields: &[&str], lexicon: &KeywordLexicon) -> MatchResult {
    let mut out = MatchResult::default();
    for field in fields {
        out.merge(match_keywords_reference(field, lexicon));
    }
    out
}

/// Reference misrepresentation decision, re-derived from scratch on top of
/// the reference matcher.
pub fn detect_reference(
    meta: &VideoMetadata,
    lexicon: &KeywordLexicon,
) -> Option<MisrepresentationFinding> {
    let default_matches = merged_reference(
        &[
            meta.default_snippet.title.as_str(),
            meta.default_snippet.description.as_str(),
        ],
        lexicon,
    );
    let default_clean =
        default_matches.matched_bait.is_empty() && default_matches.matched_products.is_empty();
    if !default_clean || meta.localizations.is_empty() {
        return None;
    }

    let mut per_tag: BTreeMap<String, MatchResult> = BTreeMap::new();
    per_tag.insert(meta.default_language_tag().to_string(), default_matches);
    for (tag, text) in &meta.localizations {
        let matches = merged_reference(
            &[text.title.as_str(), text.description.as_str()],
            lexicon,
        );
        per_tag.entry(tag.clone()).or_default().merge(matches);
    }

    let mut benign_languages = BTreeSet::new();
    let mut flagged_languages = BTreeMap::new();
    let mut any_conjunction = false;
    for (tag, matches) in per_tag {
        let clean = matches.matched_bait.is_empty() && matches.matched_products.is_empty();
        if clean {
            benign_languages.insert(tag);
        } else {
            if !matches.matched_bait.is_empty() && !matches.matched_products.is_empty() {
                any_conjunction = true;
            }
            flagged_languages.insert(tag, matches);
        }
    }
    if !any_conjunction {
        return None;
    }
    Some(MisrepresentationFinding {
        video_id: meta.video_id.clone(),
        benign_languages,
        flagged_languages,
        default_is_benign: true,
    })
}

const URL_CHARS: &str = r"[A-Za-z0-9\-._~:/?#\[\]@!$&'()*+,;=%]";

fn trim_reference(token: &str) -> String {
    let mut t = token.to_string();
    loop {
        let before = t.clone();
        while let Some(last) = t.chars().last() {
            if matches!(last, '.' | ',' | ';' | ':' | '!' | '?' | '\'' | '"') {
                t.pop();
            } else {
                break;
            }
        }
        if t.ends_with(')') && !t.contains('(') {
            t.pop();
        }
        if t == before {
            return t;
        }
    }
}

/// Reference URL extractor built on the regex engine: scheme-ful tokens,
/// then table-driven bare-domain tokens outside already-claimed spans.
pub fn extract_urls_reference(text: &str, table: &HostTable) -> Vec<String> {
    let scheme_re = regex::Regex::new(&format!(r"(?i)https?://{URL_CHARS}+")).expect("regex");
    let mut found: Vec<(usize, String)> = Vec::new();
    let mut claimed: Vec<(usize, usize)> = Vec::new();

    for m in scheme_re.find_iter(text) {
        let prev_ok = text[..m.start()]
            .chars()
            .next_back()
            .map_or(true, |c| !c.is_alphanumeric());
        if !prev_ok {
            continue;
        }
        let trimmed = trim_reference(m.as_str());
        if url::Url::parse(&trimmed).map(|u| u.host_str().is_some()).unwrap_or(false) {
            claimed.push((m.start(), m.start() + trimmed.len()));
            found.push((m.start(), trimmed));
        }
    }

    let scan = text.to_ascii_lowercase();
    for host in table.all_hosts() {
        let host_re = regex::Regex::new(&regex::escape(host)).expect("host regex");
        for m in host_re.find_iter(scan) {
            let start = m.start();
            let prev_ok = scan[..start]
                .chars()
                .next_back()
                .map_or(true, |c| !(c.is_alphanumeric() || c == '.' || c == '-' || c == '/'));
            if !prev_ok {
                continue;
            }
            let after = &text[m.end()..];
            let label_done = after
                .chars()
                .next()
                .map_or(true, |c| !(c.is_alphanumeric() || c == '.' || c == '-'));
            if !label_done {
                continue;
            }
            let tail_re = regex::Regex::new(&format!(r"^{URL_CHARS}*")).expect("tail regex");
            let tail_len = tail_re.find(after).map(|t| t.end()).unwrap_or(0);
            let raw = &text[start..m.end() + tail_len];
            let trimmed = trim_reference(raw);
            let end = start + trimmed.len();
            let overlaps = claimed.iter().any(|(s, e)| start < *e && *s < end);
            if overlaps {
                continue;
            }
            let candidate = format!("https://{trimmed}");
            if url::Url::parse(&candidate)
                .map(|u| u.host_str().is_some())
                .unwrap_or(false)
            {
                found.push((start, candidate));
            }
        }
    }

    found.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    found.dedup();
    found.into_iter().map(|(_, url)| url).collect()
}

/// Brute-force hub detection: plain group-by over community-post hops.
pub fn detect_hubs_reference(
    chains: &[tubescan_core::LinkChain],
    min_inbound: usize,
) -> Vec<(String, BTreeSet<String>)> {
    use tubescan_core::links::is_community_post_url;
    use tubescan_core::UrlOrigin;
    let mut groups: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for chain in chains {
        let video_rooted = matches!(
            chain.origin.origin,
            UrlOrigin::Description | UrlOrigin::Comment
        );
        if !video_rooted {
            continue;
        }
        for hop in &chain.hops {
            if is_community_post_url(&hop.url) {
                groups
                    .entry(hop.url.clone())
                    .or_default()
                    .insert(chain.origin.origin_id.clone());
            }
        }
    }
    let mut hubs: Vec<(String, BTreeSet<String>)> = groups
        .into_iter()
        .filter(|(_, videos)| videos.len() >= min_inbound)
        .collect();
    hubs.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(&b.0)));
    hubs
}
