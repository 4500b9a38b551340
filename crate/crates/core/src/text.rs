//! Text normalization and word-bounded keyword matching.
//!
//! Matching rules, shared with the reference scanners in the test suite:
//! an entry occurs in a text when its normalized form appears as a
//! substring of the normalized text and both ends sit on a word boundary.
//! A boundary is the string edge, a non-alphanumeric neighboring character,
//! or an entry edge character that is itself non-alphanumeric (so markers
//! like `pass:` still match when glued to the password).

use unicode_normalization::UnicodeNormalization;

use crate::lexicon::KeywordLexicon;
use crate::model::MatchResult;

/// Lowercases, Unicode-NFC-normalizes, and collapses whitespace runs to a
/// single space. Total and idempotent.
pub fn normalize_text(raw: &str) -> String {
    let lowered = raw.to_lowercase();
    let composed: String = lowered.nfc().collect();
    let mut out = String::with_capacity(composed.len());
    let mut pending_space = false;
    for c in composed.chars() {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(c);
        }
    }
    out
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Word-bounded occurrence test over char slices.
pub(crate) fn contains_bounded(haystack: &[char], needle: &[char]) -> bool {
    if needle.is_empty() || needle.len() > haystack.len() {
        return false;
    }
    let first = needle[0];
    let last = *needle.last().expect("non-empty");
    for start in 0..=haystack.len() - needle.len() {
        if haystack[start..start + needle.len()] != *needle {
            continue;
        }
        let end = start + needle.len();
        let start_ok = start == 0 || !is_word_char(haystack[start - 1]) || !is_word_char(first);
        let end_ok = end == haystack.len() || !is_word_char(haystack[end]) || !is_word_char(last);
        if start_ok && end_ok {
            return true;
        }
    }
    false
}

/// Scans normalized `text` for every lexicon entry and reports the hits
/// grouped by lexicon section. Deterministic; a superset lexicon can only
/// grow the result.
pub fn match_keywords(text: &str, lexicon: &KeywordLexicon) -> MatchResult {
    let haystack: Vec<char> = normalize_text(text).chars().collect();
    let mut result = MatchResult::default();
    if haystack.is_empty() {
        return result;
    }

    let hit = |entry: &str| {
        let needle: Vec<char> = entry.chars().collect();
        contains_bounded(&haystack, &needle)
    };

    for term in lexicon.bait_terms() {
        if hit(term) {
            result.matched_bait.insert(term.clone());
        }
    }
    for (label, variants) in lexicon.product_names() {
        let matched: std::collections::BTreeSet<String> =
            variants.iter().filter(|v| hit(v)).cloned().collect();
        if !matched.is_empty() {
            result.matched_products.insert(label.clone(), matched);
        }
    }
    for phrase in lexicon.testimonial_phrases() {
        if hit(phrase) {
            result.matched_testimonials.insert(phrase.clone());
        }
    }
    for marker in lexicon.archive_password_markers() {
        if hit(marker) {
            result.matched_password_markers.insert(marker.clone());
        }
    }
    result
}

/// Matches each field separately and merges the results. Keeping fields
/// separate means a phrase can never span the title/description seam.
pub fn match_fields<'a>(
    fields: impl IntoIterator<Item = &'a str>,
    lexicon: &KeywordLexicon,
) -> MatchResult {
    let mut merged = MatchResult::default();
    for field in fields {
        merged.merge(match_keywords(field, lexicon));
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::LexiconBuilder;

    fn small_lexicon() -> KeywordLexicon {
        LexiconBuilder::new()
            .bait(["free", "download", "crack", "license key"])
            .products("adobe_photoshop", ["photoshop"])
            .testimonials(["it worked! thanks!"])
            .password_markers(["password", "pass:"])
            .build()
            .unwrap()
    }

    #[test]
    fn normalize_collapses_case_and_space() {
        assert_eq!(normalize_text("FREE  Download!"), "free download!");
        assert_eq!(normalize_text(""), "");
        assert_eq!(normalize_text("CRACK\t2025"), "crack 2025");
        assert_eq!(normalize_text("  edge \n case  "), "edge case");
    }

    #[test]
    fn normalize_is_idempotent_on_samples() {
        for s in ["FREE  Download!", "ıİßΣΑΣ mixed", "a\u{0301}ccent", "  \t "] {
            let once = normalize_text(s);
            assert_eq!(normalize_text(&once), once);
        }
    }

    #[test]
    fn match_finds_bait_and_products() {
        let lex = small_lexicon();
        let res = match_keywords("Photoshop 2025 FREE crack download", &lex);
        assert_eq!(
            res.matched_bait,
            ["free", "crack", "download"].iter().map(|s| s.to_string()).collect()
        );
        assert_eq!(res.matched_products.len(), 1);
        assert!(res.matched_products["adobe_photoshop"].contains("photoshop"));
    }

    #[test]
    fn no_overlap_means_empty_result() {
        let res = match_keywords("relaxing piano music", &small_lexicon());
        assert!(res.is_empty());
    }

    #[test]
    fn testimonial_phrase_matches_whole() {
        let res = match_keywords("It worked! Thanks!", &small_lexicon());
        assert_eq!(res.matched_testimonials.len(), 1);
        assert!(res.matched_testimonials.contains("it worked! thanks!"));
    }

    #[test]
    fn word_boundaries_reject_embedded_terms() {
        let lex = small_lexicon();
        assert!(match_keywords("scrack tool", &lex).matched_bait.is_empty());
        assert!(match_keywords("cracked", &lex).matched_bait.is_empty());
        assert!(!match_keywords("crack!", &lex).matched_bait.is_empty());
    }

    #[test]
    fn punctuation_edged_markers_match_adjacent_text() {
        let lex = small_lexicon();
        let res = match_keywords("archive pass:1234", &lex);
        assert!(res.matched_password_markers.contains("pass:"));
        // "password" does not appear in "pass:1234"
        assert!(!res.matched_password_markers.contains("password"));
    }

    #[test]
    fn multiword_entries_match_as_phrases() {
        let lex = small_lexicon();
        assert!(!match_keywords("grab a LICENSE  KEY here", &lex)
            .matched_bait
            .is_empty());
        assert!(match_keywords("license to key", &lex).matched_bait.is_empty());
    }

    #[test]
    fn fields_do_not_bleed_into_each_other() {
        let lex = small_lexicon();
        let merged = match_fields(["ends with license", "key starts this"], &lex);
        assert!(merged.matched_bait.is_empty());
    }
}
