//! Domain types shared by every stage of the scanner.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

/// Case-normalizes a BCP-47 tag: language subtag lowercase, two-letter
/// region subtags uppercase, four-letter script subtags titlecase.
/// `"pt-br"` becomes `"pt-BR"`, `"ZH-hans"` becomes `"zh-Hans"`.
pub fn normalize_language_tag(tag: &str) -> String {
    let mut out = Vec::new();
    for (i, part) in tag.trim().split('-').enumerate() {
        if part.is_empty() {
            continue;
        }
        let norm = if i == 0 {
            part.to_ascii_lowercase()
        } else if part.len() == 2 && part.chars().all(|c| c.is_ascii_alphabetic()) {
            part.to_ascii_uppercase()
        } else if part.len() == 4 && part.chars().all(|c| c.is_ascii_alphabetic()) {
            let mut s = part.to_ascii_lowercase();
            s[..1].make_ascii_uppercase();
            s
        } else {
            part.to_ascii_lowercase()
        };
        out.push(norm);
    }
    out.join("-")
}

/// One language's title and description for a video.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizedText {
    pub language_tag: String,
    pub title: String,
    pub description: String,
}

impl LocalizedText {
    pub fn new(
        language_tag: impl AsRef<str>,
        title: impl Into<String>,
        description: impl Into<String>,
    ) -> Self {
        Self {
            language_tag: normalize_language_tag(language_tag.as_ref()),
            title: title.into(),
            description: description.into(),
        }
    }
}

/// Engagement counters as reported by the platform. Hidden or withheld
/// counters stay `None`; they are not the same thing as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ViewStats {
    pub view_count: u64,
    pub like_count: Option<u64>,
    pub comment_count: Option<u64>,
}

/// Snapshot of one video's metadata: identity, default-language snippet,
/// the per-language localization map, and engagement statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoMetadata {
    pub video_id: String,
    pub channel_id: String,
    pub published_at: DateTime<Utc>,
    /// Declared default metadata language. The platform frequently omits it.
    pub default_language: Option<String>,
    pub default_snippet: LocalizedText,
    pub localizations: BTreeMap<String, LocalizedText>,
    pub statistics: ViewStats,
}

impl VideoMetadata {
    /// Builds a snapshot, case-normalizing language tags and keeping the
    /// first entry when two localization keys collide after normalization.
    pub fn new(
        video_id: impl Into<String>,
        channel_id: impl Into<String>,
        published_at: DateTime<Utc>,
        default_language: Option<&str>,
        title: impl Into<String>,
        description: impl Into<String>,
        localizations: impl IntoIterator<Item = (String, LocalizedText)>,
        statistics: ViewStats,
    ) -> Self {
        let default_language = default_language.map(normalize_language_tag);
        let default_tag = default_language.clone().unwrap_or_else(|| "und".into());
        let mut map = BTreeMap::new();
        for (tag, mut text) in localizations {
            let tag = normalize_language_tag(&tag);
            text.language_tag = tag.clone();
            map.entry(tag).or_insert(text);
        }
        Self {
            video_id: video_id.into(),
            channel_id: channel_id.into(),
            published_at,
            default_language,
            default_snippet: LocalizedText {
                language_tag: default_tag,
                title: title.into(),
                description: description.into(),
            },
            localizations: map,
            statistics,
        }
    }

    /// Tag of the default snippet; `"und"` when the platform omitted one.
    pub fn default_language_tag(&self) -> &str {
        &self.default_snippet.language_tag
    }
}

/// Channel facts used by the dormancy-then-burst anomaly signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRecord {
    pub channel_id: String,
    pub created_at: DateTime<Utc>,
    /// `None` when the channel hides its subscriber count.
    pub subscriber_count: Option<u64>,
    /// Publish timestamps of the most recent uploads, ascending.
    pub recent_uploads: Vec<DateTime<Utc>>,
}

impl ChannelRecord {
    pub fn new(
        channel_id: impl Into<String>,
        created_at: DateTime<Utc>,
        subscriber_count: Option<u64>,
        mut recent_uploads: Vec<DateTime<Utc>>,
    ) -> Self {
        recent_uploads.sort();
        Self {
            channel_id: channel_id.into(),
            created_at,
            subscriber_count,
            recent_uploads,
        }
    }
}

/// Lexicon entries found in one piece of text, grouped the same way the
/// lexicon is. Every reported string is a lexicon member that literally
/// occurs (word-bounded) in the normalized text.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MatchResult {
    pub matched_bait: BTreeSet<String>,
    pub matched_products: BTreeMap<String, BTreeSet<String>>,
    pub matched_testimonials: BTreeSet<String>,
    pub matched_password_markers: BTreeSet<String>,
}

impl MatchResult {
    pub fn is_empty(&self) -> bool {
        self.matched_bait.is_empty()
            && self.matched_products.is_empty()
            && self.matched_testimonials.is_empty()
            && self.matched_password_markers.is_empty()
    }

    /// True when neither bait terms nor product names matched. This is the
    /// benign-language test used by the misrepresentation detector.
    pub fn clean_of_bait_and_products(&self) -> bool {
        self.matched_bait.is_empty() && self.matched_products.is_empty()
    }

    /// True when at least one bait term and at least one product name
    /// matched (the flagging conjunction).
    pub fn has_bait_and_product(&self) -> bool {
        !self.matched_bait.is_empty() && !self.matched_products.is_empty()
    }

    /// Folds another result in; sets union, product categories merge.
    pub fn merge(&mut self, other: MatchResult) {
        self.matched_bait.extend(other.matched_bait);
        for (label, variants) in other.matched_products {
            self.matched_products.entry(label).or_default().extend(variants);
        }
        self.matched_testimonials.extend(other.matched_testimonials);
        self.matched_password_markers.extend(other.matched_password_markers);
    }
}
