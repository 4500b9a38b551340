//! Serde mappings for API response bodies.
//!
//! The API serializes counters as JSON strings ("viewCount": "1218"), so
//! numeric fields go through a string-to-integer bridge.

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::Deserialize;

use super::ApiError;
use crate::model::{ChannelRecord, LocalizedText, VideoMetadata, ViewStats};

mod count {
    use serde::{Deserialize, Deserializer};

    pub fn opt_u64<'de, D>(deserializer: D) -> Result<Option<u64>, D::Error>
    where
        D: Deserializer<'de>,
    {
        let raw: Option<String> = Option::deserialize(deserializer)?;
        match raw {
            None => Ok(None),
            Some(s) => s
                .parse::<u64>()
                .map(Some)
                .map_err(|e| serde::de::Error::custom(format!("count {s:?}: {e}"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchListResponse {
    #[serde(default)]
    pub items: Vec<SearchItem>,
    #[serde(default)]
    pub next_page_token: Option<String>,
}

#[derive(Debug, Deserialize)]
pub struct SearchItem {
    pub id: SearchItemId,
    #[serde(default)]
    pub snippet: Option<SearchSnippet>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchItemId {
    #[serde(default)]
    pub video_id: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchSnippet {
    #[serde(default)]
    pub published_at: Option<DateTime<Utc>>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VideoListResponse {
    #[serde(default)]
    pub items: Vec<VideoItem>,
}

#[derive(Debug, Deserialize)]
pub struct VideoItem {
    pub id: String,
    pub snippet: Option<VideoSnippet>,
    #[serde(default)]
    pub localizations: Option<BTreeMap<String, WireLocalization>>,
    #[serde(default)]
    pub statistics: Option<VideoStatistics>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VideoSnippet {
    pub published_at: DateTime<Utc>,
    pub channel_id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub default_language: Option<String>,
    #[serde(default)]
    pub localized: Option<WireLocalization>,
}

#[derive(Debug, Deserialize)]
pub struct WireLocalization {
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub description: String,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VideoStatistics {
    #[serde(default, deserialize_with = "count::opt_u64")]
    pub view_count: Option<u64>,
    #[serde(default, deserialize_with = "count::opt_u64")]
    pub like_count: Option<u64>,
    #[serde(default, deserialize_with = "count::opt_u64")]
    pub comment_count: Option<u64>,
}

impl VideoItem {
    pub fn into_metadata(self) -> Result<VideoMetadata, ApiError> {
        let snippet = self
            .snippet
            .ok_or_else(|| ApiError::InvalidResponse(format!("video {} has no snippet", self.id)))?;
        let statistics = self.statistics.map(|s| ViewStats {
            view_count: s.view_count.unwrap_or(0),
            like_count: s.like_count,
            comment_count: s.comment_count,
        });
        let localizations = self.localizations.unwrap_or_default().into_iter().map(
            |(tag, loc)| {
                let text = LocalizedText::new(tag.as_str(), loc.title, loc.description);
                (tag, text)
            },
        );
        Ok(VideoMetadata::new(
            self.id,
            snippet.channel_id,
            snippet.published_at,
            snippet.default_language.as_deref(),
            snippet.title,
            snippet.description,
            localizations,
            statistics.unwrap_or_default(),
        ))
    }

    /// Display text for a probe language: the `localized` block when the
    /// API resolved one, otherwise the plain snippet text.
    pub fn display_text(&self, language: &str) -> LocalizedText {
        match self.snippet.as_ref() {
            Some(snippet) => match &snippet.localized {
                Some(localized) => {
                    LocalizedText::new(language, localized.title.clone(), localized.description.clone())
                }
                None => LocalizedText::new(language, snippet.title.clone(), snippet.description.clone()),
            },
            None => LocalizedText::new(language, "", ""),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChannelListResponse {
    #[serde(default)]
    pub items: Vec<ChannelItem>,
}

#[derive(Debug, Deserialize)]
pub struct ChannelItem {
    pub id: String,
    pub snippet: Option<ChannelSnippet>,
    #[serde(default)]
    pub statistics: Option<ChannelStatistics>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChannelSnippet {
    pub published_at: DateTime<Utc>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChannelStatistics {
    #[serde(default, deserialize_with = "count::opt_u64")]
    pub subscriber_count: Option<u64>,
    #[serde(default)]
    pub hidden_subscriber_count: bool,
}

impl ChannelItem {
    pub fn into_record(self) -> Result<ChannelRecord, ApiError> {
        let snippet = self.snippet.ok_or_else(|| {
            ApiError::InvalidResponse(format!("channel {} has no snippet", self.id))
        })?;
        let subscriber_count = match self.statistics {
            Some(stats) if !stats.hidden_subscriber_count => stats.subscriber_count,
            _ => None,
        };
        Ok(ChannelRecord::new(
            self.id,
            snippet.published_at,
            subscriber_count,
            Vec::new(),
        ))
    }
}

#[derive(Debug, Deserialize)]
pub struct CommentThreadListResponse {
    #[serde(default)]
    pub items: Vec<CommentThread>,
}

#[derive(Debug, Deserialize)]
pub struct CommentThread {
    pub snippet: CommentThreadSnippet,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CommentThreadSnippet {
    #[serde(default)]
    pub top_level_comment: Option<TopLevelComment>,
}

#[derive(Debug, Deserialize)]
pub struct TopLevelComment {
    #[serde(default)]
    pub snippet: Option<CommentSnippet>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CommentSnippet {
    #[serde(default)]
    pub text_display: String,
}

#[derive(Debug, Deserialize)]
struct ErrorEnvelope {
    error: ErrorBody,
}

#[derive(Debug, Deserialize)]
struct ErrorBody {
    #[serde(default)]
    message: String,
    #[serde(default)]
    errors: Vec<ErrorDetail>,
}

#[derive(Debug, Deserialize)]
struct ErrorDetail {
    #[serde(default)]
    reason: Option<String>,
}

/// Pulls the API's reason string and message out of an error body, falling
/// back to the raw body when it is not the standard envelope.
pub fn extract_error(body: &str) -> (String, String) {
    match serde_json::from_str::<ErrorEnvelope>(body) {
        Ok(envelope) => {
            let reason = envelope
                .error
                .errors
                .first()
                .and_then(|d| d.reason.clone())
                .unwrap_or_default();
            (reason, envelope.error.message)
        }
        Err(_) => (String::new(), body.trim().to_string()),
    }
}
