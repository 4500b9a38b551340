//! YouTube Data API v3 client: keyword search, video listing with
//! localizations, channel lookups. Quota-budgeted, paginated, and backed
//! by the record/replay fetcher so everything runs offline.

mod quota;
mod request;
mod wire;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use thiserror::Error;

use crate::http::{FetchError, HttpFetcher, HttpRequest, HttpResponse};
use crate::model::{ChannelRecord, LocalizedText, VideoMetadata};

pub use quota::{QuotaBudget, QuotaCosts};
pub use request::{ApiRequest, Endpoint};

/// Maximum results per page, the API ceiling. Fixed in every mode so
/// recorded and live runs paginate identically.
pub const PAGE_SIZE: usize = 50;

/// Environment variable holding the API key. Keys travel only through the
/// environment; recorded fixture keys never contain them.
pub const API_KEY_ENV: &str = "YOUTUBE_API_KEY";

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("quota exhausted: next page costs {needed} units, {remaining} remaining")]
    QuotaExhausted { needed: u64, remaining: u64 },
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("fixture miss: {key}")]
    FixtureMiss { key: String },
    #[error("API rejected request (HTTP {status}, reason {reason:?}): {message}")]
    ApiRejection {
        status: u16,
        reason: String,
        message: String,
    },
    #[error("malformed API response: {0}")]
    InvalidResponse(String),
    #[error("invalid video id {0:?}")]
    InvalidId(String),
    #[error("empty id batch")]
    EmptyBatch,
    #[error("fixture error: {0}")]
    Fixture(String),
}

impl From<FetchError> for ApiError {
    fn from(e: FetchError) -> Self {
        match e {
            FetchError::FixtureMiss { key } => ApiError::FixtureMiss { key },
            FetchError::Transport { url, reason } => {
                ApiError::Transport(format!("{url}: {reason}"))
            }
            FetchError::FixtureFile(msg) => ApiError::Fixture(msg),
        }
    }
}

/// Result of a batch lookup: found records in input order plus the ids the
/// API did not return. Missing ids are data, not errors.
#[derive(Debug, Clone)]
pub struct Fetched<T> {
    pub records: Vec<T>,
    pub missing: Vec<String>,
}

impl<T> Default for Fetched<T> {
    fn default() -> Self {
        Self {
            records: Vec::new(),
            missing: Vec::new(),
        }
    }
}

/// Injects the API key into live YouTube requests. Sits below the
/// recording layer so captured fixtures stay credential-free.
pub struct KeyedFetcher {
    inner: Arc<dyn HttpFetcher>,
    api_key: String,
}

impl KeyedFetcher {
    pub fn new(inner: Arc<dyn HttpFetcher>, api_key: impl Into<String>) -> Self {
        Self {
            inner,
            api_key: api_key.into(),
        }
    }
}

impl HttpFetcher for KeyedFetcher {
    fn fetch(&self, request: &HttpRequest) -> Result<HttpResponse, FetchError> {
        let mut req = request.clone();
        if req.url.contains("googleapis.com") {
            let sep = if req.url.contains('?') { '&' } else { '?' };
            req.url = format!(
                "{}{sep}key={}",
                req.url,
                url::form_urlencoded::byte_serialize(self.api_key.as_bytes()).collect::<String>()
            );
        }
        self.inner.fetch(&req)
    }
}

pub struct YouTubeClient {
    fetcher: Arc<dyn HttpFetcher>,
    costs: QuotaCosts,
}

impl YouTubeClient {
    pub fn new(fetcher: Arc<dyn HttpFetcher>, costs: QuotaCosts) -> Self {
        Self { fetcher, costs }
    }

    /// Keyword search constrained to videos. Returns de-duplicated ids in
    /// API order, paging until the last page or until the budget cannot
    /// cover another page. An insufficient budget before the first page is
    /// an error; running out later just stops pagination.
    pub fn search_videos(
        &self,
        query: &str,
        published_after: DateTime<Utc>,
        relevance_language: &str,
        budget: &QuotaBudget,
    ) -> Result<Vec<String>, ApiError> {
        let mut ids = Vec::new();
        let mut seen = BTreeSet::new();
        let mut page_token: Option<String> = None;
        let mut first_page = true;
        loop {
            if !budget.try_charge(self.costs.search_page) {
                if first_page {
                    return Err(ApiError::QuotaExhausted {
                        needed: self.costs.search_page,
                        remaining: budget.remaining(),
                    });
                }
                break;
            }
            let mut params = vec![
                ("part".to_string(), "id".to_string()),
                ("q".to_string(), query.to_string()),
                ("type".to_string(), "video".to_string()),
                ("maxResults".to_string(), PAGE_SIZE.to_string()),
                (
                    "publishedAfter".to_string(),
                    published_after.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                ),
                (
                    "relevanceLanguage".to_string(),
                    relevance_language.to_string(),
                ),
            ];
            if let Some(token) = &page_token {
                params.push(("pageToken".to_string(), token.clone()));
            }
            let request = ApiRequest::new(Endpoint::Search, params, self.costs.search_page);
            let body = self.dispatch(&request)?;
            let page: wire::SearchListResponse = parse_body(&body)?;
            for item in page.items {
                if let Some(id) = item.id.video_id {
                    if seen.insert(id.clone()) {
                        ids.push(id);
                    }
                }
            }
            page_token = page.next_page_token;
            first_page = false;
            if page_token.is_none() {
                break;
            }
        }
        Ok(ids)
    }

    /// Lists snippet, localizations, and statistics for up to 50 ids per
    /// page. Records come back in input order; unknown ids land in
    /// `missing`.
    pub fn fetch_video_metadata(
        &self,
        ids: &[String],
        budget: &QuotaBudget,
    ) -> Result<Fetched<VideoMetadata>, ApiError> {
        if ids.is_empty() {
            return Err(ApiError::EmptyBatch);
        }
        for id in ids {
            validate_id(id)?;
        }
        let mut by_id: BTreeMap<String, VideoMetadata> = BTreeMap::new();
        for chunk in ids.chunks(PAGE_SIZE) {
            if !budget.try_charge(self.costs.list_page) {
                return Err(ApiError::QuotaExhausted {
                    needed: self.costs.list_page,
                    remaining: budget.remaining(),
                });
            }
            let params = vec![
                (
                    "part".to_string(),
                    "snippet,localizations,statistics".to_string(),
                ),
                ("id".to_string(), chunk.join(",")),
            ];
            let request = ApiRequest::new(Endpoint::Videos, params, self.costs.list_page);
            let body = self.dispatch(&request)?;
            let page: wire::VideoListResponse = parse_body(&body)?;
            for item in page.items {
                let meta = item.into_metadata()?;
                by_id.insert(meta.video_id.clone(), meta);
            }
        }
        let mut out = Fetched::default();
        for id in ids {
            match by_id.remove(id) {
                Some(meta) => out.records.push(meta),
                None => out.missing.push(id.clone()),
            }
        }
        Ok(out)
    }

    /// Per-language display probe for videos whose localizations part is
    /// withheld: one `videos.list` with `hl=<lang>` per probe language,
    /// keeping only languages whose displayed text differs from the
    /// default snippet.
    pub fn probe_localizations(
        &self,
        meta: &VideoMetadata,
        probe_languages: &[String],
        budget: &QuotaBudget,
    ) -> Result<BTreeMap<String, LocalizedText>, ApiError> {
        let mut found = BTreeMap::new();
        for lang in probe_languages {
            if !budget.try_charge(self.costs.list_page) {
                return Err(ApiError::QuotaExhausted {
                    needed: self.costs.list_page,
                    remaining: budget.remaining(),
                });
            }
            let params = vec![
                ("part".to_string(), "snippet".to_string()),
                ("id".to_string(), meta.video_id.clone()),
                ("hl".to_string(), lang.clone()),
            ];
            let request = ApiRequest::new(Endpoint::Videos, params, self.costs.list_page);
            let body = self.dispatch(&request)?;
            let page: wire::VideoListResponse = parse_body(&body)?;
            let Some(item) = page.items.into_iter().next() else {
                continue;
            };
            let text = item.display_text(lang);
            if text.title != meta.default_snippet.title
                || text.description != meta.default_snippet.description
            {
                found.insert(text.language_tag.clone(), text);
            }
        }
        Ok(found)
    }

    /// Channel creation date and subscriber count, plus (optionally) the
    /// most recent upload timestamps via one date-ordered search page. The
    /// extra page costs search quota, so upload history is opt-in.
    pub fn fetch_channels(
        &self,
        ids: &[String],
        budget: &QuotaBudget,
        include_uploads: bool,
    ) -> Result<Fetched<ChannelRecord>, ApiError> {
        if ids.is_empty() {
            return Err(ApiError::EmptyBatch);
        }
        let mut by_id: BTreeMap<String, ChannelRecord> = BTreeMap::new();
        for chunk in ids.chunks(PAGE_SIZE) {
            if !budget.try_charge(self.costs.list_page) {
                return Err(ApiError::QuotaExhausted {
                    needed: self.costs.list_page,
                    remaining: budget.remaining(),
                });
            }
            let params = vec![
                ("part".to_string(), "snippet,statistics".to_string()),
                ("id".to_string(), chunk.join(",")),
            ];
            let request = ApiRequest::new(Endpoint::Channels, params, self.costs.list_page);
            let body = self.dispatch(&request)?;
            let page: wire::ChannelListResponse = parse_body(&body)?;
            for item in page.items {
                let record = item.into_record()?;
                by_id.insert(record.channel_id.clone(), record);
            }
        }
        if include_uploads {
            for record in by_id.values_mut() {
                record.recent_uploads = self.recent_uploads(&record.channel_id, budget)?;
            }
        }
        let mut out = Fetched::default();
        for id in ids {
            match by_id.remove(id) {
                Some(rec) => out.records.push(rec),
                None => out.missing.push(id.clone()),
            }
        }
        Ok(out)
    }

    pub fn fetch_channel(
        &self,
        channel_id: &str,
        budget: &QuotaBudget,
        include_uploads: bool,
    ) -> Result<Option<ChannelRecord>, ApiError> {
        let fetched = self.fetch_channels(&[channel_id.to_string()], budget, include_uploads)?;
        Ok(fetched.records.into_iter().next())
    }

    fn recent_uploads(
        &self,
        channel_id: &str,
        budget: &QuotaBudget,
    ) -> Result<Vec<DateTime<Utc>>, ApiError> {
        if !budget.try_charge(self.costs.search_page) {
            return Err(ApiError::QuotaExhausted {
                needed: self.costs.search_page,
                remaining: budget.remaining(),
            });
        }
        let params = vec![
            ("part".to_string(), "snippet".to_string()),
            ("channelId".to_string(), channel_id.to_string()),
            ("order".to_string(), "date".to_string()),
            ("type".to_string(), "video".to_string()),
            ("maxResults".to_string(), PAGE_SIZE.to_string()),
        ];
        let request = ApiRequest::new(Endpoint::Search, params, self.costs.search_page);
        let body = self.dispatch(&request)?;
        let page: wire::SearchListResponse = parse_body(&body)?;
        let mut stamps: Vec<DateTime<Utc>> = page
            .items
            .into_iter()
            .filter_map(|item| item.snippet.and_then(|s| s.published_at))
            .collect();
        stamps.sort();
        Ok(stamps)
    }

    /// Single best-effort page of top-level comment texts. Callers treat
    /// failures as "no comments available".
    pub fn fetch_comments_page(
        &self,
        video_id: &str,
        budget: &QuotaBudget,
    ) -> Result<Vec<String>, ApiError> {
        validate_id(video_id)?;
        if !budget.try_charge(self.costs.list_page) {
            return Err(ApiError::QuotaExhausted {
                needed: self.costs.list_page,
                remaining: budget.remaining(),
            });
        }
        let params = vec![
            ("part".to_string(), "snippet".to_string()),
            ("videoId".to_string(), video_id.to_string()),
            ("maxResults".to_string(), PAGE_SIZE.to_string()),
            ("textFormat".to_string(), "plainText".to_string()),
        ];
        let request = ApiRequest::new(Endpoint::CommentThreads, params, self.costs.list_page);
        let body = self.dispatch(&request)?;
        let page: wire::CommentThreadListResponse = parse_body(&body)?;
        Ok(page
            .items
            .into_iter()
            .filter_map(|t| t.snippet.top_level_comment)
            .filter_map(|c| c.snippet.map(|s| s.text_display))
            .collect())
    }

    fn dispatch(&self, request: &ApiRequest) -> Result<String, ApiError> {
        let response = self.fetcher.fetch(&request.to_http())?;
        if !response.is_success() {
            let (reason, message) = wire::extract_error(&response.body);
            return Err(ApiError::ApiRejection {
                status: response.status,
                reason,
                message,
            });
        }
        Ok(response.body)
    }
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &str) -> Result<T, ApiError> {
    serde_json::from_str(body).map_err(|e| ApiError::InvalidResponse(e.to_string()))
}

fn validate_id(id: &str) -> Result<(), ApiError> {
    let ok = !id.is_empty()
        && id.len() <= 64
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if ok {
        Ok(())
    } else {
        Err(ApiError::InvalidId(id.to_string()))
    }
}
