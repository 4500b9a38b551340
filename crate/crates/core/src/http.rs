//! HTTP fetch abstraction with record/replay fixtures.
//!
//! Everything that touches the network goes through [`HttpFetcher`]. The
//! replay implementation answers exclusively from a fixture file and turns
//! misses into hard errors, so no test or offline run can fall through to
//! a live request. The recording wrapper captures live traffic into the
//! same file format, one file per corpus.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fixed user-agent sent by live fetchers.
pub const USER_AGENT: &str = concat!("tubescan/", env!("CARGO_PKG_VERSION"));

/// How many bytes of a response body a fetcher may read. Keeps the link
/// resolver from ever pulling a payload archive.
pub const DEFAULT_BODY_LIMIT: usize = 64 * 1024;

pub const FIXTURE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("no fixture entry for {key:?} (replay mode never falls through to the network)")]
    FixtureMiss { key: String },
    #[error("transport failure for {url}: {reason}")]
    Transport { url: String, reason: String },
    #[error("fixture file error: {0}")]
    FixtureFile(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpRequest {
    pub method: String,
    pub url: String,
}

impl HttpRequest {
    pub fn get(url: impl Into<String>) -> Self {
        Self {
            method: "GET".into(),
            url: url.into(),
        }
    }

    pub fn canonical_key(&self) -> String {
        canonical_key(&self.method, &self.url)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HttpResponse {
    pub status: u16,
    #[serde(default)]
    pub headers: Vec<(String, String)>,
    pub body: String,
}

impl HttpResponse {
    /// First header value with the given name, case-insensitive.
    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }

    pub fn is_success(&self) -> bool {
        (200..300).contains(&self.status)
    }

    pub fn is_redirect(&self) -> bool {
        (300..400).contains(&self.status)
    }
}

/// Canonical lookup key for a request: method plus URL with query
/// parameters sorted by name and any `key` credential parameter removed.
/// Two logically identical requests always map to the same key, which is
/// what makes replay lookups byte-stable.
pub fn canonical_key(method: &str, url: &str) -> String {
    let Ok(parsed) = url::Url::parse(url) else {
        return format!("{method} {url}");
    };
    let mut pairs: Vec<(String, String)> = parsed
        .query_pairs()
        .filter(|(k, _)| k != "key")
        .map(|(k, v)| (k.into_owned(), v.into_owned()))
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));

    let mut base = parsed.clone();
    base.set_query(None);
    base.set_fragment(None);
    if pairs.is_empty() {
        return format!("{method} {base}");
    }
    let mut serializer = url::form_urlencoded::Serializer::new(String::new());
    for (k, v) in &pairs {
        serializer.append_pair(k, v);
    }
    format!("{method} {base}?{}", serializer.finish())
}

pub trait HttpFetcher: Send + Sync {
    fn fetch(&self, request: &HttpRequest) -> Result<HttpResponse, FetchError>;
}

/// One recorded exchange. `status == 0` marks a recorded transport
/// failure; replaying it reproduces the failure instead of a response.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub key: String,
    pub status: u16,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub headers: Vec<(String, String)>,
    pub body: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct FixtureFile {
    format_version: u32,
    entries: Vec<FixtureEntry>,
}

/// An ordered set of recorded exchanges, keyed by canonical request key.
#[derive(Debug, Default)]
pub struct FixtureStore {
    entries: Vec<FixtureEntry>,
    index: HashMap<String, usize>,
}

impl FixtureStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FetchError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|e| {
            FetchError::FixtureFile(format!("read {}: {e}", path.display()))
        })?;
        Self::from_json_str(&raw)
    }

    pub fn from_json_str(raw: &str) -> Result<Self, FetchError> {
        let file: FixtureFile = serde_json::from_str(raw)
            .map_err(|e| FetchError::FixtureFile(format!("parse: {e}")))?;
        if file.format_version != FIXTURE_FORMAT_VERSION {
            return Err(FetchError::FixtureFile(format!(
                "unsupported fixture format version {}",
                file.format_version
            )));
        }
        let mut store = Self::new();
        for entry in file.entries {
            store.insert(entry);
        }
        Ok(store)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), FetchError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json_string())
            .map_err(|e| FetchError::FixtureFile(format!("write {}: {e}", path.display())))
    }

    pub fn to_json_string(&self) -> String {
        let file = FixtureFile {
            format_version: FIXTURE_FORMAT_VERSION,
            entries: self.entries.clone(),
        };
        serde_json::to_string_pretty(&file).expect("fixture file serializes")
    }

    /// Inserts or replaces the entry at its key.
    pub fn insert(&mut self, entry: FixtureEntry) {
        match self.index.get(&entry.key) {
            Some(&i) => self.entries[i] = entry,
            None => {
                self.index.insert(entry.key.clone(), self.entries.len());
                self.entries.push(entry);
            }
        }
    }

    pub fn lookup(&self, key: &str) -> Option<&FixtureEntry> {
        self.index.get(key).map(|&i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &FixtureEntry> {
        self.entries.iter()
    }
}

/// Replay-only fetcher. Lookup misses are errors by contract.
pub struct ReplayFetcher {
    store: Arc<FixtureStore>,
}

impl ReplayFetcher {
    pub fn new(store: Arc<FixtureStore>) -> Self {
        Self { store }
    }
}

impl HttpFetcher for ReplayFetcher {
    fn fetch(&self, request: &HttpRequest) -> Result<HttpResponse, FetchError> {
        let key = request.canonical_key();
        let entry = self
            .store
            .lookup(&key)
            .ok_or(FetchError::FixtureMiss { key })?;
        if entry.status == 0 {
            return Err(FetchError::Transport {
                url: request.url.clone(),
                reason: entry.body.clone(),
            });
        }
        Ok(HttpResponse {
            status: entry.status,
            headers: entry.headers.clone(),
            body: entry.body.clone(),
        })
    }
}

/// Live fetcher over plain HTTPS. Never follows redirects itself (the
/// chain resolver wants to see every hop) and reads at most `body_limit`
/// bytes of any body.
pub struct LiveFetcher {
    agent: ureq::Agent,
    body_limit: usize,
}

impl LiveFetcher {
    pub fn new(body_limit: usize) -> Self {
        let agent = ureq::AgentBuilder::new()
            .redirects(0)
            .user_agent(USER_AGENT)
            .timeout(std::time::Duration::from_secs(20))
            .build();
        Self { agent, body_limit }
    }
}

impl Default for LiveFetcher {
    fn default() -> Self {
        Self::new(DEFAULT_BODY_LIMIT)
    }
}

impl HttpFetcher for LiveFetcher {
    fn fetch(&self, request: &HttpRequest) -> Result<HttpResponse, FetchError> {
        let call = match request.method.as_str() {
            "GET" => self.agent.get(&request.url),
            other => self.agent.request(other, &request.url),
        };
        let response = match call.call() {
            Ok(r) => r,
            // ureq reports non-2xx as Status errors; those are still
            // responses for our purposes.
            Err(ureq::Error::Status(_, r)) => r,
            Err(ureq::Error::Transport(t)) => {
                return Err(FetchError::Transport {
                    url: request.url.clone(),
                    reason: t.to_string(),
                })
            }
        };
        let status = response.status();
        let headers: Vec<(String, String)> = response
            .headers_names()
            .into_iter()
            .filter_map(|name| {
                response
                    .header(&name)
                    .map(|v| (name.to_ascii_lowercase(), v.to_string()))
            })
            .collect();
        let mut body = Vec::new();
        response
            .into_reader()
            .take(self.body_limit as u64)
            .read_to_end(&mut body)
            .map_err(|e| FetchError::Transport {
                url: request.url.clone(),
                reason: e.to_string(),
            })?;
        Ok(HttpResponse {
            status,
            headers,
            body: String::from_utf8_lossy(&body).into_owned(),
        })
    }
}

/// Wraps a fetcher and records every exchange (including transport
/// failures, stored as status 0) into a fixture store. Single writer;
/// recorded keys never contain credentials because keys are canonical.
pub struct RecordingFetcher {
    inner: Arc<dyn HttpFetcher>,
    recorded: Mutex<FixtureStore>,
}

impl RecordingFetcher {
    pub fn new(inner: Arc<dyn HttpFetcher>) -> Self {
        Self {
            inner,
            recorded: Mutex::new(FixtureStore::new()),
        }
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<usize, FetchError> {
        let store = self.recorded.lock().expect("recorder lock");
        store.save(path)?;
        Ok(store.len())
    }
}

impl HttpFetcher for RecordingFetcher {
    fn fetch(&self, request: &HttpRequest) -> Result<HttpResponse, FetchError> {
        let key = request.canonical_key();
        let outcome = self.inner.fetch(request);
        let entry = match &outcome {
            Ok(resp) => FixtureEntry {
                key,
                status: resp.status,
                headers: resp.headers.clone(),
                body: resp.body.clone(),
            },
            Err(FetchError::Transport { reason, .. }) => FixtureEntry {
                key,
                status: 0,
                headers: Vec::new(),
                body: reason.clone(),
            },
            Err(_) => return outcome,
        };
        self.recorded.lock().expect("recorder lock").insert(entry);
        outcome
    }
}

/// Counts fetches going through it. Tests use this to prove that replay
/// runs never touch a live transport.
pub struct CountingFetcher {
    inner: Arc<dyn HttpFetcher>,
    calls: AtomicU64,
}

impl CountingFetcher {
    pub fn new(inner: Arc<dyn HttpFetcher>) -> Self {
        Self {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl HttpFetcher for CountingFetcher {
    fn fetch(&self, request: &HttpRequest) -> Result<HttpResponse, FetchError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.fetch(request)
    }
}

/// A fetcher that refuses every request. Stands in for the live transport
/// in replay pipelines: reaching it means the replay guarantee broke.
pub struct DeniedFetcher;

impl HttpFetcher for DeniedFetcher {
    fn fetch(&self, request: &HttpRequest) -> Result<HttpResponse, FetchError> {
        Err(FetchError::Transport {
            url: request.url.clone(),
            reason: "live network access is disabled".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_key_sorts_params_and_strips_credentials() {
        let a = canonical_key(
            "GET",
            "https://api.example.com/v3/videos?part=snippet&id=abc&key=SECRET",
        );
        let b = canonical_key(
            "GET",
            "https://api.example.com/v3/videos?id=abc&key=OTHER&part=snippet",
        );
        assert_eq!(a, b);
        assert!(!a.contains("SECRET"));
        assert!(a.starts_with("GET https://api.example.com/v3/videos?"));
    }

    #[test]
    fn canonical_key_encodes_values_stably() {
        let a = canonical_key("GET", "https://e.com/s?q=photoshop%20free%20crack");
        let b = canonical_key("GET", "https://e.com/s?q=photoshop+free+crack");
        assert_eq!(a, b);
    }

    #[test]
    fn replay_miss_is_an_error() {
        let fetcher = ReplayFetcher::new(Arc::new(FixtureStore::new()));
        let err = fetcher
            .fetch(&HttpRequest::get("https://example.com/x"))
            .unwrap_err();
        assert!(matches!(err, FetchError::FixtureMiss { .. }));
    }

    #[test]
    fn replay_returns_recorded_entry() {
        let mut store = FixtureStore::new();
        store.insert(FixtureEntry {
            key: canonical_key("GET", "https://example.com/a?z=1&a=2"),
            status: 200,
            headers: vec![("content-type".into(), "text/html".into())],
            body: "hello".into(),
        });
        let fetcher = ReplayFetcher::new(Arc::new(store));
        let resp = fetcher
            .fetch(&HttpRequest::get("https://example.com/a?a=2&z=1"))
            .unwrap();
        assert_eq!(resp.status, 200);
        assert_eq!(resp.body, "hello");
        assert_eq!(resp.header("Content-Type"), Some("text/html"));
    }

    #[test]
    fn status_zero_replays_as_transport_failure() {
        let mut store = FixtureStore::new();
        store.insert(FixtureEntry {
            key: canonical_key("GET", "https://down.example.com/"),
            status: 0,
            headers: Vec::new(),
            body: "connection refused".into(),
        });
        let fetcher = ReplayFetcher::new(Arc::new(store));
        let err = fetcher
            .fetch(&HttpRequest::get("https://down.example.com/"))
            .unwrap_err();
        assert!(matches!(err, FetchError::Transport { .. }));
    }

    #[test]
    fn fixture_file_round_trips() {
        let mut store = FixtureStore::new();
        store.insert(FixtureEntry {
            key: "GET https://example.com/1".into(),
            status: 200,
            headers: vec![("server".into(), "cloudflare".into())],
            body: "{}".into(),
        });
        store.insert(FixtureEntry {
            key: "GET https://example.com/2".into(),
            status: 404,
            headers: Vec::new(),
            body: "".into(),
        });
        let json = store.to_json_string();
        let reloaded = FixtureStore::from_json_str(&json).unwrap();
        assert_eq!(reloaded.len(), 2);
        assert_eq!(
            reloaded.lookup("GET https://example.com/1").unwrap().body,
            "{}"
        );
        assert_eq!(reloaded.to_json_string(), json);
    }

    #[test]
    fn recorder_captures_pass_through_traffic() {
        let mut store = FixtureStore::new();
        store.insert(FixtureEntry {
            key: canonical_key("GET", "https://example.com/page"),
            status: 200,
            headers: Vec::new(),
            body: "body".into(),
        });
        let recorder = RecordingFetcher::new(Arc::new(ReplayFetcher::new(Arc::new(store))));
        recorder
            .fetch(&HttpRequest::get("https://example.com/page"))
            .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("capture.json");
        assert_eq!(recorder.write_to(&path).unwrap(), 1);
        let reloaded = FixtureStore::load(&path).unwrap();
        assert_eq!(reloaded.len(), 1);
    }
}
