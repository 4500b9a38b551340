//! Terminal-host classification tables and WHOIS privacy checks.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

/// Host tables compiled into the library; editable copies ship alongside
/// the lexicon and can be passed with `--hosts`.
pub const DEFAULT_HOSTS_TOML: &str = include_str!("../../data/hosts.toml");

/// Classification of a chain's terminal host, in table precedence order:
/// file-sharing table, then shortener table, then the community-post URL
/// shape, then Cloudflare fronting evidence from probe headers, then
/// CustomSite when headers were seen at all, else Unknown.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Hash,
)]
#[serde(rename_all = "snake_case")]
pub enum HostClassKind {
    FileSharing,
    Shortener,
    CommunityPost,
    CloudflareFronted,
    CustomSite,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WhoisPrivacy {
    Redacted,
    Public,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostClass {
    pub class: HostClassKind,
    pub host: String,
    pub whois_privacy: WhoisPrivacy,
}

#[derive(Debug, Deserialize, Serialize, Default)]
struct HostTableFile {
    #[serde(default)]
    file_sharing: Vec<String>,
    #[serde(default)]
    shorteners: Vec<String>,
    #[serde(default)]
    other_known: Vec<String>,
}

/// Editable domain tables: known file-sharing hosts, known shorteners, and
/// extra hosts that bare-domain extraction should recognize.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HostTable {
    file_sharing: BTreeSet<String>,
    shorteners: BTreeSet<String>,
    other_known: BTreeSet<String>,
}

impl HostTable {
    pub fn default_table() -> Self {
        Self::from_toml_str(DEFAULT_HOSTS_TOML).expect("embedded host table must be valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, String> {
        let raw = std::fs::read_to_string(path.as_ref())
            .map_err(|e| format!("read {}: {e}", path.as_ref().display()))?;
        Self::from_toml_str(&raw)
    }

    pub fn from_toml_str(raw: &str) -> Result<Self, String> {
        let file: HostTableFile = toml::from_str(raw).map_err(|e| e.to_string())?;
        let norm = |v: Vec<String>| -> BTreeSet<String> {
            v.into_iter()
                .map(|h| h.trim().trim_start_matches("www.").to_ascii_lowercase())
                .filter(|h| !h.is_empty())
                .collect()
        };
        Ok(Self {
            file_sharing: norm(file.file_sharing),
            shorteners: norm(file.shorteners),
            other_known: norm(file.other_known),
        })
    }

    pub fn is_file_sharing(&self, host: &str) -> bool {
        suffix_match(&self.file_sharing, host)
    }

    pub fn is_shortener(&self, host: &str) -> bool {
        suffix_match(&self.shorteners, host)
    }

    /// Every host any table knows about; drives bare-domain extraction.
    pub fn all_hosts(&self) -> impl Iterator<Item = &String> {
        self.file_sharing
            .iter()
            .chain(self.shorteners.iter())
            .chain(self.other_known.iter())
    }
}

/// True when `host` equals a table entry or is a subdomain of one.
fn suffix_match(table: &BTreeSet<String>, host: &str) -> bool {
    let host = host.trim_start_matches("www.");
    table
        .iter()
        .any(|entry| host == entry || host.ends_with(&format!(".{entry}")))
}

/// Lowercased host with any `www.` prefix stripped; the label the tables
/// and reports key on.
pub fn registrable_host(url: &str) -> Option<String> {
    let parsed = url::Url::parse(url).ok()?;
    let host = parsed.host_str()?.to_ascii_lowercase();
    Some(host.trim_start_matches("www.").to_string())
}

/// Community posts live under youtube.com `/post/<id>` (or a channel's
/// `/community` tab). No Data API endpoint serves them, so the resolver
/// fetches them as web pages.
pub fn is_community_post_url(url: &str) -> bool {
    let Ok(parsed) = url::Url::parse(url) else {
        return false;
    };
    let Some(host) = parsed.host_str().map(str::to_ascii_lowercase) else {
        return false;
    };
    let host = host.trim_start_matches("www.").trim_start_matches("m.");
    if host != "youtube.com" {
        return false;
    }
    let path = parsed.path();
    path.starts_with("/post/") || path.contains("/community")
}

/// Extracts the post id from a community-post URL, for provenance fields.
pub fn community_post_id(url: &str) -> Option<String> {
    let parsed = url::Url::parse(url).ok()?;
    let path = parsed.path();
    path.strip_prefix("/post/")
        .map(|rest| rest.trim_end_matches('/').to_string())
        .filter(|id| !id.is_empty())
}

const REDACTION_MARKERS: &[&str] = &[
    "redacted for privacy",
    "privacy protect",
    "whoisguard",
    "domains by proxy",
    "contact privacy",
    "withheld for privacy",
    "privacyguardian",
    "identity protection service",
    "data redacted",
];

pub trait WhoisResolver: Send + Sync {
    /// Raw WHOIS text for a registrable domain, or `None` when the
    /// resolver has nothing (offline, unrecorded, lookup failure).
    fn lookup(&self, domain: &str) -> Option<String>;
}

/// WHOIS answers from a recorded TOML map (`domain = "raw text"`).
#[derive(Debug, Default)]
pub struct FixtureWhois {
    records: BTreeMap<String, String>,
}

impl FixtureWhois {
    pub fn new(records: BTreeMap<String, String>) -> Self {
        Self { records }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, String> {
        let raw = std::fs::read_to_string(path.as_ref())
            .map_err(|e| format!("read {}: {e}", path.as_ref().display()))?;
        let records: BTreeMap<String, String> =
            toml::from_str(&raw).map_err(|e| e.to_string())?;
        Ok(Self::new(records))
    }
}

impl WhoisResolver for FixtureWhois {
    fn lookup(&self, domain: &str) -> Option<String> {
        self.records.get(domain).cloned()
    }
}

/// Resolver that never answers; classification degrades to Unknown.
pub struct NullWhois;

impl WhoisResolver for NullWhois {
    fn lookup(&self, _domain: &str) -> Option<String> {
        None
    }
}

/// Plain WHOIS-protocol lookups (TCP 43) through the IANA referral chain.
/// Best-effort: any failure is `None`.
pub struct LiveWhois {
    timeout: std::time::Duration,
}

impl LiveWhois {
    pub fn new(timeout: std::time::Duration) -> Self {
        Self { timeout }
    }

    fn query(&self, server: &str, domain: &str) -> Option<String> {
        use std::net::TcpStream;
        let addr = format!("{server}:43");
        let mut stream = TcpStream::connect(&addr).ok()?;
        stream.set_read_timeout(Some(self.timeout)).ok()?;
        stream.set_write_timeout(Some(self.timeout)).ok()?;
        stream.write_all(format!("{domain}\r\n").as_bytes()).ok()?;
        let mut out = String::new();
        stream.take(256 * 1024).read_to_string(&mut out).ok()?;
        Some(out)
    }
}

impl Default for LiveWhois {
    fn default() -> Self {
        Self::new(std::time::Duration::from_secs(10))
    }
}

impl WhoisResolver for LiveWhois {
    fn lookup(&self, domain: &str) -> Option<String> {
        let referral = self.query("whois.iana.org", domain)?;
        let server = referral
            .lines()
            .find_map(|line| {
                let line = line.trim();
                line.strip_prefix("whois:")
                    .or_else(|| line.strip_prefix("refer:"))
                    .map(|s| s.trim().to_string())
            })
            .filter(|s| !s.is_empty());
        match server {
            Some(server) => self.query(&server, domain),
            None => Some(referral),
        }
    }
}

fn whois_privacy(domain: &str, whois: &dyn WhoisResolver) -> WhoisPrivacy {
    match whois.lookup(domain) {
        None => WhoisPrivacy::Unknown,
        Some(raw) => {
            let lower = raw.to_lowercase();
            if REDACTION_MARKERS.iter().any(|m| lower.contains(m)) {
                WhoisPrivacy::Redacted
            } else {
                WhoisPrivacy::Public
            }
        }
    }
}

fn cloudflare_fronted(headers: &[(String, String)]) -> bool {
    headers.iter().any(|(k, v)| {
        k.eq_ignore_ascii_case("cf-ray")
            || (k.eq_ignore_ascii_case("server") && v.to_ascii_lowercase().contains("cloudflare"))
    })
}

/// Classifies a URL's host by the documented precedence. Total: every URL
/// gets exactly one class, degrading to Unknown without probe data.
pub fn classify_host(
    url: &str,
    probe_headers: Option<&[(String, String)]>,
    whois: &dyn WhoisResolver,
    table: &HostTable,
) -> HostClass {
    let host = match registrable_host(url) {
        Some(h) => h,
        None => {
            return HostClass {
                class: HostClassKind::Unknown,
                host: String::new(),
                whois_privacy: WhoisPrivacy::Unknown,
            }
        }
    };
    let class = if table.is_file_sharing(&host) {
        HostClassKind::FileSharing
    } else if table.is_shortener(&host) {
        HostClassKind::Shortener
    } else if is_community_post_url(url) {
        HostClassKind::CommunityPost
    } else if probe_headers.map(cloudflare_fronted).unwrap_or(false) {
        HostClassKind::CloudflareFronted
    } else if probe_headers.is_some() {
        HostClassKind::CustomSite
    } else {
        HostClassKind::Unknown
    };
    HostClass {
        class,
        whois_privacy: whois_privacy(&host, whois),
        host,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> HostTable {
        HostTable::default_table()
    }

    #[test]
    fn mediafire_download_url_is_file_sharing() {
        let class = classify_host(
            "https://www.mediafire.com/file/abc/setup.zip",
            None,
            &NullWhois,
            &table(),
        );
        assert_eq!(class.class, HostClassKind::FileSharing);
        assert_eq!(class.host, "mediafire.com");
        assert_eq!(class.whois_privacy, WhoisPrivacy::Unknown);
    }

    #[test]
    fn cloudflare_headers_with_redacted_whois() {
        let mut records = BTreeMap::new();
        records.insert(
            "free-soft-portal.net".to_string(),
            "Registrant Name: REDACTED FOR PRIVACY\nRegistrant Email: redacted".to_string(),
        );
        let whois = FixtureWhois::new(records);
        let headers = vec![
            ("server".to_string(), "cloudflare".to_string()),
            ("cf-ray".to_string(), "8f2-EWR".to_string()),
        ];
        let class = classify_host(
            "https://free-soft-portal.net/download",
            Some(&headers),
            &whois,
            &table(),
        );
        assert_eq!(class.class, HostClassKind::CloudflareFronted);
        assert_eq!(class.whois_privacy, WhoisPrivacy::Redacted);
    }

    #[test]
    fn no_probe_data_and_no_table_hit_is_unknown() {
        let class = classify_host("https://nowhere.example/x", None, &NullWhois, &table());
        assert_eq!(class.class, HostClassKind::Unknown);
    }

    #[test]
    fn headers_without_cf_markers_mean_custom_site() {
        let headers = vec![("server".to_string(), "nginx/1.24".to_string())];
        let class = classify_host(
            "https://selfhosted.example/dl",
            Some(&headers),
            &NullWhois,
            &table(),
        );
        assert_eq!(class.class, HostClassKind::CustomSite);
    }

    #[test]
    fn community_post_urls_are_recognized() {
        assert!(is_community_post_url(
            "https://www.youtube.com/post/UgkxAbCdEf"
        ));
        assert!(is_community_post_url(
            "https://youtube.com/channel/UCx/community?lb=Ugky"
        ));
        assert!(!is_community_post_url("https://www.youtube.com/watch?v=x"));
        assert!(!is_community_post_url("https://notyoutube.com/post/Ugkx"));
        assert_eq!(
            community_post_id("https://www.youtube.com/post/UgkxAbCdEf"),
            Some("UgkxAbCdEf".to_string())
        );
    }

    #[test]
    fn subdomains_match_tables() {
        let t = table();
        assert!(t.is_file_sharing("download1593.mediafire.com"));
        assert!(!t.is_file_sharing("mediafire.com.evil.net"));
    }

    #[test]
    fn whois_public_when_no_markers() {
        let mut records = BTreeMap::new();
        records.insert(
            "mediafire.com".to_string(),
            "Registrant Name: MediaFire LLC".to_string(),
        );
        let whois = FixtureWhois::new(records);
        assert_eq!(whois_privacy("mediafire.com", &whois), WhoisPrivacy::Public);
        assert_eq!(whois_privacy("other.com", &whois), WhoisPrivacy::Unknown);
    }
}
