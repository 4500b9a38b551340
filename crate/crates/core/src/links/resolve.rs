//! Redirect-chain resolution.
//!
//! Follows HTTP 3xx and HTML meta-refresh hops, expands community-post
//! hops by extracting the URLs embedded in the fetched post body, and
//! stops at a terminal fetch, a fetch failure, or the hop cap. The fetcher
//! reads headers plus a bounded body prefix only; payload bodies are never
//! pulled.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::extract::{extract_urls, ExtractedUrl, UrlOrigin};
use super::hosts::{
    classify_host, community_post_id, is_community_post_url, HostClass, HostTable, WhoisResolver,
};
use crate::http::{FetchError, HttpFetcher, HttpRequest, HttpResponse};

#[derive(Debug, Error)]
pub enum LinkError {
    #[error("fetcher unavailable: {0}")]
    FetcherUnavailable(String),
}

/// How one hop was resolved. Exactly the last hop of a chain is Terminal
/// or Unresolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    HttpRedirect,
    HtmlMetaRefresh,
    PostEmbedded,
    Terminal,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hop {
    pub url: String,
    pub resolution: Resolution,
    /// URLs found in a community-post body; the first one continues the
    /// chain, all of them are kept as evidence.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub embedded_urls: Vec<String>,
}

/// An origin URL with its ordered resolution hops and classified terminal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkChain {
    pub origin: ExtractedUrl,
    pub hops: Vec<Hop>,
    pub terminal_class: HostClass,
    pub resolved_at: DateTime<Utc>,
}

impl LinkChain {
    /// URL of the last hop.
    pub fn terminal_url(&self) -> &str {
        &self.hops.last().expect("chains have at least one hop").url
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ResolveOptions {
    pub max_hops: usize,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        Self { max_hops: 10 }
    }
}

fn redirect_target(current: &str, response: &HttpResponse) -> Option<String> {
    if !response.is_redirect() {
        return None;
    }
    let location = response.header("location")?;
    match url::Url::parse(current).and_then(|base| base.join(location)) {
        Ok(joined) => Some(joined.to_string()),
        Err(_) => Some(location.to_string()),
    }
}

/// Finds `<meta http-equiv="refresh" content="N;url=...">` targets in an
/// HTML body prefix, tolerant of attribute order, quoting, and case.
fn meta_refresh_target(current: &str, body: &str) -> Option<String> {
    let lower = body.to_lowercase();
    let mut from = 0;
    while let Some(pos) = lower[from..].find("<meta") {
        let start = from + pos;
        let end = lower[start..].find('>').map(|e| start + e)?;
        let tag = &lower[start..end];
        if tag.contains("http-equiv") && tag.contains("refresh") {
            if let Some(content_pos) = tag.find("content") {
                let rest = &body[start + content_pos..end];
                let quote_start = rest.find(['"', '\''])?;
                let quote = rest.as_bytes()[quote_start] as char;
                let inner = &rest[quote_start + 1..];
                let quote_end = inner.find(quote)?;
                let content = &inner[..quote_end];
                for part in content.split(';') {
                    let part = part.trim();
                    if let Some(target) = part
                        .strip_prefix("url=")
                        .or_else(|| part.strip_prefix("URL="))
                        .or_else(|| part.strip_prefix("Url="))
                    {
                        let target = target.trim_matches(['"', '\'', ' ']);
                        return match url::Url::parse(current).and_then(|b| b.join(target)) {
                            Ok(joined) => Some(joined.to_string()),
                            Err(_) => Some(target.to_string()),
                        };
                    }
                }
            }
        }
        from = end;
    }
    None
}

/// Resolves the chain starting at `start.url`, spending at most
/// `options.max_hops` fetches. Fixture misses abort (the fixture is
/// incomplete); transport failures end the chain as Unresolved.
pub fn resolve_chain(
    start: &ExtractedUrl,
    options: ResolveOptions,
    fetcher: &dyn HttpFetcher,
    table: &HostTable,
    whois: &dyn WhoisResolver,
    resolved_at: DateTime<Utc>,
) -> Result<LinkChain, LinkError> {
    assert!(options.max_hops >= 1, "max_hops must be at least 1");
    let mut hops: Vec<Hop> = Vec::new();
    let mut current = start.url.clone();
    let mut terminal_headers: Option<Vec<(String, String)>> = None;

    for hop_index in 0..options.max_hops {
        let last_allowed = hop_index + 1 == options.max_hops;
        let response = match fetcher.fetch(&HttpRequest::get(current.clone())) {
            Ok(r) => r,
            Err(FetchError::FixtureMiss { key }) => {
                return Err(LinkError::FetcherUnavailable(key))
            }
            Err(FetchError::FixtureFile(msg)) => return Err(LinkError::FetcherUnavailable(msg)),
            Err(FetchError::Transport { .. }) => {
                hops.push(Hop {
                    url: current.clone(),
                    resolution: Resolution::Unresolved,
                    embedded_urls: Vec::new(),
                });
                break;
            }
        };

        if let Some(next) = redirect_target(&current, &response) {
            if last_allowed {
                hops.push(Hop {
                    url: current.clone(),
                    resolution: Resolution::Unresolved,
                    embedded_urls: Vec::new(),
                });
                break;
            }
            hops.push(Hop {
                url: current.clone(),
                resolution: Resolution::HttpRedirect,
                embedded_urls: Vec::new(),
            });
            current = next;
            continue;
        }

        if is_community_post_url(&current) {
            let post_id = community_post_id(&current).unwrap_or_else(|| current.clone());
            let embedded: Vec<String> = extract_urls(
                &response.body,
                UrlOrigin::CommunityPost,
                &post_id,
                None,
                table,
            )
            .into_iter()
            .map(|e| e.url)
            .filter(|u| u != &current)
            .collect();
            if embedded.is_empty() {
                // A post with no outbound link is the end of the road.
                hops.push(Hop {
                    url: current.clone(),
                    resolution: Resolution::Terminal,
                    embedded_urls: Vec::new(),
                });
                terminal_headers = Some(response.headers);
                break;
            }
            if last_allowed {
                hops.push(Hop {
                    url: current.clone(),
                    resolution: Resolution::Unresolved,
                    embedded_urls: embedded,
                });
                break;
            }
            let next = embedded[0].clone();
            hops.push(Hop {
                url: current.clone(),
                resolution: Resolution::PostEmbedded,
                embedded_urls: embedded,
            });
            current = next;
            continue;
        }

        if let Some(next) = meta_refresh_target(&current, &response.body) {
            if last_allowed {
                hops.push(Hop {
                    url: current.clone(),
                    resolution: Resolution::Unresolved,
                    embedded_urls: Vec::new(),
                });
                break;
            }
            hops.push(Hop {
                url: current.clone(),
                resolution: Resolution::HtmlMetaRefresh,
                embedded_urls: Vec::new(),
            });
            current = next;
            continue;
        }

        hops.push(Hop {
            url: current.clone(),
            resolution: Resolution::Terminal,
            embedded_urls: Vec::new(),
        });
        terminal_headers = Some(response.headers);
        break;
    }

    let terminal_url = hops.last().expect("at least one hop").url.clone();
    let terminal_class = classify_host(
        &terminal_url,
        terminal_headers.as_deref(),
        whois,
        table,
    );

    Ok(LinkChain {
        origin: start.clone(),
        hops,
        terminal_class,
        resolved_at,
    })
}
