//! URL extraction, redirect-chain resolution, terminal-host
//! classification, and redirection-hub detection.

mod extract;
mod hosts;
mod hubs;
mod resolve;

pub use extract::{extract_urls, ExtractedUrl, UrlOrigin};
pub use hosts::{
    classify_host, is_community_post_url, registrable_host, FixtureWhois, HostClass,
    HostClassKind, HostTable, LiveWhois, NullWhois, WhoisPrivacy, WhoisResolver,
};
pub use hubs::{detect_hubs, Hub};
pub use resolve::{resolve_chain, Hop, LinkChain, LinkError, Resolution, ResolveOptions};
