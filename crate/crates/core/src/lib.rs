//! Scanner library for YouTube malware-distribution campaigns.
//!
//! The scanner searches for videos that advertise cracked software or game
//! cheats, diffs each video's default-language metadata against its
//! per-language localizations to catch benign-default/malicious-localized
//! mismatches, resolves redirect chains behind embedded links, and
//! aggregates verdicts into campaign reports. Every network-facing piece
//! runs against record/replay fixtures so the whole pipeline is testable
//! offline.

pub mod api;
pub mod detector;
pub mod http;
pub mod lexicon;
pub mod links;
pub mod model;
pub mod pipeline;
pub mod store;
pub mod text;

pub use detector::{
    detect_misrepresentation, score_video, Evidence, MisrepresentationFinding, ScanVerdict,
    ScoringConfig, Verdict,
};
pub use lexicon::KeywordLexicon;
pub use links::{
    classify_host, detect_hubs, extract_urls, resolve_chain, ExtractedUrl, HostClass,
    HostClassKind, HostTable, LinkChain, UrlOrigin,
};
pub use model::{ChannelRecord, LocalizedText, MatchResult, VideoMetadata, ViewStats};
pub use store::{aggregate_report, diff_runs, AggregateReport, ScanRecord, ScanStore};
pub use text::{match_keywords, normalize_text};
