//! Scan orchestration: search, fetch, detect, resolve, score, persist.

use std::collections::BTreeSet;
use std::sync::Arc;

use chrono::{DateTime, Utc};
use thiserror::Error;

use crate::api::{ApiError, QuotaBudget, YouTubeClient};
use crate::detector::{detect_misrepresentation, score_video, ScanVerdict, ScoringConfig};
use crate::http::HttpFetcher;
use crate::lexicon::KeywordLexicon;
use crate::links::{
    extract_urls, resolve_chain, HostTable, LinkChain, LinkError, ResolveOptions, UrlOrigin,
    WhoisResolver,
};
use crate::model::VideoMetadata;
use crate::store::{ScanRecord, ScanStore, StoreError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Api(#[from] ApiError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Detector(#[from] crate::detector::DetectorError),
}

/// Everything a scan run needs besides the store and the queries.
pub struct ScanContext {
    pub client: YouTubeClient,
    pub link_fetcher: Arc<dyn HttpFetcher>,
    pub whois: Arc<dyn WhoisResolver>,
    pub lexicon: KeywordLexicon,
    pub scoring: ScoringConfig,
    pub hosts: HostTable,
    pub budget: Arc<QuotaBudget>,
    pub settings: ScanSettings,
}

#[derive(Debug, Clone)]
pub struct ScanSettings {
    pub published_after: DateTime<Utc>,
    pub relevance_language: String,
    pub max_hops: usize,
    pub parallelism: usize,
    /// Probe per-language display text when the localizations part comes
    /// back empty. Costs one list call per probe language per video.
    pub probe_fallback: bool,
    pub probe_languages: Vec<String>,
    /// Fetch channel history for videos with bait evidence (extra quota).
    pub channel_checks: bool,
    /// Fetch one best-effort page of comments per video (extra quota).
    pub comment_checks: bool,
    /// Timestamp recorded on every record of the run; defaults to now.
    /// Pin it for reproducible stores.
    pub scanned_at: Option<DateTime<Utc>>,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            published_after: "2025-01-01T00:00:00Z".parse().expect("static timestamp"),
            relevance_language: "en".to_string(),
            max_hops: 10,
            parallelism: 4,
            probe_fallback: false,
            probe_languages: default_probe_languages(),
            channel_checks: false,
            comment_checks: false,
            scanned_at: None,
        }
    }
}

pub fn default_probe_languages() -> Vec<String> {
    ["en", "es", "pt", "ru", "hi", "ar", "fr", "de"]
        .into_iter()
        .map(String::from)
        .collect()
}

/// One flagged video in the run summary.
#[derive(Debug, Clone, PartialEq)]
pub struct FlaggedVideo {
    pub video_id: String,
    pub verdict: crate::detector::Verdict,
    pub score: f64,
    pub categories: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanSummary {
    pub scan_id: u64,
    pub queries: usize,
    pub videos_scanned: usize,
    pub missing_ids: Vec<String>,
    pub flagged: Vec<FlaggedVideo>,
    pub quota_spent: u64,
}

/// Builds the query list the way the original measurement did: every
/// product name variant crossed with every bait term.
pub fn cartesian_queries(lexicon: &KeywordLexicon) -> Vec<String> {
    let mut queries = Vec::new();
    for (_, variants) in lexicon.product_names() {
        for variant in variants {
            for bait in lexicon.bait_terms() {
                queries.push(format!("{variant} {bait}"));
            }
        }
    }
    queries
}

impl ScanContext {
    /// Runs the full pipeline for `queries` and persists one record per
    /// scanned video under a fresh scan id.
    pub fn run_scan(
        &self,
        store: &mut ScanStore,
        queries: &[String],
    ) -> Result<ScanSummary, PipelineError> {
        let scan_id = store.next_scan_id();
        let scanned_at = self.settings.scanned_at.unwrap_or_else(Utc::now);

        // Search all queries, de-duplicating ids across them in first-seen
        // order so metadata batches stay deterministic.
        let mut ids: Vec<String> = Vec::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for query in queries {
            let found = self.client.search_videos(
                query,
                self.settings.published_after,
                &self.settings.relevance_language,
                &self.budget,
            )?;
            for id in found {
                if seen.insert(id.clone()) {
                    ids.push(id);
                }
            }
        }

        let mut summary = ScanSummary {
            scan_id,
            queries: queries.len(),
            ..ScanSummary::default()
        };
        if ids.is_empty() {
            summary.quota_spent = self.budget.spent();
            return Ok(summary);
        }

        let mut fetched = self.client.fetch_video_metadata(&ids, &self.budget)?;
        summary.missing_ids = std::mem::take(&mut fetched.missing);

        if self.settings.probe_fallback {
            for meta in fetched.records.iter_mut() {
                if meta.localizations.is_empty() {
                    let probed = self.client.probe_localizations(
                        meta,
                        &self.settings.probe_languages,
                        &self.budget,
                    )?;
                    meta.localizations.extend(probed);
                }
            }
        }

        let results = self.scan_videos(&fetched.records, scanned_at)?;

        for (meta, verdict, chains) in results {
            if verdict.is_flagged() {
                summary.flagged.push(FlaggedVideo {
                    video_id: verdict.video_id.clone(),
                    verdict: verdict.verdict,
                    score: verdict.score,
                    categories: verdict.matched_categories(),
                });
            }
            store.persist(&ScanRecord {
                scan_id,
                scanned_at,
                verdict,
                metadata_snapshot: meta,
                chains,
            })?;
            summary.videos_scanned += 1;
        }
        summary.flagged.sort_by(|a, b| a.video_id.cmp(&b.video_id));
        summary.quota_spent = self.budget.spent();
        Ok(summary)
    }

    /// Detects, resolves, and scores a batch of videos with bounded
    /// parallelism. Result order follows input order.
    fn scan_videos(
        &self,
        videos: &[VideoMetadata],
        scanned_at: DateTime<Utc>,
    ) -> Result<Vec<(VideoMetadata, ScanVerdict, Vec<LinkChain>)>, PipelineError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.settings.parallelism.max(1))
            .build()
            .expect("scan thread pool");
        let outcomes: Vec<Result<_, PipelineError>> = pool.install(|| {
            use rayon::prelude::*;
            videos
                .par_iter()
                .map(|meta| self.scan_one(meta, scanned_at))
                .collect()
        });
        let mut results = Vec::with_capacity(outcomes.len());
        for outcome in outcomes {
            results.push(outcome?);
        }
        Ok(results)
    }

    fn scan_one(
        &self,
        meta: &VideoMetadata,
        scanned_at: DateTime<Utc>,
    ) -> Result<(VideoMetadata, ScanVerdict, Vec<LinkChain>), PipelineError> {
        let finding = detect_misrepresentation(meta, &self.lexicon);

        let comments = if self.settings.comment_checks {
            // Best effort by contract: no comment endpoint coverage in a
            // fixture (or a rejected live call) just means no comments.
            self.client
                .fetch_comments_page(&meta.video_id, &self.budget)
                .unwrap_or_default()
        } else {
            Vec::new()
        };

        let mut urls = Vec::new();
        urls.extend(extract_urls(
            &meta.default_snippet.description,
            UrlOrigin::Description,
            &meta.video_id,
            Some(meta.default_language_tag()),
            &self.hosts,
        ));
        for (tag, text) in &meta.localizations {
            urls.extend(extract_urls(
                &text.description,
                UrlOrigin::Description,
                &meta.video_id,
                Some(tag),
                &self.hosts,
            ));
        }
        for comment in &comments {
            urls.extend(extract_urls(
                comment,
                UrlOrigin::Comment,
                &meta.video_id,
                None,
                &self.hosts,
            ));
        }
        urls.sort_by(|a, b| a.url.cmp(&b.url));
        urls.dedup_by(|a, b| a.url == b.url);

        let mut chains = Vec::with_capacity(urls.len());
        for url in &urls {
            chains.push(resolve_chain(
                url,
                ResolveOptions {
                    max_hops: self.settings.max_hops,
                },
                self.link_fetcher.as_ref(),
                &self.hosts,
                self.whois.as_ref(),
                scanned_at,
            )?);
        }

        let channel = if self.settings.channel_checks && self.has_bait_signal(meta, &finding) {
            self.client
                .fetch_channel(&meta.channel_id, &self.budget, true)?
        } else {
            None
        };

        let verdict = score_video(
            meta,
            finding,
            &comments,
            channel.as_ref(),
            &chains,
            &self.lexicon,
            &self.scoring,
        )?;
        Ok((meta.clone(), verdict, chains))
    }

    /// Channel lookups are spent only on videos already showing bait
    /// somewhere.
    fn has_bait_signal(
        &self,
        meta: &VideoMetadata,
        finding: &Option<crate::detector::MisrepresentationFinding>,
    ) -> bool {
        finding.is_some()
            || crate::text::match_fields(
                [
                    meta.default_snippet.title.as_str(),
                    meta.default_snippet.description.as_str(),
                ],
                &self.lexicon,
            )
            .has_bait_and_product()
    }
}
