//! Misrepresentation detection and verdict scoring.
//!
//! The central check: a video whose default-language metadata matches no
//! bait terms and no product names, while at least one localization
//! matches both, is hiding its pitch from default-language scanners. That
//! finding is fused with testimonial, engagement, channel, password-marker,
//! and link signals into a weighted score and a verdict class.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::KeywordLexicon;
use crate::links::{HostClassKind, LinkChain};
use crate::model::{ChannelRecord, MatchResult, VideoMetadata};
use crate::text::match_fields;

/// Scoring knobs compiled into the library; override with `--weights`.
pub const DEFAULT_WEIGHTS_TOML: &str = include_str!("../data/weights.toml");

#[derive(Debug, Error)]
pub enum DetectorError {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("failed to read scoring config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse scoring config: {0}")]
    Parse(String),
}

/// Evidence that default metadata is benign while localized metadata is
/// bait-laden.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisrepresentationFinding {
    pub video_id: String,
    /// Languages whose text matched zero bait terms and zero product names
    /// (always includes the default language).
    pub benign_languages: BTreeSet<String>,
    /// Languages with bait or product matches, with what matched.
    pub flagged_languages: BTreeMap<String, MatchResult>,
    pub default_is_benign: bool,
}

/// Verdict classes, benign to worst.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Benign,
    Suspicious,
    MaliciousPlain,
    MaliciousMultilingual,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Benign => "benign",
            Verdict::Suspicious => "suspicious",
            Verdict::MaliciousPlain => "malicious-plain",
            Verdict::MaliciousMultilingual => "malicious-multilingual",
        };
        f.write_str(s)
    }
}

/// One tagged evidence item feeding the score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Misrepresentation { finding: MisrepresentationFinding },
    /// Bait and product matches in the default-language metadata itself:
    /// the undisguised variant of the scheme.
    DefaultLanguageBait { matches: MatchResult },
    Testimonials { phrases: BTreeSet<String> },
    EngagementAnomaly {
        like_view_ratio: Option<f64>,
        comment_view_ratio: Option<f64>,
    },
    ChannelAnomaly {
        dormancy_days: i64,
        burst_uploads: u32,
    },
    PasswordMarkers {
        markers: BTreeSet<String>,
        languages: BTreeSet<String>,
    },
    RiskyLink {
        url: String,
        host: String,
        class: HostClassKind,
    },
}

impl Evidence {
    fn sort_rank(&self) -> (u8, String) {
        match self {
            Evidence::Misrepresentation { .. } => (0, String::new()),
            Evidence::DefaultLanguageBait { .. } => (1, String::new()),
            Evidence::Testimonials { .. } => (2, String::new()),
            Evidence::EngagementAnomaly { .. } => (3, String::new()),
            Evidence::ChannelAnomaly { .. } => (4, String::new()),
            Evidence::PasswordMarkers { .. } => (5, String::new()),
            Evidence::RiskyLink { url, .. } => (6, url.clone()),
        }
    }
}

/// Composite result for one video.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanVerdict {
    pub video_id: String,
    pub verdict: Verdict,
    pub score: f64,
    pub evidence: Vec<Evidence>,
}

impl ScanVerdict {
    pub fn finding(&self) -> Option<&MisrepresentationFinding> {
        self.evidence.iter().find_map(|e| match e {
            Evidence::Misrepresentation { finding } => Some(finding),
            _ => None,
        })
    }

    pub fn is_flagged(&self) -> bool {
        self.verdict != Verdict::Benign
    }

    /// Product categories implicated by the evidence, across all flagged
    /// languages and the default-language matches.
    pub fn matched_categories(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for item in &self.evidence {
            match item {
                Evidence::Misrepresentation { finding } => {
                    for matches in finding.flagged_languages.values() {
                        out.extend(matches.matched_products.keys().cloned());
                    }
                }
                Evidence::DefaultLanguageBait { matches } => {
                    out.extend(matches.matched_products.keys().cloned());
                }
                _ => {}
            }
        }
        out
    }
}

/// Per-signal weights. The score is the clamped sum of the weights of the
/// evidence items present.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Weights {
    pub misrepresentation: f64,
    pub default_bait: f64,
    pub testimonial: f64,
    pub engagement: f64,
    pub channel: f64,
    pub password_marker: f64,
    pub risky_link: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Self {
            misrepresentation: 0.6,
            default_bait: 0.5,
            testimonial: 0.1,
            engagement: 0.05,
            channel: 0.1,
            password_marker: 0.05,
            risky_link: 0.1,
        }
    }
}

impl Weights {
    fn of(&self, evidence: &Evidence) -> f64 {
        match evidence {
            Evidence::Misrepresentation { .. } => self.misrepresentation,
            Evidence::DefaultLanguageBait { .. } => self.default_bait,
            Evidence::Testimonials { .. } => self.testimonial,
            Evidence::EngagementAnomaly { .. } => self.engagement,
            Evidence::ChannelAnomaly { .. } => self.channel,
            Evidence::PasswordMarkers { .. } => self.password_marker,
            Evidence::RiskyLink { .. } => self.risky_link,
        }
    }

    fn validate(&self) -> Result<(), DetectorError> {
        let all = [
            ("misrepresentation", self.misrepresentation),
            ("default_bait", self.default_bait),
            ("testimonial", self.testimonial),
            ("engagement", self.engagement),
            ("channel", self.channel),
            ("password_marker", self.password_marker),
            ("risky_link", self.risky_link),
        ];
        for (name, w) in all {
            if !w.is_finite() || w < 0.0 {
                return Err(DetectorError::InvalidWeights(format!(
                    "{name} = {w} (weights must be finite and non-negative)"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    pub suspicious: f64,
    pub malicious: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            suspicious: 0.1,
            malicious: 0.6,
        }
    }
}

/// Engagement anomaly bounds: ratios above either bound look inflated.
/// Config-only signal, never sufficient for a malicious verdict alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngagementBounds {
    pub max_like_view_ratio: f64,
    pub max_comment_view_ratio: f64,
}

impl Default for EngagementBounds {
    fn default() -> Self {
        Self {
            max_like_view_ratio: 0.5,
            max_comment_view_ratio: 0.2,
        }
    }
}

/// Dormancy-then-burst channel bounds: a gap of at least `dormancy_days`
/// followed by `burst_count` uploads inside `burst_window_days`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelBounds {
    pub dormancy_days: i64,
    pub burst_count: u32,
    pub burst_window_days: i64,
}

impl Default for ChannelBounds {
    fn default() -> Self {
        Self {
            dormancy_days: 365,
            burst_count: 3,
            burst_window_days: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScoringConfig {
    pub weights: Weights,
    pub thresholds: Thresholds,
    pub engagement: EngagementBounds,
    pub channel: ChannelBounds,
    /// Terminal host classes that count as risky link evidence.
    pub risky_host_classes: BTreeSet<HostClassKind>,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        Self {
            weights: Weights::default(),
            thresholds: Thresholds::default(),
            engagement: EngagementBounds::default(),
            channel: ChannelBounds::default(),
            risky_host_classes: [HostClassKind::FileSharing, HostClassKind::CloudflareFronted]
                .into_iter()
                .collect(),
        }
    }
}

impl ScoringConfig {
    pub fn default_config() -> Self {
        Self::from_toml_str(DEFAULT_WEIGHTS_TOML).expect("embedded scoring config must be valid")
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self, DetectorError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|source| DetectorError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&raw)
    }

    pub fn from_toml_str(raw: &str) -> Result<Self, DetectorError> {
        let config: ScoringConfig =
            toml::from_str(raw).map_err(|e| DetectorError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), DetectorError> {
        self.weights.validate()?;
        for (name, t) in [
            ("suspicious", self.thresholds.suspicious),
            ("malicious", self.thresholds.malicious),
        ] {
            if !t.is_finite() || t < 0.0 {
                return Err(DetectorError::InvalidWeights(format!(
                    "threshold {name} = {t} (must be finite and non-negative)"
                )));
            }
        }
        Ok(())
    }
}

/// Per-language match results over every text the tag owns (the default
/// snippet counts toward its own tag alongside any same-tag localization).
fn per_language_matches(
    meta: &VideoMetadata,
    lexicon: &KeywordLexicon,
) -> BTreeMap<String, MatchResult> {
    let mut by_tag: BTreeMap<String, MatchResult> = BTreeMap::new();
    let default_tag = meta.default_language_tag().to_string();
    by_tag.insert(
        default_tag.clone(),
        match_fields(
            [
                meta.default_snippet.title.as_str(),
                meta.default_snippet.description.as_str(),
            ],
            lexicon,
        ),
    );
    for (tag, text) in &meta.localizations {
        let matches = match_fields([text.title.as_str(), text.description.as_str()], lexicon);
        by_tag.entry(tag.clone()).or_default().merge(matches);
    }
    by_tag
}

/// Decides whether `meta` exhibits multilingual misrepresentation: default
/// metadata clean of bait and products, and at least one localization
/// matching a bait term and a product name together. Pure; independent of
/// map iteration order.
pub fn detect_misrepresentation(
    meta: &VideoMetadata,
    lexicon: &KeywordLexicon,
) -> Option<MisrepresentationFinding> {
    let default_matches = match_fields(
        [
            meta.default_snippet.title.as_str(),
            meta.default_snippet.description.as_str(),
        ],
        lexicon,
    );
    if !default_matches.clean_of_bait_and_products() {
        return None;
    }
    if meta.localizations.is_empty() {
        return None;
    }

    let by_tag = per_language_matches(meta, lexicon);
    let mut benign_languages = BTreeSet::new();
    let mut flagged_languages = BTreeMap::new();
    let mut conjunction_hit = false;
    for (tag, matches) in by_tag {
        if matches.clean_of_bait_and_products() {
            benign_languages.insert(tag);
        } else {
            conjunction_hit |= matches.has_bait_and_product();
            flagged_languages.insert(tag, matches);
        }
    }

    if !conjunction_hit {
        return None;
    }
    Some(MisrepresentationFinding {
        video_id: meta.video_id.clone(),
        benign_languages,
        flagged_languages,
        default_is_benign: true,
    })
}

fn engagement_anomaly(
    meta: &VideoMetadata,
    bounds: &EngagementBounds,
) -> Option<(Option<f64>, Option<f64>)> {
    let views = meta.statistics.view_count;
    if views == 0 {
        return None;
    }
    let like_ratio = meta
        .statistics
        .like_count
        .map(|l| l as f64 / views as f64);
    let comment_ratio = meta
        .statistics
        .comment_count
        .map(|c| c as f64 / views as f64);
    let anomalous = like_ratio.map_or(false, |r| r > bounds.max_like_view_ratio)
        || comment_ratio.map_or(false, |r| r > bounds.max_comment_view_ratio);
    anomalous.then_some((like_ratio, comment_ratio))
}

/// Dormancy-then-burst: a quiet stretch of at least `dormancy_days`
/// (counting from channel creation too), then at least `burst_count`
/// uploads within `burst_window_days` of the first post-gap upload.
fn channel_anomaly(channel: &ChannelRecord, bounds: &ChannelBounds) -> Option<(i64, u32)> {
    if channel.recent_uploads.is_empty() {
        return None;
    }
    let mut timeline = Vec::with_capacity(channel.recent_uploads.len() + 1);
    timeline.push(channel.created_at);
    timeline.extend(channel.recent_uploads.iter().copied());
    timeline.sort();

    for gap_end in (1..timeline.len()).rev() {
        let gap_days = (timeline[gap_end] - timeline[gap_end - 1]).num_days();
        if gap_days < bounds.dormancy_days {
            continue;
        }
        let burst_start = timeline[gap_end];
        let window_end = burst_start + chrono::Duration::days(bounds.burst_window_days);
        let burst = timeline[gap_end..]
            .iter()
            .take_while(|t| **t <= window_end)
            .count() as u32;
        if burst >= bounds.burst_count {
            return Some((gap_days, burst));
        }
    }
    None
}

fn password_marker_evidence(
    meta: &VideoMetadata,
    lexicon: &KeywordLexicon,
) -> Option<(BTreeSet<String>, BTreeSet<String>)> {
    let mut markers = BTreeSet::new();
    let mut languages = BTreeSet::new();
    for (tag, matches) in per_language_matches(meta, lexicon) {
        if !matches.matched_password_markers.is_empty() {
            markers.extend(matches.matched_password_markers);
            languages.insert(tag);
        }
    }
    (!markers.is_empty()).then_some((markers, languages))
}

/// Assembles the evidence bundle for one video and derives score and
/// verdict. Pure in all inputs; permuting comments, chains, or
/// localizations cannot change the outcome.
#[allow(clippy::too_many_arguments)]
pub fn score_video(
    meta: &VideoMetadata,
    finding: Option<MisrepresentationFinding>,
    comment_texts: &[String],
    channel: Option<&ChannelRecord>,
    link_evidence: &[LinkChain],
    lexicon: &KeywordLexicon,
    config: &ScoringConfig,
) -> Result<ScanVerdict, DetectorError> {
    config.validate()?;
    let mut evidence: Vec<Evidence> = Vec::new();

    let has_finding = finding.is_some();
    if let Some(finding) = finding {
        evidence.push(Evidence::Misrepresentation { finding });
    }

    let default_matches = match_fields(
        [
            meta.default_snippet.title.as_str(),
            meta.default_snippet.description.as_str(),
        ],
        lexicon,
    );
    let default_dirty = default_matches.has_bait_and_product();
    if default_dirty {
        evidence.push(Evidence::DefaultLanguageBait {
            matches: default_matches,
        });
    }

    let mut testimonial_hits = BTreeSet::new();
    for comment in comment_texts {
        testimonial_hits.extend(crate::text::match_keywords(comment, lexicon).matched_testimonials);
    }
    if !testimonial_hits.is_empty() {
        evidence.push(Evidence::Testimonials {
            phrases: testimonial_hits,
        });
    }

    if let Some((like_view_ratio, comment_view_ratio)) =
        engagement_anomaly(meta, &config.engagement)
    {
        evidence.push(Evidence::EngagementAnomaly {
            like_view_ratio,
            comment_view_ratio,
        });
    }

    if let Some((dormancy_days, burst_uploads)) =
        channel.and_then(|c| channel_anomaly(c, &config.channel))
    {
        evidence.push(Evidence::ChannelAnomaly {
            dormancy_days,
            burst_uploads,
        });
    }

    if let Some((markers, languages)) = password_marker_evidence(meta, lexicon) {
        evidence.push(Evidence::PasswordMarkers { markers, languages });
    }

    let mut risky: Vec<(String, String, HostClassKind)> = link_evidence
        .iter()
        .filter(|chain| config.risky_host_classes.contains(&chain.terminal_class.class))
        .map(|chain| {
            (
                chain.terminal_url().to_string(),
                chain.terminal_class.host.clone(),
                chain.terminal_class.class,
            )
        })
        .collect();
    risky.sort();
    risky.dedup();
    for (url, host, class) in risky {
        evidence.push(Evidence::RiskyLink { url, host, class });
    }

    evidence.sort_by(|a, b| a.sort_rank().cmp(&b.sort_rank()));

    let raw: f64 = evidence.iter().map(|e| config.weights.of(e)).sum();
    let score = raw.clamp(0.0, 1.0);

    let other_items = evidence.len() - usize::from(has_finding) - usize::from(default_dirty);
    let verdict = if has_finding && score >= config.thresholds.malicious {
        Verdict::MaliciousMultilingual
    } else if default_dirty && other_items >= 1 && score >= config.thresholds.malicious {
        Verdict::MaliciousPlain
    } else if !evidence.is_empty() && score >= config.thresholds.suspicious {
        Verdict::Suspicious
    } else {
        Verdict::Benign
    };

    Ok(ScanVerdict {
        video_id: meta.video_id.clone(),
        verdict,
        score,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::LexiconBuilder;
    use crate::links::{ExtractedUrl, HostClass, Hop, Resolution, UrlOrigin, WhoisPrivacy};
    use crate::model::{LocalizedText, ViewStats};
    use chrono::{TimeZone, Utc};

    fn lexicon() -> KeywordLexicon {
        LexiconBuilder::new()
            .bait(["free", "download", "crack"])
            .products("Adobe Photoshop", ["photoshop", "adobe photoshop"])
            .products("Roblox", ["roblox"])
            .testimonials(["works like a charm!", "100% legit", "it worked! thanks!"])
            .password_markers(["password", "pass:"])
            .build()
            .unwrap()
    }

    fn meta_with(
        default_language: Option<&str>,
        title: &str,
        description: &str,
        locs: &[(&str, &str, &str)],
        stats: ViewStats,
    ) -> VideoMetadata {
        VideoMetadata::new(
            "vid01",
            "chan01",
            Utc.with_ymd_and_hms(2025, 3, 1, 0, 0, 0).unwrap(),
            default_language,
            title,
            description,
            locs.iter().map(|(tag, t, d)| {
                ((*tag).to_string(), LocalizedText::new(*tag, *t, *d))
            }),
            stats,
        )
    }

    fn risky_chain(url: &str) -> LinkChain {
        LinkChain {
            origin: ExtractedUrl {
                url: url.to_string(),
                origin: UrlOrigin::Description,
                origin_id: "vid01".to_string(),
                language_tag: Some("en".to_string()),
            },
            hops: vec![Hop {
                url: url.to_string(),
                resolution: Resolution::Terminal,
                embedded_urls: Vec::new(),
            }],
            terminal_class: HostClass {
                class: HostClassKind::FileSharing,
                host: "mediafire.com".to_string(),
                whois_privacy: WhoisPrivacy::Unknown,
            },
            resolved_at: Utc.with_ymd_and_hms(2025, 7, 19, 0, 0, 0).unwrap(),
        }
    }

    #[test]
    fn benign_default_with_bait_localization_is_a_finding() {
        let meta = meta_with(
            Some("zu"),
            "umculo omnandi",
            "okuthula nomculo",
            &[(
                "en",
                "Adobe Photoshop 2025 free crack",
                "download now, pass: 1234",
            )],
            ViewStats::default(),
        );
        let finding = detect_misrepresentation(&meta, &lexicon()).expect("finding");
        assert!(finding.default_is_benign);
        assert_eq!(finding.flagged_languages.len(), 1);
        let en = &finding.flagged_languages["en"];
        assert_eq!(
            en.matched_bait,
            ["free", "crack", "download"].iter().map(|s| s.to_string()).collect()
        );
        assert!(en.matched_products.contains_key("Adobe Photoshop"));
        assert!(finding.benign_languages.contains("zu"));
        assert!(!finding.benign_languages.contains("en"));
    }

    #[test]
    fn empty_localizations_mean_no_finding() {
        let meta = meta_with(Some("zu"), "umculo", "", &[], ViewStats::default());
        assert!(detect_misrepresentation(&meta, &lexicon()).is_none());
    }

    #[test]
    fn dirty_default_means_no_finding() {
        let meta = meta_with(
            Some("en"),
            "photoshop free crack",
            "",
            &[],
            ViewStats::default(),
        );
        assert!(detect_misrepresentation(&meta, &lexicon()).is_none());
    }

    #[test]
    fn bait_without_product_does_not_trigger() {
        let meta = meta_with(
            Some("zu"),
            "umculo",
            "",
            &[("en", "totally free download here", "no product named")],
            ViewStats::default(),
        );
        assert!(detect_misrepresentation(&meta, &lexicon()).is_none());
    }

    #[test]
    fn missing_default_language_still_diffs_as_und() {
        let meta = meta_with(
            None,
            "nice nature clips",
            "",
            &[("en", "roblox free crack", "")],
            ViewStats::default(),
        );
        let finding = detect_misrepresentation(&meta, &lexicon()).expect("finding");
        assert!(finding.benign_languages.contains("und"));
    }

    #[test]
    fn partition_is_disjoint_even_when_default_tag_localized_dirty() {
        // Default snippet clean, but a same-tag localization is dirty: the
        // tag belongs to flagged only.
        let meta = meta_with(
            Some("en"),
            "harmless title",
            "",
            &[
                ("en", "roblox free crack", ""),
                ("fr", "roblox crack gratuit free", ""),
            ],
            ViewStats::default(),
        );
        let finding = detect_misrepresentation(&meta, &lexicon()).expect("finding");
        assert!(finding.flagged_languages.contains_key("en"));
        assert!(!finding.benign_languages.contains("en"));
        for tag in finding.flagged_languages.keys() {
            assert!(!finding.benign_languages.contains(tag));
        }
    }

    #[test]
    fn finding_plus_testimonial_plus_link_scores_malicious() {
        let meta = meta_with(
            Some("zu"),
            "umculo omnandi",
            "",
            &[("en", "Adobe Photoshop free crack", "download")],
            ViewStats::default(),
        );
        let finding = detect_misrepresentation(&meta, &lexicon());
        let comments = vec!["Works like a charm!".to_string()];
        let chains = vec![risky_chain("https://www.mediafire.com/file/abc")];
        let verdict = score_video(
            &meta,
            finding,
            &comments,
            None,
            &chains,
            &lexicon(),
            &ScoringConfig::default(),
        )
        .unwrap();
        assert_eq!(verdict.verdict, Verdict::MaliciousMultilingual);
        // 0.6 finding + 0.1 testimonial + 0.1 risky link
        assert!((verdict.score - 0.8).abs() < 1e-12);
        assert!(verdict.finding().is_some());
        assert_eq!(
            verdict.evidence.iter().filter(|e| matches!(e, Evidence::Misrepresentation { .. })).count(),
            1
        );
    }

    #[test]
    fn no_evidence_is_benign_score_zero() {
        let meta = meta_with(Some("en"), "piano practice", "", &[], ViewStats::default());
        let verdict = score_video(
            &meta,
            None,
            &[],
            None,
            &[],
            &lexicon(),
            &ScoringConfig::default(),
        )
        .unwrap();
        assert_eq!(verdict.verdict, Verdict::Benign);
        assert_eq!(verdict.score, 0.0);
        assert!(verdict.evidence.is_empty());
    }

    #[test]
    fn testimonials_alone_are_suspicious_not_malicious() {
        let meta = meta_with(Some("en"), "some video", "", &[], ViewStats::default());
        let comments = vec![
            "Works like a charm!".to_string(),
            "100% legit".to_string(),
        ];
        let verdict = score_video(
            &meta,
            None,
            &comments,
            None,
            &[],
            &lexicon(),
            &ScoringConfig::default(),
        )
        .unwrap();
        assert_eq!(verdict.verdict, Verdict::Suspicious);
        assert!((verdict.score - 0.1).abs() < 1e-12);
    }

    #[test]
    fn plain_bait_needs_corroboration_for_malicious_plain() {
        let meta = meta_with(
            Some("en"),
            "photoshop free crack download",
            "",
            &[],
            ViewStats::default(),
        );
        let alone = score_video(
            &meta, None, &[], None, &[], &lexicon(), &ScoringConfig::default(),
        )
        .unwrap();
        assert_eq!(alone.verdict, Verdict::Suspicious);

        let chains = vec![risky_chain("https://www.mediafire.com/file/abc")];
        let with_link = score_video(
            &meta, None, &[], None, &chains, &lexicon(), &ScoringConfig::default(),
        )
        .unwrap();
        assert_eq!(with_link.verdict, Verdict::MaliciousPlain);
        assert!((with_link.score - 0.6).abs() < 1e-12);
    }

    #[test]
    fn engagement_anomaly_fires_on_inflated_likes() {
        let stats = ViewStats {
            view_count: 100,
            like_count: Some(80),
            comment_count: None,
        };
        let meta = meta_with(Some("en"), "x", "", &[], stats);
        let verdict = score_video(
            &meta, None, &[], None, &[], &lexicon(), &ScoringConfig::default(),
        )
        .unwrap();
        assert!(verdict
            .evidence
            .iter()
            .any(|e| matches!(e, Evidence::EngagementAnomaly { .. })));

        // Hidden like counts are not anomalies.
        let hidden = ViewStats {
            view_count: 100,
            like_count: None,
            comment_count: None,
        };
        let meta = meta_with(Some("en"), "x", "", &[], hidden);
        let verdict = score_video(
            &meta, None, &[], None, &[], &lexicon(), &ScoringConfig::default(),
        )
        .unwrap();
        assert!(verdict.evidence.is_empty());
    }

    #[test]
    fn channel_dormancy_then_burst_is_detected() {
        let created = Utc.with_ymd_and_hms(2015, 1, 1, 0, 0, 0).unwrap();
        let mut uploads = Vec::new();
        for day in 0..5 {
            uploads.push(Utc.with_ymd_and_hms(2018, 1, 1, 0, 0, 0).unwrap()
                + chrono::Duration::days(day * 30));
        }
        for day in 0..5 {
            uploads.push(Utc.with_ymd_and_hms(2025, 7, 10, 0, 0, 0).unwrap()
                + chrono::Duration::days(day));
        }
        let channel = ChannelRecord::new("chan01", created, Some(12_000), uploads);
        assert!(channel_anomaly(&channel, &ChannelBounds::default()).is_some());

        let steady: Vec<_> = (0..24)
            .map(|m| {
                Utc.with_ymd_and_hms(2024, 1, 1, 0, 0, 0).unwrap()
                    + chrono::Duration::days(m * 30)
            })
            .collect();
        let steady_channel = ChannelRecord::new("chan02", created, None, steady);
        assert!(channel_anomaly(&steady_channel, &ChannelBounds::default()).is_none());
    }

    #[test]
    fn password_markers_in_any_language_are_collected() {
        let meta = meta_with(
            Some("zu"),
            "umculo",
            "iphasiwedi: pass: 2025",
            &[("en", "nice track", "archive password 2025")],
            ViewStats::default(),
        );
        let verdict = score_video(
            &meta, None, &[], None, &[], &lexicon(), &ScoringConfig::default(),
        )
        .unwrap();
        let pw = verdict.evidence.iter().find_map(|e| match e {
            Evidence::PasswordMarkers { markers, languages } => Some((markers, languages)),
            _ => None,
        });
        let (markers, languages) = pw.expect("password evidence");
        assert!(markers.contains("pass:"));
        assert!(markers.contains("password"));
        assert!(languages.contains("zu") && languages.contains("en"));
    }

    #[test]
    fn order_invariance_over_comments_and_chains() {
        let meta = meta_with(
            Some("zu"),
            "umculo",
            "",
            &[("en", "roblox free crack", "")],
            ViewStats::default(),
        );
        let finding = detect_misrepresentation(&meta, &lexicon());
        let mut comments = vec![
            "100% legit".to_string(),
            "It worked! Thanks!".to_string(),
            "Works like a charm!".to_string(),
        ];
        let mut chains = vec![
            risky_chain("https://www.mediafire.com/file/b"),
            risky_chain("https://www.mediafire.com/file/a"),
        ];
        let v1 = score_video(
            &meta, finding.clone(), &comments, None, &chains, &lexicon(),
            &ScoringConfig::default(),
        )
        .unwrap();
        comments.reverse();
        chains.reverse();
        let v2 = score_video(
            &meta, finding, &comments, None, &chains, &lexicon(),
            &ScoringConfig::default(),
        )
        .unwrap();
        assert_eq!(v1, v2);
    }

    #[test]
    fn invalid_weights_are_rejected() {
        let mut config = ScoringConfig::default();
        config.weights.testimonial = -0.2;
        let meta = meta_with(Some("en"), "x", "", &[], ViewStats::default());
        assert!(matches!(
            score_video(&meta, None, &[], None, &[], &lexicon(), &config),
            Err(DetectorError::InvalidWeights(_))
        ));
        config.weights.testimonial = f64::NAN;
        assert!(score_video(&meta, None, &[], None, &[], &lexicon(), &config).is_err());
    }

    #[test]
    fn duplicate_risky_terminals_count_once() {
        let meta = meta_with(Some("en"), "x", "", &[], ViewStats::default());
        let chains = vec![
            risky_chain("https://www.mediafire.com/file/same"),
            risky_chain("https://www.mediafire.com/file/same"),
        ];
        let verdict = score_video(
            &meta, None, &[], None, &chains, &lexicon(), &ScoringConfig::default(),
        )
        .unwrap();
        assert_eq!(
            verdict
                .evidence
                .iter()
                .filter(|e| matches!(e, Evidence::RiskyLink { .. }))
                .count(),
            1
        );
    }

    #[test]
    fn default_scoring_config_matches_embedded_file() {
        assert_eq!(ScoringConfig::default_config(), ScoringConfig::default());
    }
}
