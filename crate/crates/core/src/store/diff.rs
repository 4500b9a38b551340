//! Cross-run diffing: terminal-URL rotation, verdict transitions, and
//! videos that disappeared between scans.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ScanRecord, ScanStore, StoreError};
use crate::detector::Verdict;

/// Terminal rotation inside this window is flagged `rotating`: the
/// observed cadence of payload-URL replacement.
pub const DEFAULT_ROTATION_WINDOW_HOURS: i64 = 48;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalChange {
    pub video_id: String,
    pub origin_url: String,
    pub old_terminal: String,
    pub new_terminal: String,
    /// True when the two resolutions are within the rotation window.
    pub rotating: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictTransition {
    pub from: Verdict,
    pub to: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RunDiff {
    pub earlier_scan_id: u64,
    pub later_scan_id: u64,
    pub terminal_changes: Vec<TerminalChange>,
    pub verdict_transitions: BTreeMap<String, VerdictTransition>,
    /// Videos present in the earlier run but not the later one: possible
    /// takedowns.
    pub missing_videos: Vec<String>,
}

impl RunDiff {
    pub fn is_empty(&self) -> bool {
        self.terminal_changes.is_empty()
            && self.verdict_transitions.is_empty()
            && self.missing_videos.is_empty()
    }
}

/// Compares two scan runs from the store. Chains are matched by origin
/// URL within each video.
pub fn diff_runs(
    store: &ScanStore,
    earlier_scan_id: u64,
    later_scan_id: u64,
    rotation_window_hours: i64,
) -> Result<RunDiff, StoreError> {
    let earlier = store.load_scan(earlier_scan_id)?;
    let later = store.load_scan(later_scan_id)?;
    Ok(diff_records(
        &earlier,
        &later,
        earlier_scan_id,
        later_scan_id,
        rotation_window_hours,
    ))
}

fn diff_records(
    earlier: &[ScanRecord],
    later: &[ScanRecord],
    earlier_scan_id: u64,
    later_scan_id: u64,
    rotation_window_hours: i64,
) -> RunDiff {
    let later_by_id: BTreeMap<&str, &ScanRecord> =
        later.iter().map(|r| (r.video_id(), r)).collect();

    let mut diff = RunDiff {
        earlier_scan_id,
        later_scan_id,
        ..RunDiff::default()
    };

    for old in earlier {
        let Some(new) = later_by_id.get(old.video_id()) else {
            diff.missing_videos.push(old.video_id().to_string());
            continue;
        };

        if old.verdict.verdict != new.verdict.verdict {
            diff.verdict_transitions.insert(
                old.video_id().to_string(),
                VerdictTransition {
                    from: old.verdict.verdict,
                    to: new.verdict.verdict,
                },
            );
        }

        let new_chains: BTreeMap<&str, &crate::links::LinkChain> = new
            .chains
            .iter()
            .map(|c| (c.origin.url.as_str(), c))
            .collect();
        for old_chain in &old.chains {
            let Some(new_chain) = new_chains.get(old_chain.origin.url.as_str()) else {
                continue;
            };
            let old_terminal = old_chain.terminal_url();
            let new_terminal = new_chain.terminal_url();
            if old_terminal != new_terminal {
                let gap = (new_chain.resolved_at - old_chain.resolved_at).num_hours().abs();
                diff.terminal_changes.push(TerminalChange {
                    video_id: old.video_id().to_string(),
                    origin_url: old_chain.origin.url.clone(),
                    old_terminal: old_terminal.to_string(),
                    new_terminal: new_terminal.to_string(),
                    rotating: gap <= rotation_window_hours,
                });
            }
        }
    }

    diff.missing_videos.sort();
    diff.terminal_changes
        .sort_by(|a, b| (&a.video_id, &a.origin_url).cmp(&(&b.video_id, &b.origin_url)));
    diff
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::ScanVerdict;
    use crate::links::{
        ExtractedUrl, HostClass, HostClassKind, Hop, LinkChain, Resolution, UrlOrigin,
        WhoisPrivacy,
    };
    use crate::model::{VideoMetadata, ViewStats};
    use chrono::{DateTime, TimeZone, Utc};

    fn chain(origin: &str, terminal: &str, resolved_at: DateTime<Utc>) -> LinkChain {
        LinkChain {
            origin: ExtractedUrl {
                url: origin.to_string(),
                origin: UrlOrigin::Description,
                origin_id: "v".to_string(),
                language_tag: None,
            },
            hops: vec![
                Hop {
                    url: origin.to_string(),
                    resolution: Resolution::HttpRedirect,
                    embedded_urls: Vec::new(),
                },
                Hop {
                    url: terminal.to_string(),
                    resolution: Resolution::Terminal,
                    embedded_urls: Vec::new(),
                },
            ],
            terminal_class: HostClass {
                class: HostClassKind::FileSharing,
                host: "mediafire.com".to_string(),
                whois_privacy: WhoisPrivacy::Unknown,
            },
            resolved_at,
        }
    }

    fn record(
        video_id: &str,
        scan_id: u64,
        verdict: Verdict,
        chains: Vec<LinkChain>,
        scanned_at: DateTime<Utc>,
    ) -> ScanRecord {
        ScanRecord {
            scan_id,
            scanned_at,
            verdict: ScanVerdict {
                video_id: video_id.to_string(),
                verdict,
                score: 0.0,
                evidence: Vec::new(),
            },
            metadata_snapshot: VideoMetadata::new(
                video_id,
                "chan",
                Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap(),
                Some("en"),
                "t",
                "d",
                [],
                ViewStats::default(),
            ),
            chains,
        }
    }

    fn t(day: u32, hour: u32) -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2025, 7, day, hour, 0, 0).unwrap()
    }

    #[test]
    fn terminal_change_within_window_is_rotating() {
        let earlier = vec![record(
            "v1",
            1,
            Verdict::MaliciousMultilingual,
            vec![chain("https://cutt.ly/x", "https://www.mediafire.com/file/a", t(1, 0))],
            t(1, 0),
        )];
        let later = vec![record(
            "v1",
            2,
            Verdict::MaliciousMultilingual,
            vec![chain("https://cutt.ly/x", "https://www.mediafire.com/file/b", t(2, 0))],
            t(2, 0),
        )];
        let diff = diff_records(&earlier, &later, 1, 2, DEFAULT_ROTATION_WINDOW_HOURS);
        assert_eq!(diff.terminal_changes.len(), 1);
        assert!(diff.terminal_changes[0].rotating);

        let later_slow = vec![record(
            "v1",
            2,
            Verdict::MaliciousMultilingual,
            vec![chain("https://cutt.ly/x", "https://www.mediafire.com/file/b", t(8, 0))],
            t(8, 0),
        )];
        let diff = diff_records(&earlier, &later_slow, 1, 2, DEFAULT_ROTATION_WINDOW_HOURS);
        assert!(!diff.terminal_changes[0].rotating);
    }

    #[test]
    fn identical_runs_diff_empty() {
        let earlier = vec![record("v1", 1, Verdict::Benign, Vec::new(), t(1, 0))];
        let later = vec![record("v1", 2, Verdict::Benign, Vec::new(), t(2, 0))];
        assert!(diff_records(&earlier, &later, 1, 2, 48).is_empty());
    }

    #[test]
    fn vanished_video_is_listed_missing() {
        let earlier = vec![
            record("v1", 1, Verdict::MaliciousMultilingual, Vec::new(), t(1, 0)),
            record("v2", 1, Verdict::Benign, Vec::new(), t(1, 0)),
        ];
        let later = vec![record("v2", 2, Verdict::Benign, Vec::new(), t(2, 0))];
        let diff = diff_records(&earlier, &later, 1, 2, 48);
        assert_eq!(diff.missing_videos, vec!["v1".to_string()]);
    }

    #[test]
    fn verdict_transitions_are_reported() {
        let earlier = vec![record("v1", 1, Verdict::Suspicious, Vec::new(), t(1, 0))];
        let later = vec![record(
            "v1",
            2,
            Verdict::MaliciousMultilingual,
            Vec::new(),
            t(2, 0),
        )];
        let diff = diff_records(&earlier, &later, 1, 2, 48);
        let tr = &diff.verdict_transitions["v1"];
        assert_eq!(tr.from, Verdict::Suspicious);
        assert_eq!(tr.to, Verdict::MaliciousMultilingual);
    }

    #[test]
    fn unknown_scan_ids_error_through_store() {
        let dir = tempfile::tempdir().unwrap();
        let store = ScanStore::open(dir.path().join("s.jsonl")).unwrap();
        assert!(matches!(
            diff_runs(&store, 1, 2, 48),
            Err(StoreError::UnknownScanId(1))
        ));
    }
}
