//! Per-category aggregation and report rendering.
//!
//! Rows group flagged videos by matched product category, in lexicon
//! declaration order. A video matching several categories appears in each
//! owning category's row; the grand totals deduplicate, counting every
//! video and its views exactly once. (Category rows in the wild overlap
//! this way: campaign videos routinely advertise product bundles, so row
//! sums can exceed the distinct-video totals.)

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::ScanRecord;
use crate::detector::Verdict;
use crate::lexicon::KeywordLexicon;

/// One report row: a product category with the number of flagged videos
/// and their summed view counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub category_label: String,
    pub video_count: u64,
    pub total_views: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub rows: Vec<AggregateRow>,
    /// Distinct flagged videos (each counted once across rows).
    pub total_videos: u64,
    /// Views of distinct flagged videos (each counted once across rows).
    pub total_views: u64,
}

/// Aggregates records whose verdict passes `verdict_filter`. When the same
/// video appears in several input records, the highest scan_id wins (view
/// counts are snapshots; the latest one stands). Categories unknown to the
/// lexicon sort after the declared ones, alphabetically.
pub fn aggregate_report(
    records: &[ScanRecord],
    lexicon: &KeywordLexicon,
    verdict_filter: &BTreeSet<Verdict>,
) -> AggregateReport {
    let mut latest: BTreeMap<&str, &ScanRecord> = BTreeMap::new();
    for record in records {
        if !verdict_filter.contains(&record.verdict.verdict) {
            continue;
        }
        latest
            .entry(record.video_id())
            .and_modify(|current| {
                if record.scan_id > current.scan_id {
                    *current = record;
                }
            })
            .or_insert(record);
    }

    let mut row_counts: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    let mut total_videos = 0u64;
    let mut total_views = 0u64;
    for record in latest.values() {
        let categories = record.verdict.matched_categories();
        if categories.is_empty() {
            continue;
        }
        let views = record.metadata_snapshot.statistics.view_count;
        total_videos += 1;
        total_views += views;
        for category in categories {
            let entry = row_counts.entry(category).or_insert((0, 0));
            entry.0 += 1;
            entry.1 += views;
        }
    }

    let mut rows: Vec<AggregateRow> = row_counts
        .into_iter()
        .map(|(category_label, (video_count, total_views))| AggregateRow {
            category_label,
            video_count,
            total_views,
        })
        .collect();
    rows.sort_by(|a, b| {
        let pos = |label: &str| {
            lexicon
                .category_position(label)
                .map(|p| (0usize, p))
                .unwrap_or((1, usize::MAX))
        };
        pos(&a.category_label)
            .cmp(&pos(&b.category_label))
            .then_with(|| a.category_label.cmp(&b.category_label))
    });

    AggregateReport {
        rows,
        total_videos,
        total_views,
    }
}

impl AggregateReport {
    /// CSV with a header, one row per category, and a trailing totals row.
    /// Byte-stable for a fixed report.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
        writer
            .write_record(["category", "video_count", "total_views"])
            .expect("csv header");
        for row in &self.rows {
            writer
                .write_record([
                    row.category_label.as_str(),
                    &row.video_count.to_string(),
                    &row.total_views.to_string(),
                ])
                .expect("csv row");
        }
        writer
            .write_record([
                "TOTAL",
                &self.total_videos.to_string(),
                &self.total_views.to_string(),
            ])
            .expect("csv totals");
        String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf8")
    }

    /// Human-readable aligned table.
    pub fn render_table(&self, out: &mut impl Write) -> std::io::Result<()> {
        let label_width = self
            .rows
            .iter()
            .map(|r| r.category_label.len())
            .chain(["Software/Game".len(), "TOTAL".len()])
            .max()
            .unwrap_or(0);
        writeln!(
            out,
            "{:<label_width$}  {:>8}  {:>12}",
            "Software/Game", "Videos", "Views"
        )?;
        writeln!(out, "{}", "-".repeat(label_width + 24))?;
        for row in &self.rows {
            writeln!(
                out,
                "{:<label_width$}  {:>8}  {:>12}",
                row.category_label, row.video_count, row.total_views
            )?;
        }
        writeln!(out, "{}", "-".repeat(label_width + 24))?;
        writeln!(
            out,
            "{:<label_width$}  {:>8}  {:>12}",
            "TOTAL", self.total_videos, self.total_views
        )?;
        Ok(())
    }
}

/// Structured per-video evidence export, for disclosure packets. One entry
/// per distinct flagged video, stably ordered by video id.
pub fn evidence_export(
    records: &[ScanRecord],
    verdict_filter: &BTreeSet<Verdict>,
) -> serde_json::Value {
    let mut latest: BTreeMap<&str, &ScanRecord> = BTreeMap::new();
    for record in records {
        if !verdict_filter.contains(&record.verdict.verdict) {
            continue;
        }
        latest
            .entry(record.video_id())
            .and_modify(|current| {
                if record.scan_id > current.scan_id {
                    *current = record;
                }
            })
            .or_insert(record);
    }
    let videos: Vec<serde_json::Value> = latest
        .values()
        .map(|record| {
            serde_json::json!({
                "video_id": record.video_id(),
                "scan_id": record.scan_id,
                "scanned_at": record.scanned_at,
                "verdict": record.verdict.verdict,
                "score": record.verdict.score,
                "categories": record.verdict.matched_categories(),
                "view_count": record.metadata_snapshot.statistics.view_count,
                "evidence": record.verdict.evidence,
                "chains": record.chains,
            })
        })
        .collect();
    serde_json::json!({ "videos": videos })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{Evidence, ScanVerdict};
    use crate::model::{MatchResult, VideoMetadata, ViewStats};
    use chrono::{TimeZone, Utc};

    fn flagged_record(
        video_id: &str,
        scan_id: u64,
        categories: &[&str],
        views: u64,
    ) -> ScanRecord {
        let mut matches = MatchResult::default();
        matches.matched_bait.insert("free".into());
        for c in categories {
            matches
                .matched_products
                .entry((*c).to_string())
                .or_default()
                .insert("variant".into());
        }
        let finding = crate::detector::MisrepresentationFinding {
            video_id: video_id.to_string(),
            benign_languages: ["zu".to_string()].into_iter().collect(),
            flagged_languages: [("en".to_string(), matches)].into_iter().collect(),
            default_is_benign: true,
        };
        let meta = VideoMetadata::new(
            video_id,
            "chan",
            Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap(),
            Some("zu"),
            "t",
            "d",
            [],
            ViewStats {
                view_count: views,
                like_count: None,
                comment_count: None,
            },
        );
        ScanRecord {
            scan_id,
            scanned_at: Utc.with_ymd_and_hms(2025, 7, 19, 0, 0, 0).unwrap(),
            verdict: ScanVerdict {
                video_id: video_id.to_string(),
                verdict: Verdict::MaliciousMultilingual,
                score: 0.6,
                evidence: vec![Evidence::Misrepresentation { finding }],
            },
            metadata_snapshot: meta,
            chains: Vec::new(),
        }
    }

    fn lexicon() -> KeywordLexicon {
        crate::lexicon::LexiconBuilder::new()
            .bait(["free"])
            .products("Adobe Photoshop", ["photoshop"])
            .products("Roblox", ["roblox"])
            .build()
            .unwrap()
    }

    fn malicious_only() -> BTreeSet<Verdict> {
        [Verdict::MaliciousMultilingual, Verdict::MaliciousPlain]
            .into_iter()
            .collect()
    }

    #[test]
    fn empty_records_empty_report() {
        let report = aggregate_report(&[], &lexicon(), &malicious_only());
        assert!(report.rows.is_empty());
        assert_eq!((report.total_videos, report.total_views), (0, 0));
    }

    #[test]
    fn two_videos_one_category_sum_views() {
        let records = vec![
            flagged_record("v1", 1, &["Roblox"], 10),
            flagged_record("v2", 1, &["Roblox"], 20),
        ];
        let report = aggregate_report(&records, &lexicon(), &malicious_only());
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].video_count, 2);
        assert_eq!(report.rows[0].total_views, 30);
        assert_eq!((report.total_videos, report.total_views), (2, 30));
    }

    #[test]
    fn multi_category_video_counts_in_each_row_once_in_totals() {
        let records = vec![
            flagged_record("v1", 1, &["Adobe Photoshop", "Roblox"], 100),
            flagged_record("v2", 1, &["Roblox"], 50),
        ];
        let report = aggregate_report(&records, &lexicon(), &malicious_only());
        assert_eq!(report.rows.len(), 2);
        // Declaration order: photoshop first.
        assert_eq!(report.rows[0].category_label, "Adobe Photoshop");
        assert_eq!(report.rows[0].video_count, 1);
        assert_eq!(report.rows[1].category_label, "Roblox");
        assert_eq!(report.rows[1].video_count, 2);
        // Row sums double-count v1; grand totals do not.
        assert_eq!((report.total_videos, report.total_views), (2, 150));
    }

    #[test]
    fn rescan_uses_latest_snapshot() {
        let records = vec![
            flagged_record("v1", 1, &["Roblox"], 10),
            flagged_record("v1", 2, &["Roblox"], 99),
        ];
        let report = aggregate_report(&records, &lexicon(), &malicious_only());
        assert_eq!(report.rows[0].video_count, 1);
        assert_eq!(report.rows[0].total_views, 99);
    }

    #[test]
    fn verdict_filter_excludes_benign() {
        let mut benign = flagged_record("v1", 1, &["Roblox"], 10);
        benign.verdict.verdict = Verdict::Benign;
        let report = aggregate_report(&[benign], &lexicon(), &malicious_only());
        assert!(report.rows.is_empty());
    }

    #[test]
    fn csv_shape_is_stable() {
        let records = vec![flagged_record("v1", 1, &["Roblox"], 10)];
        let report = aggregate_report(&records, &lexicon(), &malicious_only());
        assert_eq!(
            report.to_csv(),
            "category,video_count,total_views\nRoblox,1,10\nTOTAL,1,10\n"
        );
    }

    #[test]
    fn aggregation_is_linear_over_disjoint_sets() {
        let a = vec![flagged_record("v1", 1, &["Roblox"], 10)];
        let b = vec![flagged_record("v2", 1, &["Adobe Photoshop"], 25)];
        let both: Vec<ScanRecord> = a.iter().chain(b.iter()).cloned().collect();
        let ra = aggregate_report(&a, &lexicon(), &malicious_only());
        let rb = aggregate_report(&b, &lexicon(), &malicious_only());
        let rboth = aggregate_report(&both, &lexicon(), &malicious_only());
        assert_eq!(rboth.total_videos, ra.total_videos + rb.total_videos);
        assert_eq!(rboth.total_views, ra.total_views + rb.total_views);
    }
}
