//! Append-only local scan store.
//!
//! One JSONL file per store: a header line with the format version, then
//! one committed record per line. Records are append-only and keyed by
//! (video_id, scan_id); a scan_id identifies one scan run. Appends are
//! single-writer through `&mut self` and roll back the file length on
//! write failure, so readers never see a partial record.

mod aggregate;
mod diff;

pub use aggregate::{aggregate_report, evidence_export, AggregateReport, AggregateRow};
pub use diff::{
    diff_runs, RunDiff, TerminalChange, VerdictTransition, DEFAULT_ROTATION_WINDOW_HOURS,
};

use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detector::ScanVerdict;
use crate::links::LinkChain;
use crate::model::VideoMetadata;

pub const STORE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("duplicate record for video {video_id} in scan {scan_id}")]
    DuplicateRecord { video_id: String, scan_id: u64 },
    #[error("unknown scan id {0}")]
    UnknownScanId(u64),
    #[error("storage failure: {0}")]
    Storage(#[from] std::io::Error),
    #[error("corrupt store at line {line}: {reason}")]
    Corrupt { line: usize, reason: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct StoreHeader {
    format_version: u32,
    kind: String,
}

/// One scanned video in one run: verdict, the metadata snapshot it was
/// derived from, and the resolved chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub scan_id: u64,
    pub scanned_at: DateTime<Utc>,
    pub verdict: ScanVerdict,
    pub metadata_snapshot: VideoMetadata,
    pub chains: Vec<LinkChain>,
}

impl ScanRecord {
    pub fn video_id(&self) -> &str {
        &self.metadata_snapshot.video_id
    }
}

/// Single-writer, multi-reader append-only store over one local file.
#[derive(Debug)]
pub struct ScanStore {
    path: PathBuf,
    keys: BTreeSet<(String, u64)>,
    scan_ids: BTreeSet<u64>,
    record_count: usize,
}

impl ScanStore {
    /// Opens (creating if needed) the store file and indexes its records.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        if !path.exists() {
            let mut file = File::create(&path)?;
            let header = StoreHeader {
                format_version: STORE_FORMAT_VERSION,
                kind: "tubescan-store".to_string(),
            };
            writeln!(file, "{}", serde_json::to_string(&header).expect("header"))?;
            file.sync_all()?;
        }
        let mut store = Self {
            path,
            keys: BTreeSet::new(),
            scan_ids: BTreeSet::new(),
            record_count: 0,
        };
        for record in store.load_all()? {
            store.index(&record);
        }
        Ok(store)
    }

    fn index(&mut self, record: &ScanRecord) {
        self.keys
            .insert((record.video_id().to_string(), record.scan_id));
        self.scan_ids.insert(record.scan_id);
        self.record_count += 1;
    }

    /// Next unused scan id; callers stamp every record of a run with it.
    pub fn next_scan_id(&self) -> u64 {
        self.scan_ids.iter().next_back().map_or(1, |max| max + 1)
    }

    pub fn record_count(&self) -> usize {
        self.record_count
    }

    pub fn scan_ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.scan_ids.iter().copied()
    }

    pub fn has_scan(&self, scan_id: u64) -> bool {
        self.scan_ids.contains(&scan_id)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Durably appends one record. Duplicate (video_id, scan_id) pairs are
    /// rejected; a failed write truncates back so nothing partial lands.
    pub fn persist(&mut self, record: &ScanRecord) -> Result<(), StoreError> {
        let key = (record.video_id().to_string(), record.scan_id);
        if self.keys.contains(&key) {
            return Err(StoreError::DuplicateRecord {
                video_id: key.0,
                scan_id: key.1,
            });
        }
        let mut line = serde_json::to_string(record).map_err(|e| StoreError::Corrupt {
            line: 0,
            reason: format!("serialize: {e}"),
        })?;
        line.push('\n');

        let mut file = OpenOptions::new().append(true).open(&self.path)?;
        let offset = file.metadata()?.len();
        if let Err(e) = file.write_all(line.as_bytes()).and_then(|_| file.sync_data()) {
            let _ = file.set_len(offset);
            return Err(StoreError::Storage(e));
        }
        self.index(record);
        Ok(())
    }

    /// Every committed record in append order.
    pub fn load_all(&self) -> Result<Vec<ScanRecord>, StoreError> {
        let file = File::open(&self.path)?;
        let mut reader = BufReader::new(file);
        let mut header_line = String::new();
        reader.read_line(&mut header_line)?;
        let header: StoreHeader =
            serde_json::from_str(header_line.trim_end()).map_err(|e| StoreError::Corrupt {
                line: 1,
                reason: format!("header: {e}"),
            })?;
        if header.format_version != STORE_FORMAT_VERSION {
            return Err(StoreError::Corrupt {
                line: 1,
                reason: format!("unsupported format version {}", header.format_version),
            });
        }
        let mut records = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: ScanRecord =
                serde_json::from_str(&line).map_err(|e| StoreError::Corrupt {
                    line: i + 2,
                    reason: e.to_string(),
                })?;
            records.push(record);
        }
        Ok(records)
    }

    /// Records belonging to one scan run.
    pub fn load_scan(&self, scan_id: u64) -> Result<Vec<ScanRecord>, StoreError> {
        if !self.scan_ids.contains(&scan_id) {
            return Err(StoreError::UnknownScanId(scan_id));
        }
        Ok(self
            .load_all()?
            .into_iter()
            .filter(|r| r.scan_id == scan_id)
            .collect())
    }

    /// Records of the most recent scan run, if any.
    pub fn load_latest_scan(&self) -> Result<Vec<ScanRecord>, StoreError> {
        match self.scan_ids.iter().next_back() {
            Some(&scan_id) => self.load_scan(scan_id),
            None => Ok(Vec::new()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::Verdict;
    use crate::model::ViewStats;
    use chrono::TimeZone;

    fn record(video_id: &str, scan_id: u64) -> ScanRecord {
        let meta = VideoMetadata::new(
            video_id,
            "chan",
            Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap(),
            Some("en"),
            "title",
            "desc",
            [],
            ViewStats {
                view_count: 10,
                like_count: Some(1),
                comment_count: None,
            },
        );
        ScanRecord {
            scan_id,
            scanned_at: Utc.with_ymd_and_hms(2025, 7, 19, 0, 0, 0).unwrap(),
            verdict: ScanVerdict {
                video_id: video_id.to_string(),
                verdict: Verdict::Benign,
                score: 0.0,
                evidence: Vec::new(),
            },
            metadata_snapshot: meta,
            chains: Vec::new(),
        }
    }

    #[test]
    fn persist_then_read_back_is_value_equal() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = ScanStore::open(dir.path().join("s.jsonl")).unwrap();
        let rec = record("v1", 1);
        store.persist(&rec).unwrap();
        let loaded = store.load_all().unwrap();
        assert_eq!(loaded, vec![rec]);
    }

    #[test]
    fn duplicate_video_scan_pair_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = ScanStore::open(dir.path().join("s.jsonl")).unwrap();
        store.persist(&record("v1", 1)).unwrap();
        assert!(matches!(
            store.persist(&record("v1", 1)),
            Err(StoreError::DuplicateRecord { .. })
        ));
        // Same video in a different run is fine.
        store.persist(&record("v1", 2)).unwrap();
    }

    #[test]
    fn store_reports_persisted_count() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.jsonl");
        let mut store = ScanStore::open(&path).unwrap();
        let total = 175;
        for i in 0..total {
            store.persist(&record(&format!("v{i:03}"), 1)).unwrap();
        }
        assert_eq!(store.record_count(), total);
        // Reopen and re-index.
        let reopened = ScanStore::open(&path).unwrap();
        assert_eq!(reopened.record_count(), total);
        assert_eq!(reopened.next_scan_id(), 2);
    }

    #[test]
    fn load_scan_filters_by_run_and_rejects_unknown() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = ScanStore::open(dir.path().join("s.jsonl")).unwrap();
        store.persist(&record("v1", 1)).unwrap();
        store.persist(&record("v2", 1)).unwrap();
        store.persist(&record("v1", 2)).unwrap();
        assert_eq!(store.load_scan(1).unwrap().len(), 2);
        assert_eq!(store.load_scan(2).unwrap().len(), 1);
        assert!(matches!(
            store.load_scan(9),
            Err(StoreError::UnknownScanId(9))
        ));
        assert_eq!(store.load_latest_scan().unwrap().len(), 1);
    }
}
