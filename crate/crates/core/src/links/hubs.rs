//! Centralized redirection-hub detection over resolved chains.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::hosts::is_community_post_url;
use super::resolve::LinkChain;
use crate::links::UrlOrigin;

/// A community post referenced by several videos' chains: the pivot
/// attackers rotate payload URLs through.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hub {
    pub hub_url: String,
    pub inbound_video_ids: BTreeSet<String>,
}

impl Hub {
    pub fn inbound_count(&self) -> usize {
        self.inbound_video_ids.len()
    }
}

/// Groups community-post hop URLs by the distinct videos whose chains pass
/// through them and keeps those with at least `min_inbound`. Sorted by
/// inbound count descending, ties by URL.
pub fn detect_hubs(chains: &[LinkChain], min_inbound: usize) -> Vec<Hub> {
    assert!(min_inbound >= 1, "min_inbound must be positive");
    let mut inbound: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for chain in chains {
        // Only video-rooted chains count toward a hub's fan-in.
        if !matches!(chain.origin.origin, UrlOrigin::Description | UrlOrigin::Comment) {
            continue;
        }
        for hop in &chain.hops {
            if is_community_post_url(&hop.url) {
                inbound
                    .entry(hop.url.clone())
                    .or_default()
                    .insert(chain.origin.origin_id.clone());
            }
        }
    }
    let mut hubs: Vec<Hub> = inbound
        .into_iter()
        .filter(|(_, videos)| videos.len() >= min_inbound)
        .map(|(hub_url, inbound_video_ids)| Hub {
            hub_url,
            inbound_video_ids,
        })
        .collect();
    hubs.sort_by(|a, b| {
        b.inbound_count()
            .cmp(&a.inbound_count())
            .then_with(|| a.hub_url.cmp(&b.hub_url))
    });
    hubs
}
