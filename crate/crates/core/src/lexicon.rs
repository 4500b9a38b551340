//! Keyword lexicon: bait terms, product-name categories, fake-testimonial
//! phrases, and archive-password markers.
//!
//! The lexicon ships as an editable TOML data file with those four
//! sections. Entries are stored lowercase and whitespace-normalized;
//! category declaration order is preserved because report rows follow it.

use std::collections::BTreeSet;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::normalize_text;

/// Default lexicon compiled into the library; a reconstruction of the
/// public bait/product lists, overridable with `--lexicon`.
pub const DEFAULT_LEXICON_TOML: &str = include_str!("../data/lexicon.toml");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("failed to read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse lexicon: {0}")]
    Parse(String),
    #[error("unsupported lexicon format version {0} (expected {CURRENT_FORMAT_VERSION})")]
    Version(u32),
    #[error("empty entry in section {0}")]
    EmptyEntry(&'static str),
    #[error("empty category label")]
    EmptyCategory,
    #[error("duplicate category label {0:?}")]
    DuplicateCategory(String),
    #[error("category {0:?} has no name variants")]
    EmptyVariantSet(String),
}

pub const CURRENT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct LexiconFile {
    version: u32,
    bait_terms: Vec<String>,
    testimonial_phrases: Vec<String>,
    archive_password_markers: Vec<String>,
    product_names: IndexMap<String, Vec<String>>,
}

/// The four keyword sections used by the matchers and the report layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordLexicon {
    bait_terms: BTreeSet<String>,
    product_names: IndexMap<String, BTreeSet<String>>,
    testimonial_phrases: BTreeSet<String>,
    archive_password_markers: BTreeSet<String>,
}

impl KeywordLexicon {
    /// The compiled-in default lexicon.
    pub fn default_lexicon() -> Self {
        Self::from_toml_str(DEFAULT_LEXICON_TOML)
            .expect("embedded default lexicon must be valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&raw)
    }

    pub fn from_toml_str(raw: &str) -> Result<Self, LexiconError> {
        let file: LexiconFile =
            toml::from_str(raw).map_err(|e| LexiconError::Parse(e.to_string()))?;
        if file.version != CURRENT_FORMAT_VERSION {
            return Err(LexiconError::Version(file.version));
        }
        let mut builder = LexiconBuilder::new()
            .bait(file.bait_terms.iter().map(String::as_str))
            .testimonials(file.testimonial_phrases.iter().map(String::as_str))
            .password_markers(file.archive_password_markers.iter().map(String::as_str));
        for (label, variants) in &file.product_names {
            builder = builder.products(label, variants.iter().map(String::as_str));
        }
        builder.build()
    }

    /// Serializes back to the TOML file format. Entry sets render sorted;
    /// category order is the declaration order.
    pub fn to_toml_string(&self) -> String {
        let file = LexiconFile {
            version: CURRENT_FORMAT_VERSION,
            bait_terms: self.bait_terms.iter().cloned().collect(),
            testimonial_phrases: self.testimonial_phrases.iter().cloned().collect(),
            archive_password_markers: self.archive_password_markers.iter().cloned().collect(),
            product_names: self
                .product_names
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().cloned().collect()))
                .collect(),
        };
        toml::to_string_pretty(&file).expect("lexicon serializes")
    }

    pub fn bait_terms(&self) -> impl Iterator<Item = &String> {
        self.bait_terms.iter()
    }

    /// Categories with their variants, in declaration order.
    pub fn product_names(&self) -> impl Iterator<Item = (&String, &BTreeSet<String>)> {
        self.product_names.iter()
    }

    /// Category labels in declaration order.
    pub fn category_labels(&self) -> impl Iterator<Item = &String> {
        self.product_names.keys()
    }

    /// Position of a category in declaration order, if present.
    pub fn category_position(&self, label: &str) -> Option<usize> {
        self.product_names.get_index_of(label)
    }

    pub fn testimonial_phrases(&self) -> impl Iterator<Item = &String> {
        self.testimonial_phrases.iter()
    }

    pub fn archive_password_markers(&self) -> impl Iterator<Item = &String> {
        self.archive_password_markers.iter()
    }

    pub fn entry_counts(&self) -> LexiconCounts {
        LexiconCounts {
            bait_terms: self.bait_terms.len(),
            categories: self.product_names.len(),
            product_variants: self.product_names.values().map(BTreeSet::len).sum(),
            testimonial_phrases: self.testimonial_phrases.len(),
            archive_password_markers: self.archive_password_markers.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexiconCounts {
    pub bait_terms: usize,
    pub categories: usize,
    pub product_variants: usize,
    pub testimonial_phrases: usize,
    pub archive_password_markers: usize,
}

/// Assembles a lexicon, normalizing every entry and rejecting entries that
/// normalize to the empty string.
#[derive(Debug, Default)]
pub struct LexiconBuilder {
    bait_terms: Vec<String>,
    product_names: Vec<(String, Vec<String>)>,
    testimonial_phrases: Vec<String>,
    archive_password_markers: Vec<String>,
    error: Option<LexiconError>,
}

impl LexiconBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bait<'a>(mut self, terms: impl IntoIterator<Item = &'a str>) -> Self {
        self.bait_terms.extend(terms.into_iter().map(String::from));
        self
    }

    pub fn products<'a>(
        mut self,
        label: &str,
        variants: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        self.product_names.push((
            label.to_string(),
            variants.into_iter().map(String::from).collect(),
        ));
        self
    }

    pub fn testimonials<'a>(mut self, phrases: impl IntoIterator<Item = &'a str>) -> Self {
        self.testimonial_phrases
            .extend(phrases.into_iter().map(String::from));
        self
    }

    pub fn password_markers<'a>(mut self, markers: impl IntoIterator<Item = &'a str>) -> Self {
        self.archive_password_markers
            .extend(markers.into_iter().map(String::from));
        self
    }

    pub fn build(self) -> Result<KeywordLexicon, LexiconError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let normalize_set = |entries: Vec<String>,
                             section: &'static str|
         -> Result<BTreeSet<String>, LexiconError> {
            let mut out = BTreeSet::new();
            for entry in entries {
                let norm = normalize_text(&entry);
                if norm.is_empty() {
                    return Err(LexiconError::EmptyEntry(section));
                }
                out.insert(norm);
            }
            Ok(out)
        };

        let bait_terms = normalize_set(self.bait_terms, "bait_terms")?;
        let testimonial_phrases = normalize_set(self.testimonial_phrases, "testimonial_phrases")?;
        let archive_password_markers =
            normalize_set(self.archive_password_markers, "archive_password_markers")?;

        let mut product_names = IndexMap::new();
        for (label, variants) in self.product_names {
            let label = label.trim().to_string();
            if label.is_empty() {
                return Err(LexiconError::EmptyCategory);
            }
            if product_names.contains_key(&label) {
                return Err(LexiconError::DuplicateCategory(label));
            }
            let variants = normalize_set(variants, "product_names")?;
            if variants.is_empty() {
                return Err(LexiconError::EmptyVariantSet(label));
            }
            product_names.insert(label, variants);
        }

        Ok(KeywordLexicon {
            bait_terms,
            product_names,
            testimonial_phrases,
            archive_password_markers,
        })
    }
}
