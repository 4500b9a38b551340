//! Seeded generators for synthetic lexicons, texts, and video metadata.
//!
//! The corpora deliberately mix clean text, entry fragments glued to other
//! words (boundary traps like "scrack"/"cracked"), multi-word phrases
//! split across fields, odd casing, extra whitespace, and non-Latin
//! noise, so the oracle-equivalence suites exercise the edges.

use chrono::{TimeZone, Utc};
use rand::prelude::*;
use rand::rngs::StdRng;

use tubescan_core::lexicon::{KeywordLexicon, LexiconBuilder};
use tubescan_core::model::{LocalizedText, VideoMetadata, ViewStats};

pub fn seeded_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

const BAIT_POOL: &[&str] = &[
    "free", "download", "crack", "keygen", "cheat", "hack", "license key", "full version",
    "gratuit", "kostenlos", "бесплатно",
];

const PRODUCT_POOL: &[(&str, &[&str])] = &[
    ("Adobe Photoshop", &["photoshop", "adobe photoshop"]),
    ("Roblox", &["roblox"]),
    ("FL Studio", &["fl studio", "fruity loops"]),
    ("Valorant", &["valorant"]),
    ("AutoCAD", &["autocad"]),
    ("Vegas Pro", &["vegas pro", "sony vegas"]),
];

const TESTIMONIAL_POOL: &[&str] = &[
    "it worked! thanks!",
    "works like a charm!",
    "100% legit",
    "no virus, just follow the steps!",
];

const MARKER_POOL: &[&str] = &["password", "pass:", "zip password"];

const NOISE_POOL: &[&str] = &[
    "relaxing", "piano", "music", "tutorial", "nature", "vlog", "recipe", "travel", "sunset",
    "café", "naïve", "umculo", "omnandi", "wokuphumula", "Straße", "ΑΣΦΑΛΗΣ", "音楽", "ддд",
    "episode", "compilation", "hour", "2025", "best", "top10",
];

const LANGUAGE_POOL: &[&str] = &["en", "es", "pt-BR", "ru", "fr", "de", "hi", "zu", "su", "eo"];

const WHITESPACE_POOL: &[&str] = &[" ", "  ", "\t", "\n", " \t "];

pub fn gen_lexicon(rng: &mut StdRng) -> KeywordLexicon {
    let mut builder = LexiconBuilder::new();
    let bait_count = rng.gen_range(2..=5);
    let mut bait: Vec<&str> = BAIT_POOL.to_vec();
    bait.shuffle(rng);
    builder = builder.bait(bait.into_iter().take(bait_count));

    let product_count = rng.gen_range(1..=4);
    let mut products: Vec<&(&str, &[&str])> = PRODUCT_POOL.iter().collect();
    products.shuffle(rng);
    for (label, variants) in products.into_iter().take(product_count) {
        let keep = rng.gen_range(1..=variants.len());
        builder = builder.products(label, variants.iter().take(keep).copied());
    }

    let mut testimonials: Vec<&str> = TESTIMONIAL_POOL.to_vec();
    testimonials.shuffle(rng);
    builder = builder.testimonials(testimonials.into_iter().take(rng.gen_range(1..=3)));

    let mut markers: Vec<&str> = MARKER_POOL.to_vec();
    markers.shuffle(rng);
    builder = builder.password_markers(markers.into_iter().take(rng.gen_range(1..=2)));

    builder.build().expect("synthetic lexicon is valid")
}

fn mangle_case(rng: &mut StdRng, word: &str) -> String {
    match rng.gen_range(0..4) {
        0 => word.to_uppercase(),
        1 => word
            .chars()
            .enumerate()
            .map(|(i, c)| {
                if i % 2 == 0 {
                    c.to_uppercase().next().unwrap_or(c)
                } else {
                    c
                }
            })
            .collect(),
        _ => word.to_string(),
    }
}

fn lexicon_entry(rng: &mut StdRng, lexicon: &KeywordLexicon) -> String {
    let mut entries: Vec<String> = lexicon.bait_terms().cloned().collect();
    for (_, variants) in lexicon.product_names() {
        entries.extend(variants.iter().cloned());
    }
    entries.extend(lexicon.testimonial_phrases().cloned());
    entries.extend(lexicon.archive_password_markers().cloned());
    entries.choose(rng).expect("lexicon has entries").clone()
}

/// Random text: noise words, lexicon entries, and boundary traps, joined
/// with random whitespace and punctuation.
pub fn gen_text(rng: &mut StdRng, lexicon: &KeywordLexicon, entry_probability: f64) -> String {
    let pieces = rng.gen_range(0..=10);
    let mut out = String::new();
    for _ in 0..pieces {
        let piece = if rng.gen_bool(entry_probability) {
            let entry = lexicon_entry(rng, lexicon);
            match rng.gen_range(0..6) {
                // Boundary traps: glue the entry to word characters.
                0 => format!("s{entry}"),
                1 => format!("{entry}ed"),
                2 => format!("x{entry}y"),
                // Punctuation neighbors still match.
                3 => format!("({entry})"),
                _ => mangle_case(rng, &entry),
            }
        } else {
            mangle_case(rng, NOISE_POOL.choose(rng).expect("noise"))
        };
        if !out.is_empty() {
            out.push_str(WHITESPACE_POOL.choose(rng).expect("ws"));
        }
        out.push_str(&piece);
        if rng.gen_bool(0.15) {
            out.push(*['!', '.', ',', '?'].choose(rng).expect("punct"));
        }
    }
    out
}

/// Random metadata record: default snippet plus a handful of
/// localizations, each text independently benign or baited.
pub fn gen_metadata(rng: &mut StdRng, lexicon: &KeywordLexicon, index: usize) -> VideoMetadata {
    let default_language = if rng.gen_bool(0.8) {
        Some(*LANGUAGE_POOL.choose(rng).expect("lang"))
    } else {
        None
    };
    // Bias toward benign defaults so misrepresentation cases are common.
    let default_dirtiness = if rng.gen_bool(0.7) { 0.05 } else { 0.5 };
    let title = gen_text(rng, lexicon, default_dirtiness);
    let description = gen_text(rng, lexicon, default_dirtiness);

    let loc_count = rng.gen_range(0..=4);
    let mut localizations = Vec::new();
    for _ in 0..loc_count {
        let tag = *LANGUAGE_POOL.choose(rng).expect("lang");
        let dirtiness = if rng.gen_bool(0.5) { 0.6 } else { 0.05 };
        localizations.push((
            tag.to_string(),
            LocalizedText::new(
                tag,
                gen_text(rng, lexicon, dirtiness),
                gen_text(rng, lexicon, dirtiness),
            ),
        ));
    }

    VideoMetadata::new(
        format!("synth{index:05}"),
        format!("chan{:03}", rng.gen_range(0..50)),
        Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap()
            + chrono::Duration::hours(rng.gen_range(0..4000)),
        default_language,
        title,
        description,
        localizations,
        ViewStats {
            view_count: rng.gen_range(0..2_000_000),
            like_count: rng.gen_bool(0.7).then(|| rng.gen_range(0..50_000)),
            comment_count: rng.gen_bool(0.5).then(|| rng.gen_range(0..5_000)),
        },
    )
}

/// Random URL-bearing text for extractor equivalence checks.
pub fn gen_url_text(rng: &mut StdRng, table: &tubescan_core::HostTable) -> String {
    let hosts: Vec<&String> = table.all_hosts().collect();
    let pieces = rng.gen_range(0..=8);
    let mut out = String::new();
    for _ in 0..pieces {
        let piece = match rng.gen_range(0..8) {
            0 => format!(
                "https://{}/file/{}",
                hosts.choose(rng).expect("host"),
                rng.gen_range(0..999)
            ),
            1 => format!("http://{}", hosts.choose(rng).expect("host")),
            2 => format!("{}/dl{}", hosts.choose(rng).expect("host"), rng.gen_range(0..99)),
            3 => hosts.choose(rng).expect("host").to_string(),
            4 => format!("not{}", hosts.choose(rng).expect("host")),
            5 => format!("(see https://{}/x)", hosts.choose(rng).expect("host")),
            6 => format!("HTTPS://{}/UP", hosts.choose(rng).expect("host").to_uppercase()),
            _ => NOISE_POOL.choose(rng).expect("noise").to_string(),
        };
        if !out.is_empty() {
            out.push_str(WHITESPACE_POOL.choose(rng).expect("ws"));
        }
        out.push_str(&piece);
        if rng.gen_bool(0.2) {
            out.push(*['.', ',', '!', ':'].choose(rng).expect("punct"));
        }
    }
    out
}
