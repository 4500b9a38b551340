//! Test support: brute-force reference implementations of the matching
//! and detection semantics, plus seeded generators for synthetic scan
//! inputs. The references share only primitive infrastructure (stdlib
//! case mapping, the NFC implementation, the URL parser) with the
//! production code; all scanning, boundary, and decision logic here is
//! written independently so the suites can check the two against each
//! other.

pub mod reference;
pub mod synth;
