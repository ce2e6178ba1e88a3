//! Shared fixtures for the benchmarks.

use nucleoq::nucdata::load_dataset;
use nucleoq::Dataset;
use std::path::Path;

/// The dataset shipped with the repository.
pub fn shipped_dataset() -> Dataset {
    load_dataset(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
        .expect("shipped dataset loads")
}
