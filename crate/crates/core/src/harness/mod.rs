//! Independent brute-force oracles, finite searches, and the named
//! experiment suites with their JSON reports.

mod brute;
mod report;
mod search;
mod suites;

pub use brute::{brute_measure, brute_meets_or_avoids, MAX_BRUTE_COORDINATES};
pub use report::{ExperimentReport, Verdict, ARTIFACT_VERSION, REPORT_DIR_ENV};
pub use search::{brute_search_reduction, SearchResult, MAX_SEARCH_DOMAIN, NONE_WITHIN_NOTE};
pub use suites::{
    capture_fixtures, measure_corpus, random_constraint_set, replay, run_suite,
    subset_pair_fixtures, SuiteConfig, SUITE_NAMES,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("brute force needs at most {MAX_BRUTE_COORDINATES} coordinates, got {0}")]
    TooManyCoordinates(usize),
    #[error("search domain {0} exceeds {MAX_SEARCH_DOMAIN}")]
    DomainTooLarge(u64),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },
}
