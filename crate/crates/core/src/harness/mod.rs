//! Seeded suites: instance generation, verification runs, adversary
//! search and report assembly.

mod generate;

pub use generate::{generate, is_splittable, GeneratorProfile, MAX_PREFIX, MAX_STAGES, MAX_UNIVERSE};
mod adversary;

pub use adversary::{adversary_search, AdversaryFamily, Counterexample, MAX_PROBES};
mod suite;

pub use suite::{
    digest, run_suite, run_trial, write_reports, EntryReport, Outcomes, SuiteConfig, SuiteEntry,
    TrialLine, SPLIT_BOUND,
};
