//! Exact Stanley depth for squarefree monomial ideals and their quotients.
//!
//! Ideals are turned into characteristic posets inside `2^[n]`
//! ([`poset`]), whose interval partitions are searched by the [`engine`].
//! Partitions come back as [`certificate::PartitionCertificate`]s that can be
//! checked independently. The [`bounds`] module collects closed-form bounds
//! used to bracket the search.

pub mod binomial;
pub mod bounds;
pub mod certificate;
pub mod engine;
mod error;
pub mod format;
pub mod monomial;
pub mod poset;
pub mod reproduce;

pub use certificate::{verify_partition, CertificateDocument, PartitionCertificate, Violation};
pub use engine::{
    alpha_test, decide_at_least, empty_cut_bound, naive_oracle, sdepth_exact, Decision,
    SdepthResult, SdepthValue, SearchOptions, SearchStats,
};
pub use error::{Error, Result};
pub use monomial::{cycle_ideal, line_ideal, minimalize, veronese_ideal, Monomial, MonomialIdeal};
pub use poset::{Interval, Subset, SubsetPoset};
