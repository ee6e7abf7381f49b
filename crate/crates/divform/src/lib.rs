//! Division forms over the free one-generated algebra of the Σ laws.
//!
//! Elements are held in canonical x-division form ([`Elem`]); [`Engine`] multiplies and
//! compares them. [`DfTerm`] represents p-division forms for an arbitrary divisor,
//! [`Calculus`] evaluates their products and [`divide`] computes `|w|^p`.

mod calculus;
mod dfterm;
mod divide;
mod elem;
mod engine;
mod serial;

pub use calculus::{Calculus, CalculusStats, Clause, SharpWitness, Tier};
pub use dfterm::{AssocSeq, DfTerm};
pub use divide::{divide, hybrid_df, DivForm, Hybrid};
pub use elem::{Chain, Elem};
pub use engine::{Engine, Limits, Stats};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DfError {
    #[error("watchdog: {what} exceeded limit {limit}")]
    Watchdog { what: &'static str, limit: usize },
    #[error("invariant violation: {0}")]
    Invariant(String),
}
