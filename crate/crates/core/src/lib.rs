//! Core of the seedforge entity-population workbench.
//!
//! A user grows a domain dictionary by sending its active positive entries to
//! expansion backends, judging the returned candidates, and folding the
//! judgments back in. This crate holds everything that does not need a
//! network: the dictionary and session model, the embedding and category
//! expansion backends, and the document highlighter.
//!
//! Numeric code (vector storage, cosine ranking) is generic over a [`Scalar`];
//! the aliases below pick the concrete precisions used in practice.

pub mod category;
pub mod dictionary;
pub mod embedding;
mod error;
pub mod expansion;
pub mod fold;
pub mod highlight;
mod scalar;
pub mod session;

pub use category::{CategoryIndex, CategorySuggestion, DEFAULT_MIN_SUPPORT};
pub use dictionary::{Dictionary, EntityEntry, ExportFormat, ImportFormat, Label};
pub use error::{Error, Result};
pub use expansion::{CandidateEntry, ExpansionRequest};
pub use highlight::{HighlightOptions, HighlightSpan, RenderFormat};
pub use scalar::Scalar;
pub use session::{FeedbackDecision, Session, SessionStore, Verdict};

/// Single-precision embedding store, the layout GloVe vectors ship in.
pub type EmbeddingStore = embedding::EmbeddingStore<f32>;

/// Double-precision embedding store.
pub type EmbeddingStore64 = embedding::EmbeddingStore<f64>;
