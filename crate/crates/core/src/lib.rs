//! Centering-based resolution of intra- and inter-sentential anaphora.
//!
//! Documents arrive pre-annotated in a line-oriented format
//! ([`corpus_io`]). They are cut into utterances ([`segmentation`]), each
//! anaphor is resolved by one of four proposal strategies ([`resolution`])
//! while forward- and backward-looking centers are tracked ([`centering`]),
//! and the predictions are scored against gold chains ([`evaluation`]).

pub mod centering;
pub mod cli;
pub mod corpus_io;
pub mod evaluation;
pub mod model;
pub mod resolution;
pub mod segmentation;
pub mod state;
pub mod synth;
pub mod tables;

pub use centering::{compute_cb, compute_cf};
pub use corpus_io::{parse_document, serialize_document, ParseDiagnostic, Parsed, Severity};
pub use model::{
    validate_document, AnaphorKind, Clause, ClauseKind, Document, EntityId, Markable, Role,
    Sentence, Violation,
};
pub use resolution::{resolve_document, ResolutionConfig, ResolutionReport, Strategy};
pub use segmentation::{
    classify_sentence, clause_segmentation_linear, segment, SentenceClass, Utterance,
};
pub use state::{context_bound, CenteringState, CfEntry, ResolutionState, Stage};
