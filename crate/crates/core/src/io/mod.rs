//! Text input, JSON reports, command dispatch, and the random corpus.

pub mod analysis;
pub mod corpus;
pub mod dsl;
pub mod report;

pub use analysis::{analyze_document, Analysis, Command, Flags};
pub use corpus::{run_corpus, CorpusParams, CorpusRun, KMode};
pub use report::{run_command, ReportDocument};
