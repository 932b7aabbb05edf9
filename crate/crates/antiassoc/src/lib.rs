//! Corpus, verification suites, reports and the command-line front end for
//! the classification of nilpotent antiassociative algebras of small
//! dimension. The arithmetic lives in [`antiassoc_core`].

pub mod corpus;
pub mod report;
pub mod schema;
pub mod suites;

pub use corpus::{bundled, load_corpus, parse_corpus, Corpus, CorpusError};
pub use report::{run, Format, Report, RunConfig};
pub use suites::{validate_corpus, Outcome, Record, Suite, SuiteConfig};
