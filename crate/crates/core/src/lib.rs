//! Rule-based named-entity annotation for French text.
//!
//! The pipeline types proper names against a configurable hierarchy, profiles
//! the facet each mention puts forward in context (an organization as
//! institution, place or staff), resolves definite descriptions such as
//! `l'organisation de Kofi Annan` through entity templates, and scores output
//! against gold annotations with precision, recall and P&R.
//!
//! ```
//! use nefocal::{Document, Resources};
//!
//! let res = Resources::bundled();
//! let out = res.annotate(&Document::new("doc", "L'ONU était en grève hier."));
//! assert_eq!(out[0].mention.sem.focalisation.to_string(), "human_org");
//! ```

use std::path::Path;

use num_rational::Ratio;
use thiserror::Error;

pub mod evaluation;
pub mod focalizer;
pub mod hierarchy;
pub mod kb;
pub mod lexicon;
pub mod matcher;
pub mod model;
pub mod pipeline;
pub mod recognizer;
pub mod resolver;
pub mod scalar;
pub mod tokenizer;

pub use evaluation::{fmeasure, GoldAnnotation, MatchMode, ScoreKeys};
pub use hierarchy::TypeHierarchy;
pub use kb::{EntityTemplate, TemplateStore};
pub use model::{Document, Focalisation, Mention, SemFrame, Span};
pub use pipeline::{ResourcePaths, Resources};
pub use scalar::Scalar;

/// Scores in double precision.
pub type PrReport = evaluation::PrReport<f64>;
pub type PrScores = evaluation::PrScores<f64>;
/// Scores as exact fractions of counts.
pub type ExactPrReport = evaluation::PrReport<Ratio<i64>>;
pub type ExactPrScores = evaluation::PrScores<Ratio<i64>>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}")]
    Hierarchy {
        path: String,
        source: hierarchy::HierarchyError,
    },
    #[error("{path}")]
    Lexicon {
        path: String,
        source: lexicon::LexiconError,
    },
    #[error("{path}")]
    Templates { path: String, source: kb::KbError },
    #[error("{path}")]
    Evaluation {
        path: String,
        source: evaluation::EvalError,
    },
}

pub(crate) fn read_resource(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
