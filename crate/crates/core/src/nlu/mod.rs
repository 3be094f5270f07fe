//! Deterministic answer understanding: text normalization, fuzzy token
//! similarity and lexicon-driven matching of answers to Likert levels.

mod lexicon;
mod matcher;
mod normalize;
mod similarity;

pub use lexicon::{
    LevelEntry, Lexicon, LexiconError, LexiconFile, LintWarning, DEFAULT_THRESHOLD,
    DEFAULT_TIE_EPSILON,
};
pub use matcher::{match_consent, match_level, ConsentMatch, MatchResult, COVERAGE_PENALTY};
pub use normalize::{normalize, normalize_joined};
pub use similarity::{edit_distance, token_similarity};
