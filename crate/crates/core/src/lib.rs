//! Conversational PHQ-9 depression screening: interview engine, Spanish
//! answer matcher, scoring, persistence and validation statistics.

pub mod interview;
pub mod nlu;
pub mod psychometrics;
pub mod scoring;
pub mod store;
pub mod synthetic;

pub use interview::{AgentTurn, InterviewScript, Interviewer, Phase, SessionState};
pub use nlu::{Lexicon, MatchResult};
pub use scoring::{Channel, Level, ScreenClass, ScreeningResult};
