//! Finite-state structured interview: consent, nine PHQ-9 items, repair
//! replies and closing feedback.

mod engine;
mod script;

pub use engine::{
    AgentTurn, InterviewError, Interviewer, Phase, SessionState, MAX_CONSECUTIVE_NOMATCH,
};
pub use script::{InterviewScript, ItemPrompt, ScriptError};
