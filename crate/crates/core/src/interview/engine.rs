use std::collections::BTreeMap;
use std::sync::Arc;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use uuid::Uuid;

use super::script::{InterviewScript, ScriptError};
use crate::nlu::{match_consent, match_level, ConsentMatch, Lexicon, MatchResult};
use crate::scoring::{build_feedback, Channel, Level, ScreeningResult, ITEM_COUNT};

/// Consecutive unrecognized answers to one item before the interview stops.
pub const MAX_CONSECUTIVE_NOMATCH: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Phase {
    AwaitingConsent,
    AwaitingItem { item: u8 },
    Completed,
    Declined,
    Aborted,
}

impl Phase {
    pub fn is_terminal(self) -> bool {
        matches!(self, Phase::Completed | Phase::Declined | Phase::Aborted)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterviewError {
    #[error("session is already {0:?}")]
    Terminal(Phase),
    #[error("session was started with script {session:?}, not {script:?}")]
    ScriptMismatch { session: String, script: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub session_id: Uuid,
    pub script_id: String,
    pub phase: Phase,
    pub collected: BTreeMap<u8, Level>,
    pub consecutive_nomatch: u8,
    pub created_at: DateTime<Utc>,
    pub channel: Channel,
    pub transcript_enabled: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transcript: Vec<String>,
}

/// What the agent says after one user message.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentTurn {
    pub messages: Vec<String>,
    pub new_phase: Phase,
    pub result: Option<ScreeningResult>,
}

/// Conducts consent plus the nine-item interview for any number of sessions.
///
/// The engine holds no per-session data; callers own each `SessionState` and
/// must apply a session's turns one at a time.
#[derive(Debug, Clone)]
pub struct Interviewer {
    script: Arc<InterviewScript>,
    lexicon: Arc<Lexicon>,
}

impl Interviewer {
    pub fn new(
        script: impl Into<Arc<InterviewScript>>,
        lexicon: impl Into<Arc<Lexicon>>,
    ) -> Result<Interviewer, ScriptError> {
        let script = script.into();
        script.validate()?;
        Ok(Interviewer {
            script,
            lexicon: lexicon.into(),
        })
    }

    /// Bundled Spanish script and lexicon.
    pub fn default_es() -> Interviewer {
        Interviewer::new(InterviewScript::default_es(), Lexicon::shipped_es())
            .expect("bundled script is valid")
    }

    pub fn script(&self) -> &InterviewScript {
        &self.script
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn start_session(&self, channel: Channel) -> (SessionState, AgentTurn) {
        self.start_session_at(channel, Utc::now())
    }

    pub fn start_session_at(
        &self,
        channel: Channel,
        now: DateTime<Utc>,
    ) -> (SessionState, AgentTurn) {
        let state = SessionState {
            session_id: Uuid::new_v4(),
            script_id: self.script.script_id.clone(),
            phase: Phase::AwaitingConsent,
            collected: BTreeMap::new(),
            consecutive_nomatch: 0,
            created_at: now,
            channel,
            transcript_enabled: false,
            transcript: Vec::new(),
        };
        let turn = AgentTurn {
            messages: vec![self.script.consent_prompt.clone()],
            new_phase: state.phase,
            result: None,
        };
        (state, turn)
    }

    pub fn advance(
        &self,
        session: &mut SessionState,
        utterance: &str,
    ) -> Result<AgentTurn, InterviewError> {
        self.advance_at(session, utterance, Utc::now())
    }

    /// Applies one user message. `now` stamps the result if this turn
    /// completes the interview.
    pub fn advance_at(
        &self,
        session: &mut SessionState,
        utterance: &str,
        now: DateTime<Utc>,
    ) -> Result<AgentTurn, InterviewError> {
        if session.phase.is_terminal() {
            return Err(InterviewError::Terminal(session.phase));
        }
        if session.script_id != self.script.script_id {
            return Err(InterviewError::ScriptMismatch {
                session: session.script_id.clone(),
                script: self.script.script_id.clone(),
            });
        }
        if session.transcript_enabled {
            session.transcript.push(utterance.to_owned());
        }

        let (messages, result) = match session.phase {
            Phase::AwaitingConsent => (self.on_consent(session, utterance), None),
            Phase::AwaitingItem { item } => self.on_item(session, item, utterance, now),
            _ => unreachable!("terminal phases return early"),
        };
        Ok(AgentTurn {
            messages,
            new_phase: session.phase,
            result,
        })
    }

    fn on_consent(&self, session: &mut SessionState, utterance: &str) -> Vec<String> {
        match match_consent(utterance, &self.lexicon) {
            ConsentMatch::Affirm => {
                session.phase = Phase::AwaitingItem { item: 1 };
                vec![self.script.prompt(1).to_owned()]
            }
            ConsentMatch::Deny => {
                session.phase = Phase::Declined;
                vec![self.script.closing_declined.clone()]
            }
            ConsentMatch::NoMatch => vec![self.script.consent_prompt.clone()],
        }
    }

    fn on_item(
        &self,
        session: &mut SessionState,
        item: u8,
        utterance: &str,
        now: DateTime<Utc>,
    ) -> (Vec<String>, Option<ScreeningResult>) {
        let level = match match_level(utterance, &self.lexicon) {
            MatchResult::Level { level, .. } => level,
            MatchResult::NoMatch { .. } => {
                session.consecutive_nomatch += 1;
                let reply = match session.consecutive_nomatch {
                    1 => self.script.clarification_reply.clone(),
                    2 => self.script.options_reply.clone(),
                    _ => {
                        session.phase = Phase::Aborted;
                        self.script.closing_aborted.clone()
                    }
                };
                return (vec![reply], None);
            }
        };

        session.consecutive_nomatch = 0;
        session.collected.insert(item, level);
        if usize::from(item) < ITEM_COUNT {
            session.phase = Phase::AwaitingItem { item: item + 1 };
            return (vec![self.script.prompt(item + 1).to_owned()], None);
        }

        let mut scores = [Level::NOT_AT_ALL; ITEM_COUNT];
        for (index, level) in &session.collected {
            scores[usize::from(*index) - 1] = *level;
        }
        let mut result = ScreeningResult::new(session.session_id, scores, now, session.channel);
        if session.transcript_enabled {
            result.transcript = Some(session.transcript.clone());
        }
        session.phase = Phase::Completed;
        (build_feedback(&result, &self.script), Some(result))
    }
}
