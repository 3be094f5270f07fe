//! PHQ-9 scalar semantics: item levels, totals, the dichotomous cutoff and
//! the feedback that follows from them.

use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use uuid::Uuid;

use crate::interview::InterviewScript;

pub const ITEM_COUNT: usize = 9;
pub const MAX_TOTAL: u8 = 27;
/// Totals at or above this value screen positive.
pub const CUTOFF: u8 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoringError {
    #[error("expected {ITEM_COUNT} item scores, got {0}")]
    Arity(usize),
    #[error("item {item} has score {value}, expected 0..=3")]
    ItemOutOfRange { item: usize, value: u8 },
    #[error("total {0} is outside 0..=27")]
    TotalOutOfRange(u8),
}

/// One Likert answer: 0 "not at all" up to 3 "nearly every day".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Level(u8);

impl Level {
    pub const NOT_AT_ALL: Level = Level(0);
    pub const SEVERAL_DAYS: Level = Level(1);
    pub const MORE_THAN_HALF: Level = Level(2);
    pub const NEARLY_EVERY_DAY: Level = Level(3);

    pub const ALL: [Level; 4] = [
        Self::NOT_AT_ALL,
        Self::SEVERAL_DAYS,
        Self::MORE_THAN_HALF,
        Self::NEARLY_EVERY_DAY,
    ];

    pub fn new(value: u8) -> Option<Self> {
        (value <= 3).then_some(Level(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl TryFrom<u8> for Level {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Level::new(value).ok_or_else(|| format!("level {value} is outside 0..=3"))
    }
}

impl From<Level> for u8 {
    fn from(level: Level) -> u8 {
        level.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScreenClass {
    Negative,
    Positive,
}

impl ScreenClass {
    pub fn is_positive(self) -> bool {
        self == ScreenClass::Positive
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScreenClass::Negative => "negative",
            ScreenClass::Positive => "positive",
        }
    }
}

/// Where a screening was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Web,
    Cli,
    Api,
}

/// Sum of nine item scores.
pub fn total_score(item_scores: &[u8]) -> Result<u8, ScoringError> {
    if item_scores.len() != ITEM_COUNT {
        return Err(ScoringError::Arity(item_scores.len()));
    }
    item_scores
        .iter()
        .enumerate()
        .try_fold(0u8, |acc, (i, &value)| {
            if value > 3 {
                Err(ScoringError::ItemOutOfRange { item: i + 1, value })
            } else {
                Ok(acc + value)
            }
        })
}

pub fn classify(total: u8) -> Result<ScreenClass, ScoringError> {
    match total {
        t if t > MAX_TOTAL => Err(ScoringError::TotalOutOfRange(t)),
        t if t >= CUTOFF => Ok(ScreenClass::Positive),
        _ => Ok(ScreenClass::Negative),
    }
}

/// Outcome of one completed interview.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreeningResult {
    pub session_id: Uuid,
    pub item_scores: [Level; ITEM_COUNT],
    pub total: u8,
    pub positive: bool,
    pub item9_flag: bool,
    pub completed_at: DateTime<Utc>,
    pub channel: Channel,
    /// Raw user utterances, only present when the session opted into
    /// transcript capture. The journal refuses results that still carry it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcript: Option<Vec<String>>,
}

impl ScreeningResult {
    pub fn new(
        session_id: Uuid,
        item_scores: [Level; ITEM_COUNT],
        completed_at: DateTime<Utc>,
        channel: Channel,
    ) -> Self {
        let total: u8 = item_scores.iter().map(|l| l.value()).sum();
        ScreeningResult {
            session_id,
            item_scores,
            total,
            positive: total >= CUTOFF,
            item9_flag: item_scores[ITEM_COUNT - 1].value() > 0,
            completed_at,
            channel,
            transcript: None,
        }
    }

    pub fn class(&self) -> ScreenClass {
        if self.positive {
            ScreenClass::Positive
        } else {
            ScreenClass::Negative
        }
    }

    /// Checks the derived fields against the item scores.
    pub fn validate(&self) -> Result<(), String> {
        let total: u8 = self.item_scores.iter().map(|l| l.value()).sum();
        if total != self.total {
            return Err(format!(
                "total {} does not equal item sum {total}",
                self.total
            ));
        }
        if self.positive != (total >= CUTOFF) {
            return Err(format!("positive flag inconsistent with total {total}"));
        }
        if self.item9_flag != (self.item_scores[ITEM_COUNT - 1].value() > 0) {
            return Err("item 9 flag inconsistent with item 9 score".into());
        }
        Ok(())
    }

    /// Copy without any captured transcript.
    pub fn anonymized(&self) -> Self {
        ScreeningResult {
            transcript: None,
            ..self.clone()
        }
    }
}

/// Closing messages for a completed screening.
pub fn build_feedback(result: &ScreeningResult, script: &InterviewScript) -> Vec<String> {
    let mut messages = vec![if result.positive {
        script.feedback_positive.clone()
    } else {
        script.feedback_negative.clone()
    }];
    if result.item9_flag {
        messages.push(script.crisis_appendix.clone());
    }
    messages
}
