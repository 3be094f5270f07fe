use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scoring::ITEM_COUNT;

const DEFAULT_ES: &str = include_str!("../../assets/phq9_es.json");

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("cannot read script {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("script is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid script: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItemPrompt {
    pub index: u8,
    pub prompt: String,
}

/// Everything the agent says: consent, the nine questions, repair replies
/// and closing feedback.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterviewScript {
    pub script_id: String,
    pub locale: String,
    pub consent_prompt: String,
    pub items: Vec<ItemPrompt>,
    pub clarification_reply: String,
    pub options_reply: String,
    pub feedback_negative: String,
    pub feedback_positive: String,
    pub crisis_appendix: String,
    pub closing_declined: String,
    pub closing_aborted: String,
}

impl InterviewScript {
    /// The bundled Spanish PHQ-9 script.
    pub fn default_es() -> InterviewScript {
        InterviewScript::from_json_str(DEFAULT_ES).expect("bundled script is valid")
    }

    pub fn default_es_json() -> &'static str {
        DEFAULT_ES
    }

    pub fn load(path: impl AsRef<Path>) -> Result<InterviewScript, ScriptError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ScriptError::Io {
            path: path.display().to_string(),
            source,
        })?;
        InterviewScript::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<InterviewScript, ScriptError> {
        let script: InterviewScript = serde_json::from_str(text)?;
        script.validate()?;
        Ok(script)
    }

    pub fn validate(&self) -> Result<(), ScriptError> {
        let invalid = |msg: String| Err(ScriptError::Invalid(msg));
        if self.script_id.trim().is_empty() {
            return invalid("script_id is empty".into());
        }
        if self.items.len() != ITEM_COUNT {
            return invalid(format!(
                "expected {ITEM_COUNT} items, found {}",
                self.items.len()
            ));
        }
        for (position, item) in self.items.iter().enumerate() {
            if usize::from(item.index) != position + 1 {
                return invalid(format!(
                    "item at position {} has index {}, expected {}",
                    position + 1,
                    item.index,
                    position + 1
                ));
            }
            if item.prompt.trim().is_empty() {
                return invalid(format!("item {} has an empty prompt", item.index));
            }
        }
        let texts = [
            ("consent_prompt", &self.consent_prompt),
            ("clarification_reply", &self.clarification_reply),
            ("options_reply", &self.options_reply),
            ("feedback_negative", &self.feedback_negative),
            ("feedback_positive", &self.feedback_positive),
            ("crisis_appendix", &self.crisis_appendix),
            ("closing_declined", &self.closing_declined),
            ("closing_aborted", &self.closing_aborted),
        ];
        for (name, text) in texts {
            if text.trim().is_empty() {
                return invalid(format!("{name} is empty"));
            }
        }
        Ok(())
    }

    /// Prompt for a 1-based item index.
    pub fn prompt(&self, index: u8) -> &str {
        &self.items[usize::from(index) - 1].prompt
    }
}
