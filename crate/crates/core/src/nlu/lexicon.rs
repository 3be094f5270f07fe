use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::normalize::normalize;
use super::similarity::Term;
use crate::scoring::Level;

pub const DEFAULT_THRESHOLD: f64 = 0.75;
pub const DEFAULT_TIE_EPSILON: f64 = 1e-9;

const SHIPPED_ES: &str = include_str!("../../assets/lexicon_es.json");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("phrase {phrase:?} normalizes to nothing ({list})")]
    EmptyPhrase { list: String, phrase: String },
    #[error("phrase {phrase:?} appears in both {first} and {second}")]
    Duplicate {
        phrase: String,
        first: String,
        second: String,
    },
}

/// On-disk lexicon layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconFile {
    pub locale: String,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_tie_epsilon")]
    pub tie_epsilon: f64,
    pub levels: Vec<LevelEntry>,
    pub affirm_phrases: Vec<String>,
    pub deny_phrases: Vec<String>,
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

fn default_tie_epsilon() -> f64 {
    DEFAULT_TIE_EPSILON
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelEntry {
    pub score: u8,
    pub canonical: String,
    pub phrases: Vec<String>,
}

/// A phrase prepared for matching.
#[derive(Debug, Clone)]
pub(crate) struct Phrase {
    pub text: String,
    pub tokens: Vec<Term>,
    pub joined: Term,
}

impl Phrase {
    pub(crate) fn prepare(text: &str) -> Option<Phrase> {
        let tokens = normalize(text);
        if tokens.is_empty() {
            return None;
        }
        Some(Phrase {
            text: text.to_owned(),
            joined: Term::new(&tokens.join(" ")),
            tokens: tokens.iter().map(|t| Term::new(t)).collect(),
        })
    }
}

/// Validated, immutable synonym lexicon.
#[derive(Debug, Clone)]
pub struct Lexicon {
    source: LexiconFile,
    pub(crate) levels: [Vec<Phrase>; 4],
    pub(crate) affirm: Vec<Phrase>,
    pub(crate) deny: Vec<Phrase>,
}

impl Lexicon {
    /// The Spanish lexicon bundled with the crate.
    pub fn shipped_es() -> Lexicon {
        Lexicon::from_json_str(SHIPPED_ES).expect("bundled lexicon is valid")
    }

    pub fn shipped_es_json() -> &'static str {
        SHIPPED_ES
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Lexicon::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Lexicon, LexiconError> {
        let file: LexiconFile = serde_json::from_str(text)?;
        Lexicon::from_file(file)
    }

    pub fn from_file(file: LexiconFile) -> Result<Lexicon, LexiconError> {
        if !(file.threshold > 0.0 && file.threshold <= 1.0) {
            return Err(LexiconError::Schema(format!(
                "threshold {} must lie in (0, 1]",
                file.threshold
            )));
        }
        if !(file.tie_epsilon >= 0.0 && file.tie_epsilon.is_finite()) {
            return Err(LexiconError::Schema(
                "tie_epsilon must be a finite non-negative number".into(),
            ));
        }
        if file.levels.len() != 4 {
            return Err(LexiconError::Schema(format!(
                "expected 4 levels, found {}",
                file.levels.len()
            )));
        }

        let mut levels: [Vec<Phrase>; 4] = Default::default();
        let mut seen: HashMap<String, String> = HashMap::new();
        let mut register = |list: &str, phrase: &Phrase| -> Result<bool, LexiconError> {
            let key: String = phrase.joined.chars.iter().collect();
            match seen.get(&key) {
                Some(first) if first != list => Err(LexiconError::Duplicate {
                    phrase: phrase.text.clone(),
                    first: first.clone(),
                    second: list.to_owned(),
                }),
                Some(_) => Ok(false),
                None => {
                    seen.insert(key, list.to_owned());
                    Ok(true)
                }
            }
        };

        for entry in &file.levels {
            let level = Level::new(entry.score).ok_or_else(|| {
                LexiconError::Schema(format!("level score {} is outside 0..=3", entry.score))
            })?;
            let list = format!("level {}", level);
            if !levels[level.index()].is_empty() {
                return Err(LexiconError::Schema(format!("{list} is defined twice")));
            }
            if entry.phrases.is_empty() {
                return Err(LexiconError::Schema(format!("{list} has no phrases")));
            }
            let canonical = normalize(&entry.canonical);
            if !entry.phrases.iter().any(|p| normalize(p) == canonical) {
                return Err(LexiconError::Schema(format!(
                    "{list}: canonical phrase {:?} is not among its phrases",
                    entry.canonical
                )));
            }
            let mut prepared = Vec::with_capacity(entry.phrases.len());
            for text in &entry.phrases {
                let phrase = Phrase::prepare(text).ok_or_else(|| LexiconError::EmptyPhrase {
                    list: list.clone(),
                    phrase: text.clone(),
                })?;
                if register(&list, &phrase)? {
                    prepared.push(phrase);
                }
            }
            levels[level.index()] = prepared;
        }

        let mut prepare_list = |name: &str,
                                items: &[String]|
         -> Result<Vec<Phrase>, LexiconError> {
            if items.is_empty() {
                return Err(LexiconError::Schema(format!("{name} must not be empty")));
            }
            let mut out = Vec::with_capacity(items.len());
            for text in items {
                let phrase = Phrase::prepare(text).ok_or_else(|| LexiconError::EmptyPhrase {
                    list: name.to_owned(),
                    phrase: text.clone(),
                })?;
                if register(name, &phrase)? {
                    out.push(phrase);
                }
            }
            Ok(out)
        };
        let affirm = prepare_list("affirm_phrases", &file.affirm_phrases)?;
        let deny = prepare_list("deny_phrases", &file.deny_phrases)?;

        Ok(Lexicon {
            source: file,
            levels,
            affirm,
            deny,
        })
    }

    pub fn locale(&self) -> &str {
        &self.source.locale
    }

    pub fn threshold(&self) -> f64 {
        self.source.threshold
    }

    pub fn tie_epsilon(&self) -> f64 {
        self.source.tie_epsilon
    }

    /// Copy of this lexicon with a different acceptance threshold.
    pub fn with_threshold(&self, threshold: f64) -> Result<Lexicon, LexiconError> {
        let mut file = self.source.clone();
        file.threshold = threshold;
        Lexicon::from_file(file)
    }

    pub fn file(&self) -> &LexiconFile {
        &self.source
    }

    /// Distinct (after normalization) phrases of one level, in file order.
    pub fn phrases(&self, level: Level) -> impl Iterator<Item = &str> {
        self.levels[level.index()].iter().map(|p| p.text.as_str())
    }

    pub fn affirm_phrases(&self) -> impl Iterator<Item = &str> {
        self.affirm.iter().map(|p| p.text.as_str())
    }

    pub fn deny_phrases(&self) -> impl Iterator<Item = &str> {
        self.deny.iter().map(|p| p.text.as_str())
    }

    pub fn canonical(&self, level: Level) -> &str {
        self.source
            .levels
            .iter()
            .find(|e| e.score == level.value())
            .map(|e| e.canonical.as_str())
            .unwrap_or_default()
    }
}

/// Non-fatal findings about a lexicon that loads correctly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LintWarning {
    /// Two raw phrases in one list normalize to the same tokens.
    RedundantPhrase { list: String, phrase: String },
    /// A phrase shorter than four normalized characters cannot absorb a
    /// one-character typo at the default threshold.
    ShortPhrase { list: String, phrase: String },
    /// A phrase occurs as a contiguous token run inside a phrase of another
    /// level, so a typo in the longer phrase can flip the matched level.
    Embedded {
        inner: String,
        inner_list: String,
        outer: String,
        outer_list: String,
    },
}

impl std::fmt::Display for LintWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LintWarning::RedundantPhrase { list, phrase } => {
                write!(
                    f,
                    "{list}: {phrase:?} duplicates an earlier phrase after normalization"
                )
            }
            LintWarning::ShortPhrase { list, phrase } => {
                write!(f, "{list}: {phrase:?} is shorter than 4 characters")
            }
            LintWarning::Embedded {
                inner,
                inner_list,
                outer,
                outer_list,
            } => write!(
                f,
                "{inner_list}: {inner:?} is embedded in {outer_list} phrase {outer:?}"
            ),
        }
    }
}

impl Lexicon {
    pub fn lint(&self) -> Vec<LintWarning> {
        let mut warnings = Vec::new();

        let file = &self.source;
        let mut raw_lists: Vec<(String, &Vec<String>)> = file
            .levels
            .iter()
            .map(|e| (format!("level {}", e.score), &e.phrases))
            .collect();
        raw_lists.push(("affirm_phrases".into(), &file.affirm_phrases));
        raw_lists.push(("deny_phrases".into(), &file.deny_phrases));
        for (list, phrases) in &raw_lists {
            let mut seen = std::collections::HashSet::new();
            for phrase in phrases.iter() {
                if !seen.insert(normalize(phrase)) {
                    warnings.push(LintWarning::RedundantPhrase {
                        list: list.clone(),
                        phrase: phrase.clone(),
                    });
                }
            }
        }

        for level in Level::ALL {
            let list = format!("level {level}");
            for phrase in &self.levels[level.index()] {
                if phrase.joined.len() < 4 {
                    warnings.push(LintWarning::ShortPhrase {
                        list: list.clone(),
                        phrase: phrase.text.clone(),
                    });
                }
            }
        }

        for inner_level in Level::ALL {
            for outer_level in Level::ALL {
                if inner_level == outer_level {
                    continue;
                }
                for inner in &self.levels[inner_level.index()] {
                    for outer in &self.levels[outer_level.index()] {
                        if outer.tokens.len() > inner.tokens.len()
                            && outer
                                .tokens
                                .windows(inner.tokens.len())
                                .any(|w| w == inner.tokens.as_slice())
                        {
                            warnings.push(LintWarning::Embedded {
                                inner: inner.text.clone(),
                                inner_list: format!("level {inner_level}"),
                                outer: outer.text.clone(),
                                outer_list: format!("level {outer_level}"),
                            });
                        }
                    }
                }
            }
        }
        warnings
    }
}
