use serde::Serialize;

use super::lexicon::{Lexicon, Phrase};
use super::normalize::normalize;
use super::similarity::{char_similarity, char_similarity_above, Term};
use crate::scoring::Level;

/// Largest deduction applied to a token-window match for utterance tokens the
/// phrase does not cover. It only separates otherwise equal window scores, so
/// an utterance that exactly equals a longer phrase outranks a shorter phrase
/// found inside it.
pub const COVERAGE_PENALTY: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MatchResult {
    Level {
        level: Level,
        confidence: f64,
        matched_phrase: String,
    },
    NoMatch {
        best_confidence: f64,
    },
}

impl MatchResult {
    pub fn level(&self) -> Option<Level> {
        match self {
            MatchResult::Level { level, .. } => Some(*level),
            MatchResult::NoMatch { .. } => None,
        }
    }

    pub fn confidence(&self) -> f64 {
        match self {
            MatchResult::Level { confidence, .. } => *confidence,
            MatchResult::NoMatch { best_confidence } => *best_confidence,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsentMatch {
    Affirm,
    Deny,
    NoMatch,
}

pub(crate) struct Utterance {
    tokens: Vec<Term>,
    joined: Term,
}

impl Utterance {
    pub(crate) fn new(text: &str) -> Utterance {
        let tokens = normalize(text);
        Utterance {
            joined: Term::new(&tokens.join(" ")),
            tokens: tokens.iter().map(|t| Term::new(t)).collect(),
        }
    }

    fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Score of one phrase against an utterance: the better of whole-string
/// similarity and the best aligned token window.
///
/// Work is skipped for candidates that provably score below `floor`; in that
/// case the result is `None`.
fn phrase_score_above(phrase: &Phrase, utterance: &Utterance, floor: f64) -> Option<f64> {
    if utterance.is_empty() {
        return (0.0 >= floor).then_some(0.0);
    }
    let mut best: Option<f64> = None;
    let mut floor = floor;
    if phrase.joined.similarity_bound(&utterance.joined) >= floor {
        if let Some(s) = char_similarity_above(&phrase.joined.chars, &utterance.joined.chars, floor)
        {
            if s >= floor {
                best = Some(s);
                floor = s;
            }
        }
    }
    let width = phrase.tokens.len();
    let n = utterance.tokens.len();
    if width > 0 && width <= n {
        let penalty = COVERAGE_PENALTY * (n - width) as f64 / n as f64;
        for window in utterance.tokens.windows(width) {
            let pairs = window.iter().zip(&phrase.tokens);
            let bound = pairs
                .clone()
                .map(|(u, p)| u.similarity_bound(p))
                .sum::<f64>()
                / width as f64;
            if bound - penalty < floor {
                continue;
            }
            let s = pairs
                .map(|(u, p)| char_similarity(&u.chars, &p.chars))
                .sum::<f64>()
                / width as f64
                - penalty;
            if s >= floor && best.is_none_or(|b| s > b) {
                best = Some(s);
                floor = s;
            }
        }
    }
    best
}

/// Best phrase of one list. `global` carries the best score seen across
/// lists; phrases that cannot come within `eps` of it are skipped, so a
/// list's score is exact whenever it is within `eps` of the final maximum.
fn best_in<'a>(
    phrases: &'a [Phrase],
    utterance: &Utterance,
    global: &mut f64,
    eps: f64,
) -> (f64, Option<&'a Phrase>) {
    let mut best: (f64, Option<&Phrase>) = (0.0, None);
    for phrase in phrases {
        let mut floor = *global - eps;
        if best.1.is_some() {
            // Equal scores keep the earlier phrase, so only strict gains matter.
            floor = floor.max(next_up(best.0));
        }
        if let Some(score) = phrase_score_above(phrase, utterance, floor) {
            if best.1.is_none() || score > best.0 {
                best = (score, Some(phrase));
                *global = global.max(score);
            }
        }
    }
    best
}

fn next_up(x: f64) -> f64 {
    if x.is_finite() {
        f64::from_bits(if x >= 0.0 {
            x.to_bits() + 1
        } else {
            x.to_bits() - 1
        })
    } else {
        x
    }
}

fn digit_shortcut(utterance: &Utterance) -> Option<Level> {
    match utterance.tokens.as_slice() {
        [only] if only.len() == 1 => only.chars[0].to_digit(10).and_then(|d| Level::new(d as u8)),
        _ => None,
    }
}

/// Maps a free-text answer to a Likert level.
///
/// A lone digit 0-3 is taken literally. Otherwise every level gets the score
/// of its best phrase; the winning level must reach the lexicon threshold and
/// ties (within the lexicon's epsilon) go to the higher level.
pub fn match_level(utterance: &str, lexicon: &Lexicon) -> MatchResult {
    let utterance = Utterance::new(utterance);
    if let Some(level) = digit_shortcut(&utterance) {
        let matched_phrase = utterance.tokens[0].chars.iter().collect();
        return MatchResult::Level {
            level,
            confidence: 1.0,
            matched_phrase,
        };
    }

    let threshold = lexicon.threshold();
    let eps = lexicon.tie_epsilon();
    let mut best = 0.0;
    let scored: Vec<(Level, f64, Option<&Phrase>)> = Level::ALL
        .iter()
        .map(|&level| {
            let (score, phrase) =
                best_in(&lexicon.levels[level.index()], &utterance, &mut best, eps);
            (level, score, phrase)
        })
        .collect();

    let winner = scored
        .iter()
        .rev()
        .find(|(_, score, phrase)| phrase.is_some() && *score >= best - eps && *score >= threshold);
    match winner {
        Some((level, score, Some(phrase))) => MatchResult::Level {
            level: *level,
            confidence: *score,
            matched_phrase: phrase.text.clone(),
        },
        _ => MatchResult::NoMatch {
            best_confidence: best,
        },
    }
}

/// Recognizes agreement or refusal to take part. Ambiguity never counts as
/// consent.
pub fn match_consent(utterance: &str, lexicon: &Lexicon) -> ConsentMatch {
    let utterance = Utterance::new(utterance);
    let eps = lexicon.tie_epsilon();
    let mut best = 0.0;
    let (affirm, _) = best_in(&lexicon.affirm, &utterance, &mut best, eps);
    let (deny, _) = best_in(&lexicon.deny, &utterance, &mut best, eps);
    let threshold = lexicon.threshold();
    if affirm.max(deny) < threshold || (affirm - deny).abs() <= eps {
        ConsentMatch::NoMatch
    } else if affirm > deny {
        ConsentMatch::Affirm
    } else {
        ConsentMatch::Deny
    }
}
