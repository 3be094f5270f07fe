use chrono::{DateTime, Utc};
use phq9_core::interview::{InterviewError, Interviewer, Phase};
use phq9_core::scoring::Channel;

fn at() -> DateTime<Utc> {
    DateTime::<Utc>::UNIX_EPOCH
}

/// Runs one scripted session and renders every exchanged message.
fn replay(engine: &Interviewer, inputs: &[&str]) -> (String, Phase, Option<(u8, bool, bool)>) {
    let (mut state, opening) = engine.start_session_at(Channel::Cli, at());
    let mut out = String::new();
    for m in &opening.messages {
        out.push_str(&format!("agent: {m}\n"));
    }
    let mut summary = None;
    for input in inputs {
        out.push_str(&format!("user: {input}\n"));
        let turn = engine.advance_at(&mut state, input, at()).unwrap();
        for m in &turn.messages {
            out.push_str(&format!("agent: {m}\n"));
        }
        if let Some(r) = &turn.result {
            summary = Some((r.total, r.positive, r.item9_flag));
        }
    }
    (out, state.phase, summary)
}

fn consent_then(answer: &str) -> Vec<&str> {
    let mut inputs = vec!["sí, acepto"];
    inputs.extend(std::iter::repeat_n(answer, 9));
    inputs
}

#[test]
fn all_nearly_every_day_scores_27_with_crisis_resources() {
    let engine = Interviewer::default_es();
    let (text, phase, summary) = replay(&engine, &consent_then("casi todos los días"));
    assert_eq!(phase, Phase::Completed);
    assert_eq!(summary, Some((27, true, true)));
    let script = engine.script();
    let tail = format!(
        "agent: {}\nagent: {}\n",
        script.feedback_positive, script.crisis_appendix
    );
    assert!(text.ends_with(&tail), "{text}");
    for item in 1..=9 {
        assert!(
            text.contains(script.prompt(item)),
            "item {item} never asked"
        );
    }
}

#[test]
fn all_not_at_all_scores_0_negative() {
    let engine = Interviewer::default_es();
    let (text, phase, summary) = replay(&engine, &consent_then("para nada"));
    assert_eq!(phase, Phase::Completed);
    assert_eq!(summary, Some((0, false, false)));
    assert!(text.ends_with(&format!("agent: {}\n", engine.script().feedback_negative)));
    assert!(!text.contains(&engine.script().crisis_appendix));
}

#[test]
fn three_unrecognized_answers_escalate_then_abort() {
    let engine = Interviewer::default_es();
    let (mut state, _) = engine.start_session_at(Channel::Web, at());
    engine.advance_at(&mut state, "sí", at()).unwrap();
    let script = engine.script();
    let expected = [
        (&script.clarification_reply, Phase::AwaitingItem { item: 1 }),
        (&script.options_reply, Phase::AwaitingItem { item: 1 }),
        (&script.closing_aborted, Phase::Aborted),
    ];
    for (reply, phase) in expected {
        let turn = engine.advance_at(&mut state, "?", at()).unwrap();
        assert_eq!(&turn.messages, &vec![reply.clone()]);
        assert_eq!(turn.new_phase, phase);
        assert!(turn.result.is_none());
    }
    assert!(state.collected.is_empty());
    assert_eq!(
        engine.advance_at(&mut state, "para nada", at()),
        Err(InterviewError::Terminal(Phase::Aborted))
    );
}

#[test]
fn recognized_answer_resets_the_escalation() {
    let engine = Interviewer::default_es();
    let mut inputs = vec!["sí", "?", "??", "varios días"];
    inputs.extend(["?", "?", "2"]);
    let (text, phase, _) = replay(&engine, &inputs);
    assert_eq!(phase, Phase::AwaitingItem { item: 3 });
    assert!(!text.contains(&engine.script().closing_aborted));
}

#[test]
fn crisis_resources_follow_item_nine_alone() {
    let engine = Interviewer::default_es();
    let mut inputs = vec!["vale"];
    inputs.extend(["0"; 8]);
    inputs.push("varios días");
    let (text, _, summary) = replay(&engine, &inputs);
    assert_eq!(summary, Some((1, false, true)));
    let script = engine.script();
    assert!(text.ends_with(&format!(
        "agent: {}\nagent: {}\n",
        script.feedback_negative, script.crisis_appendix
    )));
}

#[test]
fn declined_consent_ends_without_scores() {
    let engine = Interviewer::default_es();
    let (text, phase, summary) = replay(&engine, &["no, gracias"]);
    assert_eq!(phase, Phase::Declined);
    assert_eq!(summary, None);
    assert!(text.ends_with(&format!("agent: {}\n", engine.script().closing_declined)));
}

#[test]
fn replays_are_byte_identical() {
    let sessions: Vec<Vec<&str>> = vec![
        consent_then("casi todos los días"),
        consent_then("para nada"),
        vec!["sí", "?", "?", "?"],
        vec![
            "hola",
            "acepto",
            "más de la mitad de los dias",
            "varios dais",
            "nunca",
            "3",
            "todo el tiempo",
            "1",
            "2",
            "para nda",
            "0",
        ],
    ];
    let first: Vec<String> = sessions
        .iter()
        .map(|s| replay(&Interviewer::default_es(), s).0)
        .collect();
    let second: Vec<String> = sessions
        .iter()
        .map(|s| replay(&Interviewer::default_es(), s).0)
        .collect();
    assert_eq!(first, second);
}

#[test]
fn transcripts_are_kept_only_when_enabled() {
    let engine = Interviewer::default_es();
    let (mut state, _) = engine.start_session_at(Channel::Cli, at());
    state.transcript_enabled = true;
    let mut last = None;
    for input in consent_then("1") {
        last = engine.advance_at(&mut state, input, at()).unwrap().result;
    }
    let result = last.unwrap();
    assert_eq!(result.transcript.as_ref().map(Vec::len), Some(10));
    assert!(result.anonymized().transcript.is_none());
}
