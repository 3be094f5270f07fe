//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::time::{Duration, Instant};

use chrono::{DateTime, Utc};
use phq9_core::interview::{Interviewer, Phase};
use phq9_core::nlu::{match_level, normalize, Lexicon, LexiconFile, MatchResult};
use phq9_core::psychometrics::{
    binary_metrics, build_report, cohen_kappa, cronbach_alpha, mae_stats, oneway_anova, pearson,
    point_biserial, roc_auc, ConfusionMatrix, Fraction,
};
use phq9_core::scoring::{classify, total_score, Channel, Level};
use phq9_core::store::{export_paired, import_paired};
use phq9_core::synthetic;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let m = binary_metrics(&ConfusionMatrix::new(23, 8, 1, 76));
    let elapsed = start.elapsed();
    let f = |x: Option<Fraction>, what: &str| x.ok_or_else(|| format!("{what} absent"));
    let (sens, spec, acc, f1) = (
        f(m.sensitivity, "sensitivity")?,
        f(m.specificity, "specificity")?,
        f(m.accuracy, "accuracy")?,
        f(m.f1, "f1")?,
    );
    let (pred, truth) = (
        f(m.prevalence_predicted, "prev pred")?,
        f(m.prevalence_truth, "prev truth")?,
    );
    let four = [sens, spec, acc, f1].map(|x| x.round_to(4));
    ensure(four == [0.9583, 0.9048, 0.9167, 0.8364], || {
        format!("4dp {four:?}")
    })?;
    let two = [sens, spec, acc, f1].map(|x| x.round_to(2));
    ensure(two == [0.96, 0.90, 0.92, 0.84], || format!("2dp {two:?}"))?;
    ensure(
        pred == Fraction {
            numerator: 31,
            denominator: 108,
        } && pred.round_to(4) == 0.2870,
        || format!("predicted prevalence {pred:?}"),
    )?;
    ensure(
        truth
            == Fraction {
                numerator: 24,
                denominator: 108,
            }
            && truth.round_to(3) == 0.222,
        || format!("truth prevalence {truth:?}"),
    )?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!(
        "sens {} spec {} acc {} f1 {} prev 31/108 24/108 in {elapsed:?}",
        four[0], four[1], four[2], four[3]
    ))
}

fn criterion_2() -> Outcome {
    const N: usize = 1_000;
    const TOL: f64 = 1e-9;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let series = |rng: &mut ChaCha8Rng, n: usize, max: u8| -> Vec<f64> {
        (0..n).map(|_| f64::from(rng.gen_range(0..=max))).collect()
    };
    let mut counts = [0usize; 7];
    let mut worst_p = 0.0f64;
    let mut guard = 0;
    while counts.iter().any(|&c| c < N) {
        guard += 1;
        ensure(guard < 100 * N, || "too many degenerate instances".into())?;
        let n = rng.gen_range(2..=30);
        let (x, y) = (series(&mut rng, n, 27), series(&mut rng, n, 27));
        if let (Ok(r), Some(o)) = (pearson(&x, &y), common::pearson(&x, &y)) {
            ensure((r - o).abs() < TOL, || format!("pearson {r} vs {o}"))?;
            counts[0] += 1;
        }
        let b: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
        if let (Ok(r), Some(o)) = (point_biserial(&b, &y), common::point_biserial(&b, &y)) {
            ensure((r - o).abs() < TOL, || format!("point-biserial {r} vs {o}"))?;
            counts[1] += 1;
        }
        let a4: Vec<u8> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let b4: Vec<u8> = a4
            .iter()
            .map(|&v| {
                if rng.gen_bool(0.5) {
                    v
                } else {
                    rng.gen_range(0..4)
                }
            })
            .collect();
        if let (Ok(k), Some(o)) = (cohen_kappa(&a4, &b4), common::cohen_kappa(&a4, &b4)) {
            ensure((k - o).abs() < TOL, || format!("kappa {k} vs {o}"))?;
            counts[2] += 1;
        }
        let rows: Vec<Vec<f64>> = (0..n).map(|_| series(&mut rng, 9, 3)).collect();
        if let (Ok(a), Some(o)) = (cronbach_alpha(&rows), common::cronbach_alpha(&rows)) {
            ensure((a - o).abs() < TOL, || format!("alpha {a} vs {o}"))?;
            counts[3] += 1;
        }
        let m = mae_stats(&x, &y).map_err(|e| e.to_string())?;
        let (mae, sd) = common::mae_sd(&x, &y);
        ensure((m.mae - mae).abs() < TOL && (m.sd - sd).abs() < TOL, || {
            "mae".into()
        })?;
        counts[4] += 1;
        let scores: Vec<u8> = x.iter().map(|&v| v as u8).collect();
        if let (Ok(c), Some(o)) = (roc_auc(&scores, &b), common::mann_whitney(&scores, &b)) {
            ensure((c.auc - o).abs() < TOL, || format!("auc {} vs {o}", c.auc))?;
            counts[5] += 1;
        }
        let split = rng.gen_range(2..=n.max(4) - 2).min(n - 2).max(2);
        if n >= 4 {
            let groups = vec![x[..split].to_vec(), x[split..].to_vec()];
            if let (Ok(an), Some((f, d1, d2))) = (oneway_anova(&groups), common::anova_f(&groups)) {
                ensure((an.f - f).abs() < TOL * f.max(1.0), || {
                    format!("F {} vs {f}", an.f)
                })?;
                let p = common::f_upper_tail_quadrature(an.f, d1, d2);
                worst_p = worst_p.max((an.p - p).abs());
                ensure((an.p - p).abs() < 1e-8, || format!("p {} vs {p}", an.p))?;
                counts[6] += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "7 statistics x >= {N} instances within 1e-9 (ANOVA p worst {worst_p:.1e}) in {elapsed:?}"
    ))
}

fn criterion_3() -> Outcome {
    let k = cohen_kappa(&[1, 1, 1, 0], &[1, 1, 0, 0]).map_err(|e| e.to_string())?;
    ensure(k == 0.5, || format!("kappa {k}"))?;
    let alpha = cronbach_alpha(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).map_err(|e| e.to_string())?;
    ensure(alpha == 1.0, || format!("alpha {alpha}"))?;
    let pb = point_biserial(&[false, false, true, true], &[1.0, 2.0, 3.0, 4.0])
        .map_err(|e| e.to_string())?;
    ensure((pb - 0.894427).abs() < 1e-6, || {
        format!("point-biserial {pb}")
    })?;
    let f = oneway_anova(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
        .map_err(|e| e.to_string())?
        .f;
    ensure(f == 13.5, || format!("F {f}"))?;
    Ok(format!(
        "kappa 0.5, alpha 1.0, point-biserial {pb:.6}, F 13.5"
    ))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let vector = |mut code: u32| {
        let mut v = [0u8; 9];
        for slot in &mut v {
            *slot = (code % 4) as u8;
            code /= 4;
        }
        v
    };
    let count = 4u32.pow(9);
    for code in 0..count {
        let v = vector(code);
        let total = total_score(&v).map_err(|e| e.to_string())?;
        ensure(
            u32::from(total) == v.iter().map(|&x| u32::from(x)).sum::<u32>(),
            || format!("{v:?}"),
        )?;
        let positive = classify(total).map_err(|e| e.to_string())?.is_positive();
        ensure(positive == (total >= 10), || format!("{v:?}"))?;
        for i in 0..9 {
            if v[i] < 3 {
                let up =
                    classify(total_score(&vector(code + 4u32.pow(i as u32))).unwrap()).unwrap();
                ensure(!positive || up.is_positive(), || {
                    format!("monotonicity at {v:?}")
                })?;
            }
        }
    }
    let boundary = (
        classify(9).unwrap().is_positive(),
        classify(10).unwrap().is_positive(),
    );
    ensure(boundary == (false, true), || {
        format!("boundary {boundary:?}")
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!(
        "{count} vectors, 9 negative / 10 positive, in {elapsed:?}"
    ))
}

/// Transcript text, final phase and (total, positive) when completed.
type Replay = (String, Phase, Option<(u8, bool)>);

fn replay(engine: &Interviewer, inputs: &[&str]) -> Result<Replay, String> {
    let at = DateTime::<Utc>::UNIX_EPOCH;
    let (mut state, opening) = engine.start_session_at(Channel::Cli, at);
    let mut out: String = opening
        .messages
        .iter()
        .map(|m| format!("agent: {m}\n"))
        .collect();
    let mut summary = None;
    for input in inputs {
        out.push_str(&format!("user: {input}\n"));
        let turn = engine
            .advance_at(&mut state, input, at)
            .map_err(|e| e.to_string())?;
        for m in &turn.messages {
            out.push_str(&format!("agent: {m}\n"));
        }
        if let Some(r) = turn.result {
            summary = Some((r.total, r.positive));
        }
    }
    Ok((out, state.phase, summary))
}

fn as_refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn criterion_5() -> Outcome {
    let engine = Interviewer::default_es();
    let script = engine.script();
    let lexicon = engine.lexicon();
    let session = |phrase: &str| -> Vec<String> {
        std::iter::once("sí, acepto".to_owned())
            .chain(std::iter::repeat_n(phrase.to_owned(), 9))
            .collect()
    };
    let high = session(lexicon.canonical(Level::NEARLY_EVERY_DAY));
    let low = session(lexicon.canonical(Level::NOT_AT_ALL));

    let (text, phase, summary) = replay(&engine, &as_refs(&high))?;
    ensure(
        phase == Phase::Completed && summary == Some((27, true)),
        || format!("high: {phase:?} {summary:?}"),
    )?;
    ensure(
        text.ends_with(&format!(
            "agent: {}\nagent: {}\n",
            script.feedback_positive, script.crisis_appendix
        )),
        || "high session lacks positive feedback plus crisis appendix".into(),
    )?;

    let (text, phase, summary) = replay(&engine, &as_refs(&low))?;
    ensure(
        phase == Phase::Completed && summary == Some((0, false)),
        || format!("low: {phase:?} {summary:?}"),
    )?;
    ensure(
        text.ends_with(&format!("agent: {}\n", script.feedback_negative)),
        || "low feedback".into(),
    )?;

    let (text, phase, _) = replay(&engine, &["sí", "?", "?", "?"])?;
    let expected_tail = format!(
        "user: ?\nagent: {}\nuser: ?\nagent: {}\nuser: ?\nagent: {}\n",
        script.clarification_reply, script.options_reply, script.closing_aborted
    );
    ensure(
        phase == Phase::Aborted && text.ends_with(&expected_tail),
        || format!("escalation: {phase:?}"),
    )?;

    let mixed = [
        "hola",
        "acepto",
        "varios dais",
        "3",
        "nunca",
        "todo el tiempo",
        "1",
        "2",
        "para nda",
        "0",
        "más de la mitad de los días",
    ];
    let runs: Vec<String> = (0..3)
        .map(|_| replay(&Interviewer::default_es(), &mixed).map(|r| r.0))
        .collect::<Result<_, _>>()?;
    ensure(runs.windows(2).all(|w| w[0] == w[1]), || {
        "transcripts differ between runs".into()
    })?;
    Ok(
        "27/positive + crisis, 0/negative, clarify -> options -> abort, identical transcripts"
            .into(),
    )
}

fn criterion_6() -> Outcome {
    let lexicon = Lexicon::shipped_es();
    let mut exact = 0;
    for level in Level::ALL {
        for phrase in lexicon.phrases(level) {
            match match_level(phrase, &lexicon) {
                MatchResult::Level {
                    level: got,
                    confidence,
                    ..
                } if got == level && confidence == 1.0 => exact += 1,
                other => return Err(format!("{phrase:?}: {other:?}")),
            }
        }
    }

    let short: Vec<(Level, Vec<String>)> = Level::ALL
        .iter()
        .flat_map(|&level| lexicon.phrases(level).map(move |p| (level, normalize(p))))
        .filter(|(_, tokens)| tokens.len() <= 3)
        .collect();
    let letters: Vec<char> = "abcdefghijklmnopqrstuvwxyz".chars().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut total, mut ok) = (0usize, 0usize);
    while total < 2_000 {
        let (level, tokens) = &short[rng.gen_range(0..short.len())];
        let mut chars: Vec<char> = tokens.join(" ").chars().collect();
        let pos = rng.gen_range(0..chars.len());
        if chars[pos] == ' ' {
            continue;
        }
        let c = letters[rng.gen_range(0..letters.len())];
        match rng.gen_range(0..3) {
            0 if chars[pos] != c => chars[pos] = c,
            1 => chars.insert(pos, c),
            2 if chars.len() > 1 => {
                chars.remove(pos);
            }
            _ => continue,
        }
        let typo: String = chars.into_iter().collect();
        total += 1;
        ok += usize::from(match_level(&typo, &lexicon).level() == Some(*level));
    }
    let rate = ok as f64 / total as f64;
    ensure(rate >= 0.99, || format!("typo success {ok}/{total}"))?;

    let mut ties = 0;
    for _ in 0..500 {
        let len = rng.gen_range(4..9);
        let base: Vec<char> = (0..len).map(|_| letters[rng.gen_range(0..26)]).collect();
        let pos = rng.gen_range(0..len);
        let mut picks: Vec<char> = Vec::new();
        while picks.len() < 3 {
            let c = letters[rng.gen_range(0..26)];
            if !picks.contains(&c) {
                picks.push(c);
            }
        }
        let with = |c: char| {
            let mut v = base.clone();
            v[pos] = c;
            v.into_iter().collect::<String>()
        };
        let lo = rng.gen_range(0..3u8);
        let hi = rng.gen_range(lo + 1..4u8);
        let levels: Vec<serde_json::Value> = (0..4u8)
            .map(|s| {
                let p = if s == lo {
                    with(picks[0])
                } else if s == hi {
                    with(picks[1])
                } else {
                    s.to_string().repeat(12)
                };
                serde_json::json!({"score": s, "canonical": p, "phrases": [p]})
            })
            .collect();
        let file: LexiconFile = serde_json::from_value(serde_json::json!({
            "locale": "es", "threshold": 0.5, "tie_epsilon": 1e-9, "levels": levels,
            "affirm_phrases": ["9".repeat(12)], "deny_phrases": ["8".repeat(12)]
        }))
        .map_err(|e| e.to_string())?;
        let lex = Lexicon::from_file(file).map_err(|e| e.to_string())?;
        let got = match_level(&with(picks[2]), &lex).level();
        ensure(got == Level::new(hi), || {
            format!("tie resolved to {got:?}, expected {hi}")
        })?;
        ties += 1;
    }
    Ok(format!(
        "{exact} phrases exact at 1.0; {ok}/{total} single-edit typos ({:.2}%); {ties} ties to higher level",
        rate * 100.0
    ))
}

fn criterion_7() -> Outcome {
    let data = synthetic::noisy(108, 1.88, 7);
    let a = build_report(&data).map_err(|e| e.to_string())?;
    let b = build_report(&synthetic::noisy(108, 1.88, 7)).map_err(|e| e.to_string())?;
    ensure(
        a.to_json() == b.to_json() && a.table2_csv() == b.table2_csv(),
        || "report bytes differ".into(),
    )?;

    let csv = export_paired(&data);
    let back = import_paired(csv.as_bytes()).map_err(|e| e.to_string())?;
    ensure(back.len() == 108 && export_paired(&back) == csv, || {
        "CSV round trip differs".into()
    })?;
    let reparsed = build_report(&back).map_err(|e| e.to_string())?;
    ensure(reparsed.to_json() == a.to_json(), || {
        "report changed after CSV round trip".into()
    })?;

    let mae = a.mae_total.value().ok_or("mae absent")?;
    ensure((mae - 1.88).abs() <= 0.15, || format!("mae_total {mae}"))?;
    Ok(format!(
        "byte-identical report and CSV round trip, mae_total {mae:.4}"
    ))
}

type Criterion = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Criterion); 7] = [
        (
            "screening metrics from the reconstructed confusion matrix",
            criterion_1,
        ),
        ("statistics agree with brute-force oracles", criterion_2),
        ("hand-derived fixtures", criterion_3),
        ("exhaustive scoring sweep", criterion_4),
        ("end-to-end interview replay", criterion_5),
        ("matcher corpus", criterion_6),
        ("report determinism and CSV round trip", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
