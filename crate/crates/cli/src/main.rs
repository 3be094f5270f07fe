use std::fs;
use std::io::{self, BufRead, BufWriter, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use phq9_core::interview::{InterviewScript, Interviewer, Phase};
use phq9_core::nlu::{Lexicon, LexiconError};
use phq9_core::psychometrics::build_report;
use phq9_core::scoring::{classify, total_score, Level};
use phq9_core::store::{import_paired_path, ClosedOutcome, Journal};
use phq9_core::Channel;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "phq9",
    version,
    about = "PHQ-9 chat screening from the terminal"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one interview over standard input and output.
    Interview {
        /// Interview script JSON; defaults to the bundled Spanish script.
        #[arg(long)]
        script: Option<PathBuf>,
        /// Lexicon JSON; defaults to the bundled Spanish lexicon.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Journal that receives the anonymized result.
        #[arg(long, default_value = "results.jsonl")]
        journal: PathBuf,
        /// Do not write to the journal.
        #[arg(long)]
        no_persist: bool,
        /// Write every message of the session to this JSON-lines file.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Total and class for nine item scores.
    Score {
        /// Nine comma-separated item scores, each 0 to 3.
        #[arg(long)]
        answers: String,
    },
    /// Validation report from a paired agent/form dataset.
    Report {
        /// Paired dataset CSV.
        #[arg(long)]
        paired: PathBuf,
        /// Where to write the report JSON.
        #[arg(long)]
        out: PathBuf,
        /// Also write the per-item agreement grid as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Lexicon maintenance.
    Lexicon {
        #[command(subcommand)]
        command: LexiconCommand,
    },
}

#[derive(Debug, Subcommand)]
enum LexiconCommand {
    /// Check a lexicon file and print phrase counts and warnings.
    Lint {
        #[arg(long)]
        file: PathBuf,
        /// Fewest phrases each level must have.
        #[arg(long, default_value_t = 100)]
        min_phrases: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Interview {
            script,
            lexicon,
            journal,
            no_persist,
            record,
        } => interview(InterviewArgs {
            script,
            lexicon,
            journal: (!no_persist).then_some(journal),
            record,
        }),
        Command::Score { answers } => score(&answers),
        Command::Report { paired, out, csv } => report(&paired, &out, csv.as_deref()),
        Command::Lexicon {
            command: LexiconCommand::Lint { file, min_phrases },
        } => lint(&file, min_phrases),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::FAILURE
        }
    }
}

/// The error and its causes, skipping causes the message already quotes.
fn describe(e: &anyhow::Error) -> String {
    let mut message = e.to_string();
    for cause in e.chain().skip(1) {
        let cause = cause.to_string();
        if !message.contains(&cause) {
            message.push_str(": ");
            message.push_str(&cause);
        }
    }
    message
}

struct InterviewArgs {
    script: Option<PathBuf>,
    lexicon: Option<PathBuf>,
    journal: Option<PathBuf>,
    record: Option<PathBuf>,
}

#[derive(Serialize)]
struct Recorded<'a> {
    role: &'a str,
    text: &'a str,
}

struct Output {
    stdout: io::StdoutLock<'static>,
    record: Option<BufWriter<fs::File>>,
}

impl Output {
    fn say(&mut self, role: &str, text: &str) -> Result<()> {
        if role == "agent" {
            writeln!(self.stdout, "{text}")?;
        }
        if let Some(record) = &mut self.record {
            serde_json::to_writer(&mut *record, &Recorded { role, text })?;
            record.write_all(b"\n")?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        self.stdout.flush()?;
        if let Some(record) = &mut self.record {
            record.flush()?;
        }
        Ok(())
    }
}

fn interview(args: InterviewArgs) -> Result<ExitCode> {
    let lexicon = match &args.lexicon {
        Some(path) => Lexicon::load(path)?,
        None => Lexicon::shipped_es(),
    };
    let script = match &args.script {
        Some(path) => InterviewScript::load(path)?,
        None => InterviewScript::default_es(),
    };
    let journal = match &args.journal {
        Some(path) => Some(
            Journal::open(path, script.locale.clone())
                .with_context(|| format!("cannot open journal {}", path.display()))?,
        ),
        None => None,
    };
    let record = match &args.record {
        Some(path) => Some(BufWriter::new(
            fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => None,
    };
    let engine = Interviewer::new(script, lexicon)?;
    let mut out = Output {
        stdout: io::stdout().lock(),
        record,
    };
    let interactive = io::stdin().is_terminal();
    let mut lines = io::stdin().lock().lines();

    let (mut state, opening) = engine.start_session(Channel::Cli);
    for m in &opening.messages {
        out.say("agent", m)?;
    }
    while !state.phase.is_terminal() {
        if interactive {
            write!(out.stdout, "> ")?;
        }
        out.flush()?;
        let Some(line) = lines.next().transpose()? else {
            out.flush()?;
            eprintln!("input ended before the interview finished");
            return Ok(ExitCode::from(2));
        };
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        out.say("user", text)?;
        let turn = engine.advance(&mut state, text)?;
        for m in &turn.messages {
            out.say("agent", m)?;
        }
        if let Some(result) = &turn.result {
            writeln!(
                out.stdout,
                "[total {} / class {}]",
                result.total,
                result.class().as_str()
            )?;
            if let Some(journal) = &journal {
                journal.persist_result(&result.anonymized())?;
            }
        }
    }
    out.flush()?;

    let closed = match state.phase {
        Phase::Declined => Some(ClosedOutcome::Declined),
        Phase::Aborted => Some(ClosedOutcome::Aborted),
        _ => None,
    };
    if let (Some(outcome), Some(journal)) = (closed, &journal) {
        journal.record_closed(outcome, Channel::Cli, chrono::Utc::now())?;
    }
    Ok(match state.phase {
        Phase::Aborted => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    })
}

#[derive(Serialize)]
struct ScoreOutput {
    total: u8,
    class: &'static str,
}

fn score(answers: &str) -> Result<ExitCode> {
    let values = answers
        .split(',')
        .map(|a| {
            let a = a.trim();
            a.parse::<u8>()
                .ok()
                .and_then(Level::new)
                .map(Level::value)
                .with_context(|| format!("{a:?} is not an item score 0 to 3"))
        })
        .collect::<Result<Vec<u8>>>()?;
    let total = total_score(&values)?;
    let class = classify(total)?;
    println!(
        "{}",
        serde_json::to_string(&ScoreOutput {
            total,
            class: class.as_str()
        })?
    );
    Ok(ExitCode::SUCCESS)
}

fn report(paired: &Path, out: &Path, csv: Option<&Path>) -> Result<ExitCode> {
    let records = import_paired_path(paired)?;
    let report = build_report(&records).with_context(|| format!("{}", paired.display()))?;
    fs::write(out, report.to_json()).with_context(|| format!("cannot write {}", out.display()))?;
    if let Some(csv) = csv {
        fs::write(csv, report.table2_csv())
            .with_context(|| format!("cannot write {}", csv.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

/// First line of `text` that contains `phrase` as a JSON string.
fn line_of(text: &str, phrase: &str) -> Option<usize> {
    let quoted = serde_json::to_string(phrase).ok()?;
    text.lines()
        .position(|l| l.contains(&quoted))
        .map(|i| i + 1)
}

fn lint(path: &Path, min_phrases: usize) -> Result<ExitCode> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let lexicon = match Lexicon::from_json_str(&text) {
        Ok(lexicon) => lexicon,
        Err(e) => {
            let line = match &e {
                LexiconError::Parse(p) => Some(p.line()),
                LexiconError::EmptyPhrase { phrase, .. } => line_of(&text, phrase),
                LexiconError::Duplicate { phrase, .. } => line_of(&text, phrase),
                _ => None,
            };
            match line {
                Some(line) => bail!("{}:{line}: {e}", path.display()),
                None => bail!("{}: {e}", path.display()),
            }
        }
    };

    let mut short = Vec::new();
    for level in Level::ALL {
        let count = lexicon.phrases(level).count();
        println!(
            "level {level} ({}): {count} phrases",
            lexicon.canonical(level)
        );
        if count < min_phrases {
            short.push(level);
        }
    }
    println!("affirm: {} phrases", lexicon.affirm_phrases().count());
    println!("deny: {} phrases", lexicon.deny_phrases().count());
    for warning in lexicon.lint() {
        println!("warning: {warning}");
    }
    if short.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    for level in short {
        eprintln!("error: level {level} has fewer than {min_phrases} phrases");
    }
    Ok(ExitCode::FAILURE)
}
