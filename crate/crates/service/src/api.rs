use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{FromRequest, Multipart, Path, Request, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use phq9_core::interview::{InterviewScript, Interviewer, Phase};
use phq9_core::nlu::Lexicon;
use phq9_core::psychometrics::{build_report, ReportError};
use phq9_core::store::{import_paired, ClosedOutcome, Journal, PairedCsvError, StoreError};
use phq9_core::{Channel, ScreeningResult};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;
use uuid::Uuid;

use crate::config::Config;
use crate::sessions::{ApiMessage, Role, Session, SessionTable};

/// Where finished interviews are written.
pub trait ResultSink: std::fmt::Debug + Send + Sync + 'static {
    fn persist_result(&self, result: &ScreeningResult) -> Result<Uuid, StoreError>;
    fn record_closed(
        &self,
        outcome: ClosedOutcome,
        channel: Channel,
        at: DateTime<Utc>,
    ) -> Result<(), StoreError>;
}

impl ResultSink for Journal {
    fn persist_result(&self, result: &ScreeningResult) -> Result<Uuid, StoreError> {
        Journal::persist_result(self, result)
    }

    fn record_closed(
        &self,
        outcome: ClosedOutcome,
        channel: Channel,
        at: DateTime<Utc>,
    ) -> Result<(), StoreError> {
        Journal::record_closed(self, outcome, channel, at)
    }
}

/// Everything the handlers share.
#[derive(Debug)]
pub struct AppState {
    pub engine: Interviewer,
    pub journal: Arc<dyn ResultSink>,
    pub sessions: SessionTable,
    pub session_ttl: Duration,
}

#[derive(Debug, Error)]
pub enum StartupError {
    #[error("cannot load lexicon: {0}")]
    Lexicon(#[from] phq9_core::nlu::LexiconError),
    #[error("cannot load script: {0}")]
    Script(#[from] phq9_core::interview::ScriptError),
    #[error("cannot open journal: {0}")]
    Journal(#[from] StoreError),
}

impl AppState {
    pub fn new(engine: Interviewer, journal: impl ResultSink, session_ttl: Duration) -> AppState {
        AppState {
            engine,
            journal: Arc::new(journal),
            sessions: SessionTable::default(),
            session_ttl,
        }
    }

    pub fn from_config(config: &Config) -> Result<AppState, StartupError> {
        let lexicon = match &config.lexicon {
            Some(path) => Lexicon::load(path)?,
            None => Lexicon::shipped_es(),
        };
        let script = match &config.script {
            Some(path) => InterviewScript::load(path)?,
            None => InterviewScript::default_es(),
        };
        let journal = Journal::open(&config.journal, script.locale.clone())?;
        let engine = Interviewer::new(script, lexicon)?;
        Ok(AppState::new(engine, journal, config.session_ttl))
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: serde_json::Value,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> ApiError {
        ApiError {
            status,
            body: json!({ "error": code, "message": message.into() }),
        }
    }

    fn not_found() -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "unknown_session", "no such session")
    }

    fn terminal(phase: Phase) -> ApiError {
        let mut e = ApiError::new(
            StatusCode::CONFLICT,
            "session_finished",
            "the interview has ended",
        );
        e.body["phase"] = json!(phase);
        e
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}/messages", post(post_message))
        .route("/api/sessions/{id}/result", get(get_result))
        .route("/api/reports/validation", post(validation_report))
        .with_state(state)
}

/// Periodically drops idle sessions.
pub fn spawn_evictor(state: Arc<AppState>) -> tokio::task::JoinHandle<()> {
    let period = (state.session_ttl / 4).clamp(Duration::from_secs(1), Duration::from_secs(60));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            let dropped = state.sessions.evict_idle(Instant::now(), state.session_ttl);
            if dropped > 0 {
                tracing::debug!(dropped, "evicted idle sessions");
            }
        }
    })
}

async fn healthz() -> &'static str {
    "ok"
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateSession {
    locale: Option<String>,
    channel: Option<Channel>,
}

#[derive(Debug, Serialize)]
struct SessionCreated {
    session_id: Uuid,
    phase: Phase,
    messages: Vec<ApiMessage>,
}

fn parse_json<T: for<'de> Deserialize<'de> + Default>(body: &Bytes) -> Result<T, ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    serde_json::from_slice(body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_json", e.to_string()))
}

async fn create_session(
    State(app): State<Arc<AppState>>,
    body: Bytes,
) -> Result<(StatusCode, Json<SessionCreated>), ApiError> {
    let request: CreateSession = parse_json(&body)?;
    let supported = &app.engine.script().locale;
    if let Some(locale) = &request.locale {
        if locale != supported {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "unsupported_locale",
                format!("locale {locale:?} is not available; supported: {supported:?}"),
            ));
        }
    }
    let channel = match request.channel.unwrap_or(Channel::Web) {
        Channel::Cli => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "unsupported_channel",
                "the service accepts channel \"web\" or \"api\"",
            ))
        }
        c => c,
    };
    let (state, opening) = app.engine.start_session(channel);
    let id = state.session_id;
    let phase = state.phase;
    let mut session = Session::new(state, Instant::now());
    let messages = opening
        .messages
        .into_iter()
        .map(|m| session.message(Role::Agent, m))
        .collect();
    app.sessions.insert(id, session);
    Ok((
        StatusCode::CREATED,
        Json(SessionCreated {
            session_id: id,
            phase,
            messages,
        }),
    ))
}

#[derive(Debug, Default, Deserialize)]
struct PostMessage {
    #[serde(default)]
    text: String,
}

#[derive(Debug, Serialize)]
struct ResultSummary {
    total: u8,
    positive: bool,
    item9_flag: bool,
}

#[derive(Debug, Serialize)]
struct MessageReply {
    messages: Vec<ApiMessage>,
    phase: Phase,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<ResultSummary>,
}

fn session_id(raw: &str) -> Result<Uuid, ApiError> {
    Uuid::parse_str(raw).map_err(|_| ApiError::not_found())
}

fn storage_error(e: StoreError) -> ApiError {
    tracing::error!(error = %e, "journal write failed");
    let mut err = ApiError::new(
        StatusCode::SERVICE_UNAVAILABLE,
        "storage_unavailable",
        "the result could not be saved; send the same message again",
    );
    err.body["retriable"] = json!(e.is_retriable());
    err
}

async fn persist(
    app: &AppState,
    phase: Phase,
    result: Option<&ScreeningResult>,
    channel: Channel,
    at: DateTime<Utc>,
) -> Result<(), ApiError> {
    let journal = app.journal.clone();
    let job: Box<dyn FnOnce() -> Result<(), StoreError> + Send> = match (phase, result) {
        (Phase::Completed, Some(result)) => {
            let record = result.anonymized();
            Box::new(move || journal.persist_result(&record).map(|_| ()))
        }
        (Phase::Declined, _) => {
            Box::new(move || journal.record_closed(ClosedOutcome::Declined, channel, at))
        }
        (Phase::Aborted, _) => {
            Box::new(move || journal.record_closed(ClosedOutcome::Aborted, channel, at))
        }
        _ => return Ok(()),
    };
    tokio::task::spawn_blocking(job)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
        .map_err(storage_error)
}

async fn post_message(
    State(app): State<Arc<AppState>>,
    Path(raw_id): Path<String>,
    body: Bytes,
) -> Result<Json<MessageReply>, ApiError> {
    let id = session_id(&raw_id)?;
    let handle = app.sessions.get(&id).ok_or_else(ApiError::not_found)?;
    let request: PostMessage = parse_json(&body)?;
    let text = request.text.trim();
    if text.is_empty() {
        return Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "empty_message",
            "message text is empty",
        ));
    }

    let mut session = handle.lock().await;
    session.last_seen = Instant::now();
    if session.state.phase.is_terminal() {
        return Err(ApiError::terminal(session.state.phase));
    }
    // Work on a copy so a failed journal write leaves the session untouched.
    let mut next = session.state.clone();
    let now = Utc::now();
    let turn = app
        .engine
        .advance_at(&mut next, text, now)
        .map_err(|_| ApiError::terminal(session.state.phase))?;
    persist(
        &app,
        turn.new_phase,
        turn.result.as_ref(),
        next.channel,
        now,
    )
    .await?;

    session.state = next;
    session.result = turn.result.as_ref().map(ScreeningResult::anonymized);
    let mut messages = vec![session.message(Role::User, text)];
    for m in turn.messages {
        messages.push(session.message(Role::Agent, m));
    }
    Ok(Json(MessageReply {
        messages,
        phase: turn.new_phase,
        result: turn.result.map(|r| ResultSummary {
            total: r.total,
            positive: r.positive,
            item9_flag: r.item9_flag,
        }),
    }))
}

async fn get_result(
    State(app): State<Arc<AppState>>,
    Path(raw_id): Path<String>,
) -> Result<Json<ScreeningResult>, ApiError> {
    let id = session_id(&raw_id)?;
    let handle = app.sessions.get(&id).ok_or_else(ApiError::not_found)?;
    let session = handle.lock().await;
    match &session.result {
        Some(result) => Ok(Json(result.clone())),
        None => {
            let mut e = ApiError::new(
                StatusCode::CONFLICT,
                "not_completed",
                "the interview has not been completed",
            );
            e.body["phase"] = json!(session.state.phase);
            Err(e)
        }
    }
}

fn csv_error(e: PairedCsvError) -> ApiError {
    let mut err = ApiError::new(
        StatusCode::UNPROCESSABLE_ENTITY,
        "invalid_csv",
        e.to_string(),
    );
    if let Some(line) = e.line() {
        err.body["line"] = json!(line);
    }
    err
}

async fn csv_body(headers: &HeaderMap, request: Request) -> Result<Bytes, ApiError> {
    let is_multipart = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("multipart/form-data"));
    if !is_multipart {
        return Bytes::from_request(request, &())
            .await
            .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "unreadable_body", e.body_text()));
    }
    let bad = |e: axum::extract::multipart::MultipartError| {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid_multipart", e.body_text())
    };
    let mut multipart = Multipart::from_request(request, &())
        .await
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_multipart", e.body_text()))?;
    match multipart.next_field().await.map_err(bad)? {
        Some(field) => field.bytes().await.map_err(bad),
        None => Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "invalid_csv",
            "multipart body has no file part",
        )),
    }
}

async fn validation_report(headers: HeaderMap, request: Request) -> Result<Response, ApiError> {
    let body = csv_body(&headers, request).await?;
    let records = import_paired(body.as_ref()).map_err(csv_error)?;
    let report = build_report(&records).map_err(|e| {
        let mut err = ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "invalid_dataset",
            e.to_string(),
        );
        if let ReportError::InvalidRecord { index, .. } = e {
            err.body["line"] = json!(index + 2);
        }
        err
    })?;
    Ok((
        [(header::CONTENT_TYPE, "application/json")],
        report.to_json(),
    )
        .into_response())
}
