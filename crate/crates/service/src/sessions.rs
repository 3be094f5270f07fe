use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use phq9_core::{ScreeningResult, SessionState};
use serde::Serialize;
use uuid::Uuid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Agent,
    User,
}

/// One chat bubble. `sequence` increases strictly within a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiMessage {
    pub role: Role,
    pub text: String,
    pub sequence: u64,
}

#[derive(Debug)]
pub struct Session {
    pub state: SessionState,
    pub result: Option<ScreeningResult>,
    next_sequence: u64,
    pub last_seen: Instant,
}

impl Session {
    pub fn new(state: SessionState, now: Instant) -> Session {
        Session {
            state,
            result: None,
            next_sequence: 1,
            last_seen: now,
        }
    }

    pub fn message(&mut self, role: Role, text: impl Into<String>) -> ApiMessage {
        let sequence = self.next_sequence;
        self.next_sequence += 1;
        ApiMessage {
            role,
            text: text.into(),
            sequence,
        }
    }
}

pub type SessionHandle = Arc<tokio::sync::Mutex<Session>>;

/// In-memory table of live sessions. Each session sits behind its own async
/// lock so its turns are applied one at a time.
#[derive(Debug, Default)]
pub struct SessionTable {
    inner: Mutex<HashMap<Uuid, SessionHandle>>,
}

impl SessionTable {
    pub fn insert(&self, id: Uuid, session: Session) -> SessionHandle {
        let handle = Arc::new(tokio::sync::Mutex::new(session));
        self.inner
            .lock()
            .expect("session table poisoned")
            .insert(id, handle.clone());
        handle
    }

    pub fn get(&self, id: &Uuid) -> Option<SessionHandle> {
        self.inner
            .lock()
            .expect("session table poisoned")
            .get(id)
            .cloned()
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("session table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops sessions idle for longer than `ttl`. Sessions busy handling a
    /// message are kept.
    pub fn evict_idle(&self, now: Instant, ttl: Duration) -> usize {
        let mut table = self.inner.lock().expect("session table poisoned");
        let before = table.len();
        table.retain(|_, handle| match handle.try_lock() {
            Ok(session) => now.saturating_duration_since(session.last_seen) <= ttl,
            Err(_) => true,
        });
        before - table.len()
    }
}
