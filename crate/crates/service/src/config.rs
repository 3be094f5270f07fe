use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

use thiserror::Error;

pub const DEFAULT_BIND: &str = "127.0.0.1:8080";
pub const DEFAULT_JOURNAL: &str = "results.jsonl";
pub const DEFAULT_SESSION_TTL: Duration = Duration::from_secs(30 * 60);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{var}: {message}")]
    Invalid { var: &'static str, message: String },
}

/// Service settings, read from `PHQ9_*` environment variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub bind: SocketAddr,
    pub journal: PathBuf,
    /// Lexicon file; the bundled Spanish lexicon when unset.
    pub lexicon: Option<PathBuf>,
    /// Interview script file; the bundled Spanish script when unset.
    pub script: Option<PathBuf>,
    /// Idle time after which an unfinished session is dropped.
    pub session_ttl: Duration,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            bind: DEFAULT_BIND.parse().expect("valid default address"),
            journal: PathBuf::from(DEFAULT_JOURNAL),
            lexicon: None,
            script: None,
            session_ttl: DEFAULT_SESSION_TTL,
        }
    }
}

impl Config {
    pub fn from_env() -> Result<Config, ConfigError> {
        Config::from_lookup(|name| std::env::var(name).ok())
    }

    /// Reads `PHQ9_BIND`, `PHQ9_JOURNAL`, `PHQ9_LEXICON`, `PHQ9_SCRIPT` and
    /// `PHQ9_SESSION_TTL_SECS` through `lookup`.
    pub fn from_lookup(lookup: impl Fn(&str) -> Option<String>) -> Result<Config, ConfigError> {
        let mut config = Config::default();
        if let Some(bind) = lookup("PHQ9_BIND") {
            config.bind = bind.parse().map_err(|e| ConfigError::Invalid {
                var: "PHQ9_BIND",
                message: format!("{bind:?}: {e}"),
            })?;
        }
        if let Some(path) = lookup("PHQ9_JOURNAL") {
            config.journal = PathBuf::from(path);
        }
        config.lexicon = lookup("PHQ9_LEXICON").map(PathBuf::from);
        config.script = lookup("PHQ9_SCRIPT").map(PathBuf::from);
        if let Some(ttl) = lookup("PHQ9_SESSION_TTL_SECS") {
            let secs: u64 = ttl.parse().map_err(|_| ConfigError::Invalid {
                var: "PHQ9_SESSION_TTL_SECS",
                message: format!("{ttl:?} is not a whole number of seconds"),
            })?;
            if secs == 0 {
                return Err(ConfigError::Invalid {
                    var: "PHQ9_SESSION_TTL_SECS",
                    message: "must be positive".into(),
                });
            }
            config.session_ttl = Duration::from_secs(secs);
        }
        Ok(config)
    }
}
