//! HTTP chat service for live screening interviews and validation reports.

pub mod api;
pub mod config;
pub mod sessions;

pub use api::{router, spawn_evictor, AppState, ResultSink, StartupError};
pub use config::Config;
