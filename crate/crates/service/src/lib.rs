//! Diagnosis sessions over HTTP, with append-only logs, and batch replay of
//! logged steps.

pub mod batch;
pub mod http;
pub mod record;
pub mod service;
pub mod session;
pub mod synthetic;

pub use batch::{batch_eval, BatchRecord, BatchReport};
pub use record::{StepRecord, Tier};
pub use service::{Service, ServiceError};
pub use session::{replay, Event, EventKind, Session};
