//! Session store with one append-only log file per session.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use proptrace::diagnosis::DiagnosisError;
use proptrace::parse::{parse_eqset, ParseError};
use proptrace::select_strategy;
use proptrace::AlgebraError;

use crate::record::{CreatedRecord, HintRecord, SessionSummary, StepRecord};
use crate::session::{log_line, replay, Event, EventKind, ReplayError, Session, StepError};

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("no session with id `{0}`")]
    NotFound(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Degree(AlgebraError),
    #[error("the strategy has no further steps")]
    Exhausted,
    #[error("diagnosis failed: {0}")]
    Infrastructure(#[from] DiagnosisError),
    #[error("session log {path}: {source}")]
    Replay { path: PathBuf, source: ReplayError },
    #[error("session log I/O: {0}")]
    Io(#[from] std::io::Error),
}

impl ServiceError {
    /// HTTP status code for the error.
    pub fn status(&self) -> u16 {
        match self {
            ServiceError::Parse(_) | ServiceError::Degree(_) => 400,
            ServiceError::NotFound(_) => 404,
            ServiceError::Exhausted => 409,
            ServiceError::Infrastructure(_) | ServiceError::Replay { .. } | ServiceError::Io(_) => 500,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::NotFound(_) => "not-found",
            ServiceError::Parse(_) => "syntax-error",
            ServiceError::Degree(_) => "degree-too-high",
            ServiceError::Exhausted => "strategy-exhausted",
            ServiceError::Infrastructure(_) => "diagnosis-failure",
            ServiceError::Replay { .. } | ServiceError::Io(_) => "storage-failure",
        }
    }
}

impl From<StepError> for ServiceError {
    fn from(e: StepError) -> Self {
        match e {
            StepError::Parse(p) => ServiceError::Parse(p),
            StepError::Diagnosis(d) => ServiceError::Infrastructure(d),
        }
    }
}

pub fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

pub struct Service {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    dir: PathBuf,
    max_lookahead: usize,
}

impl Service {
    /// Opens the store under `data_dir`, replaying every session log found.
    pub fn open(data_dir: &Path, max_lookahead: usize) -> Result<Service, ServiceError> {
        let dir = data_dir.join("sessions");
        fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_none_or(|e| e != "jsonl") {
                continue;
            }
            let text = fs::read_to_string(&path)?;
            let session = replay(&text).map_err(|source| ServiceError::Replay { path: path.clone(), source })?;
            sessions.insert(session.id.clone(), Arc::new(Mutex::new(session)));
        }
        Ok(Service { sessions: RwLock::new(sessions), dir, max_lookahead })
    }

    pub fn max_lookahead(&self) -> usize {
        self.max_lookahead
    }

    fn log_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.jsonl"))
    }

    /// Appends before the event is applied in memory, so whatever a client
    /// saw is on disk.
    fn append(&self, id: &str, event: &Event) -> Result<(), ServiceError> {
        let mut f = OpenOptions::new().create(true).append(true).open(self.log_path(id))?;
        f.write_all(log_line(event).as_bytes())?;
        f.sync_data()?;
        Ok(())
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        let map = self.sessions.read().expect("session map poisoned");
        map.get(id).cloned().ok_or_else(|| ServiceError::NotFound(id.to_string()))
    }

    pub fn create_session(&self, task_text: &str) -> Result<CreatedRecord, ServiceError> {
        let task = parse_eqset(task_text)?;
        let strategy = select_strategy(&task).map_err(|e| match e {
            AlgebraError::DegreeTooHigh { .. } => ServiceError::Degree(e),
            other => ServiceError::Infrastructure(other.into()),
        })?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let event = Event {
            ts_ms: now_ms(),
            kind: EventKind::Created { id: id.clone(), task: task.to_string(), strategy },
        };
        let session = Session::from_created(event.clone()).map_err(|source| ServiceError::Replay {
            path: self.log_path(&id),
            source,
        })?;
        self.append(&id, &event)?;
        self.sessions.write().expect("session map poisoned").insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok(CreatedRecord { id, task: task.to_string(), strategy: strategy.name().to_string() })
    }

    pub fn post_step(&self, id: &str, input: &str) -> Result<StepRecord, ServiceError> {
        let cell = self.get(id)?;
        let mut session = cell.lock().expect("session poisoned");
        let (event, _) = session.step_event(input, self.max_lookahead, now_ms())?;
        let EventKind::Step { record, .. } = &event.kind else { unreachable!() };
        let record = record.clone();
        self.append(id, &event)?;
        session
            .apply(event)
            .map_err(|source| ServiceError::Replay { path: self.log_path(id), source })?;
        Ok(record)
    }

    pub fn get_hint(&self, id: &str) -> Result<HintRecord, ServiceError> {
        let cell = self.get(id)?;
        let mut session = cell.lock().expect("session poisoned");
        let event = session.hint_event(now_ms()).ok_or(ServiceError::Exhausted)?;
        let EventKind::Hint { record } = &event.kind else { unreachable!() };
        let record = record.clone();
        self.append(id, &event)?;
        session
            .apply(event)
            .map_err(|source| ServiceError::Replay { path: self.log_path(id), source })?;
        Ok(record)
    }

    pub fn summary(&self, id: &str) -> Result<SessionSummary, ServiceError> {
        Ok(self.get(id)?.lock().expect("session poisoned").summary())
    }

    /// A copy of the in-memory session.
    pub fn session(&self, id: &str) -> Result<Session, ServiceError> {
        Ok(self.get(id)?.lock().expect("session poisoned").clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sessions_survive_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let svc = Service::open(dir.path(), 5).unwrap();
        let c = svc.create_session("(-x+1)^2 = 9").unwrap();
        assert_eq!(c.strategy, "sqrt");
        assert_eq!(svc.post_step(&c.id, "(-x+1)^2 - 9 = 0").unwrap().tier, crate::record::Tier::Yellow);
        svc.get_hint(&c.id).unwrap();
        assert_eq!(svc.post_step(&c.id, "1 - x = 3 or 1 - x = -3").unwrap().class, "correct");
        let before = svc.session(&c.id).unwrap();
        drop(svc);
        let again = Service::open(dir.path(), 5).unwrap();
        assert_eq!(again.session(&c.id).unwrap(), before);
    }

    #[test]
    fn error_statuses() {
        let dir = tempfile::tempdir().unwrap();
        let svc = Service::open(dir.path(), 5).unwrap();
        assert_eq!(svc.post_step("nope", "x = 1").unwrap_err().status(), 404);
        assert_eq!(svc.create_session("x^3 = 1").unwrap_err().status(), 400);
        assert_eq!(svc.create_session("x = = 1").unwrap_err().status(), 400);
        let c = svc.create_session("x = 5").unwrap();
        assert_eq!(c.strategy, "linear");
        assert_eq!(svc.get_hint(&c.id).unwrap_err().status(), 409);
        assert_eq!(svc.post_step(&c.id, "x = (").unwrap_err().status(), 400);
    }
}
