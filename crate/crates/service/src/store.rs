use std::sync::{Arc, Mutex};

use gbg_core::board::Configuration;
use indexmap::IndexMap;
use tokio::sync::RwLock;

pub struct Session {
    pub board: Configuration,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
}

pub type SessionRef = Arc<RwLock<Session>>;

/// Sessions in least-recently-used order; the front is evicted first.
pub struct SessionStore {
    capacity: usize,
    sessions: Mutex<IndexMap<String, SessionRef>>,
}

impl SessionStore {
    pub fn new(capacity: usize) -> Self {
        SessionStore {
            capacity: capacity.max(1),
            sessions: Mutex::new(IndexMap::new()),
        }
    }

    pub fn insert(&self, id: String, session: Session) -> SessionRef {
        let entry = Arc::new(RwLock::new(session));
        let mut map = self.sessions.lock().expect("session map poisoned");
        map.insert(id, entry.clone());
        while map.len() > self.capacity {
            map.shift_remove_index(0);
        }
        entry
    }

    /// Looks up a session and marks it most recently used.
    pub fn get(&self, id: &str) -> Option<SessionRef> {
        let mut map = self.sessions.lock().expect("session map poisoned");
        let index = map.get_index_of(id)?;
        let last = map.len() - 1;
        map.move_index(index, last);
        map.get_index(last).map(|(_, s)| s.clone())
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
