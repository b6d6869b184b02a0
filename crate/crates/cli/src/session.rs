//! Hydra game sessions as served over HTTP.

use std::fmt;

use serde::{Deserialize, Serialize};
use superbase_core::hydra::DEFAULT_MAX_NODES;
use superbase_core::{HeadPath, Hydra, HydraError, MoveRecord, Ordinal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    InProgress,
    Won,
}

/// The serialized form of a session: both the response body and the file
/// stored on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSession {
    pub id: String,
    pub initial_tree: String,
    pub tree: String,
    /// Number of the next move.
    pub move_number: u64,
    pub ordinal: Ordinal,
    pub node_count: u64,
    pub head_count: u64,
    pub status: Status,
    pub history: Vec<MoveRecord>,
}

#[derive(Debug)]
pub enum SessionError {
    Won,
    Stale { expected: u64, actual: u64 },
    Hydra(HydraError),
}

impl fmt::Display for SessionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SessionError::Won => f.write_str("game already won"),
            SessionError::Stale { expected, actual } => {
                write!(f, "stale move: expected move {expected}, session is at move {actual}")
            }
            SessionError::Hydra(HydraError::NotAHead) => f.write_str("not a head"),
            SessionError::Hydra(e) => write!(f, "{e}"),
        }
    }
}

/// A session with its parsed hydra.
#[derive(Debug, Clone)]
pub struct LiveSession {
    snapshot: GameSession,
    hydra: Hydra,
}

impl LiveSession {
    pub fn new(id: String, hydra: Hydra) -> Self {
        let mut snapshot = GameSession {
            id,
            initial_tree: hydra.to_string(),
            tree: String::new(),
            move_number: 0,
            ordinal: Ordinal::zero(),
            node_count: 0,
            head_count: 0,
            status: Status::InProgress,
            history: Vec::new(),
        };
        refresh(&mut snapshot, &hydra);
        LiveSession { snapshot, hydra }
    }

    /// Rebuilds a session from its stored form, checking it is consistent.
    pub fn restore(snapshot: GameSession) -> Result<Self, String> {
        let hydra = Hydra::parse(&snapshot.tree)
            .map_err(|e| format!("session {}: {e}", snapshot.id))?
            .with_move_counter(snapshot.move_number);
        let mut check = snapshot.clone();
        refresh(&mut check, &hydra);
        if check != snapshot {
            return Err(format!("session {}: stored summary does not match tree", snapshot.id));
        }
        Ok(LiveSession { snapshot, hydra })
    }

    pub fn snapshot(&self) -> &GameSession {
        &self.snapshot
    }

    pub fn hydra(&self) -> &Hydra {
        &self.hydra
    }

    /// Applies one chop. `expected_move`, when given, must equal the upcoming
    /// move number so that racing clients cannot both act on one state.
    pub fn chop(&mut self, path: &[usize], expected_move: Option<u64>) -> Result<(), SessionError> {
        if self.hydra.is_won() {
            return Err(SessionError::Won);
        }
        let actual = self.hydra.move_counter();
        if let Some(expected) = expected_move {
            if expected != actual {
                return Err(SessionError::Stale { expected, actual });
            }
        }
        let next = self
            .hydra
            .chop_with_limit(path, DEFAULT_MAX_NODES)
            .map_err(SessionError::Hydra)?;
        self.snapshot.history.push(MoveRecord {
            move_number: actual,
            path: path.to_vec(),
            ordinal: next.ord_of(),
            node_count: next.node_count(),
        });
        refresh(&mut self.snapshot, &next);
        self.hydra = next;
        Ok(())
    }
}

fn refresh(s: &mut GameSession, hydra: &Hydra) {
    s.tree = hydra.to_string();
    s.move_number = hydra.move_counter();
    s.ordinal = hydra.ord_of();
    s.node_count = hydra.node_count();
    s.head_count = hydra.head_count();
    s.status = if hydra.is_won() {
        Status::Won
    } else {
        Status::InProgress
    };
}

/// Replays the recorded heads from the initial tree.
pub fn replay(session: &GameSession) -> Result<Hydra, HydraError> {
    let mut hydra = Hydra::parse(&session.initial_tree)?;
    for m in &session.history {
        hydra = hydra.chop(&m.path)?;
    }
    Ok(hydra)
}

/// Parses a path such as `0,2,1`.
pub fn parse_path(text: &str) -> Result<HeadPath, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| format!("invalid path component '{p}'"))
        })
        .collect()
}
