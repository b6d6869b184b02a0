//! Exact arithmetic for ordinals below ε₀ and the number-theoretic processes
//! they measure: hereditary base notation, Goodstein sequences, and the
//! Kirby–Paris hydra game.

pub mod compact;
pub mod goodstein;
pub mod hereditary;
pub mod hydra;
pub mod ordinal;
pub mod sample;

pub use compact::{CompactOrdinal, CompactRep};
pub use goodstein::{
    length_via_hardy, ordinal_of, run, BaseSchedule, GoodsteinError, GoodsteinState, StepWitness,
    Trace, TraceRecord,
};
pub use hereditary::{parse_rep, to_hereditary, HereditaryError, HereditaryRep};
pub use hydra::{play, GameRecord, HeadPath, Hydra, HydraError, MoveRecord, Strategy};
pub use ordinal::{compare, Ordinal, OrdinalError, Term};
