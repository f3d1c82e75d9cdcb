//! Lower and upper bounds for the Dubins traveling salesman problem.
//!
//! The core of the crate is an exact solver for the Dubins interval problem
//! ([`interval::solve_interval`]): the shortest curvature-constrained path
//! between two points when the departure and arrival headings are restricted
//! to intervals. Partitioning every target's heading circle into intervals
//! and solving a one-in-a-set TSP over these costs gives a lower bound on the
//! optimal tour; fixing headings instead gives feasible tours.

pub mod angle;
pub mod dubins;
pub mod error;
pub mod gtsp;
pub mod interval;
pub mod pipeline;
pub mod verify;

pub use angle::{AngleInterval, Arc};
pub use dubins::{
    canonical_frame, dubins_shortest, simulate_word, word_length, CanonicalFrame, Configuration, DubinsPath, DubinsWord,
    Point, Segment, TurnRadius,
};
pub use error::{Error, Result};
pub use interval::{solve_interval, Candidate, CandidateLabel, IntervalSolution, TwoSegmentKind};
pub use gtsp::{GtspInstance, Mode, Partition, Tour};
