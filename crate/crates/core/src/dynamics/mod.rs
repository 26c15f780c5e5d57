//! Master-equation integration, no-jump propagation and quantum-jump trajectories.

mod ensemble;
mod grid;
mod master;
mod nojump;
mod trajectory;

pub use ensemble::{ensemble_average, postselect_no_jump, EnsembleStats, PostSelection};
pub use grid::TimeGrid;
pub use master::{evolve_exact, integrate_master, max_physicality_defect};
pub use nojump::{propagate_nhh, NoJumpEvolution};
pub use trajectory::{mc_trajectory, trajectory_seed, Jump, TrajectoryRecord};
