//! Eigensystems of non-Hermitian matrices and exceptional-point detection.

pub mod branches;
pub mod closed;
pub mod coalescence;
pub mod eigen;
pub mod ep;
pub mod nelder_mead;

pub use branches::{track_branches, Branches};
pub use closed::{char_poly3, cubic_discriminant, cubic_roots, eig2_closed, eig3_closed};
pub use coalescence::{coalescence, coalescence_of, overlap, CoalescenceReport};
pub use eigen::{eigendecompose, eigenvalue_order, EigenSystem};
pub use ep::{cubic_ep_condition, find_ep, measure_at, EpLocation, EpSearchOptions, EpSearchResult, SearchSpace};
