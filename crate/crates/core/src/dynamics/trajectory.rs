//! Fixed-step quantum-jump trajectories.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Ket, Operator, C64};
use crate::model::{nhh, LindbladModel};

use super::nojump::check_normalized;
use super::TimeGrid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    /// Grid index of the first post-jump state.
    pub step: usize,
    pub time: f64,
    pub channel: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<Ket>,
    pub jumps: Vec<Jump>,
    /// Probability of no jump up to each time. Frozen at its last value once
    /// the trajectory has jumped.
    pub survival: Vec<f64>,
    pub seed: u64,
}

impl TrajectoryRecord {
    /// True when no jump happened in `[t0, times[k]]`.
    pub fn survived(&self, k: usize) -> bool {
        self.jumps.first().is_none_or(|j| j.step > k)
    }
}

/// Per-step operators shared by every trajectory of a model.
pub(crate) struct Stepper {
    no_jump: Operator,
    channels: Vec<(f64, Operator)>,
    grid: TimeGrid,
}

impl Stepper {
    pub(crate) fn new(model: &LindbladModel, grid: &TimeGrid) -> Result<Self> {
        grid.check_jump_load(model)?;
        let dt = grid.dt();
        let d = model.dim();
        let no_jump = Operator::identity(d).add_scaled(C64::new(0.0, -dt), nhh(model).operator())?;
        let channels = model.channels().iter().map(|ch| (ch.rate() * dt, ch.operator().clone())).collect();
        Ok(Self { no_jump, channels, grid: *grid })
    }

    pub(crate) fn dim(&self) -> usize {
        self.no_jump.dim()
    }

    /// Runs one trajectory, handing each grid state to `visit(k, psi, survived)`.
    pub(crate) fn run(
        &self,
        psi0: &Ket,
        seed: u64,
        mut visit: impl FnMut(usize, &Ket, bool),
    ) -> Result<(Vec<Jump>, Vec<f64>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut psi = psi0.clone();
        let mut jumps = Vec::new();
        let mut survival = Vec::with_capacity(self.grid.len());
        survival.push(1.0);
        visit(0, &psi, true);
        let mut branches: Vec<Ket> = Vec::with_capacity(self.channels.len());
        let mut probs: Vec<f64> = Vec::with_capacity(self.channels.len());
        for k in 0..self.grid.steps {
            branches.clear();
            probs.clear();
            for (weight, op) in &self.channels {
                let phi = op.apply_unchecked(&psi);
                probs.push(weight * phi.norm_sqr());
                branches.push(phi);
            }
            let total: f64 = probs.iter().sum();
            if total > crate::tol::JUMP_LOAD_MAX || !total.is_finite() {
                return Err(Error::StepTooCoarse { probability: total, time: self.grid.time(k) });
            }
            let clean = jumps.is_empty();
            let u: f64 = rng.random();
            if u < total {
                let mut acc = 0.0;
                let mut channel = probs.len() - 1;
                for (mu, p) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        channel = mu;
                        break;
                    }
                }
                psi = branches[channel].normalized()?;
                jumps.push(Jump { step: k + 1, time: self.grid.time(k + 1), channel });
            } else {
                psi = self.no_jump.apply_unchecked(&psi).normalized()?;
            }
            let last = survival[k];
            survival.push(if clean { last * (1.0 - total) } else { last });
            visit(k + 1, &psi, jumps.is_empty());
        }
        Ok((jumps, survival))
    }
}

/// One trajectory of an (already unraveled) model. Deterministic in `seed`.
///
/// Each step draws a single uniform number: a jump in channel `mu` happens
/// with probability `rate_mu dt <psi|J_mu^dag J_mu|psi>`, otherwise
/// `1 - i H_eff dt` is applied. Either branch is renormalized.
pub fn mc_trajectory(model: &LindbladModel, psi0: &Ket, grid: &TimeGrid, seed: u64) -> Result<TrajectoryRecord> {
    if psi0.dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: psi0.dim() });
    }
    check_normalized(psi0)?;
    let stepper = Stepper::new(model, grid)?;
    let mut states = Vec::with_capacity(grid.len());
    let (jumps, survival) = stepper.run(psi0, seed, |_, psi, _| states.push(psi.clone()))?;
    Ok(TrajectoryRecord { times: grid.times(), states, jumps, survival, seed })
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trajectory `k`: the `(k + 1)`-th output of a SplitMix64 stream
/// started at `master`.
pub fn trajectory_seed(master: u64, k: u64) -> u64 {
    splitmix64(master.wrapping_add(k.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::standard::{sigma_minus, sigma_x, EXCITED, GROUND};

    fn decay() -> LindbladModel {
        LindbladModel::new(Operator::zeros(2), vec![crate::model::JumpChannel::new(1.0, sigma_minus()).unwrap()])
            .unwrap()
    }

    #[test]
    fn closed_system_never_jumps() {
        let m = LindbladModel::new(sigma_x(), vec![]).unwrap();
        let r = mc_trajectory(&m, &Ket::basis(2, 0).unwrap(), &TimeGrid::new(0.0, 2.0, 200).unwrap(), 1).unwrap();
        assert!(r.jumps.is_empty());
        assert!(r.survival.iter().all(|&s| s == 1.0));
        assert!(r.states.iter().all(|s| (s.norm() - 1.0).abs() < 1e-10));
    }

    #[test]
    fn dark_state() {
        let r = mc_trajectory(&decay(), &Ket::basis(2, GROUND).unwrap(), &TimeGrid::new(0.0, 5.0, 500).unwrap(), 3)
            .unwrap();
        assert!(r.jumps.is_empty());
    }

    #[test]
    fn decay_jumps_once() {
        let grid = TimeGrid::new(0.0, 30.0, 3000).unwrap();
        for seed in 0..20 {
            let r = mc_trajectory(&decay(), &Ket::basis(2, EXCITED).unwrap(), &grid, seed).unwrap();
            assert_eq!(r.jumps.len(), 1, "seed {seed}");
            assert!(r.survival.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn same_seed_same_record() {
        let grid = TimeGrid::new(0.0, 3.0, 300).unwrap();
        let psi = Ket::basis(2, EXCITED).unwrap();
        let a = mc_trajectory(&decay(), &psi, &grid, 42).unwrap();
        let b = mc_trajectory(&decay(), &psi, &grid, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coarse_grid_is_an_error() {
        let grid = TimeGrid::new(0.0, 10.0, 10).unwrap();
        assert!(matches!(
            mc_trajectory(&decay(), &Ket::basis(2, EXCITED).unwrap(), &grid, 0),
            Err(Error::StepTooCoarse { .. })
        ));
    }

    #[test]
    fn seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|k| trajectory_seed(7, k)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(trajectory_seed(7, 0), trajectory_seed(8, 0));
    }
}
