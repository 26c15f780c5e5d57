//! Ensemble averages and no-jump postselection.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, Ket, Operator, C64};
use crate::model::LindbladModel;

use super::nojump::check_normalized;
use super::trajectory::{trajectory_seed, Stepper, TrajectoryRecord};
use super::TimeGrid;

/// Trajectories summed sequentially inside one parallel job.
const BLOCK: usize = 64;
/// Blocks evaluated in parallel before being folded into the totals in order.
const WAVE: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleStats {
    pub times: Vec<f64>,
    /// `(1/N) sum_k |psi_k(t)><psi_k(t)|`.
    pub mean_state: Vec<DensityMatrix>,
    pub nojump_fraction: Vec<f64>,
    pub nojump_count: Vec<usize>,
    /// Average over trajectories without a jump so far; `None` when none survive.
    pub conditional_state: Vec<Option<DensityMatrix>>,
    pub trajectory_count: usize,
    pub total_jumps: usize,
}

impl EnsembleStats {
    pub fn conditional_at(&self, k: usize) -> Result<&DensityMatrix> {
        self.conditional_state[k].as_ref().ok_or(Error::EmptySample { time: self.times[k] })
    }
}

struct Sums {
    all: Vec<Operator>,
    clean: Vec<Operator>,
    counts: Vec<usize>,
    jumps: usize,
}

impl Sums {
    fn new(points: usize, dim: usize) -> Self {
        Self {
            all: vec![Operator::zeros(dim); points],
            clean: vec![Operator::zeros(dim); points],
            counts: vec![0; points],
            jumps: 0,
        }
    }

    fn absorb(&mut self, other: &Sums) {
        for k in 0..self.all.len() {
            self.all[k] = &self.all[k] + &other.all[k];
            self.clean[k] = &self.clean[k] + &other.clean[k];
            self.counts[k] += other.counts[k];
        }
        self.jumps += other.jumps;
    }
}

fn add_projector(acc: &mut Operator, psi: &Ket) {
    let d = psi.dim();
    for i in 0..d {
        for j in 0..d {
            acc[(i, j)] += psi[i] * psi[j].conj();
        }
    }
}

/// Runs `n` trajectories with seeds from [`trajectory_seed`] and averages them.
///
/// Trajectories are grouped in fixed blocks and the blocks are summed in
/// index order, so the result is bit-for-bit independent of the thread count.
pub fn ensemble_average(
    model: &LindbladModel,
    psi0: &Ket,
    grid: &TimeGrid,
    n: usize,
    master_seed: u64,
) -> Result<EnsembleStats> {
    if n == 0 {
        return Err(Error::InvalidParameter("ensemble needs at least one trajectory".into()));
    }
    if psi0.dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: psi0.dim() });
    }
    check_normalized(psi0)?;
    let stepper = Stepper::new(model, grid)?;
    let points = grid.len();
    let dim = stepper.dim();
    let blocks = n.div_ceil(BLOCK);
    let mut total = Sums::new(points, dim);
    for wave in (0..blocks).step_by(WAVE) {
        let sums: Vec<Sums> = (wave..(wave + WAVE).min(blocks))
            .into_par_iter()
            .map(|b| -> Result<Sums> {
                let mut s = Sums::new(points, dim);
                for k in b * BLOCK..((b + 1) * BLOCK).min(n) {
                    let (jumps, _) = stepper.run(psi0, trajectory_seed(master_seed, k as u64), |i, psi, clean| {
                        add_projector(&mut s.all[i], psi);
                        if clean {
                            add_projector(&mut s.clean[i], psi);
                            s.counts[i] += 1;
                        }
                    })?;
                    s.jumps += jumps.len();
                }
                Ok(s)
            })
            .collect::<Result<_>>()?;
        for s in &sums {
            total.absorb(s);
        }
    }
    let inv = 1.0 / n as f64;
    Ok(EnsembleStats {
        times: grid.times(),
        mean_state: total.all.iter().map(|r| DensityMatrix::new_unchecked(r.scale_re(inv))).collect(),
        nojump_fraction: total.counts.iter().map(|&c| c as f64 * inv).collect(),
        conditional_state: total
            .clean
            .iter()
            .zip(&total.counts)
            .map(|(r, &c)| (c > 0).then(|| DensityMatrix::new_unchecked(r.scale_re(1.0 / c as f64))))
            .collect(),
        nojump_count: total.counts,
        trajectory_count: n,
        total_jumps: total.jumps,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PostSelection {
    pub times: Vec<f64>,
    pub conditional_state: Vec<Option<DensityMatrix>>,
    pub fraction: Vec<f64>,
    pub count: Vec<usize>,
}

impl PostSelection {
    pub fn conditional_at(&self, k: usize) -> Result<&DensityMatrix> {
        self.conditional_state[k].as_ref().ok_or(Error::EmptySample { time: self.times[k] })
    }
}

/// Averages, at each time, only the records without any jump up to that time.
pub fn postselect_no_jump(records: &[TrajectoryRecord]) -> Result<PostSelection> {
    let first =
        records.first().ok_or_else(|| Error::InvalidParameter("postselection needs at least one record".into()))?;
    let points = first.times.len();
    let dim = first.states[0].dim();
    if let Some(bad) = records.iter().find(|r| r.times.len() != points) {
        return Err(Error::LengthMismatch { expected: points, found: bad.times.len() });
    }
    let mut sums = vec![Operator::zeros(dim); points];
    let mut count = vec![0usize; points];
    for r in records {
        for k in 0..points {
            if !r.survived(k) {
                break;
            }
            add_projector(&mut sums[k], &r.states[k]);
            count[k] += 1;
        }
    }
    let n = records.len() as f64;
    Ok(PostSelection {
        times: first.times.clone(),
        conditional_state: sums
            .iter()
            .zip(&count)
            .map(|(s, &c)| (c > 0).then(|| DensityMatrix::new_unchecked(s.scale(C64::new(1.0 / c as f64, 0.0)))))
            .collect(),
        fraction: count.iter().map(|&c| c as f64 / n).collect(),
        count,
    })
}
