use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::LindbladModel;
use crate::tol;

/// Uniform time grid with `steps + 1` output points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, t1: f64, steps: usize) -> Result<Self> {
        let g = Self { t0, t1, steps };
        g.validate()?;
        Ok(g)
    }

    /// Grid from `t0` with a given step count and step size.
    pub fn with_step(t0: f64, dt: f64, steps: usize) -> Result<Self> {
        Self::new(t0, t0 + dt * steps as f64, steps)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t0.is_finite() || !self.t1.is_finite() {
            return Err(Error::NonFinite("time grid"));
        }
        if self.steps == 0 {
            return Err(Error::InvalidParameter("time grid needs at least one step".into()));
        }
        if !(self.t1 > self.t0) {
            return Err(Error::InvalidParameter(format!("time grid end {} must exceed start {}", self.t1, self.t0)));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        (self.t1 - self.t0) / self.steps as f64
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.t1
        } else {
            self.t0 + self.dt() * k as f64
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| self.time(k)).collect()
    }

    /// Upper bound on the per-step jump probability, `dt * sum_mu gamma_mu ||J_mu||^2`.
    ///
    /// Logs a warning above [`tol::JUMP_LOAD_WARN`] and fails above
    /// [`tol::JUMP_LOAD_MAX`].
    pub fn check_jump_load(&self, model: &LindbladModel) -> Result<f64> {
        self.validate()?;
        let load = model.jump_load(self.dt());
        if load > tol::JUMP_LOAD_MAX {
            return Err(Error::StepTooCoarse { probability: load, time: self.t0 });
        }
        if load > tol::JUMP_LOAD_WARN {
            log::warn!("jump probability per step may reach {load:.3}; first-order sampling error grows with dt");
        }
        Ok(load)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing() {
        let g = TimeGrid::new(0.0, 1.0, 4).unwrap();
        assert_eq!(g.dt(), 0.25);
        assert_eq!(g.times(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn last_point_is_exact() {
        let g = TimeGrid::new(0.0, 0.3, 7).unwrap();
        assert_eq!(*g.times().last().unwrap(), 0.3);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 3).is_err());
        assert!(TimeGrid::new(0.0, f64::NAN, 3).is_err());
    }
}
