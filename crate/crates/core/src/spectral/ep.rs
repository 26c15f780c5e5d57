//! Exceptional-point search over a one-parameter family of operators.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::spectral::closed::{char_poly3, cubic_discriminant};
use crate::spectral::coalescence::{coalescence_of, CoalescenceReport};
use crate::spectral::eigen::{eigendecompose, EigenSystem};
use crate::spectral::nelder_mead::NelderMead;
use crate::tol;

/// A point in parameter space: a real scalar or a complex displacement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpLocation {
    Real(f64),
    Complex(#[serde(with = "crate::model::json::complex")] C64),
}

impl EpLocation {
    pub fn as_real(&self) -> Option<f64> {
        match *self {
            EpLocation::Real(x) => Some(x),
            EpLocation::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<C64> {
        match *self {
            EpLocation::Complex(z) => Some(z),
            EpLocation::Real(_) => None,
        }
    }
}

/// Box that seeds the multistart grid. The simplex itself is unconstrained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    Real { min: f64, max: f64 },
    Complex { re: (f64, f64), im: (f64, f64) },
}

impl SearchSpace {
    fn to_location(&self, x: &[f64]) -> EpLocation {
        match self {
            SearchSpace::Real { .. } => EpLocation::Real(x[0]),
            SearchSpace::Complex { .. } => EpLocation::Complex(C64::new(x[0], x[1])),
        }
    }

    fn to_coords(&self, loc: EpLocation) -> Result<Vec<f64>> {
        match (self, loc) {
            (SearchSpace::Real { .. }, EpLocation::Real(x)) => Ok(vec![x]),
            (SearchSpace::Complex { .. }, EpLocation::Complex(z)) => Ok(vec![z.re, z.im]),
            _ => Err(Error::InvalidParameter("initial guess does not match the search space".into())),
        }
    }

    /// Grid points (row-major, imaginary axis outer) and the cell size.
    fn grid(&self, points: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
        let axis = |lo: f64, hi: f64| -> (Vec<f64>, f64) {
            if points <= 1 {
                return (vec![0.5 * (lo + hi)], (hi - lo).abs().max(1e-3));
            }
            let h = (hi - lo) / (points - 1) as f64;
            ((0..points).map(|k| lo + h * k as f64).collect(), h.abs().max(1e-6))
        };
        match *self {
            SearchSpace::Real { min, max } => {
                let (xs, h) = axis(min, max);
                (xs.into_iter().map(|x| vec![x]).collect(), vec![h])
            }
            SearchSpace::Complex { re, im } => {
                let (rs, hr) = axis(re.0, re.1);
                let (is, hi) = axis(im.0, im.1);
                let pts = is.iter().flat_map(|&y| rs.iter().map(move |&x| vec![x, y])).collect();
                (pts, vec![hr, hi])
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            SearchSpace::Real { min, max } => min.is_finite() && max.is_finite() && min <= max,
            SearchSpace::Complex { re, im } => {
                [re.0, re.1, im.0, im.1].iter().all(|v| v.is_finite()) && re.0 <= re.1 && im.0 <= im.1
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid search box {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpSearchOptions {
    /// Converged iff the coalescence measure at the optimum is at most this.
    pub tol: f64,
    /// Grid points per axis for the multistart scan.
    pub grid: usize,
    /// Number of best grid points refined by Nelder-Mead.
    pub starts: usize,
    pub max_iter: usize,
}

impl Default for EpSearchOptions {
    fn default() -> Self {
        Self { tol: tol::EP_SEARCH, grid: 9, starts: 4, max_iter: 4000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpSearchResult {
    pub location: EpLocation,
    pub report: CoalescenceReport,
    pub converged: bool,
    pub iterations: usize,
    pub system: EigenSystem,
}

/// Coalescence measure of `family(loc)`, `+inf` when it cannot be evaluated.
pub fn measure_at<F>(family: &F, loc: EpLocation) -> f64
where
    F: Fn(EpLocation) -> Result<Operator>,
{
    family(loc).and_then(|a| eigendecompose(&a)).and_then(|s| coalescence_of(&s)).map_or(f64::INFINITY, |r| r.measure)
}

/// Minimizes the coalescence measure over the family.
///
/// A grid over `space` ranks starting points; the best `starts` of them (plus
/// `x0`, if given) are refined by Nelder-Mead, each restarted once from its
/// own optimum. Results are merged by grid index, so the outcome does not
/// depend on the thread count.
pub fn find_ep<F>(
    family: F,
    space: &SearchSpace,
    x0: Option<EpLocation>,
    opts: &EpSearchOptions,
) -> Result<EpSearchResult>
where
    F: Fn(EpLocation) -> Result<Operator> + Sync,
{
    space.validate()?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("search tolerance must be positive, got {}", opts.tol)));
    }
    let (grid, cell) = space.grid(opts.grid.max(1));
    let scored: Vec<(usize, f64)> =
        grid.par_iter().enumerate().map(|(k, x)| (k, measure_at(&family, space.to_location(x)))).collect();
    let mut ranked = scored;
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut starts: Vec<Vec<f64>> = ranked.iter().take(opts.starts.max(1)).map(|&(k, _)| grid[k].clone()).collect();
    if let Some(x0) = x0 {
        starts.insert(0, space.to_coords(x0)?);
    }

    let nm = NelderMead { max_iter: opts.max_iter, xtol: 1e-15, ftarget: 0.0 };
    let objective = |x: &[f64]| measure_at(&family, space.to_location(x));
    let step: Vec<f64> = cell.iter().map(|h| 0.5 * h).collect();
    let runs: Vec<(usize, Vec<f64>, f64, usize)> = starts
        .par_iter()
        .enumerate()
        .map(|(k, x)| {
            let first = nm.minimize(objective, x, &step);
            let restart_step: Vec<f64> = step.iter().map(|h| h * 1e-3).collect();
            let second = nm.minimize(objective, &first.x, &restart_step);
            let iterations = first.iterations + second.iterations;
            if second.f <= first.f {
                (k, second.x, second.f, iterations)
            } else {
                (k, first.x, first.f, iterations)
            }
        })
        .collect();
    let (_, x, _, iterations) =
        runs.into_iter().min_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0))).expect("at least one start");
    let location = space.to_location(&x);
    let system = eigendecompose(&family(location)?)?;
    let report = coalescence_of(&system)?;
    Ok(EpSearchResult { converged: report.measure <= opts.tol, location, report, iterations, system })
}

/// Discriminant of the characteristic cubic of a 3x3 family member; it
/// vanishes exactly where two eigenvalues coincide.
pub fn cubic_ep_condition<F>(family: F, beta: C64) -> Result<C64>
where
    F: Fn(C64) -> Result<Operator>,
{
    let m = family(beta)?;
    let (a, b, c) = char_poly3(&m)?;
    Ok(cubic_discriminant(a, b, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// `[[0, 1], [t, 0]]`: EP at t = 0.
    fn shear(loc: EpLocation) -> Result<Operator> {
        let t = match loc {
            EpLocation::Real(x) => c(x, 0.0),
            EpLocation::Complex(z) => z,
        };
        let mut a = Operator::zeros(2);
        a[(0, 1)] = c(1.0, 0.0);
        a[(1, 0)] = t - c(0.3, -0.2);
        Ok(a)
    }

    #[test]
    fn locates_complex_ep() {
        // The measure bottoms out near sqrt(eps) at a second-order EP.
        let space = SearchSpace::Complex { re: (-1.0, 1.0), im: (-1.0, 1.0) };
        let opts = EpSearchOptions { tol: 1e-6, ..Default::default() };
        let r = find_ep(shear, &space, None, &opts).unwrap();
        assert!(r.converged, "{r:?}");
        let z = r.location.as_complex().unwrap();
        assert!((z - c(0.3, -0.2)).norm() < 1e-8, "{z}");
    }

    #[test]
    fn real_search_reports_nonconvergence() {
        // Real t never reaches 0.3 - 0.2i.
        let space = SearchSpace::Real { min: -1.0, max: 1.0 };
        let r = find_ep(shear, &space, None, &EpSearchOptions::default()).unwrap();
        assert!(!r.converged);
        assert!(r.report.measure > 1e-3);
    }

    #[test]
    fn bad_inputs() {
        let space = SearchSpace::Real { min: 1.0, max: -1.0 };
        assert!(find_ep(shear, &space, None, &EpSearchOptions::default()).is_err());
        let space = SearchSpace::Real { min: -1.0, max: 1.0 };
        let opts = EpSearchOptions { tol: 0.0, ..Default::default() };
        assert!(find_ep(shear, &space, None, &opts).is_err());
        let x0 = Some(EpLocation::Complex(c(0.0, 0.0)));
        assert!(find_ep(shear, &space, x0, &EpSearchOptions::default()).is_err());
    }

    #[test]
    fn discriminant_of_diagonal_family() {
        let fam = |b: C64| Ok(Operator::diagonal(&[c(1.0, 0.0), b, c(3.0, 0.0)]));
        assert!(cubic_ep_condition(fam, c(1.0, 0.0)).unwrap().norm() < 1e-12);
        assert!((cubic_ep_condition(fam, c(2.0, 0.0)).unwrap() - c(4.0, 0.0)).norm() < 1e-12);
    }
}
