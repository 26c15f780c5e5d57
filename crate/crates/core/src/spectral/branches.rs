use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral::eigen::EigenSystem;

/// Eigenvalue branches along a 1-D sweep.
///
/// `order[p][b]` is the index into `sweep[p].eigenvalues` assigned to
/// branch `b` at grid point `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Branches {
    pub order: Vec<Vec<usize>>,
}

impl Branches {
    pub fn branch_count(&self) -> usize {
        self.order.first().map_or(0, Vec::len)
    }

    pub fn value(&self, sweep: &[EigenSystem], point: usize, branch: usize) -> C64 {
        sweep[point].eigenvalues[self.order[point][branch]]
    }

    /// `values[b][p]`.
    pub fn values(&self, sweep: &[EigenSystem]) -> Vec<Vec<C64>> {
        (0..self.branch_count()).map(|b| (0..sweep.len()).map(|p| self.value(sweep, p, b)).collect()).collect()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Connects eigenvalues of consecutive grid points into continuous curves.
///
/// Each branch is extrapolated linearly from its last two values and matched
/// to the current eigenvalues by minimal total distance: exhaustively over
/// permutations for `d <= 3`, greedily (closest pair first) above that.
pub fn track_branches(sweep: &[EigenSystem]) -> Result<Branches> {
    if sweep.len() < 2 {
        return Err(Error::InvalidParameter("branch tracking needs at least two grid points".into()));
    }
    let d = sweep[0].dim();
    if let Some(bad) = sweep.iter().find(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: bad.dim() });
    }
    let perms = if d <= 3 { permutations(d) } else { Vec::new() };
    let mut order = vec![(0..d).collect::<Vec<_>>()];
    for p in 1..sweep.len() {
        let predicted: Vec<C64> = (0..d)
            .map(|b| {
                let last = sweep[p - 1].eigenvalues[order[p - 1][b]];
                if p >= 2 {
                    let before = sweep[p - 2].eigenvalues[order[p - 2][b]];
                    2.0 * last - before
                } else {
                    last
                }
            })
            .collect();
        let current = &sweep[p].eigenvalues;
        let assignment = if d <= 3 {
            let mut best = (f64::INFINITY, perms[0].clone());
            for perm in &perms {
                let cost: f64 = perm.iter().enumerate().map(|(b, &k)| (predicted[b] - current[k]).norm()).sum();
                if cost < best.0 {
                    best = (cost, perm.clone());
                }
            }
            best.1
        } else {
            greedy(&predicted, current)
        };
        order.push(assignment);
    }
    Ok(Branches { order })
}

fn greedy(predicted: &[C64], current: &[C64]) -> Vec<usize> {
    let d = predicted.len();
    let mut pairs: Vec<(f64, usize, usize)> = (0..d)
        .flat_map(|b| (0..d).map(move |k| (b, k)))
        .map(|(b, k)| ((predicted[b] - current[k]).norm(), b, k))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut assignment = vec![usize::MAX; d];
    let mut taken = vec![false; d];
    for (_, b, k) in pairs {
        if assignment[b] == usize::MAX && !taken[k] {
            assignment[b] = k;
            taken[k] = true;
        }
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Operator;
    use crate::spectral::eigen::eigendecompose;

    fn sweep(points: usize, f: impl Fn(f64) -> Operator) -> Vec<EigenSystem> {
        (0..points).map(|k| eigendecompose(&f(k as f64 / (points - 1) as f64)).unwrap()).collect()
    }

    #[test]
    fn constant_sweep() {
        let a = Operator::diagonal(&[C64::new(1.0, 0.0), C64::new(-2.0, 0.5)]);
        let s = sweep(5, |_| a.clone());
        let b = track_branches(&s).unwrap();
        for vals in b.values(&s) {
            assert!(vals.iter().all(|v| *v == vals[0]));
        }
    }

    #[test]
    fn crossing_lines_follow_continuity() {
        let s = sweep(11, |t| Operator::diagonal(&[C64::new(t, 0.0), C64::new(1.0 - t, 0.0)]));
        let b = track_branches(&s).unwrap();
        let vals = b.values(&s);
        // one branch rises, the other falls, straight through t = 0.5
        let rising = if vals[0][0].re < vals[1][0].re { 0 } else { 1 };
        for p in 0..11 {
            let t = p as f64 / 10.0;
            assert!((vals[rising][p].re - t).abs() < 1e-14);
            assert!((vals[1 - rising][p].re - (1.0 - t)).abs() < 1e-14);
        }
    }

    #[test]
    fn greedy_path_matches_exhaustive_on_separated_values() {
        let s = sweep(6, |t| {
            Operator::diagonal(&[C64::new(t, 0.0), C64::new(3.0 - t, 0.0), C64::new(10.0, t), C64::new(-5.0, -t)])
        });
        let b = track_branches(&s).unwrap();
        for vals in b.values(&s) {
            for w in vals.windows(2) {
                assert!((w[1] - w[0]).norm() < 0.5);
            }
        }
    }

    #[test]
    fn errors() {
        let one = sweep(2, |_| Operator::identity(2));
        assert!(track_branches(&one[..1]).is_err());
        let mixed = vec![one[0].clone(), eigendecompose(&Operator::identity(3)).unwrap()];
        assert!(track_branches(&mixed).is_err());
    }
}
