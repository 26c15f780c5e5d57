//! Derivative-free simplex minimization.

#[derive(Clone, Copy, Debug)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Stop once the simplex diameter drops below `xtol * (1 + |x_best|)`.
    pub xtol: f64,
    /// Stop once the best value is at or below this.
    pub ftarget: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self { max_iter: 4000, xtol: 1e-15, ftarget: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
}

impl NelderMead {
    /// Minimizes `f` from `x0` with an initial axis-aligned simplex of `step`.
    /// Non-finite objective values are treated as `+inf`.
    pub fn minimize(&self, f: impl Fn(&[f64]) -> f64, x0: &[f64], step: &[f64]) -> Minimum {
        let n = x0.len();
        let eval = |x: &[f64]| {
            let v = f(x);
            if v.is_finite() {
                v
            } else {
                f64::INFINITY
            }
        };
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), eval(x0)));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += step[i];
            let v = eval(&x);
            simplex.push((x, v));
        }
        let mut iterations = 0;
        while iterations < self.max_iter {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[0].1 <= self.ftarget {
                break;
            }
            let best_norm = simplex[0].0.iter().map(|v| v * v).sum::<f64>().sqrt();
            let diameter = simplex[1..]
                .iter()
                .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            if diameter <= self.xtol * (1.0 + best_norm) {
                break;
            }
            iterations += 1;

            let centroid: Vec<f64> =
                (0..n).map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64).collect();
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> { (0..n).map(|i| centroid[i] + t * (worst.0[i] - centroid[i])).collect() };

            let xr = along(-1.0);
            let fr = eval(&xr);
            if fr < simplex[0].1 {
                let xe = along(-2.0);
                let fe = eval(&xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < worst.1 {
                    let x = along(-0.5);
                    let v = eval(&x);
                    (x, v)
                } else {
                    let x = along(0.5);
                    let v = eval(&x);
                    (x, v)
                };
                if fc < worst.1.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for entry in simplex.iter_mut().skip(1) {
                        let x: Vec<f64> = (0..n).map(|i| best[i] + 0.5 * (entry.0[i] - best[i])).collect();
                        let v = eval(&x);
                        *entry = (x, v);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, f) = simplex.swap_remove(0);
        Minimum { x, f, iterations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let m = NelderMead::default().minimize(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &[0.5, 0.5],
        );
        assert!((m.x[0] - 1.0).abs() < 1e-7 && (m.x[1] + 2.0).abs() < 1e-7, "{m:?}");
    }

    #[test]
    fn square_root_cusp() {
        // Same non-smooth shape as a coalescence measure near an EP.
        let m = NelderMead::default().minimize(|x| (x[0] - 0.3).abs().sqrt(), &[0.0], &[0.1]);
        assert!((m.x[0] - 0.3).abs() < 1e-12, "{m:?}");
    }

    #[test]
    fn rosenbrock() {
        let nm = NelderMead { max_iter: 20000, ..Default::default() };
        let m = nm.minimize(|x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2), &[-1.2, 1.0], &[0.1, 0.1]);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn target_stops_early() {
        let nm = NelderMead { ftarget: 1e-2, ..Default::default() };
        let m = nm.minimize(|x| x[0] * x[0], &[1.0], &[0.5]);
        assert!(m.f <= 1e-2);
    }
}
