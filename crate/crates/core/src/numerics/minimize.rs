//! Derivative-free local minimization (Nelder-Mead simplex).

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    /// Converged when the simplex diameter and the objective spread are
    /// both at most `tol`.
    pub tol: f64,
    pub max_iterations: usize,
    /// Relative size of the initial simplex steps.
    pub initial_step: f64,
    /// Number of restarts from the best vertex after convergence.
    pub restarts: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iterations: 20_000,
            initial_step: 0.1,
            restarts: 2,
        }
    }
}

/// Minimizes `objective` starting from `initial` with default options and
/// the given tolerance.
pub fn minimize<F>(objective: F, initial: &[f64], tol: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    let opts = MinimizeOptions {
        tol,
        ..MinimizeOptions::default()
    };
    minimize_with(objective, initial, &opts).map(|(x, _)| x)
}

/// Returns the minimizing point and the objective there.
pub fn minimize_with<F>(objective: F, initial: &[f64], opts: &MinimizeOptions) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> f64,
{
    let dim = initial.len();
    if dim == 0 || dim > 3 {
        return Err(invalid("initial", format!("dimension must be 1..=3, got {dim}")));
    }
    if !(opts.tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let f0 = objective(initial);
    if !f0.is_finite() {
        return Err(Error::Domain("objective is not finite at the initial point".into()));
    }

    let mut best = initial.to_vec();
    let mut best_f = f0;
    let mut iterations = 0;
    for _ in 0..=opts.restarts {
        let remaining = opts.max_iterations.saturating_sub(iterations);
        if remaining == 0 && iterations > 0 {
            break;
        }
        let (x, fx, used) = nelder_mead(&objective, &best, opts, remaining)?;
        iterations += used;
        let improved = fx < best_f;
        if fx <= best_f {
            best = x;
            best_f = fx;
        }
        if !improved {
            break;
        }
    }
    Ok((best, best_f))
}

fn nelder_mead<F>(objective: &F, start: &[f64], opts: &MinimizeOptions, budget: usize) -> Result<(Vec<f64>, f64, usize)>
where
    F: Fn(&[f64]) -> f64,
{
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let dim = start.len();
    let eval = |x: &[f64]| {
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), eval(start)));
    for i in 0..dim {
        let mut v = start.to_vec();
        let step = if v[i] != 0.0 {
            opts.initial_step * v[i].abs()
        } else {
            opts.initial_step
        };
        v[i] += step;
        let fv = eval(&v);
        simplex.push((v, fv));
    }

    for iteration in 0..budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[dim].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread <= opts.tol && diameter <= opts.tol {
            let (x, fx) = simplex.swap_remove(0);
            return Ok((x, fx, iteration));
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(v, _)| v[j]).sum::<f64>() / dim as f64)
            .collect();
        let toward = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim].0)
                .map(|(c, w)| c + coef * (w - c))
                .collect()
        };

        let reflected = toward(-ALPHA);
        let f_reflected = eval(&reflected);
        if f_reflected < simplex[0].1 {
            let expanded = toward(-GAMMA);
            let f_expanded = eval(&expanded);
            simplex[dim] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < simplex[dim - 1].1 {
            simplex[dim] = (reflected, f_reflected);
            continue;
        }
        let (contracted, f_contracted) = if f_reflected < simplex[dim].1 {
            let c = toward(-RHO);
            let fc = eval(&c);
            (c, fc)
        } else {
            let c = toward(RHO);
            let fc = eval(&c);
            (c, fc)
        };
        if f_contracted < simplex[dim].1.min(f_reflected) {
            simplex[dim] = (contracted, f_contracted);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            for (x, a) in vertex.0.iter_mut().zip(&anchor) {
                *x = a + SIGMA * (*x - a);
            }
            vertex.1 = eval(&vertex.0);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    Err(Error::MinimizeNonConvergence {
        iterations: budget,
        best: simplex[0].1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_quadratic() {
        let p = minimize(|p| (p[0] - 2.0).powi(2), &[0.0], 1e-12).unwrap();
        assert!((p[0] - 2.0).abs() < 1e-8, "{p:?}");
    }

    #[test]
    fn two_dimensional_quadratic() {
        let p = minimize(|p| (p[0] - 1.0).powi(2) + (p[1] + 1.0).powi(2), &[0.0, 0.0], 1e-12).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-8 && (p[1] + 1.0).abs() < 1e-8, "{p:?}");
    }

    #[test]
    fn rosenbrock_three_dimensions() {
        let f = |p: &[f64]| {
            (1.0 - p[0]).powi(2)
                + 100.0 * (p[1] - p[0] * p[0]).powi(2)
                + (1.0 - p[1]).powi(2)
                + 100.0 * (p[2] - p[1] * p[1]).powi(2)
        };
        let p = minimize(f, &[-0.5, 0.5, 0.5], 1e-12).unwrap();
        for v in p {
            assert!((v - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn deterministic() {
        let f = |p: &[f64]| (p[0] - 0.3).powi(2) + (p[0] * p[1] - 1.0).powi(2);
        let a = minimize(f, &[1.0, 1.0], 1e-10).unwrap();
        let b = minimize(f, &[1.0, 1.0], 1e-10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn iteration_cap() {
        let opts = MinimizeOptions {
            tol: 1e-14,
            max_iterations: 5,
            ..MinimizeOptions::default()
        };
        let err = minimize_with(|p| (p[0] - 2.0).powi(2), &[0.0], &opts);
        assert!(matches!(err, Err(Error::MinimizeNonConvergence { .. })));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(minimize(|_| 0.0, &[], 1e-8).is_err());
        assert!(minimize(|_| 0.0, &[0.0; 4], 1e-8).is_err());
        assert!(minimize(|_| f64::NAN, &[0.0], 1e-8).is_err());
    }
}
