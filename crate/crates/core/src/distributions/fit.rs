//! Least-squares fit of a Q-family member to a target quantile function.

use serde::{Deserialize, Serialize};

use super::{DistributionModel, QFamilyParams};
use crate::error::{invalid, Error, Result};
use crate::numerics::{logistic, minimize_with, MinimizeOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QFamilyFit {
    pub params: QFamilyParams,
    /// Sum of squared quantile differences at the fitted parameters.
    pub objective: f64,
    pub initial_objective: f64,
}

fn objective(params: &QFamilyParams, levels: &[f64], targets: &[f64]) -> f64 {
    levels
        .iter()
        .zip(targets)
        .map(|(&u, &q)| {
            let diff = params.quantile_split(u, 1.0 - u) - q;
            diff * diff
        })
        .sum()
}

/// Minimizes `sum_i (Q_theta(u_i) - target.quantile(u_i))^2` over
/// `theta = (lambda, c, d)`.
///
/// The search runs on `(logit lambda, ln c, d)` so that every simplex
/// vertex is a valid parameter set.
pub fn fit_qfamily(target: &dyn DistributionModel, u_grid: &[f64], initial: QFamilyParams) -> Result<QFamilyFit> {
    initial.validate()?;
    if u_grid.len() < 5 {
        return Err(invalid("u_grid", format!("needs at least 5 levels, got {}", u_grid.len())));
    }
    if let Some(bad) = u_grid.iter().find(|&&u| !(u > 0.0 && u < 1.0)) {
        return Err(invalid("u_grid", format!("levels must lie in (0, 1), got {bad}")));
    }
    let targets = u_grid
        .iter()
        .map(|&u| target.quantile(u))
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = targets.iter().find(|q| !q.is_finite()) {
        return Err(Error::Domain(format!("target quantile is not finite ({bad})")));
    }

    let unpack = |p: &[f64]| QFamilyParams {
        lambda: logistic(p[0]),
        c: p[1].exp(),
        d: p[2],
    };
    let start = [
        (initial.lambda / (1.0 - initial.lambda)).ln(),
        initial.c.ln(),
        initial.d,
    ];
    let initial_objective = objective(&initial, u_grid, &targets);
    let opts = MinimizeOptions {
        tol: 1e-13,
        max_iterations: 50_000,
        ..MinimizeOptions::default()
    };
    let (best, value) = minimize_with(|p| objective(&unpack(p), u_grid, &targets), &start, &opts)?;
    let params = unpack(&best);
    Ok(QFamilyFit {
        params,
        objective: value,
        initial_objective,
    })
}
