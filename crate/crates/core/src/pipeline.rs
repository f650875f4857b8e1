//! End-to-end solve: exponential primal, eta-hat, exponential dual, and
//! certificates for every requested loss built from the same dual masses.

use std::time::Instant;

use crate::certify::{certify, universality_check, Certificate, UniversalOutcome};
use crate::dualsolve::{solve_dual_with, DualConfig, DualSolution};
use crate::error::Result;
use crate::ground::{Field, GroundSet};
use crate::io::{SweepRow, SweepValues};
use crate::losses::Loss;
use crate::measures::TwoClassMeasure;
use crate::primalsolve::{eta_hat, solve_exp_primal, EtaField, ExpPrimal, PrimalConfig};
use crate::scalar::Scalar;

/// Default certification tolerance: tighter for the loss that is solved
/// directly than for losses reached through eta-hat.
pub fn default_tol(loss: Loss) -> f64 {
    match loss {
        Loss::Exponential => 1e-4,
        _ => 1e-3,
    }
}

#[derive(Debug, Clone)]
pub struct Solution<T> {
    pub primal: ExpPrimal<T>,
    pub eta_hat: EtaField<T>,
    pub dual: DualSolution<T>,
    /// One entry per requested loss, in request order.
    pub outcomes: Vec<UniversalOutcome<T>>,
}

impl<T: Scalar> Solution<T> {
    pub fn outcome(&self, loss: Loss) -> Option<&UniversalOutcome<T>> {
        self.outcomes.iter().find(|o| o.certificate.loss == loss.key())
    }

    pub fn certificate(&self, loss: Loss) -> Option<&Certificate> {
        self.outcome(loss).map(|o| &o.certificate)
    }

    pub fn field(&self, loss: Loss) -> Option<&Field<T>> {
        self.outcome(loss).map(|o| &o.f)
    }

    pub fn converged(&self) -> bool {
        self.primal.converged && self.dual.converged
    }
}

/// Runs the full pipeline for `losses` (duplicates ignored).
pub fn solve<T: Scalar>(
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
    losses: &[Loss],
    primal_config: &PrimalConfig,
    dual_config: &DualConfig,
) -> Result<Solution<T>> {
    let primal = solve_exp_primal(g, measure, primal_config)?;
    let eta = eta_hat(&primal.f);
    let dual = solve_dual_with(&Loss::Exponential, g, measure, dual_config, Some(&primal))?;
    let mut wanted: Vec<Loss> = Vec::new();
    for &l in losses {
        if !wanted.contains(&l) {
            wanted.push(l);
        }
    }
    let mut outcomes = universality_check(&eta, &dual, &wanted, g, measure)?;
    // The exponential field is the solver output itself, not a reconstruction.
    for o in outcomes.iter_mut().filter(|o| o.certificate.loss == Loss::Exponential.key()) {
        o.certificate = certify(Loss::Exponential, &primal.f, &eta, &dual, g, measure)?;
        o.f = primal.f.clone();
        o.snapped = false;
    }
    Ok(Solution { primal, eta_hat: eta, dual, outcomes })
}

/// Solves the instance at every epsilon of `grid` (neighbours re-indexed
/// each time) and reports one row per `(epsilon, loss)`. A failed solve marks
/// its rows and the sweep continues.
pub fn sweep(
    g: &GroundSet<f64>,
    measure: &TwoClassMeasure<f64>,
    grid: &[f64],
    losses: &[Loss],
    primal_config: &PrimalConfig,
    dual_config: &DualConfig,
) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for &eps in grid {
        let start = Instant::now();
        let solved = g.with_epsilon(eps).and_then(|ge| solve(&ge, measure, losses, primal_config, dual_config));
        let ms = start.elapsed().as_secs_f64() * 1e3;
        for &loss in losses {
            let values = solved.as_ref().ok().and_then(|s| s.certificate(loss)).map(|c| SweepValues {
                primal: c.primal_value,
                dual: c.dual_value,
                gap: c.gap,
                iters: solved.as_ref().map(|s| s.primal.iterations + s.dual.iterations).unwrap_or(0),
                runtime_ms: ms,
            });
            rows.push(SweepRow { eps, loss: loss.key().to_string(), values });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::Norm;

    #[test]
    fn twopoint_pipeline() {
        let pts: Vec<Vec<f64>> = [0.0, 0.5, 1.0].iter().map(|&x| vec![x]).collect();
        let g = GroundSet::new(&pts, Norm::L2, 0.6).unwrap();
        let m = TwoClassMeasure::new(vec![0.5, 0.0, 0.0], vec![0.0, 0.0, 0.5]).unwrap();
        let s = solve(&g, &m, &Loss::ALL, &PrimalConfig::default(), &DualConfig::default()).unwrap();
        assert!(s.converged());
        for o in &s.outcomes {
            let tol = default_tol(o.certificate.loss.parse().unwrap());
            assert!(o.certificate.gap.abs() <= tol, "{:?}", o.certificate);
        }
        assert!((s.certificate(Loss::Logistic).unwrap().dual_value - std::f64::consts::LN_2).abs() < 1e-6);
        assert_eq!(s.field(Loss::Exponential).unwrap()[0], f64::NEG_INFINITY);
        assert!(s.field(Loss::Exponential).unwrap()[1].abs() < 1e-6);
    }
}
