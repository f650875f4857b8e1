//! Subgradient descent on the exponential primal, with optional soft-max
//! continuation. Kept as a cross-check for the barrier method.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{exp_risk, fill_scores, point_roles, ExpPrimal, PointRole, PrimalConfig, F_CLAMP};
use crate::error::Result;
use crate::ground::GroundSet;
use crate::measures::TwoClassMeasure;
use crate::scalar::Scalar;

const TEMPERATURES: [f64; 3] = [1e-1, 1e-2, 1e-3];

struct Term {
    mass: f64,
    /// +1 for class 1 (`exp(-f)`), -1 for class 0 (`exp(f)`).
    sign: f64,
    nbrs: Vec<usize>,
}

/// Value and gradient of `sum mass * exp(smax_j(-sign * f_j))`, where `smax`
/// is the hard max (lowest index at ties) when `temp == 0`.
fn evaluate(terms: &[Term], f: &[f64], temp: f64, grad: &mut [f64]) -> f64 {
    grad.iter_mut().for_each(|g| *g = 0.0);
    let mut value = 0.0;
    for term in terms {
        let vals: Vec<f64> = term.nbrs.iter().map(|&j| -term.sign * f[j]).collect();
        let top = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if temp > 0.0 {
            let w: Vec<f64> = vals.iter().map(|v| ((v - top) / temp).exp()).collect();
            let z: f64 = w.iter().sum();
            let smax = top + temp * z.ln();
            let e = term.mass * smax.exp();
            value += e;
            for (&j, wj) in term.nbrs.iter().zip(&w) {
                grad[j] -= term.sign * e * wj / z;
            }
        } else {
            let k = vals.iter().position(|&v| v == top).expect("nonempty ball");
            let e = term.mass * top.exp();
            value += e;
            grad[term.nbrs[k]] -= term.sign * e;
        }
    }
    value
}

pub(super) fn solve<T: Scalar>(
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
    config: &PrimalConfig,
) -> Result<ExpPrimal<T>> {
    let roles = point_roles(g, measure);
    let active: Vec<usize> = (0..g.len()).filter(|&x| roles[x] == PointRole::Active).collect();
    let mut pos = vec![usize::MAX; g.len()];
    for (k, &x) in active.iter().enumerate() {
        pos[x] = k;
    }
    let total = measure.total().as_f64();
    let mut terms = Vec::new();
    for (sign, mass) in [(1.0, &measure.mass1), (-1.0, &measure.mass0)] {
        for (i, &w) in mass.iter().enumerate() {
            let nbrs: Vec<usize> = g.neighbors(i).iter().filter(|&&j| pos[j] != usize::MAX).map(|&j| pos[j]).collect();
            if w > T::zero() && !nbrs.is_empty() {
                terms.push(Term { mass: w.as_f64() / total, sign, nbrs });
            }
        }
    }

    let n = active.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1e-3..1e-3)).collect();
    let mut grad = vec![0.0; n];
    let mut best_f = f.clone();
    let mut best = evaluate(&terms, &f, 0.0, &mut grad);
    let mut history = vec![best];

    let schedule: Vec<f64> =
        if config.smoothing { TEMPERATURES.iter().cloned().chain([0.0]).collect() } else { vec![0.0] };
    let per_phase = (config.max_iters / schedule.len()).max(1);
    let mut iterations = 0;
    let mut last_improvement = 0.0_f64;
    for &temp in &schedule {
        for k in 1..=per_phase {
            evaluate(&terms, &f, temp, &mut grad);
            let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if norm == 0.0 {
                break;
            }
            let a = config.step_c / (k as f64).sqrt() / norm;
            for (x, gx) in f.iter_mut().zip(&grad) {
                *x = (*x - a * gx).clamp(-F_CLAMP, F_CLAMP);
            }
            iterations += 1;
            let hard = evaluate(&terms, &f, 0.0, &mut grad);
            history.push(hard);
            if hard < best {
                last_improvement = best - hard;
                best = hard;
                best_f.copy_from_slice(&f);
            }
        }
    }
    let out = fill_scores(&roles, |x| T::lit(best_f[pos[x]]));
    let risk = exp_risk(&out, g, measure);
    let history = history.into_iter().map(|v| T::lit(v * total)).collect();
    Ok(ExpPrimal {
        f: out,
        risk,
        iterations,
        converged: last_improvement <= config.tol.max(1e-12) * best.max(1e-300) || n == 0,
        history,
        couplings: None,
    })
}
