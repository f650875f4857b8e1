//! Log-barrier interior-point method for the exponential primal.
//!
//! Epigraph form over the active points `J`:
//!   minimize  sum p1_i e^{s_i} + sum p0_k e^{t_k}
//!   s.t.      s_i + f_j >= 0,  t_k - f_j >= 0   for j in N(source) & J.
//! The `s`/`t` Hessian blocks are diagonal, so each Newton system is reduced
//! to a dense Schur complement on `f`. Runs in f64 whatever the field type.

use super::{exp_risk, fill_scores, point_roles, ExpPrimal, PointRole, PrimalConfig};
use crate::dense::SymMatrix;
use crate::error::Result;
use crate::ground::GroundSet;
use crate::measures::{Coupling, TwoClassMeasure};
use crate::scalar::Scalar;

const MAX_CENTERING: usize = 200;
const PRUNE_REL: f64 = 1e-13;

/// One epigraph variable: a source with its active neighbors (indices into `J`).
struct Source {
    point: usize,
    mass: f64,
    nbrs: Vec<usize>,
}

struct Problem {
    nf: usize,
    /// Class-1 sources (`s` variables, constraint `s + f >= 0`).
    ones: Vec<Source>,
    /// Class-0 sources (`t` variables, constraint `t - f >= 0`).
    zeros: Vec<Source>,
}

#[derive(Clone)]
struct Iterate {
    f: Vec<f64>,
    s: Vec<f64>,
    t: Vec<f64>,
}

impl Problem {
    fn num_constraints(&self) -> usize {
        self.ones.iter().chain(&self.zeros).map(|s| s.nbrs.len()).sum()
    }

    fn objective(&self, z: &Iterate) -> f64 {
        let a: f64 = self.ones.iter().zip(&z.s).map(|(src, &s)| src.mass * s.exp()).sum();
        let b: f64 = self.zeros.iter().zip(&z.t).map(|(src, &t)| src.mass * t.exp()).sum();
        a + b
    }

    fn feasible(&self, z: &Iterate) -> bool {
        self.ones.iter().zip(&z.s).all(|(src, &s)| src.nbrs.iter().all(|&j| s + z.f[j] > 0.0))
            && self.zeros.iter().zip(&z.t).all(|(src, &t)| src.nbrs.iter().all(|&j| t - z.f[j] > 0.0))
    }

    /// `tau * objective - sum ln(slack)`, or `+inf` outside the domain.
    fn barrier(&self, z: &Iterate, tau: f64) -> f64 {
        if !self.feasible(z) {
            return f64::INFINITY;
        }
        let mut logs = 0.0;
        for (src, &s) in self.ones.iter().zip(&z.s) {
            logs += src.nbrs.iter().map(|&j| (s + z.f[j]).ln()).sum::<f64>();
        }
        for (src, &t) in self.zeros.iter().zip(&z.t) {
            logs += src.nbrs.iter().map(|&j| (t - z.f[j]).ln()).sum::<f64>();
        }
        tau * self.objective(z) - logs
    }

    /// Newton direction and squared decrement at `z`.
    fn newton(&self, z: &Iterate, tau: f64) -> Option<(Iterate, f64)> {
        let nf = self.nf;
        let mut gf = vec![0.0; nf];
        let mut hff = SymMatrix::zeros(nf);
        // Per epigraph variable: (gradient, diagonal Hessian, [(j, coupling)]).
        let mut blocks: Vec<(f64, f64, Vec<(usize, f64)>)> = Vec::with_capacity(self.ones.len() + self.zeros.len());
        for (sign, sources, vars) in [(1.0, &self.ones, &z.s), (-1.0, &self.zeros, &z.t)] {
            for (src, &v) in sources.iter().zip(vars.iter()) {
                let w = tau * src.mass * v.exp();
                let (mut g, mut d) = (w, w);
                let mut cross = Vec::with_capacity(src.nbrs.len());
                for &j in &src.nbrs {
                    let c = v + sign * z.f[j];
                    let (inv, inv2) = (1.0 / c, 1.0 / (c * c));
                    g -= inv;
                    d += inv2;
                    gf[j] -= sign * inv;
                    hff.add(j, j, inv2);
                    cross.push((j, sign * inv2));
                }
                blocks.push((g, d, cross));
            }
        }
        // Schur complement: (H_ff - B^T D^-1 B) df = -g_f + B^T D^-1 g_v.
        let mut rhs: Vec<f64> = gf.iter().map(|g| -g).collect();
        for (g, d, cross) in &blocks {
            for &(a, ba) in cross {
                rhs[a] += ba * g / d;
                for &(b, bb) in cross {
                    hff.add(a, b, -ba * bb / d);
                }
            }
        }
        let df = hff.solve(&rhs)?;
        let dv: Vec<f64> = blocks
            .iter()
            .map(|(g, d, cross)| (-g - cross.iter().map(|&(j, b)| b * df[j]).sum::<f64>()) / d)
            .collect();
        let (ds, dt) = dv.split_at(self.ones.len());
        let mut dec = gf.iter().zip(&df).map(|(g, d)| -g * d).sum::<f64>();
        dec -= blocks.iter().zip(&dv).map(|((g, _, _), d)| g * d).sum::<f64>();
        Some((Iterate { f: df, s: ds.to_vec(), t: dt.to_vec() }, dec.max(0.0)))
    }
}

fn step(z: &Iterate, d: &Iterate, a: f64) -> Iterate {
    let mv = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p + a * q).collect();
    Iterate { f: mv(&z.f, &d.f), s: mv(&z.s, &d.s), t: mv(&z.t, &d.t) }
}

fn build<T: Scalar>(g: &GroundSet<T>, measure: &TwoClassMeasure<T>, roles: &[PointRole]) -> (Problem, Vec<usize>) {
    let mut index = vec![usize::MAX; g.len()];
    let mut active = Vec::new();
    for (x, r) in roles.iter().enumerate() {
        if *r == PointRole::Active {
            index[x] = active.len();
            active.push(x);
        }
    }
    let total = measure.total().as_f64();
    let sources = |mass: &[T]| -> Vec<Source> {
        mass.iter()
            .enumerate()
            .filter(|(_, &w)| w > T::zero())
            .map(|(i, &w)| Source {
                point: i,
                mass: w.as_f64() / total,
                nbrs: g.neighbors(i).iter().filter(|&&j| index[j] != usize::MAX).map(|&j| index[j]).collect(),
            })
            .collect()
    };
    (Problem { nf: active.len(), ones: sources(&measure.mass1), zeros: sources(&measure.mass0) }, active)
}

/// Attack plans from the barrier multipliers `1 / (tau * slack)`.
fn couplings<T: Scalar>(
    p: &Problem,
    z: &Iterate,
    active: &[usize],
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
) -> [Coupling<T>; 2] {
    let plan = |sources: &[Source], vars: &[f64], sign: f64, mass: &[T]| {
        let mut entries = Vec::new();
        let mut covered = vec![false; mass.len()];
        for (src, &v) in sources.iter().zip(vars) {
            if src.nbrs.is_empty() {
                continue;
            }
            covered[src.point] = true;
            let lam: Vec<f64> = src.nbrs.iter().map(|&j| 1.0 / (v + sign * z.f[j])).collect();
            let top = lam.iter().cloned().fold(0.0, f64::max);
            let kept: Vec<(usize, f64)> =
                src.nbrs.iter().zip(&lam).filter(|(_, &l)| l > PRUNE_REL * top).map(|(&j, &l)| (j, l)).collect();
            let sum: f64 = kept.iter().map(|e| e.1).sum();
            let w = mass[src.point];
            for (j, l) in kept {
                entries.push((src.point, active[j], w * T::lit(l / sum)));
            }
        }
        // Sources with no active neighbour: every target already has zero loss.
        for (i, &w) in mass.iter().enumerate() {
            if w > T::zero() && !covered[i] {
                entries.push((i, g.neighbors(i)[0], w));
            }
        }
        Coupling::from_entries(entries)
    };
    [plan(&p.zeros, &z.t, -1.0, &measure.mass0), plan(&p.ones, &z.s, 1.0, &measure.mass1)]
}

pub(super) fn solve<T: Scalar>(
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
    config: &PrimalConfig,
) -> Result<ExpPrimal<T>> {
    let roles = point_roles(g, measure);
    let (problem, active) = build(g, measure, &roles);
    let scores = |z: &Iterate| {
        let mut pos = vec![0; g.len()];
        for (k, &x) in active.iter().enumerate() {
            pos[x] = k;
        }
        fill_scores(&roles, |x| T::lit(z.f[pos[x]]))
    };

    let mut z = Iterate { f: vec![0.0; problem.nf], s: vec![1.0; problem.ones.len()], t: vec![1.0; problem.zeros.len()] };
    let m = problem.num_constraints() as f64;
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = true;
    if m > 0.0 {
        let target = config.tol.max(1e-14);
        let mut tau = m / problem.objective(&z);
        converged = false;
        'outer: loop {
            let mut centered = false;
            for _ in 0..MAX_CENTERING {
                if iterations >= config.max_iters {
                    break 'outer;
                }
                let Some((d, dec)) = problem.newton(&z, tau) else { break };
                let phi0 = problem.barrier(&z, tau);
                // Below this the barrier value cannot resolve further progress.
                if dec * 0.5 <= 1e-10_f64.max(1e-15 * phi0.abs()) {
                    centered = true;
                    break;
                }
                let mut a = 1.0;
                let mut next = step(&z, &d, a);
                while problem.barrier(&next, tau) > phi0 - 0.25 * a * dec {
                    a *= 0.5;
                    if a < 1e-16 {
                        break;
                    }
                    next = step(&z, &d, a);
                }
                iterations += 1;
                if a < 1e-16 {
                    // No progress possible in working precision.
                    centered = true;
                    break;
                }
                z = next;
                history.push(exp_risk(&scores(&z), g, measure));
            }
            if !centered {
                break;
            }
            if m / tau <= target * problem.objective(&z).max(1e-300) || m / tau <= 1e-15 {
                converged = true;
                break;
            }
            tau *= 10.0;
        }
    }
    let f = scores(&z);
    let risk = exp_risk(&f, g, measure);
    history.push(risk);
    let couplings = Some(couplings(&problem, &z, &active, g, measure));
    Ok(ExpPrimal { f, risk, iterations, converged, history, couplings })
}
