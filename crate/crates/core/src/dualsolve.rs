//! The dual problem: maximize `sum_x G(m0(x), m1(x))` over per-class attack
//! couplings supported on the epsilon-ball edge set, where `m_c` is the
//! pushforward of class `c` and `G(a, b) = (a + b) C*(b / (a + b))`.
//!
//! The feasible set is a product of per-source simplices, so Frank–Wolfe's
//! linear subproblem is "every source sends everything to its best target".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::losses::{Loss, SurrogateLoss};
use crate::measures::{check_masses, greedy_attack, pushforward, Coupling, TwoClassMeasure};
use crate::onedim::golden_max;
use crate::primalsolve::{self, construct_f, eta_hat, ExpPrimal, HPair, PrimalConfig};
use crate::scalar::{ordered_sum, Scalar};

/// Relative size of the shift applied before taking supergradients of `G`.
pub const GRAD_SHIFT: f64 = 1e-12;
/// Stagnation window (iterations) of the Frank–Wolfe loops.
const WINDOW: usize = 200;
/// Work bound of [`brute_dual`].
pub const BRUTE_MAX_COMBINATIONS: f64 = 2e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DualMethod {
    Fw,
    FwAway,
    AttackExtract,
    #[default]
    Best,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DualConfig {
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub method: DualMethod,
}

impl Default for DualConfig {
    fn default() -> Self {
        Self { tol: 1e-6, max_iters: 20_000, seed: 0, method: DualMethod::Best }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution<T> {
    pub coupling0: Coupling<T>,
    pub coupling1: Coupling<T>,
    pub m0: Vec<T>,
    pub m1: Vec<T>,
    pub objective: T,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Scalar> DualSolution<T> {
    /// Builds a solution from couplings, recomputing masses and objective.
    pub fn from_couplings<L: SurrogateLoss<T> + ?Sized>(
        loss: &L,
        n: usize,
        coupling0: Coupling<T>,
        coupling1: Coupling<T>,
    ) -> Result<Self> {
        let m0 = pushforward(&coupling0, n);
        let m1 = pushforward(&coupling1, n);
        let objective = dual_objective(loss, &m0, &m1)?;
        Ok(Self { coupling0, coupling1, m0, m1, objective, iterations: 0, converged: true })
    }

    /// Feasibility for the instance: supports in the ball edge set and
    /// source marginals equal to the class masses.
    pub fn check_feasible(&self, g: &GroundSet<T>, measure: &TwoClassMeasure<T>) -> Result<()> {
        let tol = crate::measures::scaled_tol::<T>(1e-9) * T::one().max(measure.total());
        for (c, p) in [(&self.coupling0, &measure.mass0), (&self.coupling1, &measure.mass1)] {
            c.check_support(g)?;
            c.check_marginal(p, tol)?;
        }
        Ok(())
    }
}

/// `G(a, b) = (a + b) C*(b / (a + b))`, `G(0, 0) = 0`.
pub fn perspective<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, a: T, b: T) -> T {
    let s = a + b;
    if s <= T::zero() {
        return T::zero();
    }
    if loss.name() == "exp" {
        return T::lit(2.0) * (a * b).sqrt();
    }
    s * loss.cstar((b / s).min(T::one()))
}

pub fn dual_objective<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, m0: &[T], m1: &[T]) -> Result<T> {
    if m0.len() != m1.len() {
        return Err(Error::LengthMismatch { expected: m0.len(), found: m1.len() });
    }
    check_masses(m0)?;
    check_masses(m1)?;
    Ok(ordered_sum(m0.iter().zip(m1).map(|(&a, &b)| perspective(loss, a, b))))
}

/// Supergradient `(dG/da, dG/db)` at a shifted argument.
fn gradient<L: SurrogateLoss<f64> + ?Sized>(loss: &L, a: f64, b: f64, shift: f64) -> (f64, f64) {
    let (a, b) = (a + shift, b + shift);
    if loss.name() == "exp" {
        return ((b / a).sqrt(), (a / b).sqrt());
    }
    let eta = b / (a + b);
    let (c, d) = (loss.cstar(eta), loss.cstar_supergrad(eta));
    (c - eta * d, c + (1.0 - eta) * d)
}

/// Couplings stored as per-edge weights aligned with the ground set's
/// neighbour lists.
#[derive(Clone)]
struct Plan {
    w: [Vec<f64>; 2],
    m: [Vec<f64>; 2],
}

struct Dual<'a, T, L: ?Sized> {
    g: &'a GroundSet<T>,
    loss: &'a L,
    p: [Vec<f64>; 2],
    shift: f64,
    total: f64,
}

impl<'a, T: Scalar, L: SurrogateLoss<f64> + ?Sized> Dual<'a, T, L> {
    fn new(g: &'a GroundSet<T>, loss: &'a L, measure: &TwoClassMeasure<T>) -> Self {
        let conv = |m: &[T]| m.iter().map(|v| v.as_f64()).collect::<Vec<_>>();
        let total = measure.total().as_f64();
        Self { g, loss, p: [conv(&measure.mass0), conv(&measure.mass1)], shift: GRAD_SHIFT * total, total }
    }

    fn n(&self) -> usize {
        self.g.len()
    }

    fn edges(&self, i: usize) -> std::ops::Range<usize> {
        let o = self.g.edge_offset(i);
        o..o + self.g.neighbors(i).len()
    }

    fn plan_from(&self, w: [Vec<f64>; 2]) -> Plan {
        let mut m = [vec![0.0; self.n()], vec![0.0; self.n()]];
        for c in 0..2 {
            for i in 0..self.n() {
                for (e, &j) in self.edges(i).zip(self.g.neighbors(i)) {
                    m[c][j] += w[c][e];
                }
            }
        }
        Plan { w, m }
    }

    fn plan_from_couplings(&self, c0: &Coupling<T>, c1: &Coupling<T>) -> Plan {
        let mut w = [vec![0.0; self.g.num_edges()], vec![0.0; self.g.num_edges()]];
        for (c, coupling) in [c0, c1].into_iter().enumerate() {
            for &(i, j, v) in coupling.entries() {
                let k = self.g.neighbors(i).binary_search(&j).expect("coupling supported on ball edges");
                w[c][self.g.edge_offset(i) + k] += v.as_f64();
            }
        }
        self.plan_from(w)
    }

    /// Everyone stays put.
    fn identity(&self) -> Plan {
        let mut w = [vec![0.0; self.g.num_edges()], vec![0.0; self.g.num_edges()]];
        for c in 0..2 {
            for i in 0..self.n() {
                let k = self.g.neighbors(i).binary_search(&i).expect("reflexive ball");
                w[c][self.g.edge_offset(i) + k] = self.p[c][i];
            }
        }
        self.plan_from(w)
    }

    fn value(&self, plan: &Plan) -> f64 {
        plan.m[0].iter().zip(&plan.m[1]).map(|(&a, &b)| perspective(self.loss, a, b)).sum()
    }

    fn grads(&self, plan: &Plan) -> [Vec<f64>; 2] {
        let (ga, gb): (Vec<f64>, Vec<f64>) =
            plan.m[0].iter().zip(&plan.m[1]).map(|(&a, &b)| gradient(self.loss, a, b, self.shift)).unzip();
        [ga, gb]
    }

    /// Lowest-index best target of source `i` for class gradient `grad`.
    fn best_target(&self, i: usize, grad: &[f64]) -> usize {
        let mut best = self.g.neighbors(i)[0];
        for &j in self.g.neighbors(i) {
            if grad[j] > grad[best] {
                best = j;
            }
        }
        best
    }

    /// Frank–Wolfe duality gap of a plan.
    fn fw_gap(&self, plan: &Plan, grad: &[Vec<f64>; 2]) -> f64 {
        let mut gap = 0.0;
        for c in 0..2 {
            for i in 0..self.n() {
                if self.p[c][i] > 0.0 {
                    let top = grad[c][self.best_target(i, &grad[c])];
                    let cur: f64 =
                        self.edges(i).zip(self.g.neighbors(i)).map(|(e, &j)| plan.w[c][e] * grad[c][j]).sum();
                    gap += self.p[c][i] * top - cur;
                }
            }
        }
        gap
    }

    fn frank_wolfe(&self, mut plan: Plan, config: &DualConfig) -> (Plan, usize, bool) {
        let stop = config.tol * self.total.max(1.0);
        let mut recent = vec![self.value(&plan)];
        for k in 0..config.max_iters {
            let grad = self.grads(&plan);
            if self.fw_gap(&plan, &grad) <= stop {
                return (plan, k, true);
            }
            let gamma = 2.0 / (k as f64 + 2.0);
            let mut w = plan.w.clone();
            for c in 0..2 {
                w[c].iter_mut().for_each(|v| *v *= 1.0 - gamma);
                for i in 0..self.n() {
                    if self.p[c][i] > 0.0 {
                        let j = self.best_target(i, &grad[c]);
                        let pos = self.g.neighbors(i).binary_search(&j).expect("neighbor");
                        w[c][self.g.edge_offset(i) + pos] += gamma * self.p[c][i];
                    }
                }
            }
            plan = self.plan_from(w);
            recent.push(self.value(&plan));
            if recent.len() > WINDOW {
                recent.remove(0);
                let gain = recent[WINDOW - 1] - recent[0];
                if gain.abs() <= stop * 1e-2 {
                    return (plan, k + 1, true);
                }
            }
        }
        (plan, config.max_iters, false)
    }

    /// Pairwise Frank–Wolfe: move mass of one source from its worst used
    /// target to its best target, with an exact line search.
    fn pairwise(&self, mut plan: Plan, config: &DualConfig) -> (Plan, usize, bool) {
        let stop = config.tol * self.total.max(1.0);
        let mut stalled = 0;
        for k in 0..config.max_iters {
            let grad = self.grads(&plan);
            if self.fw_gap(&plan, &grad) <= stop {
                return (plan, k, true);
            }
            // (gap, class, source, away edge, fw edge)
            let mut pick: Option<(f64, usize, usize, usize, usize)> = None;
            for c in 0..2 {
                for i in 0..self.n() {
                    if self.p[c][i] <= 0.0 {
                        continue;
                    }
                    let (mut fw, mut away) = (None::<(usize, usize)>, None::<(usize, usize)>);
                    for (e, &j) in self.edges(i).zip(self.g.neighbors(i)) {
                        if fw.is_none_or(|(_, b)| grad[c][j] > grad[c][b]) {
                            fw = Some((e, j));
                        }
                        if plan.w[c][e] > 0.0 && away.is_none_or(|(_, b)| grad[c][j] < grad[c][b]) {
                            away = Some((e, j));
                        }
                    }
                    let ((fe, fj), Some((ae, aj))) = (fw.expect("nonempty ball"), away) else { continue };
                    let gap = grad[c][fj] - grad[c][aj];
                    if fe != ae && pick.is_none_or(|p| gap > p.0) {
                        pick = Some((gap, c, i, ae, fe));
                    }
                }
            }
            let Some((_, c, _, ae, fe)) = pick else { return (plan, k, true) };
            let (aj, fj) = (self.target_of(ae), self.target_of(fe));
            let cap = plan.w[c][ae];
            let other = 1 - c;
            let local = |theta: f64| {
                let mut ma = plan.m[c][aj] - theta;
                let mut mf = plan.m[c][fj] + theta;
                ma = ma.max(0.0);
                mf = mf.max(0.0);
                let (a_aj, b_aj) = if c == 0 { (ma, plan.m[other][aj]) } else { (plan.m[other][aj], ma) };
                let (a_fj, b_fj) = if c == 0 { (mf, plan.m[other][fj]) } else { (plan.m[other][fj], mf) };
                perspective(self.loss, a_aj, b_aj) + perspective(self.loss, a_fj, b_fj)
            };
            let before = local(0.0);
            let (mut theta, after) = golden_max(local, 0.0, cap, 200);
            if after - before <= 1e-16 * self.total {
                // Flat along the pair (e.g. the other class has no mass at
                // either end yet): follow the supergradient if that costs
                // nothing, so the other class can react next.
                stalled += 1;
                if stalled > WINDOW || local(cap) < before {
                    return (plan, k, true);
                }
                theta = cap;
            } else {
                stalled = 0;
            }
            plan.w[c][ae] -= theta;
            plan.w[c][fe] += theta;
            if plan.w[c][ae] < 1e-15 * self.total {
                plan.w[c][fe] += plan.w[c][ae];
                plan.w[c][ae] = 0.0;
            }
            plan = self.plan_from(std::mem::take(&mut plan.w));
        }
        (plan, config.max_iters, false)
    }

    fn target_of(&self, edge: usize) -> usize {
        // Edge offsets are nondecreasing; find the owning source.
        let i = (0..self.n()).rev().find(|&i| self.g.edge_offset(i) <= edge).expect("edge in range");
        self.g.neighbors(i)[edge - self.g.edge_offset(i)]
    }

    fn export(&self, plan: &Plan, measure: &TwoClassMeasure<T>) -> [Coupling<T>; 2] {
        let mut out: [Coupling<T>; 2] = Default::default();
        for c in 0..2 {
            let mut entries = Vec::new();
            for i in 0..self.n() {
                let mass = measure.class(c)[i];
                if mass <= T::zero() {
                    continue;
                }
                let row: Vec<(usize, f64)> = self
                    .edges(i)
                    .zip(self.g.neighbors(i))
                    .filter(|(e, _)| plan.w[c][*e] > 0.0)
                    .map(|(e, &j)| (j, plan.w[c][e]))
                    .collect();
                let sum: f64 = row.iter().map(|r| r.1).sum();
                // Rescale so the source marginal is exact in T.
                for (j, v) in row {
                    entries.push((i, j, mass * T::lit(v / sum)));
                }
            }
            out[c] = Coupling::from_entries(entries);
        }
        out
    }
}

/// Candidate couplings from the exponential primal: the barrier multipliers
/// and greedy attacks on the loss values of the constructed minimizer.
fn attack_candidates<T: Scalar, L: SurrogateLoss<T> + ?Sized>(
    loss: &L,
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
    primal: &ExpPrimal<T>,
) -> Result<Vec<[Coupling<T>; 2]>> {
    let mut out = Vec::new();
    if let Some(c) = primal.couplings.clone() {
        out.push(c);
    }
    let eta = eta_hat(&primal.f);
    let f = match construct_f(loss, &eta) {
        Ok(f) => f,
        Err(Error::ZeroOneHasNoPhi) => primal.f.clone(),
        Err(e) => return Err(e),
    };
    let hp = if loss.name() == "zero-one" {
        HPair::from_scores(&Loss::Exponential, &f)?
    } else {
        HPair::from_scores(loss, &f)?
    };
    out.push([greedy_attack(g, &hp.h0, &measure.mass0), greedy_attack(g, &hp.h1, &measure.mass1)]);
    Ok(out)
}

/// Maximizes the dual objective.
pub fn solve_dual<T: Scalar, L: SurrogateLoss<T> + SurrogateLoss<f64> + ?Sized>(
    loss: &L,
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
    config: &DualConfig,
) -> Result<DualSolution<T>> {
    solve_dual_with(loss, g, measure, config, None)
}

/// [`solve_dual`] reusing an already computed exponential primal solution
/// for the attack-extraction candidates.
pub fn solve_dual_with<T: Scalar, L: SurrogateLoss<T> + SurrogateLoss<f64> + ?Sized>(
    loss: &L,
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
    config: &DualConfig,
    primal: Option<&ExpPrimal<T>>,
) -> Result<DualSolution<T>> {
    measure.check_ground(g)?;
    let n = g.len();
    let dual = Dual::new(g, loss, measure);
    let finish = |plan: &Plan, iterations: usize, converged: bool| -> Result<DualSolution<T>> {
        let [c0, c1] = dual.export(plan, measure);
        let mut s = DualSolution::from_couplings(loss, n, c0, c1)?;
        s.iterations = iterations;
        s.converged = converged;
        Ok(s)
    };
    if measure.total() <= T::zero() {
        return finish(&dual.identity(), 0, true);
    }
    let better = |a: DualSolution<T>, b: DualSolution<T>| if b.objective > a.objective { b } else { a };
    match config.method {
        DualMethod::Fw => {
            let (p, k, ok) = dual.frank_wolfe(dual.identity(), config);
            finish(&p, k, ok)
        }
        DualMethod::FwAway => {
            let (p, k, ok) = dual.pairwise(dual.identity(), config);
            finish(&p, k, ok)
        }
        DualMethod::AttackExtract => {
            let owned;
            let primal = match primal {
                Some(p) => p,
                None => {
                    owned = primalsolve::solve_exp_primal(
                        g,
                        measure,
                        &PrimalConfig { seed: config.seed, ..PrimalConfig::default() },
                    )?;
                    &owned
                }
            };
            let mut best: Option<DualSolution<T>> = None;
            for [c0, c1] in attack_candidates(loss, g, measure, primal)? {
                let s = DualSolution::from_couplings(loss, n, c0, c1)?;
                best = Some(match best {
                    None => s,
                    Some(b) => better(b, s),
                });
            }
            Ok(best.expect("at least one candidate"))
        }
        DualMethod::Best => {
            let extracted =
                solve_dual_with(loss, g, measure, &DualConfig { method: DualMethod::AttackExtract, ..*config }, primal)?;
            let start = dual.plan_from_couplings(&extracted.coupling0, &extracted.coupling1);
            let (p, k1, ok1) = dual.pairwise(start, config);
            let warm = finish(&p, k1, ok1)?;
            let (p, k2, ok2) = dual.pairwise(dual.identity(), config);
            let cold = finish(&p, k2, ok2)?;
            let mut out = better(better(extracted, warm), cold);
            out.iterations = k1 + k2;
            out.converged = ok1 || ok2;
            Ok(out)
        }
    }
}

/// Exhaustive search over couplings whose per-source splits are multiples
/// of `1 / grid_steps`. Test oracle only.
pub fn brute_dual<T: Scalar, L: SurrogateLoss<T> + ?Sized>(
    loss: &L,
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
    grid_steps: usize,
) -> Result<T> {
    measure.check_ground(g)?;
    let steps = grid_steps.max(1);
    let mut sources: Vec<(usize, usize, T)> = Vec::new();
    for c in 0..2 {
        let mass = measure.class(c);
        let count = mass.iter().filter(|&&w| w > T::zero()).count();
        if count > 4 {
            return Err(Error::InstanceTooLarge(format!("class {c} has {count} source points (max 4)")));
        }
        for (i, &w) in mass.iter().enumerate() {
            if w > T::zero() {
                if g.neighbors(i).len() > 4 {
                    return Err(Error::InstanceTooLarge(format!(
                        "source {i} has {} neighbors (max 4)",
                        g.neighbors(i).len()
                    )));
                }
                sources.push((c, i, w));
            }
        }
    }
    let combos: f64 = sources.iter().map(|&(_, i, _)| compositions(steps, g.neighbors(i).len())).product();
    if combos > BRUTE_MAX_COMBINATIONS {
        return Err(Error::InstanceTooLarge(format!("{combos:.3e} grid couplings")));
    }
    let mut m = [vec![T::zero(); g.len()], vec![T::zero(); g.len()]];
    let mut best = T::neg_infinity();
    brute_rec(loss, g, &sources, 0, steps, &mut m, &mut best);
    Ok(best)
}

fn compositions(steps: usize, parts: usize) -> f64 {
    // C(steps + parts - 1, parts - 1)
    (1..parts).map(|k| (steps + k) as f64 / k as f64).product()
}

fn brute_rec<T: Scalar, L: SurrogateLoss<T> + ?Sized>(
    loss: &L,
    g: &GroundSet<T>,
    sources: &[(usize, usize, T)],
    depth: usize,
    steps: usize,
    m: &mut [Vec<T>; 2],
    best: &mut T,
) {
    if depth == sources.len() {
        let v = ordered_sum(m[0].iter().zip(&m[1]).map(|(&a, &b)| perspective(loss, a, b)));
        if v > *best {
            *best = v;
        }
        return;
    }
    let (c, i, w) = sources[depth];
    let nbrs = g.neighbors(i);
    let unit = w / T::from_usize_lossy(steps);
    let mut split = vec![0usize; nbrs.len()];
    split[0] = steps;
    loop {
        for (k, &j) in nbrs.iter().enumerate() {
            m[c][j] += unit * T::from_usize_lossy(split[k]);
        }
        brute_rec(loss, g, sources, depth + 1, steps, m, best);
        for (k, &j) in nbrs.iter().enumerate() {
            m[c][j] -= unit * T::from_usize_lossy(split[k]);
        }
        if !next_composition(&mut split) {
            break;
        }
    }
}

/// Advances to the next composition of a fixed total (lexicographic on the
/// reversed tail); returns false after the last one.
fn next_composition(split: &mut [usize]) -> bool {
    let n = split.len();
    if n <= 1 {
        return false;
    }
    // Find the first nonzero part before the last position.
    let Some(k) = (0..n - 1).find(|&k| split[k] > 0) else { return false };
    let moved = split[k] - 1;
    split[k] = 0;
    split[k + 1] += 1;
    split[0] += moved;
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::Norm;

    fn line(xs: &[f64], eps: f64) -> GroundSet<f64> {
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        GroundSet::new(&pts, Norm::L2, eps).unwrap()
    }

    fn twopoint() -> (GroundSet<f64>, TwoClassMeasure<f64>) {
        (line(&[0.0, 0.5, 1.0], 0.6), TwoClassMeasure::new(vec![0.5, 0.0, 0.0], vec![0.0, 0.0, 0.5]).unwrap())
    }

    #[test]
    fn objective_examples() {
        assert_eq!(dual_objective(&Loss::Exponential, &[0.5], &[0.5]).unwrap(), 1.0);
        for loss in [Loss::Exponential, Loss::Logistic, Loss::Hinge, Loss::ZeroOne] {
            assert_eq!(dual_objective(&loss, &[0.3, 0.0], &[0.0, 0.7]).unwrap(), 0.0);
        }
        assert!((dual_objective(&Loss::ZeroOne, &[0.3_f64], &[0.5]).unwrap() - 0.3).abs() < 1e-15);
        assert!(matches!(dual_objective(&Loss::Exponential, &[-0.1], &[0.5]), Err(Error::NegativeMass { .. })));
    }

    #[test]
    fn compositions_are_enumerated_once() {
        for (steps, parts) in [(5, 1), (5, 2), (4, 3), (6, 4)] {
            let mut split = vec![0; parts];
            split[0] = steps;
            let mut seen = std::collections::HashSet::new();
            loop {
                assert_eq!(split.iter().sum::<usize>(), steps);
                assert!(seen.insert(split.clone()));
                if !next_composition(&mut split) {
                    break;
                }
            }
            assert_eq!(seen.len() as f64, compositions(steps, parts).round());
        }
    }

    #[test]
    fn twopoint_all_methods() {
        let (g, m) = twopoint();
        for method in [DualMethod::Fw, DualMethod::FwAway, DualMethod::AttackExtract, DualMethod::Best] {
            let s = solve_dual(&Loss::Exponential, &g, &m, &DualConfig { method, ..Default::default() }).unwrap();
            s.check_feasible(&g, &m).unwrap();
            let tol = if method == DualMethod::Fw { 1e-2 } else { 1e-6 };
            assert!((s.objective - 1.0).abs() < tol, "{method:?}: {}", s.objective);
        }
        let z = solve_dual(&Loss::ZeroOne, &g, &m, &DualConfig::default()).unwrap();
        assert!((z.objective - 0.5).abs() < 1e-9);
    }

    #[test]
    fn zero_epsilon_is_identity() {
        let g = line(&[0.0, 1.0, 2.0], 0.0);
        let m = TwoClassMeasure::new(vec![0.3, 0.1, 0.0], vec![0.1, 0.4, 0.2]).unwrap();
        let s = solve_dual(&Loss::Exponential, &g, &m, &DualConfig::default()).unwrap();
        assert_eq!(s.coupling0, Coupling::identity(&m.mass0));
        assert_eq!(s.coupling1, Coupling::identity(&m.mass1));
        assert_eq!(s.objective, dual_objective(&Loss::Exponential, &m.mass0, &m.mass1).unwrap());
        assert_eq!(brute_dual(&Loss::Exponential, &g, &m, 10).unwrap(), s.objective);
    }

    #[test]
    fn brute_examples() {
        let (g, m) = twopoint();
        assert!((brute_dual(&Loss::Exponential, &g, &m, 100).unwrap() - 1.0).abs() < 1e-3);
        let single = TwoClassMeasure::new(vec![0.5, 0.2, 0.3], vec![0.0; 3]).unwrap();
        assert_eq!(brute_dual(&Loss::Exponential, &g, &single, 20).unwrap(), 0.0);
        let big = line(&[0.0, 0.1, 0.2, 0.3, 0.4], 1.0);
        let bm = TwoClassMeasure::new(vec![0.2; 5], vec![0.2; 5]).unwrap();
        assert!(matches!(brute_dual(&Loss::Exponential, &big, &bm, 10), Err(Error::InstanceTooLarge(_))));
    }
}
