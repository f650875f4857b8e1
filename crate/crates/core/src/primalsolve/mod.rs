//! Adversarial surrogate risks and the exponential-loss primal.
//!
//! The adversarial risk of a score field `f` is
//! `sum p1 * S_eps(phi o f) + sum p0 * S_eps(phi o -f)`. For the exponential
//! loss this is convex in `f`; [`solve_exp_primal`] minimizes it, [`eta_hat`]
//! turns the minimizer into a conditional-probability field, and
//! [`construct_f`] maps that field to a minimizer for any other loss.

mod barrier;
mod subgradient;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{sup_ball, Field, GroundSet};
use crate::losses::{pair_feasible, Loss, SurrogateLoss};
use crate::measures::{Coupling, TwoClassMeasure};
use crate::scalar::{mul0, ordered_sum, Scalar};

/// Scores are clamped to this magnitude while iterating.
pub const F_CLAMP: f64 = 50.0;

/// A pair `(h0, h1)` of nonnegative extended-real fields.
#[derive(Debug, Clone, PartialEq)]
pub struct HPair<T> {
    pub h0: Field<T>,
    pub h1: Field<T>,
}

impl<T: Scalar> HPair<T> {
    /// `(phi o -f, phi o f)`.
    pub fn from_scores<L: SurrogateLoss<T> + ?Sized>(loss: &L, f: &[T]) -> Result<Self> {
        let h1 = f.iter().map(|&a| loss.phi(a)).collect::<Result<Vec<_>>>()?;
        let h0 = f.iter().map(|&a| loss.phi(-a)).collect::<Result<Vec<_>>>()?;
        Ok(Self { h0: Field(h0), h1: Field(h1) })
    }

    /// Membership in the feasible set: `eta*h1 + (1-eta)*h0 >= C*(eta) - 1e-9`
    /// on a 101-point grid, or `h0*h1 >= 1` for the exponential loss.
    pub fn check_feasible<L: SurrogateLoss<T> + ?Sized>(&self, loss: &L) -> Result<()> {
        let tol = T::lit(1e-9);
        for (x, (&h0, &h1)) in self.h0.iter().zip(self.h1.iter()).enumerate() {
            if h0 < T::zero() || h1 < T::zero() || h0.is_nan() || h1.is_nan() {
                return Err(Error::InfeasiblePair { point: x, eta: f64::NAN });
            }
            if loss.name() == "exp" {
                let prod = if h0.is_infinite() || h1.is_infinite() { T::infinity() } else { h0 * h1 };
                if prod < T::one() - tol {
                    let eta = h0 * h0 / (T::one() + h0 * h0);
                    return Err(Error::InfeasiblePair { point: x, eta: eta.as_f64() });
                }
            } else if let Some(eta) = pair_feasible(loss, h0, h1, 101, tol) {
                return Err(Error::InfeasiblePair { point: x, eta: eta.as_f64() });
            }
        }
        Ok(())
    }
}

/// Conditional class-1 probability field, defined on every ground point.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaField<T>(pub Field<T>);

impl<T: Scalar> EtaField<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        for &v in &values {
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::EtaOutOfRange(v.as_f64()));
            }
        }
        Ok(Self(Field(values)))
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }
}

fn weighted_sup<T: Scalar>(g: &GroundSet<T>, weights: &[T], h: &[T]) -> T {
    let s = sup_ball(g, h);
    ordered_sum(weights.iter().zip(s.iter()).map(|(&w, &v)| mul0(w, v)))
}

/// `R^eps_phi(f)`.
pub fn risk_adv<T: Scalar, L: SurrogateLoss<T> + ?Sized>(
    loss: &L,
    f: &[T],
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
) -> Result<T> {
    measure.check_ground(g)?;
    let hp = HPair::from_scores(loss, f)?;
    Ok(theta_unchecked(&hp, g, measure))
}

fn theta_unchecked<T: Scalar>(hp: &HPair<T>, g: &GroundSet<T>, measure: &TwoClassMeasure<T>) -> T {
    weighted_sup(g, &measure.mass1, &hp.h1) + weighted_sup(g, &measure.mass0, &hp.h0)
}

/// `Theta(h0, h1) = sum p1 * S_eps(h1) + sum p0 * S_eps(h0)` for a feasible pair.
pub fn theta<T: Scalar, L: SurrogateLoss<T> + ?Sized>(
    loss: &L,
    hp: &HPair<T>,
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
) -> Result<T> {
    measure.check_ground(g)?;
    hp.check_feasible(loss)?;
    Ok(theta_unchecked(hp, g, measure))
}

/// Adversarial zero-one risk of the classifier `1{f > 0}`.
pub fn classify_risk_adv<T: Scalar>(f: &[T], g: &GroundSet<T>, measure: &TwoClassMeasure<T>) -> Result<T> {
    measure.check_ground(g)?;
    let ind = |b: bool| if b { T::one() } else { T::zero() };
    let err1: Vec<T> = f.iter().map(|&v| ind(v <= T::zero())).collect();
    let err0: Vec<T> = f.iter().map(|&v| ind(v > T::zero())).collect();
    Ok(weighted_sup(g, &measure.mass1, &err1) + weighted_sup(g, &measure.mass0, &err0))
}

/// `eta_hat = h0^2 / (1 + h0^2)` with `h0 = exp(f)`, i.e. the logistic
/// function of `2f`.
pub fn eta_hat<T: Scalar>(f: &[T]) -> EtaField<T> {
    let two = T::lit(2.0);
    EtaField(Field(f.iter().map(|&v| T::one() / (T::one() + (-two * v).exp())).collect()))
}

/// Pointwise smallest minimizer `alpha_phi(eta)`.
pub fn construct_f<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, eta: &EtaField<T>) -> Result<Field<T>> {
    eta.values().iter().map(|&e| crate::losses::alpha_opt(loss, e)).collect::<Result<Vec<_>>>().map(Field)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PrimalMethod {
    #[default]
    Barrier,
    Subgradient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrimalConfig {
    pub tol: f64,
    pub max_iters: usize,
    pub step_c: f64,
    pub smoothing: bool,
    pub seed: u64,
    pub method: PrimalMethod,
}

impl Default for PrimalConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iters: 20_000, step_c: 1.0, smoothing: true, seed: 0, method: PrimalMethod::Barrier }
    }
}

/// Output of the exponential primal solve.
#[derive(Debug, Clone)]
pub struct ExpPrimal<T> {
    pub f: Field<T>,
    pub risk: T,
    pub iterations: usize,
    pub converged: bool,
    /// Hard adversarial risk of every logged iterate.
    pub history: Vec<T>,
    /// Attack couplings read off the barrier multipliers (class 0, class 1).
    pub couplings: Option<[Coupling<T>; 2]>,
}

/// Role of each ground point in the exponential primal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PointRole {
    /// Both classes have mass within epsilon: a finite optimal score.
    Active,
    /// No class-0 mass within epsilon: `+inf` is optimal.
    PlusInf,
    /// No class-1 mass within epsilon: `-inf` is optimal.
    MinusInf,
    /// No mass within epsilon: the value does not enter the risk.
    Free,
}

pub(crate) fn point_roles<T: Scalar>(g: &GroundSet<T>, measure: &TwoClassMeasure<T>) -> Vec<PointRole> {
    (0..g.len())
        .map(|x| {
            let near0 = g.neighbors(x).iter().any(|&i| measure.mass0[i] > T::zero());
            let near1 = g.neighbors(x).iter().any(|&i| measure.mass1[i] > T::zero());
            match (near0, near1) {
                (true, true) => PointRole::Active,
                (false, true) => PointRole::PlusInf,
                (true, false) => PointRole::MinusInf,
                (false, false) => PointRole::Free,
            }
        })
        .collect()
}

pub(crate) fn fill_scores<T: Scalar>(roles: &[PointRole], active_values: impl Fn(usize) -> T) -> Field<T> {
    Field(
        roles
            .iter()
            .enumerate()
            .map(|(x, r)| match r {
                PointRole::Active => active_values(x),
                PointRole::PlusInf => T::infinity(),
                PointRole::MinusInf => T::neg_infinity(),
                PointRole::Free => T::zero(),
            })
            .collect(),
    )
}

/// Minimizes the exponential adversarial risk.
pub fn solve_exp_primal<T: Scalar>(
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
    config: &PrimalConfig,
) -> Result<ExpPrimal<T>> {
    measure.check_ground(g)?;
    match config.method {
        PrimalMethod::Barrier => barrier::solve(g, measure, config),
        PrimalMethod::Subgradient => subgradient::solve(g, measure, config),
    }
}

/// Exponential adversarial risk, the objective of [`solve_exp_primal`].
pub fn exp_risk<T: Scalar>(f: &[T], g: &GroundSet<T>, measure: &TwoClassMeasure<T>) -> T {
    let hp = HPair::from_scores(&Loss::Exponential, f).expect("exponential loss has phi");
    theta_unchecked(&hp, g, measure)
}

/// Largest ground set accepted by [`grid_search_primal`].
pub const GRID_MAX_POINTS: usize = 3;

/// Test oracle: minimizes `risk_adv` by exhaustive search over
/// `{-inf, +inf} u {-4, -3.9, ..., 4}` per point, then over a `0.004` grid
/// within `0.2` of the best finite values. Zero-one searches sign patterns
/// with [`classify_risk_adv`].
pub fn grid_search_primal<T: Scalar>(
    loss: Loss,
    g: &GroundSet<T>,
    measure: &TwoClassMeasure<T>,
) -> Result<(Field<T>, T)> {
    measure.check_ground(g)?;
    let n = g.len();
    if n > GRID_MAX_POINTS {
        return Err(Error::InstanceTooLarge(format!("{n} points (grid search handles at most {GRID_MAX_POINTS})")));
    }
    let eval = |f: &[T]| -> Result<T> {
        if loss == Loss::ZeroOne {
            classify_risk_adv(f, g, measure)
        } else {
            risk_adv(&loss, f, g, measure)
        }
    };
    let coarse: Vec<T> = if loss == Loss::ZeroOne {
        vec![-T::one(), T::one()]
    } else {
        let mut v: Vec<T> = (0..=80).map(|k| T::from_usize_lossy(k) / T::lit(10.0) - T::lit(4.0)).collect();
        v.push(T::infinity());
        v.push(T::neg_infinity());
        v
    };
    let search = |axes: &[Vec<T>]| -> Result<(Vec<T>, T)> {
        let mut idx = vec![0usize; n];
        let mut best = (vec![T::zero(); n], T::infinity());
        loop {
            let f: Vec<T> = (0..n).map(|x| axes[x][idx[x]]).collect();
            let r = eval(&f)?;
            if r < best.1 {
                best = (f, r);
            }
            let mut k = 0;
            loop {
                if k == n {
                    return Ok(best);
                }
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    };
    let (f0, r0) = search(&vec![coarse; n])?;
    if loss == Loss::ZeroOne {
        return Ok((Field(f0), r0));
    }
    let fine: Vec<Vec<T>> = f0
        .iter()
        .map(|&c| {
            if c.is_finite() {
                (0..=100).map(|k| c + T::lit(0.004) * (T::from_usize_lossy(k) - T::lit(50.0))).collect()
            } else {
                vec![c]
            }
        })
        .collect();
    let (f1, r1) = search(&fine)?;
    Ok(if r1 < r0 { (Field(f1), r1) } else { (Field(f0), r0) })
}
