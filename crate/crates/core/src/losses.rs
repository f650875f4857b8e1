//! Margin losses and their pointwise risk quantities.
//!
//! For a loss `phi` the conditional risk is
//! `C(eta, alpha) = eta * phi(alpha) + (1 - eta) * phi(-alpha)`,
//! `C*(eta) = inf_alpha C(eta, alpha)` and `alpha_opt(eta)` is the smallest
//! minimizer (possibly `+-inf`). [`SurrogateLoss`] supplies numeric defaults
//! for everything except `phi`; [`Loss`] overrides them with closed forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::Field;
use crate::onedim::{bisect_last_true, golden_max, golden_min};
use crate::scalar::{mul0, Scalar};

/// Half-width of the search bracket used by the numeric minimizers.
pub const ALPHA_BRACKET: f64 = 50.0;
const SNAP_SLOPE: f64 = 1e-12;
const GOLDEN_ITERS: usize = 400;

pub trait SurrogateLoss<T: Scalar>: Sync {
    fn name(&self) -> &'static str;

    fn phi(&self, alpha: T) -> Result<T>;

    fn cstar(&self, eta: T) -> T {
        cstar_numeric(self, eta)
    }

    fn alpha_opt(&self, eta: T) -> Result<T> {
        alpha_numeric(self, eta)
    }

    /// A supergradient of `C*` at `eta`.
    fn cstar_supergrad(&self, eta: T) -> T {
        let h = T::lit(1e-6);
        let lo = (eta - h).max(T::zero());
        let hi = (eta + h).min(T::one());
        (self.cstar(hi) - self.cstar(lo)) / (hi - lo)
    }

    /// `lim_{eta -> 1} C*(eta) / (1 - eta)`, i.e. minus the left slope of
    /// `C*` at one; `None` when it is infinite.
    fn cstar_slope_at_one(&self) -> Option<T> {
        let d = T::lit(1e-7);
        let v = self.cstar(T::one() - d) / d;
        (v < T::lit(1e6)).then_some(v)
    }
}

/// The built-in margin losses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Loss {
    #[serde(rename = "exp")]
    Exponential,
    Logistic,
    Hinge,
    /// Only `C*` and thresholding are available; it has no margin function.
    ZeroOne,
}

impl Loss {
    pub const ALL: [Loss; 4] = [Loss::Exponential, Loss::Logistic, Loss::Hinge, Loss::ZeroOne];

    pub fn key(self) -> &'static str {
        match self {
            Loss::Exponential => "exp",
            Loss::Logistic => "logistic",
            Loss::Hinge => "hinge",
            Loss::ZeroOne => "zero-one",
        }
    }

    pub fn has_phi(self) -> bool {
        self != Loss::ZeroOne
    }
}

impl std::fmt::Display for Loss {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.key())
    }
}

impl std::str::FromStr for Loss {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" | "exponential" => Ok(Loss::Exponential),
            "logistic" => Ok(Loss::Logistic),
            "hinge" => Ok(Loss::Hinge),
            "zero-one" | "zero_one" | "zero_one_dual" => Ok(Loss::ZeroOne),
            other => Err(Error::Parse(format!("unknown loss '{other}'"))),
        }
    }
}

fn binary_entropy<T: Scalar>(eta: T) -> T {
    let xlogx = |x: T| if x <= T::zero() { T::zero() } else { x * x.ln() };
    -(xlogx(eta) + xlogx(T::one() - eta))
}

fn log_odds<T: Scalar>(eta: T) -> T {
    if eta <= T::zero() {
        T::neg_infinity()
    } else if eta >= T::one() {
        T::infinity()
    } else {
        (eta / (T::one() - eta)).ln()
    }
}

impl<T: Scalar> SurrogateLoss<T> for Loss {
    fn name(&self) -> &'static str {
        self.key()
    }

    fn phi(&self, alpha: T) -> Result<T> {
        Ok(match self {
            Loss::Exponential => (-alpha).exp(),
            Loss::Logistic => {
                if alpha >= T::zero() {
                    (-alpha).exp().ln_1p()
                } else {
                    -alpha + alpha.exp().ln_1p()
                }
            }
            Loss::Hinge => (T::one() - alpha).max(T::zero()),
            Loss::ZeroOne => return Err(Error::ZeroOneHasNoPhi),
        })
    }

    fn cstar(&self, eta: T) -> T {
        let one = T::one();
        match self {
            Loss::Exponential => T::lit(2.0) * (eta * (one - eta)).max(T::zero()).sqrt(),
            Loss::Logistic => binary_entropy(eta),
            Loss::Hinge => T::lit(2.0) * eta.min(one - eta),
            Loss::ZeroOne => eta.min(one - eta),
        }
    }

    fn alpha_opt(&self, eta: T) -> Result<T> {
        let half = T::lit(0.5);
        match self {
            Loss::Exponential => Ok(half * log_odds(eta)),
            Loss::Logistic => Ok(log_odds(eta)),
            Loss::Hinge => Ok(if eta <= T::zero() {
                T::neg_infinity()
            } else if eta <= half {
                -T::one()
            } else {
                T::one()
            }),
            Loss::ZeroOne => Err(Error::ZeroOneHasNoPhi),
        }
    }

    fn cstar_supergrad(&self, eta: T) -> T {
        let one = T::one();
        let half = T::lit(0.5);
        let sign = if eta < half {
            one
        } else if eta > half {
            -one
        } else {
            T::zero()
        };
        match self {
            Loss::Exponential => {
                if eta <= T::zero() {
                    T::infinity()
                } else if eta >= one {
                    T::neg_infinity()
                } else {
                    (one - eta - eta) / (eta * (one - eta)).sqrt()
                }
            }
            Loss::Logistic => -log_odds(eta),
            Loss::Hinge => T::lit(2.0) * sign,
            Loss::ZeroOne => sign,
        }
    }

    fn cstar_slope_at_one(&self) -> Option<T> {
        match self {
            Loss::Exponential | Loss::Logistic => None,
            Loss::Hinge => Some(T::lit(2.0)),
            Loss::ZeroOne => Some(T::one()),
        }
    }
}

fn check_eta<T: Scalar>(eta: T) -> Result<()> {
    if eta >= T::zero() && eta <= T::one() {
        Ok(())
    } else {
        Err(Error::EtaOutOfRange(eta.as_f64()))
    }
}

pub fn phi<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, alpha: T) -> Result<T> {
    loss.phi(alpha)
}

/// `eta * phi(alpha) + (1 - eta) * phi(-alpha)` with `0 * inf = 0`.
pub fn conditional_risk<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, eta: T, alpha: T) -> Result<T> {
    check_eta(eta)?;
    Ok(mul0(eta, loss.phi(alpha)?) + mul0(T::one() - eta, loss.phi(-alpha)?))
}

pub fn cstar<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, eta: T) -> Result<T> {
    check_eta(eta)?;
    Ok(loss.cstar(eta))
}

pub fn alpha_opt<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, eta: T) -> Result<T> {
    check_eta(eta)?;
    loss.alpha_opt(eta)
}

/// `C*(eta)` by golden-section minimization of `C(eta, .)` on the bracket,
/// also comparing the limits at `+-inf`.
pub fn cstar_numeric<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, eta: T) -> T {
    let b = T::lit(ALPHA_BRACKET);
    let risk = |a: T| conditional_risk(loss, eta, a).unwrap_or(T::infinity());
    let (_, v) = golden_min(risk, -b, b, GOLDEN_ITERS);
    v.min(risk(T::infinity())).min(risk(T::neg_infinity()))
}

/// Smallest minimizer of `C(eta, .)`: golden section on `[-B, B]`, then a
/// leftward bisection over the flat part of the minimum, then a snap to
/// `+-inf` when the minimum sits on the bracket edge with a vanishing slope.
pub fn alpha_numeric<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, eta: T) -> Result<T> {
    loss.phi(T::zero())?;
    check_eta(eta)?;
    let b = T::lit(ALPHA_BRACKET);
    let risk = |a: T| conditional_risk(loss, eta, a).unwrap_or(T::infinity());
    let (x, v) = golden_min(risk, -b, b, GOLDEN_ITERS);
    let slack = T::lit(1e-14) * (T::one() + v.abs());
    let smallest = if risk(-b) <= v + slack {
        -b
    } else {
        // C(eta, .) is unimodal: everything left of the flat minimum is higher.
        bisect_last_true(|a| risk(a) > v + slack, -b, x, 200)
    };
    let h = T::lit(1e-6);
    let edge_slope = |a: T| ((risk(a + h) - risk(a - h)) / (h + h)).abs();
    if smallest <= -b + h && edge_slope(-b) < T::lit(SNAP_SLOPE) {
        return Ok(T::neg_infinity());
    }
    // Still strictly decreasing at the right edge: the infimum is at +inf.
    if x >= b - T::one() && risk(b) < risk(b - T::one()) && edge_slope(b) < T::lit(SNAP_SLOPE) {
        return Ok(T::infinity());
    }
    Ok(smallest)
}

/// Supergradient of the exponential `C*`: `sqrt((1-eta)/eta) - sqrt(eta/(1-eta))`.
pub fn supergrad_cstar_exp<T: Scalar>(eta: T) -> Result<T> {
    check_eta(eta)?;
    if eta <= T::zero() || eta >= T::one() {
        return Err(Error::EtaAtBoundary(eta.as_f64()));
    }
    let one = T::one();
    Ok(((one - eta) / eta).sqrt() - (eta / (one - eta)).sqrt())
}

/// `(C*(eta) - eta * t) / (1 - eta)`.
fn transform_objective<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, t: T, eta: T) -> T {
    (loss.cstar(eta) - eta * t) / (T::one() - eta)
}

/// Upper end `k < 1` of the interval on which `C*(eta) > eta * t`; the sup
/// defining the transform may be restricted to `[0, k]` when `t > 0`.
pub fn transform_bracket<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, t: T) -> T {
    bisect_last_true(|e| loss.cstar(e) - e * t > T::zero(), T::zero(), T::one(), 200)
}

/// Pointwise transform `sup_{eta in [0,1)} (C*(eta) - eta*t) / (1 - eta)`,
/// returning the value and a maximizing `eta`.
pub fn transform_point<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, t: T) -> (T, T) {
    if t == T::infinity() {
        return (T::zero(), T::zero());
    }
    if t == T::zero() {
        return match loss.cstar_slope_at_one() {
            Some(s) => (s, T::one()),
            None => (T::infinity(), T::one()),
        };
    }
    let k = transform_bracket(loss, t);
    if k <= T::zero() {
        return (T::zero(), T::zero());
    }
    let (eta, v) = golden_max(|e| transform_objective(loss, t, e), T::zero(), k, GOLDEN_ITERS);
    if v <= T::zero() {
        (T::zero(), T::zero())
    } else {
        (v, eta)
    }
}

/// The smallest `h0` with `(h0, h1)` feasible, computed pointwise.
pub fn transform_h<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, h1: &[T]) -> Result<Field<T>> {
    let mut out = Vec::with_capacity(h1.len());
    for (i, &t) in h1.iter().enumerate() {
        if t.is_nan() || t < T::zero() {
            return Err(Error::NegativeH { point: i, value: t.as_f64() });
        }
        out.push(transform_point(loss, t).0);
    }
    Ok(Field(out))
}

/// Whether `eta * h1 + (1 - eta) * h0 >= C*(eta) - tol` on an `n_eta`-point grid.
pub fn pair_feasible<T: Scalar, L: SurrogateLoss<T> + ?Sized>(loss: &L, h0: T, h1: T, n_eta: usize, tol: T) -> Option<T> {
    let last = T::from_usize_lossy(n_eta.max(2) - 1);
    (0..n_eta.max(2))
        .map(|k| T::from_usize_lossy(k) / last)
        .find(|&eta| mul0(eta, h1) + mul0(T::one() - eta, h0) < loss.cstar(eta) - tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: Loss = Loss::Exponential;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(&E, 0.0_f64).unwrap(), 1.0);
        assert_eq!(phi(&E, f64::INFINITY).unwrap(), 0.0);
        assert_eq!(phi(&Loss::Hinge, 2.0_f64).unwrap(), 0.0);
        assert!(matches!(phi(&Loss::ZeroOne, 0.0_f64), Err(Error::ZeroOneHasNoPhi)));
        assert_eq!(phi(&Loss::Logistic, f64::INFINITY).unwrap(), 0.0);
        assert_eq!(phi(&Loss::Logistic, f64::NEG_INFINITY).unwrap(), f64::INFINITY);
    }

    #[test]
    fn conditional_risk_values() {
        assert_eq!(conditional_risk(&E, 0.5, 0.0).unwrap(), 1.0);
        assert_eq!(conditional_risk(&E, 1.0, f64::INFINITY).unwrap(), 0.0);
        // Direct evaluation of eta*log(1+e^-a) + (1-eta)*log(1+e^a).
        let direct = 0.5 * (1.0 + (0.0_f64).exp()).ln() * 2.0;
        assert!(close(conditional_risk(&Loss::Logistic, 0.5, 0.0).unwrap(), direct, 1e-15));
        assert!(close(direct, std::f64::consts::LN_2, 1e-15));
        assert!(matches!(conditional_risk(&E, 1.5, 0.0), Err(Error::EtaOutOfRange(_))));
    }

    #[test]
    fn cstar_values() {
        assert!(close(cstar(&E, 0.5).unwrap(), 1.0, 1e-15));
        assert!(close(cstar(&E, 0.2).unwrap(), 0.8, 1e-15));
        assert!(close(cstar(&Loss::ZeroOne, 0.3).unwrap(), 0.3, 1e-15));
        assert!(close(cstar(&Loss::Hinge, 0.3).unwrap(), 0.6, 1e-15));
        for loss in Loss::ALL {
            assert_eq!(cstar(&loss, 0.0_f64).unwrap(), 0.0);
            assert_eq!(cstar(&loss, 1.0_f64).unwrap(), 0.0);
        }
        assert!(cstar(&E, -0.1).is_err());
    }

    #[test]
    fn hinge_cstar_against_grid_oracle() {
        // Brute-force grid over alpha, independent of the closed form.
        let grid_min = |eta: f64| {
            (0..=40_000)
                .map(|k| -4.0 + 8.0 * k as f64 / 40_000.0)
                .map(|a| eta * (1.0 - a).max(0.0) + (1.0 - eta) * (1.0 + a).max(0.0))
                .fold(f64::INFINITY, f64::min)
        };
        assert!(close(grid_min(0.3), 0.6, 1e-9));
        assert!(close(cstar(&Loss::Hinge, 0.3).unwrap(), grid_min(0.3), 1e-9));
        // Smallest minimizer at 0.7: scan left to right, first grid point at the min.
        let risk = |a: f64| 0.7 * (1.0 - a).max(0.0) + 0.3 * (1.0 + a).max(0.0);
        let m = grid_min(0.7);
        let first = (0..=40_000)
            .map(|k| -4.0 + 8.0 * k as f64 / 40_000.0)
            .find(|&a| risk(a) <= m + 1e-12)
            .unwrap();
        assert!(close(first, 1.0, 1e-9));
        assert_eq!(alpha_opt(&Loss::Hinge, 0.7).unwrap(), 1.0);
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha_opt(&E, 0.5).unwrap(), 0.0);
        assert_eq!(alpha_opt(&E, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(alpha_opt(&E, 0.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(alpha_opt(&Loss::Hinge, 0.5).unwrap(), -1.0);
        assert_eq!(alpha_opt(&Loss::Logistic, 0.5).unwrap(), 0.0);
        assert!(matches!(alpha_opt(&Loss::ZeroOne, 0.5_f64), Err(Error::ZeroOneHasNoPhi)));
    }

    #[test]
    fn numeric_fallbacks_agree_with_closed_forms() {
        for loss in [Loss::Exponential, Loss::Logistic, Loss::Hinge] {
            for k in 0..=20 {
                let eta = k as f64 / 20.0;
                let num = cstar_numeric(&loss, eta);
                assert!(close(num, loss.cstar(eta), 1e-9), "{loss} {eta}: {num}");
            }
        }
        for k in 1..20 {
            let eta = k as f64 / 20.0;
            let a = alpha_numeric(&E, eta).unwrap();
            assert!(close(a, E.alpha_opt(eta).unwrap(), 1e-6), "{eta}: {a} vs {}", E.alpha_opt(eta).unwrap());
            let h = alpha_numeric(&Loss::Hinge, eta).unwrap();
            assert!(close(h, Loss::Hinge.alpha_opt(eta).unwrap(), 1e-6), "{eta} {h}");
        }
        assert_eq!(alpha_numeric(&E, 1.0_f64).unwrap(), f64::INFINITY);
        assert_eq!(alpha_numeric(&E, 0.0_f64).unwrap(), f64::NEG_INFINITY);
        assert_eq!(alpha_numeric(&Loss::Hinge, 0.0_f64).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn supergradient_values() {
        assert_eq!(supergrad_cstar_exp(0.5).unwrap(), 0.0);
        assert!(close(supergrad_cstar_exp(0.2).unwrap(), 1.5, 1e-15));
        assert!(close(supergrad_cstar_exp(0.8).unwrap(), -1.5, 1e-15));
        assert!(matches!(supergrad_cstar_exp(0.0_f64), Err(Error::EtaAtBoundary(_))));
        for k in 1..100 {
            let eta = k as f64 / 100.0;
            let h = 1e-5;
            let fd = (E.cstar(eta + h) - E.cstar(eta - h)) / (2.0 * h);
            assert!(close(fd, supergrad_cstar_exp(eta).unwrap(), 1e-6 * fd.abs().max(1.0)), "{eta}: {fd} vs {}", supergrad_cstar_exp(eta).unwrap());
            // tangent bound from concavity
            for s in 0..=100 {
                let s = s as f64 / 100.0;
                let g: f64 = E.cstar(s);
                assert!(g <= E.cstar(eta) + (s - eta) * supergrad_cstar_exp(eta).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn transform_examples() {
        let h = transform_h(&E, &[2.0, 1.0, 0.0, f64::INFINITY]).unwrap();
        assert!(close(h[0], 0.5, 1e-10));
        assert!(close(h[1], 1.0, 1e-10));
        assert_eq!(h[2], f64::INFINITY);
        assert_eq!(h[3], 0.0);
        assert!(matches!(transform_h(&E, &[-1.0]), Err(Error::NegativeH { point: 0, .. })));
        // Hinge: sup of 2 min(eta, 1-eta)/(1-eta) - ... at t = 0 is 2.
        let hh = transform_h(&Loss::Hinge, &[0.0, 1.0, 3.0]).unwrap();
        assert_eq!(hh[0], 2.0);
        assert!(close(hh[1], 1.0, 1e-9));
        assert_eq!(hh[2], 0.0);
    }

    #[test]
    fn transform_is_feasible_and_tight() {
        for loss in [Loss::Exponential, Loss::Logistic, Loss::Hinge, Loss::ZeroOne] {
            for k in 0..60 {
                let t = 0.05 * k as f64;
                let (h0, _) = transform_point(&loss, t);
                assert!(pair_feasible(&loss, h0, t, 101, 1e-9).is_none(), "{loss} t={t} h0={h0}");
                if h0.is_finite() && h0 > 1e-6 {
                    // Anything smaller is infeasible somewhere.
                    assert!(pair_feasible(&loss, h0 - 1e-3, t, 2001, 0.0).is_some(), "{loss} t={t}");
                }
            }
        }
    }

    #[test]
    fn f32_losses() {
        let v: f32 = cstar(&E, 0.2_f32).unwrap();
        assert!((v - 0.8).abs() < 1e-6);
        let a: f32 = alpha_opt(&Loss::Logistic, 0.5_f32).unwrap();
        assert_eq!(a, 0.0);
    }
}
