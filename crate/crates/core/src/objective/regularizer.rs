//! Per-block non-smooth terms `g_i` and their prox operators.
//!
//! Constraint sets enter only as indicator terms, so a box constraint is a
//! regularizer whose value is `+∞` outside the box and whose prox is the
//! projection.

use std::fmt;
use std::sync::Arc;

/// A convex term with a computable prox.
pub trait ProxTerm: Send + Sync {
    fn value(&self, z: &[f64]) -> f64;

    /// `prox_{t g}(point) = argmin_u g(u) + ‖u − point‖² / (2t)`.
    fn prox(&self, point: &[f64], t: f64) -> Vec<f64>;

    /// True when the effective domain is the whole block space.
    fn is_unconstrained(&self) -> bool;
}

/// Feasibility slack for box membership.
const BOX_TOL: f64 = 1e-12;

#[derive(Clone)]
pub enum Regularizer {
    Zero,
    /// `weight · ‖z‖₁`
    L1 { weight: f64 },
    /// Indicator of `[lo, hi]` applied coordinate-wise.
    Box { lo: f64, hi: f64 },
    Custom(Arc<dyn ProxTerm>),
}

impl fmt::Debug for Regularizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regularizer::Zero => write!(f, "Zero"),
            Regularizer::L1 { weight } => write!(f, "L1 {{ weight: {weight} }}"),
            Regularizer::Box { lo, hi } => write!(f, "Box {{ lo: {lo}, hi: {hi} }}"),
            Regularizer::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

pub fn soft_threshold(v: f64, level: f64) -> f64 {
    if v > level {
        v - level
    } else if v < -level {
        v + level
    } else {
        0.0
    }
}

impl Regularizer {
    pub fn is_zero(&self) -> bool {
        matches!(self, Regularizer::Zero) || matches!(self, Regularizer::L1 { weight } if *weight == 0.0)
    }

    /// Coordinate-wise prox for the separable built-ins; `None` for custom terms.
    pub fn scalar_prox(&self, v: f64, t: f64) -> Option<f64> {
        match self {
            Regularizer::Zero => Some(v),
            Regularizer::L1 { weight } => Some(soft_threshold(v, weight * t)),
            Regularizer::Box { lo, hi } => Some(v.clamp(*lo, *hi)),
            Regularizer::Custom(_) => None,
        }
    }
}

impl ProxTerm for Regularizer {
    fn value(&self, z: &[f64]) -> f64 {
        match self {
            Regularizer::Zero => 0.0,
            Regularizer::L1 { weight } => weight * z.iter().map(|v| v.abs()).sum::<f64>(),
            Regularizer::Box { lo, hi } => {
                let inside = z.iter().all(|&v| v >= lo - BOX_TOL && v <= hi + BOX_TOL);
                if inside {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Regularizer::Custom(term) => term.value(z),
        }
    }

    fn prox(&self, point: &[f64], t: f64) -> Vec<f64> {
        match self {
            Regularizer::Custom(term) => term.prox(point, t),
            _ => point
                .iter()
                .map(|&v| self.scalar_prox(v, t).expect("separable built-in"))
                .collect(),
        }
    }

    fn is_unconstrained(&self) -> bool {
        match self {
            Regularizer::Zero | Regularizer::L1 { .. } => true,
            Regularizer::Box { lo, hi } => lo.is_infinite() && hi.is_infinite(),
            Regularizer::Custom(term) => term.is_unconstrained(),
        }
    }
}
