//! Lattices `X = x(s)` on which the polynomials live.
//!
//! The q-grids are parameterized with a base `0 < q < 1`. The canonical
//! forms with base `Q > 1` map onto these under `Q = 1/q` (and `s -> -s`
//! for the pure exponential), so every grid below is one of the classical
//! linear, quadratic, q-linear or q-quadratic lattices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Direction in which `x(s)` moves as `s` increases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grid {
    /// `x(s) = s`
    Linear,
    /// `x(s) = s(s+1)`, monotone on `[-1/2, inf)`
    Quadratic,
    /// `x(s) = q^{-s}`
    QExpNeg { q: f64 },
    /// `x(s) = q^{s}`, decreasing
    QExp { q: f64 },
    /// `x(s) = (q^s + q^{-s})/2`, increasing on `[0, inf)`
    QSymmetric { q: f64 },
    /// `x(s) = (q^{-s} - q^{s})/2`, increasing on the whole line.
    QAntisymmetric { q: f64 },
}

fn check_base(q: f64) -> Result<f64> {
    if q.is_finite() && q > 0.0 && q < 1.0 {
        Ok(q)
    } else {
        Err(Error::Domain(format!(
            "grid base requires 0 < q < 1 (got q={q})"
        )))
    }
}

impl Grid {
    pub fn q_exp_neg(q: f64) -> Result<Self> {
        Ok(Grid::QExpNeg { q: check_base(q)? })
    }

    pub fn q_exp(q: f64) -> Result<Self> {
        Ok(Grid::QExp { q: check_base(q)? })
    }

    pub fn q_symmetric(q: f64) -> Result<Self> {
        Ok(Grid::QSymmetric { q: check_base(q)? })
    }

    pub fn q_antisymmetric(q: f64) -> Result<Self> {
        Ok(Grid::QAntisymmetric { q: check_base(q)? })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Grid::Linear => "linear",
            Grid::Quadratic => "quadratic",
            Grid::QExpNeg { .. } => "q-exp-neg",
            Grid::QExp { .. } => "q-exp",
            Grid::QSymmetric { .. } => "q-symmetric",
            Grid::QAntisymmetric { .. } => "q-antisymmetric",
        }
    }

    pub fn base(&self) -> Option<f64> {
        match *self {
            Grid::Linear | Grid::Quadratic => None,
            Grid::QExpNeg { q }
            | Grid::QExp { q }
            | Grid::QSymmetric { q }
            | Grid::QAntisymmetric { q } => Some(q),
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            Grid::QExp { .. } => Direction::Decreasing,
            _ => Direction::Increasing,
        }
    }

    /// The grid of type (IV) needs the extra `n f + f_1 <= 0` hypothesis.
    pub fn is_antisymmetric(&self) -> bool {
        matches!(self, Grid::QAntisymmetric { .. })
    }

    /// Closed interval of `s` on which the map is strictly monotone.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Grid::Quadratic => (-0.5, f64::INFINITY),
            Grid::QSymmetric { .. } => (0.0, f64::INFINITY),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    fn check_s(&self, s: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if s.is_finite() && s >= lo && s <= hi {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "s={s} outside the monotone domain [{lo}, {hi}] of the {} grid",
                self.name()
            )))
        }
    }

    /// `x(s)` without the domain check. The formulas are analytic on the
    /// whole line, and several constructions (eq1 at `y-1`, half steps at
    /// the support start) need them just outside the monotone branch.
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Grid::Linear => s,
            Grid::Quadratic => s * (s + 1.0),
            Grid::QExpNeg { q } => q.powf(-s),
            Grid::QExp { q } => q.powf(s),
            Grid::QSymmetric { q } => 0.5 * (q.powf(s) + q.powf(-s)),
            Grid::QAntisymmetric { q } => 0.5 * (q.powf(-s) - q.powf(s)),
        }
    }

    pub fn deriv(&self, s: f64) -> f64 {
        match *self {
            Grid::Linear => 1.0,
            Grid::Quadratic => 2.0 * s + 1.0,
            Grid::QExpNeg { q } => -q.powf(-s) * q.ln(),
            Grid::QExp { q } => q.powf(s) * q.ln(),
            Grid::QSymmetric { q } => 0.5 * q.ln() * (q.powf(s) - q.powf(-s)),
            Grid::QAntisymmetric { q } => -0.5 * q.ln() * (q.powf(-s) + q.powf(s)),
        }
    }

    pub fn x(&self, s: f64) -> Result<f64> {
        self.check_s(s)?;
        Ok(self.eval(s))
    }

    pub fn x_inverse(&self, x: f64) -> Result<f64> {
        let outside = || {
            Error::InvalidInput(format!(
                "X={x} outside the image of the {} grid",
                self.name()
            ))
        };
        if !x.is_finite() {
            return Err(outside());
        }
        match *self {
            Grid::Linear => Ok(x),
            Grid::Quadratic => {
                if x < -0.25 {
                    return Err(outside());
                }
                Ok(0.5 * (-1.0 + (1.0 + 4.0 * x).sqrt()))
            }
            Grid::QExpNeg { q } => {
                if x <= 0.0 {
                    return Err(outside());
                }
                Ok(-x.ln() / q.ln())
            }
            Grid::QExp { q } => {
                if x <= 0.0 {
                    return Err(outside());
                }
                Ok(x.ln() / q.ln())
            }
            Grid::QSymmetric { q } => {
                if x < 1.0 {
                    return Err(outside());
                }
                Ok(x.acosh() / -q.ln())
            }
            Grid::QAntisymmetric { q } => Ok(x.asinh() / -q.ln()),
        }
    }

    pub fn dx_ds(&self, s: f64) -> Result<f64> {
        self.check_s(s)?;
        Ok(self.deriv(s))
    }

    /// Forward difference `x(s+1) - x(s)`.
    pub fn delta_x(&self, s: f64) -> Result<f64> {
        self.check_s(s)?;
        self.check_s(s + 1.0)?;
        Ok(self.step(s))
    }

    /// Backward difference `x(s) - x(s-1)`.
    pub fn nabla_x(&self, s: f64) -> Result<f64> {
        self.delta_x(s - 1.0)
    }

    /// `x(s+1) - x(s)` without domain checks.
    pub fn step(&self, s: f64) -> f64 {
        self.eval(s + 1.0) - self.eval(s)
    }

    /// Half-step difference `Delta x(s - 1/2) = x(s+1/2) - x(s-1/2)`, unchecked.
    pub fn half_step(&self, s: f64) -> f64 {
        self.eval(s + 0.5) - self.eval(s - 0.5)
    }
}
