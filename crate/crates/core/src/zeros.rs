//! Zeros of `P_n` by sign-change sampling in s followed by bisection.
//!
//! Consecutive zeros are more than one unit apart in s wherever `f > 0` on
//! the zero set, so sampling at step 1/2 cannot miss a pair. The step is
//! refined to 1/4 and 1/8 before a wrong count is reported.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::FamilySpec;

/// Threshold above which an eq1 residual flags a coefficient table.
pub const EQ1_FLAG_TOL: f64 = 1e-6;

const NEAR_ZERO: f64 = 1e-26;
const MAX_WINDOW: f64 = 4000.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroProblem {
    pub family: FamilySpec,
    pub n: usize,
    pub sweep_param: Option<String>,
}

impl ZeroProblem {
    pub fn new(family: FamilySpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("degree n must be at least 1".into()));
        }
        if n > family.degree_max {
            return Err(Error::InvalidInput(format!(
                "degree n={n} exceeds the maximum {} for {}",
                family.degree_max,
                family.kind.slug()
            )));
        }
        Ok(ZeroProblem {
            family,
            n,
            sweep_param: None,
        })
    }

    pub fn with_sweep(mut self, param: &str) -> Result<Self> {
        if param == "N" {
            return Err(Error::InvalidInput(
                "N is an integer parameter and cannot be swept".into(),
            ));
        }
        self.family.param(param)?;
        self.sweep_param = Some(param.to_string());
        Ok(self)
    }

    /// Same problem with the family replaced.
    pub fn with_family(&self, family: FamilySpec) -> Self {
        ZeroProblem {
            family,
            n: self.n,
            sweep_param: self.sweep_param.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSet {
    pub problem: ZeroProblem,
    /// Zeros in s, ascending.
    pub zeros_s: Vec<f64>,
    /// `X` at each zero; ascending iff the grid is increasing.
    pub zeros_x: Vec<f64>,
    /// `|P_n|` at each zero divided by the local series scale.
    pub residuals: Vec<f64>,
    /// Largest final bracket width in s.
    pub bracket_width: f64,
    /// Sampling step that produced the right count.
    pub step: f64,
}

impl ZeroSet {
    /// Zeros in X, ascending.
    pub fn sorted_x(&self) -> Vec<f64> {
        let mut x = self.zeros_x.clone();
        x.sort_by(f64::total_cmp);
        x
    }

    /// Smallest gap between consecutive zeros in s.
    pub fn min_gap_s(&self) -> Option<f64> {
        self.zeros_s
            .windows(2)
            .map(|w| w[1] - w[0])
            .reduce(f64::min)
    }
}

/// Sign changes and exact hits of `g` on a sampled window.
fn brackets(samples: &[(f64, f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &(s, g, scale) in samples {
        if g.abs() <= NEAR_ZERO * scale {
            out.push((s, s));
            prev = None;
            continue;
        }
        if let Some((ps, pg)) = prev {
            if pg.signum() != g.signum() {
                out.push((ps, s));
            }
        }
        prev = Some((s, g));
    }
    out
}

fn sample(
    family: &FamilySpec,
    n: usize,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<Vec<(f64, f64, f64)>> {
    let count = ((hi - lo) / step).ceil() as usize;
    (0..=count)
        .map(|i| {
            let s = (lo + i as f64 * step).min(hi);
            let v = family.eval_s_scaled(n, s)?;
            Ok((s, v.value, v.scale))
        })
        .collect()
}

/// Bisection in s down to adjacent doubles. Zeros of q-families can sit
/// far closer to a support point than any fixed absolute width.
fn bisect(family: &FamilySpec, n: usize, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    if lo == hi {
        return Ok((lo, 0.0));
    }
    let mut glo = family.eval_s(n, lo)?;
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = family.eval_s(n, mid)?;
        if gm == 0.0 {
            return Ok((mid, 0.0));
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), hi - lo))
}

/// All `n` zeros of `P_n` in the open support interval.
pub fn find_zeros(problem: &ZeroProblem) -> Result<ZeroSet> {
    let family = &problem.family;
    let n = problem.n;
    let lo = family.support_start;
    let mut last_count = 0;
    for step in [0.5, 0.25, 0.125] {
        let found = match family.support_end {
            Some(b) => brackets(&sample(family, n, lo, b - 1.0, step)?),
            None => {
                // Grow the window until the count settles with room to spare.
                let mut width = (4.0 * n as f64).max(16.0);
                loop {
                    let br = brackets(&sample(family, n, lo, lo + width, step)?);
                    let enough =
                        br.len() >= n && br.last().is_some_and(|z| z.1 + 5.0 <= lo + width);
                    if enough || width >= MAX_WINDOW {
                        break br;
                    }
                    width *= 2.0;
                }
            }
        };
        last_count = found.len();
        if found.len() == n {
            return finish(problem, &found, step);
        }
    }
    Err(Error::ZeroCount {
        expected: n,
        found: last_count,
        detail: format!(
            "{} at {:?} after refining the sampling step to 1/8",
            family.kind.slug(),
            family.params
        ),
    })
}

fn finish(problem: &ZeroProblem, found: &[(f64, f64)], step: f64) -> Result<ZeroSet> {
    let family = &problem.family;
    let mut zeros_s = Vec::with_capacity(found.len());
    let mut residuals = Vec::with_capacity(found.len());
    let mut bracket_width: f64 = 0.0;
    for &(lo, hi) in found {
        let (z, w) = bisect(family, problem.n, lo, hi)?;
        let v = family.eval_s_scaled(problem.n, z)?;
        zeros_s.push(z);
        residuals.push(v.value.abs() / v.scale.max(f64::MIN_POSITIVE));
        bracket_width = bracket_width.max(w);
    }
    let zeros_x = zeros_s.iter().map(|&s| family.x_at(s)).collect();
    Ok(ZeroSet {
        problem: problem.clone(),
        zeros_s,
        zeros_x,
        residuals,
        bracket_width,
        step,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub min_gap: Option<f64>,
    pub pass: bool,
}

/// Consecutive zeros more than one unit apart in s.
pub fn separation_check(zs: &ZeroSet) -> SeparationReport {
    let min_gap = zs.min_gap_s();
    SeparationReport {
        min_gap,
        pass: min_gap.is_none_or(|g| g > 1.0),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eq1Report {
    /// `-P(x(y-1)) / P(x(y+1))` at each zero.
    pub eq1_values: Vec<f64>,
    pub f_active: Vec<f64>,
    pub f_printed: Vec<f64>,
    pub residuals_active: Vec<f64>,
    pub residuals_printed: Vec<f64>,
    pub max_active: f64,
    pub max_printed: f64,
    pub active_flagged: bool,
    pub printed_flagged: bool,
}

fn eq1_residual(f: f64, value: f64) -> f64 {
    (f - value).abs() / f.abs().max(1.0)
}

/// Checks `f(y_j) = -P(x(y_j-1)) / P(x(y_j+1))` at every zero against
/// both the active and the printed coefficient tables.
pub fn eq1_consistency(problem: &ZeroProblem, zs: &ZeroSet) -> Result<Eq1Report> {
    let family = &problem.family;
    let n = problem.n;
    let mut eq1_values = Vec::new();
    let mut f_active = Vec::new();
    let mut f_printed = Vec::new();
    for &y in &zs.zeros_s {
        let up = family.eval_s(n, y + 1.0)?;
        if up == 0.0 {
            return Err(Error::Singularity {
                s: y + 1.0,
                what: "P(x(y+1)) vanishes".into(),
            });
        }
        eq1_values.push(-family.eval_s(n, y - 1.0)? / up);
        f_active.push(family.monotonicity_f(y)?);
        f_printed.push(family.printed_f(y)?);
    }
    let res = |f: &[f64]| -> Vec<f64> {
        f.iter()
            .zip(&eq1_values)
            .map(|(&f, &v)| eq1_residual(f, v))
            .collect()
    };
    let residuals_active = res(&f_active);
    let residuals_printed = res(&f_printed);
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let max_active = max(&residuals_active);
    let max_printed = max(&residuals_printed);
    Ok(Eq1Report {
        eq1_values,
        f_active,
        f_printed,
        residuals_active,
        residuals_printed,
        max_active,
        max_printed,
        active_flagged: !(max_active <= EQ1_FLAG_TOL),
        printed_flagged: !(max_printed <= EQ1_FLAG_TOL),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_family, FamilyKind};

    #[test]
    fn charlier_degree_one() {
        let f = make_family(FamilyKind::Charlier, &[("alpha", 2.0)]).unwrap();
        let zs = find_zeros(&ZeroProblem::new(f, 1).unwrap()).unwrap();
        assert!((zs.zeros_x[0] - 2.0).abs() < 1e-11);
    }

    #[test]
    fn krawtchouk_degree_one() {
        let f = make_family(FamilyKind::Krawtchouk, &[("alpha", 0.25), ("N", 5.0)]).unwrap();
        let zs = find_zeros(&ZeroProblem::new(f, 1).unwrap()).unwrap();
        assert!((zs.zeros_x[0] - 1.0).abs() < 1e-11);
    }

    #[test]
    fn hahn_degree_four() {
        let f = make_family(
            FamilyKind::Hahn,
            &[("alpha", 0.0), ("beta", 0.0), ("N", 5.0)],
        )
        .unwrap();
        let zs = find_zeros(&ZeroProblem::new(f, 4).unwrap()).unwrap();
        assert_eq!(zs.zeros_x.len(), 4);
        assert!(zs.zeros_x.iter().all(|&x| x > 0.0 && x < 4.0));
        assert!(zs.zeros_x.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn separation_vacuous_for_one_zero() {
        let f = make_family(FamilyKind::Charlier, &[("alpha", 3.0)]).unwrap();
        let zs = find_zeros(&ZeroProblem::new(f, 1).unwrap()).unwrap();
        assert!(separation_check(&zs).pass);
    }
}
