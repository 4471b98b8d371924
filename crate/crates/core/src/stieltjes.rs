//! Zero motion in a parameter: sign hypotheses on `f = B/A`, the linear
//! system `A(t) y'(t) = f_2` satisfied by the zero derivatives, and
//! empirical monotonicity sweeps.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::grid::{Direction, Grid};
use crate::zeros::{find_zeros, ZeroProblem, ZeroSet};

/// Uniform samples taken over the zero-relevant part of the K-interval.
pub const HYPOTHESIS_SAMPLES: usize = 200;
const MAX_COUNTEREXAMPLES: usize = 20;
const MAX_REFINEMENTS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Mixed,
}

impl Sign {
    fn of(values: &[f64]) -> Sign {
        if values.iter().all(|&v| v > 0.0) {
            Sign::Positive
        } else if values.iter().all(|&v| v < 0.0) {
            Sign::Negative
        } else {
            Sign::Mixed
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Sign::Positive => Some(1.0),
            Sign::Negative => Some(-1.0),
            Sign::Mixed => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridCondition {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub family: FamilySpec,
    pub n: usize,
    pub param: String,
    pub t: f64,
    pub k_interval: (f64, f64),
    /// Part of the K-interval that was sampled.
    pub sampled_interval: (f64, f64),
    pub f_positive: bool,
    pub f1_negative: bool,
    pub f2_sign: Sign,
    pub grid_iv_condition: GridCondition,
    pub zero_set_inside_k: bool,
    /// Whether the parameter rescales the polynomial variable, in which
    /// case only the s-trajectories are governed by the system.
    pub param_moves_grid: bool,
    pub sample_count: usize,
    /// Points where `f > 0` or `f_1 < 0` fails.
    pub counterexamples: Vec<f64>,
    pub zeros_s: Vec<f64>,
    pub pass: bool,
}

/// `n f + f_1 <= 0`, the extra requirement on the antisymmetric q-grid.
pub fn grid_iv_condition(n: usize, f: f64, f1: f64) -> bool {
    n as f64 * f + f1 <= 0.0
}

fn problem_at(problem: &ZeroProblem, param: &str, t: f64) -> Result<ZeroProblem> {
    if param == "N" {
        return Err(Error::InvalidInput(
            "N is an integer parameter and cannot be varied".into(),
        ));
    }
    Ok(problem.with_family(problem.family.with_param(param, t)?))
}

fn moves_grid(family: &FamilySpec, param: &str) -> Result<bool> {
    let t = family.param(param)?;
    let other = family.with_param_unchecked(param, t + 1e-3 * t.abs().max(1.0))?;
    Ok(other.x_scale != family.x_scale)
}

/// Checks `f > 0`, `f_1 < 0` and the sign of `f_2` at the zeros and on
/// [`HYPOTHESIS_SAMPLES`] midpoints of the K-interval clipped to the
/// support (to one unit past the last zero for infinite support).
pub fn hypothesis_report(problem: &ZeroProblem, param: &str, t: f64) -> Result<HypothesisReport> {
    let problem = problem_at(problem, param, t)?;
    let family = &problem.family;
    let zs = find_zeros(&problem)?;
    let k = family.k_interval();
    let last = *zs.zeros_s.last().expect("at least one zero");
    let hi_support = family.support_end.map_or(last + 1.0, |b| b - 1.0);
    let lo = k.0.max(family.support_start);
    let hi = k.1.min(hi_support);

    let mut points: Vec<f64> = (0..HYPOTHESIS_SAMPLES)
        .map(|i| lo + (i as f64 + 0.5) * (hi - lo) / HYPOTHESIS_SAMPLES as f64)
        .filter(|_| hi > lo)
        .collect();
    points.extend_from_slice(&zs.zeros_s);

    let antisym = family.grid.is_antisymmetric();
    let mut f_positive = true;
    let mut f1_negative = true;
    let mut grid_iv_ok = true;
    let mut f2_values = Vec::with_capacity(points.len());
    let mut counterexamples = Vec::new();
    for &s in &points {
        let f = family.monotonicity_f(s)?;
        let (f1, f2) = family.f_partials(s, param)?;
        let bad = !(f > 0.0) || !(f1 < 0.0);
        f_positive &= f > 0.0;
        f1_negative &= f1 < 0.0;
        if antisym {
            grid_iv_ok &= grid_iv_condition(problem.n, f, f1);
        }
        if bad && counterexamples.len() < MAX_COUNTEREXAMPLES {
            counterexamples.push(s);
        }
        f2_values.push(f2);
    }
    let f2_sign = Sign::of(&f2_values);
    let grid_iv_condition = match (antisym, grid_iv_ok) {
        (false, _) => GridCondition::NotApplicable,
        (true, true) => GridCondition::Pass,
        (true, false) => GridCondition::Fail,
    };
    let zero_set_inside_k = zs.zeros_s.iter().all(|&y| y > k.0 && y < k.1);
    let pass = f_positive
        && f1_negative
        && f2_sign != Sign::Mixed
        && zero_set_inside_k
        && grid_iv_condition != GridCondition::Fail;
    Ok(HypothesisReport {
        family: family.clone(),
        n: problem.n,
        param: param.to_string(),
        t,
        k_interval: k,
        sampled_interval: (lo, hi),
        f_positive,
        f1_negative,
        f2_sign,
        grid_iv_condition,
        zero_set_inside_k,
        param_moves_grid: moves_grid(family, param)?,
        sample_count: points.len(),
        counterexamples,
        zeros_s: zs.zeros_s,
        pass,
    })
}

/// Generic `b_jk` from the grid map and its derivative.
pub fn b_generic(grid: &Grid, yj: f64, yk: f64) -> f64 {
    let (x, d) = (|s| grid.eval(s), |s| grid.deriv(s));
    let (xk, dk) = (x(yk), d(yk));
    (d(yj - 1.0) - dk) / (x(yj - 1.0) - xk) - (d(yj + 1.0) - dk) / (x(yj + 1.0) - xk)
}

/// Generic `c_jk`, `j != k`.
pub fn c_generic(grid: &Grid, yj: f64, yk: f64) -> f64 {
    let xk = grid.eval(yk);
    (1.0 / (grid.eval(yj + 1.0) - xk) - 1.0 / (grid.eval(yj - 1.0) - xk)) * grid.deriv(yk)
}

/// Closed form of `b_jk` on the quadratic grid.
pub fn b_quadratic(yj: f64, yk: f64) -> f64 {
    let u = yj + yk;
    4.0 / (u * (u + 2.0))
}

/// Closed form of `b_jk` on the symmetric q-grid, `theta = -ln(q)/2`.
pub fn b_q_symmetric(theta: f64, yj: f64, yk: f64) -> f64 {
    let u = yj + yk;
    2.0 * theta * (2.0 * theta).sinh() / (((u - 1.0) * theta).sinh() * ((u + 1.0) * theta).sinh())
}

/// Closed form of `b_jk` on the antisymmetric q-grid, `theta = -ln(q)/2`.
pub fn b_q_antisymmetric(theta: f64, yj: f64, yk: f64) -> f64 {
    let u = yj + yk;
    -2.0 * theta * (2.0 * theta).sinh() / (((u + 1.0) * theta).cosh() * ((u - 1.0) * theta).cosh())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StieltjesSystem {
    pub t: f64,
    pub zeros_s: Vec<f64>,
    pub matrix: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub b_matrix: Vec<Vec<f64>>,
    pub c_matrix: Vec<Vec<f64>>,
    /// `y'_j` in s-coordinates.
    pub solution: Vec<f64>,
    /// `dY_j/dt = x'(y_j) y'_j` (excluding any rescaling of the variable).
    pub solution_x: Vec<f64>,
    pub diag_dominant: bool,
    pub offdiag_negative: bool,
    pub inverse_positive: bool,
}

impl StieltjesSystem {
    pub fn flags_hold(&self) -> bool {
        self.diag_dominant && self.offdiag_negative && self.inverse_positive
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

/// Assembles and solves `A(t) y' = f_2` at the zeros of `P_n` for the
/// parameter value `t`.
pub fn build_stieltjes_system(
    problem: &ZeroProblem,
    param: &str,
    t: f64,
) -> Result<StieltjesSystem> {
    let problem = problem_at(problem, param, t)?;
    let family = &problem.family;
    let zs = find_zeros(&problem)?;
    let y = &zs.zeros_s;
    let n = y.len();
    let grid = &family.grid;

    let mut b = DMatrix::zeros(n, n);
    let mut c = DMatrix::zeros(n, n);
    let mut a = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    for j in 0..n {
        let f = family.monotonicity_f(y[j])?;
        let (f1, f2) = family.f_partials(y[j], param)?;
        rhs[j] = f2;
        for k in 0..n {
            b[(j, k)] = b_generic(grid, y[j], y[k]);
            if k != j {
                c[(j, k)] = c_generic(grid, y[j], y[k]);
                a[(j, k)] = f * c[(j, k)];
            }
        }
        let off: f64 = (0..n).filter(|&k| k != j).map(|k| a[(j, k)]).sum();
        a[(j, j)] = -f1 + f * b.row(j).sum() - off;
    }
    if a.iter().any(|v| !v.is_finite()) || rhs.iter().any(|v| !v.is_finite()) {
        return Err(Error::IllConditioned(
            "non-finite entries in the system".into(),
        ));
    }

    let lu = a.clone().lu();
    let solution = lu
        .solve(&rhs)
        .ok_or_else(|| Error::IllConditioned(format!("singular {n}x{n} system at t={t}")))?;
    let mut inverse_positive = true;
    for k in 0..n {
        let col = lu
            .solve(&DVector::from_fn(n, |i, _| if i == k { 1.0 } else { 0.0 }))
            .expect("LU already solved once");
        inverse_positive &= col.iter().all(|&v| v > 0.0);
    }
    let offdiag_negative = (0..n).all(|j| (0..n).all(|k| j == k || a[(j, k)] < 0.0));
    let diag_dominant = (0..n).all(|j| {
        let off: f64 = (0..n).filter(|&k| k != j).map(|k| a[(j, k)].abs()).sum();
        a[(j, j)].abs() > off
    });
    let solution: Vec<f64> = solution.iter().copied().collect();
    let solution_x = solution
        .iter()
        .zip(y)
        .map(|(&d, &s)| family.dx_at(s) * d)
        .collect();
    Ok(StieltjesSystem {
        t,
        zeros_s: y.clone(),
        matrix: rows(&a),
        rhs: rhs.iter().copied().collect(),
        b_matrix: rows(&b),
        c_matrix: rows(&c),
        solution,
        solution_x,
        diag_dominant,
        offdiag_negative,
        inverse_positive,
    })
}

/// Central differences of the zeros in s, matched by sorted order.
pub fn zero_derivatives_fd(problem: &ZeroProblem, param: &str, t: f64, h: f64) -> Result<Vec<f64>> {
    let up = find_zeros(&problem_at(problem, param, t + h)?)?;
    let dn = find_zeros(&problem_at(problem, param, t - h)?)?;
    if up.zeros_s.len() != dn.zeros_s.len() {
        return Err(Error::SweepDiscontinuity(format!(
            "{} zeros at t+h but {} at t-h",
            up.zeros_s.len(),
            dn.zeros_s.len()
        )));
    }
    Ok(up
        .zeros_s
        .iter()
        .zip(&dn.zeros_s)
        .map(|(a, b)| (a - b) / (2.0 * h))
        .collect())
}

/// Default step for [`zero_derivatives_fd`].
pub fn default_fd_step(t: f64) -> f64 {
    1e-5 * t.abs().max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Increasing,
    Decreasing,
    NonMonotone,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroTrend {
    pub index: usize,
    pub trend: Trend,
    /// Sign changes in the sequence of increments.
    pub reversals: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictReport {
    pub family: FamilySpec,
    pub n: usize,
    pub param: String,
    pub range: (f64, f64),
    pub ts: Vec<f64>,
    /// Zeros in X, ascending, one row per entry of `ts`.
    pub zeros_x: Vec<Vec<f64>>,
    pub per_zero: Vec<ZeroTrend>,
    /// Common direction of every zero, if there is one.
    pub direction: Option<Direction>,
    pub claimed: Option<Direction>,
    pub agrees: Option<bool>,
    /// Midpoints inserted because adjacent zero sets moved too far.
    pub inserted: usize,
}

impl VerdictReport {
    pub fn monotone(&self) -> bool {
        self.direction.is_some()
    }
}

fn trend(values: &[f64]) -> (Trend, usize) {
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let signs: Vec<f64> = diffs
        .iter()
        .filter(|d| **d != 0.0)
        .map(|d| d.signum())
        .collect();
    let reversals = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let t = if diffs.iter().all(|&d| d > 0.0) {
        Trend::Increasing
    } else if diffs.iter().all(|&d| d < 0.0) {
        Trend::Decreasing
    } else {
        Trend::NonMonotone
    };
    (t, reversals)
}

fn too_far(a: &ZeroSet, b: &ZeroSet) -> bool {
    let gap = a
        .min_gap_s()
        .into_iter()
        .chain(b.min_gap_s())
        .fold(1.0, f64::min);
    a.zeros_s
        .iter()
        .zip(&b.zeros_s)
        .any(|(x, y)| (x - y).abs() > 0.5 * gap)
}

/// Sweeps `param` over `samples` equispaced values in `range`, halving any
/// step across which a zero moves more than half the smallest gap.
pub fn monotonicity_verdict(
    problem: &ZeroProblem,
    param: &str,
    range: (f64, f64),
    samples: usize,
) -> Result<VerdictReport> {
    if samples < 2 || !(range.0 < range.1) {
        return Err(Error::InvalidInput(
            "a sweep needs lo < hi and at least 2 samples".into(),
        ));
    }
    let solve = |ts: &[f64]| -> Result<Vec<ZeroSet>> {
        ts.par_iter()
            .map(|&t| find_zeros(&problem_at(problem, param, t)?))
            .collect()
    };
    let mut ts: Vec<f64> = (0..samples)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (samples - 1) as f64)
        .collect();
    let mut sets = solve(&ts)?;
    let mut inserted = 0;
    for _ in 0..MAX_REFINEMENTS {
        let mids: Vec<f64> = (0..ts.len() - 1)
            .filter(|&i| too_far(&sets[i], &sets[i + 1]))
            .map(|i| 0.5 * (ts[i] + ts[i + 1]))
            .collect();
        if mids.is_empty() {
            break;
        }
        inserted += mids.len();
        let new = solve(&mids)?;
        let mut merged: Vec<(f64, ZeroSet)> = ts
            .into_iter()
            .zip(sets)
            .chain(mids.into_iter().zip(new))
            .collect();
        merged.sort_by(|a, b| a.0.total_cmp(&b.0));
        (ts, sets) = merged.into_iter().unzip();
    }

    let zeros_x: Vec<Vec<f64>> = sets.iter().map(ZeroSet::sorted_x).collect();
    let n = problem.n;
    let per_zero: Vec<ZeroTrend> = (0..n)
        .map(|j| {
            let column: Vec<f64> = zeros_x.iter().map(|row| row[j]).collect();
            let (trend, reversals) = trend(&column);
            ZeroTrend {
                index: j + 1,
                trend,
                reversals,
            }
        })
        .collect();
    let direction = if per_zero.iter().all(|z| z.trend == Trend::Increasing) {
        Some(Direction::Increasing)
    } else if per_zero.iter().all(|z| z.trend == Trend::Decreasing) {
        Some(Direction::Decreasing)
    } else {
        None
    };
    let claimed = problem
        .family
        .claims()
        .into_iter()
        .find(|c| c.param == param)
        .map(|c| c.direction);
    let agrees = claimed.map(|c| direction == Some(c));
    Ok(VerdictReport {
        family: problem.family.clone(),
        n,
        param: param.to_string(),
        range,
        ts,
        zeros_x,
        per_zero,
        direction,
        claimed,
        agrees,
        inserted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_family, FamilyKind};

    #[test]
    fn charlier_degree_one_derivative() {
        let f = make_family(FamilyKind::Charlier, &[("alpha", 2.0)]).unwrap();
        let p = ZeroProblem::new(f, 1).unwrap();
        let sys = build_stieltjes_system(&p, "alpha", 2.0).unwrap();
        assert_eq!(sys.matrix.len(), 1);
        assert!((sys.solution[0] - 1.0).abs() < 1e-8, "{:?}", sys.solution);
        let fd = zero_derivatives_fd(&p, "alpha", 2.0, 1e-4).unwrap();
        assert!((fd[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn quadratic_closed_form() {
        for (yj, yk) in [(1.3, 3.1), (2.0, 2.0), (0.7, 5.9)] {
            let g = b_generic(&Grid::Quadratic, yj, yk);
            assert!((g - b_quadratic(yj, yk)).abs() < 1e-12 * g.abs());
        }
    }

    #[test]
    fn symmetric_closed_forms() {
        let q: f64 = 0.6;
        let theta = -q.ln() / 2.0;
        let sym = Grid::q_symmetric(q).unwrap();
        let anti = Grid::q_antisymmetric(q).unwrap();
        for (yj, yk) in [(1.3, 3.1), (2.0, 2.0), (0.7, 5.9)] {
            let g = b_generic(&sym, yj, yk);
            assert!((g - b_q_symmetric(theta, yj, yk)).abs() < 1e-10 * g.abs());
            let g = b_generic(&anti, yj, yk);
            assert!((g - b_q_antisymmetric(theta, yj, yk)).abs() < 1e-10 * g.abs());
        }
    }

    #[test]
    fn hahn_hypotheses() {
        let f = make_family(
            FamilyKind::Hahn,
            &[("alpha", 0.0), ("beta", 0.0), ("N", 5.0)],
        )
        .unwrap();
        let p = ZeroProblem::new(f, 2).unwrap();
        let r = hypothesis_report(&p, "alpha", 0.0).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.f2_sign, Sign::Negative);
        assert_eq!(r.grid_iv_condition, GridCondition::NotApplicable);
    }

    #[test]
    fn trend_counts_reversals() {
        assert_eq!(trend(&[1.0, 2.0, 3.0]), (Trend::Increasing, 0));
        assert_eq!(trend(&[1.0, 2.0, 1.5, 1.7]), (Trend::NonMonotone, 2));
    }
}
