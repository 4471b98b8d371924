//! Weights from the ratio form of the Pearson equation, boundary
//! conditions, norms and orthogonality sums.
//!
//! `omega(s+1)/omega(s) = B(s) dx(s-1/2) / (A(s+1) dx(s+1/2))`, with
//! `dx(s-1/2) = x(s+1/2) - x(s-1/2)`. Values are accumulated in log-space
//! and normalized so that `omega(a) = 1`. Sums use `|dx(s-1/2)|` so that
//! decreasing grids give positive norms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::FamilySpec;

/// Relative tail bound for plain weight sums.
pub const TAIL_TOL: f64 = 1e-14;
/// Relative tail bound when sums carry polynomial factors. High-degree
/// polynomials can nearly vanish on the bulk of the support, so their
/// norm may live far out in the tail.
pub const MOMENT_TAIL_TOL: f64 = 1e-60;
/// Hard cap on the number of tabulated points.
pub const MAX_POINTS: usize = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct WeightOptions {
    /// Degree d such that sums of `omega |dx| (1+|X|)^(2d)` must converge
    /// before an infinite table stops.
    pub moment_degree: usize,
    /// Use the printed coefficient tables instead of the active ones.
    pub printed: bool,
    /// Take `|ratio|` instead of failing on a non-positive ratio.
    pub abs_ratio: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightTable {
    pub family: FamilySpec,
    pub start: f64,
    /// `omega(a + i)`, with `omega(a) = 1`.
    pub values: Vec<f64>,
    /// `|dx(s - 1/2)|` at each tabulated s.
    pub dx: Vec<f64>,
    /// Bound on the neglected tail relative to the partial sum; 0 for finite support.
    pub truncation_bound: f64,
    /// Points where the raw ratio was non-positive (only with `abs_ratio`).
    pub negative_ratio_at: Vec<f64>,
}

impl WeightTable {
    pub fn s_values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| self.start + i as f64)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `omega(s) |dx(s-1/2)|` at each tabulated s.
    pub fn masses(&self) -> Vec<f64> {
        self.values
            .iter()
            .zip(&self.dx)
            .map(|(w, d)| w * d)
            .collect()
    }
}

fn ab(family: &FamilySpec, s: f64, printed: bool) -> Result<(f64, f64)> {
    if printed {
        family.printed_coeffs_ab(s)
    } else {
        family.coeffs_ab(s)
    }
}

/// Raw ratio `omega(s+1)/omega(s)`.
pub fn weight_ratio(family: &FamilySpec, s: f64, printed: bool) -> Result<f64> {
    if !printed {
        if let Some(r) = family.weight_ratio_closed(s) {
            return Ok(r);
        }
    }
    let (_, b) = ab(family, s, printed)?;
    let (a1, _) = ab(family, s + 1.0, printed)?;
    let den = a1 * family.grid.half_step(s + 1.0);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Singularity {
            s: s + 1.0,
            what: "A(s+1) dx(s+1/2) vanishes".into(),
        });
    }
    Ok(b * family.grid.half_step(s) / den)
}

pub fn weight_table(family: &FamilySpec) -> Result<WeightTable> {
    weight_table_with(family, WeightOptions::default())
}

pub fn weight_table_with(family: &FamilySpec, opts: WeightOptions) -> Result<WeightTable> {
    let a = family.support_start;
    let grid = &family.grid;
    let mut log_w = vec![0.0];
    let mut negative_ratio_at = Vec::new();
    let mut push_ratio = |s: f64, log_w: &mut Vec<f64>| -> Result<f64> {
        let mut r = weight_ratio(family, s, opts.printed)?;
        if !(r > 0.0) || !r.is_finite() {
            if opts.abs_ratio && r.is_finite() && r != 0.0 {
                negative_ratio_at.push(s);
                r = r.abs();
            } else {
                return Err(Error::WeightPositivity { s, ratio: r });
            }
        }
        let last = *log_w.last().unwrap();
        log_w.push(last + r.ln());
        Ok(r)
    };
    let mut truncation_bound = 0.0;
    match family.support_size() {
        Some(nn) => {
            for i in 0..nn.saturating_sub(1) {
                push_ratio(a + i as f64, &mut log_w)?;
            }
        }
        None => {
            let (tol, d) = if opts.moment_degree > 0 {
                (MOMENT_TAIL_TOL, opts.moment_degree as i32)
            } else {
                (TAIL_TOL, 0)
            };
            let term = |i: usize, lw: f64| {
                let s = a + i as f64;
                (lw + grid.half_step(s).abs().ln()).exp() * (1.0 + family.x_at(s).abs()).powi(2 * d)
            };
            let mut partial = term(0, 0.0);
            let mut prev = partial;
            let mut done = false;
            while log_w.len() < MAX_POINTS {
                let i = log_w.len();
                push_ratio(a + (i - 1) as f64, &mut log_w)?;
                let t = term(i, log_w[i]);
                partial += t;
                let rho = if prev > 0.0 { t / prev } else { 0.0 };
                prev = t;
                if rho < 1.0 && i >= 4 {
                    let tail = if t == 0.0 { 0.0 } else { t * rho / (1.0 - rho) };
                    if tail <= tol * partial {
                        truncation_bound = tail / partial;
                        done = true;
                        break;
                    }
                }
            }
            if !done {
                return Err(Error::Truncation(MAX_POINTS));
            }
        }
    }
    let values: Vec<f64> = log_w.iter().map(|l| l.exp()).collect();
    let dx = (0..values.len())
        .map(|i| grid.half_step(a + i as f64).abs())
        .collect();
    Ok(WeightTable {
        family: family.clone(),
        start: a,
        values,
        dx,
        truncation_bound,
        negative_ratio_at,
    })
}

/// Relative residual of `omega(s+1) A(s+1) dx(s+1/2) = omega(s) B(s) dx(s-1/2)`
/// for each consecutive tabulated pair.
pub fn pearson_residuals(table: &WeightTable) -> Result<Vec<f64>> {
    let f = &table.family;
    let g = &f.grid;
    let mut out = Vec::with_capacity(table.len().saturating_sub(1));
    for (i, s) in table
        .s_values()
        .enumerate()
        .take(table.len().saturating_sub(1))
    {
        let (_, b) = f.coeffs_ab(s)?;
        let (a1, _) = f.coeffs_ab(s + 1.0)?;
        let lhs = table.values[i + 1] * a1 * g.half_step(s + 1.0);
        let rhs = table.values[i] * b * g.half_step(s);
        out.push((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryReport {
    /// `|omega a x^k(s-1/2)|` at s=a relative to its largest tabulated value, per k.
    pub lower: Vec<f64>,
    /// Same at s=b for finite support, or at the last tabulated point for infinite support.
    pub upper: Vec<f64>,
    pub tol: f64,
    pub pass: bool,
}

/// Checks that `omega(s) a(s) x^k(s-1/2)` vanishes at both ends of the
/// support, with `a(s) = A(s) nabla x(s) dx(s-1/2)`.
pub fn boundary_check(family: &FamilySpec, k_max: usize) -> Result<BoundaryReport> {
    const TOL: f64 = 1e-10;
    let table = weight_table_with(
        family,
        WeightOptions {
            moment_degree: k_max,
            ..Default::default()
        },
    )?;
    let g = &family.grid;
    let a_of = |s: f64| -> Result<f64> {
        let (a, _) = family.coeffs_ab(s)?;
        Ok(a * g.step(s - 1.0) * g.half_step(s))
    };
    let mut products = Vec::with_capacity(table.len());
    for (i, s) in table.s_values().enumerate() {
        products.push((s, table.values[i] * a_of(s)?));
    }
    let end = match family.support_end {
        Some(b) => {
            // omega(b) a(b) through the last ratio, with A(b) cancelled.
            let last = *table.values.last().unwrap();
            let (_, bb) = family.coeffs_ab(b - 1.0)?;
            Some((b, last * bb * g.half_step(b - 1.0) * g.step(b - 1.0)))
        }
        None => None,
    };
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for k in 0..=k_max {
        let xk = |s: f64| family.x_at(s - 0.5).powi(k as i32);
        let scale = products
            .iter()
            .map(|&(s, p)| (p * xk(s)).abs())
            .chain(end.map(|(s, p)| (p * xk(s)).abs()))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let (s0, p0) = products[0];
        lower.push((p0 * xk(s0)).abs() / scale);
        let (s1, p1) = end.unwrap_or(*products.last().unwrap());
        upper.push((p1 * xk(s1)).abs() / scale);
    }
    let pass = lower.iter().chain(&upper).all(|&r| r <= TOL);
    Ok(BoundaryReport {
        lower,
        upper,
        tol: TOL,
        pass,
    })
}

/// `P_k(x(s))` for k = 0..=deg at every tabulated s.
fn poly_values(table: &WeightTable, deg: usize) -> Result<Vec<Vec<f64>>> {
    (0..=deg)
        .map(|k| {
            table
                .s_values()
                .map(|s| table.family.eval_s(k, s))
                .collect()
        })
        .collect()
}

fn table_for_degree(family: &FamilySpec, deg: usize) -> Result<WeightTable> {
    weight_table_with(
        family,
        WeightOptions {
            moment_degree: deg,
            ..Default::default()
        },
    )
}

/// Gram matrix `G[m][n] = sum P_m P_n omega |dx|` for degrees 0..=k.
pub fn gram_matrix(family: &FamilySpec, k: usize) -> Result<Vec<Vec<f64>>> {
    let table = table_for_degree(family, k)?;
    gram_from_table(&table, k)
}

pub fn gram_from_table(table: &WeightTable, k: usize) -> Result<Vec<Vec<f64>>> {
    let p = poly_values(table, k)?;
    let mass = table.masses();
    let mut g = vec![vec![0.0; k + 1]; k + 1];
    for m in 0..=k {
        for n in m..=k {
            let v = neumaier((0..mass.len()).map(|i| p[m][i] * p[n][i] * mass[i]));
            g[m][n] = v;
            g[n][m] = v;
        }
    }
    Ok(g)
}

fn neumaier(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for t in terms {
        let s = sum + t;
        c += if sum.abs() >= t.abs() {
            (sum - s) + t
        } else {
            (t - s) + sum
        };
        sum = s;
    }
    sum + c
}

pub fn norm_sq(family: &FamilySpec, n: usize) -> Result<f64> {
    let table = table_for_degree(family, n)?;
    norm_sq_from_table(&table, n)
}

pub fn norm_sq_from_table(table: &WeightTable, n: usize) -> Result<f64> {
    let mass = table.masses();
    let vals: Vec<f64> = table
        .s_values()
        .map(|s| table.family.eval_s(n, s))
        .collect::<Result<_>>()?;
    Ok(neumaier(vals.iter().zip(&mass).map(|(p, w)| p * p * w)))
}

/// `|<P_m, P_n>| / (||P_m|| ||P_n||)` for `m != n`, `||P_n||^2` for `m == n`.
pub fn orthogonality_residual(family: &FamilySpec, m: usize, n: usize) -> Result<f64> {
    let deg = m.max(n);
    let g = gram_matrix(family, deg)?;
    if m == n {
        Ok(g[n][n])
    } else {
        Ok(g[m][n].abs() / (g[m][m] * g[n][n]).sqrt())
    }
}

/// Largest relative off-diagonal Gram entry for degrees 0..=k.
pub fn max_offdiag_residual(gram: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for m in 0..gram.len() {
        for n in 0..m {
            worst = worst.max(gram[m][n].abs() / (gram[m][m] * gram[n][n]).sqrt());
        }
    }
    worst
}
