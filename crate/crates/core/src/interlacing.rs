//! Interlacing of the zeros of `P_n(.; N)` and `P_n(.; N+1)` for finite
//! families sharing one weight, and the connection identity between them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{FamilyKind, FamilySpec};
use crate::grid::Direction;
use crate::weights::{weight_ratio, weight_table};
use crate::zeros::{find_zeros, ZeroProblem, ZeroSet};

/// Relative tolerance for the same-weight precondition.
pub const SAME_WEIGHT_TOL: f64 = 1e-12;
/// `|P_n(x(b); N)| / scale` below which `x(b)` counts as a zero.
pub const AT_XB_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterlaceCase {
    /// `P_n(x(b); N) = 0`: both zero sets coincide.
    Identical,
    /// `x(b)` lies outside every gap between consecutive zeros.
    InteriorInterlace,
    /// `x(b)` lies strictly between two consecutive zeros.
    SplitAtXb,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Placement {
    pub lo: f64,
    pub hi: f64,
    /// Zeros of `P_n(.; N+1)` strictly inside `(lo, hi)`.
    pub count: usize,
    pub expected: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterlaceOptions {
    /// Refuse instances whose weight changes with N.
    pub require_same_weight: bool,
}

impl Default for InterlaceOptions {
    fn default() -> Self {
        InterlaceOptions {
            require_same_weight: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterlacingReport {
    pub kind: FamilyKind,
    pub params: BTreeMap<String, f64>,
    pub n: usize,
    #[serde(rename = "N")]
    pub support: usize,
    pub same_weight: bool,
    /// Largest relative difference of the weight ratios on the shared support.
    pub weight_mismatch: f64,
    pub x_b: f64,
    /// `P_n(x(b); N)` relative to its series scale.
    pub p_at_xb: f64,
    pub zeros_n: ZeroSet,
    pub zeros_n1: ZeroSet,
    pub case: InterlaceCase,
    /// Intervals from the trichotomy, each expected to hold a zero.
    pub theorem_placement: Vec<Placement>,
    /// Intervals `(Y_k, Y_{k+1})` with `Y_0 = Y_{n+1} = x(b)`, each expected
    /// to hold exactly one zero.
    pub corollary_placement: Vec<Placement>,
    pub theorem_holds: bool,
    pub corollary_holds: bool,
    pub connection: Option<ConnectionReport>,
}

impl InterlacingReport {
    pub fn pass(&self) -> bool {
        self.theorem_holds && self.corollary_holds
    }
}

fn instance(kind: FamilyKind, params: &BTreeMap<String, f64>, nn: usize) -> Result<FamilySpec> {
    if !kind.is_finite() {
        return Err(Error::NotApplicable(format!(
            "{} has infinite support",
            kind.slug()
        )));
    }
    let mut p = params.clone();
    p.insert("N".into(), nn as f64);
    FamilySpec::new(kind, p)
}

/// Largest relative gap between `omega(s+1)/omega(s)` of the two instances
/// over `s = a..b-2`.
fn weight_mismatch(fam: &FamilySpec, fam1: &FamilySpec) -> Result<f64> {
    let nn = fam.support_size().unwrap_or(0);
    let mut worst: f64 = 0.0;
    for i in 0..nn.saturating_sub(1) {
        let s = fam.support_start + i as f64;
        let (r, r1) = (weight_ratio(fam, s, false)?, weight_ratio(fam1, s, false)?);
        worst = worst.max((r - r1).abs() / r.abs().max(r1.abs()));
    }
    Ok(worst)
}

fn count_in(zeros: &[f64], lo: f64, hi: f64) -> usize {
    let (lo, hi) = (lo.min(hi), lo.max(hi));
    zeros.iter().filter(|&&z| z > lo && z < hi).count()
}

pub fn interlace_check(
    kind: FamilyKind,
    params: &BTreeMap<String, f64>,
    n: usize,
    nn: usize,
) -> Result<InterlacingReport> {
    interlace_check_with(kind, params, n, nn, InterlaceOptions::default())
}

/// Compares the zeros of `P_n(.; N)` and `P_n(.; N+1)` against the interlacing
/// trichotomy and the one-zero-per-interval rule for monotone grids.
pub fn interlace_check_with(
    kind: FamilyKind,
    params: &BTreeMap<String, f64>,
    n: usize,
    nn: usize,
    opts: InterlaceOptions,
) -> Result<InterlacingReport> {
    let fam = instance(kind, params, nn)?;
    let fam1 = instance(kind, params, nn + 1)?;
    let mismatch = weight_mismatch(&fam, &fam1)?;
    let same_weight = mismatch <= SAME_WEIGHT_TOL;
    if opts.require_same_weight && !same_weight {
        return Err(Error::NotApplicable(format!(
            "{} weight depends on N (ratio mismatch {mismatch:.2e})",
            kind.slug()
        )));
    }
    let zeros_n = find_zeros(&ZeroProblem::new(fam.clone(), n)?)?;
    let zeros_n1 = find_zeros(&ZeroProblem::new(fam1.clone(), n)?)?;
    let b = fam.support_end.expect("finite family");
    let x_b = fam.x_at(b);
    let at_b = fam.eval_s_scaled(n, b)?;
    let p_at_xb = at_b.value / at_b.scale.max(f64::MIN_POSITIVE);

    let y = zeros_n.sorted_x();
    let z = zeros_n1.sorted_x();
    let split = y.windows(2).position(|w| w[0] < x_b && x_b < w[1]);
    let case = if p_at_xb.abs() <= AT_XB_TOL {
        InterlaceCase::Identical
    } else if split.is_some() {
        InterlaceCase::SplitAtXb
    } else {
        InterlaceCase::InteriorInterlace
    };

    let place = |lo: f64, hi: f64| Placement {
        lo,
        hi,
        count: count_in(&z, lo, hi),
        expected: 1,
    };
    let (theorem_placement, theorem_holds) = match case {
        InterlaceCase::Identical => {
            let same = y
                .iter()
                .zip(&z)
                .all(|(a, b)| (a - b).abs() <= 1e-8 * a.abs().max(1.0));
            (Vec::new(), same)
        }
        _ => {
            let mut p = Vec::new();
            for w in y.windows(2) {
                if w[0] < x_b && x_b < w[1] {
                    p.push(place(w[0], x_b));
                    p.push(place(x_b, w[1]));
                } else {
                    p.push(place(w[0], w[1]));
                }
            }
            let ok = p.iter().all(|q| q.count >= 1);
            (p, ok)
        }
    };

    let mut ends = Vec::with_capacity(n + 1);
    match fam.grid.direction() {
        Direction::Increasing => {
            ends.extend_from_slice(&y);
            ends.push(x_b);
        }
        Direction::Decreasing => {
            ends.push(x_b);
            ends.extend_from_slice(&y);
        }
    }
    let corollary_placement: Vec<Placement> = ends.windows(2).map(|w| place(w[0], w[1])).collect();
    let corollary_holds =
        case == InterlaceCase::Identical || corollary_placement.iter().all(|p| p.count == 1);

    let connection = if same_weight {
        let xs = default_samples(&fam);
        Some(connection_report(&fam, &fam1, n, &xs)?)
    } else {
        None
    };
    Ok(InterlacingReport {
        kind,
        params: fam.params.clone(),
        n,
        support: nn,
        same_weight,
        weight_mismatch: mismatch,
        x_b,
        p_at_xb,
        zeros_n,
        zeros_n1,
        case,
        theorem_placement,
        corollary_placement,
        theorem_holds,
        corollary_holds,
        connection,
    })
}

/// Midpoints `x(a + 1/2), ..., x(b - 1/2)` of the N-instance support.
pub fn default_samples(fam: &FamilySpec) -> Vec<f64> {
    let nn = fam.support_size().unwrap_or(0);
    (0..nn)
        .map(|i| fam.x_at(fam.support_start + i as f64 + 0.5))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectionReport {
    /// Largest relative residual of the connection identity over the samples.
    pub residual: f64,
    pub eta: f64,
    /// `1 + eta (P_{n-1} P_n' - P_{n-1}' P_n)` at `x(b)`.
    pub zeta: f64,
    /// `P_n(x(b); N+1) / P_n(x(b); N)` for the monic polynomials.
    pub observed_ratio: f64,
    /// `|P_n(x(b); N+1) - zeta P_n(x(b); N)|` relative.
    pub zeta_stated_residual: f64,
    /// `|P_n(x(b); N) - zeta P_n(x(b); N+1)|` relative.
    pub zeta_reciprocal_residual: f64,
    pub skipped: Vec<f64>,
    pub notes: Vec<String>,
}

/// Monic `prod (X - Y_k)`.
fn monic(zeros: &[f64], x: f64) -> f64 {
    zeros.iter().map(|&y| x - y).product()
}

fn monic_zeros(fam: &FamilySpec, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok(find_zeros(&ZeroProblem::new(fam.clone(), n)?)?.zeros_x)
}

fn derivative(zeros: &[f64], x: f64) -> f64 {
    let h = 1e-6 * x.abs().max(1.0);
    (monic(zeros, x + h) - monic(zeros, x - h)) / (2.0 * h)
}

/// Checks `P_n^{N+1}(X) = P_n^N(X) - eta P_n^{N+1}(x_b) W(X) / (X - x_b)`
/// with `W = P_{n-1}^N(x_b) P_n^N(X) - P_n^N(x_b) P_{n-1}^N(X)`, for monic
/// polynomials, together with the value relation at `x_b`.
pub fn connection_residual(
    kind: FamilyKind,
    params: &BTreeMap<String, f64>,
    n: usize,
    nn: usize,
    sample_x: &[f64],
) -> Result<ConnectionReport> {
    let fam = instance(kind, params, nn)?;
    let fam1 = instance(kind, params, nn + 1)?;
    let mismatch = weight_mismatch(&fam, &fam1)?;
    if mismatch > SAME_WEIGHT_TOL {
        return Err(Error::NotApplicable(format!(
            "{} weight depends on N (ratio mismatch {mismatch:.2e})",
            kind.slug()
        )));
    }
    connection_report(&fam, &fam1, n, sample_x)
}

fn connection_report(
    fam: &FamilySpec,
    fam1: &FamilySpec,
    n: usize,
    sample_x: &[f64],
) -> Result<ConnectionReport> {
    if n == 0 || n > fam.degree_max {
        return Err(Error::InvalidInput(format!(
            "degree n={n} outside 1..={}",
            fam.degree_max
        )));
    }
    let yn = monic_zeros(fam, n)?;
    let ym = monic_zeros(fam, n - 1)?;
    let yn1 = monic_zeros(fam1, n)?;

    let table = weight_table(fam1)?;
    let nn = fam.support_size().expect("finite family");
    let mass = table.masses();
    let norm: f64 = (0..nn)
        .map(|i| {
            let p = monic(&ym, fam.x_at(fam.support_start + i as f64));
            p * p * mass[i]
        })
        .sum();
    let eta = mass[nn] / norm;

    let x_b = fam.x_at(fam.support_end.expect("finite family"));
    let (pn_b, pm_b, pn1_b) = (monic(&yn, x_b), monic(&ym, x_b), monic(&yn1, x_b));
    let zeta = 1.0 + eta * (pm_b * derivative(&yn, x_b) - derivative(&ym, x_b) * pn_b);
    let observed_ratio = pn1_b / pn_b;
    let zeta_stated_residual = (pn1_b - zeta * pn_b).abs() / pn1_b.abs().max(pn_b.abs());
    let zeta_reciprocal_residual = (pn_b - zeta * pn1_b).abs() / pn1_b.abs().max(pn_b.abs());

    let mut residual: f64 = 0.0;
    let mut skipped = Vec::new();
    let mut notes = Vec::new();
    for &x in sample_x {
        if (x - x_b).abs() <= 1e-12 * x_b.abs().max(1.0) {
            skipped.push(x);
            notes.push(format!("X={x} is x(b), a removable singularity; skipped"));
            continue;
        }
        let (pn, pm) = (monic(&yn, x), monic(&ym, x));
        let corr = eta * pn1_b * (pm_b * pn - pn_b * pm) / (x - x_b);
        let lhs = monic(&yn1, x);
        let scale = lhs
            .abs()
            .max(pn.abs())
            .max(corr.abs())
            .max(f64::MIN_POSITIVE);
        residual = residual.max((lhs - (pn - corr)).abs() / scale);
    }
    Ok(ConnectionReport {
        residual,
        eta,
        zeta,
        observed_ratio,
        zeta_stated_residual,
        zeta_reciprocal_residual,
        skipped,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: &[(&str, f64)]) -> BTreeMap<String, f64> {
        p.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn hahn_three_zeros() {
        let p = params(&[("alpha", 0.0), ("beta", 0.0)]);
        let r = interlace_check(FamilyKind::Hahn, &p, 3, 8).unwrap();
        assert_eq!(r.case, InterlaceCase::InteriorInterlace);
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.corollary_placement.len(), 3);
        assert!((r.corollary_placement[2].hi - 8.0).abs() < 1e-12);
        assert!(r.connection.unwrap().residual < 1e-7);
    }

    #[test]
    fn krawtchouk_weight_depends_on_n() {
        let p = params(&[("alpha", 0.5)]);
        let err = interlace_check(FamilyKind::Krawtchouk, &p, 2, 5).unwrap_err();
        assert!(matches!(err, Error::NotApplicable(_)));
        let opts = InterlaceOptions {
            require_same_weight: false,
        };
        let r = interlace_check_with(FamilyKind::Krawtchouk, &p, 2, 5, opts).unwrap();
        assert!(r.pass());
        assert!((r.x_b - 5.0).abs() < 1e-12);
    }

    #[test]
    fn removable_point_is_skipped() {
        let p = params(&[("alpha", 0.0), ("beta", 0.0)]);
        let r = connection_residual(FamilyKind::Hahn, &p, 2, 6, &[0.5, 6.0, 2.5]).unwrap();
        assert_eq!(r.skipped, vec![6.0]);
        assert!(r.residual < 1e-7);
    }
}
