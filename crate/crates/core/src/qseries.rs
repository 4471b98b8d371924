//! Terminating hypergeometric and basic hypergeometric series, plus the
//! closed-form summation identities used to locate zeros.
//!
//! Basic series follow the standard convention
//!
//! ```text
//! r phi s (a; b; q, z) = sum_k (a;q)_k / (b;q)_k [(-1)^k q^{k(k-1)/2}]^{1+s-r} z^k / (q;q)_k
//! ```
//!
//! which carries `q^{binom(k,2)}` alongside the sign. The factor only
//! matters when `r > s + 1`; with it the degree-one zeros of the
//! Al-Salam-Carlitz family land inside the support.

use crate::dd::Dd;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const VANISH_TOL: f64 = 1e-13;

/// Rising factorial `(a)_k`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// `(a; q)_k = prod_{j<k} (1 - a q^j)`.
pub fn q_pochhammer(a: f64, q: f64, k: usize) -> f64 {
    let mut acc = 1.0;
    let mut qj = 1.0;
    for _ in 0..k {
        acc *= 1.0 - a * qj;
        qj *= q;
    }
    acc
}

/// A terminating series. Parameters are double-double so that structural
/// values such as `q^-n` stay exactly consistent with `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec {
    pub numerator: Vec<Dd>,
    pub denominator: Vec<Dd>,
    pub argument: Dd,
    /// `None` for an ordinary series, `Some(q)` for a basic one.
    pub base: Option<f64>,
    /// Terms `k = 0..=degree` are summed.
    pub degree: usize,
}

fn widen(v: Vec<f64>) -> Vec<Dd> {
    v.into_iter().map(Dd::from).collect()
}

impl SeriesSpec {
    pub fn hyper(numerator: Vec<f64>, denominator: Vec<f64>, argument: f64, degree: usize) -> Self {
        Self::hyper_dd(
            widen(numerator),
            widen(denominator),
            argument.into(),
            degree,
        )
    }

    pub fn basic(
        numerator: Vec<f64>,
        denominator: Vec<f64>,
        q: f64,
        argument: f64,
        degree: usize,
    ) -> Self {
        Self::basic_dd(
            widen(numerator),
            widen(denominator),
            q,
            argument.into(),
            degree,
        )
    }

    pub fn hyper_dd(numerator: Vec<Dd>, denominator: Vec<Dd>, argument: Dd, degree: usize) -> Self {
        SeriesSpec {
            numerator,
            denominator,
            argument,
            base: None,
            degree,
        }
    }

    pub fn basic_dd(
        numerator: Vec<Dd>,
        denominator: Vec<Dd>,
        q: f64,
        argument: Dd,
        degree: usize,
    ) -> Self {
        SeriesSpec {
            numerator,
            denominator,
            argument,
            base: Some(q),
            degree,
        }
    }
}

/// `q^m` in double-double.
pub fn qpow(q: f64, m: i32) -> Dd {
    Dd::from(q).powi(m)
}

/// `q^e`, exact in double-double when `e` is an integer. Otherwise `e` is
/// split as `k + r` with `r` exact, so that `q^e / q^k - 1` keeps full
/// relative accuracy near the grid points.
pub fn qpow_real(q: f64, e: f64) -> Dd {
    if e.abs() >= 1e6 || !e.is_finite() {
        return Dd::from(q.powf(e));
    }
    let k = e.round();
    let r = e - k;
    let base = qpow(q, k as i32);
    if r == 0.0 {
        base
    } else {
        base * (Dd::ONE + (r * q.ln()).exp_m1())
    }
}

/// Sum of a terminating series together with the sum of absolute terms.
/// Terms are carried in double-double, so the rounding error of `value`
/// is of order `1e-30 * scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub scale: f64,
}

pub fn eval_terminating_series(spec: &SeriesSpec) -> Result<f64> {
    eval_terminating_series_scaled(spec).map(|r| r.value)
}

pub fn eval_terminating_series_scaled(spec: &SeriesSpec) -> Result<SeriesSum> {
    let n = spec.degree;
    if let Some(q) = spec.base {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidInput(format!(
                "series base requires 0 < q < 1 (got q={q})"
            )));
        }
    }
    // Reject vanishing denominator factors before summing.
    for &b in &spec.denominator {
        let bh = b.hi;
        let mut qj = Dd::from(1.0);
        for j in 0..n {
            let factor = match spec.base {
                None => b + j as f64,
                Some(q) => {
                    let f = 1.0 - b * qj;
                    qj *= q;
                    f
                }
            };
            if factor.hi.abs() < VANISH_TOL * bh.abs().max(1.0) {
                return Err(Error::UndefinedSeries {
                    param: bh,
                    k: j + 1,
                });
            }
        }
    }
    let one = Dd::from(1.0);
    let mut term = one;
    let mut sum = one;
    let mut scale = 1.0;
    match spec.base {
        None => {
            for k in 0..n {
                let kf = k as f64;
                let num = spec.numerator.iter().fold(one, |acc, &a| acc * (a + kf));
                let den = spec.denominator.iter().fold(one, |acc, &b| acc * (b + kf));
                term = term * num / den * spec.argument / (kf + 1.0);
                sum += term;
                scale += term.hi.abs();
            }
        }
        Some(q) => {
            let e = 1 + spec.denominator.len() as i32 - spec.numerator.len() as i32;
            let mut qk = one;
            for _ in 0..n {
                let num = spec
                    .numerator
                    .iter()
                    .fold(one, |acc, &a| acc * (1.0 - a * qk));
                let den = spec
                    .denominator
                    .iter()
                    .fold(one, |acc, &b| acc * (1.0 - b * qk));
                // [(-1)^k q^{C(k,2)}] grows by (-q^k) from k to k+1.
                let sign_q = (-qk).powi(e);
                term = term * num / den * sign_q * spec.argument / (1.0 - qk * q);
                sum += term;
                scale += term.hi.abs();
                qk *= q;
            }
        }
    }
    Ok(SeriesSum {
        value: sum.to_f64(),
        scale,
    })
}

/// Summation identities for terminating series at unit argument.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "identity", rename_all = "snake_case")]
pub enum Identity {
    /// `2F1(-n, b; c; 1) = (c-b)_n / (c)_n`
    ChuVandermonde { n: usize, b: f64, c: f64 },
    /// Balanced `3F2(-n, a, b; c, 1+a+b-c-n; 1) = (c-a)_n (c-b)_n / ((c)_n (c-a-b)_n)`
    Sheppard { n: usize, a: f64, b: f64, c: f64 },
    /// `3phi2(q^-n, a, b; c, a b q^{1-n}/c; q, q)
    ///  = (c/a;q)_n (c/b;q)_n / ((c;q)_n (c/(ab);q)_n)`
    QPfaffSaalschutz {
        n: usize,
        a: f64,
        b: f64,
        c: f64,
        q: f64,
    },
    /// `2phi1(q^-n, b; c; q, q) = (c/b;q)_n b^n / (c;q)_n`
    QChuVandermonde { n: usize, b: f64, c: f64, q: f64 },
}

fn nonzero(x: f64, what: &str) -> Result<f64> {
    if x.abs() < VANISH_TOL || !x.is_finite() {
        Err(Error::InvalidInput(format!(
            "identity undefined: {what} vanishes"
        )))
    } else {
        Ok(x)
    }
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "identity base requires 0 < q < 1 (got q={q})"
        )))
    }
}

impl Identity {
    /// Racah instance: `3F2(-n, alpha+beta+n+1, 2a-beta; 2a+alpha+N+1, 1-N; 1)`.
    pub fn racah(a: f64, alpha: f64, beta: f64, big_n: f64, n: usize) -> Self {
        Identity::Sheppard {
            n,
            a: alpha + beta + n as f64 + 1.0,
            b: 2.0 * a - beta,
            c: 2.0 * a + alpha + big_n + 1.0,
        }
    }

    /// Dual Hahn instance: `2F1(-n, 2a-alpha; 1-N; 1)`.
    pub fn dual_hahn(a: f64, alpha: f64, big_n: f64, n: usize) -> Self {
        Identity::ChuVandermonde {
            n,
            b: 2.0 * a - alpha,
            c: 1.0 - big_n,
        }
    }

    /// q-Racah instance:
    /// `3phi2(q^-n, q^{alpha+beta+n+1}, q^{2a-beta-1}; q^{2a+alpha+N}, q^{1-N}; q, q)`.
    pub fn q_racah(q: f64, a: f64, alpha: f64, beta: f64, big_n: f64, n: usize) -> Self {
        Identity::QPfaffSaalschutz {
            n,
            a: q.powf(alpha + beta + n as f64 + 1.0),
            b: q.powf(2.0 * a - beta - 1.0),
            c: q.powf(2.0 * a + alpha + big_n),
            q,
        }
    }

    /// Dual q-Hahn instance: `2phi1(q^-n, q^{2a-alpha-1}; q^{1-N}; q, q)`.
    pub fn dual_q_hahn(q: f64, a: f64, alpha: f64, big_n: f64, n: usize) -> Self {
        Identity::QChuVandermonde {
            n,
            b: q.powf(2.0 * a - alpha - 1.0),
            c: q.powf(1.0 - big_n),
            q,
        }
    }

    /// The series side as a [`SeriesSpec`].
    pub fn series(&self) -> SeriesSpec {
        match *self {
            Identity::ChuVandermonde { n, b, c } => {
                SeriesSpec::hyper(vec![-(n as f64), b], vec![c], 1.0, n)
            }
            Identity::Sheppard { n, a, b, c } => {
                let d = 1.0 + a + b - c - n as f64;
                SeriesSpec::hyper(vec![-(n as f64), a, b], vec![c, d], 1.0, n)
            }
            Identity::QPfaffSaalschutz { n, a, b, c, q } => {
                let d = Dd::from(a) * b * qpow(q, 1 - n as i32) / c;
                SeriesSpec::basic_dd(
                    vec![qpow(q, -(n as i32)), a.into(), b.into()],
                    vec![c.into(), d],
                    q,
                    q.into(),
                    n,
                )
            }
            Identity::QChuVandermonde { n, b, c, q } => SeriesSpec::basic_dd(
                vec![qpow(q, -(n as i32)), b.into()],
                vec![c.into()],
                q,
                q.into(),
                n,
            ),
        }
    }

    pub fn series_value(&self) -> Result<f64> {
        eval_terminating_series(&self.series())
    }
}

/// Closed-form product side of an identity.
pub fn identity_value(identity: &Identity) -> Result<f64> {
    match *identity {
        Identity::ChuVandermonde { n, b, c } => {
            let den = nonzero(pochhammer(c, n), "(c)_n")?;
            Ok(pochhammer(c - b, n) / den)
        }
        Identity::Sheppard { n, a, b, c } => {
            let d = 1.0 + a + b - c - n as f64;
            nonzero(pochhammer(d, n), "(d)_n")?;
            let den = nonzero(pochhammer(c, n), "(c)_n")?
                * nonzero(pochhammer(c - a - b, n), "(c-a-b)_n")?;
            Ok(pochhammer(c - a, n) * pochhammer(c - b, n) / den)
        }
        Identity::QPfaffSaalschutz { n, a, b, c, q } => {
            check_q(q)?;
            nonzero(a, "a")?;
            nonzero(b, "b")?;
            nonzero(c, "c")?;
            let d = a * b * q.powi(1 - n as i32) / c;
            nonzero(q_pochhammer(d, q, n), "(abq^{1-n}/c;q)_n")?;
            let den = nonzero(q_pochhammer(c, q, n), "(c;q)_n")?
                * nonzero(q_pochhammer(c / (a * b), q, n), "(c/ab;q)_n")?;
            Ok(q_pochhammer(c / a, q, n) * q_pochhammer(c / b, q, n) / den)
        }
        Identity::QChuVandermonde { n, b, c, q } => {
            check_q(q)?;
            nonzero(b, "b")?;
            let den = nonzero(q_pochhammer(c, q, n), "(c;q)_n")?;
            Ok(q_pochhammer(c / b, q, n) * b.powi(n as i32) / den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(2.0, 3), 24.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
    }

    #[test]
    fn q_pochhammer_values() {
        assert_eq!(q_pochhammer(0.3, 0.5, 1), 0.7);
        assert_eq!(q_pochhammer(0.0, 0.5, 5), 1.0);
        let q: f64 = 0.5;
        assert!(q_pochhammer(q.powi(-2), q, 3).abs() < 1e-15);
    }

    #[test]
    fn two_term_series() {
        let (b, c, z) = (1.7, 2.3, 0.4);
        let v = eval_terminating_series(&SeriesSpec::hyper(vec![-1.0, b], vec![c], z, 1)).unwrap();
        assert!((v - (1.0 - b * z / c)).abs() < 1e-15);
        let v =
            eval_terminating_series(&SeriesSpec::hyper(vec![-4.0, b], vec![c], 0.0, 4)).unwrap();
        assert_eq!(v, 1.0);
        let v =
            eval_terminating_series(&SeriesSpec::hyper(vec![-3.0, 0.0, b], vec![c, 0.5], 1.0, 3))
                .unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn vanishing_denominator() {
        let err = eval_terminating_series(&SeriesSpec::hyper(vec![-3.0, 1.0], vec![-1.0], 1.0, 3))
            .unwrap_err();
        assert_eq!(err, Error::UndefinedSeries { param: -1.0, k: 2 });
    }

    #[test]
    fn chu_vandermonde_degree_one() {
        let (b, c) = (0.7, 2.5);
        let id = Identity::ChuVandermonde { n: 1, b, c };
        assert!((identity_value(&id).unwrap() - (c - b) / c).abs() < 1e-15);
    }
}
