//! Difference-equation coefficients `A(s)`, `B(s)` of
//! `A y(s-1) + B y(s+1) + (c - A - B) y(s) = 0`, the ratio `f = B/A` and
//! its partial derivatives.
//!
//! Two tables are kept. The printed table is the catalog's published form.
//! The active table, used by every computation, equals the printed one
//! except for four families where the printed pair does not satisfy the
//! equation with constant `c`; there the active pair was re-derived and
//! checked against the zeros and the orthogonality of the induced weight.

use serde::{Deserialize, Serialize};

use super::{Core, FamilySpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientSource {
    Printed,
    Corrected,
}

fn finite_ab(s: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    if a.is_finite() && b.is_finite() {
        Ok((a, b))
    } else {
        Err(Error::Singularity {
            s,
            what: "pole of the A/B coefficients".into(),
        })
    }
}

fn check_den(s: f64, den: f64, what: &str) -> Result<()> {
    if den.abs() < 1e-300 || !den.is_finite() {
        Err(Error::Singularity {
            s,
            what: format!("{what} vanishes"),
        })
    } else {
        Ok(())
    }
}

impl Core {
    pub(crate) fn coefficient_source(&self) -> CoefficientSource {
        match self {
            Core::AlSalamCarlitz { .. }
            | Core::QBessel { .. }
            | Core::LittleQLaguerre { .. }
            | Core::DualQHahn { .. } => CoefficientSource::Corrected,
            _ => CoefficientSource::Printed,
        }
    }

    pub(crate) fn ab_printed(&self, s: f64) -> Result<(f64, f64)> {
        use Core::*;
        let (a, b) = match *self {
            Hahn { alpha, beta, nn } => (s * (-s + alpha + nn), (s + beta + 1.0) * (-s + nn - 1.0)),
            Charlier { alpha } => (s, alpha),
            Krawtchouk { alpha, nn } => ((1.0 - alpha) * s, alpha * (-s + nn - 1.0)),
            Meixner { alpha, beta } => (s, alpha * (s + beta)),
            Racah {
                a: ra,
                alpha,
                beta,
                nn,
            } => {
                check_den(s, s * (2.0 * s + 1.0) * (s + 1.0), "2s(2s+1)(s+1)")?;
                (
                    (s - ra) * (s + ra + nn) * (s - ra - alpha - nn) * (s + ra - beta)
                        / (2.0 * s * (2.0 * s + 1.0)),
                    (s + ra + 1.0)
                        * (s - ra - nn + 1.0)
                        * (s + ra + alpha + nn + 1.0)
                        * (s - ra + beta + 1.0)
                        / (2.0 * (s + 1.0) * (2.0 * s + 1.0)),
                )
            }
            DualHahn { a: ra, alpha, nn } => {
                check_den(s, s * (2.0 * s + 1.0) * (s + 1.0), "2s(2s+1)(s+1)")?;
                (
                    (s - ra) * (s + ra + nn) * (s + ra - alpha) / (2.0 * s * (2.0 * s + 1.0)),
                    (s + ra + 1.0) * (-s + ra + nn - 1.0) * (s - ra + alpha + 1.0)
                        / (2.0 * (s + 1.0) * (2.0 * s + 1.0)),
                )
            }
            QMeixner { q, alpha, beta } => {
                let qs = q.powf(s);
                (
                    (1.0 - qs) * (1.0 + alpha * beta * qs),
                    alpha * qs * (1.0 - beta * qs * q),
                )
            }
            AlSalamCarlitz { q, alpha } => {
                let qm = q.powf(-s);
                ((1.0 - qm) * (alpha - qm), alpha * q)
            }
            QHahn { q, alpha, beta, nn } => {
                let qs = q.powf(s);
                (
                    alpha * q * (1.0 - qs) * (beta - q.powf(s - nn)),
                    (1.0 - q.powf(s - nn + 1.0)) * (1.0 - alpha * qs * q),
                )
            }
            QKrawtchouk { q, alpha, nn } => (alpha * (q.powf(s) - 1.0), 1.0 - q.powf(s - nn + 1.0)),
            AffineQKrawtchouk { q, alpha, nn } => {
                let qs = q.powf(s);
                (
                    alpha * q.powf(s - nn + 1.0) * (qs - 1.0),
                    (1.0 - q.powf(s - nn + 1.0)) * (1.0 - alpha * qs * q),
                )
            }
            QuantumQKrawtchouk { q, alpha, nn } => {
                let qs = q.powf(s);
                (
                    (1.0 - qs) * (alpha - q.powf(s - nn)),
                    -qs * (1.0 - q.powf(s - nn + 1.0)),
                )
            }
            QBessel { q, alpha } => (q.powf(s) - 1.0, alpha),
            LittleQJacobi { q, alpha, beta } => {
                let qm = q.powf(-s);
                (
                    qm * (q.powf(s) - 1.0),
                    alpha * qm * (beta * q.powf(s + 1.0) - 1.0),
                )
            }
            LittleQLaguerre { q, alpha } => (q.powf(s) - 1.0, alpha * q.powf(-s)),
            QRacah {
                q,
                a: ra,
                alpha,
                beta,
                nn,
            } => {
                let p = |e: f64| q.powf(e) - 1.0;
                let d = (q - 1.0).powi(2) * p(2.0 * s);
                check_den(
                    s,
                    d * p(2.0 * s - 1.0) * p(2.0 * s + 1.0),
                    "(q^{2s}-1)(q^{2s-1}-1)(q^{2s+1}-1)",
                )?;
                (
                    -4.0 * q.powf(alpha + beta + 2.5)
                        * p(s - ra)
                        * p(s + ra + nn - 1.0)
                        * p(s - ra - alpha - nn)
                        * p(s + ra - beta - 1.0)
                        / (d * p(2.0 * s - 1.0)),
                    -4.0 * q.powf(1.5)
                        * p(s + ra)
                        * p(s - ra - nn + 1.0)
                        * p(s + ra + alpha + nn)
                        * p(s - ra + beta + 1.0)
                        / (d * p(2.0 * s + 1.0)),
                )
            }
            DualQHahn {
                q,
                a: ra,
                alpha,
                nn,
            } => {
                let p = |e: f64| q.powf(e) - 1.0;
                let d = (q - 1.0).powi(2) * p(2.0 * s);
                check_den(
                    s,
                    d * p(2.0 * s - 1.0) * p(2.0 * s + 1.0),
                    "(q^{2s}-1)(q^{2s-1}-1)(q^{2s+1}-1)",
                )?;
                (
                    -4.0 * q.powf(-ra + alpha - nn + 2.5)
                        * p(s - ra)
                        * p(s + ra + nn - 1.0)
                        * p(s + ra - alpha - 1.0)
                        / (d * p(2.0 * s - 1.0)),
                    -4.0 * q.powf(s + 1.5)
                        * p(s + ra)
                        * p(s - ra - nn + 1.0)
                        * p(s - ra + alpha + 1.0)
                        / (d * p(2.0 * s + 1.0)),
                )
            }
        };
        finite_ab(s, a, b)
    }

    pub(crate) fn ab_active(&self, s: f64) -> Result<(f64, f64)> {
        use Core::*;
        match *self {
            // Printed pair times q^{2s}: same ratio, constant c.
            AlSalamCarlitz { q, alpha } => {
                let qs = q.powf(s);
                finite_ab(s, (qs - 1.0) * (alpha * qs - 1.0), alpha * qs * qs * q)
            }
            QBessel { q, alpha } => finite_ab(s, q.powf(-s) - 1.0, alpha),
            // The beta = 0 case of the little q-Jacobi table.
            LittleQLaguerre { q, alpha } => {
                let qm = q.powf(-s);
                finite_ab(s, qm - 1.0, alpha * qm)
            }
            // Limit alpha -> infinity of the q-Racah table (q-Racah's beta
            // playing the role of alpha).
            DualQHahn {
                q,
                a: ra,
                alpha,
                nn,
            } => {
                let p = |e: f64| q.powf(e) - 1.0;
                let d = (q - 1.0).powi(2) * p(2.0 * s);
                check_den(
                    s,
                    d * p(2.0 * s - 1.0) * p(2.0 * s + 1.0),
                    "(q^{2s}-1)(q^{2s-1}-1)(q^{2s+1}-1)",
                )?;
                finite_ab(
                    s,
                    -4.0 * q.powf(s - ra + alpha - nn + 2.5)
                        * p(s - ra)
                        * p(s + ra + nn - 1.0)
                        * p(s + ra - alpha - 1.0)
                        / (d * p(2.0 * s - 1.0)),
                    4.0 * q.powf(1.5) * p(s + ra) * p(s - ra - nn + 1.0) * p(s - ra + alpha + 1.0)
                        / (d * p(2.0 * s + 1.0)),
                )
            }
            _ => self.ab_printed(s),
        }
    }
}

fn ratio(s: f64, (a, b): (f64, f64)) -> Result<f64> {
    if a == 0.0 || !(b / a).is_finite() {
        return Err(Error::Singularity {
            s,
            what: "A(s) vanishes".into(),
        });
    }
    Ok(b / a)
}

impl FamilySpec {
    pub fn coefficient_source(&self) -> CoefficientSource {
        self.core.coefficient_source()
    }

    /// Active `(A, B)` at s.
    pub fn coeffs_ab(&self, s: f64) -> Result<(f64, f64)> {
        self.core.ab_active(s)
    }

    /// `omega(s+1)/omega(s)` in a form that cannot overflow, for the
    /// active tables on the decreasing q-grid (where `A, B ~ q^-s`).
    pub(crate) fn weight_ratio_closed(&self, s: f64) -> Option<f64> {
        let q1 = |q: f64| q.powf(s + 1.0);
        match self.core {
            Core::QBessel { q, alpha } => Some(alpha * q.powf(s) / (1.0 - q1(q))),
            Core::LittleQLaguerre { q, alpha } => Some(alpha / (1.0 - q1(q))),
            Core::LittleQJacobi { q, alpha, beta } => {
                Some(alpha * (1.0 - beta * q1(q)) / (1.0 - q1(q)))
            }
            _ => None,
        }
    }

    /// Published `(A, B)` at s, kept for the consistency reports.
    pub fn printed_coeffs_ab(&self, s: f64) -> Result<(f64, f64)> {
        self.core.ab_printed(s)
    }

    /// `f(s) = B(s)/A(s)` from the active table.
    pub fn monotonicity_f(&self, s: f64) -> Result<f64> {
        ratio(s, self.coeffs_ab(s)?)
    }

    /// `B/A` from the published table.
    pub fn printed_f(&self, s: f64) -> Result<f64> {
        ratio(s, self.printed_coeffs_ab(s)?)
    }

    /// `(df/ds, df/dparam)` at s. `df/dparam` uses a closed form where one
    /// is available, otherwise a central difference.
    pub fn f_partials(&self, s: f64, param: &str) -> Result<(f64, f64)> {
        let f1 = self.f_s_derivative(s)?;
        let f2 = match self.f_param_closed_form(s, param)? {
            Some(v) => v,
            None => self.f_param_numeric(s, param)?,
        };
        Ok((f1, f2))
    }

    /// Both partials by central differences.
    pub fn f_partials_numeric(&self, s: f64, param: &str) -> Result<(f64, f64)> {
        Ok((self.f_s_derivative(s)?, self.f_param_numeric(s, param)?))
    }

    /// Whether [`FamilySpec::f_partials`] uses a closed form for `param`.
    pub fn has_closed_form_partial(&self, param: &str) -> bool {
        use super::FamilyKind as K;
        matches!(
            (self.kind, param),
            (
                K::Hahn | K::Racah | K::QMeixner | K::QRacah,
                "alpha" | "beta"
            )
        )
    }

    fn f_s_derivative(&self, s: f64) -> Result<f64> {
        let h = 1e-6 * s.abs().max(1.0);
        Ok((self.monotonicity_f(s + h)? - self.monotonicity_f(s - h)?) / (2.0 * h))
    }

    fn f_param_numeric(&self, s: f64, param: &str) -> Result<f64> {
        if param == "N" {
            return Err(Error::InvalidInput(
                "N is an integer parameter and cannot be varied".into(),
            ));
        }
        let v = self.param(param)?;
        let h = 1e-6 * v.abs().max(1.0);
        let up = self.with_param_unchecked(param, v + h)?.monotonicity_f(s)?;
        let dn = self.with_param_unchecked(param, v - h)?.monotonicity_f(s)?;
        Ok((up - dn) / (2.0 * h))
    }

    fn f_param_closed_form(&self, s: f64, param: &str) -> Result<Option<f64>> {
        if !self.has_closed_form_partial(param) {
            return Ok(None);
        }
        let v = match (self.core, param) {
            (Core::Hahn { alpha, beta, nn }, "alpha") => {
                (s + beta + 1.0) * (s - nn + 1.0) / (s * (-s + alpha + nn).powi(2))
            }
            (Core::Hahn { alpha, nn, .. }, "beta") => (-s + nn - 1.0) / (s * (-s + alpha + nn)),
            (Core::Racah { a, alpha, beta, nn }, "alpha") => {
                s * (2.0 * s + 1.0) * (s + a + 1.0) * (s - a - nn + 1.0) * (s - a + beta + 1.0)
                    / ((s + 1.0)
                        * (s - a)
                        * (s + a + nn)
                        * (s - a - alpha - nn).powi(2)
                        * (s + a - beta))
            }
            (Core::Racah { a, alpha, beta, nn }, "beta") => {
                s * (2.0 * s + 1.0)
                    * (s + a + 1.0)
                    * (s - a - nn + 1.0)
                    * (s + a + alpha + nn + 1.0)
                    / ((s + 1.0)
                        * (s - a)
                        * (s + a + nn)
                        * (s - a - alpha - nn)
                        * (s + a - beta).powi(2))
            }
            (Core::QMeixner { q, alpha, beta }, "alpha") => {
                let qs = q.powf(s);
                qs * (1.0 - beta * qs * q) / ((1.0 - qs) * (1.0 + alpha * beta * qs).powi(2))
            }
            (Core::QMeixner { q, alpha, beta }, "beta") => {
                let qs = q.powf(s);
                -alpha * qs * qs * (alpha + q) / ((1.0 - qs) * (1.0 + alpha * beta * qs).powi(2))
            }
            (
                Core::QRacah {
                    q,
                    a,
                    alpha,
                    beta,
                    nn,
                },
                "alpha",
            ) => {
                let p = |e: f64| q.powf(e) - 1.0;
                q.ln()
                    * p(2.0 * s)
                    * p(2.0 * s - 1.0)
                    * p(s + a)
                    * p(s - a - nn + 1.0)
                    * p(s - a + beta + 1.0)
                    / (q.powf(alpha + beta + 1.0)
                        * p(2.0 * s + 1.0)
                        * p(s - a)
                        * p(s + a + nn - 1.0)
                        * p(s - a - alpha - nn).powi(2)
                        * p(s + a - beta - 1.0))
            }
            (
                Core::QRacah {
                    q,
                    a,
                    alpha,
                    beta,
                    nn,
                },
                "beta",
            ) => {
                let p = |e: f64| q.powf(e) - 1.0;
                q.ln()
                    * p(2.0 * s)
                    * p(2.0 * s - 1.0)
                    * p(s + a)
                    * p(s - a - nn + 1.0)
                    * p(s + a + alpha + nn)
                    / (q.powf(alpha + beta + 1.0)
                        * p(2.0 * s + 1.0)
                        * p(s - a)
                        * p(s + a + nn - 1.0)
                        * p(s - a - alpha - nn)
                        * p(s + a - beta - 1.0).powi(2))
            }
            _ => return Ok(None),
        };
        if v.is_finite() {
            Ok(Some(v))
        } else {
            Err(Error::Singularity {
                s,
                what: format!("df/d{param} has a pole"),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::families::{make_family, FamilyKind};

    #[test]
    fn table_values() {
        let h = make_family(
            FamilyKind::Hahn,
            &[("alpha", 0.0), ("beta", 0.0), ("N", 5.0)],
        )
        .unwrap();
        assert_eq!(h.coeffs_ab(1.0).unwrap(), (4.0, 6.0));
        assert_eq!(h.monotonicity_f(1.0).unwrap(), 1.5);
        let c = make_family(FamilyKind::Charlier, &[("alpha", 2.0)]).unwrap();
        assert_eq!(c.coeffs_ab(3.0).unwrap(), (3.0, 2.0));
        let k = make_family(
            FamilyKind::QKrawtchouk,
            &[("alpha", 1.0), ("q", 0.5), ("N", 4.0)],
        )
        .unwrap();
        let (a, b) = k.coeffs_ab(1.0).unwrap();
        assert!((a + 0.5).abs() < 1e-15 && (b + 3.0).abs() < 1e-15);
    }

    #[test]
    fn hahn_partials() {
        let h = make_family(
            FamilyKind::Hahn,
            &[("alpha", 0.0), ("beta", 0.0), ("N", 5.0)],
        )
        .unwrap();
        let (_, fa) = h.f_partials(1.0, "alpha").unwrap();
        let (_, fb) = h.f_partials(1.0, "beta").unwrap();
        assert!((fa + 0.375).abs() < 1e-15);
        assert!((fb - 0.75).abs() < 1e-15);
    }

    #[test]
    fn charlier_partials() {
        let c = make_family(FamilyKind::Charlier, &[("alpha", 2.0)]).unwrap();
        let s = 1.5;
        let (f1, f2) = c.f_partials(s, "alpha").unwrap();
        assert!((f1 + 2.0 / (s * s)).abs() < 1e-8);
        assert!((f2 - 1.0 / s).abs() < 1e-8);
    }

    #[test]
    fn racah_pole() {
        let r = make_family(
            FamilyKind::Racah,
            &[("a", 1.0), ("alpha", 0.0), ("beta", 0.5), ("N", 6.0)],
        )
        .unwrap();
        assert!(r.coeffs_ab(0.0).is_err());
        assert!(r.coeffs_ab(-0.5).is_err());
    }
}
