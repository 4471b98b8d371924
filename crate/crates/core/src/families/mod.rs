//! Catalog of classical discrete orthogonal polynomial families: parameter
//! validation, grid binding, series evaluation and difference-equation
//! coefficients.

mod catalog;
mod coeffs;
mod sampling;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::grid::Grid;

use crate::qseries::{
    eval_terminating_series_scaled, q_pochhammer, qpow, qpow_real, SeriesSpec, SeriesSum,
};

pub use catalog::{catalog, CatalogEntry, Claim, ParamInfo};
pub use coeffs::CoefficientSource;
pub use sampling::{sample_params, sample_same_weight_params};

/// Degree cap for families with infinite support.
pub const INFINITE_DEGREE_CAP: usize = 30;
/// Largest admissible support size for finite families.
pub const MAX_SUPPORT: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    Hahn,
    Charlier,
    Krawtchouk,
    Meixner,
    Racah,
    DualHahn,
    QMeixner,
    QCharlier,
    AlSalamCarlitzII,
    AlSalamCarlitzI,
    QHahn,
    QKrawtchouk,
    AffineQKrawtchouk,
    QuantumQKrawtchouk,
    QBessel,
    LittleQJacobi,
    LittleQLaguerre,
    BigQJacobiSpecial,
    QLaguerre,
    QRacah,
    DualQHahn,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 21] = [
        FamilyKind::Hahn,
        FamilyKind::Charlier,
        FamilyKind::Krawtchouk,
        FamilyKind::Meixner,
        FamilyKind::Racah,
        FamilyKind::DualHahn,
        FamilyKind::QMeixner,
        FamilyKind::QCharlier,
        FamilyKind::AlSalamCarlitzII,
        FamilyKind::AlSalamCarlitzI,
        FamilyKind::QHahn,
        FamilyKind::QKrawtchouk,
        FamilyKind::AffineQKrawtchouk,
        FamilyKind::QuantumQKrawtchouk,
        FamilyKind::QBessel,
        FamilyKind::LittleQJacobi,
        FamilyKind::LittleQLaguerre,
        FamilyKind::BigQJacobiSpecial,
        FamilyKind::QLaguerre,
        FamilyKind::QRacah,
        FamilyKind::DualQHahn,
    ];

    /// Families carrying a zero-monotonicity claim of their own, plus the
    /// big q-Jacobi special case whose claim follows by substitution.
    pub const WITH_CLAIMS: [FamilyKind; 18] = [
        FamilyKind::Hahn,
        FamilyKind::Charlier,
        FamilyKind::Krawtchouk,
        FamilyKind::Meixner,
        FamilyKind::Racah,
        FamilyKind::DualHahn,
        FamilyKind::QMeixner,
        FamilyKind::AlSalamCarlitzII,
        FamilyKind::QHahn,
        FamilyKind::QKrawtchouk,
        FamilyKind::AffineQKrawtchouk,
        FamilyKind::QuantumQKrawtchouk,
        FamilyKind::QBessel,
        FamilyKind::LittleQJacobi,
        FamilyKind::LittleQLaguerre,
        FamilyKind::BigQJacobiSpecial,
        FamilyKind::QRacah,
        FamilyKind::DualQHahn,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            FamilyKind::Hahn => "hahn",
            FamilyKind::Charlier => "charlier",
            FamilyKind::Krawtchouk => "krawtchouk",
            FamilyKind::Meixner => "meixner",
            FamilyKind::Racah => "racah",
            FamilyKind::DualHahn => "dual-hahn",
            FamilyKind::QMeixner => "q-meixner",
            FamilyKind::QCharlier => "q-charlier",
            FamilyKind::AlSalamCarlitzII => "al-salam-carlitz-2",
            FamilyKind::AlSalamCarlitzI => "al-salam-carlitz-1",
            FamilyKind::QHahn => "q-hahn",
            FamilyKind::QKrawtchouk => "q-krawtchouk",
            FamilyKind::AffineQKrawtchouk => "affine-q-krawtchouk",
            FamilyKind::QuantumQKrawtchouk => "quantum-q-krawtchouk",
            FamilyKind::QBessel => "q-bessel",
            FamilyKind::LittleQJacobi => "little-q-jacobi",
            FamilyKind::LittleQLaguerre => "little-q-laguerre",
            FamilyKind::BigQJacobiSpecial => "big-q-jacobi",
            FamilyKind::QLaguerre => "q-laguerre",
            FamilyKind::QRacah => "q-racah",
            FamilyKind::DualQHahn => "dual-q-hahn",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            FamilyKind::Hahn => "Hahn",
            FamilyKind::Charlier => "Charlier",
            FamilyKind::Krawtchouk => "Krawtchouk",
            FamilyKind::Meixner => "Meixner",
            FamilyKind::Racah => "Racah",
            FamilyKind::DualHahn => "dual Hahn",
            FamilyKind::QMeixner => "q-Meixner",
            FamilyKind::QCharlier => "q-Charlier",
            FamilyKind::AlSalamCarlitzII => "Al-Salam-Carlitz II",
            FamilyKind::AlSalamCarlitzI => "Al-Salam-Carlitz I",
            FamilyKind::QHahn => "q-Hahn",
            FamilyKind::QKrawtchouk => "q-Krawtchouk",
            FamilyKind::AffineQKrawtchouk => "affine q-Krawtchouk",
            FamilyKind::QuantumQKrawtchouk => "quantum q-Krawtchouk",
            FamilyKind::QBessel => "q-Bessel",
            FamilyKind::LittleQJacobi => "little q-Jacobi",
            FamilyKind::LittleQLaguerre => "little q-Laguerre",
            FamilyKind::BigQJacobiSpecial => "big q-Jacobi (third parameter 0)",
            FamilyKind::QLaguerre => "q-Laguerre",
            FamilyKind::QRacah => "q-Racah",
            FamilyKind::DualQHahn => "dual q-Hahn",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        use FamilyKind::*;
        match self {
            Hahn => &["alpha", "beta", "N"],
            Charlier => &["alpha"],
            Krawtchouk => &["alpha", "N"],
            Meixner => &["alpha", "beta"],
            Racah => &["a", "alpha", "beta", "N"],
            DualHahn => &["a", "alpha", "N"],
            QMeixner | LittleQJacobi | BigQJacobiSpecial => &["alpha", "beta", "q"],
            QCharlier | AlSalamCarlitzII | AlSalamCarlitzI | QBessel | LittleQLaguerre
            | QLaguerre => &["alpha", "q"],
            QHahn => &["alpha", "beta", "q", "N"],
            QKrawtchouk | AffineQKrawtchouk | QuantumQKrawtchouk => &["alpha", "q", "N"],
            QRacah => &["a", "alpha", "beta", "q", "N"],
            DualQHahn => &["a", "alpha", "q", "N"],
        }
    }

    /// Finite support `s = a, ..., a+N-1`.
    pub fn is_finite(self) -> bool {
        self.param_names().contains(&"N")
    }

    /// Base family for kinds implemented by substitution.
    pub fn alias_of(self) -> Option<FamilyKind> {
        match self {
            FamilyKind::QCharlier => Some(FamilyKind::QMeixner),
            FamilyKind::AlSalamCarlitzI => Some(FamilyKind::AlSalamCarlitzII),
            FamilyKind::BigQJacobiSpecial => Some(FamilyKind::LittleQJacobi),
            FamilyKind::QLaguerre => Some(FamilyKind::LittleQLaguerre),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        FamilyKind::ALL
            .iter()
            .copied()
            .find(|k| k.slug() == key)
            .ok_or_else(|| Error::InvalidInput(format!("unknown family '{s}'")))
    }
}

impl Serialize for FamilyKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.slug())
    }
}

impl<'de> Deserialize<'de> for FamilyKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Base-family data after alias substitution. `nn` is the support size N.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Core {
    Hahn {
        alpha: f64,
        beta: f64,
        nn: f64,
    },
    Charlier {
        alpha: f64,
    },
    Krawtchouk {
        alpha: f64,
        nn: f64,
    },
    Meixner {
        alpha: f64,
        beta: f64,
    },
    Racah {
        a: f64,
        alpha: f64,
        beta: f64,
        nn: f64,
    },
    DualHahn {
        a: f64,
        alpha: f64,
        nn: f64,
    },
    QMeixner {
        q: f64,
        alpha: f64,
        beta: f64,
    },
    AlSalamCarlitz {
        q: f64,
        alpha: f64,
    },
    QHahn {
        q: f64,
        alpha: f64,
        beta: f64,
        nn: f64,
    },
    QKrawtchouk {
        q: f64,
        alpha: f64,
        nn: f64,
    },
    AffineQKrawtchouk {
        q: f64,
        alpha: f64,
        nn: f64,
    },
    QuantumQKrawtchouk {
        q: f64,
        alpha: f64,
        nn: f64,
    },
    QBessel {
        q: f64,
        alpha: f64,
    },
    LittleQJacobi {
        q: f64,
        alpha: f64,
        beta: f64,
    },
    LittleQLaguerre {
        q: f64,
        alpha: f64,
    },
    QRacah {
        q: f64,
        a: f64,
        alpha: f64,
        beta: f64,
        nn: f64,
    },
    DualQHahn {
        q: f64,
        a: f64,
        alpha: f64,
        nn: f64,
    },
}

/// Constant (in X) normalization applied on top of the base series.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Prefactor {
    One,
    AlSalamCarlitz { q: f64, alpha: f64 },
    Quantum { q: f64, alpha: f64, nn: f64 },
    BigQJacobi { q: f64, alpha: f64, beta: f64 },
    QLaguerre { q: f64, alpha: f64 },
}

impl Prefactor {
    fn value(&self, n: usize) -> f64 {
        let nf = n as f64;
        let binom2 = nf * (nf - 1.0) / 2.0;
        match *self {
            Prefactor::One => 1.0,
            Prefactor::AlSalamCarlitz { q, alpha } => (-alpha).powi(n as i32) * q.powf(-binom2),
            Prefactor::Quantum { q, alpha, nn } => {
                q_pochhammer(q.powf(-nn), q, n) / (alpha.powi(n as i32) * q.powf(nf * nf))
            }
            Prefactor::BigQJacobi { q, alpha, beta } => {
                q_pochhammer(beta * q, q, n) / q_pochhammer(alpha * q, q, n)
                    * (-alpha).powi(n as i32)
                    * q.powf(nf + binom2)
            }
            Prefactor::QLaguerre { q, alpha } => {
                q.powf(-alpha * nf) * q_pochhammer(q.powf(alpha + 1.0), q, n)
                    / q_pochhammer(q, q, n)
            }
        }
    }
}

/// A validated family instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub params: BTreeMap<String, f64>,
    pub grid: Grid,
    /// First support point `a` in s.
    pub support_start: f64,
    /// `b = a + N` for finite families, `None` for infinite support.
    pub support_end: Option<f64>,
    pub degree_max: usize,
    /// The polynomial variable is `x_scale * x(s)`; 1 except for the big
    /// q-Jacobi special case.
    pub x_scale: f64,
    #[serde(skip)]
    pub(crate) core: Core,
    #[serde(skip)]
    prefactor: Prefactor,
}

/// Point at which to evaluate a polynomial.
#[derive(Clone, Copy, Debug)]
enum Point {
    S(f64),
    X(f64),
}

fn fail(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Err(Error::Domain(msg()))
    } else {
        Ok(())
    }
}

/// Builds a validated family instance from `(name, value)` pairs.
pub fn make_family(kind: FamilyKind, params: &[(&str, f64)]) -> Result<FamilySpec> {
    let map = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    FamilySpec::new(kind, map)
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, params: BTreeMap<String, f64>) -> Result<Self> {
        Self::build(kind, params, true)
    }

    fn build(kind: FamilyKind, params: BTreeMap<String, f64>, validate: bool) -> Result<Self> {
        let names = kind.param_names();
        for key in params.keys() {
            if !names.contains(&key.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "{} has no parameter '{key}' (expected {})",
                    kind.slug(),
                    names.join(", ")
                )));
            }
        }
        for name in names {
            match params.get(*name) {
                None => {
                    return Err(Error::InvalidInput(format!(
                        "{} requires parameter '{name}'",
                        kind.slug()
                    )))
                }
                Some(v) if !v.is_finite() => {
                    return Err(Error::InvalidInput(format!(
                        "parameter {name}={v} is not finite"
                    )))
                }
                _ => {}
            }
        }
        let p = |name: &str| params[name];
        let slug = kind.slug();

        let nn = if kind.is_finite() {
            let nn = p("N");
            if nn.fract() != 0.0 || nn < 2.0 {
                return Err(Error::Domain(format!(
                    "{slug} requires integer N >= 2 (got N={nn})"
                )));
            }
            if nn > MAX_SUPPORT as f64 {
                return Err(Error::Domain(format!(
                    "{slug} requires N <= {MAX_SUPPORT} (got N={nn})"
                )));
            }
            nn
        } else {
            f64::INFINITY
        };
        let q = if names.contains(&"q") {
            let q = p("q");
            fail(!(q > 0.0 && q < 1.0), || {
                format!("{slug} requires 0 < q < 1 (got q={q})")
            })?;
            q
        } else {
            f64::NAN
        };

        if validate {
            validate_domain(kind, &params, q, nn)?;
        }

        use FamilyKind as K;
        let mut prefactor = Prefactor::One;
        let mut x_scale = 1.0;
        let core = match kind {
            K::Hahn => Core::Hahn {
                alpha: p("alpha"),
                beta: p("beta"),
                nn,
            },
            K::Charlier => Core::Charlier { alpha: p("alpha") },
            K::Krawtchouk => Core::Krawtchouk {
                alpha: p("alpha"),
                nn,
            },
            K::Meixner => Core::Meixner {
                alpha: p("alpha"),
                beta: p("beta"),
            },
            K::Racah => Core::Racah {
                a: p("a"),
                alpha: p("alpha"),
                beta: p("beta"),
                nn,
            },
            K::DualHahn => Core::DualHahn {
                a: p("a"),
                alpha: p("alpha"),
                nn,
            },
            K::QMeixner => Core::QMeixner {
                q,
                alpha: p("alpha"),
                beta: p("beta"),
            },
            K::QCharlier => Core::QMeixner {
                q,
                alpha: p("alpha"),
                beta: 0.0,
            },
            K::AlSalamCarlitzII | K::AlSalamCarlitzI => {
                prefactor = Prefactor::AlSalamCarlitz {
                    q,
                    alpha: p("alpha"),
                };
                Core::AlSalamCarlitz {
                    q,
                    alpha: p("alpha"),
                }
            }
            K::QHahn => Core::QHahn {
                q,
                alpha: p("alpha"),
                beta: p("beta"),
                nn,
            },
            K::QKrawtchouk => Core::QKrawtchouk {
                q,
                alpha: p("alpha"),
                nn,
            },
            K::AffineQKrawtchouk => Core::AffineQKrawtchouk {
                q,
                alpha: p("alpha"),
                nn,
            },
            K::QuantumQKrawtchouk => {
                prefactor = Prefactor::Quantum {
                    q,
                    alpha: p("alpha"),
                    nn,
                };
                Core::QuantumQKrawtchouk {
                    q,
                    alpha: p("alpha"),
                    nn,
                }
            }
            K::QBessel => Core::QBessel {
                q,
                alpha: p("alpha"),
            },
            K::LittleQJacobi => Core::LittleQJacobi {
                q,
                alpha: p("alpha"),
                beta: p("beta"),
            },
            K::LittleQLaguerre => Core::LittleQLaguerre {
                q,
                alpha: p("alpha"),
            },
            K::BigQJacobiSpecial => {
                // Little q-Jacobi with the parameters swapped, at X/(alpha q).
                let (alpha, beta) = (p("alpha"), p("beta"));
                prefactor = Prefactor::BigQJacobi { q, alpha, beta };
                x_scale = alpha * q;
                Core::LittleQJacobi {
                    q,
                    alpha: beta,
                    beta: alpha,
                }
            }
            K::QLaguerre => {
                let alpha = p("alpha");
                prefactor = Prefactor::QLaguerre { q, alpha };
                Core::LittleQLaguerre {
                    q,
                    alpha: q.powf(alpha),
                }
            }
            K::QRacah => Core::QRacah {
                q,
                a: p("a"),
                alpha: p("alpha"),
                beta: p("beta"),
                nn,
            },
            K::DualQHahn => Core::DualQHahn {
                q,
                a: p("a"),
                alpha: p("alpha"),
                nn,
            },
        };
        let grid = core.grid();
        let support_start = core.support_start();
        let (support_end, degree_max) = if kind.is_finite() {
            (Some(support_start + nn), nn as usize - 1)
        } else {
            (None, INFINITE_DEGREE_CAP)
        };
        Ok(FamilySpec {
            kind,
            params,
            grid,
            support_start,
            support_end,
            degree_max,
            x_scale,
            core,
            prefactor,
        })
    }

    pub fn param(&self, name: &str) -> Result<f64> {
        self.params.get(name).copied().ok_or_else(|| {
            Error::InvalidInput(format!("{} has no parameter '{name}'", self.kind.slug()))
        })
    }

    /// Copy with one parameter replaced, validated.
    pub fn with_param(&self, name: &str, value: f64) -> Result<FamilySpec> {
        self.param(name)?;
        let mut params = self.params.clone();
        params.insert(name.to_string(), value);
        FamilySpec::new(self.kind, params)
    }

    /// Copy with one parameter replaced, skipping the inequality checks.
    /// Used for difference quotients that straddle a domain edge.
    pub fn with_param_unchecked(&self, name: &str, value: f64) -> Result<FamilySpec> {
        self.param(name)?;
        let mut params = self.params.clone();
        params.insert(name.to_string(), value);
        FamilySpec::build(self.kind, params, false)
    }

    /// Support size N for finite families.
    pub fn support_size(&self) -> Option<usize> {
        self.support_end
            .map(|b| (b - self.support_start).round() as usize)
    }

    /// Polynomial variable at s: `x_scale * x(s)`, no domain check.
    pub fn x_at(&self, s: f64) -> f64 {
        self.x_scale * self.grid.eval(s)
    }

    /// `dX/ds` at s, no domain check.
    pub fn dx_at(&self, s: f64) -> f64 {
        self.x_scale * self.grid.deriv(s)
    }

    pub fn s_of_x(&self, x: f64) -> Result<f64> {
        self.grid.x_inverse(x / self.x_scale)
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.degree_max {
            Err(Error::InvalidInput(format!(
                "degree n={n} exceeds the maximum {} for {}",
                self.degree_max,
                self.kind.slug()
            )))
        } else {
            Ok(())
        }
    }

    /// `P_n` at `X = x(s)`, evaluated through the series in s. The series
    /// is analytic in s, so points outside the support are fine.
    pub fn eval_s(&self, n: usize, s: f64) -> Result<f64> {
        self.eval_s_scaled(n, s).map(|r| r.value)
    }

    /// Like [`FamilySpec::eval_s`], with the cancellation scale.
    pub fn eval_s_scaled(&self, n: usize, s: f64) -> Result<SeriesSum> {
        self.eval_at(n, Point::S(s))
    }

    /// `P_n(X)`. Families whose series is written in s need X inside the
    /// grid image.
    pub fn eval_poly(&self, n: usize, x: f64) -> Result<f64> {
        self.eval_at(n, Point::X(x)).map(|r| r.value)
    }

    fn eval_at(&self, n: usize, point: Point) -> Result<SeriesSum> {
        self.check_degree(n)?;
        let spec = self.core.series(n, point, self.x_scale)?;
        let sum = eval_terminating_series_scaled(&spec)?;
        let c = self.prefactor.value(n);
        Ok(SeriesSum {
            value: c * sum.value,
            scale: c.abs() * sum.scale,
        })
    }
}

fn validate_domain(
    kind: FamilyKind,
    params: &BTreeMap<String, f64>,
    q: f64,
    nn: f64,
) -> Result<()> {
    use FamilyKind as K;
    let p = |name: &str| params[name];
    let slug = kind.slug();
    let gt = |name: &str, lo: f64, lo_txt: &str| {
        let v = p(name);
        fail(!(v > lo), || {
            format!("{slug} requires {name} > {lo_txt} (got {name}={v})")
        })
    };
    let between = |name: &str, lo: f64, hi: f64, txt: &str| {
        let v = p(name);
        fail(!(v > lo && v < hi), || {
            format!("{slug} requires {txt} (got {name}={v})")
        })
    };
    let qi = 1.0 / q;
    match kind {
        K::Hahn => {
            gt("alpha", -1.0, "-1")?;
            gt("beta", -1.0, "-1")?;
        }
        K::Charlier | K::QKrawtchouk | K::QBessel | K::QCharlier => gt("alpha", 0.0, "0")?,
        K::Krawtchouk => between("alpha", 0.0, 1.0, "0 < alpha < 1")?,
        K::Meixner => {
            between("alpha", 0.0, 1.0, "0 < alpha < 1")?;
            gt("beta", 0.0, "0")?;
        }
        K::Racah => {
            gt("a", -0.5, "-1/2")?;
            gt("alpha", -1.0, "-1")?;
            let a = p("a");
            between("beta", -1.0, 2.0 * a + 1.0, "-1 < beta < 2a+1")?;
        }
        K::DualHahn => {
            gt("a", -0.5, "-1/2")?;
            let a = p("a");
            between("alpha", -1.0, 2.0 * a + 1.0, "-1 < alpha < 2a+1")?;
        }
        K::QMeixner => {
            gt("alpha", 0.0, "0")?;
            let b = p("beta");
            fail(!(b >= 0.0 && b < qi), || {
                format!("{slug} requires 0 <= beta < 1/q (got beta={b})")
            })?;
        }
        K::AlSalamCarlitzII | K::AlSalamCarlitzI | K::AffineQKrawtchouk | K::LittleQLaguerre => {
            between("alpha", 0.0, qi, "0 < alpha < 1/q")?
        }
        K::QHahn | K::BigQJacobiSpecial => {
            between("alpha", 0.0, qi, "0 < alpha < 1/q")?;
            between("beta", 0.0, qi, "0 < beta < 1/q")?;
        }
        K::QuantumQKrawtchouk => {
            let lo = q.powf(1.0 - nn);
            let v = p("alpha");
            fail(!(v > lo), || {
                format!("{slug} requires alpha > q^(1-N) = {lo} (got alpha={v})")
            })?;
        }
        K::LittleQJacobi => {
            between("alpha", 0.0, qi, "0 < alpha < 1/q")?;
            let b = p("beta");
            fail(!(b < qi), || {
                format!("{slug} requires beta < 1/q (got beta={b})")
            })?;
        }
        K::QLaguerre => gt("alpha", -1.0, "-1")?,
        K::QRacah => {
            gt("a", 0.0, "0")?;
            gt("alpha", -1.0, "-1")?;
            let a = p("a");
            between("beta", -1.0, 2.0 * a, "-1 < beta < 2a")?;
        }
        K::DualQHahn => {
            gt("a", 0.0, "0")?;
            let a = p("a");
            between("alpha", -1.0, 2.0 * a, "-1 < alpha < 2a")?;
        }
    }
    Ok(())
}

impl Core {
    fn grid(&self) -> Grid {
        use Core::*;
        match *self {
            Hahn { .. } | Charlier { .. } | Krawtchouk { .. } | Meixner { .. } => Grid::Linear,
            Racah { .. } | DualHahn { .. } => Grid::Quadratic,
            QMeixner { q, .. }
            | AlSalamCarlitz { q, .. }
            | QHahn { q, .. }
            | QKrawtchouk { q, .. }
            | AffineQKrawtchouk { q, .. }
            | QuantumQKrawtchouk { q, .. } => Grid::QExpNeg { q },
            QBessel { q, .. } | LittleQJacobi { q, .. } | LittleQLaguerre { q, .. } => {
                Grid::QExp { q }
            }
            QRacah { q, .. } | DualQHahn { q, .. } => Grid::QSymmetric { q },
        }
    }

    fn support_start(&self) -> f64 {
        match *self {
            Core::Racah { a, .. }
            | Core::DualHahn { a, .. }
            | Core::QRacah { a, .. }
            | Core::DualQHahn { a, .. } => a,
            _ => 0.0,
        }
    }

    /// Series for `P_n` at a point. `x_scale` converts an external X to the
    /// base family's variable.
    fn series(&self, n: usize, point: Point, x_scale: f64) -> Result<SeriesSpec> {
        use Core::*;
        let grid = self.grid();
        let ni = n as i32;
        let nf = n as f64;
        let dd = Dd::from;
        let mn = dd(-nf);
        // Base-family variable; exact powers of q at integer s.
        let x = || -> Dd {
            match (point, grid) {
                (Point::S(s), Grid::QExpNeg { q }) => qpow_real(q, -s),
                (Point::S(s), Grid::QExp { q }) => qpow_real(q, s),
                (Point::S(s), g) => dd(g.eval(s)),
                (Point::X(x), _) => dd(x / x_scale),
            }
        };
        let s = || -> Result<f64> {
            match point {
                Point::S(s) => Ok(s),
                Point::X(x) => grid.x_inverse(x / x_scale),
            }
        };
        Ok(match *self {
            Hahn { alpha, beta, nn } => SeriesSpec::hyper_dd(
                vec![mn, -x(), dd(alpha + beta + nf + 1.0)],
                vec![dd(beta + 1.0), dd(1.0 - nn)],
                dd(1.0),
                n,
            ),
            Charlier { alpha } => SeriesSpec::hyper_dd(vec![mn, -x()], vec![], -1.0 / dd(alpha), n),
            Krawtchouk { alpha, nn } => {
                SeriesSpec::hyper_dd(vec![mn, -x()], vec![dd(1.0 - nn)], 1.0 / dd(alpha), n)
            }
            Meixner { alpha, beta } => {
                SeriesSpec::hyper_dd(vec![mn, -x()], vec![dd(beta)], 1.0 - 1.0 / dd(alpha), n)
            }
            Racah { a, alpha, beta, nn } => {
                let s = s()?;
                SeriesSpec::hyper_dd(
                    vec![mn, dd(alpha + beta + nf + 1.0), a - dd(s), s + dd(a) + 1.0],
                    vec![dd(2.0 * a + alpha + nn + 1.0), dd(beta + 1.0), dd(1.0 - nn)],
                    dd(1.0),
                    n,
                )
            }
            DualHahn { a, alpha, nn } => {
                let s = s()?;
                SeriesSpec::hyper_dd(
                    vec![mn, a - dd(s), s + dd(a) + 1.0],
                    vec![dd(alpha + 1.0), dd(1.0 - nn)],
                    dd(1.0),
                    n,
                )
            }
            QMeixner { q, alpha, beta } => SeriesSpec::basic_dd(
                vec![qpow(q, -ni), x()],
                vec![dd(beta) * q],
                q,
                -qpow(q, ni + 1) / alpha,
                n,
            ),
            AlSalamCarlitz { q, alpha } => {
                SeriesSpec::basic_dd(vec![qpow(q, -ni), x()], vec![], q, qpow(q, ni) / alpha, n)
            }
            QHahn { q, alpha, beta, nn } => SeriesSpec::basic_dd(
                vec![qpow(q, -ni), dd(alpha) * beta * qpow(q, ni + 1), x()],
                vec![dd(alpha) * q, qpow_real(q, 1.0 - nn)],
                q,
                dd(q),
                n,
            ),
            QKrawtchouk { q, alpha, nn } => SeriesSpec::basic_dd(
                vec![qpow(q, -ni), -dd(alpha) * qpow(q, ni), x()],
                vec![dd(0.0), qpow_real(q, 1.0 - nn)],
                q,
                dd(q),
                n,
            ),
            AffineQKrawtchouk { q, alpha, nn } => SeriesSpec::basic_dd(
                vec![qpow(q, -ni), dd(0.0), x()],
                vec![dd(alpha) * q, qpow_real(q, 1.0 - nn)],
                q,
                dd(q),
                n,
            ),
            QuantumQKrawtchouk { q, alpha, nn } => SeriesSpec::basic_dd(
                vec![qpow(q, -ni), x()],
                vec![qpow_real(q, 1.0 - nn)],
                q,
                dd(alpha) * qpow(q, ni + 1),
                n,
            ),
            QBessel { q, alpha } => SeriesSpec::basic_dd(
                vec![qpow(q, -ni), -dd(alpha) * qpow(q, ni)],
                vec![dd(0.0)],
                q,
                q * x(),
                n,
            ),
            LittleQJacobi { q, alpha, beta } => SeriesSpec::basic_dd(
                vec![qpow(q, -ni), dd(alpha) * beta * qpow(q, ni + 1)],
                vec![dd(alpha) * q],
                q,
                q * x(),
                n,
            ),
            LittleQLaguerre { q, alpha } => SeriesSpec::basic_dd(
                vec![qpow(q, -ni), dd(0.0)],
                vec![dd(alpha) * q],
                q,
                q * x(),
                n,
            ),
            QRacah {
                q,
                a,
                alpha,
                beta,
                nn,
            } => {
                let s = s()?;
                let (lo, hi) = racah_pair(q, a, s);
                SeriesSpec::basic_dd(
                    vec![
                        qpow(q, -ni),
                        qpow_real(q, alpha + beta + 1.0) * qpow(q, ni),
                        lo,
                        hi,
                    ],
                    vec![
                        qpow_real(q, 2.0 * a + alpha) * qpow_real(q, nn),
                        qpow_real(q, beta + 1.0),
                        qpow_real(q, 1.0 - nn),
                    ],
                    q,
                    dd(q),
                    n,
                )
            }
            DualQHahn { q, a, alpha, nn } => {
                let s = s()?;
                let (lo, hi) = racah_pair(q, a, s);
                SeriesSpec::basic_dd(
                    vec![qpow(q, -ni), lo, hi],
                    vec![qpow_real(q, alpha + 1.0), qpow_real(q, 1.0 - nn)],
                    q,
                    dd(q),
                    n,
                )
            }
        })
    }
}

/// `(q^{a-s}, q^{s+a})` with the support offset `s - a` kept exact.
fn racah_pair(q: f64, a: f64, s: f64) -> (Dd, Dd) {
    // Support points a + i carry rounding in s; snap the offset back.
    let mut off = s - a;
    if (off - off.round()).abs() <= 1e-13 * s.abs().max(1.0) {
        off = off.round();
    }
    let k = qpow_real(q, off);
    (k.recip(), qpow_real(q, 2.0 * a) * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs_round_trip() {
        for k in FamilyKind::ALL {
            assert_eq!(k.slug().parse::<FamilyKind>().unwrap(), k);
        }
        assert!("legendre".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn hahn_spec() {
        let f = make_family(
            FamilyKind::Hahn,
            &[("alpha", 0.5), ("beta", 1.0), ("N", 10.0)],
        )
        .unwrap();
        assert_eq!(f.grid, Grid::Linear);
        assert_eq!(f.support_end, Some(10.0));
        assert_eq!(f.degree_max, 9);
    }

    #[test]
    fn domain_violations_name_the_inequality() {
        let err = make_family(FamilyKind::Krawtchouk, &[("alpha", 1.2), ("N", 5.0)]).unwrap_err();
        assert!(matches!(&err, Error::Domain(m) if m.contains("0 < alpha < 1")));
        let ok = make_family(
            FamilyKind::Racah,
            &[("a", -0.25), ("alpha", 0.0), ("beta", 0.2), ("N", 6.0)],
        );
        assert!(ok.is_ok());
        let err = make_family(
            FamilyKind::Hahn,
            &[("alpha", 0.5), ("beta", 1.0), ("N", 3.5)],
        )
        .unwrap_err();
        assert!(err.is_input_error());
    }

    #[test]
    fn evaluation_anchors() {
        let h = make_family(
            FamilyKind::Hahn,
            &[("alpha", 0.3), ("beta", 1.1), ("N", 7.0)],
        )
        .unwrap();
        for n in 0..6 {
            assert_eq!(h.eval_poly(n, 0.0).unwrap(), 1.0);
        }
        let r = make_family(
            FamilyKind::Racah,
            &[("a", 1.0), ("alpha", 0.0), ("beta", 0.5), ("N", 6.0)],
        )
        .unwrap();
        for n in 0..6 {
            assert!((r.eval_poly(n, 2.0).unwrap() - 1.0).abs() < 1e-14);
        }
        let c = make_family(FamilyKind::Charlier, &[("alpha", 2.5)]).unwrap();
        assert!((c.eval_poly(1, 1.7).unwrap() - (1.0 - 1.7 / 2.5)).abs() < 1e-15);
    }
}
