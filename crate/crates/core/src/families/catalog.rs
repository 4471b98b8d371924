//! Static catalog data: zero-monotonicity claims, the s-intervals on which
//! the sign hypotheses are certified, and the serializable family list.

use serde::Serialize;

use super::{CoefficientSource, Core, FamilyKind, FamilySpec};
use crate::grid::Direction;

/// A claimed direction of motion (in X) of every zero as `param` ranges
/// over `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub param: String,
    pub direction: Direction,
    pub lo: f64,
    pub hi: f64,
    /// Whether `lo` itself belongs to the claimed interval.
    pub lo_closed: bool,
}

impl Claim {
    fn open(param: &str, direction: Direction, lo: f64, hi: f64) -> Self {
        Claim {
            param: param.to_string(),
            direction,
            lo,
            hi,
            lo_closed: false,
        }
    }

    /// Interval used for sweeps: infinite ends capped (upper at `10` or
    /// `10 * q^{1-N}` for the quantum q-Krawtchouk case, lower at `-5`),
    /// then shrunk to its central `fraction`.
    pub fn sweep_range(&self, upper_cap: f64, fraction: f64) -> (f64, f64) {
        let lo = if self.lo.is_finite() { self.lo } else { -5.0 };
        let hi = if self.hi.is_finite() {
            self.hi
        } else {
            upper_cap
        };
        let margin = 0.5 * (1.0 - fraction) * (hi - lo);
        (lo + margin, hi - margin)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamInfo {
    pub name: &'static str,
    pub domain: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub kind: FamilyKind,
    pub name: &'static str,
    pub grid: &'static str,
    pub support: &'static str,
    pub params: Vec<ParamInfo>,
    pub claims: Vec<&'static str>,
    pub alias_of: Option<FamilyKind>,
    pub coefficients: CoefficientSource,
}

fn info(
    kind: FamilyKind,
) -> (
    &'static str,
    &'static str,
    Vec<(&'static str, &'static str)>,
    Vec<&'static str>,
) {
    use FamilyKind as K;
    let q = ("q", "0 < q < 1");
    let n = ("N", "integer, 2 <= N <= 60");
    match kind {
        K::Hahn => (
            "x(s) = s",
            "s = 0..N-1",
            vec![("alpha", "alpha > -1"), ("beta", "beta > -1"), n],
            vec![
                "decreasing in alpha on (-1, inf)",
                "increasing in beta on (-1, inf)",
            ],
        ),
        K::Charlier => (
            "x(s) = s",
            "s = 0, 1, ...",
            vec![("alpha", "alpha > 0")],
            vec!["increasing in alpha on (0, inf)"],
        ),
        K::Krawtchouk => (
            "x(s) = s",
            "s = 0..N-1",
            vec![("alpha", "0 < alpha < 1"), n],
            vec!["increasing in alpha on (0, 1)"],
        ),
        K::Meixner => (
            "x(s) = s",
            "s = 0, 1, ...",
            vec![("alpha", "0 < alpha < 1"), ("beta", "beta > 0")],
            vec![
                "increasing in alpha on (0, 1)",
                "increasing in beta on (0, inf)",
            ],
        ),
        K::Racah => (
            "x(s) = s(s+1)",
            "s = a..a+N-1",
            vec![
                ("a", "a > -1/2"),
                ("alpha", "alpha > -1"),
                ("beta", "-1 < beta < 2a+1"),
                n,
            ],
            vec![
                "decreasing in alpha on (-1, inf)",
                "increasing in beta on (-1, 2a+1) for a >= 0, on (a, 2a+1) otherwise",
            ],
        ),
        K::DualHahn => (
            "x(s) = s(s+1)",
            "s = a..a+N-1",
            vec![("a", "a > -1/2"), ("alpha", "-1 < alpha < 2a+1"), n],
            vec!["increasing in alpha on (-1, 2a+1) for a >= 0, on (a, 2a+1) otherwise"],
        ),
        K::QMeixner => (
            "x(s) = q^-s",
            "s = 0, 1, ...",
            vec![("alpha", "alpha > 0"), ("beta", "0 <= beta < 1/q"), q],
            vec![
                "increasing in alpha on (0, inf)",
                "decreasing in beta on [0, 1/q)",
            ],
        ),
        K::QCharlier => (
            "x(s) = q^-s",
            "s = 0, 1, ...",
            vec![("alpha", "alpha > 0"), q],
            vec!["increasing in alpha on (0, inf)"],
        ),
        K::AlSalamCarlitzII => (
            "x(s) = q^-s",
            "s = 0, 1, ...",
            vec![("alpha", "0 < alpha < 1/q"), q],
            vec!["increasing in alpha on (0, 1/q)"],
        ),
        K::AlSalamCarlitzI => (
            "x(s) = q^-s",
            "s = 0, 1, ... (first family at base 1/q)",
            vec![("alpha", "0 < alpha < 1/q"), q],
            vec!["increasing in alpha on (0, 1/q)"],
        ),
        K::QHahn => (
            "x(s) = q^-s",
            "s = 0..N-1",
            vec![
                ("alpha", "0 < alpha < 1/q"),
                ("beta", "0 < beta < 1/q"),
                q,
                n,
            ],
            vec![
                "decreasing in alpha on (0, 1/q)",
                "increasing in beta on (0, 1/q)",
            ],
        ),
        K::QKrawtchouk => (
            "x(s) = q^-s",
            "s = 0..N-1",
            vec![("alpha", "alpha > 0"), q, n],
            vec!["decreasing in alpha on (0, inf)"],
        ),
        K::AffineQKrawtchouk => (
            "x(s) = q^-s",
            "s = 0..N-1",
            vec![("alpha", "0 < alpha < 1/q"), q, n],
            vec!["decreasing in alpha on (0, 1/q)"],
        ),
        K::QuantumQKrawtchouk => (
            "x(s) = q^-s",
            "s = 0..N-1",
            vec![("alpha", "alpha > q^(1-N)"), q, n],
            vec!["decreasing in alpha on (q^(1-N), inf)"],
        ),
        K::QBessel => (
            "x(s) = q^s",
            "s = 0, 1, ...",
            vec![("alpha", "alpha > 0"), q],
            vec!["decreasing in alpha on (0, inf)"],
        ),
        K::LittleQJacobi => (
            "x(s) = q^s",
            "s = 0, 1, ...",
            vec![("alpha", "0 < alpha < 1/q"), ("beta", "beta < 1/q"), q],
            vec![
                "decreasing in alpha on (0, 1/q)",
                "increasing in beta on (-inf, 1/q)",
            ],
        ),
        K::LittleQLaguerre => (
            "x(s) = q^s",
            "s = 0, 1, ...",
            vec![("alpha", "0 < alpha < 1/q"), q],
            vec!["decreasing in alpha on (0, 1/q)"],
        ),
        K::BigQJacobiSpecial => (
            "X = alpha q^(s+1)",
            "s = 0, 1, ...",
            vec![("alpha", "0 < alpha < 1/q"), ("beta", "0 < beta < 1/q"), q],
            vec![
                "increasing in alpha on (0, 1/q)",
                "decreasing in beta on (0, 1/q)",
            ],
        ),
        K::QLaguerre => (
            "x(s) = q^s",
            "s = 0, 1, ...",
            vec![("alpha", "alpha > -1"), q],
            vec!["stated: decreasing in alpha on (-1, inf)"],
        ),
        K::QRacah => (
            "x(s) = (q^s + q^-s)/2",
            "s = a..a+N-1",
            vec![
                ("a", "a > 0"),
                ("alpha", "alpha > -1"),
                ("beta", "-1 < beta < 2a"),
                q,
                n,
            ],
            vec![
                "decreasing in alpha on (-1, inf)",
                "increasing in beta on (-1, 2a) for a >= 1/2, on (a-1/2, 2a) otherwise",
            ],
        ),
        K::DualQHahn => (
            "x(s) = (q^s + q^-s)/2",
            "s = a..a+N-1",
            vec![("a", "a > 0"), ("alpha", "-1 < alpha < 2a"), q, n],
            vec!["increasing in alpha on (-1, 2a) for a >= 1/2, on (a-1/2, 2a) otherwise"],
        ),
    }
}

/// Serializable description of every catalog family.
pub fn catalog() -> Vec<CatalogEntry> {
    FamilyKind::ALL
        .iter()
        .map(|&kind| {
            let (grid, support, params, claims) = info(kind);
            let coefficients = match kind.alias_of().unwrap_or(kind) {
                FamilyKind::AlSalamCarlitzII
                | FamilyKind::QBessel
                | FamilyKind::LittleQLaguerre
                | FamilyKind::DualQHahn => CoefficientSource::Corrected,
                _ => CoefficientSource::Printed,
            };
            CatalogEntry {
                kind,
                name: kind.display_name(),
                grid,
                support,
                params: params
                    .into_iter()
                    .map(|(name, domain)| ParamInfo { name, domain })
                    .collect(),
                claims,
                alias_of: kind.alias_of(),
                coefficients,
            }
        })
        .collect()
}

impl FamilySpec {
    /// Zero-monotonicity claims for this instance. Intervals depend on the
    /// other parameters (`a`, `q`, `N`). The q-Laguerre corollary is
    /// excluded; see [`FamilySpec::stated_claims`].
    pub fn claims(&self) -> Vec<Claim> {
        if self.kind == FamilyKind::QLaguerre {
            return Vec::new();
        }
        self.stated_claims()
    }

    /// Claims as stated, including the q-Laguerre corollary, whose direction
    /// does not survive the literal parameter substitution.
    pub fn stated_claims(&self) -> Vec<Claim> {
        use Direction::{Decreasing as Dec, Increasing as Inc};
        use FamilyKind as K;
        let inf = f64::INFINITY;
        let p = |name: &str| self.params.get(name).copied().unwrap_or(f64::NAN);
        let qi = 1.0 / p("q");
        match self.kind {
            K::Hahn => vec![
                Claim::open("alpha", Dec, -1.0, inf),
                Claim::open("beta", Inc, -1.0, inf),
            ],
            K::Charlier => vec![Claim::open("alpha", Inc, 0.0, inf)],
            K::Krawtchouk => vec![Claim::open("alpha", Inc, 0.0, 1.0)],
            K::Meixner => vec![
                Claim::open("alpha", Inc, 0.0, 1.0),
                Claim::open("beta", Inc, 0.0, inf),
            ],
            K::Racah => {
                let a = p("a");
                let lo = if a >= 0.0 { -1.0 } else { a };
                vec![
                    Claim::open("alpha", Dec, -1.0, inf),
                    Claim::open("beta", Inc, lo, 2.0 * a + 1.0),
                ]
            }
            K::DualHahn => {
                let a = p("a");
                let lo = if a >= 0.0 { -1.0 } else { a };
                vec![Claim::open("alpha", Inc, lo, 2.0 * a + 1.0)]
            }
            K::QMeixner => vec![
                Claim::open("alpha", Inc, 0.0, inf),
                Claim {
                    lo_closed: true,
                    ..Claim::open("beta", Dec, 0.0, qi)
                },
            ],
            K::QCharlier => vec![Claim::open("alpha", Inc, 0.0, inf)],
            K::AlSalamCarlitzII | K::AlSalamCarlitzI => vec![Claim::open("alpha", Inc, 0.0, qi)],
            K::QHahn => vec![
                Claim::open("alpha", Dec, 0.0, qi),
                Claim::open("beta", Inc, 0.0, qi),
            ],
            K::QKrawtchouk => vec![Claim::open("alpha", Dec, 0.0, inf)],
            K::AffineQKrawtchouk => vec![Claim::open("alpha", Dec, 0.0, qi)],
            K::QuantumQKrawtchouk => {
                let lo = p("q").powf(1.0 - p("N"));
                vec![Claim::open("alpha", Dec, lo, inf)]
            }
            K::QBessel => vec![Claim::open("alpha", Dec, 0.0, inf)],
            K::LittleQJacobi => {
                vec![
                    Claim::open("alpha", Dec, 0.0, qi),
                    Claim::open("beta", Inc, -inf, qi),
                ]
            }
            K::LittleQLaguerre => vec![Claim::open("alpha", Dec, 0.0, qi)],
            K::BigQJacobiSpecial => {
                vec![
                    Claim::open("alpha", Inc, 0.0, qi),
                    Claim::open("beta", Dec, 0.0, qi),
                ]
            }
            K::QLaguerre => vec![Claim::open("alpha", Dec, -1.0, inf)],
            K::QRacah => {
                let a = p("a");
                let lo = if a >= 0.5 { -1.0 } else { a - 0.5 };
                vec![
                    Claim::open("alpha", Dec, -1.0, inf),
                    Claim::open("beta", Inc, lo, 2.0 * a),
                ]
            }
            K::DualQHahn => {
                let a = p("a");
                let lo = if a >= 0.5 { -1.0 } else { a - 0.5 };
                vec![Claim::open("alpha", Inc, lo, 2.0 * a)]
            }
        }
    }

    /// Upper cap for unbounded claim intervals in sweeps.
    pub fn sweep_upper_cap(&self) -> f64 {
        match self.kind {
            FamilyKind::QuantumQKrawtchouk => 10.0 * self.params["q"].powf(1.0 - self.params["N"]),
            _ => 10.0,
        }
    }

    /// Interval of s on which the sign hypotheses are certified and which
    /// contains every zero. Families without a dedicated interval use
    /// `(a, b-1)`.
    pub fn k_interval(&self) -> (f64, f64) {
        let a0 = self.support_start;
        let hi = self.support_end.map_or(f64::INFINITY, |b| b - 1.0);
        match self.core {
            Core::Racah { a, beta, nn, .. } => (a.max(0.0).max(beta - a), a + nn - 1.0),
            Core::DualHahn { a, alpha, nn } => (a.max(0.0).max(alpha - a), a + nn - 1.0),
            Core::QRacah { a, beta, nn, .. } => (a.max(0.5).max(beta - a + 1.0), a + nn - 1.0),
            Core::DualQHahn { a, alpha, nn, .. } => (a.max(0.5).max(alpha - a + 1.0), a + nn - 1.0),
            Core::AlSalamCarlitz { q, alpha } => ((-alpha.ln() / q.ln()).max(0.0), f64::INFINITY),
            Core::QuantumQKrawtchouk { q, alpha, nn } => {
                ((alpha.ln() / q.ln() + nn).max(0.0), nn - 1.0)
            }
            _ => (a0, hi),
        }
    }
}
