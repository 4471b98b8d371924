//! Seeded random draws of in-domain parameters, kept away from domain
//! edges so that zeros stay well conditioned in double precision.

use std::collections::BTreeMap;

use rand::Rng;

use super::FamilyKind;

fn unit<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// Random parameters inside the domain of `kind`.
pub fn sample_params<R: Rng + ?Sized>(kind: FamilyKind, rng: &mut R) -> BTreeMap<String, f64> {
    use FamilyKind as K;
    let mut p = BTreeMap::new();
    let mut set = |k: &str, v: f64| {
        p.insert(k.to_string(), v);
    };
    // Below q = 0.7 zeros crowd within 1e-9 of support points and stop
    // being resolvable in double precision.
    let q = unit(rng, 0.7, 0.95);
    let qi = 1.0 / q;
    let nn = rng.gen_range(6..=14) as f64;
    if kind.is_finite() {
        set("N", nn);
    }
    if kind.param_names().contains(&"q") {
        set("q", q);
    }
    match kind {
        K::Hahn => {
            set("alpha", unit(rng, -0.9, 4.0));
            set("beta", unit(rng, -0.9, 4.0));
        }
        K::Charlier => set("alpha", unit(rng, 0.2, 6.0)),
        K::Krawtchouk => set("alpha", unit(rng, 0.05, 0.95)),
        K::Meixner => {
            set("alpha", unit(rng, 0.1, 0.9));
            set("beta", unit(rng, 0.2, 5.0));
        }
        K::Racah => {
            let a = if rng.gen::<f64>() < 0.8 {
                unit(rng, 0.0, 3.0)
            } else {
                unit(rng, -0.45, -0.05)
            };
            let lo = if a >= 0.0 { -0.9 } else { a };
            set("a", a);
            set("alpha", unit(rng, -0.9, 3.0));
            set("beta", lo + (2.0 * a + 1.0 - lo) * unit(rng, 0.05, 0.95));
        }
        K::DualHahn => {
            let a = if rng.gen::<f64>() < 0.8 {
                unit(rng, 0.0, 3.0)
            } else {
                unit(rng, -0.45, -0.05)
            };
            let lo = if a >= 0.0 { -0.9 } else { a };
            set("a", a);
            set("alpha", lo + (2.0 * a + 1.0 - lo) * unit(rng, 0.05, 0.95));
        }
        K::QMeixner => {
            set("alpha", unit(rng, 0.1, 5.0));
            set("beta", unit(rng, 0.0, 0.95) * qi);
        }
        K::QCharlier | K::QKrawtchouk | K::QBessel => set("alpha", unit(rng, 0.1, 5.0)),
        K::AlSalamCarlitzII | K::AlSalamCarlitzI | K::AffineQKrawtchouk | K::LittleQLaguerre => {
            set("alpha", unit(rng, 0.05, 0.95) * qi)
        }
        K::QHahn | K::BigQJacobiSpecial => {
            set("alpha", unit(rng, 0.05, 0.95) * qi);
            set("beta", unit(rng, 0.05, 0.95) * qi);
        }
        K::QuantumQKrawtchouk => {
            set("alpha", q.powf(1.0 - nn) * unit(rng, 1.05, 5.0));
        }
        K::LittleQJacobi => {
            set("alpha", unit(rng, 0.05, 0.95) * qi);
            set("beta", unit(rng, -3.0, 0.95 * qi));
        }
        K::QLaguerre => set("alpha", unit(rng, -0.9, 4.0)),
        K::QRacah => {
            let a = if rng.gen::<f64>() < 0.8 {
                unit(rng, 0.5, 3.0)
            } else {
                unit(rng, 0.05, 0.5)
            };
            let lo = if a >= 0.5 { -0.9 } else { a - 0.5 };
            set("a", a);
            set("alpha", unit(rng, -0.9, 3.0));
            set("beta", lo + (2.0 * a - lo) * unit(rng, 0.05, 0.95));
        }
        K::DualQHahn => {
            let a = if rng.gen::<f64>() < 0.8 {
                unit(rng, 0.5, 3.0)
            } else {
                unit(rng, 0.05, 0.5)
            };
            let lo = if a >= 0.5 { -0.9 } else { a - 0.5 };
            set("a", a);
            set("alpha", lo + (2.0 * a - lo) * unit(rng, 0.05, 0.95));
        }
    }
    p
}

/// Finite families whose weight does not depend on N for the returned
/// parameters: Hahn and Racah with `alpha = 0`, q-Hahn with `beta = 1`,
/// q-Racah with `alpha = 0`. Returns `None` for other kinds. `N` is drawn
/// in `min_n..=max_n`.
pub fn sample_same_weight_params<R: Rng + ?Sized>(
    kind: FamilyKind,
    min_n: usize,
    max_n: usize,
    rng: &mut R,
) -> Option<BTreeMap<String, f64>> {
    let mut p = sample_params(kind, rng);
    match kind {
        FamilyKind::Hahn | FamilyKind::Racah | FamilyKind::QRacah => {
            p.insert("alpha".into(), 0.0);
        }
        FamilyKind::QHahn => {
            p.insert("beta".into(), 1.0);
        }
        _ => return None,
    }
    p.insert("N".into(), rng.gen_range(min_n..=max_n) as f64);
    Some(p)
}
