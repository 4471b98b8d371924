//! Independent oracles: closed-form weights, Jacobi-matrix eigenvalues,
//! degree-one zeros and hand-computed coefficient values.

use std::collections::BTreeMap;

use copz::families::{make_family, sample_params, FamilyKind, FamilySpec};
use copz::grid::Direction;
use copz::interlacing::{connection_residual, interlace_check, InterlaceCase};
use copz::qseries::{eval_terminating_series, identity_value, Identity, SeriesSpec};
use copz::stieltjes::{
    build_stieltjes_system, hypothesis_report, monotonicity_verdict, zero_derivatives_fd,
    GridCondition, Sign,
};
use copz::weights::{
    boundary_check, norm_sq, orthogonality_residual, weight_ratio, weight_table, weight_table_with,
    WeightOptions,
};
use copz::zeros::{eq1_consistency, find_zeros, separation_check, ZeroProblem};
use copz::Error;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn fam(kind: FamilyKind, p: &[(&str, f64)]) -> FamilySpec {
    make_family(kind, p).unwrap()
}

fn zeros_x(f: &FamilySpec, n: usize) -> Vec<f64> {
    find_zeros(&ZeroProblem::new(f.clone(), n).unwrap())
        .unwrap()
        .sorted_x()
}

/// Zeros of the degree-n orthogonal polynomial for the discrete measure
/// `sum w_i delta(X_i)`, as eigenvalues of its Jacobi matrix. The
/// recurrence comes from the discretized Stieltjes procedure with
/// normalized vectors.
fn jacobi_zeros(x: &[f64], w: &[f64], n: usize) -> Vec<f64> {
    let dot =
        |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).zip(w).map(|((a, b), w)| a * b * w).sum() };
    let norm0 = dot(&vec![1.0; x.len()], &vec![1.0; x.len()]).sqrt();
    let mut prev = vec![0.0; x.len()];
    let mut cur: Vec<f64> = vec![1.0 / norm0; x.len()];
    let mut diag = Vec::new();
    let mut off = Vec::new();
    let mut beta = 0.0;
    for _ in 0..n {
        let xc: Vec<f64> = cur.iter().zip(x).map(|(c, x)| c * x).collect();
        let alpha = dot(&xc, &cur);
        diag.push(alpha);
        let next: Vec<f64> = (0..x.len())
            .map(|i| xc[i] - alpha * cur[i] - beta * prev[i])
            .collect();
        beta = dot(&next, &next).sqrt();
        off.push(beta);
        prev = cur;
        cur = next.iter().map(|v| v / beta).collect();
    }
    let j = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            diag[r]
        } else if r + 1 == c || c + 1 == r {
            off[r.min(c)]
        } else {
            0.0
        }
    });
    let mut ev: Vec<f64> = SymmetricEigen::new(j).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `prod_{k=1}^{m} (c + k) / k`, the binomial `C(c + m, m)`.
fn binom_shift(c: f64, m: usize) -> f64 {
    (1..=m).map(|k| (c + k as f64) / k as f64).product()
}

#[test]
fn closed_form_weights_on_the_linear_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        for kind in [
            FamilyKind::Hahn,
            FamilyKind::Krawtchouk,
            FamilyKind::Charlier,
            FamilyKind::Meixner,
        ] {
            let f = FamilySpec::new(kind, sample_params(kind, &mut rng)).unwrap();
            let p = |k: &str| f.params[k];
            let table = weight_table(&f).unwrap();
            let closed = |s: usize| -> f64 {
                match kind {
                    FamilyKind::Hahn => {
                        let nn = p("N") as usize;
                        binom_shift(p("beta"), s) * binom_shift(p("alpha"), nn - 1 - s)
                            / binom_shift(p("alpha"), nn - 1)
                    }
                    FamilyKind::Krawtchouk => {
                        let (a, nn) = (p("alpha"), p("N") as usize);
                        binom_shift((nn - 1 - s) as f64, s) * (a / (1.0 - a)).powi(s as i32)
                    }
                    FamilyKind::Charlier => (1..=s).map(|k| p("alpha") / k as f64).product(),
                    _ => (0..s)
                        .map(|k| (p("beta") + k as f64) * p("alpha") / (k + 1) as f64)
                        .product(),
                }
            };
            for (s, w) in table.values.iter().enumerate().take(40) {
                assert!(
                    rel(*w, closed(s)) < 1e-11,
                    "{kind} s={s} {w} vs {}",
                    closed(s)
                );
            }
        }
    }
}

#[test]
fn zeros_match_jacobi_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for kind in FamilyKind::ALL {
        for _ in 0..6 {
            let f = FamilySpec::new(kind, sample_params(kind, &mut rng)).unwrap();
            let opts = WeightOptions {
                moment_degree: 6,
                ..Default::default()
            };
            let table = weight_table_with(&f, opts).unwrap();
            let x: Vec<f64> = table.s_values().map(|s| f.x_at(s)).collect();
            let w = table.masses();
            for n in 1..=5usize.min(f.degree_max) {
                let ours = zeros_x(&f, n);
                let oracle = jacobi_zeros(&x, &w, n);
                for (a, b) in ours.iter().zip(&oracle) {
                    assert!(
                        (a - b).abs() <= 1e-9 * b.abs().max(1.0),
                        "{kind} n={n} {:?}: {a} vs {b}",
                        f.params
                    );
                }
            }
        }
    }
}

#[test]
fn degree_one_zeros() {
    let z = |f: FamilySpec| zeros_x(&f, 1)[0];
    assert!(rel(z(fam(FamilyKind::Charlier, &[("alpha", 2.0)])), 2.0) < 1e-12);
    assert!(
        rel(
            z(fam(FamilyKind::Krawtchouk, &[("alpha", 0.25), ("N", 5.0)])),
            1.0
        ) < 1e-12
    );
    let (a, b, nn) = (0.7, 1.9, 9.0);
    let hahn = fam(FamilyKind::Hahn, &[("alpha", a), ("beta", b), ("N", nn)]);
    assert!(rel(z(hahn), (b + 1.0) * (nn - 1.0) / (a + b + 2.0)) < 1e-12);
    // 2F1(-1, -X; beta; 1 - 1/alpha) = 1 + X (1 - 1/alpha) / beta.
    let (a, b) = (0.5, 1.0);
    let meixner = fam(FamilyKind::Meixner, &[("alpha", a), ("beta", b)]);
    assert!(rel(z(meixner), a * b / (1.0 - a)) < 1e-12);
    let (a, q) = (0.6, 0.8);
    let lql = fam(FamilyKind::LittleQLaguerre, &[("alpha", a), ("q", q)]);
    assert!(rel(z(lql), 1.0 - a * q) < 1e-12);
}

#[test]
fn evaluation_anchors() {
    let hahn = fam(
        FamilyKind::Hahn,
        &[("alpha", 0.3), ("beta", 1.1), ("N", 7.0)],
    );
    for n in 1..=6 {
        assert!(rel(hahn.eval_poly(n, 0.0).unwrap(), 1.0) < 1e-14);
    }
    let a = 1.0;
    let racah = fam(
        FamilyKind::Racah,
        &[("a", a), ("alpha", 0.2), ("beta", 0.5), ("N", 6.0)],
    );
    for n in 1..=5 {
        assert!(rel(racah.eval_poly(n, a * (a + 1.0)).unwrap(), 1.0) < 1e-13);
    }
    let charlier = fam(FamilyKind::Charlier, &[("alpha", 1.5)]);
    for x in [0.0, 0.7, 3.2] {
        assert!((charlier.eval_poly(1, x).unwrap() - (1.0 - x / 1.5)).abs() < 1e-15);
    }
}

#[test]
fn coefficient_values() {
    let hahn = fam(
        FamilyKind::Hahn,
        &[("alpha", 0.0), ("beta", 0.0), ("N", 5.0)],
    );
    assert_eq!(hahn.coeffs_ab(1.0).unwrap(), (4.0, 6.0));
    assert_eq!(hahn.monotonicity_f(1.0).unwrap(), 1.5);
    let (fa, fb) = (
        hahn.f_partials(1.0, "alpha").unwrap().1,
        hahn.f_partials(1.0, "beta").unwrap().1,
    );
    assert!((fa + 0.375).abs() < 1e-12 && (fb - 0.75).abs() < 1e-12);

    let charlier = fam(FamilyKind::Charlier, &[("alpha", 2.0)]);
    assert_eq!(charlier.coeffs_ab(3.0).unwrap(), (3.0, 2.0));
    let (f1, f2) = charlier.f_partials(3.0, "alpha").unwrap();
    assert!(rel(f1, -2.0 / 9.0) < 1e-8 && rel(f2, 1.0 / 3.0) < 1e-8);

    let qk = fam(
        FamilyKind::QKrawtchouk,
        &[("alpha", 1.0), ("q", 0.5), ("N", 4.0)],
    );
    let (a, b) = qk.coeffs_ab(1.0).unwrap();
    assert!((a + 0.5).abs() < 1e-15 && (b + 3.0).abs() < 1e-14);

    let (al, be, q, s): (f64, f64, f64, f64) = (1.3, 0.6, 0.8, 2.4);
    let qm = fam(
        FamilyKind::QMeixner,
        &[("alpha", al), ("beta", be), ("q", q)],
    );
    let expect = al * q.powf(s) * (1.0 - be * q.powf(s + 1.0))
        / ((1.0 - q.powf(s)) * (1.0 + al * be * q.powf(s)));
    assert!(rel(qm.monotonicity_f(s).unwrap(), expect) < 1e-12);
}

#[test]
fn closed_form_partials_agree_with_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for kind in [
        FamilyKind::Hahn,
        FamilyKind::Racah,
        FamilyKind::QMeixner,
        FamilyKind::QRacah,
    ] {
        for _ in 0..30 {
            let f = FamilySpec::new(kind, sample_params(kind, &mut rng)).unwrap();
            let (lo, hi) = f.k_interval();
            let hi = if hi.is_finite() { hi } else { lo + 10.0 };
            for param in ["alpha", "beta"] {
                assert!(f.has_closed_form_partial(param));
                for i in 0..7 {
                    let s = lo + (hi - lo) * (i as f64 + 0.5) / 7.0;
                    let closed = f.f_partials(s, param).unwrap().1;
                    let numeric = f.f_partials_numeric(s, param).unwrap().1;
                    let scale = closed.abs().max(f.monotonicity_f(s).unwrap().abs() * 1e-3);
                    assert!(
                        (closed - numeric).abs() < 1e-5 * scale,
                        "{kind} {param} s={s}: {closed} vs {numeric}"
                    );
                }
            }
        }
    }
}

#[test]
fn domain_examples() {
    let h = fam(
        FamilyKind::Hahn,
        &[("alpha", 0.5), ("beta", 1.0), ("N", 10.0)],
    );
    assert_eq!(h.support_end, Some(10.0));
    assert!(matches!(h.grid, copz::grid::Grid::Linear));
    let err = make_family(FamilyKind::Krawtchouk, &[("alpha", 1.2), ("N", 5.0)]).unwrap_err();
    assert!(
        matches!(err, Error::Domain(ref m) if m.contains("alpha < 1")),
        "{err}"
    );
    assert!(make_family(
        FamilyKind::Racah,
        &[("a", -0.25), ("alpha", 0.0), ("beta", 0.2), ("N", 6.0)]
    )
    .is_ok());
}

#[test]
fn identity_examples() {
    let (b, c) = (1.3, 2.9);
    let cv = Identity::ChuVandermonde { n: 1, b, c };
    assert!(rel(identity_value(&cv).unwrap(), (c - b) / c) < 1e-15);

    let sh = Identity::racah(1.0, 0.5, 0.5, 6.0, 2);
    assert!(rel(sh.series_value().unwrap(), identity_value(&sh).unwrap()) < 1e-12);

    // Dual q-Hahn instance in product form with the exponent that matches
    // the series: q^{n(2a-alpha-1)} (q^{-2a+alpha-N+2};q)_n / (q^{1-N};q)_n.
    let (q, a, alpha, nn, n): (f64, f64, f64, f64, usize) = (0.7, 1.2, 0.4, 8.0, 3);
    let id = Identity::dual_q_hahn(q, a, alpha, nn, n);
    let qp = |x: f64| copz::qseries::q_pochhammer(x, q, n);
    let closed = q.powf(n as f64 * (2.0 * a - alpha - 1.0))
        * qp(q.powf(-2.0 * a + alpha - nn + 2.0))
        / qp(q.powf(1.0 - nn));
    assert!(rel(id.series_value().unwrap(), closed) < 1e-12);
    assert!(rel(identity_value(&id).unwrap(), closed) < 1e-12);

    let spec = SeriesSpec::hyper(vec![-2.0, 0.0, 1.5], vec![2.0, 3.0], 1.0, 2);
    assert_eq!(eval_terminating_series(&spec).unwrap(), 1.0);
}

#[test]
fn weight_examples() {
    let (a, nn) = (0.3, 7.0);
    let k = fam(FamilyKind::Krawtchouk, &[("alpha", a), ("N", nn)]);
    for s in 0..5 {
        let s = s as f64;
        let expect = a * (nn - 1.0 - s) / ((1.0 - a) * (s + 1.0));
        assert!(rel(weight_ratio(&k, s, false).unwrap(), expect) < 1e-14);
    }
    assert!(boundary_check(&k, 6).unwrap().pass);
    let h = fam(
        FamilyKind::Hahn,
        &[("alpha", 0.0), ("beta", 0.0), ("N", 5.0)],
    );
    assert!(boundary_check(&h, 4).unwrap().pass);
    assert!(orthogonality_residual(&h, 0, 1).unwrap() < 1e-12);
    assert!(rel(norm_sq(&h, 0).unwrap(), 5.0) < 1e-14);
    let c = fam(FamilyKind::Charlier, &[("alpha", 1.7)]);
    assert!(rel(norm_sq(&c, 0).unwrap(), 1.7f64.exp()) < 1e-13);
    assert!(boundary_check(&c, 5).unwrap().pass);
    assert!(orthogonality_residual(&c, 3, 3).unwrap() > 0.0);
}

#[test]
fn zero_set_examples() {
    let h = fam(
        FamilyKind::Hahn,
        &[("alpha", 0.0), ("beta", 0.0), ("N", 6.0)],
    );
    let zs = find_zeros(&ZeroProblem::new(h, 3).unwrap()).unwrap();
    assert!(separation_check(&zs).pass);
    let m = fam(FamilyKind::Meixner, &[("alpha", 0.5), ("beta", 1.0)]);
    let zs = find_zeros(&ZeroProblem::new(m, 4).unwrap()).unwrap();
    assert!(separation_check(&zs).min_gap.unwrap() > 1.0);
}

#[test]
fn eq1_examples() {
    let c = fam(FamilyKind::Charlier, &[("alpha", 2.5)]);
    let p = ZeroProblem::new(c, 1).unwrap();
    let r = eq1_consistency(&p, &find_zeros(&p).unwrap()).unwrap();
    assert!(r.max_active < 1e-14 && (r.eq1_values[0] - 1.0).abs() < 1e-14);

    let h = fam(
        FamilyKind::Hahn,
        &[("alpha", 0.0), ("beta", 0.0), ("N", 5.0)],
    );
    let p = ZeroProblem::new(h, 2).unwrap();
    assert!(
        eq1_consistency(&p, &find_zeros(&p).unwrap())
            .unwrap()
            .max_active
            < 1e-10
    );

    // Printed little q-Laguerre ratio -1/(q(1 - alpha q)) against 1/q.
    let (a, q) = (0.5, 0.8);
    let l = fam(FamilyKind::LittleQLaguerre, &[("alpha", a), ("q", q)]);
    let p = ZeroProblem::new(l, 1).unwrap();
    let r = eq1_consistency(&p, &find_zeros(&p).unwrap()).unwrap();
    assert!(rel(r.eq1_values[0], 1.0 / q) < 1e-12);
    assert!(rel(r.f_printed[0], -1.0 / (q * (1.0 - a * q))) < 1e-12);
    assert!(r.printed_flagged && !r.active_flagged);
}

#[test]
fn stieltjes_examples() {
    let h = fam(
        FamilyKind::Hahn,
        &[("alpha", 0.0), ("beta", 0.0), ("N", 5.0)],
    );
    let p = ZeroProblem::new(h, 2).unwrap();
    let r = hypothesis_report(&p, "alpha", 0.0).unwrap();
    assert!(r.f_positive && r.f1_negative && r.f2_sign == Sign::Negative);
    assert_eq!(r.grid_iv_condition, GridCondition::NotApplicable);
    assert!(zero_derivatives_fd(&p, "alpha", 0.0, 1e-5)
        .unwrap()
        .iter()
        .all(|&d| d < 0.0));

    let racah = fam(
        FamilyKind::Racah,
        &[("a", 1.0), ("alpha", 0.0), ("beta", 0.5), ("N", 6.0)],
    );
    let p = ZeroProblem::new(racah, 3).unwrap();
    let r = hypothesis_report(&p, "beta", 0.5).unwrap();
    assert_eq!(r.k_interval, (1.0, 6.0));
    assert_eq!(r.f2_sign, Sign::Positive);

    let m = fam(FamilyKind::Meixner, &[("alpha", 0.5), ("beta", 1.0)]);
    let p = ZeroProblem::new(m, 2).unwrap();
    assert!(zero_derivatives_fd(&p, "beta", 1.0, 1e-5)
        .unwrap()
        .iter()
        .all(|&d| d > 0.0));

    let c = fam(FamilyKind::Charlier, &[("alpha", 1.3)]);
    let p = ZeroProblem::new(c, 1).unwrap();
    let sys = build_stieltjes_system(&p, "alpha", 1.3).unwrap();
    let f = p.family.monotonicity_f(sys.zeros_s[0]).unwrap();
    let (f1, _) = p.family.f_partials(sys.zeros_s[0], "alpha").unwrap();
    assert!(rel(sys.matrix[0][0], -f1 + f * sys.b_matrix[0][0]) < 1e-14);
    assert!((sys.solution[0] - 1.0).abs() < 1e-8);
}

#[test]
fn verdict_examples() {
    let h = fam(
        FamilyKind::Hahn,
        &[("alpha", 0.5), ("beta", 1.0), ("N", 10.0)],
    );
    let v =
        monotonicity_verdict(&ZeroProblem::new(h, 3).unwrap(), "alpha", (-0.9, 3.0), 25).unwrap();
    assert_eq!(
        (v.direction, v.agrees),
        (Some(Direction::Decreasing), Some(true))
    );
    let k = fam(FamilyKind::Krawtchouk, &[("alpha", 0.5), ("N", 8.0)]);
    let v =
        monotonicity_verdict(&ZeroProblem::new(k, 2).unwrap(), "alpha", (0.05, 0.95), 15).unwrap();
    assert_eq!(
        (v.direction, v.agrees),
        (Some(Direction::Increasing), Some(true))
    );
    let q = 0.8;
    let asc = fam(FamilyKind::AlSalamCarlitzII, &[("alpha", 0.5), ("q", q)]);
    let v = monotonicity_verdict(
        &ZeroProblem::new(asc, 2).unwrap(),
        "alpha",
        (0.1, 0.9 / q),
        15,
    )
    .unwrap();
    assert_eq!(
        (v.direction, v.agrees),
        (Some(Direction::Increasing), Some(true))
    );
}

fn params(p: &[(&str, f64)]) -> BTreeMap<String, f64> {
    p.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[test]
fn interlacing_examples() {
    let hahn = params(&[("alpha", 0.0), ("beta", 0.0)]);
    let r = interlace_check(FamilyKind::Hahn, &hahn, 3, 8).unwrap();
    assert_eq!(r.case, InterlaceCase::InteriorInterlace);
    assert!(r.corollary_placement.iter().all(|p| p.count == 1));
    assert_eq!(r.corollary_placement.last().unwrap().hi, 8.0);

    let c = connection_residual(FamilyKind::Hahn, &hahn, 2, 6, &[0.5, 1.5, 2.5, 3.5]).unwrap();
    assert!(c.residual < 1e-7);
    assert!(c.zeta_reciprocal_residual < 1e-8);

    let err = connection_residual(
        FamilyKind::Krawtchouk,
        &params(&[("alpha", 0.5)]),
        1,
        4,
        &[0.5, 1.5, 2.5],
    );
    assert!(matches!(err, Err(Error::NotApplicable(_))));
}
