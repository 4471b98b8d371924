//! Property tests over randomized grids, series and catalog instances.

use copz::cli::fd_mismatch;
use copz::families::{sample_params, sample_same_weight_params, FamilyKind, FamilySpec};
use copz::grid::{Direction, Grid};
use copz::interlacing::interlace_check;
use copz::qseries::{eval_terminating_series_scaled, identity_value, pochhammer, Identity};
use copz::stieltjes::{
    b_generic, b_q_antisymmetric, b_q_symmetric, b_quadratic, build_stieltjes_system,
    default_fd_step, hypothesis_report, zero_derivatives_fd,
};
use copz::weights::{gram_matrix, max_offdiag_residual, pearson_residuals, weight_table};
use copz::zeros::{find_zeros, separation_check, ZeroProblem};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid_strategy() -> impl Strategy<Value = Grid> {
    (0usize..6, 0.3f64..0.95).prop_map(|(i, q)| match i {
        0 => Grid::Linear,
        1 => Grid::Quadratic,
        2 => Grid::q_exp_neg(q).unwrap(),
        3 => Grid::q_exp(q).unwrap(),
        4 => Grid::q_symmetric(q).unwrap(),
        _ => Grid::q_antisymmetric(q).unwrap(),
    })
}

fn family_strategy(kinds: &'static [FamilyKind]) -> impl Strategy<Value = FamilySpec> {
    (0..kinds.len(), any::<u64>()).prop_map(move |(i, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        FamilySpec::new(kinds[i], sample_params(kinds[i], &mut rng)).unwrap()
    })
}

/// Series against product, relative to the larger of the value and the term scale.
fn identity_gap(id: &Identity) -> Option<f64> {
    let closed = identity_value(id).ok()?;
    let series = eval_terminating_series_scaled(&id.series()).ok()?;
    Some((series.value - closed).abs() / closed.abs().max(series.scale))
}

/// Size of the two quotients the generic `b_jk` subtracts; bounds its rounding error.
fn b_scale(grid: &Grid, yj: f64, yk: f64) -> f64 {
    let (xk, dk) = (grid.eval(yk), grid.deriv(yk));
    let term = |s: f64| ((grid.deriv(s) - dk) / (grid.eval(s) - xk)).abs();
    term(yj - 1.0) + term(yj + 1.0)
}

fn b_agrees(grid: &Grid, yj: f64, yk: f64, closed: f64) -> bool {
    (b_generic(grid, yj, yk) - closed).abs()
        <= 1e-10 * closed.abs().max(b_scale(grid, yj, yk) * 1e-5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_round_trip(g in grid_strategy(), u in 0.01f64..1.0) {
        let (lo, _) = g.domain();
        let s = if lo.is_finite() { lo + 0.01 + 12.0 * u } else { -6.0 + 12.0 * u };
        let back = g.x_inverse(g.x(s).unwrap()).unwrap();
        prop_assert!((back - s).abs() <= 1e-12 * s.abs().max(1.0), "{g:?} s={s} back={back}");
    }

    #[test]
    fn grid_monotone(g in grid_strategy(), u in 0.01f64..1.0, d in 0.01f64..3.0) {
        let (lo, _) = g.domain();
        let s1 = if lo.is_finite() { lo + 0.01 + 8.0 * u } else { -4.0 + 8.0 * u };
        let s2 = s1 + d;
        let diff = g.x(s2).unwrap() - g.x(s1).unwrap();
        prop_assert_eq!(diff.signum(), g.direction().sign());
    }

    #[test]
    fn grid_derivative(g in grid_strategy(), u in 0.05f64..1.0) {
        let (lo, _) = g.domain();
        let s = if lo.is_finite() { lo + 0.1 + 6.0 * u } else { -3.0 + 6.0 * u };
        let h = 1e-5;
        let fd = (g.eval(s + h) - g.eval(s - h)) / (2.0 * h);
        let d = g.dx_ds(s).unwrap();
        prop_assert!((fd - d).abs() <= 1e-6 * d.abs().max(1.0), "{g:?} s={s} fd={fd} d={d}");
    }

    #[test]
    fn pochhammer_step(a in -10.0f64..10.0, k in 0usize..20) {
        prop_assert_eq!(pochhammer(a, k + 1), pochhammer(a, k) * (a + k as f64));
    }

    #[test]
    fn chu_vandermonde(n in 1usize..12, b in -6.0f64..6.0, c in 0.3f64..9.0) {
        let gap = identity_gap(&Identity::ChuVandermonde { n, b, c });
        prop_assert!(gap.is_none_or(|g| g < 1e-11), "{gap:?}");
    }

    #[test]
    fn q_pfaff_saalschutz(n in 1usize..10, a in 0.05f64..0.95, b in 0.05f64..0.95, c in 0.05f64..0.95, q in 0.3f64..0.95) {
        let gap = identity_gap(&Identity::QPfaffSaalschutz { n, a, b, c, q });
        prop_assert!(gap.is_none_or(|g| g < 1e-11), "{gap:?}");
    }

    #[test]
    fn zero_set_invariants(f in family_strategy(&FamilyKind::ALL), n in 1usize..=5) {
        let n = n.min(f.degree_max);
        let zs = find_zeros(&ZeroProblem::new(f.clone(), n).unwrap()).unwrap();
        prop_assert_eq!(zs.zeros_s.len(), n);
        prop_assert!(zs.zeros_s.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(zs.residuals.iter().all(|&r| r < 1e-10), "{:?}", zs.residuals);
        if n > 1 {
            let ascending = zs.zeros_x.windows(2).all(|w| w[0] < w[1]);
            prop_assert_eq!(ascending, f.grid.direction() == Direction::Increasing);
        }
        if let Some(b) = f.support_end {
            let (xa, xb) = (f.x_at(f.support_start), f.x_at(b - 1.0));
            let (lo, hi) = (xa.min(xb), xa.max(xb));
            prop_assert!(zs.zeros_x.iter().all(|&x| x > lo && x < hi));
        }
        let f_pos = zs.zeros_s.iter().all(|&y| f.monotonicity_f(y).unwrap() > 0.0);
        if f_pos {
            prop_assert!(separation_check(&zs).pass);
        }
    }

    #[test]
    fn weights_and_orthogonality(f in family_strategy(&FamilyKind::ALL)) {
        let table = weight_table(&f).unwrap();
        prop_assert!(table.values.iter().all(|&w| w > 0.0));
        let pearson = pearson_residuals(&table).unwrap().into_iter().fold(0.0, f64::max);
        prop_assert!(pearson < 1e-12, "{pearson}");
        let g = gram_matrix(&f, f.degree_max.min(8)).unwrap();
        prop_assert!(max_offdiag_residual(&g) < 1e-8);
        prop_assert!((0..g.len()).all(|i| g[i][i] > 0.0));
    }

    #[test]
    fn b_closed_forms(yj in 0.6f64..12.0, gap in 1.01f64..8.0, q in 0.3f64..0.95) {
        let yk = yj + gap;
        let theta = -q.ln() / 2.0;
        prop_assert!(b_agrees(&Grid::Quadratic, yj, yk, b_quadratic(yj, yk)));
        prop_assert!(b_agrees(&Grid::q_symmetric(q).unwrap(), yj, yk, b_q_symmetric(theta, yj, yk)));
        prop_assert!(b_agrees(&Grid::q_antisymmetric(q).unwrap(), yj, yk, b_q_antisymmetric(theta, yj, yk)));
    }

    #[test]
    fn antisymmetric_b_in_unit_interval(yj in -10.0f64..10.0, yk in -10.0f64..10.0, q in 0.41f64..0.95) {
        // theta = -ln(q)/2 <= 0.45
        let b = b_q_antisymmetric(-q.ln() / 2.0, yj, yk);
        prop_assert!(b > -1.0 && b < 0.0, "{b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn derivative_system(f in family_strategy(&FamilyKind::WITH_CLAIMS), n in 1usize..=3) {
        let p = ZeroProblem::new(f.clone(), n).unwrap();
        for claim in f.claims() {
            let t = f.params[&claim.param];
            let h = hypothesis_report(&p, &claim.param, t).unwrap();
            if !h.pass {
                continue;
            }
            let sys = build_stieltjes_system(&p, &claim.param, t).unwrap();
            prop_assert!(sys.flags_hold());
            let fd = zero_derivatives_fd(&p, &claim.param, t, default_fd_step(t)).unwrap();
            prop_assert!(fd_mismatch(&sys, &fd) < 1e-4);
            if !h.param_moves_grid {
                let sign = h.f2_sign.value().unwrap() * f.grid.direction().sign();
                prop_assert!(sys.solution_x.iter().all(|v| v.signum() == sign));
                prop_assert_eq!(sign, claim.direction.sign());
            }
        }
    }

    #[test]
    fn same_weight_interlacing(i in 0usize..4, seed in any::<u64>(), n in 1usize..=5) {
        let kind = [FamilyKind::Hahn, FamilyKind::Racah, FamilyKind::QHahn, FamilyKind::QRacah][i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample_same_weight_params(kind, 6, 20, &mut rng).unwrap();
        let r = interlace_check(kind, &p, n, p["N"] as usize).unwrap();
        prop_assert!(r.pass());
        prop_assert!(r.connection.unwrap().residual < 1e-7);
    }
}
