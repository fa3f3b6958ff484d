mod common;

use num_complex::Complex64;
use shg_noise::constants::HBAR;
use shg_noise::coupling::{boyd_kleinman_h, global_focus_optimum};
use shg_noise::mean_field::{conversion_residual, solve_conversion};
use shg_noise::{compute_enl, transfer_matrix, CavitySpec, CrystalSpec};

#[test]
fn transfer_matrix_matches_ode_across_lengths() {
    for zeta in [0.0, 0.05, 0.3, 0.5, 0.9, 1.5] {
        let oracle = common::linearized_transfer(zeta);
        let n = transfer_matrix(zeta).unwrap();
        for (i, row) in oracle.iter().enumerate() {
            for (j, expected) in row.iter().enumerate() {
                let got = n.m[(i, j)];
                assert!(
                    (got - expected).abs() < 1e-8,
                    "zeta={zeta} N[{i}{j}] {got} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn h_matches_simpson_on_a_grid() {
    for dk_lc in [0.0, 1.0, 3.26, 6.0] {
        for focus in [0.3, 2.78, 5.7, 15.0] {
            let a = boyd_kleinman_h(dk_lc, focus).unwrap();
            let b = common::h_simpson(dk_lc, focus, 20_000);
            assert!((a - b).norm() < 1e-9, "h({dk_lc}, {focus}) {a} vs {b}");
        }
    }
}

#[test]
fn global_optimum_agrees_with_brute_force() {
    let lib = global_focus_optimum((0.0, 8.0), (0.5, 20.0), 41).unwrap();
    let (dk, focus, figure) =
        common::brute_force_focus_optimum((0.0, 8.0), (0.5, 20.0), (41, 40), 12);
    assert!((lib.dk_lc - dk).abs() < 0.02, "{} vs {dk}", lib.dk_lc);
    assert!((lib.focus - focus).abs() < 0.05, "{} vs {focus}", lib.focus);
    assert!((lib.figure - figure).abs() / figure < 1e-6);
}

/// Physical amplitude and coupling for a circulating power `p_c` in KNbO3.
fn physical_pass(p_c: f64, steps: usize) -> (f64, f64, f64) {
    let crystal = CrystalSpec::knbo3();
    let c = compute_enl(&crystal).unwrap();
    let a1 = Complex64::from((p_c / (HBAR * crystal.omega1())).sqrt());
    let (b1, _) = common::mean_field_pass(a1, Complex64::from(c.kappa_mag), crystal.lc, steps);
    let depletion = 1.0 - b1.norm_sqr() / a1.norm_sqr();
    (depletion, c.enl * p_c, c.enl)
}

#[test]
fn ode_depletion_is_tanh_squared() {
    for p_c in [0.1, 2.5, 40.0] {
        let (depletion, zeta_sq, _) = physical_pass(p_c, 4000);
        let exact = zeta_sq.sqrt().tanh().powi(2);
        assert!((depletion - exact).abs() / exact < 1e-10);
    }
}

#[test]
fn analytic_depletion_matches_ode_when_weak() {
    let (depletion, analytic, _) = physical_pass(1e-5, 200);
    assert!((depletion / analytic - 1.0).abs() < 1e-6);
}

#[test]
fn analytic_depletion_error_is_second_order() {
    for p_c in [0.5, 2.0, 3.5] {
        let (depletion, analytic, _) = physical_pass(p_c, 4000);
        let gap = 1.0 - depletion / analytic;
        assert!(gap > 0.0 && gap < analytic, "p_c={p_c} gap={gap}");
    }
}

#[test]
fn operating_point_depletion_matches_ode() {
    let cavity = CavitySpec::dual_port_reference();
    let crystal = CrystalSpec::knbo3();
    let enl = compute_enl(&crystal).unwrap().enl;
    for p_in in [1e-9, 0.5] {
        let op = solve_conversion(
            &CavitySpec {
                enl1: enl,
                enl2: enl,
                ..cavity
            },
            1.0,
            p_in,
        )
        .unwrap();
        let p_c = op.depletion / enl;
        let (depletion, _, _) = physical_pass(p_c, 4000);
        let tol = if p_in < 1e-6 { 1e-6 } else { op.depletion };
        assert!((depletion / op.depletion - 1.0).abs() < tol, "P_in={p_in}");
    }
}

#[test]
fn ring_limit_matches_bisection() {
    let ring = CavitySpec {
        l14: 0.0,
        ..CavitySpec::dual_port_reference().into_ring()
    };
    for p_in in [1e-4, 0.01, 0.5, 2.0, 10.0] {
        let op = solve_conversion(&ring, 1.0, p_in).unwrap();
        let oracle = common::ring_eps1_bisection(ring.t11, ring.l13, ring.enl1, p_in).unwrap();
        assert!((op.eps1 - oracle).abs() < 1e-10);
        assert!(conversion_residual(&ring, p_in, op.eps1).abs() < 1e-12);
    }
}

#[test]
fn conservation_with_complex_coupling() {
    let kappa = Complex64::from_polar(8e-9, 2.1);
    let a1 = Complex64::from_polar(3e9, 0.4);
    let (b1, b2) = common::mean_field_pass(a1, kappa, 0.01, 2000);
    let before = a1.norm_sqr();
    let after = b1.norm_sqr() + 2.0 * b2.norm_sqr();
    assert!((after - before).abs() / before < 1e-10);
}
