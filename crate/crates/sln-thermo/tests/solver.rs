use sln_thermo::nlie::{free_energy, solve_nlie, Grid, NlieParams, NlieState, NlieSystem};
use sln_thermo::oracle::finite_free_energy;
use sln_core::kernels::ShiftChoice;

fn solve(n: usize, t: f64, mu: &[f64]) -> NlieState {
    solve_nlie(&NlieParams::new(n, t, mu), Grid::for_temperature(t)).unwrap()
}

#[test]
fn damped_iteration_contracts_at_high_temperature() {
    for (n, t) in [(4, 1.0), (5, 2.0), (4, 10.0), (5, 100.0)] {
        let mut p = NlieParams::new(n, t, &vec![0.0; n]);
        p.damping = 0.5;
        let s = solve_nlie(&p, Grid::for_temperature(t)).unwrap();
        let r = &s.residuals;
        assert!(r.windows(2).skip(3).all(|w| w[1] <= w[0]), "n = {n}, T = {t}");
        assert_eq!(s.iterations, r.len());
    }
}

#[test]
fn high_temperature_converges_quickly_with_mixing() {
    let mut p = NlieParams::new(5, 100.0, &[0.0; 5]);
    p.anderson = 6;
    let s = solve_nlie(&p, Grid::for_temperature(100.0)).unwrap();
    assert!(s.iterations <= 30, "{} iterations", s.iterations);
    let plain = solve(5, 100.0, &[0.0; 5]);
    assert!((free_energy(&s) - free_energy(&plain)).abs() < 1e-10);
}

#[test]
fn refinement_leaves_free_energy_unchanged() {
    let p = NlieParams::new(4, 0.5, &[0.0; 4]);
    let coarse = solve_nlie(&p, Grid::new(4096, 40.0).unwrap()).unwrap();
    let fine = solve_nlie(&p, Grid::new(8192, 40.0).unwrap()).unwrap();
    assert!((free_energy(&coarse) - free_energy(&fine)).abs() < 1e-8);
}

#[test]
fn warm_start_saves_iterations() {
    let grid = Grid::for_temperature(0.5);
    let sys = NlieSystem::new(4, grid, ShiftChoice::Bounded).unwrap();
    let cold = sys.solve(&NlieParams::new(4, 0.5, &[0.0; 4]), None).unwrap();
    let near = NlieParams::new(4, 0.501, &[0.0; 4]);
    let warm = sys.solve(&near, Some(&cold)).unwrap();
    let fresh = sys.solve(&near, None).unwrap();
    assert!(warm.iterations < fresh.iterations);
    assert!((free_energy(&warm) - free_energy(&fresh)).abs() < 1e-10);
}

#[test]
fn chemical_potentials_shift_free_energy_by_their_mean_when_uniform() {
    let a = solve(4, 0.7, &[0.0; 4]);
    let b = solve(4, 0.7, &[0.3; 4]);
    assert!((free_energy(&b) - (free_energy(&a) - 0.3)).abs() < 1e-10);
}

#[test]
fn state_round_trips_through_json() {
    let s = solve(4, 1.0, &[0.1, -0.1, 0.05, -0.05]);
    let text = serde_json::to_string(&s).unwrap();
    let back: NlieState = serde_json::from_str(&text).unwrap();
    assert_eq!(back.logb, s.logb);
    assert_eq!(free_energy(&back), free_energy(&s));
}

#[test]
fn finite_chains_approach_the_thermodynamic_limit() {
    let t = 2.0;
    let f = free_energy(&solve(4, t, &[0.0; 4]));
    let gaps: Vec<f64> = [4, 6, 8]
        .iter()
        .map(|&l| (finite_free_energy(4, l, true, t, 1.0, &[0.0; 4]).unwrap() - f).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[2] < 1e-6, "{gaps:?}");
}

#[test]
fn bad_parameters_are_rejected() {
    let grid = Grid::for_temperature(1.0);
    assert!(solve_nlie(&NlieParams::new(4, -1.0, &[0.0; 4]), grid).is_err());
    assert!(solve_nlie(&NlieParams::new(4, 1.0, &[0.0; 3]), grid).is_err());
    assert!(Grid::new(1000, 40.0).is_err());
}
