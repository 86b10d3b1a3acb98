use fgauss::gaussian::{block_matrix, ground_state_correlation, CouplingMatrix};
use fgauss::models::{build, ising_coupling, xy_coupling, xy_single_particle_energies, ModelKind, ModelSpec};
use fgauss::oracle::{
    dense_correlation_matrix, dense_ground_state, dense_hamiltonian, dense_spectrum, dense_spin_hamiltonian,
};
use fgauss::verify::{run_all, SuiteReport, VerifyOptions};
use fgauss::Error;

fn spectra_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn every_suite_passes_at_default_seed() {
    let reports = run_all(&VerifyOptions::default()).unwrap();
    for r in &reports {
        println!("{:<14} {:>4} {:.3e} <= {:.0e}", r.name, r.cases, r.max_deviation, r.tolerance);
    }
    let failed: Vec<&SuiteReport> = reports.iter().filter(|r| !r.passed()).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert_eq!(reports[0].cases, 200);
}

#[test]
fn reports_are_reproducible_per_seed() {
    let opts = VerifyOptions { seed: 1234, ..Default::default() };
    assert_eq!(run_all(&opts).unwrap(), run_all(&opts).unwrap());
}

#[test]
fn zero_tolerance_fails_named_suites() {
    let opts = VerifyOptions { tolerance: Some(0.0), ..Default::default() };
    let reports = run_all(&opts).unwrap();
    assert!(reports.iter().any(|r| r.name == "fidelity" && !r.passed()));
}

#[test]
fn two_site_ising_matches_spin_spectrum() {
    for h in [0.0, 0.3, 1.0, 2.5] {
        let spec = ModelSpec::new(ModelKind::Ising, 2, h);
        let model = build(&spec).unwrap();
        let quad: Vec<f64> =
            dense_spectrum(&dense_hamiltonian(&model.coupling).unwrap()).iter().map(|e| e + model.constant).collect();
        let spin = dense_spectrum(&dense_spin_hamiltonian(&spec).unwrap());
        assert!(spectra_close(&quad, &spin, 1e-10), "h = {h}: {quad:?} vs {spin:?}");
    }
}

#[test]
fn two_site_xy_spectrum() {
    let model = xy_coupling(2, 0.0).unwrap();
    let quad: Vec<f64> =
        dense_spectrum(&dense_hamiltonian(&model.coupling).unwrap()).iter().map(|e| e + model.constant).collect();
    assert!(spectra_close(&quad, &[-2.0, 0.0, 0.0, 2.0], 1e-12), "{quad:?}");
}

#[test]
fn xy_zero_modes_follow_chain_parity() {
    let odd = xy_coupling(3, 0.0).unwrap();
    assert!(matches!(ground_state_correlation(&odd.coupling), Err(Error::DegenerateGroundState { .. })));
    let eps = xy_single_particle_energies(3, 0.0);
    assert!(eps.iter().any(|e| e.abs() < 1e-12));
    assert!(ground_state_correlation(&xy_coupling(4, 0.0).unwrap().coupling).is_ok());
}

#[test]
fn gaussian_ground_state_matches_dense() {
    for kind in [ModelKind::Ising, ModelKind::Xy] {
        let spec = ModelSpec::new(kind, 4, 0.8);
        let g = ground_state_correlation(&build(&spec).unwrap().coupling).unwrap();
        let dense =
            dense_correlation_matrix(&dense_ground_state(&dense_spin_hamiltonian(&spec).unwrap()).unwrap()).unwrap();
        assert!((g.matrix() - dense.matrix()).amax() < 1e-10, "{kind}");
    }
}

fn product_distance(a: &CouplingMatrix) -> f64 {
    let g = ground_state_correlation(a).unwrap();
    let n = g.modes();
    (g.matrix() - block_matrix(&vec![1.0; n])).amax()
}

#[test]
fn strong_field_approaches_product_state() {
    let d3 = product_distance(&ising_coupling(4, 1e3).unwrap().coupling);
    let d4 = product_distance(&ising_coupling(4, 1e4).unwrap().coupling);
    assert!(d3 < 1e-3, "{d3}");
    assert!((d3 / d4 - 10.0).abs() < 0.1, "{d3} / {d4}");
}

#[test]
fn strong_field_boundary_effect_is_negligible() {
    let s = fgauss::observables::boundary_effect_function(&ModelSpec::new(ModelKind::Ising, 40, 1e3), 19).unwrap();
    let worst = s.points().iter().filter(|p| p.0 >= 2).map(|p| p.1).fold(0.0, f64::max);
    assert!(worst <= 1e-4, "{worst}");
}
