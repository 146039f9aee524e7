use isoenergy::ar::{ar_auto_grid, ar_post_measurement_field, ar_post_measurement_field_exact};
use isoenergy::mp::{mp_auto_grid, mp_post_measurement_field};
use isoenergy::oracle::*;
use isoenergy::pointer::pointer_grid;
use isoenergy::*;

const RESOLUTIONS: [usize; 4] = [256, 512, 1024, 2048];

fn smooth() -> CouplingProfile {
    CouplingProfile::smooth(0.0, 1.0, 0.5, 0.2).unwrap()
}

fn ar(profile: CouplingProfile, e0: f64) -> ARParams {
    ARParams::new(e0, 0.5, profile, GaussianPointerSpec::new(0.0, 1.0)).unwrap()
}

fn mp(profile: CouplingProfile, e0: f64) -> MPParams {
    MPParams::new(e0, 0.5, profile, MPParams::pointer_for(10.0, 1.0)).unwrap()
}

fn assert_binwise(field: &ComplexField) {
    let fast = to_momentum(field).unwrap();
    let slow = quadrature_transform(field).unwrap();
    assert_eq!(fast.grid(), slow.grid());
    let peak = slow.amps().iter().map(|a| a.norm()).fold(0.0, f64::max);
    for (a, b) in fast.amps().iter().zip(slow.amps()) {
        assert!((a - b).norm() <= 1e-10 * peak);
    }
}

#[test]
fn fast_and_slow_transforms_agree() {
    let a = ar(CouplingProfile::rectangular(0.0, 1.0, 0.1).unwrap(), 50.0);
    assert_binwise(&ar_post_measurement_field(&a, &ar_auto_grid(&a, false, 512).unwrap()).unwrap());
    let b = ar(CouplingProfile::rectangular(0.0, 1.0, 0.19).unwrap(), 20.0);
    let b = ARParams {
        pointer: b.pointer.truncated(-5.0),
        ..b
    };
    assert_binwise(&ar_post_measurement_field_exact(&b, &ar_auto_grid(&b, true, 512).unwrap()).unwrap());
    let m = mp(smooth(), -30.0);
    assert_binwise(&mp_post_measurement_field(&m, &mp_auto_grid(&m, 512).unwrap()).unwrap());
    let tilted = GaussianPointerSpec::new(1.0, 0.5).with_tilt(4.0).with_chirp(0.7);
    let g = pointer_grid(&tilted, 10.0, 256).unwrap();
    assert_binwise(&make_gaussian(&tilted, &g).unwrap());
}

#[test]
fn gaussian_maps_to_reciprocal_width() {
    for &sigma in &[0.5, 1.0, 3.0] {
        let spec = GaussianPointerSpec::new(0.0, sigma);
        let g = pointer_grid(&spec, 0.0, 256).unwrap();
        let pos = make_gaussian(&spec, &g).unwrap();
        let mom = quadrature_transform(&pos).unwrap();
        let wq = moments(&pos).unwrap().width;
        let wp = moments(&mom).unwrap().width;
        assert!((wq * wp - 1.0).abs() < 1e-9);
    }
}

#[test]
fn slow_transform_confirms_dispersive_width() {
    let a = ar(CouplingProfile::rectangular(0.0, 1.0, 0.1).unwrap(), 100.0);
    let field = ar_post_measurement_field(&a, &ar_auto_grid(&a, false, 512).unwrap()).unwrap();
    let dp = moments(&quadrature_transform(&field).unwrap()).unwrap().width;
    let predicted = (1.0f64 + 4.0 * 0.1f64.powi(4) * 100.0f64.powi(2)).sqrt();
    assert!((dp / predicted - 1.0).abs() < 0.01);
}

#[test]
fn exact_solutions_converge_at_fourth_order() {
    let a = ar(smooth(), 2.0);
    let m = mp(smooth(), 2.0);
    for (target, q) in [(Target::ArExact(&a), 0.6), (Target::MpExact(&m), 2.0)] {
        let rep = convergence_study(target, &RESOLUTIONS, q).unwrap();
        assert!(*rep.residuals.last().unwrap() < 1e-6, "{}: {rep:?}", target.name());
        assert!((3.5..=4.5).contains(&rep.fitted_order), "{}: {rep:?}", target.name());
        assert!(rep.residuals.iter().all(|&r| r > 0.0));
    }
}

#[test]
fn approximate_amplitudes_plateau() {
    let a = ar(smooth(), 2.0);
    let rep = convergence_study(Target::ArSecondOrder(&a), &RESOLUTIONS, 0.6).unwrap();
    assert!(rep.fitted_order < 1.0, "{rep:?}");
    assert!(rep.residuals.iter().all(|&r| r > 1e-3));
    let m = mp(smooth(), 2.0);
    let rep = convergence_study(Target::MpUnsymmetrized(&m), &RESOLUTIONS, 2.0).unwrap();
    assert!(rep.fitted_order < 1.0, "{rep:?}");
}

#[test]
fn rectangular_ramp_limits_the_order() {
    let a = ar(CouplingProfile::rectangular(0.0, 1.0, 0.5).unwrap(), 2.0);
    let rep = convergence_study(Target::ArExact(&a), &RESOLUTIONS, 0.6).unwrap();
    assert!(rep.fitted_order < 3.5, "{rep:?}");
}

#[test]
fn free_state_sits_at_the_floor() {
    let a = ar(smooth().decoupled(), 2.0);
    let m = mp(smooth().decoupled(), 2.0);
    for target in [Target::ArExact(&a), Target::MpExact(&m)] {
        let rep = convergence_study(target, &RESOLUTIONS, 1.0).unwrap();
        assert!(rep.residuals.iter().all(|&r| r < 1e-8), "{rep:?}");
        assert!(*rep.residuals.last().unwrap() < 1e-12, "{rep:?}");
    }
}

#[test]
fn study_preconditions() {
    let m = mp(smooth(), 2.0);
    assert!(matches!(
        convergence_study(Target::MpExact(&m), &[256, 512], 2.0),
        Err(Error::TooFewResolutions)
    ));
    assert!(matches!(
        convergence_study(Target::MpExact(&m), &[256, 500, 1000], 2.0),
        Err(Error::TooFewResolutions)
    ));
    let tight = Grid1D::new(0.0, 1.0, 256).unwrap();
    assert!(matches!(
        residual_norm(Target::MpExact(&m), &tight, 2.0),
        Err(Error::InsufficientPadding)
    ));
}
