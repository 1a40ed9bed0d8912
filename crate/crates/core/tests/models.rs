use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use pisubspace::models::{
    dimensionless_b_ind, dimensionless_u_avg, finite_difference_gradient, mhd_pi_values,
    CharacteristicScales, FdGradientModel, HartmannInputs, HartmannModel, InertExtension,
    ModelFunction, Parameter, RidgeProfile, SyntheticRidge,
};
use pisubspace::seeding::{uniform_point, Purpose};

fn hartmann_models() -> [HartmannModel; 2] {
    [HartmannModel::u_avg(), HartmannModel::b_ind()]
}

#[test]
fn analytic_gradients_match_central_differences() {
    for model in hartmann_models() {
        for i in 0..100 {
            let xi = uniform_point(31, Purpose::GradientCheck, i, 5);
            let g = model.gradient(&xi).unwrap();
            let fd = finite_difference_gradient(|x| model.value(x), &xi, 1e-6).unwrap();
            let scale = g.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            for (a, b) in g.iter().zip(&fd) {
                assert!(
                    (a - b).abs() < 1e-6 * scale,
                    "{}: {g:?} vs {fd:?}",
                    model.name()
                );
            }
        }
    }
}

#[test]
fn fd_wrapper_tracks_analytic_gradient() {
    let model = HartmannModel::b_ind();
    let fd = FdGradientModel::new(HartmannModel::b_ind(), 1e-6).unwrap();
    let xi = [0.2, 0.1, -0.3, 0.5, 0.9];
    let (a, b) = (model.gradient(&xi).unwrap(), fd.gradient(&xi).unwrap());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-7);
    }
    assert!(FdGradientModel::new(HartmannModel::b_ind(), 0.0).is_err());
}

#[test]
fn hartmann_gradient_rejects_points_outside_box() {
    assert!(HartmannModel::u_avg()
        .gradient(&[1.5, 0.0, 0.0, 0.0, 0.0])
        .is_err());
    assert!(HartmannModel::u_avg().value(&[0.0; 4]).is_err());
}

#[test]
fn hartmann_number_at_reference_point() {
    let x = HartmannInputs {
        mu: 0.1,
        rho: 2.0,
        dpdx: 1.0,
        eta: 1.0,
        b0: 0.5,
    };
    let pi = mhd_pi_values(&x, 1.0, CharacteristicScales::default()).unwrap();
    assert!((pi.hartmann - 0.5 / 0.1f64.sqrt()).abs() < 1e-15);
    assert!((pi.reynolds - 20.0).abs() < 1e-13);
    let bad = HartmannInputs { mu: -1.0, ..x };
    assert!(mhd_pi_values(&bad, 1.0, CharacteristicScales::default()).is_err());
}

#[test]
fn inert_extension_ignores_last_coordinate() {
    let base = HartmannModel::u_avg();
    let ext = InertExtension::new(
        HartmannModel::u_avg(),
        Parameter::new("extra", 1.0, 2.0).unwrap(),
    )
    .unwrap();
    let xi = [0.1, 0.2, 0.3, 0.4, 0.5];
    let mut xe = xi.to_vec();
    xe.push(-0.7);
    assert_eq!(ext.value(&xe).unwrap(), base.value(&xi).unwrap());
    let g = ext.gradient(&xe).unwrap();
    assert_eq!(g[5], 0.0);
    assert_eq!(&g[..5], base.gradient(&xi).unwrap().as_slice());
}

proptest! {
    #[test]
    fn rho_component_is_exactly_zero(xi in proptest::collection::vec(-1.0f64..=1.0, 5)) {
        for model in hartmann_models() {
            prop_assert_eq!(model.gradient(&xi).unwrap()[1], 0.0);
        }
    }

    #[test]
    fn dimensionless_forms_depend_on_product(
        re in 0.01f64..100.0, ha in 0.01f64..20.0, dp in 0.01f64..10.0, mu0 in 0.1f64..10.0,
    ) {
        for a in [0.5, 2.0, 10.0] {
            let u = dimensionless_u_avg(re, ha, dp).unwrap();
            let ua = dimensionless_u_avg(a * re, ha, dp / a).unwrap();
            prop_assert!((u - ua).abs() <= 1e-12 * u.abs());
            let b = dimensionless_b_ind(re, ha, dp, mu0).unwrap();
            let ba = dimensionless_b_ind(a * re, ha, dp / a, mu0).unwrap();
            prop_assert!((b - ba).abs() <= 1e-12 * b.abs());
        }
        let u = dimensionless_u_avg(re, ha, dp).unwrap();
        prop_assert!((dimensionless_u_avg(2.0 * re, ha, dp).unwrap() - 2.0 * u).abs() <= 1e-14 * u.abs());
    }

    #[test]
    fn ridge_is_constant_along_null_directions(
        a in proptest::collection::vec(-1.0f64..1.0, 10),
        z in proptest::collection::vec(-1.0f64..1.0, 5),
        t in -0.3f64..0.3,
    ) {
        let a = DMatrix::from_column_slice(5, 2, &a);
        prop_assume!(a.clone().singular_values().min() > 1e-3);
        let f = SyntheticRidge::new(a.clone(), RidgeProfile::SineSum).unwrap();
        // project z onto null(A^T)
        let q = a.clone().qr().q();
        let z = DVector::from_vec(z);
        let w = &z - &q * (q.transpose() * &z);
        prop_assume!(w.norm() > 1e-6);
        let w = w.normalize();
        let xi = [0.1, -0.2, 0.3, 0.0, -0.1];
        let moved: Vec<f64> = xi.iter().zip(w.iter()).map(|(x, d)| x + t * d).collect();
        let (f0, f1) = (f.value(&xi).unwrap(), f.value(&moved).unwrap());
        prop_assert!((f0 - f1).abs() < 1e-12);
    }
}
