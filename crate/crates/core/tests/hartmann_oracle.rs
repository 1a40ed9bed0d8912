//! Hartmann closed forms against 50-digit reference values produced by
//! `oracles/hartmann_oracle.py`.

#![allow(clippy::excessive_precision)]

use pisubspace::models::{
    hartmann_b_ind, hartmann_number, hartmann_u_avg, HartmannConstants, HartmannInputs,
    HartmannModel, ModelFunction,
};

const U_AVG_REF: f64 = 2.88364827098168192267617416438;
const B_IND_REF: f64 = 0.1667632535251572190745769143;
const HA_REF: f64 = 1.58113883008418966599944677222;
const U_AVG_SMALL_B: f64 = 3.33333333333111111111111322751;
const B_IND_SMALL_B: f64 = 4.16666666666250000000000421627e-7;

const U_GRAD_CENTER: [f64; 5] = [
    -2.554084453092762420211315,
    0.0,
    3.472642694372025869773738,
    0.1715364269121790352946245,
    -0.4408819669122378346053265,
];
const B_GRAD_CENTER: [f64; 5] = [
    -0.07807967492004617734235758,
    0.0,
    0.1091398705816871968709948,
    -0.1009165158684087534564169,
    0.1191197226881416523154378,
];
const CORNER: [f64; 5] = [0.3, -0.7, 0.9, -0.2, -0.95];
const U_GRAD_CORNER: [f64; 5] = [
    -5.087321131820553424667298,
    0.0,
    6.614088877245452023569409,
    0.03882169980423181693732659,
    -0.09977931612933081401020191,
];
const B_GRAD_CORNER: [f64; 5] = [
    -0.06540216736537910241400711,
    0.0,
    0.08528336379509789050516585,
    -0.08453107505269697764994149,
    0.1076638844556138682192713,
];

fn reference(b0: f64) -> HartmannInputs {
    HartmannInputs {
        mu: 0.1,
        rho: 2.0,
        dpdx: 1.0,
        eta: 1.0,
        b0,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn assert_grad(got: &[f64], want: &[f64], tol: f64) {
    let scale = want.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert!((g - w).abs() <= tol * scale, "component {i}: {g} vs {w}");
    }
}

#[test]
fn values_at_reference_point() {
    let c = HartmannConstants::default();
    assert!(rel(hartmann_u_avg(&reference(0.5), &c).unwrap(), U_AVG_REF) < 1e-14);
    assert!(rel(hartmann_b_ind(&reference(0.5), &c).unwrap(), B_IND_REF) < 1e-14);
    assert!(rel(hartmann_number(&reference(0.5), 1.0), HA_REF) < 1e-15);
}

#[test]
fn small_field_limits() {
    let c = HartmannConstants::default();
    let u = hartmann_u_avg(&reference(1e-6), &c).unwrap();
    let b = hartmann_b_ind(&reference(1e-6), &c).unwrap();
    assert!(rel(u, U_AVG_SMALL_B) < 1e-14);
    assert!(rel(b, B_IND_SMALL_B) < 1e-14);
    // leading-order series terms
    assert!(rel(u, 1.0 / (3.0 * 0.1)) < 1e-9);
    assert!(rel(b, 1e-6 / (24.0 * 0.1)) < 1e-9);
}

#[test]
fn series_limit_converges_at_second_order() {
    let c = HartmannConstants::default();
    let err = |b0: f64| rel(hartmann_u_avg(&reference(b0), &c).unwrap(), 1.0 / 0.3);
    let errb = |b0: f64| rel(hartmann_b_ind(&reference(b0), &c).unwrap(), b0 / 2.4);
    for (h1, h2) in [(0.02, 0.01), (0.2, 0.1)] {
        assert!((err(h1) / err(h2)).log2() > 1.9);
        assert!((errb(h1) / errb(h2)).log2() > 1.9);
    }
}

#[test]
fn gradients_at_center_and_corner() {
    let u = HartmannModel::u_avg();
    let b = HartmannModel::b_ind();
    assert_grad(&u.gradient(&[0.0; 5]).unwrap(), &U_GRAD_CENTER, 1e-14);
    assert_grad(&b.gradient(&[0.0; 5]).unwrap(), &B_GRAD_CENTER, 1e-14);
    assert_grad(&u.gradient(&CORNER).unwrap(), &U_GRAD_CORNER, 1e-14);
    assert_grad(&b.gradient(&CORNER).unwrap(), &B_GRAD_CORNER, 1e-14);
}
