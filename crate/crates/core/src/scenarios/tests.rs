use super::*;
use crate::linalg::Operator;
use crate::model::{betadyne, liouvillian_matrix, nhh, nhh_beta, UnravelingSpec};
use crate::spectral::{coalescence, eig2_closed, eigendecompose};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rows(r: &[[C64; 2]; 2]) -> Operator {
    Operator::from_rows(&[r[0].to_vec(), r[1].to_vec()]).unwrap()
}

#[test]
fn gain_loss_nhh_is_diagonal() {
    let p = GainLossQubitParams { omega: 1.0, gamma_minus: 1.0, gamma_plus: 0.5 };
    let h = nhh(&build_gain_loss_qubit(&p).unwrap());
    let want = Operator::diagonal(&[c(0.5, -0.5), c(-0.5, -0.25)]);
    assert!(h.max_abs_diff(&want) < 1e-15);
}

#[test]
fn gain_loss_displaced_matrix() {
    let p = GainLossQubitParams { omega: 0.7, gamma_minus: 1.3, gamma_plus: 0.4 };
    let beta = c(0.3, -0.8);
    let model = build_gain_loss_qubit(&p).unwrap();
    let got = nhh_beta(&model, &UnravelingSpec::uniform(2, beta)).unwrap();
    let (w, gm, gp) = (p.omega, p.gamma_minus, p.gamma_plus);
    let i = c(0.0, 1.0);
    let half =
        rows(&[[c(w, -gm), -2.0 * i * beta.conj() * gp], [-2.0 * i * beta.conj() * gm, c(-w, -gp)]]).scale_re(0.5);
    let want = half.plus_scaled(-0.5 * i * beta.norm_sqr() * (gm + gp), &Operator::identity(2));
    assert!(got.max_abs_diff(&want) < 1e-15);
}

#[test]
fn gain_loss_candidates() {
    let p = GainLossQubitParams { omega: 1.0, gamma_minus: 1.0, gamma_plus: 0.5 };
    let cand = gain_loss_ep_candidates(&p).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((cand[0] - c(s, s / 4.0)).norm() < 1e-12);
    let model = build_gain_loss_qubit(&p).unwrap();
    let measure = |b: C64| coalescence(&nhh_beta(&model, &UnravelingSpec::uniform(2, b)).unwrap()).unwrap().measure;
    assert!(measure(cand[0]) < 1e-6);
    assert!(measure(cand[1]) < 1e-6);
    assert!(measure(cand[2]) > 1e-2);
    assert!(measure(cand[3]) > 1e-2);

    let sym = GainLossQubitParams { omega: 0.0, gamma_minus: 0.6, gamma_plus: 0.6 };
    assert!(gain_loss_ep_candidates(&sym).unwrap().iter().all(|z| z.norm() == 0.0));
    let bad = GainLossQubitParams { gamma_plus: 0.0, ..p };
    assert!(gain_loss_ep_candidates(&bad).is_err());
}

#[test]
fn driven_qubit_matrices() {
    let p = DrivenQubitParams { omega: 0.9, gamma_minus: 1.1 };
    let model = build_driven_qubit(&p).unwrap();
    let (w, g) = (p.omega, p.gamma_minus);
    let i = c(0.0, 1.0);
    let plain = rows(&[[c(0.0, -g), c(w, 0.0)], [c(w, 0.0), c(0.0, 0.0)]]).scale_re(0.5);
    assert!(nhh(&model).max_abs_diff(&plain) < 1e-15);
    let beta = c(-0.2, 0.45);
    let shifted = rows(&[[c(0.0, -g), c(w, 0.0)], [w - 2.0 * i * beta.conj() * g, c(0.0, 0.0)]])
        .scale_re(0.5)
        .plus_scaled(-0.5 * i * beta.norm_sqr() * g, &Operator::identity(2));
    let got = nhh_beta(&model, &UnravelingSpec::uniform(1, beta)).unwrap();
    assert!(got.max_abs_diff(&shifted) < 1e-15);
}

#[test]
fn driven_qubit_closed_form_eigenvalues() {
    let p = DrivenQubitParams { omega: 1.0, gamma_minus: 1.0 };
    let e = driven_qubit_eigenvalues(&p, c(0.0, 0.0));
    let r3 = 3f64.sqrt();
    let mut want = [c(r3 / 4.0, -0.25), c(-r3 / 4.0, -0.25)];
    want.sort_by(|a, b| b.re.total_cmp(&a.re));
    assert!((e[0] - want[0]).norm() < 1e-15 && (e[1] - want[1]).norm() < 1e-15);

    let model = build_driven_qubit(&p).unwrap();
    for k in 0..5 {
        let beta = c(0.1 * k as f64, -0.3 + 0.2 * k as f64);
        let h = nhh_beta(&model, &UnravelingSpec::uniform(1, beta)).unwrap();
        let sys = eig2_closed(&h).unwrap();
        let mut e = driven_qubit_eigenvalues(&p, beta).to_vec();
        e.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        for (x, y) in sys.eigenvalues.iter().zip(&e) {
            assert!((x - y).norm() < 1e-12, "{x} {y}");
        }
    }
}

#[test]
fn driven_qubit_eps() {
    let p = DrivenQubitParams { omega: 1.0, gamma_minus: 1.0 };
    assert!((driven_qubit_ep_beta(&p).unwrap() - c(0.0, 0.375)).norm() < 1e-15);
    let model = build_driven_qubit(&p).unwrap();
    let h = nhh_beta(&model, &UnravelingSpec::uniform(1, c(0.0, 0.375))).unwrap();
    assert!(coalescence(&h).unwrap().measure < 1e-6);

    let at_half = build_driven_qubit(&DrivenQubitParams { omega: 0.5, gamma_minus: 1.0 }).unwrap();
    assert!(coalescence(&nhh(&at_half)).unwrap().measure < 1e-6);
    assert!(driven_qubit_ep_beta(&DrivenQubitParams { omega: 0.0, gamma_minus: 1.0 }).is_err());
}

#[test]
fn kerr_truncated_matrix() {
    let p = KerrParams { detuning: 0.0, kerr: 2.0, drive: c(0.13, -0.4), gamma: 1.0, truncation: 3 };
    let beta = c(-0.5275, -0.078);
    let model = build_kerr(&p).unwrap();
    let got = nhh_beta(&model, &UnravelingSpec::uniform(1, beta)).unwrap();
    let (a, g, u) = (p.drive, p.gamma, p.kerr);
    let i = c(0.0, 1.0);
    let z = c(0.0, 0.0);
    let s2 = 2f64.sqrt();
    let want = Operator::from_rows(&[
        vec![z, i * a.conj() - i * g * beta.conj(), z],
        vec![-i * a, c(0.0, -0.5 * g), i * s2 * (a.conj() - g * beta.conj())],
        vec![z, -i * s2 * a, c(2.0 * u, -g)],
    ])
    .unwrap()
    .plus_scaled(-0.5 * i * g * beta.norm_sqr(), &Operator::identity(3));
    assert!(got.max_abs_diff(&want) < 1e-14, "{:?}", got.operator());
}

#[test]
fn kerr_diagonal_limit() {
    let p = KerrParams { drive: c(0.0, 0.0), ..Default::default() };
    let h = nhh(&build_kerr(&p).unwrap());
    assert!(h.max_abs_diff(&Operator::diagonal(&[c(0.0, 0.0), c(0.0, -0.5), c(4.0, -1.0)])) < 1e-15);
    assert!(build_kerr(&KerrParams { truncation: 2, ..Default::default() }).is_err());
}

#[test]
fn three_level_structure() {
    let p = ThreeLevelParams { omega: 1.0, delta_omega: 0.3, big_omega: 0.05, gamma_eg: 0.01, gamma_fe: 1.0 };
    assert!((p.effective_gain() - 0.01).abs() < 1e-15);
    let m = build_three_level(&p).unwrap();
    assert_eq!(m.dim(), 3);
    assert_eq!(m.hamiltonian()[(LEVEL_G, LEVEL_F)], c(0.05, 0.0));
    assert_eq!(m.hamiltonian()[(LEVEL_E, LEVEL_E)], c(1.0, 0.0));
    assert_eq!(m.channels()[1].operator()[(LEVEL_E, LEVEL_F)], c(1.0, 0.0));
    assert!(build_three_level(&ThreeLevelParams { gamma_fe: 0.0, ..p }).is_err());
}

#[test]
fn scenarios_keep_their_liouvillian_under_displacement() {
    for name in Scenario::NAMES {
        let model = Scenario::by_name(name).unwrap().build().unwrap();
        let n = model.channels().len();
        let spec =
            UnravelingSpec::displacements((0..n).map(|k| c(0.3 - 0.1 * k as f64, 0.2 * k as f64 + 0.1)).collect())
                .unwrap();
        let l0 = liouvillian_matrix(&model);
        let l1 = liouvillian_matrix(&betadyne(&model, &spec).unwrap());
        assert!(l0.matrix().max_abs_diff(l1.matrix()) < 1e-10, "{name}");
    }
}

#[test]
fn scenario_json_roundtrip() {
    let s: Scenario = serde_json::from_str(r#"{"scenario":"kerr","params":{"kerr":3.0}}"#).unwrap();
    match s {
        Scenario::Kerr(p) => {
            assert_eq!(p.kerr, 3.0);
            assert_eq!(p.truncation, 3);
        }
        _ => panic!("wrong scenario"),
    }
    let back: Scenario = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
    assert!(Scenario::by_name("nope").is_err());
    assert!(serde_json::from_str::<Scenario>(r#"{"scenario":"kerr","params":{"typo":1}}"#).is_err());
}

#[test]
fn gain_loss_at_zero_beta_never_coalesces() {
    for k in 0..=20 {
        let p = GainLossQubitParams { omega: 1.0, gamma_minus: 1.0, gamma_plus: 0.1 * k as f64 };
        let sys = eigendecompose(&nhh(&build_gain_loss_qubit(&p).unwrap())).unwrap();
        assert!(sys.vectors[0].inner(&sys.vectors[1]).unwrap().norm() < 1e-12);
    }
}
