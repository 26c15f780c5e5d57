//! Seeded property suite over random and scenario models.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::Operator;
use crate::model::{betadyne, kraus_residual, kraus_step, liouvillian_matrix, mix_channels, nhh, nhh_beta};
use crate::model::{JumpChannel, LindbladModel, UnravelingSpec};
use crate::scenarios::{build_kerr, KerrParams};
use crate::spectral::{eig2_closed, eig3_closed, eigendecompose, EigenSystem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    /// Worst value of the checked quantity over all cases.
    pub residual: f64,
    pub tolerance: f64,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl PropertyResult {
    fn below(name: &str, residual: f64, tolerance: f64, cases: usize) -> Self {
        Self { name: name.into(), passed: residual <= tolerance, residual, tolerance, cases, detail: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

impl ValidationReport {
    fn new(seed: u64, properties: Vec<PropertyResult>) -> Self {
        Self { seed, passed: properties.iter().all(|p| p.passed), properties }
    }
}

fn uniform_c(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_operator(rng: &mut impl Rng, dim: usize) -> Operator {
    Operator::from_fn(dim, |_, _| uniform_c(rng))
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> Operator {
    let a = random_operator(rng, dim);
    Operator::from_fn(dim, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()))
}

/// Unitary from Gram-Schmidt on a random complex matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> Operator {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| uniform_c(rng)).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    Operator::from_fn(n, |i, j| cols[j][i])
}

/// Random model with `dim` levels and `channels` jump channels.
pub fn random_model(rng: &mut impl Rng, dim: usize, channels: usize) -> LindbladModel {
    let h = random_hermitian(rng, dim);
    let chans = (0..channels)
        .map(|_| JumpChannel::new(rng.random_range(0.1..2.0), random_operator(rng, dim)).expect("positive rate"))
        .collect();
    LindbladModel::new(h, chans).expect("hermitian by construction")
}

fn random_case(rng: &mut impl Rng) -> (LindbladModel, UnravelingSpec) {
    let dim = rng.random_range(2..=4);
    let n = rng.random_range(1..=3);
    let model = random_model(rng, dim, n);
    let betas = (0..n).map(|_| uniform_c(rng)).collect();
    (model, UnravelingSpec::displacements(betas).expect("finite displacements"))
}

/// Largest Liouvillian change under the displaced-jump transform.
pub fn betadyne_invariance_residual(model: &LindbladModel, spec: &UnravelingSpec) -> Result<f64> {
    let l0 = liouvillian_matrix(model);
    let l1 = liouvillian_matrix(&betadyne(model, spec)?);
    Ok(l0.matrix().max_abs_diff(l1.matrix()))
}

/// Largest change of the Liouvillian and of the NHH under unitary channel mixing.
pub fn mixing_invariance_residual(model: &LindbladModel, r: &Operator) -> Result<f64> {
    let mixed = mix_channels(model, r)?;
    let dl = liouvillian_matrix(model).matrix().max_abs_diff(liouvillian_matrix(&mixed).matrix());
    let dh = nhh(model).max_abs_diff(&nhh(&mixed));
    Ok(dl.max(dh))
}

/// `log2(r(2 dt) / r(dt))` for the first-order Kraus map.
pub fn kraus_order(model: &LindbladModel, dt: f64) -> Result<f64> {
    let fine = kraus_residual(&kraus_step(model, dt)?);
    let coarse = kraus_residual(&kraus_step(model, 2.0 * dt)?);
    Ok((coarse / fine).log2())
}

/// Difference between the transformed model's NHH and the expanded closed form.
pub fn two_path_residual(model: &LindbladModel, spec: &UnravelingSpec) -> Result<f64> {
    let a = nhh(&betadyne(model, spec)?);
    let b = nhh_beta(model, spec)?;
    Ok(a.max_abs_diff(&b))
}

/// Written-out truncated Kerr NHH at zero detuning.
pub fn kerr_reference_matrix(kerr: f64, gamma: f64, alpha: C64, beta: C64) -> Operator {
    let i = C64::new(0.0, 1.0);
    let z = C64::new(0.0, 0.0);
    let s2 = std::f64::consts::SQRT_2;
    Operator::from_rows(&[
        vec![z, i * alpha.conj() - i * gamma * beta.conj(), z],
        vec![-i * alpha, C64::new(0.0, -0.5 * gamma), i * s2 * (alpha.conj() - gamma * beta.conj())],
        vec![z, -i * s2 * alpha, C64::new(2.0 * kerr, -gamma)],
    ])
    .expect("3x3")
    .plus_scaled(-0.5 * i * gamma * beta.norm_sqr(), &Operator::identity(3))
}

/// Eigenvalue distance between two systems sorted the same way.
pub fn eigenvalue_distance(a: &EigenSystem, b: &EigenSystem) -> f64 {
    a.eigenvalues.iter().zip(&b.eigenvalues).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Runs every property on `cases` random models drawn from `seed`.
pub fn run_validation(seed: u64, cases: usize) -> Result<ValidationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = cases.max(1);
    let mut inv = 0.0f64;
    let mut mix = 0.0f64;
    let mut two = 0.0f64;
    let mut order_dev = 0.0f64;
    for _ in 0..cases {
        let (model, spec) = random_case(&mut rng);
        inv = inv.max(betadyne_invariance_residual(&model, &spec)?);
        two = two.max(two_path_residual(&model, &spec)?);
        let r = random_unitary(&mut rng, model.channels().len());
        mix = mix.max(mixing_invariance_residual(&model, &r)?);
        order_dev = order_dev.max((kraus_order(&model, 1e-3)? - 2.0).abs());
    }

    let mut kerr = 0.0f64;
    for _ in 0..cases.min(20) {
        let alpha = uniform_c(&mut rng);
        let beta = uniform_c(&mut rng);
        let p = KerrParams { detuning: 0.0, kerr: 2.0, drive: alpha, gamma: 1.0, truncation: 3 };
        let got = nhh_beta(&build_kerr(&p)?, &UnravelingSpec::uniform(1, beta))?;
        kerr = kerr.max(got.max_abs_diff(&kerr_reference_matrix(2.0, 1.0, alpha, beta)));
    }

    let mut oracle = 0.0f64;
    for k in 0..cases {
        let a = random_operator(&mut rng, 2 + k % 2);
        let closed = if a.dim() == 2 { eig2_closed(&a)? } else { eig3_closed(&a)? };
        oracle = oracle.max(eigenvalue_distance(&closed, &eigendecompose(&a)?));
    }

    let properties = vec![
        PropertyResult::below("betadyne_liouvillian_invariance", inv, 1e-9, cases),
        PropertyResult::below("mixing_invariance", mix, 1e-9, cases),
        PropertyResult::below("kraus_residual_order", order_dev, 0.1, cases),
        PropertyResult::below("two_path_nhh", two, 1e-10, cases),
        PropertyResult::below("kerr_truncated_matrix", kerr, 1e-14, cases.min(20)),
        PropertyResult::below("closed_form_eigenvalues", oracle, 1e-9, cases),
    ];
    Ok(ValidationReport::new(seed, properties))
}

/// Properties that only need the supplied model.
pub fn validate_model(model: &LindbladModel, spec: &UnravelingSpec, seed: u64) -> Result<Vec<PropertyResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        PropertyResult::below(
            "model_betadyne_liouvillian_invariance",
            betadyne_invariance_residual(model, spec)?,
            1e-9,
            1,
        ),
        PropertyResult::below("model_two_path_nhh", two_path_residual(model, spec)?, 1e-10, 1),
    ];
    if !model.channels().is_empty() {
        let r = random_unitary(&mut rng, model.channels().len());
        out.push(PropertyResult::below("model_mixing_invariance", mixing_invariance_residual(model, &r)?, 1e-9, 1));
        let order = kraus_order(model, 1e-3)?;
        out.push(PropertyResult::below("model_kraus_residual_order", (order - 2.0).abs(), 0.1, 1));
    }
    Ok(out)
}

/// Report for a model that could not be built.
pub fn construction_failure(message: String) -> PropertyResult {
    PropertyResult {
        name: "model_construction".into(),
        passed: false,
        residual: f64::INFINITY,
        tolerance: 0.0,
        cases: 1,
        detail: Some(message),
    }
}

pub fn report_with(seed: u64, properties: Vec<PropertyResult>) -> ValidationReport {
    ValidationReport::new(seed, properties)
}
