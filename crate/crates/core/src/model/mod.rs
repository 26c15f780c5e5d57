//! Lindblad models and their unravelings.
//!
//! A [`LindbladModel`] holds a Hermitian Hamiltonian and a list of
//! `(rate, operator)` jump channels. The displaced-jump transform
//! ([`betadyne`]) replaces every `J` by `J + beta` and compensates the
//! Hamiltonian so the master equation is unchanged, while the no-jump
//! effective Hamiltonian ([`nhh_beta`]) changes.
//!
//! Note: in the single-channel measurement-backaction derivation the
//! displacement term of the effective Hamiltonian is sometimes printed as
//! `-gamma beta* c` without the factor `i`. The form used here,
//! `-i gamma beta* c`, is the one that follows from expanding
//! `H' - (i/2) gamma (J + beta)^dag (J + beta)` and it reproduces the
//! truncated Kerr matrix entry by entry.

pub mod json;

use std::ops::Deref;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{kron, Operator, SuperOperator};
use crate::tol;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct JumpChannel {
    rate: f64,
    operator: Operator,
}

impl JumpChannel {
    pub fn new(rate: f64, operator: Operator) -> Result<Self> {
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::InvalidParameter(format!("channel rate must be finite and >= 0, got {rate}")));
        }
        if !operator.is_finite() {
            return Err(Error::NonFinite("jump operator"));
        }
        Ok(Self { rate, operator })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    /// `J^dag J`.
    pub fn jdag_j(&self) -> Operator {
        self.operator.adjoint().matmul(&self.operator)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LindbladModel {
    hamiltonian: Operator,
    channels: Vec<JumpChannel>,
}

impl LindbladModel {
    /// Rejects Hamiltonians that are not Hermitian within `1e-10`.
    pub fn new(hamiltonian: Operator, channels: Vec<JumpChannel>) -> Result<Self> {
        if !hamiltonian.is_finite() {
            return Err(Error::NonFinite("hamiltonian"));
        }
        let defect = hamiltonian.hermiticity_defect();
        if defect > tol::STRUCTURAL {
            return Err(Error::NonHermitian { deviation: defect });
        }
        let d = hamiltonian.dim();
        for ch in &channels {
            if ch.operator.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: ch.operator.dim() });
            }
        }
        Ok(Self { hamiltonian, channels })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[JumpChannel] {
        &self.channels
    }

    pub fn max_rate(&self) -> f64 {
        self.channels.iter().map(|c| c.rate).fold(0.0, f64::max)
    }

    /// Upper bound on the summed first-order jump probability of one step,
    /// `dt * sum(rate * |J|^2)`.
    pub fn jump_load(&self, dt: f64) -> f64 {
        dt * self.channels.iter().map(|c| c.rate * c.operator.norm_2_bound().powi(2)).sum::<f64>()
    }
}

/// Per-channel displacements and an optional unitary mixing of the channels.
#[derive(Clone, Debug, PartialEq)]
pub struct UnravelingSpec {
    betas: Vec<C64>,
    mixing: Option<Operator>,
}

impl UnravelingSpec {
    pub fn new(betas: Vec<C64>, mixing: Option<Operator>) -> Result<Self> {
        if !betas.iter().all(|b| b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::NonFinite("displacement"));
        }
        if let Some(r) = &mixing {
            check_unitary(r)?;
            if r.dim() != betas.len() {
                return Err(Error::LengthMismatch { expected: r.dim(), found: betas.len() });
            }
        }
        Ok(Self { betas, mixing })
    }

    pub fn displacements(betas: Vec<C64>) -> Result<Self> {
        Self::new(betas, None)
    }

    /// Same displacement on every channel.
    pub fn uniform(channels: usize, beta: C64) -> Self {
        Self { betas: vec![beta; channels], mixing: None }
    }

    pub fn standard(channels: usize) -> Self {
        Self::uniform(channels, C64::new(0.0, 0.0))
    }

    pub fn betas(&self) -> &[C64] {
        &self.betas
    }

    pub fn mixing(&self) -> Option<&Operator> {
        self.mixing.as_ref()
    }

    fn check_channels(&self, model: &LindbladModel) -> Result<()> {
        if self.betas.len() != model.channels.len() {
            return Err(Error::LengthMismatch { expected: model.channels.len(), found: self.betas.len() });
        }
        Ok(())
    }
}

/// Generally non-Hermitian no-jump generator.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveHamiltonian(Operator);

impl EffectiveHamiltonian {
    pub fn new(op: Operator) -> Self {
        Self(op)
    }

    pub fn operator(&self) -> &Operator {
        &self.0
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }
}

impl Deref for EffectiveHamiltonian {
    type Target = Operator;
    fn deref(&self) -> &Operator {
        &self.0
    }
}

fn check_dim(model_dim: usize, rho: &Operator) -> Result<()> {
    if rho.dim() != model_dim {
        return Err(Error::DimensionMismatch { expected: model_dim, found: rho.dim() });
    }
    Ok(())
}

fn check_unitary(r: &Operator) -> Result<()> {
    let deviation = r.adjoint().matmul(r).max_abs_diff(&Operator::identity(r.dim()));
    if deviation > tol::STRUCTURAL {
        return Err(Error::NonUnitary { deviation });
    }
    Ok(())
}

/// `rate * (J rho J^dag - {J^dag J, rho} / 2)`.
pub fn dissipator_apply(channel: &JumpChannel, rho: &Operator) -> Result<Operator> {
    check_dim(channel.operator.dim(), rho)?;
    let j = &channel.operator;
    let jd = j.adjoint();
    let jdj = jd.matmul(j);
    let sandwich = j.matmul(rho).matmul(&jd);
    let anti = &jdj.matmul(rho) + &rho.matmul(&jdj);
    Ok(sandwich.plus_scaled(C64::new(-0.5, 0.0), &anti).scale_re(channel.rate))
}

/// `-i [H, rho] + sum_mu D_mu[rho]`.
pub fn lindblad_rhs(model: &LindbladModel, rho: &Operator) -> Result<Operator> {
    check_dim(model.dim(), rho)?;
    let mut out = model.hamiltonian.commutator(rho)?.scale(-I);
    for ch in &model.channels {
        out = &out + &dissipator_apply(ch, rho)?;
    }
    Ok(out)
}

/// Liouvillian acting on column-stacked density matrices:
/// `vec(A rho B) = (B^T (x) A) vec(rho)`.
pub fn liouvillian_matrix(model: &LindbladModel) -> SuperOperator {
    let d = model.dim();
    let id = Operator::identity(d);
    let h = &model.hamiltonian;
    let mut l = (&kron(&id, h) - &kron(&h.transpose(), &id)).scale(-I);
    for ch in &model.channels {
        let j = &ch.operator;
        let jdj = ch.jdag_j();
        let term = &kron(&j.conj(), j) - &(&kron(&id, &jdj) + &kron(&jdj.transpose(), &id)).scale_re(0.5);
        l = l.plus_scaled(C64::new(ch.rate, 0.0), &term);
    }
    SuperOperator::from_matrix(d, l).expect("liouvillian has d^2 dimension")
}

/// `H - (i/2) sum rate J^dag J`.
pub fn nhh(model: &LindbladModel) -> EffectiveHamiltonian {
    let mut out = model.hamiltonian.clone();
    for ch in &model.channels {
        out = out.plus_scaled(-0.5 * I * ch.rate, &ch.jdag_j());
    }
    EffectiveHamiltonian(out)
}

/// Displaced-jump transform: `J -> J + beta`, `H -> H - sum (i rate / 2)(beta* J - beta J^dag)`.
///
/// Rates are kept; only operators are displaced. When the spec carries a
/// mixing matrix the channels are mixed first (see [`mix_channels`]) and
/// the displacements then refer to the mixed channels.
pub fn betadyne(model: &LindbladModel, spec: &UnravelingSpec) -> Result<LindbladModel> {
    spec.check_channels(model)?;
    let model = match &spec.mixing {
        Some(r) => mix_channels(model, r)?,
        None => model.clone(),
    };
    let d = model.dim();
    let id = Operator::identity(d);
    let mut h = model.hamiltonian.clone();
    let mut channels = Vec::with_capacity(model.channels.len());
    for (ch, &beta) in model.channels.iter().zip(&spec.betas) {
        let j = &ch.operator;
        let correction = j.scale(beta.conj()).plus_scaled(-beta, &j.adjoint());
        h = h.plus_scaled(-0.5 * I * ch.rate, &correction);
        channels.push(JumpChannel::new(ch.rate, j.plus_scaled(beta, &id))?);
    }
    // Remove rounding-level anti-Hermitian residue before validation.
    let h = Operator::from_fn(d, |i, j| 0.5 * (h[(i, j)] + h[(j, i)].conj()));
    LindbladModel::new(h, channels)
}

/// Effective Hamiltonian of the displaced unraveling, in expanded form:
/// `H - i sum rate beta* J - (i/2) sum rate J^dag J - (i/2) sum rate |beta|^2`.
///
/// This does not go through [`betadyne`]; the two paths are checked against
/// each other in tests.
pub fn nhh_beta(model: &LindbladModel, spec: &UnravelingSpec) -> Result<EffectiveHamiltonian> {
    spec.check_channels(model)?;
    let mixed;
    let model = match &spec.mixing {
        Some(r) => {
            mixed = mix_channels(model, r)?;
            &mixed
        }
        None => model,
    };
    let d = model.dim();
    let mut out = model.hamiltonian.clone();
    let mut shift = 0.0;
    for (ch, &beta) in model.channels.iter().zip(&spec.betas) {
        out = out.plus_scaled(-I * ch.rate * beta.conj(), &ch.operator);
        out = out.plus_scaled(-0.5 * I * ch.rate, &ch.jdag_j());
        shift += ch.rate * beta.norm_sqr();
    }
    out = out.plus_scaled(-0.5 * I * shift, &Operator::identity(d));
    Ok(EffectiveHamiltonian(out))
}

/// Mixes channels by a unitary: `J'_mu = sum_nu R[mu, nu] sqrt(rate_nu) J_nu`
/// with every output rate equal to 1 (the rates are absorbed into the operators).
pub fn mix_channels(model: &LindbladModel, r: &Operator) -> Result<LindbladModel> {
    let n = model.channels.len();
    if r.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: r.dim() });
    }
    check_unitary(r)?;
    let d = model.dim();
    let channels = (0..n)
        .map(|mu| {
            let op =
                model.channels.iter().enumerate().fold(Operator::zeros(d), |acc, (nu, ch)| {
                    acc.plus_scaled(r[(mu, nu)] * ch.rate.sqrt(), &ch.operator)
                });
            JumpChannel::new(1.0, op)
        })
        .collect::<Result<Vec<_>>>()?;
    LindbladModel::new(model.hamiltonian.clone(), channels)
}

/// First-order Kraus operators of one step: `[1 - i H_eff dt, sqrt(rate dt) J, ...]`.
pub fn kraus_step(model: &LindbladModel, dt: f64) -> Result<Vec<Operator>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    let d = model.dim();
    let heff = nhh(model);
    let mut out = vec![Operator::identity(d).plus_scaled(-I * dt, &heff)];
    out.extend(model.channels.iter().map(|ch| ch.operator.scale_re((ch.rate * dt).sqrt())));
    Ok(out)
}

/// `|sum K^dag K - 1|_F`; second order in `dt` for [`kraus_step`] output.
pub fn kraus_residual(kraus: &[Operator]) -> f64 {
    let d = kraus[0].dim();
    let sum = kraus.iter().fold(Operator::zeros(d), |acc, k| &acc + &k.adjoint().matmul(k));
    (&sum - &Operator::identity(d)).frobenius_norm()
}
