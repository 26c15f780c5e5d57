//! JSON model schema.
//!
//! ```json
//! {"dim": 2,
//!  "hamiltonian": {"re": [[0.5, 0], [0, -0.5]], "im": [[0, 0], [0, 0]]},
//!  "channels": [{"rate": 1.0, "operator": {"re": [[0, 0], [1, 0]]}}],
//!  "unraveling": {"betas": [{"re": 0.0, "im": 0.3}], "mixing": null}}
//! ```
//!
//! Matrices are row-major lists of rows; a missing `im` means zero.
//! `unraveling` may give `"beta"` instead of `"betas"` to displace every
//! channel by the same amount.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::model::{JumpChannel, LindbladModel, UnravelingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for C64 {
    fn from(z: ComplexJson) -> Self {
        C64::new(z.re, z.im)
    }
}

/// `#[serde(with = "complex")]` adapter writing a complex number as `{"re", "im"}`.
pub mod complex {
    use super::{ComplexJson, C64};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C64, D::Error> {
        ComplexJson::deserialize(d).map(C64::from)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_operator(op: &Operator) -> Self {
        let rows = op.rows();
        Self {
            re: rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect(),
            im: Some(rows.iter().map(|r| r.iter().map(|z| z.im).collect()).collect()),
        }
    }

    pub fn to_operator(&self) -> Result<Operator> {
        let n = self.re.len();
        if let Some(im) = &self.im {
            if im.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: im.len() });
            }
        }
        let rows = (0..n)
            .map(|i| {
                let re = &self.re[i];
                let im = self.im.as_ref().map(|m| &m[i]);
                if let Some(im) = im {
                    if im.len() != re.len() {
                        return Err(Error::LengthMismatch { expected: re.len(), found: im.len() });
                    }
                }
                Ok((0..re.len()).map(|j| C64::new(re[j], im.map_or(0.0, |m| m[j]))).collect())
            })
            .collect::<Result<Vec<Vec<C64>>>>()?;
        let op = Operator::from_rows(&rows)?;
        if !op.is_finite() {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(op)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub rate: f64,
    pub operator: MatrixJson,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UnravelingJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<ComplexJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<ComplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixing: Option<MatrixJson>,
}

impl UnravelingJson {
    pub fn from_spec(spec: &UnravelingSpec) -> Self {
        Self {
            betas: Some(spec.betas().iter().map(|&b| b.into()).collect()),
            beta: None,
            mixing: spec.mixing().map(MatrixJson::from_operator),
        }
    }

    pub fn to_spec(&self, channels: usize) -> Result<UnravelingSpec> {
        let betas: Vec<C64> = match (&self.betas, &self.beta) {
            (Some(_), Some(_)) => {
                return Err(Error::Config("unraveling: give either `betas` or `beta`, not both".into()))
            }
            (Some(b), None) => b.iter().map(|&z| z.into()).collect(),
            (None, Some(b)) => vec![(*b).into(); channels],
            (None, None) => vec![C64::new(0.0, 0.0); channels],
        };
        if betas.len() != channels {
            return Err(Error::LengthMismatch { expected: channels, found: betas.len() });
        }
        let mixing = self.mixing.as_ref().map(MatrixJson::to_operator).transpose()?;
        UnravelingSpec::new(betas, mixing)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub dim: usize,
    pub hamiltonian: MatrixJson,
    #[serde(default)]
    pub channels: Vec<ChannelJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unraveling: Option<UnravelingJson>,
}

impl ModelJson {
    pub fn from_model(model: &LindbladModel, spec: Option<&UnravelingSpec>) -> Self {
        Self {
            dim: model.dim(),
            hamiltonian: MatrixJson::from_operator(model.hamiltonian()),
            channels: model
                .channels()
                .iter()
                .map(|c| ChannelJson { rate: c.rate(), operator: MatrixJson::from_operator(c.operator()) })
                .collect(),
            unraveling: spec.map(UnravelingJson::from_spec),
        }
    }

    pub fn to_model(&self) -> Result<(LindbladModel, UnravelingSpec)> {
        let h = self.hamiltonian.to_operator()?;
        if h.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: h.dim() });
        }
        let channels = self
            .channels
            .iter()
            .map(|c| JumpChannel::new(c.rate, c.operator.to_operator()?))
            .collect::<Result<Vec<_>>>()?;
        let model = LindbladModel::new(h, channels)?;
        let spec = self.unraveling.clone().unwrap_or_default().to_spec(model.channels().len())?;
        Ok((model, spec))
    }
}

pub fn model_from_json(text: &str) -> Result<(LindbladModel, UnravelingSpec)> {
    serde_json::from_str::<ModelJson>(text)?.to_model()
}

pub fn model_to_json(model: &LindbladModel, spec: Option<&UnravelingSpec>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ModelJson::from_model(model, spec))?)
}
