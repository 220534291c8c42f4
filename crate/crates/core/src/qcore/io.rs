//! JSON state files:
//!
//! ```text
//! {"kind":"pure"|"density","dimA":n,"dimB":m,"data":[[re,im],...]}
//! ```
//!
//! Density data is row-major. Numbers are written with 17 significant digits.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::ComplexMatrix;
use super::state::{DensityMatrix, PureState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum StateFile {
    Pure(PureState),
    Density(DensityMatrix),
}

impl StateFile {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            StateFile::Pure(p) => (p.dim_a(), p.dim_b()),
            StateFile::Density(d) => d.dims(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            StateFile::Pure(p) => p.projector(),
            StateFile::Density(d) => d.clone(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    kind: String,
    #[serde(rename = "dimA")]
    dim_a: usize,
    #[serde(rename = "dimB")]
    dim_b: usize,
    data: Vec<[f64; 2]>,
}

pub fn parse_state(text: &str) -> Result<StateFile> {
    let raw: RawState = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let data: Vec<C64> = raw.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
    match raw.kind.as_str() {
        "pure" => Ok(StateFile::Pure(PureState::new(raw.dim_a, raw.dim_b, data)?)),
        "density" => {
            let n = raw.dim_a * raw.dim_b;
            let m = ComplexMatrix::from_row_major(n, n, data)?;
            Ok(StateFile::Density(DensityMatrix::new(raw.dim_a, raw.dim_b, m)?))
        }
        other => Err(Error::Format(format!("unknown kind {other:?}"))),
    }
}

/// 17 significant digits, which round-trips every finite `f64`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    format!("{x:.16e}")
}

pub fn write_state(state: &StateFile) -> String {
    let (kind, (da, db), data): (&str, _, &[C64]) = match state {
        StateFile::Pure(p) => ("pure", (p.dim_a(), p.dim_b()), p.amplitudes()),
        StateFile::Density(d) => ("density", d.dims(), d.matrix().as_slice()),
    };
    let mut out = format!("{{\"kind\":\"{kind}\",\"dimA\":{da},\"dimB\":{db},\"data\":[");
    for (k, z) in data.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{},{}]", format_number(z.re), format_number(z.im));
    }
    out.push_str("]}");
    out
}

#[derive(Serialize)]
struct RawStateOut {
    kind: &'static str,
    #[serde(rename = "dimA")]
    dim_a: usize,
    #[serde(rename = "dimB")]
    dim_b: usize,
    data: Vec<[f64; 2]>,
}

/// Pure states embed in other JSON documents using the state-file layout.
impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawStateOut {
            kind: "pure",
            dim_a: self.dim_a(),
            dim_b: self.dim_b(),
            data: self.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawState::deserialize(d)?;
        if raw.kind != "pure" {
            return Err(serde::de::Error::custom(format!("expected kind \"pure\", got {:?}", raw.kind)));
        }
        let data = raw.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        PureState::new(raw.dim_a, raw.dim_b, data).map_err(serde::de::Error::custom)
    }
}
