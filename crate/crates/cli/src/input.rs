//! Argument loaders: state files, presets and spectrum literals.

use std::fs;
use std::io::Read;
use std::path::Path;

use elocc_core::mixedcat::{example_spec, RankTwoSpec};
use elocc_core::presets;
use elocc_core::qcore::io::{parse_state, StateFile};
use elocc_core::qcore::schmidt_spectrum;
use elocc_core::{Error, PureState, Spectrum};

/// Preset name of the rank-two example class.
pub const CLASS_PRESET: &str = "paper-sec3";

#[derive(Debug)]
pub enum InputError {
    Io(String),
    Lib(Error),
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError::Lib(e)
    }
}

fn read_text(arg: &str) -> Result<String, InputError> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| InputError::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(arg).map_err(|e| InputError::Io(format!("{arg}: {e}")))
}

/// A preset name, `-` for stdin, or a path to a state file.
pub fn load_state(arg: &str) -> Result<StateFile, InputError> {
    if let Some(p) = presets::by_name(arg) {
        return Ok(StateFile::Pure(p));
    }
    if arg.starts_with("psi-eq14:") {
        return Err(Error::InvalidArgument(format!("{arg}: epsilon must be a number in [0,1]")).into());
    }
    if arg != "-" && !Path::new(arg).exists() {
        return Err(InputError::Io(format!(
            "{arg}: no such file or preset (presets: {})",
            presets::PRESET_NAMES.join(", ")
        )));
    }
    Ok(parse_state(&read_text(arg)?)?)
}

pub fn load_pure(arg: &str) -> Result<PureState, InputError> {
    match load_state(arg)? {
        StateFile::Pure(p) => Ok(p),
        StateFile::Density(_) => Err(Error::InvalidArgument(format!("{arg}: expected a pure state")).into()),
    }
}

/// A JSON array of weights, or any pure-state argument (its Schmidt spectrum).
pub fn load_spectrum(arg: &str) -> Result<Spectrum, InputError> {
    if arg.trim_start().starts_with('[') {
        let v: Vec<f64> =
            serde_json::from_str(arg).map_err(|e| Error::Format(format!("spectrum {arg:?}: {e}")))?;
        return Ok(Spectrum::new(v)?);
    }
    Ok(schmidt_spectrum(&load_pure(arg)?))
}

/// The class preset at `lambda`, or a JSON spec file.
pub fn load_spec(arg: &str, lambda: f64) -> Result<RankTwoSpec, InputError> {
    if arg == CLASS_PRESET {
        return Ok(example_spec(lambda)?);
    }
    let text = read_text(arg)?;
    let spec: RankTwoSpec = serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}
