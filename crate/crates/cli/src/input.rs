//! Fan documents and class arguments.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use torex_core::complex::RaySet;
use torex_core::fan::face_fan_from_points;
use torex_core::{PicClass, StackyFan, TorexError};

/// The on-disk fan format. Cones are synthesized from the face fan of the
/// rays when `max_cones` is absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torex_version: Option<String>,
    pub d: usize,
    #[serde(with = "torex_core::bigjson::int_rows")]
    pub rays: Vec<Vec<BigInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cones: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trusted_complete: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug)]
pub enum InputError {
    Io { path: String, message: String },
    /// Malformed JSON, anchored at `line:column`.
    Json { source: String, line: usize, column: usize, message: String },
    Fan(String),
    Class(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io { path, message } => write!(f, "cannot read {path}: {message}"),
            InputError::Json { source, line, column, message } => {
                write!(f, "{source}:{line}:{column}: {message}")
            }
            InputError::Fan(m) => write!(f, "invalid fan: {m}"),
            InputError::Class(m) => write!(f, "invalid class: {m}"),
        }
    }
}

fn json_error(source: &str, e: &serde_json::Error) -> InputError {
    // serde_json appends " at line L column C"; the anchor already carries it
    let full = e.to_string();
    let message = match full.rfind(" at line ") {
        Some(i) => full[..i].to_string(),
        None => full,
    };
    InputError::Json {
        source: source.to_string(),
        line: e.line(),
        column: e.column(),
        message,
    }
}

impl FanDocument {
    pub fn parse(text: &str, source: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| json_error(source, &e))
    }

    pub fn read(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    fn check_shape(&self) -> Result<(), InputError> {
        if let Some(r) = self.rays.iter().position(|r| r.len() != self.d) {
            return Err(InputError::Fan(format!(
                "ray {r} has length {}, expected d = {}",
                self.rays[r].len(),
                self.d
            )));
        }
        Ok(())
    }

    /// The fan as written, without validation (cones synthesized if absent).
    pub fn to_unchecked(&self) -> Result<StackyFan, InputError> {
        self.check_shape()?;
        let trusted = self.trusted_complete.unwrap_or(false);
        match &self.max_cones {
            Some(cones) => StackyFan::from_parts(
                self.d,
                self.rays.clone(),
                cones.iter().map(|c| RaySet::from_indices(c.iter().copied())).collect(),
                trusted,
            )
            .map_err(|e| InputError::Fan(e.to_string())),
            None => {
                let mut fan = face_fan_from_points(&self.rays).map_err(|e| {
                    InputError::Fan(format!("max_cones absent and the face fan cannot be formed: {e}"))
                })?;
                fan.trusted_complete |= trusted;
                Ok(fan)
            }
        }
    }

    /// A validated fan. Surfaces are re-sorted clockwise; the returned
    /// warnings say so.
    pub fn to_fan(&self) -> Result<(StackyFan, Vec<String>), InputError> {
        let fan = self.to_unchecked()?;
        fan.ensure_valid().map_err(|e| InputError::Fan(e.to_string()))?;
        let mut warnings = Vec::new();
        if fan.d == 2 && !fan.is_clockwise() {
            let (sorted, perm) = fan.to_clockwise().map_err(|e| InputError::Fan(e.to_string()))?;
            warnings.push(format!(
                "rays re-sorted clockwise; new ray k is input ray {perm:?}[k], and class coordinates refer to the new order"
            ));
            return Ok((sorted, warnings));
        }
        Ok((fan, warnings))
    }

    /// `name`, else the file stem.
    pub fn display_name(&self, path: &Path) -> String {
        self.name.clone().unwrap_or_else(|| {
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "fan".into())
        })
    }
}

impl From<&StackyFan> for FanDocument {
    fn from(fan: &StackyFan) -> Self {
        FanDocument {
            torex_version: Some(torex_core::VERSION.to_string()),
            d: fan.d,
            rays: fan.rays.clone(),
            max_cones: Some(fan.max_cones.iter().map(|c| c.to_vec()).collect()),
            trusted_complete: fan.trusted_complete.then_some(true),
            name: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(PicClass),
    Many(Vec<PicClass>),
}

/// Each `--class` value is one class object or an array of them.
pub fn parse_classes(args: &[String]) -> Result<Vec<PicClass>, InputError> {
    let mut out = Vec::new();
    for (i, a) in args.iter().enumerate() {
        let source = format!("--class #{}", i + 1);
        // parse as a value first so syntax errors keep their position
        let value: serde_json::Value = serde_json::from_str(a).map_err(|e| json_error(&source, &e))?;
        match serde_json::from_value::<OneOrMany>(value) {
            Ok(OneOrMany::One(c)) => out.push(c),
            Ok(OneOrMany::Many(v)) => out.extend(v),
            Err(_) => {
                return Err(InputError::Class(format!(
                    "{source}: expected {{\"free\": [...], \"torsion\": [...]}} or an array of those"
                )))
            }
        }
    }
    Ok(out)
}

impl From<TorexError> for InputError {
    fn from(e: TorexError) -> Self {
        InputError::Class(e.to_string())
    }
}
