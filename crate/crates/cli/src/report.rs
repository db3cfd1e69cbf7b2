use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

use theta_forge::coding::CodingError;
use theta_forge::graph::GraphError;
use theta_forge::hom::HomError;
use theta_forge::projrank::RepError;
use theta_forge::theta::ThetaError;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;
pub const EXIT_REPRODUCE: i32 = 5;

/// Machine-readable record of one invocation, printed with `--json`.
///
/// `results` depends only on the inputs and tolerances; wall-clock data lives
/// in `timings`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    pub timings: BTreeMap<String, f64>,
    pub version: String,
    pub tolerances: BTreeMap<String, f64>,
    /// Non-zero when the command ran to completion but a check failed.
    #[serde(skip)]
    pub exit_code: i32,
    #[serde(skip)]
    pub text: String,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: Value::Null,
            timings: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: BTreeMap::new(),
            exit_code: 0,
            text: String::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn tol(&mut self, key: &str, value: f64) -> &mut Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    pub fn timing(&mut self, key: &str, seconds: f64) -> &mut Self {
        self.timings.insert(key.to_string(), seconds);
        self
    }

    pub fn line(&mut self, text: impl AsRef<str>) -> &mut Self {
        self.text.push_str(text.as_ref());
        self.text.push('\n');
        self
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn certificate(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_CERTIFICATE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<ThetaError> for CliError {
    fn from(e: ThetaError) -> Self {
        let code = match e {
            ThetaError::Graph(_) | ThetaError::UnsupportedForm(_) | ThetaError::DimensionMismatch { .. } => EXIT_INPUT,
            _ => EXIT_SOLVER,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<HomError> for CliError {
    fn from(e: HomError) -> Self {
        match e {
            HomError::Theta(t) => t.into(),
            HomError::NotVerified(_) => CliError::certificate(e.to_string()),
            HomError::Linalg(_) => CliError {
                code: EXIT_SOLVER,
                message: e.to_string(),
            },
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<CodingError> for CliError {
    fn from(e: CodingError) -> Self {
        match e {
            CodingError::Theta(t) => t.into(),
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input(format!("malformed JSON: {e}"))
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}
