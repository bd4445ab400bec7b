//! Exit-code policy and the error payload printed on standard error.
//!
//! Every nonzero exit is accompanied by a single-line JSON object on
//! stderr so scripts never have to scrape human-oriented text. The code
//! space follows the sysexits convention where one applies:
//!
//! * 2 — a computation violated one of its stated invariants, or the
//!   scenario failed validation (a required key missing, say),
//! * 3 — inputs outside an operation's domain,
//! * 64 — usage errors, including unknown commands,
//! * 65 — input that does not parse,
//! * 74 — filesystem trouble reading the scenario or writing artifacts.

use hsgeo::error::ErrorClass;

pub type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn invariant(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            kind: "invariant",
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            kind: "validation",
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            kind: "domain",
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 64,
            kind: "usage",
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Failure {
        Failure {
            code: 65,
            kind: "parse",
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Failure {
        Failure {
            code: 74,
            kind: "io",
            message: message.into(),
        }
    }

    /// The machine-readable stderr payload, one line.
    pub fn error_json(&self) -> String {
        serde_json::json!({
            "error": {
                "code": self.code,
                "kind": self.kind,
                "message": self.message,
            }
        })
        .to_string()
    }
}

impl From<hsgeo::Error> for Failure {
    fn from(err: hsgeo::Error) -> Failure {
        match err.class() {
            ErrorClass::InputDomain => Failure::domain(err.to_string()),
            ErrorClass::InvariantViolation => Failure::invariant(err.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(err: serde_json::Error) -> Failure {
        Failure::parse(err.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Failure {
        Failure::io(err.to_string())
    }
}
