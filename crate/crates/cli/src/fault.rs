//! Error-to-exit-status contract: 0 success, 1 domain/usage error,
//! 2 verification failure, 3 insufficient truncation.  Every failure also
//! emits a machine-readable JSON object on standard error.

use annulus_harmonics::Error as CoreError;

use crate::emit::Json;

#[derive(Debug)]
pub enum CliError {
    /// An error surfaced by the library.
    Core(CoreError),
    /// Config file or config value problem.
    Config(String),
    /// Structurally valid flags with unusable values.
    Usage(String),
    /// Filesystem trouble reading the config or writing the artifact.
    Io(String),
    /// The verification suite ran and some checks failed.
    Verification { failed: usize, total: usize },
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::TruncationInsufficient { .. }) => 3,
            CliError::Verification { .. } => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Json {
        let mut fields: Vec<(&'static str, Json)> = Vec::new();
        match self {
            CliError::Core(e) => {
                fields.push(("kind", Json::Str(core_kind(e).into())));
                fields.push(("message", Json::Str(e.to_string())));
                match e {
                    CoreError::TruncationInsufficient {
                        tail_estimate,
                        tail_tol,
                    } => {
                        fields.push(("tail_estimate", Json::Num(*tail_estimate)));
                        fields.push(("tail_tol", Json::Num(*tail_tol)));
                    }
                    CoreError::PolePlane {
                        axial_gap,
                        min_axial_gap,
                    } => {
                        fields.push(("axial_gap", Json::Num(*axial_gap)));
                        fields.push(("min_axial_gap", Json::Num(*min_axial_gap)));
                    }
                    _ => {}
                }
            }
            CliError::Config(msg) => {
                fields.push(("kind", Json::Str("config".into())));
                fields.push(("message", Json::Str(msg.clone())));
            }
            CliError::Usage(msg) => {
                fields.push(("kind", Json::Str("usage".into())));
                fields.push(("message", Json::Str(msg.clone())));
            }
            CliError::Io(msg) => {
                fields.push(("kind", Json::Str("io".into())));
                fields.push(("message", Json::Str(msg.clone())));
            }
            CliError::Verification { failed, total } => {
                fields.push(("kind", Json::Str("verification".into())));
                fields.push((
                    "message",
                    Json::Str(format!("{failed} of {total} checks failed")),
                ));
                fields.push(("failed", Json::Int(*failed as i64)));
                fields.push(("total", Json::Int(*total as i64)));
            }
        }
        Json::Obj(vec![("error", Json::Obj(fields))])
    }
}

fn core_kind(e: &CoreError) -> &'static str {
    match e {
        CoreError::Domain(_) => "domain",
        CoreError::Overflow(_) => "overflow",
        CoreError::IterationLimit(_) => "iteration_limit",
        CoreError::Quadrature { .. } => "quadrature",
        CoreError::NoSignChange { .. } => "no_sign_change",
        CoreError::PolePlane { .. } => "pole_plane",
        CoreError::TruncationInsufficient { .. } => "truncation_insufficient",
        CoreError::ZeroSearch { .. } => "zero_search",
        CoreError::OutsideRegion(_) => "outside_region",
        CoreError::Precondition(_) => "precondition",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        let trunc = CliError::Core(CoreError::TruncationInsufficient {
            tail_estimate: 1.0,
            tail_tol: 1e-6,
        });
        assert_eq!(trunc.exit_code(), 3);
        assert_eq!(CliError::Verification { failed: 1, total: 9 }.exit_code(), 2);
        assert_eq!(CliError::Core(CoreError::Domain("x")).exit_code(), 1);
        assert_eq!(CliError::Config("bad".into()).exit_code(), 1);
    }

    #[test]
    fn error_json_carries_kind_and_structured_fields() {
        let err = CliError::Core(CoreError::PolePlane {
            axial_gap: 0.0078125,
            min_axial_gap: 0.015625,
        });
        let text = err.to_json().render();
        assert!(text.contains("\"kind\": \"pole_plane\""));
        assert!(text.contains("\"axial_gap\": 7.8125000000000000e-3"));
        assert!(text.contains("\"min_axial_gap\": 1.5625000000000000e-2"));
    }
}
