use std::fmt;

use rsw_core::RswError;

pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_WINDOW: i32 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn verify(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VERIFY,
            message: message.into(),
        }
    }

    pub fn io(e: impl fmt::Display) -> Self {
        Self {
            code: EXIT_VERIFY,
            message: format!("i/o error: {e}"),
        }
    }
}

impl From<RswError> for Failure {
    fn from(e: RswError) -> Self {
        let code = match e {
            RswError::InvalidParams(_)
            | RswError::NoRingExists(_)
            | RswError::SingularTime { .. }
            | RswError::UnsupportedFamily(_)
            | RswError::OriginSingular
            | RswError::CflViolation(_) => EXIT_USAGE,
            RswError::WindowViolation { .. } | RswError::LeftDomain { .. } | RswError::ZeroDepth { .. } => EXIT_WINDOW,
            _ => EXIT_VERIFY,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
