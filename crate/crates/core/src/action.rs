//! Basic instructions and the actions threads perform.
//!
//! A basic instruction doubles as a basic action: `focus.method` names a
//! request `method` to the service called `focus`; a bare identifier is a
//! method without a focus.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError};
use crate::syntax::Cursor;

/// A basic instruction such as `a`, `out.write` or `irf.put:1:{#2}`.
///
/// The method part carries any `:` parameter segments verbatim, in the
/// canonical form produced by the parser (braced payloads re-printed).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Basic {
    focus: Option<String>,
    method: String,
}

impl Basic {
    /// Parses a complete basic instruction token.
    pub fn new(token: &str) -> Result<Self, ParseError> {
        let mut cursor = Cursor::new(token);
        cursor.skip_ws();
        let basic = cursor.basic()?;
        cursor.skip_ws();
        cursor.expect_end()?;
        Ok(basic)
    }

    /// Builds a basic instruction from a focus and a method string, checking
    /// that the result re-parses to the same parts.
    pub fn with_focus(focus: &str, method: &str) -> Result<Self, ParseError> {
        Self::new(&format!("{focus}.{method}"))
    }

    pub(crate) fn from_parts(focus: Option<String>, method: String) -> Self {
        Self { focus, method }
    }

    pub fn focus(&self) -> Option<&str> {
        self.focus.as_deref()
    }

    pub fn method(&self) -> &str {
        &self.method
    }
}

impl fmt::Display for Basic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.focus {
            Some(focus) => write!(f, "{focus}.{}", self.method),
            None => f.write_str(&self.method),
        }
    }
}

impl FromStr for Basic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Basic::new(s)?)
    }
}

/// The internal actions. `Tau` is negligible internal activity, `Gnl`
/// (generate and load) stands for switching execution over to a fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Internal {
    Tau,
    Gnl,
}

impl fmt::Display for Internal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Internal::Tau => "tau",
            Internal::Gnl => "gnl",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Basic(Basic),
    Internal(Internal),
}

impl Action {
    pub const TAU: Action = Action::Internal(Internal::Tau);
    pub const GNL: Action = Action::Internal(Internal::Gnl);

    /// Shorthand for a basic action; panics on a malformed token, so only use
    /// it with literals.
    pub fn basic(token: &str) -> Action {
        Action::Basic(Basic::new(token).expect("malformed basic action literal"))
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Action::Internal(_))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Basic(b) => b.fmt(f),
            Action::Internal(i) => i.fmt(f),
        }
    }
}

impl From<Basic> for Action {
    fn from(b: Basic) -> Self {
        Action::Basic(b)
    }
}

impl From<Internal> for Action {
    fn from(i: Internal) -> Self {
        Action::Internal(i)
    }
}

impl FromStr for Action {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "tau" => Ok(Action::TAU),
            "gnl" => Ok(Action::GNL),
            other => Ok(Action::Basic(Basic::new(other)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn focus_and_method_split_at_first_dot() {
        let b = Basic::new("irf.put:1:{#2}").unwrap();
        assert_eq!(b.focus(), Some("irf"));
        assert_eq!(b.method(), "put:1:{#2}");
        assert_eq!(b.to_string(), "irf.put:1:{#2}");
    }

    #[test]
    fn braced_payload_is_canonicalized() {
        let b = Basic::new("irf.put:1:{ #2 }").unwrap();
        assert_eq!(b.to_string(), "irf.put:1:{#2}");
    }

    #[test]
    fn bare_method_has_no_focus() {
        let b = Basic::new("a").unwrap();
        assert_eq!(b.focus(), None);
        assert_eq!(b.to_string(), "a");
    }

    #[test]
    fn rejects_uppercase_start_and_junk() {
        assert!(Basic::new("Abc").is_err());
        assert!(Basic::new("a b").is_err());
        assert!(Basic::new("").is_err());
        assert!(Basic::new("a.").is_err());
    }

    #[test]
    fn internal_names_parse() {
        assert_eq!("tau".parse::<Action>().unwrap(), Action::TAU);
        assert_eq!("gnl".parse::<Action>().unwrap(), Action::GNL);
        assert_ne!(Action::TAU, Action::GNL);
    }
}
