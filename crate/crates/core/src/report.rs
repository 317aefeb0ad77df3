//! Named pass/fail records shared by verification routines and the CLI.

use serde::Serialize;

/// One verified inequality or identity: `lhs` compared against `rhs`,
/// with `slack` the signed margin by which the comparison held.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl Check {
    /// `lhs <= rhs + tol`; slack is `rhs - lhs`.
    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        Check { name: name.into(), pass: slack >= -tol, lhs, rhs, slack }
    }

    /// `lhs < rhs` with demanded margin; slack is `rhs - lhs`.
    pub fn lt(name: impl Into<String>, lhs: f64, rhs: f64, margin: f64) -> Self {
        let slack = rhs - lhs;
        Check { name: name.into(), pass: slack > margin, lhs, rhs, slack }
    }

    /// `|lhs - rhs| <= tol`; slack is `tol - |lhs - rhs|`.
    pub fn close(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = tol - (lhs - rhs).abs();
        Check { name: name.into(), pass: slack >= 0.0, lhs, rhs, slack }
    }

    /// Boolean fact with no numeric content.
    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), pass, lhs: f64::from(u8::from(pass)), rhs: 1.0, slack: 0.0 }
    }
}
