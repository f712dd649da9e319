//! Parallel sweeps, report files and the command-line front end built on
//! [`centmean_core`].

use std::fmt;

pub mod cli;
pub mod grid_file;
pub mod report;
pub mod run;

/// Errors surfaced by the front end, each tied to a process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum AppError {
    /// Bad parameters, labels, flags or files; a violated hypothesis.
    Invalid(String),
    /// A divergent or unresolvable integral or series.
    Divergent(String),
    /// A report could not be written.
    Io(String),
}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Invalid(_) | AppError::Io(_) => cli::EXIT_INVALID,
            AppError::Divergent(_) => cli::EXIT_DIVERGENT,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Invalid(m) | AppError::Divergent(m) | AppError::Io(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for AppError {}

impl From<centmean_core::Error> for AppError {
    fn from(e: centmean_core::Error) -> Self {
        use centmean_core::Error as E;
        match e {
            E::Divergence(_) | E::Unresolved(_) | E::DivergentSeries => AppError::Divergent(e.to_string()),
            _ => AppError::Invalid(e.to_string()),
        }
    }
}

/// `x` with `digits` significant digits, trailing zeros dropped.
///
/// ```
/// assert_eq!(centmean::format_number(767.9999999713618, 7), "768");
/// assert_eq!(centmean::format_number(0.5773502691896258, 7), "0.5773503");
/// assert_eq!(centmean::format_number(2.5e-12, 7), "2.5e-12");
/// ```
pub fn format_number(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.clamp(1, 17);
    // Scientific form first: it fixes the decimal exponent after rounding.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}
