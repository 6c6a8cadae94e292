//! Numeric argument parsing. Sample sizes go through exponent extraction
//! so `--n 1e300` and beyond yield log n without ever forming n as a
//! float.

use sn_extremes::Error;

/// Parse a sample size into log n. Accepts plain decimals ("1000000",
/// "2.5") and scientific notation with an arbitrary integer exponent
/// ("1e6", "2.5e120", "1e30000").
pub fn log_n(text: &str) -> Result<f64, Error> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Usage("empty sample size".into()));
    }
    let (mantissa_text, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exponent: i64 = e
                .parse()
                .map_err(|_| Error::Usage(format!("bad exponent in sample size '{text}'")))?;
            (m, exponent)
        }
        None => (text, 0),
    };
    let mantissa: f64 = mantissa_text
        .parse()
        .map_err(|_| Error::Usage(format!("bad sample size '{text}'")))?;
    if !(mantissa.is_finite() && mantissa > 0.0) {
        return Err(Error::Usage(format!(
            "sample size must be positive and finite, got '{text}'"
        )));
    }
    let log_n = mantissa.ln() + exponent as f64 * std::f64::consts::LN_10;
    if !log_n.is_finite() {
        return Err(Error::Usage(format!("sample size '{text}' is out of range")));
    }
    Ok(log_n)
}

/// Comma-separated sample sizes to log n values.
pub fn log_n_grid(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',').map(log_n).collect()
}

/// Comma-separated x values.
pub fn x_grid(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("bad x value '{s}'")))
        })
        .collect()
}

/// An exact integer count (for direct simulation). Scientific notation is
/// fine as long as the value is integral and at most 2^53.
pub fn count(text: &str) -> Result<u64, Error> {
    let value = log_n(text)?.exp();
    let rounded = value.round();
    if (value - rounded).abs() > 1e-6 * value.max(1.0) || rounded < 0.0 {
        return Err(Error::Usage(format!("'{text}' is not a whole number of draws")));
    }
    if rounded > 9.007_199_254_740_992e15 {
        return Err(Error::Usage(format!(
            "'{text}' exceeds the largest exactly-representable count"
        )));
    }
    Ok(rounded as u64)
}
