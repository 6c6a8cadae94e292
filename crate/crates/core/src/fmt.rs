//! Fixed 15-significant-digit number formatting shared by the CSV writer
//! and the CLI, so file and stdout outputs are byte-identical.

/// Format with 15 significant digits, '%g'-style: plain decimal notation
/// for moderate exponents, e-notation otherwise, trailing zeros trimmed.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exponent) = sci.split_once('e').expect("e-format always has an exponent");
    let k: i32 = exponent.parse().expect("exponent is an integer");
    if (-5..15).contains(&k) {
        let decimals = (14 - k).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{k}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
