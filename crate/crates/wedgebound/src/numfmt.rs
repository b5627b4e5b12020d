//! Nine-significant-digit rounding shared by every output format.

pub const DIGITS: usize = 9;

/// `x` rounded to nine significant digits. The result prints through
/// serde_json and `Display` as its shortest round-trip form, so
/// serialising, parsing and serialising again is byte-identical.
pub fn sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", DIGITS - 1, x).parse().unwrap_or(x)
}

/// Text form for tables: nine significant digits, exponent form for very
/// small or large magnitudes.
pub fn text(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let r = sig(x);
    let a = r.abs();
    if r == 0.0 || (1e-4..1e9).contains(&a) {
        r.to_string()
    } else {
        format!("{r:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(sig(0.123456789123), 0.123456789);
        assert_eq!(sig(-1234.56789876), -1234.56790);
        assert_eq!(sig(0.0), 0.0);
        assert_eq!(text(1.5e-7), "1.5e-7");
        assert_eq!(text(0.25), "0.25");
    }
}
