//! Decimal rendering of multiprecision floats.

use rug::Float;

/// Significant digits used for every number written by the CLI.
pub const SIGNIFICANT_DIGITS: usize = 20;

/// Formats `x` with `digits` significant digits. Plain positional notation
/// is used for decimal exponents in `-6..=21`, scientific otherwise.
pub fn format_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (negative, mantissa, exp) = x.to_sign_string_exp(10, Some(digits));
    // value = 0.mantissa × 10^exp
    let exp = exp.expect("finite nonzero float has an exponent");
    let mantissa = mantissa.trim_end_matches('0');
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    let point = exp;
    if (-5..=21).contains(&point) {
        if point <= 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-point) as usize));
            out.push_str(mantissa);
        } else {
            let point = point as usize;
            if mantissa.len() <= point {
                out.push_str(mantissa);
                out.extend(std::iter::repeat_n('0', point - mantissa.len()));
            } else {
                out.push_str(&mantissa[..point]);
                out.push('.');
                out.push_str(&mantissa[point..]);
            }
        }
    } else {
        out.push_str(&mantissa[..1]);
        if mantissa.len() > 1 {
            out.push('.');
            out.push_str(&mantissa[1..]);
        }
        out.push_str(&format!("e{}", point - 1));
    }
    out
}

pub fn format_sig(x: &Float) -> String {
    format_float(x, SIGNIFICANT_DIGITS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: f64) -> Float {
        Float::with_val(128, v)
    }

    #[test]
    fn positional_and_scientific() {
        assert_eq!(format_float(&f(0.0), 20), "0");
        assert_eq!(format_float(&f(-1.0), 20), "-1");
        assert_eq!(format_float(&f(-0.5), 20), "-0.5");
        assert_eq!(format_float(&f(1234.5), 20), "1234.5");
        assert_eq!(format_float(&f(0.015625), 20), "0.015625");
        assert_eq!(format_float(&f(2f64.powi(-40)), 5), "9.0949e-13");
        let third = Float::with_val(128, 1) / 3;
        assert_eq!(format_float(&third, 20), "0.33333333333333333333");
        let tiny = Float::with_val(128, -7) / 300;
        assert_eq!(format_float(&tiny, 3), "-0.0233");
    }
}
