//! Formatting helpers: rationals as `p/q`, complex values as `a+bi` with
//! 12 significant digits, and optional symbolic lengths in units of ℓ.

use nonweyl::exact::{format_rat, rat, C64, Rat};

/// Number with 12 significant digits, positional where reasonable.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let precision = (11 - exp).max(0) as usize;
        let s = format!("{x:.precision$}");
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    } else {
        format!("{x:.11e}")
    }
}

/// Complex value as `a+bi`.
pub fn fmt_complex(z: C64) -> String {
    if z.im == 0.0 {
        return fmt_sig(z.re);
    }
    if z.re == 0.0 {
        return format!("{}i", fmt_sig(z.im));
    }
    let sign = if z.im < 0.0 { "-" } else { "+" };
    format!("{}{}{}i", fmt_sig(z.re), sign, fmt_sig(z.im.abs()))
}

/// A length as a multiple of ℓ: `2·ℓ`, `5/2·ℓ`, `0`.
pub fn fmt_in_ell(value: &Rat, ell: &Rat) -> String {
    let ratio = value / ell;
    if ratio == rat(0, 1) {
        "0".to_string()
    } else if ratio == rat(1, 1) {
        "ℓ".to_string()
    } else {
        format!("{}·ℓ", format_rat(&ratio))
    }
}

/// Parse `a+bi` style input for the spectral parameter.
pub fn parse_complex(s: &str) -> Option<C64> {
    let s: String = s.trim().replace(' ', "");
    if s.is_empty() {
        return None;
    }
    if let Some(rest) = s.strip_suffix('i') {
        if rest.is_empty() || rest == "+" {
            return Some(C64::new(0.0, 1.0));
        }
        if rest == "-" {
            return Some(C64::new(0.0, -1.0));
        }
        // Split at the last sign that is not leading and not part of an
        // exponent.
        let bytes = rest.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let b = bytes[i];
            if (b == b'+' || b == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        return match split {
            Some(i) => {
                let re: f64 = rest[..i].parse().ok()?;
                let im_str = &rest[i..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().ok()?
                };
                Some(C64::new(re, im))
            }
            None => {
                let im: f64 = rest.parse().ok()?;
                Some(C64::new(0.0, im))
            }
        };
    }
    let re: f64 = s.parse().ok()?;
    Some(C64::new(re, 0.0))
}
