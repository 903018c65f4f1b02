use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

/// Decimal scientific notation, `d.ddd…e±x`, rounded half-up to `sig` digits.
pub fn format_significant(x: &BigFloat, sig: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_inf() {
        return if x.is_negative() { "-Inf".into() } else { "Inf".into() };
    }
    if x.is_zero() {
        return "0".into();
    }
    let raw = match Consts::new().and_then(|mut cc| x.format(Radix::Dec, RoundingMode::ToEven, &mut cc)) {
        Ok(s) => s,
        Err(_) => return "NaN".into(),
    };
    let (negative, digits, exp10) = match split_decimal(&raw) {
        Some(parts) => parts,
        None => return raw,
    };
    let (digits, exp10) = round_digits(digits, exp10, sig.max(1));

    let mut out = String::with_capacity(digits.len() + 8);
    if negative {
        out.push('-');
    }
    out.push(char::from(b'0' + digits[0]));
    if digits.len() > 1 {
        out.push('.');
        out.extend(digits[1..].iter().map(|&d| char::from(b'0' + d)));
    }
    out.push_str(&format!("e{}{}", if exp10 < 0 { '-' } else { '+' }, exp10.unsigned_abs()));
    out
}

/// Splits `[-]d.ddd[e±x]` into sign, significant digits without leading
/// zeros, and the decimal exponent of the first digit.
fn split_decimal(s: &str) -> Option<(bool, Vec<u8>, i64)> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    let mut digits: Vec<u8> = Vec::with_capacity(int_part.len() + frac_part.len());
    for b in int_part.bytes().chain(frac_part.bytes()) {
        if !b.is_ascii_digit() {
            return None;
        }
        digits.push(b - b'0');
    }
    let mut exp10 = exp + int_part.len() as i64 - 1;
    let lead = digits.iter().take_while(|&&d| d == 0).count();
    if lead == digits.len() {
        return None;
    }
    digits.drain(..lead);
    exp10 -= lead as i64;
    while digits.len() > 1 && digits.last() == Some(&0) {
        digits.pop();
    }
    Some((negative, digits, exp10))
}

fn round_digits(mut digits: Vec<u8>, mut exp10: i64, sig: usize) -> (Vec<u8>, i64) {
    if digits.len() > sig {
        let round_up = digits[sig] >= 5;
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.truncate(sig);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    if sig != usize::MAX {
        digits.resize(sig, 0);
    }
    (digits, exp10)
}
