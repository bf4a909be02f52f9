//! Report serialization: every float is written with 17 significant digits,
//! which round-trips any `f64` exactly.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

/// Positional notation for decimal exponents in this range, scientific
/// otherwise.
const POSITIONAL_EXP: std::ops::RangeInclusive<i32> = -5..=16;

/// `value` with 17 significant digits. Non-finite values are written as
/// `NaN`, `inf` and `-inf`.
pub fn format_f64(value: f64) -> String {
    if !value.is_finite() {
        return if value.is_nan() {
            "NaN".into()
        } else if value > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{value:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !POSITIONAL_EXP.contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let point = exp as usize + 1;
        if point >= digits.len() {
            format!("{}{}.0", digits, "0".repeat(point - digits.len()))
        } else {
            format!("{}.{}", &digits[..point], &digits[point..])
        }
    };
    format!("{sign}{body}")
}

/// Compact JSON with [`format_f64`] numbers; non-finite values become
/// `null`.
struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// CSV with a header row, comma delimiter and `\n` line endings.
pub fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> csv::Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    let bytes = writer.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(2f64.sqrt() / 4.0), "0.35355339059327379");
        assert_eq!(format_f64(0.5), "0.50000000000000000");
        assert_eq!(format_f64(-41.0), "-41.000000000000000");
        assert_eq!(format_f64(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_f64(1.5e-5), "0.000015000000000000000");
        assert_eq!(format_f64(1e20), "1.0000000000000000e20");
        assert_eq!(format_f64(0.0), "0.0000000000000000");
    }

    #[test]
    fn formatted_values_round_trip() {
        for v in [std::f64::consts::PI, -1e-300, 2.5e15, 123456.789, f64::MAX, 5e-324] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
