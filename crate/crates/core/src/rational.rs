//! Exact rational numbers.

use alloc::string::{String, ToString};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or an integer string. Rejects a zero denominator.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => {
            let p: BigInt = text.parse().ok()?;
            Some(Rational::from_integer(p))
        }
    }
}

/// Canonical exact rendering: `"p/q"`, or `"p"` for integers.
pub fn render(r: &Rational) -> String {
    r.to_string()
}

/// Human rendering used in tables: a terminating decimal when one exists
/// (`15/2` → `"7.5"`), otherwise `"p/q"`.
pub fn render_decimal(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut den = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut digits = 0usize;
    let mut scale = BigInt::one();
    while den.is_even() {
        den /= &two;
        digits += 1;
    }
    let mut fives = 0usize;
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return render(r);
    }
    digits = digits.max(fives);
    for _ in 0..digits {
        scale *= 10;
    }
    let scaled = (r * Rational::from_integer(scale.clone())).to_integer();
    let neg = scaled.is_negative();
    let mag = scaled.abs().to_string();
    let padded = if mag.len() <= digits {
        let mut s = String::from("0");
        for _ in 0..(digits + 1 - mag.len() - 1) {
            s.push('0');
        }
        s.push_str(&mag);
        s
    } else {
        mag
    };
    let (whole, fracpart) = padded.split_at(padded.len() - digits);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(whole);
    out.push('.');
    out.push_str(fracpart);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3"), Some(int(3)));
        assert_eq!(parse("6/4"), Some(frac(3, 2)));
        assert_eq!(parse(" -1/3 "), Some(frac(-1, 3)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(render_decimal(&frac(15, 2)), "7.5");
        assert_eq!(render_decimal(&frac(3, 2)), "1.5");
        assert_eq!(render_decimal(&frac(1, 20)), "0.05");
        assert_eq!(render_decimal(&frac(-3, 4)), "-0.75");
        assert_eq!(render_decimal(&frac(1, 3)), "1/3");
        assert_eq!(render_decimal(&int(24)), "24");
        assert_eq!(render(&frac(15, 2)), "15/2");
    }
}
