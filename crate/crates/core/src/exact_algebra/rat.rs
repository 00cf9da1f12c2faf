//! Exact rationals and their canonical text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"n"` or `"n/d"`. Float literals are rejected so that no rounded
/// value can ever enter a computation.
pub fn parse_rat(s: &str) -> Result<Rat, AlgebraError> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    let bad = |why: &str| AlgebraError::Parse {
        input: s.to_string(),
        position: 0,
        reason: why.to_string(),
    };
    if t.is_empty() {
        return Err(bad("empty rational"));
    }
    if let Some(pos) = t.find(|c: char| c == '.' || c == 'e' || c == 'E') {
        return Err(AlgebraError::Parse {
            input: s.to_string(),
            position: lead + pos,
            reason: "float literals are not accepted, write num/den".into(),
        });
    }
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = d.parse().map_err(|_| AlgebraError::Parse {
        input: s.to_string(),
        position: lead + t.find('/').map(|p| p + 1).unwrap_or(0),
        reason: "denominator is not an integer".into(),
    })?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(num, den))
}

/// Canonical rendering: `n` for integers, `n/d` otherwise.
pub fn render_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root when `r` is the square of a rational.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

pub fn rat_pow(r: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_roundtrip() {
        for s in ["0", "7", "-3/4", "12/8"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(parse_rat(&render_rat(&r)).unwrap(), r);
        }
        assert_eq!(render_rat(&parse_rat("12/8").unwrap()), "3/2");
        assert_eq!(render_rat(&parse_rat("3/-6").unwrap()), "-1/2");
    }

    #[test]
    fn floats_are_rejected_with_position() {
        match parse_rat("1.5") {
            Err(AlgebraError::Parse { position, .. }) => assert_eq!(position, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_rat("2e3").is_err());
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(rat_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rat_sqrt(&rat(2, 1)), None);
        assert_eq!(rat_sqrt(&rat(-1, 1)), None);
    }
}
