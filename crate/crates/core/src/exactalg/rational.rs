//! Exact rationals backed by arbitrary precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::ExactAlgError;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn floor_i64(q: &Rational) -> i64 {
    q.floor().to_integer().to_i64().expect("rational out of i64 range")
}

pub fn ceil_i64(q: &Rational) -> i64 {
    q.ceil().to_integer().to_i64().expect("rational out of i64 range")
}

/// Binomial coefficient as a rational.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// Falling factorial b (b-1) ... (b-k+1).
pub fn falling(b: u32, k: u32) -> Rational {
    if k > b {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(b - i);
    }
    Rational::from_integer(acc)
}

/// Rising factorial q (q+1) ... (q+j-1), equal to 1 for j = 0.
pub fn rising(q: &Rational, j: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..j {
        acc *= q + int(i as i64);
    }
    acc
}

/// Parses `int` or `int/posint`, with an optional leading sign.
pub fn parse_rational(text: &str) -> Result<Rational, ExactAlgError> {
    let t: alloc::string::String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || ExactAlgError::Syntax {
        position: 0,
        message: alloc::format!("not a rational number: {text:?}"),
    };
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (t.as_str(), None),
    };
    let digits = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit());
    let body = num.strip_prefix('-').or_else(|| num.strip_prefix('+')).unwrap_or(num);
    if !digits(body) {
        return Err(bad());
    }
    let n: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(d) if digits(d) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(ExactAlgError::ZeroDenominator);
    }
    Ok(Rational::new(n, d))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}
