//! Exact rational scalars and the small helpers the rest of the crate leans on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact rational number, always stored in lowest terms with a positive denominator.
pub type Scalar = BigRational;

/// Coordinates of a point in the ambient space.
pub type LatticeVector = Vec<Scalar>;

/// Integer coefficients of a lattice point with respect to some basis.
pub type CoeffVector = Vec<BigInt>;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn big(v: BigInt) -> Scalar {
    Scalar::from_integer(v)
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// `2^e` for any signed exponent.
pub fn pow2(e: i64) -> Scalar {
    let p = BigInt::one() << e.unsigned_abs() as usize;
    if e >= 0 {
        Scalar::from_integer(p)
    } else {
        Scalar::new(BigInt::one(), p)
    }
}

pub fn vector(values: &[i64]) -> LatticeVector {
    values.iter().map(|&v| int(v)).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn norm_sq(a: &[Scalar]) -> Scalar {
    dot(a, a)
}

pub fn linf(a: &[Scalar]) -> Scalar {
    a.iter().map(|x| x.abs()).max().unwrap_or_else(Scalar::zero)
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn neg_vec(a: &[Scalar]) -> LatticeVector {
    a.iter().map(|x| -x).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> LatticeVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> LatticeVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vec(a: &[Scalar], s: &Scalar) -> LatticeVector {
    a.iter().map(|x| x * s).collect()
}

/// True when the first nonzero coordinate is positive. The zero vector is not positive.
pub fn is_lex_positive(a: &[Scalar]) -> bool {
    a.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_positive())
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Scalar>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn gcd_all(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Largest integer `k` with `4^k <= x`, for `x > 0`. Equivalently `2^k <= sqrt(x)`.
pub fn floor_log4(x: &Scalar) -> i64 {
    assert!(x.is_positive());
    let mut k = (x.numer().bits() as i64 - x.denom().bits() as i64) / 2;
    while pow2(2 * k) > *x {
        k -= 1;
    }
    while pow2(2 * (k + 1)) <= *x {
        k += 1;
    }
    k
}

/// Smallest integer `k` with `4^k >= x`, for `x > 0`.
pub fn ceil_log4(x: &Scalar) -> i64 {
    let k = floor_log4(x);
    if pow2(2 * k) == *x {
        k
    } else {
        k + 1
    }
}

/// `sqrt(a) <= sqrt(b) + sqrt(c)` for non-negative rationals, decided exactly.
pub fn sqrt_le_sum(a: &Scalar, b: &Scalar, c: &Scalar) -> bool {
    // a <= b + c + 2 sqrt(bc)  <=>  a - b - c <= 2 sqrt(bc)
    let lhs = a - b - c;
    if !lhs.is_positive() {
        return true;
    }
    &lhs * &lhs <= int(4) * b * c
}

/// Exact integer square root floor for a non-negative rational.
pub fn floor_sqrt(x: &Scalar) -> BigInt {
    assert!(!x.is_negative());
    let f = x.floor().to_integer();
    let mut r = f.sqrt();
    while big((&r + 1u32) * (&r + 1u32)) <= *x {
        r += 1u32;
    }
    while big(&r * &r) > *x {
        r -= 1u32;
    }
    r
}

/// Format a scalar as `p` or `p/q`.
pub fn to_exact_string(x: &Scalar) -> String {
    x.to_string()
}

/// Parse `p` or `p/q` with an optional sign.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().ok()?;
    let den: BigInt = den.trim().parse().ok()?;
    if !den.is_positive() {
        return None;
    }
    Some(Scalar::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log4_brackets() {
        assert_eq!(floor_log4(&int(1)), 0);
        assert_eq!(floor_log4(&int(3)), 0);
        assert_eq!(floor_log4(&int(4)), 1);
        assert_eq!(ceil_log4(&int(5)), 2);
        assert_eq!(ceil_log4(&int(16)), 2);
        assert_eq!(floor_log4(&ratio(1, 2)), -1);
        assert_eq!(ceil_log4(&ratio(1, 2)), 0);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_scalar("-3/6"), Some(ratio(-1, 2)));
        assert_eq!(parse_scalar("7"), Some(int(7)));
        assert_eq!(parse_scalar("1/0"), None);
        assert_eq!(parse_scalar("x"), None);
        assert_eq!(to_exact_string(&ratio(4, -6)), "-2/3");
    }

    #[test]
    fn sqrt_sum_comparison() {
        // sqrt(9) <= sqrt(4) + sqrt(1)
        assert!(sqrt_le_sum(&int(9), &int(4), &int(1)));
        assert!(!sqrt_le_sum(&int(10), &int(4), &int(1)));
        assert_eq!(floor_sqrt(&ratio(17, 2)), BigInt::from(2));
    }
}
