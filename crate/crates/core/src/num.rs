//! Exact rational helpers and the scalar abstraction shared by the LP solver and the
//! polytope types.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &Rational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Converts a finite float to the rational denoted by its shortest round-trip decimal.
///
/// `0.1f64` becomes exactly 1/10 rather than the dyadic value stored in the float, so values
/// written back out with [`format_rational`] match what a user would type.
pub fn from_f64(v: f64) -> Option<Rational> {
    if !v.is_finite() {
        return None;
    }
    parse_rational(&format!("{v}"))
}

/// Parses `"12"`, `"-0.25"`, `"1e6"`, `"3.5E-2"` or `"1/3"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all.parse::<BigInt>().ok()?);
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    if shift >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Some(if neg { -value } else { value })
}

/// Formats a rational as a plain decimal when it terminates, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut den = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (ip, fp) = digits.split_at(digits.len() - places);
    let sign = if Signed::is_negative(r) { "-" } else { "" };
    format!("{sign}{ip}.{fp}")
}

/// Field operations needed by the simplex solver and the polytope types.
///
/// Two implementations exist: [`Rational`] (exact, zero tests are exact) and `f64` (zero tests
/// use the absolute tolerance [`Scalar::EPS`]).
pub trait Scalar: Clone + Debug + PartialOrd + Send + Sync + 'static {
    const EXACT: bool;
    const EPS: f64;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Exact value of a finite float's shortest decimal for rationals; identity for `f64`.
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self -= a * b`
    fn sub_mul(&mut self, a: &Self, b: &Self);
    /// Structural zero (no tolerance), used to keep tableau rows sparse.
    fn is_exact_zero(&self) -> bool;
    /// Flushes round-off noise to an exact zero; a no-op for exact types.
    fn snap(&mut self) {}

    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }
    /// Exact `==` for rationals, tolerance for floats.
    fn approx_eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const EPS: f64 = 0.0;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        int(v)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_f64(v: f64) -> Self {
        from_f64(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const EPS: f64 = 1e-9;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn snap(&mut self) {
        if f64::abs(*self) < 1e-13 {
            *self = 0.0;
        }
    }
    fn is_zero(&self) -> bool {
        f64::abs(*self) <= Self::EPS
    }
    fn is_positive(&self) -> bool {
        *self > Self::EPS
    }
    fn is_negative(&self) -> bool {
        *self < -Self::EPS
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_decimal_forms() {
        assert_eq!(parse_rational("0.1"), Some(ratio(1, 10)));
        assert_eq!(parse_rational("-2.50"), Some(ratio(-5, 2)));
        assert_eq!(parse_rational("1e6"), Some(int(1_000_000)));
        assert_eq!(parse_rational("3.5E-2"), Some(ratio(7, 200)));
        assert_eq!(parse_rational("1/3"), Some(ratio(1, 3)));
        assert_eq!(parse_rational(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("-"), None);
    }

    #[test]
    fn formats_terminating_and_repeating() {
        assert_eq!(format_rational(&ratio(1, 10)), "0.1");
        assert_eq!(format_rational(&ratio(-7, 200)), "-0.035");
        assert_eq!(format_rational(&int(42)), "42");
        assert_eq!(format_rational(&ratio(1, 3)), "1/3");
    }

    #[test]
    fn float_conversion_uses_shortest_decimal() {
        assert_eq!(from_f64(0.1), Some(ratio(1, 10)));
        assert_eq!(from_f64(f64::INFINITY), None);
    }

    proptest! {
        #[test]
        fn format_then_parse_is_identity(n in -100_000i64..100_000, d in 1i64..5_000) {
            let r = ratio(n, d);
            prop_assert_eq!(parse_rational(&format_rational(&r)), Some(r));
        }

        #[test]
        fn floats_round_trip_through_rationals(v in -1e12f64..1e12) {
            let r = from_f64(v).unwrap();
            prop_assert_eq!(to_f64(&r), v);
        }
    }
}
