//! Exact arithmetic: arbitrary-precision rationals and costs of the form
//! `a + b·ε` for a formal infinitesimal `ε > 0`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds `num/den` from machine integers.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The `j`-th harmonic number `1 + 1/2 + … + 1/j`. `harmonic(0)` is zero.
pub fn harmonic(j: usize) -> Rational {
    (1..=j).fold(Rational::zero(), |acc, i| acc + ratio(1, i as i64))
}

/// Least common multiple of `1..=n` (1 for `n == 0`).
pub fn lcm_upto(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc.lcm(&BigInt::from(i)))
}

/// Parses `p/q` or an integer.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| format!("invalid rational `{text}`"))?;
    let den: BigInt = den.trim().parse().map_err(|_| format!("invalid rational `{text}`"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(Rational::new(num, den))
}

/// Decimal rendering with `digits` significant digits. Display only.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    to_decimal_scaled(value.is_negative(), value.numer().abs(), value.denom().clone(), digits, leading_exponent(value))
}

/// Smallest `e` with `|value| < 10^e`.
fn leading_exponent(value: &Rational) -> i64 {
    let abs = value.abs();
    let ten = int(10);
    let mut e: i64 = 0;
    let mut bound = Rational::one();
    if abs >= bound {
        while abs >= bound {
            bound *= &ten;
            e += 1;
        }
    } else {
        while abs < bound {
            bound /= &ten;
            e -= 1;
        }
        e += 1;
    }
    e
}

fn to_decimal_scaled(negative: bool, num: BigInt, den: BigInt, digits: usize, e: i64) -> String {
    // value = num/den, leading digit position 10^(e-1); scale to `digits` digits.
    let shift = digits as i64 - e;
    let ten = BigInt::from(10);
    let (n, d) = if shift >= 0 { (num * ten.pow(shift as u32), den) } else { (num, den * ten.pow((-shift) as u32)) };
    // round half away from zero
    let (q, r) = n.div_rem(&d);
    let q = if r * 2 >= d { q + 1 } else { q };
    let mut s = q.to_string();
    let mut point = e;
    if s.len() > digits {
        // rounding carried into a new digit
        s.pop();
        point += 1;
    }
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), s)
    } else if point as usize >= s.len() {
        format!("{}{}", s, "0".repeat(point as usize - s.len()))
    } else {
        format!("{}.{}", &s[..point as usize], &s[point as usize..])
    };
    let body = if body.contains('.') { body.trim_end_matches('0').trim_end_matches('.').to_string() } else { body };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Exact cost `a + b·ε` ordered lexicographically on `(a, b)`, which is the
/// order of the values for every sufficiently small `ε > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EpsCost {
    pub a: Rational,
    pub b: Rational,
}

impl EpsCost {
    pub fn new(a: Rational, b: Rational) -> Self {
        EpsCost { a, b }
    }

    pub fn constant(a: Rational) -> Self {
        EpsCost { a, b: Rational::zero() }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        EpsCost { a: int(a), b: int(b) }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Strictly positive for all small `ε > 0`.
    pub fn is_positive(&self) -> bool {
        self.a.is_positive() || (self.a.is_zero() && self.b.is_positive())
    }

    pub fn scale(&self, factor: &Rational) -> EpsCost {
        EpsCost { a: &self.a * factor, b: &self.b * factor }
    }

    /// Product of two linear forms, kept to second order.
    pub fn mul_poly(&self, other: &EpsCost) -> [Rational; 3] {
        [&self.a * &other.a, &self.a * &other.b + &self.b * &other.a, &self.b * &other.b]
    }
}

impl fmt::Display for EpsCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}ε", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}-{}ε", self.a, -self.b.clone())
        } else {
            write!(f, "{}+{}ε", self.a, self.b)
        }
    }
}

impl Add for EpsCost {
    type Output = EpsCost;
    fn add(self, rhs: EpsCost) -> EpsCost {
        EpsCost { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl<'a> Add<&'a EpsCost> for &'a EpsCost {
    type Output = EpsCost;
    fn add(self, rhs: &EpsCost) -> EpsCost {
        EpsCost { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Add<&EpsCost> for EpsCost {
    type Output = EpsCost;
    fn add(mut self, rhs: &EpsCost) -> EpsCost {
        self += rhs;
        self
    }
}

impl AddAssign<&EpsCost> for EpsCost {
    fn add_assign(&mut self, rhs: &EpsCost) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl AddAssign for EpsCost {
    fn add_assign(&mut self, rhs: EpsCost) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl Sub for EpsCost {
    type Output = EpsCost;
    fn sub(self, rhs: EpsCost) -> EpsCost {
        EpsCost { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl<'a> Sub<&'a EpsCost> for &'a EpsCost {
    type Output = EpsCost;
    fn sub(self, rhs: &EpsCost) -> EpsCost {
        EpsCost { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl SubAssign<&EpsCost> for EpsCost {
    fn sub_assign(&mut self, rhs: &EpsCost) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl Neg for EpsCost {
    type Output = EpsCost;
    fn neg(self) -> EpsCost {
        EpsCost { a: -self.a, b: -self.b }
    }
}

impl Mul<&Rational> for &EpsCost {
    type Output = EpsCost;
    fn mul(self, rhs: &Rational) -> EpsCost {
        self.scale(rhs)
    }
}

impl Div<&Rational> for &EpsCost {
    type Output = EpsCost;
    fn div(self, rhs: &Rational) -> EpsCost {
        EpsCost { a: &self.a / rhs, b: &self.b / rhs }
    }
}

impl Sum for EpsCost {
    fn sum<I: Iterator<Item = EpsCost>>(iter: I) -> EpsCost {
        iter.fold(EpsCost::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a EpsCost> for EpsCost {
    fn sum<I: Iterator<Item = &'a EpsCost>>(iter: I) -> EpsCost {
        iter.fold(EpsCost::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

/// Ratio of two costs with a positive denominator, e.g. `cost(N)/cost(O)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsRatio {
    pub num: EpsCost,
    pub den: EpsCost,
}

impl EpsRatio {
    pub fn new(num: EpsCost, den: EpsCost) -> Result<Self> {
        if !den.is_positive() {
            return Err(Error::Degenerate(format!("ratio denominator {den} is not positive")));
        }
        Ok(EpsRatio { num, den })
    }

    pub fn one() -> Self {
        let one = EpsCost::from_ints(1, 0);
        EpsRatio { num: one.clone(), den: one }
    }

    /// Limit as `ε → 0⁺`. Requires a non-zero constant term in the denominator.
    pub fn limit(&self) -> Result<Rational> {
        if self.den.a.is_zero() {
            return Err(Error::Degenerate(format!(
                "denominator {} has zero constant term; the ε→0 limit is not a finite ratio of constants",
                self.den
            )));
        }
        Ok(&self.num.a / &self.den.a)
    }

    /// Side from which the ratio approaches its limit: `Less` when the ratio
    /// lies below the limit for small `ε`, `Greater` when above, `Equal` when
    /// the ratio does not depend on `ε`.
    pub fn approach(&self) -> Ordering {
        // d/dε at 0 has the sign of b1·a2 − a1·b2
        let slope = &self.num.b * &self.den.a - &self.num.a * &self.den.b;
        slope.cmp(&Rational::zero())
    }

    /// Exact comparison of the ratio values for all small `ε > 0`.
    pub fn cmp_value(&self, other: &EpsRatio) -> Ordering {
        let lhs = self.num.mul_poly(&other.den);
        let rhs = other.num.mul_poly(&self.den);
        lhs.cmp(&rhs)
    }

    /// Exact comparison against a constant.
    pub fn cmp_rational(&self, value: &Rational) -> Ordering {
        self.num.cmp(&self.den.scale(value))
    }
}

impl fmt::Display for EpsRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.limit() {
            Ok(limit) => write!(f, "{limit}"),
            Err(_) => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

/// Convenience for reports that need a machine integer.
pub fn to_i64(value: &BigInt) -> Option<i64> {
    value.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(1), int(1));
        assert_eq!(harmonic(2), ratio(3, 2));
        assert_eq!(harmonic(3), ratio(11, 6));
        assert_eq!(harmonic(4), ratio(25, 12));
        assert_eq!(harmonic(0), int(0));
    }

    #[test]
    fn lexicographic_order_matches_small_epsilon() {
        let x = EpsCost::from_ints(1144, 0);
        let y = EpsCost::new(int(1144), ratio(29, 6));
        assert!(x < y);
        assert!(EpsCost::from_ints(1, 1000) < EpsCost::from_ints(2, -1000));
        assert!(EpsCost::from_ints(0, 1).is_positive());
        assert!(!EpsCost::from_ints(0, 0).is_positive());
        assert!(!EpsCost::from_ints(0, -1).is_positive());
        assert!(!EpsCost::from_ints(-1, 5).is_positive());
    }

    #[test]
    fn ratio_limit_and_direction() {
        let r = EpsRatio::new(EpsCost::from_ints(1144, 0), EpsCost::from_ints(700, 3)).unwrap();
        assert_eq!(r.limit().unwrap(), ratio(286, 175));
        assert_eq!(r.approach(), Ordering::Less);
        assert_eq!(r.cmp_rational(&ratio(286, 175)), Ordering::Less);
        let flat = EpsRatio::new(EpsCost::from_ints(2, 2), EpsCost::from_ints(1, 1)).unwrap();
        assert_eq!(flat.approach(), Ordering::Equal);
        assert_eq!(flat.cmp_rational(&int(2)), Ordering::Equal);
        assert!(EpsRatio::new(EpsCost::from_ints(1, 0), EpsCost::from_ints(0, 0)).is_err());
        let pure_eps = EpsRatio::new(EpsCost::from_ints(1, 0), EpsCost::from_ints(0, 1)).unwrap();
        assert!(pure_eps.limit().is_err());
    }

    #[test]
    fn ratio_comparison_uses_second_order_terms() {
        // (1+ε)/(1+ε) = 1 and (1+2ε)/(1+ε) > 1
        let one = EpsRatio::new(EpsCost::from_ints(1, 1), EpsCost::from_ints(1, 1)).unwrap();
        let above = EpsRatio::new(EpsCost::from_ints(1, 2), EpsCost::from_ints(1, 1)).unwrap();
        assert_eq!(one.cmp_value(&EpsRatio::one()), Ordering::Equal);
        assert_eq!(above.cmp_value(&one), Ordering::Greater);
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(to_decimal(&ratio(286, 175), 12), "1.63428571429");
        assert_eq!(to_decimal(&ratio(165, 92), 12), "1.79347826087");
        assert_eq!(to_decimal(&int(1144), 12), "1144");
        assert_eq!(to_decimal(&ratio(1, 3000), 4), "0.0003333");
        assert_eq!(to_decimal(&ratio(-5, 2), 12), "-2.5");
        assert_eq!(to_decimal(&ratio(9999, 1000), 2), "10");
    }

    #[test]
    fn display() {
        assert_eq!(EpsCost::from_ints(700, 3).to_string(), "700+3ε");
        assert_eq!(EpsCost::from_ints(0, 1).to_string(), "1ε");
        assert_eq!(EpsCost::from_ints(5, 0).to_string(), "5");
        assert_eq!(EpsCost::from_ints(5, -2).to_string(), "5-2ε");
    }
}
