use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LinalgError;

/// Largest admissible prime modulus. Residue products must fit in a `u64`.
pub const MAX_PRIME: u64 = (1 << 32) - 1;

/// The ground field of a computation: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Checked constructor for a prime field. Rejects composites and moduli above [`MAX_PRIME`].
    pub fn prime(p: u64) -> Result<Field, LinalgError> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> FieldScalar {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldScalar::Modular {
                residue: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_u64(self, v: u64) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldScalar::Modular {
                residue: v % p,
                modulus: p,
            },
        }
    }

    /// `num / den` in this field; fails when `den` vanishes in the field.
    pub fn from_ratio(self, num: i64, den: i64) -> Result<FieldScalar, LinalgError> {
        let d = self.from_i64(den);
        let inv = d.inv().ok_or(LinalgError::DivisionByZero)?;
        Ok(&self.from_i64(num) * &inv)
    }

    /// Parses a scalar in the textual form used by the matrix serialization:
    /// `"num/den"` or `"num"` over Q, a decimal residue over F_p.
    pub fn parse_scalar(self, s: &str) -> Result<FieldScalar, LinalgError> {
        let bad = || LinalgError::Parse(format!("invalid scalar {s:?} for field {self}"));
        match self {
            Field::Rational => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s.trim(), "1"),
                };
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(FieldScalar::Rational(BigRational::new(n, d)))
            }
            Field::Prime(p) => {
                let v: i128 = s.trim().parse().map_err(|_| bad())?;
                Ok(FieldScalar::Modular {
                    residue: v.rem_euclid(p as i128) as u64,
                    modulus: p,
                })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| LinalgError::Parse(format!("invalid field spec {s:?}")))?;
            return Field::prime(p);
        }
        Err(LinalgError::Parse(format!(
            "invalid field spec {s:?}, expected \"Q\" or \"Fp:<p>\""
        )))
    }
}

impl serde::Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact element of Q or of F_p. Rationals are kept in lowest terms with a positive
/// denominator; residues lie in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Modular { residue: u64, modulus: u64 },
}

impl FieldScalar {
    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Rational(_) => Field::Rational,
            FieldScalar::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(q) => q.is_zero(),
            FieldScalar::Modular { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(q) => q.is_one(),
            FieldScalar::Modular { residue, .. } => *residue == 1,
        }
    }

    pub fn inv(&self) -> Option<FieldScalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldScalar::Rational(q) => FieldScalar::Rational(q.recip()),
            FieldScalar::Modular { residue, modulus } => FieldScalar::Modular {
                residue: inv_mod(*residue, *modulus),
                modulus: *modulus,
            },
        })
    }

    fn same_field(&self, other: &FieldScalar) -> Result<(), LinalgError> {
        if self.field() != other.field() {
            return Err(LinalgError::FieldMismatch {
                expected: self.field(),
                found: other.field(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &FieldScalar) -> Result<FieldScalar, LinalgError> {
        self.same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_mul(&self, other: &FieldScalar) -> Result<FieldScalar, LinalgError> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &FieldScalar) -> FieldScalar {
        match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (FieldScalar::Modular { residue: a, modulus }, FieldScalar::Modular { residue: b, .. }) => {
                FieldScalar::Modular {
                    residue: (a + b) % modulus,
                    modulus: *modulus,
                }
            }
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    fn mul_unchecked(&self, other: &FieldScalar) -> FieldScalar {
        match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (FieldScalar::Modular { residue: a, modulus }, FieldScalar::Modular { residue: b, .. }) => {
                FieldScalar::Modular {
                    residue: a * b % modulus,
                    modulus: *modulus,
                }
            }
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    fn neg_ref(&self) -> FieldScalar {
        match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Modular { residue, modulus } => FieldScalar::Modular {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }

    /// Residue as `u64`; panics over Q.
    pub fn residue(&self) -> u64 {
        match self {
            FieldScalar::Modular { residue, .. } => *residue,
            FieldScalar::Rational(_) => panic!("residue() called on a rational scalar"),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldScalar::Rational(q) => Some(q),
            FieldScalar::Modular { .. } => None,
        }
    }

    /// Small integer value if the scalar is an integer fitting in `i64` (used in reports).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            FieldScalar::Rational(q) if q.is_integer() => q.to_integer().to_i64(),
            FieldScalar::Rational(_) => None,
            FieldScalar::Modular { residue, .. } => Some(*residue as i64),
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldScalar::Modular { residue, .. } => write!(f, "{residue}"),
        }
    }
}

impl Add for &FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: &FieldScalar) -> FieldScalar {
        self.add_unchecked(rhs)
    }
}

impl Sub for &FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: &FieldScalar) -> FieldScalar {
        self.add_unchecked(&rhs.neg_ref())
    }
}

impl Mul for &FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: &FieldScalar) -> FieldScalar {
        self.mul_unchecked(rhs)
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

impl Add for FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: FieldScalar) -> FieldScalar {
        self.add_unchecked(&rhs)
    }
}

impl Sub for FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: FieldScalar) -> FieldScalar {
        &self - &rhs
    }
}

impl Mul for FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: FieldScalar) -> FieldScalar {
        self.mul_unchecked(&rhs)
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let g = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(p as i128) as u64
}

/// Clears denominators of a rational row, returning an integer row
/// spanning the same line.
pub(crate) fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

pub(crate) fn abs_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.abs().gcd(&b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_specs_parse_and_print() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("Fp:101".parse::<Field>().unwrap(), Field::Prime(101));
        assert!("Fp:100".parse::<Field>().is_err());
        assert!("R".parse::<Field>().is_err());
        assert_eq!(Field::Prime(7).to_string(), "Fp:7");
    }

    #[test]
    fn rational_scalars_stay_reduced() {
        let q = Field::Rational.parse_scalar("6/-4").unwrap();
        assert_eq!(q.to_string(), "-3/2");
        let one = Field::Rational.one();
        assert_eq!((&q * &q.inv().unwrap()), one);
    }

    #[test]
    fn modular_arithmetic() {
        let f = Field::Prime(101);
        let a = f.from_i64(-1);
        assert_eq!(a.residue(), 100);
        assert_eq!((&a * &a), f.one());
        assert_eq!(f.from_i64(5).inv().unwrap().residue(), 81);
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = Field::Rational.one();
        let b = Field::Prime(5).one();
        assert!(matches!(a.checked_add(&b), Err(LinalgError::FieldMismatch { .. })));
    }
}
