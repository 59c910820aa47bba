//! Exact scalar arithmetic.
//!
//! Every linear-algebra computation in the crate runs over an exact field:
//! arbitrary-precision rationals by default, or a prime field `F_p` chosen at
//! computation time. Algebraic closure is never exercised by the shipped
//! computations, so these two options cover the intended desk scale; the
//! limitation is documented in the README.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("modulus {0} is not a prime in the supported range (2..2^31)")]
    BadModulus(u64),
    #[error("denominator of {0} vanishes modulo {1}")]
    DenominatorVanishes(String, u64),
}

/// Which exact field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec, FieldError> {
        if (2..(1 << 31)).contains(&p) && is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(FieldError::BadModulus(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Mod(0, *p),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(p) => Scalar::Mod(1 % p, *p),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::Mod(n.rem_euclid(*p as i64) as u64, *p),
        }
    }

    /// Maps an exact rational into the field. Fails in a prime field when the
    /// denominator is divisible by the modulus.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, FieldError> {
        match self {
            FieldSpec::Rational => Ok(Scalar::Rat(q.clone())),
            FieldSpec::Prime(p) => {
                let num = big_mod(q.numer(), *p);
                let den = big_mod(q.denom(), *p);
                if den == 0 {
                    return Err(FieldError::DenominatorVanishes(q.to_string(), *p));
                }
                Ok(Scalar::Mod(mul_mod(num, inv_mod(den, *p), *p), *p))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An element of the chosen field. Mixing elements of different fields is a
/// programming error and panics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64, u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod(v, p) => *v == 1 % p,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) => {
                assert_eq!(p, q, "mixed moduli");
                Scalar::Mod((a + b) % p, *p)
            }
            _ => panic!("mixed scalar fields"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) => {
                assert_eq!(p, q, "mixed moduli");
                Scalar::Mod(mul_mod(*a, *b, *p), *p)
            }
            _ => panic!("mixed scalar fields"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod(a, p) => Scalar::Mod(if *a == 0 { 0 } else { p - a }, *p),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Rat(a.recip())
            }
            Scalar::Mod(a, p) => {
                assert!(*a != 0, "inverse of zero");
                Scalar::Mod(inv_mod(*a, *p), *p)
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

fn big_mod(n: &BigInt, p: u64) -> u64 {
    let p_big = BigInt::from(p);
    let mut r = n % &p_big;
    if r.is_negative() {
        r += &p_big;
    }
    // r fits in u64 because 0 <= r < p < 2^31.
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
