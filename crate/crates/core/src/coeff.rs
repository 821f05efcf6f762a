//! Exact scalars: arbitrary-precision rationals and prime fields behind one
//! coefficient type.
//!
//! A [`FieldSpec`] names the field by its characteristic (0 for ℚ). A
//! [`Coeff`] is always stored in canonical form, so structural equality is
//! field equality: rationals are fully reduced with a positive denominator
//! and residues live in `0..p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field, identified by its characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    characteristic: u64,
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    /// Builds the field of the given characteristic. Anything other than 0 or
    /// a prime is rejected.
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 || is_prime(characteristic) {
            Ok(FieldSpec { characteristic })
        } else {
            Err(Error::NotPrime(characteristic))
        }
    }

    pub fn characteristic(self) -> u64 {
        self.characteristic
    }

    pub fn is_rational(self) -> bool {
        self.characteristic == 0
    }

    pub fn zero(self) -> Coeff {
        self.from_i64(0)
    }

    pub fn one(self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Coeff {
        match self.characteristic {
            0 => Coeff::Rational(BigRational::from_integer(BigInt::from(v))),
            p => Coeff::Modular {
                residue: (v as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Coeff {
        match self.characteristic {
            0 => Coeff::Rational(BigRational::from_integer(v.clone())),
            p => Coeff::Modular {
                residue: residue_of(v, p),
                modulus: p,
            },
        }
    }

    /// Maps a rational into this field (the identity for characteristic 0).
    pub fn from_rational(self, q: &BigRational) -> Result<Coeff> {
        match self.characteristic {
            0 => Ok(Coeff::Rational(q.clone())),
            p => reduce_mod_p(q, p),
        }
    }

    /// Parses `"num/den"`, `"num"` or a residue.
    pub fn parse(self, s: &str) -> Result<Coeff> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
    }
}

impl TryFrom<u64> for FieldSpec {
    type Error = Error;

    fn try_from(value: u64) -> Result<Self> {
        FieldSpec::new(value)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.characteristic
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "F_{p}"),
        }
    }
}

/// Deterministic trial division up to √n.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn residue_of(v: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    v.mod_floor(&m).to_u64().expect("residue fits in u64")
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
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

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::BadCoefficient(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Image of `q` under ℤ₍ₚ₎ → 𝔽ₚ.
pub fn reduce_mod_p(q: &BigRational, p: u64) -> Result<Coeff> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let den = residue_of(q.denom(), p);
    if den == 0 {
        return Err(Error::DenominatorNotInvertible {
            value: q.to_string(),
            p,
        });
    }
    let num = residue_of(q.numer(), p);
    let inv = pow_mod(den, p - 2, p);
    Ok(Coeff::Modular {
        residue: mul_mod(num, inv, p),
        modulus: p,
    })
}

/// An exact field element in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rational(BigRational),
    Modular { residue: u64, modulus: u64 },
}

impl Coeff {
    pub fn field(&self) -> FieldSpec {
        match self {
            Coeff::Rational(_) => FieldSpec::RATIONALS,
            Coeff::Modular { modulus, .. } => FieldSpec {
                characteristic: *modulus,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_zero(),
            Coeff::Modular { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_one(),
            Coeff::Modular { residue, .. } => *residue == 1,
        }
    }

    /// True for rationals with denominator 1 and for every residue.
    pub fn is_integral(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_integer(),
            Coeff::Modular { .. } => true,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Rational(q) => Some(q),
            Coeff::Modular { .. } => None,
        }
    }

    /// Reduces a rational coefficient modulo `p`. Residues are returned
    /// unchanged when they already live in 𝔽ₚ.
    pub fn reduce_mod(&self, p: u64) -> Result<Coeff> {
        match self {
            Coeff::Rational(q) => reduce_mod_p(q, p),
            Coeff::Modular { modulus, .. } if *modulus == p => Ok(self.clone()),
            Coeff::Modular { modulus, .. } => Err(Error::FieldMismatch {
                left: *modulus,
                right: p,
            }),
        }
    }

    pub fn inv(&self) -> Result<Coeff> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Coeff::Rational(q) => Coeff::Rational(q.recip()),
            Coeff::Modular { residue, modulus } => Coeff::Modular {
                residue: pow_mod(*residue, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn div(&self, other: &Coeff) -> Result<Coeff> {
        check_same(self, other)?;
        Ok(self * &other.inv()?)
    }

    pub fn checked_add(&self, other: &Coeff) -> Result<Coeff> {
        check_same(self, other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Coeff) -> Result<Coeff> {
        check_same(self, other)?;
        Ok(self * other)
    }

    pub fn pow(&self, mut exp: u64) -> Coeff {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Sign used by the human-readable renderer. Residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_negative(),
            Coeff::Modular { .. } => false,
        }
    }
}

fn check_same(a: &Coeff, b: &Coeff) -> Result<()> {
    let (fa, fb) = (a.field(), b.field());
    if fa != fb {
        return Err(Error::FieldMismatch {
            left: fa.characteristic,
            right: fb.characteristic,
        });
    }
    Ok(())
}

fn mismatch(a: &Coeff, b: &Coeff) -> ! {
    panic!(
        "coefficient field mismatch: {} vs {}",
        a.field(),
        b.field()
    )
}

impl Add for &Coeff {
    type Output = Coeff;

    fn add(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a + b),
            (
                Coeff::Modular { residue: a, modulus: p },
                Coeff::Modular { residue: b, modulus: q },
            ) if p == q => Coeff::Modular {
                residue: ((*a as u128 + *b as u128) % *p as u128) as u64,
                modulus: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;

    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Mul for &Coeff {
    type Output = Coeff;

    fn mul(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a * b),
            (
                Coeff::Modular { residue: a, modulus: p },
                Coeff::Modular { residue: b, modulus: q },
            ) if p == q => Coeff::Modular {
                residue: mul_mod(*a, *b, *p),
                modulus: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        match self {
            Coeff::Rational(a) => Coeff::Rational(-a),
            Coeff::Modular { residue, modulus } => Coeff::Modular {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        -&self
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Coeff::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Coeff::Modular { residue, .. } => write!(f, "{residue}"),
        }
    }
}
