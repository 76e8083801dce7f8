use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient ring: the integers, a prime field, or the integers with a
/// finite set of primes inverted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    ModP(u64),
    /// Sorted, distinct primes.
    Localized(Vec<u64>),
}

pub fn is_prime(n: u64) -> bool {
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

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl RingSpec {
    pub fn mod_p(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(RingSpec::ModP(p))
    }

    pub fn localized(primes: &[u64]) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::InvalidInput("localization needs at least one prime".into()));
        }
        let mut ps = primes.to_vec();
        for &p in &ps {
            if !is_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
        }
        ps.sort_unstable();
        ps.dedup();
        Ok(RingSpec::Localized(ps))
    }

    pub fn is_field(&self) -> bool {
        matches!(self, RingSpec::ModP(_))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            RingSpec::ModP(p) => Some(*p),
            _ => None,
        }
    }

    /// Removes the primes that are units in this ring; result is non-negative.
    /// Over a prime field the result is 0 or 1.
    pub fn non_unit_part(&self, n: &BigInt) -> BigInt {
        match self {
            RingSpec::Integers => n.abs(),
            RingSpec::ModP(p) => {
                if n.mod_floor(&BigInt::from(*p)).is_zero() {
                    BigInt::zero()
                } else {
                    BigInt::one()
                }
            }
            RingSpec::Localized(ps) => {
                if n.is_zero() {
                    return BigInt::zero();
                }
                let mut m = n.abs();
                for &p in ps {
                    let bp = BigInt::from(p);
                    while m.mod_floor(&bp).is_zero() {
                        m /= &bp;
                    }
                }
                m
            }
        }
    }

    pub fn is_unit(&self, n: &BigInt) -> bool {
        self.non_unit_part(n).is_one()
    }

    /// Whether `c / d` lies in the ring (for integers `c`, `d`).
    pub fn divides(&self, d: &BigInt, c: &BigInt) -> bool {
        if c.is_zero() {
            return true;
        }
        let dd = self.non_unit_part(d);
        if dd.is_zero() {
            return false;
        }
        match self {
            RingSpec::ModP(_) => true,
            _ => c.mod_floor(&dd).is_zero(),
        }
    }

    /// Brings a rational number into canonical form for this ring.
    pub fn normalize(&self, q: &BigRational) -> Result<BigRational> {
        match self {
            RingSpec::Integers => {
                if !q.denom().is_one() {
                    return Err(Error::InvalidInput(format!("{q} is not an integer")));
                }
                Ok(q.clone())
            }
            RingSpec::ModP(p) => {
                let bp = BigInt::from(*p);
                let den = q.denom().mod_floor(&bp);
                if den.is_zero() {
                    return Err(Error::InvalidInput(format!("{q} has denominator divisible by {p}")));
                }
                let inv = den.modpow(&(&bp - 2u32), &bp);
                Ok(BigRational::from_integer((q.numer() * inv).mod_floor(&bp)))
            }
            RingSpec::Localized(_) => {
                if !self.non_unit_part(q.denom()).is_one() {
                    return Err(Error::InvalidInput(format!(
                        "{q} has a denominator outside the inverted primes"
                    )));
                }
                Ok(q.clone())
            }
        }
    }

    /// Reduces an integer to the canonical representative of its image.
    pub fn reduce_int(&self, n: &BigInt) -> BigInt {
        match self {
            RingSpec::ModP(p) => n.mod_floor(&BigInt::from(*p)),
            _ => n.clone(),
        }
    }

    pub fn p_u64(&self) -> Option<u64> {
        self.modulus()
    }
}

/// Converts a small non-negative integer to `u64`.
pub fn to_u64(n: &BigInt) -> u64 {
    n.to_u64().expect("value does not fit in u64")
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::ModP(p) => write!(f, "Z/{p}"),
            RingSpec::Localized(ps) => {
                write!(f, "Z[")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "1/{p}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "Z" {
            return Ok(RingSpec::Integers);
        }
        if let Some(rest) = s.strip_prefix("Z/") {
            let p: u64 = rest.parse().map_err(|_| Error::Parse(format!("bad modulus in {s}")))?;
            return RingSpec::mod_p(p);
        }
        if let Some(inner) = s.strip_prefix("Z[").and_then(|r| r.strip_suffix(']')) {
            let mut primes = Vec::new();
            for part in inner.split(',') {
                let den = part
                    .strip_prefix("1/")
                    .ok_or_else(|| Error::Parse(format!("expected 1/p in {s}")))?;
                let n: u64 = den.parse().map_err(|_| Error::Parse(format!("bad denominator in {s}")))?;
                if n < 2 {
                    return Err(Error::Parse(format!("bad denominator in {s}")));
                }
                primes.extend(prime_factors(n));
            }
            return RingSpec::localized(&primes);
        }
        Err(Error::Parse(format!("unknown ring '{s}'")))
    }
}

impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
