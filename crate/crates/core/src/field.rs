//! Coefficient fields and points of affine space over them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::monomial::SubsetIndex;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// ℚ, with fraction-free integer elimination.
    #[default]
    Rational,
    /// 𝔽_p for a prime `p < 2^63`.
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 63 || !primal_check::miller_rabin(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^63")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => f.write_str("rational"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "rational" || s == "Q" {
            return Ok(FieldSpec::Rational);
        }
        let digits = s
            .strip_prefix("fp:")
            .ok_or_else(|| Error::InvalidField(format!("`{s}` (expected `rational` or `fp:<p>`)")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidField(format!("`{digits}` is not a modulus")))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point `a ∈ Kⁿ`. Coordinates are stored as rationals; over 𝔽_p they are read
/// through reduction, so every denominator must be prime to `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPoint {
    field: FieldSpec,
    coords: Vec<BigRational>,
}

impl FieldPoint {
    pub fn new(field: FieldSpec, coords: Vec<BigRational>) -> Result<Self> {
        if let FieldSpec::Prime(p) = field {
            for c in &coords {
                if (c.denom() % BigInt::from(p)).is_zero() {
                    return Err(Error::NotInvertible(c.to_string()));
                }
            }
        }
        Ok(FieldPoint { field, coords })
    }

    pub fn from_integers(field: FieldSpec, coords: &[i64]) -> Self {
        FieldPoint {
            field,
            coords: coords.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        }
    }

    pub fn zero(field: FieldSpec, n: usize) -> Self {
        FieldPoint {
            field,
            coords: vec![BigRational::zero(); n],
        }
    }

    /// The standard basis vector `e_i` (0-based `i`).
    pub fn basis_vector(field: FieldSpec, n: usize, i: usize) -> Self {
        let mut p = Self::zero(field, n);
        p.coords[i] = BigRational::one();
        p
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Whether coordinate `i` is zero in the field.
    pub fn coord_is_zero(&self, i: usize) -> bool {
        match self.field {
            FieldSpec::Rational => self.coords[i].is_zero(),
            FieldSpec::Prime(p) => (self.coords[i].numer() % BigInt::from(p)).is_zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.n()).all(|i| self.coord_is_zero(i))
    }

    /// Indices of coordinates that are zero in the field.
    pub fn zero_set(&self) -> SubsetIndex {
        SubsetIndex::from_indices((0..self.n()).filter(|&i| self.coord_is_zero(i)))
    }

    /// Coordinates reduced into `[0, p)`.
    pub fn residues(&self, p: u64) -> Vec<u64> {
        self.coords
            .iter()
            .map(|c| {
                let num = reduce(c.numer(), p);
                let den = reduce(c.denom(), p);
                mul_mod(num, inv_mod(den, p).expect("denominator checked on construction"), p)
            })
            .collect()
    }

    /// Coordinates indexed by `block`, in increasing order.
    pub fn project(&self, block: SubsetIndex) -> FieldPoint {
        FieldPoint {
            field: self.field,
            coords: block.iter().map(|i| self.coords[i].clone()).collect(),
        }
    }

    pub fn render_coords(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.n(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for FieldPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.render_coords().join(", "))
    }
}

pub(crate) fn reduce(x: &BigInt, p: u64) -> u64 {
    let m = x.mod_floor(&BigInt::from(p));
    m.to_u64().expect("residue fits")
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    add_mod(a, p - b % p, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
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

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    (!a.is_multiple_of(p)).then(|| pow_mod(a, p - 2, p))
}

/// Signed integer into `[0, p)`.
pub(crate) fn from_i64(x: i64, p: u64) -> u64 {
    let r = (x as i128).rem_euclid(p as i128);
    r as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_parsing() {
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("fp:1000003".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(1_000_003));
        assert!("fp:1000001".parse::<FieldSpec>().is_err());
        assert!("fp:1".parse::<FieldSpec>().is_err());
        assert!("reals".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(7).to_string(), "fp:7");
        let json = serde_json::to_string(&FieldSpec::Prime(7)).unwrap();
        assert_eq!(json, "\"fp:7\"");
        assert_eq!(serde_json::from_str::<FieldSpec>(&json).unwrap(), FieldSpec::Prime(7));
    }

    #[test]
    fn residues_and_zero_sets() {
        let half = BigRational::new(1.into(), 2.into());
        let p = FieldPoint::new(FieldSpec::Prime(7), vec![half.clone(), BigRational::from_integer(14.into())])
            .unwrap();
        assert_eq!(p.residues(7), vec![4, 0]);
        assert_eq!(p.zero_set(), SubsetIndex::from_labels(&[2]));
        assert!(FieldPoint::new(FieldSpec::Prime(2), vec![half]).is_err());
        let q = FieldPoint::from_integers(FieldSpec::Rational, &[0, 3, 0]);
        assert_eq!(q.zero_set(), SubsetIndex::from_labels(&[1, 3]));
        assert!(FieldPoint::zero(FieldSpec::Rational, 3).is_zero());
        assert_eq!(q.project(SubsetIndex::from_labels(&[2, 3])).render_coords(), vec!["3", "0"]);
    }

    #[test]
    fn modular_helpers() {
        let p = 1_000_000_007;
        assert_eq!(mul_mod(inv_mod(12345, p).unwrap(), 12345, p), 1);
        assert_eq!(from_i64(-1, p), p - 1);
        assert_eq!(sub_mod(3, 5, 7), 5);
        assert_eq!(inv_mod(0, p), None);
    }
}
