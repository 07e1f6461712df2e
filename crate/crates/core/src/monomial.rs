//! Exponent-vector monomials, subsets of generators, and validated presentations.
//!
//! A [`Presentation`] is an ordered list of monomials `f_1, …, f_n` in abstract
//! irreducibles `x_1, …, x_d`. Units are not tracked: every construction downstream
//! depends only on exponent vectors.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest number of generators a presentation may carry (subsets are `u64` masks).
pub const MAX_GENERATORS: usize = 64;

/// Exponent vector `(a_1, …, a_d)` of `x_1^{a_1} ⋯ x_d^{a_d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn unit(d: usize) -> Self {
        Monomial(vec![0; d])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `≤`.
    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    /// `self / other`; `None` if `other` does not divide `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Indices of irreducibles with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// Renders with the given irreducible names, e.g. `x^2*y`; the unit renders as `1`.
    pub fn render(&self, names: &[String]) -> String {
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

/// A subset `J ⊆ [n]` encoded as a bitmask: bit `i` set iff generator `i + 1` belongs to `J`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex(pub u64);

impl SubsetIndex {
    pub const EMPTY: SubsetIndex = SubsetIndex(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            SubsetIndex(u64::MAX)
        } else {
            SubsetIndex((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        SubsetIndex(1u64 << i)
    }

    /// Builds a subset from 0-based generator indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        SubsetIndex(indices.into_iter().fold(0, |m, i| m | (1u64 << i)))
    }

    /// Builds a subset from 1-based labels, as written in the literature (`{2,4}`).
    pub fn from_labels(labels: &[usize]) -> Self {
        Self::from_indices(labels.iter().map(|&l| l - 1))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn with(self, i: usize) -> Self {
        SubsetIndex(self.0 | (1u64 << i))
    }

    pub fn without(self, i: usize) -> Self {
        SubsetIndex(self.0 & !(1u64 << i))
    }

    pub fn union(self, other: SubsetIndex) -> Self {
        SubsetIndex(self.0 | other.0)
    }

    pub fn intersection(self, other: SubsetIndex) -> Self {
        SubsetIndex(self.0 & other.0)
    }

    pub fn difference(self, other: SubsetIndex) -> Self {
        SubsetIndex(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: SubsetIndex) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: SubsetIndex) -> bool {
        self.0 & !other.0 == 0
    }

    /// 0-based members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// 1-based members in increasing order.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Comma-joined 1-based labels, `empty` for ∅.
    pub fn dot_name(self) -> String {
        if self.is_empty() {
            "empty".to_string()
        } else {
            self.labels()
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Concatenated 1-based labels (`124`, `∅`), the compact form used in matrix dumps.
    pub fn compact_label(self) -> String {
        if self.is_empty() {
            "∅".to_string()
        } else {
            self.labels().iter().map(|l| l.to_string()).collect()
        }
    }

    /// All subsets of `[n]` in increasing mask order.
    pub fn all(n: usize) -> impl Iterator<Item = SubsetIndex> {
        assert!(n < 64, "cannot enumerate all subsets of {n} elements");
        (0..(1u64 << n)).map(SubsetIndex)
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = SubsetIndex> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(SubsetIndex(cur))
        })
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

impl Serialize for SubsetIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SubsetIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(deserializer)?;
        if labels.iter().any(|&l| l == 0 || l > MAX_GENERATORS) {
            return Err(serde::de::Error::custom("subset labels must lie in 1..=64"));
        }
        Ok(SubsetIndex::from_labels(&labels))
    }
}

/// `sgn(J, L) = (-1)^#{(j, ℓ) : j ∈ J, ℓ ∈ L, j > ℓ}` for disjoint `J, L`, and `0` otherwise.
pub fn sgn(j: SubsetIndex, l: SubsetIndex) -> i8 {
    if !j.is_disjoint(l) {
        return 0;
    }
    let inversions: u32 = j
        .iter()
        .map(|x| (l.0 & ((1u64 << x) - 1)).count_ones())
        .sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// An ordered, minimal list of monomial generators of total degree ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    irreducible_names: Vec<String>,
    generators: Vec<Monomial>,
}

impl Presentation {
    /// Validates and builds a presentation.
    pub fn new(irreducible_names: Vec<String>, generators: Vec<Monomial>) -> Result<Self> {
        let pres = Presentation {
            irreducible_names,
            generators,
        };
        pres.validate()?;
        Ok(pres)
    }

    /// Like [`Presentation::new`], but drops generators divisible by an earlier-kept one
    /// (or by any other generator) instead of failing. Returns the dropped `(dropped,
    /// divisor)` pairs, 1-based in the input numbering.
    pub fn new_reduced(
        irreducible_names: Vec<String>,
        generators: Vec<Monomial>,
    ) -> Result<(Self, Vec<(usize, usize)>)> {
        let mut keep = vec![true; generators.len()];
        let mut dropped = Vec::new();
        for j in 0..generators.len() {
            for i in 0..generators.len() {
                if i == j || !keep[i] {
                    continue;
                }
                // among equal generators the first one survives
                let equal = generators[i] == generators[j];
                if generators[i].divides(&generators[j]) && (!equal || i < j) {
                    keep[j] = false;
                    dropped.push((j + 1, i + 1));
                    break;
                }
            }
        }
        let kept = generators
            .into_iter()
            .zip(keep)
            .filter_map(|(g, k)| k.then_some(g))
            .collect();
        Ok((Presentation::new(irreducible_names, kept)?, dropped))
    }

    fn validate(&self) -> Result<()> {
        let n = self.generators.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if n > MAX_GENERATORS {
            return Err(Error::SizeBound {
                what: "number of generators",
                size: n,
                bound: MAX_GENERATORS,
            });
        }
        let d = self.irreducible_names.len();
        for (i, name) in self.irreducible_names.iter().enumerate() {
            if self.irreducible_names[..i].contains(name) {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            assert_eq!(g.len(), d, "generator {} has the wrong length", i + 1);
            if g.degree() < 2 {
                return Err(Error::LowDegree {
                    generator: i + 1,
                    degree: g.degree(),
                });
            }
        }
        for (i, gi) in self.generators.iter().enumerate() {
            for (j, gj) in self.generators.iter().enumerate() {
                if i != j && gi.divides(gj) {
                    return Err(Error::NotMinimal {
                        divisor: i + 1,
                        multiple: j + 1,
                    });
                }
            }
        }
        Ok(())
    }

    /// Number of generators `n`.
    pub fn n(&self) -> usize {
        self.generators.len()
    }

    /// Number of irreducibles `d`.
    pub fn d(&self) -> usize {
        self.irreducible_names.len()
    }

    pub fn irreducible_names(&self) -> &[String] {
        &self.irreducible_names
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Monomial {
        &self.generators[i]
    }

    /// `f_J`: the componentwise maximum over `J`; the unit monomial for `J = ∅`.
    pub fn lcm_subset(&self, j: SubsetIndex) -> Monomial {
        let mut out = vec![0u32; self.d()];
        for i in j.iter() {
            for (o, &e) in out.iter_mut().zip(self.generators[i].exponents()) {
                *o = (*o).max(e);
            }
        }
        Monomial(out)
    }

    /// `f_J / f_{J∖{i}}` for `i ∈ J`.
    pub fn quotient_coefficient(&self, j: SubsetIndex, i: usize) -> Monomial {
        assert!(j.contains(i), "generator {} is not in {}", i + 1, j);
        self.lcm_subset(j)
            .checked_div(&self.lcm_subset(j.without(i)))
            .expect("f_{J∖i} always divides f_J")
    }

    /// Whether `gcd(f_i, f_j)` is a unit, i.e. the supports are disjoint.
    pub fn pair_gcd_is_unit(&self, i: usize, j: usize) -> bool {
        assert_ne!(i, j);
        self.generators[i].is_coprime(&self.generators[j])
    }

    /// Restricts to the generators in `block` (order preserved) and to the irreducibles
    /// appearing in their supports (order preserved).
    pub fn restrict(&self, block: SubsetIndex) -> Presentation {
        let mut used = vec![false; self.d()];
        for i in block.iter() {
            for v in self.generators[i].support() {
                used[v] = true;
            }
        }
        let names = self
            .irreducible_names
            .iter()
            .zip(&used)
            .filter(|&(_, &u)| u).map(|(name, _)| name.clone())
            .collect();
        let generators = block
            .iter()
            .map(|i| {
                Monomial(
                    self.generators[i]
                        .exponents()
                        .iter()
                        .zip(&used)
                        .filter_map(|(&e, &u)| u.then_some(e))
                        .collect(),
                )
            })
            .collect();
        Presentation {
            irreducible_names: names,
            generators,
        }
    }

    /// Canonical text form accepted by [`crate::parse::parse_presentation`].
    pub fn render(&self) -> String {
        self.generators
            .iter()
            .map(|g| g.render(&self.irreducible_names))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;

    fn s(labels: &[usize]) -> SubsetIndex {
        SubsetIndex::from_labels(labels)
    }

    #[test]
    fn sign_examples() {
        assert_eq!(sgn(s(&[2]), s(&[1])), -1);
        assert_eq!(sgn(s(&[]), s(&[1, 3])), 1);
        assert_eq!(sgn(s(&[1, 3]), s(&[1])), 0);
        assert_eq!(sgn(s(&[3]), s(&[1, 2])), 1);
        assert_eq!(sgn(s(&[2]), s(&[1, 3])), -1);
    }

    // brute-force pair count, independent of the bit trick in `sgn`
    fn sgn_naive(j: &[usize], l: &[usize]) -> i8 {
        if j.iter().any(|x| l.contains(x)) {
            return 0;
        }
        let mut count = 0;
        for &a in j {
            for &b in l {
                if a > b {
                    count += 1;
                }
            }
        }
        if count % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn sign_identities_exhaustive_n6() {
        let n = 6;
        for j in SubsetIndex::all(n) {
            for l in SubsetIndex::all(n) {
                let jl: Vec<usize> = j.iter().collect();
                let ll: Vec<usize> = l.iter().collect();
                assert_eq!(sgn(j, l), sgn_naive(&jl, &ll));
                if j.is_disjoint(l) {
                    let expected = if (j.len() * l.len()) % 2 == 0 { 1 } else { -1 };
                    assert_eq!(sgn(j, l) * sgn(l, j), expected);
                    for k in SubsetIndex::all(n) {
                        if k.is_disjoint(j) && k.is_disjoint(l) {
                            assert_eq!(sgn(j, k) * sgn(j, l), sgn(j, k.union(l)));
                        }
                    }
                }
            }
        }
    }

    fn squared_ends() -> Presentation {
        parse_presentation("x^2, x*y, y*z, z*w, w^2").unwrap()
    }

    #[test]
    fn lcm_examples() {
        let p = squared_ends();
        assert_eq!(p.lcm_subset(s(&[2, 4])).exponents(), &[1, 1, 1, 1]);
        assert!(p.lcm_subset(SubsetIndex::EMPTY).is_unit());
        assert_eq!(p.lcm_subset(s(&[1, 2, 3])).exponents(), &[2, 1, 1, 0]);
    }

    #[test]
    fn quotient_examples() {
        let p = parse_presentation("y*z, x*z, x*y").unwrap();
        // variables registered as y, z, x
        assert_eq!(p.quotient_coefficient(s(&[1, 2]), 0).render(p.irreducible_names()), "y");
        assert_eq!(p.quotient_coefficient(s(&[3]), 2), *p.generator(2));
        let q = parse_presentation("x^2, x*y").unwrap();
        let coeff = q.quotient_coefficient(s(&[1, 2]), 1);
        // recompute the lcms by hand
        let f12 = Monomial::new(vec![2, 1]);
        let f1 = Monomial::new(vec![2, 0]);
        assert_eq!(coeff, f12.checked_div(&f1).unwrap());
        assert_eq!(coeff.render(q.irreducible_names()), "y");
    }

    #[test]
    fn gcd_unit_examples() {
        let p = parse_presentation("x^2, x*y").unwrap();
        assert!(!p.pair_gcd_is_unit(0, 1));
        let p = parse_presentation("x^2, y^2").unwrap();
        assert!(p.pair_gcd_is_unit(0, 1));
        assert!(squared_ends().pair_gcd_is_unit(0, 2));
    }

    #[test]
    fn subsets_iterates_all() {
        let all: Vec<u64> = s(&[1, 3]).subsets().map(|x| x.0).collect();
        assert_eq!(all, vec![0, 1, 4, 5]);
        assert_eq!(SubsetIndex::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn lcm_gcd_identity() {
        let p = squared_ends();
        for j in SubsetIndex::all(5) {
            for k in SubsetIndex::all(5) {
                let fj = p.lcm_subset(j);
                let fk = p.lcm_subset(k);
                let fjk = p.lcm_subset(j.union(k));
                assert!(fj.divides(&fjk));
                assert_eq!(fjk, fj.lcm(&fk));
                assert_eq!(fj.mul(&fk).checked_div(&fjk).unwrap(), fj.gcd(&fk));
            }
        }
    }

    #[test]
    fn reduce_drops_dominated() {
        let names = vec!["x".to_string(), "y".to_string()];
        let gens = vec![
            Monomial::new(vec![1, 1]),
            Monomial::new(vec![2, 1]),
            Monomial::new(vec![0, 2]),
            Monomial::new(vec![0, 2]),
        ];
        let (p, dropped) = Presentation::new_reduced(names, gens).unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(dropped, vec![(2, 1), (4, 3)]);
    }

    #[test]
    fn restrict_keeps_support_variables() {
        let p = parse_presentation("x^2, y^2, y*z").unwrap();
        let r = p.restrict(s(&[2, 3]));
        assert_eq!(r.irreducible_names(), &["y".to_string(), "z".to_string()]);
        assert_eq!(r.render(), "y^2, y*z");
    }
}
