//! The parametric 2-periodic complex read off the Taylor graph.
//!
//! For `a ∈ Kⁿ` the complex is `F_even ⇄ F_odd` with
//! `d(b_J) = Σ sgn({i}, J∖{i}) b_{J∖{i}} + Σ sgn({i}, J) a_i b_{J∪{i}}`, the first sum over
//! differential edges of the Taylor graph and the second over homotopy edges. Away from
//! the origin, `a` lies in the support variety exactly when this complex is not exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{from_i64, FieldPoint, FieldSpec};
use crate::graphs::TaylorGraph;
use crate::linalg::FieldMatrix;
use crate::monomial::{sgn, SubsetIndex};

pub const MAX_PERIODIC_GENERATORS: usize = 12;
pub const MAX_MINOR_DIMENSION: usize = 8;
pub const MAX_MINOR_SIZE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParametricEntry {
    Zero,
    Constant(i8),
    /// `sign · a_index` (0-based index).
    Parameter { index: usize, sign: i8 },
}

impl ParametricEntry {
    pub fn render(self) -> String {
        match self {
            ParametricEntry::Zero => "0".into(),
            ParametricEntry::Constant(s) => if s > 0 { "+1" } else { "-1" }.into(),
            ParametricEntry::Parameter { index, sign } => {
                format!("{}a{}", if sign > 0 { '+' } else { '-' }, index + 1)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(j: SubsetIndex) -> Parity {
        if j.len().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn other(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// `d_even : F_even → F_odd` and `d_odd : F_odd → F_even`, stored by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicPair {
    n: usize,
    even_basis: Vec<SubsetIndex>,
    odd_basis: Vec<SubsetIndex>,
    /// Position of each subset inside its parity class.
    position: Vec<u32>,
    /// `columns[parity][c]`: nonzero entries `(row position, entry)` of column `c`.
    columns: [Vec<Vec<(u32, ParametricEntry)>>; 2],
}

fn slot(p: Parity) -> usize {
    match p {
        Parity::Even => 0,
        Parity::Odd => 1,
    }
}

impl PeriodicPair {
    pub fn build(tg: &TaylorGraph) -> Result<Self> {
        let n = tg.n();
        if n > MAX_PERIODIC_GENERATORS {
            return Err(Error::SizeBound {
                what: "number of generators for the periodic complex",
                size: n,
                bound: MAX_PERIODIC_GENERATORS,
            });
        }
        let mut even_basis = Vec::new();
        let mut odd_basis = Vec::new();
        let mut position = vec![0u32; 1 << n];
        for j in SubsetIndex::all(n) {
            let class = match Parity::of(j) {
                Parity::Even => &mut even_basis,
                Parity::Odd => &mut odd_basis,
            };
            position[j.0 as usize] = class.len() as u32;
            class.push(j);
        }
        let mut columns: [Vec<Vec<(u32, ParametricEntry)>>; 2] = [Vec::new(), Vec::new()];
        for (parity, basis) in [(Parity::Even, &even_basis), (Parity::Odd, &odd_basis)] {
            columns[slot(parity)] = basis
                .iter()
                .map(|&j| {
                    let mut col: Vec<(u32, ParametricEntry)> = Vec::new();
                    for i in tg.differential_generators(j).iter() {
                        let target = j.without(i);
                        let s = sgn(SubsetIndex::singleton(i), target);
                        col.push((position[target.0 as usize], ParametricEntry::Constant(s)));
                    }
                    for i in tg.homotopy_generators(j).iter() {
                        let s = sgn(SubsetIndex::singleton(i), j);
                        let target = j.with(i);
                        col.push((position[target.0 as usize], ParametricEntry::Parameter { index: i, sign: s }));
                    }
                    col.sort_by_key(|e| e.0);
                    col
                })
                .collect();
        }
        Ok(PeriodicPair {
            n,
            even_basis,
            odd_basis,
            position,
            columns,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2^{n−1}`, the size of each parity class.
    pub fn half_rank(&self) -> usize {
        self.even_basis.len()
    }

    pub fn basis(&self, parity: Parity) -> &[SubsetIndex] {
        match parity {
            Parity::Even => &self.even_basis,
            Parity::Odd => &self.odd_basis,
        }
    }

    /// Entry of `d_parity` in row `row` (opposite parity) and column `col`.
    pub fn entry(&self, parity: Parity, row: SubsetIndex, col: SubsetIndex) -> ParametricEntry {
        assert!(Parity::of(col) == parity && Parity::of(row) == parity.other());
        let c = self.position[col.0 as usize] as usize;
        let r = self.position[row.0 as usize];
        self.columns[slot(parity)][c]
            .iter()
            .find(|e| e.0 == r)
            .map_or(ParametricEntry::Zero, |e| e.1)
    }

    /// Overwrites one entry; used to build negative controls.
    pub fn set_entry(&mut self, parity: Parity, row: SubsetIndex, col: SubsetIndex, entry: ParametricEntry) {
        assert!(Parity::of(col) == parity && Parity::of(row) == parity.other());
        let c = self.position[col.0 as usize] as usize;
        let r = self.position[row.0 as usize];
        let column = &mut self.columns[slot(parity)][c];
        column.retain(|e| e.0 != r);
        if entry != ParametricEntry::Zero {
            column.push((r, entry));
            column.sort_by_key(|e| e.0);
        }
    }

    pub fn nonzero_entries(&self, parity: Parity) -> usize {
        self.columns[slot(parity)].iter().map(Vec::len).sum()
    }

    /// Whether `d_odd ∘ d_even` and `d_even ∘ d_odd` vanish as polynomial matrices.
    pub fn compose_is_zero(&self) -> bool {
        [Parity::Even, Parity::Odd].into_iter().all(|first| {
            let a = &self.columns[slot(first)];
            let b = &self.columns[slot(first.other())];
            a.iter().all(|col| {
                // key: (row, smaller parameter, larger parameter), usize::MAX for a constant factor
                let mut acc: BTreeMap<(u32, usize, usize), i64> = BTreeMap::new();
                for &(mid, e1) in col {
                    for &(row, e2) in &b[mid as usize] {
                        let (s1, v1) = split(e1);
                        let (s2, v2) = split(e2);
                        let (lo, hi) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
                        *acc.entry((row, lo, hi)).or_insert(0) += (s1 * s2) as i64;
                    }
                }
                acc.values().all(|&v| v == 0)
            })
        })
    }

    fn dense<T: Clone>(&self, parity: Parity, zero: T, value: impl Fn(ParametricEntry) -> T) -> Vec<Vec<T>> {
        let cols = &self.columns[slot(parity)];
        let mut m = vec![vec![zero; cols.len()]; self.basis(parity.other()).len()];
        for (c, col) in cols.iter().enumerate() {
            for &(r, e) in col {
                m[r as usize][c] = value(e);
            }
        }
        m
    }

    pub fn evaluate_parity(&self, parity: Parity, a: &FieldPoint) -> Result<FieldMatrix> {
        a.check_len(self.n)?;
        Ok(match a.field() {
            FieldSpec::Rational => {
                let coords = a.coords();
                FieldMatrix::Rational(self.dense(parity, BigRational::zero(), |e| match e {
                    ParametricEntry::Zero => BigRational::zero(),
                    ParametricEntry::Constant(s) => BigRational::from_integer(s.into()),
                    ParametricEntry::Parameter { index, sign } => {
                        if sign > 0 {
                            coords[index].clone()
                        } else {
                            -coords[index].clone()
                        }
                    }
                }))
            }
            FieldSpec::Prime(p) => FieldMatrix::Prime {
                p,
                rows: self.evaluate_mod_p(parity, &a.residues(p), p),
            },
        })
    }

    /// `(d_even(a), d_odd(a))`.
    pub fn evaluate(&self, a: &FieldPoint) -> Result<(FieldMatrix, FieldMatrix)> {
        Ok((self.evaluate_parity(Parity::Even, a)?, self.evaluate_parity(Parity::Odd, a)?))
    }

    /// Dense evaluation at residues in `[0, p)`.
    pub fn evaluate_mod_p(&self, parity: Parity, a: &[u64], p: u64) -> Vec<Vec<u64>> {
        self.dense(parity, 0u64, |e| match e {
            ParametricEntry::Zero => 0,
            ParametricEntry::Constant(s) => from_i64(s as i64, p),
            ParametricEntry::Parameter { index, sign } => {
                if sign > 0 {
                    a[index] % p
                } else {
                    (p - a[index] % p) % p
                }
            }
        })
    }

    /// `(rank d_even(a), rank d_odd(a))`.
    pub fn ranks_at(&self, a: &FieldPoint) -> Result<(usize, usize)> {
        let (e, o) = self.evaluate(a)?;
        Ok((e.rank(), o.rank()))
    }

    /// Exactness at both parities: the ranks fill the `2^{n−1}` available dimensions.
    pub fn is_exact_at(&self, a: &FieldPoint) -> Result<bool> {
        let (e, o) = self.ranks_at(a)?;
        Ok(e + o == self.half_rank())
    }

    /// Text dump of both matrices, rows and columns labeled by subsets in mask order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for parity in [Parity::Even, Parity::Odd] {
            let name = match parity {
                Parity::Even => "d_even",
                Parity::Odd => "d_odd",
            };
            let m = self.dense(parity, ParametricEntry::Zero, |e| e);
            let _ = writeln!(out, "{name}");
            let header: Vec<String> = self.basis(parity).iter().map(|c| c.compact_label()).collect();
            let _ = writeln!(out, "\t{}", header.join("\t"));
            for (r, row) in self.basis(parity.other()).iter().zip(&m) {
                let cells: Vec<String> = row.iter().map(|e| e.render()).collect();
                let _ = writeln!(out, "{}\t{}", r.compact_label(), cells.join("\t"));
            }
        }
        out
    }

    /// Every `r × r` minor of `d_parity` as an integer polynomial in `a_1, …, a_n`,
    /// deduplicated up to sign, zeros dropped.
    pub fn minor_ideal_generators(&self, parity: Parity, r: usize) -> Result<Vec<IntPoly>> {
        let dim = self.half_rank();
        if dim > MAX_MINOR_DIMENSION || r > MAX_MINOR_SIZE {
            return Err(Error::SizeBound {
                what: "matrix dimension for symbolic minors",
                size: dim.max(r),
                bound: if dim > MAX_MINOR_DIMENSION { MAX_MINOR_DIMENSION } else { MAX_MINOR_SIZE },
            });
        }
        if r == 0 {
            return Ok(vec![IntPoly::constant(1)]);
        }
        let m = self.dense(parity, IntPoly::zero(), |e| IntPoly::from_entry(e, self.n));
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for rows in index_subsets(dim, r) {
            for cols in index_subsets(dim, r) {
                let sub: Vec<Vec<&IntPoly>> = rows.iter().map(|&i| cols.iter().map(|&j| &m[i][j]).collect()).collect();
                let det = determinant(&sub).normalized();
                if !det.is_zero() && seen.insert(det.clone()) {
                    out.push(det);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Largest `r` with a nonzero `r × r` minor, i.e. the rank over `ℚ(a)`.
    pub fn generic_rank_symbolic(&self, parity: Parity) -> Result<usize> {
        let mut r = 0;
        while r < self.half_rank().min(MAX_MINOR_SIZE) {
            if self.minor_ideal_generators(parity, r + 1)?.is_empty() {
                break;
            }
            r += 1;
        }
        Ok(r)
    }
}

/// `(sign, parameter index or usize::MAX for a constant)`.
fn split(e: ParametricEntry) -> (i8, usize) {
    match e {
        ParametricEntry::Zero => (0, usize::MAX),
        ParametricEntry::Constant(s) => (s, usize::MAX),
        ParametricEntry::Parameter { index, sign } => (sign, index),
    }
}

fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

fn determinant(m: &[Vec<&IntPoly>]) -> IntPoly {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc = IntPoly::zero();
    for j in 0..m.len() {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<&IntPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect())
            .collect();
        let term = m[0][j].mul(&determinant(&minor));
        acc.add_scaled(&term, if j % 2 == 0 { 1 } else { -1 });
    }
    acc
}

/// Sparse integer polynomial in `a_1, …, a_n`, keyed by exponent vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly(BTreeMap<Vec<u32>, i64>);

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = IntPoly::default();
        if c != 0 {
            p.0.insert(Vec::new(), c);
        }
        p
    }

    fn from_entry(e: ParametricEntry, n: usize) -> Self {
        let mut p = IntPoly::default();
        match e {
            ParametricEntry::Zero => {}
            ParametricEntry::Constant(s) => {
                p.0.insert(vec![0; n], s as i64);
            }
            ParametricEntry::Parameter { index, sign } => {
                let mut exps = vec![0; n];
                exps[index] = 1;
                p.0.insert(exps, sign as i64);
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i64)> {
        self.0.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    fn add_scaled(&mut self, other: &IntPoly, s: i64) {
        for (k, &v) in &other.0 {
            let slot = self.0.entry(k.clone()).or_insert(0);
            *slot += s * v;
            if *slot == 0 {
                self.0.remove(k);
            }
        }
    }

    fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = IntPoly::default();
        for (k1, &v1) in &self.0 {
            for (k2, &v2) in &other.0 {
                let k: Vec<u32> = if k1.is_empty() {
                    k2.clone()
                } else if k2.is_empty() {
                    k1.clone()
                } else {
                    k1.iter().zip(k2).map(|(a, b)| a + b).collect()
                };
                let slot = out.0.entry(k.clone()).or_insert(0);
                *slot += v1 * v2;
                if *slot == 0 {
                    out.0.remove(&k);
                }
            }
        }
        out
    }

    /// Sign fixed so that the greatest monomial has a positive coefficient.
    fn normalized(self) -> IntPoly {
        match self.0.iter().next_back() {
            Some((_, &c)) if c < 0 => IntPoly(self.0.into_iter().map(|(k, v)| (k, -v)).collect()),
            _ => self,
        }
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, &c)) in self.0.iter().rev().enumerate() {
            let vars: Vec<String> = k
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { format!("a{}", v + 1) } else { format!("a{}^{}", v + 1, e) })
                .collect();
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                out.push(' ');
            }
            out.push_str(sign);
            let mag = c.unsigned_abs();
            if vars.is_empty() {
                let _ = write!(out, "{mag}");
            } else if mag == 1 {
                out.push_str(&vars.join("*"));
            } else {
                let _ = write!(out, "{mag}*{}", vars.join("*"));
            }
        }
        out
    }

    pub fn evaluate(&self, a: &[BigRational]) -> BigRational {
        self.0
            .iter()
            .map(|(k, &c)| {
                k.iter()
                    .enumerate()
                    .fold(BigRational::from_integer(c.into()), |acc, (v, &e)| acc * num_traits::pow(a[v].clone(), e as usize))
            })
            .fold(BigRational::zero(), |acc, t| acc + t)
    }
}

/// Whether `a` makes the complex exact; on the origin this is never the case when every
/// generator has degree at least 2.
pub fn is_exact_at(pp: &PeriodicPair, a: &FieldPoint) -> Result<bool> {
    pp.is_exact_at(a)
}

pub fn build_periodic_pair(tg: &TaylorGraph) -> Result<PeriodicPair> {
    PeriodicPair::build(tg)
}
