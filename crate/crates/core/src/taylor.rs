//! The Taylor dg algebra `T(f)`.
//!
//! `T` is free on `b_J`, `J ⊆ [n]`, in homological degree `|J|`, with
//!
//! ```text
//! ∂(b_J)    = Σ_{i ∈ J} sgn({i}, J∖{i}) · f_J / f_{J∖{i}} · b_{J∖{i}}
//! b_J · b_K = sgn(J, K) · f_J f_K / f_{J∪K} · b_{J∪K}
//! ```
//!
//! Only basis-level operations are exposed; [`Chain`] exists to check the dg axioms.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::{sgn, Monomial, Presentation, SubsetIndex};

pub const MAX_TAYLOR_COMPLEX_GENERATORS: usize = 20;
pub const MAX_AXIOM_GENERATORS: usize = 10;

/// One term of `∂(b_J)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialTerm {
    pub target: SubsetIndex,
    pub removed: usize,
    pub sign: i8,
    pub coefficient: Monomial,
}

/// `b_J · b_K`: zero sign means the product vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    pub sign: i8,
    pub coefficient: Monomial,
    pub target: SubsetIndex,
}

#[derive(Clone, Debug)]
pub struct TaylorComplex {
    pres: Presentation,
    lcm: Vec<Monomial>,
}

impl TaylorComplex {
    pub fn build(pres: &Presentation) -> Result<Self> {
        let n = pres.n();
        if n > MAX_TAYLOR_COMPLEX_GENERATORS {
            return Err(Error::SizeBound {
                what: "number of generators for the Taylor complex",
                size: n,
                bound: MAX_TAYLOR_COMPLEX_GENERATORS,
            });
        }
        let mut lcm = Vec::with_capacity(1 << n);
        lcm.push(Monomial::unit(pres.d()));
        for mask in 1u64..(1 << n) {
            let low = mask.trailing_zeros() as usize;
            let rest = &lcm[(mask & (mask - 1)) as usize];
            lcm.push(rest.lcm(pres.generator(low)));
        }
        Ok(TaylorComplex {
            pres: pres.clone(),
            lcm,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn n(&self) -> usize {
        self.pres.n()
    }

    pub fn lcm(&self, j: SubsetIndex) -> &Monomial {
        &self.lcm[j.0 as usize]
    }

    /// Basis elements of homological degree `s`, in increasing mask order.
    pub fn basis(&self, s: usize) -> Vec<SubsetIndex> {
        SubsetIndex::all(self.n()).filter(|j| j.len() == s).collect()
    }

    pub fn rank(&self, s: usize) -> usize {
        binomial(self.n(), s)
    }

    pub fn differential(&self, j: SubsetIndex) -> Vec<DifferentialTerm> {
        let fj = self.lcm(j);
        j.iter()
            .map(|i| {
                let target = j.without(i);
                DifferentialTerm {
                    target,
                    removed: i,
                    sign: sgn(SubsetIndex::singleton(i), target),
                    coefficient: fj.checked_div(self.lcm(target)).expect("lcm divisibility"),
                }
            })
            .collect()
    }

    pub fn multiply(&self, j: SubsetIndex, k: SubsetIndex) -> Product {
        let d = self.pres.d();
        let s = sgn(j, k);
        if s == 0 {
            return Product {
                sign: 0,
                coefficient: Monomial::unit(d),
                target: j.union(k),
            };
        }
        let target = j.union(k);
        let coefficient = self
            .lcm(j)
            .mul(self.lcm(k))
            .checked_div(self.lcm(target))
            .expect("f_{J∪K} divides f_J f_K");
        Product {
            sign: s,
            coefficient,
            target,
        }
    }

    /// Matrix of `∂ : T_s → T_{s−1}`, columns and rows in increasing mask order.
    pub fn differential_matrix(&self, s: usize) -> DifferentialMatrix {
        let cols = self.basis(s);
        let rows = if s == 0 { Vec::new() } else { self.basis(s - 1) };
        let entries = rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .map(|&c| {
                        if r.is_subset(c) && c.len() == r.len() + 1 {
                            let i = c.difference(r).iter().next().expect("one element");
                            let coefficient = self.lcm(c).checked_div(self.lcm(r)).expect("lcm");
                            Some((sgn(SubsetIndex::singleton(i), r), coefficient))
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        DifferentialMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Plain-text dump of every differential matrix, degree `n` down to `1`.
    pub fn dump_matrices(&self) -> String {
        let names = self.pres.irreducible_names();
        let mut out = String::new();
        for s in (1..=self.n()).rev() {
            let m = self.differential_matrix(s);
            let _ = writeln!(out, "degree {s} -> {}", s - 1);
            let header: Vec<String> = m.cols.iter().map(|c| c.compact_label()).collect();
            let _ = writeln!(out, "\t{}", header.join("\t"));
            for (r, row) in m.rows.iter().zip(&m.entries) {
                let cells: Vec<String> = row
                    .iter()
                    .map(|e| match e {
                        None => "0".to_string(),
                        Some((s, c)) => format!("{}{}", if *s > 0 { '+' } else { '-' }, c.render(names)),
                    })
                    .collect();
                let _ = writeln!(out, "{}\t{}", r.compact_label(), cells.join("\t"));
            }
        }
        out
    }

    pub fn verify_dg_axioms(&self) -> Result<DgAxiomReport> {
        self.verify_dg_axioms_with(true)
    }

    /// Exhaustive check over basis elements, pairs, and triples. For `n > 6` only
    /// pairwise-disjoint triples are expanded: any overlap makes both sides zero.
    pub fn verify_dg_axioms_with(&self, parallel: bool) -> Result<DgAxiomReport> {
        let n = self.n();
        if n > MAX_AXIOM_GENERATORS {
            return Err(Error::SizeBound {
                what: "number of generators for axiom verification",
                size: n,
                bound: MAX_AXIOM_GENERATORS,
            });
        }
        let basis: Vec<SubsetIndex> = SubsetIndex::all(n).collect();

        let square_zero = first_failure(&basis, parallel, |&j| {
            let dd = Chain::basis(j, self.pres.d()).differential(self).differential(self);
            (!dd.is_zero()).then(|| vec![j])
        });

        let pairs: Vec<(SubsetIndex, SubsetIndex)> =
            basis.iter().flat_map(|&j| basis.iter().map(move |&k| (j, k))).collect();
        let leibniz = first_failure(&pairs, parallel, |&(j, k)| {
            let d = self.pres.d();
            let bj = Chain::basis(j, d);
            let bk = Chain::basis(k, d);
            let lhs = bj.mul(&bk, self).differential(self);
            let mut rhs = bj.differential(self).mul(&bk, self);
            let sign = if j.len() % 2 == 0 { 1 } else { -1 };
            rhs.add_scaled(&bj.mul(&bk.differential(self), self), sign);
            (lhs != rhs).then(|| vec![j, k])
        });
        let graded_commutative = first_failure(&pairs, parallel, |&(j, k)| {
            let a = self.multiply(j, k);
            let b = self.multiply(k, j);
            let twist = if (j.len() * k.len()) % 2 == 0 { 1 } else { -1 };
            let ok = a.sign == twist * b.sign && (a.sign == 0 || a.coefficient == b.coefficient);
            (!ok).then(|| vec![j, k])
        });

        let all_triples = n <= 6;
        let triples: Vec<(SubsetIndex, SubsetIndex)> = pairs
            .iter()
            .copied()
            .filter(|&(j, k)| all_triples || j.is_disjoint(k))
            .collect();
        let associative = first_failure(&triples, parallel, |&(j, k)| {
            let d = self.pres.d();
            let bj = Chain::basis(j, d);
            let bk = Chain::basis(k, d);
            let jk = bj.mul(&bk, self);
            basis
                .iter()
                .filter(|&&l| all_triples || l.is_disjoint(j.union(k)))
                .find(|&&l| {
                    let bl = Chain::basis(l, d);
                    jk.mul(&bl, self) != bj.mul(&bk.mul(&bl, self), self)
                })
                .map(|&l| vec![j, k, l])
        });

        let mut failures = Vec::new();
        for (axiom, witness) in [
            (Axiom::SquareZero, &square_zero),
            (Axiom::Leibniz, &leibniz),
            (Axiom::Associative, &associative),
            (Axiom::GradedCommutative, &graded_commutative),
        ] {
            if let Some(basis) = witness {
                failures.push(AxiomFailure {
                    axiom,
                    basis: basis.clone(),
                });
            }
        }
        Ok(DgAxiomReport {
            square_zero: square_zero.is_none(),
            leibniz: leibniz.is_none(),
            associative: associative.is_none(),
            graded_commutative: graded_commutative.is_none(),
            failures,
        })
    }
}

/// The first witness in input order, regardless of scheduling.
fn first_failure<T, F>(items: &[T], parallel: bool, check: F) -> Option<Vec<SubsetIndex>>
where
    T: Sync,
    F: Fn(&T) -> Option<Vec<SubsetIndex>> + Sync,
{
    if parallel {
        items.par_iter().find_map_first(&check)
    } else {
        items.iter().find_map(&check)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialMatrix {
    pub rows: Vec<SubsetIndex>,
    pub cols: Vec<SubsetIndex>,
    pub entries: Vec<Vec<Option<(i8, Monomial)>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    SquareZero,
    Leibniz,
    Associative,
    GradedCommutative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub basis: Vec<SubsetIndex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DgAxiomReport {
    pub square_zero: bool,
    pub leibniz: bool,
    pub associative: bool,
    pub graded_commutative: bool,
    pub failures: Vec<AxiomFailure>,
}

impl DgAxiomReport {
    pub fn all_hold(&self) -> bool {
        self.square_zero && self.leibniz && self.associative && self.graded_commutative
    }
}

/// A finite sum `Σ c · m · b_J` with integer `c`, monomial `m`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain(BTreeMap<(SubsetIndex, Monomial), i64>);

impl Chain {
    pub fn basis(j: SubsetIndex, d: usize) -> Self {
        let mut c = Chain::default();
        c.add_term(j, Monomial::unit(d), 1);
        c
    }

    pub fn add_term(&mut self, j: SubsetIndex, m: Monomial, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.0.entry((j, m)) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Chain, scale: i64) {
        for ((j, m), &c) in &other.0 {
            self.add_term(*j, m.clone(), c * scale);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SubsetIndex, &Monomial, i64)> {
        self.0.iter().map(|((j, m), &c)| (j, m, c))
    }

    pub fn differential(&self, tc: &TaylorComplex) -> Chain {
        let mut out = Chain::default();
        for ((j, m), &c) in &self.0 {
            for t in tc.differential(*j) {
                out.add_term(t.target, m.mul(&t.coefficient), c * t.sign as i64);
            }
        }
        out
    }

    pub fn mul(&self, other: &Chain, tc: &TaylorComplex) -> Chain {
        let mut out = Chain::default();
        for ((j, m), &c) in &self.0 {
            for ((k, m2), &c2) in &other.0 {
                let p = tc.multiply(*j, *k);
                if p.sign != 0 {
                    out.add_term(p.target, m.mul(m2).mul(&p.coefficient), c * c2 * p.sign as i64);
                }
            }
        }
        out
    }
}
