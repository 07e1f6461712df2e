//! Exact rank computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{inv_mod, mul_mod, sub_mod};

/// A dense matrix over ℚ or 𝔽_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldMatrix {
    Rational(Vec<Vec<BigRational>>),
    Prime { p: u64, rows: Vec<Vec<u64>> },
}

impl FieldMatrix {
    pub fn nrows(&self) -> usize {
        match self {
            FieldMatrix::Rational(rows) => rows.len(),
            FieldMatrix::Prime { rows, .. } => rows.len(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            FieldMatrix::Rational(rows) => rank_rational(rows),
            FieldMatrix::Prime { p, rows } => rank_mod_p(rows.clone(), *p),
        }
    }
}

/// Rank over ℚ. Scaling a row by a nonzero integer leaves the rank unchanged, so each
/// row is cleared of denominators and the integer matrix goes through Bareiss.
pub fn rank_rational(rows: &[Vec<BigRational>]) -> usize {
    let int_rows = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    rank_integer(int_rows)
}

/// Fraction-free Gaussian elimination: every division is exact, and entries stay
/// bounded by minors of the input.
pub fn rank_integer(mut m: Vec<Vec<BigInt>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in (c + 1)..ncols {
                let v = &prow[c] * &row[j] - &factor * &prow[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

pub fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][c].is_multiple_of(p)) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = inv_mod(m[rank][c], p).expect("nonzero pivot");
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            if row[c] % p == 0 {
                continue;
            }
            let factor = mul_mod(row[c], inv, p);
            row[c] = 0;
            for j in (c + 1)..ncols {
                if prow[j] != 0 {
                    row[j] = sub_mod(row[j], mul_mod(factor, prow[j], p), p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant over 𝔽_p of a square matrix.
pub fn det_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(pivot) = (c..n).find(|&r| !m[r][c].is_multiple_of(p)) else {
            return 0;
        };
        if pivot != c {
            m.swap(c, pivot);
            det = (p - det) % p;
        }
        det = mul_mod(det, m[c][c], p);
        let inv = inv_mod(m[c][c], p).expect("nonzero pivot");
        let (top, rest) = m.split_at_mut(c + 1);
        let prow = &top[c];
        for row in rest.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let factor = mul_mod(row[c], inv, p);
            for j in c..n {
                row[j] = sub_mod(row[j], mul_mod(factor, prow[j], p), p);
            }
        }
    }
    det
}
