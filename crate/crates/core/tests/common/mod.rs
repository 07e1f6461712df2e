#![allow(dead_code)]

use std::collections::BTreeMap;

use monosupport::{Monomial, Presentation, SubsetIndex};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn label(s: &str) -> SubsetIndex {
    if s == "∅" {
        return SubsetIndex::EMPTY;
    }
    let digits: Vec<usize> = s.chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
    SubsetIndex::from_labels(&digits)
}

/// Nonzero entries of the two 16×16 matrices for (x², xy, yz, zw, w²), transcribed by
/// row; every other entry is zero.
pub fn transcribed() -> [BTreeMap<(SubsetIndex, SubsetIndex), &'static str>; 2] {
    let d_even: &[(&str, &[(&str, &str)])] = &[
        ("1", &[("∅", "+a1")]),
        ("2", &[("∅", "+a2")]),
        ("3", &[("∅", "+a3")]),
        ("4", &[("∅", "+a4")]),
        ("5", &[("∅", "+a5")]),
        ("124", &[("12", "+a4"), ("1234", "+1")]),
        ("125", &[("12", "+a5")]),
        ("134", &[("34", "+a1"), ("1234", "-1")]),
        ("135", &[("13", "+a5"), ("15", "-a3"), ("35", "+a1"), ("1345", "+1"), ("1235", "-1")]),
        ("145", &[("45", "+a1")]),
        ("235", &[("23", "+a5"), ("2345", "+1")]),
        ("245", &[("45", "+a2"), ("2345", "-1")]),
    ];
    let d_odd: &[(&str, &[(&str, &str)])] = &[
        ("13", &[("1", "-a3"), ("3", "+a1"), ("123", "-1")]),
        ("14", &[("1", "-a4"), ("4", "+a1")]),
        ("15", &[("1", "-a5"), ("5", "+a1")]),
        ("24", &[("2", "-a4"), ("4", "+a2"), ("234", "-1")]),
        ("25", &[("2", "-a5"), ("5", "+a2")]),
        ("35", &[("3", "-a5"), ("5", "+a3"), ("345", "-1")]),
        ("1345", &[("345", "+a1"), ("12345", "-1")]),
        ("1245", &[("12345", "+1")]),
        ("1235", &[("123", "-a5"), ("12345", "-1")]),
    ];
    let collect = |rows: &[(&str, &[(&str, &'static str)])]| {
        rows.iter()
            .flat_map(|(r, cols)| cols.iter().map(move |(c, v)| ((label(r), label(c)), *v)))
            .collect()
    };
    [collect(d_even), collect(d_odd)]
}

/// Random minimal presentation with at most `max_n` generators in at most `max_d`
/// irreducibles, exponents at most `max_e`. With `squarefree = Some(false)` at least one
/// exponent exceeds 1.
pub fn random_presentation(rng: &mut ChaCha8Rng, max_n: usize, max_d: usize, max_e: u32, squarefree: Option<bool>) -> Presentation {
    loop {
        let n = rng.gen_range(1..=max_n);
        let d = rng.gen_range(1..=max_d);
        let gens: Vec<Monomial> = (0..n)
            .map(|_| {
                let mut e: Vec<u32> = (0..d).map(|_| if rng.gen_bool(0.4) { rng.gen_range(1..=max_e) } else { 0 }).collect();
                while e.iter().sum::<u32>() < 2 {
                    let v = rng.gen_range(0..d);
                    e[v] += 1;
                }
                Monomial::new(e)
            })
            .collect();
        let high = gens.iter().any(|g| g.exponents().iter().any(|&e| e > 1));
        if squarefree == Some(false) && !high {
            continue;
        }
        // drop irreducibles that never occur
        let used: Vec<usize> = (0..d).filter(|&v| gens.iter().any(|g| g.exponents()[v] > 0)).collect();
        let names = used.iter().map(|v| format!("x{}", v + 1)).collect();
        let gens = gens.into_iter().map(|g| Monomial::new(used.iter().map(|&v| g.exponents()[v]).collect())).collect();
        if let Ok(p) = Presentation::new(names, gens) {
            return p;
        }
    }
}
