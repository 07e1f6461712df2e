//! Embedded deformations, complete intersections, height, and polarization.
//!
//! A generator whose support is disjoint from every other one splits off as a regular
//! element, so the isolated vertices of the GCD graph give an embedded deformation of
//! the largest codimension `c` defined by monomials. The same `c` is the rank of the
//! degree-2 central part of the homotopy Lie algebra; it is reported, not computed from
//! brackets.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::FieldSpec;
use crate::graphs::GcdGraph;
use crate::monomial::{Monomial, Presentation, SubsetIndex};
use crate::support::{identify_variety, Dimension, Membership, SamplingConfig, SupportOracle, VarietyDescription};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddedDeformation {
    pub c: usize,
    /// Generators forming the regular sequence.
    pub deformation_indices: SubsetIndex,
    /// Generators of the remaining ideal `J`.
    pub j_indices: SubsetIndex,
}

pub fn max_embedded_deformation(pres: &Presentation) -> EmbeddedDeformation {
    let isolated = GcdGraph::build(pres).isolated_vertices();
    EmbeddedDeformation {
        c: isolated.len(),
        deformation_indices: isolated,
        j_indices: SubsetIndex::full(pres.n()).difference(isolated),
    }
}

pub fn is_complete_intersection(pres: &Presentation) -> bool {
    GcdGraph::build(pres).is_edgeless()
}

/// Smallest set of irreducibles meeting the support of every generator.
pub fn minimum_cover(pres: &Presentation) -> Vec<usize> {
    let supports: Vec<u64> = pres
        .generators()
        .iter()
        .map(|g| g.support().fold(0u64, |m, v| m | (1 << v)))
        .collect();
    let mut best: Option<Vec<usize>> = None;
    let mut chosen = Vec::new();
    cover_search(&supports, 0, &mut chosen, &mut best);
    best.expect("the full variable set is a cover")
}

fn cover_search(supports: &[u64], taken: u64, chosen: &mut Vec<usize>, best: &mut Option<Vec<usize>>) {
    if best.as_ref().is_some_and(|b| chosen.len() >= b.len()) {
        return;
    }
    // branch on the uncovered generator with the fewest irreducibles
    let open = supports.iter().filter(|&&s| s & taken == 0).min_by_key(|s| s.count_ones());
    let Some(&support) = open else {
        *best = Some(chosen.clone());
        return;
    };
    let mut rest = support;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        chosen.push(v);
        cover_search(supports, taken | (1 << v), chosen, best);
        chosen.pop();
    }
}

pub fn height(pres: &Presentation) -> usize {
    minimum_cover(pres).len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CidCheck {
    pub cid: usize,
    pub dim_v: Dimension,
    pub bound_holds: bool,
}

/// `dim V ≥ n − height(I)`; unresolved dimensions are checked at their lower end.
pub fn check_cid_bound(pres: &Presentation, desc: &VarietyDescription) -> CidCheck {
    let cid = pres.n() - height(pres);
    let dim_v = desc.dimension();
    CidCheck {
        cid,
        dim_v,
        bound_holds: dim_v.lower() >= cid,
    }
}

/// Squarefree presentation: `x^e` becomes `x_1 ⋯ x_e`. Irreducibles that never occur
/// with exponent above 1 keep their name.
pub fn polarize(pres: &Presentation) -> Presentation {
    let d = pres.d();
    let names = pres.irreducible_names();
    let max_exp: Vec<u32> = (0..d)
        .map(|v| pres.generators().iter().map(|g| g.exponents()[v]).max().unwrap_or(0))
        .collect();
    let mut taken: Vec<String> = (0..d).filter(|&v| max_exp[v] <= 1).map(|v| names[v].clone()).collect();
    let mut new_names = Vec::new();
    // offsets[v] = index of the first polarized variable of irreducible v
    let mut offsets = Vec::with_capacity(d);
    for v in 0..d {
        offsets.push(new_names.len());
        if max_exp[v] <= 1 {
            new_names.push(names[v].clone());
            continue;
        }
        let mut sep = String::from("_");
        while (1..=max_exp[v]).any(|k| taken.contains(&format!("{}{sep}{k}", names[v])) || names.contains(&format!("{}{sep}{k}", names[v]))) {
            sep.push('_');
        }
        for k in 1..=max_exp[v] {
            let name = format!("{}{sep}{k}", names[v]);
            taken.push(name.clone());
            new_names.push(name);
        }
    }
    let gens = pres
        .generators()
        .iter()
        .map(|g| {
            let mut exps = vec![0u32; new_names.len()];
            for v in 0..d {
                for k in 0..g.exponents()[v] as usize {
                    exps[offsets[v] + k] = 1;
                }
            }
            Monomial::new(exps)
        })
        .collect();
    Presentation::new(new_names, gens).expect("polarization preserves minimality and degree")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarizationCheck {
    pub holds: bool,
    pub descriptions_agree: bool,
    pub points_checked: usize,
    pub point_disagreements: usize,
    pub polarized: String,
}

pub const POLARIZATION_POINTS: usize = 100;

pub fn check_polarization_invariance(pres: &Presentation, cfg: &SamplingConfig) -> Result<PolarizationCheck> {
    let polar = polarize(pres);
    let a = identify_variety(pres, cfg)?;
    let b = identify_variety(&polar, cfg)?;
    let descriptions_agree = a.same_variety(&b);
    let n = pres.n();
    let oa = SupportOracle::new(pres)?;
    let ob = SupportOracle::new(&polar)?;
    let mut disagreements = 0;
    for j in 0..POLARIZATION_POINTS {
        // alternate generic points with points on random coordinate subspaces
        let point = if j % 2 == 0 {
            cfg.generic_point(n, 7, j as u64)
        } else {
            let support = SubsetIndex((j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> (64 - n)).intersection(SubsetIndex::full(n));
            cfg.point_on(n, support, 107, 0, j as u64)
        };
        let va: Membership = oa.membership(&point)?.verdict;
        let vb: Membership = ob.membership(&point)?.verdict;
        if va != vb {
            disagreements += 1;
        }
    }
    Ok(PolarizationCheck {
        holds: descriptions_agree && disagreements == 0,
        descriptions_agree,
        points_checked: POLARIZATION_POINTS,
        point_disagreements: disagreements,
        polarized: polar.render(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationReport {
    pub c: usize,
    pub deformation_indices: SubsetIndex,
    pub j_indices: SubsetIndex,
    pub is_complete_intersection: bool,
    pub height: usize,
    pub cid: usize,
    pub dim_v: Dimension,
    pub bound_holds: bool,
    /// Rank of the degree-2 central (equivalently radical) part of the homotopy Lie
    /// algebra, which equals `c` for monomial rings.
    pub degree2_ranks: usize,
    pub field: FieldSpec,
}

pub fn deformation_report(pres: &Presentation, desc: &VarietyDescription, field: FieldSpec) -> DeformationReport {
    let def = max_embedded_deformation(pres);
    let cid = check_cid_bound(pres, desc);
    let ci = is_complete_intersection(pres);
    debug_assert_eq!(ci, def.c == pres.n());
    debug_assert_eq!(ci, cid.cid == 0);
    DeformationReport {
        c: def.c,
        deformation_indices: def.deformation_indices,
        j_indices: def.j_indices,
        is_complete_intersection: ci,
        height: height(pres),
        cid: cid.cid,
        dim_v: cid.dim_v,
        bound_holds: cid.bound_holds,
        degree2_ranks: def.c,
        field,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;

    fn pres(s: &str) -> Presentation {
        parse_presentation(s).unwrap()
    }

    fn l(labels: &[usize]) -> SubsetIndex {
        SubsetIndex::from_labels(labels)
    }

    /// Exhaustive minimum over all variable subsets.
    fn brute_height(p: &Presentation) -> usize {
        (0u64..(1 << p.d()))
            .filter(|&m| p.generators().iter().all(|g| g.support().any(|v| m & (1 << v) != 0)))
            .map(|m| m.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn deformation_examples() {
        let d = max_embedded_deformation(&pres("x^2, y^2, y*z"));
        assert_eq!((d.c, d.deformation_indices, d.j_indices), (1, l(&[1]), l(&[2, 3])));
        assert_eq!(max_embedded_deformation(&pres("x^2, x*y, y*z, z*w, w^2")).c, 0);
        assert_eq!(max_embedded_deformation(&pres("x^2, y^3, z^4")).c, 3);
    }

    #[test]
    fn ci_examples() {
        assert!(is_complete_intersection(&pres("x^2, y^2")));
        assert!(!is_complete_intersection(&pres("x^2, x*y")));
        assert!(is_complete_intersection(&pres("x^5")));
    }

    #[test]
    fn height_examples() {
        for (s, h) in [("x^2, x*y, y*z, z*w, w^2", 3), ("x^2, y^2, z^2", 3), ("x*y, y*z, x*z", 2)] {
            let p = pres(s);
            assert_eq!(height(&p), h, "{s}");
            assert_eq!(brute_height(&p), h);
        }
        let p = pres("a*b*c, c*d, d*e*f, f*a, b*e, x1*x2*x3, x3*a");
        assert_eq!(height(&p), brute_height(&p));
    }

    #[test]
    fn polarize_examples() {
        assert_eq!(polarize(&pres("x^2, x*y")).render(), "x_1*x_2, x_1*y");
        assert_eq!(polarize(&pres("a*b, b*c")).render(), "a*b, b*c");
        let av = polarize(&pres("x^2, x*y, y*z, z*w, w^2"));
        assert_eq!(av.d(), 6);
        assert_eq!(av.render(), "x_1*x_2, x_1*y, y*z, z*w_1, w_1*w_2");
        // a clash with an existing name lengthens the separator
        let clash = polarize(&pres("x^2, x_1*y"));
        assert_eq!(clash.render(), "x__1*x__2, x_1*y");
        assert_eq!(GcdGraph::build(&av), GcdGraph::build(&pres("x^2, x*y, y*z, z*w, w^2")));
    }

    #[test]
    fn cid_examples() {
        let av = pres("x^2, x*y, y*z, z*w, w^2");
        let desc = VarietyDescription::union(5, vec![l(&[1]), l(&[5])]);
        let c = check_cid_bound(&av, &desc);
        assert_eq!((c.cid, c.dim_v, c.bound_holds), (2, Dimension::exact(4), true));
        let tri = pres("x*y, y*z, x*z");
        let c = check_cid_bound(&tri, &VarietyDescription::Full { n: 3 });
        assert_eq!((c.cid, c.bound_holds), (1, true));
    }

    #[test]
    fn polarization_invariance_examples() {
        let cfg = SamplingConfig::default();
        for s in ["x^2, x*y", "x^2, x*y, y*z, z*w, w^2", "x^2, y^3"] {
            let check = check_polarization_invariance(&pres(s), &cfg).unwrap();
            assert!(check.holds, "{s}: {check:?}");
        }
    }
}
