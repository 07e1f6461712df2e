//! Exact support varieties for connected GCD components with at most five generators.
//!
//! Up to four generators a connected component has full support. With five, a
//! dominating vertex again forces full support; the remaining connected graphs are the
//! ten catalog graphs below, and only graphs 1 and 2 can produce a proper subvariety:
//! the union of the hyperplanes `a_{σ1} = 0` and `a_{σ5} = 0`, exactly when
//! `f_{σ3} | lcm(f_{σ2}, f_{σ4})` for an isomorphism `σ` from the catalog graph.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{all_isomorphisms, GcdGraph};
use crate::monomial::{Monomial, Presentation, SubsetIndex};
use crate::support::VarietyDescription;

pub const MAX_CLASSIFIED_GENERATORS: usize = 5;

/// Connected simple graphs on five vertices with no vertex of degree 4 (1-based edges).
const CATALOG_EDGES: [&[(usize, usize)]; 10] = [
    &[(1, 2), (2, 3), (3, 4), (4, 5)],
    &[(1, 2), (2, 3), (2, 4), (3, 4), (4, 5)],
    &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)],
    &[(4, 5), (3, 5), (2, 3), (2, 4), (1, 2), (3, 4)],
    &[(1, 3), (2, 3), (3, 4), (4, 5)],
    &[(1, 2), (2, 3), (3, 4), (1, 4), (4, 5)],
    &[(1, 2), (1, 3), (2, 3), (3, 4), (4, 5)],
    &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 5)],
    &[(1, 2), (2, 3), (3, 4), (4, 5), (2, 5), (1, 4)],
    &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 4), (3, 5)],
];

#[derive(Clone, Debug)]
pub struct GraphCatalog5 {
    graphs: Vec<GcdGraph>,
}

impl Default for GraphCatalog5 {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphCatalog5 {
    pub fn new() -> Self {
        let graphs = CATALOG_EDGES
            .iter()
            .map(|edges| {
                let zero_based: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
                GcdGraph::from_edges(5, &zero_based)
            })
            .collect();
        GraphCatalog5 { graphs }
    }

    /// Catalog graph by label `1..=10`.
    pub fn graph(&self, label: usize) -> &GcdGraph {
        &self.graphs[label - 1]
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> {
        1..=self.graphs.len()
    }

    /// The matching label and every isomorphism `catalog graph → g`.
    pub fn identify(&self, g: &GcdGraph) -> Result<Option<(usize, Vec<Vec<usize>>)>> {
        for label in self.labels() {
            let isos = all_isomorphisms(self.graph(label), g)?;
            if !isos.is_empty() {
                return Ok(Some((label, isos)));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ClassifierRule {
    Hypersurface,
    SmallConnected { generators: usize },
    DominatingVertex { vertex: usize },
    CatalogFull { graph: usize },
    /// Graph 1 or 2 under `sigma` (catalog vertex `k` ↦ generator `sigma[k-1]`, 1-based).
    Exceptional { graph: usize, sigma: Vec<usize>, divides: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub variety: VarietyDescription,
    pub rule: ClassifierRule,
}

pub fn classify_component(pres: &Presentation) -> Result<Classification> {
    let m = pres.n();
    if m > MAX_CLASSIFIED_GENERATORS {
        return Err(Error::SizeBound {
            what: "component size for the classifier",
            size: m,
            bound: MAX_CLASSIFIED_GENERATORS,
        });
    }
    let g = GcdGraph::build(pres);
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let full = |rule| Classification {
        variety: VarietyDescription::Full { n: m },
        rule,
    };
    if m == 1 {
        return Ok(Classification {
            variety: VarietyDescription::Origin { n: 1 },
            rule: ClassifierRule::Hypersurface,
        });
    }
    if m <= 4 {
        return Ok(full(ClassifierRule::SmallConnected { generators: m }));
    }
    if let Some(v) = g.dominating_vertex() {
        return Ok(full(ClassifierRule::DominatingVertex { vertex: v + 1 }));
    }
    let (label, isos) = GraphCatalog5::new().identify(&g)?.ok_or(Error::CatalogMiss)?;
    if label > 2 {
        return Ok(full(ClassifierRule::CatalogFull { graph: label }));
    }
    let verdicts: Vec<(Vec<usize>, bool, VarietyDescription)> = isos
        .into_iter()
        .map(|sigma| {
            let f = |k: usize| pres.generator(sigma[k - 1]);
            let divides = f(3).divides(&f(2).lcm(f(4)));
            let variety = if divides {
                VarietyDescription::union(
                    5,
                    vec![SubsetIndex::singleton(sigma[0]), SubsetIndex::singleton(sigma[4])],
                )
            } else {
                VarietyDescription::Full { n: 5 }
            };
            (sigma, divides, variety)
        })
        .collect();
    assert!(
        verdicts.windows(2).all(|w| w[0].2 == w[1].2),
        "classification depends on the chosen isomorphism"
    );
    let (sigma, divides, variety) = verdicts.into_iter().next().expect("at least one isomorphism");
    Ok(Classification {
        variety,
        rule: ClassifierRule::Exceptional {
            graph: label,
            sigma: sigma.iter().map(|&s| s + 1).collect(),
            divides,
        },
    })
}

/// A presentation whose GCD graph is `g`: one fresh variable per edge, each generator
/// the product of the variables on its edges. Vertices of degree one get a private
/// variable and isolated vertices the square of one, so every generator has degree
/// at least 2 and the list is minimal. Vertices in `extra` get one more private
/// variable.
pub fn edge_variable_instance(g: &GcdGraph, extra: SubsetIndex) -> Presentation {
    let n = g.n();
    let edges = g.edges();
    let mut names: Vec<String> = edges.iter().map(|&(i, j)| format!("y{}_{}", i + 1, j + 1)).collect();
    let private: Vec<Option<usize>> = (0..n)
        .map(|i| {
            (g.degree(i) <= 1).then(|| {
                names.push(format!("u{}", i + 1));
                names.len() - 1
            })
        })
        .collect();
    let bonus: Vec<Option<usize>> = (0..n)
        .map(|i| {
            extra.contains(i).then(|| {
                names.push(format!("z{}", i + 1));
                names.len() - 1
            })
        })
        .collect();
    let d = names.len();
    let gens = (0..n)
        .map(|i| {
            let mut exps = vec![0u32; d];
            for (e, &(a, b)) in edges.iter().enumerate() {
                if a == i || b == i {
                    exps[e] = 1;
                }
            }
            if let Some(v) = private[i] {
                exps[v] = if g.degree(i) == 0 { 2 } else { 1 };
            }
            if let Some(v) = bonus[i] {
                exps[v] += 1;
            }
            Monomial::new(exps)
        })
        .collect();
    Presentation::new(names, gens).expect("edge-variable instances are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::graph_isomorphism;
    use crate::parse::parse_presentation;

    fn l(labels: &[usize]) -> SubsetIndex {
        SubsetIndex::from_labels(labels)
    }

    #[test]
    fn catalog_is_complete_and_irredundant() {
        let cat = GraphCatalog5::new();
        for a in cat.labels() {
            let g = cat.graph(a);
            assert!(g.is_connected());
            assert!((0..5).all(|v| g.degree(v) < 4), "graph {a}");
            for b in cat.labels().filter(|&b| b > a) {
                assert!(graph_isomorphism(g, cat.graph(b)).unwrap().is_none(), "{a} ≅ {b}");
            }
        }
        // every connected graph on five vertices has a degree-4 vertex or a unique label
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|i| ((i + 1)..5).map(move |j| (i, j))).collect();
        let mut connected = 0;
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &e)| e).collect();
            let g = GcdGraph::from_edges(5, &edges);
            if !g.is_connected() {
                continue;
            }
            connected += 1;
            let hits = cat.labels().filter(|&k| graph_isomorphism(cat.graph(k), &g).unwrap().is_some()).count();
            if g.dominating_vertex().is_some() {
                assert_eq!(hits, 0);
            } else {
                assert_eq!(hits, 1, "{edges:?}");
            }
        }
        assert_eq!(connected, 728);
    }

    #[test]
    fn squared_ends_is_exceptional() {
        let p = parse_presentation("x^2, x*y, y*z, z*w, w^2").unwrap();
        let c = classify_component(&p).unwrap();
        assert_eq!(c.variety, VarietyDescription::union(5, vec![l(&[1]), l(&[5])]));
        assert!(matches!(c.rule, ClassifierRule::Exceptional { graph: 1, divides: true, .. }));
    }

    #[test]
    fn private_variable_breaks_divisibility() {
        let path = GcdGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let plain = edge_variable_instance(&path, SubsetIndex::EMPTY);
        assert_eq!(GcdGraph::build(&plain), path);
        assert_eq!(
            classify_component(&plain).unwrap().variety,
            VarietyDescription::union(5, vec![l(&[1]), l(&[5])])
        );
        let twisted = edge_variable_instance(&path, l(&[3]));
        assert_eq!(classify_component(&twisted).unwrap().variety, VarietyDescription::Full { n: 5 });
    }

    #[test]
    fn cycle_is_full() {
        let c5 = GcdGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let c = classify_component(&edge_variable_instance(&c5, SubsetIndex::EMPTY)).unwrap();
        assert_eq!(c.variety, VarietyDescription::Full { n: 5 });
        assert_eq!(c.rule, ClassifierRule::CatalogFull { graph: 3 });
    }

    #[test]
    fn relabelled_graph_two() {
        // graph 2 with vertices permuted: 1↦3, 2↦5, 3↦1, 4↦2, 5↦4
        let perm = [2, 4, 0, 1, 3];
        let edges: Vec<(usize, usize)> = CATALOG_EDGES[1].iter().map(|&(a, b)| (perm[a - 1], perm[b - 1])).collect();
        let g = GcdGraph::from_edges(5, &edges);
        let c = classify_component(&edge_variable_instance(&g, SubsetIndex::EMPTY)).unwrap();
        assert_eq!(c.variety, VarietyDescription::union(5, vec![l(&[3]), l(&[4])]));
    }

    #[test]
    fn small_components() {
        let p = parse_presentation("x^3").unwrap();
        assert_eq!(classify_component(&p).unwrap().variety, VarietyDescription::Origin { n: 1 });
        let p = parse_presentation("x^2, x*y, y^2").unwrap();
        assert_eq!(classify_component(&p).unwrap().variety, VarietyDescription::Full { n: 3 });
        assert!(matches!(classify_component(&parse_presentation("x^2, y^2").unwrap()), Err(Error::Disconnected)));
    }

    #[test]
    fn edge_variable_shapes() {
        let g = GcdGraph::from_edges(4, &[(0, 1)]);
        let p = edge_variable_instance(&g, SubsetIndex::EMPTY);
        assert_eq!(p.render(), "y1_2*u1, y1_2*u2, u3^2, u4^2");
        assert_eq!(GcdGraph::build(&p), g);
    }
}
