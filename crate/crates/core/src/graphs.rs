//! GCD graphs and Taylor graphs of a presentation.
//!
//! The GCD graph joins `i` and `j` when `f_i` and `f_j` share an irreducible. The Taylor
//! graph lives on all subsets `J ⊆ [n]`: a *differential edge* `J → J∖{i}` marks a unit
//! coefficient `f_J / f_{J∖{i}} = 1` in the Taylor differential, and a *homotopy edge*
//! `J → J∪{i}` marks a unit coefficient in the product `b_i · b_J`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::monomial::{Presentation, SubsetIndex};

/// Largest `n` for which Taylor graphs (2ⁿ vertices) are materialized.
pub const MAX_TAYLOR_GENERATORS: usize = 20;

/// Largest graph handled by the brute-force isomorphism search.
pub const MAX_ISOMORPHISM_VERTICES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcdGraph {
    n: usize,
    adjacency: Vec<u64>,
}

impl GcdGraph {
    pub fn build(pres: &Presentation) -> Self {
        let n = pres.n();
        let mut adjacency = vec![0u64; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if !pres.pair_gcd_is_unit(i, j) {
                    adjacency[i] |= 1 << j;
                    adjacency[j] |= 1 << i;
                }
            }
        }
        GcdGraph { n, adjacency }
    }

    /// A graph from 0-based undirected edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        assert!(n <= 64);
        let mut adjacency = vec![0u64; n];
        for &(a, b) in edges {
            assert!(a != b && a < n && b < n, "bad edge ({a}, {b})");
            adjacency[a] |= 1 << b;
            adjacency[b] |= 1 << a;
        }
        GcdGraph { n, adjacency }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i] & (1 << j) != 0
    }

    pub fn neighbors(&self, i: usize) -> SubsetIndex {
        SubsetIndex(self.adjacency[i])
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].count_ones() as usize
    }

    /// Edges `(i, j)` with `i < j`, 0-based, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| ((i + 1)..self.n).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.adjacency.iter().all(|&a| a == 0)
    }

    /// Connected components, each as a vertex subset, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<SubsetIndex> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen & (1 << start) != 0 {
                continue;
            }
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.adjacency[v] & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            seen |= comp;
            out.push(SubsetIndex(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    pub fn isolated_vertices(&self) -> SubsetIndex {
        SubsetIndex::from_indices((0..self.n).filter(|&i| self.adjacency[i] == 0))
    }

    /// Lowest-indexed vertex adjacent to every other vertex, when `n ≥ 2`.
    pub fn dominating_vertex(&self) -> Option<usize> {
        if self.n < 2 {
            return None;
        }
        (0..self.n).find(|&i| self.degree(i) == self.n - 1)
    }

    /// Edges `{i, j}` such that every other vertex is adjacent to exactly one of `i`, `j`.
    pub fn degree2_isolation_pairs(&self) -> Vec<(usize, usize)> {
        self.edges()
            .into_iter()
            .filter(|&(i, j)| {
                (0..self.n)
                    .filter(|&l| l != i && l != j)
                    .all(|l| self.has_edge(l, i) != self.has_edge(l, j))
            })
            .collect()
    }

    /// Induced subgraph on `block`, relabelled `0..|block|` in increasing order.
    pub fn induced(&self, block: SubsetIndex) -> GcdGraph {
        let verts: Vec<usize> = block.iter().collect();
        let mut edges = Vec::new();
        for (a, &u) in verts.iter().enumerate() {
            for (b, &v) in verts.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    edges.push((a, b));
                }
            }
        }
        GcdGraph::from_edges(verts.len(), &edges)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gcd {\n");
        for i in 0..self.n {
            let _ = writeln!(out, "  \"{}\";", i + 1);
        }
        for (i, j) in self.edges() {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", i + 1, j + 1);
        }
        out.push_str("}\n");
        out
    }
}

fn check_iso_bound(g: &GcdGraph) -> Result<()> {
    if g.n > MAX_ISOMORPHISM_VERTICES {
        return Err(Error::SizeBound {
            what: "graph size for isomorphism search",
            size: g.n,
            bound: MAX_ISOMORPHISM_VERTICES,
        });
    }
    Ok(())
}

fn extend_isomorphisms(
    g: &GcdGraph,
    h: &GcdGraph,
    map: &mut Vec<usize>,
    used: u64,
    first_only: bool,
    out: &mut Vec<Vec<usize>>,
) {
    let v = map.len();
    if v == g.n {
        out.push(map.clone());
        return;
    }
    for w in 0..h.n {
        if used & (1 << w) != 0 || g.degree(v) != h.degree(w) {
            continue;
        }
        if (0..v).any(|u| g.has_edge(u, v) != h.has_edge(map[u], w)) {
            continue;
        }
        map.push(w);
        extend_isomorphisms(g, h, map, used | (1 << w), first_only, out);
        map.pop();
        if first_only && !out.is_empty() {
            return;
        }
    }
}

fn is_isomorphism(g: &GcdGraph, h: &GcdGraph, map: &[usize]) -> bool {
    if g.n != h.n || map.len() != g.n {
        return false;
    }
    let mut seen = 0u64;
    for &w in map {
        if w >= h.n || seen & (1 << w) != 0 {
            return false;
        }
        seen |= 1 << w;
    }
    (0..g.n).all(|u| (0..g.n).all(|v| u == v || g.has_edge(u, v) == h.has_edge(map[u], map[v])))
}

/// A bijection `σ` (vertex `v` of `g` ↦ `σ[v]` of `h`) carrying edges onto edges, if any.
pub fn graph_isomorphism(g: &GcdGraph, h: &GcdGraph) -> Result<Option<Vec<usize>>> {
    Ok(search_isomorphisms(g, h, true)?.into_iter().next())
}

/// Every isomorphism `g → h`, in lexicographic order of the image vectors.
pub fn all_isomorphisms(g: &GcdGraph, h: &GcdGraph) -> Result<Vec<Vec<usize>>> {
    search_isomorphisms(g, h, false)
}

fn search_isomorphisms(g: &GcdGraph, h: &GcdGraph, first_only: bool) -> Result<Vec<Vec<usize>>> {
    check_iso_bound(g)?;
    check_iso_bound(h)?;
    if g.n != h.n || g.edge_count() != h.edge_count() {
        return Ok(Vec::new());
    }
    let mut gd: Vec<usize> = (0..g.n).map(|v| g.degree(v)).collect();
    let mut hd: Vec<usize> = (0..h.n).map(|v| h.degree(v)).collect();
    gd.sort_unstable();
    hd.sort_unstable();
    if gd != hd {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    extend_isomorphisms(g, h, &mut Vec::with_capacity(g.n), 0, first_only, &mut out);
    for map in &out {
        assert!(is_isomorphism(g, h, map), "isomorphism search produced an invalid map");
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorGraph {
    n: usize,
    /// Bit `i` of `differential[J]`: edge `J → J∖{i}`.
    differential: Vec<u64>,
    /// Bit `i` of `homotopy[J]`: edge `J → J∪{i}`.
    homotopy: Vec<u64>,
}

impl TaylorGraph {
    pub fn build(pres: &Presentation) -> Result<Self> {
        Self::build_with_bound(pres, MAX_TAYLOR_GENERATORS)
    }

    pub fn build_with_bound(pres: &Presentation, bound: usize) -> Result<Self> {
        let n = pres.n();
        if n > bound.min(MAX_TAYLOR_GENERATORS) {
            return Err(Error::SizeBound {
                what: "number of generators for the Taylor graph",
                size: n,
                bound: bound.min(MAX_TAYLOR_GENERATORS),
            });
        }
        let gcd = GcdGraph::build(pres);
        // f_i | f_K  ⇔  for each x_v in supp(f_i), K meets the generators whose
        // exponent of x_v is at least that of f_i.
        let covers: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let fi = pres.generator(i).exponents();
                fi.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| {
                        (0..n)
                            .filter(|&k| k != i && pres.generator(k).exponents()[v] >= e)
                            .fold(0u64, |m, k| m | (1 << k))
                    })
                    .collect()
            })
            .collect();
        let size = 1usize << n;
        let full = SubsetIndex::full(n).0;
        let mut differential = vec![0u64; size];
        let mut homotopy = vec![0u64; size];
        for mask in 0..size as u64 {
            let mut diff = 0u64;
            let mut rest = mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let others = mask & !(1 << i);
                if covers[i].iter().all(|&c| c & others != 0) {
                    diff |= 1 << i;
                }
            }
            differential[mask as usize] = diff;
            let touched = SubsetIndex(mask).iter().fold(mask, |m, j| m | gcd.adjacency[j]);
            homotopy[mask as usize] = full & !touched;
        }
        Ok(TaylorGraph {
            n,
            differential,
            homotopy,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_differential_edge(&self, j: SubsetIndex, i: usize) -> bool {
        self.differential[j.0 as usize] & (1 << i) != 0
    }

    pub fn has_homotopy_edge(&self, j: SubsetIndex, i: usize) -> bool {
        self.homotopy[j.0 as usize] & (1 << i) != 0
    }

    /// Generators `i` with a differential edge `J → J∖{i}`.
    pub fn differential_generators(&self, j: SubsetIndex) -> SubsetIndex {
        SubsetIndex(self.differential[j.0 as usize])
    }

    /// Generators `i` with a homotopy edge `J → J∪{i}`.
    pub fn homotopy_generators(&self, j: SubsetIndex) -> SubsetIndex {
        SubsetIndex(self.homotopy[j.0 as usize])
    }

    pub fn differential_targets(&self, j: SubsetIndex) -> Vec<SubsetIndex> {
        self.differential_generators(j).iter().map(|i| j.without(i)).collect()
    }

    pub fn homotopy_targets(&self, j: SubsetIndex) -> Vec<SubsetIndex> {
        self.homotopy_generators(j).iter().map(|i| j.with(i)).collect()
    }

    /// All directed edges `(source, target)` in increasing source mask order.
    pub fn edges(&self) -> Vec<(SubsetIndex, SubsetIndex)> {
        SubsetIndex::all(self.n)
            .flat_map(|j| {
                let mut targets = self.differential_targets(j);
                targets.extend(self.homotopy_targets(j));
                targets.sort();
                targets.into_iter().map(move |t| (j, t))
            })
            .collect()
    }

    pub fn differential_edge_count(&self) -> usize {
        self.differential.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn homotopy_edge_count(&self) -> usize {
        self.homotopy.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// Subsets with no incident edge in either direction.
    pub fn isolated_vertices(&self) -> Vec<SubsetIndex> {
        let size = 1usize << self.n;
        let mut touched = vec![false; size];
        for mask in 0..size {
            let j = SubsetIndex(mask as u64);
            let diff = self.differential_generators(j);
            let hom = self.homotopy_generators(j);
            if !diff.is_empty() || !hom.is_empty() {
                touched[mask] = true;
            }
            for i in diff.iter() {
                touched[j.without(i).0 as usize] = true;
            }
            for i in hom.iter() {
                touched[j.with(i).0 as usize] = true;
            }
        }
        (0..size)
            .filter(|&m| !touched[m])
            .map(|m| SubsetIndex(m as u64))
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph taylor {\n");
        for j in SubsetIndex::all(self.n) {
            let _ = writeln!(out, "  \"{}\";", j.dot_name());
        }
        for j in SubsetIndex::all(self.n) {
            for t in self.differential_targets(j) {
                let _ = writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [kind=differential];",
                    j.dot_name(),
                    t.dot_name()
                );
            }
            for t in self.homotopy_targets(j) {
                let _ = writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [kind=homotopy, style=dashed];",
                    j.dot_name(),
                    t.dot_name()
                );
            }
        }
        out.push_str("}\n");
        out
    }
}
