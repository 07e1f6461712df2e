//! Support varieties `V_R(R) ⊆ Aⁿ`.
//!
//! A point `a ≠ 0` lies in `V_R(R)` exactly when the 2-periodic complex of
//! [`crate::periodic`] fails to be exact at `a`; the origin always lies in it. On top of
//! that pointwise test this module decomposes along GCD components, applies the
//! combinatorial shortcuts for full support, profiles containment of coordinate
//! subspaces by sampling, and assembles a [`VarietyDescription`].
//!
//! Sampled verdicts are one-sided: a non-member point on `L_T` is a certificate that
//! `L_T ⊄ V`, while `t` member points only make containment likely.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier;
use crate::error::{Error, Result};
use crate::field::{add_mod, inv_mod, mul_mod, sub_mod, FieldPoint, FieldSpec};
use crate::graphs::{GcdGraph, TaylorGraph, MAX_TAYLOR_GENERATORS};
use crate::linalg::{det_mod_p, rank_mod_p};
use crate::monomial::{Presentation, SubsetIndex};
use crate::periodic::{Parity, PeriodicPair, MAX_PERIODIC_GENERATORS};

/// Modulus for the line test when the working field is ℚ.
pub const LINE_TEST_PRIME: u64 = (1 << 61) - 1;

/// Largest component on which the line test runs.
pub const LINE_TEST_MAX_GENERATORS: usize = 7;

const DOMAIN_PROFILE: u64 = 1;
const DOMAIN_PROBE: u64 = 2;
const DOMAIN_LINE: u64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    InVariety,
    NotInVariety,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MembershipOutcome {
    pub verdict: Membership,
    /// `(rank d_even, rank d_odd)`; absent at the origin, which is never evaluated.
    pub ranks: Option<(usize, usize)>,
}

/// Pointwise membership for one presentation.
#[derive(Clone, Debug)]
pub struct SupportOracle {
    pres: Presentation,
    pair: PeriodicPair,
}

impl SupportOracle {
    pub fn new(pres: &Presentation) -> Result<Self> {
        let tg = TaylorGraph::build_with_bound(pres, MAX_PERIODIC_GENERATORS)?;
        Ok(SupportOracle {
            pres: pres.clone(),
            pair: PeriodicPair::build(&tg)?,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn pair(&self) -> &PeriodicPair {
        &self.pair
    }

    pub fn n(&self) -> usize {
        self.pres.n()
    }

    pub fn membership(&self, a: &FieldPoint) -> Result<MembershipOutcome> {
        a.check_len(self.n())?;
        if a.is_zero() {
            return Ok(MembershipOutcome {
                verdict: Membership::InVariety,
                ranks: None,
            });
        }
        let (e, o) = self.pair.ranks_at(a)?;
        let verdict = if e + o == self.pair.half_rank() {
            Membership::NotInVariety
        } else {
            Membership::InVariety
        };
        Ok(MembershipOutcome {
            verdict,
            ranks: Some((e, o)),
        })
    }
}

pub fn membership(pres: &Presentation, a: &FieldPoint) -> Result<Membership> {
    Ok(SupportOracle::new(pres)?.membership(a)?.verdict)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ShortcutRule {
    /// `vertex` shares an irreducible with every other generator (1-based).
    DominatingVertex { vertex: usize },
    /// A subset with no incident Taylor-graph edge.
    TaylorIsolatedVertex { subset: SubsetIndex },
    /// An edge `{i, j}` such that every other vertex is adjacent to exactly one end (1-based).
    Degree2IsolationPair { pair: (usize, usize) },
}

impl ShortcutRule {
    pub fn name(&self) -> &'static str {
        match self {
            ShortcutRule::DominatingVertex { .. } => "dominating-vertex",
            ShortcutRule::TaylorIsolatedVertex { .. } => "taylor-isolated-vertex",
            ShortcutRule::Degree2IsolationPair { .. } => "degree2-isolation-pair",
        }
    }
}

/// The first combinatorial rule forcing full support, tried in a fixed order.
pub fn shortcut_full(g: &GcdGraph, tg: Option<&TaylorGraph>) -> Option<ShortcutRule> {
    if g.n() < 2 {
        return None;
    }
    if let Some(v) = g.dominating_vertex() {
        return Some(ShortcutRule::DominatingVertex { vertex: v + 1 });
    }
    if let Some(tg) = tg {
        if let Some(&subset) = tg.isolated_vertices().first() {
            return Some(ShortcutRule::TaylorIsolatedVertex { subset });
        }
    }
    g.degree2_isolation_pairs()
        .first()
        .map(|&(i, j)| ShortcutRule::Degree2IsolationPair { pair: (i + 1, j + 1) })
}

/// One connected component of the GCD graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub block: SubsetIndex,
    pub pres: Presentation,
}

pub fn decompose(pres: &Presentation) -> Vec<Component> {
    GcdGraph::build(pres)
        .connected_components()
        .into_iter()
        .map(|block| Component {
            block,
            pres: pres.restrict(block),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dimension {
    Exact { value: usize },
    Range { lo: usize, hi: usize },
}

impl Dimension {
    pub fn exact(value: usize) -> Self {
        Dimension::Exact { value }
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        if lo == hi {
            Dimension::Exact { value: lo }
        } else {
            Dimension::Range { lo, hi }
        }
    }

    pub fn lower(self) -> usize {
        match self {
            Dimension::Exact { value } => value,
            Dimension::Range { lo, .. } => lo,
        }
    }

    pub fn upper(self) -> usize {
        match self {
            Dimension::Exact { value } => value,
            Dimension::Range { hi, .. } => hi,
        }
    }

    pub fn as_exact(self) -> Option<usize> {
        match self {
            Dimension::Exact { value } => Some(value),
            Dimension::Range { .. } => None,
        }
    }

    fn add(self, other: Dimension) -> Dimension {
        Dimension::range(self.lower() + other.lower(), self.upper() + other.upper())
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dimension::Exact { value } => write!(f, "{value}"),
            Dimension::Range { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A point off the candidate union that nevertheless lies in `V`.
    OffUnionMember { point: Vec<String> },
    /// On the line `base + t·direction` over `𝔽_modulus`, the rank-drop locus has
    /// `residual_degree` roots (with multiplicity) outside the candidate hyperplanes.
    LineSection {
        modulus: u64,
        base: Vec<u64>,
        direction: Vec<u64>,
        residual_degree: usize,
    },
}

/// What sampling established about a component it could not name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnresolvedProfile {
    pub n: usize,
    /// Maximal `T` with `L_T = span{e_i : i ∈ T}` likely contained in `V`.
    pub maximal_contained: Vec<SubsetIndex>,
    /// Vanishing sets `[n] ∖ T` of the pieces above.
    pub contained_union: Vec<SubsetIndex>,
    pub witnesses: Vec<Witness>,
    pub dimension: Dimension,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub indices: SubsetIndex,
    pub variety: VarietyDescription,
}

/// A closed conical subset of `Aⁿ`. Pieces of a union are written by vanishing sets:
/// `S` stands for `{a : a_i = 0 for all i ∈ S}`. Block varieties use local coordinates,
/// numbered along the block in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VarietyDescription {
    Origin { n: usize },
    Full { n: usize },
    UnionOfCoordinateSubspaces { n: usize, vanishing_sets: Vec<SubsetIndex> },
    Product { n: usize, blocks: Vec<Block> },
    Unresolved(Box<UnresolvedProfile>),
}

impl VarietyDescription {
    pub fn n(&self) -> usize {
        match self {
            VarietyDescription::Origin { n }
            | VarietyDescription::Full { n }
            | VarietyDescription::UnionOfCoordinateSubspaces { n, .. }
            | VarietyDescription::Product { n, .. } => *n,
            VarietyDescription::Unresolved(p) => p.n,
        }
    }

    pub fn union(n: usize, vanishing_sets: Vec<SubsetIndex>) -> Self {
        VarietyDescription::UnionOfCoordinateSubspaces { n, vanishing_sets }.canonicalize()
    }

    /// Vanishing sets when the variety is a union of coordinate subspaces.
    pub fn vanishing_sets(&self) -> Option<Vec<SubsetIndex>> {
        match self {
            VarietyDescription::Origin { n } => Some(vec![SubsetIndex::full(*n)]),
            VarietyDescription::Full { .. } => Some(vec![SubsetIndex::EMPTY]),
            VarietyDescription::UnionOfCoordinateSubspaces { vanishing_sets, .. } => Some(vanishing_sets.clone()),
            VarietyDescription::Product { blocks, .. } => {
                let mut acc = vec![SubsetIndex::EMPTY];
                for b in blocks {
                    let local = b.variety.vanishing_sets()?;
                    let global: Vec<SubsetIndex> = local.iter().map(|&s| lift(s, b.indices)).collect();
                    acc = acc.iter().flat_map(|&a| global.iter().map(move |&g| a.union(g))).collect();
                }
                Some(minimal_sets(acc))
            }
            VarietyDescription::Unresolved(_) => None,
        }
    }

    pub fn is_resolved(&self) -> bool {
        match self {
            VarietyDescription::Unresolved(_) => false,
            VarietyDescription::Product { blocks, .. } => blocks.iter().all(|b| b.variety.is_resolved()),
            _ => true,
        }
    }

    /// Normal form: minimal vanishing sets in mask order, `Origin`/`Full` collapsed, and
    /// products of resolved blocks expanded into a single union.
    pub fn canonicalize(self) -> Self {
        match self {
            VarietyDescription::UnionOfCoordinateSubspaces { n, vanishing_sets } => {
                let sets = minimal_sets(vanishing_sets);
                if sets.is_empty() {
                    // the empty union would not contain the origin; nothing produces it
                    VarietyDescription::Origin { n }
                } else if sets == [SubsetIndex::EMPTY] {
                    VarietyDescription::Full { n }
                } else if sets == [SubsetIndex::full(n)] {
                    VarietyDescription::Origin { n }
                } else {
                    VarietyDescription::UnionOfCoordinateSubspaces { n, vanishing_sets: sets }
                }
            }
            VarietyDescription::Product { n, blocks } => {
                let mut blocks: Vec<Block> = blocks
                    .into_iter()
                    .map(|b| Block {
                        indices: b.indices,
                        variety: b.variety.canonicalize(),
                    })
                    .collect();
                blocks.sort_by_key(|b| b.indices.iter().next());
                if blocks.len() == 1 && blocks[0].indices == SubsetIndex::full(n) {
                    return blocks.pop().expect("one block").variety;
                }
                let desc = VarietyDescription::Product { n, blocks };
                match desc.vanishing_sets() {
                    Some(sets) => VarietyDescription::UnionOfCoordinateSubspaces { n, vanishing_sets: sets }.canonicalize(),
                    None => desc,
                }
            }
            other => other,
        }
    }

    /// Exact membership for resolved descriptions.
    pub fn contains(&self, a: &FieldPoint) -> Option<bool> {
        if a.n() != self.n() {
            return None;
        }
        match self {
            VarietyDescription::Unresolved(_) => None,
            VarietyDescription::Product { blocks, .. } => {
                let mut all = true;
                for b in blocks {
                    all &= b.variety.contains(&a.project(b.indices))?;
                }
                Some(all)
            }
            _ => {
                let zeros = a.zero_set();
                Some(self.vanishing_sets()?.iter().any(|s| s.is_subset(zeros)))
            }
        }
    }

    pub fn dimension(&self) -> Dimension {
        match self {
            VarietyDescription::Origin { .. } => Dimension::exact(0),
            VarietyDescription::Full { n } => Dimension::exact(*n),
            VarietyDescription::UnionOfCoordinateSubspaces { n, vanishing_sets } => {
                Dimension::exact(vanishing_sets.iter().map(|s| n - s.len()).max().unwrap_or(0))
            }
            VarietyDescription::Product { blocks, .. } => blocks
                .iter()
                .fold(Dimension::exact(0), |acc, b| acc.add(b.variety.dimension())),
            VarietyDescription::Unresolved(p) => p.dimension,
        }
    }

    /// Equality of the described sets as far as descriptions allow: unresolved parts are
    /// compared by their contained-subspace profile and dimension bounds.
    pub fn same_variety(&self, other: &VarietyDescription) -> bool {
        let a = self.clone().canonicalize();
        let b = other.clone().canonicalize();
        match (&a, &b) {
            (VarietyDescription::Unresolved(p), VarietyDescription::Unresolved(q)) => {
                p.n == q.n && p.maximal_contained == q.maximal_contained && p.dimension == q.dimension
            }
            (VarietyDescription::Product { blocks: x, .. }, VarietyDescription::Product { blocks: y, .. }) => {
                x.len() == y.len()
                    && x.iter().zip(y).all(|(u, v)| u.indices == v.indices && u.variety.same_variety(&v.variety))
            }
            _ => a == b,
        }
    }

    /// Human-readable form, 1-based coordinates.
    pub fn render(&self) -> String {
        match self {
            VarietyDescription::Origin { n } => format!("{{0}} in A^{n}"),
            VarietyDescription::Full { n } => format!("A^{n}"),
            VarietyDescription::UnionOfCoordinateSubspaces { n, vanishing_sets } => {
                let pieces: Vec<String> = vanishing_sets
                    .iter()
                    .map(|s| {
                        let eqs: Vec<String> = s.iter().map(|i| format!("a{}", i + 1)).collect();
                        format!("{{{} = 0}}", eqs.join(" = "))
                    })
                    .collect();
                format!("{} in A^{n}", pieces.join(" ∪ "))
            }
            VarietyDescription::Product { blocks, .. } => {
                let parts: Vec<String> =
                    blocks.iter().map(|b| format!("[{}: {}]", b.indices, b.variety.render())).collect();
                parts.join(" × ")
            }
            VarietyDescription::Unresolved(p) => {
                let hyper: Vec<String> = p
                    .contained_union
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                format!(
                    "unresolved in A^{} (contains the coordinate subspaces with vanishing sets {}; dimension {})",
                    p.n,
                    if hyper.is_empty() { "none".to_string() } else { hyper.join(", ") },
                    p.dimension
                )
            }
        }
    }
}

/// Global subset from a subset of local coordinates of `block`.
fn lift(local: SubsetIndex, block: SubsetIndex) -> SubsetIndex {
    let members: Vec<usize> = block.iter().collect();
    SubsetIndex::from_indices(local.iter().map(|i| members[i]))
}

fn minimal_sets(mut sets: Vec<SubsetIndex>) -> Vec<SubsetIndex> {
    sets.sort();
    sets.dedup();
    let keep: Vec<SubsetIndex> = sets
        .iter()
        .copied()
        .filter(|&s| !sets.iter().any(|&t| t != s && t.is_subset(s)))
        .collect();
    keep
}

/// Combines block varieties over a partition of `[n]` into one description.
pub fn assemble(n: usize, blocks: Vec<Block>) -> VarietyDescription {
    VarietyDescription::Product { n, blocks }.canonicalize()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub field: FieldSpec,
    pub seed: u64,
    /// Samples per containment verdict.
    pub trials: usize,
    /// Coordinates are drawn from `[−bound, bound] ∖ {0}`.
    pub bound: u64,
    /// Minimum number of off-union points in the equality probe.
    pub probe_points: usize,
    #[serde(skip, default = "default_parallel")]
    pub parallel: bool,
}

fn default_parallel() -> bool {
    true
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            field: FieldSpec::Rational,
            seed: 0,
            trials: 5,
            bound: 1 << 20,
            probe_points: 64,
            parallel: true,
        }
    }
}

impl SamplingConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.bound >= 1 << 62 {
            return Err(Error::InvalidConfig("coordinate bound must be below 2^62".into()));
        }
        let need = 4u128 << n.saturating_sub(1);
        if (self.bound as u128) <= need {
            return Err(Error::InvalidConfig(format!(
                "coordinate bound {} must exceed 2^(n-1)·4 = {need} for n = {n}",
                self.bound
            )));
        }
        Ok(())
    }

    /// Size of the set coordinates are drawn from.
    fn sample_set_size(&self) -> f64 {
        let range = 2.0 * self.bound as f64;
        match self.field {
            FieldSpec::Rational => range,
            FieldSpec::Prime(p) => range.min((p - 1) as f64),
        }
    }

    /// Schwartz–Zippel bound on a wrong ContainedLikely verdict for `n` generators.
    pub fn containment_error_bound(&self, n: usize) -> f64 {
        let deg = 2f64.powi(n.saturating_sub(1) as i32);
        (deg / self.sample_set_size()).min(1.0).powi(self.trials as i32)
    }

    fn rng(&self, domain: u64, verdict: u64, j: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        for (k, word) in [self.seed, domain, verdict, j].iter().enumerate() {
            key[8 * k..8 * k + 8].copy_from_slice(&word.to_le_bytes());
        }
        ChaCha8Rng::from_seed(key)
    }

    fn coordinate(&self, rng: &mut ChaCha8Rng) -> i64 {
        let b = self.bound as i64;
        loop {
            let x = rng.gen_range(-b..=b);
            let zero = match self.field {
                FieldSpec::Rational => x == 0,
                FieldSpec::Prime(p) => (x as i128).rem_euclid(p as i128) == 0,
            };
            if !zero {
                return x;
            }
        }
    }

    /// Random point with nonzero coordinates exactly on `support`.
    pub fn point_on(&self, n: usize, support: SubsetIndex, domain: u64, verdict: u64, j: u64) -> FieldPoint {
        let mut rng = self.rng(domain, verdict, j);
        let coords: Vec<i64> = (0..n)
            .map(|i| if support.contains(i) { self.coordinate(&mut rng) } else { 0 })
            .collect();
        FieldPoint::from_integers(self.field, &coords)
    }

    /// The `j`-th generic point of a test stream, independent of the sampling streams.
    pub fn generic_point(&self, n: usize, stream: u64, j: u64) -> FieldPoint {
        self.point_on(n, SubsetIndex::full(n), 100 + stream, 0, j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Purpose {
    Profile { subspace: SubsetIndex },
    Probe,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    /// Component index in decomposition order.
    pub component: usize,
    pub purpose: Purpose,
    pub point: Vec<String>,
    pub verdict: Membership,
    pub rank_even: Option<usize>,
    pub rank_odd: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleLedger {
    pub entries: Vec<LedgerEntry>,
}

impl SampleLedger {
    fn record(&mut self, component: usize, purpose: Purpose, point: &FieldPoint, out: MembershipOutcome) {
        self.entries.push(LedgerEntry {
            component,
            purpose,
            point: point.render_coords(),
            verdict: out.verdict,
            rank_even: out.ranks.map(|r| r.0),
            rank_odd: out.ranks.map(|r| r.1),
        });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    ContainedLikely,
    NotContainedCertified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub subspace: SubsetIndex,
    pub verdict: Containment,
    /// Number of points evaluated for this subspace (0 when decided without sampling).
    pub samples: usize,
    /// A non-member point of `L_T`, possibly found on a smaller subspace.
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceProfile {
    pub n: usize,
    /// One entry per `T ⊆ [n]`, in mask order.
    pub entries: Vec<ProfileEntry>,
    pub maximal_contained: Vec<SubsetIndex>,
    /// Bound on the probability that one ContainedLikely verdict is wrong.
    pub per_verdict_error: f64,
}

impl SubspaceProfile {
    pub fn verdict(&self, t: SubsetIndex) -> Containment {
        self.entries[t.0 as usize].verdict
    }

    /// Vanishing sets of the maximal contained subspaces.
    pub fn contained_union(&self) -> Vec<SubsetIndex> {
        let full = SubsetIndex::full(self.n);
        self.maximal_contained.iter().map(|&t| full.difference(t)).collect()
    }
}

/// One profile entry with the evaluated points, in sampling order.
type LayerResult = (SubsetIndex, ProfileEntry, Vec<(FieldPoint, MembershipOutcome)>);

pub fn coordinate_subspace_profile(pres: &Presentation, cfg: &SamplingConfig) -> Result<SubspaceProfile> {
    let oracle = SupportOracle::new(pres)?;
    let mut ledger = SampleLedger::default();
    profile_with(&oracle, cfg, 0, &mut ledger)
}

fn profile_with(
    oracle: &SupportOracle,
    cfg: &SamplingConfig,
    component: usize,
    ledger: &mut SampleLedger,
) -> Result<SubspaceProfile> {
    let n = oracle.n();
    cfg.validate(n)?;
    let mut entries: Vec<Option<ProfileEntry>> = vec![None; 1 << n];
    entries[0] = Some(ProfileEntry {
        subspace: SubsetIndex::EMPTY,
        verdict: Containment::ContainedLikely,
        samples: 0,
        witness: None,
    });
    for size in 1..=n {
        let layer: Vec<SubsetIndex> = SubsetIndex::all(n).filter(|t| t.len() == size).collect();
        let evaluate = |&t: &SubsetIndex| -> Result<LayerResult> {
            // a certified subset makes T certified as well
            let inherited = t.iter().find_map(|i| {
                let sub = &entries[t.without(i).0 as usize].as_ref().expect("smaller layer done");
                (sub.verdict == Containment::NotContainedCertified).then(|| sub.witness.clone())
            });
            if let Some(witness) = inherited {
                return Ok((t, ProfileEntry { subspace: t, verdict: Containment::NotContainedCertified, samples: 0, witness }, Vec::new()));
            }
            let mut samples = Vec::new();
            for j in 0..cfg.trials {
                let a = cfg.point_on(n, t, DOMAIN_PROFILE, t.0, j as u64);
                let out = oracle.membership(&a)?;
                let miss = out.verdict == Membership::NotInVariety;
                samples.push((a, out));
                if miss {
                    let witness = samples.last().map(|(a, _)| a.render_coords());
                    let count = samples.len();
                    return Ok((t, ProfileEntry { subspace: t, verdict: Containment::NotContainedCertified, samples: count, witness }, samples));
                }
            }
            let count = samples.len();
            Ok((t, ProfileEntry { subspace: t, verdict: Containment::ContainedLikely, samples: count, witness: None }, samples))
        };
        let results: Vec<_> = if cfg.parallel {
            layer.par_iter().map(evaluate).collect::<Result<Vec<_>>>()?
        } else {
            layer.iter().map(evaluate).collect::<Result<Vec<_>>>()?
        };
        for (t, entry, samples) in results {
            for (a, out) in samples {
                ledger.record(component, Purpose::Profile { subspace: t }, &a, out);
            }
            entries[t.0 as usize] = Some(entry);
        }
    }
    let entries: Vec<ProfileEntry> = entries.into_iter().map(|e| e.expect("every subset visited")).collect();
    let contained: Vec<SubsetIndex> = entries
        .iter()
        .filter(|e| e.verdict == Containment::ContainedLikely)
        .map(|e| e.subspace)
        .collect();
    let maximal_contained = contained
        .iter()
        .copied()
        .filter(|&t| !contained.iter().any(|&u| u != t && t.is_subset(u)))
        .collect();
    Ok(SubspaceProfile {
        n,
        entries,
        maximal_contained,
        per_verdict_error: cfg.containment_error_bound(n),
    })
}

/// How one component's variety was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Shortcut { rule: ShortcutRule },
    Classifier { rule: classifier::ClassifierRule },
    Sampling { profile: SubspaceProfile },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentAnalysis {
    pub block: SubsetIndex,
    pub method: Method,
    /// In local coordinates of `block`.
    pub variety: VarietyDescription,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportAnalysis {
    pub n: usize,
    pub components: Vec<ComponentAnalysis>,
    pub description: VarietyDescription,
    pub dimension: Dimension,
    pub ledger: SampleLedger,
}

pub fn identify_variety(pres: &Presentation, cfg: &SamplingConfig) -> Result<VarietyDescription> {
    Ok(analyze_support(pres, cfg)?.description)
}

/// Full pipeline: decompose, then per component try the shortcuts, the classifier for
/// up to five generators, and sampling otherwise.
pub fn analyze_support(pres: &Presentation, cfg: &SamplingConfig) -> Result<SupportAnalysis> {
    let n = pres.n();
    let mut ledger = SampleLedger::default();
    let mut components = Vec::new();
    for (idx, comp) in decompose(pres).into_iter().enumerate() {
        let (method, variety) = analyze_component(&comp.pres, cfg, idx, &mut ledger)?;
        components.push(ComponentAnalysis {
            block: comp.block,
            method,
            variety,
        });
    }
    let blocks = components
        .iter()
        .map(|c| Block {
            indices: c.block,
            variety: c.variety.clone(),
        })
        .collect();
    let description = assemble(n, blocks);
    let dimension = description.dimension();
    Ok(SupportAnalysis {
        n,
        components,
        description,
        dimension,
        ledger,
    })
}

fn analyze_component(
    pres: &Presentation,
    cfg: &SamplingConfig,
    idx: usize,
    ledger: &mut SampleLedger,
) -> Result<(Method, VarietyDescription)> {
    let m = pres.n();
    let g = GcdGraph::build(pres);
    let tg = if m <= MAX_TAYLOR_GENERATORS.min(16) {
        Some(TaylorGraph::build(pres)?)
    } else {
        None
    };
    if let Some(rule) = shortcut_full(&g, tg.as_ref()) {
        return Ok((Method::Shortcut { rule }, VarietyDescription::Full { n: m }));
    }
    if m <= classifier::MAX_CLASSIFIED_GENERATORS {
        let c = classifier::classify_component(pres)?;
        return Ok((Method::Classifier { rule: c.rule }, c.variety));
    }
    let (profile, variety) = sample_component(pres, cfg, idx, ledger)?;
    Ok((Method::Sampling { profile }, variety))
}

/// Sampling-only identification of a single presentation, bypassing decomposition,
/// shortcuts, and the classifier.
pub fn identify_by_sampling(pres: &Presentation, cfg: &SamplingConfig) -> Result<(SubspaceProfile, VarietyDescription, SampleLedger)> {
    let mut ledger = SampleLedger::default();
    let (profile, variety) = sample_component(pres, cfg, 0, &mut ledger)?;
    Ok((profile, variety, ledger))
}

fn sample_component(
    pres: &Presentation,
    cfg: &SamplingConfig,
    idx: usize,
    ledger: &mut SampleLedger,
) -> Result<(SubspaceProfile, VarietyDescription)> {
    let n = pres.n();
    let oracle = SupportOracle::new(pres)?;
    let profile = profile_with(&oracle, cfg, idx, ledger)?;
    let full = SubsetIndex::full(n);
    if profile.verdict(full) == Containment::ContainedLikely {
        return Ok((profile, VarietyDescription::Full { n }));
    }
    let union = profile.contained_union();
    let max_contained_dim = profile.maximal_contained.iter().map(|t| t.len()).max().unwrap_or(0);

    // every piece of the union has a nonempty vanishing set, so points with all
    // coordinates nonzero avoid it
    let count = cfg.probe_points.max(8 * n);
    let outcomes: Vec<(FieldPoint, MembershipOutcome)> = {
        let eval = |j: usize| -> Result<(FieldPoint, MembershipOutcome)> {
            let a = cfg.point_on(n, full, DOMAIN_PROBE, 0, j as u64);
            let out = oracle.membership(&a)?;
            Ok((a, out))
        };
        if cfg.parallel {
            (0..count).into_par_iter().map(eval).collect::<Result<_>>()?
        } else {
            (0..count).map(eval).collect::<Result<_>>()?
        }
    };
    let mut witnesses = Vec::new();
    let mut saw_non_member = false;
    for (a, out) in &outcomes {
        ledger.record(idx, Purpose::Probe, a, *out);
        match out.verdict {
            Membership::InVariety => {
                if witnesses.len() < 8 {
                    witnesses.push(Witness::OffUnionMember { point: a.render_coords() });
                }
            }
            Membership::NotInVariety => saw_non_member = true,
        }
    }
    let hi = if saw_non_member { n - 1 } else { n };
    if !witnesses.is_empty() {
        let profile_union = union.clone();
        return Ok((
            profile.clone(),
            VarietyDescription::Unresolved(Box::new(UnresolvedProfile {
                n,
                maximal_contained: profile.maximal_contained.clone(),
                contained_union: profile_union,
                witnesses,
                dimension: Dimension::range(max_contained_dim, hi),
            })),
        ));
    }
    if n <= LINE_TEST_MAX_GENERATORS {
        let hyperplanes = SubsetIndex::from_indices(union.iter().filter(|s| s.len() == 1).flat_map(|s| s.iter()));
        let section = line_section(oracle.pair(), hyperplanes, cfg)?;
        if let Witness::LineSection { residual_degree, .. } = &section {
            if *residual_degree > 0 {
                // the line meets a hypersurface component outside the union
                return Ok((
                    profile.clone(),
                    VarietyDescription::Unresolved(Box::new(UnresolvedProfile {
                        n,
                        maximal_contained: profile.maximal_contained.clone(),
                        contained_union: union,
                        witnesses: vec![section],
                        dimension: Dimension::range(n - 1, n - 1),
                    })),
                ));
            }
        }
    }
    Ok((profile, VarietyDescription::union(n, union)))
}

/// Restricts the rank-drop locus to a random line and removes the roots explained by
/// the coordinate hyperplanes in `hyperplanes`.
fn line_section(pp: &PeriodicPair, hyperplanes: SubsetIndex, cfg: &SamplingConfig) -> Result<Witness> {
    let n = pp.n();
    let p = match cfg.field {
        FieldSpec::Prime(p) => p,
        FieldSpec::Rational => LINE_TEST_PRIME,
    };
    let mut rng = cfg.rng(DOMAIN_LINE, 0, 0);
    let base: Vec<u64> = (0..n).map(|_| rng.gen_range(1..p)).collect();
    let direction: Vec<u64> = (0..n).map(|_| rng.gen_range(1..p)).collect();
    let at = |t: u64| -> Vec<u64> { (0..n).map(|i| add_mod(base[i], mul_mod(t, direction[i], p), p)).collect() };

    let mut product = vec![1u64];
    for parity in [Parity::Even, Parity::Odd] {
        let probes: Vec<u64> = (0..3).map(|_| rng.gen_range(0..p)).collect();
        let r = probes
            .iter()
            .map(|&t| rank_mod_p(pp.evaluate_mod_p(parity, &at(t), p), p))
            .max()
            .unwrap_or(0);
        if r == 0 {
            continue;
        }
        let rows = pp.basis(parity.other()).len();
        let cols = pp.basis(parity).len();
        let mut g: Option<Vec<u64>> = None;
        for _ in 0..3 {
            let left: Vec<Vec<u64>> = (0..r).map(|_| (0..rows).map(|_| rng.gen_range(0..p)).collect()).collect();
            let right: Vec<Vec<u64>> = (0..cols).map(|_| (0..r).map(|_| rng.gen_range(0..p)).collect()).collect();
            let xs: Vec<u64> = (0..=r as u64).collect();
            let ys: Vec<u64> = xs
                .iter()
                .map(|&t| {
                    let m = pp.evaluate_mod_p(parity, &at(t), p);
                    det_mod_p(sandwich(&left, &m, &right, p), p)
                })
                .collect();
            let h = interpolate(&xs, &ys, p);
            g = Some(match g {
                None => h,
                Some(prev) => poly_gcd(prev, h, p),
            });
        }
        let g = g.expect("three combinations");
        if g.is_empty() {
            // every combination vanished identically: the rank estimate was off
            return Err(Error::InvalidConfig("line test could not determine the generic rank".into()));
        }
        product = poly_mul(&product, &g, p);
    }
    for i in hyperplanes.iter() {
        // a_i(t) = base_i + t·direction_i vanishes at t = −base_i / direction_i
        let root = mul_mod(p - base[i], inv_mod(direction[i], p).expect("nonzero direction"), p);
        while let Some(q) = divide_linear(&product, root, p) {
            product = q;
        }
    }
    Ok(Witness::LineSection {
        modulus: p,
        base,
        direction,
        residual_degree: product.len().saturating_sub(1),
    })
}

/// `L · M · R` over 𝔽_p.
fn sandwich(left: &[Vec<u64>], m: &[Vec<u64>], right: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let r = right.first().map_or(0, Vec::len);
    let mr: Vec<Vec<u64>> = m
        .iter()
        .map(|row| {
            let mut out = vec![0u64; r];
            for (k, &v) in row.iter().enumerate() {
                if v != 0 {
                    for (o, &w) in out.iter_mut().zip(&right[k]) {
                        *o = add_mod(*o, mul_mod(v, w, p), p);
                    }
                }
            }
            out
        })
        .collect();
    left.iter()
        .map(|lrow| {
            let mut out = vec![0u64; r];
            for (k, &v) in lrow.iter().enumerate() {
                if v != 0 {
                    for (o, &w) in out.iter_mut().zip(&mr[k]) {
                        *o = add_mod(*o, mul_mod(v, w, p), p);
                    }
                }
            }
            out
        })
        .collect()
}

// Univariate polynomials over 𝔽_p, coefficients low to high, no trailing zeros.

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
        }
    }
    trim(out)
}

fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let mut master = vec![1u64];
    for &x in xs {
        master = poly_mul(&master, &[(p - x % p) % p, 1], p);
    }
    let mut out = vec![0u64; xs.len()];
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        if yi == 0 {
            continue;
        }
        let basis = divide_linear(&master, xi, p).expect("x_i is a root");
        let denom = xs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(1u64, |acc, (_, &xj)| mul_mod(acc, sub_mod(xi, xj, p), p));
        let scale = mul_mod(yi, inv_mod(denom, p).expect("distinct nodes"), p);
        for (o, &b) in out.iter_mut().zip(&basis) {
            *o = add_mod(*o, mul_mod(scale, b, p), p);
        }
    }
    trim(out)
}

/// `f / (t − root)` when `root` is a root of `f ≠ 0`.
fn divide_linear(f: &[u64], root: u64, p: u64) -> Option<Vec<u64>> {
    if f.len() < 2 {
        return None;
    }
    let mut q = vec![0u64; f.len() - 1];
    let mut carry = 0u64;
    for k in (0..f.len()).rev() {
        let v = add_mod(f[k], mul_mod(carry, root, p), p);
        if k == 0 {
            return (v == 0).then_some(q);
        }
        q[k - 1] = v;
        carry = v;
    }
    unreachable!()
}

fn poly_rem(mut f: Vec<u64>, g: &[u64], p: u64) -> Vec<u64> {
    let lead_inv = inv_mod(*g.last().expect("nonzero divisor"), p).expect("nonzero lead");
    while f.len() >= g.len() {
        let shift = f.len() - g.len();
        let c = mul_mod(*f.last().expect("nonempty"), lead_inv, p);
        for (k, &b) in g.iter().enumerate() {
            f[shift + k] = sub_mod(f[shift + k], mul_mod(c, b, p), p);
        }
        f = trim(f);
    }
    f
}

fn poly_gcd(mut f: Vec<u64>, mut g: Vec<u64>, p: u64) -> Vec<u64> {
    f = trim(f);
    g = trim(g);
    while !g.is_empty() {
        let r = poly_rem(f, &g, p);
        f = g;
        g = r;
    }
    if let Some(&lead) = f.last() {
        let inv = inv_mod(lead, p).expect("nonzero lead");
        f = f.into_iter().map(|c| mul_mod(c, inv, p)).collect();
    }
    f
}

/// Block-wise check that `a ∈ V` iff each projection lies in its component's variety.
pub fn membership_by_blocks(pres: &Presentation, a: &FieldPoint) -> Result<Membership> {
    a.check_len(pres.n())?;
    for comp in decompose(pres) {
        if membership(&comp.pres, &a.project(comp.block))? == Membership::NotInVariety {
            return Ok(Membership::NotInVariety);
        }
    }
    Ok(Membership::InVariety)
}
