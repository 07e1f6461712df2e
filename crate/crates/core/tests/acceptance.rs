//! End-to-end acceptance suite. Every criterion runs and prints one PASS/FAIL line; the
//! process exits nonzero if any criterion failed.

mod common;

use std::time::Instant;

use monosupport::classifier::{classify_component, edge_variable_instance, ClassifierRule, GraphCatalog5};
use monosupport::deformation::{check_cid_bound, check_polarization_invariance, height, max_embedded_deformation};
use monosupport::graphs::{GcdGraph, TaylorGraph};
use monosupport::periodic::{Parity, PeriodicPair};
use monosupport::report::FIXTURES;
use monosupport::support::{analyze_support, Dimension, Method, SupportOracle};
use monosupport::taylor::TaylorComplex;
use monosupport::{
    identify_variety, parse_presentation, FieldPoint, FieldSpec, Membership, Presentation, SamplingConfig, SubsetIndex,
    VarietyDescription,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn pres(s: &str) -> Presentation {
    parse_presentation(s).unwrap()
}

fn l(labels: &[usize]) -> SubsetIndex {
    SubsetIndex::from_labels(labels)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn seeded_presentations() -> Vec<Presentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD6A1);
    (0..100).map(|_| common::random_presentation(&mut rng, 6, 8, 4, None)).collect()
}

/// Random point with integer coordinates in `[-50, 50] ∖ {0}` on the support `t`.
fn point_on(rng: &mut ChaCha8Rng, n: usize, t: SubsetIndex) -> FieldPoint {
    let coords: Vec<i64> = (0..n)
        .map(|i| {
            if !t.contains(i) {
                return 0;
            }
            let v = rng.gen_range(1..=50);
            if rng.gen_bool(0.5) {
                v
            } else {
                -v
            }
        })
        .collect();
    FieldPoint::from_integers(FieldSpec::Rational, &coords)
}

fn is_member(oracle: &SupportOracle, a: &FieldPoint) -> Result<bool, String> {
    Ok(oracle.membership(a).map_err(err)?.verdict == Membership::InVariety)
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for p in seeded_presentations() {
        let report = TaylorComplex::build(&p).map_err(err)?.verify_dg_axioms().map_err(err)?;
        ensure(report.all_hold(), || format!("{}: {:?}", p.render(), report.failures.first()))?;
        checked += 1;
    }
    Ok(format!("{checked} presentations"))
}

fn criterion_2() -> Outcome {
    let mut all = seeded_presentations();
    all.extend(FIXTURES.iter().map(|(_, s)| pres(s)));
    for p in &all {
        let pair = PeriodicPair::build(&TaylorGraph::build(p).map_err(err)?).map_err(err)?;
        ensure(pair.compose_is_zero(), || format!("{} fails", p.render()))?;
    }
    Ok(format!("{} presentations", all.len()))
}

fn criterion_3() -> Outcome {
    let p = pres("x^2, x*y, y*z, z*w, w^2");
    let pp = PeriodicPair::build(&TaylorGraph::build(&p).map_err(err)?).map_err(err)?;
    let expected = common::transcribed();
    let mut compared = 0;
    for (parity, table) in [(Parity::Even, &expected[0]), (Parity::Odd, &expected[1])] {
        ensure(pp.basis(parity).len() == 16, || "basis size".into())?;
        for &col in pp.basis(parity) {
            for &row in pp.basis(parity.other()) {
                let want = table.get(&(row, col)).copied().unwrap_or("0");
                let got = pp.entry(parity, row, col).render();
                ensure(got == want, || format!("{parity:?} ({}, {}): {got} vs {want}", row.compact_label(), col.compact_label()))?;
                compared += 1;
            }
        }
    }
    let golden = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/squared_ends_periodic.txt"))
        .map_err(err)?;
    ensure(pp.dump() == golden, || "dump differs from golden file".into())?;
    Ok(format!("{compared} entries, golden file identical"))
}

fn criterion_4() -> Outcome {
    let p = pres("x^2, x*y, y*z, z*w, w^2");
    let v = identify_variety(&p, &SamplingConfig::default()).map_err(err)?;
    let want = VarietyDescription::union(5, vec![l(&[1]), l(&[5])]);
    ensure(v == want, || format!("got {}", v.render()))?;
    let oracle = SupportOracle::new(&p).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for j in 0..200 {
        // a quarter each on a1 = 0 and a5 = 0, the rest on random supports
        let t = match j % 4 {
            0 => SubsetIndex::full(5).without(0),
            1 => SubsetIndex::full(5).without(4),
            _ => SubsetIndex(rng.gen_range(1..32)),
        };
        let a = point_on(&mut rng, 5, t);
        let predicate = a.coord_is_zero(0) || a.coord_is_zero(4);
        ensure(is_member(&oracle, &a)? == predicate, || format!("point {a}"))?;
        ensure(v.contains(&a) == Some(predicate), || format!("description at {a}"))?;
    }
    Ok("variety {a1=0} ∪ {a5=0}, 200 points agree".into())
}

fn criterion_5() -> Outcome {
    let p = pres("x*y, y*z, x*z");
    let analysis = analyze_support(&p, &SamplingConfig::default()).map_err(err)?;
    ensure(analysis.description == VarietyDescription::Full { n: 3 }, || analysis.description.render())?;
    let via = match &analysis.components[0].method {
        Method::Shortcut { rule } => rule.name(),
        _ => "other",
    };
    ensure(via == "dominating-vertex", || format!("decided by {via}"))?;
    let oracle = SupportOracle::new(&p).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let t = SubsetIndex(rng.gen_range(0..8));
        let a = point_on(&mut rng, 3, t);
        ensure(is_member(&oracle, &a)?, || format!("{a} not in V"))?;
    }
    Ok("full, dominating-vertex, 100 points in V".into())
}

fn criterion_6() -> Outcome {
    let p = pres("a*b, b*c, c*d, d*e");
    let iso = TaylorGraph::build(&p).map_err(err)?.isolated_vertices();
    ensure(iso == vec![l(&[2, 3])], || format!("isolated {iso:?}"))?;
    let v = identify_variety(&p, &SamplingConfig::default()).map_err(err)?;
    ensure(v == VarietyDescription::Full { n: 4 }, || v.render())?;
    Ok("isolated [{2,3}], full".into())
}

fn criterion_7() -> Outcome {
    let p = pres("x^2, y^3, z^4");
    let v = identify_variety(&p, &SamplingConfig::default()).map_err(err)?;
    ensure(v == VarietyDescription::Origin { n: 3 }, || v.render())?;
    let c = max_embedded_deformation(&p).c;
    let cid = check_cid_bound(&p, &v).cid;
    ensure((c, cid) == (3, 0), || format!("c = {c}, cid = {cid}"))?;
    Ok("origin, c = 3, cid = 0".into())
}

fn criterion_8() -> Outcome {
    let p = pres("a*b, b*c, c*d, d*e, e*f, f*a");
    let oracle = SupportOracle::new(&p).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let nonzero = |rng: &mut ChaCha8Rng| {
        let v: i64 = rng.gen_range(1..=40);
        if rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    };
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    for _ in 0..100 {
        // solve a1 a3 a5 + a2 a4 a6 = 0 for a1
        let rest: Vec<i64> = (0..5).map(|_| nonzero(&mut rng)).collect();
        let (a2, a3, a4, a5, a6) = (q(rest[0]), q(rest[1]), q(rest[2]), q(rest[3]), q(rest[4]));
        let a1 = -(&a2 * &a4 * &a6) / (&a3 * &a5);
        let a = FieldPoint::new(FieldSpec::Rational, vec![a1, a2, a3, a4, a5, a6]).map_err(err)?;
        ensure(is_member(&oracle, &a)?, || format!("on-locus point {a} not in V"))?;
    }
    let mut off = 0;
    while off < 100 {
        let c: Vec<i64> = (0..6).map(|_| nonzero(&mut rng)).collect();
        if c[0] * c[2] * c[4] + c[1] * c[3] * c[5] == 0 {
            continue;
        }
        let a = FieldPoint::from_integers(FieldSpec::Rational, &c);
        ensure(!is_member(&oracle, &a)?, || format!("off-locus point {a} in V"))?;
        off += 1;
    }
    let v = identify_variety(&p, &SamplingConfig::default()).map_err(err)?;
    let VarietyDescription::Unresolved(profile) = &v else {
        return Err(format!("resolved as {}", v.render()));
    };
    let hyper: Vec<_> = profile.maximal_contained.iter().filter(|t| t.len() == 5).collect();
    ensure(hyper.is_empty(), || format!("contained hyperplanes {hyper:?}"))?;
    Ok(format!("200 points agree, unresolved of dimension {}", profile.dimension))
}

fn criterion_9() -> Outcome {
    let catalog = GraphCatalog5::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut instances = 0;
    for label in catalog.labels() {
        let g = catalog.graph(label);
        let base = edge_variable_instance(g, SubsetIndex::EMPTY);
        let mut variants = vec![(base.clone(), None)];
        if label <= 2 {
            let c = classify_component(&base).map_err(err)?;
            let ClassifierRule::Exceptional { sigma, divides: true, .. } = c.rule else {
                return Err(format!("graph {label}: unexpected rule {:?}", c.rule));
            };
            variants[0].1 = Some(true);
            let bumped = edge_variable_instance(g, SubsetIndex::singleton(sigma[2] - 1));
            variants.push((bumped, Some(false)));
        }
        for (p, branch) in variants {
            let c = classify_component(&p).map_err(err)?;
            if let Some(want) = branch {
                let got = matches!(c.rule, ClassifierRule::Exceptional { divides, .. } if divides == want);
                ensure(got, || format!("graph {label}: rule {:?}, wanted divides = {want}", c.rule))?;
            }
            let oracle = SupportOracle::new(&p).map_err(err)?;
            for _ in 0..200 {
                let t = SubsetIndex(rng.gen_range(1..32));
                let a = point_on(&mut rng, 5, t);
                let predicted = c.variety.contains(&a).ok_or("classifier gave no description")?;
                ensure(is_member(&oracle, &a)? == predicted, || format!("graph {label} at {a}: {}", c.variety.render()))?;
            }
            instances += 1;
        }
    }
    Ok(format!("{instances} instances, 200 points each"))
}

fn criterion_10() -> Outcome {
    let cfg = SamplingConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut graphs = 0;
    for n in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &e)| e).collect();
            let g = GcdGraph::from_edges(n, &edges);
            let p = edge_variable_instance(&g, SubsetIndex::EMPTY);
            let isolated = g.isolated_vertices();
            let want = VarietyDescription::union(n, vec![isolated]).canonicalize();
            let v = identify_variety(&p, &cfg).map_err(err)?;
            ensure(v.same_variety(&want), || format!("{}: {} vs {}", p.render(), v.render(), want.render()))?;
            let oracle = SupportOracle::new(&p).map_err(err)?;
            for _ in 0..20 {
                let t = SubsetIndex(rng.gen_range(0..(1 << n)));
                let a = point_on(&mut rng, n, t);
                let predicate = isolated.iter().all(|i| a.coord_is_zero(i));
                ensure(is_member(&oracle, &a)? == predicate, || format!("{} at {a}", p.render()))?;
            }
            graphs += 1;
        }
    }
    Ok(format!("{graphs} labeled graphs"))
}

fn criterion_11() -> Outcome {
    let cfg = SamplingConfig::default();
    let av = pres("x^2, x*y, y*z, z*w, w^2");
    let v = identify_variety(&av, &cfg).map_err(err)?;
    let cid = check_cid_bound(&av, &v);
    let h = height(&av);
    ensure(
        h == 3 && cid.cid == 2 && cid.dim_v == Dimension::exact(4) && cid.bound_holds,
        || format!("height {h}, {cid:?}"),
    )?;
    let split = pres("x^2, y^2, y*z");
    let d = max_embedded_deformation(&split);
    ensure(d.c == 1 && d.j_indices == l(&[2, 3]), || format!("{d:?}"))?;
    let v = identify_variety(&split, &cfg).map_err(err)?;
    ensure(v == VarietyDescription::union(3, vec![l(&[1])]), || v.render())?;
    Ok("height 3, cid 2, dim 4; c = 1, J = (y^2, yz), {a1=0}".into())
}

fn criterion_12() -> Outcome {
    let cfg = SamplingConfig::default();
    ensure(cfg.trials == 5 && cfg.bound == 1 << 20, || "default sampling parameters changed".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let p = common::random_presentation(&mut rng, 4, 4, 3, Some(false));
        let check = check_polarization_invariance(&p, &cfg).map_err(err)?;
        ensure(check.holds, || format!("{}: {check:?}", p.render()))?;
    }
    Ok("20 presentations, 0 mismatches".into())
}

fn criterion_13() -> Outcome {
    let mut fixtures: Vec<Presentation> = FIXTURES.iter().map(|(_, s)| pres(s)).collect();
    fixtures.push(pres("x^2, x*y, z^3"));
    let mut vectors = 0;
    for p in &fixtures {
        let n = p.n();
        let isolated = GcdGraph::build(p).isolated_vertices();
        let oracle = SupportOracle::new(p).map_err(err)?;
        for i in 0..n {
            let e = FieldPoint::basis_vector(FieldSpec::Rational, n, i);
            ensure(is_member(&oracle, &e)? != isolated.contains(i), || format!("{}: e_{}", p.render(), i + 1))?;
            vectors += 1;
        }
    }
    Ok(format!("{} fixtures, {vectors} basis vectors", fixtures.len()))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 13] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
        (13, criterion_13),
    ];
    let mut failed = Vec::new();
    for (k, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(msg) => println!("criterion {k}: PASS ({msg}; {secs:.2}s)"),
            Err(msg) => {
                println!("criterion {k}: FAIL ({msg}; {secs:.2}s)");
                failed.push(k);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

