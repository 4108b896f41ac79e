//! Acceptance run: one PASS/FAIL line per criterion, then a single assertion.
//!
//! Every count is compared exactly. The only tolerances are wall-clock limits.

mod common;

use dgx_core::arknit::{brute_force_census, knit, KnitStatus, QuiverVertex, TranslationQuiver};
use dgx_core::auscorr::{self, end_algebra};
use dgx_core::extmod::{gldim_category, is_auslander, Dim};
use dgx_core::io;
use dgx_core::pvd::hom_dim;
use dgx_core::{corpus, Alg, DgAlgebra, DgModule, DgQuiver, Rational};
use serde_json::Value;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

type F = Rational;

const INDEC_LIMIT: Duration = Duration::from_secs(5);
const AUSLANDER_LIMIT: Duration = Duration::from_secs(60);
const KNIT_GAMMA_LIMIT: Duration = Duration::from_secs(600);
/// Nodes of the hand-counted AR quiver of the extended module category of the
/// Auslander algebra of A2 in window 2.
const GAMMA_AR_NODES: usize = 37;
const MIN_CORPUS: usize = 10;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn dgx(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dgx")).args(args).output().expect("dgx runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn load(name: &str, d: i32) -> Alg<F> {
    let doc = io::parse_document(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
    io::build_algebra(&doc.algebra, d, false).unwrap()
}

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// The line `S2 → P1 → S1 → S2[1] → P1[1] → S1[1]` with τ two steps back.
fn a2_window2_diagram() -> TranslationQuiver {
    let h = |top: [usize; 2], low: [usize; 2]| vec![top.to_vec(), low.to_vec()];
    let fps = [
        h([0, 1], [0, 0]),
        h([1, 1], [0, 0]),
        h([1, 0], [0, 0]),
        h([0, 0], [0, 1]),
        h([0, 0], [1, 1]),
        h([0, 0], [1, 0]),
    ];
    TranslationQuiver {
        d: 2,
        vertices: fps
            .into_iter()
            .enumerate()
            .map(|(i, h)| QuiverVertex { h, projective: i < 2, injective: i > 3 })
            .collect(),
        arrows: (0..5).map(|i| (i, i + 1)).collect(),
        meshes: (0..4).map(|i| (i, i + 2)).collect(),
        status: KnitStatus::Complete,
    }
}

fn census_a2() -> Verdict {
    let t = Instant::now();
    let (code, out) = dgx(&["indec", fixture("a2.json").to_str().unwrap(), "-d", "2"]);
    let took = t.elapsed();
    ensure(code == 0, format!("indec exited with {code}"))?;
    let report: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let labels: BTreeSet<String> = report["results"]["indecomposables"]
        .as_array()
        .ok_or("no indecomposables listed")?
        .iter()
        .map(|v| v["label"].as_str().unwrap_or("?").to_string())
        .collect();
    let want: BTreeSet<String> = ["S2", "P1", "S1", "S2[1]", "P1[1]", "S1[1]"].iter().map(|s| s.to_string()).collect();
    ensure(report["results"]["count"] == 6, format!("count {}", report["results"]["count"]))?;
    ensure(labels == want, format!("labels {labels:?}"))?;
    let (code, out) = dgx(&["export", fixture("a2.json").to_str().unwrap(), "-d", "2", "--format", "json"]);
    ensure(code == 0, "export failed")?;
    let tq = TranslationQuiver::from_json(&out).map_err(|e| e.to_string())?;
    ensure(tq.isomorphism(&a2_window2_diagram()).is_some(), "AR quiver differs from the diagram")?;
    ensure(took < INDEC_LIMIT, format!("took {took:?}"))?;
    Ok(format!("6 indecomposables {labels:?}, diagram isomorphic, {took:.2?}"))
}

fn a2_gamma_dimensions() -> Verdict {
    let alg: Alg<F> = Arc::new(DgAlgebra::build(&corpus::a2()).unwrap());
    let objs = knit(&alg, 2, 50).unwrap().objects();
    // Oracle: Hom and negative Ext between all pairs of indecomposables.
    let sum = |i: i32| -> usize { objs.iter().flat_map(|x| objs.iter().map(move |y| hom_dim(x, y, i))).sum() };
    let (h0, h1) = (sum(0), sum(-1));
    ensure((h0, h1) == (11, 5), format!("oracle gives ({h0}, {h1})"))?;
    let end = end_algebra(&objs, 2).map_err(|e| e.to_string())?;
    let dims = DgModule::regular(&end.gamma).cohomology_dims();
    let got = (dims.get(&0).copied().unwrap_or(0), dims.get(&-1).copied().unwrap_or(0));
    ensure(got == (h0, h1), format!("end algebra gives {got:?}"))?;
    ensure(dims.iter().all(|(&i, &n)| n == 0 || i == 0 || i == -1), format!("stray cohomology {dims:?}"))?;
    Ok(format!("dim H^0 = {h0}, dim H^-1 = {h1} by oracle and by the end algebra"))
}

/// Arrows as (source, target, degree) and differentials as vertex paths.
fn shape(q: &DgQuiver<F>) -> (BTreeMap<(usize, usize, i32), usize>, BTreeSet<((usize, usize), Vec<(usize, usize)>, String)>) {
    let mut arrows = BTreeMap::new();
    for a in &q.arrows {
        *arrows.entry((a.source, a.target, a.degree)).or_insert(0) += 1;
    }
    let diffs = q
        .differential
        .iter()
        .flat_map(|(h, terms)| {
            let h = &q.arrows[*h];
            terms.iter().map(move |(c, p)| {
                let steps = p.iter().map(|&a| (q.arrows[a].source, q.arrows[a].target)).collect();
                ((h.source, h.target), steps, c.to_string())
            })
        })
        .collect();
    (arrows, diffs)
}

fn presentation() -> Verdict {
    let alg: Alg<F> = Arc::new(DgAlgebra::build(&corpus::a2()).unwrap());
    let c = auscorr::lambda_to_gamma(&alg, 2, 50).map_err(|e| e.to_string())?;
    let p = auscorr::dg_quiver_presentation(&c.ar).map_err(|e| e.to_string())?;
    let count = |deg: i32| p.quiver.arrows.iter().filter(|a| a.degree == deg).count();
    let got = (p.quiver.vertices.len(), count(0), count(-1));
    ensure(got == (6, 5, 4), format!("(vertices, degree 0, degree -1) = {got:?}"))?;
    let doc = io::parse_document(&std::fs::read_to_string(fixture("gamma_example.json")).unwrap()).unwrap();
    let example = io::build_quiver::<F>(&doc.algebra).unwrap();
    ensure(shape(&p.quiver) == shape(&example), "differs from the example quiver")?;
    // Each d(h) is the mesh composite through the middle term.
    for (h, terms) in &p.quiver.differential {
        let a = &p.quiver.arrows[*h];
        let ok = terms.len() == 1 && {
            let (f, g) = (&p.quiver.arrows[terms[0].1[0]], &p.quiver.arrows[terms[0].1[1]]);
            f.source == a.source && f.target == g.source && g.target == a.target
        };
        ensure(ok, format!("d({}) is not a mesh composite", a.name))?;
    }
    let rep = auscorr::compare_presentation(&c, &p).map_err(|e| e.to_string())?;
    ensure(rep.fingerprint_equal, format!("compare_presentation: {:?}", rep.divergence))?;
    Ok("6 vertices, 5 + 4 arrows, mesh differentials, fingerprint-equal".into())
}

fn emitted_gamma_auslander() -> Verdict {
    let dir = std::env::temp_dir().join(format!("dgx-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let emitted = dir.join("gamma.json");
    let (code, _) = dgx(&["gamma", fixture("a2.json").to_str().unwrap(), "-d", "2", "--emit", emitted.to_str().unwrap()]);
    ensure(code == 0, format!("gamma exited with {code}"))?;
    let t = Instant::now();
    let doc = io::parse_document(&std::fs::read_to_string(&emitted).unwrap()).map_err(|e| e.to_string())?;
    let g: Alg<F> = io::build_algebra(&doc.algebra, 2, false).map_err(|e| e.to_string())?;
    let cert = is_auslander(&g, 2);
    let took = t.elapsed();
    std::fs::remove_dir_all(&dir).ok();
    ensure(cert.gldim == Dim::Value(2), format!("gldim {}", cert.gldim))?;
    ensure(cert.domdim_at_least_d_plus_1, "dominant dimension below 3")?;
    ensure(took < AUSLANDER_LIMIT, format!("took {took:?}"))?;
    // The category side: gldim of the window-2 category is 2 + 2 - 1.
    let ar = knit(&g, 2, 100).map_err(|e| e.to_string())?;
    let cat = gldim_category(&ar.objects(), 8);
    ensure(cat == Dim::Value(3), format!("category gldim {cat}"))?;
    Ok(format!("gldim 2, domdim >= 3, category gldim 3, {took:.2?}"))
}

fn gamma_knitting() -> Verdict {
    let t = Instant::now();
    let g = load("gamma_example.json", 2);
    let ar = knit(&g, 2, 200).map_err(|e| e.to_string())?;
    ensure(ar.status == KnitStatus::Complete, "knitting aborted")?;
    let tq = ar.translation_quiver();
    let golden = TranslationQuiver::from_json(&std::fs::read_to_string(fixture("gamma_a2_d2_ar.json")).unwrap()).unwrap();
    ensure(tq.vertices.len() == GAMMA_AR_NODES, format!("{} vertices", tq.vertices.len()))?;
    ensure(tq.isomorphism(&golden).is_some(), "differs from the golden fixture")?;
    let census = brute_force_census(&g, 2, 2).map_err(|e| e.to_string())?;
    ensure(census.complete, "census hit its candidate limit")?;
    let (extra, missing) = census.compare(&ar);
    ensure(extra.is_empty(), format!("census has {} objects knitting missed", extra.len()))?;
    let objs = ar.objects();
    let reachable = missing.iter().filter(|&&v| {
        let g = objs[v].generator_profile();
        (0..=2).all(|s| g.iter().filter(|x| x.shift == s).count() <= 2)
    });
    ensure(reachable.count() == 0, "census missed a knitted object within its bound")?;
    let took = t.elapsed();
    ensure(took < KNIT_GAMMA_LIMIT, format!("took {took:?}"))?;
    Ok(format!(
        "{} vertices, {} meshes, golden match, census {} of {} candidates, {took:.1?}",
        tq.vertices.len(),
        tq.meshes.len(),
        census.objects.len(),
        census.candidates
    ))
}

fn classical_a2() -> Verdict {
    let alg: Alg<F> = Arc::new(DgAlgebra::build(&corpus::a2()).unwrap());
    let c = auscorr::lambda_to_gamma(&alg, 1, 50).map_err(|e| e.to_string())?;
    ensure(c.ar.vertices.len() == 3, format!("{} indecomposables", c.ar.vertices.len()))?;
    let a = &c.certificate.auslander;
    ensure(matches!(a.gldim, Dim::Value(n) if n <= 2), format!("gldim {}", a.gldim))?;
    ensure(a.domdim_at_least_d_plus_1, "dominant dimension below 2")?;
    let r = auscorr::roundtrip_check(&corpus::a2::<F>(), 1, 50).map_err(|e| e.to_string())?;
    ensure(r.vertex_bijection.is_some() && r.graded_homs_match, "graded Hom fingerprint")?;
    ensure(r.h0_isomorphic, "H^0 fingerprint")?;
    ensure(r.ar_isomorphism.is_some(), "AR fingerprint")?;
    ensure(r.passed, format!("{:?}", r.divergence))?;
    Ok(format!("3 indecomposables, gldim {}, domdim >= 2, three fingerprints agree", a.gldim))
}

fn properties() -> Verdict {
    let t = Instant::now();
    let n = corpus::property_corpus::<F>().len();
    ensure(n >= MIN_CORPUS, format!("corpus has {n} quivers"))?;
    let (cases, r) = common::property_suite();
    ensure(
        r.violations.is_empty(),
        format!("{} violations, first: {}", r.violations.len(), r.violations.first().cloned().unwrap_or_default()),
    )?;
    Ok(format!("{n} quivers, {cases} cases, {} checks, {} skipped, {:.1?}", r.checks, r.skipped.len(), t.elapsed()))
}

fn roundtrips() -> Verdict {
    let cases: [(&str, DgQuiver<F>, i32); 5] = [
        ("k", corpus::point(), 1),
        ("k", corpus::point(), 2),
        ("kA2", corpus::a2(), 1),
        ("kA2", corpus::a2(), 2),
        ("kA3", corpus::linear_a(3), 1),
    ];
    let mut done = Vec::new();
    for (name, q, d) in cases {
        let r = auscorr::roundtrip_check(&q, d, 100).map_err(|e| format!("{name} d={d}: {e}"))?;
        ensure(r.passed, format!("{name} d={d}: {:?}", r.divergence))?;
        done.push(format!("{name}/{d}"));
    }
    Ok(format!("passed on {}", done.join(", ")))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("A2 census in window 2", census_a2),
        ("end algebra dimensions", a2_gamma_dimensions),
        ("DG quiver presentation", presentation),
        ("Auslander verdict on emitted quiver", emitted_gamma_auslander),
        ("AR quiver of the Auslander algebra", gamma_knitting),
        ("classical d = 1 recovery", classical_a2),
        ("property suites", properties),
        ("round trips", roundtrips),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
