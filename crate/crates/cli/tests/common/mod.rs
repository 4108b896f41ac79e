//! Brute-force property checks over a corpus of small DG quivers.

use dgx_core::arknit::{brute_force_census_limited, knit, KnitStatus};
use dgx_core::extmod::{self, Dim};
use dgx_core::pvd::{self, HomSpace, Mor, Obj, PvdObject};
use dgx_core::semifree::HomComplex;
use dgx_core::{corpus, Alg, DgAlgebra, Field, Rational};
use std::sync::Arc;

type F = Rational;

pub const MAX_OBJECTS: usize = 60;
pub const SAMPLE: usize = 12;
pub const ORACLE_BOUND: usize = 2;
pub const ORACLE_LIMIT: usize = 30_000;

#[derive(Default)]
pub struct Report {
    pub checks: usize,
    pub violations: Vec<String>,
    /// Checks that could not run, with the reason.
    pub skipped: Vec<String>,
}

impl Report {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

fn spread(objs: &[Obj<F>], k: usize) -> Vec<Obj<F>> {
    if objs.len() <= k {
        return objs.to_vec();
    }
    (0..k).map(|i| objs[i * objs.len() / k].clone()).collect()
}

fn test_maps(sample: &[Obj<F>]) -> Vec<Mor<F>> {
    let mut out = Vec::new();
    for x in sample {
        out.push(Mor::identity(x));
        for y in sample {
            let h = HomSpace::new(x, y);
            out.extend(h.basis.iter().cloned());
            if h.dim() > 1 {
                let mut s = Mor::zero(x, y);
                for b in &h.basis {
                    s = s.lin_comb(&F::one(), b);
                }
                out.push(s);
            }
        }
    }
    out
}

/// Run every property on one algebra and window.
pub fn check_algebra(name: &str, alg: &Alg<F>, d: i32, r: &mut Report) {
    let tag = |s: &str| format!("{name} d={d}: {s}");
    let nv = alg.n_vertices();
    let ar = knit(alg, d, MAX_OBJECTS).expect("corpus algebras are truncated");
    let complete = ar.status == KnitStatus::Complete;
    let census = ar.objects();
    let basics: Vec<Obj<F>> = (0..nv)
        .flat_map(|v| [PvdObject::projective(alg, v, d), PvdObject::simple(alg, v, d), PvdObject::injective(alg, v, d)])
        .filter(|o| !o.is_zero())
        .collect();
    let sample = if complete { spread(&census, SAMPLE) } else { spread(&basics, SAMPLE) };
    let mut probes = basics.clone();
    probes.extend(sample.iter().cloned());

    // Extension groups by both routes.
    for x in &sample {
        for y in &sample {
            for n in 1..=d + 1 {
                let (a, b) = (extmod::ext_dim(x, y, n), extmod::ext_dim_by_syzygy(x, y, n));
                r.check(a == b, || tag(&format!("E^{n} dims {a} (hom) vs {b} (syzygy)")));
            }
        }
    }

    // n-mono / n-epi three ways, and balance.
    for f in test_maps(&sample) {
        for n in 1..=d {
            let m = [
                extmod::is_n_mono(&f, n).unwrap(),
                extmod::is_n_mono_by_cone(&f, n).unwrap(),
                extmod::is_n_mono_by_hom(&f, n, &probes).unwrap(),
            ];
            r.check(m[0] == m[1] && m[1] == m[2], || tag(&format!("{n}-mono routes disagree {m:?}")));
            let e = [
                extmod::is_n_epi(&f, n).unwrap(),
                extmod::is_n_epi_by_cone(&f, n).unwrap(),
                extmod::is_n_epi_by_hom(&f, n, &probes).unwrap(),
            ];
            r.check(e[0] == e[1] && e[1] == e[2], || tag(&format!("{n}-epi routes disagree {e:?}")));
        }
        if extmod::is_n_epi(&f, d).unwrap() && extmod::is_n_mono(&f, 1).unwrap() {
            let iso = pvd::cone(&f).unwrap().0.is_zero() && pvd::is_isomorphic(&f.src, &f.dst).unwrap();
            r.check(iso, || tag("d-epi and 1-mono map is not an isomorphism"));
        }
    }

    // Presentations see nothing beyond the window.
    for x in &sample {
        for y in &sample {
            let h = HomComplex::new(&x.pres, &y.xmod);
            for i in d + 1..=d + 2 {
                let k = h.cohomology_dim(i);
                r.check(k == 0, || tag(&format!("Hom(P, M[{i}]) has dim {k}")));
            }
        }
    }

    // Global dimension of the category against the algebra.
    let dim_bound = (2 * d + 4) as usize;
    if complete {
        match (extmod::gldim_algebra(alg, dim_bound), extmod::gldim_category(&census, dim_bound)) {
            (Dim::Value(a), Dim::Value(c)) => {
                r.check(c == a + d as usize - 1, || tag(&format!("gldim category {c} vs algebra {a}")))
            }
            (a, c) => r.skipped.push(tag(&format!("gldim unterminated ({a}, {c})"))),
        }
    } else {
        r.skipped.push(tag("gldim identity: knitting aborted"));
    }

    // Hom dimensions do not move when the resolution is deepened.
    for x in &sample {
        for y in &sample {
            for i in -d + 1..=d + 1 {
                let (a, b) = (pvd::hom_dim_at_depth(x, y, i, 0), pvd::hom_dim_at_depth(x, y, i, 1));
                r.check(a == b, || tag(&format!("Hom(X, Y[{i}]) {a} vs {b} one level deeper")));
            }
        }
    }

    // Duality flips cohomological degrees.
    let op: Alg<F> = Arc::new(alg.opposite());
    for x in &probes {
        let dx = x.xmod.k_dual(&op);
        for i in -d - 1..=d + 1 {
            let (a, b) = (x.xmod.cohomology_dim(i), dx.cohomology_dim(-i));
            r.check(a == b, || tag(&format!("H^{i} {a} vs dual H^{} {b}", -i)));
        }
    }

    // Knitting against the exhaustive census.
    if !complete {
        r.skipped.push(tag("census comparison: knitting aborted"));
        return;
    }
    // Wider quivers get the narrow census; the wide one for them is its own criterion.
    let bound = if nv > 4 { 1 } else { ORACLE_BOUND };
    let oracle = brute_force_census_limited(alg, d, bound, ORACLE_LIMIT).unwrap();
    if !oracle.complete {
        r.skipped.push(tag("census comparison: oracle hit its candidate limit"));
        return;
    }
    let (extra, missing) = oracle.compare(&ar);
    r.check(extra.is_empty(), || tag(&format!("oracle found {} objects knitting missed", extra.len())));
    for v in missing {
        let gens = census[v].generator_profile();
        let widest = (0..=d).map(|s| gens.iter().filter(|g| g.shift == s).count()).max().unwrap_or(0);
        r.check(widest > bound, || tag(&format!("knitted vertex {v} within the oracle bound was not found")));
    }
}

/// The whole corpus over `d = 1, 2, 3`, each algebra reduced to the window first.
pub fn property_suite() -> (usize, Report) {
    let mut r = Report::default();
    let mut cases = 0;
    for (name, q) in corpus::property_corpus::<F>() {
        let full = DgAlgebra::build(&q).expect("corpus quivers are valid");
        for d in 1..=3 {
            let alg: Alg<F> = Arc::new(full.reduce_to_truncated(d));
            check_algebra(name, &alg, d, &mut r);
            cases += 1;
        }
    }
    (cases, r)
}
