use dgx_core::arknit::{knit, KnitStatus};
use dgx_core::pvd::{decompose, direct_sum, find_iso, hom_dim, PvdObject};
use dgx_core::{Alg, DgAlgebra, DgQuiver, Rational};
use proptest::prelude::*;
use std::sync::Arc;

type F = Rational;

/// Acyclic quivers on up to three vertices with arrows in degrees 0, -1, -2.
/// A degree -1 arrow may get the differential of a composable degree 0 pair.
fn dg_quiver() -> impl Strategy<Value = DgQuiver<F>> {
    (1usize..=3)
        .prop_flat_map(|n| {
            let arrow = (0..n, 0..n, prop_oneof![Just(0), Just(-1), Just(-2)]);
            (Just(n), proptest::collection::vec(arrow, 0..=4), any::<bool>())
        })
        .prop_map(|(n, raw, mesh)| {
            let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            let mut q = DgQuiver::new(&names.iter().map(|s| s.as_str()).collect::<Vec<_>>());
            for (k, (s, t, deg)) in raw.into_iter().enumerate() {
                if s < t {
                    q = q.arrow(&format!("x{k}"), &names[s], &names[t], deg);
                }
            }
            if mesh {
                let arrows = q.arrows.clone();
                'h: for h in arrows.iter().filter(|a| a.degree == -1) {
                    for f in arrows.iter().filter(|a| a.degree == 0 && a.source == h.source) {
                        for g in arrows.iter().filter(|a| a.degree == 0 && a.source == f.target && a.target == h.target) {
                            let (hn, fname, gname) = (h.name.clone(), f.name.clone(), g.name.clone());
                            q = q.diff(&hn, &[(1, &[fname.as_str(), gname.as_str()])]);
                            break 'h;
                        }
                    }
                }
            }
            q
        })
}

fn reduced(q: &DgQuiver<F>, d: i32) -> Alg<F> {
    Arc::new(DgAlgebra::build(q).expect("generated quivers are valid").reduce_to_truncated(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduction_is_truncated_and_idempotent(q in dg_quiver(), d in 1i32..=3) {
        let a = reduced(&q, d);
        prop_assert!(a.is_truncated(d));
        prop_assert!(a.validate().is_ok());
        prop_assert_eq!(&a.reduce_to_truncated(d), &*a);
        prop_assert_eq!(&a.opposite().opposite(), &*a);
    }

    #[test]
    fn projectives_corepresent_cohomology(q in dg_quiver(), d in 1i32..=2) {
        let a = reduced(&q, d);
        let op: Alg<F> = Arc::new(a.opposite());
        for v in 0..a.n_vertices() {
            for m in [PvdObject::simple(&a, v, d), PvdObject::injective(&a, v, d), PvdObject::projective(&a, v, d)] {
                let dual = m.xmod.k_dual(&op);
                for i in -d + 1..=0 {
                    prop_assert_eq!(m.xmod.cohomology_dim(i), dual.cohomology_dim(-i));
                    for u in 0..a.n_vertices() {
                        let p = PvdObject::projective(&a, u, d);
                        prop_assert_eq!(hom_dim(&p, &m, i), m.xmod.cohomology_dim_at(i, u));
                    }
                }
            }
        }
    }

    #[test]
    fn sums_of_simples_split(q in dg_quiver(), d in 1i32..=2, u in 0usize..3, v in 0usize..3) {
        let a = reduced(&q, d);
        let n = a.n_vertices();
        let (x, y) = (PvdObject::simple(&a, u % n, d), PvdObject::simple(&a, v % n, d));
        let (s, _, _) = direct_sum(&a, d, &[x.clone(), y.clone()]);
        let parts = decompose(&s).unwrap();
        prop_assert_eq!(parts.len(), 2);
        prop_assert!(parts.iter().any(|p| find_iso(&p.obj, &x).is_some()));
        prop_assert!(parts.iter().any(|p| find_iso(&p.obj, &y).is_some()));
    }

    #[test]
    fn knitted_quivers_are_translation_quivers(q in dg_quiver(), d in 1i32..=2) {
        let a = reduced(&q, d);
        let ar = knit(&a, d, 30).unwrap();
        prop_assume!(ar.status == KnitStatus::Complete);
        prop_assert!(ar.boundary_consistent());
        prop_assert_eq!(ar.vertices.iter().filter(|v| v.projective).count(), a.n_vertices());
        prop_assert_eq!(ar.vertices.iter().filter(|v| v.injective).count(), a.n_vertices());
        let objs = ar.objects();
        for i in 0..objs.len() {
            for j in i + 1..objs.len() {
                prop_assert!(find_iso(&objs[i], &objs[j]).is_none(), "vertices {} and {} are isomorphic", i, j);
            }
        }
        for m in &ar.meshes {
            prop_assert!(m.conflation.is_valid());
        }
    }
}
