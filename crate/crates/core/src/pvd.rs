//! Objects of the d-extended module category as minimal complexes of
//! projectives, strict chain maps as morphisms, Hom spaces modulo homotopy,
//! cones, direct sums and Krull–Schmidt decomposition.

use crate::algebra::Alg;
use crate::field::Field;
use crate::linalg::{kernel_of_columns, solve_columns, Acc, Echelon, SVec};
use crate::module::{apply, CohomologyCell, DgModule, LinMap};
use crate::semifree::{resolve, Gen, HomComplex, Layout, Resolution, Semifree};
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PvdError {
    #[error("cohomology in degree {degree} lies outside the window (-{d}, 0]")]
    OutsideWindow { degree: i32, d: i32 },
    #[error("{0}")]
    Input(String),
}

pub fn check_window<F: Field>(m: &DgModule<F>, d: i32) -> Result<(), PvdError> {
    for (deg, dim) in m.cohomology_dims() {
        if dim > 0 && (deg > 0 || deg <= -d) {
            return Err(PvdError::OutsideWindow { degree: deg, d });
        }
    }
    Ok(())
}

/// An object given by its minimal presentation `pres`; `xmod = τ>-d pres` is a
/// finite-dimensional DG module model of it.
pub struct PvdObject<F> {
    pub alg: Alg<F>,
    pub d: i32,
    pub pres: Semifree<F>,
    pub xmod: Arc<DgModule<F>>,
    /// `pres → xmod`, indexed by the module basis of `pres`.
    pub proj: LinMap<F>,
    /// `xmod` basis element `i` is the class of `pres` basis element `section[i]`.
    pub section: Vec<usize>,
    deep: Mutex<Option<Arc<Resolution<F>>>>,
    end: OnceLock<Arc<EndData<F>>>,
}

pub type Obj<F> = Arc<PvdObject<F>>;

impl<F: Field> PvdObject<F> {
    pub fn from_pres(pres: Semifree<F>, d: i32) -> Obj<F> {
        let (xmod, proj, section) = pres.module().tau_gt_split(-d);
        Arc::new(PvdObject {
            alg: pres.alg.clone(),
            d,
            pres,
            xmod: Arc::new(xmod),
            proj,
            section,
            deep: Mutex::new(None),
            end: OnceLock::new(),
        })
    }

    /// Minimal presentation of a module with cohomology in `(-d, 0]`, with the
    /// quasi-isomorphism from the presentation onto `x`.
    pub fn from_module_with_map(x: &DgModule<F>, d: i32) -> Result<(Obj<F>, LinMap<F>), PvdError> {
        check_window(x, d)?;
        let r = resolve(x, -d, None);
        let phi = r.f.extend(&r.phi, x);
        Ok((Self::from_pres(r.f, d), phi))
    }

    pub fn from_module(x: &DgModule<F>, d: i32) -> Result<Obj<F>, PvdError> {
        Ok(Self::from_module_with_map(x, d)?.0)
    }

    pub fn zero(alg: &Alg<F>, d: i32) -> Obj<F> {
        Self::from_pres(Semifree::zero(alg), d)
    }

    pub fn projective(alg: &Alg<F>, v: usize, d: i32) -> Obj<F> {
        Self::from_pres(Semifree::stalk(alg, v, 0), d)
    }

    pub fn regular(alg: &Alg<F>, d: i32) -> Obj<F> {
        let parts: Vec<Semifree<F>> = (0..alg.n_vertices()).map(|v| Semifree::stalk(alg, v, 0)).collect();
        Self::from_pres(Semifree::direct_sum(&parts.iter().collect::<Vec<_>>()), d)
    }

    /// The simple module at `v`, concentrated in degree 0.
    pub fn simple(alg: &Alg<F>, v: usize, d: i32) -> Obj<F> {
        Self::from_module(&simple_module(alg, v), d).expect("simple modules lie in the window")
    }

    /// The injective `D_d(Λ e_v) = D(Λ e_v)[d-1]`.
    pub fn injective(alg: &Alg<F>, v: usize, d: i32) -> Obj<F> {
        let op: Alg<F> = Arc::new(alg.opposite());
        let m = DgModule::projective(&op, v).d_dual(alg, d);
        Self::from_module(&m, d).expect("injectives lie in the window")
    }

    pub fn is_zero(&self) -> bool {
        self.pres.rank() == 0
    }

    pub fn cohomology_vector(&self) -> BTreeMap<i32, Vec<usize>> {
        self.xmod.cohomology_vector()
    }

    pub fn total_dim(&self) -> usize {
        self.xmod.cohomology_dims().values().sum()
    }

    /// Generator multiset, sorted: an isomorphism invariant of minimal presentations.
    pub fn generator_profile(&self) -> Vec<Gen> {
        let mut g = self.pres.gens.clone();
        g.sort();
        g
    }

    /// Resolution of `xmod` killing cone cohomology down to `floor`.
    pub fn resolution(&self, floor: i32) -> Arc<Resolution<F>> {
        let mut guard = self.deep.lock().unwrap();
        if let Some(r) = guard.as_ref() {
            if r.floor <= floor || r.exact {
                return r.clone();
            }
        }
        let start = match guard.as_ref() {
            Some(r) => (r.f.clone(), r.phi.clone(), r.floor - 1),
            None => {
                let offs = self.pres.offsets();
                let phi = (0..self.pres.rank()).map(|j| self.proj[offs[j]].clone()).collect();
                (self.pres.clone(), phi, -self.d - 1)
            }
        };
        let r = if start.2 < floor {
            // Already deep enough: the presentation itself.
            let f = start.0;
            let exact = f.module().cone(&self.xmod, &f.extend(&start.1, &self.xmod)).is_acyclic();
            Resolution { f, phi: start.1, floor: start.2 + 1, exact }
        } else {
            resolve(&self.xmod, floor, Some(start))
        };
        let r = Arc::new(r);
        *guard = Some(r.clone());
        r
    }

    /// Resolution continued until the cone is acyclic or `cap` is reached.
    pub fn full_resolution(&self, cap: i32) -> Arc<Resolution<F>> {
        let mut r = self.resolution(-self.d);
        while !r.exact && r.floor > cap {
            r = self.resolution(r.floor - 1);
        }
        r
    }

    /// `End` in the category, with multiplication table (cached).
    pub fn end(self: &Arc<Self>) -> Arc<EndData<F>> {
        self.end.get_or_init(|| Arc::new(EndData::new(self))).clone()
    }
}

/// Simple module `S_v` in degree 0.
pub fn simple_module<F: Field>(alg: &Alg<F>, v: usize) -> DgModule<F> {
    let basis = vec![crate::module::Cell { degree: 0, vertex: v }];
    let act = vec![alg.from[v]
        .iter()
        .map(|&a| if a == alg.idem[v] { SVec::unit(0) } else { SVec::new() })
        .collect()];
    DgModule::new(alg.clone(), basis, vec![SVec::new()], act)
}

/// A morphism, represented by a strict chain map between presentations.
#[derive(Clone)]
pub struct Mor<F> {
    pub src: Obj<F>,
    pub dst: Obj<F>,
    /// Images of the generators of `src.pres` in the module of `dst.pres`.
    pub imgs: Vec<SVec<F>>,
}

impl<F: Field> Mor<F> {
    pub fn new(src: &Obj<F>, dst: &Obj<F>, imgs: Vec<SVec<F>>) -> Self {
        Mor { src: src.clone(), dst: dst.clone(), imgs }
    }

    pub fn identity(x: &Obj<F>) -> Self {
        let imgs = (0..x.pres.rank()).map(|j| x.pres.gen_elem(j)).collect();
        Self::new(x, x, imgs)
    }

    pub fn zero(x: &Obj<F>, y: &Obj<F>) -> Self {
        Self::new(x, y, vec![SVec::new(); x.pres.rank()])
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &Mor<F>) -> Mor<F> {
        assert!(Arc::ptr_eq(&f.dst, &self.src), "composition of mismatched morphisms");
        let m = self.dst.pres.module();
        let imgs = f.imgs.iter().map(|v| f.dst.pres.apply(&self.imgs, m, v)).collect();
        Self::new(&f.src, &self.dst, imgs)
    }

    pub fn lin_comb(&self, c: &F, o: &Mor<F>) -> Mor<F> {
        let imgs = self.imgs.iter().zip(&o.imgs).map(|(a, b)| a.axpy(c, b)).collect();
        Self::new(&self.src, &self.dst, imgs)
    }

    pub fn scale(&self, c: &F) -> Mor<F> {
        Self::new(&self.src, &self.dst, self.imgs.iter().map(|v| v.scale(c)).collect())
    }

    pub fn is_chain_map(&self) -> bool {
        self.src.pres.is_cocycle_map(&self.imgs, self.dst.pres.module(), 0)
    }

    /// Images of generators in `dst.xmod`.
    pub fn xmod_imgs(&self) -> Vec<SVec<F>> {
        self.imgs.iter().map(|v| apply(&self.dst.proj, v)).collect()
    }

    /// The induced strict map `src.xmod → dst.xmod`.
    pub fn on_xmod(&self) -> LinMap<F> {
        let m = self.dst.pres.module();
        self.src
            .section
            .iter()
            .map(|&k| apply(&self.dst.proj, &self.src.pres.apply(&self.imgs, m, &SVec::unit(k))))
            .collect()
    }

    /// Rank of the induced map on `H^n`.
    pub fn cohomology_rank(&self, n: i32) -> usize {
        let f = self.on_xmod();
        let (x, y) = (&self.src.xmod, &self.dst.xmod);
        let mut e = Echelon::new();
        let mut nb = 0;
        for v in 0..x.alg.n_vertices() {
            for b in y.boundaries(n, v).rows {
                e.insert(b);
                nb += 1;
            }
            for z in x.cocycles(n, v) {
                e.insert(apply(&f, &z));
            }
        }
        e.rank() - nb
    }
}

/// Solve for a strict chain map `ψ: F → T` such that `q∘ψ` is homotopic to `φ: F → Q`.
pub fn lift<F: Field>(
    f: &Semifree<F>,
    t: &DgModule<F>,
    q: &LinMap<F>,
    qm: &DgModule<F>,
    phi: &[SVec<F>],
) -> Option<Vec<SVec<F>>> {
    let ht = HomComplex::new(f, t);
    let hq = HomComplex::new(f, qm);
    let lt = ht.layout(0);
    let lq = hq.layout(0);
    let n1 = lt.entries.len();
    let ra = ht.dim(1);
    let mut cols = Vec::with_capacity(n1 + hq.dim(-1));
    for a in 0..n1 {
        let (j, i) = lt.entries[a];
        let mut c = ht.d_column(0, a);
        let push: Vec<(usize, F)> = q[i].e.iter().map(|(s, x)| (ra + lq.pos[&(j, *s)], x.clone())).collect();
        c = c.add(&SVec::from_terms(push));
        cols.push(c);
    }
    for b in 0..hq.dim(-1) {
        cols.push(hq.d_column(-1, b).neg().shift_index(ra));
    }
    let rhs = hq.from_imgs(0, phi).shift_index(ra);
    let x = solve_columns(&cols, &rhs)?;
    let psi = SVec { e: x.e.into_iter().filter(|(i, _)| *i < n1).collect() };
    Some(ht.to_imgs(0, &psi))
}

impl<F: Field> Mor<F> {
    /// The morphism represented by a degree-0 cocycle `src.pres → dst.xmod`.
    pub fn from_xmod_cocycle(src: &Obj<F>, dst: &Obj<F>, imgs: &[SVec<F>]) -> Mor<F> {
        let l = lift(&src.pres, dst.pres.module(), &dst.proj, &dst.xmod, imgs).expect("lifting a cocycle");
        Self::new(src, dst, l)
    }
}

/// `Hom(X, Y)` in the category: chain maps modulo homotopy, computed as
/// `H^0 Hom(pres_X, xmod_Y)`, with strict representatives.
pub struct HomSpace<F> {
    pub src: Obj<F>,
    pub dst: Obj<F>,
    pub basis: Vec<Mor<F>>,
    cell: CohomologyCell<F>,
    layout: Arc<Layout>,
}

impl<F: Field> HomSpace<F> {
    pub fn new(x: &Obj<F>, y: &Obj<F>) -> Self {
        let hq = HomComplex::new(&x.pres, &y.xmod);
        let cell = hq.cohomology(0);
        let layout = hq.layout(0);
        let want = cell.reps.len();
        let mut basis = Vec::new();
        if want > 0 {
            let hp = HomComplex::new(&x.pres, y.pres.module());
            let mut seen = Echelon::new();
            for z in hp.cocycles(0) {
                let m = Mor::new(x, y, hp.to_imgs(0, &z));
                let c = Self::coords_in(&cell, &layout, &m);
                if seen.add(c) {
                    basis.push(m);
                    if basis.len() == want {
                        break;
                    }
                }
            }
            assert_eq!(basis.len(), want, "strict chain maps must cover Hom");
        }
        HomSpace { src: x.clone(), dst: y.clone(), basis, cell, layout }
    }

    fn coords_in(cell: &CohomologyCell<F>, layout: &Layout, m: &Mor<F>) -> SVec<F> {
        let mut t = Vec::new();
        for (j, img) in m.xmod_imgs().iter().enumerate() {
            for (i, c) in &img.e {
                t.push((layout.pos[&(j, *i)], c.clone()));
            }
        }
        cell.coords(&SVec::from_terms(t)).expect("not a chain map")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, m: &Mor<F>) -> SVec<F> {
        Self::coords_in(&self.cell, &self.layout, m)
    }

    pub fn is_zero(&self, m: &Mor<F>) -> bool {
        self.coords(m).is_zero()
    }

    pub fn combine(&self, c: &SVec<F>) -> Mor<F> {
        let mut m = Mor::zero(&self.src, &self.dst);
        for (i, x) in &c.e {
            m = m.lin_comb(x, &self.basis[*i]);
        }
        m
    }
}

/// `dim Hom(X, Y[i])`, deepening the presentation of `X` as the depth rule requires.
pub fn hom_dim<F: Field>(x: &Obj<F>, y: &Obj<F>, i: i32) -> usize {
    hom_dim_at_depth(x, y, i, 0)
}

pub fn hom_dim_at_depth<F: Field>(x: &Obj<F>, y: &Obj<F>, i: i32, extra: i32) -> usize {
    let floor = -x.d - i.max(0) - extra;
    if floor >= -x.d {
        HomComplex::new(&x.pres, &y.xmod).cohomology_dim(i)
    } else {
        let r = x.resolution(floor);
        HomComplex::new(&r.f, &y.xmod).cohomology_dim(i)
    }
}

pub fn hom_window<F: Field>(x: &Obj<F>, y: &Obj<F>, lo: i32, hi: i32) -> Vec<(i32, usize)> {
    (lo..=hi).map(|i| (i, hom_dim(x, y, i))).collect()
}

/// The hom complex `τ≤0 Hom(X, Y)` as a complex of vector spaces.
pub fn truncated_hom<F: Field>(x: &Obj<F>, y: &Obj<F>) -> DgModule<F> {
    let h = HomComplex::new(&x.pres, &y.xmod);
    let lo = y.xmod.degree_range().map_or(0, |r| r.0);
    let z0 = h.cocycles(0);
    let z0e = Echelon::from_vectors(&z0);
    let mut degs = Vec::new();
    let mut offs = BTreeMap::new();
    for n in lo..0 {
        offs.insert(n, degs.len());
        degs.extend(std::iter::repeat(n).take(h.dim(n)));
    }
    let o0 = degs.len();
    degs.extend(std::iter::repeat(0).take(z0e.rank()));
    let mut diff = Vec::new();
    for n in lo..0 {
        for a in 0..h.dim(n) {
            let c = h.d_column(n, a);
            diff.push(if n + 1 < 0 {
                c.shift_index(offs[&(n + 1)])
            } else {
                z0e.coords(&c).unwrap().shift_index(o0)
            });
        }
    }
    diff.extend(std::iter::repeat(SVec::new()).take(z0e.rank()));
    crate::module::ground_module(&degs, diff)
}

/// Cone of `f: X → Y` when it lies in the window, with the map `Y → Cone f`.
pub fn cone<F: Field>(f: &Mor<F>) -> Result<(Obj<F>, Mor<F>), PvdError> {
    let (x, y) = (&f.src, &f.dst);
    let d = x.d;
    let pm = x.pres.module();
    let fl: LinMap<F> = x.pres.extend(&f.imgs, y.pres.module()).iter().map(|v| apply(&y.proj, v)).collect();
    let c = pm.cone(&y.xmod, &fl);
    let (t, tp, _) = c.tau_gt_split(-d - 1);
    check_window(&t, d)?;
    let (cobj, phi) = PvdObject::from_module_with_map(&t, d)?;
    let o = pm.dim();
    let offs = y.pres.offsets();
    let imgs: Vec<SVec<F>> =
        (0..y.pres.rank()).map(|j| apply(&tp, &apply(&y.proj, &SVec::unit(offs[j])).shift_index(o))).collect();
    let l = lift(&y.pres, cobj.pres.module(), &phi, &t, &imgs).expect("lifting into the cone");
    Ok((cobj.clone(), Mor::new(y, &cobj, l)))
}

/// Cocone of `g: Y → Z` when it lies in the window, with the map `Cocone g → Y`.
pub fn cocone<F: Field>(g: &Mor<F>) -> Result<(Obj<F>, Mor<F>), PvdError> {
    let (y, z) = (&g.src, &g.dst);
    let d = y.d;
    let pm = y.pres.module();
    let gl: LinMap<F> = y.pres.extend(&g.imgs, z.pres.module()).iter().map(|v| apply(&z.proj, v)).collect();
    let c = pm.cone(&z.xmod, &gl).shift(-1);
    let (t, _, keep) = c.tau_gt_split(-d);
    check_window(&t, d)?;
    let (w, phi) = PvdObject::from_module_with_map(&t, d)?;
    let n = pm.dim();
    let tmap: LinMap<F> =
        keep.iter().map(|&k| if k < n { y.proj[k].clone() } else { SVec::new() }).collect();
    let offs = w.pres.offsets();
    let imgs: Vec<SVec<F>> = (0..w.pres.rank()).map(|j| apply(&tmap, &phi[offs[j]])).collect();
    let m = Mor::from_xmod_cocycle(&w, y, &imgs);
    Ok((w, m))
}

/// Direct sum with inclusions and projections.
pub fn direct_sum<F: Field>(alg: &Alg<F>, d: i32, parts: &[Obj<F>]) -> (Obj<F>, Vec<Mor<F>>, Vec<Mor<F>>) {
    let pres = Semifree::direct_sum(&std::iter::once(&Semifree::zero(alg)).chain(parts.iter().map(|p| &p.pres)).collect::<Vec<_>>());
    let s = PvdObject::from_pres(pres, d);
    let mut incl = Vec::new();
    let mut proj = Vec::new();
    let mut o = 0;
    for p in parts {
        let r = p.pres.rank();
        incl.push(Mor::new(p, &s, (0..r).map(|j| s.pres.gen_elem(o + j)).collect()));
        let imgs = (0..s.pres.rank())
            .map(|k| if k >= o && k < o + r { p.pres.gen_elem(k - o) } else { SVec::new() })
            .collect();
        proj.push(Mor::new(&s, p, imgs));
        o += r;
    }
    (s, incl, proj)
}

/// Map into a direct sum from its components.
pub fn into_sum<F: Field>(x: &Obj<F>, sum: &Obj<F>, incl: &[Mor<F>], comps: &[Mor<F>]) -> Mor<F> {
    let mut m = Mor::zero(x, sum);
    for (i, c) in incl.iter().zip(comps) {
        m = m.lin_comb(&F::one(), &i.after(c));
    }
    m
}

/// Map out of a direct sum from its components.
pub fn out_of_sum<F: Field>(sum: &Obj<F>, y: &Obj<F>, proj: &[Mor<F>], comps: &[Mor<F>]) -> Mor<F> {
    let mut m = Mor::zero(sum, y);
    for (p, c) in proj.iter().zip(comps) {
        m = m.lin_comb(&F::one(), &c.after(p));
    }
    m
}

/// Endomorphism algebra of an object in the category.
pub struct EndData<F> {
    pub hom: HomSpace<F>,
    /// `mult[i][j]` = coordinates of `b_i ∘ b_j`.
    pub mult: Vec<Vec<SVec<F>>>,
    pub one: SVec<F>,
    /// The radical when the algebra is local.
    pub radical: Option<Echelon<F>>,
}

impl<F: Field> EndData<F> {
    fn new(x: &Obj<F>) -> Self {
        let hom = HomSpace::new(x, x);
        let n = hom.dim();
        let mult: Vec<Vec<SVec<F>>> =
            (0..n).map(|i| (0..n).map(|j| hom.coords(&hom.basis[i].after(&hom.basis[j]))).collect()).collect();
        let one = hom.coords(&Mor::identity(x));
        let mut e = EndData { hom, mult, one, radical: None };
        e.radical = e.local_radical();
        e
    }

    pub fn dim(&self) -> usize {
        self.hom.dim()
    }

    pub fn mul(&self, a: &SVec<F>, b: &SVec<F>) -> SVec<F> {
        let mut acc = Acc::new();
        for (i, x) in &a.e {
            for (j, y) in &b.e {
                acc.add_vec(&x.mul_ref(y), &self.mult[*i][*j]);
            }
        }
        acc.finish()
    }

    /// Minimal polynomial (low coefficient first, monic).
    pub fn min_poly(&self, u: &SVec<F>) -> Vec<F> {
        let mut e = Echelon::tracked();
        let mut p = self.one.clone();
        let mut k = 0;
        loop {
            if let crate::linalg::Inserted::Relation(c) = e.insert(p.clone()) {
                // Σ c_i u^i = 0 with c_k = 1.
                return (0..=k).map(|i| c.get(i)).collect();
            }
            p = self.mul(&p, u);
            k += 1;
        }
    }

    pub fn is_local(&self) -> bool {
        self.radical.is_some()
    }

    /// `E = F·1 ⊕ N` with `N` a nilpotent ideal, `N` spanned by `b_i - λ_i`.
    fn local_radical(&self) -> Option<Echelon<F>> {
        let n = self.dim();
        if n == 0 {
            return None;
        }
        let mut nvecs = Vec::new();
        for i in 0..n {
            let b = SVec::unit(i);
            let roots = distinct_roots(&self.min_poly(&b));
            if roots.len() != 1 {
                return None;
            }
            let v = b.axpy(&-roots[0].clone(), &self.one);
            if !v.is_zero() {
                nvecs.push(v);
            }
        }
        let rad = Echelon::from_vectors(&nvecs);
        if rad.rank() != n - 1 || rad.contains(&self.one) {
            return None;
        }
        // Closed under multiplication and nilpotent.
        let mut power = rad.rows.clone();
        for _ in 0..=n {
            let mut next = Echelon::new();
            for a in &power {
                for b in &rad.rows {
                    let p = self.mul(a, b);
                    if !rad.contains(&p) {
                        return None;
                    }
                    next.insert(p);
                }
            }
            if next.rank() == 0 {
                return Some(rad);
            }
            power = next.rows;
        }
        None
    }

    /// An element whose minimal polynomial has two distinct roots, when one can be found.
    fn splitting_element(&self, seed: u64) -> Option<(SVec<F>, F)> {
        let n = self.dim();
        let try_u = |u: SVec<F>| -> Option<(SVec<F>, F)> {
            let roots = distinct_roots(&self.min_poly(&u));
            if roots.len() >= 2 {
                Some((u, roots[0].clone()))
            } else {
                None
            }
        };
        for i in 0..n {
            if let Some(r) = try_u(SVec::unit(i)) {
                return Some(r);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if let Some(r) = try_u(SVec::unit(i).add(&SVec::unit(j))) {
                    return Some(r);
                }
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let u = SVec::from_terms((0..n).map(|i| (i, F::from_i64(rng.gen_range(-6..=6)))).collect());
            if let Some(r) = try_u(u) {
                return Some(r);
            }
        }
        None
    }
}

pub(crate) fn distinct_roots<F: Field>(p: &[F]) -> Vec<F> {
    let mut r = F::roots(p);
    r.dedup();
    let mut out: Vec<F> = Vec::new();
    for x in r {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// A summand with its split inclusion.
#[derive(Clone)]
pub struct Summand<F> {
    pub obj: Obj<F>,
    pub incl: Mor<F>,
}

pub const DEFAULT_SEED: u64 = 0x5eed;

static SEED: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(DEFAULT_SEED);

/// Seed for the random fallback of `decompose`, shared by the whole process.
pub fn set_seed(seed: u64) {
    SEED.store(seed, std::sync::atomic::Ordering::Relaxed);
}

pub fn seed() -> u64 {
    SEED.load(std::sync::atomic::Ordering::Relaxed)
}

/// Decompose into indecomposable summands with inclusions. Zero objects give
/// an empty list. Fails only if an endomorphism algebra is neither local nor
/// split by an element with two eigenvalues in the field.
pub fn decompose<F: Field>(x: &Obj<F>) -> Result<Vec<Summand<F>>, PvdError> {
    if x.is_zero() {
        return Ok(vec![]);
    }
    let e = x.end();
    if e.dim() == 0 {
        return Ok(vec![]);
    }
    if e.is_local() {
        return Ok(vec![Summand { obj: x.clone(), incl: Mor::identity(x) }]);
    }
    let (u, lambda) = e
        .splitting_element(seed())
        .ok_or_else(|| PvdError::Input("endomorphism algebra does not split over this field".into()))?;
    let um = e.hom.combine(&u);
    let a = um.on_xmod();
    let n = x.xmod.dim();
    let b: LinMap<F> = (0..n).map(|i| a[i].axpy(&-lambda.clone(), &SVec::unit(i))).collect();
    // Fitting decomposition of the strict endomorphism of xmod.
    let mut pow = b.clone();
    let mut rank = crate::linalg::rank_of_columns(&pow);
    loop {
        let next: LinMap<F> = pow.iter().map(|v| apply(&b, v)).collect();
        let r = crate::linalg::rank_of_columns(&next);
        pow = next;
        if r == rank {
            break;
        }
        rank = r;
    }
    let ker = Echelon::from_vectors(&kernel_of_columns(&pow));
    let img = Echelon::from_vectors(&pow);
    let mut out = Vec::new();
    for sub in [ker, img] {
        let (m, inc) = x.xmod.submodule(&sub);
        if m.is_acyclic() {
            continue;
        }
        let (s, phi) = PvdObject::from_module_with_map(&m, x.d)?;
        let offs = s.pres.offsets();
        let imgs: Vec<SVec<F>> = (0..s.pres.rank()).map(|j| apply(&inc, &phi[offs[j]])).collect();
        let to_x = Mor::from_xmod_cocycle(&s, x, &imgs);
        for t in decompose(&s)? {
            out.push(Summand { incl: to_x.after(&t.incl), obj: t.obj });
        }
    }
    Ok(out)
}

pub fn is_indecomposable<F: Field>(x: &Obj<F>) -> bool {
    !x.is_zero() && x.end().is_local()
}

/// For indecomposable `x`, `y`: an isomorphism `x → y` if one exists.
pub fn find_iso<F: Field>(x: &Obj<F>, y: &Obj<F>) -> Option<Mor<F>> {
    if x.cohomology_vector() != y.cohomology_vector() || x.generator_profile() != y.generator_profile() {
        return None;
    }
    let ex = x.end();
    let rad = ex.radical.as_ref()?;
    let hxy = HomSpace::new(x, y);
    let hyx = HomSpace::new(y, x);
    for f in &hxy.basis {
        for g in &hyx.basis {
            if !rad.contains(&ex.hom.coords(&g.after(f))) {
                return Some(f.clone());
            }
        }
    }
    None
}

pub fn is_isomorphic<F: Field>(x: &Obj<F>, y: &Obj<F>) -> Result<bool, PvdError> {
    if x.cohomology_vector() != y.cohomology_vector() || x.generator_profile() != y.generator_profile() {
        return Ok(false);
    }
    if x.is_zero() {
        return Ok(true);
    }
    if is_indecomposable(x) && is_indecomposable(y) {
        return Ok(find_iso(x, y).is_some());
    }
    let a = decompose(x)?;
    let mut b = decompose(y)?;
    if a.len() != b.len() {
        return Ok(false);
    }
    for s in &a {
        match b.iter().position(|t| find_iso(&s.obj, &t.obj).is_some()) {
            Some(i) => {
                b.remove(i);
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}
