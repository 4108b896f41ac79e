//! The Auslander correspondence in both directions: truncated endomorphism
//! DG algebras of additive generators, the functor into Γ-modules, the
//! DG-quiver presentation by meshes, and the round-trip fingerprint.
//!
//! Conventions: for objects `X_x`, `e_x Γ e_y = Hom(F_x, F_y)` with `F_x`
//! a complete semifree resolution, and `f·g = (-1)^{|f||g|} g∘f`. The
//! indecomposable projective `e_x Γ` is then `Hom(X_x, M)`, so the functor
//! to right Γ-modules is `N ↦ τ_{>-d} τ_{≤0} Hom(N, M)`.

use crate::algebra::{Alg, Arrow, BasisElem, DgAlgebra, DgQuiver};
use crate::arknit::{knit, ArQuiver, KnitStatus, TranslationQuiver};
use crate::extmod::{is_auslander, projinj_vertices, rad, AuslanderCertificate};
use crate::field::Field;
use crate::linalg::{Echelon, Inserted, SVec};
use crate::module::{apply, Cell, CohomologyCell, DgModule};
use crate::pvd::{cone, direct_sum, distinct_roots, find_iso, into_sum, is_isomorphic, lift, Mor, Obj, PvdError, PvdObject};
use crate::semifree::{HomComplex, Resolution, Semifree};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum CorrError {
    #[error(transparent)]
    Pvd(#[from] PvdError),
    #[error("knitting stopped at the bound with {0} objects")]
    Incomplete(usize),
    #[error("not an Auslander algebra")]
    NotAuslander(Box<AuslanderCertificate>),
    #[error("no projective-injective summand")]
    NoProjectiveInjective,
}

/// Resolutions deeper than this are treated as non-terminating.
fn resolution_cap(x: &Obj<impl Field>) -> i32 {
    -(4 * x.d + 4 * x.alg.n_vertices() as i32 + 4)
}

fn complete_resolution<F: Field>(x: &Obj<F>) -> Result<Arc<Resolution<F>>, PvdError> {
    let r = x.full_resolution(resolution_cap(x));
    if !r.exact {
        return Err(PvdError::Input("object has no terminating semifree resolution within the cap".into()));
    }
    Ok(r)
}

/// Coordinates on `τ_{>-d} τ_{≤0} Hom(F, N)`: all of `Hom^n` for `-d < n < 0`,
/// chosen cocycles in degree 0, and a complement of the cocycles in degree `-d`.
struct Block<F> {
    d: i32,
    basis: BTreeMap<i32, Vec<SVec<F>>>,
    zero: Echelon<F>,
    low: Echelon<F>,
    low_pos: HashMap<usize, usize>,
}

impl<F: Field> Block<F> {
    fn new(hc: &HomComplex<F>, d: i32, zero_basis: Option<Vec<SVec<F>>>) -> Self {
        let mut basis = BTreeMap::new();
        let z0 = zero_basis.unwrap_or_else(|| hc.cocycles(0));
        let mut zero = Echelon::tracked();
        for v in &z0 {
            zero.insert(v.clone());
        }
        basis.insert(0, z0);
        for n in (1 - d)..0 {
            basis.insert(n, (0..hc.dim(n)).map(SVec::unit).collect());
        }
        let low = Echelon::from_vectors(&hc.cocycles(-d));
        let free: Vec<usize> = (0..hc.dim(-d)).filter(|&a| !low.is_pivot(a)).collect();
        let low_pos = free.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        basis.insert(-d, free.into_iter().map(SVec::unit).collect());
        Block { d, basis, zero, low, low_pos }
    }

    fn coords(&self, n: i32, v: &SVec<F>) -> SVec<F> {
        if n < -self.d {
            SVec::new()
        } else if n == 0 {
            self.zero.express(v).expect("degree-0 element is not a cocycle")
        } else if n == -self.d {
            self.low.reduce(v).remap(|a| self.low_pos.get(&a).copied())
        } else {
            v.clone()
        }
    }
}

/// Degree-0 cocycles of `End(F)` as `{id} ∪ radical`, for indecomposable `F`.
fn local_zero_basis<F: Field>(f: &Semifree<F>, hc: &HomComplex<F>) -> Result<Vec<SVec<F>>, PvdError> {
    let id: Vec<SVec<F>> = (0..f.rank()).map(|j| f.gen_elem(j)).collect();
    let idv = hc.from_imgs(0, &id);
    let compose = |a: &SVec<F>, b: &SVec<F>| -> SVec<F> {
        let ai = hc.to_imgs(0, a);
        let bi = hc.to_imgs(0, b);
        let c: Vec<SVec<F>> = bi.iter().map(|m| f.apply(&ai, f.module(), m)).collect();
        hc.from_imgs(0, &c)
    };
    let z = hc.cocycles(0);
    let mut w = Echelon::new();
    for zi in &z {
        let mut e = Echelon::tracked();
        let mut p = idv.clone();
        let mut k = 0;
        let poly: Vec<F> = loop {
            if let Inserted::Relation(c) = e.insert(p.clone()) {
                break (0..=k).map(|i| c.get(i)).collect();
            }
            p = compose(zi, &p);
            k += 1;
        };
        let roots = distinct_roots(&poly);
        if roots.len() != 1 {
            return Err(PvdError::Input("generator summand is not indecomposable".into()));
        }
        w.insert(zi.axpy(&-roots[0].clone(), &idv));
    }
    let mut out = vec![idv];
    out.extend(w.rows);
    if out.len() != z.len() {
        return Err(PvdError::Input("generator summand is not indecomposable".into()));
    }
    Ok(out)
}

/// A basis element of Γ as an explicit map `F_src → F_dst`.
#[derive(Clone)]
pub struct GammaBasis<F> {
    pub src: usize,
    pub dst: usize,
    pub degree: i32,
    pub imgs: Vec<SVec<F>>,
}

/// `τ_{>-d} τ_{≤0} End(⊕ X_x)` with explicit chain-level representatives.
pub struct EndAlgebra<F> {
    pub d: i32,
    pub gamma: Alg<F>,
    pub objects: Vec<Obj<F>>,
    pub res: Vec<Arc<Resolution<F>>>,
    pub maps: Vec<GammaBasis<F>>,
    blocks: Vec<Vec<Block<F>>>,
    index: HashMap<(usize, usize, i32), Vec<usize>>,
}

/// The truncated endomorphism DG algebra of the direct sum of `objects`, which
/// must be indecomposable with terminating resolutions.
pub fn end_algebra<F: Field>(objects: &[Obj<F>], d: i32) -> Result<EndAlgebra<F>, PvdError> {
    let n = objects.len();
    if n == 0 {
        return Err(PvdError::Input("empty generator".into()));
    }
    let res: Vec<Arc<Resolution<F>>> = objects.iter().map(complete_resolution).collect::<Result<_, _>>()?;
    let hcs: Vec<Vec<HomComplex<F>>> =
        (0..n).map(|x| (0..n).map(|y| HomComplex::new(&res[x].f, res[y].f.module())).collect()).collect();
    let mut blocks = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            let zb = if x == y { Some(local_zero_basis(&res[x].f, &hcs[x][x])?) } else { None };
            row.push(Block::new(&hcs[x][y], d, zb));
        }
        blocks.push(row);
    }

    let mut basis = Vec::new();
    let mut vecs = Vec::new();
    let mut maps = Vec::new();
    let mut index: HashMap<(usize, usize, i32), Vec<usize>> = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            for deg in (-d..=0).rev() {
                for (k, v) in blocks[x][y].basis[&deg].iter().enumerate() {
                    let idempotent = x == y && deg == 0 && k == 0;
                    let name = if idempotent { format!("e{}", x + 1) } else { format!("m{}_{}_{}_{}", x + 1, y + 1, -deg, k) };
                    index.entry((x, y, deg)).or_default().push(basis.len());
                    basis.push(BasisElem { name, source: x, target: y, degree: deg, idempotent });
                    maps.push(GammaBasis { src: x, dst: y, degree: deg, imgs: hcs[x][y].to_imgs(deg, v) });
                    vecs.push(v.clone());
                }
            }
        }
    }
    let global = |x: usize, y: usize, deg: i32, c: SVec<F>| -> SVec<F> {
        match index.get(&(x, y, deg)) {
            Some(ix) => c.remap(|k| Some(ix[k])),
            None => SVec::new(),
        }
    };

    let diff: Vec<SVec<F>> = maps
        .iter()
        .zip(&vecs)
        .map(|(m, v)| {
            if m.degree == 0 {
                return SVec::new();
            }
            let dv = hcs[m.src][m.dst].d_vec(m.degree, v);
            global(m.src, m.dst, m.degree + 1, blocks[m.src][m.dst].coords(m.degree + 1, &dv))
        })
        .collect();

    let mut mult = HashMap::new();
    for (i, f) in maps.iter().enumerate() {
        if basis[i].idempotent {
            continue;
        }
        for (j, g) in maps.iter().enumerate() {
            let deg = f.degree + g.degree;
            if g.src != f.dst || basis[j].idempotent || deg < -d {
                continue;
            }
            let (x, y, z) = (f.src, f.dst, g.dst);
            let imgs: Vec<SVec<F>> = f.imgs.iter().map(|m| res[y].f.apply(&g.imgs, res[z].f.module(), m)).collect();
            let v = hcs[x][z].from_imgs(deg, &imgs);
            let c = global(x, z, deg, blocks[x][z].coords(deg, &v));
            let s = F::sign((f.degree * g.degree) as i64);
            mult.insert((i, j), c.scale(&s));
        }
    }
    let vertices = (1..=n).map(|i| i.to_string()).collect();
    let gamma = DgAlgebra::from_structure(vertices, basis, mult, diff)
        .map_err(|e| PvdError::Input(format!("endomorphism algebra failed validation: {e}")))?;
    drop(hcs);
    Ok(EndAlgebra { d, gamma: Arc::new(gamma), objects: objects.to_vec(), res, maps, blocks, index })
}

impl<F: Field> EndAlgebra<F> {
    fn global(&self, x: usize, y: usize, deg: i32, c: SVec<F>) -> SVec<F> {
        match self.index.get(&(x, y, deg)) {
            Some(ix) => c.remap(|k| Some(ix[k])),
            None => SVec::new(),
        }
    }

    /// The degree-0 element of `e_x Γ e_y` representing `m: X_x → X_y`.
    pub fn element_of(&self, x: usize, y: usize, m: &Mor<F>) -> SVec<F> {
        let (rx, ry) = (&self.res[x], &self.res[y]);
        let yo = &self.objects[y];
        let on = m.on_xmod();
        let phi: Vec<SVec<F>> = rx.phi.iter().map(|v| apply(&on, v)).collect();
        let q = ry.phi_linear(&yo.xmod);
        let psi = lift(&rx.f, ry.f.module(), &q, &yo.xmod, &phi).expect("maps lift along resolutions");
        let hc = HomComplex::new(&rx.f, ry.f.module());
        let v = hc.from_imgs(0, &psi);
        self.global(x, y, 0, self.blocks[x][y].coords(0, &v))
    }

    /// `τ_{>-d} τ_{≤0} Hom(F, M)` as a right Γ-module, for semifree `F`.
    pub fn hom_module(&self, src: &Semifree<F>) -> DgModule<F> {
        let n = self.objects.len();
        let d = self.d;
        let hcs: Vec<HomComplex<F>> = (0..n).map(|x| HomComplex::new(src, self.res[x].f.module())).collect();
        let blocks: Vec<Block<F>> = hcs.iter().map(|hc| Block::new(hc, d, None)).collect();
        let mut cells = Vec::new();
        let mut elems: Vec<(usize, i32, SVec<F>)> = Vec::new();
        let mut index: HashMap<(usize, i32), Vec<usize>> = HashMap::new();
        for x in 0..n {
            for deg in (-d..=0).rev() {
                for v in &blocks[x].basis[&deg] {
                    index.entry((x, deg)).or_default().push(cells.len());
                    cells.push(Cell { degree: deg, vertex: x });
                    elems.push((x, deg, v.clone()));
                }
            }
        }
        let global = |x: usize, deg: i32, c: SVec<F>| match index.get(&(x, deg)) {
            Some(ix) => c.remap(|k| Some(ix[k])),
            None => SVec::new(),
        };
        let diff = elems
            .iter()
            .map(|(x, deg, v)| {
                if *deg == 0 {
                    return SVec::new();
                }
                let dv = hcs[*x].d_vec(*deg, v);
                global(*x, deg + 1, blocks[*x].coords(deg + 1, &dv))
            })
            .collect();
        let act = elems
            .iter()
            .map(|(x, p, v)| {
                let phi = hcs[*x].to_imgs(*p, v);
                self.gamma.from[*x]
                    .iter()
                    .map(|&a| {
                        let g = &self.maps[a];
                        let deg = p + g.degree;
                        if deg < -d {
                            return SVec::new();
                        }
                        let y = g.dst;
                        let imgs: Vec<SVec<F>> =
                            phi.iter().map(|m| self.res[*x].f.apply(&g.imgs, self.res[y].f.module(), m)).collect();
                        let w = hcs[y].from_imgs(deg, &imgs);
                        global(y, deg, blocks[y].coords(deg, &w)).scale(&F::sign((p * g.degree) as i64))
                    })
                    .collect()
            })
            .collect();
        DgModule::new(self.gamma.clone(), cells, diff, act)
    }

    /// The functor to Γ-modules on an object: `τ_{>-d} τ_{≤0} Hom(N, M)`.
    pub fn f_m(&self, n: &Obj<F>) -> Result<Obj<F>, PvdError> {
        let r = complete_resolution(n)?;
        let m = self.hom_module(&r.f);
        PvdObject::from_module(&m, self.d)
    }

    pub fn projective(&self, x: usize) -> Obj<F> {
        PvdObject::projective(&self.gamma, x, self.d)
    }
}

/// Topological order of the AR quiver (arrows and translation), ties broken by
/// knitting order.
pub fn ar_order<F: Field>(q: &ArQuiver<F>) -> Vec<usize> {
    let n = q.vertices.len();
    let mut edges: Vec<(usize, usize)> = q.arrows.iter().map(|a| (a.src, a.dst)).collect();
    edges.extend(q.meshes.iter().map(|m| (m.start, m.end)));
    let mut indeg = vec![0usize; n];
    for &(_, t) in &edges {
        indeg[t] += 1;
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        out.push(v);
        for &(s, t) in &edges {
            if s == v {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.insert(t);
                }
            }
        }
    }
    assert_eq!(out.len(), n, "AR quivers of representation-finite categories are acyclic");
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    LambdaToGamma,
    GammaToLambda,
}

pub const FINGERPRINT_LIMITATION: &str =
    "evidence by cohomology fingerprints; quasi-isomorphism and Morita equivalence are not decided";

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceCertificate {
    pub direction: Direction,
    pub d: i32,
    pub input_vertices: usize,
    pub input_cohomology: BTreeMap<i32, usize>,
    pub output_vertices: usize,
    pub output_cohomology: BTreeMap<i32, usize>,
    /// Cohomology fingerprints of the knitted indecomposables, in output vertex order.
    pub census: Vec<Vec<Vec<usize>>>,
    pub auslander: AuslanderCertificate,
    /// Each AR conflation `L → E → N` gives a conflation `P_N → P_E → rad P_L` over Γ.
    pub mesh_conflations: Option<bool>,
    /// The modules `Hom(P_v, P)` are exactly the knitted indecomposables over the output.
    pub generator_census: Option<bool>,
    pub limitation: &'static str,
}

pub struct Correspondence<F> {
    /// AR quiver of the module side (`Λ` forwards, `Λ′` backwards).
    pub ar: ArQuiver<F>,
    /// Forwards: the AR vertex behind each vertex of Γ. Backwards: the Γ vertex
    /// behind each vertex of `Λ′`.
    pub order: Vec<usize>,
    pub end: EndAlgebra<F>,
    /// Forwards: each AR arrow as a degree-0 element of Γ.
    pub arrow_elems: Vec<SVec<F>>,
    pub certificate: CorrespondenceCertificate,
}

fn total_cohomology<F: Field>(alg: &Alg<F>) -> BTreeMap<i32, usize> {
    DgModule::regular(alg).cohomology_dims()
}

pub fn lambda_to_gamma<F: Field>(alg: &Alg<F>, d: i32, max_objects: usize) -> Result<Correspondence<F>, CorrError> {
    let ar = knit(alg, d, max_objects)?;
    if ar.status != KnitStatus::Complete {
        return Err(CorrError::Incomplete(ar.vertices.len()));
    }
    let order = ar_order(&ar);
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let objects: Vec<Obj<F>> = order.iter().map(|&v| ar.vertices[v].obj.clone()).collect();
    let end = end_algebra(&objects, d)?;
    let arrow_elems: Vec<SVec<F>> = ar.arrows.iter().map(|a| end.element_of(pos[a.src], pos[a.dst], &a.map)).collect();

    let mut meshes_ok = true;
    for m in &ar.meshes {
        let (l, nn) = (pos[m.start], pos[m.end]);
        let pn = end.projective(nn);
        let parts: Vec<Obj<F>> = m.out_of_middle.iter().map(|&a| end.projective(pos[ar.arrows[a].src])).collect();
        let (sum, incl, _) = direct_sum(&end.gamma, d, &parts);
        let comps: Vec<Mor<F>> = m
            .out_of_middle
            .iter()
            .zip(&parts)
            .map(|(&a, p)| Mor::new(&pn, p, vec![p.pres.elem(0, &arrow_elems[a])]))
            .collect();
        let phi = into_sum(&pn, &sum, &incl, &comps);
        let (c, _) = cone(&phi)?;
        let (r, _) = rad(&end.projective(l));
        meshes_ok &= is_isomorphic(&c, &r)?;
    }

    let auslander = is_auslander(&end.gamma, d);
    let certificate = CorrespondenceCertificate {
        direction: Direction::LambdaToGamma,
        d,
        input_vertices: alg.n_vertices(),
        input_cohomology: total_cohomology(alg),
        output_vertices: end.gamma.n_vertices(),
        output_cohomology: total_cohomology(&end.gamma),
        census: objects.iter().map(crate::arknit::fingerprint).collect(),
        auslander,
        mesh_conflations: Some(meshes_ok),
        generator_census: None,
        limitation: FINGERPRINT_LIMITATION,
    };
    Ok(Correspondence { ar, order, end, arrow_elems, certificate })
}

/// One projective per vertex whose projective is also injective.
pub fn projinj_generator<F: Field>(gamma: &Alg<F>, d: i32) -> Result<(Vec<usize>, Vec<Obj<F>>), CorrError> {
    let pv = projinj_vertices(gamma, d);
    if pv.is_empty() {
        return Err(CorrError::NoProjectiveInjective);
    }
    let objs = pv.iter().map(|&v| PvdObject::projective(gamma, v, d)).collect();
    Ok((pv, objs))
}

pub fn gamma_to_lambda<F: Field>(gamma: &Alg<F>, d: i32, max_objects: usize) -> Result<Correspondence<F>, CorrError> {
    let auslander = is_auslander(gamma, d);
    if !auslander.is_auslander {
        return Err(CorrError::NotAuslander(Box::new(auslander)));
    }
    let (pv, objs) = projinj_generator(gamma, d)?;
    let end = end_algebra(&objs, d)?;
    let ar = knit(&end.gamma, d, max_objects)?;
    if ar.status != KnitStatus::Complete {
        return Err(CorrError::Incomplete(ar.vertices.len()));
    }
    // Hom(P_v, P) for every vertex v of Γ, matched against the knitted census.
    let mut images = Vec::new();
    for v in 0..gamma.n_vertices() {
        let m = end.hom_module(&Semifree::stalk(gamma, v, 0));
        images.push(PvdObject::from_module(&m, d)?);
    }
    let mut hit = vec![false; ar.vertices.len()];
    let mut census_ok = images.len() == ar.vertices.len();
    for x in &images {
        match ar.vertices.iter().position(|v| find_iso(&v.obj, x).is_some()) {
            Some(i) if !hit[i] => hit[i] = true,
            _ => census_ok = false,
        }
    }
    let certificate = CorrespondenceCertificate {
        direction: Direction::GammaToLambda,
        d,
        input_vertices: gamma.n_vertices(),
        input_cohomology: total_cohomology(gamma),
        output_vertices: end.gamma.n_vertices(),
        output_cohomology: total_cohomology(&end.gamma),
        census: ar.vertices.iter().map(|v| crate::arknit::fingerprint(&v.obj)).collect(),
        auslander,
        mesh_conflations: None,
        generator_census: Some(census_ok),
        limitation: FINGERPRINT_LIMITATION,
    };
    Ok(Correspondence { ar, order: pv, end, arrow_elems: vec![], certificate })
}

/// The DG quiver with the AR arrows in degree 0 and one degree −1 arrow per
/// mesh, `d(h) = Σ g_i∘f_i` written as paths `f_i g_i`.
pub struct DgQuiverPresentation<F> {
    pub quiver: DgQuiver<F>,
    /// AR vertex behind each quiver vertex.
    pub vertex_of: Vec<usize>,
    /// AR arrow behind each degree-0 arrow; the mesh arrows come after these.
    pub arrow_of: Vec<usize>,
    /// Mesh behind each degree −1 arrow.
    pub mesh_of: Vec<usize>,
}

pub fn dg_quiver_presentation<F: Field>(q: &ArQuiver<F>) -> Result<DgQuiverPresentation<F>, CorrError> {
    if q.status != KnitStatus::Complete {
        return Err(CorrError::Incomplete(q.vertices.len()));
    }
    let order = ar_order(q);
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut arrow_of: Vec<usize> = (0..q.arrows.len()).collect();
    arrow_of.sort_by_key(|&a| (pos[q.arrows[a].src], pos[q.arrows[a].dst], a));
    let mut quiver_arrow = vec![0; q.arrows.len()];
    for (k, &a) in arrow_of.iter().enumerate() {
        quiver_arrow[a] = k;
    }
    let mut mesh_of: Vec<usize> = (0..q.meshes.len()).collect();
    mesh_of.sort_by_key(|&m| pos[q.meshes[m].end]);

    let mut arrows: Vec<Arrow> = arrow_of
        .iter()
        .enumerate()
        .map(|(k, &a)| Arrow {
            name: format!("a{}", k + 1),
            source: pos[q.arrows[a].src],
            target: pos[q.arrows[a].dst],
            degree: 0,
        })
        .collect();
    let mut differential = Vec::new();
    for (k, &m) in mesh_of.iter().enumerate() {
        let mesh = &q.meshes[m];
        differential.push((
            arrows.len(),
            mesh.into_middle
                .iter()
                .zip(&mesh.out_of_middle)
                .map(|(&f, &g)| (F::one(), vec![quiver_arrow[f], quiver_arrow[g]]))
                .collect(),
        ));
        arrows.push(Arrow { name: format!("h{}", k + 1), source: pos[mesh.start], target: pos[mesh.end], degree: -1 });
    }
    let quiver = DgQuiver { vertices: (1..=order.len()).map(|i| i.to_string()).collect(), arrows, differential };
    DgAlgebra::build(&quiver).map_err(|e| PvdError::Input(format!("presentation failed validation: {e}")))?;
    Ok(DgQuiverPresentation { quiver, vertex_of: order, arrow_of, mesh_of })
}

/// `H^0(e_x A e_y)` of a non-positively graded algebra, in algebra coordinates.
fn h0_cell<F: Field>(alg: &DgAlgebra<F>, x: usize, y: usize) -> CohomologyCell<F> {
    let block: Vec<usize> = alg.from[x].iter().copied().filter(|&b| alg.basis[b].target == y).collect();
    let z: Vec<SVec<F>> = block.iter().filter(|&&b| alg.deg(b) == 0).map(|&b| SVec::unit(b)).collect();
    let bound = Echelon::from_vectors(block.iter().filter(|&&b| alg.deg(b) == -1).map(|&b| &alg.diff[b]));
    CohomologyCell::new(bound, z)
}

/// Whether sending vertex `v` to `sigma[v]` and each degree-0 arrow `a` to
/// `imgs[a]` induces an isomorphism `H^0(src) → H^0(tgt)`. `src` must come from a quiver.
pub fn h0_map_is_iso<F: Field>(src: &DgAlgebra<F>, tgt: &DgAlgebra<F>, sigma: &[usize], imgs: &[Option<SVec<F>>]) -> bool {
    let Some(paths) = src.paths.as_ref() else { return false };
    let n = src.n_vertices();
    if tgt.n_vertices() != n {
        return false;
    }
    let image = |b: usize| -> Option<SVec<F>> {
        let p = &paths[b];
        if p.is_empty() {
            return Some(SVec::unit(tgt.idem[sigma[src.basis[b].source]]));
        }
        let mut acc = imgs[p[0]].clone()?;
        for &a in &p[1..] {
            acc = tgt.mul_elems(&acc, imgs[a].as_ref()?);
        }
        Some(acc)
    };
    let image_of = |v: &SVec<F>| -> Option<SVec<F>> {
        let mut out = SVec::new();
        for (b, c) in &v.e {
            out = out.axpy(c, &image(*b)?);
        }
        Some(out)
    };
    for x in 0..n {
        for y in 0..n {
            let (cs, ct) = (h0_cell(src, x, y), h0_cell(tgt, sigma[x], sigma[y]));
            if cs.reps.len() != ct.reps.len() {
                return false;
            }
            let block: Vec<usize> = src.from[x].iter().copied().filter(|&b| src.basis[b].target == y).collect();
            // Boundaries go to boundaries.
            for &b in block.iter().filter(|&&b| src.deg(b) == -1) {
                match image_of(&src.diff[b]).and_then(|v| ct.coords(&v)) {
                    Some(c) if c.is_zero() => {}
                    _ => return false,
                }
            }
            let mut span = Echelon::new();
            for &b in block.iter().filter(|&&b| src.deg(b) == 0) {
                match image(b).and_then(|v| ct.coords(&v)) {
                    Some(c) => {
                        span.insert(c);
                    }
                    None => return false,
                }
            }
            if span.rank() != ct.reps.len() {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    pub gamma_cohomology: BTreeMap<i32, usize>,
    pub quiver_cohomology: BTreeMap<i32, usize>,
    pub h0_isomorphic: bool,
    pub fingerprint_equal: bool,
    pub divergence: Option<String>,
    pub limitation: &'static str,
}

/// Compare Γ with a presentation knitted from the same AR quiver: cohomology
/// dimensions in `(-d, 0]` and `H^0` via the map sending arrows to their maps.
pub fn compare_presentation<F: Field>(c: &Correspondence<F>, p: &DgQuiverPresentation<F>) -> Result<PresentationReport, CorrError> {
    let d = c.end.d;
    let kq = DgAlgebra::build(&p.quiver).map_err(|e| PvdError::Input(e.to_string()))?;
    let window = |m: BTreeMap<i32, usize>| -> BTreeMap<i32, usize> { m.into_iter().filter(|(i, _)| *i > -d && *i <= 0).collect() };
    let gd = window(total_cohomology(&c.end.gamma));
    let qd = window(DgModule::regular(&Arc::new(kq.clone())).cohomology_dims());
    let mut pos = vec![0; c.order.len()];
    for (i, &v) in c.order.iter().enumerate() {
        pos[v] = i;
    }
    let sigma: Vec<usize> = p.vertex_of.iter().map(|&v| pos[v]).collect();
    let mut imgs: Vec<Option<SVec<F>>> = p.arrow_of.iter().map(|&a| Some(c.arrow_elems[a].clone())).collect();
    imgs.resize(p.quiver.arrows.len(), None);
    let iso = h0_map_is_iso(&kq, &c.end.gamma, &sigma, &imgs);
    let divergence = if gd != qd {
        let i = (-d + 1..=0).find(|i| gd.get(i) != qd.get(i)).unwrap_or(0);
        Some(format!(
            "dim H^{i}: {} for the endomorphism algebra, {} for the quiver",
            gd.get(&i).copied().unwrap_or(0),
            qd.get(&i).copied().unwrap_or(0)
        ))
    } else if !iso {
        Some("H^0 algebras are not isomorphic under the arrow map".into())
    } else {
        None
    };
    Ok(PresentationReport {
        fingerprint_equal: divergence.is_none(),
        gamma_cohomology: gd,
        quiver_cohomology: qd,
        h0_isomorphic: iso,
        divergence,
        limitation: FINGERPRINT_LIMITATION,
    })
}

/// `dim H^i(e_x A e_y)` for all `x`, `y`.
fn block_profile<F: Field>(alg: &Alg<F>) -> Vec<Vec<BTreeMap<i32, usize>>> {
    let n = alg.n_vertices();
    (0..n)
        .map(|x| {
            let cv = DgModule::projective(alg, x).cohomology_vector();
            (0..n).map(|y| cv.iter().filter(|(_, v)| v[y] > 0).map(|(&i, v)| (i, v[y])).collect()).collect()
        })
        .collect()
}

/// All vertex bijections matching the graded block dimensions.
fn profile_bijections<F: Field>(a: &Alg<F>, b: &Alg<F>, limit: usize) -> Vec<Vec<usize>> {
    let (pa, pb) = (block_profile(a), block_profile(b));
    let n = pa.len();
    let mut out = Vec::new();
    if pb.len() != n {
        return out;
    }
    fn go(
        i: usize,
        pa: &[Vec<BTreeMap<i32, usize>>],
        pb: &[Vec<BTreeMap<i32, usize>>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if i == pa.len() {
            out.push(map.clone());
            return;
        }
        for j in 0..pa.len() {
            if used[j] {
                continue;
            }
            map.push(j);
            if (0..=i).all(|k| pa[i][k] == pb[j][map[k]] && pa[k][i] == pb[map[k]][j]) {
                used[j] = true;
                go(i + 1, pa, pb, map, used, out, limit);
                used[j] = false;
            }
            map.pop();
        }
    }
    go(0, &pa, &pb, &mut Vec::new(), &mut vec![false; n], &mut out, limit);
    out
}

const ISO_SEARCH_LIMIT: usize = 4096;

/// Search arrow images for an `H^0` isomorphism `src → tgt` along `sigma`.
/// Each degree-0 arrow goes to a 0/1 combination of cohomology representatives.
pub fn find_h0_iso<F: Field>(src: &DgAlgebra<F>, tgt: &DgAlgebra<F>, sigma: &[usize], arrows: &[Arrow]) -> Option<Vec<Option<SVec<F>>>> {
    let mut options: Vec<Vec<Option<SVec<F>>>> = Vec::new();
    for a in arrows {
        if a.degree != 0 {
            options.push(vec![None]);
            continue;
        }
        let reps = h0_cell(tgt, sigma[a.source], sigma[a.target]).reps;
        let k = reps.len().min(4);
        let mut opts = Vec::new();
        for mask in 1u32..(1 << k) {
            let mut v = SVec::new();
            for (i, r) in reps.iter().enumerate().take(k) {
                if mask & (1 << i) != 0 {
                    v = v.add(r);
                }
            }
            opts.push(Some(v));
        }
        if opts.is_empty() {
            return None;
        }
        options.push(opts);
    }
    let mut idx = vec![0usize; options.len()];
    for _ in 0..ISO_SEARCH_LIMIT {
        let imgs: Vec<Option<SVec<F>>> = idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect();
        if h0_map_is_iso(src, tgt, sigma, &imgs) {
            return Some(imgs);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripCertificate {
    pub d: i32,
    pub forward: CorrespondenceCertificate,
    pub backward: CorrespondenceCertificate,
    /// Vertex `v` of the input goes to `vertex_bijection[v]` of the output.
    pub vertex_bijection: Option<Vec<usize>>,
    pub graded_homs_match: bool,
    pub h0_isomorphic: bool,
    /// Knitted vertex `i` of the input goes to vertex `ar_isomorphism[i]` of the output.
    pub ar_isomorphism: Option<Vec<usize>>,
    pub passed: bool,
    pub divergence: Option<String>,
    pub limitation: &'static str,
}

/// Relabel the vertices of the underlying algebra inside the fingerprints.
fn relabel(t: &TranslationQuiver, sigma: &[usize]) -> TranslationQuiver {
    let mut t = t.clone();
    for v in &mut t.vertices {
        for row in &mut v.h {
            let mut new = vec![0; row.len()];
            for (i, &x) in row.iter().enumerate() {
                new[sigma[i]] = x;
            }
            *row = new;
        }
    }
    t
}

/// `Λ → Γ → Λ′`, then the three-part fingerprint between `Λ` and `Λ′`.
pub fn roundtrip_check<F: Field>(q: &DgQuiver<F>, d: i32, max_objects: usize) -> Result<RoundtripCertificate, CorrError> {
    let lam = DgAlgebra::build(q).map_err(|e| PvdError::Input(e.to_string()))?;
    let alg = Arc::new(lam.clone());
    let fwd = lambda_to_gamma(&alg, d, max_objects)?;
    let bwd = gamma_to_lambda(&fwd.end.gamma, d, max_objects)?;
    let lam2 = &bwd.end.gamma;
    let sigmas = profile_bijections(&alg, lam2, 64);
    let ta = fwd.ar.translation_quiver();
    let tb = bwd.ar.translation_quiver();
    let mut best: (Option<Vec<usize>>, bool, Option<Vec<usize>>) = (sigmas.first().cloned(), false, None);
    for s in &sigmas {
        let h0 = find_h0_iso(&lam, lam2, s, &q.arrows).is_some();
        let ar = relabel(&ta, s).isomorphism(&tb);
        let done = h0 && ar.is_some();
        if done || (h0 && !best.1) {
            best = (Some(s.clone()), h0, ar);
        }
        if done {
            break;
        }
    }
    let (vertex_bijection, h0_isomorphic, ar_isomorphism) = best;
    let graded = vertex_bijection.is_some();
    let divergence = if !graded {
        Some("no vertex bijection matches the graded Hom dimensions between projectives".to_string())
    } else if !h0_isomorphic {
        Some("no H^0 algebra isomorphism found".into())
    } else if ar_isomorphism.is_none() {
        Some("AR quivers are not isomorphic as translation quivers".into())
    } else {
        None
    };
    Ok(RoundtripCertificate {
        d,
        forward: fwd.certificate,
        backward: bwd.certificate,
        passed: divergence.is_none(),
        vertex_bijection,
        graded_homs_match: graded,
        h0_isomorphic,
        ar_isomorphism,
        divergence,
        limitation: FINGERPRINT_LIMITATION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::extmod::{is_injective, is_projective};
    use crate::pvd::hom_dim;
    use crate::Rational;

    type Q = Rational;

    fn alg(q: DgQuiver<Q>) -> Alg<Q> {
        Arc::new(DgAlgebra::build(&q).unwrap())
    }

    #[test]
    fn a2_d2_gamma_dimensions_match_hom_census() {
        let a = alg(corpus::a2());
        let c = lambda_to_gamma(&a, 2, 50).unwrap();
        let objs = &c.end.objects;
        let h0: usize = objs.iter().flat_map(|x| objs.iter().map(move |y| hom_dim(x, y, 0))).sum();
        let h1: usize = objs.iter().flat_map(|x| objs.iter().map(move |y| hom_dim(x, y, -1))).sum();
        assert_eq!((h0, h1), (11, 5));
        let dims = total_cohomology(&c.end.gamma);
        assert_eq!(dims.get(&0), Some(&11));
        assert_eq!(dims.get(&-1), Some(&5));
        assert!(c.certificate.auslander.is_auslander);
        assert_eq!(c.certificate.mesh_conflations, Some(true));
    }

    #[test]
    fn functor_sends_generator_summands_to_projectives() {
        let a = alg(corpus::a2());
        let c = lambda_to_gamma(&a, 2, 50).unwrap();
        for (x, o) in c.end.objects.iter().enumerate() {
            let fx = c.end.f_m(o).unwrap();
            assert!(is_projective(&fx));
            assert!(find_iso(&fx, &c.end.projective(x)).is_some());
        }
        // The functor is contravariant: projectives go to projective-injectives.
        for v in 0..a.n_vertices() {
            let fp = c.end.f_m(&PvdObject::projective(&a, v, 2)).unwrap();
            assert!(is_projective(&fp) && is_injective(&fp).unwrap());
            let fi = c.end.f_m(&PvdObject::injective(&a, v, 2)).unwrap();
            assert!(!is_injective(&fi).unwrap());
        }
    }

    #[test]
    fn presentation_of_a2_d2() {
        let a = alg(corpus::a2());
        let c = lambda_to_gamma(&a, 2, 50).unwrap();
        let p = dg_quiver_presentation(&c.ar).unwrap();
        let deg = |k: i32| p.quiver.arrows.iter().filter(|a| a.degree == k).count();
        assert_eq!((p.quiver.vertices.len(), deg(0), deg(-1)), (6, 5, 4));
        let r = compare_presentation(&c, &p).unwrap();
        assert!(r.fingerprint_equal, "{r:?}");

        let mut broken = p;
        broken.quiver.differential.remove(0);
        let r = compare_presentation(&c, &broken).unwrap();
        assert!(!r.fingerprint_equal);
        assert!(r.quiver_cohomology[&0] > r.gamma_cohomology[&0]);
    }

    #[test]
    fn roundtrip_a2_d1() {
        let r = roundtrip_check(&corpus::a2::<Q>(), 1, 50).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.forward.output_vertices, 3);
    }

    #[test]
    fn point_goes_to_point() {
        let r = roundtrip_check(&corpus::point::<Q>(), 1, 10).unwrap();
        assert!(r.passed);
        assert_eq!(r.forward.output_vertices, 1);
    }
}
