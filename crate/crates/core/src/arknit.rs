//! Auslander–Reiten quivers by knitting from the projectives, with every mesh
//! certified a posteriori, plus plain translation quivers for export and comparison.

use crate::algebra::Alg;
use crate::extmod::{corad, injectives, is_injective_among, is_projective, rad, Conflation};
use crate::field::Field;
use crate::linalg::{Echelon, SVec};
use crate::semifree::{Gen, Semifree};
use crate::pvd::{
    cone, decompose, direct_sum, find_iso, into_sum, is_indecomposable, HomSpace, Mor, Obj, PvdError,
    PvdObject,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `rad P → P` for an indecomposable projective.
pub fn sink_map_projective<F: Field>(p: &Obj<F>) -> Result<Mor<F>, PvdError> {
    if !is_projective(p) || !is_indecomposable(p) {
        return Err(PvdError::Input("sink maps need an indecomposable projective".into()));
    }
    Ok(rad(p).1)
}

/// `I → corad I` for an indecomposable injective.
pub fn source_map_injective<F: Field>(i: &Obj<F>) -> Result<Mor<F>, PvdError> {
    if !is_indecomposable(i) || !is_injective_among(i, &injectives(&i.alg, i.d))? {
        return Err(PvdError::Input("source maps need an indecomposable injective".into()));
    }
    Ok(corad(i).1)
}

pub struct ArVertex<F> {
    pub obj: Obj<F>,
    pub projective: bool,
    pub injective: bool,
}

/// An irreducible map between vertices; parallel arrows carry multiplicity.
#[derive(Clone)]
pub struct ArArrow<F> {
    pub src: usize,
    pub dst: usize,
    pub map: Mor<F>,
}

/// The AR conflation `start → ⊕ middle → end`, with the arrows it uses.
#[derive(Clone)]
pub struct Mesh<F> {
    pub start: usize,
    pub end: usize,
    /// Arrows `start → E_i`.
    pub into_middle: Vec<usize>,
    /// Arrows `E_i → end`, aligned with `into_middle`.
    pub out_of_middle: Vec<usize>,
    pub conflation: Conflation<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnitStatus {
    Complete,
    AbortedAtBound,
}

pub struct ArQuiver<F> {
    pub alg: Alg<F>,
    pub d: i32,
    pub vertices: Vec<ArVertex<F>>,
    pub arrows: Vec<ArArrow<F>>,
    pub meshes: Vec<Mesh<F>>,
    pub status: KnitStatus,
}

impl<F: Field> ArQuiver<F> {
    pub fn objects(&self) -> Vec<Obj<F>> {
        self.vertices.iter().map(|v| v.obj.clone()).collect()
    }

    pub fn mesh_ending_at(&self, v: usize) -> Option<&Mesh<F>> {
        self.meshes.iter().find(|m| m.end == v)
    }

    pub fn mesh_starting_at(&self, v: usize) -> Option<&Mesh<F>> {
        self.meshes.iter().find(|m| m.start == v)
    }

    /// Projectives are exactly the vertices without incoming mesh, injectives
    /// exactly those without outgoing mesh.
    pub fn boundary_consistent(&self) -> bool {
        self.vertices.iter().enumerate().all(|(i, v)| {
            v.projective == self.mesh_ending_at(i).is_none() && v.injective == self.mesh_starting_at(i).is_none()
        })
    }

    pub fn translation_quiver(&self) -> TranslationQuiver {
        TranslationQuiver::from_ar(self)
    }
}

struct Knitter<F: Field> {
    q: ArQuiver<F>,
    inj: Vec<Obj<F>>,
    /// Incoming arrows known: projective, or end of a recorded mesh.
    in_known: Vec<bool>,
    /// Mesh computed or vertex found injective.
    done: Vec<bool>,
}

impl<F: Field> Knitter<F> {
    /// Index of the vertex isomorphic to `x`, adding it if new, with an iso `vertex → x`.
    fn register(&mut self, x: &Obj<F>) -> Result<(usize, Mor<F>), PvdError> {
        for (i, v) in self.q.vertices.iter().enumerate() {
            if let Some(f) = find_iso(&v.obj, x) {
                return Ok((i, f));
            }
        }
        let projective = is_projective(x);
        let injective = is_injective_among(x, &self.inj)?;
        self.q.vertices.push(ArVertex { obj: x.clone(), projective, injective });
        self.in_known.push(projective);
        self.done.push(false);
        Ok((self.q.vertices.len() - 1, Mor::identity(x)))
    }

    fn ripe(&self, x: usize) -> bool {
        self.in_known[x] && self.q.arrows.iter().filter(|a| a.dst == x).all(|a| self.done[a.src])
    }

    /// Complete the mesh starting at `x`.
    fn knit_at(&mut self, x: usize) -> Result<(), PvdError> {
        self.done[x] = true;
        if self.q.vertices[x].injective {
            return Ok(());
        }
        let xo = self.q.vertices[x].obj.clone();
        let outs: Vec<usize> = (0..self.q.arrows.len()).filter(|&a| self.q.arrows[a].src == x).collect();
        // An empty middle term is allowed: `X → 0 → X[1]` can be almost split.
        let parts: Vec<Obj<F>> = outs.iter().map(|&a| self.q.vertices[self.q.arrows[a].dst].obj.clone()).collect();
        let comps: Vec<Mor<F>> = outs.iter().map(|&a| self.q.arrows[a].map.clone()).collect();
        let (e, incl, _) = direct_sum(&self.q.alg, self.q.d, &parts);
        let f = into_sum(&xo, &e, &incl, &comps);
        let (c, to_c) = cone(&f)?;
        if !is_indecomposable(&c) {
            return Err(PvdError::Input("assembled source map has a decomposable cone".into()));
        }
        let (z, iso) = self.register(&c)?;
        self.in_known[z] = true;
        // `iso: vertex → C`; transport `E → C` along its inverse.
        let inv = inverse_iso(&iso).expect("isomorphisms between indecomposables invert");
        let g = inv.after(&to_c);
        let mut out_of_middle = Vec::new();
        for k in 0..outs.len() {
            let gi = g.after(&incl[k]);
            self.q.arrows.push(ArArrow { src: self.q.arrows[outs[k]].dst, dst: z, map: gi });
            out_of_middle.push(self.q.arrows.len() - 1);
        }
        self.q.meshes.push(Mesh { start: x, end: z, into_middle: outs, out_of_middle, conflation: Conflation { f, g } });
        Ok(())
    }
}

/// Inverse of an isomorphism between indecomposables, found in `Hom(Y, X)`.
pub fn inverse_iso<F: Field>(f: &Mor<F>) -> Option<Mor<F>> {
    let h = HomSpace::new(&f.dst, &f.src);
    let e = f.src.end();
    let one = &e.one;
    let cols: Vec<SVec<F>> = h.basis.iter().map(|g| e.hom.coords(&g.after(f))).collect();
    let x = crate::linalg::solve_columns(&cols, one)?;
    Some(h.combine(&x))
}

/// Knit the AR quiver forward from the projectives, stopping after `max_objects` vertices.
pub fn knit<F: Field>(alg: &Alg<F>, d: i32, max_objects: usize) -> Result<ArQuiver<F>, PvdError> {
    if !alg.is_truncated(d) {
        return Err(PvdError::Input(format!("algebra is not {d}-truncated")));
    }
    let mut k = Knitter {
        q: ArQuiver { alg: alg.clone(), d, vertices: vec![], arrows: vec![], meshes: vec![], status: KnitStatus::Complete },
        inj: injectives(alg, d),
        in_known: vec![],
        done: vec![],
    };
    let projs: Vec<Obj<F>> = (0..alg.n_vertices()).map(|v| PvdObject::projective(alg, v, d)).collect();
    let mut pidx = Vec::new();
    for p in &projs {
        pidx.push(k.register(p)?.0);
    }
    for (p, &pi) in projs.iter().zip(&pidx) {
        let (_, inc) = rad(p);
        let p_obj = k.q.vertices[pi].obj.clone();
        // `p` was registered as itself unless two projectives coincide.
        let inc = if std::sync::Arc::ptr_eq(&p_obj, p) {
            inc
        } else {
            find_iso(p, &p_obj).expect("registered projective").after(&inc)
        };
        for s in decompose(&inc.src)? {
            let (v, iso) = k.register(&s.obj)?;
            let map = inc.after(&s.incl).after(&iso);
            k.q.arrows.push(ArArrow { src: v, dst: pi, map });
        }
    }
    loop {
        if k.q.vertices.len() > max_objects {
            k.q.status = KnitStatus::AbortedAtBound;
            break;
        }
        match (0..k.q.vertices.len()).find(|&x| !k.done[x] && k.ripe(x)) {
            Some(x) => k.knit_at(x)?,
            None => {
                if k.done.iter().any(|&b| !b) {
                    k.q.status = KnitStatus::AbortedAtBound;
                }
                break;
            }
        }
    }
    Ok(k.q)
}

/// Whether `c` is an AR conflation relative to `census`: both ends indecomposable,
/// `g` not a retraction, and every non-retraction from a census object into the
/// end factors through `g`.
pub fn verify_ar_conflation<F: Field>(c: &Conflation<F>, census: &[Obj<F>]) -> bool {
    let (l, n) = (&c.f.src, &c.g.dst);
    if !is_indecomposable(l) || !is_indecomposable(n) || !c.is_valid() {
        return false;
    }
    let en = n.end();
    let Some(radn) = en.radical.as_ref() else { return false };
    // Image of g_*: Hom(V, E) → Hom(V, N).
    let image = |v: &Obj<F>| -> (HomSpace<F>, Echelon<F>) {
        let hve = HomSpace::new(v, &c.g.src);
        let hvn = HomSpace::new(v, n);
        let img = Echelon::from_vectors(&hve.basis.iter().map(|h| hvn.coords(&c.g.after(h))).collect::<Vec<_>>());
        (hvn, img)
    };
    if image(n).1.contains(&en.one) {
        return false;
    }
    census.iter().all(|v| {
        let (hvn, img) = image(v);
        match find_iso(v, n) {
            None => hvn.basis.iter().all(|h| img.contains(&hvn.coords(h))),
            Some(phi) => radn.rows.iter().all(|r| {
                let h = en.hom.combine(r).after(&phi);
                img.contains(&hvn.coords(&h))
            }),
        }
    })
}

/// Indecomposables found by exhaustive search over small presentations.
pub struct OracleCensus<F> {
    /// At most `bound` generators in each shift.
    pub bound: usize,
    pub objects: Vec<Obj<F>>,
    /// Connected presentations examined.
    pub candidates: usize,
    /// False when the candidate limit cut the search short.
    pub complete: bool,
}

impl<F: Field> OracleCensus<F> {
    /// Census objects with no isomorphic vertex in `q`, and vertices of `q` missing here.
    pub fn compare(&self, q: &ArQuiver<F>) -> (Vec<usize>, Vec<usize>) {
        let objs = q.objects();
        let extra = (0..self.objects.len()).filter(|&i| !objs.iter().any(|o| find_iso(o, &self.objects[i]).is_some())).collect();
        let missing = (0..objs.len()).filter(|&i| !self.objects.iter().any(|o| find_iso(o, &objs[i]).is_some())).collect();
        (extra, missing)
    }
}

pub const CENSUS_CANDIDATE_LIMIT: usize = 400_000;

/// Enumerate complexes of projectives with generators in shifts `0..=d`, at most
/// `bound` per shift, shift by shift: each new generator's differential is a
/// cohomology class of the part built so far, with coordinates in `{-1, 0, 1}`
/// (first nonzero coordinate `1`). Disconnected complexes are skipped since
/// their summands occur with fewer generators.
pub fn brute_force_census<F: Field>(alg: &Alg<F>, d: i32, bound: usize) -> Result<OracleCensus<F>, PvdError> {
    brute_force_census_limited(alg, d, bound, CENSUS_CANDIDATE_LIMIT)
}

pub fn brute_force_census_limited<F: Field>(
    alg: &Alg<F>,
    d: i32,
    bound: usize,
    limit: usize,
) -> Result<OracleCensus<F>, PvdError> {
    let mut leaves = Vec::new();
    let complete = enumerate_level(alg, d, bound, limit, Semifree::zero(alg), 0, &mut leaves);
    let candidates = leaves.len();
    let work = |f: &Semifree<F>| -> Result<Vec<Obj<F>>, PvdError> {
        let (x, _) = f.module().tau_gt(-d);
        if x.is_acyclic() {
            return Ok(vec![]);
        }
        let o = PvdObject::from_module(&x, d)?;
        Ok(decompose(&o)?.into_iter().map(|s| s.obj).collect())
    };
    #[cfg(feature = "parallel")]
    let found: Vec<Result<Vec<Obj<F>>, PvdError>> = {
        use rayon::prelude::*;
        leaves.par_iter().map(work).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let found: Vec<Result<Vec<Obj<F>>, PvdError>> = leaves.iter().map(work).collect();
    let mut buckets: BTreeMap<(Vec<Vec<usize>>, Vec<Gen>), Vec<Obj<F>>> = BTreeMap::new();
    let mut objects = Vec::new();
    for r in found {
        for o in r? {
            let b = buckets.entry((fingerprint(&o), o.generator_profile())).or_default();
            if !b.iter().any(|y| find_iso(y, &o).is_some()) {
                b.push(o.clone());
                objects.push(o);
            }
        }
    }
    Ok(OracleCensus { bound, objects, candidates, complete })
}

fn class_choices(dim: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|v| [-1, 0, 1].map(|c| [v.clone(), vec![c]].concat())).collect();
    }
    out.retain(|v| v.iter().find(|&&c| c != 0).is_none_or(|&c| c == 1));
    out
}

/// Returns false when the limit was hit.
fn enumerate_level<F: Field>(
    alg: &Alg<F>,
    d: i32,
    bound: usize,
    limit: usize,
    f: Semifree<F>,
    s: i32,
    leaves: &mut Vec<Semifree<F>>,
) -> bool {
    if s > d {
        if f.rank() > 0 && connected(&f) {
            if leaves.len() >= limit {
                return false;
            }
            leaves.push(f);
        }
        return true;
    }
    // Options: (vertex, differential as a module element).
    let m = f.module().clone();
    let mut options: Vec<(usize, SVec<F>)> = Vec::new();
    for v in 0..alg.n_vertices() {
        let cell = crate::module::CohomologyCell::new(m.boundaries(1 - s, v), m.cocycles(1 - s, v));
        for c in class_choices(cell.reps.len()) {
            let mut z = SVec::new();
            for (r, x) in cell.reps.iter().zip(&c) {
                z = z.axpy(&F::from_i64(*x), r);
            }
            options.push((v, z));
        }
    }
    // Multisets of options of size at most `bound`, as non-decreasing index lists.
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(pick) = stack.pop() {
        let mut gens = f.gens.clone();
        let mut cols = f.d.clone();
        for &o in &pick {
            let (v, z) = &options[o];
            gens.push(Gen { vertex: *v, shift: s });
            cols.push(f.split(z).into_iter().collect());
        }
        if !enumerate_level(alg, d, bound, limit, Semifree::new(alg.clone(), gens, cols), s + 1, leaves) {
            return false;
        }
        if pick.len() < bound {
            let from = pick.last().copied().unwrap_or(0);
            for o in (from..options.len()).rev() {
                stack.push([pick.clone(), vec![o]].concat());
            }
        }
    }
    true
}

fn connected<F: Field>(f: &Semifree<F>) -> bool {
    let n = f.rank();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut Vec<usize>, mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (j, col) in f.d.iter().enumerate() {
        for (k, _) in col {
            let (a, b) = (root(&mut parent, j), root(&mut parent, *k));
            parent[a] = b;
        }
    }
    (0..n).all(|x| root(&mut parent, x) == root(&mut parent, 0))
}

/// A translation quiver with cohomology fingerprints, as exported and compared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationQuiver {
    pub d: i32,
    pub vertices: Vec<QuiverVertex>,
    /// Parallel arrows are listed repeatedly.
    pub arrows: Vec<(usize, usize)>,
    /// `(start, end)` with `start = τ end`.
    pub meshes: Vec<(usize, usize)>,
    pub status: KnitStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuiverVertex {
    /// `h[i][v] = dim H^{-i} e_v` for `0 <= i < d`.
    pub h: Vec<Vec<usize>>,
    pub projective: bool,
    pub injective: bool,
}

pub fn fingerprint<F: Field>(x: &Obj<F>) -> Vec<Vec<usize>> {
    let cv = x.cohomology_vector();
    let n = x.alg.n_vertices();
    (0..x.d).map(|i| cv.get(&-i).cloned().unwrap_or_else(|| vec![0; n])).collect()
}

impl TranslationQuiver {
    /// Deterministic order: by fingerprint, then by knitting order.
    fn from_ar<F: Field>(q: &ArQuiver<F>) -> Self {
        let mut keyed: Vec<(QuiverVertex, Vec<Gen>, usize)> = q
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let qv = QuiverVertex { h: fingerprint(&v.obj), projective: v.projective, injective: v.injective };
                (qv, v.obj.generator_profile(), i)
            })
            .collect();
        keyed.sort();
        let mut pos = vec![0; keyed.len()];
        for (new, k) in keyed.iter().enumerate() {
            pos[k.2] = new;
        }
        let mut arrows: Vec<(usize, usize)> = q.arrows.iter().map(|a| (pos[a.src], pos[a.dst])).collect();
        arrows.sort();
        let mut meshes: Vec<(usize, usize)> = q.meshes.iter().map(|m| (pos[m.start], pos[m.end])).collect();
        meshes.sort();
        TranslationQuiver { d: q.d, vertices: keyed.into_iter().map(|k| k.0).collect(), arrows, meshes, status: q.status }
    }

    /// A vertex bijection `self → other` preserving fingerprints, flags, arrows with
    /// multiplicity and the translation.
    pub fn isomorphism(&self, other: &TranslationQuiver) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        if n != other.vertices.len() || self.arrows.len() != other.arrows.len() || self.meshes.len() != other.meshes.len() {
            return None;
        }
        let count = |arrows: &[(usize, usize)]| {
            let mut m: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for a in arrows {
                *m.entry(*a).or_default() += 1;
            }
            m
        };
        let (ma, mb) = (count(&self.arrows), count(&other.arrows));
        let (ta, tb): (BTreeMap<usize, usize>, BTreeMap<usize, usize>) =
            (self.meshes.iter().map(|&(s, e)| (e, s)).collect(), other.meshes.iter().map(|&(s, e)| (e, s)).collect());
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            i: usize,
            a: &TranslationQuiver,
            b: &TranslationQuiver,
            ma: &BTreeMap<(usize, usize), usize>,
            mb: &BTreeMap<(usize, usize), usize>,
            ta: &BTreeMap<usize, usize>,
            tb: &BTreeMap<usize, usize>,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if i == map.len() {
                return true;
            }
            for j in 0..map.len() {
                if used[j] || a.vertices[i] != b.vertices[j] || ta.contains_key(&i) != tb.contains_key(&j) {
                    continue;
                }
                map[i] = j;
                let ok = (0..=i).all(|k| {
                    let mk = map[k];
                    ma.get(&(i, k)).copied().unwrap_or(0) == mb.get(&(j, mk)).copied().unwrap_or(0)
                        && ma.get(&(k, i)).copied().unwrap_or(0) == mb.get(&(mk, j)).copied().unwrap_or(0)
                        && match (ta.get(&i), ta.get(&k)) {
                            (Some(&s), _) if s <= i => tb.get(&j) == Some(&map[s]),
                            _ => true,
                        }
                        && match ta.get(&k) {
                            Some(&s) if s == i => tb.get(&mk) == Some(&j),
                            _ => true,
                        }
                });
                if ok {
                    used[j] = true;
                    if go(i + 1, a, b, ma, mb, ta, tb, map, used) {
                        return true;
                    }
                    used[j] = false;
                }
                map[i] = usize::MAX;
            }
            false
        }
        go(0, self, other, &ma, &mb, &ta, &tb, &mut map, &mut used).then_some(map)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Graphviz rendering: H^0 factors in black, lower degrees in red, τ dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph AR {\n  rankdir=LR;\n  node [shape=plaintext];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let mut lines = Vec::new();
            for (k, dims) in v.h.iter().enumerate() {
                let factors: Vec<String> = dims
                    .iter()
                    .enumerate()
                    .flat_map(|(x, &m)| std::iter::repeat((x + 1).to_string()).take(m))
                    .collect();
                if factors.is_empty() {
                    continue;
                }
                let text = factors.join(" ");
                lines.push(if k == 0 { text } else { format!("<FONT COLOR=\"red\">{text}</FONT>") });
            }
            let mut mark = String::new();
            if v.projective {
                mark.push_str(" P");
            }
            if v.injective {
                mark.push_str(" I");
            }
            s.push_str(&format!("  v{i} [label=<{}>, tooltip=\"{}\"];\n", lines.join("<BR/>"), mark.trim()));
        }
        for (a, b) in &self.arrows {
            s.push_str(&format!("  v{a} -> v{b};\n"));
        }
        for (a, b) in &self.meshes {
            s.push_str(&format!("  v{b} -> v{a} [style=dashed, constraint=false];\n"));
        }
        s.push_str("}\n");
        s
    }

    pub fn export(&self, format: &str) -> Result<String, PvdError> {
        match format {
            "dot" => Ok(self.to_dot()),
            "json" => Ok(self.to_json()),
            f => Err(PvdError::Input(format!("unknown export format {f}"))),
        }
    }
}
