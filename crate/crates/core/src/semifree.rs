//! Finite-rank semifree modules (complexes of projectives), their Hom complexes
//! into arbitrary DG modules, and minimal resolutions.

use crate::algebra::Alg;
use crate::field::Field;
use crate::linalg::{kernel_of_columns, Acc, Echelon, SVec};
use crate::module::{Cell, DgModule, LinMap};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

/// Generator `e_vertex Λ [shift]`, sitting in degree `-shift`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub vertex: usize,
    pub shift: i32,
}

impl Gen {
    pub fn degree(&self) -> i32 {
        -self.shift
    }
}

/// `d(g_j) = Σ_k g_k · c_kj`, stored per column `j` as `(k, c_kj)`.
#[derive(Clone)]
pub struct Semifree<F> {
    pub alg: Alg<F>,
    pub gens: Vec<Gen>,
    pub d: Vec<Vec<(usize, SVec<F>)>>,
    module: OnceLock<Arc<DgModule<F>>>,
}

impl<F: Field> Semifree<F> {
    pub fn new(alg: Alg<F>, gens: Vec<Gen>, d: Vec<Vec<(usize, SVec<F>)>>) -> Self {
        assert_eq!(gens.len(), d.len());
        Semifree { alg, gens, d, module: OnceLock::new() }
    }

    pub fn zero(alg: &Alg<F>) -> Self {
        Self::new(alg.clone(), vec![], vec![])
    }

    pub fn stalk(alg: &Alg<F>, vertex: usize, shift: i32) -> Self {
        Self::new(alg.clone(), vec![Gen { vertex, shift }], vec![vec![]])
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Offset of generator `j` in the module basis.
    pub fn offset(&self, j: usize) -> usize {
        self.gens[..j].iter().map(|g| self.alg.from[g.vertex].len()).sum()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut o = Vec::with_capacity(self.rank() + 1);
        let mut acc = 0;
        for g in &self.gens {
            o.push(acc);
            acc += self.alg.from[g.vertex].len();
        }
        o.push(acc);
        o
    }

    /// `g_j · x` in module coordinates.
    pub fn elem(&self, j: usize, x: &SVec<F>) -> SVec<F> {
        let o = self.offset(j);
        let v = self.gens[j].vertex;
        SVec::from_terms(
            x.e.iter()
                .filter(|(a, _)| self.alg.basis[*a].source == v)
                .map(|(a, c)| (o + self.alg.from_pos[*a], c.clone()))
                .collect(),
        )
    }

    pub fn gen_elem(&self, j: usize) -> SVec<F> {
        SVec::unit(self.offset(j))
    }

    /// Split a module element into `(generator, algebra element)` pieces.
    pub fn split(&self, m: &SVec<F>) -> BTreeMap<usize, SVec<F>> {
        let offs = self.offsets();
        let mut out: BTreeMap<usize, Vec<(usize, F)>> = BTreeMap::new();
        for (i, c) in &m.e {
            let j = offs.partition_point(|&o| o <= *i) - 1;
            let a = self.alg.from[self.gens[j].vertex][i - offs[j]];
            out.entry(j).or_default().push((a, c.clone()));
        }
        out.into_iter().map(|(j, t)| (j, SVec::from_terms(t))).collect()
    }

    pub fn module(&self) -> &Arc<DgModule<F>> {
        self.module.get_or_init(|| Arc::new(self.build_module()))
    }

    fn build_module(&self) -> DgModule<F> {
        let alg = &self.alg;
        let offs = self.offsets();
        let mut basis = Vec::new();
        let mut diff = Vec::new();
        let mut act = Vec::new();
        for (j, g) in self.gens.iter().enumerate() {
            let sign = F::sign(g.shift as i64);
            for &b in &alg.from[g.vertex] {
                basis.push(Cell { degree: alg.deg(b) - g.shift, vertex: alg.basis[b].target });
                let mut acc = Acc::new();
                for (k, c) in &self.d[j] {
                    let cb = alg.mul_elems(c, &SVec::unit(b));
                    let vk = self.gens[*k].vertex;
                    for (x, e) in &cb.e {
                        debug_assert_eq!(alg.basis[*x].source, vk);
                        acc.add_term(offs[*k] + alg.from_pos[*x], e.clone());
                    }
                }
                for (x, e) in &alg.diff[b].e {
                    acc.add_term(offs[j] + alg.from_pos[*x], sign.mul_ref(e));
                }
                diff.push(acc.finish());
                let row: Vec<SVec<F>> = alg.from[alg.basis[b].target]
                    .iter()
                    .map(|&a| {
                        alg.mul(b, a)
                            .map(|p| p.remap(|x| Some(offs[j] + alg.from_pos[x])))
                            .unwrap_or_default()
                    })
                    .collect();
                act.push(row);
            }
        }
        DgModule::new(alg.clone(), basis, diff, act)
    }

    /// Entry degrees, vertex blocks and d² = 0.
    pub fn validate(&self) -> Result<(), String> {
        for (j, col) in self.d.iter().enumerate() {
            for (k, c) in col {
                let (gk, gj) = (self.gens[*k], self.gens[j]);
                for (a, _) in &c.e {
                    let b = &self.alg.basis[*a];
                    if b.source != gk.vertex || b.target != gj.vertex {
                        return Err(format!("entry ({k},{j}) has wrong vertices"));
                    }
                    if b.degree != gk.shift - gj.shift + 1 {
                        return Err(format!("entry ({k},{j}) has wrong degree"));
                    }
                }
            }
        }
        self.module().validate().map_err(|e| e.0)
    }

    /// No entry has an idempotent component.
    pub fn is_minimal(&self) -> bool {
        self.d.iter().all(|col| col.iter().all(|(_, c)| c.e.iter().all(|(a, _)| !self.alg.basis[*a].idempotent)))
    }

    pub fn direct_sum(parts: &[&Semifree<F>]) -> Self {
        let alg = parts[0].alg.clone();
        let mut gens = Vec::new();
        let mut d = Vec::new();
        for p in parts {
            let o = gens.len();
            gens.extend(p.gens.iter().copied());
            d.extend(p.d.iter().map(|col| col.iter().map(|(k, c)| (k + o, c.clone())).collect::<Vec<_>>()));
        }
        Self::new(alg, gens, d)
    }

    pub fn shift(&self, n: i32) -> Self {
        let s = F::sign(n as i64);
        Self::new(
            self.alg.clone(),
            self.gens.iter().map(|g| Gen { vertex: g.vertex, shift: g.shift + n }).collect(),
            self.d.iter().map(|col| col.iter().map(|(k, c)| (*k, c.scale(&s))).collect()).collect(),
        )
    }

    pub fn max_shift(&self) -> Option<i32> {
        self.gens.iter().map(|g| g.shift).max()
    }

    /// Extend generator images to a linear map on the module basis.
    pub fn extend(&self, imgs: &[SVec<F>], target: &DgModule<F>) -> LinMap<F> {
        let mut out = Vec::new();
        for (j, g) in self.gens.iter().enumerate() {
            for &b in &self.alg.from[g.vertex] {
                out.push(target.act_elem(&imgs[j], &SVec::unit(b)));
            }
        }
        out
    }

    /// Apply a generator-image map to a module element.
    pub fn apply(&self, imgs: &[SVec<F>], target: &DgModule<F>, m: &SVec<F>) -> SVec<F> {
        let mut acc = Acc::new();
        for (j, x) in self.split(m) {
            acc.add_vec(&F::one(), &target.act_elem(&imgs[j], &x));
        }
        acc.finish()
    }

    /// Whether generator images define a chain map of the given degree.
    /// Uses `(dφ)(g_j) = d_N φ(g_j) - (-1)^n Σ φ(g_k) c_kj`.
    pub fn is_cocycle_map(&self, imgs: &[SVec<F>], target: &DgModule<F>, n: i32) -> bool {
        let s = F::sign(n as i64);
        (0..self.rank()).all(|j| {
            let mut v = target.d(&imgs[j]);
            for (k, c) in &self.d[j] {
                v = v.axpy(&-s.clone(), &target.act_elem(&imgs[*k], c));
            }
            v.is_zero()
        })
    }
}

/// Layout of `Hom^n(F, N)`: one coordinate per (generator, target basis element of matching cell).
#[derive(Clone, Debug)]
pub struct Layout {
    pub entries: Vec<(usize, usize)>,
    pub pos: HashMap<(usize, usize), usize>,
}

/// The Hom complex `Hom_Λ(F, N)` for semifree `F`.
pub struct HomComplex<'a, F> {
    pub src: &'a Semifree<F>,
    pub tgt: &'a DgModule<F>,
    layouts: std::cell::RefCell<BTreeMap<i32, Arc<Layout>>>,
    users: Vec<Vec<(usize, SVec<F>)>>,
}

impl<'a, F: Field> HomComplex<'a, F> {
    pub fn new(src: &'a Semifree<F>, tgt: &'a DgModule<F>) -> Self {
        let mut users = vec![Vec::new(); src.rank()];
        for (j, col) in src.d.iter().enumerate() {
            for (k, c) in col {
                users[*k].push((j, c.clone()));
            }
        }
        HomComplex { src, tgt, layouts: Default::default(), users }
    }

    pub fn layout(&self, n: i32) -> Arc<Layout> {
        if let Some(l) = self.layouts.borrow().get(&n) {
            return l.clone();
        }
        let mut entries = Vec::new();
        for (j, g) in self.src.gens.iter().enumerate() {
            for &i in self.tgt.cell(n - g.shift, g.vertex) {
                entries.push((j, i));
            }
        }
        let pos = entries.iter().enumerate().map(|(a, &e)| (e, a)).collect();
        let l = Arc::new(Layout { entries, pos });
        self.layouts.borrow_mut().insert(n, l.clone());
        l
    }

    pub fn dim(&self, n: i32) -> usize {
        self.layout(n).entries.len()
    }

    /// Coordinates → generator images.
    pub fn to_imgs(&self, n: i32, v: &SVec<F>) -> Vec<SVec<F>> {
        let l = self.layout(n);
        let mut per: Vec<Vec<(usize, F)>> = vec![Vec::new(); self.src.rank()];
        for (a, c) in &v.e {
            let (j, i) = l.entries[*a];
            per[j].push((i, c.clone()));
        }
        per.into_iter().map(SVec::from_terms).collect()
    }

    /// Generator images → coordinates (images must be homogeneous of the right degree).
    pub fn from_imgs(&self, n: i32, imgs: &[SVec<F>]) -> SVec<F> {
        let l = self.layout(n);
        let mut t = Vec::new();
        for (j, img) in imgs.iter().enumerate() {
            for (i, c) in &img.e {
                let p = *l.pos.get(&(j, *i)).expect("image has wrong degree or vertex");
                t.push((p, c.clone()));
            }
        }
        SVec::from_terms(t)
    }

    /// `d: Hom^n → Hom^{n+1}` on one basis coordinate.
    pub fn d_column(&self, n: i32, a: usize) -> SVec<F> {
        let l = self.layout(n);
        let l1 = self.layout(n + 1);
        let (k, i) = l.entries[a];
        let mut acc = Acc::new();
        for (t, c) in &self.tgt.diff[i].e {
            acc.add_term(l1.pos[&(k, *t)], c.clone());
        }
        let s = -F::sign(n as i64);
        for (j, c) in &self.users[k] {
            let img = self.tgt.act_elem(&SVec::unit(i), c);
            for (t, x) in &img.e {
                acc.add_term(l1.pos[&(*j, *t)], s.mul_ref(x));
            }
        }
        acc.finish()
    }

    pub fn d_columns(&self, n: i32) -> Vec<SVec<F>> {
        (0..self.dim(n)).map(|a| self.d_column(n, a)).collect()
    }

    pub fn d_vec(&self, n: i32, v: &SVec<F>) -> SVec<F> {
        let mut acc = Acc::new();
        for (a, c) in &v.e {
            acc.add_vec(c, &self.d_column(n, *a));
        }
        acc.finish()
    }

    pub fn cocycles(&self, n: i32) -> Vec<SVec<F>> {
        kernel_of_columns(&self.d_columns(n))
    }

    pub fn boundaries(&self, n: i32) -> Echelon<F> {
        let mut e = Echelon::new();
        for c in self.d_columns(n - 1) {
            e.insert(c);
        }
        e
    }

    pub fn cohomology(&self, n: i32) -> crate::module::CohomologyCell<F> {
        crate::module::CohomologyCell::new(self.boundaries(n), self.cocycles(n))
    }

    pub fn cohomology_dim(&self, n: i32) -> usize {
        let z = self.cocycles(n).len();
        z - self.boundaries(n).rank()
    }
}

/// A semifree module with a degree-0 chain map to a target module.
#[derive(Clone)]
pub struct Resolution<F> {
    pub f: Semifree<F>,
    pub phi: Vec<SVec<F>>,
    /// All cone classes in degrees `>= floor` are killed.
    pub floor: i32,
    /// The cone is acyclic: the resolution is complete.
    pub exact: bool,
}

impl<F: Field> Resolution<F> {
    pub fn phi_linear(&self, x: &DgModule<F>) -> LinMap<F> {
        self.f.extend(&self.phi, x)
    }
}

/// Minimal semifree resolution of `x`, killing cone cohomology down to `floor`.
/// Optionally continues a partial resolution valid above `start_below`.
pub fn resolve<F: Field>(x: &DgModule<F>, floor: i32, start: Option<(Semifree<F>, Vec<SVec<F>>, i32)>) -> Resolution<F> {
    let alg = x.alg.clone();
    let (mut gens, mut dcols, mut phi, top) = match start {
        Some((f, p, t)) => (f.gens.clone(), f.d.clone(), p, t),
        None => (vec![], vec![], vec![], x.degree_range().map_or(0, |r| r.1)),
    };
    let nv = alg.n_vertices();
    let mut t = top;
    while t >= floor {
        let f = Semifree::new(alg.clone(), gens.clone(), dcols.clone());
        let fm = f.module().clone();
        let phil = f.extend(&phi, x);
        let cone = fm.cone(x, &phil);
        let fdim = fm.dim();
        let z: Vec<Vec<SVec<F>>> = (0..nv).map(|v| cone.cocycles(t, v)).collect();
        // Idempotent coordinates of generators in degree t+1 (shift -t-1).
        let offs = f.offsets();
        let top_coords: Vec<usize> = (0..f.rank())
            .filter(|&j| f.gens[j].shift == -t - 1)
            .map(|j| offs[j] + alg.from_pos[alg.idem[f.gens[j].vertex]])
            .collect();
        for v in 0..nv {
            if z[v].is_empty() {
                continue;
            }
            let mut w = cone.boundaries(t, v);
            for (u, zu) in z.iter().enumerate() {
                for &a in &alg.from[u] {
                    let b = &alg.basis[a];
                    if b.target == v && b.degree == 0 && !b.idempotent {
                        for zz in zu {
                            w.insert(cone.act_elem(zz, &SVec::unit(a)));
                        }
                    }
                }
            }
            // Prefer representatives without unit coefficients on the previous layer.
            let mut ordered: Vec<SVec<F>> = Vec::new();
            let mut rest: Vec<SVec<F>> = Vec::new();
            let rel = kernel_of_columns(
                &z[v]
                    .iter()
                    .map(|zz| {
                        SVec::from_terms(
                            top_coords
                                .iter()
                                .enumerate()
                                .map(|(r, &c)| (r, zz.get(c)))
                                .filter(|x| !x.1.is_zero())
                                .collect(),
                        )
                    })
                    .collect::<Vec<_>>(),
            );
            for r in &rel {
                let mut acc = Acc::new();
                for (i, c) in &r.e {
                    acc.add_vec(c, &z[v][*i]);
                }
                ordered.push(acc.finish());
            }
            rest.extend(z[v].iter().cloned());
            for zz in ordered.into_iter().chain(rest) {
                if w.add(zz.clone()) {
                    let mut col = Vec::new();
                    let fpart = SVec { e: zz.e.iter().filter(|(i, _)| *i < fdim).cloned().collect() };
                    for (j, c) in f.split(&fpart) {
                        col.push((j, c));
                    }
                    let xpart = SVec { e: zz.e.iter().filter(|(i, _)| *i >= fdim).map(|(i, c)| (i - fdim, -c.clone())).collect() };
                    gens.push(Gen { vertex: v, shift: -t });
                    dcols.push(col);
                    phi.push(xpart);
                }
            }
        }
        t -= 1;
    }
    let f = Semifree::new(alg, gens, dcols);
    let exact = {
        let fm = f.module().clone();
        fm.cone(x, &f.extend(&phi, x)).is_acyclic()
    };
    Resolution { f, phi, floor, exact }
}

/// Resolve until the cone is acyclic, giving up below `cap`.
pub fn resolve_complete<F: Field>(x: &DgModule<F>, cap: i32) -> Resolution<F> {
    let mut r = resolve(x, 0.min(x.degree_range().map_or(0, |r| r.0)), None);
    while !r.exact && r.floor > cap {
        let fl = r.floor;
        r = resolve(x, fl - 1, Some((r.f, r.phi, fl - 1)));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DgAlgebra;
    use crate::field::Rational;
    type Q = Rational;

    fn a2() -> Alg<Q> {
        Arc::new(DgAlgebra::build(&crate::corpus::a2()).unwrap())
    }

    fn simple(alg: &Alg<Q>, v: usize) -> DgModule<Q> {
        let p = DgModule::projective(alg, v);
        let (m, _) = p.tau_le(0);
        let mut e = Echelon::new();
        for (i, c) in m.basis.iter().enumerate() {
            if !(c.degree == 0 && i == 0) {
                e.insert(SVec::unit(i));
            }
        }
        m.quotient(&e).0
    }

    #[test]
    fn resolution_of_s1() {
        let a = a2();
        let s1 = simple(&a, 0);
        assert_eq!(s1.dim(), 1);
        let r = resolve(&s1, -2, None);
        assert!(r.exact);
        assert_eq!(r.f.gens, vec![Gen { vertex: 0, shift: 0 }, Gen { vertex: 1, shift: 1 }]);
        assert!(r.f.is_minimal());
        r.f.validate().unwrap();
        assert!(r.f.is_cocycle_map(&r.phi, &s1, 0));
    }

    #[test]
    fn s1_shift_presentation() {
        // τ>-2 of the presentation of S1[1] recovers S1[1].
        let a = a2();
        let s1 = simple(&a, 0).shift(1);
        let r = resolve(&s1, -2, None);
        assert_eq!(r.f.gens.iter().map(|g| g.shift).collect::<Vec<_>>(), vec![1, 2]);
        let (t, _) = r.f.module().tau_gt(-2);
        assert_eq!(t.cohomology_vector(), std::collections::BTreeMap::from([(-1, vec![1, 0])]));
    }

    #[test]
    fn hom_complex_detects_ext() {
        // Hom(S1, S2[1]) = Ext^1(S1, S2) = 1 over kA2.
        let a = a2();
        let s1 = simple(&a, 0);
        let s2 = simple(&a, 1);
        let r = resolve(&s1, -3, None);
        let h = HomComplex::new(&r.f, &s2);
        assert_eq!(h.cohomology_dim(0), 0);
        assert_eq!(h.cohomology_dim(1), 1);
        let h11 = HomComplex::new(&r.f, &s1);
        assert_eq!(h11.cohomology_dim(0), 1);
    }
}
