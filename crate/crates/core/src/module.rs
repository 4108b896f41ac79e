//! Finite-dimensional right DG modules over a [`DgAlgebra`].
//!
//! Conventions: `d` has degree +1, `d(m·a) = d(m)·a + (-1)^{|m|} m·d(a)`,
//! `d_{M[1]} = -d_M`, and `cone(f: M → N) = M[1] ⊕ N` with differential
//! `(m, n) ↦ (-d m, f(m) + d n)`.

use crate::algebra::{Alg, DgAlgebra};
use crate::field::Field;
use crate::linalg::{kernel_of_columns, Acc, Echelon, Matrix, SVec};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub degree: i32,
    pub vertex: usize,
}

#[derive(Clone)]
pub struct DgModule<F> {
    pub alg: Alg<F>,
    pub basis: Vec<Cell>,
    pub diff: Vec<SVec<F>>,
    /// `act[i][k]` is `basis_i · alg.from[vertex_i][k]`.
    pub act: Vec<Vec<SVec<F>>>,
    by_cell: BTreeMap<Cell, Vec<usize>>,
}

/// A homogeneous linear map between modules, stored column by column.
pub type LinMap<F> = Vec<SVec<F>>;

pub fn apply<F: Field>(m: &LinMap<F>, v: &SVec<F>) -> SVec<F> {
    let mut acc = Acc::new();
    for (i, c) in &v.e {
        acc.add_vec(c, &m[*i]);
    }
    acc.finish()
}

pub fn compose<F: Field>(g: &LinMap<F>, f: &LinMap<F>) -> LinMap<F> {
    f.iter().map(|v| apply(g, v)).collect()
}

#[derive(Debug, thiserror::Error)]
#[error("invalid DG module: {0}")]
pub struct ModuleError(pub String);

impl<F: Field> DgModule<F> {
    pub fn new(alg: Alg<F>, basis: Vec<Cell>, diff: Vec<SVec<F>>, act: Vec<Vec<SVec<F>>>) -> Self {
        let mut by_cell: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
        for (i, c) in basis.iter().enumerate() {
            by_cell.entry(*c).or_default().push(i);
        }
        DgModule { alg, basis, diff, act, by_cell }
    }

    pub fn zero(alg: &Alg<F>) -> Self {
        Self::new(alg.clone(), vec![], vec![], vec![])
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Cell, &Vec<usize>)> {
        self.by_cell.iter()
    }

    pub fn cell(&self, degree: i32, vertex: usize) -> &[usize] {
        self.by_cell.get(&Cell { degree, vertex }).map_or(&[], |v| v.as_slice())
    }

    pub fn in_degree(&self, n: i32) -> Vec<usize> {
        (0..self.alg.n_vertices()).flat_map(|v| self.cell(n, v).iter().copied()).collect()
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.basis.iter().map(|c| c.degree).min()?;
        let hi = self.basis.iter().map(|c| c.degree).max()?;
        Some((lo, hi))
    }

    pub fn deg_of(&self, v: &SVec<F>) -> Option<i32> {
        v.lead().map(|i| self.basis[i].degree)
    }

    /// `basis_i · a` for an algebra basis element `a`.
    pub fn act_basis(&self, i: usize, a: usize) -> SVec<F> {
        let b = &self.alg.basis[a];
        if b.source != self.basis[i].vertex {
            return SVec::new();
        }
        self.act[i][self.alg.from_pos[a]].clone()
    }

    pub fn act_elem(&self, m: &SVec<F>, x: &SVec<F>) -> SVec<F> {
        let mut acc = Acc::new();
        for (i, c) in &m.e {
            let v = self.basis[*i].vertex;
            for (a, e) in &x.e {
                if self.alg.basis[*a].source == v {
                    acc.add_vec(&c.mul_ref(e), &self.act[*i][self.alg.from_pos[*a]]);
                }
            }
        }
        acc.finish()
    }

    pub fn d(&self, m: &SVec<F>) -> SVec<F> {
        apply(&self.diff, m)
    }

    /// The regular module `A_A`.
    pub fn regular(alg: &Alg<F>) -> Self {
        let all: Vec<usize> = (0..alg.dim()).collect();
        Self::span_of_basis(alg, &all)
    }

    /// The indecomposable projective `e_v A`.
    pub fn projective(alg: &Alg<F>, v: usize) -> Self {
        Self::span_of_basis(alg, &alg.from[v].clone())
    }

    /// Right ideal spanned by algebra basis elements closed under right multiplication.
    fn span_of_basis(alg: &Alg<F>, idx: &[usize]) -> Self {
        let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let re = |v: &SVec<F>| v.remap(|j| pos.get(&j).copied());
        let basis = idx.iter().map(|&i| Cell { degree: alg.deg(i), vertex: alg.basis[i].target }).collect();
        let diff = idx.iter().map(|&i| re(&alg.diff[i])).collect();
        let act = idx
            .iter()
            .map(|&i| {
                alg.from[alg.basis[i].target]
                    .iter()
                    .map(|&a| alg.mul(i, a).map(&re).unwrap_or_default())
                    .collect()
            })
            .collect();
        Self::new(alg.clone(), basis, diff, act)
    }

    /// Check d² = 0, Leibniz, associativity and unit laws on all basis pairs.
    pub fn validate(&self) -> Result<(), ModuleError> {
        let alg = &self.alg;
        for i in 0..self.dim() {
            let c = self.basis[i];
            for (j, _) in &self.diff[i].e {
                if self.basis[*j] != (Cell { degree: c.degree + 1, vertex: c.vertex }) {
                    return Err(ModuleError(format!("d(b{i}) leaves its cell")));
                }
            }
            if !self.d(&self.diff[i]).is_zero() {
                return Err(ModuleError(format!("d^2(b{i}) != 0")));
            }
            if self.act_basis(i, alg.idem[c.vertex]) != SVec::unit(i) {
                return Err(ModuleError(format!("unit fails on b{i}")));
            }
            for &a in &alg.from[c.vertex] {
                let ma = self.act_basis(i, a);
                for (j, _) in &ma.e {
                    let t = self.basis[*j];
                    if t.degree != c.degree + alg.deg(a) || t.vertex != alg.basis[a].target {
                        return Err(ModuleError(format!("b{i}·{} not homogeneous", alg.basis[a].name)));
                    }
                }
                let lhs = self.d(&ma);
                let rhs = self
                    .act_elem(&self.diff[i], &SVec::unit(a))
                    .axpy(&F::sign(c.degree as i64), &self.act_elem(&SVec::unit(i), &alg.diff[a]));
                if lhs != rhs {
                    return Err(ModuleError(format!("Leibniz fails on (b{i}, {})", alg.basis[a].name)));
                }
                for &b in &alg.from[alg.basis[a].target] {
                    let l = self.act_elem(&ma, &SVec::unit(b));
                    let r = self.act_elem(&SVec::unit(i), &alg.mul(a, b).cloned().unwrap_or_default());
                    if l != r {
                        return Err(ModuleError(format!("associativity fails on b{i}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for c in &self.basis {
            *m.entry(c.degree).or_insert(0) += 1;
        }
        m
    }

    /// Cocycles of degree `n` at vertex `v`.
    pub fn cocycles(&self, n: i32, v: usize) -> Vec<SVec<F>> {
        let idx = self.cell(n, v);
        let cols: Vec<SVec<F>> = idx.iter().map(|&i| self.diff[i].clone()).collect();
        kernel_of_columns(&cols).into_iter().map(|k| k.remap(|j| Some(idx[j]))).collect()
    }

    pub fn boundaries(&self, n: i32, v: usize) -> Echelon<F> {
        Echelon::from_vectors(self.cell(n - 1, v).iter().map(|&i| &self.diff[i]))
    }

    pub fn cohomology_dim_at(&self, n: i32, v: usize) -> usize {
        let z = self.cocycles(n, v).len();
        z - self.boundaries(n, v).rank()
    }

    pub fn cohomology_dim(&self, n: i32) -> usize {
        (0..self.alg.n_vertices()).map(|v| self.cohomology_dim_at(n, v)).sum()
    }

    /// `n ↦ dim H^n` over the support (plus one degree of margin).
    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        if let Some((lo, hi)) = self.degree_range() {
            for n in lo..=hi {
                let h = self.cohomology_dim(n);
                if h > 0 {
                    out.insert(n, h);
                }
            }
        }
        out
    }

    /// Per vertex and degree dimension vector of `H^*`.
    pub fn cohomology_vector(&self) -> BTreeMap<i32, Vec<usize>> {
        let mut out = BTreeMap::new();
        if let Some((lo, hi)) = self.degree_range() {
            for n in lo..=hi {
                let v: Vec<usize> = (0..self.alg.n_vertices()).map(|v| self.cohomology_dim_at(n, v)).collect();
                if v.iter().any(|&x| x > 0) {
                    out.insert(n, v);
                }
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology_dims().is_empty()
    }

    /// `H^n` as a module over `H^0(A)`: representatives plus the action of
    /// degree-0 algebra basis elements in the representative basis.
    pub fn cohomology(&self, n: i32) -> GradedPiece<F> {
        let nv = self.alg.n_vertices();
        let mut reps = Vec::new();
        let mut rep_vertex = Vec::new();
        let mut quot = Vec::new();
        for v in 0..nv {
            let b = self.boundaries(n, v);
            let q = CohomologyCell::new(b.clone(), self.cocycles(n, v));
            for r in &q.reps {
                reps.push(r.clone());
                rep_vertex.push(v);
            }
            quot.push(q);
        }
        let offsets: Vec<usize> = (0..nv)
            .scan(0, |acc, v| {
                let o = *acc;
                *acc += quot[v].reps.len();
                Some(o)
            })
            .collect();
        let mut action = BTreeMap::new();
        for a in 0..self.alg.dim() {
            let b = &self.alg.basis[a];
            if b.degree != 0 || b.idempotent {
                continue;
            }
            let mut m = Matrix::zeros(reps.len(), reps.len());
            for (k, r) in reps.iter().enumerate() {
                if rep_vertex[k] != b.source {
                    continue;
                }
                let img = self.act_elem(r, &SVec::unit(a));
                let c = quot[b.target].coords(&img).expect("action must preserve cocycles");
                for (j, x) in &c.e {
                    m[(offsets[b.target] + j, k)] = x.clone();
                }
            }
            action.insert(a, m);
        }
        GradedPiece { degree: n, dims: quot.iter().map(|q| q.reps.len()).collect(), reps, rep_vertex, action }
    }

    /// Shift: `(M[n])^i = M^{i+n}`, `d_{M[n]} = (-1)^n d_M`.
    pub fn shift(&self, n: i32) -> Self {
        let s = F::sign(n as i64);
        let basis = self.basis.iter().map(|c| Cell { degree: c.degree - n, vertex: c.vertex }).collect();
        let diff = self.diff.iter().map(|v| v.scale(&s)).collect();
        Self::new(self.alg.clone(), basis, diff, self.act.clone())
    }

    /// The DG submodule spanned by `rows` (an echelon basis of an invariant subspace).
    /// Returns the module and its inclusion map.
    pub fn submodule(&self, sub: &Echelon<F>) -> (Self, LinMap<F>) {
        let coords = |v: &SVec<F>| -> SVec<F> {
            let c = sub.coords(v).expect("subspace is not invariant");
            SVec::from_terms(c.e)
        };
        let basis: Vec<Cell> = sub.rows.iter().map(|r| self.basis[r.lead().unwrap()]).collect();
        let diff = sub.rows.iter().map(|r| coords(&self.d(r))).collect();
        let act = sub
            .rows
            .iter()
            .zip(&basis)
            .map(|(r, c)| self.alg.from[c.vertex].iter().map(|&a| coords(&self.act_elem(r, &SVec::unit(a)))).collect())
            .collect();
        (Self::new(self.alg.clone(), basis, diff, act), sub.rows.clone())
    }

    /// Quotient by an invariant subspace given in echelon form, with the projection.
    pub fn quotient(&self, sub: &Echelon<F>) -> (Self, LinMap<F>) {
        let keep: Vec<usize> = (0..self.dim()).filter(|&i| !sub.is_pivot(i)).collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let proj_v = |v: &SVec<F>| sub.reduce(v).remap(|j| pos.get(&j).copied());
        let basis = keep.iter().map(|&i| self.basis[i]).collect();
        let diff = keep.iter().map(|&i| proj_v(&self.diff[i])).collect();
        let act = keep.iter().map(|&i| self.act[i].iter().map(&proj_v).collect()).collect();
        let proj = (0..self.dim()).map(|i| proj_v(&SVec::unit(i))).collect();
        (Self::new(self.alg.clone(), basis, diff, act), proj)
    }

    /// `τ≤n M = M^{<n} ⊕ Z^n`, with inclusion.
    pub fn tau_le(&self, n: i32) -> (Self, LinMap<F>) {
        self.submodule(&self.tau_le_space(n))
    }

    fn tau_le_space(&self, n: i32) -> Echelon<F> {
        let mut e = Echelon::new();
        for (i, c) in self.basis.iter().enumerate() {
            if c.degree < n {
                e.insert(SVec::unit(i));
            }
        }
        for v in 0..self.alg.n_vertices() {
            for z in self.cocycles(n, v) {
                e.insert(z);
            }
        }
        e
    }

    /// `τ>n M = M / τ≤n M`, with projection.
    pub fn tau_gt(&self, n: i32) -> (Self, LinMap<F>) {
        self.quotient(&self.tau_le_space(n))
    }

    /// `τ>n M` with projection and a section: quotient basis `i` is the class of basis element `keep[i]`.
    pub fn tau_gt_split(&self, n: i32) -> (Self, LinMap<F>, Vec<usize>) {
        let sub = self.tau_le_space(n);
        let keep = (0..self.dim()).filter(|&i| !sub.is_pivot(i)).collect();
        let (m, p) = self.quotient(&sub);
        (m, p, keep)
    }

    pub fn direct_sum(parts: &[&Self]) -> (Self, Vec<usize>) {
        let alg = parts.first().map(|m| m.alg.clone()).expect("empty direct sum");
        let mut basis = Vec::new();
        let mut diff = Vec::new();
        let mut act = Vec::new();
        let mut offs = Vec::new();
        for m in parts {
            let o = basis.len();
            offs.push(o);
            basis.extend(m.basis.iter().copied());
            diff.extend(m.diff.iter().map(|v| v.shift_index(o)));
            act.extend(m.act.iter().map(|r| r.iter().map(|v| v.shift_index(o)).collect::<Vec<_>>()));
        }
        (Self::new(alg, basis, diff, act), offs)
    }

    /// Cone of a degree-0 chain map `f: self → n` (columns indexed by `self`'s basis).
    /// Basis: `self` first (shifted), then `n`.
    pub fn cone(&self, n: &Self, f: &LinMap<F>) -> Self {
        let o = self.dim();
        let mut basis: Vec<Cell> = self.basis.iter().map(|c| Cell { degree: c.degree - 1, vertex: c.vertex }).collect();
        basis.extend(n.basis.iter().copied());
        let mut diff: Vec<SVec<F>> =
            self.diff.iter().zip(f).map(|(dm, fm)| dm.neg().add(&fm.shift_index(o))).collect();
        diff.extend(n.diff.iter().map(|v| v.shift_index(o)));
        let mut act: Vec<Vec<SVec<F>>> = self.act.clone();
        act.extend(n.act.iter().map(|r| r.iter().map(|v| v.shift_index(o)).collect::<Vec<_>>()));
        Self::new(self.alg.clone(), basis, diff, act)
    }

    /// Check that a linear map is a degree-0 chain map of modules.
    pub fn is_chain_map(&self, n: &Self, f: &LinMap<F>) -> bool {
        for i in 0..self.dim() {
            if apply(f, &self.diff[i]) != n.d(&f[i]) {
                return false;
            }
            for &a in &self.alg.from[self.basis[i].vertex] {
                let l = apply(f, &self.act_basis(i, a));
                let r = n.act_elem(&f[i], &SVec::unit(a));
                if l != r {
                    return false;
                }
            }
        }
        true
    }

    /// k-dual `D M = Hom_k(M, k)`, a right module over `op` (which must be the opposite of `self.alg`).
    ///
    /// `(φ·a)(m) = (-1)^{|a||m|} φ(m·a)` and `(dφ)(m) = -(-1)^{|φ|} φ(dm)`.
    pub fn k_dual(&self, op: &Alg<F>) -> Self {
        let alg = &self.alg;
        assert_eq!(op.dim(), alg.dim(), "k_dual needs the opposite algebra");
        let basis: Vec<Cell> = self.basis.iter().map(|c| Cell { degree: -c.degree, vertex: c.vertex }).collect();
        let mut diff = vec![Acc::new(); 0];
        diff.resize_with(self.dim(), Acc::new);
        for j in 0..self.dim() {
            for (i, c) in &self.diff[j].e {
                // φ_i(d b_j) = c, so (dφ_i)(b_j) = -(-1)^{|φ_i|} c.
                let s = -F::sign(basis[*i].degree as i64);
                diff[*i].add_term(j, s.mul_ref(c));
            }
        }
        let mut act: Vec<Vec<Acc<F>>> =
            basis.iter().map(|c| op.from[c.vertex].iter().map(|_| Acc::new()).collect()).collect();
        for j in 0..self.dim() {
            let v = self.basis[j].vertex;
            for &a in &alg.from[v] {
                for (i, c) in &self.act_basis(j, a).e {
                    // φ_i · a has φ_j-coefficient (-1)^{|a||b_j|} [b_j·a]_i.
                    let s = F::sign((alg.deg(a) * self.basis[j].degree) as i64);
                    act[*i][op.from_pos[a]].add_term(j, s.mul_ref(c));
                }
            }
        }
        Self::new(
            op.clone(),
            basis,
            diff.into_iter().map(|a| a.finish()).collect(),
            act.into_iter().map(|r| r.into_iter().map(|a| a.finish()).collect()).collect(),
        )
    }

    /// `D_d M = D(M)[d-1]`.
    pub fn d_dual(&self, op: &Alg<F>, d: i32) -> Self {
        self.k_dual(op).shift(d - 1)
    }

    /// Restriction to a change of algebra with identical basis (used to move a
    /// module over `(A^op)^op` back to `A`).
    pub fn with_algebra(&self, alg: &Alg<F>) -> Self {
        assert!(**alg == *self.alg, "algebras differ");
        Self::new(alg.clone(), self.basis.clone(), self.diff.clone(), self.act.clone())
    }
}

/// Cohomology at one (degree, vertex) cell: `Z / B` with a chosen complement.
#[derive(Clone)]
pub struct CohomologyCell<F> {
    pub reps: Vec<SVec<F>>,
    ech: Echelon<F>,
    nb: usize,
}

impl<F: Field> CohomologyCell<F> {
    pub fn new(bound: Echelon<F>, cocycles: Vec<SVec<F>>) -> Self {
        let mut ech = bound.clone();
        let nb = bound.rank();
        let mut reps = Vec::new();
        for z in cocycles {
            if ech.add(z.clone()) {
                reps.push(z);
            }
        }
        // Rebuild so that tracked inputs are exactly bound rows then reps.
        let mut e2 = Echelon::tracked();
        for r in bound.rows.iter().chain(reps.iter()) {
            e2.insert(r.clone());
        }
        CohomologyCell { reps, ech: e2, nb }
    }

    /// Coordinates of a cocycle in the representative basis; `None` if not in `Z`.
    pub fn coords(&self, z: &SVec<F>) -> Option<SVec<F>> {
        let c = self.ech.express(z)?;
        Some(c.remap(|j| j.checked_sub(self.nb)))
    }
}

/// `H^n(M)` with the induced action of degree-0 arrows/basis elements of the algebra.
#[derive(Clone, Debug)]
pub struct GradedPiece<F> {
    pub degree: i32,
    pub dims: Vec<usize>,
    pub reps: Vec<SVec<F>>,
    pub rep_vertex: Vec<usize>,
    pub action: BTreeMap<usize, Matrix<F>>,
}

impl<F: Field> GradedPiece<F> {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }
}

/// Shorthand used throughout: a module over the ground field from a graded
/// dimension map and a differential (test helper and hom-complex carrier).
pub fn ground_module<F: Field>(basis_deg: &[i32], diff: Vec<SVec<F>>) -> DgModule<F> {
    let k: Alg<F> = Arc::new(DgAlgebra::ground());
    let basis = basis_deg.iter().map(|&d| Cell { degree: d, vertex: 0 }).collect::<Vec<_>>();
    let act = (0..basis.len()).map(|i| vec![SVec::unit(i)]).collect();
    DgModule::new(k, basis, diff, act)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DgQuiver;
    use crate::field::Rational;
    type Q = Rational;

    fn a2() -> Alg<Q> {
        Arc::new(DgAlgebra::build(&DgQuiver::new(&["1", "2"]).arrow("a", "1", "2", 0)).unwrap())
    }

    #[test]
    fn regular_module_cohomology() {
        let a = a2();
        let m = DgModule::regular(&a);
        m.validate().unwrap();
        assert_eq!(m.cohomology_dims(), BTreeMap::from([(0, 3)]));
        let h = m.cohomology(0);
        assert_eq!(h.dims, vec![1, 2]);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let m = DgModule::regular(&a2());
        let id: LinMap<Q> = (0..m.dim()).map(SVec::unit).collect();
        let c = m.cone(&m, &id);
        c.validate().unwrap();
        assert!(c.is_acyclic());
    }

    #[test]
    fn shift_moves_cohomology() {
        let p2 = DgModule::projective(&a2(), 1);
        let s = p2.shift(1);
        s.validate().unwrap();
        assert_eq!(s.cohomology_dims(), BTreeMap::from([(-1, 1)]));
        let back = s.shift(-1);
        assert_eq!(back.basis, p2.basis);
        assert!(back.diff == p2.diff);
    }

    #[test]
    fn dual_of_a2_is_injectives() {
        let a = a2();
        let op = Arc::new(a.opposite());
        // D(A_A) is a right A^op-module; dualizing the regular A^op-module gives D(A) over A.
        let reg_op = DgModule::regular(&op);
        let back = Arc::new(op.opposite());
        let da = reg_op.k_dual(&back).with_algebra(&a);
        da.validate().unwrap();
        // DΛ = I1 ⊕ I2 = S1 ⊕ P1: top at vertex 1 twice, dims (2, 1).
        let h = da.cohomology(0);
        assert_eq!(h.dims, vec![2, 1]);
    }

    #[test]
    fn truncation_triangle() {
        let a = Arc::new(DgAlgebra::build(&crate::corpus::gamma_a2::<Q>()).unwrap());
        let m = DgModule::regular(&a);
        let (le, inc) = m.tau_le(-1);
        let (gt, proj) = m.tau_gt(-1);
        le.validate().unwrap();
        gt.validate().unwrap();
        assert!(le.is_chain_map(&m, &inc));
        assert!(m.is_chain_map(&gt, &proj));
        assert_eq!(le.dim() + gt.dim(), m.dim());
        assert_eq!(m.cohomology_dims(), BTreeMap::from([(-1, 5), (0, 11)]));
        assert_eq!(gt.cohomology_dims(), BTreeMap::from([(0, 11)]));
        assert_eq!(le.cohomology_dims(), BTreeMap::from([(-1, 5)]));
    }
}
