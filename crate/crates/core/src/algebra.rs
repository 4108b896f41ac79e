//! DG path algebras and finite-dimensional DG algebras given by structure constants.
//!
//! Paths are written in application order: `[a, b]` means first `a`, then `b`.
//! A basis element `x` lives in `e_src · A · e_tgt`, so `x·y` can only be
//! nonzero when `tgt(x) == src(y)`.

use crate::field::Field;
use crate::linalg::{Echelon, SVec};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("arrow {0} has positive degree {1}")]
    PositiveDegree(String, i32),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("oriented cycle through vertex {0}: path algebra is infinite-dimensional")]
    Cycle(String),
    #[error("differential of {arrow}: {reason}")]
    BadDifferential { arrow: String, reason: String },
    #[error("d^2 != 0 on {0}")]
    DSquared(String),
    #[error("Leibniz rule fails on ({0}, {1})")]
    Leibniz(String, String),
    #[error("algebra has no vertices (unit required)")]
    Empty,
    #[error("structure constants: {0}")]
    Structure(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i32,
}

/// A quiver with graded arrows and a differential on arrows.
#[derive(Clone, Debug)]
pub struct DgQuiver<F> {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// `d(arrow)` as a combination of paths (arrow index lists, application order).
    pub differential: Vec<(usize, Vec<(F, Vec<usize>)>)>,
}

impl<F: Field> DgQuiver<F> {
    pub fn new(vertices: &[&str]) -> Self {
        DgQuiver { vertices: vertices.iter().map(|s| s.to_string()).collect(), arrows: vec![], differential: vec![] }
    }

    pub fn vertex(&self, name: &str) -> Result<usize, AlgebraError> {
        self.vertices.iter().position(|v| v == name).ok_or_else(|| AlgebraError::UnknownVertex(name.into()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.arrows.iter().position(|a| a.name == name).ok_or_else(|| AlgebraError::UnknownArrow(name.into()))
    }

    pub fn arrow(mut self, name: &str, s: &str, t: &str, degree: i32) -> Self {
        let (s, t) = (self.vertex(s).unwrap(), self.vertex(t).unwrap());
        self.arrows.push(Arrow { name: name.into(), source: s, target: t, degree });
        self
    }

    /// Add `d(arrow) = Σ c · path` with paths given by arrow names.
    pub fn diff(mut self, arrow: &str, terms: &[(i64, &[&str])]) -> Self {
        let a = self.arrow_index(arrow).unwrap();
        let t = terms
            .iter()
            .map(|(c, p)| (F::from_i64(*c), p.iter().map(|n| self.arrow_index(n).unwrap()).collect()))
            .collect();
        self.differential.push((a, t));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElem {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i32,
    pub idempotent: bool,
}

/// Finite-dimensional, non-positively graded DG algebra with a basis adapted to
/// vertex idempotents. Non-idempotent basis elements span the radical `J`.
#[derive(Clone, Debug)]
pub struct DgAlgebra<F> {
    pub vertices: Vec<String>,
    pub basis: Vec<BasisElem>,
    /// Index of `e_v` in the basis.
    pub idem: Vec<usize>,
    mult: HashMap<(usize, usize), SVec<F>>,
    pub diff: Vec<SVec<F>>,
    /// Basis elements with a given source (a basis of `e_v A`).
    pub from: Vec<Vec<usize>>,
    /// Basis elements with a given target (a basis of `A e_v`).
    pub into: Vec<Vec<usize>>,
    /// Position of each basis element inside `from[source]`.
    pub from_pos: Vec<usize>,
    /// Arrow sequence of each basis element when built from a quiver.
    pub paths: Option<Vec<Vec<usize>>>,
}

impl<F: Field> PartialEq for DgAlgebra<F> {
    fn eq(&self, o: &Self) -> bool {
        self.basis == o.basis && self.mult == o.mult && self.diff == o.diff && self.idem == o.idem
    }
}

pub type Alg<F> = Arc<DgAlgebra<F>>;

impl<F: Field> DgAlgebra<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn deg(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    /// Product of basis elements.
    pub fn mul(&self, a: usize, b: usize) -> Option<&SVec<F>> {
        self.mult.get(&(a, b))
    }

    pub fn mul_elems(&self, x: &SVec<F>, y: &SVec<F>) -> SVec<F> {
        let mut acc = crate::linalg::Acc::new();
        for (a, c) in &x.e {
            for (b, e) in &y.e {
                if let Some(p) = self.mul(*a, *b) {
                    acc.add_vec(&c.mul_ref(e), p);
                }
            }
        }
        acc.finish()
    }

    pub fn d_elem(&self, x: &SVec<F>) -> SVec<F> {
        let mut acc = crate::linalg::Acc::new();
        for (a, c) in &x.e {
            acc.add_vec(c, &self.diff[*a]);
        }
        acc.finish()
    }

    pub fn one(&self) -> SVec<F> {
        SVec::from_terms(self.idem.iter().map(|&i| (i, F::one())).collect())
    }

    pub fn is_degree_zero_algebra(&self) -> bool {
        self.basis.iter().all(|b| b.degree == 0)
    }

    pub fn min_degree(&self) -> i32 {
        self.basis.iter().map(|b| b.degree).min().unwrap_or(0)
    }

    /// Assemble from raw data and validate.
    pub fn from_structure(
        vertices: Vec<String>,
        basis: Vec<BasisElem>,
        mult: HashMap<(usize, usize), SVec<F>>,
        diff: Vec<SVec<F>>,
    ) -> Result<Self, AlgebraError> {
        let a = Self::assemble(vertices, basis, mult, diff, None)?;
        a.validate()?;
        Ok(a)
    }

    fn assemble(
        vertices: Vec<String>,
        basis: Vec<BasisElem>,
        mut mult: HashMap<(usize, usize), SVec<F>>,
        diff: Vec<SVec<F>>,
        paths: Option<Vec<Vec<usize>>>,
    ) -> Result<Self, AlgebraError> {
        if vertices.is_empty() {
            return Err(AlgebraError::Empty);
        }
        let n = vertices.len();
        let mut idem = vec![usize::MAX; n];
        for (i, b) in basis.iter().enumerate() {
            if b.idempotent {
                if b.source != b.target || b.degree != 0 || idem[b.source] != usize::MAX {
                    return Err(AlgebraError::Structure(format!("bad idempotent {}", b.name)));
                }
                idem[b.source] = i;
            }
        }
        if let Some(v) = idem.iter().position(|&i| i == usize::MAX) {
            return Err(AlgebraError::Structure(format!("vertex {} lacks an idempotent", vertices[v])));
        }
        // Unit laws are implied by the block structure; fill them in.
        for (i, b) in basis.iter().enumerate() {
            mult.insert((idem[b.source], i), SVec::unit(i));
            mult.insert((i, idem[b.target]), SVec::unit(i));
        }
        mult.retain(|_, v| !v.is_zero());
        let mut from = vec![Vec::new(); n];
        let mut into = vec![Vec::new(); n];
        let mut from_pos = vec![0; basis.len()];
        // Idempotents lead each `from` list: a generator `e_v` sits at its block's offset.
        let order = idem.iter().copied().chain((0..basis.len()).filter(|&i| !basis[i].idempotent));
        for i in order {
            let b = &basis[i];
            from_pos[i] = from[b.source].len();
            from[b.source].push(i);
        }
        for (i, b) in basis.iter().enumerate() {
            into[b.target].push(i);
        }
        Ok(DgAlgebra { vertices, basis, idem, mult, diff, from, into, from_pos, paths })
    }

    pub fn build(q: &DgQuiver<F>) -> Result<Self, AlgebraError> {
        let n = q.vertices.len();
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        for a in &q.arrows {
            if a.degree > 0 {
                return Err(AlgebraError::PositiveDegree(a.name.clone(), a.degree));
            }
        }
        // Cycle detection by Kahn's algorithm.
        let mut indeg = vec![0usize; n];
        for a in &q.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in q.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        if seen < n {
            let v = (0..n).find(|&v| indeg[v] > 0).unwrap();
            return Err(AlgebraError::Cycle(q.vertices[v].clone()));
        }
        // Enumerate paths by length.
        let mut paths: Vec<Vec<usize>> = Vec::new();
        let mut basis = Vec::new();
        for (v, name) in q.vertices.iter().enumerate() {
            paths.push(vec![]);
            basis.push(BasisElem { name: format!("e{name}"), source: v, target: v, degree: 0, idempotent: true });
        }
        let mut layer: Vec<Vec<usize>> = (0..q.arrows.len()).map(|a| vec![a]).collect();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for p in &layer {
                let s = q.arrows[p[0]].source;
                let t = q.arrows[*p.last().unwrap()].target;
                let deg = p.iter().map(|&a| q.arrows[a].degree).sum();
                let name = p.iter().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join(".");
                basis.push(BasisElem { name, source: s, target: t, degree: deg, idempotent: false });
                paths.push(p.clone());
                for (b, arr) in q.arrows.iter().enumerate() {
                    if arr.source == t {
                        let mut np = p.clone();
                        np.push(b);
                        next.push(np);
                    }
                }
            }
            layer = next;
        }
        let index: HashMap<Vec<usize>, usize> =
            paths.iter().enumerate().filter(|(i, _)| *i >= n).map(|(i, p)| (p.clone(), i)).collect();
        let mut mult = HashMap::new();
        for (i, p) in paths.iter().enumerate().skip(n) {
            for (j, r) in paths.iter().enumerate().skip(n) {
                if basis[i].target == basis[j].source {
                    let mut c = p.clone();
                    c.extend(r);
                    mult.insert((i, j), SVec::unit(index[&c]));
                }
            }
        }
        // Differential on arrows, checked, then extended by Leibniz.
        let mut darrow: Vec<SVec<F>> = vec![SVec::new(); q.arrows.len()];
        for (a, terms) in &q.differential {
            let arr = &q.arrows[*a];
            let mut t = Vec::new();
            for (c, p) in terms {
                let bad = |reason: String| AlgebraError::BadDifferential { arrow: arr.name.clone(), reason };
                if p.is_empty() {
                    return Err(bad("empty path".into()));
                }
                for w in p.windows(2) {
                    if q.arrows[w[0]].target != q.arrows[w[1]].source {
                        return Err(bad(format!("path {} is not composable", path_name(q, p))));
                    }
                }
                if q.arrows[p[0]].source != arr.source || q.arrows[*p.last().unwrap()].target != arr.target {
                    return Err(bad(format!("path {} has wrong endpoints", path_name(q, p))));
                }
                let deg: i32 = p.iter().map(|&x| q.arrows[x].degree).sum();
                if deg != arr.degree + 1 {
                    return Err(bad(format!("path {} has degree {deg}, expected {}", path_name(q, p), arr.degree + 1)));
                }
                t.push((index[p], c.clone()));
            }
            darrow[*a] = darrow[*a].add(&SVec::from_terms(t));
        }
        let mut diff = vec![SVec::new(); basis.len()];
        let alg0 = Self::assemble(q.vertices.clone(), basis.clone(), mult.clone(), diff.clone(), None)?;
        for (i, p) in paths.iter().enumerate().skip(n) {
            let mut acc = crate::linalg::Acc::new();
            let mut sign_deg = 0;
            for k in 0..p.len() {
                let left = if k == 0 { alg0.one() } else { SVec::unit(index[&p[..k].to_vec()]) };
                let right = if k + 1 == p.len() { alg0.one() } else { SVec::unit(index[&p[k + 1..].to_vec()]) };
                let term = alg0.mul_elems(&alg0.mul_elems(&left, &darrow[p[k]]), &right);
                acc.add_vec(&F::sign(sign_deg as i64), &term);
                sign_deg += q.arrows[p[k]].degree;
            }
            diff[i] = acc.finish();
        }
        let alg = Self::assemble(q.vertices.clone(), basis, mult, diff, Some(paths))?;
        for a in 0..q.arrows.len() {
            let x = SVec::unit(index[&vec![a]]);
            if !alg.d_elem(&alg.d_elem(&x)).is_zero() {
                return Err(AlgebraError::DSquared(q.arrows[a].name.clone()));
            }
        }
        alg.validate()?;
        Ok(alg)
    }

    /// Full check of grading, d² = 0, Leibniz, associativity, and nilpotency of `J`.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        for (i, b) in self.basis.iter().enumerate() {
            if b.degree > 0 {
                return Err(AlgebraError::PositiveDegree(b.name.clone(), b.degree));
            }
            for (j, _) in &self.diff[i].e {
                let c = &self.basis[*j];
                if c.degree != b.degree + 1 || c.source != b.source || c.target != b.target {
                    return Err(AlgebraError::Structure(format!("d({}) leaves its block", b.name)));
                }
            }
            if b.idempotent && !self.diff[i].is_zero() {
                return Err(AlgebraError::Structure(format!("d({}) != 0", b.name)));
            }
            if !self.d_elem(&self.diff[i]).is_zero() {
                return Err(AlgebraError::DSquared(b.name.clone()));
            }
        }
        for (&(a, b), v) in &self.mult {
            let (x, y) = (&self.basis[a], &self.basis[b]);
            if x.target != y.source {
                return Err(AlgebraError::Structure(format!("{}·{} should vanish", x.name, y.name)));
            }
            for (k, _) in &v.e {
                let z = &self.basis[*k];
                if z.degree != x.degree + y.degree || z.source != x.source || z.target != y.target {
                    return Err(AlgebraError::Structure(format!("{}·{} is not homogeneous", x.name, y.name)));
                }
                if z.idempotent && !(x.idempotent || y.idempotent) {
                    return Err(AlgebraError::Structure(format!("{}·{} leaves the radical", x.name, y.name)));
                }
            }
        }
        for a in 0..n {
            for b in self.from[self.basis[a].target].iter().copied() {
                let ab = self.mul(a, b).cloned().unwrap_or_default();
                let lhs = self.d_elem(&ab);
                let rhs = self
                    .mul_elems(&self.diff[a], &SVec::unit(b))
                    .axpy(&F::sign(self.deg(a) as i64), &self.mul_elems(&SVec::unit(a), &self.diff[b]));
                if lhs != rhs {
                    return Err(AlgebraError::Leibniz(self.basis[a].name.clone(), self.basis[b].name.clone()));
                }
                for c in self.from[self.basis[b].target].iter().copied() {
                    let l = self.mul_elems(&ab, &SVec::unit(c));
                    let bc = self.mul(b, c).cloned().unwrap_or_default();
                    let r = self.mul_elems(&SVec::unit(a), &bc);
                    if l != r {
                        return Err(AlgebraError::Structure(format!(
                            "associativity fails on ({}, {}, {})",
                            self.basis[a].name, self.basis[b].name, self.basis[c].name
                        )));
                    }
                }
            }
        }
        // J nilpotent: repeated products of radical elements die out.
        let rad: Vec<usize> = (0..n).filter(|&i| !self.basis[i].idempotent).collect();
        let mut layer: Vec<SVec<F>> = rad.iter().map(|&i| SVec::unit(i)).collect();
        for _ in 0..=n {
            if layer.is_empty() {
                return Ok(());
            }
            let mut e = Echelon::new();
            for x in &layer {
                for &r in &rad {
                    let p = self.mul_elems(x, &SVec::unit(r));
                    if !p.is_zero() {
                        e.insert(p);
                    }
                }
            }
            layer = e.rows.clone();
        }
        Err(AlgebraError::Structure("radical is not nilpotent".into()))
    }

    /// The ground field as a one-vertex algebra.
    pub fn ground() -> Self {
        Self::build(&DgQuiver::<F>::new(&["*"])).unwrap()
    }

    /// Opposite algebra: same basis, `x ·op y = (-1)^{|x||y|} y·x`, same d.
    pub fn opposite(&self) -> Self {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElem { source: b.target, target: b.source, ..b.clone() })
            .collect();
        let mut mult = HashMap::new();
        for (&(a, b), v) in &self.mult {
            let s = F::sign((self.deg(a) * self.deg(b)) as i64);
            mult.insert((b, a), v.scale(&s));
        }
        let paths = self.paths.as_ref().map(|ps| ps.iter().map(|p| p.iter().rev().copied().collect()).collect());
        Self::assemble(self.vertices.clone(), basis, mult, self.diff.clone(), paths).unwrap()
    }

    /// The quotient by `τ≤-d A`: drop degrees below `-d` and the cocycles in degree `-d`.
    pub fn reduce_to_truncated(&self, d: i32) -> Self {
        let n = self.dim();
        // Cocycles of degree -d, block by block (d preserves blocks).
        let mut ideal = Echelon::new();
        for i in 0..n {
            if self.deg(i) < -d {
                ideal.insert(SVec::unit(i));
            }
        }
        let mut blocks: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            if b.degree == -d {
                blocks.entry((b.source, b.target)).or_default().push(i);
            }
        }
        let mut keys: Vec<_> = blocks.keys().copied().collect();
        keys.sort();
        for k in keys {
            let idx = &blocks[&k];
            let cols: Vec<SVec<F>> = idx.iter().map(|&i| self.diff[i].clone()).collect();
            for r in crate::linalg::kernel_of_columns(&cols) {
                ideal.insert(r.remap(|j| Some(idx[j])));
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| !ideal.is_pivot(i)).collect();
        let newidx: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let proj = |v: &SVec<F>| ideal.reduce(v).remap(|j| newidx.get(&j).copied());
        let basis = keep.iter().map(|&i| self.basis[i].clone()).collect();
        let mut mult = HashMap::new();
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if let Some(p) = self.mul(i, j) {
                    let v = proj(p);
                    if !v.is_zero() {
                        mult.insert((a, b), v);
                    }
                }
            }
        }
        let diff = keep.iter().map(|&i| proj(&self.diff[i])).collect();
        let paths = self.paths.as_ref().map(|ps| keep.iter().map(|&i| ps[i].clone()).collect());
        Self::assemble(self.vertices.clone(), basis, mult, diff, paths).unwrap()
    }

    /// Whether `H^i(A) = 0` for all `i <= -d`.
    pub fn is_truncated(&self, d: i32) -> bool {
        let m = crate::module::DgModule::regular(&Arc::new(self.clone()));
        (self.min_degree()..=-d).all(|i| m.cohomology_dim(i) == 0)
    }

    /// Raw structure constants, for serialization.
    pub fn products(&self) -> Vec<((usize, usize), &SVec<F>)> {
        let mut v: Vec<_> = self.mult.iter().map(|(k, v)| (*k, v)).collect();
        v.sort_by_key(|x| x.0);
        v
    }
}

fn path_name<F>(q: &DgQuiver<F>, p: &[usize]) -> String {
    format!("[{}]", p.iter().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    type Q = Rational;

    #[test]
    fn a2_is_three_dimensional() {
        let q = DgQuiver::<Q>::new(&["1", "2"]).arrow("a", "1", "2", 0);
        let a = DgAlgebra::build(&q).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(DgAlgebra::<Q>::ground().dim(), 1);
    }

    #[test]
    fn gamma_builds_and_opposite_validates() {
        let a = DgAlgebra::build(&crate::corpus::gamma_a2::<Q>()).unwrap();
        // 6 idempotents, 9 arrows, paths of length 2..5 in the degree-0 line plus mixed ones.
        assert!(a.dim() > 21);
        let op = a.opposite();
        op.validate().unwrap();
        assert!(op.opposite() == a);
    }

    #[test]
    fn rejections() {
        let cyc = DgQuiver::<Q>::new(&["1"]).arrow("x", "1", "1", 0);
        assert!(matches!(DgAlgebra::build(&cyc), Err(AlgebraError::Cycle(_))));
        let pos = DgQuiver::<Q>::new(&["1", "2"]).arrow("x", "1", "2", 1);
        assert!(matches!(DgAlgebra::build(&pos), Err(AlgebraError::PositiveDegree(..))));
        let wrong = crate::corpus::gamma_a2::<Q>().diff("h1", &[(1, &["a"])]);
        assert!(matches!(DgAlgebra::build(&wrong), Err(AlgebraError::BadDifferential { .. })));
        assert!(matches!(DgAlgebra::build(&DgQuiver::<Q>::new(&[])), Err(AlgebraError::Empty)));
    }

    #[test]
    fn d_squared_witness() {
        // d(y) = x with x of degree -1 and d(x) = a: d²(y) = a ≠ 0.
        let q = DgQuiver::<Q>::new(&["1", "2"])
            .arrow("a", "1", "2", 0)
            .arrow("x", "1", "2", -1)
            .arrow("y", "1", "2", -2)
            .diff("x", &[(1, &["a"])])
            .diff("y", &[(1, &["x"])]);
        assert_eq!(DgAlgebra::build(&q).unwrap_err(), AlgebraError::DSquared("y".into()));
    }

    #[test]
    fn truncation_of_gamma() {
        let a = DgAlgebra::build(&crate::corpus::gamma_a2::<Q>()).unwrap();
        assert!(a.is_truncated(2));
        let t1 = std::sync::Arc::new(a.reduce_to_truncated(1));
        t1.validate().unwrap();
        let m = crate::module::DgModule::regular(&t1);
        assert_eq!(m.cohomology_dims(), std::collections::BTreeMap::from([(0, 11)]));
        assert!(a.reduce_to_truncated(2) == a);
    }
}
