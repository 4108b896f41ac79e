//! Dense matrices with the textbook eliminations, plus a sparse incremental
//! echelon basis used by the homological code.

use crate::field::Field;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("dimension mismatch: {0}")]
pub struct DimError(pub String);

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect())
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix<F>) -> Result<Matrix<F>, DimError> {
        if self.cols != o.rows {
            return Err(DimError(format!("{}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add_ref(&a.mul_ref(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Reduced row echelon form with first-nonzero pivoting.
    pub fn rref(&self) -> (Matrix<F>, usize, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].inv().unwrap();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul_ref(&inv);
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let v = m[(i, j)].sub_ref(&f.mul_ref(&m[(r, j)]));
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Columns form a basis of the right null space.
    pub fn kernel_basis(&self) -> Matrix<F> {
        let (red, rank, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (t, &f) in free.iter().enumerate() {
            k[(f, t)] = F::one();
            for (i, &p) in pivots.iter().enumerate().take(rank) {
                k[(p, t)] = -red[(i, f)].clone();
            }
        }
        k
    }

    /// Solve `self * x = b`: a particular solution (if any) and the kernel basis.
    pub fn solve(&self, b: &Matrix<F>) -> Result<(Option<Matrix<F>>, Matrix<F>), DimError> {
        if b.rows != self.rows {
            return Err(DimError(format!("rhs has {} rows, matrix has {}", b.rows, self.rows)));
        }
        let kernel = self.kernel_basis();
        let mut aug = Matrix::zeros(self.rows, self.cols + b.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..b.cols {
                aug[(i, self.cols + j)] = b[(i, j)].clone();
            }
        }
        let (red, rank, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok((None, kernel));
        }
        let mut x = Matrix::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate().take(rank) {
            for j in 0..b.cols {
                x[(p, j)] = red[(i, self.cols + j)].clone();
            }
        }
        Ok((Some(x), kernel))
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SVec<F> {
    pub e: Vec<(usize, F)>,
}

impl<F> Default for SVec<F> {
    fn default() -> Self {
        SVec { e: Vec::new() }
    }
}

impl<F: Field> SVec<F> {
    pub fn new() -> Self {
        SVec { e: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SVec { e: vec![(i, F::one())] }
    }

    pub fn single(i: usize, c: F) -> Self {
        if c.is_zero() {
            SVec::new()
        } else {
            SVec { e: vec![(i, c)] }
        }
    }

    /// Build from unsorted terms, merging duplicates.
    pub fn from_terms(mut t: Vec<(usize, F)>) -> Self {
        t.sort_by_key(|x| x.0);
        let mut e: Vec<(usize, F)> = Vec::with_capacity(t.len());
        for (i, c) in t {
            match e.last_mut() {
                Some((j, d)) if *j == i => *d = d.add_ref(&c),
                _ => e.push((i, c)),
            }
        }
        e.retain(|x| !x.1.is_zero());
        SVec { e }
    }

    pub fn from_dense(v: &[F]) -> Self {
        SVec {
            e: v.iter().enumerate().filter(|x| !x.1.is_zero()).map(|(i, c)| (i, c.clone())).collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<F> {
        let mut v = vec![F::zero(); n];
        for (i, c) in &self.e {
            v[*i] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.e.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.e.len()
    }

    pub fn get(&self, i: usize) -> F {
        match self.e.binary_search_by_key(&i, |x| x.0) {
            Ok(k) => self.e[k].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn lead(&self) -> Option<usize> {
        self.e.first().map(|x| x.0)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return SVec::new();
        }
        SVec { e: self.e.iter().map(|(i, x)| (*i, x.mul_ref(c))).collect() }
    }

    pub fn neg(&self) -> Self {
        SVec { e: self.e.iter().map(|(i, x)| (*i, -x.clone())).collect() }
    }

    /// `self + c * o`.
    pub fn axpy(&self, c: &F, o: &SVec<F>) -> Self {
        if c.is_zero() || o.is_zero() {
            return self.clone();
        }
        let mut e = Vec::with_capacity(self.e.len() + o.e.len());
        let (mut a, mut b) = (0, 0);
        while a < self.e.len() || b < o.e.len() {
            let ia = self.e.get(a).map_or(usize::MAX, |x| x.0);
            let ib = o.e.get(b).map_or(usize::MAX, |x| x.0);
            if ia < ib {
                e.push(self.e[a].clone());
                a += 1;
            } else if ib < ia {
                e.push((ib, o.e[b].1.mul_ref(c)));
                b += 1;
            } else {
                let v = self.e[a].1.add_ref(&o.e[b].1.mul_ref(c));
                if !v.is_zero() {
                    e.push((ia, v));
                }
                a += 1;
                b += 1;
            }
        }
        SVec { e }
    }

    pub fn add(&self, o: &SVec<F>) -> Self {
        self.axpy(&F::one(), o)
    }

    pub fn sub(&self, o: &SVec<F>) -> Self {
        self.axpy(&-F::one(), o)
    }

    /// Reindex through `f`; entries mapped to `None` are dropped.
    pub fn remap(&self, f: impl Fn(usize) -> Option<usize>) -> Self {
        SVec::from_terms(self.e.iter().filter_map(|(i, c)| f(*i).map(|j| (j, c.clone()))).collect())
    }

    pub fn shift_index(&self, off: usize) -> Self {
        SVec { e: self.e.iter().map(|(i, c)| (i + off, c.clone())).collect() }
    }
}

impl<F: fmt::Debug> fmt::Debug for SVec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.e.iter().map(|(i, c)| format!("{c:?}@{i}")).collect();
        write!(f, "{{{}}}", t.join(" "))
    }
}

/// Accumulate `Σ c_i v_i` efficiently via a hash map.
#[derive(Clone)]
pub struct Acc<F> {
    m: HashMap<usize, F>,
}

impl<F: Field> Default for Acc<F> {
    fn default() -> Self {
        Acc { m: HashMap::new() }
    }
}

impl<F: Field> Acc<F> {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn add_term(&mut self, i: usize, c: F) {
        if c.is_zero() {
            return;
        }
        let e = self.m.entry(i).or_insert_with(F::zero);
        *e = e.add_ref(&c);
    }
    pub fn add_vec(&mut self, c: &F, v: &SVec<F>) {
        if c.is_zero() {
            return;
        }
        for (i, x) in &v.e {
            self.add_term(*i, c.mul_ref(x));
        }
    }
    pub fn finish(self) -> SVec<F> {
        SVec::from_terms(self.m.into_iter().collect())
    }
}

/// Incremental reduced echelon basis of a subspace of `k^n`.
///
/// Rows are kept fully reduced (pivot 1, zero in every other pivot column), so
/// coordinates of a member vector are read off at the pivot columns. With
/// tracking enabled every row also records the combination of inserted vectors
/// that produced it, which gives kernels and particular solutions.
#[derive(Clone)]
pub struct Echelon<F> {
    pub rows: Vec<SVec<F>>,
    pub pivots: Vec<usize>,
    pos: HashMap<usize, usize>,
    track: Option<Vec<SVec<F>>>,
    inserted: usize,
}

pub enum Inserted<F> {
    /// New row index.
    Row(usize),
    /// The vector was dependent; this combination of inserted vectors is zero.
    Relation(SVec<F>),
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Echelon { rows: Vec::new(), pivots: Vec::new(), pos: HashMap::new(), track: None, inserted: 0 }
    }

    pub fn tracked() -> Self {
        Echelon { track: Some(Vec::new()), ..Self::new() }
    }

    pub fn from_vectors<'a>(vs: impl IntoIterator<Item = &'a SVec<F>>) -> Self {
        let mut e = Self::new();
        for v in vs {
            e.insert(v.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pos.contains_key(&c)
    }

    /// Residue of `v` after subtracting its pivot components, and the
    /// coefficients (per row) subtracted.
    fn reduce_with(&self, v: &SVec<F>) -> (SVec<F>, Vec<(usize, F)>) {
        let hits: Vec<(usize, F)> =
            v.e.iter().filter_map(|(c, x)| self.pos.get(c).map(|&r| (r, x.clone()))).collect();
        if hits.is_empty() {
            return (v.clone(), hits);
        }
        if hits.len() == 1 {
            let (r, c) = &hits[0];
            return (v.axpy(&-c.clone(), &self.rows[*r]), hits);
        }
        let mut acc = Acc::new();
        acc.add_vec(&F::one(), v);
        for (r, c) in &hits {
            acc.add_vec(&-c.clone(), &self.rows[*r]);
        }
        (acc.finish(), hits)
    }

    pub fn reduce(&self, v: &SVec<F>) -> SVec<F> {
        self.reduce_with(v).0
    }

    pub fn contains(&self, v: &SVec<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of a member of the span in terms of `rows`.
    pub fn coords(&self, v: &SVec<F>) -> Option<SVec<F>> {
        let (r, hits) = self.reduce_with(v);
        if !r.is_zero() {
            return None;
        }
        Some(SVec::from_terms(hits))
    }

    /// Express a member of the span as a combination of the inserted vectors.
    pub fn express(&self, v: &SVec<F>) -> Option<SVec<F>> {
        let tr = self.track.as_ref().expect("echelon not tracked");
        let (r, hits) = self.reduce_with(v);
        if !r.is_zero() {
            return None;
        }
        let mut acc = Acc::new();
        for (row, c) in hits {
            acc.add_vec(&c, &tr[row]);
        }
        Some(acc.finish())
    }

    pub fn insert(&mut self, v: SVec<F>) -> Inserted<F> {
        let idx = self.inserted;
        self.inserted += 1;
        let (mut r, hits) = self.reduce_with(&v);
        let mut combo = None;
        if let Some(tr) = &self.track {
            let mut acc = Acc::new();
            acc.add_term(idx, F::one());
            for (row, c) in &hits {
                acc.add_vec(&-c.clone(), &tr[*row]);
            }
            combo = Some(acc.finish());
        }
        let Some(p) = r.lead() else {
            return Inserted::Relation(combo.unwrap_or_default());
        };
        let inv = r.e[0].1.inv().unwrap();
        r = r.scale(&inv);
        let mut combo = combo.map(|c| c.scale(&inv));
        // Clear column p from existing rows.
        for i in 0..self.rows.len() {
            let c = self.rows[i].get(p);
            if !c.is_zero() {
                let neg = -c;
                self.rows[i] = self.rows[i].axpy(&neg, &r);
                if let (Some(tr), Some(cb)) = (self.track.as_mut(), combo.as_ref()) {
                    tr[i] = tr[i].axpy(&neg, cb);
                }
            }
        }
        let row = self.rows.len();
        self.rows.push(r);
        self.pivots.push(p);
        self.pos.insert(p, row);
        if let (Some(tr), Some(cb)) = (self.track.as_mut(), combo.take()) {
            tr.push(cb);
        }
        Inserted::Row(row)
    }

    /// Insert and report whether the span grew.
    pub fn add(&mut self, v: SVec<F>) -> bool {
        matches!(self.insert(v), Inserted::Row(_))
    }
}

/// Kernel of the linear map whose columns are `cols` (each a vector in the target).
pub fn kernel_of_columns<F: Field>(cols: &[SVec<F>]) -> Vec<SVec<F>> {
    let mut e = Echelon::tracked();
    let mut out = Vec::new();
    for c in cols {
        if let Inserted::Relation(r) = e.insert(c.clone()) {
            out.push(r);
        }
    }
    out
}

/// Solve `Σ x_j cols_j = b`.
pub fn solve_columns<F: Field>(cols: &[SVec<F>], b: &SVec<F>) -> Option<SVec<F>> {
    let mut e = Echelon::tracked();
    for c in cols {
        e.insert(c.clone());
    }
    e.express(b)
}

/// Image rank of the columns.
pub fn rank_of_columns<F: Field>(cols: &[SVec<F>]) -> usize {
    let mut e = Echelon::new();
    for c in cols {
        e.insert(c.clone());
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    type Q = Rational;

    #[test]
    fn rref_examples() {
        let (_, r, p) = Matrix::<Q>::identity(2).rref();
        assert_eq!((r, p), (2, vec![0, 1]));
        let (_, r, p) = Matrix::<Q>::from_i64(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!((r, p), (1, vec![0]));
        assert_eq!(Matrix::<Fp<2>>::from_i64(&[&[1, 1], &[1, 1]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::<Q>::identity(3).kernel_basis().cols, 0);
        assert_eq!(Matrix::<Q>::zeros(3, 3).kernel_basis().cols, 3);
        let k = Matrix::<Q>::from_i64(&[&[1, -1]]).kernel_basis();
        assert_eq!(k.cols, 1);
        assert_eq!(k[(0, 0)], k[(1, 0)]);
    }

    #[test]
    fn solve_examples() {
        let m = Matrix::<Q>::from_i64(&[&[1, 2]]);
        let (x, k) = m.solve(&Matrix::from_i64(&[&[3]])).unwrap();
        assert_eq!(x.unwrap(), Matrix::from_i64(&[&[3], &[0]]));
        assert_eq!(k, Matrix::from_i64(&[&[-2], &[1]]));
        let (x, _) = Matrix::<Q>::from_i64(&[&[0]]).solve(&Matrix::from_i64(&[&[1]])).unwrap();
        assert!(x.is_none());
        assert!(m.solve(&Matrix::zeros(2, 1)).is_err());
    }

    #[test]
    fn echelon_tracks_relations() {
        let v = |xs: &[i64]| SVec::from_dense(&xs.iter().map(|&x| Q::from_i64(x)).collect::<Vec<_>>());
        let cols = vec![v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 2]), v(&[2, 0, 2])];
        let k = kernel_of_columns(&cols);
        assert_eq!(k.len(), 2);
        for r in &k {
            let mut s = SVec::new();
            for (j, c) in &r.e {
                s = s.axpy(c, &cols[*j]);
            }
            assert!(s.is_zero());
        }
        let x = solve_columns(&cols[..2], &v(&[3, 4, 7])).unwrap();
        assert_eq!(x, v(&[3, 4]));
        assert!(solve_columns(&cols[..2], &v(&[1, 0, 0])).is_none());
    }

    fn small_matrix() -> impl proptest::strategy::Strategy<Value = Matrix<Q>> {
        use proptest::prelude::*;
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
                .prop_map(|rows| Matrix::from_rows(rows.into_iter().map(|row| row.into_iter().map(Q::from_i64).collect()).collect()))
        })
    }

    proptest::proptest! {
        #[test]
        fn rank_plus_nullity(m in small_matrix()) {
            let k = m.kernel_basis();
            proptest::prop_assert_eq!(m.rank() + k.cols, m.cols);
            proptest::prop_assert!(m.mul(&k).unwrap().is_zero());
            proptest::prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn sparse_and_dense_ranks_agree(m in small_matrix()) {
            let cols: Vec<SVec<Q>> = (0..m.cols).map(|j| SVec::from_dense(&m.column(j))).collect();
            proptest::prop_assert_eq!(rank_of_columns(&cols), m.rank());
            proptest::prop_assert_eq!(kernel_of_columns(&cols).len(), m.cols - m.rank());
        }
    }
}
