//! Exact linear algebra over F_q: row reduction, spans, orthogonal
//! complements and enumeration of projective points.
//!
//! Vectors are plain `[Elem]` slices; the field travels alongside as a
//! [`FieldSpec`]. Subspaces are kept as the nonzero rows of a reduced row
//! echelon form, so two subspaces are equal exactly when their bases are.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

pub fn check_len(v: &[Elem], m: usize) -> Result<()> {
    if v.len() == m {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: m,
            found: v.len(),
        })
    }
}

/// Euclidean inner product `Σ x_i y_i`.
pub fn dot(field: &FieldSpec, x: &[Elem], y: &[Elem]) -> Result<Elem> {
    check_len(y, x.len())?;
    Ok(dot_unchecked(field, x, y))
}

#[inline]
pub(crate) fn dot_unchecked(field: &FieldSpec, x: &[Elem], y: &[Elem]) -> Elem {
    x.iter()
        .zip(y)
        .fold(Elem::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
}

pub fn scale(field: &FieldSpec, a: Elem, v: &[Elem]) -> Vec<Elem> {
    v.iter().map(|&x| field.mul(a, x)).collect()
}

/// `y += a * x`
pub fn axpy(field: &FieldSpec, a: Elem, x: &[Elem], y: &mut [Elem]) {
    if a.is_zero() {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = field.add(*yi, field.mul(a, xi));
    }
}

pub fn is_zero_vector(v: &[Elem]) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// Whether `x` is a scalar multiple of `y` (including `x = 0`).
pub fn is_proportional(field: &FieldSpec, x: &[Elem], y: &[Elem]) -> bool {
    let Some(j) = y.iter().position(|c| !c.is_zero()) else {
        return is_zero_vector(x);
    };
    let a = field.div(x[j], y[j]).expect("pivot is nonzero");
    x.iter().zip(y).all(|(&xi, &yi)| xi == field.mul(a, yi))
}

/// Scales `v` so that its first nonzero coordinate is 1.
pub fn normalize(field: &FieldSpec, v: &[Elem]) -> Vec<Elem> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(&lead) => scale(field, field.inv(lead).expect("nonzero"), v),
        None => v.to_vec(),
    }
}

/// Dense row-major matrix over F_q.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixF {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl std::fmt::Debug for MatrixF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

/// Output of [`MatrixF::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatrixF,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl MatrixF {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        MatrixF {
            field: field.clone(),
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut a = Self::zeros(field, n, n);
        for i in 0..n {
            a.set(i, i, Elem::ONE);
        }
        a
    }

    /// Stacks `rows` (all of length `cols`) into a matrix.
    pub fn from_rows<R: AsRef<[Elem]>>(field: &FieldSpec, cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            check_len(r, cols)?;
            for &c in r {
                field.elem(c.code())?;
            }
            data.extend_from_slice(r);
        }
        Ok(MatrixF {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> MatrixF {
        let mut t = MatrixF::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `x · A` for a row vector `x`.
    pub fn left_mul(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        check_len(x, self.rows)?;
        let mut out = vec![Elem::ZERO; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            axpy(&self.field, xi, self.row(i), &mut out);
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row echelon form. Pivots are taken column by column from the
    /// left, using the topmost remaining row with a nonzero entry; zero rows
    /// end up at the bottom.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(src) = (r..a.rows).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            a.swap_rows(r, src);
            let inv = f.inv(a.get(r, col)).expect("pivot is nonzero");
            for j in 0..a.cols {
                let v = f.mul(inv, a.get(r, j));
                a.set(r, j, v);
            }
            let pivot_row = a.row(r).to_vec();
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let c = a.get(i, col);
                if !c.is_zero() {
                    let start = i * a.cols;
                    axpy(f, f.neg(c), &pivot_row, &mut a.data[start..start + a.cols]);
                }
            }
            pivots.push(col);
            r += 1;
        }
        Rref {
            matrix: a,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        let mut e = EchelonBasis::new(&self.field, self.cols);
        for row in self.rows() {
            e.insert(row);
        }
        e.rank()
    }
}

/// Incrementally maintained echelon basis; cheaper than a full `rref` when
/// rows arrive one at a time and only the rank is needed.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    field: FieldSpec,
    m: usize,
    /// Each row is normalized with a 1 at its pivot.
    rows: Vec<(usize, Vec<Elem>)>,
}

impl EchelonBasis {
    pub fn new(field: &FieldSpec, m: usize) -> Self {
        EchelonBasis {
            field: field.clone(),
            m,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let mut w = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = w[*pivot];
            if !c.is_zero() {
                axpy(&self.field, self.field.neg(c), row, &mut w);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        debug_assert_eq!(v.len(), self.m);
        if self.rows.len() == self.m {
            return false;
        }
        let w = self.reduce(v);
        match w.iter().position(|c| !c.is_zero()) {
            Some(p) => {
                let w = scale(&self.field, self.field.inv(w[p]).expect("nonzero"), &w);
                self.rows.push((p, w));
                true
            }
            None => false,
        }
    }
}

/// Rank of the multiset `vectors` in F_q^m.
pub fn span_dim<R: AsRef<[Elem]>>(field: &FieldSpec, m: usize, vectors: &[R]) -> Result<usize> {
    let mut e = EchelonBasis::new(field, m);
    for v in vectors {
        check_len(v.as_ref(), m)?;
        e.insert(v.as_ref());
    }
    Ok(e.rank())
}

/// `S^⊥`, returned in canonical form.
pub fn nullspace<R: AsRef<[Elem]>>(field: &FieldSpec, m: usize, vectors: &[R]) -> Result<Subspace> {
    let a = MatrixF::from_rows(field, m, vectors)?;
    let Rref {
        matrix,
        rank,
        pivots,
    } = a.rref();
    let mut is_pivot = vec![false; m];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::with_capacity(m - rank);
    for free in (0..m).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Elem::ZERO; m];
        v[free] = Elem::ONE;
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(matrix.get(r, free));
        }
        basis.push(v);
    }
    Subspace::span(field, m, &basis)
}

/// A subspace of F_q^m held as its canonical (RREF) basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Subspace {
    m: usize,
    basis: Vec<Vec<Elem>>,
}

/// Unvalidated JSON form `{"m": int, "basis": [[int,...],...]}`.
#[derive(Debug, Clone, Deserialize)]
pub struct SubspaceJson {
    pub m: usize,
    pub basis: Vec<Vec<u32>>,
}

impl SubspaceJson {
    pub fn into_subspace(self, field: &FieldSpec) -> Result<Subspace> {
        let rows = self
            .basis
            .iter()
            .map(|r| r.iter().map(|&c| field.elem(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(field, self.m, &rows)
    }
}

impl Subspace {
    pub fn zero(m: usize) -> Self {
        Subspace {
            m,
            basis: Vec::new(),
        }
    }

    pub fn full(field: &FieldSpec, m: usize) -> Self {
        let id = MatrixF::identity(field, m);
        Subspace {
            m,
            basis: id.rows().map(<[Elem]>::to_vec).collect(),
        }
    }

    /// `Span(S)` for vectors of length `m`; an empty `S` gives `{0}`.
    pub fn span<R: AsRef<[Elem]>>(field: &FieldSpec, m: usize, vectors: &[R]) -> Result<Self> {
        let a = MatrixF::from_rows(field, m, vectors)?;
        let r = a.rref();
        let basis = r.matrix.rows().take(r.rank).map(<[Elem]>::to_vec).collect();
        Ok(Subspace { m, basis })
    }

    pub fn ambient(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    pub fn contains(&self, field: &FieldSpec, v: &[Elem]) -> bool {
        let mut e = EchelonBasis::new(field, self.m);
        for b in &self.basis {
            e.insert(b);
        }
        e.contains(v)
    }

    pub fn orthogonal_complement(&self, field: &FieldSpec) -> Subspace {
        nullspace(field, self.m, &self.basis).expect("basis rows have length m")
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.m,
                found: other.m,
            })
        }
    }

    pub fn sum(&self, field: &FieldSpec, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let rows: Vec<&Vec<Elem>> = self.basis.iter().chain(&other.basis).collect();
        Subspace::span(field, self.m, &rows)
    }

    /// `U ∩ V = (U^⊥ + V^⊥)^⊥`.
    pub fn intersection(&self, field: &FieldSpec, other: &Subspace) -> Result<Subspace> {
        let s = self
            .orthogonal_complement(field)
            .sum(field, &other.orthogonal_complement(field))?;
        Ok(s.orthogonal_complement(field))
    }

    /// Every vector of the subspace, see [`enumerate_subspace`].
    pub fn vectors<'a>(&'a self, field: &'a FieldSpec) -> SubspaceIter<'a> {
        enumerate_subspace(field, self)
    }
}

/// `dim U + dim V - dim(U + V)`.
pub fn intersection_dim(field: &FieldSpec, u: &Subspace, v: &Subspace) -> Result<usize> {
    u.same_ambient(v)?;
    let rows: Vec<&Vec<Elem>> = u.basis.iter().chain(&v.basis).collect();
    Ok(u.dim() + v.dim() - span_dim(field, u.m, &rows)?)
}

/// All `q^k` vectors `Σ λ_i b_i` of a subspace, ordered lexicographically by
/// the coefficient tuple `(λ_1, ..., λ_k)`; the zero vector comes first.
pub fn enumerate_subspace<'a>(field: &'a FieldSpec, u: &'a Subspace) -> SubspaceIter<'a> {
    SubspaceIter {
        field,
        space: u,
        next: 0,
        end: (field.q() as u64).pow(u.dim() as u32),
    }
}

pub struct SubspaceIter<'a> {
    field: &'a FieldSpec,
    space: &'a Subspace,
    next: u64,
    end: u64,
}

impl Iterator for SubspaceIter<'_> {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        if self.next >= self.end {
            return None;
        }
        let q = self.field.q() as u64;
        let mut idx = self.next;
        self.next += 1;
        let mut v = vec![Elem::ZERO; self.space.m];
        // the last basis vector's coefficient is the least significant digit
        for b in self.space.basis.iter().rev() {
            let lambda = Elem::from_raw((idx % q) as u32);
            idx /= q;
            axpy(self.field, lambda, b, &mut v);
        }
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for SubspaceIter<'_> {}

/// Normalized representatives of the points of PG(m-1, q): one vector per
/// scalar class, first nonzero coordinate equal to 1, in lexicographic order.
///
/// Representatives are addressable by index so that parallel consumers can
/// split the range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectiveSpace {
    q: u32,
    m: usize,
}

impl ProjectiveSpace {
    pub fn new(field: &FieldSpec, m: usize) -> Self {
        assert!(m >= 1);
        ProjectiveSpace { q: field.q(), m }
    }

    /// `(q^m - 1) / (q - 1)`
    pub fn len(&self) -> u64 {
        let q = self.q as u64;
        (q.pow(self.m as u32) - 1) / (q - 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, mut index: u64) -> Vec<Elem> {
        assert!(index < self.len(), "projective index out of range");
        let q = self.q as u64;
        // Points with leading 1 at position j number q^(m-1-j); lexicographic
        // order lists larger j (more leading zeros) first.
        let mut lead = self.m - 1;
        loop {
            let group = q.pow((self.m - 1 - lead) as u32);
            if index < group {
                break;
            }
            index -= group;
            lead -= 1;
        }
        let mut v = vec![Elem::ZERO; self.m];
        v[lead] = Elem::ONE;
        for j in (lead + 1..self.m).rev() {
            v[j] = Elem::from_raw((index % q) as u32);
            index /= q;
        }
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

/// `projective_representatives(m, field)` as a materialized list.
pub fn projective_representatives(field: &FieldSpec, m: usize) -> Vec<Vec<Elem>> {
    ProjectiveSpace::new(field, m).iter().collect()
}

/// Every vector of F_q^m in lexicographic order, zero first.
pub fn all_vectors(field: &FieldSpec, m: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let q = field.q() as u64;
    (0..q.pow(m as u32)).map(move |mut idx| {
        let mut v = vec![Elem::ZERO; m];
        for j in (0..m).rev() {
            v[j] = Elem::from_raw((idx % q) as u32);
            idx /= q;
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn v(f: &FieldSpec, c: &[u32]) -> Vec<Elem> {
        c.iter().map(|&x| f.elem(x).unwrap()).collect()
    }

    fn unit(f: &FieldSpec, m: usize, i: usize) -> Vec<Elem> {
        let mut e = vec![Elem::ZERO; m];
        e[i] = Elem::ONE;
        let _ = f;
        e
    }

    #[test]
    fn dot_products() {
        let f3 = make_field(3, 1).unwrap();
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(
            dot(&f2, &v(&f2, &[1, 0, 0]), &v(&f2, &[1, 0, 0])).unwrap(),
            Elem::ONE
        );
        assert_eq!(
            dot(&f3, &v(&f3, &[1, 1]), &v(&f3, &[1, 2])).unwrap(),
            Elem::ZERO
        );
        assert_eq!(
            dot(&f3, &v(&f3, &[1, 2]), &v(&f3, &[2, 2])).unwrap(),
            Elem::ZERO
        );
        assert!(matches!(
            dot(&f3, &v(&f3, &[1]), &v(&f3, &[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rref_basic_cases() {
        let f = make_field(3, 1).unwrap();
        let id = MatrixF::identity(&f, 4);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 4);
        assert_eq!(r.pivots, vec![0, 1, 2, 3]);

        let z = MatrixF::zeros(&f, 3, 4);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);

        let dup = MatrixF::from_rows(&f, 4, &[v(&f, &[1, 1, 0, 0]), v(&f, &[1, 1, 0, 0])]).unwrap();
        let r = dup.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.matrix.row(0), &v(&f, &[1, 1, 0, 0])[..]);
        assert!(is_zero_vector(r.matrix.row(1)));
    }

    #[test]
    fn rref_normalizes_pivots() {
        let f = make_field(5, 1).unwrap();
        let a = MatrixF::from_rows(&f, 3, &[v(&f, &[0, 2, 4]), v(&f, &[3, 1, 1])]).unwrap();
        let r = a.rref();
        assert_eq!(r.pivots, vec![0, 1]);
        // row0 = 2*(3,1,1) - ... reduce by hand: (3,1,1)->(1,2,2); (0,2,4)->(0,1,2); row0 -= 2*row1 -> (1,0,3)
        assert_eq!(r.matrix.row(0), &v(&f, &[1, 0, 3])[..]);
        assert_eq!(r.matrix.row(1), &v(&f, &[0, 1, 2])[..]);
    }

    #[test]
    fn nullspace_cases() {
        let f = make_field(2, 2).unwrap();
        let empty: Vec<Vec<Elem>> = vec![];
        assert_eq!(nullspace(&f, 4, &empty).unwrap(), Subspace::full(&f, 4));
        let all: Vec<_> = (0..4).map(|i| unit(&f, 4, i)).collect();
        assert_eq!(nullspace(&f, 4, &all).unwrap().dim(), 0);
        let e12 = vec![unit(&f, 4, 0), unit(&f, 4, 1)];
        let ns = nullspace(&f, 4, &e12).unwrap();
        assert_eq!(
            ns,
            Subspace::span(&f, 4, &[unit(&f, 4, 2), unit(&f, 4, 3)]).unwrap()
        );
        assert_eq!(span_dim(&f, 4, &e12).unwrap() + ns.dim(), 4);
    }

    #[test]
    fn span_dim_cases() {
        let f = make_field(3, 1).unwrap();
        let x = v(&f, &[1, 2, 0]);
        assert_eq!(
            span_dim(&f, 3, &[x.clone(), scale(&f, Elem::from_raw(2), &x)]).unwrap(),
            1
        );
        let basis: Vec<_> = (0..3).map(|i| unit(&f, 3, i)).collect();
        assert_eq!(span_dim(&f, 3, &basis).unwrap(), 3);
        let empty: Vec<Vec<Elem>> = vec![];
        assert_eq!(span_dim(&f, 3, &empty).unwrap(), 0);
    }

    #[test]
    fn intersection_dims() {
        let f = make_field(2, 1).unwrap();
        let u = Subspace::span(&f, 4, &[unit(&f, 4, 0), unit(&f, 4, 1)]).unwrap();
        let w = Subspace::span(&f, 4, &[unit(&f, 4, 2), unit(&f, 4, 3)]).unwrap();
        let x = Subspace::span(&f, 4, &[unit(&f, 4, 1), unit(&f, 4, 2)]).unwrap();
        assert_eq!(intersection_dim(&f, &u, &u).unwrap(), 2);
        assert_eq!(intersection_dim(&f, &u, &w).unwrap(), 0);
        assert_eq!(intersection_dim(&f, &u, &x).unwrap(), 1);
        assert_eq!(u.intersection(&f, &x).unwrap().basis(), &[unit(&f, 4, 1)]);
        // E_0 = <e1, e2>, E_1 = <e1+e3, e2+e4>
        let e1 = Subspace::span(&f, 4, &[v(&f, &[1, 0, 1, 0]), v(&f, &[0, 1, 0, 1])]).unwrap();
        assert_eq!(intersection_dim(&f, &u, &e1).unwrap(), 0);
    }

    #[test]
    fn projective_counts_and_order() {
        let f2 = make_field(2, 1).unwrap();
        let reps = projective_representatives(&f2, 2);
        assert_eq!(
            reps,
            vec![v(&f2, &[0, 1]), v(&f2, &[1, 0]), v(&f2, &[1, 1])]
        );
        assert_eq!(
            projective_representatives(&make_field(3, 1).unwrap(), 2).len(),
            4
        );
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(ProjectiveSpace::new(&f4, 4).len(), 85);
        assert_eq!(projective_representatives(&f4, 4).len(), 85);
    }

    #[test]
    fn projective_points_partition_nonzero_vectors() {
        for (p, e, m) in [(2, 1, 4), (3, 1, 3), (2, 2, 3), (5, 1, 2)] {
            let f = make_field(p, e).unwrap();
            let reps = projective_representatives(&f, m);
            let mut sorted = reps.clone();
            sorted.sort();
            assert_eq!(sorted, reps, "lexicographic order");
            let set: HashSet<_> = reps.iter().cloned().collect();
            let mut hits = 0;
            for x in all_vectors(&f, m).skip(1) {
                let n = normalize(&f, &x);
                assert!(set.contains(&n));
                hits += 1;
            }
            assert_eq!(hits as u64, (f.q() as u64 - 1) * reps.len() as u64);
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[i + 1..] {
                    assert!(!is_proportional(&f, a, b));
                }
            }
        }
    }

    #[test]
    fn subspace_enumeration() {
        let f = make_field(3, 1).unwrap();
        let zero = Subspace::zero(3);
        assert_eq!(
            zero.vectors(&f).collect::<Vec<_>>(),
            vec![vec![Elem::ZERO; 3]]
        );
        let line = Subspace::span(&f, 3, &[v(&f, &[1, 2, 0])]).unwrap();
        assert_eq!(
            line.vectors(&f).collect::<Vec<_>>(),
            vec![v(&f, &[0, 0, 0]), v(&f, &[1, 2, 0]), v(&f, &[2, 1, 0])]
        );
        let plane = Subspace::span(&f, 4, &[v(&f, &[1, 0, 1, 2]), v(&f, &[0, 1, 1, 1])]).unwrap();
        let all: Vec<_> = plane.vectors(&f).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 9);
        assert!(all.iter().all(|x| plane.contains(&f, x)));
    }

    fn arb_case() -> impl Strategy<Value = ((u32, u32), usize, Vec<Vec<u32>>)> {
        prop_oneof![Just((2u32, 1u32)), Just((3, 1)), Just((2, 2)), Just((5, 1))].prop_flat_map(
            |(p, e)| {
                let q = p.pow(e);
                (1usize..=5).prop_flat_map(move |m| {
                    let rows = prop::collection::vec(prop::collection::vec(0..q, m), 0..=m + 2);
                    (Just((p, e)), Just(m), rows)
                })
            },
        )
    }

    fn to_rows(f: &FieldSpec, raw: &[Vec<u32>]) -> Vec<Vec<Elem>> {
        raw.iter().map(|r| v(f, r)).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn span_plus_dual_is_ambient(((p, e), m, raw) in arb_case()) {
            let f = make_field(p, e).unwrap();
            let s = to_rows(&f, &raw);
            let ns = nullspace(&f, m, &s).unwrap();
            prop_assert_eq!(span_dim(&f, m, &s).unwrap() + ns.dim(), m);
            for b in ns.basis() {
                for x in &s {
                    prop_assert!(dot(&f, b, x).unwrap().is_zero());
                }
            }
        }

        #[test]
        fn double_complement_is_span(((p, e), m, raw) in arb_case()) {
            let f = make_field(p, e).unwrap();
            let s = to_rows(&f, &raw);
            let span = Subspace::span(&f, m, &s).unwrap();
            prop_assert_eq!(span.orthogonal_complement(&f).orthogonal_complement(&f), span);
        }

        #[test]
        fn rref_is_idempotent(((p, e), m, raw) in arb_case()) {
            let f = make_field(p, e).unwrap();
            let a = MatrixF::from_rows(&f, m, &to_rows(&f, &raw)).unwrap();
            let once = a.rref();
            let twice = once.matrix.rref();
            prop_assert_eq!(&twice.matrix, &once.matrix);
            prop_assert_eq!(once.rank, a.rank());
        }
    }
}
