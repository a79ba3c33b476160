//! Dense matrices over a [`FieldSpec`].
//!
//! Entries are kept as raw canonical indices next to the owning field, so
//! every matrix is homogeneous by construction. A matrix with zero rows is a
//! legal value (the zero subspace) and flows through every operation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrices live over different fields")]
    SpecMismatch,
    #[error("matrix has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("not a permutation of 0..{0}")]
    BadPermutation(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Checks that `perm` is a permutation of `0..n`.
pub fn check_permutation(perm: &[usize], n: usize) -> Result<(), MatrixError> {
    if perm.len() != n {
        return Err(MatrixError::BadPermutation(n));
    }
    let mut seen = vec![false; n];
    for &j in perm {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(MatrixError::BadPermutation(n));
        }
    }
    Ok(())
}

/// `first ∘ then`: column `j` of the result is column `first[then[j]]` of the source.
pub fn compose_permutations(first: &[usize], then: &[usize]) -> Vec<usize> {
    then.iter().map(|&j| first[j]).collect()
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (j, &src) in perm.iter().enumerate() {
        inv[src] = j;
    }
    inv
}

impl FieldMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        FieldMatrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Row-major construction; every entry must belong to `field`.
    pub fn new(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        entries: &[FieldElement],
    ) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|a| !field.contains(*a)) {
            return Err(MatrixError::SpecMismatch);
        }
        let data = entries.iter().map(|a| a.index()).collect();
        Ok(FieldMatrix { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(
        field: &FieldSpec,
        cols: usize,
        rows: &[Vec<FieldElement>],
    ) -> Result<Self, MatrixError> {
        let flat: Vec<FieldElement> = rows.iter().flatten().copied().collect();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatrixError::ShapeMismatch("ragged rows".into()));
        }
        Self::new(field, rows.len(), cols, &flat)
    }

    /// Builds from small integers embedded through the prime subfield.
    pub fn from_ints(field: &FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = field.from_int(x).index();
            }
        }
        m
    }

    pub(crate) fn from_raw(field: &FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        FieldMatrix { field: field.clone(), rows, cols, data }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        assert!(i < self.rows && j < self.cols);
        self.field.wrap(self.data[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, value: FieldElement) -> Result<(), MatrixError> {
        if !self.field.contains(value) {
            return Err(MatrixError::SpecMismatch);
        }
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = value.index();
        Ok(())
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.data
    }

    pub(crate) fn raw_row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row(&self, i: usize) -> Vec<FieldElement> {
        self.raw_row(i).iter().map(|&x| self.field.wrap(x)).collect()
    }

    pub fn entries(&self) -> Vec<FieldElement> {
        self.data.iter().map(|&x| self.field.wrap(x)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn same_field(&self, other: &FieldMatrix) -> Result<(), MatrixError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(MatrixError::SpecMismatch)
        }
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut data = vec![0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        FieldMatrix::from_raw(&self.field, self.cols, self.rows, data)
    }

    /// Applies `x ↦ x^{p^l}` to every entry.
    pub fn frobenius(&self, l: u32) -> FieldMatrix {
        let data = self.data.iter().map(|&x| self.field.frobenius_raw(x, l)).collect();
        FieldMatrix::from_raw(&self.field, self.rows, self.cols, data)
    }

    /// Entrywise `x ↦ x^q` over GF(q²).
    pub fn conjugate(&self) -> Result<FieldMatrix, MatrixError> {
        self.field.q()?;
        Ok(self.frobenius(self.field.e() / 2))
    }

    /// `M̄^τ`.
    pub fn conj_transpose(&self) -> Result<FieldMatrix, MatrixError> {
        Ok(self.conjugate()?.transpose())
    }

    pub fn matmul(&self, other: &FieldMatrix) -> Result<FieldMatrix, MatrixError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * other.cols..(i + 1) * other.cols];
            for t in 0..self.cols {
                let a = self.data[i * self.cols + t];
                if a == 0 {
                    continue;
                }
                for (dst, &b) in acc.iter_mut().zip(other.raw_row(t)) {
                    *dst = f.add_raw(*dst, f.mul_raw(a, b));
                }
            }
        }
        Ok(FieldMatrix::from_raw(f, self.rows, other.cols, out))
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &FieldMatrix) -> Result<FieldMatrix, MatrixError> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "stacking {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FieldMatrix::from_raw(&self.field, self.rows + other.rows, self.cols, data))
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &FieldMatrix) -> Result<FieldMatrix, MatrixError> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(MatrixError::ShapeMismatch(format!(
                "joining {} and {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.raw_row(i));
            data.extend_from_slice(other.raw_row(i));
        }
        Ok(FieldMatrix::from_raw(&self.field, self.rows, cols, data))
    }

    /// Columns `perm[0], perm[1], …` of `self`, in that order (may repeat or drop).
    pub fn select_columns(&self, perm: &[usize]) -> FieldMatrix {
        let mut data = Vec::with_capacity(self.rows * perm.len());
        for i in 0..self.rows {
            let row = self.raw_row(i);
            data.extend(perm.iter().map(|&j| row[j]));
        }
        FieldMatrix::from_raw(&self.field, self.rows, perm.len(), data)
    }

    pub fn select_rows(&self, rows: &[usize]) -> FieldMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.raw_row(i));
        }
        FieldMatrix::from_raw(&self.field, rows.len(), self.cols, data)
    }

    pub fn column_block(&self, range: std::ops::Range<usize>) -> FieldMatrix {
        let cols: Vec<usize> = range.collect();
        self.select_columns(&cols)
    }

    /// Multiplies column `j` by `weights[j]`.
    pub fn scale_columns(&self, weights: &[FieldElement]) -> Result<FieldMatrix, MatrixError> {
        if weights.len() != self.cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "{} weights for {} columns",
                weights.len(),
                self.cols
            )));
        }
        if weights.iter().any(|w| !self.field.contains(*w)) {
            return Err(MatrixError::SpecMismatch);
        }
        let f = &self.field;
        let mut data = self.data.clone();
        for row in data.chunks_mut(self.cols.max(1)) {
            for (x, w) in row.iter_mut().zip(weights) {
                *x = f.mul_raw(*x, w.index());
            }
        }
        Ok(FieldMatrix::from_raw(f, self.rows, self.cols, data))
    }

    /// Reduced row echelon form and its pivot columns.
    ///
    /// Pivot search scans columns left to right and takes the first nonzero
    /// entry at or below the current row.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let f = &self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(sel) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
                continue;
            };
            if sel != r {
                for j in 0..cols {
                    m.swap(sel * cols + j, r * cols + j);
                }
            }
            let inv = f.inv_raw(m[r * cols + c]);
            for j in c..cols {
                m[r * cols + j] = f.mul_raw(m[r * cols + j], inv);
            }
            let pivot_row: Vec<u32> = m[r * cols..(r + 1) * cols].to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = m[i * cols + c];
                if factor == 0 {
                    continue;
                }
                let neg = f.neg_raw(factor);
                for j in c..cols {
                    let x = pivot_row[j];
                    if x != 0 {
                        m[i * cols + j] = f.add_raw(m[i * cols + j], f.mul_raw(neg, x));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (FieldMatrix::from_raw(f, rows, cols, m), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// The nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> FieldMatrix {
        let (r, pivots) = self.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        r.select_rows(&keep)
    }

    /// Basis (as rows) of `{x : M·x^τ = 0}`, one vector per free column.
    pub fn null_space(&self) -> FieldMatrix {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        pivots.iter().for_each(|&c| is_pivot[c] = true);
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut data = vec![0u32; free.len() * n];
        for (b, &fc) in free.iter().enumerate() {
            data[b * n + fc] = 1;
            for (pr, &pc) in pivots.iter().enumerate() {
                data[b * n + pc] = f.neg_raw(r.data[pr * n + fc]);
            }
        }
        FieldMatrix::from_raw(f, free.len(), n, data)
    }

    /// Basis of `rowspace(self) ∩ rowspace(other)`, computed as the null
    /// space of the stacked null spaces.
    pub fn intersect_row_spaces(&self, other: &FieldMatrix) -> Result<FieldMatrix, MatrixError> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "intersecting spaces of length {} and {}",
                self.cols, other.cols
            )));
        }
        let duals = self.null_space().vstack(&other.null_space())?;
        let out = duals.null_space();
        debug_assert!((0..out.rows).all(|i| {
            let v = out.select_rows(&[i]);
            self.contains_rows(&v).unwrap() && other.contains_rows(&v).unwrap()
        }));
        Ok(out)
    }

    /// Whether every row of `v` lies in the row space of `self`.
    pub fn contains_rows(&self, v: &FieldMatrix) -> Result<bool, MatrixError> {
        Ok(self.vstack(v)?.rank() == self.rank())
    }

    /// Row-space equality via mutual containment.
    pub fn same_row_space(&self, other: &FieldMatrix) -> Result<bool, MatrixError> {
        let r = self.rank();
        Ok(r == other.rank() && self.vstack(other)?.rank() == r)
    }

    /// `(I_k | P)` with the column permutation that produces it: output
    /// column `j` is input column `perm[j]`. Pivot columns of the RREF come
    /// first, in increasing order, followed by the remaining columns.
    pub fn standard_form(&self) -> Result<(FieldMatrix, Vec<usize>), MatrixError> {
        let (r, pivots) = self.rref();
        if pivots.len() < self.rows {
            return Err(MatrixError::RankDeficient { rank: pivots.len(), rows: self.rows });
        }
        let mut perm = pivots.clone();
        perm.extend((0..self.cols).filter(|c| !pivots.contains(c)));
        Ok((r.select_columns(&perm), perm))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|&x| self.field.coeffs(self.field.wrap(x))).collect(),
        }
    }

    pub fn from_json(field: &FieldSpec, json: &MatrixJson) -> Result<Self, MatrixError> {
        let entries = json
            .entries
            .iter()
            .map(|c| field.from_coeffs(c))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(field, json.rows, json.cols, &entries)
    }
}

/// Wire form: `{"rows": r, "cols": c, "entries": [[coeffs], …]}`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    fn random_matrix(f: &FieldSpec, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> FieldMatrix {
        let data = (0..rows * cols).map(|_| rng.gen_range(0..f.size() as u32)).collect();
        FieldMatrix::from_raw(f, rows, cols, data)
    }

    /// Rank as the largest nonsingular square minor, determinants by
    /// Leibniz expansion. Only for tiny matrices.
    fn minor_rank(m: &FieldMatrix) -> usize {
        let f = m.field();
        fn det(f: &FieldSpec, m: &FieldMatrix, rows: &[usize], cols: &[usize]) -> u32 {
            if rows.is_empty() {
                return 1;
            }
            let mut acc = 0;
            for (t, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let sub = det(f, m, &rows[1..], &rest);
                let term = f.mul_raw(m.raw()[rows[0] * m.cols() + c], sub);
                acc = if t % 2 == 0 { f.add_raw(acc, term) } else { f.sub_raw(acc, term) };
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        (1..=m.rows().min(m.cols()))
            .rev()
            .find(|&k| {
                subsets(m.rows(), k)
                    .iter()
                    .any(|r| subsets(m.cols(), k).iter().any(|c| det(f, m, r, c) != 0))
            })
            .unwrap_or(0)
    }

    #[test]
    fn products() {
        let f = gf(9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matrix(&f, 3, 4, &mut rng);
        assert_eq!(FieldMatrix::identity(&f, 3).matmul(&m).unwrap(), m);
        assert!(m.matmul(&FieldMatrix::zeros(&f, 4, 2)).unwrap().is_zero());
        let w1 = f.from_coeffs(&[1, 1]).unwrap();
        let a = FieldMatrix::new(&f, 1, 1, &[w1]).unwrap();
        assert_eq!(a.matmul(&a).unwrap().get(0, 0), f.from_coeffs(&[0, 2]).unwrap());
        assert!(matches!(m.matmul(&m), Err(MatrixError::ShapeMismatch(_))));
        let other = FieldMatrix::identity(&gf(25), 4);
        assert_eq!(m.matmul(&other).unwrap_err(), MatrixError::SpecMismatch);
    }

    #[test]
    fn conjugate_transpose() {
        let f = gf(9);
        let w = f.from_coeffs(&[0, 1]).unwrap();
        let m = FieldMatrix::new(&f, 1, 1, &[w]).unwrap();
        assert_eq!(m.conj_transpose().unwrap().get(0, 0), f.from_coeffs(&[0, 2]).unwrap());
        let id = FieldMatrix::identity(&f, 3);
        assert_eq!(id.conj_transpose().unwrap(), id);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(&f, 2, 3, &mut rng);
        assert_eq!(a.conj_transpose().unwrap().shape(), (3, 2));
        assert_eq!(a.conj_transpose().unwrap().conj_transpose().unwrap(), a);
        let b = random_matrix(&f, 3, 4, &mut rng);
        assert_eq!(
            a.matmul(&b).unwrap().conj_transpose().unwrap(),
            b.conj_transpose().unwrap().matmul(&a.conj_transpose().unwrap()).unwrap()
        );
        let odd = FieldMatrix::identity(&gf(8), 2);
        assert!(matches!(odd.conj_transpose(), Err(MatrixError::Field(FieldError::OddExtension(3)))));
    }

    #[test]
    fn rref_examples() {
        let f = gf(3);
        let id = FieldMatrix::identity(&f, 3);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));
        let m = FieldMatrix::from_ints(&f, &[&[1, 1], &[2, 2]]);
        assert_eq!(m.rref(), (FieldMatrix::from_ints(&f, &[&[1, 1], &[0, 0]]), vec![0]));
        assert_eq!(FieldMatrix::zeros(&f, 3, 4).rank(), 0);
        assert_eq!(FieldMatrix::zeros(&f, 0, 4).rank(), 0);
    }

    #[test]
    fn rank_matches_minor_oracle() {
        let f = gf(9);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let mut m = random_matrix(&f, 3, 5, &mut rng);
            // sparsify now and then to hit deficient ranks
            if rng.gen_bool(0.5) {
                for x in m.data.iter_mut() {
                    if rng.gen_bool(0.6) {
                        *x = 0;
                    }
                }
            }
            assert_eq!(m.rank(), minor_rank(&m));
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn null_space_examples() {
        let f = gf(3);
        let n = FieldMatrix::from_ints(&f, &[&[1, 1]]).null_space();
        assert_eq!(n, FieldMatrix::from_ints(&f, &[&[2, 1]]));
        // (2,1) spans the same line as (1,2)
        assert!(n.same_row_space(&FieldMatrix::from_ints(&f, &[&[1, 2]])).unwrap());
        assert_eq!(FieldMatrix::identity(&f, 4).null_space().rows(), 0);
        assert_eq!(FieldMatrix::zeros(&f, 0, 3).null_space(), FieldMatrix::identity(&f, 3));
    }

    #[test]
    fn intersections() {
        let f = gf(3);
        let a = FieldMatrix::from_ints(&f, &[&[1, 0]]);
        let b = FieldMatrix::from_ints(&f, &[&[0, 1]]);
        assert_eq!(a.intersect_row_spaces(&b).unwrap().rows(), 0);
        let m = FieldMatrix::from_ints(&f, &[&[1, 2, 0], &[0, 1, 1], &[1, 0, 2]]);
        let i = m.intersect_row_spaces(&m).unwrap();
        assert_eq!(i.rank(), m.rank());
        assert!(i.same_row_space(&m).unwrap());
        let c = FieldMatrix::from_ints(&f, &[&[1, 0, 0]]);
        assert!(matches!(a.intersect_row_spaces(&c), Err(MatrixError::ShapeMismatch(_))));
    }

    #[test]
    fn standard_forms() {
        let f = gf(3);
        let g = FieldMatrix::from_ints(&f, &[&[1, 0, 2], &[0, 1, 1]]);
        assert_eq!(g.standard_form().unwrap(), (g.clone(), vec![0, 1, 2]));
        let g = FieldMatrix::from_ints(&f, &[&[0, 1]]);
        assert_eq!(g.standard_form().unwrap(), (FieldMatrix::from_ints(&f, &[&[1, 0]]), vec![1, 0]));
        let g = FieldMatrix::from_ints(&f, &[&[1, 1], &[2, 2]]);
        assert_eq!(g.standard_form().unwrap_err(), MatrixError::RankDeficient { rank: 1, rows: 2 });

        let f = gf(9);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut done = 0;
        while done < 20 {
            let g = random_matrix(&f, 2, 5, &mut rng);
            if g.rank() < 2 {
                continue;
            }
            let (s, perm) = g.standard_form().unwrap();
            check_permutation(&perm, 5).unwrap();
            assert_eq!(s.column_block(0..2), FieldMatrix::identity(&f, 2));
            assert!(s.same_row_space(&g.select_columns(&perm)).unwrap());
            done += 1;
        }
    }

    #[test]
    fn permutation_helpers() {
        assert!(check_permutation(&[2, 0, 1], 3).is_ok());
        assert!(check_permutation(&[0, 0, 1], 3).is_err());
        assert!(check_permutation(&[0, 1], 3).is_err());
        let p = vec![2, 0, 1];
        let inv = invert_permutation(&p);
        assert_eq!(compose_permutations(&p, &inv), vec![0, 1, 2]);
    }

    #[test]
    fn json_roundtrip() {
        let f = gf(9);
        let m = FieldMatrix::from_ints(&f, &[&[1, 2], &[0, 1]]);
        let js = serde_json::to_string(&m.to_json()).unwrap();
        assert_eq!(js, r#"{"rows":2,"cols":2,"entries":[[1,0],[2,0],[0,0],[1,0]]}"#);
        let back: MatrixJson = serde_json::from_str(&js).unwrap();
        assert_eq!(FieldMatrix::from_json(&f, &back).unwrap(), m);
    }

    proptest::proptest! {
        #[test]
        fn rref_idempotent_and_null_space_annihilates(seed in 0u64..1000, rows in 0usize..5, cols in 1usize..7) {
            let f = gf(16);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&f, rows, cols, &mut rng);
            let (r, pivots) = m.rref();
            proptest::prop_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
            proptest::prop_assert_eq!(&r.rref().0, &r);
            proptest::prop_assert!(r.same_row_space(&m).unwrap());
            let ns = m.null_space();
            proptest::prop_assert_eq!(ns.rows() + m.rank(), cols);
            proptest::prop_assert!(m.matmul(&ns.transpose()).unwrap().is_zero());
        }
    }
}
