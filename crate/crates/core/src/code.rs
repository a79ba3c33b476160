//! Linear codes over GF(p^e): duals, hulls, equivalence transforms, distances.
//!
//! A code is stored as whatever full-rank generator it was built from. Two
//! codes are the same code when their row spaces agree; see
//! [`LinearCode::same_code`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::matrix::{check_permutation, FieldMatrix, MatrixError, MatrixJson};

/// Default budget for exact minimum-distance searches (codewords or column subsets).
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("generator has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("weight vector entry {0} is zero")]
    ZeroWeight(usize),
    #[error("not a permutation of the {0} coordinates")]
    BadPermutation(usize),
    #[error("coordinate {index} out of range for length {n}")]
    BadIndex { index: usize, n: usize },
    #[error("Galois index {l} is out of range for e = {e}")]
    BadGaloisIndex { l: u32, e: u32 },
    #[error("the zero code has no minimum distance")]
    EmptyCode,
    #[error("exact distance search needs {cost} steps, above the cap of {cap}")]
    TooLargeToEnumerate { cost: u64, cap: u64 },
    #[error(transparent)]
    Matrix(MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl From<MatrixError> for CodeError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::RankDeficient { rank, rows } => CodeError::RankDeficient { rank, rows },
            MatrixError::BadPermutation(n) => CodeError::BadPermutation(n),
            MatrixError::Field(f) => CodeError::Field(f),
            other => CodeError::Matrix(other),
        }
    }
}

/// Which sesquilinear form a dual or hull refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HullKind {
    Euclidean,
    Hermitian,
    Galois(u32),
}

impl HullKind {
    /// The Frobenius power `l` with `⟨x, y⟩ = Σ x_i y_i^{p^l}`.
    pub fn galois_index(self, field: &FieldSpec) -> Result<u32, CodeError> {
        match self {
            HullKind::Euclidean => Ok(0),
            HullKind::Hermitian => {
                field.q()?;
                Ok(field.e() / 2)
            }
            HullKind::Galois(l) if l < field.e() => Ok(l),
            HullKind::Galois(l) => Err(CodeError::BadGaloisIndex { l, e: field.e() }),
        }
    }
}

impl fmt::Display for HullKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HullKind::Euclidean => write!(f, "euclidean"),
            HullKind::Hermitian => write!(f, "hermitian"),
            HullKind::Galois(l) => write!(f, "galois({l})"),
        }
    }
}

/// `C ∩ C^⊥` for the chosen dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullReport {
    pub kind: HullKind,
    pub basis: FieldMatrix,
    pub dim: usize,
}

/// A vector with every entry nonzero, used for code equivalence `v·C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    entries: Vec<FieldElement>,
}

impl WeightVector {
    pub fn new(entries: Vec<FieldElement>) -> Result<Self, CodeError> {
        if let Some(i) = entries.iter().position(|a| a.is_zero()) {
            return Err(CodeError::ZeroWeight(i));
        }
        Ok(WeightVector { entries })
    }

    pub fn ones(field: &FieldSpec, n: usize) -> Self {
        WeightVector { entries: vec![field.one(); n] }
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `v^{-q}`, entrywise `inv(conj(v_i))`.
    pub fn inverse_conjugate(&self, field: &FieldSpec) -> Result<Self, CodeError> {
        self.inverse_frobenius(field, HullKind::Hermitian.galois_index(field)?)
    }

    /// `v^{-p^l}`: the vector with `(v·C)^{⊥_l} = v^{-p^l}·C^{⊥_l}`.
    pub fn inverse_frobenius(&self, field: &FieldSpec, l: u32) -> Result<Self, CodeError> {
        let entries = self
            .entries
            .iter()
            .map(|&v| field.inv(field.frobenius(v, l)?))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeightVector { entries })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    gen: FieldMatrix,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] code over GF({})", self.n(), self.k(), self.field().size())
    }
}

impl LinearCode {
    /// Wraps a generator, which must have full row rank.
    pub fn new(gen: FieldMatrix) -> Result<Self, CodeError> {
        let rank = gen.rank();
        if rank != gen.rows() {
            return Err(CodeError::RankDeficient { rank, rows: gen.rows() });
        }
        Ok(LinearCode { gen })
    }

    /// The code spanned by the rows of `m`, which may be dependent.
    pub fn from_spanning_rows(m: &FieldMatrix) -> Self {
        LinearCode { gen: m.row_space_basis() }
    }

    pub fn zero(field: &FieldSpec, n: usize) -> Self {
        LinearCode { gen: FieldMatrix::zeros(field, 0, n) }
    }

    pub fn full_space(field: &FieldSpec, n: usize) -> Self {
        LinearCode { gen: FieldMatrix::identity(field, n) }
    }

    /// The `[n, 1, n]` code spanned by the all-ones word.
    pub fn repetition(field: &FieldSpec, n: usize) -> Self {
        let ones = vec![field.one(); n];
        LinearCode { gen: FieldMatrix::new(field, 1, n, &ones).expect("shape") }
    }

    pub fn field(&self) -> &FieldSpec {
        self.gen.field()
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn generator(&self) -> &FieldMatrix {
        &self.gen
    }

    pub fn same_code(&self, other: &LinearCode) -> Result<bool, CodeError> {
        Ok(self.gen.same_row_space(&other.gen)?)
    }

    /// Whether the word lies in the code.
    pub fn contains(&self, word: &[FieldElement]) -> Result<bool, CodeError> {
        let w = FieldMatrix::new(self.field(), 1, self.n(), word)?;
        Ok(self.gen.contains_rows(&w)?)
    }

    /// `{x : Σ x_i c_i^{p^l} = 0 for all c ∈ C}`.
    pub fn galois_dual(&self, l: u32) -> Result<LinearCode, CodeError> {
        let l = HullKind::Galois(l).galois_index(self.field())?;
        Ok(LinearCode { gen: self.gen.frobenius(l).null_space() })
    }

    pub fn euclidean_dual(&self) -> LinearCode {
        LinearCode { gen: self.gen.null_space() }
    }

    pub fn hermitian_dual(&self) -> Result<LinearCode, CodeError> {
        Ok(LinearCode { gen: self.gen.conjugate()?.null_space() })
    }

    pub fn dual(&self, kind: HullKind) -> Result<LinearCode, CodeError> {
        let l = kind.galois_index(self.field())?;
        Ok(LinearCode { gen: self.gen.frobenius(l).null_space() })
    }

    pub fn hull(&self, kind: HullKind) -> Result<HullReport, CodeError> {
        let dual = self.dual(kind)?;
        let basis = self.gen.intersect_row_spaces(&dual.gen)?;
        let dim = basis.rank();
        Ok(HullReport { kind, basis, dim })
    }

    /// `G · σ(G)^τ` with `σ` the Frobenius power of the chosen form.
    pub fn gram(&self, kind: HullKind) -> Result<FieldMatrix, CodeError> {
        let l = kind.galois_index(self.field())?;
        Ok(self.gen.matmul(&self.gen.frobenius(l).transpose())?)
    }

    /// `C ⊆ C^⊥H`, decided by a zero Hermitian Gram matrix.
    pub fn is_hermitian_self_orthogonal(&self) -> Result<bool, CodeError> {
        Ok(self.gram(HullKind::Hermitian)?.is_zero())
    }

    pub fn is_self_orthogonal(&self, kind: HullKind) -> Result<bool, CodeError> {
        Ok(self.gram(kind)?.is_zero())
    }

    /// `v·C`: column `j` of the generator times `v_j`.
    pub fn scale(&self, v: &WeightVector) -> Result<LinearCode, CodeError> {
        if v.len() != self.n() {
            return Err(CodeError::ShapeMismatch(format!(
                "weight vector of length {} for a length-{} code",
                v.len(),
                self.n()
            )));
        }
        Ok(LinearCode { gen: self.gen.scale_columns(v.entries())? })
    }

    /// Reorders coordinates: new coordinate `j` is old coordinate `perm[j]`.
    pub fn permute(&self, perm: &[usize]) -> Result<LinearCode, CodeError> {
        check_permutation(perm, self.n())?;
        Ok(LinearCode { gen: self.gen.select_columns(perm) })
    }

    /// Codewords vanishing at coordinate `i`, with that coordinate deleted.
    pub fn shorten(&self, i: usize) -> Result<LinearCode, CodeError> {
        let n = self.n();
        if i >= n {
            return Err(CodeError::BadIndex { index: i, n });
        }
        let column = self.gen.select_columns(&[i]).transpose();
        let messages = column.null_space();
        let sub = messages.matmul(&self.gen)?;
        let keep: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        Ok(LinearCode { gen: sub.select_columns(&keep) })
    }

    /// Exact minimum distance with the default cap.
    pub fn min_distance(&self) -> Result<usize, CodeError> {
        self.min_distance_capped(DEFAULT_ENUMERATION_CAP)
    }

    /// Exact minimum distance. Uses message-space enumeration or a search
    /// for the smallest dependent column set of a parity-check matrix,
    /// whichever has the smaller worst-case cost; errors if both exceed `cap`.
    pub fn min_distance_capped(&self, cap: u64) -> Result<usize, CodeError> {
        if self.k() == 0 {
            return Err(CodeError::EmptyCode);
        }
        let enum_cost = enumeration_cost(self.field(), self.k());
        let column_cost = column_search_cost(self.n(), self.n() - self.k() + 1);
        if enum_cost.min(column_cost) > cap {
            return Err(CodeError::TooLargeToEnumerate { cost: enum_cost.min(column_cost), cap });
        }
        if enum_cost <= column_cost {
            Ok(min_weight_by_enumeration(&self.gen))
        } else {
            Ok(smallest_dependent_columns(&self.gen.null_space(), self.n() - self.k() + 1))
        }
    }

    /// Minimum distance by enumerating the whole message space.
    pub fn min_distance_by_enumeration(&self, cap: u64) -> Result<usize, CodeError> {
        if self.k() == 0 {
            return Err(CodeError::EmptyCode);
        }
        let cost = enumeration_cost(self.field(), self.k());
        if cost > cap {
            return Err(CodeError::TooLargeToEnumerate { cost, cap });
        }
        Ok(min_weight_by_enumeration(&self.gen))
    }

    /// Minimum distance of the dual code (identical for every dual kind).
    pub fn dual_distance(&self) -> Result<usize, CodeError> {
        self.dual_distance_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn dual_distance_capped(&self, cap: u64) -> Result<usize, CodeError> {
        let (n, k) = (self.n(), self.k());
        if k == n {
            return Err(CodeError::EmptyCode);
        }
        if k == 0 {
            return Ok(1);
        }
        let enum_cost = enumeration_cost(self.field(), n - k);
        let column_cost = column_search_cost(n, k + 1);
        if enum_cost.min(column_cost) > cap {
            return Err(CodeError::TooLargeToEnumerate { cost: enum_cost.min(column_cost), cap });
        }
        if column_cost <= enum_cost {
            Ok(smallest_dependent_columns(&self.gen, k + 1))
        } else {
            Ok(min_weight_by_enumeration(&self.gen.null_space()))
        }
    }

    pub fn is_mds(&self) -> Result<bool, CodeError> {
        Ok(self.min_distance()? == self.n() - self.k() + 1)
    }

    /// Short stable fingerprint of the code (its RREF basis and field).
    pub fn digest(&self) -> String {
        let basis = self.gen.row_space_basis();
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        feed(self.field().p());
        feed(self.field().e() as u64);
        self.field().modulus().iter().for_each(|&c| feed(c));
        feed(basis.rows() as u64);
        feed(basis.cols() as u64);
        basis.raw().iter().for_each(|&x| feed(x as u64));
        format!("{h:016x}")
    }

    pub fn to_json(&self) -> CodeJson {
        CodeJson {
            field: self.field().clone(),
            n: self.n(),
            k: self.k(),
            generator: self.gen.to_json(),
        }
    }

    pub fn from_json(json: &CodeJson) -> Result<Self, CodeError> {
        let gen = FieldMatrix::from_json(&json.field, &json.generator)?;
        if gen.rows() != json.k || gen.cols() != json.n {
            return Err(CodeError::ShapeMismatch(format!(
                "declared [{}, {}] but generator is {}x{}",
                json.n,
                json.k,
                gen.rows(),
                gen.cols()
            )));
        }
        LinearCode::new(gen)
    }
}

/// Wire form: `{"field": …, "n": …, "k": …, "generator": …}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeJson {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub generator: MatrixJson,
}

impl Serialize for LinearCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = CodeJson::deserialize(d)?;
        LinearCode::from_json(&json).map_err(serde::de::Error::custom)
    }
}

fn enumeration_cost(field: &FieldSpec, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, _| acc.saturating_mul(field.size()))
}

/// `Σ_{s=1}^{max_size} C(n, s)`, saturating.
fn column_search_cost(n: usize, max_size: usize) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    for s in 1..=max_size.min(n) {
        binom = binom.saturating_mul((n - s + 1) as u64) / s as u64;
        total = total.saturating_add(binom);
        if binom == u64::MAX {
            return u64::MAX;
        }
    }
    total
}

/// Enumerates messages whose first nonzero entry is 1; every nonzero
/// codeword is a scalar multiple of exactly one of them.
fn min_weight_by_enumeration(gen: &FieldMatrix) -> usize {
    let f = gen.field();
    let (k, n) = (gen.rows(), gen.cols());
    let q = f.size() as u32;
    let mut best = n;
    for lead in 0..k {
        // codeword = G[lead] + Σ_{i>lead} m_i G[i], odometer over m
        let tail = k - lead - 1;
        let mut digits = vec![0u32; tail];
        let mut word: Vec<u32> = gen.raw_row(lead).to_vec();
        loop {
            let w = word.iter().filter(|&&x| x != 0).count();
            if w < best {
                best = w;
                if best == 1 {
                    return 1;
                }
            }
            // advance the odometer, patching the word by the digit deltas
            let mut pos = 0;
            loop {
                if pos == tail {
                    break;
                }
                let row = gen.raw_row(lead + 1 + pos);
                let old = digits[pos];
                let new = if old + 1 == q { 0 } else { old + 1 };
                digits[pos] = new;
                let delta = f.sub_raw(new, old);
                for (x, &g) in word.iter_mut().zip(row) {
                    *x = f.add_raw(*x, f.mul_raw(delta, g));
                }
                if new != 0 {
                    break;
                }
                pos += 1;
            }
            if pos == tail {
                break;
            }
        }
    }
    best
}

/// Smallest number of linearly dependent columns of `h` (the minimum
/// distance of the code with parity-check matrix `h`). Searches subset
/// sizes in increasing order up to `max_size`.
fn smallest_dependent_columns(h: &FieldMatrix, max_size: usize) -> usize {
    let f = h.field();
    let (r, n) = (h.rows(), h.cols());
    let columns: Vec<Vec<u32>> = (0..n)
        .map(|j| (0..r).map(|i| h.raw()[i * n + j]).collect())
        .collect();

    // Echelon basis of the chosen columns: (pivot position, normalized vector).
    fn reduce(f: &FieldSpec, basis: &[(usize, Vec<u32>)], v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for (p, b) in basis {
            let c = v[*p];
            if c != 0 {
                let neg = f.neg_raw(c);
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.add_raw(*x, f.mul_raw(neg, y));
                }
            }
        }
        v
    }

    fn search(
        f: &FieldSpec,
        columns: &[Vec<u32>],
        basis: &mut Vec<(usize, Vec<u32>)>,
        start: usize,
        remaining: usize,
    ) -> bool {
        for j in start..columns.len() {
            if columns.len() - j < remaining {
                return false;
            }
            let v = reduce(f, basis, &columns[j]);
            let Some(p) = v.iter().position(|&x| x != 0) else {
                if remaining == 1 {
                    return true;
                }
                // a dependent prefix would have been found at a smaller size
                continue;
            };
            if remaining == 1 {
                continue;
            }
            let inv = f.inv_raw(v[p]);
            let normalized: Vec<u32> = v.iter().map(|&x| f.mul_raw(x, inv)).collect();
            basis.push((p, normalized));
            let found = search(f, columns, basis, j + 1, remaining - 1);
            basis.pop();
            if found {
                return true;
            }
        }
        false
    }

    for size in 1..=max_size.min(n) {
        let mut basis = Vec::new();
        if search(f, &columns, &mut basis, 0, size) {
            return size;
        }
    }
    // all columns independent: only possible when the code is zero, handled by callers
    max_size.min(n) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    /// [9,2] Reed–Solomon over GF(9) evaluating 1 and x at every point.
    fn rs92() -> LinearCode {
        let f = gf(9);
        let pts: Vec<FieldElement> = f.enumerate().collect();
        let mut rows = vec![vec![f.one(); 9], pts.clone()];
        rows[1] = pts;
        LinearCode::new(FieldMatrix::from_rows(&f, 9, &rows).unwrap()).unwrap()
    }

    /// Every codeword of a small code.
    fn codewords(c: &LinearCode) -> Vec<Vec<u32>> {
        let f = c.field();
        let q = f.size();
        let total = q.pow(c.k() as u32);
        (0..total)
            .map(|mut m| {
                let mut word = vec![0u32; c.n()];
                for i in 0..c.k() {
                    let d = (m % q) as u32;
                    m /= q;
                    for (x, &g) in word.iter_mut().zip(c.generator().raw_row(i)) {
                        *x = f.add_raw(*x, f.mul_raw(d, g));
                    }
                }
                word
            })
            .collect()
    }

    fn brute_distance(c: &LinearCode) -> usize {
        codewords(c)
            .iter()
            .map(|w| w.iter().filter(|&&x| x != 0).count())
            .filter(|&w| w > 0)
            .min()
            .unwrap()
    }

    fn random_code(f: &FieldSpec, k: usize, n: usize, rng: &mut ChaCha8Rng) -> LinearCode {
        loop {
            let entries: Vec<FieldElement> =
                (0..k * n).map(|_| f.element(rng.gen_range(0..f.size())).unwrap()).collect();
            if let Ok(c) = LinearCode::new(FieldMatrix::new(f, k, n, &entries).unwrap()) {
                return c;
            }
        }
    }

    fn random_weights(f: &FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> WeightVector {
        WeightVector::new((0..n).map(|_| f.element(rng.gen_range(1..f.size())).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn dual_dimensions_and_involutions() {
        let f = gf(9);
        let full = LinearCode::full_space(&f, 4);
        assert_eq!(full.euclidean_dual().k(), 0);
        assert_eq!(LinearCode::zero(&f, 4).euclidean_dual().k(), 4);
        let c = rs92();
        let d = c.euclidean_dual();
        assert_eq!((d.n(), d.k()), (9, 7));
        assert!(c.generator().matmul(&d.generator().transpose()).unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let c = random_code(&f, rng.gen_range(0..5), 5, &mut rng);
            for kind in [HullKind::Euclidean, HullKind::Hermitian, HullKind::Galois(1)] {
                let d = c.dual(kind).unwrap();
                assert_eq!(d.k() + c.k(), c.n());
                assert!(d.dual(kind).unwrap().same_code(&c).unwrap());
            }
        }
    }

    #[test]
    fn hermitian_dual_is_conjugated_euclidean_dual() {
        let f = gf(9);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let c = random_code(&f, 2, 6, &mut rng);
            let conj = LinearCode::new(c.euclidean_dual().generator().conjugate().unwrap()).unwrap();
            assert!(c.hermitian_dual().unwrap().same_code(&conj).unwrap());
            assert!(c.galois_dual(0).unwrap().same_code(&c.euclidean_dual()).unwrap());
            assert!(c.galois_dual(1).unwrap().same_code(&c.hermitian_dual().unwrap()).unwrap());
        }
        assert!(matches!(rs92().galois_dual(2), Err(CodeError::BadGaloisIndex { l: 2, e: 2 })));
        let odd = LinearCode::full_space(&gf(8), 3);
        assert!(matches!(odd.hermitian_dual(), Err(CodeError::Field(FieldError::OddExtension(3)))));
    }

    #[test]
    fn standard_form_dual_structure() {
        let c = rs92();
        let (s, _) = c.generator().standard_form().unwrap();
        let p = s.column_block(2..9);
        let neg_pt = p.conj_transpose().unwrap();
        let f = c.field().clone();
        let neg_pt = neg_pt.scale_columns(&vec![f.from_int(-1); 2]).unwrap();
        let form = neg_pt.hstack(&FieldMatrix::identity(&f, 7)).unwrap();
        let std = LinearCode::new(s).unwrap();
        assert!(std.hermitian_dual().unwrap().generator().contains_rows(&form).unwrap());
    }

    #[test]
    fn rs92_properties() {
        let c = rs92();
        assert!(c.is_hermitian_self_orthogonal().unwrap());
        assert_eq!(c.hull(HullKind::Hermitian).unwrap().dim, 2);
        assert_eq!(c.min_distance().unwrap(), 8);
        assert_eq!(brute_distance(&c), 8);
        assert!(c.is_mds().unwrap());
        assert_eq!(c.hermitian_dual().unwrap().min_distance().unwrap(), 3);
        assert_eq!(c.dual_distance().unwrap(), 3);
        let h = c.hull(HullKind::Hermitian).unwrap();
        let hd = c.hermitian_dual().unwrap().hull(HullKind::Hermitian).unwrap();
        assert_eq!(h.dim, hd.dim);
    }

    #[test]
    fn self_orthogonality_examples() {
        let f = gf(9);
        let ones = LinearCode::repetition(&f, 9);
        assert!(ones.is_hermitian_self_orthogonal().unwrap());
        assert_eq!(ones.hull(HullKind::Hermitian).unwrap().dim, 1);
        assert_eq!(ones.min_distance().unwrap(), 9);
        let e1 = LinearCode::new(FieldMatrix::from_ints(&f, &[&[1, 0]])).unwrap();
        assert!(!e1.is_hermitian_self_orthogonal().unwrap());
        assert_eq!(e1.min_distance().unwrap(), 1);
        assert!(!e1.is_mds().unwrap());
        assert!(LinearCode::repetition(&f, 5).is_mds().unwrap());
    }

    #[test]
    fn scaling_identity_for_duals() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [9u64, 16] {
            let f = gf(q);
            for _ in 0..20 {
                let c = random_code(&f, rng.gen_range(1..4), 6, &mut rng);
                let v = random_weights(&f, 6, &mut rng);
                let lhs = c.scale(&v).unwrap().hermitian_dual().unwrap();
                let vq = v.inverse_conjugate(&f).unwrap();
                let rhs = c.hermitian_dual().unwrap().scale(&vq).unwrap();
                assert!(lhs.same_code(&rhs).unwrap());
                // inv(conj(v)) = conj(inv(v))
                for (&a, &b) in v.entries().iter().zip(vq.entries()) {
                    assert_eq!(f.conj(f.inv(a).unwrap()).unwrap(), b);
                }
            }
        }
    }

    #[test]
    fn equivalence_preserves_distance() {
        let f = gf(9);
        let c = rs92();
        assert_eq!(c.scale(&WeightVector::ones(&f, 9)).unwrap(), c);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let v = random_weights(&f, 9, &mut rng);
        let scaled = c.scale(&v).unwrap();
        assert_eq!(brute_distance(&scaled), brute_distance(&c));
        let perm = vec![3, 1, 4, 0, 8, 6, 2, 5, 7];
        let permuted = c.permute(&perm).unwrap();
        assert_eq!(brute_distance(&permuted), 8);
        let id: Vec<usize> = (0..9).collect();
        assert_eq!(c.permute(&id).unwrap(), c);
        let inv = crate::matrix::invert_permutation(&perm);
        assert_eq!(permuted.permute(&inv).unwrap(), c);
        assert_eq!(c.permute(&[0, 1]).unwrap_err(), CodeError::BadPermutation(9));
        assert!(matches!(c.scale(&WeightVector::ones(&f, 3)), Err(CodeError::ShapeMismatch(_))));
        assert_eq!(WeightVector::new(vec![f.one(), f.zero()]).unwrap_err(), CodeError::ZeroWeight(1));
    }

    #[test]
    fn shortening() {
        let f = gf(9);
        let full = LinearCode::full_space(&f, 4).shorten(2).unwrap();
        assert_eq!((full.n(), full.k()), (3, 3));
        let ones = LinearCode::repetition(&f, 5).shorten(0).unwrap();
        assert_eq!((ones.n(), ones.k()), (4, 0));
        let c = rs92();
        for i in 0..9 {
            let s = c.shorten(i).unwrap();
            let expected = codewords(&c).iter().filter(|w| w[i] == 0).count();
            assert_eq!(9u64.pow(s.k() as u32), expected as u64);
            assert_eq!(s.n(), 8);
        }
        assert_eq!(c.shorten(9).unwrap_err(), CodeError::BadIndex { index: 9, n: 9 });
    }

    #[test]
    fn distance_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for q in [4u64, 9] {
            let f = gf(q);
            for _ in 0..30 {
                let n = rng.gen_range(2..8);
                let c = random_code(&f, rng.gen_range(1..=n.min(3)), n, &mut rng);
                let brute = brute_distance(&c);
                assert_eq!(c.min_distance().unwrap(), brute);
                assert!(brute <= c.n() - c.k() + 1);
                let h = c.euclidean_dual();
                if h.k() > 0 {
                    assert_eq!(smallest_dependent_columns(h.generator(), c.n()), brute);
                }
                if c.k() < c.n() {
                    let dual = c.euclidean_dual();
                    let dd = c.dual_distance().unwrap();
                    assert_eq!(dd, dual.min_distance_by_enumeration(u64::MAX).unwrap());
                }
            }
        }
    }

    #[test]
    fn distance_cap_and_empty_code() {
        let f = gf(9);
        assert_eq!(LinearCode::zero(&f, 3).min_distance().unwrap_err(), CodeError::EmptyCode);
        let c = rs92();
        assert!(matches!(
            c.min_distance_by_enumeration(10),
            Err(CodeError::TooLargeToEnumerate { cost: 81, cap: 10 })
        ));
        assert!(matches!(c.min_distance_capped(5), Err(CodeError::TooLargeToEnumerate { .. })));
        assert_eq!(LinearCode::zero(&f, 3).dual_distance().unwrap(), 1);
    }

    #[test]
    fn hull_matches_gram_rank_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let f = gf(9);
        for _ in 0..30 {
            let c = random_code(&f, rng.gen_range(0..4), 6, &mut rng);
            for kind in [HullKind::Euclidean, HullKind::Hermitian] {
                let h = c.hull(kind).unwrap();
                assert_eq!(h.dim, c.k() - c.gram(kind).unwrap().rank());
                let dual = c.dual(kind).unwrap();
                for i in 0..h.basis.rows() {
                    let row = h.basis.row(i);
                    assert!(c.contains(&row).unwrap() && dual.contains(&row).unwrap());
                }
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let c = rs92();
        let s = serde_json::to_string(&c).unwrap();
        let back: LinearCode = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.digest(), c.digest());
        let bad = s.replace("\"k\":2", "\"k\":3");
        assert!(serde_json::from_str::<LinearCode>(&bad).is_err());
    }
}
