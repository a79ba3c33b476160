//! Dialing the Hermitian hull of a self-orthogonal code.
//!
//! Take `C` Hermitian self-orthogonal with generator `(I_k | P)`. Then
//! `P·P̄^τ = -I_k`, so `P` has full rank and the coordinates can be arranged
//! so that the leading `k×k` block `P₁` of `P` is nonsingular. Scaling the
//! first `k-h` coordinates by `λ_i` with `λ_i^{q+1} ≠ 1` gives an equivalent
//! code whose Hermitian hull has dimension exactly `h`.
//!
//! The same recipe works for the `l`-Galois form (`λ^{p^l+1} ≠ 1`) and, after
//! putting the hull rows first, for lowering the hull of an arbitrary code.
//! Every result is re-measured before it is returned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, CodeJson, HullKind, LinearCode, WeightVector};
use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::matrix::{compose_permutations, FieldMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DialError {
    #[error("code is not self-orthogonal for the {0} form")]
    NotSelfOrthogonal(HullKind),
    #[error("dimension {k} exceeds half the length {n}; such a code cannot be self-orthogonal")]
    DimensionTooLarge { k: usize, n: usize },
    #[error("length {n} is shorter than 2k = {}", 2 * k)]
    LengthTooShort { n: usize, k: usize },
    #[error("the redundancy block has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("target hull dimension {target} is outside [0, {max}]")]
    BadTarget { target: usize, max: usize },
    #[error("the transform needs q >= 3 (got q = {0})")]
    SmallField(u64),
    #[error("no nonzero element with lambda^(p^{0}+1) != 1 exists")]
    NoLambda(u32),
    #[error("standard-form Gram identity P·σ(P)^τ = -I fails")]
    GramIdentity,
    #[error("hull verification failed: wanted {target}, measured {achieved}")]
    VerificationFailed { target: usize, achieved: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
}

impl From<FieldError> for DialError {
    fn from(e: FieldError) -> Self {
        DialError::Code(CodeError::Field(e))
    }
}

impl From<crate::matrix::MatrixError> for DialError {
    fn from(e: crate::matrix::MatrixError) -> Self {
        DialError::Code(e.into())
    }
}

/// Where the scaling constants `λ` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaSource {
    /// First qualifying elements in canonical order.
    #[default]
    Canonical,
    /// Uniform over qualifying elements, from a seeded generator.
    Seeded(u64),
}

impl LambdaSource {
    fn pick(
        self,
        field: &FieldSpec,
        l: u32,
        count: usize,
    ) -> Result<Vec<FieldElement>, DialError> {
        let pool = match field.find_galois_norm_non_one(l, 1) {
            Ok(p) => p,
            Err(FieldError::NoSuchElement) => return Err(DialError::NoLambda(l)),
            Err(e) => return Err(e.into()),
        };
        debug_assert!(!pool.is_empty());
        match self {
            LambdaSource::Canonical => Ok(field.find_galois_norm_non_one(l, count)?),
            LambdaSource::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut out = Vec::with_capacity(count);
                while out.len() < count {
                    let a = field.element(rng.gen_range(1..field.size())).expect("index below field size");
                    if field.galois_norm(a, l)? != field.one() {
                        out.push(a);
                    }
                }
                Ok(out)
            }
        }
    }
}

/// An equivalent code `v·π(C)` with a prescribed hull dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialResult {
    /// The transformed code `v·π(C)`.
    pub code: LinearCode,
    pub v: WeightVector,
    /// Coordinate `j` of `code` comes from coordinate `perm[j]` of the input.
    pub perm: Vec<usize>,
    pub kind: HullKind,
    pub target_h: usize,
    pub achieved_h: usize,
    pub lambdas: Vec<FieldElement>,
}

fn require_q_at_least_3(field: &FieldSpec) -> Result<(), DialError> {
    let q = field.q()?;
    if q < 3 {
        return Err(DialError::SmallField(q));
    }
    Ok(())
}

fn standard_form_gram(c: &LinearCode, kind: HullKind) -> Result<FieldMatrix, DialError> {
    let (n, k) = (c.n(), c.k());
    let l = kind.galois_index(c.field())?;
    if 2 * k > n {
        return Err(DialError::DimensionTooLarge { k, n });
    }
    if !c.is_self_orthogonal(kind)? {
        return Err(DialError::NotSelfOrthogonal(kind));
    }
    let (s, _) = c.generator().standard_form()?;
    let p = s.column_block(k..n);
    let gram = p.matmul(&p.frobenius(l).transpose())?;
    let minus_one = vec![c.field().from_int(-1); k];
    let expected = FieldMatrix::identity(c.field(), k).scale_columns(&minus_one)?;
    if gram != expected || p.rank() != k {
        return Err(DialError::GramIdentity);
    }
    Ok(p)
}

/// Puts a Hermitian self-orthogonal code in standard form `(I_k | P)`,
/// checks `P·P̄^τ = -I_k` and `rank P = k`, and returns `P`.
pub fn verify_standard_form_gram(c: &LinearCode) -> Result<FieldMatrix, DialError> {
    standard_form_gram(c, HullKind::Hermitian)
}

/// Column-permuted equivalent code with generator `(I_k | P₁ | P₂)` and
/// `P₁` nonsingular. `P₁` takes the leftmost columns of `P` that extend the
/// rank. Returns the code and the permutation relative to the input.
pub fn arrange_p1_nonsingular(c: &LinearCode) -> Result<(LinearCode, Vec<usize>), DialError> {
    let (n, k) = (c.n(), c.k());
    if n < 2 * k {
        return Err(DialError::LengthTooShort { n, k });
    }
    let (s, std_perm) = c.generator().standard_form()?;
    let p = s.column_block(k..n);
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut rank = 0;
    for j in 0..n - k {
        if chosen.len() == k {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(j);
        let r = p.select_columns(&trial).rank();
        if r > rank {
            rank = r;
            chosen = trial;
        }
    }
    if chosen.len() < k {
        return Err(DialError::RankDeficient { rank, k });
    }
    let mut local: Vec<usize> = (0..k).collect();
    local.extend(chosen.iter().map(|&j| k + j));
    local.extend((0..n - k).filter(|j| !chosen.contains(j)).map(|j| k + j));
    let arranged = LinearCode::new(s.select_columns(&local))?;
    Ok((arranged, compose_permutations(&std_perm, &local)))
}

fn dial_with_kind(
    c: &LinearCode,
    h: usize,
    kind: HullKind,
    source: LambdaSource,
) -> Result<DialResult, DialError> {
    let field = c.field().clone();
    let l = kind.galois_index(&field)?;
    let (n, k) = (c.n(), c.k());
    if h > k {
        return Err(DialError::BadTarget { target: h, max: k });
    }
    if kind == HullKind::Hermitian {
        require_q_at_least_3(&field)?;
    }
    if !c.is_self_orthogonal(kind)? {
        return Err(DialError::NotSelfOrthogonal(kind));
    }
    if h == k {
        let achieved = c.hull(kind)?.dim;
        if achieved != h {
            return Err(DialError::VerificationFailed { target: h, achieved });
        }
        return Ok(DialResult {
            code: c.clone(),
            v: WeightVector::ones(&field, n),
            perm: (0..n).collect(),
            kind,
            target_h: h,
            achieved_h: achieved,
            lambdas: Vec::new(),
        });
    }
    let lambdas = source.pick(&field, l, k - h)?;
    let (arranged, perm) = arrange_p1_nonsingular(c)?;
    let mut weights = lambdas.clone();
    weights.resize(n, field.one());
    let v = WeightVector::new(weights)?;
    let code = arranged.scale(&v)?;
    let achieved = code.hull(kind)?.dim;
    if achieved != h {
        return Err(DialError::VerificationFailed { target: h, achieved });
    }
    Ok(DialResult { code, v, perm, kind, target_h: h, achieved_h: achieved, lambdas })
}

/// Equivalent code with Hermitian hull of dimension exactly `h`, `0 ≤ h ≤ k`.
pub fn dial_hull(c: &LinearCode, h: usize, source: LambdaSource) -> Result<DialResult, DialError> {
    dial_with_kind(c, h, HullKind::Hermitian, source)
}

/// The `l`-Galois analogue of [`dial_hull`] for codes with `C ⊆ C^{⊥_l}`.
pub fn dial_galois_hull(
    c: &LinearCode,
    h: usize,
    l: u32,
    source: LambdaSource,
) -> Result<DialResult, DialError> {
    dial_with_kind(c, h, HullKind::Galois(l), source)
}

/// Lowers the Hermitian hull of an arbitrary code to `target ≤ dim Hull(C)`.
///
/// The generator is rewritten as hull rows `(I_l | *)` on the hull's pivot
/// columns, followed by complementary rows vanishing on those columns; the
/// first `l - target` pivot coordinates are then scaled.
pub fn reduce_hull(
    c: &LinearCode,
    target: usize,
    source: LambdaSource,
) -> Result<DialResult, DialError> {
    let kind = HullKind::Hermitian;
    let field = c.field().clone();
    let n = c.n();
    let hull = c.hull(kind)?;
    if target > hull.dim {
        return Err(DialError::BadTarget { target, max: hull.dim });
    }
    require_q_at_least_3(&field)?;
    if hull.dim == c.k() {
        return dial_hull(c, target, source);
    }
    if target == hull.dim {
        return Ok(DialResult {
            code: c.clone(),
            v: WeightVector::ones(&field, n),
            perm: (0..n).collect(),
            kind,
            target_h: target,
            achieved_h: hull.dim,
            lambdas: Vec::new(),
        });
    }

    let (hull_rref, pivots) = hull.basis.rref();
    let hull_rows = hull_rref.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
    // Clear the hull pivot columns from the remaining generator rows.
    let gen = c.generator();
    let mut rest = Vec::new();
    for i in 0..gen.rows() {
        let mut row = gen.row(i);
        for (t, &pc) in pivots.iter().enumerate() {
            let coef = row[pc];
            if coef.is_zero() {
                continue;
            }
            let h_row = hull_rows.row(t);
            for (x, y) in row.iter_mut().zip(h_row) {
                *x = field.sub(*x, field.mul(coef, y)?)?;
            }
        }
        rest.push(row);
    }
    let complement = FieldMatrix::from_rows(&field, n, &rest)?.row_space_basis();
    let stacked = hull_rows.vstack(&complement)?;

    let mut perm = pivots.clone();
    perm.extend((0..n).filter(|j| !pivots.contains(j)));
    let arranged = LinearCode::new(stacked.select_columns(&perm))?;

    let lambdas = source.pick(&field, field.e() / 2, hull.dim - target)?;
    let mut weights = lambdas.clone();
    weights.resize(n, field.one());
    let v = WeightVector::new(weights)?;
    let code = arranged.scale(&v)?;
    let achieved = code.hull(kind)?.dim;
    if achieved != target {
        return Err(DialError::VerificationFailed { target, achieved });
    }
    Ok(DialResult { code, v, perm, kind, target_h: target, achieved_h: achieved, lambdas })
}

/// Outcome of rebuilding the dual generator `B` of the dialed code the long
/// way round, from `P₁`, `P₂` and `D_λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDiagnostics {
    /// `B` has `n-k` independent rows, all Hermitian-orthogonal to `v·C`.
    pub dual_generator_valid: bool,
    /// Rows `k-h..k` of `(D_λ | P)` and of `B` coincide.
    pub aligned_rows: usize,
    pub dual_generator: FieldMatrix,
}

/// Builds
///
/// ```text
///     B = ( D^{-q}          P₁  P₂ )
///         ( -P̄₂^τ D^{-q}    0   I  )
/// ```
///
/// for the arranged self-orthogonal code scaled by `(λ, 1, …, 1)`, and
/// checks it against the dialed code.
pub fn proof_diagnostics(
    c: &LinearCode,
    h: usize,
    source: LambdaSource,
) -> Result<ProofDiagnostics, DialError> {
    let field = c.field().clone();
    let (n, k) = (c.n(), c.k());
    if h > k {
        return Err(DialError::BadTarget { target: h, max: k });
    }
    require_q_at_least_3(&field)?;
    verify_standard_form_gram(c)?;
    let (arranged, _) = arrange_p1_nonsingular(c)?;
    let lambdas = source.pick(&field, field.e() / 2, k - h)?;
    let mut weights = lambdas;
    weights.resize(n, field.one());
    let v = WeightVector::new(weights)?;
    let dialed = arranged.scale(&v)?;

    let g = arranged.generator();
    let p1 = g.column_block(k..2 * k);
    let p2 = g.column_block(2 * k..n);
    let d_inv_q: Vec<FieldElement> = v.inverse_conjugate(&field)?.entries()[..k].to_vec();
    let d_block = FieldMatrix::identity(&field, k).scale_columns(&d_inv_q)?;
    let top = d_block.hstack(&p1)?.hstack(&p2)?;
    let minus_one = vec![field.from_int(-1); k];
    let lower_left = p2
        .conj_transpose()?
        .scale_columns(&minus_one)?
        .scale_columns(&d_inv_q)?;
    let bottom = lower_left
        .hstack(&FieldMatrix::zeros(&field, n - 2 * k, k))?
        .hstack(&FieldMatrix::identity(&field, n - 2 * k))?;
    let b = top.vstack(&bottom)?;

    let orthogonal = b.matmul(&dialed.generator().conj_transpose()?)?.is_zero();
    let dual_generator_valid = orthogonal && b.rank() == n - k;
    let dialed_gen = dialed.generator();
    let aligned_rows = (k - h..k).filter(|&i| dialed_gen.row(i) == b.row(i)).count();
    Ok(ProofDiagnostics { dual_generator_valid, aligned_rows, dual_generator: b })
}

/// Wire form: `{"code", "v", "perm", "target_h", "achieved_h", …}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DialResultJson {
    pub code: CodeJson,
    pub v: Vec<Vec<u64>>,
    pub perm: Vec<usize>,
    pub target_h: usize,
    pub achieved_h: usize,
    pub kind: HullKind,
    pub lambdas: Vec<Vec<u64>>,
}

impl DialResult {
    pub fn to_json(&self) -> DialResultJson {
        let f = self.code.field();
        DialResultJson {
            code: self.code.to_json(),
            v: self.v.entries().iter().map(|&a| f.coeffs(a)).collect(),
            perm: self.perm.clone(),
            target_h: self.target_h,
            achieved_h: self.achieved_h,
            kind: self.kind,
            lambdas: self.lambdas.iter().map(|&a| f.coeffs(a)).collect(),
        }
    }

    pub fn from_json(json: &DialResultJson) -> Result<Self, DialError> {
        let code = LinearCode::from_json(&json.code)?;
        let f = code.field().clone();
        let elems = |xs: &[Vec<u64>]| -> Result<Vec<FieldElement>, FieldError> {
            xs.iter().map(|c| f.from_coeffs(c)).collect()
        };
        Ok(DialResult {
            v: WeightVector::new(elems(&json.v)?)?,
            lambdas: elems(&json.lambdas)?,
            code,
            perm: json.perm.clone(),
            kind: json.kind,
            target_h: json.target_h,
            achieved_h: json.achieved_h,
        })
    }
}
