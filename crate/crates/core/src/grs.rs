//! Hermitian self-orthogonal generalized Reed–Solomon codes.
//!
//! `GRS_k(a, v)` is Hermitian self-orthogonal iff
//! `Σ_l v_l^{q+1} a_l^{i+jq} = 0` for all `0 ≤ i, j < k`. With
//! `w_l = v_l^{q+1} ∈ GF(q)*` this is a linear system in `w`. Conjugating
//! equation `(i, j)` gives equation `(j, i)`, so the solution space is
//! closed under conjugation and its reduced echelon basis already lies in
//! `GF(q)`. What remains is finding a solution with every coordinate nonzero,
//! then lifting each `w_l` through the norm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, LinearCode, DEFAULT_ENUMERATION_CAP};
use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::matrix::{FieldMatrix, MatrixError};

/// Attempts spent looking for an all-nonzero solution.
pub const SEARCH_BUDGET: u64 = 100_000;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrsError {
    #[error("evaluation points are not pairwise distinct")]
    DuplicateEvalPoints,
    #[error("multiplier {0} is zero")]
    ZeroMultiplier(usize),
    #[error("expected {expected} multipliers, got {got}")]
    MultiplierCount { expected: usize, got: usize },
    #[error("dimension {k} outside [1, {max}]")]
    BadDimension { k: usize, max: usize },
    #[error("{m} does not divide {order}")]
    NotADivisor { m: u64, order: u64 },
    #[error("bad family parameters: {0}")]
    BadFamilyParams(String),
    #[error("unknown family tag {0:?}")]
    UnknownFamily(String),
    #[error("constructed code failed re-verification: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

impl From<FieldError> for GrsError {
    fn from(e: FieldError) -> Self {
        GrsError::Code(CodeError::Field(e))
    }
}

impl From<MatrixError> for GrsError {
    fn from(e: MatrixError) -> Self {
        GrsError::Code(e.into())
    }
}

/// Evaluation points, column multipliers and dimension of a (possibly
/// extended) GRS code over GF(q²).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrsSpec {
    field: FieldSpec,
    eval_points: Vec<FieldElement>,
    /// One per column; the last one is `v_∞` when extended.
    multipliers: Vec<FieldElement>,
    k: usize,
    extended: bool,
}

fn check_distinct(points: &[FieldElement]) -> Result<(), GrsError> {
    let mut idx: Vec<u32> = points.iter().map(|a| a.index()).collect();
    idx.sort_unstable();
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return Err(GrsError::DuplicateEvalPoints);
    }
    Ok(())
}

impl GrsSpec {
    pub fn new(
        field: &FieldSpec,
        eval_points: Vec<FieldElement>,
        multipliers: Vec<FieldElement>,
        k: usize,
        extended: bool,
    ) -> Result<Self, GrsError> {
        field.q()?;
        for &a in eval_points.iter().chain(&multipliers) {
            if !field.contains(a) {
                return Err(FieldError::SpecMismatch.into());
            }
        }
        check_distinct(&eval_points)?;
        let len = eval_points.len() + extended as usize;
        if multipliers.len() != len {
            return Err(GrsError::MultiplierCount { expected: len, got: multipliers.len() });
        }
        if let Some(i) = multipliers.iter().position(|v| v.is_zero()) {
            return Err(GrsError::ZeroMultiplier(i));
        }
        if k == 0 || k > len {
            return Err(GrsError::BadDimension { k, max: len });
        }
        Ok(GrsSpec { field: field.clone(), eval_points, multipliers, k, extended })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn eval_points(&self) -> &[FieldElement] {
        &self.eval_points
    }

    pub fn multipliers(&self) -> &[FieldElement] {
        &self.multipliers
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn extended(&self) -> bool {
        self.extended
    }

    /// Code length, counting the infinity column.
    pub fn len(&self) -> usize {
        self.multipliers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multipliers.is_empty()
    }

    pub fn to_json(&self) -> GrsSpecJson {
        let f = &self.field;
        GrsSpecJson {
            field: f.clone(),
            eval_points: self.eval_points.iter().map(|&a| f.coeffs(a)).collect(),
            multipliers: self.multipliers.iter().map(|&a| f.coeffs(a)).collect(),
            k: self.k,
            extended: self.extended,
        }
    }

    pub fn from_json(json: &GrsSpecJson) -> Result<Self, GrsError> {
        let f = &json.field;
        let elems = |xs: &[Vec<u64>]| -> Result<Vec<FieldElement>, FieldError> {
            xs.iter().map(|c| f.from_coeffs(c)).collect()
        };
        GrsSpec::new(f, elems(&json.eval_points)?, elems(&json.multipliers)?, json.k, json.extended)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrsSpecJson {
    pub field: FieldSpec,
    pub eval_points: Vec<Vec<u64>>,
    pub multipliers: Vec<Vec<u64>>,
    pub k: usize,
    pub extended: bool,
}

/// Row `i` is `(v_1 a_1^i, …, v_n a_n^i)`; the infinity column is zero
/// except for `v_∞` in row `k-1`.
pub fn grs_generator(g: &GrsSpec) -> Result<LinearCode, GrsError> {
    let f = &g.field;
    let len = g.len();
    let mut rows = Vec::with_capacity(g.k);
    for i in 0..g.k as u64 {
        let mut row = Vec::with_capacity(len);
        for (&a, &v) in g.eval_points.iter().zip(&g.multipliers) {
            row.push(f.mul(v, f.pow(a, i)?)?);
        }
        if g.extended {
            row.push(if i as usize == g.k - 1 { g.multipliers[len - 1] } else { f.zero() });
        }
        rows.push(row);
    }
    Ok(LinearCode::new(FieldMatrix::from_rows(f, len, &rows)?)?)
}

/// All of GF(q²) as evaluation points with unit multipliers.
pub fn full_field_rs(field: &FieldSpec, k: usize) -> Result<GrsSpec, GrsError> {
    let q = field.q()? as usize;
    if k == 0 || k > q - 1 {
        return Err(GrsError::BadDimension { k, max: q - 1 });
    }
    let points: Vec<FieldElement> = field.enumerate().collect();
    let ones = vec![field.one(); points.len()];
    let spec = GrsSpec::new(field, points, ones, k, false)?;
    verify_self_orthogonal(&spec)?;
    Ok(spec)
}

fn verify_self_orthogonal(spec: &GrsSpec) -> Result<LinearCode, GrsError> {
    let code = grs_generator(spec)?;
    if !code.is_hermitian_self_orthogonal()? {
        return Err(GrsError::VerificationFailed("Gram matrix is not zero".into()));
    }
    Ok(code)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierProblem {
    pub field: FieldSpec,
    pub eval_points: Vec<FieldElement>,
    pub k: usize,
    pub extended: bool,
}

impl MultiplierProblem {
    pub fn new(
        field: &FieldSpec,
        eval_points: Vec<FieldElement>,
        k: usize,
        extended: bool,
    ) -> Result<Self, GrsError> {
        field.q()?;
        check_distinct(&eval_points)?;
        let len = eval_points.len() + extended as usize;
        if k == 0 || k > len {
            return Err(GrsError::BadDimension { k, max: len });
        }
        Ok(MultiplierProblem { field: field.clone(), eval_points, k, extended })
    }

    /// Coefficient matrix of the system in `w`, one row per `(i, j)`.
    pub fn system(&self) -> Result<FieldMatrix, GrsError> {
        let f = &self.field;
        let q = f.q()?;
        let len = self.eval_points.len() + self.extended as usize;
        let mut rows = Vec::with_capacity(self.k * self.k);
        for i in 0..self.k as u64 {
            for j in 0..self.k as u64 {
                let mut row: Vec<FieldElement> = self
                    .eval_points
                    .iter()
                    .map(|&a| f.pow(a, i + j * q))
                    .collect::<Result<_, _>>()?;
                if self.extended {
                    let last = i == self.k as u64 - 1 && j == i;
                    row.push(if last { f.one() } else { f.zero() });
                }
                rows.push(row);
            }
        }
        Ok(FieldMatrix::from_rows(f, len, &rows)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Found(GrsSpec),
    /// Every candidate was examined; no all-nonzero solution exists.
    NoSolution { nullity: usize },
    NotFoundWithinBudget { nullity: usize, attempts: u64 },
}

/// Finds nonzero multipliers making `GRS_k(a, v)` Hermitian
/// self-orthogonal, or reports why none was found.
pub fn solve_multipliers(problem: &MultiplierProblem, seed: u64) -> Result<SolveOutcome, GrsError> {
    let f = &problem.field;
    let basis = problem.system()?.null_space();
    let nullity = basis.rows();
    let len = basis.cols();
    for &x in basis.raw() {
        if !f.in_subfield(f.wrap(x))? {
            return Err(GrsError::VerificationFailed("solution basis leaves GF(q)".into()));
        }
    }
    let Some(w) = all_nonzero_combination(f, &basis, seed)? else {
        return Ok(match search_space(f, nullity)? {
            Some(_) => SolveOutcome::NoSolution { nullity },
            None => SolveOutcome::NotFoundWithinBudget { nullity, attempts: SEARCH_BUDGET },
        });
    };
    debug_assert_eq!(w.len(), len);
    let v = w.iter().map(|&x| f.norm_preimage(f.wrap(x))).collect::<Result<Vec<_>, _>>()?;
    let spec = GrsSpec::new(f, problem.eval_points.clone(), v, problem.k, problem.extended)?;
    verify_self_orthogonal(&spec)?;
    Ok(SolveOutcome::Found(spec))
}

/// `(q-1)^{ν-1}` when it fits in the budget: the size of an exhaustive scan
/// with the first coefficient fixed to 1.
fn search_space(f: &FieldSpec, nullity: usize) -> Result<Option<u64>, GrsError> {
    if nullity == 0 {
        return Ok(Some(0));
    }
    let units = f.q()? - 1;
    let mut total: u64 = 1;
    for _ in 1..nullity {
        total = match total.checked_mul(units) {
            Some(t) if t <= SEARCH_BUDGET => t,
            _ => return Ok(None),
        };
    }
    Ok(Some(total))
}

/// Searches `Σ c_t b_t` with all `c_t ∈ GF(q)*` for a vector without zero
/// entries. The basis has an identity on its free columns, so only the pivot
/// columns need checking. Solutions are closed under GF(q)* scaling, hence
/// `c_0 = 1`.
fn all_nonzero_combination(
    f: &FieldSpec,
    basis: &FieldMatrix,
    seed: u64,
) -> Result<Option<Vec<u32>>, GrsError> {
    let (nu, len) = basis.shape();
    if nu == 0 || len == 0 {
        return Ok(None);
    }
    let free: Vec<usize> = (0..nu)
        .map(|t| (0..len).find(|&c| basis.raw_row(t)[c] == 1 && (0..nu).all(|s| s == t || basis.raw_row(s)[c] == 0)))
        .collect::<Option<_>>()
        .ok_or_else(|| GrsError::VerificationFailed("basis not in echelon form".into()))?;
    let pivots: Vec<usize> = (0..len).filter(|c| !free.contains(c)).collect();
    // a pivot column untouched by every basis vector is forced to zero
    if pivots.iter().any(|&p| (0..nu).all(|t| basis.raw_row(t)[p] == 0)) {
        return Ok(None);
    }
    let units: Vec<u32> = f.subfield_units()?.iter().map(|a| a.index()).collect();
    let cols: Vec<Vec<u32>> =
        pivots.iter().map(|&p| (0..nu).map(|t| basis.raw_row(t)[p]).collect()).collect();
    let works = |c: &[u32]| {
        cols.iter().all(|col| {
            let mut s = 0u32;
            for (&b, &ct) in col.iter().zip(c) {
                if b != 0 {
                    s = f.add_raw(s, f.mul_raw(b, ct));
                }
            }
            s != 0
        })
    };
    let assemble = |c: &[u32]| -> Vec<u32> {
        let mut w = vec![0u32; len];
        for (t, &fc) in free.iter().enumerate() {
            w[fc] = c[t];
        }
        for (col, &p) in cols.iter().zip(&pivots) {
            let mut s = 0u32;
            for (&b, &ct) in col.iter().zip(c) {
                s = f.add_raw(s, f.mul_raw(b, ct));
            }
            w[p] = s;
        }
        w
    };

    let exhaustive = search_space(f, nu)?.is_some();
    let scan_limit = if exhaustive { u64::MAX } else { SEARCH_BUDGET / 2 };
    // odometer over c_1..c_{ν-1}
    let mut digits = vec![0usize; nu];
    let mut c: Vec<u32> = vec![units[0]; nu];
    let mut tried = 0u64;
    loop {
        if works(&c) {
            return Ok(Some(assemble(&c)));
        }
        tried += 1;
        if tried >= scan_limit {
            break;
        }
        let mut pos = nu - 1;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            digits[pos] += 1;
            if digits[pos] < units.len() {
                c[pos] = units[digits[pos]];
                break;
            }
            digits[pos] = 0;
            c[pos] = units[0];
            pos -= 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while tried < SEARCH_BUDGET {
        for ct in c.iter_mut().skip(1) {
            *ct = units[rng.gen_range(0..units.len())];
        }
        if works(&c) {
            return Ok(Some(assemble(&c)));
        }
        tried += 1;
    }
    Ok(None)
}

/// Points where `g(x) + g(x)^q ≠ 0`, with `g` given by its coefficients
/// (constant term first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallVilarSet {
    pub points: Vec<FieldElement>,
    pub roots: usize,
    /// Every point was a root, e.g. `g = 0`.
    pub degenerate: bool,
}

pub fn ball_vilar_eval_set(field: &FieldSpec, g: &[FieldElement]) -> Result<BallVilarSet, GrsError> {
    field.q()?;
    let mut points = Vec::new();
    let mut roots = 0;
    for x in field.enumerate() {
        let mut y = field.zero();
        for &c in g.iter().rev() {
            y = field.add(field.mul(y, x)?, c)?;
        }
        if field.add(y, field.conj(y)?)?.is_zero() {
            roots += 1;
        } else {
            points.push(x);
        }
    }
    Ok(BallVilarSet { degenerate: points.is_empty(), points, roots })
}

/// Coefficients of `g(x) = f(x^{q+1})`.
pub fn norm_composed(field: &FieldSpec, f: &[FieldElement]) -> Result<Vec<FieldElement>, GrsError> {
    let step = field.q()? as usize + 1;
    if f.is_empty() {
        return Ok(Vec::new());
    }
    let mut g = vec![field.zero(); (f.len() - 1) * step + 1];
    for (i, &c) in f.iter().enumerate() {
        g[i * step] = c;
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormComposedShape {
    /// `f(y) = c·y^j + b` as coefficients of `y`.
    pub f: Vec<FieldElement>,
    pub g: Vec<FieldElement>,
    pub n: usize,
}

/// Shapes `g(x) = f(x^{q+1})` with `f(y) = c·y^j + b` and
/// `deg g ≤ (q-k)q - 1`, one per distinct resulting length, by length.
pub fn norm_composed_shapes(field: &FieldSpec, k: usize) -> Result<Vec<NormComposedShape>, GrsError> {
    let q = field.q()? as usize;
    if k == 0 || k > q - 1 {
        return Err(GrsError::BadDimension { k, max: q - 1 });
    }
    let max_deg_g = (q - k) * q - 1;
    let max_j = max_deg_g / (q + 1);
    // g only sees x through its norm, so count roots per norm value
    let norms: Vec<FieldElement> = field.enumerate().map(|x| field.norm(x)).collect::<Result<_, _>>()?;
    let mut fiber = std::collections::BTreeMap::new();
    for y in &norms {
        *fiber.entry(y.index()).or_insert(0usize) += 1;
    }
    let mut seen = std::collections::BTreeMap::new();
    for j in 0..=max_j {
        let leading: Vec<FieldElement> =
            if j == 0 { vec![field.zero()] } else { field.enumerate().skip(1).collect() };
        for &c in &leading {
            for b in field.enumerate() {
                let mut roots = 0;
                for (&y, &count) in &fiber {
                    let y = field.wrap(y);
                    let val = field.add(field.mul(c, field.pow(y, j as u64)?)?, b)?;
                    if field.add(val, field.conj(val)?)?.is_zero() {
                        roots += count;
                    }
                }
                let n = q * q - roots;
                if seen.contains_key(&n) {
                    continue;
                }
                let mut fc = vec![field.zero(); j + 1];
                fc[0] = field.add(fc[0], b)?;
                fc[j] = field.add(fc[j], c)?;
                let g = norm_composed(field, &fc)?;
                seen.insert(n, NormComposedShape { f: fc, g, n });
            }
        }
    }
    Ok(seen.into_values().collect())
}

fn multiplicative_order(field: &FieldSpec) -> u64 {
    field.size() - 1
}

/// Union of the cosets `γ^c·H` for `c` in `cosets`, where `H` is the
/// subgroup of order `(q²-1)/m` and `γ` the fixed primitive element.
pub fn coset_eval_set(field: &FieldSpec, m: u64, cosets: &[u64]) -> Result<Vec<FieldElement>, GrsError> {
    let order = multiplicative_order(field);
    if m == 0 || order % m != 0 {
        return Err(GrsError::NotADivisor { m, order });
    }
    let mut seen = std::collections::BTreeSet::new();
    for &c in cosets {
        if c >= m || !seen.insert(c) {
            return Err(GrsError::BadFamilyParams(format!("coset index {c} repeated or not below {m}")));
        }
    }
    let size = order / m;
    Ok(cosets
        .iter()
        .flat_map(|&c| (0..size).map(move |i| field.primitive_power(c + m * i)))
        .collect())
}

/// The union of the subgroups of orders `(q²-1)/m₁` and `(q²-1)/m₂`.
pub fn subgroup_union(field: &FieldSpec, m1: u64, m2: u64) -> Result<Vec<FieldElement>, GrsError> {
    let mut points = coset_eval_set(field, m1, &[0])?;
    let mut seen: std::collections::BTreeSet<u32> = points.iter().map(|a| a.index()).collect();
    for a in coset_eval_set(field, m2, &[0])? {
        if seen.insert(a.index()) {
            points.push(a);
        }
    }
    Ok(points)
}

/// Evaluation-set families for [`construct_family`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// All of GF(q²), unit multipliers, `1 ≤ k ≤ q-1`.
    FullField { k: usize },
    /// Extended code on all of GF(q²), length `q²+1`, `k ≤ q`, `k ≠ q-1`.
    Q2Plus1 { k: usize },
    /// Extended code of length `q²+1` and dimension `q-1`, `q = 2^r`, `r ≥ 3` odd.
    Char2,
    /// Subgroup of order `(q²-1)/m`, `m = 2k'+1 | q+1`, `w < (k'+1)(q-1)/m`.
    Subgroup { m: u64, w: usize },
    /// Union of two subgroups, `m₁, m₂` odd coprime divisors of `q+1`, `k ≤ (q-1)/2`.
    SubgroupUnion { m1: u64, m2: u64, k: usize },
    /// Subgroup of order `(q²-1)/m`, `q` odd, `m ≥ 6` an even divisor of `q-1`.
    EvenSubgroup { m: u64, k: usize },
    /// Arbitrary union of cosets of the subgroup of order `(q²-1)/m`.
    Cosets { m: u64, cosets: Vec<u64>, k: usize },
    /// Non-roots of `g + g^q`, `g` given by coefficient index lists.
    BallVilar { g: Vec<Vec<u64>>, k: usize },
    /// The first `n` elements in canonical order.
    FirstN { n: usize, k: usize },
}

impl Family {
    pub const TAGS: [&'static str; 9] = [
        "full_field",
        "q2plus1",
        "char2",
        "subgroup",
        "subgroup_union",
        "even_subgroup",
        "cosets",
        "ball_vilar",
        "first_n",
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Family::FullField { .. } => "full_field",
            Family::Q2Plus1 { .. } => "q2plus1",
            Family::Char2 => "char2",
            Family::Subgroup { .. } => "subgroup",
            Family::SubgroupUnion { .. } => "subgroup_union",
            Family::EvenSubgroup { .. } => "even_subgroup",
            Family::Cosets { .. } => "cosets",
            Family::BallVilar { .. } => "ball_vilar",
            Family::FirstN { .. } => "first_n",
        }
    }

    /// Tag normalisation shared with the command line (`full-field` works).
    pub fn normalize_tag(tag: &str) -> Result<&'static str, GrsError> {
        let t = tag.to_ascii_lowercase().replace('-', "_");
        Family::TAGS
            .iter()
            .find(|&&x| x == t)
            .copied()
            .ok_or_else(|| GrsError::UnknownFamily(tag.to_string()))
    }

    /// Code dimension the family targets.
    pub fn dimension(&self, q: u64) -> usize {
        match self {
            Family::FullField { k }
            | Family::Q2Plus1 { k }
            | Family::SubgroupUnion { k, .. }
            | Family::EvenSubgroup { k, .. }
            | Family::Cosets { k, .. }
            | Family::BallVilar { k, .. }
            | Family::FirstN { k, .. } => *k,
            Family::Subgroup { w, .. } => *w,
            Family::Char2 => q as usize - 1,
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn bad(msg: String) -> GrsError {
    GrsError::BadFamilyParams(msg)
}

/// Checks the family's side conditions and builds its evaluation set.
/// Returns the points and whether the code is extended.
pub fn family_eval_set(field: &FieldSpec, family: &Family) -> Result<(Vec<FieldElement>, bool), GrsError> {
    let q = field.q()?;
    let all: Vec<FieldElement> = field.enumerate().collect();
    let k = family.dimension(q);
    if k == 0 {
        return Err(bad("dimension must be positive".into()));
    }
    let odd_divisor_of_q_plus_1 = |m: u64| m % 2 == 1 && (q + 1) % m == 0;
    match family {
        Family::FullField { k } => {
            if *k as u64 > q - 1 {
                return Err(GrsError::BadDimension { k: *k, max: q as usize - 1 });
            }
            Ok((all, false))
        }
        Family::Q2Plus1 { k } => {
            if *k as u64 > q || *k as u64 == q - 1 {
                return Err(bad(format!("need k <= q and k != q-1, got k = {k}, q = {q}")));
            }
            Ok((all, true))
        }
        Family::Char2 => {
            let r = field.e() / 2;
            if field.p() != 2 || r < 3 || r % 2 == 0 {
                return Err(bad(format!("need q = 2^r with r >= 3 odd, got q = {q}")));
            }
            Ok((all, true))
        }
        Family::Subgroup { m, w } => {
            if !odd_divisor_of_q_plus_1(*m) {
                return Err(bad(format!("m = {m} is not an odd divisor of q+1 = {}", q + 1)));
            }
            let kp = (*m - 1) / 2;
            // w < (k'+1)(q-1)/m
            if (*w as u64) * m >= (kp + 1) * (q - 1) {
                return Err(bad(format!("need w < {}(q-1)/{m}, got w = {w}", kp + 1)));
            }
            Ok((coset_eval_set(field, *m, &[0])?, false))
        }
        Family::SubgroupUnion { m1, m2, k } => {
            if !odd_divisor_of_q_plus_1(*m1) || !odd_divisor_of_q_plus_1(*m2) {
                return Err(bad(format!("m1 = {m1}, m2 = {m2} must be odd divisors of {}", q + 1)));
            }
            if gcd(*m1, *m2) != 1 {
                return Err(bad(format!("gcd({m1}, {m2}) != 1")));
            }
            if *k as u64 > (q - 1) / 2 {
                return Err(bad(format!("need k <= (q-1)/2, got k = {k}")));
            }
            Ok((subgroup_union(field, *m1, *m2)?, false))
        }
        Family::EvenSubgroup { m, k } => {
            if q % 2 == 0 {
                return Err(bad(format!("q = {q} must be odd")));
            }
            if *m < 6 || m % 2 == 1 || (q - 1) % m != 0 {
                return Err(bad(format!("m = {m} must be an even divisor of q-1 = {} with m >= 6", q - 1)));
            }
            // 2^{h-h1}·a/a1 = (q-1)/m
            let max = (q + 1) / 2 + (q - 1) / m - 1;
            if *k as u64 > max {
                return Err(bad(format!("need k <= {max}, got k = {k}")));
            }
            Ok((coset_eval_set(field, *m, &[0])?, false))
        }
        Family::Cosets { m, cosets, .. } => {
            if cosets.is_empty() {
                return Err(bad("no cosets selected".into()));
            }
            Ok((coset_eval_set(field, *m, cosets)?, false))
        }
        Family::BallVilar { g, k } => {
            if *k as u64 > q - 1 {
                return Err(GrsError::BadDimension { k: *k, max: q as usize - 1 });
            }
            let coeffs: Vec<FieldElement> =
                g.iter().map(|c| field.from_coeffs(c)).collect::<Result<_, _>>()?;
            let max_deg = (q - *k as u64) * q - 1;
            if let Some(d) = coeffs.iter().rposition(|c| !c.is_zero()) {
                if d as u64 > max_deg {
                    return Err(bad(format!("deg g = {d} exceeds (q-k)q-1 = {max_deg}")));
                }
            }
            let set = ball_vilar_eval_set(field, &coeffs)?;
            if set.degenerate {
                return Err(bad("g + g^q vanishes everywhere".into()));
            }
            Ok((set.points, false))
        }
        Family::FirstN { n, .. } => {
            if *n > all.len() {
                return Err(bad(format!("n = {n} exceeds q^2 = {}", all.len())));
            }
            Ok((all[..*n].to_vec(), false))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forged {
    pub family: Family,
    pub spec: GrsSpec,
    pub code: LinearCode,
    /// `Some(true)` when `d = N-k+1` was confirmed by enumeration.
    pub mds_verified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyOutcome {
    Found(Box<Forged>),
    NoSolution { n: usize, k: usize, nullity: usize },
    NotFoundWithinBudget { n: usize, k: usize, nullity: usize, attempts: u64 },
}

/// Builds the family's evaluation set, solves for multipliers and
/// re-verifies self-orthogonality, plus MDS-ness within `cap`.
pub fn construct_family(
    field: &FieldSpec,
    family: &Family,
    seed: u64,
    cap: u64,
) -> Result<FamilyOutcome, GrsError> {
    let q = field.q()?;
    let k = family.dimension(q);
    let (points, extended) = family_eval_set(field, family)?;
    let n = points.len() + extended as usize;
    let spec = if let Family::FullField { k } = family {
        full_field_rs(field, *k)?
    } else {
        if k > n {
            return Err(GrsError::BadDimension { k, max: n });
        }
        let problem = MultiplierProblem::new(field, points, k, extended)?;
        match solve_multipliers(&problem, seed)? {
            SolveOutcome::Found(spec) => spec,
            SolveOutcome::NoSolution { nullity } => {
                return Ok(FamilyOutcome::NoSolution { n, k, nullity })
            }
            SolveOutcome::NotFoundWithinBudget { nullity, attempts } => {
                return Ok(FamilyOutcome::NotFoundWithinBudget { n, k, nullity, attempts })
            }
        }
    };
    let code = verify_self_orthogonal(&spec)?;
    let mds_verified = match code.min_distance_capped(cap) {
        Ok(d) if d == n - k + 1 => Some(true),
        Ok(d) => return Err(GrsError::VerificationFailed(format!("distance {d}, expected {}", n - k + 1))),
        Err(CodeError::TooLargeToEnumerate { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(FamilyOutcome::Found(Box::new(Forged { family: family.clone(), spec, code, mds_verified })))
}

/// [`construct_family`] with the default seed and enumeration cap.
pub fn construct_family_default(field: &FieldSpec, family: &Family) -> Result<FamilyOutcome, GrsError> {
    construct_family(field, family, DEFAULT_SEED, DEFAULT_ENUMERATION_CAP)
}
