//! Exact-arithmetic quiver representations: Hom/Ext dimensions, stabilizer
//! dimensions, Monte-Carlo parameter censuses, decomposition enumeration, the
//! defect inequality checker, and King-pairing certificates.
//!
//! Every rank here is computed over the Gaussian rationals, so the integer
//! invariants (hom, ext, stabilizer dimensions) are exact — no tolerance ever
//! decides them.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{ExactMat, GaussRat, Rat};
use crate::quiver::{classify_root, tits_p, tits_q, DimVec, Quiver, QuiverError, RootClass, StarShape};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("representations live on different quivers")]
    QuiverMismatch,
    #[error("all dimensions are zero")]
    ZeroDims,
    #[error("entry pool bound must be ≥ 1")]
    InvalidPool,
    #[error("dimension vector sums to {sum}, enumeration budget is {budget}")]
    BudgetExceeded { sum: i64, budget: i64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Quiver representation with exact Gaussian-rational matrices, one per arrow
/// of shape `dims[head] × dims[tail]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRep {
    quiver: Quiver,
    dims: DimVec,
    mats: Vec<ExactMat>,
}

impl ExactRep {
    pub fn new(quiver: Quiver, dims: DimVec, mats: Vec<ExactMat>) -> Result<Self, RepError> {
        if dims.len() != quiver.n_vertices() {
            return Err(QuiverError::VertexMismatch {
                expected: quiver.n_vertices(),
                got: dims.len(),
            }
            .into());
        }
        if dims.iter().any(|&d| d < 0) {
            return Err(QuiverError::NegativeEntry.into());
        }
        if mats.len() != quiver.arrows().len() {
            return Err(RepError::ShapeMismatch(format!(
                "{} matrices for {} arrows",
                mats.len(),
                quiver.arrows().len()
            )));
        }
        for (k, &(t, h)) in quiver.arrows().iter().enumerate() {
            let (rows, cols) = (dims[h] as usize, dims[t] as usize);
            if mats[k].rows != rows || mats[k].cols != cols {
                return Err(RepError::ShapeMismatch(format!(
                    "arrow {k}: matrix is {}×{}, dims require {rows}×{cols}",
                    mats[k].rows, mats[k].cols
                )));
            }
        }
        Ok(ExactRep { quiver, dims, mats })
    }

    pub fn zero(quiver: Quiver, dims: DimVec) -> Result<Self, RepError> {
        let mats = quiver
            .arrows()
            .iter()
            .map(|&(t, h)| ExactMat::zeros(dims[h] as usize, dims[t] as usize))
            .collect();
        Self::new(quiver, dims, mats)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &[i64] {
        &self.dims
    }

    pub fn mats(&self) -> &[ExactMat] {
        &self.mats
    }
}

#[derive(Serialize, Deserialize)]
struct ExactRepJson {
    quiver: Quiver,
    dims: BTreeMap<String, i64>,
    mats: Vec<Vec<Vec<String>>>,
}

impl Serialize for ExactRep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mats = self
            .mats
            .iter()
            .map(|m| {
                (0..m.rows)
                    .map(|r| (0..m.cols).map(|c| m[(r, c)].to_string()).collect())
                    .collect()
            })
            .collect();
        ExactRepJson {
            quiver: self.quiver.clone(),
            dims: self.quiver.dims_to_map(&self.dims).expect("dims validated at construction"),
            mats,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactRep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = ExactRepJson::deserialize(d)?;
        let dims = raw.quiver.dims_from_map(&raw.dims).map_err(D::Error::custom)?;
        let mut mats = Vec::with_capacity(raw.mats.len());
        for (k, rows) in raw.mats.iter().enumerate() {
            let &(t, h) = raw
                .quiver
                .arrows()
                .get(k)
                .ok_or_else(|| D::Error::custom("more matrices than arrows"))?;
            let (nr, nc) = (dims[h] as usize, dims[t] as usize);
            let mut m = ExactMat::zeros(nr, nc);
            if rows.len() != nr || rows.iter().any(|r| r.len() != nc) {
                return Err(D::Error::custom(format!("arrow {k}: matrix shape mismatch")));
            }
            for (r, row) in rows.iter().enumerate() {
                for (c, cell) in row.iter().enumerate() {
                    m[(r, c)] = cell.parse::<GaussRat>().map_err(D::Error::custom)?;
                }
            }
            mats.push(m);
        }
        ExactRep::new(raw.quiver, dims, mats).map_err(D::Error::custom)
    }
}

fn random_rep_with_rng(
    q: &Quiver,
    a: &[i64],
    rng: &mut ChaCha20Rng,
    pool: i64,
) -> Result<ExactRep, RepError> {
    if pool < 1 {
        return Err(RepError::InvalidPool);
    }
    // Matrices are filled arrow by arrow, row-major, so identical seeds give
    // bit-identical representations.
    let mats = q
        .arrows()
        .iter()
        .map(|&(t, h)| {
            ExactMat::from_fn(a[h] as usize, a[t] as usize, |_, _| {
                let re = rng.gen_range(-pool..=pool);
                let im = rng.gen_range(-pool..=pool);
                GaussRat::from_ints(re, im)
            })
        })
        .collect();
    ExactRep::new(q.clone(), a.to_vec(), mats)
}

/// Deterministic random representation with Gaussian-integer entries of
/// real/imaginary parts bounded by `pool` in absolute value.
pub fn random_rep(q: &Quiver, a: &[i64], seed: u64, pool: i64) -> Result<ExactRep, RepError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    random_rep_with_rng(q, a, &mut rng, pool)
}

/// Dimensions of Hom(x, y) and Ext¹(x, y) as kernel and cokernel of the
/// intertwiner map `⊕ᵥ Hom(Vᵥ,Wᵥ) → ⊕ₐ Hom(V_{tail},W_{head})`,
/// `(fᵥ) ↦ (f_{head}·x_a − y_a·f_{tail})`.
pub fn hom_ext_dims(x: &ExactRep, y: &ExactRep) -> Result<(usize, usize), RepError> {
    if x.quiver != y.quiver {
        return Err(RepError::QuiverMismatch);
    }
    let a = &x.dims;
    let b = &y.dims;
    let n_v = x.quiver.n_vertices();
    let mut col_offset = vec![0usize; n_v + 1];
    for v in 0..n_v {
        col_offset[v + 1] = col_offset[v] + (b[v] * a[v]) as usize;
    }
    let arrows = x.quiver.arrows();
    let mut row_offset = vec![0usize; arrows.len() + 1];
    for (k, &(t, h)) in arrows.iter().enumerate() {
        row_offset[k + 1] = row_offset[k] + (b[h] * a[t]) as usize;
    }
    let mut m = ExactMat::zeros(row_offset[arrows.len()], col_offset[n_v]);
    for (k, &(t, h)) in arrows.iter().enumerate() {
        let (bh, at) = (b[h] as usize, a[t] as usize);
        let (ah, bt) = (a[h] as usize, b[t] as usize);
        for r in 0..bh {
            for c in 0..at {
                let row = row_offset[k] + r * at + c;
                // (f_h · x_k)[(r,c)] contributes x_k[(q,c)] at f_h[(r,q)].
                for q_col in 0..ah {
                    let col = col_offset[h] + r * ah + q_col;
                    let v = &m[(row, col)] + &x.mats[k][(q_col, c)];
                    m[(row, col)] = v;
                }
                // −(y_k · f_t)[(r,c)] contributes −y_k[(r,p)] at f_t[(p,c)].
                for p_row in 0..bt {
                    let col = col_offset[t] + p_row * at + c;
                    let v = &m[(row, col)] - &y.mats[k][(r, p_row)];
                    m[(row, col)] = v;
                }
            }
        }
    }
    let rank = m.rank();
    Ok((m.cols - rank, m.rows - rank))
}

/// `dim End(x) − 1`: dimension of the stabilizer of `x` in `G(α)` with the
/// global scalars quotiented out.
pub fn stabilizer_dim(x: &ExactRep) -> Result<usize, RepError> {
    if x.dims.iter().all(|&d| d == 0) {
        return Err(RepError::ZeroDims);
    }
    Ok(hom_ext_dims(x, x)?.0 - 1)
}

/// Monte-Carlo probe of the number-of-parameters data: a histogram of
/// stabilizer dimensions over random representations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Census {
    /// `dim G(α) = Σ αᵥ² − 1`.
    pub dim_g: i64,
    /// `dim Rep(Q,α) = Σ_{arrows} α_tail·α_head`.
    pub dim_rep: i64,
    /// Sample counts per observed stabilizer dimension `s`.
    pub counts: BTreeMap<i64, u64>,
    /// Fraction of samples with trivial stabilizer (`s = 0`).
    pub fraction_trivial: f64,
    /// `max_s (dim Rep + s − dim G)` over observed strata — an upper-bound
    /// flavored probe of the number of parameters, not a certified value.
    pub params_bound: i64,
}

/// Sample `samples` random representations (per-sample generator streams
/// derived from `seed`) and histogram their stabilizer dimensions.
pub fn parameter_census(
    q: &Quiver,
    a: &[i64],
    samples: u64,
    seed: u64,
) -> Result<Census, RepError> {
    if samples < 1 {
        return Err(RepError::ShapeMismatch("need at least one sample".into()));
    }
    if a.iter().all(|&d| d == 0) {
        return Err(RepError::ZeroDims);
    }
    let dim_g: i64 = a.iter().map(|d| d * d).sum::<i64>() - 1;
    let dim_rep: i64 = q.arrows().iter().map(|&(t, h)| a[t] * a[h]).sum();
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for i in 0..samples {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let rep = random_rep_with_rng(q, a, &mut rng, 10)?;
        let s = stabilizer_dim(&rep)? as i64;
        *counts.entry(s).or_insert(0) += 1;
    }
    let trivial = counts.get(&0).copied().unwrap_or(0);
    let params_bound = counts.keys().map(|s| dim_rep + s - dim_g).max().unwrap();
    Ok(Census {
        dim_g,
        dim_rep,
        counts,
        fraction_trivial: trivial as f64 / samples as f64,
        params_bound,
    })
}

/// An unordered decomposition of a dimension vector into nonzero nonnegative
/// parts, stored in lexicographically nondecreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub parts: Vec<DimVec>,
}

/// Smallest vector `x` with `lower ≤ x` lexicographically and `x ≤ bound`
/// componentwise, if any.
fn first_in_box(lower: &[i64], bound: &[i64]) -> Option<DimVec> {
    if lower.iter().zip(bound).all(|(l, b)| l <= b) {
        return Some(lower.to_vec());
    }
    let bad = lower.iter().zip(bound).position(|(l, b)| l > b).unwrap();
    // Increase the rightmost digit before `bad` that has headroom; everything
    // after it resets to zero.
    for j in (0..bad).rev() {
        if lower[j] < bound[j] {
            let mut x = vec![0; lower.len()];
            x[..j].copy_from_slice(&lower[..j]);
            x[j] = lower[j] + 1;
            return Some(x);
        }
    }
    None
}

/// Lexicographic successor of `x` within the componentwise box `[0, bound]`.
fn next_in_box(x: &mut DimVec, bound: &[i64]) -> bool {
    for i in (0..x.len()).rev() {
        if x[i] < bound[i] {
            x[i] += 1;
            return true;
        }
        x[i] = 0;
    }
    false
}

/// Visit every multiset of at least `min_parts` nonzero nonnegative vectors
/// summing to `a`, with parts emitted in lexicographically nondecreasing
/// order. The visitor may stop the stream early by returning `Break`.
/// Returns `true` when the enumeration ran to completion.
pub fn visit_decompositions(
    a: &[i64],
    min_parts: usize,
    budget: i64,
    mut f: impl FnMut(&[DimVec]) -> ControlFlow<()>,
) -> Result<bool, RepError> {
    if a.iter().any(|&x| x < 0) {
        return Err(QuiverError::NegativeEntry.into());
    }
    let sum: i64 = a.iter().sum();
    if sum > budget {
        return Err(RepError::BudgetExceeded { sum, budget });
    }
    if sum == 0 {
        return Ok(true);
    }

    fn rec(
        rem: &[i64],
        lower: &[i64],
        parts: &mut Vec<DimVec>,
        min_parts: usize,
        f: &mut impl FnMut(&[DimVec]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let Some(mut cand) = first_in_box(lower, rem) else { return ControlFlow::Continue(()) };
        loop {
            if cand.iter().any(|&x| x != 0) {
                if cand == rem {
                    // Final part: `rem` is the lex-largest vector in its own box.
                    parts.push(cand);
                    if parts.len() >= min_parts {
                        f(parts)?;
                    }
                    parts.pop();
                    return ControlFlow::Continue(());
                }
                let next_rem: DimVec = rem.iter().zip(&cand).map(|(r, c)| r - c).collect();
                parts.push(cand.clone());
                rec(&next_rem, &cand, parts, min_parts, f)?;
                parts.pop();
            }
            if !next_in_box(&mut cand, rem) {
                return ControlFlow::Continue(());
            }
        }
    }

    let zero = vec![0; a.len()];
    let mut parts = Vec::new();
    Ok(rec(a, &zero, &mut parts, min_parts, &mut f).is_continue())
}

/// Collect decompositions of `a`; with `roots_only`, keep only decompositions
/// all of whose parts classify as roots of `q`.
pub fn enumerate_decompositions(
    q: &Quiver,
    a: &[i64],
    min_parts: usize,
    roots_only: bool,
    budget: i64,
) -> Result<Vec<Decomposition>, RepError> {
    let mut out = Vec::new();
    let mut err = None;
    visit_decompositions(a, min_parts, budget, |parts| {
        if roots_only {
            for p in parts {
                match classify_root(q, p) {
                    Ok(RootClass::NotRoot) => return ControlFlow::Continue(()),
                    Ok(_) => {}
                    Err(e) => {
                        err = Some(e);
                        return ControlFlow::Break(());
                    }
                }
            }
        }
        out.push(Decomposition { parts: parts.to_vec() });
        ControlFlow::Continue(())
    })?;
    match err {
        Some(e) => Err(e.into()),
        None => Ok(out),
    }
}

/// Result of the defect-inequality check `p(α) > Σ p(parts)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality302 {
    pub holds: bool,
    pub p_alpha: i64,
    /// First decomposition (in canonical order) violating strictness, if any.
    pub witness: Option<Decomposition>,
    pub witness_p_sum: Option<i64>,
}

/// Brute-force the inequality `p(α) > Σᵢ p(βⁱ)` over every decomposition of
/// `α` into two or more nonzero nonnegative parts on the star quiver.
pub fn check_inequality_302(
    shape: &StarShape,
    a: &[i64],
    budget: i64,
) -> Result<Inequality302, RepError> {
    let q = shape.build();
    let p_alpha = tits_p(&q, a)?;
    let mut witness = None;
    let mut witness_p_sum = None;
    let mut err = None;
    visit_decompositions(a, 2, budget, |parts| {
        let mut sum = 0;
        for part in parts {
            match tits_p(&q, part) {
                Ok(p) => sum += p,
                Err(e) => {
                    err = Some(e);
                    return ControlFlow::Break(());
                }
            }
        }
        if p_alpha <= sum {
            witness = Some(Decomposition { parts: parts.to_vec() });
            witness_p_sum = Some(sum);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(Inequality302 { holds: witness.is_none(), p_alpha, witness, witness_p_sum })
}

/// `q̃(α) = min Σ q(γᵢ)` over all positive decompositions `α = Σ γᵢ`
/// (including the trivial one), by brute-force enumeration.
pub fn q_tilde(q: &Quiver, a: &[i64], budget: i64) -> Result<i64, RepError> {
    let mut best: Option<i64> = None;
    let mut err = None;
    visit_decompositions(a, 1, budget, |parts| {
        let mut sum = 0;
        for part in parts {
            match tits_q(q, part) {
                Ok(v) => sum += v,
                Err(e) => {
                    err = Some(e);
                    return ControlFlow::Break(());
                }
            }
        }
        best = Some(best.map_or(sum, |b: i64| b.min(sum)));
        ControlFlow::Continue(())
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    best.ok_or(RepError::ZeroDims)
}

/// King pairing `λ·a = Σ λᵥ aᵥ` in exact rational arithmetic.
pub fn king_pairing(lambda: &[Rat], a: &[i64]) -> Result<Rat, RepError> {
    use num_traits::Zero;
    if lambda.len() != a.len() {
        return Err(RepError::ShapeMismatch(format!(
            "{} weights for {} dimensions",
            lambda.len(),
            a.len()
        )));
    }
    let mut sum = Rat::zero();
    for (l, &d) in lambda.iter().zip(a) {
        sum += l * &Rat::from_integer(d.into());
    }
    Ok(sum)
}

/// Verify a subrepresentation certificate: `embed[v]` is a full-column-rank
/// matrix `Sᵥ → Vᵥ`, and the certificate passes iff every arrow matrix maps
/// `im(embed[tail])` into `im(embed[head])`.
pub fn subrep_certificate_check(x: &ExactRep, embed: &[ExactMat]) -> Result<bool, RepError> {
    if embed.len() != x.quiver.n_vertices() {
        return Err(RepError::ShapeMismatch(format!(
            "{} embedding matrices for {} vertices",
            embed.len(),
            x.quiver.n_vertices()
        )));
    }
    for (v, e) in embed.iter().enumerate() {
        if e.rows != x.dims[v] as usize || e.cols > e.rows {
            return Err(RepError::ShapeMismatch(format!(
                "vertex {v}: embedding is {}×{}, ambient dimension {}",
                e.rows, e.cols, x.dims[v]
            )));
        }
        if e.rank() != e.cols {
            return Err(RepError::ShapeMismatch(format!(
                "vertex {v}: embedding matrix is not injective"
            )));
        }
    }
    for (k, &(t, h)) in x.quiver.arrows().iter().enumerate() {
        let image = x.mats[k].mul(&embed[t]);
        // im(x_a · E_t) ⊆ im(E_h) iff augmenting E_h by the image columns
        // leaves the rank unchanged.
        let mut aug = ExactMat::zeros(embed[h].rows, embed[h].cols + image.cols);
        for r in 0..embed[h].rows {
            for c in 0..embed[h].cols {
                aug[(r, c)] = embed[h][(r, c)].clone();
            }
            for c in 0..image.cols {
                aug[(r, embed[h].cols + c)] = image[(r, c)].clone();
            }
        }
        if aug.rank() != embed[h].cols {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{euler_form, random_quiver, SquidShape};
    use num_traits::Zero;
    use rand::Rng;

    fn kronecker() -> Quiver {
        SquidShape::new(
            StarShape::new(vec![1]).unwrap(),
            vec![(GaussRat::one(), GaussRat::zero())],
        )
        .unwrap()
        .build()
    }

    #[test]
    fn random_rep_contract() {
        let q = kronecker();
        let a = vec![1, 2];
        assert_eq!(random_rep(&q, &a, 7, 0).unwrap_err(), RepError::InvalidPool);
        let r1 = random_rep(&q, &a, 7, 3).unwrap();
        let r2 = random_rep(&q, &a, 7, 3).unwrap();
        assert_eq!(r1, r2);
        let r3 = random_rep(&q, &a, 8, 3).unwrap();
        assert_ne!(r1, r3);

        let zeroed = random_rep(&q, &[0, 2], 1, 3).unwrap();
        assert!(zeroed.mats().iter().all(ExactMat::is_empty));
    }

    #[test]
    fn hom_ext_zero_rep() {
        let q = StarShape::new(vec![3, 2]).unwrap().build();
        let a = vec![2, 2, 1, 1];
        let z = ExactRep::zero(q.clone(), a.clone()).unwrap();
        let (hom, ext) = hom_ext_dims(&z, &z).unwrap();
        let expected_hom: i64 = a.iter().map(|d| d * d).sum();
        let expected_ext: i64 = q.arrows().iter().map(|&(t, h)| a[t] * a[h]).sum();
        assert_eq!(hom as i64, expected_hom);
        assert_eq!(ext as i64, expected_ext);
    }

    #[test]
    fn hom_minus_ext_is_euler_form() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(99);
        for seed in 0..25u64 {
            let q = random_quiver(5, 8, seed);
            let dims = |rng: &mut rand_chacha::ChaCha20Rng| -> DimVec {
                (0..q.n_vertices()).map(|_| rng.gen_range(0..=2)).collect()
            };
            let a = dims(&mut rng);
            let b = dims(&mut rng);
            let x = random_rep(&q, &a, seed.wrapping_mul(3), 4).unwrap();
            let y = random_rep(&q, &b, seed.wrapping_mul(5) + 1, 4).unwrap();
            let (hom, ext) = hom_ext_dims(&x, &y).unwrap();
            assert_eq!(hom as i64 - ext as i64, euler_form(&q, &a, &b).unwrap());
        }
    }

    #[test]
    fn generic_kronecker_12() {
        let q = kronecker();
        let x = random_rep(&q, &[1, 2], 5, 5).unwrap();
        assert_eq!(hom_ext_dims(&x, &x).unwrap(), (1, 0));
        assert_eq!(stabilizer_dim(&x).unwrap(), 0);
    }

    #[test]
    fn stabilizer_examples() {
        let star = StarShape::new(vec![2, 2, 2]).unwrap().build();
        let alpha = vec![2, 1, 1, 1];
        let generic = random_rep(&star, &alpha, 11, 5).unwrap();
        assert_eq!(stabilizer_dim(&generic).unwrap(), 0);

        let zero = ExactRep::zero(star.clone(), alpha.clone()).unwrap();
        assert_eq!(stabilizer_dim(&zero).unwrap() as i64, 4 + 1 + 1 + 1 - 1);

        let zero_dims = ExactRep::zero(star, vec![0, 0, 0, 0]).unwrap();
        assert_eq!(stabilizer_dim(&zero_dims).unwrap_err(), RepError::ZeroDims);

        // Direct sum of two non-isomorphic simple Kronecker reps of dims (1,1):
        // endomorphisms are blockwise scalars, so the stabilizer is a line.
        let k = kronecker();
        let mk = |s: i64| {
            ExactMat::from_fn(1, 1, |_, _| GaussRat::from_ints(s, 0))
        };
        let sum = ExactRep::new(
            k,
            vec![2, 2],
            vec![mk(1).block_diag(&mk(1)), mk(2).block_diag(&mk(3))],
        )
        .unwrap();
        assert_eq!(stabilizer_dim(&sum).unwrap(), 1);
    }

    #[test]
    fn census_examples() {
        let q5 = StarShape::new(vec![2, 2, 2, 2, 2]).unwrap().build();
        let alpha = vec![2, 1, 1, 1, 1, 1];
        let census = parameter_census(&q5, &alpha, 500, 0).unwrap();
        assert!(census.fraction_trivial >= 0.99, "got {}", census.fraction_trivial);
        assert_eq!(census.dim_g, 8);
        assert_eq!(census.dim_rep, 10);
        // Generic stratum: dim Rep + 0 − dim G = p(α) + 1 − 1 = 2.
        assert_eq!(census.params_bound, 2);

        let point = StarShape::new(vec![1]).unwrap().build();
        let c = parameter_census(&point, &[1], 20, 3).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(0, 20)]));

        let c1 = parameter_census(&q5, &alpha, 1, 9).unwrap();
        let c2 = parameter_census(&q5, &alpha, 1, 9).unwrap();
        assert_eq!(c1.counts, c2.counts);
    }

    #[test]
    fn decomposition_examples() {
        let q3 = StarShape::new(vec![2, 2, 2]).unwrap().build();
        let two_eps = vec![2, 0, 0, 0];
        let decs = enumerate_decompositions(&q3, &two_eps, 2, false, 12).unwrap();
        assert_eq!(decs.len(), 1);
        assert_eq!(decs[0].parts, vec![vec![1, 0, 0, 0], vec![1, 0, 0, 0]]);

        let q2 = StarShape::new(vec![2, 2]).unwrap().build();
        let ones = vec![1, 1, 1];
        let decs = enumerate_decompositions(&q2, &ones, 2, false, 12).unwrap();
        assert_eq!(decs.len(), 4);
        for d in &decs {
            let mut total = vec![0i64; 3];
            for p in &d.parts {
                assert!(p.iter().any(|&x| x > 0));
                for (t, v) in total.iter_mut().zip(p) {
                    *t += v;
                }
            }
            assert_eq!(total, ones);
            assert!(d.parts.windows(2).all(|w| w[0] <= w[1]));
        }

        // Same target, root parts only: {ε₀,ε₁,ε₂} and the two root pairs.
        let root_decs = enumerate_decompositions(&q2, &ones, 2, true, 12).unwrap();
        assert_eq!(root_decs.len(), 3);

        let eps = vec![1, 0, 0];
        assert!(enumerate_decompositions(&q2, &eps, 2, false, 12).unwrap().is_empty());

        assert_eq!(
            visit_decompositions(&[13], 1, 12, |_| ControlFlow::Continue(())).unwrap_err(),
            RepError::BudgetExceeded { sum: 13, budget: 12 }
        );
    }

    #[test]
    fn inequality_302_examples() {
        let five = StarShape::new(vec![2, 2, 2, 2, 2]).unwrap();
        let r = check_inequality_302(&five, &[2, 1, 1, 1, 1, 1], 12).unwrap();
        assert!(r.holds);
        assert_eq!(r.p_alpha, 2);

        let three = StarShape::new(vec![2, 2, 2]).unwrap();
        let r = check_inequality_302(&three, &[2, 0, 0, 0], 12).unwrap();
        assert!(!r.holds);
        assert_eq!(r.p_alpha, -3);
        assert_eq!(
            r.witness.unwrap().parts,
            vec![vec![1, 0, 0, 0], vec![1, 0, 0, 0]]
        );
        assert_eq!(r.witness_p_sum, Some(0));

        // On the affine four-leg star the Tits form is positive semidefinite
        // with radical spanned by (2,1,1,1,1): every proper part has p ≤ 0
        // while p(α) = 1, so strictness survives even at defect zero.
        let four = StarShape::new(vec![2, 2, 2, 2]).unwrap();
        assert_eq!(four.delta(&[2, 1, 1, 1, 1]).unwrap(), 0);
        let r = check_inequality_302(&four, &[2, 1, 1, 1, 1], 12).unwrap();
        assert!(r.holds);
        assert_eq!(r.p_alpha, 1);
    }

    #[test]
    fn q_tilde_examples() {
        let q3 = StarShape::new(vec![2, 2, 2]).unwrap().build();
        // Fundamental-region vectors have q̃ = q.
        let q4 = StarShape::new(vec![2, 2, 2, 2]).unwrap().build();
        assert_eq!(q_tilde(&q4, &[2, 1, 1, 1, 1], 12).unwrap(), 0);
        // 2ε₀ does better split in half: q̃ = 2·q(ε₀) = 2 < q(2ε₀) = 4.
        assert_eq!(q_tilde(&q3, &[2, 0, 0, 0], 12).unwrap(), 2);
        assert_eq!(q_tilde(&q3, &[1, 0, 0, 0], 12).unwrap(), 1);
    }

    #[test]
    fn king_and_certificates() {
        let lambda = vec![Rat::from_integer(1.into()), Rat::zero(), Rat::zero()];
        assert_eq!(king_pairing(&lambda, &[0, 0, 0]).unwrap(), Rat::zero());
        assert_eq!(king_pairing(&lambda, &[5, 2, 3]).unwrap(), Rat::from_integer(5.into()));
        assert!(king_pairing(&lambda, &[1, 2]).is_err());

        // Identity Kronecker rep of dims (2,2): the first coordinate line is
        // invariant; a mismatched pair of lines is not.
        let k = kronecker();
        let x = ExactRep::new(k, vec![2, 2], vec![ExactMat::identity(2), ExactMat::identity(2)])
            .unwrap();
        let line = |r0: i64, r1: i64| {
            ExactMat::from_fn(2, 1, |r, _| GaussRat::from_ints(if r == 0 { r0 } else { r1 }, 0))
        };
        assert!(subrep_certificate_check(&x, &[line(1, 0), line(1, 0)]).unwrap());
        assert!(!subrep_certificate_check(&x, &[line(1, 0), line(0, 1)]).unwrap());
        // Zero embedding columns are rejected as non-injective.
        let zero_col = ExactMat::zeros(2, 1);
        assert!(subrep_certificate_check(&x, &[zero_col, line(1, 0)]).is_err());
    }

    #[test]
    fn exact_rep_serde_round_trip() {
        let q = StarShape::new(vec![2, 2]).unwrap().build();
        let x = random_rep(&q, &[2, 1, 1], 3, 4).unwrap();
        let js = serde_json::to_string(&x).unwrap();
        let back: ExactRep = serde_json::from_str(&js).unwrap();
        assert_eq!(x, back);
        assert_eq!(serde_json::to_string(&back).unwrap(), js);
    }
}
