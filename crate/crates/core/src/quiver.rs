//! Quiver combinatorics: bilinear forms, reflections, the fundamental region,
//! root classification, and builders for star-shaped and squid quivers.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! * The Euler–Ringel form is `⟨a,b⟩ = Σᵢ aᵢbᵢ − Σ_{arrows} a_{tail} b_{head}`,
//!   its symmetrization `(a,b) = ⟨a,b⟩ + ⟨b,a⟩`, and the Tits form
//!   `q(a) = ⟨a,a⟩` with `p(a) = 1 − q(a)`.
//! * Star quivers have the central vertex `0` first, then leg vertices
//!   `(i,j)` labeled `"i_j"` in leg-major order; every leg arrow points
//!   toward the center: `(i,1)→0`, `(i,j)→(i,j−1)`.
//! * Squid quivers append the vertex `∞` (label `"inf"`) last, plus the two
//!   Kronecker arrows `b₀, b₁ : 0 → ∞` after all leg arrows.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{GaussRat, Rat};

/// Dimension vector over a quiver's ordered vertex list. Nonnegative for all
/// region/root inputs; reflections may emit signed entries transiently.
pub type DimVec = Vec<i64>;

/// Errors from quiver construction and form evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuiverError {
    #[error("arrow from `{0}` to itself: quivers here are loop-free")]
    LoopArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("dimension vector has {got} entries, quiver has {expected} vertices")]
    VertexMismatch { expected: usize, got: usize },
    #[error("dimension vector must be nonnegative for this operation")]
    NegativeEntry,
    #[error("zero dimension vector")]
    ZeroVector,
    #[error("marked points {0} and {1} coincide on the projective line")]
    DuplicatePoint(usize, usize),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
}

/// Finite loop-free directed multigraph with ordered, labeled vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    labels: Vec<String>,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    /// Build from labels and arrows given as vertex indices.
    pub fn from_indices(labels: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self, QuiverError> {
        for &(t, h) in &arrows {
            if t >= labels.len() || h >= labels.len() {
                return Err(QuiverError::UnknownVertex(format!("#{}", t.max(h))));
            }
            if t == h {
                return Err(QuiverError::LoopArrow(labels[t].clone()));
            }
        }
        Ok(Quiver { labels, arrows })
    }

    /// Build from labels and arrows given as `(tail, head)` label pairs.
    pub fn from_labels(labels: Vec<String>, arrows: &[(String, String)]) -> Result<Self, QuiverError> {
        let index: BTreeMap<&str, usize> =
            labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        if index.len() != labels.len() {
            return Err(QuiverError::InvalidShape("duplicate vertex label".into()));
        }
        let mut idx_arrows = Vec::with_capacity(arrows.len());
        for (t, h) in arrows {
            let ti = *index.get(t.as_str()).ok_or_else(|| QuiverError::UnknownVertex(t.clone()))?;
            let hi = *index.get(h.as_str()).ok_or_else(|| QuiverError::UnknownVertex(h.clone()))?;
            idx_arrows.push((ti, hi));
        }
        Self::from_indices(labels, idx_arrows)
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Arrows as `(tail, head)` vertex indices, in declaration order.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    fn check_dims(&self, a: &[i64]) -> Result<(), QuiverError> {
        if a.len() != self.labels.len() {
            return Err(QuiverError::VertexMismatch { expected: self.labels.len(), got: a.len() });
        }
        Ok(())
    }

    /// Convert a labeled dimension map into the internal ordered vector,
    /// requiring the key set to match the vertex set exactly.
    pub fn dims_from_map(&self, map: &BTreeMap<String, i64>) -> Result<DimVec, QuiverError> {
        if map.len() != self.labels.len() {
            return Err(QuiverError::VertexMismatch { expected: self.labels.len(), got: map.len() });
        }
        self.labels
            .iter()
            .map(|l| map.get(l).copied().ok_or_else(|| QuiverError::UnknownVertex(l.clone())))
            .collect()
    }

    /// Labeled view of a dimension vector (deterministic key order).
    pub fn dims_to_map(&self, a: &[i64]) -> Result<BTreeMap<String, i64>, QuiverError> {
        self.check_dims(a)?;
        Ok(self.labels.iter().cloned().zip(a.iter().copied()).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: Vec<String>,
    arrows: Vec<(String, String)>,
}

impl Serialize for Quiver {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let arrows = self
            .arrows
            .iter()
            .map(|&(t, h)| (self.labels[t].clone(), self.labels[h].clone()))
            .collect();
        QuiverJson { vertices: self.labels.clone(), arrows }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quiver {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = QuiverJson::deserialize(d)?;
        Quiver::from_labels(raw.vertices, &raw.arrows).map_err(D::Error::custom)
    }
}

/// Shape data for a star quiver: `w[i]` is the flag length of leg `i+1`;
/// a leg of length 1 contributes no vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarShape {
    pub w: Vec<usize>,
}

impl StarShape {
    pub fn new(w: Vec<usize>) -> Result<Self, QuiverError> {
        if w.is_empty() {
            return Err(QuiverError::InvalidShape("a star needs at least one leg".into()));
        }
        if w.contains(&0) {
            return Err(QuiverError::InvalidShape("flag lengths must be ≥ 1".into()));
        }
        Ok(StarShape { w })
    }

    pub fn n_legs(&self) -> usize {
        self.w.len()
    }

    /// Total vertex count `1 + Σ(wᵢ−1)`.
    pub fn n_vertices(&self) -> usize {
        1 + self.w.iter().map(|&wi| wi - 1).sum::<usize>()
    }

    /// Index of the leg vertex `(i,j)` (1-based leg `i`, 1-based `j ≤ wᵢ−1`)
    /// in the fixed vertex order `0, (1,1)…(1,w₁−1), (2,1)…`.
    pub fn leg_vertex(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.w.len() && j >= 1 && j < self.w[i - 1]);
        1 + self.w[..i - 1].iter().map(|&wl| wl - 1).sum::<usize>() + (j - 1)
    }

    pub fn build(&self) -> Quiver {
        let mut labels = vec!["0".to_string()];
        let mut arrows = Vec::new();
        for (i, &wi) in self.w.iter().enumerate() {
            for j in 1..wi {
                labels.push(format!("{}_{}", i + 1, j));
                let this = labels.len() - 1;
                let target = if j == 1 { 0 } else { this - 1 };
                arrows.push((this, target));
            }
        }
        Quiver { labels, arrows }
    }

    /// Defect `δ(a) = −2a₀ + Σᵢ a_{i1}` (legs of length 1 contribute 0).
    pub fn delta(&self, a: &[i64]) -> Result<i64, QuiverError> {
        if a.len() != self.n_vertices() {
            return Err(QuiverError::VertexMismatch { expected: self.n_vertices(), got: a.len() });
        }
        let mut d = -2 * a[0];
        for (i, &wi) in self.w.iter().enumerate() {
            if wi > 1 {
                d += a[self.leg_vertex(i + 1, 1)];
            }
        }
        Ok(d)
    }

    /// Tits form as a real quadratic form via the sum-of-squares expansion
    /// `q(x) = x₀² − Σᵢ x₀x_{i1} + Σᵢ ½[x_{i1}² + Σⱼ (x_{ij}−x_{i,j+1})²]`
    /// (with `x_{i,wᵢ} = 0`); agrees with `tits_q` on integer vectors and is
    /// positive definite on the hyperplane `x₀ = 0`.
    pub fn q_expansion(&self, x: &[Rat]) -> Result<Rat, QuiverError> {
        use num_traits::Zero;
        if x.len() != self.n_vertices() {
            return Err(QuiverError::VertexMismatch { expected: self.n_vertices(), got: x.len() });
        }
        let half = Rat::new(1.into(), 2.into());
        let mut q = &x[0] * &x[0];
        for (i, &wi) in self.w.iter().enumerate() {
            if wi == 1 {
                continue;
            }
            let first = &x[self.leg_vertex(i + 1, 1)];
            q -= &x[0] * first;
            q += &half * &(first * first);
            for j in 1..wi {
                let cur = &x[self.leg_vertex(i + 1, j)];
                let next = if j + 1 < wi {
                    x[self.leg_vertex(i + 1, j + 1)].clone()
                } else {
                    Rat::zero()
                };
                let d = cur - &next;
                q += &half * &(&d * &d);
            }
        }
        Ok(q)
    }
}

/// Shape data for a squid: a star plus one marked point of the projective
/// line per leg, given as nonzero homogeneous pairs `(λᵢ₀ : λᵢ₁)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquidShape {
    pub star: StarShape,
    pub points: Vec<(GaussRat, GaussRat)>,
}

impl SquidShape {
    pub fn new(star: StarShape, points: Vec<(GaussRat, GaussRat)>) -> Result<Self, QuiverError> {
        if points.len() != star.n_legs() {
            return Err(QuiverError::InvalidShape(format!(
                "{} legs but {} marked points",
                star.n_legs(),
                points.len()
            )));
        }
        for (i, (l0, l1)) in points.iter().enumerate() {
            if l0.is_zero() && l1.is_zero() {
                return Err(QuiverError::InvalidShape(format!("point {} is (0:0)", i + 1)));
            }
            for (j, (m0, m1)) in points.iter().enumerate().skip(i + 1) {
                // (λ₀:λ₁) = (μ₀:μ₁) iff the cross product vanishes.
                let cross = &(l0 * m1) - &(l1 * m0);
                if cross.is_zero() {
                    return Err(QuiverError::DuplicatePoint(i + 1, j + 1));
                }
            }
        }
        Ok(SquidShape { star, points })
    }

    /// Star vertices and arrows, then `∞` and the Kronecker pair `b₀,b₁: 0→∞`.
    pub fn build(&self) -> Quiver {
        let mut q = self.star.build();
        q.labels.push("inf".to_string());
        let inf = q.labels.len() - 1;
        q.arrows.push((0, inf));
        q.arrows.push((0, inf));
        q
    }

    pub fn inf_vertex(&self) -> usize {
        self.star.n_vertices()
    }
}

#[derive(Serialize, Deserialize)]
struct SquidJson {
    w: Vec<usize>,
    points: Vec<[String; 4]>,
}

impl Serialize for SquidShape {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let points = self
            .points
            .iter()
            .map(|(l0, l1)| {
                [
                    crate::exact::fmt_rat(&l0.re),
                    crate::exact::fmt_rat(&l0.im),
                    crate::exact::fmt_rat(&l1.re),
                    crate::exact::fmt_rat(&l1.im),
                ]
            })
            .collect();
        SquidJson { w: self.star.w.clone(), points }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquidShape {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = SquidJson::deserialize(d)?;
        let star = StarShape::new(raw.w).map_err(D::Error::custom)?;
        let mut points = Vec::with_capacity(raw.points.len());
        for [a, b, c, e] in &raw.points {
            let parse = |s: &str| crate::exact::parse_rat(s).map_err(D::Error::custom);
            points.push((
                GaussRat::new(parse(a)?, parse(b)?),
                GaussRat::new(parse(c)?, parse(e)?),
            ));
        }
        SquidShape::new(star, points).map_err(D::Error::custom)
    }
}

/// Euler–Ringel form `⟨a,b⟩ = Σᵢ aᵢbᵢ − Σ_{arrows} a_{tail} b_{head}`.
pub fn euler_form(q: &Quiver, a: &[i64], b: &[i64]) -> Result<i64, QuiverError> {
    q.check_dims(a)?;
    q.check_dims(b)?;
    let diag: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let arrows: i64 = q.arrows.iter().map(|&(t, h)| a[t] * b[h]).sum();
    Ok(diag - arrows)
}

/// Tits quadratic form `q(a) = ⟨a,a⟩`.
pub fn tits_q(q: &Quiver, a: &[i64]) -> Result<i64, QuiverError> {
    euler_form(q, a, a)
}

/// `p(a) = 1 − q(a)`, the parameter count at a root.
pub fn tits_p(q: &Quiver, a: &[i64]) -> Result<i64, QuiverError> {
    Ok(1 - tits_q(q, a)?)
}

/// Symmetrized form `(a,b) = ⟨a,b⟩ + ⟨b,a⟩`.
pub fn symmetrized_form(q: &Quiver, a: &[i64], b: &[i64]) -> Result<i64, QuiverError> {
    Ok(euler_form(q, a, b)? + euler_form(q, b, a)?)
}

/// `(a, εᵢ) = 2aᵢ − Σ_{head(arrow)=i} a_{tail} − Σ_{tail(arrow)=i} a_{head}`.
pub fn pairing_with_unit(q: &Quiver, a: &[i64], i: usize) -> Result<i64, QuiverError> {
    q.check_dims(a)?;
    if i >= q.n_vertices() {
        return Err(QuiverError::UnknownVertex(format!("#{i}")));
    }
    let mut v = 2 * a[i];
    for &(t, h) in &q.arrows {
        if h == i {
            v -= a[t];
        }
        if t == i {
            v -= a[h];
        }
    }
    Ok(v)
}

/// Simple reflection at vertex `i`: `a ↦ a − (a,εᵢ)·εᵢ` (only entry `i` moves).
pub fn reflect(q: &Quiver, i: usize, a: &[i64]) -> Result<DimVec, QuiverError> {
    let pair = pairing_with_unit(q, a, i)?;
    let mut out = a.to_vec();
    out[i] -= pair;
    Ok(out)
}

/// Support connectivity in the underlying undirected graph (zero vertices
/// are not part of the support).
pub fn support_connected(q: &Quiver, a: &[i64]) -> Result<bool, QuiverError> {
    q.check_dims(a)?;
    let support: Vec<usize> = (0..a.len()).filter(|&i| a[i] != 0).collect();
    let Some(&start) = support.first() else { return Ok(false) };
    let mut seen = vec![false; a.len()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &(t, h) in &q.arrows {
            let next = if t == v { h } else if h == v { t } else { continue };
            if a[next] != 0 && !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    Ok(support.iter().all(|&v| seen[v]))
}

/// Membership in the fundamental region: nonzero, connected support, and
/// `(a, εᵢ) ≤ 0` at every vertex. Requires a nonnegative input.
pub fn in_fundamental_region(q: &Quiver, a: &[i64]) -> Result<bool, QuiverError> {
    q.check_dims(a)?;
    if a.iter().any(|&x| x < 0) {
        return Err(QuiverError::NegativeEntry);
    }
    if a.iter().all(|&x| x == 0) {
        return Ok(false);
    }
    if !support_connected(q, a)? {
        return Ok(false);
    }
    for i in 0..q.n_vertices() {
        if pairing_with_unit(q, a, i)? > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the Kac-style root classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootClass {
    NotRoot,
    RealRoot,
    ImaginaryRoot,
}

impl std::fmt::Display for RootClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RootClass::NotRoot => "NotRoot",
            RootClass::RealRoot => "RealRoot",
            RootClass::ImaginaryRoot => "ImaginaryRoot",
        };
        f.write_str(s)
    }
}

/// Classify a sign-coherent vector as a real root, an imaginary root, or a
/// non-root by reflecting toward lower height.
///
/// Mixed-sign inputs are not roots. Working with `|a|`: if the vector is a
/// coordinate vector it is a real root; otherwise reflect at the smallest
/// vertex with `(a,εᵢ) > 0` (exactly the reflections that strictly lower the
/// height). A reflection that leaves the nonnegative cone ends the descent
/// with `NotRoot` (positive roots stay positive under it). When no pairing is
/// positive the vector is an imaginary root exactly when it sits in the
/// fundamental region.
pub fn classify_root(q: &Quiver, a: &[i64]) -> Result<RootClass, QuiverError> {
    q.check_dims(a)?;
    if a.iter().all(|&x| x == 0) {
        return Err(QuiverError::ZeroVector);
    }
    let has_pos = a.iter().any(|&x| x > 0);
    let has_neg = a.iter().any(|&x| x < 0);
    if has_pos && has_neg {
        return Ok(RootClass::NotRoot);
    }
    let mut v: DimVec = a.iter().map(|x| x.abs()).collect();
    loop {
        if v.iter().sum::<i64>() == 1 {
            // Nonnegative with height one: a coordinate vector.
            return Ok(RootClass::RealRoot);
        }
        let mut descent = None;
        for i in 0..q.n_vertices() {
            if pairing_with_unit(q, &v, i)? > 0 {
                descent = Some(i);
                break;
            }
        }
        match descent {
            Some(i) => {
                v = reflect(q, i, &v)?;
                if v[i] < 0 {
                    return Ok(RootClass::NotRoot);
                }
            }
            None => {
                return Ok(if in_fundamental_region(q, &v)? {
                    RootClass::ImaginaryRoot
                } else {
                    RootClass::NotRoot
                });
            }
        }
    }
}

/// Double quiver: the same vertices with a reversed copy of every arrow
/// appended after the originals, preserving order.
pub fn double_quiver(q: &Quiver) -> Quiver {
    let mut arrows = q.arrows.clone();
    arrows.extend(q.arrows.iter().map(|&(t, h)| (h, t)));
    Quiver { labels: q.labels.clone(), arrows }
}

/// Deterministic random loop-free multigraph: vertex count in `1..=max_vertices`,
/// arrow count in `0..=max_arrows` (forced to 0 on a single vertex).
pub fn random_quiver(max_vertices: usize, max_arrows: usize, seed: u64) -> Quiver {
    assert!(max_vertices >= 1);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_vertices);
    let n_arrows = if n == 1 { 0 } else { rng.gen_range(0..=max_arrows) };
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    let mut arrows = Vec::with_capacity(n_arrows);
    for _ in 0..n_arrows {
        let t = rng.gen_range(0..n);
        let h = loop {
            let h = rng.gen_range(0..n);
            if h != t {
                break h;
            }
        };
        arrows.push((t, h));
    }
    Quiver { labels, arrows }
}
