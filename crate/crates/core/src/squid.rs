//! Cotangent space of squid representations over double-precision complex
//! numbers: moment map components, symplectic form, coadjoint targets θᴺ,
//! residuals, and moment-map differentials.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnum::{numerical_rank, CMat, CMatJson};
use crate::exact::{ExactMat, GaussRat};
use crate::quiver::{DimVec, Quiver, StarShape};

#[derive(Debug, Error)]
pub enum SquidError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("residue condition violated: Σ m·ζ = {re}{im:+}i is not within 1e-10 of an integer")]
    ResidueConditionViolated { re: f64, im: f64 },
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("block for vertex {0} is singular")]
    SingularBlock(usize),
    #[error("coadjoint target is not trace-free: Σ θ_v·dim_v = {0}")]
    TraceNotZero(f64),
}

/// The squid quiver for a star shape: star vertices first (center `0`, then
/// leg vertices), the vertex `inf` appended last, with two arrows 0 → inf
/// after the leg arrows.
pub fn squid_quiver(shape: &StarShape) -> Quiver {
    let star = shape.build();
    let mut labels: Vec<String> = star.labels().to_vec();
    labels.push("inf".into());
    let inf = labels.len() - 1;
    let mut arrows = star.arrows().to_vec();
    arrows.push((0, inf));
    arrows.push((0, inf));
    Quiver::from_indices(labels, arrows).expect("squid quiver is well formed")
}

/// Dimension vector over the squid quiver for the N-th twist:
/// d₀ = α∞ + (N+1)·α₀ at the center, the leg entries of α, and
/// d∞ = α∞ + N·α₀ at `inf`.
pub fn squid_dim_vec(
    shape: &StarShape,
    alpha: &[i64],
    alpha_inf: i64,
    n_twist: i64,
) -> Result<DimVec, SquidError> {
    if alpha.len() != shape.n_vertices() {
        return Err(SquidError::ShapeMismatch(format!(
            "α has {} entries for a star with {} vertices",
            alpha.len(),
            shape.n_vertices()
        )));
    }
    if n_twist < 0 {
        return Err(SquidError::InvalidDims(format!("twist N = {n_twist} must be ≥ 0")));
    }
    let d_inf = alpha_inf + n_twist * alpha[0];
    let d_zero = alpha_inf + (n_twist + 1) * alpha[0];
    if d_inf < 0 || d_zero < 0 || alpha.iter().any(|&a| a < 0) {
        return Err(SquidError::InvalidDims(format!(
            "negative entry in ({d_zero}, …, {d_inf})"
        )));
    }
    let mut dims = alpha.to_vec();
    dims[0] = d_zero;
    dims.push(d_inf);
    Ok(dims)
}

/// A point of the cotangent space of squid representations: `b0, b1` map the
/// 0-space to the ∞-space, `c[i][j-1]` maps leg space (i, j) to (i, j−1)
/// (with (i, 0) the 0-space), and the hatted blocks run in reverse.
#[derive(Debug, Clone, PartialEq)]
pub struct CotangentSquidPoint {
    shape: StarShape,
    dims: DimVec,
    b0: CMat,
    b1: CMat,
    bhat0: CMat,
    bhat1: CMat,
    c: Vec<Vec<CMat>>,
    chat: Vec<Vec<CMat>>,
}

impl CotangentSquidPoint {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        shape: StarShape,
        dims: DimVec,
        b0: CMat,
        b1: CMat,
        bhat0: CMat,
        bhat1: CMat,
        c: Vec<Vec<CMat>>,
        chat: Vec<Vec<CMat>>,
    ) -> Result<Self, SquidError> {
        let x = CotangentSquidPoint { shape, dims, b0, b1, bhat0, bhat1, c, chat };
        x.validate()?;
        Ok(x)
    }

    fn validate(&self) -> Result<(), SquidError> {
        let nv = self.shape.n_vertices() + 1;
        if self.dims.len() != nv {
            return Err(SquidError::ShapeMismatch(format!(
                "dims has {} entries for a squid with {} vertices",
                self.dims.len(),
                nv
            )));
        }
        if self.dims.iter().any(|&d| d < 0) {
            return Err(SquidError::InvalidDims("negative dimension".into()));
        }
        if self.c.len() != self.shape.n_legs() || self.chat.len() != self.shape.n_legs() {
            return Err(SquidError::ShapeMismatch("leg matrix count".into()));
        }
        let check = |m: &CMat, rows: i64, cols: i64, what: &str| {
            if m.nrows() as i64 != rows || m.ncols() as i64 != cols {
                Err(SquidError::ShapeMismatch(format!(
                    "{what} is {}×{}, expected {rows}×{cols}",
                    m.nrows(),
                    m.ncols()
                )))
            } else {
                Ok(())
            }
        };
        let (d0, dinf) = (self.dims[0], self.dims[nv - 1]);
        check(&self.b0, dinf, d0, "b0")?;
        check(&self.b1, dinf, d0, "b1")?;
        check(&self.bhat0, d0, dinf, "bhat0")?;
        check(&self.bhat1, d0, dinf, "bhat1")?;
        for (i, &wi) in self.shape.w.iter().enumerate() {
            if self.c[i].len() != wi - 1 || self.chat[i].len() != wi - 1 {
                return Err(SquidError::ShapeMismatch(format!(
                    "leg {} has {} matrices, expected {}",
                    i + 1,
                    self.c[i].len(),
                    wi - 1
                )));
            }
            for j in 1..wi {
                let up = if j == 1 { d0 } else { self.dims[self.shape.leg_vertex(i + 1, j - 1)] };
                let lo = self.dims[self.shape.leg_vertex(i + 1, j)];
                check(&self.c[i][j - 1], up, lo, &format!("c_{}_{}", i + 1, j))?;
                check(&self.chat[i][j - 1], lo, up, &format!("chat_{}_{}", i + 1, j))?;
            }
        }
        Ok(())
    }

    pub fn zeros(shape: StarShape, dims: DimVec) -> Result<Self, SquidError> {
        let nv = shape.n_vertices() + 1;
        if dims.len() != nv || dims.iter().any(|&d| d < 0) {
            return Err(SquidError::ShapeMismatch(format!(
                "dims has {} entries for a squid with {} vertices",
                dims.len(),
                nv
            )));
        }
        let (d0, dinf) = (dims[0] as usize, dims[nv - 1] as usize);
        let mut c = Vec::new();
        let mut chat = Vec::new();
        for (i, &wi) in shape.w.iter().enumerate() {
            let mut leg = Vec::new();
            let mut leg_hat = Vec::new();
            for j in 1..wi {
                let up = if j == 1 { d0 } else { dims[shape.leg_vertex(i + 1, j - 1)] as usize };
                let lo = dims[shape.leg_vertex(i + 1, j)] as usize;
                leg.push(CMat::zeros(up, lo));
                leg_hat.push(CMat::zeros(lo, up));
            }
            c.push(leg);
            chat.push(leg_hat);
        }
        Ok(CotangentSquidPoint {
            shape,
            dims,
            b0: CMat::zeros(dinf, d0),
            b1: CMat::zeros(dinf, d0),
            bhat0: CMat::zeros(d0, dinf),
            bhat1: CMat::zeros(d0, dinf),
            c,
            chat,
        })
    }

    /// Deterministic random point with entries uniform in [−1, 1]².
    pub fn random(shape: StarShape, dims: DimVec, seed: u64) -> Result<Self, SquidError> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut x = Self::zeros(shape, dims)?;
        for k in 0..x.n_blocks() {
            let (r, c) = x.block_shape(k);
            *x.block_mut(k) = crate::cnum::random_cmat(&mut rng, r, c);
        }
        Ok(x)
    }

    /// Deterministic random point with Gaussian-integer entries from
    /// [−pool, pool]², returned both as floats and as the exact matrices of
    /// the underlying doubled representation (in double-quiver arrow order).
    pub fn random_rational(
        shape: StarShape,
        dims: DimVec,
        seed: u64,
        pool: i64,
    ) -> Result<(Self, Vec<ExactMat>), SquidError> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut x = Self::zeros(shape, dims)?;
        let mut exact = Vec::with_capacity(x.n_blocks());
        for k in 0..x.n_blocks() {
            let (r, c) = x.block_shape(k);
            let m = crate::cnum::random_int_cmat(&mut rng, r, c, pool);
            exact.push(ExactMat::from_fn(r, c, |rr, cc| {
                GaussRat::from_ints(m[(rr, cc)].re as i64, m[(rr, cc)].im as i64)
            }));
            *x.block_mut(k) = m;
        }
        Ok((x, exact))
    }

    pub fn shape(&self) -> &StarShape {
        &self.shape
    }

    pub fn dims(&self) -> &DimVec {
        &self.dims
    }

    fn inf_index(&self) -> usize {
        self.dims.len() - 1
    }

    fn n_leg_mats(&self) -> usize {
        self.shape.w.iter().map(|&wi| wi - 1).sum()
    }

    /// Number of matrix blocks (doubled arrows).
    pub fn n_blocks(&self) -> usize {
        2 * (self.n_leg_mats() + 2)
    }

    /// Blocks in double-quiver arrow order: c (leg-major), b0, b1, then the
    /// hatted reverses in the same order.
    fn block(&self, k: usize) -> &CMat {
        let l = self.n_leg_mats();
        match k {
            _ if k < l => self.leg_block(&self.c, k),
            _ if k == l => &self.b0,
            _ if k == l + 1 => &self.b1,
            _ if k < 2 * l + 2 => self.leg_block(&self.chat, k - l - 2),
            _ if k == 2 * l + 2 => &self.bhat0,
            _ if k == 2 * l + 3 => &self.bhat1,
            _ => panic!("block index {k} out of range"),
        }
    }

    fn block_mut(&mut self, k: usize) -> &mut CMat {
        let l = self.n_leg_mats();
        match k {
            _ if k < l => {
                let (i, j) = self.leg_block_pos(k);
                &mut self.c[i][j]
            }
            _ if k == l => &mut self.b0,
            _ if k == l + 1 => &mut self.b1,
            _ if k < 2 * l + 2 => {
                let (i, j) = self.leg_block_pos(k - l - 2);
                &mut self.chat[i][j]
            }
            _ if k == 2 * l + 2 => &mut self.bhat0,
            _ if k == 2 * l + 3 => &mut self.bhat1,
            _ => panic!("block index {k} out of range"),
        }
    }

    fn leg_block_pos(&self, mut k: usize) -> (usize, usize) {
        for (i, &wi) in self.shape.w.iter().enumerate() {
            if k < wi - 1 {
                return (i, k);
            }
            k -= wi - 1;
        }
        panic!("leg block index out of range");
    }

    fn leg_block<'a>(&self, store: &'a [Vec<CMat>], k: usize) -> &'a CMat {
        let (i, j) = self.leg_block_pos(k);
        &store[i][j]
    }

    fn block_shape(&self, k: usize) -> (usize, usize) {
        let m = self.block(k);
        (m.nrows(), m.ncols())
    }

    /// (tail, head) squid vertices of block `k`.
    fn block_arrow(&self, k: usize) -> (usize, usize) {
        let l = self.n_leg_mats();
        let inf = self.inf_index();
        let leg_arrow = |kk: usize| {
            let (i, j) = self.leg_block_pos(kk);
            let tail = self.shape.leg_vertex(i + 1, j + 1);
            let head = if j == 0 { 0 } else { self.shape.leg_vertex(i + 1, j) };
            (tail, head)
        };
        match k {
            _ if k < l => leg_arrow(k),
            _ if k == l || k == l + 1 => (0, inf),
            _ if k < 2 * l + 2 => {
                let (t, h) = leg_arrow(k - l - 2);
                (h, t)
            }
            _ => (inf, 0),
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.shape == other.shape && self.dims == other.dims
    }

    /// X + h·Y blockwise.
    pub fn add_scaled(&self, h: f64, y: &Self) -> Result<Self, SquidError> {
        if !self.same_shape(y) {
            return Err(SquidError::ShapeMismatch("operands differ in shape".into()));
        }
        let mut out = self.clone();
        let s = Complex64::new(h, 0.0);
        for k in 0..out.n_blocks() {
            let sum = self.block(k) + y.block(k) * s;
            *out.block_mut(k) = sum;
        }
        Ok(out)
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        (0..self.n_blocks()).map(|k| self.block(k).norm_squared()).sum()
    }

    /// Blockwise group action: X_a ↦ g_{h(a)} · X_a · g_{t(a)}⁻¹.
    pub fn act(&self, g: &[CMat]) -> Result<Self, SquidError> {
        self.check_vertex_blocks(g)?;
        let mut inv = Vec::with_capacity(g.len());
        for (v, gv) in g.iter().enumerate() {
            inv.push(gv.clone().try_inverse().ok_or(SquidError::SingularBlock(v))?);
        }
        let mut out = self.clone();
        for k in 0..out.n_blocks() {
            let (t, h) = self.block_arrow(k);
            let moved = &g[h] * self.block(k) * &inv[t];
            *out.block_mut(k) = moved;
        }
        Ok(out)
    }

    /// Infinitesimal action ξ·X: (ξ·X)_a = ξ_{h(a)} X_a − X_a ξ_{t(a)}.
    pub fn infinitesimal_action(&self, xi: &[CMat]) -> Result<Self, SquidError> {
        self.check_vertex_blocks(xi)?;
        let mut out = self.clone();
        for k in 0..out.n_blocks() {
            let (t, h) = self.block_arrow(k);
            let moved = &xi[h] * self.block(k) - self.block(k) * &xi[t];
            *out.block_mut(k) = moved;
        }
        Ok(out)
    }

    fn check_vertex_blocks(&self, g: &[CMat]) -> Result<(), SquidError> {
        if g.len() != self.dims.len() {
            return Err(SquidError::ShapeMismatch(format!(
                "{} vertex blocks for {} vertices",
                g.len(),
                self.dims.len()
            )));
        }
        for (v, gv) in g.iter().enumerate() {
            let d = self.dims[v] as usize;
            if gv.nrows() != d || gv.ncols() != d {
                return Err(SquidError::ShapeMismatch(format!(
                    "vertex {v} block is {}×{}, expected {d}×{d}",
                    gv.nrows(),
                    gv.ncols()
                )));
            }
        }
        Ok(())
    }
}

/// Moment map components per squid vertex (same order as `dims`):
/// μ∞ = b₀b̂₀ + b₁b̂₁, μ₀ = Σᵢ c_{i1}ĉ_{i1} − (b̂₀b₀ + b̂₁b₁),
/// μ_{ij} = c_{i,j+1}ĉ_{i,j+1} − ĉ_{ij}c_{ij} (first term absent at the leg end).
pub fn moment_map(x: &CotangentSquidPoint) -> Vec<CMat> {
    let nv = x.dims.len();
    let mut mu: Vec<CMat> =
        (0..nv).map(|v| CMat::zeros(x.dims[v] as usize, x.dims[v] as usize)).collect();
    mu[nv - 1] = &x.b0 * &x.bhat0 + &x.b1 * &x.bhat1;
    mu[0] = -(&x.bhat0 * &x.b0 + &x.bhat1 * &x.b1);
    for (i, &wi) in x.shape.w.iter().enumerate() {
        for j in 1..wi {
            if j == 1 {
                mu[0] += &x.c[i][0] * &x.chat[i][0];
            }
            let mut m = -(&x.chat[i][j - 1] * &x.c[i][j - 1]);
            if j < wi - 1 {
                m += &x.c[i][j] * &x.chat[i][j];
            }
            mu[x.shape.leg_vertex(i + 1, j)] = m;
        }
    }
    mu
}

/// The standard symplectic form
/// ω(X, X′) = Σ_l [tr(b_l b̂′_l) − tr(b′_l b̂_l)] + Σ_{ij} [tr(c_{ij} ĉ′_{ij}) − tr(c′_{ij} ĉ_{ij})].
pub fn symplectic_form(
    x: &CotangentSquidPoint,
    y: &CotangentSquidPoint,
) -> Result<Complex64, SquidError> {
    if !x.same_shape(y) {
        return Err(SquidError::ShapeMismatch("operands differ in shape".into()));
    }
    let mut acc = (&x.b0 * &y.bhat0).trace() - (&y.b0 * &x.bhat0).trace()
        + (&x.b1 * &y.bhat1).trace()
        - (&y.b1 * &x.bhat1).trace();
    for i in 0..x.shape.n_legs() {
        for j in 0..x.c[i].len() {
            acc += (&x.c[i][j] * &y.chat[i][j]).trace() - (&y.c[i][j] * &x.chat[i][j]).trace();
        }
    }
    Ok(acc)
}

/// Differential of the moment map at X in direction Y (product rule),
/// returned per squid vertex.
pub fn moment_differential(
    x: &CotangentSquidPoint,
    y: &CotangentSquidPoint,
) -> Result<Vec<CMat>, SquidError> {
    if !x.same_shape(y) {
        return Err(SquidError::ShapeMismatch("operands differ in shape".into()));
    }
    let nv = x.dims.len();
    let mut d: Vec<CMat> =
        (0..nv).map(|v| CMat::zeros(x.dims[v] as usize, x.dims[v] as usize)).collect();
    d[nv - 1] = &y.b0 * &x.bhat0 + &x.b0 * &y.bhat0 + &y.b1 * &x.bhat1 + &x.b1 * &y.bhat1;
    d[0] = -(&y.bhat0 * &x.b0 + &x.bhat0 * &y.b0 + &y.bhat1 * &x.b1 + &x.bhat1 * &y.b1);
    for (i, &wi) in x.shape.w.iter().enumerate() {
        for j in 1..wi {
            if j == 1 {
                d[0] += &y.c[i][0] * &x.chat[i][0] + &x.c[i][0] * &y.chat[i][0];
            }
            let mut m =
                -(&y.chat[i][j - 1] * &x.c[i][j - 1] + &x.chat[i][j - 1] * &y.c[i][j - 1]);
            if j < wi - 1 {
                m += &y.c[i][j] * &x.chat[i][j] + &x.c[i][j] * &y.chat[i][j];
            }
            d[x.shape.leg_vertex(i + 1, j)] = m;
        }
    }
    Ok(d)
}

/// Numerical rank of dμ_X as a complex linear map from all matrix directions
/// to ⊕_v gl(dim_v).
pub fn moment_differential_rank(x: &CotangentSquidPoint) -> usize {
    let rows: usize = x.dims().iter().map(|&d| (d * d) as usize).sum();
    let cols: usize = (0..x.n_blocks())
        .map(|k| {
            let (r, c) = x.block_shape(k);
            r * c
        })
        .sum();
    let mut m = CMat::zeros(rows, cols);
    let zero = CotangentSquidPoint::zeros(x.shape().clone(), x.dims().clone())
        .expect("shape already validated");
    let mut col = 0;
    for k in 0..x.n_blocks() {
        let (r, c) = x.block_shape(k);
        for rr in 0..r {
            for cc in 0..c {
                let mut y = zero.clone();
                y.block_mut(k)[(rr, cc)] = Complex64::new(1.0, 0.0);
                let d = moment_differential(x, &y).expect("same shape by construction");
                let mut row = 0;
                for block in &d {
                    for br in 0..block.nrows() {
                        for bc in 0..block.ncols() {
                            m[(row, col)] = block[(br, bc)];
                            row += 1;
                        }
                    }
                }
                col += 1;
            }
        }
    }
    numerical_rank(&m)
}

/// Central per-vertex coadjoint target θ_v·Id.
#[derive(Debug, Clone, PartialEq)]
pub struct CoadjointTarget {
    pub theta: Vec<Complex64>,
    pub dims: DimVec,
}

impl CoadjointTarget {
    /// Validates membership in the trace-free dual: Σ θ_v·dim_v ≈ 0.
    pub fn new(theta: Vec<Complex64>, dims: DimVec) -> Result<Self, SquidError> {
        if theta.len() != dims.len() {
            return Err(SquidError::ShapeMismatch(format!(
                "{} scalars for {} vertices",
                theta.len(),
                dims.len()
            )));
        }
        let trace: Complex64 =
            theta.iter().zip(&dims).map(|(t, &d)| *t * d as f64).sum();
        let scale: f64 = theta.iter().zip(&dims).map(|(t, &d)| t.norm() * d as f64).sum();
        if trace.norm() > 1e-8 * (1.0 + scale) {
            return Err(SquidError::TraceNotZero(trace.norm()));
        }
        Ok(CoadjointTarget { theta, dims })
    }

    /// Skips the trace check (for plumbing and distance probes).
    pub fn new_unchecked(theta: Vec<Complex64>, dims: DimVec) -> Self {
        CoadjointTarget { theta, dims }
    }

    pub fn weighted_trace(&self) -> Complex64 {
        self.theta.iter().zip(&self.dims).map(|(t, &d)| *t * d as f64).sum()
    }
}

/// Coadjoint target θᴺ from residue exponents: θ∞ = N+1+Σᵢζ_{i1},
/// θ₀ = −N−Σᵢζ_{i1}, θ_{ij} = ζ_{ij} − ζ_{i,j+1}; requires Σ m_{ij}ζ_{ij}
/// within 1e−10 of an integer (that integer is α∞ = −deg E).
pub fn theta_n(
    shape: &StarShape,
    alpha: &[i64],
    zeta: &[Vec<Complex64>],
    n_twist: i64,
) -> Result<CoadjointTarget, SquidError> {
    if alpha.len() != shape.n_vertices() {
        return Err(SquidError::ShapeMismatch(format!(
            "α has {} entries for a star with {} vertices",
            alpha.len(),
            shape.n_vertices()
        )));
    }
    if zeta.len() != shape.n_legs()
        || zeta.iter().zip(&shape.w).any(|(leg, &wi)| leg.len() != wi)
    {
        return Err(SquidError::ShapeMismatch("ζ legs must match the star shape".into()));
    }
    // Weighted residue sum with m_{ij} = α_{i,j−1} − α_{ij}.
    let mut s = Complex64::new(0.0, 0.0);
    for (i, &wi) in shape.w.iter().enumerate() {
        let mut prev = alpha[0];
        for j in 1..=wi {
            let cur = if j < wi { alpha[shape.leg_vertex(i + 1, j)] } else { 0 };
            let m = prev - cur;
            if m < 0 {
                return Err(SquidError::InvalidDims(format!(
                    "leg {} flag rises from {prev} to {cur}",
                    i + 1
                )));
            }
            s += zeta[i][j - 1] * m as f64;
            prev = cur;
        }
    }
    let nearest = s.re.round();
    if (s.re - nearest).hypot(s.im) > 1e-10 {
        return Err(SquidError::ResidueConditionViolated { re: s.re, im: s.im });
    }
    let alpha_inf = nearest as i64;
    let dims = squid_dim_vec(shape, alpha, alpha_inf, n_twist)?;
    let z: Complex64 = zeta.iter().map(|leg| leg[0]).sum();
    let nf = n_twist as f64;
    let mut theta = vec![Complex64::new(0.0, 0.0); dims.len()];
    theta[dims.len() - 1] = Complex64::new(nf + 1.0, 0.0) + z;
    theta[0] = Complex64::new(-nf, 0.0) - z;
    for (i, &wi) in shape.w.iter().enumerate() {
        for j in 1..wi {
            theta[shape.leg_vertex(i + 1, j)] = zeta[i][j - 1] - zeta[i][j];
        }
    }
    CoadjointTarget::new(theta, dims)
}

/// Squared Frobenius distance of μ(X) from the central target:
/// Σ_v ‖μ_v(X) − θ_v·I‖²_F.
pub fn residual(x: &CotangentSquidPoint, target: &CoadjointTarget) -> Result<f64, SquidError> {
    if target.dims != *x.dims() {
        return Err(SquidError::ShapeMismatch("target dims differ from the point".into()));
    }
    let mu = moment_map(x);
    let mut acc = 0.0;
    for (v, m) in mu.iter().enumerate() {
        let d = m.nrows();
        let shifted = m - CMat::identity(d, d) * target.theta[v];
        acc += shifted.norm_squared();
    }
    Ok(acc)
}

impl Serialize for CotangentSquidPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut mats = BTreeMap::new();
        mats.insert("b0".to_string(), CMatJson::from_mat(&self.b0));
        mats.insert("b1".to_string(), CMatJson::from_mat(&self.b1));
        mats.insert("bhat0".to_string(), CMatJson::from_mat(&self.bhat0));
        mats.insert("bhat1".to_string(), CMatJson::from_mat(&self.bhat1));
        for (i, &wi) in self.shape.w.iter().enumerate() {
            for j in 1..wi {
                mats.insert(
                    format!("c_{}_{}", i + 1, j),
                    CMatJson::from_mat(&self.c[i][j - 1]),
                );
                mats.insert(
                    format!("chat_{}_{}", i + 1, j),
                    CMatJson::from_mat(&self.chat[i][j - 1]),
                );
            }
        }
        SquidPointJson { w: self.shape.w.clone(), dims: self.dims.clone(), mats }.serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
struct SquidPointJson {
    w: Vec<usize>,
    dims: DimVec,
    mats: BTreeMap<String, CMatJson>,
}

impl<'de> Deserialize<'de> for CotangentSquidPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SquidPointJson::deserialize(d)?;
        let shape = StarShape::new(raw.w).map_err(D::Error::custom)?;
        let nv = shape.n_vertices() + 1;
        if raw.dims.len() != nv {
            return Err(D::Error::custom(format!(
                "dims has {} entries for a squid with {nv} vertices",
                raw.dims.len()
            )));
        }
        if raw.dims.iter().any(|&x| x < 0) {
            return Err(D::Error::custom("negative dimension"));
        }
        let expected_mats = 2 * (shape.w.iter().map(|&wi| wi - 1).sum::<usize>() + 2);
        if raw.mats.len() != expected_mats {
            return Err(D::Error::custom(format!(
                "{} matrices supplied, expected {expected_mats}",
                raw.mats.len()
            )));
        }
        let (d0, dinf) = (raw.dims[0] as usize, raw.dims[nv - 1] as usize);
        let get = |name: &str, rows: usize, cols: usize| -> Result<CMat, D::Error> {
            raw.mats
                .get(name)
                .ok_or_else(|| D::Error::custom(format!("missing matrix {name}")))?
                .to_mat(rows, cols)
                .map_err(|e| D::Error::custom(format!("{name}: {e}")))
        };
        let b0 = get("b0", dinf, d0)?;
        let b1 = get("b1", dinf, d0)?;
        let bhat0 = get("bhat0", d0, dinf)?;
        let bhat1 = get("bhat1", d0, dinf)?;
        let mut c = Vec::new();
        let mut chat = Vec::new();
        for (i, &wi) in shape.w.iter().enumerate() {
            let mut leg = Vec::new();
            let mut leg_hat = Vec::new();
            for j in 1..wi {
                let up = if j == 1 {
                    d0
                } else {
                    raw.dims[shape.leg_vertex(i + 1, j - 1)] as usize
                };
                let lo = raw.dims[shape.leg_vertex(i + 1, j)] as usize;
                leg.push(get(&format!("c_{}_{}", i + 1, j), up, lo)?);
                leg_hat.push(get(&format!("chat_{}_{}", i + 1, j), lo, up)?);
            }
            c.push(leg);
            chat.push(leg_hat);
        }
        CotangentSquidPoint::new(shape, raw.dims, b0, b1, bhat0, bhat1, c, chat)
            .map_err(D::Error::custom)
    }
}
