//! Numerical construction of solutions to the additive and multiplicative
//! problems by residual minimization over products of conjugacy orbits, plus
//! rank-based certification of the solution-space dimension.

use nalgebra::linalg::SVD;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnum::{
    numerical_rank, random_cmat, rank_from_singular, singular_values, CMat, CMatJson,
};
use crate::ds::{
    build_alpha_zeta, normalize_classes, residue_condition, ConjugacyClassSpec, DSInstance,
    DsError, Mode,
};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Ds(#[from] DsError),
    #[error("expected a {expected} instance, got {got}")]
    InvalidMode { expected: Mode, got: Mode },
    #[error("residue condition violated: constraint value {value}")]
    ResidueConditionViolated { value: String },
    #[error("result has not converged")]
    NotConverged,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Options for the multi-start orbit descent.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub starts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    pub step0: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { starts: 16, max_iter: 5000, tol: 1e-16, seed: 0, step0: 0.1 }
    }
}

/// A point on a product of conjugacy orbits: per class a conjugator gᵢ and
/// the realized matrix Aᵢ = gᵢ Λᵢ gᵢ⁻¹, so each Aᵢ carries the class
/// spectrum exactly by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    pub lambda: Vec<CMat>,
    pub g: Vec<CMat>,
    pub a: Vec<CMat>,
}

impl OrbitPoint {
    /// Realize Aᵢ = gᵢ Λᵢ gᵢ⁻¹; fails if some gᵢ is singular.
    pub fn from_conjugators(lambda: Vec<CMat>, g: Vec<CMat>) -> Result<Self, SolverError> {
        let a = realize(&lambda, &g)
            .ok_or_else(|| SolverError::ShapeMismatch("singular conjugator".into()))?;
        Ok(OrbitPoint { lambda, g, a })
    }

    pub fn k(&self) -> usize {
        self.lambda.len()
    }

    pub fn n(&self) -> usize {
        self.lambda.first().map_or(0, CMat::nrows)
    }
}

#[derive(Serialize, Deserialize)]
struct OrbitPointJson {
    lambda: Vec<CMatJson>,
    g: Vec<CMatJson>,
    a: Vec<CMatJson>,
}

impl Serialize for OrbitPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let enc = |v: &[CMat]| v.iter().map(CMatJson::from_mat).collect();
        OrbitPointJson { lambda: enc(&self.lambda), g: enc(&self.g), a: enc(&self.a) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrbitPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = OrbitPointJson::deserialize(d)?;
        if raw.lambda.is_empty()
            || raw.lambda.len() != raw.g.len()
            || raw.lambda.len() != raw.a.len()
        {
            return Err(D::Error::custom("lambda, g, a must be equally many matrices"));
        }
        let n = raw.lambda[0].re.len();
        let dec = |v: &[CMatJson]| -> Result<Vec<CMat>, D::Error> {
            v.iter().map(|j| j.to_mat(n, n).map_err(D::Error::custom)).collect()
        };
        Ok(OrbitPoint { lambda: dec(&raw.lambda)?, g: dec(&raw.g)?, a: dec(&raw.a)? })
    }
}

/// Outcome of one start of the descent (trajectory kept in memory only).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartSummary {
    pub start_index: usize,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    #[serde(skip)]
    pub trajectory: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub point: OrbitPoint,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub tangent_dim: Option<usize>,
    pub constraint_rank: Option<usize>,
    pub start_index: usize,
    pub starts: Vec<StartSummary>,
}

/// Matrix exponential by scaling-and-squaring with a Taylor tail.
pub fn matrix_exp(m: &CMat) -> CMat {
    let n = m.nrows();
    let norm = m.norm();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m / Complex64::new(2f64.powi(s), 0.0);
    let mut term = CMat::identity(n, n);
    let mut sum = CMat::identity(n, n);
    for j in 1..=40 {
        term = &term * &scaled / Complex64::new(j as f64, 0.0);
        sum += &term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

fn realize(lambdas: &[CMat], g: &[CMat]) -> Option<Vec<CMat>> {
    lambdas
        .iter()
        .zip(g)
        .map(|(l, gi)| {
            let inv = gi.clone().try_inverse()?;
            Some(gi * l * inv)
        })
        .collect()
}

/// Constraint residual: ‖Σᵢ Aᵢ‖²_F (additive) or ‖A₁⋯A_k − I‖²_F.
pub fn objective(a: &[CMat], mode: Mode) -> f64 {
    let n = a[0].nrows();
    match mode {
        Mode::Multiplicative => {
            let mut p = CMat::identity(n, n);
            for ai in a {
                p *= ai;
            }
            (p - CMat::identity(n, n)).norm_squared()
        }
        _ => {
            let mut s = CMat::zeros(n, n);
            for ai in a {
                s += ai;
            }
            s.norm_squared()
        }
    }
}

/// Per-class matrices entering the gradient: S* for the additive problem,
/// Mᵢ = Rᵢ(P−I)*Lᵢ for the multiplicative one (Lᵢ, Rᵢ the partial products).
fn gradient_cofactors(a: &[CMat], mode: Mode) -> Vec<CMat> {
    let k = a.len();
    let n = a[0].nrows();
    match mode {
        Mode::Multiplicative => {
            let mut left = vec![CMat::identity(n, n)];
            for ai in a.iter().take(k - 1) {
                let next = left.last().unwrap() * ai;
                left.push(next);
            }
            let mut right = vec![CMat::identity(n, n); k];
            for i in (0..k - 1).rev() {
                right[i] = &a[i + 1] * &right[i + 1];
            }
            let e_adj = (left.last().unwrap() * &a[k - 1] - CMat::identity(n, n)).adjoint();
            (0..k).map(|i| &right[i] * &e_adj * &left[i]).collect()
        }
        _ => {
            let mut s = CMat::zeros(n, n);
            for ai in a {
                s += ai;
            }
            vec![s.adjoint(); k]
        }
    }
}

/// Steepest-descent directions ξᵢ on the orbit parametrization together with
/// G = Σᵢ‖ξᵢ‖²_F; the derivative of the objective along (ξᵢ) is −2G.
pub fn descent_directions(a: &[CMat], mode: Mode) -> (Vec<CMat>, f64) {
    let cof = gradient_cofactors(a, mode);
    let dirs: Vec<CMat> = a
        .iter()
        .zip(&cof)
        .map(|(ai, m)| {
            // ξ = [Aᵢ*, Mᵢ*] (descent; the commutator with the adjoint).
            let ah = ai.adjoint();
            let mh = m.adjoint();
            &ah * &mh - &mh * &ah
        })
        .collect();
    let g = dirs.iter().map(CMat::norm_squared).sum();
    (dirs, g)
}

/// Derivative of the objective at the orbit point `a` along the orbit
/// direction (ξᵢ), i.e. d/dt at 0 under Aᵢ ← e^{tξᵢ} Aᵢ e^{−tξᵢ}.
pub fn directional_derivative(a: &[CMat], xi: &[CMat], mode: Mode) -> f64 {
    let cof = gradient_cofactors(a, mode);
    let mut acc = 0.0;
    for ((ai, m), x) in a.iter().zip(&cof).zip(xi) {
        // 2 Re tr(ξ [Aᵢ, Mᵢ]) with Mᵢ the cofactor (adjoint already folded in).
        let comm = ai * m - m * ai;
        acc += 2.0 * (x * comm).trace().re;
    }
    acc
}

fn condition_number(m: &CMat) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), _) => f64::INFINITY,
        _ => 1.0,
    }
}

fn polar_unitary(m: &CMat) -> CMat {
    let svd = m.clone().svd(true, true);
    svd.u.expect("requested") * svd.v_t.expect("requested")
}

struct StartOutcome {
    g: Vec<CMat>,
    a: Vec<CMat>,
    summary: StartSummary,
}

fn run_start(
    lambdas: &[CMat],
    mode: Mode,
    opts: &SolverOptions,
    start_index: usize,
    g0: Vec<CMat>,
) -> StartOutcome {
    let mut g = g0;
    let mut a = realize(lambdas, &g).expect("start conjugators are invertible");
    let mut f = objective(&a, mode);
    let mut trajectory = vec![f];
    let mut eta = opts.step0;
    let mut iterations = 0;

    for it in 1..=opts.max_iter {
        if f <= opts.tol {
            break;
        }
        let (dirs, grad2) = descent_directions(&a, mode);
        if grad2.sqrt() <= 1e-14 * (1.0 + f) {
            break; // first-order stall (critical point that is not a solution)
        }
        eta = (eta * 2.0).min(1e3);
        let mut accepted = false;
        while eta >= 1e-18 {
            let cand_g: Vec<CMat> = g
                .iter()
                .zip(&dirs)
                .map(|(gi, d)| matrix_exp(&(d * Complex64::new(eta, 0.0))) * gi)
                .collect();
            if let Some(cand_a) = realize(lambdas, &cand_g) {
                let cand_f = objective(&cand_a, mode);
                if cand_f <= f - 1e-4 * eta * 2.0 * grad2 {
                    debug_assert!(cand_f <= f, "Armijo step increased the objective");
                    g = cand_g;
                    a = cand_a;
                    f = cand_f;
                    accepted = true;
                    break;
                }
            }
            eta /= 2.0;
        }
        if !accepted {
            break; // line search exhausted
        }
        iterations = it;
        trajectory.push(f);

        // Conditioning guard: replace badly conditioned conjugators by their
        // unitary polar factor (same orbit, fresh parametrization).
        if g.iter().any(|gi| condition_number(gi) > 1e8) {
            for gi in &mut g {
                *gi = polar_unitary(gi);
            }
            a = realize(lambdas, &g).expect("unitary conjugators");
            f = objective(&a, mode);
        }
    }

    let converged = f <= opts.tol;
    StartOutcome {
        g,
        a,
        summary: StartSummary { start_index, iterations, residual: f, converged, trajectory },
    }
}

fn diag_of(class: &ConjugacyClassSpec) -> CMat {
    let mut entries = Vec::new();
    for ev in &class.eigenvalues {
        for _ in 0..ev.mult {
            entries.push(ev.value());
        }
    }
    CMat::from_diagonal(&nalgebra::DVector::from_vec(entries))
}

fn diagonal_entries(m: &CMat) -> Option<Vec<Complex64>> {
    let n = m.nrows();
    for r in 0..n {
        for c in 0..n {
            if r != c && m[(r, c)] != Complex64::new(0.0, 0.0) {
                return None;
            }
        }
    }
    Some((0..n).map(|i| m[(i, i)]).collect())
}

/// Start 0: when every Λᵢ is diagonal, permute each spectrum slotwise so the
/// running sum (or product) stays as close to 0 (or 1) as possible; cancels
/// paired instances exactly. Falls back to identities otherwise.
fn aligned_start(lambdas: &[CMat], mode: Mode) -> Vec<CMat> {
    let n = lambdas[0].nrows();
    let diags: Option<Vec<Vec<Complex64>>> = lambdas.iter().map(diagonal_entries).collect();
    let Some(diags) = diags else {
        return lambdas.iter().map(|_| CMat::identity(n, n)).collect();
    };
    let mult = matches!(mode, Mode::Multiplicative);
    let mut running =
        vec![if mult { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }; n];
    let mut gs = Vec::with_capacity(lambdas.len());
    for evs in &diags {
        let mut used = vec![false; n];
        let mut p = CMat::zeros(n, n);
        for (s, r) in running.iter_mut().enumerate() {
            let score = |j: usize| {
                if mult {
                    (*r * evs[j] - Complex64::new(1.0, 0.0)).norm()
                } else {
                    (*r + evs[j]).norm()
                }
            };
            let best = (0..n)
                .filter(|&j| !used[j])
                .min_by(|&x, &y| score(x).total_cmp(&score(y)))
                .expect("n slots, n eigenvalues");
            used[best] = true;
            p[(s, best)] = Complex64::new(1.0, 0.0);
            *r = if mult { *r * evs[best] } else { *r + evs[best] };
        }
        gs.push(p);
    }
    gs
}

fn start_rng(seed: u64, start_index: usize) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(start_index as u64).to_le_bytes());
    ChaCha20Rng::from_seed(key)
}

/// Multi-start orbit descent over arbitrary class representatives Λᵢ.
/// Starts are independent (seeded by (seed, index)); the best residual wins,
/// ties broken by the lowest start index.
pub fn solve_orbit_problem(
    lambdas: &[CMat],
    mode: Mode,
    opts: &SolverOptions,
) -> Result<SolverResult, SolverError> {
    if matches!(mode, Mode::Connection) {
        return Err(SolverError::InvalidMode { expected: Mode::Additive, got: mode });
    }
    if lambdas.is_empty() {
        return Err(SolverError::ShapeMismatch("no classes".into()));
    }
    let n = lambdas[0].nrows();
    for l in lambdas {
        if l.nrows() != n || l.ncols() != n {
            return Err(SolverError::ShapeMismatch(format!(
                "class representative is {}×{}, expected {n}×{n}",
                l.nrows(),
                l.ncols()
            )));
        }
    }

    let n_starts = opts.starts.max(1);
    let mut best: Option<StartOutcome> = None;
    let mut summaries = Vec::with_capacity(n_starts);
    for idx in 0..n_starts {
        let g0 = if idx == 0 {
            aligned_start(lambdas, mode)
        } else {
            let mut rng = start_rng(opts.seed, idx);
            lambdas.iter().map(|_| random_cmat(&mut rng, n, n).qr().q()).collect()
        };
        let outcome = run_start(lambdas, mode, opts, idx, g0);
        summaries.push(outcome.summary.clone());
        let better = match &best {
            None => true,
            Some(b) => outcome.summary.residual < b.summary.residual,
        };
        if better {
            best = Some(outcome);
        }
    }
    let best = best.expect("at least one start");
    Ok(SolverResult {
        residual: best.summary.residual,
        iterations: best.summary.iterations,
        converged: best.summary.converged,
        tangent_dim: None,
        constraint_rank: None,
        start_index: best.summary.start_index,
        point: OrbitPoint { lambda: lambdas.to_vec(), g: best.g, a: best.a },
        starts: summaries,
    })
}

fn solve_checked(
    inst: &DSInstance,
    expected: Mode,
    opts: &SolverOptions,
) -> Result<SolverResult, SolverError> {
    if inst.mode != expected {
        return Err(SolverError::InvalidMode { expected, got: inst.mode });
    }
    let (norm, _) = normalize_classes(inst)?;
    let az = build_alpha_zeta(&norm)?;
    let rc = residue_condition(expected, &az);
    if !rc.met {
        return Err(SolverError::ResidueConditionViolated {
            value: format!("{}{:+}i", rc.value.re, rc.value.im),
        });
    }
    let lambdas: Vec<CMat> = norm.classes.iter().map(diag_of).collect();
    solve_orbit_problem(&lambdas, expected, opts)
}

/// Minimize ‖A₁ + ⋯ + A_k‖²_F over the product of orbits.
pub fn solve_additive(
    inst: &DSInstance,
    opts: &SolverOptions,
) -> Result<SolverResult, SolverError> {
    solve_checked(inst, Mode::Additive, opts)
}

/// Minimize ‖A₁⋯A_k − I‖²_F over the product of orbits.
pub fn solve_multiplicative(
    inst: &DSInstance,
    opts: &SolverOptions,
) -> Result<SolverResult, SolverError> {
    solve_checked(inst, Mode::Multiplicative, opts)
}

fn vec_index(r: usize, c: usize, n: usize) -> usize {
    r * n + c
}

/// The map ξ ↦ [ξ, A] on gl(n) as an n²×n² matrix (row-major vectorization).
pub fn commutator_map(a: &CMat) -> CMat {
    let n = a.nrows();
    let mut m = CMat::zeros(n * n, n * n);
    for r in 0..n {
        for c in 0..n {
            let col = vec_index(r, c, n);
            // [E_{rc}, A] = E_{rc}A − AE_{rc}.
            for y in 0..n {
                m[(vec_index(r, y, n), col)] += a[(c, y)];
            }
            for x in 0..n {
                m[(vec_index(x, c, n), col)] -= a[(x, r)];
            }
        }
    }
    m
}

/// Orthonormal basis (as vectorized columns) of the orbit tangent space
/// {[ξ, A]} with its dimension.
fn orbit_tangent_basis(a: &CMat) -> (CMat, usize) {
    let n2 = a.nrows() * a.nrows();
    let svd = SVD::new(commutator_map(a), true, false);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let r = rank_from_singular(&sv, n2, n2);
    let u = svd.u.expect("requested");
    (u.columns(0, r).into_owned(), r)
}

/// Stacked constraint differential J: ⊕ᵢ orbit tangents → gl(n); additive
/// columns are the tangent basis vectors themselves, multiplicative ones pass
/// through the product rule T ↦ Lᵢ T Rᵢ. Also returns the orbit dimensions.
pub fn constraint_matrix(a: &[CMat], mode: Mode) -> (CMat, Vec<usize>) {
    let k = a.len();
    let n = a[0].nrows();
    let bases: Vec<(CMat, usize)> = a.iter().map(orbit_tangent_basis).collect();
    let total: usize = bases.iter().map(|(_, r)| r).sum();
    let mut j = CMat::zeros(n * n, total);
    let mut col = 0;

    let (mut left, mut right) = (Vec::new(), Vec::new());
    if matches!(mode, Mode::Multiplicative) {
        left = vec![CMat::identity(n, n)];
        for ai in a.iter().take(k - 1) {
            let next = left.last().unwrap() * ai;
            left.push(next);
        }
        right = vec![CMat::identity(n, n); k];
        for i in (0..k - 1).rev() {
            right[i] = &a[i + 1] * &right[i + 1];
        }
    }

    for (i, (basis, r)) in bases.iter().enumerate() {
        for b in 0..*r {
            let v = basis.column(b);
            if matches!(mode, Mode::Multiplicative) {
                let t = CMat::from_fn(n, n, |x, y| v[vec_index(x, y, n)]);
                let moved = &left[i] * t * &right[i];
                for x in 0..n {
                    for y in 0..n {
                        j[(vec_index(x, y, n), col)] = moved[(x, y)];
                    }
                }
            } else {
                for (row, val) in v.iter().enumerate() {
                    j[(row, col)] = *val;
                }
            }
            col += 1;
        }
    }
    (j, bases.into_iter().map(|(_, r)| r).collect())
}

/// Dimension of the solution space at a converged point: Σᵢ dim(orbit
/// tangent) − rank(J), together with rank(J).
pub fn tangent_dimension(
    result: &SolverResult,
    inst: &DSInstance,
) -> Result<(usize, usize), SolverError> {
    if !result.converged {
        return Err(SolverError::NotConverged);
    }
    if matches!(inst.mode, Mode::Connection) {
        return Err(SolverError::InvalidMode { expected: Mode::Additive, got: inst.mode });
    }
    let (j, orbit_dims) = constraint_matrix(&result.point.a, inst.mode);
    let rank = numerical_rank(&j);
    Ok((orbit_dims.iter().sum::<usize>() - rank, rank))
}

/// True iff every Aᵢ's spectrum matches its class within `tol` (greedy
/// nearest-unused matching) and the constraint residual is ≤ `tol`.
pub fn certify(result: &SolverResult, inst: &DSInstance, tol: f64) -> bool {
    let Ok((norm, _)) = normalize_classes(inst) else {
        return false;
    };
    if norm.classes.len() != result.point.k() {
        return false;
    }
    for (class, ai) in norm.classes.iter().zip(&result.point.a) {
        let mut targets = Vec::new();
        for ev in &class.eigenvalues {
            for _ in 0..ev.mult {
                targets.push(ev.value());
            }
        }
        if targets.len() != ai.nrows() {
            return false;
        }
        let Some(computed) = ai.clone().schur().eigenvalues() else {
            return false;
        };
        let mut used = vec![false; targets.len()];
        for ev in computed.iter() {
            let best = (0..targets.len())
                .filter(|&j| !used[j])
                .min_by(|&x, &y| (ev - targets[x]).norm().total_cmp(&(ev - targets[y]).norm()));
            match best {
                Some(j) if (ev - targets[j]).norm() <= tol => used[j] = true,
                _ => return false,
            }
        }
    }
    objective(&result.point.a, inst.mode) <= tol
}
