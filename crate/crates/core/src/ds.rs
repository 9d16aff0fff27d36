//! Frontend for Deligne–Simpson style instances: semisimple conjugacy-class
//! data is translated into star-quiver data `(w, α, ζ)`, the sufficiency
//! criteria and expected dimensions are evaluated, and parabolic weights θ
//! are translated into the moment-map parameter λ over squid vertices.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{fmt_rat, parse_rat, GaussRat, Rat};
use crate::quiver::{self, DimVec, QuiverError, StarShape};

#[derive(Debug, Error)]
pub enum DsError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("an instance needs at least one conjugacy class")]
    EmptyInstance,
    #[error("class {class} has no eigenvalues")]
    EmptyClass { class: usize },
    #[error("class {class} has an eigenvalue with multiplicity < 1")]
    InvalidMultiplicity { class: usize },
    #[error("class {class} has a non-finite eigenvalue component")]
    NonFiniteValue { class: usize },
    #[error("class {class} repeats an eigenvalue")]
    DuplicateEigenvalue { class: usize },
    #[error("class {class} has total multiplicity {got}, expected {expected}")]
    InconsistentSize { class: usize, expected: i64, got: i64 },
    #[error("class {class} contains the eigenvalue 0, not allowed in multiplicative mode")]
    ZeroEigenvalue { class: usize },
    #[error("instance is not normalized ({0}); call normalize_classes first")]
    NotNormalized(String),
    #[error("invalid zeta override: {0}")]
    BadOverride(String),
    #[error("leg {leg}: flag dimensions must decrease weakly from α₀ to 0 ({detail})")]
    NonMonotoneFlag { leg: usize, detail: String },
    #[error("rank α₀ must be positive")]
    ZeroRank,
    #[error("parabolic weights out of order: {0}")]
    WeightsOutOfOrder(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Which product/sum problem the classes pose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Additive,
    Multiplicative,
    Connection,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Additive => write!(f, "additive"),
            Mode::Multiplicative => write!(f, "multiplicative"),
            Mode::Connection => write!(f, "connection"),
        }
    }
}

/// A scalar supplied either exactly (JSON string `"p/q"` or integer) or as a
/// float. Exact inputs flow through exact arithmetic wherever possible.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactOrFloat {
    Exact(Rat),
    Float(f64),
}

impl ExactOrFloat {
    pub fn as_f64(&self) -> f64 {
        match self {
            ExactOrFloat::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            ExactOrFloat::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            ExactOrFloat::Exact(r) => Some(r),
            ExactOrFloat::Float(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            ExactOrFloat::Exact(_) => true,
            ExactOrFloat::Float(x) => x.is_finite(),
        }
    }

    /// Exact rational value: the stored rational, or the exact binary
    /// expansion of the float.
    pub fn to_rat(&self) -> Option<Rat> {
        match self {
            ExactOrFloat::Exact(r) => Some(r.clone()),
            ExactOrFloat::Float(x) => Rat::from_float(*x),
        }
    }
}

impl Serialize for ExactOrFloat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExactOrFloat::Exact(r) => s.serialize_str(&fmt_rat(r)),
            ExactOrFloat::Float(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for ExactOrFloat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = ExactOrFloat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a number or a rational string like \"p/q\"")
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(ExactOrFloat::Exact(Rat::from_integer(v.into())))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(ExactOrFloat::Exact(Rat::from_integer(v.into())))
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(ExactOrFloat::Float(v))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_rat(v).map(ExactOrFloat::Exact).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// A complex number given componentwise, exactly or as floats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexInput {
    pub re: ExactOrFloat,
    pub im: ExactOrFloat,
}

impl ComplexInput {
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re.as_f64(), self.im.as_f64())
    }

    pub fn as_exact(&self) -> Option<GaussRat> {
        Some(GaussRat::new(self.re.exact()?.clone(), self.im.exact()?.clone()))
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// One eigenvalue of a semisimple class with its multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassEigenvalue {
    pub re: ExactOrFloat,
    pub im: ExactOrFloat,
    pub mult: i64,
}

impl ClassEigenvalue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.as_f64(), self.im.as_f64())
    }

    pub fn value_exact(&self) -> Option<GaussRat> {
        Some(GaussRat::new(self.re.exact()?.clone(), self.im.exact()?.clone()))
    }
}

/// A semisimple conjugacy class, encoded by its spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyClassSpec {
    pub eigenvalues: Vec<ClassEigenvalue>,
}

impl ConjugacyClassSpec {
    pub fn total_multiplicity(&self) -> i64 {
        self.eigenvalues.iter().map(|e| e.mult).sum()
    }
}

/// A Deligne–Simpson style instance: k semisimple classes plus the mode.
/// `points` optionally pins marked points for squid constructions;
/// `zeta_override` supplies explicit residue exponents in connection mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DSInstance {
    pub mode: Mode,
    pub classes: Vec<ConjugacyClassSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[ExactOrFloat; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_override: Option<Vec<Vec<ComplexInput>>>,
}

impl DSInstance {
    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    /// Common matrix size n = α₀ (validates the instance first).
    pub fn rank(&self) -> Result<i64, DsError> {
        self.validate()?;
        Ok(self.classes[0].total_multiplicity())
    }

    pub fn validate(&self) -> Result<(), DsError> {
        if self.classes.is_empty() {
            return Err(DsError::EmptyInstance);
        }
        let n = self.classes[0].total_multiplicity();
        for (ci, class) in self.classes.iter().enumerate() {
            if class.eigenvalues.is_empty() {
                return Err(DsError::EmptyClass { class: ci });
            }
            for ev in &class.eigenvalues {
                if ev.mult < 1 {
                    return Err(DsError::InvalidMultiplicity { class: ci });
                }
                if !ev.re.is_finite() || !ev.im.is_finite() {
                    return Err(DsError::NonFiniteValue { class: ci });
                }
                if self.mode == Mode::Multiplicative
                    && ev.re.as_f64() == 0.0
                    && ev.im.as_f64() == 0.0
                {
                    return Err(DsError::ZeroEigenvalue { class: ci });
                }
            }
            for (a, eva) in class.eigenvalues.iter().enumerate() {
                for evb in class.eigenvalues.iter().skip(a + 1) {
                    if eva.re.as_f64() == evb.re.as_f64() && eva.im.as_f64() == evb.im.as_f64() {
                        return Err(DsError::DuplicateEigenvalue { class: ci });
                    }
                }
            }
            let got = class.total_multiplicity();
            if got != n {
                return Err(DsError::InconsistentSize { class: ci, expected: n, got });
            }
        }
        if self.zeta_override.is_some() && self.mode != Mode::Connection {
            return Err(DsError::BadOverride(
                "zeta_override is only meaningful in connection mode".into(),
            ));
        }
        if let Some(points) = &self.points {
            if points.len() != self.classes.len() {
                return Err(DsError::ShapeMismatch(format!(
                    "{} marked points for {} classes",
                    points.len(),
                    self.classes.len()
                )));
            }
            for (pi, p) in points.iter().enumerate() {
                if p.iter().any(|c| !c.is_finite()) {
                    return Err(DsError::ShapeMismatch(format!(
                        "marked point {pi} has a non-finite coordinate"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Marked points as exact homogeneous coordinate pairs, if present.
    pub fn exact_points(&self) -> Result<Option<Vec<(GaussRat, GaussRat)>>, DsError> {
        let Some(points) = &self.points else { return Ok(None) };
        let mut out = Vec::with_capacity(points.len());
        for (pi, p) in points.iter().enumerate() {
            let coord = |c: &ExactOrFloat| {
                c.to_rat().ok_or_else(|| {
                    DsError::ShapeMismatch(format!("marked point {pi} has a non-finite coordinate"))
                })
            };
            out.push((
                GaussRat::new(coord(&p[0])?, coord(&p[1])?),
                GaussRat::new(coord(&p[2])?, coord(&p[3])?),
            ));
        }
        Ok(Some(out))
    }
}

/// Sort each class so multiplicities are weakly decreasing, ties broken by
/// lexicographic (re, im) of the eigenvalue. Returns the normalized instance
/// plus one note per class whose order changed.
pub fn normalize_classes(inst: &DSInstance) -> Result<(DSInstance, Vec<String>), DsError> {
    inst.validate()?;
    let mut out = inst.clone();
    let mut notes = Vec::new();
    for (ci, class) in out.classes.iter_mut().enumerate() {
        let evs = std::mem::take(&mut class.eigenvalues);
        let mut idx: Vec<usize> = (0..evs.len()).collect();
        idx.sort_by(|&a, &b| {
            evs[b]
                .mult
                .cmp(&evs[a].mult)
                .then(evs[a].re.as_f64().total_cmp(&evs[b].re.as_f64()))
                .then(evs[a].im.as_f64().total_cmp(&evs[b].im.as_f64()))
        });
        if idx.iter().enumerate().any(|(pos, &i)| pos != i) {
            notes.push(format!("class {ci}: eigenvalues reordered, permutation {idx:?}"));
        }
        class.eigenvalues = idx.into_iter().map(|i| evs[i].clone()).collect();
    }
    Ok((out, notes))
}

fn check_normalized(inst: &DSInstance) -> Result<(), DsError> {
    for (ci, class) in inst.classes.iter().enumerate() {
        for pair in class.eigenvalues.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let ordered = match b.mult.cmp(&a.mult) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => {
                    (a.re.as_f64(), a.im.as_f64()) <= (b.re.as_f64(), b.im.as_f64())
                }
            };
            if !ordered {
                return Err(DsError::NotNormalized(format!(
                    "class {ci} eigenvalue order violates the multiplicity/lex rule"
                )));
            }
        }
    }
    Ok(())
}

/// The star-quiver data extracted from a normalized instance: leg shapes,
/// dimension vector, eigenvalue assignment ζ_{ij} (and its exact form when
/// every input component was exact), and multiplicities m_{ij}.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaZeta {
    pub shape: StarShape,
    pub alpha: DimVec,
    pub mult: Vec<Vec<i64>>,
    pub zeta: Vec<Vec<Complex64>>,
    pub zeta_exact: Option<Vec<Vec<GaussRat>>>,
}

impl AlphaZeta {
    pub fn n(&self) -> i64 {
        self.alpha[0]
    }
}

/// Build `(w, α, ζ)` from a normalized instance: wᵢ = number of distinct
/// eigenvalues of class i, α₀ = n, α_{ij} = n − (m_{i1} + … + m_{ij}),
/// ζ_{ij} = j-th eigenvalue in the normalized order.
pub fn build_alpha_zeta(inst: &DSInstance) -> Result<AlphaZeta, DsError> {
    inst.validate()?;
    check_normalized(inst)?;
    let n = inst.classes[0].total_multiplicity();
    let shape = StarShape::new(inst.classes.iter().map(|c| c.eigenvalues.len()).collect())?;
    let mut alpha = vec![0i64; shape.n_vertices()];
    alpha[0] = n;
    let mut mult = Vec::with_capacity(inst.classes.len());
    let mut zeta = Vec::with_capacity(inst.classes.len());
    let mut zeta_exact = Some(Vec::with_capacity(inst.classes.len()));
    for (ci, class) in inst.classes.iter().enumerate() {
        let mut running = n;
        let mut leg_mult = Vec::with_capacity(class.eigenvalues.len());
        let mut leg_zeta = Vec::with_capacity(class.eigenvalues.len());
        let mut leg_exact = Some(Vec::with_capacity(class.eigenvalues.len()));
        for (j, ev) in class.eigenvalues.iter().enumerate() {
            running -= ev.mult;
            if j + 1 < class.eigenvalues.len() {
                alpha[shape.leg_vertex(ci + 1, j + 1)] = running;
            }
            leg_mult.push(ev.mult);
            leg_zeta.push(ev.value());
            match (ev.value_exact(), &mut leg_exact) {
                (Some(z), Some(acc)) => acc.push(z),
                _ => leg_exact = None,
            }
        }
        mult.push(leg_mult);
        zeta.push(leg_zeta);
        match (leg_exact, &mut zeta_exact) {
            (Some(leg), Some(acc)) => acc.push(leg),
            _ => zeta_exact = None,
        }
    }
    let mut az = AlphaZeta { shape, alpha, mult, zeta, zeta_exact };
    if let Some(ov) = &inst.zeta_override {
        apply_override(&mut az, ov)?;
    }
    Ok(az)
}

fn apply_override(az: &mut AlphaZeta, ov: &[Vec<ComplexInput>]) -> Result<(), DsError> {
    if ov.len() != az.shape.n_legs() {
        return Err(DsError::BadOverride(format!(
            "{} legs supplied, instance has {}",
            ov.len(),
            az.shape.n_legs()
        )));
    }
    for (i, leg) in ov.iter().enumerate() {
        if leg.len() != az.shape.w[i] {
            return Err(DsError::BadOverride(format!(
                "leg {} has {} entries, expected w = {}",
                i + 1,
                leg.len(),
                az.shape.w[i]
            )));
        }
        if leg.iter().any(|c| !c.is_finite()) {
            return Err(DsError::BadOverride(format!("leg {} has a non-finite entry", i + 1)));
        }
    }
    az.zeta = ov.iter().map(|leg| leg.iter().map(|c| c.as_complex()).collect()).collect();
    az.zeta_exact = ov
        .iter()
        .map(|leg| leg.iter().map(|c| c.as_exact()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>();
    Ok(())
}

/// A complex value reported componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

/// Outcome of the mode-specific residue test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueCondition {
    pub met: bool,
    pub value: ComplexValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nearest_integer: Option<i64>,
}

fn gauss_pow(z: &GaussRat, m: i64) -> GaussRat {
    let mut acc = GaussRat::one();
    for _ in 0..m {
        acc = &acc * z;
    }
    acc
}

/// Mode-specific residue test on the weighted spectrum:
/// additive — Σ m_{ij}ζ_{ij} = 0; multiplicative — Π ζ_{ij}^{m_{ij}} = 1;
/// connection — Σ m_{ij}ζ_{ij} integral (that integer is −deg E).
/// Exact inputs are decided exactly; floats use tolerances (1e−12·n additive,
/// 1e−10 otherwise).
pub fn residue_condition(mode: Mode, az: &AlphaZeta) -> ResidueCondition {
    match mode {
        Mode::Additive => {
            let (value, met) = match &az.zeta_exact {
                Some(zs) => {
                    let sum = weighted_sum_exact(&az.mult, zs);
                    let (re, im) = sum.to_f64_pair();
                    (Complex64::new(re, im), sum.is_zero())
                }
                None => {
                    let sum = weighted_sum(&az.mult, &az.zeta);
                    (sum, sum.norm() <= 1e-12 * az.n() as f64)
                }
            };
            ResidueCondition { met, value: value.into(), nearest_integer: None }
        }
        Mode::Multiplicative => {
            let (value, met) = match &az.zeta_exact {
                Some(zs) => {
                    let mut prod = GaussRat::one();
                    for (ms, leg) in az.mult.iter().zip(zs) {
                        for (&m, z) in ms.iter().zip(leg) {
                            prod = &prod * &gauss_pow(z, m);
                        }
                    }
                    let (re, im) = prod.to_f64_pair();
                    (Complex64::new(re, im), prod == GaussRat::one())
                }
                None => {
                    let mut prod = Complex64::new(1.0, 0.0);
                    for (ms, leg) in az.mult.iter().zip(&az.zeta) {
                        for (&m, z) in ms.iter().zip(leg) {
                            prod *= z.powi(m as i32);
                        }
                    }
                    (prod, (prod - Complex64::new(1.0, 0.0)).norm() <= 1e-10)
                }
            };
            ResidueCondition { met, value: value.into(), nearest_integer: None }
        }
        Mode::Connection => match &az.zeta_exact {
            Some(zs) => {
                let sum = weighted_sum_exact(&az.mult, zs);
                let (re, im) = sum.to_f64_pair();
                let met = sum.im.is_zero() && sum.re.is_integer();
                let nearest = if met {
                    sum.re.to_integer().to_i64()
                } else {
                    Some(re.round() as i64)
                };
                ResidueCondition {
                    met,
                    value: Complex64::new(re, im).into(),
                    nearest_integer: nearest,
                }
            }
            None => {
                let sum = weighted_sum(&az.mult, &az.zeta);
                let nearest = sum.re.round();
                let met = (sum.re - nearest).hypot(sum.im) <= 1e-10;
                ResidueCondition {
                    met,
                    value: sum.into(),
                    nearest_integer: Some(nearest as i64),
                }
            }
        },
    }
}

fn weighted_sum(mult: &[Vec<i64>], zeta: &[Vec<Complex64>]) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for (ms, leg) in mult.iter().zip(zeta) {
        for (&m, z) in ms.iter().zip(leg) {
            sum += z * m as f64;
        }
    }
    sum
}

fn weighted_sum_exact(mult: &[Vec<i64>], zeta: &[Vec<GaussRat>]) -> GaussRat {
    let mut sum = GaussRat::zero();
    for (ms, leg) in mult.iter().zip(zeta) {
        for (&m, z) in ms.iter().zip(leg) {
            sum = &sum + &(z * &GaussRat::from_ints(m, 0));
        }
    }
    sum
}

/// Dimension of the product of partial flag varieties cut out by α:
/// Σᵢ (α₀² − Σⱼ m_{ij}²)/2 with m_{ij} = α_{i,j−1} − α_{ij}, α_{i0} = α₀,
/// α_{i,wᵢ} = 0.
pub fn dim_flag_product(shape: &StarShape, alpha: &[i64]) -> Result<i64, DsError> {
    if alpha.len() != shape.n_vertices() {
        return Err(QuiverError::VertexMismatch {
            expected: shape.n_vertices(),
            got: alpha.len(),
        }
        .into());
    }
    let n = alpha[0];
    if n < 0 {
        return Err(DsError::NonMonotoneFlag { leg: 0, detail: format!("α₀ = {n}") });
    }
    let mut total = 0;
    for (i, &wi) in shape.w.iter().enumerate() {
        let mut prev = n;
        let mut sum_sq = 0;
        for j in 1..=wi {
            let cur = if j < wi { alpha[shape.leg_vertex(i + 1, j)] } else { 0 };
            let m = prev - cur;
            if m < 0 {
                return Err(DsError::NonMonotoneFlag {
                    leg: i + 1,
                    detail: format!("entry {j} rises from {prev} to {cur}"),
                });
            }
            sum_sq += m * m;
            prev = cur;
        }
        total += (n * n - sum_sq) / 2;
    }
    Ok(total)
}

/// Full analysis of an instance: quiver data, defect, fundamental-region and
/// residue tests, the sufficiency verdict, and expected dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub n: i64,
    pub w: Vec<usize>,
    pub alpha: DimVec,
    pub zeta: Vec<Vec<ComplexValue>>,
    pub delta: i64,
    pub in_fundamental_region: bool,
    pub residue_condition: ResidueCondition,
    pub sufficient: bool,
    pub expected_dim_solution_space: i64,
    pub expected_dim_conn_stack: i64,
    pub notes: Vec<String>,
}

/// Normalize, build `(w, α, ζ)`, and evaluate the sufficiency criterion:
/// `sufficient = in_fundamental_region ∧ δ(α) > 0 ∧ residue met`.
pub fn verdict(inst: &DSInstance) -> Result<Verdict, DsError> {
    let (norm, mut notes) = normalize_classes(inst)?;
    let az = build_alpha_zeta(&norm)?;
    let star = az.shape.build();
    let delta = az.shape.delta(&az.alpha)?;
    let fund = quiver::in_fundamental_region(&star, &az.alpha)?;
    if fund == (delta >= 0) {
        notes.push(
            "fundamental-region test agrees with the defect shortcut δ(α) ≥ 0 \
             (they coincide on normalized instances)"
                .into(),
        );
    } else {
        notes.push(format!(
            "warning: fundamental-region test ({fund}) disagrees with the defect shortcut \
             δ(α) ≥ 0 ({delta}); reporting the full test"
        ));
    }
    let residue = residue_condition(norm.mode, &az);
    let sufficient = fund && delta > 0 && residue.met;
    let dim_fl = dim_flag_product(&az.shape, &az.alpha)?;
    let p = quiver::tits_p(&star, &az.alpha)?;
    let n = az.n();
    notes.push(
        "eigenvalue ordering: multiplicities weakly decreasing within each class \
         (ties by (re, im)); α_{ij} = n − (m_{i1} + … + m_{ij})"
            .into(),
    );
    notes.push("the criterion is sufficient, not necessary; sufficient=false does not rule out solutions".into());
    if delta == 0 {
        notes.push(
            "δ(α) = 0 lies on the boundary: the criterion requires strictly positive defect, \
             so sufficient=false"
                .into(),
        );
    }
    Ok(Verdict {
        n,
        w: az.shape.w.clone(),
        alpha: az.alpha.clone(),
        zeta: az
            .zeta
            .iter()
            .map(|leg| leg.iter().map(|&z| z.into()).collect())
            .collect(),
        delta,
        in_fundamental_region: fund,
        residue_condition: residue,
        sufficient,
        expected_dim_solution_space: 2 * dim_fl - n * n + 1,
        expected_dim_conn_stack: 2 * p - 1,
        notes,
    })
}

/// Parabolic weights θ_{ij} (one vector of wᵢ weights per leg), the slope a,
/// and the translated moment-map parameter λ.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityData {
    pub theta: Vec<Vec<Rat>>,
    pub a: Rat,
    pub lambda: LambdaVector,
}

/// Moment-map parameter over squid vertices, stored structurally.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaVector {
    pub inf: Rat,
    pub zero: Rat,
    pub legs: Vec<Vec<Rat>>,
}

impl LambdaVector {
    /// Entries in the squid vertex order 0, (1,1)…(1,w₁−1), …, ∞.
    pub fn to_vec(&self) -> Vec<Rat> {
        let mut v = vec![self.zero.clone()];
        for leg in &self.legs {
            v.extend(leg.iter().cloned());
        }
        v.push(self.inf.clone());
        v
    }

    /// Pairing λ·α̂ against the squid dimension vector
    /// α̂ = (α_∞, α_∞ + α₀ at vertex 0, α_{ij} on the legs).
    pub fn pair_alpha_hat(
        &self,
        alpha_inf: i64,
        alpha0: i64,
        alpha_legs: &[Vec<i64>],
    ) -> Result<Rat, DsError> {
        if alpha_legs.len() != self.legs.len() {
            return Err(DsError::ShapeMismatch(format!(
                "{} legs in α, λ has {}",
                alpha_legs.len(),
                self.legs.len()
            )));
        }
        let mut acc = &self.inf * &ri(alpha_inf) + &self.zero * &ri(alpha_inf + alpha0);
        for (i, (lam, al)) in self.legs.iter().zip(alpha_legs).enumerate() {
            if lam.len() != al.len() {
                return Err(DsError::ShapeMismatch(format!(
                    "leg {}: {} dimension entries, λ has {}",
                    i + 1,
                    al.len(),
                    lam.len()
                )));
            }
            for (l, &a) in lam.iter().zip(al) {
                acc += l * &ri(a);
            }
        }
        Ok(acc)
    }
}

fn ri(x: i64) -> Rat {
    Rat::from_integer(x.into())
}

/// Weak ordering check 0 ≤ θ_{i1} ≤ … ≤ θ_{i,wᵢ} < 1 (set `strict` to demand
/// strict increase, the genericity convention for stability data).
pub fn validate_weights(theta: &[Vec<Rat>], strict: bool) -> Result<(), DsError> {
    for (i, leg) in theta.iter().enumerate() {
        for (j, t) in leg.iter().enumerate() {
            if t.is_negative() || *t >= Rat::one() {
                return Err(DsError::WeightsOutOfOrder(format!(
                    "leg {} weight {} = {} lies outside [0, 1)",
                    i + 1,
                    j + 1,
                    fmt_rat(t)
                )));
            }
        }
        for (j, pair) in leg.windows(2).enumerate() {
            let bad = if strict { pair[0] >= pair[1] } else { pair[0] > pair[1] };
            if bad {
                return Err(DsError::WeightsOutOfOrder(format!(
                    "leg {} weights {} and {} out of order",
                    i + 1,
                    j + 1,
                    j + 2
                )));
            }
        }
    }
    Ok(())
}

fn leg_multiplicities(
    theta: &[Vec<Rat>],
    alpha0: i64,
    alpha_legs: &[Vec<i64>],
) -> Result<Vec<Vec<i64>>, DsError> {
    if theta.len() != alpha_legs.len() {
        return Err(DsError::ShapeMismatch(format!(
            "{} weight legs for {} dimension legs",
            theta.len(),
            alpha_legs.len()
        )));
    }
    let mut mult = Vec::with_capacity(theta.len());
    for (i, (tl, al)) in theta.iter().zip(alpha_legs).enumerate() {
        if tl.len() != al.len() + 1 {
            return Err(DsError::ShapeMismatch(format!(
                "leg {}: {} weights for flag length {}",
                i + 1,
                tl.len(),
                al.len() + 1
            )));
        }
        let mut prev = alpha0;
        let mut ms = Vec::with_capacity(tl.len());
        for j in 1..=tl.len() {
            let cur = if j < tl.len() { al[j - 1] } else { 0 };
            let m = prev - cur;
            if m < 0 {
                return Err(DsError::NonMonotoneFlag {
                    leg: i + 1,
                    detail: format!("entry {j} rises from {prev} to {cur}"),
                });
            }
            ms.push(m);
            prev = cur;
        }
        mult.push(ms);
    }
    Ok(mult)
}

/// Parabolic degree d + Σ m_{ij}θ_{ij} with m_{ij} = α_{i,j−1} − α_{ij}
/// (α_{i0} = α₀, α_{i,wᵢ} = 0); exact rational arithmetic.
pub fn parabolic_degree(
    d: i64,
    theta: &[Vec<Rat>],
    alpha0: i64,
    alpha_legs: &[Vec<i64>],
) -> Result<Rat, DsError> {
    validate_weights(theta, false)?;
    let mult = leg_multiplicities(theta, alpha0, alpha_legs)?;
    let mut deg = ri(d);
    for (tl, ms) in theta.iter().zip(&mult) {
        for (t, &m) in tl.iter().zip(ms) {
            deg += t * &ri(m);
        }
    }
    Ok(deg)
}

/// Parabolic slope = parabolic degree / α₀.
pub fn parabolic_slope(
    d: i64,
    theta: &[Vec<Rat>],
    alpha0: i64,
    alpha_legs: &[Vec<i64>],
) -> Result<Rat, DsError> {
    if alpha0 <= 0 {
        return Err(DsError::ZeroRank);
    }
    Ok(parabolic_degree(d, theta, alpha0, alpha_legs)? / ri(alpha0))
}

/// Translate weights into the moment-map parameter:
/// λ_∞ = −a + 1 + Σ_l θ_{l1}, λ₀ = a − Σ_l θ_{l1},
/// λ_{ij} = θ_{ij} − θ_{i,j+1}.
pub fn theta_to_lambda(theta: &[Vec<Rat>], a: &Rat) -> Result<LambdaVector, DsError> {
    validate_weights(theta, false)?;
    let mut first_sum = Rat::zero();
    for leg in theta {
        first_sum += &leg[0];
    }
    let legs = theta
        .iter()
        .map(|leg| leg.windows(2).map(|p| &p[0] - &p[1]).collect())
        .collect();
    Ok(LambdaVector {
        inf: Rat::one() - a + &first_sum,
        zero: a - &first_sum,
        legs,
    })
}

/// Assemble stability data from a bundle degree, strictly increasing weights,
/// and the flag dimension vector: a is the parabolic slope and λ its
/// translation, so that λ·α̂ = 0 for α̂ = (α_∞, α_∞+α₀, α_{ij}) with
/// α_∞ = −d.
pub fn stability_data(
    d: i64,
    theta: Vec<Vec<Rat>>,
    alpha0: i64,
    alpha_legs: &[Vec<i64>],
) -> Result<StabilityData, DsError> {
    validate_weights(&theta, true)?;
    let a = parabolic_slope(d, &theta, alpha0, alpha_legs)?;
    let lambda = theta_to_lambda(&theta, &a)?;
    Ok(StabilityData { theta, a, lambda })
}
