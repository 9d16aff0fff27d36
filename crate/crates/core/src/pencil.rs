//! Kronecker pencils over the Gaussian rationals: exact preinjectivity
//! testing and recovery of the splitting type of the kernel bundle on the
//! projective line.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{interpolate, ExactMat, ExactPoly, GaussRat};

/// Column-subset enumeration cap: the number of w×w minors grows binomially.
pub const MINOR_BUDGET_W: usize = 8;

#[derive(Debug, Error)]
pub enum PencilError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("pencil has w = {w} rows; minor enumeration is capped at w ≤ {cap}")]
    BudgetExceeded { w: usize, cap: usize },
    #[error("pencil is not preinjective")]
    NotPreinjective,
    #[error("bad matrix entry: {0}")]
    BadEntry(String),
}

/// A matrix pencil λ₀Ψ₀ + λ₁Ψ₁ of maps V → W (matrices of shape w × v).
#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerPencil {
    psi0: ExactMat,
    psi1: ExactMat,
}

impl KroneckerPencil {
    pub fn new(psi0: ExactMat, psi1: ExactMat) -> Result<Self, PencilError> {
        if psi0.rows != psi1.rows || psi0.cols != psi1.cols {
            return Err(PencilError::ShapeMismatch(format!(
                "Ψ₀ is {}×{}, Ψ₁ is {}×{}",
                psi0.rows, psi0.cols, psi1.rows, psi1.cols
            )));
        }
        Ok(KroneckerPencil { psi0, psi1 })
    }

    /// dim V (columns).
    pub fn v(&self) -> usize {
        self.psi0.cols
    }

    /// dim W (rows).
    pub fn w(&self) -> usize {
        self.psi0.rows
    }

    pub fn psi0(&self) -> &ExactMat {
        &self.psi0
    }

    pub fn psi1(&self) -> &ExactMat {
        &self.psi1
    }

    /// Block-diagonal direct sum of pencils.
    pub fn direct_sum(&self, other: &KroneckerPencil) -> KroneckerPencil {
        KroneckerPencil {
            psi0: self.psi0.block_diag(&other.psi0),
            psi1: self.psi1.block_diag(&other.psi1),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PencilJson {
    psi0: Vec<Vec<String>>,
    psi1: Vec<Vec<String>>,
}

fn mat_to_strings(m: &ExactMat) -> Vec<Vec<String>> {
    (0..m.rows)
        .map(|r| (0..m.cols).map(|c| m[(r, c)].to_string()).collect())
        .collect()
}

fn mat_from_strings(rows: &[Vec<String>], what: &str) -> Result<ExactMat, PencilError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(PencilError::ShapeMismatch(format!("{what} has ragged rows")));
    }
    let mut m = ExactMat::zeros(nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        for (c, s) in row.iter().enumerate() {
            m[(r, c)] = s
                .parse::<GaussRat>()
                .map_err(|e| PencilError::BadEntry(format!("{what}[{r}][{c}]: {e}")))?;
        }
    }
    Ok(m)
}

impl Serialize for KroneckerPencil {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PencilJson { psi0: mat_to_strings(&self.psi0), psi1: mat_to_strings(&self.psi1) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KroneckerPencil {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PencilJson::deserialize(d)?;
        let psi0 = mat_from_strings(&raw.psi0, "psi0").map_err(D::Error::custom)?;
        let psi1 = mat_from_strings(&raw.psi1, "psi1").map_err(D::Error::custom)?;
        KroneckerPencil::new(psi0, psi1).map_err(D::Error::custom)
    }
}

/// The w×w minor over columns `cols` of Ψ₀ + tΨ₁, as an exact polynomial in
/// t, recovered by interpolation at t = 0, …, w.
fn minor_poly(p: &KroneckerPencil, cols: &[usize]) -> ExactPoly {
    let w = p.w();
    let nodes: Vec<(GaussRat, GaussRat)> = (0..=w as i64)
        .map(|t| {
            let tg = GaussRat::from_ints(t, 0);
            let slice = ExactMat::from_fn(w, w, |r, c| {
                &p.psi0[(r, cols[c])] + &(&tg * &p.psi1[(r, cols[c])])
            });
            (tg, slice.det())
        })
        .collect();
    interpolate(&nodes)
}

/// True iff λ₀Ψ₀ + λ₁Ψ₁ is surjective for every point (λ₀ : λ₁) of the
/// projective line, decided exactly: the point (0 : 1) is checked via
/// rank Ψ₁, the finite chart via the gcd of all w×w minors of Ψ₀ + tΨ₁.
pub fn is_preinjective(p: &KroneckerPencil) -> Result<bool, PencilError> {
    let (v, w) = (p.v(), p.w());
    if w == 0 {
        return Ok(true);
    }
    if v < w {
        return Ok(false);
    }
    if w > MINOR_BUDGET_W {
        return Err(PencilError::BudgetExceeded { w, cap: MINOR_BUDGET_W });
    }
    // Common zero at (0 : 1) iff every w×w minor of Ψ₁ vanishes.
    if p.psi1.rank() < w {
        return Ok(false);
    }
    let mut g = ExactPoly::zero();
    for cols in (0..v).combinations(w) {
        g = g.gcd(&minor_poly(p, &cols));
        if g.degree() == Some(0) {
            return Ok(true);
        }
    }
    Ok(g.degree() == Some(0))
}

/// Splitting degrees d₁ ≥ … ≥ d_r of the kernel bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingType {
    pub degrees: Vec<i64>,
}

/// Exact h⁰ of the n-th twist of the kernel bundle: the kernel dimension of
/// V ⊗ (deg ≤ n polynomials) → W ⊗ (deg ≤ n+1 polynomials),
/// v ⊗ zʲ ↦ Ψ₀(v) ⊗ zʲ⁺¹ − Ψ₁(v) ⊗ zʲ.
pub fn h0_twist(p: &KroneckerPencil, n: usize) -> usize {
    let (v, w) = (p.v(), p.w());
    let m = ExactMat::from_fn((n + 2) * w, (n + 1) * v, |row, col| {
        let (l, r) = (row / w, row % w);
        let (j, s) = (col / v, col % v);
        if l == j + 1 {
            p.psi0[(r, s)].clone()
        } else if l == j {
            -&p.psi1[(r, s)]
        } else {
            GaussRat::zero()
        }
    });
    m.nullity()
}

/// Recover the splitting type from the exact difference sequence
/// aₙ = h⁰(E(n)) − h⁰(E(n−1)) = #{i : dᵢ ≥ −n}, stopping once aₙ = v − w.
pub fn splitting_type(p: &KroneckerPencil) -> Result<SplittingType, PencilError> {
    if !is_preinjective(p)? {
        return Err(PencilError::NotPreinjective);
    }
    let r = p.v() - p.w();
    let mut degrees = Vec::with_capacity(r);
    let mut h_prev = 0usize;
    let mut a_prev = 0usize;
    for n in 0..=p.w() {
        let h = h0_twist(p, n);
        let a = h - h_prev;
        assert!(a >= a_prev, "h⁰ differences must be nondecreasing");
        degrees.extend(std::iter::repeat(-(n as i64)).take(a - a_prev));
        if a == r {
            let sum: i64 = degrees.iter().sum();
            assert_eq!(sum, -(p.w() as i64), "splitting degrees must sum to −w");
            assert!(degrees.iter().all(|&d| d <= 0));
            return Ok(SplittingType { degrees });
        }
        h_prev = h;
        a_prev = a;
    }
    unreachable!("all splitting degrees of a preinjective pencil lie in [−w, 0]");
}

/// Rank, degree, and global generation of the dual of the kernel bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleInvariants {
    pub rank: i64,
    pub degree: i64,
    pub dual_globally_generated: bool,
}

pub fn bundle_invariants(p: &KroneckerPencil) -> Result<BundleInvariants, PencilError> {
    let split = splitting_type(p)?;
    Ok(BundleInvariants {
        rank: p.v() as i64 - p.w() as i64,
        degree: -(p.w() as i64),
        dual_globally_generated: split.degrees.iter().all(|&d| d <= 0),
    })
}

/// The standard presentation of O(−d): v = d+1, w = d, Ψ₀ = [I | 0],
/// Ψ₁ = [0 | I].
pub fn shift_pencil(d: usize) -> KroneckerPencil {
    let psi0 = ExactMat::from_fn(d, d + 1, |r, c| {
        if r == c { GaussRat::one() } else { GaussRat::zero() }
    });
    let psi1 = ExactMat::from_fn(d, d + 1, |r, c| {
        if r + 1 == c { GaussRat::one() } else { GaussRat::zero() }
    });
    KroneckerPencil { psi0, psi1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ds;
    use crate::exact::parse_rat;
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn pencil_from_ints(psi0: &[Vec<(i64, i64)>], psi1: &[Vec<(i64, i64)>]) -> KroneckerPencil {
        KroneckerPencil::new(ExactMat::from_int_rows(psi0), ExactMat::from_int_rows(psi1))
            .unwrap()
    }

    #[test]
    fn preinjectivity_examples() {
        // Ψ₀ = (1 0), Ψ₁ = (0 1): minors are λ₀, λ₁ up to sign.
        let p = shift_pencil(1);
        assert!(is_preinjective(&p).unwrap());

        // v=w=1, Ψ₀=(1), Ψ₁=(0): fails at λ₀ = 0.
        let q = pencil_from_ints(&[vec![(1, 0)]], &[vec![(0, 0)]]);
        assert!(!is_preinjective(&q).unwrap());

        // w = 0: vacuously surjective.
        let trivial =
            KroneckerPencil::new(ExactMat::zeros(0, 3), ExactMat::zeros(0, 3)).unwrap();
        assert!(is_preinjective(&trivial).unwrap());

        // v < w can never be surjective.
        let tall = KroneckerPencil::new(ExactMat::zeros(2, 1), ExactMat::zeros(2, 1)).unwrap();
        assert!(!is_preinjective(&tall).unwrap());

        // Both 1×1 minors equal λ₀ − λ₁: a common zero at (1 : 1).
        let common = pencil_from_ints(&[vec![(1, 0), (1, 0)]], &[vec![(-1, 0), (-1, 0)]]);
        assert!(!is_preinjective(&common).unwrap());

        // Budget: w = 9 is rejected.
        let big = KroneckerPencil::new(ExactMat::zeros(9, 10), ExactMat::zeros(9, 10)).unwrap();
        assert!(matches!(
            is_preinjective(&big),
            Err(PencilError::BudgetExceeded { w: 9, cap: MINOR_BUDGET_W })
        ));

        // Shape mismatch is rejected at construction.
        assert!(matches!(
            KroneckerPencil::new(ExactMat::zeros(1, 2), ExactMat::zeros(2, 1)),
            Err(PencilError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn splitting_shift_pencil() {
        // O(−1) from the d=1 presentation; brute h⁰ oracle: 0 then 1.
        let p = shift_pencil(1);
        assert_eq!(h0_twist(&p, 0), 0);
        assert_eq!(h0_twist(&p, 1), 1);
        assert_eq!(splitting_type(&p).unwrap().degrees, vec![-1]);

        // O(−d) for every small d.
        for d in 0..=5 {
            let p = shift_pencil(d);
            assert_eq!(splitting_type(&p).unwrap().degrees, vec![-(d as i64)]);
        }

        // w = 0, v = r: the trivial bundle O^r.
        let trivial =
            KroneckerPencil::new(ExactMat::zeros(0, 3), ExactMat::zeros(0, 3)).unwrap();
        assert_eq!(splitting_type(&trivial).unwrap().degrees, vec![0, 0, 0]);
    }

    #[test]
    fn splitting_direct_sums() {
        let p = shift_pencil(1);
        assert_eq!(
            splitting_type(&p.direct_sum(&p)).unwrap().degrees,
            vec![-1, -1]
        );
        let mixed = shift_pencil(1).direct_sum(&shift_pencil(2));
        assert_eq!(splitting_type(&mixed).unwrap().degrees, vec![-1, -2]);
        // A non-preinjective summand poisons the sum.
        let bad = pencil_from_ints(&[vec![(1, 0)]], &[vec![(0, 0)]]);
        assert!(matches!(
            splitting_type(&p.direct_sum(&bad)),
            Err(PencilError::NotPreinjective)
        ));
    }

    #[test]
    fn splitting_generic_v3_w1() {
        // Generic (3,1) pencil: rank-2 kernel of degree −1 splits as {0, −1}.
        let p = pencil_from_ints(
            &[vec![(1, 0), (0, 0), (0, 0)]],
            &[vec![(0, 0), (1, 0), (1, 0)]],
        );
        assert!(is_preinjective(&p).unwrap());
        assert_eq!(splitting_type(&p).unwrap().degrees, vec![0, -1]);

        // A random exact instance with Gaussian-rational entries.
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let mut rand_mat = |rows: usize, cols: usize| {
            ExactMat::from_fn(rows, cols, |_, _| {
                GaussRat::from_ints(rng.gen_range(-5..=5), rng.gen_range(-5..=5))
            })
        };
        let q = KroneckerPencil::new(rand_mat(1, 3), rand_mat(1, 3)).unwrap();
        assert!(is_preinjective(&q).unwrap());
        assert_eq!(splitting_type(&q).unwrap().degrees, vec![0, -1]);
    }

    #[test]
    fn h0_matches_splitting_formula() {
        for p in [
            shift_pencil(2),
            shift_pencil(3),
            shift_pencil(1).direct_sum(&shift_pencil(3)),
        ] {
            let degrees = splitting_type(&p).unwrap().degrees;
            for n in 0..=4usize {
                let expected: i64 =
                    degrees.iter().map(|&d| (d + n as i64 + 1).max(0)).sum();
                assert_eq!(h0_twist(&p, n) as i64, expected);
            }
        }
    }

    #[test]
    fn bundle_invariants_examples() {
        let inv = bundle_invariants(&shift_pencil(1)).unwrap();
        assert_eq!(
            inv,
            BundleInvariants { rank: 1, degree: -1, dual_globally_generated: true }
        );

        let trivial =
            KroneckerPencil::new(ExactMat::zeros(0, 4), ExactMat::zeros(0, 4)).unwrap();
        let inv = bundle_invariants(&trivial).unwrap();
        assert_eq!(
            inv,
            BundleInvariants { rank: 4, degree: 0, dual_globally_generated: true }
        );

        let generic = pencil_from_ints(
            &[vec![(1, 0), (0, 0), (0, 0)]],
            &[vec![(0, 0), (1, 0), (1, 0)]],
        );
        let inv = bundle_invariants(&generic).unwrap();
        assert_eq!(inv.rank, 2);
        assert_eq!(inv.degree, -1);
        assert!(inv.dual_globally_generated);

        let bad = pencil_from_ints(&[vec![(1, 0)]], &[vec![(0, 0)]]);
        assert!(matches!(bundle_invariants(&bad), Err(PencilError::NotPreinjective)));
    }

    #[test]
    fn pencil_json_round_trip() {
        let p = pencil_from_ints(
            &[vec![(1, 0), (0, 1)], vec![(2, -3), (0, 0)]],
            &[vec![(0, 0), (1, 1)], vec![(5, 0), (-1, 2)]],
        );
        let text = serde_json::to_string(&p).unwrap();
        let back: KroneckerPencil = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        // Rational string entries parse.
        let from_text: KroneckerPencil = serde_json::from_str(
            r#"{"psi0": [["1/2", "0"]], "psi1": [["0", "-3/4+1/2i"]]}"#,
        )
        .unwrap();
        assert_eq!(from_text.psi0()[(0, 0)], GaussRat::new(parse_rat("1/2").unwrap(), parse_rat("0").unwrap()));
        // Ragged rows are rejected.
        assert!(serde_json::from_str::<KroneckerPencil>(
            r#"{"psi0": [["1", "0"], ["1"]], "psi1": [["0", "0"], ["0", "0"]]}"#
        )
        .is_err());
    }

    #[test]
    fn stability_hook_for_shift_pencil() {
        // The pencil realizing O(−1) has (v, w) = (2, 1): the matching squid
        // dimension vector is α̂ = (α∞, α∞+α₀) = (1, 2) with no leg entries,
        // and the λ translated from empty weights at slope a = −1 pairs to 0.
        let p = shift_pencil(1);
        let split = splitting_type(&p).unwrap();
        let inv = bundle_invariants(&p).unwrap();
        assert_eq!(split.degrees, vec![-1]);
        let slope = ds::parabolic_slope(inv.degree, &[], inv.rank, &[]).unwrap();
        let lam = ds::theta_to_lambda(&[], &slope).unwrap();
        assert_eq!(lam.inf, parse_rat("2").unwrap());
        assert_eq!(lam.zero, parse_rat("-1").unwrap());
        let alpha_inf = p.w() as i64;
        let alpha0 = p.v() as i64 - p.w() as i64;
        assert_eq!(alpha_inf + alpha0, 2);
        assert!(lam.pair_alpha_hat(alpha_inf, alpha0, &[]).unwrap().is_zero());
    }
}
