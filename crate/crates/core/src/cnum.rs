//! Shared double-precision complex matrix utilities: JSON encoding,
//! deterministic random fills, and SVD-based numerical rank.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub type CMat = DMatrix<Complex64>;

/// Row-major componentwise encoding of a complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl CMatJson {
    pub fn from_mat(m: &CMat) -> Self {
        let rows = |part: fn(&Complex64) -> f64| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| part(&m[(r, c)])).collect())
                .collect()
        };
        CMatJson { re: rows(|z| z.re), im: rows(|z| z.im) }
    }

    /// Decode, checking the declared shape (`rows` may be 0).
    pub fn to_mat(&self, rows: usize, cols: usize) -> Result<CMat, String> {
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != rows || part.iter().any(|r| r.len() != cols) {
                return Err(format!("{name} part is not a {rows}×{cols} matrix"));
            }
        }
        Ok(CMat::from_fn(rows, cols, |r, c| Complex64::new(self.re[r][c], self.im[r][c])))
    }
}

/// Matrix with entries drawn uniformly from [−1, 1]² in row-major order.
pub fn random_cmat(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    let data: Vec<Complex64> = (0..rows * cols)
        .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    CMat::from_row_slice(rows, cols, &data)
}

/// Matrix with Gaussian-integer entries from [−pool, pool]², row-major.
pub fn random_int_cmat(rng: &mut impl Rng, rows: usize, cols: usize, pool: i64) -> CMat {
    let data: Vec<Complex64> = (0..rows * cols)
        .map(|_| {
            Complex64::new(
                rng.gen_range(-pool..=pool) as f64,
                rng.gen_range(-pool..=pool) as f64,
            )
        })
        .collect();
    CMat::from_row_slice(rows, cols, &data)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rank read off a descending singular-value list with threshold
/// 10³ · max(rows, cols) · ε · σ_max.
pub fn rank_from_singular(sv: &[f64], rows: usize, cols: usize) -> usize {
    let Some(&smax) = sv.first() else { return 0 };
    if smax == 0.0 {
        return 0;
    }
    let tol = 1e3 * rows.max(cols) as f64 * f64::EPSILON * smax;
    sv.iter().take_while(|&&s| s > tol).count()
}

/// Numerical rank with threshold 10³ · max(rows, cols) · ε · σ_max.
pub fn numerical_rank(m: &CMat) -> usize {
    rank_from_singular(&singular_values(m), m.nrows(), m.ncols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let m = random_cmat(&mut rng, 2, 3);
        let j = CMatJson::from_mat(&m);
        assert_eq!(j.to_mat(2, 3).unwrap(), m);
        assert!(j.to_mat(3, 2).is_err());
        let text = serde_json::to_string(&j).unwrap();
        let back: CMatJson = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        // Zero-row matrices survive.
        let empty = CMatJson::from_mat(&CMat::zeros(0, 2));
        assert_eq!(empty.to_mat(0, 2).unwrap().ncols(), 2);
    }

    #[test]
    fn rank_of_projector_like_matrix() {
        // Rank-1 outer product padded with a zero row.
        let u = CMat::from_row_slice(
            3,
            1,
            &[Complex64::new(1.0, 2.0), Complex64::new(0.5, -1.0), Complex64::new(0.0, 0.0)],
        );
        let v = CMat::from_row_slice(1, 4, &[Complex64::new(2.0, 0.0); 4]);
        let m = &u * &v;
        assert_eq!(numerical_rank(&m), 1);
        assert_eq!(numerical_rank(&CMat::zeros(3, 3)), 0);
        assert_eq!(numerical_rank(&CMat::identity(4, 4)), 4);
        assert_eq!(numerical_rank(&CMat::zeros(0, 5)), 0);
        let sv = singular_values(&CMat::identity(3, 3));
        assert!(sv.iter().all(|&s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn random_fills_are_deterministic() {
        let a = random_cmat(&mut ChaCha20Rng::seed_from_u64(9), 2, 2);
        let b = random_cmat(&mut ChaCha20Rng::seed_from_u64(9), 2, 2);
        assert_eq!(a, b);
        let c = random_int_cmat(&mut ChaCha20Rng::seed_from_u64(9), 2, 2, 3);
        assert!(c.iter().all(|z| z.re.abs() <= 3.0 && z.re.fract() == 0.0));
    }
}
