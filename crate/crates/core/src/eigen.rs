//! Dense symmetric eigensolver (cyclic Jacobi) and Cauchy interlacing checks.

use serde::Serialize;

use crate::corrmat::CorrelationMatrix;
use crate::error::{input, Result};

/// Off-diagonal Frobenius norm target, relative to `‖A‖_F`.
pub const JACOBI_TOLERANCE: f64 = 1e-13;
/// Relative spectral gap below which two eigenvalues count as equal.
pub const MULTIPLICITY_GAP: f64 = 1e-8;
/// Slack allowed when checking interlacing.
pub const INTERLACING_TOLERANCE: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

/// Row-major dense square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return input("matrix rows must all have length equal to the row count");
        }
        Ok(Matrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.n.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self[(i, j)] * self[(i, j)];
                }
            }
        }
        s.sqrt()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// Leading principal submatrix of order `k`.
    pub fn leading_submatrix(&self, k: usize) -> Matrix {
        let mut m = Matrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = self[(i, j)];
            }
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Full eigendecomposition, eigenvalues ascending.
#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl Spectrum {
    /// `V Λ Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.values.len();
        let mut m = Matrix::zeros(n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += lambda * v[i] * v[j];
                }
            }
        }
        m
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// Number of eigenvalues within the relative gap of `value`.
    pub multiplicity: usize,
    /// Gap to the next distinct eigenvalue over the spectral radius;
    /// infinite for a 1×1 matrix.
    pub relative_gap: f64,
}

/// Cyclic Jacobi on a symmetric matrix.
pub fn symmetric_eigen(a: &Matrix) -> Result<Spectrum> {
    let n = a.order();
    if n == 0 {
        return input("cannot decompose an empty matrix");
    }
    let scale = a.inf_norm().max(f64::MIN_POSITIVE);
    if !a.is_symmetric(1e-12 * scale) {
        return input("matrix is not symmetric");
    }
    let mut a = a.clone();
    let mut v = Matrix::identity(n);
    let target = JACOBI_TOLERANCE * a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    // Stable sort keeps the rotation order for repeated eigenvalues.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&k| a[(k, k)]).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut col: Vec<f64> = (0..n).map(|i| v[(i, k)]).collect();
            normalize_sign(&mut col);
            col
        })
        .collect();
    Ok(Spectrum { values, vectors })
}

/// Flip `v` so that its first non-negligible component is positive.
fn normalize_sign(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if let Some(&first) = v.iter().find(|x| x.abs() > 1e-12 * norm) {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub fn eigen_all(a: &CorrelationMatrix) -> Spectrum {
    symmetric_eigen(&a.dense()).expect("correlation matrices are symmetric and nonempty")
}

pub fn min_pair(spectrum: &Spectrum) -> EigenPair {
    let values = &spectrum.values;
    let lo = values[0];
    let radius = values
        .iter()
        .map(|x| x.abs())
        .fold(f64::MIN_POSITIVE, f64::max);
    let multiplicity = values
        .iter()
        .take_while(|&&x| (x - lo) / radius < MULTIPLICITY_GAP)
        .count();
    let relative_gap = values
        .get(multiplicity)
        .map_or(f64::INFINITY, |&next| (next - lo) / radius);
    EigenPair {
        value: lo,
        vector: spectrum.vectors[0].clone(),
        multiplicity,
        relative_gap,
    }
}

/// Smallest eigenvalue with a sign-normalized unit eigenvector.
pub fn eigen_min(a: &CorrelationMatrix) -> EigenPair {
    min_pair(&eigen_all(a))
}

#[derive(Clone, Debug, Serialize)]
pub struct InterlacingReport {
    pub holds: bool,
    /// Smallest signed distance from a submatrix eigenvalue to the edge of
    /// its interlacing interval; negative means violated.
    pub worst_margin: f64,
}

/// Check `λ_k(A) ≤ λ_k(A_sub) ≤ λ_{k+1}(A)` for the leading principal
/// submatrix of order `n - 1`.
pub fn interlacing_check_dense(a: &Matrix) -> Result<InterlacingReport> {
    let n = a.order();
    if n < 2 {
        return input("interlacing needs a matrix of order at least 2");
    }
    let full = symmetric_eigen(a)?.values;
    let sub = symmetric_eigen(&a.leading_submatrix(n - 1))?.values;
    let worst_margin = sub
        .iter()
        .enumerate()
        .map(|(k, &mu)| (mu - full[k]).min(full[k + 1] - mu))
        .fold(f64::INFINITY, f64::min);
    Ok(InterlacingReport {
        holds: worst_margin >= -INTERLACING_TOLERANCE,
        worst_margin,
    })
}

pub fn interlacing_check(a: &CorrelationMatrix) -> Result<InterlacingReport> {
    interlacing_check_dense(&a.dense())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corrmat::{autocorrelation, build_matrix};
    use crate::events::canonicalize;
    use proptest::prelude::*;

    fn toeplitz(beta: &[i64]) -> CorrelationMatrix {
        CorrelationMatrix::from_first_row(beta.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn identity_spectrum() {
        let s = eigen_all(&toeplitz(&[1, 0, 0]));
        assert_eq!(s.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let s = eigen_all(&toeplitz(&[2, -1]));
        assert!(close(s.values[0], 1.0, 1e-12));
        assert!(close(s.values[1], 3.0, 1e-12));
        let p = eigen_min(&toeplitz(&[2, -1]));
        let h = 0.5f64.sqrt();
        assert!(close(p.vector[0], h, 1e-12) && close(p.vector[1], h, 1e-12));
        assert_eq!(p.multiplicity, 1);
    }

    #[test]
    fn three_by_three_closed_form() {
        let s = eigen_all(&toeplitz(&[3, -2, 1]));
        let r = 33f64.sqrt();
        let want = [(7.0 - r) / 2.0, 2.0, (7.0 + r) / 2.0];
        for (got, want) in s.values.iter().zip(want) {
            assert!(close(*got, want, 1e-12), "{got} vs {want}");
        }
        // Symmetric eigenvector (a, b, a) with b/a = (4 - λ)/2.
        let p = eigen_min(&toeplitz(&[3, -2, 1]));
        let ratio = (4.0 - want[0]) / 2.0;
        let a = 1.0 / (2.0 + ratio * ratio).sqrt();
        let expect = [a, a * ratio, a];
        for (g, w) in p.vector.iter().zip(expect) {
            assert!(close(*g, w, 1e-12));
        }
        assert!(close(p.vector[0], 0.4544, 1e-4) && close(p.vector[1], 0.7662, 1e-4));
    }

    #[test]
    fn degenerate_minimum_is_deterministic() {
        let p = eigen_min(&toeplitz(&[1, 0]));
        assert_eq!(p.value, 1.0);
        assert_eq!(p.vector, vec![1.0, 0.0]);
        assert_eq!(p.multiplicity, 2);
    }

    #[test]
    fn rejects_non_symmetric() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(symmetric_eigen(&m).is_err());
        assert!(Matrix::from_rows(&[vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn interlacing_examples() {
        assert!(interlacing_check(&toeplitz(&[1, 0, 0])).unwrap().holds);
        let r = interlacing_check(&toeplitz(&[3, -2, 1])).unwrap();
        assert!(r.holds);
        // Submatrix (1, 5) inside (0.6277, 2, 6.3723): tightest gap is 5 vs 6.3723.
        let r33 = 33f64.sqrt();
        let expect = (1.0 - (7.0 - r33) / 2.0).min((7.0 + r33) / 2.0 - 5.0);
        assert!(close(r.worst_margin, expect, 1e-12));
        assert!(interlacing_check(&toeplitz(&[4])).is_err());
    }

    fn small_event() -> impl Strategy<Value = Vec<i32>> {
        (1usize..=10, 2u32..=4).prop_flat_map(|(n, m)| {
            let k = m as i32 - 1;
            proptest::collection::vec(-k..=k, n).prop_map(move |mut v| {
                let n = v.len();
                if v[0] == 0 {
                    v[0] = 1;
                }
                if v[n - 1] == 0 {
                    v[n - 1] = 1;
                }
                v
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn interlacing_random_events(raw in small_event(), order in 2usize..=8) {
            let e = canonicalize(&raw).unwrap();
            let a = build_matrix(&autocorrelation(&e, order).unwrap(), order).unwrap();
            prop_assert!(interlacing_check(&a).unwrap().holds);
        }

        #[test]
        fn decomposition_invariants(raw in small_event(), order in 1usize..=8) {
            let e = canonicalize(&raw).unwrap();
            let a = build_matrix(&autocorrelation(&e, order).unwrap(), order).unwrap();
            let dense = a.dense();
            let s = eigen_all(&a);
            let norm = dense.inf_norm();
            prop_assert!(s.values.windows(2).all(|w| w[0] <= w[1]));
            // Reconstruction.
            let r = s.reconstruct();
            for i in 0..order {
                for j in 0..order {
                    prop_assert!((r[(i, j)] - dense[(i, j)]).abs() <= 1e-9 * norm);
                }
            }
            // Orthonormality and residuals.
            for (k, v) in s.vectors.iter().enumerate() {
                let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                prop_assert!((nv - 1.0).abs() <= 1e-12);
                let av = dense.mul_vec(v);
                let res = av.iter().zip(v).map(|(x, y)| (x - s.values[k] * y).abs()).fold(0.0, f64::max);
                prop_assert!(res <= 1e-9 * norm);
                for w in &s.vectors[..k] {
                    let dot: f64 = v.iter().zip(w).map(|(x, y)| x * y).sum();
                    prop_assert!(dot.abs() <= 1e-9);
                }
            }
            // Positive definite and inside the Gershgorin bounds.
            prop_assert!(s.values[0] > 0.0);
            let lo = a.gershgorin_lower_bound() as f64;
            let hi = a.gershgorin_upper_bound() as f64;
            prop_assert!(s.values[0] >= lo - 1e-9 && s.values[order - 1] <= hi + 1e-9);
        }

        #[test]
        fn bordering_never_raises_minimum(raw in small_event(), order in 1usize..=7) {
            let e = canonicalize(&raw).unwrap();
            let small = build_matrix(&autocorrelation(&e, order).unwrap(), order).unwrap();
            let big = build_matrix(&autocorrelation(&e, order + 1).unwrap(), order + 1).unwrap();
            prop_assert!(eigen_min(&big).value <= eigen_min(&small).value + 1e-12);
        }
    }
}
