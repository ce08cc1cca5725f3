//! Tridiagonal linear algebra shared by the Newton solver and the Hardy eigensolver.

/// A tridiagonal matrix stored by diagonals; `lower[0]` and `upper[n-1]` are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.upper[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Thomas algorithm. Returns `None` on a zero or non-finite pivot.
    pub fn solve(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        let n = self.len();
        if n == 0 {
            return Some(Vec::new());
        }
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0];
        if pivot == 0.0 || !pivot.is_finite() {
            return None;
        }
        c[0] = self.upper[0] / pivot;
        d[0] = rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.lower[i] * c[i - 1];
            if pivot == 0.0 || !pivot.is_finite() {
                return None;
            }
            c[i] = if i + 1 < n { self.upper[i] / pivot } else { 0.0 };
            d[i] = (rhs[i] - self.lower[i] * d[i - 1]) / pivot;
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        Some(x)
    }

    /// Number of negative pivots of the LDLᵀ factorisation of a symmetric
    /// tridiagonal matrix, i.e. its count of negative eigenvalues.
    pub fn negative_inertia(&self) -> usize {
        let mut count = 0;
        let mut pivot = 0.0f64;
        for i in 0..self.len() {
            pivot = if i == 0 {
                self.diag[0]
            } else {
                let prev = if pivot == 0.0 { f64::MIN_POSITIVE } else { pivot };
                self.diag[i] - self.lower[i] * self.lower[i] / prev
            };
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_solves_laplacian() {
        let n = 50;
        let mut t = Tridiagonal::zeros(n);
        for i in 0..n {
            t.diag[i] = 2.0;
            t.lower[i] = -1.0;
            t.upper[i] = -1.0;
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sqrt()).collect();
        let b = t.mul_vec(&x);
        let y = t.solve(&b).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn inertia_counts_eigenvalues_below_shift() {
        // eigenvalues of the 1-D Laplacian: 2 - 2cos(kπ/(n+1))
        let n = 20;
        let shift = 1.1;
        let mut t = Tridiagonal::zeros(n);
        for i in 0..n {
            t.diag[i] = 2.0 - shift;
            t.lower[i] = -1.0;
            t.upper[i] = -1.0;
        }
        let expected = (1..=n)
            .filter(|k| 2.0 - 2.0 * (*k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos() < shift)
            .count();
        assert_eq!(t.negative_inertia(), expected);
    }
}
