//! Thomas algorithm with a reusable factorization.

/// Factorized tridiagonal matrix (sub, diag, super); no pivoting, so the
/// matrix must be diagonally dominant.
pub(crate) struct Tridiag {
    sub: Vec<f64>,
    c_prime: Vec<f64>,
    denom: Vec<f64>,
}

impl Tridiag {
    pub fn new(sub: &[f64], diag: &[f64], sup: &[f64]) -> Self {
        let n = diag.len();
        let mut c_prime = vec![0.0; n];
        let mut denom = vec![0.0; n];
        denom[0] = diag[0];
        c_prime[0] = if n > 1 { sup[0] / denom[0] } else { 0.0 };
        for i in 1..n {
            denom[i] = diag[i] - sub[i] * c_prime[i - 1];
            c_prime[i] = if i + 1 < n { sup[i] / denom[i] } else { 0.0 };
        }
        Tridiag {
            sub: sub.to_vec(),
            c_prime,
            denom,
        }
    }

    /// Solves in place: `rhs` becomes the solution.
    pub fn solve(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        rhs[0] /= self.denom[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.sub[i] * rhs[i - 1]) / self.denom[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.c_prime[i] * rhs[i + 1];
        }
    }
}
