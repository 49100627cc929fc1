use super::EngineError;

/// Pivots smaller than this are treated as exact zeros.
pub const PIVOT_FLOOR: f64 = 1e-30;

/// Dense square system `a * x = b`, `a` stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl LinearSystem {
    pub fn zeros(n: usize) -> Self {
        LinearSystem {
            n,
            a: vec![0.0; n * n],
            b: vec![0.0; n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>], b: Vec<f64>) -> Self {
        let n = rows.len();
        assert_eq!(b.len(), n);
        let mut a = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            a.extend_from_slice(r);
        }
        LinearSystem { n, a, b }
    }

    pub fn clear(&mut self) {
        self.a.iter_mut().for_each(|v| *v = 0.0);
        self.b.iter_mut().for_each(|v| *v = 0.0);
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.n + c]
    }

    #[inline]
    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        self.a[r * self.n + c] += v;
    }

    /// `a * x - b`
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|r| {
                let row = &self.a[r * self.n..(r + 1) * self.n];
                row.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() - self.b[r]
            })
            .collect()
    }
}

/// Solves the system by LU factorisation with partial pivoting.
pub fn solve_linear(sys: &LinearSystem) -> Result<Vec<f64>, EngineError> {
    let mut a = sys.a.clone();
    let mut x = sys.b.clone();
    lu_solve_in_place(sys.n, &mut a, &mut x)?;
    Ok(x)
}

/// Factorises `a` in place (Doolittle, row pivoting) and overwrites `b` with
/// the solution.
pub(crate) fn lu_solve_in_place(n: usize, a: &mut [f64], b: &mut [f64]) -> Result<(), EngineError> {
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for r in k + 1..n {
            let v = a[r * n + k].abs();
            if v > best {
                best = v;
                p = r;
            }
        }
        if !(best >= PIVOT_FLOOR) {
            return Err(EngineError::SingularMatrix { column: k });
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            b.swap(k, p);
        }
        let pivot = a[k * n + k];
        let (upper, lower) = a.split_at_mut((k + 1) * n);
        let prow = &upper[k * n..k * n + n];
        for r in 0..n - k - 1 {
            let row = &mut lower[r * n..r * n + n];
            let f = row[k] / pivot;
            if f == 0.0 {
                continue;
            }
            row[k] = f;
            for c in k + 1..n {
                row[c] -= f * prow[c];
            }
            b[k + 1 + r] -= f * b[k];
        }
    }
    for k in (0..n).rev() {
        let row = &a[k * n..k * n + n];
        let s: f64 = (k + 1..n).map(|c| row[c] * b[c]).sum();
        b[k] = (b[k] - s) / row[k];
    }
    Ok(())
}
