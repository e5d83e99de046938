//! Log-domain arithmetic shared by the partition-sum routines.

/// log(e^a + e^b) without overflow; handles -inf identity.
#[inline]
pub fn logsumexp2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a > b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// log Σ e^{x_i} over a slice; empty slice gives -inf.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// Dense square matrix with entries stored as logs (-inf encodes zero).
#[derive(Clone, Debug)]
pub struct LogMatrix {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl LogMatrix {
    pub fn zeros(dim: usize) -> Self {
        LogMatrix {
            dim,
            data: vec![f64::NEG_INFINITY; dim * dim],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    /// Log-space matrix product: (A·B)[i][j] = logsumexp_k A[i][k] + B[k][j].
    pub fn mul(&self, other: &LogMatrix) -> LogMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = LogMatrix::zeros(n);
        let mut row = vec![f64::NEG_INFINITY; n];
        for i in 0..n {
            for v in row.iter_mut() {
                *v = f64::NEG_INFINITY;
            }
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == f64::NEG_INFINITY {
                    continue;
                }
                for j in 0..n {
                    let bkj = other.get(k, j);
                    if bkj != f64::NEG_INFINITY {
                        row[j] = logsumexp2(row[j], aik + bkj);
                    }
                }
            }
            for j in 0..n {
                out.set(i, j, row[j]);
            }
        }
        out
    }

    /// A^n by repeated squaring; n >= 1.
    pub fn pow(&self, n: usize) -> LogMatrix {
        assert!(n >= 1);
        let mut base = self.clone();
        let mut acc: Option<LogMatrix> = None;
        let mut e = n;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc.unwrap()
    }

    pub fn log_trace(&self) -> f64 {
        let diag: Vec<f64> = (0..self.dim).map(|i| self.get(i, i)).collect();
        logsumexp(&diag)
    }
}
