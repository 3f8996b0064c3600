use num_complex::Complex64;

/// Square complex matrix, column-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_columns(columns: Vec<Vec<Complex64>>) -> Self {
        let dim = columns.len();
        let mut data = Vec::with_capacity(dim * dim);
        for c in columns {
            assert_eq!(c.len(), dim, "non-square column set");
            data.extend(c);
        }
        DenseMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[col * self.dim + row] = v;
    }

    pub fn column(&self, col: usize) -> &[Complex64] {
        &self.data[col * self.dim..(col + 1) * self.dim]
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for c in 0..n {
            for k in 0..n {
                let b = other.get(k, c);
                if b.norm_sqr() == 0.0 {
                    continue;
                }
                for r in 0..n {
                    out.data[c * n + r] += self.get(r, k) * b;
                }
            }
        }
        out
    }

    pub fn scaled(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn frobenius_distance(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// `min_phi || self - e^{i phi} other ||_F`. The optimal phase aligns
    /// the trace inner product `<other, self>`.
    pub fn distance_up_to_phase(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let inner: Complex64 = other.data.iter().zip(&self.data).map(|(b, a)| b.conj() * a).sum();
        let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { Complex64::new(1.0, 0.0) };
        self.frobenius_distance(&other.scaled(phase))
    }

    /// Block with rows and columns restricted to basis states where every
    /// qubit in `zero_qubits` is `|0>`, for an `n`-qubit operator. The
    /// remaining qubits keep their relative order.
    pub fn restrict_zero(&self, n: usize, zero_qubits: &[usize]) -> DenseMatrix {
        assert_eq!(1usize << n, self.dim, "qubit count does not match dimension");
        let mask: usize = zero_qubits.iter().map(|q| 1usize << (n - 1 - q)).sum();
        let keep: Vec<usize> = (0..self.dim).filter(|i| i & mask == 0).collect();
        let mut out = DenseMatrix::zeros(keep.len());
        for (ci, &c) in keep.iter().enumerate() {
            for (ri, &r) in keep.iter().enumerate() {
                out.set(ri, ci, self.get(r, c));
            }
        }
        out
    }

    /// Largest deviation of `self^dagger self` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let id = DenseMatrix::identity(self.dim);
        p.data.iter().zip(&id.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}
