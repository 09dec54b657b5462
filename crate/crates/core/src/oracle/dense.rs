use crate::error::{Error, Result};

/// Dense real symmetric matrix, row-major.
///
/// Every matrix produced by the oracles is real in its chosen basis; complex
/// intermediate results are checked for vanishing imaginary parts before
/// they are stored here.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseHermitian {
    dim: usize,
    data: Vec<f64>,
}

const HERMITIAN_TOLERANCE: f64 = 1e-12;
const JACOBI_TOLERANCE: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

impl DenseHermitian {
    pub fn zeros(dim: usize) -> Self {
        DenseHermitian {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        DenseHermitian { dim, data }
    }

    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::invalid(format!(
                "{} entries cannot fill a {dim}×{dim} matrix",
                data.len()
            )));
        }
        Ok(DenseHermitian { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] += v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &DenseHermitian) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `max |a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Errors unless the matrix is symmetric to `1e-12 · max |a_ij|`.
    pub fn check_hermitian(&self) -> Result<()> {
        let asymmetry = self.asymmetry();
        let tolerance = HERMITIAN_TOLERANCE * self.max_abs();
        if asymmetry > tolerance {
            return Err(Error::NotHermitian {
                asymmetry,
                tolerance,
            });
        }
        Ok(())
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &DenseHermitian) -> DenseHermitian {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = DenseHermitian::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> DenseHermitian {
        DenseHermitian {
            dim: self.dim,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// `self + factor · other`.
    pub fn axpy(&self, factor: f64, other: &DenseHermitian) -> DenseHermitian {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        DenseHermitian {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + factor * b).collect(),
        }
    }

    fn submatrix(&self, idx: &[usize]) -> DenseHermitian {
        DenseHermitian::from_fn(idx.len(), |i, j| {
            0.5 * (self.get(idx[i], idx[j]) + self.get(idx[j], idx[i]))
        })
    }

    /// Index sets of the connected components of the nonzero pattern, each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.dim;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.get(i, j) != 0.0 || self.get(j, i) != 0.0 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

/// Eigenvalues in descending order with matching unit eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi on a symmetric matrix `a` (row-major, destroyed).
///
/// Stops once the off-diagonal Frobenius norm drops below `1e-13 · ‖A‖_F`.
/// Returns the diagonal and, if requested, the rotation matrix with
/// eigenvectors in its columns.
fn jacobi(n: usize, a: &mut [f64], want_vectors: bool) -> (Vec<f64>, Option<Vec<f64>>) {
    let mut v = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    });
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = JACOBI_TOLERANCE * total;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        if off.sqrt() <= threshold || total == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let np = c * akp - s * akq;
                    let nq = s * akp + c * akq;
                    a[k * n + p] = np;
                    a[p * n + k] = np;
                    a[k * n + q] = nq;
                    a[q * n + k] = nq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

fn descending(values: &mut [f64]) {
    values.sort_by(|a, b| b.total_cmp(a));
}

/// All eigenvalues of a symmetric matrix, descending.
///
/// The matrix is first split into the connected components of its nonzero
/// pattern, which recovers conserved-quantity sectors without knowing them.
pub fn eigenspectrum(mat: &DenseHermitian) -> Result<Vec<f64>> {
    mat.check_hermitian()?;
    let mut values = Vec::with_capacity(mat.dim());
    for block in mat.blocks() {
        if block.len() == 1 {
            values.push(mat.get(block[0], block[0]));
            continue;
        }
        let mut sub = mat.submatrix(&block);
        let (vals, _) = jacobi(block.len(), &mut sub.data, false);
        values.extend(vals);
    }
    descending(&mut values);
    Ok(values)
}

/// Eigenvalues and eigenvectors of a symmetric matrix, descending.
pub fn symmetric_eigen(mat: &DenseHermitian) -> Result<SymmetricEigen> {
    mat.check_hermitian()?;
    let n = mat.dim();
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for block in mat.blocks() {
        let m = block.len();
        let mut sub = mat.submatrix(&block);
        let (vals, rot) = jacobi(m, &mut sub.data, true);
        let rot = rot.expect("vectors requested");
        for (c, &val) in vals.iter().enumerate() {
            let mut vec = vec![0.0; n];
            for (r, &i) in block.iter().enumerate() {
                vec[i] = rot[r * m + c];
            }
            values.push(val);
            vectors.push(vec);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    Ok(SymmetricEigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: order.iter().map(|&i| vectors[i].clone()).collect(),
    })
}
