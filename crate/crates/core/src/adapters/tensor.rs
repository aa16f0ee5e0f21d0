use serde::{Deserialize, Serialize};

use super::AdapterError;

/// Real 3-way array `a_{ijk}`, row-major (`k` fastest).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tensor3 {
    dims: [usize; 3],
    entries: Vec<f64>,
}

impl Tensor3 {
    pub fn new(dims: [usize; 3], entries: Vec<f64>) -> Result<Self, AdapterError> {
        if dims.contains(&0) {
            return Err(AdapterError::BadTensor("every dimension must be at least 1".into()));
        }
        if entries.len() != dims.iter().product::<usize>() {
            return Err(AdapterError::BadTensor(format!(
                "{} entries do not fill a {}×{}×{} array",
                entries.len(),
                dims[0],
                dims[1],
                dims[2]
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(AdapterError::BadTensor("entries must be finite".into()));
        }
        Ok(Tensor3 { dims, entries })
    }

    pub fn zeros(dims: [usize; 3]) -> Self {
        Tensor3 { dims, entries: vec![0.0; dims.iter().product()] }
    }

    /// Builds from `(i, j, k, value)` with 0-based indices; repeats add up.
    pub fn from_sparse(dims: [usize; 3], terms: &[(usize, usize, usize, f64)]) -> Result<Self, AdapterError> {
        let mut t = Tensor3::new(dims, vec![0.0; dims.iter().product()])?;
        for &(i, j, k, v) in terms {
            if i >= dims[0] || j >= dims[1] || k >= dims[2] {
                return Err(AdapterError::BadTensor(format!("index ({i}, {j}, {k}) out of range")));
            }
            *t.get_mut(i, j, k) += v;
        }
        Ok(t)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.entries[self.offset(i, j, k)]
    }

    pub fn get_mut(&mut self, i: usize, j: usize, k: usize) -> &mut f64 {
        let o = self.offset(i, j, k);
        &mut self.entries[o]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        Tensor3 { dims: self.dims, entries: self.entries.iter().map(|v| v * c).collect() }
    }

    /// `ℓ(x, y, z) = Σ a_{ijk} x_i y_j z_k`.
    pub fn form(&self, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
        let [n1, n2, n3] = self.dims;
        let mut s = 0.0;
        for i in 0..n1 {
            for j in 0..n2 {
                let xy = x[i] * y[j];
                for k in 0..n3 {
                    s += self.get(i, j, k) * xy * z[k];
                }
            }
        }
        s
    }

    /// Partial gradients `(∂ℓ/∂x, ∂ℓ/∂y, ∂ℓ/∂z)`.
    pub fn gradients(&self, x: &[f64], y: &[f64], z: &[f64]) -> [Vec<f64>; 3] {
        let [n1, n2, n3] = self.dims;
        let mut g = [vec![0.0; n1], vec![0.0; n2], vec![0.0; n3]];
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n3 {
                    let a = self.get(i, j, k);
                    g[0][i] += a * y[j] * z[k];
                    g[1][j] += a * x[i] * z[k];
                    g[2][k] += a * x[i] * y[j];
                }
            }
        }
        g
    }

    /// `b_{ijk} = Σ a_{abc} Q1_{ai} Q2_{bj} Q3_{ck}`, so that
    /// `ℓ_b(x, y, z) = ℓ_a(Q1 x, Q2 y, Q3 z)`. Matrices are row-major.
    pub fn transform(&self, q: [&[Vec<f64>]; 3]) -> Self {
        let mut cur = self.clone();
        for (axis, m) in q.iter().enumerate() {
            cur = cur.transform_axis(axis, m);
        }
        cur
    }

    fn transform_axis(&self, axis: usize, m: &[Vec<f64>]) -> Self {
        let mut out = Tensor3::zeros(self.dims);
        let [n1, n2, n3] = self.dims;
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n3 {
                    let idx = [i, j, k];
                    let mut s = 0.0;
                    for a in 0..self.dims[axis] {
                        let mut src = idx;
                        src[axis] = a;
                        s += self.get(src[0], src[1], src[2]) * m[a][idx[axis]];
                    }
                    *out.get_mut(i, j, k) = s;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Tensor3::new([2, 2, 2], vec![0.0; 7]).is_err());
        assert!(Tensor3::new([0, 2, 2], vec![]).is_err());
        assert!(Tensor3::new([1, 1, 1], vec![f64::NAN]).is_err());
        assert!(Tensor3::from_sparse([2, 2, 2], &[(2, 0, 0, 1.0)]).is_err());
    }

    #[test]
    fn form_and_transform_agree() {
        let t = Tensor3::new([2, 3, 2], (0..12).map(|v| v as f64 - 5.5).collect()).unwrap();
        let q1 = vec![vec![0.0, 1.0], vec![-1.0, 0.0]];
        let q2 = vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.6, 0.8], vec![0.0, -0.8, 0.6]];
        let q3 = vec![vec![0.6, 0.8], vec![-0.8, 0.6]];
        let b = t.transform([&q1, &q2, &q3]);
        let (x, y, z) = ([0.3, -1.2], [0.5, 2.0, -0.7], [1.1, 0.4]);
        let mv = |m: &[Vec<f64>], v: &[f64]| -> Vec<f64> {
            m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
        };
        let lhs = b.form(&x, &y, &z);
        let rhs = t.form(&mv(&q1, &x), &mv(&q2, &y), &mv(&q3, &z));
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
