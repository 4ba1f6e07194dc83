//! Dense matrices over F_p.

use super::fp_poly::mod_inv;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = FpMatrix::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    /// Matrix whose j-th column is `cols[j]`.
    pub fn from_columns(p: u32, cols: &[Vec<u32>]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = FpMatrix::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (j, &x) in v.iter().enumerate() {
                    acc = (acc + self.get(i, j) as u64 * x as u64) % p;
                }
                acc as u32
            })
            .collect()
    }

    /// u^T M v
    pub fn bilinear(&self, u: &[u32], v: &[u32]) -> u32 {
        let mv = self.mul_vec(v);
        let p = self.p as u64;
        u.iter().zip(&mv).fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p) as u32
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p as u64;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = mod_inv(m.get(r, c), self.p) as u64;
            for j in 0..m.cols {
                let v = m.get(r, j) as u64 * inv % p;
                m.set(r, j, v as u32);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c) as u64;
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = (m.get(i, j) as u64 + (p - f) * m.get(r, j) as u64) % p;
                    m.set(i, j, v as u32);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let (m, pivots) = self.rref();
        let p = self.p;
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let a = m.get(i, f);
                v[pc] = (p - a) % p;
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of M x = b, free variables set to zero.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMatrix::zeros(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i] % self.p);
        }
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = m.get(i, self.cols);
        }
        Some(x)
    }
}

/// Kernel basis of an F_p-matrix, in the deterministic order of [`FpMatrix::kernel`].
pub fn fp_linear_kernel(m: &FpMatrix) -> Vec<Vec<u32>> {
    m.kernel()
}

/// Standard basis vectors e_j (in increasing j) that complete `sub` to a basis of F_p^n.
pub fn complement_indices(p: u32, n: usize, sub: &[Vec<u32>]) -> Vec<usize> {
    let mut rows: Vec<Vec<u32>> = sub.to_vec();
    let mut rank = if rows.is_empty() { 0 } else { FpMatrix::from_rows(p, &rows).rank() };
    let mut out = Vec::new();
    for j in 0..n {
        let mut e = vec![0u32; n];
        e[j] = 1;
        rows.push(e);
        let nr = FpMatrix::from_rows(p, &rows).rank();
        if nr > rank {
            rank = nr;
            out.push(j);
        } else {
            rows.pop();
        }
    }
    out
}
