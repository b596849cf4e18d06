use std::fmt;

use num_bigint::BigInt;

use crate::coefficients::{RingSpec, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over one coefficient ring.
///
/// Dimension mismatches in products and sums are programming errors and
/// panic; input documents are validated before they reach this type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        Matrix { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn from_rows(ring: RingSpec, rows: usize, cols: usize, entries: Vec<Vec<Scalar>>) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!("expected a {rows}x{cols} matrix")));
        }
        Ok(Matrix { ring, rows, cols, data: entries.into_iter().flatten().collect() })
    }

    pub fn from_i64(ring: RingSpec, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count for {rows}x{cols}");
        Matrix { ring, rows, cols, data: entries.iter().map(|&x| ring.from_i64(x)).collect() }
    }

    pub fn from_column(ring: RingSpec, v: &[Scalar]) -> Self {
        Matrix { ring, rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn from_columns(ring: RingSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        let idx = i * self.cols + j;
        self.data[idx] = self.ring.add(&self.data[idx], v);
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.ring, self.rows)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let ring = self.ring;
        let mut out = Self::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if ring.is_zero(a) {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !ring.is_zero(b) {
                        ring.add_mul_assign(o, a, b);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "applying {}x{} matrix to length {}", self.rows, self.cols, v.len());
        let ring = self.ring;
        let mut out = vec![ring.zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if ring.is_zero(x) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self.data[i * self.cols + j];
                if !ring.is_zero(a) {
                    ring.add_mul_assign(o, a, x);
                }
            }
        }
        out
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shapes differ");
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| self.ring.sub(a, b))
    }

    pub fn neg(&self) -> Matrix {
        self.map(|x| self.ring.neg(x))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map(|x| self.ring.mul(c, x))
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Kronecker product; row `(i, k)` sits at `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let ring = self.ring;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(ring, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if ring.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !ring.is_zero(b) {
                            out.data[(i * other.rows + k) * c + j * other.cols + l] = ring.mul(a, b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(ring: RingSpec, rows: usize, blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(ring, rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row counts");
            for i in 0..rows {
                for j in 0..b.cols {
                    out.data[i * cols + offset + j] = b.get(i, j).clone();
                }
            }
            offset += b.cols;
        }
        out
    }

    pub fn vstack(ring: RingSpec, cols: usize, blocks: &[&Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column counts");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix { ring, rows, cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(ring: RingSpec, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix { ring: self.ring, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Self::zeros(self.ring, self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + jj] = self.get(i, j).clone();
            }
        }
        out
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += q * row[src]`
    pub(crate) fn row_axpy(&mut self, dst: usize, src: usize, q: &Scalar) {
        let ring = self.ring;
        if ring.is_zero(q) {
            return;
        }
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !ring.is_zero(&s) {
                ring.add_mul_assign(&mut self.data[dst * self.cols + j], q, &s);
            }
        }
    }

    /// `col[dst] += q * col[src]`
    pub(crate) fn col_axpy(&mut self, dst: usize, src: usize, q: &Scalar) {
        let ring = self.ring;
        if ring.is_zero(q) {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !ring.is_zero(&s) {
                ring.add_mul_assign(&mut self.data[i * self.cols + dst], q, &s);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, u: &Scalar) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = self.ring.mul(u, &self.data[idx]);
        }
    }

    pub(crate) fn scale_col(&mut self, c: usize, u: &Scalar) {
        for i in 0..self.rows {
            let idx = i * self.cols + c;
            self.data[idx] = self.ring.mul(u, &self.data[idx]);
        }
    }

    /// Integer representatives of every entry (fails on non-integral rationals).
    pub fn lift_to_integers(&self) -> Result<Matrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for x in &self.data {
            let n = self.ring.lift(x).ok_or_else(|| Error::WrongRing(format!("{x} has no integer lift")))?;
            data.push(Scalar::Int(n));
        }
        Ok(Matrix { ring: RingSpec::Integers, rows: self.rows, cols: self.cols, data })
    }

    /// Image of an integer (or residue) matrix in another ring.
    pub fn change_ring(&self, ring: RingSpec) -> Matrix {
        let src = self.ring;
        Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| match src.lift(x) {
                    Some(n) => ring.from_bigint(&n),
                    None => panic!("change_ring on a non-integral entry {x}"),
                })
                .collect(),
        }
    }

    pub fn entry_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect()
    }

    pub(crate) fn int_entry(&self, i: usize, j: usize) -> &BigInt {
        match self.get(i, j) {
            Scalar::Int(x) => x,
            other => panic!("expected an integer entry, got {other:?}"),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn vec_is_zero(ring: RingSpec, v: &[Scalar]) -> bool {
    v.iter().all(|x| ring.is_zero(x))
}

pub fn vec_add(ring: RingSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect()
}

pub fn vec_sub(ring: RingSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| ring.sub(x, y)).collect()
}

pub fn vec_scale(ring: RingSpec, c: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| ring.mul(c, x)).collect()
}

pub fn unit_vector(ring: RingSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![ring.zero(); n];
    v[i] = ring.one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_matches_index_formula() {
        let z = RingSpec::Integers;
        let f = Matrix::from_i64(z, 2, 1, &[1, 2]);
        let g = Matrix::from_i64(z, 1, 2, &[3, 4]);
        assert_eq!(f.kron(&g), Matrix::from_i64(z, 2, 2, &[3, 4, 6, 8]));
        let a = Matrix::from_i64(z, 2, 2, &[1, 2, 3, 4]);
        let b = Matrix::from_i64(z, 2, 3, &[0, 1, 2, 3, 4, 5]);
        let k = a.kron(&b);
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..2 {
                    for c in 0..3 {
                        assert_eq!(k.get(i * 2 + r, j * 3 + c), &z.mul(a.get(i, j), b.get(r, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn product_and_transpose() {
        let z = RingSpec::Integers;
        let a = Matrix::from_i64(z, 2, 3, &[1, 0, 2, -1, 3, 1]);
        let b = Matrix::from_i64(z, 3, 2, &[3, 1, 2, 1, 1, 0]);
        assert_eq!(a.mul(&b), Matrix::from_i64(z, 2, 2, &[5, 1, 4, 2]));
        assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
        assert_eq!(a.apply(&[z.from_i64(1), z.from_i64(1), z.from_i64(1)]), vec![z.from_i64(3), z.from_i64(3)]);
    }
}
