//! Elimination engines.
//!
//! * [`rref_unit`] row-reduces with unit pivots only. It's exact over every
//!   supported ring and never fails over a field; over `Z` or composite `Z/m`
//!   it gives up as soon as a column offers only non-unit pivots.
//! * [`column_echelon`] and [`smith`] are the Euclidean fallbacks over `Z`
//!   and fields, with unimodular transforms tracked on request.

use num_traits::Zero;

use crate::coefficients::{RingSpec, Scalar};
use crate::linalg::matrix::Matrix;

/// Reduced row echelon form of the left block of an augmented system.
pub(crate) struct Rref {
    /// Pivot column of each nonzero row, increasing.
    pub pivots: Vec<usize>,
    /// Reduced rows of `[A | B]`; rows past `pivots.len()` are zero on the `A` part.
    pub rows: Vec<Vec<Scalar>>,
    pub a_cols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut free = Vec::new();
        let mut p = self.pivots.iter().peekable();
        for j in 0..self.a_cols {
            if p.peek() == Some(&&j) {
                p.next();
            } else {
                free.push(j);
            }
        }
        free
    }
}

/// Row reduction of `[a | rhs]` with unit pivots taken from the columns of `a`.
pub(crate) fn rref_unit(a: &Matrix, rhs: Option<&Matrix>) -> Option<Rref> {
    let ring = a.ring();
    let a_cols = a.cols();
    let extra = rhs.map_or(0, |b| b.cols());
    let width = a_cols + extra;
    let mut rows: Vec<Vec<Scalar>> = (0..a.rows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            if let Some(b) = rhs {
                r.extend_from_slice(b.row(i));
            }
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..a_cols {
        if top == rows.len() {
            break;
        }
        let mut pivot = None;
        let mut blocked = false;
        for (r, row) in rows.iter().enumerate().skip(top) {
            let x = &row[col];
            if ring.is_zero(x) {
                continue;
            }
            if ring.is_unit(x) {
                pivot = Some(r);
                break;
            }
            blocked = true;
        }
        let Some(p) = pivot else {
            if blocked {
                return None;
            }
            continue;
        };
        rows.swap(top, p);
        let inv = ring.inv(&rows[top][col]).expect("unit pivot");
        if !ring.is_one(&inv) {
            for x in rows[top].iter_mut() {
                *x = ring.mul(&inv, x);
            }
        }
        let support: Vec<usize> = (col..width).filter(|&j| !ring.is_zero(&rows[top][j])).collect();
        let pivot_row = std::mem::take(&mut rows[top]);
        for (r, row) in rows.iter_mut().enumerate() {
            if r == top || ring.is_zero(&row[col]) {
                continue;
            }
            let f = ring.neg(&row[col]);
            for &j in &support {
                ring.add_mul_assign(&mut row[j], &f, &pivot_row[j]);
            }
        }
        rows[top] = pivot_row;
        pivots.push(col);
        top += 1;
    }
    Some(Rref { pivots, rows, a_cols })
}

/// Column echelon form `h = a * v` over `Z` or a field.
///
/// Column `k < rank` has its leading nonzero entry in row `pivot_rows[k]`,
/// strictly increasing in `k`; columns from `rank` on are zero, so those
/// columns of `v` are a basis of the kernel.
pub(crate) struct ColumnEchelon {
    pub h: Matrix,
    pub v: Matrix,
    pub v_inv: Option<Matrix>,
    pub pivot_rows: Vec<usize>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

pub(crate) fn column_echelon(a: &Matrix, track_inverse: bool) -> ColumnEchelon {
    let ring = a.ring();
    debug_assert!(!ring.is_composite_modulus(), "Euclidean elimination over {ring}");
    let n = a.cols();
    let mut h = a.clone();
    let mut v = Matrix::identity(ring, n);
    let mut v_inv = track_inverse.then(|| Matrix::identity(ring, n));
    let mut pivot_rows = Vec::new();
    let mut col = 0;
    for row in 0..a.rows() {
        if col == n {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in col..n {
                let x = h.get(row, j);
                if ring.is_zero(x) {
                    continue;
                }
                if best.map_or(true, |b| ring.norm(x) < ring.norm(h.get(row, b))) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            let mut done = true;
            for j in col..n {
                if j == b || ring.is_zero(h.get(row, j)) {
                    continue;
                }
                let (q, r) = ring.euclid_div(h.get(row, j), h.get(row, b));
                let mq = ring.neg(&q);
                h.col_axpy(j, b, &mq);
                v.col_axpy(j, b, &mq);
                if let Some(vi) = v_inv.as_mut() {
                    // col_j -= q col_b on v means row_b += q row_j on its inverse
                    vi.row_axpy(b, j, &q);
                }
                if !ring.is_zero(&r) {
                    done = false;
                }
            }
            if done {
                h.swap_cols(col, b);
                v.swap_cols(col, b);
                if let Some(vi) = v_inv.as_mut() {
                    vi.swap_rows(col, b);
                }
                let u = ring.normalizing_unit(h.get(row, col));
                if !ring.is_one(&u) {
                    h.scale_col(col, &u);
                    v.scale_col(col, &u);
                    if let Some(vi) = v_inv.as_mut() {
                        vi.scale_row(col, &ring.inv(&u).expect("unit"));
                    }
                }
                pivot_rows.push(row);
                col += 1;
                break;
            }
        }
    }
    ColumnEchelon { h, v, v_inv, pivot_rows }
}

/// Smith normal form `u * a * v = d` over `Z` or a field.
pub struct Smith {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    /// Nonzero diagonal entries `d[0][0] | d[1][1] | ...`.
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Ops<'a> {
    ring: RingSpec,
    d: &'a mut Matrix,
    u: &'a mut Matrix,
    u_inv: &'a mut Matrix,
    v: &'a mut Matrix,
    v_inv: &'a mut Matrix,
}

impl Ops<'_> {
    /// row_i += q row_t
    fn row_add(&mut self, i: usize, t: usize, q: &Scalar) {
        self.d.row_axpy(i, t, q);
        self.u.row_axpy(i, t, q);
        self.u_inv.col_axpy(t, i, &self.ring.neg(q));
    }

    /// col_j += q col_t
    fn col_add(&mut self, j: usize, t: usize, q: &Scalar) {
        self.d.col_axpy(j, t, q);
        self.v.col_axpy(j, t, q);
        self.v_inv.row_axpy(t, j, &self.ring.neg(q));
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn scale_row(&mut self, r: usize, unit: &Scalar) {
        self.d.scale_row(r, unit);
        self.u.scale_row(r, unit);
        self.u_inv.scale_col(r, &self.ring.inv(unit).expect("unit"));
    }
}

pub fn smith(a: &Matrix) -> Smith {
    let ring = a.ring();
    debug_assert!(!ring.is_composite_modulus(), "Euclidean elimination over {ring}");
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(ring, m);
    let mut u_inv = Matrix::identity(ring, m);
    let mut v = Matrix::identity(ring, n);
    let mut v_inv = Matrix::identity(ring, n);
    let mut ops = Ops { ring, d: &mut d, u: &mut u, u_inv: &mut u_inv, v: &mut v, v_inv: &mut v_inv };
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = ops.d.get(i, j);
                if !ring.is_zero(x) && best.map_or(true, |(bi, bj)| ring.norm(x) < ring.norm(ops.d.get(bi, bj))) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        ops.swap_rows(t, bi);
        ops.swap_cols(t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if ring.is_zero(ops.d.get(i, t)) {
                    continue;
                }
                let (q, r) = ring.euclid_div(ops.d.get(i, t), ops.d.get(t, t));
                ops.row_add(i, t, &ring.neg(&q));
                if !ring.is_zero(&r) {
                    ops.swap_rows(t, i);
                    clean = false;
                }
            }
            for j in t + 1..n {
                if ring.is_zero(ops.d.get(t, j)) {
                    continue;
                }
                let (q, r) = ring.euclid_div(ops.d.get(t, j), ops.d.get(t, t));
                ops.col_add(j, t, &ring.neg(&q));
                if !ring.is_zero(&r) {
                    ops.swap_cols(t, j);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    let (_, r) = ring.euclid_div(ops.d.get(i, j), ops.d.get(t, t));
                    if !ring.is_zero(&r) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => ops.row_add(t, i, &ring.one()),
                None => break,
            }
        }
        let unit = ring.normalizing_unit(ops.d.get(t, t));
        if !ring.is_one(&unit) {
            ops.scale_row(t, &unit);
        }
        t += 1;
    }
    let rank = (0..m.min(n)).take_while(|&i| !ring.is_zero(d.get(i, i))).count();
    Smith { u, u_inv, d, v, v_inv, rank }
}

/// Rank over a field, or over `Z` (rank of the fraction field extension).
pub fn rank(a: &Matrix) -> usize {
    if let Some(r) = rref_unit(a, None) {
        return r.rank();
    }
    column_echelon(a, false).rank()
}

pub(crate) fn exact_quotient(a: &num_bigint::BigInt, b: &num_bigint::BigInt) -> Option<num_bigint::BigInt> {
    if b.is_zero() {
        return None;
    }
    let (q, r) = num_integer::Integer::div_rem(a, b);
    r.is_zero().then_some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
        let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-9..=9)).collect();
        Matrix::from_i64(RingSpec::Integers, rows, cols, &entries)
    }

    #[test]
    fn smith_small_cases() {
        let z = RingSpec::Integers;
        let s = smith(&Matrix::from_i64(z, 2, 2, &[2, 0, 0, 3]));
        assert_eq!(s.d, Matrix::from_i64(z, 2, 2, &[1, 0, 0, 6]));
        let s = smith(&Matrix::zeros(z, 2, 3));
        assert!(s.d.is_zero());
        let s = smith(&Matrix::from_i64(z, 1, 1, &[1]));
        assert!(s.u.is_identity() && s.v.is_identity());
    }

    #[test]
    fn smith_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            let a = random_int_matrix(&mut rng, r, c);
            let s = smith(&a);
            assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
            assert!(s.u.mul(&s.u_inv).is_identity());
            assert!(s.v.mul(&s.v_inv).is_identity());
            let diag = s.diagonal();
            for i in 0..diag.len() {
                for j in 0..diag.len() {
                    if i != j && i < r && j < c {
                        assert!(RingSpec::Integers.is_zero(s.d.get(i, j)));
                    }
                }
            }
            for w in diag.windows(2) {
                let (Scalar::Int(x), Scalar::Int(y)) = (&w[0], &w[1]) else { unreachable!() };
                if !x.is_zero() {
                    assert!((y % x).is_zero());
                }
            }
        }
    }

    #[test]
    fn column_echelon_kernel_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (r, c) = (rng.gen_range(1..5), rng.gen_range(1..7));
            let a = random_int_matrix(&mut rng, r, c);
            let e = column_echelon(&a, true);
            assert_eq!(a.mul(&e.v), e.h);
            assert!(e.v.mul(e.v_inv.as_ref().unwrap()).is_identity());
            for j in e.rank()..a.cols() {
                assert!(crate::linalg::matrix::vec_is_zero(RingSpec::Integers, &e.h.column(j)));
            }
        }
    }
}
