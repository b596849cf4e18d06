//! Kernels, linear solves and free submodules.
//!
//! Composite `Z/m` goes through integer lifts: `A x = 0 (mod m)` is the
//! integer system `[A | m I] (x, y) = 0`, whose solution lattice projects onto
//! a lattice `Z^n ⊇ L ⊇ m Z^n`. The kernel is `L / m Z^n`.

use num_bigint::BigInt;
use num_traits::One;

use crate::coefficients::{RingSpec, Scalar};
use crate::error::{Error, Result};
use crate::linalg::matrix::Matrix;
use crate::linalg::reduce::{column_echelon, exact_quotient, rref_unit, smith};

/// A free submodule of `R^n` with a chosen basis and a left inverse of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    /// `n x k`, columns are the basis.
    pub basis: Matrix,
    /// `k x n` with `left_inverse * basis = I`.
    pub left_inverse: Matrix,
}

impl Submodule {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn full(ring: RingSpec, n: usize) -> Self {
        Submodule { basis: Matrix::identity(ring, n), left_inverse: Matrix::identity(ring, n) }
    }

    /// Coordinates of a member; meaningless for non-members.
    pub fn coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.left_inverse.apply(v)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.basis.apply(&self.coords(v)) == v
    }

    /// Matrix of a map `f: R^n -> R^n'` restricted to `self` and corestricted
    /// to `target`, assuming `f(self) ⊆ target`.
    pub fn restrict(&self, f: &Matrix, target: &Submodule) -> Matrix {
        target.left_inverse.mul(&f.mul(&self.basis))
    }
}

pub fn kernel(a: &Matrix) -> Result<Submodule> {
    let ring = a.ring();
    if let Some(r) = rref_unit(a, None) {
        let free = r.free_columns();
        let n = a.cols();
        let mut basis = Matrix::zeros(ring, n, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, ring.one());
            for (row, &p) in r.pivots.iter().enumerate() {
                let x = &r.rows[row][f];
                if !ring.is_zero(x) {
                    basis.set(p, k, ring.neg(x));
                }
            }
        }
        let mut left_inverse = Matrix::zeros(ring, free.len(), n);
        for (k, &f) in free.iter().enumerate() {
            left_inverse.set(k, f, ring.one());
        }
        return Ok(Submodule { basis, left_inverse });
    }
    if ring.is_composite_modulus() {
        return kernel_mod(a);
    }
    let e = column_echelon(a, true);
    let idx: Vec<usize> = (e.rank()..a.cols()).collect();
    let v_inv = e.v_inv.expect("tracked");
    Ok(Submodule { basis: e.v.select_cols(&idx), left_inverse: v_inv.select_rows(&idx) })
}

fn modulus(ring: RingSpec) -> u64 {
    match ring {
        RingSpec::IntegersMod(m) => m,
        _ => unreachable!(),
    }
}

/// `[lift(a) | m I]` over the integers.
fn lifted_with_relations(a: &Matrix) -> Matrix {
    let ring = a.ring();
    let m = modulus(ring);
    let lift = a.lift_to_integers().expect("residues lift");
    let rel = Matrix::identity(RingSpec::Integers, a.rows()).scale(&Scalar::Int(BigInt::from(m)));
    Matrix::hstack(RingSpec::Integers, a.rows(), &[&lift, &rel])
}

/// Integer lattice `{x : a x = 0 mod m}` in Smith form: `u * basis = diag(d)`.
pub(crate) struct KernelLattice {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Vec<BigInt>,
}

pub(crate) fn kernel_lattice(a: &Matrix) -> KernelLattice {
    let n = a.cols();
    let big = lifted_with_relations(a);
    let e = column_echelon(&big, false);
    let idx: Vec<usize> = (e.rank()..big.cols()).collect();
    let gens = e.v.select_cols(&idx).select_rows(&(0..n).collect::<Vec<_>>());
    let s = smith(&gens);
    let d = (0..n).map(|i| s.d.int_entry(i, i).clone()).collect();
    KernelLattice { u: s.u, u_inv: s.u_inv, d }
}

fn kernel_mod(a: &Matrix) -> Result<Submodule> {
    let ring = a.ring();
    let m = BigInt::from(modulus(ring));
    let lat = kernel_lattice(a);
    let mut keep = Vec::new();
    for (i, d) in lat.d.iter().enumerate() {
        if d.is_one() {
            keep.push(i);
        } else if *d != m {
            return Err(Error::NotFree(ring.to_string()));
        }
    }
    Ok(Submodule {
        basis: lat.u_inv.select_cols(&keep).change_ring(ring),
        left_inverse: lat.u.select_rows(&keep).change_ring(ring),
    })
}

/// One solution `x` of `a x = b` (all columns of `b` at once), if any.
pub fn solve(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let ring = a.ring();
    assert_eq!(a.rows(), b.rows(), "solve: row counts");
    if let Some(r) = rref_unit(a, Some(b)) {
        let k = r.rank();
        let mut x = Matrix::zeros(ring, a.cols(), b.cols());
        for row in &r.rows[k..] {
            if row[a.cols()..].iter().any(|v| !ring.is_zero(v)) {
                return None;
            }
        }
        for (row, &p) in r.pivots.iter().enumerate() {
            for j in 0..b.cols() {
                x.set(p, j, r.rows[row][a.cols() + j].clone());
            }
        }
        return Some(x);
    }
    if ring.is_composite_modulus() {
        let big = lifted_with_relations(a);
        let rhs = b.lift_to_integers().expect("residues lift");
        let sol = solve_euclid(&big, &rhs)?;
        return Some(sol.select_rows(&(0..a.cols()).collect::<Vec<_>>()).change_ring(ring));
    }
    solve_euclid(a, b)
}

fn solve_euclid(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let ring = a.ring();
    let e = column_echelon(a, false);
    let mut y = Matrix::zeros(ring, a.cols(), b.cols());
    for j in 0..b.cols() {
        let mut residual = b.column(j);
        for (k, &p) in e.pivot_rows.iter().enumerate() {
            if ring.is_zero(&residual[p]) {
                continue;
            }
            let c = ring.div(&residual[p], e.h.get(p, k)).ok()?;
            for (i, r) in residual.iter_mut().enumerate() {
                let h = e.h.get(i, k);
                if !ring.is_zero(h) {
                    *r = ring.sub(r, &ring.mul(&c, h));
                }
            }
            y.set(k, j, c);
        }
        if residual.iter().any(|r| !ring.is_zero(r)) {
            return None;
        }
    }
    Some(e.v.mul(&y))
}

pub fn in_image(a: &Matrix, v: &[Scalar]) -> bool {
    solve(a, &Matrix::from_column(a.ring(), v)).is_some()
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare(format!("{}x{}", a.rows(), a.cols())));
    }
    let ring = a.ring();
    let x = solve(a, &Matrix::identity(ring, a.rows()))
        .ok_or_else(|| Error::NotInvertible(format!("{}x{} matrix over {ring}", a.rows(), a.cols())))?;
    if !x.mul(a).is_identity() {
        return Err(Error::NotInvertible(format!("{}x{} matrix over {ring}", a.rows(), a.cols())));
    }
    Ok(x)
}

/// Determinant over `Z` or a field, or `None` over composite `Z/m`.
pub fn determinant(a: &Matrix) -> Option<Scalar> {
    let ring = a.ring();
    if !a.is_square() || ring.is_composite_modulus() {
        return None;
    }
    let field = if ring == RingSpec::Integers { RingSpec::Rationals } else { ring };
    let mut m = if ring == RingSpec::Integers { a.change_ring(field) } else { a.clone() };
    let n = m.rows();
    let mut det = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !field.is_zero(m.get(r, c))) else {
            return Some(ring.zero());
        };
        if p != c {
            m.swap_rows(p, c);
            det = field.neg(&det);
        }
        det = field.mul(&det, m.get(c, c));
        let inv = field.inv(m.get(c, c)).expect("field pivot");
        for r in c + 1..n {
            if !field.is_zero(m.get(r, c)) {
                let f = field.neg(&field.mul(m.get(r, c), &inv));
                m.row_axpy(r, c, &f);
            }
        }
    }
    Some(match ring {
        RingSpec::Integers => ring.from_bigint(&field.lift(&det).expect("integral determinant")),
        _ => det,
    })
}

pub(crate) fn exact_row_division(m: &Matrix, divisors: &[BigInt]) -> Matrix {
    let mut out = m.clone();
    for (i, d) in divisors.iter().enumerate() {
        for j in 0..m.cols() {
            let q = exact_quotient(m.int_entry(i, j), d).expect("lattice coordinates are integral");
            out.set(i, j, Scalar::Int(q));
        }
    }
    out
}
