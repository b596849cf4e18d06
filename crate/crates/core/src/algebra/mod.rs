//! Finite-dimensional commutative algebras, bar constructions and Hochschild chains.

mod bar;

pub use bar::{
    bar_construction, hh_divided_power, hh_gamma_stability, hochschild_complex, hochschild_homology, HochschildComplex, MEMORY_BOUND,
};

use crate::coefficients::{RingSpec, Scalar};
use crate::error::{Error, Result};

pub(crate) type Sparse = Vec<(usize, Scalar)>;

/// `x_i x_j = Σ_k c_{ijk} x_k` with a chosen unit vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommAlgebra {
    pub ring: RingSpec,
    pub dim: usize,
    pub unit: Vec<Scalar>,
    products: Vec<Vec<Sparse>>,
}

impl CommAlgebra {
    /// `constants[i][j][k] = c_{ijk}`; every law is verified.
    pub fn new(ring: RingSpec, unit: Vec<Scalar>, constants: Vec<Vec<Vec<Scalar>>>) -> Result<Self> {
        let a = Self::unchecked(ring, unit, constants)?;
        match a.violations().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(a),
        }
    }

    /// Same shape checks as [`CommAlgebra::new`], laws left to [`CommAlgebra::violations`].
    pub fn unchecked(ring: RingSpec, unit: Vec<Scalar>, constants: Vec<Vec<Vec<Scalar>>>) -> Result<Self> {
        let dim = unit.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch("an algebra needs a non-empty basis".into()));
        }
        if constants.len() != dim || constants.iter().any(|r| r.len() != dim || r.iter().any(|c| c.len() != dim)) {
            return Err(Error::DimensionMismatch(format!("structure constants must be {dim}x{dim}x{dim}")));
        }
        let products = constants
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.iter().enumerate().filter(|(_, x)| !ring.is_zero(x)).map(|(k, x)| (k, x.clone())).collect())
                    .collect()
            })
            .collect();
        Ok(CommAlgebra { ring, dim, unit, products })
    }

    pub fn from_i64(ring: RingSpec, dim: usize, unit: &[i64], constants: &[i64]) -> Result<Self> {
        assert_eq!(constants.len(), dim * dim * dim);
        let unit = unit.iter().map(|&x| ring.from_i64(x)).collect();
        let c = (0..dim)
            .map(|i| (0..dim).map(|j| (0..dim).map(|k| ring.from_i64(constants[(i * dim + j) * dim + k])).collect()).collect())
            .collect();
        Self::new(ring, unit, c)
    }

    /// `R[x]/x^d` on the basis `1, x, ..., x^{d-1}`.
    pub fn truncated_polynomial(ring: RingSpec, d: usize) -> Self {
        let mut c = vec![0i64; d * d * d];
        for i in 0..d {
            for j in 0..d {
                if i + j < d {
                    c[(i * d + j) * d + i + j] = 1;
                }
            }
        }
        let mut unit = vec![0i64; d];
        unit[0] = 1;
        Self::from_i64(ring, d, &unit, &c).expect("truncated polynomial ring")
    }

    /// `R` itself.
    pub fn ground(ring: RingSpec) -> Self {
        Self::truncated_polynomial(ring, 1)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.products[i][j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.products[i][j].iter().find(|(t, _)| *t == k).map_or_else(|| self.ring.zero(), |(_, c)| c.clone())
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let ring = self.ring;
        let mut out = vec![ring.zero(); self.dim];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !ring.is_zero(x)) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !ring.is_zero(y)) {
                let xy = ring.mul(x, y);
                for (k, c) in &self.products[i][j] {
                    ring.add_mul_assign(&mut out[*k], &xy, c);
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Scalar> {
        crate::linalg::unit_vector(self.ring, self.dim, i)
    }

    /// Every violated law: commutativity, associativity, unit.
    pub fn violations(&self) -> Vec<Error> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                if (0..self.dim).any(|k| self.structure_constant(i, j, k) != self.structure_constant(j, i, k)) {
                    out.push(Error::NotCommutative(i, j));
                }
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.mul(&self.basis(i), &self.basis(j));
                for k in 0..self.dim {
                    let jk = self.mul(&self.basis(j), &self.basis(k));
                    if self.mul(&ij, &self.basis(k)) != self.mul(&self.basis(i), &jk) {
                        out.push(Error::NotAssociative(i, j, k));
                    }
                }
            }
        }
        for i in 0..self.dim {
            let e = self.basis(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                out.push(Error::BadUnit(i));
            }
        }
        out
    }

    /// Sparse coordinates of the unit.
    pub(crate) fn unit_sparse(&self) -> Sparse {
        sparse(self.ring, &self.unit)
    }
}

pub(crate) fn sparse(ring: RingSpec, v: &[Scalar]) -> Sparse {
    v.iter().enumerate().filter(|(_, x)| !ring.is_zero(x)).map(|(k, x)| (k, x.clone())).collect()
}

/// Base-`dim` digits of a basis index of `A^{⊗slots}`, slot 0 most significant.
pub(crate) fn digits(mut index: usize, slots: usize, dim: usize) -> Vec<usize> {
    let mut out = vec![0; slots];
    for k in (0..slots).rev() {
        out[k] = index % dim;
        index /= dim;
    }
    out
}

/// `v_0 ⊗ v_1 ⊗ ...` for sparse slot vectors, as a sparse vector.
pub(crate) fn tensor_of(ring: RingSpec, dim: usize, slots: &[Sparse]) -> Sparse {
    let mut acc: Sparse = vec![(0, ring.one())];
    for slot in slots {
        let mut next = Vec::with_capacity(acc.len() * slot.len());
        for (idx, c) in &acc {
            for (t, e) in slot {
                next.push((idx * dim + t, ring.mul(c, e)));
            }
        }
        acc = next;
    }
    acc
}

/// Componentwise product on `A^{⊗slots}`.
pub fn tensor_power_mul(alg: &CommAlgebra, slots: usize, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let ring = alg.ring;
    let mut out = vec![ring.zero(); a.len()];
    let nb: Vec<(usize, Vec<usize>, &Scalar)> = b
        .iter()
        .enumerate()
        .filter(|(_, y)| !ring.is_zero(y))
        .map(|(j, y)| (j, digits(j, slots, alg.dim), y))
        .collect();
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !ring.is_zero(x)) {
        let di = digits(i, slots, alg.dim);
        for (_, dj, y) in &nb {
            let factors: Vec<Sparse> = (0..slots).map(|s| alg.products[di[s]][dj[s]].clone()).collect();
            if factors.iter().any(Vec::is_empty) {
                continue;
            }
            let xy = ring.mul(x, y);
            for (k, c) in tensor_of(ring, alg.dim, &factors) {
                ring.add_mul_assign(&mut out[k], &xy, &c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laws() {
        let f2 = RingSpec::integers_mod(2).unwrap();
        let eps = CommAlgebra::truncated_polynomial(f2, 2);
        assert_eq!(eps.dim, 2);
        assert!(eps.mul(&eps.basis(1), &eps.basis(1)).iter().all(|x| f2.is_zero(x)));
        let z4 = RingSpec::integers_mod(4).unwrap();
        assert_eq!(CommAlgebra::ground(z4).dim, 1);
        // x*y = x, y*x = 0 on a 2-dimensional space
        let bad = CommAlgebra::from_i64(RingSpec::Integers, 2, &[1, 0], &[1, 0, 0, 1, 1, 0, 0, 0]);
        assert_eq!(bad.unwrap_err(), Error::NotCommutative(0, 1));
        let nounit = CommAlgebra::from_i64(RingSpec::Integers, 1, &[2], &[1]);
        assert_eq!(nounit.unwrap_err(), Error::BadUnit(0));
    }

    #[test]
    fn componentwise_product() {
        let z = RingSpec::Integers;
        let a = CommAlgebra::truncated_polynomial(z, 3);
        // (x ⊗ 1) * (x ⊗ x) = x^2 ⊗ x
        let mut u = vec![z.zero(); 9];
        u[3] = z.one();
        let mut v = vec![z.zero(); 9];
        v[4] = z.from_i64(2);
        let w = tensor_power_mul(&a, 2, &u, &v);
        let mut expect = vec![z.zero(); 9];
        expect[7] = z.from_i64(2);
        assert_eq!(w, expect);
    }
}
