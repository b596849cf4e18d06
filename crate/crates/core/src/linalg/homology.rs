use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::coefficients::{RingSpec, Scalar};
use crate::error::{Error, Result};
use crate::linalg::matrix::{vec_is_zero, Matrix};
use crate::linalg::reduce::smith;
use crate::linalg::submodule::{exact_row_division, kernel, kernel_lattice};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyPresentation {
    pub free_rank: usize,
    /// Invariant factors `d1 | d2 | ...`, each at least 2.
    #[serde(serialize_with = "crate::doc::ser_bigints")]
    pub torsion: Vec<BigInt>,
    /// One cycle per generator: torsion generators first, then free ones.
    #[serde(serialize_with = "crate::doc::ser_vectors")]
    pub cycle_reps: Vec<Vec<Scalar>>,
}

/// `ker(d_n) / im(d_next)` with a way to read off classes.
///
/// Over `Z/m` a generator of order `m` counts towards `free_rank`, and
/// `torsion` lists the orders strictly between 1 and `m`.
#[derive(Clone, Debug)]
pub struct Homology {
    pub presentation: HomologyPresentation,
    ring: RingSpec,
    degree: usize,
    d_n: Matrix,
    /// Order of each generator, zero when free over `Z` or a field.
    orders: Vec<BigInt>,
    extract: Extract,
}

#[derive(Clone, Debug)]
enum Extract {
    Direct(Matrix),
    Lattice { u: Matrix, d: Vec<BigInt>, u2: Matrix },
}

impl Homology {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator_count(&self) -> usize {
        self.orders.len()
    }

    /// Order of generator `i`, zero meaning infinite (free over `Z` or a field).
    pub fn order(&self, i: usize) -> &BigInt {
        &self.orders[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn is_cycle(&self, z: &[Scalar]) -> bool {
        vec_is_zero(self.ring, &self.d_n.apply(z))
    }

    /// Coordinates of the class of `z` on the generators, each reduced modulo its order.
    pub fn class_of(&self, z: &[Scalar]) -> Result<Vec<Scalar>> {
        if z.len() != self.d_n.cols() {
            return Err(Error::DimensionMismatch(format!(
                "chain of length {} in degree {} of rank {}",
                z.len(),
                self.degree,
                self.d_n.cols()
            )));
        }
        if !self.is_cycle(z) {
            return Err(Error::NotACycle(self.degree));
        }
        let ring = self.ring;
        let raw: Vec<Scalar> = match &self.extract {
            Extract::Direct(c) => c.apply(z),
            Extract::Lattice { u, d, u2 } => {
                let lifted: Vec<Scalar> = z.iter().map(|x| Scalar::Int(ring.lift(x).expect("residue"))).collect();
                let w = Matrix::from_column(RingSpec::Integers, &u.apply(&lifted));
                let c = exact_row_division(&w, d);
                u2.apply(&c.column(0))
            }
        };
        Ok(raw
            .into_iter()
            .zip(&self.orders)
            .map(|(x, e)| {
                if e.is_zero() {
                    return x;
                }
                let n = ring.lift(&x).expect("integral coordinate").mod_floor(e);
                ring.from_bigint(&n)
            })
            .collect())
    }

    pub fn is_boundary(&self, z: &[Scalar]) -> Result<bool> {
        Ok(vec_is_zero(self.ring, &self.class_of(z)?))
    }

    pub fn same_class(&self, a: &[Scalar], b: &[Scalar]) -> Result<bool> {
        Ok(self.class_of(a)? == self.class_of(b)?)
    }

    /// The cycle `sum_i c_i rep_i`.
    pub fn cycle_from_class(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let ring = self.ring;
        let mut out = vec![ring.zero(); self.d_n.cols()];
        for (c, rep) in coords.iter().zip(&self.presentation.cycle_reps) {
            for (o, r) in out.iter_mut().zip(rep) {
                ring.add_mul_assign(o, c, r);
            }
        }
        out
    }
}

/// Homology of `C_{n+1} --d_next--> C_n --d_n--> C_{n-1}` given by matrices.
pub fn homology_of(d_n: &Matrix, d_next: &Matrix, degree: usize) -> Result<Homology> {
    let ring = d_n.ring();
    if d_n.cols() != d_next.rows() {
        return Err(Error::DimensionMismatch(format!(
            "d_n has {} columns but d_(n+1) has {} rows",
            d_n.cols(),
            d_next.rows()
        )));
    }
    if !d_n.mul(d_next).is_zero() {
        return Err(Error::NotAComplex(format!("degree {degree}")));
    }
    if ring.is_composite_modulus() {
        return homology_lattice(d_n, d_next, degree);
    }
    let z = kernel(d_n)?;
    let rel = z.left_inverse.mul(d_next);
    let s = smith(&rel);
    let k = z.rank();
    let mut torsion_pos = Vec::new();
    let mut free_pos = Vec::new();
    for i in 0..k {
        if i < s.rank {
            let e = s.d.get(i, i);
            if !ring.is_unit(e) {
                torsion_pos.push(i);
            }
        } else {
            free_pos.push(i);
        }
    }
    let generators = z.basis.mul(&s.u_inv);
    let coords = s.u.mul(&z.left_inverse);
    let positions: Vec<usize> = torsion_pos.iter().chain(&free_pos).copied().collect();
    let orders: Vec<BigInt> = positions
        .iter()
        .map(|&i| if i < s.rank { ring.lift(s.d.get(i, i)).expect("integer invariant factor").abs() } else { BigInt::zero() })
        .collect();
    let presentation = HomologyPresentation {
        free_rank: free_pos.len(),
        torsion: orders[..torsion_pos.len()].to_vec(),
        cycle_reps: positions.iter().map(|&i| generators.column(i)).collect(),
    };
    Ok(Homology {
        presentation,
        ring,
        degree,
        d_n: d_n.clone(),
        orders,
        extract: Extract::Direct(coords.select_rows(&positions)),
    })
}

fn homology_lattice(d_n: &Matrix, d_next: &Matrix, degree: usize) -> Result<Homology> {
    let ring = d_n.ring();
    let m = BigInt::from(ring.characteristic());
    let n = d_n.cols();
    let lat = kernel_lattice(d_n);
    let zz = RingSpec::Integers;
    let rel = Matrix::hstack(
        zz,
        n,
        &[
            &d_next.lift_to_integers()?,
            &Matrix::identity(zz, n).scale(&Scalar::Int(m.clone())),
        ],
    );
    let w = exact_row_division(&lat.u.mul(&rel), &lat.d);
    let s = smith(&w);
    let mut positions = Vec::new();
    let mut orders = Vec::new();
    let mut free_rank = 0;
    let mut torsion = Vec::new();
    for i in 0..n {
        let e = s.d.int_entry(i, i).abs();
        if e.is_one() {
            continue;
        }
        if e == m {
            free_rank += 1;
        } else {
            torsion.push(e.clone());
        }
        positions.push(i);
        orders.push(e);
    }
    // generators B * u2^{-1} with B = u^{-1} diag(d)
    let mut b = lat.u_inv.clone();
    for (j, d) in lat.d.iter().enumerate() {
        b.scale_col(j, &Scalar::Int(d.clone()));
    }
    let generators = b.mul(&s.u_inv).change_ring(ring);
    Ok(Homology {
        presentation: HomologyPresentation {
            free_rank,
            torsion,
            cycle_reps: positions.iter().map(|&i| generators.column(i)).collect(),
        },
        ring,
        degree,
        d_n: d_n.clone(),
        orders,
        extract: Extract::Lattice { u: lat.u, d: lat.d, u2: s.u.select_rows(&positions) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::vec_add;

    #[test]
    fn small_integer_examples() {
        let z = RingSpec::Integers;
        let h = homology_of(&Matrix::zeros(z, 0, 2), &Matrix::zeros(z, 2, 0), 0).unwrap();
        assert_eq!(h.presentation.free_rank, 2);
        let h = homology_of(&Matrix::from_i64(z, 1, 2, &[1, -1]), &Matrix::zeros(z, 2, 0), 1).unwrap();
        assert_eq!(h.presentation.free_rank, 1);
        let rep = &h.presentation.cycle_reps[0];
        assert!(*rep == vec![z.one(), z.one()] || *rep == vec![z.from_i64(-1), z.from_i64(-1)]);
        let h = homology_of(&Matrix::zeros(z, 0, 1), &Matrix::from_i64(z, 1, 1, &[2]), 0).unwrap();
        assert_eq!(h.presentation.free_rank, 0);
        assert_eq!(h.presentation.torsion, vec![BigInt::from(2)]);
        assert!(!h.is_boundary(&[z.one()]).unwrap());
        assert!(h.is_boundary(&[z.from_i64(4)]).unwrap());
    }

    #[test]
    fn composite_modulus_presentation() {
        // Z/4 --2--> Z/4 --2--> Z/4: the middle homology is 2Z/4 / 2Z/4 = 0,
        // the cokernel end is Z/2, the kernel end is Z/2.
        let z4 = RingSpec::IntegersMod(4);
        let two = Matrix::from_i64(z4, 1, 1, &[2]);
        let h = homology_of(&two, &two, 1).unwrap();
        assert!(h.is_trivial());
        let h = homology_of(&Matrix::zeros(z4, 0, 1), &two, 0).unwrap();
        assert_eq!(h.presentation.torsion, vec![BigInt::from(2)]);
        assert!(h.is_boundary(&[z4.from_i64(2)]).unwrap());
        assert!(!h.is_boundary(&[z4.from_i64(3)]).unwrap());
        let h = homology_of(&two, &Matrix::zeros(z4, 1, 0), 1).unwrap();
        assert_eq!(h.presentation.torsion, vec![BigInt::from(2)]);
        assert!(matches!(h.class_of(&[z4.one()]), Err(Error::NotACycle(1))));
        let h = homology_of(&Matrix::zeros(z4, 0, 2), &Matrix::zeros(z4, 2, 0), 0).unwrap();
        assert_eq!(h.presentation.free_rank, 2);
    }

    #[test]
    fn classes_ignore_boundaries() {
        let z = RingSpec::Integers;
        // C_2 = Z --(2,0)--> C_1 = Z^2 --0--> 0
        let d_next = Matrix::from_i64(z, 2, 1, &[2, 0]);
        let h = homology_of(&Matrix::zeros(z, 0, 2), &d_next, 1).unwrap();
        assert_eq!(h.presentation.free_rank, 1);
        assert_eq!(h.presentation.torsion, vec![BigInt::from(2)]);
        let a = vec![z.from_i64(1), z.from_i64(3)];
        let b = vec_add(z, &a, &d_next.column(0));
        assert!(h.same_class(&a, &b).unwrap());
        let back = h.cycle_from_class(&h.class_of(&a).unwrap());
        assert!(h.same_class(&a, &back).unwrap());
    }
}
