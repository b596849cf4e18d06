use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{digits, sparse, tensor_of, CommAlgebra, Sparse};
use crate::chain::ChainComplex;
use crate::coefficients::Scalar;
use crate::divpow::{LevelProduct, SimplicialCommAlgebra};
use crate::doldkan::project_normalized;
use crate::error::{Error, Result};
use crate::linalg::{homology_of, vec_add, vec_sub, Homology, Matrix};
use crate::simplicial::{moore_complex, SimplicialModule};

/// Largest admissible `dim(A)^(L+2)`.
pub const MEMORY_BOUND: usize = 4096;

fn check_bound(alg: &CommAlgebra, l: usize) -> Result<()> {
    let size = (alg.dim as u128).checked_pow(l as u32 + 2).unwrap_or(u128::MAX);
    if size > MEMORY_BOUND as u128 {
        return Err(Error::BoundExceeded(format!("dim^(L+2) = {}^{} exceeds {MEMORY_BOUND}", alg.dim, l + 2)));
    }
    Ok(())
}

/// Matrix `A^{⊗src} -> A^{⊗tgt}` from the image of each pure tensor of basis elements.
fn level_map(alg: &CommAlgebra, src: usize, tgt: usize, f: impl Fn(&[usize]) -> Vec<Sparse>) -> Matrix {
    let ring = alg.ring;
    let cols = alg.dim.pow(src as u32);
    let mut m = Matrix::zeros(ring, alg.dim.pow(tgt as u32), cols);
    for c in 0..cols {
        let slots = f(&digits(c, src, alg.dim));
        debug_assert_eq!(slots.len(), tgt);
        for (r, x) in tensor_of(ring, alg.dim, &slots) {
            m.add_to(r, c, &x);
        }
    }
    m
}

fn basis(alg: &CommAlgebra, i: usize) -> Sparse {
    vec![(i, alg.ring.one())]
}

/// Slots with `i` and `i + 1` multiplied.
fn merge(alg: &CommAlgebra, a: &[usize], i: usize) -> Vec<Sparse> {
    let mut out: Vec<Sparse> = a[..i].iter().map(|&x| basis(alg, x)).collect();
    out.push(alg.basis_product(a[i], a[i + 1]).to_vec());
    out.extend(a[i + 2..].iter().map(|&x| basis(alg, x)));
    out
}

/// Slots with the unit inserted after slot `i`.
fn insert_unit(alg: &CommAlgebra, a: &[usize], i: usize) -> Vec<Sparse> {
    let mut out: Vec<Sparse> = a[..=i].iter().map(|&x| basis(alg, x)).collect();
    out.push(alg.unit_sparse());
    out.extend(a[i + 1..].iter().map(|&x| basis(alg, x)));
    out
}

fn units(alg: &CommAlgebra, l: usize, offset: usize) -> Vec<Vec<Scalar>> {
    let ring = alg.ring;
    (0..=l)
        .map(|n| {
            let slots = vec![alg.unit_sparse(); n + offset];
            let mut v = vec![ring.zero(); alg.dim.pow((n + offset) as u32)];
            for (k, x) in tensor_of(ring, alg.dim, &slots) {
                v[k] = ring.add(&v[k], &x);
            }
            v
        })
        .collect()
}

/// `B_n(A) = A^{⊗(n+2)}`, faces multiply neighbours, degeneracies insert `1`.
pub fn bar_construction(alg: &Arc<CommAlgebra>, l: usize) -> Result<SimplicialCommAlgebra> {
    check_bound(alg, l)?;
    let levels = (0..=l).map(|n| crate::linalg::BasedModule::numbered(alg.ring, alg.dim.pow(n as u32 + 2), "b")).collect();
    let faces = (0..=l)
        .map(|n| (0..if n == 0 { 0 } else { n + 1 }).map(|i| level_map(alg, n + 2, n + 1, |a| merge(alg, a, i))).collect())
        .collect();
    let degeneracies =
        (0..l).map(|n| (0..=n).map(|i| level_map(alg, n + 2, n + 3, |a| insert_unit(alg, a, i))).collect()).collect();
    let x = SimplicialModule::new(alg.ring, levels, faces, degeneracies)?;
    SimplicialCommAlgebra::new(Arc::new(x), LevelProduct::TensorPower { algebra: alg.clone(), offset: 2 }, units(alg, l, 2))
}

/// `C_n(A) = A^{⊗(n+1)}` as a simplicial algebra; `d_n` wraps the last slot around.
fn cyclic_bar(alg: &Arc<CommAlgebra>, l: usize) -> Result<SimplicialCommAlgebra> {
    let levels = (0..=l).map(|n| crate::linalg::BasedModule::numbered(alg.ring, alg.dim.pow(n as u32 + 1), "c")).collect();
    let faces = (0..=l)
        .map(|n| {
            (0..if n == 0 { 0 } else { n + 1 })
                .map(|i| {
                    level_map(alg, n + 1, n, |a| {
                        if i < n {
                            merge(alg, a, i)
                        } else {
                            let mut out = vec![alg.basis_product(a[n], a[0]).to_vec()];
                            out.extend(a[1..n].iter().map(|&x| basis(alg, x)));
                            out
                        }
                    })
                })
                .collect()
        })
        .collect();
    let degeneracies =
        (0..l).map(|n| (0..=n).map(|i| level_map(alg, n + 1, n + 2, |a| insert_unit(alg, a, i))).collect()).collect();
    let x = SimplicialModule::new(alg.ring, levels, faces, degeneracies)?;
    SimplicialCommAlgebra::new(Arc::new(x), LevelProduct::TensorPower { algebra: alg.clone(), offset: 1 }, units(alg, l, 1))
}

/// The Hochschild chains of `A` together with the bar construction they are a quotient of.
#[derive(Debug)]
pub struct HochschildComplex {
    pub algebra: Arc<CommAlgebra>,
    pub bar: SimplicialCommAlgebra,
    /// `A ⊗_{A⊗A} B_•(A)` levelwise.
    pub cyclic: SimplicialCommAlgebra,
    /// Unnormalized chains of `cyclic`, the Hochschild complex.
    pub complex: Arc<ChainComplex>,
    bar_complex: Arc<ChainComplex>,
    homology: Vec<OnceLock<Result<Homology>>>,
    bar_homology: Vec<OnceLock<Result<Homology>>>,
}

pub fn hochschild_complex(alg: &Arc<CommAlgebra>, l: usize) -> Result<HochschildComplex> {
    let bar = bar_construction(alg, l)?;
    let cyclic = cyclic_bar(alg, l)?;
    let complex = Arc::new(moore_complex(&cyclic.underlying));
    let bar_complex = Arc::new(moore_complex(&bar.underlying));
    Ok(HochschildComplex {
        algebra: alg.clone(),
        bar,
        cyclic,
        complex,
        bar_complex,
        homology: (0..l).map(|_| OnceLock::new()).collect(),
        bar_homology: (0..l).map(|_| OnceLock::new()).collect(),
    })
}

fn cached<'a>(c: &ChainComplex, cache: &'a [OnceLock<Result<Homology>>], n: usize) -> Result<&'a Homology> {
    let cell = cache.get(n).ok_or(Error::DegreeOutOfRange { degree: n, top: cache.len().saturating_sub(1) })?;
    cell.get_or_init(|| homology_of(&c.d(n), &c.d(n + 1), n)).as_ref().map_err(Clone::clone)
}

impl HochschildComplex {
    pub fn truncation(&self) -> usize {
        self.cyclic.truncation()
    }

    /// `HH_n(A)` for `n <= L - 1`.
    pub fn homology(&self, n: usize) -> Result<&Homology> {
        cached(&self.complex, &self.homology, n)
    }

    /// Homology of the unnormalized bar chains, `π_n B_•(A)`.
    pub fn bar_homology(&self, n: usize) -> Result<&Homology> {
        cached(&self.bar_complex, &self.bar_homology, n)
    }

    /// `a_0 ⊗ ... ⊗ a_{n+1} ↦ (a_{n+1} a_0) ⊗ a_1 ⊗ ... ⊗ a_n`.
    pub fn projection_matrix(&self, n: usize) -> Matrix {
        let alg = &*self.algebra;
        level_map(alg, n + 2, n + 1, |a| {
            let mut out = vec![alg.basis_product(a[n + 1], a[0]).to_vec()];
            out.extend(a[1..=n].iter().map(|&x| basis(alg, x)));
            out
        })
    }

    pub fn project(&self, n: usize, v: &[Scalar]) -> Vec<Scalar> {
        let ring = self.algebra.ring;
        let alg = &*self.algebra;
        let mut out = vec![ring.zero(); self.cyclic.rank(n)];
        for (c, x) in sparse(ring, v) {
            let a = digits(c, n + 2, alg.dim);
            let mut slots = vec![alg.basis_product(a[n + 1], a[0]).to_vec()];
            slots.extend(a[1..=n].iter().map(|&x| basis(alg, x)));
            for (r, y) in tensor_of(ring, alg.dim, &slots) {
                ring.add_mul_assign(&mut out[r], &x, &y);
            }
        }
        out
    }

    /// The section appending `1` in the last slot.
    pub fn section(&self, n: usize, v: &[Scalar]) -> Vec<Scalar> {
        let ring = self.algebra.ring;
        let alg = &*self.algebra;
        let unit = alg.unit_sparse();
        let mut out = vec![ring.zero(); self.bar.rank(n)];
        for (c, x) in sparse(ring, v) {
            for (t, u) in &unit {
                ring.add_mul_assign(&mut out[c * alg.dim + t], &x, u);
            }
        }
        out
    }

    /// A random preimage of `v` under the projection.
    pub fn random_lift<R: Rng>(&self, rng: &mut R, n: usize, v: &[Scalar]) -> Vec<Scalar> {
        let ring = self.algebra.ring;
        let r = crate::random::vector(rng, ring, self.bar.rank(n), 2);
        let base = self.section(n, v);
        vec_add(ring, &base, &vec_sub(ring, &r, &self.section(n, &self.project(n, &r))))
    }

    /// `π(γ_i(P lift))` in level `n i` of the Hochschild chains.
    pub fn power_of_lift(&self, n: usize, lift: &[Scalar], i: usize) -> Result<Vec<Scalar>> {
        let normalized = project_normalized(&self.bar.underlying, n, lift);
        let g = self.bar.divided_power_cycle(n, &normalized, i)?;
        Ok(self.project(n * i, &g))
    }

    /// `γ_i(P z)` computed directly on the Hochschild side.
    pub fn direct_power(&self, n: usize, z: &[Scalar], i: usize) -> Result<Vec<Scalar>> {
        let normalized = project_normalized(&self.cyclic.underlying, n, z);
        self.cyclic.divided_power_cycle(n, &normalized, i)
    }
}

pub fn hochschild_homology(hc: &HochschildComplex, n: usize) -> Result<&Homology> {
    hc.homology(n)
}

/// `γ_i` of the class with coordinates `class` in `HH_n`, as coordinates in `HH_{ni}`.
///
/// Computed through the bar lift and cross-checked against the direct value.
pub fn hh_divided_power(hc: &HochschildComplex, n: usize, class: &[Scalar], i: usize) -> Result<Vec<Scalar>> {
    let target = n * i;
    if target + 1 > hc.truncation() {
        return Err(Error::TruncationTooSmall { needed: target + 1, available: hc.truncation() });
    }
    let h = hc.homology(n)?;
    let z = h.cycle_from_class(class);
    let via_bar = hc.power_of_lift(n, &hc.section(n, &z), i)?;
    let direct = hc.direct_power(n, &z, i)?;
    if via_bar != direct {
        return Err(Error::InternalInconsistency(format!("bar route and Hochschild route differ for γ_{i} in degree {n}")));
    }
    let ht = hc.homology(target)?;
    if !ht.is_cycle(&direct) {
        return Err(Error::NotACycle(target));
    }
    ht.class_of(&direct)
}

/// Trials in which `γ_i` changes class when the representative is moved by a
/// random boundary and lifted to the bar construction at random.
pub fn hh_gamma_stability(
    hc: &HochschildComplex,
    n: usize,
    class: &[Scalar],
    i: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let ring = hc.algebra.ring;
    let expected = hh_divided_power(hc, n, class, i)?;
    let z = hc.homology(n)?.cycle_from_class(class);
    let ht = hc.homology(n * i)?;
    let d = hc.complex.d(n + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for t in 0..trials {
        let b = crate::random::vector(&mut rng, ring, d.cols(), 2);
        let moved = vec_add(ring, &z, &d.apply(&b));
        let lift = hc.random_lift(&mut rng, n, &moved);
        let g = hc.power_of_lift(n, &lift, i)?;
        if !ht.is_cycle(&g) || ht.class_of(&g)? != expected {
            bad.push(t);
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::RingSpec;
    use crate::simplicial::verify_simplicial;

    #[test]
    fn dual_numbers() {
        let f2 = RingSpec::integers_mod(2).unwrap();
        let a = Arc::new(CommAlgebra::truncated_polynomial(f2, 2));
        let hc = hochschild_complex(&a, 3).unwrap();
        assert_eq!(hc.bar.underlying.ranks(), vec![4, 8, 16, 32]);
        assert_eq!(hc.cyclic.underlying.ranks(), vec![2, 4, 8, 16]);
        assert!(verify_simplicial(&hc.bar.underlying).is_empty());
        assert!(verify_simplicial(&hc.cyclic.underlying).is_empty());
        assert!(hc.bar.law_violations(10, 3).is_empty());
        assert!(hc.cyclic.law_violations(10, 3).is_empty());
        for n in 1..3 {
            assert!(hc.bar_homology(n).unwrap().is_trivial());
        }
        assert_eq!(hc.homology(0).unwrap().presentation.free_rank, 2);
        assert_eq!(hc.homology(1).unwrap().presentation.free_rank, 2);
        for n in 0..=3 {
            let p = hc.projection_matrix(n);
            for (k, col) in p.columns().into_iter().enumerate() {
                let e = crate::linalg::unit_vector(f2, hc.bar.rank(n), k);
                assert_eq!(hc.project(n, &e), col);
            }
        }
        assert!(bar_construction(&a, 11).is_err());
        for k in 0..2 {
            let class = crate::linalg::unit_vector(f2, 2, k);
            assert!(hh_gamma_stability(&hc, 1, &class, 2, 5, 1).unwrap().is_empty());
        }
    }
}
