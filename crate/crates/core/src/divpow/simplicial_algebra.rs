use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{tensor_power_mul, CommAlgebra};
use crate::coefficients::{RingSpec, Scalar};
use crate::combinat::{block_shuffle_cosets, block_shuffles, degeneracy_word, shuffles, SignedPermutation};
use crate::error::{Error, Result};
use crate::linalg::{unit_vector, vec_add, vec_sub, Matrix};
use crate::simplicial::{constant_module, SimplicialModule};

/// How the levelwise product is stored.
#[derive(Clone, Debug)]
pub enum LevelProduct {
    /// `rank x rank²` matrices, column `a * rank + b` holding `e_a e_b`.
    Matrices(Vec<Matrix>),
    /// Componentwise on `A^{⊗(n + offset)}`.
    TensorPower { algebra: Arc<CommAlgebra>, offset: usize },
}

/// A simplicial module with a levelwise commutative product.
#[derive(Clone, Debug)]
pub struct SimplicialCommAlgebra {
    pub underlying: Arc<SimplicialModule>,
    pub product: LevelProduct,
    pub units: Vec<Vec<Scalar>>,
}

const EXHAUSTIVE_PAIRS: usize = 4096;
const EXHAUSTIVE_TRIPLES: usize = 40_000;

impl SimplicialCommAlgebra {
    pub fn new(underlying: Arc<SimplicialModule>, product: LevelProduct, units: Vec<Vec<Scalar>>) -> Result<Self> {
        let l = underlying.truncation();
        if units.len() != l + 1 || (0..=l).any(|n| units[n].len() != underlying.rank(n)) {
            return Err(Error::DimensionMismatch("one unit vector per level".into()));
        }
        match &product {
            LevelProduct::Matrices(m) => {
                if m.len() != l + 1
                    || (0..=l).any(|n| m[n].rows() != underlying.rank(n) || m[n].cols() != underlying.rank(n).pow(2))
                {
                    return Err(Error::DimensionMismatch("product matrices must be rank x rank^2 per level".into()));
                }
            }
            LevelProduct::TensorPower { algebra, offset } => {
                if (0..=l).any(|n| algebra.dim.pow((n + offset) as u32) != underlying.rank(n)) {
                    return Err(Error::DimensionMismatch("level ranks must be powers of the algebra dimension".into()));
                }
            }
        }
        Ok(SimplicialCommAlgebra { underlying, product, units })
    }

    /// `R̲` with `1 * 1 = 1`.
    pub fn constant(ring: RingSpec, l: usize) -> Self {
        let m = (0..=l).map(|_| Matrix::identity(ring, 1)).collect();
        let units = (0..=l).map(|_| vec![ring.one()]).collect();
        Self::new(Arc::new(constant_module(ring, l)), LevelProduct::Matrices(m), units).expect("constant algebra")
    }

    pub fn ring(&self) -> RingSpec {
        self.underlying.ring
    }

    pub fn truncation(&self) -> usize {
        self.underlying.truncation()
    }

    pub fn rank(&self, n: usize) -> usize {
        self.underlying.rank(n)
    }

    pub fn unit(&self, n: usize) -> &[Scalar] {
        &self.units[n]
    }

    pub fn mul(&self, n: usize, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let ring = self.ring();
        match &self.product {
            LevelProduct::TensorPower { algebra, offset } => tensor_power_mul(algebra, n + offset, a, b),
            LevelProduct::Matrices(m) => {
                let r = self.rank(n);
                let mut out = vec![ring.zero(); r];
                for (i, x) in a.iter().enumerate().filter(|(_, x)| !ring.is_zero(x)) {
                    for (j, y) in b.iter().enumerate().filter(|(_, y)| !ring.is_zero(y)) {
                        let xy = ring.mul(x, y);
                        for (k, o) in out.iter_mut().enumerate() {
                            let c = m[n].get(k, i * r + j);
                            if !ring.is_zero(c) {
                                ring.add_mul_assign(o, &xy, c);
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// The product at level `n` as a `rank x rank²` matrix.
    pub fn product_matrix(&self, n: usize) -> Matrix {
        if let LevelProduct::Matrices(m) = &self.product {
            return m[n].clone();
        }
        let ring = self.ring();
        let r = self.rank(n);
        let mut out = Matrix::zeros(ring, r, r * r);
        for i in 0..r {
            for j in 0..r {
                let v = self.mul(n, &unit_vector(ring, r, i), &unit_vector(ring, r, j));
                for (k, x) in v.into_iter().enumerate() {
                    if !ring.is_zero(&x) {
                        out.set(k, i * r + j, x);
                    }
                }
            }
        }
        out
    }

    /// Every violated law, exhaustive on basis elements when small, sampled otherwise.
    pub fn law_violations(&self, samples: usize, seed: u64) -> Vec<String> {
        let ring = self.ring();
        let x = &*self.underlying;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for n in 0..=self.truncation() {
            let r = self.rank(n);
            let e = |i: usize| unit_vector(ring, r, i);
            let pairs: Vec<(Vec<Scalar>, Vec<Scalar>)> = if r * r <= EXHAUSTIVE_PAIRS {
                (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).map(|(i, j)| (e(i), e(j))).collect()
            } else {
                (0..samples)
                    .map(|_| (crate::random::vector(&mut rng, ring, r, 3), crate::random::vector(&mut rng, ring, r, 3)))
                    .collect()
            };
            let triples: Vec<[Vec<Scalar>; 3]> = if r * r * r <= EXHAUSTIVE_TRIPLES {
                let mut t = Vec::new();
                for i in 0..r {
                    for j in 0..r {
                        for k in 0..r {
                            t.push([e(i), e(j), e(k)]);
                        }
                    }
                }
                t
            } else {
                (0..samples).map(|_| std::array::from_fn(|_| crate::random::vector(&mut rng, ring, r, 3))).collect()
            };
            for (a, b) in &pairs {
                let ab = self.mul(n, a, b);
                if ab != self.mul(n, b, a) {
                    out.push(format!("level {n}: product not commutative"));
                }
                for (i, d) in x.faces[n].iter().enumerate() {
                    if d.apply(&ab) != self.mul(n - 1, &d.apply(a), &d.apply(b)) {
                        out.push(format!("level {n}: d_{i} not multiplicative"));
                    }
                }
                if n < self.truncation() {
                    for (i, s) in x.degeneracies[n].iter().enumerate() {
                        if s.apply(&ab) != self.mul(n + 1, &s.apply(a), &s.apply(b)) {
                            out.push(format!("level {n}: s_{i} not multiplicative"));
                        }
                    }
                }
            }
            for [a, b, c] in &triples {
                if self.mul(n, &self.mul(n, a, b), c) != self.mul(n, a, &self.mul(n, b, c)) {
                    out.push(format!("level {n}: product not associative"));
                }
            }
            for i in 0..r {
                if self.mul(n, self.unit(n), &e(i)) != e(i) {
                    out.push(format!("level {n}: unit law fails on basis element {i}"));
                }
            }
            for (i, d) in x.faces[n].iter().enumerate() {
                if d.apply(self.unit(n)) != self.unit(n - 1) {
                    out.push(format!("level {n}: d_{i} does not preserve the unit"));
                }
            }
            if n < self.truncation() {
                for (i, s) in x.degeneracies[n].iter().enumerate() {
                    if s.apply(self.unit(n)) != self.unit(n + 1) {
                        out.push(format!("level {n}: s_{i} does not preserve the unit"));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// `s_{w_last} ⋯ s_{w_0} v` from level `n`.
    pub fn apply_degeneracies(&self, n: usize, word: &[usize], v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (k, &i) in word.iter().enumerate() {
            v = self.underlying.degeneracies[n + k][i].apply(&v);
        }
        v
    }

    fn need(&self, level: usize) -> Result<()> {
        if level > self.truncation() {
            return Err(Error::TruncationTooSmall { needed: level, available: self.truncation() });
        }
        Ok(())
    }

    /// `a · b = Σ_σ ε(σ) μ(s_ν a, s_μ b)` for `a` in level `p`, `b` in level `q`.
    pub fn chain_product(&self, p: usize, a: &[Scalar], q: usize, b: &[Scalar]) -> Result<Vec<Scalar>> {
        self.need(p + q)?;
        let ring = self.ring();
        let mut out = vec![ring.zero(); self.rank(p + q)];
        for sigma in shuffles(p, q) {
            let sa = self.apply_degeneracies(p, &sigma.images[p..], a);
            let sb = self.apply_degeneracies(q, &sigma.images[..p], b);
            let term = self.mul(p + q, &sa, &sb);
            out = if sigma.sign > 0 { vec_add(ring, &out, &term) } else { vec_sub(ring, &out, &term) };
        }
        Ok(out)
    }

    /// `Σ_σ ε(σ) Π_j s_{w(σ, j)} a` over the given representatives.
    pub fn shuffle_power(&self, n: usize, a: &[Scalar], i: usize, reps: &[SignedPermutation]) -> Result<Vec<Scalar>> {
        self.need(n * i)?;
        let ring = self.ring();
        let mut out = vec![ring.zero(); self.rank(n * i)];
        for sigma in reps {
            let mut term = self.apply_degeneracies(n, &degeneracy_word(sigma, 1, n, i)?, a);
            for j in 2..=i {
                let factor = self.apply_degeneracies(n, &degeneracy_word(sigma, j, n, i)?, a);
                term = self.mul(n * i, &term, &factor);
            }
            out = if sigma.sign > 0 { vec_add(ring, &out, &term) } else { vec_sub(ring, &out, &term) };
        }
        Ok(out)
    }

    fn low_powers(&self, n: usize, a: &[Scalar], i: usize) -> Result<Option<Vec<Scalar>>> {
        if n == 0 {
            return Err(Error::InvalidRange("divided powers need positive degree".into()));
        }
        self.need(n * i)?;
        Ok(match i {
            0 => Some(self.unit(0).to_vec()),
            1 => Some(a.to_vec()),
            _ => None,
        })
    }

    /// `P_i(a)`, the full `Sh(n, ..., n)` sum.
    pub fn power_map_pi(&self, n: usize, a: &[Scalar], i: usize) -> Result<Vec<Scalar>> {
        if let Some(v) = self.low_powers(n, a, i)? {
            return Ok(v);
        }
        self.shuffle_power(n, a, i, &block_shuffles(n, i)?)
    }

    /// `γ_i(a)`, the sum over canonical coset representatives of `Sh(n, ..., n) / Σ_i`.
    pub fn divided_power_cycle(&self, n: usize, a: &[Scalar], i: usize) -> Result<Vec<Scalar>> {
        if let Some(v) = self.low_powers(n, a, i)? {
            return Ok(v);
        }
        self.shuffle_power(n, a, i, &block_shuffle_cosets(n, i)?)
    }

    /// `γ_{i-1}(a) · d_0(a)`.
    pub fn derivation_rhs(&self, n: usize, a: &[Scalar], i: usize) -> Result<Vec<Scalar>> {
        let lower = self.divided_power_cycle(n, a, i - 1)?;
        let da = self.underlying.faces[n][0].apply(a);
        self.chain_product(n * (i - 1), &lower, n - 1, &da)
    }

    /// The product scaled by `c`, units kept; a mutation for negative tests.
    pub fn scaled(&self, c: &Scalar) -> Self {
        let product = (0..=self.truncation()).map(|n| self.product_matrix(n).scale(c)).collect();
        SimplicialCommAlgebra { underlying: self.underlying.clone(), product: LevelProduct::Matrices(product), units: self.units.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_algebra() {
        let z = RingSpec::Integers;
        let r = SimplicialCommAlgebra::constant(z, 3);
        assert!(r.law_violations(5, 1).is_empty());
        let one = vec![z.one()];
        assert_eq!(r.chain_product(0, &one, 0, &one).unwrap(), one);
        let bad = r.scaled(&z.from_i64(2));
        assert!(!bad.law_violations(5, 1).is_empty());
    }
}
