//! Non-negatively graded chain complexes, their tensor product and homology.

use std::sync::Arc;

use crate::coefficients::RingSpec;
use crate::error::{Error, Result};
use crate::linalg::{homology_of, inverse, BasedModule, Homology, Matrix};

/// `C_0 <- C_1 <- ... <- C_top`; every degree above `top` is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub ring: RingSpec,
    pub modules: Vec<BasedModule>,
    /// `differentials[k]` is `d_{k+1}: C_{k+1} -> C_k`.
    pub differentials: Vec<Matrix>,
}

impl ChainComplex {
    /// Shape-checked construction; `d∘d = 0` is left to [`verify_complex`].
    pub fn new(ring: RingSpec, modules: Vec<BasedModule>, differentials: Vec<Matrix>) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::InvalidRange("a complex needs at least degree 0".into()));
        }
        if differentials.len() + 1 != modules.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} modules need {} differentials, got {}",
                modules.len(),
                modules.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.ring() != ring || modules[k].ring != ring || modules[k + 1].ring != ring {
                return Err(Error::RingMismatch(ring.to_string(), d.ring().to_string()));
            }
            if d.rows() != modules[k].rank() || d.cols() != modules[k + 1].rank() {
                return Err(Error::DimensionMismatch(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    k + 1,
                    d.rows(),
                    d.cols(),
                    modules[k].rank(),
                    modules[k + 1].rank()
                )));
            }
        }
        Ok(ChainComplex { ring, modules, differentials })
    }

    pub fn from_matrices(ring: RingSpec, ranks: &[usize], differentials: Vec<Matrix>) -> Result<Self> {
        let modules = ranks.iter().enumerate().map(|(n, &r)| BasedModule::numbered(ring, r, &format!("c{n}_"))).collect();
        Self::new(ring, modules, differentials)
    }

    pub fn zero(ring: RingSpec, top: usize) -> Self {
        Self::from_matrices(ring, &vec![0; top + 1], (0..top).map(|_| Matrix::zeros(ring, 0, 0)).collect())
            .expect("zero complex")
    }

    /// `(R, 0)`: the ring in degree 0.
    pub fn unit(ring: RingSpec, top: usize) -> Self {
        let mut ranks = vec![0; top + 1];
        ranks[0] = 1;
        let diffs = (0..top).map(|k| Matrix::zeros(ring, ranks[k], ranks[k + 1])).collect();
        Self::from_matrices(ring, &ranks, diffs).expect("unit complex")
    }

    pub fn top(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.modules.get(n).map_or(0, BasedModule::rank)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(BasedModule::rank).collect()
    }

    /// `d_n: C_n -> C_{n-1}`, the zero map where either side vanishes.
    pub fn d(&self, n: usize) -> Matrix {
        if n == 0 {
            return Matrix::zeros(self.ring, 0, self.rank(0));
        }
        match self.differentials.get(n - 1) {
            Some(d) => d.clone(),
            None => Matrix::zeros(self.ring, self.rank(n - 1), self.rank(n)),
        }
    }

    /// Degrees `0..=top` only.
    pub fn truncate(&self, top: usize) -> ChainComplex {
        let top = top.min(self.top());
        ChainComplex {
            ring: self.ring,
            modules: self.modules[..=top].to_vec(),
            differentials: self.differentials[..top].to_vec(),
        }
    }

    /// Truncate or pad with zero modules so that the top degree is exactly `top`.
    pub fn with_top(&self, top: usize) -> ChainComplex {
        let mut c = self.truncate(top);
        while c.top() < top {
            let n = c.top() + 1;
            c.differentials.push(Matrix::zeros(self.ring, c.rank(n - 1), 0));
            c.modules.push(BasedModule::zero(self.ring));
        }
        c
    }
}

/// Degrees `n >= 2` where `d_{n-1} ∘ d_n` is non-zero.
pub fn verify_complex(c: &ChainComplex) -> Vec<usize> {
    (2..=c.top()).filter(|&n| !c.d(n - 1).mul(&c.d(n)).is_zero()).collect()
}

/// A complex that passes [`verify_complex`].
pub fn checked_complex(c: ChainComplex) -> Result<ChainComplex> {
    match verify_complex(&c).first() {
        Some(n) => Err(Error::NotAComplex(format!("d_{} ∘ d_{n} != 0", n - 1))),
        None => Ok(c),
    }
}

pub fn chain_homology(c: &ChainComplex, n: usize) -> Result<Homology> {
    if n > c.top() {
        return Err(Error::DegreeOutOfRange { degree: n, top: c.top() });
    }
    homology_of(&c.d(n), &c.d(n + 1), n)
}

/// Degree-preserving map; `components[n]: C_n -> C'_n` for `n <= source.top()`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: Arc<ChainComplex>,
    pub target: Arc<ChainComplex>,
    pub components: Vec<Matrix>,
}

impl ChainMap {
    pub fn new(source: Arc<ChainComplex>, target: Arc<ChainComplex>, components: Vec<Matrix>) -> Result<Self> {
        if components.len() != source.top() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} components for a complex of top degree {}",
                components.len(),
                source.top()
            )));
        }
        for (n, f) in components.iter().enumerate() {
            if f.rows() != target.rank(n) || f.cols() != source.rank(n) {
                return Err(Error::DimensionMismatch(format!("component {n} is {}x{}", f.rows(), f.cols())));
            }
        }
        Ok(ChainMap { source, target, components })
    }

    pub fn identity(c: &Arc<ChainComplex>) -> Self {
        let components = (0..=c.top()).map(|n| Matrix::identity(c.ring, c.rank(n))).collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    pub fn component(&self, n: usize) -> Matrix {
        match self.components.get(n) {
            Some(f) => f.clone(),
            None => Matrix::zeros(self.source.ring, self.target.rank(n), self.source.rank(n)),
        }
    }

    /// Degrees `n >= 1` (up to both tops) where `d f_n != f_{n-1} d`.
    pub fn non_commuting_degrees(&self) -> Vec<usize> {
        let top = self.source.top().min(self.target.top());
        (1..=top)
            .filter(|&n| self.target.d(n).mul(&self.component(n)) != self.component(n - 1).mul(&self.source.d(n)))
            .collect()
    }

    pub fn is_chain_map(&self) -> bool {
        self.non_commuting_degrees().is_empty()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ChainMap) -> ChainMap {
        let components = (0..=inner.source.top()).map(|n| self.component(n).mul(&inner.component(n))).collect();
        ChainMap { source: inner.source.clone(), target: self.target.clone(), components }
    }

    pub fn inverse(&self) -> Result<ChainMap> {
        let components = self.components.iter().map(inverse).collect::<Result<Vec<_>>>()?;
        Ok(ChainMap { source: self.target.clone(), target: self.source.clone(), components })
    }

    pub fn is_iso(&self) -> bool {
        self.source.top() == self.target.top() && self.components.iter().all(|f| inverse(f).is_ok())
    }

    pub fn equals(&self, other: &ChainMap) -> bool {
        self.components == other.components
    }
}

/// Layout of `(C ⊗ C')_n = ⊕_{p+q=n} C_p ⊗ C'_q`, blocks by increasing `p`.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl TensorLayout {
    pub fn new(left: &ChainComplex, right: &ChainComplex) -> Self {
        TensorLayout { left: left.ranks(), right: right.ranks() }
    }

    pub fn top(&self) -> usize {
        self.left.len() + self.right.len() - 2
    }

    fn l(&self, p: usize) -> usize {
        self.left.get(p).copied().unwrap_or(0)
    }

    fn r(&self, q: usize) -> usize {
        self.right.get(q).copied().unwrap_or(0)
    }

    /// Offset of basis element `(i ∈ C_p) ⊗ (j ∈ C'_q)` in degree `p + q`.
    pub fn index(&self, p: usize, i: usize, q: usize, j: usize) -> usize {
        self.offset(p, q) + i * self.r(q) + j
    }

    pub fn offset(&self, p: usize, q: usize) -> usize {
        (0..p).map(|a| self.l(a) * self.r(p + q - a)).sum()
    }

    pub fn rank(&self, n: usize) -> usize {
        (0..=n).map(|p| self.l(p) * self.r(n - p)).sum()
    }

    /// Every `(p, i, q, j)` in degree `n`, in basis order.
    pub fn entries(&self, n: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.rank(n));
        for p in 0..=n {
            let q = n - p;
            for i in 0..self.l(p) {
                for j in 0..self.r(q) {
                    out.push((p, i, q, j));
                }
            }
        }
        out
    }
}

pub fn tensor_complexes(c: &ChainComplex, c2: &ChainComplex) -> Result<ChainComplex> {
    if c.ring != c2.ring {
        return Err(Error::RingMismatch(c.ring.to_string(), c2.ring.to_string()));
    }
    let ring = c.ring;
    let lay = TensorLayout::new(c, c2);
    let top = lay.top();
    let mut modules = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let labels = lay
            .entries(n)
            .into_iter()
            .map(|(p, i, q, j)| format!("({p}|{}⊗{q}|{})", c.modules[p].labels[i], c2.modules[q].labels[j]))
            .collect();
        modules.push(BasedModule { ring, labels });
    }
    let mut differentials = Vec::with_capacity(top);
    for n in 1..=top {
        let mut d = Matrix::zeros(ring, lay.rank(n - 1), lay.rank(n));
        for p in 0..=n {
            let q = n - p;
            if c.rank(p) == 0 || c2.rank(q) == 0 {
                continue;
            }
            if p >= 1 {
                let dp = c.d(p);
                for i in 0..c.rank(p) {
                    for j in 0..c2.rank(q) {
                        let col = lay.index(p, i, q, j);
                        for k in 0..c.rank(p - 1) {
                            let x = dp.get(k, i);
                            if !ring.is_zero(x) {
                                d.add_to(lay.index(p - 1, k, q, j), col, x);
                            }
                        }
                    }
                }
            }
            if q >= 1 {
                let dq = c2.d(q);
                let sign = if p % 2 == 0 { ring.one() } else { ring.from_i64(-1) };
                for i in 0..c.rank(p) {
                    for j in 0..c2.rank(q) {
                        let col = lay.index(p, i, q, j);
                        for k in 0..c2.rank(q - 1) {
                            let x = dq.get(k, j);
                            if !ring.is_zero(x) {
                                d.add_to(lay.index(p, i, q - 1, k), col, &ring.mul(&sign, x));
                            }
                        }
                    }
                }
            }
        }
        differentials.push(d);
    }
    ChainComplex::new(ring, modules, differentials)
}

/// `f ⊗ g` on tensor complexes built by [`tensor_complexes`].
pub fn tensor_chain_maps(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let source = Arc::new(tensor_complexes(&f.source, &g.source)?);
    let target = Arc::new(tensor_complexes(&f.target, &g.target)?);
    let ls = TensorLayout::new(&f.source, &g.source);
    let lt = TensorLayout::new(&f.target, &g.target);
    let ring = source.ring;
    let mut components = Vec::with_capacity(source.top() + 1);
    for n in 0..=source.top() {
        let mut m = Matrix::zeros(ring, target.rank(n), source.rank(n));
        for p in 0..=n {
            let q = n - p;
            let block = f.component(p).kron(&g.component(q));
            let (r0, c0) = (lt.offset(p, q), ls.offset(p, q));
            for a in 0..block.rows() {
                for b in 0..block.cols() {
                    let x = block.get(a, b);
                    if !ring.is_zero(x) {
                        m.set(r0 + a, c0 + b, x.clone());
                    }
                }
            }
        }
        components.push(m);
    }
    ChainMap::new(source, target, components)
}

/// `τ(c ⊗ c') = (-1)^{pq} c' ⊗ c`.
pub fn twist_map(c: &ChainComplex, c2: &ChainComplex) -> Result<ChainMap> {
    let source = Arc::new(tensor_complexes(c, c2)?);
    let target = Arc::new(tensor_complexes(c2, c)?);
    let ls = TensorLayout::new(c, c2);
    let lt = TensorLayout::new(c2, c);
    let ring = c.ring;
    let mut components = Vec::with_capacity(source.top() + 1);
    for n in 0..=source.top() {
        let mut m = Matrix::zeros(ring, target.rank(n), source.rank(n));
        for (col, (p, i, q, j)) in ls.entries(n).into_iter().enumerate() {
            let sign = if (p * q) % 2 == 0 { ring.one() } else { ring.from_i64(-1) };
            m.set(lt.index(q, j, p, i), col, sign);
        }
        components.push(m);
    }
    ChainMap::new(source, target, components)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta1_normalized(ring: RingSpec) -> ChainComplex {
        ChainComplex::from_matrices(ring, &[2, 1], vec![Matrix::from_i64(ring, 2, 1, &[1, -1])]).unwrap()
    }

    #[test]
    fn verify_examples() {
        let z = RingSpec::Integers;
        assert!(verify_complex(&delta1_normalized(z)).is_empty());
        assert!(verify_complex(&ChainComplex::zero(z, 3)).is_empty());
        let bad = ChainComplex::from_matrices(
            z,
            &[1, 1, 1],
            vec![Matrix::from_i64(z, 1, 1, &[1]), Matrix::from_i64(z, 1, 1, &[1])],
        )
        .unwrap();
        assert_eq!(verify_complex(&bad), vec![2]);
    }

    #[test]
    fn tensor_ranks_and_twist() {
        let z = RingSpec::Integers;
        let c = delta1_normalized(z);
        let t = tensor_complexes(&c, &c).unwrap();
        assert_eq!(&t.ranks()[..3], &[4, 4, 1]);
        assert!(verify_complex(&t).is_empty());
        let tw = twist_map(&c, &c).unwrap();
        assert!(tw.is_chain_map());
        // (1,1) block carries the Koszul sign
        assert_eq!(tw.components[2].get(0, 0), &z.from_i64(-1));
        let back = twist_map(&c, &c).unwrap();
        assert!(back.compose(&tw).equals(&ChainMap::identity(&tw.source)));
        let u = tensor_complexes(&c, &ChainComplex::unit(z, 0)).unwrap();
        assert_eq!(u.ranks(), c.ranks());
    }

    #[test]
    fn homology_of_interval() {
        let z = RingSpec::Integers;
        let c = delta1_normalized(z);
        assert_eq!(chain_homology(&c, 0).unwrap().presentation.free_rank, 1);
        assert!(chain_homology(&c, 1).unwrap().is_trivial());
        assert!(matches!(chain_homology(&c, 2), Err(Error::DegreeOutOfRange { degree: 2, top: 1 })));
        assert!(chain_homology(&ChainComplex::zero(z, 2), 1).unwrap().is_trivial());
    }
}
