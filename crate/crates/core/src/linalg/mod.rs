//! Exact linear algebra over the coefficient rings.

mod homology;
mod matrix;
mod reduce;
mod submodule;

pub use homology::{homology_of, Homology, HomologyPresentation};
pub use matrix::{unit_vector, vec_add, vec_is_zero, vec_scale, vec_sub, Matrix};
pub use reduce::{rank, smith, Smith};
pub use submodule::{determinant, in_image, inverse, kernel, solve, Submodule};

use crate::coefficients::RingSpec;
use crate::error::{Error, Result};

/// A free module with an ordered, labelled basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedModule {
    pub ring: RingSpec,
    pub labels: Vec<String>,
}

impl BasedModule {
    pub fn new(ring: RingSpec, labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Parse(format!("duplicate basis label {l:?}")));
            }
        }
        Ok(BasedModule { ring, labels })
    }

    /// Basis `prefix0, prefix1, ...`.
    pub fn numbered(ring: RingSpec, rank: usize, prefix: &str) -> Self {
        BasedModule { ring, labels: (0..rank).map(|i| format!("{prefix}{i}")).collect() }
    }

    pub fn zero(ring: RingSpec) -> Self {
        BasedModule { ring, labels: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn tensor(&self, other: &BasedModule) -> BasedModule {
        let mut labels = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.labels {
            for b in &other.labels {
                labels.push(format!("{a}⊗{b}"));
            }
        }
        BasedModule { ring: self.ring, labels }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: BasedModule,
    pub target: BasedModule,
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: BasedModule, target: BasedModule, matrix: Matrix) -> Result<Self> {
        if source.ring != target.ring || matrix.ring() != source.ring {
            return Err(Error::RingMismatch(source.ring.to_string(), target.ring.to_string()));
        }
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a map of rank {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.rank(),
                target.rank()
            )));
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn identity(m: &BasedModule) -> Self {
        ModuleMap { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.ring, m.rank()) }
    }

    pub fn compose(&self, inner: &ModuleMap) -> Result<ModuleMap> {
        if inner.target.rank() != self.source.rank() {
            return Err(Error::DimensionMismatch("composable maps".into()));
        }
        ModuleMap::new(inner.source.clone(), self.target.clone(), self.matrix.mul(&inner.matrix))
    }
}

/// Homology `ker(d_n) / im(d_next)` of two composable maps.
pub fn homology_at(d_n: &ModuleMap, d_next: &ModuleMap) -> Result<HomologyPresentation> {
    if d_n.source.ring != d_next.source.ring {
        return Err(Error::RingMismatch(d_n.source.ring.to_string(), d_next.source.ring.to_string()));
    }
    Ok(homology_of(&d_n.matrix, &d_next.matrix, 0)?.presentation)
}

pub fn tensor_map(f: &ModuleMap, g: &ModuleMap) -> Result<ModuleMap> {
    if f.source.ring != g.source.ring {
        return Err(Error::RingMismatch(f.source.ring.to_string(), g.source.ring.to_string()));
    }
    Ok(ModuleMap {
        source: f.source.tensor(&g.source),
        target: f.target.tensor(&g.target),
        matrix: f.matrix.kron(&g.matrix),
    })
}

/// Common fixed vectors of a family of square matrices.
pub fn invariants(ring: RingSpec, n: usize, actions: &[Matrix]) -> Result<Submodule> {
    let mut blocks = Vec::with_capacity(actions.len());
    for a in actions {
        if !a.is_square() || a.rows() != n {
            return Err(Error::NotSquare(format!("{}x{} action on rank {n}", a.rows(), a.cols())));
        }
        if a.ring() != ring {
            return Err(Error::RingMismatch(ring.to_string(), a.ring().to_string()));
        }
        blocks.push(a.sub(&Matrix::identity(ring, n)));
    }
    let refs: Vec<&Matrix> = blocks.iter().collect();
    kernel(&Matrix::vstack(ring, n, &refs))
}

pub fn invariant_submodule(actions: &[ModuleMap]) -> Result<(BasedModule, ModuleMap)> {
    let first = actions.first().ok_or_else(|| Error::NotSquare("no generators given".into()))?;
    let ambient = first.source.clone();
    for a in actions {
        if a.source.ring != ambient.ring {
            return Err(Error::RingMismatch(ambient.ring.to_string(), a.source.ring.to_string()));
        }
        if a.source.rank() != a.target.rank() || a.source.rank() != ambient.rank() {
            return Err(Error::NotSquare(format!("{} -> {}", a.source.rank(), a.target.rank())));
        }
    }
    let mats: Vec<Matrix> = actions.iter().map(|a| a.matrix.clone()).collect();
    let sub = invariants(ambient.ring, ambient.rank(), &mats)?;
    let module = BasedModule::numbered(ambient.ring, sub.rank(), "v");
    let inclusion = ModuleMap { source: module.clone(), target: ambient, matrix: sub.basis };
    Ok((module, inclusion))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Scalar;

    #[test]
    fn invariant_examples() {
        let z = RingSpec::Integers;
        let m = BasedModule::numbered(z, 2, "e");
        let swap = ModuleMap::new(m.clone(), m.clone(), Matrix::from_i64(z, 2, 2, &[0, 1, 1, 0])).unwrap();
        let (inv, inc) = invariant_submodule(&[swap]).unwrap();
        assert_eq!(inv.rank(), 1);
        let g = inc.matrix.column(0);
        assert_eq!(g[0], g[1]);
        assert!(g[0] == Scalar::Int(1.into()) || g[0] == Scalar::Int((-1).into()));
        let (inv, _) = invariant_submodule(&[ModuleMap::identity(&m)]).unwrap();
        assert_eq!(inv.rank(), 2);
        let q = RingSpec::Rationals;
        let mq = BasedModule::numbered(q, 2, "e");
        let signed = ModuleMap::new(mq.clone(), mq, Matrix::from_i64(q, 2, 2, &[0, -1, -1, 0])).unwrap();
        let (inv, inc) = invariant_submodule(&[signed]).unwrap();
        assert_eq!(inv.rank(), 1);
        let g = inc.matrix.column(0);
        assert_eq!(g[0], q.neg(&g[1]));
    }

    #[test]
    fn tensor_map_shapes() {
        let z = RingSpec::Integers;
        let a = BasedModule::numbered(z, 2, "a");
        let b = BasedModule::numbered(z, 3, "b");
        let t = tensor_map(&ModuleMap::identity(&a), &ModuleMap::identity(&b)).unwrap();
        assert!(t.matrix.is_identity());
        assert_eq!(t.source.labels[1], "a0⊗b1");
        let one = BasedModule::numbered(z, 1, "x");
        let f = ModuleMap::new(one.clone(), one.clone(), Matrix::from_i64(z, 1, 1, &[2])).unwrap();
        let g = ModuleMap::new(one.clone(), one.clone(), Matrix::from_i64(z, 1, 1, &[3])).unwrap();
        assert_eq!(tensor_map(&f, &g).unwrap().matrix, Matrix::from_i64(z, 1, 1, &[6]));
        let zq = ModuleMap::identity(&BasedModule::numbered(RingSpec::Rationals, 1, "y"));
        assert!(matches!(tensor_map(&f, &zq), Err(Error::RingMismatch(..))));
    }
}
