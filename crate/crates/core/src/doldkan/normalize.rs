use std::sync::Arc;

use crate::chain::{ChainComplex, ChainMap};
use crate::error::Result;
use crate::linalg::{kernel, BasedModule, Matrix, Submodule};
use crate::simplicial::{SimplicialMap, SimplicialModule};

/// `N(X)` together with the inclusions `N_n ⊂ X_n`.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub complex: Arc<ChainComplex>,
    pub inclusions: Vec<Submodule>,
}

impl Normalized {
    pub fn basis(&self, n: usize) -> &Matrix {
        &self.inclusions[n].basis
    }

    /// Coordinates in `N_n` of an element of `X_n` known to be normalized.
    pub fn coords(&self, n: usize, x: &[crate::Scalar]) -> Vec<crate::Scalar> {
        self.inclusions[n].coords(x)
    }

    pub fn embed(&self, n: usize, c: &[crate::Scalar]) -> Vec<crate::Scalar> {
        self.inclusions[n].basis.apply(c)
    }
}

/// `N_n = ∩_{i≥1} ker d_i` with differential `d_0`.
pub fn normalization(x: &SimplicialModule) -> Result<Normalized> {
    let ring = x.ring;
    let mut inclusions = Vec::with_capacity(x.truncation() + 1);
    inclusions.push(Submodule::full(ring, x.rank(0)));
    for n in 1..=x.truncation() {
        let blocks: Vec<&Matrix> = x.faces[n][1..].iter().collect();
        let stacked = Matrix::vstack(ring, x.rank(n), &blocks);
        inclusions.push(kernel(&stacked)?);
    }
    let modules: Vec<BasedModule> =
        inclusions.iter().enumerate().map(|(n, s)| BasedModule::numbered(ring, s.rank(), &format!("n{n}_"))).collect();
    let differentials = (1..=x.truncation())
        .map(|n| inclusions[n].restrict(&x.faces[n][0], &inclusions[n - 1]))
        .collect();
    let complex = ChainComplex::new(ring, modules, differentials)?;
    Ok(Normalized { complex: Arc::new(complex), inclusions })
}

pub fn normalize(x: &SimplicialModule) -> Result<ChainComplex> {
    Ok((*normalization(x)?.complex).clone())
}

/// `N(f)` between given normalizations.
pub fn normalize_map(f: &SimplicialMap, source: &Normalized, target: &Normalized) -> ChainMap {
    let components = f
        .components
        .iter()
        .enumerate()
        .map(|(n, m)| source.inclusions[n].restrict(m, &target.inclusions[n]))
        .collect();
    ChainMap { source: source.complex.clone(), target: target.complex.clone(), components }
}

/// `P_n = (1 - s_0 d_1)(1 - s_1 d_2) ... (1 - s_{n-1} d_n)`, rightmost factor first;
/// an idempotent on `X_n` with image `N_n` that kills degenerate elements.
pub fn normalizing_projector(x: &SimplicialModule, n: usize) -> Matrix {
    let ring = x.ring;
    let id = Matrix::identity(ring, x.rank(n));
    let mut p = id.clone();
    for j in (0..n).rev() {
        let factor = id.sub(&x.degeneracies[n - 1][j].mul(&x.faces[n][j + 1]));
        p = factor.mul(&p);
    }
    p
}

/// `P_n v` without forming the matrix.
pub fn project_normalized(x: &SimplicialModule, n: usize, v: &[crate::Scalar]) -> Vec<crate::Scalar> {
    let mut v = v.to_vec();
    for j in (0..n).rev() {
        let back = x.degeneracies[n - 1][j].apply(&x.faces[n][j + 1].apply(&v));
        v = crate::linalg::vec_sub(x.ring, &v, &back);
    }
    v
}
