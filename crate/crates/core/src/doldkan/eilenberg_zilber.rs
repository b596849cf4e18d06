use std::sync::Arc;

use super::normalize::{normalization, normalize_map, normalizing_projector, Normalized};
use crate::chain::{tensor_complexes, twist_map, ChainComplex, ChainMap, TensorLayout};
use crate::combinat::shuffles;
use crate::error::Result;
use crate::linalg::Matrix;
use crate::simplicial::{hat_tensor, hat_twist, SimplicialModule};

/// Everything the two comparison maps between `NX ⊗ NY` and `N(X ⊗̂ Y)` need.
#[derive(Clone, Debug)]
pub struct EilenbergZilber {
    pub x: Arc<SimplicialModule>,
    pub y: Arc<SimplicialModule>,
    pub nx: Normalized,
    pub ny: Normalized,
    pub hat: Arc<SimplicialModule>,
    pub nhat: Normalized,
    /// `NX ⊗ NY` cut at the common truncation.
    pub tensor: Arc<ChainComplex>,
}

impl EilenbergZilber {
    pub fn new(x: &SimplicialModule, y: &SimplicialModule) -> Result<Self> {
        let (nx, ny) = (normalization(x)?, normalization(y)?);
        Self::from_parts(Arc::new(x.clone()), nx, Arc::new(y.clone()), ny)
    }

    pub fn from_parts(x: Arc<SimplicialModule>, nx: Normalized, y: Arc<SimplicialModule>, ny: Normalized) -> Result<Self> {
        let hat = Arc::new(hat_tensor(&x, &y)?);
        let nhat = normalization(&hat)?;
        let tensor = Arc::new(tensor_complexes(&nx.complex, &ny.complex)?.truncate(x.truncation()));
        Ok(EilenbergZilber { x, y, nx, ny, hat, nhat, tensor })
    }

    pub fn truncation(&self) -> usize {
        self.x.truncation()
    }

    fn layout(&self) -> TensorLayout {
        TensorLayout::new(&self.nx.complex, &self.ny.complex)
    }

    /// `Σ_σ ε(σ) s_ν(a) ⊗ s_μ(b)` as a matrix `N_p X ⊗ N_q Y -> X_n ⊗ Y_n`.
    pub fn shuffle_block(&self, p: usize, q: usize) -> Matrix {
        let ring = self.x.ring;
        let n = p + q;
        let mut out = Matrix::zeros(ring, self.hat.rank(n), self.nx.basis(p).cols() * self.ny.basis(q).cols());
        for sigma in shuffles(p, q) {
            let mu: Vec<usize> = sigma.images[..p].to_vec();
            let nu: Vec<usize> = sigma.images[p..].to_vec();
            let a = self.x.degeneracy_chain(p, &nu).expect("level within truncation").mul(self.nx.basis(p));
            let b = self.y.degeneracy_chain(q, &mu).expect("level within truncation").mul(self.ny.basis(q));
            let term = a.kron(&b);
            out = if sigma.sign > 0 { out.add(&term) } else { out.sub(&term) };
        }
        out
    }

    /// `sh: NX ⊗ NY -> N(X ⊗̂ Y)`.
    pub fn shuffle(&self) -> ChainMap {
        let ring = self.x.ring;
        let lay = self.layout();
        let components = (0..=self.truncation())
            .map(|n| {
                let mut blocks = Vec::with_capacity(n + 1);
                for p in 0..=n {
                    blocks.push(self.nhat.inclusions[n].left_inverse.mul(&self.shuffle_block(p, n - p)));
                }
                let refs: Vec<&Matrix> = blocks.iter().collect();
                let m = Matrix::hstack(ring, self.nhat.complex.rank(n), &refs);
                debug_assert_eq!(m.cols(), lay.rank(n));
                m
            })
            .collect();
        ChainMap { source: self.tensor.clone(), target: self.nhat.complex.clone(), components }
    }

    /// `aw(x ⊗ y) = Σ_p P(d_{p+1}⋯d_n x) ⊗ P(d_0^p y)`.
    pub fn alexander_whitney(&self) -> ChainMap {
        let ring = self.x.ring;
        let projectors_x: Vec<Matrix> = (0..=self.truncation()).map(|p| normalizing_projector(&self.x, p)).collect();
        let projectors_y: Vec<Matrix> = (0..=self.truncation()).map(|p| normalizing_projector(&self.y, p)).collect();
        let components = (0..=self.truncation())
            .map(|n| {
                let mut blocks = Vec::with_capacity(n + 1);
                for p in 0..=n {
                    let q = n - p;
                    let mut front = Matrix::identity(ring, self.x.rank(n));
                    for k in (p + 1..=n).rev() {
                        front = self.x.faces[k][k].mul(&front);
                    }
                    let mut back = Matrix::identity(ring, self.y.rank(n));
                    for k in (q + 1..=n).rev() {
                        back = self.y.faces[k][0].mul(&back);
                    }
                    let fx = self.nx.inclusions[p].left_inverse.mul(&projectors_x[p]).mul(&front);
                    let by = self.ny.inclusions[q].left_inverse.mul(&projectors_y[q]).mul(&back);
                    blocks.push(fx.kron(&by));
                }
                let refs: Vec<&Matrix> = blocks.iter().collect();
                Matrix::vstack(ring, self.hat.rank(n), &refs).mul(self.nhat.basis(n))
            })
            .collect();
        ChainMap { source: self.nhat.complex.clone(), target: self.tensor.clone(), components }
    }
}

pub fn shuffle_map(x: &SimplicialModule, y: &SimplicialModule) -> Result<ChainMap> {
    Ok(EilenbergZilber::new(x, y)?.shuffle())
}

pub fn alexander_whitney(x: &SimplicialModule, y: &SimplicialModule) -> Result<ChainMap> {
    Ok(EilenbergZilber::new(x, y)?.alexander_whitney())
}

/// Both comparison maps for `X, Y` and `Y, X`, with the twists between them.
struct TwistSquare {
    sh: ChainMap,
    sh_swapped: ChainMap,
    aw: ChainMap,
    aw_swapped: ChainMap,
    tau: ChainMap,
    hat_tau: ChainMap,
}

fn twist_square(x: &SimplicialModule, y: &SimplicialModule) -> Result<TwistSquare> {
    let xy = EilenbergZilber::new(x, y)?;
    let yx = EilenbergZilber::new(y, x)?;
    let l = xy.truncation();
    let cut = |m: ChainMap, source: &Arc<ChainComplex>, target: &Arc<ChainComplex>| ChainMap {
        source: source.clone(),
        target: target.clone(),
        components: m.components[..=l].to_vec(),
    };
    let tau = cut(twist_map(&xy.nx.complex, &xy.ny.complex)?, &xy.tensor, &yx.tensor);
    let hat_tau = normalize_map(&hat_twist(x, y)?, &xy.nhat, &yx.nhat);
    Ok(TwistSquare {
        sh: xy.shuffle(),
        sh_swapped: yx.shuffle(),
        aw: xy.alexander_whitney(),
        aw_swapped: yx.alexander_whitney(),
        tau,
        hat_tau,
    })
}

fn differing(a: &ChainMap, b: &ChainMap) -> Vec<usize> {
    (0..a.components.len()).filter(|&n| a.components[n] != b.components[n]).collect()
}

/// Degrees where `N(τ̂) ∘ sh_{X,Y} ≠ sh_{Y,X} ∘ τ`.
pub fn shuffle_symmetry_defects(x: &SimplicialModule, y: &SimplicialModule) -> Result<Vec<usize>> {
    let t = twist_square(x, y)?;
    Ok(differing(&t.hat_tau.compose(&t.sh), &t.sh_swapped.compose(&t.tau)))
}

/// Degrees where `τ ∘ aw_{X,Y} ≠ aw_{Y,X} ∘ N(τ̂)`.
pub fn aw_symmetry_defects(x: &SimplicialModule, y: &SimplicialModule) -> Result<Vec<usize>> {
    let t = twist_square(x, y)?;
    Ok(differing(&t.tau.compose(&t.aw), &t.aw_swapped.compose(&t.hat_tau)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::RingSpec;
    use crate::simplicial::standard_simplex_module;

    #[test]
    fn interval_comparisons() {
        let z = RingSpec::Integers;
        let x = standard_simplex_module(1, z, 4);
        let ez = EilenbergZilber::new(&x, &x).unwrap();
        let sh = ez.shuffle();
        let aw = ez.alexander_whitney();
        assert!(sh.is_chain_map());
        assert!(aw.is_chain_map());
        assert!(aw.compose(&sh).equals(&ChainMap::identity(&ez.tensor)));
        assert!(aw.components[0].is_identity());
        for n in 0..=4 {
            for p in 0..=n {
                let block = ez.shuffle_block(p, n - p);
                for col in block.columns() {
                    assert!(ez.nhat.inclusions[n].contains(&col));
                }
            }
        }
        assert_eq!(ez.nhat.complex.ranks(), vec![4, 5, 2, 0, 0]);

        let tau = twist_map(&ez.nx.complex, &ez.ny.complex).unwrap();
        let tau = ChainMap { source: ez.tensor.clone(), target: ez.tensor.clone(), components: tau.components[..=4].to_vec() };
        let th = hat_twist(&x, &x).unwrap();
        let nth = normalize_map(&th, &ez.nhat, &ez.nhat);
        assert!(nth.compose(&sh).equals(&sh.compose(&tau)));
        assert!(tau.compose(&aw).components[1] != aw.compose(&nth).components[1]);
        assert!(shuffle_symmetry_defects(&x, &x).unwrap().is_empty());
        assert_eq!(aw_symmetry_defects(&x, &x).unwrap().first(), Some(&1));
        let y = standard_simplex_module(2, z, 4);
        assert!(shuffle_symmetry_defects(&x, &y).unwrap().is_empty());
        assert!(!aw_symmetry_defects(&y, &x).unwrap().is_empty());
    }
}
