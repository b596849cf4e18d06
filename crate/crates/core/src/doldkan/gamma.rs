use std::sync::Arc;

use crate::chain::{ChainComplex, ChainMap};
use crate::combinat::{epi_mono_factorize, monotone_surjections, MonotoneMap};
use crate::linalg::{BasedModule, Matrix};
use crate::simplicial::SimplicialModule;

/// One summand `C_p^ρ` of `Γ_n(C)`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub rho: MonotoneMap,
    pub p: usize,
    pub offset: usize,
    pub rank: usize,
}

/// `Γ(C)` with its summand layout.
#[derive(Clone, Debug)]
pub struct Gamma {
    pub complex: Arc<ChainComplex>,
    pub module: Arc<SimplicialModule>,
    pub summands: Vec<Vec<Summand>>,
}

impl Gamma {
    /// `Γ(C)` through level `l`; the stored complex is `C` cut or padded to top `l`.
    pub fn new(c: &ChainComplex, l: usize) -> Self {
        let c = &Arc::new(c.with_top(l));
        let summands: Vec<Vec<Summand>> = (0..=l).map(|n| layout(c, n)).collect();
        let ring = c.ring;
        let levels = summands
            .iter()
            .map(|row| {
                let labels = row
                    .iter()
                    .flat_map(|s| (0..s.rank).map(move |i| format!("{}:{}", s.rho, c.modules[s.p].labels[i])))
                    .collect();
                BasedModule { ring, labels }
            })
            .collect();
        let mut gamma = Gamma {
            complex: c.clone(),
            module: Arc::new(SimplicialModule { ring, levels, faces: vec![], degeneracies: vec![] }),
            summands,
        };
        let faces = (0..=l)
            .map(|n| if n == 0 { vec![] } else { (0..=n).map(|i| gamma.structure_map(&MonotoneMap::coface(n, i))).collect() })
            .collect();
        let degeneracies =
            (0..l).map(|n| (0..=n).map(|i| gamma.structure_map(&MonotoneMap::codegeneracy(n, i))).collect()).collect();
        let m = Arc::get_mut(&mut gamma.module).expect("fresh module");
        m.faces = faces;
        m.degeneracies = degeneracies;
        gamma
    }

    pub fn truncation(&self) -> usize {
        self.summands.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.summands[n].iter().map(|s| s.rank).sum()
    }

    /// Position of summand `ρ` inside level `ρ.source_top()`.
    pub fn summand(&self, rho: &MonotoneMap) -> &Summand {
        self.summands[rho.source_top()].iter().find(|s| s.rho == *rho).expect("surjection in layout")
    }

    /// The identity summand `C_n^{id}` of level `n`.
    pub fn top_summand(&self, n: usize) -> &Summand {
        self.summands[n].last().expect("identity summand")
    }

    /// `Γ(C)(θ): Γ_n -> Γ_m` for `θ: [m] -> [n]`.
    pub fn structure_map(&self, theta: &MonotoneMap) -> Matrix {
        let (m, n) = (theta.source_top(), theta.target_top);
        let ring = self.complex.ring;
        let mut out = Matrix::zeros(ring, self.rank(m), self.rank(n));
        for s in &self.summands[n] {
            if s.rank == 0 {
                continue;
            }
            let (rho2, delta) = epi_mono_factorize(&s.rho.compose(theta));
            let q = rho2.target_top;
            let block = if q == s.p {
                Matrix::identity(ring, s.rank)
            } else if q + 1 == s.p && delta.missing() == [0] {
                self.complex.d(s.p)
            } else {
                continue;
            };
            let t = self.summand(&rho2);
            for a in 0..block.rows() {
                for b in 0..block.cols() {
                    let x = block.get(a, b);
                    if !ring.is_zero(x) {
                        out.set(t.offset + a, s.offset + b, x.clone());
                    }
                }
            }
        }
        out
    }

    /// `Γ(f)`, block diagonal over summands.
    pub fn map(f: &ChainMap, source: &Gamma, target: &Gamma) -> Vec<Matrix> {
        let ring = f.source.ring;
        (0..=source.truncation())
            .map(|n| {
                let mut out = Matrix::zeros(ring, target.rank(n), source.rank(n));
                for (s, t) in source.summands[n].iter().zip(&target.summands[n]) {
                    let block = f.component(s.p);
                    for a in 0..block.rows() {
                        for b in 0..block.cols() {
                            let x = block.get(a, b);
                            if !ring.is_zero(x) {
                                out.set(t.offset + a, s.offset + b, x.clone());
                            }
                        }
                    }
                }
                out
            })
            .collect()
    }
}

fn layout(c: &ChainComplex, n: usize) -> Vec<Summand> {
    let mut out = Vec::new();
    let mut offset = 0;
    for p in 0..=n {
        for rho in monotone_surjections(n, p).expect("p <= n") {
            let rank = c.rank(p);
            out.push(Summand { rho, p, offset, rank });
            offset += rank;
        }
    }
    out
}

pub fn gamma_functor(c: &ChainComplex, l: usize) -> SimplicialModule {
    (*Gamma::new(c, l).module).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::RingSpec;
    use crate::doldkan::normalize;
    use crate::simplicial::{constant_module, standard_simplex_module, verify_simplicial};

    #[test]
    fn unit_and_interval() {
        let z = RingSpec::Integers;
        let g = gamma_functor(&ChainComplex::unit(z, 4), 4);
        let k = constant_module(z, 4);
        assert_eq!(g.faces, k.faces);
        assert_eq!(g.degeneracies, k.degeneracies);
        let n = normalize(&standard_simplex_module(1, z, 4)).unwrap();
        let g = gamma_functor(&n, 4);
        assert_eq!(g.ranks(), standard_simplex_module(1, z, 4).ranks());
        assert_eq!(g.rank(1), 3);
        assert!(verify_simplicial(&g).is_empty());
    }
}
