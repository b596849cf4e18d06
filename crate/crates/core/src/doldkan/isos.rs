use std::sync::Arc;

use super::gamma::Gamma;
use super::normalize::{normalization, normalize_map, Normalized};
use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::simplicial::{SimplicialMap, SimplicialModule};

/// `φ: NΓC -> C`, projection onto the identity summand.
pub fn phi(gamma: &Gamma, n_gamma: &Normalized) -> ChainMap {
    let ring = gamma.complex.ring;
    let components = (0..=gamma.truncation())
        .map(|n| {
            let top = gamma.top_summand(n);
            let rows: Vec<usize> = (top.offset..top.offset + top.rank).collect();
            let proj = Matrix::identity(ring, gamma.rank(n)).select_rows(&rows);
            proj.mul(n_gamma.basis(n))
        })
        .collect();
    ChainMap { source: n_gamma.complex.clone(), target: gamma.complex.clone(), components }
}

/// `ψ: ΓNX -> X`, sending `y ∈ (NX)_p^ρ` to `X(ρ) y`.
pub fn psi(x: &Arc<SimplicialModule>, nx: &Normalized, gamma: &Gamma) -> Result<SimplicialMap> {
    let ring = x.ring;
    let components = (0..=gamma.truncation())
        .map(|n| {
            let mut out = Matrix::zeros(ring, x.rank(n), gamma.rank(n));
            for s in &gamma.summands[n] {
                let block = x.apply_monotone(&s.rho)?.mul(nx.basis(s.p));
                for a in 0..block.rows() {
                    for b in 0..block.cols() {
                        let v = block.get(a, b);
                        if !ring.is_zero(v) {
                            out.set(a, s.offset + b, v.clone());
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    SimplicialMap::new(gamma.module.clone(), x.clone(), components)
}

/// `ψ_X` built from scratch, together with `NX` and `ΓNX`.
pub fn psi_of(x: &SimplicialModule) -> Result<(SimplicialMap, Normalized, Gamma)> {
    let x = Arc::new(x.clone());
    let nx = normalization(&x)?;
    let gamma = Gamma::new(&nx.complex, x.truncation());
    let map = psi(&x, &nx, &gamma)?;
    Ok((map, nx, gamma))
}

/// `φ_C` built from scratch, together with `Γ(C)` and `NΓC`.
pub fn phi_of(c: &ChainComplex, l: usize) -> Result<(ChainMap, Gamma, Normalized)> {
    let gamma = Gamma::new(c, l);
    let ng = normalization(&gamma.module)?;
    Ok((phi(&gamma, &ng), gamma, ng))
}

/// `(φ_C, ψ_X)` through degree and level `l`.
pub fn roundtrip_isos(c: &ChainComplex, x: &SimplicialModule, l: usize) -> Result<(ChainMap, SimplicialMap)> {
    if l > x.truncation() {
        return Err(Error::TruncationTooSmall { needed: l, available: x.truncation() });
    }
    let (phi, _, _) = phi_of(c, l)?;
    let (psi, _, _) = psi_of(&x.truncate(l))?;
    Ok((phi, psi))
}

/// The two compatibilities `Γ(φ_C) = ψ_{ΓC}` and `N(ψ_X) = φ_{NX}`.
pub fn triangle_identities(c: &ChainComplex, x: &SimplicialModule, l: usize) -> Result<(bool, bool)> {
    if l > x.truncation() {
        return Err(Error::TruncationTooSmall { needed: l, available: x.truncation() });
    }
    let (phi_c, gc, ngc) = phi_of(c, l)?;
    let gngc = Gamma::new(&ngc.complex, l);
    let lhs = Gamma::map(&phi_c, &gngc, &gc);
    let rhs = psi(&gc.module, &ngc, &gngc)?;
    let first = lhs == rhs.components;

    let (psi_x, nx, gnx) = psi_of(&x.truncate(l))?;
    let ngnx = normalization(&gnx.module)?;
    let lhs = normalize_map(&psi_x, &ngnx, &nx);
    let rhs = phi(&gnx, &ngnx);
    let second = lhs.components == rhs.components;
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::RingSpec;
    use crate::simplicial::standard_simplex_module;

    #[test]
    fn interval_isos() {
        let z = RingSpec::Integers;
        let x = standard_simplex_module(1, z, 4);
        let (psi, nx, _) = psi_of(&x).unwrap();
        assert!(psi.is_simplicial());
        assert!(psi.is_iso());
        let (phi, _, _) = phi_of(&nx.complex, 4).unwrap();
        assert!(phi.is_chain_map() && phi.is_iso());
        assert!(phi.components[0].is_identity());
        assert_eq!(triangle_identities(&nx.complex, &x, 4).unwrap(), (true, true));
    }
}
