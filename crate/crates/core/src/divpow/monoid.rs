use std::sync::Arc;

use serde_json::json;

use super::report::{CheckReport, Tally};
use super::simplicial_algebra::{LevelProduct, SimplicialCommAlgebra};
use crate::chain::{ChainComplex, ChainMap};
use crate::coefficients::Scalar;
use crate::doldkan::{large_tensor_maps, large_twist, normalization, psi, unit_map, Gamma, LargeTensorComplex, Triple};
use crate::error::{Error, Result};
use crate::linalg::{inverse, Matrix};
use crate::simplicial::{constant_module, SimplicialMap};

/// A chain complex `C` with `μ̃: C ⊗̃ C -> C` and `j: N(R̲) -> C`.
#[derive(Clone, Debug)]
pub struct LargeMonoid {
    pub carrier: Arc<ChainComplex>,
    /// `C ⊗̃ C`, the source of `mu_tilde`.
    pub square: LargeTensorComplex,
    pub mu_tilde: ChainMap,
    pub unit: ChainMap,
}

fn unit_complex(c: &ChainComplex) -> Result<Arc<ChainComplex>> {
    Ok(normalization(&constant_module(c.ring, c.top()))?.complex)
}

impl LargeMonoid {
    /// `mu[n]` is `rank C_n x rank (C ⊗̃ C)_n`; `unit` is the image of `1 ∈ C_0`.
    pub fn new(carrier: &ChainComplex, mu: Vec<Matrix>, unit: Vec<Scalar>) -> Result<Self> {
        let l = carrier.top();
        let square = LargeTensorComplex::new(carrier, carrier, l)?;
        let carrier = square.left.complex.clone();
        let mu_tilde = ChainMap::new(square.underlying().clone(), carrier.clone(), mu)?;
        let ring = carrier.ring;
        let mut components = vec![Matrix::from_column(ring, &unit)];
        components.extend((1..=l).map(|n| Matrix::zeros(ring, carrier.rank(n), 0)));
        let unit = ChainMap::new(unit_complex(&carrier)?, carrier.clone(), components)?;
        Ok(LargeMonoid { carrier, square, mu_tilde, unit })
    }

    pub fn truncation(&self) -> usize {
        self.carrier.top()
    }

    /// Degrees `0..=k` only.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k >= self.truncation() {
            return Ok(self.clone());
        }
        let mu = self.mu_tilde.components[..=k].to_vec();
        LargeMonoid::new(&self.carrier.truncate(k), mu, self.unit.components[0].column(0))
    }

    /// The same monoid with `μ̃` replaced.
    pub fn with_mu(&self, mu: Vec<Matrix>) -> Result<Self> {
        let mu_tilde = ChainMap::new(self.square.underlying().clone(), self.carrier.clone(), mu)?;
        Ok(LargeMonoid { mu_tilde, ..self.clone() })
    }
}

/// `N(X)` with `μ̃ = φ ∘ N(μ̂)`, where `μ̂ = ψ^{-1} ∘ μ ∘ (ψ ⊗̂ ψ)` on `ΓNX`.
pub fn monoid_to_chain(x: &SimplicialCommAlgebra) -> Result<LargeMonoid> {
    let l = x.truncation();
    let nx = normalization(&x.underlying)?;
    let square = LargeTensorComplex::new(&nx.complex, &nx.complex, l)?;
    let psi_x = psi(&x.underlying, &nx, &square.left)?;
    let phi = square.phi_left();
    let mut mu = Vec::with_capacity(l + 1);
    let mut unit = Vec::new();
    for n in 0..=l {
        let p = &psi_x.components[n];
        let p_inv = inverse(p)?;
        let hat = p_inv.mul(&x.product_matrix(n)).mul(&p.kron(p));
        let normalized = square.normalized().inclusions[n].restrict(&hat, &square.ez.nx.inclusions[n]);
        mu.push(phi.components[n].mul(&normalized));
        if n == 0 {
            let i0 = p_inv.apply(x.unit(0));
            unit = phi.components[0].apply(&square.ez.nx.coords(0, &i0));
        }
    }
    LargeMonoid::new(&nx.complex, mu, unit)
}

/// `Γ(C)` with `μ̂ = ψ_{ΓC} ∘ Γ(φ^{-1} μ̃) ∘ ψ_{ΓC ⊗̂ ΓC}^{-1}`, checked against
/// `N(μ̂) = φ^{-1} μ̃` and the simplicial identities.
pub fn monoid_to_simplicial(m: &LargeMonoid) -> Result<SimplicialCommAlgebra> {
    let l = m.truncation();
    let sq = &m.square;
    let target = sq.phi_left().inverse()?.compose(&m.mu_tilde);
    let g_source = Gamma::new(sq.underlying(), l);
    let psi_source = psi(&sq.ez.hat, sq.normalized(), &g_source)?;
    let g_target = Gamma::new(&sq.ez.nx.complex, l);
    let psi_target = psi(&sq.left.module, &sq.ez.nx, &g_target)?;
    let lifted = Gamma::map(&target, &g_source, &g_target);
    let mut hat = Vec::with_capacity(l + 1);
    for n in 0..=l {
        let back = inverse(&psi_source.components[n])?;
        hat.push(psi_target.components[n].mul(&lifted[n]).mul(&back));
    }
    let as_map = SimplicialMap::new(sq.ez.hat.clone(), sq.left.module.clone(), hat.clone())?;
    if !as_map.is_simplicial() {
        return Err(Error::NotSolvable("the lifted product is not simplicial".into()));
    }
    for n in 0..=l {
        let normalized = sq.normalized().inclusions[n].restrict(&hat[n], &sq.ez.nx.inclusions[n]);
        if normalized != target.components[n] {
            return Err(Error::NotSolvable(format!("N(mu) differs from phi^-1 mu in degree {n}")));
        }
    }
    let module = sq.left.module.clone();
    let unit0 = m.unit.components[0].column(0);
    let units =
        (0..=l).map(|n| module.degeneracy_chain(0, &vec![0; n]).map(|s| s.apply(&unit0))).collect::<Result<Vec<_>>>()?;
    SimplicialCommAlgebra::new(module, LevelProduct::Matrices(hat), units)
}

pub const MONOID_CHECK_NAMES: [&str; 5] = ["mu chain map", "unit chain map", "commutativity", "unit", "associativity"];

/// Commutativity `μ̃ τ̃ = μ̃`, the unit law through `ℓ̃` and associativity through `α̃`,
/// in total degrees up to `degree`.
pub fn monoid_check(m: &LargeMonoid, degree: usize) -> Result<CheckReport> {
    let m = &m.truncate(degree)?;
    let l = m.truncation();
    let c = &m.carrier;
    let mut report = CheckReport::default();
    let degrees = |t: &mut Tally, lhs: &ChainMap, rhs: &ChainMap| {
        for n in 0..=l {
            t.record(lhs.components[n] == rhs.components[n], || json!({"degree": n}));
        }
    };

    let mut t = Tally::new(MONOID_CHECK_NAMES[0]);
    let bad = m.mu_tilde.non_commuting_degrees();
    for n in 1..=l {
        t.record(!bad.contains(&n), || json!({"degree": n}));
    }
    report.push(t.finish());
    let mut t = Tally::new(MONOID_CHECK_NAMES[1]);
    t.record(m.unit.is_chain_map(), || json!({"degree": 0}));
    report.push(t.finish());

    let mut t = Tally::new(MONOID_CHECK_NAMES[2]);
    let twisted = m.mu_tilde.compose(&large_twist(&m.square, &m.square));
    degrees(&mut t, &twisted, &m.mu_tilde);
    report.push(t.finish());

    let mut t = Tally::new(MONOID_CHECK_NAMES[3]);
    let (ell, unit_square) = unit_map(c, l)?;
    let id = ChainMap::identity(c);
    let j_id = large_tensor_maps(&m.unit, &id, &unit_square, &m.square);
    degrees(&mut t, &m.mu_tilde.compose(&j_id).compose(&ell), &id);
    report.push(t.finish());

    let mut t = Tally::new(MONOID_CHECK_NAMES[4]);
    let triple = Triple::new(c, c, c, l)?;
    let left = m.mu_tilde.compose(&large_tensor_maps(&m.mu_tilde, &id, &triple.left, &m.square));
    let right = m
        .mu_tilde
        .compose(&large_tensor_maps(&id, &m.mu_tilde, &triple.right, &m.square))
        .compose(&triple.associator()?);
    degrees(&mut t, &left, &right);
    report.push(t.finish());
    Ok(report)
}

/// `f j_1 = j_2` and `f μ̃_1 = μ̃_2 (f ⊗̃ f)`.
pub fn is_monoid_morphism(f: &ChainMap, source: &LargeMonoid, target: &LargeMonoid) -> bool {
    let ff = large_tensor_maps(f, f, &source.square, &target.square);
    let mu = f.compose(&source.mu_tilde).equals(&target.mu_tilde.compose(&ff));
    let unit = f.components[0].mul(&source.unit.components[0]) == target.unit.components[0];
    mu && unit
}

/// `g μ_1 = μ_2 (g ⊗̂ g)` and `g 1 = 1` levelwise.
pub fn is_multiplicative(g: &[Matrix], source: &SimplicialCommAlgebra, target: &SimplicialCommAlgebra) -> bool {
    (0..=source.truncation().min(target.truncation())).all(|n| {
        g[n].mul(&source.product_matrix(n)) == target.product_matrix(n).mul(&g[n].kron(&g[n]))
            && g[n].apply(source.unit(n)) == target.unit(n)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{bar_construction, CommAlgebra};
    use crate::coefficients::RingSpec;
    use crate::doldkan::psi_of;

    #[test]
    fn unit_object() {
        let z = RingSpec::Integers;
        let r = SimplicialCommAlgebra::constant(z, 3);
        let m = monoid_to_chain(&r).unwrap();
        assert!(monoid_check(&m, 3).unwrap().all_pass());
        let back = monoid_to_simplicial(&m).unwrap();
        assert_eq!(back.underlying.ranks(), vec![1; 4]);
        assert!(back.law_violations(3, 0).is_empty());
    }

    #[test]
    fn bar_of_dual_numbers() {
        let f2 = RingSpec::integers_mod(2).unwrap();
        let a = Arc::new(CommAlgebra::truncated_polynomial(f2, 2));
        let x = bar_construction(&a, 3).unwrap();
        let m = monoid_to_chain(&x).unwrap();
        let report = monoid_check(&m, 1).unwrap();
        assert!(report.all_pass(), "{report}");
        let back = monoid_to_simplicial(&m).unwrap();
        let (psi, _, _) = psi_of(&x.underlying).unwrap();
        assert!(is_multiplicative(&psi.components, &back, &x));

        let mut mu = m.mu_tilde.components.clone();
        let cols = mu[1].cols();
        mu[1].add_to(0, cols - 1, &f2.one());
        let broken = m.with_mu(mu).unwrap();
        assert!(!monoid_check(&broken, 1).unwrap().all_pass());
    }

    #[test]
    fn quotient_to_hochschild_is_a_morphism() {
        use crate::algebra::hochschild_complex;
        use crate::doldkan::normalize_map;
        let f2 = RingSpec::integers_mod(2).unwrap();
        let a = Arc::new(CommAlgebra::truncated_polynomial(f2, 2));
        let hc = hochschild_complex(&a, 3).unwrap();
        let (mb, mh) = (monoid_to_chain(&hc.bar).unwrap(), monoid_to_chain(&hc.cyclic).unwrap());
        assert!(monoid_check(&mh, 1).unwrap().all_pass());
        let pi = SimplicialMap::new(
            hc.bar.underlying.clone(),
            hc.cyclic.underlying.clone(),
            (0..=hc.bar.truncation()).map(|n| hc.projection_matrix(n)).collect(),
        )
        .unwrap();
        assert!(pi.is_simplicial());
        let (nb, nh) = (normalization(&hc.bar.underlying).unwrap(), normalization(&hc.cyclic.underlying).unwrap());
        let f = normalize_map(&pi, &nb, &nh);
        let f = ChainMap::new(mb.carrier.clone(), mh.carrier.clone(), f.components).unwrap();
        assert!(is_monoid_morphism(&f, &mb, &mh));
        let (sb, sh) = (monoid_to_simplicial(&mb).unwrap(), monoid_to_simplicial(&mh).unwrap());
        let g = Gamma::map(&f, &mb.square.left, &mh.square.left);
        assert!(is_multiplicative(&g, &sb, &sh));
    }
}
