use std::sync::Arc;

use super::eilenberg_zilber::EilenbergZilber;
use super::gamma::Gamma;
use super::isos::{phi, psi};
use super::normalize::{normalization, Normalized};
use crate::chain::{tensor_chain_maps, ChainComplex, ChainMap};
use crate::error::Result;
use crate::linalg::{inverse, Matrix};
use crate::simplicial::{constant_module, swap_matrix};

/// `C ⊗̃ C' = N(ΓC ⊗̂ ΓC')` through degree `L`, keeping the pieces it came from.
#[derive(Clone, Debug)]
pub struct LargeTensorComplex {
    pub left: Gamma,
    pub right: Gamma,
    pub ez: EilenbergZilber,
    pub truncation: usize,
}

impl LargeTensorComplex {
    pub fn new(c: &ChainComplex, c2: &ChainComplex, l: usize) -> Result<Self> {
        let (left, right) = (Gamma::new(c, l), Gamma::new(c2, l));
        let (nl, nr) = (normalization(&left.module)?, normalization(&right.module)?);
        let ez = EilenbergZilber::from_parts(left.module.clone(), nl, right.module.clone(), nr)?;
        Ok(LargeTensorComplex { left, right, ez, truncation: l })
    }

    pub fn underlying(&self) -> &Arc<ChainComplex> {
        &self.ez.nhat.complex
    }

    pub fn normalized(&self) -> &Normalized {
        &self.ez.nhat
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.underlying().ranks()
    }

    /// `φ_C: NΓC -> C` for the left factor.
    pub fn phi_left(&self) -> ChainMap {
        phi(&self.left, &self.ez.nx)
    }

    pub fn phi_right(&self) -> ChainMap {
        phi(&self.right, &self.ez.ny)
    }
}

pub fn large_tensor(c: &ChainComplex, c2: &ChainComplex, l: usize) -> Result<LargeTensorComplex> {
    LargeTensorComplex::new(c, c2, l)
}

/// Restrict levelwise maps `source.hat -> target.hat` to the normalized chains.
fn restrict_levelwise(source: &LargeTensorComplex, target: &LargeTensorComplex, levels: Vec<Matrix>) -> ChainMap {
    let components = levels
        .iter()
        .enumerate()
        .map(|(n, m)| source.normalized().inclusions[n].restrict(m, &target.normalized().inclusions[n]))
        .collect();
    ChainMap { source: source.underlying().clone(), target: target.underlying().clone(), components }
}

/// `τ̃ = N(τ̂): C ⊗̃ C' -> C' ⊗̃ C`.
pub fn large_twist(source: &LargeTensorComplex, target: &LargeTensorComplex) -> ChainMap {
    let ring = source.left.complex.ring;
    let levels = (0..=source.truncation)
        .map(|n| swap_matrix(ring, source.left.rank(n), source.right.rank(n)))
        .collect();
    restrict_levelwise(source, target, levels)
}

/// `f ⊗̃ g = N(Γf ⊗̂ Γg)`.
pub fn large_tensor_maps(f: &ChainMap, g: &ChainMap, source: &LargeTensorComplex, target: &LargeTensorComplex) -> ChainMap {
    let gf = Gamma::map(f, &source.left, &target.left);
    let gg = Gamma::map(g, &source.right, &target.right);
    restrict_levelwise(source, target, gf.iter().zip(&gg).map(|(a, b)| a.kron(b)).collect())
}

/// `ℓ̃: C -> N(R̲) ⊗̃ C`, returned with its target.
pub fn unit_map(c: &ChainComplex, l: usize) -> Result<(ChainMap, LargeTensorComplex)> {
    let ring = c.ring;
    let unit = constant_module(ring, l);
    let nunit = normalization(&unit)?;
    let target = LargeTensorComplex::new(&nunit.complex, c, l)?;
    let psi_unit = psi(&Arc::new(unit), &nunit, &target.left)?;
    let phi_c = target.phi_right();
    let components = (0..=l)
        .map(|n| {
            let phi_inv = inverse(&phi_c.components[n])?;
            let psi_inv = inverse(&psi_unit.components[n])?;
            let lift = psi_inv.kron(&Matrix::identity(ring, target.right.rank(n)));
            Ok(target.normalized().inclusions[n].left_inverse.mul(&lift).mul(target.ez.ny.basis(n)).mul(&phi_inv))
        })
        .collect::<Result<Vec<_>>>()?;
    let source = phi_c.target.clone();
    Ok((ChainMap { source, target: target.underlying().clone(), components }, target))
}

/// `α̃ = N((id ⊗̂ ψ)^{-1} ∘ α̂ ∘ (ψ ⊗̂ id)): (A ⊗̃ B) ⊗̃ C -> A ⊗̃ (B ⊗̃ C)`.
///
/// `left` must be built on `ab.underlying()` and `right` on `bc.underlying()`.
pub fn associator(
    ab: &LargeTensorComplex,
    bc: &LargeTensorComplex,
    left: &LargeTensorComplex,
    right: &LargeTensorComplex,
) -> Result<ChainMap> {
    let ring = ab.left.complex.ring;
    let psi_ab = psi(&ab.ez.hat, ab.normalized(), &left.left)?;
    let psi_bc = psi(&bc.ez.hat, bc.normalized(), &right.right)?;
    let levels = (0..=ab.truncation)
        .map(|n| {
            let into = psi_ab.components[n].kron(&Matrix::identity(ring, left.right.rank(n)));
            let back = Matrix::identity(ring, right.left.rank(n)).kron(&inverse(&psi_bc.components[n])?);
            Ok(back.mul(&into))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(restrict_levelwise(left, right, levels))
}

/// The three objects an associator needs, built from scratch.
pub struct Triple {
    pub ab: LargeTensorComplex,
    pub bc: LargeTensorComplex,
    pub left: LargeTensorComplex,
    pub right: LargeTensorComplex,
}

impl Triple {
    pub fn new(a: &ChainComplex, b: &ChainComplex, c: &ChainComplex, l: usize) -> Result<Self> {
        let ab = LargeTensorComplex::new(a, b, l)?;
        let bc = LargeTensorComplex::new(b, c, l)?;
        let left = LargeTensorComplex::new(ab.underlying(), c, l)?;
        let right = LargeTensorComplex::new(a, bc.underlying(), l)?;
        Ok(Triple { ab, bc, left, right })
    }

    pub fn associator(&self) -> Result<ChainMap> {
        associator(&self.ab, &self.bc, &self.left, &self.right)
    }
}

/// `λ = sh ∘ (φ^{-1} ⊗ φ^{-1}): C ⊗ C' -> C ⊗̃ C'` through degree `L`.
pub fn lax_map(lt: &LargeTensorComplex) -> Result<ChainMap> {
    let phi_inv = lt.phi_left().inverse()?;
    let phi2_inv = lt.phi_right().inverse()?;
    let pair = tensor_chain_maps(&phi_inv, &phi2_inv)?;
    let l = lt.truncation;
    let source = Arc::new(pair.source.truncate(l));
    let sh = lt.ez.shuffle();
    let components = (0..=l).map(|n| sh.components[n].mul(&pair.components[n])).collect();
    Ok(ChainMap { source, target: lt.underlying().clone(), components })
}

/// `(ℓ̃, α̃, λ)` for given factors.
#[derive(Clone, Debug)]
pub struct TransferredStructure {
    pub unit: ChainMap,
    pub associator: ChainMap,
    pub lax: ChainMap,
}

pub fn transferred_structure(
    c: &ChainComplex,
    c2: &ChainComplex,
    c3: &ChainComplex,
    l: usize,
) -> Result<TransferredStructure> {
    let (unit, _) = unit_map(c, l)?;
    let triple = Triple::new(c, c2, c3, l)?;
    let associator = triple.associator()?;
    let lax = lax_map(&triple.ab)?;
    Ok(TransferredStructure { unit, associator, lax })
}

/// `τ̃ ∘ λ = λ ∘ τ` for `C ⊗ C'`.
pub fn lax_symmetry(c: &ChainComplex, c2: &ChainComplex, l: usize) -> Result<bool> {
    let ab = LargeTensorComplex::new(c, c2, l)?;
    let ba = LargeTensorComplex::new(c2, c, l)?;
    let (lam, lam2) = (lax_map(&ab)?, lax_map(&ba)?);
    let tau = crate::chain::twist_map(&ab.left.complex, &ab.right.complex)?;
    let tt = large_twist(&ab, &ba);
    Ok((0..=l).all(|n| tt.components[n].mul(&lam.components[n]) == lam2.components[n].mul(&tau.components[n])))
}

/// `τ̃_{C',C} ∘ τ̃_{C,C'} = id`.
pub fn twist_involution(c: &ChainComplex, c2: &ChainComplex, l: usize) -> Result<bool> {
    let ab = LargeTensorComplex::new(c, c2, l)?;
    let ba = LargeTensorComplex::new(c2, c, l)?;
    let round = large_twist(&ba, &ab).compose(&large_twist(&ab, &ba));
    Ok(round.equals(&ChainMap::identity(ab.underlying())))
}

/// Hexagon: `α̃ ∘ τ̃ ∘ α̃ = (id ⊗̃ τ̃) ∘ α̃ ∘ (τ̃ ⊗̃ id)` on `(A ⊗̃ B) ⊗̃ C`.
pub fn hexagon(a: &ChainComplex, b: &ChainComplex, c: &ChainComplex, l: usize) -> Result<bool> {
    let abc = Triple::new(a, b, c, l)?;
    // (B ⊗̃ C) ⊗̃ A -> B ⊗̃ (C ⊗̃ A)
    let bca = Triple::new(b, c, a, l)?;
    let twist_outer = large_twist(&abc.right, &LargeTensorComplex::new(abc.bc.underlying(), a, l)?);
    let first = bca.associator()?.compose(&twist_outer).compose(&abc.associator()?);

    // (B ⊗̃ A) ⊗̃ C -> B ⊗̃ (A ⊗̃ C)
    let bac = Triple::new(b, a, c, l)?;
    let ba_tau = large_twist(&abc.ab, &bac.ab);
    let tau_id = large_tensor_maps(&ba_tau, &ChainMap::identity(&abc.left.right.complex), &abc.left, &bac.left);
    let ca = LargeTensorComplex::new(c, a, l)?;
    let ac_tau = large_twist(&bac.bc, &ca);
    let id_tau = large_tensor_maps(&ChainMap::identity(&bac.right.left.complex), &ac_tau, &bac.right, &bca.right);
    let second = id_tau.compose(&bac.associator()?).compose(&tau_id);
    Ok(first.equals(&second))
}

/// Pentagon on `((A ⊗̃ B) ⊗̃ C) ⊗̃ D`.
pub fn pentagon(a: &ChainComplex, b: &ChainComplex, c: &ChainComplex, d: &ChainComplex, l: usize) -> Result<bool> {
    let ab = LargeTensorComplex::new(a, b, l)?;
    let cd = LargeTensorComplex::new(c, d, l)?;
    let bc = LargeTensorComplex::new(b, c, l)?;
    // (AB)C, A(BC)
    let ab_c = LargeTensorComplex::new(ab.underlying(), c, l)?;
    let a_bc = LargeTensorComplex::new(a, bc.underlying(), l)?;
    // B(CD), (BC)D
    let b_cd = LargeTensorComplex::new(b, cd.underlying(), l)?;
    let bc_d = LargeTensorComplex::new(bc.underlying(), d, l)?;
    // ((AB)C)D -> (AB)(CD) -> A(B(CD))
    let abc_d = LargeTensorComplex::new(ab_c.underlying(), d, l)?;
    let ab_cd = LargeTensorComplex::new(ab.underlying(), cd.underlying(), l)?;
    let a_bcd = LargeTensorComplex::new(a, b_cd.underlying(), l)?;
    let s1 = associator(&ab_c, &cd, &abc_d, &ab_cd)?;
    let s2 = associator(&ab, &b_cd, &ab_cd, &a_bcd)?;
    let top = s2.compose(&s1);
    // ((AB)C)D -> (A(BC))D -> A((BC)D) -> A(B(CD))
    let a_bc_d = LargeTensorComplex::new(a_bc.underlying(), d, l)?;
    let a_bcd2 = LargeTensorComplex::new(a, bc_d.underlying(), l)?;
    let alpha_abc = associator(&ab, &bc, &ab_c, &a_bc)?;
    let t1 = large_tensor_maps(&alpha_abc, &ChainMap::identity(&abc_d.right.complex), &abc_d, &a_bc_d);
    let t2 = associator(&a_bc, &bc_d, &a_bc_d, &a_bcd2)?;
    let alpha_bcd = associator(&bc, &cd, &bc_d, &b_cd)?;
    let t3 = large_tensor_maps(&ChainMap::identity(&a_bcd2.left.complex), &alpha_bcd, &a_bcd2, &a_bcd);
    let bottom = t3.compose(&t2).compose(&t1);
    Ok(top.equals(&bottom))
}
