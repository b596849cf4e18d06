//! Truncated simplicial modules with explicit face and degeneracy matrices.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::chain::ChainComplex;
use crate::coefficients::RingSpec;
use crate::combinat::{epi_mono_factorize, monotone_maps, MonotoneMap};
use crate::error::{Error, Result};
use crate::linalg::{inverse, BasedModule, Matrix};

/// Levels `0..=L`. `faces[n][i] = d_i: X_n -> X_{n-1}` for `1 <= n <= L`,
/// `degeneracies[n][i] = s_i: X_n -> X_{n+1}` for `n < L`.
///
/// Anything needing level `L + 1` is an error, never silently zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialModule {
    pub ring: RingSpec,
    pub levels: Vec<BasedModule>,
    pub faces: Vec<Vec<Matrix>>,
    pub degeneracies: Vec<Vec<Matrix>>,
}

impl SimplicialModule {
    pub fn new(
        ring: RingSpec,
        levels: Vec<BasedModule>,
        faces: Vec<Vec<Matrix>>,
        degeneracies: Vec<Vec<Matrix>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidRange("a simplicial module needs level 0".into()));
        }
        let top = levels.len() - 1;
        if faces.len() != top + 1 || degeneracies.len() != top {
            return Err(Error::DimensionMismatch(format!(
                "truncation {top} needs {} face levels and {top} degeneracy levels",
                top + 1
            )));
        }
        let r: Vec<usize> = levels.iter().map(BasedModule::rank).collect();
        for n in 0..=top {
            let expect = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != expect {
                return Err(Error::DimensionMismatch(format!("level {n} needs {expect} faces")));
            }
            for d in &faces[n] {
                if d.ring() != ring || d.rows() != r[n - 1] || d.cols() != r[n] {
                    return Err(Error::DimensionMismatch(format!("bad face shape at level {n}")));
                }
            }
        }
        for n in 0..top {
            if degeneracies[n].len() != n + 1 {
                return Err(Error::DimensionMismatch(format!("level {n} needs {} degeneracies", n + 1)));
            }
            for s in &degeneracies[n] {
                if s.ring() != ring || s.rows() != r[n + 1] || s.cols() != r[n] {
                    return Err(Error::DimensionMismatch(format!("bad degeneracy shape at level {n}")));
                }
            }
        }
        Ok(SimplicialModule { ring, levels, faces, degeneracies })
    }

    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.levels[n].rank()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.levels.iter().map(BasedModule::rank).collect()
    }

    fn need(&self, level: usize) -> Result<()> {
        if level > self.truncation() {
            return Err(Error::TruncationTooSmall { needed: level, available: self.truncation() });
        }
        Ok(())
    }

    pub fn face(&self, n: usize, i: usize) -> &Matrix {
        &self.faces[n][i]
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> &Matrix {
        &self.degeneracies[n][i]
    }

    /// `X(θ): X_n -> X_m` for monotone `θ: [m] -> [n]`.
    pub fn apply_monotone(&self, theta: &MonotoneMap) -> Result<Matrix> {
        let (m, n) = (theta.source_top(), theta.target_top);
        self.need(m.max(n))?;
        let (epi, mono) = epi_mono_factorize(theta);
        let mut level = n;
        let mut out = Matrix::identity(self.ring, self.rank(n));
        for &k in mono.missing().iter().rev() {
            out = self.faces[level][k].mul(&out);
            level -= 1;
        }
        for j in epi.repeats() {
            out = self.degeneracies[level][j].mul(&out);
            level += 1;
        }
        debug_assert_eq!(level, m);
        Ok(out)
    }

    /// `s_{w_last} ∘ ... ∘ s_{w_0}` from level `n`, smallest index applied first.
    pub fn degeneracy_chain(&self, n: usize, word: &[usize]) -> Result<Matrix> {
        self.need(n + word.len())?;
        let mut out = Matrix::identity(self.ring, self.rank(n));
        for (k, &i) in word.iter().enumerate() {
            out = self.degeneracies[n + k][i].mul(&out);
        }
        Ok(out)
    }

    /// Truncate to levels `0..=l`.
    pub fn truncate(&self, l: usize) -> SimplicialModule {
        let l = l.min(self.truncation());
        SimplicialModule {
            ring: self.ring,
            levels: self.levels[..=l].to_vec(),
            faces: self.faces[..=l].to_vec(),
            degeneracies: self.degeneracies[..l].to_vec(),
        }
    }
}

/// One violated simplicial identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: &'static str,
    pub level: usize,
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at level {} (i={}, j={})", self.identity, self.level, self.i, self.j)
    }
}

/// Every simplicial identity whose terms stay within the truncation.
pub fn verify_simplicial(x: &SimplicialModule) -> Vec<Violation> {
    let top = x.truncation();
    let mut out = Vec::new();
    let mut check = |ok: bool, identity, level, i, j| {
        if !ok {
            out.push(Violation { identity, level, i, j });
        }
    };
    // d_i d_j = d_{j-1} d_i on X_n, i < j
    for n in 2..=top {
        for j in 1..=n {
            for i in 0..j {
                let lhs = x.faces[n - 1][i].mul(&x.faces[n][j]);
                let rhs = x.faces[n - 1][j - 1].mul(&x.faces[n][i]);
                check(lhs == rhs, "d_i d_j = d_{j-1} d_i", n, i, j);
            }
        }
    }
    // s_i s_j = s_{j+1} s_i on X_n, i <= j
    for n in 0..top.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                let lhs = x.degeneracies[n + 1][i].mul(&x.degeneracies[n][j]);
                let rhs = x.degeneracies[n + 1][j + 1].mul(&x.degeneracies[n][i]);
                check(lhs == rhs, "s_i s_j = s_{j+1} s_i", n, i, j);
            }
        }
    }
    // d_i s_j on X_n
    for n in 0..top {
        let id = Matrix::identity(x.ring, x.rank(n));
        for j in 0..=n {
            let s = &x.degeneracies[n][j];
            for i in 0..=n + 1 {
                let lhs = x.faces[n + 1][i].mul(s);
                if i < j {
                    check(lhs == x.degeneracies[n - 1][j - 1].mul(&x.faces[n][i]), "d_i s_j = s_{j-1} d_i", n, i, j);
                } else if i == j || i == j + 1 {
                    check(lhs == id, "d_j s_j = id = d_{j+1} s_j", n, i, j);
                } else {
                    check(lhs == x.degeneracies[n - 1][j].mul(&x.faces[n][i - 1]), "d_i s_j = s_j d_{i-1}", n, i, j);
                }
            }
        }
    }
    out
}

/// `R` in every level, all structure maps the identity.
pub fn constant_module(ring: RingSpec, l: usize) -> SimplicialModule {
    let one = Matrix::identity(ring, 1);
    SimplicialModule {
        ring,
        levels: (0..=l).map(|_| BasedModule { ring, labels: vec!["1".into()] }).collect(),
        faces: (0..=l).map(|n| if n == 0 { Vec::new() } else { vec![one.clone(); n + 1] }).collect(),
        degeneracies: (0..l).map(|n| vec![one.clone(); n + 1]).collect(),
    }
}

/// `R[Δ(n)]`: level `m` is free on the monotone maps `[m] -> [n]`.
pub fn standard_simplex_module(n: usize, ring: RingSpec, l: usize) -> SimplicialModule {
    let bases: Vec<Vec<MonotoneMap>> = (0..=l).map(|m| monotone_maps(m, n)).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(k, f)| (f.values.clone(), k)).collect())
        .collect();
    let levels = bases
        .iter()
        .map(|b| BasedModule { ring, labels: b.iter().map(|f| f.to_string()).collect() })
        .collect();
    let mut faces = vec![Vec::new()];
    for m in 1..=l {
        let mut level = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let mut d = Matrix::zeros(ring, bases[m - 1].len(), bases[m].len());
            for (col, f) in bases[m].iter().enumerate() {
                let mut v = f.values.clone();
                v.remove(i);
                d.set(index[m - 1][&v], col, ring.one());
            }
            level.push(d);
        }
        faces.push(level);
    }
    let mut degeneracies = Vec::with_capacity(l);
    for m in 0..l {
        let mut level = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let mut s = Matrix::zeros(ring, bases[m + 1].len(), bases[m].len());
            for (col, f) in bases[m].iter().enumerate() {
                let mut v = f.values.clone();
                v.insert(i, v[i]);
                s.set(index[m + 1][&v], col, ring.one());
            }
            level.push(s);
        }
        degeneracies.push(level);
    }
    SimplicialModule { ring, levels, faces, degeneracies }
}

fn same_shape(x: &SimplicialModule, y: &SimplicialModule) -> Result<()> {
    if x.ring != y.ring {
        return Err(Error::RingMismatch(x.ring.to_string(), y.ring.to_string()));
    }
    if x.truncation() != y.truncation() {
        return Err(Error::TruncationMismatch(x.truncation(), y.truncation()));
    }
    Ok(())
}

/// `(X ⊗̂ Y)_n = X_n ⊗ Y_n` with structure maps applied in both factors.
pub fn hat_tensor(x: &SimplicialModule, y: &SimplicialModule) -> Result<SimplicialModule> {
    same_shape(x, y)?;
    let l = x.truncation();
    Ok(SimplicialModule {
        ring: x.ring,
        levels: (0..=l).map(|n| x.levels[n].tensor(&y.levels[n])).collect(),
        faces: (0..=l)
            .map(|n| x.faces[n].iter().zip(&y.faces[n]).map(|(a, b)| a.kron(b)).collect())
            .collect(),
        degeneracies: (0..l)
            .map(|n| x.degeneracies[n].iter().zip(&y.degeneracies[n]).map(|(a, b)| a.kron(b)).collect())
            .collect(),
    })
}

/// Permutation matrix of `a ⊗ b -> b ⊗ a` on `R^p ⊗ R^q`.
pub fn swap_matrix(ring: RingSpec, p: usize, q: usize) -> Matrix {
    let mut m = Matrix::zeros(ring, p * q, p * q);
    for a in 0..p {
        for b in 0..q {
            m.set(b * p + a, a * q + b, ring.one());
        }
    }
    m
}

/// Levelwise map; `components[n]: X_n -> Y_n`.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: Arc<SimplicialModule>,
    pub target: Arc<SimplicialModule>,
    pub components: Vec<Matrix>,
}

impl SimplicialMap {
    pub fn new(source: Arc<SimplicialModule>, target: Arc<SimplicialModule>, components: Vec<Matrix>) -> Result<Self> {
        same_shape(&source, &target)?;
        if components.len() != source.truncation() + 1 {
            return Err(Error::DimensionMismatch("one component per level".into()));
        }
        for (n, f) in components.iter().enumerate() {
            if f.rows() != target.rank(n) || f.cols() != source.rank(n) {
                return Err(Error::DimensionMismatch(format!("component {n} is {}x{}", f.rows(), f.cols())));
            }
        }
        Ok(SimplicialMap { source, target, components })
    }

    pub fn identity(x: &Arc<SimplicialModule>) -> Self {
        let components = (0..=x.truncation()).map(|n| Matrix::identity(x.ring, x.rank(n))).collect();
        SimplicialMap { source: x.clone(), target: x.clone(), components }
    }

    /// Structure maps the components fail to commute with, as `(kind, level, index)`.
    pub fn non_commuting(&self) -> Vec<(&'static str, usize, usize)> {
        let (x, y) = (&self.source, &self.target);
        let mut out = Vec::new();
        for n in 1..=x.truncation() {
            for i in 0..=n {
                if y.faces[n][i].mul(&self.components[n]) != self.components[n - 1].mul(&x.faces[n][i]) {
                    out.push(("d", n, i));
                }
            }
        }
        for n in 0..x.truncation() {
            for i in 0..=n {
                if y.degeneracies[n][i].mul(&self.components[n]) != self.components[n + 1].mul(&x.degeneracies[n][i]) {
                    out.push(("s", n, i));
                }
            }
        }
        out
    }

    pub fn is_simplicial(&self) -> bool {
        self.non_commuting().is_empty()
    }

    pub fn compose(&self, inner: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().zip(&inner.components).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn inverse(&self) -> Result<SimplicialMap> {
        Ok(SimplicialMap {
            source: self.target.clone(),
            target: self.source.clone(),
            components: self.components.iter().map(inverse).collect::<Result<_>>()?,
        })
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|f| inverse(f).is_ok())
    }

    pub fn equals(&self, other: &SimplicialMap) -> bool {
        self.components == other.components
    }
}

/// `f ⊗̂ g`, levelwise Kronecker products.
pub fn hat_tensor_maps(f: &SimplicialMap, g: &SimplicialMap) -> Result<SimplicialMap> {
    let source = Arc::new(hat_tensor(&f.source, &g.source)?);
    let target = Arc::new(hat_tensor(&f.target, &g.target)?);
    let components = f.components.iter().zip(&g.components).map(|(a, b)| a.kron(b)).collect();
    SimplicialMap::new(source, target, components)
}

/// `τ̂(a ⊗ b) = b ⊗ a`, no signs.
pub fn hat_twist(x: &SimplicialModule, y: &SimplicialModule) -> Result<SimplicialMap> {
    let source = Arc::new(hat_tensor(x, y)?);
    let target = Arc::new(hat_tensor(y, x)?);
    let components = (0..=x.truncation()).map(|n| swap_matrix(x.ring, x.rank(n), y.rank(n))).collect();
    SimplicialMap::new(source, target, components)
}

/// Unnormalized chains with `b = Σ (-1)^i d_i`.
pub fn moore_complex(x: &SimplicialModule) -> ChainComplex {
    let ring = x.ring;
    let diffs = (1..=x.truncation())
        .map(|n| {
            let mut b = Matrix::zeros(ring, x.rank(n - 1), x.rank(n));
            for (i, d) in x.faces[n].iter().enumerate() {
                b = if i % 2 == 0 { b.add(d) } else { b.sub(d) };
            }
            b
        })
        .collect();
    ChainComplex::new(ring, x.levels.clone(), diffs).expect("Moore complex shapes")
}
