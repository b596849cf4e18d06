use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::graded::{gamma, GammaTable, GradedAlgebra};
use super::report::{CheckEntry, CheckReport, Status, Tally};
use super::search::{search_divided_powers, SearchVerdict};
use super::simplicial_algebra::SimplicialCommAlgebra;
use crate::chain::ChainComplex;
use crate::coefficients::{RingSpec, Scalar};
use crate::doc::vector_to_json;
use crate::doldkan::project_normalized;
use crate::error::{Error, Result};
use crate::linalg::{homology_of, unit_vector, vec_add, vec_is_zero, vec_scale, Homology};
use crate::simplicial::moore_complex;

/// A commutative differential graded algebra with chosen divided power operations.
pub trait ChainAlgebra {
    fn ring(&self) -> RingSpec;
    fn top(&self) -> usize;
    /// Elements spanning degree `n`.
    fn spanning_set(&self, n: usize) -> Vec<Vec<Scalar>>;
    fn random_element(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar>;
    /// A random cycle of degree `n`.
    fn random_cycle(&self, rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Scalar>>;
    /// `d: C_n -> C_{n-1}`; `n >= 1`.
    fn differential(&self, n: usize, v: &[Scalar]) -> Vec<Scalar>;
    fn product(&self, p: usize, a: &[Scalar], q: usize, b: &[Scalar]) -> Result<Vec<Scalar>>;
    fn gamma(&self, n: usize, a: &[Scalar], i: usize) -> Result<Vec<Scalar>>;
    fn is_boundary(&self, n: usize, v: &[Scalar]) -> Result<bool>;
    /// Whether `v` lies in the chain group itself and not only in an ambient module.
    fn contains(&self, _n: usize, _v: &[Scalar]) -> bool {
        true
    }
    /// Extra entries reported before the chain checks.
    fn preconditions(&self) -> Vec<CheckEntry> {
        Vec::new()
    }
}

/// Normalized chains of a simplicial commutative algebra, `γ_i` from shuffle cosets.
///
/// Elements are vectors of `X_n` lying in `N_n X`; boundaries are tested in
/// the unnormalized complex, which has the same boundaries inside `N`.
pub struct NormalizedChains<'a> {
    pub algebra: &'a SimplicialCommAlgebra,
    moore: ChainComplex,
    homology: Vec<OnceLock<Result<Homology>>>,
}

impl<'a> NormalizedChains<'a> {
    pub fn new(algebra: &'a SimplicialCommAlgebra) -> Self {
        let moore = moore_complex(&algebra.underlying);
        let homology = (0..algebra.truncation()).map(|_| OnceLock::new()).collect();
        NormalizedChains { algebra, moore, homology }
    }

    /// Homology in degree `n < L`.
    pub fn homology(&self, n: usize) -> Result<&Homology> {
        let cell = self
            .homology
            .get(n)
            .ok_or(Error::DegreeOutOfRange { degree: n, top: self.homology.len().saturating_sub(1) })?;
        cell.get_or_init(|| homology_of(&self.moore.d(n), &self.moore.d(n + 1), n)).as_ref().map_err(Clone::clone)
    }

    pub fn project(&self, n: usize, v: &[Scalar]) -> Vec<Scalar> {
        project_normalized(&self.algebra.underlying, n, v)
    }

    /// `γ_i` of a homology class given by its coordinates, as coordinates.
    pub fn homology_divided_power(&self, n: usize, class: &[Scalar], i: usize) -> Result<Vec<Scalar>> {
        let h = self.homology(n)?;
        self.homology_divided_power_of(n, &h.cycle_from_class(class), i)
    }

    /// Class of `γ_i(P z)` for a cycle `z`.
    pub fn homology_divided_power_of(&self, n: usize, z: &[Scalar], i: usize) -> Result<Vec<Scalar>> {
        let h = self.homology(n)?;
        if !h.is_cycle(z) {
            return Err(Error::NotACycle(n));
        }
        let g = self.algebra.divided_power_cycle(n, &self.project(n, z), i)?;
        self.homology(n * i)?.class_of(&g)
    }
}

impl ChainAlgebra for NormalizedChains<'_> {
    fn ring(&self) -> RingSpec {
        self.algebra.ring()
    }

    fn top(&self) -> usize {
        self.algebra.truncation()
    }

    fn spanning_set(&self, n: usize) -> Vec<Vec<Scalar>> {
        let ring = self.ring();
        let mut out: Vec<Vec<Scalar>> = Vec::new();
        for k in 0..self.algebra.rank(n) {
            let v = self.project(n, &unit_vector(ring, self.algebra.rank(n), k));
            if !vec_is_zero(ring, &v) && !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    fn random_element(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
        let v = crate::random::vector(rng, self.ring(), self.algebra.rank(n), 3);
        self.project(n, &v)
    }

    fn random_cycle(&self, rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Scalar>> {
        let ring = self.ring();
        let h = self.homology(n)?;
        let mut z = vec![ring.zero(); self.algebra.rank(n)];
        for rep in &h.presentation.cycle_reps {
            z = vec_add(ring, &z, &vec_scale(ring, &crate::random::scalar(rng, ring, 3), rep));
        }
        let mut z = self.project(n, &z);
        if n < self.top() {
            let b = self.random_element(rng, n + 1);
            z = vec_add(ring, &z, &self.differential(n + 1, &b));
        }
        Ok(z)
    }

    fn differential(&self, n: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.algebra.underlying.faces[n][0].apply(v)
    }

    fn product(&self, p: usize, a: &[Scalar], q: usize, b: &[Scalar]) -> Result<Vec<Scalar>> {
        self.algebra.chain_product(p, a, q, b)
    }

    fn gamma(&self, n: usize, a: &[Scalar], i: usize) -> Result<Vec<Scalar>> {
        self.algebra.divided_power_cycle(n, a, i)
    }

    fn contains(&self, n: usize, v: &[Scalar]) -> bool {
        let ring = self.ring();
        (1..=n).all(|k| vec_is_zero(ring, &self.algebra.underlying.faces[n][k].apply(v)))
    }

    fn is_boundary(&self, n: usize, v: &[Scalar]) -> Result<bool> {
        let h = self.homology(n)?;
        if !h.is_cycle(v) {
            return Ok(false);
        }
        h.is_boundary(v)
    }
}

/// A graded algebra seen as a complex with zero differential.
pub struct GradedChainAlgebra {
    pub algebra: GradedAlgebra,
    pub table: Option<GammaTable>,
    search: Option<CheckEntry>,
}

impl GradedChainAlgebra {
    /// Uses `table` when given, otherwise searches for one.
    pub fn new(algebra: GradedAlgebra, table: Option<GammaTable>) -> Result<Self> {
        if table.is_some() {
            return Ok(GradedChainAlgebra { algebra, table, search: None });
        }
        let verdict = search_divided_powers(&algebra)?;
        let (table, entry) = match verdict {
            SearchVerdict::Exists(t) => {
                (Some(t), CheckEntry { name: "divided powers exist".into(), status: Status::Pass, checked: 1, failures: 0, witness: None })
            }
            SearchVerdict::Absent(why) => (
                None,
                CheckEntry {
                    name: "divided powers exist".into(),
                    status: Status::Fail,
                    checked: 1,
                    failures: 1,
                    witness: Some(serde_json::to_value(why).expect("serializable")),
                },
            ),
        };
        Ok(GradedChainAlgebra { algebra, table, search: Some(entry) })
    }
}

impl ChainAlgebra for GradedChainAlgebra {
    fn ring(&self) -> RingSpec {
        self.algebra.ring
    }

    fn top(&self) -> usize {
        self.algebra.degree_bound
    }

    fn spanning_set(&self, n: usize) -> Vec<Vec<Scalar>> {
        (0..self.algebra.rank(n)).map(|k| self.algebra.basis(n, k)).collect()
    }

    fn random_element(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
        crate::random::vector(rng, self.ring(), self.algebra.rank(n), 3)
    }

    fn random_cycle(&self, rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Scalar>> {
        Ok(self.random_element(rng, n))
    }

    fn differential(&self, n: usize, _v: &[Scalar]) -> Vec<Scalar> {
        self.algebra.zero(n - 1)
    }

    fn product(&self, p: usize, a: &[Scalar], q: usize, b: &[Scalar]) -> Result<Vec<Scalar>> {
        self.algebra.mul(p, a, q, b).ok_or(Error::DegreeOutOfRange { degree: p + q, top: self.top() })
    }

    fn gamma(&self, n: usize, a: &[Scalar], i: usize) -> Result<Vec<Scalar>> {
        match &self.table {
            Some(t) => gamma(&self.algebra, t, n, a, i),
            None => Err(Error::IncompleteTable("no system of divided powers".into())),
        }
    }

    fn is_boundary(&self, _n: usize, v: &[Scalar]) -> Result<bool> {
        Ok(vec_is_zero(self.ring(), v))
    }

    fn preconditions(&self) -> Vec<CheckEntry> {
        self.search.clone().into_iter().collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PdOptions {
    /// Largest `i` in `γ_i`.
    pub max_i: usize,
    pub samples: usize,
    pub seed: u64,
    /// Spanning sets larger than this are replaced by random elements.
    pub span_cap: usize,
}

impl Default for PdOptions {
    fn default() -> Self {
        PdOptions { max_i: 3, samples: 3, seed: 0, span_cap: 64 }
    }
}

pub const PD_CHECK_NAMES: [&str; 5] =
    ["leibniz", "gamma_i lands in chains", "(a) d gamma_i = d(c) gamma_(i-1)", "(b) gamma_i of boundaries", "(c) odd cycles"];

/// Leibniz rule, the derivation rule for `γ_i` and stability of boundaries.
pub fn check_pd_chain_algebra(c: &dyn ChainAlgebra, opts: PdOptions) -> Result<CheckReport> {
    let ring = c.ring();
    let top = c.top();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let elements: Vec<Vec<Vec<Scalar>>> = (0..=top)
        .map(|n| {
            let mut xs = c.spanning_set(n);
            if xs.len() > opts.span_cap {
                xs.truncate(opts.span_cap);
            }
            for _ in 0..opts.samples {
                xs.push(c.random_element(&mut rng, n));
            }
            xs
        })
        .collect();
    let el = |n: usize, a: &[Scalar]| json!({"degree": n, "element": vector_to_json(a)});
    let mut report = CheckReport::default();
    for e in c.preconditions() {
        report.push(e);
    }

    let mut leibniz = Tally::new(PD_CHECK_NAMES[0]);
    for p in 0..=top {
        for q in 0..=top - p {
            if p + q == 0 {
                continue;
            }
            let pairs: Vec<(&Vec<Scalar>, &Vec<Scalar>)> = if elements[p].len() * elements[q].len() <= 400 {
                elements[p].iter().flat_map(|a| elements[q].iter().map(move |b| (a, b))).collect()
            } else {
                let ks = elements[p].len().min(elements[q].len());
                (0..ks).map(|k| (&elements[p][elements[p].len() - 1 - k], &elements[q][k])).collect()
            };
            for (a, b) in pairs {
                let ab = c.product(p, a, q, b)?;
                let lhs = c.differential(p + q, &ab);
                let mut rhs = vec![ring.zero(); lhs.len()];
                if p > 0 {
                    rhs = vec_add(ring, &rhs, &c.product(p - 1, &c.differential(p, a), q, b)?);
                }
                if q > 0 {
                    let t = c.product(p, a, q - 1, &c.differential(q, b))?;
                    let t = if p % 2 == 1 { vec_scale(ring, &ring.from_i64(-1), &t) } else { t };
                    rhs = vec_add(ring, &rhs, &t);
                }
                leibniz.record(lhs == rhs, || json!({"a": el(p, a), "b": el(q, b)}));
            }
        }
    }
    report.push(leibniz.finish());

    let mut closed = Tally::new(PD_CHECK_NAMES[1]);
    let mut deriv = Tally::new(PD_CHECK_NAMES[2]);
    let mut bounds = Tally::new(PD_CHECK_NAMES[3]);
    let mut odd = Tally::new(PD_CHECK_NAMES[4]).informational(ring.characteristic() == 2);
    for n in 1..=top {
        for a in &elements[n] {
            for i in 1..=opts.max_i.min(top / n) {
                let w = || json!({"i": i, "c": el(n, a)});
                let g = match c.gamma(n, a, i) {
                    Ok(g) => g,
                    Err(Error::IncompleteTable(msg)) => {
                        deriv.record(false, || json!({"i": i, "c": el(n, a), "error": msg}));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                closed.record(c.contains(n * i, &g), w);
                let lhs = c.differential(n * i, &g);
                let lower = c.gamma(n, a, i - 1)?;
                let rhs = c.product(n - 1, &c.differential(n, a), n * (i - 1), &lower)?;
                deriv.record(lhs == rhs, w);
            }
        }
        if n < top {
            for b in &elements[n + 1] {
                let d = c.differential(n + 1, b);
                for i in 1..=opts.max_i {
                    if n * i + 1 > top {
                        break;
                    }
                    match c.gamma(n, &d, i) {
                        Ok(g) => bounds.record(c.is_boundary(n * i, &g)?, || json!({"i": i, "b": el(n + 1, b)})),
                        Err(Error::IncompleteTable(msg)) => bounds.record(false, || json!({"i": i, "error": msg})),
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        if n % 2 == 1 {
            for _ in 0..opts.samples.max(1) {
                let z = c.random_cycle(&mut rng, n)?;
                for i in 2..=opts.max_i {
                    if n * i + 1 > top {
                        break;
                    }
                    match c.gamma(n, &z, i) {
                        Ok(g) => odd.record(c.is_boundary(n * i, &g)?, || json!({"i": i, "z": el(n, &z)})),
                        Err(Error::IncompleteTable(msg)) => odd.record(false, || json!({"i": i, "error": msg})),
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    report.push(closed.finish());
    report.push(deriv.finish());
    report.push(bounds.finish());
    report.push(odd.finish());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{hochschild_complex, CommAlgebra};
    use std::sync::Arc;

    fn named(r: &CheckReport, k: usize) -> Status {
        r.status(PD_CHECK_NAMES[k]).unwrap()
    }

    #[test]
    fn dual_numbers_bar_and_hochschild() {
        let f2 = RingSpec::integers_mod(2).unwrap();
        let a = Arc::new(CommAlgebra::truncated_polynomial(f2, 2));
        let hc = hochschild_complex(&a, 4).unwrap();
        for alg in [&hc.bar, &hc.cyclic] {
            let r = check_pd_chain_algebra(&NormalizedChains::new(alg), PdOptions::default()).unwrap();
            assert!(r.all_pass(), "{r}");
            assert_eq!(named(&r, 4), Status::Info);
        }
    }

    #[test]
    fn odd_degree_leaves_normalized_chains_in_odd_characteristic() {
        let f3 = RingSpec::integers_mod(3).unwrap();
        let a = Arc::new(CommAlgebra::truncated_polynomial(f3, 3));
        let hc = hochschild_complex(&a, 4).unwrap();
        let r = check_pd_chain_algebra(&NormalizedChains::new(&hc.bar), PdOptions::default()).unwrap();
        assert_eq!(named(&r, 0), Status::Pass);
        assert_eq!(named(&r, 1), Status::Fail);
        assert_eq!(named(&r, 2), Status::Pass);
        let w = &r.get(PD_CHECK_NAMES[1]).unwrap().witness.as_ref().unwrap()["c"]["degree"];
        assert_eq!(w.as_u64(), Some(1));
    }

    #[test]
    fn graded_algebras() {
        let f2 = RingSpec::integers_mod(2).unwrap();
        let fx = GradedAlgebra::polynomial(f2, "x", 2, 4).unwrap();
        let r = check_pd_chain_algebra(&GradedChainAlgebra::new(fx, None).unwrap(), PdOptions::default()).unwrap();
        assert_eq!(r.status("divided powers exist"), Some(Status::Fail));
        assert!(!r.all_pass());

        let q = RingSpec::Rationals;
        let qx = GradedAlgebra::polynomial(q, "x", 2, 6).unwrap();
        let r = check_pd_chain_algebra(&GradedChainAlgebra::new(qx, None).unwrap(), PdOptions::default()).unwrap();
        assert!(r.all_pass(), "{r}");

        let trivial = GradedAlgebra::polynomial(RingSpec::Integers, "x", 2, 0).unwrap();
        let r = check_pd_chain_algebra(&GradedChainAlgebra::new(trivial, None).unwrap(), PdOptions::default()).unwrap();
        assert!(r.all_pass(), "{r}");
    }
}
