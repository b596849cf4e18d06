use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::report::{CheckReport, Tally};
use crate::coefficients::{binomial, dp_coefficient, factorial, RingSpec, Scalar};
use crate::doc::vector_to_json;
use crate::error::{Error, Result};
use crate::linalg::{unit_vector, vec_add, vec_is_zero, vec_scale, BasedModule, Matrix};

/// An `N_0`-graded commutative algebra with `A_0 = R`, cut at `degree_bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedAlgebra {
    pub ring: RingSpec,
    pub degree_bound: usize,
    pub components: Vec<BasedModule>,
    /// `mult[p][q]: A_p ⊗ A_q -> A_{p+q}` for `p + q <= degree_bound`.
    mult: Vec<Vec<Matrix>>,
}

impl GradedAlgebra {
    pub fn new(ring: RingSpec, components: Vec<BasedModule>, mult: Vec<Vec<Matrix>>) -> Result<Self> {
        let a = Self::unchecked(ring, components, mult)?;
        match a.violations().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(a),
        }
    }

    /// Shape checks only.
    pub fn unchecked(ring: RingSpec, components: Vec<BasedModule>, mult: Vec<Vec<Matrix>>) -> Result<Self> {
        if components.is_empty() || components[0].rank() != 1 {
            return Err(Error::DimensionMismatch("degree 0 must be the ground ring".into()));
        }
        let d = components.len() - 1;
        let mut seen = HashSet::new();
        for m in &components {
            if m.ring != ring {
                return Err(Error::RingMismatch(ring.to_string(), m.ring.to_string()));
            }
            for l in &m.labels {
                if !seen.insert(l.clone()) {
                    return Err(Error::Parse(format!("basis label {l:?} used twice")));
                }
            }
        }
        if mult.len() != d + 1 {
            return Err(Error::DimensionMismatch(format!("need products for p = 0..={d}")));
        }
        for p in 0..=d {
            if mult[p].len() != d - p + 1 {
                return Err(Error::DimensionMismatch(format!("need products A_{p} x A_q for q = 0..={}", d - p)));
            }
            for q in 0..=d - p {
                let m = &mult[p][q];
                if m.rows() != components[p + q].rank() || m.cols() != components[p].rank() * components[q].rank() {
                    return Err(Error::DimensionMismatch(format!("product A_{p} x A_{q} has shape {}x{}", m.rows(), m.cols())));
                }
            }
        }
        Ok(GradedAlgebra { ring, degree_bound: d, components, mult })
    }

    /// Build from a rule on basis pairs; `f(p, i, q, j)` is `e_i e_j` in `A_{p+q}`.
    pub fn from_rule(
        ring: RingSpec,
        components: Vec<BasedModule>,
        f: impl Fn(usize, usize, usize, usize) -> Vec<Scalar>,
    ) -> Result<Self> {
        let d = components.len() - 1;
        let mult = (0..=d)
            .map(|p| {
                (0..=d - p)
                    .map(|q| {
                        let (rp, rq) = (components[p].rank(), components[q].rank());
                        let cols: Vec<Vec<Scalar>> =
                            (0..rp).flat_map(|i| (0..rq).map(move |j| (i, j))).map(|(i, j)| f(p, i, q, j)).collect();
                        Matrix::from_columns(ring, components[p + q].rank(), &cols)
                    })
                    .collect()
            })
            .collect();
        Self::new(ring, components, mult)
    }

    /// `R[x]` with `|x| = degree`, basis `x^k`; odd degrees need characteristic 2.
    pub fn polynomial(ring: RingSpec, label: &str, degree: usize, bound: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidRange("generators need positive degree".into()));
        }
        let components = (0..=bound)
            .map(|n| {
                if n % degree == 0 {
                    let l = match n / degree {
                        0 => "1".to_string(),
                        1 => label.to_string(),
                        k => format!("{label}^{k}"),
                    };
                    BasedModule::new(ring, vec![l]).expect("one label")
                } else {
                    BasedModule::zero(ring)
                }
            })
            .collect();
        Self::from_rule(ring, components, |_, _, _, _| vec![ring.one()])
    }

    /// `Λ_R(x)` for odd `|x|`.
    pub fn exterior(ring: RingSpec, label: &str, degree: usize, bound: usize) -> Self {
        assert!(degree % 2 == 1);
        let components = (0..=bound)
            .map(|n| match n {
                0 => BasedModule::new(ring, vec!["1".into()]).expect("one label"),
                _ if n == degree => BasedModule::new(ring, vec![label.into()]).expect("one label"),
                _ => BasedModule::zero(ring),
            })
            .collect();
        Self::from_rule(ring, components, |p, _, q, _| if p == 0 || q == 0 { vec![ring.one()] } else { vec![] })
            .expect("exterior algebra")
    }

    pub fn rank(&self, n: usize) -> usize {
        self.components.get(n).map_or(0, BasedModule::rank)
    }

    /// Position of degree `n` in the flat basis of all components.
    pub fn offset(&self, n: usize) -> usize {
        (0..n).map(|k| self.rank(k)).sum()
    }

    pub fn label(&self, n: usize, k: usize) -> &str {
        &self.components[n].labels[k]
    }

    pub fn find_label(&self, label: &str) -> Option<(usize, usize)> {
        self.components
            .iter()
            .enumerate()
            .find_map(|(n, m)| m.labels.iter().position(|l| l == label).map(|k| (n, k)))
    }

    pub fn mult_matrix(&self, p: usize, q: usize) -> &Matrix {
        &self.mult[p][q]
    }

    pub fn unit(&self) -> Vec<Scalar> {
        vec![self.ring.one()]
    }

    pub fn basis(&self, n: usize, k: usize) -> Vec<Scalar> {
        unit_vector(self.ring, self.rank(n), k)
    }

    pub fn zero(&self, n: usize) -> Vec<Scalar> {
        vec![self.ring.zero(); self.rank(n)]
    }

    /// `ab`, or `None` past the degree bound.
    pub fn mul(&self, p: usize, a: &[Scalar], q: usize, b: &[Scalar]) -> Option<Vec<Scalar>> {
        if p + q > self.degree_bound {
            return None;
        }
        let ring = self.ring;
        let m = &self.mult[p][q];
        let rq = self.rank(q);
        let mut out = self.zero(p + q);
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !ring.is_zero(x)) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !ring.is_zero(y)) {
                let xy = ring.mul(x, y);
                for (k, o) in out.iter_mut().enumerate() {
                    let c = m.get(k, i * rq + j);
                    if !ring.is_zero(c) {
                        ring.add_mul_assign(o, &xy, c);
                    }
                }
            }
        }
        Some(out)
    }

    /// `a^k` for `a` in degree `n`.
    pub fn pow(&self, n: usize, a: &[Scalar], k: usize) -> Option<Vec<Scalar>> {
        let mut acc = self.unit();
        for j in 0..k {
            acc = self.mul(n * j, &acc, n, a)?;
        }
        Some(acc)
    }

    /// Violated laws with flat basis indices.
    pub fn violations(&self) -> Vec<Error> {
        let ring = self.ring;
        let d = self.degree_bound;
        let mut out = Vec::new();
        for p in 0..=d {
            for q in p..=d - p {
                for i in 0..self.rank(p) {
                    for j in 0..self.rank(q) {
                        let ab = self.mul(p, &self.basis(p, i), q, &self.basis(q, j)).expect("within bound");
                        let ba = self.mul(q, &self.basis(q, j), p, &self.basis(p, i)).expect("within bound");
                        let ba = if p * q % 2 == 1 { vec_scale(ring, &ring.from_i64(-1), &ba) } else { ba };
                        if ab != ba {
                            out.push(Error::NotCommutative(self.offset(p) + i, self.offset(q) + j));
                        }
                    }
                }
            }
        }
        for p in 1..=d {
            for q in 1..=d - p {
                for r in 1..=d - p - q {
                    for i in 0..self.rank(p) {
                        for j in 0..self.rank(q) {
                            for k in 0..self.rank(r) {
                                let (a, b, c) = (self.basis(p, i), self.basis(q, j), self.basis(r, k));
                                let left = self.mul(p + q, &self.mul(p, &a, q, &b).unwrap(), r, &c);
                                let right = self.mul(p, &a, q + r, &self.mul(q, &b, r, &c).unwrap());
                                if left != right {
                                    out.push(Error::NotAssociative(
                                        self.offset(p) + i,
                                        self.offset(q) + j,
                                        self.offset(r) + k,
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        for n in 0..=d {
            for k in 0..self.rank(n) {
                let e = self.basis(n, k);
                if self.mul(0, &self.unit(), n, &e).as_ref() != Some(&e) || self.mul(n, &e, 0, &self.unit()).as_ref() != Some(&e) {
                    out.push(Error::BadUnit(self.offset(n) + k));
                }
            }
        }
        out
    }
}

/// `γ_i(e_k)` on basis elements; `γ_0 = 1` and `γ_1 = id` unless stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GammaTable {
    values: BTreeMap<(usize, usize, usize), Vec<Scalar>>,
}

impl GammaTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, degree: usize, index: usize, i: usize, value: Vec<Scalar>) {
        self.values.insert((degree, index, i), value);
    }

    pub fn get(&self, degree: usize, index: usize, i: usize) -> Option<&Vec<Scalar>> {
        self.values.get(&(degree, index, i))
    }

    pub fn remove(&mut self, degree: usize, index: usize, i: usize) -> Option<Vec<Scalar>> {
        self.values.remove(&(degree, index, i))
    }

    /// `((degree, basis index, i), value)` in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Vec<Scalar>)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Keys `(n, k, i)` with `2 <= i` and `n i <= D` that a complete table must hold.
    pub fn required_keys(alg: &GradedAlgebra) -> Vec<(usize, usize, usize)> {
        let d = alg.degree_bound;
        let mut out = Vec::new();
        for n in 1..=d {
            for k in 0..alg.rank(n) {
                for i in 2..=d / n {
                    out.push((n, k, i));
                }
            }
        }
        out
    }

    pub fn missing(&self, alg: &GradedAlgebra) -> Vec<(usize, usize, usize)> {
        Self::required_keys(alg).into_iter().filter(|k| !self.values.contains_key(k)).collect()
    }
}

fn basis_gamma(alg: &GradedAlgebra, table: &GammaTable, n: usize, k: usize, i: usize) -> Result<Vec<Scalar>> {
    if let Some(v) = table.get(n, k, i) {
        return Ok(v.clone());
    }
    match i {
        0 => Ok(alg.unit()),
        1 => Ok(alg.basis(n, k)),
        _ => Err(Error::IncompleteTable(format!("γ_{i}({}) missing", alg.label(n, k)))),
    }
}

/// `γ_i(v)` for `v` in degree `n >= 1`, expanded through homogeneity and the sum rule.
pub fn gamma(alg: &GradedAlgebra, table: &GammaTable, n: usize, v: &[Scalar], i: usize) -> Result<Vec<Scalar>> {
    if n == 0 {
        return Err(Error::InvalidRange("divided powers are defined in positive degrees".into()));
    }
    if n * i > alg.degree_bound {
        return Err(Error::DegreeOutOfRange { degree: n * i, top: alg.degree_bound });
    }
    let ring = alg.ring;
    let support: Vec<(usize, &Scalar)> = v.iter().enumerate().filter(|(_, x)| !ring.is_zero(x)).collect();
    if i == 0 {
        return Ok(alg.unit());
    }
    if support.is_empty() {
        return Ok(alg.zero(n * i));
    }
    fn go(
        alg: &GradedAlgebra,
        table: &GammaTable,
        n: usize,
        support: &[(usize, &Scalar)],
        remaining: usize,
        degree: usize,
        acc: Vec<Scalar>,
        out: &mut Vec<Scalar>,
    ) -> Result<()> {
        let ring = alg.ring;
        let ((k, lambda), rest) = support.split_first().expect("non-empty support");
        let choices: Vec<usize> = if rest.is_empty() { vec![remaining] } else { (0..=remaining).collect() };
        for j in choices {
            let factor = vec_scale(ring, &ring.pow(lambda, j as u64), &basis_gamma(alg, table, n, *k, j)?);
            let next = alg.mul(degree, &acc, n * j, &factor).expect("within bound");
            if vec_is_zero(ring, &next) {
                continue;
            }
            if rest.is_empty() {
                *out = vec_add(ring, out, &next);
            } else {
                go(alg, table, n, rest, remaining - j, degree + n * j, next, out)?;
            }
        }
        Ok(())
    }
    let mut out = alg.zero(n * i);
    go(alg, table, n, &support, i, 0, alg.unit(), &mut out)?;
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct AxiomOptions {
    /// Random elements per degree on top of the basis.
    pub samples: usize,
    pub seed: u64,
    /// Skip instances that need missing table values instead of failing.
    pub partial: bool,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions { samples: 4, seed: 0, partial: false }
    }
}

pub const AXIOM_NAMES: [&str; 8] = [
    "(a) gamma_0, gamma_1",
    "(b) degrees",
    "(c) odd degrees",
    "(d) homogeneity",
    "(e) products",
    "(f) sums",
    "(g) products of elements",
    "(h) composition",
];

fn scalar_from_big(ring: RingSpec, n: &BigInt) -> Scalar {
    ring.from_bigint(n)
}

/// The axioms (a) to (h) on basis elements and seeded random combinations.
pub fn check_axioms(alg: &GradedAlgebra, table: &GammaTable) -> Result<CheckReport> {
    check_axioms_with(alg, table, AxiomOptions::default())
}

pub fn check_axioms_with(alg: &GradedAlgebra, table: &GammaTable, opts: AxiomOptions) -> Result<CheckReport> {
    let ring = alg.ring;
    let d = alg.degree_bound;
    if !opts.partial {
        if let Some(&(n, k, i)) = table.missing(alg).first() {
            return Err(Error::IncompleteTable(format!("γ_{i}({}) in degree {} missing", alg.label(n, k), n * i)));
        }
    }
    let eval = |n: usize, v: &[Scalar], i: usize| -> Result<Option<Vec<Scalar>>> {
        match gamma(alg, table, n, v, i) {
            Ok(x) => Ok(Some(x)),
            Err(Error::IncompleteTable(_)) if opts.partial => Ok(None),
            Err(e) => Err(e),
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let elements: Vec<Vec<Vec<Scalar>>> = (0..=d)
        .map(|n| {
            let r = alg.rank(n);
            if n == 0 || r == 0 {
                return Vec::new();
            }
            let mut xs: Vec<Vec<Scalar>> = (0..r).map(|k| alg.basis(n, k)).collect();
            for _ in 0..opts.samples {
                xs.push(crate::random::vector(&mut rng, ring, r, 3));
            }
            xs
        })
        .collect();
    let el = |n: usize, a: &[Scalar]| json!({"degree": n, "element": vector_to_json(a)});

    let mut ta = Tally::new(AXIOM_NAMES[0]);
    let mut tb = Tally::new(AXIOM_NAMES[1]);
    let mut tc = Tally::new(AXIOM_NAMES[2]).informational(ring.characteristic() == 2);
    let mut td = Tally::new(AXIOM_NAMES[3]);
    let mut te = Tally::new(AXIOM_NAMES[4]);
    let mut tf = Tally::new(AXIOM_NAMES[5]);
    let mut tg = Tally::new(AXIOM_NAMES[6]);
    let mut th = Tally::new(AXIOM_NAMES[7]);

    for (&(n, k, i), v) in table.entries() {
        let ok = n >= 1 && n <= d && k < alg.rank(n) && n * i <= d && v.len() == alg.rank(n * i);
        tb.record(ok, || json!({"degree": n, "index": k, "i": i, "length": v.len()}));
    }

    for n in 1..=d {
        for a in &elements[n] {
            let w = || el(n, a);
            if let Some(g0) = eval(n, a, 0)? {
                ta.record(g0 == alg.unit(), || json!({"i": 0, "at": w()}));
            }
            if let Some(g1) = eval(n, a, 1)? {
                ta.record(g1 == *a, || json!({"i": 1, "at": w()}));
            }
            for i in 2..=d / n {
                if n % 2 == 1 {
                    if let Some(g) = eval(n, a, i)? {
                        tc.record(vec_is_zero(ring, &g), || json!({"i": i, "at": w(), "value": vector_to_json(&g)}));
                    }
                }
            }
            let mut lambda = crate::random::scalar(&mut rng, ring, 3);
            if ring.is_zero(&lambda) {
                lambda = ring.from_i64(-1);
            }
            let la = vec_scale(ring, &lambda, a);
            for i in 1..=d / n {
                if let (Some(lhs), Some(g)) = (eval(n, &la, i)?, eval(n, a, i)?) {
                    let rhs = vec_scale(ring, &ring.pow(&lambda, i as u64), &g);
                    td.record(lhs == rhs, || json!({"i": i, "lambda": lambda.to_string(), "at": w()}));
                }
            }
            for i in 1..=d / n {
                for j in 1..=(d / n).saturating_sub(i) {
                    if let (Some(gi), Some(gj), Some(gij)) = (eval(n, a, i)?, eval(n, a, j)?, eval(n, a, i + j)?) {
                        let lhs = alg.mul(n * i, &gi, n * j, &gj).expect("within bound");
                        let c = scalar_from_big(ring, &binomial((i + j) as u64, i as i64));
                        te.record(lhs == vec_scale(ring, &c, &gij), || json!({"i": i, "j": j, "at": w()}));
                    }
                }
            }
            for j in 1..=d / n {
                let Some(gj) = eval(n, a, j)? else { continue };
                for i in 1..=d / (n * j) {
                    if let (Some(lhs), Some(gij)) = (eval(n * j, &gj, i)?, eval(n, a, i * j)?) {
                        let c = scalar_from_big(ring, &dp_coefficient(i as u64, j as u64)?);
                        th.record(lhs == vec_scale(ring, &c, &gij), || json!({"i": i, "j": j, "at": w()}));
                    }
                }
            }
        }
        for a in &elements[n] {
            for b in &elements[n] {
                let sum = vec_add(ring, a, b);
                for i in 1..=d / n {
                    let Some(lhs) = eval(n, &sum, i)? else { continue };
                    let mut rhs = alg.zero(n * i);
                    let mut complete = true;
                    for k in 0..=i {
                        match (eval(n, a, k)?, eval(n, b, i - k)?) {
                            (Some(x), Some(y)) => rhs = vec_add(ring, &rhs, &alg.mul(n * k, &x, n * (i - k), &y).unwrap()),
                            _ => complete = false,
                        }
                    }
                    if complete {
                        tf.record(lhs == rhs, || json!({"i": i, "a": el(n, a), "b": el(n, b)}));
                    }
                }
            }
        }
    }
    for p in 1..=d {
        for q in 1..=d - p {
            for a in &elements[p] {
                for b in &elements[q] {
                    let ab = alg.mul(p, a, q, b).expect("within bound");
                    for i in 1..=d / (p + q) {
                        let (Some(gab), Some(ga), Some(gb)) = (eval(p + q, &ab, i)?, eval(p, a, i)?, eval(q, b, i)?) else {
                            continue;
                        };
                        let fact = scalar_from_big(ring, &factorial(i as u64));
                        let first = vec_scale(ring, &fact, &alg.mul(p * i, &ga, q * i, &gb).unwrap());
                        let second = alg.mul(p * i, &alg.pow(p, a, i).unwrap(), q * i, &gb).unwrap();
                        let third = alg.mul(p * i, &ga, q * i, &alg.pow(q, b, i).unwrap()).unwrap();
                        let forms = [first, second, third];
                        let bad: Vec<usize> = (0..3).filter(|&f| forms[f] != gab).collect();
                        tg.record(bad.is_empty(), || json!({"i": i, "a": el(p, a), "b": el(q, b), "failing_forms": bad}));
                    }
                }
            }
        }
    }
    let mut report = CheckReport::default();
    for t in [ta, tb, tc, td, te, tf, tg, th] {
        report.push(t.finish());
    }
    Ok(report)
}
