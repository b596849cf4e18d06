use std::collections::HashMap;

use super::graded::{GammaTable, GradedAlgebra};
use crate::coefficients::{binomial, dp_coefficient, RingSpec, Scalar};
use crate::combinat::shuffles;
use crate::error::{Error, Result};
use crate::linalg::{inverse, invariants, vec_scale, BasedModule, Matrix, Submodule};

/// A generator `(label, degree)`.
pub type Generator = (String, usize);

fn check_generators(generators: &[Generator]) -> Result<()> {
    if let Some((l, _)) = generators.iter().find(|(_, d)| *d == 0) {
        return Err(Error::InvalidRange(format!("generator {l} needs positive degree")));
    }
    Ok(())
}

/// Admissible exponent vectors by degree, lexicographic within a degree.
fn monomials(generators: &[Generator], bound: usize) -> Vec<Vec<Vec<usize>>> {
    let mut by_degree = vec![Vec::new(); bound + 1];
    fn go(g: &[Generator], k: usize, deg: usize, bound: usize, cur: &mut Vec<usize>, out: &mut [Vec<Vec<usize>>]) {
        if k == g.len() {
            out[deg].push(cur.clone());
            return;
        }
        let d = g[k].1;
        let top = if d % 2 == 1 { 1 } else { (bound - deg) / d };
        for e in 0..=top.min((bound - deg) / d) {
            cur.push(e);
            go(g, k + 1, deg + e * d, bound, cur, out);
            cur.pop();
        }
    }
    go(generators, 0, 0, bound, &mut Vec::new(), &mut by_degree);
    for v in &mut by_degree {
        v.sort();
    }
    by_degree
}

fn monomial_label(generators: &[Generator], e: &[usize]) -> String {
    let parts: Vec<String> = generators
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|((l, _), &k)| if k == 1 { l.clone() } else { format!("{l}^[{k}]") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// `Γ_R` on the given generators: exterior on odd ones, divided power algebras
/// on even ones, with the table of `γ_i` on every basis monomial.
pub fn free_divided_power(generators: &[Generator], ring: RingSpec, bound: usize) -> Result<(GradedAlgebra, GammaTable)> {
    check_generators(generators)?;
    let monos = monomials(generators, bound);
    let mut index: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
    for (n, ms) in monos.iter().enumerate() {
        for (k, m) in ms.iter().enumerate() {
            index.insert(m.clone(), (n, k));
        }
    }
    let components = monos
        .iter()
        .map(|ms| BasedModule::new(ring, ms.iter().map(|m| monomial_label(generators, m)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let product = |p: usize, i: usize, q: usize, j: usize| -> Vec<Scalar> {
        let (a, b) = (&monos[p][i], &monos[q][j]);
        let mut out = vec![ring.zero(); monos[p + q].len()];
        let mut coeff = num_bigint::BigInt::from(1);
        let mut sign = 1i64;
        let mut sum = Vec::with_capacity(a.len());
        for k in 0..a.len() {
            if generators[k].1 % 2 == 1 {
                if a[k] + b[k] > 1 {
                    return out;
                }
                if b[k] == 1 {
                    let passed = (k + 1..a.len()).filter(|&l| generators[l].1 % 2 == 1 && a[l] == 1).count();
                    if passed % 2 == 1 {
                        sign = -sign;
                    }
                }
            } else {
                coeff *= binomial((a[k] + b[k]) as u64, a[k] as i64);
            }
            sum.push(a[k] + b[k]);
        }
        let (_, t) = index[&sum];
        out[t] = ring.mul(&ring.from_bigint(&coeff), &ring.from_i64(sign));
        out
    };
    let alg = GradedAlgebra::from_rule(ring, components, product)?;

    let mut table = GammaTable::new();
    for n in 1..=bound {
        for k in 0..monos[n].len() {
            for i in 2..=bound / n {
                let v = gamma_monomial(&alg, generators, &monos, &index, &monos[n][k], n, i)?;
                table.set(n, k, i, v);
            }
        }
    }
    Ok((alg, table))
}

fn gamma_monomial(
    alg: &GradedAlgebra,
    generators: &[Generator],
    monos: &[Vec<Vec<usize>>],
    index: &HashMap<Vec<usize>, (usize, usize)>,
    m: &[usize],
    n: usize,
    i: usize,
) -> Result<Vec<Scalar>> {
    let ring = alg.ring;
    let factors: Vec<usize> = (0..m.len()).filter(|&k| m[k] > 0).collect();
    let first = factors[0];
    if factors.len() == 1 {
        if generators[first].1 % 2 == 1 {
            return Ok(alg.zero(n * i));
        }
        let mut target = m.to_vec();
        target[first] = m[first] * i;
        let (t, j) = index[&target];
        let c = ring.from_bigint(&dp_coefficient(i as u64, m[first] as u64)?);
        return Ok(vec_scale(ring, &c, &alg.basis(t, j)));
    }
    let mut head = vec![0; m.len()];
    head[first] = m[first];
    let mut rest = m.to_vec();
    rest[first] = 0;
    let hd = generators[first].1 * m[first];
    let (_, hk) = index[&head];
    let power = alg.pow(hd, &alg.basis(hd, hk), i).expect("within bound");
    let g = gamma_monomial(alg, generators, monos, index, &rest, n - hd, i)?;
    Ok(alg.mul(hd * i, &power, (n - hd) * i, &g).expect("within bound"))
}

/// Largest tensor block examined by [`invariants_model`].
pub const WORD_BLOCK_BOUND: usize = 2000;

/// `⊕_n (M^{⊗n})^{Σ_n}` with the shuffle product, compared with [`free_divided_power`].
#[derive(Clone, Debug)]
pub struct InvariantsModel {
    pub algebra: GradedAlgebra,
    pub free: GradedAlgebra,
    /// `Φ: Γ(M) -> invariants`, one matrix per degree.
    pub phi: Vec<Matrix>,
    pub ranks_match: bool,
    pub iso: bool,
    pub multiplicative: bool,
}

impl InvariantsModel {
    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.algebra.degree_bound).map(|n| self.algebra.rank(n)).collect()
    }

    pub fn isomorphic(&self) -> bool {
        self.ranks_match && self.iso && self.multiplicative
    }
}

struct Words {
    /// `blocks[d][n]`: words of length `n` and degree `d`.
    blocks: Vec<Vec<Vec<Vec<usize>>>>,
    index: HashMap<Vec<usize>, usize>,
}

fn words(generators: &[Generator], bound: usize) -> Result<Words> {
    let mut blocks = vec![vec![Vec::new(); bound + 1]; bound + 1];
    fn go(g: &[Generator], deg: usize, bound: usize, cur: &mut Vec<usize>, out: &mut [Vec<Vec<Vec<usize>>>]) {
        out[deg][cur.len()].push(cur.clone());
        for (k, (_, d)) in g.iter().enumerate() {
            if deg + d <= bound {
                cur.push(k);
                go(g, deg + d, bound, cur, out);
                cur.pop();
            }
        }
    }
    go(generators, 0, bound, &mut Vec::new(), &mut blocks);
    let mut index = HashMap::new();
    for per_len in &mut blocks {
        for b in per_len.iter_mut() {
            if b.len() > WORD_BLOCK_BOUND {
                return Err(Error::BoundExceeded(format!("{} words in one tensor block", b.len())));
            }
            b.sort();
            for (k, w) in b.iter().enumerate() {
                index.insert(w.clone(), k);
            }
        }
    }
    Ok(Words { blocks, index })
}


/// Shuffle product of two words with Koszul signs, as `(word, sign)` terms.
fn shuffle_words(generators: &[Generator], u: &[usize], v: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let (p, q) = (u.len(), v.len());
    shuffles(p, q)
        .into_iter()
        .map(|sigma| {
            let mut w = vec![0; p + q];
            for (a, &pos) in sigma.images[..p].iter().enumerate() {
                w[pos] = u[a];
            }
            for (b, &pos) in sigma.images[p..].iter().enumerate() {
                w[pos] = v[b];
            }
            let mut sign = 1;
            for (a, &pa) in sigma.images[..p].iter().enumerate() {
                for (b, &pb) in sigma.images[p..].iter().enumerate() {
                    if pb < pa && generators[u[a]].1 % 2 == 1 && generators[v[b]].1 % 2 == 1 {
                        sign = -sign;
                    }
                }
            }
            (w, sign)
        })
        .collect()
}

pub fn invariants_model(generators: &[Generator], ring: RingSpec, bound: usize) -> Result<InvariantsModel> {
    check_generators(generators)?;
    if !(ring == RingSpec::Integers || ring.is_field()) {
        return Err(Error::WrongRing(ring.to_string()));
    }
    let ws = words(generators, bound)?;
    // subs[d][n]: invariants of the (d, n) block
    let mut subs: Vec<Vec<Submodule>> = Vec::with_capacity(bound + 1);
    for d in 0..=bound {
        let mut row = Vec::with_capacity(bound + 1);
        for n in 0..=bound {
            let block = &ws.blocks[d][n];
            let r = block.len();
            let actions: Vec<Matrix> = (0..n.saturating_sub(1))
                .map(|k| {
                    let mut m = Matrix::zeros(ring, r, r);
                    for (c, w) in block.iter().enumerate() {
                        let mut t = w.clone();
                        t.swap(k, k + 1);
                        let odd = generators[w[k]].1 % 2 == 1 && generators[w[k + 1]].1 % 2 == 1;
                        m.set(ws.index[&t], c, ring.from_i64(if odd { -1 } else { 1 }));
                    }
                    m
                })
                .collect();
            row.push(invariants(ring, r, &actions)?);
        }
        subs.push(row);
    }
    // component basis element -> (length, column)
    let layout: Vec<Vec<(usize, usize)>> = (0..=bound)
        .map(|d| (0..=bound).flat_map(|n| (0..subs[d][n].rank()).map(move |c| (n, c))).collect())
        .collect();
    let offsets: Vec<Vec<usize>> = (0..=bound)
        .map(|d| {
            let mut acc = 0;
            (0..=bound)
                .map(|n| {
                    let o = acc;
                    acc += subs[d][n].rank();
                    o
                })
                .collect()
        })
        .collect();
    let components = (0..=bound)
        .map(|d| {
            let labels = layout[d].iter().map(|&(n, c)| if d == 0 { "1".to_string() } else { format!("T{d}.{n}.{c}") }).collect();
            BasedModule::new(ring, labels)
        })
        .collect::<Result<Vec<_>>>()?;

    // product of ambient block vectors (d1, n1) x (d2, n2) -> (d1 + d2, n1 + n2)
    let block_product = |d1: usize, n1: usize, x: &[Scalar], d2: usize, n2: usize, y: &[Scalar]| -> Vec<Scalar> {
        let target = &ws.blocks[d1 + d2][n1 + n2];
        let mut out = vec![ring.zero(); target.len()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !ring.is_zero(a)) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !ring.is_zero(b)) {
                let ab = ring.mul(a, b);
                for (w, s) in shuffle_words(generators, &ws.blocks[d1][n1][i], &ws.blocks[d2][n2][j]) {
                    let k = ws.index[&w];
                    let term = if s > 0 { ab.clone() } else { ring.neg(&ab) };
                    out[k] = ring.add(&out[k], &term);
                }
            }
        }
        out
    };
    let to_component = |d: usize, n: usize, v: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![ring.zero(); layout[d].len()];
        for (c, x) in subs[d][n].coords(v).into_iter().enumerate() {
            out[offsets[d][n] + c] = x;
        }
        out
    };
    let product = |p: usize, i: usize, q: usize, j: usize| -> Vec<Scalar> {
        let ((n1, c1), (n2, c2)) = (layout[p][i], layout[q][j]);
        let x = subs[p][n1].basis.column(c1);
        let y = subs[q][n2].basis.column(c2);
        to_component(p + q, n1 + n2, &block_product(p, n1, &x, q, n2, &y))
    };
    let algebra = GradedAlgebra::from_rule(ring, components, product)?;

    let (free, _) = free_divided_power(generators, ring, bound)?;
    let monos = monomials(generators, bound);
    let ranks_match = (0..=bound).all(|d| free.rank(d) == algebra.rank(d));
    let mut phi = Vec::with_capacity(bound + 1);
    let mut all_in = true;
    for d in 0..=bound {
        let mut cols = Vec::with_capacity(monos[d].len());
        for m in &monos[d] {
            // ordered shuffle product of the factor words
            let mut acc: (usize, usize, Vec<Scalar>) = (0, 0, vec![ring.one()]);
            for (k, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let deg = generators[k].1;
                let (fd, fnl) = if deg % 2 == 1 { (deg, 1) } else { (deg * e, e) };
                let word = vec![k; fnl];
                let mut f = vec![ring.zero(); ws.blocks[fd][fnl].len()];
                f[ws.index[&word]] = ring.one();
                let v = block_product(acc.0, acc.1, &acc.2, fd, fnl, &f);
                acc = (acc.0 + fd, acc.1 + fnl, v);
            }
            let (dd, nn, v) = acc;
            debug_assert_eq!(dd, d);
            all_in &= subs[d][nn].contains(&v);
            cols.push(to_component(d, nn, &v));
        }
        phi.push(Matrix::from_columns(ring, algebra.rank(d), &cols));
    }
    let iso = ranks_match && all_in && phi.iter().all(|m| m.cols() == 0 || inverse(m).is_ok());
    let mut multiplicative = all_in;
    for p in 0..=bound {
        for q in 0..=bound - p {
            for i in 0..free.rank(p) {
                for j in 0..free.rank(q) {
                    let lhs = phi[p + q].apply(&free.mul(p, &free.basis(p, i), q, &free.basis(q, j)).unwrap());
                    let rhs = algebra.mul(p, &phi[p].column(i), q, &phi[q].column(j)).unwrap();
                    multiplicative &= lhs == rhs;
                }
            }
        }
    }
    Ok(InvariantsModel { algebra, free, phi, ranks_match, iso, multiplicative })
}
