//! Seeded generators of random test objects.

use rand::Rng;

use crate::chain::ChainComplex;
use crate::coefficients::{RingSpec, Scalar};
use crate::doldkan::Gamma;
use crate::linalg::{inverse, Matrix};
use crate::simplicial::SimplicialModule;

pub fn scalar<R: Rng>(rng: &mut R, ring: RingSpec, bound: i64) -> Scalar {
    ring.from_i64(rng.gen_range(-bound..=bound))
}

pub fn vector<R: Rng>(rng: &mut R, ring: RingSpec, len: usize, bound: i64) -> Vec<Scalar> {
    (0..len).map(|_| scalar(rng, ring, bound)).collect()
}

pub fn matrix<R: Rng>(rng: &mut R, ring: RingSpec, rows: usize, cols: usize, bound: i64) -> Matrix {
    let mut m = Matrix::zeros(ring, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, scalar(rng, ring, bound));
        }
    }
    m
}

/// A product of random elementary matrices and a permutation; invertible over every ring.
pub fn unimodular<R: Rng>(rng: &mut R, ring: RingSpec, n: usize) -> Matrix {
    let mut m = Matrix::identity(ring, n);
    if n < 2 {
        return m;
    }
    for _ in 0..2 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            m.row_axpy(a, b, &scalar(rng, ring, 2));
        }
    }
    let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
    m.swap_rows(a, b);
    m
}

/// Direct sum of discs `R <-k- R` and spheres `R`, with a random basis in each degree.
pub fn chain_complex<R: Rng>(rng: &mut R, ring: RingSpec, top: usize, max_rank: usize) -> ChainComplex {
    let mut ranks = vec![0usize; top + 1];
    // pieces[k] = (lower degree, coefficient) of a disc, or a sphere when coefficient is None
    let mut pieces: Vec<(usize, Option<Scalar>)> = Vec::new();
    for _ in 0..rng.gen_range(1..=2 * (top + 1)) {
        let n = rng.gen_range(0..=top);
        if n < top && rng.gen_bool(0.6) {
            if ranks[n] < max_rank && ranks[n + 1] < max_rank {
                let mut k = scalar(rng, ring, 3);
                if ring.is_zero(&k) {
                    k = ring.one();
                }
                ranks[n] += 1;
                ranks[n + 1] += 1;
                pieces.push((n, Some(k)));
            }
        } else if ranks[n] < max_rank {
            ranks[n] += 1;
            pieces.push((n, None));
        }
    }
    let mut fill = vec![0usize; top + 1];
    let mut diffs: Vec<Matrix> = (0..top).map(|k| Matrix::zeros(ring, ranks[k], ranks[k + 1])).collect();
    for (n, k) in pieces {
        match k {
            Some(k) => {
                let (lo, hi) = (fill[n], fill[n + 1]);
                diffs[n].set(lo, hi, k);
                fill[n] += 1;
                fill[n + 1] += 1;
            }
            None => fill[n] += 1,
        }
    }
    let changes: Vec<Matrix> = ranks.iter().map(|&r| unimodular(rng, ring, r)).collect();
    let diffs = (0..top)
        .map(|k| changes[k].mul(&diffs[k]).mul(&inverse(&changes[k + 1]).expect("unimodular")))
        .collect();
    ChainComplex::from_matrices(ring, &ranks, diffs).expect("shapes")
}

/// `Γ(C)` for a random `C`, conjugated levelwise by random invertible matrices.
pub fn simplicial_module<R: Rng>(rng: &mut R, ring: RingSpec, l: usize, max_rank: usize) -> SimplicialModule {
    let c = chain_complex(rng, ring, l, max_rank);
    let g = Gamma::new(&c, l);
    let x = &*g.module;
    let changes: Vec<Matrix> = (0..=l).map(|n| unimodular(rng, ring, x.rank(n))).collect();
    let inverses: Vec<Matrix> = changes.iter().map(|m| inverse(m).expect("unimodular")).collect();
    let faces = (0..=l)
        .map(|n| x.faces[n].iter().map(|d| changes[n - 1].mul(d).mul(&inverses[n])).collect())
        .collect();
    let degeneracies = (0..l)
        .map(|n| x.degeneracies[n].iter().map(|s| changes[n + 1].mul(s).mul(&inverses[n])).collect())
        .collect();
    SimplicialModule::new(ring, x.levels.clone(), faces, degeneracies).expect("shapes")
}
