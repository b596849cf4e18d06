//! Combinatorics of the simplex category and of shuffles.

use std::fmt;

use num_bigint::BigInt;

use crate::coefficients::{binomial, factorial};
use crate::error::{Error, Result};

/// Default cap on `n * i` for block shuffle enumeration.
pub const ENUMERATION_BOUND: usize = 12;

/// A weakly increasing map `[n] -> [p]`, stored as its value tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneMap {
    pub target_top: usize,
    pub values: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(target_top: usize, values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidRange("a monotone map needs a non-empty source".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) || values.iter().any(|&v| v > target_top) {
            return Err(Error::InvalidRange(format!("{values:?} is not monotone into [{target_top}]")));
        }
        Ok(MonotoneMap { target_top, values })
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap { target_top: n, values: (0..=n).collect() }
    }

    /// `δ_i: [n-1] -> [n]`, skipping `i`.
    pub fn coface(n: usize, i: usize) -> Self {
        assert!(n >= 1 && i <= n);
        MonotoneMap { target_top: n, values: (0..n).map(|k| if k < i { k } else { k + 1 }).collect() }
    }

    /// `σ_i: [n+1] -> [n]`, hitting `i` twice.
    pub fn codegeneracy(n: usize, i: usize) -> Self {
        assert!(i <= n);
        MonotoneMap { target_top: n, values: (0..=n + 1).map(|k| if k <= i { k } else { k - 1 }).collect() }
    }

    pub fn source_top(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.target_top
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_identity(&self) -> bool {
        self.target_top == self.source_top() && self.is_injective()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MonotoneMap) -> MonotoneMap {
        assert_eq!(inner.target_top, self.source_top(), "composing {self} after {inner}");
        MonotoneMap { target_top: self.target_top, values: inner.values.iter().map(|&k| self.values[k]).collect() }
    }

    /// Positions `j` with `f(j) = f(j+1)`; a surjection is `σ` applied at these, largest first.
    pub fn repeats(&self) -> Vec<usize> {
        (0..self.source_top()).filter(|&j| self.values[j] == self.values[j + 1]).collect()
    }

    /// Target points not hit, increasing.
    pub fn missing(&self) -> Vec<usize> {
        (0..=self.target_top).filter(|v| self.values.binary_search(v).is_err()).collect()
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All monotone `[m] -> [n]`, lexicographic in the value tuple.
pub fn monotone_maps(m: usize, n: usize) -> Vec<MonotoneMap> {
    fn go(m: usize, n: usize, current: &mut Vec<usize>, out: &mut Vec<MonotoneMap>) {
        if current.len() == m + 1 {
            out.push(MonotoneMap { target_top: n, values: current.clone() });
            return;
        }
        let lo = current.last().copied().unwrap_or(0);
        for v in lo..=n {
            current.push(v);
            go(m, n, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(m, n, &mut Vec::with_capacity(m + 1), &mut out);
    out
}

/// All monotone surjections `[n] ->> [p]`, lexicographic in the value tuple.
pub fn monotone_surjections(n: usize, p: usize) -> Result<Vec<MonotoneMap>> {
    if p > n {
        return Err(Error::InvalidRange(format!("no surjection [{n}] ->> [{p}]")));
    }
    fn go(n: usize, p: usize, current: &mut Vec<usize>, out: &mut Vec<MonotoneMap>) {
        let last = *current.last().unwrap();
        if current.len() == n + 1 {
            if last == p {
                out.push(MonotoneMap { target_top: p, values: current.clone() });
            }
            return;
        }
        let remaining = n + 1 - current.len();
        if last + remaining >= p {
            current.push(last);
            go(n, p, current, out);
            current.pop();
        }
        if last < p {
            current.push(last + 1);
            go(n, p, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(n, p, &mut vec![0], &mut out);
    Ok(out)
}

/// `f = mono ∘ epi`, the unique epi-mono factorization.
pub fn epi_mono_factorize(f: &MonotoneMap) -> (MonotoneMap, MonotoneMap) {
    let mut image = f.values.clone();
    image.dedup();
    let p = image.len() - 1;
    let mut epi = Vec::with_capacity(f.values.len());
    let mut k = 0;
    for &v in &f.values {
        while image[k] != v {
            k += 1;
        }
        epi.push(k);
    }
    (MonotoneMap { target_top: p, values: epi }, MonotoneMap { target_top: f.target_top, values: image })
}

/// A permutation of `{0..N-1}` by its image list, with its sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    pub images: Vec<usize>,
    pub sign: i8,
}

impl SignedPermutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(Error::InvalidRange(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        let sign = parity_sign(&images);
        Ok(SignedPermutation { images, sign })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation { images: (0..n).collect(), sign: 1 }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SignedPermutation) -> SignedPermutation {
        SignedPermutation {
            images: inner.images.iter().map(|&k| self.images[k]).collect(),
            sign: self.sign * inner.sign,
        }
    }

    /// Permutation moving whole blocks of size `n`: block `k` goes to block `xi[k]`.
    pub fn block_permutation(xi: &[usize], n: usize) -> SignedPermutation {
        let images = (0..xi.len() * n).map(|k| xi[k / n] * n + k % n).collect::<Vec<_>>();
        let sign = parity_sign(&images);
        SignedPermutation { images, sign }
    }

    /// Parse the cycle notation `(0,2)(1,4)(3,5)` on `{0..len-1}`.
    pub fn from_cycles(len: usize, text: &str) -> Result<Self> {
        let mut images: Vec<usize> = (0..len).collect();
        for cycle in text.split(')').map(|c| c.trim().trim_start_matches('(')).filter(|c| !c.is_empty()) {
            let pts: Vec<usize> = cycle
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{cycle}: {e}"))))
                .collect::<Result<_>>()?;
            for w in 0..pts.len() {
                let (a, b) = (pts[w], pts[(w + 1) % pts.len()]);
                if a >= len || b >= len {
                    return Err(Error::InvalidRange(format!("point out of range in {text}")));
                }
                images[a] = b;
            }
        }
        SignedPermutation::new(images)
    }
}

fn parity_sign(images: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            if images[a] > images[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for x in start..n {
            if n - x < k - current.len() {
                break;
            }
            current.push(x);
            go(x + 1, n, k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn permutation_from_blocks(blocks: &[Vec<usize>]) -> SignedPermutation {
    let images: Vec<usize> = blocks.iter().flatten().copied().collect();
    let sign = parity_sign(&images);
    SignedPermutation { images, sign }
}

/// All `(p, q)`-shuffles: increasing on `0..p` and on `p..p+q`.
pub fn shuffles(p: usize, q: usize) -> Vec<SignedPermutation> {
    combinations(p + q, p)
        .into_iter()
        .map(|first| {
            let second: Vec<usize> = (0..p + q).filter(|x| first.binary_search(x).is_err()).collect();
            permutation_from_blocks(&[first, second])
        })
        .collect()
}

fn check_bound(n: usize, i: usize, bound: usize) -> Result<()> {
    if n == 0 || i == 0 {
        return Err(Error::InvalidRange(format!("block shuffles need n, i >= 1, got ({n}, {i})")));
    }
    if n * i > bound {
        return Err(Error::BoundExceeded(format!("n*i = {} exceeds the enumeration bound {bound}", n * i)));
    }
    Ok(())
}

/// All of `Sh(n, ..., n)` with `i` blocks.
pub fn block_shuffles(n: usize, i: usize) -> Result<Vec<SignedPermutation>> {
    block_shuffles_bounded(n, i, ENUMERATION_BOUND)
}

pub fn block_shuffles_bounded(n: usize, i: usize, bound: usize) -> Result<Vec<SignedPermutation>> {
    check_bound(n, i, bound)?;
    fn go(n: usize, free: &[usize], blocks: &mut Vec<Vec<usize>>, out: &mut Vec<SignedPermutation>) {
        if free.is_empty() {
            out.push(permutation_from_blocks(blocks));
            return;
        }
        for pick in combinations(free.len(), n) {
            let block: Vec<usize> = pick.iter().map(|&k| free[k]).collect();
            let rest: Vec<usize> = free.iter().copied().filter(|x| block.binary_search(x).is_err()).collect();
            blocks.push(block);
            go(n, &rest, blocks, out);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &(0..n * i).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    Ok(out)
}

/// Canonical representatives of `Sh(n, ..., n) / Σ_i`: block minima increase.
pub fn block_shuffle_cosets(n: usize, i: usize) -> Result<Vec<SignedPermutation>> {
    block_shuffle_cosets_bounded(n, i, ENUMERATION_BOUND)
}

pub fn block_shuffle_cosets_bounded(n: usize, i: usize, bound: usize) -> Result<Vec<SignedPermutation>> {
    check_bound(n, i, bound)?;
    fn go(n: usize, free: &[usize], blocks: &mut Vec<Vec<usize>>, out: &mut Vec<SignedPermutation>) {
        if free.is_empty() {
            out.push(permutation_from_blocks(blocks));
            return;
        }
        for pick in combinations(free.len() - 1, n - 1) {
            let mut block = vec![free[0]];
            block.extend(pick.iter().map(|&k| free[k + 1]));
            let rest: Vec<usize> = free.iter().copied().filter(|x| block.binary_search(x).is_err()).collect();
            blocks.push(block);
            go(n, &rest, blocks, out);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &(0..n * i).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    Ok(out)
}

/// Degeneracy indices hitting the `j`-th factor (1-based): `σ(k)` for `k`
/// outside block `j`, ascending, i.e. in order of application.
pub fn degeneracy_word(sigma: &SignedPermutation, j: usize, n: usize, i: usize) -> Result<Vec<usize>> {
    if j == 0 || j > i {
        return Err(Error::InvalidBlock { block: j, blocks: i });
    }
    if sigma.len() != n * i {
        return Err(Error::InvalidRange(format!("permutation of {} points for {i} blocks of size {n}", sigma.len())));
    }
    let block = (j - 1) * n..j * n;
    let mut word: Vec<usize> = (0..n * i).filter(|k| !block.contains(k)).map(|k| sigma.images[k]).collect();
    word.sort_unstable();
    Ok(word)
}

/// `(ni)! / ((n!)^i i!)`.
pub fn coset_count(n: u64, i: u64) -> BigInt {
    factorial(n * i) / (num_traits::pow(factorial(n), i as usize) * factorial(i))
}

/// The product form `(prod_{j=2}^{i} C(nj, n)) / i!` of [`coset_count`].
pub fn coset_count_product(n: u64, i: u64) -> BigInt {
    let prod = (2..=i).fold(BigInt::from(1), |acc, j| acc * binomial(n * j, n as i64));
    prod / factorial(i)
}

/// Both sides of the decomposition count: cosets with `i` blocks versus
/// cosets with `i-1` blocks times the `C(ni-1, n-1)` placements of the last block.
pub fn counting_identity(n: u64, i: u64) -> (BigInt, BigInt) {
    assert!(n >= 1 && i >= 1);
    let lhs = coset_count(n, i);
    let rhs = if i == 1 { BigInt::from(1) } else { coset_count(n, i - 1) * binomial(n * i - 1, (n - 1) as i64) };
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_monotone(n: usize, p: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let total = (p + 1).pow((n + 1) as u32);
        for code in 0..total {
            let mut c = code;
            let mut v = Vec::new();
            for _ in 0..=n {
                v.push(c % (p + 1));
                c /= p + 1;
            }
            v.reverse();
            out.push(v);
        }
        out.sort();
        out.into_iter().filter(|v| v.windows(2).all(|w| w[0] <= w[1])).collect()
    }

    #[test]
    fn surjection_enumeration() {
        let s = monotone_surjections(2, 1).unwrap();
        assert_eq!(s.iter().map(|m| m.values.clone()).collect::<Vec<_>>(), vec![vec![0, 0, 1], vec![0, 1, 1]]);
        assert_eq!(monotone_surjections(3, 3).unwrap(), vec![MonotoneMap::identity(3)]);
        assert_eq!(monotone_surjections(4, 2).unwrap().len(), 6);
        assert!(monotone_surjections(1, 2).is_err());
        for n in 0..=6 {
            for p in 0..=n {
                let expected: Vec<Vec<usize>> = brute_force_monotone(n, p)
                    .into_iter()
                    .filter(|v| MonotoneMap { target_top: p, values: v.clone() }.is_surjective())
                    .collect();
                let got: Vec<Vec<usize>> = monotone_surjections(n, p).unwrap().into_iter().map(|m| m.values).collect();
                assert_eq!(got, expected);
            }
        }
        for m in 0..4 {
            for n in 0..4 {
                let got: Vec<Vec<usize>> = monotone_maps(m, n).into_iter().map(|f| f.values).collect();
                assert_eq!(got, brute_force_monotone(m, n));
            }
        }
    }

    #[test]
    fn factorization_examples() {
        let f = MonotoneMap::new(3, vec![0, 1, 1, 3]).unwrap();
        let (e, m) = epi_mono_factorize(&f);
        assert_eq!(e, MonotoneMap::new(2, vec![0, 1, 1, 2]).unwrap());
        assert_eq!(m, MonotoneMap::new(3, vec![0, 1, 3]).unwrap());
        let (e, m) = epi_mono_factorize(&MonotoneMap::identity(2));
        assert!(e.is_identity() && m.is_identity());
        let (e, m) = epi_mono_factorize(&MonotoneMap::new(1, vec![0, 0]).unwrap());
        assert_eq!((e.values, e.target_top), (vec![0, 0], 0));
        assert_eq!((m.values, m.target_top), (vec![0], 1));
    }

    #[test]
    fn shuffle_examples() {
        let s = shuffles(1, 1);
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].sign, s[1].sign), (1, -1));
        assert_eq!(shuffles(0, 3), vec![SignedPermutation::identity(3)]);
        let s = shuffles(2, 2);
        assert_eq!(s.len(), 6);
        assert_eq!(s.iter().map(|p| p.sign as i32).sum::<i32>(), 2);
    }

    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn shuffles_match_filtered_symmetric_group() {
        for (p, q) in [(1, 1), (2, 2), (1, 3), (2, 3), (3, 2)] {
            let mut expected: Vec<(Vec<usize>, i8)> = all_permutations(p + q)
                .into_iter()
                .filter(|s| s[..p].windows(2).all(|w| w[0] < w[1]) && s[p..].windows(2).all(|w| w[0] < w[1]))
                .map(|s| {
                    let sign = SignedPermutation::new(s.clone()).unwrap().sign;
                    (s, sign)
                })
                .collect();
            expected.sort();
            let mut got: Vec<(Vec<usize>, i8)> = shuffles(p, q).into_iter().map(|s| (s.images, s.sign)).collect();
            got.sort();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn coset_examples() {
        assert_eq!(block_shuffle_cosets(1, 2).unwrap(), vec![SignedPermutation::identity(2)]);
        assert_eq!(block_shuffles(2, 3).unwrap().len(), 90);
        assert_eq!(block_shuffle_cosets(2, 3).unwrap().len(), 15);
        assert_eq!(block_shuffle_cosets(2, 2).unwrap().len(), 3);
        assert!(matches!(block_shuffle_cosets(5, 3), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn degeneracy_word_examples() {
        let sigma = SignedPermutation::from_cycles(6, "(0,2)(1,4)(3,5)").unwrap();
        assert_eq!(sigma.images, vec![2, 4, 0, 5, 1, 3]);
        assert_eq!(degeneracy_word(&sigma, 2, 2, 3).unwrap(), vec![1, 2, 3, 4]);
        let id = SignedPermutation::identity(2);
        assert_eq!(degeneracy_word(&id, 1, 1, 2).unwrap(), vec![1]);
        assert_eq!(degeneracy_word(&id, 2, 1, 2).unwrap(), vec![0]);
        assert!(matches!(degeneracy_word(&id, 3, 1, 2), Err(Error::InvalidBlock { block: 3, blocks: 2 })));
    }

    #[test]
    fn counting_forms_agree() {
        for n in 1..=4 {
            for i in 1..=4 {
                let (l, r) = counting_identity(n, i);
                assert_eq!(l, r);
                assert_eq!(coset_count_product(n, i), l);
            }
        }
    }
}
