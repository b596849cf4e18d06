//! Exact coefficient rings: the integers, the rationals and `Z/m`.
//!
//! A [`Scalar`] is a bare canonical value; the [`RingSpec`] that owns it does
//! the arithmetic. Residues live in `[0, m)`, fractions are fully reduced with
//! positive denominator, so `==` on scalars of the same ring is ring equality.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    Rationals,
    IntegersMod(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Residue(u64),
}

impl RingSpec {
    pub fn integers_mod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidRange(format!("modulus must be >= 2, got {m}")));
        }
        Ok(RingSpec::IntegersMod(m))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            RingSpec::Integers | RingSpec::Rationals => 0,
            RingSpec::IntegersMod(m) => *m,
        }
    }

    /// True for the rationals and for `Z/p` with `p` prime.
    pub fn is_field(&self) -> bool {
        match self {
            RingSpec::Integers => false,
            RingSpec::Rationals => true,
            RingSpec::IntegersMod(m) => is_prime(*m),
        }
    }

    /// `Z/m` with composite `m`.
    pub(crate) fn is_composite_modulus(&self) -> bool {
        matches!(self, RingSpec::IntegersMod(m) if !is_prime(*m))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            RingSpec::Integers => Scalar::Int(BigInt::zero()),
            RingSpec::Rationals => Scalar::Rat(BigRational::zero()),
            RingSpec::IntegersMod(_) => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            RingSpec::Integers => Scalar::Int(BigInt::one()),
            RingSpec::Rationals => Scalar::Rat(BigRational::one()),
            RingSpec::IntegersMod(_) => Scalar::Residue(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            RingSpec::Integers => Scalar::Int(n.clone()),
            RingSpec::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            RingSpec::IntegersMod(m) => {
                let r = n.mod_floor(&BigInt::from(*m));
                Scalar::Residue(r.to_u64().expect("residue below modulus fits"))
            }
        }
    }

    /// `p/q` in the rationals; in the other rings `q` must be a unit.
    pub fn from_ratio(&self, p: &BigInt, q: &BigInt) -> Result<Scalar> {
        if q.is_zero() {
            return Err(Error::NotInvertible("zero denominator".into()));
        }
        match self {
            RingSpec::Rationals => Ok(Scalar::Rat(BigRational::new(p.clone(), q.clone()))),
            _ => self.div(&self.from_bigint(p), &self.from_bigint(q)),
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            RingSpec::IntegersMod(m) => *m,
            _ => unreachable!(),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Int(x) => x.is_zero(),
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Int(x) => x.is_one(),
            Scalar::Rat(x) => x.is_one(),
            Scalar::Residue(r) => *r == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Residue(x), Scalar::Residue(y)) => {
                let m = self.modulus() as u128;
                Scalar::Residue(((*x as u128 + *y as u128) % m) as u64)
            }
            _ => panic!("mixed scalar kinds in {self}: {a:?}, {b:?}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Int(x) => Scalar::Int(-x),
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Residue(r) => {
                let m = self.modulus();
                Scalar::Residue(if *r == 0 { 0 } else { m - r })
            }
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x - y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Residue(x), Scalar::Residue(y)) => {
                let m = self.modulus() as u128;
                Scalar::Residue(((*x as u128 * *y as u128) % m) as u64)
            }
            _ => panic!("mixed scalar kinds in {self}: {a:?}, {b:?}"),
        }
    }

    /// `acc += a * b`, the inner step of every matrix routine.
    pub(crate) fn add_mul_assign(&self, acc: &mut Scalar, a: &Scalar, b: &Scalar) {
        match (acc, a, b) {
            (Scalar::Int(z), Scalar::Int(x), Scalar::Int(y)) => *z += x * y,
            (Scalar::Residue(z), Scalar::Residue(x), Scalar::Residue(y)) => {
                let m = self.modulus() as u128;
                *z = ((*z as u128 + (*x as u128 * *y as u128) % m) % m) as u64;
            }
            (acc, a, b) => {
                let p = self.mul(a, b);
                *acc = self.add(acc, &p);
            }
        }
    }

    pub fn pow(&self, a: &Scalar, k: u64) -> Scalar {
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Int(x) => x.abs().is_one(),
            Scalar::Rat(x) => !x.is_zero(),
            Scalar::Residue(r) => r.gcd(&self.modulus()) == 1,
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if !self.is_unit(a) {
            return Err(Error::NotInvertible(format!("{a} in {self}")));
        }
        Ok(match a {
            Scalar::Int(x) => Scalar::Int(x.clone()),
            Scalar::Rat(x) => Scalar::Rat(x.recip()),
            Scalar::Residue(r) => {
                let m = self.modulus() as i128;
                let (g, x, _) = ext_gcd(*r as i128, m);
                debug_assert_eq!(g, 1);
                Scalar::Residue(x.rem_euclid(m) as u64)
            }
        })
    }

    /// Exact division `a / b`; over the integers `b` must divide `a`, over `Z/m`
    /// `b` must be a unit.
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => {
                if y.is_zero() || !(x % y).is_zero() {
                    return Err(Error::NotInvertible(format!("{y} does not divide {x}")));
                }
                Ok(Scalar::Int(x / y))
            }
            _ => Ok(self.mul(a, &self.inv(b)?)),
        }
    }

    /// Integer representative of an integer or residue.
    pub fn lift(&self, a: &Scalar) -> Option<BigInt> {
        match a {
            Scalar::Int(x) => Some(x.clone()),
            Scalar::Residue(r) => Some(BigInt::from(*r)),
            Scalar::Rat(x) if x.is_integer() => Some(x.to_integer()),
            Scalar::Rat(_) => None,
        }
    }

    /// Euclidean size used for pivot selection; zero only for zero.
    pub(crate) fn norm(&self, a: &Scalar) -> BigInt {
        match a {
            Scalar::Int(x) => x.abs(),
            Scalar::Rat(x) => BigInt::from(if x.is_zero() { 0 } else { 1 }),
            Scalar::Residue(r) => BigInt::from(if *r == 0 { 0 } else { 1 }),
        }
    }

    /// Euclidean division with `norm(r) < norm(b)`; defined over `Z` and fields.
    pub(crate) fn euclid_div(&self, a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => {
                let (q, r) = x.div_mod_floor(y);
                (Scalar::Int(q), Scalar::Int(r))
            }
            _ => {
                let q = self.div(a, b).expect("field division by non-zero");
                (q, self.zero())
            }
        }
    }

    /// The unit `u` with `u * a` in normal form (positive integer, one in a field).
    pub(crate) fn normalizing_unit(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Int(x) if x.is_negative() => self.from_i64(-1),
            Scalar::Int(_) => self.one(),
            _ if self.is_unit(a) => self.inv(a).expect("unit"),
            _ => self.one(),
        }
    }

    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        if let Some((p, q)) = text.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|e| Error::Parse(format!("{text}: {e}")))?;
            let q = BigInt::from_str(q.trim()).map_err(|e| Error::Parse(format!("{text}: {e}")))?;
            return self.from_ratio(&p, &q);
        }
        let n = BigInt::from_str(text).map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        Ok(self.from_bigint(&n))
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::IntegersMod(m) => write!(f, "Z/{m}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" => Ok(RingSpec::Integers),
            "Q" => Ok(RingSpec::Rationals),
            _ => {
                let m = s
                    .strip_prefix("Z/")
                    .and_then(|m| m.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown ring {s:?} (expected Z, Q or Z/m)")))?;
                RingSpec::integers_mod(m).map_err(|_| Error::Parse(format!("bad modulus in {s:?}")))
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(x) => write!(f, "{x}"),
            Scalar::Rat(x) if x.is_integer() => write!(f, "{}", x.numer()),
            Scalar::Rat(x) => write!(f, "{}/{}", x.numer(), x.denom()),
            Scalar::Residue(r) => write!(f, "{r}"),
        }
    }
}

pub fn scalar_from_int(ring: RingSpec, n: &BigInt) -> Scalar {
    ring.from_bigint(n)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    acc
}

/// `(ij)! / (i! (j!)^i)`, the coefficient in `gamma_i(gamma_j(a))`.
///
/// Computed twice, by factorials and as `prod_{r=2}^{i} C(rj-1, j-1)`; a
/// disagreement is reported as [`Error::InternalInconsistency`].
pub fn dp_coefficient(i: u64, j: u64) -> Result<BigInt> {
    if i == 0 || j == 0 {
        return Err(Error::InvalidRange(format!("dp_coefficient needs i, j >= 1, got ({i}, {j})")));
    }
    let numerator = factorial(i * j);
    let denominator = factorial(i) * num_traits::pow(factorial(j), i as usize);
    let (by_factorials, rem) = numerator.div_rem(&denominator);
    let by_product = (2..=i).fold(BigInt::one(), |acc, r| acc * binomial(r * j - 1, (j - 1) as i64));
    if !rem.is_zero() || by_factorials != by_product {
        return Err(Error::InternalInconsistency(format!(
            "dp_coefficient({i},{j}): factorial route {by_factorials} (remainder {rem}) vs product route {by_product}"
        )));
    }
    Ok(by_factorials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pascal(n: usize) -> Vec<Vec<BigInt>> {
        let mut rows = vec![vec![BigInt::one()]];
        for r in 1..=n {
            let prev = &rows[r - 1];
            let mut row = vec![BigInt::one(); r + 1];
            for k in 1..r {
                row[k] = &prev[k - 1] + &prev[k];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(7, 0), BigInt::one());
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        let triangle = pascal(30);
        assert_eq!(triangle[30][15], BigInt::from(155_117_520u64));
        for n in 0..=30 {
            for k in 0..=n {
                assert_eq!(binomial(n as u64, k as i64), triangle[n][k]);
            }
        }
    }

    #[test]
    fn dp_coefficient_values() {
        assert_eq!(dp_coefficient(2, 2).unwrap(), BigInt::from(3));
        assert_eq!(dp_coefficient(3, 2).unwrap(), BigInt::from(15));
        for j in 1..8 {
            assert_eq!(dp_coefficient(1, j).unwrap(), BigInt::one());
        }
        assert!(dp_coefficient(0, 3).is_err());
    }

    #[test]
    fn residues_and_fractions_are_canonical() {
        let z4 = RingSpec::IntegersMod(4);
        assert_eq!(z4.from_i64(7), Scalar::Residue(3));
        assert_eq!(z4.from_i64(-1), Scalar::Residue(3));
        let q = RingSpec::Rationals;
        assert_eq!(q.from_i64(-2).to_string(), "-2");
        assert_eq!(q.parse_scalar("4/-6").unwrap().to_string(), "-2/3");
        let z2 = RingSpec::IntegersMod(2);
        for k in -5..5 {
            assert!(z2.is_zero(&z2.from_i64(2 * k)));
        }
        for p in [2u64, 3, 5] {
            let ring = RingSpec::IntegersMod(p);
            assert!(ring.is_zero(&ring.from_bigint(&factorial(p))));
        }
    }

    #[test]
    fn non_units_refuse_division() {
        let z4 = RingSpec::IntegersMod(4);
        assert!(z4.inv(&Scalar::Residue(2)).is_err());
        assert_eq!(z4.inv(&Scalar::Residue(3)).unwrap(), Scalar::Residue(3));
        assert!(RingSpec::Integers.div(&RingSpec::Integers.from_i64(3), &RingSpec::Integers.from_i64(2)).is_err());
    }

    #[test]
    fn ring_text_form() {
        assert_eq!("Z".parse::<RingSpec>().unwrap(), RingSpec::Integers);
        assert_eq!("Q".parse::<RingSpec>().unwrap(), RingSpec::Rationals);
        assert_eq!("Z/4".parse::<RingSpec>().unwrap(), RingSpec::IntegersMod(4));
        assert!("z".parse::<RingSpec>().is_err());
        assert!("Z/1".parse::<RingSpec>().is_err());
        assert_eq!(RingSpec::IntegersMod(9).characteristic(), 9);
    }

    fn random_scalar(ring: RingSpec, rng: &mut ChaCha8Rng) -> Scalar {
        match ring {
            RingSpec::Rationals => {
                let p: i64 = rng.gen_range(-50..50);
                let q: i64 = rng.gen_range(1..20);
                ring.from_ratio(&BigInt::from(p), &BigInt::from(q)).unwrap()
            }
            _ => ring.from_i64(rng.gen_range(-1000..1000)),
        }
    }

    #[test]
    fn ring_axioms_hold_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ring in [RingSpec::Integers, RingSpec::Rationals, RingSpec::IntegersMod(4), RingSpec::IntegersMod(5)] {
            for _ in 0..1000 {
                let a = random_scalar(ring, &mut rng);
                let b = random_scalar(ring, &mut rng);
                let c = random_scalar(ring, &mut rng);
                assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
                assert_eq!(ring.add(&ring.add(&a, &b), &c), ring.add(&a, &ring.add(&b, &c)));
                assert_eq!(
                    ring.mul(&a, &ring.add(&b, &c)),
                    ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c))
                );
                assert_eq!(ring.mul(&ring.one(), &a), a);
                assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
                assert!(ring.is_zero(&ring.add(&a, &ring.neg(&a))));
                let mut acc = a.clone();
                ring.add_mul_assign(&mut acc, &b, &c);
                assert_eq!(acc, ring.add(&a, &ring.mul(&b, &c)));
            }
        }
    }
}
