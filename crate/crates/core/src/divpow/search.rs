use serde::Serialize;
use serde_json::{json, Value};

use super::graded::{check_axioms_with, AxiomOptions, GammaTable, GradedAlgebra};
use super::report::CheckReport;
use crate::coefficients::{factorial, RingSpec, Scalar};
use crate::doc::vector_to_json;
use crate::error::{Error, Result};

/// Default cap on the candidates for one table value over a finite ring.
pub const CANDIDATE_BOUND: u128 = 729;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Absence {
    /// `e^i` is not divisible by `i!` over the integers.
    Divisibility { label: String, degree: usize, i: usize, power: Value, factorial: String },
    /// Every candidate table violates an axiom; `conflicts` lists, for each
    /// candidate of the first unknown, the first violation found below it.
    Exhausted { unknown: String, explored: usize, conflicts: Vec<Value> },
    /// The forced table exists but breaks an axiom.
    Forced { report: CheckReport },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchVerdict {
    Exists(GammaTable),
    Absent(Absence),
}

impl SearchVerdict {
    pub fn exists(&self) -> bool {
        matches!(self, SearchVerdict::Exists(_))
    }
}

fn verify(alg: &GradedAlgebra, table: GammaTable) -> Result<SearchVerdict> {
    let report = check_axioms_with(alg, &table, AxiomOptions { samples: 4, seed: 7, partial: false })?;
    Ok(if report.all_pass() { SearchVerdict::Exists(table) } else { SearchVerdict::Absent(Absence::Forced { report }) })
}

/// Decide whether `alg` carries a system of divided powers.
pub fn search_divided_powers(alg: &GradedAlgebra) -> Result<SearchVerdict> {
    search_divided_powers_bounded(alg, CANDIDATE_BOUND)
}

pub fn search_divided_powers_bounded(alg: &GradedAlgebra, bound: u128) -> Result<SearchVerdict> {
    match alg.ring {
        RingSpec::Rationals | RingSpec::Integers => forced(alg),
        RingSpec::IntegersMod(m) => exhaust(alg, m, bound),
    }
}

/// Torsion-free case: `γ_i(e) = e^i / i!` is the only candidate.
fn forced(alg: &GradedAlgebra) -> Result<SearchVerdict> {
    let ring = alg.ring;
    let mut table = GammaTable::new();
    for (n, k, i) in GammaTable::required_keys(alg) {
        let power = alg.pow(n, &alg.basis(n, k), i).expect("within bound");
        let f = ring.from_bigint(&factorial(i as u64));
        let q: Option<Vec<Scalar>> = power.iter().map(|x| ring.div(x, &f).ok()).collect();
        match q {
            Some(v) => table.set(n, k, i, v),
            None => {
                return Ok(SearchVerdict::Absent(Absence::Divisibility {
                    label: alg.label(n, k).to_string(),
                    degree: n,
                    i,
                    power: vector_to_json(&power),
                    factorial: factorial(i as u64).to_string(),
                }))
            }
        }
    }
    verify(alg, table)
}

fn candidates(alg: &GradedAlgebra, m: u64, degree: usize) -> Vec<Vec<Scalar>> {
    let r = alg.rank(degree);
    let total = (m as usize).pow(r as u32);
    (0..total)
        .map(|mut c| {
            (0..r)
                .map(|_| {
                    let x = c % m as usize;
                    c /= m as usize;
                    alg.ring.from_i64(x as i64)
                })
                .collect()
        })
        .collect()
}

fn first_failure(report: &CheckReport) -> Option<Value> {
    report
        .entries
        .iter()
        .find(|e| e.status == super::report::Status::Fail)
        .map(|e| json!({"axiom": e.name, "witness": e.witness}))
}

/// Finite rings: backtracking over basis values, in increasing target degree,
/// pruned by every axiom instance whose inputs are already assigned.
fn exhaust(alg: &GradedAlgebra, m: u64, bound: u128) -> Result<SearchVerdict> {
    let mut keys = GammaTable::required_keys(alg);
    keys.sort_by_key(|&(n, k, i)| (n * i, n, k, i));
    for &(n, _, i) in &keys {
        let count = (m as u128).checked_pow(alg.rank(n * i) as u32).unwrap_or(u128::MAX);
        if count > bound {
            return Err(Error::SearchSpaceTooLarge(format!("{count} candidates for a value in degree {}", n * i)));
        }
    }
    let opts = AxiomOptions { samples: 2, seed: 11, partial: true };
    let root = check_axioms_with(alg, &GammaTable::new(), opts)?;
    if let Some(w) = first_failure(&root) {
        return Ok(SearchVerdict::Absent(Absence::Exhausted { unknown: "none".into(), explored: 0, conflicts: vec![w] }));
    }
    if keys.is_empty() {
        return verify(alg, GammaTable::new());
    }
    let cands: Vec<Vec<Vec<Scalar>>> = keys.iter().map(|&(n, _, i)| candidates(alg, m, n * i)).collect();
    let mut explored = 0usize;
    let mut conflicts = Vec::new();
    let mut table = GammaTable::new();

    fn go(
        alg: &GradedAlgebra,
        keys: &[(usize, usize, usize)],
        cands: &[Vec<Vec<Scalar>>],
        depth: usize,
        table: &mut GammaTable,
        opts: AxiomOptions,
        explored: &mut usize,
    ) -> Result<std::result::Result<(), Value>> {
        if depth == keys.len() {
            return Ok(Ok(()));
        }
        let (n, k, i) = keys[depth];
        let mut last = Value::Null;
        for c in &cands[depth] {
            *explored += 1;
            table.set(n, k, i, c.clone());
            let report = check_axioms_with(alg, table, opts)?;
            match first_failure(&report) {
                Some(w) => last = json!({"candidate": vector_to_json(c), "failure": w}),
                None => match go(alg, keys, cands, depth + 1, table, opts, explored)? {
                    Ok(()) => return Ok(Ok(())),
                    Err(w) => last = json!({"candidate": vector_to_json(c), "below": w}),
                },
            }
            table.remove(n, k, i);
        }
        Ok(Err(last))
    }

    let (n0, k0, i0) = keys[0];
    for c in &cands[0] {
        explored += 1;
        table.set(n0, k0, i0, c.clone());
        let report = check_axioms_with(alg, &table, opts)?;
        let outcome = match first_failure(&report) {
            Some(w) => Err(w),
            None => go(alg, &keys, &cands, 1, &mut table, opts, &mut explored)?,
        };
        match outcome {
            Ok(()) => return verify(alg, table),
            Err(w) => conflicts.push(json!({"candidate": vector_to_json(c), "conflict": w})),
        }
        table.remove(n0, k0, i0);
    }
    Ok(SearchVerdict::Absent(Absence::Exhausted {
        unknown: format!("gamma_{i0}({})", alg.label(n0, k0)),
        explored,
        conflicts,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divpow::graded::check_axioms;

    #[test]
    fn polynomial_rings() {
        let z = RingSpec::Integers;
        let zx = GradedAlgebra::polynomial(z, "x", 2, 4).unwrap();
        match search_divided_powers(&zx).unwrap() {
            SearchVerdict::Absent(Absence::Divisibility { i, .. }) => assert_eq!(i, 2),
            v => panic!("{v:?}"),
        }
        let f2 = RingSpec::integers_mod(2).unwrap();
        let fx = GradedAlgebra::polynomial(f2, "x", 2, 4).unwrap();
        assert!(!search_divided_powers(&fx).unwrap().exists());
        let q = RingSpec::Rationals;
        let qx = GradedAlgebra::polynomial(q, "x", 2, 8).unwrap();
        match search_divided_powers(&qx).unwrap() {
            SearchVerdict::Exists(t) => assert!(check_axioms(&qx, &t).unwrap().all_pass()),
            v => panic!("{v:?}"),
        }
    }
}
