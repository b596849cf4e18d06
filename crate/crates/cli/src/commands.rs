use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use pdchain::algebra::{bar_construction, hh_divided_power, hh_gamma_stability, hochschild_complex, CommAlgebra};
use pdchain::chain::{chain_homology, tensor_complexes, verify_complex, ChainComplex, ChainMap};
use pdchain::coefficients::dp_coefficient;
use pdchain::combinat::{block_shuffle_cosets, shuffles};
use pdchain::divpow::{
    check_axioms_with, check_pd_chain_algebra, free_divided_power, invariants_model, is_multiplicative, monoid_check as check_monoid,
    monoid_to_chain, monoid_to_simplicial, search_divided_powers, search_divided_powers_bounded, AxiomOptions,
    CheckEntry, GradedChainAlgebra, NormalizedChains, PdOptions, SearchVerdict, SimplicialCommAlgebra,
    Status,
};
use pdchain::doc;
use pdchain::doldkan::{
    aw_symmetry_defects, hexagon, lax_symmetry, normalization, pentagon, phi_of, psi_of, roundtrip_isos,
    shuffle_symmetry_defects, transferred_structure, triangle_identities, twist_involution, EilenbergZilber, Gamma,
    LargeTensorComplex,
};
use pdchain::error::Error;
use pdchain::linalg::{unit_vector, Homology};
use pdchain::simplicial::{moore_complex, standard_simplex_module, verify_simplicial, SimplicialModule};
use pdchain::RingSpec;
use serde_json::{json, Value};

use crate::input::{self, read_json};
use crate::{Common, ComplexSource, Direction, Format, PairSource, Report, SimplicialSource};

/// `rank 2`, `rank 0 torsion [2, 4]`.
fn describe(h: &Homology) -> String {
    let p = &h.presentation;
    if p.torsion.is_empty() {
        format!("rank {}", p.free_rank)
    } else {
        let t: Vec<String> = p.torsion.iter().map(ToString::to_string).collect();
        format!("rank {} torsion [{}]", p.free_rank, t.join(", "))
    }
}

fn degrees_witness(bad: &[usize]) -> Value {
    json!({ "degrees": bad })
}

fn chain_map_check(r: &mut Report, name: &str, f: &ChainMap) {
    let bad = f.non_commuting_degrees();
    r.check(name, bad.is_empty(), || degrees_witness(&bad));
}

fn simplicial_check(r: &mut Report, x: &SimplicialModule) {
    let bad = verify_simplicial(x);
    r.check("simplicial identities", bad.is_empty(), || json!({ "violation": bad[0].to_string() }));
}

fn complex_check(r: &mut Report, c: &ChainComplex) {
    let bad = verify_complex(c);
    r.check("d d = 0", bad.is_empty(), || degrees_witness(&bad));
}

fn differing(a: &ChainMap, b: &ChainMap) -> Vec<usize> {
    (0..a.components.len().min(b.components.len())).filter(|&n| a.components[n] != b.components[n]).collect()
}

pub fn normalize(c: &Common, src: &SimplicialSource) -> Result<Report> {
    let x = input::simplicial(c, src)?;
    let n = normalization(&x)?;
    let mut r = Report::new("normalize");
    r.info("ranks", json!(n.complex.ranks()));
    r.info("complex", doc::complex_to_json(&n.complex));
    simplicial_check(&mut r, &x);
    complex_check(&mut r, &n.complex);
    Ok(r)
}

pub fn gamma(c: &Common, src: &ComplexSource) -> Result<Report> {
    let cx = input::complex(c, src)?;
    let l = c.truncate.unwrap_or(cx.top() + 1);
    let (phi, g, _) = phi_of(&cx, l)?;
    let mut r = Report::new("gamma");
    r.info("ranks", json!(g.module.ranks()));
    if c.format == Format::Json {
        r.info("module", doc::simplicial_to_json(&g.module));
    }
    simplicial_check(&mut r, &g.module);
    chain_map_check(&mut r, "phi chain map", &phi);
    r.check("phi iso", phi.is_iso(), || json!("phi is not invertible"));
    Ok(r)
}

pub fn roundtrip(c: &Common, complex: Option<PathBuf>, simplicial: Option<PathBuf>, simplex: Option<usize>) -> Result<Report> {
    let (cx, x) = match (complex, simplicial, simplex) {
        (_, _, Some(n)) => {
            let x = input::simplex(c, n);
            (pdchain::doldkan::normalize(&x)?, x)
        }
        (Some(cp), Some(xp), None) => (input::complex_file(c, &cp)?, input::simplicial_file(c, &xp)?),
        (Some(cp), None, None) => {
            let cx = input::complex_file(c, &cp)?;
            let x = Gamma::new(&cx, c.truncate.unwrap_or(3)).module.as_ref().clone();
            (cx, x)
        }
        (None, Some(xp), None) => {
            let x = input::simplicial_file(c, &xp)?;
            (pdchain::doldkan::normalize(&x)?, x)
        }
        (None, None, None) => bail!("give --complex, --simplicial or --simplex"),
    };
    if cx.ring != x.ring {
        bail!("the complex is over {} and the module over {}", cx.ring, x.ring);
    }
    let l = c.truncate.unwrap_or(x.truncation());
    let (phi, psi) = roundtrip_isos(&cx, &x, l)?;
    let (first, second) = triangle_identities(&cx, &x, l)?;
    let mut r = Report::new("roundtrip");
    r.info("complex ranks", json!(cx.ranks()));
    r.info("module ranks", json!(x.truncate(l).ranks()));
    chain_map_check(&mut r, "phi chain map", &phi);
    r.check("phi iso", phi.is_iso(), || json!("phi is not invertible"));
    let bad = psi.non_commuting();
    r.check("psi simplicial", bad.is_empty(), || json!({ "map": bad[0].0, "level": bad[0].1, "index": bad[0].2 }));
    r.check("psi iso", psi.is_iso(), || json!("psi is not invertible"));
    r.check("Gamma(phi_C) = psi_(Gamma C)", first, || json!("levels differ"));
    r.check("N(psi_X) = phi_(N X)", second, || json!("degrees differ"));
    Ok(r)
}

fn pair_report(name: &'static str, c: &Common, src: &PairSource) -> Result<(Report, SimplicialModule, SimplicialModule, EilenbergZilber)> {
    let (x, y) = input::pair(c, src)?;
    let ez = EilenbergZilber::new(&x, &y)?;
    let mut r = Report::new(name);
    r.info("tensor ranks", json!(ez.tensor.ranks()));
    r.info("product ranks", json!(ez.nhat.complex.ranks()));
    Ok((r, x, y, ez))
}

pub fn shuffle_check(c: &Common, src: &PairSource) -> Result<Report> {
    let (mut r, x, y, ez) = pair_report("shuffle-check", c, src)?;
    let (sh, aw) = (ez.shuffle(), ez.alexander_whitney());
    chain_map_check(&mut r, "sh chain map", &sh);
    let bad = differing(&aw.compose(&sh), &ChainMap::identity(&ez.tensor));
    r.check("aw sh = id", bad.is_empty(), || degrees_witness(&bad));
    let bad = shuffle_symmetry_defects(&x, &y)?;
    r.check("N(twist) sh = sh twist", bad.is_empty(), || degrees_witness(&bad));
    Ok(r)
}

pub fn aw_check(c: &Common, src: &PairSource) -> Result<Report> {
    let (mut r, x, y, ez) = pair_report("aw-check", c, src)?;
    let (sh, aw) = (ez.shuffle(), ez.alexander_whitney());
    chain_map_check(&mut r, "aw chain map", &aw);
    let bad = differing(&aw.compose(&sh), &ChainMap::identity(&ez.tensor));
    r.check("aw sh = id", bad.is_empty(), || degrees_witness(&bad));
    let bad = aw_symmetry_defects(&x, &y)?;
    r.info("aw symmetric", json!(bad.is_empty()));
    r.checks.push(CheckEntry {
        name: "twist aw = aw N(twist)".into(),
        status: Status::Info,
        checked: ez.truncation() + 1,
        failures: bad.len(),
        witness: (!bad.is_empty()).then(|| degrees_witness(&bad)),
    });
    Ok(r)
}

pub fn large_tensor(c: &Common, first: &ComplexSource, second: Option<PathBuf>) -> Result<Report> {
    let cx = input::complex(c, first)?;
    let c2 = match second {
        Some(p) => input::complex_file(c, &p)?,
        None => cx.clone(),
    };
    if c2.ring != cx.ring {
        bail!("the factors are over {} and {}", cx.ring, c2.ring);
    }
    let l = c.truncate.unwrap_or_else(|| c.degree.unwrap_or(cx.top() + c2.top()));
    if let Some(n) = c.degree {
        if n > l {
            bail!("--degree {n} exceeds --truncate {l}");
        }
    }
    let lt = LargeTensorComplex::new(&cx, &c2, l)?;
    let mut r = Report::new("large-tensor");
    r.info("tensor ranks", json!(tensor_complexes(&cx, &c2)?.ranks()));
    r.info("ranks", json!(lt.ranks()));
    if let Some(n) = c.degree {
        r.info("rank", json!(lt.underlying().rank(n)));
    }
    complex_check(&mut r, lt.underlying());
    Ok(r)
}

pub fn transferred(c: &Common, first: &ComplexSource, with_pentagon: bool) -> Result<Report> {
    let cx = input::complex(c, first)?;
    let l = c.truncate.unwrap_or(2);
    let ts = transferred_structure(&cx, &cx, &cx, l)?;
    let mut r = Report::new("transferred-structure");
    r.info("truncation", json!(l));
    chain_map_check(&mut r, "unit chain map", &ts.unit);
    r.check("unit iso", ts.unit.is_iso(), || json!("not invertible"));
    chain_map_check(&mut r, "associator chain map", &ts.associator);
    r.check("associator iso", ts.associator.is_iso(), || json!("not invertible"));
    chain_map_check(&mut r, "lax chain map", &ts.lax);
    r.check("lax symmetric", lax_symmetry(&cx, &cx, l)?, || json!("twist does not commute"));
    r.check("twist involution", twist_involution(&cx, &cx, l)?, || json!("twist twice is not the identity"));
    r.check("hexagon", hexagon(&cx, &cx, &cx, l)?, || json!("hexagon does not commute"));
    if with_pentagon {
        r.check("pentagon", pentagon(&cx, &cx, &cx, &cx, l)?, || json!("pentagon does not commute"));
    }
    Ok(r)
}

fn axiom_options(c: &Common, samples: usize) -> AxiomOptions {
    AxiomOptions { samples, seed: c.seed, partial: false }
}

pub fn verify_axioms(c: &Common, algebra: &Path, gamma: Option<PathBuf>, samples: usize) -> Result<Report> {
    let v = read_json(algebra)?;
    let alg = doc::graded_algebra_from_json(&v).with_context(|| format!("in {}", algebra.display()))?;
    input::agree(c, alg.ring, algebra)?;
    let table = match gamma {
        Some(p) => doc::gamma_table_from_json(&alg, &read_json(&p)?).with_context(|| format!("in {}", p.display()))?,
        None if v.get("generators").is_some() => {
            let gens = doc::generators_from_json(&v)?;
            free_divided_power(&gens, alg.ring, alg.degree_bound)?.1
        }
        None => bail!("--gamma is required unless the algebra is given by generators"),
    };
    let mut r = Report::new("verify-axioms");
    r.info("ranks", json!((0..=alg.degree_bound).map(|n| alg.rank(n)).collect::<Vec<_>>()));
    r.checks = check_axioms_with(&alg, &table, axiom_options(c, samples))?;
    Ok(r)
}

fn bound(c: &Common) -> usize {
    c.truncate.or(c.degree).unwrap_or(12)
}

pub fn free_dp(c: &Common, generators: &str) -> Result<Report> {
    let gens = input::generators(generators)?;
    let (alg, table) = free_divided_power(&gens, input::ring(c), bound(c))?;
    let mut r = Report::new("free-dp");
    r.info("ranks", json!((0..=alg.degree_bound).map(|n| alg.rank(n)).collect::<Vec<_>>()));
    let labels: Vec<Vec<&str>> = (0..=alg.degree_bound).map(|n| (0..alg.rank(n)).map(|k| alg.label(n, k)).collect()).collect();
    r.info("basis", json!(labels));
    if c.format == Format::Json {
        r.info("algebra", doc::graded_algebra_to_json(&alg));
        r.info("gamma", doc::gamma_table_to_json(&alg, &table));
    }
    r.checks = check_axioms_with(&alg, &table, axiom_options(c, 4))?;
    Ok(r)
}

pub fn invariants(c: &Common, generators: &str) -> Result<Report> {
    let gens = input::generators(generators)?;
    let m = invariants_model(&gens, input::ring(c), bound(c))?;
    let mut r = Report::new("invariants-model");
    r.info("ranks", json!(m.ranks()));
    r.info("free ranks", json!((0..=m.free.degree_bound).map(|n| m.free.rank(n)).collect::<Vec<_>>()));
    r.check("ranks match", m.ranks_match, || json!({ "invariants": m.ranks() }));
    r.check("Phi iso", m.iso, || json!("Phi is not invertible in some degree"));
    r.check("Phi multiplicative", m.multiplicative, || json!("Phi does not respect products"));
    Ok(r)
}

pub fn search_dp(c: &Common, algebra: &Path, limit: u128) -> Result<Report> {
    let alg = doc::graded_algebra_from_json(&read_json(algebra)?).with_context(|| format!("in {}", algebra.display()))?;
    input::agree(c, alg.ring, algebra)?;
    let mut r = Report::new("search-dp");
    match search_divided_powers_bounded(&alg, limit)? {
        SearchVerdict::Exists(t) => {
            r.info("gamma", doc::gamma_table_to_json(&alg, &t));
            r.check("divided powers exist", true, || Value::Null);
            r.checks.extend(check_axioms_with(&alg, &t, axiom_options(c, 4))?);
        }
        SearchVerdict::Absent(why) => {
            let w = serde_json::to_value(&why)?;
            r.check("divided powers exist", false, || w);
        }
    }
    Ok(r)
}

fn truncation(c: &Common, default: usize) -> usize {
    c.truncate.unwrap_or(default)
}

fn law_check(r: &mut Report, x: &SimplicialCommAlgebra, seed: u64) {
    let bad = x.law_violations(3, seed);
    r.check("algebra laws", bad.is_empty(), || json!({ "violation": bad[0] }));
}

fn acyclic_check(r: &mut Report, name: &str, h: &[Homology]) {
    let bad: Vec<usize> = h.iter().filter(|h| h.degree() > 0 && !h.is_trivial()).map(Homology::degree).collect();
    r.check(name, bad.is_empty(), || degrees_witness(&bad));
}

pub fn bar(c: &Common, algebra: &Path) -> Result<Report> {
    let a = input::comm_algebra(c, algebra)?;
    let l = truncation(c, 4);
    let x = bar_construction(&a, l)?;
    let moore = moore_complex(&x.underlying);
    let homotopy = (0..l).map(|n| chain_homology(&moore, n)).collect::<pdchain::Result<Vec<_>>>()?;
    let mut r = Report::new("bar");
    r.info("ranks", json!(x.underlying.ranks()));
    for h in &homotopy {
        r.info(format!("pi_{}", h.degree()), describe(h));
    }
    simplicial_check(&mut r, &x.underlying);
    law_check(&mut r, &x, c.seed);
    acyclic_check(&mut r, "acyclic", &homotopy);
    Ok(r)
}

pub fn hochschild(c: &Common, algebra: &Path, homology: Option<usize>, gamma: Option<usize>, trials: usize) -> Result<Report> {
    let a = input::comm_algebra(c, algebra)?;
    let l = truncation(c, 4);
    let top = homology.unwrap_or(l - 1);
    if top >= l {
        bail!("--homology {top} needs --truncate at least {}", top + 1);
    }
    let hc = hochschild_complex(&a, l)?;
    let mut r = Report::new("hochschild");
    r.info("ranks", json!(hc.cyclic.underlying.ranks()));
    let mut bar_h = Vec::new();
    for n in 0..l {
        if n <= top {
            r.info(format!("HH_{n}"), describe(hc.homology(n)?));
        }
        bar_h.push(hc.bar_homology(n)?.clone());
    }
    simplicial_check(&mut r, &hc.cyclic.underlying);
    law_check(&mut r, &hc.cyclic, c.seed);
    acyclic_check(&mut r, "bar acyclic", &bar_h);
    let Some(i) = gamma else { return Ok(r) };
    if i < 2 || i > top {
        bail!("--gamma {i} needs 2 <= i <= {top}, so that gamma_i(HH_1) lies in HH_{top}");
    }
    let ring = a.ring;
    for n in (1..).take_while(|n| n * i <= top) {
        let count = hc.homology(n)?.generator_count();
        let mut defined = (0usize, 0usize, None);
        let mut stable = (0usize, 0usize, None);
        for k in 0..count {
            let class = unit_vector(ring, count, k);
            defined.0 += 1;
            match hh_divided_power(&hc, n, &class, i) {
                Ok(g) => {
                    r.info(format!("gamma_{i}(HH_{n}[{k}])"), doc::vector_to_json(&g));
                    let bad = hh_gamma_stability(&hc, n, &class, i, trials, c.seed.wrapping_add(k as u64))?;
                    stable.0 += trials;
                    stable.1 += bad.len();
                    if !bad.is_empty() && stable.2.is_none() {
                        stable.2 = Some(json!({ "class": k, "trials": bad }));
                    }
                }
                Err(e @ (Error::InternalInconsistency(_) | Error::NotACycle(_))) => {
                    defined.1 += 1;
                    if defined.2.is_none() {
                        defined.2 = Some(json!({ "class": k, "error": e.to_string() }));
                    }
                }
                Err(e) => return Err(e.into()),
            }
        }
        let mut entry = |name: String, (checked, failures, witness): (usize, usize, Option<Value>)| {
            r.checks.push(CheckEntry {
                name,
                status: if failures == 0 { Status::Pass } else { Status::Fail },
                checked,
                failures,
                witness,
            });
        };
        entry(format!("gamma_{i} on HH_{n} is a cycle"), defined);
        entry(format!("gamma_{i} on HH_{n} independent of lifts"), stable);
    }
    Ok(r)
}

pub fn pd_chain_check(
    c: &Common,
    algebra: Option<PathBuf>,
    hochschild: bool,
    graded: Option<PathBuf>,
    gamma: Option<PathBuf>,
    max_i: usize,
    samples: usize,
) -> Result<Report> {
    let opts = PdOptions { max_i, samples, seed: c.seed, ..PdOptions::default() };
    let mut r = Report::new("pd-chain-check");
    match (algebra, graded) {
        (Some(p), _) => {
            let a = input::comm_algebra(c, &p)?;
            let l = truncation(c, 4);
            let checks = if hochschild {
                let hc = hochschild_complex(&a, l)?;
                r.info("chains", "hochschild");
                check_pd_chain_algebra(&NormalizedChains::new(&hc.cyclic), opts)?
            } else {
                let x = bar_construction(&a, l)?;
                r.info("chains", "bar");
                check_pd_chain_algebra(&NormalizedChains::new(&x), opts)?
            };
            r.checks = checks;
        }
        (None, Some(p)) => {
            let alg = doc::graded_algebra_from_json(&read_json(&p)?).with_context(|| format!("in {}", p.display()))?;
            input::agree(c, alg.ring, &p)?;
            let table = match gamma {
                Some(g) => Some(doc::gamma_table_from_json(&alg, &read_json(&g)?).with_context(|| format!("in {}", g.display()))?),
                None => None,
            };
            r.info("chains", "graded");
            r.checks = check_pd_chain_algebra(&GradedChainAlgebra::new(alg, table)?, opts)?;
        }
        (None, None) => bail!("give --algebra or --graded"),
    }
    Ok(r)
}

fn bar_monoid(c: &Common, algebra: &Path) -> Result<(Arc<CommAlgebra>, SimplicialCommAlgebra)> {
    let a = input::comm_algebra(c, algebra)?;
    let x = bar_construction(&a, truncation(c, 3))?;
    Ok((a, x))
}

pub fn monoid_check(c: &Common, algebra: &Path, corrupt: bool) -> Result<Report> {
    let (_, x) = bar_monoid(c, algebra)?;
    let mut m = monoid_to_chain(&x)?;
    if corrupt {
        let mut mu = m.mu_tilde.components.clone();
        let cols = mu[0].cols();
        mu[0].add_to(0, cols - 1, &x.ring().one());
        m = m.with_mu(mu)?;
    }
    let degree = c.degree.unwrap_or(1);
    if degree > m.truncation() {
        bail!("--degree {degree} exceeds --truncate {}", m.truncation());
    }
    let mut r = Report::new("monoid-check");
    r.info("carrier ranks", json!(m.carrier.ranks()));
    r.info("square ranks", json!(m.square.ranks()));
    r.info("degree", json!(degree));
    r.checks = check_monoid(&m, degree)?;
    Ok(r)
}

pub fn monoid_transfer(c: &Common, algebra: &Path, direction: Direction) -> Result<Report> {
    let (_, x) = bar_monoid(c, algebra)?;
    let m = monoid_to_chain(&x)?;
    let mut r = Report::new("monoid-transfer");
    r.info("carrier ranks", json!(m.carrier.ranks()));
    if direction != Direction::ToSimplicial {
        r.info("square ranks", json!(m.square.ranks()));
        chain_map_check(&mut r, "mu chain map", &m.mu_tilde);
        chain_map_check(&mut r, "unit chain map", &m.unit);
        if c.format == Format::Json {
            let mu: Vec<Value> = m.mu_tilde.components.iter().map(doc::matrix_to_json).collect();
            r.info("mu", json!(mu));
        }
    }
    if direction != Direction::ToChain {
        let back = monoid_to_simplicial(&m)?;
        r.info("module ranks", json!(back.underlying.ranks()));
        simplicial_check(&mut r, &back.underlying);
        law_check(&mut r, &back, c.seed);
        let (psi, _, _) = psi_of(&x.underlying)?;
        r.check("psi multiplicative", is_multiplicative(&psi.components, &back, &x), || json!("psi does not respect products"));
    }
    Ok(r)
}

pub fn selftest(c: &Common) -> Result<Report> {
    let z = RingSpec::Integers;
    let f2 = RingSpec::integers_mod(2)?;
    let mut r = Report::new("selftest");
    r.check("dp_coefficient(2, 3) = 10", dp_coefficient(2, 3)? == 10.into(), || json!("wrong coefficient"));
    r.check("(2,2)-shuffles", shuffles(2, 2).len() == 6, || json!({ "count": shuffles(2, 2).len() }));
    let cosets = block_shuffle_cosets(2, 3)?.len();
    r.check("block shuffle cosets (2, 3)", cosets == 15, || json!({ "count": cosets }));
    let x = standard_simplex_module(1, z, 3);
    let nx = pdchain::doldkan::normalize(&x)?;
    r.check("N(Z[Δ1]) ranks", nx.ranks() == [2, 1, 0, 0], || json!(nx.ranks()));
    let ez = EilenbergZilber::new(&x, &x)?;
    let bad = differing(&ez.alexander_whitney().compose(&ez.shuffle()), &ChainMap::identity(&ez.tensor));
    r.check("aw sh = id on Δ1", bad.is_empty(), || degrees_witness(&bad));
    let y = standard_simplex_module(2, z, 3);
    let (phi, psi) = roundtrip_isos(&pdchain::doldkan::normalize(&y)?, &y, 3)?;
    r.check("phi, psi iso on Δ2", phi.is_iso() && psi.is_iso(), || json!("not invertible"));
    let (alg, table) = free_divided_power(&[("x".to_string(), 2)], z, 8)?;
    let axioms = check_axioms_with(&alg, &table, axiom_options(c, 2))?;
    r.check("Gamma_Z(x) axioms", axioms.all_pass(), || json!(axioms.to_string()));
    let zx = pdchain::divpow::GradedAlgebra::polynomial(z, "x", 2, 4)?;
    r.check("Z[x] has none", !search_divided_powers(&zx)?.exists(), || json!("a table was found"));
    let a = Arc::new(CommAlgebra::truncated_polynomial(f2, 2));
    let b = bar_construction(&a, 3)?;
    let moore = moore_complex(&b.underlying);
    let bad: Vec<usize> = (1..3).filter(|&n| !chain_homology(&moore, n).map(|h| h.is_trivial()).unwrap_or(false)).collect();
    r.check("bar(F2[e]) acyclic", bad.is_empty(), || degrees_witness(&bad));
    let unit = check_monoid(&monoid_to_chain(&SimplicialCommAlgebra::constant(z, 2))?, 2)?;
    r.check("unit monoid", unit.all_pass(), || json!(unit.to_string()));
    Ok(r)
}
