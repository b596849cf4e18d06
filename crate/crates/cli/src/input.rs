use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use pdchain::algebra::CommAlgebra;
use pdchain::chain::ChainComplex;
use pdchain::divpow::Generator;
use pdchain::doc;
use pdchain::doldkan::normalize;
use pdchain::simplicial::{standard_simplex_module, SimplicialModule};
use pdchain::RingSpec;
use serde_json::Value;

use crate::{Common, ComplexSource, PairSource, SimplicialSource};

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))
}

pub fn ring(c: &Common) -> RingSpec {
    c.ring.unwrap_or(RingSpec::Integers)
}

/// A document's ring must agree with an explicit --ring.
pub fn agree(c: &Common, found: RingSpec, path: &Path) -> Result<()> {
    match c.ring {
        Some(r) if r != found => bail!("{} is over {found}, but --ring is {r}", path.display()),
        _ => Ok(()),
    }
}

fn truncated(c: &Common, x: SimplicialModule) -> Result<SimplicialModule> {
    match c.truncate {
        Some(l) if l > x.truncation() => bail!("--truncate {l} exceeds the document's truncation {}", x.truncation()),
        Some(l) => Ok(x.truncate(l)),
        None => Ok(x),
    }
}

pub fn simplicial_file(c: &Common, path: &Path) -> Result<SimplicialModule> {
    let x = doc::simplicial_from_json(&read_json(path)?).with_context(|| format!("in {}", path.display()))?;
    agree(c, x.ring, path)?;
    truncated(c, x)
}

pub fn simplex(c: &Common, n: usize) -> SimplicialModule {
    standard_simplex_module(n, ring(c), c.truncate.unwrap_or(3))
}

pub fn simplicial(c: &Common, src: &SimplicialSource) -> Result<SimplicialModule> {
    match (&src.simplicial, src.simplex) {
        (Some(p), _) => simplicial_file(c, p),
        (None, Some(n)) => Ok(simplex(c, n)),
        (None, None) => bail!("give --simplicial <file> or --simplex <n>"),
    }
}

pub fn pair(c: &Common, src: &PairSource) -> Result<(SimplicialModule, SimplicialModule)> {
    let x = simplicial(c, &src.first)?;
    let y = match (&src.second, src.second_simplex) {
        (Some(p), _) => simplicial_file(c, p)?,
        (None, Some(m)) => standard_simplex_module(m, x.ring, x.truncation()),
        (None, None) => x.clone(),
    };
    if y.ring != x.ring {
        bail!("the two modules are over {} and {}", x.ring, y.ring);
    }
    if y.truncation() != x.truncation() {
        bail!("the two modules are truncated at {} and {}", x.truncation(), y.truncation());
    }
    Ok((x, y))
}

pub fn complex_file(c: &Common, path: &Path) -> Result<ChainComplex> {
    let cx = doc::complex_from_json(&read_json(path)?).with_context(|| format!("in {}", path.display()))?;
    agree(c, cx.ring, path)?;
    Ok(cx)
}

pub fn complex(c: &Common, src: &ComplexSource) -> Result<ChainComplex> {
    match (&src.complex, src.simplex) {
        (Some(p), _) => complex_file(c, p),
        (None, Some(n)) => Ok(normalize(&standard_simplex_module(n, ring(c), n))?),
        (None, None) => bail!("give --complex <file> or --simplex <n>"),
    }
}

pub fn comm_algebra(c: &Common, path: &Path) -> Result<Arc<CommAlgebra>> {
    let a = doc::make_algebra(&read_json(path)?).with_context(|| format!("in {}", path.display()))?;
    agree(c, a.ring, path)?;
    Ok(Arc::new(a))
}

/// `x:2,y:1`.
pub fn generators(text: &str) -> Result<Vec<Generator>> {
    text.split(',')
        .map(|g| {
            let (label, degree) = g.trim().split_once(':').with_context(|| format!("generator {g:?} is not label:degree"))?;
            if label.is_empty() {
                bail!("generator {g:?} has an empty label");
            }
            let degree = degree.parse::<usize>().with_context(|| format!("bad degree in {g:?}"))?;
            if degree == 0 {
                bail!("generator {label} needs positive degree");
            }
            Ok((label.to_string(), degree))
        })
        .collect()
}
