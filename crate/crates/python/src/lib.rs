//! Python bindings for the submonoid decision procedures.
//!
//! Exposes the `Submonoid` class plus free-group word helpers and the
//! homomorphism/isomorphism decisions. Words use the same text encoding as
//! the CLI: lowercase letters are generators of the ambient free group,
//! uppercase their inverses, and words over the submonoid generators are
//! written `[a][b][ABab]` (or by 1-based index, `[1][2][3]`).

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use submon::decision::{HomMode, HomSpec, HomVerdict, IsoVerdict};
use submon::error::{Budget, Error};
use submon::normal::{default_order, normalize_oracle, Normalizer};
use submon::relation::build_gamma;
use submon::submonoid::SubmonoidSpec;
use submon::words::AmbientSpec;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::ResourceLimit { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn ambient(rank: u8) -> PyResult<AmbientSpec> {
    AmbientSpec::new(rank).map_err(py_err)
}

/// A finitely generated submonoid of a free group.
#[pyclass]
struct Submonoid {
    spec: SubmonoidSpec,
    budget: Budget,
}

#[pymethods]
impl Submonoid {
    #[new]
    #[pyo3(signature = (rank, generators, budget=None))]
    fn new(rank: u8, generators: Vec<String>, budget: Option<usize>) -> PyResult<Self> {
        let gens: Vec<&str> = generators.iter().map(|s| s.as_str()).collect();
        let spec = SubmonoidSpec::parse(rank, &gens).map_err(py_err)?;
        let budget = budget.map(Budget::uniform).unwrap_or_default();
        Ok(Submonoid { spec, budget })
    }

    fn __repr__(&self) -> String {
        let gens: Vec<String> = self
            .spec
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect();
        format!("Submonoid(rank={}, generators={gens:?})", self.spec.rank())
    }

    fn rank(&self) -> u8 {
        self.spec.rank()
    }

    fn generators(&self) -> Vec<String> {
        self.spec
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect()
    }

    /// Gradedness verdict as (graded, cutoff, witness-or-None).
    fn is_graded(&self) -> PyResult<(bool, usize, Option<String>)> {
        let verdict = submon::graded::is_graded(&self.spec, &self.budget).map_err(py_err)?;
        Ok((verdict.graded, verdict.cutoff, verdict.witness))
    }

    /// Quasi-geodesic constants as a dict of exact (numerator, denominator)
    /// pairs; `c_wp` is absent when out of budget.
    fn constants(&self) -> PyResult<BTreeMap<String, (i64, i64)>> {
        let c = submon::geometry::constants(&self.spec, &self.budget).map_err(py_err)?;
        let mut out = BTreeMap::new();
        let int = |n: usize| (n as i64, 1i64);
        out.insert("k".to_string(), int(c.k));
        out.insert("l".to_string(), int(c.l));
        out.insert("l_prime".to_string(), int(c.l_prime));
        out.insert("lambda".to_string(), int(c.lambda));
        out.insert(
            "epsilon".to_string(),
            (*c.epsilon.numer(), *c.epsilon.denom()),
        );
        out.insert("r".to_string(), (*c.r.numer(), *c.r.denom()));
        out.insert(
            "r_prime".to_string(),
            (*c.r_prime.numer(), *c.r_prime.denom()),
        );
        out.insert("c_grd".to_string(), int(c.c_grd));
        if let Some(c_wp) = c.c_wp {
            out.insert("c_wp".to_string(), (*c_wp.numer(), *c_wp.denom()));
        }
        Ok(out)
    }

    /// Spellings of the irreducible generators.
    fn irreducibles(&self) -> PyResult<Vec<String>> {
        let indices = submon::decision::irreducibles(&self.spec, &self.budget).map_err(py_err)?;
        Ok(indices
            .into_iter()
            .map(|i| self.spec.generator(i).to_string())
            .collect())
    }

    /// Evaluates a generator word to its reduced group element.
    fn alpha(&self, word: &str) -> PyResult<String> {
        let w = self.spec.parse_sword(word).map_err(py_err)?;
        Ok(self.spec.alpha(&w).to_string())
    }

    /// Exact word problem: do the two generator words spell the same
    /// element?
    fn wp_exact(&self, left: &str, right: &str) -> PyResult<bool> {
        let u = self.spec.parse_sword(left).map_err(py_err)?;
        let v = self.spec.parse_sword(right).map_err(py_err)?;
        Ok(submon::relation::wp_exact(&self.spec, &u, &v))
    }

    /// Word problem via the ball-restricted relation automaton.
    #[pyo3(signature = (left, right, cutoff=None))]
    fn wp(&self, left: &str, right: &str, cutoff: Option<usize>) -> PyResult<bool> {
        let u = self.spec.parse_sword(left).map_err(py_err)?;
        let v = self.spec.parse_sword(right).map_err(py_err)?;
        let cutoff = cutoff.unwrap_or(self.spec.max_generator_len() + 2);
        let gamma = build_gamma(&self.spec, cutoff, &self.budget).map_err(py_err)?;
        Ok(gamma.wp_member(&u, &v))
    }

    /// Lex-minimal normal form of a generator word, via the description
    /// transducer (checked against the enumeration oracle).
    #[pyo3(signature = (word, cutoff=None))]
    fn normalize(&self, word: &str, cutoff: Option<usize>) -> PyResult<String> {
        submon::graded::require_graded(&self.spec, &self.budget).map_err(py_err)?;
        let u = self.spec.parse_sword(word).map_err(py_err)?;
        let cutoff = cutoff.unwrap_or(self.spec.max_generator_len() + 2);
        let order = default_order(self.spec.len());
        let gamma = build_gamma(&self.spec, cutoff, &self.budget).map_err(py_err)?;
        let normalizer = Normalizer::new(&gamma, &order, &self.budget).map_err(py_err)?;
        let normal = normalizer.normalize(&u).map_err(py_err)?;
        debug_assert_eq!(
            normal,
            normalize_oracle(&self.spec, &u, &order, &self.budget).map_err(py_err)?
        );
        Ok(self.spec.format_sword(&normal))
    }

    /// All spellings of a group element with at most `max_len` factors.
    #[pyo3(signature = (element, max_len=6))]
    fn factorizations(&self, element: &str, max_len: usize) -> PyResult<Vec<String>> {
        let g = ambient(self.spec.rank())?
            .parse_word(element)
            .map_err(py_err)?;
        let words =
            submon::graded::nontrivial_factorizations(&self.spec, &g, max_len, &self.budget)
                .map_err(py_err)?;
        Ok(words.iter().map(|w| self.spec.format_sword(w)).collect())
    }

    /// Longest spelling length of a monoid element.
    fn xi(&self, element: &str) -> PyResult<usize> {
        let g = ambient(self.spec.rank())?
            .parse_word(element)
            .map_err(py_err)?;
        submon::graded::xi_max(&self.spec, &g, &self.budget).map_err(py_err)
    }

    /// Max of `xi` over the monoid elements within the given radius.
    fn zeta(&self, n: usize) -> PyResult<usize> {
        submon::graded::zeta(&self.spec, n, &self.budget).map_err(py_err)
    }
}

/// Freely reduces a word over the ambient alphabet.
#[pyfunction]
fn reduce_word(rank: u8, word: &str) -> PyResult<String> {
    Ok(ambient(rank)?.parse_word(word).map_err(py_err)?.to_string())
}

/// Product of two group elements, reduced.
#[pyfunction]
fn mul(rank: u8, left: &str, right: &str) -> PyResult<String> {
    let ambient = ambient(rank)?;
    let u = ambient.parse_word(left).map_err(py_err)?;
    let v = ambient.parse_word(right).map_err(py_err)?;
    Ok(u.mul(&v).map_err(py_err)?.to_string())
}

/// Group inverse.
#[pyfunction]
fn inv(rank: u8, word: &str) -> PyResult<String> {
    Ok(ambient(rank)?
        .parse_word(word)
        .map_err(py_err)?
        .inverse()
        .to_string())
}

/// Geodesic distance in the Cayley tree.
#[pyfunction]
fn dist(rank: u8, left: &str, right: &str) -> PyResult<usize> {
    let ambient = ambient(rank)?;
    let u = ambient.parse_word(left).map_err(py_err)?;
    let v = ambient.parse_word(right).map_err(py_err)?;
    u.dist(&v).map_err(py_err)
}

/// Decides whether mapping the source generators to the given target words
/// extends to a homomorphism. Returns (outcome, witness) where outcome is
/// "yes-certified", "yes-up-to" or "no".
#[pyfunction]
#[pyo3(signature = (source, target_rank, images, cutoff=None, horizon=4))]
fn hom_extends(
    source: &Submonoid,
    target_rank: u8,
    images: Vec<String>,
    cutoff: Option<usize>,
    horizon: usize,
) -> PyResult<(String, Option<(String, String)>)> {
    let target = ambient(target_rank)?;
    let image_words = images
        .iter()
        .map(|s| target.parse_word(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(py_err)?;
    let hom = HomSpec::new(source.spec.clone(), target, image_words).map_err(py_err)?;
    let mode = HomMode::Adaptive {
        cutoff: cutoff.unwrap_or(source.spec.max_generator_len() + 2),
        horizon,
    };
    match submon::decision::hom_extends(&hom, mode, &source.budget).map_err(py_err)? {
        HomVerdict::No { witness: (u, v) } => Ok((
            "no".to_string(),
            Some((source.spec.format_sword(&u), source.spec.format_sword(&v))),
        )),
        HomVerdict::YesCertified => Ok(("yes-certified".to_string(), None)),
        HomVerdict::YesUpTo { .. } => Ok(("yes-up-to".to_string(), None)),
    }
}

/// Decides isomorphism of two graded submonoids. Returns (isomorphic,
/// bijection) with the bijection as pairs of generator spellings.
#[pyfunction]
#[pyo3(signature = (left, right, cutoff=None, horizon=4))]
fn is_isomorphic(
    left: &Submonoid,
    right: &Submonoid,
    cutoff: Option<usize>,
    horizon: usize,
) -> PyResult<(bool, Option<Vec<(String, String)>>)> {
    let cutoff = cutoff.unwrap_or(
        left.spec
            .max_generator_len()
            .max(right.spec.max_generator_len())
            + 2,
    );
    let mode = HomMode::Adaptive { cutoff, horizon };
    match submon::decision::iso(&left.spec, &right.spec, mode, &left.budget).map_err(py_err)? {
        IsoVerdict::Yes { bijection, .. } => Ok((
            true,
            Some(
                bijection
                    .iter()
                    .map(|(x, y)| (x.to_string(), y.to_string()))
                    .collect(),
            ),
        )),
        IsoVerdict::No => Ok((false, None)),
    }
}

#[pymodule]
fn submon_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Submonoid>()?;
    m.add_function(wrap_pyfunction!(reduce_word, m)?)?;
    m.add_function(wrap_pyfunction!(mul, m)?)?;
    m.add_function(wrap_pyfunction!(inv, m)?)?;
    m.add_function(wrap_pyfunction!(dist, m)?)?;
    m.add_function(wrap_pyfunction!(hom_extends, m)?)?;
    m.add_function(wrap_pyfunction!(is_isomorphic, m)?)?;
    Ok(())
}
