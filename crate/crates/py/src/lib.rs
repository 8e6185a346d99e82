//! Python bindings: the counting, rank, spectral-sequence, and umbrella
//! operations exposed as plain functions, with exact values crossing the
//! boundary as Python ints and `fractions.Fraction`s.
//!
//! Rational arguments accept anything with `numerator`/`denominator`
//! attributes, so both `int` and `fractions.Fraction` work unchanged.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyList;

use primcob::partitions::{self, PartitionQuery};
use primcob::poincare::{self, ProjectiveKind};
use primcob::ranks::{self, BettiVector, Flavor};
use primcob::specseq::{self, StableStemTable};
use primcob::umbrella::{self, SourcePoint, UmbrellaConfig};

fn value_error<E: std::fmt::Display>(err: E) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// Read an exact rational from any object with numerator/denominator
/// attributes (`int`, `fractions.Fraction`).
fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    let numer: BigInt = obj.getattr("numerator")?.extract()?;
    let denom: BigInt = obj.getattr("denominator")?.extract()?;
    if denom == BigInt::from(0) {
        return Err(PyZeroDivisionError::new_err("zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}

fn to_fraction<'py>(py: Python<'py>, value: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    fraction.call1((value.numer().clone(), value.denom().clone()))
}

fn to_source_point(point: &Bound<'_, PyAny>) -> PyResult<SourcePoint> {
    let coords: Vec<Bound<'_, PyAny>> = point.extract()?;
    if coords.len() != 4 {
        return Err(PyValueError::new_err("source point needs (x, t1, t2, t3)"));
    }
    let mut rationals = coords.iter().map(to_rational);
    let x = rationals.next().unwrap()?;
    let t1 = rationals.next().unwrap()?;
    let t2 = rationals.next().unwrap()?;
    let t3 = rationals.next().unwrap()?;
    Ok(SourcePoint::new(x, [t1, t2, t3]))
}

fn fraction_list<'py>(py: Python<'py>, values: &[BigRational]) -> PyResult<Bound<'py, PyList>> {
    let items: Vec<Bound<'py, PyAny>> = values
        .iter()
        .map(|v| to_fraction(py, v))
        .collect::<PyResult<_>>()?;
    PyList::new(py, items)
}

fn parse_flavor(flavor: &str) -> PyResult<Flavor> {
    flavor.parse().map_err(value_error)
}

fn table_with_optional_extension(stem_file: Option<&str>) -> PyResult<StableStemTable> {
    let mut table = StableStemTable::builtin();
    if let Some(path) = stem_file {
        table
            .load_extension_file(std::path::Path::new(path))
            .map_err(value_error)?;
    }
    Ok(table)
}

/// Number of partitions of `m` into integers in `[1, t]`; `m` may be an
/// `int` or a `fractions.Fraction`, and non-integral or negative targets
/// count zero.
#[pyfunction]
fn count_bounded_partitions(m: &Bound<'_, PyAny>, t: u32) -> PyResult<BigUint> {
    let m = to_rational(m)?;
    Ok(partitions::count_bounded_partitions(&PartitionQuery::new(
        m, t,
    )))
}

/// All partitions of `m` into parts in `[1, t]`, largest-first.
#[pyfunction]
fn enumerate_bounded_partitions(m: u64, t: u32) -> PyResult<Vec<Vec<u32>>> {
    partitions::enumerate_bounded_partitions(m, t).map_err(value_error)
}

/// Homology ranks of BSO(n) in degrees 0..=max_degree.
#[pyfunction]
fn bso_ranks(n: u32, max_degree: u32) -> PyResult<Vec<u64>> {
    Ok(poincare::bso_series(n, max_degree)
        .map_err(value_error)?
        .ranks()
        .to_vec())
}

/// Homology ranks of CP^m or HP^m (`cells=None` for the infinite space).
#[pyfunction]
#[pyo3(signature = (kind, cells, max_degree))]
fn projective_ranks(kind: &str, cells: Option<u32>, max_degree: u32) -> PyResult<Vec<u64>> {
    let kind = match kind {
        "complex" | "c" => ProjectiveKind::Complex,
        "quaternionic" | "h" => ProjectiveKind::Quaternionic,
        other => return Err(PyValueError::new_err(format!("unknown kind '{other}'"))),
    };
    Ok(poincare::projective_space_series(kind, cells, max_degree)
        .ranks()
        .to_vec())
}

/// Rank of pi_j for oriented prim maps of codimension k, singularity
/// bound r.
#[pyfunction]
fn rank_pi_oriented(k: u32, r: u32, j: u32) -> u64 {
    ranks::rank_pi_oriented(k, r, j)
}

/// Rank of pi_j for quaternionic prim maps (codimension 3).
#[pyfunction]
fn rank_pi_quaternionic(r: u32, j: u32) -> u64 {
    ranks::rank_pi_quaternionic(r, j)
}

/// Ranks of pi_1..pi_max_degree as a list; flavor is 'so' or 'sp'.
#[pyfunction]
#[pyo3(signature = (flavor, k, r, max_degree))]
fn rank_profile(flavor: &str, k: Option<u32>, r: u32, max_degree: u32) -> PyResult<Vec<u64>> {
    let profile =
        ranks::rank_profile(parse_flavor(flavor)?, k, r, max_degree).map_err(value_error)?;
    Ok((1..=max_degree).map(|j| profile.rank(j)).collect())
}

/// Betti-weighted cobordism-group rank; `betti` is `[b0, b1, ..., bd]`.
#[pyfunction]
#[pyo3(signature = (flavor, k, r, betti))]
fn cobordism_rank(flavor: &str, k: Option<u32>, r: u32, betti: Vec<u64>) -> PyResult<u64> {
    let betti = BettiVector::new(betti);
    let depth = betti.dimension().max(1);
    let profile = ranks::rank_profile(parse_flavor(flavor)?, k, r, depth).map_err(value_error)?;
    ranks::cobordism_rank(&profile, &betti).map_err(value_error)
}

/// The closed partition formula for rk pi_j, verbatim (may be negative
/// for odd k).
#[pyfunction]
fn corollary_eval(k: u32, r: u32, j: u32) -> BigInt {
    ranks::corollary_eval(k, r, j)
}

/// First degree where the closed formula and the chain-level rank
/// disagree, if any.
#[pyfunction]
fn corollary_first_disagreement(k: u32, r: u32, max_degree: u32) -> Option<u32> {
    ranks::corollary_compare(k, r, max_degree).first_disagreement
}

/// Full comparison report as a JSON string.
#[pyfunction]
fn corollary_compare_json(k: u32, r: u32, max_degree: u32) -> PyResult<String> {
    serde_json::to_string_pretty(&ranks::corollary_compare(k, r, max_degree)).map_err(value_error)
}

/// The stable stem pi^s(n) as `(free_rank, [prime_power_torsion...])`.
#[pyfunction]
#[pyo3(signature = (n, stem_file=None))]
fn stable_stem(n: u32, stem_file: Option<&str>) -> PyResult<(u32, Vec<u64>)> {
    let table = table_with_optional_extension(stem_file)?;
    let group = table.stem(n).map_err(value_error)?;
    Ok((group.free_rank(), group.torsion().to_vec()))
}

/// Hurewicz-image index h(p): (2p)! for even p, (2p)!/2 for odd p.
#[pyfunction]
fn segal_index(p: u32) -> BigUint {
    specseq::segal_index(p)
}

/// First page cells as `{(p, q): group_label}` for 1 <= p <= p_max.
#[pyfunction]
#[pyo3(signature = (p_max, q_max, stem_file=None))]
fn e1_page(py: Python<'_>, p_max: u32, q_max: u32, stem_file: Option<&str>) -> PyResult<Py<PyAny>> {
    let table = table_with_optional_extension(stem_file)?;
    let page = specseq::build_e1_page(p_max, q_max, &table);
    let dict = pyo3::types::PyDict::new(py);
    for record in page.records() {
        dict.set_item(
            (record.p, record.q),
            record.group.unwrap_or_else(|| "?".to_string()),
        )?;
    }
    Ok(dict.into())
}

/// All image-order tuples for the differentials leaving column p.
#[pyfunction]
#[pyo3(signature = (p, stem_file=None, include_p0=false))]
fn consistent_assignments(
    p: u32,
    stem_file: Option<&str>,
    include_p0: bool,
) -> PyResult<Vec<Vec<u64>>> {
    let table = table_with_optional_extension(stem_file)?;
    let page = specseq::build_e1_page(p.max(1), 4 * p, &table);
    let assignments =
        specseq::consistent_assignments_with(p, &page, include_p0).map_err(value_error)?;
    Ok(assignments.into_iter().map(|a| a.orders).collect())
}

/// Whether the odd-torsion audit passes through total degree i_max.
#[pyfunction]
#[pyo3(signature = (i_max, stem_file=None))]
fn odd_torsion_audit_passes(i_max: u32, stem_file: Option<&str>) -> PyResult<bool> {
    let table = table_with_optional_extension(stem_file)?;
    let p_max = ((i_max + 1) / 4).max(1);
    let page = specseq::build_e1_page(p_max, i_max.max(3), &table);
    let report = specseq::odd_torsion_audit(i_max, &page).map_err(value_error)?;
    Ok(report.pass)
}

/// Full odd-torsion audit report as a JSON string.
#[pyfunction]
#[pyo3(signature = (i_max, stem_file=None))]
fn odd_torsion_audit_json(i_max: u32, stem_file: Option<&str>) -> PyResult<String> {
    let table = table_with_optional_extension(stem_file)?;
    let p_max = ((i_max + 1) / 4).max(1);
    let page = specseq::build_e1_page(p_max, i_max.max(3), &table);
    let report = specseq::odd_torsion_audit(i_max, &page).map_err(value_error)?;
    serde_json::to_string_pretty(&report).map_err(value_error)
}

/// Whether the quaternionic cobordism group of R^(n+3) is infinite.
#[pyfunction]
fn infinite_group_criterion(r: u32, n: u32) -> bool {
    specseq::infinite_group_criterion(r, n)
}

/// The umbrella normal form at `(x, t1, t2, t3)`; coordinates in and out
/// are exact (`fractions.Fraction` out).
#[pyfunction]
fn umbrella_map<'py>(py: Python<'py>, point: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyList>> {
    let p = to_source_point(point)?;
    fraction_list(py, &umbrella::umbrella_map(&p).0)
}

/// The embedding lift of the umbrella at `(x, t1, t2, t3)`.
#[pyfunction]
fn lift_map<'py>(py: Python<'py>, point: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyList>> {
    let p = to_source_point(point)?;
    fraction_list(py, &umbrella::lift_map(&p).0)
}

/// Exact rank of the (lifted) Jacobian at the point.
#[pyfunction]
#[pyo3(signature = (point, lifted=false))]
fn jacobian_rank(point: &Bound<'_, PyAny>, lifted: bool) -> PyResult<usize> {
    Ok(umbrella::jacobian_rank(&to_source_point(point)?, lifted))
}

/// The normal section s1 at the point, as eight exact coordinates.
#[pyfunction]
fn section_s1<'py>(py: Python<'py>, point: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyList>> {
    let p = to_source_point(point)?;
    fraction_list(py, &umbrella::section_s1(&p))
}

/// True: the cross-cap's singular point has contact order exactly one.
#[pyfunction]
fn sigma2_empty_check() -> bool {
    umbrella::sigma2_empty_check()
}

/// The same probe on the degenerate cubic control germ (returns False).
#[pyfunction]
fn sigma2_empty_check_cubic_control() -> bool {
    umbrella::sigma2_empty_check_for(umbrella::Germ::CubicControl)
}

/// Run the full umbrella verification; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (height=8, sphere_samples=200, pair_samples=10_000))]
fn umbrella_verify_json(
    height: u32,
    sphere_samples: usize,
    pair_samples: usize,
) -> PyResult<String> {
    let cfg = UmbrellaConfig {
        height,
        sphere_samples,
        pair_samples,
        ..UmbrellaConfig::default()
    };
    let report = umbrella::run_verification(&cfg);
    serde_json::to_string_pretty(&report).map_err(value_error)
}

#[pymodule]
fn primcob_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(count_bounded_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_bounded_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(bso_ranks, m)?)?;
    m.add_function(wrap_pyfunction!(projective_ranks, m)?)?;
    m.add_function(wrap_pyfunction!(rank_pi_oriented, m)?)?;
    m.add_function(wrap_pyfunction!(rank_pi_quaternionic, m)?)?;
    m.add_function(wrap_pyfunction!(rank_profile, m)?)?;
    m.add_function(wrap_pyfunction!(cobordism_rank, m)?)?;
    m.add_function(wrap_pyfunction!(corollary_eval, m)?)?;
    m.add_function(wrap_pyfunction!(corollary_first_disagreement, m)?)?;
    m.add_function(wrap_pyfunction!(corollary_compare_json, m)?)?;
    m.add_function(wrap_pyfunction!(stable_stem, m)?)?;
    m.add_function(wrap_pyfunction!(segal_index, m)?)?;
    m.add_function(wrap_pyfunction!(e1_page, m)?)?;
    m.add_function(wrap_pyfunction!(consistent_assignments, m)?)?;
    m.add_function(wrap_pyfunction!(odd_torsion_audit_passes, m)?)?;
    m.add_function(wrap_pyfunction!(odd_torsion_audit_json, m)?)?;
    m.add_function(wrap_pyfunction!(infinite_group_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(umbrella_map, m)?)?;
    m.add_function(wrap_pyfunction!(lift_map, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian_rank, m)?)?;
    m.add_function(wrap_pyfunction!(section_s1, m)?)?;
    m.add_function(wrap_pyfunction!(sigma2_empty_check, m)?)?;
    m.add_function(wrap_pyfunction!(sigma2_empty_check_cubic_control, m)?)?;
    m.add_function(wrap_pyfunction!(umbrella_verify_json, m)?)?;
    Ok(())
}
