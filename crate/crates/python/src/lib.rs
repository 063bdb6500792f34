//! Python bindings: `import pyintdec`.
//!
//! Rationals cross the boundary as `fractions.Fraction` (ints and strings
//! such as `"3/2"` are accepted on input). Sets are immutable; every
//! operation returns a new object.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use intdec::dbm::{timed_demo as core_timed_demo, CpDbmPlus, Dbm};
use intdec::decimal::{DRel, DecimalSet as CoreDecimal, LinearConstraintD};
use intdec::frontend::{self, Sort, VarContext};
use intdec::idf::IdfSet as CoreIdf;
use intdec::presburger::{self, IntegerSet as CoreInteger, LinearConstraintZ, ZRel};
use intdec::{json, Error};

create_exception!(pyintdec, IntdecError, PyException);
create_exception!(pyintdec, CapacityError, IntdecError);
create_exception!(pyintdec, ParseError, IntdecError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Capacity { .. } => CapacityError::new_err(e.to_string()),
        Error::Parse { .. } => ParseError::new_err(e.to_string()),
        _ => IntdecError::new_err(e.to_string()),
    }
}

fn rational(v: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    let text = v.str()?.to_string();
    BigRational::from_str(text.trim()).map_err(|_| PyValueError::new_err(format!("not a rational: {text}")))
}

fn rationals(vs: &[Bound<'_, PyAny>]) -> PyResult<Vec<BigRational>> {
    vs.iter().map(rational).collect()
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

fn fractions<'py>(py: Python<'py>, qs: &[BigRational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    qs.iter().map(|q| fraction(py, q)).collect()
}

fn bigints(vs: Vec<i64>) -> Vec<BigInt> {
    vs.into_iter().map(BigInt::from).collect()
}

/// A set of integer vectors given by a minimal digit automaton.
#[pyclass(module = "pyintdec", frozen, from_py_object)]
#[derive(Clone)]
struct IntegerSet(CoreInteger);

#[pymethods]
impl IntegerSet {
    /// Conjunction of `(coeffs, rel, constant)` with rel `"<="` or `"="`.
    #[new]
    #[pyo3(signature = (dim, constraints = Vec::new()))]
    fn new(dim: usize, constraints: Vec<(Vec<BigInt>, String, BigInt)>) -> PyResult<Self> {
        let cs = constraints
            .into_iter()
            .map(|(a, rel, k)| {
                let rel = match rel.as_str() {
                    "<=" => ZRel::Le,
                    "=" | "==" => ZRel::Eq,
                    other => return Err(PyValueError::new_err(format!("relation must be <= or =, not {other}"))),
                };
                Ok(LinearConstraintZ::new(a, rel, k))
            })
            .collect::<PyResult<Vec<_>>>()?;
        CoreInteger::from_constraints(dim, &cs).map(IntegerSet).map_err(err)
    }

    #[staticmethod]
    fn empty(dim: usize) -> PyResult<Self> {
        CoreInteger::empty(dim).map(IntegerSet).map_err(err)
    }

    #[staticmethod]
    fn universe(dim: usize) -> PyResult<Self> {
        CoreInteger::universe(dim).map(IntegerSet).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn num_states(&self) -> usize {
        self.0.num_states()
    }

    fn contains(&self, z: Vec<BigInt>) -> PyResult<bool> {
        self.0.contains(&z).map_err(err)
    }

    fn union(&self, other: &IntegerSet) -> PyResult<Self> {
        self.0.union(&other.0).map(IntegerSet).map_err(err)
    }

    fn intersect(&self, other: &IntegerSet) -> PyResult<Self> {
        self.0.intersect(&other.0).map(IntegerSet).map_err(err)
    }

    fn difference(&self, other: &IntegerSet) -> PyResult<Self> {
        self.0.difference(&other.0).map(IntegerSet).map_err(err)
    }

    fn complement(&self) -> Self {
        IntegerSet(self.0.complement())
    }

    fn project(&self, i: usize) -> PyResult<Self> {
        self.0.project(i).map(IntegerSet).map_err(err)
    }

    fn product(&self, other: &IntegerSet) -> PyResult<Self> {
        self.0.product(&other.0).map(IntegerSet).map_err(err)
    }

    fn reorder(&self, perm: Vec<usize>) -> PyResult<Self> {
        self.0.reorder(&perm).map(IntegerSet).map_err(err)
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn is_universe(&self) -> bool {
        self.0.is_universe()
    }

    fn is_subset(&self, other: &IntegerSet) -> PyResult<bool> {
        self.0.is_subset(&other.0).map_err(err)
    }

    fn witness(&self) -> Option<Vec<BigInt>> {
        self.0.witness()
    }

    /// Members with every coordinate in `[-bound, bound]`.
    fn enumerate(&self, bound: i64) -> Vec<Vec<i64>> {
        self.0.enumerate(bound)
    }

    fn to_json(&self) -> String {
        json::integer_set_to_json(&self.0).to_string()
    }

    fn __eq__(&self, other: &IntegerSet) -> bool {
        self.0.canonicalize() == other.0.canonicalize()
    }

    fn __repr__(&self) -> String {
        format!("IntegerSet(dim={}, states={})", self.0.dim(), self.0.num_states())
    }
}

/// A finite union of convex regions of the half-open cube `[0,1)^n`.
#[pyclass(module = "pyintdec", frozen, from_py_object)]
#[derive(Clone)]
struct DecimalSet(CoreDecimal);

#[pymethods]
impl DecimalSet {
    /// Conjunction of `(coeffs, rel, constant)` with rel `"<="`, `"<"` or `"="`.
    #[new]
    #[pyo3(signature = (dim, constraints = Vec::new()))]
    fn new(dim: usize, constraints: Vec<(Vec<i64>, String, i64)>) -> PyResult<Self> {
        let cs = constraints
            .into_iter()
            .map(|(a, rel, k)| {
                let rel = match rel.as_str() {
                    "<=" => DRel::Le,
                    "<" => DRel::Lt,
                    "=" | "==" => DRel::Eq,
                    other => return Err(PyValueError::new_err(format!("relation must be <=, < or =, not {other}"))),
                };
                Ok(LinearConstraintD::new(bigints(a), rel, BigInt::from(k)))
            })
            .collect::<PyResult<Vec<_>>>()?;
        CoreDecimal::from_constraints(dim, cs).map(DecimalSet).map_err(err)
    }

    #[staticmethod]
    fn empty(dim: usize) -> Self {
        DecimalSet(CoreDecimal::empty(dim))
    }

    #[staticmethod]
    fn full(dim: usize) -> Self {
        DecimalSet(CoreDecimal::full(dim))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn num_regions(&self) -> usize {
        self.0.regions().len()
    }

    fn contains(&self, p: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        self.0.contains(&rationals(&p)?).map_err(err)
    }

    fn union(&self, other: &DecimalSet) -> PyResult<Self> {
        self.0.union(&other.0).map(DecimalSet).map_err(err)
    }

    fn intersect(&self, other: &DecimalSet) -> PyResult<Self> {
        self.0.intersect(&other.0).map(DecimalSet).map_err(err)
    }

    fn difference(&self, other: &DecimalSet) -> PyResult<Self> {
        self.0.difference(&other.0).map(DecimalSet).map_err(err)
    }

    fn complement(&self) -> Self {
        DecimalSet(self.0.complement())
    }

    fn project(&self, i: usize) -> PyResult<Self> {
        self.0.project(i).map(DecimalSet).map_err(err)
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn is_full(&self) -> bool {
        self.0.is_full()
    }

    fn is_subset(&self, other: &DecimalSet) -> PyResult<bool> {
        self.0.is_subset(&other.0).map_err(err)
    }

    fn sample<'py>(&self, py: Python<'py>) -> PyResult<Option<Vec<Bound<'py, PyAny>>>> {
        self.0.sample().map(|p| fractions(py, &p)).transpose()
    }

    fn to_json(&self) -> String {
        json::decimal_set_to_json(&self.0).to_string()
    }

    fn __eq__(&self, other: &DecimalSet) -> PyResult<bool> {
        self.0.equals(&other.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("DecimalSet(dim={}, regions={})", self.0.dim(), self.0.regions().len())
    }
}

fn context(variables: Option<Vec<String>>, ints: Vec<String>, f: &frontend::Formula) -> VarContext {
    let names = variables.unwrap_or_else(|| f.free_names().into_iter().collect());
    VarContext::new(
        names
            .into_iter()
            .map(|n| {
                let sort = if ints.contains(&n) { Sort::Int } else { Sort::Real };
                (n, sort)
            })
            .collect(),
    )
}

/// A set of real vectors as a partition of the cube labelled by integer sets.
#[pyclass(module = "pyintdec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct IdfSet(CoreIdf);

#[pymethods]
impl IdfSet {
    /// Compile a formula. Free variables default to real and to name order;
    /// `variables` fixes the coordinate order and `ints` lists integer ones.
    #[staticmethod]
    #[pyo3(signature = (formula, variables = None, ints = Vec::new()))]
    fn compile(formula: &str, variables: Option<Vec<String>>, ints: Vec<String>) -> PyResult<Self> {
        let f = frontend::parse(formula).map_err(err)?;
        let ctx = context(variables, ints, &f);
        frontend::compile(&f, &ctx).map(IdfSet).map_err(err)
    }

    /// Canonical form of the union of `Z + D` over the given pairs.
    #[staticmethod]
    fn normalize(dim: usize, pairs: Vec<(IntegerSet, DecimalSet)>) -> PyResult<Self> {
        let pairs: Vec<_> = pairs.into_iter().map(|(z, d)| (z.0, d.0)).collect();
        CoreIdf::normalize(dim, &pairs).map(IdfSet).map_err(err)
    }

    #[staticmethod]
    fn empty(dim: usize) -> PyResult<Self> {
        CoreIdf::empty(dim).map(IdfSet).map_err(err)
    }

    #[staticmethod]
    fn universe(dim: usize) -> PyResult<Self> {
        CoreIdf::universe(dim).map(IdfSet).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        json::idf_from_json(&v).map(IdfSet).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// The cells as `(IntegerSet, DecimalSet)` pairs, empty label last.
    fn cells(&self) -> Vec<(IntegerSet, DecimalSet)> {
        self.0
            .cells()
            .iter()
            .map(|c| (IntegerSet(c.zpart.clone()), DecimalSet(c.dpart.clone())))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.0.cells().len()
    }

    fn contains(&self, p: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        self.0.contains(&rationals(&p)?).map_err(err)
    }

    fn union(&self, other: &IdfSet) -> PyResult<Self> {
        self.0.union(&other.0).map(IdfSet).map_err(err)
    }

    fn intersect(&self, other: &IdfSet) -> PyResult<Self> {
        self.0.intersect(&other.0).map(IdfSet).map_err(err)
    }

    fn difference(&self, other: &IdfSet) -> PyResult<Self> {
        self.0.difference(&other.0).map(IdfSet).map_err(err)
    }

    fn complement(&self) -> Self {
        IdfSet(self.0.complement())
    }

    fn product(&self, other: &IdfSet) -> PyResult<Self> {
        self.0.product(&other.0).map(IdfSet).map_err(err)
    }

    fn project(&self, i: usize) -> PyResult<Self> {
        self.0.project(i).map(IdfSet).map_err(err)
    }

    /// Component `k` of a result point is component `perm[k]` of a member.
    fn reorder(&self, perm: Vec<usize>) -> PyResult<Self> {
        self.0.reorder(&perm).map(IdfSet).map_err(err)
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn is_universal(&self) -> bool {
        self.0.is_universal()
    }

    fn is_subset(&self, other: &IdfSet) -> PyResult<bool> {
        self.0.is_subset(&other.0).map_err(err)
    }

    fn witness<'py>(&self, py: Python<'py>) -> PyResult<Option<Vec<Bound<'py, PyAny>>>> {
        self.0.witness().map(|p| fractions(py, &p)).transpose()
    }

    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = self.0.stats();
        let d = PyDict::new(py);
        d.set_item("cells", s.cells)?;
        d.set_item("states", s.states)?;
        d.set_item("regions", s.regions)?;
        Ok(d)
    }

    fn to_json(&self) -> String {
        json::idf_to_json(&self.0).to_string()
    }

    fn __eq__(&self, other: &IdfSet) -> PyResult<bool> {
        self.0.equals(&other.0).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("IdfSet(dim={}, cells={})", self.0.dim(), self.0.cells().len())
    }
}

/// A difference-bound matrix; read from and written to JSON.
#[pyclass(module = "pyintdec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct DBM(Dbm);

#[pymethods]
impl DBM {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        json::dbm_from_json(&v).map(DBM).map_err(err)
    }

    fn to_json(&self) -> String {
        json::dbm_to_json(&self.0).to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn contains(&self, p: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        self.0.contains(&rationals(&p)?).map_err(err)
    }

    /// Its points inside `[0,1)^n`.
    fn to_decimal(&self) -> DecimalSet {
        DecimalSet(self.0.to_decimal())
    }

    fn canonical(&self) -> Option<Self> {
        self.0.canonical().map(DBM)
    }

    fn __repr__(&self) -> String {
        format!("DBM(n={})", self.0.n())
    }
}

/// A DBM whose entries range over a Presburger set of parameters.
#[pyclass(module = "pyintdec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct CpDbm(CpDbmPlus);

#[pymethods]
impl CpDbm {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        json::cpdbm_from_json(&v).map(CpDbm).map_err(err)
    }

    #[staticmethod]
    fn from_dbm(m: &DBM) -> PyResult<Self> {
        CpDbmPlus::from_dbm(&m.0).map(CpDbm).map_err(err)
    }

    /// The set `Z + M` as a single parametric DBM.
    #[staticmethod]
    fn compose(z: &IntegerSet, m: &DBM) -> PyResult<Self> {
        CpDbmPlus::compose(&z.0, &m.0).map(CpDbm).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn phi(&self) -> IntegerSet {
        IntegerSet(self.0.phi().clone())
    }

    fn contains(&self, p: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        self.0.contains(&rationals(&p)?).map_err(err)
    }

    fn decompose(&self) -> PyResult<IdfSet> {
        self.0.decompose().map(IdfSet).map_err(err)
    }

    fn to_json(&self) -> String {
        json::cpdbm_to_json(&self.0).to_string()
    }

    fn __repr__(&self) -> String {
        format!("CpDbm(n={}, phi_states={})", self.0.n(), self.0.phi().num_states())
    }
}

/// Truth value of a closed formula.
#[pyfunction]
fn decide(formula: &str) -> PyResult<bool> {
    let f = frontend::parse(formula).map_err(err)?;
    frontend::decide(&f).map_err(err)
}

/// Free variables of a formula, in the default coordinate order.
#[pyfunction]
fn free_variables(formula: &str) -> PyResult<Vec<String>> {
    let f = frontend::parse(formula).map_err(err)?;
    Ok(f.free_names().into_iter().collect())
}

/// The timed-automaton zone family with maximal constant `m`, as a dict with
/// keys `cpdbm`, `shapes` and `formula` (text over x, y).
#[pyfunction]
fn timed_demo<'py>(py: Python<'py>, m: i64) -> PyResult<Bound<'py, PyDict>> {
    let d = core_timed_demo(m).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("cpdbm", CpDbm(d.cpdbm))?;
    out.set_item("shapes", IdfSet(d.shapes))?;
    out.set_item("formula", d.formula.to_string())?;
    Ok(out)
}

#[pyfunction]
fn var_limit() -> usize {
    presburger::var_limit()
}

/// Change the maximum number of integer coordinates an automaton may use.
#[pyfunction]
fn set_var_limit(limit: usize) {
    presburger::set_var_limit(limit)
}

#[pymodule]
fn pyintdec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("IntdecError", py.get_type::<IntdecError>())?;
    m.add("CapacityError", py.get_type::<CapacityError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add_class::<IntegerSet>()?;
    m.add_class::<DecimalSet>()?;
    m.add_class::<IdfSet>()?;
    m.add_class::<DBM>()?;
    m.add_class::<CpDbm>()?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(free_variables, m)?)?;
    m.add_function(wrap_pyfunction!(timed_demo, m)?)?;
    m.add_function(wrap_pyfunction!(var_limit, m)?)?;
    m.add_function(wrap_pyfunction!(set_var_limit, m)?)?;
    Ok(())
}
