//! Python bindings. Scalars cross the boundary as `fractions.Fraction`
//! (accepted as `int`, `Fraction` or `"p/q"` strings); reports come back as
//! plain dicts.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use isodist::bisector::{bisector_weight_map, extract_symmetric_subset};
use isodist::harness::{self, CheckName, CheckOptions, Input, SweepConfig, VerifyConfig};
use isodist::incidence::{isosceles_count, isosceles_count_brute, st_bound_report};
use isodist::planar::{cartesian_square, squared_distance_set};
use isodist::sets::{self, CombineOp};
use isodist::{Error, ExactScalar, Family, FamilySpec, FiniteScalarSet, PlanarPointSet, Point};

fn err(e: Error) -> PyErr {
    match e {
        Error::UnknownCheck(_) => PyKeyError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn scalar(obj: &Bound<'_, PyAny>) -> PyResult<ExactScalar> {
    let text = obj.str()?.to_string();
    text.trim()
        .parse()
        .map_err(|e| PyValueError::new_err(format!("not an exact rational: {text:?} ({e})")))
}

fn fraction<'py>(py: Python<'py>, x: &ExactScalar) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((x.to_string(),))
}

fn json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "ScalarSet", module = "isodist", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyScalarSet(FiniteScalarSet);

#[pymethods]
impl PyScalarSet {
    #[new]
    fn new(elements: &Bound<'_, PyAny>) -> PyResult<Self> {
        let items = elements.try_iter()?.map(|x| scalar(&x?)).collect::<PyResult<Vec<_>>>()?;
        Ok(PyScalarSet(FiniteScalarSet::from_elements(items)))
    }

    fn elements<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.0.iter().map(|x| fraction(py, x)).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, x: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.0.contains(&scalar(x)?))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("ScalarSet({})", self.0)
    }

    fn difference_set(&self) -> PyResult<Self> {
        sets::difference_set(&self.0).map(PyScalarSet).map_err(err)
    }

    /// `op` is one of `"add"`, `"subtract"`, `"multiply"`.
    fn combine(&self, other: &Self, op: &str) -> PyResult<Self> {
        let op = match op {
            "add" => CombineOp::Add,
            "subtract" => CombineOp::Subtract,
            "multiply" => CombineOp::Multiply,
            _ => return Err(PyValueError::new_err(format!("unknown operation {op:?}"))),
        };
        sets::pairwise_combine(&self.0, &other.0, op).map(PyScalarSet).map_err(err)
    }

    /// `mA − nA`.
    fn iterated(&self, m: usize, n: usize) -> PyResult<Self> {
        sets::iterated_combination(m, n, &self.0).map(PyScalarSet).map_err(err)
    }

    fn dilate(&self, factor: &Bound<'_, PyAny>) -> PyResult<Self> {
        sets::dilate(&scalar(factor)?, &self.0).map(PyScalarSet).map_err(err)
    }

    fn square(&self) -> PyResult<Self> {
        sets::elementwise_square(&self.0).map(PyScalarSet).map_err(err)
    }

    /// `self · b + c`.
    fn ab_plus_c(&self, b: &Self, c: &Self) -> PyResult<Self> {
        sets::ab_plus_c_set(&self.0, &b.0, &c.0).map(PyScalarSet).map_err(err)
    }

    /// `A × A` as a point set.
    fn cartesian_square(&self) -> PyResult<PyPointSet> {
        cartesian_square(&self.0).map(PyPointSet).map_err(err)
    }
}

#[pyclass(name = "PointSet", module = "isodist", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPointSet(PlanarPointSet);

#[pymethods]
impl PyPointSet {
    /// From an iterable of `(x, y)` pairs.
    #[new]
    fn new(points: &Bound<'_, PyAny>) -> PyResult<Self> {
        let pts = points
            .try_iter()?
            .map(|p| {
                let (x, y): (Bound<'_, PyAny>, Bound<'_, PyAny>) = p?.extract()?;
                Ok(Point::new(scalar(&x)?, scalar(&y)?))
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyPointSet(PlanarPointSet::from_points(pts)))
    }

    #[staticmethod]
    fn grid(n: usize) -> PyResult<Self> {
        match isodist::generate_family(&FamilySpec::grid(n)).map_err(err)? {
            Family::Points(p) => Ok(PyPointSet(p)),
            Family::Scalars(_) => unreachable!(),
        }
    }

    fn points<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>> {
        self.0.iter().map(|p| Ok((fraction(py, &p.x)?, fraction(py, &p.y)?))).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("PointSet(<{} points>)", self.0.len())
    }

    #[pyo3(signature = (include_zero = true))]
    fn squared_distances(&self, include_zero: bool) -> PyResult<PyScalarSet> {
        squared_distance_set(&self.0, include_zero)
            .map(|d| PyScalarSet(d.squared_distances))
            .map_err(err)
    }

    fn isosceles_count(&self) -> PyResult<u64> {
        isosceles_count(&self.0).map_err(err)
    }

    #[pyo3(signature = (cap = 60))]
    fn isosceles_count_brute(&self, cap: usize) -> PyResult<u64> {
        isosceles_count_brute(&self.0, cap).map_err(err)
    }

    /// `[(a, b, c, weight), …]` over bisector lines `ax + by + c = 0`.
    fn bisector_weights(&self) -> PyResult<Vec<(String, String, String, u64)>> {
        let map = bisector_weight_map(&self.0).map_err(err)?;
        Ok(map
            .entries()
            .iter()
            .map(|(l, w)| (l.a().to_string(), l.b().to_string(), l.c().to_string(), *w))
            .collect())
    }

    /// Dict with `axis` (`"a b c"`), `weight`, `subset` and `mirror`.
    #[pyo3(signature = (include_fixed_points = false))]
    fn symmetric_subset<'py>(&self, py: Python<'py>, include_fixed_points: bool) -> PyResult<Bound<'py, PyDict>> {
        let s = extract_symmetric_subset(&self.0, include_fixed_points).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("axis", s.axis.to_string())?;
        d.set_item("weight", s.weight)?;
        let pts = |p: &PlanarPointSet| -> PyResult<Bound<'py, PyList>> {
            let items = p
                .iter()
                .map(|q| Ok((fraction(py, &q.x)?, fraction(py, &q.y)?)))
                .collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)
        };
        d.set_item("subset", pts(&s.subset)?)?;
        d.set_item("mirror", pts(&s.mirror)?)?;
        Ok(d)
    }

    /// The incidence report as a dict.
    fn incidence_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let map = bisector_weight_map(&self.0).map_err(err)?;
        let r = st_bound_report(&self.0, &map).map_err(err)?;
        json(py, &isodist::report::to_json(&r).map_err(err)?)
    }
}

fn input(obj: &Bound<'_, PyAny>) -> PyResult<Input> {
    if let Ok(s) = obj.cast::<PyScalarSet>() {
        Ok(Input::Scalars(s.get().0.clone()))
    } else if let Ok(p) = obj.cast::<PyPointSet>() {
        Ok(Input::Points(p.get().0.clone()))
    } else {
        Err(PyValueError::new_err("expected a ScalarSet or PointSet"))
    }
}

/// Materializes a family descriptor such as `"ap(n=5)"` or `"grid(n=3)"`.
#[pyfunction]
#[pyo3(signature = (descriptor, seed = None))]
fn generate(py: Python<'_>, descriptor: &str, seed: Option<u64>) -> PyResult<Py<PyAny>> {
    let mut spec: FamilySpec = descriptor.parse().map_err(err)?;
    if let Some(s) = seed {
        spec = spec.with_seed(s);
    }
    Ok(match isodist::generate_family(&spec).map_err(err)? {
        Family::Scalars(a) => Py::new(py, PyScalarSet(a))?.into_any(),
        Family::Points(p) => Py::new(py, PyPointSet(p))?.into_any(),
    })
}

/// Runs one named check and returns `{"check", "reports", ["symmetric_subset"]}`.
#[pyfunction]
#[pyo3(signature = (name, data, include_zero = true, include_fixed_points = false, m = None, n = None))]
fn check<'py>(
    py: Python<'py>,
    name: &str,
    data: &Bound<'py, PyAny>,
    include_zero: bool,
    include_fixed_points: bool,
    m: Option<usize>,
    n: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let check: CheckName = name.parse().map_err(err)?;
    let opts = CheckOptions {
        include_zero,
        include_fixed_points,
        plunnecke: m.zip(n),
        ..CheckOptions::default()
    };
    let outcome = harness::run_check(check, &input(data)?, &opts).map_err(err)?;
    json(py, &outcome.to_json().map_err(err)?)
}

/// Sweep as a list of row dicts.
#[pyfunction]
#[pyo3(signature = (family, check, start, stop, seed = None))]
fn sweep<'py>(
    py: Python<'py>,
    family: &str,
    check: &str,
    start: usize,
    stop: usize,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = SweepConfig {
        family: family.parse().map_err(err)?,
        check: check.parse().map_err(err)?,
        sizes: start..=stop,
        seed,
        options: CheckOptions::default(),
        timing: false,
    };
    let report = harness::run_sweep(&cfg);
    json(py, &report.to_json().map_err(err)?)?.get_item("rows")
}

/// Runs the verification corpus; `smoke` uses small trial counts.
#[pyfunction]
#[pyo3(signature = (seed = 0, smoke = true))]
fn verify<'py>(py: Python<'py>, seed: u64, smoke: bool) -> PyResult<Bound<'py, PyAny>> {
    let cfg = if smoke { VerifyConfig::smoke(seed) } else { VerifyConfig { seed, ..VerifyConfig::default() } };
    let summary = harness::verify_corpus(&cfg);
    json(py, &isodist::report::to_json(&summary).map_err(err)?)
}

#[pymodule(name = "isodist")]
fn isodist_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalarSet>()?;
    m.add_class::<PyPointSet>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
