//! Python bindings: programs, fixpoint runs, goal evaluation, coverage,
//! abstract interpretation and declarative debugging sessions.
//! Structured results cross the boundary as plain dicts and lists.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;
use unfolder::apps::{self, AbstractSpec, Verdict};
use unfolder::engine::{effective_mode, run_with_mode};
use unfolder::exec::Strategy;
use unfolder::syntax::{show_program, validate};
use unfolder::trace::TraceStyle;
use unfolder::{CleanMode, Config, Error};

create_exception!(unfolder, UnfolderError, PyException);

fn err(e: Error) -> PyErr {
    UnfolderError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn mode_arg(name: &str) -> PyResult<CleanMode> {
    match name {
        "auto" => Ok(CleanMode::Auto),
        "optimized" => Ok(CleanMode::Optimized),
        "general" => Ok(CleanMode::General),
        _ => Err(PyValueError::new_err(format!("unknown clean mode {name:?}"))),
    }
}

fn mode_name(m: CleanMode) -> &'static str {
    match m {
        CleanMode::Auto => "auto",
        CleanMode::Optimized => "optimized",
        CleanMode::General => "general",
    }
}

fn strategy_arg(name: &str, seed: u64) -> PyResult<Strategy> {
    match name {
        "outermost" => Ok(Strategy::Outermost),
        "innermost" => Ok(Strategy::Innermost),
        "random" => Ok(Strategy::Random(seed)),
        _ => Err(PyValueError::new_err(format!("unknown strategy {name:?}"))),
    }
}

fn verdict_arg(name: &str) -> PyResult<Verdict> {
    match name {
        "correct" | "c" | "y" => Ok(Verdict::Correct),
        "wrong" | "w" | "n" => Ok(Verdict::Wrong),
        _ => Err(PyValueError::new_err(format!("verdict must be \"correct\" or \"wrong\", not {name:?}"))),
    }
}

fn nonzero(what: &str, n: usize) -> PyResult<usize> {
    if n == 0 {
        return Err(PyValueError::new_err(format!("{what} must be at least 1")));
    }
    Ok(n)
}

/// A parsed program. Parsing fails with `UnfolderError` carrying line and column.
#[pyclass(module = "unfolder", frozen)]
struct Program {
    inner: unfolder::Program,
    cfg: Config,
}

#[pymethods]
impl Program {
    #[new]
    #[pyo3(signature = (source, defer_comparisons = false))]
    fn new(source: &str, defer_comparisons: bool) -> PyResult<Self> {
        let inner = unfolder::parse_program(source).map_err(err)?;
        let cfg = Config { defer_comparisons, ..Config::default() }.for_program(&inner);
        Ok(Program { inner, cfg })
    }

    /// Messages for every restriction the program breaks; empty when valid.
    fn violations(&self) -> Vec<String> {
        validate(&self.inner).into_iter().map(|v| format!("{}: {}", v.rule, v.message)).collect()
    }

    fn functions(&self) -> Vec<String> {
        self.inner.function_names()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels()
    }

    /// The clean mode `auto` resolves to.
    fn clean_mode(&self) -> &'static str {
        mode_name(effective_mode(&self.inner, &self.cfg))
    }

    /// Parses a goal against this program and returns its canonical text.
    fn parse_expr(&self, text: &str) -> PyResult<String> {
        unfolder::parse_expr(&self.inner, text).map(|e| e.to_string()).map_err(err)
    }

    #[pyo3(signature = (steps = 5, clean_mode = "auto"))]
    fn fixpoint(&self, py: Python<'_>, steps: usize, clean_mode: &str) -> PyResult<Fixpoint> {
        let steps = nonzero("steps", steps)?;
        let mode = match mode_arg(clean_mode)? {
            CleanMode::Auto => effective_mode(&self.inner, &self.cfg),
            m => m,
        };
        let run = py.detach(|| run_with_mode(&self.inner, steps, &self.cfg, mode));
        Ok(Fixpoint { run })
    }

    /// Evaluates a ground goal with the fixpoint sequence. With `verify`
    /// set to a strategy name the value is checked against rewriting.
    #[pyo3(signature = (goal, steps = 10, fuel = 10_000, verify = None, seed = 0))]
    fn run<'py>(&self, py: Python<'py>, goal: &str, steps: usize, fuel: usize, verify: Option<&str>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let (steps, fuel) = (nonzero("steps", steps)?, nonzero("fuel", fuel)?);
        let e = unfolder::parse_expr(&self.inner, goal).map_err(err)?;
        let strategy = verify.map(|s| strategy_arg(s, seed)).transpose()?;
        let v = py.detach(|| {
            let r = apps::run_goal(&self.inner, &e, steps, &self.cfg, fuel);
            let check = strategy.map(|s| apps::verify(&self.inner, &e, &r, s, fuel));
            let mut v = serde_json::to_value(&r).expect("goal runs serialize");
            v["verification"] = serde_json::to_value(check).expect("verifications serialize");
            v
        });
        to_py(py, &v)
    }

    #[pyo3(signature = (steps = 5, stop_early = false))]
    fn coverage<'py>(&self, py: Python<'py>, steps: usize, stop_early: bool) -> PyResult<Bound<'py, PyAny>> {
        let steps = nonzero("steps", steps)?;
        let (report, table) = py.detach(|| {
            let r = apps::coverage(&self.inner, steps, &self.cfg, stop_early);
            let t = r.table(&self.inner);
            (r, t)
        });
        let mut v = serde_json::to_value(&report).expect("coverage reports serialize");
        v["table"] = Value::String(table);
        to_py(py, &v)
    }

    /// Abstract fixpoint using the program's `cata` section.
    #[pyo3(signature = (steps = 10))]
    fn abstract_fixpoint(&self, py: Python<'_>, steps: usize) -> PyResult<Fixpoint> {
        let steps = nonzero("steps", steps)?;
        let spec = AbstractSpec::from_program(&self.inner);
        if spec.rules.is_empty() {
            return Err(UnfolderError::new_err("the program has no catamorphism rules"));
        }
        let run = py.detach(|| apps::abstract_fixpoint(&self.inner, &spec, steps, &self.cfg)).map_err(err)?;
        Ok(Fixpoint { run })
    }

    /// Starts a declarative debugging session for a goal.
    #[pyo3(signature = (goal, steps = 8))]
    fn debug(&self, py: Python<'_>, goal: &str, steps: usize) -> PyResult<DebugSession> {
        let steps = nonzero("steps", steps)?;
        let e = unfolder::parse_expr(&self.inner, goal).map_err(err)?;
        let edt = py.detach(|| apps::build_edt(&self.inner, &e, steps, &self.cfg)).map_err(err)?;
        Ok(DebugSession { inner: apps::DebugSession::new(edt) })
    }

    fn __str__(&self) -> String {
        show_program(&self.inner)
    }
}

/// The computed prefix `I_0 .. I_n` of a fixpoint sequence.
#[pyclass(module = "unfolder", frozen)]
struct Fixpoint {
    run: unfolder::Run,
}

impl Fixpoint {
    fn interp(&self, n: usize) -> PyResult<&unfolder::Interpretation> {
        self.run.at(n).ok_or_else(|| pyo3::exceptions::PyIndexError::new_err(format!("only I0..I{} were computed", self.run.steps())))
    }
}

#[pymethods]
impl Fixpoint {
    #[getter]
    fn converged(&self) -> bool {
        self.run.converged
    }

    /// Index of the last computed interpretation.
    #[getter]
    fn steps(&self) -> usize {
        self.run.steps()
    }

    #[getter]
    fn mode(&self) -> Option<&'static str> {
        self.run.mode.map(mode_name)
    }

    /// Facts of `I_n` rendered as `head | guard = body <trace>`.
    #[pyo3(signature = (n, positions = false, bots = false))]
    fn listing(&self, n: usize, positions: bool, bots: bool) -> PyResult<Vec<String>> {
        Ok(self.interp(n)?.listing(TraceStyle { positions, bots }))
    }

    /// The unguarded ⊥ facts accumulated up to `I_n`.
    fn bottoms(&self, n: usize) -> PyResult<Vec<String>> {
        let style = TraceStyle { positions: false, bots: false };
        Ok(self.interp(n)?.bot_facts.iter().map(|f| f.display(style)).collect())
    }

    /// Facts of `I_n` as dicts with head, guard, body, origin and traces.
    fn facts<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &unfolder::json::interpretation(self.interp(n)?)["facts"])
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &unfolder::json::run(&self.run))
    }

    fn __len__(&self) -> usize {
        self.run.interps.len()
    }
}

/// Top-down questioning over the dependence tree of one goal.
#[pyclass(module = "unfolder")]
struct DebugSession {
    inner: apps::DebugSession,
}

#[pymethods]
impl DebugSession {
    /// The next node to judge as a dict, or None once the session is over.
    fn question<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        match self.inner.next_question().and_then(|n| self.inner.edt.node(n)) {
            Some(node) => Ok(Some(to_py(py, &serde_json::to_value(node).expect("nodes serialize"))?)),
            None => Ok(None),
        }
    }

    /// Records a verdict ("correct" or "wrong") and returns the new status.
    fn answer<'py>(&mut self, py: Python<'py>, node: usize, verdict: &str) -> PyResult<Bound<'py, PyAny>> {
        let status = self.inner.answer(node, verdict_arg(verdict)?).map_err(err)?;
        to_py(py, &serde_json::to_value(status).expect("statuses serialize"))
    }

    #[getter]
    fn status<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(self.inner.status()).expect("statuses serialize"))
    }

    /// Label of the blamed rule, if any.
    #[getter]
    fn blamed(&self) -> Option<String> {
        self.inner.blamed().map(str::to_string)
    }

    fn nodes<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(&self.inner.edt.nodes).expect("nodes serialize"))
    }

    fn render(&self) -> String {
        self.inner.edt.render()
    }
}

#[pymodule]
#[pyo3(name = "unfolder")]
fn unfolder_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("UnfolderError", m.py().get_type::<UnfolderError>())?;
    m.add("SCHEMA", unfolder::json::SCHEMA)?;
    m.add_class::<Program>()?;
    m.add_class::<Fixpoint>()?;
    m.add_class::<DebugSession>()?;
    Ok(())
}
