//! Python bindings: games, solvers, relations, witnesses, risk limits and
//! epistemic structures. Reports come back as plain dicts.

use std::path::Path;

use ordinal_games::epistemic::{self, Attitude, PossibilityStructure};
use ordinal_games::game::{samples, OrdinalGame};
use ordinal_games::generate::{self, GeneratorConfig};
use ordinal_games::{io, risk, solvers};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn read(path: &str) -> PyResult<String> {
    std::fs::read_to_string(path).map_err(|e| err(format!("{path}: {e}")))
}

fn parent(path: &str) -> Option<&Path> {
    Path::new(path).parent()
}

#[pyclass(name = "Game", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGame {
    inner: OrdinalGame,
}

#[pymethods]
impl PyGame {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_game(text).map(|inner| PyGame { inner }).map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Self::from_json(&read(path)?)
    }

    /// One of `leading`, `battle_of_sexes`, `admissible_not_maxmin`, `maxmin_not_mixed`.
    #[staticmethod]
    fn sample(name: &str) -> PyResult<Self> {
        let inner = match name {
            "leading" => samples::leading(),
            "battle_of_sexes" => samples::battle_of_sexes(),
            "admissible_not_maxmin" => samples::admissible_not_maxmin(),
            "maxmin_not_mixed" => samples::maxmin_not_mixed(),
            _ => return Err(err(format!("unknown sample `{name}`"))),
        };
        Ok(PyGame { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (actions, seed=0, generic=false, max_payoff=9))]
    fn random(actions: Vec<usize>, seed: u64, generic: bool, max_payoff: i64) -> PyResult<Self> {
        let mut c = GeneratorConfig::new(seed, actions);
        c.generic = generic;
        c.max_payoff = max_payoff;
        generate::random_game(&c).map(|inner| PyGame { inner }).map_err(err)
    }

    #[getter]
    fn players(&self) -> Vec<String> {
        self.inner.players().to_vec()
    }

    fn actions(&self, player: &str) -> PyResult<Vec<String>> {
        let i = self.player(player)?;
        Ok(self.inner.actions(i).to_vec())
    }

    /// Exact payoff as a string such as `"3"` or `"7/15"`.
    fn payoff(&self, player: &str, profile: Vec<String>) -> PyResult<String> {
        let i = self.player(player)?;
        if profile.len() != self.inner.num_players() {
            return Err(err("profile length differs from the number of players"));
        }
        let idx = profile
            .iter()
            .enumerate()
            .map(|(j, a)| self.inner.action_index(j, a).ok_or_else(|| err(format!("unknown action `{a}`"))))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(ordinal_games::game::format_payoff(self.inner.payoff(i, &idx)))
    }

    fn is_generic(&self) -> bool {
        self.inner.is_generic().overall
    }

    fn to_json(&self) -> String {
        io::write_game(&self.inner)
    }

    fn __repr__(&self) -> String {
        let shape: Vec<String> = (0..self.inner.num_players()).map(|i| self.inner.num_actions(i).to_string()).collect();
        format!("Game({}; {})", self.inner.players().join(", "), shape.join("x"))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

impl PyGame {
    fn player(&self, name: &str) -> PyResult<usize> {
        self.inner.player_index(name).ok_or_else(|| err(format!("unknown player `{name}`")))
    }
}

fn attitude(s: &str) -> PyResult<Attitude> {
    s.parse().map_err(err)
}

#[pyclass(name = "PossibilityStructure", frozen)]
pub struct PyPossibility {
    inner: PossibilityStructure,
}

#[pymethods]
impl PyPossibility {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        PossibilityStructure::parse(text, None).map(|inner| PyPossibility { inner }).map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        PossibilityStructure::parse(&read(path)?, parent(path))
            .map(|inner| PyPossibility { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn random(game: &PyGame, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PyPossibility {
            inner: generate::random_possibility_structure(&game.inner, &mut rng),
        }
    }

    #[getter]
    fn game(&self) -> PyGame {
        PyGame {
            inner: self.inner.game().clone(),
        }
    }

    /// Compares the projected chain with the matching procedure at every level.
    #[pyo3(signature = (attitude_tag, depth=None))]
    fn check<'py>(&self, py: Python<'py>, attitude_tag: &str, depth: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
        let rep = self
            .inner
            .check_inclusion_theorem_to(attitude(attitude_tag)?, depth)
            .map_err(err)?;
        to_py(py, &rep.to_json(self.inner.game()))
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }
}

#[pyclass(name = "KnowledgeStructure", frozen)]
pub struct PyKnowledge {
    inner: epistemic::KnowledgeStructure,
}

#[pymethods]
impl PyKnowledge {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        epistemic::KnowledgeStructure::parse(text, None)
            .map(|inner| PyKnowledge { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        epistemic::KnowledgeStructure::parse(&read(path)?, parent(path))
            .map(|inner| PyKnowledge { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn random(game: &PyGame, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PyKnowledge {
            inner: generate::random_knowledge_structure(&game.inner, &mut rng),
        }
    }

    #[getter]
    fn num_states(&self) -> usize {
        self.inner.states().len()
    }

    /// States (by index) where `player` knows the event.
    fn knows(&self, player: &str, event: Vec<usize>) -> PyResult<Vec<usize>> {
        let i = self
            .inner
            .game()
            .player_index(player)
            .ok_or_else(|| err(format!("unknown player `{player}`")))?;
        let n = self.inner.states().len();
        if let Some(w) = event.iter().find(|&&w| w >= n) {
            return Err(err(format!("state {w} out of range")));
        }
        Ok(self.inner.knowledge_operator(i, &event.into_iter().collect()).into_iter().collect())
    }

    fn wt_check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.check_wt_theorem().to_json(self.inner.game()))
    }

    #[pyo3(signature = (seed=0))]
    fn product_check<'py>(&self, py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let rep = self.inner.product_triviality_check(seed).map_err(err)?;
        to_py(py, &rep.to_json(self.inner.game()))
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }
}

/// Full elimination trace for `concept` (`pr`, `wr`, `br`, `tr`, `iesd`, `yr`).
#[pyfunction]
fn solve<'py>(py: Python<'py>, game: &PyGame, concept: &str) -> PyResult<Bound<'py, PyAny>> {
    let c: solvers::Concept = concept.parse().map_err(err)?;
    let trace = solvers::solve(&game.inner, c).map_err(err)?;
    solvers::verify_trace(&game.inner, &trace).map_err(err)?;
    to_py(py, &trace.to_json(&game.inner))
}

#[pyfunction]
fn relations<'py>(py: Python<'py>, game: &PyGame) -> PyResult<Bound<'py, PyAny>> {
    let rep = solvers::relations(&game.inner).map_err(err)?;
    to_py(py, &rep.to_json(&game.inner))
}

/// Structure whose projected chain reproduces the procedure for `attitude`.
#[pyfunction]
fn witness(game: &PyGame, attitude_tag: &str) -> PyResult<PyPossibility> {
    epistemic::build_witness_structure(&game.inner, attitude(attitude_tag)?)
        .map(|inner| PyPossibility { inner })
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (game, r=vec![1, 2, 4, 8]))]
fn limit<'py>(py: Python<'py>, game: &PyGame, r: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
    let rep = risk::convergence_experiment(&game.inner, &r).map_err(err)?;
    let mut v = rep.to_json(&game.inner);
    v["holds"] = json!(rep.holds());
    to_py(py, &v)
}

/// Member `r` of the concave family, rescaled to `[0, 1]` per player.
#[pyfunction]
fn concave_transform(game: &PyGame, r: u32) -> PyResult<PyGame> {
    risk::concave_transform(&game.inner, r)
        .map(|m| PyGame { inner: m.game })
        .map_err(err)
}

#[pyfunction]
fn limiting_game(game: &PyGame) -> PyGame {
    PyGame {
        inner: risk::limiting_game(&game.inner).game,
    }
}

#[pymodule]
fn pyordinal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_class::<PyPossibility>()?;
    m.add_class::<PyKnowledge>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(relations, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(limit, m)?)?;
    m.add_function(wrap_pyfunction!(concave_transform, m)?)?;
    m.add_function(wrap_pyfunction!(limiting_game, m)?)?;
    Ok(())
}
