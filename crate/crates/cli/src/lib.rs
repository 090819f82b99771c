//! The `spg` pipeline: parse a specification, translate the formula into a
//! PBES, normalise it into a parameterised parity game, instantiate it
//! symbolically and solve it.

use std::fmt::Write;
use std::time::Instant;

use serde::Serialize;
use spg_builder::{
    dependency_matrix, export_explicit, instantiate, layout, partition, stats, BuildError, BuildOptions, Strategy,
    SymbolicParityGame,
};
use spg_model::parse::parse_formula;
use spg_model::{parse_spec, Spec};
use spg_pbes::{normalize_ppg, translate, Ppg, TranslateOptions};
use spg_solver::{solve_explicit, totalize, winner, zielonka, ExplicitGame, Game, Player, WinningSets};
use thiserror::Error;

pub use spg_builder::DEFAULT_EXPLICIT_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Resource,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{phase}: {msg}")]
pub struct CliError {
    pub phase: &'static str,
    pub kind: ErrorKind,
    pub msg: String,
}

impl CliError {
    fn input(phase: &'static str, e: impl ToString) -> CliError {
        CliError {
            phase,
            kind: ErrorKind::Input,
            msg: e.to_string(),
        }
    }

    fn build(phase: &'static str, e: BuildError) -> CliError {
        let kind = match e {
            BuildError::StateCap { .. } | BuildError::ExplicitCap { .. } => ErrorKind::Resource,
            _ => ErrorKind::Input,
        };
        CliError {
            phase,
            kind,
            msg: e.to_string(),
        }
    }

    /// Process exit code: 3 for exceeded caps, 4 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Resource => 3,
            ErrorKind::Input => 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub structured: bool,
    pub strategy: Strategy,
    pub max_states: Option<u64>,
    pub explicit_cap: u64,
    /// Formula name or formula text; the first formula of the file if unset.
    pub formula: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            structured: true,
            strategy: Strategy::Simple,
            max_states: None,
            explicit_cap: DEFAULT_EXPLICIT_CAP,
            formula: None,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub states: String,
    pub mdd_nodes: usize,
    pub relation_nodes: usize,
    pub groups: usize,
    pub expansions: u64,
    pub levels: usize,
    pub won_eloise: Option<String>,
    pub won_abelard: Option<String>,
    /// Wall time per phase in seconds.
    pub phases: Vec<(String, f64)>,
    pub peak_kb: Option<u64>,
    pub verdict: Option<bool>,
}

impl Report {
    pub fn phase(&self, name: &str) -> Option<f64> {
        self.phases.iter().find(|(n, _)| n == name).map(|&(_, t)| t)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "states: {}", self.states).unwrap();
        writeln!(s, "mdd nodes: {}", self.mdd_nodes).unwrap();
        writeln!(s, "relation nodes: {}", self.relation_nodes).unwrap();
        writeln!(s, "groups: {}", self.groups).unwrap();
        writeln!(s, "expansions: {}", self.expansions).unwrap();
        writeln!(s, "levels: {}", self.levels).unwrap();
        if let (Some(e), Some(a)) = (&self.won_eloise, &self.won_abelard) {
            writeln!(s, "won by eloise: {e}").unwrap();
            writeln!(s, "won by abelard: {a}").unwrap();
        }
        for (name, t) in &self.phases {
            writeln!(s, "time {name}: {t:.3}s").unwrap();
        }
        if let Some(kb) = self.peak_kb {
            writeln!(s, "peak memory: {kb} kB").unwrap();
        }
        s
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

/// Peak resident set size of this process in kB, where the platform reports it.
pub fn peak_memory_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

struct Clock {
    phases: Vec<(String, f64)>,
    at: Instant,
}

impl Clock {
    fn new() -> Clock {
        Clock {
            phases: Vec::new(),
            at: Instant::now(),
        }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.phases.push((name.into(), (now - self.at).as_secs_f64()));
        self.at = now;
    }
}

fn select_formula(spec: &Spec, formula: Option<&str>) -> Result<spg_model::MuFormula, CliError> {
    match formula {
        None => spec
            .main_formula()
            .cloned()
            .ok_or_else(|| CliError::input("parse", "the specification declares no formula")),
        Some(f) => match spec.formula(f) {
            Some(x) => Ok(x.clone()),
            None => parse_formula(spec, f).map_err(|e| CliError::input("parse", e)),
        },
    }
}

/// Parses, translates and normalises.
pub fn to_ppg(text: &str, config: &Config) -> Result<Ppg, CliError> {
    to_ppg_timed(text, config, &mut Clock::new())
}

fn to_ppg_timed(text: &str, config: &Config, clock: &mut Clock) -> Result<Ppg, CliError> {
    let spec = parse_spec(text).map_err(|e| CliError::input("parse", e))?;
    let f = select_formula(&spec, config.formula.as_deref())?;
    clock.lap("parse");
    let opts = TranslateOptions {
        structured: config.structured,
        simplify: true,
    };
    let pbes = translate(&spec.process, &f, opts).map_err(|e| CliError::input("translate", e))?;
    clock.lap("translate");
    let ppg = normalize_ppg(&pbes).map_err(|e| CliError::input("normalize", e))?;
    clock.lap("normalize");
    Ok(ppg)
}

fn build_timed(text: &str, config: &Config, clock: &mut Clock) -> Result<SymbolicParityGame, CliError> {
    let ppg = to_ppg_timed(text, config, clock)?;
    let l = layout(&ppg);
    let groups = partition(&ppg, &l, config.strategy);
    clock.lap("partition");
    let opts = BuildOptions {
        max_states: config.max_states,
    };
    let g = instantiate(&ppg, l, groups, opts).map_err(|e| CliError::build("instantiate", e))?;
    clock.lap("instantiate");
    Ok(g)
}

/// Parse through instantiation.
pub fn build_game(text: &str, config: &Config) -> Result<SymbolicParityGame, CliError> {
    build_timed(text, config, &mut Clock::new())
}

fn base_report(g: &mut SymbolicParityGame) -> Report {
    let s = stats(g);
    Report {
        states: s.states.to_string(),
        mdd_nodes: s.mdd_nodes,
        relation_nodes: s.relation_nodes,
        groups: g.groups.len(),
        expansions: s.expansions,
        levels: s.levels,
        ..Report::default()
    }
}

/// Instantiation statistics without solving.
pub fn run_stats(text: &str, config: &Config) -> Result<Report, CliError> {
    let mut clock = Clock::new();
    let mut g = build_timed(text, config, &mut clock)?;
    let mut r = base_report(&mut g);
    clock.lap("stats");
    r.phases = clock.phases;
    r.peak_kb = peak_memory_kb();
    Ok(r)
}

/// A solved game: the totalised game and both winning sets.
pub struct Solved {
    pub game: Game,
    pub sets: WinningSets,
    /// True iff Eloise wins the initial vertex.
    pub verdict: bool,
}

pub fn solve_game(g: SymbolicParityGame) -> Solved {
    let mut game = totalize(Game::from_symbolic(g));
    let sets = zielonka(&mut game);
    let verdict = winner(&game, &sets) == Player::Eloise;
    Solved { game, sets, verdict }
}

/// The whole pipeline; the verdict is true iff Eloise wins the initial vertex.
pub fn run_check(text: &str, config: &Config) -> Result<Report, CliError> {
    run_check_solved(text, config).map(|(r, _)| r)
}

/// [`run_check`] that also hands back the solved game.
pub fn run_check_solved(text: &str, config: &Config) -> Result<(Report, Solved), CliError> {
    let mut clock = Clock::new();
    let mut g = build_timed(text, config, &mut clock)?;
    let mut r = base_report(&mut g);
    clock.lap("stats");
    let mut game = totalize(Game::from_symbolic(g));
    clock.lap("totalize");
    let sets = zielonka(&mut game);
    let verdict = winner(&game, &sets) == Player::Eloise;
    clock.lap("solve");
    r.won_eloise = Some(game.store.count(sets.eloise).to_string());
    r.won_abelard = Some(game.store.count(sets.abelard).to_string());
    r.verdict = Some(verdict);
    r.phases = clock.phases;
    r.peak_kb = peak_memory_kb();
    Ok((r, Solved { game, sets, verdict }))
}

/// Dependency matrix as text.
pub fn run_matrix(text: &str, config: &Config) -> Result<String, CliError> {
    let ppg = to_ppg(text, config)?;
    let l = layout(&ppg);
    let groups = partition(&ppg, &l, config.strategy);
    Ok(dependency_matrix(&l, &groups).to_string())
}

/// PGSolver text of the instantiated game.
pub fn run_export(text: &str, config: &Config) -> Result<String, CliError> {
    let mut g = build_game(text, config)?;
    export_explicit(&mut g, config.explicit_cap).map_err(|e| CliError::build("export", e))
}

/// Solves PGSolver text explicitly; true iff Eloise wins the initial vertex.
pub fn run_solve_pg(text: &str) -> Result<bool, CliError> {
    let e = ExplicitGame::parse(text).map_err(|e| CliError::input("parse", e))?;
    // the explicit solver recurses once per nested subgame
    let w = std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(1 << 30)
            .spawn_scoped(s, || solve_explicit(&e))
            .expect("solver thread starts")
            .join()
            .expect("solver thread finishes")
    });
    Ok(w.winner_of(e.init) == Some(Player::Eloise))
}
