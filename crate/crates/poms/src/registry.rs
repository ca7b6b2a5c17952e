//! Strategy registry: every scheduler and solver variant is registered under
//! a stable name and constructed from configuration at run time. The names
//! here are the values accepted by the CLI and the run configuration.

use thiserror::Error;

use crate::schedule::{
    BlockChoice, CenterOut, CenteredSoften, Diagonal, MinEntropy, TileChoice, Uniform, UniformCell,
};
use crate::solver::{BlockSolver, BmsConfig, BreakoutSolver};

#[derive(Debug, Error, PartialEq)]
#[error("unknown {kind} '{name}' (known: {known})")]
pub struct UnknownStrategy {
    pub kind: &'static str,
    pub name: String,
    pub known: String,
}

fn unknown(kind: &'static str, name: &str, names: &[&str]) -> UnknownStrategy {
    UnknownStrategy {
        kind,
        name: name.to_string(),
        known: names.join(", "),
    }
}

/// Parameters a block choice scheduler may draw on.
#[derive(Debug, Clone, Copy)]
pub struct BlockChoiceParams {
    /// Decay length for the distance-weighted schedulers.
    pub lambda: f64,
}

type BlockChoiceFactory = fn(&BlockChoiceParams) -> Box<dyn BlockChoice>;

const BLOCK_CHOICES: &[(&str, BlockChoiceFactory)] = &[
    ("uniform", |_| Box::new(Uniform)),
    ("diagonal", |p| Box::new(Diagonal { lambda: p.lambda })),
    ("center-out", |p| Box::new(CenterOut { lambda: p.lambda })),
];

pub fn block_choice_names() -> Vec<&'static str> {
    BLOCK_CHOICES.iter().map(|(n, _)| *n).collect()
}

pub fn make_block_choice(
    name: &str,
    params: &BlockChoiceParams,
) -> Result<Box<dyn BlockChoice>, UnknownStrategy> {
    BLOCK_CHOICES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| f(params))
        .ok_or_else(|| unknown("block choice scheduler", name, &block_choice_names()))
}

type TileChoiceFactory = fn() -> Box<dyn TileChoice>;

const TILE_CHOICES: &[(&str, TileChoiceFactory)] = &[
    ("min-entropy", || Box::new(MinEntropy)),
    ("uniform-cell", || Box::new(UniformCell)),
];

pub fn tile_choice_names() -> Vec<&'static str> {
    TILE_CHOICES.iter().map(|(n, _)| *n).collect()
}

pub fn make_tile_choice(name: &str) -> Result<Box<dyn TileChoice>, UnknownStrategy> {
    TILE_CHOICES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| f())
        .ok_or_else(|| unknown("tile choice scheduler", name, &tile_choice_names()))
}

type SolverFactory = fn(&BmsConfig) -> Result<Box<dyn BlockSolver>, UnknownStrategy>;

const BLOCK_SOLVERS: &[(&str, SolverFactory)] = &[("bms", |cfg| {
    Ok(Box::new(BreakoutSolver::new(
        cfg.max_iterations,
        make_tile_choice(&cfg.tile_choice)?,
        Box::new(CenteredSoften { extent: cfg.soften }),
    )))
})];

pub fn block_solver_names() -> Vec<&'static str> {
    BLOCK_SOLVERS.iter().map(|(n, _)| *n).collect()
}

pub fn make_block_solver(
    name: &str,
    cfg: &BmsConfig,
) -> Result<Box<dyn BlockSolver>, UnknownStrategy> {
    BLOCK_SOLVERS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| f(cfg))
        .ok_or_else(|| unknown("block solver", name, &block_solver_names()))?
}
