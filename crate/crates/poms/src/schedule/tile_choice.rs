use poms_model::{TileMask, TileSet};
use rand::{Rng, RngCore};

use crate::propagator::BlockState;

/// Tile choice scheduler: picks the next (cell, tile) resolution for the
/// block solver. Returns `None` when no unpinned multi-tile cell remains.
pub trait TileChoice: Send + Sync {
    fn choose(
        &self,
        block: &BlockState,
        ts: &TileSet,
        rng: &mut dyn RngCore,
    ) -> Option<(usize, u32)>;
}

const ENTROPY_TIE_EPS: f64 = 1e-9;

/// Pick the unresolved cell of minimum Shannon entropy over its
/// weight-normalized domain, ties broken uniformly at random; then sample a
/// tile from the cell's domain proportionally to tile weight.
pub struct MinEntropy;

impl TileChoice for MinEntropy {
    fn choose(
        &self,
        block: &BlockState,
        ts: &TileSet,
        rng: &mut dyn RngCore,
    ) -> Option<(usize, u32)> {
        let mut best = f64::INFINITY;
        let mut ties: Vec<usize> = Vec::new();
        for cell in block.unresolved_cells() {
            let h = weighted_entropy(block.mask(cell), ts.weights());
            if h < best - ENTROPY_TIE_EPS {
                best = h;
                ties.clear();
                ties.push(cell);
            } else if (h - best).abs() <= ENTROPY_TIE_EPS {
                ties.push(cell);
            }
        }
        if ties.is_empty() {
            return None;
        }
        let cell = ties[rng.random_range(0..ties.len())];
        let tile = sample_tile(block.mask(cell), ts.weights(), rng);
        Some((cell, tile))
    }
}

/// Pick an unresolved cell uniformly at random; tile sampling as above.
pub struct UniformCell;

impl TileChoice for UniformCell {
    fn choose(
        &self,
        block: &BlockState,
        ts: &TileSet,
        rng: &mut dyn RngCore,
    ) -> Option<(usize, u32)> {
        let open = block.unresolved_cells().count();
        if open == 0 {
            return None;
        }
        let cell = block.unresolved_cells().nth(rng.random_range(0..open))?;
        let tile = sample_tile(block.mask(cell), ts.weights(), rng);
        Some((cell, tile))
    }
}

/// Shannon entropy of the weight-normalized domain. Zero-weight tiles
/// contribute nothing (the `p ln p` limit at zero).
fn weighted_entropy(mask: &TileMask, weights: &[f64]) -> f64 {
    let mut total = 0.0;
    let mut w_log_w = 0.0;
    for t in mask.iter() {
        let w = weights[t as usize];
        if w > 0.0 {
            total += w;
            w_log_w += w * w.ln();
        }
    }
    if total > 0.0 {
        total.ln() - w_log_w / total
    } else {
        0.0
    }
}

/// Sample a tile from `mask` proportionally to weight. Zero-weight tiles are
/// never sampled; a domain whose weights are all zero falls back to a uniform
/// pick so the solver can still make progress.
fn sample_tile(mask: &TileMask, weights: &[f64], rng: &mut dyn RngCore) -> u32 {
    debug_assert!(!mask.is_empty());
    let total: f64 = mask
        .iter()
        .map(|t| weights[t as usize])
        .filter(|&w| w > 0.0)
        .sum();
    if total <= 0.0 {
        let k = rng.random_range(0..mask.len());
        return mask.iter().nth(k as usize).expect("mask is non-empty");
    }
    let mut x = rng.random::<f64>() * total;
    let mut last = 0;
    for t in mask.iter() {
        let w = weights[t as usize];
        if w <= 0.0 {
            continue;
        }
        last = t;
        x -= w;
        if x <= 0.0 {
            return t;
        }
    }
    last
}
