/// Erosion choice scheduler: the probability that a resolved cell on the
/// resolved/indeterminate interface is reverted after a block solver failure.
pub trait ErosionChoice: Send + Sync {
    /// `failures_before` counts the consecutive solver failures preceding
    /// the one that triggered this erosion; the first erosion sees zero.
    fn probability(&self, failures_before: u32) -> f64;
}

/// Erosion probability grows with the number of consecutive failures,
/// `min(max, base * (1 + failures))`, backing off more aggressively when
/// block resolution keeps failing.
#[derive(Debug, Clone, Copy)]
pub struct EscalatingErosion {
    pub base: f64,
    pub max: f64,
}

impl ErosionChoice for EscalatingErosion {
    fn probability(&self, failures_before: u32) -> f64 {
        (self.base * (1.0 + failures_before as f64)).min(self.max)
    }
}
