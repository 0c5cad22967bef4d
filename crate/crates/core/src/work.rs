use serde::{Deserialize, Serialize};

/// Deterministic operation counts for the classical pipeline.
///
/// Each stage adds the number of sites it touches; no wall-clock time is
/// involved, so counts are identical on every machine.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkCounter {
    /// Vertex arrivals made by the wall follower.
    pub rhwf_visits: u64,
    /// Sites marked while excluding neighborhoods or flooding dead clusters.
    pub exclusion: u64,
    /// Sites touched by shortest-path cleanup.
    pub cleanup: u64,
    /// Sites touched by bridge decomposition and abutment bookkeeping.
    pub decomposition: u64,
    /// Sites touched while splicing junctions and assembling the subgraph.
    pub correction: u64,
}

impl WorkCounter {
    pub fn total(&self) -> u64 {
        self.rhwf_visits + self.exclusion + self.cleanup + self.decomposition + self.correction
    }

    pub fn absorb(&mut self, other: &WorkCounter) {
        self.rhwf_visits += other.rhwf_visits;
        self.exclusion += other.exclusion;
        self.cleanup += other.cleanup;
        self.decomposition += other.decomposition;
        self.correction += other.correction;
    }
}
