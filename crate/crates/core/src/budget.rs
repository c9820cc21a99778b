/// Size limits checked before any large allocation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Atoms in a discretized measure.
    pub max_atoms: usize,
    /// Cells in a raster.
    pub max_raster_cells: usize,
    /// `N * M * atoms` for a 2D expansion.
    pub max_expansion_ops: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_atoms: 10_000_000, max_raster_cells: 100_000_000, max_expansion_ops: 1_000_000_000 }
    }
}
