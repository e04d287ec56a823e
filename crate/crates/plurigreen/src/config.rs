/// Budget knobs for the variational searches. Identical budget + seed gives
/// bit-identical results.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchBudget {
    /// Multi-start restarts for the disk engine.
    pub restarts: u32,
    /// Polynomial degree of analytic disks.
    pub degree: usize,
    /// Maximum declared hits per disk (Green mode).
    pub max_hits: usize,
    /// Boundary-circle samples for containment certificates.
    pub boundary_samples: usize,
    /// Radii × angles for full-disk containment grids (non-PSH domains).
    pub grid_radii: usize,
    pub grid_angles: usize,
    /// Simplex iterations per restart.
    pub simplex_iters: usize,
    /// Annuli count and angular samples for pole/Azukawa scans.
    pub annuli: usize,
    pub annulus_angles: usize,
    /// Base RNG seed; restart i derives its own stream from (seed, i).
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            restarts: 32,
            degree: 6,
            max_hits: 2,
            boundary_samples: 256,
            grid_radii: 64,
            grid_angles: 128,
            simplex_iters: 400,
            annuli: 7,
            annulus_angles: 16,
            seed: 0x706c7572_69677265,
        }
    }
}

impl SearchBudget {
    /// A light budget for scans where closed forms and explicit competitors
    /// carry the precision and the engine only needs to stay sound.
    pub fn light() -> Self {
        Self { restarts: 4, simplex_iters: 250, ..Self::default() }
    }

    /// Disable the disk engine entirely (closed forms and competitors only).
    pub fn no_engine() -> Self {
        Self { restarts: 0, ..Self::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: u32) -> Self {
        self.restarts = restarts;
        self
    }
}
