//! Seeded random landscapes for equivalence campaigns.
//!
//! Graphs are a random spanning tree plus independent extra edges; energies
//! are small integers so that ties and plateaus are common.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::{Energy, EnergyScale};
use crate::error::{Error, Result};
use crate::landscape::{EdgeSpec, Landscape};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorParams {
    pub min_states: usize,
    pub max_states: usize,
    /// Probability of each non-tree pair becoming an edge.
    pub edge_density: f64,
    pub energy_min: i64,
    pub energy_max: i64,
    pub energy_scale: EnergyScale,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            min_states: 2,
            max_states: 10,
            edge_density: 0.3,
            energy_min: 0,
            energy_max: 6,
            energy_scale: EnergyScale::default(),
        }
    }
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_states == 0 || self.min_states > self.max_states {
            return Err(Error::InvalidSpec(format!(
                "state count range {}..={} is empty",
                self.min_states, self.max_states
            )));
        }
        if !(0.0..=1.0).contains(&self.edge_density) {
            return Err(Error::InvalidSpec("edge density must lie in [0, 1]".into()));
        }
        if self.energy_min > self.energy_max {
            return Err(Error::InvalidSpec("energy range is empty".into()));
        }
        Ok(())
    }
}

/// The landscape determined by `(params, seed)`. States are named `s0, s1, …`.
pub fn random_landscape(params: &GeneratorParams, seed: u64) -> Result<Landscape> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(params.min_states..=params.max_states);
    let scale = params.energy_scale;
    let name = |i: usize| format!("s{i}");
    let states = (0..n)
        .map(|i| {
            let units = rng.gen_range(params.energy_min..=params.energy_max);
            (name(i), Energy::from_units(units, scale))
        })
        .collect();

    let mut adjacent = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        adjacent[i][j] = true;
        adjacent[j][i] = true;
        edges.push(EdgeSpec::new(name(j), name(i)));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !adjacent[i][j] && rng.gen_bool(params.edge_density) {
                edges.push(EdgeSpec::new(name(i), name(j)));
            }
        }
    }
    Landscape::new(states, edges, scale)
}
