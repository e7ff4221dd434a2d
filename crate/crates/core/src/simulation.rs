//! Monte Carlo hitting times of the Metropolis chain.
//!
//! Each replica runs on its own ChaCha8 stream: the key is derived from the
//! run seed and the stream number is the replica index, so results do not
//! depend on how replicas are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::landscape::{Landscape, StateSet, TransitionMatrix};
use crate::path_cycles::{depth, resistance_height};

/// `Standard` requires `beta > 0`. `Diagnostic` also admits `beta = 0`,
/// where every move is accepted with probability `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SamplingMode {
    #[default]
    Standard,
    Diagnostic,
}

#[derive(Clone, Debug)]
pub struct SimulationSpec<'a> {
    pub landscape: &'a Landscape,
    pub beta: f64,
    pub start: usize,
    pub target: StateSet,
    /// First visit to this state before the target is recorded per sample.
    pub secondary_target: Option<usize>,
    pub max_steps: u64,
    pub replicas: usize,
    pub seed: u64,
    pub mode: SamplingMode,
}

impl SimulationSpec<'_> {
    fn validate(&self) -> Result<()> {
        let n = self.landscape.len();
        let beta_ok = match self.mode {
            SamplingMode::Standard => self.beta > 0.0,
            SamplingMode::Diagnostic => self.beta >= 0.0,
        };
        if !beta_ok || !self.beta.is_finite() {
            return Err(Error::InvalidSpec(format!("beta = {} is not allowed", self.beta)));
        }
        if self.start >= n {
            return Err(Error::InvalidSpec("start state out of range".into()));
        }
        if self.target.is_empty() || self.target.iter().any(|x| x >= n) {
            return Err(Error::InvalidSpec("target must be a nonempty set of states".into()));
        }
        if self.secondary_target.is_some_and(|x| x >= n) {
            return Err(Error::InvalidSpec("secondary target out of range".into()));
        }
        if self.max_steps == 0 || self.replicas == 0 {
            return Err(Error::InvalidSpec("max_steps and replicas must be positive".into()));
        }
        Ok(())
    }
}

/// Draws single transitions from a kernel by inverting cumulative rows.
#[derive(Clone, Debug)]
pub struct Sampler {
    cumulative: Vec<Vec<(f64, usize)>>,
}

impl Sampler {
    pub fn new(kernel: &TransitionMatrix) -> Self {
        let cumulative = (0..kernel.len())
            .map(|x| {
                let mut acc = 0.0;
                kernel
                    .row(x)
                    .iter()
                    .filter(|&&(_, p)| p > 0.0)
                    .map(|&(y, p)| {
                        acc += p;
                        (acc, y)
                    })
                    .collect()
            })
            .collect();
        Sampler { cumulative }
    }

    /// One step from `x`; the holding probability is the row remainder.
    pub fn step<R: Rng>(&self, x: usize, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cumulative[x]
            .iter()
            .find(|&&(c, _)| u < c)
            .map_or(x, |&(_, y)| y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HittingSample {
    /// First step index inside the target, or `max_steps` when censored.
    pub steps: u64,
    pub censored: bool,
    /// First visit to the secondary target strictly before the target hit.
    pub secondary: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HittingTimeStats {
    pub beta: f64,
    pub samples: Vec<HittingSample>,
    pub replicas: usize,
    pub censored_count: usize,
    /// Mean over uncensored samples.
    pub mean: Option<f64>,
    /// Median over all samples with censored ones ranked last; `None` when
    /// the median itself is censored.
    pub median: Option<f64>,
}

impl HittingTimeStats {
    fn from_samples(beta: f64, samples: Vec<HittingSample>) -> Self {
        let replicas = samples.len();
        let censored_count = samples.iter().filter(|s| s.censored).count();
        let observed: Vec<f64> = samples
            .iter()
            .filter(|s| !s.censored)
            .map(|s| s.steps as f64)
            .collect();
        let mean = (!observed.is_empty())
            .then(|| observed.iter().sum::<f64>() / observed.len() as f64);
        let mut ranked: Vec<Option<u64>> = samples
            .iter()
            .map(|s| (!s.censored).then_some(s.steps))
            .collect();
        // None (censored) sorts last
        ranked.sort_by_key(|v| (v.is_none(), *v));
        let median = if replicas % 2 == 1 {
            ranked[replicas / 2].map(|v| v as f64)
        } else {
            match (ranked[replicas / 2 - 1], ranked[replicas / 2]) {
                (Some(a), Some(b)) => Some((a as f64 + b as f64) / 2.0),
                _ => None,
            }
        };
        HittingTimeStats {
            beta,
            samples,
            replicas,
            censored_count,
            mean,
            median,
        }
    }

    /// Fraction of all replicas with `lower < τ < upper`. Censored samples
    /// never count as inside.
    pub fn window_fraction(&self, lower: f64, upper: f64) -> f64 {
        let inside = self
            .samples
            .iter()
            .filter(|s| !s.censored && lower < s.steps as f64 && (s.steps as f64) < upper)
            .count();
        inside as f64 / self.replicas as f64
    }

    /// Fraction of replicas that visited the secondary target before the
    /// target, at a step index `< limit`.
    pub fn secondary_fraction(&self, limit: f64) -> f64 {
        let hits = self
            .samples
            .iter()
            .filter(|s| s.secondary.is_some_and(|t| (t as f64) < limit))
            .count();
        hits as f64 / self.replicas as f64
    }

    /// `(1/β) log(median)`.
    pub fn log_median_over_beta(&self) -> Option<f64> {
        match self.median {
            Some(m) if m > 0.0 && self.beta > 0.0 => Some(m.ln() / self.beta),
            _ => None,
        }
    }

    pub fn all_censored(&self) -> bool {
        self.censored_count == self.replicas
    }
}

/// SplitMix64 finalizer; used to derive independent run keys.
pub fn mix_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn replica_rng(seed: u64, replica: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica as u64);
    rng
}

pub fn simulate_hitting_time(spec: &SimulationSpec<'_>) -> Result<HittingTimeStats> {
    spec.validate()?;
    let kernel = TransitionMatrix::build(spec.landscape, spec.beta);
    let sampler = Sampler::new(&kernel);
    let n = spec.landscape.len();
    let mut in_target = vec![false; n];
    for x in spec.target.iter() {
        in_target[x] = true;
    }
    let secondary = spec.secondary_target;

    let samples: Vec<HittingSample> = (0..spec.replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = replica_rng(spec.seed, r);
            let mut x = spec.start;
            let mut seen_secondary = None;
            let mut t = 0u64;
            loop {
                if in_target[x] {
                    return HittingSample {
                        steps: t,
                        censored: false,
                        secondary: seen_secondary,
                    };
                }
                if seen_secondary.is_none() && secondary == Some(x) {
                    seen_secondary = Some(t);
                }
                if t == spec.max_steps {
                    return HittingSample {
                        steps: t,
                        censored: true,
                        secondary: seen_secondary,
                    };
                }
                x = sampler.step(x, &mut rng);
                t += 1;
            }
        })
        .collect();
    Ok(HittingTimeStats::from_samples(spec.beta, samples))
}

fn steps_for(bound: f64) -> u64 {
    if bound >= u64::MAX as f64 / 2.0 {
        u64::MAX / 2
    } else {
        bound.ceil().max(1.0) as u64
    }
}

/// Default censoring threshold `ceil(100 e^{β(Γ+1)})`.
pub fn default_max_steps(beta: f64, depth: f64) -> u64 {
    steps_for(100.0 * (beta * (depth + 1.0)).exp())
}

fn nontrivial_cycle(landscape: &Landscape, cycle: &StateSet) -> Result<(f64, f64)> {
    let gamma = depth(landscape, cycle)?;
    let tilde = resistance_height(landscape, cycle)?;
    if cycle.len() == 1 && gamma <= Energy::ZERO {
        return Err(Error::NotACycle);
    }
    if !gamma.is_finite() {
        return Err(Error::InvalidSpec("the whole state space has no exit".into()));
    }
    let scale = landscape.scale();
    Ok((gamma.to_f64(scale), tilde.to_f64(scale)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExitWindowRow {
    pub beta: f64,
    pub start: usize,
    pub lower: f64,
    pub upper: f64,
    pub window_fraction: f64,
    pub stats: HittingTimeStats,
}

/// Per `β` and per start `x ∈ A`, the fraction of replicas with
/// `e^{β(Γ−ε)} < τ_{∂A} < e^{β(Γ+ε)}`. Rows are ordered by `β` then start.
pub fn check_exit_window(
    landscape: &Landscape,
    cycle: &StateSet,
    betas: &[f64],
    epsilon: f64,
    replicas: usize,
    seed: u64,
) -> Result<Vec<ExitWindowRow>> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidSpec("epsilon must be positive".into()));
    }
    let (gamma, _) = nontrivial_cycle(landscape, cycle)?;
    let boundary = landscape.exterior_boundary(cycle)?;
    let mut rows = Vec::new();
    for (bi, &beta) in betas.iter().enumerate() {
        for (si, start) in cycle.iter().enumerate() {
            let spec = SimulationSpec {
                landscape,
                beta,
                start,
                target: boundary.clone(),
                secondary_target: None,
                max_steps: default_max_steps(beta, gamma),
                replicas,
                seed: mix_seed(seed, ((bi as u64) << 32) | si as u64),
                mode: SamplingMode::Standard,
            };
            let stats = simulate_hitting_time(&spec)?;
            let lower = (beta * (gamma - epsilon)).exp();
            let upper = (beta * (gamma + epsilon)).exp();
            rows.push(ExitWindowRow {
                beta,
                start,
                lower,
                upper,
                window_fraction: stats.window_fraction(lower, upper),
                stats,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VisitRow {
    pub beta: f64,
    pub start: usize,
    pub visit: usize,
    /// `e^{β(Γ̃+ε)}`.
    pub limit: f64,
    pub fraction: f64,
    pub stats: HittingTimeStats,
}

/// Per `β`, the fraction of replicas started at `start` that reach `visit`
/// before leaving the cycle and within `e^{β(Γ̃+ε)}` steps.
pub fn check_visit_before_exit(
    landscape: &Landscape,
    cycle: &StateSet,
    start: usize,
    visit: usize,
    betas: &[f64],
    epsilon: f64,
    replicas: usize,
    seed: u64,
) -> Result<Vec<VisitRow>> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidSpec("epsilon must be positive".into()));
    }
    if !cycle.contains(start) || !cycle.contains(visit) {
        return Err(Error::StateOutsideCycle);
    }
    let (_, tilde) = nontrivial_cycle(landscape, cycle)?;
    let boundary = landscape.exterior_boundary(cycle)?;
    betas
        .iter()
        .enumerate()
        .map(|(bi, &beta)| {
            let limit = (beta * (tilde + epsilon)).exp();
            let spec = SimulationSpec {
                landscape,
                beta,
                start,
                target: boundary.clone(),
                secondary_target: Some(visit),
                max_steps: steps_for(limit),
                replicas,
                seed: mix_seed(seed, (1 << 63) | bi as u64),
                mode: SamplingMode::Standard,
            };
            let stats = simulate_hitting_time(&spec)?;
            Ok(VisitRow {
                beta,
                start,
                visit,
                limit,
                fraction: stats.secondary_fraction(limit),
                stats,
            })
        })
        .collect()
}
