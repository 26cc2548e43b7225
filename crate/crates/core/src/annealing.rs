//! Metropolis random walk over clusterings with a cooling schedule.
//!
//! Each proposal draws a (vertex, label) pair uniformly, evaluates the
//! objective change without mutating the state, and accepts with probability
//! min(1, exp(-beta(t) * delta)). The best (lowest) value seen is tracked
//! and returned. Runs are reproducible: the generator is a ChaCha stream
//! keyed by the configured seed, and restart r uses stream r of the same
//! key, so restart results are independent of scheduling order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::compression::{Clustering, CompressionState};
use crate::entropy::{delta_ln_z, ln_z, ObjectiveError, ObjectiveKind};
use crate::hypergraph::Hypergraph;

/// Full objective recomputation cadence, in accepted moves.
const RESYNC_EVERY_ACCEPTS: u64 = 100_000;
/// Accumulated drift beyond this triggers resynchronization.
const RESYNC_DRIFT: f64 = 1e-6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("cluster capacity must be at least 1")]
    ZeroClusters,
    #[error("schedule is invalid: {0}")]
    BadSchedule(String),
    #[error("initial clustering has {got} labels, hypergraph has {want} vertices")]
    InitialLengthMismatch { got: usize, want: usize },
    #[error("initial clustering was built for m={got}, config says m={want}")]
    InitialCapacityMismatch { got: usize, want: usize },
    #[error("restart count must be at least 1")]
    ZeroRestarts,
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
}

/// Inverse-temperature schedule beta(t) over attempted steps.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    Constant {
        beta: f64,
    },
    /// beta(t) = beta0 * rate^t.
    Geometric {
        beta0: f64,
        rate: f64,
    },
    /// Interpolates beta0 at t = 0 to beta1 at t = steps, clamped beyond.
    Linear {
        beta0: f64,
        beta1: f64,
        steps: u64,
    },
}

impl Schedule {
    /// Geometric schedule calibrated so beta(steps) = beta_final.
    pub fn geometric_reaching(beta0: f64, beta_final: f64, steps: u64) -> Schedule {
        let rate = if steps == 0 {
            1.0
        } else {
            (beta_final / beta0).powf(1.0 / steps as f64)
        };
        Schedule::Geometric { beta0, rate }
    }

    /// Default cooling: 0.1 rising geometrically to 10 over the run.
    pub fn default_for_steps(steps: u64) -> Schedule {
        Schedule::geometric_reaching(0.1, 10.0, steps)
    }

    pub fn beta(&self, t: u64) -> f64 {
        match *self {
            Schedule::Constant { beta } => beta,
            Schedule::Geometric { beta0, rate } => beta0 * rate.powf(t as f64),
            Schedule::Linear {
                beta0,
                beta1,
                steps,
            } => {
                if steps == 0 || t >= steps {
                    beta1
                } else {
                    beta0 + (beta1 - beta0) * t as f64 / steps as f64
                }
            }
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: &str| Err(ConfigError::BadSchedule(msg.to_string()));
        match *self {
            Schedule::Constant { beta } => {
                if !beta.is_finite() || beta < 0.0 {
                    return bad("constant beta must be finite and nonnegative");
                }
            }
            Schedule::Geometric { beta0, rate } => {
                if !beta0.is_finite() || beta0 < 0.0 {
                    return bad("geometric beta0 must be finite and nonnegative");
                }
                if !rate.is_finite() || rate <= 0.0 {
                    return bad("geometric rate must be finite and positive");
                }
            }
            Schedule::Linear {
                beta0,
                beta1,
                steps: _,
            } => {
                if !beta0.is_finite() || beta0 < 0.0 || !beta1.is_finite() || beta1 < 0.0 {
                    return bad("linear endpoints must be finite and nonnegative");
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    Random,
    Given(Clustering),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    /// Cluster capacity; proposals draw labels from [0, m).
    pub m: usize,
    /// Number of attempted proposals (t advances on rejection too).
    pub steps: u64,
    pub schedule: Schedule,
    pub seed: u64,
    pub objective: ObjectiveKind,
    pub initial: Initial,
    /// Record a (t, current, best) trace point every this many steps.
    pub trace_every: Option<u64>,
}

impl ChainConfig {
    pub fn new(m: usize, steps: u64, seed: u64, objective: ObjectiveKind) -> Self {
        Self {
            m,
            steps,
            schedule: Schedule::default_for_steps(steps),
            seed,
            objective,
            initial: Initial::Random,
            trace_every: None,
        }
    }

    fn validate(&self, hypergraph: &Hypergraph) -> Result<(), ConfigError> {
        if self.m == 0 {
            return Err(ConfigError::ZeroClusters);
        }
        self.schedule.validate()?;
        self.objective.validate_for(hypergraph)?;
        if let Initial::Given(c) = &self.initial {
            if c.len() != hypergraph.vertex_count() {
                return Err(ConfigError::InitialLengthMismatch {
                    got: c.len(),
                    want: hypergraph.vertex_count(),
                });
            }
            if c.m() != self.m {
                return Err(ConfigError::InitialCapacityMismatch {
                    got: c.m(),
                    want: self.m,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub t: u64,
    pub current_ln_z: f64,
    pub best_ln_z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best_clustering: Clustering,
    pub best_ln_z: f64,
    pub accepted_count: u64,
    pub trace: Option<Vec<TracePoint>>,
    pub seed: u64,
}

/// Acceptance probability min(1, exp(-beta * delta)) of a proposal.
pub fn acceptance_probability(delta: f64, beta: f64) -> f64 {
    if delta == f64::NEG_INFINITY {
        // Impossible proposed state: rejected with probability 1.
        return 0.0;
    }
    (-beta * delta).exp().min(1.0)
}

/// One Metropolis chain, steppable so callers can observe every state.
pub struct Chain<'a> {
    state: CompressionState<'a>,
    objective: ObjectiveKind,
    schedule: Schedule,
    rng: ChaCha8Rng,
    t: u64,
    current_ln_z: f64,
    best_ln_z: f64,
    best_clustering: Clustering,
    accepted: u64,
    accepts_since_resync: u64,
    seed: u64,
}

impl<'a> Chain<'a> {
    pub fn new(hypergraph: &'a Hypergraph, config: &ChainConfig) -> Result<Self, ConfigError> {
        Self::with_stream(hypergraph, config, 0)
    }

    /// A chain on RNG stream `stream` of the configured seed. Restart r of
    /// [`run_restarts`] is exactly `with_stream(h, config, r)`.
    pub fn with_stream(
        hypergraph: &'a Hypergraph,
        config: &ChainConfig,
        stream: u64,
    ) -> Result<Self, ConfigError> {
        config.validate(hypergraph)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(stream);
        let clustering = match &config.initial {
            Initial::Random => Clustering::random(hypergraph.vertex_count(), config.m, &mut rng),
            Initial::Given(c) => c.clone(),
        };
        let state = CompressionState::new(hypergraph, clustering)
            .expect("validated clustering must fit the hypergraph");
        let current_ln_z = ln_z(&state, config.objective);
        let best_clustering = state.clustering().clone();
        Ok(Self {
            state,
            objective: config.objective,
            schedule: config.schedule.clone(),
            rng,
            t: 0,
            current_ln_z,
            best_ln_z: current_ln_z,
            best_clustering,
            accepted: 0,
            accepts_since_resync: 0,
            seed: config.seed,
        })
    }

    /// Runs one proposal; returns whether it was accepted.
    pub fn step(&mut self) -> bool {
        let n = self.state.hypergraph().vertex_count();
        if n == 0 {
            self.t += 1;
            return false;
        }
        let beta = self.schedule.beta(self.t);
        let v = self.rng.gen_range(0..n);
        let label = self.rng.gen_range(0..self.state.m());
        let x: f64 = self.rng.gen();
        self.t += 1;

        let accepted = if self.current_ln_z == f64::NEG_INFINITY {
            // The walk started in a state no hypergraph of this kind can
            // realize. Escape to the first reachable possible state.
            let delta = self.state.apply_move(v, label);
            let fresh = ln_z(&self.state, self.objective);
            if fresh > f64::NEG_INFINITY {
                self.current_ln_z = fresh;
                true
            } else {
                self.state.undo(delta);
                false
            }
        } else {
            let delta = delta_ln_z(&self.state, v, label, self.objective);
            if x < acceptance_probability(delta, beta) {
                self.state.apply_move(v, label);
                self.current_ln_z += delta;
                true
            } else {
                false
            }
        };

        if accepted {
            self.accepted += 1;
            self.accepts_since_resync += 1;
            if self.accepts_since_resync >= RESYNC_EVERY_ACCEPTS {
                self.accepts_since_resync = 0;
                let fresh = ln_z(&self.state, self.objective);
                if (fresh - self.current_ln_z).abs() > RESYNC_DRIFT {
                    self.current_ln_z = fresh;
                }
            }
            let improved = self.current_ln_z < self.best_ln_z
                || (self.best_ln_z == f64::NEG_INFINITY && self.current_ln_z > f64::NEG_INFINITY);
            if improved {
                self.best_ln_z = self.current_ln_z;
                self.best_clustering = self.state.clustering().clone();
            }
        }
        accepted
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn current_ln_z(&self) -> f64 {
        self.current_ln_z
    }

    pub fn best_ln_z(&self) -> f64 {
        self.best_ln_z
    }

    pub fn accepted_count(&self) -> u64 {
        self.accepted
    }

    pub fn clustering(&self) -> &Clustering {
        self.state.clustering()
    }

    pub fn best_clustering(&self) -> &Clustering {
        &self.best_clustering
    }

    pub fn state(&self) -> &CompressionState<'a> {
        &self.state
    }

    fn into_result(self, trace: Option<Vec<TracePoint>>) -> RunResult {
        RunResult {
            best_clustering: self.best_clustering,
            best_ln_z: self.best_ln_z,
            accepted_count: self.accepted,
            trace,
            seed: self.seed,
        }
    }
}

/// Runs a single chain for the configured number of steps.
pub fn run_chain(hypergraph: &Hypergraph, config: &ChainConfig) -> Result<RunResult, ConfigError> {
    run_stream(hypergraph, config, 0)
}

fn run_stream(
    hypergraph: &Hypergraph,
    config: &ChainConfig,
    stream: u64,
) -> Result<RunResult, ConfigError> {
    let mut chain = Chain::with_stream(hypergraph, config, stream)?;
    let mut trace = config.trace_every.map(|_| {
        vec![TracePoint {
            t: 0,
            current_ln_z: chain.current_ln_z(),
            best_ln_z: chain.best_ln_z(),
        }]
    });
    for _ in 0..config.steps {
        chain.step();
        if let (Some(points), Some(every)) = (trace.as_mut(), config.trace_every) {
            if every > 0 && chain.t() % every == 0 {
                points.push(TracePoint {
                    t: chain.t(),
                    current_ln_z: chain.current_ln_z(),
                    best_ln_z: chain.best_ln_z(),
                });
            }
        }
    }
    if let (Some(points), Some(every)) = (trace.as_mut(), config.trace_every) {
        if every == 0 || chain.t() % every != 0 {
            points.push(TracePoint {
                t: chain.t(),
                current_ln_z: chain.current_ln_z(),
                best_ln_z: chain.best_ln_z(),
            });
        }
    }
    Ok(chain.into_result(trace))
}

/// Runs independent chains on streams 0..restarts of the configured seed,
/// in parallel, and returns the one with the lowest best value; ties break
/// toward the lowest restart index. The result is identical to sequential
/// execution.
pub fn run_restarts(
    hypergraph: &Hypergraph,
    config: &ChainConfig,
    restarts: u64,
) -> Result<RunResult, ConfigError> {
    if restarts == 0 {
        return Err(ConfigError::ZeroRestarts);
    }
    let results: Result<Vec<RunResult>, ConfigError> = (0..restarts)
        .into_par_iter()
        .map(|stream| run_stream(hypergraph, config, stream))
        .collect();
    let results = results?;
    Ok(results
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.best_ln_z.total_cmp(&b.best_ln_z).then(i.cmp(j)))
        .map(|(_, r)| r)
        .expect("restarts >= 1"))
}

/// splitmix64; used to derive independent seeds for sweeps.
pub(crate) fn derive_seed(base: u64, salt: u64) -> u64 {
    let mut z = base ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
