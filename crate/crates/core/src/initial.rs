//! Initial placements: identity, seeded random, and reverse-traversal
//! refinement.
//!
//! Reverse traversal routes the circuit forward, then routes the reversed
//! gate list starting from where the forward pass ended; the mapping the
//! reversed pass ends with becomes the next starting point. Qubits that
//! interact early thus drift towards each other before the real run.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::arch::Architecture;
use crate::circuit::Circuit;
use crate::mapping::Mapping;
use crate::router::{route, MappedSchedule, RouteError, RouterOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InitialError {
    #[error("{num_logical} logical qubits do not fit on {num_physical} physical qubits")]
    Capacity {
        num_logical: usize,
        num_physical: usize,
    },
    #[error("reverse traversal needs at least one round")]
    ZeroRounds,
    #[error("reverse traversal needs at least one restart")]
    ZeroRestarts,
    #[error(transparent)]
    Route(#[from] RouteError),
}

fn restart_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn shuffled(n_logical: usize, n_physical: usize, rng: &mut ChaCha8Rng) -> Mapping {
    let mut phys: Vec<usize> = (0..n_physical).collect();
    phys.shuffle(rng);
    phys.truncate(n_logical);
    Mapping::new(phys, n_physical).expect("distinct targets")
}

/// Uniform injective placement drawn from `seed`.
pub fn random_mapping(
    n_logical: usize,
    n_physical: usize,
    seed: u64,
) -> Result<Mapping, InitialError> {
    if n_logical > n_physical {
        return Err(InitialError::Capacity {
            num_logical: n_logical,
            num_physical: n_physical,
        });
    }
    Ok(shuffled(n_logical, n_physical, &mut restart_rng(seed, 0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraversalOptions {
    pub rounds: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for TraversalOptions {
    fn default() -> Self {
        TraversalOptions {
            rounds: 3,
            restarts: 12,
            seed: 0,
        }
    }
}

/// Outcome of a reverse-traversal search.
#[derive(Debug, Clone, PartialEq)]
pub struct TraversalResult {
    pub mapping: Mapping,
    /// Weighted depth of the forward route from `mapping`.
    pub score: u64,
    /// Index of the winning restart.
    pub restart: usize,
    /// Forward weighted depth reached by every restart, in index order.
    pub scores: Vec<u64>,
}

/// Reverse-traversal search with any router. `router` maps a circuit and a
/// start placement to a schedule; it is called concurrently.
pub fn reverse_traversal_with<F>(
    c: &Circuit,
    arch: &Architecture,
    opts: &TraversalOptions,
    router: F,
) -> Result<TraversalResult, InitialError>
where
    F: Fn(&Circuit, &Mapping) -> Result<MappedSchedule, RouteError> + Sync,
{
    if opts.rounds == 0 {
        return Err(InitialError::ZeroRounds);
    }
    if opts.restarts == 0 {
        return Err(InitialError::ZeroRestarts);
    }
    let n_p = arch.num_qubits();
    if c.num_logical > n_p {
        return Err(InitialError::Capacity {
            num_logical: c.num_logical,
            num_physical: n_p,
        });
    }
    let reversed = c.reversed();
    let runs: Vec<Result<(Mapping, u64), RouteError>> = (0..opts.restarts)
        .into_par_iter()
        .map(|k| {
            let mut pi = shuffled(c.num_logical, n_p, &mut restart_rng(opts.seed, k as u64));
            for _ in 0..opts.rounds {
                let fwd = router(c, &pi)?;
                let back = router(&reversed, &fwd.mapped_circuit.final_mapping)?;
                pi = back.mapped_circuit.final_mapping;
            }
            let score = router(c, &pi)?.weighted_depth;
            Ok((pi, score))
        })
        .collect();
    let mut runs_ok = Vec::with_capacity(runs.len());
    for r in runs {
        runs_ok.push(r?);
    }
    let scores: Vec<u64> = runs_ok.iter().map(|(_, s)| *s).collect();
    let restart = (0..scores.len())
        .min_by_key(|&k| (scores[k], k))
        .expect("at least one restart");
    let (mapping, score) = runs_ok.swap_remove(restart);
    debug_assert!(scores.iter().all(|&s| score <= s));
    Ok(TraversalResult {
        mapping,
        score,
        restart,
        scores,
    })
}

/// Reverse traversal scored by the duration-aware router.
pub fn reverse_traversal(
    c: &Circuit,
    arch: &Architecture,
    opts: &TraversalOptions,
    router_opts: &RouterOptions,
) -> Result<Mapping, InitialError> {
    reverse_traversal_with(c, arch, opts, |circ, pi| route(circ, arch, pi, router_opts))
        .map(|r| r.mapping)
}
