//! Placement plus routing as one configurable run, and the two-router
//! comparison over a benchmark set.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arch::Architecture;
use crate::baseline::{baseline_route, BaselineOptions};
use crate::circuit::Circuit;
use crate::initial::{random_mapping, reverse_traversal_with, InitialError, TraversalOptions};
use crate::mapping::Mapping;
use crate::report::{CompareFailure, CompareRow, CompareSummary};
use crate::router::{route, MappedSchedule, RouteError, RouterOptions};
use crate::sched::original_depth;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouterKind {
    Comet,
    Baseline,
}

impl RouterKind {
    pub fn name(self) -> &'static str {
        match self {
            RouterKind::Comet => "comet",
            RouterKind::Baseline => "baseline",
        }
    }
}

impl fmt::Display for RouterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RouterKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "comet" => Ok(RouterKind::Comet),
            "baseline" => Ok(RouterKind::Baseline),
            _ => Err(format!("unknown router `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialStrategy {
    Identity,
    Random,
    ReverseTraversal,
}

impl InitialStrategy {
    pub fn name(self) -> &'static str {
        match self {
            InitialStrategy::Identity => "identity",
            InitialStrategy::Random => "random",
            InitialStrategy::ReverseTraversal => "reverse-traversal",
        }
    }
}

impl fmt::Display for InitialStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InitialStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(InitialStrategy::Identity),
            "random" => Ok(InitialStrategy::Random),
            "reverse-traversal" => Ok(InitialStrategy::ReverseTraversal),
            _ => Err(format!("unknown initial strategy `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub router: RouterKind,
    pub initial: InitialStrategy,
    /// Rounds, restarts and seed; the seed also drives `Random`.
    pub traversal: TraversalOptions,
    pub comet: RouterOptions,
    pub baseline: BaselineOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            router: RouterKind::Comet,
            initial: InitialStrategy::ReverseTraversal,
            traversal: TraversalOptions::default(),
            comet: RouterOptions::default(),
            baseline: BaselineOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error(transparent)]
    Route(#[from] RouteError),
    #[error(transparent)]
    Initial(#[from] InitialError),
}

impl RunConfig {
    /// Route once with the configured router from `pi`.
    pub fn route_from(
        &self,
        c: &Circuit,
        arch: &Architecture,
        pi: &Mapping,
    ) -> Result<MappedSchedule, RouteError> {
        match self.router {
            RouterKind::Comet => route(c, arch, pi, &self.comet),
            RouterKind::Baseline => baseline_route(c, arch, pi, &self.baseline),
        }
    }

    /// Starting placement per the configured strategy. Reverse traversal
    /// always runs and scores with the duration-aware router, whichever
    /// router routes afterwards.
    pub fn initial_mapping(&self, c: &Circuit, arch: &Architecture) -> Result<Mapping, RunError> {
        let n_p = arch.num_qubits();
        if c.num_logical > n_p {
            return Err(RouteError::Capacity {
                num_logical: c.num_logical,
                num_physical: n_p,
            }
            .into());
        }
        Ok(match self.initial {
            InitialStrategy::Identity => Mapping::identity(c.num_logical, n_p),
            InitialStrategy::Random => random_mapping(c.num_logical, n_p, self.traversal.seed)?,
            InitialStrategy::ReverseTraversal => {
                reverse_traversal_with(c, arch, &self.traversal, |circ, pi| {
                    route(circ, arch, pi, &self.comet)
                })?
                .mapping
            }
        })
    }

    /// Place, then route.
    pub fn run(&self, c: &Circuit, arch: &Architecture) -> Result<MappedSchedule, RunError> {
        let pi = self.initial_mapping(c, arch)?;
        Ok(self.route_from(c, arch, &pi)?)
    }
}

/// Route every benchmark on every architecture with both routers, both
/// starting from the same placement. Rows are in input order whatever
/// order the jobs finish in.
pub fn compare(
    benchmarks: &[(String, Circuit)],
    archs: &[Architecture],
    cfg: &RunConfig,
) -> CompareSummary {
    let jobs: Vec<(usize, usize)> = (0..benchmarks.len())
        .flat_map(|b| (0..archs.len()).map(move |a| (b, a)))
        .collect();
    let results: Vec<Result<CompareRow, CompareFailure>> = jobs
        .par_iter()
        .map(|&(b, a)| {
            let (name, c) = &benchmarks[b];
            let arch = &archs[a];
            let fail = |e: RunError| CompareFailure {
                benchmark: name.clone(),
                architecture: arch.name().to_string(),
                error: e.to_string(),
            };
            let pi = cfg.initial_mapping(c, arch).map_err(fail)?;
            let comet = route(c, arch, &pi, &cfg.comet).map_err(|e| fail(e.into()))?;
            let base = baseline_route(c, arch, &pi, &cfg.baseline).map_err(|e| fail(e.into()))?;
            Ok(CompareRow::new(
                name,
                arch,
                original_depth(c, arch.durations()),
                c.len(),
                &comet,
                &base,
            ))
        })
        .collect();
    CompareSummary::from_results(results, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, GateKind};

    #[test]
    fn parse_names() {
        assert_eq!("comet".parse::<RouterKind>().unwrap(), RouterKind::Comet);
        assert!("sabre".parse::<RouterKind>().is_err());
        for s in [
            InitialStrategy::Identity,
            InitialStrategy::Random,
            InitialStrategy::ReverseTraversal,
        ] {
            assert_eq!(s.name().parse::<InitialStrategy>().unwrap(), s);
        }
    }

    #[test]
    fn compliant_file_gives_unit_ratio() {
        let arch = Architecture::line(3).unwrap();
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::new(GateKind::H, vec![0]),
                Gate::new(GateKind::Cx, vec![0, 1]),
                Gate::new(GateKind::Cx, vec![1, 2]),
            ],
        );
        let cfg = RunConfig {
            initial: InitialStrategy::Identity,
            ..Default::default()
        };
        let s = compare(&[("chain".into(), c)], &[arch], &cfg);
        assert_eq!(s.rows.len(), 1);
        assert_eq!(s.rows[0].ratio, 1.0);
        assert_eq!(s.rows[0].t_c, s.rows[0].t_o);
    }

    #[test]
    fn empty_suite() {
        let s = compare(
            &[],
            &[Architecture::line(2).unwrap()],
            &RunConfig::default(),
        );
        assert!(s.rows.is_empty());
        assert_eq!(s.geometric_mean, None);
    }

    #[test]
    fn oversized_benchmark_is_recorded() {
        let s = compare(
            &[("big".into(), Circuit::new(5))],
            &[Architecture::line(3).unwrap()],
            &RunConfig::default(),
        );
        assert!(s.rows.is_empty());
        assert_eq!(s.failures.len(), 1);
    }
}
