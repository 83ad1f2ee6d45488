#![allow(dead_code)]

use std::sync::Arc;

use gbg_core::board::Configuration;
use gbg_core::geometry::IncidenceStructure;
use gbg_core::instances::{generate, GeneratorSpec, InstanceKind, WeightMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A generated board with its spec, ready for solving.
pub struct Case {
    pub spec: GeneratorSpec,
    pub config: Configuration,
}

impl Case {
    pub fn n(&self) -> usize {
        self.config.n()
    }

    pub fn incidence(&self) -> &Arc<IncidenceStructure> {
        self.config.incidence()
    }
}

/// Smallest size each class supports as a noncollinear board.
pub fn min_size(kind: InstanceKind) -> usize {
    match kind {
        InstanceKind::Grid => 4,
        InstanceKind::CirclePlusLine => 6,
        _ => 3,
    }
}

/// A spec of `kind` with roughly `n` points (grids round down to a
/// rectangle with both sides at least 2).
pub fn spec_for(kind: InstanceKind, n: usize, rng: &mut ChaCha8Rng) -> GeneratorSpec {
    let n = n.max(min_size(kind));
    let spec = match kind {
        InstanceKind::Grid => {
            let cols = rng.random_range(2..=(n / 2).max(2));
            let rows = (n / cols).max(2);
            GeneratorSpec::grid(cols, rows)
        }
        InstanceKind::CollinearPlusK => {
            let k = rng.random_range(1..=n - 2);
            GeneratorSpec::new(kind, n).with_k(k)
        }
        _ => GeneratorSpec::new(kind, n),
    };
    spec.with_seed(rng.random()).with_weights(WeightMode::Random)
}

pub fn build(spec: GeneratorSpec) -> Case {
    let inst = generate(&spec).unwrap_or_else(|e| panic!("{spec}: {e}"));
    let config = Configuration::new(inst.points, inst.weights).unwrap();
    Case { spec, config }
}

/// `count` random cases cycling through `kinds`, sizes uniform in `lo..=hi`.
pub fn random_cases(kinds: &[InstanceKind], count: usize, lo: usize, hi: usize, seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let kind = kinds[i % kinds.len()];
            let n = rng.random_range(lo..=hi);
            build(spec_for(kind, n, &mut rng))
        })
        .collect()
}

/// Same board, fresh random weights.
pub fn reweighted(case: &Case, rng: &mut ChaCha8Rng) -> Configuration {
    let w = (0..case.n()).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
    Configuration::from_incidence(case.incidence().clone(), w).unwrap()
}
