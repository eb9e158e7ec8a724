//! Seeded workloads shared by the benchmarks.

use std::sync::Arc;

use laxdyn::testkit::{engine_of, random_dynamic, random_dynamorphism_into, random_open_dynamic, EngineKind};
use laxdyn::{Dynamorphism, EngineFunctor, MultiDynamic, OpenDynamic};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An open dynamic on the chain of `length` objects with up to `width` states per object.
pub fn open_on_chain(length: usize, width: usize, seed: u64) -> OpenDynamic {
    let mut rng = rng(seed);
    random_open_dynamic(&mut rng, EngineKind::Chain(length), 2, width * length, width * length)
}

/// A valid dynamic on `kind` with at most `states` states in total.
pub fn dynamic_of_size(kind: EngineKind, states: usize, seed: u64) -> MultiDynamic {
    random_dynamic(&mut rng(seed), Arc::new(engine_of(kind)), 2, states)
}

/// A valid same-engine dynamorphism into a dynamic of at most `states` states.
pub fn dynamorphism_of_size(kind: EngineKind, states: usize, seed: u64) -> Dynamorphism {
    let mut rng = rng(seed);
    let engine = Arc::new(engine_of(kind));
    let target = Arc::new(random_dynamic(&mut rng, engine.clone(), 2, states));
    random_dynamorphism_into(&mut rng, target, EngineFunctor::identity(engine), 2, states)
}
