//! Fixtures shared by the acceptance suite: the shipped scenario files and
//! the seeded random configuration set.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pursuit_core::geometry::{AgentConfig, Vec2};
use pursuit_core::oracle::{self, RandomConfigSpec};
use pursuit_core::scenario::{load_scenario, ScenarioConfig};

/// Seed of the shared random configuration set.
pub const CONFIG_SEED: u64 = 0;
pub const NUM_CONFIGS: usize = 100;

pub const SHIPPED_SCENARIOS: [&str; 4] = [
    "head_on.json",
    "symmetric_pair.json",
    "encirclement.json",
    "five_pursuers_qualitative.json",
];

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

pub fn scenario(name: &str) -> ScenarioConfig {
    load_scenario(scenario_path(name)).expect("shipped scenario loads")
}

pub fn random_configs() -> Vec<(AgentConfig, Vec<AgentConfig>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(CONFIG_SEED);
    let spec = RandomConfigSpec::default();
    (0..NUM_CONFIGS)
        .map(|_| oracle::random_configuration(&mut rng, &spec))
        .collect()
}

pub fn agent(x: f64, y: f64, v: f64) -> AgentConfig {
    AgentConfig::new(Vec2::new(x, y), v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        for name in SHIPPED_SCENARIOS {
            assert!(!scenario(name).pursuers.is_empty());
        }
        let a = random_configs();
        assert_eq!(a.len(), NUM_CONFIGS);
        assert_eq!(a, random_configs());
    }
}
