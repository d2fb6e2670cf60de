//! Independent oracles, instance generators and statistics used to
//! validate the engine.

pub mod minors;
pub mod split_oracle;
pub mod generators;
pub mod oracles;

pub use generators::{
    gen_k5_necklace, gen_k5_necklace_model, gen_random_k33free, gen_random_planar, gen_random_planar_model, GeneratorConfig,
};
pub use oracles::{
    brute_distribution, brute_log_z, brute_pi, brute_perfect_matchings, brute_pm_partition, kl_divergence_empirical,
};
