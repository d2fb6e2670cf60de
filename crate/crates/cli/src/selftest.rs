//! Engine against enumeration on small random instances.

use std::io::Write;

use tractable_ising::engine::infer_log_z;
use tractable_ising::model::{IsingModel, SpinConfiguration};
use tractable_ising::planar::{log_pm_partition, pm_to_spins, spins_to_pm, PlanarPipeline};
use tractable_ising::testkit::{
    brute_log_z, brute_pm_partition, gen_k5_necklace_model, gen_random_k33free, gen_random_planar_model,
    GeneratorConfig,
};

use crate::{format_significant, CliError};

const TOLERANCE: f64 = 1e-9;

fn cfg(n: usize, seed: u64) -> GeneratorConfig {
    GeneratorConfig { target_size: n, coupling_stddev: 1.0, seed }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

struct Check {
    name: &'static str,
    cases: usize,
    worst: f64,
}

fn log_z_check(name: &'static str, models: &[IsingModel]) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    for m in models {
        worst = worst.max(rel(infer_log_z(m)?, brute_log_z(m)?));
    }
    Ok(Check { name, cases: models.len(), worst })
}

fn matching_check(models: &[IsingModel]) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    for m in models {
        let p = PlanarPipeline::new(m)?;
        let fast = log_pm_partition(p.kasteleyn())?.log_z;
        worst = worst.max(rel(fast, brute_pm_partition(p.dual().graph(), p.dual().weights())?));
    }
    Ok(Check { name: "matching_sum_vs_enumeration", cases: models.len(), worst })
}

/// Counts spin configurations that do not survive the trip through the
/// matching correspondence.
fn round_trip_check(models: &[IsingModel]) -> Result<Check, CliError> {
    let mut failures = 0usize;
    let mut cases = 0;
    for m in models {
        let p = PlanarPipeline::new(m)?;
        let n = m.num_vertices();
        for bits in 0..1u64 << (n - 1) {
            let x = SpinConfiguration::from_bits(n, bits << 1 | 1);
            let back = pm_to_spins(p.dual(), &spins_to_pm(p.dual(), &x)?)?;
            if back != x && back != x.negated() {
                failures += 1;
            }
            cases += 1;
        }
    }
    Ok(Check { name: "spin_matching_round_trip", cases, worst: failures as f64 })
}

/// Runs every check, prints one row each and reports whether all passed.
pub fn run(out: &mut dyn Write) -> Result<bool, CliError> {
    let k33free: Vec<IsingModel> =
        (5..=14).flat_map(|n| (0..3).map(move |s| (n, s))).map(|(n, s)| gen_random_k33free(&cfg(n, s))).collect::<Result<_, _>>()?;
    let necklaces: Vec<IsingModel> =
        (1..=4).map(|k| gen_k5_necklace_model(&cfg(5 * k, k as u64))).collect::<Result<_, _>>()?;
    let planar: Vec<IsingModel> = (3..=14).map(|n| gen_random_planar_model(&cfg(n, n as u64))).collect::<Result<_, _>>()?;
    let small_planar: Vec<IsingModel> =
        (4..=8).map(|n| gen_random_planar_model(&cfg(n, 50 + n as u64))).collect::<Result<_, _>>()?;

    let checks = [
        log_z_check("log_z_k33free", &k33free)?,
        log_z_check("log_z_necklace", &necklaces)?,
        log_z_check("log_z_planar", &planar)?,
        matching_check(&small_planar)?,
        round_trip_check(&small_planar)?,
    ];
    writeln!(out, "check\tcases\tworst\tstatus")?;
    let mut all = true;
    for c in &checks {
        let ok = c.worst <= TOLERANCE;
        all &= ok;
        let status = if ok { "PASS" } else { "FAIL" };
        writeln!(out, "{}\t{}\t{}\t{status}", c.name, c.cases, format_significant(c.worst, 6))?;
    }
    Ok(all)
}
