//! Planar models as weighted perfect matchings: triangulation, expanded
//! dual, Pfaffian orientation, separators and sparse Pfaffian elimination.

mod dense;
mod dual;
mod kasteleyn;
mod matching;
mod nd;
mod pfaffian;
mod pipeline;
mod rotation;
mod separator;
mod triangulate;

pub use dual::{build_expanded_dual, pm_to_spins, spins_to_pm, ExpandedDual};
pub use kasteleyn::{build_kasteleyn, corner_inverse, log_pm_partition, KasteleynSystem, PmPartition};
pub use matching::PerfectMatching;
pub use nd::nested_dissection_order;
pub use pfaffian::{face_along_counts, pfaffian_orient};
pub use pipeline::{log_partition_planar_ising, EdgeCondition, PlanarPipeline};
pub use separator::{planar_separator, Separation};
pub use triangulate::triangulate;

pub(crate) use dual::spins_from_partners;
pub(crate) use kasteleyn::{Scratch, Subhost};
pub(crate) use pipeline::ConditionedHost;
pub(crate) use separator::find_separator;

/// Connected components of `xs` minus `removed` in the host of `ks`.
pub(crate) fn components_of(
    ks: &KasteleynSystem,
    work: &mut separator::Work,
    xs: &[usize],
    removed: &[usize],
) -> Vec<Vec<usize>> {
    separator::components(ks.rotation(), work, xs, removed)
}
