//! Exact inference and sampling for zero-field models whose triconnected
//! components are planar or small: connected components, then biconnected
//! blocks, then a dynamic program over the triconnected components of each
//! block.

use std::f64::consts::LN_2;
use std::sync::OnceLock;

use rand::Rng;

use crate::decomp::{
    build_tricon_tree, classify_component, triconnected_decompose, ComponentClass, EdgeOrigin, RootPolicy,
    TriconComponent, TriconTree, DEFAULT_SIZE_BOUND,
};
use crate::error::{Error, Result};
use crate::graph::{biconnected_decompose, EdgeId, Graph};
use crate::model::{IsingModel, SpinConfiguration};
use crate::planar::{EdgeCondition, PlanarPipeline};
use crate::wilson::{PlanarSpinSampler, SamplerStats};

/// Largest configurable bound on nonplanar component size.
pub const MAX_SIZE_BOUND: usize = 20;

/// Partition sums of a subtree with the two spins of its parent edge fixed,
/// `pi(x', x'') = exp(A + B x' x'')`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiTable {
    pub log_pi_equal: f64,
    pub log_pi_unequal: f64,
}

impl PiTable {
    pub fn a(&self) -> f64 {
        0.5 * (self.log_pi_equal + self.log_pi_unequal)
    }

    pub fn b(&self) -> f64 {
        0.5 * (self.log_pi_equal - self.log_pi_unequal)
    }

    /// `ln pi(x', x'')`.
    pub fn log_pi(&self, x1: i8, x2: i8) -> f64 {
        if x1 == x2 {
            self.log_pi_equal
        } else {
            self.log_pi_unequal
        }
    }
}

/// Engine settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    /// Nonplanar triconnected components up to this many vertices are
    /// summed by enumeration.
    pub size_bound: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { size_bound: DEFAULT_SIZE_BOUND }
    }
}

/// Counters collected while preparing or sampling a model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InferenceReport {
    pub planar_nodes: usize,
    pub small_nonplanar_nodes: usize,
    pub bond_nodes: usize,
    pub dense_fallbacks: usize,
}

/// One triconnected component with the couplings the dynamic program gives
/// it: real couplings, `B_i` on child virtual edges and 0 on the parent
/// virtual edge.
pub struct NodeContext {
    class: ComponentClass,
    /// Local model; `None` for multiple bonds.
    model: Option<IsingModel>,
    /// Local endpoints of the parent virtual edge.
    parent_ends: Option<(usize, usize)>,
    parent_edge: Option<EdgeId>,
    /// Sum of `J` over real edges and `B_i` over child edges of a bond.
    bond_coupling: f64,
    sum_a: f64,
    pipeline: Option<PlanarPipeline>,
    free: OnceLock<PlanarSpinSampler>,
    agree: OnceLock<PlanarSpinSampler>,
    split: OnceLock<PlanarSpinSampler>,
}

impl NodeContext {
    /// Builds the context of `comp`. `real_coupling` maps an edge id of the
    /// decomposed graph to its coupling; `children` gives the table of each
    /// child virtual edge in local ids.
    pub fn new(
        comp: &TriconComponent,
        parent_edge: Option<EdgeId>,
        real_coupling: &dyn Fn(EdgeId) -> f64,
        children: &[(EdgeId, PiTable)],
        size_bound: usize,
    ) -> Result<Self> {
        let class = classify_component(comp, size_bound)?;
        let mut couplings = vec![0.0; comp.graph.num_edges()];
        for (i, o) in comp.origin.iter().enumerate() {
            if let EdgeOrigin::Real(id) = o {
                couplings[i] = real_coupling(*id);
            }
        }
        let mut sum_a = 0.0;
        for &(e, pi) in children {
            if Some(e) == parent_edge {
                return Err(Error::InconsistentPairing("parent edge listed as a child".into()));
            }
            couplings[e.0] = pi.b();
            sum_a += pi.a();
        }
        let parent_ends = parent_edge.map(|e| comp.graph.endpoints(e));
        let mut ctx = NodeContext {
            class,
            model: None,
            parent_ends,
            parent_edge,
            bond_coupling: 0.0,
            sum_a,
            pipeline: None,
            free: OnceLock::new(),
            agree: OnceLock::new(),
            split: OnceLock::new(),
        };
        if class == ComponentClass::MultipleBond {
            ctx.bond_coupling =
                couplings.iter().enumerate().filter(|&(i, _)| Some(EdgeId(i)) != parent_edge).map(|(_, j)| j).sum();
            ctx.parent_ends = parent_ends.or(Some((0, 1)));
            return Ok(ctx);
        }
        let ends: Vec<(usize, usize)> = comp.graph.edges().iter().map(|e| (e.u, e.v)).collect();
        let model = IsingModel::new(Graph::new(comp.graph.num_vertices(), &ends)?, couplings)?;
        if class == ComponentClass::Planar {
            ctx.pipeline = Some(PlanarPipeline::new(&model)?);
        }
        ctx.model = Some(model);
        Ok(ctx)
    }

    pub fn class(&self) -> ComponentClass {
        self.class
    }

    /// The node-local model (not built for multiple bonds).
    pub fn local_model(&self) -> Option<&IsingModel> {
        self.model.as_ref()
    }

    fn model(&self) -> &IsingModel {
        self.model.as_ref().expect("non-bond node has a local model")
    }

    fn pipeline(&self) -> &PlanarPipeline {
        self.pipeline.as_ref().expect("planar node has a pipeline")
    }

    fn sampler(&self, cond: Option<bool>) -> Result<&PlanarSpinSampler> {
        let cell = match cond {
            None => &self.free,
            Some(true) => &self.agree,
            Some(false) => &self.split,
        };
        if let Some(s) = cell.get() {
            return Ok(s);
        }
        let cond = cond.map(|agree| EdgeCondition {
            edge: self.parent_edge.expect("conditioned draws need a parent edge"),
            agree,
        });
        let s = PlanarSpinSampler::new(self.pipeline(), cond)?;
        Ok(cell.get_or_init(|| s))
    }
}

/// `ln` of the enumerated partition sum of `model` over configurations
/// with the given spins fixed.
fn enumerate_log_z(model: &IsingModel, fixed: &[(usize, i8)]) -> f64 {
    let n = model.num_vertices();
    let mut max = f64::NEG_INFINITY;
    let mut terms = Vec::with_capacity(1 << n);
    for bits in 0..1u64 << n {
        let x = SpinConfiguration::from_bits(n, bits);
        if fixed.iter().all(|&(v, s)| x.get(v) == s) {
            let w = model.log_weight(&x);
            max = max.max(w);
            terms.push(w);
        }
    }
    max + terms.iter().map(|w| (w - max).exp()).sum::<f64>().ln()
}

/// Draws a configuration of `model` with the given spins fixed.
fn enumerate_sample<R: Rng + ?Sized>(model: &IsingModel, fixed: &[(usize, i8)], rng: &mut R) -> SpinConfiguration {
    let n = model.num_vertices();
    let mut cand = Vec::new();
    let mut max = f64::NEG_INFINITY;
    for bits in 0..1u64 << n {
        let x = SpinConfiguration::from_bits(n, bits);
        if fixed.iter().all(|&(v, s)| x.get(v) == s) {
            let w = model.log_weight(&x);
            max = max.max(w);
            cand.push((bits, w));
        }
    }
    let total: f64 = cand.iter().map(|c| (c.1 - max).exp()).sum();
    let mut u = rng.random::<f64>() * total;
    for &(bits, w) in &cand {
        let p = (w - max).exp();
        if u < p {
            return SpinConfiguration::from_bits(n, bits);
        }
        u -= p;
    }
    SpinConfiguration::from_bits(n, cand.last().expect("at least one completion").0)
}

fn node_pi(node: &NodeContext) -> Result<(PiTable, bool)> {
    let (p, t) = node.parent_ends.ok_or_else(|| Error::InvalidArgument("root node has no parent edge".into()))?;
    match node.class {
        ComponentClass::MultipleBond => Ok((
            PiTable { log_pi_equal: node.sum_a + node.bond_coupling, log_pi_unequal: node.sum_a - node.bond_coupling },
            false,
        )),
        ComponentClass::SmallNonplanar => {
            let m = node.model();
            Ok((
                PiTable {
                    log_pi_equal: node.sum_a + enumerate_log_z(m, &[(p, 1), (t, 1)]),
                    log_pi_unequal: node.sum_a + enumerate_log_z(m, &[(p, 1), (t, -1)]),
                },
                false,
            ))
        }
        ComponentClass::Planar => {
            let pipe = node.pipeline();
            let edge = node.parent_edge.expect("non-root node");
            // both halves are symmetric under a global flip
            let eq = pipe.log_z_conditioned(EdgeCondition { edge, agree: true })?;
            let ne = pipe.log_z_conditioned(EdgeCondition { edge, agree: false })?;
            Ok((
                PiTable { log_pi_equal: node.sum_a + eq.log_z - LN_2, log_pi_unequal: node.sum_a + ne.log_z - LN_2 },
                eq.dense_fallback || ne.dense_fallback,
            ))
        }
    }
}

fn node_root_log_z(node: &NodeContext) -> Result<(f64, bool)> {
    match node.class {
        ComponentClass::MultipleBond => Ok((node.sum_a + LN_2 + (2.0 * node.bond_coupling.cosh()).ln(), false)),
        ComponentClass::SmallNonplanar => Ok((node.sum_a + enumerate_log_z(node.model(), &[]), false)),
        ComponentClass::Planar => {
            let z = node.pipeline().log_z()?;
            Ok((node.sum_a + z.log_z, z.dense_fallback))
        }
    }
}

/// `pi` table of a non-root node whose children are already folded into
/// its context.
pub fn process_node_pi(node: &NodeContext) -> Result<PiTable> {
    Ok(node_pi(node)?.0)
}

/// `ln Z` of a block from its root node.
pub fn root_partition(node: &NodeContext) -> Result<f64> {
    Ok(node_root_log_z(node)?.0)
}

/// Draws the spins of a node given its parent edge spins, over the node's
/// local vertices. Without parent spins the node is drawn unconditionally.
pub fn condition_and_sample_node<R: Rng + ?Sized>(
    node: &NodeContext,
    parent_spins: Option<(i8, i8)>,
    rng: &mut R,
) -> Result<(SpinConfiguration, SamplerStats)> {
    let mut stats = SamplerStats::default();
    let x = match (node.class, parent_spins) {
        (ComponentClass::MultipleBond, Some((xp, xt))) => {
            let (p, t) = node.parent_ends.expect("bond has ends");
            let mut x = SpinConfiguration::all_up(2);
            x.set(p, xp);
            x.set(t, xt);
            x
        }
        (ComponentClass::MultipleBond, None) => {
            let s = node.bond_coupling;
            let first: i8 = if rng.random_bool(0.5) { 1 } else { -1 };
            let agree = rng.random::<f64>() < 1.0 / (1.0 + (-2.0 * s).exp());
            SpinConfiguration::new(vec![first, if agree { first } else { -first }])?
        }
        (ComponentClass::SmallNonplanar, Some((xp, xt))) => {
            let (p, t) = node.parent_ends.expect("non-root node");
            enumerate_sample(node.model(), &[(p, xp), (t, xt)], rng)
        }
        (ComponentClass::SmallNonplanar, None) => enumerate_sample(node.model(), &[], rng),
        (ComponentClass::Planar, Some((xp, xt))) => {
            let (p, _) = node.parent_ends.expect("non-root node");
            let (mut x, s) = node.sampler(Some(xp == xt))?.sample(node.pipeline(), rng)?;
            stats.absorb(s);
            if x.get(p) != xp {
                x.negate();
            }
            x
        }
        (ComponentClass::Planar, None) => {
            let (mut x, s) = node.sampler(None)?.sample(node.pipeline(), rng)?;
            stats.absorb(s);
            if rng.random_bool(0.5) {
                x.negate();
            }
            x
        }
    };
    Ok((x, stats))
}

/// A biconnected block and how its spins are drawn.
enum BlockBody {
    Edge { coupling: f64 },
    Tree { tree: TriconTree, nodes: Vec<NodeContext> },
}

struct BlockPart {
    /// Block-local vertex to model vertex.
    vertices: Vec<usize>,
    body: BlockBody,
}

struct ConnectedPart {
    blocks: Vec<BlockPart>,
    /// Parent block and shared model vertex.
    parent: Vec<Option<(usize, usize)>>,
    order: Vec<usize>,
}

/// A model with every factor of its partition function computed, ready for
/// repeated exact sampling.
pub struct PreparedModel {
    num_vertices: usize,
    isolated: Vec<usize>,
    parts: Vec<ConnectedPart>,
    log_z: f64,
    report: InferenceReport,
}

impl PreparedModel {
    pub fn new(m: &IsingModel) -> Result<Self> {
        Self::with_options(m, EngineOptions::default())
    }

    pub fn with_options(m: &IsingModel, opts: EngineOptions) -> Result<Self> {
        if opts.size_bound > MAX_SIZE_BOUND {
            return Err(Error::InvalidArgument(format!(
                "size bound {} above the maximum {MAX_SIZE_BOUND}",
                opts.size_bound
            )));
        }
        let g = m.graph();
        let (comp, count) = g.connected_components();
        let mut members = vec![Vec::new(); count];
        for v in 0..g.num_vertices() {
            members[comp[v]].push(v);
        }
        let mut report = InferenceReport::default();
        let mut log_z = 0.0;
        let mut isolated = Vec::new();
        let mut parts = Vec::new();
        for verts in members {
            if verts.len() == 1 {
                isolated.push(verts[0]);
                log_z += LN_2;
                continue;
            }
            let (sub, sub_edges) = g.induced_subgraph(&verts);
            let bic = biconnected_decompose(&sub)?;
            let h = bic.blocks.len();
            log_z -= (h - 1) as f64 * LN_2;
            let mut blocks = Vec::with_capacity(h);
            for block in &bic.blocks {
                let coupling_of = |e: EdgeId| m.coupling(sub_edges[block.edges[e.0].0]);
                let vertices: Vec<usize> = block.vertices.iter().map(|&v| verts[v]).collect();
                if block.graph.num_vertices() == 2 {
                    let j = coupling_of(EdgeId(0));
                    log_z += LN_2 + (2.0 * j.cosh()).ln();
                    blocks.push(BlockPart { vertices, body: BlockBody::Edge { coupling: j } });
                    continue;
                }
                let (z, body) = prepare_block(&block.graph, &coupling_of, opts.size_bound, &mut report)?;
                log_z += z;
                blocks.push(BlockPart { vertices, body });
            }
            let parent = bic.parent.iter().map(|p| p.map(|(b, v)| (b, verts[v]))).collect();
            let order = bic.top_down_order();
            parts.push(ConnectedPart { blocks, parent, order });
        }
        Ok(PreparedModel { num_vertices: m.num_vertices(), isolated, parts, log_z, report })
    }

    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    pub fn report(&self) -> InferenceReport {
        self.report
    }

    /// One exact sample.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SpinConfiguration> {
        Ok(self.sample_with_stats(rng)?.0)
    }

    pub fn sample_with_stats<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(SpinConfiguration, SamplerStats)> {
        let mut x = vec![0i8; self.num_vertices];
        let mut stats = SamplerStats::default();
        for &v in &self.isolated {
            x[v] = if rng.random_bool(0.5) { 1 } else { -1 };
        }
        for part in &self.parts {
            for &b in &part.order {
                let block = &part.blocks[b];
                let local = sample_block(block, rng, &mut stats)?;
                // align with the spin already drawn at the shared vertex
                let flip = match part.parent[b] {
                    Some((_, v)) => {
                        let at = block.vertices.iter().position(|&u| u == v).expect("shared vertex in block");
                        local[at] != x[v]
                    }
                    None => false,
                };
                for (i, &v) in block.vertices.iter().enumerate() {
                    x[v] = if flip { -local[i] } else { local[i] };
                }
            }
        }
        Ok((SpinConfiguration::new(x)?, stats))
    }
}

/// Forward pass over the triconnected tree of one block.
fn prepare_block(
    g: &Graph,
    coupling_of: &dyn Fn(EdgeId) -> f64,
    size_bound: usize,
    report: &mut InferenceReport,
) -> Result<(f64, BlockBody)> {
    let comps = triconnected_decompose(g)?;
    let tree = build_tricon_tree(comps, RootPolicy::PreferNonBond)?;
    let n = tree.nodes.len();
    let mut pis: Vec<Option<PiTable>> = vec![None; n];
    let mut nodes: Vec<Option<NodeContext>> = (0..n).map(|_| None).collect();
    let order = tree.top_down_order();
    let mut root_log_z = 0.0;
    for &a in order.iter().rev() {
        let children: Vec<(EdgeId, PiTable)> = tree.children[a]
            .iter()
            .map(|&c| {
                let link = tree.parent[c].expect("child has a parent");
                (link.edge_in_parent, pis[c].expect("children first"))
            })
            .collect();
        let parent_edge = tree.parent[a].map(|l| l.edge_in_child);
        let node = NodeContext::new(&tree.nodes[a], parent_edge, coupling_of, &children, size_bound)?;
        match node.class {
            ComponentClass::Planar => report.planar_nodes += 1,
            ComponentClass::SmallNonplanar => report.small_nonplanar_nodes += 1,
            ComponentClass::MultipleBond => report.bond_nodes += 1,
        }
        if a == tree.root {
            let (z, fb) = node_root_log_z(&node)?;
            report.dense_fallbacks += usize::from(fb);
            root_log_z = z;
        } else {
            let (pi, fb) = node_pi(&node)?;
            report.dense_fallbacks += usize::from(fb);
            pis[a] = Some(pi);
        }
        nodes[a] = Some(node);
    }
    let nodes = nodes.into_iter().map(|n| n.expect("every node built")).collect();
    Ok((root_log_z, BlockBody::Tree { tree, nodes }))
}

/// Spins of one block over its local vertices.
fn sample_block<R: Rng + ?Sized>(block: &BlockPart, rng: &mut R, stats: &mut SamplerStats) -> Result<Vec<i8>> {
    match &block.body {
        BlockBody::Edge { coupling } => {
            let first: i8 = if rng.random_bool(0.5) { 1 } else { -1 };
            let agree = rng.random::<f64>() < 1.0 / (1.0 + (-2.0 * coupling).exp());
            Ok(vec![first, if agree { first } else { -first }])
        }
        BlockBody::Tree { tree, nodes } => {
            let mut x = vec![0i8; block.vertices.len()];
            for a in tree.top_down_order() {
                let comp = &tree.nodes[a];
                let parent_spins = tree.parent[a].map(|l| {
                    let (p, t) = comp.source_endpoints(l.edge_in_child);
                    (x[p], x[t])
                });
                let (local, s) = condition_and_sample_node(&nodes[a], parent_spins, rng)?;
                stats.absorb(s);
                for (i, &v) in comp.vertices.iter().enumerate() {
                    x[v] = local.get(i);
                }
            }
            Ok(x)
        }
    }
}

/// `ln Z` of a model.
pub fn infer_log_z(m: &IsingModel) -> Result<f64> {
    Ok(PreparedModel::new(m)?.log_z())
}

/// One exact sample of a model. Prepare the model once with
/// [`PreparedModel`] when drawing many.
pub fn sample_spins<R: Rng + ?Sized>(m: &IsingModel, rng: &mut R) -> Result<SpinConfiguration> {
    PreparedModel::new(m)?.sample(rng)
}
