//! Exact sampling of weighted perfect matchings on planar hosts of degree
//! at most three, separator first.
//!
//! A subproblem is a connected set `U` of unsaturated vertices. The edges
//! covering a separator `P` of `U` are drawn one vertex at a time from the
//! block `D` of `K_UU^{-1}` on `P` and its neighbours: the edge `vw` is in
//! the matching with probability `K[v][w] D[w][v]`, and conditioning on it
//! is a rank-2 update of `D`. The components left after `P` is saturated
//! are independent subproblems.

use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::SpinConfiguration;
use crate::planar::{
    find_separator, spins_from_partners, ConditionedHost, EdgeCondition, KasteleynSystem, PerfectMatching,
    PlanarPipeline, Scratch,
};

const NONE: usize = usize::MAX;

/// Sets up to this size are drawn in one frame without a separator.
const DIRECT_SIZE: usize = 64;

/// Initial frames are kept between draws for hosts up to this size.
const CACHE_LIMIT: usize = 4096;

/// Allowed drift of a vertex's candidate probabilities from 1.
const SUM_TOLERANCE: f64 = 1e-6;

/// Diagnostics of one or more draws.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SamplerStats {
    /// Frames whose inverse block came from the dense fallback.
    pub dense_fallbacks: usize,
    /// Frames refactorised after the candidate sum drifted.
    pub refactorizations: usize,
}

impl SamplerStats {
    pub fn absorb(&mut self, other: SamplerStats) {
        self.dense_fallbacks += other.dense_fallbacks;
        self.refactorizations += other.refactorizations;
    }
}

/// A drawn matching with its log-probability.
#[derive(Clone, Debug)]
pub struct PmDraw {
    pub matching: PerfectMatching,
    pub log_prob: f64,
    pub stats: SamplerStats,
}

/// The inverse block of one subproblem, with the separator still to be
/// saturated.
#[derive(Clone, Debug)]
pub struct WilsonState {
    /// The subproblem `U`.
    verts: Vec<usize>,
    /// Separator vertices, drawn in this order.
    separator: Vec<usize>,
    /// Separator and neighbours; rows and columns of `block`.
    index: Vec<usize>,
    /// `[K_UU^{-1}]` on `index`, row-major.
    block: Vec<f64>,
    dense_fallback: bool,
}

impl WilsonState {
    pub fn separator(&self) -> &[usize] {
        &self.separator
    }

    pub fn index(&self) -> &[usize] {
        &self.index
    }

    /// The corner block of the inverse, row-major over [`Self::index`].
    pub fn corner_inverse(&self) -> &[f64] {
        &self.block
    }
}

/// Per-draw bookkeeping over the host vertices.
struct Draw {
    partner: Vec<usize>,
    in_u: Vec<u32>,
    mark: Vec<u32>,
    loc: Vec<usize>,
    stamp: u32,
    log_prob: f64,
    stats: SamplerStats,
}

impl Draw {
    fn new(n: usize) -> Self {
        Draw {
            partner: vec![NONE; n],
            in_u: vec![0; n],
            mark: vec![0; n],
            loc: vec![NONE; n],
            stamp: 0,
            log_prob: 0.0,
            stats: SamplerStats::default(),
        }
    }

    fn bump(&mut self) -> u32 {
        self.stamp += 1;
        self.stamp
    }
}

/// Matching sampler for one conditioned host. The initial frames do not
/// depend on the draw, so small hosts keep them between calls.
pub(crate) struct PmSampler {
    host: ConditionedHost,
    roots: OnceLock<Vec<WilsonState>>,
}

impl PmSampler {
    pub fn new(ks: &KasteleynSystem, host: ConditionedHost) -> Result<Self> {
        let g = ks.embedding().graph();
        if let Some(v) = (0..g.num_vertices()).find(|&v| g.degree(v) > 3) {
            return Err(Error::DegreeTooHigh { vertex: v, degree: g.degree(v) });
        }
        Ok(PmSampler { host, roots: OnceLock::new() })
    }

    fn active(&self, ks: &KasteleynSystem) -> Vec<usize> {
        self.host.active.clone().unwrap_or_else(|| (0..ks.num_vertices()).collect())
    }

    fn initial_frames(&self, ks: &KasteleynSystem, sc: &mut Scratch, draw: &mut Draw) -> Result<Vec<WilsonState>> {
        let active = self.active(ks);
        let comps = crate::planar::components_of(ks, &mut sc.work, &active, &[]);
        comps.into_iter().map(|c| self.open(ks, sc, draw, c, None)).collect()
    }

    /// Draws a matching of the host; the partner array has `NONE` outside it.
    pub fn draw<R: Rng + ?Sized>(&self, ks: &KasteleynSystem, rng: &mut R) -> Result<(Vec<usize>, f64, SamplerStats)> {
        let n = ks.num_vertices();
        let mut draw = Draw::new(n);
        let mut scratch: Option<Scratch> = None;
        let frames = if n <= CACHE_LIMIT {
            if self.roots.get().is_none() {
                let sc = scratch.get_or_insert_with(|| Scratch::new(ks));
                let fresh = self.initial_frames(ks, sc, &mut draw)?;
                let _ = self.roots.set(fresh);
            }
            self.roots.get().expect("just set").clone()
        } else {
            let sc = scratch.get_or_insert_with(|| Scratch::new(ks));
            self.initial_frames(ks, sc, &mut draw)?
        };
        for f in &frames {
            if f.dense_fallback {
                draw.stats.dense_fallbacks += 1;
            }
        }
        let mut stack: Vec<WilsonState> = frames.into_iter().rev().collect();
        while let Some(frame) = stack.pop() {
            let children = self.saturate(ks, &mut scratch, &mut draw, frame, rng)?;
            for c in children.into_iter().rev() {
                let sc = scratch.get_or_insert_with(|| Scratch::new(ks));
                let f = self.open(ks, sc, &mut draw, c, None)?;
                if f.dense_fallback {
                    draw.stats.dense_fallbacks += 1;
                }
                stack.push(f);
            }
        }
        if let Some(e) = self.host.forced_edge {
            draw.partner[2 * e] = 2 * e + 1;
            draw.partner[2 * e + 1] = 2 * e;
        }
        Ok((draw.partner, draw.log_prob, draw.stats))
    }

    /// Builds the frame of the connected set `verts`.
    fn open(
        &self,
        ks: &KasteleynSystem,
        sc: &mut Scratch,
        draw: &mut Draw,
        verts: Vec<usize>,
        separator: Option<Vec<usize>>,
    ) -> Result<WilsonState> {
        let rot = ks.rotation();
        let excluded = self.host.excluded;
        let pairing = &self.host.pairing;
        let separator = match separator {
            Some(s) => s,
            None if verts.len() <= DIRECT_SIZE => verts.clone(),
            None => find_separator(rot, &mut sc.work, &verts),
        };
        let s_u = draw.bump();
        for &v in &verts {
            draw.in_u[v] = s_u;
        }
        let s_t = draw.bump();
        let mut index = Vec::with_capacity(4 * separator.len());
        for &v in &separator {
            if draw.mark[v] != s_t {
                draw.mark[v] = s_t;
                index.push(v);
            }
        }
        for i in 0..separator.len() {
            for k in rot.entries(separator[i]) {
                let w = rot.head[k];
                if Some(rot.edge[k]) != excluded && draw.in_u[w] == s_u && draw.mark[w] != s_t {
                    draw.mark[w] = s_t;
                    index.push(w);
                }
            }
        }
        // close under the pairing, and keep vertices whose partner is gone
        let mut forced = index.clone();
        for &t in &index {
            let p = pairing[t];
            if draw.in_u[p] == s_u && draw.mark[p] != s_t {
                draw.mark[p] = s_t;
                forced.push(p);
            }
        }
        for &v in &verts {
            if draw.in_u[pairing[v]] != s_u && draw.mark[v] != s_t {
                draw.mark[v] = s_t;
                forced.push(v);
            }
        }
        let sub = crate::planar::Subhost { active: Some(&verts), pairing, excluded };
        let (inv, dense_fallback) = ks.corner_inverse_sub(sc, sub, &forced)?;
        let (t, f) = (index.len(), forced.len());
        let mut block = vec![0.0; t * t];
        for r in 0..t {
            block[r * t..(r + 1) * t].copy_from_slice(&inv[r * f..r * f + t]);
        }
        Ok(WilsonState { verts, separator, index, block, dense_fallback })
    }

    /// Saturates the separator of `frame` and returns the components left.
    fn saturate<R: Rng + ?Sized>(
        &self,
        ks: &KasteleynSystem,
        scratch: &mut Option<Scratch>,
        draw: &mut Draw,
        mut frame: WilsonState,
        rng: &mut R,
    ) -> Result<Vec<Vec<usize>>> {
        let rot = ks.rotation();
        let excluded = self.host.excluded;
        'frame: loop {
            let s_u = draw.bump();
            for &v in &frame.verts {
                draw.in_u[v] = s_u;
            }
            for (i, &v) in frame.index.iter().enumerate() {
                draw.loc[v] = i;
            }
            let t = frame.index.len();
            let mut live: Vec<usize> = (0..t).collect();
            let mut updated = false;
            let mut cand: Vec<(usize, f64)> = Vec::with_capacity(3);
            for si in 0..frame.separator.len() {
                let v = frame.separator[si];
                if draw.partner[v] != NONE {
                    continue;
                }
                let iv = draw.loc[v];
                cand.clear();
                let mut sum = 0.0;
                for k in rot.entries(v) {
                    let w = rot.head[k];
                    if Some(rot.edge[k]) == excluded || draw.in_u[w] != s_u || draw.partner[w] != NONE {
                        continue;
                    }
                    let p = ks.entry_value(k) * frame.block[draw.loc[w] * t + iv];
                    sum += p;
                    cand.push((w, p.max(0.0)));
                }
                if (sum - 1.0).abs() > SUM_TOLERANCE {
                    if updated {
                        // rebuild the block on what is left and go on
                        draw.stats.refactorizations += 1;
                        for &x in &frame.index {
                            draw.loc[x] = NONE;
                        }
                        let rest: Vec<usize> =
                            frame.verts.iter().copied().filter(|&x| draw.partner[x] == NONE).collect();
                        let sep: Vec<usize> =
                            frame.separator.iter().copied().filter(|&x| draw.partner[x] == NONE).collect();
                        let sc = scratch.get_or_insert_with(|| Scratch::new(ks));
                        frame = self.open(ks, sc, draw, rest, Some(sep))?;
                        if frame.dense_fallback {
                            draw.stats.dense_fallbacks += 1;
                        }
                        continue 'frame;
                    }
                    if !(sum > 0.0) {
                        return Err(Error::EmptyPmSet);
                    }
                }
                let total: f64 = cand.iter().map(|c| c.1).sum();
                if !(total > 0.0) {
                    return Err(Error::EmptyPmSet);
                }
                let mut u = rng.random::<f64>() * total;
                let mut pick = cand.len() - 1;
                for (i, c) in cand.iter().enumerate() {
                    if u < c.1 {
                        pick = i;
                        break;
                    }
                    u -= c.1;
                }
                let (w, p) = cand[pick];
                draw.log_prob += (p / total).ln();
                draw.partner[v] = w;
                draw.partner[w] = v;
                let iw = draw.loc[w];
                live.retain(|&x| x != iv && x != iw);
                rank2_update(&mut frame.block, t, iv, iw, &live);
                updated = true;
            }
            for &x in &frame.index {
                draw.loc[x] = NONE;
            }
            let saturated: Vec<usize> = frame.verts.iter().copied().filter(|&x| draw.partner[x] != NONE).collect();
            if saturated.len() == frame.verts.len() {
                return Ok(Vec::new());
            }
            let sc = scratch.get_or_insert_with(|| Scratch::new(ks));
            return Ok(crate::planar::components_of(ks, &mut sc.work, &frame.verts, &saturated));
        }
    }
}

/// Conditions the inverse block on the edge `vw`:
/// `D[x][y] += (D[x][v] D[w][y] - D[x][w] D[v][y]) / D[v][w]` on `live`.
fn rank2_update(d: &mut [f64], t: usize, iv: usize, iw: usize, live: &[usize]) {
    let a = d[iv * t + iw];
    let col_v: Vec<f64> = live.iter().map(|&x| d[x * t + iv] / a).collect();
    let col_w: Vec<f64> = live.iter().map(|&x| d[x * t + iw] / a).collect();
    let row_v: Vec<f64> = live.iter().map(|&y| d[iv * t + y]).collect();
    let row_w: Vec<f64> = live.iter().map(|&y| d[iw * t + y]).collect();
    for (i, &x) in live.iter().enumerate() {
        let (cv, cw) = (col_v[i], col_w[i]);
        let row = &mut d[x * t..(x + 1) * t];
        for (j, &y) in live.iter().enumerate() {
            row[y] += cv * row_w[j] - cw * row_v[j];
        }
    }
}

/// Draws a perfect matching with probability proportional to the product
/// of its edge weights.
pub fn sample_pm<R: Rng + ?Sized>(ks: &KasteleynSystem, rng: &mut R) -> Result<PerfectMatching> {
    Ok(sample_pm_detailed(ks, rng)?.matching)
}

/// [`sample_pm`] with the log-probability of the draw and diagnostics.
pub fn sample_pm_detailed<R: Rng + ?Sized>(ks: &KasteleynSystem, rng: &mut R) -> Result<PmDraw> {
    let host = ConditionedHost { active: None, pairing: ks.pairing().to_vec(), excluded: None, forced_edge: None };
    let sampler = PmSampler::new(ks, host)?;
    let (partner, log_prob, stats) = sampler.draw(ks, rng)?;
    let matching = PerfectMatching::from_partners(ks.embedding().graph(), &partner)?;
    Ok(PmDraw { matching, log_prob, stats })
}

/// The first frame of a host: its separator, neighbours and inverse block.
pub fn initial_state(ks: &KasteleynSystem) -> Result<Vec<WilsonState>> {
    let host = ConditionedHost { active: None, pairing: ks.pairing().to_vec(), excluded: None, forced_edge: None };
    let sampler = PmSampler::new(ks, host)?;
    let mut sc = Scratch::new(ks);
    let mut draw = Draw::new(ks.num_vertices());
    sampler.initial_frames(ks, &mut sc, &mut draw)
}

/// Spin sampler of a planar model, optionally conditioned on one edge.
/// Draws return the representative with vertex 0 up.
pub struct PlanarSpinSampler {
    pm: PmSampler,
}

impl PlanarSpinSampler {
    pub fn new(pipeline: &PlanarPipeline, cond: Option<EdgeCondition>) -> Result<Self> {
        Ok(PlanarSpinSampler { pm: PmSampler::new(pipeline.kasteleyn(), pipeline.host(cond)?)? })
    }

    pub fn sample<R: Rng + ?Sized>(
        &self,
        pipeline: &PlanarPipeline,
        rng: &mut R,
    ) -> Result<(SpinConfiguration, SamplerStats)> {
        let (partner, _, stats) = self.pm.draw(pipeline.kasteleyn(), rng)?;
        Ok((spins_from_partners(pipeline.dual(), &partner)?, stats))
    }
}

/// Exact sample of a connected planar model with at least three vertices.
pub fn sample_planar_ising_spins<R: Rng + ?Sized>(
    pipeline: &PlanarPipeline,
    rng: &mut R,
) -> Result<SpinConfiguration> {
    let (mut x, _) = PlanarSpinSampler::new(pipeline, None)?.sample(pipeline, rng)?;
    if rng.random_bool(0.5) {
        x.negate();
    }
    Ok(x)
}
