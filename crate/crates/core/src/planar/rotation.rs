use std::ops::Range;

use crate::graph::{twin, PlanarEmbedding};

/// Flat copy of a rotation system. Entry `k` is a dart leaving `tail[k]`
/// towards `head[k]`; entries of one vertex are contiguous and in cyclic
/// order, and `rev[k]` is the opposite dart.
#[derive(Clone, Debug)]
pub(crate) struct Rotation {
    pub offsets: Vec<usize>,
    pub head: Vec<usize>,
    pub tail: Vec<usize>,
    pub rev: Vec<usize>,
    pub edge: Vec<usize>,
}

impl Rotation {
    pub fn new(emb: &PlanarEmbedding) -> Self {
        let n = emb.graph().num_vertices();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut slot = vec![0; emb.num_darts()];
        let mut head = Vec::with_capacity(emb.num_darts());
        let mut tail = Vec::with_capacity(emb.num_darts());
        let mut edge = Vec::with_capacity(emb.num_darts());
        offsets.push(0);
        for v in 0..n {
            for &d in emb.darts_around(v) {
                slot[d] = head.len();
                head.push(emb.head(d));
                tail.push(v);
                edge.push(d >> 1);
            }
            offsets.push(head.len());
        }
        let mut rev = vec![0; head.len()];
        for v in 0..n {
            for &d in emb.darts_around(v) {
                rev[slot[d]] = slot[twin(d)];
            }
        }
        Rotation { offsets, head, tail, rev, edge }
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn num_entries(&self) -> usize {
        self.head.len()
    }

    #[inline]
    pub fn entries(&self, v: usize) -> Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    /// Cyclic successor of entry `k` around its tail.
    #[inline]
    pub fn next_around(&self, k: usize) -> usize {
        let v = self.tail[k];
        if k + 1 == self.offsets[v + 1] {
            self.offsets[v]
        } else {
            k + 1
        }
    }
}
