//! Solver-internal instance state: the evolving multigraph, live pipes,
//! synchronized C-node vertices with their 2-SAT couplings, and the undo log.
//!
//! Internal pipes carry a `flip` bit. The external contract is the equality
//! convention (the bijection maps the rotation of one endpoint onto the
//! other, same cyclic direction); joins are exact for the reversal relation,
//! so operations track which relation each derived pipe encodes. Input pipes
//! always start with `flip == false`.

use std::collections::HashMap;

use crate::graph::{EdgeId, Inc, MultiGraph, VertexId};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PipeId(pub u32);

#[derive(Clone, Debug)]
pub struct Pipe {
    pub u: VertexId,
    pub v: VertexId,
    /// Aligned incidence pairs (at u, at v).
    pub bij: Vec<(Inc, Inc)>,
    /// Constraint: rot(v) == rev^flip(bij(rot(u))).
    pub flip: bool,
    /// Stable tie-break and deterministic random priority.
    pub creation: u64,
}

impl Pipe {
    pub fn degree(&self) -> usize {
        self.bij.len()
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            debug_assert_eq!(x, self.v);
            self.u
        }
    }

    pub fn map_u_to_v(&self) -> HashMap<Inc, Inc> {
        self.bij.iter().copied().collect()
    }

    pub fn map_v_to_u(&self) -> HashMap<Inc, Inc> {
        self.bij.iter().map(|&(a, b)| (b, a)).collect()
    }
}

/// Synchronized C-node vertex: rotation fixed to the reference order up to
/// reflection.
#[derive(Clone, Debug)]
pub struct QVertex {
    pub ref_rot: Vec<Inc>,
}

/// Orientation coupling between two synchronized vertices:
/// sign(a) xor sign(b) == parity.
#[derive(Clone, Debug)]
pub struct QSync {
    pub a: VertexId,
    pub b: VertexId,
    pub parity: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Instance {
    pub g: MultiGraph,
    pipes: HashMap<PipeId, Pipe>,
    pipe_at: HashMap<VertexId, PipeId>,
    next_pipe: u32,
    creation_counter: u64,
    pub qverts: HashMap<VertexId, QVertex>,
    pub qsync: Vec<QSync>,
}

impl Instance {
    pub fn new(g: MultiGraph) -> Self {
        Instance { g, ..Default::default() }
    }

    pub fn n_pipes(&self) -> usize {
        self.pipes.len()
    }

    pub fn pipe(&self, id: PipeId) -> &Pipe {
        &self.pipes[&id]
    }

    pub fn pipe_opt(&self, id: PipeId) -> Option<&Pipe> {
        self.pipes.get(&id)
    }

    pub fn pipe_of(&self, v: VertexId) -> Option<PipeId> {
        self.pipe_at.get(&v).copied()
    }

    pub fn live_pipes(&self) -> Vec<PipeId> {
        let mut ids: Vec<PipeId> = self.pipes.keys().copied().collect();
        ids.sort_unstable();
        ids
    }

    pub fn is_q(&self, v: VertexId) -> bool {
        self.qverts.contains_key(&v)
    }

    /// Registers a pipe. Degree <= 2 pipes are reported back instead: any
    /// bijection lines up when at most one cyclic order exists.
    pub fn add_pipe(&mut self, u: VertexId, v: VertexId, bij: Vec<(Inc, Inc)>, flip: bool) -> Option<PipeId> {
        debug_assert!(u != v);
        debug_assert!(!self.pipe_at.contains_key(&u), "vertex already piped");
        debug_assert!(!self.pipe_at.contains_key(&v), "vertex already piped");
        debug_assert!(!self.is_q(u) && !self.is_q(v), "pipe endpoint cannot be synchronized");
        debug_assert_eq!(self.g.degree(u), bij.len());
        debug_assert_eq!(self.g.degree(v), bij.len());
        if bij.len() <= 2 {
            return None;
        }
        let id = PipeId(self.next_pipe);
        self.next_pipe += 1;
        self.creation_counter += 1;
        self.pipes.insert(id, Pipe { u, v, bij, flip, creation: self.creation_counter });
        self.pipe_at.insert(u, id);
        self.pipe_at.insert(v, id);
        Some(id)
    }

    /// Re-inserts a previously removed pipe verbatim (undo support).
    pub fn restore_pipe(&mut self, id: PipeId, pipe: Pipe) {
        self.pipe_at.insert(pipe.u, id);
        self.pipe_at.insert(pipe.v, id);
        self.pipes.insert(id, pipe);
    }

    pub fn remove_pipe(&mut self, id: PipeId) -> Pipe {
        let p = self.pipes.remove(&id).expect("live pipe");
        self.pipe_at.remove(&p.u);
        self.pipe_at.remove(&p.v);
        p
    }

    pub fn flip_pipe(&mut self, id: PipeId) {
        let p = self.pipes.get_mut(&id).expect("live pipe");
        p.flip = !p.flip;
    }

    /// Rewrites every reference to remapped incidences (after an edge merge)
    /// in pipe bijections and synchronized reference rotations. `remap` maps
    /// old incidences at surviving outer vertices to their new identity.
    pub fn remap_incidences(&mut self, remap: &HashMap<Inc, Inc>) {
        if remap.is_empty() {
            return;
        }
        for p in self.pipes.values_mut() {
            for (a, b) in p.bij.iter_mut() {
                if let Some(n) = remap.get(a) {
                    *a = *n;
                }
                if let Some(n) = remap.get(b) {
                    *b = *n;
                }
            }
        }
        for q in self.qverts.values_mut() {
            for inc in q.ref_rot.iter_mut() {
                if let Some(n) = remap.get(inc) {
                    *inc = *n;
                }
            }
        }
    }
}
