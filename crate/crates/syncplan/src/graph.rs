//! Mutable multigraph with an explicit rotation system.
//!
//! Every vertex stores the cyclic order of its incidences, so a `MultiGraph`
//! is always a combinatorial embedding (of some, not necessarily planar,
//! surface). Faces are obtained by the standard face walk: after arriving at a
//! vertex through an incidence, the walk leaves through the next incidence in
//! the stored rotation. [`MultiGraph::is_planar_embedding`] checks Euler's
//! formula per connected component against that walk.
//!
//! Parallel edges are first-class; self-loops are rejected. Ids are dense
//! integers backed by slot vectors and are never renamed by unrelated edits,
//! which the solver's undo log relies on.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0:?}")]
    UnknownEdge(EdgeId),
    #[error("self-loops are not supported")]
    SelfLoop,
    #[error("invalid partition of incidences: {0}")]
    InvalidPartition(&'static str),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("bijection is not total on the endpoint incidences")]
    InvalidBijection,
    #[error("vertices must be distinct")]
    NotDistinct,
    #[error("vertex {0:?} still has incident edges")]
    VertexNotIsolated(VertexId),
    #[error("id {0} already in use")]
    IdInUse(u32),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Half-edge identity: an edge together with which of its two ends is meant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Inc {
    pub edge: EdgeId,
    pub end: u8,
}

impl Inc {
    pub fn new(edge: EdgeId, end: u8) -> Self {
        debug_assert!(end < 2);
        Inc { edge, end }
    }

    pub fn opposite(self) -> Inc {
        Inc { edge: self.edge, end: 1 - self.end }
    }
}

impl fmt::Debug for Inc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}.{}", self.edge.0, self.end)
    }
}

/// A directed edge side used by face walks: `dir == 0` runs from `ends[0]`
/// towards `ends[1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Dart {
    pub edge: EdgeId,
    pub dir: u8,
}

impl Dart {
    pub fn reversed(self) -> Dart {
        Dart { edge: self.edge, dir: 1 - self.dir }
    }
}

#[derive(Clone, Debug)]
struct VertexData {
    rot: Vec<Inc>,
}

#[derive(Clone, Copy, Debug)]
struct EdgeData {
    ends: [VertexId; 2],
}

#[derive(Clone, Debug, Default)]
pub struct MultiGraph {
    verts: Vec<Option<VertexData>>,
    edges: Vec<Option<EdgeData>>,
    n_verts: usize,
    n_edges: usize,
}

/// Result of a face trace: closed walks of darts covering every dart once.
#[derive(Clone, Debug)]
pub struct FaceTrace {
    pub faces: Vec<Vec<Dart>>,
}

impl FaceTrace {
    pub fn count(&self) -> usize {
        self.faces.len()
    }
}

/// Undo data for [`MultiGraph::identify_edges`]: one entry per surviving
/// merged edge plus the closed chains that vanished.
#[derive(Clone, Debug)]
pub struct IdentifyRecord {
    pub u: VertexId,
    pub v: VertexId,
    /// Rotation of `u` (resp. `v`) right before the merge.
    pub rot_u: Vec<Inc>,
    pub rot_v: Vec<Inc>,
    /// Endpoint data of every edge participating, keyed by old edge id.
    pub old_edges: Vec<(EdgeId, [VertexId; 2])>,
    /// Surviving merged edges: (kept id, outer end at the kept side,
    /// consumed edge ids in chain order, outer end of the far side,
    /// far edge id whose slot the kept id replaced).
    pub merged: Vec<MergedEdge>,
    /// Chains of u-v edges that closed into circles and vanished.
    pub vanished: Vec<Vec<EdgeId>>,
    /// The pairing used, as (incidence at u, incidence at v).
    pub bij: Vec<(Inc, Inc)>,
}

#[derive(Clone, Debug)]
pub struct MergedEdge {
    pub kept: EdgeId,
    /// Ids of the edges that were consumed into `kept` (excluding `kept`).
    pub consumed: Vec<EdgeId>,
    /// The far edge whose position in its outer endpoint's rotation now
    /// holds `kept`.
    pub far: EdgeId,
    /// The far edge's incidence at the outer vertex before the merge.
    pub far_outer_inc: Inc,
    /// The incidence that replaced it (the kept edge's rewired end).
    pub kept_new_inc: Inc,
    /// New endpoints of `kept`.
    pub ends: [VertexId; 2],
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    pub fn n_vertices(&self) -> usize {
        self.n_verts
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.verts
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|_| VertexId(i as u32)))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|_| EdgeId(i as u32)))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.verts.get(v.0 as usize).is_some_and(|s| s.is_some())
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.get(e.0 as usize).is_some_and(|s| s.is_some())
    }

    fn vert(&self, v: VertexId) -> &VertexData {
        self.verts[v.0 as usize].as_ref().expect("live vertex")
    }

    fn vert_mut(&mut self, v: VertexId) -> &mut VertexData {
        self.verts[v.0 as usize].as_mut().expect("live vertex")
    }

    fn edge(&self, e: EdgeId) -> &EdgeData {
        self.edges[e.0 as usize].as_ref().expect("live edge")
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.verts.len() as u32);
        self.verts.push(Some(VertexData { rot: Vec::new() }));
        self.n_verts += 1;
        id
    }

    /// Recreates a vertex under a previously used id (undo support).
    pub fn add_vertex_with_id(&mut self, id: VertexId) -> Result<(), GraphError> {
        let idx = id.0 as usize;
        if idx >= self.verts.len() {
            self.verts.resize_with(idx + 1, || None);
        }
        if self.verts[idx].is_some() {
            return Err(GraphError::IdInUse(id.0));
        }
        self.verts[idx] = Some(VertexData { rot: Vec::new() });
        self.n_verts += 1;
        Ok(())
    }

    /// Appends the new edge at the end of both endpoint rotations.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop);
        }
        if !self.contains_vertex(u) {
            return Err(GraphError::UnknownVertex(u));
        }
        if !self.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(Some(EdgeData { ends: [u, v] }));
        self.n_edges += 1;
        self.vert_mut(u).rot.push(Inc::new(id, 0));
        self.vert_mut(v).rot.push(Inc::new(id, 1));
        Ok(id)
    }

    /// Recreates an edge under a previously used id, appending to rotations.
    pub fn add_edge_with_id(&mut self, id: EdgeId, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop);
        }
        let idx = id.0 as usize;
        if idx >= self.edges.len() {
            self.edges.resize_with(idx + 1, || None);
        }
        if self.edges[idx].is_some() {
            return Err(GraphError::IdInUse(id.0));
        }
        self.edges[idx] = Some(EdgeData { ends: [u, v] });
        self.n_edges += 1;
        self.vert_mut(u).rot.push(Inc::new(id, 0));
        self.vert_mut(v).rot.push(Inc::new(id, 1));
        Ok(())
    }

    pub fn delete_edge(&mut self, e: EdgeId) -> Result<(), GraphError> {
        if !self.contains_edge(e) {
            return Err(GraphError::UnknownEdge(e));
        }
        let ends = self.edge(e).ends;
        for (k, &w) in ends.iter().enumerate() {
            let inc = Inc::new(e, k as u8);
            let rot = &mut self.vert_mut(w).rot;
            let pos = rot.iter().position(|&i| i == inc).expect("incidence present");
            rot.remove(pos);
        }
        self.edges[e.0 as usize] = None;
        self.n_edges -= 1;
        Ok(())
    }

    /// Deletes an isolated vertex.
    pub fn delete_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        if !self.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        if !self.vert(v).rot.is_empty() {
            return Err(GraphError::VertexNotIsolated(v));
        }
        self.verts[v.0 as usize] = None;
        self.n_verts -= 1;
        Ok(())
    }

    pub fn ends(&self, e: EdgeId) -> [VertexId; 2] {
        self.edge(e).ends
    }

    /// The vertex an incidence is attached to.
    pub fn inc_vertex(&self, inc: Inc) -> VertexId {
        self.edge(inc.edge).ends[inc.end as usize]
    }

    /// The vertex at the far end of an incidence.
    pub fn inc_other(&self, inc: Inc) -> VertexId {
        self.edge(inc.edge).ends[1 - inc.end as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vert(v).rot.len()
    }

    pub fn rotation(&self, v: VertexId) -> &[Inc] {
        &self.vert(v).rot
    }

    /// Rewires an incidence to a different vertex, appending it to the new
    /// vertex's rotation.
    pub fn move_incidence(&mut self, inc: Inc, to: VertexId) {
        let from = self.inc_vertex(inc);
        debug_assert!(from != to);
        debug_assert!(self.inc_other(inc) != to, "would create a self-loop");
        let rot = &mut self.vert_mut(from).rot;
        let pos = rot.iter().position(|&i| i == inc).expect("incidence present");
        rot.remove(pos);
        self.edges[inc.edge.0 as usize].as_mut().expect("live edge").ends[inc.end as usize] = to;
        self.vert_mut(to).rot.push(inc);
    }

    /// Replaces the rotation of `v`; must be a permutation of the old one.
    pub fn set_rotation(&mut self, v: VertexId, rot: Vec<Inc>) {
        debug_assert!({
            let mut a: Vec<_> = self.vert(v).rot.clone();
            let mut b = rot.clone();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        });
        self.vert_mut(v).rot = rot;
    }

    /// Reverses the rotation of every vertex in `verts` (mirror reflection of
    /// the sub-embedding).
    pub fn reflect(&mut self, verts: &[VertexId]) {
        for &v in verts {
            self.vert_mut(v).rot.reverse();
        }
    }

    /// The incidence of `e` at `v`. Fails on parallel-edge ambiguity only if
    /// the edge is a self-loop, which cannot exist.
    pub fn inc_at(&self, v: VertexId, e: EdgeId) -> Option<Inc> {
        let ends = self.edge(e).ends;
        if ends[0] == v {
            Some(Inc::new(e, 0))
        } else if ends[1] == v {
            Some(Inc::new(e, 1))
        } else {
            None
        }
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.vert(v).rot.iter().map(move |&i| self.inc_other(i))
    }

    /// Splits `v` into one fresh vertex per group. Each group keeps its
    /// incidences in the given order; `v` is deleted. Groups must partition
    /// the incidences of `v`.
    pub fn split_vertex(
        &mut self,
        v: VertexId,
        groups: &[Vec<Inc>],
    ) -> Result<Vec<VertexId>, GraphError> {
        if !self.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let mut seen: Vec<Inc> = groups.iter().flatten().copied().collect();
        seen.sort_unstable();
        let mut mine = self.vert(v).rot.clone();
        mine.sort_unstable();
        if groups.iter().any(|g| g.is_empty()) {
            return Err(GraphError::InvalidPartition("empty group"));
        }
        if seen != mine {
            return Err(GraphError::InvalidPartition("groups must partition the incidences"));
        }
        let mut out = Vec::with_capacity(groups.len());
        for group in groups {
            let nv = self.add_vertex();
            for &inc in group {
                let e = self.edges[inc.edge.0 as usize].as_mut().expect("live edge");
                e.ends[inc.end as usize] = nv;
            }
            self.vert_mut(nv).rot = group.clone();
            out.push(nv);
        }
        self.vert_mut(v).rot.clear();
        self.delete_vertex(v)?;
        Ok(out)
    }

    /// Merges `u` and `v` by identifying each incidence of `u` with its
    /// partner under `bij`. Edges running between `u` and `v` weld into
    /// chains; fully closed chains vanish. Surviving merged edges keep the id
    /// of their u-side outermost constituent, so the rotation of the outer
    /// endpoint on the u side is untouched; the far endpoint has the old id
    /// replaced in place.
    pub fn identify_edges(
        &mut self,
        u: VertexId,
        v: VertexId,
        bij: &[(Inc, Inc)],
    ) -> Result<IdentifyRecord, GraphError> {
        if u == v {
            return Err(GraphError::NotDistinct);
        }
        if !self.contains_vertex(u) {
            return Err(GraphError::UnknownVertex(u));
        }
        if !self.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let du = self.degree(u);
        let dv = self.degree(v);
        if du != dv {
            return Err(GraphError::DegreeMismatch(du, dv));
        }
        let rot_u = self.vert(u).rot.clone();
        let rot_v = self.vert(v).rot.clone();
        {
            let mut lhs: Vec<Inc> = bij.iter().map(|&(a, _)| a).collect();
            let mut rhs: Vec<Inc> = bij.iter().map(|&(_, b)| b).collect();
            lhs.sort_unstable();
            rhs.sort_unstable();
            let mut su = rot_u.clone();
            let mut sv = rot_v.clone();
            su.sort_unstable();
            sv.sort_unstable();
            if lhs != su || rhs != sv {
                return Err(GraphError::InvalidBijection);
            }
        }

        let old_edges: Vec<(EdgeId, [VertexId; 2])> = rot_u
            .iter()
            .chain(rot_v.iter())
            .map(|&i| i.edge)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|e| (e, self.ends(e)))
            .collect();

        // Weld graph over incidences of u and v: bij pairs (p, q), and every
        // u-v edge internally links its u-incidence to its v-incidence.
        let weld: std::collections::HashMap<Inc, Inc> = bij.iter().copied().collect();
        // An incidence is internal when its far end is the other pipe vertex,
        // i.e. the edge runs between u and v and welds onto further slots.
        let is_internal = |g: &Self, inc: Inc| -> bool {
            let other = g.inc_other(inc);
            other == u || other == v
        };

        let mut merged = Vec::new();
        let mut vanished = Vec::new();
        let mut visited: std::collections::HashSet<EdgeId> = Default::default();

        // Follow each chain starting from a u-incidence whose far end is a
        // real (outer) vertex.
        for &start in &rot_u {
            if visited.contains(&start.edge) || is_internal(self, start) {
                continue;
            }
            // Chain: outer --start(e at u)-- weld --> q (at v) ... until an
            // incidence whose far side is outer.
            let mut consumed = Vec::new();
            let mut cur = weld[&start]; // incidence at v
            loop {
                visited.insert(cur.edge);
                if !is_internal(self, cur) {
                    break;
                }
                // cur.edge is a u-v edge entered from its v side; continue
                // from its u side.
                let at_u = cur.opposite();
                debug_assert_eq!(self.inc_vertex(at_u), u);
                consumed.push(cur.edge);
                cur = weld[&at_u];
            }
            // `cur` is the far incidence at v of an edge reaching an outer
            // vertex y. Merge: keep `start.edge`, rewire its u end to y.
            visited.insert(start.edge);
            let far = cur.edge;
            let y = self.inc_other(cur);
            let kept = start.edge;
            // Replace far's slot in y's rotation by kept.
            let far_outer_inc = cur.opposite();
            debug_assert_eq!(self.inc_vertex(far_outer_inc), y);
            let kept_new_inc = Inc::new(kept, start.end);
            if far != kept {
                let pos = self
                    .vert(y)
                    .rot
                    .iter()
                    .position(|&i| i == far_outer_inc)
                    .expect("far incidence present");
                self.vert_mut(y).rot[pos] = kept_new_inc;
                consumed.push(far);
            } else {
                // Direct weld of an edge with itself can only be a circle,
                // handled below; here far != kept always because start is not
                // internal. Degenerate case: chain of length 1, far is the
                // v-side edge.
                unreachable!("far edge equals kept edge");
            }
            let e = self.edges[kept.0 as usize].as_mut().expect("live edge");
            e.ends[start.end as usize] = y;
            let ends = e.ends;
            merged.push(MergedEdge { kept, consumed, far, far_outer_inc, kept_new_inc, ends });
        }

        // Remaining unvisited incidences of u are internal chains that close
        // into circles.
        for &start in &rot_u {
            if visited.contains(&start.edge) {
                continue;
            }
            let mut chain = vec![start.edge];
            visited.insert(start.edge);
            let mut cur = weld[&start];
            loop {
                if cur.edge == start.edge {
                    break;
                }
                visited.insert(cur.edge);
                chain.push(cur.edge);
                cur = weld[&cur.opposite()];
            }
            vanished.push(chain);
        }

        // Drop consumed and vanished edge records, clear u and v.
        for m in &merged {
            for &e in &m.consumed {
                if self.edges[e.0 as usize].is_some() {
                    self.edges[e.0 as usize] = None;
                    self.n_edges -= 1;
                }
            }
        }
        for chain in &vanished {
            for &e in chain {
                if self.edges[e.0 as usize].is_some() {
                    self.edges[e.0 as usize] = None;
                    self.n_edges -= 1;
                }
            }
        }
        self.vert_mut(u).rot.clear();
        self.vert_mut(v).rot.clear();
        self.delete_vertex(u)?;
        self.delete_vertex(v)?;

        Ok(IdentifyRecord {
            u,
            v,
            rot_u,
            rot_v,
            old_edges,
            merged,
            vanished,
            bij: bij.to_vec(),
        })
    }

    /// Traces all faces of the stored rotation system. After entering a
    /// vertex through an incidence, the walk leaves through the next
    /// incidence of that rotation (fixed convention, consistent repo-wide).
    pub fn trace_faces(&self) -> FaceTrace {
        let mut next_out: std::collections::HashMap<Inc, Inc> = Default::default();
        for v in self.vertex_ids() {
            let rot = self.rotation(v);
            let d = rot.len();
            for i in 0..d {
                next_out.insert(rot[i], rot[(i + 1) % d]);
            }
        }
        let mut seen: std::collections::HashSet<Dart> = Default::default();
        let mut faces = Vec::new();
        for e in self.edge_ids() {
            for dir in 0..2u8 {
                let start = Dart { edge: e, dir };
                if seen.contains(&start) {
                    continue;
                }
                let mut walk = Vec::new();
                let mut cur = start;
                loop {
                    seen.insert(cur);
                    walk.push(cur);
                    // cur arrives at its head: ends[dir == 0 ? 1 : 0].
                    let arriving = Inc::new(cur.edge, 1 - cur.dir);
                    let leave = next_out[&arriving];
                    cur = Dart { edge: leave.edge, dir: if leave.end == 0 { 0 } else { 1 } };
                    if cur == start {
                        break;
                    }
                }
                faces.push(walk);
            }
        }
        FaceTrace { faces }
    }

    /// Connected components as vertex lists (isolated vertices included).
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen: std::collections::HashSet<VertexId> = Default::default();
        let mut out = Vec::new();
        for v in self.vertex_ids() {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = Vec::new();
            let mut q = VecDeque::new();
            q.push_back(v);
            seen.insert(v);
            while let Some(w) = q.pop_front() {
                comp.push(w);
                for x in self.neighbors(w) {
                    if seen.insert(x) {
                        q.push_back(x);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Component of a single vertex.
    pub fn component_of(&self, v: VertexId) -> Vec<VertexId> {
        let mut seen: std::collections::HashSet<VertexId> = Default::default();
        let mut comp = Vec::new();
        let mut q = VecDeque::new();
        q.push_back(v);
        seen.insert(v);
        while let Some(w) = q.pop_front() {
            comp.push(w);
            for x in self.neighbors(w) {
                if seen.insert(x) {
                    q.push_back(x);
                }
            }
        }
        comp
    }

    /// Euler check per connected component: n - m + f == 2, with faces
    /// restricted to the component. Vertex-free components cannot exist;
    /// isolated vertices are ignored.
    pub fn is_planar_embedding(&self) -> bool {
        let trace = self.trace_faces();
        // Map representative vertex -> component index.
        let comps = self.components();
        let mut comp_of: std::collections::HashMap<VertexId, usize> = Default::default();
        for (i, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of.insert(v, i);
            }
        }
        let mut m = vec![0usize; comps.len()];
        for e in self.edge_ids() {
            m[comp_of[&self.ends(e)[0]]] += 1;
        }
        let mut f = vec![0usize; comps.len()];
        for face in &trace.faces {
            let v = self.ends(face[0].edge)[0];
            f[comp_of[&v]] += 1;
        }
        comps
            .iter()
            .enumerate()
            .all(|(i, comp)| m[i] == 0 || (comp.len() + f[i]).wrapping_sub(m[i]) == 2)
    }

    /// Cyclic order of the incidences leaving `inside`, read by contracting
    /// `inside` to a single point. The incidences leaving the set must all
    /// lie on one face of the sub-embedding induced by `inside` (true
    /// whenever the outside is connected and the whole embedding is planar);
    /// otherwise `None`. Returned incidences are attached inside with their
    /// far vertex outside.
    pub fn merged_rotation(&self, inside: &std::collections::HashSet<VertexId>) -> Option<Vec<Inc>> {
        // Build the sub-embedding, replacing each outgoing incidence with a
        // stub edge to a fresh leaf, then read the stub order along the face
        // containing them.
        let mut h = MultiGraph::new();
        let mut map: std::collections::HashMap<VertexId, VertexId> = Default::default();
        for &v in inside {
            map.insert(v, h.add_vertex());
        }
        let mut edge_map: std::collections::HashMap<Inc, Inc> = Default::default();
        let mut stub_of: std::collections::HashMap<EdgeId, Inc> = Default::default();
        for &v in inside {
            for &inc in self.rotation(v) {
                let w = self.inc_other(inc);
                if inside.contains(&w) {
                    if !edge_map.contains_key(&inc) {
                        let e = h.add_edge(map[&v], map[&w]).unwrap();
                        edge_map.insert(inc, Inc::new(e, 0));
                        edge_map.insert(inc.opposite(), Inc::new(e, 1));
                    }
                } else {
                    let leaf = h.add_vertex();
                    let e = h.add_edge(map[&v], leaf).unwrap();
                    edge_map.insert(inc, Inc::new(e, 0));
                    stub_of.insert(e, inc);
                }
            }
        }
        for &v in inside {
            let rot: Vec<Inc> = self.rotation(v).iter().map(|i| edge_map[i]).collect();
            h.set_rotation(map[&v], rot);
        }
        if stub_of.is_empty() {
            return Some(Vec::new());
        }
        let trace = h.trace_faces();
        let mut best: Option<Vec<Inc>> = None;
        for face in &trace.faces {
            // A stub is read from its dart pointing at the leaf (dir 0: the
            // inside vertex is ends[0]).
            let stubs: Vec<Inc> = face
                .iter()
                .filter(|d| d.dir == 0 && stub_of.contains_key(&d.edge))
                .map(|d| stub_of[&d.edge])
                .collect();
            if stubs.len() == stub_of.len() {
                best = Some(stubs);
                break;
            } else if !stubs.is_empty() && best.is_none() {
                best = None;
            }
        }
        best
    }

    pub fn next_in_rotation(&self, inc: Inc) -> Inc {
        let v = self.inc_vertex(inc);
        let rot = self.rotation(v);
        let pos = rot.iter().position(|&i| i == inc).expect("incidence present");
        rot[(pos + 1) % rot.len()]
    }

    /// Total degree; handy for Euler checks.
    pub fn sum_degrees(&self) -> usize {
        self.vertex_ids().map(|v| self.degree(v)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(center_deg: usize) -> (MultiGraph, VertexId, Vec<VertexId>) {
        let mut g = MultiGraph::new();
        let c = g.add_vertex();
        let leaves: Vec<_> = (0..center_deg).map(|_| g.add_vertex()).collect();
        for &l in &leaves {
            g.add_edge(c, l).unwrap();
        }
        (g, c, leaves)
    }

    fn triangle(g: &mut MultiGraph) -> [VertexId; 3] {
        let a = g.add_vertex();
        let b = g.add_vertex();
        let c = g.add_vertex();
        g.add_edge(a, b).unwrap();
        g.add_edge(b, c).unwrap();
        g.add_edge(c, a).unwrap();
        [a, b, c]
    }

    #[test]
    fn split_star_center() {
        let (mut g, c, _) = star(4);
        let rot = g.rotation(c).to_vec();
        let groups = vec![rot[0..2].to_vec(), rot[2..4].to_vec()];
        let parts = g.split_vertex(c, &groups).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|&p| g.degree(p) == 2));
        assert_eq!(g.n_vertices(), 6);
    }

    #[test]
    fn split_single_group_is_identity_shape() {
        let (mut g, c, _) = star(3);
        let rot = g.rotation(c).to_vec();
        let parts = g.split_vertex(c, &[rot.clone()]).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(g.rotation(parts[0]), &rot[..]);
        assert_eq!(g.components().len(), 1);
    }

    #[test]
    fn split_cut_vertex_of_two_triangles() {
        let mut g = MultiGraph::new();
        let x = g.add_vertex();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let p = g.add_vertex();
        let q = g.add_vertex();
        let e1 = g.add_edge(x, a).unwrap();
        g.add_edge(a, b).unwrap();
        let e2 = g.add_edge(b, x).unwrap();
        let e3 = g.add_edge(x, p).unwrap();
        g.add_edge(p, q).unwrap();
        let e4 = g.add_edge(q, x).unwrap();
        let g1 = vec![g.inc_at(x, e1).unwrap(), g.inc_at(x, e2).unwrap()];
        let g2 = vec![g.inc_at(x, e3).unwrap(), g.inc_at(x, e4).unwrap()];
        g.split_vertex(x, &[g1, g2]).unwrap();
        assert_eq!(g.components().len(), 2);
        for comp in g.components() {
            assert_eq!(comp.len(), 3);
        }
    }

    #[test]
    fn identify_two_stars_yields_matching() {
        let (mut g1, c1, _) = star(3);
        let c2 = {
            let c2 = g1.add_vertex();
            let l: Vec<_> = (0..3).map(|_| g1.add_vertex()).collect();
            for &x in &l {
                g1.add_edge(c2, x).unwrap();
            }
            c2
        };
        let bij: Vec<_> = g1
            .rotation(c1)
            .iter()
            .copied()
            .zip(g1.rotation(c2).iter().copied())
            .collect();
        g1.identify_edges(c1, c2, &bij).unwrap();
        assert_eq!(g1.n_vertices(), 6);
        assert_eq!(g1.n_edges(), 3);
        assert_eq!(g1.components().len(), 3);
        for comp in g1.components() {
            assert_eq!(comp.len(), 2);
        }
    }

    #[test]
    fn identify_degree_zero_pair() {
        let mut g = MultiGraph::new();
        let u = g.add_vertex();
        let v = g.add_vertex();
        g.identify_edges(u, v, &[]).unwrap();
        assert_eq!(g.n_vertices(), 0);
        assert_eq!(g.n_edges(), 0);
    }

    #[test]
    fn identify_with_uv_edge_vanishes_chain() {
        // u and v adjacent; bijection maps the uv edge onto itself seen from
        // the other side, so it closes into a circle and vanishes.
        let mut g = MultiGraph::new();
        let u = g.add_vertex();
        let v = g.add_vertex();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let euv = g.add_edge(u, v).unwrap();
        let ea = g.add_edge(u, a).unwrap();
        let eb = g.add_edge(v, b).unwrap();
        let bij = vec![
            (g.inc_at(u, euv).unwrap(), g.inc_at(v, euv).unwrap()),
            (g.inc_at(u, ea).unwrap(), g.inc_at(v, eb).unwrap()),
        ];
        let rec = g.identify_edges(u, v, &bij).unwrap();
        assert_eq!(rec.vanished.len(), 1);
        assert_eq!(g.n_edges(), 1);
        let mut ends = g.ends(ea);
        ends.sort();
        assert_eq!(ends, [a, b]);
    }

    #[test]
    fn faces_of_triangle() {
        let mut g = MultiGraph::new();
        triangle(&mut g);
        assert_eq!(g.trace_faces().count(), 2);
        assert!(g.is_planar_embedding());
    }

    fn k4() -> (MultiGraph, [VertexId; 4]) {
        let mut g = MultiGraph::new();
        let vs = [g.add_vertex(), g.add_vertex(), g.add_vertex(), g.add_vertex()];
        for i in 0..4 {
            for j in (i + 1)..4 {
                g.add_edge(vs[i], vs[j]).unwrap();
            }
        }
        (g, vs)
    }

    /// Enumerate rotation systems of a graph; fix the first incidence of each
    /// vertex to quotient out rotations of the cyclic order.
    fn for_each_rotation(g: &MultiGraph, mut f: impl FnMut(&MultiGraph)) {
        fn permutations(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in permutations(k - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let verts: Vec<_> = g.vertex_ids().collect();
        let options: Vec<Vec<Vec<Inc>>> = verts
            .iter()
            .map(|&v| {
                let rot = g.rotation(v).to_vec();
                if rot.len() <= 2 {
                    return vec![rot];
                }
                permutations(rot.len() - 1)
                    .into_iter()
                    .map(|p| {
                        let mut r = vec![rot[0]];
                        r.extend(p.into_iter().map(|i| rot[i + 1]));
                        r
                    })
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; verts.len()];
        let mut work = g.clone();
        loop {
            for (k, &v) in verts.iter().enumerate() {
                work.set_rotation(v, options[k][idx[k]].clone());
            }
            f(&work);
            let mut carry = verts.len();
            for k in 0..verts.len() {
                idx[k] += 1;
                if idx[k] < options[k].len() {
                    carry = k;
                    break;
                }
                idx[k] = 0;
            }
            if carry == verts.len() {
                break;
            }
        }
    }

    #[test]
    fn k4_rotations_planar_and_toroidal() {
        let (g, _) = k4();
        let mut found_planar = None;
        let mut found_toroidal = None;
        for_each_rotation(&g, |w| {
            let f = w.trace_faces().count();
            if f == 4 && found_planar.is_none() {
                found_planar = Some(w.clone());
            }
            if f == 2 && found_toroidal.is_none() {
                found_toroidal = Some(w.clone());
            }
        });
        let planar = found_planar.expect("K4 has a planar rotation");
        let toroidal = found_toroidal.expect("K4 has a genus-1 rotation");
        assert!(planar.is_planar_embedding());
        assert!(!toroidal.is_planar_embedding());
        assert_eq!(toroidal.trace_faces().count(), 2);
    }

    #[test]
    fn forests_planar_in_every_rotation() {
        let mut g = MultiGraph::new();
        let vs: Vec<_> = (0..6).map(|_| g.add_vertex()).collect();
        g.add_edge(vs[0], vs[1]).unwrap();
        g.add_edge(vs[0], vs[2]).unwrap();
        g.add_edge(vs[0], vs[3]).unwrap();
        g.add_edge(vs[2], vs[4]).unwrap();
        g.add_edge(vs[2], vs[5]).unwrap();
        for_each_rotation(&g, |w| assert!(w.is_planar_embedding()));
    }

    #[test]
    fn face_lengths_sum_to_twice_edges() {
        let (g, _) = k4();
        for_each_rotation(&g, |w| {
            let t = w.trace_faces();
            let total: usize = t.faces.iter().map(|f| f.len()).sum();
            assert_eq!(total, 2 * w.n_edges());
        });
    }

    #[test]
    fn trace_is_deterministic() {
        let (g, _) = k4();
        let a = g.trace_faces();
        let b = g.trace_faces();
        assert_eq!(a.faces, b.faces);
    }

    #[test]
    fn merged_rotation_reverses_hub_order() {
        // K4 with hub w outside the contracted triangle: in every planar
        // rotation, contracting {a,b,c} must read the three spokes in the
        // reverse of w's rotation (two parallel bundles face each other).
        let (g, vs) = k4();
        let w = vs[3];
        let inside: std::collections::HashSet<_> = vs[0..3].iter().copied().collect();
        let mut checked = 0;
        for_each_rotation(&g, |cand| {
            if !cand.is_planar_embedding() {
                return;
            }
            let merged = cand
                .merged_rotation(&inside)
                .expect("connected outside implies one boundary face");
            assert_eq!(merged.len(), 3);
            let spokes: Vec<EdgeId> = merged.iter().map(|i| i.edge).collect();
            let mut hub: Vec<EdgeId> = cand.rotation(w).iter().map(|i| i.edge).collect();
            hub.reverse();
            let pos = hub.iter().position(|&e| e == spokes[0]).unwrap();
            let aligned: Vec<EdgeId> = (0..3).map(|k| hub[(pos + k) % 3]).collect();
            assert_eq!(spokes, aligned);
            checked += 1;
        });
        assert!(checked > 0);
    }
}
