//! SPQR-trees: decomposition of a biconnected multigraph into series,
//! parallel and rigid skeletons linked through virtual edge pairs.
//!
//! Construction splits recursively at split pairs (parallel classes first,
//! then separation pairs found by per-vertex cut scans) and afterwards merges
//! adjacent skeletons of equal S/P type, which yields the canonical
//! triconnected components. Rigid skeletons carry a reference embedding
//! produced by the face-insertion embedder; reflection freedom stays with the
//! C-node semantics of derived embedding trees.
//!
//! The derivation of an embedding tree walks the skeletons containing the
//! vertex: parallel occurrences contribute P-nodes, rigid occurrences
//! C-nodes in reference rotation order, series occurrences pass through.

use std::collections::{HashMap, HashSet};

use crate::embedding::{embed_block, EmbeddingTree};
use crate::graph::{EdgeId, Inc, MultiGraph, VertexId};
use crate::pctree::{PcTree, Shape};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SpqrError {
    #[error("subgraph is not biconnected")]
    NotBiconnected,
    #[error("subgraph too small for a decomposition")]
    TooSmall,
    #[error("rigid skeleton is nonplanar")]
    NonplanarRigid,
    #[error("vertex does not occur in the decomposed subgraph")]
    UnknownVertex,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SkelKind {
    S,
    P,
    R,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Content {
    Real(EdgeId),
    /// Index into [`SpqrTree::pairs`].
    Virtual(usize),
}

#[derive(Clone, Debug)]
struct WorkEdge {
    a: VertexId,
    b: VertexId,
    content: Content,
}

#[derive(Clone, Debug)]
pub struct Skeleton {
    pub kind: SkelKind,
    /// Edge list over original vertex ids.
    pub edges: Vec<(VertexId, VertexId, Content)>,
    /// Reference rotation per vertex for rigid skeletons: positions into
    /// `edges`. None for S/P or nonplanar rigids.
    pub ref_rot: Option<HashMap<VertexId, Vec<usize>>>,
}

impl Skeleton {
    pub fn verts(&self) -> HashSet<VertexId> {
        self.edges.iter().flat_map(|&(a, b, _)| [a, b]).collect()
    }

    fn positions_at(&self, v: VertexId) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b, _))| a == v || b == v)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SpqrTree {
    pub skels: Vec<Skeleton>,
    /// Virtual pairs: the two (skeleton index, edge position) twins.
    pub pairs: Vec<[(usize, usize); 2]>,
    occ: HashMap<VertexId, Vec<usize>>,
}

/// Decomposes the biconnected subgraph induced by `edges`.
pub fn build_spqr(g: &MultiGraph, edges: &[EdgeId]) -> Result<SpqrTree, SpqrError> {
    let mut vset: HashSet<VertexId> = HashSet::new();
    for &e in edges {
        let [a, b] = g.ends(e);
        vset.insert(a);
        vset.insert(b);
    }
    if edges.len() < 3 {
        return Err(SpqrError::TooSmall);
    }

    let work: Vec<WorkEdge> = edges
        .iter()
        .map(|&e| {
            let [a, b] = g.ends(e);
            WorkEdge { a, b, content: Content::Real(e) }
        })
        .collect();

    let mut builder = Builder { comps: Vec::new(), pair_twins: Vec::new() };
    builder.decompose(work)?;
    builder.merge_same_kind();
    let mut tree = builder.finish();

    // reference embeddings for rigid skeletons
    for sk in &mut tree.skels {
        if sk.kind != SkelKind::R {
            continue;
        }
        let mut h = MultiGraph::new();
        let mut vmap: HashMap<VertexId, VertexId> = HashMap::new();
        for &(a, b, _) in &sk.edges {
            for v in [a, b] {
                vmap.entry(v).or_insert_with(|| h.add_vertex());
            }
        }
        let es: Vec<EdgeId> = sk
            .edges
            .iter()
            .map(|&(a, b, _)| h.add_edge(vmap[&a], vmap[&b]).unwrap())
            .collect();
        if let Some(rot) = embed_block(&h, &es) {
            let back: HashMap<VertexId, VertexId> = vmap.iter().map(|(&o, &l)| (l, o)).collect();
            let pos_of: HashMap<EdgeId, usize> = es.iter().enumerate().map(|(i, &e)| (e, i)).collect();
            let mut ref_rot = HashMap::new();
            for (lv, r) in rot {
                ref_rot.insert(back[&lv], r.iter().map(|i| pos_of[&i.edge]).collect());
            }
            sk.ref_rot = Some(ref_rot);
        }
    }
    Ok(tree)
}

struct Builder {
    comps: Vec<(SkelKind, Vec<WorkEdge>)>,
    /// per pair id: component ids (filled as both sides materialize)
    pair_twins: Vec<Vec<usize>>,
}

impl Builder {
    fn decompose(&mut self, edges: Vec<WorkEdge>) -> Result<(), SpqrError> {
        let mut stack = vec![edges];
        while let Some(es) = stack.pop() {
            let verts: HashSet<VertexId> = es.iter().flat_map(|e| [e.a, e.b]).collect();
            let n = verts.len();
            let m = es.len();
            debug_assert!(m >= 3 || (n == 2 && m >= 2));
            if n == 2 {
                self.emit(SkelKind::P, es);
                continue;
            }
            // cycle: every vertex has degree exactly 2
            let mut deg: HashMap<VertexId, usize> = HashMap::new();
            for e in &es {
                *deg.entry(e.a).or_insert(0) += 1;
                *deg.entry(e.b).or_insert(0) += 1;
            }
            if deg.values().all(|&d| d == 2) && n == m {
                self.emit(SkelKind::S, es);
                continue;
            }
            match find_split_pair(&es, &verts) {
                Some((a, b)) => {
                    let branches = self.split_at(es, a, b);
                    stack.extend(branches);
                }
                None => self.emit(SkelKind::R, es),
            }
        }
        Ok(())
    }

    fn emit(&mut self, kind: SkelKind, es: Vec<WorkEdge>) {
        let id = self.comps.len();
        for e in &es {
            if let Content::Virtual(p) = e.content {
                self.pair_twins[p].push(id);
            }
        }
        self.comps.push((kind, es));
    }

    fn new_pair(&mut self) -> usize {
        self.pair_twins.push(Vec::new());
        self.pair_twins.len() - 1
    }

    /// Splits the edge set at split pair {a, b} into its split components,
    /// inserting a central bond when three or more branches meet.
    fn split_at(&mut self, es: Vec<WorkEdge>, a: VertexId, b: VertexId) -> Vec<Vec<WorkEdge>> {
        let mut direct: Vec<WorkEdge> = Vec::new();
        let mut rest: Vec<WorkEdge> = Vec::new();
        for e in es {
            if (e.a == a && e.b == b) || (e.a == b && e.b == a) {
                direct.push(e);
            } else {
                rest.push(e);
            }
        }
        // components of rest minus {a, b}
        let mut comp_of: HashMap<VertexId, usize> = HashMap::new();
        let mut adj: HashMap<VertexId, Vec<usize>> = HashMap::new();
        for (i, e) in rest.iter().enumerate() {
            adj.entry(e.a).or_default().push(i);
            adj.entry(e.b).or_default().push(i);
        }
        let mut n_comps = 0usize;
        for v in adj.keys().copied().collect::<Vec<_>>() {
            if v == a || v == b || comp_of.contains_key(&v) {
                continue;
            }
            let c = n_comps;
            n_comps += 1;
            let mut stack = vec![v];
            comp_of.insert(v, c);
            while let Some(x) = stack.pop() {
                for &ei in &adj[&x] {
                    let e = &rest[ei];
                    for w in [e.a, e.b] {
                        if w != a && w != b && !comp_of.contains_key(&w) {
                            comp_of.insert(w, c);
                            stack.push(w);
                        }
                    }
                }
            }
        }
        let mut parts: Vec<Vec<WorkEdge>> = vec![Vec::new(); n_comps];
        for e in rest {
            let c = if e.a != a && e.a != b { comp_of[&e.a] } else { comp_of[&e.b] };
            parts[c].push(e);
        }
        let k = parts.len();
        let d = direct.len();
        debug_assert!(k + d.min(1) >= 2, "not a split pair");

        let mut out = Vec::new();
        if k == 2 && d == 0 {
            let p = self.new_pair();
            for mut part in parts {
                part.push(WorkEdge { a, b, content: Content::Virtual(p) });
                out.push(part);
            }
        } else {
            // central bond holding the direct edges and one virtual per part
            let mut bond = direct;
            for mut part in parts {
                let p = self.new_pair();
                part.push(WorkEdge { a, b, content: Content::Virtual(p) });
                bond.push(WorkEdge { a, b, content: Content::Virtual(p) });
                out.push(part);
            }
            self.emit(SkelKind::P, bond);
        }
        out
    }

    /// Merges adjacent S-S and P-P components until none remain.
    fn merge_same_kind(&mut self) {
        loop {
            let mut merged_any = false;
            for p in 0..self.pair_twins.len() {
                let tw = self.pair_twins[p].clone();
                if tw.len() != 2 {
                    continue;
                }
                let (c1, c2) = (tw[0], tw[1]);
                if c1 == c2 {
                    continue;
                }
                let k1 = self.comps[c1].0;
                let k2 = self.comps[c2].0;
                if k1 != k2 || k1 == SkelKind::R {
                    continue;
                }
                // drop the pair's virtuals from both sides, move c2's edges
                let moved: Vec<WorkEdge> = self.comps[c2]
                    .1
                    .drain(..)
                    .filter(|e| e.content != Content::Virtual(p))
                    .collect();
                self.comps[c1].1.retain(|e| e.content != Content::Virtual(p));
                for e in &moved {
                    if let Content::Virtual(q) = e.content {
                        for slot in self.pair_twins[q].iter_mut() {
                            if *slot == c2 {
                                *slot = c1;
                            }
                        }
                    }
                }
                self.comps[c1].1.extend(moved);
                self.pair_twins[p].clear();
                merged_any = true;
            }
            if !merged_any {
                break;
            }
        }
    }

    fn finish(self) -> SpqrTree {
        let mut skels: Vec<Skeleton> = Vec::new();
        for (kind, es) in self.comps.iter() {
            if es.is_empty() {
                continue;
            }
            skels.push(Skeleton {
                kind: *kind,
                edges: es.iter().map(|e| (e.a, e.b, e.content)).collect(),
                ref_rot: None,
            });
        }
        // pair table over final skeleton indices and edge positions, with
        // pair ids renumbered densely
        let mut pairs: Vec<[(usize, usize); 2]> = Vec::new();
        let mut pair_id_map: HashMap<usize, usize> = HashMap::new();
        for (si, sk) in skels.iter().enumerate() {
            for (pos, &(_, _, c)) in sk.edges.iter().enumerate() {
                if let Content::Virtual(old) = c {
                    let np = *pair_id_map.entry(old).or_insert_with(|| {
                        pairs.push([(usize::MAX, usize::MAX); 2]);
                        pairs.len() - 1
                    });
                    let slot = if pairs[np][0].0 == usize::MAX { 0 } else { 1 };
                    pairs[np][slot] = (si, pos);
                }
            }
        }
        for sk in &mut skels {
            for e in &mut sk.edges {
                if let Content::Virtual(old) = e.2 {
                    e.2 = Content::Virtual(pair_id_map[&old]);
                }
            }
        }
        let mut occ: HashMap<VertexId, Vec<usize>> = HashMap::new();
        for (si, sk) in skels.iter().enumerate() {
            for v in sk.verts() {
                occ.entry(v).or_default().push(si);
            }
        }
        SpqrTree { skels, pairs, occ }
    }
}

/// A split pair of the work graph: two vertices carrying parallel edges, or a
/// separation pair.
fn find_split_pair(es: &[WorkEdge], verts: &HashSet<VertexId>) -> Option<(VertexId, VertexId)> {
    let mut seen: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    for e in es {
        let key = if e.a < e.b { (e.a, e.b) } else { (e.b, e.a) };
        let c = seen.entry(key).or_insert(0);
        *c += 1;
        if *c >= 2 {
            return Some(key);
        }
    }
    // separation pairs: cut vertices of G - a
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for e in es {
        adj.entry(e.a).or_default().push(e.b);
        adj.entry(e.b).or_default().push(e.a);
    }
    let vlist: Vec<VertexId> = {
        let mut v: Vec<VertexId> = verts.iter().copied().collect();
        v.sort_unstable();
        v
    };
    for &a in &vlist {
        if let Some(b) = first_cut_vertex(&adj, &vlist, a) {
            return Some((a, b));
        }
    }
    None
}

/// First cut vertex of the graph with `removed` deleted, or None. Parallel
/// edges are harmless for cut detection because a repeated neighbour entry
/// acts as a back edge.
fn first_cut_vertex(
    adj: &HashMap<VertexId, Vec<VertexId>>,
    verts: &[VertexId],
    removed: VertexId,
) -> Option<VertexId> {
    let mut index: HashMap<VertexId, usize> = HashMap::new();
    let mut low: HashMap<VertexId, usize> = HashMap::new();
    let mut timer = 0usize;

    let root = verts.iter().copied().find(|&v| v != removed)?;
    struct Frame {
        v: VertexId,
        parent: Option<VertexId>,
        parent_edge_used: bool,
        next: usize,
        child_count: usize,
    }
    index.insert(root, timer);
    low.insert(root, timer);
    timer += 1;
    let mut stack =
        vec![Frame { v: root, parent: None, parent_edge_used: false, next: 0, child_count: 0 }];
    while let Some(fr) = stack.last_mut() {
        let v = fr.v;
        let list = &adj[&v];
        if fr.next < list.len() {
            let w = list[fr.next];
            fr.next += 1;
            if w == removed {
                continue;
            }
            if Some(w) == fr.parent && !fr.parent_edge_used {
                fr.parent_edge_used = true;
                continue;
            }
            if let Some(&iw) = index.get(&w) {
                let lv = low[&v].min(iw);
                low.insert(v, lv);
            } else {
                index.insert(w, timer);
                low.insert(w, timer);
                timer += 1;
                fr.child_count += 1;
                stack.push(Frame {
                    v: w,
                    parent: Some(v),
                    parent_edge_used: false,
                    next: 0,
                    child_count: 0,
                });
            }
        } else {
            let done = stack.pop().unwrap();
            if let Some(fr2) = stack.last_mut() {
                let p = fr2.v;
                let lv = low[&done.v];
                if lv >= index[&p] && fr2.parent.is_some() {
                    return Some(p);
                }
                let lp = low[&p].min(lv);
                low.insert(p, lp);
            } else if done.child_count >= 2 {
                return Some(done.v);
            }
        }
    }
    debug_assert!(index.len() >= verts.len() - 1, "input subgraph must be biconnected");
    None
}

impl SpqrTree {
    /// Skeleton indices containing a vertex.
    pub fn occurrences(&self, v: VertexId) -> &[usize] {
        self.occ.get(&v).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn twin_of(&self, skel: usize, pos: usize) -> (usize, usize) {
        let Content::Virtual(p) = self.skels[skel].edges[pos].2 else {
            panic!("twin_of on a real edge");
        };
        let [x, y] = self.pairs[p];
        if x == (skel, pos) {
            y
        } else {
            x
        }
    }

    /// Real edges with endpoints, sorted; equals the decomposed subgraph.
    pub fn reassembled_edges(&self) -> Vec<(EdgeId, VertexId, VertexId)> {
        let mut out = Vec::new();
        for sk in &self.skels {
            for &(a, b, c) in &sk.edges {
                if let Content::Real(e) = c {
                    out.push((e, a.min(b), a.max(b)));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Embedding tree of `v`, assembled from v's skeleton occurrences in time
    /// proportional to deg(v) given the decomposition.
    pub fn embedding_tree(&self, g: &MultiGraph, v: VertexId) -> Result<EmbeddingTree, SpqrError> {
        let occs = self.occurrences(v);
        if occs.is_empty() {
            return Err(SpqrError::UnknownVertex);
        }
        let mut leaf_inc: Vec<Inc> = Vec::new();
        let start = occs[0];
        let shape = self.shape_at(g, v, start, None, &mut leaf_inc)?;
        let tree = PcTree::from_shape(&shape);
        Ok(EmbeddingTree { tree, leaf_inc })
    }

    fn shape_at(
        &self,
        g: &MultiGraph,
        v: VertexId,
        skel: usize,
        arrived_pos: Option<usize>,
        leaf_inc: &mut Vec<Inc>,
    ) -> Result<Shape, SpqrError> {
        let sk = &self.skels[skel];
        // positions of v's skeleton edges: P arbitrary, R in reference
        // rotation order, S the two cycle slots
        let ordered: Vec<usize> = match sk.kind {
            SkelKind::R => {
                let rr = sk.ref_rot.as_ref().ok_or(SpqrError::NonplanarRigid)?;
                rr.get(&v).cloned().ok_or(SpqrError::UnknownVertex)?
            }
            _ => sk.positions_at(v),
        };
        let mut kids: Vec<Shape> = Vec::new();
        let mut emit = |this: &Self, pos: usize, leaf_inc: &mut Vec<Inc>| -> Result<Shape, SpqrError> {
            match sk.edges[pos].2 {
                Content::Real(e) => {
                    let label = leaf_inc.len() as u32;
                    leaf_inc.push(g.inc_at(v, e).expect("v on its real edge"));
                    Ok(Shape::Leaf(label))
                }
                Content::Virtual(_) => {
                    let (ts, tp) = this.twin_of(skel, pos);
                    this.shape_at(g, v, ts, Some(tp), leaf_inc)
                }
            }
        };
        match arrived_pos {
            None => {
                for &pos in &ordered {
                    let s = emit(self, pos, leaf_inc)?;
                    kids.push(s);
                }
            }
            Some(ap) => {
                // rotate so the arrival slot leads, then skip it: the parent
                // gap of this node sits exactly at the arrival
                let start = ordered.iter().position(|&p| p == ap).expect("arrival at v");
                let m = ordered.len();
                for k in 1..m {
                    let pos = ordered[(start + k) % m];
                    let s = emit(self, pos, leaf_inc)?;
                    kids.push(s);
                }
            }
        }
        Ok(match sk.kind {
            SkelKind::P => Shape::P(kids),
            SkelKind::R => Shape::C(kids),
            SkelKind::S => {
                // degree 2 in a cycle: pass-through
                debug_assert!(kids.len() <= 2);
                if kids.len() == 1 {
                    kids.pop().unwrap()
                } else {
                    Shape::P(kids)
                }
            }
        })
    }

    /// One shared decomposition, one tree per requested vertex.
    pub fn embedding_trees_batch(
        &self,
        g: &MultiGraph,
        vs: &[VertexId],
    ) -> Result<HashMap<VertexId, EmbeddingTree>, SpqrError> {
        let mut out = HashMap::new();
        for &v in vs {
            out.insert(v, self.embedding_tree(g, v)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges_of(g: &MultiGraph) -> Vec<EdgeId> {
        g.edge_ids().collect()
    }

    #[test]
    fn cycle_is_single_s() {
        let mut g = MultiGraph::new();
        let vs: Vec<VertexId> = (0..5).map(|_| g.add_vertex()).collect();
        for i in 0..5 {
            g.add_edge(vs[i], vs[(i + 1) % 5]).unwrap();
        }
        let t = build_spqr(&g, &edges_of(&g)).unwrap();
        assert_eq!(t.skels.len(), 1);
        assert_eq!(t.skels[0].kind, SkelKind::S);
    }

    #[test]
    fn bundle_is_single_p() {
        let mut g = MultiGraph::new();
        let a = g.add_vertex();
        let b = g.add_vertex();
        for _ in 0..4 {
            g.add_edge(a, b).unwrap();
        }
        let t = build_spqr(&g, &edges_of(&g)).unwrap();
        assert_eq!(t.skels.len(), 1);
        assert_eq!(t.skels[0].kind, SkelKind::P);
    }

    #[test]
    fn k4_is_single_r() {
        let mut g = MultiGraph::new();
        let vs: Vec<VertexId> = (0..4).map(|_| g.add_vertex()).collect();
        for i in 0..4 {
            for j in (i + 1)..4 {
                g.add_edge(vs[i], vs[j]).unwrap();
            }
        }
        let t = build_spqr(&g, &edges_of(&g)).unwrap();
        assert_eq!(t.skels.len(), 1);
        assert_eq!(t.skels[0].kind, SkelKind::R);
    }

    #[test]
    fn subdivided_k4_gives_r_plus_s() {
        let mut g = MultiGraph::new();
        let vs: Vec<VertexId> = (0..4).map(|_| g.add_vertex()).collect();
        for i in 0..4 {
            for j in (i + 1)..4 {
                if (i, j) != (0, 1) {
                    g.add_edge(vs[i], vs[j]).unwrap();
                }
            }
        }
        let m = g.add_vertex();
        g.add_edge(vs[0], m).unwrap();
        g.add_edge(m, vs[1]).unwrap();
        let t = build_spqr(&g, &edges_of(&g)).unwrap();
        let mut kinds: Vec<SkelKind> = t.skels.iter().map(|s| s.kind).collect();
        kinds.sort_by_key(|k| format!("{k:?}"));
        assert_eq!(kinds, vec![SkelKind::R, SkelKind::S]);
        let r = t.skels.iter().find(|s| s.kind == SkelKind::R).unwrap();
        assert_eq!(r.verts().len(), 4);
        let s = t.skels.iter().find(|s| s.kind == SkelKind::S).unwrap();
        assert_eq!(s.edges.len(), 3);
    }

    #[test]
    fn theta_graph_decomposition() {
        let mut g = MultiGraph::new();
        let u = g.add_vertex();
        let v = g.add_vertex();
        for _ in 0..3 {
            let m = g.add_vertex();
            g.add_edge(u, m).unwrap();
            g.add_edge(m, v).unwrap();
        }
        let t = build_spqr(&g, &edges_of(&g)).unwrap();
        let p_count = t.skels.iter().filter(|s| s.kind == SkelKind::P).count();
        let s_count = t.skels.iter().filter(|s| s.kind == SkelKind::S).count();
        assert_eq!(p_count, 1);
        assert_eq!(s_count, 3);
    }

    #[test]
    fn reassembly_restores_input() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _case in 0..40 {
            let n = rng.gen_range(3..10);
            let mut g = MultiGraph::new();
            let vs: Vec<VertexId> = (0..n).map(|_| g.add_vertex()).collect();
            for i in 0..n {
                g.add_edge(vs[i], vs[(i + 1) % n]).unwrap();
            }
            for _ in 0..rng.gen_range(0..=2 * n) {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a != b {
                    g.add_edge(vs[a], vs[b]).unwrap();
                }
            }
            let t = build_spqr(&g, &edges_of(&g)).unwrap();
            let mut want: Vec<(EdgeId, VertexId, VertexId)> = g
                .edge_ids()
                .map(|e| {
                    let [a, b] = g.ends(e);
                    (e, a.min(b), a.max(b))
                })
                .collect();
            want.sort_unstable();
            assert_eq!(t.reassembled_edges(), want);
            for pair in &t.pairs {
                let [x, y] = *pair;
                let kx = t.skels[x.0].kind;
                let ky = t.skels[y.0].kind;
                assert!(!(kx == ky && kx != SkelKind::R), "adjacent same-kind {kx:?} skeletons");
            }
            for sk in &t.skels {
                let verts = sk.verts();
                match sk.kind {
                    SkelKind::P => assert_eq!(verts.len(), 2),
                    SkelKind::S => {
                        assert_eq!(verts.len(), sk.edges.len());
                        assert!(sk.edges.len() >= 3);
                    }
                    SkelKind::R => {
                        let work: Vec<WorkEdge> = sk
                            .edges
                            .iter()
                            .map(|&(a, b, c)| WorkEdge { a, b, content: c })
                            .collect();
                        assert!(find_split_pair(&work, &verts).is_none(), "rigid has a split pair");
                    }
                }
            }
        }
    }

    /// Cross-oracle: SPQR-derived embedding trees equal the planarity-test
    /// trees on random biconnected planar graphs.
    #[test]
    fn spqr_trees_match_vertex_addition() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 40 {
            let n = rng.gen_range(3..12);
            let mut g = MultiGraph::new();
            let vs: Vec<VertexId> = (0..n).map(|_| g.add_vertex()).collect();
            for i in 0..n {
                g.add_edge(vs[i], vs[(i + 1) % n]).unwrap();
            }
            for _ in 0..rng.gen_range(1..=n) {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a != b {
                    g.add_edge(vs[a], vs[b]).unwrap();
                }
            }
            let edges = edges_of(&g);
            if crate::embedding::embed_block(&g, &edges).is_none() {
                continue; // nonplanar sample
            }
            let t = build_spqr(&g, &edges).unwrap();
            let batch = t.embedding_trees_batch(&g, &vs).unwrap();
            for &v in &vs {
                let via_spqr = &batch[&v];
                let via_planarity = crate::embedding::vertex_addition_tree(&g, &edges, v).unwrap();
                assert_eq!(
                    via_spqr.admissible_inc_orders(),
                    via_planarity.admissible_inc_orders(),
                    "trees disagree at {v:?}"
                );
            }
            done += 1;
        }
    }
}
