//! Block-cut forest maintained lazily under structural edits.
//!
//! Blocks are maximal biconnected subgraphs; a vertex is a cut-vertex iff it
//! lies in two or more blocks. The solver mutates the graph heavily, so the
//! forest invalidates affected components on [`BcForest::notify_dirty`] and
//! recomputes them from scratch on the next query. A fresh rebuild is always
//! equal to the maintained state (checked by the invariant test).

use std::collections::{HashMap, HashSet};

use crate::graph::{EdgeId, MultiGraph, VertexId};

pub type BlockId = u64;

#[derive(Clone, Debug, Default)]
pub struct BlockInfo {
    pub verts: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, Default)]
pub struct BcForest {
    blocks: HashMap<BlockId, BlockInfo>,
    blocks_at: HashMap<VertexId, Vec<BlockId>>,
    block_of_edge: HashMap<EdgeId, BlockId>,
    clean: HashSet<VertexId>,
    next_block: BlockId,
}

impl BcForest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn build(g: &MultiGraph) -> Self {
        let mut f = Self::new();
        for v in g.vertex_ids() {
            f.ensure_clean(g, v);
        }
        f
    }

    /// Invalidates the cached decomposition around the given vertices. Every
    /// structural edit reports the vertices it touched (including surviving
    /// endpoints of deleted edges).
    pub fn notify_dirty(&mut self, verts: impl IntoIterator<Item = VertexId>) {
        for v in verts {
            // everything reachable through cached blocks of v is stale
            let mut stack = vec![v];
            let mut seen = HashSet::new();
            while let Some(u) = stack.pop() {
                if !seen.insert(u) {
                    continue;
                }
                if let Some(bs) = self.blocks_at.get(&u) {
                    for b in bs.clone() {
                        if let Some(info) = self.blocks.get(&b) {
                            stack.extend(info.verts.iter().copied());
                        }
                    }
                }
            }
            for u in seen {
                self.drop_vertex_entries(u);
            }
        }
    }

    fn drop_vertex_entries(&mut self, v: VertexId) {
        self.clean.remove(&v);
        if let Some(bs) = self.blocks_at.remove(&v) {
            for b in bs {
                if let Some(info) = self.blocks.remove(&b) {
                    for e in info.edges {
                        self.block_of_edge.remove(&e);
                    }
                    for w in info.verts {
                        if w != v {
                            if let Some(list) = self.blocks_at.get_mut(&w) {
                                list.retain(|&x| x != b);
                            }
                        }
                    }
                }
            }
        }
    }

    fn ensure_clean(&mut self, g: &MultiGraph, v: VertexId) {
        if self.clean.contains(&v) {
            return;
        }
        let comp = g.component_of(v);
        for &u in &comp {
            self.drop_vertex_entries(u);
        }
        self.decompose_component(g, &comp);
        for u in comp {
            self.clean.insert(u);
        }
    }

    /// Iterative Tarjan biconnected components over one component.
    fn decompose_component(&mut self, g: &MultiGraph, comp: &[VertexId]) {
        let mut index: HashMap<VertexId, usize> = HashMap::new();
        let mut low: HashMap<VertexId, usize> = HashMap::new();
        let mut estack: Vec<EdgeId> = Vec::new();
        let mut timer = 0usize;

        struct Frame {
            v: VertexId,
            parent_edge: Option<EdgeId>,
            next: usize,
        }

        for &root in comp {
            if index.contains_key(&root) {
                continue;
            }
            index.insert(root, timer);
            low.insert(root, timer);
            timer += 1;
            let mut stack = vec![Frame { v: root, parent_edge: None, next: 0 }];
            while let Some(fr) = stack.last_mut() {
                let v = fr.v;
                let rot = g.rotation(v);
                if fr.next < rot.len() {
                    let inc = rot[fr.next];
                    fr.next += 1;
                    if Some(inc.edge) == fr.parent_edge {
                        continue;
                    }
                    let w = g.inc_other(inc);
                    if let Some(&iw) = index.get(&w) {
                        if iw < index[&v] {
                            estack.push(inc.edge);
                            let lv = low[&v].min(iw);
                            low.insert(v, lv);
                        }
                    } else {
                        estack.push(inc.edge);
                        index.insert(w, timer);
                        low.insert(w, timer);
                        timer += 1;
                        stack.push(Frame { v: w, parent_edge: Some(inc.edge), next: 0 });
                    }
                } else {
                    let done = stack.pop().unwrap();
                    if let Some(pe) = done.parent_edge {
                        let p = stack.last().unwrap().v;
                        let lv = low[&done.v];
                        if lv >= index[&p] {
                            let mut edges = Vec::new();
                            while let Some(&e) = estack.last() {
                                estack.pop();
                                edges.push(e);
                                if e == pe {
                                    break;
                                }
                            }
                            self.add_block(g, edges);
                        }
                        let lp = low[&p].min(lv);
                        low.insert(p, lp);
                    } else if !estack.is_empty() {
                        let edges = std::mem::take(&mut estack);
                        self.add_block(g, edges);
                    }
                }
            }
            if g.degree(root) == 0 {
                self.blocks_at.entry(root).or_default();
            }
        }
    }

    fn add_block(&mut self, g: &MultiGraph, edges: Vec<EdgeId>) {
        let id = self.next_block;
        self.next_block += 1;
        let mut verts: HashSet<VertexId> = HashSet::new();
        for &e in &edges {
            let [a, b] = g.ends(e);
            verts.insert(a);
            verts.insert(b);
            self.block_of_edge.insert(e, id);
        }
        let mut vs: Vec<VertexId> = verts.into_iter().collect();
        vs.sort_unstable();
        for &v in &vs {
            self.blocks_at.entry(v).or_default().push(id);
        }
        self.blocks.insert(id, BlockInfo { verts: vs, edges });
    }

    pub fn is_cut_vertex(&mut self, g: &MultiGraph, v: VertexId) -> bool {
        self.ensure_clean(g, v);
        self.blocks_at.get(&v).is_some_and(|b| b.len() >= 2)
    }

    /// Number of vertices in the unique block of a block-vertex.
    pub fn block_size(&mut self, g: &MultiGraph, v: VertexId) -> Option<usize> {
        self.ensure_clean(g, v);
        match self.blocks_at.get(&v) {
            Some(bs) if bs.len() == 1 => Some(self.blocks[&bs[0]].verts.len()),
            _ => None,
        }
    }

    pub fn blocks_of(&mut self, g: &MultiGraph, v: VertexId) -> Vec<BlockId> {
        self.ensure_clean(g, v);
        self.blocks_at.get(&v).cloned().unwrap_or_default()
    }

    pub fn block_info(&self, b: BlockId) -> &BlockInfo {
        &self.blocks[&b]
    }

    pub fn block_of_edge(&mut self, g: &MultiGraph, e: EdgeId) -> BlockId {
        let v = g.ends(e)[0];
        self.ensure_clean(g, v);
        self.block_of_edge[&e]
    }

    /// Canonical snapshot for structural comparison: per vertex, the sorted
    /// list of sorted block edge sets it belongs to.
    pub fn snapshot(&mut self, g: &MultiGraph) -> Vec<(VertexId, Vec<Vec<EdgeId>>)> {
        let mut out = Vec::new();
        let verts: Vec<VertexId> = g.vertex_ids().collect();
        for v in verts {
            self.ensure_clean(g, v);
            let mut sets: Vec<Vec<EdgeId>> = self
                .blocks_at
                .get(&v)
                .map(|bs| {
                    bs.iter()
                        .map(|b| {
                            let mut es = self.blocks[b].edges.clone();
                            es.sort_unstable();
                            es
                        })
                        .collect()
                })
                .unwrap_or_default();
            sets.sort();
            out.push((v, sets));
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_single_block() {
        let mut g = MultiGraph::new();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let c = g.add_vertex();
        g.add_edge(a, b).unwrap();
        g.add_edge(b, c).unwrap();
        g.add_edge(c, a).unwrap();
        let mut f = BcForest::build(&g);
        assert!(!f.is_cut_vertex(&g, a));
        assert_eq!(f.block_size(&g, a), Some(3));
    }

    #[test]
    fn path_cut_vertex() {
        let mut g = MultiGraph::new();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let c = g.add_vertex();
        g.add_edge(a, b).unwrap();
        g.add_edge(b, c).unwrap();
        let mut f = BcForest::build(&g);
        assert!(f.is_cut_vertex(&g, b));
        assert!(!f.is_cut_vertex(&g, a));
        assert_eq!(f.blocks_of(&g, b).len(), 2);
    }

    #[test]
    fn two_triangles_share_vertex() {
        let mut g = MultiGraph::new();
        let x = g.add_vertex();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let p = g.add_vertex();
        let q = g.add_vertex();
        g.add_edge(x, a).unwrap();
        g.add_edge(a, b).unwrap();
        g.add_edge(b, x).unwrap();
        g.add_edge(x, p).unwrap();
        g.add_edge(p, q).unwrap();
        g.add_edge(q, x).unwrap();
        let mut f = BcForest::build(&g);
        assert!(f.is_cut_vertex(&g, x));
        assert_eq!(f.blocks_of(&g, x).len(), 2);
        assert!(!f.is_cut_vertex(&g, a));
        let z = g.add_vertex();
        f.notify_dirty([z]);
        assert!(!f.is_cut_vertex(&g, z));
    }

    #[test]
    fn maintained_equals_rebuild_under_edits() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _case in 0..30 {
            let n = rng.gen_range(4..10);
            let mut g = MultiGraph::new();
            let vs: Vec<VertexId> = (0..n).map(|_| g.add_vertex()).collect();
            let mut f = BcForest::build(&g);
            for _step in 0..15 {
                let a = vs[rng.gen_range(0..n)];
                let b = vs[rng.gen_range(0..n)];
                if a == b || !g.contains_vertex(a) || !g.contains_vertex(b) {
                    continue;
                }
                if rng.gen_bool(0.7) || g.n_edges() == 0 {
                    g.add_edge(a, b).unwrap();
                    f.notify_dirty([a, b]);
                } else {
                    let es: Vec<EdgeId> = g.edge_ids().collect();
                    let e = es[rng.gen_range(0..es.len())];
                    let ends = g.ends(e);
                    g.delete_edge(e).unwrap();
                    f.notify_dirty(ends);
                }
                let mut fresh = BcForest::build(&g);
                assert_eq!(f.snapshot(&g), fresh.snapshot(&g));
            }
        }
    }
}
