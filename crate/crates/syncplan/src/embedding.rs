//! Planarity machinery: embedding trees via vertex addition, and planar
//! embedding extraction via iterative face insertion.
//!
//! The vertex-addition test processes the vertices of a biconnected subgraph
//! in an st-order whose last vertex is the target; the PC-tree surviving all
//! reductions is the embedding tree of that vertex. Embedding extraction uses
//! the face-insertion method: grow an embedded subgraph from a cycle, placing
//! one fragment path per step into a face containing all its attachments.
//! The two routes are independent and cross-check each other in tests.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::graph::{Dart, EdgeId, Inc, MultiGraph, VertexId};
use crate::pctree::{Label, PcTree};

/// Embedding tree of a vertex: admissible cyclic orders of the tree equal the
/// realizable rotations. `leaf_inc[label]` maps tree leaves to incidences.
#[derive(Clone, Debug)]
pub struct EmbeddingTree {
    pub tree: PcTree,
    pub leaf_inc: Vec<Inc>,
}

impl EmbeddingTree {
    pub fn is_trivial(&self) -> bool {
        self.tree.is_trivial()
    }

    /// Admissible cyclic orders translated to incidence sequences, rotated so
    /// the minimal incidence leads (canonical for set comparison).
    pub fn admissible_inc_orders(&self) -> std::collections::BTreeSet<Vec<Inc>> {
        self.tree
            .admissible_orders()
            .into_iter()
            .map(|o| {
                let seq: Vec<Inc> = o.iter().map(|&l| self.leaf_inc[l as usize]).collect();
                let pos = seq
                    .iter()
                    .enumerate()
                    .min_by_key(|&(_, i)| *i)
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                (0..seq.len()).map(|k| seq[(pos + k) % seq.len()]).collect()
            })
            .collect()
    }
}

/// st-order of the subgraph induced by `edges`: starts at `s`, ends at `t`,
/// every interior vertex has both an earlier and a later neighbour. Requires
/// the subgraph to be biconnected with an s-t edge present.
pub fn st_order(g: &MultiGraph, edges: &[EdgeId], s: VertexId, t: VertexId) -> Option<Vec<VertexId>> {
    // adjacency restricted to the subgraph
    let mut adj: HashMap<VertexId, Vec<(EdgeId, VertexId)>> = HashMap::new();
    for &e in edges {
        let [a, b] = g.ends(e);
        adj.entry(a).or_default().push((e, b));
        adj.entry(b).or_default().push((e, a));
    }
    let n = adj.len();
    if n == 2 {
        return Some(vec![s, t]);
    }

    // DFS from s traversing (s, t) first.
    let mut pre: HashMap<VertexId, usize> = HashMap::new();
    let mut low: HashMap<VertexId, usize> = HashMap::new();
    let mut parent: HashMap<VertexId, VertexId> = HashMap::new();
    let mut parent_edge: HashMap<VertexId, EdgeId> = HashMap::new();
    {
        // order neighbour lists so that t comes first at s
        if let Some(list) = adj.get_mut(&s) {
            list.sort_by_key(|&(_, w)| if w == t { 0 } else { 1 });
        }
        let mut stack: Vec<(VertexId, usize)> = vec![(s, 0)];
        pre.insert(s, 0);
        low.insert(s, 0);
        let mut timer = 1usize;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < adj[&v].len() {
                let (e, w) = adj[&v][*i];
                *i += 1;
                if parent_edge.get(&v) == Some(&e) {
                    continue;
                }
                if let Some(&pw) = pre.get(&w) {
                    let lv = low[&v].min(pw);
                    low.insert(v, lv);
                } else {
                    pre.insert(w, timer);
                    low.insert(w, timer);
                    timer += 1;
                    parent.insert(w, v);
                    parent_edge.insert(w, e);
                    stack.push((w, 0));
                }
            } else {
                stack.pop();
                if let Some(&p) = parent.get(&v) {
                    let lv = low[&v];
                    let lp = low[&p].min(lv);
                    low.insert(p, lp);
                }
            }
        }
        if pre.len() != n {
            return None; // not connected
        }
    }

    // Pathfinder st-numbering (Even-Tarjan).
    let mut old_vert: HashSet<VertexId> = [s, t].into_iter().collect();
    let mut old_edge: HashSet<EdgeId> = HashSet::new();
    // mark the tree edge (s,t)
    if let Some((e, _)) = adj[&s].iter().find(|&&(e, w)| w == t && parent_edge.get(&t) == Some(&e)) {
        old_edge.insert(*e);
    }
    let mut order: Vec<VertexId> = Vec::with_capacity(n);
    let mut stack: Vec<VertexId> = vec![t, s];
    while let Some(v) = stack.pop() {
        // find a new path starting at v
        let mut path: Vec<VertexId> = Vec::new();
        for &(e, w) in &adj[&v] {
            if old_edge.contains(&e) {
                continue;
            }
            if parent.get(&w) == Some(&v) && parent_edge.get(&w) == Some(&e) {
                // tree edge down: follow low values to an old vertex
                old_edge.insert(e);
                path.push(v);
                let mut cur = w;
                loop {
                    path.push(cur);
                    if old_vert.contains(&cur) {
                        break;
                    }
                    old_vert.insert(cur);
                    // move towards low[cur]: either a back edge achieving it
                    // or the tree child that inherits it
                    let lc = low[&cur];
                    let mut moved = false;
                    for &(e2, x) in &adj[&cur] {
                        if old_edge.contains(&e2) || parent_edge.get(&cur) == Some(&e2) {
                            continue;
                        }
                        let is_tree_child = parent.get(&x) == Some(&cur) && parent_edge.get(&x) == Some(&e2);
                        if is_tree_child && low.get(&x) == Some(&lc) {
                            old_edge.insert(e2);
                            cur = x;
                            moved = true;
                            break;
                        }
                        if !is_tree_child && pre.get(&x) == Some(&lc) && pre[&x] < pre[&cur] {
                            old_edge.insert(e2);
                            cur = x;
                            moved = true;
                            break;
                        }
                    }
                    if !moved {
                        return None;
                    }
                }
                break;
            } else if pre.get(&w).copied().unwrap_or(usize::MAX) < pre[&v]
                && parent_edge.get(&v) != Some(&e)
            {
                // back edge up: two-vertex path
                old_edge.insert(e);
                path.push(v);
                path.push(w);
                break;
            } else if pre.get(&w).copied().unwrap_or(0) > pre[&v] && parent.get(&w) != Some(&v) {
                // back edge down: climb tree edges to an old vertex
                old_edge.insert(e);
                path.push(v);
                let mut cur = w;
                loop {
                    path.push(cur);
                    if old_vert.contains(&cur) {
                        break;
                    }
                    old_vert.insert(cur);
                    let p = parent[&cur];
                    let pe = parent_edge[&cur];
                    old_edge.insert(pe);
                    cur = p;
                }
                break;
            }
        }
        if path.is_empty() {
            order.push(v);
        } else {
            // push interior vertices then v back on top
            for &x in path[1..path.len() - 1].iter().rev() {
                stack.push(x);
            }
            stack.push(v);
        }
    }

    if order.len() != n || order.first() != Some(&s) || order.last() != Some(&t) {
        return None;
    }
    // verify the st-property
    let rank: HashMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && !adj[&v].iter().any(|&(_, w)| rank[&w] < i) {
            return None;
        }
        if i + 1 < n && !adj[&v].iter().any(|&(_, w)| rank[&w] > i) {
            return None;
        }
    }
    Some(order)
}

/// Embedding tree of `target` within the biconnected subgraph induced by
/// `edges`. `None` when the subgraph is nonplanar.
pub fn vertex_addition_tree(
    g: &MultiGraph,
    edges: &[EdgeId],
    target: VertexId,
) -> Option<EmbeddingTree> {
    debug_assert!(!edges.is_empty());
    if edges.len() == 1 {
        let e = edges[0];
        let inc = g.inc_at(target, e).expect("target on its block edge");
        return Some(EmbeddingTree { tree: PcTree::new_universal(&[0]), leaf_inc: vec![inc] });
    }
    // pick s adjacent to target within the subgraph
    let first = edges
        .iter()
        .find(|&&e| g.ends(e).contains(&target))
        .copied()
        .expect("target incident to the block");
    let s = g.ends(first).iter().copied().find(|&x| x != target).unwrap();
    let order = st_order(g, edges, s, target)?;

    let rank: HashMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edge_set: HashSet<EdgeId> = edges.iter().copied().collect();

    // labels: one per edge of the subgraph, assigned lazily
    let mut label_of: HashMap<EdgeId, Label> = HashMap::new();
    let mut next_label: Label = 0;
    let mut alloc = |e: EdgeId, label_of: &mut HashMap<EdgeId, Label>, next: &mut Label| -> Label {
        *label_of.entry(e).or_insert_with(|| {
            let l = *next;
            *next += 1;
            l
        })
    };

    // initial bush: the edges of s into later vertices
    let s_up: Vec<EdgeId> = g
        .rotation(s)
        .iter()
        .filter(|i| edge_set.contains(&i.edge))
        .map(|i| i.edge)
        .collect();
    let init: Vec<Label> = s_up.iter().map(|&e| alloc(e, &mut label_of, &mut next_label)).collect();
    let mut tree = PcTree::new_universal(&init);

    for (i, &u) in order.iter().enumerate().skip(1) {
        let down: Vec<Label> = g
            .rotation(u)
            .iter()
            .filter(|inc| edge_set.contains(&inc.edge))
            .filter(|inc| rank[&g.inc_other(**inc)] < i)
            .map(|inc| label_of[&inc.edge])
            .collect();
        if u == target {
            debug_assert_eq!(down.len(), tree.n_leaves());
            // translate labels back to incidences of the target
            let mut leaf_inc = vec![Inc::new(EdgeId(0), 0); next_label as usize];
            for inc in g.rotation(u) {
                if let Some(&l) = label_of.get(&inc.edge) {
                    leaf_inc[l as usize] = *inc;
                }
            }
            return Some(EmbeddingTree { tree, leaf_inc });
        }
        let block = match tree.restrict_block(&down) {
            Ok(Some(b)) => b,
            _ => return None,
        };
        let up: Vec<Label> = g
            .rotation(u)
            .iter()
            .filter(|inc| edge_set.contains(&inc.edge))
            .filter(|inc| rank[&g.inc_other(**inc)] > i)
            .map(|inc| alloc(inc.edge, &mut label_of, &mut next_label))
            .collect();
        debug_assert!(!up.is_empty(), "st-order guarantees a later neighbour");
        tree.replace_block(&block, &up);
    }
    unreachable!("target is the last vertex of the st-order")
}

/// Embedding tree of `v` over all planar embeddings of its connected
/// component. `None` iff the component is nonplanar.
///
/// For a block-vertex the tree is exact. For a cut-vertex the per-block trees
/// are combined under a central P-node; that tree is sound (every admissible
/// order is realizable) but omits realizable orders that nest one block
/// inside another's angles, which no tree topology can express. The solver
/// only requests trees of block-vertices.
pub fn planar_embedding_tree(g: &MultiGraph, v: VertexId) -> Option<EmbeddingTree> {
    let comp = g.component_of(v);
    let mut bc = crate::bc::BcForest::new();
    // planarity of the whole component
    let mut blocks_all: Vec<crate::bc::BlockId> = Vec::new();
    for &u in &comp {
        for b in bc.blocks_of(g, u) {
            if !blocks_all.contains(&b) {
                blocks_all.push(b);
            }
        }
    }
    let mut trees_of_v: Vec<EmbeddingTree> = Vec::new();
    for b in blocks_all {
        let info = bc.block_info(b).clone();
        let tgt = if info.verts.contains(&v) { v } else { info.verts[0] };
        let t = vertex_addition_tree(g, &info.edges, tgt)?;
        if info.verts.contains(&v) {
            trees_of_v.push(t);
        }
    }
    match trees_of_v.len() {
        0 => Some(EmbeddingTree { tree: PcTree::new_universal(&[]), leaf_inc: Vec::new() }),
        1 => Some(trees_of_v.pop().unwrap()),
        _ => {
            // cut-vertex: blocks side by side under a P-node
            let mut shapes = Vec::new();
            let mut leaf_inc = Vec::new();
            for t in trees_of_v {
                let offset = leaf_inc.len() as Label;
                shapes.push(shift_shape(&tree_shape(&t.tree), offset));
                leaf_inc.extend(t.leaf_inc);
            }
            let tree = PcTree::from_shape(&crate::pctree::Shape::P(shapes));
            Some(EmbeddingTree { tree, leaf_inc })
        }
    }
}

fn tree_shape(t: &PcTree) -> crate::pctree::Shape {
    // round-trip through the debug form is avoided: rebuild via orders is
    // wasteful, so expose the structure through admissible API instead.
    // Parse from Display output.
    parse_shape(&t.to_string()).0
}

fn parse_shape(s: &str) -> (crate::pctree::Shape, usize) {
    use crate::pctree::Shape;
    fn parse_at(b: &[u8], mut i: usize) -> (Shape, usize) {
        match b[i] {
            b'(' | b'[' => {
                let close = if b[i] == b'(' { b')' } else { b']' };
                let p = b[i] == b'(';
                i += 1;
                let mut kids = Vec::new();
                while b[i] != close {
                    if b[i] == b' ' {
                        i += 1;
                        continue;
                    }
                    let (k, ni) = parse_at(b, i);
                    kids.push(k);
                    i = ni;
                }
                (if p { Shape::P(kids) } else { Shape::C(kids) }, i + 1)
            }
            _ => {
                let mut l: Label = 0;
                let mut j = i;
                while j < b.len() && b[j].is_ascii_digit() {
                    l = l * 10 + (b[j] - b'0') as Label;
                    j += 1;
                }
                (Shape::Leaf(l), j)
            }
        }
    }
    parse_at(s.as_bytes(), 0)
}

fn shift_shape(s: &crate::pctree::Shape, offset: Label) -> crate::pctree::Shape {
    use crate::pctree::Shape;
    match s {
        Shape::Leaf(l) => Shape::Leaf(l + offset),
        Shape::P(ks) => Shape::P(ks.iter().map(|k| shift_shape(k, offset)).collect()),
        Shape::C(ks) => Shape::C(ks.iter().map(|k| shift_shape(k, offset)).collect()),
    }
}

// ---------------------------------------------------------------------
// Planar embedding extraction (face insertion)
// ---------------------------------------------------------------------

/// Planar rotation system for the biconnected subgraph induced by `edges`, or
/// None if it is nonplanar. Rotations are returned only for the subgraph's
/// vertices and contain only subgraph edges.
pub fn embed_block(g: &MultiGraph, edges: &[EdgeId]) -> Option<HashMap<VertexId, Vec<Inc>>> {
    let edge_set: HashSet<EdgeId> = edges.iter().copied().collect();
    let mut verts: HashSet<VertexId> = HashSet::new();
    for &e in edges {
        let [a, b] = g.ends(e);
        verts.insert(a);
        verts.insert(b);
    }
    if edges.len() == 1 {
        let e = edges[0];
        let [a, b] = g.ends(e);
        return Some(
            [(a, vec![Inc::new(e, 0)]), (b, vec![Inc::new(e, 1)])].into_iter().collect(),
        );
    }

    // initial cycle through an arbitrary edge
    let start = edges[0];
    let [sa, sb] = g.ends(start);
    let cycle = find_cycle_through(g, &edge_set, start)?;
    let _ = (sa, sb);

    // embedded state: rotations + set of embedded edges
    let mut rot: HashMap<VertexId, Vec<Inc>> = HashMap::new();
    let mut embedded: HashSet<EdgeId> = HashSet::new();
    {
        // cycle = list of (vertex, edge to next)
        let m = cycle.len();
        for i in 0..m {
            let (v, e_next) = cycle[i];
            let e_prev = cycle[(i + m - 1) % m].1;
            let inc_next = g.inc_at(v, e_next).unwrap();
            let inc_prev = g.inc_at(v, e_prev).unwrap();
            if e_next == e_prev {
                // 2-cycle through parallel edges
                rot.insert(v, vec![inc_next]);
            } else {
                rot.insert(v, vec![inc_prev, inc_next]);
            }
            embedded.insert(e_next);
        }
        // fix the parallel 2-cycle case: both edges at each endpoint
        if m == 2 {
            let (v0, e0) = cycle[0];
            let (v1, e1) = cycle[1];
            rot.insert(v0, vec![g.inc_at(v0, e0).unwrap(), g.inc_at(v0, e1).unwrap()]);
            rot.insert(v1, vec![g.inc_at(v1, e0).unwrap(), g.inc_at(v1, e1).unwrap()]);
            embedded.insert(e0);
            embedded.insert(e1);
        }
    }

    while embedded.len() < edges.len() {
        // faces of the embedded subgraph
        let faces = trace_faces_partial(g, &rot);
        let face_verts: Vec<HashSet<VertexId>> = faces
            .iter()
            .map(|f| {
                f.iter()
                    .flat_map(|d| {
                        let [a, b] = g.ends(d.edge);
                        [a, b]
                    })
                    .collect()
            })
            .collect();

        // fragments: single unembedded edges between embedded vertices, or
        // components of (subgraph - embedded vertices) plus attachments
        struct Fragment {
            attachments: Vec<VertexId>,
            inner: Vec<VertexId>,
            seed_edge: EdgeId,
        }
        let mut fragments: Vec<Fragment> = Vec::new();
        let mut assigned: HashSet<VertexId> = HashSet::new();
        for &e in edges {
            if embedded.contains(&e) {
                continue;
            }
            let [a, b] = g.ends(e);
            if rot.contains_key(&a) && rot.contains_key(&b) {
                fragments.push(Fragment { attachments: vec![a, b], inner: vec![], seed_edge: e });
            }
        }
        for &v in &verts {
            if rot.contains_key(&v) || assigned.contains(&v) {
                continue;
            }
            // flood the unembedded component of v
            let mut inner = Vec::new();
            let mut attach: HashSet<VertexId> = HashSet::new();
            let mut seed = None;
            let mut q = VecDeque::new();
            q.push_back(v);
            assigned.insert(v);
            while let Some(x) = q.pop_front() {
                inner.push(x);
                for inc in g.rotation(x) {
                    if !edge_set.contains(&inc.edge) {
                        continue;
                    }
                    let w = g.inc_other(*inc);
                    if rot.contains_key(&w) {
                        attach.insert(w);
                        seed = seed.or(Some(inc.edge));
                    } else if assigned.insert(w) {
                        q.push_back(w);
                    }
                }
            }
            let mut attachments: Vec<VertexId> = attach.into_iter().collect();
            attachments.sort_unstable();
            fragments.push(Fragment { attachments, inner, seed_edge: seed.expect("attached") });
        }

        // admissible faces per fragment
        let mut best: Option<(usize, Vec<usize>)> = None;
        for (fi, fr) in fragments.iter().enumerate() {
            let adm: Vec<usize> = face_verts
                .iter()
                .enumerate()
                .filter(|(_, fv)| fr.attachments.iter().all(|a| fv.contains(a)))
                .map(|(i, _)| i)
                .collect();
            if adm.is_empty() {
                return None;
            }
            let better = match &best {
                None => true,
                Some((bi, badm)) => {
                    adm.len() < badm.len() || (adm.len() == badm.len() && fi < *bi)
                }
            };
            if better {
                best = Some((fi, adm));
            }
        }
        let (fi, adm) = best.expect("fragments exist while edges remain");
        let fragment = &fragments[fi];
        let face = &faces[adm[0]];

        // a path through the fragment between two attachments
        let path_edges: Vec<EdgeId>;
        let path_verts: Vec<VertexId>;
        if fragment.inner.is_empty() {
            path_edges = vec![fragment.seed_edge];
            let [a, b] = g.ends(fragment.seed_edge);
            path_verts = vec![a, b];
        } else {
            // BFS from one attachment through inner vertices to another
            let a0 = fragment.attachments[0];
            let inner_set: HashSet<VertexId> = fragment.inner.iter().copied().collect();
            let mut prev: HashMap<VertexId, (VertexId, EdgeId)> = HashMap::new();
            let mut q = VecDeque::new();
            let mut goal = None;
            'bfs: {
                for inc in g.rotation(a0) {
                    if !edge_set.contains(&inc.edge) {
                        continue;
                    }
                    let w = g.inc_other(*inc);
                    if inner_set.contains(&w) && !prev.contains_key(&w) {
                        prev.insert(w, (a0, inc.edge));
                        q.push_back(w);
                    }
                }
                while let Some(x) = q.pop_front() {
                    for inc in g.rotation(x) {
                        if !edge_set.contains(&inc.edge) {
                            continue;
                        }
                        let w = g.inc_other(*inc);
                        if w == a0 {
                            continue;
                        }
                        if rot.contains_key(&w) {
                            goal = Some((x, w, inc.edge));
                            break 'bfs;
                        }
                        if inner_set.contains(&w) && !prev.contains_key(&w) {
                            prev.insert(w, (x, inc.edge));
                            q.push_back(w);
                        }
                    }
                }
            }
            let (last_inner, b_att, last_edge) = goal?;
            let mut pe = vec![last_edge];
            let mut pv = vec![b_att, last_inner];
            let mut cur = last_inner;
            while cur != a0 {
                let (p, e) = prev[&cur];
                pe.push(e);
                pv.push(p);
                cur = p;
            }
            pv.reverse();
            pe.reverse();
            path_verts = pv;
            path_edges = pe;
        }

        // insert the path into the chosen face
        let a = path_verts[0];
        let b = *path_verts.last().unwrap();
        let pos_a = face
            .iter()
            .position(|d| arriving_vertex(g, *d) == a)
            .expect("attachment on face");
        let pos_b = face
            .iter()
            .position(|d| arriving_vertex(g, *d) == b)
            .expect("attachment on face");
        // arriving dart at a: the new edge goes right after the arriving
        // incidence in rot(a)
        let insert_after = |rot: &mut HashMap<VertexId, Vec<Inc>>, v: VertexId, after: Inc, what: Inc| {
            let r = rot.get_mut(&v).unwrap();
            let p = r.iter().position(|&i| i == after).unwrap();
            r.insert(p + 1, what);
        };
        let first_e = path_edges[0];
        let last_e = *path_edges.last().unwrap();
        let arr_a = Inc::new(face[pos_a].edge, 1 - face[pos_a].dir);
        debug_assert_eq!(g.inc_vertex(arr_a), a);
        insert_after(&mut rot, a, arr_a, g.inc_at(a, first_e).unwrap());
        let arr_b = Inc::new(face[pos_b].edge, 1 - face[pos_b].dir);
        debug_assert_eq!(g.inc_vertex(arr_b), b);
        insert_after(&mut rot, b, arr_b, g.inc_at(b, last_e).unwrap());
        for w in 1..path_verts.len() - 1 {
            let v = path_verts[w];
            let e_in = path_edges[w - 1];
            let e_out = path_edges[w];
            rot.insert(v, vec![g.inc_at(v, e_in).unwrap(), g.inc_at(v, e_out).unwrap()]);
        }
        for e in path_edges {
            embedded.insert(e);
        }
    }

    Some(rot)
}

fn arriving_vertex(g: &MultiGraph, d: Dart) -> VertexId {
    g.ends(d.edge)[1 - d.dir as usize]
}

/// Face walk restricted to the embedded subgraph described by `rot`.
fn trace_faces_partial(g: &MultiGraph, rot: &HashMap<VertexId, Vec<Inc>>) -> Vec<Vec<Dart>> {
    let mut next_out: HashMap<Inc, Inc> = HashMap::new();
    for (_, r) in rot.iter() {
        let d = r.len();
        for i in 0..d {
            next_out.insert(r[i], r[(i + 1) % d]);
        }
    }
    let mut seen: HashSet<Dart> = HashSet::new();
    let mut faces = Vec::new();
    for (_, r) in rot.iter() {
        for inc in r {
            for dir in 0..2u8 {
                let start = Dart { edge: inc.edge, dir };
                if seen.contains(&start) {
                    continue;
                }
                let mut walk = Vec::new();
                let mut cur = start;
                loop {
                    seen.insert(cur);
                    walk.push(cur);
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
    }
    faces
}

/// Any cycle through `start` within the subgraph (exists by biconnectivity).
/// Returned as (vertex, edge to the next vertex) pairs.
fn find_cycle_through(
    g: &MultiGraph,
    edge_set: &HashSet<EdgeId>,
    start: EdgeId,
) -> Option<Vec<(VertexId, EdgeId)>> {
    let [a, b] = g.ends(start);
    // path from b back to a avoiding `start`
    let mut prev: HashMap<VertexId, (VertexId, EdgeId)> = HashMap::new();
    let mut q = VecDeque::new();
    q.push_back(b);
    while let Some(x) = q.pop_front() {
        if x == a {
            break;
        }
        for inc in g.rotation(x) {
            if inc.edge == start || !edge_set.contains(&inc.edge) {
                continue;
            }
            let w = g.inc_other(*inc);
            if w != b && !prev.contains_key(&w) {
                prev.insert(w, (x, inc.edge));
                q.push_back(w);
            }
        }
    }
    if !prev.contains_key(&a) {
        return None;
    }
    let mut walk = vec![(a, start)];
    let mut cur = a;
    let mut back = Vec::new();
    while cur != b {
        let (p, e) = prev[&cur];
        back.push((cur, e));
        cur = p;
    }
    // back holds (vertex, edge towards b) from a; we need b -> ... -> a
    let mut path: Vec<(VertexId, EdgeId)> = Vec::new();
    let mut v = b;
    for (w, e) in back.iter().rev() {
        path.push((v, *e));
        v = *w;
    }
    walk.extend(path);
    Some(walk)
}

/// Planar rotation system of the whole graph: per block via face insertion,
/// glued at cut-vertices by concatenation. None iff some block is nonplanar.
pub fn planar_embed(g: &MultiGraph) -> Option<HashMap<VertexId, Vec<Inc>>> {
    let mut bc = crate::bc::BcForest::new();
    let mut out: HashMap<VertexId, Vec<Inc>> = g.vertex_ids().map(|v| (v, Vec::new())).collect();
    let mut done_blocks: HashSet<crate::bc::BlockId> = HashSet::new();
    let verts: Vec<VertexId> = g.vertex_ids().collect();
    for v in verts {
        for b in bc.blocks_of(g, v) {
            if !done_blocks.insert(b) {
                continue;
            }
            let info = bc.block_info(b).clone();
            let rot = embed_block(g, &info.edges)?;
            for (w, r) in rot {
                out.get_mut(&w).unwrap().extend(r);
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::for_each_rotation_system;
    use crate::pctree::canonical_cycle;
    use std::collections::BTreeSet;

    fn complete(n: usize) -> MultiGraph {
        let mut g = MultiGraph::new();
        let vs: Vec<VertexId> = (0..n).map(|_| g.add_vertex()).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                g.add_edge(vs[i], vs[j]).unwrap();
            }
        }
        g
    }

    fn theta() -> (MultiGraph, VertexId, VertexId) {
        // poles joined by three length-2 paths
        let mut g = MultiGraph::new();
        let u = g.add_vertex();
        let v = g.add_vertex();
        for _ in 0..3 {
            let m = g.add_vertex();
            g.add_edge(u, m).unwrap();
            g.add_edge(m, v).unwrap();
        }
        (g, u, v)
    }

    /// Realizable rotations of `v` by brute force over rotation systems.
    fn brute_rotations(g: &MultiGraph, v: VertexId) -> BTreeSet<Vec<u32>> {
        let mut out = BTreeSet::new();
        let mut w = g.clone();
        for_each_rotation_system(&mut w, &mut |cand| {
            if cand.is_planar_embedding() {
                let r: Vec<u32> = cand.rotation(v).iter().map(|i| i.edge.0).collect();
                out.insert(canonical_cycle(&r));
            }
            false
        });
        out
    }

    fn tree_rotations(t: &EmbeddingTree) -> BTreeSet<Vec<u32>> {
        t.admissible_inc_orders()
            .into_iter()
            .map(|o| {
                let r: Vec<u32> = o.iter().map(|i| i.edge.0).collect();
                canonical_cycle(&r)
            })
            .collect()
    }

    #[test]
    fn k5_has_no_tree() {
        let g = complete(5);
        let v = g.vertex_ids().next().unwrap();
        assert!(planar_embedding_tree(&g, v).is_none());
    }

    #[test]
    fn k4_tree_is_rigid() {
        // a degree-3 rigid vertex admits exactly its rotation and the
        // reflection, which at 3 leaves is every cyclic order: the canonical
        // form is a single P-node
        let g = complete(4);
        for v in g.vertex_ids() {
            let t = planar_embedding_tree(&g, v).expect("K4 planar");
            assert_eq!(t.tree.count_admissible(), 2);
            assert_eq!(tree_rotations(&t), brute_rotations(&g, v));
        }
    }

    #[test]
    fn octahedron_tree_is_a_real_c_node() {
        // 4-regular triconnected: a degree-4 vertex is fixed up to
        // reflection, 2 of the 6 cyclic orders
        let mut g = MultiGraph::new();
        let vs: Vec<VertexId> = (0..6).map(|_| g.add_vertex()).collect();
        for i in 0..6 {
            for j in (i + 1)..6 {
                // octahedron = K6 minus a perfect matching (0-1, 2-3, 4-5)
                if !(j == i + 1 && i % 2 == 0) {
                    g.add_edge(vs[i], vs[j]).unwrap();
                }
            }
        }
        for v in g.vertex_ids() {
            let t = planar_embedding_tree(&g, v).expect("octahedron planar");
            assert!(!t.is_trivial());
            assert_eq!(t.tree.count_admissible(), 2);
            assert_eq!(tree_rotations(&t), brute_rotations(&g, v));
        }
    }

    #[test]
    fn theta_pole_is_free() {
        let (g, u, _) = theta();
        let t = planar_embedding_tree(&g, u).expect("theta planar");
        assert!(t.is_trivial());
        assert_eq!(tree_rotations(&t), brute_rotations(&g, u));
    }

    #[test]
    fn st_order_on_random_biconnected() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _case in 0..60 {
            let n = rng.gen_range(3..9);
            let mut g = MultiGraph::new();
            let vs: Vec<VertexId> = (0..n).map(|_| g.add_vertex()).collect();
            // random Hamiltonian-ish cycle plus chords: biconnected
            for i in 0..n {
                g.add_edge(vs[i], vs[(i + 1) % n]).unwrap();
            }
            for _ in 0..rng.gen_range(0..=n) {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a != b {
                    g.add_edge(vs[a], vs[b]).unwrap();
                }
            }
            let edges: Vec<EdgeId> = g.edge_ids().collect();
            let e0 = edges[rng.gen_range(0..edges.len())];
            let [s, t] = g.ends(e0);
            let order = st_order(&g, &edges, s, t).expect("biconnected has an st-order");
            assert_eq!(order.len(), n);
        }
    }

    /// Cross-oracle: for random planar biconnected graphs, embedding trees
    /// match the brute-force realizable rotation sets at every vertex, and
    /// the face-insertion embedder yields a planar rotation system.
    #[test]
    fn embedding_tree_matches_oracle_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut done = 0;
        while done < 25 {
            let n = rng.gen_range(4..8);
            let mut g = MultiGraph::new();
            let vs: Vec<VertexId> = (0..n).map(|_| g.add_vertex()).collect();
            for i in 0..n {
                g.add_edge(vs[i], vs[(i + 1) % n]).unwrap();
            }
            for _ in 0..rng.gen_range(1..=3) {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a != b {
                    g.add_edge(vs[a], vs[b]).unwrap();
                }
            }
            let edges: Vec<EdgeId> = g.edge_ids().collect();
            let planar_by_brute = {
                let mut w = g.clone();
                for_each_rotation_system(&mut w, &mut |cand| cand.is_planar_embedding())
            };
            let t0 = vertex_addition_tree(&g, &edges, vs[0]);
            assert_eq!(t0.is_some(), planar_by_brute, "planarity verdicts disagree");
            let emb = embed_block(&g, &edges);
            assert_eq!(emb.is_some(), planar_by_brute, "face insertion disagrees");
            if !planar_by_brute {
                continue;
            }
            if let Some(rot) = emb {
                let mut h = g.clone();
                for (v, r) in rot {
                    h.set_rotation(v, r);
                }
                assert!(h.is_planar_embedding(), "face insertion must be planar");
            }
            for &v in &vs {
                let t = planar_embedding_tree(&g, v).expect("planar");
                assert_eq!(tree_rotations(&t), brute_rotations(&g, v), "vertex {v:?} of {g:?}");
            }
            done += 1;
        }
    }
}
