//! The reduction operations and their undo records.
//!
//! Orientation bookkeeping: a pipe constraint reads
//! rot(v) == rev^flip(bij(rot(u))). Welding two vertices (identifying their
//! edges) is exact for flip == true; equality pipes are normalized by
//! reflecting the partner component, which is separate at every weld site.
//! The structural relation behind all parallel reasoning: the two poles of a
//! bundle of strips see the strip order reversed relative to each other.

use std::collections::{HashMap, HashSet};

use crate::graph::{EdgeId, IdentifyRecord, Inc, VertexId};
use crate::pctree::NodeKind;

use super::instance::{Instance, Pipe, PipeId, QSync, QVertex};

#[derive(Clone, Debug)]
pub enum UndoOp {
    EncapsulateJoin(EncJoinRec),
    Propagate(PropagateRec),
    SimplifyFree(SimplifyFreeRec),
    SimplifyQ(SimplifyQRec),
    SimplifyShort(SimplifyShortRec),
    SimplifyMatch(SimplifyMatchRec),
    JoinBlocks(JoinBlocksRec),
    Wheel(WheelRec),
}

#[derive(Clone, Debug)]
pub struct GroupRec {
    pub copy: VertexId,
    pub collapsed: VertexId,
    pub orig_incs: Vec<Inc>,
    pub star_edges: Vec<EdgeId>,
    pub pipe: Option<PipeId>,
}

#[derive(Clone, Debug)]
pub struct SideRec {
    pub center: VertexId,
    pub star_center: VertexId,
    pub groups: Vec<GroupRec>,
}

#[derive(Clone, Debug)]
pub struct EncJoinRec {
    pub pipe_id: PipeId,
    pub pipe: Pipe,
    pub u_side: SideRec,
    pub v_side: SideRec,
    pub reflected: Option<Vec<VertexId>>,
    pub identify: IdentifyRecord,
}

#[derive(Clone, Debug)]
pub struct GadgetRec {
    pub orig: VertexId,
    pub verts: Vec<VertexId>,
    pub leaf_attach: Vec<(Inc, VertexId)>,
    pub tree_edges: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct PropagateRec {
    pub pipe_id: PipeId,
    pub pipe: Pipe,
    pub u_side: GadgetRec,
    pub v_side: GadgetRec,
    pub new_pipes: Vec<PipeId>,
    pub n_qsync: usize,
    pub q_added: Vec<VertexId>,
}

/// The defining parallel of a trivial-tree block-vertex `u`: other pole `w`,
/// one part per edge of `u`.
#[derive(Clone, Debug)]
pub struct ParallelInfo {
    pub u: VertexId,
    pub w: VertexId,
    /// per part: the u-incidence and all w-incidences of that part
    pub parts: Vec<(Inc, Vec<Inc>)>,
}

#[derive(Clone, Debug)]
pub struct SimplifyFreeRec {
    pub pipe_id: PipeId,
    pub pipe: Pipe,
    pub par: ParallelInfo,
    /// which endpoint of the pipe is the parallel pole u
    pub endpoint_is_u: bool,
}

#[derive(Clone, Debug)]
pub struct SimplifyQRec {
    pub pipe_id: PipeId,
    pub pipe: Pipe,
    pub par: ParallelInfo,
    pub endpoint_is_u: bool,
    pub partner: VertexId,
}

#[derive(Clone, Debug)]
pub struct SimplifyShortRec {
    pub pipe_id: PipeId,
    pub pipe: Pipe,
    pub other_id: PipeId,
    pub other: Pipe,
    pub new_pipe: Option<PipeId>,
    pub par: ParallelInfo,
    pub endpoint_is_u: bool,
}

#[derive(Clone, Debug)]
pub struct SimplifyMatchRec {
    pub pipe_id: PipeId,
    pub pipe: Pipe,
    pub par: ParallelInfo,
    pub endpoint_is_u: bool,
}

#[derive(Clone, Debug)]
pub struct JoinBlocksRec {
    pub pipe_id: PipeId,
    pub pipe: Pipe,
    pub reflected: Option<Vec<VertexId>>,
    pub identify: IdentifyRecord,
    pub v_side: Vec<VertexId>,
}

#[derive(Clone, Debug)]
pub struct WheelRec {
    pub q: VertexId,
    pub ref_rot: Vec<Inc>,
    pub hub: VertexId,
    pub rim: Vec<VertexId>,
    pub rim_edges: Vec<EdgeId>,
    pub spokes: Vec<EdgeId>,
}

/// Outcome of trying to dispatch a simplify on a trivial endpoint.
pub enum SimplifyPlan {
    /// remove the pipe outright (free pole)
    Free(ParallelInfo),
    /// pole is synchronized: partner becomes synchronized too
    PoleIsQ(ParallelInfo),
    /// pole carries another pipe with a trivial tree: short-circuit
    Short(ParallelInfo, PipeId),
    /// the pipe matches the two poles of its own parallel
    Match(ParallelInfo),
    /// blocked by a higher-degree pipe at the pole
    Blocked(PipeId),
}

/// Reflects a set of vertices (mirror their rotations) and fixes the flip
/// bits/parities of every constraint with exactly one endpoint inside.
pub fn reflect_with_bookkeeping(inst: &mut Instance, verts: &[VertexId]) {
    inst.g.reflect(verts);
    let set: HashSet<VertexId> = verts.iter().copied().collect();
    for id in inst.live_pipes() {
        let p = inst.pipe(id);
        let cnt = usize::from(set.contains(&p.u)) + usize::from(set.contains(&p.v));
        if cnt == 1 {
            inst.flip_pipe(id);
        }
    }
    for qs in inst.qsync.iter_mut() {
        let cnt = usize::from(set.contains(&qs.a)) + usize::from(set.contains(&qs.b));
        if cnt == 1 {
            qs.parity = !qs.parity;
        }
    }
}

/// Groups the incidences of a cut-vertex by the connected component of
/// G - center their far end lies in, preserving rotation order inside each
/// group.
fn blocks_at_cut(inst: &Instance, center: VertexId) -> Vec<Vec<Inc>> {
    let g = &inst.g;
    let mut comp_of: HashMap<VertexId, usize> = HashMap::new();
    let mut n = 0usize;
    for inc in g.rotation(center) {
        let start = g.inc_other(*inc);
        if comp_of.contains_key(&start) {
            continue;
        }
        let c = n;
        n += 1;
        let mut stack = vec![start];
        comp_of.insert(start, c);
        while let Some(x) = stack.pop() {
            for i2 in g.rotation(x) {
                let w = g.inc_other(*i2);
                if w != center && !comp_of.contains_key(&w) {
                    comp_of.insert(w, c);
                    stack.push(w);
                }
            }
        }
    }
    let mut groups: Vec<Vec<Inc>> = vec![Vec::new(); n];
    for inc in g.rotation(center) {
        groups[comp_of[&g.inc_other(*inc)]].push(*inc);
    }
    groups.retain(|gr| !gr.is_empty());
    groups
}

/// Encapsulates one cut-vertex: split off each incident block as its own
/// component with a copy of the vertex, and rebuild the vertex as the center
/// of a star of collapsed-block bundles, pipe-synchronizing copies with their
/// bundles. Returns the star bijection origin: orig incidence -> star edge.
fn encapsulate_side(inst: &mut Instance, center: VertexId) -> (SideRec, HashMap<Inc, Inc>) {
    let groups = blocks_at_cut(inst, center);
    debug_assert!(groups.len() >= 2, "encapsulate requires a cut-vertex");
    let flat: Vec<Inc> = groups.iter().flatten().copied().collect();
    inst.g.set_rotation(center, flat);
    let copies = inst.g.split_vertex(center, &groups).expect("valid partition");

    let star_center = inst.g.add_vertex();
    let mut side = SideRec { center, star_center, groups: Vec::new() };
    let mut star_map: HashMap<Inc, Inc> = HashMap::new();
    for (j, group) in groups.iter().enumerate() {
        let copy = copies[j];
        let collapsed = inst.g.add_vertex();
        let mut star_edges = Vec::new();
        let mut bij = Vec::new();
        for &inc in group {
            let s = inst.g.add_edge(star_center, collapsed).expect("fresh edge");
            star_edges.push(s);
            star_map.insert(inc, Inc::new(s, 0));
            // copy's incidence pairs with the bundle slot at the collapsed
            // vertex; the bundle relation makes this a welding pipe
            bij.push((inc, Inc::new(s, 1)));
        }
        let pipe = inst.add_pipe(copy, collapsed, bij, true);
        side.groups.push(GroupRec {
            copy,
            collapsed,
            orig_incs: group.clone(),
            star_edges,
            pipe,
        });
    }
    (side, star_map)
}

/// EncapsulateAndJoin on a pipe between two cut-vertices.
pub fn encapsulate_and_join(inst: &mut Instance, pipe_id: PipeId) -> EncJoinRec {
    let pipe = inst.remove_pipe(pipe_id);
    let (u_side, u_map) = encapsulate_side(inst, pipe.u);
    let (v_side, v_map) = encapsulate_side(inst, pipe.v);

    // star-level bijection
    let star_bij: Vec<(Inc, Inc)> =
        pipe.bij.iter().map(|&(a, b)| (u_map[&a], v_map[&b])).collect();

    // welding needs the reversal relation
    let reflected = if !pipe.flip {
        let mut verts = vec![v_side.star_center];
        verts.extend(v_side.groups.iter().map(|gr| gr.collapsed));
        reflect_with_bookkeeping(inst, &verts);
        Some(verts)
    } else {
        None
    };

    let identify = inst
        .g
        .identify_edges(u_side.star_center, v_side.star_center, &star_bij)
        .expect("degree-matched weld");
    apply_merge_remap(inst, &identify);

    EncJoinRec { pipe_id, pipe, u_side, v_side, reflected, identify }
}

/// After identify_edges, other constraints referencing far-side edge slots
/// must follow the id substitution.
pub fn apply_merge_remap(inst: &mut Instance, rec: &IdentifyRecord) {
    let mut remap: HashMap<Inc, Inc> = HashMap::new();
    for m in &rec.merged {
        remap.insert(m.far_outer_inc, m.kept_new_inc);
    }
    inst.remap_incidences(&remap);
}

/// Direct join of a block-block pipe across components.
pub fn join_blocks(inst: &mut Instance, pipe_id: PipeId) -> JoinBlocksRec {
    let pipe = inst.remove_pipe(pipe_id);
    let v_comp = inst.g.component_of(pipe.v);
    debug_assert!(!v_comp.contains(&pipe.u), "join requires distinct components");
    let reflected = if !pipe.flip {
        reflect_with_bookkeeping(inst, &v_comp);
        Some(v_comp.clone())
    } else {
        None
    };
    let v_side: Vec<VertexId> = v_comp.into_iter().filter(|&x| x != pipe.v).collect();
    let identify =
        inst.g.identify_edges(pipe.u, pipe.v, &pipe.bij).expect("degree-matched weld");
    apply_merge_remap(inst, &identify);
    JoinBlocksRec { pipe_id, pipe, reflected, identify, v_side }
}

/// PropagatePQ: replace both pipe endpoints by the embedding tree of
/// `endpoint`, pipe-synchronizing P-node pairs and 2-SAT-synchronizing C-node
/// pairs. `tree` must be the (non-trivial) embedding tree of `endpoint`.
pub fn propagate(
    inst: &mut Instance,
    pipe_id: PipeId,
    endpoint: VertexId,
    tree: &crate::embedding::EmbeddingTree,
) -> PropagateRec {
    let pipe = inst.remove_pipe(pipe_id);
    let endpoint_is_u = endpoint == pipe.u;
    debug_assert!(endpoint_is_u || endpoint == pipe.v);
    let to_partner: HashMap<Inc, Inc> =
        if endpoint_is_u { pipe.map_u_to_v() } else { pipe.map_v_to_u() };
    let partner = pipe.other(endpoint);

    let (root, nodes) = tree.tree.view();
    let internals: Vec<usize> = nodes
        .iter()
        .filter(|n| n.alive && !matches!(n.kind, NodeKind::Leaf(_)))
        .map(|n| n.id)
        .collect();
    debug_assert!(!internals.is_empty());

    // builds one gadget; leaf_of maps tree leaf labels to the incidence that
    // must move onto the gadget
    let mut build = |inst: &mut Instance, orig: VertexId, leaf_of: &dyn Fn(u32) -> Inc| -> GadgetRec {
        let mut vert_of: HashMap<usize, VertexId> = HashMap::new();
        for &nid in &internals {
            vert_of.insert(nid, inst.g.add_vertex());
        }
        let mut tree_edges = Vec::new();
        let mut leaf_attach = Vec::new();
        // edge per (parent, child) over internal nodes; the rotation of each
        // gadget vertex lists child dirs in order and the parent dir last,
        // matching the C-node child-list convention
        let mut dir_edge: HashMap<(usize, usize), EdgeId> = HashMap::new();
        for &nid in &internals {
            let node = &nodes[nid];
            for &c in &node.children {
                if internals.contains(&c) {
                    let e = inst.g.add_edge(vert_of[&nid], vert_of[&c]).unwrap();
                    tree_edges.push(e);
                    dir_edge.insert((nid, c), e);
                    dir_edge.insert((c, nid), e);
                }
            }
        }
        // move leaves and build rotations
        for &nid in &internals {
            let node = &nodes[nid];
            let gv = vert_of[&nid];
            let mut rot: Vec<Inc> = Vec::new();
            for &c in &node.children {
                match nodes[c].kind {
                    NodeKind::Leaf(l) => {
                        let inc = leaf_of(l);
                        // reattach the incidence to the gadget vertex
                        inst.g.move_incidence(inc, gv);
                        leaf_attach.push((inc, gv));
                        rot.push(inc);
                    }
                    _ => {
                        let e = dir_edge[&(nid, c)];
                        rot.push(inst.g.inc_at(gv, e).unwrap());
                    }
                }
            }
            if let Some(p) = node.parent {
                let e = dir_edge[&(nid, p)];
                rot.push(inst.g.inc_at(gv, e).unwrap());
            }
            inst.g.set_rotation(gv, rot);
        }
        let _ = root;
        GadgetRec {
            orig,
            verts: internals.iter().map(|n| vert_of[n]).collect(),
            leaf_attach,
            tree_edges,
        }
    };

    let leaf_inc = tree.leaf_inc.clone();
    let u_side = build(inst, endpoint, &|l| leaf_inc[l as usize]);
    let v_side = build(inst, partner, &|l| to_partner[&leaf_inc[l as usize]]);
    inst.g.delete_vertex(endpoint).expect("endpoint drained");
    inst.g.delete_vertex(partner).expect("partner drained");

    // synchronize node pairs
    let mut new_pipes = Vec::new();
    let mut n_qsync = 0;
    let mut q_added = Vec::new();
    for (k, &nid) in internals.iter().enumerate() {
        let gu = u_side.verts[k];
        let gv = v_side.verts[k];
        match nodes[nid].kind {
            NodeKind::P => {
                // dir-wise bijection: same position in both rotations
                let ru = inst.g.rotation(gu).to_vec();
                let rv = inst.g.rotation(gv).to_vec();
                let bij: Vec<(Inc, Inc)> = ru.into_iter().zip(rv).collect();
                if let Some(id) = inst.add_pipe(gu, gv, bij, pipe.flip) {
                    new_pipes.push(id);
                }
            }
            NodeKind::C => {
                inst.qverts.insert(gu, QVertex { ref_rot: inst.g.rotation(gu).to_vec() });
                inst.qverts.insert(gv, QVertex { ref_rot: inst.g.rotation(gv).to_vec() });
                inst.qsync.push(QSync { a: gu, b: gv, parity: pipe.flip });
                n_qsync += 1;
                q_added.push(gu);
                q_added.push(gv);
            }
            NodeKind::Leaf(_) => unreachable!(),
        }
    }

    PropagateRec { pipe_id, pipe, u_side, v_side, new_pipes, n_qsync, q_added }
}

/// Finds the parallel that completely defines the rotation of a trivial-tree
/// block-vertex: the other pole and the per-edge parts.
pub fn defining_parallel(
    inst: &Instance,
    block_edges: &[EdgeId],
    u: VertexId,
) -> Option<ParallelInfo> {
    let g = &inst.g;
    let d = g.degree(u);
    debug_assert!(d >= 3);
    let u_edges: Vec<Inc> = g.rotation(u).to_vec();

    // bond block: all edges share both endpoints
    let w0 = g.inc_other(u_edges[0]);
    if u_edges.iter().all(|&i| g.inc_other(i) == w0) && block_edges.len() == d {
        let parts = u_edges
            .iter()
            .map(|&i| (i, vec![i.opposite()]))
            .collect();
        return Some(ParallelInfo { u, w: w0, parts });
    }

    let edge_set: HashSet<EdgeId> = block_edges.iter().copied().collect();
    // candidates: vertices on every path between two u-neighbours in B - u,
    // approximated by the first two distinct neighbours' cut path plus the
    // neighbours themselves
    let neighbours: Vec<VertexId> = u_edges.iter().map(|&i| g.inc_other(i)).collect();
    let mut cands: Vec<VertexId> = neighbours.clone();
    cands.sort_unstable();
    cands.dedup();
    // add all cut vertex candidates of B - u via a simple articulation scan
    {
        let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for &e in block_edges {
            let [a, b] = g.ends(e);
            if a == u || b == u {
                continue;
            }
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut verts: Vec<VertexId> = adj.keys().copied().collect();
        verts.sort_unstable();
        cands.extend(articulation_points(&adj, &verts));
        cands.sort_unstable();
        cands.dedup();
    }

    'cand: for &w in &cands {
        if w == u {
            continue;
        }
        // split B at {u, w}: each part must hold exactly one u-edge
        let mut comp_of: HashMap<VertexId, usize> = HashMap::new();
        let mut n = 0usize;
        for &e in block_edges {
            for x in g.ends(e) {
                if x == u || x == w || comp_of.contains_key(&x) {
                    continue;
                }
                let c = n;
                n += 1;
                let mut stack = vec![x];
                comp_of.insert(x, c);
                while let Some(y) = stack.pop() {
                    for i2 in g.rotation(y) {
                        if !edge_set.contains(&i2.edge) {
                            continue;
                        }
                        let z = g.inc_other(*i2);
                        if z != u && z != w && !comp_of.contains_key(&z) {
                            comp_of.insert(z, c);
                            stack.push(z);
                        }
                    }
                }
            }
        }
        // parts: per component + per direct u-w edge
        let mut part_of_uinc: Vec<Option<usize>> = vec![None; u_edges.len()];
        let mut parts: Vec<(Inc, Vec<Inc>)> = Vec::new();
        let mut comp_part: HashMap<usize, usize> = HashMap::new();
        for (i, &inc) in u_edges.iter().enumerate() {
            let other = g.inc_other(inc);
            if other == w {
                part_of_uinc[i] = Some(parts.len());
                parts.push((inc, vec![inc.opposite()]));
            } else {
                let c = comp_of[&other];
                match comp_part.get(&c) {
                    Some(_) => continue 'cand, // two u-edges in one part
                    None => {
                        comp_part.insert(c, parts.len());
                        part_of_uinc[i] = Some(parts.len());
                        parts.push((inc, Vec::new()));
                    }
                }
            }
        }
        if parts.len() != d || parts.len() < 3 {
            continue 'cand;
        }
        // all w-incidences within the block must map into parts
        for inc in g.rotation(w) {
            if !edge_set.contains(&inc.edge) {
                continue;
            }
            let other = g.inc_other(*inc);
            if other == u {
                continue; // already recorded as a direct part
            }
            let c = comp_of[&other];
            match comp_part.get(&c) {
                Some(&pi) => parts[pi].1.push(*inc),
                None => continue 'cand, // a component without a u-edge
            }
        }
        if parts.iter().any(|(_, ws)| ws.is_empty()) {
            continue 'cand;
        }
        return Some(ParallelInfo { u, w, parts });
    }
    None
}

fn articulation_points(
    adj: &HashMap<VertexId, Vec<VertexId>>,
    verts: &[VertexId],
) -> Vec<VertexId> {
    let mut index: HashMap<VertexId, usize> = HashMap::new();
    let mut low: HashMap<VertexId, usize> = HashMap::new();
    let mut out: HashSet<VertexId> = HashSet::new();
    let mut timer = 0usize;
    struct Frame {
        v: VertexId,
        parent: Option<VertexId>,
        parent_used: bool,
        next: usize,
        children: usize,
    }
    for &root in verts {
        if index.contains_key(&root) {
            continue;
        }
        index.insert(root, timer);
        low.insert(root, timer);
        timer += 1;
        let mut stack =
            vec![Frame { v: root, parent: None, parent_used: false, next: 0, children: 0 }];
        while let Some(fr) = stack.last_mut() {
            let v = fr.v;
            let list = &adj[&v];
            if fr.next < list.len() {
                let w = list[fr.next];
                fr.next += 1;
                if Some(w) == fr.parent && !fr.parent_used {
                    fr.parent_used = true;
                    continue;
                }
                if let Some(&iw) = index.get(&w) {
                    let lv = low[&v].min(iw);
                    low.insert(v, lv);
                } else {
                    index.insert(w, timer);
                    low.insert(w, timer);
                    timer += 1;
                    fr.children += 1;
                    stack.push(Frame {
                        v: w,
                        parent: Some(v),
                        parent_used: false,
                        next: 0,
                        children: 0,
                    });
                }
            } else {
                let done = stack.pop().unwrap();
                if let Some(fr2) = stack.last_mut() {
                    let p = fr2.v;
                    let lv = low[&done.v];
                    if lv >= index[&p] && fr2.parent.is_some() {
                        out.insert(p);
                    }
                    let lp = low[&p].min(lv);
                    low.insert(p, lp);
                } else if done.children >= 2 {
                    out.insert(done.v);
                }
            }
        }
    }
    let mut v: Vec<VertexId> = out.into_iter().collect();
    v.sort_unstable();
    v
}

/// Decides which simplify case applies for the trivial-tree endpoint of a
/// pipe, without mutating anything.
pub fn plan_simplify(inst: &Instance, pipe_id: PipeId, endpoint: VertexId, par: ParallelInfo) -> SimplifyPlan {
    let pipe = inst.pipe(pipe_id);
    let partner = pipe.other(endpoint);
    let w = par.w;
    if w == partner {
        return SimplifyPlan::Match(par);
    }
    if inst.is_q(w) {
        return SimplifyPlan::PoleIsQ(par);
    }
    match inst.pipe_of(w) {
        None => SimplifyPlan::Free(par),
        Some(other_id) => {
            // short-circuit requires the pole to have one edge per part,
            // i.e. a trivial tree over the same parallel
            let g = &inst.g;
            let one_edge_per_part = par.parts.iter().all(|(_, ws)| ws.len() == 1)
                && g.degree(w) == par.parts.len();
            if one_edge_per_part {
                SimplifyPlan::Short(par, other_id)
            } else {
                SimplifyPlan::Blocked(other_id)
            }
        }
    }
}

/// Cyclic arrangement of part indices realizing pi as a reflection of the
/// circle (for equality pipes between the two poles of one parallel). Exists
/// iff pi is an involution with the reflection-compatible fixed point count.
pub fn reflection_arrangement(pi: &[usize]) -> Option<Vec<usize>> {
    let k = pi.len();
    for (i, &j) in pi.iter().enumerate() {
        if pi[j] != i {
            return None;
        }
    }
    let fixed: Vec<usize> = (0..k).filter(|&i| pi[i] == i).collect();
    let ok = if k % 2 == 1 { fixed.len() == 1 } else { fixed.len() == 0 || fixed.len() == 2 };
    if !ok {
        return None;
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; k];
    for i in 0..k {
        if !used[i] && pi[i] != i {
            used[i] = true;
            used[pi[i]] = true;
            pairs.push((i, pi[i]));
        }
    }
    // [f0?, a_1..a_m, f1?, b_m..b_1]: reflecting the circle maps a_i to b_i
    let mut arr = Vec::with_capacity(k);
    if let Some(&f0) = fixed.first() {
        arr.push(f0);
    }
    arr.extend(pairs.iter().map(|&(a, _)| a));
    if fixed.len() == 2 {
        arr.push(fixed[1]);
    }
    arr.extend(pairs.iter().rev().map(|&(_, b)| b));
    debug_assert_eq!(arr.len(), k);
    Some(arr)
}

/// Cyclic arrangement of part indices realizing pi as a rotation (for
/// reversal pipes between the poles of one parallel). Exists iff all cycles
/// of pi share one length.
pub fn rotation_arrangement(pi: &[usize]) -> Option<Vec<usize>> {
    let k = pi.len();
    let mut seen = vec![false; k];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for i in 0..k {
        if seen[i] {
            continue;
        }
        let mut cyc = vec![i];
        seen[i] = true;
        let mut j = pi[i];
        while j != i {
            seen[j] = true;
            cyc.push(j);
            j = pi[j];
        }
        cycles.push(cyc);
    }
    let l = cycles[0].len();
    if cycles.iter().any(|c| c.len() != l) {
        return None;
    }
    // interleave the cycles: positions step by the number of cycles
    let c = cycles.len();
    let mut arr = vec![usize::MAX; k];
    for (ci, cyc) in cycles.iter().enumerate() {
        for (t, &x) in cyc.iter().enumerate() {
            arr[(t * c + ci) % k] = x;
        }
    }
    debug_assert!(arr.iter().all(|&x| x != usize::MAX));
    Some(arr)
}
