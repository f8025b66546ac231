//! Phase one: remove pipes one feasible operation at a time.
//!
//! A heap orders the live pipes by the configured key. An infeasible heap top
//! (a trivial-tree endpoint whose defining pole carries a higher-degree pipe
//! with a non-trivial tree) redirects to that blocking pipe, which has
//! strictly larger degree, so the redirect chain terminates.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::time::Instant;

use crate::bc::BcForest;
use crate::embedding::{vertex_addition_tree, EmbeddingTree};
use crate::graph::{EdgeId, Inc, VertexId};

use super::instance::{Instance, PipeId};
use super::ops::{self, SimplifyPlan, UndoOp};
use super::{ContractPref, PipeOrdering, SolverConfig, Stats};

pub enum ReduceOutcome {
    Reduced,
    Infeasible(String),
    Timeout,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct HeapKey {
    rank: Reverse<u8>,
    order: i64,
    tie: Reverse<u64>,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn heap_key(inst: &mut Instance, bc: &mut BcForest, cfg: &SolverConfig, id: PipeId) -> HeapKey {
    let p = inst.pipe(id);
    let deg = p.degree() as i64;
    let creation = p.creation;
    let (u, v) = (p.u, p.v);
    let rank = match cfg.contract {
        ContractPref::Mixed => 0,
        ContractPref::First => {
            let g = &inst.g;
            let both_cut = {
                let cu = bc.is_cut_vertex(g, u);
                let cv = bc.is_cut_vertex(g, v);
                cu && cv
            };
            u8::from(!both_cut)
        }
        ContractPref::Last => {
            let g = &inst.g;
            let cu = bc.is_cut_vertex(g, u);
            let cv = bc.is_cut_vertex(g, v);
            u8::from(cu && cv)
        }
    };
    let order = match cfg.ordering {
        PipeOrdering::Desc => deg,
        PipeOrdering::Asc => -deg,
        PipeOrdering::Random => splitmix(cfg.seed ^ creation) as i64 & 0x7fff_ffff_ffff,
    };
    HeapKey { rank: Reverse(rank), order, tie: Reverse(creation) }
}

/// What dispatch decided for a pipe, trees already in hand.
enum Action {
    Encapsulate,
    JoinBlocks,
    Propagate { endpoint: VertexId, tree: EmbeddingTree },
    Simplify { endpoint: VertexId, plan: SimplifyPlan },
    Blocked(PipeId),
    Infeasible(String),
}

/// Block edge list of a block-vertex.
fn block_of(inst: &Instance, bc: &mut BcForest, v: VertexId) -> Vec<EdgeId> {
    let blocks = bc.blocks_of(&inst.g, v);
    debug_assert_eq!(blocks.len(), 1, "block-vertex expected");
    bc.block_info(blocks[0]).edges.clone()
}

/// Computes an embedding tree for a block endpoint via the planarity test,
/// charging stats. None means the block is nonplanar.
fn tree_of(
    inst: &Instance,
    bc: &mut BcForest,
    stats: &mut Stats,
    v: VertexId,
) -> Option<EmbeddingTree> {
    let edges = block_of(inst, bc, v);
    let t0 = Instant::now();
    let t = vertex_addition_tree(&inst.g, &edges, v);
    stats.emb_tree_ms += t0.elapsed().as_secs_f64() * 1e3;
    stats.emb_tree_count += 1;
    t
}

/// Maps the admissible orders of `tree` (over `from`'s incidences) through
/// the pipe bijection onto the partner's incidences, so two endpoint trees
/// can be intersected in one leaf space.
fn map_tree_leaves(tree: &EmbeddingTree, map: &HashMap<Inc, Inc>) -> EmbeddingTree {
    EmbeddingTree {
        tree: tree.tree.clone(),
        leaf_inc: tree.leaf_inc.iter().map(|i| map[i]).collect(),
    }
}

fn dispatch(
    inst: &mut Instance,
    bc: &mut BcForest,
    cfg: &SolverConfig,
    stats: &mut Stats,
    id: PipeId,
    provided: Option<(VertexId, &EmbeddingTree)>,
) -> Action {
    let (u, v, flip) = {
        let p = inst.pipe(id);
        (p.u, p.v, p.flip)
    };
    let _ = flip;
    let cu = bc.is_cut_vertex(&inst.g, u);
    let cv = bc.is_cut_vertex(&inst.g, v);
    if cu && cv {
        return Action::Encapsulate;
    }
    let mut block_eps: Vec<VertexId> = Vec::new();
    if !cu {
        block_eps.push(u);
    }
    if !cv {
        block_eps.push(v);
    }
    // prefer the endpoint with the smaller biconditional component
    if block_eps.len() == 2 {
        let su = bc.block_size(&inst.g, u).unwrap_or(usize::MAX);
        let sv = bc.block_size(&inst.g, v).unwrap_or(usize::MAX);
        if sv < su {
            block_eps.swap(0, 1);
        }
    }

    let both_block = !cu && !cv;
    if both_block && cfg.join_blocks {
        let u_comp: HashSet<VertexId> = inst.g.component_of(u).into_iter().collect();
        if !u_comp.contains(&v) {
            return Action::JoinBlocks;
        }
    }
    if both_block && cfg.intersect_trees {
        // intersection of both endpoint trees, in u's leaf space
        let tu = match provided_or(inst, bc, stats, u, provided) {
            Some(t) => t,
            None => return Action::Infeasible("embedding-tree".into()),
        };
        let tv = match provided_or(inst, bc, stats, v, provided) {
            Some(t) => t,
            None => return Action::Infeasible("embedding-tree".into()),
        };
        let v_to_u = inst.pipe(id).map_v_to_u();
        let tv_mapped = map_tree_leaves(&tv, &v_to_u);
        // intersect over a common label space: relabel via incidences
        let corr: HashMap<u32, u32> = {
            let pos_u: HashMap<Inc, u32> = tu
                .leaf_inc
                .iter()
                .enumerate()
                .map(|(i, &inc)| (inc, i as u32))
                .collect();
            tv_mapped
                .leaf_inc
                .iter()
                .enumerate()
                .map(|(i, &inc)| (i as u32, pos_u[&inc]))
                .collect()
        };
        match tu.tree.intersect(&tv_mapped.tree, &corr) {
            Ok(Some(t)) => {
                let merged = EmbeddingTree { tree: t, leaf_inc: tu.leaf_inc.clone() };
                if merged.is_trivial() {
                    // both endpoint trees admit every order; fall through to
                    // the plain simplify handling below
                } else {
                    return Action::Propagate { endpoint: u, tree: merged };
                }
            }
            Ok(None) => return Action::Infeasible("empty-intersection".into()),
            Err(_) => return Action::Infeasible("empty-intersection".into()),
        }
    }

    let mut blocker: Option<PipeId> = None;
    for &e in &block_eps {
        let tree = match provided_or(inst, bc, stats, e, provided) {
            Some(t) => t,
            None => return Action::Infeasible("embedding-tree".into()),
        };
        if !tree.is_trivial() {
            return Action::Propagate { endpoint: e, tree };
        }
        let edges = block_of(inst, bc, e);
        let Some(par) = ops::defining_parallel(inst, &edges, e) else {
            // degree >= 3 with a trivial tree always has a defining parallel
            debug_assert!(false, "missing defining parallel");
            return Action::Infeasible("simplify".into());
        };
        match ops::plan_simplify(inst, id, e, par) {
            SimplifyPlan::Blocked(b) => blocker = Some(b),
            plan => return Action::Simplify { endpoint: e, plan },
        }
    }
    match blocker {
        Some(b) => Action::Blocked(b),
        None => {
            debug_assert!(false, "pipe with no usable endpoint and no blocker");
            Action::Infeasible("dispatch".into())
        }
    }
}

fn provided_or(
    inst: &Instance,
    bc: &mut BcForest,
    stats: &mut Stats,
    e: VertexId,
    provided: Option<(VertexId, &EmbeddingTree)>,
) -> Option<EmbeddingTree> {
    if let Some((pv, t)) = provided {
        if pv == e {
            return Some(t.clone());
        }
    }
    tree_of(inst, bc, stats, e)
}

/// Vertices whose cached connectivity may be stale after an operation.
fn touched_of(inst: &Instance, op: &UndoOp) -> Vec<VertexId> {
    let mut out = Vec::new();
    let mut push_far = |out: &mut Vec<VertexId>, incs: &[Inc]| {
        for &i in incs {
            if inst.g.contains_edge(i.edge) {
                let [a, b] = inst.g.ends(i.edge);
                out.push(a);
                out.push(b);
            }
        }
    };
    match op {
        UndoOp::EncapsulateJoin(r) => {
            for side in [&r.u_side, &r.v_side] {
                for gr in &side.groups {
                    out.push(gr.copy);
                    out.push(gr.collapsed);
                    push_far(&mut out, &gr.orig_incs);
                }
            }
        }
        UndoOp::Propagate(r) => {
            for side in [&r.u_side, &r.v_side] {
                out.extend(side.verts.iter().copied());
                let incs: Vec<Inc> = side.leaf_attach.iter().map(|&(i, _)| i).collect();
                push_far(&mut out, &incs);
            }
        }
        UndoOp::JoinBlocks(r) => {
            for m in &r.identify.merged {
                out.push(m.ends[0]);
                out.push(m.ends[1]);
            }
            out.extend(r.v_side.iter().copied());
        }
        UndoOp::SimplifyFree(_)
        | UndoOp::SimplifyQ(_)
        | UndoOp::SimplifyShort(_)
        | UndoOp::SimplifyMatch(_) => {}
        UndoOp::Wheel(r) => {
            out.push(r.hub);
            out.extend(r.rim.iter().copied());
        }
    }
    out.retain(|v| inst.g.contains_vertex(*v));
    out
}

pub fn make_reduced(
    inst: &mut Instance,
    cfg: &SolverConfig,
    undo_log: &mut Vec<UndoOp>,
    stats: &mut Stats,
    deadline: Option<Instant>,
) -> ReduceOutcome {
    let mut bc = BcForest::new();
    let mut heap: BinaryHeap<(HeapKey, PipeId)> = BinaryHeap::new();
    for id in inst.live_pipes() {
        let k = heap_key(inst, &mut bc, cfg, id);
        heap.push((k, id));
    }

    // the operation count is bounded by the total degree of paired vertices
    let bound: usize = inst
        .live_pipes()
        .iter()
        .map(|&id| 2 * inst.pipe(id).degree())
        .sum();
    let mut applied = 0usize;

    while inst.n_pipes() > 0 {
        if let Some(dl) = deadline {
            if Instant::now() > dl {
                return ReduceOutcome::Timeout;
            }
        }
        // pop a live candidate with an up-to-date key
        let cand = loop {
            let Some((k, id)) = heap.pop() else {
                // heap exhausted but pipes remain (e.g. redirected entries):
                // refill
                for id in inst.live_pipes() {
                    let k = heap_key(inst, &mut bc, cfg, id);
                    heap.push((k, id));
                }
                continue;
            };
            if inst.pipe_opt(id).is_none() {
                continue;
            }
            let fresh = heap_key(inst, &mut bc, cfg, id);
            if fresh != k {
                heap.push((fresh, id));
                continue;
            }
            break id;
        };

        // feasibility redirect
        let mut id = cand;
        let action = loop {
            match dispatch(inst, &mut bc, cfg, stats, id, None) {
                Action::Blocked(b) => {
                    debug_assert!(inst.pipe(b).degree() > inst.pipe(id).degree());
                    id = b;
                }
                act => break act,
            }
        };

        match apply_action(inst, &mut bc, cfg, undo_log, stats, &mut heap, id, action) {
            Ok(()) => {}
            Err(stage) => return ReduceOutcome::Infeasible(stage),
        }
        applied += 1;
        debug_assert!(applied <= bound.max(1), "operation bound exceeded");

        // batched processing of the remaining pipes of the same block
        if cfg.batch_spqr {
            if let Err(stage) =
                run_batch(inst, &mut bc, cfg, undo_log, stats, &mut heap, deadline, &mut applied)
            {
                return ReduceOutcome::Infeasible(stage);
            }
        }
    }
    stats.operations = applied as u64;
    ReduceOutcome::Reduced
}

/// In batch mode, after any operation, process every currently feasible
/// propagate/simplify pipe block by block, deriving all embedding trees of a
/// block from one SPQR build.
#[allow(clippy::too_many_arguments)]
fn run_batch(
    inst: &mut Instance,
    bc: &mut BcForest,
    cfg: &SolverConfig,
    undo_log: &mut Vec<UndoOp>,
    stats: &mut Stats,
    heap: &mut BinaryHeap<(HeapKey, PipeId)>,
    deadline: Option<Instant>,
    applied: &mut usize,
) -> Result<(), String> {
    loop {
        if let Some(dl) = deadline {
            if Instant::now() > dl {
                return Ok(()); // outer loop reports the timeout
            }
        }
        // find a block containing a block-vertex pipe endpoint
        let mut target: Option<(VertexId, Vec<EdgeId>)> = None;
        for id in inst.live_pipes() {
            let p = inst.pipe(id);
            for e in [p.u, p.v] {
                if inst.g.degree(e) >= 3 && !bc.is_cut_vertex(&inst.g, e) {
                    let edges = block_of(inst, bc, e);
                    if edges.len() >= 3 {
                        target = Some((e, edges));
                        break;
                    }
                }
            }
            if target.is_some() {
                break;
            }
        }
        let Some((_, edges)) = target else {
            return Ok(());
        };
        let edge_set: HashSet<EdgeId> = edges.iter().copied().collect();
        let t0 = Instant::now();
        let spqr = crate::spqr::build_spqr(&inst.g, &edges);
        stats.spqr_ms += t0.elapsed().as_secs_f64() * 1e3;
        stats.spqr_count += 1;
        let spqr = match spqr {
            Ok(t) => t,
            Err(_) => return Err("spqr".into()),
        };

        // all pipes with a block-vertex endpoint in this block
        let mut batch: Vec<(PipeId, VertexId)> = Vec::new();
        for id in inst.live_pipes() {
            let p = inst.pipe(id);
            for e in [p.u, p.v] {
                if !bc.is_cut_vertex(&inst.g, e)
                    && inst
                        .g
                        .rotation(e)
                        .first()
                        .map(|i| edge_set.contains(&i.edge))
                        .unwrap_or(false)
                {
                    batch.push((id, e));
                    break;
                }
            }
        }

        let mut progressed = false;
        for (id, e) in batch {
            if inst.pipe_opt(id).is_none() || !inst.g.contains_vertex(e) {
                continue; // consumed by an earlier batch entry
            }
            // staleness: the endpoint must still be a block-vertex whose
            // incidences are all in the decomposed subgraph
            if bc.is_cut_vertex(&inst.g, e) {
                continue;
            }
            if !inst.g.rotation(e).iter().all(|i| edge_set.contains(&i.edge)) {
                continue;
            }
            let t1 = Instant::now();
            let tree = spqr.embedding_tree(&inst.g, e);
            stats.emb_tree_ms += t1.elapsed().as_secs_f64() * 1e3;
            stats.emb_tree_count += 1;
            let tree = match tree {
                Ok(t) => t,
                Err(crate::spqr::SpqrError::NonplanarRigid) => {
                    return Err("embedding-tree".into())
                }
                Err(_) => continue,
            };
            let action = dispatch(inst, bc, cfg, stats, id, Some((e, &tree)));
            match action {
                Action::Blocked(_) | Action::Encapsulate | Action::JoinBlocks => continue,
                act => {
                    apply_action(inst, bc, cfg, undo_log, stats, heap, id, act)?;
                    *applied += 1;
                    progressed = true;
                }
            }
        }
        if !progressed {
            return Ok(());
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn apply_action(
    inst: &mut Instance,
    bc: &mut BcForest,
    cfg: &SolverConfig,
    undo_log: &mut Vec<UndoOp>,
    stats: &mut Stats,
    heap: &mut BinaryHeap<(HeapKey, PipeId)>,
    id: PipeId,
    action: Action,
) -> Result<(), String> {
    match action {
        Action::Blocked(_) => unreachable!("redirect resolved before apply"),
        Action::Infeasible(stage) => Err(stage),
        Action::Encapsulate => {
            let t0 = Instant::now();
            let rec = ops::encapsulate_and_join(inst, id);
            stats.encapsulate_ms += t0.elapsed().as_secs_f64() * 1e3;
            stats.encapsulate_count += 1;
            let op = UndoOp::EncapsulateJoin(rec);
            bc.notify_dirty(touched_of(inst, &op));
            if let UndoOp::EncapsulateJoin(r) = &op {
                for side in [&r.u_side, &r.v_side] {
                    for gr in &side.groups {
                        if let Some(pid) = gr.pipe {
                            let k = heap_key(inst, bc, cfg, pid);
                            heap.push((k, pid));
                        }
                    }
                }
            }
            undo_log.push(op);
            Ok(())
        }
        Action::JoinBlocks => {
            let t0 = Instant::now();
            let rec = ops::join_blocks(inst, id);
            stats.join_ms += t0.elapsed().as_secs_f64() * 1e3;
            stats.join_count += 1;
            let op = UndoOp::JoinBlocks(rec);
            bc.notify_dirty(touched_of(inst, &op));
            undo_log.push(op);
            Ok(())
        }
        Action::Propagate { endpoint, tree } => {
            let t0 = Instant::now();
            let rec = ops::propagate(inst, id, endpoint, &tree);
            stats.propagate_ms += t0.elapsed().as_secs_f64() * 1e3;
            stats.propagate_count += 1;
            let op = UndoOp::Propagate(rec);
            bc.notify_dirty(touched_of(inst, &op));
            if let UndoOp::Propagate(r) = &op {
                for &pid in &r.new_pipes {
                    let k = heap_key(inst, bc, cfg, pid);
                    heap.push((k, pid));
                }
            }
            undo_log.push(op);
            Ok(())
        }
        Action::Simplify { endpoint, plan } => {
            let t0 = Instant::now();
            let result = apply_simplify(inst, id, endpoint, plan, heap, bc, cfg);
            stats.simplify_ms += t0.elapsed().as_secs_f64() * 1e3;
            stats.simplify_count += 1;
            match result {
                Ok(op) => {
                    undo_log.push(op);
                    Ok(())
                }
                Err(stage) => Err(stage),
            }
        }
    }
}

fn apply_simplify(
    inst: &mut Instance,
    id: PipeId,
    endpoint: VertexId,
    plan: SimplifyPlan,
    heap: &mut BinaryHeap<(HeapKey, PipeId)>,
    bc: &mut BcForest,
    cfg: &SolverConfig,
) -> Result<UndoOp, String> {
    match plan {
        SimplifyPlan::Blocked(_) => unreachable!(),
        SimplifyPlan::Free(par) => {
            let pipe = inst.remove_pipe(id);
            let endpoint_is_u = endpoint == pipe.u;
            Ok(UndoOp::SimplifyFree(ops::SimplifyFreeRec { pipe_id: id, pipe, par, endpoint_is_u }))
        }
        SimplifyPlan::PoleIsQ(par) => {
            // the partner inherits a synchronized reference through the
            // parallel; parts must be contiguous in the pole's reference
            let pipe = inst.remove_pipe(id);
            let endpoint_is_u = endpoint == pipe.u;
            let partner = pipe.other(endpoint);
            let w = par.w;
            let ref_w = inst.qverts[&w].ref_rot.clone();
            let Some(part_order) = part_order_in(&par, &ref_w) else {
                return Err("simplify-sync".into());
            };
            // rot(endpoint) for sign +: parts in reverse pole order
            let rot_u_plus: Vec<Inc> = part_order
                .iter()
                .rev()
                .map(|&pi| par.parts[pi].0)
                .collect();
            let fwd: HashMap<Inc, Inc> =
                if endpoint_is_u { pipe.map_u_to_v() } else { pipe.map_v_to_u() };
            let mut r_v: Vec<Inc> = rot_u_plus.iter().map(|i| fwd[i]).collect();
            if pipe.flip {
                r_v.reverse();
            }
            inst.qverts.insert(partner, super::instance::QVertex { ref_rot: r_v });
            inst.qsync.push(super::instance::QSync { a: partner, b: w, parity: false });
            Ok(UndoOp::SimplifyQ(ops::SimplifyQRec { pipe_id: id, pipe, par, endpoint_is_u, partner }))
        }
        SimplifyPlan::Short(par, other_id) => {
            let pipe = inst.remove_pipe(id);
            let other = inst.remove_pipe(other_id);
            let endpoint_is_u = endpoint == pipe.u;
            let partner = pipe.other(endpoint);
            let w = par.w;
            let z = other.other(w);
            // chain: partner -> endpoint -> (parallel) -> w -> z
            let to_endpoint: HashMap<Inc, Inc> =
                if endpoint_is_u { pipe.map_v_to_u() } else { pipe.map_u_to_v() };
            let part_of_uinc: HashMap<Inc, usize> =
                par.parts.iter().enumerate().map(|(i, (ui, _))| (*ui, i)).collect();
            let w_of_part: Vec<Inc> = par.parts.iter().map(|(_, ws)| ws[0]).collect();
            let from_w: HashMap<Inc, Inc> =
                if other.u == w { other.map_u_to_v() } else { other.map_v_to_u() };
            let bij: Vec<(Inc, Inc)> = inst
                .g
                .rotation(partner)
                .iter()
                .map(|&x| {
                    let e_u = to_endpoint[&x];
                    let f_w = w_of_part[part_of_uinc[&e_u]];
                    (x, from_w[&f_w])
                })
                .collect();
            let flip = pipe.flip ^ other.flip ^ true;
            let new_pipe = inst.add_pipe(partner, z, bij, flip);
            if let Some(np) = new_pipe {
                let k = heap_key(inst, bc, cfg, np);
                heap.push((k, np));
            }
            Ok(UndoOp::SimplifyShort(ops::SimplifyShortRec {
                pipe_id: id,
                pipe,
                other_id,
                other,
                new_pipe,
                par,
                endpoint_is_u,
            }))
        }
        SimplifyPlan::Match(par) => {
            let pipe = inst.pipe(id).clone();
            let endpoint_is_u = endpoint == pipe.u;
            let fwd: HashMap<Inc, Inc> =
                if endpoint_is_u { pipe.map_u_to_v() } else { pipe.map_v_to_u() };
            let part_of_winc: HashMap<Inc, usize> = par
                .parts
                .iter()
                .enumerate()
                .map(|(i, (_, ws))| (ws[0], i))
                .collect();
            let pi: Vec<usize> =
                par.parts.iter().map(|(ui, _)| part_of_winc[&fwd[ui]]).collect();
            let ok = if pipe.flip {
                ops::rotation_arrangement(&pi).is_some()
            } else {
                ops::reflection_arrangement(&pi).is_some()
            };
            if !ok {
                return Err("simplify-match".into());
            }
            let pipe = inst.remove_pipe(id);
            Ok(UndoOp::SimplifyMatch(ops::SimplifyMatchRec { pipe_id: id, pipe, par, endpoint_is_u }))
        }
    }
}

/// Sequence of part indices as their w-arcs appear in the reference rotation,
/// or None when some part's incidences are not contiguous there.
pub fn part_order_in(par: &ops::ParallelInfo, ref_rot: &[Inc]) -> Option<Vec<usize>> {
    let mut part_of: HashMap<Inc, usize> = HashMap::new();
    for (i, (_, ws)) in par.parts.iter().enumerate() {
        for &w in ws {
            part_of.insert(w, i);
        }
    }
    let seq: Vec<usize> = ref_rot.iter().filter_map(|i| part_of.get(i).copied()).collect();
    if seq.is_empty() {
        return None;
    }
    let mut order = Vec::new();
    let mut seen = HashSet::new();
    for &p in &seq {
        if seen.insert(p) {
            order.push(p);
        }
    }
    // contiguity: each part appears as one cyclic run
    let k = seq.len();
    for i in 0..k {
        let cur = seq[i];
        let prev = seq[(i + k - 1) % k];
        if cur != prev && !seen.contains(&cur) {
            return None;
        }
    }
    // re-check runs properly: count run starts per part
    let mut starts: HashMap<usize, usize> = HashMap::new();
    for i in 0..k {
        let cur = seq[i];
        let prev = seq[(i + k - 1) % k];
        if cur != prev {
            *starts.entry(cur).or_insert(0) += 1;
        }
    }
    if par.parts.len() > 1 && starts.values().any(|&c| c > 1) {
        return None;
    }
    if order.len() != par.parts.len() {
        return None;
    }
    Some(order)
}
