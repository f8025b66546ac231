//! PC-trees: compact representations of sets of cyclic orders.
//!
//! A PC-tree over a leaf set represents all cyclic orders obtainable by
//! arranging the leaves around the tree, permuting the neighbours of each
//! P-node arbitrarily and reversing the neighbour order of each C-node. The
//! single update primitive, [`PcTree::restrict`], intersects the represented
//! set with all orders in which a given leaf subset is consecutive; it is the
//! engine behind the vertex-addition planarity test and embedding trees.
//!
//! Internally the tree is rooted, but the public contracts are purely cyclic:
//! a non-root C-node's child list is a linear sequence closed by the parent
//! direction, the root C-node's child list is itself cyclic. Dead nodes stay
//! in the arena; `alive` filters them.
//!
//! Debug serialization writes P-nodes as `(...)`, C-nodes as `[...]` and
//! leaves as their labels.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

pub type Label = u32;

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Leaf(Label),
    P,
    C,
}

#[derive(Clone, Debug)]
struct Node {
    kind: Kind,
    parent: usize,
    children: Vec<usize>,
    leaf_count: usize,
    alive: bool,
}

#[derive(Clone)]
pub struct PcTree {
    nodes: Vec<Node>,
    root: usize,
    leaf_node: HashMap<Label, usize>,
    poisoned: bool,
}

/// Where a successfully restricted set sits in the tree, for block
/// replacement. `CArc`/`ComplementCArc` positions refer to the child list of
/// a C-node; `ComplementCArc { start, len }` are the children *outside* the
/// restricted set.
#[derive(Clone, Debug)]
pub enum Block {
    Whole,
    Subtree(usize),
    CArc { node: usize, start: usize, len: usize },
    ComplementSubtree(usize),
    ComplementCArc { node: usize, start: usize, len: usize },
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PcError {
    #[error("unknown leaf label {0}")]
    UnknownLabel(Label),
    #[error("tree is poisoned by a failed restriction")]
    Poisoned,
    #[error("leaf sets do not correspond")]
    LeafMismatch,
}

impl PcTree {
    /// A tree admitting every cyclic order of the given labels.
    pub fn new_universal(labels: &[Label]) -> Self {
        let mut t = PcTree { nodes: Vec::new(), root: NONE, leaf_node: HashMap::new(), poisoned: false };
        let kids: Vec<usize> = labels.iter().map(|&l| t.push_node(Kind::Leaf(l), NONE)).collect();
        let root = t.push_node(Kind::P, NONE);
        for &k in &kids {
            t.nodes[k].parent = root;
        }
        t.nodes[root].children = kids;
        t.nodes[root].leaf_count = labels.len();
        t.root = root;
        t
    }

    fn push_node(&mut self, kind: Kind, parent: usize) -> usize {
        let leaf_count = if matches!(kind, Kind::Leaf(_)) { 1 } else { 0 };
        if let Kind::Leaf(l) = kind {
            self.leaf_node.insert(l, self.nodes.len());
        }
        self.nodes.push(Node { kind, parent, children: Vec::new(), leaf_count, alive: true });
        self.nodes.len() - 1
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes[self.root].leaf_count
    }

    pub fn leaves(&self) -> Vec<Label> {
        let mut out = Vec::new();
        self.collect_leaves(self.root, &mut out);
        out
    }

    fn collect_leaves(&self, u: usize, out: &mut Vec<Label>) {
        match self.nodes[u].kind {
            Kind::Leaf(l) => out.push(l),
            _ => {
                for &c in &self.nodes[u].children {
                    self.collect_leaves(c, out);
                }
            }
        }
    }

    pub fn is_poisoned(&self) -> bool {
        self.poisoned
    }

    /// True iff every cyclic order of the leaves is admissible (a single
    /// P-node after normalization, or at most 2 leaves).
    pub fn is_trivial(&self) -> bool {
        if self.n_leaves() <= 2 {
            return true;
        }
        matches!(self.nodes[self.root].kind, Kind::P)
            && self.nodes[self.root]
                .children
                .iter()
                .all(|&c| matches!(self.nodes[c].kind, Kind::Leaf(_)))
    }

    /// Unrooted degree of a node.
    fn unrooted_degree(&self, u: usize) -> usize {
        self.nodes[u].children.len() + usize::from(u != self.root)
    }

    /// Number of admissible cyclic orders: product of (deg-1)! over P-nodes
    /// and 2 over C-nodes, saturating at u128::MAX.
    pub fn count_admissible(&self) -> u128 {
        let mut acc: u128 = 1;
        for (i, n) in self.nodes.iter().enumerate() {
            if !n.alive {
                continue;
            }
            match n.kind {
                Kind::Leaf(_) => {}
                Kind::P => {
                    let d = self.unrooted_degree(i);
                    for f in 2..d.max(1) {
                        acc = acc.saturating_mul(f as u128);
                    }
                }
                Kind::C => {
                    acc = acc.saturating_mul(2);
                }
            }
        }
        acc
    }

    // ------------------------------------------------------------------
    // Admissibility check and enumeration (oracle support)
    // ------------------------------------------------------------------

    /// True iff the cyclic sequence `order` is admissible. `order` must be a
    /// permutation of the leaves.
    pub fn is_admissible(&self, order: &[Label]) -> Result<bool, PcError> {
        let mut pos: HashMap<Label, usize> = HashMap::new();
        for (i, &l) in order.iter().enumerate() {
            if !self.leaf_node.contains_key(&l) {
                return Err(PcError::UnknownLabel(l));
            }
            pos.insert(l, i);
        }
        if pos.len() != self.n_leaves() || order.len() != self.n_leaves() {
            return Err(PcError::LeafMismatch);
        }
        let n = order.len();
        Ok(self.check_node(self.root, &pos, n))
    }

    /// Positions occupied by the leaves below `u`: `(start, len)` of their
    /// cyclic arc, or None if they are not contiguous.
    fn subtree_arc(&self, u: usize, pos: &HashMap<Label, usize>, n: usize) -> Option<(usize, usize)> {
        let mut leaves = Vec::new();
        self.collect_leaves(u, &mut leaves);
        let mut ps: Vec<usize> = leaves.iter().map(|l| pos[l]).collect();
        ps.sort_unstable();
        let k = ps.len();
        if k == n {
            return Some((0, n));
        }
        let mut start = None;
        for i in 0..k {
            let cur = ps[i];
            let nxt = ps[(i + 1) % k];
            let gap = (nxt + n - cur) % n;
            if gap != 1 {
                if start.is_some() {
                    return None;
                }
                start = Some(nxt);
            }
        }
        match start {
            Some(s) => Some((s, k)),
            None => Some((ps[0], k)),
        }
    }

    fn check_node(&self, u: usize, pos: &HashMap<Label, usize>, n: usize) -> bool {
        match self.nodes[u].kind {
            Kind::Leaf(_) => true,
            Kind::P | Kind::C => {
                let mut arcs = Vec::new();
                for &c in &self.nodes[u].children {
                    match self.subtree_arc(c, pos, n) {
                        Some(a) => arcs.push(a),
                        None => return false,
                    }
                    if !self.check_node(c, pos, n) {
                        return false;
                    }
                }
                if matches!(self.nodes[u].kind, Kind::C) {
                    // The cyclic sequence of child arcs around the circle
                    // (with the parent gap as a final virtual direction for
                    // non-root nodes) must equal the stored child order up to
                    // rotation and reflection.
                    if u != self.root {
                        let (s, len) = match self.subtree_arc(u, pos, n) {
                            Some(a) => a,
                            None => return false,
                        };
                        arcs.push(((s + len) % n, n - len));
                    }
                    let m = arcs.len();
                    let mut order: Vec<(usize, usize)> =
                        arcs.iter().enumerate().map(|(i, &(s, _))| (s, i)).collect();
                    order.sort_unstable();
                    let seq: Vec<usize> = order.iter().map(|&(_, i)| i).collect();
                    let fits = |s: &[usize], reversed: bool| -> bool {
                        let idx0 = s.iter().position(|&x| x == 0).unwrap();
                        (0..m).all(|k| {
                            let want = if reversed { (m - k) % m } else { k };
                            s[(idx0 + k) % m] == want
                        })
                    };
                    if !(fits(&seq, false) || fits(&seq, true)) {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// All admissible cyclic orders, canonicalized by rotating the smallest
    /// label to the front. Exponential; intended for trees with few leaves.
    pub fn admissible_orders(&self) -> BTreeSet<Vec<Label>> {
        let leaves = self.leaves();
        let mut out = BTreeSet::new();
        if leaves.len() <= 2 {
            out.insert(canonical_cycle(&leaves));
            return out;
        }
        let first = leaves[0];
        let rest: Vec<Label> = leaves[1..].to_vec();
        let mut perm = rest.clone();
        permute(&mut perm, 0, &mut |p| {
            let mut order = vec![first];
            order.extend_from_slice(p);
            if self.is_admissible(&order).unwrap() {
                out.insert(canonical_cycle(&order));
            }
        });
        out
    }

    // ------------------------------------------------------------------
    // Restriction
    // ------------------------------------------------------------------

    /// Updates the tree so its admissible orders are exactly the old ones in
    /// which `s` is consecutive. Returns false (poisoning the tree) if no
    /// admissible order has `s` consecutive.
    pub fn restrict(&mut self, s: &[Label]) -> Result<bool, PcError> {
        Ok(self.restrict_block(s)?.is_some())
    }

    /// Like [`PcTree::restrict`], additionally reporting where the block
    /// ended up.
    pub fn restrict_block(&mut self, s: &[Label]) -> Result<Option<Block>, PcError> {
        if self.poisoned {
            return Err(PcError::Poisoned);
        }
        for l in s {
            if !self.leaf_node.contains_key(l) {
                return Err(PcError::UnknownLabel(*l));
            }
        }
        let k = s.len();
        debug_assert_eq!(k, s.iter().collect::<HashSet<_>>().len(), "duplicate labels");
        let n = self.n_leaves();
        if k == 0 || k == n {
            return Ok(Some(Block::Whole));
        }
        if k == 1 {
            return Ok(Some(Block::Subtree(self.leaf_node[&s[0]])));
        }
        if k == n - 1 {
            let have: HashSet<Label> = s.iter().copied().collect();
            let missing = self.leaves().into_iter().find(|l| !have.contains(l)).unwrap();
            return Ok(Some(Block::ComplementSubtree(self.leaf_node[&missing])));
        }

        // Pertinent region: full-leaf counts on every root path from a full
        // leaf.
        let mut full_in: HashMap<usize, usize> = HashMap::new();
        for l in s {
            let mut u = self.leaf_node[l];
            loop {
                *full_in.entry(u).or_insert(0) += 1;
                if u == self.root {
                    break;
                }
                u = self.nodes[u].parent;
            }
        }

        // Mixed-mixed parent edges, identified by their lower node.
        let mut mm: Vec<usize> = Vec::new();
        for (&u, &f) in &full_in {
            if u == self.root {
                continue;
            }
            let lc = self.nodes[u].leaf_count;
            let down_mixed = f > 0 && f < lc;
            let f_up = k - f;
            let n_up = n - lc;
            let up_mixed = f_up > 0 && f_up < n_up;
            if down_mixed && up_mixed {
                mm.push(u);
            }
        }

        if mm.is_empty() {
            return self.restrict_center_case(k, n, &full_in);
        }

        // Path edges are (u, parent(u)) for u in mm; they must form a path.
        let mut deg: HashMap<usize, usize> = HashMap::new();
        for &u in &mm {
            *deg.entry(u).or_insert(0) += 1;
            *deg.entry(self.nodes[u].parent).or_insert(0) += 1;
        }
        let ends: Vec<usize> = deg.iter().filter(|&(_, &d)| d == 1).map(|(&u, _)| u).collect();
        if ends.len() != 2 || deg.values().any(|&d| d > 2) {
            self.poisoned = true;
            return Ok(None);
        }
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &u in &mm {
            let p = self.nodes[u].parent;
            adj.entry(u).or_default().push(p);
            adj.entry(p).or_default().push(u);
        }
        let mut path = vec![ends[0]];
        let mut prev = NONE;
        while path.len() < deg.len() {
            let cur = *path.last().unwrap();
            match adj[&cur].iter().copied().find(|&x| x != prev) {
                Some(x) => {
                    prev = cur;
                    path.push(x);
                }
                None => {
                    self.poisoned = true;
                    return Ok(None);
                }
            }
        }
        self.split_terminal_path(&path, k, n, &full_in)
    }

    fn full_status(&self, u: usize, full_in: &HashMap<usize, usize>) -> (usize, usize) {
        (full_in.get(&u).copied().unwrap_or(0), self.nodes[u].leaf_count)
    }

    /// No mixed-mixed edge: there is one center node all of whose directions
    /// are pure. Find it by descending through partial children, then split
    /// or just check consecutivity.
    fn restrict_center_case(
        &mut self,
        k: usize,
        n: usize,
        full_in: &HashMap<usize, usize>,
    ) -> Result<Option<Block>, PcError> {
        let mut center = self.root;
        loop {
            let mut partial = None;
            for &c in &self.nodes[center].children {
                let (f, lc) = self.full_status(c, full_in);
                if f == k && f == lc {
                    // S is exactly this subtree
                    return Ok(Some(Block::Subtree(c)));
                }
                if f > 0 && f < lc {
                    if partial.is_some() {
                        // second partial child without an MM edge between
                        // them cannot happen on feasible inputs
                        self.poisoned = true;
                        return Ok(None);
                    }
                    partial = Some(c);
                }
            }
            match partial {
                Some(c) => center = c,
                None => break,
            }
        }
        let (fc, lc) = self.full_status(center, full_in);
        if fc == lc && fc == k {
            return Ok(Some(Block::Subtree(center)));
        }

        let kids = self.nodes[center].children.clone();
        let kid_full: Vec<bool> = kids
            .iter()
            .map(|&c| {
                let (f, lc) = self.full_status(c, full_in);
                debug_assert!(f == 0 || f == lc, "center children must be pure");
                f > 0 && f == lc
            })
            .collect();
        let parent_full = if center == self.root {
            None
        } else {
            let f_up = k - fc;
            let n_up = n - lc;
            debug_assert!(f_up == 0 || f_up == n_up, "parent dir of center must be pure");
            Some(f_up > 0)
        };

        match self.nodes[center].kind {
            Kind::Leaf(_) => unreachable!("center cannot be a leaf when 2 <= |S| <= n-2"),
            Kind::P => {
                let group_full = !matches!(parent_full, Some(true));
                let group: Vec<usize> = kids
                    .iter()
                    .copied()
                    .zip(kid_full.iter())
                    .filter(|&(_, &f)| f == group_full)
                    .map(|(c, _)| c)
                    .collect();
                if group.len() == 1 {
                    let b = if group_full {
                        Block::Subtree(group[0])
                    } else {
                        Block::ComplementSubtree(group[0])
                    };
                    return Ok(Some(b));
                }
                debug_assert!(!group.is_empty());
                let gnode = self.push_node(Kind::P, NONE);
                for &c in &group {
                    self.detach_child(center, c);
                    self.attach_child_end(gnode, c);
                }
                self.attach_child_end(center, gnode);
                self.recount_subtree(gnode);
                self.recount_up(center);
                self.normalize_at(center);
                let gnode = self.live_alias(gnode);
                let b = if group_full { Block::Subtree(gnode) } else { Block::ComplementSubtree(gnode) };
                Ok(Some(b))
            }
            Kind::C => {
                let m = kids.len();
                let result = if center == self.root {
                    cyclic_run(&kid_full, true, m).map(|(start, len)| Block::CArc { node: center, start, len })
                } else if matches!(parent_full, Some(true)) {
                    linear_run(&kid_full, false)
                        .map(|(start, len)| Block::ComplementCArc { node: center, start, len })
                } else {
                    linear_run(&kid_full, true).map(|(start, len)| Block::CArc { node: center, start, len })
                };
                match result {
                    Some(b) => Ok(Some(b)),
                    None => {
                        self.poisoned = true;
                        Ok(None)
                    }
                }
            }
        }
    }

    /// Split every node on the terminal path and fuse the pieces around a
    /// fresh central C-node whose child order is the boundary walk of the
    /// path: full directions from one endpoint to the other, then empty
    /// directions on the way back.
    fn split_terminal_path(
        &mut self,
        path: &[usize],
        k: usize,
        n: usize,
        full_in: &HashMap<usize, usize>,
    ) -> Result<Option<Block>, PcError> {
        let in_path: HashSet<usize> = path.iter().copied().collect();

        #[derive(Clone, Copy, PartialEq, Debug)]
        enum Dir {
            Child(usize),
            Parent,
        }
        #[derive(Clone, Copy, PartialEq, Debug)]
        enum Class {
            Full,
            Empty,
            Path,
            Bad,
        }
        #[derive(Clone, Debug)]
        enum Piece {
            One(Dir),
            Group(Vec<Dir>),
            Arc(Vec<Dir>),
        }

        let mut fulls_fwd: Vec<Piece> = Vec::new();
        let mut empties_bwd: Vec<Piece> = Vec::new();

        for (i, &u) in path.iter().enumerate() {
            let prev = if i == 0 { None } else { Some(path[i - 1]) };
            let next = if i + 1 == path.len() { None } else { Some(path[i + 1]) };

            let mut dirs: Vec<Dir> = self.nodes[u].children.iter().map(|&c| Dir::Child(c)).collect();
            if u != self.root {
                dirs.push(Dir::Parent);
            }
            let classes: Vec<Class> = dirs
                .iter()
                .map(|&d| match d {
                    Dir::Child(c) => {
                        if (Some(c) == prev || Some(c) == next) && in_path.contains(&c) {
                            Class::Path
                        } else {
                            let (f, lc) = self.full_status(c, full_in);
                            if f == lc && f > 0 {
                                Class::Full
                            } else if f == 0 {
                                Class::Empty
                            } else {
                                Class::Bad
                            }
                        }
                    }
                    Dir::Parent => {
                        let p = self.nodes[u].parent;
                        if (Some(p) == prev || Some(p) == next) && in_path.contains(&p) {
                            Class::Path
                        } else {
                            let (f, lc) = self.full_status(u, full_in);
                            let f_up = k - f;
                            let n_up = n - lc;
                            if f_up == n_up && n_up > 0 {
                                Class::Full
                            } else if f_up == 0 {
                                Class::Empty
                            } else {
                                Class::Bad
                            }
                        }
                    }
                })
                .collect();
            if classes.iter().any(|&c| c == Class::Bad) {
                self.poisoned = true;
                return Ok(None);
            }
            let n_path_dirs = classes.iter().filter(|&&c| c == Class::Path).count();
            if n_path_dirs != usize::from(prev.is_some()) + usize::from(next.is_some()) {
                self.poisoned = true;
                return Ok(None);
            }

            match self.nodes[u].kind {
                Kind::Leaf(_) => unreachable!("leaves are never path nodes"),
                Kind::P => {
                    let f: Vec<Dir> = dirs
                        .iter()
                        .zip(&classes)
                        .filter(|&(_, &c)| c == Class::Full)
                        .map(|(&d, _)| d)
                        .collect();
                    let e: Vec<Dir> = dirs
                        .iter()
                        .zip(&classes)
                        .filter(|&(_, &c)| c == Class::Empty)
                        .map(|(&d, _)| d)
                        .collect();
                    if !f.is_empty() {
                        fulls_fwd.push(if f.len() == 1 { Piece::One(f[0]) } else { Piece::Group(f) });
                    }
                    if !e.is_empty() {
                        empties_bwd.push(if e.len() == 1 { Piece::One(e[0]) } else { Piece::Group(e) });
                    }
                }
                Kind::C => {
                    let m = dirs.len();
                    let is_path_dir = |idx: usize, who: Option<usize>| -> bool {
                        classes[idx] == Class::Path
                            && match dirs[idx] {
                                Dir::Child(c) => Some(c) == who,
                                Dir::Parent => who == Some(self.nodes[u].parent),
                            }
                    };
                    let check_arc = |from: usize, to: usize, want: Class| -> Option<Vec<Dir>> {
                        let mut out = Vec::new();
                        let mut j = (from + 1) % m;
                        while j != to {
                            if classes[j] != want {
                                return None;
                            }
                            out.push(dirs[j]);
                            j = (j + 1) % m;
                        }
                        Some(out)
                    };
                    match (prev, next) {
                        (Some(p), Some(q)) => {
                            let pin = (0..m).find(|&j| is_path_dir(j, Some(p))).unwrap();
                            let pout = (0..m).find(|&j| is_path_dir(j, Some(q))).unwrap();
                            if let (Some(farc), Some(earc)) =
                                (check_arc(pin, pout, Class::Full), check_arc(pout, pin, Class::Empty))
                            {
                                if !farc.is_empty() {
                                    fulls_fwd.push(Piece::Arc(farc));
                                }
                                if !earc.is_empty() {
                                    empties_bwd.push(Piece::Arc(earc));
                                }
                            } else if let (Some(farc), Some(earc)) =
                                (check_arc(pout, pin, Class::Full), check_arc(pin, pout, Class::Empty))
                            {
                                if !farc.is_empty() {
                                    fulls_fwd.push(Piece::Arc(farc.into_iter().rev().collect()));
                                }
                                if !earc.is_empty() {
                                    empties_bwd.push(Piece::Arc(earc.into_iter().rev().collect()));
                                }
                            } else {
                                self.poisoned = true;
                                return Ok(None);
                            }
                        }
                        (p, q) => {
                            let other = p.or(q).unwrap();
                            let pin = (0..m).find(|&j| is_path_dir(j, Some(other))).unwrap();
                            // moving away from the path dir: fulls first in
                            // one of the two reading directions
                            let read = |rev: bool| -> Option<(Vec<Dir>, Vec<Dir>)> {
                                let mut fulls = Vec::new();
                                let mut empties = Vec::new();
                                let mut phase_full = true;
                                for step in 1..m {
                                    let j = if rev { (pin + m - step) % m } else { (pin + step) % m };
                                    match classes[j] {
                                        Class::Full if phase_full => fulls.push(dirs[j]),
                                        Class::Empty => {
                                            phase_full = false;
                                            empties.push(dirs[j]);
                                        }
                                        _ => return None,
                                    }
                                }
                                Some((fulls, empties))
                            };
                            match read(false).or_else(|| read(true)) {
                                Some((farc, earc)) => {
                                    // The boundary walk sweeps a far endpoint
                                    // fulls-first in the reading direction; a
                                    // start endpoint is swept on the way back,
                                    // so both arcs flip.
                                    if prev.is_none() {
                                        if !farc.is_empty() {
                                            fulls_fwd.push(Piece::Arc(farc.iter().rev().copied().collect()));
                                        }
                                        if !earc.is_empty() {
                                            empties_bwd.push(Piece::Arc(earc.iter().rev().copied().collect()));
                                        }
                                    } else {
                                        if !farc.is_empty() {
                                            fulls_fwd.push(Piece::Arc(farc));
                                        }
                                        if !earc.is_empty() {
                                            empties_bwd.push(Piece::Arc(earc));
                                        }
                                    }
                                }
                                None => {
                                    self.poisoned = true;
                                    return Ok(None);
                                }
                            }
                        }
                    }
                }
            }
        }

        // Assemble the central C-node: fulls forward, then empties backward.
        let mut cyc: Vec<(Piece, bool)> = Vec::new();
        for p in fulls_fwd {
            cyc.push((p, true));
        }
        for p in empties_bwd.into_iter().rev() {
            cyc.push((p, false));
        }

        // Find the apex (the path node whose parent is off-path), before
        // dismantling anything.
        let root_on_path = path.iter().any(|&u| u == self.root);
        let mut apex_parent = None;
        let mut apex_pos = None;
        if !root_on_path {
            for &u in path {
                let p = self.nodes[u].parent;
                if !in_path.contains(&p) {
                    apex_parent = Some(p);
                    apex_pos = self.nodes[p].children.iter().position(|&c| c == u);
                }
            }
        }

        let center = self.push_node(Kind::C, NONE);
        let mut child_list: Vec<(usize, bool)> = Vec::new();
        let mut gap_at: Option<usize> = None;
        let mut gap_side = false;
        // Sibling dirs of the parent gap inside a split P-node; they form a
        // fresh P-node sitting above the center.
        let mut upper_group: Vec<usize> = Vec::new();
        for (piece, side) in cyc {
            match piece {
                Piece::One(Dir::Child(c)) => child_list.push((c, side)),
                Piece::One(Dir::Parent) => {
                    gap_at = Some(child_list.len());
                    gap_side = side;
                }
                Piece::Arc(ds) => {
                    for d in ds {
                        match d {
                            Dir::Child(c) => child_list.push((c, side)),
                            Dir::Parent => {
                                gap_at = Some(child_list.len());
                                gap_side = side;
                            }
                        }
                    }
                }
                Piece::Group(ds) => {
                    let mut rest = Vec::new();
                    let mut has_parent = false;
                    for d in ds {
                        match d {
                            Dir::Child(c) => rest.push(c),
                            Dir::Parent => has_parent = true,
                        }
                    }
                    if has_parent {
                        gap_at = Some(child_list.len());
                        gap_side = side;
                        upper_group = rest;
                    } else if rest.len() == 1 {
                        child_list.push((rest[0], side));
                    } else if !rest.is_empty() {
                        let g = self.push_node(Kind::P, NONE);
                        for c in rest {
                            self.nodes[g].children.push(c);
                        }
                        child_list.push((g, side));
                    }
                }
            }
        }

        // Rotate so the parent gap sits at the end of the child list.
        if let Some(g) = gap_at {
            let len = child_list.len().max(1);
            child_list.rotate_left(g % len);
        }
        for &(c, _) in &child_list {
            self.nodes[c].parent = center;
            // grouped P-nodes adopt their children here
            let grand = self.nodes[c].children.clone();
            for gc in grand {
                self.nodes[gc].parent = c;
            }
        }
        self.nodes[center].children = child_list.iter().map(|&(c, _)| c).collect();

        for &u in path {
            self.nodes[u].alive = false;
        }
        let top = if upper_group.is_empty() {
            center
        } else {
            // remnant of a split P-node on the parent side
            let g = self.push_node(Kind::P, NONE);
            for &c in &upper_group {
                self.nodes[c].parent = g;
            }
            self.nodes[g].children = upper_group.clone();
            self.nodes[g].children.push(center);
            self.nodes[center].parent = g;
            g
        };
        if root_on_path || apex_parent.is_none() {
            self.nodes[top].parent = NONE;
            for &u in path {
                self.nodes[u].parent = top;
            }
            self.root = top;
        } else {
            let p = apex_parent.unwrap();
            self.nodes[top].parent = p;
            self.nodes[p].children[apex_pos.unwrap()] = top;
            for &u in path {
                self.nodes[u].parent = top;
            }
        }

        self.recount_subtree(top);
        if top != self.root {
            self.recount_up(self.nodes[top].parent);
        }
        self.normalize_at(center);
        if self.nodes[top].alive {
            self.normalize_at(top);
        }

        // Locate the block among the (possibly normalized) center children.
        let live_center = self.live_alias(center);
        if matches!(self.nodes[live_center].kind, Kind::Leaf(_)) {
            return Ok(Some(Block::Subtree(live_center)));
        }
        let fullset: HashSet<usize> = child_list
            .iter()
            .filter(|&&(_, side)| side)
            .map(|&(c, _)| self.live_alias(c))
            .collect();
        let kids = self.nodes[live_center].children.clone();
        let flags: Vec<bool> = kids.iter().map(|c| fullset.contains(c)).collect();
        let gap_on_full_side = gap_at.is_some() && gap_side;
        let block = if gap_on_full_side && live_center != self.root {
            linear_run(&flags, false).map(|(start, len)| Block::ComplementCArc { node: live_center, start, len })
        } else if live_center == self.root {
            cyclic_run(&flags, true, flags.len()).map(|(start, len)| Block::CArc { node: live_center, start, len })
        } else {
            linear_run(&flags, true).map(|(start, len)| Block::CArc { node: live_center, start, len })
        };
        match block {
            Some(b) => {
                self.assert_consistent();
                Ok(Some(b))
            }
            None => {
                debug_assert!(false, "block must be contiguous after a successful split");
                self.poisoned = true;
                Ok(None)
            }
        }
    }

    /// Follows splice aliases of dead nodes to the living node standing in
    /// their place.
    fn live_alias(&self, u: usize) -> usize {
        let mut u = u;
        while !self.nodes[u].alive {
            u = self.nodes[u].parent;
        }
        u
    }

    // ------------------------------------------------------------------
    // Structure maintenance
    // ------------------------------------------------------------------

    fn detach_child(&mut self, parent: usize, child: usize) {
        let pos = self.nodes[parent].children.iter().position(|&c| c == child).expect("child present");
        self.nodes[parent].children.remove(pos);
        self.nodes[child].parent = NONE;
    }

    fn attach_child_end(&mut self, parent: usize, child: usize) {
        self.nodes[parent].children.push(child);
        self.nodes[child].parent = parent;
    }

    fn recount_subtree(&mut self, u: usize) {
        if matches!(self.nodes[u].kind, Kind::Leaf(_)) {
            return;
        }
        let kids = self.nodes[u].children.clone();
        let mut total = 0;
        for c in kids {
            self.recount_subtree(c);
            total += self.nodes[c].leaf_count;
        }
        self.nodes[u].leaf_count = total;
    }

    fn recount_up(&mut self, from: usize) {
        let mut u = from;
        loop {
            if !matches!(self.nodes[u].kind, Kind::Leaf(_)) {
                self.nodes[u].leaf_count =
                    self.nodes[u].children.iter().map(|&c| self.nodes[c].leaf_count).sum();
            }
            if u == self.root {
                break;
            }
            u = self.nodes[u].parent;
        }
    }

    /// Local normalization at `u` and upwards: drop childless internals,
    /// splice degree-2 internals, demote degree-3 C-nodes to P.
    fn normalize_at(&mut self, u: usize) {
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            if !self.nodes[x].alive || matches!(self.nodes[x].kind, Kind::Leaf(_)) {
                continue;
            }
            if self.nodes[x].children.is_empty() {
                let p = self.nodes[x].parent;
                self.nodes[x].alive = false;
                if p != NONE {
                    let pos = self.nodes[p].children.iter().position(|&c| c == x).unwrap();
                    self.nodes[p].children.remove(pos);
                    self.nodes[x].parent = p;
                    stack.push(p);
                } else {
                    // empty tree: keep a P root for well-formedness
                    self.nodes[x].alive = true;
                }
                continue;
            }
            if x == self.root {
                if self.nodes[x].children.len() == 1 {
                    let c = self.nodes[x].children[0];
                    self.nodes[x].alive = false;
                    self.nodes[x].parent = c;
                    self.nodes[c].parent = NONE;
                    self.root = c;
                    stack.push(c);
                    continue;
                }
                if self.nodes[x].children.len() == 2 {
                    let a = self.nodes[x].children[0];
                    let b = self.nodes[x].children[1];
                    let (nr, other) =
                        if !matches!(self.nodes[a].kind, Kind::Leaf(_)) { (a, b) } else { (b, a) };
                    if !matches!(self.nodes[nr].kind, Kind::Leaf(_)) {
                        // splice the degree-2 root; the old parent gap of the
                        // new root closes with the other child
                        self.nodes[x].alive = false;
                        self.nodes[x].parent = nr;
                        self.nodes[nr].parent = NONE;
                        self.nodes[nr].children.push(other);
                        self.nodes[other].parent = nr;
                        self.nodes[nr].leaf_count += self.nodes[other].leaf_count;
                        self.root = nr;
                        stack.push(nr);
                        continue;
                    }
                }
            } else if self.unrooted_degree(x) == 2 {
                let c = self.nodes[x].children[0];
                let p = self.nodes[x].parent;
                let pos = self.nodes[p].children.iter().position(|&k| k == x).unwrap();
                self.nodes[p].children[pos] = c;
                self.nodes[c].parent = p;
                self.nodes[x].alive = false;
                self.nodes[x].parent = c;
                stack.push(p);
                continue;
            }
            if matches!(self.nodes[x].kind, Kind::C) && self.unrooted_degree(x) <= 3 {
                self.nodes[x].kind = Kind::P;
            }
        }
    }

    // ------------------------------------------------------------------
    // Block replacement (planarity-test support)
    // ------------------------------------------------------------------

    /// Replaces the consecutive set located by `block` with fresh leaves
    /// hanging off a single P-node (or a lone leaf); the internal structure
    /// of the replaced set is discarded.
    pub fn replace_block(&mut self, block: &Block, new_labels: &[Label]) {
        debug_assert!(!self.poisoned);
        match *block {
            Block::Whole => {
                *self = PcTree::new_universal(new_labels);
            }
            Block::Subtree(u) => {
                let u = self.live_alias(u);
                if u == self.root {
                    *self = PcTree::new_universal(new_labels);
                    return;
                }
                let p = self.nodes[u].parent;
                let pos = self.nodes[p].children.iter().position(|&c| c == u).unwrap();
                self.drop_subtree(u);
                let nb = self.make_block_node(new_labels);
                self.nodes[p].children[pos] = nb;
                self.nodes[nb].parent = p;
                self.nodes[u].parent = nb;
                self.recount_up(p);
                self.normalize_at(p);
            }
            Block::ComplementSubtree(z) => {
                let z = self.live_alias(z);
                self.detach_for_reroot(z);
                let keep = self.collect_subtree(z);
                for i in 0..self.nodes.len() {
                    if self.nodes[i].alive && !keep.contains(&i) {
                        self.nodes[i].alive = false;
                        self.nodes[i].parent = z;
                    }
                }
                self.prune_leaf_map();
                match self.nodes[z].kind {
                    Kind::Leaf(_) => {
                        let nb = self.make_block_node(new_labels);
                        let root = self.push_node(Kind::P, NONE);
                        self.nodes[z].parent = root;
                        self.nodes[nb].parent = root;
                        self.nodes[root].children = vec![z, nb];
                        self.root = root;
                    }
                    Kind::P | Kind::C => {
                        // z becomes the root; appending the block at the end
                        // of the child list puts it exactly in z's old
                        // parent gap
                        let nb = self.make_block_node(new_labels);
                        self.nodes[z].parent = NONE;
                        self.root = z;
                        self.attach_child_end(z, nb);
                    }
                }
                self.recount_subtree(self.root);
                self.normalize_at(self.root);
            }
            Block::CArc { node, start, len } => {
                let node = self.live_alias(node);
                let m = self.nodes[node].children.len();
                let arc: Vec<usize> = (0..len).map(|i| self.nodes[node].children[(start + i) % m]).collect();
                for &c in &arc {
                    self.drop_subtree(c);
                }
                let nb = self.make_block_node(new_labels);
                let mut kids: Vec<usize> = Vec::with_capacity(m - len + 1);
                kids.push(nb);
                let mut i = (start + len) % m;
                while i != start % m {
                    kids.push(self.nodes[node].children[i]);
                    i = (i + 1) % m;
                }
                // `kids` now reads (block, successors of the arc ...); this
                // preserves the cyclic order with the block in the arc's gap.
                self.nodes[node].children = kids;
                self.nodes[nb].parent = node;
                for &c in &arc {
                    self.nodes[c].parent = nb;
                }
                self.recount_up(node);
                self.normalize_at(node);
            }
            Block::ComplementCArc { node, start, len } => {
                let node = self.live_alias(node);
                let m = self.nodes[node].children.len();
                let keep: Vec<usize> = (0..len).map(|i| self.nodes[node].children[(start + i) % m]).collect();
                let drop: Vec<usize> = self.nodes[node]
                    .children
                    .clone()
                    .into_iter()
                    .filter(|c| !keep.contains(c))
                    .collect();
                for c in drop {
                    self.drop_subtree(c);
                }
                self.detach_for_reroot(node);
                let keepset = self.collect_subtree_with_children(node, &keep);
                for i in 0..self.nodes.len() {
                    if self.nodes[i].alive && !keepset.contains(&i) {
                        self.nodes[i].alive = false;
                        self.nodes[i].parent = node;
                    }
                }
                self.prune_leaf_map();
                let nb = self.make_block_node(new_labels);
                self.nodes[node].children = keep;
                self.nodes[node].parent = NONE;
                self.root = node;
                self.attach_child_end(node, nb);
                self.recount_subtree(self.root);
                self.normalize_at(self.root);
            }
        }
        self.assert_consistent();
    }

    fn detach_for_reroot(&mut self, z: usize) {
        if z != self.root {
            let p = self.nodes[z].parent;
            if let Some(pos) = self.nodes[p].children.iter().position(|&c| c == z) {
                self.nodes[p].children.remove(pos);
            }
        }
    }

    fn collect_subtree(&self, u: usize) -> HashSet<usize> {
        let mut out = HashSet::new();
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            out.insert(x);
            stack.extend(self.nodes[x].children.iter().copied());
        }
        out
    }

    fn collect_subtree_with_children(&self, node: usize, keep: &[usize]) -> HashSet<usize> {
        let mut out = HashSet::new();
        out.insert(node);
        for &c in keep {
            out.extend(self.collect_subtree(c));
        }
        out
    }

    fn drop_subtree(&mut self, u: usize) {
        let nodes = self.collect_subtree(u);
        let p = self.nodes[u].parent;
        for x in nodes {
            self.nodes[x].alive = false;
            if let Kind::Leaf(l) = self.nodes[x].kind {
                self.leaf_node.remove(&l);
            }
            self.nodes[x].parent = p;
        }
    }

    fn prune_leaf_map(&mut self) {
        let dead: Vec<Label> = self
            .leaf_node
            .iter()
            .filter(|&(_, &idx)| !self.nodes[idx].alive)
            .map(|(&l, _)| l)
            .collect();
        for l in dead {
            self.leaf_node.remove(&l);
        }
    }

    fn make_block_node(&mut self, labels: &[Label]) -> usize {
        if labels.len() == 1 {
            return self.push_node(Kind::Leaf(labels[0]), NONE);
        }
        let p = self.push_node(Kind::P, NONE);
        for &l in labels {
            let leaf = self.push_node(Kind::Leaf(l), p);
            self.nodes[p].children.push(leaf);
        }
        self.nodes[p].leaf_count = labels.len();
        p
    }

    fn assert_consistent(&self) {
        #[cfg(debug_assertions)]
        {
            let mut seen = HashSet::new();
            self.collect_leaves_check(self.root, &mut seen);
            assert_eq!(seen.len(), self.nodes[self.root].leaf_count);
            for (&l, &idx) in &self.leaf_node {
                assert!(self.nodes[idx].alive, "leaf map points to a dead node for {l}");
            }
        }
    }

    #[cfg(debug_assertions)]
    fn collect_leaves_check(&self, u: usize, seen: &mut HashSet<Label>) {
        assert!(self.nodes[u].alive, "dead node reachable from root");
        match self.nodes[u].kind {
            Kind::Leaf(l) => {
                seen.insert(l);
            }
            _ => {
                for &c in &self.nodes[u].children {
                    assert_eq!(self.nodes[c].parent, u, "parent link broken");
                    self.collect_leaves_check(c, seen);
                }
            }
        }
    }

    // ------------------------------------------------------------------
    // Construction from explicit structure & intersection
    // ------------------------------------------------------------------

    /// Builds a tree from a nested description, normalizing it.
    pub fn from_shape(shape: &Shape) -> Self {
        let mut t = PcTree { nodes: Vec::new(), root: NONE, leaf_node: HashMap::new(), poisoned: false };
        let root = t.build_shape(shape);
        t.root = root;
        t.recount_subtree(root);
        t.normalize_all();
        t
    }

    fn normalize_all(&mut self) {
        // bottom-up over live internal nodes
        let mut order: Vec<usize> = Vec::new();
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            order.push(u);
            stack.extend(self.nodes[u].children.iter().copied());
        }
        for &u in order.iter().rev() {
            if self.nodes[u].alive {
                self.normalize_at(u);
            }
        }
    }

    fn build_shape(&mut self, shape: &Shape) -> usize {
        match shape {
            Shape::Leaf(l) => self.push_node(Kind::Leaf(*l), NONE),
            Shape::P(kids) | Shape::C(kids) => {
                let kind = if matches!(shape, Shape::P(_)) { Kind::P } else { Kind::C };
                let u = self.push_node(kind, NONE);
                for k in kids {
                    let c = self.build_shape(k);
                    self.nodes[c].parent = u;
                    self.nodes[u].children.push(c);
                }
                u
            }
        }
    }

    /// Intersection: a tree admitting exactly the cyclic orders admissible in
    /// both trees, matching `other`'s leaves to ours through `corr`
    /// (other-label -> self-label). `None` when the intersection is empty.
    pub fn intersect(&self, other: &PcTree, corr: &HashMap<Label, Label>) -> Result<Option<PcTree>, PcError> {
        if self.n_leaves() != other.n_leaves() {
            return Err(PcError::LeafMismatch);
        }
        let mut out = self.clone();
        let n = out.n_leaves();
        // One consecutivity constraint per internal edge of `other`, plus
        // adjacent-direction constraints pinning each C-node's cyclic order.
        let mut sets: Vec<Vec<Label>> = Vec::new();
        let all: Vec<Label> = other.leaves();
        for (i, node) in other.nodes.iter().enumerate() {
            if !node.alive || matches!(node.kind, Kind::Leaf(_)) {
                continue;
            }
            let mut dir_sets: Vec<Vec<Label>> = Vec::new();
            let mut below: HashSet<Label> = HashSet::new();
            for &c in &node.children {
                let mut ls = Vec::new();
                other.collect_leaves(c, &mut ls);
                below.extend(ls.iter().copied());
                dir_sets.push(ls);
            }
            if i != other.root {
                sets.push(below.iter().copied().collect());
                let up: Vec<Label> = all.iter().copied().filter(|l| !below.contains(l)).collect();
                dir_sets.push(up);
            }
            if matches!(node.kind, Kind::C) && dir_sets.len() >= 4 {
                let m = dir_sets.len();
                for j in 0..m {
                    let mut u: Vec<Label> = dir_sets[j].clone();
                    u.extend(dir_sets[(j + 1) % m].iter().copied());
                    sets.push(u);
                }
            }
        }
        for set in sets {
            if set.len() <= 1 || set.len() >= n {
                continue;
            }
            let mapped: Vec<Label> = set.iter().map(|l| corr[l]).collect();
            if !out.restrict(&mapped)? {
                return Ok(None);
            }
        }
        Ok(Some(out))
    }
}

/// Nested construction helper mirroring the debug text form.
#[derive(Clone, Debug)]
pub enum Shape {
    Leaf(Label),
    P(Vec<Shape>),
    C(Vec<Shape>),
}

/// Read-only structural view for consumers that mirror the tree into other
/// structures (the solver's propagation gadget).
#[derive(Clone, Debug)]
pub enum NodeKind {
    Leaf(Label),
    P,
    C,
}

#[derive(Clone, Debug)]
pub struct NodeView {
    pub id: usize,
    pub alive: bool,
    pub kind: NodeKind,
    /// Child ids in stored order (cyclic for the root C-node, linear with the
    /// parent closing the cycle otherwise).
    pub children: Vec<usize>,
    pub parent: Option<usize>,
}

impl PcTree {
    /// Root id and views of all live nodes, indexable by id.
    pub fn view(&self) -> (usize, Vec<NodeView>) {
        let views: Vec<NodeView> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| NodeView {
                id: i,
                alive: n.alive,
                kind: match n.kind {
                    Kind::Leaf(l) => NodeKind::Leaf(l),
                    Kind::P => NodeKind::P,
                    Kind::C => NodeKind::C,
                },
                children: if n.alive { n.children.clone() } else { Vec::new() },
                parent: if n.alive && n.parent != NONE && i != self.root {
                    Some(n.parent)
                } else {
                    None
                },
            })
            .collect();
        (self.root, views)
    }
}

impl fmt::Display for PcTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &PcTree, u: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match &t.nodes[u].kind {
                Kind::Leaf(l) => write!(f, "{l}"),
                Kind::P => {
                    write!(f, "(")?;
                    for (i, &c) in t.nodes[u].children.iter().enumerate() {
                        if i > 0 {
                            write!(f, " ")?;
                        }
                        go(t, c, f)?;
                    }
                    write!(f, ")")
                }
                Kind::C => {
                    write!(f, "[")?;
                    for (i, &c) in t.nodes[u].children.iter().enumerate() {
                        if i > 0 {
                            write!(f, " ")?;
                        }
                        go(t, c, f)?;
                    }
                    write!(f, "]")
                }
            }
        }
        go(self, self.root, f)
    }
}

impl fmt::Debug for PcTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PcTree({self})")
    }
}

/// `Some((start, len))` if the `want` values form one contiguous cyclic run
/// (wraparound allowed), else None. All-`want` and empty inputs succeed.
pub(crate) fn cyclic_run(flags: &[bool], want: bool, m: usize) -> Option<(usize, usize)> {
    let total = flags.iter().filter(|&&b| b == want).count();
    if total == 0 || total == m {
        return Some((0, total));
    }
    let mut start = None;
    for i in 0..m {
        if flags[i] == want && flags[(i + m - 1) % m] != want {
            if start.is_some() {
                return None;
            }
            start = Some(i);
        }
    }
    let s = start?;
    for j in 0..total {
        if flags[(s + j) % m] != want {
            return None;
        }
    }
    Some((s, total))
}

/// One contiguous run without wraparound.
fn linear_run(flags: &[bool], want: bool) -> Option<(usize, usize)> {
    let total = flags.iter().filter(|&&b| b == want).count();
    let first = flags.iter().position(|&b| b == want)?;
    for j in 0..total {
        if first + j >= flags.len() || flags[first + j] != want {
            return None;
        }
    }
    Some((first, total))
}

fn permute<T: Clone>(items: &mut Vec<T>, k: usize, f: &mut impl FnMut(&[T])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Rotates a cyclic sequence so its minimum element leads.
pub fn canonical_cycle(order: &[Label]) -> Vec<Label> {
    if order.is_empty() {
        return Vec::new();
    }
    let pos = order.iter().enumerate().min_by_key(|&(_, l)| l).map(|(i, _)| i).unwrap();
    (0..order.len()).map(|k| order[(pos + k) % order.len()]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_orders(t: &PcTree) -> BTreeSet<Vec<Label>> {
        t.admissible_orders()
    }

    fn brute_restrict(orders: &BTreeSet<Vec<Label>>, s: &[Label]) -> BTreeSet<Vec<Label>> {
        let sset: HashSet<Label> = s.iter().copied().collect();
        orders
            .iter()
            .filter(|o| {
                let n = o.len();
                if sset.is_empty() || sset.len() >= n {
                    return true;
                }
                let flags: Vec<bool> = o.iter().map(|l| sset.contains(l)).collect();
                cyclic_run(&flags, true, n).is_some()
            })
            .cloned()
            .collect()
    }

    #[test]
    fn universal_counts() {
        let t = PcTree::new_universal(&[0, 1, 2, 3, 4]);
        assert_eq!(t.count_admissible(), 24);
        assert_eq!(t.admissible_orders().len(), 24);
    }

    #[test]
    fn single_c_node_counts() {
        let t = PcTree::from_shape(&Shape::C(vec![
            Shape::Leaf(0),
            Shape::Leaf(1),
            Shape::Leaf(2),
            Shape::Leaf(3),
        ]));
        assert_eq!(t.count_admissible(), 2);
        let orders = t.admissible_orders();
        assert_eq!(orders.len(), 2);
        assert!(orders.contains(&vec![0, 1, 2, 3]));
        assert!(orders.contains(&vec![0, 3, 2, 1]));
    }

    #[test]
    fn restrict_pair_on_p5() {
        let mut t = PcTree::new_universal(&[1, 2, 3, 4, 5]);
        assert!(t.restrict(&[1, 2]).unwrap());
        assert_eq!(t.count_admissible(), 12);
        assert_eq!(t.admissible_orders().len(), 12);
    }

    #[test]
    fn restrict_sequence_infeasible() {
        let mut t = PcTree::new_universal(&[1, 2, 3, 4, 5]);
        assert!(t.restrict(&[1, 2]).unwrap());
        assert!(t.restrict(&[2, 3]).unwrap());
        assert!(!t.restrict(&[1, 3]).unwrap());
        assert!(t.is_poisoned());
    }

    #[test]
    fn restrict_trivial_cases() {
        let mut t = PcTree::new_universal(&[1, 2, 3, 4]);
        assert!(t.restrict(&[1, 2, 3, 4]).unwrap());
        assert!(t.restrict(&[2]).unwrap());
        assert!(t.restrict(&[1, 3, 4]).unwrap());
        assert_eq!(t.count_admissible(), 6);
    }

    #[test]
    fn restriction_matches_brute_force_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for n in 4..=7usize {
            for _case in 0..60 {
                let labels: Vec<Label> = (0..n as u32).collect();
                let mut t = PcTree::new_universal(&labels);
                let mut expected = brute_orders(&t);
                for _step in 0..4 {
                    let size = rng.gen_range(2..=(n - 2));
                    let mut s = labels.clone();
                    for i in 0..size {
                        let j = rng.gen_range(i..n);
                        s.swap(i, j);
                    }
                    let s = &s[0..size];
                    let want = brute_restrict(&expected, s);
                    let got_ok = t.restrict(s).unwrap();
                    assert_eq!(got_ok, !want.is_empty(), "feasibility mismatch for {s:?} on {t}");
                    if !got_ok {
                        break;
                    }
                    expected = want;
                    let got = brute_orders(&t);
                    assert_eq!(got, expected, "order sets differ after {s:?} on {t}");
                    assert_eq!(t.count_admissible() as usize, got.len(), "count mismatch on {t}");
                }
            }
        }
    }

    #[test]
    fn restriction_on_structured_trees() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let shapes: Vec<Shape> = vec![
            Shape::P(vec![
                Shape::C(vec![Shape::Leaf(0), Shape::Leaf(1), Shape::Leaf(2)]),
                Shape::Leaf(3),
                Shape::P(vec![Shape::Leaf(4), Shape::Leaf(5)]),
            ]),
            Shape::C(vec![
                Shape::Leaf(0),
                Shape::P(vec![Shape::Leaf(1), Shape::Leaf(2), Shape::Leaf(3)]),
                Shape::Leaf(4),
                Shape::C(vec![Shape::Leaf(5), Shape::Leaf(6)]),
            ]),
            Shape::C(vec![
                Shape::C(vec![Shape::Leaf(0), Shape::Leaf(1)]),
                Shape::Leaf(2),
                Shape::Leaf(3),
                Shape::C(vec![Shape::Leaf(4), Shape::Leaf(5), Shape::Leaf(6)]),
            ]),
            Shape::P(vec![
                Shape::C(vec![
                    Shape::Leaf(0),
                    Shape::Leaf(1),
                    Shape::P(vec![Shape::Leaf(2), Shape::Leaf(3)]),
                    Shape::Leaf(4),
                ]),
                Shape::Leaf(5),
                Shape::Leaf(6),
            ]),
        ];
        for shape in &shapes {
            for _case in 0..150 {
                let mut t = PcTree::from_shape(shape);
                let labels = t.leaves();
                let n = labels.len();
                let mut expected = brute_orders(&t);
                for _step in 0..3 {
                    let size = rng.gen_range(2..=(n - 2));
                    let mut s = labels.clone();
                    for i in 0..size {
                        let j = rng.gen_range(i..n);
                        s.swap(i, j);
                    }
                    let s = &s[0..size];
                    let want = brute_restrict(&expected, s);
                    let got_ok = t.restrict(s).unwrap();
                    assert_eq!(got_ok, !want.is_empty(), "feasibility mismatch for {s:?} on {t}");
                    if !got_ok {
                        break;
                    }
                    expected = want;
                    assert_eq!(brute_orders(&t), expected, "order sets differ after {s:?} on {t}");
                }
            }
        }
    }

    #[test]
    fn count_monotone_under_restriction() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _case in 0..50 {
            let n = rng.gen_range(4..=7);
            let labels: Vec<Label> = (0..n as u32).collect();
            let mut t = PcTree::new_universal(&labels);
            let mut last = t.count_admissible();
            for _ in 0..5 {
                let size = rng.gen_range(2..=(n - 2));
                let mut s = labels.clone();
                for i in 0..size {
                    let j = rng.gen_range(i..n);
                    s.swap(i, j);
                }
                if !t.restrict(&s[0..size]).unwrap() {
                    break;
                }
                let now = t.count_admissible();
                assert!(now <= last);
                last = now;
            }
        }
    }

    #[test]
    fn replace_block_after_restrict() {
        let mut t = PcTree::new_universal(&[1, 2, 3, 4]);
        let block = t.restrict_block(&[1, 2]).unwrap().unwrap();
        t.replace_block(&block, &[8, 9, 10]);
        let mut ls = t.leaves();
        ls.sort_unstable();
        assert_eq!(ls, vec![3, 4, 8, 9, 10]);
        for o in t.admissible_orders() {
            let flags: Vec<bool> = o.iter().map(|l| *l >= 8).collect();
            assert!(cyclic_run(&flags, true, o.len()).is_some());
        }
    }

    #[test]
    fn intersect_examples() {
        let t = PcTree::from_shape(&Shape::C(vec![
            Shape::Leaf(0),
            Shape::Leaf(1),
            Shape::Leaf(2),
            Shape::Leaf(3),
        ]));
        let id: HashMap<Label, Label> = (0..4).map(|i| (i, i)).collect();
        let r = t.intersect(&t, &id).unwrap().unwrap();
        assert_eq!(r.admissible_orders(), t.admissible_orders());

        let p = PcTree::new_universal(&[0, 1, 2, 3]);
        let r = p.intersect(&t, &id).unwrap().unwrap();
        assert_eq!(r.admissible_orders(), t.admissible_orders());

        let c2 = PcTree::from_shape(&Shape::C(vec![
            Shape::Leaf(0),
            Shape::Leaf(2),
            Shape::Leaf(1),
            Shape::Leaf(3),
        ]));
        assert!(t.intersect(&c2, &id).unwrap().is_none());
    }

    #[test]
    fn intersect_commutes_on_small_trees() {
        let a = PcTree::from_shape(&Shape::P(vec![
            Shape::C(vec![Shape::Leaf(0), Shape::Leaf(1), Shape::Leaf(2), Shape::Leaf(3)]),
            Shape::Leaf(4),
            Shape::Leaf(5),
        ]));
        let b = PcTree::from_shape(&Shape::C(vec![
            Shape::Leaf(0),
            Shape::Leaf(1),
            Shape::P(vec![Shape::Leaf(2), Shape::Leaf(3), Shape::Leaf(4)]),
            Shape::Leaf(5),
        ]));
        let id: HashMap<Label, Label> = (0..6).map(|i| (i, i)).collect();
        let ab = a.intersect(&b, &id).unwrap();
        let ba = b.intersect(&a, &id).unwrap();
        let want: BTreeSet<Vec<Label>> = a
            .admissible_orders()
            .intersection(&b.admissible_orders())
            .cloned()
            .collect();
        match (ab, ba) {
            (Some(x), Some(y)) => {
                assert_eq!(x.admissible_orders(), want);
                assert_eq!(y.admissible_orders(), want);
            }
            (None, None) => assert!(want.is_empty()),
            _ => panic!("intersection disagreement"),
        }
    }

    #[test]
    fn display_forms() {
        let t = PcTree::from_shape(&Shape::P(vec![
            Shape::C(vec![Shape::Leaf(1), Shape::Leaf(2), Shape::Leaf(3), Shape::Leaf(4)]),
            Shape::Leaf(5),
            Shape::Leaf(6),
        ]));
        assert_eq!(t.to_string(), "([1 2 3 4] 5 6)");
        // a degree-2 root is spliced into canonical form
        let d = PcTree::from_shape(&Shape::P(vec![
            Shape::C(vec![Shape::Leaf(1), Shape::Leaf(2), Shape::Leaf(3), Shape::Leaf(4)]),
            Shape::Leaf(5),
        ]));
        assert_eq!(d.to_string(), "[1 2 3 4 5]");
    }
}
