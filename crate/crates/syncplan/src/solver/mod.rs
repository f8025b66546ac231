//! The Synchronized Planarity engine.
//!
//! Solving runs in three phases: reduce pipes one operation at a time, embed
//! the pipe-free instance (resolving synchronized reflections via 2-SAT),
//! then undo every operation in reverse while transporting the embedding back
//! to the input graph. Yes verdicts carry that embedding as a certificate.

pub mod instance;
pub mod ops;
pub mod reduce;
pub mod solved;
pub mod twosat;
pub mod undo;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::graph::{Inc, MultiGraph, VertexId};
use crate::oracle::line_up;

use instance::Instance;

/// External pipe description: equality convention (the bijection maps the
/// rotation of `u` onto the rotation of `v`, same cyclic direction).
#[derive(Clone, Debug)]
pub struct SpecPipe {
    pub u: VertexId,
    pub v: VertexId,
    pub bij: Vec<(Inc, Inc)>,
}

/// A problem instance as loaded from a file or built by a reduction.
#[derive(Clone, Debug, Default)]
pub struct ProblemInstance {
    pub g: MultiGraph,
    pub pipes: Vec<SpecPipe>,
}

impl ProblemInstance {
    /// Sum of pipe degrees (the paper's size parameter d).
    pub fn pipe_degree_total(&self) -> usize {
        self.pipes.iter().map(|p| p.bij.len()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PipeOrdering {
    Desc,
    Asc,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContractPref {
    Mixed,
    First,
    Last,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverConfig {
    pub ordering: PipeOrdering,
    pub contract: ContractPref,
    pub join_blocks: bool,
    pub intersect_trees: bool,
    pub batch_spqr: bool,
    pub seed: u64,
    #[serde(skip)]
    pub budget: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            ordering: PipeOrdering::Desc,
            contract: ContractPref::Mixed,
            join_blocks: false,
            intersect_trees: false,
            batch_spqr: false,
            seed: 0,
            budget: None,
        }
    }
}

impl SolverConfig {
    /// Parses a variant name: base "d", "a", "r", "d+c", "d-c", then flag
    /// letters b/i/s, e.g. "d", "s bi", "d-c b".
    pub fn parse_variant(s: &str) -> Result<Self, String> {
        let mut cfg = SolverConfig::default();
        let mut toks = s.split_whitespace();
        let base = toks.next().ok_or("empty variant")?;
        match base {
            "d" => {}
            "a" => cfg.ordering = PipeOrdering::Asc,
            "r" => cfg.ordering = PipeOrdering::Random,
            "d+c" => cfg.contract = ContractPref::First,
            "d-c" => cfg.contract = ContractPref::Last,
            "s" => cfg.batch_spqr = true,
            other => return Err(format!("unknown variant base {other:?}")),
        }
        for t in toks {
            for ch in t.chars() {
                match ch {
                    'b' => cfg.join_blocks = true,
                    'i' => cfg.intersect_trees = true,
                    's' => cfg.batch_spqr = true,
                    other => return Err(format!("unknown variant flag {other:?}")),
                }
            }
        }
        Ok(cfg)
    }

    pub fn variant_name(&self) -> String {
        let base = if self.batch_spqr {
            "s".to_string()
        } else {
            match (self.ordering, self.contract) {
                (PipeOrdering::Asc, _) => "a".into(),
                (PipeOrdering::Random, _) => "r".into(),
                (PipeOrdering::Desc, ContractPref::First) => "d+c".into(),
                (PipeOrdering::Desc, ContractPref::Last) => "d-c".into(),
                (PipeOrdering::Desc, ContractPref::Mixed) => "d".into(),
            }
        };
        let mut flags = String::new();
        if self.join_blocks {
            flags.push('b');
        }
        if self.intersect_trees {
            flags.push('i');
        }
        if flags.is_empty() {
            base
        } else {
            format!("{base} {flags}")
        }
    }
}

/// The twelve studied variants.
pub const ALL_VARIANTS: [&str; 12] =
    ["d", "a", "r", "d+c", "d-c", "d b", "d i", "d bi", "s", "s b", "s i", "s bi"];

#[derive(Clone, Debug)]
pub enum Verdict {
    Yes { rotations: HashMap<VertexId, Vec<Inc>> },
    No { stage: String },
    Timeout,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Stats {
    pub total_ms: f64,
    pub make_reduced_ms: f64,
    pub solve_reduced_ms: f64,
    pub embed_ms: f64,
    pub encapsulate_count: u64,
    pub encapsulate_ms: f64,
    pub propagate_count: u64,
    pub propagate_ms: f64,
    pub simplify_count: u64,
    pub simplify_ms: f64,
    pub join_count: u64,
    pub join_ms: f64,
    pub emb_tree_count: u64,
    pub emb_tree_ms: f64,
    pub spqr_count: u64,
    pub spqr_ms: f64,
    pub undo_simplify_count: u64,
    pub undo_simplify_ms: f64,
    pub discarded_small_pipes: u64,
    pub operations: u64,
    pub max_bicon_size: usize,
    pub pipe_degree_total: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("pipe endpoints must be distinct")]
    PipeNotDistinct,
    #[error("pipe endpoint degrees differ")]
    PipeDegreeMismatch,
    #[error("vertex occurs in more than one pipe")]
    PipeOverlap,
    #[error("pipe bijection is not total")]
    PipeBijection,
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// Checks planarity (Euler per component) of the rotation system and the
/// equality line-up of every pipe: the yes-certificate test.
pub fn verify_embedding(
    prob: &ProblemInstance,
    rotations: &HashMap<VertexId, Vec<Inc>>,
) -> bool {
    let mut g = prob.g.clone();
    for v in g.vertex_ids().collect::<Vec<_>>() {
        match rotations.get(&v) {
            Some(r) => {
                let mut a = r.clone();
                let mut b = g.rotation(v).to_vec();
                a.sort_unstable();
                b.sort_unstable();
                if a != b {
                    return false; // coverage mismatch
                }
                g.set_rotation(v, r.clone());
            }
            None => return false,
        }
    }
    if !g.is_planar_embedding() {
        return false;
    }
    prob.pipes.iter().all(|p| {
        let m: HashMap<Inc, Inc> = p.bij.iter().copied().collect();
        line_up(g.rotation(p.u), g.rotation(p.v), &m)
    })
}

pub struct SolveOutcome {
    pub verdict: Verdict,
    pub stats: Stats,
}

/// Runs all three phases on a problem instance.
pub fn solve(prob: &ProblemInstance, cfg: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    let t0 = Instant::now();
    let mut stats = Stats { pipe_degree_total: prob.pipe_degree_total(), ..Default::default() };

    let mut inst = Instance::new(prob.g.clone());
    for p in &prob.pipes {
        if p.u == p.v {
            return Err(SolveError::PipeNotDistinct);
        }
        if inst.g.degree(p.u) != p.bij.len() || inst.g.degree(p.v) != p.bij.len() {
            return Err(SolveError::PipeDegreeMismatch);
        }
        if inst.pipe_of(p.u).is_some() || inst.pipe_of(p.v).is_some() {
            return Err(SolveError::PipeOverlap);
        }
        {
            let mut lhs: Vec<Inc> = p.bij.iter().map(|&(a, _)| a).collect();
            let mut rhs: Vec<Inc> = p.bij.iter().map(|&(_, b)| b).collect();
            lhs.sort_unstable();
            rhs.sort_unstable();
            let mut ru = inst.g.rotation(p.u).to_vec();
            let mut rv = inst.g.rotation(p.v).to_vec();
            ru.sort_unstable();
            rv.sort_unstable();
            if lhs != ru || rhs != rv {
                return Err(SolveError::PipeBijection);
            }
        }
        if inst.add_pipe(p.u, p.v, p.bij.clone(), false).is_none() {
            stats.discarded_small_pipes += 1;
        }
    }

    let deadline = cfg.budget.map(|b| t0 + b);
    let mut undo_log: Vec<ops::UndoOp> = Vec::new();

    let t_reduce = Instant::now();
    let outcome = reduce::make_reduced(&mut inst, cfg, &mut undo_log, &mut stats, deadline);
    stats.make_reduced_ms = t_reduce.elapsed().as_secs_f64() * 1e3;
    match outcome {
        reduce::ReduceOutcome::Reduced => {}
        reduce::ReduceOutcome::Infeasible(stage) => {
            stats.total_ms = t0.elapsed().as_secs_f64() * 1e3;
            return Ok(SolveOutcome { verdict: Verdict::No { stage }, stats });
        }
        reduce::ReduceOutcome::Timeout => {
            stats.total_ms = t0.elapsed().as_secs_f64() * 1e3;
            return Ok(SolveOutcome { verdict: Verdict::Timeout, stats });
        }
    }

    let t_solve = Instant::now();
    let solved = solved::solve_reduced(&mut inst, &mut undo_log, &mut stats);
    stats.solve_reduced_ms = t_solve.elapsed().as_secs_f64() * 1e3;
    if !solved {
        stats.total_ms = t0.elapsed().as_secs_f64() * 1e3;
        return Ok(SolveOutcome { verdict: Verdict::No { stage: "solve-reduced".into() }, stats });
    }

    let t_embed = Instant::now();
    undo::undo_all(&mut inst, &mut undo_log, &mut stats);
    stats.embed_ms = t_embed.elapsed().as_secs_f64() * 1e3;

    let rotations: HashMap<VertexId, Vec<Inc>> =
        inst.g.vertex_ids().map(|v| (v, inst.g.rotation(v).to_vec())).collect();
    debug_assert!(
        verify_embedding(prob, &rotations),
        "yes-certificate failed verification"
    );
    stats.total_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok(SolveOutcome { verdict: Verdict::Yes { rotations }, stats })
}
